//! Deterministic sample points.

use num_complex::Complex64;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// `n` points spread over the annulus `r_min < |w| < r_max` on a golden-angle
/// spiral, skipping points within `clearance` of any hazard.
pub fn disc_points(n: usize, r_min: f64, r_max: f64, hazards: &[Complex64], clearance: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    let mut k = 0usize;
    while out.len() < n {
        let s = ((k as f64 + 0.5) * 0.618_033_988_749_895).fract();
        let radius = (r_min * r_min + s * (r_max * r_max - r_min * r_min)).sqrt();
        let w = Complex64::from_polar(radius, GOLDEN_ANGLE * k as f64 + 0.1);
        k += 1;
        if hazards.iter().all(|h| (w - h).norm() > clearance) {
            out.push(w);
        }
        assert!(k < 100 * n + 1000, "hazards exclude the whole sampling region");
    }
    out
}

/// `n` equally spaced angles on [-π, π) shifted by `offset` grid steps.
pub fn angles(n: usize, offset: f64) -> Vec<f64> {
    let h = std::f64::consts::TAU / n as f64;
    (0..n).map(|k| -std::f64::consts::PI + (k as f64 + offset) * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_respect_bounds_and_hazards() {
        let hz = [Complex64::new(0.3, 0.0)];
        let pts = disc_points(500, 0.1, 0.9, &hz, 0.05);
        assert_eq!(pts.len(), 500);
        for w in &pts {
            assert!(w.norm() > 0.1 - 1e-12 && w.norm() < 0.9 + 1e-12);
            assert!((w - hz[0]).norm() > 0.05);
        }
        assert_eq!(pts, disc_points(500, 0.1, 0.9, &hz, 0.05));
    }
}
