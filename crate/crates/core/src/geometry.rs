//! Curvature, convexity, univalency and width of droplet boundaries.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DropletError, Result};
use crate::families::{BoundaryTrace, DropletFamily};
use crate::numerics::{bisect_bracket, polyline_is_simple, Polyline};

type C64 = Complex64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Convexity bound of the KSV family, (3 - √5)/2.
pub fn ksv_convexity_exact() -> f64 {
    (3.0 - 5f64.sqrt()) / 2.0
}

/// Convexity bound of the two-pole family, √(6√13 - 21)/3.
pub fn twopole_convexity_exact() -> f64 {
    (6.0 * 13f64.sqrt() - 21.0).sqrt() / 3.0
}

/// Signed curvature of the boundary at `w` on the unit circle, from the
/// Schwarz function and the map.
///
/// The sign convention follows the residue of φ at 0: +1 on the circle
/// φ = 1/w and -1 on φ = -1/w. The droplet is convex iff the sign is constant.
pub fn curvature_hat(family: &DropletFamily, w: C64) -> Result<f64> {
    let d1 = family.phi_prime(w)?;
    if d1.norm() == 0.0 {
        return Err(DropletError::DegenerateBoundary { nodes: vec![] });
    }
    let d2 = family.phi_second(w)?;
    let s1 = family.schwarz_prime(w)?;
    let s2 = family.schwarz_second(w)?;
    // square-root branch: the unit tangent direction, signed by the residue of φ at 0
    let branch = -I * family.residue_sign() * w * d1 / d1.norm();
    let k = 0.5 * I * branch * (s2 / (s1 * d1) - d2 / (d1 * d1));
    if k.im.abs() > 1e-10 * k.re.abs().max(1.0) {
        return Err(DropletError::BranchAmbiguity { location: w, imaginary: k.im });
    }
    Ok(k.re)
}

/// Printed closed form of the KSV curvature at w = e^{iθ}.
pub fn ksv_curvature_closed(c: f64, theta: f64) -> f64 {
    let t = theta.cos();
    let c2 = c * c;
    let num = (4.0 * c2 * c + 4.0 * c) * t - c2 * c2 - 5.0 * c2 - 1.0;
    let den = 4.0 * c2 * t * t - (2.0 * c2 * c + 2.0 * c) * t + c2 * c2 - c2 + 1.0;
    (c2 - 1.0) * num / (den * den)
}

/// Printed closed form of the two-pole curvature at w = e^{iθ}.
pub fn twopole_curvature_closed(c: f64, theta: f64) -> f64 {
    let t = theta.cos();
    let t2 = t * t;
    let c2 = c * c;
    let c4 = c2 * c2;
    let num = 48.0 * c4 * t2 * t2 + (24.0 * c2 - 48.0 * c4 - 72.0 * c4 * c2) * t2 - 9.0 * c4 * c4
        + 36.0 * c4 * c2
        + 34.0 * c4
        - 12.0 * c2
        - 1.0;
    let den = 12.0 * c2 * t2 + 9.0 * c4 - 6.0 * c2 + 1.0;
    num / (den * den)
}

/// Finite-difference curvature of a trace, one value per trace node.
pub fn curvature_numeric(trace: &BoundaryTrace) -> Result<Vec<f64>> {
    let n = trace.len() - 1;
    if n < 1024 {
        return Err(DropletError::InvalidParameter(format!("numeric curvature needs n >= 1024, got {n}")));
    }
    let h = 2.0 * PI / n as f64;
    let z = &trace.points[..n];
    let sign = trace.family.residue_sign();
    let mut out = Vec::with_capacity(n + 1);
    let mut bad = Vec::new();
    let scale = z.iter().zip(z.iter().cycle().skip(1)).map(|(a, b)| (b - a).norm()).fold(0.0, f64::max);
    for k in 0..n {
        let prev = z[(k + n - 1) % n];
        let next = z[(k + 1) % n];
        if (next - prev).norm() <= 1e-12 * scale {
            bad.push(k);
            out.push(f64::NAN);
            continue;
        }
        let d1 = (next - prev) / (2.0 * h);
        let d2 = (next - 2.0 * z[k] + prev) / (h * h);
        out.push(-sign * (d2 * d1.conj()).im / d1.norm().powi(3));
    }
    if !bad.is_empty() {
        return Err(DropletError::DegenerateBoundary { nodes: bad });
    }
    out.push(out[0]);
    Ok(out)
}

/// Families with threshold analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    Ksv,
    TwoPole,
    MPole { m: u32 },
}

impl FamilyKind {
    pub fn at(&self, c: f64) -> DropletFamily {
        match *self {
            FamilyKind::Ksv => DropletFamily::Ksv { c },
            FamilyKind::TwoPole => DropletFamily::TwoPole { c },
            FamilyKind::MPole { m } => DropletFamily::MPole { m, c },
        }
    }

    fn convexity_bracket(&self) -> (f64, f64) {
        match *self {
            FamilyKind::Ksv => (0.1, 0.5),
            FamilyKind::TwoPole => (0.1, 0.32),
            FamilyKind::MPole { m } => (0.05, (0.9 / ((m + 1) as f64).powf(1.0 / m as f64)).min(0.55)),
        }
    }

    fn univalency_bracket(&self) -> (f64, f64) {
        match *self {
            FamilyKind::Ksv => (0.2, 0.8),
            FamilyKind::TwoPole => (0.1, 0.5),
            FamilyKind::MPole { m } => (0.2, (0.95 / ((m - 1) as f64).powf(1.0 / m as f64)).min(0.65)),
        }
    }
}

/// A threshold located by bisection, with its final bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub value: f64,
    /// Largest parameter at which the property was observed to hold.
    pub lo: f64,
    /// Smallest parameter at which it was observed to fail.
    pub hi: f64,
}

impl ThresholdEstimate {
    fn from_bracket((lo, hi): (f64, f64)) -> Self {
        Self { value: 0.5 * (lo + hi), lo, hi }
    }
}

/// Convexity from the sign of the printed curvature numerators at the
/// endpoints of t = cos θ.
pub fn convex_by_numerator(kind: FamilyKind, c: f64) -> Result<bool> {
    let c2 = c * c;
    let c4 = c2 * c2;
    match kind {
        FamilyKind::Ksv => {
            let p = |t: f64| (4.0 * c2 * c + 4.0 * c) * t - c4 - 5.0 * c2 - 1.0;
            Ok(p(1.0) < 0.0 && p(-1.0) < 0.0)
        }
        FamilyKind::TwoPole => {
            let p0 = -9.0 * c4 * c4 + 36.0 * c4 * c2 + 34.0 * c4 - 12.0 * c2 - 1.0;
            let p1 = 48.0 * c4 + (24.0 * c2 - 48.0 * c4 - 72.0 * c4 * c2) + p0;
            Ok(p0 < 0.0 && p1 < 0.0)
        }
        FamilyKind::MPole { .. } => Err(DropletError::Unsupported("no printed curvature numerator for mpole".into())),
    }
}

/// Minimum over the circle of the curvature normalized to be positive on a
/// convex droplet (curvature times the residue sign of φ at 0). Returns
/// `(min, θ)`; a 2048-point scan is refined by golden-section search.
pub fn min_curvature_scan(family: &DropletFamily) -> Result<(f64, f64)> {
    let n = 2048;
    let h = 2.0 * PI / n as f64;
    let sign = family.residue_sign();
    let kappa = |t: f64| curvature_hat(family, C64::from_polar(1.0, t)).map(|k| sign * k);
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..n {
        let t = -PI + k as f64 * h;
        let v = kappa(t)?;
        if v < best.0 {
            best = (v, t);
        }
    }
    let mut err = None;
    let (t, v) = golden_min(
        |t| {
            kappa(t).unwrap_or_else(|e| {
                err.get_or_insert(e);
                f64::NAN
            })
        },
        best.1 - h,
        best.1 + h,
        1e-12,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(if v < best.0 { (v, t) } else { best })
}

/// Minimizes a unimodal function on [a, b]; returns (argmin, min).
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.618_033_988_749_894_8;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn is_convex(kind: FamilyKind, c: f64) -> Result<bool> {
    match kind {
        FamilyKind::MPole { .. } => Ok(min_curvature_scan(&kind.at(c))?.0 >= 0.0),
        _ => convex_by_numerator(kind, c),
    }
}

pub fn convexity_threshold(kind: FamilyKind) -> Result<ThresholdEstimate> {
    let (lo, hi) = kind.convexity_bracket();
    let mut err = None;
    let bracket = bisect_bracket(
        |c| match is_convex(kind, c) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        },
        lo,
        hi,
        1e-13,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(ThresholdEstimate::from_bracket(bracket))
}

/// Resolutions at which simplicity is checked, coarse to fine.
pub const SIMPLICITY_RESOLUTIONS: [usize; 3] = [4096, 16384, 65536];
const SIMPLICITY_TOL: f64 = 1e-10;

/// True when the boundary polyline is simple at every resolution in
/// [`SIMPLICITY_RESOLUTIONS`]; inconclusive counts as not simple.
pub fn is_univalent_numerically(family: &DropletFamily) -> Result<bool> {
    for n in SIMPLICITY_RESOLUTIONS {
        let line = Polyline::closed(family.boundary_points(n)?)?;
        if !polyline_is_simple(&line, SIMPLICITY_TOL)?.is_simple() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn univalency_threshold(kind: FamilyKind) -> Result<ThresholdEstimate> {
    let (lo, hi) = kind.univalency_bracket();
    let bracket = bisect_bracket(|c| is_univalent_numerically(&kind.at(c)).unwrap_or(false), lo, hi, 1e-7)?;
    Ok(ThresholdEstimate::from_bracket(bracket))
}

/// Stages of the KSV evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    I,
    II,
    III,
}

pub fn ksv_stage(c: f64) -> Stage {
    if c < ksv_convexity_exact() {
        Stage::I
    } else if c < crate::families::KSV_UNIVALENCY {
        Stage::II
    } else {
        Stage::III
    }
}

/// cos θ of the second crossing of the line Re z = x(0) in the KSV family.
pub fn ksv_alpha(c: f64) -> f64 {
    (c.powi(4) - 2.0 * c.powi(3) + c * c - 2.0 * c + 1.0) / (2.0 * c * (c * c - 2.0 * c + 1.0))
}

pub fn ksv_x0(c: f64) -> f64 {
    (-c.powi(3) + c * c + 2.0 * c - 1.0) / (c - 1.0)
}

/// Roots a₁, a₂ of the discriminant of the KSV parabolic function.
pub fn ksv_discriminant_roots(c: f64) -> (f64, f64) {
    let a1 = -(c.powi(4) + 2.0 * c.powi(3) + c * c - 2.0 * c - 1.0) / (2.0 * c);
    let a2 = -(c.powi(4) - 2.0 * c.powi(3) + c * c + 2.0 * c - 1.0) / (2.0 * c);
    (a1, a2)
}

pub fn twopole_x_pi(c: f64) -> f64 {
    (9.0 * c * c - 1.0) / (c * c - 1.0)
}

pub fn twopole_a_star(c: f64) -> f64 {
    let c2 = c * c;
    let c4 = c2 * c2;
    (-4.0 * c + (-27.0 * c4 * c4 + 18.0 * c4 + 8.0 * c2 + 1.0).sqrt()) / (2.0 * (c2 + 1.0) * c)
}

/// Intersections of a vertical line with the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineProfile {
    pub a: f64,
    /// Crossings counted on the sampled boundary.
    pub trace_count: usize,
    /// Count predicted from the family's polynomial in cos θ.
    pub predicted_count: Option<usize>,
    pub inconclusive: bool,
}

const TANGENCY_TOL: f64 = 1e-9;

/// Polynomial in t = cos θ whose roots in [-1, 1] are the crossings of
/// Re z = a, as printed for each family.
fn crossing_polynomial(family: &DropletFamily, a: f64) -> Option<Box<dyn Fn(f64) -> f64>> {
    match *family {
        DropletFamily::Ksv { c } => Some(Box::new(move |t: f64| {
            (2.0 * c.powi(3) - 2.0 * c) * t * t + (-c.powi(4) + c * c + 2.0 * a * c + 1.0) * t - c - a * (1.0 + c * c)
        })),
        DropletFamily::TwoPole { c } => Some(Box::new(move |t: f64| {
            let c2 = c * c;
            -4.0 * c2 * t.powi(3) - 4.0 * a * c2 * t * t + (9.0 * c2 * c2 - 6.0 * c2 + 1.0) * t + a * c2 * c2 + 2.0 * a * c2 + a
        })),
        _ => None,
    }
}

pub fn vertical_line_profile(family: &DropletFamily, a: f64) -> Result<LineProfile> {
    let n = 8192;
    let xs: Vec<f64> = family.boundary_points(n)?.iter().map(|z| z.re - a).collect();
    let mut inconclusive = xs.iter().any(|x| x.abs() < TANGENCY_TOL);
    let trace_count = (0..n).filter(|&k| (xs[k] > 0.0) != (xs[(k + 1) % n] > 0.0)).count();

    let predicted_count = crossing_polynomial(family, a).map(|f| {
        let m = 20000;
        let ts: Vec<f64> = (0..=m).map(|k| -1.0 + 2.0 * k as f64 / m as f64).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        let scale = vals.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
        if vals[0].abs() < TANGENCY_TOL * scale || vals[m].abs() < TANGENCY_TOL * scale {
            inconclusive = true;
        }
        let mut roots = 0;
        for k in 0..m {
            if (vals[k] > 0.0) != (vals[k + 1] > 0.0) {
                roots += 1;
            } else if k > 0
                && (vals[k - 1] > 0.0) == (vals[k] > 0.0)
                && vals[k].abs() < vals[k - 1].abs()
                && vals[k].abs() < vals[k + 1].abs()
            {
                // local minimum of |f| without a sign change: refine to look for a tangency
                let (_, v) = golden_min(|t| f(t).abs(), ts[k - 1], ts[k + 1], 1e-14);
                if v < TANGENCY_TOL * scale {
                    inconclusive = true;
                }
            }
        }
        2 * roots
    });
    Ok(LineProfile { a, trace_count, predicted_count, inconclusive })
}

/// Width of a two-pole droplet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthReport {
    pub c: f64,
    /// 2a*, only inside the regime c₁ < c < 1/3 where the formula applies.
    pub formula: Option<f64>,
    /// max Re z - min Re z on the boundary.
    pub trace: f64,
}

/// Extent of the boundary along the real axis, refined by golden-section search.
pub fn real_extent(family: &DropletFamily) -> Result<f64> {
    let n = 4096;
    let h = 2.0 * PI / n as f64;
    let x = |t: f64| family.phi(C64::from_polar(1.0, t)).map(|z| z.re).unwrap_or(f64::NAN);
    let samples: Vec<f64> = (0..n).map(|k| x(-PI + k as f64 * h)).collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(DropletError::Pole { what: "phi", location: C64::new(f64::NAN, f64::NAN) });
    }
    let (imax, _) = samples.iter().enumerate().fold((0, f64::NEG_INFINITY), |m, (i, &v)| if v > m.1 { (i, v) } else { m });
    let (imin, _) = samples.iter().enumerate().fold((0, f64::INFINITY), |m, (i, &v)| if v < m.1 { (i, v) } else { m });
    let tmax = -PI + imax as f64 * h;
    let tmin = -PI + imin as f64 * h;
    let (_, neg_max) = golden_min(|t| -x(t), tmax - h, tmax + h, 1e-13);
    let (_, min) = golden_min(x, tmin - h, tmin + h, 1e-13);
    Ok(-neg_max - min)
}

pub fn droplet_width(c: f64, tol: f64) -> Result<WidthReport> {
    let family = DropletFamily::TwoPole { c };
    family.validate()?;
    let trace = real_extent(&family)?;
    let formula = if c > twopole_convexity_exact() && c < 1.0 / 3.0 { Some(2.0 * twopole_a_star(c)) } else { None };
    if let Some(f) = formula {
        if (f - trace).abs() > tol {
            return Err(DropletError::WidthMismatch { formula: f, trace });
        }
    }
    Ok(WidthReport { c, formula, trace })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub family: FamilyKind,
    pub convexity_threshold: ThresholdEstimate,
    pub univalency_threshold: ThresholdEstimate,
    /// Two-pole width at the requested parameter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<WidthReport>,
    /// KSV stage at the requested parameter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<Stage>,
}

pub fn geometry_report(kind: FamilyKind, at: Option<f64>, tol: f64) -> Result<GeometryReport> {
    let convexity_threshold = convexity_threshold(kind)?;
    let univalency_threshold = univalency_threshold(kind)?;
    let width = match (kind, at) {
        (FamilyKind::TwoPole, Some(c)) => Some(droplet_width(c, tol)?),
        _ => None,
    };
    let stage = match (kind, at) {
        (FamilyKind::Ksv, Some(c)) => Some(ksv_stage(c)),
        _ => None,
    };
    Ok(GeometryReport { family: kind, convexity_threshold, univalency_threshold, width, stage })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on_circle(t: f64) -> C64 {
        C64::from_polar(1.0, t)
    }

    #[test]
    fn circle_curvature_is_one() {
        for k in 0..32 {
            let t = -PI + k as f64 * 0.2;
            assert!((curvature_hat(&DropletFamily::Circle, on_circle(t)).unwrap() - 1.0).abs() < 1e-14);
            assert!((curvature_hat(&DropletFamily::Ksv { c: 0.0 }, on_circle(t)).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lemma_matches_printed_curvatures() {
        for k in 0..256 {
            let t = -PI + 2.0 * PI * (k as f64 + 0.37) / 256.0;
            let a = curvature_hat(&DropletFamily::Ksv { c: 0.3 }, on_circle(t)).unwrap();
            assert!((a - ksv_curvature_closed(0.3, t)).abs() < 1e-11);
            let b = curvature_hat(&DropletFamily::TwoPole { c: 0.2 }, on_circle(t)).unwrap();
            assert!((b - twopole_curvature_closed(0.2, t)).abs() < 1e-11, "{b} {}", twopole_curvature_closed(0.2, t));
        }
    }

    #[test]
    fn numeric_curvature_tracks_lemma() {
        let tr = DropletFamily::Circle.boundary_trace(4096).unwrap();
        assert!(curvature_numeric(&tr).unwrap().iter().all(|k| (k - 1.0).abs() < 1e-6));
        for fam in [DropletFamily::Ksv { c: 0.3 }, DropletFamily::TwoPole { c: 0.25 }] {
            let tr = fam.boundary_trace(8192).unwrap();
            let num = curvature_numeric(&tr).unwrap();
            let dev = num.iter().zip(&tr.curvature).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-5, "{}: {dev}", fam.label());
        }
        let short = DropletFamily::Circle.boundary_trace(256).unwrap();
        assert!(curvature_numeric(&short).is_err());
    }

    #[test]
    fn convexity_thresholds() {
        let k = convexity_threshold(FamilyKind::Ksv).unwrap();
        assert!((k.value - ksv_convexity_exact()).abs() < 1e-12);
        let t = convexity_threshold(FamilyKind::TwoPole).unwrap();
        assert!((t.value - twopole_convexity_exact()).abs() < 1e-12);
        assert!((t.value - 0.265_268_763_664_312_5).abs() < 1e-12);
    }

    #[test]
    fn numerator_agrees_with_scan() {
        for c in [0.2, 0.25, 0.3, 0.35, 0.4, 0.45] {
            for kind in [FamilyKind::Ksv, FamilyKind::TwoPole] {
                let by_num = convex_by_numerator(kind, c).unwrap();
                let (min, _) = min_curvature_scan(&kind.at(c)).unwrap();
                assert_eq!(by_num, min >= 0.0, "{kind:?} c={c} min={min}");
            }
        }
    }

    #[test]
    fn mpole_convexity_regression() {
        let frozen = [
            (2, 0.265_268_763_664_31),
            (3, 0.307_974_981_283_42),
            (4, 0.356_025_300_641_50),
            (5, 0.399_520_011_212_81),
            (6, 0.437_683_286_480_05),
        ];
        for (m, v) in frozen {
            let t = convexity_threshold(FamilyKind::MPole { m }).unwrap();
            assert!((t.value - v).abs() < 1e-9, "m={m}: {}", t.value);
        }
    }

    #[test]
    fn ksv_stage_constants() {
        let c1 = ksv_convexity_exact();
        let cs = crate::families::KSV_UNIVALENCY;
        assert!((ksv_alpha(c1) - 1.0).abs() < 1e-10);
        assert!((ksv_alpha(cs) + 1.0).abs() < 1e-10);
        assert_eq!(ksv_stage(0.2), Stage::I);
        assert_eq!(ksv_stage(0.5), Stage::II);
        assert_eq!(ksv_stage(0.7), Stage::III);
        // α decreasing on (0, c*)
        let mut prev = f64::INFINITY;
        for k in 1..100 {
            let a = ksv_alpha(k as f64 * cs / 100.0);
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn ksv_x0_matches_map() {
        for c in [0.2, 0.5] {
            let x = DropletFamily::Ksv { c }.phi(C64::new(1.0, 0.0)).unwrap().re;
            assert!((x - ksv_x0(c)).abs() < 1e-13);
        }
        let c = 0.3;
        let x = DropletFamily::TwoPole { c }.phi(C64::new(-1.0, 0.0)).unwrap().re;
        assert!((x - twopole_x_pi(c)).abs() < 1e-13);
    }

    #[test]
    fn line_profiles() {
        let c = 0.5;
        let fam = DropletFamily::Ksv { c };
        let (_, a2) = ksv_discriminant_roots(c);
        let a = 0.5 * (ksv_x0(c) + a2);
        let p = vertical_line_profile(&fam, a).unwrap();
        assert_eq!(p.trace_count, 4);
        assert_eq!(p.predicted_count, Some(4));
        assert!(!p.inconclusive);

        let c = 0.3;
        let fam = DropletFamily::TwoPole { c };
        let p = vertical_line_profile(&fam, 0.5 * twopole_x_pi(c)).unwrap();
        assert_eq!(p.trace_count, 2);
        assert_eq!(p.predicted_count, Some(2));

        let p = vertical_line_profile(&fam, 10.0).unwrap();
        assert_eq!((p.trace_count, p.predicted_count), (0, Some(0)));
        let p = vertical_line_profile(&DropletFamily::McLeod, 10.0).unwrap();
        assert_eq!((p.trace_count, p.predicted_count), (0, None));
    }

    #[test]
    fn line_counts_are_even() {
        let fam = DropletFamily::Ksv { c: 0.55 };
        for k in 0..40 {
            let a = -3.0 + 0.15 * k as f64 + 0.001;
            let p = vertical_line_profile(&fam, a).unwrap();
            if !p.inconclusive {
                assert_eq!(p.trace_count % 2, 0);
                assert_eq!(Some(p.trace_count), p.predicted_count, "a={a}");
            }
        }
    }

    #[test]
    fn width_formula_agrees() {
        for c in [0.28, 0.30, 0.32] {
            let w = droplet_width(c, 1e-8).unwrap();
            assert!((w.formula.unwrap() - w.trace).abs() < 1e-8);
        }
        let w = droplet_width(1e-3, 1e-8).unwrap();
        assert!(w.formula.is_none());
        assert!((w.trace - 2.0).abs() < 1e-2);
    }

    #[test]
    fn ksv_plus_variant_is_not_congruent() {
        use crate::families::ksv_plus_variant_phi;
        let c = 0.5;
        let n = 4096;
        let pts = |f: &dyn Fn(C64) -> C64| -> Vec<C64> { (0..n).map(|k| f(on_circle(2.0 * PI * k as f64 / n as f64))).collect() };
        let a = pts(&|w| DropletFamily::Ksv { c }.phi(w).unwrap());
        let b = pts(&|w| ksv_plus_variant_phi(c, w).unwrap());
        let perimeter = |p: &[C64]| (0..n).map(|k| (p[(k + 1) % n] - p[k]).norm()).sum::<f64>();
        let area = |p: &[C64]| 0.5 * (0..n).map(|k| (p[k].conj() * p[(k + 1) % n]).im).sum::<f64>().abs();
        assert!((perimeter(&a) - perimeter(&b)).abs() > 1e-2);
        assert!((area(&a) - area(&b)).abs() > 1e-2);
        // the printed Schwarz function belongs to the minus-sign map
        let w = on_circle(0.7);
        let s = DropletFamily::Ksv { c }.schwarz_hat(w).unwrap();
        assert!((s - a_conj(&|w| DropletFamily::Ksv { c }.phi(w).unwrap(), w)).norm() < 1e-13);
        assert!((s - ksv_plus_variant_phi(c, w).unwrap().conj()).norm() > 1e-2);
    }

    fn a_conj(f: &dyn Fn(C64) -> C64, w: C64) -> C64 {
        f(w).conj()
    }
}
