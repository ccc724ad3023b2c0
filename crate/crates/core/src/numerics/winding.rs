//! Argument-principle counting by phase unwrapping.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::CircleLoop;
use crate::error::{DropletError, Result};

/// Relative floor below which |f| on the contour counts as a zero.
pub const ZERO_FLOOR: f64 = 1e-13;
const MAX_DEPTH: u32 = 20;

/// Number of zeros minus poles of `f` enclosed by `lp` (sign follows the
/// loop orientation).
pub fn winding_count<F>(f: F, lp: &CircleLoop) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64,
{
    winding_along(f, |t| lp.point(t), lp.samples)
}

/// Winding of `f` along a closed path `path(t)`, `t ∈ [0, 1]`, with
/// `path(0) == path(1)`.
///
/// Each arc is bisected until the phase step is below π/2 and consistent
/// with the step through its midpoint.
pub fn winding_along<F, P>(f: F, path: P, samples: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64,
    P: Fn(f64) -> Complex64,
{
    let samples = samples.max(8);
    let mut values = Vec::with_capacity(samples + 1);
    for k in 0..samples {
        let w = path(k as f64 / samples as f64);
        let v = f(w);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(DropletError::NonFiniteSample { node: k, location: w });
        }
        values.push((w, v));
    }
    values.push(values[0]);
    let max = values.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let floor = ZERO_FLOOR * max;
    if let Some((w, v)) = values.iter().find(|(_, v)| v.norm() <= floor) {
        return Err(DropletError::ZeroOnContour { location: *w, magnitude: v.norm() });
    }

    let walker = Walker { f: &f, path: &path, floor };
    let mut total = 0.0;
    for k in 0..samples {
        let t0 = k as f64 / samples as f64;
        let t1 = (k + 1) as f64 / samples as f64;
        total += walker.arc(t0, values[k].1, t1, values[k + 1].1, 0)?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

struct Walker<'a, F, P> {
    f: &'a F,
    path: &'a P,
    floor: f64,
}

impl<F, P> Walker<'_, F, P>
where
    F: Fn(Complex64) -> Complex64,
    P: Fn(f64) -> Complex64,
{
    fn arc(&self, t0: f64, f0: Complex64, t1: f64, f1: Complex64, depth: u32) -> Result<f64> {
        let d = (f1 / f0).arg();
        if depth >= MAX_DEPTH {
            return Ok(d);
        }
        let tm = 0.5 * (t0 + t1);
        let w = (self.path)(tm);
        let fm = (self.f)(w);
        if !fm.re.is_finite() || !fm.im.is_finite() {
            return Err(DropletError::NonFiniteSample { node: usize::MAX, location: w });
        }
        if fm.norm() <= self.floor {
            return Err(DropletError::ZeroOnContour { location: w, magnitude: fm.norm() });
        }
        // Accept an arc only when its midpoint agrees with the direct phase
        // step; a lone check of |d| cannot see whole turns between nodes.
        let (d1, d2) = ((fm / f0).arg(), (f1 / fm).arg());
        if d.abs() <= PI / 2.0 && d1.abs() <= PI / 2.0 && d2.abs() <= PI / 2.0 && (d1 + d2 - d).abs() < 1e-6 {
            return Ok(d);
        }
        Ok(self.arc(t0, f0, tm, fm, depth + 1)? + self.arc(tm, fm, t1, f1, depth + 1)?)
    }
}
