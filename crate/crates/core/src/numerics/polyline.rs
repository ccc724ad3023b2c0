//! Self-intersection test for polylines.
//!
//! Segments are bucketed into a uniform grid; each candidate pair is examined
//! once, in the lowest grid cell their bounding boxes share.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DropletError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<Complex64>,
    pub closed: bool,
}

impl Polyline {
    /// Builds a polyline, rejecting coincident consecutive points.
    ///
    /// For a closed polyline a trailing copy of the first point is dropped.
    pub fn new(mut points: Vec<Complex64>, closed: bool) -> Result<Self> {
        if closed && points.len() > 1 && points[0] == points[points.len() - 1] {
            points.pop();
        }
        if closed && points.len() < 3 {
            return Err(DropletError::TooFewPoints);
        }
        if points.len() < 2 {
            return Err(DropletError::TooFewPoints);
        }
        let line = Self { points, closed };
        for i in 0..line.segment_count() {
            let (a, b) = line.segment(i);
            if a == b || (b - a).norm() == 0.0 {
                return Err(DropletError::DegenerateSegment { index: i });
            }
        }
        Ok(line)
    }

    pub fn closed(points: Vec<Complex64>) -> Result<Self> {
        Self::new(points, true)
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    pub fn segment(&self, i: usize) -> (Complex64, Complex64) {
        let n = self.points.len();
        (self.points[i], self.points[(i + 1) % n])
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        let (i, j) = (i.min(j), i.max(j));
        j == i + 1 || (self.closed && i == 0 && j == self.segment_count() - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Simplicity {
    Simple,
    NotSimple,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub segments: (usize, usize),
    pub location: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub crossings: Vec<Crossing>,
    /// Pairs closer than the tolerance without a clean crossing.
    pub near_touches: Vec<Crossing>,
}

impl SimplicityReport {
    pub fn verdict(&self) -> Simplicity {
        if !self.crossings.is_empty() {
            Simplicity::NotSimple
        } else if !self.near_touches.is_empty() {
            Simplicity::Inconclusive
        } else {
            Simplicity::Simple
        }
    }

    /// Inconclusive counts as not simple.
    pub fn is_simple(&self) -> bool {
        self.verdict() == Simplicity::Simple
    }
}

pub fn polyline_is_simple(curve: &Polyline, tol: f64) -> Result<SimplicityReport> {
    let nseg = curve.segment_count();
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut total_len = 0.0;
    for i in 0..nseg {
        let (a, b) = curve.segment(i);
        lo = Complex64::new(lo.re.min(a.re), lo.im.min(a.im));
        hi = Complex64::new(hi.re.max(a.re), hi.im.max(a.im));
        total_len += (b - a).norm();
    }
    let extent = (hi.re - lo.re).max(hi.im - lo.im).max(f64::MIN_POSITIVE);
    let cell = (2.0 * total_len / nseg as f64).max(extent / 4096.0).max(4.0 * tol);

    let cell_range = |a: Complex64, b: Complex64| {
        let x0 = ((a.re.min(b.re) - tol - lo.re) / cell).floor() as i64;
        let x1 = ((a.re.max(b.re) + tol - lo.re) / cell).floor() as i64;
        let y0 = ((a.im.min(b.im) - tol - lo.im) / cell).floor() as i64;
        let y1 = ((a.im.max(b.im) + tol - lo.im) / cell).floor() as i64;
        (x0, x1, y0, y1)
    };

    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut ranges = Vec::with_capacity(nseg);
    for i in 0..nseg {
        let (a, b) = curve.segment(i);
        let r = cell_range(a, b);
        for x in r.0..=r.1 {
            for y in r.2..=r.3 {
                grid.entry((x, y)).or_default().push(i);
            }
        }
        ranges.push(r);
    }

    let mut keys: Vec<_> = grid.keys().copied().collect();
    keys.sort_unstable();
    let mut report = SimplicityReport { crossings: Vec::new(), near_touches: Vec::new() };
    for key in keys {
        let members = &grid[&key];
        for (p, &i) in members.iter().enumerate() {
            for &j in &members[p + 1..] {
                if curve.adjacent(i, j) {
                    continue;
                }
                let (ri, rj) = (ranges[i], ranges[j]);
                let first = (ri.0.max(rj.0), ri.2.max(rj.2));
                if first != key {
                    continue;
                }
                let (a, b) = curve.segment(i);
                let (c, d) = curve.segment(j);
                match classify(a, b, c, d, tol) {
                    Contact::Apart => {}
                    Contact::Cross(location) => {
                        report.crossings.push(Crossing { segments: (i.min(j), i.max(j)), location })
                    }
                    Contact::Near(location) => {
                        report.near_touches.push(Crossing { segments: (i.min(j), i.max(j)), location })
                    }
                }
            }
        }
    }
    report.crossings.sort_by_key(|c| c.segments);
    report.near_touches.sort_by_key(|c| c.segments);
    Ok(report)
}

enum Contact {
    Apart,
    Cross(Complex64),
    Near(Complex64),
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

/// Signed distance of `p` from the line through `a`, `b`.
fn side(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    cross(b - a, p - a) / (b - a).norm()
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> (f64, Complex64) {
    let ab = b - a;
    let t = (((p - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
    let q = a + ab * t;
    ((p - q).norm(), q)
}

fn classify(a: Complex64, b: Complex64, c: Complex64, d: Complex64, tol: f64) -> Contact {
    let (s1, s2) = (side(a, b, c), side(a, b, d));
    let (s3, s4) = (side(c, d, a), side(c, d, b));
    let clean = |x: f64, y: f64| x.abs() > tol && y.abs() > tol && x.signum() != y.signum();
    if clean(s1, s2) && clean(s3, s4) {
        let t = s3 / (s3 - s4);
        return Contact::Cross(a + (b - a) * t);
    }
    let candidates = [
        point_segment_distance(a, c, d),
        point_segment_distance(b, c, d),
        point_segment_distance(c, a, b),
        point_segment_distance(d, a, b),
    ];
    let (dist, at) = candidates.iter().copied().fold((f64::INFINITY, a), |m, x| if x.0 < m.0 { x } else { m });
    let straddle = s1.signum() != s2.signum() && s3.signum() != s4.signum();
    if dist <= tol || straddle {
        Contact::Near(at)
    } else {
        Contact::Apart
    }
}
