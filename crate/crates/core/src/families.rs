//! Closed-form droplet families.
//!
//! Every object lives in the w-coordinate of the exterior disc: the map φ sends
//! `|w| < 1` to the complement of the droplet with φ(0) = ∞. Integration
//! constants of φ are dropped throughout.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DropletError, Result};
use crate::geometry;
use crate::numerics::cauchy_derivative;

type C64 = Complex64;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const POLE_GUARD: f64 = 1e-14;

/// Golden-ratio conjugate, the KSV univalency bound.
pub const KSV_UNIVALENCY: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DropletFamily {
    Circle,
    McLeod,
    Ksv { c: f64 },
    TwoPole { c: f64 },
    MPole { m: u32, c: f64 },
    TwoPoleGeneral { c: f64, q: f64 },
}

fn guard(den: C64, what: &'static str, w: C64) -> Result<C64> {
    if den.norm() < POLE_GUARD || !den.re.is_finite() || !den.im.is_finite() {
        Err(DropletError::Pole { what, location: w })
    } else {
        Ok(den)
    }
}

fn nonzero(w: C64, what: &'static str) -> Result<()> {
    guard(w, what, w).map(|_| ())
}

impl DropletFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DropletFamily::Circle => "circle",
            DropletFamily::McLeod => "mcleod",
            DropletFamily::Ksv { .. } => "ksv",
            DropletFamily::TwoPole { .. } => "twopole",
            DropletFamily::MPole { .. } => "mpole",
            DropletFamily::TwoPoleGeneral { .. } => "twopole_general",
        }
    }

    pub fn label(&self) -> String {
        match *self {
            DropletFamily::Circle | DropletFamily::McLeod => self.name().to_string(),
            DropletFamily::Ksv { c } | DropletFamily::TwoPole { c } => format!("{}(c={c})", self.name()),
            DropletFamily::MPole { m, c } => format!("mpole(m={m}, c={c})"),
            DropletFamily::TwoPoleGeneral { c, q } => format!("twopole_general(c={c}, q={q})"),
        }
    }

    /// Checks the parameters. Hard violations are errors; leaving a known
    /// univalency range only produces warnings so threshold searches can probe
    /// past it.
    pub fn validate(&self) -> Result<Vec<String>> {
        let bad = |msg: String| Err(DropletError::InvalidParameter(msg));
        let mut warnings = Vec::new();
        match *self {
            DropletFamily::Circle | DropletFamily::McLeod => {}
            DropletFamily::Ksv { c } => {
                if !(0.0..1.0).contains(&c) {
                    return bad(format!("ksv needs 0 <= c < 1, got {c}"));
                }
                if c >= KSV_UNIVALENCY {
                    warnings.push(format!("c = {c} is outside the univalent range c < {KSV_UNIVALENCY}"));
                }
            }
            DropletFamily::TwoPole { c } => {
                if !(c > 0.0 && c < 1.0) {
                    return bad(format!("twopole needs 0 < c < 1, got {c}"));
                }
                if c >= 1.0 / 3.0 {
                    warnings.push(format!("c = {c} is outside the univalent range c < 1/3"));
                }
            }
            DropletFamily::MPole { m, c } => {
                if m < 2 {
                    return bad(format!("mpole needs m >= 2, got {m}"));
                }
                if !(c > 0.0 && c < 1.0) {
                    return bad(format!("mpole needs 0 < c < 1, got {c}"));
                }
                let mf = m as f64;
                if c * (mf - 1.0).powf(1.0 / mf) >= 1.0 || c * (mf + 1.0).powf(1.0 / mf) >= 1.0 {
                    return bad(format!("mpole m = {m}, c = {c}: singularities enter the closed disc"));
                }
                match mpole_univalency_bound(m) {
                    Some(bound) if c >= bound => {
                        warnings.push(format!("c = {c} is outside the univalent range c < {bound:.6} for m = {m}"))
                    }
                    Some(_) => {}
                    None => warnings.push(format!("no univalency bound is known for m = {m}")),
                }
            }
            DropletFamily::TwoPoleGeneral { c, q } => {
                if !(c > 0.0 && c < 1.0) {
                    return bad(format!("twopole_general needs 0 < c < 1, got {c}"));
                }
                if q == 0.0 || !(q.abs() < 1.0) {
                    return bad(format!("twopole_general needs 0 < |q| < 1, got {q}"));
                }
                warnings.push("twopole_general is exploratory: only evaluation and the q -> 0 limit are supported".into());
                if !(q > 0.0 && q < c) && q != -c {
                    warnings.push(format!("(c, q) = ({c}, {q}) lies outside 0 < q < c"));
                }
            }
        }
        Ok(warnings)
    }

    /// Residue of φ at w = 0, which fixes the traversal sense of the image of
    /// the unit circle.
    pub fn residue_sign(&self) -> f64 {
        match self {
            DropletFamily::TwoPole { .. } | DropletFamily::TwoPoleGeneral { .. } => -1.0,
            _ => 1.0,
        }
    }

    /// Pressure and tension constants, where the family fixes them.
    pub fn constants(&self) -> Option<(f64, f64)> {
        match *self {
            DropletFamily::Circle => Some((1.0, 1.0)),
            DropletFamily::McLeod => Some((0.0, 3.0)),
            DropletFamily::Ksv { c } => {
                let c2 = c * c;
                Some((1.0 - c2, 1.0 - c2 + c2 * c2))
            }
            DropletFamily::TwoPole { c } => Some(twopole_constants(c)),
            DropletFamily::MPole { m, c } => {
                let mf = m as f64;
                let c2m = c.powi(2 * m as i32);
                Some(((mf - 1.0) * (1.0 - (mf - 1.0).powi(2) * c2m), (2.0 * mf * mf - 2.0) * c2m + 2.0))
            }
            DropletFamily::TwoPoleGeneral { c, q } if q == -c => Some(twopole_constants(c)),
            DropletFamily::TwoPoleGeneral { .. } => None,
        }
    }

    pub fn phi(&self, w: C64) -> Result<C64> {
        nonzero(w, "phi")?;
        Ok(match *self {
            DropletFamily::Circle => 1.0 / w,
            DropletFamily::McLeod => 1.0 / w + w * (2.0 / 3.0) - w.powi(3) / 27.0,
            DropletFamily::Ksv { c } => {
                let d = guard(1.0 - w * c, "phi", w)?;
                1.0 / w - c / d - w * (c * c)
            }
            DropletFamily::TwoPole { c } => {
                let d1 = guard(1.0 - w * c, "phi", w)?;
                let d2 = guard(1.0 + w * c, "phi", w)?;
                -1.0 / w + 4.0 * c / d1 - 4.0 * c / d2
            }
            DropletFamily::MPole { m, c } => {
                let mp = MPoleData::new(m, c);
                let u = mp.a * w.powi(m as i32);
                let d = guard(1.0 + (mp.mf - 1.0) * u, "phi", w)?;
                1.0 / w + (4.0 * mp.mf / (mp.mf - 1.0)) * mp.a * w.powi(m as i32 - 1) / d
            }
            DropletFamily::TwoPoleGeneral { c, q } => twopole_general_phi(c, q, w)?,
        })
    }

    pub fn phi_prime(&self, w: C64) -> Result<C64> {
        nonzero(w, "phi'")?;
        let w2 = w * w;
        Ok(match *self {
            DropletFamily::Circle => -1.0 / w2,
            DropletFamily::McLeod => -1.0 / w2 + 2.0 / 3.0 - w2 / 9.0,
            DropletFamily::Ksv { c } => {
                let d = guard(1.0 - w * c, "phi'", w)?;
                -1.0 / w2 - c * c / (d * d) - c * c
            }
            DropletFamily::TwoPole { c } => {
                let d1 = guard(1.0 - w * c, "phi'", w)?;
                let d2 = guard(1.0 + w * c, "phi'", w)?;
                1.0 / w2 + 4.0 * c * c / (d1 * d1) + 4.0 * c * c / (d2 * d2)
            }
            DropletFamily::MPole { m, c } => {
                let mp = MPoleData::new(m, c);
                let mi = m as i32;
                let u = mp.a * w.powi(mi);
                let d = guard(1.0 + (mp.mf - 1.0) * u, "phi'", w)?;
                -1.0 / w2 + 4.0 * mp.mf * mp.a * w.powi(mi - 2) * (1.0 - u) / (d * d)
            }
            DropletFamily::TwoPoleGeneral { c, q } => {
                let k = (c - q) * (c - q);
                let dq = guard(1.0 - w * q, "phi'", w)?;
                let dc = guard(1.0 - w * c, "phi'", w)?;
                1.0 / w2 + k / (dq * dq) + k / (dc * dc)
            }
        })
    }

    pub fn phi_second(&self, w: C64) -> Result<C64> {
        nonzero(w, "phi''")?;
        let w3 = w * w * w;
        Ok(match *self {
            DropletFamily::Circle => 2.0 / w3,
            DropletFamily::McLeod => 2.0 / w3 - w * (2.0 / 9.0),
            DropletFamily::Ksv { c } => {
                let d = guard(1.0 - w * c, "phi''", w)?;
                2.0 / w3 - 2.0 * c.powi(3) / (d * d * d)
            }
            DropletFamily::TwoPole { c } => {
                let d1 = guard(1.0 - w * c, "phi''", w)?;
                let d2 = guard(1.0 + w * c, "phi''", w)?;
                let c3 = 8.0 * c.powi(3);
                -2.0 / w3 + c3 / (d1 * d1 * d1) - c3 / (d2 * d2 * d2)
            }
            DropletFamily::MPole { m, c } => {
                let mp = MPoleData::new(m, c);
                let mi = m as i32;
                let a = mp.a;
                let mf = mp.mf;
                let d = guard(1.0 + (mf - 1.0) * a * w.powi(mi), "phi''", w)?;
                let n = w.powi(mi - 2) - a * w.powi(2 * mi - 2);
                let dn = (mf - 2.0) * w.powi(mi - 3) - (2.0 * mf - 2.0) * a * w.powi(2 * mi - 3);
                let dd = (mf - 1.0) * mf * a * w.powi(mi - 1);
                2.0 / w3 + 4.0 * mf * a * (dn * d - 2.0 * n * dd) / (d * d * d)
            }
            DropletFamily::TwoPoleGeneral { c, q } => {
                let k = (c - q) * (c - q);
                let dq = guard(1.0 - w * q, "phi''", w)?;
                let dc = guard(1.0 - w * c, "phi''", w)?;
                -2.0 / w3 + 2.0 * q * k / (dq * dq * dq) + 2.0 * c * k / (dc * dc * dc)
            }
        })
    }

    /// Schwarz function in the w-coordinate, from the closed forms.
    pub fn schwarz_hat(&self, w: C64) -> Result<C64> {
        nonzero(w, "schwarz function")?;
        let what = "schwarz function";
        Ok(match *self {
            DropletFamily::Circle => w,
            DropletFamily::McLeod => w + 2.0 / (3.0 * w) - 1.0 / (27.0 * w.powi(3)),
            DropletFamily::Ksv { c } => {
                let d = guard(w - c, what, w)?;
                w - c * w / d - c * c / w
            }
            DropletFamily::TwoPole { c } => {
                let d = guard(w * w - c * c, what, w)?;
                w * (9.0 * c * c - w * w) / d
            }
            DropletFamily::MPole { m, c } => {
                let mp = MPoleData::new(m, c);
                let wm = w.powi(m as i32);
                let d = guard(wm + (mp.mf - 1.0) * mp.k, what, w)?;
                w * ((mp.mf - 1.0) * wm + (mp.mf + 1.0).powi(2) * mp.k) / ((mp.mf - 1.0) * d)
            }
            DropletFamily::TwoPoleGeneral { c, q } => {
                let k = (c - q) * (c - q);
                let dc = guard(w - c, what, w)?;
                let dq = guard(w - q, what, w)?;
                -w + (c.powi(3) - c * c * q - c * q * q + q.powi(3)) / (c * q) + k / dc + k / dq
            }
        })
    }

    /// Schwarz function by reflection, `conj(φ(1/conj w))`.
    pub fn schwarz_reflected(&self, w: C64) -> Result<C64> {
        nonzero(w, "schwarz function")?;
        Ok(self.phi(1.0 / w.conj())?.conj())
    }

    pub fn schwarz_prime(&self, w: C64) -> Result<C64> {
        nonzero(w, "schwarz function")?;
        let r = 1.0 / w.conj();
        Ok(-self.phi_prime(r)?.conj() / (w * w))
    }

    pub fn schwarz_second(&self, w: C64) -> Result<C64> {
        nonzero(w, "schwarz function")?;
        let r = 1.0 / w.conj();
        Ok(self.phi_second(r)?.conj() / w.powi(4) + 2.0 * self.phi_prime(r)?.conj() / w.powi(3))
    }

    /// Field function F̂, equal on the unit circle to the conjugate unit tangent
    /// of the counterclockwise traversal of the droplet boundary.
    pub fn field_hat(&self, w: C64) -> Result<C64> {
        nonzero(w, "field function")?;
        let what = "field function";
        Ok(match *self {
            DropletFamily::Circle => -I * w,
            DropletFamily::McLeod => {
                let d = guard(w * (w * w - 3.0), what, w)?;
                I * (3.0 * w * w - 1.0) / d
            }
            DropletFamily::Ksv { c } => {
                let d = guard((1.0 - c * w + c * c * w * w) * (w - c), what, w)?;
                -I * (w * w - c * w + c * c) * (1.0 - c * w) / d
            }
            DropletFamily::TwoPole { c } => {
                let c2 = c * c;
                let w2 = w * w;
                let d = guard((1.0 + 3.0 * c2 * w2) * (w2 - c2), what, w)?;
                I * w * (w2 + 3.0 * c2) * (1.0 - c2 * w2) / d
            }
            DropletFamily::MPole { m, c } => {
                let mp = MPoleData::new(m, c);
                let wm = w.powi(m as i32);
                let u = mp.a * wm;
                let d = guard(((mp.mf + 1.0) * u - 1.0) * (wm + (mp.mf - 1.0) * mp.k), what, w)?;
                I * w * ((mp.mf - 1.0) * u + 1.0) * (wm - (mp.mf + 1.0) * mp.k) / d
            }
            DropletFamily::TwoPoleGeneral { c, q } => {
                let a = twopole_general_a(c, q);
                let ab = a.conj();
                let d = guard((q - w) * (c - w) * (1.0 - ab * w) * (1.0 - a * w), what, w)?;
                I * w * (1.0 - q * w) * (1.0 - c * w) * (w - a) * (w - ab) / d
            }
        })
    }

    /// The McLeod field in its quoted form `(3w² + 1)/(w(1 + w²/3))`. It
    /// belongs to the quarter-turned map `w -> iw`: `Ĝ(w) = -i F(iw)`.
    pub fn mcleod_field_printed(w: C64) -> Result<C64> {
        let d = guard(w * (1.0 + w * w / 3.0), "field function", w)?;
        Ok((3.0 * w * w + 1.0) / d)
    }

    /// Poles of Ŝ and F̂ inside the punctured unit disc.
    pub fn interior_poles(&self) -> Vec<C64> {
        match *self {
            DropletFamily::Circle | DropletFamily::McLeod => vec![],
            DropletFamily::Ksv { c } => {
                if c > 0.0 {
                    vec![C64::new(c, 0.0)]
                } else {
                    vec![]
                }
            }
            DropletFamily::TwoPole { c } => vec![C64::new(c, 0.0), C64::new(-c, 0.0)],
            DropletFamily::MPole { m, c } => {
                let mp = MPoleData::new(m, c);
                // roots of w^m = -(m-1) k
                let target = -(mp.mf - 1.0) * mp.k;
                let (rho, arg) = target.to_polar();
                (0..m)
                    .map(|j| C64::from_polar(rho.powf(1.0 / mp.mf), (arg + 2.0 * PI * j as f64) / mp.mf))
                    .collect()
            }
            DropletFamily::TwoPoleGeneral { c, q } => {
                let mut v = vec![C64::new(c, 0.0)];
                if q != c {
                    v.push(C64::new(q, 0.0));
                }
                v
            }
        }
    }

    /// Every finite singular point of φ, Ŝ or F̂, including w = 0.
    pub fn singularities(&self) -> Vec<C64> {
        let mut s = vec![C64::new(0.0, 0.0)];
        s.extend(self.interior_poles());
        match *self {
            DropletFamily::Circle => {}
            DropletFamily::McLeod => s.extend([C64::new(3f64.sqrt(), 0.0), C64::new(-(3f64.sqrt()), 0.0)]),
            DropletFamily::Ksv { c } => {
                if c > 0.0 {
                    s.push(C64::new(1.0 / c, 0.0));
                    // roots of 1 - c w + c² w²
                    s.extend([C64::from_polar(1.0 / c, PI / 3.0), C64::from_polar(1.0 / c, -PI / 3.0)]);
                }
            }
            DropletFamily::TwoPole { c } => {
                s.extend([C64::new(1.0 / c, 0.0), C64::new(-1.0 / c, 0.0)]);
                let r = 1.0 / (3f64.sqrt() * c);
                s.extend([I * r, -I * r]);
            }
            DropletFamily::MPole { m, c } => {
                let mp = MPoleData::new(m, c);
                for target in [-1.0 / ((mp.mf - 1.0) * mp.a), 1.0 / ((mp.mf + 1.0) * mp.a)] {
                    let (rho, arg) = target.to_polar();
                    s.extend(
                        (0..m).map(|j| C64::from_polar(rho.powf(1.0 / mp.mf), (arg + 2.0 * PI * j as f64) / mp.mf)),
                    );
                }
            }
            DropletFamily::TwoPoleGeneral { c, q } => {
                let a = twopole_general_a(c, q);
                s.extend([C64::new(1.0 / c, 0.0), C64::new(1.0 / q, 0.0)]);
                if a.norm() > 0.0 {
                    s.extend([1.0 / a, 1.0 / a.conj()]);
                }
            }
        }
        s
    }

    /// Distance from `w` to the nearest singular point.
    pub fn clearance(&self, w: C64) -> f64 {
        self.singularities().iter().map(|s| (w - s).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn boundary_trace(&self, n: usize) -> Result<BoundaryTrace> {
        BoundaryTrace::build(self, n)
    }

    /// φ(e^{iθ}) at `n` equally spaced angles starting at -π, without the
    /// closing point.
    pub fn boundary_points(&self, n: usize) -> Result<Vec<C64>> {
        (0..n).map(|k| self.phi(C64::from_polar(1.0, -PI + 2.0 * PI * k as f64 / n as f64))).collect()
    }
}

fn twopole_constants(c: f64) -> (f64, f64) {
    let c4 = c.powi(4);
    (1.0 - c4, 6.0 * c4 + 2.0)
}

/// Known univalency bounds of the m-pole maps.
pub fn mpole_univalency_bound(m: u32) -> Option<f64> {
    match m {
        2 => Some(1.0 / 3.0),
        3 => Some(((2f64.sqrt() - 1.0) / 4.0).cbrt()),
        4 => Some(((37.0 - 8.0 * 10f64.sqrt()) / 135.0).powf(0.25)),
        _ => None,
    }
}

struct MPoleData {
    mf: f64,
    /// (ic)^m
    a: C64,
    /// (-ic)^m
    k: C64,
}

impl MPoleData {
    fn new(m: u32, c: f64) -> Self {
        let a = (I * c).powi(m as i32);
        Self { mf: m as f64, a, k: a.conj() }
    }
}

fn twopole_general_a(c: f64, q: f64) -> C64 {
    C64::from_polar(c, PI / 3.0) + C64::from_polar(q, -PI / 3.0)
}

/// The general two-pole map φ_{c,q}.
pub fn twopole_general_phi(c: f64, q: f64, w: C64) -> Result<C64> {
    nonzero(w, "phi")?;
    let k = (c - q) * (c - q);
    let dq = guard(q * (1.0 - q * w), "phi", w)?;
    let dc = guard(c * (1.0 - c * w), "phi", w)?;
    Ok(-1.0 / w + k / dq + k / dc)
}

/// Sup over the unit circle of |φ_{c,q} - c²/q + 2c + φ_KSV|; first order in q.
pub fn q_limit_check(c: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < c && c < 1.0) {
        return Err(DropletError::InvalidParameter(format!("q-limit needs 0 < q < c < 1, got c = {c}, q = {q}")));
    }
    let ksv = DropletFamily::Ksv { c };
    let n = 1024;
    let mut sup: f64 = 0.0;
    for k in 0..n {
        let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let shifted = twopole_general_phi(c, q, w)? - c * c / q + 2.0 * c;
        sup = sup.max((shifted + ksv.phi(w)?).norm());
    }
    Ok(sup)
}

/// The KSV map with the opposite sign on the pole term,
/// `1/w + c/(1 - cw) - c² w`. It is not congruent to [`DropletFamily::Ksv`].
pub fn ksv_plus_variant_phi(c: f64, w: C64) -> Result<C64> {
    nonzero(w, "phi")?;
    let d = guard(1.0 - c * w, "phi", w)?;
    Ok(1.0 / w + c / d - c * c * w)
}

/// A family together with its pressure and tension constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropletModel {
    pub family: DropletFamily,
    pub p: f64,
    pub tau: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl DropletModel {
    pub fn new(family: DropletFamily) -> Result<Self> {
        let warnings = family.validate()?;
        let (p, tau) = family
            .constants()
            .ok_or_else(|| DropletError::Unsupported(format!("{} has no pressure/tension constants", family.label())))?;
        Ok(Self { family, p, tau, warnings })
    }

    /// Model with caller-chosen constants, e.g. a perturbed tension.
    pub fn with_constants(family: DropletFamily, p: f64, tau: f64) -> Result<Self> {
        let warnings = family.validate()?;
        Ok(Self { family, p, tau, warnings })
    }

    pub fn g_hat(&self, w: C64) -> Result<C64> {
        Ok(self.p * self.family.schwarz_hat(w)? + I * self.tau * self.family.field_hat(w)?)
    }

    /// dĜ/dw by a Cauchy integral around `w`.
    pub fn g_hat_prime(&self, w: C64) -> Result<C64> {
        let radius = (0.25 * self.family.clearance(w)).min(0.05);
        let nodes = 64;
        let mut failure = None;
        let d = cauchy_derivative(
            |z| match self.g_hat(z) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    C64::new(f64::NAN, f64::NAN)
                }
            },
            w,
            radius,
            nodes,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(d),
        }
    }

    pub fn boundary_trace(&self, n: usize) -> Result<BoundaryTrace> {
        self.family.boundary_trace(n)
    }
}

/// Fitted constant A_m(c) of the m-pole Ĝ shape
/// `-A w (m + 1 - (m-1)² u)/((m+1) u - 1)`, `u = (icw)^m`.
pub fn mpole_constant(m: u32, c: f64) -> Result<f64> {
    let model = DropletModel::new(DropletFamily::MPole { m, c })?;
    let reference = C64::new(0.31, 0.17);
    let a0 = model.g_hat(reference)? / mpole_g_shape(m, c, reference);
    let pts = crate::sampling::disc_points(64, 0.05, 0.95, &model.family.singularities(), 0.05);
    let mut dev: f64 = a0.im.abs() / a0.norm();
    for w in pts {
        let a = model.g_hat(w)? / mpole_g_shape(m, c, w);
        dev = dev.max((a - a0).norm() / a0.norm());
    }
    if dev > 1e-11 {
        return Err(DropletError::ClosedFormMismatch { max_deviation: dev });
    }
    Ok(a0.re)
}

/// `-w (m + 1 - (m-1)² u)/((m+1) u - 1)` with `u = (icw)^m`.
pub fn mpole_g_shape(m: u32, c: f64, w: C64) -> C64 {
    let mf = m as f64;
    let u = (I * c * w).powi(m as i32);
    -w * (mf + 1.0 - (mf - 1.0).powi(2) * u) / ((mf + 1.0) * u - 1.0)
}

/// Sampled boundary φ(e^{iθ}) on a uniform grid over [-π, π], closing point
/// included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub family: DropletFamily,
    pub thetas: Vec<f64>,
    pub points: Vec<C64>,
    /// Unit tangents of the θ-increasing traversal; zero at degenerate nodes.
    pub tangents: Vec<C64>,
    /// Signed curvature (see [`geometry::curvature_hat`]); NaN at degenerate
    /// nodes.
    pub curvature: Vec<f64>,
    pub degenerate_nodes: Vec<usize>,
}

impl BoundaryTrace {
    fn build(family: &DropletFamily, n: usize) -> Result<Self> {
        if n < 64 {
            return Err(DropletError::InvalidParameter(format!("boundary trace needs n >= 64, got {n}")));
        }
        let mut thetas = Vec::with_capacity(n + 1);
        let mut points = Vec::with_capacity(n + 1);
        let mut tangents = Vec::with_capacity(n + 1);
        let mut curvature = Vec::with_capacity(n + 1);
        let mut degenerate_nodes = Vec::new();
        let mut derivs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let theta = if k == n { PI } else { -PI + 2.0 * PI * k as f64 / n as f64 };
            let w = C64::from_polar(1.0, theta);
            thetas.push(theta);
            points.push(family.phi(w)?);
            derivs.push(family.phi_prime(w)?);
        }
        let scale = derivs.iter().map(|d| d.norm()).fold(0.0, f64::max);
        for (k, (&theta, d)) in thetas.iter().zip(&derivs).enumerate() {
            let w = C64::from_polar(1.0, theta);
            if d.norm() <= 1e-10 * scale {
                degenerate_nodes.push(k);
                tangents.push(C64::new(0.0, 0.0));
                curvature.push(f64::NAN);
                continue;
            }
            let t = I * w * d;
            tangents.push(t / t.norm());
            curvature.push(geometry::curvature_hat(family, w)?);
        }
        // the closing node repeats the first
        points[n] = points[0];
        Ok(Self { family: *family, thetas, points, tangents, curvature, degenerate_nodes })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn polyline(&self) -> Result<crate::numerics::Polyline> {
        crate::numerics::Polyline::closed(self.points.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_loop, CircleLoop};
    use crate::sampling::disc_points;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn all_families() -> Vec<DropletFamily> {
        let mut v = vec![DropletFamily::Circle, DropletFamily::McLeod];
        v.extend([0.0, 0.2, 0.45].map(|c| DropletFamily::Ksv { c }));
        v.extend([0.1, 0.25].map(|c| DropletFamily::TwoPole { c }));
        for m in 2..=6 {
            v.push(DropletFamily::MPole { m, c: 0.25 });
        }
        v.push(DropletFamily::TwoPoleGeneral { c: 0.3, q: 0.1 });
        v.push(DropletFamily::TwoPoleGeneral { c: 0.3, q: -0.3 });
        v
    }

    #[test]
    fn stated_values() {
        assert!((DropletFamily::Ksv { c: 0.0 }.phi(c(0.5, 0.0)).unwrap() - 2.0).norm() < 1e-15);
        assert!((DropletFamily::McLeod.phi(c(1.0, 0.0)).unwrap() - 44.0 / 27.0).norm() < 1e-15);
        assert!((DropletFamily::Ksv { c: 0.0 }.phi_prime(c(0.5, 0.0)).unwrap() + 4.0).norm() < 1e-15);
        let tp = DropletFamily::TwoPole { c: 1.0 / 3.0 };
        assert!(tp.phi(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(tp.phi(c(-1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((DropletFamily::mcleod_field_printed(I).unwrap() - 3.0 * I).norm() < 1e-15);
    }

    #[test]
    fn poles_are_reported() {
        let ksv = DropletFamily::Ksv { c: 0.5 };
        assert!(matches!(ksv.phi(c(2.0, 0.0)), Err(DropletError::Pole { .. })));
        assert!(matches!(ksv.schwarz_hat(c(0.5, 0.0)), Err(DropletError::Pole { .. })));
        assert!(matches!(ksv.phi(c(0.0, 0.0)), Err(DropletError::Pole { .. })));
    }

    #[test]
    fn schwarz_matches_conjugate_on_circle() {
        for fam in all_families() {
            for k in 0..97 {
                let w = C64::from_polar(1.0, 0.3 + 2.0 * PI * k as f64 / 97.0);
                let s = fam.schwarz_hat(w).unwrap();
                assert!((s - fam.phi(w).unwrap().conj()).norm() < 1e-12, "{}", fam.label());
                assert!((s - fam.schwarz_reflected(w).unwrap()).norm() < 1e-12, "{}", fam.label());
            }
        }
    }

    #[test]
    fn field_is_conjugate_ccw_tangent() {
        for fam in all_families() {
            for k in 0..97 {
                let w = C64::from_polar(1.0, 0.3 + 2.0 * PI * k as f64 / 97.0);
                let d = fam.phi_prime(w).unwrap();
                let expected = (-I * w * d / d.norm()).conj();
                assert!((fam.field_hat(w).unwrap() - expected).norm() < 1e-12, "{}", fam.label());
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for fam in all_families() {
            let pts = disc_points(100, 0.1, 0.95, &fam.singularities(), 0.05);
            for w in pts {
                let fd = |f: &dyn Fn(C64) -> C64| (f(w + h) - f(w - h)) / (2.0 * h);
                let scale = 1.0 + fam.phi_prime(w).unwrap().norm();
                let e1 = (fd(&|z| fam.phi(z).unwrap()) - fam.phi_prime(w).unwrap()).norm() / scale;
                let e2 = (fd(&|z| fam.phi_prime(z).unwrap()) - fam.phi_second(w).unwrap()).norm()
                    / (1.0 + fam.phi_second(w).unwrap().norm());
                let e3 = (fd(&|z| fam.schwarz_hat(z).unwrap()) - fam.schwarz_prime(w).unwrap()).norm()
                    / (1.0 + fam.schwarz_prime(w).unwrap().norm());
                let e4 = (fd(&|z| fam.schwarz_prime(z).unwrap()) - fam.schwarz_second(w).unwrap()).norm()
                    / (1.0 + fam.schwarz_second(w).unwrap().norm());
                for e in [e1, e2, e3, e4] {
                    assert!(e < 1e-6, "{} at {w}: {e}", fam.label());
                }
            }
        }
    }

    #[test]
    fn twopole_derivative_oracle() {
        let fam = DropletFamily::TwoPole { c: 0.2 };
        let w = c(0.3, 0.0);
        let h = 1e-6;
        let fd = (fam.phi(w + h).unwrap() - fam.phi(w - h).unwrap()) / (2.0 * h);
        assert!((fd - fam.phi_prime(w).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn mpole_two_is_negated_twopole() {
        let a = DropletFamily::MPole { m: 2, c: 0.2 };
        let b = DropletFamily::TwoPole { c: 0.2 };
        for w in disc_points(200, 0.05, 0.99, &b.singularities(), 1e-3) {
            assert!((a.phi(w).unwrap() + b.phi(w).unwrap()).norm() < 1e-13);
            assert!((a.phi_prime(w).unwrap() + b.phi_prime(w).unwrap()).norm() < 1e-12 * (1.0 + b.phi_prime(w).unwrap().norm()));
        }
        assert_eq!(a.constants(), b.constants());
    }

    #[test]
    fn constants_match_formulas() {
        assert_eq!(DropletFamily::Ksv { c: 0.5 }.constants(), Some((0.75, 0.8125)));
        assert_eq!(DropletFamily::McLeod.constants(), Some((0.0, 3.0)));
        assert_eq!(DropletFamily::TwoPoleGeneral { c: 0.3, q: 0.1 }.constants(), None);
        assert!(DropletModel::new(DropletFamily::TwoPoleGeneral { c: 0.3, q: 0.1 }).is_err());
    }

    #[test]
    fn ksv_residues_match_stated_values() {
        for cc in [0.2, 0.4, 0.55] {
            let fam = DropletFamily::Ksv { c: cc };
            let lp = CircleLoop::ccw(c(cc, 0.0), 0.02).unwrap();
            let two_pi_i = c(0.0, 2.0 * PI);
            let rs = integrate_loop(|w| fam.schwarz_hat(w).unwrap() * fam.phi_prime(w).unwrap(), &lp).unwrap() / two_pi_i;
            let rf = integrate_loop(|w| fam.field_hat(w).unwrap() * fam.phi_prime(w).unwrap(), &lp).unwrap() / two_pi_i;
            let c2 = cc * cc;
            let ratio = (1.0 - c2 + c2 * c2) / (1.0 - c2);
            assert!((rs - ratio * ratio).norm() < 1e-11, "{rs}");
            assert!((rf - I * ratio).norm() < 1e-11, "{rf}");
        }
    }

    #[test]
    fn twopole_g_closed_form() {
        let cc = 0.25;
        let model = DropletModel::new(DropletFamily::TwoPole { c: cc }).unwrap();
        let w = c(0.0, 0.5);
        let closed = (9.0 * cc.powi(4) - 1.0) * w * (3.0 + cc * cc * w * w) / (1.0 + 3.0 * cc * cc * w * w);
        assert!((model.g_hat(w).unwrap() - closed).norm() < 1e-12);
    }

    #[test]
    fn mpole_constant_fits() {
        for m in 2..=6 {
            for cc in [0.1, 0.3] {
                let a = mpole_constant(m, cc).unwrap();
                let expected = 1.0 - ((m + 1) as f64).powi(2) * cc.powi(2 * m as i32);
                assert!((a - expected).abs() < 1e-12, "m={m} c={cc}: {a}");
            }
        }
        // continuity toward c = 0
        let small = mpole_constant(3, 1e-3).unwrap();
        assert!((small - 1.0).abs() < 1e-10);
    }

    #[test]
    fn traces_have_stated_symmetries() {
        let tr = DropletFamily::Ksv { c: 0.3 }.boundary_trace(512).unwrap();
        let n = 512;
        for k in 0..=n {
            let a = tr.points[k];
            let b = tr.points[n - k];
            assert!((a - b.conj()).norm() < 1e-12);
        }
        let m = 3;
        let fam = DropletFamily::MPole { m, c: 0.2 };
        let n = 768;
        let tr = fam.boundary_trace(n).unwrap();
        let rot = C64::from_polar(1.0, 2.0 * PI / m as f64);
        let shift = n / m as usize;
        for k in 0..n {
            // φ(ρw) = φ(w)/ρ for an m-th root of unity ρ
            let a = tr.points[k];
            let b = tr.points[(k + shift) % n];
            assert!((b - a / rot).norm() < 1e-12);
        }
    }

    #[test]
    fn circle_trace_is_unit_circle() {
        let tr = DropletFamily::Circle.boundary_trace(256).unwrap();
        for (p, k) in tr.points.iter().zip(&tr.curvature) {
            assert!((p.norm() - 1.0).abs() < 1e-14);
            assert!((k - 1.0).abs() < 1e-12);
        }
        for t in &tr.tangents {
            assert!((t.norm() - 1.0).abs() < 1e-14);
        }
        assert!((tr.points[0] - tr.points[256]).norm() < 1e-15);
    }

    #[test]
    fn general_map_special_cases() {
        let w = c(0.5, 0.0);
        let circ = twopole_general_phi(0.3, 0.3, w).unwrap();
        assert!((circ + 1.0 / w).norm() < 1e-15);
        let tp = DropletFamily::TwoPole { c: 0.3 };
        for w in [c(0.5, 0.1), c(-0.2, 0.7)] {
            assert!((twopole_general_phi(0.3, -0.3, w).unwrap() - tp.phi(w).unwrap()).norm() < 1e-14);
        }
        assert!(q_limit_check(0.3, 0.3).is_err());
    }

    #[test]
    fn q_limit_is_first_order() {
        let a = q_limit_check(0.3, 1e-3).unwrap();
        let b = q_limit_check(0.3, 1e-4).unwrap();
        let ratio = a / b;
        assert!(ratio > 10.0 / 1.5 && ratio < 15.0, "{ratio}");
    }

    #[test]
    fn validation() {
        assert!(DropletFamily::Ksv { c: -0.1 }.validate().is_err());
        assert!(DropletFamily::Ksv { c: 0.7 }.validate().unwrap().len() == 1);
        assert!(DropletFamily::TwoPole { c: 0.2 }.validate().unwrap().is_empty());
        assert!(DropletFamily::MPole { m: 1, c: 0.2 }.validate().is_err());
        assert!(DropletFamily::MPole { m: 3, c: 0.99 }.validate().is_err());
        assert!(DropletFamily::MPole { m: 5, c: 0.2 }.validate().unwrap().len() == 1);
    }
}
