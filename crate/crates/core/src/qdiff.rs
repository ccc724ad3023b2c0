//! Quadratic differentials on the sphere in canonical factored form
//!
//! `Q(w) = -C ∏(w - A_k)(1 - conj(A_k) w) ∏(w - ζ_j)^{-n_j}(1 - conj(ζ_j) w)^{-n_j}`
//!
//! with all zeros and poles in the open unit disc and the zero count two less
//! than the total pole order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DropletError, Result};

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereQD {
    pub constant: f64,
    /// Zeros, repeated according to multiplicity.
    pub zeros: Vec<C64>,
    /// Pole locations with their orders.
    pub poles: Vec<(C64, u32)>,
}

impl SphereQD {
    /// Validated constructor.
    pub fn build(constant: f64, zeros: Vec<C64>, poles: Vec<(C64, u32)>) -> Result<Self> {
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(DropletError::InvalidParameter(format!("constant must be positive, got {constant}")));
        }
        if let Some(z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(DropletError::InvalidParameter(format!("zero {z} is not inside the unit disc")));
        }
        if let Some((p, _)) = poles.iter().find(|(p, _)| !(p.norm() < 1.0)) {
            return Err(DropletError::InvalidParameter(format!("pole {p} is not inside the unit disc")));
        }
        if poles.iter().any(|&(_, n)| n == 0) {
            return Err(DropletError::InvalidParameter("pole orders must be at least 1".into()));
        }
        let total: u32 = poles.iter().map(|&(_, n)| n).sum();
        if zeros.len() as i64 != total as i64 - 2 {
            return Err(DropletError::InvalidParameter(format!(
                "need {} zeros for total pole order {total}, got {}",
                total as i64 - 2,
                zeros.len()
            )));
        }
        Ok(Self { constant, zeros, poles })
    }

    /// Constructor without any checks, for counterexamples.
    pub fn unchecked(constant: f64, zeros: Vec<C64>, poles: Vec<(C64, u32)>) -> Self {
        Self { constant, zeros, poles }
    }

    pub fn is_canonical(&self) -> bool {
        Self::build(self.constant, self.zeros.clone(), self.poles.clone()).is_ok()
    }

    /// Total pole order N.
    pub fn total_order(&self) -> u32 {
        self.poles.iter().map(|&(_, n)| n).sum()
    }

    /// Evaluates Q(w), accumulating log-magnitudes and unit phases separately.
    pub fn eval(&self, w: C64) -> Result<C64> {
        let mut log_mag = self.constant.ln();
        let mut phase = C64::new(-1.0, 0.0);
        let mut push = |f: C64, power: i32| {
            let r = f.norm();
            log_mag += power as f64 * r.ln();
            phase *= (f / r).powi(power);
        };
        for a in &self.zeros {
            let f1 = w - a;
            let f2 = 1.0 - a.conj() * w;
            if f1.norm() == 0.0 || f2.norm() == 0.0 {
                return Ok(C64::new(0.0, 0.0));
            }
            push(f1, 1);
            push(f2, 1);
        }
        for &(z, n) in &self.poles {
            let f1 = w - z;
            let f2 = 1.0 - z.conj() * w;
            if f1.norm() == 0.0 || f2.norm() == 0.0 {
                return Err(DropletError::Pole { what: "quadratic differential", location: w });
            }
            push(f1, -(n as i32));
            push(f2, -(n as i32));
        }
        Ok(phase * log_mag.exp())
    }

    /// Checks `-e^{2iθ} Q(e^{iθ}) > 0` at `n` nodes, allowing a relative
    /// imaginary part up to `imag_tol`.
    pub fn positivity_on_circle(&self, n: usize, imag_tol: f64) -> Result<bool> {
        if let Some((p, _)) = self.poles.iter().find(|(p, _)| (p.norm() - 1.0).abs() < 1e-14) {
            return Err(DropletError::Pole { what: "quadratic differential on the unit circle", location: *p });
        }
        for k in 0..n {
            let w = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
            let v = -w * w * self.eval(w)?;
            if !(v.re > 0.0) || v.im.abs() > imag_tol * v.norm() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Max relative deviation of `conj(Q(1/conj w)) w^{-4}` from Q(w).
    pub fn reflection_symmetry(&self, points: &[C64]) -> Result<f64> {
        let mut dev: f64 = 0.0;
        for &w in points {
            let q = self.eval(w)?;
            let r = self.eval(1.0 / w.conj())?.conj() / w.powi(4);
            dev = dev.max((q - r).norm() / q.norm().max(f64::MIN_POSITIVE));
        }
        Ok(dev)
    }

    /// The QD whose positive function `-w²Q` is the product of the two
    /// positive functions.
    pub fn product(&self, other: &SphereQD) -> SphereQD {
        let mut zeros = self.zeros.clone();
        zeros.extend(&other.zeros);
        let mut poles = self.poles.clone();
        poles.extend(&other.poles);
        normalize(self.constant * other.constant, zeros, poles, -2)
    }

    /// The QD whose positive function is the quotient of the two positive
    /// functions.
    pub fn quotient(&self, other: &SphereQD) -> SphereQD {
        let mut zeros = self.zeros.clone();
        for &(z, n) in &other.poles {
            zeros.extend(std::iter::repeat(z).take(n as usize));
        }
        let mut poles = self.poles.clone();
        poles.extend(other.zeros.iter().map(|&z| (z, 1)));
        normalize(self.constant / other.constant, zeros, poles, 2)
    }

    /// Order of Q dω² at ∞ in the coordinate ω = 1/w, from the factors.
    pub fn order_at_infinity(&self) -> i64 {
        let zeros: i64 = self.zeros.iter().map(|a| if a.norm() == 0.0 { -1 } else { -2 }).sum();
        let poles: i64 = self.poles.iter().map(|&(z, n)| if z.norm() == 0.0 { n as i64 } else { 2 * n as i64 }).sum();
        zeros + poles - 4
    }

    /// Order at ∞ measured from |Q(1/ω) ω^{-4}| at two small ω.
    pub fn order_at_infinity_sampled(&self) -> Result<f64> {
        let probe = |s: f64| -> Result<f64> {
            let om = C64::from_polar(s, 0.3);
            Ok((self.eval(1.0 / om)? / om.powi(4)).norm().ln())
        };
        let (s1, s2) = (1e-3, 1e-4);
        Ok((probe(s1)? - probe(s2)?) / (s1.ln() - s2.ln()))
    }
}

/// Merges duplicate poles, shifts the order at 0 and cancels zeros at 0
/// against a pole there.
fn normalize(constant: f64, mut zeros: Vec<C64>, poles: Vec<(C64, u32)>, shift_at_zero: i64) -> SphereQD {
    let mut merged: Vec<(C64, i64)> = Vec::new();
    for (z, n) in poles {
        match merged.iter_mut().find(|(p, _)| *p == z) {
            Some(entry) => entry.1 += n as i64,
            None => merged.push((z, n as i64)),
        }
    }
    let origin = C64::new(0.0, 0.0);
    match merged.iter_mut().find(|(p, _)| *p == origin) {
        Some(entry) => entry.1 += shift_at_zero,
        None => merged.push((origin, shift_at_zero)),
    }
    let at_zero = merged.iter().find(|(p, _)| *p == origin).map(|e| e.1).unwrap_or(0);
    let mut order_zero = at_zero;
    while order_zero > 0 {
        match zeros.iter().position(|z| *z == origin) {
            Some(i) => {
                zeros.remove(i);
                order_zero -= 1;
            }
            None => break,
        }
    }
    while order_zero < 0 {
        zeros.push(origin);
        order_zero += 1;
    }
    let poles = merged
        .into_iter()
        .map(|(p, n)| if p == origin { (p, order_zero) } else { (p, n) })
        .filter(|&(_, n)| n > 0)
        .map(|(p, n)| (p, n as u32))
        .collect();
    SphereQD { constant, zeros, poles }
}

/// Canonical factored QD of the KSV droplet (C = 1).
pub fn ksv_qd(c: f64) -> Result<SphereQD> {
    let a = C64::from_polar(c, std::f64::consts::FRAC_PI_3);
    let b = a.conj();
    SphereQD::build(1.0, vec![a, a, b, b], vec![(C64::new(0.0, 0.0), 4), (C64::new(c, 0.0), 2)])
}

/// Canonical factored QD of the two-pole droplet (C = 1).
pub fn twopole_qd(c: f64) -> Result<SphereQD> {
    let a = C64::new(0.0, 3f64.sqrt() * c);
    let o = C64::new(0.0, 0.0);
    SphereQD::build(
        1.0,
        vec![a, a, o, o, a.conj(), a.conj()],
        vec![(o, 4), (C64::new(c, 0.0), 2), (C64::new(-c, 0.0), 2)],
    )
}
