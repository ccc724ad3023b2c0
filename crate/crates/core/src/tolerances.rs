//! Pass/fail thresholds for the verification checks.
//!
//! Every field can be overridden from a configuration file; missing keys keep
//! their defaults.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Max boundary-equation residual over the θ grid.
    pub boundary_residual: f64,
    /// Max |∮ G φ' dw| around an interior pole.
    pub residue: f64,
    /// Closed-form cross-checks (scaled deviation).
    pub closed_form: f64,
    /// Lemma curvature against finite-difference curvature.
    pub curvature_numeric: f64,
    /// Factored quadratic differential against F²φ'² (relative).
    pub qd_match: f64,
    pub reflection: f64,
    /// Allowed imaginary part of -w²Q on the unit circle (relative).
    pub positivity_imag: f64,
    pub prime_identity: f64,
    pub theta_ratio: f64,
    pub phi_prime_forms: f64,
    pub period_invariance: f64,
    pub width: f64,
    /// Stop rule for loop integrals.
    pub loop_rel_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            boundary_residual: 1e-10,
            residue: 1e-12,
            closed_form: 1e-11,
            curvature_numeric: 1e-5,
            qd_match: 1e-11,
            reflection: 1e-12,
            positivity_imag: 1e-10,
            prime_identity: 1e-12,
            theta_ratio: 1e-10,
            phi_prime_forms: 1e-9,
            period_invariance: 1e-10,
            width: 1e-8,
            loop_rel_tol: 1e-13,
        }
    }
}

impl Tolerances {
    /// Names of fields holding a non-positive or non-finite value.
    pub fn invalid_fields(&self) -> Vec<&'static str> {
        let fields = [
            ("boundary_residual", self.boundary_residual),
            ("residue", self.residue),
            ("closed_form", self.closed_form),
            ("curvature_numeric", self.curvature_numeric),
            ("qd_match", self.qd_match),
            ("reflection", self.reflection),
            ("positivity_imag", self.positivity_imag),
            ("prime_identity", self.prime_identity),
            ("theta_ratio", self.theta_ratio),
            ("phi_prime_forms", self.phi_prime_forms),
            ("period_invariance", self.period_invariance),
            ("width", self.width),
            ("loop_rel_tol", self.loop_rel_tol),
        ];
        fields.iter().filter(|(_, v)| !(*v > 0.0 && v.is_finite())).map(|(k, _)| *k).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert!(Tolerances::default().invalid_fields().is_empty());
    }

    #[test]
    fn partial_override_keeps_defaults() {
        let t: Tolerances = serde_json::from_str(r#"{"residue": 1e-9}"#).unwrap();
        assert_eq!(t.residue, 1e-9);
        assert_eq!(t.width, 1e-8);
        let bad = Tolerances { width: -1.0, ..Tolerances::default() };
        assert_eq!(bad.invalid_fields(), vec!["width"]);
    }
}
