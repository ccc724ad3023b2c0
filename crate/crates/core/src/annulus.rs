//! Two-component droplets on the annulus r < |w| < 1: the prime function,
//! positive boundary factors, Jacobi theta series and numerical probes of the
//! candidate map derivative.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{DropletError, Result};
use crate::numerics::{cauchy_derivative, integrate_loop_with, CircleLoop, LoopQuadrature, Polyline};
use crate::sampling::disc_points;
use crate::tolerances::Tolerances;

type C64 = Complex64;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusConfig {
    /// Inner radius of the annulus, also the nome of the theta series.
    pub r: f64,
    /// Pole parameter, r < x < 1.
    pub x: f64,
    /// Series truncation tolerance.
    pub eps: f64,
}

impl AnnulusConfig {
    pub fn new(r: f64, x: f64) -> Result<Self> {
        Self::with_eps(r, x, 1e-14)
    }

    pub fn with_eps(r: f64, x: f64, eps: f64) -> Result<Self> {
        if !(r > 0.0 && r < x && x < 1.0) {
            return Err(DropletError::InvalidParameter(format!("annulus needs 0 < r < x < 1, got r={r}, x={x}")));
        }
        if !(eps > 0.0 && eps < 1e-3) {
            return Err(DropletError::InvalidParameter(format!("series tolerance {eps} out of range")));
        }
        Ok(Self { r, x, eps })
    }

    /// Smallest K with r^{2K} (|z| + 1/|z| + 2) < ε.
    pub fn truncation_for(&self, modulus: f64) -> usize {
        let bound = modulus + 1.0 / modulus + 2.0;
        let k = ((self.eps / bound).ln() / (2.0 * self.r.ln())).ceil();
        k.max(1.0) as usize
    }

    /// Truncation valid for every argument with r² ≤ |z| ≤ 1/r².
    pub fn truncation(&self) -> usize {
        self.truncation_for(self.r * self.r)
    }
}

/// P(z) = (1-z) ∏_{k≥1} (1 - r^{2k} z)(1 - r^{2k}/z), truncated per the tail bound.
pub fn prime_p(z: C64, cfg: &AnnulusConfig) -> Result<C64> {
    if z == C64::new(0.0, 0.0) || !z.is_finite() {
        return Err(DropletError::Pole { what: "prime function argument", location: z });
    }
    let k_max = cfg.truncation_for(z.norm());
    let r2 = cfg.r * cfg.r;
    let zi = z.inv();
    let mut q = 1.0;
    let mut v = 1.0 - z;
    for _ in 0..k_max {
        q *= r2;
        v *= (1.0 - q * z) * (1.0 - q * zi);
    }
    Ok(v)
}

/// Zero A and pole B of f_AB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimeFactor {
    pub a: C64,
    pub b: C64,
}

impl PrimeFactor {
    pub fn new(a: C64, b: C64) -> Self {
        Self { a, b }
    }

    /// conj(A)/conj(B) is real and positive, the hypothesis for positivity.
    pub fn is_positive_pair(&self) -> bool {
        let q = self.a.conj() / self.b.conj();
        q.re > 0.0 && q.im.abs() <= 1e-12 * q.re
    }
}

/// f_AB(z) = P(z/A) P(Āz) / (P(z/B) P(B̄z)).
pub fn f_ab(z: C64, factor: &PrimeFactor, cfg: &AnnulusConfig) -> Result<C64> {
    if factor.a == factor.b {
        return Ok(C64::new(1.0, 0.0));
    }
    let (a, b) = (factor.a, factor.b);
    let num = prime_p(z / a, cfg)? * prime_p(a.conj() * z, cfg)?;
    let den = prime_p(z / b, cfg)? * prime_p(b.conj() * z, cfg)?;
    if den.norm() < 1e-14 * num.norm().max(1.0) {
        return Err(DropletError::Pole { what: "f_AB", location: z });
    }
    Ok(num / den)
}

fn theta_series(v: C64, nome: f64, eps: f64, odd: bool) -> C64 {
    if nome == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let ln_q = nome.ln();
    let mut sum = C64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for n in 0..MAX_TERMS {
        let h = n as f64 + 0.5;
        let arg = (2 * n + 1) as f64 * v;
        let trig = if odd { arg.sin() } else { arg.cos() };
        let sign = if odd && n % 2 == 1 { -1.0 } else { 1.0 };
        let term = 2.0 * sign * (h * h * ln_q).exp() * trig;
        sum += term;
        let size = term.norm();
        if size < prev && size < eps * (sum.norm() + 1.0) {
            break;
        }
        prev = size;
    }
    sum
}

/// θ₁(v) = 2 Σ (-1)ⁿ q^{(n+½)²} sin((2n+1)v).
pub fn theta1(v: C64, nome: f64) -> C64 {
    theta_series(v, nome, 1e-16, true)
}

/// θ₂(v) = 2 Σ q^{(n+½)²} cos((2n+1)v).
pub fn theta2(v: C64, nome: f64) -> C64 {
    theta_series(v, nome, 1e-16, false)
}

/// τ = -Log w.
fn tau_of(w: C64) -> C64 {
    -w.ln()
}

/// ρ(w) = P(w) e^{τ/2} / θ₁(iτ/2, r), which should not depend on w.
pub fn theta_ratio(w: C64, cfg: &AnnulusConfig) -> Result<C64> {
    let tau = tau_of(w);
    let th = theta1(I * tau / 2.0, cfg.r);
    if th.norm() < 1e-300 {
        return Err(DropletError::Pole { what: "theta ratio", location: w });
    }
    Ok(prime_p(w, cfg)? * (tau / 2.0).exp() / th)
}

/// Max |ρ(w)/ρ(w₀) - 1| over `n_samples` points on each of the given radii.
pub fn theta_prime_consistency(cfg: &AnnulusConfig, radii: &[f64], n_samples: usize) -> Result<f64> {
    let mut reference = None;
    let mut dev: f64 = 0.0;
    for &s in radii {
        for k in 0..n_samples {
            let mut t = 2.0 * PI * (k as f64 + 0.31) / n_samples as f64;
            let mut w = C64::from_polar(s, t);
            // zeros of P sit at w = r^{2k}; step off them
            while prime_p(w, cfg)?.norm() < 1e-8 {
                t += 1e-3;
                w = C64::from_polar(s, t);
            }
            let rho = theta_ratio(w, cfg)?;
            let r0 = *reference.get_or_insert(rho);
            dev = dev.max((rho / r0 - 1.0).norm());
        }
    }
    Ok(dev)
}

/// φ' evaluated from the prime-function product and from theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiPrimeForms {
    /// P(-x e^{-iπ/3} w)² P(-x e^{iπ/3} w)² / (w P(-xw)⁴).
    pub product: C64,
    /// e^{τ} θ₁(v+2π/3)² θ₁(v+π/3)² / θ₁(v+π/2)⁴, v = iτ/2 - (i/2) log x.
    pub theta: C64,
    /// Same as `theta` with the prefactor e^{-τ}.
    pub theta_printed: C64,
    /// e^{-τ} (θ₁(u)/θ₂(u))⁴, u = (i/2)(log x - τ).
    pub theta_collapsed: C64,
}

pub fn product_phi_prime(w: C64, cfg: &AnnulusConfig) -> Result<C64> {
    let rot = C64::from_polar(1.0, PI / 3.0);
    let x = cfg.x;
    let den = prime_p(-x * w, cfg)?;
    if den.norm() < 1e-13 {
        return Err(DropletError::Pole { what: "annulus map derivative", location: w });
    }
    let n1 = prime_p(-x * rot.conj() * w, cfg)?;
    let n2 = prime_p(-x * rot * w, cfg)?;
    Ok((n1 * n2).powi(2) / (w * den.powi(4)))
}

pub fn annulus_phi_prime(w: C64, cfg: &AnnulusConfig) -> Result<PhiPrimeForms> {
    let product = product_phi_prime(w, cfg)?;
    let tau = tau_of(w);
    let lx = cfg.x.ln();
    let v = I * tau / 2.0 - I * lx / 2.0;
    let den = theta1(v + PI / 2.0, cfg.r);
    if den.norm() < 1e-13 {
        return Err(DropletError::Pole { what: "theta form of the map derivative", location: w });
    }
    let core = (theta1(v + 2.0 * PI / 3.0, cfg.r) * theta1(v + PI / 3.0, cfg.r)).powi(2) / den.powi(4);
    let u = I / 2.0 * (lx - tau);
    let collapsed = (theta1(u, cfg.r) / theta2(u, cfg.r)).powi(4);
    Ok(PhiPrimeForms {
        product,
        theta: tau.exp() * core,
        theta_printed: (-tau).exp() * core,
        theta_collapsed: (-tau).exp() * collapsed,
    })
}

/// Max deviation of product/theta from its value at the first sample, for
/// each theta variant: (corrected, printed prefactor, collapsed).
pub fn phi_prime_ratio_spread(cfg: &AnnulusConfig, radius: f64, n_samples: usize) -> Result<[f64; 3]> {
    let mut first: Option<[C64; 3]> = None;
    let mut out = [0.0f64; 3];
    for k in 0..n_samples {
        let w = C64::from_polar(radius, 2.0 * PI * (k as f64 + 0.17) / n_samples as f64);
        let f = annulus_phi_prime(w, cfg)?;
        let ratios = [f.product / f.theta, f.product / f.theta_printed, f.product / f.theta_collapsed];
        let base = *first.get_or_insert(ratios);
        for j in 0..3 {
            out[j] = out[j].max((ratios[j] / base[j] - 1.0).norm());
        }
    }
    Ok(out)
}

/// Zeros of P(-xw), where the theta form of φ' has its poles: w = -r^{2k}/x.
pub fn theta_form_poles(cfg: &AnnulusConfig, k_range: std::ops::RangeInclusive<i32>) -> Vec<C64> {
    k_range.map(|k| C64::new(-cfg.r.powi(2 * k) / cfg.x, 0.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub radii: Vec<f64>,
    /// ∮_{|w|=s} φ' dw.
    pub periods: Vec<C64>,
    /// (1/2πi) ∮ w⁻¹ (w φ'(w)) dw, the coefficient of a logarithmic term in φ.
    pub log_coefficients: Vec<C64>,
}

impl PeriodReport {
    pub fn spread(&self) -> f64 {
        let p0 = self.periods.first().copied().unwrap_or_default();
        self.periods.iter().map(|p| (p - p0).norm()).fold(0.0, f64::max)
    }
}

pub fn annulus_periods(cfg: &AnnulusConfig, radii: &[f64]) -> Result<PeriodReport> {
    let quad = LoopQuadrature::default();
    let mut periods = Vec::with_capacity(radii.len());
    let mut logs = Vec::with_capacity(radii.len());
    for &s in radii {
        if !(s >= cfg.r && s <= 1.0) {
            return Err(DropletError::InvalidParameter(format!("radius {s} outside [{}, 1]", cfg.r)));
        }
        let lp = CircleLoop::ccw(C64::new(0.0, 0.0), s)?;
        let mut failure = None;
        let p = integrate_loop_with(
            |w| match product_phi_prime(w, cfg) {
                Ok(v) => w.inv() * (w * v),
                Err(e) => {
                    failure.get_or_insert(e);
                    C64::new(f64::NAN, f64::NAN)
                }
            },
            &lp,
            &quad,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let p = p?;
        periods.push(p);
        logs.push(p / (2.0 * PI * I));
    }
    Ok(PeriodReport { radii: radii.to_vec(), periods, log_coefficients: logs })
}

/// Period at the unit circle for each x, at fixed r.
pub fn period_scan(r: f64, xs: &[f64]) -> Result<Vec<(f64, C64)>> {
    xs.iter()
        .map(|&x| {
            let cfg = AnnulusConfig::new(r, x)?;
            Ok((x, annulus_periods(&cfg, &[1.0])?.periods[0]))
        })
        .collect()
}

/// Sign changes of Im(period) along a scan, as (x_lo, x_hi) brackets.
pub fn period_brackets(scan: &[(f64, C64)]) -> Vec<(f64, f64)> {
    scan.windows(2)
        .filter(|p| p[0].1.im.signum() != p[1].1.im.signum())
        .map(|p| (p[0].0, p[1].0))
        .collect()
}

/// -∏ f_{A_i B_i}(w) / w², the annulus quadratic differential.
pub fn annulus_qd(w: C64, factors: &[PrimeFactor], cfg: &AnnulusConfig) -> Result<C64> {
    let mut v = C64::new(1.0, 0.0);
    for f in factors {
        v *= f_ab(w, f, cfg)?;
    }
    Ok(-v / (w * w))
}

/// Whether Q(w)(iw)² is real and positive at `n` nodes on both boundary
/// circles. Requires ∏ A_i/B_i = 1.
pub fn annulus_qd_positive(factors: &[PrimeFactor], cfg: &AnnulusConfig, n: usize, imag_tol: f64) -> Result<bool> {
    let prod: C64 = factors.iter().map(|f| f.a / f.b).product();
    if (prod - 1.0).norm() > 1e-12 {
        return Err(DropletError::InvalidParameter(format!("product of A_i/B_i is {prod}, expected 1")));
    }
    for s in [1.0, cfg.r] {
        for k in 0..n {
            let w = C64::from_polar(s, 2.0 * PI * (k as f64 + 0.5) / n as f64);
            let v = annulus_qd(w, factors, cfg)? * (I * w).powi(2);
            if !(v.re > 0.0 && v.im.abs() <= imag_tol * v.re) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Candidate boundary curves traced by integrating φ' around |w| = 1 and |w| = r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusTrace {
    /// θ grid from -π to π inclusive.
    pub thetas: Vec<f64>,
    pub outer: Vec<C64>,
    pub inner: Vec<C64>,
    /// Signed curvature of the θ-increasing traversal at each node.
    pub outer_curvature: Vec<f64>,
    pub inner_curvature: Vec<f64>,
    /// ∮ φ' dw around each circle (outer, inner).
    pub periods: [C64; 2],
    /// |end - start| of each trace.
    pub closure_defects: [f64; 2],
    /// A trace fails to close within the requested tolerance.
    pub open: bool,
}

impl AnnulusTrace {
    pub fn polylines(&self) -> Result<(Polyline, Polyline)> {
        let closed = !self.open;
        Ok((Polyline::new(self.outer.clone(), closed)?, Polyline::new(self.inner.clone(), closed)?))
    }
}

/// Spectral antiderivative of φ' along |w| = s, anchored so the value at
/// θ = 0 equals `anchor`. Returns n+1 points on θ ∈ [-π, π] and the period.
fn trace_circle(cfg: &AnnulusConfig, s: f64, n: usize, anchor: C64) -> Result<(Vec<C64>, C64)> {
    let mut buf: Vec<C64> = (0..n)
        .map(|j| {
            let w = C64::from_polar(s, -PI + 2.0 * PI * j as f64 / n as f64);
            Ok(I * w * product_phi_prime(w, cfg)?)
        })
        .collect::<Result<_>>()?;
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let nf = n as f64;
    let mean = buf[0] / nf;
    for (j, c) in buf.iter_mut().enumerate() {
        let k = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
        *c = if k == 0 || 2 * j == n { C64::new(0.0, 0.0) } else { *c / (nf * I * k as f64) };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let at = |j: usize| buf[j % n] + mean * (2.0 * PI * j as f64 / nf);
    let shift = anchor - at(n / 2);
    let points = (0..=n).map(|j| at(j) + shift).collect();
    Ok((points, 2.0 * PI * mean))
}

/// Composite Simpson integral of φ' along the real segment from 1 down to r.
fn radial_link(cfg: &AnnulusConfig, intervals: usize) -> Result<C64> {
    let h = (cfg.r - 1.0) / intervals as f64;
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..=intervals {
        let wt = if j == 0 || j == intervals {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += wt * product_phi_prime(C64::new(1.0 + h * j as f64, 0.0), cfg)?;
    }
    Ok(sum * h / 3.0)
}

/// Curvature of θ -> φ(s e^{iθ}); φ'' comes from a Cauchy integral.
fn trace_curvature(cfg: &AnnulusConfig, s: f64, theta: f64) -> Result<f64> {
    let w = C64::from_polar(s, theta);
    // φ' is analytic for r²/x < |w| < 1/x
    let radius = 0.25 * (1.0 / cfg.x - s).min(s - cfg.r * cfg.r / cfg.x);
    let mut failure = None;
    let d2 = cauchy_derivative(
        |z| {
            product_phi_prime(z, cfg).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                C64::new(f64::NAN, f64::NAN)
            })
        },
        w,
        radius,
        64,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let d1 = product_phi_prime(w, cfg)?;
    let z1 = I * w * d1;
    let z2 = -w * d1 - w * w * d2;
    Ok((z2 * z1.conj()).im / z1.norm().powi(3))
}

pub fn annulus_boundary_trace(cfg: &AnnulusConfig, n: usize, closure_tol: f64) -> Result<AnnulusTrace> {
    if n < 16 || !n.is_power_of_two() {
        return Err(DropletError::InvalidParameter(format!("trace needs a power of two n >= 16, got {n}")));
    }
    let (outer, p_outer) = trace_circle(cfg, 1.0, n, C64::new(0.0, 0.0))?;
    let link = radial_link(cfg, 4096)?;
    let (inner, p_inner) = trace_circle(cfg, cfg.r, n, link)?;
    let defect = |v: &[C64]| (v[n] - v[0]).norm();
    let closure_defects = [defect(&outer), defect(&inner)];
    let thetas: Vec<f64> = (0..=n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect();
    let outer_curvature = thetas.iter().map(|&t| trace_curvature(cfg, 1.0, t)).collect::<Result<_>>()?;
    let inner_curvature = thetas.iter().map(|&t| trace_curvature(cfg, cfg.r, t)).collect::<Result<_>>()?;
    Ok(AnnulusTrace {
        thetas,
        outer,
        inner,
        outer_curvature,
        inner_curvature,
        periods: [p_outer, p_inner],
        closure_defects,
        open: closure_defects.iter().any(|&d| d > closure_tol),
    })
}

/// Residuals of the annulus identities for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusIdentityReport {
    pub r: f64,
    pub x: f64,
    pub truncation: usize,
    /// Max of |P(1/z) + P(z)/z| and |P(r²z) + P(z)/z| over 100 annulus points.
    pub prime_identity: f64,
    /// f_AB real and positive on both circles for 20 pairs with A/B > 0.
    pub f_ab_positive: bool,
    /// Two-factor quadratic differential positive on both circles.
    pub qd_positive: bool,
    pub theta_ratio: f64,
    /// Spread of product/theta ratios: corrected, printed prefactor, collapsed.
    pub phi_prime_forms: [f64; 3],
    pub period: C64,
    pub period_spread: f64,
    pub checks: std::collections::BTreeMap<String, bool>,
    pub passed: bool,
}

fn positive_pairs(cfg: &AnnulusConfig, count: usize) -> Vec<PrimeFactor> {
    let r = cfg.r;
    (0..count)
        .map(|k| {
            let s = |j: usize| ((k * 7 + j) as f64 * 0.618_033_988_749_895).fract();
            let dir = C64::from_polar(1.0, 2.0 * PI * s(1));
            let ra = r + (0.05 + 0.9 * s(2)) * (1.0 - r);
            let rb = r + (0.05 + 0.9 * s(3)) * (1.0 - r);
            PrimeFactor::new(ra * dir, rb * dir)
        })
        .collect()
}

pub fn identity_report(cfg: &AnnulusConfig, tol: &Tolerances) -> Result<AnnulusIdentityReport> {
    let r = cfg.r;
    let mut prime: f64 = 0.0;
    for z in disc_points(100, r, 1.0, &[C64::new(1.0, 0.0)], 1e-3) {
        let p = prime_p(z, cfg)?;
        prime = prime.max((prime_p(z.inv(), cfg)? + p / z).norm());
        prime = prime.max((prime_p(r * r * z, cfg)? + p / z).norm());
    }
    let mut f_ok = true;
    for f in positive_pairs(cfg, 20) {
        for s in [1.0, r] {
            for k in 0..64 {
                let v = f_ab(C64::from_polar(s, 2.0 * PI * (k as f64 + 0.5) / 64.0), &f, cfg)?;
                f_ok &= v.re > 0.0 && v.im.abs() <= tol.positivity_imag * v.re;
            }
        }
    }
    let d = C64::from_polar(1.0, 1.1);
    let (a, b) = (0.5 * (1.0 + r), 0.5 * (1.0 + r) + 0.25 * (1.0 - r));
    let factors = [PrimeFactor::new(a * d, b * d), PrimeFactor::new(b * d.conj(), a * d.conj())];
    let qd_positive = annulus_qd_positive(&factors, cfg, 256, tol.positivity_imag)?;
    let theta_ratio = theta_prime_consistency(cfg, &[r.sqrt(), 0.5 * (r.sqrt() + 1.0)], 32)?;
    let phi_prime_forms = phi_prime_ratio_spread(cfg, r.sqrt(), 64)?;
    let periods = annulus_periods(cfg, &[r, r.sqrt(), 0.5 * (r.sqrt() + 1.0), 1.0])?;

    let mut checks = std::collections::BTreeMap::new();
    checks.insert("prime_identity".to_string(), prime <= tol.prime_identity);
    checks.insert("f_ab_positive".to_string(), f_ok);
    checks.insert("qd_positive".to_string(), qd_positive);
    checks.insert("theta_ratio".to_string(), theta_ratio <= tol.theta_ratio);
    checks.insert("phi_prime_forms".to_string(), phi_prime_forms[0] <= tol.phi_prime_forms);
    checks.insert("period_invariance".to_string(), periods.spread() <= tol.period_invariance);
    let passed = checks.values().all(|&b| b);
    Ok(AnnulusIdentityReport {
        r,
        x: cfg.x,
        truncation: cfg.truncation(),
        prime_identity: prime,
        f_ab_positive: f_ok,
        qd_positive,
        theta_ratio,
        phi_prime_forms,
        period: periods.periods[3],
        period_spread: periods.spread(),
        checks,
        passed,
    })
}
