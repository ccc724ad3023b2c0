//! Numerical substrate: loop integrals, winding numbers, bisection and
//! polyline simplicity.

pub mod bisect;
pub mod polyline;
pub mod quadrature;
pub mod winding;

pub use bisect::{bisect_bracket, bisect_threshold};
pub use polyline::{polyline_is_simple, Crossing, Polyline, Simplicity, SimplicityReport};
pub use quadrature::{integrate_loop, integrate_loop_with, CircleLoop, LoopQuadrature, Orientation};
pub use winding::{winding_along, winding_count};

use num_complex::Complex64;

/// Derivative of an analytic function from a Cauchy integral on a small circle.
///
/// The circle must stay inside the region of analyticity; `radius` is its
/// radius and `nodes` the number of trapezoid nodes.
pub fn cauchy_derivative<F>(mut f: F, w0: Complex64, radius: f64, nodes: usize) -> Complex64
where
    F: FnMut(Complex64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let e = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / nodes as f64);
        acc += f(w0 + e * radius) * e.conj();
    }
    acc / (nodes as f64 * radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_derivative_of_exp() {
        let w0 = Complex64::new(0.3, -0.2);
        let d = cauchy_derivative(|w| w.exp(), w0, 0.05, 32);
        assert!((d - w0.exp()).norm() < 1e-14);
    }
}
