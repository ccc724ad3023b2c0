use crate::error::{DropletError, Result};

/// Locates the switch point of a predicate that is true at `lo` and false at
/// `hi`. The returned value is the midpoint of the final bracket.
pub fn bisect_threshold<P>(predicate: P, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    P: FnMut(f64) -> bool,
{
    bisect_bracket(predicate, lo, hi, tol).map(|(a, b)| 0.5 * (a + b))
}

/// Same as [`bisect_threshold`] but returns the final bracket, with the
/// predicate true at the left end and false at the right end.
pub fn bisect_bracket<P>(mut predicate: P, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    P: FnMut(f64) -> bool,
{
    if !(tol > 0.0) || !(lo < hi) {
        return Err(DropletError::InvalidParameter(format!("bad bisection setup [{lo}, {hi}] tol {tol}")));
    }
    let lo_value = predicate(lo);
    let hi_value = predicate(hi);
    if !lo_value || hi_value {
        return Err(DropletError::InvalidBracket { lo, hi, lo_value, hi_value });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if predicate(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((a, b))
}
