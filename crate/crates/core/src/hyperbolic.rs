//! Overflow-free hyperbolic ratios.
//!
//! Every quotient of hyperbolic functions used by the solver is rewritten as a
//! product of exponentials with non-positive arguments, with `expm1` taking care
//! of the small-argument end.

use libm::{exp, expm1};

/// `sinh(u) / sinh(v)` for `0 ≤ u ≤ v`, `v > 0`.
///
/// Equal to `e^{-(v-u)} (1 - e^{-2u}) / (1 - e^{-2v})`; no intermediate exceeds 1.
#[inline]
pub(crate) fn sinh_ratio(u: f64, v: f64) -> f64 {
    debug_assert!(v > 0.0);
    if u >= v {
        return 1.0;
    }
    exp(-(v - u)) * (expm1(-2.0 * u) / expm1(-2.0 * v))
}

/// `1 - sinh(a)/sinh(a+b) - sinh(b)/sinh(a+b)` for `a, b ≥ 0`.
///
/// Uses `sinh(a+b) - sinh a - sinh b = 4 sinh(a/2) sinh(b/2) sinh((a+b)/2)`,
/// which turns the ratio into `(1 - e^{-a})(1 - e^{-b}) / (1 + e^{-(a+b)})`.
#[inline]
pub(crate) fn sinh_defect(a: f64, b: f64) -> f64 {
    (expm1(-a) * expm1(-b)) / (1.0 + exp(-(a + b)))
}
