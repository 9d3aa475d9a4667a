//! Gauss-Legendre nodes and weights.
//!
//! Nodes are the roots of the Legendre polynomial, found by Newton
//! iteration from the Chebyshev-like initial guesses; weights follow from
//! the derivative values. Accuracy is machine precision for the orders used
//! here. The composite panel-doubling driver lives with its integrands in
//! the action module.

use once_cell::sync::Lazy;

/// Nodes and weights on `[-1, 1]` for the fixed panel order.
pub const PANEL_ORDER: usize = 16;

static GL16: Lazy<Vec<(f64, f64)>> = Lazy::new(|| gauss_legendre(PANEL_ORDER));

pub fn panel_rule() -> &'static [(f64, f64)] {
    &GL16
}

/// Computes the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        // initial guess for the i-th positive-side root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((-x, w));
        if !(n % 2 == 1 && i == m - 1) {
            rule.push((x, w));
        } else {
            // odd order: the middle node is exactly zero
            rule.pop();
            rule.push((0.0, w));
        }
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
