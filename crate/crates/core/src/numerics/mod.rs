//! Self-contained numerical kernels used by the oracles.

pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use quadrature::{Adaptive, GaussLegendre};
pub use roots::{bisect, brent, Root};
pub use tridiag::SymTridiagonal;

/// Generalized Laguerre polynomial L_k^(beta)(x) by the forward three-term
/// recurrence in the degree.
pub fn generalized_laguerre(k: u32, beta: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + beta - x;
    for i in 1..k {
        let i = i as f64;
        let next = ((2.0 * i + 1.0 + beta - x) * cur - (i + beta) * prev) / (i + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Richardson combination of results on meshes h and h/2 whose leading
/// error is O(h^order).
pub fn richardson(coarse: f64, fine: f64, order: i32) -> f64 {
    fine + (fine - coarse) / (2f64.powi(order) - 1.0)
}

/// Interior sign changes of a sampled function, ignoring exact zeros and
/// samples below `floor` in magnitude.
pub fn sign_changes(values: &[f64], floor: f64) -> usize {
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in values {
        if v.abs() <= floor || v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}
