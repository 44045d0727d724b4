use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Monomial coefficients of the Chebyshev polynomial `T_s`, lowest degree first.
pub fn chebyshev_t(s: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::from(1)];
    if s == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::from(1)];
    for _ in 1..s {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Horner evaluation of integer coefficients (lowest degree first).
pub fn poly_eval(coeffs: &[BigInt], x: f64) -> f64 {
    coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

/// `T_s(x)` for any real `x`, using the trigonometric form inside `[-1, 1]`
/// and the closed form outside.
pub fn chebyshev_eval(s: usize, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        (s as f64 * x.acos()).cos()
    } else {
        evaluate_outside(s, x)
    }
}

/// `T_s(x) = ((x - r)^s + (x + r)^s) / 2` with `r = sqrt(x^2 - 1)`, for `|x| > 1`.
pub fn evaluate_outside(s: usize, x: f64) -> f64 {
    assert!(x.abs() > 1.0, "evaluate_outside needs |x| > 1, got {x}");
    let r = (x * x - 1.0).sqrt();
    let s = s as i32;
    0.5 * ((x - r).powi(s) + (x + r).powi(s))
}
