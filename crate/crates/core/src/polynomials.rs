//! Classical orthogonal polynomials by three-term recurrence.

use crate::error::{Error, Result};

/// Jacobi polynomial `P_n^{(a,b)}(x)`.
pub fn jacobi_poly(n: u32, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > -1.0) || !(b > -1.0) {
        return Err(Error::DomainError(format!(
            "Jacobi parameters must exceed -1, got a = {a}, b = {b}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let ab = a + b;
    let mut prev = 1.0;
    let mut curr = (a + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + ab;
        let lead = 2.0 * k * (k + ab) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c1 * curr - c2 * prev) / lead;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)`.
pub fn laguerre_poly(n: u32, a: f64, x: f64) -> Result<f64> {
    if !(a > -1.0) {
        return Err(Error::DomainError(format!(
            "Laguerre parameter must exceed -1, got {a}"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut curr = 1.0 + a - x;
    for k in 2..=n {
        let k = f64::from(k);
        let next = ((2.0 * k - 1.0 + a - x) * curr - (k - 1.0 + a) * prev) / k;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}
