//! Fourier coefficients of the indicator of an arc of length `p` on the
//! circle, `ν(0) = p`, `ν(k) = sin(kπp) / (kπ)`, which form an idempotent
//! (infinitely supported) measure on `Z`.

use std::f64::consts::PI;

use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::scalar::Rational;

/// `ν(k)`. The argument `k p` is reduced modulo 2 exactly before the sine
/// is evaluated.
pub fn sinc_measure(p: &Rational, k: i64) -> f64 {
    if k == 0 {
        return p.to_f64().unwrap_or(f64::NAN);
    }
    let t = p * Rational::from_integer(k.into());
    let two = Rational::from_integer(2.into());
    // t mod 2 in [0, 2)
    let r = &t - (&t / &two).floor() * &two;
    let (r, sign) = if r > Rational::one() { (r - Rational::one(), -1.0) } else { (r, 1.0) };
    let r = if &r * Rational::from_integer(2.into()) > Rational::one() { Rational::one() - r } else { r };
    let r = r.abs();
    sign * (PI * r.to_f64().unwrap_or(f64::NAN)).sin() / (k as f64 * PI)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SincResidual {
    pub k: i64,
    pub cutoff: usize,
    pub residual: f64,
}

/// `|Σ_{|j| <= cutoff} ν(j) ν(k - j) - ν(k)|`.
pub fn sinc_residual(p: &Rational, k: i64, cutoff: usize) -> SincResidual {
    let reach = cutoff as i64 + k.abs();
    let table: Vec<f64> = (-reach..=reach).map(|j| sinc_measure(p, j)).collect();
    let at = |j: i64| table[(j + reach) as usize];
    let mut sum = 0.0;
    let mut comp = 0.0;
    for j in -(cutoff as i64)..=cutoff as i64 {
        // Neumaier summation
        let term = at(j) * at(k - j);
        let t = sum + term;
        if f64::abs(sum) >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    SincResidual { k, cutoff, residual: (sum + comp - at(k)).abs() }
}
