use super::Form;
use crate::error::{Error, Result};
use crate::num::{check_prec, two_pi, work, BigComplex};

/// Smallest imaginary part at which forms are evaluated by default.
pub const DEFAULT_Y_MIN: f64 = 0.05;

fn log_tail(log_c: f64, alpha: f64, y: f64, n0: usize) -> f64 {
    let n1 = (n0 + 1) as f64;
    let rate = 2.0 * std::f64::consts::PI * y;
    let ratio = (-rate).exp() * ((n1 + 1.0) / n1).powf(alpha);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    log_c + alpha * n1.ln() - rate * n1 - (1.0 - ratio).ln()
}

/// Smallest `n0` with `Σ_{n > n0} C n^α e^{-2π n y} < 2^-bits`.
pub fn terms_needed(growth: (f64, f64), y: f64, bits: u32) -> usize {
    let target = -(bits as f64) * std::f64::consts::LN_2;
    let mut n0 = 1usize;
    while log_tail(growth.0, growth.1, y, n0) >= target {
        n0 = n0 + 1 + n0 / 8;
    }
    while n0 > 1 && log_tail(growth.0, growth.1, y, n0 - 1) < target {
        n0 -= 1;
    }
    n0
}

/// `Σ a_n q^n` at `τ` with `Im τ ≥ 0.05`.
pub fn evaluate_form(f: &Form, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    evaluate_form_with(f, tau, prec, DEFAULT_Y_MIN)
}

/// `Σ a_n q^n` at `τ`, requiring `Im τ ≥ y_min` and a truncation whose tail
/// bound is below `2^-(P+64)`.
pub fn evaluate_form_with(f: &Form, tau: &BigComplex, prec: u32, y_min: f64) -> Result<BigComplex> {
    check_prec(prec)?;
    let y = tau.im.to_f64();
    if !(y >= y_min) {
        return Err(Error::UnsafePoint(y));
    }
    let wp = work(prec);
    let n0 = terms_needed(f.growth(), y, wp);
    if n0 >= f.coeffs.len() {
        return Err(Error::Truncation(format!(
            "{} at Im τ = {y} needs {n0} coefficients, have {}",
            f.spec.id(),
            f.coeffs.len() - 1
        )));
    }
    let arg = tau.with_prec(wp).mul_i_pow(1).scale(&two_pi(wp));
    let q = arg.exp();
    let mut acc = BigComplex::zero(wp);
    for a in f.coeffs.a[..=n0].iter().rev() {
        acc = &acc * &q;
        acc.re += a;
    }
    Ok(acc)
}
