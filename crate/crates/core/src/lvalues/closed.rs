//! Closed forms for E_k = 1 + c_k Σ σ_{k−1}(n) qⁿ.
//!
//! With L(E_k, s) = c_k ζ(s) ζ(s − k + 1) and the functional equation of ζ,
//! Λ(s) = cos(πs/2) Λ̃(s) where
//! Λ̃(s) = 2 (−1)^{k/2} c_k (2π)^{−k} Γ(s) Γ(k − s) ζ(s) ζ(k − s).

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::forms::eisenstein_constant;
use crate::num::{binomial, check_prec, fl, pi, two_pi, work, Estimate};
use crate::specfun::{psi_diff_all, zeta, zeta_diff_all};

/// `2 (−1)^{k/2} c_k (2π)^{−k} = 2 / (ζ(k) Γ(k))`, positive for every even k.
pub fn eisenstein_scale(k: u32, prec: u32) -> Float {
    let wp = work(prec);
    let mut c: Rational = eisenstein_constant(k) * 2u32;
    if (k / 2) % 2 == 1 {
        c = -c;
    }
    let tp = fl(wp, two_pi(wp).pow(k));
    Float::with_val(wp, &c) / tp
}

fn check_weight(k: u32) -> Result<()> {
    if k % 2 == 1 || k < 4 {
        return Err(Error::Domain(format!("Eisenstein weight {k} must be even and at least 4")));
    }
    Ok(())
}

fn check_open(k: u32, s: &Float) -> Result<()> {
    if !(*s > 1 && *s < k - 1) {
        return Err(Error::Domain(format!(
            "closed form needs 1 < s < {}, got {}",
            k - 1,
            s.to_f64()
        )));
    }
    Ok(())
}

fn integer_value(s: &Float) -> Option<i64> {
    if s.is_integer() {
        s.to_i32_saturating().map(i64::from)
    } else {
        None
    }
}

/// Λ̃(s) for `1 < s < k − 1`.
fn tilde_value(k: u32, s: &Float, prec: u32) -> Result<Estimate> {
    let wp = work(prec);
    let ks = fl(wp, k) - fl(wp, s);
    let gammas = match integer_value(s) {
        // Γ(s) Γ(k − s) = (s − 1)! (k − s − 1)! exactly
        Some(n) => Float::with_val(
            wp,
            crate::num::factorial((n - 1) as u32) * crate::num::factorial(k - n as u32 - 1),
        ),
        None => fl(wp, s.gamma_ref()) * fl(wp, ks.gamma_ref()),
    };
    let z1 = zeta(s, prec)?;
    let z2 = zeta(&ks, prec)?;
    let zz = fl(wp, &z1.value * &z2.value);
    let v = eisenstein_scale(k, prec) * gammas * &zz;
    let rel = fl(64, &z1.error / fl(64, z1.value.abs_ref())) + fl(64, &z2.error / fl(64, z2.value.abs_ref()));
    let mut err = fl(64, v.abs_ref()) * rel;
    let mut round = fl(64, v.abs_ref());
    round >>= wp as i32 - 8;
    err += round;
    Ok(Estimate::new(v, err))
}

/// `Λ̃^(0)(s), ..., Λ̃^(m)(s)` for real `1 < s < k − 1` by
/// `Λ̃^(n) = Σ_{j<n} C(n−1, j) Λ̃^(j) g^(n−j)` with `g^(j) = Ψ_j + Z_j`.
pub fn tilde_derivatives(k: u32, m: u32, s: &Float, prec: u32) -> Result<Vec<Estimate>> {
    check_prec(prec)?;
    check_weight(k)?;
    check_open(k, s)?;
    let wp = work(prec);
    let mm = m as usize;
    let psi = psi_diff_all(mm, s, k, prec)?;
    let zd = zeta_diff_all(mm, s, k, prec)?;
    let g: Vec<Estimate> = psi
        .iter()
        .zip(&zd)
        .map(|(a, b)| Estimate::new(fl(wp, &a.value + &b.value), fl(64, &a.error + &b.error)))
        .collect();
    let mut out = vec![tilde_value(k, s, prec)?];
    for n in 1..=mm {
        let mut v = Float::new(wp);
        let mut e = Float::new(64);
        for j in 0..n {
            let c = Float::with_val(wp, binomial((n - 1) as u32, j as u32));
            let gi = &g[n - j - 1];
            let t = fl(wp, &out[j].value * &gi.value) * &c;
            e += fl(64, fl(64, out[j].value.abs_ref()) * &gi.error + fl(64, gi.value.abs_ref()) * &out[j].error) * &c;
            v += t;
        }
        let mut round = fl(64, v.abs_ref());
        round >>= wp as i32 - 8;
        e += round;
        out.push(Estimate::new(v, e));
    }
    Ok(out)
}

/// Λ̃^(m)(s) at an even integer `2 ≤ s ≤ k − 2`.
pub fn lambda_tilde_deriv(k: u32, m: u32, s: i64, prec: u32) -> Result<Estimate> {
    if s % 2 != 0 {
        return Err(Error::Domain(format!("Λ̃ is tabulated at even s only, got {s}")));
    }
    if s < 2 || s > k as i64 - 2 {
        return Err(Error::Domain(format!("s = {s} outside [2, {}]", k as i64 - 2)));
    }
    let wp = work(prec);
    Ok(tilde_derivatives(k, m, &Float::with_val(wp, s), prec)?.swap_remove(m as usize))
}

/// `d^j/ds^j cos(πs/2) = (π/2)^j cos(π(s + j)/2)`, exact in the cosine at
/// integer `s`.
fn cos_derivative(j: u32, s: &Float, wp: u32) -> Float {
    let half_pi = pi(wp) / 2u32;
    let scale = fl(wp, half_pi.clone().pow(j));
    let c = match integer_value(s) {
        Some(n) => match (n + j as i64).rem_euclid(4) {
            0 => Float::with_val(wp, 1),
            2 => Float::with_val(wp, -1),
            _ => Float::new(wp),
        },
        None => {
            let arg = fl(wp, fl(wp, s) + j) * &half_pi;
            arg.cos()
        }
    };
    scale * c
}

/// Λ(s) = 2 (2π)^{−k} cos(πs/2) Γ(s) Γ(k − s) ζ(s) ζ(k − s) (scaled for the
/// normalization `a_0 = 1`), for real `1 < s < k − 1`.
pub fn lambda_eisenstein(k: u32, s: &Float, prec: u32) -> Result<Estimate> {
    lambda_closed(k, 0, s, prec)
}

/// Λ^(m)(s) for real `1 < s < k − 1` by Leibniz on `cos(πs/2) Λ̃(s)`.
pub fn lambda_closed(k: u32, m: u32, s: &Float, prec: u32) -> Result<Estimate> {
    let wp = work(prec);
    let t = tilde_derivatives(k, m, s, prec)?;
    let mut v = Float::new(wp);
    let mut e = Float::new(64);
    for j in 0..=m {
        let c = cos_derivative(j, s, wp);
        if c.is_zero() {
            continue;
        }
        let b = Float::with_val(wp, binomial(m, j)) * c;
        let x = &t[(m - j) as usize];
        e += fl(64, b.abs_ref()) * &x.error;
        v += fl(wp, &b * &x.value);
    }
    let mut round = fl(64, v.abs_ref());
    round >>= wp as i32 - 8;
    e += round;
    Ok(Estimate::new(v, e))
}
