//! The Riemann zeta function and derivatives of its logarithmic derivative
//! for real `s > 1`.

use rug::float::Constant;
use rug::Float;

use super::numbers::bernoulli;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::num::{check_prec, fl, work, Estimate};

/// Largest cutoff for which the von Mangoldt series is summed directly.
pub const VON_MANGOLDT_MAX_TERMS: u64 = 20_000;

fn check_s(s: &Float) -> Result<()> {
    if !(*s > 1) {
        return Err(Error::Domain(format!("zeta requires s > 1, got {}", s.to_f64())));
    }
    Ok(())
}

/// Euler–Maclaurin cutoff and number of correction terms for target `prec`.
fn em_parameters(prec: u32) -> (u32, u32) {
    let n = prec.max(50);
    let m = 2 * prec.div_ceil(16);
    (n, m)
}

/// Taylor jet of ζ at `s` to the given order, computed at `wp` bits.
/// Returns the jet and an error bound valid for every derivative up to `order`.
pub(crate) fn zeta_jet_at(s: &Float, order: usize, wp: u32) -> (Jet, Float) {
    let (n_cut, m) = em_parameters(wp);
    let s = fl(wp, s);
    let mut sum = Jet::zero(order, wp);
    for n in 1..n_cut {
        let ln_n = fl(wp, n).ln();
        let scale = fl(wp, -fl(wp, &s * &ln_n)).exp();
        let term = Jet::scaled_exp(order, scale, &fl(wp, -ln_n));
        sum.add_assign(&term);
    }
    let ln_cut = fl(wp, n_cut).ln();
    let neg_ln_cut = fl(wp, -&ln_cut);
    let cut_pow = fl(wp, -fl(wp, &s * &ln_cut)).exp();
    let cut_jet = Jet::scaled_exp(order, cut_pow, &neg_ln_cut);

    // N^{1-s}/(s-1)
    let mut sm1 = Jet::variable(order, &s);
    sm1.add_const(&fl(wp, -1));
    let mut integral = cut_jet.div(&sm1);
    integral.scale(&fl(wp, n_cut));
    sum.add_assign(&integral);

    // N^{-s}/2
    let mut half = cut_jet.clone();
    half.scale(&fl(wp, 0.5));
    sum.add_assign(&half);

    // sum_i B_{2i}/(2i)! (s)_{2i-1} N^{-s-2i+1}
    let mut rising = Jet::variable(order, &s);
    let mut corr = Jet::zero(order, wp);
    let inv_cut = fl(wp, 1) / n_cut;
    let inv_cut_sq = fl(wp, inv_cut.square_ref());
    let mut cut_factor = inv_cut.clone();
    let mut fact = Float::with_val(wp, 2);
    let mut omitted = Float::new(64);
    for i in 1..=m + 1 {
        let b = Float::with_val(wp, &bernoulli(2 * i));
        let mut term = rising.clone();
        term.scale(&fl(wp, &b / &fact));
        term.scale(&cut_factor);
        if i == m + 1 {
            omitted = term.mul(&cut_jet).max_derivative();
            break;
        }
        corr.add_assign(&term);
        let a1 = fl(wp, &s + (2 * i - 1));
        let a2 = fl(wp, &s + 2 * i);
        rising = rising.mul_linear(&a1).mul_linear(&a2);
        cut_factor *= &inv_cut_sq;
        fact *= (2 * i + 1) * (2 * i + 2);
    }
    sum.add_assign(&corr.mul(&cut_jet));

    let mut err = omitted * 2u32;
    let mut round = sum.max_derivative();
    round >>= (wp as i32) - 8;
    err += round;
    (sum, err)
}

/// ζ(s) for real `s > 1`, accurate to far better than `2^(-prec+8)`.
pub fn zeta(s: &Float, prec: u32) -> Result<Estimate> {
    check_prec(prec)?;
    check_s(s)?;
    let wp = work(prec);
    let (j, err) = zeta_jet_at(s, 0, wp);
    Ok(Estimate::new(j.c[0].clone(), err))
}

/// `ζ^(j)(s)` for `j = 0..=order`.
pub fn zeta_derivatives(s: &Float, order: usize, prec: u32) -> Result<Vec<Estimate>> {
    check_prec(prec)?;
    check_s(s)?;
    let wp = work(prec);
    let (j, err) = zeta_jet_at(s, order, wp);
    Ok((0..=order).map(|i| Estimate::new(j.derivative(i), err.clone())).collect())
}

/// Tail bound for `sum_{n > N} (log n)^a n^{-s}`; infinite when the
/// bound's monotonicity condition fails.
fn log_power_tail(n: f64, a: f64, s: f64) -> f64 {
    let ln = n.ln();
    let denom = 1.0 - a / ((s - 1.0) * ln);
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    ln.powf(a) * n.powf(1.0 - s) * (1.0 / ((s - 1.0) * denom) + 1.0 / n)
}

/// Cutoff for the von Mangoldt series of `d^j/ds^j ζ'/ζ` at `2^-bits`.
pub fn von_mangoldt_cutoff(j: usize, s: f64, bits: u32) -> Option<u64> {
    let target = -(bits as f64) * std::f64::consts::LN_2;
    let a = (j + 1) as f64;
    let ok = |n: f64| log_power_tail(n, a, s).ln() < target;
    let mut hi = 4.0f64;
    while !ok(hi) {
        hi *= 2.0;
        if hi > 4.0 * VON_MANGOLDT_MAX_TERMS as f64 {
            return None;
        }
    }
    let mut lo = hi / 2.0;
    while hi - lo > 1.0 {
        let mid = ((lo + hi) / 2.0).floor();
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let n = hi as u64;
    (n <= VON_MANGOLDT_MAX_TERMS).then_some(n)
}

/// `Λ(n)` encoded as the prime `p` when `n = p^e`, else 0.
fn prime_power_bases(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut base = vec![0u32; n + 1];
    for i in 2..=n {
        let p = spf[i] as usize;
        let mut m = i;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            base[i] = p as u32;
        }
    }
    base
}

/// `d^j/ds^j (ζ'/ζ)(s)` for `j = 0..=order` by the truncated von Mangoldt
/// series, or `None` when the cutoff would exceed [`VON_MANGOLDT_MAX_TERMS`].
pub fn logderiv_von_mangoldt(s: &Float, order: usize, prec: u32) -> Result<Option<Vec<Estimate>>> {
    check_prec(prec)?;
    check_s(s)?;
    let wp = work(prec);
    let Some(n_cut) = von_mangoldt_cutoff(order, s.to_f64(), wp) else {
        return Ok(None);
    };
    let base = prime_power_bases(n_cut as usize);
    let s = fl(wp, s);
    let mut acc = vec![Float::new(wp); order + 1];
    for (n, &p) in base.iter().enumerate().skip(2) {
        if p == 0 {
            continue;
        }
        let lam = fl(wp, p).ln();
        let ln_n = fl(wp, n as u32).ln();
        let mut t = fl(wp, -fl(wp, &s * &ln_n)).exp() * &lam;
        for a in acc.iter_mut() {
            *a -= &t;
            t *= &ln_n;
            t = -t;
        }
    }
    let out = (0..=order)
        .map(|j| {
            let tail = log_power_tail(n_cut as f64, (j + 1) as f64, s.to_f64());
            let mut err = fl(64, tail);
            let mut round = fl(64, &acc[j]).abs();
            round >>= (wp as i32) - 16;
            err += round;
            Estimate::new(acc[j].clone(), err)
        })
        .collect();
    Ok(Some(out))
}

/// `d^j/ds^j (ζ'/ζ)(s)` for `j = 0..=order` from the logarithm of the
/// Euler–Maclaurin jet of ζ.
pub fn logderiv_euler_maclaurin(s: &Float, order: usize, prec: u32) -> Result<Vec<Estimate>> {
    check_prec(prec)?;
    check_s(s)?;
    let wp = work(prec);
    let (z, err) = zeta_jet_at(s, order + 1, wp);
    let lz = z.ln();
    let rel = fl(64, &err / &z.c[0]);
    let mut out = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let v = lz.derivative(j + 1);
        let size = fl(64, v.abs_ref()) + 1u32;
        let mut e = fl(64, &rel * &size);
        for l in 2..=(j as u32 + 2) {
            e *= l;
        }
        let mut round = fl(64, v.abs_ref());
        round >>= (wp as i32) - 16;
        e += round;
        out.push(Estimate::new(v, e));
    }
    Ok(out)
}

/// `d^j/ds^j (ζ'/ζ)(s)` for `j = 0..=order`; uses the von Mangoldt series when
/// its cutoff is small and otherwise the Euler–Maclaurin jet.
pub fn zeta_logderiv_jet(s: &Float, order: usize, prec: u32) -> Result<Vec<Estimate>> {
    if let Some(v) = logderiv_von_mangoldt(s, order, prec)? {
        return Ok(v);
    }
    logderiv_euler_maclaurin(s, order, prec)
}

/// `d^j/ds^j (ζ'/ζ)(s)`.
pub fn zeta_logderiv_deriv(j: usize, s: &Float, prec: u32) -> Result<Estimate> {
    Ok(zeta_logderiv_jet(s, j, prec)?.swap_remove(j))
}

/// Euler's constant at `prec` bits.
pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}
