//! `∫_1^∞ e^{-2πnv} v^{s-1} log^m(v) dv` by composite Gauss–Legendre on
//! geometric panels with an analytic tail bound.

use rug::Float;

use crate::error::{Error, Result};
use crate::num::{check_prec, fl, two_pi, work, Estimate};
use crate::quad::{composite, geometric_breaks, nodes_for};

/// log of the integrand `e^{-2πnv} v^{s-1} (log v)^m` at `v`, in f64.
fn log_integrand(n: f64, s: f64, m: u32, v: f64) -> f64 {
    let lv = v.ln();
    let log_pow = if m == 0 { 0.0 } else { m as f64 * lv.max(1e-300).ln() };
    -2.0 * std::f64::consts::PI * n * v + (s - 1.0) * lv + log_pow
}

/// True when the integrand is decreasing on `[v, ∞)`.
fn decreasing_from(n: f64, s: f64, m: u32, v: f64) -> bool {
    let mut slope = -2.0 * std::f64::consts::PI * n + (s - 1.0).max(0.0) / v;
    if m > 0 {
        slope += m as f64 / (v * v.ln());
    }
    slope < 0.0
}

/// Truncation point and log of the tail bound
/// `2 e^{-2πnV} V^{s-1} (log V)^m / (2πn)`.
pub fn truncation_point(n: u32, s: f64, m: u32, bits: u32) -> (f64, f64) {
    let nf = n as f64;
    let lnp = (bits as f64).ln();
    let mut v = 1.0 + (bits as f64 * std::f64::consts::LN_2 + (s + m as f64) * lnp)
        / (2.0 * std::f64::consts::PI * nf);
    let target = -(bits as f64) * std::f64::consts::LN_2;
    let tail = |v: f64| (2.0f64).ln() + log_integrand(nf, s, m, v) - (2.0 * std::f64::consts::PI * nf).ln();
    while !(decreasing_from(nf, s, m, v) && tail(v) < target) {
        v *= 1.1;
    }
    (v, tail(v))
}

/// Relative panel width keeping `v^{s-1}` and the log factor well resolved.
pub(crate) fn panel_ratio(s_max: f64) -> f64 {
    (2.0 / s_max.max(1.0)).min(0.5)
}

pub fn exp_moment(n: u32, s: &Float, m: u32, prec: u32) -> Result<Estimate> {
    check_prec(prec)?;
    if n == 0 {
        return Err(Error::Domain("exp_moment requires n >= 1".into()));
    }
    let wp = work(prec);
    let sf = s.to_f64();
    let (v_cut, log_tail) = truncation_point(n, sf, m, wp);
    let r = panel_ratio(sf + m as f64);
    let breaks = geometric_breaks(1.0, v_cut, r);
    let nodes = composite(&breaks, nodes_for(wp + 16, r), wp);
    let rate = two_pi(wp) * n;
    let sm1 = fl(wp, s) - 1u32;
    let mut acc = Float::new(wp);
    let mut abs_acc = Float::new(64);
    for (v, w) in &nodes {
        let lv = fl(wp, v.ln_ref());
        let mut e = fl(wp, &sm1 * &lv) - fl(wp, &rate * v);
        e.exp_mut();
        for _ in 0..m {
            e *= &lv;
        }
        let t = e * w;
        abs_acc += fl(64, t.abs_ref());
        acc += t;
    }
    let mut err = fl(64, log_tail).exp();
    let mut round = abs_acc;
    round >>= wp as i32 - 16;
    err += round;
    // quadrature: the panel rule is sized for 2^-(wp+16) relative accuracy
    let mut quad = fl(64, acc.abs_ref());
    quad >>= wp as i32;
    err += quad;
    Ok(Estimate::new(acc, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::pi;

    const P: u32 = 256;

    #[test]
    fn closed_form_at_s_one() {
        for n in [1u32, 2] {
            let got = exp_moment(n, &fl(P, 1), 0, P).unwrap();
            let wp = work(P);
            let c = two_pi(wp) * n;
            let expect = fl(wp, -&c).exp() / c;
            let d = fl(64, &got.value - &expect).abs();
            assert!(d.to_f64() < 1e-85, "n = {n}");
            assert!(d <= got.error);
        }
    }

    #[test]
    fn log_moment_against_incomplete_gamma() {
        // d/ds [(2π)^{-s} Γ(s, 2π)] at s = 3 by central differences at 1024 bits
        let wp = 1024;
        let tp = pi(wp) * 2u32;
        let f = |s: Float| {
            let g = fl(wp, s.gamma_inc_ref(&tp));
            g / fl(wp, tp.clone().pow(&s))
        };
        let h: Float = fl(wp, 1) >> 100;
        let s = fl(wp, 3);
        let d = (f(fl(wp, &s + &h)) - f(fl(wp, &s - &h))) / (fl(wp, &h) * 2u32);
        let got = exp_moment(1, &fl(P, 3), 1, P).unwrap();
        let rel = fl(64, &got.value - &d).abs() / fl(64, d.abs_ref());
        assert!(rel.to_f64() < 1e-25);
    }

    #[test]
    fn plain_moment_against_incomplete_gamma() {
        let wp = work(P);
        let tp = pi(wp) * 6u32;
        for s in [2u32, 7, 23] {
            let sv = fl(wp, s);
            let expect = fl(wp, sv.gamma_inc_ref(&tp)) / fl(wp, tp.clone().pow(s));
            let got = exp_moment(3, &fl(P, s), 0, P).unwrap();
            let d = fl(64, &got.value - &expect).abs();
            assert!(d.to_f64() < 1e-80 * expect.to_f64().max(1e-300), "s = {s}");
        }
    }

    #[test]
    fn precision_doubling_within_error() {
        let lo = exp_moment(2, &fl(128, 5.5), 2, 128).unwrap();
        let hi = exp_moment(2, &fl(256, 5.5), 2, 256).unwrap();
        let d = fl(64, &lo.value - &hi.value).abs();
        assert!(d <= lo.error);
    }

    use rug::ops::Pow;
}
