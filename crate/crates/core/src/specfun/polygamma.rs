//! The symmetric differences Ψ_j(s) and Z_j(s) entering the logarithmic
//! derivatives of Γ(s)Γ(k−s) and ζ(s)ζ(k−s).

use rug::Float;

use super::numbers::bernoulli;
use super::zeta::zeta_logderiv_jet;
use crate::error::{Error, Result};
use crate::num::{check_prec, fl, work, Estimate};

/// `Ψ_1(s), ..., Ψ_jmax(s)` where Ψ_j is the (j−1)-st derivative of
/// ψ(s) − ψ(k−s).
pub fn psi_diff_all(jmax: usize, s: &Float, k: u32, prec: u32) -> Result<Vec<Estimate>> {
    check_prec(prec)?;
    if jmax == 0 {
        return Ok(Vec::new());
    }
    if !(*s > 0 && *s < k) {
        return Err(Error::Domain(format!("psi_diff requires 0 < s < {k}, got {}", s.to_f64())));
    }
    let wp = work(prec);
    let a = fl(wp, s);
    let b = fl(wp, k) - &a;
    let r_cut = wp / 2;
    let max_terms = wp / 4 + jmax as u32;

    // direct part: sum_{r < R} of (-1)^j (a+r)^-j + (b+r)^-j
    let mut direct = vec![Float::new(wp); jmax + 1];
    for r in 0..r_cut {
        let ia = fl(wp, 1) / fl(wp, &a + r);
        let ib = fl(wp, 1) / fl(wp, &b + r);
        let mut pa = fl(wp, -&ia);
        let mut pb = ib.clone();
        for d in direct.iter_mut().skip(1) {
            *d += &pa;
            *d += &pb;
            pa *= &ia;
            pa = -pa;
            pb *= &ib;
        }
    }

    let ar = fl(wp, &a + r_cut);
    let br = fl(wp, &b + r_cut);
    let iar = fl(wp, 1) / &ar;
    let ibr = fl(wp, 1) / &br;
    let mut out = Vec::with_capacity(jmax);
    let mut fact = fl(wp, 1);
    for j in 1..=jmax {
        if j > 1 {
            fact *= (j - 1) as u32;
        }
        let sign_a = if j % 2 == 0 { 1 } else { -1 };
        let mut tail = if j == 1 {
            fl(wp, ar.ln_ref()) - fl(wp, br.ln_ref())
        } else {
            let ea = fl(wp, iar.clone().pow((j - 1) as u32)) * sign_a;
            let eb = fl(wp, ibr.clone().pow((j - 1) as u32));
            (ea + eb) / (j as u32 - 1)
        };
        // f(R)/2
        let ga = fl(wp, iar.clone().pow(j as u32));
        let gb = fl(wp, ibr.clone().pow(j as u32));
        tail += (fl(wp, &ga * sign_a) + &gb) / 2u32;
        // - sum_i B_{2i}/(2i)! f^{(2i-1)}(R), with g^{(l)} = (-1)^l (j)_l (x+a)^{-j-l}
        let mut rising = fl(wp, j as u32);
        let mut fact2 = fl(wp, 2);
        let mut pa = fl(wp, &ga * &iar);
        let mut pb = fl(wp, &gb * &ibr);
        let iar2 = fl(wp, iar.square_ref());
        let ibr2 = fl(wp, ibr.square_ref());
        let mut omitted = Float::new(64);
        for i in 1..=max_terms + 1 {
            let bern = Float::with_val(wp, &bernoulli(2 * i));
            // odd derivative carries a factor -1
            let deriv = -(fl(wp, &pa * sign_a) + &pb) * &rising;
            let term = fl(wp, &bern / &fact2) * deriv;
            if i == max_terms + 1 || term.is_zero() {
                omitted = fl(64, term.abs_ref());
                break;
            }
            let small = term.get_exp().unwrap_or(i32::MIN) < tail.get_exp().unwrap_or(0) - wp as i32 - 8;
            tail -= &term;
            if small {
                omitted = fl(64, term.abs_ref());
                break;
            }
            let l = 2 * i - 1;
            rising *= (j as u32 + l) * (j as u32 + l + 1);
            fact2 *= (2 * i + 1) * (2 * i + 2);
            pa *= &iar2;
            pb *= &ibr2;
        }
        let total = fl(wp, &direct[j] + &tail) * &fact;
        let mut err = fl(64, &omitted * &fact) * 2u32;
        let mut round = fl(64, total.abs_ref()) + 1u32;
        round >>= wp as i32 - 16;
        err += round;
        out.push(Estimate::new(total, err));
    }
    Ok(out)
}

/// Ψ_j(s) for `j >= 1`.
pub fn psi_diff(j: usize, s: &Float, k: u32, prec: u32) -> Result<Estimate> {
    if j == 0 {
        return Err(Error::Domain("psi_diff index starts at 1".into()));
    }
    Ok(psi_diff_all(j, s, k, prec)?.swap_remove(j - 1))
}

/// `Z_1(s), ..., Z_jmax(s)` where Z_j is the (j−1)-st derivative of
/// ζ′/ζ(s) − ζ′/ζ(k−s).
pub fn zeta_diff_all(jmax: usize, s: &Float, k: u32, prec: u32) -> Result<Vec<Estimate>> {
    check_prec(prec)?;
    if jmax == 0 {
        return Ok(Vec::new());
    }
    if !(*s > 1 && *s < k - 1) {
        return Err(Error::Domain(format!("zeta_diff requires 1 < s < {}, got {}", k - 1, s.to_f64())));
    }
    let wp = work(prec);
    let t = fl(wp, k) - fl(wp, s);
    let l_s = zeta_logderiv_jet(s, jmax - 1, prec)?;
    let l_t = zeta_logderiv_jet(&t, jmax - 1, prec)?;
    Ok((1..=jmax)
        .map(|j| {
            let a = &l_s[j - 1];
            let b = &l_t[j - 1];
            let v = if j % 2 == 1 {
                fl(wp, &a.value - &b.value)
            } else {
                fl(wp, &a.value + &b.value)
            };
            Estimate::new(v, fl(64, &a.error + &b.error))
        })
        .collect())
}

/// Z_j(s) for `j >= 1`.
pub fn zeta_diff(j: usize, s: &Float, k: u32, prec: u32) -> Result<Estimate> {
    if j == 0 {
        return Err(Error::Domain("zeta_diff index starts at 1".into()));
    }
    Ok(zeta_diff_all(j, s, k, prec)?.swap_remove(j - 1))
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::numbers::harmonic;

    const P: u32 = 256;

    #[test]
    fn vanishes_at_center() {
        for k in [12u32, 20] {
            let c = fl(P, k / 2);
            let psi = psi_diff(1, &c, k, P).unwrap();
            assert!(psi.value.abs().to_f64() < 1e-70);
            let z = zeta_diff(1, &c, k, P).unwrap();
            assert!(z.value.abs().to_f64() < 1e-70);
        }
    }

    #[test]
    fn harmonic_identity_at_integers() {
        // psi(n) = -gamma + H_{n-1}, so Psi_1(s) = H_{s-1} - H_{k-s-1}
        let k = 12u32;
        for s in 1..k {
            let expect = Float::with_val(work(P), harmonic(s - 1) - harmonic(k - s - 1));
            let got = psi_diff(1, &fl(P, s), k, P).unwrap();
            let d = fl(64, &got.value - &expect).abs();
            assert!(d.to_f64() < 1e-80, "s = {s}");
        }
    }

    #[test]
    fn digamma_oracle_off_integers() {
        let k = 16u32;
        for s in [0.3, 2.75, 8.5, 13.1] {
            let wp = work(P);
            let sv = fl(wp, s);
            let expect = fl(wp, sv.digamma_ref()) - fl(wp, fl(wp, k - &sv).digamma_ref());
            let got = psi_diff(1, &fl(P, s), k, P).unwrap();
            assert!(fl(64, &got.value - &expect).abs().to_f64() < 1e-70, "s = {s}");
        }
    }

    #[test]
    fn higher_orders_by_digamma_differences() {
        // Psi_3 by a central second difference of Psi_1 at 1024 bits
        let k = 20u32;
        let wp = 1024;
        let h: Float = fl(wp, 1) >> 90;
        let p1 = |x: &Float| fl(wp, x.digamma_ref()) - fl(wp, fl(wp, k - x).digamma_ref());
        let s = fl(wp, 13.25);
        let plus = p1(&fl(wp, &s + &h));
        let minus = p1(&fl(wp, &s - &h));
        let mid = p1(&s);
        let d2 = (plus + minus - mid * 2u32) / fl(wp, h.square_ref());
        let got = psi_diff(3, &fl(P, 13.25), k, P).unwrap();
        assert!(fl(64, &got.value - &d2).abs().to_f64() < 1e-40);
    }

    #[test]
    fn psi2_increasing_on_integer_grid() {
        let k = 12u32;
        let vals: Vec<Float> = (k / 2..=k - 2)
            .map(|s| psi_diff(2, &fl(P, s), k, P).unwrap().value)
            .collect();
        assert!(vals[0] > 0);
        for w in vals.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn zeta_diff_signs() {
        let z = zeta_diff(1, &fl(P, 10), 12, P).unwrap();
        assert!(z.value > 0);
        let k = 16u32;
        let vals: Vec<Float> = (k / 2..=k - 2)
            .map(|s| zeta_diff(2, &fl(P, s), k, P).unwrap().value)
            .collect();
        for w in vals.windows(2) {
            assert!(w[0] > 0 && w[1] > w[0]);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(psi_diff(1, &fl(P, 0), 12, P).is_err());
        assert!(psi_diff(1, &fl(P, 12), 12, P).is_err());
        assert!(zeta_diff(1, &fl(P, 1), 12, P).is_err());
        assert!(zeta_diff(1, &fl(P, 11), 12, P).is_err());
    }
}
