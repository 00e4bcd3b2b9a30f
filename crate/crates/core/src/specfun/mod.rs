//! Special functions: ζ and its logarithmic derivative, polygamma
//! differences, Bernoulli and harmonic numbers, tangent constants and
//! exponential log-moments.

mod moments;
mod numbers;
mod polygamma;
mod zeta;

pub use moments::{exp_moment, truncation_point};
pub(crate) use moments::panel_ratio;
pub use numbers::{bernoulli, harmonic, tangent_number};
pub use polygamma::{psi_diff, psi_diff_all, zeta_diff, zeta_diff_all};
pub use zeta::{
    euler_gamma, logderiv_euler_maclaurin, logderiv_von_mangoldt, von_mangoldt_cutoff, zeta,
    zeta_derivatives, zeta_logderiv_deriv, zeta_logderiv_jet, VON_MANGOLDT_MAX_TERMS,
};

use rug::Float;

use crate::error::{Error, Result};
use crate::num::{check_prec, pi, work};

/// `b_j`: the (j−1)-st derivative of `−(π/2) tan(πs/2)` at an even integer `s`.
///
/// Vanishes for odd `j`; for even `j` equals
/// `−(π/2)^j · (−1)^{j/2−1} 2^j (2^j − 1) B_j / j`.
pub fn tan_deriv_constant(j: usize, prec: u32) -> Result<Float> {
    check_prec(prec)?;
    if j == 0 {
        return Err(Error::Domain("tangent constants are indexed from 1".into()));
    }
    let wp = work(prec);
    if j % 2 == 1 {
        return Ok(Float::new(wp));
    }
    let b = Float::with_val(wp, &bernoulli(j as u32));
    let two_j = Float::with_val(wp, 1) << j as u32;
    let mut t = b * (fl_sub1(&two_j)) * &two_j / j as u32;
    if (j / 2 - 1) % 2 == 1 {
        t = -t;
    }
    let half_pi = pi(wp) / 2u32;
    let scale = Float::with_val(wp, half_pi.pow(j as u32));
    Ok(-(t * scale))
}

fn fl_sub1(x: &Float) -> Float {
    Float::with_val(x.prec(), x - 1u32)
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::fl;

    #[test]
    fn first_constants() {
        let p = 256;
        assert!(tan_deriv_constant(1, p).unwrap().is_zero());
        assert!(tan_deriv_constant(3, p).unwrap().is_zero());
        let b2 = tan_deriv_constant(2, p).unwrap();
        let expect = -(pi(work(p)).square() / 4u32);
        assert!(fl(64, &b2 - &expect).abs().to_f64() < 1e-80);
    }

    #[test]
    fn agree_with_tangent_numbers() {
        let p = 128;
        for j in (2..=12).step_by(2) {
            let b = tan_deriv_constant(j, p).unwrap();
            let t = Float::with_val(work(p), tangent_number(j / 2));
            let half_pi = pi(work(p)) / 2u32;
            let expect = -(t * fl(work(p), half_pi.pow(j as u32)));
            assert!((fl(64, &b - &expect) / fl(64, &expect)).abs().to_f64() < 1e-40, "j = {j}");
        }
    }

    #[test]
    fn b4_by_finite_differences() {
        // third derivative of -(π/2) tan(πs/2) at s = 2, five-point stencil at 1024 bits
        let wp = 1024;
        let h: Float = fl(wp, 1) >> 60;
        let f = |s: Float| -(pi(wp) / 2u32) * fl(wp, pi(wp) * s / 2u32).tan();
        let s = fl(wp, 2);
        let at = |c: i32| f(fl(wp, &s + fl(wp, &h * c)));
        let d3 = (at(2) - at(1) * 2u32 + at(-1) * 2u32 - at(-2)) / (fl(wp, h.clone().pow(3u32)) * 2u32);
        let b4 = tan_deriv_constant(4, 256).unwrap();
        let rel = fl(64, &b4 - &d3).abs() / fl(64, d3.abs_ref());
        assert!(rel.to_f64() < 1e-20);
    }

    #[test]
    fn rejects_index_zero() {
        assert!(tan_deriv_constant(0, 128).is_err());
    }
}
