//! Λ^(m)(s) from the integral over `[1, ∞)` of `f(iy) − a_0`.
//!
//! The form is sampled once on a Gauss–Legendre grid covering `[1, V]`; each
//! `∫ (f(iy) − a_0) y^{σ−1} log^m y dy` is then a weighted sum over the same
//! nodes. Summing over n first and integrating afterwards is the term-wise
//! exp-moment formula with the two finite sums exchanged.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::forms::{terms_needed, Form};
use crate::num::{factorial, fl, pow2, two_pi, work};
use crate::quad::{composite, geometric_breaks, nodes_for};
use crate::specfun::{panel_ratio, truncation_point};

/// A form sampled on `[1, V]`, ready for integrals with `σ ≤ σ_max` and log
/// power `≤ m`.
pub(crate) struct MellinKernel {
    k: u32,
    m: u32,
    wp: u32,
    a0: Float,
    /// `(log y, w · (f(iy) − a_0))` per node.
    nodes: Vec<(Float, Float)>,
    /// log2 of the bound on the part of the integral beyond V.
    tail_bits: f64,
    trunc_err: Float,
}

fn log_sum_growth(alpha: f64) -> f64 {
    // S = Σ_{n ≥ 1} n^α e^{−2π(n−1)}
    let mut s = 0.0f64;
    for n in 1..2000 {
        let t = alpha * (n as f64).ln() - 2.0 * std::f64::consts::PI * (n - 1) as f64;
        s += t.exp();
        if t < -60.0 && n > 10 {
            break;
        }
    }
    s.ln()
}

impl MellinKernel {
    pub(crate) fn new(form: &Form, m: u32, prec: u32) -> Result<Self> {
        let k = form.weight();
        let wp = work(prec);
        let (log_c, alpha) = form.growth();
        let n0 = terms_needed((log_c, alpha), 1.0, wp + 8);
        if n0 >= form.coeffs.len() {
            return Err(Error::Truncation(format!(
                "{} needs {n0} coefficients on Im τ ≥ 1, have {}",
                form.spec.id(),
                form.coeffs.len() - 1
            )));
        }
        // |f(iy) − a_0| ≤ C S e^{−2πy} for y ≥ 1
        let log_cs = log_c + log_sum_growth(alpha);
        let extra = (log_cs / std::f64::consts::LN_2).max(0.0).ceil() as u32;
        let s_max = k as f64;
        let (v_cut, tail) = truncation_point(1, s_max, m, wp + extra + 4);
        let tail_bits = (tail + log_cs) / std::f64::consts::LN_2;

        let r = panel_ratio(s_max + m as f64);
        let breaks = geometric_breaks(1.0, v_cut, r);
        let grid = composite(&breaks, nodes_for(wp + 16, r), wp);
        let rate = two_pi(wp);
        let a = &form.coeffs.a;
        let mut nodes = Vec::with_capacity(grid.len());
        for (y, w) in grid {
            let q = fl(wp, -fl(wp, &rate * &y)).exp();
            let mut acc = Float::new(wp);
            for c in a[1..=n0].iter().rev() {
                acc += c;
                acc *= &q;
            }
            nodes.push((fl(wp, y.ln_ref()), acc * w));
        }
        // the coefficient tail is below 2^{−wp−8} at every node; weigh it by
        // ∫_1^V y^{σ−1} log^m y ≤ V^{σ_max} (log V)^m
        let log_weight = s_max * v_cut.ln() + m as f64 * v_cut.ln().max(1.0).ln();
        let trunc_err = fl(64, log_weight - (wp as f64 + 8.0) * std::f64::consts::LN_2).exp();
        Ok(MellinKernel { k, m, wp, a0: fl(wp, form.a0()), nodes, tail_bits, trunc_err })
    }

    fn check(&self, sigma: &Float, m: u32) -> Result<()> {
        if m > self.m {
            return Err(Error::Domain(format!("kernel built for m ≤ {}, asked for {m}", self.m)));
        }
        if !(*sigma > 0 && *sigma < self.k) {
            return Err(Error::Domain(format!("s = {} outside (0, {})", sigma.to_f64(), self.k)));
        }
        Ok(())
    }

    fn error_floor(&self, abs_sum: &Float, value: &Float) -> Float {
        let mut err = pow2(self.tail_bits.ceil() as i64);
        err += &self.trunc_err;
        let mut round = fl(64, abs_sum);
        round >>= self.wp as i32 - 16;
        err += round;
        let mut quad = fl(64, value.abs_ref());
        quad >>= self.wp as i32;
        err + quad
    }

    /// `∫_1^∞ (f(iy) − a_0) y^{σ−1} log^m y dy` with an error bound.
    pub(crate) fn integral(&self, sigma: &Float, m: u32) -> Result<(Float, Float)> {
        self.check(sigma, m)?;
        let sm1 = fl(self.wp, sigma) - 1u32;
        let mut acc = Float::new(self.wp);
        let mut abs = Float::new(64);
        for (lv, wf) in &self.nodes {
            let mut t = fl(self.wp, &sm1 * lv).exp();
            for _ in 0..m {
                t *= lv;
            }
            t *= wf;
            abs += fl(64, t.abs_ref());
            acc += t;
        }
        let err = self.error_floor(&abs, &acc);
        Ok((acc, err))
    }

    /// The integrals at every integer `σ = 1, ..., k − 1` and every log
    /// power `0..=m`: entry `[j][σ − 1]`.
    pub(crate) fn integer_integrals(&self) -> Vec<Vec<(Float, Float)>> {
        let len = (self.k - 1) as usize;
        let mm = self.m as usize;
        let mut acc = vec![vec![Float::new(self.wp); len]; mm + 1];
        let mut abs = vec![vec![Float::new(64); len]; mm + 1];
        for (lv, wf) in &self.nodes {
            let y = fl(self.wp, lv.exp_ref());
            let mut lpow = wf.clone();
            for j in 0..=mm {
                let mut t = lpow.clone();
                for i in 0..len {
                    abs[j][i] += fl(64, t.abs_ref());
                    acc[j][i] += &t;
                    t *= &y;
                }
                lpow *= lv;
            }
        }
        acc.into_iter()
            .zip(abs)
            .map(|(row, arow)| {
                row.into_iter()
                    .zip(arow)
                    .map(|(v, a)| {
                        let e = self.error_floor(&a, &v);
                        (v, e)
                    })
                    .collect()
            })
            .collect()
    }

    /// Pole contributions `a_0 m! [1/(−s)^{m+1} + (−1)^m i^k/(s − k)^{m+1}]`.
    fn pole_terms(&self, s: &Float, m: u32, ik: i32) -> Result<Float> {
        let wp = self.wp;
        if self.a0.is_zero() {
            return Ok(Float::new(wp));
        }
        let guard = pow2(-((self.wp - 64) as i64 / 4));
        let sk = fl(wp, s) - self.k;
        for (d, at) in [(fl(64, s.abs_ref()), s.to_f64()), (fl(64, sk.abs_ref()), sk.to_f64())] {
            if d < guard {
                return Err(Error::PoleProximity { s: at, dist: d.to_f64() });
            }
        }
        let mf = Float::with_val(wp, factorial(m));
        let minus_s = fl(wp, -s);
        let mut t = fl(wp, &mf / fl(wp, minus_s.pow(m + 1)));
        let mut u = fl(wp, &mf / fl(wp, sk.pow(m + 1)));
        if (m % 2 == 1) != (ik < 0) {
            u = -u;
        }
        t += u;
        Ok(t * &self.a0)
    }

    /// Λ^(m)(s) and its error bound from integrals at `s` and `k − s`.
    pub(crate) fn combine(&self, s: &Float, m: u32, at_s: &(Float, Float), at_ks: &(Float, Float)) -> Result<(Float, Float)> {
        let ik = if self.k % 4 == 0 { 1 } else { -1 };
        let mut v = at_s.0.clone();
        if (m % 2 == 1) != (ik < 0) {
            v -= &at_ks.0;
        } else {
            v += &at_ks.0;
        }
        v += self.pole_terms(s, m, ik)?;
        let mut err = fl(64, &at_s.1 + &at_ks.1);
        let mut round = fl(64, v.abs_ref());
        round >>= self.wp as i32 - 8;
        err += round;
        Ok((v, err))
    }

    pub(crate) fn lambda(&self, s: &Float, m: u32) -> Result<(Float, Float)> {
        let ks = fl(self.wp, self.k) - fl(self.wp, s);
        let a = self.integral(s, m)?;
        let b = self.integral(&ks, m)?;
        self.combine(s, m, &a, &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::FormSpec;
    use crate::lvalues::testing::mellin_by_moments;

    const P: u32 = 192;

    #[test]
    fn shared_grid_equals_termwise_moments() {
        // oracle: Σ_n a_n exp_moment(n, σ, m), one quadrature per term
        let f = Form::build(&FormSpec::cusp(12, 0, P).with_terms(80)).unwrap();
        let ker = MellinKernel::new(&f, 2, P).unwrap();
        for (s, m) in [(3.0, 0u32), (6.5, 1), (10.0, 2)] {
            let sv = fl(P, s);
            let (got, err) = ker.integral(&sv, m).unwrap();
            let oracle = mellin_by_moments(&f, &sv, m, P);
            let d = fl(64, &got - &oracle).abs();
            assert!(d.to_f64() < 1e-50, "s = {s}, m = {m}: {d}");
            assert!(err.to_f64() < 1e-50);
        }
    }

    #[test]
    fn integer_batch_matches_single() {
        let f = Form::build(&FormSpec::eisenstein(12, P).with_terms(80)).unwrap();
        let ker = MellinKernel::new(&f, 1, P).unwrap();
        let batch = ker.integer_integrals();
        for s in [1u32, 4, 11] {
            let (v, _) = ker.integral(&fl(P, s), 1).unwrap();
            let d = fl(64, &v - &batch[1][(s - 1) as usize].0).abs();
            assert!(d.to_f64() < 1e-55, "s = {s}");
        }
    }

    #[test]
    fn short_coefficients_rejected() {
        let f = Form::build(&FormSpec::cusp(12, 0, P).with_terms(10)).unwrap();
        assert!(matches!(MellinKernel::new(&f, 0, P), Err(Error::Truncation(_))));
    }

    #[test]
    fn pole_guard() {
        let f = Form::build(&FormSpec::eisenstein(12, P).with_terms(80)).unwrap();
        let ker = MellinKernel::new(&f, 0, P).unwrap();
        let near = fl(work(P), 1e-30);
        let a = (Float::new(64), Float::new(64));
        assert!(matches!(ker.combine(&near, 0, &a, &a), Err(Error::PoleProximity { .. })));
    }
}
