//! Gauss–Legendre quadrature at arbitrary precision.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::Float;

use crate::num::{fl, pi};

/// Nodes and weights on [-1, 1], ascending in x.
pub type Rule = Arc<Vec<(Float, Float)>>;

type RuleCache = RwLock<HashMap<(usize, u32), Rule>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `n`-point Gauss–Legendre rule at `prec` bits, memoized.
pub fn gauss_legendre(n: usize, prec: u32) -> Rule {
    assert!(n >= 1);
    if let Some(r) = cache().read().unwrap().get(&(n, prec)) {
        return r.clone();
    }
    let rule = Arc::new(compute_rule(n, prec));
    cache().write().unwrap().entry((n, prec)).or_insert(rule).clone()
}

/// Legendre `P_n(x)` and `P_{n-1}(x)` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = fl(prec, 1);
    let mut p1 = x.clone();
    for j in 1..n {
        let j = j as u32;
        let p2 = (fl(prec, x * &p1) * (2 * j + 1) - fl(prec, &p0 * j)) / (j + 1);
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        (fl(prec, 1), Float::new(prec))
    } else {
        (p1, p0)
    }
}

fn compute_rule(n: usize, prec: u32) -> Vec<(Float, Float)> {
    let wp = prec + 32;
    let pi_w = pi(wp);
    let target = -(wp as i32) + 8;
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let theta = fl(wp, &pi_w * (4.0 * i as f64 + 3.0)) / (4.0 * n as f64 + 2.0);
        let mut x = theta.cos();
        for _ in 0..200 {
            let (pn, dp) = legendre_with_derivative(n, &x);
            let dx = fl(wp, &pn / &dp);
            x -= &dx;
            if dx.is_zero() || dx.get_exp().unwrap_or(i32::MIN) < target {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, &x);
        let one_m_x2 = fl(wp, 1) - fl(wp, x.square_ref());
        let w = fl(wp, 2) / (one_m_x2 * fl(wp, dp.square_ref()));
        rule.push((fl(prec, &x), fl(prec, &w)));
    }
    if n % 2 == 1 {
        rule[n / 2].0 = Float::new(prec);
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

fn legendre_with_derivative(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let (pn, pm) = legendre(n, x);
    let x2m1 = fl(prec, x.square_ref()) - 1u32;
    let dp = (fl(prec, x * &pn) - pm) * n as u32 / x2m1;
    (pn, dp)
}

/// Smallest node count whose error on a panel of relative width `r`
/// (width over distance to the nearest singularity, roughly) is below `2^-bits`.
pub fn nodes_for(bits: u32, r: f64) -> usize {
    let per_node = 2.0 * (4.0 / r).log2();
    (bits as f64 / per_node).ceil() as usize + 2
}

/// Panel endpoints `a = v_0 < v_1 < ... = b` with `v_{i+1} = v_i (1 + r)`.
pub fn geometric_breaks(a: f64, b: f64, r: f64) -> Vec<f64> {
    assert!(a > 0.0 && b > a && r > 0.0);
    let mut out = vec![a];
    let mut v = a;
    loop {
        v *= 1.0 + r;
        if v >= b * (1.0 - 1e-12) {
            out.push(b);
            return out;
        }
        out.push(v);
    }
}

/// Absolute nodes and weights of a composite rule over the given breaks.
pub fn composite(breaks: &[f64], n: usize, prec: u32) -> Vec<(Float, Float)> {
    let rule = gauss_legendre(n, prec);
    let mut out = Vec::with_capacity(n * breaks.len());
    for w in breaks.windows(2) {
        let a = fl(prec, w[0]);
        let b = fl(prec, w[1]);
        let half = fl(prec, &b - &a) / 2u32;
        let mid = fl(prec, &a + &b) / 2u32;
        for (x, wt) in rule.iter() {
            out.push((fl(prec, &mid + fl(prec, &half * x)), fl(prec, &half * wt)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 17, 40] {
            let r = gauss_legendre(n, 200);
            let s: Float = r.iter().fold(Float::new(200), |acc, (_, w)| acc + w);
            assert!((s - 2u32).abs().to_f64() < 1e-55, "n = {n}");
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // x^{2n-2} integrates to 2/(2n-1)
        let n = 12;
        let r = gauss_legendre(n, 256);
        let e = 2 * n as i32 - 2;
        let s = r.iter().fold(Float::new(256), |acc, (x, w)| {
            acc + fl(256, x.clone().pow(e)) * w
        });
        let exact = fl(256, 2) / (2 * n as u32 - 1);
        assert!((s - exact).abs().to_f64() < 1e-70);
    }

    #[test]
    fn exponential_on_geometric_panels() {
        // int_1^30 e^{-v} dv
        let prec = 256;
        let breaks = geometric_breaks(1.0, 30.0, 0.5);
        let nodes = composite(&breaks, nodes_for(300, 0.5), prec);
        let s = nodes.iter().fold(Float::new(prec), |acc, (v, w)| {
            acc + fl(prec, -v.clone()).exp() * w
        });
        let exact = fl(prec, -1).exp() - fl(prec, -30).exp();
        assert!((s - exact).abs().to_f64() < 1e-80);
    }

    use rug::ops::Pow;
}
