use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};

fn tangent_cache() -> &'static RwLock<Vec<Integer>> {
    static CACHE: OnceLock<RwLock<Vec<Integer>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// Tangent numbers `T_1..T_n`, where `T_j = tan^(2j-1)(0)`, by the
/// Knuth–Buckholtz integer recurrence.
fn compute_tangents(n: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j - k) as u32);
            let b = Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = a + b;
        }
    }
    t
}

/// `tan^(2j-1)(0)` for `j >= 1`.
pub fn tangent_number(j: usize) -> Integer {
    assert!(j >= 1);
    if let Some(t) = tangent_cache().read().unwrap().get(j) {
        return t.clone();
    }
    let mut w = tangent_cache().write().unwrap();
    if w.len() <= j {
        let n = (2 * w.len()).max(j).max(32);
        *w = compute_tangents(n);
    }
    w[j].clone()
}

/// Exact Bernoulli number with `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rational {
    match n {
        0 => Rational::from(1),
        1 => Rational::from((-1, 2)),
        _ if n % 2 == 1 => Rational::new(),
        _ => {
            let k = (n / 2) as usize;
            let t = tangent_number(k);
            let four_k = Integer::from(1) << (2 * k as u32);
            let den = Integer::from(&four_k - 1u32) * four_k;
            let num = t * n;
            let b = Rational::from((num, den));
            if k % 2 == 1 {
                b
            } else {
                -b
            }
        }
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u32) -> Rational {
    // binary splitting keeps intermediate denominators balanced
    fn split(a: u32, b: u32) -> Rational {
        if b - a == 1 {
            return Rational::from((1, a));
        }
        let m = a + (b - a) / 2;
        split(a, m) + split(m, b)
    }
    if n == 0 {
        Rational::new()
    } else {
        split(1, n + 1)
    }
}
