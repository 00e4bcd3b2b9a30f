//! Integer q-expansions, the Miller basis of S_k and Hecke matrices.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Truncated q-series with integer coefficients `a_0..a_{len-1}`.
pub type Series = Vec<Integer>;

/// `Σ_{d | n} d^r`.
pub fn sigma_power(n: u64, r: u32) -> Integer {
    assert!(n >= 1);
    let mut acc = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += Integer::from(d).pow(r);
            let e = n / d;
            if e != d {
                acc += Integer::from(e).pow(r);
            }
        }
        d += 1;
    }
    acc
}

/// Dimension of the space of level-1 cusp forms of weight `k`.
pub fn dim_cusp(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

pub fn mul(a: &[Integer], b: &[Integer], len: usize) -> Series {
    let mut out = vec![Integer::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn eisenstein_integral(r: u32, c: i64, len: usize) -> Series {
    let mut s = vec![Integer::new(); len];
    s[0] = Integer::from(1);
    for (n, a) in s.iter_mut().enumerate().skip(1) {
        *a = sigma_power(n as u64, r) * c;
    }
    s
}

/// `E_4 = 1 + 240 Σ σ_3(n) q^n`.
pub fn e4(len: usize) -> Series {
    eisenstein_integral(3, 240, len)
}

/// `E_6 = 1 − 504 Σ σ_5(n) q^n`.
pub fn e6(len: usize) -> Series {
    eisenstein_integral(5, -504, len)
}

/// `Δ = (E_4³ − E_6²) / 1728`.
pub fn delta(len: usize) -> Series {
    let a = e4(len);
    let b = e6(len);
    let a3 = mul(&mul(&a, &a, len), &a, len);
    let b2 = mul(&b, &b, len);
    a3.iter()
        .zip(&b2)
        .map(|(x, y)| {
            let d = Integer::from(x - y);
            debug_assert!(d.is_divisible_u(1728));
            d.div_exact_u(1728)
        })
        .collect()
}

fn power(base: &[Integer], e: u32, len: usize) -> Series {
    let mut acc = vec![Integer::new(); len];
    acc[0] = Integer::from(1);
    for _ in 0..e {
        acc = mul(&acc, base, len);
    }
    acc
}

/// Echelonized integer basis `f_1..f_d` of S_k, `f_j = q^j + O(q^{d+1})`,
/// each truncated to `len` coefficients.
pub fn miller_basis(k: u32, len: usize) -> Result<Vec<Series>> {
    let d = dim_cusp(k);
    if d == 0 {
        return Err(Error::Domain(format!("S_{k} is zero")));
    }
    if len < d + 2 {
        return Err(Error::Truncation(format!("need more than {} coefficients", d + 1)));
    }
    let e4s = e4(len);
    let e6s = e6(len);
    let ds = delta(len);
    let mut gens = Vec::with_capacity(d);
    let mut delta_pow = vec![Integer::new(); len];
    delta_pow[0] = Integer::from(1);
    for a in 1..=d as u32 {
        delta_pow = mul(&delta_pow, &ds, len);
        let rest = k - 12 * a;
        let (b, c) = if rest % 4 == 0 { (rest / 4, 0) } else { ((rest - 6) / 4, 1) };
        let mut g = mul(&delta_pow, &power(&e4s, b, len), len);
        if c == 1 {
            g = mul(&g, &e6s, len);
        }
        gens.push(g);
    }
    // back-substitute so that f_j has no q^l term for j < l <= d
    for j in (0..d).rev() {
        for l in j + 1..d {
            let c = gens[j][l + 1].clone();
            if c != 0 {
                let (head, tail) = gens.split_at_mut(l);
                for (x, y) in head[j].iter_mut().zip(&tail[0]) {
                    *x -= Integer::from(&c * y);
                }
            }
        }
    }
    Ok(gens)
}

/// Matrix of `T_p` in the Miller basis: entry `[i][j]` is the coefficient of
/// `q^{i+1}` in `T_p f_{j+1}`.
pub fn hecke_matrix(k: u32, p: u64, basis: &[Series]) -> Result<Vec<Vec<Rational>>> {
    let d = basis.len();
    let need = (p as usize) * d + 1;
    if basis.iter().any(|b| b.len() < need) {
        return Err(Error::Truncation(format!(
            "T_{p} on S_{k} needs {need} coefficients"
        )));
    }
    let pk = Integer::from(p).pow(k - 1);
    let mut m = vec![vec![Rational::new(); d]; d];
    for i in 0..d {
        let n = (i + 1) as u64;
        for (j, b) in basis.iter().enumerate() {
            let mut v = b[(n * p) as usize].clone();
            if n % p == 0 {
                v += Integer::from(&pk * &b[(n / p) as usize]);
            }
            m[i][j] = Rational::from(v);
        }
    }
    Ok(m)
}

/// Characteristic polynomial `det(xI − A)`, ascending coefficients, by
/// Faddeev–LeVerrier over the rationals.
pub fn charpoly(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::new(); n + 1];
    c[n] = Rational::from(1);
    let mut m = vec![vec![Rational::new(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Rational::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::new();
                for l in 0..n {
                    acc += Rational::from(&a[i][l] * &m[l][j]);
                }
                if i == j {
                    acc += &c[n - k + 1];
                }
                next[i][j] = acc;
            }
        }
        m = next;
        let mut tr = Rational::new();
        for i in 0..n {
            for l in 0..n {
                tr += Rational::from(&a[i][l] * &m[l][i]);
            }
        }
        c[n - k] = -tr / k as u32;
    }
    c
}
