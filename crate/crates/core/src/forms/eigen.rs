//! Numeric diagonalization of T_2 on the Miller basis.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::series::{charpoly, hecke_matrix, miller_basis, Series};
use crate::error::{Error, Result};
use crate::num::{fl, BigComplex};
use crate::poly::Poly;
use crate::roots::find_roots;

/// Bits needed to hold the largest basis coefficient.
pub(crate) fn basis_bits(basis: &[Series]) -> u32 {
    basis
        .iter()
        .flat_map(|b| b.iter())
        .map(|x| x.significant_bits())
        .max()
        .unwrap_or(0)
}

/// Null vector of a nearly singular square matrix with its first entry set
/// to 1, by elimination with complete pivoting.
fn null_vector(mut a: Vec<Vec<Float>>, prec: u32) -> Vec<Float> {
    let n = a.len();
    let mut cols: Vec<usize> = (0..n).collect();
    for step in 0..n - 1 {
        let (mut bi, mut bj) = (step, step);
        let mut best = Float::new(64);
        for i in step..n {
            for j in step..n {
                let v = fl(64, a[i][cols[j]].abs_ref());
                if v > best {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        a.swap(step, bi);
        cols.swap(step, bj);
        let pc = cols[step];
        for i in step + 1..n {
            let f = fl(prec, &a[i][pc] / &a[step][pc]);
            for j in step..n {
                let c = cols[j];
                let t = fl(prec, &f * &a[step][c]);
                a[i][c] -= t;
            }
        }
    }
    // the last pivot is numerically zero; its column is the free variable
    let mut x = vec![Float::new(prec); n];
    x[cols[n - 1]] = fl(prec, 1);
    for step in (0..n - 1).rev() {
        let pc = cols[step];
        let mut acc = Float::new(prec);
        for j in step + 1..n {
            let c = cols[j];
            acc += fl(prec, &a[step][c] * &x[c]);
        }
        x[pc] = -acc / &a[step][pc];
    }
    let x0 = x[0].clone();
    for v in &mut x {
        *v /= &x0;
    }
    x
}

/// Hecke eigenvalues of T_2 (descending) and the normalized eigenvectors in
/// the Miller basis, at `prec` bits.
pub(crate) fn diagonalize(k: u32, basis: &[Series], prec: u32) -> Result<Vec<(Float, Vec<Float>)>> {
    let m = hecke_matrix(k, 2, basis)?;
    let d = m.len();
    let to_f = |r: &Rational| Float::with_val(prec, r);
    if d == 1 {
        return Ok(vec![(to_f(&m[0][0]), vec![fl(prec, 1)])]);
    }
    let cp = charpoly(&m);
    let poly = Poly::from_real(cp.iter().map(to_f).collect());
    let roots = find_roots(&poly, prec)?;
    let mut lambdas: Vec<Float> = roots.into_iter().map(|r| r.z.re).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // polish on the real polynomial
    for l in &mut lambdas {
        for _ in 0..4 {
            let (v, dv) = poly.eval_with_derivative(&BigComplex::from_real(l.clone()));
            if dv.re.is_zero() {
                break;
            }
            *l -= fl(prec, &v.re / &dv.re);
        }
    }
    let mut out = Vec::with_capacity(d);
    for l in lambdas {
        let a: Vec<Vec<Float>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut x = to_f(&m[i][j]);
                        if i == j {
                            x -= &l;
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        let x = null_vector(a, prec);
        out.push((l, x));
    }
    Ok(out)
}

/// Coefficients `a_n = Σ_j x_j b_j(n)` of the eigenform with vector `x`.
pub(crate) fn combine(basis: &[Series], x: &[Float], len: usize, prec: u32) -> Vec<Float> {
    (0..len)
        .map(|n| {
            let mut acc = Float::new(prec);
            for (b, xj) in basis.iter().zip(x) {
                if b[n] != 0 {
                    acc += fl(prec, xj * &b[n]);
                }
            }
            acc
        })
        .collect()
}

/// Normalized residual of `T_2 a = a_2 a` on the available coefficients.
pub(crate) fn eigen_residual(k: u32, a: &[Float]) -> Float {
    let prec = a[1].prec();
    let p_pow = Float::with_val(prec, Integer::from(2).pow(k - 1));
    let mut num = Float::new(64);
    let mut den = Float::new(64);
    for n in 1..a.len() / 2 {
        let mut t = a[2 * n].clone();
        let mut size = fl(64, a[2 * n].abs_ref());
        if n % 2 == 0 {
            let u = fl(prec, &p_pow * &a[n / 2]);
            size += fl(64, u.abs_ref());
            t += u;
        }
        let v = fl(prec, &a[2] * &a[n]);
        size += fl(64, v.abs_ref());
        t -= v;
        let r = fl(64, t.abs_ref());
        if r > num {
            num = r;
        }
        if size > den {
            den = size;
        }
    }
    if den.is_zero() {
        return num;
    }
    num / den
}

/// All normalized eigenforms of weight `k` with coefficients `a_0..a_{len-1}`
/// at `prec` bits, ordered by `a_2` descending, each with its residual.
pub(crate) fn eigenform_coefficients(k: u32, len: usize, prec: u32) -> Result<Vec<(Vec<Float>, Float)>> {
    let basis = miller_basis(k, len)?;
    let wp = prec + basis_bits(&basis);
    let vecs = diagonalize(k, &basis, wp)?;
    let mut bound = Float::with_val(64, 1);
    bound >>= (prec / 2) as i32;
    let mut out = Vec::with_capacity(vecs.len());
    for (_, x) in vecs {
        let a: Vec<Float> = combine(&basis, &x, len, wp).into_iter().map(|v| fl(prec, v)).collect();
        let res = eigen_residual(k, &a);
        if res >= bound {
            return Err(Error::Diagonalization { residual: res.to_f64(), bound: bound.to_f64() });
        }
        out.push((a, res));
    }
    Ok(out)
}

