//! Period polynomials built from tables of Λ^(m), the weight 2 − k slash
//! action, and the self-inversive split used by the Eneström–Kakeya argument.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::lvalues::{tilde_derivatives, LDerivativeTable};
use crate::num::{binomial, check_prec, fl, pow2, work, BigComplex};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyKind {
    Full,
    Odd,
    TildeOdd,
    QPart,
}

impl PolyKind {
    pub fn label(self) -> &'static str {
        match self {
            PolyKind::Full => "full",
            PolyKind::Odd => "odd",
            PolyKind::TildeOdd => "tilde-odd",
            PolyKind::QPart => "q-part",
        }
    }
}

impl fmt::Display for PolyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for PolyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(PolyKind::Full),
            "odd" => Ok(PolyKind::Odd),
            "tilde-odd" | "tilde" => Ok(PolyKind::TildeOdd),
            "q-part" => Ok(PolyKind::QPart),
            _ => Err(Error::Domain(format!("unknown polynomial kind {s:?}"))),
        }
    }
}

/// A period polynomial in ascending degree.
///
/// Odd kinds are stored with the trivial factor `z` removed; `origin_roots`
/// counts the removed zeros so root reports can list them.
#[derive(Clone, Debug)]
pub struct PeriodPolynomial {
    pub kind: PolyKind,
    pub weight: u32,
    pub m: u32,
    pub poly: Poly,
    /// Identifier of the table (or closed form) the coefficients came from.
    pub source: String,
    pub origin_roots: usize,
}

impl PeriodPolynomial {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Coefficients from the top degree down, as the polynomial is usually
    /// written.
    pub fn descending(&self) -> Vec<BigComplex> {
        self.poly.c.iter().rev().cloned().collect()
    }

    /// The same polynomial divided by its leading coefficient.
    pub fn monic(&self) -> PeriodPolynomial {
        PeriodPolynomial { poly: self.poly.monic(), ..self.clone() }
    }
}

fn binom_times(n: u32, j: u32, v: &BigComplex) -> BigComplex {
    let wp = v.prec();
    v.scale(&Float::with_val(wp, binomial(n, j)))
}

/// `Q(z) = Σ_{n=0}^{k−2} C(k−2, n) i^{1−n} Λ^(m)(n+1) z^{k−2−n}`.
pub fn full_polynomial(t: &LDerivativeTable) -> Result<PeriodPolynomial> {
    t.require_complete()?;
    let k = t.weight();
    let d = (k - 2) as usize;
    let wp = work(t.prec);
    let mut c = vec![BigComplex::zero(wp); d + 1];
    for n in 0..=d {
        let v = binom_times(k - 2, n as u32, &t.at(n as u32 + 1).value).mul_i_pow(1 - n as i64);
        c[d - n] = v;
    }
    Ok(PeriodPolynomial { kind: PolyKind::Full, weight: k, m: t.m, poly: Poly::new(c), source: t.spec.id(), origin_roots: 0 })
}

fn odd_from_values(k: u32, prec: u32, value: impl Fn(u32) -> Result<BigComplex>) -> Result<Poly> {
    let d = (k - 4) as usize;
    let wp = work(prec);
    let mut c = vec![BigComplex::zero(wp); d + 1];
    for n in (1..=k - 3).step_by(2) {
        let v = binom_times(k - 2, n, &value(n + 1)?).mul_i_pow(1 - n as i64);
        c[(k - 3 - n) as usize] = v;
    }
    let p = Poly::new(c);
    let scale = p.max_abs();
    let mut tol = fl(64, &scale);
    tol >>= (prec / 2) as i32;
    for (i, x) in p.c.iter().enumerate() {
        let im = fl(64, x.im.abs_ref());
        if im > tol {
            return Err(Error::ComplexCoefficient { index: i, im: im.to_f64() });
        }
    }
    Ok(p)
}

/// `Σ_{n odd} C(k−2, n) i^{1−n} Λ^(m)(n+1) z^{k−3−n}`, the odd part of Q
/// divided by z.
pub fn odd_part(t: &LDerivativeTable) -> Result<PeriodPolynomial> {
    t.require_complete()?;
    let k = t.weight();
    let poly = odd_from_values(k, t.prec, |s| Ok(t.at(s).value.clone()))?;
    Ok(PeriodPolynomial { kind: PolyKind::Odd, weight: k, m: t.m, poly, source: t.spec.id(), origin_roots: 1 })
}

/// `P^m(z) = Σ_{n odd} C(k−2, n) i^{1−n} Λ̃^(m)(n+1) z^{k−3−n}` for E_k.
pub fn tilde_odd_part(k: u32, m: u32, prec: u32) -> Result<PeriodPolynomial> {
    check_prec(prec)?;
    if k % 2 == 1 || k < 6 {
        return Err(Error::Domain(format!("tilde odd part needs even k ≥ 6, got {k}")));
    }
    let wp = work(prec);
    let poly = odd_from_values(k, prec, |s| {
        let t = tilde_derivatives(k, m, &Float::with_val(wp, s), prec)?;
        Ok(BigComplex::from_real(t[m as usize].value.clone()))
    })?;
    Ok(PeriodPolynomial { kind: PolyKind::TildeOdd, weight: k, m, poly, source: format!("E{k}~"), origin_roots: 1 })
}

fn int_poly_pow(a: i64, b: i64, e: u32) -> Vec<Integer> {
    // (a z + b)^e, ascending
    (0..=e)
        .map(|j| binomial(e, j) * Integer::from(a).pow(j) * Integer::from(b).pow(e - j))
        .collect()
}

fn int_poly_mul(x: &[Integer], y: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += Integer::from(a * b);
        }
    }
    out
}

/// `(p|_{2−k} γ)(z) = p(γz) (cz + d)^{k−2}`, expanded exactly.
pub fn slash(p: &Poly, g: &GroupElement, k: u32) -> Result<Poly> {
    let w = (k - 2) as usize;
    let deg = p.degree();
    if deg > w {
        return Err(Error::DegreeOverflow { degree: deg, max: w });
    }
    let prec = p.prec();
    let mut out = Poly::zero(w + 1, prec);
    for (j, pj) in p.c.iter().enumerate().take(w + 1) {
        if pj.is_zero() {
            continue;
        }
        let basis = int_poly_mul(&int_poly_pow(g.a, g.b, j as u32), &int_poly_pow(g.c, g.d, (w - j) as u32));
        for (i, c) in basis.iter().enumerate() {
            if *c != 0 {
                out.c[i] += &pj.scale(&Float::with_val(prec, c));
            }
        }
    }
    Ok(out)
}

/// Pointwise slash: `v(γz) (cz + d)^{k−2}` for a value `v` already taken at γz.
pub fn slash_value(v_at_gz: &BigComplex, g: &GroupElement, z: &BigComplex, k: u32) -> BigComplex {
    v_at_gz * &g.j(z).powi(k - 2)
}

/// The self-inversive split `E(x) = q(x) + ε x^D q(1/x)` of an odd or
/// tilde-odd polynomial.
#[derive(Clone, Debug)]
pub struct QDecomposition {
    /// `q`, supported on degrees `D/2..=D`, scaled so the top coefficient is
    /// positive.
    pub q: PeriodPolynomial,
    pub epsilon: i32,
    /// `x = sign · z²`.
    pub variable_sign: i32,
    /// `E` in the variable `x` before the split, with the same scaling as `q`.
    pub even: Poly,
    pub residual: Float,
}

/// Splits an odd-kind polynomial for `k ≡ 0 (mod 4)`.
///
/// The even-variable form is `E(x) = Σ_l B_l x^l` with `B_l` the coefficient
/// of `z^{k−4−2l}`. For the plain odd part `x = z²`; for the tilde kind
/// `x = −z²`, which removes the alternating signs `i^{1−n}`. In both cases
/// `B_{D−l} = (−1)^m B_l` with `D = k/2 − 2`, so `ε = (−1)^m`.
pub fn q_decompose(p: &PeriodPolynomial) -> Result<QDecomposition> {
    let k = p.weight;
    if k % 4 != 0 {
        return Err(Error::WeightMod4(k));
    }
    let sign = match p.kind {
        PolyKind::Odd => 1,
        PolyKind::TildeOdd => -1,
        _ => return Err(Error::Domain(format!("q_decompose needs an odd kind, got {}", p.kind))),
    };
    let d = (k / 2 - 2) as usize;
    let top = (k - 4) as usize;
    let prec = p.poly.prec();
    let mut b: Vec<Float> = (0..=d)
        .map(|l| {
            let x = p.poly.c.get(top - 2 * l).map(|c| c.re.clone()).unwrap_or_else(|| Float::new(prec));
            if sign < 0 && l % 2 == 1 {
                -x
            } else {
                x
            }
        })
        .collect();
    let epsilon = if p.m % 2 == 0 { 1 } else { -1 };
    let mut q: Vec<Float> = vec![Float::new(prec); d + 1];
    for l in d / 2..=d {
        q[l] = b[l].clone();
        if 2 * l == d {
            q[l] /= 2u32;
        }
    }
    if let Some(t) = q.iter().rev().find(|x| !x.is_zero()) {
        if *t < 0 {
            for x in q.iter_mut().chain(b.iter_mut()) {
                *x = -x.clone();
            }
        }
    }
    let mut recon: Vec<Float> = q.clone();
    for l in d / 2..=d {
        let mut t = q[l].clone();
        if epsilon < 0 {
            t = -t;
        }
        recon[d - l] += t;
    }
    let mut worst = Float::new(64);
    let mut scale = Float::new(64);
    for (x, y) in recon.iter().zip(&b) {
        let r = fl(64, fl(prec, x - y).abs());
        if r > worst {
            worst = r;
        }
        let a = fl(64, y.abs_ref());
        if a > scale {
            scale = a;
        }
    }
    let residual = if scale.is_zero() { worst } else { worst / scale };
    if residual > pow2(-((prec.saturating_sub(64)) as i64) / 2) {
        return Err(Error::Reconstruction(residual.to_f64()));
    }
    let qp = PeriodPolynomial {
        kind: PolyKind::QPart,
        weight: k,
        m: p.m,
        poly: Poly::from_real(q),
        source: p.source.clone(),
        origin_roots: 0,
    };
    Ok(QDecomposition { q: qp, epsilon, variable_sign: sign, even: Poly::from_real(b), residual })
}

/// The sign σ with `Q|_{2−k} S = σ Q` within `tol` relative to `max |Q_j|`.
pub fn functional_symmetry(q: &PeriodPolynomial, tol: f64) -> Result<i32> {
    if q.kind != PolyKind::Full {
        return Err(Error::Domain(format!("functional_symmetry needs the full polynomial, got {}", q.kind)));
    }
    let qs = slash(&q.poly, &GroupElement::S, q.weight)?;
    let scale = q.poly.max_abs();
    let rel = |d: Float| if scale.is_zero() { d.to_f64() } else { (d / &scale).to_f64() };
    let plus = rel(qs.distance(&q.poly));
    let minus = rel(qs.add(&q.poly).max_abs());
    if plus <= tol && plus <= minus {
        Ok(1)
    } else if minus <= tol {
        Ok(-1)
    } else {
        Err(Error::NoSymmetry { plus, minus })
    }
}
