//! Level-1 modular forms as truncated q-expansions.

mod eigen;
mod evaluate;
mod series;

pub use evaluate::{evaluate_form, evaluate_form_with, terms_needed, DEFAULT_Y_MIN};
pub use series::{charpoly, delta, dim_cusp, e4, e6, hecke_matrix, miller_basis, sigma_power, Series};

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::num::{check_prec, work};
use crate::specfun::bernoulli;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormKind {
    Eisenstein,
    Cusp,
}

impl FormKind {
    pub fn label(self) -> &'static str {
        match self {
            FormKind::Eisenstein => "eisenstein",
            FormKind::Cusp => "cusp",
        }
    }
}

impl std::str::FromStr for FormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eisenstein" => Ok(FormKind::Eisenstein),
            "cusp" | "cusp-eigenform" => Ok(FormKind::Cusp),
            _ => Err(Error::Domain(format!("unknown form kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormSpec {
    pub weight: u32,
    pub kind: FormKind,
    /// Position among the eigenforms of this weight by `a_2` descending.
    pub index: usize,
    pub prec: u32,
    /// Highest coefficient index kept.
    pub terms: usize,
}

/// `max(64, ⌈P ln 2 / (2π y_min) + k ln P⌉)`.
pub fn default_terms(k: u32, prec: u32, y_min: f64) -> usize {
    let p = prec as f64;
    let n = p * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI * y_min) + k as f64 * p.ln();
    (n.ceil() as usize).max(64)
}

impl FormSpec {
    pub fn eisenstein(weight: u32, prec: u32) -> Self {
        FormSpec { weight, kind: FormKind::Eisenstein, index: 0, prec, terms: default_terms(weight, prec, DEFAULT_Y_MIN) }
    }

    pub fn cusp(weight: u32, index: usize, prec: u32) -> Self {
        FormSpec { weight, kind: FormKind::Cusp, index, prec, terms: default_terms(weight, prec, DEFAULT_Y_MIN) }
    }

    pub fn with_terms(mut self, terms: usize) -> Self {
        self.terms = terms;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_prec(self.prec)?;
        let k = self.weight;
        if k % 2 == 1 || k < 4 {
            return Err(Error::Domain(format!("weight {k} must be even and at least 4")));
        }
        match self.kind {
            FormKind::Eisenstein => {
                if self.index != 0 {
                    return Err(Error::Domain("Eisenstein series take index 0".into()));
                }
            }
            FormKind::Cusp => {
                let d = dim_cusp(k);
                if d == 0 {
                    return Err(Error::Domain(format!("no cusp forms of weight {k}")));
                }
                if self.index >= d {
                    return Err(Error::Domain(format!("index {} out of range: dim S_{k} = {d}", self.index)));
                }
            }
        }
        if self.terms < 2 {
            return Err(Error::Truncation("at least two coefficients are required".into()));
        }
        Ok(())
    }

    /// Short stable identifier such as `E12` or `S24.1`.
    pub fn id(&self) -> String {
        match self.kind {
            FormKind::Eisenstein => format!("E{}", self.weight),
            FormKind::Cusp => format!("S{}.{}", self.weight, self.index),
        }
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// `a_0..a_N`, real for every level-1 eigenform.
#[derive(Clone, Debug)]
pub struct FourierCoefficients {
    pub a: Vec<Float>,
}

impl FourierCoefficients {
    pub fn a0(&self) -> &Float {
        &self.a[0]
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// A form together with its coefficients and a coefficient growth bound.
#[derive(Clone, Debug)]
pub struct Form {
    pub spec: FormSpec,
    pub coeffs: FourierCoefficients,
}

impl Form {
    pub fn build(spec: &FormSpec) -> Result<Form> {
        spec.validate()?;
        let coeffs = match spec.kind {
            FormKind::Eisenstein => eisenstein_series(spec.weight, spec.terms, spec.prec)?,
            FormKind::Cusp => {
                let mut all = eigenforms(spec.weight, spec.prec, spec.terms)?;
                all.swap_remove(spec.index)
            }
        };
        Ok(Form { spec: spec.clone(), coeffs })
    }

    pub fn weight(&self) -> u32 {
        self.spec.weight
    }

    pub fn a0(&self) -> &Float {
        self.coeffs.a0()
    }

    pub fn has_constant_term(&self) -> bool {
        !self.coeffs.a[0].is_zero()
    }

    /// `(log C, α)` with `|a_n| ≤ C n^α` for `n ≥ 1`.
    pub fn growth(&self) -> (f64, f64) {
        let k = self.spec.weight as f64;
        match self.spec.kind {
            // Deligne: |a_n| ≤ d(n) n^{(k-1)/2} ≤ 2 n^{k/2}
            FormKind::Cusp => (std::f64::consts::LN_2, k / 2.0),
            // |a_n| = c σ_{k-1}(n) ≤ c ζ(k-1) n^{k-1} ≤ 2c n^{k-1}
            FormKind::Eisenstein => {
                let c = self.coeffs.a[1].to_f64().abs();
                ((2.0 * c).ln(), k - 1.0)
            }
        }
    }
}

/// The exact Eisenstein constant `(2π)^k / (ζ(k) Γ(k)) = −2k / B_k`.
pub fn eisenstein_constant(k: u32) -> Rational {
    Rational::from(-2 * k as i64) / bernoulli(k)
}

/// `E_k = 1 + c_k Σ σ_{k−1}(n) q^n` with `N + 1` coefficients at `P + 64` bits.
pub fn eisenstein_series(k: u32, terms: usize, prec: u32) -> Result<FourierCoefficients> {
    check_prec(prec)?;
    if k % 2 == 1 || k < 4 {
        return Err(Error::Domain(format!("Eisenstein weight {k} must be even and at least 4")));
    }
    let wp = work(prec);
    let c = eisenstein_constant(k);
    let mut a = Vec::with_capacity(terms + 1);
    a.push(Float::with_val(wp, 1));
    for n in 1..=terms {
        a.push(Float::with_val(wp, eisenstein_exact(&c, k, n as u64)));
    }
    Ok(FourierCoefficients { a })
}

/// Exact `a_n = c_k σ_{k−1}(n)` given the constant `c_k`.
pub fn eisenstein_exact(c: &Rational, k: u32, n: u64) -> Rational {
    let s: Integer = sigma_power(n, k - 1);
    Rational::from(c * s)
}

/// All normalized Hecke eigencuspforms of weight `k`, ordered by `a_2`
/// descending, with `N + 1` coefficients at `P + 64` bits.
pub fn eigenforms(k: u32, prec: u32, terms: usize) -> Result<Vec<FourierCoefficients>> {
    check_prec(prec)?;
    if k % 2 == 1 || dim_cusp(k) == 0 {
        return Err(Error::Domain(format!("no cusp forms of weight {k}")));
    }
    let len = (terms + 1).max(2 * dim_cusp(k) + 2);
    let forms = eigen::eigenform_coefficients(k, len, work(prec))?;
    Ok(forms
        .into_iter()
        .map(|(mut a, _)| {
            a.truncate(terms + 1);
            FourierCoefficients { a }
        })
        .collect())
}

/// Eigen-residual `‖T_2 a − a_2 a‖ / scale` for a coefficient vector.
pub fn eigen_residual(k: u32, f: &FourierCoefficients) -> Float {
    eigen::eigen_residual(k, &f.a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{fl, pi};
    use crate::specfun::zeta;

    const P: u32 = 256;

    #[test]
    fn eisenstein_leading_coefficients() {
        let e4 = eisenstein_series(4, 3, P).unwrap();
        assert_eq!(e4.a[1], 240);
        let e12 = eisenstein_series(12, 3, P).unwrap();
        let expect = Float::with_val(work(P), Rational::from((65520, 691)));
        assert_eq!(e12.a[1], expect);
    }

    #[test]
    fn eisenstein_constant_matches_zeta_gamma() {
        for k in [4u32, 12, 20, 36] {
            let wp = work(P);
            let z = zeta(&fl(P, k), P).unwrap().value;
            let g = fl(wp, k).gamma();
            let direct = fl(wp, (pi(wp) * 2u32).pow(k)) / (z * g);
            let exact = Float::with_val(wp, eisenstein_constant(k));
            let rel = (fl(64, &direct - &exact) / fl(64, &exact)).abs();
            assert!(rel.to_f64() < 1e-80, "k = {k}");
        }
    }

    #[test]
    fn eisenstein_ratio_law() {
        for k in [4u32, 10, 22] {
            let c = eisenstein_constant(k);
            let a1 = eisenstein_exact(&c, k, 1);
            for n in 1..=30u64 {
                let ratio = eisenstein_exact(&c, k, n) / &a1;
                assert_eq!(ratio, sigma_power(n, k - 1), "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn eisenstein_rejects_bad_weights() {
        assert!(eisenstein_series(13, 3, P).is_err());
        assert!(eisenstein_series(2, 3, P).is_err());
    }

    #[test]
    fn delta_eigenform() {
        let f = eigenforms(12, P, 10).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].a[0], 0);
        assert_eq!(f[0].a[1], 1);
        assert_eq!(f[0].a[2], -24);
        assert_eq!(f[0].a[3], 252);
    }

    #[test]
    fn weight_24_eigenvalues() {
        let f = eigenforms(24, P, 30).unwrap();
        assert_eq!(f.len(), 2);
        let wp = work(P);
        let r = fl(wp, 144169).sqrt() * 12u32;
        let hi = fl(wp, 540) + &r;
        let lo = fl(wp, 540) - &r;
        assert!(fl(64, &f[0].a[2] - &hi).abs().to_f64() < 1e-60);
        assert!(fl(64, &f[1].a[2] - &lo).abs().to_f64() < 1e-60);
    }

    #[test]
    fn multiplicativity_and_prime_powers() {
        for k in [24u32, 36, 48] {
            let forms = eigenforms(k, P, 40).unwrap();
            for f in &forms {
                let tol = |x: &Float| {
                    let mut t = fl(64, x.abs_ref()) + 1u32;
                    t >>= (P / 2) as i32;
                    t
                };
                for (m, n) in [(2usize, 3usize), (2, 5), (3, 4), (5, 6)] {
                    let prod = fl(work(P), &f.a[m] * &f.a[n]);
                    assert!(fl(64, &prod - &f.a[m * n]).abs() < tol(&prod), "k = {k}: a_{m} a_{n}");
                }
                for p in [2usize, 3] {
                    let pk = Float::with_val(work(P), Integer::from(p).pow(k - 1));
                    let expect = fl(work(P), f.a[p].square_ref()) - pk;
                    assert!(fl(64, &expect - &f.a[p * p]).abs() < tol(&expect), "k = {k}: p = {p}");
                }
                let res = eigen_residual(k, f);
                assert!(res.to_f64() < 2f64.powi(-(P as i32) / 2));
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(FormSpec::cusp(12, 0, P).validate().is_ok());
        assert!(FormSpec::cusp(12, 1, P).validate().is_err());
        assert!(FormSpec::cusp(10, 0, P).validate().is_err());
        assert!(FormSpec::eisenstein(13, P).validate().is_err());
        assert!(FormSpec::eisenstein(8, 32).validate().is_err());
    }

    use rug::ops::Pow;
}
