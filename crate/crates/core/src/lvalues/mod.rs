//! Derivatives Λ^(m)(s) of completed L-functions at the critical integers.
//!
//! Two routes: the Mellin integral for every form, and closed forms in ζ
//! and Γ for Eisenstein series. Tables are cached by (form, m, s, P).

mod closed;
mod mellin;

pub use closed::{eisenstein_scale, lambda_closed, lambda_eisenstein, lambda_tilde_deriv, tilde_derivatives};

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use rug::Float;

use crate::error::{Error, Result};
use crate::forms::{terms_needed, Form, FormKind, FormSpec};
use crate::num::{check_prec, fl, pow2, work, BigComplex};
use mellin::MellinKernel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Mellin,
    ClosedForm,
}

impl Route {
    pub fn label(self) -> &'static str {
        match self {
            Route::Mellin => "mellin",
            Route::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One value Λ^(m)(s) with its error estimate and the route that produced it.
#[derive(Clone, Debug)]
pub struct LValue {
    pub value: BigComplex,
    pub error: Float,
    pub route: Route,
}

impl LValue {
    fn real(value: Float, error: Float, route: Route) -> Self {
        LValue { value: BigComplex::from_real(value), error, route }
    }
}

/// Λ^(m)(n + 1) for `n = 0..=k−2`.
#[derive(Clone, Debug)]
pub struct LDerivativeTable {
    pub spec: FormSpec,
    pub m: u32,
    pub prec: u32,
    pub entries: Vec<LValue>,
}

impl LDerivativeTable {
    pub fn weight(&self) -> u32 {
        self.spec.weight
    }

    /// Entry at the critical integer `s`.
    pub fn at(&self, s: u32) -> &LValue {
        &self.entries[(s - 1) as usize]
    }

    pub fn is_complete(&self) -> bool {
        self.entries.len() + 1 == self.weight() as usize
    }

    pub fn require_complete(&self) -> Result<()> {
        if !self.is_complete() {
            return Err(Error::IncompleteTable {
                expected: self.weight() as usize - 1,
                found: self.entries.len(),
            });
        }
        Ok(())
    }

    pub fn scale(&self) -> Float {
        self.entries.iter().map(|e| e.value.abs()).fold(Float::new(64), |a, b| if b > a { fl(64, b) } else { a })
    }

    /// `max_n |Λ^(m)(n+1) − i^k (−1)^m Λ^(m)(k−1−n)| / max_n |Λ^(m)(n+1)|`.
    pub fn fe_residual(&self) -> Float {
        let k = self.weight();
        let flip = (k % 4 == 2) != (self.m % 2 == 1);
        let mut worst = Float::new(64);
        for s in 1..k {
            let a = &self.at(s).value;
            let b = &self.at(k - s).value;
            let d = if flip { fl(64, (a.clone() + b.clone()).abs()) } else { fl(64, a.dist(b)) };
            if d > worst {
                worst = d;
            }
        }
        let scale = self.scale();
        if scale.is_zero() {
            worst
        } else {
            worst / scale
        }
    }

    /// Largest imaginary part relative to the table scale.
    pub fn max_imag(&self) -> Float {
        let m = self.entries.iter().map(|e| fl(64, e.value.im.abs_ref())).fold(Float::new(64), |a, b| if b > a { b } else { a });
        let scale = self.scale();
        if scale.is_zero() {
            m
        } else {
            m / scale
        }
    }

    pub fn max_error(&self) -> Float {
        self.entries.iter().map(|e| e.error.clone()).fold(Float::new(64), |a, b| if b > a { b } else { a })
    }
}

/// Coefficients the Mellin route needs for weight `k` at `P` bits.
pub fn mellin_terms(k: u32, kind: FormKind, prec: u32) -> usize {
    let growth = match kind {
        FormKind::Cusp => (std::f64::consts::LN_2, k as f64 / 2.0),
        FormKind::Eisenstein => {
            let c = crate::forms::eisenstein_constant(k).to_f64().abs();
            ((2.0 * c).ln(), k as f64 - 1.0)
        }
    };
    terms_needed(growth, 1.0, work(prec) + 8) + 1
}

/// Λ^(m)(s) for real `0 < s < k` by the Mellin integral.
pub fn lambda_deriv_mellin(form: &Form, m: u32, s: &Float, prec: u32) -> Result<LValue> {
    check_prec(prec)?;
    let kernel = MellinKernel::new(form, m, prec)?;
    let (v, e) = kernel.lambda(s, m)?;
    Ok(LValue::real(v, e, Route::Mellin))
}

fn eisenstein_form(k: u32, prec: u32) -> Result<Form> {
    Form::build(&FormSpec::eisenstein(k, prec).with_terms(mellin_terms(k, FormKind::Eisenstein, prec)))
}

/// Λ^(m)(s) of E_k at an integer `1 ≤ s ≤ k − 1`: closed form inside, Mellin
/// at the endpoints where ζ(s) ζ(s − k + 1) has a cancelling pole and zero.
pub fn lambda_deriv_eisenstein(k: u32, m: u32, s: u32, prec: u32) -> Result<LValue> {
    check_prec(prec)?;
    if s < 1 || s + 1 > k {
        return Err(Error::Domain(format!("s = {s} outside [1, {}]", k as i64 - 1)));
    }
    let wp = work(prec);
    if s == 1 || s == k - 1 {
        let f = eisenstein_form(k, prec)?;
        return lambda_deriv_mellin(&f, m, &Float::with_val(wp, s), prec);
    }
    let e = lambda_closed(k, m, &Float::with_val(wp, s), prec)?;
    Ok(LValue::real(e.value, e.error, Route::ClosedForm))
}

type CacheKey = (String, u32, u32, u32);

fn cache() -> &'static RwLock<HashMap<CacheKey, LValue>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, LValue>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached Λ^(m)(s) for the form with identifier `id`.
pub fn cache_lookup(id: &str, m: u32, s: u32, prec: u32) -> Option<LValue> {
    cache().read().unwrap().get(&(id.to_string(), m, s, prec)).cloned()
}

pub fn cache_insert(id: &str, m: u32, s: u32, prec: u32, v: LValue) {
    cache().write().unwrap().entry((id.to_string(), m, s, prec)).or_insert(v);
}

pub fn cache_len() -> usize {
    cache().read().unwrap().len()
}

fn cached_table(spec: &FormSpec, m: u32, prec: u32) -> Option<Vec<LValue>> {
    let c = cache().read().unwrap();
    let id = spec.id();
    (1..spec.weight).map(|s| c.get(&(id.clone(), m, s, prec)).cloned()).collect()
}

fn compute_table(form: &Form, m: u32, prec: u32) -> Result<Vec<LValue>> {
    let k = form.weight();
    let wp = work(prec);
    let need_mellin_everywhere = form.spec.kind == FormKind::Cusp;
    let kernel = MellinKernel::new(form, m, prec)?;
    let mut out = Vec::with_capacity(k as usize - 1);
    if need_mellin_everywhere {
        let ints = kernel.integer_integrals();
        let row = &ints[m as usize];
        for s in 1..k {
            let (v, e) = kernel.combine(&Float::with_val(wp, s), m, &row[(s - 1) as usize], &row[(k - s - 1) as usize])?;
            out.push(LValue::real(v, e, Route::Mellin));
        }
    } else {
        for s in 1..k {
            let sv = Float::with_val(wp, s);
            if s == 1 || s == k - 1 {
                let (v, e) = kernel.lambda(&sv, m)?;
                out.push(LValue::real(v, e, Route::Mellin));
            } else {
                let e = lambda_closed(k, m, &sv, prec)?;
                out.push(LValue::real(e.value, e.error, Route::ClosedForm));
            }
        }
    }
    Ok(out)
}

/// The table Λ^(m)(1), ..., Λ^(m)(k − 1) for `form`.
pub fn critical_table(form: &Form, m: u32, prec: u32) -> Result<LDerivativeTable> {
    check_prec(prec)?;
    let spec = form.spec.clone();
    let entries = match cached_table(&spec, m, prec) {
        Some(e) => e,
        None => {
            let e = compute_table(form, m, prec)?;
            let id = spec.id();
            for (i, v) in e.iter().enumerate() {
                cache_insert(&id, m, i as u32 + 1, prec, v.clone());
            }
            e
        }
    };
    Ok(LDerivativeTable { spec, m, prec, entries })
}

/// Tolerance `2^{−P/2}` used for the table invariants.
pub fn fe_tolerance(prec: u32) -> Float {
    pow2(-(prec as i64) / 2)
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::specfun::exp_moment;

    /// `Σ_n a_n exp_moment(n, σ, m)`, one quadrature per coefficient.
    pub(crate) fn mellin_by_moments(f: &Form, sigma: &Float, m: u32, prec: u32) -> Float {
        let wp = work(prec);
        let n0 = mellin_terms(f.weight(), f.spec.kind, prec).min(f.coeffs.len() - 1);
        let mut acc = Float::new(wp);
        for n in 1..=n0 {
            let e = exp_moment(n as u32, sigma, m, prec).unwrap();
            acc += fl(wp, &f.coeffs.a[n] * &e.value);
        }
        acc
    }
}
