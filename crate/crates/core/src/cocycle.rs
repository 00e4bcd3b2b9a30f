//! The η-logarithm cocycle, its cup powers, the cochains v_f obtained by
//! path integration, and numerical checks of the value formulas for
//! σ_f(S, …, S).
//!
//! The potential is `u = 2 log η`, with each factor of the product taken
//! through the principal logarithm. It satisfies
//! `u(γτ) = u(τ) + Log j(γ, τ) + c_γ` on the whole half-plane, with `c_S = −πi/2`.
//! Once `c_γ` has been measured, `v(γ)(τ) = u(γτ) − u(τ)` is evaluated as
//! `Log j(γ, τ) + c_γ`. That stays valid near the real axis, where the q-series
//! for `u(γτ)` no longer converges.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use rug::Float;

use crate::error::{Error, Result};
use crate::forms::{evaluate_form_with, Form, DEFAULT_Y_MIN};
use crate::group::GroupElement;
use crate::lvalues::critical_table;
use crate::num::{binomial, check_prec, factorial, fl, pi, pow2, powi, two_pi, work, BigComplex};
use crate::periodpoly::{full_polynomial, slash, slash_value};
use crate::poly::Poly;
use crate::quad::{gauss_legendre, nodes_for};

/// Largest number of q-series factors `eta_log` will take.
const MAX_FACTORS: usize = 2_000_000;

/// `log η(τ) = πiτ/12 + Σ_{n ≥ 1} Log(1 − qⁿ)` for `Im τ ≥ 0.05`.
pub fn eta_log(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    check_prec(prec)?;
    let y = tau.im.to_f64();
    if !(y >= DEFAULT_Y_MIN) {
        return Err(Error::UnsafePoint(y));
    }
    let wp = work(prec);
    let tau = tau.with_prec(wp);
    // |Log(1 − x)| ≤ |x| / (1 − |x|), so the tail after N factors is at most
    // |q|^{N+1} / (1 − |q|)²
    let rate = 2.0 * std::f64::consts::PI * y;
    let abs_q = (-rate).exp();
    let denom = -2.0 * (1.0 - abs_q).ln();
    let target = wp as f64 * std::f64::consts::LN_2;
    let n_max = ((target + denom) / rate).ceil() as usize;
    if n_max > MAX_FACTORS {
        return Err(Error::Truncation(format!("eta_log at Im τ = {y} needs {n_max} factors")));
    }
    let q = tau.mul_i_pow(1).scale(&two_pi(wp)).exp();
    let one = BigComplex::one(wp);
    let mut qn = q.clone();
    let mut sum = BigComplex::zero(wp);
    for _ in 0..n_max {
        sum += &(one.clone() - qn.clone()).ln();
        qn = &qn * &q;
    }
    let lead = tau.mul_i_pow(1).scale(&(pi(wp) / 12u32));
    Ok(lead + sum)
}

/// `u(τ) = 2 log η(τ)`.
pub fn eta_potential(tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let mut u = eta_log(tau, prec)?;
    u.re <<= 1;
    u.im <<= 1;
    Ok(u)
}

/// The constant in `u(γτ) = u(τ) + Log j(γ, τ) + c_γ`.
#[derive(Clone, Debug)]
pub struct CGamma {
    pub gamma: GroupElement,
    pub c: BigComplex,
    /// Spread of the three measurements.
    pub residual: Float,
}

fn test_points(g: &GroupElement, prec: u32) -> Result<Vec<BigComplex>> {
    let offsets = [(0.0, 1.0), (0.2, 1.1), (-0.3, 0.9)];
    if g.c == 0 {
        return Ok(offsets.iter().map(|&(x, y)| BigComplex::from_f64(prec, x, y * 1.2)).collect());
    }
    // τ = −d/c + (x + iy)/|c| has Im τ = y/|c| and Im γτ = y / (|c|(x² + y²))
    let c = g.c.unsigned_abs() as f64;
    if 0.9 / c < DEFAULT_Y_MIN {
        return Err(Error::UnsafePoint(0.9 / c));
    }
    let base = -(g.d as f64) / g.c as f64;
    Ok(offsets.iter().map(|&(x, y)| BigComplex::from_f64(prec, base + x / c, y / c)).collect())
}

type ConstantCache = RwLock<HashMap<(GroupElement, u32), BigComplex>>;

fn constants() -> &'static ConstantCache {
    static CACHE: OnceLock<ConstantCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Measures `c_γ` at three test points where both `τ` and `γτ` are in the
/// region `Im ≥ 0.05`, and checks that the measurements agree to `2^{−P/2}`.
pub fn cocycle_constant(g: &GroupElement, prec: u32) -> Result<CGamma> {
    check_prec(prec)?;
    let wp = work(prec);
    let mut values = Vec::with_capacity(3);
    for tau in test_points(g, wp)? {
        let gt = g.act(&tau);
        let c = eta_potential(&gt, prec)? - eta_potential(&tau, prec)? - g.j(&tau).ln();
        values.push(c);
    }
    let mut residual = Float::new(64);
    for v in &values[1..] {
        let d = fl(64, v.dist(&values[0]));
        if d > residual {
            residual = d;
        }
    }
    if residual > pow2(-(prec as i64) / 2) {
        return Err(Error::BranchInconsistency(residual.to_f64()));
    }
    Ok(CGamma { gamma: *g, c: values.swap_remove(0), residual })
}

fn constant(g: &GroupElement, prec: u32) -> Result<BigComplex> {
    if let Some(c) = constants().read().unwrap().get(&(*g, prec)) {
        return Ok(c.clone());
    }
    let c = cocycle_constant(g, prec)?.c;
    constants().write().unwrap().insert((*g, prec), c.clone());
    Ok(c)
}

/// `v(γ)(τ) = u(γτ) − u(τ) = Log j(γ, τ) + c_γ`, for any `τ` in the half-plane.
pub fn eta_cocycle(g: &GroupElement, tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    let y = tau.im.to_f64();
    if !(y > 0.0) || !tau.is_finite() {
        return Err(Error::UnsafePoint(y));
    }
    let c = constant(g, prec)?;
    Ok(g.j(tau).ln() + c.with_prec(tau.prec()))
}

/// `V_n(γ_1, …, γ_n)(τ) = v(γ_1)(τ) · V_{n−1}(γ_2, …, γ_n)(γ_1 τ)`.
pub fn cup_power(gammas: &[GroupElement], tau: &BigComplex, prec: u32) -> Result<BigComplex> {
    if gammas.is_empty() {
        return Err(Error::Domain("cup power needs at least one group element".into()));
    }
    let mut point = tau.clone();
    let mut acc = BigComplex::one(tau.prec());
    for g in gammas {
        acc = &acc * &eta_cocycle(g, &point, prec)?;
        if acc.is_zero() {
            return Ok(acc);
        }
        point = g.act(&point);
    }
    Ok(acc)
}

/// A path in the upper half-plane made of straight segments, optionally
/// starting at the cusp i∞ (reached vertically from the first finite vertex).
#[derive(Clone, Debug)]
pub struct PathIntegralSpec {
    pub from_cusp: bool,
    /// Finite vertices in order; the path ends at the last one.
    pub vertices: Vec<BigComplex>,
    pub prec: u32,
    pub y_min: f64,
}

/// `(f(w) − a_0) (w − z)^{k−2} V_n(γ…)(w)`, where the f factor is
/// present when `form` is given. An empty tuple means `V_0 = 1`.
#[derive(Clone, Copy)]
pub struct Integrand<'a> {
    pub form: Option<&'a Form>,
    pub weight: u32,
    pub gammas: &'a [GroupElement],
    pub z: &'a BigComplex,
}

impl Integrand<'_> {
    fn eval(&self, w: &BigComplex, prec: u32, y_min: f64) -> Result<BigComplex> {
        let mut out = (w.clone() - self.z.clone()).powi(self.weight - 2);
        if !self.gammas.is_empty() {
            out = &out * &cup_power(self.gammas, w, prec)?;
        }
        if let Some(f) = self.form {
            let mut fw = evaluate_form_with(f, w, prec, y_min)?;
            fw.re -= f.a0();
            out = &out * &fw;
        }
        Ok(out)
    }
}

/// Value and an estimate of the cut-off tail.
#[derive(Clone, Debug)]
pub struct PathValue {
    pub value: BigComplex,
    pub tail: Float,
}

impl PathIntegralSpec {
    pub fn from_cusp(to: BigComplex, prec: u32) -> Self {
        PathIntegralSpec { from_cusp: true, vertices: vec![to], prec, y_min: DEFAULT_Y_MIN }
    }

    pub fn segment(from: BigComplex, to: BigComplex, prec: u32) -> Self {
        PathIntegralSpec { from_cusp: false, vertices: vec![from, to], prec, y_min: DEFAULT_Y_MIN }
    }

    /// Adds an intermediate vertex before the endpoint.
    pub fn via(mut self, p: BigComplex) -> Self {
        let end = self.vertices.pop().expect("path has an endpoint");
        self.vertices.push(p);
        self.vertices.push(end);
        self
    }

    fn check(&self, integrand: &Integrand<'_>) -> Result<()> {
        check_prec(self.prec)?;
        if self.vertices.is_empty() || (!self.from_cusp && self.vertices.len() < 2) {
            return Err(Error::Domain("path needs a start and an end".into()));
        }
        if self.from_cusp && integrand.form.is_none() {
            return Err(Error::Domain("a path from the cusp needs the decaying factor f − a_0".into()));
        }
        for v in &self.vertices {
            let y = v.im.to_f64();
            if !(y >= self.y_min) {
                return Err(Error::UnsafePoint(y));
            }
        }
        Ok(())
    }

    pub fn integrate(&self, integrand: &Integrand<'_>) -> Result<PathValue> {
        self.check(integrand)?;
        let wp = work(self.prec);
        let mut value = BigComplex::zero(wp);
        let mut tail = Float::new(64);
        if self.from_cusp {
            let ray = self.ray(&self.vertices[0], integrand)?;
            value = value - ray.value;
            tail = ray.tail;
        }
        for w in self.vertices.windows(2) {
            value += &self.straight(&w[0], &w[1], integrand)?;
        }
        Ok(PathValue { value, tail })
    }

    /// `∫_a^b` along the straight segment, on panels no longer than the
    /// distance to the real axis.
    fn straight(&self, a: &BigComplex, b: &BigComplex, integrand: &Integrand<'_>) -> Result<BigComplex> {
        let wp = work(self.prec);
        let a = a.with_prec(wp);
        let b = b.with_prec(wp);
        let len = a.dist(&b).to_f64();
        if len == 0.0 {
            return Ok(BigComplex::zero(wp));
        }
        let dist = a.im.to_f64().min(b.im.to_f64());
        let panels = (len / dist).ceil().max(1.0) as usize;
        let rule = gauss_legendre(nodes_for(wp + 16, 1.0), wp);
        let dir = b.clone() - a.clone();
        let h = dir.scale(&fl(wp, panels as u32).recip());
        let half = h.scale(&fl(wp, 0.5));
        let mut sum = BigComplex::zero(wp);
        for p in 0..panels {
            let mid = a.clone() + h.scale(&fl(wp, p as f64 + 0.5));
            let mut panel = BigComplex::zero(wp);
            for (x, wt) in rule.iter() {
                let w = mid.clone() + half.scale(x);
                panel += &integrand.eval(&w, self.prec, self.y_min)?.scale(wt);
            }
            sum += &panel;
        }
        Ok(&sum * &half)
    }

    /// `∫_p^{p + i∞} = i ∫_0^∞ g(p + it) dt`, cut at `t = T` with the tail
    /// bounded through `|f(w) − a_0| ≤ C S e^{−2π Im w}`.
    fn ray(&self, p: &BigComplex, integrand: &Integrand<'_>) -> Result<PathValue> {
        let form = integrand.form.expect("checked");
        let wp = work(self.prec);
        let p = p.with_prec(wp);
        let y0 = p.im.to_f64();
        let k = integrand.weight as f64;
        let n = integrand.gammas.len() as f64;
        let (log_c, alpha) = form.growth();
        let target = -((wp + 8) as f64) * std::f64::consts::LN_2;
        let mut t_cut = ((k - 2.0 + n) / std::f64::consts::PI).max(1.0);
        let log_tail = |t: f64| -> Result<f64> {
            let y = y0 + t;
            let w = p.clone() + BigComplex::from_f64(wp, 0.0, t);
            let v = if integrand.gammas.is_empty() {
                0.0
            } else {
                (2.0 * cup_power(integrand.gammas, &w, self.prec)?.abs().to_f64()).max(1.0).ln()
            };
            let rate = 2.0 * std::f64::consts::PI - (k - 2.0 + n) / t;
            Ok(log_c + log_decay_sum(alpha, y) - 2.0 * std::f64::consts::PI * y + (k - 2.0) * t.ln() + v - rate.ln())
        };
        loop {
            let lt = log_tail(t_cut)?;
            if lt < target {
                break;
            }
            t_cut *= 1.25;
            if t_cut > 1e5 {
                return Err(Error::Truncation(format!("no cut-off found for the ray from Im = {y0}")));
            }
        }
        let tail = fl(64, log_tail(t_cut)?).exp();
        // panel [t_i, t_{i+1}] has width y0 + t_i, the distance from its start
        // to the real axis
        let mut breaks = vec![0.0f64];
        while *breaks.last().unwrap() < t_cut {
            let t = *breaks.last().unwrap();
            breaks.push((t + y0 + t).min(t_cut));
        }
        let rule = gauss_legendre(nodes_for(wp + 16, 1.0), wp);
        let mut sum = BigComplex::zero(wp);
        for win in breaks.windows(2) {
            let (lo, hi) = (fl(wp, win[0]), fl(wp, win[1]));
            let half = fl(wp, &hi - &lo) / 2u32;
            let mid = fl(wp, &hi + &lo) / 2u32;
            for (x, wt) in rule.iter() {
                let t = fl(wp, &mid + fl(wp, &half * x));
                let w = BigComplex::new(p.re.clone(), fl(wp, &p.im + &t));
                let wt = fl(wp, wt * &half);
                sum += &integrand.eval(&w, self.prec, self.y_min)?.scale(&wt);
            }
        }
        Ok(PathValue { value: sum.mul_i_pow(1), tail })
    }
}

/// `log Σ_{n ≥ 1} n^α e^{−2π(n−1)y}`.
fn log_decay_sum(alpha: f64, y: f64) -> f64 {
    let mut s = 0.0f64;
    for n in 1..100_000 {
        let t = alpha * (n as f64).ln() - 2.0 * std::f64::consts::PI * y * (n - 1) as f64;
        s += t.exp();
        if t < -60.0 && n > 10 {
            break;
        }
    }
    s.ln()
}

/// The cochain v_f at `(γ_1, …, γ_n)`, evaluated at `z`.
///
/// For `n ≥ 1`: `∫_∞^z (f − a_0)(w − z)^{k−2} V_n(w) dw + a_0 ∫_i^z (w − z)^{k−2} V_n(w) dw`.
/// For `n = 0`: `∫_∞^z (f − a_0)(w − z)^{k−2} dw + a_0 z^{k−1}/(k−1)`.
pub fn v_f_cochain(form: &Form, gammas: &[GroupElement], z: &BigComplex, prec: u32) -> Result<BigComplex> {
    v_f_cochain_via(form, gammas, z, None, prec)
}

/// As [`v_f_cochain`], with the cusp path bent through `via`.
pub fn v_f_cochain_via(
    form: &Form,
    gammas: &[GroupElement],
    z: &BigComplex,
    via: Option<&BigComplex>,
    prec: u32,
) -> Result<BigComplex> {
    check_prec(prec)?;
    let k = form.weight();
    let wp = work(prec);
    let z = z.with_prec(wp);
    if gammas.iter().any(|g| g.is_identity()) {
        return Ok(BigComplex::zero(wp));
    }
    let mut path = PathIntegralSpec::from_cusp(z.clone(), prec);
    if let Some(p) = via {
        path = path.via(p.with_prec(wp));
    }
    let cusp = path.integrate(&Integrand { form: Some(form), weight: k, gammas, z: &z })?;
    let mut out = cusp.value;
    if !form.has_constant_term() {
        return Ok(out);
    }
    let a0 = fl(wp, form.a0());
    if gammas.is_empty() {
        out += &z.powi(k - 1).scale(&(a0 / (k - 1)));
    } else {
        let seg = PathIntegralSpec::segment(BigComplex::i(wp), z.clone(), prec);
        let part = seg.integrate(&Integrand { form: None, weight: k, gammas, z: &z })?;
        out += &part.value.scale(&a0);
    }
    Ok(out)
}

/// `(dσ)(g_1, …, g_{n+1})(z) = σ(g_2, …, g_{n+1})|_{2−k} g_1 + Σ_j (−1)^j σ(…, g_{j+1} g_j, …) + (−1)^{n+1} σ(g_1, …, g_n)`.
///
/// `k = 2` gives the weight-0 action.
pub fn bar_differential<F>(sigma: F, g: &[GroupElement], z: &BigComplex, k: u32) -> Result<BigComplex>
where
    F: Fn(&[GroupElement], &BigComplex) -> Result<BigComplex>,
{
    if g.is_empty() {
        return Err(Error::Domain("bar differential needs at least one group element".into()));
    }
    if k < 2 {
        return Err(Error::Domain(format!("weight {k} below 2")));
    }
    let n = g.len() - 1;
    let mut out = slash_value(&sigma(&g[1..], &g[0].act(z))?, &g[0], z, k);
    let mut merged = Vec::with_capacity(n);
    for j in 1..=n {
        merged.clear();
        merged.extend_from_slice(&g[..j - 1]);
        merged.push(g[j] * g[j - 1]);
        merged.extend_from_slice(&g[j + 1..]);
        let term = sigma(&merged, z)?;
        if j % 2 == 1 {
            out -= &term;
        } else {
            out += &term;
        }
    }
    let last = sigma(&g[..n], z)?;
    if (n + 1) % 2 == 1 {
        out -= &last;
    } else {
        out += &last;
    }
    Ok(out)
}

/// `σ_f = d v_f` at `(γ_1, …, γ_{n+1})`.
pub fn sigma_f(form: &Form, gammas: &[GroupElement], z: &BigComplex, prec: u32) -> Result<BigComplex> {
    bar_differential(|g, w| v_f_cochain(form, g, w, prec), gammas, z, form.weight())
}

/// The sign in `V_m(S, …, S)(w) = (−1)^{⌊m/2⌋} v(S)(w)^m`, from
/// `v(S)(Sw) = −v(S)(w)`.
pub fn s_power_sign(m: u32) -> i32 {
    if (m / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The polynomial side of the value formula for `σ_f(S, …, S)` with `m + 1`
/// arguments.
///
/// For `m = 0`: `−i Σ_j C(k−2, j) (iz)^j Λ(j+1)`.
/// For `m ≥ 1`: `(−1)^{⌊m/2⌋} (−1)^m [Q^(m)(z) − a_0 m! (P|_{2−k}(1 + (−1)^{m+1} S))(z)]`
/// with `Q^(m)` the full period polynomial and
/// `P(z) = Σ_n C(k−2, n) i^{1−n} (−n−1)^{−m−1} z^{k−2−n}`.
pub fn value_formula(form: &Form, m: u32, prec: u32) -> Result<Poly> {
    let k = form.weight();
    let wp = work(prec);
    let table = critical_table(form, m, prec)?;
    let d = (k - 2) as usize;
    if m == 0 {
        let mut c = vec![BigComplex::zero(wp); d + 1];
        for (j, cj) in c.iter_mut().enumerate() {
            let b = Float::with_val(wp, binomial(k - 2, j as u32));
            *cj = table.at(j as u32 + 1).value.scale(&b).mul_i_pow(j as i64 + 3);
        }
        return Ok(Poly::new(c));
    }
    let mut out = full_polynomial(&table)?.poly;
    if form.has_constant_term() {
        let mut c = vec![BigComplex::zero(wp); d + 1];
        for n in 0..=d {
            let b = Float::with_val(wp, binomial(k - 2, n as u32));
            let den = powi(&Float::with_val(wp, -(n as i64) - 1), m as i32 + 1);
            c[d - n] = BigComplex::from_real(b / den).mul_i_pow(1 - n as i64);
        }
        let p = Poly::new(c);
        let ps = slash(&p, &GroupElement::S, k)?;
        let corr = if m % 2 == 1 { p.add(&ps) } else { p.sub(&ps) };
        let a0m = fl(wp, form.a0()) * Float::with_val(wp, factorial(m));
        out = out.sub(&corr.scale(&BigComplex::from_real(a0m)));
    }
    let sign = s_power_sign(m) * if m % 2 == 1 { -1 } else { 1 };
    if sign < 0 {
        out = out.scale(&BigComplex::from_f64(wp, -1.0, 0.0));
    }
    Ok(out)
}

/// One sample of the value-formula check.
#[derive(Clone, Debug)]
pub struct ValueSample {
    pub z: BigComplex,
    pub cochain: BigComplex,
    pub formula: BigComplex,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct ValueCheck {
    pub form: String,
    pub m: u32,
    pub samples: Vec<ValueSample>,
    pub max_residual: f64,
}

/// Sample points used by default: `2i`, `1 + 2i`, `−1 + 3i`.
pub fn default_samples(prec: u32) -> Vec<BigComplex> {
    vec![BigComplex::from_f64(prec, 0.0, 2.0), BigComplex::from_f64(prec, 1.0, 2.0), BigComplex::from_f64(prec, -1.0, 3.0)]
}

/// Largest cost-capped derivative order.
pub const MAX_VALUE_ORDER: u32 = 2;

/// Compares `σ_f(S, …, S)` computed as `d v_f` with [`value_formula`].
pub fn verify_value_formula(form: &Form, m: u32, zs: &[BigComplex], prec: u32) -> Result<ValueCheck> {
    check_prec(prec)?;
    if m > MAX_VALUE_ORDER {
        return Err(Error::Domain(format!("derivative order {m} above the cap {MAX_VALUE_ORDER}")));
    }
    let rhs = value_formula(form, m, prec)?;
    let tuple = vec![GroupElement::S; m as usize + 1];
    let mut samples = Vec::with_capacity(zs.len());
    let mut max_residual = 0.0f64;
    for z in zs {
        let z = z.with_prec(work(prec));
        let cochain = sigma_f(form, &tuple, &z, prec)?;
        let formula = rhs.eval(&z);
        let residual = cochain.dist(&formula).to_f64();
        max_residual = max_residual.max(residual);
        samples.push(ValueSample { z, cochain, formula, residual });
    }
    Ok(ValueCheck { form: form.spec.id(), m, samples, max_residual })
}

/// Samples `σ_f(γ…)` at `k − 1` points on a circle, interpolates the degree
/// `k − 2` polynomial through them and returns `|prediction − σ_f|` at a
/// held-out point inside the circle.
pub fn interpolation_residual(form: &Form, gammas: &[GroupElement], prec: u32) -> Result<f64> {
    let k = form.weight();
    let wp = work(prec);
    let nodes = (k - 1) as usize;
    let centre = BigComplex::from_f64(wp, 0.1, 1.6);
    let radius = 0.6;
    let mut xs = Vec::with_capacity(nodes);
    let mut ys = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let th = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let x = centre.clone() + BigComplex::from_f64(wp, radius * th.cos(), radius * th.sin());
        ys.push(sigma_f(form, gammas, &x, prec)?);
        xs.push(x);
    }
    let held = centre.clone() + BigComplex::from_f64(wp, 0.17, -0.23);
    let want = sigma_f(form, gammas, &held, prec)?;
    let mut got = BigComplex::zero(wp);
    for (j, (xj, yj)) in xs.iter().zip(&ys).enumerate() {
        let mut l = BigComplex::one(wp);
        for (i, xi) in xs.iter().enumerate() {
            if i != j {
                l = &l * &(held.clone() - xi.clone()).div(&(xj.clone() - xi.clone()));
            }
        }
        got += &(&l * yj);
    }
    Ok(got.dist(&want).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{evaluate_form, FormSpec};

    const P: u32 = 128;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(work(P), re, im)
    }

    fn close(a: &BigComplex, b: &BigComplex, tol: f64) -> bool {
        a.dist(b).to_f64() < tol
    }

    fn pi_i(num: i32, den: u32) -> BigComplex {
        BigComplex::new(Float::new(work(P)), pi(work(P)) * num / den)
    }

    fn ln(v: f64) -> Float {
        fl(work(P), v).ln()
    }

    #[test]
    fn eta_log_leading_term() {
        let y = 6.0;
        let u = eta_log(&c(0.0, y), P).unwrap();
        let lead = -std::f64::consts::PI * y / 12.0;
        assert!((u.re.to_f64() - lead).abs() < 1e-15);
        assert!(u.im.to_f64().abs() < 1e-30);
    }

    #[test]
    fn eta_matches_delta() {
        let delta = Form::build(&FormSpec::cusp(12, 0, P)).unwrap();
        for tau in [c(0.0, 1.0), c(0.3, 0.8)] {
            let e = eta_log(&tau, P).unwrap();
            let lhs = BigComplex::new(fl(work(P), &e.re * 24u32), fl(work(P), &e.im * 24u32)).exp();
            let rhs = evaluate_form(&delta, &tau, P).unwrap();
            assert!(lhs.dist(&rhs).to_f64() / rhs.abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn eta_log_translation() {
        for tau in [c(0.1, 0.7), c(-0.4, 1.3)] {
            let a = eta_log(&(tau.clone() + c(1.0, 0.0)), P).unwrap();
            let b = eta_log(&tau, P).unwrap();
            assert!(close(&(a - b), &pi_i(1, 12), 1e-30));
        }
        assert!(matches!(eta_log(&c(0.0, 0.01), P), Err(Error::UnsafePoint(_))));
    }

    #[test]
    fn constants() {
        let id = cocycle_constant(&GroupElement::IDENTITY, P).unwrap();
        assert!(id.c.abs().to_f64() < 1e-30);
        let s = cocycle_constant(&GroupElement::S, P).unwrap();
        assert!(close(&s.c, &pi_i(-1, 2), 1e-30));
        let t = cocycle_constant(&GroupElement::T, P).unwrap();
        assert!(close(&t.c, &pi_i(1, 6), 1e-30));
        let m = cocycle_constant(&GroupElement::MINUS_ONE, P).unwrap();
        assert!(close(&m.c, &pi_i(-1, 1), 1e-30));
    }

    #[test]
    fn cup_power_examples() {
        let s = GroupElement::S;
        for v in [0.5, 2.0, 3.7] {
            let tau = c(0.0, v);
            let l = ln(v);
            let v1 = cup_power(&[s], &tau, P).unwrap();
            assert!(close(&v1, &BigComplex::from_real(l.clone()), 1e-30));
            let v2 = cup_power(&[s, s], &tau, P).unwrap();
            assert!(close(&v2, &BigComplex::from_real(-l.square()), 1e-30));
            // brute force through the series
            let wp = work(P);
            let u = |t: &BigComplex| eta_potential(t, P).unwrap();
            let st = s.act(&tau);
            let brute = &(u(&st) - u(&tau)) * &(u(&s.act(&st)) - u(&st));
            assert!(close(&v2, &brute.with_prec(wp), 1e-30));
        }
        let t = cup_power(&[GroupElement::T], &c(0.3, 0.2), P).unwrap();
        assert!(close(&t, &pi_i(1, 6), 1e-30));
        assert!(cup_power(&[], &c(0.0, 1.0), P).is_err());
    }

    #[test]
    fn cocycle_additivity() {
        let g1: GroupElement = "ST".parse().unwrap();
        let g2: GroupElement = "TST".parse().unwrap();
        for tau in [c(0.2, 0.9), c(-1.3, 0.4)] {
            let lhs = eta_cocycle(&(g2 * g1), &tau, P).unwrap();
            let rhs = eta_cocycle(&g2, &g1.act(&tau), P).unwrap() + eta_cocycle(&g1, &tau, P).unwrap();
            assert!(close(&lhs, &rhs, 1e-30));
        }
    }

    #[test]
    fn cup_powers_are_cocycles() {
        let gs: Vec<GroupElement> = ["S", "T", "ST"].iter().map(|w| w.parse().unwrap()).collect();
        let tau = c(0.15, 1.1);
        let d = bar_differential(|g, w| cup_power(g, w, P), &gs, &tau, 2).unwrap();
        assert!(d.abs().to_f64() < 1e-30);
    }

    #[test]
    fn bar_differential_squares_to_zero() {
        let k = 8;
        let phi = |g: &[GroupElement], w: &BigComplex| -> Result<BigComplex> {
            let base = (w.clone() + c(1.0, 0.0)).powi(3);
            if g.is_empty() {
                return Ok(base);
            }
            Ok(&base * &cup_power(g, w, P)?)
        };
        let gs: Vec<GroupElement> = ["S", "TS", "T"].iter().map(|w| w.parse().unwrap()).collect();
        let z = c(0.3, 1.4);
        for n in 2..=3 {
            let dd = bar_differential(|g, w| bar_differential(phi, g, w, k), &gs[..n], &z, k).unwrap();
            assert!(dd.abs().to_f64() < 1e-25, "n = {n}: {}", dd.abs());
        }
        let zero = bar_differential(|_, _| Ok(BigComplex::zero(work(P))), &gs, &z, k).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn v_f_trivial_cases() {
        let delta = Form::build(&FormSpec::cusp(12, 0, P)).unwrap();
        let z = c(0.2, 1.5);
        assert!(v_f_cochain(&delta, &[GroupElement::IDENTITY], &z, P).unwrap().is_zero());
        // V_1(−I) vanishes identically
        assert!(v_f_cochain(&delta, &[GroupElement::MINUS_ONE], &z, P).unwrap().abs().to_f64() < 1e-30);
    }

    #[test]
    fn v_f_path_independence() {
        let e = Form::build(&FormSpec::eisenstein(12, P)).unwrap();
        let z = c(0.4, 1.2);
        let p = c(-0.7, 2.5);
        for gs in [vec![], vec![GroupElement::S]] {
            let a = v_f_cochain(&e, &gs, &z, P).unwrap();
            let b = v_f_cochain_via(&e, &gs, &z, Some(&p), P).unwrap();
            assert!(a.dist(&b).to_f64() < 2f64.powi(-(P as i32) / 2) * a.abs().to_f64().max(1.0));
        }
    }

    #[test]
    fn cusp_value_formula() {
        let delta = Form::build(&FormSpec::cusp(12, 0, P)).unwrap();
        for m in 0..=1 {
            let r = verify_value_formula(&delta, m, &default_samples(P)[..2], P).unwrap();
            assert!(r.max_residual < 1e-15, "m = {m}: {}", r.max_residual);
        }
    }

    #[test]
    fn eisenstein_value_formula() {
        let e = Form::build(&FormSpec::eisenstein(12, P)).unwrap();
        let r = verify_value_formula(&e, 1, &default_samples(P)[..1], P).unwrap();
        assert!(r.max_residual < 1e-12, "{}", r.max_residual);
    }

    #[test]
    fn s_relation_at_m0() {
        let delta = Form::build(&FormSpec::cusp(12, 0, P)).unwrap();
        let z = c(0.3, 1.3);
        let s = GroupElement::S;
        let a = sigma_f(&delta, &[s], &z, P).unwrap();
        let b = slash_value(&sigma_f(&delta, &[s], &s.act(&z), P).unwrap(), &s, &z, 12);
        assert!((a + b).abs().to_f64() < 1e-15);
    }

    #[test]
    fn order_cap() {
        let delta = Form::build(&FormSpec::cusp(12, 0, P)).unwrap();
        assert!(matches!(verify_value_formula(&delta, 3, &default_samples(P), P), Err(Error::Domain(_))));
    }
}
