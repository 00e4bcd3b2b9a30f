//! Simultaneous (Aberth–Ehrlich) root finding and root-geometry
//! classification.

use num_complex::Complex64;
use rug::Float;

use crate::error::{Error, Result};
use crate::num::{fl, pi, BigComplex};
use crate::poly::Poly;

const F64_ITERATIONS: usize = 2000;
const MP_ITERATIONS: usize = 300;

#[derive(Clone, Debug)]
pub struct Root {
    pub z: BigComplex,
    /// A-posteriori radius `deg · |p(z)| / |p'(z)|`.
    pub radius: Float,
}

/// Multiplicity-free roots of `p` to `prec` bits.
///
/// Exact zero constant terms are stripped first and reported as roots at the
/// origin; the rest are found by an f64 Aberth pass followed by refinement
/// at full precision.
pub fn find_roots(p: &Poly, prec: u32) -> Result<Vec<Root>> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::Domain("polynomial has no roots".into()));
    }
    let scale = p.max_abs();
    let lead = fl(64, p.c[d].abs());
    let mut floor = scale.clone();
    floor >>= (prec / 2) as i32;
    if lead <= floor {
        return Err(Error::DegenerateLeading);
    }
    let zeros = p.c.iter().take_while(|x| x.is_zero()).count();
    let q = Poly::new(p.c[zeros..=d].iter().map(|x| x.with_prec(prec)).collect());
    let mut out: Vec<Root> = (0..zeros)
        .map(|_| {
            let mut r = Float::with_val(64, 1);
            r >>= prec as i32;
            Root { z: BigComplex::zero(prec), radius: r }
        })
        .collect();
    let dq = q.degree();
    if dq > 0 {
        let seeds = aberth_f64(&q);
        let z = aberth_mp(&q, seeds, prec)?;
        for zi in z {
            let radius = error_radius(&q, &zi, dq, prec);
            out.push(Root { z: zi, radius });
        }
    }
    out.sort_by(|a, b| {
        let ka = sort_key(&a.z);
        let kb = sort_key(&b.z);
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

fn sort_key(z: &BigComplex) -> (f64, f64) {
    let (re, im) = z.to_f64();
    (im.atan2(re), (re * re + im * im).sqrt())
}

fn error_radius(q: &Poly, z: &BigComplex, deg: usize, prec: u32) -> Float {
    let (v, dv) = q.eval_with_derivative(z);
    let mut floor = fl(64, z.abs()).max(&Float::with_val(64, 1));
    floor >>= prec as i32 - 4;
    let dv_abs = fl(64, dv.abs());
    if dv_abs.is_zero() {
        return Float::with_val(64, f64::INFINITY);
    }
    let r = fl(64, v.abs()) * deg as u32 / dv_abs;
    if r > floor {
        r
    } else {
        floor
    }
}

/// Positive root of `|c_d| x^d = sum_{i<d} |c_i| x^i`: every root lies in
/// the disk of this radius.
fn cauchy_radius(c: &[f64]) -> f64 {
    let d = c.len() - 1;
    let f = |x: f64| {
        let lx = x.ln();
        let lead = c[d].ln() + d as f64 * lx;
        let rest: f64 = (0..d)
            .filter(|&i| c[i] > 0.0)
            .map(|i| (c[i].ln() + i as f64 * lx - lead).exp())
            .sum();
        rest - 1.0
    };
    let (mut lo, mut hi) = (1e-300f64, 1.0f64);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    while f(lo) < 0.0 && lo < hi {
        lo = (lo * hi).sqrt().max(lo * 2.0);
        if lo >= hi {
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo < 1.0 + 1e-12 {
            break;
        }
    }
    hi
}

/// Newton correction `p/p'` in f64, evaluating via the reversed polynomial
/// outside the unit disk.
fn newton_f64(c: &[Complex64], z: Complex64) -> Complex64 {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        p / dp
    } else {
        let w = 1.0 / z;
        let mut r = Complex64::new(0.0, 0.0);
        let mut dr = Complex64::new(0.0, 0.0);
        for a in c.iter() {
            dr = dr * w + r;
            r = r * w + a;
        }
        z / (d as f64 - w * dr / r)
    }
}

fn aberth_f64(q: &Poly) -> Vec<Complex64> {
    let d = q.degree();
    let mut scale = 0.0f64;
    let raw: Vec<(f64, f64)> = q.to_f64();
    for (re, im) in &raw {
        scale = scale.max(re.hypot(*im));
    }
    let c: Vec<Complex64> = raw.iter().map(|(re, im)| Complex64::new(re / scale, im / scale)).collect();
    let mags: Vec<f64> = c.iter().map(|x| x.norm()).collect();
    let radius = if mags[d] > 0.0 { cauchy_radius(&mags) } else { 1.0 };
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    if !(radius.is_finite()) || c.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return z;
    }
    for _ in 0..F64_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let n = newton_f64(&c, z[i]);
            if !n.re.is_finite() || !n.im.is_finite() {
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = n / (1.0 - n * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn aberth_mp(q: &Poly, seeds: Vec<Complex64>, prec: u32) -> Result<Vec<BigComplex>> {
    let d = seeds.len();
    let mut z: Vec<BigComplex> = seeds
        .iter()
        .map(|s| BigComplex::from_f64(prec, s.re, s.im))
        .collect();
    let dq = q.derivative();
    let target = -(prec as i32) + 16;
    // a root of multiplicity μ is only determined to about prec/μ bits;
    // steps that stall below this level are accepted at the iteration cap
    let stall = -(prec as i32) / 4;
    let mut done = vec![false; d];
    let mut last_step = vec![i32::MAX; d];
    for _ in 0..MP_ITERATIONS {
        let mut all_done = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let p = q.eval(&z[i]);
            let dp = dq.eval(&z[i]);
            if dp.is_zero() {
                all_done = false;
                continue;
            }
            let n = p.div(&dp);
            let mut s = BigComplex::zero(prec);
            for j in 0..d {
                if j != i {
                    s += &(&z[i] - &z[j]).recip();
                }
            }
            let denom = &BigComplex::one(prec) - &(&n * &s);
            let w = n.div(&denom);
            if !w.is_finite() {
                all_done = false;
                continue;
            }
            z[i] -= &w;
            let mag = fl(64, z[i].abs()).max(&Float::with_val(64, 1));
            let step = fl(64, w.abs()) / mag;
            let e = if step.is_zero() { i32::MIN } else { step.get_exp().unwrap_or(i32::MIN) };
            last_step[i] = e;
            if e < target {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    if (0..d).all(|i| done[i] || last_step[i] < stall) {
        return Ok(z);
    }
    Err(Error::NoConvergence(format!(
        "Aberth iteration on a degree-{d} polynomial at {prec} bits"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootClass {
    OnCircle,
    Origin,
    Quadruple,
    Unclassified,
}

impl RootClass {
    pub fn label(self) -> &'static str {
        match self {
            RootClass::OnCircle => "on-circle",
            RootClass::Origin => "origin",
            RootClass::Quadruple => "quadruple",
            RootClass::Unclassified => "unclassified",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassifiedRoot {
    pub z: BigComplex,
    pub radius: Float,
    pub class: RootClass,
    /// The label would change somewhere inside the error disk.
    pub ambiguous: bool,
    /// Another root lies within the combined error radii.
    pub clustered: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootCounts {
    pub on_circle: usize,
    pub origin: usize,
    pub quadruple: usize,
    pub unclassified: usize,
}

impl RootCounts {
    pub fn total(&self) -> usize {
        self.on_circle + self.origin + self.quadruple + self.unclassified
    }
}

#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<ClassifiedRoot>,
    pub counts: RootCounts,
    /// Member `> 1` of each matched quadruple `{±a, ±1/a}`, descending.
    pub quadruples: Vec<Float>,
    /// Largest `| |z| - 1 |` over on-circle roots.
    pub max_circle_deviation: Float,
    pub tolerance: f64,
}

impl RootReport {
    /// The first (largest) quadruple parameter, if any.
    pub fn a(&self) -> Option<&Float> {
        self.quadruples.first()
    }

    pub fn ambiguous(&self) -> usize {
        self.roots.iter().filter(|r| r.ambiguous).count()
    }
}

/// Label each root as on-circle, origin, quadruple member or unclassified.
pub fn classify(roots: &[Root], tol: f64) -> RootReport {
    let n = roots.len();
    let tol_f = fl(64, tol);
    let one = Float::with_val(64, 1);
    let mods: Vec<Float> = roots.iter().map(|r| fl(64, r.z.abs())).collect();
    let dev: Vec<Float> = roots
        .iter()
        .map(|r| {
            let a = r.z.abs();
            fl(64, a - 1u32).abs()
        })
        .collect();

    let mut class = vec![RootClass::Unclassified; n];
    let mut ambiguous = vec![false; n];
    let mut candidates = Vec::new();
    for i in 0..n {
        let rad = &roots[i].radius;
        let lo = fl(64, &tol_f - rad);
        let hi = fl(64, &tol_f + rad);
        if rad >= &fl(64, &tol_f / 4u32) {
            ambiguous[i] = true;
        }
        if mods[i] < tol_f {
            class[i] = RootClass::Origin;
            ambiguous[i] |= mods[i] >= lo;
        } else if dev[i] < tol_f {
            class[i] = RootClass::OnCircle;
            ambiguous[i] |= dev[i] >= lo;
        } else {
            ambiguous[i] |= dev[i] < hi || mods[i] < hi;
            let im = fl(64, roots[i].z.im.abs_ref());
            if im < tol_f {
                candidates.push(i);
                ambiguous[i] |= im >= lo;
            }
        }
    }

    // match real candidates into {a, -a, 1/a, -1/a}
    candidates.sort_by(|&i, &j| mods[j].partial_cmp(&mods[i]).unwrap());
    let mut used = vec![false; n];
    let mut quadruples = Vec::new();
    let real = |i: usize| roots[i].z.re.clone();
    for &i in &candidates {
        if used[i] || mods[i] <= one {
            continue;
        }
        let a = real(i);
        let targets = [
            fl(64, -&a),
            fl(64, 1) / &a,
            -(fl(64, 1) / &a),
        ];
        let mut members = vec![i];
        for t in &targets {
            let found = candidates.iter().copied().find(|&j| {
                !used[j] && !members.contains(&j) && {
                    let x = real(j);
                    let close = fl(64, &x - t).abs() < tol_f;
                    let pair = if fl(64, t.abs_ref()) < one {
                        fl(64, fl(64, &x * &a).abs() - 1u32).abs() < tol_f
                    } else {
                        true
                    };
                    close && pair
                }
            });
            match found {
                Some(j) => members.push(j),
                None => break,
            }
        }
        if members.len() == 4 {
            for &m in &members {
                used[m] = true;
                class[m] = RootClass::Quadruple;
            }
            quadruples.push(fl(64, a.abs_ref()));
        }
    }
    quadruples.sort_by(|x, y| y.partial_cmp(x).unwrap());

    // a cluster keeps its label only when every member has the same
    // unambiguous label, e.g. a double root well inside the circle band
    let mut clustered = vec![false; n];
    let mut split = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = fl(64, roots[i].z.dist(&roots[j].z));
            let budget = fl(64, &roots[i].radius + &roots[j].radius);
            if d < budget {
                clustered[i] = true;
                clustered[j] = true;
                if class[i] != class[j] || ambiguous[i] || ambiguous[j] {
                    split[i] = true;
                    split[j] = true;
                }
            }
        }
    }

    let mut counts = RootCounts::default();
    let mut max_dev = Float::new(64);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = if split[i] || ambiguous[i] { RootClass::Unclassified } else { class[i] };
        match c {
            RootClass::OnCircle => {
                counts.on_circle += 1;
                if dev[i] > max_dev {
                    max_dev = dev[i].clone();
                }
            }
            RootClass::Origin => counts.origin += 1,
            RootClass::Quadruple => counts.quadruple += 1,
            RootClass::Unclassified => counts.unclassified += 1,
        }
        out.push(ClassifiedRoot {
            z: roots[i].z.clone(),
            radius: roots[i].radius.clone(),
            class: c,
            ambiguous: ambiguous[i],
            clustered: clustered[i],
        });
    }
    RootReport { roots: out, counts, quadruples, max_circle_deviation: max_dev, tolerance: tol }
}

/// Whether every root of `q` satisfies `|z| <= 1 + tol`; the witness is the
/// largest root modulus.
pub fn unit_disk_check(q: &Poly, tol: f64, prec: u32) -> Result<(bool, Float)> {
    if q.degree() == 0 {
        return Ok((true, Float::new(64)));
    }
    let roots = find_roots(q, prec)?;
    let mut witness = Float::new(64);
    for r in &roots {
        let m = fl(64, r.z.abs());
        if m > witness {
            witness = m;
        }
    }
    let ok = witness <= 1.0 + tol;
    Ok((ok, witness))
}

/// Argument of `z` in degrees, in (-180, 180].
pub fn arg_degrees(z: &BigComplex) -> f64 {
    let a = fl(64, z.arg()) * 180u32 / pi(64);
    a.to_f64()
}
