//! Checkable certificates for the Eisenstein results: Eneström–Kakeya
//! monotonicity of q, and the monotonicity of Ψ_j, Z_j and ζ(2n+2)ζ(k−2n−2).

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::num::{check_prec, fl, pow2, work};
use crate::poly::Poly;
use crate::roots::unit_disk_check;
use crate::specfun::{psi_diff_all, zeta, zeta_diff_all};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    EnestromKakeya,
    MonotonicityLemma,
    CoefficientFactor,
}

impl CertificateKind {
    pub fn label(self) -> &'static str {
        match self {
            CertificateKind::EnestromKakeya => "enestrom-kakeya",
            CertificateKind::MonotonicityLemma => "monotonicity-lemma",
            CertificateKind::CoefficientFactor => "coefficient-factor",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One ordered sequence that must be nonnegative and nondecreasing.
#[derive(Clone, Debug)]
pub struct Sequence {
    pub label: String,
    pub values: Vec<Float>,
    /// `values[i+1] − values[i]`.
    pub differences: Vec<Float>,
}

impl Sequence {
    fn new(label: impl Into<String>, values: Vec<Float>) -> Self {
        let differences = values.windows(2).map(|w| fl(w[1].prec(), &w[1] - &w[0])).collect();
        Sequence { label: label.into(), values, differences }
    }

    fn passes(&self, tol: &Float) -> bool {
        let neg = fl(64, -tol);
        self.values.iter().chain(&self.differences).all(|x| *x >= neg)
    }

    fn strict(&self) -> bool {
        self.differences.iter().all(|x| *x > 0)
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub subject: String,
    pub evidence: Vec<Sequence>,
    pub tolerance: Float,
    pub pass: bool,
    /// For Eneström–Kakeya: whether the direct root computation agrees that
    /// all roots lie in the closed unit disk, and the largest root modulus.
    pub disk_check: Option<(bool, Float)>,
    pub notes: Vec<String>,
}

impl Certificate {
    fn assemble(kind: CertificateKind, subject: String, evidence: Vec<Sequence>, tolerance: Float) -> Self {
        let pass = evidence.iter().all(|s| s.passes(&tolerance));
        Certificate { kind, subject, evidence, tolerance, pass, disk_check: None, notes: Vec::new() }
    }

    /// True when every difference is strictly positive.
    pub fn strictly_increasing(&self) -> bool {
        self.evidence.iter().all(Sequence::strict)
    }

    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "pass"
        } else {
            "fail"
        }
    }
}

/// Default tolerance `2^{−P/2} · max |c|`.
pub fn default_tolerance(values: &[Float], prec: u32) -> Float {
    let mut m = Float::new(64);
    for v in values {
        let a = fl(64, v.abs_ref());
        if a > m {
            m = a;
        }
    }
    m * pow2(-(prec as i64) / 2)
}

/// Eneström–Kakeya hypothesis on the coefficients of `q` in ascending
/// degree, with the unit-disk consequence checked directly when it passes.
pub fn ek_certificate(q: &Poly, subject: &str, tol: Option<&Float>, prec: u32) -> Result<Certificate> {
    check_prec(prec)?;
    let re = q.real_parts();
    let tolerance = match tol {
        Some(t) => t.clone(),
        None => default_tolerance(&re, prec),
    };
    for (i, c) in q.c.iter().enumerate() {
        let im = fl(64, c.im.abs_ref());
        if im > tolerance {
            return Err(Error::ComplexCoefficient { index: i, im: im.to_f64() });
        }
    }
    let d = q.degree();
    let seq = Sequence::new("coefficients", re[..=d].to_vec());
    let mut cert = Certificate::assemble(CertificateKind::EnestromKakeya, subject.to_string(), vec![seq], tolerance);
    if cert.pass && d > 0 {
        let disk_tol = pow2(-(prec as i64) / 4).to_f64();
        cert.disk_check = Some(unit_disk_check(q, disk_tol, prec)?);
    }
    Ok(cert)
}

/// Samples Ψ_j and Z_j, `j = 1..=j_max`, on `k/2, k/2 + h, ... ≤ k − 2`.
pub fn monotonicity_certificate(k: u32, j_max: usize, step: f64, prec: u32) -> Result<Certificate> {
    check_prec(prec)?;
    if k % 4 != 0 {
        return Err(Error::WeightMod4(k));
    }
    if j_max == 0 {
        return Err(Error::Domain("j_max must be at least 1".into()));
    }
    if !(step > 0.0) {
        return Err(Error::Domain(format!("grid step {step} must be positive")));
    }
    let wp = work(prec);
    let lo = (k / 2) as f64;
    let hi = (k - 2) as f64;
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<Float> = (0..count).map(|i| fl(wp, lo) + fl(wp, step) * i as u32).collect();
    let mut psi: Vec<Vec<Float>> = vec![Vec::with_capacity(count); j_max];
    let mut z: Vec<Vec<Float>> = vec![Vec::with_capacity(count); j_max];
    for s in &grid {
        let p = psi_diff_all(j_max, s, k, prec)?;
        let q = zeta_diff_all(j_max, s, k, prec)?;
        for j in 0..j_max {
            psi[j].push(p[j].value.clone());
            z[j].push(q[j].value.clone());
        }
    }
    let mut evidence = Vec::with_capacity(2 * j_max);
    for (j, v) in psi.into_iter().enumerate() {
        evidence.push(Sequence::new(format!("Psi_{}", j + 1), v));
    }
    for (j, v) in z.into_iter().enumerate() {
        evidence.push(Sequence::new(format!("Z_{}", j + 1), v));
    }
    let all: Vec<Float> = evidence.iter().flat_map(|s| s.values.iter().cloned()).collect();
    let tol = default_tolerance(&all, prec);
    let mut cert = Certificate::assemble(CertificateKind::MonotonicityLemma, format!("k={k} j<={j_max} h={step}"), evidence, tol);
    cert.notes.push(format!("sampled on {count} points of [{lo}, {hi}]; odd-index functions vanish at s = k/2, so positivity there is weak"));
    Ok(cert)
}

/// `a_n = ζ(2n+2) ζ(k−2n−2)` for `n = k/4 − 1, ..., k/2 − 2`.
pub fn coefficient_factor_certificate(k: u32, prec: u32) -> Result<Certificate> {
    check_prec(prec)?;
    if k % 4 != 0 || k < 8 {
        return Err(Error::WeightMod4(k));
    }
    let wp = work(prec);
    let mut values = Vec::new();
    for n in (k / 4 - 1)..=(k / 2 - 2) {
        let a = zeta(&Float::with_val(wp, 2 * n + 2), prec)?.value;
        let b = zeta(&Float::with_val(wp, k - 2 * n - 2), prec)?.value;
        values.push(a * b);
    }
    let seq = Sequence::new("zeta(2n+2)zeta(k-2n-2)", values);
    let mut cert = Certificate::assemble(CertificateKind::CoefficientFactor, format!("k={k}"), vec![seq], Float::new(64));
    cert.pass = cert.pass && cert.strictly_increasing();
    Ok(cert)
}
