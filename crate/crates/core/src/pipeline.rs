//! End-to-end verification of one (form, m, polynomial kind): L-derivative
//! table, period polynomial, roots, classification, certificates, verdict.

use std::fmt;

use crate::certify::{coefficient_factor_certificate, ek_certificate, monotonicity_certificate, Certificate};
use crate::error::{Error, Result};
use crate::forms::{Form, FormKind, FormSpec};
use crate::lvalues::{critical_table, mellin_terms, LDerivativeTable};
use crate::num::{check_prec, fl, BigComplex};
use crate::periodpoly::{full_polynomial, odd_part, q_decompose, tilde_odd_part, PeriodPolynomial, PolyKind};
use crate::roots::{arg_degrees, classify, find_roots, Root, RootClass, RootReport};

/// Default classification tolerance on `| |z| − 1 |`.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Grid step for the monotonicity certificate.
pub const MONOTONICITY_STEP: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Holds => "holds-within-tolerance",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The root geometry a polynomial is expected to have, besides the trivial
/// zeros at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expectation {
    AllOnCircle,
    /// One real quadruple `{±a, ±1/a}`, the rest on the circle.
    OneQuadruple,
    /// Either of the above.
    AtMostOneQuadruple,
}

impl Expectation {
    pub fn label(self) -> &'static str {
        match self {
            Expectation::AllOnCircle => "all-on-circle",
            Expectation::OneQuadruple => "one-quadruple",
            Expectation::AtMostOneQuadruple => "at-most-one-quadruple",
        }
    }

    pub fn for_kind(kind: FormKind, m: u32, poly: PolyKind) -> Self {
        match (poly, kind) {
            (PolyKind::Odd, FormKind::Cusp) => Expectation::OneQuadruple,
            (PolyKind::Odd, FormKind::Eisenstein) if m == 1 => Expectation::AllOnCircle,
            (PolyKind::Odd, FormKind::Eisenstein) => Expectation::AtMostOneQuadruple,
            _ => Expectation::AllOnCircle,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub prec: u32,
    pub tolerance: f64,
    /// Replaces the coefficient count of the form.
    pub terms: Option<usize>,
}

impl VerifyConfig {
    pub fn new(prec: u32) -> Self {
        VerifyConfig { prec, tolerance: DEFAULT_TOLERANCE, terms: None }
    }
}

/// Everything [`verify`] produced for one work item.
#[derive(Clone, Debug)]
pub struct Verification {
    pub spec: FormSpec,
    pub m: u32,
    pub kind: PolyKind,
    pub polynomial: PeriodPolynomial,
    pub roots: RootReport,
    pub certificates: Vec<Certificate>,
    pub expectation: Expectation,
    pub verdict: Verdict,
    /// Normalized functional-equation residual of the table, when one was built.
    pub fe_residual: Option<f64>,
    pub notes: Vec<String>,
}

impl Verification {
    /// Arguments in degrees of the on-circle roots in the closed upper
    /// half-plane, ascending.
    pub fn circle_arguments(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self
            .roots
            .roots
            .iter()
            .filter(|r| r.class == RootClass::OnCircle && r.z.im >= 0)
            .map(|r| arg_degrees(&r.z))
            .collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        a
    }

    pub fn a(&self) -> Option<f64> {
        self.roots.a().map(|x| x.to_f64())
    }
}

/// The form for `spec`, with the coefficient count the Mellin route needs
/// unless an explicit count is configured.
pub fn build_form(spec: &FormSpec, cfg: &VerifyConfig) -> Result<Form> {
    let terms = cfg.terms.unwrap_or_else(|| mellin_terms(spec.weight, spec.kind, cfg.prec));
    let spec = FormSpec { prec: cfg.prec, ..spec.clone() }.with_terms(terms);
    Form::build(&spec)
}

pub fn table_for(spec: &FormSpec, m: u32, cfg: &VerifyConfig) -> Result<LDerivativeTable> {
    critical_table(&build_form(spec, cfg)?, m, cfg.prec)
}

/// The period polynomial of the given kind from a table.
pub fn polynomial_from_table(t: &LDerivativeTable, kind: PolyKind) -> Result<PeriodPolynomial> {
    match kind {
        PolyKind::Full => full_polynomial(t),
        PolyKind::Odd => odd_part(t),
        PolyKind::TildeOdd => tilde_for(&t.spec, t.m, t.prec),
        PolyKind::QPart => Ok(q_decompose(&odd_part(t)?)?.q),
    }
}

fn tilde_for(spec: &FormSpec, m: u32, prec: u32) -> Result<PeriodPolynomial> {
    if spec.kind != FormKind::Eisenstein {
        return Err(Error::Domain("the tilde odd part is defined for Eisenstein series only".into()));
    }
    tilde_odd_part(spec.weight, m, prec)
}

/// Roots of `p` plus its removed trivial zeros, classified.
pub fn root_report(p: &PeriodPolynomial, tol: f64, prec: u32) -> Result<RootReport> {
    let mut roots = find_roots(&p.poly, prec)?;
    for _ in 0..p.origin_roots {
        let mut r = fl(64, 1);
        r >>= prec as i32;
        roots.push(Root { z: BigComplex::zero(prec), radius: r });
    }
    Ok(classify(&roots, tol))
}

/// The verdict: violated only when a root is confidently off every permitted
/// locus, or the quadruple count is confidently wrong.
pub fn verdict(report: &RootReport, expectation: Expectation) -> Verdict {
    let confident_off = report.roots.iter().any(|r| r.class == RootClass::Unclassified && !r.ambiguous && !r.clustered);
    let unsure = report.roots.iter().any(|r| r.class == RootClass::Unclassified && (r.ambiguous || r.clustered));
    let quads = report.quadruples.len();
    let quads_ok = match expectation {
        Expectation::AllOnCircle => quads == 0,
        Expectation::OneQuadruple => quads == 1,
        Expectation::AtMostOneQuadruple => quads <= 1,
    };
    if confident_off {
        Verdict::Violated
    } else if unsure {
        Verdict::Inconclusive
    } else if quads_ok {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

fn certificates(spec: &FormSpec, m: u32, p: &PeriodPolynomial, prec: u32) -> Result<(Vec<Certificate>, Vec<String>)> {
    let k = spec.weight;
    let mut out = Vec::new();
    let mut notes = Vec::new();
    if k % 4 != 0 || k < 8 {
        return Ok((out, notes));
    }
    match p.kind {
        PolyKind::Odd if m >= 1 => {
            let d = q_decompose(p)?;
            notes.push(format!("q reconstruction residual {:e}", d.residual.to_f64()));
            out.push(ek_certificate(&d.q.poly, &format!("q of {} m={m}", spec.id()), None, prec)?);
        }
        PolyKind::TildeOdd if m >= 1 => {
            let d = q_decompose(p)?;
            notes.push(format!("q reconstruction residual {:e}", d.residual.to_f64()));
            out.push(ek_certificate(&d.q.poly, &format!("q of {} m={m}", p.source), None, prec)?);
            out.push(monotonicity_certificate(k, m as usize, MONOTONICITY_STEP, prec)?);
            out.push(coefficient_factor_certificate(k, prec)?);
        }
        _ => {}
    }
    Ok((out, notes))
}

/// Roots, classification, certificates and verdict for an already built
/// polynomial.
pub fn analyze(spec: &FormSpec, p: PeriodPolynomial, cfg: &VerifyConfig) -> Result<Verification> {
    let roots = root_report(&p, cfg.tolerance, cfg.prec)?;
    let expectation = Expectation::for_kind(spec.kind, p.m, p.kind);
    let verdict = verdict(&roots, expectation);
    let (certificates, notes) = certificates(spec, p.m, &p, cfg.prec)?;
    Ok(Verification {
        spec: spec.clone(),
        m: p.m,
        kind: p.kind,
        polynomial: p,
        roots,
        certificates,
        expectation,
        verdict,
        fe_residual: None,
        notes,
    })
}

/// Full verification of one work item. A table can be supplied (for example
/// from a persistent cache); otherwise it is computed.
pub fn verify_with(spec: &FormSpec, m: u32, kind: PolyKind, cfg: &VerifyConfig, table: Option<LDerivativeTable>) -> Result<Verification> {
    check_prec(cfg.prec)?;
    spec.validate()?;
    if kind == PolyKind::QPart {
        return Err(Error::Domain("verify takes the full, odd or tilde-odd kind".into()));
    }
    if kind == PolyKind::TildeOdd {
        return analyze(spec, tilde_for(spec, m, cfg.prec)?, cfg);
    }
    let table = match table {
        Some(t) => t,
        None => table_for(spec, m, cfg)?,
    };
    let fe = table.fe_residual().to_f64();
    let p = polynomial_from_table(&table, kind)?;
    let mut v = analyze(spec, p, cfg)?;
    v.fe_residual = Some(fe);
    Ok(v)
}

pub fn verify(spec: &FormSpec, m: u32, kind: PolyKind, cfg: &VerifyConfig) -> Result<Verification> {
    verify_with(spec, m, kind, cfg, None)
}

/// One unit of scan work.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WorkItem {
    pub spec: FormSpec,
    pub m: u32,
    pub kind: PolyKind,
}

/// Every eigenform (and optionally E_k) with weight in `weights` crossed with
/// `ms`. Tilde-odd items are generated for Eisenstein series only.
pub fn scan_items(weights: &[u32], ms: &[u32], kind: PolyKind, cusp: bool, eisenstein: bool, prec: u32) -> Vec<WorkItem> {
    let mut out = Vec::new();
    for &k in weights {
        if k % 2 == 1 || k < 4 {
            continue;
        }
        let mut specs = Vec::new();
        if eisenstein {
            specs.push(FormSpec::eisenstein(k, prec));
        }
        if cusp && kind != PolyKind::TildeOdd {
            for i in 0..crate::forms::dim_cusp(k) {
                specs.push(FormSpec::cusp(k, i, prec));
            }
        }
        for spec in specs {
            for &m in ms {
                out.push(WorkItem { spec: spec.clone(), m, kind });
            }
        }
    }
    out
}

/// Spread of the `a` estimates among eigenforms of one weight.
pub fn a_spread(results: &[&Verification]) -> Option<f64> {
    let a: Vec<f64> = results.iter().filter_map(|v| v.a()).collect();
    if a.len() < 2 {
        return None;
    }
    let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Some(hi - lo)
}
