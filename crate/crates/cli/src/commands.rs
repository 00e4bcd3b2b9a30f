use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::PathBuf;

use ppoly_core::cocycle::{default_samples, verify_value_formula, MAX_VALUE_ORDER};
use ppoly_core::forms::{Form, FormKind, FormSpec};
use ppoly_core::lvalues::{critical_table, LDerivativeTable};
use ppoly_core::periodpoly::PolyKind;
use ppoly_core::pipeline::{a_spread, build_form, polynomial_from_table, scan_items, verify_with, Verdict, Verification, VerifyConfig};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{parse_range, CacheAction, Command, FormArgs, Forms, GlobalArgs, Kind, Part, PolyPart};
use crate::cache::{form_digest, Cache};
use crate::report::{self, value_digits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(ppoly_core::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<ppoly_core::Error> for CliError {
    fn from(e: ppoly_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A rendered command result and its exit code.
pub struct Outcome {
    pub json: Value,
    pub csv: String,
    pub exit: i32,
}

pub fn default_cache_dir() -> PathBuf {
    if let Some(d) = std::env::var_os("PPOLY_CACHE_DIR").filter(|d| !d.is_empty()) {
        return PathBuf::from(d);
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(d).join("ppoly");
    }
    match std::env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".cache").join("ppoly"),
        None => std::env::temp_dir().join("ppoly-cache"),
    }
}

pub struct Context {
    pub cfg: VerifyConfig,
    pub cache: Option<Cache>,
    pub jobs: usize,
}

impl Context {
    pub fn new(g: &GlobalArgs) -> CliResult<Self> {
        if g.precision_bits < 64 {
            return Err(CliError::Usage(format!("--precision-bits {} is below 64", g.precision_bits)));
        }
        if !(g.tolerance > 0.0 && g.tolerance < 1e-4) {
            return Err(CliError::Usage(format!("--tolerance {} must lie in (0, 1e-4)", g.tolerance)));
        }
        let cache = if g.no_cache { None } else { Some(Cache::open(g.cache_dir.clone().unwrap_or_else(default_cache_dir))?) };
        let cfg = VerifyConfig { prec: g.precision_bits, tolerance: g.tolerance, terms: g.terms };
        Ok(Context { cfg, cache, jobs: g.jobs })
    }

    fn prec(&self) -> u32 {
        self.cfg.prec
    }

    /// The critical-value table, from the cache when it holds every entry at
    /// sufficient precision.
    pub fn table(&self, form: &Form, m: u32) -> CliResult<LDerivativeTable> {
        let Some(cache) = &self.cache else {
            return Ok(critical_table(form, m, self.prec())?);
        };
        let digest = form_digest(form);
        match cache.lookup_table(form, &digest, m, self.prec()) {
            Ok((hit, corrupt)) => {
                if corrupt > 0 {
                    eprintln!("warning: ignored {corrupt} corrupt cache record(s) for {} m={m}", form.spec.id());
                }
                if let Some(t) = hit {
                    return Ok(t);
                }
            }
            Err(e) => eprintln!("warning: cache read failed: {e}"),
        }
        let t = critical_table(form, m, self.prec())?;
        if let Err(e) = cache.store_table(&digest, &t) {
            eprintln!("warning: cache write failed: {e}");
        }
        Ok(t)
    }
}

pub fn spec_of(a: &FormArgs, prec: u32) -> CliResult<FormSpec> {
    let kind = match a.kind {
        Kind::Cusp => FormKind::Cusp,
        Kind::Eisenstein => FormKind::Eisenstein,
    };
    let base = match kind {
        FormKind::Cusp => FormSpec::cusp(a.weight, a.index, prec),
        FormKind::Eisenstein => FormSpec::eisenstein(a.weight, prec),
    };
    let spec = FormSpec { index: a.index, ..base };
    spec.validate()?;
    Ok(spec)
}

fn part_kind(p: Part) -> PolyKind {
    match p {
        Part::Full => PolyKind::Full,
        Part::Odd => PolyKind::Odd,
        Part::Tilde => PolyKind::TildeOdd,
    }
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATION,
        Verdict::Inconclusive => EXIT_ERROR,
    }
}

pub fn run_command(cmd: &Command, ctx: &Context) -> CliResult<Outcome> {
    match cmd {
        Command::Coeffs { form, count } => coeffs(ctx, form, *count),
        Command::Lvalues { form, deriv } => lvalues(ctx, form, *deriv),
        Command::Poly { form, deriv, part } => poly(ctx, form, *deriv, *part),
        Command::Verify { form, deriv, part } => verify(ctx, form, *deriv, *part),
        Command::Scan { weights, derivs, part, forms } => scan(ctx, weights, derivs, *part, *forms),
        Command::Certify { form, deriv, part } => certify(ctx, form, *deriv, *part),
        Command::CocycleCheck { form, deriv, threshold } => cocycle_check(ctx, form, *deriv, *threshold),
        Command::Cache { action } => cache(ctx, *action),
    }
}

fn coeffs(ctx: &Context, a: &FormArgs, count: usize) -> CliResult<Outcome> {
    let prec = ctx.prec();
    let terms = ctx.cfg.terms.unwrap_or(0).max(count.saturating_sub(1)).max(2);
    let spec = spec_of(a, prec)?.with_terms(terms);
    let form = Form::build(&spec)?;
    let digits = value_digits(prec);
    let values: Vec<String> = form.coeffs.a.iter().take(count).map(|x| report::coefficient(x, digits)).collect();
    let mut csv = String::from("n,a_n\n");
    for (n, v) in values.iter().enumerate() {
        csv.push_str(&format!("{n},{v}\n"));
    }
    let json = report::envelope(
        "coeffs",
        prec,
        json!({ "form": spec.id(), "count": values.len(), "digits": digits, "coefficients": values }),
    );
    Ok(Outcome { json, csv, exit: EXIT_OK })
}

fn lvalues(ctx: &Context, a: &FormArgs, m: u32) -> CliResult<Outcome> {
    let spec = spec_of(a, ctx.prec())?;
    let form = build_form(&spec, &ctx.cfg)?;
    let t = ctx.table(&form, m)?;
    let digits = value_digits(ctx.prec());
    let json = report::envelope("lvalues", ctx.prec(), report::table_json(&t, digits));
    Ok(Outcome { json, csv: report::table_csv(&t, digits), exit: EXIT_OK })
}

fn poly(ctx: &Context, a: &FormArgs, m: u32, part: PolyPart) -> CliResult<Outcome> {
    let spec = spec_of(a, ctx.prec())?;
    let kind = match part {
        PolyPart::Full => PolyKind::Full,
        PolyPart::Odd => PolyKind::Odd,
        PolyPart::Tilde => PolyKind::TildeOdd,
        PolyPart::Q => PolyKind::QPart,
    };
    let form = build_form(&spec, &ctx.cfg)?;
    let p = if kind == PolyKind::TildeOdd {
        let t = LDerivativeTable { spec: spec.clone(), m, prec: ctx.prec(), entries: Vec::new() };
        polynomial_from_table(&t, kind)?
    } else {
        polynomial_from_table(&ctx.table(&form, m)?, kind)?
    };
    let digits = value_digits(ctx.prec());
    let body = json!({
        "form": spec.id(),
        "coefficient_digest": form_digest(&form),
        "polynomial": report::polynomial_json(&p, digits),
        "monic": report::polynomial_json(&p.monic(), digits),
    });
    Ok(Outcome { json: report::envelope("poly", ctx.prec(), body), csv: report::polynomial_csv(&p, digits), exit: EXIT_OK })
}

/// Verification of one item, reusing cached tables.
pub fn verify_item(ctx: &Context, spec: &FormSpec, m: u32, kind: PolyKind) -> CliResult<(Verification, String)> {
    let form = build_form(spec, &ctx.cfg)?;
    let digest = form_digest(&form);
    let table = if kind == PolyKind::TildeOdd { None } else { Some(ctx.table(&form, m)?) };
    Ok((verify_with(spec, m, kind, &ctx.cfg, table)?, digest))
}

fn verify(ctx: &Context, a: &FormArgs, m: u32, part: Part) -> CliResult<Outcome> {
    let spec = spec_of(a, ctx.prec())?;
    let (v, digest) = verify_item(ctx, &spec, m, part_kind(part))?;
    let json = report::envelope("verify", ctx.prec(), report::verification_json(&v, &digest, ctx.prec()));
    Ok(Outcome { json, csv: report::roots_csv(&v.roots), exit: verdict_exit(v.verdict) })
}

fn certify(ctx: &Context, a: &FormArgs, m: u32, part: Part) -> CliResult<Outcome> {
    let spec = spec_of(a, ctx.prec())?;
    let kind = part_kind(part);
    if kind == PolyKind::Full {
        return Err(CliError::Usage("certificates apply to the odd or tilde parts".into()));
    }
    let (v, digest) = verify_item(ctx, &spec, m, kind)?;
    if v.certificates.is_empty() {
        return Err(CliError::Usage(format!(
            "no certificate applies to {} m={m} {}: weights must satisfy k ≡ 0 (mod 4), k ≥ 8, and m ≥ 1",
            spec.id(),
            kind.label()
        )));
    }
    let all_pass = v.certificates.iter().all(|c| c.pass);
    let body = json!({
        "form": spec.id(),
        "m": m,
        "part": kind.label(),
        "coefficient_digest": digest,
        "all_pass": all_pass,
        "verdict": v.verdict.label(),
        "certificates": v.certificates.iter().map(report::certificate_json).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        json: report::envelope("certify", ctx.prec(), body),
        csv: report::certificates_csv(&v.certificates),
        exit: if all_pass { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn cocycle_check(ctx: &Context, a: &FormArgs, m: u32, threshold: f64) -> CliResult<Outcome> {
    if m > MAX_VALUE_ORDER {
        return Err(CliError::Usage(format!("--deriv {m} is above the supported maximum {MAX_VALUE_ORDER}")));
    }
    let mut spec = spec_of(a, ctx.prec())?;
    if let Some(n) = ctx.cfg.terms {
        spec = spec.with_terms(n);
    }
    let form = Form::build(&spec)?;
    let check = verify_value_formula(&form, m, &default_samples(ctx.prec()), ctx.prec())?;
    let exit = if check.max_residual <= threshold { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Outcome {
        json: report::envelope("cocycle-check", ctx.prec(), report::value_check_json(&check, threshold)),
        csv: report::value_check_csv(&check),
        exit,
    })
}

fn range(flag: &str, s: &str) -> CliResult<Vec<u32>> {
    parse_range(s).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

fn scan(ctx: &Context, weights: &str, derivs: &str, part: Part, forms: Forms) -> CliResult<Outcome> {
    let ks = range("--weights", weights)?;
    let ms = range("--derivs", derivs)?;
    let kind = part_kind(part);
    let (cusp, eis) = match forms {
        Forms::Cusp => (true, false),
        Forms::Eisenstein => (false, true),
        Forms::All => (true, true),
    };
    let items = scan_items(&ks, &ms, kind, cusp, eis, ctx.prec());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let results: Vec<CliResult<(Verification, String)>> =
        pool.install(|| items.par_iter().map(|it| verify_item(ctx, &it.spec, it.m, it.kind)).collect());

    let mut rows = Vec::with_capacity(items.len());
    let mut csv = String::from("form,weight,m,part,verdict,a,max_circle_deviation,certificates\n");
    let mut tally: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut errors = 0usize;
    let mut by_weight: BTreeMap<(u32, u32), Vec<&Verification>> = BTreeMap::new();
    for (it, r) in items.iter().zip(&results) {
        match r {
            Ok((v, digest)) => {
                *tally.entry(v.verdict.label()).or_default() += 1;
                let certs = certificate_summary(v);
                rows.push(json!({
                    "form": it.spec.id(),
                    "weight": it.spec.weight,
                    "m": it.m,
                    "part": it.kind.label(),
                    "coefficient_digest": digest,
                    "verdict": v.verdict.label(),
                    "expectation": v.expectation.label(),
                    "a": v.a(),
                    "counts": {
                        "on_circle": v.roots.counts.on_circle,
                        "origin": v.roots.counts.origin,
                        "quadruple": v.roots.counts.quadruple,
                        "unclassified": v.roots.counts.unclassified,
                    },
                    "max_circle_deviation": v.roots.max_circle_deviation.to_f64(),
                    "fe_residual": v.fe_residual,
                    "certificates": certs,
                }));
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{:e},{}\n",
                    it.spec.id(),
                    it.spec.weight,
                    it.m,
                    it.kind.label(),
                    v.verdict.label(),
                    v.a().map(|a| a.to_string()).unwrap_or_default(),
                    v.roots.max_circle_deviation.to_f64(),
                    v.certificates.iter().map(|c| format!("{}:{}", c.kind.label(), c.verdict())).collect::<Vec<_>>().join(";")
                ));
                if it.spec.kind == FormKind::Cusp {
                    by_weight.entry((it.spec.weight, it.m)).or_default().push(v);
                }
            }
            Err(e) => {
                errors += 1;
                rows.push(json!({
                    "form": it.spec.id(),
                    "weight": it.spec.weight,
                    "m": it.m,
                    "part": it.kind.label(),
                    "error": e.to_string(),
                }));
                csv.push_str(&format!("{},{},{},{},error,,,\n", it.spec.id(), it.spec.weight, it.m, it.kind.label()));
            }
        }
    }
    let a_equality: Vec<Value> = by_weight
        .iter()
        .filter_map(|((k, m), vs)| a_spread(vs).map(|s| json!({ "weight": k, "m": m, "forms": vs.len(), "a_spread": s })))
        .collect();
    let violated = tally.get(Verdict::Violated.label()).copied().unwrap_or(0);
    let inconclusive = tally.get(Verdict::Inconclusive.label()).copied().unwrap_or(0);
    let exit = if violated > 0 {
        EXIT_VIOLATION
    } else if errors > 0 || inconclusive > 0 {
        EXIT_ERROR
    } else {
        EXIT_OK
    };
    let body = json!({
        "weights": ks,
        "derivs": ms,
        "part": kind.label(),
        "items": rows,
        "summary": {
            "total": items.len(),
            "holds": tally.get(Verdict::Holds.label()).copied().unwrap_or(0),
            "violated": violated,
            "inconclusive": inconclusive,
            "errors": errors,
        },
        "a_equality": a_equality,
    });
    Ok(Outcome { json: report::envelope("scan", ctx.prec(), body), csv, exit })
}

fn certificate_summary(v: &Verification) -> Value {
    Value::Array(
        v.certificates
            .iter()
            .map(|c| json!({ "kind": c.kind.label(), "subject": c.subject, "result": c.verdict() }))
            .collect(),
    )
}

fn cache(ctx: &Context, action: CacheAction) -> CliResult<Outcome> {
    let Some(cache) = &ctx.cache else {
        return Err(CliError::Usage("the cache is disabled by --no-cache".into()));
    };
    let dir = cache.dir().display().to_string();
    let (json, csv) = match action {
        CacheAction::Stat => {
            let s = cache.stat()?;
            (
                json!({ "directory": dir, "files": s.files, "records": s.records, "corrupt": s.corrupt, "bytes": s.bytes }),
                format!("files,records,corrupt,bytes\n{},{},{},{}\n", s.files, s.records, s.corrupt, s.bytes),
            )
        }
        CacheAction::Gc => {
            let s = cache.gc()?;
            (
                json!({ "directory": dir, "kept": s.kept, "dropped_corrupt": s.dropped_corrupt, "dropped_duplicate": s.dropped_duplicate }),
                format!("kept,dropped_corrupt,dropped_duplicate\n{},{},{}\n", s.kept, s.dropped_corrupt, s.dropped_duplicate),
            )
        }
    };
    let name = match action {
        CacheAction::Stat => "cache-stat",
        CacheAction::Gc => "cache-gc",
    };
    Ok(Outcome { json: report::envelope(name, ctx.prec(), json), csv, exit: EXIT_OK })
}
