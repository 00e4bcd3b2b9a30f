//! JSON and CSV rendering. Every high-precision number is a decimal string
//! next to a `digits` field giving its significant digits. Object keys are
//! sorted, so equal inputs give byte-identical output.

use ppoly_core::certify::Certificate;
use ppoly_core::cocycle::ValueCheck;
use ppoly_core::lvalues::LDerivativeTable;
use ppoly_core::num::to_decimal;
use ppoly_core::periodpoly::PeriodPolynomial;
use ppoly_core::pipeline::Verification;
use ppoly_core::roots::{arg_degrees, ClassifiedRoot, RootReport};
use ppoly_core::BigComplex;
use rug::Float;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Digits used for roots and certificate evidence.
pub const SAMPLE_DIGITS: usize = 30;

pub const ROOTS_HEADER: &str = "re,im,modulus,argument_degrees,error_radius,classification";

/// Significant decimal digits carried by `prec` bits.
pub fn value_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).floor() as usize
}

pub fn dec(x: &Float, digits: usize) -> String {
    to_decimal(x, digits)
}

/// Integers are printed exactly, anything else as a decimal string.
pub fn coefficient(x: &Float, digits: usize) -> String {
    if x.is_integer() && x.get_exp().map_or(true, |e| e < x.prec() as i32) {
        if let Some(n) = x.to_integer() {
            return n.to_string();
        }
    }
    dec(x, digits)
}

pub fn complex(z: &BigComplex, digits: usize) -> Value {
    json!({ "re": dec(&z.re, digits), "im": dec(&z.im, digits) })
}

/// The top-level wrapper shared by every report.
pub fn envelope(command: &str, prec: u32, body: Value) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "version": VERSION,
        "command": command,
        "precision_bits": prec,
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

pub fn root_json(r: &ClassifiedRoot) -> Value {
    json!({
        "re": dec(&r.z.re, SAMPLE_DIGITS),
        "im": dec(&r.z.im, SAMPLE_DIGITS),
        "modulus": r.z.abs().to_f64(),
        "argument_degrees": arg_degrees(&r.z),
        "error_radius": r.radius.to_f64(),
        "classification": r.class.label(),
        "ambiguous": r.ambiguous,
        "clustered": r.clustered,
    })
}

pub fn root_report_json(rep: &RootReport) -> Value {
    json!({
        "digits": SAMPLE_DIGITS,
        "tolerance": rep.tolerance,
        "counts": {
            "on_circle": rep.counts.on_circle,
            "origin": rep.counts.origin,
            "quadruple": rep.counts.quadruple,
            "unclassified": rep.counts.unclassified,
            "total": rep.counts.total(),
        },
        "quadruples": rep.quadruples.iter().map(|a| dec(a, SAMPLE_DIGITS)).collect::<Vec<_>>(),
        "max_circle_deviation": rep.max_circle_deviation.to_f64(),
        "ambiguous": rep.ambiguous(),
        "roots": rep.roots.iter().map(root_json).collect::<Vec<_>>(),
    })
}

pub fn roots_csv(rep: &RootReport) -> String {
    let mut s = String::from(ROOTS_HEADER);
    s.push('\n');
    for r in &rep.roots {
        s.push_str(&format!(
            "{},{},{},{},{:e},{}\n",
            dec(&r.z.re, SAMPLE_DIGITS),
            dec(&r.z.im, SAMPLE_DIGITS),
            r.z.abs().to_f64(),
            arg_degrees(&r.z),
            r.radius.to_f64(),
            r.class.label()
        ));
    }
    s
}

pub fn certificate_json(c: &Certificate) -> Value {
    let evidence: Vec<Value> = c
        .evidence
        .iter()
        .map(|s| {
            let min_diff = s.differences.iter().map(|d| d.to_f64()).fold(f64::INFINITY, f64::min);
            json!({
                "label": s.label,
                "values": s.values.iter().map(|x| dec(x, SAMPLE_DIGITS)).collect::<Vec<_>>(),
                "min_difference": if min_diff.is_finite() { json!(min_diff) } else { Value::Null },
            })
        })
        .collect();
    json!({
        "kind": c.kind.label(),
        "subject": c.subject,
        "result": c.verdict(),
        "pass": c.pass,
        "strictly_increasing": c.strictly_increasing(),
        "tolerance": c.tolerance.to_f64(),
        "unit_disk": c.disk_check.as_ref().map(|(ok, w)| json!({ "inside": ok, "max_modulus": w.to_f64() })),
        "notes": c.notes,
        "digits": SAMPLE_DIGITS,
        "evidence": evidence,
    })
}

pub fn certificates_csv(cs: &[Certificate]) -> String {
    let mut s = String::from("kind,subject,result,strictly_increasing\n");
    for c in cs {
        s.push_str(&format!("{},\"{}\",{},{}\n", c.kind.label(), c.subject, c.verdict(), c.strictly_increasing()));
    }
    s
}

pub fn polynomial_json(p: &PeriodPolynomial, digits: usize) -> Value {
    json!({
        "kind": p.kind.label(),
        "weight": p.weight,
        "m": p.m,
        "source": p.source,
        "degree": p.degree(),
        "origin_roots": p.origin_roots,
        "digits": digits,
        "coefficients": p.poly.c.iter().map(|c| complex(c, digits)).collect::<Vec<_>>(),
    })
}

pub fn polynomial_csv(p: &PeriodPolynomial, digits: usize) -> String {
    let mut s = String::from("degree,re,im\n");
    for (i, c) in p.poly.c.iter().enumerate() {
        s.push_str(&format!("{i},{},{}\n", dec(&c.re, digits), dec(&c.im, digits)));
    }
    s
}

pub fn table_json(t: &LDerivativeTable, digits: usize) -> Value {
    let entries: Vec<Value> = t
        .entries
        .iter()
        .enumerate()
        .map(|(i, v)| {
            json!({
                "s": i + 1,
                "re": dec(&v.value.re, digits),
                "im": dec(&v.value.im, digits),
                "error": v.error.to_f64(),
                "route": v.route.label(),
            })
        })
        .collect();
    json!({
        "form": t.spec.id(),
        "m": t.m,
        "digits": digits,
        "fe_residual": t.fe_residual().to_f64(),
        "entries": entries,
    })
}

pub fn table_csv(t: &LDerivativeTable, digits: usize) -> String {
    let mut s = String::from("s,re,im,error,route\n");
    for (i, v) in t.entries.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{},{:e},{}\n",
            i + 1,
            dec(&v.value.re, digits),
            dec(&v.value.im, digits),
            v.error.to_f64(),
            v.route.label()
        ));
    }
    s
}

/// The per-item verification report.
pub fn verification_json(v: &Verification, digest: &str, prec: u32) -> Value {
    let digits = value_digits(prec);
    json!({
        "form": {
            "id": v.spec.id(),
            "weight": v.spec.weight,
            "kind": v.spec.kind.label(),
            "index": v.spec.index,
        },
        "m": v.m,
        "part": v.kind.label(),
        "coefficient_digest": digest,
        "expectation": v.expectation.label(),
        "verdict": v.verdict.label(),
        "a": v.a(),
        "circle_arguments_degrees": v.circle_arguments(),
        "fe_residual": v.fe_residual,
        "polynomial": polynomial_json(&v.polynomial.monic(), digits),
        "roots": root_report_json(&v.roots),
        "certificates": v.certificates.iter().map(certificate_json).collect::<Vec<_>>(),
        "notes": v.notes,
    })
}

pub fn value_check_json(c: &ValueCheck, threshold: f64) -> Value {
    let samples: Vec<Value> = c
        .samples
        .iter()
        .map(|s| {
            json!({
                "z": complex(&s.z, 6),
                "cochain": complex(&s.cochain, SAMPLE_DIGITS),
                "formula": complex(&s.formula, SAMPLE_DIGITS),
                "residual": s.residual,
            })
        })
        .collect();
    json!({
        "form": c.form,
        "m": c.m,
        "digits": SAMPLE_DIGITS,
        "threshold": threshold,
        "max_residual": c.max_residual,
        "pass": c.max_residual <= threshold,
        "samples": samples,
    })
}

pub fn value_check_csv(c: &ValueCheck) -> String {
    let mut s = String::from("z_re,z_im,residual\n");
    for x in &c.samples {
        let (re, im) = x.z.to_f64();
        s.push_str(&format!("{re},{im},{:e}\n", x.residual));
    }
    s
}
