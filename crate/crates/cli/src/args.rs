use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ppoly", version, about = "Zeros of period polynomials built from L-function derivatives of level-1 modular forms")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub precision_bits: u32,
    /// Classification tolerance on | |z| - 1 |.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Replaces the number of q-expansion coefficients.
    #[arg(long, global = true)]
    pub terms: Option<usize>,
    /// Value cache directory; PPOLY_CACHE_DIR is used when absent.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the value cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads for scans; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout. With `--format both` the
    /// extensions .json and .csv are used.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Cusp,
    Eisenstein,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Full,
    Odd,
    Tilde,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyPart {
    Full,
    Odd,
    Tilde,
    Q,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Forms {
    Cusp,
    Eisenstein,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    #[arg(long)]
    pub weight: u32,
    #[arg(long, value_enum, default_value_t = Kind::Cusp)]
    pub kind: Kind,
    /// Eigenform position by a_2 descending.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// q-expansion coefficients a_0, a_1, ...
    Coeffs {
        #[command(flatten)]
        form: FormArgs,
        /// Number of coefficients listed, starting at a_0.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Λ^(m)(s) at the critical integers 1..k-1.
    Lvalues {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
    },
    /// Coefficients of a period polynomial.
    Poly {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        #[arg(long, value_enum, default_value_t = PolyPart::Full)]
        part: PolyPart,
    },
    /// Roots, classification, certificates and verdict for one polynomial.
    Verify {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        #[arg(long, value_enum, default_value_t = Part::Full)]
        part: Part,
    },
    /// Verification over ranges of weights and derivative orders.
    Scan {
        /// `a..b`, `a..b:step` or a comma-separated list.
        #[arg(long)]
        weights: String,
        #[arg(long, default_value = "0")]
        derivs: String,
        #[arg(long, value_enum, default_value_t = Part::Full)]
        part: Part,
        #[arg(long, value_enum, default_value_t = Forms::Cusp)]
        forms: Forms,
    },
    /// Eneström–Kakeya and monotonicity certificates.
    Certify {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 1)]
        deriv: u32,
        #[arg(long, value_enum, default_value_t = Part::Odd)]
        part: Part,
    },
    /// Path-integral check of the value formula σ_f(S, ..., S).
    CocycleCheck {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        /// Largest accepted residual.
        #[arg(long, default_value_t = 1e-12)]
        threshold: f64,
    },
    /// Inspect or compact the value cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum CacheAction {
    Stat,
    Gc,
}

/// Parses `a..b`, `a..=b`, `a..b:step` (both ends inclusive) or `a,b,c`.
/// A reversed range is empty.
pub fn parse_range(s: &str) -> Result<Vec<u32>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad number {t:?} in range {s:?}"));
    if let Some((lo, rest)) = s.split_once("..") {
        let rest = rest.strip_prefix('=').unwrap_or(rest);
        let (hi, step) = match rest.split_once(':') {
            Some((h, st)) => (num(h)?, num(st)?),
            None => (num(rest)?, 1),
        };
        if step == 0 {
            return Err(format!("zero step in range {s:?}"));
        }
        let lo = num(lo)?;
        return Ok((lo..=hi).step_by(step as usize).collect());
    }
    s.split(',').map(num).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("12..16").unwrap(), vec![12, 13, 14, 15, 16]);
        assert_eq!(parse_range("8..20:4").unwrap(), vec![8, 12, 16, 20]);
        assert_eq!(parse_range("0..=1").unwrap(), vec![0, 1]);
        assert_eq!(parse_range("12, 16,20").unwrap(), vec![12, 16, 20]);
        assert!(parse_range("20..12").unwrap().is_empty());
        assert!(parse_range("").unwrap().is_empty());
        assert!(parse_range("1..x").is_err());
        assert!(parse_range("1..4:0").is_err());
    }

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
