use clap::{Args, Parser, Subcommand, ValueEnum};

use circulant_trees::asym::{SublinearRule, LEAD_TOLERANCE};
use circulant_trees::conjecture::DEFAULT_DIGITS;

#[derive(Debug, Parser)]
#[command(
    name = "ctrees",
    version,
    about = "Spanning trees, spectra and asymptotics of circulant graphs and discrete tori"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format; `count` prints a bare integer when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Accuracy target for quadratures.
    #[arg(long, global = true, default_value_t = LEAD_TOLERANCE)]
    pub tol: f64,
    /// Decimal digits for multiprecision evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    pub precision: u32,
    /// Worker threads for `compare`.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Largest graph to enumerate. Defaults: 2000 for `count`, 10⁷ otherwise.
    #[arg(long, global = true)]
    pub max_vertices: Option<u128>,
    /// Omit the `#` comment lines (timestamp and diagnostics) before CSV output.
    #[arg(long, global = true)]
    pub no_header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact number of spanning trees.
    Count(SpecArgs),
    /// Laplacian eigenvalues in closed form.
    Spectrum(SpecArgs),
    /// Exact against predicted `log det*` over a list of `n`.
    Compare(CompareArgs),
    /// Check the closed form for `τ(C_{5n}^{1,n})`.
    Conjecture {
        #[arg(long, default_value_t = 8)]
        n_max: u64,
        #[arg(long, default_value_t = 2)]
        n_min: u64,
    },
    /// Fit the coefficients of `τ(C_{βn}^{1,n}) = (n/β) Π (2cosh(nJ_k) + α_k)`.
    EstimateAlpha {
        #[arg(long)]
        beta: u64,
        /// List of `n`: `2,3,4`, `2..8` or `10..40:10`.
        #[arg(long, value_parser = n_list)]
        n: IntList,
    },
    /// Evaluate one special function and print JSON.
    ///
    /// bessel K T | theta N GENS T | theta SIDES T | eta Y | zeta S | lead GENS |
    /// cd D | epstein SIDES S | zeta-prime-zero SIDES
    Specfun {
        name: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpecArgs {
    /// Circulant `C_N^Γ`, e.g. `--circulant 7 1,2`.
    #[arg(long, num_args = 2, value_names = ["N", "GENS"])]
    pub circulant: Option<Vec<String>>,
    /// Torus `ℤ/m_1 × … × ℤ/m_r`, e.g. `--torus 3,3`.
    #[arg(long, value_name = "SIDES")]
    pub torus: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Circulant,
    TorusConstant,
    TorusSublinear,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Generators for the circulant family.
    #[arg(long, value_parser = int_list)]
    pub gens: Option<IntList>,
    /// Sides of the fixed (or slowly growing) block.
    #[arg(long, value_parser = int_list)]
    pub alpha: Option<IntList>,
    /// Sides of the block scaled by `n`.
    #[arg(long, value_parser = int_list)]
    pub beta: Option<IntList>,
    /// `a_n` for the sublinear family: floor_sqrt, floor_log or constant:K.
    #[arg(long, value_parser = parse_rule, default_value = "floor_sqrt")]
    pub rule: SublinearRule,
    /// List of `n`: `10,20`, `10..40:10`.
    #[arg(long, value_parser = n_list)]
    pub n: IntList,
}

/// A comma-separated list of integers, parsed as one argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<u64>);

fn int_list(s: &str) -> Result<IntList, String> {
    parse_u64_list(s).map(IntList)
}

fn n_list(s: &str) -> Result<IntList, String> {
    parse_n_list(s).map(IntList)
}

pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<u64>().map_err(|e| format!("bad integer {p:?}: {e}")))
        .collect()
}

/// Comma-separated items, each `a`, `a..b` (inclusive) or `a..b:step`.
pub fn parse_n_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match item.split_once("..") {
            None => out.push(item.parse().map_err(|e| format!("bad n {item:?}: {e}"))?),
            Some((a, rest)) => {
                let (b, step) = match rest.split_once(':') {
                    Some((b, step)) => (b, step.parse::<u64>().map_err(|e| format!("bad step: {e}"))?),
                    None => (rest, 1),
                };
                let a: u64 = a.parse().map_err(|e| format!("bad range start {a:?}: {e}"))?;
                let b: u64 = b.parse().map_err(|e| format!("bad range end {b:?}: {e}"))?;
                if step == 0 || a > b {
                    return Err(format!("empty range {item:?}"));
                }
                out.extend((a..=b).step_by(step as usize));
            }
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

pub fn parse_rule(s: &str) -> Result<SublinearRule, String> {
    match s {
        "floor_sqrt" => Ok(SublinearRule::FloorSqrt),
        "floor_log" => Ok(SublinearRule::FloorLog),
        _ => {
            let k = s
                .strip_prefix("constant:")
                .ok_or_else(|| format!("unknown rule {s:?}; use floor_sqrt, floor_log or constant:K"))?;
            let k: u64 = k.parse().map_err(|e| format!("bad constant: {e}"))?;
            if k == 0 {
                return Err("constant a_n must be positive".into());
            }
            Ok(SublinearRule::Constant(k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_n_list("10..40:10,7").unwrap(), vec![10, 20, 30, 40, 7]);
        assert!(parse_n_list("5..2").is_err());
        assert!(parse_n_list("").is_err());
    }

    #[test]
    fn rules() {
        assert_eq!(parse_rule("constant:3").unwrap(), SublinearRule::Constant(3));
        assert!(parse_rule("ceil").is_err());
    }
}
