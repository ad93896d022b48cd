use std::io::Write;

use rayon::prelude::*;
use serde_json::json;

use circulant_trees::asym::{
    c_d_with, epstein_zeta_prime_zero, epstein_zeta_sum, lead_term_circulant_with,
    predict_circulant_with_lead, predict_torus_constant, predict_torus_sublinear,
};
use circulant_trees::conjecture::{check_conjecture, estimate_alpha, surd_identity_errors};
use circulant_trees::graphs::{
    circulant_spectrum, log_det_star, spanning_tree_count_exact_capped, spectrum_capped,
    torus_log_det_star, CirculantSpec, GraphSpec, TorusSpec, DEFAULT_ENUMERATION_CAP,
    DEFAULT_EXACT_CAP,
};
use circulant_trees::precise::{
    circulant_comparison_with_lead, default_bits, lead_term_circulant as lead_term_precise,
    torus_constant_comparison,
};
use circulant_trees::specfun::{
    bessel_i_scaled, dedekind_eta, riemann_zeta_real, theta_discrete_bessel_auto,
};
use circulant_trees::Error as CoreError;

use crate::args::{parse_u64_list, IntList, CompareArgs, Family, Format, GlobalOpts, SpecArgs};
use crate::error::{CliError, CliResult};
use crate::output::{fmt17, write_comments, write_csv, write_json, CompareRow, COMPARE_HEADER};

/// Graphs up to this size get an exact `tree_count` column in `compare`.
const TREE_COUNT_CAP: u128 = 256;
/// Residuals of these families are computed in multiprecision up to this `n`.
const PRECISE_LIMIT: u64 = 20_000;
/// Enough bits to resolve any residual that `f64` can represent.
const PRECISE_BITS_CAP: u32 = 1280;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_spec(args: &SpecArgs) -> CliResult<GraphSpec> {
    if let Some(c) = &args.circulant {
        let n: u64 = c[0].parse().map_err(|e| usage(format!("bad N {:?}: {e}", c[0])))?;
        let gens = parse_u64_list(&c[1]).map_err(usage)?;
        return Ok(CirculantSpec::new(n, gens)?.into());
    }
    if let Some(t) = &args.torus {
        return Ok(TorusSpec::new(parse_u64_list(t).map_err(usage)?)?.into());
    }
    Err(usage("give --circulant N GENS or --torus SIDES"))
}

fn describe(spec: &GraphSpec) -> (&'static str, String) {
    let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    match spec {
        GraphSpec::Circulant(c) => ("circulant", format!("n={};gens={}", c.n(), join(c.generators()))),
        GraphSpec::Torus(t) => ("torus", format!("sides={}", join(t.sides()))),
    }
}

pub fn count<W: Write + ?Sized>(g: &GlobalOpts, args: &SpecArgs, out: &mut W) -> CliResult<()> {
    let spec = parse_spec(args)?;
    let cap = g.max_vertices.unwrap_or(DEFAULT_EXACT_CAP as u128);
    let size = spec.vertex_count();
    if size > cap {
        return Err(CoreError::CapExceeded { size, cap }.into());
    }
    let count = spanning_tree_count_exact_capped(&spec, cap.min(usize::MAX as u128) as usize)?;
    let (family, params) = describe(&spec);
    match g.format {
        None => writeln!(out, "{count}")?,
        Some(Format::Csv) => {
            write_comments(out, g.no_header, &[])?;
            write_csv(
                out,
                &["family", "params", "vertices", "tree_count"],
                &[vec![family.into(), params, size.to_string(), count.to_string()]],
            )?;
        }
        Some(Format::Json) => write_json(
            out,
            &json!({"family": family, "params": params, "vertices": size as u64, "tree_count": count}),
        )?,
    }
    Ok(())
}

pub fn spectrum<W: Write + ?Sized>(g: &GlobalOpts, args: &SpecArgs, out: &mut W) -> CliResult<()> {
    let spec = parse_spec(args)?;
    let cap = g.max_vertices.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let s = spectrum_capped(&spec, cap)?;
    match g.format {
        Some(Format::Json) => write_json(out, &s.eigenvalues())?,
        _ => {
            write_comments(out, g.no_header, &[])?;
            let rows: Vec<Vec<String>> = s.eigenvalues().iter().map(|&x| vec![fmt17(x)]).collect();
            write_csv(out, &["eigenvalue"], &rows)?;
        }
    }
    Ok(())
}

struct CompareContext {
    family: Family,
    gens: Vec<u64>,
    alpha: Vec<u64>,
    beta: Vec<u64>,
    rule: circulant_trees::asym::SublinearRule,
    cap: u128,
    /// Quadrature lead term, circulant family only.
    lead: f64,
}

fn tree_count_for(spec: GraphSpec) -> CliResult<Option<String>> {
    if spec.vertex_count() > TREE_COUNT_CAP {
        return Ok(None);
    }
    Ok(Some(spanning_tree_count_exact_capped(&spec, TREE_COUNT_CAP as usize)?.to_string()))
}

fn compare_row(ctx: &CompareContext, n: u64) -> CliResult<CompareRow> {
    let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    match ctx.family {
        Family::Circulant => {
            let spec = CirculantSpec::new(n, ctx.gens.clone())?;
            let params = join(&ctx.gens);
            let fallback = predict_circulant_with_lead(n, &ctx.gens, ctx.lead)?;
            let (exact, predicted, residual) = if n as u128 > ctx.cap {
                (None, fallback.predicted_log_det, None)
            } else if n <= PRECISE_LIMIT {
                let bits = default_bits(n).min(PRECISE_BITS_CAP);
                let lead = lead_term_precise(&ctx.gens, bits)?;
                let cmp = circulant_comparison_with_lead(n, &ctx.gens, &lead)?;
                (Some(cmp.exact.to_f64()), cmp.predicted.to_f64(), Some(cmp.residual().to_f64()))
            } else {
                let exact = log_det_star(&circulant_spectrum(&spec))?;
                let r = fallback.with_exact(exact);
                (r.exact_log_det, r.predicted_log_det, r.residual)
            };
            Ok(CompareRow {
                family: "circulant".into(),
                n,
                params,
                exact_log_det: exact,
                predicted_log_det: predicted,
                residual,
                tree_count: tree_count_for(spec.into())?,
            })
        }
        Family::TorusConstant => {
            let params = format!("alpha={};beta={}", join(&ctx.alpha), join(&ctx.beta));
            let mut sides = ctx.alpha.clone();
            sides.extend(ctx.beta.iter().map(|&b| b * n));
            let spec = TorusSpec::with_split(sides, Some(ctx.alpha.len()))?;
            let size = spec.vertex_count();
            let (exact, predicted, residual) = if ctx.beta.len() == 1 && size <= ctx.cap && n <= PRECISE_LIMIT {
                let bits = default_bits(n * ctx.beta[0]).min(PRECISE_BITS_CAP);
                let cmp = torus_constant_comparison(n, &ctx.alpha, ctx.beta[0], ctx.cap, bits)?;
                (Some(cmp.exact.to_f64()), cmp.predicted.to_f64(), Some(cmp.residual().to_f64()))
            } else {
                let report = predict_torus_constant(n, &ctx.alpha, &ctx.beta)?;
                match torus_log_det_star(&spec, ctx.cap) {
                    Ok(exact) => {
                        let r = report.with_exact(exact);
                        (r.exact_log_det, r.predicted_log_det, r.residual)
                    }
                    Err(CoreError::CapExceeded { .. }) => (None, report.predicted_log_det, None),
                    Err(e) => return Err(e.into()),
                }
            };
            Ok(CompareRow {
                family: "torus-constant".into(),
                n,
                params,
                exact_log_det: exact,
                predicted_log_det: predicted,
                residual,
                tree_count: tree_count_for(spec.into())?,
            })
        }
        Family::TorusSublinear => {
            let a_n = ctx.rule.apply(n);
            let report = predict_torus_sublinear(n, a_n, &ctx.alpha, &ctx.beta)?;
            let mut sides: Vec<u64> = ctx.alpha.iter().map(|&a| a * a_n).collect();
            sides.extend(ctx.beta.iter().map(|&b| b * n));
            let spec = TorusSpec::with_split(sides, Some(ctx.alpha.len()))?;
            let report = match torus_log_det_star(&spec, ctx.cap) {
                Ok(exact) => report.with_exact(exact),
                Err(CoreError::CapExceeded { .. }) => report,
                Err(e) => return Err(e.into()),
            };
            Ok(CompareRow {
                family: "torus-sublinear".into(),
                n,
                params: report.params.clone(),
                exact_log_det: report.exact_log_det,
                predicted_log_det: report.predicted_log_det,
                residual: report.residual,
                tree_count: tree_count_for(spec.into())?,
            })
        }
    }
}

pub fn compare_rows(g: &GlobalOpts, args: &CompareArgs) -> CliResult<Vec<CompareRow>> {
    let need = |v: &Option<IntList>, name: &str| {
        v.clone().map(|l| l.0).ok_or_else(|| usage(format!("family {:?} needs --{name}", args.family)))
    };
    let mut ctx = CompareContext {
        family: args.family,
        gens: Vec::new(),
        alpha: Vec::new(),
        beta: Vec::new(),
        rule: args.rule,
        cap: g.max_vertices.unwrap_or(DEFAULT_ENUMERATION_CAP),
        lead: 0.0,
    };
    match args.family {
        Family::Circulant => {
            ctx.gens = need(&args.gens, "gens")?;
            let quad = lead_term_circulant_with(&ctx.gens, g.tol)?;
            // the multiprecision route must agree with the quadrature routes
            let exact = lead_term_precise(&ctx.gens, 256)?.to_f64();
            let allowed = 10.0 * (g.tol + quad.error_estimate);
            if (exact - quad.value).abs() > allowed {
                return Err(CoreError::RouteDisagreement(format!(
                    "lead term: Jensen {exact} vs quadrature {}",
                    quad.value
                ))
                .into());
            }
            ctx.lead = quad.value;
        }
        Family::TorusConstant => {
            ctx.alpha = args.alpha.clone().map(|l| l.0).unwrap_or_default();
            ctx.beta = need(&args.beta, "beta")?;
        }
        Family::TorusSublinear => {
            ctx.alpha = need(&args.alpha, "alpha")?;
            ctx.beta = need(&args.beta, "beta")?;
        }
    }
    let mut ns = args.n.0.clone();
    ns.sort_unstable();
    ns.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.jobs.max(1))
        .build()
        .map_err(|e| usage(format!("cannot start {} workers: {e}", g.jobs)))?;
    let rows: Vec<CliResult<CompareRow>> = pool.install(|| ns.par_iter().map(|&n| compare_row(&ctx, n)).collect());
    rows.into_iter().collect()
}

pub fn compare<W: Write + ?Sized>(g: &GlobalOpts, args: &CompareArgs, out: &mut W) -> CliResult<()> {
    let rows = compare_rows(g, args)?;
    match g.format {
        Some(Format::Json) => write_json(out, &rows)?,
        _ => {
            write_comments(out, g.no_header, &[])?;
            let records: Vec<Vec<String>> = rows.iter().map(|r| r.to_record().to_vec()).collect();
            write_csv(out, &COMPARE_HEADER, &records)?;
        }
    }
    Ok(())
}

pub fn conjecture<W: Write + ?Sized>(g: &GlobalOpts, n_min: u64, n_max: u64, out: &mut W) -> CliResult<()> {
    if n_min < 2 || n_max < n_min {
        return Err(usage("need 2 ≤ n-min ≤ n-max"));
    }
    let bits = (g.precision as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64;
    let surd = surd_identity_errors(bits)
        .into_iter()
        .map(|e| e.abs().to_f64())
        .fold(0.0f64, f64::max);
    if surd > 2f64.powi(16 - bits as i32) {
        return Err(CoreError::Precision(format!("surd identities off by {surd:e}")).into());
    }
    let rows = (n_min..=n_max)
        .map(|n| check_conjecture(n, g.precision))
        .collect::<Result<Vec<_>, _>>()?;
    match g.format {
        Some(Format::Json) => write_json(
            out,
            &json!({"surd_identity_max_error": surd, "precision_bits": bits, "rows": rows}),
        )?,
        _ => {
            write_comments(out, g.no_header, &[format!("surd identity max error {surd:e} at {bits} bits")])?;
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.exact.to_string(),
                        r.predicted.clone(),
                        r.matches.to_string(),
                        r.digits_agreement.to_string(),
                        r.precision_bits.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &["n", "exact", "predicted", "match", "digits_agreement", "precision_bits"],
                &records,
            )?;
        }
    }
    Ok(())
}

pub fn estimate<W: Write + ?Sized>(g: &GlobalOpts, beta: u64, ns: &[u64], out: &mut W) -> CliResult<()> {
    let fit = estimate_alpha(beta, ns)?;
    match g.format {
        Some(Format::Json) => write_json(out, &fit)?,
        _ => {
            let mut notes = vec![format!("residual norm {:e}", fit.residual_norm)];
            notes.extend(fit.note.clone());
            write_comments(out, g.no_header, &notes)?;
            let records: Vec<Vec<String>> = fit
                .terms
                .iter()
                .map(|t| {
                    vec![
                        t.k.to_string(),
                        fmt17(t.j),
                        fmt17(t.alpha),
                        t.candidate.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            write_csv(out, &["k", "J", "alpha", "candidate"], &records)?;
        }
    }
    Ok(())
}

fn arg_f64(s: &str) -> CliResult<f64> {
    s.parse().map_err(|e| usage(format!("bad number {s:?}: {e}")))
}

fn arg_u64(s: &str) -> CliResult<u64> {
    s.parse().map_err(|e| usage(format!("bad integer {s:?}: {e}")))
}

fn arg_sides(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|p| arg_f64(p.trim())).collect()
}

fn arity(name: &str, args: &[String], expected: &[usize]) -> CliResult<()> {
    if expected.contains(&args.len()) {
        Ok(())
    } else {
        Err(usage(format!("specfun {name} takes {expected:?} arguments, got {}", args.len())))
    }
}

/// Nominal relative accuracy of the closed-form special functions.
const SPECFUN_RELATIVE: f64 = 1e-14;

pub fn specfun<W: Write + ?Sized>(g: &GlobalOpts, name: &str, args: &[String], out: &mut W) -> CliResult<()> {
    let value = match name {
        "bessel" => {
            arity(name, args, &[2])?;
            let k: i64 = args[0].parse().map_err(|e| usage(format!("bad order: {e}")))?;
            let v = bessel_i_scaled(k, arg_f64(&args[1])?)?;
            json!({"value": v, "error_estimate": SPECFUN_RELATIVE * v.abs()})
        }
        "theta" => {
            arity(name, args, &[2, 3])?;
            let spec: GraphSpec = if args.len() == 3 {
                CirculantSpec::new(arg_u64(&args[0])?, parse_u64_list(&args[1]).map_err(usage)?)?.into()
            } else {
                TorusSpec::new(parse_u64_list(&args[0]).map_err(usage)?)?.into()
            };
            let v = theta_discrete_bessel_auto(&spec, arg_f64(args.last().expect("arity"))?)?;
            json!({"value": v.value, "error_estimate": v.tail_bound, "truncation": v.truncation})
        }
        "eta" => {
            arity(name, args, &[1])?;
            let v = dedekind_eta(arg_f64(&args[0])?)?;
            json!({"value": v, "error_estimate": SPECFUN_RELATIVE * v})
        }
        "zeta" => {
            arity(name, args, &[1])?;
            let v = riemann_zeta_real(arg_f64(&args[0])?)?;
            json!({"value": v, "error_estimate": SPECFUN_RELATIVE * v})
        }
        "lead" => {
            arity(name, args, &[1])?;
            let gens = parse_u64_list(&args[0]).map_err(usage)?;
            let l = lead_term_circulant_with(&gens, g.tol)?;
            json!({"value": l.value, "error_estimate": l.error_estimate, "method": l.method, "cross_check": l.cross_check})
        }
        "cd" => {
            arity(name, args, &[1])?;
            let d: u32 = args[0].parse().map_err(|e| usage(format!("bad d: {e}")))?;
            let l = c_d_with(d, g.tol)?;
            json!({"value": l.value, "error_estimate": l.error_estimate, "method": l.method})
        }
        "epstein" => {
            arity(name, args, &[2])?;
            let v = epstein_zeta_sum(&arg_sides(&args[0])?, arg_f64(&args[1])?)?;
            json!({"value": v.value, "error_estimate": v.tail_bound})
        }
        "zeta-prime-zero" => {
            arity(name, args, &[1])?;
            let v = epstein_zeta_prime_zero(&arg_sides(&args[0])?)?;
            json!({"value": v, "error_estimate": 1e-10})
        }
        other => {
            return Err(usage(format!(
                "unknown function {other:?}; expected bessel, theta, eta, zeta, lead, cd, epstein or zeta-prime-zero"
            )))
        }
    };
    let mut record = json!({"name": name, "args": args});
    if let (Some(obj), Some(extra)) = (record.as_object_mut(), value.as_object()) {
        obj.extend(extra.clone());
    }
    write_json(out, &record)
}
