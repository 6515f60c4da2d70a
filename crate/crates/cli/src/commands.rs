//! Subcommand implementations: thin wrappers over the library plus the
//! identity checks that drive the exit code.

use crate::report::{opt, Check, CmdOutput};
use crate::{Cmd, FamilyArg, NRange, PairFamily, UsageError};
use ffstats_core::arithstats::{
    ap_variance, si_variance, sn_bruteforce, sn_predicted_exponent, squarefull_count,
    APExperiment, SIExperiment, SnPrediction,
};
use ffstats_core::chargroup::{char_stats, orthogonality_check, UnitGroup};
use ffstats_core::field_poly::{format_human, parse_poly};
use ffstats_core::lfunc::{inverse_roots, l_polynomial, LfuncError};
use ffstats_core::rmt::{
    equidist_report, mc_orthogonality, mc_triple_variance, EquidistFamily, MCEstimate, RepKind,
};
use ffstats_core::FieldCtx;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

/// Exhaustive enumeration caps. Degrees whose sweep exceeds the cap fall
/// back to series-only (count) or are refused (ap/si, where the definition
/// side of the identity needs the sweep).
const COUNT_BUDGET: u64 = 20_000_000;
const SWEEP_BUDGET: u64 = 50_000_000;

pub fn run(cmd: &Cmd) -> Result<CmdOutput, UsageError> {
    match cmd {
        Cmd::Count { q, n_max } => count(*q, *n_max),
        Cmd::Ap { q, modulus, n } => ap(*q, modulus, *n),
        Cmd::Si { q, n, h } => si(*q, *n, *h),
        Cmd::Sn { n_max, cap_max } => sn(*n_max, *cap_max),
        Cmd::Lfun { q, modulus } => lfun(*q, modulus),
        Cmd::Rmt {
            dim,
            pairs,
            j_max,
            n,
            q,
            samples,
            seed,
        } => rmt(*dim, *pairs, *j_max, *n, *q, *samples, *seed),
        Cmd::Equidist { q, modulus, family } => equidist(*q, modulus, *family),
    }
}

fn usage<E: std::fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

fn ctx_for(q: u64) -> Result<FieldCtx, UsageError> {
    FieldCtx::new(q).map_err(usage)
}

fn group_for(ctx: &FieldCtx, modulus: &str) -> Result<UnitGroup, UsageError> {
    let m = parse_poly(ctx, modulus).map_err(usage)?;
    UnitGroup::new(ctx, &m).map_err(usage)
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let denom = a.abs().max(b.abs());
    if denom == 0.0 {
        0.0
    } else {
        (a - b).abs() / denom
    }
}

fn count(q: u64, n_max: usize) -> Result<CmdOutput, UsageError> {
    let ctx = ctx_for(q)?;
    let rows: Vec<_> = (0..=n_max)
        .map(|n| squarefull_count(&ctx, n, COUNT_BUDGET))
        .collect();

    let compared = rows.iter().filter(|r| r.brute_count.is_some()).count();
    let mismatches = rows
        .iter()
        .filter(|r| r.brute_count.is_some_and(|b| b != r.series_count))
        .count();
    let checks = vec![Check::new(
        "brute-vs-series",
        mismatches == 0,
        format!(
            "{compared} of {} degrees brute-forced, {mismatches} mismatches",
            rows.len()
        ),
    )];

    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.series_count.to_string(),
                r.brute_count.map(|b| b.to_string()).unwrap_or_default(),
                r.mean.to_string(),
                r.mean_vs_asymptotic.to_string(),
            ]
        })
        .collect();

    Ok(CmdOutput {
        command: "count",
        config: json!({"q": q, "n_max": n_max, "budget": COUNT_BUDGET}),
        rows: serde_json::to_value(&rows).expect("rows"),
        csv_header: vec!["n", "series", "brute", "mean", "mean_vs_asymptotic"],
        csv_rows,
        checks,
    })
}

#[derive(Serialize)]
struct ApRow {
    experiment: APExperiment,
    /// variance_def over the predicted value; trends to 1 as q grows.
    ratio: Option<f64>,
}

fn ap(q: u64, modulus: &str, n: NRange) -> Result<CmdOutput, UsageError> {
    let ctx = ctx_for(q)?;
    let group = group_for(&ctx, modulus)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for deg in n.iter() {
        let experiment = ap_variance(&group, deg, SWEEP_BUDGET).map_err(usage)?;
        checks.push(Check::new(
            "partition",
            experiment.partition_ok,
            format!("n={deg}: coprime + shared-factor counts sum to the total"),
        ));
        let gap = rel_gap(experiment.variance_def, experiment.variance_chars);
        checks.push(Check::new(
            "def-vs-chars",
            gap <= 1e-8,
            format!("n={deg}: relative gap {gap:e}"),
        ));
        let ratio = (experiment.prediction.value > 0.0)
            .then(|| experiment.variance_def / experiment.prediction.value);
        rows.push(ApRow { experiment, ratio });
    }

    let csv_rows = rows
        .iter()
        .map(|r| {
            let e = &r.experiment;
            vec![
                e.n.to_string(),
                format!("{:?}", e.prediction.regime),
                e.lambda3.to_string(),
                e.mean.to_string(),
                e.variance_def.to_string(),
                e.variance_chars.to_string(),
                e.quadratic_contrib.to_string(),
                e.cubic_contrib.to_string(),
                e.prediction.value.to_string(),
                opt(&r.ratio),
            ]
        })
        .collect();

    Ok(CmdOutput {
        command: "ap",
        config: json!({"q": q, "Q": modulus, "n": n.to_string(), "budget": SWEEP_BUDGET}),
        rows: serde_json::to_value(&rows).expect("rows"),
        csv_header: vec![
            "n",
            "regime",
            "lambda3",
            "mean",
            "variance_def",
            "variance_chars",
            "quadratic_contrib",
            "cubic_contrib",
            "prediction",
            "ratio",
        ],
        csv_rows,
        checks,
    })
}

#[derive(Serialize)]
struct SiRow {
    experiment: SIExperiment,
    ratio: Option<f64>,
}

fn si(q: u64, n: NRange, h: usize) -> Result<CmdOutput, UsageError> {
    let ctx = ctx_for(q)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for deg in n.iter() {
        let experiment = si_variance(&ctx, deg, h, SWEEP_BUDGET).map_err(usage)?;
        checks.push(Check::new(
            "conservation",
            experiment.sum_conservation_ok,
            format!("n={deg}: class counts sum to the degree-{deg} square-full count"),
        ));
        checks.push(Check::new(
            "def-vs-chars",
            experiment.finite_q_gap <= 1e-9,
            format!("n={deg}: relative gap {:e}", experiment.finite_q_gap),
        ));
        let ratio = (experiment.prediction.value > 0.0)
            .then(|| experiment.variance_def / experiment.prediction.value);
        rows.push(SiRow { experiment, ratio });
    }

    let csv_rows = rows
        .iter()
        .map(|r| {
            let e = &r.experiment;
            vec![
                e.n.to_string(),
                e.h.to_string(),
                e.interval_size.to_string(),
                e.mean.to_string(),
                e.variance_def.to_string(),
                e.variance_chars.to_string(),
                e.finite_q_gap.to_string(),
                e.prediction.value.to_string(),
                opt(&r.ratio),
            ]
        })
        .collect();

    Ok(CmdOutput {
        command: "si",
        config: json!({"q": q, "n": n.to_string(), "h": h, "budget": SWEEP_BUDGET}),
        rows: serde_json::to_value(&rows).expect("rows"),
        csv_header: vec![
            "n",
            "h",
            "interval_size",
            "mean",
            "variance_def",
            "variance_chars",
            "finite_q_gap",
            "prediction",
            "ratio",
        ],
        csv_rows,
        checks,
    })
}

#[derive(Serialize)]
struct SnRow {
    prediction: SnPrediction,
    /// "ok", "empty", or "formula-overshoot" (the printed middle-regime rule
    /// at n = 5N-1, where the enumerated exponent is authoritative).
    status: &'static str,
}

fn sn_status(p: &SnPrediction) -> &'static str {
    if p.infeasible {
        "empty"
    } else if !p.formula_matches {
        "formula-overshoot"
    } else {
        "ok"
    }
}

fn sn(n_max: usize, cap_max: usize) -> Result<CmdOutput, UsageError> {
    if cap_max == 0 {
        return Err(UsageError("N-max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut characterized = true;
    let mut overshoots = 0usize;
    let mut lambda_flags = 0usize;
    let mut empties = 0usize;
    for cap in 1..=cap_max {
        for n in 0..=n_max {
            let p = sn_predicted_exponent(n, cap);

            // oracle agreement (the prediction must carry the enumerated
            // exponent) and the complete deviation characterization
            let oracle = sn_bruteforce(n, cap).leading_exponent;
            if p.exponent != oracle {
                characterized = false;
            }
            let should_be_empty = n == 1 || (cap == 1 && n % 3 == 1);
            if p.infeasible != should_be_empty {
                characterized = false;
            }
            if p.infeasible {
                empties += 1;
            } else if !p.formula_matches {
                let documented = cap >= 2
                    && n == 5 * cap - 1
                    && p.formula_exponent == p.exponent.map(|e| e + 1);
                if documented {
                    overshoots += 1;
                } else {
                    characterized = false;
                }
            }
            if p.lambda_disagrees_with_table {
                let documented = n >= 5 * cap
                    && (n - 5 * cap) % 6 == 2
                    && p.lambda == Some(8)
                    && p.printed_lambda == Some(6);
                if documented {
                    lambda_flags += 1;
                } else {
                    characterized = false;
                }
            }

            rows.push(SnRow {
                status: sn_status(&p),
                prediction: p,
            });
        }
    }

    let checks = vec![Check::new(
        "deviation-characterization",
        characterized,
        format!(
            "exponents match the enumeration; {overshoots} printed-formula overshoots at n=5N-1, \
             {lambda_flags} lambda-table rows in the class n=5N+2 mod 6, {empties} empty sets"
        ),
    )];

    let csv_rows = rows
        .iter()
        .map(|r| {
            let p = &r.prediction;
            vec![
                p.n.to_string(),
                p.cap.to_string(),
                format!("{:?}", p.regime),
                opt(&p.exponent),
                opt(&p.formula_exponent),
                r.status.to_string(),
                opt(&p.lambda),
                opt(&p.printed_lambda),
                p.lambda_disagrees_with_table.to_string(),
            ]
        })
        .collect();

    Ok(CmdOutput {
        command: "sn",
        config: json!({"n_max": n_max, "N_max": cap_max}),
        rows: serde_json::to_value(&rows).expect("rows"),
        csv_header: vec![
            "n",
            "N",
            "regime",
            "exponent",
            "formula_exponent",
            "status",
            "lambda",
            "printed_lambda",
            "lambda_disagrees",
        ],
        csv_rows,
        checks,
    })
}

#[derive(Serialize)]
struct LfunRow {
    chi: String,
    order: u64,
    even: bool,
    primitive: bool,
    degree: usize,
    dim: usize,
    unit_roots: usize,
    trivial_zero: bool,
    tail_deviation: f64,
    coeffs: Vec<[f64; 2]>,
    roots_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    root_error: Option<String>,
}

/// Orthogonality is checked exhaustively only for groups this small
/// (pair count is totient squared).
const ORTHOGONALITY_MAX_TOTIENT: u64 = 2500;

fn lfun(q: u64, modulus: &str) -> Result<CmdOutput, UsageError> {
    let ctx = ctx_for(q)?;
    let group = group_for(&ctx, modulus)?;

    let mut rows = Vec::new();
    let mut weil_ok = true;
    let mut primitive_even = 0usize;
    let mut even_zero_ok = true;
    for chi in group.characters().filter(|c| !c.is_trivial()) {
        let lp = l_polynomial(&group, &chi).map_err(usage)?;
        let (dim, unit_roots, roots_ok, root_error) = match inverse_roots(&lp) {
            Ok(f) => (f.dim(), f.unit_roots, true, None),
            // constant L-polynomial: no roots to classify
            Err(LfuncError::DegreeTooSmall) => (0, 0, true, None),
            Err(e) => {
                weil_ok = false;
                (0, 0, false, Some(e.to_string()))
            }
        };
        if chi.is_primitive() && chi.is_even() {
            primitive_even += 1;
            if !(lp.trivial_zero_at_one && roots_ok) {
                even_zero_ok = false;
            }
        }
        rows.push(LfunRow {
            chi: chi.to_string(),
            order: chi.order(),
            even: chi.is_even(),
            primitive: chi.is_primitive(),
            degree: lp.degree(),
            dim,
            unit_roots,
            trivial_zero: lp.trivial_zero_at_one,
            tail_deviation: lp.tail_deviation,
            coeffs: lp.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            roots_ok,
            root_error,
        });
    }

    let mut checks = vec![
        Check::new(
            "weil-moduli",
            weil_ok,
            "every inverse root has modulus 1 or sqrt(q) within 1e-6 relative",
        ),
        Check::new(
            "even-trivial-zero",
            even_zero_ok,
            format!("all {primitive_even} primitive even characters vanish at u=1"),
        ),
    ];

    let orthogonality = if group.totient() <= ORTHOGONALITY_MAX_TOTIENT {
        let report = orthogonality_check(&group, u64::MAX);
        checks.push(Check::new(
            "orthogonality",
            report.max_deviation() <= 1e-10,
            format!(
                "max deviation {:e} over {} + {} pairs",
                report.max_deviation(),
                report.character_pairs,
                report.residue_pairs
            ),
        ));
        Some(report)
    } else {
        None
    };

    let summary = json!({
        "q": q,
        "modulus": format_human(group.modulus()),
        "totient": group.totient(),
        "generator_orders": group.orders(),
        "character_census": char_stats(&group, &[2, 3, 6]),
        "orthogonality": orthogonality,
    });

    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.chi.clone(),
                r.order.to_string(),
                if r.even { "even" } else { "odd" }.to_string(),
                r.primitive.to_string(),
                r.degree.to_string(),
                r.dim.to_string(),
                r.unit_roots.to_string(),
                r.trivial_zero.to_string(),
                r.roots_ok.to_string(),
            ]
        })
        .collect();

    Ok(CmdOutput {
        command: "lfun",
        config: json!({"q": q, "Q": modulus}),
        rows: json!({
            "summary": summary,
            "characters": serde_json::to_value(&rows).expect("rows"),
        }),
        csv_header: vec![
            "chi",
            "order",
            "parity",
            "primitive",
            "degree",
            "dim",
            "unit_roots",
            "trivial_zero",
            "roots_ok",
        ],
        csv_rows,
        checks,
    })
}

#[derive(Serialize)]
struct RmtRow {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<&'static str>,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    samples: u64,
    seed: u64,
    mean: [f64; 2],
    stderr: f64,
    target: f64,
    z: f64,
}

fn rmt_row_passes(est: &MCEstimate, target: f64) -> (f64, bool) {
    let t = Complex64::new(target, 0.0);
    if est.stderr == 0.0 {
        let exact = (est.mean - t).norm() == 0.0;
        (if exact { 0.0 } else { f64::INFINITY }, exact)
    } else {
        let z = est.z_score(t);
        (z, z <= 3.0)
    }
}

#[allow(clippy::too_many_arguments)]
fn rmt(
    dim: usize,
    pairs: Option<PairFamily>,
    j_max: usize,
    n: Option<usize>,
    q: Option<u64>,
    samples: u64,
    seed: u64,
) -> Result<CmdOutput, UsageError> {
    if dim == 0 {
        return Err(UsageError("N must be at least 1".into()));
    }
    if samples < 1000 {
        return Err(UsageError(
            "samples must be at least 1000 for a usable standard error".into(),
        ));
    }

    let mut rows: Vec<RmtRow> = Vec::new();
    let mut all_within = true;
    let mut worst_z = 0.0f64;

    let (mode, config) = match (pairs, n, q) {
        (Some(fam), None, None) => {
            let families: &[(&'static str, fn(usize) -> RepKind)] = match fam {
                PairFamily::Exterior => &[("exterior", RepKind::Exterior)],
                PairFamily::Symmetric => &[("symmetric", RepKind::Symmetric)],
                PairFamily::Both => &[
                    ("exterior", RepKind::Exterior),
                    ("symmetric", RepKind::Symmetric),
                ],
            };
            for (name, ctor) in families {
                for j in 0..=j_max {
                    for i in 0..=j_max {
                        let est = mc_orthogonality(dim, j, i, *ctor, samples, seed);
                        // exterior powers above the dimension vanish identically,
                        // so their self-pairing integrates to 0, not 1
                        let vanishes = *name == "exterior" && (j > dim || i > dim);
                        let target = if j == i && !vanishes { 1.0 } else { 0.0 };
                        let (z, pass) = rmt_row_passes(&est, target);
                        all_within &= pass;
                        worst_z = worst_z.max(z);
                        rows.push(RmtRow {
                            mode: "pairs",
                            family: Some(name),
                            dim,
                            j: Some(j),
                            i: Some(i),
                            n: None,
                            q: None,
                            samples,
                            seed,
                            mean: [est.mean.re, est.mean.im],
                            stderr: est.stderr,
                            target,
                            z,
                        });
                    }
                }
            }
            let fam_name = match fam {
                PairFamily::Exterior => "exterior",
                PairFamily::Symmetric => "symmetric",
                PairFamily::Both => "both",
            };
            (
                "pairs",
                json!({"N": dim, "pairs": fam_name, "j_max": j_max,
                       "samples": samples, "seed": seed}),
            )
        }
        (None, Some(n), Some(q)) => {
            let est = mc_triple_variance(n, dim, q, samples, seed);
            let target = sn_bruteforce(n, dim).value_u128(q) as f64;
            let (z, pass) = rmt_row_passes(&est, target);
            all_within &= pass;
            worst_z = worst_z.max(z);
            rows.push(RmtRow {
                mode: "triple",
                family: None,
                dim,
                j: None,
                i: None,
                n: Some(n),
                q: Some(q),
                samples,
                seed,
                mean: [est.mean.re, est.mean.im],
                stderr: est.stderr,
                target,
                z,
            });
            (
                "triple",
                json!({"N": dim, "n": n, "q": q, "samples": samples, "seed": seed}),
            )
        }
        _ => {
            return Err(UsageError(
                "rmt runs either the pair grid (--pairs, with --N) or the triple \
                 integral (--n and --q, with --N as the box bound)"
                    .into(),
            ))
        }
    };

    let checks = vec![Check::new(
        "z-scores",
        all_within,
        format!("{mode}: worst |z| = {worst_z:.3} over {} estimates", rows.len()),
    )];

    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                r.mode.to_string(),
                r.family.unwrap_or_default().to_string(),
                r.dim.to_string(),
                opt(&r.j),
                opt(&r.i),
                opt(&r.n),
                opt(&r.q),
                r.samples.to_string(),
                r.seed.to_string(),
                r.mean[0].to_string(),
                r.mean[1].to_string(),
                r.stderr.to_string(),
                r.target.to_string(),
                r.z.to_string(),
            ]
        })
        .collect();

    Ok(CmdOutput {
        command: "rmt",
        config,
        rows: serde_json::to_value(&rows).expect("rows"),
        csv_header: vec![
            "mode", "family", "dim", "j", "i", "n", "q", "samples", "seed", "mean_re", "mean_im",
            "stderr", "target", "z",
        ],
        csv_rows,
        checks,
    })
}

fn equidist(q: u64, modulus: &str, family: FamilyArg) -> Result<CmdOutput, UsageError> {
    let ctx = ctx_for(q)?;
    let group = group_for(&ctx, modulus)?;
    let fam = match family {
        FamilyArg::OddPrimitive => EquidistFamily::OddPrimitive,
        FamilyArg::EvenPrimitive => EquidistFamily::EvenPrimitive,
        FamilyArg::SixthPower => EquidistFamily::SixthPower,
    };
    let report = equidist_report(&group, fam).map_err(usage)?;

    let csv_rows = report
        .moments
        .iter()
        .map(|m| {
            vec![
                m.component.clone(),
                m.dim.to_string(),
                report.family_size.to_string(),
                m.mean_trace.re.to_string(),
                m.mean_trace.im.to_string(),
                m.mean_abs_trace_sq.to_string(),
                m.mean_trace_square.re.to_string(),
                m.mean_trace_square.im.to_string(),
                m.deviation_over_scale[0].to_string(),
                m.deviation_over_scale[1].to_string(),
                m.deviation_over_scale[2].to_string(),
            ]
        })
        .collect();

    Ok(CmdOutput {
        command: "equidist",
        config: json!({"q": q, "Q": modulus, "family": fam.name()}),
        rows: serde_json::to_value(&report).expect("rows"),
        csv_header: vec![
            "component",
            "dim",
            "family_size",
            "mean_trace_re",
            "mean_trace_im",
            "mean_abs_trace_sq",
            "mean_trace_sq_re",
            "mean_trace_sq_im",
            "dev_scale_tr",
            "dev_scale_trabs2",
            "dev_scale_trsq",
        ],
        csv_rows,
        // the underlying theorems are q -> infinity statements; the report
        // is descriptive, so there is no hard pass/fail here
        checks: Vec::new(),
    })
}
