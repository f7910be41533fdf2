use num_traits::ToPrimitive;
use popcorn_core::analysis::{
    fit_box_dimension, ols, pow2_meshes, proof_sequence_meshes, theoretical_spectrum, verify_chung_erdos_chain,
    verify_duffin_schaeffer, verify_local_ds, verify_strip_lemma, BoxFit, ScalingSample, SpectrumPoint,
};
use popcorn_core::covering::{
    brute_force_count, estimate_cost, grid_count_full_set_with, grid_count_reciprocals, grid_count_strip_with,
    grid_count_window_with, CountOptions, CountStrategy, CoverReport, Region, SetMode,
};
use popcorn_core::numtheory::verify_totient_bound;
use popcorn_core::{PopcornError, ReducedFraction};
use serde_json::{json, Map, Value};

use crate::args::{
    BoxdimArgs, CountArgs, MeshArgs, OracleArgs, Preset, RegionArgs, SpectrumArgs, Strategy, Suite, Target, VerifyArgs,
};
use crate::error::{CliError, Result};
use crate::report::{Plot, Report, Series, Table};

const COUNT_HEADER: [&str; 5] = ["mesh_num", "mesh_den", "count", "method", "q_max"];

fn frac(n: u64, d: u64) -> ReducedFraction {
    ReducedFraction::new(n, d).expect("nonzero denominator")
}

fn meshes(args: &MeshArgs) -> Result<Vec<ReducedFraction>> {
    let list = match args.preset {
        Some(Preset::Pow2) => pow2_meshes(args.kmin, args.kmax)?,
        Some(Preset::Proof) => proof_sequence_meshes(args.proof_n)?,
        None => args.mesh.clone(),
    };
    if list.is_empty() {
        return Err(CliError::Usage("give --mesh p/q[,p/q...] or --preset".into()));
    }
    for w in list.windows(2) {
        if w[1].to_big() >= w[0].to_big() {
            return Err(CliError::Usage(format!(
                "meshes must be strictly decreasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(list)
}

fn region(args: &RegionArgs) -> Result<Region> {
    match (args.strip, &args.window) {
        (Some(k), _) => Ok(Region::Strip { k }),
        (None, Some(w)) => match w[..] {
            [x0, y0, side] => Ok(Region::window(x0, y0, side)?),
            _ => Err(CliError::Usage(format!(
                "--window takes x0,y0,side; got {} values",
                w.len()
            ))),
        },
        (None, None) => Ok(Region::FullSquare),
    }
}

fn strategy(s: Strategy) -> CountStrategy {
    match s {
        Strategy::Auto => CountStrategy::Auto,
        Strategy::Enumerate => CountStrategy::Enumerate,
        Strategy::Probe => CountStrategy::Probe,
    }
}

fn guard(region: Region, mesh: ReducedFraction, s: CountStrategy, ceiling: f64) -> Result<()> {
    let cost = estimate_cost(region, mesh, s)?;
    if cost > ceiling {
        return Err(PopcornError::CostGuard {
            parameter: format!("mesh={mesh}"),
            cost: cost as u64,
            ceiling: ceiling as u64,
        }
        .into());
    }
    Ok(())
}

fn count_one(region: Region, mesh: ReducedFraction, target: Target, s: Strategy, ceiling: f64) -> Result<CoverReport> {
    let opts = CountOptions {
        mode: if target == Target::Graph {
            SetMode::Graph
        } else {
            SetMode::FullSet
        },
        strategy: strategy(s),
    };
    if target == Target::Reciprocals {
        if region != Region::FullSquare {
            return Err(CliError::Usage(
                "--set reciprocals only supports the full square".into(),
            ));
        }
        return Ok(grid_count_reciprocals(mesh)?);
    }
    guard(region, mesh, opts.strategy, ceiling)?;
    Ok(match region {
        Region::FullSquare => grid_count_full_set_with(mesh, &opts)?,
        Region::Strip { k } => grid_count_strip_with(k, mesh, &opts)?,
        Region::Window { .. } => grid_count_window_with(region, mesh, &opts)?,
    })
}

fn count_row(r: &CoverReport) -> Vec<String> {
    vec![
        r.mesh.num().to_string(),
        r.mesh.den().to_string(),
        r.count.to_string(),
        r.method.to_string(),
        r.q_max.to_string(),
    ]
}

fn count_json(r: &CoverReport) -> Value {
    json!({
        "mesh_num": r.mesh.num(),
        "mesh_den": r.mesh.den(),
        "count": r.count,
        "method": r.method.to_string(),
        "q_max": r.q_max,
        "region": r.region,
    })
}

fn ln_recip(mesh: ReducedFraction) -> f64 {
    (mesh.den() as f64 / mesh.num() as f64).ln()
}

fn count_report(command: &'static str, config: Value, reports: &[CoverReport], label: &str) -> Report {
    let mut body = Map::new();
    body.insert("rows".into(), reports.iter().map(count_json).collect());
    Report {
        command,
        config,
        body,
        table: Table {
            header: COUNT_HEADER.to_vec(),
            rows: reports.iter().map(count_row).collect(),
        },
        plot: Some(Plot {
            title: format!("{command}: cells met"),
            x_label: "ln(1/mesh)".into(),
            y_label: "ln N".into(),
            series: vec![Series {
                label: label.into(),
                points: reports
                    .iter()
                    .map(|r| (ln_recip(r.mesh), (r.count.max(1) as f64).ln()))
                    .collect(),
                fit: None,
            }],
        }),
        passed: true,
    }
}

pub fn count(args: &CountArgs) -> Result<Report> {
    let region = region(&args.region)?;
    let reports = meshes(&args.meshes)?
        .into_iter()
        .map(|m| count_one(region, m, args.target, args.strategy, args.guard))
        .collect::<Result<Vec<_>>>()?;
    Ok(count_report("count", json!(args), &reports, &region.to_string()))
}

pub fn oracle(args: &OracleArgs) -> Result<Report> {
    let region = region(&args.region)?;
    let reports = meshes(&args.meshes)?
        .into_iter()
        .map(|m| {
            let q_max = args.qmax.unwrap_or(m.den() / m.num());
            Ok(brute_force_count(m, q_max, region)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(count_report("oracle", json!(args), &reports, &region.to_string()))
}

fn fit_json(fit: &BoxFit) -> Value {
    json!({
        "slope": fit.slope(),
        "intercept": fit.fit.intercept,
        "stderr": fit.fit.stderr,
        "pair_slopes": fit.fit.pair_slopes,
        "residuals": fit.fit.residuals,
    })
}

pub fn boxdim(args: &BoxdimArgs) -> Result<Report> {
    let reports = meshes(&args.meshes)?
        .into_iter()
        .map(|m| count_one(Region::FullSquare, m, args.target, Strategy::Auto, args.guard))
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<ScalingSample> = reports
        .iter()
        .map(|r| ScalingSample {
            mesh: r.mesh,
            count: r.count,
        })
        .collect();
    let fit = fit_box_dimension(&samples)?;
    for w in &fit.warnings {
        eprintln!("warning: {w}");
    }
    let expected = match args.target {
        Target::Reciprocals => "1/2",
        _ => "4/3",
    };
    let mut report = count_report("boxdim", json!(args), &reports, "counts");
    report.body.insert("fit".into(), fit_json(&fit));
    report.body.insert("expected".into(), json!(expected));
    report.body.insert("warnings".into(), json!(fit.warnings));
    if let Some(plot) = report.plot.as_mut() {
        plot.title = format!("box counting: slope {:.4}", fit.slope());
        plot.series[0].fit = Some((fit.slope(), fit.fit.intercept));
        plot.series[0].label = format!("slope {:.3} (expected {expected})", fit.slope());
    }
    Ok(report)
}

fn abscissa(theta: ReducedFraction, side: ReducedFraction) -> f64 {
    (1.0 / theta.to_f64() - 1.0) * ln_recip(side)
}

fn spectrum_json(sp: &SpectrumPoint, expected: ReducedFraction) -> Value {
    json!({
        "theta": sp.theta.to_string(),
        "expected": expected.to_string(),
        "fitted_s": sp.fitted_s,
        "stderr": sp.stderr,
        "intercept": sp.intercept,
        "pair_slopes": sp.pair_slopes,
        "point_slopes": sp.point_slopes,
        "samples": sp.samples.iter().map(|w| json!({
            "n": w.n,
            "window_side": w.side.to_string(),
            "mesh_num": w.mesh.num(),
            "mesh_den": w.mesh.den(),
            "count": w.count,
            "q_max": w.q_max,
        })).collect::<Vec<_>>(),
    })
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Report> {
    let mut points = Vec::new();
    let mut table = Table {
        header: vec![
            "theta",
            "n",
            "window_side",
            "mesh_num",
            "mesh_den",
            "count",
            "method",
            "q_max",
        ],
        rows: Vec::new(),
    };
    let mut series = Vec::new();
    for &theta in &args.theta {
        let sp = popcorn_core::analysis::estimate_spectrum(theta, args.nmin, args.nmax, args.guard)?;
        let expected = theoretical_spectrum(theta)?;
        for w in &sp.samples {
            table.rows.push(vec![
                theta.to_string(),
                w.n.to_string(),
                w.side.to_string(),
                w.mesh.num().to_string(),
                w.mesh.den().to_string(),
                w.count.to_string(),
                "strip-fast".into(),
                w.q_max.to_string(),
            ]);
        }
        series.push(Series {
            label: format!("theta {theta}: s {:.3} ({:.3})", sp.fitted_s, expected.to_f64()),
            points: sp
                .samples
                .iter()
                .map(|w| (abscissa(theta, w.side), (w.count as f64).ln()))
                .collect(),
            fit: Some((sp.fitted_s, sp.intercept)),
        });
        points.push(spectrum_json(&sp, expected));
    }
    let mut body = Map::new();
    body.insert("spectrum".into(), Value::Array(points));
    Ok(Report {
        command: "spectrum",
        config: json!(args),
        body,
        table,
        plot: Some(Plot {
            title: "Assouad spectrum windows".into(),
            x_label: "(1/theta - 1) ln(1/R)".into(),
            y_label: "ln N".into(),
            series,
        }),
        passed: true,
    })
}

struct SuiteResult {
    name: &'static str,
    passed: bool,
    summary: String,
    detail: Value,
}

fn totient(args: &VerifyArgs) -> Result<SuiteResult> {
    let b = verify_totient_bound(args.lo, args.hi)?;
    Ok(SuiteResult {
        name: "totient",
        passed: b.min_ratio > 0.0,
        summary: format!(
            "min phi(n) loglog(n)/n over [{}, {}] = {:.6} at n = {}",
            args.lo, args.hi, b.min_ratio, b.argmin
        ),
        detail: json!({ "lo": args.lo, "hi": args.hi, "min_ratio": b.min_ratio, "argmin": b.argmin }),
    })
}

fn duffin_schaeffer(args: &VerifyArgs) -> Result<SuiteResult> {
    let delta = args.delta.unwrap_or(frac(1, 10_000_000));
    let r = verify_duffin_schaeffer(args.nmax, delta)?;
    Ok(SuiteResult {
        name: "duffin-schaeffer",
        passed: r.holds(),
        summary: format!(
            "n <= {}, delta {delta}: worst ratio {} over {} pairs",
            args.nmax, r.worst, r.pairs
        ),
        detail: json!({ "n_max": args.nmax, "delta": delta.to_string(), "report": r }),
    })
}

fn local_ds(args: &VerifyArgs) -> Result<SuiteResult> {
    let delta = args.delta.unwrap_or(frac(1, 100_000_000));
    let r = verify_local_ds(args.lmax, args.n, delta)?;
    Ok(SuiteResult {
        name: "local-ds",
        passed: r.holds(),
        summary: format!(
            "l <= {}, n = {}, delta {delta}: worst ratio {:.6} over {} pairs",
            args.lmax,
            args.n,
            r.worst.to_f64().unwrap_or(f64::NAN),
            r.pairs
        ),
        detail: json!({ "l_max": args.lmax, "n": args.n, "delta": delta.to_string(), "report": r }),
    })
}

fn strip_lemma(args: &VerifyArgs) -> Result<SuiteResult> {
    let delta = args.delta.unwrap_or(frac(1, 1_000_000));
    let r = verify_strip_lemma(delta, args.kmax)?;
    let summary = match &r.first_violation {
        None => format!(
            "delta {delta}, k <= {}: all {} strips within bounds",
            args.kmax, r.checked
        ),
        Some(w) => format!(
            "delta {delta}, k <= {}: {} of {} strips violate, first at k = {} (difference {} outside [{}, {}])",
            args.kmax, r.violations, r.checked, w.k, w.difference, w.lower, w.upper
        ),
    };
    Ok(SuiteResult {
        name: "strip-lemma",
        passed: r.passed,
        summary,
        detail: json!({ "k_max": args.kmax, "delta": delta.to_string(), "report": r }),
    })
}

fn chung_erdos(args: &VerifyArgs) -> Result<SuiteResult> {
    let deltas = match args.delta {
        Some(d) => vec![d],
        None => vec![frac(1, 1 << 10), frac(1, 1 << 12), frac(1, 1 << 14)],
    };
    let reports = deltas
        .iter()
        .map(|&d| verify_chung_erdos_chain(d))
        .collect::<popcorn_core::Result<Vec<_>>>()?;
    let passed = reports.iter().all(|c| c.holds());
    let mut summary: Vec<String> = reports
        .iter()
        .map(|c| {
            format!(
                "delta {}: k in [{}, {}], {} violations",
                c.delta,
                c.k_lo,
                c.k_hi,
                c.violations.len()
            )
        })
        .collect();
    let mut slope = None;
    if reports.len() >= 3 {
        let xs: Vec<f64> = reports.iter().map(|c| ln_recip(c.delta)).collect();
        let ys: Vec<f64> = reports
            .iter()
            .map(|c| c.aggregate.to_f64().unwrap_or(f64::NAN).ln())
            .collect();
        let s = ols(&xs, &ys)?.slope;
        summary.push(format!("aggregate slope {s:.4}"));
        slope = Some(s);
    }
    Ok(SuiteResult {
        name: "chung-erdos",
        passed,
        summary: summary.join("; "),
        detail: json!({ "reports": reports, "aggregate_slope": slope }),
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Report> {
    type SuiteFn = fn(&VerifyArgs) -> Result<SuiteResult>;
    let all: [(Suite, SuiteFn); 5] = [
        (Suite::Totient, totient),
        (Suite::DuffinSchaeffer, duffin_schaeffer),
        (Suite::LocalDs, local_ds),
        (Suite::StripLemma, strip_lemma),
        (Suite::ChungErdos, chung_erdos),
    ];
    let results = all
        .iter()
        .filter(|(s, _)| args.suite == Suite::All || args.suite == *s)
        .map(|(_, f)| f(args))
        .collect::<Result<Vec<_>>>()?;
    for r in &results {
        eprintln!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.summary);
    }
    let passed = results.iter().all(|r| r.passed);
    let mut body = Map::new();
    body.insert("passed".into(), json!(passed));
    body.insert(
        "suites".into(),
        results
            .iter()
            .map(|r| json!({ "suite": r.name, "passed": r.passed, "summary": r.summary, "detail": r.detail }))
            .collect(),
    );
    Ok(Report {
        command: "verify",
        config: json!(args),
        body,
        table: Table {
            header: vec!["suite", "passed", "summary"],
            rows: results
                .iter()
                .map(|r| vec![r.name.to_string(), r.passed.to_string(), r.summary.clone()])
                .collect(),
        },
        plot: None,
        passed,
    })
}
