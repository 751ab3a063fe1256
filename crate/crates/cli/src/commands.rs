use std::fs::File;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use mellin_core::dist::{read_xy_csv, sample, DistributionSpec};
use mellin_core::excess::{
    check_commutativity, check_iteration, check_semigroup, excess, excess_mellin,
};
use mellin_core::levy::{
    check_delta_decay, check_exponent_shape, delta_formula, dist_from_levy, levy_exponent,
    LevySpec,
};
use mellin_core::limit::{convergence_report, estimate_c};
use mellin_core::mellin::{
    check_log_convexity, check_ratio_monotone, default_lambda_grid, mellin, mellin_distance,
    mellin_with, LogMellinProfile, MellinPath, MellinValue,
};
use mellin_core::size_bias::{check_dominance, check_properties, size_bias};
use mellin_core::suite::full_suite;
use mellin_core::tmono::{
    beta_mix, check_downward_closure, check_k_monotone, check_k_monotone_values,
    default_monotone_grid, recover_mixing_mellin, MAX_MONOTONE_ORDER,
};
use mellin_core::CheckResult;

use crate::args::{Command, Common, PathChoice};
use crate::error::CliError;
use crate::output::{num, Artifact, Table};

pub fn run(command: &Command, common: &Common) -> Result<Artifact, CliError> {
    match command {
        Command::Mellin { path } => mellin_cmd(common, *path),
        Command::Bias => bias_cmd(common),
        Command::Excess { iterations } => excess_cmd(common, *iterations),
        Command::Tmono {
            k,
            mix,
            density_csv,
        } => tmono_cmd(common, *k, *mix, density_csv.as_deref()),
        Command::Limit => limit_cmd(common),
        Command::Levy => levy_cmd(common),
        Command::CheckSuite => suite_cmd(common),
        Command::Sample => sample_cmd(common),
    }
}

fn require_spec(common: &Common) -> Result<&Path, CliError> {
    common
        .spec
        .as_deref()
        .ok_or_else(|| CliError::Usage("--spec <path> is required".into()))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// JSON spec, or a `.csv` survival table.
fn load_spec(common: &Common) -> Result<DistributionSpec, CliError> {
    let path = require_spec(common)?;
    let spec = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let file = File::open(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        DistributionSpec::grid(&read_xy_csv(file)?)?
    } else {
        DistributionSpec::from_json(&read_text(path)?)?
    };
    spec.validate()?;
    Ok(spec)
}

/// A bare Levy spec, or a distribution spec of the `Levy` variant.
fn load_levy(common: &Common) -> Result<LevySpec, CliError> {
    let text = read_text(require_spec(common)?)?;
    let levy = match serde_json::from_str::<LevySpec>(&text) {
        Ok(l) => l,
        Err(_) => match DistributionSpec::from_json(&text)? {
            DistributionSpec::Levy { levy } => levy,
            other => {
                return Err(CliError::Usage(format!(
                    "levy needs a Levy spec, got {}",
                    other.tag()
                )))
            }
        },
    };
    levy.validate()?;
    Ok(levy)
}

fn lambdas(common: &Common, default: Vec<f64>) -> Vec<f64> {
    common.lambda.as_ref().map_or(default, |g| g.0.clone())
}

fn t_grid(common: &Common, default: Vec<f64>) -> Vec<f64> {
    common.t.as_ref().map_or(default, |g| g.0.clone())
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

fn tol(common: &Common, default: f64) -> Result<f64, CliError> {
    positive("tol", common.tol.unwrap_or(default))
}

fn step(common: &Common) -> Result<f64, CliError> {
    positive("s", common.s.unwrap_or(1.0))
}

fn check_row(table: &mut Table, t: Option<f64>, check: &CheckResult) {
    let mut row = vec![
        "check".to_string(),
        t.map(num).unwrap_or_default(),
        String::new(),
        String::new(),
        String::new(),
        check.name.clone(),
        check.passed.to_string(),
        num(check.worst),
        check.detail.clone(),
    ];
    row.truncate(table.columns.len());
    table.push(row);
}

const CHECK_COLUMNS: [&str; 9] = [
    "kind", "t", "lambda", "value", "ln_value", "check", "passed", "worst", "detail",
];

fn mellin_row(table: &mut Table, t: Option<f64>, v: &MellinValue) {
    table.push(vec![
        "mellin".into(),
        t.map(num).unwrap_or_default(),
        num(v.lambda),
        num(v.value),
        num(v.ln_value),
    ]);
}

fn mellin_cmd(common: &Common, path: PathChoice) -> Result<Artifact, CliError> {
    let spec = load_spec(common)?;
    let grid = lambdas(common, default_lambda_grid());
    let tol = tol(common, 1e-10)?;
    let path = match path {
        PathChoice::Auto => MellinPath::Auto,
        PathChoice::Survival => MellinPath::Survival,
        PathChoice::Density => MellinPath::Density,
    };
    let values = grid
        .iter()
        .map(|&l| mellin_with(&spec, l, tol, path))
        .collect::<Result<Vec<_>, _>>()?;
    let profile = LogMellinProfile {
        lambdas: grid.clone(),
        g_values: values.iter().map(|v| v.ln_value).collect(),
        g_errors: values
            .iter()
            .map(|v| v.abs_error / v.value.abs().max(f64::MIN_POSITIVE))
            .collect(),
    };
    let convexity = (grid.len() >= 3).then(|| check_log_convexity(&profile, 1e-9));

    let mut table = Table::new(&["lambda", "value", "ln_value", "abs_error", "method"]);
    for v in &values {
        table.push(vec![
            num(v.lambda),
            num(v.value),
            num(v.ln_value),
            num(v.abs_error),
            serde_json::to_value(v.method)?.as_str().unwrap_or_default().to_string(),
        ]);
    }
    let config = json!({
        "command": "mellin",
        "spec": spec,
        "lambda": grid,
        "tol": tol,
        "path": format!("{path:?}").to_lowercase(),
    });
    let passed = convexity.as_ref().is_none_or(|c| c.passed);
    Artifact::new(
        config,
        json!({ "values": values, "log_convexity": convexity }),
        table,
        passed,
    )
}

#[derive(Serialize)]
struct BiasEntry {
    t: f64,
    biased: DistributionSpec,
    values: Vec<MellinValue>,
    properties: CheckResult,
    dominance: CheckResult,
}

fn bias_cmd(common: &Common) -> Result<Artifact, CliError> {
    let spec = load_spec(common)?;
    let grid = lambdas(common, default_lambda_grid());
    let ts = t_grid(common, vec![1.0]);
    let s = step(common)?;
    let tol = tol(common, 1e-8)?;
    let mean = mellin(&spec, 1.0, 1e-10)?.value;
    let xs: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 4.0].iter().map(|k| k * mean).collect();

    let mut table = Table::new(&CHECK_COLUMNS);
    let mut entries = Vec::with_capacity(ts.len());
    for &t in &ts {
        let biased = size_bias(&spec, t)?;
        let values = grid
            .iter()
            .map(|&l| mellin(&biased, l, 1e-10))
            .collect::<Result<Vec<_>, _>>()?;
        let properties = check_properties(&spec, s, t, &grid, tol)?;
        let dominance = check_dominance(&spec, t, &xs, tol)?;
        for v in &values {
            mellin_row(&mut table, Some(t), v);
        }
        check_row(&mut table, Some(t), &properties);
        check_row(&mut table, Some(t), &dominance);
        entries.push(BiasEntry {
            t,
            biased,
            values,
            properties,
            dominance,
        });
    }
    let ratio = grid
        .iter()
        .map(|&l| check_ratio_monotone(&spec, l, &ts, 1e-10))
        .collect::<Result<Vec<_>, _>>()?;
    let ratio = CheckResult::all("ratio monotone in t", &ratio);
    check_row(&mut table, None, &ratio);

    let passed = ratio.passed
        && entries
            .iter()
            .all(|e| e.properties.passed && e.dominance.passed);
    let config = json!({
        "command": "bias",
        "spec": spec,
        "t": ts,
        "lambda": grid,
        "s": s,
        "tol": tol,
    });
    Artifact::new(
        config,
        json!({ "entries": entries, "ratio_monotone": ratio }),
        table,
        passed,
    )
}

#[derive(Serialize)]
struct ExcessEntry {
    t: f64,
    excess: DistributionSpec,
    values: Vec<MellinValue>,
    semigroup: CheckResult,
    commutativity: CheckResult,
    /// Mellin distance between the excess law and the input law.
    fixed_point_gap: f64,
    fixed_point: Option<CheckResult>,
}

fn is_exponential(spec: &DistributionSpec) -> bool {
    match spec {
        DistributionSpec::Exponential { .. } => true,
        DistributionSpec::Scaled { base, .. } => is_exponential(base),
        _ => false,
    }
}

fn excess_cmd(common: &Common, iterations: Option<usize>) -> Result<Artifact, CliError> {
    let spec = load_spec(common)?;
    let grid = lambdas(common, default_lambda_grid());
    let ts = t_grid(common, vec![1.0]);
    let s = step(common)?;
    let tol = tol(common, 1e-6)?;

    let mut table = Table::new(&CHECK_COLUMNS);
    let mut entries = Vec::with_capacity(ts.len());
    for &t in &ts {
        let e = excess(&spec, t)?;
        let values = grid
            .iter()
            .map(|&l| excess_mellin(&spec, t, l))
            .collect::<Result<Vec<_>, _>>()?;
        let semigroup = check_semigroup(&spec, s, t, &grid, tol)?;
        let commutativity = check_commutativity(&spec, s, t, &grid, tol)?;
        let gap = mellin_distance(&e, &spec, &grid)?;
        let fixed_point = is_exponential(&spec).then(|| {
            let mut r = CheckResult {
                name: "exponential fixed point".into(),
                passed: gap <= tol,
                worst: gap - tol,
                checked: grid.len(),
                detail: format!("Mellin distance {gap:.3e}"),
            };
            if !r.passed {
                r.detail.push_str(&format!(" exceeds {tol:e}"));
            }
            r
        });
        for v in &values {
            mellin_row(&mut table, Some(t), v);
        }
        table.push(vec![
            "fixed_point_gap".into(),
            num(t),
            String::new(),
            num(gap),
        ]);
        check_row(&mut table, Some(t), &semigroup);
        check_row(&mut table, Some(t), &commutativity);
        if let Some(f) = &fixed_point {
            check_row(&mut table, Some(t), f);
        }
        entries.push(ExcessEntry {
            t,
            excess: e,
            values,
            semigroup,
            commutativity,
            fixed_point_gap: gap,
            fixed_point,
        });
    }
    let iteration = match iterations {
        Some(n) => Some(check_iteration(&spec, n, &grid, tol, MellinPath::Auto)?),
        None => None,
    };
    if let Some(it) = &iteration {
        check_row(&mut table, None, it);
    }
    let passed = entries.iter().all(|e| {
        e.semigroup.passed && e.commutativity.passed && e.fixed_point.as_ref().is_none_or(|f| f.passed)
    }) && iteration.as_ref().is_none_or(|i| i.passed);
    let config = json!({
        "command": "excess",
        "spec": spec,
        "t": ts,
        "lambda": grid,
        "s": s,
        "tol": tol,
        "iterations": iterations,
    });
    Artifact::new(
        config,
        json!({ "entries": entries, "iteration": iteration }),
        table,
        passed,
    )
}

#[derive(Serialize)]
struct TmonoEntry {
    t: f64,
    k: usize,
    tested: DistributionSpec,
    k_monotone: CheckResult,
    recovered: Vec<MellinValue>,
    certificate: CheckResult,
    downward_closure: Option<CheckResult>,
}

fn order_for(t: f64, k: Option<usize>) -> Result<usize, CliError> {
    let k = k.unwrap_or_else(|| (t.floor().max(0.0) as usize).min(MAX_MONOTONE_ORDER));
    if k > MAX_MONOTONE_ORDER {
        return Err(CliError::Usage(format!(
            "--k must be at most {MAX_MONOTONE_ORDER}, got {k}"
        )));
    }
    Ok(k)
}

fn tmono_cmd(
    common: &Common,
    k: Option<usize>,
    mix: bool,
    density_csv: Option<&Path>,
) -> Result<Artifact, CliError> {
    let ts = t_grid(common, vec![2.0]);
    let tol = tol(common, 1e-7)?;
    let mut table = Table::new(&CHECK_COLUMNS);

    if let Some(path) = density_csv {
        let file = File::open(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let points = read_xy_csv(file)?;
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let fs: Vec<f64> = points.iter().map(|p| p.1).collect();
        let mut checks = Vec::with_capacity(ts.len());
        for &t in &ts {
            let k = order_for(t, k)?;
            let r = check_k_monotone_values(&xs, &fs, k, tol)?;
            check_row(&mut table, Some(t), &r);
            checks.push(json!({ "t": t, "k": k, "k_monotone": r }));
        }
        let passed = checks.iter().all(|c| c["k_monotone"]["passed"] == Value::Bool(true));
        let config = json!({
            "command": "tmono",
            "density_points": points,
            "t": ts,
            "k": k,
            "tol": tol,
        });
        return Artifact::new(config, json!({ "entries": checks }), table, passed);
    }

    let spec = load_spec(common)?;
    let grid = lambdas(common, default_lambda_grid());
    let mut entries = Vec::with_capacity(ts.len());
    for &t in &ts {
        let k = order_for(t, k)?;
        let z = if mix { beta_mix(&spec, t)? } else { spec.clone() };
        let k_monotone = check_k_monotone(&z, k, &default_monotone_grid(&z)?, tol)?;
        let rec = recover_mixing_mellin(&z, t, &grid)?;
        let downward_closure = match (mix, common.s) {
            (true, Some(s)) if s < t => Some(check_downward_closure(&spec, t, s, &grid, tol)?),
            _ => None,
        };
        check_row(&mut table, Some(t), &k_monotone);
        for v in &rec.values {
            mellin_row(&mut table, Some(t), v);
        }
        check_row(&mut table, Some(t), &rec.certificate);
        if let Some(d) = &downward_closure {
            check_row(&mut table, Some(t), d);
        }
        entries.push(TmonoEntry {
            t,
            k,
            tested: z,
            k_monotone,
            recovered: rec.values,
            certificate: rec.certificate,
            downward_closure,
        });
    }
    let passed = entries.iter().all(|e| {
        e.k_monotone.passed
            && e.certificate.passed
            && e.downward_closure.as_ref().is_none_or(|d| d.passed)
    });
    let config = json!({
        "command": "tmono",
        "spec": spec,
        "t": ts,
        "lambda": grid,
        "k": k,
        "mix": mix,
        "s": common.s,
        "tol": tol,
    });
    Artifact::new(config, json!({ "entries": entries }), table, passed)
}

fn limit_cmd(common: &Common) -> Result<Artifact, CliError> {
    let spec = load_spec(common)?;
    let alpha = positive("alpha", common.alpha.unwrap_or(1.0))?;
    let ts = t_grid(common, (1..=40).map(f64::from).collect());
    let grid = lambdas(common, vec![0.5, 1.0, 2.0]);
    let s = step(common)?;
    let n = common.n.unwrap_or(0);
    let seed = common.seed.unwrap_or(0);
    let report = convergence_report(&spec, alpha, &ts, &grid, n, seed, s)?;

    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    let mut table = Table::new(&["kind", "t", "lambda", "x", "value", "reference", "error"]);
    let mut reader = csv::Reader::from_reader(buf.as_slice());
    for rec in reader.records() {
        table.push(rec?.iter().map(str::to_string).collect());
    }
    let config = json!({
        "command": "limit",
        "spec": spec,
        "alpha": alpha,
        "t": ts,
        "lambda": grid,
        "s": s,
        "n": n,
        "seed": seed,
    });
    let passed = report.verdict.passed;
    Artifact::new(config, &report, table, passed)
}

#[derive(Serialize)]
struct LevyRow {
    t: f64,
    c: f64,
    delta: f64,
    difference: f64,
}

fn levy_cmd(common: &Common) -> Result<Artifact, CliError> {
    let levy = load_levy(common)?;
    let grid = lambdas(common, (0..=40).map(|i| i as f64 * 0.25).collect());
    let ts = t_grid(common, (1..=50).map(f64::from).collect());
    let s = step(common)?;
    let tol = tol(common, 1e-10)?;
    let x = dist_from_levy(&levy)?;

    let exponent: Vec<(f64, f64)> = grid.iter().map(|&l| (l, levy_exponent(&levy, l))).collect();
    let g = |l: f64| levy_exponent(&levy, l);
    let rows = ts
        .iter()
        .map(|&t| {
            Ok(LevyRow {
                t,
                c: estimate_c(&x, t, s)?.value,
                delta: delta_formula(&levy, t, s),
                difference: g(t + 1.0 + s) - g(t + 1.0) - g(t + s) + g(t),
            })
        })
        .collect::<Result<Vec<_>, mellin_core::Error>>()?;
    let shape = check_exponent_shape(&levy, &grid, tol)?;
    let decay = check_delta_decay(&levy, &ts, s, tol)?;

    let mut table = Table::new(&["kind", "lambda", "t", "value", "reference", "check", "passed", "worst"]);
    for &(l, v) in &exponent {
        table.push(vec!["exponent".into(), num(l), String::new(), num(v)]);
    }
    for r in &rows {
        table.push(vec!["c".into(), String::new(), num(r.t), num(r.c), num(levy.sigma2)]);
        table.push(vec!["delta".into(), String::new(), num(r.t), num(r.delta), num(r.difference)]);
    }
    for c in [&shape, &decay] {
        table.push(vec![
            "check".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            c.name.clone(),
            c.passed.to_string(),
            num(c.worst),
        ]);
    }
    let config = json!({
        "command": "levy",
        "levy": levy,
        "lambda": grid,
        "t": ts,
        "s": s,
        "tol": tol,
    });
    let passed = shape.passed && decay.passed;
    Artifact::new(
        config,
        json!({
            "exponent": exponent,
            "c_and_delta": rows,
            "exponent_shape": shape,
            "delta_decay": decay,
        }),
        table,
        passed,
    )
}

fn suite_cmd(common: &Common) -> Result<Artifact, CliError> {
    let seed = common.seed.unwrap_or(0);
    let draws = common.n.unwrap_or(200);
    let reports = full_suite(seed, draws)?;
    let mut table = Table::new(&["suite", "check", "passed", "worst", "checked", "detail"]);
    for r in &reports {
        for c in &r.results {
            table.push(vec![
                r.name.clone(),
                c.name.clone(),
                c.passed.to_string(),
                num(c.worst),
                c.checked.to_string(),
                c.detail.clone(),
            ]);
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let config = json!({ "command": "check-suite", "seed": seed, "n": draws });
    Artifact::new(config, &reports, table, passed)
}

fn sample_cmd(common: &Common) -> Result<Artifact, CliError> {
    let spec = load_spec(common)?;
    let n = common.n.unwrap_or(1000);
    let seed = common.seed.unwrap_or(0);
    let batch = sample(&spec, n, seed)?;
    let mut table = Table::new(&["index", "value"]);
    for (i, v) in batch.values.iter().enumerate() {
        table.push(vec![i.to_string(), num(*v)]);
    }
    let config = json!({ "command": "sample", "spec": spec, "n": n, "seed": seed });
    Artifact::new(config, &batch, table, true)
}
