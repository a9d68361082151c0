use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use resint::bench::{self, BenchRow, RefSet};
use resint::conditions::{self, ConditionsReport};
use resint::normalform::{self, ResonantSeries};
use resint::quantities::GList;
use resint::{CycQ, SystemSpec};

use crate::{AlgChoice, Command, Output, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: resint::Error,
    },
    #[error(transparent)]
    Core(#[from] resint::Error),
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Quantities {
            spec,
            k,
            alg,
            output,
        } => quantities(&spec, k, alg, &output),
        Command::Bench { k, sets, output } => bench(k, &sets, &output),
        Command::Normalform {
            spec,
            order,
            verify,
            output,
        } => normal_form(&spec, order, verify, &output),
        Command::Check {
            component,
            point,
            samples,
            seed,
            order,
            output,
        } => match (component, point) {
            (Some(id), _) => check_component(id, samples, seed, order, &output),
            (None, Some(path)) => check_point(&path, &output),
            (None, None) => unreachable!("clap requires one of --component, --point"),
        },
    }
}

fn load_spec(path: &Path) -> Result<SystemSpec> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    SystemSpec::parse(&text).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

fn emit(output: &Output, text: String, json: Value) -> Result<()> {
    let body = if output.json {
        let mut s = serde_json::to_string_pretty(&json).expect("json values serialize");
        s.push('\n');
        s
    } else {
        text
    };
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn quantities_json(g: &GList) -> Value {
    let items: Vec<Value> = g
        .quantities
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "k": i + 1,
                "term_count": p.expanded_term_count(),
                "support": p.term_count(),
                "terms": p.to_json_terms(),
            })
        })
        .collect();
    Value::Array(items)
}

fn quantities(path: &Path, k: usize, alg: AlgChoice, output: &Output) -> Result<Status> {
    let spec = load_spec(path)?;
    let algorithms: &[u8] = match alg {
        AlgChoice::One => &[1],
        AlgChoice::Two => &[2],
        AlgChoice::Both => &[1, 2],
    };
    let mut results = Vec::new();
    for &a in algorithms {
        let (g, ms) = bench::timed_run(&spec, k, a)?;
        eprintln!("algorithm {a}: {ms:.1} ms");
        results.push(g);
    }
    let agree = results.windows(2).all(|w| w[0] == w[1]);
    let g = &results[0];

    let mut text = String::new();
    for (i, p) in g.quantities.iter().enumerate() {
        let k = i + 1;
        writeln!(
            text,
            "g_{k}{k}{k}: {} terms ({} monomials)",
            p.expanded_term_count(),
            p.term_count()
        )
        .unwrap();
        writeln!(text, "  {}", p.to_text(spec.names())).unwrap();
    }
    if alg == AlgChoice::Both {
        writeln!(text, "algorithms agree: {agree}").unwrap();
    }
    let label = match alg {
        AlgChoice::One => json!("1"),
        AlgChoice::Two => json!("2"),
        AlgChoice::Both => json!("both"),
    };
    let mut doc = json!({
        "spec": spec.to_json(),
        "k": k,
        "algorithm": label,
        "quantities": quantities_json(g),
    });
    if alg == AlgChoice::Both {
        doc["agree"] = json!(agree);
    }
    emit(output, text, doc)?;
    if !agree {
        eprintln!("error: the two algorithms produced different quantities");
        return Ok(Status::Mismatch);
    }
    Ok(Status::Ok)
}

fn bench(k: usize, sets: &[String], output: &Output) -> Result<Status> {
    let mut chosen: Vec<RefSet> = if sets.is_empty() {
        RefSet::ALL.to_vec()
    } else {
        sets.iter()
            .map(|s| s.parse())
            .collect::<resint::Result<_>>()?
    };
    chosen.sort();
    chosen.dedup();
    if k == 0 {
        return Err(resint::Error::InvalidArgument("K must be at least 1".into()).into());
    }
    let cells = bench::plan(&chosen, k);
    let rows: Vec<BenchRow> = cells
        .par_iter()
        .map(|&(set, k, alg)| bench::run_cell(set, k, alg))
        .collect::<resint::Result<_>>()?;

    let mut text = String::new();
    writeln!(
        text,
        "{:<4} {:>2} {:>4} {:>12} {:>8} {:>8} {:>9}",
        "set", "k", "alg", "time_ms", "terms", "support", "published"
    )
    .unwrap();
    let mut mismatches = Vec::new();
    for row in &rows {
        let published = row.reference.map_or("-".to_string(), |r| r.to_string());
        let flag = if row.matches_reference() {
            ""
        } else {
            "  MISMATCH"
        };
        writeln!(
            text,
            "{:<4} {:>2} {:>4} {:>12.1} {:>8} {:>8} {:>9}{flag}",
            row.set.name(),
            row.k,
            row.algorithm,
            row.elapsed_ms,
            row.term_count,
            row.support,
            published
        )
        .unwrap();
        if !row.matches_reference() {
            mismatches.push(row);
        }
    }
    // side-by-side timings wherever both algorithms ran
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.set == b.set && a.k == b.k && a.algorithm == 1 && b.algorithm == 2 {
            writeln!(
                text,
                "{} k={}: algorithm 1 {:.1} ms, algorithm 2 {:.1} ms, ratio {:.2}",
                a.set.name(),
                a.k,
                a.elapsed_ms,
                b.elapsed_ms,
                b.elapsed_ms / a.elapsed_ms
            )
            .unwrap();
        }
    }
    emit(output, text, json!({ "rows": rows }))?;
    for row in &mismatches {
        eprintln!(
            "term count mismatch: {} k={} algorithm {}: {} computed, {} published",
            row.set.name(),
            row.k,
            row.algorithm,
            row.term_count,
            row.reference.unwrap_or_default()
        );
    }
    Ok(if mismatches.is_empty() {
        Status::Ok
    } else {
        Status::Invalid
    })
}

fn series_text(rs: &ResonantSeries) -> String {
    let mut text = String::new();
    let sum = normalform::integrability_residual(rs);
    for k in 0..rs.levels() {
        writeln!(
            text,
            "k={}: Y1 = {}, Y2 = {}, Y3 = {}, sum = {}",
            k + 1,
            rs.y1[k],
            rs.y2[k],
            rs.y3[k],
            sum[k]
        )
        .unwrap();
    }
    writeln!(text, "linear through order: {}", rs.is_linear()).unwrap();
    writeln!(
        text,
        "integrable through order: {}",
        sum.iter().all(CycQ::is_zero)
    )
    .unwrap();
    text
}

fn normal_form(path: &Path, order: u32, verify: bool, output: &Output) -> Result<Status> {
    let spec = load_spec(path)?;
    let (rs, map) = normalform::compute_normal_form(&spec, order)?;
    let mut status = Status::Ok;
    let mut doc = rs.to_json();
    let mut text = series_text(&rs);
    if verify {
        let residual = normalform::reconstruction_residual(&spec, &rs, &map, order)?;
        let ok = residual.is_empty() && map.resonant_terms().is_empty();
        doc["reconstruction_verified"] = json!(ok);
        writeln!(text, "reconstruction verified: {ok}").unwrap();
        if !ok {
            status = Status::NotVanishing;
        }
    }
    emit(output, text, doc)?;
    Ok(status)
}

fn check_point(path: &Path, output: &Output) -> Result<Status> {
    let spec = load_spec(path)?;
    if spec.triples() != SystemSpec::quadratic_family().triples() {
        return Err(CliError::Input {
            path: path.to_owned(),
            source: resint::Error::Validation(
                "a point file must describe the quadratic family".into(),
            ),
        });
    }
    let point = spec.point()?;
    let report = conditions::check_necessary_conditions(&point)?;
    emit(output, report_text(&report), report.to_json())?;
    Ok(Status::Ok)
}

fn report_text(report: &ConditionsReport) -> String {
    let mut text = String::new();
    let names = SystemSpec::quadratic_family().names().to_vec();
    let point: Vec<String> = names
        .iter()
        .zip(&report.point)
        .map(|(n, v)| format!("{n} = {v}"))
        .collect();
    writeln!(text, "point: {}", point.join(", ")).unwrap();
    for (i, g) in report.g_values.iter().enumerate() {
        let k = i + 1;
        writeln!(text, "g_{k}{k}{k} = {g}").unwrap();
    }
    writeln!(text, "components: {:?}", report.components_satisfied).unwrap();
    writeln!(text, "in V(I_z): {}", report.izeta_zero).unwrap();
    text
}

struct SampleOutcome {
    seed: u64,
    report: ConditionsReport,
    series: ResonantSeries,
}

fn check_component(
    id: u8,
    samples: usize,
    seed: u64,
    order: u32,
    output: &Output,
) -> Result<Status> {
    let component = conditions::ComponentId::new(id)?;
    eprintln!(
        "component J{id}, {samples} samples, seeds {seed}..{}",
        seed + samples as u64
    );
    let outcomes: Vec<SampleOutcome> = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> resint::Result<SampleOutcome> {
            let s = seed + i;
            let point = conditions::sample_component(id, s)?;
            let report = conditions::check_necessary_conditions(&point)?;
            let spec = SystemSpec::quadratic_family().with_values(&point)?;
            let (series, _) = normalform::compute_normal_form(&spec, order)?;
            Ok(SampleOutcome {
                seed: s,
                report,
                series,
            })
        })
        .collect::<resint::Result<_>>()?;

    let linearizable = component.is_linearizable_family();
    let mut failures = Vec::new();
    let mut text = String::new();
    let mut sample_docs = Vec::new();
    for o in &outcomes {
        let g_zero = o.report.quantities_vanish();
        let linear = o.series.is_linear();
        let integrable = normalform::integrability_residual(&o.series)
            .iter()
            .all(CycQ::is_zero);
        let linear_eqs: Vec<usize> = o
            .series
            .vanishing_components()
            .iter()
            .map(|m| m + 1)
            .collect();
        writeln!(
            text,
            "seed {}: g vanish {g_zero}, Y sum vanishes {integrable}, linear {linear}, linear equations {linear_eqs:?}",
            o.seed
        )
        .unwrap();
        if !g_zero {
            failures.push(format!("seed {}: some g_kkk is nonzero", o.seed));
        }
        if !integrable {
            failures.push(format!("seed {}: Y1 + Y2 + Y3 is nonzero", o.seed));
        }
        if linearizable && !linear {
            failures.push(format!("seed {}: normal form is not linear", o.seed));
        }
        sample_docs.push(json!({
            "seed": o.seed,
            "conditions": o.report.to_json(),
            "normal_form": o.series.to_json(),
            "linear_equations": linear_eqs,
        }));
    }
    let passed = failures.is_empty();
    writeln!(
        text,
        "J{id}: {}",
        if passed {
            "all asserted vanishings hold"
        } else {
            "FAILED"
        }
    )
    .unwrap();
    let doc = json!({
        "component": id,
        "seed": seed,
        "samples": samples,
        "order": order,
        "linearizable_expected": linearizable,
        "results": sample_docs,
        "passed": passed,
    });
    emit(output, text, doc)?;
    for f in &failures {
        eprintln!("{f}");
    }
    Ok(if passed {
        Status::Ok
    } else {
        Status::NotVanishing
    })
}
