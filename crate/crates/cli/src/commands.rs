use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use seer_nf::calibration::{train, StopReason, TrainingTrace};
use seer_nf::dataset::{
    load_projects_csv, projects_from_json, projects_to_json, read_dataset, transfer_all, write_projects_csv,
    MappingTable, Protocol,
};
use seer_nf::experiment::{evaluate, run_case, CaseEvaluation, EvaluationReport};
use seer_nf::fuzzy::bank_translate;
use seer_nf::rating::parse_rating;
use seer_nf::table::Provenance;
use seer_nf::{engine, ParameterId, SeerProject, ValueTable};

use crate::cli::*;
use crate::config::RunConfig;
use crate::failure::{fail, require_file, Failure, Outcome, StageExt};
use crate::run::{out_dir, Run};

fn load_table(path: &Path, stage: &'static str) -> Outcome<ValueTable> {
    require_file(path, "table", stage)?;
    let (table, _) = ValueTable::load(path).stage(stage)?;
    let violations = table.validate();
    if !violations.is_empty() {
        let listing: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(fail(
            stage,
            format!("table {} is invalid:\n  {}", path.display(), listing.join("\n  ")),
        ));
    }
    Ok(table)
}

fn load_mapping(path: Option<&Path>, stage: &'static str) -> Outcome<MappingTable> {
    match path {
        Some(path) => {
            require_file(path, "mapping", stage)?;
            MappingTable::load(path).stage(stage)
        }
        None => Ok(MappingTable::reconstructed_default()),
    }
}

fn load_projects(path: &Path, stage: &'static str) -> Outcome<Vec<SeerProject>> {
    require_file(path, "projects file", stage)?;
    let projects = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let text = std::fs::read_to_string(path).stage(stage)?;
        projects_from_json(&text).stage(stage)?
    } else {
        load_projects_csv(path).stage(stage)?
    };
    if projects.is_empty() {
        return Err(fail(stage, format!("{} holds no projects", path.display())));
    }
    Ok(projects)
}

fn transfer_dataset(dataset: &Path, mapping: &MappingTable) -> Outcome<Vec<SeerProject>> {
    require_file(dataset, "dataset", "transfer")?;
    let records = read_dataset(dataset).stage("transfer")?;
    if records.is_empty() {
        return Err(fail("transfer", format!("{} holds no projects", dataset.display())));
    }
    transfer_all(&records, mapping).stage("transfer")
}

fn required_out_dir(out: &OutDirArg) -> Outcome<PathBuf> {
    out_dir(out.out_dir.as_deref())
        .ok_or_else(|| fail("output", "no output directory: pass --out-dir or set SEER_NF_OUT_DIR"))
}

#[derive(Debug, Serialize)]
struct EstimateReport {
    size: f64,
    sibr: f64,
    ctbx: f64,
    parm_adjustment: f64,
    c_tb: f64,
    c_te: f64,
    k_lifecycle: f64,
    effort_person_years: f64,
    effort_person_months: f64,
    months_per_year: f64,
}

pub fn estimate(args: &EstimateArgs) -> Outcome<()> {
    let table = load_table(&args.table, "table")?;
    let mut project = SeerProject::nominal("estimate", args.size, 1.0);
    project.sibr = args.sibr;
    for spec in &args.ratings {
        let (symbol, value) = spec
            .split_once('=')
            .ok_or_else(|| fail("input", format!("rating `{spec}` is not SYMBOL=VALUE")))?;
        let id: ParameterId = symbol.trim().parse().stage("input")?;
        let coordinate = parse_rating(value).stage("input")?;
        project.set_rating(id, coordinate).stage("input")?;
    }
    if !(args.size > 0.0 && args.size.is_finite()) {
        return Err(fail("input", format!("size {} must be positive", args.size)));
    }
    if !(0.0..=1.0).contains(&args.sibr) {
        return Err(fail("input", format!("SIBR {} outside [0, 1]", args.sibr)));
    }
    if !(args.months_per_year > 0.0 && args.months_per_year.is_finite()) {
        return Err(fail("input", "months per year must be positive"));
    }
    let values = bank_translate(&project, &table).stage("estimate")?;
    let b = engine::estimate(args.size, &values).stage("estimate")?;
    let report = EstimateReport {
        size: args.size,
        sibr: args.sibr,
        ctbx: b.ctbx,
        parm_adjustment: b.parm_adjustment,
        c_tb: b.c_tb,
        c_te: b.c_te,
        k_lifecycle: b.k_lifecycle,
        effort_person_years: b.effort,
        effort_person_months: b.effort * args.months_per_year,
        months_per_year: args.months_per_year,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("estimate serializes"));
    } else {
        let lines = [
            ("size (SLOC)", report.size),
            ("SIBR", report.sibr),
            ("ctbx", report.ctbx),
            ("ParmAdjustment", report.parm_adjustment),
            ("C_tb", report.c_tb),
            ("C_te", report.c_te),
            ("K (person-years)", report.k_lifecycle),
            ("effort (person-years)", report.effort_person_years),
            ("effort (person-months)", report.effort_person_months),
        ];
        for (label, value) in lines {
            println!("{label:<24}{value}");
        }
    }
    Ok(())
}

pub fn validate_table(args: &ValidateTableArgs) -> Outcome<()> {
    require_file(&args.table, "table", "table")?;
    let (table, provenance) = ValueTable::load(&args.table).stage("table")?;
    let violations = table.validate();
    if violations.is_empty() {
        match provenance {
            Some(p) => println!("ok ({})", p.origin),
            None => println!("ok"),
        }
        return Ok(());
    }
    for v in &violations {
        eprintln!("{v}");
    }
    Err(fail("table", format!("{} violation(s)", violations.len())))
}

pub fn init_table() -> Outcome<()> {
    let provenance = Provenance {
        origin: "built-in synthetic table".into(),
        ..Default::default()
    };
    print!("{}", ValueTable::synthetic().to_toml_string(Some(&provenance)));
    Ok(())
}

pub fn init_mapping() -> Outcome<()> {
    print!("{}", MappingTable::default_toml());
    Ok(())
}

pub fn transfer(args: &TransferArgs) -> Outcome<()> {
    let dir = required_out_dir(&args.out)?;
    let mut run = Run::new("transfer");
    run.input(&args.dataset);
    if let Some(m) = &args.mapping {
        run.input(m);
    }
    let result = (|| {
        let mapping = load_mapping(args.mapping.as_deref(), "mapping")?;
        let projects = transfer_dataset(&args.dataset, &mapping)?;
        run.output("projects.csv", write_projects_csv(&projects));
        run.output("projects.json", projects_to_json(&projects).stage("output")? + "\n");
        eprintln!("transferred {} projects", projects.len());
        Ok(())
    })();
    run.finish(&dir, result)
}

fn calibrated_provenance(origin: String, trace: &TrainingTrace, config: &RunConfig) -> Provenance {
    Provenance {
        origin,
        epochs_run: Some(trace.epochs.len()),
        initial_loss: Some(trace.initial_loss),
        final_loss: Some(trace.final_loss()),
        config: toml::Table::try_from(&config.calibration).ok(),
    }
}

pub fn calibrate(args: &CalibrateArgs) -> Outcome<()> {
    let dir = required_out_dir(&args.out)?;
    let mut run = Run::new("calibrate");
    run.input(&args.projects);
    run.input(&args.table);
    let result = (|| {
        let config = RunConfig::resolve(&args.training, None)?;
        run.config(config.to_json());
        let projects = load_projects(&args.projects, "projects")?;
        let table = load_table(&args.table, "table")?;
        let trace = train(&projects, &table, &config.calibration).stage("train")?;
        let origin = format!(
            "calibrated from {} on {}",
            args.table.display(),
            args.projects.display()
        );
        let provenance = calibrated_provenance(origin, &trace, &config);
        run.output("calibrated_table.toml", trace.table.to_toml_string(Some(&provenance)));
        run.output("trace.csv", trace.to_csv());
        eprintln!(
            "{} epochs, loss {} -> {} ({})",
            trace.epochs.len(),
            trace.initial_loss,
            trace.final_loss(),
            stop_name(trace.stop)
        );
        Ok(())
    })();
    run.finish(&dir, result)
}

fn stop_name(stop: StopReason) -> String {
    serde_json::to_value(stop)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn render(report: &EvaluationReport, title: &str, format: Format, months_per_year: f64) -> String {
    match format {
        Format::Text => report.to_text(title),
        Format::Csv => report.rows_csv(months_per_year),
        Format::Json => report.to_json() + "\n",
    }
}

pub fn evaluate_cmd(args: &EvaluateArgs) -> Outcome<()> {
    let dir = out_dir(args.out.out_dir.as_deref());
    let mut run = Run::new("evaluate");
    run.input(&args.projects);
    run.input(&args.table);
    let result = (|| {
        let config = RunConfig::resolve(&args.training, None)?;
        run.config(config.to_json());
        let projects = load_projects(&args.projects, "projects")?;
        let table = load_table(&args.table, "table")?;
        let report = evaluate(&projects, &table, &config.report).stage("evaluate")?;
        print!("{}", render(&report, "evaluation", args.format, config.months_per_year));
        run.output("evaluation.csv", report.rows_csv(config.months_per_year));
        run.output("evaluation_summary.csv", report.summary_csv());
        run.output("evaluation.txt", report.to_text("evaluation"));
        run.output("evaluation.json", report.to_json() + "\n");
        Ok(())
    })();
    match dir {
        Some(dir) => run.finish(&dir, result),
        None => result,
    }
}

/// The JSON summary of a case run, readable by `report`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CaseReportFile {
    pub protocol: String,
    pub training_ids: Vec<String>,
    pub stop: String,
    pub epochs_run: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub evaluations: Vec<CaseEvaluation>,
}

fn case_text(evaluation: &CaseEvaluation) -> String {
    format!(
        "{}\n{}\n{}",
        evaluation.baseline.to_text(&format!("{} / baseline", evaluation.name)),
        evaluation.calibrated.to_text(&format!("{} / calibrated", evaluation.name)),
        evaluation.change.to_text(&format!("{} / change (calibrated - baseline)", evaluation.name))
    )
}

pub fn case(args: &CaseArgs) -> Outcome<()> {
    let dir = required_out_dir(&args.out)?;
    let mut run = Run::new("case");
    for path in [&args.dataset, &args.projects, &args.mapping, &args.industrial, &args.industrial_projects]
        .into_iter()
        .flatten()
    {
        run.input(path);
    }
    run.input(&args.table);
    let result = (|| {
        let config = RunConfig::resolve(&args.training, args.protocol.as_deref())?;
        run.config(config.to_json());
        let protocol: Protocol = config
            .protocol
            .as_deref()
            .ok_or_else(|| fail("config", "no protocol: pass --protocol or set it in the config file"))?
            .parse()
            .stage("config")?;

        let table = load_table(&args.table, "table")?;
        let needs_mapping = args.dataset.is_some() || args.industrial.is_some();
        let mapping = if needs_mapping {
            Some(load_mapping(args.mapping.as_deref(), "mapping")?)
        } else {
            None
        };
        let published = match (&args.dataset, &args.projects) {
            (Some(d), _) => transfer_dataset(d, mapping.as_ref().expect("mapping loaded"))?,
            (None, Some(p)) => load_projects(p, "transfer")?,
            (None, None) => return Err(fail("input", "pass --dataset or --projects")),
        };
        let industrial = match (&args.industrial, &args.industrial_projects) {
            (Some(d), _) => Some(transfer_dataset(d, mapping.as_ref().expect("mapping loaded"))?),
            (None, Some(p)) => Some(load_projects(p, "transfer")?),
            (None, None) => None,
        };

        let result = run_case(&published, industrial.as_deref(), &table, protocol, &config.case_config())
            .map_err(|e| {
                let stage = match e {
                    seer_nf::Error::Protocol(_) => "split",
                    _ => "train",
                };
                Failure {
                    code: 1,
                    stage,
                    error: e.into(),
                }
            })?;

        let months = config.months_per_year;
        for e in &result.evaluations {
            run.output(format!("{}_baseline.csv", e.name), e.baseline.rows_csv(months));
            run.output(format!("{}_baseline_summary.csv", e.name), e.baseline.summary_csv());
            run.output(format!("{}_calibrated.csv", e.name), e.calibrated.rows_csv(months));
            run.output(format!("{}_calibrated_summary.csv", e.name), e.calibrated.summary_csv());
            run.output(format!("{}_change.csv", e.name), e.change.to_csv());
            run.output(format!("{}_report.txt", e.name), case_text(e));
        }
        run.output("training_set.csv", result.training_csv());
        run.output("trace.csv", result.trace.to_csv());
        let origin = format!("calibrated from {} under protocol {protocol}", args.table.display());
        let provenance = calibrated_provenance(origin, &result.trace, &config);
        run.output("calibrated_table.toml", result.trace.table.to_toml_string(Some(&provenance)));
        let file = CaseReportFile {
            protocol: protocol.to_string(),
            training_ids: result.training_ids.clone(),
            stop: stop_name(result.trace.stop),
            epochs_run: result.trace.epochs.len(),
            initial_loss: result.trace.initial_loss,
            final_loss: result.trace.final_loss(),
            evaluations: result.evaluations.clone(),
        };
        run.output(
            "report.json",
            serde_json::to_string_pretty(&file).expect("report serializes") + "\n",
        );
        for e in &result.evaluations {
            print!("{}", e.change.to_text(&format!("{} / change (calibrated - baseline)", e.name)));
        }
        Ok(())
    })();
    run.finish(&dir, result)
}

pub fn report(args: &ReportArgs) -> Outcome<()> {
    require_file(&args.input, "report", "report")?;
    let text = std::fs::read_to_string(&args.input).stage("report")?;
    if let Ok(file) = serde_json::from_str::<CaseReportFile>(&text) {
        match args.format {
            Format::Json => print!("{text}"),
            Format::Text => {
                println!(
                    "protocol {}: trained on {} projects, {} epochs ({}), loss {} -> {}\n",
                    file.protocol,
                    file.training_ids.len(),
                    file.epochs_run,
                    file.stop,
                    file.initial_loss,
                    file.final_loss
                );
                for e in &file.evaluations {
                    println!("{}", case_text(e));
                }
            }
            Format::Csv => {
                println!("evaluation,metric,baseline,calibrated,change");
                for e in &file.evaluations {
                    for r in &e.change.rows {
                        println!("{},{},{},{},{}", e.name, r.metric, r.baseline, r.calibrated, r.change);
                    }
                }
            }
        }
        return Ok(());
    }
    let report: EvaluationReport = serde_json::from_str(&text).stage("report")?;
    print!("{}", render(&report, "evaluation", args.format, args.months_per_year));
    Ok(())
}
