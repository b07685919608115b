//! `mzi-witness`: Fock probability tables, detector spectra and the
//! validation suite for the nested Mach-Zehnder interferometer.

mod manifest;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mzi_witness::fock::{
    bcjlss_output_state, bcjlss_table, scenario_probability_table, ProbabilityTable,
};
use mzi_witness::scenario::{
    check_frequency_plan, standard_case, DEFAULT_EPSILON, DEFAULT_SERIES_ORDER,
};
use mzi_witness::spectra::{attribute_peaks, power_spectrum, sample_detector, Detector, Model};
use mzi_witness::validation::{self, ValidationConfig};
use mzi_witness::{CaseId, MirrorId};

use manifest::{RunManifest, ScenarioArgs};

#[derive(Debug, Parser)]
#[command(
    name = "mzi-witness",
    version,
    about = "Nested Mach-Zehnder which-path witness simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-mirror probabilities at the detector port
    Fock(FockArgs),
    /// Sample a detector, take its power spectrum and attribute lines to mirrors
    Spectrum(SpectrumArgs),
    /// List the tones of a frequency plan and report collisions
    PlanCheck(PlanCheckArgs),
    /// Run the full validation suite
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Procedure {
    /// Incoherent sum of |amplitude|² over modes with the mirror's quantum
    Projector,
    /// Squared overlap with the coherent sum of those modes
    Bcjlss,
}

#[derive(Debug, clap::Args)]
struct FockArgs {
    #[arg(long)]
    case: CaseId,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Truncation order of the ε series
    #[arg(long, default_value_t = DEFAULT_SERIES_ORDER)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Procedure::Projector)]
    procedure: Procedure,
    /// Print both procedures and their entrywise ratio
    #[arg(long)]
    compare: bool,
    /// JSON instead of a text table
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct SpectrumArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value = "total")]
    detector: Detector,
    #[arg(long, default_value = "exact")]
    model: Model,
    /// Output directory (created if missing)
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Overwrite existing artifacts
    #[arg(long)]
    force: bool,
}

#[derive(Debug, clap::Args)]
struct PlanCheckArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct ValidateArgs {
    /// ε for the beam and spectral checks
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long)]
    json: bool,
}

/// Error tagged with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_USAGE,
            error: error.into(),
        }
    }

    fn failed(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_FAILURE,
            error: error.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fock(args) => cmd_fock(&args),
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::PlanCheck(args) => cmd_plan_check(&args),
        Command::Validate(args) => cmd_validate(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn table_json(t: &ProbabilityTable) -> serde_json::Value {
    serde_json::to_value(t).expect("probability tables serialize")
}

fn ratio(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| a / b)
}

fn cmd_fock(args: &FockArgs) -> CmdResult {
    let scenario = standard_case(args.case)
        .with_epsilon(args.epsilon)
        .and_then(|s| s.with_series_order(args.order))
        .map_err(Failure::usage)?;
    let projector = scenario_probability_table(&scenario).map_err(Failure::failed)?;
    let bcjlss = bcjlss_table(&bcjlss_output_state(scenario.phi(), scenario.kappa()));

    let rows: Vec<(String, f64, f64)> = MirrorId::ALL
        .iter()
        .map(|&m| (m.to_string(), projector.get(m), bcjlss.get(m)))
        .chain(std::iter::once((
            "zero".to_string(),
            projector.zero,
            bcjlss.zero,
        )))
        .collect();

    if args.json {
        let value = if args.compare {
            let ratios: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(k, p, b)| (k.clone(), serde_json::json!(ratio(*b, *p))))
                .collect();
            serde_json::json!({
                "case": args.case,
                "epsilon": args.epsilon,
                "projector": table_json(&projector),
                "bcjlss": table_json(&bcjlss),
                "bcjlss_over_projector": ratios,
            })
        } else {
            let table = match args.procedure {
                Procedure::Projector => &projector,
                Procedure::Bcjlss => &bcjlss,
            };
            serde_json::json!({
                "case": args.case,
                "epsilon": args.epsilon,
                "procedure": args.procedure.to_possible_value().unwrap().get_name(),
                "probabilities": table_json(table),
            })
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&value).map_err(Failure::failed)?
        );
        return Ok(());
    }

    let mut out = format!("case {}  epsilon {:e}\n", args.case, args.epsilon);
    if args.compare {
        writeln!(
            out,
            "{:<6}{:>16}{:>16}{:>16}",
            "mode", "projector", "bcjlss", "ratio"
        )
        .unwrap();
        for (k, p, b) in &rows {
            let r = ratio(*b, *p).map_or("-".to_string(), |r| format!("{r:.6e}"));
            writeln!(out, "{k:<6}{p:>16.6e}{b:>16.6e}{r:>16}").unwrap();
        }
    } else {
        let name = args
            .procedure
            .to_possible_value()
            .unwrap()
            .get_name()
            .to_string();
        writeln!(out, "{:<6}{:>16}", "mode", name).unwrap();
        for (k, p, b) in &rows {
            let v = match args.procedure {
                Procedure::Projector => p,
                Procedure::Bcjlss => b,
            };
            writeln!(out, "{k:<6}{v:>16.6e}").unwrap();
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs) -> CmdResult {
    let scenario = args.scenario.resolve().map_err(Failure::usage)?;
    let run = RunManifest {
        scenario,
        detector: args.detector,
        model: args.model,
        out_dir: args.out.clone(),
        overwrite: args.force,
    };
    run.check_targets().map_err(Failure::usage)?;

    let ts = sample_detector(&run.scenario, run.detector, run.model).map_err(Failure::failed)?;
    let spectrum = power_spectrum(&ts).map_err(Failure::failed)?;
    let report = attribute_peaks(&spectrum, &run.scenario, run.detector, run.model)
        .map_err(Failure::failed)?;
    let report_json = report.to_json().map_err(Failure::failed)?;

    fs::create_dir_all(&run.out_dir).map_err(|e| {
        Failure::failed(
            anyhow::Error::new(e).context(format!("creating {}", run.out_dir.display())),
        )
    })?;
    run.write(RunManifest::TIMESERIES, &ts.to_csv())
        .map_err(Failure::failed)?;
    run.write(RunManifest::SPECTRUM, &spectrum.to_csv())
        .map_err(Failure::failed)?;
    run.write(RunManifest::ATTRIBUTION, &format!("{report_json}\n"))
        .map_err(Failure::failed)?;
    run.write(RunManifest::BARS, &report.bar_chart_csv())
        .map_err(Failure::failed)?;

    if let Some(note) = &report.note {
        eprintln!("warning: {note}");
    }
    println!("{} detector, {} model", run.detector, run.model);
    println!(
        "{:<7}{:>10}{:>16}{:>10}",
        "mirror", "line_hz", "power", "bar"
    );
    for (m, bar) in report.bar_chart() {
        match report.mirrors.get(&m) {
            Some(line) => println!("{m:<7}{:>10}{:>16.6e}{bar:>10.4}", line.freq, line.power),
            None => println!("{m:<7}{:>10}{:>16}{:>10}", "-", "-", "-"),
        }
    }
    if !report.residual.is_empty() {
        println!("{} residual line(s) above threshold", report.residual.len());
    }
    for p in run.artifacts() {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_plan_check(args: &PlanCheckArgs) -> CmdResult {
    let scenario = args.scenario.resolve().map_err(Failure::usage)?;
    let report = check_frequency_plan(&scenario);
    if args.json {
        let text = serde_json::to_string_pretty(&report).map_err(Failure::failed)?;
        println!("{text}");
    } else {
        for tone in &report.tones {
            println!("{tone}");
        }
        if report.is_clean() {
            println!("no collisions");
        }
        for c in &report.collisions {
            println!("COLLISION: {c}");
        }
    }
    if report.is_clean() {
        Ok(())
    } else {
        Err(Failure::failed(anyhow::anyhow!(
            "{} collision(s) in the frequency plan",
            report.collisions.len()
        )))
    }
}

fn cmd_validate(args: &ValidateArgs) -> CmdResult {
    if !(args.epsilon > 0.0 && args.epsilon < 0.1) {
        return Err(Failure::usage(anyhow::anyhow!(
            "epsilon must lie in (0, 0.1), got {}",
            args.epsilon
        )));
    }
    let config = ValidationConfig {
        epsilon: args.epsilon,
        ..Default::default()
    };
    let report = validation::run(&config);
    if args.json {
        let text = serde_json::to_string_pretty(&report).map_err(Failure::failed)?;
        println!("{text}");
    } else {
        for c in &report.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            println!("{status}  {}: {}", c.name, c.detail);
        }
        let failed = report.failures().count();
        println!(
            "{} of {} checks passed in {:.2} s",
            report.checks.len() - failed,
            report.checks.len(),
            report.seconds
        );
    }
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(Failure::failed(anyhow::anyhow!(
            "failed: {}",
            names.join("; ")
        )))
    }
}
