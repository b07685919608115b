//! Resolution of command-line flags into a scenario and a set of output
//! artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use mzi_witness::scenario::standard_case;
use mzi_witness::spectra::{Detector, Model};
use mzi_witness::{CaseId, MirrorId, Scenario};

/// Scenario flags shared by `spectrum` and `plan-check`.
#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Canonical case: a (φ = π), b (φ = 0), c (arm C blocked)
    #[arg(long, required_unless_present = "scenario")]
    pub case: Option<CaseId>,

    /// Scenario JSON file; flags given alongside it take precedence
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,

    /// Kick / vibration amplitude ε
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Mirror frequency override, e.g. A=31; use A=none to stop a mirror
    #[arg(long = "freq", value_name = "MIRROR=HZ", value_parser = parse_freq)]
    pub freqs: Vec<(MirrorId, Option<f64>)>,

    /// Observation window in seconds
    #[arg(long)]
    pub duration: Option<f64>,

    /// Sample rate in Hz
    #[arg(long)]
    pub rate: Option<f64>,
}

fn parse_freq(s: &str) -> Result<(MirrorId, Option<f64>), String> {
    let (m, f) = s
        .split_once('=')
        .ok_or_else(|| format!("expected MIRROR=HZ, got `{s}`"))?;
    let mirror: MirrorId = m.parse().map_err(|e| format!("{e}"))?;
    let f = f.trim();
    if f.eq_ignore_ascii_case("none") {
        return Ok((mirror, None));
    }
    let hz: f64 = f.parse().map_err(|_| format!("`{f}` is not a frequency"))?;
    Ok((mirror, Some(hz)))
}

impl ScenarioArgs {
    /// Defaults, then the scenario file, then individual flags.
    pub fn resolve(&self) -> anyhow::Result<Scenario> {
        let mut s = match &self.scenario {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading scenario file {}", path.display()))?;
                Scenario::from_json(&text)
                    .with_context(|| format!("parsing scenario file {}", path.display()))?
            }
            None => standard_case(self.case.expect("clap enforces --case or --scenario")),
        };
        if let (Some(case), Some(_)) = (self.case, &self.scenario) {
            let (phi, kappa) = case.phase_and_transmission();
            s = s.with_phase(phi, kappa)?;
        }
        if let Some(eps) = self.epsilon {
            s = s.with_epsilon(eps)?;
        }
        if !self.freqs.is_empty() || self.duration.is_some() || self.rate.is_some() {
            let mut plan: BTreeMap<MirrorId, f64> = s.mirror_freq().clone();
            for &(m, f) in &self.freqs {
                match f {
                    Some(f) => plan.insert(m, f),
                    None => plan.remove(&m),
                };
            }
            let duration = self.duration.unwrap_or(s.duration());
            let rate = self.rate.unwrap_or(s.sample_rate());
            s = s.with_plan(plan, duration, rate)?;
        }
        Ok(s)
    }
}

/// Everything one `spectrum` run reads and writes.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub scenario: Scenario,
    pub detector: Detector,
    pub model: Model,
    pub out_dir: PathBuf,
    pub overwrite: bool,
}

impl RunManifest {
    pub const TIMESERIES: &'static str = "timeseries.csv";
    pub const SPECTRUM: &'static str = "spectrum.csv";
    pub const ATTRIBUTION: &'static str = "attribution.json";
    pub const BARS: &'static str = "bars.csv";

    pub fn artifact(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn artifacts(&self) -> [PathBuf; 4] {
        [
            Self::TIMESERIES,
            Self::SPECTRUM,
            Self::ATTRIBUTION,
            Self::BARS,
        ]
        .map(|n| self.artifact(n))
    }

    /// Fails if any artifact exists and overwriting was not requested.
    pub fn check_targets(&self) -> anyhow::Result<()> {
        if self.overwrite {
            return Ok(());
        }
        let existing: Vec<String> = self
            .artifacts()
            .iter()
            .filter(|p| p.exists())
            .map(|p| p.display().to_string())
            .collect();
        if !existing.is_empty() {
            bail!(
                "refusing to overwrite {} (pass --force)",
                existing.join(", ")
            );
        }
        Ok(())
    }

    pub fn write(&self, name: &str, contents: &str) -> anyhow::Result<()> {
        let path = self.artifact(name);
        write_file(&path, contents)
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(case: Option<CaseId>) -> ScenarioArgs {
        ScenarioArgs {
            case,
            scenario: None,
            epsilon: None,
            freqs: vec![],
            duration: None,
            rate: None,
        }
    }

    #[test]
    fn freq_flag_parsing() {
        assert_eq!(parse_freq("A=31").unwrap(), (MirrorId::A, Some(31.0)));
        assert_eq!(parse_freq("f=none").unwrap(), (MirrorId::F, None));
        assert!(parse_freq("A31").is_err());
        assert!(parse_freq("G=31").is_err());
        assert!(parse_freq("A=fast").is_err());
    }

    #[test]
    fn flags_override_defaults() {
        let mut a = args(Some(CaseId::B));
        a.epsilon = Some(0.02);
        a.freqs = vec![(MirrorId::A, Some(29.0)), (MirrorId::F, None)];
        a.duration = Some(2.0);
        let s = a.resolve().unwrap();
        assert_eq!(s.epsilon(), 0.02);
        assert_eq!(s.freq(MirrorId::A), Some(29.0));
        assert_eq!(s.freq(MirrorId::F), None);
        assert_eq!(s.duration(), 2.0);
        assert_eq!(s.sample_rate(), 1024.0);
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let file = standard_case(CaseId::A).with_epsilon(0.03).unwrap();
        fs::write(&path, file.to_json().unwrap()).unwrap();

        let mut a = args(None);
        a.scenario = Some(path.clone());
        let s = a.resolve().unwrap();
        assert_eq!(s.epsilon(), 0.03);
        assert_eq!(s.phi(), std::f64::consts::PI);

        a.case = Some(CaseId::C);
        a.epsilon = Some(0.01);
        let s = a.resolve().unwrap();
        assert_eq!((s.phi(), s.kappa()), (0.0, 0.0));
        assert_eq!(s.epsilon(), 0.01);
        assert_eq!(s.amplitude(MirrorId::E), 0.01);
    }

    #[test]
    fn epsilon_flag_keeps_custom_amplitudes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let file = standard_case(CaseId::B)
            .with_only_mirror(MirrorId::A)
            .unwrap();
        fs::write(&path, file.to_json().unwrap()).unwrap();

        let mut a = args(None);
        a.scenario = Some(path);
        a.epsilon = Some(0.02);
        let s = a.resolve().unwrap();
        assert_eq!(s.amplitude(MirrorId::A), 0.02);
        assert_eq!(s.amplitude(MirrorId::B), 0.0);
    }

    #[test]
    fn invalid_override_is_rejected() {
        let mut a = args(Some(CaseId::A));
        a.epsilon = Some(0.5);
        assert!(a.resolve().is_err());
        let mut a = args(Some(CaseId::A));
        a.duration = Some(0.25);
        assert!(a.resolve().is_err());
    }

    #[test]
    fn refuses_existing_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = RunManifest {
            scenario: standard_case(CaseId::B),
            detector: Detector::Total,
            model: Model::Exact,
            out_dir: dir.path().to_path_buf(),
            overwrite: false,
        };
        m.check_targets().unwrap();
        m.write(RunManifest::BARS, "x").unwrap();
        assert!(m.check_targets().is_err());
        m.overwrite = true;
        m.check_targets().unwrap();
    }
}
