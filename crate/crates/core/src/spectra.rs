//! Detector time series, periodograms and attribution of spectral lines to
//! mirrors.
//!
//! Every mirror frequency completes an integer number of cycles in the
//! window, so a rectangular window puts each tone exactly on a bin and the
//! attribution reads one bin per mirror.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::beam::{field_at, linearized_field_intensity, quadcell_signal, total_intensity};
use crate::error::{Error, Result};
use crate::scenario::{check_frequency_plan, MirrorId, Scenario};

/// Residual lines below this fraction of the strongest attributed line are
/// not reported.
pub const RESIDUAL_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    /// Spatially integrated intensity `I_T(t)`.
    Total,
    /// Split-detector difference `ΔI(t)`.
    Quad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Exact,
    Linearized,
}

impl Detector {
    pub fn as_str(self) -> &'static str {
        match self {
            Detector::Total => "total",
            Detector::Quad => "quad",
        }
    }

    /// Frequency at which a mirror vibrating at `f` shows up.
    pub fn attribution_freq(self, f: f64) -> f64 {
        match self {
            Detector::Total => 2.0 * f,
            Detector::Quad => f,
        }
    }
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Exact => "exact",
            Model::Linearized => "linearized",
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Detector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "total" => Ok(Detector::Total),
            "quad" => Ok(Detector::Quad),
            other => Err(format!(
                "unknown detector `{other}` (expected total or quad)"
            )),
        }
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Model::Exact),
            "linearized" => Ok(Model::Linearized),
            other => Err(format!(
                "unknown model `{other}` (expected exact or linearized)"
            )),
        }
    }
}

/// Uniformly sampled real signal starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    sample_rate: f64,
    duration: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, sample_rate: f64, duration: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidSeries("no samples".into()));
        }
        if !(sample_rate > 0.0 && duration > 0.0) {
            return Err(Error::InvalidSeries(format!(
                "sample_rate {sample_rate} and duration {duration} must be positive"
            )));
        }
        let expected = (sample_rate * duration).round() as usize;
        if samples.len() != expected {
            return Err(Error::InvalidSeries(format!(
                "{} samples do not cover {duration} s at {sample_rate} Hz ({expected} expected)",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("sample {i} is not finite")));
        }
        Ok(TimeSeries {
            samples,
            sample_rate,
            duration,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 / self.sample_rate
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Mean square of the mean-removed signal.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / self.samples.len() as f64
    }

    /// `t,value` rows with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (n, v) in self.samples.iter().enumerate() {
            out.push_str(&format!("{:.16e},{:.16e}\n", self.time(n), v));
        }
        out
    }
}

/// Samples the chosen detector signal at `t_n = n / sample_rate`.
pub fn sample_detector(
    scenario: &Scenario,
    detector: Detector,
    model: Model,
) -> Result<TimeSeries> {
    scenario.validate()?;
    let n = scenario.sample_count();
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / scenario.sample_rate();
            match (detector, model) {
                (Detector::Total, Model::Exact) => total_intensity(&field_at(scenario, t)),
                (Detector::Quad, Model::Exact) => quadcell_signal(&field_at(scenario, t)),
                (Detector::Total, Model::Linearized) => {
                    linearized_field_intensity(scenario, t).total
                }
                (Detector::Quad, Model::Linearized) => linearized_field_intensity(scenario, t).quad,
            }
        })
        .collect();
    TimeSeries::new(samples, scenario.sample_rate(), scenario.duration())
}

/// One-sided periodogram with bins at `k / duration`, `k = 0..=N/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    pub bin_freqs: Vec<f64>,
    pub power: Vec<f64>,
    pub duration: f64,
}

impl PowerSpectrum {
    /// Bin index holding frequency `freq`, if it lies exactly on a bin.
    pub fn bin_of(&self, freq: f64) -> Option<usize> {
        let k = (freq * self.duration).round();
        if k < 0.0 || (k - freq * self.duration).abs() > 1e-9 * k.max(1.0) {
            return None;
        }
        let k = k as usize;
        (k < self.power.len()).then_some(k)
    }

    pub fn power_at(&self, freq: f64) -> Option<f64> {
        self.bin_of(freq).map(|k| self.power[k])
    }

    pub fn total_power(&self) -> f64 {
        self.power.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("freq_hz,power\n");
        for (f, p) in self.bin_freqs.iter().zip(&self.power) {
            out.push_str(&format!("{:.16e},{:.16e}\n", f, p));
        }
        out
    }
}

/// Mean-removed, rectangular-window periodogram. A tone `a sin(2π f t)` on a
/// bin carries power `a²/2`; the bins sum to the variance of the signal.
pub fn power_spectrum(ts: &TimeSeries) -> Result<PowerSpectrum> {
    let n = ts.samples.len();
    if n == 0 {
        return Err(Error::InvalidSeries("no samples".into()));
    }
    let mean = ts.mean();
    let mut buf: Vec<Complex64> = ts
        .samples
        .iter()
        .map(|&v| Complex64::new(v - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let nf = n as f64;
    let half = n / 2;
    let power = (0..=half)
        .map(|k| {
            let p = buf[k].norm_sqr() / (nf * nf);
            // DC and (for even N) Nyquist have no mirror image
            if k == 0 || (n.is_multiple_of(2) && k == half) {
                p
            } else {
                2.0 * p
            }
        })
        .collect();
    let bin_freqs = (0..=half).map(|k| k as f64 / ts.duration).collect();
    Ok(PowerSpectrum {
        bin_freqs,
        power,
        duration: ts.duration,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MirrorLine {
    pub freq: f64,
    pub power: f64,
}

/// Per-mirror line powers plus everything else above threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributionReport {
    #[serde(flatten)]
    pub mirrors: BTreeMap<MirrorId, MirrorLine>,
    pub residual: Vec<(f64, f64)>,
    pub detector: Detector,
    pub model: Model,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl AttributionReport {
    pub fn power(&self, mirror: MirrorId) -> f64 {
        self.mirrors.get(&mirror).map_or(0.0, |l| l.power)
    }

    pub fn max_power(&self) -> f64 {
        self.mirrors.values().map(|l| l.power).fold(0.0, f64::max)
    }

    /// Attributed powers scaled so the largest bar is 1 (all zero if nothing
    /// was attributed).
    pub fn bar_chart(&self) -> Vec<(MirrorId, f64)> {
        let max = self.max_power();
        MirrorId::ALL
            .iter()
            .map(|&m| (m, if max > 0.0 { self.power(m) / max } else { 0.0 }))
            .collect()
    }

    pub fn bar_chart_csv(&self) -> String {
        let mut out = String::from("mirror,attributed_power\n");
        for (m, v) in self.bar_chart() {
            out.push_str(&format!("{m},{v:.16e}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Reads each mirror's line (`2 f_i` for total intensity, `f_i` for the
/// quad-cell) and lists every other non-DC bin above
/// [`RESIDUAL_THRESHOLD`] × the strongest attributed line.
pub fn attribute_peaks(
    spectrum: &PowerSpectrum,
    scenario: &Scenario,
    detector: Detector,
    model: Model,
) -> Result<AttributionReport> {
    let plan = check_frequency_plan(scenario);
    if !plan.is_clean() {
        return Err(Error::FrequencyCollision(plan.collisions));
    }

    let mut mirrors = BTreeMap::new();
    let mut used = vec![false; spectrum.power.len()];
    for (&m, &f) in scenario.mirror_freq() {
        let freq = detector.attribution_freq(f);
        let k = spectrum.bin_of(freq).ok_or_else(|| {
            Error::InvalidSeries(format!("{freq} Hz for mirror {m} is not on a spectrum bin"))
        })?;
        used[k] = true;
        mirrors.insert(
            m,
            MirrorLine {
                freq,
                power: spectrum.power[k],
            },
        );
    }

    let max = mirrors.values().map(|l| l.power).fold(0.0, f64::max);
    let mut residual = Vec::new();
    let mut note = None;
    if max > 0.0 {
        let threshold = RESIDUAL_THRESHOLD * max;
        for (k, (&f, &p)) in spectrum.bin_freqs.iter().zip(&spectrum.power).enumerate() {
            if k > 0 && !used[k] && p > threshold {
                residual.push((f, p));
            }
        }
    } else {
        let what = if spectrum.total_power() == 0.0 {
            "spectrum is identically zero"
        } else {
            "no power at any attribution frequency"
        };
        note = Some(format!("{what}; {detector} detector, {model} model"));
    }

    Ok(AttributionReport {
        mirrors,
        residual,
        detector,
        model,
        note,
    })
}
