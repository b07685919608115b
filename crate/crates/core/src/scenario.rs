//! Experiment configuration: mirrors, the three canonical cases and the
//! frequency plan used to attribute spectral lines to mirrors.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five vibrating mirrors. `A`, `B` sit inside the inner interferometer,
/// `E`, `F` route light into and out of it, `C` is on the free arm.
///
/// The derived ordering `A < B < C < E < F` is the order of every per-mirror
/// vector in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MirrorId {
    A,
    B,
    C,
    E,
    F,
}

impl MirrorId {
    pub const ALL: [MirrorId; 5] = [
        MirrorId::A,
        MirrorId::B,
        MirrorId::C,
        MirrorId::E,
        MirrorId::F,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Bit of this mirror in a mode label; `A` is the most significant of the
    /// five bits so that the label `10000` reads as the integer 16.
    pub fn bit(self) -> u8 {
        1 << (4 - self.index())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MirrorId::A => "A",
            MirrorId::B => "B",
            MirrorId::C => "C",
            MirrorId::E => "E",
            MirrorId::F => "F",
        }
    }
}

impl fmt::Display for MirrorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MirrorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(MirrorId::A),
            "B" | "b" => Ok(MirrorId::B),
            "C" | "c" => Ok(MirrorId::C),
            "E" | "e" => Ok(MirrorId::E),
            "F" | "f" => Ok(MirrorId::F),
            other => Err(Error::UnknownMirror(other.to_string())),
        }
    }
}

/// Canonical configurations: (a) φ = π with arm C open, (b) φ = 0 with arm C
/// open, (c) φ = 0 with arm C blocked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseId {
    A,
    B,
    C,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::A, CaseId::B, CaseId::C];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::A => "a",
            CaseId::B => "b",
            CaseId::C => "c",
        }
    }

    /// `(phi, kappa)` for the case.
    pub fn phase_and_transmission(self) -> (f64, f64) {
        match self {
            CaseId::A => (PI, 1.0),
            CaseId::B => (0.0, 1.0),
            CaseId::C => (0.0, 0.0),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(CaseId::A),
            "b" | "B" => Ok(CaseId::B),
            "c" | "C" => Ok(CaseId::C),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }
}

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_DURATION: f64 = 1.0;
pub const DEFAULT_SAMPLE_RATE: f64 = 1024.0;
pub const DEFAULT_SERIES_ORDER: usize = 4;
pub const DEFAULT_FREQUENCIES: [(MirrorId, f64); 5] = [
    (MirrorId::A, 31.0),
    (MirrorId::B, 37.0),
    (MirrorId::C, 41.0),
    (MirrorId::E, 47.0),
    (MirrorId::F, 59.0),
];

const FREQ_TOL: f64 = 1e-9;

/// Full experiment configuration. Immutable once built; every constructor
/// validates.
///
/// A mirror missing from `mirror_freq` does not vibrate. A mirror missing from
/// the explicit amplitude map vibrates with amplitude `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    phi: f64,
    kappa: f64,
    epsilon: f64,
    mirror_freq: BTreeMap<MirrorId, f64>,
    vib_amplitude: BTreeMap<MirrorId, f64>,
    duration: f64,
    sample_rate: f64,
    series_order: usize,
}

/// Wire form of [`Scenario`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    phi: f64,
    kappa: f64,
    epsilon: f64,
    mirror_freq: BTreeMap<MirrorId, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vib_amplitude: Option<BTreeMap<MirrorId, f64>>,
    duration: f64,
    sample_rate: f64,
    series_order: usize,
}

impl Scenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        phi: f64,
        kappa: f64,
        epsilon: f64,
        mirror_freq: BTreeMap<MirrorId, f64>,
        vib_amplitude: BTreeMap<MirrorId, f64>,
        duration: f64,
        sample_rate: f64,
        series_order: usize,
    ) -> Result<Self> {
        let s = Scenario {
            phi,
            kappa,
            epsilon,
            mirror_freq,
            vib_amplitude,
            duration,
            sample_rate,
            series_order,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn series_order(&self) -> usize {
        self.series_order
    }

    pub fn mirror_freq(&self) -> &BTreeMap<MirrorId, f64> {
        &self.mirror_freq
    }

    pub fn freq(&self, mirror: MirrorId) -> Option<f64> {
        self.mirror_freq.get(&mirror).copied()
    }

    /// Vibration amplitude of `mirror`, defaulting to `epsilon`.
    pub fn amplitude(&self, mirror: MirrorId) -> f64 {
        self.vib_amplitude
            .get(&mirror)
            .copied()
            .unwrap_or(self.epsilon)
    }

    /// Displacement `d_i(t) = amplitude · sin(2π f_i t)`; zero for mirrors
    /// without a frequency.
    pub fn shift(&self, mirror: MirrorId, t: f64) -> f64 {
        match self.freq(mirror) {
            Some(f) => self.amplitude(mirror) * (2.0 * PI * f * t).sin(),
            None => 0.0,
        }
    }

    /// All five displacements at `t`, in mirror order.
    pub fn shifts(&self, t: f64) -> [f64; 5] {
        MirrorId::ALL.map(|m| self.shift(m, t))
    }

    /// Number of samples in the observation window.
    pub fn sample_count(&self) -> usize {
        (self.sample_rate * self.duration).round() as usize
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let mut s = self.clone();
        s.epsilon = epsilon;
        s.validate()?;
        Ok(s)
    }

    pub fn with_phase(&self, phi: f64, kappa: f64) -> Result<Self> {
        let mut s = self.clone();
        s.phi = phi;
        s.kappa = kappa;
        s.validate()?;
        Ok(s)
    }

    /// Sets (or with `None`, removes) the vibration frequency of one mirror.
    pub fn with_freq(&self, mirror: MirrorId, freq: Option<f64>) -> Result<Self> {
        let mut s = self.clone();
        match freq {
            Some(f) => s.mirror_freq.insert(mirror, f),
            None => s.mirror_freq.remove(&mirror),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_amplitude(&self, mirror: MirrorId, amplitude: f64) -> Result<Self> {
        let mut s = self.clone();
        s.vib_amplitude.insert(mirror, amplitude);
        s.validate()?;
        Ok(s)
    }

    /// Keeps only `mirror` vibrating; all other mirrors get zero amplitude.
    pub fn with_only_mirror(&self, mirror: MirrorId) -> Result<Self> {
        let mut s = self.clone();
        for m in MirrorId::ALL {
            if m != mirror {
                s.vib_amplitude.insert(m, 0.0);
            }
        }
        s.validate()?;
        Ok(s)
    }

    pub fn with_window(&self, duration: f64, sample_rate: f64) -> Result<Self> {
        let mut s = self.clone();
        s.duration = duration;
        s.sample_rate = sample_rate;
        s.validate()?;
        Ok(s)
    }

    /// Replaces the frequency plan and window together, validating once.
    pub fn with_plan(
        &self,
        mirror_freq: BTreeMap<MirrorId, f64>,
        duration: f64,
        sample_rate: f64,
    ) -> Result<Self> {
        let mut s = self.clone();
        s.mirror_freq = mirror_freq;
        s.duration = duration;
        s.sample_rate = sample_rate;
        s.validate()?;
        Ok(s)
    }

    pub fn with_series_order(&self, order: usize) -> Result<Self> {
        let mut s = self.clone();
        s.series_order = order;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if !self.phi.is_finite() {
            return bad(format!("phi must be finite, got {}", self.phi));
        }
        if self.kappa != 0.0 && self.kappa != 1.0 {
            return bad(format!("kappa must be 0 or 1, got {}", self.kappa));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.1) {
            return bad(format!(
                "epsilon must lie in (0, 0.1), got {}",
                self.epsilon
            ));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return bad(format!("duration must be positive, got {}", self.duration));
        }
        if !(self.sample_rate > 0.0 && self.sample_rate.is_finite()) {
            return bad(format!(
                "sample_rate must be positive, got {}",
                self.sample_rate
            ));
        }
        let samples = self.sample_rate * self.duration;
        if (samples - samples.round()).abs() > FREQ_TOL * samples.max(1.0) || samples.round() < 1.0
        {
            return bad(format!(
                "sample_rate × duration must be a positive integer, got {samples}"
            ));
        }
        if self.series_order < 3 {
            return bad(format!(
                "series_order must be at least 3, got {}",
                self.series_order
            ));
        }
        for (m, &a) in &self.vib_amplitude {
            if !(a >= 0.0 && a.is_finite()) {
                return bad(format!("vibration amplitude of {m} must be >= 0, got {a}"));
            }
        }
        let mut f_max: f64 = 0.0;
        for (m, &f) in &self.mirror_freq {
            if !(f > 0.0 && f.is_finite()) {
                return bad(format!("frequency of {m} must be positive, got {f}"));
            }
            let cycles = f * self.duration;
            if (cycles - cycles.round()).abs() > FREQ_TOL * cycles.max(1.0) {
                return bad(format!(
                    "frequency of {m} ({f} Hz) is not an integer number of cycles in {} s",
                    self.duration
                ));
            }
            f_max = f_max.max(f);
        }
        // max(2 f_i, f_i + f_j) is attained at 2 f_max
        if self.sample_rate <= 4.0 * 2.0 * f_max {
            return bad(format!(
                "sample_rate {} must exceed 4 × {} Hz (highest doubled tone)",
                self.sample_rate,
                2.0 * f_max
            ));
        }
        Ok(())
    }

    /// Only explicit amplitude overrides are written; the rest follow
    /// `epsilon` when read back.
    pub fn to_json(&self) -> Result<String> {
        let vib = (!self.vib_amplitude.is_empty()).then(|| self.vib_amplitude.clone());
        let doc = ScenarioDoc {
            phi: self.phi,
            kappa: self.kappa,
            epsilon: self.epsilon,
            mirror_freq: self.mirror_freq.clone(),
            vib_amplitude: vib,
            duration: self.duration,
            sample_rate: self.sample_rate,
            series_order: self.series_order,
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ScenarioDoc = serde_json::from_str(text)?;
        Scenario::new(
            doc.phi,
            doc.kappa,
            doc.epsilon,
            doc.mirror_freq,
            doc.vib_amplitude.unwrap_or_default(),
            doc.duration,
            doc.sample_rate,
            doc.series_order,
        )
    }
}

/// One of the three canonical cases with default plumbing values.
pub fn standard_case(case: CaseId) -> Scenario {
    let (phi, kappa) = case.phase_and_transmission();
    Scenario {
        phi,
        kappa,
        epsilon: DEFAULT_EPSILON,
        mirror_freq: DEFAULT_FREQUENCIES.into_iter().collect(),
        vib_amplitude: BTreeMap::new(),
        duration: DEFAULT_DURATION,
        sample_rate: DEFAULT_SAMPLE_RATE,
        series_order: DEFAULT_SERIES_ORDER,
    }
}

/// Parses a case id and returns its standard scenario.
pub fn standard_case_by_name(name: &str) -> Result<Scenario> {
    Ok(standard_case(name.parse()?))
}

/// A spectral line the detectors can produce from the mirror vibrations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tone {
    Fundamental {
        mirror: MirrorId,
        freq: f64,
    },
    Double {
        mirror: MirrorId,
        freq: f64,
    },
    Sum {
        first: MirrorId,
        second: MirrorId,
        freq: f64,
    },
    Difference {
        first: MirrorId,
        second: MirrorId,
        freq: f64,
    },
}

impl Tone {
    pub fn freq(&self) -> f64 {
        match *self {
            Tone::Fundamental { freq, .. }
            | Tone::Double { freq, .. }
            | Tone::Sum { freq, .. }
            | Tone::Difference { freq, .. } => freq,
        }
    }
}

impl fmt::Display for Tone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Tone::Fundamental { mirror, freq } => write!(f, "f_{mirror} = {freq} Hz"),
            Tone::Double { mirror, freq } => write!(f, "2·f_{mirror} = {freq} Hz"),
            Tone::Sum {
                first,
                second,
                freq,
            } => write!(f, "f_{first} + f_{second} = {freq} Hz"),
            Tone::Difference {
                first,
                second,
                freq,
            } => {
                write!(f, "|f_{first} - f_{second}| = {freq} Hz")
            }
        }
    }
}

/// A tone landing on a frequency used for attribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Collision {
    pub tone: Tone,
    pub target: Tone,
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} collides with {}", self.tone, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollisionReport {
    pub tones: Vec<Tone>,
    pub collisions: Vec<Collision>,
}

impl CollisionReport {
    pub fn is_clean(&self) -> bool {
        self.collisions.is_empty()
    }
}

fn same_freq(a: f64, b: f64) -> bool {
    (a - b).abs() <= FREQ_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Enumerates fundamentals, doubles and pairwise sum/difference tones and
/// flags every combination tone or fundamental that lands on an attribution
/// frequency (`f_m` for the quad-cell, `2 f_m` for total intensity).
pub fn check_frequency_plan(scenario: &Scenario) -> CollisionReport {
    let freqs: Vec<(MirrorId, f64)> = scenario.mirror_freq.iter().map(|(&m, &f)| (m, f)).collect();

    let fundamentals: Vec<Tone> = freqs
        .iter()
        .map(|&(mirror, freq)| Tone::Fundamental { mirror, freq })
        .collect();
    let doubles: Vec<Tone> = freqs
        .iter()
        .map(|&(mirror, freq)| Tone::Double {
            mirror,
            freq: 2.0 * freq,
        })
        .collect();
    let mut combinations = Vec::new();
    for (i, &(first, fi)) in freqs.iter().enumerate() {
        for &(second, fj) in &freqs[i + 1..] {
            combinations.push(Tone::Sum {
                first,
                second,
                freq: fi + fj,
            });
            combinations.push(Tone::Difference {
                first,
                second,
                freq: (fi - fj).abs(),
            });
        }
    }

    let mut collisions = Vec::new();
    for &tone in &combinations {
        for &target in doubles.iter().chain(&fundamentals) {
            if same_freq(tone.freq(), target.freq()) {
                collisions.push(Collision { tone, target });
            }
        }
    }
    for (k, &tone) in fundamentals.iter().enumerate() {
        for &target in &doubles {
            if same_freq(tone.freq(), target.freq()) {
                collisions.push(Collision { tone, target });
            }
        }
        for &target in &fundamentals[k + 1..] {
            if same_freq(tone.freq(), target.freq()) {
                collisions.push(Collision { tone, target });
            }
        }
    }

    let mut tones = fundamentals;
    tones.extend(doubles);
    tones.extend(combinations);
    CollisionReport { tones, collisions }
}
