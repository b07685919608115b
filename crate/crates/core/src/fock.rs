//! Single-photon frequency-mode model.
//!
//! A photon bouncing off vibrating mirror `X` picks up a small amplitude ε in
//! the frequency mode of that mirror:
//!
//! ```text
//! c_L  ->  (c_L + ε c_{L|X}) / sqrt(1 + ε²)
//! ```
//!
//! where `L` is the five-bit occupancy label (order `A B C E F`). Amplitudes are
//! carried as [`EpsSeries`] so that the output state can be compared term by
//! term with the hand-expanded state, and probabilities are extracted only at
//! the end.
//!
//! Two read-out procedures are provided:
//!
//! * [`mode_projection_probability`]: the weight of the state in the subspace
//!   of labels carrying a mirror's bit (incoherent sum over orthogonal modes);
//! * [`bcjlss_witness`]: the squared scalar product with the unweighted sum of
//!   those labels (coherent sum, so orthogonal modes can cancel).
//!
//! Path amplitudes at the detector port are `κ/3` for arm C, `e^{iφ}/3` for the
//! inner path through A and `-1/3` for the inner path through B. These are the
//! unique choice that reproduces the C-, A- and B-mode terms of the expanded
//! output state; the zero-mode coefficient `e^{iφ}/3` and the E/F coefficients
//! `(e^{iφ} - 1)/3` then follow.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scenario::{CaseId, MirrorId, Scenario};
use crate::series::EpsSeries;

/// Coefficients closer than this are treated as equal in the transcription
/// comparison.
pub const COEFF_TOL: f64 = 1e-12;

/// Five-bit frequency-mode occupancy label. The value read as a binary number
/// with `A` as the leading digit, so `"10000"` is mode A and `"00100"` mode C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel(u8);

impl ModeLabel {
    pub const ZERO: ModeLabel = ModeLabel(0);

    pub fn from_bits(bits: u8) -> Result<Self> {
        if bits < 32 {
            Ok(ModeLabel(bits))
        } else {
            Err(Error::InvalidLabel(format!("{bits:#b}")))
        }
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn has(self, mirror: MirrorId) -> bool {
        self.0 & mirror.bit() != 0
    }

    pub fn with(self, mirror: MirrorId) -> Self {
        ModeLabel(self.0 | mirror.bit())
    }

    /// Number of mirror quanta in the label.
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn all() -> impl Iterator<Item = ModeLabel> {
        (0..32u8).map(ModeLabel)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:05b}", self.0)
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 5 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidLabel(s.to_string()));
        }
        Ok(ModeLabel(
            u8::from_str_radix(s, 2).expect("checked binary digits"),
        ))
    }
}

impl Serialize for ModeLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ModeLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Single-photon state over frequency modes. Absent labels have zero
/// amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    order: usize,
    amplitudes: BTreeMap<ModeLabel, EpsSeries>,
}

impl ModeState {
    pub fn empty(order: usize) -> Self {
        ModeState {
            order,
            amplitudes: BTreeMap::new(),
        }
    }

    /// `|1⟩_{00000}` with unit amplitude.
    pub fn vacuum(order: usize) -> Self {
        let mut s = Self::empty(order);
        s.amplitudes.insert(
            ModeLabel::ZERO,
            EpsSeries::constant(Complex64::new(1.0, 0.0), order),
        );
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Adds `series` to the amplitude of `label`.
    pub fn add_term(&mut self, label: ModeLabel, series: &EpsSeries) {
        let series = series.truncate(self.order);
        match self.amplitudes.get_mut(&label) {
            Some(existing) => *existing += &series,
            None => {
                self.amplitudes.insert(label, series);
            }
        }
    }

    pub fn amplitude(&self, label: ModeLabel) -> EpsSeries {
        self.amplitudes
            .get(&label)
            .cloned()
            .unwrap_or_else(|| EpsSeries::zero(self.order))
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeLabel, &EpsSeries)> {
        self.amplitudes.iter().map(|(&l, s)| (l, s))
    }

    /// Labels with a non-zero amplitude series.
    pub fn support(&self) -> Vec<ModeLabel> {
        self.amplitudes
            .iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(&l, _)| l)
            .collect()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ModeState {
            order: self.order,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(&l, s)| (l, s.scale(factor)))
                .collect(),
        }
    }

    /// Drops labels whose amplitude is identically zero.
    pub fn pruned(mut self) -> Self {
        self.amplitudes.retain(|_, s| !s.is_zero());
        self
    }

    /// `Σ |amplitude|²` as a real series in ε.
    pub fn norm_sq_series(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.order + 1];
        for s in self.amplitudes.values() {
            for (t, v) in total.iter_mut().zip(s.abs_sq()) {
                *t += v;
            }
        }
        total
    }

    pub fn norm_sq(&self, epsilon: f64) -> f64 {
        self.amplitudes
            .values()
            .map(|s| s.eval(epsilon).norm_sqr())
            .fold(0.0, |a, b| a + b)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.amplitudes)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let amplitudes: BTreeMap<ModeLabel, EpsSeries> = serde_json::from_str(text)?;
        let order = amplitudes.values().map(EpsSeries::order).max().unwrap_or(0);
        let amplitudes = amplitudes
            .into_iter()
            .map(|(l, s)| (l, s.truncate(order)))
            .collect();
        Ok(ModeState { order, amplitudes })
    }
}

/// Applies the vibrating-mirror transformation for `mirror` to every label in
/// the state. Rejects states where a label already carries the mirror's bit,
/// since no path in this geometry visits a mirror twice.
pub fn apply_mirror_kick(state: &ModeState, mirror: MirrorId) -> Result<ModeState> {
    let order = state.order;
    let stay = EpsSeries::inv_sqrt_one_plus_eps_sq(order);
    let flip = stay.shift_up();
    let mut out = ModeState::empty(order);
    for (label, amp) in state.iter() {
        if label.has(mirror) {
            return Err(Error::MirrorAlreadyKicked {
                mirror,
                label: label.to_string(),
            });
        }
        out.add_term(label, &(amp * &stay));
        out.add_term(label.with(mirror), &(amp * &flip));
    }
    Ok(out)
}

/// One route from the source to the detector port.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub base_amplitude: Complex64,
    pub mirrors: Vec<MirrorId>,
}

/// Arm C, inner path via A, inner path via B.
pub fn detector_paths(phi: f64, kappa: f64) -> [PathSpec; 3] {
    use MirrorId::*;
    [
        PathSpec {
            base_amplitude: Complex64::new(kappa / 3.0, 0.0),
            mirrors: vec![C],
        },
        PathSpec {
            base_amplitude: Complex64::from_polar(1.0 / 3.0, phi),
            mirrors: vec![E, A, F],
        },
        PathSpec {
            base_amplitude: Complex64::new(-1.0 / 3.0, 0.0),
            mirrors: vec![E, B, F],
        },
    ]
}

fn propagate_paths(paths: &[PathSpec], order: usize) -> Result<ModeState> {
    let mut out = ModeState::empty(order);
    for path in paths {
        let mut state = ModeState::vacuum(order);
        for &m in &path.mirrors {
            state = apply_mirror_kick(&state, m)?;
        }
        for (label, amp) in state.iter() {
            out.add_term(label, &amp.scale(path.base_amplitude));
        }
    }
    Ok(out.pruned())
}

/// Output state at the detector port, summed over the three paths.
pub fn propagate_detector_port(scenario: &Scenario) -> Result<ModeState> {
    scenario.validate()?;
    propagate_paths(
        &detector_paths(scenario.phi(), scenario.kappa()),
        scenario.series_order(),
    )
}

fn label(s: &str) -> ModeLabel {
    s.parse().expect("static label")
}

/// The hand-expanded output state through ε³, without normalization
/// corrections. Used only as a comparison target.
pub fn reference_output_state(phi: f64) -> ModeState {
    let n = 1.0 / 3.0;
    let e = Complex64::from_polar(1.0, phi);
    let one = Complex64::new(1.0, 0.0);
    let terms: [(&str, Complex64, usize); 12] = [
        ("00000", e, 0),
        ("00100", one, 1),
        ("00010", e - 1.0, 1),
        ("00001", e - 1.0, 1),
        ("10000", e, 1),
        ("01000", -one, 1),
        ("10010", e, 2),
        ("10001", e, 2),
        ("01010", -one, 2),
        ("01001", -one, 2),
        ("10011", e, 3),
        ("01011", -one, 3),
    ];
    let mut state = ModeState::empty(3);
    for (l, c, power) in terms {
        state.add_term(label(l), &EpsSeries::monomial(c * n, power, 3));
    }
    state.pruned()
}

/// Weight of the state in the subspace of labels carrying `mirror`'s bit.
pub fn mode_projection_probability(state: &ModeState, mirror: MirrorId, epsilon: f64) -> f64 {
    state
        .iter()
        .filter(|(l, _)| l.has(mirror))
        .map(|(_, s)| s.eval(epsilon).norm_sqr())
        .fold(0.0, |a, b| a + b)
}

/// [`mode_projection_probability`] as a real series in ε.
pub fn projection_series(state: &ModeState, mirror: MirrorId) -> Vec<f64> {
    let mut total = vec![0.0; state.order + 1];
    for (_, s) in state.iter().filter(|(l, _)| l.has(mirror)) {
        for (t, v) in total.iter_mut().zip(s.abs_sq()) {
            *t += v;
        }
    }
    total
}

pub fn zero_mode_probability(state: &ModeState, epsilon: f64) -> f64 {
    state.amplitude(ModeLabel::ZERO).eval(epsilon).norm_sqr()
}

/// Per-mirror probabilities plus the zero-mode probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityTable {
    pub mirrors: [f64; 5],
    pub zero: f64,
}

impl ProbabilityTable {
    pub fn get(&self, mirror: MirrorId) -> f64 {
        self.mirrors[mirror.index()]
    }
}

impl Serialize for ProbabilityTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(6))?;
        for m in MirrorId::ALL {
            map.serialize_entry(m.as_str(), &self.get(m))?;
        }
        map.serialize_entry("zero", &self.zero)?;
        map.end()
    }
}

/// Projector probabilities of `state` at `epsilon`.
pub fn probability_table(state: &ModeState, epsilon: f64) -> ProbabilityTable {
    ProbabilityTable {
        mirrors: MirrorId::ALL.map(|m| mode_projection_probability(state, m, epsilon)),
        zero: zero_mode_probability(state, epsilon),
    }
}

/// Projector probabilities for a canonical case at the given ε.
pub fn case_probability_table(case: CaseId, epsilon: f64) -> Result<ProbabilityTable> {
    let scenario = crate::scenario::standard_case(case).with_epsilon(epsilon)?;
    scenario_probability_table(&scenario)
}

pub fn scenario_probability_table(scenario: &Scenario) -> Result<ProbabilityTable> {
    let state = propagate_detector_port(scenario)?;
    Ok(probability_table(&state, scenario.epsilon()))
}

/// ε² coefficients of the projector probabilities (the leading order for
/// every mirror), and the ε⁰ coefficient of the zero-mode probability.
pub fn leading_order_table(state: &ModeState) -> ProbabilityTable {
    ProbabilityTable {
        mirrors: MirrorId::ALL.map(|m| projection_series(state, m)[2]),
        zero: state.amplitude(ModeLabel::ZERO).abs_sq()[0],
    }
}

/// The ε-independent three-term output state `(κ|00100⟩ − |01011⟩ +
/// e^{iφ}|10011⟩)/3`.
pub fn bcjlss_output_state(phi: f64, kappa: f64) -> ModeState {
    let mut state = ModeState::empty(0);
    let third = 1.0 / 3.0;
    state.add_term(
        label("00100"),
        &EpsSeries::constant(Complex64::new(kappa * third, 0.0), 0),
    );
    state.add_term(
        label("01011"),
        &EpsSeries::constant(Complex64::new(-third, 0.0), 0),
    );
    state.add_term(
        label("10011"),
        &EpsSeries::constant(Complex64::from_polar(third, phi), 0),
    );
    state.pruned()
}

/// `|⟨Π_X|ψ⟩|²` with the unnormalized `|Π_X⟩ = Σ_{labels with X} |label⟩`,
/// using the ε⁰ coefficients of the state.
pub fn bcjlss_witness(state: &ModeState, mirror: MirrorId) -> f64 {
    state
        .iter()
        .filter(|(l, _)| l.has(mirror))
        .map(|(_, s)| s.coeff(0))
        .sum::<Complex64>()
        .norm_sqr()
}

/// [`bcjlss_witness`] with the amplitudes evaluated at `epsilon`.
pub fn bcjlss_witness_at(state: &ModeState, mirror: MirrorId, epsilon: f64) -> f64 {
    state
        .iter()
        .filter(|(l, _)| l.has(mirror))
        .map(|(_, s)| s.eval(epsilon))
        .sum::<Complex64>()
        .norm_sqr()
}

/// Witness values for all five mirrors; the zero entry is `|⟨00000|ψ⟩|²`.
pub fn bcjlss_table(state: &ModeState) -> ProbabilityTable {
    ProbabilityTable {
        mirrors: MirrorId::ALL.map(|m| bcjlss_witness(state, m)),
        zero: state.amplitude(ModeLabel::ZERO).coeff(0).norm_sqr(),
    }
}

/// One coefficient compared between the path-enumerated and hand-expanded
/// states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientCheck {
    pub label: ModeLabel,
    pub power: usize,
    pub computed: Complex64,
    pub reference: Complex64,
}

impl CoefficientCheck {
    pub fn agrees(&self) -> bool {
        (self.computed - self.reference).norm() <= COEFF_TOL
    }

    /// Present in the computed state, absent from the hand expansion.
    pub fn is_unlisted(&self) -> bool {
        self.reference.norm() == 0.0 && self.computed.norm() > COEFF_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranscriptionReport {
    pub phi: f64,
    pub checks: Vec<CoefficientCheck>,
}

impl TranscriptionReport {
    /// Coefficients the hand expansion lists that disagree with the computed
    /// state.
    pub fn mismatches(&self) -> Vec<CoefficientCheck> {
        self.checks
            .iter()
            .filter(|c| !c.agrees() && !c.is_unlisted())
            .copied()
            .collect()
    }

    /// Terms produced by path enumeration but absent from the hand expansion.
    pub fn unlisted_terms(&self) -> Vec<CoefficientCheck> {
        self.checks
            .iter()
            .filter(|c| c.is_unlisted())
            .copied()
            .collect()
    }
}

/// Compares [`propagate_detector_port`] (arm C open) against
/// [`reference_output_state`] at phase `phi`.
///
/// * ε⁰: zero-mode coefficient, both divided by `e^{iφ}/3`;
/// * ε¹: every label;
/// * ε² and ε³: labels carrying exactly that many mirror quanta. The ε² and
///   ε³ normalization corrections to lower-weight labels are not part of the
///   hand expansion and are skipped.
pub fn transcription_report(phi: f64, order: usize) -> Result<TranscriptionReport> {
    let order = order.max(3);
    let computed = propagate_paths(&detector_paths(phi, 1.0), order)?;
    let reference = reference_output_state(phi);
    let n_e = Complex64::from_polar(1.0 / 3.0, phi);

    let mut checks = vec![CoefficientCheck {
        label: ModeLabel::ZERO,
        power: 0,
        computed: computed.amplitude(ModeLabel::ZERO).coeff(0) / n_e,
        reference: reference.amplitude(ModeLabel::ZERO).coeff(0) / n_e,
    }];
    for power in 1..=3 {
        for l in ModeLabel::all() {
            if power > 1 && l.weight() as usize != power {
                continue;
            }
            checks.push(CoefficientCheck {
                label: l,
                power,
                computed: computed.amplitude(l).coeff(power),
                reference: reference.amplitude(l).coeff(power),
            });
        }
    }
    Ok(TranscriptionReport { phi, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::standard_case;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn l(s: &str) -> ModeLabel {
        s.parse().unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    /// Dense 32×32 kick operator at fixed ε acting on a dense state vector.
    fn brute_force_kick(vec: &[Complex64; 32], mirror: MirrorId, eps: f64) -> [Complex64; 32] {
        let norm = 1.0 / (1.0 + eps * eps).sqrt();
        let mut matrix = [[0.0f64; 32]; 32];
        for col in 0..32usize {
            if col as u8 & mirror.bit() == 0 {
                matrix[col][col] = norm;
                matrix[col | mirror.bit() as usize][col] = eps * norm;
            }
        }
        let mut out = [Complex64::new(0.0, 0.0); 32];
        for (row, out_v) in out.iter_mut().enumerate() {
            for col in 0..32 {
                *out_v += vec[col] * matrix[row][col];
            }
        }
        out
    }

    fn dense(state: &ModeState, eps: f64) -> [Complex64; 32] {
        let mut v = [Complex64::new(0.0, 0.0); 32];
        for (label, s) in state.iter() {
            v[label.bits() as usize] = s.eval(eps);
        }
        v
    }

    #[test]
    fn label_rendering() {
        assert_eq!(ModeLabel::ZERO.with(MirrorId::A).to_string(), "10000");
        assert_eq!(ModeLabel::ZERO.with(MirrorId::C).to_string(), "00100");
        assert_eq!(ModeLabel::ZERO.with(MirrorId::E).to_string(), "00010");
        assert_eq!(ModeLabel::ZERO.with(MirrorId::F).to_string(), "00001");
        assert_eq!(l("01011").weight(), 3);
        assert!(l("01011").has(MirrorId::B) && !l("01011").has(MirrorId::A));
        assert!("0101".parse::<ModeLabel>().is_err());
        assert!("01021".parse::<ModeLabel>().is_err());
    }

    #[test]
    fn kick_on_vacuum() {
        let kicked = apply_mirror_kick(&ModeState::vacuum(4), MirrorId::C).unwrap();
        let stay = kicked.amplitude(l("00000"));
        let flip = kicked.amplitude(l("00100"));
        let re = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(
            stay.coeffs(),
            &[re(1.0), re(0.0), re(-0.5), re(0.0), re(3.0 / 8.0)]
        );
        assert_eq!(
            flip.coeffs(),
            &[re(0.0), re(1.0), re(0.0), re(-0.5), re(0.0)]
        );
        assert_eq!(kicked.support().len(), 2);
        // identity at ε = 0
        assert_eq!(stay.eval(0.0), re(1.0));
        assert_eq!(flip.eval(0.0), re(0.0));
    }

    #[test]
    fn kick_matches_dense_operator() {
        let s = Complex64::new(0.3, -0.7);
        let mut state = ModeState::empty(4);
        state.add_term(l("00010"), &EpsSeries::constant(s, 4));
        let kicked = apply_mirror_kick(&state, MirrorId::A).unwrap();
        assert!(close(kicked.amplitude(l("00010")).coeff(2), s * -0.5));
        assert!(close(kicked.amplitude(l("10010")).coeff(1), s));
        assert!(close(kicked.amplitude(l("10010")).coeff(3), s * -0.5));
        for eps in [0.001, 0.01, 0.05] {
            let expected = brute_force_kick(&dense(&state, eps), MirrorId::A, eps);
            let got = dense(&kicked, eps);
            for k in 0..32 {
                assert!(
                    (got[k] - expected[k]).norm() < 10.0 * eps.powi(5),
                    "label {k:05b}"
                );
            }
        }
    }

    #[test]
    fn double_kick_is_rejected() {
        let once = apply_mirror_kick(&ModeState::vacuum(3), MirrorId::E).unwrap();
        assert!(matches!(
            apply_mirror_kick(&once, MirrorId::E),
            Err(Error::MirrorAlreadyKicked {
                mirror: MirrorId::E,
                ..
            })
        ));
    }

    #[test]
    fn detector_port_coefficients() {
        let a = propagate_detector_port(&standard_case(CaseId::A)).unwrap();
        assert!(close(
            a.amplitude(l("00010")).coeff(1),
            Complex64::new(-2.0 / 3.0, 0.0)
        ));

        let c = propagate_detector_port(&standard_case(CaseId::C)).unwrap();
        assert!(c.amplitude(ModeLabel::ZERO).is_zero());
        assert!(c.amplitude(l("00100")).is_zero());

        let b = propagate_detector_port(&standard_case(CaseId::B)).unwrap();
        assert!(close(
            b.amplitude(l("10010")).coeff(2),
            Complex64::new(1.0 / 3.0, 0.0)
        ));
    }

    #[test]
    fn detector_port_matches_dense_propagation() {
        for case in CaseId::ALL {
            let scenario = standard_case(case);
            let state = propagate_detector_port(&scenario).unwrap();
            let eps = 0.02;
            let mut total = [Complex64::new(0.0, 0.0); 32];
            for path in detector_paths(scenario.phi(), scenario.kappa()) {
                let mut v = [Complex64::new(0.0, 0.0); 32];
                v[0] = Complex64::new(1.0, 0.0);
                for &m in &path.mirrors {
                    v = brute_force_kick(&v, m, eps);
                }
                for k in 0..32 {
                    total[k] += v[k] * path.base_amplitude;
                }
            }
            let got = dense(&state, eps);
            for k in 0..32 {
                assert!(
                    (got[k] - total[k]).norm() < 10.0 * eps.powi(5),
                    "case {case} label {k:05b}"
                );
            }
        }
    }

    #[test]
    fn reference_state_terms() {
        for phi in [0.0, 1.0, PI] {
            let r = reference_output_state(phi);
            assert!(close(
                r.amplitude(l("01000")).coeff(1),
                Complex64::new(-1.0 / 3.0, 0.0)
            ));
            assert!(close(
                r.amplitude(l("01011")).coeff(3),
                Complex64::new(-1.0 / 3.0, 0.0)
            ));
            assert!(r.amplitude(l("00011")).is_zero());
        }
    }

    #[test]
    fn projector_probabilities() {
        let eps = 0.01;
        let a = propagate_detector_port(&standard_case(CaseId::A)).unwrap();
        let p_e = mode_projection_probability(&a, MirrorId::E, eps);
        assert!((p_e - 4.0 * eps * eps / 9.0).abs() < 10.0 * eps.powi(4));
        assert_eq!(
            mode_projection_probability(&ModeState::empty(4), MirrorId::E, eps),
            0.0
        );

        // brute force over the 16 E-carrying kets of the hand-expanded state
        let r = reference_output_state(0.0);
        let mut brute = 0.0;
        for bits in 0..32u8 {
            if bits & MirrorId::E.bit() != 0 {
                brute += r
                    .amplitude(ModeLabel::from_bits(bits).unwrap())
                    .eval(eps)
                    .norm_sqr();
            }
        }
        let p = mode_projection_probability(&r, MirrorId::E, eps);
        assert!((p - brute).abs() < 1e-20);
        let expected = 2.0 * (eps * eps / 3.0).powi(2) + 2.0 * (eps.powi(3) / 3.0).powi(2);
        assert!((p - expected).abs() < 1e-20);
        assert!((p - 2.0 * eps.powi(4) / 9.0).abs() / p < 1e-3);
    }

    #[test]
    fn bcjlss_state_and_witness() {
        let b = bcjlss_output_state(0.0, 1.0);
        let third = Complex64::new(1.0 / 3.0, 0.0);
        assert!(close(b.amplitude(l("00100")).coeff(0), third));
        assert!(close(b.amplitude(l("01011")).coeff(0), -third));
        assert!(close(b.amplitude(l("10011")).coeff(0), third));
        assert!(close(
            bcjlss_output_state(PI, 1.0).amplitude(l("10011")).coeff(0),
            -third
        ));
        assert!(!bcjlss_output_state(0.3, 0.0)
            .support()
            .contains(&l("00100")));

        assert!(
            (bcjlss_witness(&bcjlss_output_state(PI, 1.0), MirrorId::E) - 4.0 / 9.0).abs() < 1e-15
        );
        assert!(bcjlss_witness(&b, MirrorId::E).abs() < 1e-30);
        // only 10011 carries A; brute-force sum over the 16 A kets
        let brute: Complex64 = (0..32u8)
            .filter(|bits| bits & MirrorId::A.bit() != 0)
            .map(|bits| b.amplitude(ModeLabel::from_bits(bits).unwrap()).coeff(0))
            .sum();
        assert!((bcjlss_witness(&b, MirrorId::A) - brute.norm_sqr()).abs() < 1e-15);
        assert!((bcjlss_witness(&b, MirrorId::A) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_and_incoherent_sums_differ_on_cancelling_modes() {
        let b = bcjlss_output_state(0.0, 1.0);
        // E is carried by both 01011 and 10011: the projector sees 2/9, the
        // witness sees the cancellation
        assert!((mode_projection_probability(&b, MirrorId::E, 0.0) - 2.0 / 9.0).abs() < 1e-15);
        assert!(bcjlss_witness(&b, MirrorId::E) < 1e-30);
        // C is carried by one label only: both agree
        assert!(
            (mode_projection_probability(&b, MirrorId::C, 0.0) - bcjlss_witness(&b, MirrorId::C))
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn transcription_finds_the_unlisted_term() {
        let report = transcription_report(PI, 4).unwrap();
        assert!(report.mismatches().is_empty(), "{:?}", report.mismatches());
        let extra = report.unlisted_terms();
        assert_eq!(extra.len(), 1);
        assert_eq!(extra[0].label, l("00011"));
        assert_eq!(extra[0].power, 2);
        assert!(close(extra[0].computed, Complex64::new(-2.0 / 3.0, 0.0)));
        // at φ = 0 the extra term vanishes
        let zero_phase = transcription_report(0.0, 4).unwrap();
        assert!(zero_phase.mismatches().is_empty());
        assert!(zero_phase.unlisted_terms().is_empty());
    }

    #[test]
    fn norm_bounds_per_case() {
        for eps in [0.001, 0.01, 0.05] {
            let a = propagate_detector_port(&standard_case(CaseId::A)).unwrap();
            let b = propagate_detector_port(&standard_case(CaseId::B)).unwrap();
            let c = propagate_detector_port(&standard_case(CaseId::C)).unwrap();
            let bound = (1.0 + 10.0 * eps * eps) / 9.0;
            assert!(a.norm_sq(eps) <= bound);
            assert!(b.norm_sq(eps) <= bound);
            assert!(c.norm_sq(eps) < b.norm_sq(eps));
        }
    }

    #[test]
    fn empty_projection_is_positive_zero() {
        let t = case_probability_table(CaseId::C, 0.01).unwrap();
        assert_eq!(t.get(MirrorId::C).to_bits(), 0);
    }

    #[test]
    fn mode_state_json_layout() {
        let state = bcjlss_output_state(PI, 1.0);
        let json = state.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!((value["01011"][0][0].as_f64().unwrap() + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(value["01011"][0][1].as_f64().unwrap(), 0.0);
        let back = ModeState::from_json(&json).unwrap();
        assert_eq!(back, state);
    }

    fn const_state() -> impl Strategy<Value = ModeState> {
        proptest::collection::btree_map(0..32u8, (-1.0..1.0f64, -1.0..1.0f64), 0..8).prop_map(|m| {
            let mut s = ModeState::empty(0);
            for (bits, (re, im)) in m {
                s.add_term(
                    ModeLabel::from_bits(bits).unwrap(),
                    &EpsSeries::constant(Complex64::new(re, im), 0),
                );
            }
            s
        })
    }

    fn kickable_state() -> impl Strategy<Value = (ModeState, MirrorId)> {
        (
            0..5usize,
            proptest::collection::vec((0..32u8, -1.0..1.0f64, -1.0..1.0f64), 1..6),
        )
            .prop_map(|(mi, terms)| {
                let mirror = MirrorId::ALL[mi];
                let mut s = ModeState::empty(4);
                for (bits, re, im) in terms {
                    let bits = bits & !mirror.bit();
                    let coeffs = (0..5)
                        .map(|k| Complex64::new(re, im) * 0.5f64.powi(k))
                        .collect();
                    s.add_term(
                        ModeLabel::from_bits(bits).unwrap(),
                        &EpsSeries::from_coeffs(coeffs),
                    );
                }
                (s, mirror)
            })
    }

    proptest! {
        #[test]
        fn kick_preserves_norm_series((state, mirror) in kickable_state()) {
            let before = state.norm_sq_series();
            let after = apply_mirror_kick(&state, mirror).unwrap().norm_sq_series();
            for (x, y) in before.iter().zip(&after) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn witness_equals_projector_for_single_carrier(state in const_state(), mi in 0..5usize) {
            let mirror = MirrorId::ALL[mi];
            let carriers = state.iter().filter(|(l, s)| l.has(mirror) && !s.is_zero()).count();
            let projector = mode_projection_probability(&state, mirror, 0.0);
            let witness = bcjlss_witness(&state, mirror);
            if carriers <= 1 {
                prop_assert!((projector - witness).abs() < 1e-14);
            }
            // Cauchy-Schwarz: coherent sum over k carriers is at most k × incoherent sum
            prop_assert!(witness <= carriers.max(1) as f64 * projector + 1e-14);
        }
    }
}
