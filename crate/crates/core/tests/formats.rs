use mzi_witness::fock::{propagate_detector_port, ModeState};
use mzi_witness::scenario::standard_case;
use mzi_witness::spectra::{attribute_peaks, power_spectrum, sample_detector, Detector, Model};
use mzi_witness::{CaseId, MirrorId, Scenario};
use serde_json::Value;

#[test]
fn scenario_document_keys() {
    let s = standard_case(CaseId::A);
    let v: Value = serde_json::from_str(&s.to_json().unwrap()).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "duration",
            "epsilon",
            "kappa",
            "mirror_freq",
            "phi",
            "sample_rate",
            "series_order"
        ]
    );
    let freqs: Vec<&str> = v["mirror_freq"]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(freqs, ["A", "B", "C", "E", "F"]);
    assert_eq!(Scenario::from_json(&s.to_json().unwrap()).unwrap(), s);

    let one = s.with_only_mirror(MirrorId::C).unwrap();
    let v: Value = serde_json::from_str(&one.to_json().unwrap()).unwrap();
    assert_eq!(v["vib_amplitude"]["A"], 0.0);
    assert!(v["vib_amplitude"].get("C").is_none());
    assert_eq!(Scenario::from_json(&one.to_json().unwrap()).unwrap(), one);
}

#[test]
fn scenario_document_without_amplitudes_defaults_to_epsilon() {
    let text = r#"{
        "phi": 0.0, "kappa": 0.0, "epsilon": 0.02,
        "mirror_freq": {"C": 41.0},
        "duration": 1.0, "sample_rate": 1024.0, "series_order": 4
    }"#;
    let s = Scenario::from_json(text).unwrap();
    for m in MirrorId::ALL {
        assert_eq!(s.amplitude(m), 0.02);
    }
    assert_eq!(s.freq(MirrorId::A), None);

    let bad = text.replace("\"series_order\"", "\"seed\": 1, \"series_order\"");
    assert!(Scenario::from_json(&bad).is_err());
    let lowercase = text.replace("\"C\"", "\"G\"");
    assert!(Scenario::from_json(&lowercase).is_err());
}

#[test]
fn mode_state_document() {
    let state = propagate_detector_port(&standard_case(CaseId::B)).unwrap();
    let v: Value = serde_json::from_str(&state.to_json().unwrap()).unwrap();
    for (label, series) in v.as_object().unwrap() {
        assert_eq!(label.len(), 5);
        assert!(label.bytes().all(|b| b == b'0' || b == b'1'));
        for pair in series.as_array().unwrap() {
            assert_eq!(pair.as_array().unwrap().len(), 2);
        }
    }
    // C path: ⟨00100| = 1/3 at ε¹
    assert!((v["00100"][1][0].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    let back = ModeState::from_json(&state.to_json().unwrap()).unwrap();
    assert_eq!(back.norm_sq(0.01), state.norm_sq(0.01));
}

#[test]
fn csv_and_attribution_layout() {
    let s = standard_case(CaseId::A);
    let ts = sample_detector(&s, Detector::Quad, Model::Exact).unwrap();
    let csv = ts.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,value"));
    let (t, value) = lines.nth(1).unwrap().split_once(',').unwrap();
    assert_eq!(t.parse::<f64>().unwrap(), 1.0 / 1024.0);
    // 17 significant digits round-trip every sample
    assert_eq!(value.parse::<f64>().unwrap(), ts.samples()[1]);

    let spec = power_spectrum(&ts).unwrap();
    assert!(spec.to_csv().starts_with("freq_hz,power\n"));

    let r = attribute_peaks(&spec, &s, Detector::Quad, Model::Exact).unwrap();
    let v: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    for m in ["A", "B", "C", "E", "F"] {
        assert!(v[m]["freq"].is_number() && v[m]["power"].is_number());
    }
    assert_eq!(v["detector"], "quad");
    assert_eq!(v["model"], "exact");
    for pair in v["residual"].as_array().unwrap() {
        assert_eq!(pair.as_array().unwrap().len(), 2);
    }
    assert!(v.get("note").is_none());

    let bars = r.bar_chart_csv();
    assert_eq!(bars.lines().count(), 6);
    assert!(bars.starts_with("mirror,attributed_power\n"));
}
