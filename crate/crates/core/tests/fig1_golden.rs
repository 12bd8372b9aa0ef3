use heqvpe_core::qsim::Gate;
use heqvpe_core::vqe::{build_ansatz, fig1_defaults, AnsatzSpec};

const GOLDEN: &str = include_str!("data/fig1_gates.txt");

fn render(gates: &[Gate]) -> String {
    gates.iter().map(|g| format!("{g}\n")).collect()
}

#[test]
fn fig1_bound_gate_list_matches_golden() {
    let c = build_ansatz(&AnsatzSpec::fig1()).unwrap();
    let bound = c.bind(&fig1_defaults()).unwrap();
    let got = render(&bound);
    if std::env::var_os("HEQVPE_BLESS").is_some() {
        std::fs::write(
            concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/fig1_gates.txt"),
            &got,
        )
        .unwrap();
    }
    assert_eq!(got, GOLDEN);
}

#[test]
fn fig1_unbound_gate_list_names_parameters() {
    let c = build_ansatz(&AnsatzSpec::fig1()).unwrap();
    assert_eq!(
        c.param_names(),
        [
            "mzi1_coupler_a",
            "mzi1_phase_a",
            "mzi1_coupler_b",
            "mzi1_phase_b",
            "mzi2_coupler_a",
            "mzi2_phase_a",
            "mzi2_coupler_b",
            "mzi2_phase_b",
        ]
    );
    let text = render(c.gates());
    assert!(text.contains("U3(θ[0], "));
    assert!(text.contains("RZ(θ[7]) q3"));
}
