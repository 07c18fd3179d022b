use catzx::circuit::{circuit_to_diagram, circuit_to_open_diagram};
use catzx::dense::dense_oracle;
use catzx::driver::{amplitude_with, DriverError};
use catzx::generate::{gen_hidden_shift, gen_random_circuit};
use catzx::qasm::{parse_qasm, to_qasm};
use catzx::tensor::to_tensor;
use catzx::{run_simulation, Basis, Diagram, SimOptions, StateSpec, StrategyKind};
use proptest::prelude::*;

fn spec(n: usize, seed: u64) -> StateSpec {
    let all = [Basis::Zero, Basis::One, Basis::Plus, Basis::Minus];
    StateSpec((0..n).map(|i| all[((seed >> (2 * (i % 32))) & 3) as usize]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn qasm_roundtrip_preserves_circuits(q in 1usize..6, gates in 0usize..40, seed in any::<u64>()) {
        let c = gen_random_circuit(q, gates, 0.3, seed);
        let back = parse_qasm(&to_qasm(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn diagram_text_roundtrip(q in 1usize..5, gates in 0usize..25, seed in any::<u64>()) {
        let c = gen_random_circuit(q, gates, 0.3, seed);
        let d = circuit_to_open_diagram(&c).unwrap();
        let back = Diagram::from_text(&d.to_text()).unwrap();
        prop_assert!(to_tensor(&back).unwrap().approx_eq(&to_tensor(&d).unwrap(), 1e-10));
    }

    #[test]
    fn strategies_agree_exactly(q in 1usize..7, gates in 1usize..30, seed in any::<u64>(), io in any::<u64>()) {
        let c = gen_random_circuit(q, gates, 0.35, seed);
        let (i, o) = (spec(q, io), spec(q, io.rotate_left(17)));
        let cats = run_simulation(&c, &i, &o, StrategyKind::CatsThenPartial, 1, 0).unwrap();
        prop_assert!(cats.stats.leaf_accounting_ok());
        for s in [StrategyKind::Bss, StrategyKind::Naive] {
            let r = run_simulation(&c, &i, &o, s, 2, 0).unwrap();
            prop_assert_eq!(r.amplitude, cats.amplitude);
        }
        let z = dense_oracle(&c, &i, &o).unwrap();
        prop_assert!((cats.amplitude.to_complex() - z).norm() < 1e-9);
    }
}

#[test]
fn leaf_budget_stops_a_run() {
    let (c, s) = gen_hidden_shift(12, 8, 2).unwrap();
    let d = circuit_to_diagram(&c, &StateSpec::uniform(12, Basis::Zero), &StateSpec::from_bits(&s)).unwrap();
    let opts = SimOptions { strategy: StrategyKind::Naive, max_leaves: Some(2), ..SimOptions::default() };
    match amplitude_with(&d, &opts) {
        Err(DriverError::BudgetExceeded { budget, .. }) => assert_eq!(budget, 2),
        other => panic!("expected budget error, got {other:?}"),
    }
    let opts = SimOptions { max_leaves: Some(1 << 20), ..opts };
    assert_eq!(amplitude_with(&d, &opts).unwrap().amplitude, catzx::ExactScalar::ONE);
}
