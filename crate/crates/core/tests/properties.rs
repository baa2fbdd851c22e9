use proptest::prelude::*;

use stabrw::circuit::circuit_to_matrix;
use stabrw::matrix::{mat_proportional, Verdict};
use stabrw::random::{mutate, random_circuit, random_rewrites, random_zx_rewrite, rewrite_pool, seeded, CircuitShape};
use stabrw::rules::{Bounds, Direction};
use stabrw::stab::{choi_tableau, equiv_exact, equiv_tableau, tableau_canonical};
use stabrw::zx::{circuit_to_zx, zx_to_matrix, ZxDiagram};
use stabrw::zx_rules::{apply_zx_rule, find_zx_matches_limited, zx_rule_instances};
use stabrw::{Circuit, CliffordScalar, Phase};

fn scalar() -> impl Strategy<Value = CliffordScalar> {
    (prop::array::uniform4(-6i64..6), 0u32..4).prop_map(|(c, k)| CliffordScalar::from_parts(c, k))
}

fn same(a: CliffordScalar, b: CliffordScalar) -> bool {
    (a - b).is_zero()
}

const SMALL: CircuitShape = CircuitShape { max_wires: 4, max_gates: 12 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalars_form_a_ring(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert!(same((a + b) * c, a * c + b * c));
        prop_assert!(same(a * b, b * a));
        prop_assert!(same((a * b) * c, a * (b * c)));
        prop_assert!(same(a - a, CliffordScalar::zero()));
    }

    #[test]
    fn phases_multiply_by_adding(p in 0i64..8, q in 0i64..8) {
        let (p, q) = (Phase::new(p), Phase::new(q));
        prop_assert!(same(CliffordScalar::from_phase(p) * CliffordScalar::from_phase(q), CliffordScalar::from_phase(p + q)));
        prop_assert_eq!((p + q) - q, p);
        prop_assert_eq!(-(-p), p);
    }

    #[test]
    fn nonzero_quotients_round_trip(a in scalar(), b in scalar()) {
        prop_assume!(!b.is_zero());
        if let Some(q) = (a * b).checked_div(&b) {
            prop_assert!(same(q, a));
        }
    }

    #[test]
    fn circuit_text_round_trips(seed in any::<u64>()) {
        let c = random_circuit(&mut seeded(seed), SMALL);
        prop_assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn zx_text_round_trips(seed in any::<u64>()) {
        let d = circuit_to_zx(&random_circuit(&mut seeded(seed), SMALL));
        let back = ZxDiagram::parse(&d.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), d.to_text());
    }

    #[test]
    fn translation_preserves_meaning(seed in any::<u64>()) {
        let c = random_circuit(&mut seeded(seed), SMALL);
        let v = mat_proportional(&circuit_to_matrix(&c).unwrap(), &zx_to_matrix(&circuit_to_zx(&c)).unwrap()).unwrap();
        prop_assert!(v.is_equivalent(), "{}", c.to_text());
    }

    #[test]
    fn oracles_agree_on_mutants(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let c = random_circuit(&mut rng, CircuitShape { max_wires: 5, max_gates: 20 });
        let d = mutate(&mut rng, &c);
        prop_assert_eq!(equiv_tableau(&c, &d).unwrap(), equiv_exact(&c, &d).unwrap().is_equivalent());
    }

    #[test]
    fn canonical_tableaux_are_fixed_points(seed in any::<u64>()) {
        let t = choi_tableau(&random_circuit(&mut seeded(seed), SMALL));
        prop_assert_eq!(tableau_canonical(&t).unwrap(), t);
    }
}

#[test]
fn circuit_rewrites_preserve_the_oracle_class() {
    let pool = rewrite_pool();
    let mut rng = seeded(2024);
    let mut applied = 0;
    while applied < 1000 {
        let c = random_circuit(&mut rng, CircuitShape { max_wires: 4, max_gates: 10 });
        let (d, n) = random_rewrites(&mut rng, &c, &pool, 3);
        applied += n;
        assert_eq!(c.inputs().len(), d.inputs().len());
        assert_eq!(c.outputs().len(), d.outputs().len());
        let exact = equiv_exact(&c, &d).unwrap();
        assert!(exact.is_equivalent(), "{}\n=>\n{}", c.to_text(), d.to_text());
        assert!(equiv_tableau(&c, &d).unwrap());
    }
}

#[test]
fn zx_rewrites_preserve_the_oracle_class() {
    let pool = zx_rule_instances(Bounds { max_arity: 3, ccirc_max: 2 });
    let mut rng = seeded(99);
    let mut applied = 0;
    while applied < 1000 {
        let mut d = circuit_to_zx(&random_circuit(&mut rng, CircuitShape { max_wires: 3, max_gates: 8 }));
        let before = zx_to_matrix(&d).unwrap();
        for _ in 0..4 {
            let Some((next, what)) = random_zx_rewrite(&mut rng, &d, &pool) else { break };
            applied += 1;
            let v = mat_proportional(&before, &zx_to_matrix(&next).unwrap()).unwrap();
            assert!(!matches!(v, Verdict::Different { .. }), "{what} broke\n{d}");
            d = next;
        }
    }
}

#[test]
fn every_returned_zx_binding_applies() {
    let pool = zx_rule_instances(Bounds { max_arity: 3, ccirc_max: 2 });
    let mut rng = seeded(5);
    for _ in 0..30 {
        let d = circuit_to_zx(&random_circuit(&mut rng, CircuitShape { max_wires: 3, max_gates: 8 }));
        for rule in &pool {
            for dir in [Direction::Lr, Direction::Rl] {
                for b in find_zx_matches_limited(&d, rule, dir, 16).unwrap() {
                    apply_zx_rule(&d, rule, dir, &b).unwrap();
                }
            }
        }
    }
}
