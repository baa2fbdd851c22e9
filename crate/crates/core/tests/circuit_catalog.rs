use stabrw::circuit_rules::{circ_rule_instances, find_circ_matches, apply_circ_rule};
use stabrw::rules::{Bounds, Direction};
use stabrw::stab::{equiv_exact, equiv_tableau};

#[test]
fn every_instance_is_sound_under_both_oracles() {
    let all = circ_rule_instances(Bounds::default());
    assert!(all.len() > 100);
    let mut bad = Vec::new();
    for r in &all {
        let exact = equiv_exact(&r.lhs, &r.rhs).unwrap().is_equivalent();
        let tab = equiv_tableau(&r.lhs, &r.rhs).unwrap();
        if !exact || !tab {
            bad.push(format!("{r} exact={exact} tableau={tab}"));
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn every_side_matches_itself() {
    for r in circ_rule_instances(Bounds { max_arity: 6, ccirc_max: 3 }) {
        for dir in [Direction::Lr, Direction::Rl] {
            let (pat, rep) = r.sides(dir);
            let ms = find_circ_matches(pat, &r, dir);
            assert!(!ms.is_empty(), "{r} {dir}");
            let out = apply_circ_rule(pat, &r, dir, &ms[0]).unwrap();
            if pat.len() > 0 {
                assert!(out.structurally_equal(rep) || equiv_tableau(&out, rep).unwrap(), "{r} {dir}");
            }
        }
    }
}
