use stabrw::matrix::{mat_proportional, Verdict};
use stabrw::rules::{Bounds, Direction};
use stabrw::zx::{zx_iso, zx_to_matrix};
use stabrw::zx_rules::{apply_zx_rule, find_zx_matches, zx_rule_instances};

#[test]
fn every_instance_is_proportional() {
    let all = zx_rule_instances(Bounds::default());
    assert!(all.len() > 500, "{}", all.len());
    let mut bad = Vec::new();
    for r in &all {
        let l = zx_to_matrix(&r.lhs).unwrap();
        let m = zx_to_matrix(&r.rhs).unwrap();
        match mat_proportional(&l, &m).unwrap() {
            Verdict::Equal | Verdict::Proportional(_) => {}
            // Zero-legged instances whose phases sum to π vanish on both sides.
            Verdict::BothZero if l.rows() == 1 && l.cols() == 1 => {}
            v => bad.push(format!("{r}: {v:?}")),
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn every_side_rewrites_into_the_other() {
    for r in zx_rule_instances(Bounds { max_arity: 4, ccirc_max: 3 }) {
        for dir in [Direction::Lr, Direction::Rl] {
            let (pat, rep) = r.sides(dir);
            let ms = find_zx_matches(pat, &r, dir).unwrap();
            assert!(!ms.is_empty(), "{r} {dir}");
            let hit = ms.iter().any(|m| zx_iso(&apply_zx_rule(pat, &r, dir, m).unwrap(), rep));
            assert!(hit, "{r} {dir}: no match rewrites the side into its partner");
        }
    }
}
