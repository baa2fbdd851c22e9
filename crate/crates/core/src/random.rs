//! Seeded random circuits and random rewrites for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, GateKind, Instr};
use crate::circuit_rules::{apply_circ_rule, circ_rule_instances, find_circ_matches_limited, CircuitRule};
use crate::phase::Phase;
use crate::rules::{Bounds, Direction};
use crate::zx::ZxDiagram;
use crate::zx_rules::{apply_zx_rule, find_zx_matches_limited, ZxRule};

/// Deterministic generator used by every randomized sweep.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for [`random_circuit`].
#[derive(Clone, Copy, Debug)]
pub struct CircuitShape {
    /// Most distinct wire labels in the circuit, ancillas included.
    pub max_wires: usize,
    pub max_gates: usize,
}

fn phase(rng: &mut impl Rng) -> Phase {
    Phase::new(rng.gen_range(0..4))
}

/// A random valid circuit. About one in five gates is a preparation or a
/// postselection, so many circuits are not unitary.
pub fn random_circuit(rng: &mut impl Rng, shape: CircuitShape) -> Circuit {
    let n_in = rng.gen_range(1..=shape.max_wires.max(1));
    let inputs: Vec<String> = (0..n_in).map(|i| format!("q{i}")).collect();
    let mut live = inputs.clone();
    let mut fresh = n_in;
    let mut instrs = Vec::new();
    let n_gates = rng.gen_range(0..=shape.max_gates);
    for _ in 0..n_gates {
        let roll = rng.gen_range(0..100);
        let kind = match roll {
            0..=9 if fresh < shape.max_wires => {
                if rng.gen() {
                    GateKind::PrepZero
                } else {
                    GateKind::PrepPlus
                }
            }
            10..=19 if !live.is_empty() => {
                if rng.gen() {
                    GateKind::PostZero
                } else {
                    GateKind::PostPlus
                }
            }
            20..=49 if live.len() >= 2 => GateKind::Cnot,
            50..=54 if live.len() >= 2 => GateKind::Swap,
            55..=69 if !live.is_empty() => GateKind::H,
            70..=84 if !live.is_empty() => GateKind::RotZ(phase(rng)),
            85..=99 if !live.is_empty() => GateKind::RotX(phase(rng)),
            _ => continue,
        };
        if kind.is_prep() {
            let w = format!("q{fresh}");
            fresh += 1;
            live.push(w.clone());
            instrs.push(Instr::new(kind, &[&w]));
        } else if kind.is_post() {
            let w = live.remove(rng.gen_range(0..live.len()));
            instrs.push(Instr::new(kind, &[&w]));
        } else if kind.wire_count() == 2 {
            let picked: Vec<&String> = live.choose_multiple(rng, 2).collect();
            instrs.push(Instr::new(kind, &[picked[0], picked[1]]));
        } else {
            let w = live.choose(rng).unwrap().clone();
            instrs.push(Instr::new(kind, &[&w]));
        }
    }
    live.shuffle(rng);
    Circuit::new(inputs, live, instrs).expect("generated circuits are valid")
}

/// Replaces one gate by a different gate on the same wires, if any gate can
/// be changed; the result may or may not be equivalent.
pub fn mutate(rng: &mut impl Rng, c: &Circuit) -> Circuit {
    let mut instrs = c.instrs().to_vec();
    let changeable: Vec<usize> = (0..instrs.len()).filter(|&i| !instrs[i].kind.is_prep() && !instrs[i].kind.is_post()).collect();
    if let Some(&i) = changeable.choose(rng) {
        let ins = &mut instrs[i];
        ins.kind = match ins.kind {
            GateKind::Cnot => {
                ins.wires.swap(0, 1);
                GateKind::Cnot
            }
            GateKind::Swap => GateKind::Cnot,
            GateKind::H => GateKind::RotZ(Phase::new(rng.gen_range(1..4))),
            GateKind::RotZ(p) => GateKind::RotZ(p + Phase::new(rng.gen_range(1..4))),
            GateKind::RotX(p) => GateKind::RotX(p + Phase::new(rng.gen_range(1..4))),
            k => k,
        };
    }
    Circuit::new(c.inputs().to_vec(), c.outputs().to_vec(), instrs).expect("mutation keeps wiring")
}

/// Catalog instances small enough to use as random rewrites.
pub fn rewrite_pool() -> Vec<CircuitRule> {
    circ_rule_instances(Bounds { max_arity: 6, ccirc_max: 2 })
}

/// Applies up to `steps` random rewrites drawn from `pool`. Returns the
/// rewritten circuit and how many rewrites actually applied.
pub fn random_rewrites(rng: &mut impl Rng, c: &Circuit, pool: &[CircuitRule], steps: usize) -> (Circuit, usize) {
    let mut cur = c.clone();
    let mut done = 0;
    for _ in 0..steps {
        for _attempt in 0..40 {
            let rule = pool.choose(rng).expect("non-empty pool");
            let dir = if rng.gen() { Direction::Lr } else { Direction::Rl };
            let (pat, _) = rule.sides(dir);
            // Rewrites that grow a bare wire are allowed but kept rare.
            if pat.is_empty() && rng.gen_range(0..4) != 0 {
                continue;
            }
            let ms = find_circ_matches_limited(&cur, rule, dir, 64);
            if let Some(b) = ms.choose(rng) {
                cur = apply_circ_rule(&cur, rule, dir, b).expect("matches apply");
                done += 1;
                break;
            }
        }
    }
    (cur, done)
}

/// Applies one random ZX rewrite from `pool`, if any rule matches.
pub fn random_zx_rewrite(rng: &mut impl Rng, d: &ZxDiagram, pool: &[ZxRule]) -> Option<(ZxDiagram, String)> {
    for _attempt in 0..60 {
        let rule = pool.choose(rng)?;
        let dir = if rng.gen() { Direction::Lr } else { Direction::Rl };
        let ms = find_zx_matches_limited(d, rule, dir, 64).ok()?;
        if let Some(b) = ms.choose(rng) {
            let out = apply_zx_rule(d, rule, dir, b).expect("matches apply");
            return Some((out, format!("{rule} {dir}")));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_circuit() {
        let shape = CircuitShape { max_wires: 4, max_gates: 12 };
        let a = random_circuit(&mut seeded(7), shape);
        let b = random_circuit(&mut seeded(7), shape);
        assert_eq!(a, b);
    }

    #[test]
    fn respects_the_shape() {
        let mut rng = seeded(1);
        for _ in 0..200 {
            let c = random_circuit(&mut rng, CircuitShape { max_wires: 3, max_gates: 10 });
            assert!(c.len() <= 10);
            assert!(c.labels().len() <= 3);
        }
    }
}
