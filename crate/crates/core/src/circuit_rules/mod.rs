//! The circuit equations as anchored rewrites.
//!
//! Each rule id has numbered variants; a variant is one ordered pair of
//! equal circuit fragments, applied left-to-right or right-to-left. Fragment
//! inputs and outputs are the open wire stubs, numbered by position.
//!
//! | id | variants | parameters |
//! |----|----------|------------|
//! | `S1circ`..`S4circ` | 4 | |
//! | `S5circ` | 2 | |
//! | `S6circ` | 2 (`rz`, `rx`) | `alpha`, `beta` |
//! | `B1circ` | 4 | |
//! | `B2circ` | 2 | |
//! | `K1circ` | 4 | |
//! | `K2circ` | 2 | `alpha` |
//! | `Hcirc` | 1 | |
//! | `Ccirc` | 3 (full, top half, bottom half) | `n`, `m`, `mid_in`, `mid_out`, `alpha` |
//! | `Scirc` | see [`splice_scirc`] | |

mod matcher;
mod scirc;

pub use matcher::{apply_circ_rule, find_circ_matches, find_circ_matches_limited, CircuitBinding, SegRef};
pub use scirc::{candidate_sites, find_scirc_sites, splice_scirc, ScircFragment, ScircSite};

use std::fmt;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::rules::{params, Bounds, Direction, ParamReader, Params};

/// One instance of a circuit equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitRule {
    pub id: String,
    pub variant: usize,
    pub params: Params,
    pub lhs: Circuit,
    pub rhs: Circuit,
}

impl CircuitRule {
    /// `(pattern, replacement)` for a direction.
    pub fn sides(&self, dir: Direction) -> (&Circuit, &Circuit) {
        match dir {
            Direction::Lr => (&self.lhs, &self.rhs),
            Direction::Rl => (&self.rhs, &self.lhs),
        }
    }
}

impl fmt::Display for CircuitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.id, self.variant)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

/// Every circuit rule id, in catalog order.
pub const CIRCUIT_RULE_IDS: &[&str] = &[
    "S1circ", "S2circ", "S3circ", "S4circ", "S5circ", "S6circ", "B1circ", "B2circ", "K1circ", "K2circ", "Hcirc",
    "Ccirc", "Scirc",
];

/// Number of variants of a rule id (`Scirc` has none in this sense).
pub fn variant_count(id: &str) -> Result<usize> {
    Ok(match id {
        "S1circ" | "S2circ" | "S3circ" | "S4circ" | "B1circ" | "K1circ" => 4,
        "S5circ" | "S6circ" | "B2circ" | "K2circ" => 2,
        "Hcirc" => 1,
        "Ccirc" => 3,
        "Scirc" => 0,
        _ => return Err(Error::UnknownRule(id.into())),
    })
}

/// Names of the phase parameters of a rule.
pub fn phase_params(id: &str) -> &'static [&'static str] {
    match id {
        "S6circ" => &["alpha", "beta"],
        "K2circ" | "Ccirc" => &["alpha"],
        _ => &[],
    }
}

fn c(text: &str) -> Circuit {
    Circuit::parse(&text.replace(';', "\n")).expect("catalog fragment is valid")
}

fn pair(l: &str, r: &str) -> (Circuit, Circuit) {
    (c(l), c(r))
}

const WIRE: &str = "input r0; output r0";

fn fixed(id: &str, variant: usize) -> Option<(Circuit, Circuit)> {
    Some(match (id, variant) {
        ("S1circ", 0) => pair(
            "input r2; prep0 r0; prep0 r1; cnot r2 r1; cnot r1 r0; output r0 r1 r2",
            "input r0; prep0 r1; prep0 r2; cnot r0 r1; cnot r1 r2; output r0 r1 r2",
        ),
        ("S1circ", 1) => pair(
            "input r2; prepplus r0; prepplus r1; cnot r1 r2; cnot r0 r1; output r0 r1 r2",
            "input r0; prepplus r1; prepplus r2; cnot r1 r0; cnot r2 r1; output r0 r1 r2",
        ),
        ("S1circ", 2) => pair(
            "input r0 r1 r2; cnot r0 r1; cnot r1 r2; postplus r0; postplus r1; output r2",
            "input r0 r1 r2; cnot r2 r1; cnot r1 r0; postplus r1; postplus r2; output r0",
        ),
        ("S1circ", 3) => pair(
            "input r0 r1 r2; cnot r1 r0; cnot r2 r1; post0 r0; post0 r1; output r2",
            "input r0 r1 r2; cnot r1 r2; cnot r0 r1; post0 r1; post0 r2; output r0",
        ),
        ("S2circ", 0) => pair(
            "input r0 r2; prep0 r1; cnot r2 r1; cnot r1 r0; post0 r0; output r1 r2",
            "input r0 r1; prep0 r2; cnot r1 r0; cnot r1 r2; post0 r0; output r1 r2",
        ),
        ("S2circ", 1) => pair(
            "input r0 r2; prepplus r1; cnot r1 r2; cnot r0 r1; postplus r0; output r1 r2",
            "input r0 r1; prepplus r2; cnot r0 r1; cnot r2 r1; postplus r0; output r1 r2",
        ),
        ("S2circ", 2) => pair(
            "input r1 r2; prepplus r0; cnot r0 r1; cnot r1 r2; postplus r1; output r0 r2",
            "input r1 r2; prepplus r0; cnot r2 r1; cnot r0 r1; postplus r2; output r0 r1",
        ),
        ("S2circ", 3) => pair(
            "input r1 r2; prep0 r0; cnot r1 r0; cnot r2 r1; post0 r1; output r0 r2",
            "input r1 r2; prep0 r0; cnot r1 r2; cnot r1 r0; post0 r2; output r0 r1",
        ),
        ("S3circ", 0) => pair(
            "input r1; prep0 r0; cnot r1 r0; output r0 r1",
            "input r1; prep0 r0; cnot r1 r0; swap r0 r1; output r0 r1",
        ),
        ("S3circ", 1) => pair(
            "input r1; prepplus r0; cnot r0 r1; output r0 r1",
            "input r1; prepplus r0; cnot r0 r1; swap r0 r1; output r0 r1",
        ),
        ("S3circ", 2) => pair(
            "input r0 r1; cnot r1 r0; post0 r0; output r1",
            "input r0 r1; swap r0 r1; cnot r1 r0; post0 r0; output r1",
        ),
        ("S3circ", 3) => pair(
            "input r0 r1; cnot r0 r1; postplus r0; output r1",
            "input r0 r1; swap r0 r1; cnot r0 r1; postplus r0; output r1",
        ),
        ("S4circ", 0) => pair("input r0; prep0 r1; cnot r0 r1; postplus r0; output r1", WIRE),
        ("S4circ", 1) => pair("input r1; prep0 r0; cnot r1 r0; postplus r1; output r0", WIRE),
        ("S4circ", 2) => pair("input r1; prepplus r0; cnot r0 r1; post0 r1; output r0", WIRE),
        ("S4circ", 3) => pair("input r0; prepplus r1; cnot r1 r0; post0 r0; output r1", WIRE),
        ("S5circ", 0) => pair("input r1; prep0 r0; cnot r1 r0; cnot r1 r0; post0 r0; output r1", WIRE),
        ("S5circ", 1) => pair("input r1; prepplus r0; cnot r0 r1; cnot r0 r1; postplus r0; output r1", WIRE),
        ("B1circ", 0) => pair("input r1; prep0 r0; cnot r0 r1; output r0 r1", "input r1; prep0 r0; output r0 r1"),
        ("B1circ", 1) => {
            pair("input r0; prepplus r1; cnot r0 r1; output r0 r1", "input r0; prepplus r1; output r0 r1")
        }
        ("B1circ", 2) => pair("input r0 r1; cnot r0 r1; post0 r0; output r1", "input r0 r1; post0 r0; output r1"),
        ("B1circ", 3) => {
            pair("input r0 r1; cnot r0 r1; postplus r1; output r0", "input r0 r1; postplus r1; output r0")
        }
        ("B2circ", 0) => pair(
            "input r0 r1; cnot r0 r1; cnot r1 r0; output r0 r1",
            "input r0 r1; cnot r1 r0; swap r0 r1; output r0 r1",
        ),
        ("B2circ", 1) => pair(
            "input r0 r1; cnot r1 r0; swap r0 r1; output r0 r1",
            "input r0 r1; swap r0 r1; cnot r0 r1; output r0 r1",
        ),
        // |1> = X|0>, |-> = Z|+>, with X = rx 2 and Z = rz 2.
        ("K1circ", 0) => pair(
            "input r1; prep0 r0; rx r0 2; cnot r0 r1; output r0 r1",
            "input r1; prep0 r0; rx r0 2; rx r1 2; output r0 r1",
        ),
        ("K1circ", 1) => pair(
            "input r0; prepplus r1; rz r1 2; cnot r0 r1; output r0 r1",
            "input r0; rz r0 2; prepplus r1; rz r1 2; output r0 r1",
        ),
        ("K1circ", 2) => pair(
            "input r0 r1; cnot r0 r1; rx r0 2; post0 r0; output r1",
            "input r0 r1; rx r0 2; post0 r0; rx r1 2; output r1",
        ),
        ("K1circ", 3) => pair(
            "input r0 r1; cnot r0 r1; rz r1 2; postplus r1; output r0",
            "input r0 r1; rz r0 2; rz r1 2; postplus r1; output r0",
        ),
        ("Hcirc", 0) => pair("input r0; h r0; output r0", "input r0; rz r0 1; rx r0 1; rz r0 1; output r0"),
        _ => return None,
    })
}

fn rot(gate: &str, phase: i64) -> String {
    format!("{gate} r0 {phase}")
}

/// `gate α; gate β` against a single `gate (α+β)`, or a bare wire when the
/// sum vanishes.
fn s6(gate: &str, a: i64, b: i64) -> (Circuit, Circuit) {
    let lhs = format!("input r0; {}; {}; output r0", rot(gate, a), rot(gate, b));
    let sum = (a + b).rem_euclid(4);
    let rhs = if sum == 0 { WIRE.to_string() } else { format!("input r0; {}; output r0", rot(gate, sum)) };
    (c(&lhs), c(&rhs))
}

fn k2(first: &str, second: &str, a: i64) -> (Circuit, Circuit) {
    let lhs = format!("input r0; {first} r0 2; {second} r0 {a}; output r0");
    let rhs = format!("input r0; {second} r0 {}; {first} r0 2; output r0", (-a).rem_euclid(4));
    (c(&lhs), c(&rhs))
}

/// Shape of a colour-change instance.
#[derive(Clone, Copy, Debug)]
struct CcircShape {
    n: usize,
    m: usize,
    mid_in: bool,
    mid_out: bool,
    alpha: i64,
}

/// Builds both sides of a colour-change instance. `r1..rn` merge into the
/// middle wire through a CNOT ladder, `a1..am` fan out of it.
fn ccirc(variant: usize, s: CcircShape) -> (Circuit, Circuit) {
    let rs: Vec<String> = (1..=s.n).map(|i| format!("r{i}")).collect();
    let anc: Vec<String> = (1..=s.m).map(|j| format!("a{j}")).collect();
    // The halves keep the middle wire open on both ends.
    let (mid_in, mid_out) = match variant {
        0 => (s.mid_in, s.mid_out),
        _ => (true, true),
    };
    let mut inputs: Vec<String> = rs.clone();
    if mid_in {
        inputs.push("mid".into());
    }
    let mut outputs: Vec<String> = Vec::new();
    if mid_out {
        outputs.push("mid".into());
    }
    outputs.extend(anc.iter().cloned());
    let head = if inputs.is_empty() { String::new() } else { format!("input {}", inputs.join(" ")) };
    let tail = if outputs.is_empty() { String::new() } else { format!("output {}", outputs.join(" ")) };

    // Chain r1 -> r2 -> ... -> rn -> mid.
    let mut chain: Vec<&str> = rs.iter().map(|s| s.as_str()).collect();
    chain.push("mid");
    let mut fan: Vec<&str> = vec!["mid"];
    fan.extend(anc.iter().map(|s| s.as_str()));

    let mut l: Vec<String> = vec![head.clone()];
    let mut r: Vec<String> = vec![head];
    let top = variant != 2;
    let bottom = variant != 1;

    // Left side: red spider.
    if variant == 2 {
        l.push("h mid".into());
    }
    if !mid_in {
        l.push("prep0 mid".into());
    }
    if top {
        for w in chain.windows(2) {
            l.push(format!("cnot {} {}", w[0], w[1]));
        }
        for x in &rs {
            l.push(format!("postplus {x}"));
        }
    }
    if s.alpha != 0 {
        l.push(format!("rx mid {}", s.alpha));
    }
    if bottom {
        for a in &anc {
            l.push(format!("prepplus {a}"));
        }
        for w in fan.windows(2) {
            l.push(format!("cnot {} {}", w[1], w[0]));
        }
    }
    if variant == 1 {
        l.push("h mid".into());
    }
    if !mid_out {
        l.push("post0 mid".into());
    }

    // Right side: green spider with a Hadamard on every leg.
    if top {
        for x in &rs {
            r.push(format!("h {x}"));
        }
    }
    if !mid_in {
        r.push("prep0 mid".into());
    }
    if variant != 2 {
        r.push("h mid".into());
    }
    if top {
        for w in chain.windows(2) {
            r.push(format!("cnot {} {}", w[1], w[0]));
        }
        for x in &rs {
            r.push(format!("post0 {x}"));
        }
    }
    if s.alpha != 0 {
        r.push(format!("rz mid {}", s.alpha));
    }
    if bottom {
        for a in &anc {
            r.push(format!("prep0 {a}"));
        }
        for w in fan.windows(2) {
            r.push(format!("cnot {} {}", w[0], w[1]));
        }
        for a in &anc {
            r.push(format!("h {a}"));
        }
    }
    if variant != 1 {
        r.push("h mid".into());
    }
    if !mid_out {
        r.push("post0 mid".into());
    }
    l.push(tail.clone());
    r.push(tail);
    let join = |v: Vec<String>| v.into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join(";");
    (c(&join(l)), c(&join(r)))
}

/// Builds a concrete rule instance.
pub fn circ_rule_catalog(id: &str, variant: usize, p: &Params) -> Result<CircuitRule> {
    circ_rule_catalog_bounded(id, variant, p, Bounds::default())
}

/// [`circ_rule_catalog`] with explicit size bounds.
pub fn circ_rule_catalog_bounded(id: &str, variant: usize, p: &Params, bounds: Bounds) -> Result<CircuitRule> {
    let count = variant_count(id)?;
    if id == "Scirc" {
        return Err(Error::BadParams { rule: id.into(), msg: "Scirc is applied through fragment sites".into() });
    }
    if variant >= count {
        return Err(Error::BadParams { rule: id.into(), msg: format!("variant {variant} is outside 0..{count}") });
    }
    let (lhs, rhs) = match id {
        "S6circ" => {
            let r = ParamReader::new(id, p, &["alpha", "beta"])?;
            let g = if variant == 0 { "rz" } else { "rx" };
            s6(g, r.phase("alpha").quarters() as i64, r.phase("beta").quarters() as i64)
        }
        "K2circ" => {
            let r = ParamReader::new(id, p, &["alpha"])?;
            let a = r.phase("alpha").quarters() as i64;
            if variant == 0 {
                k2("rz", "rx", a)
            } else {
                k2("rx", "rz", a)
            }
        }
        "Ccirc" => {
            let r = ParamReader::new(id, p, &["n", "m", "mid_in", "mid_out", "alpha"])?;
            let max = bounds.ccirc_max as i64;
            let shape = CcircShape {
                n: r.int("n", 1, 0, max)?,
                m: r.int("m", 1, 0, max)?,
                mid_in: r.flag("mid_in", false)?,
                mid_out: r.flag("mid_out", false)?,
                alpha: r.phase("alpha").quarters() as i64,
            };
            let legs = match variant {
                0 => shape.n + shape.m + shape.mid_in as usize + shape.mid_out as usize,
                1 => shape.n + 2,
                _ => shape.m + 2,
            };
            if legs > bounds.ccirc_max {
                return Err(Error::BadParams {
                    rule: id.into(),
                    msg: format!("{legs} open wires exceed the bound of {}", bounds.ccirc_max),
                });
            }
            ccirc(variant, shape)
        }
        _ => {
            ParamReader::new(id, p, &[])?;
            fixed(id, variant).ok_or_else(|| Error::UnknownRule(id.into()))?
        }
    };
    Ok(CircuitRule { id: id.into(), variant, params: p.clone(), lhs, rhs })
}

/// Every rule instance within the bounds, for soundness sweeps.
pub fn circ_rule_instances(bounds: Bounds) -> Vec<CircuitRule> {
    let mut out = Vec::new();
    for &id in CIRCUIT_RULE_IDS {
        let n = variant_count(id).unwrap();
        for v in 0..n {
            match id {
                "S6circ" => {
                    for a in 0..4 {
                        for b in 0..4 {
                            out.push(circ_rule_catalog(id, v, &params(&[("alpha", a), ("beta", b)])).unwrap());
                        }
                    }
                }
                "K2circ" => {
                    for a in 0..4 {
                        out.push(circ_rule_catalog(id, v, &params(&[("alpha", a)])).unwrap());
                    }
                }
                "Ccirc" => {
                    let max = bounds.ccirc_max as i64;
                    for n in 0..=max {
                        for m in 0..=max {
                            for mid_in in 0..2 {
                                for mid_out in 0..2 {
                                    for a in 0..4 {
                                        let p = match v {
                                            0 => params(&[
                                                ("n", n),
                                                ("m", m),
                                                ("mid_in", mid_in),
                                                ("mid_out", mid_out),
                                                ("alpha", a),
                                            ]),
                                            1 if m == 0 && mid_in == 0 && mid_out == 0 => {
                                                params(&[("n", n), ("m", 0), ("alpha", a)])
                                            }
                                            2 if n == 0 && mid_in == 0 && mid_out == 0 => {
                                                params(&[("n", 0), ("m", m), ("alpha", a)])
                                            }
                                            _ => continue,
                                        };
                                        if let Ok(r) = circ_rule_catalog_bounded(id, v, &p, bounds) {
                                            out.push(r);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                _ => out.push(circ_rule_catalog(id, v, &Params::new()).unwrap()),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hcirc_shape() {
        let r = circ_rule_catalog("Hcirc", 0, &Params::new()).unwrap();
        assert_eq!(r.lhs.to_text(), "input r0\nh r0\noutput r0\n");
        assert_eq!(r.rhs.to_text(), "input r0\nrz r0 1\nrx r0 1\nrz r0 1\noutput r0\n");
    }

    #[test]
    fn s6_sums_phases() {
        let r = circ_rule_catalog("S6circ", 0, &params(&[("alpha", 1), ("beta", 1)])).unwrap();
        assert_eq!(r.rhs.to_text(), "input r0\nrz r0 2\noutput r0\n");
        let r = circ_rule_catalog("S6circ", 1, &params(&[("alpha", 1), ("beta", 3)])).unwrap();
        assert!(r.rhs.is_empty());
    }

    #[test]
    fn ccirc_smallest() {
        let r = circ_rule_catalog("Ccirc", 0, &params(&[("n", 1), ("m", 1), ("alpha", 1)])).unwrap();
        assert_eq!(r.lhs.to_text(), "input r1\nprep0 mid\ncnot r1 mid\npostplus r1\nrx mid 1\nprepplus a1\ncnot a1 mid\npost0 mid\noutput a1\n");
        assert_eq!((r.rhs.inputs().len(), r.rhs.outputs().len()), (1, 1));
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(circ_rule_catalog("Nope", 0, &Params::new()), Err(Error::UnknownRule(_))));
        assert!(circ_rule_catalog("Hcirc", 1, &Params::new()).is_err());
        assert!(circ_rule_catalog("Ccirc", 0, &params(&[("n", 3), ("m", 3)])).is_err());
        assert!(circ_rule_catalog("Hcirc", 0, &params(&[("alpha", 1)])).is_err());
    }
}
