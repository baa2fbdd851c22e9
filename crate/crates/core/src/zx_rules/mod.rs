//! ZX rewrite rules: the basic axioms, their circuit-shaped alternatives, and
//! a matcher that applies either side as a local rewrite.
//!
//! Rule sides are open diagrams whose boundary vertices are *stubs*: each
//! stub stands for one leg leaving the matched region. Inputs and outputs of
//! a side only fix the order of the stubs; legs of a diagram have no
//! direction.
//!
//! Colour-suffixed ids (`.green`, `.red`) name the colour of the spider the
//! rule is about. `B1.green` and `K1.green` copy a red state through a green
//! spider; the `.red` forms are their colour swaps.

mod matcher;

pub use matcher::{apply_zx_rule, find_zx_matches, find_zx_matches_limited, ZxBinding};

use std::fmt;

use crate::circuit::Circuit;
use crate::circuit_rules::circ_rule_catalog_bounded;
use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::rules::{params, Bounds, Direction, ParamReader, Params};
use crate::zx::{circuit_to_zx, VertexKind, ZxDiagram};

/// One instance of a ZX equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZxRule {
    pub id: String,
    pub params: Params,
    pub lhs: ZxDiagram,
    pub rhs: ZxDiagram,
}

impl ZxRule {
    /// `(pattern, replacement)` for a direction.
    pub fn sides(&self, dir: Direction) -> (&ZxDiagram, &ZxDiagram) {
        match dir {
            Direction::Lr => (&self.lhs, &self.rhs),
            Direction::Rl => (&self.rhs, &self.lhs),
        }
    }
}

impl fmt::Display for ZxRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

/// Every ZX rule id, basic axioms first.
pub const ZX_RULE_IDS: &[&str] = &[
    "S1.green", "S1.red", "S2.green", "S2.red", "B1.green", "B1.red", "B2", "K1.green", "K1.red", "K2", "K2.dual",
    "C", "H", "S1'", "S2'", "S3'", "S4'.left", "S4'.right", "S5'", "S6'", "S'", "S'.red", "B1'", "B2'", "K1'",
    "K2'", "C'", "H'",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Colour {
    Green,
    Red,
}

impl Colour {
    fn spider(self, p: Phase) -> VertexKind {
        match self {
            Colour::Green => VertexKind::Z(p),
            Colour::Red => VertexKind::X(p),
        }
    }

    fn other(self) -> Colour {
        match self {
            Colour::Green => Colour::Red,
            Colour::Red => Colour::Green,
        }
    }
}

/// Small builder for open diagrams.
struct Side {
    d: ZxDiagram,
    n_in: usize,
    n_out: usize,
}

impl Side {
    fn new() -> Self {
        Side { d: ZxDiagram::new(), n_in: 0, n_out: 0 }
    }

    fn v(&mut self, k: VertexKind) -> usize {
        self.d.add_vertex(k)
    }

    fn e(&mut self, a: usize, b: usize) {
        self.d.add_edge(a, b);
    }

    fn input(&mut self, to: usize) {
        let b = self.d.add_vertex(VertexKind::Input(self.n_in));
        self.n_in += 1;
        self.d.add_edge(b, to);
    }

    fn output(&mut self, to: usize) {
        let b = self.d.add_vertex(VertexKind::Output(self.n_out));
        self.n_out += 1;
        self.d.add_edge(b, to);
    }

    /// An input wired straight to an output.
    fn wire(&mut self) {
        let a = self.d.add_vertex(VertexKind::Input(self.n_in));
        let b = self.d.add_vertex(VertexKind::Output(self.n_out));
        self.n_in += 1;
        self.n_out += 1;
        self.d.add_edge(a, b);
    }

    fn done(self) -> ZxDiagram {
        self.d
    }
}

fn bad(rule: &str, msg: impl Into<String>) -> Error {
    Error::BadParams { rule: rule.into(), msg: msg.into() }
}

fn fusion(col: Colour, alpha: Phase, beta: Phase, a: usize, b: usize, links: usize) -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let s1 = l.v(col.spider(alpha));
    let s2 = l.v(col.spider(beta));
    for _ in 0..links {
        l.e(s1, s2);
    }
    (0..a).for_each(|_| l.input(s1));
    (0..b).for_each(|_| l.output(s2));
    let mut r = Side::new();
    let s = r.v(col.spider(alpha + beta));
    (0..a).for_each(|_| r.input(s));
    (0..b).for_each(|_| r.output(s));
    (l.done(), r.done())
}

fn identity(col: Colour) -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let s = l.v(col.spider(Phase::ZERO));
    l.input(s);
    l.output(s);
    let mut r = Side::new();
    r.wire();
    (l.done(), r.done())
}

/// A state of the other colour with phase `p` pushed through a plain spider.
fn copy(col: Colour, p: Phase, legs: usize) -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let st = l.v(col.other().spider(p));
    let s = l.v(col.spider(Phase::ZERO));
    l.e(st, s);
    (0..legs).for_each(|_| l.output(s));
    let mut r = Side::new();
    for _ in 0..legs {
        let st = r.v(col.other().spider(p));
        r.output(st);
    }
    (l.done(), r.done())
}

fn bialgebra() -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let g: Vec<usize> = (0..2).map(|_| l.v(VertexKind::Z(Phase::ZERO))).collect();
    let r: Vec<usize> = (0..2).map(|_| l.v(VertexKind::X(Phase::ZERO))).collect();
    for &a in &g {
        for &b in &r {
            l.e(a, b);
        }
    }
    g.iter().for_each(|&a| l.input(a));
    r.iter().for_each(|&b| l.output(b));
    let mut rr = Side::new();
    let x = rr.v(VertexKind::X(Phase::ZERO));
    let z = rr.v(VertexKind::Z(Phase::ZERO));
    rr.e(x, z);
    rr.input(x);
    rr.input(x);
    rr.output(z);
    rr.output(z);
    (l.done(), rr.done())
}

/// `first(π)` then `second(α)` against `second(−α)` then `first(π)`.
fn pi_commute(first: Colour, alpha: Phase) -> (ZxDiagram, ZxDiagram) {
    let second = first.other();
    let chain = |a: VertexKind, b: VertexKind| {
        let mut s = Side::new();
        let u = s.v(a);
        let v = s.v(b);
        s.e(u, v);
        s.input(u);
        s.output(v);
        s.done()
    };
    (
        chain(first.spider(Phase::PI), second.spider(alpha)),
        chain(second.spider(-alpha), first.spider(Phase::PI)),
    )
}

fn colour_change(alpha: Phase, ins: usize, outs: usize) -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let x = l.v(VertexKind::X(alpha));
    (0..ins).for_each(|_| l.input(x));
    (0..outs).for_each(|_| l.output(x));
    let mut r = Side::new();
    let z = r.v(VertexKind::Z(alpha));
    for k in 0..ins + outs {
        let h = r.v(VertexKind::H);
        r.e(z, h);
        if k < ins {
            r.input(h);
        } else {
            r.output(h);
        }
    }
    (l.done(), r.done())
}

fn euler() -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let h = l.v(VertexKind::H);
    l.input(h);
    l.output(h);
    let mut r = Side::new();
    let q = Phase::HALF;
    let a = r.v(VertexKind::Z(q));
    let b = r.v(VertexKind::X(q));
    let c = r.v(VertexKind::Z(q));
    r.e(a, b);
    r.e(b, c);
    r.input(a);
    r.output(c);
    (l.done(), r.done())
}

/// A plain state absorbed by a plain three-legged spider of its colour.
fn prune(col: Colour) -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let st = l.v(col.spider(Phase::ZERO));
    let s = l.v(col.spider(Phase::ZERO));
    l.e(st, s);
    l.input(s);
    l.output(s);
    let mut r = Side::new();
    r.wire();
    (l.done(), r.done())
}

fn red_phases(alpha: Phase, beta: Phase) -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let a = l.v(VertexKind::X(alpha));
    let b = l.v(VertexKind::X(beta));
    l.e(a, b);
    l.input(a);
    l.output(b);
    let mut r = Side::new();
    let c = r.v(VertexKind::X(alpha + beta));
    r.input(c);
    r.output(c);
    (l.done(), r.done())
}

fn pi_control() -> (ZxDiagram, ZxDiagram) {
    let mut l = Side::new();
    let st = l.v(VertexKind::X(Phase::PI));
    let z = l.v(VertexKind::Z(Phase::ZERO));
    let x = l.v(VertexKind::X(Phase::ZERO));
    l.e(st, z);
    l.e(z, x);
    l.input(x);
    l.output(z);
    l.output(x);
    let mut r = Side::new();
    let st = r.v(VertexKind::X(Phase::PI));
    let x = r.v(VertexKind::X(Phase::PI));
    r.input(x);
    r.output(st);
    r.output(x);
    (l.done(), r.done())
}

fn from_circuits(l: &Circuit, r: &Circuit) -> (ZxDiagram, ZxDiagram) {
    (circuit_to_zx(l), circuit_to_zx(r))
}

fn circ(id: &str, variant: usize) -> (ZxDiagram, ZxDiagram) {
    let r = circ_rule_catalog_bounded(id, variant, &Params::new(), Bounds::default()).expect("fixed circuit rule");
    from_circuits(&r.lhs, &r.rhs)
}

fn text_circuit(t: &str) -> Circuit {
    Circuit::parse(&t.replace(';', "\n")).expect("valid fragment")
}

/// Builds a concrete ZX rule instance with the default bounds.
pub fn zx_rule_catalog(id: &str, p: &Params) -> Result<ZxRule> {
    zx_rule_catalog_bounded(id, p, Bounds::default())
}

/// Builds a concrete ZX rule instance.
pub fn zx_rule_catalog_bounded(id: &str, p: &Params, bounds: Bounds) -> Result<ZxRule> {
    let max = bounds.max_arity as i64;
    let colour = |suffix: &str| if suffix == "green" { Colour::Green } else { Colour::Red };
    let (lhs, rhs) = match id {
        "S1.green" | "S1.red" => {
            let r = ParamReader::new(id, p, &["alpha", "beta", "a", "b", "links"])?;
            let a = r.int("a", 1, 0, max)?;
            let b = r.int("b", 1, 0, max)?;
            let links = r.int("links", 1, 1, max)?;
            if a + b > bounds.max_arity {
                return Err(bad(id, format!("a + b = {} exceeds the arity bound {}", a + b, bounds.max_arity)));
            }
            fusion(colour(&id[3..]), r.phase("alpha"), r.phase("beta"), a, b, links)
        }
        "S2.green" | "S2.red" => {
            ParamReader::new(id, p, &[])?;
            identity(colour(&id[3..]))
        }
        "B1.green" | "B1.red" | "K1.green" | "K1.red" => {
            let r = ParamReader::new(id, p, &["legs"])?;
            let legs = r.int("legs", 2, 0, max)?;
            let phase = if id.starts_with('B') { Phase::ZERO } else { Phase::PI };
            copy(colour(&id[3..]), phase, legs)
        }
        "B2" => {
            ParamReader::new(id, p, &[])?;
            bialgebra()
        }
        "K2" | "K2'" | "K2.dual" => {
            let r = ParamReader::new(id, p, &["alpha"])?;
            let first = if id == "K2.dual" { Colour::Red } else { Colour::Green };
            pi_commute(first, r.phase("alpha"))
        }
        "C" => {
            let r = ParamReader::new(id, p, &["inputs", "outputs", "alpha"])?;
            let ins = r.int("inputs", 1, 0, max)?;
            let outs = r.int("outputs", 1, 0, max)?;
            if ins + outs > bounds.max_arity {
                return Err(bad(id, format!("{} legs exceed the arity bound {}", ins + outs, bounds.max_arity)));
            }
            colour_change(r.phase("alpha"), ins, outs)
        }
        "H" | "H'" => {
            ParamReader::new(id, p, &[])?;
            euler()
        }
        "S1'" | "S2'" | "S3'" | "S5'" => {
            ParamReader::new(id, p, &[])?;
            circ(&format!("S{}circ", &id[1..2]), 1)
        }
        "S4'.left" => {
            ParamReader::new(id, p, &[])?;
            circ("S4circ", 3)
        }
        "S4'.right" => {
            ParamReader::new(id, p, &[])?;
            let (l, r) = circ("S4circ", 2);
            (r, l)
        }
        "S6'" => {
            let r = ParamReader::new(id, p, &["alpha", "beta"])?;
            red_phases(r.phase("alpha"), r.phase("beta"))
        }
        "S'" => {
            ParamReader::new(id, p, &[])?;
            prune(Colour::Green)
        }
        "S'.red" => {
            ParamReader::new(id, p, &[])?;
            prune(Colour::Red)
        }
        "B1'" => {
            ParamReader::new(id, p, &[])?;
            circ("B1circ", 0)
        }
        "B2'" => {
            ParamReader::new(id, p, &[])?;
            from_circuits(
                &text_circuit("input r0 r1; cnot r1 r0; cnot r0 r1; output r0 r1"),
                &text_circuit("input r0 r1; cnot r0 r1; swap r0 r1; output r0 r1"),
            )
        }
        "K1'" => {
            ParamReader::new(id, p, &[])?;
            pi_control()
        }
        "C'" => {
            let r = circ_rule_catalog_bounded("Ccirc", 0, p, bounds).map_err(|e| match e {
                Error::BadParams { msg, .. } => bad(id, msg),
                e => e,
            })?;
            from_circuits(&r.lhs, &r.rhs)
        }
        _ => return Err(Error::UnknownRule(id.into())),
    };
    Ok(ZxRule { id: id.into(), params: p.clone(), lhs, rhs })
}

/// Every rule instance within the bounds, for soundness sweeps.
pub fn zx_rule_instances(bounds: Bounds) -> Vec<ZxRule> {
    let max = bounds.max_arity as i64;
    let mut sets: Vec<(&str, Params)> = Vec::new();
    for &id in ZX_RULE_IDS {
        match id {
            "S1.green" | "S1.red" => {
                for alpha in 0..4 {
                    for beta in 0..4 {
                        for a in 0..=max {
                            for b in 0..=max - a {
                                for links in 1..=2 {
                                    sets.push((
                                        id,
                                        params(&[("alpha", alpha), ("beta", beta), ("a", a), ("b", b), ("links", links)]),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            "B1.green" | "B1.red" | "K1.green" | "K1.red" => {
                (0..=max).for_each(|legs| sets.push((id, params(&[("legs", legs)]))));
            }
            "K2" | "K2'" | "K2.dual" => (0..4).for_each(|a| sets.push((id, params(&[("alpha", a)])))),
            "S6'" => {
                for a in 0..4 {
                    for b in 0..4 {
                        sets.push((id, params(&[("alpha", a), ("beta", b)])));
                    }
                }
            }
            "C" => {
                for a in 0..4 {
                    for i in 0..=max {
                        for o in 0..=max - i {
                            sets.push((id, params(&[("alpha", a), ("inputs", i), ("outputs", o)])));
                        }
                    }
                }
            }
            "C'" => {
                let cm = bounds.ccirc_max as i64;
                for a in 0..4 {
                    for n in 0..=cm {
                        for m in 0..=cm {
                            for mid_in in 0..2 {
                                for mid_out in 0..2 {
                                    if n + m + mid_in + mid_out <= cm {
                                        sets.push((
                                            id,
                                            params(&[
                                                ("alpha", a),
                                                ("n", n),
                                                ("m", m),
                                                ("mid_in", mid_in),
                                                ("mid_out", mid_out),
                                            ]),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            _ => sets.push((id, Params::new())),
        }
    }
    sets.into_iter().map(|(id, p)| zx_rule_catalog_bounded(id, &p, bounds).expect("in-range instance")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fusion_sums_phases() {
        let r = zx_rule_catalog("S1.green", &params(&[("alpha", 1), ("beta", 1), ("a", 2), ("b", 2)])).unwrap();
        let spiders: Vec<VertexKind> = r.rhs.vertices().map(|v| r.rhs.kind(v)).filter(|k| k.is_spider()).collect();
        assert_eq!(spiders, vec![VertexKind::Z(Phase::PI)]);
        assert_eq!(r.rhs.degree(0), 4);
    }

    #[test]
    fn euler_chain() {
        let r = zx_rule_catalog("H", &Params::new()).unwrap();
        let kinds: Vec<VertexKind> = r.rhs.vertices().map(|v| r.rhs.kind(v)).filter(|k| k.is_spider()).collect();
        assert_eq!(kinds, vec![VertexKind::Z(Phase::HALF), VertexKind::X(Phase::HALF), VertexKind::Z(Phase::HALF)]);
    }

    #[test]
    fn colour_change_has_a_box_per_leg() {
        let r = zx_rule_catalog("C", &params(&[("inputs", 1), ("outputs", 2)])).unwrap();
        let boxes = r.rhs.vertices().filter(|&v| r.rhs.kind(v) == VertexKind::H).count();
        assert_eq!(boxes, 3);
        assert_eq!((r.lhs.inputs().len(), r.lhs.outputs().len()), (1, 2));
    }

    #[test]
    fn pi_commutation_negates() {
        let r = zx_rule_catalog("K2", &params(&[("alpha", 1)])).unwrap();
        assert!(r.rhs.vertices().any(|v| r.rhs.kind(v) == VertexKind::X(Phase::new(3))));
    }

    #[test]
    fn bad_requests() {
        assert!(matches!(zx_rule_catalog("T", &Params::new()), Err(Error::UnknownRule(_))));
        assert!(zx_rule_catalog("S1.green", &params(&[("a", 4), ("b", 3)])).is_err());
        assert!(zx_rule_catalog("B1.red", &params(&[("legs", 7)])).is_err());
        assert!(zx_rule_catalog("H", &params(&[("alpha", 1)])).is_err());
        assert!(zx_rule_catalog("C'", &params(&[("n", 3), ("m", 3)])).is_err());
    }
}
