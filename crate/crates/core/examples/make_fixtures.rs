//! Regenerates the fixture corpus: circuits, derivation scripts with explicit
//! anchors, and the corrupted scripts used by the checker tests.
//!
//! Each script is built by applying its steps here and recording the anchor
//! that was used. Targets are built independently and every script is
//! verified before it is written.
//!
//! Usage: `cargo run -p stabrw-core --example make_fixtures -- [dir]`

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use stabrw::circuit_rules::{apply_circ_rule, circ_rule_catalog, circ_rule_catalog_bounded, find_circ_matches};
use stabrw::derivation::{verify_script, Anchor, Script, ScriptKind, Step};
use stabrw::rules::{params, Bounds, Direction, Params};
use stabrw::zx::{circuit_to_zx, zx_iso, VertexKind, ZxDiagram};
use stabrw::zx_rules::{apply_zx_rule, find_zx_matches, zx_rule_catalog, ZxBinding};
use stabrw::{Circuit, Phase};

fn circ(t: &str) -> Circuit {
    Circuit::parse(&t.replace(';', "\n")).expect("fixture circuit")
}

fn one_line(text: &str) -> String {
    text.lines().collect::<Vec<_>>().join("; ")
}

const LR: Direction = Direction::Lr;
const RL: Direction = Direction::Rl;

struct CircScript {
    initial: Circuit,
    cur: Circuit,
    steps: Vec<Step>,
}

impl CircScript {
    fn new(initial: &Circuit) -> Self {
        CircScript { initial: initial.clone(), cur: initial.clone(), steps: vec![] }
    }

    /// Applies the first match.
    fn step(&mut self, rule: &str, variant: usize, p: Params, dir: Direction) -> &mut Self {
        let r = circ_rule_catalog(rule, variant, &p).expect("catalog rule");
        let ms = find_circ_matches(&self.cur, &r, dir);
        assert!(!ms.is_empty(), "{rule}[{variant}] {dir} does not match\n{}", self.cur.to_text());
        self.cur = apply_circ_rule(&self.cur, &r, dir, &ms[0]).unwrap();
        self.steps.push(Step {
            rule: rule.into(),
            variant,
            params: p,
            direction: dir,
            binding: Anchor::Circuit(ms[0].clone()),
        });
        self
    }

    fn finish(&self, target: &Circuit) -> Script {
        assert!(self.cur.structurally_equal(target), "chain ends at\n{}", self.cur.to_text());
        Script {
            kind: ScriptKind::Circuit,
            initial: one_line(&self.initial.to_text()),
            target: one_line(&target.to_text()),
            steps: self.steps.clone(),
        }
    }
}

type Pred = dyn Fn(&ZxDiagram, &ZxBinding) -> bool;

struct ZxScript {
    initial: ZxDiagram,
    cur: ZxDiagram,
    steps: Vec<Step>,
}

impl ZxScript {
    fn new(initial: &ZxDiagram) -> Self {
        let d = initial.compact();
        ZxScript { initial: d.clone(), cur: d, steps: vec![] }
    }

    /// Applies the first match accepted by `pick`.
    fn step(&mut self, rule: &str, p: Params, dir: Direction, pick: &Pred) -> &mut Self {
        let r = zx_rule_catalog(rule, &p).expect("catalog rule");
        let ms = find_zx_matches(&self.cur, &r, dir).unwrap();
        let b = ms
            .iter()
            .find(|b| pick(&self.cur, b))
            .unwrap_or_else(|| panic!("{rule} {dir}: none of {} matches fits in\n{}", ms.len(), self.cur))
            .clone();
        self.cur = apply_zx_rule(&self.cur, &r, dir, &b).unwrap();
        self.steps.push(Step { rule: rule.into(), variant: 0, params: p, direction: dir, binding: Anchor::Zx(b) });
        self
    }

    /// Final step: the first match whose result is isomorphic to `target`.
    fn last(&mut self, rule: &str, p: Params, dir: Direction, target: &ZxDiagram) -> &mut Self {
        let r = zx_rule_catalog(rule, &p).expect("catalog rule");
        let t = target.clone();
        let cur = self.cur.clone();
        self.step(rule, p, dir, &move |_, b| zx_iso(&apply_zx_rule(&cur, &r, dir, b).unwrap(), &t))
    }

    fn finish(&self, target: &ZxDiagram) -> Script {
        assert!(zx_iso(&self.cur, target), "chain ends at\n{}", self.cur);
        Script {
            kind: ScriptKind::Zx,
            initial: one_line(&self.initial.to_text()),
            target: one_line(&target.compact().to_text()),
            steps: self.steps.clone(),
        }
    }
}

fn any(_: &ZxDiagram, _: &ZxBinding) -> bool {
    true
}

fn kinds(h: &ZxDiagram, vs: &[usize]) -> Vec<VertexKind> {
    vs.iter().map(|&v| h.kind(v)).collect()
}

/// The first `a` stubs lead to exactly these kinds, in any order.
fn first_stubs(a: usize, want: Vec<VertexKind>) -> impl Fn(&ZxDiagram, &ZxBinding) -> bool {
    move |h, b| {
        let mut got = kinds(h, &b.stubs[..a]);
        let mut w = want.clone();
        got.sort_by_key(|k| format!("{k}"));
        w.sort_by_key(|k| format!("{k}"));
        got == w
    }
}

/// A bare-wire pattern lands on an edge between vertices satisfying `x` and `y`.
fn on_edge(
    x: impl Fn(&ZxDiagram, usize) -> bool,
    y: impl Fn(&ZxDiagram, usize) -> bool,
) -> impl Fn(&ZxDiagram, &ZxBinding) -> bool {
    move |h, b| x(h, b.stubs[0]) && y(h, b.stubs[1])
}

fn is(kind: VertexKind) -> impl Fn(&ZxDiagram, usize) -> bool {
    move |h, v| h.kind(v) == kind
}

/// An X(0) spider with a boundary neighbour of the given kind.
fn red_next_to(b: VertexKind) -> impl Fn(&ZxDiagram, usize) -> bool {
    move |h, v| h.kind(v) == VertexKind::X(Phase::ZERO) && h.neighbors(v).keys().any(|&n| h.kind(n) == b)
}

fn h_next_to(b: VertexKind) -> impl Fn(&ZxDiagram, usize) -> bool {
    move |h, v| h.kind(v) == VertexKind::H && h.neighbors(v).keys().any(|&n| h.kind(n) == b)
}

const X0: VertexKind = VertexKind::X(Phase::ZERO);
const Z0: VertexKind = VertexKind::Z(Phase::ZERO);
const XA: VertexKind = VertexKind::X(Phase::HALF);
const ZA: VertexKind = VertexKind::Z(Phase::HALF);
const I0: VertexKind = VertexKind::Input(0);
const I1: VertexKind = VertexKind::Input(1);
const I2: VertexKind = VertexKind::Input(2);
const O0: VertexKind = VertexKind::Output(0);
const O1: VertexKind = VertexKind::Output(1);

fn teleport() -> Script {
    let initial = circ("input a; prepplus b; prep0 c; cnot b c; cnot a b; postplus a; post0 b; output c");
    let mut s = CircScript::new(&initial);
    s.step("S2circ", 1, Params::new(), LR)
        .step("Ccirc", 0, params(&[("n", 1), ("m", 1)]), LR)
        .step("Ccirc", 2, params(&[("n", 0), ("m", 1)]), RL)
        .step("Ccirc", 1, params(&[("n", 1), ("m", 0)]), RL)
        .step("S4circ", 3, Params::new(), LR)
        .step("S4circ", 0, Params::new(), LR);
    // Expand the first Hadamard, then the one that is left.
    s.step("Hcirc", 0, Params::new(), LR)
        .step("Hcirc", 0, Params::new(), LR)
        .step("S6circ", 0, params(&[("alpha", 1), ("beta", 1)]), LR)
        .step("K2circ", 0, params(&[("alpha", 1)]), LR)
        .step("S6circ", 1, params(&[("alpha", 1), ("beta", 3)]), LR)
        .step("S6circ", 0, params(&[("alpha", 1), ("beta", 2)]), LR)
        .step("S6circ", 0, params(&[("alpha", 3), ("beta", 1)]), LR);
    s.finish(&circ("input a; output a"))
}

fn fixed_zx(id: &str, p: Params) -> (ZxDiagram, ZxDiagram) {
    let r = zx_rule_catalog(id, &p).unwrap();
    (r.lhs, r.rhs)
}

fn s1_from_assoc() -> Script {
    let r = circ_rule_catalog("S1circ", 1, &Params::new()).unwrap();
    let (initial, target) = (circuit_to_zx(&r.lhs), circuit_to_zx(&r.rhs));
    let mut s = ZxScript::new(&initial);
    s.step("S'", Params::new(), LR, &any)
        .step("S'", Params::new(), LR, &any)
        .step("S1.red", params(&[("a", 2), ("b", 2)]), LR, &any)
        .step("S1.red", params(&[("a", 2), ("b", 2)]), RL, &first_stubs(2, vec![I0, O0]))
        .step("S'", Params::new(), RL, &on_edge(is(X0), is(X0)))
        .last("S'", Params::new(), RL, &target);
    s.finish(&target)
}

fn b1_from_b1prime() -> Script {
    let (initial, target) = fixed_zx("B1.green", Params::new());
    let mut s = ZxScript::new(&initial);
    s.step("S'.red", Params::new(), RL, &on_edge(is(Z0), is(O1))).last("B1'", Params::new(), LR, &target);
    s.finish(&target)
}

fn b1prime_from_b1() -> Script {
    let (initial, target) = fixed_zx("B1'", Params::new());
    let mut s = ZxScript::new(&initial);
    s.step("B1.green", Params::new(), LR, &any)
        .step("S1.red", params(&[("a", 0), ("b", 2)]), LR, &any)
        .last("S2.red", Params::new(), LR, &target);
    s.finish(&target)
}

fn b2_from_b2prime() -> Script {
    let (initial, target) = fixed_zx("B2", Params::new());
    let mut s = ZxScript::new(&initial);
    s.last("B2'", Params::new(), LR, &target);
    s.finish(&target)
}

fn b2prime_from_b2() -> Script {
    let (initial, target) = fixed_zx("B2'", Params::new());
    let mut s = ZxScript::new(&initial);
    s.last("B2", Params::new(), LR, &target);
    s.finish(&target)
}

fn k1_from_k1prime() -> Script {
    let (initial, target) = fixed_zx("K1.green", Params::new());
    let mut s = ZxScript::new(&initial);
    s.step("S'.red", Params::new(), RL, &on_edge(is(Z0), is(O1)))
        .step("K1'", Params::new(), LR, &any)
        .last("S1.red", params(&[("alpha", 0), ("beta", 2), ("a", 0), ("b", 1)]), LR, &target);
    s.finish(&target)
}

fn k1prime_from_k1() -> Script {
    let (initial, target) = fixed_zx("K1'", Params::new());
    let mut s = ZxScript::new(&initial);
    s.step("K1.green", Params::new(), LR, &any)
        .last("S1.red", params(&[("alpha", 2), ("beta", 0), ("a", 0), ("b", 2)]), LR, &target);
    s.finish(&target)
}

fn ccirc_target(side_rhs: bool) -> ZxDiagram {
    let p = params(&[("n", 2), ("m", 2), ("mid_in", 1), ("mid_out", 1), ("alpha", 1)]);
    let r = circ_rule_catalog_bounded("Ccirc", 0, &p, Bounds { max_arity: 6, ccirc_max: 6 }).unwrap();
    circuit_to_zx(if side_rhs { &r.rhs } else { &r.lhs })
}

/// Splits a six-legged spider into the chain of a colour-change circuit:
/// `{r1, r2} - {mid in} - α - {mid out} - {a2, a3}`.
fn splits(s: &mut ZxScript, rule: &str, plain: VertexKind, phased: VertexKind, boxed: bool) {
    let both = |a: VertexKind, b: VertexKind| {
        move |h: &ZxDiagram, bd: &ZxBinding| {
            let got = kinds(h, &bd.stubs[..2]);
            let ok = |want: VertexKind, v: usize| {
                if boxed && want.is_boundary() {
                    h_next_to(want)(h, v)
                } else {
                    h.kind(v) == want
                }
            };
            got.len() == 2
                && ((ok(a, bd.stubs[0]) && ok(b, bd.stubs[1])) || (ok(a, bd.stubs[1]) && ok(b, bd.stubs[0])))
        }
    };
    s.step(rule, params(&[("alpha", 0), ("beta", 1), ("a", 2), ("b", 4)]), RL, &both(I0, I1))
        .step(rule, params(&[("alpha", 0), ("beta", 1), ("a", 2), ("b", 3)]), RL, &both(plain, I2))
        .step(rule, params(&[("alpha", 1), ("beta", 0), ("a", 1), ("b", 3)]), RL, &{
            move |h: &ZxDiagram, bd: &ZxBinding| h.kind(bd.stubs[0]) == plain
        })
        .step(rule, params(&[("alpha", 0), ("beta", 0), ("a", 2), ("b", 2)]), RL, &both(phased, O0));
}

fn c_lhs_to_cprime() -> Script {
    let (initial, _) = fixed_zx("C", params(&[("inputs", 3), ("outputs", 3), ("alpha", 1)]));
    let target = ccirc_target(false);
    let mut s = ZxScript::new(&initial);
    splits(&mut s, "S1.red", X0, XA, false);
    let red_with = |b: VertexKind| red_next_to(b);
    s.step("S'", Params::new(), RL, &on_edge(is(I0), red_with(I1)))
        .step("S'", Params::new(), RL, &on_edge(red_with(I1), red_with(I2)))
        .step("S'", Params::new(), RL, &on_edge(red_with(O0), red_with(O1)))
        .last("S'", Params::new(), RL, &target);
    s.finish(&target)
}

fn c_rhs_to_cprime() -> Script {
    let (_, initial) = fixed_zx("C", params(&[("inputs", 3), ("outputs", 3), ("alpha", 1)]));
    let target = ccirc_target(true);
    let mut s = ZxScript::new(&initial);
    splits(&mut s, "S1.green", Z0, ZA, true);
    let boxed = |b: VertexKind| h_next_to(b);
    let green_boxed = |b: VertexKind| {
        move |h: &ZxDiagram, v: usize| {
            h.kind(v) == Z0 && h.neighbors(v).keys().any(|&n| h_next_to(b)(h, n))
        }
    };
    s.step("S'.red", Params::new(), RL, &on_edge(boxed(I0), green_boxed(I1)))
        .step("S'.red", Params::new(), RL, &on_edge(green_boxed(I1), green_boxed(I2)))
        .step("S'.red", Params::new(), RL, &on_edge(green_boxed(O0), green_boxed(O1)))
        .last("S'.red", Params::new(), RL, &target);
    s.finish(&target)
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap_or_else(|e| panic!("writing {name}: {e}"));
}

fn check(script: &Script, accept: bool, name: &str) {
    let r = verify_script(script, Bounds::default()).unwrap();
    assert_eq!(r.accepted(), accept, "{name}:\n{}", r.to_text());
}

fn main() {
    let dir: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()).into();
    fs::create_dir_all(dir.join("corrupt")).unwrap();

    let circuits = [
        ("teleport.circ", "input a; prepplus b; prep0 c; cnot b c; cnot a b; postplus a; post0 b; output c"),
        ("id1.circ", "input a; output a"),
        ("cnot.circ", "input a b; cnot a b; output a b"),
        ("swap.circ", "input a b; swap a b; output a b"),
        (
            "mbqc_cnot.circ",
            "input r0 r1; prepplus r2; prepplus r3; h r3; cnot r2 r3; h r2; h r3; cnot r1 r2; h r2; swap r0 r1; \
             h r2; cnot r1 r2; h r2; postplus r0; postplus r2; output r1 r3",
        ),
        ("hadamard.circ", "input a; h a; output a"),
        ("phases.circ", "input a; rz a 1; rz a 1; output a"),
    ];
    for (name, text) in circuits {
        write(&dir, name, &circ(text).to_text());
    }

    let scripts: Vec<(&str, Script)> = vec![
        ("teleport.deriv", teleport()),
        ("s1_from_assoc.zxderiv", s1_from_assoc()),
        ("b1_from_b1prime.zxderiv", b1_from_b1prime()),
        ("b1prime_from_b1.zxderiv", b1prime_from_b1()),
        ("b2_from_b2prime.zxderiv", b2_from_b2prime()),
        ("b2prime_from_b2.zxderiv", b2prime_from_b2()),
        ("k1_from_k1prime.zxderiv", k1_from_k1prime()),
        ("k1prime_from_k1.zxderiv", k1prime_from_k1()),
        ("c_lhs_to_cprime.zxderiv", c_lhs_to_cprime()),
        ("c_rhs_to_cprime.zxderiv", c_rhs_to_cprime()),
    ];
    for (name, s) in &scripts {
        check(s, true, name);
        write(&dir, name, &(s.to_json() + "\n"));
    }
    let get = |name: &str| scripts.iter().find(|(n, _)| *n == name).unwrap().1.clone();

    let mut bad = get("teleport.deriv");
    bad.steps[3].rule = "S5circ".into();
    check(&bad, false, "teleport_bad.deriv");
    write(&dir, "teleport_bad.deriv", &(bad.to_json() + "\n"));

    for (name, s) in corruptions(&get) {
        check(&s, false, &name);
        write(&dir.join("corrupt"), &name, &(s.to_json() + "\n"));
    }
    let names: BTreeSet<String> = fs::read_dir(dir.join("corrupt")).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names.len(), 20, "{names:?}");
    println!("wrote {} scripts and 20 corrupted variants to {}", scripts.len() + 1, dir.display());
}

fn corruptions(get: &dyn Fn(&str) -> Script) -> Vec<(String, Script)> {
    let mut out = Vec::new();
    let mut add = |name: &str, base: &str, f: &dyn Fn(&mut Script)| {
        let mut s = get(base);
        f(&mut s);
        out.push((format!("{name}.{}", if s.kind == ScriptKind::Zx { "zxderiv" } else { "deriv" }), s));
    };

    // Wrong rule id.
    add("rule_teleport_s5", "teleport.deriv", &|s| s.steps[3].rule = "S5circ".into());
    add("rule_teleport_k2_for_s6", "teleport.deriv", &|s| s.steps[8].rule = "K2circ".into());
    add("rule_b1_unknown_k1", "b1_from_b1prime.zxderiv", &|s| s.steps[1].rule = "K1".into());
    add("rule_b1prime_k1", "b1prime_from_b1.zxderiv", &|s| s.steps[0].rule = "K1.green".into());
    add("rule_k1_b1prime", "k1_from_k1prime.zxderiv", &|s| s.steps[1].rule = "B1'".into());

    // Wrong direction.
    add("dir_teleport_hcirc", "teleport.deriv", &|s| s.steps[6].direction = RL);
    add("dir_teleport_ccirc", "teleport.deriv", &|s| s.steps[1].direction = RL);
    add("dir_b2", "b2_from_b2prime.zxderiv", &|s| s.steps[0].direction = RL);
    add("dir_s1_assoc", "s1_from_assoc.zxderiv", &|s| s.steps[0].direction = RL);
    add("dir_c_lhs", "c_lhs_to_cprime.zxderiv", &|s| s.steps[0].direction = LR);

    // Stale anchor: the binding points at the wrong place.
    add("anchor_teleport_shifted", "teleport.deriv", &|s| {
        if let Anchor::Circuit(b) = &mut s.steps[4].binding {
            b.gates.iter_mut().for_each(|g| *g += 1);
        }
    });
    add("anchor_teleport_reused", "teleport.deriv", &|s| s.steps[10].binding = s.steps[9].binding.clone());
    add("anchor_b1_vertex", "b1_from_b1prime.zxderiv", &|s| {
        if let Anchor::Zx(b) = &mut s.steps[1].binding {
            b.vertices.reverse();
        }
    });
    add("anchor_k1prime_stub", "k1prime_from_k1.zxderiv", &|s| {
        if let Anchor::Zx(b) = &mut s.steps[1].binding {
            b.stubs.push(0);
        }
    });
    add("anchor_c_rhs_match", "c_rhs_to_cprime.zxderiv", &|s| s.steps[5].binding = Anchor::Match { index: 999 });

    // Wrong target.
    add("target_teleport_h", "teleport.deriv", &|s| s.target = "input a; h a; output a".into());
    add("target_teleport_two_wires", "teleport.deriv", &|s| s.target = "input a b; output a b".into());
    add("target_b2prime", "b2prime_from_b2.zxderiv", &|s| {
        s.target = get("b2prime_from_b2.zxderiv").initial;
    });
    add("target_k1_phase", "k1_from_k1prime.zxderiv", &|s| s.target = s.target.replace("X phase 2", "X phase 1"));
    add("target_c_lhs_swapped", "c_lhs_to_cprime.zxderiv", &|s| s.target = get("c_rhs_to_cprime.zxderiv").target);
    out
}
