//! Subcircuit matching and splicing on the port graph.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::CircuitRule;
use crate::circuit::{Dag, Dst, Src};
use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::rules::Direction;

/// A host wire segment, named by its producer end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SegRef {
    /// The segment leaving circuit input `input`.
    Input { input: usize },
    /// The segment leaving out-port `port` of instruction `gate`.
    Gate { gate: usize, port: usize },
}

impl SegRef {
    fn src(self) -> Src {
        match self {
            SegRef::Input { input } => Src::Input(input),
            SegRef::Gate { gate, port } => Src::Gate(gate, port),
        }
    }

    fn from_src(s: Src) -> Self {
        match s {
            Src::Input(input) => SegRef::Input { input },
            Src::Gate(gate, port) => SegRef::Gate { gate, port },
        }
    }
}

/// Where a rule side sits in a host circuit.
///
/// `gates[k]` is the host instruction index matched by the pattern's `k`-th
/// instruction; `wires[k]` is the host segment carrying the pattern's `k`-th
/// bare wire (an input wired straight to an output).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CircuitBinding {
    pub gates: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wires: Vec<SegRef>,
}

fn port(flip: bool, p: usize) -> usize {
    if flip {
        1 - p
    } else {
        p
    }
}

struct Pattern {
    dag: Dag,
    /// Search order: each node after the first of its component touches an
    /// earlier one.
    order: Vec<usize>,
    /// Bare wires as (input, output) pairs, in input order.
    wires: Vec<(usize, usize)>,
}

impl Pattern {
    fn new(c: &Circuit) -> Self {
        let dag = Dag::from_circuit(c);
        let n = c.len();
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        while order.len() < n {
            let start = (0..n).find(|&i| !placed[i]).unwrap();
            placed[start] = true;
            order.push(start);
            let mut k = order.len() - 1;
            while k < order.len() {
                let u = order[k];
                for v in neighbours(&dag, u) {
                    if !placed[v] {
                        placed[v] = true;
                        order.push(v);
                    }
                }
                k += 1;
            }
        }
        let mut wires = Vec::new();
        for i in 0..dag.n_inputs() {
            if let Dst::Output(j) = dag.segment(dag.input_segment(i).unwrap()).unwrap().dst {
                wires.push((i, j));
            }
        }
        Pattern { dag, order, wires }
    }
}

fn neighbours(dag: &Dag, u: usize) -> Vec<usize> {
    let node = dag.node(u).unwrap();
    let mut out = Vec::new();
    for s in node.ins.iter().chain(&node.outs).flatten() {
        let seg = dag.segment(*s).unwrap();
        if let Src::Gate(m, _) = seg.src {
            if m != u {
                out.push(m);
            }
        }
        if let Dst::Gate(m, _) = seg.dst {
            if m != u {
                out.push(m);
            }
        }
    }
    out
}

/// Gate assignment: pattern node -> (host node, swap flipped).
type Assign = Vec<Option<(usize, bool)>>;

struct Search<'a> {
    pat: &'a Pattern,
    host: &'a Dag,
    assign: Assign,
    used: HashSet<usize>,
    found: Vec<Vec<(usize, bool)>>,
    limit: usize,
}

impl Search<'_> {
    fn consistent(&self, u: usize) -> bool {
        let (h, fu) = self.assign[u].unwrap();
        let pn = self.pat.dag.node(u).unwrap();
        let hn = self.host.node(h).unwrap();
        for (p, s) in pn.ins.iter().enumerate() {
            if let Src::Gate(v, q) = self.pat.dag.segment(s.unwrap()).unwrap().src {
                if let Some((hv, fv)) = self.assign[v] {
                    let hs = self.host.segment(hn.ins[port(fu, p)].unwrap()).unwrap();
                    if hs.src != Src::Gate(hv, port(fv, q)) {
                        return false;
                    }
                }
            }
        }
        for (p, s) in pn.outs.iter().enumerate() {
            if let Dst::Gate(v, q) = self.pat.dag.segment(s.unwrap()).unwrap().dst {
                if let Some((hv, fv)) = self.assign[v] {
                    let hs = self.host.segment(hn.outs[port(fu, p)].unwrap()).unwrap();
                    if hs.dst != Dst::Gate(hv, port(fv, q)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if k == self.pat.order.len() {
            let full: Vec<(usize, bool)> = self.assign.iter().map(|a| a.unwrap()).collect();
            if stubs_leave_image(self.pat, self.host, &full) {
                self.found.push(full);
            }
            return;
        }
        let u = self.pat.order[k];
        let kind = self.pat.dag.node(u).unwrap().kind;
        let flips: &[bool] = if kind == GateKind::Swap { &[false, true] } else { &[false] };
        let hosts: Vec<usize> = self.host.node_ids().collect();
        for h in hosts {
            if self.used.contains(&h) || self.host.node(h).unwrap().kind != kind {
                continue;
            }
            for &f in flips {
                self.assign[u] = Some((h, f));
                if self.consistent(u) {
                    self.used.insert(h);
                    self.run(k + 1);
                    self.used.remove(&h);
                }
                self.assign[u] = None;
            }
        }
    }
}

/// Every pattern stub must meet a host segment whose far end lies outside
/// the image.
fn stubs_leave_image(pat: &Pattern, host: &Dag, full: &[(usize, bool)]) -> bool {
    let image: HashSet<usize> = full.iter().map(|a| a.0).collect();
    for (u, &(h, f)) in full.iter().enumerate() {
        let pn = pat.dag.node(u).unwrap();
        let hn = host.node(h).unwrap();
        for (p, s) in pn.ins.iter().enumerate() {
            if let Src::Input(_) = pat.dag.segment(s.unwrap()).unwrap().src {
                if let Src::Gate(m, _) = host.segment(hn.ins[port(f, p)].unwrap()).unwrap().src {
                    if image.contains(&m) {
                        return false;
                    }
                }
            }
        }
        for (p, s) in pn.outs.iter().enumerate() {
            if let Dst::Output(_) = pat.dag.segment(s.unwrap()).unwrap().dst {
                if let Dst::Gate(m, _) = host.segment(hn.outs[port(f, p)].unwrap()).unwrap().dst {
                    if image.contains(&m) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// No path may leave the image and come back.
fn convex(host: &Dag, image: &HashSet<usize>) -> bool {
    let mut seen: HashSet<usize> = HashSet::new();
    let mut stack: Vec<usize> =
        image.iter().flat_map(|&n| host.successors(n)).filter(|m| !image.contains(m)).collect();
    while let Some(n) = stack.pop() {
        if !seen.insert(n) {
            continue;
        }
        for m in host.successors(n) {
            if image.contains(&m) {
                return false;
            }
            stack.push(m);
        }
    }
    true
}

fn seg_touches(host: &Dag, seg: usize, image: &HashSet<usize>) -> bool {
    let s = host.segment(seg).unwrap();
    matches!(s.src, Src::Gate(n, _) if image.contains(&n)) || matches!(s.dst, Dst::Gate(n, _) if image.contains(&n))
}

/// Replaces the matched image by `rep`. Returns the rewritten circuit.
fn splice(
    pat: &Pattern,
    rep: &Circuit,
    host: &Dag,
    full: &[(usize, bool)],
    wire_segs: &[usize],
) -> Result<Circuit> {
    let pd = &pat.dag;
    let mut g = host.clone();
    let n_in = pd.n_inputs();
    let n_out = pd.n_outputs();
    let mut ext_src: Vec<Option<Src>> = vec![None; n_in];
    let mut ext_dst: Vec<Option<Dst>> = vec![None; n_out];
    for (u, &(h, f)) in full.iter().enumerate() {
        let pn = pd.node(u).unwrap();
        let hn = host.node(h).unwrap();
        for (p, s) in pn.ins.iter().enumerate() {
            if let Src::Input(i) = pd.segment(s.unwrap()).unwrap().src {
                ext_src[i] = Some(host.segment(hn.ins[port(f, p)].unwrap()).unwrap().src);
            }
        }
        for (p, s) in pn.outs.iter().enumerate() {
            if let Dst::Output(j) = pd.segment(s.unwrap()).unwrap().dst {
                ext_dst[j] = Some(host.segment(hn.outs[port(f, p)].unwrap()).unwrap().dst);
            }
        }
    }
    for (&(i, j), &s) in pat.wires.iter().zip(wire_segs) {
        let seg = host.segment(s).unwrap();
        ext_src[i] = Some(seg.src);
        ext_dst[j] = Some(seg.dst);
    }

    // Label each pattern wire with the host label it lands on, so prepared
    // wires in the replacement keep familiar names.
    let host_label = |s: Src| -> String {
        match s {
            Src::Input(i) => host.input_labels()[i].clone(),
            Src::Gate(n, p) => host.node(n).unwrap().hints[p].clone(),
        }
    };
    let mut labels: HashMap<String, String> = HashMap::new();
    for (i, l) in pd.input_labels().iter().enumerate() {
        labels.insert(l.clone(), host_label(ext_src[i].unwrap()));
    }
    for (u, &(h, _)) in full.iter().enumerate() {
        let pn = pd.node(u).unwrap();
        if pn.kind.is_prep() {
            labels.insert(pn.hints[0].clone(), host.node(h).unwrap().hints[0].clone());
        }
    }

    let base = full
        .iter()
        .map(|a| host.node(a.0).unwrap().key)
        .min()
        .or_else(|| {
            wire_segs.first().and_then(|&s| match host.segment(s).unwrap().dst {
                Dst::Gate(n, _) => Some(host.node(n).unwrap().key),
                Dst::Output(_) => None,
            })
        })
        .unwrap_or((usize::MAX / 2, 0));

    for &(h, _) in full {
        g.remove_node(h);
    }
    for &s in wire_segs {
        g.remove_segment(s);
    }

    let rd = Dag::from_circuit(rep);
    let mut new_id: HashMap<usize, usize> = HashMap::new();
    for (k, r) in rd.node_ids().enumerate() {
        let node = rd.node(r).unwrap();
        let hints = node.hints.iter().map(|l| labels.get(l).cloned().unwrap_or_else(|| l.clone())).collect();
        new_id.insert(r, g.add_node(node.kind, hints, (base.0, base.1 + k)));
    }
    for s in rd.segment_ids().collect::<Vec<_>>() {
        let seg = rd.segment(s).unwrap();
        let src = match seg.src {
            Src::Input(i) => ext_src[i].unwrap(),
            Src::Gate(n, p) => Src::Gate(new_id[&n], p),
        };
        let dst = match seg.dst {
            Dst::Output(j) => ext_dst[j].unwrap(),
            Dst::Gate(n, p) => Dst::Gate(new_id[&n], p),
        };
        g.connect(src, dst);
    }
    g.to_circuit()
}

/// Chooses distinct host segments for the bare wires of the pattern.
fn wire_choices(host: &Dag, image: &HashSet<usize>, k: usize) -> Vec<Vec<usize>> {
    let free: Vec<usize> = host.segment_ids().filter(|&s| !seg_touches(host, s, image)).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for prefix in &out {
            for &s in &free {
                if !prefix.contains(&s) {
                    let mut p = prefix.clone();
                    p.push(s);
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

fn binding_of(host: &Dag, full: &[(usize, bool)], wires: &[usize]) -> CircuitBinding {
    CircuitBinding {
        gates: full.iter().map(|a| a.0).collect(),
        wires: wires.iter().map(|&s| SegRef::from_src(host.segment(s).unwrap().src)).collect(),
    }
}

/// All places where the chosen side of `rule` occurs in `host` such that
/// replacing it yields a valid circuit. Results are sorted and distinct.
pub fn find_circ_matches(host: &Circuit, rule: &CircuitRule, dir: Direction) -> Vec<CircuitBinding> {
    find_circ_matches_limited(host, rule, dir, usize::MAX)
}

/// [`find_circ_matches`] stopping after `limit` gate embeddings.
pub fn find_circ_matches_limited(
    host: &Circuit,
    rule: &CircuitRule,
    dir: Direction,
    limit: usize,
) -> Vec<CircuitBinding> {
    let (lhs, rhs) = rule.sides(dir);
    let pat = Pattern::new(lhs);
    let hd = Dag::from_circuit(host);
    let mut search = Search {
        pat: &pat,
        host: &hd,
        assign: vec![None; lhs.len()],
        used: HashSet::new(),
        found: Vec::new(),
        limit,
    };
    search.run(0);
    let mut out: BTreeSet<CircuitBinding> = BTreeSet::new();
    for full in search.found {
        let image: HashSet<usize> = full.iter().map(|a| a.0).collect();
        if !convex(&hd, &image) {
            continue;
        }
        for wires in wire_choices(&hd, &image, pat.wires.len()) {
            if splice(&pat, rhs, &hd, &full, &wires).is_ok() {
                out.insert(binding_of(&hd, &full, &wires));
            }
        }
    }
    out.into_iter().collect()
}

/// Rewrites `host` at an explicit binding.
pub fn apply_circ_rule(
    host: &Circuit,
    rule: &CircuitRule,
    dir: Direction,
    binding: &CircuitBinding,
) -> Result<Circuit> {
    let (lhs, rhs) = rule.sides(dir);
    let pat = Pattern::new(lhs);
    let hd = Dag::from_circuit(host);
    let bad = |msg: String| Error::InvalidBinding(format!("{rule}: {msg}"));
    if binding.gates.len() != lhs.len() {
        return Err(bad(format!("expected {} gates, got {}", lhs.len(), binding.gates.len())));
    }
    if binding.wires.len() != pat.wires.len() {
        return Err(bad(format!("expected {} bare wires, got {}", pat.wires.len(), binding.wires.len())));
    }
    let image: HashSet<usize> = binding.gates.iter().copied().collect();
    if image.len() != binding.gates.len() {
        return Err(bad("a gate is bound twice".into()));
    }
    for (u, &h) in binding.gates.iter().enumerate() {
        let want = pat.dag.node(u).unwrap().kind;
        match hd.node(h) {
            None => return Err(bad(format!("instruction {h} does not exist"))),
            Some(n) if n.kind != want => {
                return Err(bad(format!("instruction {h} is {}, expected {}", n.kind.mnemonic(), want.mnemonic())))
            }
            _ => {}
        }
    }
    // Swap orientation is not part of the binding; try each.
    let swaps: Vec<usize> =
        (0..lhs.len()).filter(|&u| pat.dag.node(u).unwrap().kind == GateKind::Swap).collect();
    let mut full = None;
    for mask in 0..(1usize << swaps.len()) {
        let mut cand: Vec<(usize, bool)> = binding.gates.iter().map(|&h| (h, false)).collect();
        for (b, &u) in swaps.iter().enumerate() {
            cand[u].1 = mask >> b & 1 == 1;
        }
        let search = Search {
            pat: &pat,
            host: &hd,
            assign: cand.iter().map(|&a| Some(a)).collect(),
            used: HashSet::new(),
            found: Vec::new(),
            limit: 0,
        };
        if (0..lhs.len()).all(|u| search.consistent(u)) && stubs_leave_image(&pat, &hd, &cand) {
            full = Some(cand);
            break;
        }
    }
    let full = full.ok_or_else(|| bad("gates are not connected as in the pattern".into()))?;
    if !convex(&hd, &image) {
        return Err(bad("matched gates are not convex".into()));
    }
    let mut wires = Vec::new();
    for w in &binding.wires {
        let s = match w.src() {
            Src::Input(i) if i < hd.n_inputs() => hd.seg_from(Src::Input(i)),
            Src::Gate(n, p) if hd.node(n).is_some_and(|x| p < x.outs.len()) => hd.seg_from(Src::Gate(n, p)),
            _ => None,
        }
        .ok_or_else(|| bad(format!("no wire segment at {w:?}")))?;
        if seg_touches(&hd, s, &image) || wires.contains(&s) {
            return Err(bad(format!("wire segment {w:?} overlaps the match")));
        }
        wires.push(s);
    }
    splice(&pat, rhs, &hd, &full, &wires)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_rules::circ_rule_catalog;
    use crate::rules::{params, Params};

    fn c(s: &str) -> Circuit {
        Circuit::parse(&s.replace(';', "\n")).unwrap()
    }

    #[test]
    fn hadamard_expands_in_place() {
        let host = c("input a b; cnot a b; h b; output a b");
        let rule = circ_rule_catalog("Hcirc", 0, &Params::new()).unwrap();
        let ms = find_circ_matches(&host, &rule, Direction::Lr);
        assert_eq!(ms, vec![CircuitBinding { gates: vec![1], wires: vec![] }]);
        let out = apply_circ_rule(&host, &rule, Direction::Lr, &ms[0]).unwrap();
        assert!(out.structurally_equal(&c("input a b; cnot a b; rz b 1; rx b 1; rz b 1; output a b")));
    }

    #[test]
    fn bare_wire_binds_a_segment() {
        let host = c("input a; rz a 1; output a");
        let rule = circ_rule_catalog("S6circ", 0, &params(&[("alpha", 1), ("beta", 3)])).unwrap();
        let ms = find_circ_matches(&host, &rule, Direction::Rl);
        assert_eq!(ms.len(), 2);
        let out = apply_circ_rule(&host, &rule, Direction::Rl, &ms[0]).unwrap();
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn non_convex_match_is_rejected() {
        // cnot a b; h a; cnot a b would match S5-like two-cnot patterns only
        // through the Hadamard.
        let host = c("input a b; cnot a b; h a; cnot a b; output a b");
        let rule = circ_rule_catalog("B2circ", 0, &Params::new()).unwrap();
        assert!(find_circ_matches(&host, &rule, Direction::Lr).is_empty());
    }

    #[test]
    fn swap_matches_either_way_round() {
        let host = c("input a b; swap b a; cnot a b; output a b");
        let rule = circ_rule_catalog("B2circ", 1, &Params::new()).unwrap();
        let ms = find_circ_matches(&host, &rule, Direction::Rl);
        assert_eq!(ms.len(), 1);
        let out = apply_circ_rule(&host, &rule, Direction::Rl, &ms[0]).unwrap();
        assert!(out.structurally_equal(&c("input a b; cnot b a; swap a b; output a b")));
    }

    #[test]
    fn bad_bindings() {
        let host = c("input a b; cnot a b; h b; output a b");
        let rule = circ_rule_catalog("Hcirc", 0, &Params::new()).unwrap();
        let b = |g: Vec<usize>| CircuitBinding { gates: g, wires: vec![] };
        assert!(matches!(apply_circ_rule(&host, &rule, Direction::Lr, &b(vec![0])), Err(Error::InvalidBinding(_))));
        assert!(apply_circ_rule(&host, &rule, Direction::Lr, &b(vec![7])).is_err());
        assert!(apply_circ_rule(&host, &rule, Direction::Lr, &b(vec![])).is_err());
    }

    #[test]
    fn binding_json_shape() {
        let b = CircuitBinding { gates: vec![1, 2], wires: vec![SegRef::Input { input: 0 }, SegRef::Gate { gate: 3, port: 1 }] };
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"gates":[1,2],"wires":[{"input":0},{"gate":3,"port":1}]}"#);
        assert_eq!(serde_json::from_str::<CircuitBinding>(&s).unwrap(), b);
    }
}
