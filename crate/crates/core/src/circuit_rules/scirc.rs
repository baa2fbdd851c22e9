//! Removing trivial preparations and postselections around CNOTs.
//!
//! A site names a CNOT and one of its four legs that is closed by a same-
//! colour state or effect. Every site of a binding is removed at once in the
//! ZX picture, then a circuit is read back off the diagram by pairing each
//! remaining three-legged green spider with an adjacent red one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Dag, Dst, GateKind, Src};
use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::zx::{circuit_to_zx_mapped, VertexKind, ZxDiagram};

/// Which leg of the CNOT is closed off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScircFragment {
    /// `prepplus` feeding the control.
    PlusControl,
    /// `prep0` feeding the target.
    ZeroTarget,
    /// Control followed by `postplus`.
    ControlPostplus,
    /// Target followed by `post0`.
    TargetPostzero,
}

impl std::fmt::Display for ScircFragment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScircFragment::PlusControl => "plus-control",
            ScircFragment::ZeroTarget => "zero-target",
            ScircFragment::ControlPostplus => "control-postplus",
            ScircFragment::TargetPostzero => "target-postzero",
        })
    }
}

impl ScircFragment {
    pub const ALL: [ScircFragment; 4] = [
        ScircFragment::PlusControl,
        ScircFragment::ZeroTarget,
        ScircFragment::ControlPostplus,
        ScircFragment::TargetPostzero,
    ];

    /// (CNOT port, closing gate, closing gate comes first)
    fn shape(self) -> (usize, GateKind, bool) {
        match self {
            ScircFragment::PlusControl => (0, GateKind::PrepPlus, true),
            ScircFragment::ZeroTarget => (1, GateKind::PrepZero, true),
            ScircFragment::ControlPostplus => (0, GateKind::PostPlus, false),
            ScircFragment::TargetPostzero => (1, GateKind::PostZero, false),
        }
    }
}

/// One removable fragment: a CNOT instruction index and the closed leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScircSite {
    pub fragment: ScircFragment,
    pub gate: usize,
}

/// The instruction closing a site's leg, if the site is present.
fn closer(dag: &Dag, site: ScircSite) -> Option<usize> {
    let node = dag.node(site.gate)?;
    if node.kind != GateKind::Cnot {
        return None;
    }
    let (p, kind, before) = site.fragment.shape();
    let seg = if before { node.ins[p] } else { node.outs[p] };
    let seg = dag.segment(seg?)?;
    let other = if before {
        match seg.src {
            Src::Gate(n, _) => n,
            Src::Input(_) => return None,
        }
    } else {
        match seg.dst {
            Dst::Gate(n, _) => n,
            Dst::Output(_) => return None,
        }
    };
    (dag.node(other)?.kind == kind).then_some(other)
}

/// Every site present in `c`, sorted.
pub fn candidate_sites(c: &Circuit) -> Vec<ScircSite> {
    let dag = Dag::from_circuit(c);
    let mut out = Vec::new();
    for gate in 0..c.len() {
        for fragment in ScircFragment::ALL {
            let s = ScircSite { fragment, gate };
            if closer(&dag, s).is_some() {
                out.push(s);
            }
        }
    }
    out
}

/// Every non-empty set of sites whose removal reads back as a circuit.
/// Candidate sets are enumerated up to `max_sites` sites at a time.
pub fn find_scirc_sites(c: &Circuit, max_sites: usize) -> Vec<Vec<ScircSite>> {
    let cands = candidate_sites(c);
    let mut out = Vec::new();
    let n = cands.len().min(16);
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > max_sites {
            continue;
        }
        let set: Vec<ScircSite> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| cands[b]).collect();
        if splice_scirc(c, &set).is_ok() {
            out.push(set);
        }
    }
    out
}

/// Removes every site in `sites` and reads the result back as a circuit.
pub fn splice_scirc(c: &Circuit, sites: &[ScircSite]) -> Result<Circuit> {
    if sites.is_empty() {
        return Err(Error::InvalidBinding("Scirc: no sites given".into()));
    }
    let dag = Dag::from_circuit(c);
    let (mut d, origin) = circuit_to_zx_mapped(c);
    let mut by_instr: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&v, &n) in &origin {
        by_instr.entry(n).or_default().push(v);
    }
    let mut seen = BTreeSet::new();
    let mut touched = BTreeSet::new();
    for &s in sites {
        if !seen.insert(s) {
            return Err(Error::InvalidBinding(format!("Scirc: site {s:?} repeated")));
        }
        let other = closer(&dag, s)
            .ok_or_else(|| Error::InvalidBinding(format!("Scirc: no {:?} fragment at instruction {}", s.fragment, s.gate)))?;
        let state = by_instr[&other][0];
        let want_z = s.fragment.shape().0 == 0;
        let spider = *by_instr[&s.gate]
            .iter()
            .find(|&&v| matches!(d.kind(v), VertexKind::Z(_)) == want_z)
            .unwrap();
        d.remove_vertex(state);
        touched.insert(spider);
    }
    for v in touched {
        if d.degree(v) == 2 && d.self_loops(v) == 0 {
            dissolve(&mut d, v);
        }
    }
    let prep_labels: HashMap<usize, String> = origin
        .iter()
        .filter(|(_, &n)| c.instrs()[n].kind.is_prep())
        .map(|(&v, &n)| (v, c.instrs()[n].wires[0].clone()))
        .collect();
    extract(&d, c.inputs().to_vec(), &origin, &prep_labels)
}

/// Replaces a plain two-legged spider by a wire.
fn dissolve(d: &mut ZxDiagram, v: usize) {
    let nb: Vec<usize> = d.neighbors(v).iter().flat_map(|(&u, &k)| std::iter::repeat(u).take(k)).collect();
    d.remove_vertex(v);
    d.add_edge(nb[0], nb[1]);
}

fn no_circuit(msg: impl Into<String>) -> Error {
    Error::NoValidCircuit(msg.into())
}

/// Reads a circuit off a diagram built from CNOTs, single-qubit gates and
/// computational or Hadamard basis states.
pub(crate) fn extract(
    d: &ZxDiagram,
    input_labels: Vec<String>,
    origin: &BTreeMap<usize, usize>,
    prep_labels: &HashMap<usize, String>,
) -> Result<Circuit> {
    let mut d = d.clone();
    let plain: Vec<usize> =
        d.vertices().filter(|&v| d.kind(v).phase() == Some(Phase::ZERO) && d.degree(v) == 2 && d.self_loops(v) == 0).collect();
    for v in plain {
        dissolve(&mut d, v);
    }
    let mut zs = Vec::new();
    let mut xs = BTreeSet::new();
    for v in d.vertices() {
        let k = d.kind(v);
        if d.self_loops(v) > 0 {
            return Err(no_circuit(format!("vertex {v} has a self-loop")));
        }
        let deg = d.degree(v);
        if k.is_boundary() {
            continue;
        }
        match (deg, k) {
            (2, _) => {}
            (1 | 3, VertexKind::Z(p) | VertexKind::X(p)) if !p.is_zero() => {
                return Err(no_circuit(format!("spider {v} of degree {deg} carries phase {p}")))
            }
            (1, _) => {}
            (3, VertexKind::Z(_)) => zs.push(v),
            (3, VertexKind::X(_)) => {
                xs.insert(v);
            }
            _ => return Err(no_circuit(format!("vertex {v} has degree {deg}"))),
        }
    }
    if zs.len() != xs.len() {
        return Err(no_circuit("green and red branch points do not pair up"));
    }
    let mut ex = Extractor { d: &d, input_labels, origin, prep_labels, zs, pairs: Vec::new(), budget: 20_000 };
    let mut free = xs;
    ex.pair(0, &mut free).ok_or_else(|| no_circuit("no pairing of branch points reads as a circuit"))
}

struct Extractor<'a> {
    d: &'a ZxDiagram,
    input_labels: Vec<String>,
    origin: &'a BTreeMap<usize, usize>,
    prep_labels: &'a HashMap<usize, String>,
    zs: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    budget: usize,
}

impl Extractor<'_> {
    fn pair(&mut self, k: usize, free: &mut BTreeSet<usize>) -> Option<Circuit> {
        if self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        if k == self.zs.len() {
            return self.build().ok();
        }
        let z = self.zs[k];
        let mut cands: Vec<usize> =
            self.d.neighbors(z).iter().filter(|(u, &m)| m == 1 && free.contains(u)).map(|(&u, _)| u).collect();
        // Pairs that came from one CNOT are tried first.
        let oz = self.origin.get(&z);
        cands.sort_by_key(|u| (self.origin.get(u) != oz || oz.is_none(), *u));
        for x in cands {
            free.remove(&x);
            self.pairs.push((z, x));
            if let Some(c) = self.pair(k + 1, free) {
                return Some(c);
            }
            self.pairs.pop();
            free.insert(x);
        }
        None
    }

    fn build(&self) -> Result<Circuit> {
        let d = self.d;
        let mut partner: HashMap<usize, usize> = HashMap::new();
        for &(z, x) in &self.pairs {
            partner.insert(z, x);
            partner.insert(x, z);
        }
        // Track neighbours: every edge except the pairing edges.
        let track = |v: usize| -> Vec<usize> {
            let mut out = Vec::new();
            for (&u, &m) in d.neighbors(v) {
                let skip = usize::from(partner.get(&v) == Some(&u));
                out.extend(std::iter::repeat(u).take(m - skip));
            }
            out
        };
        let is_end = |v: usize| d.kind(v).is_boundary() || d.degree(v) == 1;

        let n_out = d.outputs().len();
        let mut dag = Dag::new(self.input_labels.clone(), n_out);
        let mut node_of: HashMap<usize, (usize, usize)> = HashMap::new();
        let key = |v: usize| (self.origin.get(&v).copied().unwrap_or(usize::MAX / 2), 0);
        for &(z, x) in &self.pairs {
            let id = dag.add_node(GateKind::Cnot, vec!["w".into(), "w".into()], key(z).min(key(x)));
            node_of.insert(z, (id, 0));
            node_of.insert(x, (id, 1));
        }
        for v in d.vertices() {
            if partner.contains_key(&v) || d.kind(v).is_boundary() || d.degree(v) != 2 {
                continue;
            }
            let kind = match d.kind(v) {
                VertexKind::Z(p) => GateKind::RotZ(p),
                VertexKind::X(p) => GateKind::RotX(p),
                VertexKind::H => GateKind::H,
                _ => unreachable!(),
            };
            node_of.insert(v, (dag.add_node(kind, vec!["w".into()], key(v)), 0));
        }

        let mut visited: BTreeSet<usize> = BTreeSet::new();
        let ends: Vec<usize> = d.vertices().filter(|&v| is_end(v)).collect();
        for &start in &ends {
            if visited.contains(&start) {
                continue;
            }
            let mut path = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let nb = track(cur);
                let next = if cur == start {
                    nb[0]
                } else {
                    let mut it = nb.into_iter();
                    let a = it.next().unwrap();
                    let b = it.next().unwrap();
                    if a == prev {
                        b
                    } else {
                        a
                    }
                };
                prev = cur;
                cur = next;
                path.push(cur);
                if is_end(cur) {
                    break;
                }
            }
            for &v in &path {
                visited.insert(v);
            }
            let head = *path.first().unwrap();
            let tail = *path.last().unwrap();
            let is_in = |v: usize| matches!(d.kind(v), VertexKind::Input(_));
            let is_out = |v: usize| matches!(d.kind(v), VertexKind::Output(_));
            if (is_in(head) && is_in(tail)) || (is_out(head) && is_out(tail)) {
                return Err(no_circuit("a wire runs between two boundaries of the same side"));
            }
            if is_in(tail) || is_out(head) {
                path.reverse();
            }
            self.lay_track(&mut dag, &path, &node_of)?;
        }
        if node_of.keys().any(|v| !visited.contains(v)) {
            return Err(no_circuit("closed loop of gates"));
        }
        dag.to_circuit().map_err(|e| no_circuit(e.to_string()))
    }

    fn lay_track(&self, dag: &mut Dag, path: &[usize], node_of: &HashMap<usize, (usize, usize)>) -> Result<()> {
        let d = self.d;
        let first = path[0];
        let last = *path.last().unwrap();
        let key = |v: usize| (self.origin.get(&v).copied().unwrap_or(usize::MAX / 2), 0);
        let label = |v: usize| self.prep_labels.get(&v).cloned().unwrap_or_else(|| "w".into());
        let mut src = match d.kind(first) {
            VertexKind::Input(i) => Src::Input(i),
            VertexKind::Z(_) => Src::Gate(dag.add_node(GateKind::PrepPlus, vec![label(first)], key(first)), 0),
            VertexKind::X(_) => Src::Gate(dag.add_node(GateKind::PrepZero, vec![label(first)], key(first)), 0),
            _ => return Err(no_circuit("track starts inside the diagram")),
        };
        for &v in &path[1..path.len() - 1] {
            let (n, p) = node_of[&v];
            if dag.seg_into(Dst::Gate(n, p)).is_some() {
                return Err(no_circuit("gate port used twice"));
            }
            dag.connect(src, Dst::Gate(n, p));
            src = Src::Gate(n, p);
        }
        let dst = match d.kind(last) {
            VertexKind::Output(j) => Dst::Output(j),
            VertexKind::Z(_) => Dst::Gate(dag.add_node(GateKind::PostPlus, vec!["w".into()], key(last)), 0),
            VertexKind::X(_) => Dst::Gate(dag.add_node(GateKind::PostZero, vec!["w".into()], key(last)), 0),
            _ => return Err(no_circuit("track ends inside the diagram")),
        };
        dag.connect(src, dst);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_to_matrix;
    use crate::matrix::mat_proportional;

    fn c(s: &str) -> Circuit {
        Circuit::parse(&s.replace(';', "\n")).unwrap()
    }

    fn site(fragment: ScircFragment, gate: usize) -> ScircSite {
        ScircSite { fragment, gate }
    }

    #[test]
    fn two_sites_leave_one_cnot() {
        let host = c("input w1 w2; prepplus p; cnot p w2; cnot w2 w1; post0 w1; output w2 p");
        let sites = [site(ScircFragment::PlusControl, 1), site(ScircFragment::TargetPostzero, 2)];
        let out = splice_scirc(&host, &sites).unwrap();
        assert!(out.structurally_equal(&c("input a b; cnot a b; output a b")), "{}", out.to_text());
        let v = mat_proportional(&circuit_to_matrix(&out).unwrap(), &circuit_to_matrix(&host).unwrap()).unwrap();
        assert!(v.is_equivalent());
    }

    #[test]
    fn single_sites_of_the_example() {
        let host = c("input w1 w2; prepplus p; cnot p w2; cnot w2 w1; post0 w1; output w2 p");
        let cands = candidate_sites(&host);
        assert_eq!(cands, vec![site(ScircFragment::PlusControl, 1), site(ScircFragment::TargetPostzero, 2)]);
        let found = find_scirc_sites(&host, 4);
        assert!(found.contains(&cands));
    }

    #[test]
    fn missing_fragment_is_rejected() {
        let host = c("input a b; cnot a b; output a b");
        let err = splice_scirc(&host, &[site(ScircFragment::ZeroTarget, 0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidBinding(_)));
    }

    #[test]
    fn unreadable_result_is_reported() {
        // Closing the control on both sides leaves a dangling green state on
        // the red spider.
        let host = c("input a; prepplus p; cnot p a; postplus p; output a");
        let sites = [site(ScircFragment::PlusControl, 1), site(ScircFragment::ControlPostplus, 1)];
        match splice_scirc(&host, &sites) {
            Err(Error::NoValidCircuit(_)) => {}
            other => panic!("{other:?}"),
        }
    }
}
