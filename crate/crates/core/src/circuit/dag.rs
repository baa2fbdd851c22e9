//! Port-graph view of a circuit: gate nodes joined by wire segments.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet, VecDeque};

use super::{Circuit, GateKind, Instr};
use crate::error::{Error, Result};

/// Producer end of a wire segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Src {
    Input(usize),
    /// (node, out-port)
    Gate(usize, usize),
}

/// Consumer end of a wire segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dst {
    Output(usize),
    /// (node, in-port)
    Gate(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Node {
    pub kind: GateKind,
    pub ins: Vec<Option<usize>>,
    pub outs: Vec<Option<usize>>,
    /// Preferred label per port, used when converting back to text.
    pub hints: Vec<String>,
    /// Ordering key for deterministic linearization.
    pub key: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub src: Src,
    pub dst: Dst,
}

/// A circuit as a directed acyclic port graph.
///
/// Node `i` of a DAG built by [`Dag::from_circuit`] is instruction `i`.
#[derive(Clone, Debug)]
pub struct Dag {
    nodes: Vec<Option<Node>>,
    segs: Vec<Option<Segment>>,
    input_segs: Vec<Option<usize>>,
    output_segs: Vec<Option<usize>>,
    input_labels: Vec<String>,
}

impl Dag {
    pub fn new(input_labels: Vec<String>, n_outputs: usize) -> Self {
        Dag {
            nodes: Vec::new(),
            segs: Vec::new(),
            input_segs: vec![None; input_labels.len()],
            output_segs: vec![None; n_outputs],
            input_labels,
        }
    }

    pub fn from_circuit(c: &Circuit) -> Self {
        let mut dag = Dag::new(c.inputs().to_vec(), c.outputs().len());
        let mut live: HashMap<&str, Src> = HashMap::new();
        for (i, w) in c.inputs().iter().enumerate() {
            live.insert(w, Src::Input(i));
        }
        for (n, ins) in c.instrs().iter().enumerate() {
            let id = dag.add_node(ins.kind, ins.wires.clone(), (n, 0));
            if ins.kind.in_ports() > 0 {
                for (p, w) in ins.wires.iter().enumerate() {
                    let src = live[w.as_str()];
                    dag.connect(src, Dst::Gate(id, p));
                }
            }
            for (p, w) in ins.wires.iter().enumerate().take(ins.kind.out_ports()) {
                live.insert(w, Src::Gate(id, p));
            }
        }
        for (j, w) in c.outputs().iter().enumerate() {
            dag.connect(live[w.as_str()], Dst::Output(j));
        }
        dag
    }

    pub fn n_inputs(&self) -> usize {
        self.input_segs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.output_segs.len()
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn node(&self, id: usize) -> Option<&Node> {
        self.nodes.get(id).and_then(|n| n.as_ref())
    }

    pub fn node_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, n)| n.as_ref().map(|_| i))
    }

    pub fn segment(&self, id: usize) -> Option<Segment> {
        self.segs.get(id).copied().flatten()
    }

    pub fn segment_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.segs.iter().enumerate().filter_map(|(i, s)| s.map(|_| i))
    }

    pub fn input_segment(&self, i: usize) -> Option<usize> {
        self.input_segs[i]
    }

    pub fn output_segment(&self, j: usize) -> Option<usize> {
        self.output_segs[j]
    }

    /// Segment leaving a producer end.
    pub fn seg_from(&self, src: Src) -> Option<usize> {
        match src {
            Src::Input(i) => self.input_segs[i],
            Src::Gate(n, p) => self.node(n).and_then(|n| n.outs[p]),
        }
    }

    /// Segment entering a consumer end.
    pub fn seg_into(&self, dst: Dst) -> Option<usize> {
        match dst {
            Dst::Output(j) => self.output_segs[j],
            Dst::Gate(n, p) => self.node(n).and_then(|n| n.ins[p]),
        }
    }

    pub fn add_node(&mut self, kind: GateKind, hints: Vec<String>, key: (usize, usize)) -> usize {
        self.nodes.push(Some(Node {
            kind,
            ins: vec![None; kind.in_ports()],
            outs: vec![None; kind.out_ports()],
            hints,
            key,
        }));
        self.nodes.len() - 1
    }

    pub fn connect(&mut self, src: Src, dst: Dst) -> usize {
        let id = self.segs.len();
        self.segs.push(Some(Segment { src, dst }));
        match src {
            Src::Input(i) => self.input_segs[i] = Some(id),
            Src::Gate(n, p) => self.nodes[n].as_mut().expect("live node").outs[p] = Some(id),
        }
        match dst {
            Dst::Output(j) => self.output_segs[j] = Some(id),
            Dst::Gate(n, p) => self.nodes[n].as_mut().expect("live node").ins[p] = Some(id),
        }
        id
    }

    pub fn remove_segment(&mut self, id: usize) {
        let Some(seg) = self.segs[id].take() else { return };
        match seg.src {
            Src::Input(i) => self.input_segs[i] = None,
            Src::Gate(n, p) => {
                if let Some(node) = self.nodes[n].as_mut() {
                    node.outs[p] = None;
                }
            }
        }
        match seg.dst {
            Dst::Output(j) => self.output_segs[j] = None,
            Dst::Gate(n, p) => {
                if let Some(node) = self.nodes[n].as_mut() {
                    node.ins[p] = None;
                }
            }
        }
    }

    pub fn remove_node(&mut self, id: usize) {
        let Some(node) = self.nodes[id].clone() else { return };
        for s in node.ins.iter().chain(&node.outs).flatten() {
            self.remove_segment(*s);
        }
        self.nodes[id] = None;
    }

    /// Gate nodes directly downstream of `id`.
    pub fn successors(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(node) = self.node(id) {
            for s in node.outs.iter().flatten() {
                if let Some(Segment { dst: Dst::Gate(m, _), .. }) = self.segment(*s) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// Checks that every port is connected.
    pub fn check_complete(&self) -> Result<()> {
        if self.input_segs.iter().any(|s| s.is_none()) || self.output_segs.iter().any(|s| s.is_none()) {
            return Err(Error::InvalidCircuit("dangling boundary".into()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(n) = n {
                if n.ins.iter().chain(&n.outs).any(|s| s.is_none()) {
                    return Err(Error::InvalidCircuit(format!("dangling port on node {i}")));
                }
            }
        }
        Ok(())
    }

    /// Topological order of the gate nodes, smallest key first among ready
    /// nodes. Fails on a cycle.
    pub fn topo_order(&self) -> Result<Vec<usize>> {
        let mut indeg: HashMap<usize, usize> = HashMap::new();
        for id in self.node_ids() {
            let node = self.node(id).unwrap();
            let d = node
                .ins
                .iter()
                .flatten()
                .filter(|s| matches!(self.segment(**s).map(|s| s.src), Some(Src::Gate(..))))
                .count();
            indeg.insert(id, d);
        }
        let mut heap: BinaryHeap<Reverse<((usize, usize), usize)>> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&id, _)| Reverse((self.node(id).unwrap().key, id)))
            .collect();
        let mut order = Vec::with_capacity(indeg.len());
        while let Some(Reverse((_, id))) = heap.pop() {
            order.push(id);
            for m in self.successors(id) {
                let d = indeg.get_mut(&m).unwrap();
                *d -= 1;
                if *d == 0 {
                    heap.push(Reverse((self.node(m).unwrap().key, m)));
                }
            }
        }
        if order.len() != indeg.len() {
            return Err(Error::InvalidCircuit("rewrite produced a cyclic circuit".into()));
        }
        Ok(order)
    }

    /// Converts back to an instruction list, naming each wire track.
    pub fn to_circuit(&self) -> Result<Circuit> {
        self.check_complete()?;
        let order = self.topo_order()?;
        let mut used: BTreeSet<String> = BTreeSet::new();
        let mut port_label: HashMap<(usize, usize), String> = HashMap::new();
        let mut output_labels = vec![String::new(); self.n_outputs()];

        let mut follow = |start: Src, label: String, port_label: &mut HashMap<(usize, usize), String>| {
            let mut src = start;
            loop {
                let seg = self.segment(self.seg_from(src).unwrap()).unwrap();
                match seg.dst {
                    Dst::Output(j) => {
                        output_labels[j] = label;
                        break;
                    }
                    Dst::Gate(n, p) => {
                        port_label.insert((n, p), label.clone());
                        if self.node(n).unwrap().kind.out_ports() == 0 {
                            break;
                        }
                        src = Src::Gate(n, p);
                    }
                }
            }
        };

        for (i, l) in self.input_labels.iter().enumerate() {
            used.insert(l.clone());
            follow(Src::Input(i), l.clone(), &mut port_label);
        }
        for &id in &order {
            let node = self.node(id).unwrap();
            if node.kind.is_prep() {
                let hint = node.hints.first().cloned().unwrap_or_else(|| "w".into());
                let label = if used.contains(&hint) {
                    (0..).map(|i| format!("{hint}{i}")).find(|l| !used.contains(l)).unwrap()
                } else {
                    hint
                };
                used.insert(label.clone());
                port_label.insert((id, 0), label.clone());
                follow(Src::Gate(id, 0), label, &mut port_label);
            }
        }
        let instrs = order
            .iter()
            .map(|&id| {
                let node = self.node(id).unwrap();
                let wires = (0..node.kind.wire_count()).map(|p| port_label[&(id, p)].clone()).collect();
                Instr { kind: node.kind, wires }
            })
            .collect();
        Circuit::new(self.input_labels.clone(), output_labels, instrs)
    }

    /// A complete isomorphism invariant: two DAGs get the same key iff they
    /// are isomorphic with inputs and outputs matched by position.
    pub fn canonical_key(&self) -> Vec<u64> {
        let mut key = vec![self.n_inputs() as u64, self.n_outputs() as u64];
        let mut canon = Canon::new(self);
        let mut head = Vec::new();
        for i in 0..self.n_inputs() {
            let seg = self.segment(self.input_segs[i].unwrap()).unwrap();
            head.extend(canon.dst_token(seg.dst));
        }
        for j in 0..self.n_outputs() {
            let seg = self.segment(self.output_segs[j].unwrap()).unwrap();
            head.extend(canon.src_token(seg.src));
        }
        key.extend(head);
        key.extend(canon.drain());
        let seen = canon.ids.clone();
        // Components without boundary are keyed independently, then sorted.
        let mut rest: Vec<usize> = self.node_ids().filter(|n| !seen.contains_key(n)).collect();
        let mut comps: Vec<Vec<u64>> = Vec::new();
        while let Some(&start) = rest.first() {
            let comp = self.component(start);
            let mut best: Option<(Vec<u64>, HashMap<usize, (usize, bool)>)> = None;
            for &root in &comp {
                let flips: &[bool] =
                    if self.node(root).unwrap().kind == GateKind::Swap { &[false, true] } else { &[false] };
                for &flip in flips {
                    let mut c = Canon::new(self);
                    c.discover(root, flip);
                    let k = c.drain();
                    if best.as_ref().map_or(true, |(b, _)| k < *b) {
                        best = Some((k, c.ids));
                    }
                }
            }
            let (k, _) = best.unwrap();
            comps.push(k);
            rest.retain(|n| !comp.contains(n));
        }
        comps.sort();
        for c in comps {
            key.push(u64::MAX);
            key.extend(c);
        }
        key
    }

    fn component(&self, start: usize) -> HashSet<usize> {
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            let node = self.node(n).unwrap();
            for s in node.ins.iter().chain(&node.outs).flatten() {
                let seg = self.segment(*s).unwrap();
                let mut others = Vec::new();
                if let Src::Gate(m, _) = seg.src {
                    others.push(m);
                }
                if let Dst::Gate(m, _) = seg.dst {
                    others.push(m);
                }
                for m in others {
                    if seen.insert(m) {
                        queue.push_back(m);
                    }
                }
            }
        }
        seen
    }
}

fn kind_code(k: GateKind) -> u64 {
    match k {
        GateKind::Cnot => 1,
        GateKind::Swap => 2,
        GateKind::PrepZero => 3,
        GateKind::PrepPlus => 4,
        GateKind::PostZero => 5,
        GateKind::PostPlus => 6,
        GateKind::RotZ(p) => 10 + p.quarters() as u64,
        GateKind::RotX(p) => 20 + p.quarters() as u64,
        GateKind::H => 30,
    }
}

/// Canonical traversal state. Swap gates are symmetric, so a swap's port
/// numbering is fixed relative to the port it was first reached through.
struct Canon<'a> {
    dag: &'a Dag,
    ids: HashMap<usize, (usize, bool)>,
    queue: VecDeque<usize>,
}

impl<'a> Canon<'a> {
    fn new(dag: &'a Dag) -> Self {
        Canon { dag, ids: HashMap::new(), queue: VecDeque::new() }
    }

    fn discover(&mut self, n: usize, flip: bool) -> usize {
        if let Some(&(id, _)) = self.ids.get(&n) {
            return id;
        }
        let id = self.ids.len();
        self.ids.insert(n, (id, flip));
        self.queue.push_back(n);
        id
    }

    fn port(&self, n: usize, p: usize) -> u64 {
        let (_, flip) = self.ids[&n];
        (if flip { 1 - p } else { p }) as u64
    }

    fn entered(&mut self, n: usize, p: usize) -> [u64; 2] {
        let is_swap = self.dag.node(n).unwrap().kind == GateKind::Swap;
        let id = self.discover(n, is_swap && p == 1);
        [id as u64, self.port(n, p)]
    }

    fn dst_token(&mut self, d: Dst) -> [u64; 3] {
        match d {
            Dst::Output(j) => [0, j as u64, 0],
            Dst::Gate(n, p) => {
                let [id, p] = self.entered(n, p);
                [1, id, p]
            }
        }
    }

    fn src_token(&mut self, s: Src) -> [u64; 3] {
        match s {
            Src::Input(i) => [2, i as u64, 0],
            Src::Gate(n, p) => {
                let [id, p] = self.entered(n, p);
                [3, id, p]
            }
        }
    }

    fn drain(&mut self) -> Vec<u64> {
        let mut out = Vec::new();
        while let Some(n) = self.queue.pop_front() {
            let node = self.dag.node(n).unwrap().clone();
            let (_, flip) = self.ids[&n];
            out.push(kind_code(node.kind));
            let order = |len: usize| -> Vec<usize> {
                if flip { (0..len).rev().collect() } else { (0..len).collect() }
            };
            for p in order(node.ins.len()) {
                let seg = self.dag.segment(node.ins[p].unwrap()).unwrap();
                out.extend(self.src_token(seg.src));
            }
            for p in order(node.outs.len()) {
                let seg = self.dag.segment(node.outs[p].unwrap()).unwrap();
                out.extend(self.dst_token(seg.dst));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Circuit {
        Circuit::parse(s).unwrap()
    }

    #[test]
    fn commuting_gates_are_equal() {
        let a = c("input x y\nh x\nrz y 1\noutput x y");
        let b = c("input p q\nrz q 1\nh p\noutput p q");
        assert!(a.structurally_equal(&b));
        let d = c("input p q\nrz p 1\nh q\noutput p q");
        assert!(!a.structurally_equal(&d));
    }

    #[test]
    fn swap_is_symmetric() {
        let a = c("input x y\nswap x y\noutput x y");
        let b = c("input x y\nswap y x\noutput x y");
        assert!(a.structurally_equal(&b));
        let d = c("input x y\noutput y x");
        assert!(!a.structurally_equal(&d));
    }

    #[test]
    fn closed_components_are_order_independent() {
        let a = c("prep0 a\npostplus a\nprepplus b\nh b\npost0 b");
        let b = c("prepplus b\nh b\npost0 b\nprep0 a\npostplus a");
        assert!(a.structurally_equal(&b));
    }

    #[test]
    fn round_trip_through_dag() {
        let t = c("input a\nprepplus b\nprep0 c\ncnot b c\ncnot a b\npostplus a\npost0 b\noutput c");
        let back = Dag::from_circuit(&t).to_circuit().unwrap();
        assert_eq!(back, t);
    }
}
