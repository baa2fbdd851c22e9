//! Generator-wise translation of circuits into diagrams.

use std::collections::{BTreeMap, HashMap};

use super::{VertexKind, ZxDiagram};
use crate::circuit::{Circuit, GateKind};
use crate::phase::Phase;

/// Translates a circuit. Swaps become pure rewiring.
pub fn circuit_to_zx(c: &Circuit) -> ZxDiagram {
    circuit_to_zx_mapped(c).0
}

/// Like [`circuit_to_zx`], also returning the instruction index that created
/// each interior vertex.
pub fn circuit_to_zx_mapped(c: &Circuit) -> (ZxDiagram, BTreeMap<usize, usize>) {
    let mut d = ZxDiagram::new();
    let mut origin = BTreeMap::new();
    // Vertex whose open leg currently carries each live wire.
    let mut end: HashMap<&str, usize> = HashMap::new();
    for (i, w) in c.inputs().iter().enumerate() {
        end.insert(w, d.add_vertex(VertexKind::Input(i)));
    }
    for (n, ins) in c.instrs().iter().enumerate() {
        let mut node = |d: &mut ZxDiagram, k: VertexKind| {
            let v = d.add_vertex(k);
            origin.insert(v, n);
            v
        };
        let w = &ins.wires;
        match ins.kind {
            GateKind::Swap => {
                let a = end[w[0].as_str()];
                let b = end[w[1].as_str()];
                end.insert(&w[0], b);
                end.insert(&w[1], a);
            }
            GateKind::Cnot => {
                let z = node(&mut d, VertexKind::Z(Phase::ZERO));
                let x = node(&mut d, VertexKind::X(Phase::ZERO));
                d.add_edge(end[w[0].as_str()], z);
                d.add_edge(end[w[1].as_str()], x);
                d.add_edge(z, x);
                end.insert(&w[0], z);
                end.insert(&w[1], x);
            }
            k => {
                let kind = match k {
                    GateKind::RotZ(p) => VertexKind::Z(p),
                    GateKind::RotX(p) => VertexKind::X(p),
                    GateKind::H => VertexKind::H,
                    GateKind::PrepZero | GateKind::PostZero => VertexKind::X(Phase::ZERO),
                    GateKind::PrepPlus | GateKind::PostPlus => VertexKind::Z(Phase::ZERO),
                    GateKind::Cnot | GateKind::Swap => unreachable!(),
                };
                let v = node(&mut d, kind);
                if !k.is_prep() {
                    d.add_edge(end[w[0].as_str()], v);
                }
                if k.is_post() {
                    end.remove(w[0].as_str());
                } else {
                    end.insert(&w[0], v);
                }
            }
        }
    }
    for (j, w) in c.outputs().iter().enumerate() {
        let o = d.add_vertex(VertexKind::Output(j));
        d.add_edge(end[w.as_str()], o);
    }
    (d, origin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_to_matrix;
    use crate::matrix::{mat_proportional, ExactMatrix};
    use crate::zx::zx_to_matrix;

    fn zx(t: &str) -> ZxDiagram {
        circuit_to_zx(&Circuit::parse(t).unwrap())
    }

    #[test]
    fn cnot_is_two_spiders() {
        let d = zx("input a b\ncnot a b\noutput a b");
        assert_eq!(d.num_vertices(), 6);
        let interior: Vec<VertexKind> = d.vertices().map(|v| d.kind(v)).filter(|k| !k.is_boundary()).collect();
        assert_eq!(interior, vec![VertexKind::Z(Phase::ZERO), VertexKind::X(Phase::ZERO)]);
    }

    #[test]
    fn rz_is_one_green_spider() {
        let d = zx("input a\nrz a 1\noutput a");
        assert_eq!(d.to_text(), "node 0 in 0\nnode 1 Z phase 1\nnode 2 out 0\nedge 0 1\nedge 1 2\n");
    }

    #[test]
    fn identity_is_an_edge() {
        let d = zx("input a\noutput a");
        assert_eq!(d.edges(), vec![(0, 1)]);
        assert_eq!(zx_to_matrix(&d).unwrap(), ExactMatrix::identity(1).unwrap());
    }

    #[test]
    fn translation_matches_circuit() {
        for t in [
            "input a b\ncnot a b\nh b\nswap a b\nrx a 3\noutput a b",
            "input a\nprepplus b\nprep0 c\ncnot b c\ncnot a b\npostplus a\npost0 b\noutput c",
        ] {
            let c = Circuit::parse(t).unwrap();
            let v = mat_proportional(&zx_to_matrix(&circuit_to_zx(&c)).unwrap(), &circuit_to_matrix(&c).unwrap());
            assert!(v.unwrap().is_equivalent());
        }
    }
}
