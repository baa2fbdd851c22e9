//! Boundary-preserving isomorphism of diagrams.

use std::collections::{BTreeMap, VecDeque};

use super::{VertexKind, ZxDiagram};

type Sig = (VertexKind, usize, usize);

fn signature(d: &ZxDiagram, v: usize) -> Sig {
    (d.kind(v), d.degree(v), d.self_loops(v))
}

/// Order in which vertices of `a` are assigned: breadth-first from the
/// boundaries so each new vertex usually has a mapped neighbour.
fn search_order(a: &ZxDiagram) -> Vec<usize> {
    let mut order = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let roots: Vec<usize> = a.inputs().into_iter().chain(a.outputs()).chain(a.vertices()).collect();
    for r in roots {
        if !seen.insert(r) {
            continue;
        }
        queue.push_back(r);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in a.neighbors(v).keys() {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

/// Finds a vertex map from `a` to `b` preserving kinds, phases, boundary
/// indices and edge multiplicities.
pub fn zx_iso_map(a: &ZxDiagram, b: &ZxDiagram) -> Option<BTreeMap<usize, usize>> {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return None;
    }
    let mut count_a: BTreeMap<Sig, usize> = BTreeMap::new();
    let mut count_b: BTreeMap<Sig, usize> = BTreeMap::new();
    for v in a.vertices() {
        *count_a.entry(signature(a, v)).or_default() += 1;
    }
    for v in b.vertices() {
        *count_b.entry(signature(b, v)).or_default() += 1;
    }
    if count_a != count_b {
        return None;
    }
    let mut by_sig: BTreeMap<Sig, Vec<usize>> = BTreeMap::new();
    for v in b.vertices() {
        by_sig.entry(signature(b, v)).or_default().push(v);
    }
    let order = search_order(a);
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut used: BTreeMap<usize, usize> = BTreeMap::new();
    if extend(a, b, &order, &by_sig, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn extend(
    a: &ZxDiagram,
    b: &ZxDiagram,
    order: &[usize],
    by_sig: &BTreeMap<Sig, Vec<usize>>,
    map: &mut BTreeMap<usize, usize>,
    used: &mut BTreeMap<usize, usize>,
) -> bool {
    let Some(&v) = order.get(map.len()) else { return true };
    // A neighbour that is already mapped pins the candidates down.
    let anchor = a.neighbors(v).keys().find(|u| **u != v && map.contains_key(u)).copied();
    let cands: Vec<usize> = match anchor {
        Some(u) => b.neighbors(map[&u]).keys().copied().collect(),
        None => by_sig[&signature(a, v)].clone(),
    };
    for w in cands {
        if used.contains_key(&w) || signature(b, w) != signature(a, v) {
            continue;
        }
        let ok = a
            .neighbors(v)
            .iter()
            .filter(|(u, _)| **u != v)
            .all(|(u, &c)| map.get(u).map_or(true, |&mu| b.edge_count(w, mu) == c))
            && b
                .neighbors(w)
                .iter()
                .filter(|(x, _)| **x != w)
                .all(|(x, _)| used.get(x).map_or(true, |&ux| a.edge_count(v, ux) > 0));
        if !ok {
            continue;
        }
        map.insert(v, w);
        used.insert(w, v);
        if extend(a, b, order, by_sig, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}

/// True iff the diagrams are isomorphic with boundaries matched by index.
pub fn zx_iso(a: &ZxDiagram, b: &ZxDiagram) -> bool {
    zx_iso_map(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;

    fn state(k: VertexKind) -> ZxDiagram {
        let mut d = ZxDiagram::new();
        let s = d.add_vertex(k);
        let o = d.add_vertex(VertexKind::Output(0));
        d.add_edge(s, o);
        d
    }

    #[test]
    fn relabeled_copy() {
        let d = ZxDiagram::parse(
            "node 0 in 0\nnode 1 Z\nnode 2 X phase 2\nnode 3 out 0\nnode 4 out 1\nedge 0 1\nedge 1 2\nedge 1 3\nedge 2 4\nedge 1 2",
        )
        .unwrap();
        let e = ZxDiagram::parse(
            "node 9 X phase 2\nnode 7 Z\nnode 5 out 1\nnode 3 in 0\nnode 1 out 0\nedge 3 7\nedge 7 9\nedge 7 9\nedge 9 5\nedge 7 1",
        )
        .unwrap();
        assert!(zx_iso(&d, &e));
    }

    #[test]
    fn kinds_and_phases_matter() {
        assert!(!zx_iso(&state(VertexKind::Z(Phase::ZERO)), &state(VertexKind::X(Phase::ZERO))));
        assert!(!zx_iso(&state(VertexKind::Z(Phase::HALF)), &state(VertexKind::Z(Phase::new(3)))));
    }

    #[test]
    fn boundary_indices_matter() {
        let a = ZxDiagram::parse("node 0 Z\nnode 1 out 0\nnode 2 X\nnode 3 out 1\nedge 0 1\nedge 2 3").unwrap();
        let b = ZxDiagram::parse("node 0 Z\nnode 1 out 1\nnode 2 X\nnode 3 out 0\nedge 0 1\nedge 2 3").unwrap();
        assert!(!zx_iso(&a, &b));
    }
}
