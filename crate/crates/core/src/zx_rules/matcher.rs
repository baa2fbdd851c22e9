//! Subgraph matching and replacement for ZX rule sides.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ZxRule;
use crate::error::{Error, Result};
use crate::rules::Direction;
use crate::zx::ZxDiagram;

/// Where a rule side sits in a host diagram.
///
/// `vertices[k]` is the host image of the k-th interior vertex of the pattern
/// (interior vertices in id order). `stubs[s]` is the host vertex at the far
/// end of the s-th pattern leg, legs ordered inputs first, then outputs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZxBinding {
    pub vertices: Vec<usize>,
    pub stubs: Vec<usize>,
}

/// Pattern data flattened for matching.
struct Shape {
    interior: Vec<usize>,
    /// Interior vertex each leg attaches to, or the other leg of a bare wire.
    legs: Vec<Leg>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Leg {
    To(usize),
    Wire(usize),
}

impl Shape {
    fn of(p: &ZxDiagram) -> Result<Shape> {
        let interior: Vec<usize> = p.vertices().filter(|&v| !p.kind(v).is_boundary()).collect();
        let pos: BTreeMap<usize, usize> = interior.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let bounds: Vec<usize> = p.inputs().into_iter().chain(p.outputs()).collect();
        let bpos: BTreeMap<usize, usize> = bounds.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut legs = Vec::with_capacity(bounds.len());
        for &b in &bounds {
            let nb: Vec<usize> = p.neighbors(b).keys().copied().collect();
            if nb.len() != 1 || p.degree(b) != 1 {
                return Err(Error::InvalidDiagram(format!("rule side has a boundary of degree {}", p.degree(b))));
            }
            legs.push(match pos.get(&nb[0]) {
                Some(&k) => Leg::To(k),
                None => Leg::Wire(bpos[&nb[0]]),
            });
        }
        Ok(Shape { interior, legs })
    }

    fn legs_of(&self, k: usize) -> Vec<usize> {
        (0..self.legs.len()).filter(|&s| self.legs[s] == Leg::To(k)).collect()
    }

    /// Bare wires as `(s, t)` with `s < t`.
    fn wires(&self) -> Vec<(usize, usize)> {
        (0..self.legs.len())
            .filter_map(|s| match self.legs[s] {
                Leg::Wire(t) if s < t => Some((s, t)),
                _ => None,
            })
            .collect()
    }
}

fn host_of(host: &ZxDiagram) -> Result<ZxDiagram> {
    host.normalize()
}

/// Every way to apply `rule` in direction `dir` to `host`.
pub fn find_zx_matches(host: &ZxDiagram, rule: &ZxRule, dir: Direction) -> Result<Vec<ZxBinding>> {
    find_zx_matches_limited(host, rule, dir, 10_000)
}

/// [`find_zx_matches`] stopping after `limit` bindings.
pub fn find_zx_matches_limited(
    host: &ZxDiagram,
    rule: &ZxRule,
    dir: Direction,
    limit: usize,
) -> Result<Vec<ZxBinding>> {
    let h = host_of(host)?;
    let (p, _) = rule.sides(dir);
    let shape = Shape::of(p)?;
    let order = connected_order(p, &shape.interior);
    let mut found = BTreeSet::new();
    let mut m = Search { h: &h, p, shape: &shape, order: &order, limit, found: &mut found };
    let mut img = vec![usize::MAX; shape.interior.len()];
    m.interior(0, &mut img);
    Ok(found.into_iter().collect())
}

/// Interior vertices ordered so each one after the first in its component
/// touches an earlier one.
fn connected_order(p: &ZxDiagram, interior: &[usize]) -> Vec<usize> {
    let pos: BTreeMap<usize, usize> = interior.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut seen = vec![false; interior.len()];
    let mut order = Vec::new();
    for start in 0..interior.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            order.push(k);
            for nb in p.neighbors(interior[k]).keys() {
                if let Some(&j) = pos.get(nb) {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    order
}

struct Search<'a> {
    h: &'a ZxDiagram,
    p: &'a ZxDiagram,
    shape: &'a Shape,
    order: &'a [usize],
    limit: usize,
    found: &'a mut BTreeSet<ZxBinding>,
}

impl Search<'_> {
    fn full(&self) -> bool {
        self.found.len() >= self.limit
    }

    fn interior(&mut self, depth: usize, img: &mut Vec<usize>) {
        if self.full() {
            return;
        }
        if depth == self.order.len() {
            let mut stubs = vec![usize::MAX; self.shape.legs.len()];
            self.stubs(0, img, &mut stubs);
            return;
        }
        let k = self.order[depth];
        let pv = self.shape.interior[k];
        // Anchor on an already mapped neighbour when there is one.
        let anchor = self.order[..depth]
            .iter()
            .find(|&&j| self.p.edge_count(pv, self.shape.interior[j]) > 0)
            .map(|&j| img[j]);
        let candidates: Vec<usize> = match anchor {
            Some(a) => self.h.neighbors(a).keys().copied().collect(),
            None => self.h.vertices().collect(),
        };
        for hv in candidates {
            if img.contains(&hv) || !self.vertex_fits(pv, hv) {
                continue;
            }
            let edges_ok = self.order[..depth].iter().all(|&j| {
                self.p.edge_count(pv, self.shape.interior[j]) == self.h.edge_count(hv, img[j])
            });
            if !edges_ok {
                continue;
            }
            img[k] = hv;
            self.interior(depth + 1, img);
            img[k] = usize::MAX;
            if self.full() {
                return;
            }
        }
    }

    fn vertex_fits(&self, pv: usize, hv: usize) -> bool {
        self.h.kind(hv) == self.p.kind(pv)
            && self.h.degree(hv) == self.p.degree(pv)
            && self.h.self_loops(hv) == self.p.self_loops(pv)
    }

    /// Assigns the legs of interior vertex `k` and recurses; bare wires last.
    fn stubs(&mut self, k: usize, img: &[usize], stubs: &mut Vec<usize>) {
        if self.full() {
            return;
        }
        if k == img.len() {
            let wires = self.shape.wires();
            let mut used = BTreeMap::new();
            self.wires(&wires, 0, img, stubs, &mut used);
            return;
        }
        let legs = self.shape.legs_of(k);
        let mut outer: Vec<usize> = Vec::new();
        for (&nb, &c) in self.h.neighbors(img[k]) {
            if !img.contains(&nb) {
                outer.extend(std::iter::repeat(nb).take(c));
            }
        }
        if outer.len() != legs.len() {
            return;
        }
        for perm in distinct_permutations(&outer) {
            for (&s, &t) in legs.iter().zip(&perm) {
                stubs[s] = t;
            }
            self.stubs(k + 1, img, stubs);
            if self.full() {
                return;
            }
        }
    }

    fn wires(
        &mut self,
        wires: &[(usize, usize)],
        i: usize,
        img: &[usize],
        stubs: &mut Vec<usize>,
        used: &mut BTreeMap<(usize, usize), usize>,
    ) {
        if self.full() {
            return;
        }
        if i == wires.len() {
            self.found.insert(ZxBinding { vertices: img.to_vec(), stubs: stubs.clone() });
            return;
        }
        let (s, t) = wires[i];
        for (x, y) in self.h.edges() {
            if x == y || img.contains(&x) || img.contains(&y) {
                continue;
            }
            let key = (x.min(y), x.max(y));
            let u = used.get(&key).copied().unwrap_or(0);
            if u >= self.h.edge_count(x, y) {
                continue;
            }
            used.insert(key, u + 1);
            for (a, b) in [(x, y), (y, x)] {
                stubs[s] = a;
                stubs[t] = b;
                self.wires(wires, i + 1, img, stubs, used);
            }
            used.insert(key, u);
        }
    }
}

fn distinct_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in items {
        *counts.entry(x).or_default() += 1;
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(items.len());
    fn go(counts: &mut BTreeMap<usize, usize>, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let keys: Vec<usize> = counts.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect();
        for k in keys {
            *counts.get_mut(&k).unwrap() -= 1;
            cur.push(k);
            go(counts, n, cur, out);
            cur.pop();
            *counts.get_mut(&k).unwrap() += 1;
        }
    }
    go(&mut counts, items.len(), &mut cur, &mut out);
    out
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidBinding(msg.into())
}

fn check(h: &ZxDiagram, p: &ZxDiagram, shape: &Shape, b: &ZxBinding) -> Result<()> {
    if b.vertices.len() != shape.interior.len() || b.stubs.len() != shape.legs.len() {
        return Err(invalid(format!(
            "pattern has {} vertices and {} legs, binding gives {} and {}",
            shape.interior.len(),
            shape.legs.len(),
            b.vertices.len(),
            b.stubs.len()
        )));
    }
    let image: BTreeSet<usize> = b.vertices.iter().copied().collect();
    if image.len() != b.vertices.len() {
        return Err(invalid("binding repeats a vertex"));
    }
    for (k, (&pv, &hv)) in shape.interior.iter().zip(&b.vertices).enumerate() {
        if !h.contains(hv) {
            return Err(invalid(format!("vertex {hv} does not exist")));
        }
        if h.kind(hv) != p.kind(pv) || h.degree(hv) != p.degree(pv) || h.self_loops(hv) != p.self_loops(pv) {
            return Err(invalid(format!("vertex {hv} is not a {} of degree {}", p.kind(pv), p.degree(pv))));
        }
        for (j, (&pw, &hw)) in shape.interior.iter().zip(&b.vertices).enumerate().skip(k + 1) {
            if p.edge_count(pv, pw) != h.edge_count(hv, hw) {
                return Err(invalid(format!("edges between {hv} and {hw} do not match pattern vertices {k} and {j}")));
            }
        }
    }
    for &t in &b.stubs {
        if !h.contains(t) || image.contains(&t) {
            return Err(invalid(format!("leg end {t} is missing or inside the match")));
        }
    }
    for (k, &hv) in b.vertices.iter().enumerate() {
        let mut want: Vec<usize> = shape.legs_of(k).iter().map(|&s| b.stubs[s]).collect();
        let mut have: Vec<usize> = Vec::new();
        for (&nb, &c) in h.neighbors(hv) {
            if !image.contains(&nb) {
                have.extend(std::iter::repeat(nb).take(c));
            }
        }
        want.sort_unstable();
        if want != have {
            return Err(invalid(format!("legs of vertex {hv} do not lead to {want:?}")));
        }
    }
    let mut used: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (s, t) in shape.wires() {
        let (x, y) = (b.stubs[s], b.stubs[t]);
        let key = (x.min(y), x.max(y));
        let u = used.entry(key).or_default();
        *u += 1;
        if x == y || *u > h.edge_count(x, y) {
            return Err(invalid(format!("no free edge between {x} and {y} for a bare wire")));
        }
    }
    Ok(())
}

/// Rewrites `host` at `binding` with `rule` in direction `dir`.
pub fn apply_zx_rule(host: &ZxDiagram, rule: &ZxRule, dir: Direction, binding: &ZxBinding) -> Result<ZxDiagram> {
    let mut h = host_of(host)?;
    let (p, r) = rule.sides(dir);
    let pshape = Shape::of(p)?;
    let rshape = Shape::of(r)?;
    if pshape.legs.len() != rshape.legs.len() {
        return Err(Error::InvalidDiagram(format!("rule {rule} has sides with different leg counts")));
    }
    check(&h, p, &pshape, binding)?;
    for &v in &binding.vertices {
        h.remove_vertex(v);
    }
    for (s, t) in pshape.wires() {
        h.remove_edge(binding.stubs[s], binding.stubs[t]);
    }
    let fresh: Vec<usize> = rshape.interior.iter().map(|&v| h.add_vertex(r.kind(v))).collect();
    for (k, &a) in rshape.interior.iter().enumerate() {
        if r.self_loops(a) > 0 {
            for _ in 0..r.self_loops(a) {
                h.add_edge(fresh[k], fresh[k]);
            }
        }
        for (j, &b) in rshape.interior.iter().enumerate().skip(k + 1) {
            for _ in 0..r.edge_count(a, b) {
                h.add_edge(fresh[k], fresh[j]);
            }
        }
    }
    for (s, leg) in rshape.legs.iter().enumerate() {
        match *leg {
            Leg::To(k) => h.add_edge(binding.stubs[s], fresh[k]),
            Leg::Wire(t) if s < t => h.add_edge(binding.stubs[s], binding.stubs[t]),
            Leg::Wire(_) => {}
        }
    }
    h.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::params;
    use crate::zx::{zx_iso, VertexKind};
    use crate::zx_rules::zx_rule_catalog;

    fn zx(t: &str) -> ZxDiagram {
        ZxDiagram::parse(t).unwrap()
    }

    #[test]
    fn fuses_two_spiders() {
        let host = zx("node 0 in 0\nnode 1 Z phase 1\nnode 2 Z phase 1\nnode 3 out 0\nedge 0 1\nedge 1 2\nedge 2 3");
        let rule = zx_rule_catalog("S1.green", &params(&[("alpha", 1), ("beta", 1)])).unwrap();
        let ms = find_zx_matches(&host, &rule, Direction::Lr).unwrap();
        // Legs carry no direction, so the pair matches both ways round.
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0], ZxBinding { vertices: vec![1, 2], stubs: vec![0, 3] });
        let want = zx("node 0 in 0\nnode 1 Z phase 2\nnode 2 out 0\nedge 0 1\nedge 1 2");
        for m in &ms {
            assert!(zx_iso(&apply_zx_rule(&host, &rule, Direction::Lr, m).unwrap(), &want));
        }
    }

    #[test]
    fn bare_wire_takes_either_orientation() {
        let host = zx("node 0 in 0\nnode 1 out 0\nedge 0 1");
        let rule = zx_rule_catalog("S2.red", &Params::new()).unwrap();
        let ms = find_zx_matches(&host, &rule, Direction::Rl).unwrap();
        assert_eq!(ms.len(), 2);
        let out = apply_zx_rule(&host, &rule, Direction::Rl, &ms[0]).unwrap();
        assert_eq!(out.vertices().filter(|&v| out.kind(v) == VertexKind::X(Phase::ZERO)).count(), 1);
    }

    #[test]
    fn wrong_bindings_are_refused() {
        let host = zx("node 0 in 0\nnode 1 Z\nnode 2 X\nnode 3 out 0\nedge 0 1\nedge 1 2\nedge 2 3");
        let rule = zx_rule_catalog("S1.green", &Params::new()).unwrap();
        assert!(find_zx_matches(&host, &rule, Direction::Lr).unwrap().is_empty());
        let b = ZxBinding { vertices: vec![1, 2], stubs: vec![0, 3] };
        assert!(matches!(apply_zx_rule(&host, &rule, Direction::Lr, &b), Err(Error::InvalidBinding(_))));
        let short = ZxBinding { vertices: vec![1], stubs: vec![] };
        assert!(apply_zx_rule(&host, &rule, Direction::Lr, &short).is_err());
    }

    #[test]
    fn parallel_legs_bind_once_per_edge() {
        let host = zx("node 0 Z\nnode 1 Z\nnode 2 X\nedge 0 1\nedge 1 2\nedge 1 2");
        let rule = zx_rule_catalog("S1.green", &params(&[("a", 0), ("b", 2)])).unwrap();
        let ms = find_zx_matches(&host, &rule, Direction::Lr).unwrap();
        assert_eq!(ms, vec![ZxBinding { vertices: vec![0, 1], stubs: vec![2, 2] }]);
    }

    #[test]
    fn binding_json_shape() {
        let b: ZxBinding = serde_json::from_str(r#"{"vertices":[3,4],"stubs":[1,2]}"#).unwrap();
        assert_eq!(b, ZxBinding { vertices: vec![3, 4], stubs: vec![1, 2] });
    }

    use crate::phase::Phase;
    use crate::rules::Params;
}
