//! Exact tensor-network evaluation of diagrams.

use std::collections::{BTreeMap, BTreeSet};

use super::{VertexKind, ZxDiagram};
use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, MAX_QUBITS};
use crate::scalar::CliffordScalar;

/// Largest number of legs any intermediate tensor may carry.
pub const MAX_TENSOR_LEGS: usize = 18;

/// How pairs of tensors are chosen for contraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionOrder {
    /// Repeatedly contract the pair with the smallest result.
    Greedy,
    /// Fold tensors in vertex id order.
    Sequential,
}

/// A dense tensor; `vars[0]` is the most significant index bit.
#[derive(Clone, Debug)]
struct Tensor {
    vars: Vec<usize>,
    data: Vec<CliffordScalar>,
}

impl Tensor {
    fn scalar(x: CliffordScalar) -> Self {
        Tensor { vars: vec![], data: vec![x] }
    }

    fn bit(&self, idx: usize, pos: usize) -> usize {
        (idx >> (self.vars.len() - 1 - pos)) & 1
    }
}

fn check_legs(n: usize) -> Result<()> {
    if n > MAX_TENSOR_LEGS {
        return Err(Error::SizeOverflow(n, MAX_TENSOR_LEGS));
    }
    Ok(())
}

/// Tensor of one generator over its half-edges; repeated variables (self
/// loops) are traced out.
fn vertex_tensor(kind: VertexKind, half_edges: &[usize]) -> Result<Tensor> {
    let n = half_edges.len();
    check_legs(n)?;
    let one = CliffordScalar::one();
    let entry = |i: usize| -> CliffordScalar {
        match kind {
            VertexKind::Z(p) if n == 0 => one + CliffordScalar::from_phase(p),
            VertexKind::Z(p) => {
                if i == 0 {
                    one
                } else if i == (1 << n) - 1 {
                    CliffordScalar::from_phase(p)
                } else {
                    CliffordScalar::zero()
                }
            }
            VertexKind::X(p) => {
                let e = CliffordScalar::from_phase(p);
                if i.count_ones() % 2 == 0 {
                    one + e
                } else {
                    one - e
                }
            }
            VertexKind::H => {
                if i == 3 {
                    -one
                } else {
                    one
                }
            }
            _ => unreachable!("boundaries carry no tensor"),
        }
    };
    let distinct: Vec<usize> = half_edges.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut t = Tensor { vars: distinct.clone(), data: vec![CliffordScalar::zero(); 1 << distinct.len()] };
    let pos: BTreeMap<usize, usize> = distinct.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for idx in 0..1usize << distinct.len() {
        let full = half_edges
            .iter()
            .fold(0usize, |acc, v| (acc << 1) | t.bit(idx, pos[v]));
        t.data[idx] = entry(full);
    }
    // A loop variable appears twice, so its two legs are already tied; sum it out.
    let loops: Vec<usize> =
        distinct.iter().copied().filter(|v| half_edges.iter().filter(|h| *h == v).count() == 2).collect();
    for v in loops {
        t = sum_out(&t, v);
    }
    Ok(t)
}

fn sum_out(t: &Tensor, var: usize) -> Tensor {
    let p = t.vars.iter().position(|&v| v == var).unwrap();
    let vars: Vec<usize> = t.vars.iter().copied().filter(|&v| v != var).collect();
    let bit = t.vars.len() - 1 - p;
    let low = (1usize << bit) - 1;
    let mut data = vec![CliffordScalar::zero(); 1 << vars.len()];
    for (r, slot) in data.iter_mut().enumerate() {
        let base = ((r & !low) << 1) | (r & low);
        *slot = t.data[base] + t.data[base | (1 << bit)];
    }
    Tensor { vars, data }
}

/// Contracts two tensors over their shared variables.
fn contract(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let shared: BTreeSet<usize> = a.vars.iter().filter(|v| b.vars.contains(v)).copied().collect();
    let mut vars: Vec<usize> = a.vars.iter().filter(|v| !shared.contains(v)).copied().collect();
    vars.extend(b.vars.iter().filter(|v| !shared.contains(v)));
    check_legs(vars.len())?;
    let shared: Vec<usize> = shared.into_iter().collect();
    // Flat offset contributed to a tensor's index by each listed variable.
    let weights = |t: &Tensor, list: &[usize]| -> Vec<usize> {
        list.iter()
            .map(|v| t.vars.iter().position(|w| w == v).map_or(0, |p| 1 << (t.vars.len() - 1 - p)))
            .collect()
    };
    let offsets = |list: &[usize], w: &[usize]| -> Vec<usize> {
        (0..1usize << list.len())
            .map(|idx| (0..list.len()).filter(|p| (idx >> (list.len() - 1 - p)) & 1 == 1).map(|p| w[p]).sum())
            .collect()
    };
    let (out_a, out_b) = (offsets(&vars, &weights(a, &vars)), offsets(&vars, &weights(b, &vars)));
    let (sh_a, sh_b) = (offsets(&shared, &weights(a, &shared)), offsets(&shared, &weights(b, &shared)));
    let mut data = vec![CliffordScalar::zero(); 1 << vars.len()];
    for (idx, slot) in data.iter_mut().enumerate() {
        let mut acc = CliffordScalar::zero();
        for (sa, sb) in sh_a.iter().zip(&sh_b) {
            let x = a.data[out_a[idx] + sa];
            if x.is_zero() {
                continue;
            }
            let y = b.data[out_b[idx] + sb];
            if !y.is_zero() {
                acc += x * y;
            }
        }
        *slot = acc;
    }
    Ok(Tensor { vars, data })
}

fn result_legs(a: &Tensor, b: &Tensor) -> usize {
    let shared = a.vars.iter().filter(|v| b.vars.contains(v)).count();
    a.vars.len() + b.vars.len() - 2 * shared
}

fn contract_all(mut ts: Vec<Tensor>, order: ContractionOrder) -> Result<Tensor> {
    if ts.is_empty() {
        return Ok(Tensor::scalar(CliffordScalar::one()));
    }
    while ts.len() > 1 {
        let (i, j) = match order {
            ContractionOrder::Sequential => (0, 1),
            ContractionOrder::Greedy => {
                let mut best: Option<(bool, usize, usize, usize)> = None;
                for i in 0..ts.len() {
                    for j in i + 1..ts.len() {
                        let connected = ts[i].vars.iter().any(|v| ts[j].vars.contains(v));
                        let cand = (!connected, result_legs(&ts[i], &ts[j]), i, j);
                        if best.map_or(true, |b| cand < b) {
                            best = Some(cand);
                        }
                    }
                }
                let (_, _, i, j) = best.unwrap();
                (i, j)
            }
        };
        let b = ts.remove(j);
        let a = ts.remove(i);
        ts.insert(i, contract(&a, &b)?);
    }
    Ok(ts.pop().unwrap())
}

/// Exact `2^outputs × 2^inputs` matrix of a diagram.
pub fn zx_to_matrix(d: &ZxDiagram) -> Result<ExactMatrix> {
    zx_to_matrix_with(d, ContractionOrder::Greedy)
}

/// [`zx_to_matrix`] with an explicit contraction strategy.
pub fn zx_to_matrix_with(d: &ZxDiagram, order: ContractionOrder) -> Result<ExactMatrix> {
    d.validate()?;
    let inputs = d.inputs();
    let outputs = d.outputs();
    for n in [inputs.len(), outputs.len()] {
        if n > MAX_QUBITS {
            return Err(Error::ArityOverflow(n, MAX_QUBITS));
        }
    }
    // One variable per edge.
    let mut half: BTreeMap<usize, Vec<usize>> = d.vertices().map(|v| (v, Vec::new())).collect();
    for (e, (a, b)) in d.edges().into_iter().enumerate() {
        half.get_mut(&a).unwrap().push(e);
        half.get_mut(&b).unwrap().push(e);
    }
    let mut ts = Vec::new();
    for v in d.vertices() {
        let k = d.kind(v);
        if !k.is_boundary() {
            ts.push(vertex_tensor(k, &half[&v])?);
        }
    }
    let t = contract_all(ts, order)?;
    let out_vars: Vec<usize> = outputs.iter().map(|v| half[v][0]).collect();
    let in_vars: Vec<usize> = inputs.iter().map(|v| half[v][0]).collect();
    let pos: BTreeMap<usize, usize> = t.vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut m = ExactMatrix::zeros(outputs.len(), inputs.len())?;
    let nbits = t.vars.len();
    for row in 0..m.rows() {
        'col: for col in 0..m.cols() {
            let mut assign: BTreeMap<usize, usize> = BTreeMap::new();
            let bits = out_vars
                .iter()
                .enumerate()
                .map(|(j, &v)| (v, (row >> (out_vars.len() - 1 - j)) & 1))
                .chain(in_vars.iter().enumerate().map(|(i, &v)| (v, (col >> (in_vars.len() - 1 - i)) & 1)));
            for (v, b) in bits {
                // Two boundaries joined by a bare edge share a variable.
                if *assign.entry(v).or_insert(b) != b {
                    continue 'col;
                }
            }
            let idx = assign
                .iter()
                .filter_map(|(v, &b)| pos.get(v).map(|&p| b << (nbits - 1 - p)))
                .sum::<usize>();
            m.set(row, col, t.data[idx]);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{mat_proportional, Verdict};
    use crate::phase::Phase;

    fn state(kind: VertexKind) -> ZxDiagram {
        let mut d = ZxDiagram::new();
        let s = d.add_vertex(kind);
        let o = d.add_vertex(VertexKind::Output(0));
        d.add_edge(s, o);
        d
    }

    #[test]
    fn identity_edge() {
        let mut d = ZxDiagram::new();
        let a = d.add_vertex(VertexKind::Input(0));
        let b = d.add_vertex(VertexKind::Output(0));
        d.add_edge(a, b);
        assert_eq!(zx_to_matrix(&d).unwrap(), ExactMatrix::identity(1).unwrap());
    }

    #[test]
    fn plus_and_minus_states() {
        let p = zx_to_matrix(&state(VertexKind::Z(Phase::ZERO))).unwrap();
        assert_eq!(p, ExactMatrix::from_ints(1, 0, &[1, 1]).unwrap());
        let m = zx_to_matrix(&state(VertexKind::Z(Phase::PI))).unwrap();
        assert_eq!(m, ExactMatrix::from_ints(1, 0, &[1, -1]).unwrap());
        let z = zx_to_matrix(&state(VertexKind::X(Phase::ZERO))).unwrap();
        assert_eq!(z, ExactMatrix::from_ints(1, 0, &[2, 0]).unwrap());
    }

    #[test]
    fn z_loop_is_exact() {
        let mut d = ZxDiagram::new();
        let a = d.add_vertex(VertexKind::Input(0));
        let z = d.add_vertex(VertexKind::Z(Phase::HALF));
        let b = d.add_vertex(VertexKind::Output(0));
        d.add_edge(a, z);
        d.add_edge(z, b);
        let before = zx_to_matrix(&d).unwrap();
        d.add_edge(z, z);
        assert_eq!(zx_to_matrix(&d).unwrap(), before);
        d.set_kind(z, VertexKind::X(Phase::HALF));
        let with_loop = zx_to_matrix(&d).unwrap();
        let without = zx_to_matrix(&d.normalize().unwrap()).unwrap();
        assert!(matches!(mat_proportional(&with_loop, &without).unwrap(), Verdict::Proportional(_)));
    }

    #[test]
    fn closed_diagram_is_scalar() {
        let mut d = ZxDiagram::new();
        let a = d.add_vertex(VertexKind::Z(Phase::ZERO));
        let b = d.add_vertex(VertexKind::X(Phase::ZERO));
        d.add_edge(a, b);
        let m = zx_to_matrix(&d).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert_eq!(m.get(0, 0), CliffordScalar::from_int(2));
    }
}
