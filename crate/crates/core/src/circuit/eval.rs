//! Exact semantics of circuits.

use std::collections::HashMap;

use super::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::matrix::{mat_mul, ExactMatrix, MAX_QUBITS};
use crate::scalar::CliffordScalar;

fn s(x: i64) -> CliffordScalar {
    CliffordScalar::from_int(x)
}

fn rz(k: i64) -> ExactMatrix {
    let z = CliffordScalar::zero();
    ExactMatrix::new(1, 1, vec![CliffordScalar::omega_pow(-k), z, z, CliffordScalar::omega_pow(k)]).unwrap()
}

/// Matrix of a single generator. Qubit 0 is the most significant index bit;
/// rows index outputs and columns index inputs.
pub fn gate_matrix(kind: GateKind) -> ExactMatrix {
    let r2 = CliffordScalar::sqrt2();
    let z = CliffordScalar::zero();
    match kind {
        GateKind::Cnot => {
            ExactMatrix::from_ints(2, 2, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0]).unwrap()
        }
        GateKind::Swap => {
            ExactMatrix::from_ints(2, 2, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1]).unwrap()
        }
        GateKind::PrepZero => ExactMatrix::new(1, 0, vec![r2, z]).unwrap(),
        GateKind::PrepPlus => ExactMatrix::from_ints(1, 0, &[1, 1]).unwrap(),
        GateKind::PostZero => ExactMatrix::new(0, 1, vec![r2, z]).unwrap(),
        GateKind::PostPlus => ExactMatrix::from_ints(0, 1, &[1, 1]).unwrap(),
        GateKind::RotZ(p) => rz(p.quarters() as i64),
        GateKind::RotX(p) => {
            let h = gate_matrix(GateKind::H);
            let m = mat_mul(&mat_mul(&h, &rz(p.quarters() as i64)).unwrap(), &h).unwrap();
            m.scale(CliffordScalar::new(1, 0, 0, 0, 2))
        }
        GateKind::H => ExactMatrix::new(1, 1, vec![s(1), s(1), s(1), s(-1)]).unwrap(),
    }
}

/// A `2^live × 2^inputs` partial evaluation. `live[p]` is the label held at
/// bit position `p` counted from the most significant end.
struct State {
    live: Vec<String>,
    cols: usize,
    data: Vec<CliffordScalar>,
}

impl State {
    fn rows(&self) -> usize {
        1 << self.live.len()
    }

    fn bit(&self, pos: usize) -> usize {
        self.live.len() - 1 - pos
    }

    fn pos(&self, label: &str) -> usize {
        self.live.iter().position(|l| l == label).expect("live label")
    }

    fn apply_unitary(&mut self, m: &ExactMatrix, wires: &[String]) {
        let bits: Vec<usize> = wires.iter().map(|w| self.bit(self.pos(w))).collect();
        let n = bits.len();
        let mask: usize = bits.iter().map(|b| 1 << b).sum();
        let local = |row: usize| -> usize {
            bits.iter().fold(0, |acc, &b| (acc << 1) | ((row >> b) & 1))
        };
        let spread = |base: usize, v: usize| -> usize {
            bits.iter().enumerate().fold(base, |acc, (i, &b)| acc | (((v >> (n - 1 - i)) & 1) << b))
        };
        let mut out = vec![CliffordScalar::zero(); self.data.len()];
        for row in 0..self.rows() {
            let base = row & !mask;
            let i = local(row);
            for j in 0..1 << n {
                let g = m.get(i, j);
                if g.is_zero() {
                    continue;
                }
                let src = spread(base, j);
                for c in 0..self.cols {
                    let v = self.data[src * self.cols + c];
                    if !v.is_zero() {
                        out[row * self.cols + c] += g * v;
                    }
                }
            }
        }
        self.data = out;
    }

    fn prepare(&mut self, ket: &ExactMatrix, label: &str) -> Result<()> {
        if self.live.len() + 1 > MAX_QUBITS {
            return Err(Error::ArityOverflow(self.live.len() + 1, MAX_QUBITS));
        }
        let mut out = Vec::with_capacity(self.data.len() * 2);
        for row in 0..self.rows() {
            for b in 0..2 {
                let a = ket.get(b, 0);
                for c in 0..self.cols {
                    out.push(a * self.data[row * self.cols + c]);
                }
            }
        }
        self.live.push(label.to_string());
        self.data = out;
        Ok(())
    }

    fn postselect(&mut self, bra: &ExactMatrix, label: &str) {
        let pos = self.pos(label);
        let bit = self.bit(pos);
        let low = (1 << bit) - 1;
        let new_rows = self.rows() / 2;
        let mut out = vec![CliffordScalar::zero(); new_rows * self.cols];
        for r in 0..new_rows {
            let hi = (r & !low) << 1;
            let lo = r & low;
            for b in 0..2 {
                let a = bra.get(0, b);
                if a.is_zero() {
                    continue;
                }
                let src = hi | (b << bit) | lo;
                for c in 0..self.cols {
                    let v = self.data[src * self.cols + c];
                    if !v.is_zero() {
                        out[r * self.cols + c] += a * v;
                    }
                }
            }
        }
        self.live.remove(pos);
        self.data = out;
    }
}

/// Order in which instructions are simulated: postselections as early as
/// possible, preparations as late as possible, otherwise program order.
fn schedule(c: &Circuit) -> Vec<usize> {
    let n = c.len();
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut last: HashMap<&str, usize> = HashMap::new();
    for (i, ins) in c.instrs().iter().enumerate() {
        for w in &ins.wires {
            if let Some(&j) = last.get(w.as_str()) {
                deps[i].push(j);
            }
            last.insert(w, i);
        }
    }
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let ready = (0..n).filter(|&i| !done[i] && deps[i].iter().all(|&j| done[j]));
        let pick = ready
            .min_by_key(|&i| {
                let k = c.instrs()[i].kind;
                (if k.is_post() { 0 } else if k.is_prep() { 2 } else { 1 }, i)
            })
            .expect("circuits are acyclic");
        done[pick] = true;
        order.push(pick);
    }
    order
}

/// Exact `2^outputs × 2^inputs` matrix of a circuit.
pub fn circuit_to_matrix(c: &Circuit) -> Result<ExactMatrix> {
    let n_in = c.inputs().len();
    let n_out = c.outputs().len();
    for n in [n_in, n_out] {
        if n > MAX_QUBITS {
            return Err(Error::ArityOverflow(n, MAX_QUBITS));
        }
    }
    let cols = 1 << n_in;
    let mut st = State { live: c.inputs().to_vec(), cols, data: ExactMatrix::identity(n_in)?.entries().to_vec() };
    for i in schedule(c) {
        let ins = &c.instrs()[i];
        let m = gate_matrix(ins.kind);
        if ins.kind.is_prep() {
            st.prepare(&m, &ins.wires[0])?;
        } else if ins.kind.is_post() {
            st.postselect(&m, &ins.wires[0]);
        } else {
            st.apply_unitary(&m, &ins.wires);
        }
    }
    // Reorder the remaining wires to the declared output order.
    let perm: Vec<usize> = c.outputs().iter().map(|w| st.pos(w)).collect();
    let mut out = ExactMatrix::zeros(n_out, n_in)?;
    for row in 0..st.rows() {
        let target = perm
            .iter()
            .fold(0, |acc, &p| (acc << 1) | ((row >> st.bit(p)) & 1));
        for col in 0..cols {
            out.set(target, col, st.data[row * cols + col]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{mat_proportional, mat_tensor, Verdict};
    use crate::phase::Phase;

    fn m(text: &str) -> ExactMatrix {
        circuit_to_matrix(&Circuit::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn rx_values() {
        let r = gate_matrix(GateKind::RotX(Phase::new(1)));
        let h = CliffordScalar::inv_sqrt2();
        let mi = -CliffordScalar::i();
        assert_eq!(r.entries(), &[h, mi * h, mi * h, h]);
        let r = gate_matrix(GateKind::RotX(Phase::new(2)));
        let z = CliffordScalar::zero();
        assert_eq!(r.entries(), &[z, mi, mi, z]);
        assert_eq!(gate_matrix(GateKind::RotX(Phase::ZERO)), ExactMatrix::identity(1).unwrap());
    }

    #[test]
    fn single_gates_match_generators() {
        assert_eq!(m("input a b\ncnot a b\noutput a b"), gate_matrix(GateKind::Cnot));
        let rev = m("input a b\ncnot b a\noutput a b");
        assert_eq!(rev.get(0b01, 0b11), CliffordScalar::one());
        assert_eq!(m("input a b\noutput b a"), gate_matrix(GateKind::Swap));
        assert_eq!(m("prep0 a\noutput a"), gate_matrix(GateKind::PrepZero));
    }

    #[test]
    fn parallel_is_tensor() {
        let got = m("input a b\nh a\nrz b 1\noutput a b");
        let want = mat_tensor(&gate_matrix(GateKind::H), &gate_matrix(GateKind::RotZ(Phase::HALF))).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn teleport_is_identity() {
        let t = m("input a\nprepplus b\nprep0 c\ncnot b c\ncnot a b\npostplus a\npost0 b\noutput c");
        let v = mat_proportional(&t, &ExactMatrix::identity(1).unwrap()).unwrap();
        assert!(matches!(v, Verdict::Proportional(_) | Verdict::Equal), "{v}");
    }

    #[test]
    fn empty_circuit_is_one() {
        assert_eq!(m(""), ExactMatrix::identity(0).unwrap());
        assert_eq!(m("prep0 a\npost0 a").get(0, 0), CliffordScalar::from_int(2));
    }
}
