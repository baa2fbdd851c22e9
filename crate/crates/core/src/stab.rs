//! Stabilizer-tableau equivalence checking through Choi states.
//!
//! A circuit with `n` inputs is run on the second halves of `n` Bell pairs.
//! The resulting state is a stabilizer state on `inputs + outputs` qubits,
//! determined up to a scalar by its stabilizer group, which is compared in
//! reduced row echelon form.

use std::fmt;

use crate::circuit::{circuit_to_matrix, Circuit, GateKind};
use crate::error::{Error, Result};
use crate::matrix::{mat_proportional, Verdict};

/// A Hermitian Pauli operator `±P₁⊗…⊗Pₙ`; `(x, z) = (1, 1)` stands for `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pauli {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
    pub neg: bool,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Pauli { x: vec![false; n], z: vec![false; n], neg: false }
    }

    /// Parses `±` followed by letters from `IXYZ`; the sign is optional.
    pub fn parse(s: &str) -> Result<Self> {
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let mut p = Pauli::identity(body.len());
        for (i, ch) in body.chars().enumerate() {
            let (x, z) = match ch {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => return Err(Error::InvalidTableau(format!("bad Pauli letter {ch:?} in {s:?}"))),
            };
            p.x[i] = x;
            p.z[i] = z;
        }
        p.neg = neg;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        !self.x.iter().chain(&self.z).any(|&b| b)
    }

    pub fn commutes(&self, other: &Pauli) -> bool {
        let mut s = false;
        for i in 0..self.len() {
            s ^= (self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i]);
        }
        !s
    }

    /// `self · other` for commuting operators.
    pub fn mul(&self, other: &Pauli) -> Pauli {
        debug_assert!(self.commutes(other));
        // Phase exponent of i, tracked mod 4.
        let mut e: i64 = 2 * (self.neg as i64 + other.neg as i64);
        for j in 0..self.len() {
            e += g(self.x[j], self.z[j], other.x[j], other.z[j]);
        }
        Pauli {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            neg: e.rem_euclid(4) == 2,
        }
    }
}

/// Exponent of `i` picked up when multiplying single-qubit Paulis.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i64 {
    let (x2, z2) = (x2 as i64, z2 as i64);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.neg { "-" } else { "+" })?;
        for i in 0..self.len() {
            f.write_str(match (self.x[i], self.z[i]) {
                (false, false) => "I",
                (true, false) => "X",
                (true, true) => "Y",
                (false, true) => "Z",
            })?;
        }
        Ok(())
    }
}

/// A stabilizer state given by generators, or the zero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabTableau {
    Zero { n: usize },
    State { n: usize, rows: Vec<Pauli> },
}

impl StabTableau {
    pub fn from_rows(rows: Vec<Pauli>) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTableau("rows have different lengths".into()));
        }
        Ok(StabTableau::State { n, rows })
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            StabTableau::Zero { n } | StabTableau::State { n, .. } => *n,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, StabTableau::Zero { .. })
    }

    pub fn rows(&self) -> &[Pauli] {
        match self {
            StabTableau::Zero { .. } => &[],
            StabTableau::State { rows, .. } => rows,
        }
    }

    /// Whether `p` (with its sign) lies in the generated group.
    pub fn contains(&self, p: &Pauli) -> Result<bool> {
        let t = tableau_canonical(self)?;
        let rows = t.rows();
        let mut acc = Pauli::identity(p.len());
        let mut rest = p.clone();
        rest.neg = false;
        for r in rows {
            let col = pivot(r).unwrap();
            if bit(&rest, col) {
                if !rest.commutes(r) {
                    return Ok(false);
                }
                rest = rest.mul(r);
                acc = acc.mul(r);
            }
        }
        Ok(rest.is_identity() && acc == *p)
    }
}

impl fmt::Display for StabTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabTableau::Zero { n } => write!(f, "Zero({n} qubits)"),
            StabTableau::State { rows, .. } => {
                for r in rows {
                    writeln!(f, "{r}")?;
                }
                Ok(())
            }
        }
    }
}

/// Column `c` of the `(x | z)` matrix.
fn bit(p: &Pauli, c: usize) -> bool {
    let n = p.len();
    if c < n {
        p.x[c]
    } else {
        p.z[c - n]
    }
}

fn pivot(p: &Pauli) -> Option<usize> {
    (0..2 * p.len()).find(|&c| bit(p, c))
}

/// Reduced row echelon form over GF(2) on columns `x₀…xₙ₋₁ z₀…zₙ₋₁`, with
/// signs carried through the row products.
pub fn tableau_canonical(t: &StabTableau) -> Result<StabTableau> {
    let StabTableau::State { n, rows } = t else { return Ok(t.clone()) };
    let n = *n;
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            if !a.commutes(b) {
                return Err(Error::InvalidTableau(format!("{a} and {b} anticommute")));
            }
        }
    }
    let mut rows = rows.clone();
    let mut r = 0;
    for c in 0..2 * n {
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], c)) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && bit(&rows[i], c) {
                rows[i] = rows[i].mul(&rows[r]);
            }
        }
        r += 1;
    }
    if let Some(z) = rows.get(r) {
        let msg = if z.neg { "generators contain -I" } else { "generators are dependent" };
        return Err(Error::InvalidTableau(msg.into()));
    }
    Ok(StabTableau::State { n, rows })
}

/// Working state of the Choi simulation.
struct Sim {
    rows: Vec<Pauli>,
    /// Label per qubit column; `None` for reference qubits.
    cols: Vec<Option<String>>,
    zero: bool,
}

impl Sim {
    fn col(&self, w: &str) -> usize {
        self.cols.iter().position(|c| c.as_deref() == Some(w)).expect("live wire")
    }

    fn add_qubit(&mut self, label: Option<String>) -> usize {
        for r in &mut self.rows {
            r.x.push(false);
            r.z.push(false);
        }
        self.cols.push(label);
        self.cols.len() - 1
    }

    fn h(&mut self, a: usize) {
        for r in &mut self.rows {
            r.neg ^= r.x[a] & r.z[a];
            std::mem::swap(&mut r.x[a], &mut r.z[a]);
        }
    }

    fn s(&mut self, a: usize) {
        for r in &mut self.rows {
            r.neg ^= r.x[a] & r.z[a];
            r.z[a] ^= r.x[a];
        }
    }

    fn cnot(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            r.neg ^= r.x[a] & r.z[b] & !(r.x[b] ^ r.z[a]);
            r.x[b] ^= r.x[a];
            r.z[a] ^= r.z[b];
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            r.x.swap(a, b);
            r.z.swap(a, b);
        }
    }

    /// Projects qubit `q` onto the +1 eigenspace of `Z_q` and removes it.
    fn postselect_zero(&mut self, q: usize) {
        let n = self.cols.len();
        let mut zq = Pauli::identity(n);
        zq.z[q] = true;
        let anti: Vec<usize> = (0..self.rows.len()).filter(|&i| self.rows[i].x[q]).collect();
        let slot = if let Some((&p, others)) = anti.split_first() {
            for &i in others {
                self.rows[i] = self.rows[i].mul(&self.rows[p]);
            }
            p
        } else {
            // ±Z_q is already in the group; find which generators make it.
            let t = StabTableau::State { n, rows: self.rows.clone() };
            if t.contains(&zq) != Ok(true) {
                self.zero = true;
                return;
            }
            // In echelon form the row pivoting on z_q takes part in every
            // product giving Z_q, so it can be traded for Z_q.
            self.rows = tableau_canonical(&t).expect("valid group").rows().to_vec();
            self.rows.iter().position(|r| pivot(r) == Some(n + q)).expect("Z_q in group")
        };
        self.rows[slot] = zq;
        for i in 0..self.rows.len() {
            if i != slot && self.rows[i].z[q] {
                self.rows[i] = self.rows[i].mul(&self.rows[slot]);
            }
        }
        self.rows.remove(slot);
        for r in &mut self.rows {
            r.x.remove(q);
            r.z.remove(q);
        }
        self.cols.remove(q);
    }
}

/// Canonical tableau of the Choi state of `c`: reference qubits in input
/// order, then outputs in output order.
pub fn choi_tableau(c: &Circuit) -> StabTableau {
    let mut sim = Sim { rows: Vec::new(), cols: Vec::new(), zero: false };
    let n_in = c.inputs().len();
    for _ in 0..n_in {
        sim.add_qubit(None);
    }
    for (i, w) in c.inputs().iter().enumerate() {
        let q = sim.add_qubit(Some(w.clone()));
        let mut xx = Pauli::identity(q + 1);
        xx.x[i] = true;
        xx.x[q] = true;
        let mut zz = Pauli::identity(q + 1);
        zz.z[i] = true;
        zz.z[q] = true;
        sim.rows.push(xx);
        sim.rows.push(zz);
    }
    for ins in c.instrs() {
        let w = &ins.wires;
        match ins.kind {
            GateKind::PrepZero | GateKind::PrepPlus => {
                let q = sim.add_qubit(Some(w[0].clone()));
                let mut p = Pauli::identity(q + 1);
                if ins.kind == GateKind::PrepZero {
                    p.z[q] = true;
                } else {
                    p.x[q] = true;
                }
                sim.rows.push(p);
            }
            GateKind::PostZero => {
                let q = sim.col(&w[0]);
                sim.postselect_zero(q);
            }
            GateKind::PostPlus => {
                let q = sim.col(&w[0]);
                sim.h(q);
                sim.postselect_zero(q);
            }
            GateKind::Cnot => {
                let (a, b) = (sim.col(&w[0]), sim.col(&w[1]));
                sim.cnot(a, b);
            }
            GateKind::Swap => {
                let (a, b) = (sim.col(&w[0]), sim.col(&w[1]));
                sim.swap(a, b);
            }
            GateKind::H => {
                let a = sim.col(&w[0]);
                sim.h(a);
            }
            GateKind::RotZ(p) => {
                let a = sim.col(&w[0]);
                for _ in 0..p.quarters() {
                    sim.s(a);
                }
            }
            GateKind::RotX(p) => {
                let a = sim.col(&w[0]);
                sim.h(a);
                for _ in 0..p.quarters() {
                    sim.s(a);
                }
                sim.h(a);
            }
        }
        if sim.zero {
            return StabTableau::Zero { n: n_in + c.outputs().len() };
        }
    }
    // Reorder columns: references, then outputs.
    let mut order: Vec<usize> = (0..n_in).collect();
    order.extend(c.outputs().iter().map(|w| sim.col(w)));
    let rows = sim
        .rows
        .iter()
        .map(|r| Pauli {
            x: order.iter().map(|&q| r.x[q]).collect(),
            z: order.iter().map(|&q| r.z[q]).collect(),
            neg: r.neg,
        })
        .collect();
    tableau_canonical(&StabTableau::State { n: order.len(), rows }).expect("simulation keeps a valid group")
}

fn check_arities(c1: &Circuit, c2: &Circuit) -> Result<()> {
    if c1.inputs().len() != c2.inputs().len() || c1.outputs().len() != c2.outputs().len() {
        return Err(Error::DimensionMismatch(format!(
            "circuits have arities {}->{} and {}->{}",
            c1.inputs().len(),
            c1.outputs().len(),
            c2.inputs().len(),
            c2.outputs().len()
        )));
    }
    Ok(())
}

/// Equivalence up to a nonzero scalar, decided on stabilizer groups.
pub fn equiv_tableau(c1: &Circuit, c2: &Circuit) -> Result<bool> {
    check_arities(c1, c2)?;
    Ok(choi_tableau(c1) == choi_tableau(c2))
}

/// Exact comparison of the circuit matrices.
pub fn equiv_exact(c1: &Circuit, c2: &Circuit) -> Result<Verdict> {
    check_arities(c1, c2)?;
    mat_proportional(&circuit_to_matrix(c1)?, &circuit_to_matrix(c2)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(rows: &[&str]) -> StabTableau {
        StabTableau::from_rows(rows.iter().map(|r| Pauli::parse(r).unwrap()).collect()).unwrap()
    }

    fn choi(t: &str) -> StabTableau {
        choi_tableau(&Circuit::parse(t).unwrap())
    }

    #[test]
    fn product_signs() {
        let x = Pauli::parse("X").unwrap();
        let z = Pauli::parse("Z").unwrap();
        let xx = Pauli::parse("XX").unwrap();
        let zz = Pauli::parse("ZZ").unwrap();
        assert_eq!(xx.mul(&zz), Pauli::parse("-YY").unwrap());
        assert!(!x.commutes(&z));
    }

    #[test]
    fn canonical_is_unique() {
        let a = tableau_canonical(&tab(&["ZZ", "XX"])).unwrap();
        let b = tableau_canonical(&tab(&["XX", "ZZ"])).unwrap();
        let c = tableau_canonical(&tab(&["ZZ", "-YY"])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(tableau_canonical(&tab(&["XI", "ZI"])).is_err());
    }

    #[test]
    fn identity_choi() {
        assert_eq!(choi("input a\noutput a"), tableau_canonical(&tab(&["XX", "ZZ"])).unwrap());
        assert_eq!(choi("input a\nh a\noutput a"), tableau_canonical(&tab(&["XZ", "ZX"])).unwrap());
    }

    #[test]
    fn impossible_postselection_is_zero() {
        assert!(choi("prep0 a\nrx a 2\npost0 a").is_zero());
        assert!(!choi("prep0 a\nrx a 1\npost0 a").is_zero());
    }

    #[test]
    fn teleport_and_friends() {
        let t = Circuit::parse("input a\nprepplus b\nprep0 c\ncnot b c\ncnot a b\npostplus a\npost0 b\noutput c").unwrap();
        let id = Circuit::identity(1);
        assert!(equiv_tableau(&t, &id).unwrap());
        assert!(equiv_exact(&t, &id).unwrap().is_equivalent());
        let cnot = Circuit::parse("input a b\ncnot a b\noutput a b").unwrap();
        let swap = Circuit::parse("input a b\nswap a b\noutput a b").unwrap();
        assert!(!equiv_tableau(&cnot, &swap).unwrap());
        assert_eq!(equiv_exact(&cnot, &swap).unwrap().kind(), "Different");
    }
}
