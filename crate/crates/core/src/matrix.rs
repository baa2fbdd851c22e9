//! Dense exact matrices and equality up to a nonzero scalar.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::CliffordScalar;

/// Largest supported input or output arity.
pub const MAX_QUBITS: usize = 12;

/// A `2^outs × 2^ins` matrix of exact scalars in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    outs: usize,
    ins: usize,
    data: Vec<CliffordScalar>,
}

/// The ratio found by [`mat_proportional`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ratio {
    /// `A = λ·B`.
    Scalar(CliffordScalar),
    /// `B = μ·A`, reported when `A/B` is not in the ring but `B/A` is.
    Inverse(CliffordScalar),
    /// `A·den = B·num`; neither direction divides in the ring.
    Fraction { num: CliffordScalar, den: CliffordScalar },
}

/// Verdict of comparing two matrices up to a nonzero scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Proportional(Ratio),
    BothZero,
    Different { row: usize, col: usize },
}

impl Verdict {
    /// True for every verdict except [`Verdict::Different`].
    pub fn is_equivalent(&self) -> bool {
        !matches!(self, Verdict::Different { .. })
    }

    /// Short name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Equal => "Equal",
            Verdict::Proportional(_) => "Proportional",
            Verdict::BothZero => "BothZero",
            Verdict::Different { .. } => "Different",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => write!(f, "Equal"),
            Verdict::Proportional(Ratio::Scalar(l)) => write!(f, "Proportional({l:?})"),
            Verdict::Proportional(Ratio::Inverse(m)) => write!(f, "Proportional(1/{m:?})"),
            Verdict::Proportional(Ratio::Fraction { num, den }) => {
                write!(f, "Proportional({num:?} / {den:?})")
            }
            Verdict::BothZero => write!(f, "BothZero"),
            Verdict::Different { row, col } => write!(f, "Different at ({row}, {col})"),
        }
    }
}

fn check_arity(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::ArityOverflow(n, MAX_QUBITS));
    }
    Ok(())
}

impl ExactMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(outs: usize, ins: usize, data: Vec<CliffordScalar>) -> Result<Self> {
        check_arity(outs)?;
        check_arity(ins)?;
        if data.len() != (1 << outs) * (1 << ins) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                (1usize << outs) * (1usize << ins),
                1usize << outs,
                1usize << ins,
                data.len()
            )));
        }
        Ok(ExactMatrix { outs, ins, data })
    }

    pub fn zeros(outs: usize, ins: usize) -> Result<Self> {
        Self::new(outs, ins, vec![CliffordScalar::zero(); (1 << outs) * (1 << ins)])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..1 << n {
            m.data[i * (1 << n) + i] = CliffordScalar::one();
        }
        Ok(m)
    }

    /// Builds a matrix from small integer entries.
    pub fn from_ints(outs: usize, ins: usize, entries: &[i64]) -> Result<Self> {
        Self::new(outs, ins, entries.iter().map(|&x| CliffordScalar::from_int(x)).collect())
    }

    pub fn out_qubits(&self) -> usize {
        self.outs
    }

    pub fn in_qubits(&self) -> usize {
        self.ins
    }

    pub fn rows(&self) -> usize {
        1 << self.outs
    }

    pub fn cols(&self) -> usize {
        1 << self.ins
    }

    pub fn get(&self, row: usize, col: usize) -> CliffordScalar {
        self.data[row * self.cols() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: CliffordScalar) {
        let c = self.cols();
        self.data[row * c + col] = v;
    }

    pub fn entries(&self) -> &[CliffordScalar] {
        &self.data
    }

    pub fn scale(&self, s: CliffordScalar) -> ExactMatrix {
        ExactMatrix { outs: self.outs, ins: self.ins, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            let row: Vec<String> = (0..self.cols()).map(|c| format!("{:?}", self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact matrix product `A·B`.
pub fn mat_mul(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    if a.ins != b.outs {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut out = ExactMatrix::zeros(a.outs, b.ins)?;
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols() {
                let y = b.get(k, j);
                if !y.is_zero() {
                    let idx = i * out.cols() + j;
                    out.data[idx] += x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product with `A`'s indices most significant.
pub fn mat_tensor(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    let mut out = ExactMatrix::zeros(a.outs + b.outs, a.ins + b.ins)?;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, x * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Decides whether `A = λ·B` for some nonzero scalar λ.
///
/// The test cross-multiplies against the first nonzero entries and never
/// divides; λ is only computed for the report.
pub fn mat_proportional(a: &ExactMatrix, b: &ExactMatrix) -> Result<Verdict> {
    if a.outs != b.outs || a.ins != b.ins {
        return Err(Error::DimensionMismatch(format!(
            "cannot compare {}x{} with {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let at = |idx: usize| (idx / a.cols(), idx % a.cols());
    let first_a = a.data.iter().position(|x| !x.is_zero());
    let first_b = b.data.iter().position(|x| !x.is_zero());
    let pivot = match (first_a, first_b) {
        (None, None) => return Ok(Verdict::BothZero),
        (Some(i), None) | (None, Some(i)) => {
            let (row, col) = at(i);
            return Ok(Verdict::Different { row, col });
        }
        (Some(i), Some(j)) if i != j => {
            let (row, col) = at(i.min(j));
            return Ok(Verdict::Different { row, col });
        }
        (Some(i), Some(_)) => i,
    };
    let a0 = a.data[pivot];
    let b0 = b.data[pivot];
    for (idx, (&x, &y)) in a.data.iter().zip(&b.data).enumerate() {
        if x * b0 != y * a0 {
            let (row, col) = at(idx);
            return Ok(Verdict::Different { row, col });
        }
    }
    if a0 == b0 {
        return Ok(Verdict::Equal);
    }
    let ratio = match a0.checked_div(&b0) {
        Some(l) => Ratio::Scalar(l),
        None => match b0.checked_div(&a0) {
            Some(m) => Ratio::Inverse(m),
            None => Ratio::Fraction { num: a0, den: b0 },
        },
    };
    Ok(Verdict::Proportional(ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> ExactMatrix {
        ExactMatrix::from_ints(1, 1, &[1, 1, 1, -1]).unwrap()
    }

    fn cnot() -> ExactMatrix {
        ExactMatrix::from_ints(2, 2, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0]).unwrap()
    }

    #[test]
    fn cnot_squared_is_identity() {
        let p = mat_mul(&cnot(), &cnot()).unwrap();
        assert_eq!(p, ExactMatrix::identity(2).unwrap());
    }

    #[test]
    fn h_squared() {
        let p = mat_mul(&h(), &h()).unwrap();
        assert_eq!(p, ExactMatrix::identity(1).unwrap().scale(CliffordScalar::from_int(2)));
        let v = mat_proportional(&p, &ExactMatrix::identity(1).unwrap()).unwrap();
        assert_eq!(v, Verdict::Proportional(Ratio::Scalar(CliffordScalar::from_int(2))));
    }

    #[test]
    fn tensor_examples() {
        let i2 = ExactMatrix::identity(1).unwrap();
        assert_eq!(mat_tensor(&i2, &i2).unwrap(), ExactMatrix::identity(2).unwrap());
        let s = CliffordScalar::sqrt2();
        let z = CliffordScalar::zero();
        let ket0 = ExactMatrix::new(1, 0, vec![s, z]).unwrap();
        let t = mat_tensor(&ket0, &ket0).unwrap();
        assert_eq!(t, ExactMatrix::from_ints(2, 0, &[2, 0, 0, 0]).unwrap());
        let two = ExactMatrix::from_ints(0, 0, &[2]).unwrap();
        assert_eq!(mat_tensor(&two, &i2).unwrap(), i2.scale(CliffordScalar::from_int(2)));
    }

    #[test]
    fn different_witness() {
        let z = ExactMatrix::from_ints(1, 1, &[1, 0, 0, -1]).unwrap();
        let v = mat_proportional(&ExactMatrix::identity(1).unwrap(), &z).unwrap();
        assert_eq!(v, Verdict::Different { row: 1, col: 1 });
    }

    #[test]
    fn ratio_direction() {
        let m = h();
        let v = mat_proportional(&m, &m.scale(CliffordScalar::from_int(2))).unwrap();
        let half = CliffordScalar::new(1, 0, 0, 0, 2);
        assert_eq!(v, Verdict::Proportional(Ratio::Scalar(half)));
        let v = mat_proportional(&m, &m.scale(CliffordScalar::from_int(3))).unwrap();
        assert_eq!(v, Verdict::Proportional(Ratio::Inverse(CliffordScalar::from_int(3))));
    }

    #[test]
    fn zero_cases() {
        let z = ExactMatrix::zeros(1, 1).unwrap();
        assert_eq!(mat_proportional(&z, &z).unwrap(), Verdict::BothZero);
        assert!(!mat_proportional(&z, &h()).unwrap().is_equivalent());
    }
}
