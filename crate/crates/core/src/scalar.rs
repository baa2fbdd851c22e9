//! Exact scalars in Z[ω, 1/√2] with ω = e^{iπ/4}.
//!
//! A value is stored as `(a + bω + cω² + dω³) / √2^k`. Every entry of the
//! generator matrices used by this crate lies in this ring, so all checks are
//! exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use crate::phase::Phase;

/// Numerator of √2 = ω − ω³.
const SQRT2: [i64; 4] = [0, 1, 0, -1];

/// A scalar `(a + bω + cω² + dω³) / √2^k`, always kept in canonical form.
///
/// Canonical means `k = 0` or the numerator is not divisible by √2. Zero is
/// `(0,0,0,0;0)`. Two canonical scalars are equal iff their fields are equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordScalar {
    coeffs: [i64; 4],
    k: u32,
}

fn poly_mul(p: &[i64; 4], q: &[i64; 4]) -> [i64; 4] {
    let mut r = [0i64; 4];
    for i in 0..4 {
        if p[i] == 0 {
            continue;
        }
        for j in 0..4 {
            let t = p[i] * q[j];
            if i + j < 4 {
                r[i + j] += t;
            } else {
                r[i + j - 4] -= t;
            }
        }
    }
    r
}

/// Applies the Galois automorphism ω ↦ ω^j (j odd) to a numerator.
fn galois(p: &[i64; 4], j: usize) -> [i64; 4] {
    let mut r = [0i64; 4];
    for (i, &c) in p.iter().enumerate() {
        let e = (i * j) % 8;
        if e < 4 {
            r[e] += c;
        } else {
            r[e - 4] -= c;
        }
    }
    r
}

fn mul_sqrt2_pow(mut p: [i64; 4], n: u32) -> [i64; 4] {
    for _ in 0..n / 2 {
        p = p.map(|c| 2 * c);
    }
    if n % 2 == 1 {
        p = poly_mul(&p, &SQRT2);
    }
    p
}

impl CliffordScalar {
    /// Builds `(a + bω + cω² + dω³) / √2^k` and canonicalizes it.
    pub fn new(a: i64, b: i64, c: i64, d: i64, k: u32) -> Self {
        Self::from_parts([a, b, c, d], k)
    }

    pub fn from_parts(coeffs: [i64; 4], k: u32) -> Self {
        CliffordScalar { coeffs, k }.canonical()
    }

    pub fn zero() -> Self {
        CliffordScalar { coeffs: [0; 4], k: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        CliffordScalar { coeffs: [n, 0, 0, 0], k: 0 }
    }

    pub fn sqrt2() -> Self {
        CliffordScalar { coeffs: SQRT2, k: 0 }
    }

    /// The scalar `1/√2`.
    pub fn inv_sqrt2() -> Self {
        CliffordScalar { coeffs: [1, 0, 0, 0], k: 1 }
    }

    /// `ω^n` for any integer `n`.
    pub fn omega_pow(n: i64) -> Self {
        let e = n.rem_euclid(8) as usize;
        let mut coeffs = [0i64; 4];
        if e < 4 {
            coeffs[e] = 1;
        } else {
            coeffs[e - 4] = -1;
        }
        CliffordScalar { coeffs, k: 0 }
    }

    /// `e^{i phase}` for a quarter-turn phase.
    pub fn from_phase(p: Phase) -> Self {
        Self::omega_pow(2 * p.quarters() as i64)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::omega_pow(2)
    }

    pub fn coeffs(&self) -> [i64; 4] {
        self.coeffs
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; 4]
    }

    /// Returns the canonical representative of this value.
    pub fn canonical(self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs;
        let mut k = self.k;
        while k > 0 {
            let t = poly_mul(&coeffs, &SQRT2);
            if t.iter().any(|c| c % 2 != 0) {
                break;
            }
            coeffs = t.map(|c| c / 2);
            k -= 1;
        }
        CliffordScalar { coeffs, k }
    }

    /// Complex value in double precision, as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let [a, b, c, d] = self.coeffs.map(|x| x as f64);
        let re = a + (b - d) * h;
        let im = c + (b + d) * h;
        let scale = 2f64.powf(-(self.k as f64) / 2.0);
        (re * scale, im * scale)
    }

    /// Exact quotient `self / other` when it lies in the ring.
    ///
    /// Returns `None` if `other` is zero or the quotient needs an odd
    /// denominator.
    pub fn checked_div(&self, other: &CliffordScalar) -> Option<CliffordScalar> {
        if other.is_zero() {
            return None;
        }
        // other^{-1} = √2^kb · conj / N with conj the product of the other
        // Galois images and N the (rational integer) norm.
        let nb = other.coeffs;
        let conj = poly_mul(&poly_mul(&galois(&nb, 3), &galois(&nb, 5)), &galois(&nb, 7));
        let norm = poly_mul(&nb, &conj);
        debug_assert_eq!(&norm[1..], &[0, 0, 0]);
        let mut n = norm[0];
        let mut num = poly_mul(&self.coeffs, &conj);
        let mut k = self.k as i64 - other.k as i64;
        if k < 0 {
            num = mul_sqrt2_pow(num, (-k) as u32);
            k = 0;
        }
        if n < 0 {
            n = -n;
            num = num.map(|c| -c);
        }
        while n % 2 == 0 {
            n /= 2;
            k += 2;
        }
        if num.iter().any(|c| c % n != 0) {
            return None;
        }
        Some(CliffordScalar::from_parts(num.map(|c| c / n), k as u32))
    }
}

impl Add for CliffordScalar {
    type Output = CliffordScalar;
    fn add(self, rhs: CliffordScalar) -> CliffordScalar {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let k = self.k.max(rhs.k);
        let p = mul_sqrt2_pow(self.coeffs, k - self.k);
        let q = mul_sqrt2_pow(rhs.coeffs, k - rhs.k);
        CliffordScalar::from_parts([p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]], k)
    }
}

impl AddAssign for CliffordScalar {
    fn add_assign(&mut self, rhs: CliffordScalar) {
        *self = *self + rhs;
    }
}

impl Neg for CliffordScalar {
    type Output = CliffordScalar;
    fn neg(self) -> CliffordScalar {
        CliffordScalar { coeffs: self.coeffs.map(|c| -c), k: self.k }
    }
}

impl Sub for CliffordScalar {
    type Output = CliffordScalar;
    fn sub(self, rhs: CliffordScalar) -> CliffordScalar {
        self + (-rhs)
    }
}

impl Mul for CliffordScalar {
    type Output = CliffordScalar;
    fn mul(self, rhs: CliffordScalar) -> CliffordScalar {
        if self.is_zero() || rhs.is_zero() {
            return CliffordScalar::zero();
        }
        CliffordScalar::from_parts(poly_mul(&self.coeffs, &rhs.coeffs), self.k + rhs.k)
    }
}

impl MulAssign for CliffordScalar {
    fn mul_assign(&mut self, rhs: CliffordScalar) {
        *self = *self * rhs;
    }
}

impl Default for CliffordScalar {
    fn default() -> Self {
        CliffordScalar::zero()
    }
}

impl fmt::Debug for CliffordScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.coeffs;
        write!(f, "({a} + {b}·w + {c}·w^2 + {d}·w^3)/sqrt2^{}", self.k)
    }
}

impl fmt::Display for CliffordScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: CliffordScalar, re: f64, im: f64) -> bool {
        let (a, b) = x.to_complex();
        (a - re).abs() < 1e-12 && (b - im).abs() < 1e-12
    }

    #[test]
    fn addition_examples() {
        let one = CliffordScalar::one();
        assert_eq!(one + one, CliffordScalar::new(2, 0, 0, 0, 0));
        let w = CliffordScalar::omega_pow(1);
        assert_eq!(w + w, CliffordScalar::new(0, 2, 0, 0, 0));
        let h = CliffordScalar::inv_sqrt2();
        let s = h + h;
        assert_eq!(s.coeffs(), [0, 1, 0, -1]);
        assert_eq!(s.k(), 0);
        assert!(close(s, std::f64::consts::SQRT_2, 0.0));
    }

    #[test]
    fn multiplication_examples() {
        let w = CliffordScalar::omega_pow(1);
        assert_eq!(w * w, CliffordScalar::new(0, 0, 1, 0, 0));
        let i = w * w;
        assert_eq!(i * i, CliffordScalar::new(-1, 0, 0, 0, 0));
        let h = CliffordScalar::inv_sqrt2();
        let q = h * h;
        assert_eq!((q.coeffs(), q.k()), ([1, 0, 0, 0], 2));
        assert!(close(q, 0.5, 0.0));
    }

    #[test]
    fn canonical_examples() {
        let z = CliffordScalar { coeffs: [0; 4], k: 5 }.canonical();
        assert_eq!((z.coeffs(), z.k()), ([0; 4], 0));
        let one = CliffordScalar::new(0, 1, 0, -1, 1);
        assert_eq!((one.coeffs(), one.k()), ([1, 0, 0, 0], 0));
        let x = CliffordScalar::new(2, 2, 0, 0, 2);
        assert_eq!((x.coeffs(), x.k()), ([1, 1, 0, 0], 0));
    }

    #[test]
    fn division() {
        let two = CliffordScalar::from_int(2);
        let half = CliffordScalar::one().checked_div(&two).unwrap();
        assert_eq!(half * two, CliffordScalar::one());
        let three = CliffordScalar::from_int(3);
        assert!(CliffordScalar::one().checked_div(&three).is_none());
        let x = CliffordScalar::new(1, 2, -1, 3, 1);
        let y = CliffordScalar::new(0, 1, 1, 0, 0);
        let q = (x * y).checked_div(&y).unwrap();
        assert_eq!(q, x);
    }

    #[test]
    fn debug_render() {
        let s = format!("{:?}", CliffordScalar::new(1, 0, 0, 2, 3));
        assert_eq!(s, "(1 + 0·w + 0·w^2 + 2·w^3)/sqrt2^3");
    }
}
