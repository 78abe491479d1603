//! Arithmetic in the prime field F_q and multi-index binomial coefficients mod q.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range (need 2 <= q <= 2^31)")]
    ModulusOutOfRange(u64),
    #[error("field specs disagree: q={0} vs q={1}")]
    SpecMismatch(u32, u32),
    #[error("inversion of zero in F_{0}")]
    ZeroInverse(u32),
    #[error("multi-index arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

/// The prime field F_q. Primality is checked at construction by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    q: u32,
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q < 2 || q > (1 << 31) {
            return Err(FieldError::ModulusOutOfRange(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(FieldSpec { q: q as u32 })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn elem(&self, value: u64) -> FieldElem {
        FieldElem {
            value: (value % self.q as u64) as u32,
            spec: *self,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    // Raw ops on canonical residues. Inputs must already be in [0, q);
    // the cheap invariant is debug-asserted.
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        let s = a as u64 + b as u64;
        (s % self.q as u64) as u32
    }

    pub fn sub_raw(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        self.add_raw(a, self.neg_raw(b))
    }

    pub fn neg_raw(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        debug_assert!(a < self.q);
        let mut base = a;
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// Modular inverse by the extended Euclidean algorithm.
    pub fn inv_raw(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse(self.q));
        }
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.q as i64) as u32)
    }

    /// C(a, b) mod q via Lucas' theorem: split a and b into base-q digits and
    /// multiply the per-digit binomials. Avoids big integers for the large
    /// exponents that show up with degrees around k(q-1).
    pub fn binom_raw(&self, a: u64, b: u64) -> u32 {
        if b > a {
            return 0;
        }
        let q = self.q as u64;
        let (mut a, mut b) = (a, b);
        let mut acc = 1u32;
        while a > 0 || b > 0 {
            let (ad, bd) = (a % q, b % q);
            acc = self.mul_raw(acc, self.small_binom(ad as u32, bd as u32));
            if acc == 0 {
                return 0;
            }
            a /= q;
            b /= q;
        }
        acc
    }

    // C(a, b) mod q for digits a, b < q, by the multiplicative formula.
    // Every divisor 1..=b is invertible since b < q.
    fn small_binom(&self, a: u32, b: u32) -> u32 {
        if b > a {
            return 0;
        }
        let mut acc = 1u32;
        for i in 0..b {
            acc = self.mul_raw(acc, (a - i) % self.q);
            acc = self.mul_raw(acc, self.inv_raw((i + 1) % self.q).unwrap());
        }
        acc
    }
}

/// An element of F_q in canonical residue form, tagged with its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    spec: FieldSpec,
}

impl FieldElem {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElem) -> Result<FieldSpec, FieldError> {
        if self.spec != other.spec {
            return Err(FieldError::SpecMismatch(self.spec.q, other.spec.q));
        }
        Ok(self.spec)
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        let spec = self.check(other)?;
        Ok(spec.elem(spec.add_raw(self.value, other.value) as u64))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        let spec = self.check(other)?;
        Ok(spec.elem(spec.sub_raw(self.value, other.value) as u64))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        let spec = self.check(other)?;
        Ok(spec.elem(spec.mul_raw(self.value, other.value) as u64))
    }

    pub fn neg(&self) -> FieldElem {
        self.spec.elem(self.spec.neg_raw(self.value) as u64)
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        Ok(self.spec.elem(self.spec.inv_raw(self.value)? as u64))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.spec.elem(self.spec.pow_raw(self.value, e) as u64)
    }
}

/// Multi-index binomial coefficient prod_i C(alpha_i, beta_i) mod q, with the
/// convention that the result is zero whenever some beta_i > alpha_i.
pub fn multi_binom(alpha: &[u64], beta: &[u64], spec: FieldSpec) -> Result<FieldElem, FieldError> {
    if alpha.len() != beta.len() {
        return Err(FieldError::ArityMismatch(alpha.len(), beta.len()));
    }
    let mut acc = 1u32;
    for (&a, &b) in alpha.iter().zip(beta) {
        acc = spec.mul_raw(acc, spec.binom_raw(a, b));
        if acc == 0 {
            break;
        }
    }
    Ok(spec.elem(acc as u64))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn rejects_composite_and_out_of_range() {
        assert_eq!(FieldSpec::new(9), Err(FieldError::NotPrime(9)));
        assert_eq!(FieldSpec::new(1), Err(FieldError::ModulusOutOfRange(1)));
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(2147483647).is_ok());
    }

    #[test]
    fn basic_ops_mod_5() {
        let f5 = f(5);
        assert_eq!(f5.elem(3).add(&f5.elem(4)).unwrap().value(), 2);
        assert_eq!(f5.elem(3).mul(&f5.elem(4)).unwrap().value(), 2);
        assert_eq!(f5.elem(2).inv().unwrap().value(), 3);
        assert_eq!(f(7).elem(3).inv().unwrap().value(), 5);
    }

    #[test]
    fn spec_mismatch_and_zero_inverse_error() {
        let (f5, f7) = (f(5), f(7));
        assert!(matches!(
            f5.elem(1).add(&f7.elem(1)),
            Err(FieldError::SpecMismatch(5, 7))
        ));
        assert_eq!(f5.elem(0).inv(), Err(FieldError::ZeroInverse(5)));
    }

    #[test]
    fn inverse_exhaustive_small_primes() {
        for q in [2u64, 3, 5, 7, 11, 13, 97, 101] {
            let fq = f(q);
            for a in 1..q as u32 {
                let e = fq.elem(a as u64);
                assert_eq!(e.mul(&e.inv().unwrap()).unwrap().value(), 1);
            }
        }
    }

    #[test]
    fn multi_binom_examples() {
        let f5 = f(5);
        assert_eq!(multi_binom(&[2, 1], &[1, 1], f5).unwrap().value(), 2);
        assert_eq!(multi_binom(&[1, 0], &[0, 2], f5).unwrap().value(), 0);
        // C(5,2) = 10 = 0 mod 5; Lucas digits (1,0) choose (0,2)
        assert_eq!(multi_binom(&[5], &[2], f5).unwrap().value(), 0);
        assert!(matches!(
            multi_binom(&[1, 2], &[1], f5),
            Err(FieldError::ArityMismatch(2, 1))
        ));
    }

    #[test]
    fn multi_binom_boundary_identities() {
        let f7 = f(7);
        for alpha in [[0u64, 0, 0], [3, 1, 4], [6, 6, 6], [10, 0, 2]] {
            assert_eq!(multi_binom(&alpha, &[0, 0, 0], f7).unwrap().value(), 1);
            assert_eq!(multi_binom(&alpha, &alpha, f7).unwrap().value(), 1);
        }
    }

    // Direct integer C(a,b) reduced mod q, as an oracle for the Lucas path.
    fn binom_direct(a: u64, b: u64, q: u64) -> u32 {
        if b > a {
            return 0;
        }
        let mut num = 1u128;
        for i in 0..b {
            num = num * (a - i) as u128 / (i + 1) as u128;
        }
        (num % q as u128) as u32
    }

    #[test]
    fn lucas_matches_direct_reduction() {
        let mut rng = SplitMix64::new(0x4c75_6361);
        for _ in 0..10_000 {
            let q = [2u64, 3, 5, 7][rng.below(4) as usize];
            let a = rng.below(41);
            let b = rng.below(41);
            assert_eq!(
                f(q).binom_raw(a, b),
                binom_direct(a, b, q),
                "C({a},{b}) mod {q}"
            );
        }
    }
}
