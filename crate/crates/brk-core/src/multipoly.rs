//! Sparse multivariate polynomials over F_q: graded lexicographic order,
//! arithmetic, evaluation, composition, Hasse derivatives, vanishing
//! multiplicities, and exhaustive zero counting.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{multi_binom, FieldElem, FieldError, FieldSpec};

/// Terms stored per polynomial may not exceed this; guards composition blowup.
pub const TERM_CAP: usize = 1_000_000;
/// Single-exponent ceiling, matching the configured max degree.
pub const MAX_EXPONENT: u32 = 10_000;
/// Enumeration ceiling for `zero_census`.
pub const CENSUS_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("operation on the zero polynomial")]
    ZeroPolynomial,
    #[error("exponent {0} exceeds the configured maximum {MAX_EXPONENT}")]
    ExponentTooLarge(u32),
    #[error("term count would exceed the cap of {TERM_CAP}")]
    TermCapExceeded,
    #[error("enumeration of {0} points exceeds the census cap of {CENSUS_CAP}")]
    CensusCapExceeded(u64),
    #[error("Schwartz-Zippel violated: {0} zeros (weight {1}) vs bound {2} — internal inconsistency")]
    SchwartzZippelViolation(u64, u64, u64),
}

/// A monic monomial: a tuple of nonnegative exponents of fixed arity.
///
/// `Ord` is the graded lexicographic order, assuming equal arity (all keys in
/// one polynomial share it); `grlex_cmp` is the checked entry point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Result<Self, PolyError> {
        if let Some(&e) = exps.iter().find(|&&e| e > MAX_EXPONENT) {
            return Err(PolyError::ExponentTooLarge(e));
        }
        Ok(Monomial { exps })
    }

    pub fn zero(arity: usize) -> Self {
        Monomial {
            exps: vec![0; arity],
        }
    }

    /// The i-th coordinate monomial x_i (zero-based).
    pub fn unit(arity: usize, i: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn grlex_cmp(&self, other: &Monomial) -> Result<Ordering, PolyError> {
        if self.arity() != other.arity() {
            return Err(PolyError::ArityMismatch(self.arity(), other.arity()));
        }
        Ok(self.cmp(other))
    }

    pub fn add(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        if self.arity() != other.arity() {
            return Err(PolyError::ArityMismatch(self.arity(), other.arity()));
        }
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference, or None if some entry would go negative.
    pub fn checked_sub(&self, other: &Monomial) -> Option<Monomial> {
        if self.arity() != other.arity() {
            return None;
        }
        self.exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(|exps| Monomial { exps })
    }

    /// True when every exponent of `other` is <= the matching one here.
    pub fn dominates(&self, other: &Monomial) -> bool {
        self.arity() == other.arity()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a >= b)
    }

    pub fn exps_u64(&self) -> Vec<u64> {
        self.exps.iter().map(|&e| e as u64).collect()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // grlex: total degree first, then lex on the exponent tuple; at the
        // first differing index the smaller entry loses.
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

/// A sparse polynomial over F_q in normal form: no stored coefficient is
/// zero, and the zero polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    arity: usize,
    spec: FieldSpec,
    terms: BTreeMap<Monomial, u32>,
}

impl MultiPoly {
    pub fn zero(arity: usize, spec: FieldSpec) -> Self {
        MultiPoly {
            arity,
            spec,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, spec: FieldSpec, c: u64) -> Self {
        let mut p = Self::zero(arity, spec);
        p.insert(Monomial::zero(arity), (c % spec.q() as u64) as u32);
        p
    }

    /// The coordinate polynomial x_i.
    pub fn variable(arity: usize, spec: FieldSpec, i: usize) -> Self {
        let mut p = Self::zero(arity, spec);
        p.insert(Monomial::unit(arity, i), 1);
        p
    }

    pub fn from_terms<I>(arity: usize, spec: FieldSpec, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, u32)>,
    {
        let mut p = Self::zero(arity, spec);
        for (m, c) in terms {
            if m.arity() != arity {
                return Err(PolyError::ArityMismatch(m.arity(), arity));
            }
            let c = (c as u64 % spec.q() as u64) as u32;
            let cur = p.terms.get(&m).copied().unwrap_or(0);
            p.insert(m, spec.add_raw(cur, c));
        }
        Ok(p)
    }

    fn insert(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree of the zero polynomial is reported as None.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Terms in grlex-descending order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, FieldElem)> {
        self.terms
            .iter()
            .rev()
            .map(|(m, &c)| (m, self.spec.elem(c as u64)))
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.spec
            .elem(self.terms.get(m).copied().unwrap_or(0) as u64)
    }

    /// The grlex-maximal term of a nonzero polynomial.
    pub fn leading_monomial(&self) -> Result<(Monomial, FieldElem), PolyError> {
        let (m, &c) = self.terms.iter().next_back().ok_or(PolyError::ZeroPolynomial)?;
        Ok((m.clone(), self.spec.elem(c as u64)))
    }

    fn check_compat(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch(self.arity, other.arity));
        }
        if self.spec != other.spec {
            return Err(FieldError::SpecMismatch(self.spec.q(), other.spec.q()).into());
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            let cur = out.terms.get(m).copied().unwrap_or(0);
            out.insert(m.clone(), self.spec.add_raw(cur, c));
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.add(&other.scale(self.spec.neg_raw(1)))
    }

    pub fn scale(&self, c: u32) -> MultiPoly {
        let c = (c as u64 % self.spec.q() as u64) as u32;
        let mut out = MultiPoly::zero(self.arity, self.spec);
        for (m, &a) in &self.terms {
            out.insert(m.clone(), self.spec.mul_raw(a, c));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        let mut acc: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let m = ma.add(mb)?;
                let c = self.spec.mul_raw(ca, cb);
                let entry = acc.entry(m).or_insert(0);
                *entry = self.spec.add_raw(*entry, c);
                if acc.len() > TERM_CAP {
                    return Err(PolyError::TermCapExceeded);
                }
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(MultiPoly {
            arity: self.arity,
            spec: self.spec,
            terms: acc,
        })
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::constant(self.arity, self.spec, 1);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[u32]) -> Result<FieldElem, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::ArityMismatch(point.len(), self.arity));
        }
        let mut acc = 0u32;
        for (m, &c) in &self.terms {
            let mut term = c;
            for (&x, &e) in point.iter().zip(m.exps()) {
                term = self.spec.mul_raw(term, self.spec.pow_raw(x % self.spec.q(), e as u64));
            }
            acc = self.spec.add_raw(acc, term);
        }
        Ok(self.spec.elem(acc as u64))
    }

    /// f(Q_1(y), ..., Q_m(y)); all Q_i must share arity and spec.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if subs.len() != self.arity {
            return Err(PolyError::ArityMismatch(subs.len(), self.arity));
        }
        let target_arity = subs.first().map(|p| p.arity).unwrap_or(0);
        for p in subs {
            if p.arity != target_arity {
                return Err(PolyError::ArityMismatch(p.arity, target_arity));
            }
            if p.spec != self.spec {
                return Err(FieldError::SpecMismatch(self.spec.q(), p.spec.q()).into());
            }
        }
        // Cache Q_i^e up to the largest exponent of x_i across all terms.
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.arity);
        for (i, q) in subs.iter().enumerate() {
            let max_e = self
                .terms
                .keys()
                .map(|m| m.exps()[i])
                .max()
                .unwrap_or(0);
            let mut ladder = vec![MultiPoly::constant(target_arity, self.spec, 1)];
            for e in 1..=max_e {
                ladder.push(ladder[(e - 1) as usize].mul(q)?);
            }
            powers.push(ladder);
        }
        let mut out = MultiPoly::zero(target_arity, self.spec);
        for (m, &c) in &self.terms {
            let mut term = MultiPoly::constant(target_arity, self.spec, c as u64);
            for (i, &e) in m.exps().iter().enumerate() {
                term = term.mul(&powers[i][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The beta-th Hasse derivative via the closed form
    /// sum_alpha c_alpha * C(alpha, beta) * x^(alpha - beta).
    pub fn hasse_derivative(&self, beta: &Monomial) -> Result<MultiPoly, PolyError> {
        if beta.arity() != self.arity {
            return Err(PolyError::ArityMismatch(beta.arity(), self.arity));
        }
        let mut out = MultiPoly::zero(self.arity, self.spec);
        for (alpha, &c) in &self.terms {
            let Some(diff) = alpha.checked_sub(beta) else {
                continue;
            };
            let b = multi_binom(&alpha.exps_u64(), &beta.exps_u64(), self.spec)?;
            let coeff = self.spec.mul_raw(c, b.value());
            let cur = out.terms.get(&diff).copied().unwrap_or(0);
            out.insert(diff, self.spec.add_raw(cur, coeff));
        }
        Ok(out)
    }

    /// Independent oracle for `hasse_derivative`: expand f(x+y) in 2m
    /// variables by substitution (binomials arise from repeated polynomial
    /// multiplication, never from `multi_binom`) and read off the y^beta
    /// coefficient.
    pub fn hasse_shift_oracle(&self, beta: &Monomial) -> Result<MultiPoly, PolyError> {
        if beta.arity() != self.arity {
            return Err(PolyError::ArityMismatch(beta.arity(), self.arity));
        }
        let m = self.arity;
        // x_i -> x_i + y_i, with x block first and y block second.
        let subs: Vec<MultiPoly> = (0..m)
            .map(|i| {
                MultiPoly::variable(2 * m, self.spec, i)
                    .add(&MultiPoly::variable(2 * m, self.spec, m + i))
                    .unwrap()
            })
            .collect();
        let shifted = self.compose(&subs)?;
        let mut out = MultiPoly::zero(m, self.spec);
        for (mono, &c) in &shifted.terms {
            if &mono.exps()[m..] == beta.exps() {
                out.insert(Monomial::new(mono.exps()[..m].to_vec())?, c);
            }
        }
        Ok(out)
    }

    /// mult(f, a): the largest M such that every Hasse derivative of order
    /// |beta| < M vanishes at a. None encodes the infinite multiplicity of
    /// the zero polynomial. Walks shells |beta| = 0, 1, ... and stops at the
    /// first nonvanishing derivative; for nonzero f this terminates by
    /// |beta| = deg f.
    pub fn multiplicity(&self, point: &[u32]) -> Result<Option<u32>, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::ArityMismatch(point.len(), self.arity));
        }
        if self.is_zero() {
            return Ok(None);
        }
        let deg = self.degree().unwrap();
        for shell in 0..=deg {
            for beta in monomials_of_degree(shell, self.arity) {
                if !self.hasse_derivative(&beta)?.evaluate(point)?.is_zero() {
                    return Ok(Some(shell));
                }
            }
        }
        Ok(Some(deg + 1))
    }

    /// Exhaustive zero count over A^m, plain and multiplicity-weighted. Both
    /// Schwartz-Zippel inequalities are asserted on the way out.
    pub fn zero_census(&self, a_set: &[u32]) -> Result<(u64, u64), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.arity == 0 {
            return Ok((0, 0));
        }
        let size = (a_set.len() as u64)
            .checked_pow(self.arity as u32)
            .unwrap_or(u64::MAX);
        if size > CENSUS_CAP {
            return Err(PolyError::CensusCapExceeded(size));
        }
        let d = self.degree().unwrap() as u64;
        let mut plain = 0u64;
        let mut weighted = 0u64;
        let mut point = vec![0u32; self.arity];
        let mut idx = vec![0usize; self.arity];
        loop {
            for (p, &i) in point.iter_mut().zip(&idx) {
                *p = a_set[i];
            }
            if self.evaluate(&point)?.is_zero() {
                plain += 1;
                weighted += self.multiplicity(&point)?.unwrap() as u64;
            }
            // odometer over A^m
            let mut pos = 0;
            loop {
                if pos == self.arity {
                    let bound = d * (a_set.len() as u64).pow(self.arity as u32 - 1);
                    if plain > bound || weighted > bound {
                        return Err(PolyError::SchwartzZippelViolation(plain, weighted, bound));
                    }
                    return Ok((plain, weighted));
                }
                idx[pos] += 1;
                if idx[pos] < a_set.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// All monomials of arity `n` with total degree exactly `deg`.
pub fn monomials_of_degree(deg: u32, n: usize) -> Vec<Monomial> {
    fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(Monomial::new(current.clone()).unwrap());
            return;
        }
        for e in 0..=remaining {
            current[pos] = e;
            fill(out, current, pos + 1, remaining - e);
        }
        current[pos] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Monomial::zero(0));
        }
        return out;
    }
    let mut current = vec![0u32; n];
    fill(&mut out, &mut current, 0, deg);
    out
}

/// Seeded random polynomial helpers shared by the property suites.
pub mod random {
    use super::{monomials_of_degree, Monomial, MultiPoly};
    use crate::field::FieldSpec;
    use crate::rng::SplitMix64;

    /// Uniform coefficients over every monomial of total degree <= max_deg.
    pub fn poly(arity: usize, max_deg: u32, spec: FieldSpec, rng: &mut SplitMix64) -> MultiPoly {
        let mut terms: Vec<(Monomial, u32)> = Vec::new();
        for d in 0..=max_deg {
            for m in monomials_of_degree(d, arity) {
                terms.push((m, rng.below(spec.q() as u64) as u32));
            }
        }
        MultiPoly::from_terms(arity, spec, terms).unwrap()
    }

    /// As `poly`, but retries until the result is nonzero.
    pub fn nonzero_poly(
        arity: usize,
        max_deg: u32,
        spec: FieldSpec,
        rng: &mut SplitMix64,
    ) -> MultiPoly {
        loop {
            let p = poly(arity, max_deg, spec, rng);
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn monomial(arity: usize, max_entry: u32, rng: &mut SplitMix64) -> Monomial {
        Monomial::new(
            (0..arity)
                .map(|_| rng.below(max_entry as u64 + 1) as u32)
                .collect(),
        )
        .unwrap()
    }

    pub fn point(arity: usize, spec: FieldSpec, rng: &mut SplitMix64) -> Vec<u32> {
        (0..arity)
            .map(|_| rng.below(spec.q() as u64) as u32)
            .collect()
    }

    /// Nonzero homogeneous polynomial of exact degree `deg`.
    pub fn homogeneous(
        arity: usize,
        deg: u32,
        spec: FieldSpec,
        rng: &mut SplitMix64,
    ) -> MultiPoly {
        loop {
            let terms: Vec<(Monomial, u32)> = monomials_of_degree(deg, arity)
                .into_iter()
                .map(|m| (m, rng.below(spec.q() as u64) as u32))
                .collect();
            let p = MultiPoly::from_terms(arity, spec, terms).unwrap();
            if !p.is_zero() {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::new(exps.to_vec()).unwrap()
    }

    fn poly(arity: usize, spec: FieldSpec, terms: &[(&[u32], u32)]) -> MultiPoly {
        MultiPoly::from_terms(
            arity,
            spec,
            terms.iter().map(|(e, c)| (mono(e), *c)),
        )
        .unwrap()
    }

    #[test]
    fn grlex_examples() {
        assert_eq!(
            mono(&[2, 0]).grlex_cmp(&mono(&[1, 2])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            mono(&[1, 1]).grlex_cmp(&mono(&[2, 0])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            mono(&[1, 1]).grlex_cmp(&mono(&[1, 1])).unwrap(),
            Ordering::Equal
        );
        assert!(mono(&[1]).grlex_cmp(&mono(&[1, 0])).is_err());
    }

    #[test]
    fn grlex_total_order_exhaustive() {
        // antisymmetry + transitivity + totality over arity <= 3, degree <= 5
        for arity in 1..=3usize {
            let mut all = Vec::new();
            for d in 0..=5 {
                all.extend(monomials_of_degree(d, arity));
            }
            for a in &all {
                for b in &all {
                    let ab = a.grlex_cmp(b).unwrap();
                    let ba = b.grlex_cmp(a).unwrap();
                    assert_eq!(ab, ba.reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                    for c in &all {
                        if ab != Ordering::Greater
                            && b.grlex_cmp(c).unwrap() != Ordering::Greater
                        {
                            assert_ne!(a.grlex_cmp(c).unwrap(), Ordering::Greater);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn leading_monomial_examples() {
        let f5 = f(5);
        let p = poly(2, f5, &[(&[2, 0], 2), (&[1, 1], 1), (&[0, 0], 3)]);
        let (m, c) = p.leading_monomial().unwrap();
        assert_eq!((m, c.value()), (mono(&[2, 0]), 2));

        let p = poly(2, f5, &[(&[0, 3], 1), (&[2, 0], 1)]);
        assert_eq!(p.leading_monomial().unwrap().0, mono(&[0, 3]));

        let p = poly(2, f5, &[(&[0, 0], 4)]);
        let (m, c) = p.leading_monomial().unwrap();
        assert_eq!((m, c.value()), (mono(&[0, 0]), 4));

        assert_eq!(
            MultiPoly::zero(2, f5).leading_monomial(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn mul_examples() {
        let f3 = f(3);
        // (x1 + x2)(x1 - x2) = x1^2 + 2 x2^2 mod 3
        let a = poly(2, f3, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = poly(2, f3, &[(&[1, 0], 1), (&[0, 1], 2)]);
        assert_eq!(
            a.mul(&b).unwrap(),
            poly(2, f3, &[(&[2, 0], 1), (&[0, 2], 2)])
        );

        // (x+1)^2 = x^2 + 1 over F_2
        let f2 = f(2);
        let xp1 = poly(1, f2, &[(&[1], 1), (&[0], 1)]);
        assert_eq!(
            xp1.pow(2).unwrap(),
            poly(1, f2, &[(&[2], 1), (&[0], 1)])
        );

        let z = MultiPoly::zero(2, f3);
        assert!(z.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let f5 = f(5);
        let p = poly(2, f5, &[(&[2, 1], 1)]);
        assert_eq!(p.evaluate(&[2, 3]).unwrap().value(), 2);

        let p = poly(2, f5, &[(&[2, 0], 3), (&[0, 0], 4)]);
        assert_eq!(p.evaluate(&[0, 0]).unwrap().value(), 4);
        assert_eq!(MultiPoly::zero(2, f5).evaluate(&[1, 2]).unwrap().value(), 0);
    }

    #[test]
    fn compose_examples() {
        let f5 = f(5);
        // f = x1 x2, Q = (t, t^2) -> t^3
        let fxy = poly(2, f5, &[(&[1, 1], 1)]);
        let q1 = poly(1, f5, &[(&[1], 1)]);
        let q2 = poly(1, f5, &[(&[2], 1)]);
        assert_eq!(
            fxy.compose(&[q1.clone(), q2]).unwrap(),
            poly(1, f5, &[(&[3], 1)])
        );

        // identity substitution
        let p = poly(2, f5, &[(&[2, 0], 3), (&[1, 1], 1)]);
        let id = vec![
            MultiPoly::variable(2, f5, 0),
            MultiPoly::variable(2, f5, 1),
        ];
        assert_eq!(p.compose(&id).unwrap(), p);

        // f = x1 + x2, Q = (t1, t1 + t2) -> 2 t1 + t2
        let s = poly(2, f5, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let qa = poly(2, f5, &[(&[1, 0], 1)]);
        let qb = poly(2, f5, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(
            s.compose(&[qa, qb]).unwrap(),
            poly(2, f5, &[(&[1, 0], 2), (&[0, 1], 1)])
        );
    }

    #[test]
    fn hasse_derivative_examples() {
        // f = x^3 over F_3, beta = 2 -> 0 since C(3,2) = 3 = 0 mod 3
        let f3 = f(3);
        let cube = poly(1, f3, &[(&[3], 1)]);
        assert!(cube.hasse_derivative(&mono(&[2])).unwrap().is_zero());

        let f5 = f(5);
        let p = poly(2, f5, &[(&[2, 1], 1)]);
        assert_eq!(
            p.hasse_derivative(&mono(&[1, 0])).unwrap(),
            poly(2, f5, &[(&[1, 1], 2)])
        );
        assert_eq!(p.hasse_derivative(&mono(&[0, 0])).unwrap(), p);
    }

    #[test]
    fn shift_oracle_agrees_on_examples() {
        let f5 = f(5);
        let p = poly(2, f5, &[(&[2, 1], 1)]);
        assert_eq!(
            p.hasse_shift_oracle(&mono(&[1, 0])).unwrap(),
            poly(2, f5, &[(&[1, 1], 2)])
        );
        // beta above deg f -> 0
        assert!(p.hasse_shift_oracle(&mono(&[4, 0])).unwrap().is_zero());
    }

    #[test]
    fn shift_oracle_randomized_equivalence() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            let q = [2u64, 3, 5][rng.below(3) as usize];
            let spec = f(q);
            let arity = 1 + rng.below(3) as usize;
            let p = random::poly(arity, 1 + rng.below(6) as u32, spec, &mut rng);
            let beta = random::monomial(arity, 3, &mut rng);
            assert_eq!(
                p.hasse_derivative(&beta).unwrap(),
                p.hasse_shift_oracle(&beta).unwrap()
            );
        }
    }

    #[test]
    fn multiplicity_examples() {
        let f5 = f(5);
        let p = poly(2, f5, &[(&[2, 1], 1)]);
        assert_eq!(p.multiplicity(&[0, 0]).unwrap(), Some(3));
        assert_eq!(p.multiplicity(&[1, 1]).unwrap(), Some(0));

        // (x-1)^2 at 1 -> 2
        let sq = poly(1, f5, &[(&[2], 1), (&[1], 3), (&[0], 1)]);
        assert_eq!(sq.multiplicity(&[1]).unwrap(), Some(2));

        assert_eq!(MultiPoly::zero(2, f5).multiplicity(&[0, 0]).unwrap(), None);
    }

    #[test]
    fn zero_census_examples() {
        let f3 = f(3);
        let xy = poly(2, f3, &[(&[1, 1], 1)]);
        let (plain, _) = xy.zero_census(&[0, 1, 2]).unwrap();
        assert_eq!(plain, 5);

        let f5 = f(5);
        let xsq = poly(1, f5, &[(&[2], 1)]);
        let (plain, weighted) = xsq.zero_census(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!((plain, weighted), (1, 2));

        let c = MultiPoly::constant(2, f5, 3);
        assert_eq!(c.zero_census(&[0, 1, 2, 3, 4]).unwrap(), (0, 0));
        assert_eq!(
            MultiPoly::zero(1, f5).zero_census(&[0]),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn monomials_of_degree_counts() {
        assert_eq!(monomials_of_degree(0, 3).len(), 1);
        assert_eq!(monomials_of_degree(2, 2).len(), 3);
        assert_eq!(monomials_of_degree(4, 3).len(), 15); // C(6,2)
    }
}
