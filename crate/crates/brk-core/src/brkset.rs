//! Construction and validation of (n,d)-BRK-type sets and Trainor BRK-type
//! sets, including the surface maps Gamma_rho and the JSON interchange format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::multipoly::{Monomial, MultiPoly, PolyError};
use crate::rng::SplitMix64;

/// Point-count ceiling for set enumeration.
pub const POINT_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BrkError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("need 1 <= d <= n-1, got n={0}, d={1}")]
    BadDimensions(usize, usize),
    #[error("need exactly n-d = {0} defining polynomials, got {1}")]
    WrongFamilySize(usize, usize),
    #[error("h_{0} is not nonzero homogeneous of degree {1}")]
    NotHomogeneous(usize, u32),
    #[error("degree must satisfy ell >= {1}, got {0}")]
    DegreeTooSmall(u32, u32),
    #[error("enumerating {0} points exceeds the cap of {POINT_CAP}")]
    PointCapExceeded(u64),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

/// Fixed data of an (n,d)-BRK-type family: the homogeneous degree-ell tops
/// h_1, ..., h_{n-d} in d variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceFamilySpec {
    pub spec: FieldSpec,
    pub n: usize,
    pub d: usize,
    pub ell: u32,
    pub h: Vec<MultiPoly>,
}

impl SurfaceFamilySpec {
    pub fn new(
        spec: FieldSpec,
        n: usize,
        d: usize,
        ell: u32,
        h: Vec<MultiPoly>,
    ) -> Result<Self, BrkError> {
        if n < 2 || d < 1 || d > n - 1 {
            return Err(BrkError::BadDimensions(n, d));
        }
        if ell < 1 {
            return Err(BrkError::DegreeTooSmall(ell, 1));
        }
        if h.len() != n - d {
            return Err(BrkError::WrongFamilySize(n - d, h.len()));
        }
        for (i, hi) in h.iter().enumerate() {
            if hi.arity() != d {
                return Err(BrkError::ArityMismatch(hi.arity(), d));
            }
            if !is_homogeneous_of_degree(hi, ell) {
                return Err(BrkError::NotHomogeneous(i, ell));
            }
        }
        Ok(SurfaceFamilySpec { spec, n, d, ell, h })
    }
}

/// One surface Lambda_rho: the dilation vector rho, the translate a_rho, and
/// the defining polynomials g_{rho,i} whose degree-ell tops equal the h_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInstance {
    pub rho: Vec<u32>,
    pub a: Vec<u32>,
    pub g: Vec<MultiPoly>,
}

/// Gamma_rho(t) = a_rho + (t, rho_1 g_1(t), ..., rho_{n-d} g_{n-d}(t)).
pub fn gamma_eval(
    inst: &SurfaceInstance,
    t: &[u32],
    spec: FieldSpec,
) -> Result<Vec<u32>, BrkError> {
    let n = inst.a.len();
    let d = n - inst.g.len();
    if t.len() != d {
        return Err(BrkError::ArityMismatch(t.len(), d));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..d {
        out.push(spec.add_raw(inst.a[i], t[i] % spec.q()));
    }
    for (i, gi) in inst.g.iter().enumerate() {
        let v = spec.mul_raw(inst.rho[i], gi.evaluate(t)?.value());
        out.push(spec.add_raw(inst.a[d + i], v));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// a_rho = 0 and g_{rho,i} = h_i for every rho; consumes no randomness.
    Canonical,
    /// Uniform a_rho; g_{rho,i} = h_i plus a uniform polynomial of degree
    /// <= ell - 1, all driven by the seeded generator.
    Random,
}

/// An (n,d)-BRK-type set: the family, one instance per rho in F_q^{n-d}, the
/// deduplicated point set, and a provenance witness (rho, t) per point.
#[derive(Debug, Clone)]
pub struct BrkSet {
    pub family: SurfaceFamilySpec,
    pub instances: Vec<SurfaceInstance>,
    pub points: Vec<Vec<u32>>,
    pub provenance: BTreeMap<Vec<u32>, (Vec<u32>, Vec<u32>)>,
}

/// Every tuple in F_q^len, lexicographically ascending.
pub fn all_tuples(spec: FieldSpec, len: usize) -> Vec<Vec<u32>> {
    let q = spec.q() as u64;
    let total = q.checked_pow(len as u32).expect("tuple space overflow");
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u32; len];
    loop {
        out.push(cur.clone());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if (cur[pos] as u64) < q {
                break;
            }
            cur[pos] = 0;
            if pos == 0 {
                return out;
            }
        }
    }
}

fn check_cap(spec: FieldSpec, n: usize) -> Result<(), BrkError> {
    let total = (spec.q() as u64)
        .checked_pow(n as u32)
        .unwrap_or(u64::MAX);
    if total > POINT_CAP {
        return Err(BrkError::PointCapExceeded(total));
    }
    Ok(())
}

pub fn build_brk_set(
    family: &SurfaceFamilySpec,
    strategy: Strategy,
    seed: u64,
) -> Result<BrkSet, BrkError> {
    check_cap(family.spec, family.n)?;
    let spec = family.spec;
    let mut rng = SplitMix64::new(seed);
    let mut instances = Vec::new();
    let mut provenance: BTreeMap<Vec<u32>, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
    let ts = all_tuples(spec, family.d);
    for rho in all_tuples(spec, family.n - family.d) {
        let inst = match strategy {
            Strategy::Canonical => SurfaceInstance {
                rho: rho.clone(),
                a: vec![0; family.n],
                g: family.h.clone(),
            },
            Strategy::Random => {
                let a: Vec<u32> = (0..family.n)
                    .map(|_| rng.below(spec.q() as u64) as u32)
                    .collect();
                let g = family
                    .h
                    .iter()
                    .map(|hi| {
                        let low = if family.ell == 0 {
                            MultiPoly::zero(family.d, spec)
                        } else {
                            crate::multipoly::random::poly(
                                family.d,
                                family.ell - 1,
                                spec,
                                &mut rng,
                            )
                        };
                        hi.add(&low)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SurfaceInstance {
                    rho: rho.clone(),
                    a,
                    g,
                }
            }
        };
        for t in &ts {
            let p = gamma_eval(&inst, t, spec)?;
            provenance
                .entry(p)
                .or_insert_with(|| (rho.clone(), t.clone()));
        }
        instances.push(inst);
    }
    let points: Vec<Vec<u32>> = provenance.keys().cloned().collect();
    Ok(BrkSet {
        family: family.clone(),
        instances,
        points,
        provenance,
    })
}

/// A Trainor BRK-type set: one surface per scalar rho, with rho multiplying
/// the whole tuple (lambda, g_rho(lambda)). This is deliberately distinct
/// from the (n,d) construction, where the parametrizing coordinates are not
/// dilated.
#[derive(Debug, Clone)]
pub struct TrainorSet {
    pub spec: FieldSpec,
    pub n: usize,
    pub ell: u32,
    pub g: MultiPoly,
    pub instances: Vec<TrainorInstance>,
    pub points: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainorInstance {
    pub rho: u32,
    pub a: Vec<u32>,
    pub g_rho: MultiPoly,
}

pub fn build_trainor_set(
    spec: FieldSpec,
    g: &MultiPoly,
    strategy: Strategy,
    seed: u64,
) -> Result<TrainorSet, BrkError> {
    let n = g.arity() + 1;
    let ell = g.degree().unwrap_or(0);
    if ell < 2 {
        return Err(BrkError::DegreeTooSmall(ell, 2));
    }
    check_cap(spec, n)?;
    let mut rng = SplitMix64::new(seed);
    let mut instances = Vec::new();
    let mut points: Vec<Vec<u32>> = Vec::new();
    let lambdas = all_tuples(spec, n - 1);
    let top = top_part(g);
    for rho in 0..spec.q() {
        let inst = match strategy {
            Strategy::Canonical => TrainorInstance {
                rho,
                a: vec![0; n],
                g_rho: g.clone(),
            },
            Strategy::Random => {
                let a: Vec<u32> = (0..n).map(|_| rng.below(spec.q() as u64) as u32).collect();
                let low = crate::multipoly::random::poly(n - 1, ell - 1, spec, &mut rng);
                TrainorInstance {
                    rho,
                    a,
                    g_rho: top.add(&low)?,
                }
            }
        };
        for lambda in &lambdas {
            // a + rho * (lambda, g_rho(lambda))
            let mut p = Vec::with_capacity(n);
            for i in 0..n - 1 {
                p.push(spec.add_raw(inst.a[i], spec.mul_raw(rho, lambda[i])));
            }
            let gv = inst.g_rho.evaluate(lambda)?.value();
            p.push(spec.add_raw(inst.a[n - 1], spec.mul_raw(rho, gv)));
            points.push(p);
        }
        instances.push(inst);
    }
    points.sort();
    points.dedup();
    Ok(TrainorSet {
        spec,
        n,
        ell,
        g: g.clone(),
        instances,
        points,
    })
}

/// The highest-degree homogeneous part of a nonzero polynomial.
pub fn top_part(p: &MultiPoly) -> MultiPoly {
    let Some(deg) = p.degree() else {
        return p.clone();
    };
    MultiPoly::from_terms(
        p.arity(),
        p.spec(),
        p.terms_desc()
            .filter(|(m, _)| m.total_degree() == deg)
            .map(|(m, c)| (m.clone(), c.value())),
    )
    .unwrap()
}

pub fn is_homogeneous_of_degree(p: &MultiPoly, deg: u32) -> bool {
    !p.is_zero()
        && p.terms_desc().all(|(m, _)| m.total_degree() == deg)
}

/// Outcome of `validate_brk_set`: the first violated clause with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum ValidationFailure {
    /// h_i is not nonzero homogeneous of degree ell.
    FamilyPoly { index: usize },
    /// instances do not cover every rho in F_q^{n-d} exactly once
    RhoCoverage { rho: Vec<u32> },
    /// g_{rho,i} does not have top part h_i
    TopPart { rho: Vec<u32>, index: usize },
    /// Gamma_rho(t) is not a member of the point set
    MissingPoint {
        rho: Vec<u32>,
        t: Vec<u32>,
        point: Vec<u32>,
    },
}

pub fn validate_brk_set(
    points: &[Vec<u32>],
    family: &SurfaceFamilySpec,
    instances: &[SurfaceInstance],
) -> Result<Option<ValidationFailure>, BrkError> {
    let spec = family.spec;
    for (i, hi) in family.h.iter().enumerate() {
        if !is_homogeneous_of_degree(hi, family.ell) {
            return Ok(Some(ValidationFailure::FamilyPoly { index: i }));
        }
    }
    let mut seen: BTreeMap<&[u32], usize> = BTreeMap::new();
    for inst in instances {
        *seen.entry(&inst.rho).or_insert(0) += 1;
    }
    for rho in all_tuples(spec, family.n - family.d) {
        if seen.get(rho.as_slice()).copied().unwrap_or(0) != 1 {
            return Ok(Some(ValidationFailure::RhoCoverage { rho }));
        }
    }
    let member: std::collections::BTreeSet<&[u32]> =
        points.iter().map(|p| p.as_slice()).collect();
    let ts = all_tuples(spec, family.d);
    for inst in instances {
        for (i, gi) in inst.g.iter().enumerate() {
            let ok = gi.degree() == Some(family.ell) && top_part(gi) == family.h[i];
            if !ok {
                return Ok(Some(ValidationFailure::TopPart {
                    rho: inst.rho.clone(),
                    index: i,
                }));
            }
        }
        for t in &ts {
            let p = gamma_eval(inst, t, spec)?;
            if !member.contains(p.as_slice()) {
                return Ok(Some(ValidationFailure::MissingPoint {
                    rho: inst.rho.clone(),
                    t: t.clone(),
                    point: p,
                }));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// JSON interchange format
// ---------------------------------------------------------------------------

/// One polynomial term on the wire; polynomials are lists of these, sorted
/// grlex-descending.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyRecord {
    pub exponents: Vec<u32>,
    pub coeff: u32,
}

pub fn poly_to_records(p: &MultiPoly) -> Vec<PolyRecord> {
    p.terms_desc()
        .map(|(m, c)| PolyRecord {
            exponents: m.exps().to_vec(),
            coeff: c.value(),
        })
        .collect()
}

pub fn records_to_poly(
    records: &[PolyRecord],
    arity: usize,
    spec: FieldSpec,
) -> Result<MultiPoly, PolyError> {
    MultiPoly::from_terms(
        arity,
        spec,
        records
            .iter()
            .map(|r| Ok((Monomial::new(r.exponents.clone())?, r.coeff)))
            .collect::<Result<Vec<_>, PolyError>>()?,
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFileHeader {
    pub q: u32,
    pub n: usize,
    pub d: usize,
    pub ell: u32,
    #[serde(default = "default_variant")]
    pub variant: String,
}

fn default_variant() -> String {
    "brk".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFileFamily {
    pub h: Vec<Vec<PolyRecord>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFileInstance {
    pub rho: Vec<u32>,
    pub a: Vec<u32>,
    pub g: Vec<Vec<PolyRecord>>,
}

/// The interchange file for all CLI verbs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFile {
    pub header: SetFileHeader,
    pub family: SetFileFamily,
    pub instances: Vec<SetFileInstance>,
    pub points: Vec<Vec<u32>>,
}

impl SetFile {
    pub fn from_brk(set: &BrkSet) -> SetFile {
        SetFile {
            header: SetFileHeader {
                q: set.family.spec.q(),
                n: set.family.n,
                d: set.family.d,
                ell: set.family.ell,
                variant: "brk".into(),
            },
            family: SetFileFamily {
                h: set.family.h.iter().map(poly_to_records).collect(),
            },
            instances: set
                .instances
                .iter()
                .map(|inst| SetFileInstance {
                    rho: inst.rho.clone(),
                    a: inst.a.clone(),
                    g: inst.g.iter().map(poly_to_records).collect(),
                })
                .collect(),
            points: set.points.clone(),
        }
    }

    pub fn from_trainor(set: &TrainorSet) -> SetFile {
        SetFile {
            header: SetFileHeader {
                q: set.spec.q(),
                n: set.n,
                d: set.n - 1,
                ell: set.ell,
                variant: "trainor".into(),
            },
            family: SetFileFamily {
                h: vec![poly_to_records(&top_part(&set.g))],
            },
            instances: set
                .instances
                .iter()
                .map(|inst| SetFileInstance {
                    rho: vec![inst.rho],
                    a: inst.a.clone(),
                    g: vec![poly_to_records(&inst.g_rho)],
                })
                .collect(),
            points: set.points.clone(),
        }
    }

    pub fn to_brk(&self) -> Result<BrkSet, BrkError> {
        let spec = FieldSpec::new(self.header.q as u64)?;
        let h = self
            .family
            .h
            .iter()
            .map(|r| records_to_poly(r, self.header.d, spec))
            .collect::<Result<Vec<_>, _>>()?;
        let family = SurfaceFamilySpec::new(spec, self.header.n, self.header.d, self.header.ell, h)?;
        let instances = self
            .instances
            .iter()
            .map(|inst| {
                Ok(SurfaceInstance {
                    rho: inst.rho.clone(),
                    a: inst.a.clone(),
                    g: inst
                        .g
                        .iter()
                        .map(|r| records_to_poly(r, self.header.d, spec))
                        .collect::<Result<Vec<_>, PolyError>>()?,
                })
            })
            .collect::<Result<Vec<_>, BrkError>>()?;
        let mut provenance = BTreeMap::new();
        for inst in &instances {
            for t in all_tuples(spec, family.d) {
                let p = gamma_eval(inst, &t, spec)?;
                provenance
                    .entry(p)
                    .or_insert_with(|| (inst.rho.clone(), t.clone()));
            }
        }
        Ok(BrkSet {
            family,
            instances,
            points: self.points.clone(),
            provenance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn t_squared(spec: FieldSpec) -> MultiPoly {
        MultiPoly::from_terms(1, spec, [(Monomial::new(vec![2]).unwrap(), 1)]).unwrap()
    }

    fn family_q3_tsq() -> SurfaceFamilySpec {
        let f3 = f(3);
        SurfaceFamilySpec::new(f3, 2, 1, 2, vec![t_squared(f3)]).unwrap()
    }

    #[test]
    fn gamma_eval_examples() {
        let f3 = f(3);
        let inst = SurfaceInstance {
            rho: vec![2],
            a: vec![0, 1],
            g: vec![t_squared(f3)],
        };
        assert_eq!(gamma_eval(&inst, &[1], f3).unwrap(), vec![1, 0]);

        // rho = 0 collapses the dilated coordinates
        let inst0 = SurfaceInstance {
            rho: vec![0],
            a: vec![1, 2],
            g: vec![t_squared(f3)],
        };
        assert_eq!(gamma_eval(&inst0, &[2], f3).unwrap(), vec![0, 2]);
        // t = 0 with zero constant term gives a
        assert_eq!(gamma_eval(&inst, &[0], f3).unwrap(), vec![0, 1]);
    }

    #[test]
    fn canonical_build_q3_has_seven_points() {
        let set = build_brk_set(&family_q3_tsq(), Strategy::Canonical, 0).unwrap();
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![1, 1],
            vec![1, 2],
            vec![2, 0],
            vec![2, 1],
            vec![2, 2],
        ];
        assert_eq!(set.points, expected);
        assert_eq!(set.instances.len(), 3);
    }

    #[test]
    fn random_build_is_seed_deterministic_and_valid() {
        let fam = family_q3_tsq();
        let a = build_brk_set(&fam, Strategy::Random, 42).unwrap();
        let b = build_brk_set(&fam, Strategy::Random, 42).unwrap();
        assert_eq!(a.points, b.points);
        assert!(a.points.len() <= 9);
        assert_eq!(
            validate_brk_set(&a.points, &fam, &a.instances).unwrap(),
            None
        );
    }

    #[test]
    fn canonical_points_invariant_under_seed() {
        let fam = family_q3_tsq();
        let a = build_brk_set(&fam, Strategy::Canonical, 1).unwrap();
        let b = build_brk_set(&fam, Strategy::Canonical, 2).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn provenance_covers_every_point() {
        let fam = family_q3_tsq();
        let set = build_brk_set(&fam, Strategy::Random, 7).unwrap();
        for p in &set.points {
            let (rho, t) = set.provenance.get(p).expect("provenance entry");
            let inst = set
                .instances
                .iter()
                .find(|i| &i.rho == rho)
                .expect("instance");
            assert_eq!(&gamma_eval(inst, t, fam.spec).unwrap(), p);
        }
    }

    #[test]
    fn trainor_build_q3_has_five_points() {
        let f3 = f(3);
        let g = t_squared(f3);
        let set = build_trainor_set(f3, &g, Strategy::Canonical, 0).unwrap();
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 1],
            vec![1, 2],
            vec![2, 1],
            vec![2, 2],
        ];
        assert_eq!(set.points, expected);
    }

    #[test]
    fn trainor_rho_zero_is_single_point_and_seeded() {
        let f5 = f(5);
        let g = t_squared(f5);
        let set = build_trainor_set(f5, &g, Strategy::Random, 3).unwrap();
        let inst0 = &set.instances[0];
        assert_eq!(inst0.rho, 0);
        // rho = 0 surface collapses to {a}
        let lambdas = all_tuples(f5, 1);
        let pts: std::collections::BTreeSet<Vec<u32>> = lambdas
            .iter()
            .map(|l| {
                vec![
                    f5.add_raw(inst0.a[0], f5.mul_raw(0, l[0])),
                    f5.add_raw(inst0.a[1], f5.mul_raw(0, inst0.g_rho.evaluate(l).unwrap().value())),
                ]
            })
            .collect();
        assert_eq!(pts.len(), 1);

        let set2 = build_trainor_set(f5, &g, Strategy::Random, 3).unwrap();
        assert_eq!(set.points, set2.points);
    }

    #[test]
    fn validate_flags_each_clause() {
        let fam = family_q3_tsq();
        let set = build_brk_set(&fam, Strategy::Canonical, 0).unwrap();
        assert_eq!(
            validate_brk_set(&set.points, &fam, &set.instances).unwrap(),
            None
        );

        // remove a point: containment fails and the witness names it
        let mut fewer = set.points.clone();
        let removed = fewer.remove(3);
        match validate_brk_set(&fewer, &fam, &set.instances).unwrap() {
            Some(ValidationFailure::MissingPoint { point, .. }) => assert_eq!(point, removed),
            other => panic!("expected MissingPoint, got {other:?}"),
        }

        // corrupt a g: top part no longer matches h
        let f3 = f(3);
        let mut bad = set.instances.clone();
        bad[1].g[0] = MultiPoly::from_terms(1, f3, [(Monomial::new(vec![2]).unwrap(), 2)]).unwrap();
        match validate_brk_set(&set.points, &fam, &bad).unwrap() {
            Some(ValidationFailure::TopPart { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected TopPart, got {other:?}"),
        }

        // drop an instance: rho coverage fails
        let partial = &set.instances[..2];
        assert!(matches!(
            validate_brk_set(&set.points, &fam, partial).unwrap(),
            Some(ValidationFailure::RhoCoverage { .. })
        ));
    }

    #[test]
    fn set_file_round_trip() {
        let fam = family_q3_tsq();
        let set = build_brk_set(&fam, Strategy::Random, 9).unwrap();
        let file = SetFile::from_brk(&set);
        let json = serde_json::to_string(&file).unwrap();
        let parsed: SetFile = serde_json::from_str(&json).unwrap();
        let back = parsed.to_brk().unwrap();
        assert_eq!(back.points, set.points);
        assert_eq!(back.instances, set.instances);
        assert_eq!(back.family, set.family);
    }
}
