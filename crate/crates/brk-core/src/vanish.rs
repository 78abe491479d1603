//! Interpolation of nonzero polynomials vanishing on point sets, with and
//! without multiplicity: treat the coefficients over a monomial basis as
//! unknowns and take a canonical nullspace element of the constraint matrix.

use thiserror::Error;

use crate::field::FieldSpec;
use crate::linsolve::{LinError, MatrixGF};
use crate::multipoly::{monomials_of_degree, Monomial, MultiPoly, PolyError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VanishError {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("point {0} has arity {1}, expected {2}")]
    PointArity(usize, usize, usize),
    #[error("witness failed re-verification: {0}")]
    WitnessCheck(String),
}

/// All monomials of arity `n` with total degree <= `max_deg`, grlex-ascending.
/// The count is C(max_deg + n, n).
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub arity: usize,
    pub max_deg: u32,
    pub monomials: Vec<Monomial>,
}

pub fn monomials_up_to(max_deg: u32, arity: usize) -> MonomialBasis {
    let mut monomials = Vec::new();
    for d in 0..=max_deg {
        let mut shell = monomials_of_degree(d, arity);
        shell.sort();
        monomials.extend(shell);
    }
    MonomialBasis {
        arity,
        max_deg,
        monomials,
    }
}

fn check_points(points: &[Vec<u32>], arity: usize) -> Result<(), VanishError> {
    for (i, p) in points.iter().enumerate() {
        if p.len() != arity {
            return Err(VanishError::PointArity(i, p.len(), arity));
        }
    }
    Ok(())
}

// x^alpha at a point, with 0^0 = 1.
fn eval_monomial(spec: FieldSpec, point: &[u32], exps: &[u32]) -> u32 {
    let mut acc = 1u32;
    for (&x, &e) in point.iter().zip(exps) {
        acc = spec.mul_raw(acc, spec.pow_raw(x % spec.q(), e as u64));
    }
    acc
}

fn witness_from_nullspace(
    spec: FieldSpec,
    arity: usize,
    basis: &MonomialBasis,
    matrix: &MatrixGF,
) -> Result<Option<MultiPoly>, VanishError> {
    let ns = matrix.nullspace_basis();
    // canonical choice: the basis vector whose free column is smallest
    let Some((_, v)) = ns.basis.first() else {
        return Ok(None);
    };
    let poly = MultiPoly::from_terms(
        arity,
        spec,
        basis
            .monomials
            .iter()
            .zip(v)
            .filter(|(_, &c)| c != 0)
            .map(|(m, &c)| (m.clone(), c)),
    )?;
    Ok(Some(poly))
}

/// A nonzero polynomial of degree <= `max_deg` vanishing at every point of
/// `points`, or None if no such polynomial exists. Existence is guaranteed
/// whenever |points| < C(max_deg + n, n). The returned witness is re-checked
/// by direct evaluation before being handed back.
pub fn find_vanishing(
    points: &[Vec<u32>],
    max_deg: u32,
    arity: usize,
    spec: FieldSpec,
) -> Result<Option<MultiPoly>, VanishError> {
    check_points(points, arity)?;
    let basis = monomials_up_to(max_deg, arity);
    let rows: Vec<Vec<u32>> = points
        .iter()
        .map(|p| {
            basis
                .monomials
                .iter()
                .map(|m| eval_monomial(spec, p, m.exps()))
                .collect()
        })
        .collect();
    let matrix = MatrixGF::from_rows(spec, basis.monomials.len(), &rows)?;
    let Some(f) = witness_from_nullspace(spec, arity, &basis, &matrix)? else {
        return Ok(None);
    };
    if f.is_zero() {
        return Err(VanishError::WitnessCheck("witness is zero".into()));
    }
    if f.degree().unwrap() > max_deg {
        return Err(VanishError::WitnessCheck("witness degree too high".into()));
    }
    for p in points {
        if !f.evaluate(p)?.is_zero() {
            return Err(VanishError::WitnessCheck(format!(
                "witness does not vanish at {p:?}"
            )));
        }
    }
    Ok(Some(f))
}

/// A nonzero polynomial of degree <= `max_deg` vanishing at every point with
/// multiplicity >= `mult`, or None. One constraint row per (point, beta) pair
/// with |beta| < mult, encoding the beta-th Hasse derivative at the point:
/// sum_alpha c_alpha * C(alpha, beta) * a^(alpha - beta) = 0, with 0^0 = 1.
/// Existence is guaranteed whenever C(mult + n - 1, n) * |points| <
/// C(max_deg + n, n). Witnesses are re-verified through the multiplicity
/// pipeline, never trusted from the matrix path.
pub fn find_vanishing_mult(
    points: &[Vec<u32>],
    max_deg: u32,
    mult: u32,
    arity: usize,
    spec: FieldSpec,
) -> Result<Option<MultiPoly>, VanishError> {
    assert!(mult >= 1);
    check_points(points, arity)?;
    let basis = monomials_up_to(max_deg, arity);
    let mut betas = Vec::new();
    for d in 0..mult {
        let mut shell = monomials_of_degree(d, arity);
        shell.sort();
        betas.extend(shell);
    }
    let mut rows = Vec::with_capacity(points.len() * betas.len());
    for p in points {
        for beta in &betas {
            let row: Vec<u32> = basis
                .monomials
                .iter()
                .map(|alpha| {
                    let Some(diff) = alpha.checked_sub(beta) else {
                        return 0;
                    };
                    let b = alpha
                        .exps()
                        .iter()
                        .zip(beta.exps())
                        .fold(1u32, |acc, (&a, &bb)| {
                            spec.mul_raw(acc, spec.binom_raw(a as u64, bb as u64))
                        });
                    spec.mul_raw(b, eval_monomial(spec, p, diff.exps()))
                })
                .collect();
            rows.push(row);
        }
    }
    let matrix = MatrixGF::from_rows(spec, basis.monomials.len(), &rows)?;
    let Some(f) = witness_from_nullspace(spec, arity, &basis, &matrix)? else {
        return Ok(None);
    };
    if f.is_zero() || f.degree().unwrap() > max_deg {
        return Err(VanishError::WitnessCheck("degenerate witness".into()));
    }
    for p in points {
        let m = f.multiplicity(p)?.unwrap_or(u32::MAX);
        if m < mult {
            return Err(VanishError::WitnessCheck(format!(
                "multiplicity {m} < {mult} at {p:?}"
            )));
        }
    }
    Ok(Some(f))
}
