//! Bound formulas, the leading-coefficient pipeline in the dilation variable,
//! verification harnesses for both lower-bound theorems, and the executable
//! lemma suite.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::brkset::{
    all_tuples, gamma_eval, validate_brk_set, BrkError, BrkSet, SurfaceFamilySpec,
    SurfaceInstance, ValidationFailure,
};
use crate::field::{multi_binom, FieldSpec};
use crate::multipoly::{monomials_of_degree, random, Monomial, MultiPoly, PolyError};
use crate::rng::SplitMix64;
use crate::vanish::{find_vanishing, find_vanishing_mult, VanishError};

pub type Rational = Ratio<i128>;

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error("theorem hypothesis requires ell >= 2, got {0}")]
    EllTooSmall(u32),
    #[error("k = {0} must be a positive multiple of q = {1}")]
    BadK(u64, u32),
    #[error("set fails validation: {0:?}")]
    InvalidSet(ValidationFailure),
    #[error("leading coefficient of h_{0} is zero")]
    ZeroLeadingCoefficient(usize),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Brk(#[from] BrkError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Vanish(#[from] VanishError),
}

/// Exact C(a, b) over the integers.
pub fn binomial(a: u64, b: u64) -> i128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc = 1i128;
    for i in 0..b {
        acc = acc * (a - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Polynomial-method bound: C(floor((q-1)/ell) + n, n). Requires ell >= 2.
pub fn pm_bound(q: u32, n: usize, ell: u32) -> Result<i128, TheoremError> {
    if ell < 2 {
        return Err(TheoremError::EllTooSmall(ell));
    }
    let floor = (q as u64 - 1) / ell as u64;
    Ok(binomial(floor + n as u64, n as u64))
}

/// Method-of-multiplicities bound (q-1)^n / (ell + 1 - 2 ell / q)^n, held
/// exactly as (q-1)^n q^n / (q(ell+1) - 2 ell)^n.
pub fn mm_bound(q: u32, n: usize, ell: u32) -> Rational {
    let num = ((q as i128 - 1) * q as i128).pow(n as u32);
    let den = (q as i128 * (ell as i128 + 1) - 2 * ell as i128).pow(n as u32);
    Ratio::new(num, den)
}

/// Per-k bound of the mm proof: D = k(q-1) - 1, M = (ell+1)k - 2 ell k / q,
/// and the exact ratio C(D+n, n) / C(M+n-1, n). Requires q | k, k > 0.
pub fn mm_claim_bound(
    q: u32,
    n: usize,
    ell: u32,
    k: u64,
) -> Result<(u64, u64, Rational), TheoremError> {
    if k == 0 || k % q as u64 != 0 {
        return Err(TheoremError::BadK(k, q));
    }
    let d = k * (q as u64 - 1) - 1;
    let m = (ell as u64 + 1) * k - 2 * ell as u64 * k / q as u64;
    let ratio = Ratio::new(
        binomial(d + n as u64, n as u64),
        binomial(m + n as u64 - 1, n as u64),
    );
    Ok((d, m, ratio))
}

/// The grlex-leading exponents alpha^i of the family's h_i, plus their
/// leading coefficients c_i.
fn family_leads(family: &SurfaceFamilySpec) -> Result<(Vec<Monomial>, Vec<u32>), TheoremError> {
    let mut alphas = Vec::with_capacity(family.h.len());
    let mut coeffs = Vec::with_capacity(family.h.len());
    for (i, hi) in family.h.iter().enumerate() {
        let (m, c) = hi.leading_monomial()?;
        if c.is_zero() {
            return Err(TheoremError::ZeroLeadingCoefficient(i));
        }
        alphas.push(m);
        coeffs.push(c.value());
    }
    Ok((alphas, coeffs))
}

/// The exponent of (t, t^alpha^1, ..., t^alpha^{n-d})^beta as a monomial in
/// t: the first d coordinates of beta plus sum_i beta_{d+i} * alpha^i.
pub fn substituted_key(beta: &Monomial, family: &SurfaceFamilySpec) -> Result<Monomial, TheoremError> {
    let (alphas, _) = family_leads(family)?;
    Ok(key_from_leads(beta, family.d, &alphas))
}

fn key_from_leads(beta: &Monomial, d: usize, alphas: &[Monomial]) -> Monomial {
    let mut exps: Vec<u32> = beta.exps()[..d].to_vec();
    for (i, alpha) in alphas.iter().enumerate() {
        let mult = beta.exps()[d + i];
        for (e, &a) in exps.iter_mut().zip(alpha.exps()) {
            *e += mult * a;
        }
    }
    Monomial::new(exps).unwrap()
}

/// The exponents of f achieving the grlex-maximal substituted key, together
/// with that key and the leading coefficients of the h_i. Ties are all
/// retained; every other exponent of f maps strictly below the key.
#[derive(Debug, Clone)]
pub struct LeadingSelection {
    pub key: Monomial,
    pub betas: Vec<Monomial>,
    pub lead_coeffs: Vec<u32>,
}

pub fn leading_selection(
    f: &MultiPoly,
    family: &SurfaceFamilySpec,
) -> Result<LeadingSelection, TheoremError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let (alphas, lead_coeffs) = family_leads(family)?;
    let mut best: Option<Monomial> = None;
    let mut betas: Vec<Monomial> = Vec::new();
    for (beta, _) in f.terms_desc() {
        let key = key_from_leads(beta, family.d, &alphas);
        match &best {
            Some(b) if key < *b => {}
            Some(b) if key == *b => betas.push(beta.clone()),
            _ => {
                best = Some(key);
                betas = vec![beta.clone()];
            }
        }
    }
    Ok(LeadingSelection {
        key: best.unwrap(),
        betas,
        lead_coeffs,
    })
}

/// The leading-coefficient polynomial in the dilation variable rho:
/// P_gamma(rho) = sum over selected beta^j with beta^j - gamma >= 0 of
/// b_{beta^j} C(beta^j, gamma) c^{(beta^j)'-gamma'} rho^{(beta^j)'-gamma'},
/// where primes take the last n-d coordinates. gamma = None is the plain
/// gamma = 0 polynomial.
pub fn leading_coefficient_poly(
    f: &MultiPoly,
    family: &SurfaceFamilySpec,
    gamma: Option<&Monomial>,
) -> Result<MultiPoly, TheoremError> {
    let spec = family.spec;
    let n = family.n;
    let d = family.d;
    let zero = Monomial::zero(n);
    let gamma = gamma.unwrap_or(&zero);
    if gamma.arity() != n {
        return Err(PolyError::ArityMismatch(gamma.arity(), n).into());
    }
    let selection = leading_selection(f, family)?;
    let mut out = MultiPoly::zero(n - d, spec);
    for beta in &selection.betas {
        let Some(diff) = beta.checked_sub(gamma) else {
            continue;
        };
        let b = f.coeff(beta).value();
        let binom = multi_binom(&beta.exps_u64(), &gamma.exps_u64(), spec)?.value();
        let mut coeff = spec.mul_raw(b, binom);
        let prime = Monomial::new(diff.exps()[d..].to_vec())?;
        for (i, &e) in prime.exps().iter().enumerate() {
            coeff = spec.mul_raw(coeff, spec.pow_raw(selection.lead_coeffs[i], e as u64));
        }
        let term = MultiPoly::from_terms(n - d, spec, [(prime, coeff)])?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// f_rho(t) := f(Gamma_rho(t)), a polynomial in the d surface parameters.
pub fn restrict_to_surface(
    f: &MultiPoly,
    inst: &SurfaceInstance,
    family: &SurfaceFamilySpec,
) -> Result<MultiPoly, TheoremError> {
    let spec = family.spec;
    let (n, d) = (family.n, family.d);
    if f.arity() != n {
        return Err(PolyError::ArityMismatch(f.arity(), n).into());
    }
    let mut subs = Vec::with_capacity(n);
    for i in 0..d {
        let coord = MultiPoly::variable(d, spec, i)
            .add(&MultiPoly::constant(d, spec, inst.a[i] as u64))?;
        subs.push(coord);
    }
    for i in 0..n - d {
        let dilated = inst.g[i]
            .scale(inst.rho[i])
            .add(&MultiPoly::constant(d, spec, inst.a[d + i] as u64))?;
        subs.push(dilated);
    }
    let out = f.compose(&subs)?;
    if let (Some(od), Some(fd)) = (out.degree(), f.degree()) {
        debug_assert!(od <= family.ell * fd);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundParams {
    pub q: u32,
    pub n: usize,
    pub d: usize,
    pub ell: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundValues {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pm: Option<i128>,
    pub mm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mm_claim: Option<String>,
}

/// Exact bound values and per-check verdicts for one set.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub params: BoundParams,
    pub bounds: BoundValues,
    pub set_size: usize,
    pub checks: Vec<CheckResult>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict)
    }
}

pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Theorem verification via the polynomial method: |S| >= pm_bound, and the
/// proof's engine holds directly — no nonzero polynomial of degree
/// floor((q-1)/ell) vanishes on S.
pub fn verify_theorem_pm(set: &BrkSet) -> Result<BoundReport, TheoremError> {
    let family = &set.family;
    let (q, n, ell) = (family.spec.q(), family.n, family.ell);
    if ell < 2 {
        return Err(TheoremError::EllTooSmall(ell));
    }
    if let Some(failure) = validate_brk_set(&set.points, family, &set.instances)? {
        return Err(TheoremError::InvalidSet(failure));
    }
    let bound = pm_bound(q, n, ell)?;
    let mut checks = vec![CheckResult {
        name: "size_pm".into(),
        verdict: set.points.len() as i128 >= bound,
        witness: Some(format!("|S| = {} vs bound {}", set.points.len(), bound)),
    }];
    let max_deg = ((q as u64 - 1) / ell as u64) as u32;
    let witness = find_vanishing(&set.points, max_deg, n, family.spec)?;
    checks.push(CheckResult {
        name: "no_low_degree_vanisher".into(),
        verdict: witness.is_none(),
        witness: witness
            .as_ref()
            .map(|w| format!("unexpected vanisher with {} terms", w.num_terms())),
    });
    Ok(BoundReport {
        params: BoundParams {
            q,
            n,
            d: family.d,
            ell,
            k: None,
        },
        bounds: BoundValues {
            pm: Some(bound),
            mm: rational_str(&mm_bound(q, n, ell)),
            mm_claim: None,
        },
        set_size: set.points.len(),
        checks,
    })
}

/// Which step of the polynomial-method contradiction fails when a low-degree
/// vanisher exists for a non-BRK point set: either some restriction f_rho is
/// not the zero polynomial, or P(rho) is nonzero somewhere on
/// (F_q \ {0})^{n-d}.
#[derive(Debug, Clone, Serialize)]
pub struct PmDiagnostic {
    /// first rho with f_rho not identically zero, if any
    pub f_rho_nonzero_at: Option<Vec<u32>>,
    /// first rho in (F_q \ {0})^{n-d} where P(rho) evaluates nonzero, if any
    pub p_rho_nonzero_at: Option<Vec<u32>>,
}

pub fn pm_diagnose(
    witness: &MultiPoly,
    family: &SurfaceFamilySpec,
    instances: &[SurfaceInstance],
) -> Result<PmDiagnostic, TheoremError> {
    let spec = family.spec;
    let mut f_rho_nonzero_at = None;
    for inst in instances {
        if inst.rho.iter().any(|&r| r == 0) {
            continue;
        }
        let f_rho = restrict_to_surface(witness, inst, family)?;
        if !f_rho.is_zero() {
            f_rho_nonzero_at = Some(inst.rho.clone());
            break;
        }
    }
    let p = leading_coefficient_poly(witness, family, None)?;
    let mut p_rho_nonzero_at = None;
    for rho in all_tuples(spec, family.n - family.d) {
        if rho.iter().any(|&r| r == 0) {
            continue;
        }
        if !p.evaluate(&rho)?.is_zero() {
            p_rho_nonzero_at = Some(rho);
            break;
        }
    }
    Ok(PmDiagnostic {
        f_rho_nonzero_at,
        p_rho_nonzero_at,
    })
}

/// Theorem verification via the method of multiplicities, at one multiple k
/// of q: the mm-claim inequality C(M+n-1,n)|S| >= C(D+n,n) holds, and no
/// nonzero polynomial of degree <= D vanishes on S with multiplicity M.
pub fn verify_theorem_mm(set: &BrkSet, k: u64) -> Result<BoundReport, TheoremError> {
    let family = &set.family;
    let (q, n, ell) = (family.spec.q(), family.n, family.ell);
    if let Some(failure) = validate_brk_set(&set.points, family, &set.instances)? {
        return Err(TheoremError::InvalidSet(failure));
    }
    let (max_deg, mult, ratio) = mm_claim_bound(q, n, ell, k)?;
    let mut checks = vec![CheckResult {
        name: "size_mm_claim".into(),
        verdict: Ratio::from_integer(set.points.len() as i128) >= ratio,
        witness: Some(format!(
            "|S| = {} vs ratio {}",
            set.points.len(),
            rational_str(&ratio)
        )),
    }];
    let witness = find_vanishing_mult(
        &set.points,
        max_deg as u32,
        mult as u32,
        n,
        family.spec,
    )?;
    checks.push(CheckResult {
        name: "no_multiplicity_vanisher".into(),
        verdict: witness.is_none(),
        witness: witness
            .as_ref()
            .map(|w| format!("unexpected (D={max_deg}, M={mult}) vanisher with {} terms", w.num_terms())),
    });
    Ok(BoundReport {
        params: BoundParams {
            q,
            n,
            d: family.d,
            ell,
            k: Some(k),
        },
        bounds: BoundValues {
            pm: pm_bound(q, n, ell).ok(),
            mm: rational_str(&mm_bound(q, n, ell)),
            mm_claim: Some(rational_str(&ratio)),
        },
        set_size: set.points.len(),
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaResult {
    pub name: String,
    pub verdict: bool,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub results: Vec<LemmaResult>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.verdict)
    }
}

fn lemma(name: &str, trials: u64, witness: Option<String>) -> LemmaResult {
    LemmaResult {
        name: name.into(),
        verdict: witness.is_none(),
        trials,
        witness,
    }
}

const SUITE_PRIMES: [u64; 3] = [3, 5, 7];

/// Runs every randomized lemma property plus the two constructed scenarios.
/// Fully deterministic in (seed, trials).
pub fn lemma_suite(seed: u64, trials: u64) -> Result<LemmaReport, TheoremError> {
    let mut rng = SplitMix64::new(seed);
    let mut results = Vec::new();

    // mon-sum: beta < gamma implies alpha+beta < alpha+gamma
    let mut fail = None;
    let mut sub = rng.fork();
    for _ in 0..trials {
        let arity = 1 + sub.below(3) as usize;
        let alpha = random::monomial(arity, 5, &mut sub);
        let beta = random::monomial(arity, 5, &mut sub);
        let gamma = random::monomial(arity, 5, &mut sub);
        if beta < gamma && alpha.add(&beta).unwrap() >= alpha.add(&gamma).unwrap() {
            fail = Some(format!("{alpha:?} {beta:?} {gamma:?}"));
            break;
        }
    }
    results.push(lemma("mon-sum", trials, fail));

    // pol-expansion: LM(prod f_i) = prod LM(f_i)
    let mut fail = None;
    let mut sub = rng.fork();
    let poly_trials = trials.min(1000);
    for _ in 0..poly_trials {
        let spec = FieldSpec::new(SUITE_PRIMES[sub.below(3) as usize]).unwrap();
        let arity = 1 + sub.below(2) as usize;
        let count = 2 + sub.below(3) as usize;
        let fs: Vec<MultiPoly> = (0..count)
            .map(|_| random::nonzero_poly(arity, 1 + sub.below(3) as u32, spec, &mut sub))
            .collect();
        let mut prod = MultiPoly::constant(arity, spec, 1);
        let mut expected_m = Monomial::zero(arity);
        let mut expected_c = 1u32;
        for f in &fs {
            prod = prod.mul(f).unwrap();
            let (m, c) = f.leading_monomial().unwrap();
            expected_m = expected_m.add(&m).unwrap();
            expected_c = spec.mul_raw(expected_c, c.value());
        }
        let (m, c) = prod.leading_monomial().unwrap();
        if m != expected_m || c.value() != expected_c {
            fail = Some(format!("LM mismatch over F_{}", spec.q()));
            break;
        }
    }
    results.push(lemma("pol-expansion", poly_trials, fail));

    // pol-prod-ineq: LM(f) < LM(g) implies LM(fh) < LM(gh)
    let mut fail = None;
    let mut sub = rng.fork();
    for _ in 0..poly_trials {
        let spec = FieldSpec::new(SUITE_PRIMES[sub.below(3) as usize]).unwrap();
        let arity = 1 + sub.below(2) as usize;
        let f = random::nonzero_poly(arity, 1 + sub.below(3) as u32, spec, &mut sub);
        let g = random::nonzero_poly(arity, 1 + sub.below(3) as u32, spec, &mut sub);
        let h = random::nonzero_poly(arity, 1 + sub.below(3) as u32, spec, &mut sub);
        let (fm, _) = f.leading_monomial().unwrap();
        let (gm, _) = g.leading_monomial().unwrap();
        if fm < gm {
            let fh = f.mul(&h).unwrap().leading_monomial().unwrap().0;
            let gh = g.mul(&h).unwrap().leading_monomial().unwrap().0;
            if fh >= gh {
                fail = Some(format!("over F_{}", spec.q()));
                break;
            }
        }
    }
    results.push(lemma("pol-prod-ineq", poly_trials, fail));

    // monomial-derivative-dominance on substituted monomial keys
    let mut fail = None;
    let mut sub = rng.fork();
    for _ in 0..trials {
        let d = 1 + sub.below(2) as usize;
        let n = d + 1 + sub.below(2) as usize;
        let alphas: Vec<Monomial> = (0..n).map(|_| random::monomial(d, 4, &mut sub)).collect();
        let gamma = random::monomial(n, 2, &mut sub);
        let beta1 = gamma.add(&random::monomial(n, 3, &mut sub)).unwrap();
        let beta2 = gamma.add(&random::monomial(n, 3, &mut sub)).unwrap();
        // (x^alpha^1, ..., x^alpha^n)^beta has exponent sum_i beta_i alpha^i
        let key = |b: &Monomial| {
            let mut exps = vec![0u32; d];
            for (i, alpha) in alphas.iter().enumerate() {
                for (e, &a) in exps.iter_mut().zip(alpha.exps()) {
                    *e += b.exps()[i] * a;
                }
            }
            Monomial::new(exps).unwrap()
        };
        if key(&beta1) < key(&beta2)
            && key(&beta1.checked_sub(&gamma).unwrap())
                >= key(&beta2.checked_sub(&gamma).unwrap())
        {
            fail = Some(format!("{beta1:?} {beta2:?} {gamma:?}"));
            break;
        }
    }
    results.push(lemma("monomial-derivative-dominance", trials, fail));

    // sum-derivative: mult(f^(beta), a) >= mult(f, a) - |beta|
    let mut fail = None;
    let mut sub = rng.fork();
    let mult_trials = trials.min(1000);
    for _ in 0..mult_trials {
        let spec = FieldSpec::new(SUITE_PRIMES[sub.below(3) as usize]).unwrap();
        let arity = 1 + sub.below(2) as usize;
        let f = random::nonzero_poly(arity, 1 + sub.below(4) as u32, spec, &mut sub);
        let beta = random::monomial(arity, 2, &mut sub);
        let a = random::point(arity, spec, &mut sub);
        let base = f.multiplicity(&a)?.unwrap() as i64;
        let derived = f
            .hasse_derivative(&beta)?
            .multiplicity(&a)?
            .map(|m| m as i64)
            .unwrap_or(i64::MAX);
        if derived < base - beta.total_degree() as i64 {
            fail = Some(format!("mult {derived} < {base} - |{beta:?}|"));
            break;
        }
    }
    results.push(lemma("sum-derivative", mult_trials, fail));

    // mult-composition: mult(f o Q, a) >= mult(f, Q(a))
    let mut fail = None;
    let mut sub = rng.fork();
    for _ in 0..mult_trials {
        let spec = FieldSpec::new(SUITE_PRIMES[sub.below(3) as usize]).unwrap();
        let m = 1 + sub.below(2) as usize;
        let j = 1 + sub.below(2) as usize;
        let f = random::nonzero_poly(m, 1 + sub.below(3) as u32, spec, &mut sub);
        let qs: Vec<MultiPoly> = (0..m)
            .map(|_| random::poly(j, 1 + sub.below(2) as u32, spec, &mut sub))
            .collect();
        let a = random::point(j, spec, &mut sub);
        let qa: Vec<u32> = qs
            .iter()
            .map(|qi| qi.evaluate(&a).unwrap().value())
            .collect();
        let composed = f.compose(&qs)?;
        let lhs = composed
            .multiplicity(&a)?
            .map(|v| v as u64)
            .unwrap_or(u64::MAX);
        let rhs = f.multiplicity(&qa)?.unwrap() as u64;
        if lhs < rhs {
            fail = Some(format!("mult {lhs} < {rhs}"));
            break;
        }
    }
    results.push(lemma("mult-composition", mult_trials, fail));

    // SZ and extended-SZ via exhaustive zero counting; zero_census errors out
    // on any violation, so a clean pass is the property.
    let mut fail_sz = None;
    let mut sub = rng.fork();
    let census_trials = trials.min(300);
    for _ in 0..census_trials {
        let spec = FieldSpec::new(SUITE_PRIMES[sub.below(3) as usize]).unwrap();
        let arity = 1 + sub.below(2) as usize;
        let f = random::nonzero_poly(arity, 1 + sub.below(4) as u32, spec, &mut sub);
        let a_size = 1 + sub.below(spec.q() as u64) as usize;
        let a_set: Vec<u32> = (0..a_size as u32).collect();
        if let Err(e) = f.zero_census(&a_set) {
            fail_sz = Some(e.to_string());
            break;
        }
    }
    results.push(lemma("SZ", census_trials, fail_sz.clone()));
    results.push(lemma("extended-SZ", census_trials, fail_sz));

    // Hasse closed form vs the f(x+y) expansion oracle
    let mut fail = None;
    let mut sub = rng.fork();
    for _ in 0..mult_trials {
        let spec = FieldSpec::new([2u64, 3, 5][sub.below(3) as usize]).unwrap();
        let arity = 1 + sub.below(3) as usize;
        let f = random::poly(arity, 1 + sub.below(6) as u32, spec, &mut sub);
        let beta = random::monomial(arity, 3, &mut sub);
        if f.hasse_derivative(&beta)? != f.hasse_shift_oracle(&beta)? {
            fail = Some(format!("beta {beta:?} over F_{}", spec.q()));
            break;
        }
    }
    results.push(lemma("hasse-form-vs-shift-oracle", mult_trials, fail));

    results.push(mult_inputsubset_scenario()?);
    results.push(hd_reduction_falsification(rng.fork(), trials.min(200))?);

    Ok(LemmaReport { seed, results })
}

/// Constructed scenario for the input-subset multiplicity lemma, at
/// q=5, n=2, d=1, ell=2, k=1, M=3, D=7: both the existence inequality
/// C(M+n-1,n)|C| < C(D+n,n) and ell(D-w) < (M-w)q for w < k hold, so a
/// witness exists and its restriction to the surface must vanish
/// identically for every |beta| < k.
fn mult_inputsubset_scenario() -> Result<LemmaResult, TheoremError> {
    let spec = FieldSpec::new(5).unwrap();
    let (n, d, ell, k, mult, max_deg) = (2usize, 1usize, 2u32, 1u32, 3u32, 7u32);
    let h = MultiPoly::from_terms(d, spec, [(Monomial::new(vec![ell]).unwrap(), 1)])?;
    let family = SurfaceFamilySpec::new(spec, n, d, ell, vec![h.clone()])?;
    // inequality (M-D-ineq) for all 0 <= w < k
    for w in 0..k as u64 {
        assert!(
            (ell as u64) * (max_deg as u64 - w) < (mult as u64 - w) * spec.q() as u64
        );
    }
    let inst = SurfaceInstance {
        rho: vec![2],
        a: vec![0, 0],
        g: vec![h],
    };
    let surface: Vec<Vec<u32>> = all_tuples(spec, d)
        .iter()
        .map(|t| gamma_eval(&inst, t, spec))
        .collect::<Result<_, _>>()?;
    let f = find_vanishing_mult(&surface, max_deg, mult, n, spec)?
        .expect("existence inequality forces a witness");
    let mut witness = None;
    'outer: for shell in 0..k {
        for beta in monomials_of_degree(shell, n) {
            let restricted = restrict_to_surface(&f.hasse_derivative(&beta)?, &inst, &family)?;
            if !restricted.is_zero() {
                witness = Some(format!("f_beta nonzero for beta {beta:?}"));
                break 'outer;
            }
        }
    }
    Ok(lemma("mult-inputsubset", 1, witness))
}

/// Falsification form of the Hasse-derivative reduction lemma: for a random
/// sparse nonzero coefficient family b (supported on exponents with distinct
/// primed parts, |alpha| < k(q-1)), some f_beta with |beta| < k must be
/// nonzero somewhere on (F_q \ {0})^{n-d}.
fn hd_reduction_falsification(
    mut rng: SplitMix64,
    trials: u64,
) -> Result<LemmaResult, TheoremError> {
    let mut fail = None;
    'trial: for _ in 0..trials {
        let q = [3u64, 5][rng.below(2) as usize];
        let spec = FieldSpec::new(q).unwrap();
        let n = 2usize;
        let d = 1usize;
        let k = 2u32;
        let degree_cap = k * (q as u32 - 1); // |alpha| < k(q-1)
        // sparse support, distinct primed parts
        let mut support: Vec<(Monomial, u32)> = Vec::new();
        let mut primed_seen = std::collections::BTreeSet::new();
        let target = 1 + rng.below(4);
        for _ in 0..target * 4 {
            if support.len() as u64 >= target {
                break;
            }
            let a1 = rng.below(degree_cap as u64) as u32;
            let a2 = rng.below((degree_cap - a1) as u64) as u32;
            if a1 + a2 >= degree_cap {
                continue;
            }
            if !primed_seen.insert(a2) {
                continue;
            }
            let coeff = 1 + rng.below(q - 1) as u32;
            support.push((Monomial::new(vec![a1, a2]).unwrap(), coeff));
        }
        if support.is_empty() {
            continue;
        }
        let c: Vec<u32> = (0..n - d)
            .map(|_| 1 + rng.below(q - 1) as u32)
            .collect();
        // search for a nonzero f_beta value
        for shell in 0..k {
            for beta in monomials_of_degree(shell, n) {
                for t in all_tuples(spec, n - d) {
                    if t.iter().any(|&x| x == 0) {
                        continue;
                    }
                    let mut acc = 0u32;
                    for (alpha, b) in &support {
                        let Some(diff) = alpha.checked_sub(&beta) else {
                            continue;
                        };
                        let binom =
                            multi_binom(&alpha.exps_u64(), &beta.exps_u64(), spec)?.value();
                        let mut term = spec.mul_raw(*b, binom);
                        let prime = &diff.exps()[d..];
                        for (i, &e) in prime.iter().enumerate() {
                            term = spec.mul_raw(term, spec.pow_raw(c[i], e as u64));
                            term = spec.mul_raw(term, spec.pow_raw(t[i], e as u64));
                        }
                        acc = spec.add_raw(acc, term);
                    }
                    if acc != 0 {
                        continue 'trial;
                    }
                }
            }
        }
        fail = Some(format!(
            "all f_beta vanished for nonzero b with {} terms over F_{q}",
            support.len()
        ));
        break;
    }
    Ok(lemma("hd-reduction-falsification", trials, fail))
}

/// Canonical family h_i = t_{1 + (i-1 mod d)}^ell, used by the test grids.
pub fn canonical_family(
    spec: FieldSpec,
    n: usize,
    d: usize,
    ell: u32,
) -> Result<SurfaceFamilySpec, TheoremError> {
    let h: Vec<MultiPoly> = (0..n - d)
        .map(|i| {
            let mut exps = vec![0u32; d];
            exps[i % d] = ell;
            MultiPoly::from_terms(d, spec, [(Monomial::new(exps).unwrap(), 1)])
        })
        .collect::<Result<_, _>>()?;
    SurfaceFamilySpec::new(spec, n, d, ell, h).map_err(Into::into)
}

/// Seeded random family: nonzero homogeneous h_i of exact degree ell.
pub fn random_family(
    spec: FieldSpec,
    n: usize,
    d: usize,
    ell: u32,
    rng: &mut SplitMix64,
) -> Result<SurfaceFamilySpec, TheoremError> {
    let h: Vec<MultiPoly> = (0..n - d)
        .map(|_| random::homogeneous(d, ell, spec, rng))
        .collect();
    SurfaceFamilySpec::new(spec, n, d, ell, h).map_err(Into::into)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brkset::{build_brk_set, Strategy};

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::new(exps.to_vec()).unwrap()
    }

    #[test]
    fn pm_bound_examples() {
        assert_eq!(pm_bound(5, 2, 2).unwrap(), 6);
        assert_eq!(pm_bound(3, 3, 2).unwrap(), 4);
        assert_eq!(pm_bound(3, 2, 5).unwrap(), 1);
        assert!(matches!(pm_bound(5, 2, 1), Err(TheoremError::EllTooSmall(1))));
    }

    #[test]
    fn mm_bound_examples() {
        assert_eq!(mm_bound(5, 2, 1), Ratio::new(25, 4));
        assert_eq!(mm_bound(5, 2, 2), Ratio::new(400, 121));
        assert_eq!(mm_bound(2, 2, 1), Ratio::new(1, 1));
    }

    #[test]
    fn mm_claim_examples() {
        let (d, m, ratio) = mm_claim_bound(3, 2, 1, 3).unwrap();
        assert_eq!((d, m), (5, 4));
        assert_eq!(ratio, Ratio::new(21, 10));

        // larger k moves toward the limit 9/4
        let (_, _, r30) = mm_claim_bound(3, 2, 1, 30).unwrap();
        let target = mm_bound(3, 2, 1);
        assert_eq!(target, Ratio::new(9, 4));
        assert!(r30 > ratio && r30 <= target);

        assert!(matches!(
            mm_claim_bound(3, 2, 1, 4),
            Err(TheoremError::BadK(4, 3))
        ));
    }

    #[test]
    fn mm_claim_monotone_in_k() {
        for q in [3u32, 5, 7] {
            for n in [2usize, 3] {
                for ell in 1..=3u32 {
                    if ell >= q {
                        continue;
                    }
                    let target = mm_bound(q, n, ell);
                    let mut prev = None;
                    for k in [q as u64, 2 * q as u64, 3 * q as u64] {
                        let (_, _, r) = mm_claim_bound(q, n, ell, k).unwrap();
                        if let Some(p) = prev {
                            assert!(r >= p, "q={q} n={n} ell={ell} k={k}");
                        }
                        assert!(r <= target);
                        prev = Some(r);
                    }
                }
            }
        }
    }

    #[test]
    fn substituted_key_examples() {
        let f5 = f(5);
        // d=1, n=3, alpha^1=(2), alpha^2=(3)
        let h1 = MultiPoly::from_terms(1, f5, [(mono(&[2]), 1)]).unwrap();
        let h2 = MultiPoly::from_terms(1, f5, [(mono(&[3]), 1)]).unwrap();
        // family needs homogeneous same-degree tops; build keys directly
        let alphas = vec![mono(&[2]), mono(&[3])];
        assert_eq!(key_from_leads(&mono(&[1, 2, 0]), 1, &alphas), mono(&[5]));
        assert_eq!(key_from_leads(&mono(&[0, 0, 0]), 1, &alphas), mono(&[0]));
        drop((h1, h2));

        // d=2, alpha^1=(1,1)
        let alphas = vec![mono(&[1, 1])];
        assert_eq!(key_from_leads(&mono(&[1, 0, 1]), 2, &alphas), mono(&[2, 1]));
    }

    fn family_t2(spec: FieldSpec) -> SurfaceFamilySpec {
        let h = MultiPoly::from_terms(1, spec, [(mono(&[2]), 1)]).unwrap();
        SurfaceFamilySpec::new(spec, 2, 1, 2, vec![h]).unwrap()
    }

    #[test]
    fn leading_coefficient_poly_examples() {
        let f5 = f(5);
        let fam = family_t2(f5);

        // f = x2 + x1^2: both keys equal (2); P(rho) = rho + 1
        let fp = MultiPoly::from_terms(2, f5, [(mono(&[0, 1]), 1), (mono(&[2, 0]), 1)]).unwrap();
        let p = leading_coefficient_poly(&fp, &fam, None).unwrap();
        let expected =
            MultiPoly::from_terms(1, f5, [(mono(&[1]), 1), (mono(&[0]), 1)]).unwrap();
        assert_eq!(p, expected);

        // f = x1 -> P = 1
        let fx = MultiPoly::from_terms(2, f5, [(mono(&[1, 0]), 1)]).unwrap();
        assert_eq!(
            leading_coefficient_poly(&fx, &fam, None).unwrap(),
            MultiPoly::constant(1, f5, 1)
        );

        // f = x2^2, gamma = (0,1) -> 2 rho
        let fy2 = MultiPoly::from_terms(2, f5, [(mono(&[0, 2]), 1)]).unwrap();
        let p = leading_coefficient_poly(&fy2, &fam, Some(&mono(&[0, 1]))).unwrap();
        assert_eq!(
            p,
            MultiPoly::from_terms(1, f5, [(mono(&[1]), 2)]).unwrap()
        );
    }

    #[test]
    fn restriction_examples() {
        let f5 = f(5);
        let fam = family_t2(f5);
        let inst = SurfaceInstance {
            rho: vec![2],
            a: vec![0, 0],
            g: fam.h.clone(),
        };
        let fy = MultiPoly::from_terms(2, f5, [(mono(&[0, 1]), 1)]).unwrap();
        assert_eq!(
            restrict_to_surface(&fy, &inst, &fam).unwrap(),
            MultiPoly::from_terms(1, f5, [(mono(&[2]), 2)]).unwrap()
        );
        let c = MultiPoly::constant(2, f5, 3);
        assert_eq!(
            restrict_to_surface(&c, &inst, &fam).unwrap(),
            MultiPoly::constant(1, f5, 3)
        );
    }

    #[test]
    fn verify_pm_on_canonical_q3() {
        let f3 = f(3);
        let fam = family_t2(f3);
        let set = build_brk_set(&fam, Strategy::Canonical, 0).unwrap();
        let report = verify_theorem_pm(&set).unwrap();
        assert_eq!(report.set_size, 7);
        assert_eq!(report.bounds.pm, Some(3));
        assert!(report.all_pass());
    }

    #[test]
    fn verify_pm_on_canonical_q5() {
        let f5 = f(5);
        let fam = family_t2(f5);
        let set = build_brk_set(&fam, Strategy::Canonical, 0).unwrap();
        let report = verify_theorem_pm(&set).unwrap();
        assert!(report.set_size >= 6);
        assert!(report.all_pass());
    }

    #[test]
    fn pm_diagnostic_on_tiny_subset() {
        let f5 = f(5);
        let fam = family_t2(f5);
        // 2 points cannot be a BRK set; a degree-2 vanisher exists for them
        let pts = vec![vec![0u32, 0], vec![1, 1]];
        let witness = find_vanishing(&pts, 2, 2, f5).unwrap().unwrap();
        let set = build_brk_set(&fam, Strategy::Canonical, 0).unwrap();
        let diag = pm_diagnose(&witness, &fam, &set.instances).unwrap();
        // the contradiction pipeline must break somewhere
        assert!(diag.f_rho_nonzero_at.is_some() || diag.p_rho_nonzero_at.is_some());
    }

    #[test]
    fn verify_mm_on_canonical_q3() {
        let f3 = f(3);
        let fam = family_t2(f3);
        let set = build_brk_set(&fam, Strategy::Canonical, 0).unwrap();
        let report = verify_theorem_mm(&set, 3).unwrap();
        // D=5, M=5 for q=3, ell=2, k=3; claim ratio C(7,2)/C(6,2) = 21/15 = 7/5
        assert_eq!(report.bounds.mm_claim.as_deref(), Some("7/5"));
        assert!(report.all_pass());
        assert!(matches!(
            verify_theorem_mm(&set, 4),
            Err(TheoremError::BadK(4, 3))
        ));
    }

    #[test]
    fn lemma_suite_smoke() {
        let report = lemma_suite(1, 200).unwrap();
        for r in &report.results {
            assert!(r.verdict, "lemma {} failed: {:?}", r.name, r.witness);
        }
    }

    #[test]
    fn leading_coeff_poly_matches_restriction_coefficient() {
        // evaluation-based oracle: the coefficient of the selection key in
        // f_rho equals P(rho) for every rho in (F_q \ {0})^{n-d}
        let f7 = f(7);
        let mut rng = SplitMix64::new(123);
        for _ in 0..25 {
            let n = 2 + rng.below(2) as usize;
            let d = 1 + rng.below((n - 1) as u64) as usize;
            let ell = 1 + rng.below(3) as u32;
            let fam = random_family(f7, n, d, ell, &mut rng).unwrap();
            let fp = random::nonzero_poly(n, 1 + rng.below(3) as u32, f7, &mut rng);
            let selection = leading_selection(&fp, &fam).unwrap();
            let p = leading_coefficient_poly(&fp, &fam, None).unwrap();
            for rho in all_tuples(f7, n - d) {
                if rho.iter().any(|&r| r == 0) {
                    continue;
                }
                let inst = SurfaceInstance {
                    rho: rho.clone(),
                    a: vec![0; n],
                    g: fam.h.clone(),
                };
                let restricted = restrict_to_surface(&fp, &inst, &fam).unwrap();
                assert_eq!(
                    restricted.coeff(&selection.key).value(),
                    p.evaluate(&rho).unwrap().value(),
                    "rho {rho:?}"
                );
            }
        }
    }
}
