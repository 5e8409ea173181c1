//! End-to-end computation of the Frobenius action on `H^q(X, O_X)`.
//!
//! Two pipelines produce the same [`FrobeniusReport`]. The general path
//! resolves `S/I` freely, lifts the Frobenius twist through the resolution,
//! and reads the action off a kernel-modulo-image basis in twisted top
//! cohomology. The complete-intersection path skips all of that: when the
//! generators form a regular sequence cutting out dimension `q = r - t` and
//! the partial degree sums stay at most `r`, the matrix entries are plain
//! coefficients of `(f_1 ⋯ f_t)^{p-1}`.
//!
//! The reported matrix is in column convention: the image of basis element
//! `b_i` is `Σ_j M[j][i]·b_j`.

use crate::cohomo::{
    apply_row_action, fp_charpoly, fp_rank, fp_solve_left, induced_map_on, negative_tuples,
    quotient_basis, twisted_basis, CohomologySpace, FpMatrix, LaurentBasisElement,
};
use crate::freemod::{
    free_resolution, frobenius_resolution, lift_chain_map, validate_generators, FreeResolution,
    GradedHomomorphism,
};
use crate::koszul::is_regular_sequence;
use crate::polyring::{Mono, Poly, Ring, MAX_DEGREE, MAX_VARS};
use crate::{Error, Result};
use std::fmt;
use std::time::{Duration, Instant};

/// Which pipeline the caller wants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Complete-intersection path when its hypotheses hold, general otherwise.
    Auto,
    General,
    CompleteIntersection,
}

/// Which pipeline actually ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmUsed {
    General,
    CompleteIntersection,
}

impl fmt::Display for AlgorithmUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmUsed::General => "general",
            AlgorithmUsed::CompleteIntersection => "complete_intersection",
        })
    }
}

/// A validated problem instance: homogeneous generators over `F_p` in
/// `r + 1` variables and a cohomology degree `1 ≤ q ≤ r - 1`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    ring: Ring,
    generators: Vec<Poly>,
    q: usize,
    algorithm: Algorithm,
}

impl ProblemSpec {
    pub fn new(generators: Vec<Poly>, q: usize, algorithm: Algorithm) -> Result<ProblemSpec> {
        let ring = validate_generators(&generators)?;
        let r = ring.nvars() - 1;
        if r < 2 || q == 0 || q > r - 1 {
            return Err(Error::Input(format!(
                "cohomology degree q = {q} is out of range (need 1 <= q <= r-1 with r = {r})"
            )));
        }
        Ok(ProblemSpec { ring, generators, q, algorithm })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    /// Dimension of the ambient projective space.
    pub fn r(&self) -> usize {
        self.ring.nvars() - 1
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }
}

/// Wall-clock split between the algebraic precomputation (resolution, twist,
/// lift — or the big product power) and the linear-algebra phase.
#[derive(Debug, Clone, Copy)]
pub struct Timings {
    pub step_a: Duration,
    pub step_b: Duration,
}

/// A cohomology class written over the ambient monomial basis.
pub type BasisCombination = Vec<(u32, LaurentBasisElement)>;

/// Everything the pipelines report about one problem instance.
#[derive(Debug, Clone)]
pub struct FrobeniusReport {
    /// `h_dim × h_dim`, column convention.
    pub matrix: FpMatrix,
    pub rank: usize,
    /// Monic, coefficients descending from degree `h_dim`.
    pub char_poly: Vec<u32>,
    /// `dim H^q(X, O_X)`.
    pub h_dim: usize,
    /// The basis classes the matrix is written in.
    pub basis: Vec<BasisCombination>,
    pub algorithm_used: AlgorithmUsed,
    /// Largest dimension among the enumerated twisted cohomology spaces.
    pub d: usize,
    /// Largest term count among the entries of the lifting map and the two
    /// differentials it bridges; absent when no lift is computed.
    pub alpha: Option<usize>,
    pub timings: Timings,
}

/// The matrix-level fragment of a report: representation matrix, rank, and
/// characteristic polynomial.
#[derive(Debug, Clone)]
pub struct FrobeniusAction {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub char_poly: Vec<u32>,
}

/// Entry-wise `p`-th power of a coordinate matrix together with the
/// `p`-th powers of the basis monomials its columns refer to.
pub fn frobenius_on_basis(
    b: &FpMatrix,
    basis: &[LaurentBasisElement],
    p: u64,
) -> (FpMatrix, Vec<LaurentBasisElement>) {
    assert_eq!(b.cols(), basis.len(), "columns must be indexed by the basis");
    let fp = b.fp();
    let mut bp = FpMatrix::zeros(fp, b.rows(), b.cols());
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            bp.set(i, j, fp.pow(b.get(i, j), p));
        }
    }
    let basis_p = basis
        .iter()
        .map(|e| {
            let exps = e
                .exps
                .iter()
                .map(|&x| {
                    i32::try_from(x as i64 * p as i64).expect("scaled exponent overflows")
                })
                .collect();
            LaurentBasisElement { slot: e.slot, exps }
        })
        .collect();
    (bp, basis_p)
}

/// Eliminates the pivot coordinates of `rref` (a reduced row echelon basis)
/// from every row of `rows`, i.e. reduces each row modulo that row space.
fn reduce_mod_rref(rows: &mut FpMatrix, rref: &FpMatrix) {
    let fp = rows.fp();
    for k in 0..rref.rows() {
        let Some(pc) = (0..rref.cols()).find(|&j| rref.get(k, j) != 0) else {
            continue;
        };
        for i in 0..rows.rows() {
            let lambda = rows.get(i, pc);
            if lambda == 0 {
                continue;
            }
            for j in 0..rows.cols() {
                let sub = fp.mul(lambda, rref.get(k, j));
                rows.set(i, j, fp.sub(rows.get(i, j), sub));
            }
        }
    }
}

/// The Frobenius action on the span of the rows of `b`: raise each row to the
/// `p`-th power, push it through the lifting map `c` (truncating at
/// nonnegative exponents), rewrite over `v_basis`, and solve `X·b = b'`. The
/// returned matrix is `X` transposed into column convention.
pub fn rank_of_frobenius(
    p: u64,
    b: &FpMatrix,
    v_basis: &CohomologySpace,
    c: &GradedHomomorphism,
) -> Result<FrobeniusAction> {
    rank_of_frobenius_mod_image(p, b, v_basis, c, None)
}

/// As [`rank_of_frobenius`], additionally reducing the transported rows
/// modulo an image row space before solving. The rows of `b` must already be
/// reduced modulo that space (quotient bases are).
pub(crate) fn rank_of_frobenius_mod_image(
    p: u64,
    b: &FpMatrix,
    v_basis: &CohomologySpace,
    c: &GradedHomomorphism,
    image_rref: Option<&FpMatrix>,
) -> Result<FrobeniusAction> {
    assert_eq!(b.cols(), v_basis.dim(), "coset matrix does not match the ambient basis");
    let fp = b.fp();
    let (bp, basis_p) = frobenius_on_basis(b, &v_basis.basis, p);
    let mut bprime = FpMatrix::zeros(fp, b.rows(), v_basis.dim());
    for i in 0..bp.rows() {
        for j in 0..bp.cols() {
            let coeff = bp.get(i, j);
            if coeff == 0 {
                continue;
            }
            let bj = &basis_p[j];
            apply_row_action(c, bj.slot, &bj.exps, coeff, fp, |exps, slot, v| {
                match v_basis.index_of(slot, exps) {
                    Some(k) => {
                        let cur = bprime.get(i, k);
                        bprime.set(i, k, fp.add(cur, v));
                    }
                    None => panic!("truncated monomial escaped the target basis"),
                }
            });
        }
    }
    if let Some(im) = image_rref {
        reduce_mod_rref(&mut bprime, im);
    }
    let x = fp_solve_left(b, &bprime)?;
    let matrix = x.transpose();
    let rank = fp_rank(&matrix);
    let char_poly = fp_charpoly(&matrix);
    Ok(FrobeniusAction { matrix, rank, char_poly })
}

fn widest_entry(h: &GradedHomomorphism) -> usize {
    h.matrix().iter().flatten().map(Poly::num_terms).max().unwrap_or(0)
}

fn empty_report(
    ring: Ring,
    used: AlgorithmUsed,
    d: usize,
    alpha: Option<usize>,
    timings: Timings,
) -> FrobeniusReport {
    FrobeniusReport {
        matrix: FpMatrix::zeros(ring.fp(), 0, 0),
        rank: 0,
        char_poly: vec![1],
        h_dim: 0,
        basis: Vec::new(),
        algorithm_used: used,
        d,
        alpha,
        timings,
    }
}

/// The resolution entries get their exponents multiplied by `p`; refuse
/// characteristics for which that leaves the supported monomial range.
fn check_twist_degrees(res: &FreeResolution, p: u32) -> Result<()> {
    let maxd = res
        .maps()
        .iter()
        .flat_map(|h| h.matrix().iter().flatten())
        .filter_map(Poly::max_deg)
        .max()
        .unwrap_or(0);
    if maxd as u64 * p as u64 > MAX_DEGREE as u64 {
        return Err(Error::Input(format!(
            "characteristic {p} is too large here: twisting degree-{maxd} resolution entries \
             needs degree {} > {MAX_DEGREE}",
            maxd as u64 * p as u64
        )));
    }
    Ok(())
}

/// The general pipeline: minimal free resolution, Frobenius twist, lifting
/// maps, then the cohomology linear algebra.
pub fn general_path(spec: &ProblemSpec) -> Result<FrobeniusReport> {
    let t_a = Instant::now();
    let res = free_resolution(spec.generators())?;
    check_twist_degrees(&res, spec.p())?;
    let fres = frobenius_resolution(&res);
    let lifts = lift_chain_map(&fres, &res)?;
    let step_a = t_a.elapsed();
    step_b(spec, &res, &lifts, step_a)
}

/// The linear-algebra phase of the general pipeline with the resolution and
/// lifting maps supplied by the caller (for example a Koszul complex with its
/// closed-form lift). `step_a` in the report is zero.
pub fn general_path_with_step_a(
    spec: &ProblemSpec,
    res: &FreeResolution,
    lifts: &[GradedHomomorphism],
) -> Result<FrobeniusReport> {
    assert_eq!(res.ring(), spec.ring(), "resolution over a different ring");
    assert_eq!(lifts.len(), res.length(), "one lifting map per resolution level");
    step_b(spec, res, lifts, Duration::ZERO)
}

fn step_b(
    spec: &ProblemSpec,
    res: &FreeResolution,
    lifts: &[GradedHomomorphism],
    step_a: Duration,
) -> Result<FrobeniusReport> {
    let t_b = Instant::now();
    let ring = spec.ring();
    let fp = ring.fp();
    let r = spec.r();
    let i0 = r - spec.q();
    let len = res.length();

    let space = |i: usize| (i <= len).then(|| twisted_basis(res.module(i), r));
    let s_low = space(i0 - 1);
    let s_mid = space(i0);
    let s_high = space(i0 + 1);
    let dim_of = |s: &Option<CohomologySpace>| s.as_ref().map_or(0, |sp| sp.dim());
    let d = dim_of(&s_low).max(dim_of(&s_mid)).max(dim_of(&s_high));

    let mut alpha = 0;
    if i0 <= len {
        alpha = alpha.max(widest_entry(res.map(i0)));
        alpha = alpha.max(widest_entry(&lifts[i0 - 1]));
    }
    if i0 + 1 <= len {
        alpha = alpha.max(widest_entry(res.map(i0 + 1)));
    }

    let Some(s_mid) = s_mid else {
        // The resolution stops before level r−q: the module there is zero and
        // so is the cohomology.
        let timings = Timings { step_a, step_b: t_b.elapsed() };
        return Ok(empty_report(ring, AlgorithmUsed::General, d, Some(alpha), timings));
    };
    let s_low = s_low.expect("level below an existing level");

    let ker_map = induced_map_on(res.map(i0), &s_mid, &s_low);
    let im_map = match &s_high {
        Some(sh) => induced_map_on(res.map(i0 + 1), sh, &s_mid),
        None => FpMatrix::zeros(fp, 0, s_mid.dim()),
    };
    let b = quotient_basis(&ker_map, &im_map)?;
    let h_dim = b.rows();
    let image_rref = im_map.row_basis();
    let action = rank_of_frobenius_mod_image(
        spec.p() as u64,
        &b,
        &s_mid,
        &lifts[i0 - 1],
        Some(&image_rref),
    )?;

    let basis = (0..b.rows())
        .map(|i| {
            (0..b.cols())
                .filter_map(|j| {
                    let c = b.get(i, j);
                    (c != 0).then(|| (c, s_mid.basis[j].clone()))
                })
                .collect()
        })
        .collect();

    Ok(FrobeniusReport {
        matrix: action.matrix,
        rank: action.rank,
        char_poly: action.char_poly,
        h_dim,
        basis,
        algorithm_used: AlgorithmUsed::General,
        d,
        alpha: Some(alpha),
        timings: Timings { step_a, step_b: t_b.elapsed() },
    })
}

/// The first violated complete-intersection hypothesis, if any: regularity,
/// then `q = r - t`, then the partial degree sums.
fn ci_violation(spec: &ProblemSpec) -> Result<Option<String>> {
    let r = spec.r();
    let t = spec.generators().len();
    match is_regular_sequence(spec.generators(), r) {
        Ok(true) => {}
        Ok(false) => {
            return Ok(Some("the generators do not form a regular sequence".into()));
        }
        Err(Error::Input(msg)) => return Ok(Some(msg)),
        Err(e) => return Err(e),
    }
    if spec.q() + t != r {
        return Ok(Some(format!(
            "the complete-intersection path needs q = r - t; got q = {}, r = {r}, t = {t}",
            spec.q()
        )));
    }
    let degs: Vec<u32> = spec.generators().iter().map(|f| f.max_deg().unwrap()).collect();
    let total: u32 = degs.iter().sum();
    for (j, dj) in degs.iter().enumerate() {
        let partial = total - dj;
        if partial as usize > r {
            return Ok(Some(format!(
                "partial degree sum {partial} (all generators except #{j}) exceeds r = {r}"
            )));
        }
    }
    Ok(None)
}

/// The complete-intersection pipeline: the matrix entries are coefficients of
/// `(f_1 ⋯ f_t)^{p-1}`, entry `(a, b)` reading off exponent
/// `-k^{(b)}·p + k^{(a)}`, over the basis of negative exponent tuples
/// `k^{(1)}, …, k^{(g)}` summing to minus the total degree.
pub fn complete_intersection_path(spec: &ProblemSpec) -> Result<FrobeniusReport> {
    if let Some(msg) = ci_violation(spec)? {
        return Err(Error::Input(msg));
    }
    let ring = spec.ring();
    let fp = ring.fp();
    let p = spec.p();
    let r = spec.r();
    let total: u32 = spec.generators().iter().map(|f| f.max_deg().unwrap()).sum();
    if (p as u64 - 1) * total as u64 > MAX_DEGREE as u64 {
        return Err(Error::Input(format!(
            "characteristic {p} is too large here: the degree-{total} product raised to p-1 \
             needs degree {} > {MAX_DEGREE}",
            (p as u64 - 1) * total as u64
        )));
    }

    let t_a = Instant::now();
    let mut prod = Poly::one(ring);
    for f in spec.generators() {
        prod = prod.mul(f);
    }
    let power = prod.pow(p - 1);
    let step_a = t_a.elapsed();

    let t_b = Instant::now();
    let tuples = negative_tuples(total as i64, r);
    let g = tuples.len();
    let mut m = FpMatrix::zeros(fp, g, g);
    for a in 0..g {
        for bcol in 0..g {
            let mut exps = [0u16; MAX_VARS];
            let mut nonneg = true;
            for v in 0..=r {
                let e = -(tuples[bcol][v] as i64) * p as i64 + tuples[a][v] as i64;
                if e < 0 {
                    nonneg = false;
                    break;
                }
                exps[v] = e as u16;
            }
            if nonneg {
                m.set(a, bcol, power.coeff(&Mono(exps)));
            }
        }
    }
    let rank = fp_rank(&m);
    let char_poly = fp_charpoly(&m);
    let basis = tuples
        .iter()
        .map(|k| vec![(1, LaurentBasisElement { slot: 0, exps: k.clone() })])
        .collect();
    Ok(FrobeniusReport {
        matrix: m,
        rank,
        char_poly,
        h_dim: g,
        basis,
        algorithm_used: AlgorithmUsed::CompleteIntersection,
        // The only level with nonzero twisted cohomology under the degree
        // hypotheses is the top one, whose dimension is g.
        d: g,
        alpha: None,
        timings: Timings { step_a, step_b: t_b.elapsed() },
    })
}

/// Runs the pipeline the spec asks for; `Auto` takes the
/// complete-intersection path exactly when all its hypotheses hold.
pub fn dispatch(spec: &ProblemSpec) -> Result<FrobeniusReport> {
    match spec.algorithm() {
        Algorithm::General => general_path(spec),
        Algorithm::CompleteIntersection => complete_intersection_path(spec),
        Algorithm::Auto => {
            if ci_violation(spec)?.is_none() {
                complete_intersection_path(spec)
            } else {
                general_path(spec)
            }
        }
    }
}
