//! Top-degree twisted cohomology of projective space and dense exact linear
//! algebra over `F_p`.
//!
//! `H^r(P^r, O(-d))` has a basis of Laurent monomials with all exponents
//! strictly negative summing to `-d`; for a twisted free module the basis is
//! tagged with the summand index. This module enumerates those bases
//! deterministically, turns degree-zero module maps into matrices on them
//! (multiplying through and discarding any monomial with a nonnegative
//! exponent), and supplies the matrix kernel/image/quotient/characteristic
//! polynomial machinery the Frobenius pipelines run on.
//!
//! Vectors are rows throughout: a matrix `M` acts by `v ↦ v·M`.

use crate::freemod::{GradedFreeModule, GradedHomomorphism};
use crate::gfp::Fp;
use crate::polyring::FastBuild;
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// A basis vector of `H^r(P^r, ⊕_j O(-d_j))`: a Laurent monomial with all
/// exponents `≤ -1` sitting in summand `slot`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentBasisElement {
    pub slot: usize,
    pub exps: Vec<i32>,
}

/// A twisted free module together with the deterministic basis of its
/// top-degree cohomology.
#[derive(Debug, Clone)]
pub struct CohomologySpace {
    pub module: GradedFreeModule,
    pub basis: Vec<LaurentBasisElement>,
    index: HashMap<(usize, Vec<i32>), usize, FastBuild>,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, slot: usize, exps: &[i32]) -> Option<usize> {
        self.index.get(&(slot, exps.to_vec())).copied()
    }
}

/// Number of `(r+1)`-tuples of strictly negative integers summing to `-d`,
/// i.e. `C(d-1, r)`.
pub fn negative_tuple_count(d: i64, r: usize) -> usize {
    if d <= r as i64 {
        return 0;
    }
    binomial((d - 1) as u64, r as u64) as usize
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Enumerates all strictly negative exponent tuples of length `r+1` summing
/// to `-d`, ascending lexicographically on the exponent tuples themselves.
pub fn negative_tuples(d: i64, r: usize) -> Vec<Vec<i32>> {
    let n = r + 1;
    let mut out = Vec::new();
    if d < n as i64 {
        return out;
    }
    let mut cur = vec![0i32; n];
    // Ascending lex on exponents: the first slot runs from most negative
    // (-(d-r)) up to -1, and so on recursively.
    fn rec(out: &mut Vec<Vec<i32>>, cur: &mut Vec<i32>, pos: usize, remaining: i64) {
        let n = cur.len();
        if pos == n - 1 {
            cur[pos] = -(remaining as i32);
            out.push(cur.clone());
            return;
        }
        let slots_after = (n - 1 - pos) as i64;
        // This slot takes magnitude m, leaving at least 1 per later slot.
        let max_mag = remaining - slots_after;
        for mag in (1..=max_mag).rev() {
            cur[pos] = -(mag as i32);
            rec(out, cur, pos + 1, remaining - mag);
        }
    }
    rec(&mut out, &mut cur, 0, d);
    out
}

/// The deterministic cohomology basis of a twisted free module: ascending
/// slot, then ascending lexicographic exponent tuples within each slot.
pub fn twisted_basis(module: &GradedFreeModule, r: usize) -> CohomologySpace {
    assert!(r >= 1, "projective dimension must be at least 1");
    let mut basis = Vec::new();
    for (slot, &d) in module.twists().iter().enumerate() {
        for exps in negative_tuples(d, r) {
            basis.push(LaurentBasisElement { slot, exps });
        }
    }
    let mut index = HashMap::default();
    for (i, b) in basis.iter().enumerate() {
        index.insert((b.slot, b.exps.clone()), i);
    }
    CohomologySpace { module: module.clone(), basis, index }
}

/// The matrix of `H^r(A)` between the twisted bases of source and target.
///
/// Each source basis monomial is multiplied through the row of polynomial
/// entries for its slot; any product monomial with some exponent `≥ 0` dies
/// (local cohomology truncation), the rest land exactly on target basis
/// elements by degree bookkeeping.
pub fn induced_map(a: &GradedHomomorphism, r: usize) -> FpMatrix {
    let src = twisted_basis(a.source(), r);
    let tgt = twisted_basis(a.target(), r);
    induced_map_on(a, &src, &tgt)
}

/// As [`induced_map`], reusing already-enumerated bases.
pub fn induced_map_on(
    a: &GradedHomomorphism,
    src: &CohomologySpace,
    tgt: &CohomologySpace,
) -> FpMatrix {
    let fp = a.ring().fp();
    let mut m = FpMatrix::zeros(fp, src.dim(), tgt.dim());
    for (i, b) in src.basis.iter().enumerate() {
        apply_row_action(a, b.slot, &b.exps, 1, fp, |idx_exps, slot, c| {
            if let Some(j) = tgt.index_of(slot, idx_exps) {
                let cur = m.get(i, j);
                m.set(i, j, fp.add(cur, c));
            } else {
                // Degree bookkeeping guarantees surviving monomials hit the
                // target basis; missing one is a homogeneity bug upstream.
                panic!("truncated monomial escaped the target basis");
            }
        });
    }
    m
}

/// Multiplies the Laurent monomial `exps·e_slot`, scaled by `scale`, through
/// the matrix row of `a` for that slot, reporting each surviving term.
pub(crate) fn apply_row_action<F: FnMut(&[i32], usize, u32)>(
    a: &GradedHomomorphism,
    slot: usize,
    exps: &[i32],
    scale: u32,
    fp: Fp,
    mut sink: F,
) {
    let nv = exps.len();
    let mut out = vec![0i32; nv];
    for (tslot, entry) in a.row(slot).iter().enumerate() {
        for &(mono, c) in entry.terms() {
            let mut dead = false;
            for k in 0..nv {
                out[k] = exps[k] + mono.0[k] as i32;
                if out[k] >= 0 {
                    dead = true;
                    break;
                }
            }
            if !dead {
                sink(&out, tslot, fp.mul(c, scale));
            }
        }
    }
}

/// Dense matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    fp: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} mod {} [", self.rows, self.cols, self.fp.modulus())?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn zeros(fp: Fp, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix { fp, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(fp: Fp, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zeros(fp, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(fp: Fp, rows: Vec<Vec<u32>>) -> FpMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| fp.reduce(x as u64)));
        }
        FpMatrix { fp, rows: r, cols: c, data }
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.fp, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        assert_eq!(self.fp, other.fp, "modulus mismatch");
        let p = self.fp.modulus() as u64;
        let mut out = FpMatrix::zeros(self.fp, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] =
                        ((out.data[idx] as u64 + a * other.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    /// `v·M` for a row vector.
    pub fn act_on_row(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows, "row vector length mismatch");
        let p = self.fp.modulus() as u64;
        let mut out = vec![0u32; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] = ((out[j] as u64 + a as u64 * self.get(k, j) as u64) % p) as u32;
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row_i -= λ·row_k` restricted to columns `from..`.
    fn row_sub(&mut self, i: usize, k: usize, lambda: u32, from: usize) {
        if lambda == 0 {
            return;
        }
        let fp = self.fp;
        for j in from..self.cols {
            let v = fp.sub(self.get(i, j), fp.mul(lambda, self.get(k, j)));
            self.set(i, j, v);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let fp = self.fp;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pivot_row) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pivot_row);
            let inv = fp.inv(self.get(r, c));
            for j in c..self.cols {
                self.set(r, j, fp.mul(inv, self.get(r, j)));
            }
            for i in 0..self.rows {
                if i != r {
                    let lambda = self.get(i, c);
                    self.row_sub(i, r, lambda, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Nonzero rows of the reduced row echelon form.
    pub fn row_basis(&self) -> FpMatrix {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }
}

/// Rank by Gaussian elimination.
pub fn fp_rank(m: &FpMatrix) -> usize {
    let mut work = m.clone();
    work.rref_in_place().len()
}

/// Basis of the left kernel `{v : v·M = 0}`, in reduced row echelon form.
pub fn left_kernel(m: &FpMatrix) -> FpMatrix {
    let fp = m.fp;
    let n = m.rows;
    // Row-reduce [M | I]; the identity block tracks the row operations, so
    // rows whose M-part vanishes carry a kernel basis in their I-part.
    let mut aug = FpMatrix::zeros(fp, n, m.cols + n);
    for i in 0..n {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, m.cols + i, 1);
    }
    // Eliminate using pivots only within the first m.cols columns.
    let mut r = 0;
    for c in 0..m.cols {
        if r == n {
            break;
        }
        let Some(pivot_row) = (r..n).find(|&i| aug.get(i, c) != 0) else {
            continue;
        };
        aug.swap_rows(r, pivot_row);
        let inv = fp.inv(aug.get(r, c));
        for j in 0..aug.cols {
            aug.set(r, j, fp.mul(inv, aug.get(r, j)));
        }
        for i in 0..n {
            if i != r {
                let lambda = aug.get(i, c);
                aug.row_sub(i, r, lambda, 0);
            }
        }
        r += 1;
    }
    let mut kernel_rows = Vec::new();
    for i in r..n {
        debug_assert!((0..m.cols).all(|j| aug.get(i, j) == 0));
        kernel_rows.push(aug.row(i)[m.cols..].to_vec());
    }
    FpMatrix::from_rows(fp, kernel_rows).row_basis()
}

/// Coordinates of the rows of `bp` in the row space of `b`: the unique `X`
/// with `X·b = bp`. Requires `b` of full row rank; rows of `bp` outside the
/// row space are an internal invariant violation.
pub fn fp_solve_left(b: &FpMatrix, bp: &FpMatrix) -> Result<FpMatrix> {
    assert_eq!(b.cols, bp.cols, "ambient dimension mismatch");
    let fp = b.fp;
    let g = b.rows;
    // Reduce [b | I]: R = T·b with R in RREF and T invertible.
    let mut aug = FpMatrix::zeros(fp, g, b.cols + g);
    for i in 0..g {
        for j in 0..b.cols {
            aug.set(i, j, b.get(i, j));
        }
        aug.set(i, b.cols + i, 1);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..b.cols {
        if r == g {
            break;
        }
        let Some(pivot_row) = (r..g).find(|&i| aug.get(i, c) != 0) else {
            continue;
        };
        aug.swap_rows(r, pivot_row);
        let inv = fp.inv(aug.get(r, c));
        for j in 0..aug.cols {
            aug.set(r, j, fp.mul(inv, aug.get(r, j)));
        }
        for i in 0..g {
            if i != r {
                let lambda = aug.get(i, c);
                aug.row_sub(i, r, lambda, 0);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != g {
        return Err(Error::Internal("coset basis matrix is not of full row rank".into()));
    }
    let mut x = FpMatrix::zeros(fp, bp.rows, g);
    for i in 0..bp.rows {
        // Read coordinates in R off the pivot columns, then pull back by T.
        let mut resid = bp.row(i).to_vec();
        let mut coords = vec![0u32; g];
        for (k, &c) in pivots.iter().enumerate() {
            let lambda = resid[c];
            coords[k] = lambda;
            if lambda != 0 {
                for j in 0..b.cols {
                    resid[j] = fp.sub(resid[j], fp.mul(lambda, aug.get(k, j)));
                }
            }
        }
        if resid.iter().any(|&v| v != 0) {
            return Err(Error::Internal(
                "row lies outside the span of the coset basis".into(),
            ));
        }
        for j in 0..g {
            let mut acc = 0u32;
            for k in 0..g {
                acc = fp.add(acc, fp.mul(coords[k], aug.get(k, b.cols + j)));
            }
            x.set(i, j, acc);
        }
    }
    debug_assert_eq!(x.mul(b), *bp);
    Ok(x)
}

/// Echelon coset representatives of `Ker(ker_of) / Im(im_of)` inside the
/// ambient row space: `ker_of` maps out of the ambient space, `im_of` into it.
pub fn quotient_basis(ker_of: &FpMatrix, im_of: &FpMatrix) -> Result<FpMatrix> {
    assert_eq!(ker_of.rows, im_of.cols, "ambient dimension mismatch");
    let fp = ker_of.fp;
    // Containment: the image must land inside the kernel.
    for i in 0..im_of.rows {
        let img = ker_of.act_on_row(im_of.row(i));
        if img.iter().any(|&v| v != 0) {
            return Err(Error::Internal(
                "image is not contained in the kernel: the maps do not compose to zero".into(),
            ));
        }
    }
    let kernel = left_kernel(ker_of);
    let image = im_of.row_basis();
    // The image is in reduced echelon form, so its pivots are the leading
    // nonzero positions of its rows.
    let image_pivots: Vec<usize> = (0..image.rows)
        .map(|i| image.row(i).iter().position(|&v| v != 0).unwrap())
        .collect();
    // Reduce each kernel row modulo the image, then re-echelonize.
    let mut reduced = Vec::new();
    for i in 0..kernel.rows {
        let mut row = kernel.row(i).to_vec();
        for (k, &c) in image_pivots.iter().enumerate() {
            let lambda = row[c];
            if lambda != 0 {
                for j in 0..row.len() {
                    row[j] = fp.sub(row[j], fp.mul(lambda, image.get(k, j)));
                }
            }
        }
        reduced.push(row);
    }
    let b = FpMatrix::from_rows(fp, reduced).row_basis();
    debug_assert_eq!(b.rows, kernel.rows - image.rows);
    Ok(b)
}

/// Characteristic polynomial `det(aI - M)`, monic, coefficients descending.
///
/// Reduces to Hessenberg form by similarity, then applies the classical
/// leading-minor recurrence. (Trace-based methods fail over `F_p` when the
/// dimension reaches `p`, so everything here is division-free in that sense.)
///
/// # Panics
/// Panics if `m` is not square.
pub fn fp_charpoly(m: &FpMatrix) -> Vec<u32> {
    assert_eq!(m.rows, m.cols, "characteristic polynomial needs a square matrix");
    let fp = m.fp;
    let n = m.rows;
    if n == 0 {
        return vec![1];
    }
    let mut h = m.clone();
    // Similarity reduction to upper Hessenberg with column pivoting.
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap_rows(piv, j + 1);
            for i in 0..n {
                let a = h.get(i, piv);
                let b = h.get(i, j + 1);
                h.set(i, piv, b);
                h.set(i, j + 1, a);
            }
        }
        let inv = fp.inv(h.get(j + 1, j));
        for i in j + 2..n {
            let lambda = fp.mul(h.get(i, j), inv);
            if lambda == 0 {
                continue;
            }
            h.row_sub(i, j + 1, lambda, 0);
            // Compensating column operation keeps the conjugacy class.
            for rr in 0..n {
                let v = fp.add(h.get(rr, j + 1), fp.mul(lambda, h.get(rr, i)));
                h.set(rr, j + 1, v);
            }
        }
    }
    // p_m = (x - h[m][m])·p_{m-1} - Σ_i h[i][m]·(h[i+1][i]⋯h[m][m-1])·p_{i-1},
    // coefficients ascending while we recur.
    let mut ps: Vec<Vec<u32>> = vec![vec![1]];
    for m_idx in 1..=n {
        let prev = &ps[m_idx - 1];
        let c = h.get(m_idx - 1, m_idx - 1);
        let mut cur = vec![0u32; m_idx + 1];
        for (k, &a) in prev.iter().enumerate() {
            cur[k + 1] = fp.add(cur[k + 1], a);
            cur[k] = fp.sub(cur[k], fp.mul(c, a));
        }
        let mut t = 1u32;
        for i in (1..m_idx).rev() {
            t = fp.mul(t, h.get(i, i - 1));
            let w = fp.mul(t, h.get(i - 1, m_idx - 1));
            if w == 0 {
                continue;
            }
            for (k, &a) in ps[i - 1].iter().enumerate() {
                cur[k] = fp.sub(cur[k], fp.mul(w, a));
            }
        }
        ps.push(cur);
    }
    let mut out = ps.pop().unwrap();
    out.reverse();
    out
}
