//! Independent classical oracles used to cross-check the cohomology
//! pipelines: naive elliptic point counting, the Cartier–Manin matrix of a
//! hyperelliptic curve from an affine model, and two ways of computing graded
//! dimensions of `S/I`.
//!
//! Everything here is deliberately simple and brute-force; these functions
//! exist to catch bugs in the clever code, so they share as little machinery
//! with it as possible.

use crate::cohomo::{binomial, fp_rank, FpMatrix};
use crate::freemod::{lead_of, mod_buchberger, ModuleElement};
use crate::gfp::Fp;
use crate::polyring::{Mono, MonoOrder, Poly};
use crate::{Error, Result};

// --- dense univariate arithmetic over F_p (ascending coefficients) ---------

fn unorm(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn udeg(v: &[u32]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn uadd(fp: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = fp.add(out[i], c);
    }
    unorm(out)
}

fn umul(fp: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp.add(out[i + j], fp.mul(x, y));
        }
    }
    unorm(out)
}

fn uscale(fp: Fp, a: &[u32], c: u32) -> Vec<u32> {
    unorm(a.iter().map(|&x| fp.mul(x, c)).collect())
}

fn uderiv(fp: Fp, a: &[u32]) -> Vec<u32> {
    if a.len() <= 1 {
        return Vec::new();
    }
    unorm(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| fp.mul(fp.reduce(i as u64), c))
            .collect(),
    )
}

// Euclidean remainder of a by b (b nonzero).
fn urem(fp: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = udeg(b).expect("division by the zero polynomial");
    let lb_inv = fp.inv(b[db]);
    while let Some(dr) = udeg(&r) {
        if dr < db {
            break;
        }
        let c = fp.mul(r[dr], lb_inv);
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = fp.sub(r[shift + i], fp.mul(c, bc));
        }
        r = unorm(r);
    }
    r
}

// Monic gcd; gcd(f, 0) = monic f.
fn ugcd(fp: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = unorm(a.to_vec());
    let mut y = unorm(b.to_vec());
    while !y.is_empty() {
        let r = urem(fp, &x, &y);
        x = y;
        y = r;
    }
    match udeg(&x) {
        Some(d) => uscale(fp, &x, fp.inv(x[d])),
        None => x,
    }
}

fn reduce_signed_coeffs(fp: Fp, v: &[i64]) -> Vec<u32> {
    unorm(v.iter().map(|&c| fp.reduce_signed(c)).collect())
}

// --- elliptic point counting -----------------------------------------------

/// Trace of Frobenius `a_p = p + 1 − #E(F_p)` for the plane cubic
/// `y² = x³ + ax + b`, by direct enumeration.
///
/// Rejects `p = 2`, singular curves (`x³ + ax + b` not squarefree), and
/// moduli too large for naive counting.
pub fn elliptic_ap(p: u64, a: i64, b: i64) -> Result<i64> {
    let fp = Fp::new(p)?;
    if p == 2 {
        return Err(Error::Input("characteristic 2 is not supported".into()));
    }
    if p > 10_000 {
        return Err(Error::Input(
            "modulus too large for naive point counting".into(),
        ));
    }
    let f = unorm(vec![fp.reduce_signed(b), fp.reduce_signed(a), 0, 1]);
    let g = ugcd(fp, &f, &uderiv(fp, &f));
    if udeg(&g) != Some(0) {
        return Err(Error::Input("singular curve: x³ + ax + b has a repeated root".into()));
    }
    let half = (p - 1) / 2;
    let mut count: i64 = 1; // the point at infinity
    for x in 0..p as u32 {
        let x2 = fp.mul(x, x);
        let v = fp.add(fp.mul(x2, x), fp.add(fp.mul(fp.reduce_signed(a), x), fp.reduce_signed(b)));
        count += if v == 0 {
            1
        } else if fp.pow(v, half) == 1 {
            2
        } else {
            0
        };
    }
    let ap = p as i64 + 1 - count;
    assert!(ap * ap <= 4 * p as i64, "Hasse bound violated: counting bug");
    Ok(ap)
}

// --- Cartier–Manin via an affine hyperelliptic model -----------------------

/// Affine model `y² + h(x)·y = k(x)` of a hyperelliptic curve of the given
/// genus over `F_p`, `p` odd. Construction completes the square and checks
/// that `f = k + h²/4` has degree `2g+1` or `2g+2` and is squarefree.
#[derive(Debug, Clone)]
pub struct AffineHyperellipticModel {
    fp: Fp,
    // f(x) for the equivalent model y² = f(x), ascending coefficients.
    f: Vec<u32>,
    genus: usize,
}

impl AffineHyperellipticModel {
    /// `h` and `k` are ascending coefficient lists with signed entries.
    pub fn new(p: u64, h: &[i64], k: &[i64], genus: usize) -> Result<AffineHyperellipticModel> {
        let fp = Fp::new(p)?;
        if p == 2 {
            return Err(Error::Input("characteristic 2 is not supported".into()));
        }
        if genus == 0 {
            return Err(Error::Input("genus must be positive".into()));
        }
        let h = reduce_signed_coeffs(fp, h);
        let k = reduce_signed_coeffs(fp, k);
        let quarter = fp.inv(fp.reduce(4));
        let f = uadd(fp, &k, &uscale(fp, &umul(fp, &h, &h), quarter));
        let deg = udeg(&f).unwrap_or(0);
        if deg != 2 * genus + 1 && deg != 2 * genus + 2 {
            return Err(Error::Input(format!(
                "completed square has degree {deg}, expected {} or {} for genus {genus}",
                2 * genus + 1,
                2 * genus + 2
            )));
        }
        let g = ugcd(fp, &f, &uderiv(fp, &f));
        if udeg(&g) != Some(0) {
            return Err(Error::Input("completed square is not squarefree".into()));
        }
        Ok(AffineHyperellipticModel { fp, f, genus })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }
}

/// The `g×g` Cartier–Manin matrix: with `f^{(p-1)/2} = Σ c_k x^k`, entry
/// `(i,j)` is `c_{ip-j}` for `1 ≤ i,j ≤ g`.
pub fn hyperelliptic_hw(model: &AffineHyperellipticModel) -> FpMatrix {
    let fp = model.fp;
    let p = fp.modulus() as usize;
    let g = model.genus;
    let mut pw: Vec<u32> = vec![1];
    for _ in 0..(p - 1) / 2 {
        pw = umul(fp, &pw, &model.f);
    }
    let coeff = |k: usize| -> u32 { pw.get(k).copied().unwrap_or(0) };
    let mut m = FpMatrix::zeros(fp, g, g);
    for i in 1..=g {
        for j in 1..=g {
            m.set(i - 1, j - 1, coeff(i * p - j));
        }
    }
    m
}

// --- graded dimensions of S/I ----------------------------------------------

/// All monomials of total degree `d` in `nvars` variables, in a fixed
/// deterministic order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn rec(out: &mut Vec<Mono>, exps: &mut Vec<u16>, pos: usize, left: u32) {
        if pos + 1 == exps.len() {
            exps[pos] = left as u16;
            out.push(Mono::from_exps(exps));
            return;
        }
        for e in (0..=left).rev() {
            exps[pos] = e as u16;
            rec(out, exps, pos + 1, left - e);
        }
    }
    if nvars == 0 {
        return out;
    }
    rec(&mut out, &mut exps, 0, d);
    out
}

const ORACLE_DEGREE_BOUND: u32 = 12;

/// `dim_K (S/I)_d` by counting standard monomials of a Gröbner basis of `I`.
/// Deliberately brute-force; refuses degrees beyond its configured bound.
pub fn brute_graded_dim(generators: &[Poly], d: u32) -> Result<usize> {
    if d > ORACLE_DEGREE_BOUND {
        return Err(Error::Input(format!(
            "brute_graded_dim is limited to degree {ORACLE_DEGREE_BOUND}"
        )));
    }
    // The zero ideal is expressible with a zero generator; a fully empty
    // list leaves the ambient ring unknown.
    let Some(first) = generators.first() else {
        return Err(Error::Input("ambient ring unknown for an empty generator list".into()));
    };
    let ring = first.ring();
    let ord = MonoOrder::grevlex(ring.nvars());
    let gens: Vec<ModuleElement> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ModuleElement::new(vec![g.clone()]))
        .collect();
    let gb = mod_buchberger(&gens, &ord);
    let leads: Vec<Mono> = gb
        .iter()
        .map(|g| lead_of(g, &ord).expect("nonzero basis element").1)
        .collect();
    let count = monomials_of_degree(ring.nvars(), d)
        .into_iter()
        .filter(|m| !leads.iter().any(|l| l.divides(m)))
        .count();
    Ok(count)
}

/// `dim_K (S/I)_d` by linear algebra alone: the codimension of the span of
/// all `m·f_i` of degree `d` inside the degree-`d` monomial space. Shares no
/// Gröbner machinery with [`brute_graded_dim`], so the two check each other.
pub fn graded_dim_linalg(generators: &[Poly], d: u32) -> usize {
    let first = generators.first().expect("at least one generator");
    let ring = first.ring();
    let fp = ring.fp();
    let nvars = ring.nvars();
    let basis = monomials_of_degree(nvars, d);
    let index = |m: &Mono| basis.iter().position(|b| b == m).unwrap();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for f in generators {
        if f.is_zero() {
            continue;
        }
        let e = f.max_deg().expect("nonzero");
        assert!(f.is_homogeneous_of(e), "generators must be homogeneous");
        if e > d {
            continue;
        }
        for m in monomials_of_degree(nvars, d - e) {
            let prod = f.mul_term(&m, 1);
            let mut row = vec![0u32; basis.len()];
            for &(pm, c) in prod.terms() {
                row[index(&pm)] = c;
            }
            rows.push(row);
        }
    }
    let full = basis.len();
    if rows.is_empty() {
        return full;
    }
    full - fp_rank(&FpMatrix::from_rows(fp, rows))
}

/// `dim_K S_d = C(d+r, r)` for `r+1` variables, as used in Hilbert checks.
pub fn poly_ring_dim(nvars: usize, d: u32) -> usize {
    binomial((d as u64) + (nvars as u64) - 1, (nvars as u64) - 1) as usize
}
