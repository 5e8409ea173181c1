//! Sparse multivariate polynomial arithmetic in `S = F_p[x_0, …, x_r]`.
//!
//! Monomials are fixed-size exponent arrays (at most [`MAX_VARS`] variables,
//! exponents below 4096) so they pack into `u128` sort keys: comparing two
//! monomials under an order is a single integer comparison. Polynomials are
//! term vectors kept sorted descending under a fixed canonical order
//! (graded reverse lexicographic with the natural variable precedence), which
//! makes equality, coefficient lookup and serialization deterministic no
//! matter which order a Gröbner computation happens to use.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hash, Hasher};

use crate::gfp::Fp;
use crate::{Error, Result};

/// Maximum number of ambient variables (`r + 1`).
pub const MAX_VARS: usize = 8;

/// Exponents must stay below 2^12 so they fit the packed key fields.
pub const MAX_DEGREE: u32 = 0xFFF;

/// A monomial: exponent vector padded with zeros up to [`MAX_VARS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; MAX_VARS])
    }

    /// The monomial `x_i`.
    pub fn var(i: usize) -> Mono {
        let mut e = [0u16; MAX_VARS];
        e[i] = 1;
        Mono(e)
    }

    pub fn from_exps(exps: &[u16]) -> Mono {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut e = [0u16; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Mono(e)
    }

    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; MAX_VARS]
    }

    /// Componentwise sum. Callers bound total degrees up front, so plain
    /// addition cannot overflow the 12-bit key fields.
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i] + other.0[i];
        }
        Mono(e)
    }

    /// Componentwise difference if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Mono(e))
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i].max(other.0[i]);
        }
        Mono(e)
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn pow_scale(&self, k: u16) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i] * k;
        }
        Mono(e)
    }

    fn packed(&self) -> (u64, u64) {
        let lo = self.0[0] as u64
            | (self.0[1] as u64) << 16
            | (self.0[2] as u64) << 32
            | (self.0[3] as u64) << 48;
        let hi = self.0[4] as u64
            | (self.0[5] as u64) << 16
            | (self.0[6] as u64) << 32
            | (self.0[7] as u64) << 48;
        (lo, hi)
    }
}

impl Hash for Mono {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let (lo, hi) = self.packed();
        state.write_u64(lo);
        state.write_u64(hi);
    }
}

/// Cheap multiply-rotate hasher for monomial aggregation maps. Term counts
/// reach the hundreds of thousands during lifting, where SipHash overhead
/// is measurable.
#[derive(Default)]
pub struct FastHasher(u64);

impl Hasher for FastHasher {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x517c_c1b7_2722_0a95);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x517c_c1b7_2722_0a95);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

pub type FastBuild = BuildHasherDefault<FastHasher>;

/// The ambient polynomial ring: modulus plus variable count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ring {
    fp: Fp,
    nvars: usize,
}

impl Ring {
    pub fn new(p: u64, nvars: usize) -> Result<Ring> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::Input(format!(
                "variable count must be between 1 and {MAX_VARS}, got {nvars}"
            )));
        }
        Ok(Ring { fp: Fp::new(p)?, nvars })
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn p(&self) -> u32 {
        self.fp.modulus()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

/// Canonical (graded reverse lexicographic, natural precedence) packed key.
/// Bigger key = bigger monomial.
pub(crate) fn canon_key(m: &Mono, nvars: usize) -> u128 {
    let mut key = m.deg() as u128;
    for i in (0..nvars).rev() {
        key = key << 12 | (MAX_DEGREE - m.0[i] as u32) as u128;
    }
    key
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A monomial order: graded reverse lexicographic or lexicographic, with an
/// arbitrary variable precedence (`perm[0]` is the most significant variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoOrder {
    pub kind: OrderKind,
    perm: Vec<usize>,
    nvars: usize,
}

impl MonoOrder {
    pub fn grevlex(nvars: usize) -> MonoOrder {
        MonoOrder { kind: OrderKind::Grevlex, perm: (0..nvars).collect(), nvars }
    }

    pub fn lex(nvars: usize) -> MonoOrder {
        MonoOrder { kind: OrderKind::Lex, perm: (0..nvars).collect(), nvars }
    }

    /// Same kind, with variable precedence `perm[0] > perm[1] > …`.
    pub fn with_precedence(kind: OrderKind, perm: Vec<usize>) -> MonoOrder {
        let nvars = perm.len();
        let mut seen = vec![false; nvars];
        for &i in &perm {
            assert!(i < nvars && !seen[i], "precedence must be a permutation");
            seen[i] = true;
        }
        MonoOrder { kind, perm, nvars }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Packed comparison key; bigger key = bigger monomial.
    pub fn key(&self, m: &Mono) -> u128 {
        match self.kind {
            OrderKind::Grevlex => {
                let mut key = m.deg() as u128;
                for &v in self.perm.iter().rev() {
                    key = key << 12 | (MAX_DEGREE - m.0[v] as u32) as u128;
                }
                key
            }
            OrderKind::Lex => {
                let mut key = 0u128;
                for &v in &self.perm {
                    key = key << 12 | m.0[v] as u128;
                }
                key
            }
        }
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

/// Classification returned by [`Poly::homogeneity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(u32),
    /// Two witness monomials of different total degree.
    Inhomogeneous(Mono, Mono),
}

/// Sparse polynomial: nonzero terms sorted descending under the canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Mono, u32)>,
}

impl Poly {
    pub fn zero(ring: Ring) -> Poly {
        Poly { ring, terms: Vec::new() }
    }

    pub fn one(ring: Ring) -> Poly {
        Poly::constant(ring, 1)
    }

    pub fn constant(ring: Ring, c: u32) -> Poly {
        let c = ring.fp.reduce(c as u64);
        if c == 0 {
            Poly::zero(ring)
        } else {
            Poly { ring, terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn monomial(ring: Ring, m: Mono, c: u32) -> Poly {
        Poly::from_terms(ring, vec![(m, c)])
    }

    /// Canonicalizes an arbitrary term list: reduces coefficients, merges
    /// duplicate monomials, drops zeros, sorts.
    pub fn from_terms(ring: Ring, terms: Vec<(Mono, u32)>) -> Poly {
        let mut map: HashMap<Mono, u32, FastBuild> = HashMap::default();
        for (m, c) in terms {
            let c = ring.fp.reduce(c as u64);
            if c == 0 {
                continue;
            }
            let e = map.entry(m).or_insert(0);
            *e = ring.fp.add(*e, c);
        }
        let mut p = Poly { ring, terms: Vec::with_capacity(map.len()) };
        p.terms.extend(map.into_iter().filter(|&(_, c)| c != 0));
        p.sort_terms();
        p
    }

    fn sort_terms(&mut self) {
        let nv = self.ring.nvars;
        self.terms.sort_unstable_by(|a, b| canon_key(&b.0, nv).cmp(&canon_key(&a.0, nv)));
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(Mono, u32)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the highest term, or `None` for zero.
    pub fn max_deg(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.deg()).max()
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            self.ring == other.ring,
            "ambient ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        self.merge(other, true)
    }

    /// Merge of two canonically sorted term lists.
    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let fp = self.ring.fp;
        let nv = self.ring.nvars;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = self.terms[i];
            let (mb, cb) = other.terms[j];
            let cb = if negate { fp.neg(cb) } else { cb };
            match canon_key(&ma, nv).cmp(&canon_key(&mb, nv)) {
                Ordering::Greater => {
                    out.push((ma, ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb, cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = fp.add(ca, cb);
                    if c != 0 {
                        out.push((ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for &(m, c) in &other.terms[j..] {
            let c = if negate { fp.neg(c) } else { c };
            out.push((m, c));
        }
        Poly { ring: self.ring, terms: out }
    }

    pub fn neg(&self) -> Poly {
        let fp = self.ring.fp;
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|&(m, c)| (m, fp.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Poly {
        let fp = self.ring.fp;
        let c = fp.reduce(c as u64);
        if c == 0 {
            return Poly::zero(self.ring);
        }
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|&(m, k)| (m, fp.mul(k, c))).collect(),
        }
    }

    /// Multiplication by a single term; preserves sortedness, no re-sort.
    pub fn mul_term(&self, m: &Mono, c: u32) -> Poly {
        let fp = self.ring.fp;
        let c = fp.reduce(c as u64);
        if c == 0 {
            return Poly::zero(self.ring);
        }
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|&(t, k)| (t.mul(m), fp.mul(k, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring);
        }
        let da = self.max_deg().unwrap();
        let db = other.max_deg().unwrap();
        assert!(da + db <= MAX_DEGREE, "product degree {} exceeds {}", da + db, MAX_DEGREE);
        let fp = self.ring.fp;
        // Iterate with the shorter operand outermost so each pass streams
        // the longer term list.
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let mut map: HashMap<Mono, u32, FastBuild> =
            HashMap::with_capacity_and_hasher(big.len() * 2, FastBuild::default());
        for &(ma, ca) in small.iter() {
            for &(mb, cb) in big.iter() {
                let c = fp.mul(ca, cb);
                let e = map.entry(ma.mul(&mb)).or_insert(0);
                *e = fp.add(*e, c);
            }
        }
        let mut out = Poly { ring: self.ring, terms: Vec::with_capacity(map.len()) };
        out.terms.extend(map.into_iter().filter(|&(_, c)| c != 0));
        out.sort_terms();
        out
    }

    /// `f^e` by binary exponentiation, shortcutting through the Frobenius
    /// twist when `e` has a factor of `p`: `f^(pk) = twist(f)^k`.
    pub fn pow(&self, e: u32) -> Poly {
        if e == 0 {
            return Poly::one(self.ring);
        }
        if let Some(d) = self.max_deg() {
            assert!(d * e <= MAX_DEGREE, "power degree {} exceeds {}", d * e, MAX_DEGREE);
        }
        let p = self.ring.p();
        if e as u64 >= p as u64 && e as u64 % p as u64 == 0 {
            return self.frob_twist().pow(e / p);
        }
        if e as u64 > p as u64 {
            let head = self.frob_twist().pow(e / p);
            let tail = self.pow_binary(e % p);
            return head.mul(&tail);
        }
        self.pow_binary(e)
    }

    fn pow_binary(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Termwise `c·x^e ↦ c^p·x^(pe)`; equals `f^p` in characteristic `p`.
    pub fn frob_twist(&self) -> Poly {
        let p = self.ring.p();
        if let Some(d) = self.max_deg() {
            assert!(d * p <= MAX_DEGREE, "twist degree {} exceeds {}", d * p, MAX_DEGREE);
        }
        let fp = self.ring.fp;
        let mut terms: Vec<(Mono, u32)> = self
            .terms
            .iter()
            .map(|&(m, c)| (m.pow_scale(p as u16), fp.pow(c, p as u64)))
            .collect();
        // Exponent scaling is strictly monotone for every graded order, so
        // sortedness is preserved; re-sort anyway to keep this obviously
        // canonical (term counts here are small relative to products).
        let nv = self.ring.nvars;
        terms.sort_unstable_by(|a, b| canon_key(&b.0, nv).cmp(&canon_key(&a.0, nv)));
        Poly { ring: self.ring, terms }
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coeff(&self, m: &Mono) -> u32 {
        let nv = self.ring.nvars;
        let key = canon_key(m, nv);
        self.terms
            .binary_search_by(|(t, _)| canon_key(t, nv).cmp(&key).reverse())
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let Some((first, _)) = self.terms.first() else {
            return Homogeneity::Zero;
        };
        let d = first.deg();
        for (m, _) in &self.terms[1..] {
            if m.deg() != d {
                return Homogeneity::Inhomogeneous(*first, *m);
            }
        }
        Homogeneity::Homogeneous(d)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        match self.homogeneity() {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(e) => e == d,
            Homogeneity::Inhomogeneous(..) => false,
        }
    }

    /// Largest term under an arbitrary order (canonical storage order is
    /// grevlex, so other orders pay a linear scan).
    pub fn lead_term(&self, ord: &MonoOrder) -> Option<(Mono, u32)> {
        if self.terms.is_empty() {
            return None;
        }
        if ord.kind == OrderKind::Grevlex && *ord == MonoOrder::grevlex(self.ring.nvars) {
            return Some(self.terms[0]);
        }
        self.terms.iter().max_by_key(|(m, _)| ord.key(m)).copied()
    }
}
