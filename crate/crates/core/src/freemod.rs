//! Graded free modules over `S = F_p[x_0..x_r]`, division and Buchberger's
//! algorithm over free modules, Schreyer syzygies, minimal graded free
//! resolutions, Frobenius-twisted resolutions, and lifting chain maps.
//!
//! Everything uses the row convention: an element of a rank-`s` module is a
//! row vector of polynomials, and a homomorphism with matrix `A` acts by
//! `v ↦ v·A`. A summand `S(-d)` is recorded by its twist `d`, so the `j`-th
//! generator row has degree `twists[j]`.
//!
//! Submodule computations use the position-over-term extension of a base
//! monomial order: terms in an earlier component always dominate. Resolutions
//! are built level by level from Schreyer syzygies of the previous matrix and
//! minimalized eagerly, so no map in a finished resolution contains a nonzero
//! constant entry.

use crate::gfp::Fp;
use crate::polyring::{FastBuild, Mono, MonoOrder, Poly, Ring};
use crate::{Error, Result};
use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

/// Free graded module `⊕_j S(-d_j)`; `twists[j] = d_j`. Rank 0 is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFreeModule {
    ring: Ring,
    twists: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(ring: Ring, twists: Vec<i64>) -> GradedFreeModule {
        GradedFreeModule { ring, twists }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// Degree of a homogeneous element (`None` for zero).
    ///
    /// # Panics
    /// Panics if a component is inhomogeneous or the components disagree.
    pub fn element_degree(&self, v: &ModuleElement) -> Option<i64> {
        assert_eq!(v.rank(), self.rank(), "module rank mismatch");
        let mut deg = None;
        for (j, c) in v.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = match c.homogeneity() {
                crate::polyring::Homogeneity::Homogeneous(d) => d as i64 + self.twists[j],
                _ => panic!("inhomogeneous module element"),
            };
            match deg {
                None => deg = Some(d),
                Some(prev) => assert_eq!(prev, d, "components of different degrees"),
            }
        }
        deg
    }
}

/// A row vector of polynomials, one per summand of its module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    components: Vec<Poly>,
}

impl ModuleElement {
    pub fn new(components: Vec<Poly>) -> ModuleElement {
        ModuleElement { components }
    }

    pub fn zero(ring: Ring, rank: usize) -> ModuleElement {
        ModuleElement { components: vec![Poly::zero(ring); rank] }
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        assert_eq!(self.rank(), other.rank(), "module rank mismatch");
        ModuleElement {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> ModuleElement {
        ModuleElement { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: u32) -> ModuleElement {
        ModuleElement { components: self.components.iter().map(|a| a.mul_term(m, c)).collect() }
    }
}

// Module order key: position-over-term, so smaller component indices dominate
// regardless of the monomials; within a component the base order key decides.
// Base keys use at most 112 bits, leaving the top 16 for the component.
fn module_key(ord: &MonoOrder, comp: usize, m: &Mono) -> u128 {
    debug_assert!(comp < 0xFFFF);
    ((0xFFFF - comp as u128) << 112) | ord.key(m)
}

/// Leading term of `v` under the position-over-term extension of `ord`.
pub fn lead_of(v: &ModuleElement, ord: &MonoOrder) -> Option<(usize, Mono, u32)> {
    let mut best: Option<(u128, usize, Mono, u32)> = None;
    for (j, c) in v.components().iter().enumerate() {
        if let Some((m, lc)) = c.lead_term(ord) {
            let key = module_key(ord, j, &m);
            if best.as_ref().map_or(true, |b| key > b.0) {
                best = Some((key, j, m, lc));
            }
        }
    }
    best.map(|(_, j, m, c)| (j, m, c))
}

/// Degree-zero homomorphism between twisted free modules, as a matrix acting
/// on row vectors (`mat[k][l]` sends source generator `k` across target
/// generator `l`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedHomomorphism {
    source: GradedFreeModule,
    target: GradedFreeModule,
    mat: Vec<Vec<Poly>>,
}

impl GradedHomomorphism {
    /// # Panics
    /// Panics when the matrix shape does not match the modules or an entry is
    /// not homogeneous of degree `source.twists[k] - target.twists[l]`.
    pub fn new(
        source: GradedFreeModule,
        target: GradedFreeModule,
        mat: Vec<Vec<Poly>>,
    ) -> GradedHomomorphism {
        assert_eq!(source.ring(), target.ring(), "ambient ring mismatch");
        assert_eq!(mat.len(), source.rank(), "matrix row count mismatch");
        for (k, row) in mat.iter().enumerate() {
            assert_eq!(row.len(), target.rank(), "matrix column count mismatch");
            for (l, entry) in row.iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let want = source.twists()[k] - target.twists()[l];
                assert!(
                    want >= 0 && entry.is_homogeneous_of(want as u32),
                    "entry ({k},{l}) is not homogeneous of degree {want}"
                );
            }
        }
        GradedHomomorphism { source, target, mat }
    }

    pub fn ring(&self) -> Ring {
        self.source.ring()
    }

    pub fn source(&self) -> &GradedFreeModule {
        &self.source
    }

    pub fn target(&self) -> &GradedFreeModule {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Poly>] {
        &self.mat
    }

    pub fn row(&self, k: usize) -> &[Poly] {
        &self.mat[k]
    }

    /// The rows as elements of the target module.
    pub fn rows_as_elements(&self) -> Vec<ModuleElement> {
        self.mat.iter().map(|r| ModuleElement::new(r.clone())).collect()
    }

    /// `v·A` for a source row vector.
    pub fn apply(&self, v: &ModuleElement) -> ModuleElement {
        assert_eq!(v.rank(), self.source.rank(), "module rank mismatch");
        let ring = self.ring();
        let mut out = vec![Poly::zero(ring); self.target.rank()];
        for (k, c) in v.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, entry) in self.mat[k].iter().enumerate() {
                if !entry.is_zero() {
                    out[l] = out[l].add(&c.mul(entry));
                }
            }
        }
        ModuleElement::new(out)
    }

    pub fn is_zero_map(&self) -> bool {
        self.mat.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }
}

/// Composite "apply `b`, then `a`" (so `target(b) = source(a)`); its matrix
/// is the product `M_b · M_a` under the row convention.
pub fn hom_compose(a: &GradedHomomorphism, b: &GradedHomomorphism) -> GradedHomomorphism {
    assert_eq!(
        b.target(),
        a.source(),
        "composition mismatch: target of the first-applied map must equal the source of the second"
    );
    let ring = a.ring();
    let rows = b.source.rank();
    let mid = b.target.rank();
    let cols = a.target.rank();
    let mut mat = vec![vec![Poly::zero(ring); cols]; rows];
    for i in 0..rows {
        for k in 0..mid {
            let e = &b.mat[i][k];
            if e.is_zero() {
                continue;
            }
            for j in 0..cols {
                let f = &a.mat[k][j];
                if !f.is_zero() {
                    mat[i][j] = mat[i][j].add(&e.mul(f));
                }
            }
        }
    }
    GradedHomomorphism::new(b.source.clone(), a.target.clone(), mat)
}

/// Graded free resolution `F_L → … → F_1 → F_0 = S` of `S/⟨generators⟩`,
/// with `maps[i-1]` the matrix of `φ_i : F_i → F_{i-1}`.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    ring: Ring,
    generators: Vec<Poly>,
    modules: Vec<GradedFreeModule>,
    maps: Vec<GradedHomomorphism>,
}

impl FreeResolution {
    pub(crate) fn from_parts(
        ring: Ring,
        generators: Vec<Poly>,
        modules: Vec<GradedFreeModule>,
        maps: Vec<GradedHomomorphism>,
    ) -> FreeResolution {
        assert_eq!(modules.len(), maps.len() + 1);
        FreeResolution { ring, generators, modules, maps }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Number of maps `L`.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// `F_i` for `0 ≤ i ≤ L`.
    pub fn module(&self, i: usize) -> &GradedFreeModule {
        &self.modules[i]
    }

    /// `φ_i` for `1 ≤ i ≤ L`.
    pub fn map(&self, i: usize) -> &GradedHomomorphism {
        &self.maps[i - 1]
    }

    pub fn maps(&self) -> &[GradedHomomorphism] {
        &self.maps
    }
}

// ---------------------------------------------------------------------------
// Division over free modules.

#[derive(PartialEq, Eq)]
struct HeapEntry {
    key: u128,
    comp: u16,
    mono: Mono,
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// Working state of a long division: the dividend as a coefficient map plus a
// max-heap of candidate lead positions with lazy deletion (stale heap entries
// are skipped when their map slot is gone; the heap is rebuilt when it grows
// far past the live set).
struct DivState<'a> {
    fp: Fp,
    ord: &'a MonoOrder,
    map: HashMap<(u16, Mono), u32, FastBuild>,
    heap: BinaryHeap<HeapEntry>,
}

impl<'a> DivState<'a> {
    fn new(fp: Fp, ord: &'a MonoOrder, v: &ModuleElement) -> DivState<'a> {
        let mut st = DivState {
            fp,
            ord,
            map: HashMap::default(),
            heap: BinaryHeap::new(),
        };
        for (j, c) in v.components().iter().enumerate() {
            for &(m, a) in c.terms() {
                st.add(j as u16, m, a);
            }
        }
        st
    }

    fn add(&mut self, comp: u16, mono: Mono, delta: u32) {
        if delta == 0 {
            return;
        }
        match self.map.entry((comp, mono)) {
            Entry::Occupied(mut e) => {
                let v = self.fp.add(*e.get(), delta);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(delta);
                self.heap.push(HeapEntry {
                    key: module_key(self.ord, comp as usize, &mono),
                    comp,
                    mono,
                });
            }
        }
    }

    fn pop_lead(&mut self) -> Option<(u16, Mono, u32)> {
        if self.heap.len() > 4 * self.map.len() + 1024 {
            let ord = self.ord;
            self.heap = self
                .map
                .keys()
                .map(|&(comp, mono)| HeapEntry {
                    key: module_key(ord, comp as usize, &mono),
                    comp,
                    mono,
                })
                .collect();
        }
        while let Some(top) = self.heap.pop() {
            if let Some(&c) = self.map.get(&(top.comp, top.mono)) {
                return Some((top.comp, top.mono, c));
            }
        }
        None
    }
}

/// Long division of `v` by `gens`: returns `(quotients, remainder)` with
/// `v = Σ quotients[i]·gens[i] + remainder` and no remainder term divisible
/// by any leading term of `gens`. Against a Gröbner basis the remainder is
/// the unique normal form.
///
/// # Panics
/// Panics if the elements do not all have the same rank.
pub fn mod_divide(
    v: &ModuleElement,
    gens: &[ModuleElement],
    ord: &MonoOrder,
) -> (Vec<Poly>, ModuleElement) {
    let rank = v.rank();
    for g in gens {
        assert_eq!(g.rank(), rank, "module rank mismatch");
    }
    let ring = v
        .components()
        .first()
        .map(|p| p.ring())
        .expect("division in a rank-0 module");
    let fp = ring.fp();
    let leads: Vec<Option<(usize, Mono, u32)>> = gens.iter().map(|g| lead_of(g, ord)).collect();
    let mut st = DivState::new(fp, ord, v);
    let mut quotients: Vec<Vec<(Mono, u32)>> = vec![Vec::new(); gens.len()];
    let mut remainder: Vec<Vec<(Mono, u32)>> = vec![Vec::new(); rank];
    while let Some((comp, mono, c)) = st.pop_lead() {
        let divisor = leads.iter().position(|l| match l {
            Some((gc, gm, _)) => *gc == comp as usize && gm.divides(&mono),
            None => false,
        });
        match divisor {
            Some(i) => {
                let (_, gm, glc) = leads[i].as_ref().unwrap();
                let qm = mono.div(gm).unwrap();
                let lam = fp.mul(c, fp.inv(*glc));
                quotients[i].push((qm, lam));
                let neg = fp.neg(lam);
                for (j, g) in gens[i].components().iter().enumerate() {
                    for &(tm, tc) in g.terms() {
                        st.add(j as u16, qm.mul(&tm), fp.mul(neg, tc));
                    }
                }
            }
            None => {
                remainder[comp as usize].push((mono, c));
                st.map.remove(&(comp, mono));
            }
        }
    }
    let q = quotients.into_iter().map(|t| Poly::from_terms(ring, t)).collect();
    let r = remainder.into_iter().map(|t| Poly::from_terms(ring, t)).collect();
    (q, ModuleElement::new(r))
}

// ---------------------------------------------------------------------------
// Buchberger's algorithm with transforms and Schreyer syzygies.

// Output of the Buchberger engine over generators `g`:
//   basis      monic Gröbner basis of the submodule ⟨g⟩,
//   to_gens    basis = to_gens · g,
//   from_gens  g = from_gens · basis,
//   syzygies   rows `σ` over basis indices with `σ · basis = 0`; together
//              with the tautological rows `I − from_gens·to_gens` (mapped
//              through to_gens) they generate all syzygies of `g`.
pub(crate) struct GbData {
    pub basis: Vec<ModuleElement>,
    pub to_gens: Vec<Vec<Poly>>,
    pub from_gens: Vec<Vec<Poly>>,
    pub syzygies: Vec<Vec<Poly>>,
}

fn row_scale(row: &[Poly], c: u32) -> Vec<Poly> {
    row.iter().map(|p| p.scale(c)).collect()
}

fn row_sub_scaled_mono(dst: &mut [Poly], src: &[Poly], m: &Mono, c: u32) {
    if c == 0 {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.sub(&s.mul_term(m, c));
        }
    }
}

fn row_sub_scaled_poly(dst: &mut [Poly], src: &[Poly], q: &Poly) {
    if q.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.sub(&q.mul(s));
        }
    }
}

// `twists` gives the ambient degrees used only for S-pair scheduling (pass
// zeros when no grading is relevant); `want_syzygies` forces every S-pair to
// be reduced (no coprimality skip) and records one Schreyer relation per pair.
pub(crate) fn buchberger_engine(
    gens: &[ModuleElement],
    twists: &[i64],
    ord: &MonoOrder,
    want_syzygies: bool,
    want_transforms: bool,
) -> GbData {
    let rank = gens.first().map_or(0, |g| g.rank());
    for g in gens {
        assert_eq!(g.rank(), rank, "module rank mismatch");
    }
    let ring = gens
        .iter()
        .flat_map(|g| g.components().first())
        .map(|p| p.ring())
        .next();
    let Some(ring) = ring else {
        return GbData {
            basis: Vec::new(),
            to_gens: Vec::new(),
            from_gens: vec![Vec::new(); gens.len()],
            syzygies: Vec::new(),
        };
    };
    let fp = ring.fp();
    let track = want_transforms || want_syzygies;

    let mut basis: Vec<ModuleElement> = Vec::new();
    let mut leads: Vec<(usize, Mono)> = Vec::new();
    let mut to_gens: Vec<Vec<Poly>> = Vec::new();
    let mut syzygies: Vec<Vec<(usize, Poly)>> = Vec::new();
    // Pending S-pairs ordered by (degree, lcm key, indices): the normal
    // selection strategy with a deterministic tie-break.
    let mut pairs: BTreeSet<(i64, u128, u32, u32)> = BTreeSet::new();

    let push_element = |elem: ModuleElement,
                            expr: Vec<Poly>,
                            basis: &mut Vec<ModuleElement>,
                            leads: &mut Vec<(usize, Mono)>,
                            to_gens: &mut Vec<Vec<Poly>>,
                            pairs: &mut BTreeSet<(i64, u128, u32, u32)>| {
        let (comp, mono, lc) = lead_of(&elem, ord).expect("nonzero element");
        let inv = fp.inv(lc);
        let elem = elem.scale(inv);
        let n = basis.len();
        for (i, (lcomp, lmono)) in leads.iter().enumerate() {
            if *lcomp == comp {
                let lcm = lmono.lcm(&mono);
                let deg = lcm.deg() as i64 + twists.get(comp).copied().unwrap_or(0);
                pairs.insert((deg, module_key(ord, comp, &lcm), i as u32, n as u32));
            }
        }
        basis.push(elem);
        leads.push((comp, mono));
        if track {
            to_gens.push(row_scale(&expr, inv));
        }
    };

    for (idx, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut expr = Vec::new();
        if track {
            expr = vec![Poly::zero(ring); gens.len()];
            expr[idx] = Poly::one(ring);
        }
        push_element(g.clone(), expr, &mut basis, &mut leads, &mut to_gens, &mut pairs);
    }

    while let Some((_, _, a, b)) = pairs.pop_first() {
        let (a, b) = (a as usize, b as usize);
        let (_, ma) = &leads[a];
        let (_, mb) = &leads[b];
        if !want_syzygies && rank == 1 && ma.coprime(mb) {
            // Coprime leading monomials in an ideal: the S-pair reduces to
            // zero (only valid in rank one, where there are no components).
            continue;
        }
        let lcm = ma.lcm(mb);
        let qa = lcm.div(ma).unwrap();
        let qb = lcm.div(mb).unwrap();
        let s = basis[a].mul_term(&qa, 1).sub(&basis[b].mul_term(&qb, 1));
        let (quots, rem) = mod_divide(&s, &basis, ord);
        if want_syzygies {
            let mut syz: Vec<(usize, Poly)> = Vec::new();
            syz.push((a, Poly::monomial(ring, qa, 1)));
            syz.push((b, Poly::monomial(ring, qb, fp.neg(1))));
            for (c, q) in quots.iter().enumerate() {
                if !q.is_zero() {
                    syz.push((c, q.neg()));
                }
            }
            if let Some((_, _, rlc)) = lead_of(&rem, ord) {
                // The reduction stopped at a new basis element: close the
                // relation with it so this pair still reduces to zero.
                syz.push((basis.len(), Poly::constant(ring, fp.neg(rlc))));
            }
            syzygies.push(syz);
        }
        if !rem.is_zero() {
            let mut expr = Vec::new();
            if track {
                expr = vec![Poly::zero(ring); gens.len()];
                row_sub_scaled_mono(&mut expr, &to_gens[a], &qa, fp.neg(1));
                row_sub_scaled_mono(&mut expr, &to_gens[b], &qb, 1);
                for (c, q) in quots.iter().enumerate() {
                    row_sub_scaled_poly(&mut expr, &to_gens[c], q);
                }
            }
            push_element(rem, expr, &mut basis, &mut leads, &mut to_gens, &mut pairs);
        }
    }

    let mut from_gens = Vec::with_capacity(gens.len());
    if want_transforms {
        for g in gens {
            let (q, rem) = mod_divide(g, &basis, ord);
            assert!(rem.is_zero(), "generator does not reduce to zero against its own basis");
            from_gens.push(q);
        }
    } else {
        from_gens = vec![Vec::new(); gens.len()];
    }

    let n = basis.len();
    let dense_syz = syzygies
        .into_iter()
        .map(|sparse| {
            let mut row = vec![Poly::zero(ring); n];
            for (i, p) in sparse {
                row[i] = row[i].add(&p);
            }
            row
        })
        .collect();

    GbData { basis, to_gens, from_gens, syzygies: dense_syz }
}

/// Reduced Gröbner basis of the submodule generated by `gens`, sorted by
/// ascending leading term. The empty input gives the empty basis.
pub fn mod_buchberger(gens: &[ModuleElement], ord: &MonoOrder) -> Vec<ModuleElement> {
    let data = buchberger_engine(gens, &[], ord, false, false);
    let mut alive: Vec<bool> = vec![true; data.basis.len()];
    let leads: Vec<Option<(usize, Mono, u32)>> =
        data.basis.iter().map(|g| lead_of(g, ord)).collect();
    // Drop any element whose lead is divisible by another surviving lead.
    for i in 0..data.basis.len() {
        let (ci, mi, _) = leads[i].as_ref().unwrap();
        let redundant = (0..data.basis.len()).any(|j| {
            if j == i || !alive[j] {
                return false;
            }
            let (cj, mj, _) = leads[j].as_ref().unwrap();
            cj == ci && mj.divides(mi)
        });
        if redundant {
            alive[i] = false;
        }
    }
    let mut reduced: Vec<ModuleElement> =
        data.basis.iter().zip(&alive).filter(|(_, a)| **a).map(|(g, _)| g.clone()).collect();
    // Tail-reduce each element against the others for the unique reduced basis.
    for i in 0..reduced.len() {
        let others: Vec<ModuleElement> = reduced
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (_, rem) = mod_divide(&reduced[i], &others, ord);
        reduced[i] = rem;
    }
    reduced.sort_by_key(|g| {
        let (c, m, _) = lead_of(g, ord).unwrap();
        module_key(ord, c, &m)
    });
    reduced
}

/// Schreyer syzygies of a Gröbner basis: one generator per S-pair, together
/// generating the full syzygy module of `gb`.
///
/// # Panics
/// Panics if `gb` is not a Gröbner basis (an S-pair fails to reduce to zero).
pub fn syzygy_basis(gb: &[ModuleElement], ord: &MonoOrder) -> Vec<ModuleElement> {
    let Some(first) = gb.iter().find(|g| !g.is_zero()) else {
        return Vec::new();
    };
    let ring = first.components()[0].ring();
    let fp = ring.fp();
    let leads: Vec<Option<(usize, Mono, u32)>> = gb.iter().map(|g| lead_of(g, ord)).collect();
    let mut pairs: BTreeSet<(u128, u32, u32)> = BTreeSet::new();
    for a in 0..gb.len() {
        for b in a + 1..gb.len() {
            if let (Some((ca, ma, _)), Some((cb, mb, _))) = (&leads[a], &leads[b]) {
                if ca == cb {
                    let lcm = ma.lcm(mb);
                    pairs.insert((module_key(ord, *ca, &lcm), a as u32, b as u32));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (_, a, b) in pairs {
        let (a, b) = (a as usize, b as usize);
        let (_, ma, ca) = leads[a].as_ref().unwrap();
        let (_, mb, cb) = leads[b].as_ref().unwrap();
        let lcm = ma.lcm(mb);
        let qa = lcm.div(ma).unwrap();
        let qb = lcm.div(mb).unwrap();
        let ia = fp.inv(*ca);
        let ib = fp.inv(*cb);
        let s = gb[a].mul_term(&qa, ia).sub(&gb[b].mul_term(&qb, ib));
        let (quots, rem) = mod_divide(&s, gb, ord);
        assert!(rem.is_zero(), "syzygy_basis requires a Gröbner basis");
        let mut row = vec![Poly::zero(ring); gb.len()];
        row[a] = row[a].add(&Poly::monomial(ring, qa, ia));
        row[b] = row[b].sub(&Poly::monomial(ring, qb, ib));
        for (c, q) in quots.iter().enumerate() {
            row[c] = row[c].sub(q);
        }
        out.push(ModuleElement::new(row));
    }
    out.retain(|s| !s.is_zero());
    out
}

// Generators of the syzygy module of `gens` (not merely of its Gröbner
// basis): Schreyer relations mapped back through the transforms, plus the
// tautological rows `I − from_gens·to_gens`.
pub(crate) fn syzygies_over_generators(
    gens: &[ModuleElement],
    twists: &[i64],
    ord: &MonoOrder,
) -> Vec<ModuleElement> {
    let n = gens.len();
    if n == 0 {
        return Vec::new();
    }
    let ring = gens[0].components()[0].ring();
    let data = buchberger_engine(gens, twists, ord, true, true);
    let mut out = Vec::new();
    for syz in &data.syzygies {
        let mut row = vec![Poly::zero(ring); n];
        for (c, coeff) in syz.iter().enumerate() {
            if !coeff.is_zero() {
                for k in 0..n {
                    let t = &data.to_gens[c][k];
                    if !t.is_zero() {
                        row[k] = row[k].add(&coeff.mul(t));
                    }
                }
            }
        }
        let row = ModuleElement::new(row);
        if !row.is_zero() {
            out.push(row);
        }
    }
    for i in 0..n {
        let mut row = vec![Poly::zero(ring); n];
        row[i] = Poly::one(ring);
        for (c, q) in data.from_gens[i].iter().enumerate() {
            if !q.is_zero() {
                for k in 0..n {
                    let t = &data.to_gens[c][k];
                    if !t.is_zero() {
                        row[k] = row[k].sub(&q.mul(t));
                    }
                }
            }
        }
        let row = ModuleElement::new(row);
        if !row.is_zero() {
            out.push(row);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Resolutions.

// One matrix of the resolution under construction; the target twists live in
// the previous level.
struct RawLevel {
    src_twists: Vec<i64>,
    mat: Vec<Vec<Poly>>,
}

fn is_unit_entry(p: &Poly) -> Option<u32> {
    let t = p.terms();
    if t.len() == 1 && t[0].0.is_one() {
        Some(t[0].1)
    } else {
        None
    }
}

// Removes split summands: a unit entry at (k,l) of `new` lets row k of `new`
// and generator l of its target be cancelled by row/column operations. The
// compensating operation touches only row l of `cur`, which the complex
// property then forces to zero before deletion, so `cur` stays minimal if it
// was. Scans repeat until `new` has no unit entries.
fn minimalize_pair(new: &mut RawLevel, cur: &mut RawLevel) -> Result<()> {
    loop {
        // Row operations can zero out a whole row (a free summand mapping to
        // nothing); drop such rows so they never reach the next level.
        let mut k = 0;
        while k < new.mat.len() {
            if new.mat[k].iter().all(|e| e.is_zero()) {
                new.mat.remove(k);
                new.src_twists.remove(k);
            } else {
                k += 1;
            }
        }
        let mut found = None;
        'scan: for k in 0..new.mat.len() {
            for l in 0..new.mat[k].len() {
                if let Some(u) = is_unit_entry(&new.mat[k][l]) {
                    found = Some((k, l, u));
                    break 'scan;
                }
            }
        }
        let Some((k, l, u)) = found else {
            return Ok(());
        };
        let ring = new.mat[k][l].ring();
        let fp = ring.fp();
        let uinv = Poly::constant(ring, fp.inv(u));
        // Clear the rest of row k by column operations, compensating in `cur`
        // so the composite map is unchanged.
        for c in 0..new.mat[k].len() {
            if c == l || new.mat[k][c].is_zero() {
                continue;
            }
            let lam = new.mat[k][c].mul(&uinv);
            for j in 0..new.mat.len() {
                let delta = lam.mul(&new.mat[j][l]);
                new.mat[j][c] = new.mat[j][c].sub(&delta);
            }
            for m in 0..cur.mat[l].len() {
                let delta = lam.mul(&cur.mat[c][m]);
                cur.mat[l][m] = cur.mat[l][m].add(&delta);
            }
        }
        // Clear the rest of column l by row operations (nothing upstream to
        // compensate: the next level is not built yet).
        for j in 0..new.mat.len() {
            if j == k || new.mat[j][l].is_zero() {
                continue;
            }
            let mu = new.mat[j][l].mul(&uinv);
            for c in 0..new.mat[k].len() {
                let delta = mu.mul(&new.mat[k][c]);
                new.mat[j][c] = new.mat[j][c].sub(&delta);
            }
        }
        if cur.mat[l].iter().any(|e| !e.is_zero()) {
            return Err(Error::Internal(
                "minimalization: cancelled generator still maps somewhere nonzero".into(),
            ));
        }
        new.mat.remove(k);
        new.src_twists.remove(k);
        for row in new.mat.iter_mut() {
            row.remove(l);
        }
        cur.mat.remove(l);
        cur.src_twists.remove(l);
    }
}

/// Minimal graded free resolution of `S/⟨f⟩` under the default grevlex order.
pub fn free_resolution(f: &[Poly]) -> Result<FreeResolution> {
    let ring = validate_generators(f)?;
    free_resolution_with_order(f, &MonoOrder::grevlex(ring.nvars()))
}

pub(crate) fn validate_generators(f: &[Poly]) -> Result<Ring> {
    let Some(first) = f.first() else {
        return Err(Error::Input("at least one generator is required".into()));
    };
    let ring = first.ring();
    for (i, g) in f.iter().enumerate() {
        assert_eq!(g.ring(), ring, "ambient ring mismatch");
        if g.is_zero() {
            return Err(Error::Input(format!("generator {} is zero", i + 1)));
        }
        match g.homogeneity() {
            crate::polyring::Homogeneity::Homogeneous(0) => {
                return Err(Error::Input(format!(
                    "generator {} is a nonzero constant: the ideal is the unit ideal",
                    i + 1
                )));
            }
            crate::polyring::Homogeneity::Homogeneous(_) => {}
            _ => {
                return Err(Error::Input(format!("generator {} is not homogeneous", i + 1)));
            }
        }
    }
    Ok(ring)
}

/// As [`free_resolution`], with an explicit base monomial order.
pub fn free_resolution_with_order(f: &[Poly], ord: &MonoOrder) -> Result<FreeResolution> {
    let ring = validate_generators(f)?;
    assert_eq!(ord.nvars(), ring.nvars(), "order variable count mismatch");
    let nvars = ring.nvars();

    let mut levels: Vec<RawLevel> = Vec::new();
    levels.push(RawLevel {
        src_twists: f.iter().map(|g| g.max_deg().unwrap() as i64).collect(),
        mat: f.iter().map(|g| vec![g.clone()]).collect(),
    });

    loop {
        let (ambient_twists, gens): (Vec<i64>, Vec<ModuleElement>) = {
            let last = levels.last().unwrap();
            let ambient = if levels.len() == 1 {
                vec![0]
            } else {
                levels[levels.len() - 2].src_twists.clone()
            };
            (ambient, last.mat.iter().map(|r| ModuleElement::new(r.clone())).collect())
        };
        let syz = syzygies_over_generators(&gens, &ambient_twists, ord);
        if syz.is_empty() {
            break;
        }
        let index_module =
            GradedFreeModule::new(ring, levels.last().unwrap().src_twists.clone());
        let mut rows: Vec<(i64, ModuleElement)> = syz
            .into_iter()
            .map(|s| {
                let d = index_module
                    .element_degree(&s)
                    .expect("nonzero syzygy row");
                (d, s)
            })
            .collect();
        rows.sort_by_key(|(d, _)| *d);
        let mut new = RawLevel {
            src_twists: rows.iter().map(|(d, _)| *d).collect(),
            mat: rows.into_iter().map(|(_, s)| s.components().to_vec()).collect(),
        };
        minimalize_pair(&mut new, levels.last_mut().unwrap())?;
        if new.mat.is_empty() {
            break;
        }
        levels.push(new);
        if levels.len() > nvars {
            return Err(Error::Internal(
                "resolution exceeds the Hilbert syzygy bound".into(),
            ));
        }
    }

    let mut modules = vec![GradedFreeModule::new(ring, vec![0])];
    for lvl in &levels {
        modules.push(GradedFreeModule::new(ring, lvl.src_twists.clone()));
    }
    let mut maps = Vec::with_capacity(levels.len());
    for (i, lvl) in levels.iter().enumerate() {
        maps.push(GradedHomomorphism::new(
            modules[i + 1].clone(),
            modules[i].clone(),
            lvl.mat.clone(),
        ));
    }
    Ok(FreeResolution { ring, generators: f.to_vec(), modules, maps })
}

/// The resolution of `S/⟨f_1^p, …⟩` obtained by raising every matrix entry to
/// the `p`-th power and scaling every twist by `p`.
pub fn frobenius_resolution(res: &FreeResolution) -> FreeResolution {
    let ring = res.ring();
    let p = ring.p() as i64;
    let modules: Vec<GradedFreeModule> = res
        .modules
        .iter()
        .map(|m| {
            GradedFreeModule::new(ring, m.twists().iter().map(|d| d * p).collect())
        })
        .collect();
    let maps = res
        .maps
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mat = a
                .matrix()
                .iter()
                .map(|row| row.iter().map(|e| e.frob_twist()).collect())
                .collect();
            GradedHomomorphism::new(modules[i + 1].clone(), modules[i].clone(), mat)
        })
        .collect();
    FreeResolution {
        ring,
        generators: res.generators.iter().map(|g| g.frob_twist()).collect(),
        modules,
        maps,
    }
}

/// Lifting homomorphisms `ψ_1, …, ψ_L` with `ψ_{i-1} ∘ φ_i^{(p)} = φ_i ∘ ψ_i`
/// (as matrices: `M_{ψ_i}·M_{φ_i} = M_{φ_i^{(p)}}·M_{ψ_{i-1}}`), starting from
/// `ψ_0 = id_S`. `rp` must be the Frobenius twist of `r`.
pub fn lift_chain_map(
    rp: &FreeResolution,
    r: &FreeResolution,
) -> Result<Vec<GradedHomomorphism>> {
    lift_chain_map_with_order(rp, r, &MonoOrder::grevlex(r.ring().nvars()))
}

/// As [`lift_chain_map`], with an explicit base monomial order.
pub fn lift_chain_map_with_order(
    rp: &FreeResolution,
    r: &FreeResolution,
    ord: &MonoOrder,
) -> Result<Vec<GradedHomomorphism>> {
    let ring = r.ring();
    assert_eq!(rp.ring(), ring, "ambient ring mismatch");
    assert_eq!(rp.length(), r.length(), "resolution length mismatch");
    let p = ring.p() as i64;
    for i in 0..=r.length() {
        let scaled: Vec<i64> = r.module(i).twists().iter().map(|d| d * p).collect();
        assert_eq!(rp.module(i).twists(), scaled.as_slice(), "twists are not p-scaled");
    }

    let mut psi_prev: Vec<Vec<Poly>> = vec![vec![Poly::one(ring)]];
    let mut out = Vec::with_capacity(r.length());
    for i in 1..=r.length() {
        let phi = r.map(i);
        let phi_p = rp.map(i);
        let gens = phi.rows_as_elements();
        let data = buchberger_engine(
            &gens,
            r.module(i - 1).twists(),
            ord,
            false,
            true,
        );
        let src_rank = phi.source().rank();
        let mid_rank = phi.target().rank();
        let mut rows = Vec::with_capacity(src_rank);
        for k in 0..src_rank {
            // w = (row k of φ_i^{(p)}) · ψ_{i-1}, an element of F_{i-1}
            // known to lie in the row space of φ_i.
            let mut w = vec![Poly::zero(ring); mid_rank];
            for (j, e) in phi_p.row(k).iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for (g, t) in psi_prev[j].iter().enumerate() {
                    if !t.is_zero() {
                        w[g] = w[g].add(&e.mul(t));
                    }
                }
            }
            let w = ModuleElement::new(w);
            let (quots, rem) = mod_divide(&w, &data.basis, ord);
            if !rem.is_zero() {
                return Err(Error::Internal(format!(
                    "lifting step at level {i}: division left a nonzero remainder"
                )));
            }
            let mut row = vec![Poly::zero(ring); src_rank];
            for (c, q) in quots.iter().enumerate() {
                if !q.is_zero() {
                    for (g, t) in data.to_gens[c].iter().enumerate() {
                        if !t.is_zero() {
                            row[g] = row[g].add(&q.mul(t));
                        }
                    }
                }
            }
            rows.push(row);
        }
        let psi = GradedHomomorphism::new(
            rp.module(i).clone(),
            r.module(i).clone(),
            rows,
        );
        psi_prev = psi.matrix().to_vec();
        out.push(psi);
    }
    Ok(out)
}
