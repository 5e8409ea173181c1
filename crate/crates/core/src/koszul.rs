//! Graded Koszul complexes, their closed-form lifting homomorphisms, and a
//! regular-sequence test.
//!
//! For generators `f_1, …, f_t` the level-`i` module has one generator
//! `e_{j_1…j_i}` per strictly increasing index tuple, twisted by the sum of
//! the generator degrees; the differential alternates signs over deleted
//! indices. When the sequence is regular this complex is the minimal free
//! resolution of `S/⟨f⟩`, and the diagonal maps `(f_{j_1}⋯f_{j_i})^{n-1}`
//! lift the entry-wise `n`-th-power complex — no division step required.

use crate::freemod::{
    validate_generators, FreeResolution, GradedFreeModule, GradedHomomorphism, ModuleElement,
    lead_of, mod_buchberger,
};
use crate::polyring::{MonoOrder, Poly, Ring};
use crate::{Error, Result};
use std::collections::HashMap;

/// A strictly increasing tuple of indices into the generator sequence,
/// naming one basis element `e_{j_1…j_i}` of a Koszul level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KoszulIndex {
    pub indices: Vec<usize>,
}

/// All `i`-element index tuples from `0..t`, ascending lexicographically.
fn combinations(t: usize, i: usize) -> Vec<KoszulIndex> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(i);
    fn rec(out: &mut Vec<KoszulIndex>, cur: &mut Vec<usize>, start: usize, t: usize, left: usize) {
        if left == 0 {
            out.push(KoszulIndex { indices: cur.clone() });
            return;
        }
        for j in start..=t - left {
            cur.push(j);
            rec(out, cur, j + 1, t, left - 1);
            cur.pop();
        }
    }
    if i <= t {
        rec(&mut out, &mut cur, 0, t, i);
    }
    out
}

/// The Koszul complex of a generator sequence: modules of rank `C(t,i)` and
/// the alternating-sign differentials, complex regardless of regularity.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    ring: Ring,
    generators: Vec<Poly>,
    bases: Vec<Vec<KoszulIndex>>,
    modules: Vec<GradedFreeModule>,
    maps: Vec<GradedHomomorphism>,
}

impl KoszulComplex {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Number of maps, equal to the number of generators.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// Basis tuples of level `i`, `0 ≤ i ≤ t`.
    pub fn basis(&self, i: usize) -> &[KoszulIndex] {
        &self.bases[i]
    }

    pub fn module(&self, i: usize) -> &GradedFreeModule {
        &self.modules[i]
    }

    /// `φ_i` for `1 ≤ i ≤ t`.
    pub fn map(&self, i: usize) -> &GradedHomomorphism {
        &self.maps[i - 1]
    }

    /// The same data packaged as a free resolution of `S/⟨f⟩`. Exact (and
    /// minimal) only when the generators form a regular sequence.
    pub fn to_resolution(&self) -> FreeResolution {
        FreeResolution::from_parts(
            self.ring,
            self.generators.clone(),
            self.modules.clone(),
            self.maps.clone(),
        )
    }
}

/// Builds the Koszul complex of homogeneous nonzero generators.
pub fn koszul_complex(f: &[Poly]) -> Result<KoszulComplex> {
    let ring = validate_generators(f)?;
    let t = f.len();
    let degs: Vec<i64> = f.iter().map(|g| g.max_deg().unwrap() as i64).collect();
    let mut bases = Vec::with_capacity(t + 1);
    let mut modules = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let basis = combinations(t, i);
        let twists: Vec<i64> = basis
            .iter()
            .map(|ix| ix.indices.iter().map(|&j| degs[j]).sum())
            .collect();
        bases.push(basis);
        modules.push(GradedFreeModule::new(ring, twists));
    }
    let mut maps = Vec::with_capacity(t);
    for i in 1..=t {
        let target_pos: HashMap<&KoszulIndex, usize> =
            bases[i - 1].iter().enumerate().map(|(p, ix)| (ix, p)).collect();
        let mut mat = Vec::with_capacity(bases[i].len());
        for ix in &bases[i] {
            let mut row = vec![Poly::zero(ring); bases[i - 1].len()];
            for (k, &j) in ix.indices.iter().enumerate() {
                let mut hatted = ix.indices.clone();
                hatted.remove(k);
                let col = target_pos[&KoszulIndex { indices: hatted }];
                let entry = if k % 2 == 0 { f[j].clone() } else { f[j].neg() };
                row[col] = entry;
            }
            mat.push(row);
        }
        maps.push(GradedHomomorphism::new(
            modules[i].clone(),
            modules[i - 1].clone(),
            mat,
        ));
    }
    Ok(KoszulComplex { ring, generators: f.to_vec(), bases, modules, maps })
}

/// The closed-form lifting maps `ψ_i = diag((f_{j_1}⋯f_{j_i})^{n-1})` from
/// the Koszul complex of `(f_1^n, …, f_t^n)` to that of `(f_1, …, f_t)`,
/// returned for levels `1..=t` (`ψ_0` is the identity on `S`).
pub fn koszul_lift(f: &[Poly], n: u32) -> Result<Vec<GradedHomomorphism>> {
    if n == 0 {
        return Err(Error::Input("lift exponent must be positive".into()));
    }
    let ring = validate_generators(f)?;
    let t = f.len();
    let degs: Vec<i64> = f.iter().map(|g| g.max_deg().unwrap() as i64).collect();
    let mut out = Vec::with_capacity(t);
    for i in 1..=t {
        let basis = combinations(t, i);
        let twists: Vec<i64> = basis
            .iter()
            .map(|ix| ix.indices.iter().map(|&j| degs[j]).sum())
            .collect();
        let source = GradedFreeModule::new(ring, twists.iter().map(|d| d * n as i64).collect());
        let target = GradedFreeModule::new(ring, twists);
        let mut mat = vec![vec![Poly::zero(ring); basis.len()]; basis.len()];
        for (d, ix) in basis.iter().enumerate() {
            let mut prod = Poly::one(ring);
            for &j in &ix.indices {
                prod = prod.mul(&f[j]);
            }
            mat[d][d] = prod.pow(n - 1);
        }
        out.push(GradedHomomorphism::new(source, target, mat));
    }
    Ok(out)
}

/// Krull dimension of `S/⟨f⟩` (the affine cone), read off a Gröbner basis:
/// the size of the largest variable subset meeting no lead-term support.
pub fn cone_dimension(f: &[Poly]) -> Result<usize> {
    let ring = validate_generators(f)?;
    let ord = MonoOrder::grevlex(ring.nvars());
    let gens: Vec<ModuleElement> = f
        .iter()
        .map(|g| ModuleElement::new(vec![g.clone()]))
        .collect();
    let gb = mod_buchberger(&gens, &ord);
    let lead_masks: Vec<u32> = gb
        .iter()
        .map(|g| {
            let (_, m, _) = lead_of(g, &ord).unwrap();
            let mut mask = 0u32;
            for v in 0..ring.nvars() {
                if m.0[v] > 0 {
                    mask |= 1 << v;
                }
            }
            mask
        })
        .collect();
    let nv = ring.nvars();
    let mut dim = 0usize;
    for subset in 0u32..(1 << nv) {
        // Independent iff no leading monomial is supported inside the subset.
        if lead_masks.iter().all(|&m| m & !subset != 0) {
            dim = dim.max(subset.count_ones() as usize);
        }
    }
    Ok(dim)
}

/// Whether homogeneous `f_1, …, f_t` form a regular sequence on `S`, decided
/// by the dimension criterion: the Krull dimension of `S/⟨f⟩` must equal
/// `(r+1) - t`. Permutation-invariant, unlike the naive element-by-element
/// definition.
pub fn is_regular_sequence(f: &[Poly], r: usize) -> Result<bool> {
    let ring = validate_generators(f)?;
    assert_eq!(ring.nvars(), r + 1, "ambient variable count mismatch");
    let t = f.len();
    if t > r + 1 {
        return Err(Error::Input(format!(
            "{t} generators can never be regular in {} variables",
            r + 1
        )));
    }
    Ok(cone_dimension(f)? == (r + 1) - t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemod::hom_compose;
    use crate::polyring::Mono;

    fn ring(p: u64, nvars: usize) -> Ring {
        Ring::new(p, nvars).unwrap()
    }

    fn poly(r: Ring, terms: &[(u32, &[u16])]) -> Poly {
        Poly::from_terms(
            r,
            terms.iter().map(|&(c, e)| (Mono::from_exps(e), c)).collect(),
        )
    }

    fn squares(r: Ring) -> Vec<Poly> {
        (0..3)
            .map(|i| {
                let mut e = [0u16; 3];
                e[i] = 2;
                poly(r, &[(1, &e)])
            })
            .collect()
    }

    #[test]
    fn single_generator_complex() {
        let r = ring(5, 2);
        let g = poly(r, &[(1, &[3, 0]), (2, &[0, 3])]);
        let k = koszul_complex(&[g.clone()]).unwrap();
        assert_eq!(k.length(), 1);
        assert_eq!(k.module(0).twists(), &[0]);
        assert_eq!(k.module(1).twists(), &[3]);
        assert_eq!(k.map(1).matrix()[0][0], g);
    }

    #[test]
    fn two_generator_signs() {
        let r = ring(7, 2);
        let f0 = poly(r, &[(1, &[1, 0])]);
        let f1 = poly(r, &[(1, &[0, 1])]);
        let k = koszul_complex(&[f0.clone(), f1.clone()]).unwrap();
        // Level-1 basis is [{0}, {1}]; e_{01} ↦ f0·e_{1} − f1·e_{0}.
        let row = &k.map(2).matrix()[0];
        assert_eq!(row[0], f1.neg());
        assert_eq!(row[1], f0);
    }

    #[test]
    fn three_quadrics_shape_and_complex_property() {
        let r = ring(7, 3);
        let k = koszul_complex(&squares(r)).unwrap();
        assert_eq!(k.module(1).twists(), &[2, 2, 2]);
        assert_eq!(k.module(2).twists(), &[4, 4, 4]);
        assert_eq!(k.module(3).twists(), &[6]);
        for i in 2..=3 {
            assert!(hom_compose(k.map(i - 1), k.map(i)).is_zero_map());
        }
    }

    #[test]
    fn complex_property_without_regularity() {
        let r = ring(5, 2);
        let x = poly(r, &[(1, &[1, 0])]);
        let xy = poly(r, &[(1, &[1, 1])]);
        let k = koszul_complex(&[x, xy]).unwrap();
        assert!(hom_compose(k.map(1), k.map(2)).is_zero_map());
    }

    #[test]
    fn lift_with_exponent_one_is_identity() {
        let r = ring(5, 3);
        let lifts = koszul_lift(&squares(r), 1).unwrap();
        for psi in &lifts {
            for (i, row) in psi.matrix().iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if i == j {
                        assert_eq!(*e, Poly::one(r));
                    } else {
                        assert!(e.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn single_generator_lift_is_power() {
        let r = ring(5, 2);
        let g = poly(r, &[(1, &[2, 0]), (3, &[0, 2])]);
        let lifts = koszul_lift(&[g.clone()], 5).unwrap();
        assert_eq!(lifts[0].matrix()[0][0], g.pow(4));
        assert!(koszul_lift(&[g], 0).is_err());
    }

    #[test]
    fn lift_commutation_for_several_exponents() {
        // ψ_{i-1} ∘ φ_i^{(n)} = φ_i ∘ ψ_i, with φ^{(n)} the Koszul complex
        // of the n-th powers.
        let r = ring(3, 3);
        let f = squares(r);
        let k = koszul_complex(&f).unwrap();
        for n in [1u32, 2, 3] {
            let fn_pow: Vec<Poly> = f.iter().map(|g| g.pow(n)).collect();
            let kn = koszul_complex(&fn_pow).unwrap();
            let lifts = koszul_lift(&f, n).unwrap();
            for i in 1..=k.length() {
                let left = hom_compose(k.map(i), &lifts[i - 1]);
                let right = if i == 1 {
                    GradedHomomorphism::new(
                        kn.map(1).source().clone(),
                        k.map(1).target().clone(),
                        kn.map(1).matrix().to_vec(),
                    )
                } else {
                    hom_compose(&lifts[i - 2], kn.map(i))
                };
                assert_eq!(left.matrix(), right.matrix(), "n={n} level {i}");
            }
        }
    }

    #[test]
    fn regularity_examples() {
        let r = ring(5, 3);
        let x = poly(r, &[(1, &[1, 0, 0])]);
        let y = poly(r, &[(1, &[0, 1, 0])]);
        let xy = poly(r, &[(1, &[1, 1, 0])]);
        assert!(is_regular_sequence(&[x.clone(), y.clone()], 2).unwrap());
        assert!(!is_regular_sequence(&[x.clone(), xy], 2).unwrap());
        assert!(is_regular_sequence(&squares(r), 2).unwrap());
        // Too many generators for the ambient dimension.
        let z = poly(r, &[(1, &[0, 0, 1])]);
        let w = poly(r, &[(1, &[2, 0, 0])]);
        assert!(is_regular_sequence(&[x, y, z, w], 2).is_err());
    }

    #[test]
    fn regularity_is_permutation_invariant() {
        let r = ring(7, 3);
        let f = vec![
            poly(r, &[(1, &[2, 0, 0]), (6, &[0, 1, 1])]),
            poly(r, &[(1, &[0, 2, 0]), (3, &[1, 0, 1])]),
            poly(r, &[(1, &[0, 0, 2])]),
        ];
        let base = is_regular_sequence(&f, 2).unwrap();
        let perms: [[usize; 3]; 5] = [
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for perm in perms {
            let g: Vec<Poly> = perm.iter().map(|&i| f[i].clone()).collect();
            assert_eq!(is_regular_sequence(&g, 2).unwrap(), base);
        }
    }
}
