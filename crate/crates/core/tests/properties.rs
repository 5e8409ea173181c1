//! Randomized properties: ring laws, Frobenius identities, parser totality
//! and round-trips, resolution exactness against counting oracles, lifting
//! commutation, and linear-algebra invariants.

use frobmat::cohomo::{fp_charpoly, fp_rank, FpMatrix};
use frobmat::freemod::{free_resolution, frobenius_resolution, hom_compose, lift_chain_map};
use frobmat::gfp::Fp;
use frobmat::oracles::{brute_graded_dim, monomials_of_degree, poly_ring_dim};
use frobmat::polyparse::{parse_poly, poly_to_string, PolySource};
use frobmat::polyring::{Mono, Poly, Ring};
use proptest::prelude::*;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

fn arb_ring(max_vars: usize) -> impl Strategy<Value = Ring> {
    (0..PRIMES.len(), 1..=max_vars)
        .prop_map(|(pi, nv)| Ring::new(PRIMES[pi], nv).unwrap())
}

fn arb_poly(ring: Ring) -> impl Strategy<Value = Poly> {
    let nv = ring.nvars();
    let p = ring.p();
    proptest::collection::vec((proptest::collection::vec(0u16..4, nv), 1..p), 0..6).prop_map(
        move |terms| {
            Poly::from_terms(
                ring,
                terms.into_iter().map(|(e, c)| (Mono::from_exps(&e), c)).collect(),
            )
        },
    )
}

fn ring_and_polys(n: usize) -> impl Strategy<Value = (Ring, Vec<Poly>)> {
    arb_ring(3).prop_flat_map(move |ring| {
        (Just(ring), proptest::collection::vec(arb_poly(ring), n))
    })
}

proptest! {
    #[test]
    fn ring_laws((_, fgh) in ring_and_polys(3)) {
        let (f, g, h) = (&fgh[0], &fgh[1], &fgh[2]);
        prop_assert_eq!(f.add(g).add(h), f.add(&g.add(h)));
        prop_assert_eq!(f.add(g), g.add(f));
        prop_assert_eq!(f.mul(g), g.mul(f));
        prop_assert_eq!(f.mul(g).mul(h), f.mul(&g.mul(h)));
        prop_assert_eq!(f.mul(&g.add(h)), f.mul(g).add(&f.mul(h)));
        prop_assert!(f.add(&f.neg()).is_zero());
        prop_assert_eq!(&Poly::one(f.ring()).mul(f), f);
    }

    #[test]
    fn freshmans_dream((ring, fg) in ring_and_polys(2)) {
        let p = ring.p();
        let sum_pow = fg[0].add(&fg[1]).pow(p);
        prop_assert_eq!(sum_pow, fg[0].pow(p).add(&fg[1].pow(p)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pow_at_p_is_the_frobenius_twist((_, f) in ring_and_polys(1)) {
        let f = &f[0];
        prop_assert_eq!(f.pow(f.ring().p()), f.frob_twist());
    }

    #[test]
    fn printed_polynomials_parse_back((ring, f) in ring_and_polys(1)) {
        let names: Vec<String> =
            ["x", "y", "z"][..ring.nvars()].iter().map(|s| s.to_string()).collect();
        let printed = poly_to_string(&f[0], &names);
        let back = parse_poly(&PolySource {
            text: &printed,
            variables: &names,
            p: ring.p() as u64,
        });
        prop_assert_eq!(back.unwrap(), f[0].clone());
    }

    #[test]
    fn parser_never_panics(text in "[xyz0-9 +\\-*^()._$#@]{0,48}") {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let out = parse_poly(&PolySource { text: &text, variables: &names, p: 7 });
        if let Err(frobmat::Error::Parse { offset, .. }) = out {
            prop_assert!(offset <= text.len());
        }
    }
}

/// Nonzero homogeneous polynomials of the given degree.
fn arb_homog(ring: Ring, d: u32) -> impl Strategy<Value = Poly> {
    let monos = monomials_of_degree(ring.nvars(), d);
    let p = ring.p();
    proptest::collection::vec(0..p, monos.len())
        .prop_map(move |coeffs| {
            Poly::from_terms(
                ring,
                monos.iter().copied().zip(coeffs).filter(|&(_, c)| c != 0).collect(),
            )
        })
        .prop_filter("nonzero generator", |f| !f.is_zero())
}

fn arb_ideal() -> impl Strategy<Value = (Ring, Vec<Poly>)> {
    (0..3usize, 2..=3usize).prop_flat_map(|(pi, nv)| {
        let ring = Ring::new(PRIMES[pi], nv).unwrap();
        let gen = (1u32..=3).prop_flat_map(move |d| arb_homog(ring, d));
        (Just(ring), proptest::collection::vec(gen, 1..=2))
    })
}

fn twisted_graded_dim(nvars: usize, twist: i64, n: i64) -> usize {
    if n < twist {
        0
    } else {
        poly_ring_dim(nvars, (n - twist) as u32)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn resolutions_are_complexes_with_the_right_hilbert_function(
        (ring, gens) in arb_ideal()
    ) {
        let res = free_resolution(&gens).unwrap();
        for i in 1..res.length() {
            prop_assert!(hom_compose(res.map(i), res.map(i + 1)).is_zero_map());
        }
        // Exactness forces the alternating twist count to match the actual
        // quotient dimension in every degree.
        for n in 0..=6i64 {
            let mut chi = 0i64;
            for i in 0..=res.length() {
                let dim: usize = res
                    .module(i)
                    .twists()
                    .iter()
                    .map(|&t| twisted_graded_dim(ring.nvars(), t, n))
                    .sum();
                chi += if i % 2 == 0 { dim as i64 } else { -(dim as i64) };
            }
            let quotient = brute_graded_dim(&gens, n as u32).unwrap() as i64;
            prop_assert_eq!(chi, quotient, "degree {}", n);
        }
    }

    #[test]
    fn lifts_commute_with_the_differentials((_, gens) in arb_ideal()) {
        let res = free_resolution(&gens).unwrap();
        let twisted = frobenius_resolution(&res);
        let lifts = lift_chain_map(&twisted, &res).unwrap();
        // At level 1 the base lift is the identity on S.
        let level_one = hom_compose(res.map(1), &lifts[0]);
        prop_assert_eq!(twisted.map(1).matrix(), level_one.matrix());
        for i in 2..=res.length() {
            let via_lift = hom_compose(&lifts[i - 2], twisted.map(i));
            let via_diff = hom_compose(res.map(i), &lifts[i - 1]);
            prop_assert_eq!(via_lift.matrix(), via_diff.matrix(), "level {}", i);
        }
    }
}

fn arb_square_matrix() -> impl Strategy<Value = (FpMatrix, Vec<usize>)> {
    (0..PRIMES.len(), 1..=5usize).prop_flat_map(|(pi, n)| {
        let fp = Fp::new(PRIMES[pi]).unwrap();
        let p = fp.modulus();
        let entries = proptest::collection::vec(proptest::collection::vec(0..p, n), n);
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (entries.prop_map(move |rows| FpMatrix::from_rows(fp, rows)), perm)
    })
}

proptest! {
    #[test]
    fn charpoly_and_rank_are_similarity_invariants((m, perm) in arb_square_matrix()) {
        let n = m.rows();
        let mut conj = FpMatrix::zeros(m.fp(), n, n);
        for i in 0..n {
            for j in 0..n {
                conj.set(i, j, m.get(perm[i], perm[j]));
            }
        }
        let cp = fp_charpoly(&m);
        prop_assert_eq!(cp.len(), n + 1);
        prop_assert_eq!(cp[0], 1);
        prop_assert_eq!(&cp, &fp_charpoly(&conj));
        prop_assert_eq!(fp_rank(&m), fp_rank(&conj));
        prop_assert_eq!(fp_rank(&m), fp_rank(&m.transpose()));
    }
}
