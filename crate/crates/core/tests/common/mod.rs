//! Shared fixtures for the integration tests: the curve models the test
//! suite keeps coming back to, built directly as term lists.

// Each test binary compiles its own copy and uses a different slice of
// these helpers.
#![allow(dead_code)]

use frobmat::frobenius::{Algorithm, ProblemSpec};
use frobmat::gfp::Fp;
use frobmat::polyring::{Mono, Poly, Ring};

pub fn ring(p: u64, nvars: usize) -> Ring {
    Ring::new(p, nvars).unwrap()
}

/// `(p-1)! / (i! j! k!)` mod `p` for `i+j+k = p-1`: every factorial involved
/// is invertible.
pub fn multinomial_mod(p: u64, parts: [u32; 3]) -> u32 {
    let fp = Fp::new(p).unwrap();
    let fact = |n: u32| (1..=n).fold(1u32, |acc, m| fp.mul(acc, m % p as u32));
    let denom = parts.iter().fold(1u32, |acc, &n| fp.mul(acc, fact(n)));
    fp.mul(fact(parts.iter().sum()), fp.inv(denom))
}

pub fn poly(r: Ring, terms: &[(i64, &[u16])]) -> Poly {
    Poly::from_terms(
        r,
        terms
            .iter()
            .map(|&(c, e)| (Mono::from_exps(e), r.fp().reduce_signed(c)))
            .collect(),
    )
}

/// The genus-2 modular curve of level 23, normalized in P⁴ with coordinates
/// (X0, X1, X2, X3, Y): one quadric in Y over the twisted cubic relations.
pub fn x0_23(p: u64, algorithm: Algorithm) -> ProblemSpec {
    let r = ring(p, 5);
    let f1 = poly(
        r,
        &[
            (1, &[0, 0, 0, 0, 2]),
            (-1, &[0, 0, 0, 1, 1]),
            (-1, &[0, 1, 0, 0, 1]),
            (-1, &[1, 0, 0, 0, 1]),
            (2, &[0, 0, 1, 1, 0]),
            (3, &[0, 2, 0, 0, 0]),
            (-2, &[1, 1, 0, 0, 0]),
            (2, &[2, 0, 0, 0, 0]),
        ],
    );
    let f2 = poly(r, &[(1, &[0, 2, 0, 0, 0]), (-1, &[1, 0, 1, 0, 0])]);
    let f3 = poly(r, &[(1, &[0, 0, 2, 0, 0]), (-1, &[0, 1, 0, 1, 0])]);
    let f4 = poly(r, &[(1, &[1, 0, 0, 1, 0]), (-1, &[0, 1, 1, 0, 0])]);
    ProblemSpec::new(vec![f1, f2, f3, f4], 1, algorithm).unwrap()
}

/// The affine hyperelliptic data of the same curve, `y² + h(x)y = k(x)`,
/// for the independent Cartier–Manin cross-check.
pub const X0_23_H: [i64; 4] = [-1, -1, 0, -1];
pub const X0_23_K: [i64; 6] = [-2, 2, -3, 0, 0, -2];

/// The genus-5 modular curve of level 67: three quadrics in P⁴ with
/// coordinates (x, y, z, v, w).
pub fn x0_67(p: u64, algorithm: Algorithm) -> ProblemSpec {
    let r = ring(p, 5);
    let f = poly(
        r,
        &[
            (5, &[0, 0, 1, 1, 0]),
            (-2, &[1, 0, 0, 0, 1]),
            (-3, &[0, 1, 0, 0, 1]),
            (1, &[0, 0, 1, 0, 1]),
        ],
    );
    let g = poly(
        r,
        &[
            (10, &[0, 0, 0, 2, 0]),
            (5, &[0, 0, 0, 1, 1]),
            (-5, &[0, 0, 0, 0, 2]),
            (4, &[2, 0, 0, 0, 0]),
            (-10, &[1, 1, 0, 0, 0]),
            (-2, &[0, 2, 0, 0, 0]),
            (-35, &[0, 1, 1, 0, 0]),
            (-12, &[0, 0, 2, 0, 0]),
        ],
    );
    let h = poly(
        r,
        &[
            (15, &[0, 0, 0, 2, 0]),
            (-5, &[0, 0, 0, 1, 1]),
            (5, &[0, 0, 0, 0, 2]),
            (8, &[2, 0, 0, 0, 0]),
            (-12, &[1, 1, 0, 0, 0]),
            (-14, &[1, 0, 1, 0, 0]),
            (-11, &[0, 2, 0, 0, 0]),
            (-3, &[0, 1, 1, 0, 0]),
            (15, &[0, 0, 2, 0, 0]),
        ],
    );
    ProblemSpec::new(vec![f, g, h], 1, algorithm).unwrap()
}

/// The Fermat curve x^d + y^d + z^d in P².
pub fn fermat(d: u16, p: u64, algorithm: Algorithm) -> ProblemSpec {
    let r = ring(p, 3);
    let f = poly(r, &[(1, &[d, 0, 0]), (1, &[0, d, 0]), (1, &[0, 0, d])]);
    ProblemSpec::new(vec![f], 1, algorithm).unwrap()
}

/// The plane cubic y²z = x³ + a·xz² + b·z³.
pub fn elliptic(p: u64, a: i64, b: i64, algorithm: Algorithm) -> ProblemSpec {
    let r = ring(p, 3);
    let f = poly(
        r,
        &[(1, &[0, 2, 1]), (-1, &[3, 0, 0]), (-a, &[1, 0, 2]), (-b, &[0, 0, 3])],
    );
    ProblemSpec::new(vec![f], 1, algorithm).unwrap()
}
