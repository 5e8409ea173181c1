//! Exact computation of the Frobenius action on the coherent cohomology of a
//! projective variety over a prime field.
//!
//! Given a prime `p` and homogeneous generators of an ideal cutting out
//! `X ⊂ P^r` over `F_p`, the library computes the representation matrix, rank
//! and characteristic polynomial of the `p`-power Frobenius acting on
//! `H^q(X, O_X)`. Two pipelines are provided:
//!
//! * a general one that computes a minimal graded free resolution of the
//!   coordinate ring, lifts the Frobenius through it, and reads the action off
//!   top-degree twisted cohomology of projective space ([`frobenius::algorithm_i`]);
//! * a closed-form fast path for complete intersections built on the Koszul
//!   complex ([`frobenius::algorithm_ii`]).
//!
//! Supporting modules: [`gfp`] (prime-field arithmetic), [`polyring`] (sparse
//! multivariate polynomials), [`freemod`] (graded free modules, Gröbner bases,
//! resolutions and lifting maps), [`koszul`] (Koszul complexes and regular
//! sequences), [`cohomo`] (twisted cohomology bases and dense linear algebra
//! over `F_p`), [`oracles`] (independent classical cross-checks) and
//! [`polyparse`] (expression and problem-file parsing).

pub mod cohomo;
pub mod freemod;
pub mod frobenius;
pub mod gfp;
pub mod koszul;
pub mod oracles;
pub mod polyparse;
pub mod polyring;

use std::fmt;

/// Errors surfaced by the library.
///
/// `Input` covers bad user data (inhomogeneous generators, composite moduli,
/// unsatisfied algorithm hypotheses). `Parse` is an input error with a byte
/// position into the offending source text. `Internal` signals a broken
/// invariant inside a pipeline — a bug, never a user mistake. Contract
/// violations that can only come from caller code (mismatched ambient rings,
/// non-square matrices) panic instead of returning an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Input(String),
    Parse { offset: usize, message: String },
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::Parse { offset, message } => {
                write!(f, "parse error at byte {offset}: {message}")
            }
            Error::Internal(msg) => write!(f, "internal invariant violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
