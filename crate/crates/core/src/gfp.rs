//! Exact arithmetic in the prime field `F_p`.
//!
//! A [`Fp`] value is the field context: it carries the modulus and is passed
//! explicitly to every operation, so independent computations at different
//! primes can coexist. Field elements themselves are bare `u32` residues in
//! `[0, p)`; keeping them unwrapped is what lets the polynomial layer store
//! millions of coefficients compactly.

use crate::{Error, Result};

/// Largest admissible modulus: squaring must not overflow `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// The field `F_p`. Copyable context for all residue arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    /// Builds the field context, verifying primality by trial division
    /// (inputs are small, so this is cheap).
    pub fn new(p: u64) -> Result<Fp> {
        if p >= MAX_MODULUS {
            return Err(Error::Input(format!("modulus {p} exceeds 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::Input(format!("p must be prime, got {p}")));
        }
        Ok(Fp { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary unsigned integer.
    pub fn reduce(&self, n: u64) -> u32 {
        (n % self.p as u64) as u32
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce_signed(&self, n: i64) -> u32 {
        let m = n.rem_euclid(self.p as i64);
        m as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a^e` by binary exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc: u32 = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: `a^(p-2)`.
    ///
    /// # Panics
    /// Panics on `a = 0`; dividing by zero is a caller bug.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "division by zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn rejects_composite_and_oversized_moduli() {
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(4).is_err());
        assert!(Fp::new(91).is_err());
        assert!(Fp::new(1 << 31).is_err());
        assert!(Fp::new(2).is_ok());
        assert!(Fp::new((1 << 31) - 1).is_ok()); // 2^31 - 1 is prime
    }

    #[test]
    fn basic_ops() {
        let f5 = fp(5);
        assert_eq!(f5.add(3, 4), 2);
        let f3 = fp(3);
        assert_eq!(f3.mul(2, 2), 1);
        let f7 = fp(7);
        assert_eq!(f7.mul(0, 6), 0);
        assert_eq!(f5.sub(1, 3), 3);
        assert_eq!(f5.neg(2), 3);
        assert_eq!(f5.neg(0), 0);
    }

    #[test]
    fn inverses() {
        assert_eq!(fp(5).inv(2), 3);
        assert_eq!(fp(7).inv(1), 1);
        assert_eq!(fp(13).inv(5), 8);
        let f11 = fp(11);
        for a in 1..11 {
            assert_eq!(f11.mul(a, f11.inv(a)), 1);
        }
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn zero_has_no_inverse() {
        fp(5).inv(0);
    }

    #[test]
    fn powers() {
        assert_eq!(fp(5).pow(2, 4), 1);
        assert_eq!(fp(3).pow(2, 3), 2);
        assert_eq!(fp(11).pow(7, 0), 1);
        assert_eq!(fp(2).pow(0, 0), 1);
    }

    #[test]
    fn frobenius_fixes_every_residue() {
        for p in [2u64, 3, 5, 7, 11, 13, 17] {
            let f = fp(p);
            for a in 0..p as u32 {
                assert_eq!(f.pow(a, p), a, "a^p != a for a={a}, p={p}");
            }
        }
    }

    #[test]
    fn reduce_signed_covers_negatives() {
        let f5 = fp(5);
        assert_eq!(f5.reduce_signed(-1), 4);
        assert_eq!(f5.reduce_signed(-35), 0);
        assert_eq!(f5.reduce_signed(12), 2);
    }

    #[test]
    fn ring_laws_hold_exhaustively_for_small_p() {
        let f7 = fp(7);
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f7.add(a, b), f7.add(b, a));
                assert_eq!(f7.mul(a, b), f7.mul(b, a));
                for c in 0..7 {
                    assert_eq!(f7.add(f7.add(a, b), c), f7.add(a, f7.add(b, c)));
                    assert_eq!(f7.mul(f7.mul(a, b), c), f7.mul(a, f7.mul(b, c)));
                    assert_eq!(
                        f7.mul(a, f7.add(b, c)),
                        f7.add(f7.mul(a, b), f7.mul(a, c))
                    );
                }
            }
        }
    }
}
