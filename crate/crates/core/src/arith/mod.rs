//! Exact coefficient rings.
//!
//! Everything downstream is generic over [`Ring`], a small trait describing
//! a commutative local ring with exact, canonical element representatives.
//! Three implementations ship:
//!
//! - [`WittRing`]: truncated Witt vectors `W(F_q)/p^N`, presented as
//!   `(Z/p^N)[t]/(m)` with a computed Frobenius lift.
//! - [`TruncPolyRing`]: `(Z/p^N)[u_1..u_k]` modulo monomials of total degree
//!   above a bound, the finite-precision stand-in for `W⟦u_1..u_k⟧`.
//! - [`RationalPolyRing`]: the same shape over `Q`, used for logarithms.

mod bigint;
mod poly;
mod rational;
mod witt;

use std::fmt;

pub use bigint::{binomial, factorial, legendre_valuation, p_adic_valuation, BigIntVal};
pub use poly::{Monomial, PolyElem, TruncPolyRing};
pub use rational::{is_p_integral, rational_to_zpn, RatPoly, RationalPolyRing};
pub use witt::{default_modulus, is_prime, WittElem, WittRing};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p^N = {p}^{n} does not fit in 62 bits")]
    PrecisionTooLarge { p: u64, n: u32 },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("extension polynomial must be monic of degree 1..=8 with residues below p")]
    BadExtension,
    #[error("extension polynomial is reducible mod p")]
    Reducible,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("Hensel lifting failed: derivative is not a unit")]
    HenselFailure,
    #[error("element is not divisible by p (residue {0})")]
    NotDivisible(String),
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("malformed element encoding: {0}")]
    Parse(String),
}

/// A commutative local ring with exact canonical representatives.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Inverse of a unit, `None` otherwise.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Membership in the declared maximal ideal.
    fn in_maximal_ideal(&self, a: &Self::Elem) -> bool;
    /// `Some(p)` when the ring is an `F_p`-algebra.
    fn char_p(&self) -> Option<u64>;
    fn render(&self, a: &Self::Elem) -> String;
    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Self::Elem, ArithError>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        !self.in_maximal_ideal(a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }
}
