//! Truncated multivariate power series.
//!
//! A [`TruncSeries`] is a sparse map from exponent tuples to nonzero
//! coefficients, truncated at a total-degree bound `D`. Iteration order is
//! lexicographic on exponents, so rendering and serialization are stable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ArithError, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series have different rings, variables or degree bounds")]
    ContextMismatch,
    #[error("substituted series {0} has a nonzero constant term")]
    NonzeroConstantTerm(usize),
    #[error("linear coefficient is not a unit")]
    NonUnitLinearCoefficient,
    #[error("series reduces to zero modulo the maximal ideal at this truncation")]
    ResidueZero,
    #[error("distinguished degree exceeds the truncation bound")]
    DegreeOverflow,
    #[error("iteration did not terminate")]
    NotConverged,
    #[error("expected a one-variable series")]
    NotUnivariate,
    #[error("malformed series: {0}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, PartialEq)]
pub struct TruncSeries<R: Ring> {
    ring: R,
    vars: Vec<String>,
    bound: u32,
    terms: BTreeMap<Vec<u32>, R::Elem>,
}

impl<R: Ring> fmt::Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self, self.bound + 1)
    }
}

impl<R: Ring> fmt::Display for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .zip(&self.vars)
                    .filter(|(&e, _)| e > 0)
                    .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect();
                let c = self.ring.render(c);
                let c = if c.contains('+') { format!("({c})") } else { c };
                match (mono.is_empty(), c.as_str()) {
                    (true, _) => c,
                    (false, "1") => mono.join("*"),
                    (false, _) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Ring> TruncSeries<R> {
    pub fn zero(ring: &R, vars: &[&str], bound: u32) -> Self {
        Self {
            ring: ring.clone(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            bound,
            terms: BTreeMap::new(),
        }
    }

    /// The zero series sharing this one's context.
    pub fn zero_like(&self) -> Self {
        Self { ring: self.ring.clone(), vars: self.vars.clone(), bound: self.bound, terms: BTreeMap::new() }
    }

    pub fn with_vars(&self, vars: &[&str]) -> Self {
        Self::zero(&self.ring, vars, self.bound)
    }

    pub fn var(ring: &R, vars: &[&str], bound: u32, i: usize) -> Self {
        let mut s = Self::zero(ring, vars, bound);
        let mut m = vec![0; vars.len()];
        m[i] = 1;
        s.set(m, ring.one());
        s
    }

    /// The `i`-th variable in this series' context.
    pub fn gen(&self, i: usize) -> Self {
        let mut s = self.zero_like();
        let mut m = vec![0; self.vars.len()];
        m[i] = 1;
        s.set(m, self.ring.one());
        s
    }

    pub fn constant(&self, c: R::Elem) -> Self {
        let mut s = self.zero_like();
        s.set(vec![0; self.vars.len()], c);
        s
    }

    pub fn monomial(&self, exps: Vec<u32>, c: R::Elem) -> Self {
        let mut s = self.zero_like();
        s.set(exps, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, R::Elem)>>(
        ring: &R,
        vars: &[&str],
        bound: u32,
        terms: I,
    ) -> Self {
        let mut s = Self::zero(ring, vars, bound);
        for (m, c) in terms {
            let prev = s.coeff(&m);
            s.set(m, ring.add(&prev, &c));
        }
        s
    }

    /// Set a coefficient, dropping zeros and out-of-range degrees.
    pub fn set(&mut self, exps: Vec<u32>, c: R::Elem) {
        assert_eq!(exps.len(), self.vars.len(), "exponent arity");
        if exps.iter().sum::<u32>() > self.bound || self.ring.is_zero(&c) {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, R::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> R::Elem {
        self.terms.get(exps).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Coefficient of `x^k` in a one-variable series.
    pub fn coeff1(&self, k: u32) -> R::Elem {
        self.coeff(&[k])
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Smallest total degree carrying a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).min()
    }

    pub fn same_context(&self, other: &Self) -> bool {
        self.ring == other.ring && self.vars == other.vars && self.bound == other.bound
    }

    fn ensure(&self, other: &Self) -> Result<(), SeriesError> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(SeriesError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.ensure(other)?;
        let mut s = self.clone();
        for (m, c) in &other.terms {
            let v = self.ring.add(&s.coeff(m), c);
            s.set(m.clone(), v);
        }
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&other.neg_series())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.ensure(other)?;
        let mut acc: BTreeMap<Vec<u32>, R::Elem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da: u32 = ma.iter().sum();
            for (mb, cb) in &other.terms {
                if da + mb.iter().sum::<u32>() > self.bound {
                    continue;
                }
                let m: Vec<u32> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let prod = self.ring.mul(ca, cb);
                let e = acc.entry(m).or_insert_with(|| self.ring.zero());
                *e = self.ring.add(e, &prod);
            }
        }
        acc.retain(|_, c| !self.ring.is_zero(c));
        Ok(Self { terms: acc, ..self.zero_like() })
    }

    pub fn neg_series(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.ring.neg(c))).collect(),
            ..self.zero_like()
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut s = self.zero_like();
        for (m, a) in &self.terms {
            s.set(m.clone(), self.ring.mul(c, a));
        }
        s
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.constant(self.ring.one());
        for _ in 0..e {
            acc = &acc * self;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Drop every term of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        Self {
            terms: self.terms.iter().filter(|(m, _)| m.iter().sum::<u32>() <= d).map(|(m, c)| (m.clone(), c.clone())).collect(),
            ..self.zero_like()
        }
    }

    /// Apply `f` to every coefficient, landing in another ring.
    pub fn map_coeffs<S: Ring, F: Fn(&R::Elem) -> S::Elem>(&self, target: &S, f: F) -> TruncSeries<S> {
        let mut s = TruncSeries::<S> {
            ring: target.clone(),
            vars: self.vars.clone(),
            bound: self.bound,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            s.set(m.clone(), f(c));
        }
        s
    }

    /// Fallible variant of [`TruncSeries::map_coeffs`].
    pub fn try_map_coeffs<S: Ring, E, F: Fn(&R::Elem) -> Result<S::Elem, E>>(
        &self,
        target: &S,
        f: F,
    ) -> Result<TruncSeries<S>, E> {
        let mut s = TruncSeries::<S> {
            ring: target.clone(),
            vars: self.vars.clone(),
            bound: self.bound,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            s.set(m.clone(), f(c)?);
        }
        Ok(s)
    }

    /// Formal composition `f(g_1, …, g_k)`; the result lives in the
    /// context of the `g_i`.
    pub fn substitute(&self, gs: &[Self]) -> Result<Self, SeriesError> {
        if gs.len() != self.vars.len() || gs.is_empty() {
            return Err(SeriesError::ContextMismatch);
        }
        for (i, g) in gs.iter().enumerate() {
            gs[0].ensure(g)?;
            if g.ring != self.ring {
                return Err(SeriesError::ContextMismatch);
            }
            if !self.ring.is_zero(&g.constant_term()) {
                return Err(SeriesError::NonzeroConstantTerm(i));
            }
        }
        let target = gs[0].zero_like();
        let maxdeg = target.bound.min(self.bound);
        // powers[i][e] = g_i^e
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(gs.len());
        for (i, g) in gs.iter().enumerate() {
            let top = self.terms.keys().map(|m| m[i]).max().unwrap_or(0).min(maxdeg);
            let mut row = vec![target.constant(self.ring.one())];
            for e in 1..=top {
                let next = &row[e as usize - 1] * g;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = target.clone();
        for (m, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match powers[i].get(e as usize) {
                    Some(pw) => term = &term * pw,
                    None => {
                        term = target.clone();
                        break;
                    }
                }
                if term.is_zero() {
                    break;
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    fn univariate(&self) -> Result<(), SeriesError> {
        if self.vars.len() == 1 {
            Ok(())
        } else {
            Err(SeriesError::NotUnivariate)
        }
    }

    /// Multiplicative inverse of a one-variable series with unit constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.ring.inv(&self.constant_term())?;
        let one = self.constant(self.ring.one());
        let m = &one - &self.scale(&c0);
        let mut acc = one.clone();
        let mut term = one;
        loop {
            term = &term * &m;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Some(acc.scale(&c0))
    }

    /// Compositional inverse of `u·x + …` with `u` a unit.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        self.univariate()?;
        if !self.ring.is_zero(&self.constant_term()) {
            return Err(SeriesError::NonzeroConstantTerm(0));
        }
        let uinv = self.ring.inv(&self.coeff1(1)).ok_or(SeriesError::NonUnitLinearCoefficient)?;
        let x = self.gen(0);
        let mut g = x.scale(&uinv);
        // each pass fixes at least one more degree
        for _ in 0..=self.bound {
            let err = &self.substitute(std::slice::from_ref(&g))? - &x;
            if err.is_zero() {
                return Ok(g);
            }
            g = &g - &err.scale(&uinv);
        }
        let err = &self.substitute(std::slice::from_ref(&g))? - &x;
        if err.is_zero() {
            Ok(g)
        } else {
            Err(SeriesError::NotConverged)
        }
    }

    /// Weierstrass preparation over a ring with nilpotent maximal ideal:
    /// returns `(unit, distinguished)` with `self = unit · distinguished`
    /// up to the bound and `distinguished` monic of the residue order.
    pub fn weierstrass_prepare(&self) -> Result<(Self, Self), SeriesError> {
        self.univariate()?;
        let d = self
            .terms
            .iter()
            .find(|(_, c)| self.ring.is_unit(c))
            .map(|(m, _)| m[0])
            .ok_or(SeriesError::ResidueZero)?;
        if d > self.bound {
            return Err(SeriesError::DegreeOverflow);
        }
        let (high, low) = self.split_at_degree(d);
        let hinv = high.inverse().ok_or(SeriesError::ResidueZero)?;
        let x_d = self.monomial(vec![d], self.ring.one());
        let mut q = self.zero_like();
        let mut r = self.zero_like();
        let mut current = x_d.clone();
        let mut steps = 0;
        while !current.is_zero() {
            steps += 1;
            if steps > 100_000 {
                return Err(SeriesError::NotConverged);
            }
            let (c_high, c_low) = current.split_at_degree(d);
            let qstep = &c_high * &hinv;
            q = &q + &qstep;
            r = &r + &c_low;
            current = (&qstep * &low).neg_series();
        }
        let distinguished = &x_d - &r;
        let unit = q.inverse().ok_or(SeriesError::ResidueZero)?;
        Ok((unit, distinguished))
    }

    /// Split a one-variable series as `x^d·high + low` with `deg low < d`.
    fn split_at_degree(&self, d: u32) -> (Self, Self) {
        let mut high = self.zero_like();
        let mut low = self.zero_like();
        for (m, c) in &self.terms {
            if m[0] >= d {
                high.terms.insert(vec![m[0] - d], c.clone());
            } else {
                low.terms.insert(m.clone(), c.clone());
            }
        }
        (high, low)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.vars,
            "D": self.bound,
            "terms": self.terms.iter().map(|(m, c)| json!([m, self.ring.elem_to_json(c)])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(ring: &R, v: &Value) -> Result<Self, SeriesError> {
        let bad = |what: &str| SeriesError::Parse(what.to_string());
        let vars: Vec<String> =
            serde_json::from_value(v.get("vars").cloned().ok_or_else(|| bad("vars"))?).map_err(|_| bad("vars"))?;
        let bound = v.get("D").and_then(Value::as_u64).ok_or_else(|| bad("D"))? as u32;
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let mut s = Self::zero(ring, &names, bound);
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("terms"))? {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term"))?;
            let m: Vec<u32> = serde_json::from_value(pair[0].clone()).map_err(|_| bad("exponents"))?;
            if m.len() != vars.len() {
                return Err(bad("exponent arity"));
            }
            let c = ring.elem_from_json(&pair[1])?;
            let prev = s.coeff(&m);
            s.set(m, ring.add(&prev, &c));
        }
        Ok(s)
    }
}

// Operator forms panic on context mismatch; use the `checked_*` methods
// for untrusted inputs.
impl<R: Ring> Add for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn add(self, rhs: Self) -> TruncSeries<R> {
        self.checked_add(rhs).expect("series context mismatch")
    }
}

impl<R: Ring> Sub for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn sub(self, rhs: Self) -> TruncSeries<R> {
        self.checked_sub(rhs).expect("series context mismatch")
    }
}

impl<R: Ring> Mul for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn mul(self, rhs: Self) -> TruncSeries<R> {
        self.checked_mul(rhs).expect("series context mismatch")
    }
}

impl<R: Ring> Neg for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn neg(self) -> TruncSeries<R> {
        self.neg_series()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::WittRing;

    fn zn(p: u64, n: u32) -> WittRing {
        WittRing::prime_field(p, n).unwrap()
    }

    fn poly1(r: &WittRing, d: u32, coeffs: &[i64]) -> TruncSeries<WittRing> {
        TruncSeries::from_terms(r, &["x"], d, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], r.int(c))))
    }

    #[test]
    fn difference_of_squares() {
        let r = zn(2, 4);
        let x = TruncSeries::var(&r, &["x", "y"], 2, 0);
        let y = x.gen(1);
        let prod = &(&x + &y) * &(&x - &y);
        assert_eq!(prod, &(&x * &x) - &(&y * &y));
    }

    #[test]
    fn square_over_z4() {
        let r = zn(2, 2);
        let f = poly1(&r, 5, &[1, 1]);
        assert_eq!(f.pow(2), poly1(&r, 5, &[1, 2, 1]));
    }

    #[test]
    fn truncation() {
        let r = zn(2, 4);
        let x = TruncSeries::var(&r, &["x"], 3, 0);
        assert!((&x.pow(3) * &x).is_zero());
    }

    #[test]
    fn substitution() {
        let r = zn(2, 6);
        let f = poly1(&r, 4, &[0, 1, 1]);
        assert_eq!(f.substitute(&[f.clone()]).unwrap(), poly1(&r, 4, &[0, 1, 2, 2, 1]));
        let x = TruncSeries::var(&r, &["x", "y"], 4, 0);
        let y = x.gen(1);
        let sq = poly1(&r, 4, &[0, 0, 1]);
        let two = r.int(2);
        assert_eq!(sq.substitute(&[&x + &y]).unwrap(), &(&(&x * &x) + &(&y * &y)) + &(&x * &y).scale(&two));
        let c = poly1(&r, 4, &[1, 1]);
        assert_eq!(f.substitute(&[c]).unwrap_err(), SeriesError::NonzeroConstantTerm(0));
    }

    #[test]
    fn reversion_examples() {
        let r = zn(2, 3);
        let f = poly1(&r, 5, &[0, 1, 1]);
        assert_eq!(f.reversion().unwrap(), poly1(&r, 5, &[0, 1, 7, 2, 3, 6]));
        let x = poly1(&r, 5, &[0, 1]);
        assert_eq!(x.reversion().unwrap(), x);
        assert_eq!(poly1(&r, 5, &[0, 2]).reversion().unwrap_err(), SeriesError::NonUnitLinearCoefficient);
    }

    #[test]
    fn weierstrass_examples() {
        let r = zn(2, 2);
        let (u, g) = poly1(&r, 6, &[0, 2, 1]).weierstrass_prepare().unwrap();
        assert_eq!(u, poly1(&r, 6, &[1]));
        assert_eq!(g, poly1(&r, 6, &[0, 2, 1]));

        let f2 = zn(2, 1);
        let (u, g) = poly1(&f2, 6, &[0, 0, 0, 1]).weierstrass_prepare().unwrap();
        assert_eq!((u, g), (poly1(&f2, 6, &[1]), poly1(&f2, 6, &[0, 0, 0, 1])));

        let f = poly1(&r, 6, &[3, 1, 2]);
        let (u, g) = f.weierstrass_prepare().unwrap();
        assert_eq!(g, poly1(&r, 6, &[1]));
        assert_eq!(u, f);

        assert_eq!(poly1(&r, 6, &[0, 2]).weierstrass_prepare().unwrap_err(), SeriesError::ResidueZero);
    }

    #[test]
    fn weierstrass_recomposes() {
        let r = zn(3, 3);
        let f = poly1(&r, 8, &[3, 6, 1, 5, 0, 2, 1]);
        let (u, g) = f.weierstrass_prepare().unwrap();
        assert_eq!(&u * &g, f);
        assert_eq!(g.order(), Some(0));
        assert!(r.is_one(&g.coeff1(2)));
        assert!(!r.is_unit(&g.coeff1(0)) && !r.is_unit(&g.coeff1(1)));
    }

    #[test]
    fn json_round_trip() {
        let r = zn(2, 4);
        let x = TruncSeries::var(&r, &["x", "y"], 8, 0);
        let y = x.gen(1);
        let f = &(&x + &y) + &(&x * &y);
        let j = f.to_json();
        assert_eq!(j["terms"][0], json!([[0, 1], "1"]));
        assert_eq!(TruncSeries::from_json(&r, &j).unwrap(), f);
    }
}
