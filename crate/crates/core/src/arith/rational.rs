use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::poly::{render_terms, Monomial, PolyElem};
use super::{ArithError, Ring, TruncPolyRing, WittElem, WittRing};

/// `Q[u_1..u_k]` modulo monomials of total degree above `bound`.
/// The maximal ideal is `(u_1, …, u_k)`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPolyRing {
    vars: usize,
    bound: u32,
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly(BTreeMap<Monomial, BigRational>);

impl RatPoly {
    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.0
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.0.iter().map(|(m, c)| (m, c.to_string()))))
    }
}

impl fmt::Debug for RationalPolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[u1..u{}]/deg>{}", self.vars, self.bound)
    }
}

/// Image of a `p`-integral rational in `Z/p^N`.
pub fn rational_to_zpn(x: &BigRational, ring: &WittRing) -> Result<u64, ArithError> {
    let q = BigInt::from(ring.modulus());
    let den = x.denom().mod_floor(&q).to_u64().unwrap_or(0);
    if den % ring.p() == 0 {
        return Err(ArithError::PrecisionExhausted);
    }
    let num = x.numer().mod_floor(&q).to_u64().expect("reduced below modulus");
    let inv = ring.inv(&ring.int(den as i64)).expect("unit denominator");
    Ok(ring.mul(&ring.int(num as i64), &inv).coeffs()[0])
}

impl RationalPolyRing {
    pub fn new(vars: usize, bound: u32) -> Self {
        Self { vars, bound }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn var(&self, i: usize) -> RatPoly {
        let mut m = vec![0; self.vars];
        m[i] = 1;
        self.monomial(m, BigRational::one())
    }

    pub fn monomial(&self, m: Monomial, c: BigRational) -> RatPoly {
        let mut t = BTreeMap::new();
        if !c.is_zero() && m.iter().sum::<u32>() <= self.bound {
            t.insert(m, c);
        }
        RatPoly(t)
    }

    pub fn scalar(&self, c: BigRational) -> RatPoly {
        self.monomial(vec![0; self.vars], c)
    }

    /// `u_i ↦ u_i^p`.
    pub fn frobenius(&self, a: &RatPoly, p: u32) -> RatPoly {
        let mut t = BTreeMap::new();
        for (m, c) in &a.0 {
            let m2: Monomial = m.iter().map(|e| e * p).collect();
            if m2.iter().sum::<u32>() <= self.bound {
                t.insert(m2, c.clone());
            }
        }
        RatPoly(t)
    }

    /// Reduce into `(Z/p^N)[u]`; fails when some coefficient is not `p`-integral.
    pub fn to_trunc(&self, a: &RatPoly, target: &TruncPolyRing) -> Result<PolyElem, ArithError> {
        let mut acc = target.zero();
        for (m, c) in &a.0 {
            let v = rational_to_zpn(c, target.base())?;
            acc = target.add(&acc, &target.monomial(m.clone(), v as i64));
        }
        Ok(acc)
    }

    /// Reduce a constant into `Z/p^N`.
    pub fn to_witt(&self, a: &RatPoly, target: &WittRing) -> Result<WittElem, ArithError> {
        let c = a.0.get(&vec![0; self.vars]).cloned().unwrap_or_else(BigRational::zero);
        Ok(target.int(rational_to_zpn(&c, target)? as i64))
    }
}

impl Ring for RationalPolyRing {
    type Elem = RatPoly;

    fn zero(&self) -> RatPoly {
        RatPoly(BTreeMap::new())
    }

    fn one(&self) -> RatPoly {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> RatPoly {
        self.scalar(BigRational::from_integer(n.into()))
    }

    fn add(&self, a: &RatPoly, b: &RatPoly) -> RatPoly {
        let mut t = a.0.clone();
        for (m, c) in &b.0 {
            let e = t.entry(m.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                t.remove(m);
            }
        }
        RatPoly(t)
    }

    fn neg(&self, a: &RatPoly) -> RatPoly {
        RatPoly(a.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    fn mul(&self, a: &RatPoly, b: &RatPoly) -> RatPoly {
        let mut t: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &a.0 {
            let da: u32 = ma.iter().sum();
            for (mb, cb) in &b.0 {
                if da + mb.iter().sum::<u32>() > self.bound {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *t.entry(m).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        t.retain(|_, c| !c.is_zero());
        RatPoly(t)
    }

    fn is_zero(&self, a: &RatPoly) -> bool {
        a.0.is_empty()
    }

    fn inv(&self, a: &RatPoly) -> Option<RatPoly> {
        let c0 = a.0.get(&vec![0; self.vars])?.recip();
        let c0 = self.scalar(c0);
        let m = self.sub(&self.one(), &self.mul(a, &c0));
        let mut acc = self.one();
        let mut term = self.one();
        loop {
            term = self.mul(&term, &m);
            if self.is_zero(&term) {
                break;
            }
            acc = self.add(&acc, &term);
        }
        Some(self.mul(&acc, &c0))
    }

    fn in_maximal_ideal(&self, a: &RatPoly) -> bool {
        !a.0.contains_key(&vec![0; self.vars])
    }

    fn char_p(&self) -> Option<u64> {
        None
    }

    fn render(&self, a: &RatPoly) -> String {
        format!("{a:?}")
    }

    fn elem_to_json(&self, a: &RatPoly) -> Value {
        Value::Array(a.0.iter().map(|(m, c)| json!([m, c.to_string()])).collect())
    }

    fn elem_from_json(&self, v: &Value) -> Result<RatPoly, ArithError> {
        let bad = || ArithError::Parse(format!("rational term list: {v}"));
        let mut acc = self.zero();
        for term in v.as_array().ok_or_else(bad)? {
            let pair = term.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let m: Monomial = serde_json::from_value(pair[0].clone()).map_err(|_| bad())?;
            let c: BigRational = pair[1].as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if m.len() != self.vars {
                return Err(bad());
            }
            acc = self.add(&acc, &self.monomial(m, c));
        }
        Ok(acc)
    }
}

/// Is `x` a `p`-adic integer?
pub fn is_p_integral(x: &BigRational, p: u64) -> bool {
    !x.denom().abs().is_multiple_of(&BigInt::from(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reduction_mod_pn() {
        let w = WittRing::prime_field(2, 3).unwrap();
        // 1/3 = 3 mod 8
        assert_eq!(rational_to_zpn(&r(1, 3), &w).unwrap(), 3);
        assert_eq!(rational_to_zpn(&r(1, 2), &w).unwrap_err(), ArithError::PrecisionExhausted);
        assert!(is_p_integral(&r(5, 9), 2));
        assert!(!is_p_integral(&r(5, 6), 2));
    }

    #[test]
    fn inverse_series() {
        let q = RationalPolyRing::new(1, 6);
        let a = q.add(&q.one(), &q.var(0));
        let b = q.inv(&a).unwrap();
        assert!(q.is_one(&q.mul(&a, &b)));
    }
}
