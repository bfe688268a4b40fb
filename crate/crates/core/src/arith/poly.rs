use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::{ArithError, Ring, WittRing};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// `(Z/p^N)[u_1..u_k]` modulo all monomials of total degree above `bound`.
///
/// The maximal ideal is `(p, u_1, …, u_k)`, which is nilpotent, so units
/// are exactly the elements with a unit constant term.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncPolyRing {
    base: WittRing,
    vars: usize,
    bound: u32,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyElem(BTreeMap<Monomial, u64>);

impl PolyElem {
    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.0
    }

    pub fn constant(&self, vars: usize) -> u64 {
        self.0.get(&vec![0; vars]).copied().unwrap_or(0)
    }
}

impl fmt::Debug for PolyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.0.iter().map(|(m, c)| (m, c.to_string()))))
    }
}

pub(crate) fn render_terms<'a, I: Iterator<Item = (&'a Monomial, String)>>(terms: I) -> String {
    let parts: Vec<String> = terms
        .map(|(m, c)| {
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("u{}", i + 1) } else { format!("u{}^{e}", i + 1) })
                .collect();
            match (vars.is_empty(), c.as_str()) {
                (true, _) => c,
                (false, "1") => vars.join("*"),
                (false, _) => format!("{c}*{}", vars.join("*")),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Debug for TruncPolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[u1..u{}]/deg>{}", self.base, self.vars, self.bound)
    }
}

impl TruncPolyRing {
    /// `base` must be a prime-field Witt ring `Z/p^N`.
    pub fn new(base: WittRing, vars: usize, bound: u32) -> Result<Self, ArithError> {
        if base.degree() != 1 {
            return Err(ArithError::BadExtension);
        }
        Ok(Self { base, vars, bound })
    }

    pub fn base(&self) -> &WittRing {
        &self.base
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn var(&self, i: usize) -> PolyElem {
        let mut m = vec![0; self.vars];
        m[i] = 1;
        self.monomial(m, 1)
    }

    pub fn monomial(&self, m: Monomial, c: i64) -> PolyElem {
        let mut t = BTreeMap::new();
        let c = self.red(c as i128);
        if c != 0 && m.iter().sum::<u32>() <= self.bound {
            t.insert(m, c);
        }
        PolyElem(t)
    }

    /// The Frobenius lift `u_i ↦ u_i^p`, identity on coefficients.
    pub fn frobenius(&self, a: &PolyElem) -> PolyElem {
        let p = self.base.p() as u32;
        let mut t = BTreeMap::new();
        for (m, &c) in &a.0 {
            let m2: Monomial = m.iter().map(|e| e * p).collect();
            if m2.iter().sum::<u32>() <= self.bound {
                t.insert(m2, c);
            }
        }
        PolyElem(t)
    }

    fn q(&self) -> u64 {
        self.base.modulus()
    }

    fn red(&self, c: i128) -> u64 {
        c.rem_euclid(self.q() as i128) as u64
    }
}

impl Ring for TruncPolyRing {
    type Elem = PolyElem;

    fn zero(&self) -> PolyElem {
        PolyElem(BTreeMap::new())
    }

    fn one(&self) -> PolyElem {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> PolyElem {
        self.monomial(vec![0; self.vars], n)
    }

    fn add(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let mut t = a.0.clone();
        for (m, &c) in &b.0 {
            let e = t.entry(m.clone()).or_insert(0);
            *e = ((*e as u128 + c as u128) % self.q() as u128) as u64;
            if *e == 0 {
                t.remove(m);
            }
        }
        PolyElem(t)
    }

    fn neg(&self, a: &PolyElem) -> PolyElem {
        PolyElem(a.0.iter().map(|(m, &c)| (m.clone(), self.q() - c)).collect())
    }

    fn mul(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let q = self.q() as u128;
        let mut t: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, &ca) in &a.0 {
            let da: u32 = ma.iter().sum();
            for (mb, &cb) in &b.0 {
                if da + mb.iter().sum::<u32>() > self.bound {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let e = t.entry(m).or_insert(0);
                *e = ((*e as u128 + ca as u128 * cb as u128 % q) % q) as u64;
            }
        }
        t.retain(|_, c| *c != 0);
        PolyElem(t)
    }

    fn is_zero(&self, a: &PolyElem) -> bool {
        a.0.is_empty()
    }

    fn inv(&self, a: &PolyElem) -> Option<PolyElem> {
        let c0 = self.base.inv(&self.base.int(a.constant(self.vars) as i64))?;
        let c0 = self.from_int(c0.coeffs()[0] as i64);
        // a = c0^{-1}(1 - m) with m nilpotent
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

    fn in_maximal_ideal(&self, a: &PolyElem) -> bool {
        a.constant(self.vars) % self.base.p() == 0
    }

    fn char_p(&self) -> Option<u64> {
        self.base.char_p()
    }

    fn render(&self, a: &PolyElem) -> String {
        format!("{a:?}")
    }

    fn elem_to_json(&self, a: &PolyElem) -> Value {
        Value::Array(a.0.iter().map(|(m, c)| json!([m, c.to_string()])).collect())
    }

    fn elem_from_json(&self, v: &Value) -> Result<PolyElem, ArithError> {
        let bad = || ArithError::Parse(format!("polynomial term list: {v}"));
        let mut acc = self.zero();
        for term in v.as_array().ok_or_else(bad)? {
            let pair = term.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let m: Monomial = serde_json::from_value(pair[0].clone()).map_err(|_| bad())?;
            if m.len() != self.vars {
                return Err(bad());
            }
            let c: i64 = match &pair[1] {
                Value::String(s) => s.parse().map_err(|_| bad())?,
                Value::Number(n) => n.as_i64().ok_or_else(bad)?,
                _ => return Err(bad()),
            };
            acc = self.add(&acc, &self.monomial(m, c));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> TruncPolyRing {
        TruncPolyRing::new(WittRing::prime_field(2, 3).unwrap(), 2, 4).unwrap()
    }

    #[test]
    fn truncation() {
        let r = ring();
        let u = r.var(0);
        assert!(r.is_zero(&r.pow(&u, 5)));
        assert!(!r.is_zero(&r.pow(&u, 4)));
    }

    #[test]
    fn unit_inverse() {
        let r = ring();
        let a = r.add(&r.from_int(3), &r.add(&r.var(0), &r.mul(&r.var(1), &r.from_int(2))));
        let b = r.inv(&a).unwrap();
        assert!(r.is_one(&r.mul(&a, &b)));
        assert!(r.inv(&r.add(&r.from_int(2), &r.var(0))).is_none());
    }

    #[test]
    fn frobenius_is_ring_map() {
        let r = ring();
        let a = r.add(&r.var(0), &r.from_int(5));
        let b = r.add(&r.var(1), &r.var(0));
        assert_eq!(r.frobenius(&r.mul(&a, &b)), r.mul(&r.frobenius(&a), &r.frobenius(&b)));
    }

    #[test]
    fn json_round_trip() {
        let r = ring();
        let a = r.add(&r.var(0), &r.from_int(5));
        assert_eq!(r.elem_from_json(&r.elem_to_json(&a)).unwrap(), a);
    }
}
