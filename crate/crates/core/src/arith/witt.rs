use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{ArithError, Ring};

/// Trial division; the inputs are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_u64(base: u64, e: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// Polynomials over F_p, coefficients low-to-high.
fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let b = fp_trim(b.to_vec());
    let lead_inv = fp_inv(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * lead_inv % p;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p * p - c * bj % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // Fermat
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn fp_irreducible(poly: &[u64], p: u64) -> bool {
    let f = poly.len() - 1;
    if f <= 1 {
        return f == 1;
    }
    for d in 1..=f / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                cand.push(k % p);
                k /= p;
            }
            cand.push(1);
            if fp_rem(poly, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First irreducible monic polynomial of degree `f` over `F_p`, enumerating
/// coefficient vectors in increasing base-`p` order.
pub fn default_modulus(p: u64, f: usize) -> Option<Vec<u64>> {
    if !is_prime(p) || f == 0 || f > 8 {
        return None;
    }
    let count = p.checked_pow(f as u32)?;
    (0..count).find_map(|idx| {
        let mut cand = Vec::with_capacity(f + 1);
        let mut k = idx;
        for _ in 0..f {
            cand.push(k % p);
            k /= p;
        }
        cand.push(1);
        fp_irreducible(&cand, p).then_some(cand)
    })
}

struct Inner {
    p: u64,
    prec: u32,
    q: u64,
    /// Residue-field modulus mod p, monic, low-to-high; `None` for `Z/p^N`.
    ext: Option<Vec<u64>>,
    /// Canonical lift of `ext` to `Z/p^N` (same digits).
    lift: Vec<u64>,
    /// Coordinates of the Frobenius lift of the generator `t`.
    frob_t: Vec<u64>,
}

/// `W(F_{p^f}) / p^N`, presented as `(Z/p^N)[t]/(m)`.
#[derive(Clone)]
pub struct WittRing(Arc<Inner>);

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.prec == other.0.prec && self.0.ext == other.0.ext)
    }
}

impl Eq for WittRing {}

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.ext {
            None => write!(f, "Z/{}^{}", self.0.p, self.0.prec),
            Some(e) => write!(f, "W(F_{}^{})/p^{} ext={:?}", self.0.p, e.len() - 1, self.0.prec, e),
        }
    }
}

impl WittRing {
    pub fn new(p: u64, prec: u32, ext: Option<Vec<u64>>) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if prec == 0 {
            return Err(ArithError::ZeroPrecision);
        }
        let q = pow_u64(p, prec)
            .filter(|&q| q < (1u64 << 62))
            .ok_or(ArithError::PrecisionTooLarge { p, n: prec })?;
        // a degree-1 extension is just Z/p^N
        let ext = match ext {
            Some(e) if e.len() == 2 => {
                if e[1] != 1 || e[0] >= p {
                    return Err(ArithError::BadExtension);
                }
                None
            }
            other => other,
        };
        let (lift, frob_t) = match &ext {
            None => (vec![0, 1], vec![0]),
            Some(e) => {
                let f = e.len().checked_sub(1).ok_or(ArithError::BadExtension)?;
                if f == 0 || f > 8 || e[f] != 1 || e.iter().any(|&c| c >= p) {
                    return Err(ArithError::BadExtension);
                }
                if !fp_irreducible(e, p) {
                    return Err(ArithError::Reducible);
                }
                (e.clone(), Vec::new())
            }
        };
        let mut ring = WittRing(Arc::new(Inner { p, prec, q, ext, lift, frob_t }));
        if ring.degree() > 1 {
            let WittElem { coeffs, .. } = ring.hensel_frobenius_root()?;
            let inner = Arc::get_mut(&mut ring.0).expect("fresh ring");
            inner.frob_t = coeffs;
        }
        Ok(ring)
    }

    pub fn prime_field(p: u64, prec: u32) -> Result<Self, ArithError> {
        Self::new(p, prec, None)
    }

    /// `W(F_{p^f})/p^N` with the default modulus.
    pub fn unramified(p: u64, f: usize, prec: u32) -> Result<Self, ArithError> {
        if f == 1 {
            return Self::new(p, prec, None);
        }
        let m = default_modulus(p, f).ok_or(ArithError::BadExtension)?;
        Self::new(p, prec, Some(m))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn precision(&self) -> u32 {
        self.0.prec
    }

    /// Residue degree `f`.
    pub fn degree(&self) -> usize {
        self.0.ext.as_ref().map_or(1, |e| e.len() - 1)
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.0.q
    }

    pub fn extension(&self) -> Option<&[u64]> {
        self.0.ext.as_deref()
    }

    /// Number of elements, when it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        self.0.q.checked_pow(self.degree() as u32)
    }

    pub fn elem(&self, coeffs: &[i64]) -> WittElem {
        let f = self.degree();
        let mut c = vec![0u64; f];
        for (i, &a) in coeffs.iter().enumerate() {
            // fold higher powers of t back through the modulus
            let term = self.reduce_i64(a);
            let mono = self.t_pow(i);
            for j in 0..f {
                c[j] = self.addm(c[j], self.mulm(term, mono[j]));
            }
        }
        WittElem { ring: self.clone(), coeffs: c }
    }

    pub fn int(&self, n: i64) -> WittElem {
        let mut c = vec![0u64; self.degree()];
        c[0] = self.reduce_i64(n);
        WittElem { ring: self.clone(), coeffs: c }
    }

    /// The residue-field generator `t` (equal to `0` when `f = 1`).
    pub fn generator(&self) -> WittElem {
        let mut c = vec![0u64; self.degree()];
        if c.len() > 1 {
            c[1] = 1;
        }
        WittElem { ring: self.clone(), coeffs: c }
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<WittElem, ArithError> {
        if coeffs.len() != self.degree() || coeffs.iter().any(|&c| c >= self.0.q) {
            return Err(ArithError::Parse(format!("coefficients {coeffs:?} for {self:?}")));
        }
        Ok(WittElem { ring: self.clone(), coeffs })
    }

    /// Every element, in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<WittElem> {
        let size = self.size().expect("ring too large to enumerate");
        let f = self.degree();
        (0..size)
            .map(|mut idx| {
                let mut c = vec![0u64; f];
                for slot in c.iter_mut() {
                    *slot = idx % self.0.q;
                    idx /= self.0.q;
                }
                WittElem { ring: self.clone(), coeffs: c }
            })
            .collect()
    }

    pub fn with_precision(&self, prec: u32) -> Result<WittRing, ArithError> {
        if prec == self.0.prec {
            return Ok(self.clone());
        }
        WittRing::new(self.0.p, prec, self.0.ext.clone())
    }

    /// The residue field `F_q` as a precision-1 ring.
    pub fn residue_field(&self) -> WittRing {
        self.with_precision(1).expect("precision 1 always valid")
    }

    /// Reduce an element of a ring at precision `≥ N` into this ring.
    pub fn reduce(&self, x: &WittElem) -> Result<WittElem, ArithError> {
        if x.ring.0.p != self.0.p || x.ring.0.ext != self.0.ext || x.ring.0.prec < self.0.prec {
            return Err(ArithError::RingMismatch);
        }
        Ok(WittElem {
            ring: self.clone(),
            coeffs: x.coeffs.iter().map(|c| c % self.0.q).collect(),
        })
    }

    /// Canonical-digit lift of an element of a lower-precision ring.
    pub fn lift(&self, x: &WittElem) -> Result<WittElem, ArithError> {
        if x.ring.0.p != self.0.p || x.ring.0.ext != self.0.ext || x.ring.0.prec > self.0.prec {
            return Err(ArithError::RingMismatch);
        }
        Ok(WittElem { ring: self.clone(), coeffs: x.coeffs.clone() })
    }

    /// The Frobenius lift `σ`: the ring endomorphism fixing `Z/p^N` and
    /// sending `t` to the Hensel root of `m` congruent to `t^p`.
    pub fn frobenius(&self, x: &WittElem) -> WittElem {
        debug_assert!(x.ring == *self);
        if self.degree() == 1 {
            return x.clone();
        }
        let r = WittElem { ring: self.clone(), coeffs: self.0.frob_t.clone() };
        self.eval_coeffs(&x.coeffs, &r)
    }

    /// `σ^k` for any integer `k`, using `σ^f = 1`.
    pub fn frobenius_pow(&self, x: &WittElem, k: i64) -> WittElem {
        let f = self.degree() as i64;
        let k = k.rem_euclid(f);
        (0..k).fold(x.clone(), |acc, _| self.frobenius(&acc))
    }

    /// Exact division by `p`, landing at precision `N - 1`.
    pub fn divide_by_p(&self, x: &WittElem) -> Result<WittElem, ArithError> {
        let p = self.0.p;
        if !x.divisible_by_p() {
            let residue = WittElem {
                ring: self.residue_field(),
                coeffs: x.coeffs.iter().map(|c| c % p).collect(),
            };
            return Err(ArithError::NotDivisible(residue.to_string()));
        }
        if self.0.prec == 1 {
            return Err(ArithError::PrecisionExhausted);
        }
        let lower = self.with_precision(self.0.prec - 1)?;
        Ok(WittElem { ring: lower, coeffs: x.coeffs.iter().map(|c| c / p).collect() })
    }

    /// `v_p(x)`, `None` for zero.
    pub fn valuation(&self, x: &WittElem) -> Option<u32> {
        x.coeffs
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut v = 0;
                let mut c = c;
                while c % self.0.p == 0 {
                    c /= self.0.p;
                    v += 1;
                }
                v
            })
            .min()
    }

    /// Write `x = p^v · u` with `u` a unit; `None` for zero.
    pub fn unit_part(&self, x: &WittElem) -> Option<(u32, WittElem)> {
        let v = self.valuation(x)?;
        let pv = self.0.p.pow(v);
        Some((v, WittElem { ring: self.clone(), coeffs: x.coeffs.iter().map(|c| c / pv).collect() }))
    }

    /// Some `y` with `a·y = x`, when `a` divides `x`.
    pub fn div_exact(&self, x: &WittElem, a: &WittElem) -> Option<WittElem> {
        let Some((vx, ux)) = self.unit_part(x) else {
            return Some(self.zero());
        };
        let (va, ua) = self.unit_part(a)?;
        if va > vx {
            return None;
        }
        let y = self.mul(&self.mul(&self.p_power(vx - va), &ux), &self.inv(&ua)?);
        debug_assert_eq!(&self.mul(a, &y), x);
        Some(y)
    }

    /// `p^k` as an element.
    pub fn p_power(&self, k: u32) -> WittElem {
        if k >= self.0.prec {
            return self.zero();
        }
        self.int(self.0.p.pow(k) as i64)
    }

    pub fn to_json(&self) -> Value {
        match &self.0.ext {
            None => json!({"p": self.0.p, "N": self.0.prec}),
            Some(e) => json!({"p": self.0.p, "N": self.0.prec, "ext": e}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, ArithError> {
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| ArithError::Parse("ring.p".into()))?;
        let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| ArithError::Parse("ring.N".into()))?;
        let ext = match v.get("ext") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(
                a.iter()
                    .map(|c| c.as_u64().ok_or_else(|| ArithError::Parse("ring.ext".into())))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Some(_) => return Err(ArithError::Parse("ring.ext".into())),
        };
        WittRing::new(p, n as u32, ext)
    }

    fn reduce_i64(&self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.0.q as i128) as u64
    }

    fn addm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0.q as u128) as u64
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0.q as u128) as u64
    }

    fn t_pow(&self, i: usize) -> Vec<u64> {
        let f = self.degree();
        let mut v = vec![0u64; f];
        if f == 1 {
            v[0] = 1;
            return v;
        }
        v[0] = 1;
        for _ in 0..i {
            v = self.mul_coeffs(&v, &{
                let mut t = vec![0u64; f];
                t[1] = 1;
                t
            });
        }
        v
    }

    fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.degree();
        if f == 1 {
            return vec![self.mulm(a[0], b[0])];
        }
        let q = self.0.q as u128;
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai as u128 * bj as u128) % q;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..f {
                let sub = c * self.0.lift[j] as u128 % q;
                prod[k - f + j] = (prod[k - f + j] + q - sub) % q;
            }
        }
        prod.truncate(f);
        prod.into_iter().map(|c| c as u64).collect()
    }

    /// Evaluate `Σ c_i r^i` with integer coefficients `c_i`.
    fn eval_coeffs(&self, coeffs: &[u64], r: &WittElem) -> WittElem {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, r), &self.int(c as i64));
        }
        acc
    }

    fn hensel_frobenius_root(&self) -> Result<WittElem, ArithError> {
        let lift = &self.0.lift;
        let m_at = |x: &WittElem| self.eval_coeffs(lift, x);
        let deriv: Vec<u64> = (1..lift.len()).map(|i| self.mulm(lift[i], i as u64)).collect();
        let dm_at = |x: &WittElem| self.eval_coeffs(&deriv, x);
        let mut r = self.pow(&self.generator(), self.0.p);
        for _ in 0..64 {
            let val = m_at(&r);
            if self.is_zero(&val) {
                return Ok(r);
            }
            let d = self.inv(&dm_at(&r)).ok_or(ArithError::HenselFailure)?;
            r = self.sub(&r, &self.mul(&val, &d));
        }
        Err(ArithError::HenselFailure)
    }
}

/// An element of a [`WittRing`]: coordinates in the basis `1, t, …, t^{f-1}`,
/// each a canonical residue in `[0, p^N)`.
#[derive(Clone)]
pub struct WittElem {
    ring: WittRing,
    coeffs: Vec<u64>,
}

impl PartialEq for WittElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.ring == other.ring
    }
}

impl Eq for WittElem {}

impl std::hash::Hash for WittElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl WittElem {
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn check(&self, other: &WittElem) -> Result<(), ArithError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(ArithError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &WittElem) -> Result<WittElem, ArithError> {
        self.check(other)?;
        Ok(self.ring.add(self, other))
    }

    pub fn try_sub(&self, other: &WittElem) -> Result<WittElem, ArithError> {
        self.check(other)?;
        Ok(self.ring.sub(self, other))
    }

    pub fn try_mul(&self, other: &WittElem) -> Result<WittElem, ArithError> {
        self.check(other)?;
        Ok(self.ring.mul(self, other))
    }

    pub fn neg(&self) -> WittElem {
        self.ring.neg(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Is this element `≡ 0 mod p`?
    pub fn divisible_by_p(&self) -> bool {
        self.coeffs.iter().all(|&c| c % self.ring.0.p == 0)
    }
}

impl Ring for WittRing {
    type Elem = WittElem;

    fn zero(&self) -> WittElem {
        WittElem { ring: self.clone(), coeffs: vec![0; self.degree()] }
    }

    fn one(&self) -> WittElem {
        self.int(1)
    }

    fn from_int(&self, n: i64) -> WittElem {
        self.int(n)
    }

    fn add(&self, a: &WittElem, b: &WittElem) -> WittElem {
        debug_assert!(a.ring == *self && b.ring == *self);
        WittElem {
            ring: self.clone(),
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.addm(x, y)).collect(),
        }
    }

    fn neg(&self, a: &WittElem) -> WittElem {
        WittElem {
            ring: self.clone(),
            coeffs: a.coeffs.iter().map(|&x| if x == 0 { 0 } else { self.0.q - x }).collect(),
        }
    }

    fn mul(&self, a: &WittElem, b: &WittElem) -> WittElem {
        debug_assert!(a.ring == *self && b.ring == *self);
        WittElem { ring: self.clone(), coeffs: self.mul_coeffs(&a.coeffs, &b.coeffs) }
    }

    fn is_zero(&self, a: &WittElem) -> bool {
        a.is_zero()
    }

    fn inv(&self, a: &WittElem) -> Option<WittElem> {
        if self.in_maximal_ideal(a) {
            return None;
        }
        // a^{q-2} inverts the residue; Newton then lifts through p^N
        let qf = self.0.p.checked_pow(self.degree() as u32)?;
        let mut b = self.pow(a, qf - 2);
        let two = self.int(2);
        for _ in 0..=(self.0.prec.max(1).ilog2() + 1) {
            b = self.mul(&b, &self.sub(&two, &self.mul(a, &b)));
        }
        debug_assert!(self.is_one(&self.mul(a, &b)));
        Some(b)
    }

    fn in_maximal_ideal(&self, a: &WittElem) -> bool {
        a.divisible_by_p()
    }

    fn char_p(&self) -> Option<u64> {
        (self.0.prec == 1).then_some(self.0.p)
    }

    fn render(&self, a: &WittElem) -> String {
        a.to_string()
    }

    fn elem_to_json(&self, a: &WittElem) -> Value {
        if a.coeffs.len() == 1 {
            Value::String(a.coeffs[0].to_string())
        } else {
            Value::Array(a.coeffs.iter().map(|c| Value::String(c.to_string())).collect())
        }
    }

    fn elem_from_json(&self, v: &Value) -> Result<WittElem, ArithError> {
        let parse = |v: &Value| -> Result<i64, ArithError> {
            match v {
                Value::String(s) => s.trim().parse::<i64>().map_err(|e| ArithError::Parse(e.to_string())),
                Value::Number(n) => n.as_i64().ok_or_else(|| ArithError::Parse(n.to_string())),
                other => Err(ArithError::Parse(other.to_string())),
            }
        };
        match v {
            Value::Array(a) => {
                let c = a.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
                if c.len() > self.degree() {
                    return Err(ArithError::Parse(format!("too many coordinates for {self:?}")));
                }
                Ok(self.elem(&c))
            }
            other => Ok(self.int(parse(other)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4(prec: u32) -> WittRing {
        WittRing::new(2, prec, Some(vec![1, 1, 1])).unwrap()
    }

    #[test]
    fn integer_arithmetic_wraps() {
        let r = WittRing::prime_field(2, 4).unwrap();
        assert_eq!(r.mul(&r.int(3), &r.int(5)), r.int(15));
        assert_eq!(r.add(&r.int(8), &r.int(8)), r.int(0));
        assert_eq!(r.int(-1), r.int(15));
    }

    #[test]
    fn extension_multiplication() {
        let w = f4(2);
        let t = w.generator();
        // t^2 = -t - 1 = 3t + 3 mod 4
        assert_eq!(w.mul(&t, &t), w.elem(&[3, 3]));
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert_eq!(WittRing::prime_field(4, 2).unwrap_err(), ArithError::NotPrime(4));
        assert_eq!(WittRing::new(2, 2, Some(vec![1, 0, 1])).unwrap_err(), ArithError::Reducible);
        assert_eq!(WittRing::new(2, 0, None).unwrap_err(), ArithError::ZeroPrecision);
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = WittRing::prime_field(2, 4).unwrap().int(1);
        let b = WittRing::prime_field(2, 3).unwrap().int(1);
        assert_eq!(a.try_add(&b).unwrap_err(), ArithError::RingMismatch);
    }

    #[test]
    fn frobenius_lift_f4() {
        let w = f4(3);
        let t = w.generator();
        let st = w.frobenius(&t);
        // σ(t) ≡ t^2 mod 2 and is an exact root of t^2+t+1 mod 8
        let diff = w.sub(&st, &w.mul(&t, &t));
        assert!(diff.divisible_by_p());
        let m = w.add(&w.add(&w.mul(&st, &st), &st), &w.one());
        assert!(m.is_zero());
        assert_eq!(w.frobenius(&st), t);
        // for t^2+t+1 the other root is -1-t
        assert_eq!(st, w.elem(&[-1, -1]));
    }

    #[test]
    fn frobenius_identity_on_prime_field() {
        let w = WittRing::prime_field(2, 5).unwrap();
        for x in w.elements() {
            assert_eq!(w.frobenius(&x), x);
        }
    }

    #[test]
    fn frobenius_is_homomorphism_exhaustively() {
        let w = f4(2);
        let els = w.elements();
        for a in &els {
            let sa = w.frobenius(a);
            assert!(w.sub(&sa, &w.pow(a, 2)).divisible_by_p());
            assert_eq!(w.frobenius_pow(a, 2), *a);
            for b in &els {
                assert_eq!(w.frobenius(&w.mul(a, b)), w.mul(&sa, &w.frobenius(b)));
                assert_eq!(w.frobenius(&w.add(a, b)), w.add(&sa, &w.frobenius(b)));
            }
        }
    }

    #[test]
    fn division_by_p() {
        let r = WittRing::prime_field(2, 4).unwrap();
        let q = r.divide_by_p(&r.int(6)).unwrap();
        assert_eq!(q.ring().precision(), 3);
        assert_eq!(q.coeffs(), &[3]);
        assert_eq!(r.divide_by_p(&r.int(3)).unwrap_err(), ArithError::NotDivisible("1".into()));
        let w = f4(4);
        let x = w.divide_by_p(&w.elem(&[2, 2])).unwrap();
        assert_eq!(x.coeffs(), &[1, 1]);
    }

    #[test]
    fn inverses() {
        let w = WittRing::new(3, 3, Some(vec![2, 2, 1])).unwrap();
        for a in w.elements().into_iter().take(300) {
            match w.inv(&a) {
                Some(b) => assert!(w.is_one(&w.mul(&a, &b))),
                None => assert!(a.divisible_by_p()),
            }
        }
    }

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2), Some(vec![1, 1, 1]));
        assert_eq!(default_modulus(2, 3), Some(vec![1, 1, 0, 1]));
        let m = default_modulus(5, 4).unwrap();
        assert!(fp_irreducible(&m, 5));
    }

    #[test]
    fn json_round_trip() {
        let w = f4(3);
        let back = WittRing::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
        let x = w.elem(&[5, 2]);
        assert_eq!(w.elem_from_json(&w.elem_to_json(&x)).unwrap(), x);
    }
}
