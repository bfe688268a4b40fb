//! One-dimensional formal group laws at finite truncation.

use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ArithError, RatPoly, RationalPolyRing, Ring, TruncPolyRing, WittRing};
use crate::linalg::Matrix;
use crate::series::{SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error("coefficient ring does not have characteristic p")]
    NotCharP,
    #[error("lowest unit term of [p](x) has degree {0}, not a power of p")]
    MalformedPSeries(u32),
    #[error("axiom {axiom} fails: residual {residual}")]
    AxiomFailure { axiom: &'static str, residual: String },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}


/// Height of a formal group law read off from `[p](x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Height {
    Exact(u32),
    /// `[p](x)` has no unit coefficient below the truncation bound.
    AtLeast(u32),
}

/// Which axiom residuals are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub left_unit: String,
    pub right_unit: String,
    pub commutativity: String,
    pub associativity: String,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        [&self.left_unit, &self.right_unit, &self.commutativity, &self.associativity].iter().all(|r| r.as_str() == "0")
    }

    pub fn checks(&self) -> [(&'static str, &str); 4] {
        [
            ("left_unit", &self.left_unit),
            ("right_unit", &self.right_unit),
            ("commutativity", &self.commutativity),
            ("associativity", &self.associativity),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalGroupLaw<R: Ring> {
    law: TruncSeries<R>,
}

impl<R: Ring> FormalGroupLaw<R> {
    /// Wrap a series in `x, y` after checking the axioms.
    pub fn new(law: TruncSeries<R>) -> Result<Self, FglError> {
        if law.vars().len() != 2 {
            return Err(FglError::BadParameters("law must be a series in two variables".into()));
        }
        let g = Self { law };
        let report = g.axioms();
        if let Some((axiom, residual)) = report.checks().into_iter().find(|(_, r)| *r != "0") {
            return Err(FglError::AxiomFailure { axiom, residual: residual.to_string() });
        }
        Ok(g)
    }

    pub fn new_unchecked(law: TruncSeries<R>) -> Self {
        Self { law }
    }

    pub fn multiplicative(ring: &R, bound: u32) -> Self {
        let x = TruncSeries::var(ring, &["x", "y"], bound, 0);
        let y = x.gen(1);
        Self { law: &(&x + &y) + &(&x * &y) }
    }

    pub fn additive(ring: &R, bound: u32) -> Self {
        let x = TruncSeries::var(ring, &["x", "y"], bound, 0);
        let y = x.gen(1);
        Self { law: &x + &y }
    }

    pub fn law(&self) -> &TruncSeries<R> {
        &self.law
    }

    pub fn ring(&self) -> &R {
        self.law.ring()
    }

    pub fn bound(&self) -> u32 {
        self.law.bound()
    }

    /// The variable `x` in one-variable context.
    pub fn x(&self) -> TruncSeries<R> {
        TruncSeries::var(self.ring(), &["x"], self.bound(), 0)
    }

    /// `F(a, b)` for one-variable series with zero constant term.
    pub fn combine(&self, a: &TruncSeries<R>, b: &TruncSeries<R>) -> Result<TruncSeries<R>, SeriesError> {
        self.law.substitute(&[a.clone(), b.clone()])
    }

    /// Residuals of `F(x,0)-x`, `F(0,y)-y`, `F(x,y)-F(y,x)` and
    /// `F(F(x,y),z)-F(x,F(y,z))`, rendered; `"0"` means exact.
    pub fn axioms(&self) -> AxiomReport {
        let f = &self.law;
        let x = f.gen(0);
        let y = f.gen(1);
        let zero = f.zero_like();
        let render = |s: Result<TruncSeries<R>, SeriesError>| match s {
            Ok(s) => s.to_string(),
            Err(e) => e.to_string(),
        };
        let left_unit = render(f.substitute(&[x.clone(), zero.clone()]).map(|s| &s - &x));
        let right_unit = render(f.substitute(&[zero, y.clone()]).map(|s| &s - &y));
        let commutativity = render(f.substitute(&[y.clone(), x.clone()]).map(|s| &s - f));
        let three = TruncSeries::var(self.ring(), &["x", "y", "z"], self.bound(), 0);
        let (x3, y3, z3) = (three.clone(), three.gen(1), three.gen(2));
        let assoc = (|| -> Result<TruncSeries<R>, SeriesError> {
            let fxy = f.substitute(&[x3.clone(), y3.clone()])?;
            let fyz = f.substitute(&[y3, z3.clone()])?;
            Ok(&f.substitute(&[fxy, z3])? - &f.substitute(&[x3, fyz])?)
        })();
        AxiomReport { left_unit, right_unit, commutativity, associativity: render(assoc) }
    }

    /// The formal inverse `i(x)` with `F(x, i(x)) = 0`.
    pub fn inverse_series(&self) -> Result<TruncSeries<R>, SeriesError> {
        // i = -x - H(x, i) where H = F - x - y; each pass fixes one more degree
        let x = self.x();
        let xy = self.law.gen(0);
        let h = &(&self.law - &xy) - &self.law.gen(1);
        let mut i = x.neg_series();
        for _ in 0..=self.bound() {
            let next = &x.neg_series() - &h.substitute(&[x.clone(), i.clone()])?;
            if next == i {
                return Ok(i);
            }
            i = next;
        }
        if self.combine(&x, &i)?.is_zero() {
            Ok(i)
        } else {
            Err(SeriesError::NotConverged)
        }
    }

    /// The `n`-series `[n](x)`.
    pub fn n_series(&self, n: i64) -> Result<TruncSeries<R>, SeriesError> {
        let x = self.x();
        let base = if n < 0 { self.inverse_series()? } else { x.clone() };
        let mut acc = x.zero_like();
        // double-and-add on |n|
        let mut k = n.unsigned_abs();
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.combine(&acc, &pow)?;
            }
            k >>= 1;
            if k > 0 {
                pow = self.combine(&pow, &pow)?;
            }
        }
        Ok(acc)
    }

    /// Height from the lowest unit coefficient of `[p](x)`.
    pub fn height(&self, p: u64) -> Result<Height, FglError> {
        let ps = self.n_series(p as i64)?;
        let lowest = ps.terms().iter().find(|(_, c)| self.ring().is_unit(c)).map(|(m, _)| m[0]);
        match lowest {
            None => Ok(Height::AtLeast(self.bound().max(1).ilog(p as u32))),
            Some(d) => {
                let mut h = 0;
                let mut q = 1u64;
                while q < d as u64 {
                    q *= p;
                    h += 1;
                }
                if q == d as u64 {
                    Ok(Height::Exact(h))
                } else {
                    Err(FglError::MalformedPSeries(d))
                }
            }
        }
    }

    /// Conjugate by an invertible coordinate change `φ`:
    /// `F'(x, y) = φ(F(φ⁻¹x, φ⁻¹y))`.
    pub fn conjugate(&self, phi: &TruncSeries<R>) -> Result<Self, SeriesError> {
        let inv = phi.reversion()?;
        let xy = self.law.gen(0);
        let lift = |s: &TruncSeries<R>, v: &TruncSeries<R>| s.substitute(std::slice::from_ref(v));
        let a = lift(&inv, &xy)?;
        let b = lift(&inv, &self.law.gen(1))?;
        let inner = self.law.substitute(&[a, b])?;
        Ok(Self { law: lift(phi, &inner)? })
    }

    /// Change of coefficients along a ring map.
    pub fn map_coeffs<S: Ring, F: Fn(&R::Elem) -> S::Elem>(&self, target: &S, f: F) -> FormalGroupLaw<S> {
        FormalGroupLaw { law: self.law.map_coeffs(target, f) }
    }

    /// The relative Frobenius `x ↦ x^p` from `F` to `F^φ`.
    pub fn frobenius_isogeny(&self) -> Result<FglHom<R>, FglError> {
        self.frobenius_iterate(1)
    }

    /// `Frob^r`, with map `x^{p^r}`.
    pub fn frobenius_iterate(&self, r: u32) -> Result<FglHom<R>, FglError> {
        let p = self.ring().char_p().ok_or(FglError::NotCharP)?;
        let q = p.pow(r);
        let ring = self.ring().clone();
        let target = self.map_coeffs(&ring, |c| ring.pow(c, q));
        let map = self.x().monomial(vec![q as u32], self.ring().one());
        Ok(FglHom { source: self.clone(), target, map })
    }

    /// Weierstrass preparation of `[p](x)`: the quotient `R⟦x⟧/([p](x))`
    /// is free on `1, x, …, x^{deg g − 1}`.
    pub fn bcp_module(&self, p: u64) -> Result<BcpModule<R>, FglError> {
        let ps = self.n_series(p as i64)?;
        let (unit, distinguished) = ps.weierstrass_prepare()?;
        let rank = distinguished.terms().keys().map(|m| m[0]).max().unwrap_or(0) as usize;
        let r = self.ring();
        // x·x^i = x^{i+1}; x·x^{rank-1} = x^rank = -(lower terms of g)
        let mult_by_x = Matrix::from_fn(r, rank, rank, |i, j| {
            if j + 1 < rank {
                if i == j + 1 {
                    r.one()
                } else {
                    r.zero()
                }
            } else {
                r.neg(&distinguished.coeff1(i as u32))
            }
        });
        Ok(BcpModule { p_series: ps, unit, distinguished, rank, mult_by_x })
    }
}

impl FormalGroupLaw<WittRing> {
    pub fn to_json(&self) -> Value {
        json!({"ring": self.ring().to_json(), "F": self.law.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self, FglError> {
        let ring = WittRing::from_json(v.get("ring").ok_or_else(|| FglError::BadParameters("missing ring".into()))?)?;
        let law = TruncSeries::from_json(&ring, v.get("F").ok_or_else(|| FglError::BadParameters("missing F".into()))?)?;
        Self::new(law)
    }

    /// Reduction modulo `p`.
    pub fn residue(&self) -> Self {
        let k = self.ring().residue_field();
        self.map_coeffs(&k, |c| k.reduce(c).expect("same ring family"))
    }
}

/// A homomorphism `f` with `f(F_src(x,y)) = F_tgt(f(x), f(y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FglHom<R: Ring> {
    pub source: FormalGroupLaw<R>,
    pub target: FormalGroupLaw<R>,
    pub map: TruncSeries<R>,
}

impl<R: Ring> FglHom<R> {
    /// Residual `f(F_src) − F_tgt(f(x), f(y))`; zero iff the map is a homomorphism.
    pub fn residual(&self) -> Result<TruncSeries<R>, SeriesError> {
        let src = self.source.law();
        let lhs = self.map.substitute(std::slice::from_ref(src))?;
        let fx = self.map.substitute(&[src.gen(0)])?;
        let fy = self.map.substitute(&[src.gen(1)])?;
        let rhs = self.target.law().substitute(&[fx, fy])?;
        Ok(&lhs - &rhs)
    }

    pub fn verify(&self) -> bool {
        matches!(self.residual(), Ok(r) if r.is_zero())
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FglHom<R>) -> Result<FglHom<R>, FglError> {
        if first.target != self.source {
            return Err(FglError::BadParameters("composable homomorphisms required".into()));
        }
        Ok(FglHom {
            source: first.source.clone(),
            target: self.target.clone(),
            map: self.map.substitute(std::slice::from_ref(&first.map))?,
        })
    }
}

/// `R⟦x⟧/([p](x))` presented as a free module.
#[derive(Debug, Clone)]
pub struct BcpModule<R: Ring> {
    pub p_series: TruncSeries<R>,
    pub unit: TruncSeries<R>,
    pub distinguished: TruncSeries<R>,
    pub rank: usize,
    /// Multiplication by `x` in the basis `1, x, …, x^{rank−1}`.
    pub mult_by_x: Matrix<R>,
}

impl<R: Ring> BcpModule<R> {
    pub fn basis_names(&self) -> Vec<String> {
        (0..self.rank)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                i => format!("x^{i}"),
            })
            .collect()
    }
}

/// Hazewinkel's functional-equation law over `Q[u_1..u_{n−1}]`:
/// `log(x) = Σ b_k x^{p^k}` with `b_0 = 1` and
/// `b_k = Σ_{i=1}^{min(k,n)} v_i σ^i(b_{k−i}) / p`, `v_i = u_i`, `v_n = 1`.
fn hazewinkel_law(p: u64, n: u32, udeg: u32, bound: u32) -> Result<TruncSeries<RationalPolyRing>, FglError> {
    if n == 0 || bound < 1 {
        return Err(FglError::BadParameters("height and degree bound must be positive".into()));
    }
    let q = RationalPolyRing::new(n as usize - 1, udeg);
    let inv_p = q.scalar(BigRational::new(1.into(), p.into()));
    let v: Vec<RatPoly> = (1..=n).map(|i| if i == n { q.one() } else { q.var(i as usize - 1) }).collect();
    let mut b: Vec<RatPoly> = vec![q.one()];
    let mut k = 1u32;
    while p.checked_pow(k).is_some_and(|d| d <= bound as u64) {
        let mut bk = q.zero();
        for i in 1..=k.min(n) {
            let mut s = b[(k - i) as usize].clone();
            for _ in 0..i {
                s = q.frobenius(&s, p as u32);
            }
            bk = q.add(&bk, &q.mul(&v[i as usize - 1], &s));
        }
        b.push(q.mul(&bk, &inv_p));
        k += 1;
    }
    let log = TruncSeries::from_terms(&q, &["x"], bound, b.into_iter().enumerate().map(|(k, c)| (vec![p.pow(k as u32) as u32], c)));
    let exp = log.reversion()?;
    let xy = TruncSeries::var(&q, &["x", "y"], bound, 0);
    let lx = log.substitute(&[xy.clone()])?;
    let ly = log.substitute(&[xy.gen(1)])?;
    Ok(exp.substitute(&[&lx + &ly])?)
}

/// Honda-type law of height `n` over `Z/p^N` (no deformation parameters).
pub fn honda(p: u64, n: u32, prec: u32, bound: u32) -> Result<FormalGroupLaw<WittRing>, FglError> {
    let w = WittRing::prime_field(p, prec)?;
    let q = RationalPolyRing::new(n as usize - 1, 0);
    let law = hazewinkel_law(p, n, 0, bound)?;
    let law = law.try_map_coeffs(&w, |c| q.to_witt(c, &w))?;
    Ok(FormalGroupLaw::new_unchecked(law))
}

/// A Lubin–Tate deformation of the height-`n` Honda law over
/// `(Z/p^N)[u_1..u_{n−1}]` truncated at u-degree `udeg`.
pub fn lubin_tate(p: u64, n: u32, prec: u32, udeg: u32, bound: u32) -> Result<FormalGroupLaw<TruncPolyRing>, FglError> {
    let base = WittRing::prime_field(p, prec)?;
    let target = TruncPolyRing::new(base, n as usize - 1, udeg)?;
    let q = RationalPolyRing::new(n as usize - 1, udeg);
    let law = hazewinkel_law(p, n, udeg, bound)?;
    let law = law.try_map_coeffs(&target, |c| q.to_trunc(c, &target))?;
    Ok(FormalGroupLaw::new_unchecked(law))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(p: u64, n: u32) -> WittRing {
        WittRing::prime_field(p, n).unwrap()
    }

    fn poly1(r: &WittRing, d: u32, coeffs: &[i64]) -> TruncSeries<WittRing> {
        TruncSeries::from_terms(r, &["x"], d, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], r.int(c))))
    }

    #[test]
    fn multiplicative_series() {
        let r = zn(2, 4);
        let g = FormalGroupLaw::multiplicative(&r, 4);
        assert!(g.axioms().ok());
        assert_eq!(g.n_series(2).unwrap(), poly1(&r, 4, &[0, 2, 1]));
        assert_eq!(g.n_series(3).unwrap(), poly1(&r, 4, &[0, 3, 3, 1]));
        assert_eq!(g.n_series(0).unwrap(), poly1(&r, 4, &[]));
        assert_eq!(g.n_series(-1).unwrap(), poly1(&r, 4, &[0, 15, 1, 15, 1]));
    }

    #[test]
    fn heights() {
        let f2 = zn(2, 1);
        assert_eq!(FormalGroupLaw::multiplicative(&f2, 6).height(2).unwrap(), Height::Exact(1));
        assert_eq!(FormalGroupLaw::additive(&zn(3, 1), 10).height(3).unwrap(), Height::AtLeast(2));
        let h = honda(2, 2, 3, 8).unwrap();
        assert!(h.axioms().ok());
        assert_eq!(h.residue().height(2).unwrap(), Height::Exact(2));
        let h31 = honda(3, 1, 3, 9).unwrap().residue();
        assert_eq!(h31.height(3).unwrap(), Height::Exact(1));
    }

    #[test]
    fn lubin_tate_reduces_to_honda() {
        let lt = lubin_tate(2, 2, 3, 2, 8).unwrap();
        assert!(lt.axioms().ok());
        let f2 = zn(2, 1);
        let n = lt.ring().vars();
        let at_zero = lt.map_coeffs(&f2, |c| f2.int((c.constant(n) % 2) as i64));
        assert_eq!(at_zero, honda(2, 2, 3, 8).unwrap().residue());
        let bcp = lt.bcp_module(2).unwrap();
        assert_eq!(bcp.rank, 4);
        assert_eq!(&bcp.unit * &bcp.distinguished, bcp.p_series);
    }

    #[test]
    fn frobenius_isogenies() {
        let f2 = zn(2, 1);
        let g = FormalGroupLaw::multiplicative(&f2, 8);
        let fr = g.frobenius_isogeny().unwrap();
        assert_eq!(fr.target, g);
        assert!(fr.verify());
        let fr2 = g.frobenius_iterate(2).unwrap();
        assert!(fr2.verify());
        assert_eq!(fr2.map, fr.after(&fr).unwrap().map);
        assert_eq!(FormalGroupLaw::multiplicative(&zn(2, 3), 4).frobenius_isogeny().unwrap_err(), FglError::NotCharP);
    }

    #[test]
    fn bcp_multiplicative() {
        let r = zn(2, 3);
        let b = FormalGroupLaw::multiplicative(&r, 6).bcp_module(2).unwrap();
        assert_eq!(b.distinguished, poly1(&r, 6, &[0, 2, 1]));
        assert_eq!(b.basis_names(), vec!["1", "x"]);
        let f3 = zn(3, 1);
        assert!(matches!(
            FormalGroupLaw::additive(&f3, 6).bcp_module(3).unwrap_err(),
            FglError::Series(SeriesError::ResidueZero)
        ));
    }
}
