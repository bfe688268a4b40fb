//! The ω-twisted Z/2-graded tensor category on finite free modules.
//!
//! An object is a pair of named bases `{M⁰, M¹}`. The tensor product puts
//! `M¹⊗N¹⊗ω` in degree 0, and the interchange carries a sign exactly on
//! that summand. Structure maps are built from basis labels, so coherence
//! reduces to comparing matrices.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ArithError, Ring};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("objects live over different rings")]
    ContextMismatch,
    #[error("basis names must be distinct: {0}")]
    DuplicateBasis(String),
    #[error("too many or too large objects for exhaustive coherence")]
    SizeLimit,
    #[error("ω is not marked invertible")]
    NotInvertible,
    #[error("a symmetric object must have rank 1 (got {0}): the swap on ω⊗ω is not the identity otherwise")]
    NotRankOne(usize),
    #[error("map dimensions do not match ranks")]
    DimensionMismatch,
    #[error("label {0} has no Z-degree")]
    NotZGraded(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Basis label recording the summand of origin.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Atom(String),
    Tensor(Box<Label>, Box<Label>),
    /// `a⊗b⊗ω` from the odd⊗odd summand.
    Omega(Box<Label>),
    /// A generator of `M_n ⊗ ω^k` in a Z-graded module.
    Graded(String, i32),
}

impl Label {
    pub fn atom(s: &str) -> Self {
        Label::Atom(s.to_string())
    }

    fn tensor(a: &Label, b: &Label) -> Self {
        Label::Tensor(Box::new(a.clone()), Box::new(b.clone()))
    }

    /// Split a label of `M⊗N` into its two factors.
    fn split(&self) -> Option<(&Label, &Label)> {
        match self {
            Label::Tensor(a, b) => Some((a, b)),
            Label::Omega(inner) => inner.split(),
            _ => None,
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Tensor(a, b) => write!(f, "({a}⊗{b})"),
            Label::Omega(inner) => write!(f, "{inner}ω"),
            Label::Graded(s, n) => write!(f, "{s}[{n}]"),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct GradedObj<R: Ring> {
    ring: R,
    basis: [Vec<Label>; 2],
}

impl<R: Ring> fmt::Debug for GradedObj<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:?}, {:?}}}", self.basis[0], self.basis[1])
    }
}

impl<R: Ring> GradedObj<R> {
    pub fn new(ring: &R, even: &[&str], odd: &[&str]) -> Result<Self, GradedError> {
        Self::from_labels(ring, even.iter().map(|s| Label::atom(s)).collect(), odd.iter().map(|s| Label::atom(s)).collect())
    }

    pub fn from_labels(ring: &R, even: Vec<Label>, odd: Vec<Label>) -> Result<Self, GradedError> {
        let mut seen = std::collections::BTreeSet::new();
        for l in even.iter().chain(&odd) {
            if !seen.insert(l.clone()) {
                return Err(GradedError::DuplicateBasis(l.to_string()));
            }
        }
        Ok(Self { ring: ring.clone(), basis: [even, odd] })
    }

    /// The unit `{R, 0}`.
    pub fn unit(ring: &R) -> Self {
        Self { ring: ring.clone(), basis: [vec![Label::atom("1")], vec![]] }
    }

    /// `ω = {ω, 0}`.
    pub fn omega(ring: &R) -> Self {
        Self { ring: ring.clone(), basis: [vec![Label::atom("w")], vec![]] }
    }

    /// `ω^{1/2} = {0, R}`.
    pub fn omega_half(ring: &R) -> Self {
        Self { ring: ring.clone(), basis: [vec![], vec![Label::atom("h")]] }
    }

    /// `{R, R}`.
    pub fn even_odd(ring: &R) -> Self {
        Self { ring: ring.clone(), basis: [vec![Label::atom("e")], vec![Label::atom("o")]] }
    }

    /// The standard test set `{unit, ω, ω^{1/2}, {R,R}}`.
    pub fn standard_set(ring: &R) -> Vec<Self> {
        vec![Self::unit(ring), Self::omega(ring), Self::omega_half(ring), Self::even_odd(ring)]
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rank(&self, deg: usize) -> usize {
        self.basis[deg].len()
    }

    pub fn basis(&self, deg: usize) -> &[Label] {
        &self.basis[deg]
    }

    /// `(degree, index)` of a basis label.
    pub fn locate(&self, l: &Label) -> Option<(usize, usize)> {
        (0..2).find_map(|d| self.basis[d].iter().position(|x| x == l).map(|i| (d, i)))
    }

    fn degree_of(&self, l: &Label) -> usize {
        self.locate(l).expect("label belongs to object").0
    }

    pub fn to_json(&self) -> Value {
        let names = |d: usize| self.basis[d].iter().map(|l| l.to_string()).collect::<Vec<_>>();
        json!({"even": names(0), "odd": names(1)})
    }

    pub fn from_json(ring: &R, v: &Value) -> Result<Self, GradedError> {
        let list = |key: &str| -> Result<Vec<String>, GradedError> {
            match v.get(key) {
                None => Ok(vec![]),
                Some(x) => serde_json::from_value(x.clone()).map_err(|e| ArithError::Parse(e.to_string()).into()),
            }
        };
        let even = list("even")?;
        let odd = list("odd")?;
        Self::new(ring, &even.iter().map(String::as_str).collect::<Vec<_>>(), &odd.iter().map(String::as_str).collect::<Vec<_>>())
    }
}

/// The ω-twisted tensor product.
pub fn twisted_tensor<R: Ring>(m: &GradedObj<R>, n: &GradedObj<R>) -> Result<GradedObj<R>, GradedError> {
    if m.ring != n.ring {
        return Err(GradedError::ContextMismatch);
    }
    let pairs = |a: &[Label], b: &[Label], omega: bool| -> Vec<Label> {
        a.iter()
            .flat_map(|x| b.iter().map(move |y| Label::tensor(x, y)))
            .map(|l| if omega { Label::Omega(Box::new(l)) } else { l })
            .collect()
    };
    let mut even = pairs(&m.basis[0], &n.basis[0], false);
    even.extend(pairs(&m.basis[1], &n.basis[1], true));
    let mut odd = pairs(&m.basis[0], &n.basis[1], false);
    odd.extend(pairs(&m.basis[1], &n.basis[0], false));
    Ok(GradedObj { ring: m.ring.clone(), basis: [even, odd] })
}

fn tensor<R: Ring>(m: &GradedObj<R>, n: &GradedObj<R>) -> GradedObj<R> {
    twisted_tensor(m, n).expect("shared ring")
}

/// A degree-preserving map; `f[d]` has shape `rank(N^d) × rank(M^d)`.
#[derive(Clone, PartialEq)]
pub struct GradedMap<R: Ring> {
    pub source: GradedObj<R>,
    pub target: GradedObj<R>,
    pub f: [Matrix<R>; 2],
}

impl<R: Ring> fmt::Debug for GradedMap<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f0={:?} f1={:?}", self.f[0], self.f[1])
    }
}

impl<R: Ring> GradedMap<R> {
    pub fn new(source: &GradedObj<R>, target: &GradedObj<R>, f0: Matrix<R>, f1: Matrix<R>) -> Result<Self, GradedError> {
        for (d, m) in [&f0, &f1].into_iter().enumerate() {
            if m.rows() != target.rank(d) || m.cols() != source.rank(d) {
                return Err(GradedError::DimensionMismatch);
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), f: [f0, f1] })
    }

    pub fn identity(m: &GradedObj<R>) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            f: [Matrix::identity(&m.ring, m.rank(0)), Matrix::identity(&m.ring, m.rank(1))],
        }
    }

    /// Signed relabeling: source label `l` goes to `±target(l)`.
    fn relabel<F: Fn(&Label) -> (Label, bool)>(source: &GradedObj<R>, target: &GradedObj<R>, rule: F) -> Self {
        let r = &source.ring;
        let mut f = [Matrix::zeros(r, target.rank(0), source.rank(0)), Matrix::zeros(r, target.rank(1), source.rank(1))];
        for d in 0..2 {
            for (j, l) in source.basis[d].iter().enumerate() {
                let (t, negate) = rule(l);
                let (td, i) = target.locate(&t).expect("relabeled basis element exists");
                assert_eq!(td, d, "structure maps preserve degree");
                f[d].set(i, j, if negate { r.neg(&r.one()) } else { r.one() });
            }
        }
        Self { source: source.clone(), target: target.clone(), f }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Self) -> Self {
        assert!(first.target == self.source, "composable maps required");
        Self {
            source: first.source.clone(),
            target: self.target.clone(),
            f: [self.f[0].mul(&first.f[0]), self.f[1].mul(&first.f[1])],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == Self::identity(&self.source)
    }

    /// Flip the sign of one column of the degree-`deg` block.
    pub fn flip_column(&mut self, deg: usize, col: usize) {
        let r = self.source.ring.clone();
        for i in 0..self.f[deg].rows() {
            let v = r.neg(self.f[deg].get(i, col));
            self.f[deg].set(i, col, v);
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"f0": self.f[0].to_json(), "f1": self.f[1].to_json()})
    }
}

/// `f ⊗ g`.
pub fn tensor_maps<R: Ring>(f: &GradedMap<R>, g: &GradedMap<R>) -> GradedMap<R> {
    let src = tensor(&f.source, &g.source);
    let tgt = tensor(&f.target, &g.target);
    let r = &src.ring;
    let mut out = [Matrix::zeros(r, tgt.rank(0), src.rank(0)), Matrix::zeros(r, tgt.rank(1), src.rank(1))];
    for d in 0..2 {
        for (j, sl) in src.basis[d].iter().enumerate() {
            let (a, b) = sl.split().expect("tensor label");
            let (da, ja) = f.source.locate(a).expect("factor of source");
            let (db, jb) = g.source.locate(b).expect("factor of source");
            for (i, tl) in tgt.basis[d].iter().enumerate() {
                let (a2, b2) = tl.split().expect("tensor label");
                let (ta, ia) = f.target.locate(a2).expect("factor of target");
                let (tb, ib) = g.target.locate(b2).expect("factor of target");
                if ta != da || tb != db {
                    continue;
                }
                let v = r.mul(f.f[da].get(ia, ja), g.f[db].get(ib, jb));
                out[d].set(i, j, v);
            }
        }
    }
    GradedMap { source: src, target: tgt, f: out }
}

/// `τ: M⊗N → N⊗M`, with sign `−1` on the `M¹⊗N¹⊗ω` block.
pub fn interchange<R: Ring>(m: &GradedObj<R>, n: &GradedObj<R>) -> GradedMap<R> {
    let src = tensor(m, n);
    let tgt = tensor(n, m);
    GradedMap::relabel(&src, &tgt, |l| match l {
        Label::Tensor(a, b) => (Label::tensor(b, a), false),
        Label::Omega(inner) => {
            let (a, b) = inner.split().expect("tensor label");
            (Label::Omega(Box::new(Label::tensor(b, a))), true)
        }
        other => panic!("not a tensor label: {other}"),
    })
}

/// `α: (M⊗N)⊗P → M⊗(N⊗P)`, moving the ω factors to their new positions.
pub fn associator<R: Ring>(m: &GradedObj<R>, n: &GradedObj<R>, p: &GradedObj<R>) -> GradedMap<R> {
    let mn = tensor(m, n);
    let np = tensor(n, p);
    let src = tensor(&mn, p);
    let tgt = tensor(m, &np);
    let wrap = |l: Label, odd_odd: bool| if odd_odd { Label::Omega(Box::new(l)) } else { l };
    GradedMap::relabel(&src, &tgt, |l| {
        let (x, c) = l.split().expect("tensor label");
        let (a, b) = x.split().expect("tensor label");
        let (da, db, dc) = (m.degree_of(a), n.degree_of(b), p.degree_of(c));
        let bc = wrap(Label::tensor(b, c), db == 1 && dc == 1);
        (wrap(Label::tensor(a, &bc), da == 1 && (db + dc) % 2 == 1), false)
    })
}

/// `λ: 1⊗M → M` where the first factor must be the unit object.
pub fn left_unitor<R: Ring>(unit: &GradedObj<R>, m: &GradedObj<R>) -> GradedMap<R> {
    GradedMap::relabel(&tensor(unit, m), m, |l| (l.split().expect("tensor label").1.clone(), false))
}

/// `ρ: M⊗1 → M`.
pub fn right_unitor<R: Ring>(m: &GradedObj<R>, unit: &GradedObj<R>) -> GradedMap<R> {
    GradedMap::relabel(&tensor(m, unit), m, |l| (l.split().expect("tensor label").0.clone(), false))
}

/// A sign flip injected into one interchange map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TauMutation {
    pub left: usize,
    pub right: usize,
    pub degree: usize,
    pub column: usize,
}

/// Outcome of one diagram.
#[derive(Debug, Clone)]
pub struct DiagramCheck {
    pub name: String,
    pub ok: bool,
    /// Both composites, rendered, when they differ.
    pub witness: Option<(String, String)>,
}

#[derive(Debug, Clone, Default)]
pub struct CoherenceReport {
    pub checks: Vec<DiagramCheck>,
}

impl CoherenceReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&DiagramCheck> {
        self.checks.iter().find(|c| !c.ok)
    }

    fn record<R: Ring>(&mut self, name: String, lhs: &GradedMap<R>, rhs: &GradedMap<R>) {
        let ok = lhs == rhs;
        let witness = (!ok).then(|| (format!("{lhs:?}"), format!("{rhs:?}")));
        self.checks.push(DiagramCheck { name, ok, witness });
    }
}

struct Structure<'a, R: Ring> {
    objects: &'a [GradedObj<R>],
    mutation: Option<TauMutation>,
}

impl<R: Ring> Structure<'_, R> {
    fn tau(&self, m: &GradedObj<R>, n: &GradedObj<R>) -> GradedMap<R> {
        let mut t = interchange(m, n);
        if let Some(mu) = self.mutation {
            if *m == self.objects[mu.left] && *n == self.objects[mu.right] && mu.column < t.f[mu.degree].cols() {
                t.flip_column(mu.degree, mu.column);
            }
        }
        t
    }
}

/// Check pentagons on all ordered quadruples, triangles and `τ² = id` on all
/// pairs, and hexagons on all triples.
pub fn verify_coherence<R: Ring>(objects: &[GradedObj<R>], mutation: Option<TauMutation>) -> Result<CoherenceReport, GradedError> {
    if objects.len() > 5 || objects.iter().any(|o| o.rank(0) > 3 || o.rank(1) > 3) {
        return Err(GradedError::SizeLimit);
    }
    if objects.windows(2).any(|w| w[0].ring != w[1].ring) {
        return Err(GradedError::ContextMismatch);
    }
    let Some(first) = objects.first() else {
        return Ok(CoherenceReport::default());
    };
    let s = Structure { objects, mutation };
    let unit = GradedObj::unit(&first.ring);
    let id = GradedMap::identity;
    let n = objects.len();
    let mut report = CoherenceReport::default();

    for a in 0..n {
        for b in 0..n {
            let (x, y) = (&objects[a], &objects[b]);
            let sym = s.tau(y, x).after(&s.tau(x, y));
            report.record(format!("symmetry({a},{b})"), &sym, &id(&tensor(x, y)));

            let lhs = tensor_maps(&id(x), &left_unitor(&unit, y)).after(&associator(x, &unit, y));
            let rhs = tensor_maps(&right_unitor(x, &unit), &id(y));
            report.record(format!("triangle({a},{b})"), &lhs, &rhs);
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (x, y, z) = (&objects[a], &objects[b], &objects[c]);
                let lhs = associator(y, z, x)
                    .after(&s.tau(x, &tensor(y, z)))
                    .after(&associator(x, y, z));
                let rhs = tensor_maps(&id(y), &s.tau(x, z))
                    .after(&associator(y, x, z))
                    .after(&tensor_maps(&s.tau(x, y), &id(z)));
                report.record(format!("hexagon({a},{b},{c})"), &lhs, &rhs);
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (w, x, y, z) = (&objects[a], &objects[b], &objects[c], &objects[d]);
                    let lhs = associator(w, x, &tensor(y, z)).after(&associator(&tensor(w, x), y, z));
                    let rhs = tensor_maps(&id(w), &associator(x, y, z))
                        .after(&associator(w, &tensor(x, y), z))
                        .after(&tensor_maps(&associator(w, x, y), &id(z)));
                    report.record(format!("pentagon({a},{b},{c},{d})"), &lhs, &rhs);
                }
            }
        }
    }
    Ok(report)
}

/// A symmetric object of rank 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymObject {
    pub name: String,
    pub invertible: bool,
}

impl SymObject {
    pub fn new(name: &str, rank: usize, invertible: bool) -> Result<Self, GradedError> {
        if rank != 1 {
            return Err(GradedError::NotRankOne(rank));
        }
        Ok(Self { name: name.to_string(), invertible })
    }
}

/// A finitely supported Z-graded free module: degree ↦ basis names.
pub type ZGraded = std::collections::BTreeMap<i32, Vec<String>>;

/// `M⁰ = ⊕ M_{2k}⊗ω^k`, `M¹ = ⊕ M_{2k−1}⊗ω^k`.
pub fn from_z_graded<R: Ring>(ring: &R, module: &ZGraded, omega: &SymObject) -> Result<GradedObj<R>, GradedError> {
    if !omega.invertible {
        return Err(GradedError::NotInvertible);
    }
    let mut basis: [Vec<Label>; 2] = [vec![], vec![]];
    for (&deg, names) in module {
        let d = deg.rem_euclid(2) as usize;
        for name in names {
            basis[d].push(Label::Graded(name.clone(), deg));
        }
    }
    GradedObj::from_labels(ring, std::mem::take(&mut basis[0]), std::mem::take(&mut basis[1]))
}

/// Inverse of [`from_z_graded`].
pub fn to_z_graded<R: Ring>(obj: &GradedObj<R>) -> Result<ZGraded, GradedError> {
    let mut out = ZGraded::new();
    for d in 0..2 {
        for l in &obj.basis[d] {
            match l {
                Label::Graded(name, deg) if deg.rem_euclid(2) as usize == d => {
                    out.entry(*deg).or_default().push(name.clone());
                }
                other => return Err(GradedError::NotZGraded(other.to_string())),
            }
        }
    }
    Ok(out)
}

/// The ω-power twisting a Z-degree: `2k ↦ k`, `2k−1 ↦ k`.
pub fn omega_power(deg: i32) -> i32 {
    (deg + 1).div_euclid(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::WittRing;

    fn z8() -> WittRing {
        WittRing::prime_field(2, 3).unwrap()
    }

    #[test]
    fn rank_formula() {
        let r = z8();
        let m = GradedObj::even_odd(&r);
        let t = twisted_tensor(&m, &m).unwrap();
        assert_eq!((t.rank(0), t.rank(1)), (2, 2));
        let h = GradedObj::omega_half(&r);
        let hh = twisted_tensor(&h, &h).unwrap();
        assert_eq!((hh.rank(0), hh.rank(1)), (1, 0));
    }

    #[test]
    fn tau_on_half_twist_is_minus_identity() {
        let r = z8();
        let h = GradedObj::omega_half(&r);
        let t = interchange(&h, &h);
        assert_eq!(t.f[0], Matrix::from_ints(&r, &[&[-1]]));
        assert!(t.after(&t).is_identity());
    }

    #[test]
    fn even_swap_has_no_signs() {
        let r = z8();
        let m = GradedObj::new(&r, &["a", "b"], &[]).unwrap();
        let n = GradedObj::new(&r, &["c"], &[]).unwrap();
        let t = interchange(&m, &n);
        assert!(t.f[0].get(0, 0) == &r.one() && t.f[0].get(1, 1) == &r.one());
        assert_eq!(associator(&m, &n, &m).f[0], Matrix::identity(&r, 4));
    }

    #[test]
    fn half_twist_associator_is_invertible() {
        let r = z8();
        let h = GradedObj::omega_half(&r);
        let a = associator(&h, &h, &h);
        assert_eq!((a.f[0].rows(), a.f[1].rows()), (0, 1));
        assert!(a.f[1].get(0, 0) == &r.one());
    }

    #[test]
    fn standard_set_is_coherent() {
        let r = z8();
        let report = verify_coherence(&GradedObj::standard_set(&r), None).unwrap();
        assert!(report.ok(), "{:?}", report.first_failure());
    }

    #[test]
    fn sign_mutations_are_detected() {
        let r = z8();
        let objs = GradedObj::standard_set(&r);
        for left in 0..objs.len() {
            for right in 0..objs.len() {
                let t = interchange(&objs[left], &objs[right]);
                for degree in 0..2 {
                    for column in 0..t.f[degree].cols() {
                        let m = TauMutation { left, right, degree, column };
                        let report = verify_coherence(&objs, Some(m)).unwrap();
                        assert!(!report.ok(), "{m:?} undetected");
                    }
                }
            }
        }
    }

    #[test]
    fn size_limit() {
        let r = z8();
        let big = GradedObj::new(&r, &["a", "b", "c", "d"], &[]).unwrap();
        assert_eq!(verify_coherence(&[big], None).unwrap_err(), GradedError::SizeLimit);
    }

    #[test]
    fn z_graded_correspondence() {
        let r = z8();
        let w = SymObject::new("w", 1, true).unwrap();
        let mut m = ZGraded::new();
        for d in -2..=2 {
            m.insert(d, vec![format!("x{d}")]);
        }
        let obj = from_z_graded(&r, &m, &w).unwrap();
        assert_eq!((obj.rank(0), obj.rank(1)), (3, 2));
        assert_eq!(to_z_graded(&obj).unwrap(), m);
        let only_neg: ZGraded = [(-1, vec!["y".to_string()])].into();
        let o = from_z_graded(&r, &only_neg, &w).unwrap();
        assert_eq!((o.rank(0), o.rank(1)), (0, 1));
        let not_inv = SymObject::new("w", 1, false).unwrap();
        assert_eq!(from_z_graded(&r, &m, &not_inv).unwrap_err(), GradedError::NotInvertible);
        assert_eq!(SymObject::new("w", 2, true).unwrap_err(), GradedError::NotRankOne(2));
        assert_eq!(omega_power(-1), 0);
        assert_eq!(omega_power(2), 1);
    }
}
