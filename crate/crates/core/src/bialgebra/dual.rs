//! The dual graded category scheme and its points in small rings.
//!
//! `A[k]` is the right-linear dual of `Γ[k]` on the dual basis `f_i`.
//! Elements of `A[k]⊗A[l]` are stored as `Σ_a f_a⊗g_a` with `g_a ∈ A[l]`,
//! using `f·c⊗g = f⊗(g∘L_l(c))`.

use std::collections::BTreeMap;

use crate::arith::{Ring, WittElem, WittRing};
use crate::report::Report;

use super::{render_vec, vadd, vscale, BialgebraError, TwistedBialgebra, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct CategorySchemeData {
    pub gamma: TwistedBialgebra,
    /// `mult[k][a][b]` = coordinates of `f_a f_b` (dual to `Δ`).
    pub mult: Vec<Vec<Vec<Vector>>>,
    /// The unit of `A[k]`, which is `ε`.
    pub unit: Vec<Vector>,
    /// `cstar[(k,l)][m][a]` = `G^m_a ∈ A[l]` with `c*(f_m) = Σ_a f_a⊗G^m_a`.
    pub cstar: BTreeMap<(usize, usize), Vec<Vec<Vector>>>,
}

pub fn dualize(gamma: &TwistedBialgebra) -> Result<CategorySchemeData, BialgebraError> {
    gamma.check_complete()?;
    let mut mult = Vec::new();
    for w in &gamma.weights {
        let n = w.rank();
        mult.push((0..n).map(|a| (0..n).map(|b| (0..n).map(|l| w.delta[l][a][b].clone()).collect()).collect()).collect());
    }
    let unit = gamma.weights.iter().map(|w| w.eps.clone()).collect();
    let mut cstar = BTreeMap::new();
    for (&(k, l), table) in &gamma.mu {
        let n = gamma.rank(k + l);
        let entry: Vec<Vec<Vector>> = (0..n)
            .map(|m| (0..gamma.rank(k)).map(|a| (0..gamma.rank(l)).map(|b| table[a][b][m].clone()).collect()).collect())
            .collect();
        cstar.insert((k, l), entry);
    }
    Ok(CategorySchemeData { gamma: gamma.clone(), mult, unit, cstar })
}

impl CategorySchemeData {
    pub fn ring(&self) -> &WittRing {
        &self.gamma.ring
    }

    pub fn rank(&self, k: usize) -> usize {
        self.gamma.rank(k)
    }

    pub fn mul(&self, k: usize, f: &[WittElem], g: &[WittElem]) -> Vector {
        let r = self.ring();
        let mut out = vec![r.zero(); self.rank(k)];
        for (a, x) in f.iter().enumerate() {
            for (b, y) in g.iter().enumerate() {
                let c = r.mul(x, y);
                if !r.is_zero(&c) {
                    out = vadd(r, &out, &vscale(r, &self.mult[k][a][b], &c));
                }
            }
        }
        out
    }

    /// `s*(r)(x) = ε(x r)`.
    pub fn s_star(&self, k: usize, c: &WittElem) -> Vector {
        vscale(self.ring(), &self.unit[k], c)
    }

    /// `t*(r)(x) = ε(r x)`.
    pub fn t_star(&self, k: usize, c: &WittElem) -> Vector {
        self.gamma.left_matrix(k, c).apply_left(&self.unit[k])
    }

    /// `i*(f) = f(η(1))`.
    pub fn i_star(&self, f: &[WittElem]) -> WittElem {
        let r = self.ring();
        f.iter().zip(&self.gamma.unit).fold(r.zero(), |acc, (a, b)| r.add(&acc, &r.mul(a, b)))
    }

    /// `i*` is an isomorphism iff `A[0]` has rank one and `η(1)` is a basis.
    pub fn i_star_is_iso(&self) -> bool {
        self.rank(0) == 1 && self.ring().is_unit(&self.gamma.unit[0])
    }

    /// `g∘L_l(c)`.
    fn twist(&self, l: usize, g: &[WittElem], c: &WittElem) -> Vector {
        self.gamma.left_matrix(l, c).apply_left(g)
    }

    /// `c*(f)` for `f ∈ A[k+l]`, as `Σ_a f_a⊗g_a`.
    pub fn c_star(&self, k: usize, l: usize, f: &[WittElem]) -> Vec<Vector> {
        let r = self.ring();
        let table = &self.cstar[&(k, l)];
        let mut out = vec![vec![r.zero(); self.rank(l)]; self.rank(k)];
        for (m, c) in f.iter().enumerate() {
            if r.is_zero(c) {
                continue;
            }
            for a in 0..self.rank(k) {
                out[a] = vadd(r, &out[a], &vscale(r, &table[m][a], c));
            }
        }
        out
    }

    /// `f⊗g` in normal form.
    pub fn tensor(&self, l: usize, f: &[WittElem], g: &[WittElem]) -> Vec<Vector> {
        f.iter().map(|c| self.twist(l, g, c)).collect()
    }

    /// When `A[k]` has rank one and `t*(t) = σ^j(t)·ε`, the exponent `j`.
    pub fn t_star_frobenius_power(&self, k: usize) -> Option<i64> {
        let r = self.ring();
        if self.rank(k) != 1 {
            return None;
        }
        let t = r.generator();
        let got = self.t_star(k, &t);
        (0..r.degree() as i64).find(|&j| got == self.s_star(k, &r.frobenius_pow(&t, j)))
    }

    /// The category-scheme identities on structure constants.
    pub fn verify(&self) -> Report {
        let g = &self.gamma;
        let r = self.ring();
        let t = r.generator();
        let mut rep = Report::new();
        for k in 0..=g.kmax {
            let n = self.rank(k);
            let basis: Vec<Vector> = (0..n).map(|i| g.basis_vector(k, i)).collect();
            let mut ring_bad = None;
            for a in 0..n {
                if self.mul(k, &self.unit[k], &basis[a]) != basis[a] {
                    ring_bad = Some(format!("ε·f{a}"));
                }
                for b in 0..n {
                    if self.mult[k][a][b] != self.mult[k][b][a] {
                        ring_bad = Some(format!("f{a}f{b} ≠ f{b}f{a}"));
                    }
                    for c in 0..n {
                        let lhs = self.mul(k, &self.mult[k][a][b], &basis[c]);
                        let rhs = self.mul(k, &basis[a], &self.mult[k][b][c]);
                        if lhs != rhs {
                            ring_bad = Some(format!("(f{a}f{b})f{c}"));
                        }
                    }
                }
            }
            rep.expect_none(format!("ring[{k}]"), ring_bad);

            // t* multiplicative on powers of t, and s* likewise
            let mut hom_bad = None;
            let mut pw = r.one();
            for j in 0..2 * r.degree() {
                let lhs = self.t_star(k, &r.mul(&pw, &t));
                let rhs = self.mul(k, &self.t_star(k, &pw), &self.t_star(k, &t));
                if lhs != rhs {
                    hom_bad = Some(format!("t*(t^{}) ≠ t*(t^{j})t*(t)", j + 1));
                }
                let lhs = self.s_star(k, &r.mul(&pw, &t));
                let rhs = self.mul(k, &self.s_star(k, &pw), &self.s_star(k, &t));
                if lhs != rhs {
                    hom_bad = Some(format!("s*(t^{}) ≠ s*(t^{j})s*(t)", j + 1));
                }
                pw = r.mul(&pw, &t);
            }
            if self.t_star(k, &r.one()) != self.unit[k] {
                hom_bad = Some("t*(1) ≠ 1".into());
            }
            rep.expect_none(format!("source_target_hom[{k}]"), hom_bad);
        }

        let mut i_bad = None;
        let a0: Vec<Vector> = (0..self.rank(0)).map(|i| g.basis_vector(0, i)).collect();
        if self.i_star(&self.unit[0]) != r.one() {
            i_bad = Some("i*(1) ≠ 1".into());
        }
        for a in 0..self.rank(0) {
            for b in 0..self.rank(0) {
                let lhs = self.i_star(&self.mult[0][a][b]);
                let rhs = r.mul(&self.i_star(&a0[a]), &self.i_star(&a0[b]));
                if lhs != rhs {
                    i_bad = Some(format!("i*(f{a}f{b})"));
                }
            }
        }
        for c in [r.one(), t.clone()] {
            if self.i_star(&self.s_star(0, &c)) != c || self.i_star(&self.t_star(0, &c)) != c {
                i_bad = Some(format!("i*∘s* or i*∘t* moves {c}"));
            }
        }
        rep.expect_none("identity_section", i_bad);

        for k in 0..=g.kmax {
            for l in 0..=g.kmax - k {
                let mut st = None;
                for c in [r.one(), t.clone()] {
                    let lhs = self.c_star(k, l, &self.s_star(k + l, &c));
                    let rhs = self.tensor(l, &self.unit[k], &self.s_star(l, &c));
                    if lhs != rhs {
                        st = Some(format!("c*(s*({c}))"));
                    }
                    let lhs = self.c_star(k, l, &self.t_star(k + l, &c));
                    let rhs = self.tensor(l, &self.t_star(k, &c), &self.unit[l]);
                    if lhs != rhs {
                        st = Some(format!("c*(t*({c}))"));
                    }
                }
                rep.expect_none(format!("cstar_source_target[{k},{l}]"), st);

                let mut mult_bad = None;
                let n = self.rank(k + l);
                'm: for a in 0..n {
                    for b in 0..n {
                        let lhs = self.c_star(k, l, &self.mult[k + l][a][b]);
                        let ca = self.c_star(k, l, &g.basis_vector(k + l, a));
                        let cb = self.c_star(k, l, &g.basis_vector(k + l, b));
                        let rhs = self.tensor_mul(k, l, &ca, &cb);
                        if lhs != rhs {
                            mult_bad = Some(format!("c*(f{a}f{b})"));
                            break 'm;
                        }
                    }
                }
                rep.expect_none(format!("cstar_ring_map[{k},{l}]"), mult_bad);
            }
        }

        for k in 0..=g.kmax {
            let mut bad = None;
            for m in 0..self.rank(k) {
                let fm = g.basis_vector(k, m);
                let right = self.c_star(k, 0, &fm);
                let r1: Vector = right.iter().map(|ga| self.i_star(ga)).collect();
                let left = self.c_star(0, k, &fm);
                let r2 = left.iter().enumerate().fold(vec![r.zero(); self.rank(k)], |acc, (a, ga)| {
                    vadd(r, &acc, &self.twist(k, ga, &g.unit[a]))
                });
                if r1 != fm || r2 != fm {
                    bad = Some(format!("f{m}: {} / {}", render_vec(&r1), render_vec(&r2)));
                }
            }
            rep.expect_none(format!("cstar_counit[{k}]"), bad);
        }

        for k in 0..=g.kmax {
            for l in 0..=g.kmax - k {
                for m in 0..=g.kmax - k - l {
                    let mut bad = None;
                    for q in 0..self.rank(k + l + m) {
                        let f = g.basis_vector(k + l + m, q);
                        // (id⊗c*)c*
                        let outer = self.c_star(k, l + m, &f);
                        let lhs: Vec<Vec<Vector>> = outer.iter().map(|ga| self.c_star(l, m, ga)).collect();
                        // (c*⊗id)c*
                        let first = self.c_star(k + l, m, &f);
                        let mut rhs = vec![vec![vec![r.zero(); self.rank(m)]; self.rank(l)]; self.rank(k)];
                        for (nn, gn) in first.iter().enumerate() {
                            for a in 0..self.rank(k) {
                                for b in 0..self.rank(l) {
                                    let c = &self.cstar[&(k, l)][nn][a][b];
                                    if !r.is_zero(c) {
                                        rhs[a][b] = vadd(r, &rhs[a][b], &self.twist(m, gn, c));
                                    }
                                }
                            }
                        }
                        if lhs != rhs {
                            bad = Some(format!("f{q} in weight {}", k + l + m));
                            break;
                        }
                    }
                    rep.expect_none(format!("cstar_coassoc[{k},{l},{m}]"), bad);
                }
            }
        }
        rep
    }

    /// Product in `A[k]⊗A[l]`.
    fn tensor_mul(&self, k: usize, l: usize, x: &[Vector], y: &[Vector]) -> Vec<Vector> {
        let r = self.ring();
        let mut out = vec![vec![r.zero(); self.rank(l)]; self.rank(k)];
        for a in 0..self.rank(k) {
            for b in 0..self.rank(k) {
                // (f_a⊗x_a)(f_b⊗y_b) = Σ_c f_c·d_{c,ab} ⊗ x_a y_b
                let prod = self.mul(l, &x[a], &y[b]);
                for (c, d) in self.mult[k][a][b].iter().enumerate() {
                    if !r.is_zero(d) {
                        out[c] = vadd(r, &out[c], &self.twist(l, &prod, d));
                    }
                }
            }
        }
        out
    }
}

/// A degree-`k` morphism: a ring map `A[k] → R'` sending `f_i ↦ x_i`,
/// restricting along `s*` to the source object.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub degree: usize,
    pub source: usize,
    pub target: usize,
    pub x: Vec<WittElem>,
}

/// The graded category of `R'`-points.
#[derive(Debug, Clone)]
pub struct PointsCategory {
    pub target_ring: WittRing,
    /// Ring maps `R → R'`, by the image of `t`.
    pub objects: Vec<WittElem>,
    /// `morphisms[k]`: every degree-`k` point.
    pub morphisms: Vec<Vec<Point>>,
    pub report: Report,
}

const MAX_TARGET: u64 = 16;
const MAX_RANK: usize = 4;

pub fn points_category(scheme: &CategorySchemeData, target: &WittRing) -> Result<PointsCategory, BialgebraError> {
    let src = scheme.ring();
    let size = target.size().filter(|&s| s <= MAX_TARGET).ok_or_else(|| BialgebraError::SizeLimit("target ring".into()))?;
    if (0..=scheme.gamma.kmax).any(|k| scheme.rank(k) > MAX_RANK) {
        return Err(BialgebraError::SizeLimit("rank above 4".into()));
    }
    if target.p() != src.p() || target.precision() > src.precision() {
        return Err(BialgebraError::ContextMismatch);
    }
    let elems = target.elements();
    let objects: Vec<WittElem> = if src.degree() == 1 {
        vec![target.zero()]
    } else {
        let m = src.extension().expect("f > 1");
        elems
            .iter()
            .filter(|tau| {
                let mut acc = target.zero();
                let mut pw = target.one();
                for &c in m {
                    acc = target.add(&acc, &target.mul(&target.from_int(c as i64), &pw));
                    pw = target.mul(&pw, tau);
                }
                acc.is_zero()
            })
            .cloned()
            .collect()
    };
    let cat_stub = PointsCategory { target_ring: target.clone(), objects, morphisms: Vec::new(), report: Report::new() };
    let mut morphisms = Vec::new();
    for k in 0..=scheme.gamma.kmax {
        let n = scheme.rank(k);
        let mut found = Vec::new();
        for (h, _) in cat_stub.objects.iter().enumerate() {
            let total = (size as usize).pow(n as u32);
            for idx in 0..total {
                let mut rem = idx;
                let x: Vec<WittElem> = (0..n)
                    .map(|_| {
                        let e = elems[rem % size as usize].clone();
                        rem /= size as usize;
                        e
                    })
                    .collect();
                if cat_stub.is_ring_map(scheme, k, h, &x) {
                    let target_obj = cat_stub.target_of(scheme, k, h, &x);
                    if let Some(t) = target_obj {
                        found.push(Point { degree: k, source: h, target: t, x });
                    }
                }
            }
        }
        morphisms.push(found);
    }
    let mut cat = PointsCategory { morphisms, ..cat_stub };
    cat.report = cat.check_axioms(scheme);
    Ok(cat)
}

impl PointsCategory {
    /// `h: R → R'` for object `h`.
    pub fn apply_object(&self, h: usize, c: &WittElem) -> WittElem {
        let r = &self.target_ring;
        let tau = &self.objects[h];
        let mut acc = r.zero();
        let mut pw = r.one();
        for &a in c.coeffs() {
            acc = r.add(&acc, &r.mul(&r.from_int(a as i64), &pw));
            pw = r.mul(&pw, tau);
        }
        acc
    }

    fn eval(&self, h: usize, x: &[WittElem], f: &[WittElem]) -> WittElem {
        let r = &self.target_ring;
        x.iter().zip(f).fold(r.zero(), |acc, (xi, fi)| r.add(&acc, &r.mul(xi, &self.apply_object(h, fi))))
    }

    fn is_ring_map(&self, scheme: &CategorySchemeData, k: usize, h: usize, x: &[WittElem]) -> bool {
        let r = &self.target_ring;
        if self.eval(h, x, &scheme.unit[k]) != r.one() {
            return false;
        }
        for a in 0..x.len() {
            for b in a..x.len() {
                if r.mul(&x[a], &x[b]) != self.eval(h, x, &scheme.mult[k][a][b]) {
                    return false;
                }
            }
        }
        true
    }

    /// The object `x∘t*`, if it is one of the enumerated objects.
    fn target_of(&self, scheme: &CategorySchemeData, k: usize, h: usize, x: &[WittElem]) -> Option<usize> {
        let src = scheme.ring();
        if src.degree() == 1 {
            return Some(0);
        }
        let tau = self.eval(h, x, &scheme.t_star(k, &src.generator()));
        self.objects.iter().position(|o| *o == tau)
    }

    pub fn identity(&self, scheme: &CategorySchemeData, h: usize) -> Point {
        let x = scheme.gamma.unit.iter().map(|u| self.apply_object(h, u)).collect();
        Point { degree: 0, source: h, target: h, x }
    }

    /// `α∘β`, defined when `s(α) = t(β)`.
    pub fn compose(&self, scheme: &CategorySchemeData, alpha: &Point, beta: &Point) -> Option<Point> {
        if alpha.source != beta.target || alpha.degree + beta.degree > scheme.gamma.kmax {
            return None;
        }
        let r = &self.target_ring;
        let (k, l) = (alpha.degree, beta.degree);
        let table = &scheme.cstar[&(k, l)];
        let y = (0..scheme.rank(k + l))
            .map(|m| {
                (0..scheme.rank(k)).fold(r.zero(), |acc, a| {
                    r.add(&acc, &r.mul(&alpha.x[a], &self.eval(beta.source, &beta.x, &table[m][a])))
                })
            })
            .collect();
        Some(Point { degree: k + l, source: beta.source, target: alpha.target, x: y })
    }

    fn check_axioms(&self, scheme: &CategorySchemeData) -> Report {
        let mut rep = Report::new();
        let mut bad = None;
        for h in 0..self.objects.len() {
            let id = self.identity(scheme, h);
            if !self.morphisms[0].contains(&id) {
                bad = Some(format!("identity at object {h} is not a point"));
                continue;
            }
            for k in 0..self.morphisms.len() {
                for m in &self.morphisms[k] {
                    if m.source == h && self.compose(scheme, m, &id).as_ref() != Some(m) {
                        bad = Some(format!("f∘id ≠ f for {:?}", m.x));
                    }
                    if m.target == h && self.compose(scheme, &id, m).as_ref() != Some(m) {
                        bad = Some(format!("id∘f ≠ f for {:?}", m.x));
                    }
                }
            }
        }
        rep.expect_none("identity_laws", bad);

        let mut closed = None;
        let mut assoc = None;
        let kmax = scheme.gamma.kmax;
        for k in 0..=kmax {
            for l in 0..=kmax - k {
                for a in &self.morphisms[k] {
                    for b in &self.morphisms[l] {
                        let Some(ab) = self.compose(scheme, a, b) else { continue };
                        if !self.morphisms[k + l].contains(&ab) && closed.is_none() {
                            closed = Some(format!("composite of degree {} is not a point", k + l));
                        }
                        for m in 0..=kmax - k - l {
                            for c in &self.morphisms[m] {
                                let Some(bc) = self.compose(scheme, b, c) else { continue };
                                let lhs = self.compose(scheme, &ab, c);
                                let rhs = self.compose(scheme, a, &bc);
                                if lhs != rhs && assoc.is_none() {
                                    assoc = Some(format!("degrees ({k},{l},{m})"));
                                }
                            }
                        }
                    }
                }
            }
        }
        rep.expect_none("composition_closed", closed);
        rep.expect_none("associativity", assoc);
        rep
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{height1_gamma, trivial_bialgebra};
    use super::*;

    #[test]
    fn height1_dual() {
        let g = height1_gamma(2, 3, 2, 3).unwrap();
        let a = dualize(&g).unwrap();
        let rep = a.verify();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        assert!(a.i_star_is_iso());
        assert_eq!(a.t_star_frobenius_power(0), Some(0));
        assert_eq!(a.t_star_frobenius_power(1), Some(1));
        assert_eq!(a.t_star_frobenius_power(2), Some(0));
        let g3 = height1_gamma(2, 2, 3, 2).unwrap();
        assert!(g3.verify().unwrap().passed());
        let a3 = dualize(&g3).unwrap();
        assert!(a3.verify().passed());
        assert_eq!(a3.t_star_frobenius_power(1), Some(1));
        assert_eq!(a3.t_star_frobenius_power(2), Some(2));
    }

    #[test]
    fn points_over_small_rings() {
        let g = height1_gamma(2, 3, 2, 3).unwrap();
        let a = dualize(&g).unwrap();
        let f2 = WittRing::prime_field(2, 1).unwrap();
        let cat = points_category(&a, &f2).unwrap();
        assert!(cat.objects.is_empty());
        let f4 = WittRing::unramified(2, 2, 1).unwrap();
        let cat = points_category(&a, &f4).unwrap();
        assert_eq!(cat.objects.len(), 2);
        assert!(cat.report.passed(), "{:?}", cat.report.first_failure());
        // ψ swaps the two embeddings
        let psi = &cat.morphisms[1];
        assert_eq!(psi.len(), 2);
        assert!(psi.iter().all(|m| m.source != m.target));

        let g1 = height1_gamma(2, 2, 1, 2).unwrap();
        let a1 = dualize(&g1).unwrap();
        for target in [f2.clone(), WittRing::prime_field(2, 2).unwrap()] {
            let cat = points_category(&a1, &target).unwrap();
            assert!(cat.report.passed());
            assert_eq!(cat.morphism_count(), 3);
        }
    }

    #[test]
    fn weight_zero_only() {
        let r = WittRing::prime_field(3, 2).unwrap();
        let a = dualize(&trivial_bialgebra(&r)).unwrap();
        assert!(a.verify().passed());
        let cat = points_category(&a, &WittRing::prime_field(3, 1).unwrap()).unwrap();
        assert_eq!(cat.morphisms.len(), 1);
        assert_eq!(cat.morphisms[0].len(), 1);
    }
}
