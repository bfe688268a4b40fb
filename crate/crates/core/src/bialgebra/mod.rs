//! Twisted cocommutative bialgebras as structure constants.
//!
//! `Γ = ⊕ Γ[k]` is stored weight by weight up to `kmax`. Each `Γ[k]` is a
//! free right `R`-module on `e_1..e_r`; elements are coordinate vectors
//! `x = Σ e_i x_i`. Left multiplication by `r ∈ R` is the matrix `L_k(r)`,
//! determined by `L_k(t)` for the residue generator `t`.

mod algebra;
mod dual;
mod module;

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ArithError, Ring, WittElem, WittRing};
use crate::linalg::Matrix;
use crate::report::Report;

pub use algebra::{free_algebra, FreeAlgebraInfo, GammaAlgebra};
pub(crate) use algebra::monomials_up_to;
pub use dual::{dualize, points_category, CategorySchemeData, Point, PointsCategory};
pub use module::{Comodule, GammaModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BialgebraError {
    #[error("incomplete structure constants: {0}")]
    IncompleteData(String),
    #[error("modules or bialgebras do not match")]
    ContextMismatch,
    #[error("instance too large: {0}")]
    SizeLimit(String),
    #[error("malformed data: {0}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Structure constants of one weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightData {
    pub names: Vec<String>,
    /// `ε(e_i)`.
    pub eps: Vec<WittElem>,
    /// `L_k(t)`; required when the residue degree exceeds 1.
    pub left_t: Option<Matrix<WittRing>>,
    /// `Δ(e_l) = Σ_{i,j} (e_i⊗e_j)·delta[l][i][j]`.
    pub delta: Vec<Vec<Vec<WittElem>>>,
}

impl WeightData {
    pub fn rank(&self) -> usize {
        self.names.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedBialgebra {
    pub ring: WittRing,
    pub kmax: usize,
    pub weights: Vec<WeightData>,
    /// Coordinates of `1 ∈ Γ[0]`.
    pub unit: Vec<WittElem>,
    /// `mu[(k,l)][i][j]` = coordinates of `e_i·e_j` in `Γ[k+l]`.
    pub mu: BTreeMap<(usize, usize), Vec<Vec<Vec<WittElem>>>>,
}

/// One adjustable structure constant, for mutation testing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    LeftT { k: usize, i: usize, j: usize },
    Unit(usize),
    Eps { k: usize, i: usize },
    Mu { k: usize, l: usize, i: usize, j: usize, m: usize },
    Delta { k: usize, l: usize, i: usize, j: usize },
}

type Vector = Vec<WittElem>;

fn vadd(r: &WittRing, a: &[WittElem], b: &[WittElem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| r.add(x, y)).collect()
}

fn vscale(r: &WittRing, a: &[WittElem], c: &WittElem) -> Vector {
    a.iter().map(|x| r.mul(x, c)).collect()
}

pub(crate) fn render_vec(v: &[WittElem]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

impl TwistedBialgebra {
    pub fn rank(&self, k: usize) -> usize {
        self.weights[k].rank()
    }

    pub fn basis_vector(&self, k: usize, i: usize) -> Vector {
        let r = &self.ring;
        (0..self.rank(k)).map(|j| if i == j { r.one() } else { r.zero() }).collect()
    }

    pub fn zero_vector(&self, k: usize) -> Vector {
        vec![self.ring.zero(); self.rank(k)]
    }

    /// `L_k(a)`: left multiplication by `a` on `Γ[k]`.
    pub fn left_matrix(&self, k: usize, a: &WittElem) -> Matrix<WittRing> {
        let r = &self.ring;
        let n = self.rank(k);
        let coeffs = a.coeffs();
        if r.degree() == 1 {
            return Matrix::identity(r, n).scale(a);
        }
        let lt = self.weights[k].left_t.as_ref().expect("verified data has L(t)");
        let mut acc = Matrix::zeros(r, n, n);
        let mut pw = Matrix::identity(r, n);
        for (j, &c) in coeffs.iter().enumerate() {
            if j > 0 {
                pw = pw.mul(lt);
            }
            if c != 0 {
                acc = acc.add(&pw.scale(&r.int(c as i64)));
            }
        }
        acc
    }

    /// `a·x` for `x ∈ Γ[k]`.
    pub fn left_mul(&self, k: usize, a: &WittElem, x: &[WittElem]) -> Vector {
        self.left_matrix(k, a).apply(x)
    }

    /// `η(a) ∈ Γ[0]`.
    pub fn eta(&self, a: &WittElem) -> Vector {
        self.left_mul(0, a, &self.unit)
    }

    /// `x·y` for `x ∈ Γ[k]`, `y ∈ Γ[l]`: `Σ_i e_i·(x_i·y)`.
    pub fn mul(&self, k: usize, x: &[WittElem], l: usize, y: &[WittElem]) -> Vector {
        let r = &self.ring;
        let table = &self.mu[&(k, l)];
        let mut out = self.zero_vector(k + l);
        for (i, xi) in x.iter().enumerate() {
            if r.is_zero(xi) {
                continue;
            }
            let shifted = self.left_mul(l, xi, y);
            for (j, yj) in shifted.iter().enumerate() {
                if r.is_zero(yj) {
                    continue;
                }
                out = vadd(r, &out, &vscale(r, &table[i][j], yj));
            }
        }
        out
    }

    /// `ε(x)` for `x ∈ Γ[k]`.
    pub fn eps(&self, k: usize, x: &[WittElem]) -> WittElem {
        let r = &self.ring;
        self.weights[k].eps.iter().zip(x).fold(r.zero(), |acc, (e, c)| r.add(&acc, &r.mul(e, c)))
    }

    /// `Δ(x)` as the coefficient matrix of `e_i⊗e_j`.
    pub fn delta(&self, k: usize, x: &[WittElem]) -> Vec<Vector> {
        let r = &self.ring;
        let n = self.rank(k);
        let mut out = vec![vec![r.zero(); n]; n];
        for (l, xl) in x.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out[i][j] = r.add(&out[i][j], &r.mul(&self.weights[k].delta[l][i][j], xl));
                }
            }
        }
        out
    }

    /// Shape validation; every missing constant is reported.
    pub fn check_complete(&self) -> Result<(), BialgebraError> {
        let miss = |s: String| Err(BialgebraError::IncompleteData(s));
        if self.weights.len() != self.kmax + 1 {
            return miss(format!("expected {} weights, found {}", self.kmax + 1, self.weights.len()));
        }
        if self.unit.len() != self.rank(0) {
            return miss("unit coordinates".into());
        }
        for (k, w) in self.weights.iter().enumerate() {
            let n = w.rank();
            if w.eps.len() != n {
                return miss(format!("eps on weight {k}"));
            }
            if self.ring.degree() > 1 {
                match &w.left_t {
                    Some(m) if m.rows() == n && m.cols() == n => {}
                    _ => return miss(format!("left action of t on weight {k}")),
                }
            }
            if w.delta.len() != n || w.delta.iter().any(|d| d.len() != n || d.iter().any(|row| row.len() != n)) {
                return miss(format!("delta on weight {k}"));
            }
        }
        for k in 0..=self.kmax {
            for l in 0..=self.kmax - k {
                let Some(t) = self.mu.get(&(k, l)) else {
                    return miss(format!("mu for weights ({k},{l})"));
                };
                if t.len() != self.rank(k)
                    || t.iter().any(|row| row.len() != self.rank(l) || row.iter().any(|v| v.len() != self.rank(k + l)))
                {
                    return miss(format!("mu shape for weights ({k},{l})"));
                }
            }
        }
        if self.mu.keys().any(|&(k, l)| k + l > self.kmax) {
            return Err(BialgebraError::IncompleteData("mu beyond kmax breaks the grading".into()));
        }
        Ok(())
    }

    /// Check every axiom; one report line per axiom and weight.
    pub fn verify(&self) -> Result<Report, BialgebraError> {
        self.check_complete()?;
        let r = &self.ring;
        let mut rep = Report::new();
        let t = r.generator();
        let f = r.degree();

        // η is a ring map: L_k(t) satisfies the modulus, and η(t) = 1·t
        if f > 1 {
            let modulus = r.extension().expect("f > 1").to_vec();
            for k in 0..=self.kmax {
                let lt = self.weights[k].left_t.as_ref().expect("checked");
                let n = self.rank(k);
                let mut acc = Matrix::zeros(r, n, n);
                let mut pw = Matrix::identity(r, n);
                for &c in &modulus {
                    acc = acc.add(&pw.scale(&r.int(c as i64)));
                    pw = pw.mul(lt);
                }
                rep.expect_none(format!("eta_ring_map[{k}]"), (!acc.is_zero()).then(|| format!("m(L(t)) = {acc:?}")));
            }
            let lhs = self.eta(&t);
            let rhs = vscale(r, &self.unit, &t);
            rep.expect_none("eta_unit", (lhs != rhs).then(|| format!("t·1 = {} but 1·t = {}", render_vec(&lhs), render_vec(&rhs))));
        }

        // unit and associativity of μ
        for k in 0..=self.kmax {
            let mut bad = None;
            for i in 0..self.rank(k) {
                let e = self.basis_vector(k, i);
                if self.mul(0, &self.unit, k, &e) != e || self.mul(k, &e, 0, &self.unit) != e {
                    bad = Some(format!("e{i} in weight {k}"));
                    break;
                }
            }
            rep.expect_none(format!("mu_unit[{k}]"), bad);
        }
        for k in 0..=self.kmax {
            for l in 0..=self.kmax - k {
                for m in 0..=self.kmax - k - l {
                    let mut bad = None;
                    'outer: for a in 0..self.rank(k) {
                        let ea = self.basis_vector(k, a);
                        for b in 0..self.rank(l) {
                            let eb = self.basis_vector(l, b);
                            let ab = self.mul(k, &ea, l, &eb);
                            for c in 0..self.rank(m) {
                                let ec = self.basis_vector(m, c);
                                let lhs = self.mul(k + l, &ab, m, &ec);
                                let rhs = self.mul(k, &ea, l + m, &self.mul(l, &eb, m, &ec));
                                if lhs != rhs {
                                    bad = Some(format!("(e{a}e{b})e{c}={} vs {}", render_vec(&lhs), render_vec(&rhs)));
                                    break 'outer;
                                }
                            }
                        }
                    }
                    rep.expect_none(format!("mu_assoc[{k},{l},{m}]"), bad);
                }
            }
        }

        // left multiplication commutes with μ: t·(xy) = (t·x)y
        if f > 1 {
            for k in 0..=self.kmax {
                for l in 0..=self.kmax - k {
                    let mut bad = None;
                    'lc: for a in 0..self.rank(k) {
                        let ea = self.basis_vector(k, a);
                        for b in 0..self.rank(l) {
                            let eb = self.basis_vector(l, b);
                            let lhs = self.left_mul(k + l, &t, &self.mul(k, &ea, l, &eb));
                            let rhs = self.mul(k, &self.left_mul(k, &t, &ea), l, &eb);
                            if lhs != rhs {
                                bad = Some(format!("t·(e{a}e{b}) = {} vs (t·e{a})e{b} = {}", render_vec(&lhs), render_vec(&rhs)));
                                break 'lc;
                            }
                        }
                    }
                    rep.expect_none(format!("left_linear_mu[{k},{l}]"), bad);
                }
            }
        }

        // counit: ε(η(r)) = r and ε(xy) = ε(η(ε(x))y)
        let mut bad = None;
        for g in [r.one(), t.clone()] {
            let v = self.eps(0, &self.eta(&g));
            if v != g {
                bad = Some(format!("ε(η({g})) = {v}"));
            }
        }
        rep.expect_none("eps_eta", bad);
        for k in 0..=self.kmax {
            for l in 0..=self.kmax - k {
                let mut bad = None;
                'ce: for a in 0..self.rank(k) {
                    let ea = self.basis_vector(k, a);
                    let lifted = self.eta(&self.weights[k].eps[a]);
                    for b in 0..self.rank(l) {
                        let eb = self.basis_vector(l, b);
                        let lhs = self.eps(k + l, &self.mul(k, &ea, l, &eb));
                        let rhs = self.eps(l, &self.mul(0, &lifted, l, &eb));
                        if lhs != rhs {
                            bad = Some(format!("ε(e{a}e{b}) = {lhs} vs {rhs}"));
                            break 'ce;
                        }
                    }
                }
                rep.expect_none(format!("eps_mult[{k},{l}]"), bad);
            }
        }

        // Δ: multimorphism, coassociative, cocommutative, counital
        for k in 0..=self.kmax {
            let w = &self.weights[k];
            let d = &w.delta;
            let n = w.rank();
            if f > 1 {
                let lt = w.left_t.as_ref().expect("checked");
                let mut bad1 = None;
                let mut bad2 = None;
                for l in 0..n {
                    for ii in 0..n {
                        for jj in 0..n {
                            let lhs = (0..n).fold(r.zero(), |acc, m| r.add(&acc, &r.mul(lt.get(m, l), &d[m][ii][jj])));
                            let s1 = (0..n).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(lt.get(ii, i), &d[l][i][jj])));
                            let s2 = (0..n).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(lt.get(jj, j), &d[l][ii][j])));
                            if lhs != s1 && bad1.is_none() {
                                bad1 = Some(format!("Δ(t·e{l}) ≠ t·₁Δ(e{l}) at e{ii}⊗e{jj}"));
                            }
                            if lhs != s2 && bad2.is_none() {
                                bad2 = Some(format!("Δ(t·e{l}) ≠ t·₂Δ(e{l}) at e{ii}⊗e{jj}"));
                            }
                        }
                    }
                }
                rep.expect_none(format!("delta_left_linear_1[{k}]"), bad1);
                rep.expect_none(format!("delta_left_linear_2[{k}]"), bad2);
            }
            let mut coassoc = None;
            let mut cocomm = None;
            let mut counit = None;
            for l in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        if d[l][a][b] != d[l][b][a] && cocomm.is_none() {
                            cocomm = Some(format!("Δ(e{l}) at e{a}⊗e{b}"));
                        }
                        for c in 0..n {
                            let lhs = (0..n).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(&d[i][a][b], &d[l][i][c])));
                            let rhs = (0..n).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&d[l][a][j], &d[j][b][c])));
                            if lhs != rhs && coassoc.is_none() {
                                coassoc = Some(format!("Δ(e{l}) at e{a}⊗e{b}⊗e{c}: {lhs} vs {rhs}"));
                            }
                        }
                    }
                    let want = if a == l { r.one() } else { r.zero() };
                    let right = (0..n).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&w.eps[j], &d[l][a][j])));
                    let left = (0..n).fold(r.zero(), |acc, i| r.add(&acc, &r.mul(&w.eps[i], &d[l][i][a])));
                    if (right != want || left != want) && counit.is_none() {
                        counit = Some(format!("(id⊗ε)Δ(e{l}) or (ε⊗id)Δ(e{l}) wrong at e{a}"));
                    }
                }
            }
            rep.expect_none(format!("delta_coassoc[{k}]"), coassoc);
            rep.expect_none(format!("delta_cocomm[{k}]"), cocomm);
            rep.expect_none(format!("delta_counit[{k}]"), counit);
        }

        // Δ(xy) = Σ x'y' ⊗ x''y''
        for k in 0..=self.kmax {
            for l in 0..=self.kmax - k {
                let mut bad = None;
                'dm: for a in 0..self.rank(k) {
                    for b in 0..self.rank(l) {
                        let lhs = self.delta(k + l, &self.mul(k, &self.basis_vector(k, a), l, &self.basis_vector(l, b)));
                        let rhs = self.delta_product(k, a, l, b);
                        if lhs != rhs {
                            bad = Some(format!("Δ(e{a}e{b}) in weights ({k},{l})"));
                            break 'dm;
                        }
                    }
                }
                rep.expect_none(format!("delta_mult[{k},{l}]"), bad);
            }
        }
        Ok(rep)
    }

    /// `Δ(e_a)·Δ(e_b)` in `Γ[k+l]_R⊗Γ[k+l]_R`.
    fn delta_product(&self, k: usize, a: usize, l: usize, b: usize) -> Vec<Vector> {
        let r = &self.ring;
        let n = self.rank(k + l);
        let mut out = vec![vec![r.zero(); n]; n];
        let da = &self.weights[k].delta[a];
        let db = &self.weights[l].delta[b];
        for i in 0..self.rank(k) {
            for j in 0..self.rank(k) {
                if r.is_zero(&da[i][j]) {
                    continue;
                }
                let mut ej = self.zero_vector(k);
                ej[j] = da[i][j].clone();
                for c in 0..self.rank(l) {
                    let left = self.mul(k, &self.basis_vector(k, i), l, &self.basis_vector(l, c));
                    for m in 0..self.rank(l) {
                        if r.is_zero(&db[c][m]) {
                            continue;
                        }
                        let right = self.mul(k, &ej, l, &self.basis_vector(l, m));
                        for s in 0..n {
                            for u in 0..n {
                                let term = r.mul(&r.mul(&left[s], &right[u]), &db[c][m]);
                                out[s][u] = r.add(&out[s][u], &term);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Every structure constant, in a fixed order.
    pub fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        for (k, w) in self.weights.iter().enumerate() {
            let n = w.rank();
            if w.left_t.is_some() {
                for i in 0..n {
                    for j in 0..n {
                        out.push(Slot::LeftT { k, i, j });
                    }
                }
            }
            for i in 0..n {
                out.push(Slot::Eps { k, i });
            }
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        out.push(Slot::Delta { k, l, i, j });
                    }
                }
            }
        }
        for i in 0..self.unit.len() {
            out.push(Slot::Unit(i));
        }
        for (&(k, l), t) in &self.mu {
            for (i, row) in t.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    for m in 0..v.len() {
                        out.push(Slot::Mu { k, l, i, j, m });
                    }
                }
            }
        }
        out
    }

    /// Add `delta` to one structure constant.
    pub fn perturb(&mut self, slot: &Slot, delta: &WittElem) {
        let r = self.ring.clone();
        let bump = |x: &mut WittElem| *x = r.add(x, delta);
        match *slot {
            Slot::LeftT { k, i, j } => {
                let m = self.weights[k].left_t.as_mut().expect("slot exists");
                let v = r.add(m.get(i, j), delta);
                m.set(i, j, v);
            }
            Slot::Unit(i) => bump(&mut self.unit[i]),
            Slot::Eps { k, i } => bump(&mut self.weights[k].eps[i]),
            Slot::Mu { k, l, i, j, m } => bump(&mut self.mu.get_mut(&(k, l)).expect("slot exists")[i][j][m]),
            Slot::Delta { k, l, i, j } => bump(&mut self.weights[k].delta[l][i][j]),
        }
    }

    /// A copy with one random constant shifted by a random nonzero element.
    pub fn random_mutation<G: rand::Rng>(&self, rng: &mut G) -> (Self, Slot, WittElem) {
        let slots = self.slots();
        let slot = slots[rng.gen_range(0..slots.len())].clone();
        let delta = loop {
            let c: Vec<i64> = (0..self.ring.degree()).map(|_| rng.gen_range(0..self.ring.modulus()) as i64).collect();
            let d = self.ring.elem(&c);
            if !d.is_zero() {
                break d;
            }
        };
        let mut m = self.clone();
        m.perturb(&slot, &delta);
        (m, slot, delta)
    }

    pub fn to_json(&self) -> Value {
        let r = &self.ring;
        let enc = |v: &[WittElem]| Value::Array(v.iter().map(|x| r.elem_to_json(x)).collect());
        let weights: Vec<Value> = self
            .weights
            .iter()
            .map(|w| {
                let mut o = json!({
                    "basis": w.names,
                    "eps": enc(&w.eps),
                    "delta": w.delta.iter().map(|m| m.iter().map(|row| enc(row)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                if let Some(lt) = &w.left_t {
                    o["left_t"] = lt.to_json();
                }
                o
            })
            .collect();
        let mu: Vec<Value> = self
            .mu
            .iter()
            .map(|(&(k, l), t)| {
                json!({"k": k, "l": l, "table": t.iter().map(|row| row.iter().map(|v| enc(v)).collect::<Vec<_>>()).collect::<Vec<_>>()})
            })
            .collect();
        json!({"ring": r.to_json(), "kmax": self.kmax, "weights": weights, "unit": enc(&self.unit), "mu": mu})
    }

    pub fn from_json(v: &Value) -> Result<Self, BialgebraError> {
        let bad = |s: &str| BialgebraError::Parse(s.to_string());
        let ring = WittRing::from_json(v.get("ring").ok_or_else(|| bad("ring"))?)?;
        let kmax = v.get("kmax").and_then(Value::as_u64).ok_or_else(|| bad("kmax"))? as usize;
        let vec_of = |x: &Value| -> Result<Vector, BialgebraError> {
            x.as_array().ok_or_else(|| bad("vector"))?.iter().map(|e| ring.elem_from_json(e).map_err(Into::into)).collect()
        };
        let mut weights = Vec::new();
        for w in v.get("weights").and_then(Value::as_array).ok_or_else(|| bad("weights"))? {
            let names: Vec<String> = serde_json::from_value(w.get("basis").cloned().ok_or_else(|| bad("basis"))?).map_err(|_| bad("basis"))?;
            let n = names.len();
            let eps = vec_of(w.get("eps").ok_or_else(|| bad("eps"))?)?;
            let left_t = match w.get("left_t") {
                Some(m) => Some(Matrix::from_json(&ring, m, n, n)?),
                None => None,
            };
            let delta = w
                .get("delta")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("delta"))?
                .iter()
                .map(|m| m.as_array().ok_or_else(|| bad("delta"))?.iter().map(&vec_of).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            weights.push(WeightData { names, eps, left_t, delta });
        }
        let unit = vec_of(v.get("unit").ok_or_else(|| bad("unit"))?)?;
        let mut mu = BTreeMap::new();
        for entry in v.get("mu").and_then(Value::as_array).ok_or_else(|| bad("mu"))? {
            let k = entry.get("k").and_then(Value::as_u64).ok_or_else(|| bad("mu.k"))? as usize;
            let l = entry.get("l").and_then(Value::as_u64).ok_or_else(|| bad("mu.l"))? as usize;
            let table = entry
                .get("table")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("mu.table"))?
                .iter()
                .map(|row| row.as_array().ok_or_else(|| bad("mu.table"))?.iter().map(&vec_of).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            mu.insert((k, l), table);
        }
        Ok(Self { ring, kmax, weights, unit, mu })
    }
}

/// The height-one bialgebra: `Γ[r]` free on `ψ^r` with `a·ψ = ψ·σ(a)`,
/// `ε(ψ^r) = 1` and `Δ(ψ^r) = ψ^r⊗ψ^r`.
pub fn height1_gamma(p: u64, prec: u32, f: usize, kmax: usize) -> Result<TwistedBialgebra, BialgebraError> {
    let ring = WittRing::unramified(p, f, prec)?;
    let one = ring.one();
    let t = ring.generator();
    let weights = (0..=kmax)
        .map(|k| WeightData {
            names: vec![format!("psi^{k}")],
            eps: vec![one.clone()],
            // a·ψ^k = ψ^k·σ^k(a), so right modules see ψ as σ-semilinear
            left_t: (f > 1).then(|| Matrix::from_rows(&ring, vec![vec![ring.frobenius_pow(&t, k as i64)]])),
            delta: vec![vec![vec![one.clone()]]],
        })
        .collect();
    let mut mu = BTreeMap::new();
    for k in 0..=kmax {
        for l in 0..=kmax - k {
            mu.insert((k, l), vec![vec![vec![one.clone()]]]);
        }
    }
    Ok(TwistedBialgebra { ring, kmax, weights, unit: vec![one], mu })
}

/// `Γ = R` concentrated in weight 0.
pub fn trivial_bialgebra(ring: &WittRing) -> TwistedBialgebra {
    let one = ring.one();
    let mut mu = BTreeMap::new();
    mu.insert((0, 0), vec![vec![vec![one.clone()]]]);
    TwistedBialgebra {
        ring: ring.clone(),
        kmax: 0,
        weights: vec![WeightData {
            names: vec!["1".into()],
            eps: vec![one.clone()],
            left_t: (ring.degree() > 1).then(|| Matrix::from_rows(ring, vec![vec![ring.generator()]])),
            delta: vec![vec![vec![one.clone()]]],
        }],
        unit: vec![one],
        mu,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn height_one_passes() {
        let g = height1_gamma(2, 3, 2, 3).unwrap();
        let rep = g.verify().unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        assert!(trivial_bialgebra(&g.ring).verify().unwrap().passed());
        assert!(height1_gamma(3, 2, 1, 2).unwrap().verify().unwrap().passed());
    }

    #[test]
    fn psi_squared_commutes_when_f_is_two() {
        let g = height1_gamma(2, 3, 2, 3).unwrap();
        let a = g.ring.elem(&[3, 5]);
        // a·ψ² = ψ²·σ²(a) = ψ²·a
        assert_eq!(g.left_mul(2, &a, &[g.ring.one()]), vec![a]);
        let psi2 = g.basis_vector(2, 0);
        assert_eq!(g.eps(2, &psi2), g.ring.one());
        assert_eq!(g.delta(2, &psi2), vec![vec![g.ring.one()]]);
    }

    #[test]
    fn mutations_detected() {
        let g = height1_gamma(2, 3, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (m, slot, d) = g.random_mutation(&mut rng);
            assert!(!m.verify().unwrap().passed(), "{slot:?} + {d} undetected");
        }
    }

    #[test]
    fn delta_mutation_breaks_multiplicativity() {
        let mut g = height1_gamma(2, 3, 2, 3).unwrap();
        g.perturb(&Slot::Delta { k: 2, l: 0, i: 0, j: 0 }, &g.ring.int(2));
        let rep = g.verify().unwrap();
        assert!(rep.failed_with_prefix("delta_mult"));
    }

    #[test]
    fn missing_data() {
        let mut g = height1_gamma(2, 3, 2, 2).unwrap();
        g.mu.remove(&(1, 1));
        assert!(matches!(g.verify(), Err(BialgebraError::IncompleteData(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = height1_gamma(2, 3, 2, 2).unwrap();
        assert_eq!(TwistedBialgebra::from_json(&g.to_json()).unwrap(), g);
    }
}
