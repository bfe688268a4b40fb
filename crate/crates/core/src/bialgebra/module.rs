//! Right Γ-modules and the equivalent comodule data.

use crate::arith::{Ring, WittElem, WittRing};
use crate::linalg::Matrix;
use crate::report::Report;

use super::{render_vec, vadd, vscale, BialgebraError, TwistedBialgebra, Vector};

/// A finite free `R`-module `M` with a right `Γ`-action.
///
/// `act[k][i]` has column `s` equal to the coordinates of `b_s·e^k_i`.
/// Scalars pass through the action via the left structure of `Γ`:
/// `(b·c)·γ = b·(cγ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaModule {
    pub gamma: TwistedBialgebra,
    pub names: Vec<String>,
    pub act: Vec<Vec<Matrix<WittRing>>>,
}

impl GammaModule {
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// `R` with `b·γ = ε(γ)`.
    pub fn trivial(gamma: &TwistedBialgebra) -> Self {
        let r = &gamma.ring;
        let act = gamma
            .weights
            .iter()
            .map(|w| w.eps.iter().map(|e| Matrix::from_rows(r, vec![vec![e.clone()]])).collect())
            .collect();
        Self { gamma: gamma.clone(), names: vec!["1".into()], act }
    }

    /// The zero module.
    pub fn zero(gamma: &TwistedBialgebra) -> Self {
        let r = &gamma.ring;
        let act = gamma.weights.iter().map(|w| vec![Matrix::zeros(r, 0, 0); w.rank()]).collect();
        Self { gamma: gamma.clone(), names: Vec::new(), act }
    }

    /// For a height-one `Γ`: `ψ` acts by the matrix `a`, so
    /// `ψ^k` acts by `a·σ(a)⋯σ^{k-1}(a)`.
    pub fn height1(gamma: &TwistedBialgebra, names: Vec<String>, a: &Matrix<WittRing>) -> Result<Self, BialgebraError> {
        let r = &gamma.ring;
        let n = names.len();
        if a.rows() != n || a.cols() != n {
            return Err(BialgebraError::IncompleteData("action matrix shape".into()));
        }
        if gamma.weights.iter().any(|w| w.rank() != 1) {
            return Err(BialgebraError::ContextMismatch);
        }
        let mut act = Vec::new();
        let mut cur = Matrix::identity(r, n);
        for k in 0..=gamma.kmax {
            act.push(vec![cur.clone()]);
            cur = cur.mul(&a.map(|x| r.frobenius_pow(x, k as i64)));
        }
        Ok(Self { gamma: gamma.clone(), names, act })
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.gamma.ring.zero(); self.rank()]
    }

    pub fn basis_vector(&self, s: usize) -> Vector {
        let r = &self.gamma.ring;
        (0..self.rank()).map(|j| if j == s { r.one() } else { r.zero() }).collect()
    }

    /// `m·x` for `m ∈ M` and `x ∈ Γ[k]`.
    pub fn act_on(&self, m: &[WittElem], k: usize, x: &[WittElem]) -> Vector {
        let g = &self.gamma;
        let r = &g.ring;
        let mut out = self.zero_vector();
        for (s, c) in m.iter().enumerate() {
            if r.is_zero(c) {
                continue;
            }
            let cx = g.left_mul(k, c, x);
            for (j, y) in cx.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                out = vadd(r, &out, &vscale(r, &self.act[k][j].col(s), y));
            }
        }
        out
    }

    pub fn check_shapes(&self) -> Result<(), BialgebraError> {
        let n = self.rank();
        if self.act.len() != self.gamma.kmax + 1 {
            return Err(BialgebraError::IncompleteData("action for every weight".into()));
        }
        for (k, mats) in self.act.iter().enumerate() {
            if mats.len() != self.gamma.rank(k) || mats.iter().any(|m| m.rows() != n || m.cols() != n) {
                return Err(BialgebraError::IncompleteData(format!("action matrices on weight {k}")));
            }
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<Report, BialgebraError> {
        self.check_shapes()?;
        let g = &self.gamma;
        let r = &g.ring;
        let mut rep = Report::new();
        let mut bad = None;
        for s in 0..self.rank() {
            let b = self.basis_vector(s);
            let got = self.act_on(&b, 0, &g.unit);
            if got != b {
                bad = Some(format!("b{s}·1 = {}", render_vec(&got)));
                break;
            }
        }
        rep.expect_none("module_unit", bad);
        let mut bad = None;
        for s in 0..self.rank() {
            let b = self.basis_vector(s);
            for c in [r.one(), r.generator()] {
                let lhs = self.act_on(&b, 0, &g.eta(&c));
                let rhs = vscale(r, &b, &c);
                if lhs != rhs {
                    bad = Some(format!("b{s}·η({c}) = {}", render_vec(&lhs)));
                }
            }
        }
        rep.expect_none("module_eta", bad);
        for k in 0..=g.kmax {
            for l in 0..=g.kmax - k {
                let mut bad = None;
                'assoc: for s in 0..self.rank() {
                    let b = self.basis_vector(s);
                    for a in 0..g.rank(k) {
                        let ea = g.basis_vector(k, a);
                        let ba = self.act_on(&b, k, &ea);
                        for c in 0..g.rank(l) {
                            let ec = g.basis_vector(l, c);
                            let lhs = self.act_on(&ba, l, &ec);
                            let rhs = self.act_on(&b, k + l, &g.mul(k, &ea, l, &ec));
                            if lhs != rhs {
                                bad = Some(format!("(b{s}·e{a})·e{c} = {} vs {}", render_vec(&lhs), render_vec(&rhs)));
                                break 'assoc;
                            }
                        }
                    }
                }
                rep.expect_none(format!("module_assoc[{k},{l}]"), bad);
            }
        }
        Ok(rep)
    }

    /// `M⊗_R N` with `(m⊗n)·γ = Σ (m·γ')⊗(n·γ'')`; basis in `kron` order.
    pub fn tensor(&self, other: &Self) -> Result<Self, BialgebraError> {
        if self.gamma != other.gamma {
            return Err(BialgebraError::ContextMismatch);
        }
        let g = &self.gamma;
        let r = &g.ring;
        let (n1, n2) = (self.rank(), other.rank());
        let mut names = Vec::with_capacity(n1 * n2);
        for a in &self.names {
            for b in &other.names {
                names.push(format!("{a}⊗{b}"));
            }
        }
        let mut act = Vec::new();
        for k in 0..=g.kmax {
            let d = &g.weights[k].delta;
            let mut mats = Vec::new();
            for l in 0..g.rank(k) {
                let mut m = Matrix::zeros(r, n1 * n2, n1 * n2);
                for i in 0..g.rank(k) {
                    for j in 0..g.rank(k) {
                        if r.is_zero(&d[l][i][j]) {
                            continue;
                        }
                        m = m.add(&self.act[k][i].kron(&other.act[k][j]).scale(&d[l][i][j]));
                    }
                }
                mats.push(m);
            }
            act.push(mats);
        }
        Ok(Self { gamma: g.clone(), names, act })
    }

    /// The comodule with the same data.
    pub fn to_comodule(&self) -> Comodule {
        let coaction = self
            .act
            .iter()
            .map(|mats| (0..self.rank()).map(|s| mats.iter().map(|m| m.col(s)).collect()).collect())
            .collect();
        Comodule { gamma: self.gamma.clone(), names: self.names.clone(), coaction }
    }
}

/// `M → A[k]⊗M`, `b_s ↦ Σ_i f_i ⊗ coaction[k][s][i]` over the dual rings.
#[derive(Debug, Clone, PartialEq)]
pub struct Comodule {
    pub gamma: TwistedBialgebra,
    pub names: Vec<String>,
    pub coaction: Vec<Vec<Vec<Vector>>>,
}

impl Comodule {
    pub fn to_module(&self) -> GammaModule {
        let r = &self.gamma.ring;
        let n = self.names.len();
        let act = self
            .coaction
            .iter()
            .enumerate()
            .map(|(k, per_s)| {
                (0..self.gamma.rank(k)).map(|i| Matrix::from_fn(r, n, n, |row, s| per_s[s][i][row].clone())).collect()
            })
            .collect();
        GammaModule { gamma: self.gamma.clone(), names: self.names.clone(), act }
    }
}

#[cfg(test)]
mod tests {
    use super::super::height1_gamma;
    use super::*;

    #[test]
    fn trivial_and_tensor() {
        let g = height1_gamma(2, 3, 2, 3).unwrap();
        let triv = GammaModule::trivial(&g);
        assert!(triv.verify().unwrap().passed());
        // ψ acts on R through σ
        let c = g.ring.elem(&[1, 3]);
        assert_eq!(triv.act_on(&[c.clone()], 1, &[g.ring.one()]), vec![g.ring.frobenius(&c)]);
        let sq = triv.tensor(&triv).unwrap();
        assert!(sq.verify().unwrap().passed());
        assert_eq!(sq.act, triv.act);
        assert!(GammaModule::zero(&g).verify().unwrap().passed());
    }

    #[test]
    fn height1_modules_and_associativity() {
        let g = height1_gamma(2, 3, 2, 3).unwrap();
        let r = &g.ring;
        let a = Matrix::from_rows(r, vec![vec![r.elem(&[1, 1]), r.int(2)], vec![r.generator(), r.int(3)]]);
        let m = GammaModule::height1(&g, vec!["x".into(), "y".into()], &a).unwrap();
        assert!(m.verify().unwrap().passed());
        let n = GammaModule::height1(&g, vec!["z".into()], &Matrix::from_rows(r, vec![vec![r.elem(&[0, 3])]])).unwrap();
        let left = m.tensor(&n).unwrap().tensor(&m).unwrap();
        let right = m.tensor(&n.tensor(&m).unwrap()).unwrap();
        assert!(left.verify().unwrap().passed());
        assert_eq!(left.act, right.act);
        assert_eq!(m.tensor(&GammaModule::trivial(&g)).unwrap().act, m.act);
    }

    #[test]
    fn comodule_round_trip() {
        let g = height1_gamma(3, 2, 2, 2).unwrap();
        let m = GammaModule::trivial(&g).tensor(&GammaModule::trivial(&g)).unwrap();
        assert_eq!(m.to_comodule().to_module(), m);
    }
}
