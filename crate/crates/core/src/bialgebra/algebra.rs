//! Commutative algebras in Γ-modules, and free ones.

use std::collections::BTreeMap;

use crate::arith::{Ring, WittElem, WittRing};
use crate::linalg::Matrix;
use crate::report::Report;

use super::{render_vec, vadd, vscale, BialgebraError, GammaModule, TwistedBialgebra, Vector};

const MAX_BASIS: usize = 64;

/// A [`GammaModule`] with a commutative multiplication `mult[s][t] = b_s·b_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaAlgebra {
    pub module: GammaModule,
    pub mult: Vec<Vec<Vector>>,
    pub unit: Vector,
}

impl GammaAlgebra {
    pub fn trivial(gamma: &TwistedBialgebra) -> Self {
        let r = &gamma.ring;
        Self { module: GammaModule::trivial(gamma), mult: vec![vec![vec![r.one()]]], unit: vec![r.one()] }
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn mul(&self, x: &[WittElem], y: &[WittElem]) -> Vector {
        let r = &self.module.gamma.ring;
        let mut out = self.module.zero_vector();
        for (s, a) in x.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (t, b) in y.iter().enumerate() {
                if r.is_zero(b) {
                    continue;
                }
                out = vadd(r, &out, &vscale(r, &self.mult[s][t], &r.mul(a, b)));
            }
        }
        out
    }

    /// `Σ (x·γ')(y·γ'')` for `γ = e^k_l`.
    fn cartan(&self, x: &[WittElem], y: &[WittElem], k: usize, l: usize) -> Vector {
        let g = &self.module.gamma;
        let r = &g.ring;
        let d = &g.weights[k].delta[l];
        let mut out = self.module.zero_vector();
        for i in 0..g.rank(k) {
            for j in 0..g.rank(k) {
                if r.is_zero(&d[i][j]) {
                    continue;
                }
                let xi = self.module.act_on(x, k, &g.basis_vector(k, i));
                let yj = self.module.act_on(y, k, &g.basis_vector(k, j));
                out = vadd(r, &out, &vscale(r, &self.mul(&xi, &yj), &d[i][j]));
            }
        }
        out
    }

    /// Module axioms, commutative algebra axioms, the unit rule, and the
    /// Cartan rule on basis pairs plus `samples` random pairs.
    pub fn verify<G: rand::Rng>(&self, samples: usize, rng: &mut G) -> Result<Report, BialgebraError> {
        let mut rep = self.module.verify()?;
        let g = &self.module.gamma;
        let r = &g.ring;
        let n = self.rank();
        if self.mult.len() != n || self.mult.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(BialgebraError::IncompleteData("multiplication table".into()));
        }
        let basis: Vec<Vector> = (0..n).map(|s| self.module.basis_vector(s)).collect();
        let mut comm = None;
        let mut assoc = None;
        let mut unit = None;
        for s in 0..n {
            if self.mul(&self.unit, &basis[s]) != basis[s] && unit.is_none() {
                unit = Some(format!("1·b{s} = {}", render_vec(&self.mul(&self.unit, &basis[s]))));
            }
            for t in 0..n {
                if self.mult[s][t] != self.mult[t][s] && comm.is_none() {
                    comm = Some(format!("b{s}b{t}"));
                }
                for u in 0..n {
                    if assoc.is_some() {
                        break;
                    }
                    let lhs = self.mul(&self.mult[s][t], &basis[u]);
                    let rhs = self.mul(&basis[s], &self.mult[t][u]);
                    if lhs != rhs {
                        assoc = Some(format!("(b{s}b{t})b{u} = {} vs {}", render_vec(&lhs), render_vec(&rhs)));
                    }
                }
            }
        }
        rep.expect_none("algebra_commutative", comm);
        rep.expect_none("algebra_associative", assoc);
        rep.expect_none("algebra_unit", unit);

        let mut pairs: Vec<(Vector, Vector)> = Vec::new();
        for s in 0..n {
            for t in s..n {
                pairs.push((basis[s].clone(), basis[t].clone()));
            }
        }
        let random_vec = |rng: &mut G| -> Vector {
            (0..n)
                .map(|_| {
                    let c: Vec<i64> = (0..r.degree()).map(|_| rng.gen_range(0..r.modulus()) as i64).collect();
                    r.elem(&c)
                })
                .collect()
        };
        for _ in 0..samples {
            let x = random_vec(rng);
            let y = random_vec(rng);
            pairs.push((x, y));
        }
        for k in 0..=g.kmax {
            let mut unit_rule = None;
            let mut cartan = None;
            for l in 0..g.rank(k) {
                let el = g.basis_vector(k, l);
                let lhs = self.module.act_on(&self.unit, k, &el);
                let rhs = vscale(r, &self.unit, &g.weights[k].eps[l]);
                if lhs != rhs && unit_rule.is_none() {
                    unit_rule = Some(format!("1·e{l} = {}", render_vec(&lhs)));
                }
                for (x, y) in &pairs {
                    let lhs = self.module.act_on(&self.mul(x, y), k, &el);
                    let rhs = self.cartan(x, y, k, l);
                    if lhs != rhs {
                        cartan = Some(format!("x={} y={} γ=e{l}: {} vs {}", render_vec(x), render_vec(y), render_vec(&lhs), render_vec(&rhs)));
                        break;
                    }
                }
            }
            rep.expect_none(format!("algebra_unit_rule[{k}]"), unit_rule);
            rep.expect_none(format!("algebra_cartan[{k}]"), cartan);
        }
        Ok(rep)
    }
}

/// Generators and monomial basis of a free algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAlgebraInfo {
    /// `(s, k, j)` for the generator `b_s⊗e^k_j`.
    pub generators: Vec<(usize, usize, usize)>,
    /// Exponent vectors over `generators`, in basis order.
    pub monomials: Vec<Vec<u32>>,
    pub degree_bound: u32,
}

pub(crate) fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    for deg in 1..=d {
        let mut cur = Vec::new();
        fill(n, deg, 0, &mut vec![0; n], &mut cur);
        out.extend(cur);
    }
    out
}

fn fill(n: usize, left: u32, i: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i + 1 == n {
        acc[i] = left;
        out.push(acc.clone());
        acc[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        acc[i] = e;
        fill(n, left - e, i + 1, acc, out);
    }
    acc[i] = 0;
}

/// `Sym_R(M⊗_R Γ)` truncated in polynomial degree, with `Γ` acting on the
/// `Γ` factors by right multiplication and on products by the Cartan rule.
/// Products landing above weight `kmax` vanish.
pub fn free_algebra(
    gamma: &TwistedBialgebra,
    m_names: &[String],
    degree_bound: u32,
) -> Result<(GammaAlgebra, FreeAlgebraInfo), BialgebraError> {
    let r = &gamma.ring;
    let mut generators = Vec::new();
    let mut gen_names = Vec::new();
    for (s, bname) in m_names.iter().enumerate() {
        for k in 0..=gamma.kmax {
            for (j, ename) in gamma.weights[k].names.iter().enumerate() {
                generators.push((s, k, j));
                gen_names.push(format!("{bname}{ename}"));
            }
        }
    }
    let monomials = if generators.is_empty() { vec![vec![]] } else { monomials_up_to(generators.len(), degree_bound) };
    if monomials.len() > MAX_BASIS {
        return Err(BialgebraError::SizeLimit(format!("{} monomials", monomials.len())));
    }
    let index: BTreeMap<Vec<u32>, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monomials.len();
    let basis_vec = |i: usize| -> Vector { (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect() };

    let mut mult = vec![vec![vec![r.zero(); n]; n]; n];
    for (a, ma) in monomials.iter().enumerate() {
        for (b, mb) in monomials.iter().enumerate() {
            let prod: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            if let Some(&c) = index.get(&prod) {
                mult[a][b][c] = r.one();
            }
        }
    }
    let unit = basis_vec(0);
    let names: Vec<String> = monomials
        .iter()
        .map(|m| {
            let parts: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("({})", gen_names[i]) } else { format!("({})^{e}", gen_names[i]) })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("")
            }
        })
        .collect();

    // generator action: (b_s⊗e^k_j)·e^l_i = b_s⊗(e_j e_i)
    let gen_image = |gi: usize, l: usize, i: usize| -> Vector {
        let (s, k, j) = generators[gi];
        let mut out = vec![r.zero(); n];
        if k + l > gamma.kmax {
            return out;
        }
        let prod = gamma.mul(k, &gamma.basis_vector(k, j), l, &gamma.basis_vector(l, i));
        for (m, c) in prod.iter().enumerate() {
            let target = generators.iter().position(|&g| g == (s, k + l, m)).expect("generator exists");
            let mut e = vec![0; generators.len()];
            e[target] = 1;
            out[index[&e]] = c.clone();
        }
        out
    };

    let skeleton = GammaAlgebra {
        module: GammaModule {
            gamma: gamma.clone(),
            names,
            act: gamma.weights.iter().map(|w| vec![Matrix::zeros(r, n, n); w.rank()]).collect(),
        },
        mult,
        unit,
    };
    let mut act = Vec::new();
    for l in 0..=gamma.kmax {
        // images[a][i] = monomial a acted on by e^l_i, built up by degree
        let mut images: Vec<Vec<Vector>> = vec![Vec::new(); n];
        for (a, ma) in monomials.iter().enumerate() {
            let deg: u32 = ma.iter().sum();
            if deg == 0 {
                images[a] = (0..gamma.rank(l)).map(|i| vscale(r, &skeleton.unit, &gamma.weights[l].eps[i])).collect();
                continue;
            }
            let first = ma.iter().position(|&e| e > 0).expect("positive degree");
            let mut rest = ma.clone();
            rest[first] -= 1;
            let rest_idx = index[&rest];
            let d = &gamma.weights[l].delta;
            images[a] = (0..gamma.rank(l))
                .map(|i| {
                    let mut out = vec![r.zero(); n];
                    for p in 0..gamma.rank(l) {
                        for q in 0..gamma.rank(l) {
                            if r.is_zero(&d[i][p][q]) {
                                continue;
                            }
                            let term = skeleton.mul(&gen_image(first, l, p), &images[rest_idx][q]);
                            out = vadd(r, &out, &vscale(r, &term, &d[i][p][q]));
                        }
                    }
                    out
                })
                .collect();
        }
        act.push(
            (0..gamma.rank(l))
                .map(|i| Matrix::from_fn(r, n, n, |row, col| images[col][i][row].clone()))
                .collect::<Vec<_>>(),
        );
    }
    let mut alg = skeleton;
    alg.module.act = act;
    Ok((alg, FreeAlgebraInfo { generators, monomials, degree_bound }))
}

impl FreeAlgebraInfo {
    /// The algebra map extending `b_s ↦ images[s]`: generator `b_s⊗γ` goes
    /// to `images[s]·γ`. Column `a` is the image of monomial `a`.
    pub fn induced_map(&self, target: &GammaAlgebra, images: &[Vector]) -> Matrix<WittRing> {
        let r = &target.module.gamma.ring;
        let g = &target.module.gamma;
        let gens: Vec<Vector> = self
            .generators
            .iter()
            .map(|&(s, k, j)| target.module.act_on(&images[s], k, &g.basis_vector(k, j)))
            .collect();
        let cols: Vec<Vector> = self
            .monomials
            .iter()
            .map(|m| {
                let mut acc = target.unit.clone();
                for (i, &e) in m.iter().enumerate() {
                    for _ in 0..e {
                        acc = target.mul(&acc, &gens[i]);
                    }
                }
                acc
            })
            .collect();
        Matrix::from_fn(r, target.rank(), self.monomials.len(), |row, col| cols[col][row].clone())
    }

    /// Spot-check that the induced map is a `Γ`-algebra map wherever the
    /// truncations agree: products within the degree bound, and actions
    /// that keep every generator weight at most `kmax`.
    pub fn check_universal(&self, source: &GammaAlgebra, target: &GammaAlgebra, images: &[Vector]) -> Report {
        let g = &source.module.gamma;
        let f = self.induced_map(target, images);
        let mut rep = Report::new();
        let n = self.monomials.len();
        let mut bad = None;
        'mult: for a in 0..n {
            for b in 0..n {
                let da: u32 = self.monomials[a].iter().sum();
                let db: u32 = self.monomials[b].iter().sum();
                if da + db > self.degree_bound {
                    continue;
                }
                let lhs = f.apply(&source.mult[a][b]);
                let rhs = target.mul(&f.col(a), &f.col(b));
                if lhs != rhs {
                    bad = Some(format!("monomials {a},{b}"));
                    break 'mult;
                }
            }
        }
        rep.expect_none("universal_multiplicative", bad);
        let mut bad = None;
        for (a, m) in self.monomials.iter().enumerate() {
            let top = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| self.generators[i].1)
                .max()
                .unwrap_or(0);
            for l in 0..=g.kmax.saturating_sub(top) {
                for i in 0..g.rank(l) {
                    let el = g.basis_vector(l, i);
                    let lhs = f.apply(&source.module.act_on(&source.module.basis_vector(a), l, &el));
                    let rhs = target.module.act_on(&f.col(a), l, &el);
                    if lhs != rhs && bad.is_none() {
                        bad = Some(format!("monomial {a} under e^{l}_{i}"));
                    }
                }
            }
        }
        rep.expect_none("universal_equivariant", bad);
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::super::height1_gamma;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn height1_free_algebra() {
        let g = height1_gamma(2, 3, 2, 2).unwrap();
        let r = &g.ring;
        let (alg, info) = free_algebra(&g, &["b".into()], 2).unwrap();
        assert_eq!(info.generators.len(), 3);
        assert_eq!(alg.rank(), 10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = alg.verify(10, &mut rng).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        // (bψ)²·ψ = (bψ²)²
        let idx = |e: Vec<u32>| info.monomials.iter().position(|m| *m == e).unwrap();
        let sq1 = alg.module.basis_vector(idx(vec![0, 2, 0]));
        let sq2 = alg.module.basis_vector(idx(vec![0, 0, 2]));
        assert_eq!(alg.module.act_on(&sq1, 1, &[r.one()]), sq2);
        // the top generator is killed by ψ
        let top = alg.module.basis_vector(idx(vec![0, 0, 1]));
        assert!(alg.module.act_on(&top, 1, &[r.one()]).iter().all(|c| c.is_zero()));

        let target = GammaAlgebra::trivial(&g);
        let rep = info.check_universal(&alg, &target, &[vec![r.elem(&[1, 1])]]);
        assert!(rep.passed(), "{:?}", rep.first_failure());
    }

    #[test]
    fn zero_module_gives_base_ring() {
        let g = height1_gamma(2, 2, 1, 1).unwrap();
        let (alg, _) = free_algebra(&g, &[], 3).unwrap();
        assert_eq!(alg, GammaAlgebra::trivial(&g));
    }

    #[test]
    fn size_limit() {
        let g = height1_gamma(2, 2, 1, 3).unwrap();
        assert!(matches!(free_algebra(&g, &["a".into(), "b".into()], 4), Err(BialgebraError::SizeLimit(_))));
    }
}
