//! The congruence `x·σ ≡ x^p mod pB` for Γ-algebras, and its comodule form.

use crate::arith::{Ring, WittElem, WittRing};
use crate::bialgebra::{monomials_up_to, GammaAlgebra, TwistedBialgebra};
use crate::report::Report;

use serde_json::{json, Value};

use super::{
    element_from_json, element_to_json, wilkerson_check, CoeffPsi, CongruenceReport, PsiRingPresentation, Shape, ThetaError, Vector, Witness,
};

/// A representative `σ ∈ Γ[1]`, as coordinates in the `Γ[1]` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusClassSpec {
    pub sigma: Vector,
}

impl FrobeniusClassSpec {
    /// `σ = ψ` for the height-one bialgebra.
    pub fn height1(gamma: &TwistedBialgebra) -> Self {
        Self { sigma: vec![gamma.ring.one()] }
    }

    /// `σ + p·γ`, another representative of the same class.
    pub fn shifted(&self, gamma_elem: &[WittElem]) -> Self {
        let r = self.sigma[0].ring().clone();
        let p = r.int(r.p() as i64);
        Self { sigma: self.sigma.iter().zip(gamma_elem).map(|(s, g)| r.add(s, &r.mul(&p, g))).collect() }
    }
}

/// Products of basis elements of `B` of degree at most `bound`, without
/// repeated values. The empty product is the unit.
pub fn spanning_monomials(b: &GammaAlgebra, bound: u32) -> Vec<(String, Vector)> {
    let n = b.rank();
    let monos = if n == 0 { vec![vec![]] } else { monomials_up_to(n, bound) };
    let mut out: Vec<(String, Vector)> = Vec::new();
    for m in monos {
        let mut x = b.unit.clone();
        let mut label = Vec::new();
        for (s, &e) in m.iter().enumerate() {
            for _ in 0..e {
                x = b.mul(&x, &b.module.basis_vector(s));
            }
            if e > 0 {
                let name = &b.module.names[s];
                label.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            }
        }
        if out.iter().all(|(_, y)| *y != x) {
            out.push((if label.is_empty() { "1".into() } else { label.join("*") }, x));
        }
    }
    out
}

fn gamma_defect(b: &GammaAlgebra, sigma: &FrobeniusClassSpec, x: &[WittElem]) -> Vector {
    let r = &b.module.gamma.ring;
    let lhs = b.module.act_on(x, 1, &sigma.sigma);
    let mut rhs = b.unit.clone();
    for _ in 0..r.p() {
        rhs = b.mul(&rhs, x);
    }
    lhs.iter().zip(&rhs).map(|(a, c)| r.sub(a, c)).collect()
}

fn residues(r: &WittRing, v: &[WittElem]) -> Vector {
    let k = r.residue_field();
    v.iter().map(|c| k.reduce(c).expect("same family")).collect()
}

/// `x·σ ≡ x^p mod pB` for every monomial of degree at most `degree_bound`
/// in the basis of `B`.
pub fn gamma_congruence_check(
    gamma: &TwistedBialgebra,
    sigma: &FrobeniusClassSpec,
    b: &GammaAlgebra,
    degree_bound: u32,
) -> Result<CongruenceReport, ThetaError> {
    if gamma.kmax < 1 || b.module.act.len() < 2 {
        return Err(ThetaError::IncompleteAction("no weight-one action".into()));
    }
    if b.module.gamma != *gamma {
        return Err(ThetaError::IncompleteAction("algebra is over a different bialgebra".into()));
    }
    if sigma.sigma.len() != gamma.rank(1) {
        return Err(ThetaError::IncompleteAction("σ must have one coordinate per weight-one basis element".into()));
    }
    b.module.check_shapes().map_err(|e| ThetaError::IncompleteAction(e.to_string()))?;
    let r = &gamma.ring;
    let mut checks = Report::new();
    let mut witnesses = Vec::new();
    let span = spanning_monomials(b, degree_bound);
    for (label, x) in &span {
        let d = gamma_defect(b, sigma, x);
        if !d.iter().all(|c| c.divisible_by_p()) {
            witnesses.push(Witness::new(label.clone(), x, &residues(r, &d)));
        }
    }
    checks.expect_none("congruence", witnesses.first().map(|w| w.label.clone()));
    let mut notes = vec![format!("spanning set: {} monomials of degree ≤ {degree_bound}", span.len())];
    if witnesses.is_empty() && gamma.weights.iter().all(|w| w.rank() == 1) {
        notes.push("height one: B is free over W/p^N, so the congruence gives the θ-structure hypothesis".into());
    }
    Ok(CongruenceReport::from_parts(r.precision(), witnesses, checks, notes))
}

pub fn replay_gamma_witness(b: &GammaAlgebra, sigma: &FrobeniusClassSpec, w: &Witness) -> bool {
    let r = &b.module.gamma.ring;
    let d = gamma_defect(b, sigma, &w.coords);
    !d.iter().all(|c| c.divisible_by_p()) && residues(r, &d).iter().map(|c| c.to_string()).collect::<Vec<_>>() == w.residue
}

/// An algebra `B` over `W/p` with `ψ₁: B → A[1]⊗B` given on generators:
/// `ψ₁(g) = Σ_i f_i⊗coaction[g][i]`, and `can*: A[1] → W/p` by `can[i] = can*(f_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComoduleAlgebra {
    pub ring: WittRing,
    pub shape: Shape,
    pub can: Vector,
    pub coaction: Vec<Vec<Vector>>,
}

impl ComoduleAlgebra {
    /// `{"ring", "shape", "can": [..], "coaction": [[element, ..] per generator]}`.
    pub fn to_json(&self) -> Value {
        let r = &self.ring;
        let alg = self.shape.build(r).expect("validated shape");
        json!({
            "ring": r.to_json(),
            "shape": self.shape.to_json(r),
            "can": self.can.iter().map(|c| r.elem_to_json(c)).collect::<Vec<_>>(),
            "coaction": self.coaction.iter().map(|row| row.iter().map(|x| element_to_json(&self.shape, &alg, x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ThetaError> {
        let bad = |s: &str| ThetaError::Parse(s.to_string());
        let ring = WittRing::from_json(v.get("ring").ok_or_else(|| bad("ring"))?)?;
        let shape = Shape::from_json(&ring, v.get("shape").ok_or_else(|| bad("shape"))?)?;
        let alg = shape.build(&ring)?;
        let can = v
            .get("can")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("can"))?
            .iter()
            .map(|c| ring.elem_from_json(c).map_err(ThetaError::from))
            .collect::<Result<Vec<_>, _>>()?;
        let coaction = v
            .get("coaction")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("coaction"))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad("coaction row"))?
                    .iter()
                    .map(|x| element_from_json(&shape, &alg, x))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { ring, shape, can, coaction })
    }
}

/// Whether `B → A[1]⊗B → (W/p)⊗B = B` is the `p`-th power map.
pub fn frobenius_congruence_comodule<G: rand::Rng>(
    c: &ComoduleAlgebra,
    samples: usize,
    rng: &mut G,
) -> Result<CongruenceReport, ThetaError> {
    if c.ring.precision() != 1 {
        return Err(ThetaError::CharacteristicMismatch);
    }
    let alg = c.shape.build(&c.ring)?;
    if c.coaction.len() != alg.generators.len() || c.coaction.iter().any(|g| g.len() != c.can.len()) {
        return Err(ThetaError::Parse("one coaction row per generator".into()));
    }
    let images: Vec<Vector> = c
        .coaction
        .iter()
        .map(|row| row.iter().zip(&c.can).fold(alg.zero(), |acc, (b, k)| alg.add(&acc, &alg.scale(b, k))))
        .collect();
    // the composite is a ring map, Frobenius on scalars
    let pres = PsiRingPresentation::new(&c.ring, c.shape.clone(), CoeffPsi::Frobenius, images)?;
    wilkerson_check(&pres, samples, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{height1_gamma, GammaModule};
    use crate::linalg::Matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rank_one(gamma: &TwistedBialgebra, psi: i64) -> GammaAlgebra {
        let r = &gamma.ring;
        let module = GammaModule::height1(gamma, vec!["1".into()], &Matrix::from_rows(r, vec![vec![r.int(psi)]])).unwrap();
        GammaAlgebra { module, mult: vec![vec![vec![r.one()]]], unit: vec![r.one()] }
    }

    #[test]
    fn witt_vectors_pass_and_perturbation_fails() {
        let g = height1_gamma(2, 3, 2, 2).unwrap();
        let sigma = FrobeniusClassSpec::height1(&g);
        let good = rank_one(&g, 1);
        let rep = gamma_congruence_check(&g, &sigma, &good, 3).unwrap();
        assert!(rep.passed);
        let bad = rank_one(&g, 2);
        let rep = gamma_congruence_check(&g, &sigma, &bad, 3).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.witnesses[0].label, "1");
        assert!(replay_gamma_witness(&bad, &sigma, &rep.witnesses[0]));
        let shifted = sigma.shifted(&[g.ring.elem(&[1, 1])]);
        assert!(gamma_congruence_check(&g, &shifted, &good, 3).unwrap().passed);
    }

    #[test]
    fn witt_vectors_pass_at_residue_degree_three() {
        let g = height1_gamma(2, 2, 3, 1).unwrap();
        let sigma = FrobeniusClassSpec::height1(&g);
        let triv = GammaAlgebra::trivial(&g);
        assert!(gamma_congruence_check(&g, &sigma, &triv, 2).unwrap().passed);
        // the action is σ-semilinear, so x·ψ ≡ x^2 holds for all scalars
        let x = vec![g.ring.elem(&[1, 1, 3])];
        let d = gamma_defect(&triv, &sigma, &x);
        assert!(d[0].divisible_by_p());
    }

    #[test]
    fn comodule_frobenius() {
        let f2 = WittRing::prime_field(2, 1).unwrap();
        let shape = Shape::PolyRing { vars: vec!["y".into()], degree_bound: 6 };
        let alg = shape.build(&f2).unwrap();
        let y = alg.generators[0].1.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let good = ComoduleAlgebra { ring: f2.clone(), shape: shape.clone(), can: vec![f2.one()], coaction: vec![vec![alg.mul(&y, &y)]] };
        assert!(frobenius_congruence_comodule(&good, 10, &mut rng).unwrap().passed);
        assert_eq!(ComoduleAlgebra::from_json(&good.to_json()).unwrap(), good);
        let bad = ComoduleAlgebra { coaction: vec![vec![y.clone()]], ..good.clone() };
        let rep = frobenius_congruence_comodule(&bad, 10, &mut rng).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.witnesses[0].label, "y");
        let z4 = WittRing::prime_field(2, 2).unwrap();
        let wrong = ComoduleAlgebra { ring: z4, ..good };
        assert_eq!(frobenius_congruence_comodule(&wrong, 0, &mut rng), Err(ThetaError::CharacteristicMismatch));
    }
}
