//! The congruence `ψ(x) ≡ x^p mod p` and the θ-operation it produces.

use crate::arith::{binomial, Ring, WittElem};
use crate::report::Report;

use super::{CongruenceReport, FiniteAlgebra, PsiRingPresentation, ThetaError, Vector, Witness};

fn defect(p: &PsiRingPresentation, x: &[WittElem]) -> Vector {
    let alg = &p.algebra;
    alg.sub(&p.psi(x), &alg.pow(x, alg.ring.p()))
}

fn coefficient_generators(p: &PsiRingPresentation) -> Vec<(String, WittElem)> {
    let r = p.ring();
    let mut out = vec![("1".to_string(), r.one())];
    if r.degree() > 1 {
        out.push(("t".to_string(), r.generator()));
    }
    out
}

/// `ψ(x) ≡ x^p mod p` on coefficient generators and algebra generators,
/// then spot-checked on `samples` random elements. Both sides are ring
/// maps mod `p`, so the generator checks decide the question.
pub fn wilkerson_check<G: rand::Rng>(
    p: &PsiRingPresentation,
    samples: usize,
    rng: &mut G,
) -> Result<CongruenceReport, ThetaError> {
    p.check_well_defined()?;
    let alg = &p.algebra;
    let r = p.ring();
    let mut checks = Report::new();
    let mut witnesses = Vec::new();

    let mut coeff_bad = None;
    for (name, c) in coefficient_generators(p) {
        let x = alg.scalar(&c);
        let d = defect(p, &x);
        if !alg.divisible_by_p(&d) {
            coeff_bad.get_or_insert_with(|| name.clone());
            witnesses.push(Witness::new(name, &x, &alg.residue(&d)));
        }
    }
    checks.expect_none("coefficients", coeff_bad);

    let mut gen_bad = None;
    for (name, g) in &alg.generators {
        let d = defect(p, g);
        if !alg.divisible_by_p(&d) {
            gen_bad.get_or_insert_with(|| name.clone());
            witnesses.push(Witness::new(name.clone(), g, &alg.residue(&d)));
        }
    }
    checks.expect_none("generators", gen_bad);

    let mut sample_bad = None;
    for _ in 0..samples {
        let x = alg.random_element(rng);
        let d = defect(p, &x);
        if !alg.divisible_by_p(&d) && sample_bad.is_none() {
            sample_bad = Some(alg.render(&x));
            if witnesses.is_empty() {
                witnesses.push(Witness::new(alg.render(&x), &x, &alg.residue(&d)));
            }
        }
    }
    checks.expect_none("sampled_elements", sample_bad);

    // free over W/p^N on the normal-form basis: p^{N-1} kills no basis element
    let top = r.p_power(r.precision() - 1);
    let torsion = (0..alg.rank()).find(|&s| alg.scale(&alg.basis_vector(s), &top).iter().all(|c| c.is_zero()));
    checks.expect_none("p_torsion_free", torsion.map(|s| alg.names[s].clone()));

    let notes = vec![
        "mod p both ψ and x ↦ x^p are ring maps, so generators suffice".to_string(),
        format!("spot-checked on {samples} random elements"),
    ];
    Ok(CongruenceReport::from_parts(r.precision(), witnesses, checks, notes))
}

/// Whether a witness still exhibits a nonzero residue.
pub fn replay_wilkerson_witness(p: &PsiRingPresentation, w: &Witness) -> bool {
    let alg = &p.algebra;
    let d = defect(p, &w.coords);
    let res = alg.residue(&d);
    !alg.divisible_by_p(&d) && res.iter().map(|c| c.to_string()).collect::<Vec<_>>() == w.residue
}

/// `θ(g) = (ψ(g) - g^p)/p` for every coefficient and algebra generator,
/// at precision `N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaData {
    /// The algebra at precision `N-1`, where θ takes values.
    pub target: FiniteAlgebra,
    pub values: Vec<(String, Vector)>,
}

/// θ of a single element, or a witness when the defect is not divisible.
pub fn theta_of(p: &PsiRingPresentation, x: &[WittElem]) -> Result<Vector, ThetaError> {
    let alg = &p.algebra;
    let d = defect(p, x);
    alg.divide_by_p(&d)
        .map_err(|_| ThetaError::CongruenceFails(Box::new(Witness::new(alg.render(x), x, &alg.residue(&d)))))
}

pub fn derive_theta(p: &PsiRingPresentation) -> Result<ThetaData, ThetaError> {
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let rep = wilkerson_check(p, 0, &mut rng)?;
    if let Some(w) = rep.witnesses.into_iter().next() {
        return Err(ThetaError::CongruenceFails(Box::new(w)));
    }
    let alg = &p.algebra;
    let target = alg.at_precision(alg.ring.precision() - 1)?;
    let mut values = Vec::new();
    let mut items: Vec<(String, Vector)> =
        coefficient_generators(p).into_iter().map(|(n, c)| (n, alg.scalar(&c))).collect();
    items.extend(alg.generators.iter().cloned());
    for (name, g) in items {
        let th = theta_of(p, &g)?;
        // ψ(g) = g^p + pθ(g), exactly at precision N
        let lifted = alg.lift(&th)?;
        let rebuilt = alg.add(&alg.pow(&g, alg.ring.p()), &alg.scale(&lifted, &alg.ring.int(alg.ring.p() as i64)));
        if rebuilt != p.psi(&g) {
            return Err(ThetaError::IllDefinedPsi(format!("reconstruction fails at {name}")));
        }
        values.push((name, th));
    }
    Ok(ThetaData { target, values })
}

/// The addition and multiplication formulas for θ on random pairs, at
/// precision `N-1`, plus agreement with the stored generator values.
pub fn theta_consistency<G: rand::Rng>(
    p: &PsiRingPresentation,
    theta: &ThetaData,
    samples: usize,
    rng: &mut G,
) -> Result<CongruenceReport, ThetaError> {
    let alg = &p.algebra;
    let low = &theta.target;
    let r = &low.ring;
    let prime = alg.ring.p();
    let mut checks = Report::new();

    let mut stored = None;
    let mut items: Vec<(String, Vector)> =
        coefficient_generators(p).into_iter().map(|(n, c)| (n, alg.scalar(&c))).collect();
    items.extend(alg.generators.iter().cloned());
    for ((name, g), (_, th)) in items.iter().zip(&theta.values) {
        if theta_of(p, g)? != *th {
            stored.get_or_insert_with(|| name.clone());
        }
    }
    checks.expect_none("stored_values", stored);

    // C(p, i)/p for 0 < i < p
    let coeffs: Vec<i64> = (1..prime)
        .map(|i| {
            let c = binomial(prime, i) / num_bigint::BigInt::from(prime);
            i64::try_from(c).expect("small binomial")
        })
        .collect();

    let mut pairs: Vec<(Vector, Vector)> = vec![(alg.zero(), alg.unit.clone()), (alg.unit.clone(), alg.unit.clone())];
    for _ in 0..samples {
        pairs.push((alg.random_element(rng), alg.random_element(rng)));
    }
    let mut add_bad = None;
    let mut mul_bad = None;
    for (a, b) in &pairs {
        let ta = theta_of(p, a)?;
        let tb = theta_of(p, b)?;
        let tsum = theta_of(p, &alg.add(a, b))?;
        let tprod = theta_of(p, &alg.mul(a, b))?;
        let (la, lb) = (low.reduce(a)?, low.reduce(b)?);
        let mut rhs = low.add(&ta, &tb);
        for (i, c) in (1..prime).zip(&coeffs) {
            let term = low.mul(&low.pow(&la, i), &low.pow(&lb, prime - i));
            rhs = low.sub(&rhs, &low.scale(&term, &r.int(*c)));
        }
        if tsum != rhs && add_bad.is_none() {
            add_bad = Some(format!("a={} b={}", alg.render(a), alg.render(b)));
        }
        let pe = r.int(prime as i64);
        let rhs = low.add(
            &low.add(&low.mul(&ta, &low.pow(&lb, prime)), &low.mul(&low.pow(&la, prime), &tb)),
            &low.scale(&low.mul(&ta, &tb), &pe),
        );
        if tprod != rhs && mul_bad.is_none() {
            mul_bad = Some(format!("a={} b={}", alg.render(a), alg.render(b)));
        }
    }
    checks.expect_none("theta_additive", add_bad);
    checks.expect_none("theta_multiplicative", mul_bad);
    Ok(CongruenceReport::from_parts(r.precision(), Vec::new(), checks, vec![format!("{} pairs", pairs.len())]))
}

#[cfg(test)]
mod tests {
    use super::super::{CoeffPsi, Shape};
    use super::*;
    use crate::arith::WittRing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(prec: u32, image: impl Fn(&FiniteAlgebra, &Vector) -> Vector) -> PsiRingPresentation {
        let r = WittRing::prime_field(2, prec).unwrap();
        let shape = Shape::PolyRing { vars: vec!["x".into()], degree_bound: 8 };
        let alg = shape.build(&r).unwrap();
        let x = alg.generators[0].1.clone();
        PsiRingPresentation::new(&r, shape, CoeffPsi::Identity, vec![image(&alg, &x)]).unwrap()
    }

    #[test]
    fn squaring_passes_with_zero_theta() {
        let p = poly(5, |a, x| a.mul(x, x));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = wilkerson_check(&p, 20, &mut rng).unwrap();
        assert!(rep.passed);
        let th = derive_theta(&p).unwrap();
        assert!(th.values.iter().all(|(_, v)| v.iter().all(|c| c.is_zero())));
        assert!(theta_consistency(&p, &th, 30, &mut rng).unwrap().passed);
    }

    #[test]
    fn identity_fails_at_x() {
        let p = poly(5, |_, x| x.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = wilkerson_check(&p, 5, &mut rng).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.witnesses[0].label, "x");
        assert!(replay_wilkerson_witness(&p, &rep.witnesses[0]));
        match derive_theta(&p) {
            Err(ThetaError::CongruenceFails(w)) => assert_eq!(w.label, "x"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn integer_theta_values() {
        let r = WittRing::prime_field(2, 5).unwrap();
        let p = PsiRingPresentation::coefficients(&r, CoeffPsi::Identity);
        let low = r.with_precision(4).unwrap();
        assert_eq!(theta_of(&p, &[r.int(3)]).unwrap(), vec![low.int(-3)]);
        assert_eq!(theta_of(&p, &[r.int(2)]).unwrap(), vec![low.int(-1)]);
        assert_eq!(theta_of(&p, &[r.int(0)]).unwrap(), vec![low.int(0)]);
        let r3 = WittRing::prime_field(3, 4).unwrap();
        let p3 = PsiRingPresentation::coefficients(&r3, CoeffPsi::Identity);
        assert_eq!(theta_of(&p3, &[r3.int(2)]).unwrap(), vec![r3.with_precision(3).unwrap().int(-2)]);
    }

    #[test]
    fn frobenius_on_witt_vectors() {
        let r = WittRing::unramified(2, 2, 4).unwrap();
        let p = PsiRingPresentation::coefficients(&r, CoeffPsi::Frobenius);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(wilkerson_check(&p, 50, &mut rng).unwrap().passed);
        let th = derive_theta(&p).unwrap();
        assert!(theta_consistency(&p, &th, 50, &mut rng).unwrap().passed);
        let id = PsiRingPresentation::coefficients(&r, CoeffPsi::Identity);
        let rep = wilkerson_check(&id, 0, &mut rng).unwrap();
        assert_eq!(rep.witnesses[0].label, "t");
    }

    #[test]
    fn idempotent_quotient() {
        let r = WittRing::prime_field(2, 4).unwrap();
        let shape = Shape::MonicQuotient { var: "x".into(), modulus: vec![r.zero(), r.int(-1), r.one()] };
        let alg = shape.build(&r).unwrap();
        let x = alg.generators[0].1.clone();
        let p = PsiRingPresentation::new(&r, shape, CoeffPsi::Identity, vec![alg.mul(&x, &x)]).unwrap();
        let th = derive_theta(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(theta_consistency(&p, &th, 40, &mut rng).unwrap().passed);
    }
}
