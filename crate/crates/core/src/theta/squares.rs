//! The weight-`p` pullback and pushout squares at height one.
//!
//! With `A[1] ≅ W` and `can*(a) = σ̄·ā`, the pullback is
//! `P = {(a, b) ∈ W² : σ̄a ≡ b mod p}` and `T_p(W) = Hom(P, W)`. The maps
//! `u: Γ[1] → T_p` and `v: W → T_p` are dual to the two projections.

use crate::arith::{Ring, WittElem, WittRing};
use crate::bialgebra::{dualize, TwistedBialgebra};
use crate::linalg::{kernel, smith_normal_form, solve, Matrix};
use crate::report::Report;

use super::{FrobeniusClassSpec, ThetaError};

#[derive(Debug, Clone)]
pub struct WeightPSquares {
    /// Columns form a basis of the pullback.
    pub pullback_basis: Matrix<WittRing>,
    /// Invariant-factor exponents of the basis inside `W²`.
    pub pullback_exponents: Vec<u32>,
    /// Rank of the free cokernel presenting the pushout.
    pub pushout_rank: usize,
    /// `u(1)`, `v(1)` and `(σx - x^p)/p`, as functionals on the pullback basis,
    /// at precision `N-1`.
    pub generators: Matrix<WittRing>,
    pub report: Report,
}

pub fn verify_weight_p_squares(gamma: &TwistedBialgebra, sigma: &FrobeniusClassSpec) -> Result<WeightPSquares, ThetaError> {
    let r = &gamma.ring;
    if gamma.kmax < 1 || gamma.rank(1) != 1 || r.degree() != 1 {
        return Err(ThetaError::IncompleteAction("height one over Z/p^N with Γ[1] of rank one".into()));
    }
    if r.precision() < 2 {
        return Err(ThetaError::Arith(crate::arith::ArithError::PrecisionExhausted));
    }
    let scheme = dualize(gamma).map_err(|e| ThetaError::IncompleteAction(e.to_string()))?;
    let p = r.int(r.p() as i64);
    let s = sigma.sigma[0].clone();
    let mut rep = Report::new();
    rep.expect_none("sigma_is_unit", (!r.is_unit(&s)).then(|| s.to_string()));

    // can*(f) = ε(f·t*) at weight one; the pullback condition is σ̄·can*(a) ≡ b
    let can = scheme.t_star(1, &r.one())[0].clone();
    let cond = Matrix::from_rows(r, vec![vec![r.mul(&s, &can), r.neg(&r.one()), p.clone()]]);
    let ker = kernel(&cond);
    let gens = Matrix::from_fn(r, 2, ker.cols(), |i, j| ker.get(i, j).clone());

    let basis = Matrix::from_rows(r, vec![vec![r.one(), r.zero()], vec![r.mul(&s, &can), p.clone()]]);
    let in_p = (0..2).all(|j| {
        let a = basis.get(0, j);
        let b = basis.get(1, j);
        r.sub(&r.mul(&r.mul(&s, &can), a), b).divisible_by_p()
    });
    rep.expect_none("pullback_basis_in_module", (!in_p).then(|| "basis column violates the congruence".into()));
    rep.expect_none(
        "pullback_spanned_by_basis",
        solve(&basis, &gens).err().map(|c| format!("generator {c} outside the span")),
    );
    let snf = smith_normal_form(&basis);
    let exps = if snf.rank == 2 { snf.exponents() } else { Vec::new() };
    rep.expect_none(
        "pullback_free_rank_2",
        (snf.rank != 2 || exps.iter().any(|&e| e >= r.precision())).then(|| format!("invariant factors {exps:?}")),
    );
    // the top row (π*, j*) then (σ*, -π*) composes to zero mod p
    let row = Matrix::from_rows(r, vec![vec![r.mul(&s, &can), r.neg(&r.one())]]);
    let composite = row.mul(&basis);
    rep.expect_none(
        "top_row_exact",
        (!(0..2).all(|j| composite.get(0, j).divisible_by_p())).then(|| "composite is not zero mod p".into()),
    );

    // pushout: coker of W → W ⊕ Γ[1] ⊕ W, 1 ↦ (-p, σ, -1)
    let relation = Matrix::from_rows(r, vec![vec![r.neg(&p)], vec![s.clone()], vec![r.neg(&r.one())]]);
    let rsnf = smith_normal_form(&relation);
    let unit_pivots = rsnf.exponents().iter().all(|&e| e == 0);
    let pushout_rank = 3 - rsnf.rank;
    rep.expect_none(
        "pushout_free_rank_2",
        (!unit_pivots || pushout_rank != 2).then(|| format!("relation exponents {:?}", rsnf.exponents())),
    );

    // u(1), v(1) as functionals on the basis: (a, b) ↦ a and (a, b) ↦ b
    let u = basis.row(0);
    let v = basis.row(1);
    // β(p) = u(σ) - v(1), so β(1) = (σu - v)/p
    let bp: Vec<WittElem> = u.iter().zip(&v).map(|(a, b)| r.sub(&r.mul(&s, a), b)).collect();
    let beta = bp.iter().map(|c| r.divide_by_p(c)).collect::<Result<Vec<_>, _>>()?;
    let low = r.with_precision(r.precision() - 1)?;
    let red = |x: &WittElem| low.reduce(x).expect("same family");
    let generators = Matrix::from_rows(
        &low,
        vec![u.iter().map(red).collect(), v.iter().map(red).collect(), beta.clone()],
    )
    .transpose();
    let gsnf = smith_normal_form(&generators);
    rep.expect_none(
        "generated_by_u_v_theta",
        (gsnf.rank != 2 || gsnf.exponents().iter().any(|&e| e > 0)).then(|| format!("exponents {:?}", gsnf.exponents())),
    );
    let uv = Matrix::from_fn(&low, 2, 2, |i, j| generators.get(i, j).clone());
    let uv_snf = smith_normal_form(&uv);
    rep.expect_none(
        "u_v_alone_insufficient",
        (uv_snf.rank == 2 && uv_snf.exponents().iter().all(|&e| e == 0)).then(|| "u and v already generate".into()),
    );
    // the map from the pushout presentation to Hom(P, W) kills the relation
    let phi = Matrix::from_fn(r, 2, 3, |i, j| match j {
        0 => beta.get(i).map(|b| r.lift(b).expect("lift")).unwrap_or_else(|| r.zero()),
        1 => u[i].clone(),
        _ => v[i].clone(),
    });
    let image = phi.mul(&relation);
    let low_zero = (0..2).all(|i| red(image.get(i, 0)).is_zero());
    rep.expect_none("pushout_maps_to_dual", (!low_zero).then(|| "relation not killed".into()));

    Ok(WeightPSquares { pullback_basis: basis, pullback_exponents: exps, pushout_rank, generators, report: rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::height1_gamma;

    #[test]
    fn p2_n4() {
        let g = height1_gamma(2, 4, 1, 1).unwrap();
        let sq = verify_weight_p_squares(&g, &FrobeniusClassSpec::height1(&g)).unwrap();
        assert!(sq.report.passed(), "{:?}", sq.report.first_failure());
        let r = &g.ring;
        assert_eq!(sq.pullback_basis, Matrix::from_ints(r, &[&[1, 0], &[1, 2]]));
        assert_eq!(sq.pullback_exponents, vec![0, 1]);
        assert_eq!(sq.pushout_rank, 2);
        assert_eq!(sq.generators.ring().precision(), 3);
    }

    #[test]
    fn p3_and_shifted_sigma() {
        let g = height1_gamma(3, 3, 1, 1).unwrap();
        let sigma = FrobeniusClassSpec::height1(&g).shifted(&[g.ring.int(2)]);
        let sq = verify_weight_p_squares(&g, &sigma).unwrap();
        assert!(sq.report.passed(), "{:?}", sq.report.first_failure());
    }

    #[test]
    fn needs_precision() {
        let g = height1_gamma(2, 1, 1, 1).unwrap();
        assert!(verify_weight_p_squares(&g, &FrobeniusClassSpec::height1(&g)).is_err());
    }
}
