//! The acceptance suite: twelve end-to-end criteria, each reduced to a pass/fail
//! verdict with a short detail line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{Ring, WittRing};
use crate::bialgebra::{dualize, height1_gamma, points_category, GammaAlgebra, GammaModule, TwistedBialgebra};
use crate::fgl::{honda, lubin_tate, FormalGroupLaw, Height};
use crate::graded::{interchange, verify_coherence, GradedObj, TauMutation};
use crate::linalg::Matrix;
use crate::theta::{
    derive_theta, frobenius_congruence_comodule, gamma_congruence_check, replay_gamma_witness, replay_wilkerson_witness,
    theta_consistency, theta_of, verify_weight_p_squares, wilkerson_check, ComoduleAlgebra, CoeffPsi, FrobeniusClassSpec,
    PsiRingPresentation, Shape,
};
use crate::weights::{
    binomial_gcd, brute_force_surjective, epi_family_check, inherit_structure, prime_power, regularity_certificate, toy_instance,
    EpiFamily, InheritOutcome,
};

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub number: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Collects named sub-checks; the first failure becomes the detail.
struct Tally {
    failures: Vec<String>,
    count: usize,
}

impl Tally {
    fn new() -> Self {
        Self { failures: Vec::new(), count: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, number: u8, name: &'static str) -> CriterionResult {
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{} checks", self.count)
        } else {
            format!("{}/{} checks failed; first: {}", self.failures.len(), self.count, self.failures[0])
        };
        CriterionResult { number, name, passed, detail }
    }
}

fn rng_for(seed: u64, criterion: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(criterion as u64))
}

fn zn(p: u64, n: u32) -> WittRing {
    WittRing::prime_field(p, n).expect("small prime power")
}

pub fn fgl_axioms() -> CriterionResult {
    let mut t = Tally::new();
    for (p, n) in [(2, 4), (3, 3)] {
        let rep = FormalGroupLaw::multiplicative(&zn(p, n), 8).axioms();
        t.check(rep.ok(), || format!("multiplicative over Z/{p}^{n}: {rep:?}"));
    }
    for (p, h, bound) in [(2, 2, 8), (3, 1, 9)] {
        match honda(p, h, 3, bound) {
            Ok(law) => {
                t.check(law.axioms().ok(), || format!("Honda({p},{h}) over Z/{p}^3"));
                t.check(law.residue().axioms().ok(), || format!("Honda({p},{h}) mod {p}"));
            }
            Err(e) => t.check(false, || format!("Honda({p},{h}): {e}")),
        }
    }
    match lubin_tate(2, 2, 3, 2, 8) {
        Ok(lt) => {
            let rep = lt.axioms();
            t.check(rep.ok(), || format!("Lubin-Tate: {rep:?}"));
        }
        Err(e) => t.check(false, || format!("Lubin-Tate: {e}")),
    }
    t.finish(1, "formal group law axioms")
}

pub fn heights() -> CriterionResult {
    let mut t = Tally::new();
    let f2 = zn(2, 1);
    let mult = FormalGroupLaw::multiplicative(&f2, 8).height(2);
    t.check(mult == Ok(Height::Exact(1)), || format!("multiplicative mod 2: {mult:?}"));
    match honda(2, 2, 3, 8) {
        Ok(h) => {
            let h = h.residue();
            let ht = h.height(2);
            t.check(ht == Ok(Height::Exact(2)), || format!("Honda(2,2) mod 2: {ht:?}"));
            match h.n_series(2) {
                Ok(s) => {
                    let low = (0..4).all(|d| f2.is_zero(&s.coeff1(d)));
                    t.check(low && s.coeff1(4) == f2.one(), || format!("[2](x) = {s}"));
                }
                Err(e) => t.check(false, || e.to_string()),
            }
        }
        Err(e) => t.check(false, || e.to_string()),
    }
    let add = FormalGroupLaw::additive(&zn(3, 1), 10).height(3);
    t.check(matches!(add, Ok(Height::AtLeast(_))), || format!("additive mod 3: {add:?}"));
    t.finish(2, "heights")
}

pub fn bcp_structure() -> CriterionResult {
    let mut t = Tally::new();
    match lubin_tate(2, 2, 3, 2, 8).map_err(|e| e.to_string()).and_then(|lt| lt.bcp_module(2).map_err(|e| e.to_string())) {
        Ok(b) => {
            let r = b.distinguished.ring();
            let degree = b.distinguished.terms().keys().map(|m| m[0]).max();
            t.check(degree == Some(4), || format!("distinguished degree {degree:?}"));
            t.check(b.distinguished.coeff1(4) == r.one(), || "not monic".into());
            let lower_in_m = (0..4).all(|d| r.in_maximal_ideal(&b.distinguished.coeff1(d)));
            t.check(lower_in_m, || "lower coefficients not in the maximal ideal".into());
            t.check(b.rank == 4 && b.basis_names() == ["1", "x", "x^2", "x^3"], || format!("basis {:?}", b.basis_names()));
            t.check(&b.unit * &b.distinguished == b.p_series, || "unit·distinguished ≠ [2](x)".into());
            t.check(r.is_unit(&b.unit.constant_term()), || "unit factor has non-unit constant term".into());
        }
        Err(e) => t.check(false, || e),
    }
    t.finish(3, "Weierstrass preparation of [p](x)")
}

pub fn coherence() -> CriterionResult {
    let mut t = Tally::new();
    let r = zn(2, 3);
    let objs = GradedObj::standard_set(&r);
    match verify_coherence(&objs, None) {
        Ok(rep) => t.check(rep.ok(), || format!("{:?}", rep.first_failure().map(|c| &c.name))),
        Err(e) => t.check(false, || e.to_string()),
    }
    let h = GradedObj::omega_half(&r);
    let tau = interchange(&h, &h);
    t.check(tau.f[0] == Matrix::from_ints(&r, &[&[-1]]) && tau.f[1].rows() == 0, || "τ on ω^½⊗ω^½ is not -id".into());
    let mut mutations = 0;
    for left in 0..objs.len() {
        for right in 0..objs.len() {
            let tau = interchange(&objs[left], &objs[right]);
            for degree in 0..2 {
                for column in 0..tau.f[degree].cols() {
                    mutations += 1;
                    let m = TauMutation { left, right, degree, column };
                    let detected = verify_coherence(&objs, Some(m)).map(|rep| !rep.ok()).unwrap_or(false);
                    t.check(detected, || format!("{m:?} undetected"));
                }
            }
        }
    }
    t.check(mutations > 0, || "no mutations generated".into());
    t.finish(4, "twisted Z/2 coherence")
}

pub fn bialgebra_axioms(seed: u64) -> CriterionResult {
    let mut t = Tally::new();
    match height1_gamma(2, 3, 2, 3) {
        Ok(g) => {
            match g.verify() {
                Ok(rep) => t.check(rep.passed(), || format!("{:?}", rep.first_failure())),
                Err(e) => t.check(false, || e.to_string()),
            }
            let mut rng = rng_for(seed, 5);
            for _ in 0..50 {
                let (m, slot, d) = g.random_mutation(&mut rng);
                let detected = m.verify().map(|r| !r.passed()).unwrap_or(true);
                t.check(detected, || format!("{slot:?} + {d} undetected"));
            }
        }
        Err(e) => t.check(false, || e.to_string()),
    }
    t.finish(5, "twisted bialgebra axioms")
}

pub fn dual_scheme() -> CriterionResult {
    let mut t = Tally::new();
    let targets = [zn(2, 1), zn(2, 2), WittRing::unramified(2, 2, 1).expect("F_4")];
    for (f, prec) in [(2, 3), (1, 2)] {
        let Ok(g) = height1_gamma(2, prec, f, 3) else {
            t.check(false, || format!("height1_gamma f={f}"));
            continue;
        };
        let a = match dualize(&g) {
            Ok(a) => a,
            Err(e) => {
                t.check(false, || e.to_string());
                continue;
            }
        };
        let rep = a.verify();
        t.check(rep.passed(), || format!("f={f}: {:?}", rep.first_failure()));
        t.check(a.i_star_is_iso(), || format!("f={f}: i* not an isomorphism"));
        for target in &targets {
            match points_category(&a, target) {
                Ok(cat) => t.check(cat.report.passed(), || format!("f={f} over {target:?}: {:?}", cat.report.first_failure())),
                Err(e) => t.check(false, || format!("f={f} over {target:?}: {e}")),
            }
        }
    }
    t.finish(6, "dual category scheme")
}

pub fn wilkerson(seed: u64) -> CriterionResult {
    let mut t = Tally::new();
    let mut rng = rng_for(seed, 7);
    let r = zn(2, 5);
    let shape = Shape::PolyRing { vars: vec!["x".into()], degree_bound: 8 };
    let result = (|| -> Result<(), crate::theta::ThetaError> {
        let alg = shape.build(&r)?;
        let x = alg.generators[0].1.clone();
        let sq = PsiRingPresentation::new(&r, shape.clone(), CoeffPsi::Identity, vec![alg.mul(&x, &x)])?;
        t.check(wilkerson_check(&sq, 100, &mut rng)?.passed, || "ψ(x)=x² fails".into());
        let th = derive_theta(&sq)?;
        t.check(th.values.iter().all(|(_, v)| v.iter().all(|c| c.is_zero())), || "θ ≠ 0 for ψ(x)=x²".into());
        let cons = theta_consistency(&sq, &th, 100, &mut rng)?;
        t.check(cons.passed, || format!("θ identities on Z/32[x]: {:?}", cons.checks.first_failure()));

        let id = PsiRingPresentation::new(&r, shape.clone(), CoeffPsi::Identity, vec![x.clone()])?;
        let rep = wilkerson_check(&id, 10, &mut rng)?;
        let w = rep.witnesses.first();
        t.check(!rep.passed && w.is_some_and(|w| w.label == "x"), || format!("ψ(x)=x: {:?}", w.map(|w| &w.label)));
        t.check(w.is_some_and(|w| replay_wilkerson_witness(&id, w)), || "witness does not replay".into());

        let w4 = WittRing::unramified(2, 2, 4)?;
        let frob = PsiRingPresentation::coefficients(&w4, CoeffPsi::Frobenius);
        t.check(wilkerson_check(&frob, 100, &mut rng)?.passed, || "ψ=σ on W(F_4) fails".into());
        let th = derive_theta(&frob)?;
        let two = w4.int(2);
        for _ in 0..100 {
            let a = frob.algebra.random_element(&mut rng);
            let theta = theta_of(&frob, &a)?;
            let lifted = frob.algebra.lift(&theta)?;
            let rebuilt = frob.algebra.add(&frob.algebra.mul(&a, &a), &frob.algebra.scale(&lifted, &two));
            t.check(rebuilt == frob.psi(&a), || format!("ψ(a) ≠ a²+2θ(a) at {}", frob.algebra.render(&a)));
        }
        let cons = theta_consistency(&frob, &th, 100, &mut rng)?;
        t.check(cons.passed, || format!("θ identities on W(F_4): {:?}", cons.checks.first_failure()));
        Ok(())
    })();
    if let Err(e) = result {
        t.check(false, || e.to_string());
    }
    t.finish(7, "Wilkerson criterion at height one")
}

fn rank_one_algebra(gamma: &TwistedBialgebra, psi: i64) -> Option<GammaAlgebra> {
    let r = &gamma.ring;
    let module = GammaModule::height1(gamma, vec!["1".into()], &Matrix::from_rows(r, vec![vec![r.int(psi)]])).ok()?;
    Some(GammaAlgebra { module, mult: vec![vec![vec![r.one()]]], unit: vec![r.one()] })
}

pub fn gamma_congruence(seed: u64) -> CriterionResult {
    let mut t = Tally::new();
    let mut rng = rng_for(seed, 8);
    let result = (|| -> Result<(), String> {
        let g = height1_gamma(2, 3, 2, 2).map_err(|e| e.to_string())?;
        let sigma = FrobeniusClassSpec::height1(&g);
        let good = rank_one_algebra(&g, 1).ok_or("module")?;
        let bad = rank_one_algebra(&g, 2).ok_or("module")?;
        let run = |s: &FrobeniusClassSpec, b: &GammaAlgebra| gamma_congruence_check(&g, s, b, 3).map_err(|e| e.to_string());
        t.check(run(&sigma, &good)?.passed, || "W with ψ ↦ σ fails".into());
        let rep = run(&sigma, &bad)?;
        t.check(!rep.passed, || "perturbed action passes".into());
        t.check(rep.witnesses.first().is_some_and(|w| replay_gamma_witness(&bad, &sigma, w)), || "witness does not replay".into());
        for _ in 0..20 {
            let c: Vec<i64> = (0..g.ring.degree()).map(|_| rng.gen_range(0..g.ring.modulus()) as i64).collect();
            let gamma_elem = g.ring.elem(&c);
            let s = sigma.shifted(&[gamma_elem.clone()]);
            t.check(run(&s, &good)?.passed, || format!("σ + 2·{gamma_elem} changes the good verdict"));
            t.check(!run(&s, &bad)?.passed, || format!("σ + 2·{gamma_elem} changes the bad verdict"));
        }
        Ok(())
    })();
    if let Err(e) = result {
        t.check(false, || e);
    }
    t.finish(8, "congruence for Γ-algebras")
}

pub fn frobenius_comodule(seed: u64) -> CriterionResult {
    let mut t = Tally::new();
    let mut rng = rng_for(seed, 9);
    let f2 = zn(2, 1);
    let shape = Shape::PolyRing { vars: vec!["y".into()], degree_bound: 8 };
    let result = (|| -> Result<(), crate::theta::ThetaError> {
        let alg = shape.build(&f2)?;
        let y = alg.generators[0].1.clone();
        let good = ComoduleAlgebra { ring: f2.clone(), shape: shape.clone(), can: vec![f2.one()], coaction: vec![vec![alg.mul(&y, &y)]] };
        t.check(frobenius_congruence_comodule(&good, 20, &mut rng)?.passed, || "ψ₁(y)=1⊗y² fails".into());
        let bad = ComoduleAlgebra { coaction: vec![vec![y.clone()]], ..good };
        let rep = frobenius_congruence_comodule(&bad, 20, &mut rng)?;
        let label = rep.witnesses.first().map(|w| w.label.clone());
        t.check(!rep.passed && label.as_deref() == Some("y"), || format!("ψ₁(y)=1⊗y: witness {label:?}"));
        Ok(())
    })();
    if let Err(e) = result {
        t.check(false, || e.to_string());
    }
    t.finish(9, "Frobenius congruence on comodules")
}

pub fn weight_p_squares() -> CriterionResult {
    let mut t = Tally::new();
    match height1_gamma(2, 4, 1, 1).map_err(|e| e.to_string()).and_then(|g| {
        verify_weight_p_squares(&g, &FrobeniusClassSpec::height1(&g)).map_err(|e| e.to_string())
    }) {
        Ok(sq) => {
            for c in &sq.report.checks {
                t.check(c.passed, || format!("{}: {:?}", c.name, c.witness));
            }
            t.check(sq.pullback_basis.cols() == 2, || "pullback basis is not of rank 2".into());
            t.check(sq.pushout_rank == 2, || format!("pushout rank {}", sq.pushout_rank));
            t.check(sq.generators.ring().precision() == 3, || "generation not checked at precision 3".into());
        }
        Err(e) => t.check(false, || e),
    }
    t.finish(10, "weight-p pullback and pushout")
}

pub fn critical_weights() -> CriterionResult {
    let mut t = Tally::new();
    for p in [2u64, 3, 5] {
        for m in 0..=200u64 {
            match regularity_certificate(m, p) {
                Ok(c) => {
                    t.check(c.is_critical() == (m == p), || format!("m={m}, p={p}: {:?}", c.case));
                    if m >= 2 && m != p {
                        t.check(c.valuation() == Some(0) && c.methods_agree(), || format!("m={m}, p={p}: {:?}", c.valuations));
                    }
                }
                Err(e) => t.check(false, || e.to_string()),
            }
        }
    }
    for m in 2..=500u64 {
        let g = binomial_gcd(m);
        let expected = prime_power(m).map_or(1, |(p, _)| p);
        t.check(g == expected.into(), || format!("gcd for m={m} is {g}, expected {expected}"));
    }
    t.finish(11, "critical weights")
}

fn random_family<G: Rng>(ring: &WittRing, rng: &mut G) -> EpiFamily {
    let elems = ring.elements();
    let target = rng.gen_range(1..=2);
    let mut budget = 3usize;
    let mut maps = Vec::new();
    while budget > 0 && (maps.is_empty() || rng.gen_bool(0.5)) {
        let cols = rng.gen_range(1..=budget.min(2));
        budget -= cols;
        // bias toward the maximal ideal so both verdicts occur
        let in_ideal = rng.gen_bool(0.4);
        let m = Matrix::from_fn(ring, target, cols, |_, _| {
            let x = elems[rng.gen_range(0..elems.len())].clone();
            if in_ideal {
                ring.mul(&x, &ring.int(ring.p() as i64))
            } else {
                x
            }
        });
        maps.push(m);
    }
    EpiFamily::new(ring, target, maps)
}

pub fn epimorphic_families(seed: u64) -> CriterionResult {
    let mut t = Tally::new();
    let mut rng = rng_for(seed, 12);
    let rings = [zn(2, 3), WittRing::unramified(2, 2, 1).expect("F_4")];
    let mut verdicts = [0usize; 2];
    for i in 0..200 {
        let fam = random_family(&rings[i % 2], &mut rng);
        match epi_family_check(&fam) {
            Ok(res) => {
                verdicts[usize::from(res.surjective)] += 1;
                t.check(res.surjective == brute_force_surjective(&fam), || format!("family {i} disagrees with the oracle"));
            }
            Err(e) => t.check(false, || e.to_string()),
        }
    }
    t.check(verdicts[0] > 0 && verdicts[1] > 0, || format!("verdict counts {verdicts:?}"));
    match inherit_structure(&toy_instance([0, 0], 3)) {
        Ok(InheritOutcome::Induced(s)) => {
            t.check(s.report.passed(), || format!("{:?}", s.report.first_failure()));
            t.check(s.critical == [2], || format!("critical weights {:?}", s.critical));
        }
        other => t.check(false, || format!("toy instance: {other:?}")),
    }
    match inherit_structure(&toy_instance([0, 1], 3)) {
        Ok(InheritOutcome::Offending { weight, .. }) => t.check(weight == 2, || format!("offending weight {weight}")),
        other => t.check(false, || format!("broken toy instance: {other:?}")),
    }
    t.finish(12, "epimorphic families and inheritance")
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        fgl_axioms(),
        heights(),
        bcp_structure(),
        coherence(),
        bialgebra_axioms(seed),
        dual_scheme(),
        wilkerson(seed),
        gamma_congruence(seed),
        frobenius_comodule(seed),
        weight_p_squares(),
        critical_weights(),
        epimorphic_families(seed),
    ]
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {:>2}. {} ({})", self.number, self.name, self.detail)
    }
}
