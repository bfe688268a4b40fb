use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use powops::arith::{binomial, Ring, WittRing};
use powops::bialgebra::{height1_gamma, GammaModule};
use powops::fgl::{honda, FormalGroupLaw};
use powops::graded::{twisted_tensor, verify_coherence, GradedObj};
use powops::linalg::Matrix;
use powops::series::TruncSeries;
use powops::theta::{
    derive_theta, gamma_congruence_check, replay_wilkerson_witness, theta_of, verify_weight_p_squares, wilkerson_check, CoeffPsi,
    FrobeniusClassSpec, PsiRingPresentation, Shape, ThetaError,
};
use powops::weights::{
    binomial_gcd, brute_force_surjective, epi_family_check, inherit_structure, prime_power, regularity_certificate, subobject_data,
    EpiFamily, InheritOutcome,
};

fn as_str(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn series(r: &WittRing, bound: u32, coeffs: &[i64]) -> TruncSeries<WittRing> {
    TruncSeries::from_terms(r, &["x"], bound, coeffs.iter().enumerate().map(|(i, &c)| (vec![i as u32], r.int(c))))
}

#[test]
fn frobenius_is_a_ring_map_lifting_pth_power_exhaustively() {
    for (p, f, n) in [(2, 2, 2), (3, 2, 1), (2, 3, 1)] {
        let r = WittRing::unramified(p, f, n).unwrap();
        let elems = r.elements();
        for a in &elems {
            assert!(r.sub(&r.frobenius(a), &r.pow(a, p)).divisible_by_p());
            assert_eq!(r.frobenius_pow(a, f as i64), *a);
            for b in &elems {
                assert_eq!(r.frobenius(&r.mul(a, b)), r.mul(&r.frobenius(a), &r.frobenius(b)));
                assert_eq!(r.frobenius(&r.add(a, b)), r.add(&r.frobenius(a), &r.frobenius(b)));
            }
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn frobenius_on_random_elements(c in prop::collection::vec(0i64..1 << 20, 3), d in prop::collection::vec(0i64..1 << 20, 3)) {
        let r = WittRing::unramified(3, 3, 5).unwrap();
        let (a, b) = (r.elem(&c), r.elem(&d));
        prop_assert_eq!(r.frobenius(&r.mul(&a, &b)), r.mul(&r.frobenius(&a), &r.frobenius(&b)));
        prop_assert_eq!(r.frobenius(&r.add(&a, &b)), r.add(&r.frobenius(&a), &r.frobenius(&b)));
        prop_assert!(r.sub(&r.frobenius(&a), &r.pow(&a, 3)).divisible_by_p());
        prop_assert_eq!(r.frobenius_pow(&a, 3), a);
    }

    #[test]
    fn divide_by_p_inverts_multiplication(c in prop::collection::vec(0i64..1 << 20, 2)) {
        let r = WittRing::unramified(2, 2, 6).unwrap();
        let x = r.elem(&c);
        let q = r.divide_by_p(&r.mul(&r.int(2), &x)).unwrap();
        let low = r.with_precision(5).unwrap();
        prop_assert_eq!(q, low.reduce(&x).unwrap());
    }

    #[test]
    fn series_product_is_commutative_and_associative(
        a in prop::collection::vec(-20i64..20, 6),
        b in prop::collection::vec(-20i64..20, 6),
        c in prop::collection::vec(-20i64..20, 6),
    ) {
        let r = WittRing::prime_field(2, 4).unwrap();
        let (a, b, c) = (series(&r, 8, &a), series(&r, 8, &b), series(&r, 8, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn reversion_composes_to_identity(u in 0i64..8, rest in prop::collection::vec(-20i64..20, 6)) {
        let r = WittRing::prime_field(2, 4).unwrap();
        let mut coeffs = vec![0, 2 * u + 1];
        coeffs.extend(rest);
        let f = series(&r, 8, &coeffs);
        let g = f.reversion().unwrap();
        let x = f.gen(0);
        prop_assert_eq!(f.substitute(&[g.clone()]).unwrap(), x.clone());
        prop_assert_eq!(g.substitute(&[f]).unwrap(), x);
    }

    #[test]
    fn weierstrass_recomposes(low in prop::collection::vec(-10i64..10, 3), unit in 0i64..8, high in prop::collection::vec(-10i64..10, 4)) {
        let r = WittRing::prime_field(3, 3).unwrap();
        // lowest unit coefficient in degree 3
        let mut coeffs: Vec<i64> = low.iter().map(|c| 3 * c).collect();
        coeffs.push(3 * unit + 1);
        coeffs.extend(high);
        let f = series(&r, 9, &coeffs);
        let (u, g) = f.weierstrass_prepare().unwrap();
        prop_assert_eq!(&u * &g, f);
        prop_assert_eq!(g.coeff1(3), r.one());
    }

    #[test]
    fn n_series_is_a_homomorphism(a in 1i64..5, b in 1i64..5) {
        let r = WittRing::prime_field(2, 4).unwrap();
        let g = FormalGroupLaw::multiplicative(&r, 8);
        let ab = g.n_series(a * b).unwrap();
        let composed = g.n_series(a).unwrap().substitute(&[g.n_series(b).unwrap()]).unwrap();
        prop_assert_eq!(ab, composed);
    }

    #[test]
    fn height_is_a_coordinate_invariant(c in prop::collection::vec(0i64..2, 4)) {
        let f2 = WittRing::prime_field(2, 1).unwrap();
        let mut coeffs = vec![0, 1];
        coeffs.extend(c);
        let phi = series(&f2, 8, &coeffs);
        for g in [FormalGroupLaw::multiplicative(&f2, 8), honda(2, 2, 1, 8).unwrap()] {
            let h = g.height(2).unwrap();
            let conj = g.conjugate(&phi).unwrap();
            prop_assert!(conj.axioms().ok());
            prop_assert_eq!(conj.height(2).unwrap(), h);
            prop_assert!(conj.frobenius_isogeny().unwrap().verify());
        }
    }

    #[test]
    fn twisted_tensor_rank_formula(a in 0usize..3, b in 0usize..3, c in 0usize..3, d in 0usize..3) {
        let r = WittRing::prime_field(2, 3).unwrap();
        let names = |n: usize, s: &str| (0..n).map(|i| format!("{s}{i}")).collect::<Vec<_>>();
        let (e1, o1, e2, o2) = (names(a, "a"), names(b, "b"), names(c, "c"), names(d, "d"));
        let m = GradedObj::new(&r, &as_str(&e1), &as_str(&o1)).unwrap();
        let n = GradedObj::new(&r, &as_str(&e2), &as_str(&o2)).unwrap();
        let t = twisted_tensor(&m, &n).unwrap();
        prop_assert_eq!(t.rank(0), a * c + b * d);
        prop_assert_eq!(t.rank(1), a * d + b * c);
    }

    #[test]
    fn random_object_sets_are_coherent(picks in prop::collection::vec(0usize..6, 1..4)) {
        let r = WittRing::prime_field(2, 3).unwrap();
        let pool = [
            GradedObj::unit(&r),
            GradedObj::omega(&r),
            GradedObj::omega_half(&r),
            GradedObj::even_odd(&r),
            GradedObj::new(&r, &["a"], &["b", "c"]).unwrap(),
            GradedObj::new(&r, &[], &["d"]).unwrap(),
        ];
        let objs: Vec<_> = picks.iter().map(|&i| pool[i].clone()).collect();
        prop_assert!(verify_coherence(&objs, None).unwrap().ok());
    }

    #[test]
    fn module_tensor_is_associative_and_round_trips(a in 0i64..64, b in 0i64..64, c in 0i64..64) {
        let g = height1_gamma(2, 3, 2, 2).unwrap();
        let r = &g.ring;
        let module = |x: i64| {
            let m = Matrix::from_rows(r, vec![vec![r.elem(&[x % 8, x / 8])]]);
            GammaModule::height1(&g, vec!["e".into()], &m).unwrap()
        };
        let (ma, mb, mc) = (module(a), module(b), module(c));
        let left = ma.tensor(&mb).unwrap().tensor(&mc).unwrap();
        let right = ma.tensor(&mb.tensor(&mc).unwrap()).unwrap();
        prop_assert_eq!(&left.act, &right.act);
        let unit = GammaModule::trivial(&g);
        prop_assert_eq!(&ma.tensor(&unit).unwrap().act, &ma.act);
        prop_assert_eq!(ma.to_comodule().to_module(), ma.clone());
    }

    #[test]
    fn wilkerson_pass_iff_theta_exists(coeffs in prop::collection::vec(0i64..32, 1..4)) {
        let r = WittRing::prime_field(2, 5).unwrap();
        let shape = Shape::PolyRing { vars: vec!["x".into()], degree_bound: 6 };
        let alg = shape.build(&r).unwrap();
        let x = alg.generators[0].1.clone();
        // ψ(x) = c_0 + c_1 x + c_2 x^2 + …
        let mut image = alg.zero();
        let mut xp = alg.unit.clone();
        for &c in &coeffs {
            image = alg.add(&image, &alg.scale(&xp, &r.int(c)));
            xp = alg.mul(&xp, &x);
        }
        let Ok(p) = PsiRingPresentation::new(&r, shape, CoeffPsi::Identity, vec![image]) else {
            return Ok(());
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let Ok(rep) = wilkerson_check(&p, 10, &mut rng) else { return Ok(()) };
        match derive_theta(&p) {
            Ok(th) => {
                prop_assert!(rep.passed);
                for _ in 0..10 {
                    let e = p.algebra.random_element(&mut rng);
                    let t = theta_of(&p, &e).unwrap();
                    let rebuilt = p.algebra.add(&p.algebra.pow(&e, 2), &p.algebra.scale(&p.algebra.lift(&t).unwrap(), &r.int(2)));
                    prop_assert_eq!(rebuilt, p.psi(&e));
                }
                prop_assert!(!th.values.is_empty());
            }
            Err(ThetaError::CongruenceFails(w)) => {
                prop_assert!(!rep.passed);
                prop_assert!(replay_wilkerson_witness(&p, &w));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn gamma_verdicts_stable_under_shift(c in prop::collection::vec(0i64..8, 2), a in 0i64..8) {
        let g = height1_gamma(2, 3, 2, 2).unwrap();
        let r = &g.ring;
        let module = GammaModule::height1(&g, vec!["1".into()], &Matrix::from_rows(r, vec![vec![r.int(a)]])).unwrap();
        let b = powops::bialgebra::GammaAlgebra { module, mult: vec![vec![vec![r.one()]]], unit: vec![r.one()] };
        let sigma = FrobeniusClassSpec::height1(&g);
        let base = gamma_congruence_check(&g, &sigma, &b, 3).unwrap();
        let shifted = gamma_congruence_check(&g, &sigma.shifted(&[r.elem(&c)]), &b, 3).unwrap();
        prop_assert_eq!(base.passed, shifted.passed);
        prop_assert_eq!(base.passed, a % 2 == 1);
        let residues = |rep: &powops::theta::CongruenceReport| rep.witnesses.iter().map(|w| w.residue.clone()).collect::<Vec<_>>();
        prop_assert_eq!(residues(&base), residues(&shifted));
    }

    #[test]
    fn pullback_has_rank_two(p_idx in 0usize..3, n in 2u32..5) {
        let p = [2u64, 3, 5][p_idx];
        let g = height1_gamma(p, n, 1, 1).unwrap();
        let sq = verify_weight_p_squares(&g, &FrobeniusClassSpec::height1(&g)).unwrap();
        prop_assert!(sq.report.passed());
        prop_assert_eq!(sq.pullback_basis.cols(), 2);
        let k = g.ring.residue_field();
        let reduced = Matrix::from_fn(&k, 2, 2, |i, j| k.reduce(sq.pullback_basis.get(i, j)).unwrap());
        // free of rank two, but the inclusion into W² drops rank mod p
        prop_assert_eq!(powops::linalg::field_rank(&reduced).rank, 1);
        prop_assert_eq!(sq.pullback_exponents, vec![0, 1]);
    }

    #[test]
    fn certificate_methods_agree(m in 0u64..3000, p_idx in 0usize..6) {
        let p = [2u64, 3, 5, 7, 11, 13][p_idx];
        let c = regularity_certificate(m, p).unwrap();
        prop_assert!(c.methods_agree());
        prop_assert_eq!(c.is_critical(), m == p);
        if m >= 2 && m != p {
            prop_assert_eq!(c.valuation(), Some(0));
        }
    }

    #[test]
    fn epi_check_matches_brute_force(entries in prop::collection::vec(0usize..64, 6), target in 1usize..3, cols in 1usize..4, field in any::<bool>()) {
        let ring = if field { WittRing::unramified(2, 2, 1).unwrap() } else { WittRing::prime_field(2, 3).unwrap() };
        let elems = ring.elements();
        let m = Matrix::from_fn(&ring, target, cols, |i, j| elems[entries[(i * cols + j) % entries.len()] % elems.len()].clone());
        let fam = EpiFamily::new(&ring, target, vec![m]);
        prop_assert_eq!(epi_family_check(&fam).unwrap().surjective, brute_force_surjective(&fam));
    }

    #[test]
    fn induced_structure_is_certified(theta in prop::collection::vec(0i64..2, 4), sub in 0usize..3) {
        let r = WittRing::prime_field(2, 1).unwrap();
        let mult = Matrix::from_ints(&r, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]);
        let th = Matrix::from_ints(&r, &[&[theta[0], theta[1]], &[theta[2], theta[3]]]);
        let incl = match sub {
            0 => Matrix::from_ints(&r, &[&[1], &[0]]),
            1 => Matrix::identity(&r, 2),
            _ => Matrix::from_ints(&r, &[&[1], &[1]]),
        };
        let data = subobject_data(&r, 3, mult, vec![r.one(), r.zero()], &th, incl);
        match inherit_structure(&data) {
            Ok(InheritOutcome::Induced(s)) => {
                prop_assert!(s.report.passed());
                for (w, map) in s.psi_n.iter().enumerate() {
                    prop_assert_eq!(data.incl.mul(map), data.psi[w].mul(&data.t_incl[w]));
                }
            }
            Ok(InheritOutcome::Offending { weight, .. }) => prop_assert_eq!(weight, 2),
            Err(e) => {
                prop_assert!(sub == 2, "{e}");
            }
        }
    }
}

#[test]
fn binomial_gcd_matches_direct_gcd_on_prime_powers() {
    for m in 2..=500u64 {
        let direct = (1..m).fold(BigInt::from(0), |g, i| g.gcd(&binomial(m, i)));
        assert_eq!(binomial_gcd(m), direct, "m = {m}");
        let expected = match prime_power(m) {
            Some((p, _)) => BigInt::from(p),
            None => BigInt::from(1),
        };
        assert_eq!(direct, expected, "m = {m}");
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut q = p;
        while q <= 500 {
            assert_eq!(binomial_gcd(q), BigInt::from(p));
            q *= p;
        }
    }
}
