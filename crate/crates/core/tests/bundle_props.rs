//! Randomized properties of the bundle classification and cusp invariants:
//! conjugation invariance, eigenvalue sign patterns, the narrow/wide class
//! number relation, and the dual-datum identities.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cusplab_core::cuspinv::{delta, dual_module, CuspDatum};
use cusplab_core::dedekind::{rademacher_psi, Monodromy};
use cusplab_core::exactnum::{Embedding, QuadIrr, Rational};
use cusplab_core::quadfield::{field_data, squarefree_up_to};
use cusplab_core::solbundle::{
    build_representation, classify_geometry, eigen_data, parse_presentation, stabilizer_unit_with,
    LatticeModule,
};

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Monodromy {
    let upper = Monodromy::from_i64(1, 1, 0, 1).unwrap();
    let lower = Monodromy::from_i64(1, 0, 1, 1).unwrap();
    let mut m = Monodromy::identity();
    for _ in 0..len {
        let g = match rng.gen_range(0..4) {
            0 => upper.clone(),
            1 => upper.inverse(),
            2 => lower.clone(),
            _ => lower.inverse(),
        };
        m = m.mul(&g);
    }
    m
}

fn random_hyperbolic(rng: &mut ChaCha8Rng) -> Monodromy {
    loop {
        let len = rng.gen_range(2..=8);
        let m = random_word(rng, len);
        if m.is_hyperbolic() {
            return m;
        }
    }
}

#[test]
fn classification_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for _ in 0..300 {
        let len = rng.gen_range(1..=8);
        let a = random_word(&mut rng, len);
        let ulen = rng.gen_range(1..=10);
        let u = random_word(&mut rng, ulen);
        let conj = u.mul(&a).mul(&u.inverse());
        assert_eq!(
            classify_geometry(&a),
            classify_geometry(&conj),
            "A = {a}, U = {u}"
        );
    }
}

#[test]
fn eigen_data_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    for _ in 0..200 {
        let a = random_hyperbolic(&mut rng);
        let ulen = rng.gen_range(1..=10);
        let u = random_word(&mut rng, ulen);
        let conj = u.mul(&a).mul(&u.inverse());
        let (d1, beta1, _) = eigen_data(&a).unwrap();
        let (d2, beta2, _) = eigen_data(&conj).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(beta1, beta2, "same trace, same eigenvalue");
    }
}

#[test]
fn eigenvalue_sign_pattern_follows_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..200 {
        let a = random_hyperbolic(&mut rng);
        let (_, beta, _) = eigen_data(&a).unwrap();
        if a.trace().is_positive() {
            assert!(
                beta.is_totally_positive(),
                "trace > 2 gives a totally positive unit"
            );
        } else {
            assert_eq!(beta.sign(Embedding::First), -1);
            assert_eq!(beta.sign(Embedding::Second), -1);
        }
        assert_eq!(
            beta.norm(),
            Rational::one(),
            "det 1 makes the eigenvalue a norm-1 unit"
        );
    }
}

#[test]
fn narrow_wide_relation_up_to_200() {
    for d in squarefree_up_to(200) {
        let fd = field_data(&BigInt::from(d)).unwrap();
        let (h, h_plus) = fd.class_numbers();
        let expected = if fd.eps0_norm() == 1 { 2 * h } else { h };
        assert_eq!(h_plus, expected, "narrow/wide relation for d = {d}");
    }
}

#[test]
fn representations_verify_on_random_sol_presentations() {
    let mut rng = ChaCha8Rng::seed_from_u64(304);
    for _ in 0..50 {
        let a = random_hyperbolic(&mut rng);
        let (e00, e01, e10, e11) = a.entries();
        let text = format!("fiber_rank 2\nbase_rank 1\nholonomy y1 {e00} {e01} {e10} {e11}\n");
        let pres = parse_presentation(&text).unwrap();
        let rep = build_representation(&pres).unwrap();
        assert!(
            rep.verify_relations(&pres).unwrap(),
            "relators fail for {a}"
        );
        assert!(rep.is_integral());
        assert!(rep.fiber_index.is_positive());
    }
}

#[test]
fn dual_datum_matches_on_random_submodules() {
    // the multiplication matrices on M and M* share trace, determinant and
    // psi, so the defect is blind to dualization
    let mut rng = ChaCha8Rng::seed_from_u64(305);
    let pool = squarefree_up_to(30);
    for _ in 0..40 {
        let d = pool[rng.gen_range(0..pool.len())];
        let fd = field_data(&BigInt::from(d)).unwrap();
        let a = rng.gen_range(1u64..=3);
        let c = rng.gen_range(1u64..=2);
        let b = rng.gen_range(0..a);
        let dd = BigInt::from(d);
        let mu2 = QuadIrr::integer(b, &dd)
            .checked_add(&fd.omega().scale(&Rational::from_integer(c.into())))
            .unwrap();
        let module = LatticeModule::new(QuadIrr::integer(a, &dd), mu2).unwrap();
        let (eps_m, _) = stabilizer_unit_with(&module, &fd).unwrap();
        let dual = dual_module(&module);

        let t = module.multiplication_monodromy(&eps_m).unwrap();
        let t_dual = dual.multiplication_monodromy(&eps_m).unwrap();
        assert_eq!(t.trace(), t_dual.trace());
        assert_eq!(
            rademacher_psi(&t).unwrap(),
            rademacher_psi(&t_dual).unwrap()
        );

        let datum = CuspDatum::new(module, eps_m.clone()).unwrap();
        let dual_datum = CuspDatum::new(dual, eps_m).unwrap();
        let r1 = delta(&datum).unwrap();
        let r2 = delta(&dual_datum).unwrap();
        assert_eq!(r1.delta, r2.delta, "d = {d}");
        assert!(r1.route_agreement && r2.route_agreement);
    }
}
