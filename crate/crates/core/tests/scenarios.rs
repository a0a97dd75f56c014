use std::sync::Arc;

use mor::lab::{centralizer_space, char_poly, lift_operator, monomial_matrix, validate_params};
use mor::protocol::{decrypt, decrypt_via_power, keygen};
use mor::{generator_pairs, Automorphism, Field, FieldSpec, Matrix, MorCiphertext, MorParams, Permutation};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::{ChaCha20Rng, ChaCha8Rng};

fn gf(p: u64, g: usize) -> Arc<Field> {
    Field::new(FieldSpec::new(BigUint::from(p), g).unwrap())
}

#[test]
fn monomial_power_images_follow_the_orbit_product() {
    let f = gf(11, 1);
    let alpha = Permutation::new(vec![2, 4, 1, 3]).unwrap();
    let w: Vec<_> = [2u64, 3, 7, 10].iter().map(|&x| f.from_u64(x)).collect();
    let a = monomial_matrix(&f, &w, &alpha).unwrap();
    let phi = Automorphism::from_conjugator(&a).unwrap();
    // lambda and beta read from single images: phi(1 + e_ij) = 1 + lambda_ij e_beta(ij).
    let step = |i: usize, j: usize| phi.image(i, j).as_transvection().unwrap();
    for m in [1u64, 2, 5, 12] {
        let pm = phi.power_u64(m).unwrap();
        for (i, j) in generator_pairs(4) {
            let (mut ci, mut cj, mut prod) = (i, j, f.one());
            for _ in 0..m {
                let (ni, nj, l) = step(ci, cj);
                prod = f.mul(&prod, &l);
                ci = ni;
                cj = nj;
            }
            assert_eq!(
                pm.image(i, j).as_transvection(),
                Some((ci, cj, prod)),
                "m={m} ({i},{j})"
            );
        }
    }
}

#[test]
fn conjugator_solution_space_is_one_dimensional() {
    let f = gf(5, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let a = Matrix::random_gl(&f, 3, &mut rng);
        let phi = Automorphism::from_conjugator(&a).unwrap();
        assert_eq!(phi.conjugator_solution_space().len(), 1);
        assert_eq!(
            phi.invert().unwrap(),
            Automorphism::from_conjugator(&a.inv().unwrap()).unwrap()
        );
    }
}

#[test]
fn known_key_and_exponent_round_trip() {
    let f = gf(7, 1);
    let params = MorParams::new(f.clone(), 3).unwrap();
    let (pk, sk) = keygen(&params, &mut ChaCha20Rng::seed_from_u64(12)).unwrap();
    let a = sk.conjugator();
    let plain = Matrix::random_sl(&f, 3, &mut ChaCha8Rng::seed_from_u64(13));
    let r = BigUint::from(1234u32);
    let ct = MorCiphertext::new(
        pk.phi().power(&r).unwrap(),
        pk.phi_m().power(&r).unwrap().apply(&plain).unwrap(),
    )
    .unwrap();
    // Oracle: phi^{mr} is conjugation by A^{mr}.
    let amr = a.pow(&(sk.m() * &r));
    assert_eq!(*ct.payload(), plain.conjugate(&amr).unwrap());
    let undone = &(&amr * ct.payload()) * &amr.inv().unwrap();
    assert_eq!(undone, plain);
    assert_eq!(decrypt(&sk, &ct).unwrap(), plain);
    assert_eq!(decrypt_via_power(&sk, &ct).unwrap(), plain);
}

#[test]
fn keygen_exponent_floor() {
    let params = MorParams::new(gf(2, 1), 2).unwrap();
    for seed in 0..200 {
        let (_, sk) = keygen(&params, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        assert!(*sk.m() >= BigUint::from(2u32));
        assert!(*sk.m() < params.exponent_bound());
    }
}

#[test]
fn keygen_is_deterministic_under_seed() {
    let params = MorParams::new(gf(7, 1), 3).unwrap();
    let (pk1, sk1) = keygen(&params, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
    let (pk2, sk2) = keygen(&params, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
    assert_eq!(
        serde_json::to_string(&pk1.to_json()).unwrap(),
        serde_json::to_string(&pk2.to_json()).unwrap()
    );
    assert_eq!(
        serde_json::to_string(&sk1.to_json()).unwrap(),
        serde_json::to_string(&sk2.to_json()).unwrap()
    );
}

#[test]
fn diagonal_char_poly_is_product_of_linear_factors() {
    let f = gf(13, 1);
    let w: Vec<_> = [2u64, 5, 5, 11].iter().map(|&x| f.from_u64(x)).collect();
    let dm = Matrix::diagonal(&f, &w).unwrap();
    let chi = char_poly(&dm);
    for x in 0..13u64 {
        let expected = w
            .iter()
            .fold(f.one(), |acc, wi| f.mul(&acc, &f.sub(&f.from_u64(x), wi)));
        assert_eq!(chi.eval(&f.from_u64(x), &f), expected);
    }
    assert_eq!(chi.degree(), Some(4));
}

#[test]
fn lift_of_product_matches_basis_conjugation() {
    let f = gf(5, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in [2usize, 3] {
        let a = Matrix::random_gl(&f, d, &mut rng);
        let b = Matrix::random_gl(&f, d, &mut rng);
        let lab = lift_operator(&(&a * &b)).unwrap();
        let ab = &a * &b;
        for (k, (i, j)) in (1..=d).flat_map(|i| (1..=d).map(move |j| (i, j))).enumerate() {
            let unit = Matrix::from_fn(&f, d, |r, c| if (r + 1, c + 1) == (i, j) { f.one() } else { f.zero() });
            let expected = unit.conjugate(&ab).unwrap();
            let col: Vec<_> = (0..d * d)
                .map(|r| lab.matrix().entries()[r * d * d + k].clone())
                .collect();
            assert_eq!(col, expected.entries().to_vec());
        }
    }
}

#[test]
fn centralizer_contains_polynomials_in_x() {
    let f = gf(5, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let x = Matrix::random_gl(&f, 3, &mut rng);
    let basis = centralizer_space(&x);
    assert!(!basis.is_empty());
    let x2 = &x * &x;
    for y in [&x, &x2] {
        assert_eq!(y * &x, &x * y);
    }
    for y in &basis {
        assert_eq!(&x * y, y * &x);
    }
}

#[test]
fn parameter_report_with_conjugator() {
    let f = gf(5, 1);
    let a = Matrix::random_gl(&f, 3, &mut ChaCha8Rng::seed_from_u64(23));
    let est = validate_params(3, f.spec(), Some(&a)).unwrap();
    assert_eq!(est.lift_charpoly_irreducible, Some(false));
    assert_eq!(est.dlp_field_exponent, 9);
    assert_eq!(est.target_field, "𝔽_{5^{9}}");
    assert!(est.warnings.iter().any(|w| w.contains("2^160")));
}
