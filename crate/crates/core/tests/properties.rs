use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinor10::field::FieldSpec;
use spinor10::line_complex::rho;
use spinor10::linalg::{DenseMatrix, Subspace};
use spinor10::pure::{annihilator, mu, random_isotropic_vector, random_pure};
use spinor10::spinor::{b_v, clifford_mul, pair_any, q_v, Half, HalfSpinor, VecV};

fn odd_field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![3u32, 5, 7, 11, 101]).prop_map(|p| FieldSpec::prime(p).unwrap())
}

fn any_field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![0u32, 2, 3, 5, 7]).prop_map(|p| {
        if p == 0 {
            FieldSpec::Rationals
        } else {
            FieldSpec::prime(p).unwrap()
        }
    })
}

fn odd_rational() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![0u32, 3, 5, 7]).prop_map(|p| {
        if p == 0 {
            FieldSpec::Rationals
        } else {
            FieldSpec::prime(p).unwrap()
        }
    })
}

fn half() -> impl Strategy<Value = Half> {
    prop::bool::ANY.prop_map(|b| if b { Half::Plus } else { Half::Minus })
}

fn random_sub(field: FieldSpec, n: usize, d: usize, rng: &mut ChaCha8Rng) -> Subspace {
    Subspace::from_matrix(&DenseMatrix::random(field, d, n, rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grassmann_dimension_formula(field in any_field(), seed in any::<u64>(), a in 0usize..7, b in 0usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_sub(field, 6, a, &mut rng);
        let w = random_sub(field, 6, b, &mut rng);
        let meet = u.intersect(&w).unwrap();
        let sum = u.sum(&w).unwrap();
        prop_assert_eq!(meet.dim() + sum.dim(), u.dim() + w.dim());
        prop_assert!(meet.is_subspace_of(&u) && meet.is_subspace_of(&w));
    }

    #[test]
    fn annihilator_is_an_involution(field in any_field(), seed in any::<u64>(), d in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_sub(field, 5, d, &mut rng);
        let ann = u.annihilator();
        prop_assert_eq!(ann.dim() + u.dim(), 5);
        prop_assert_eq!(ann.annihilator(), u);
    }

    #[test]
    fn rank_nullity(field in any_field(), seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DenseMatrix::random(field, r, c, &mut rng);
        prop_assert_eq!(m.rank() + m.kernel().dim(), c);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn clifford_relation(field in any_field(), seed in any::<u64>(), h in half()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = VecV::random(field, &mut rng);
        let s = HalfSpinor::random(field, h, &mut rng);
        let twice = clifford_mul(&v, &clifford_mul(&v, &s));
        prop_assert_eq!(twice, s.scale(&q_v(&v)));
    }

    #[test]
    fn moment_map_represents_the_pairing(field in odd_field(), seed in any::<u64>(), h in half()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = VecV::random(field, &mut rng);
        let s = HalfSpinor::random(field, h, &mut rng);
        let lhs = b_v(&mu(&s), &v);
        let rhs = pair_any(&clifford_mul(&v, &s), &s).unwrap();
        prop_assert_eq!(&lhs + &lhs, rhs);
    }

    #[test]
    fn moment_map_is_quadratic(field in any_field(), seed in any::<u64>(), h in half()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = HalfSpinor::random(field, h, &mut rng);
        let c = field.random(&mut rng);
        prop_assert_eq!(mu(&s.scale(&c)), mu(&s).scale(&(&c * &c)));
    }

    #[test]
    fn pure_spinors_have_five_dimensional_annihilators(field in any_field(), seed in any::<u64>(), h in half()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_pure(field, h, &mut rng);
        prop_assert!(mu(&w.spinor).is_zero());
        prop_assert_eq!(annihilator(&w.spinor).unwrap(), w.annihilator.clone());
        prop_assert_eq!(w.annihilator.dim(), 5);
    }

    #[test]
    fn isotropic_vectors_square_to_zero(field in any_field(), seed in any::<u64>(), h in half()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_isotropic_vector(field, &mut rng);
        let s = HalfSpinor::random(field, h, &mut rng);
        prop_assert!(q_v(&v).is_zero());
        prop_assert!(clifford_mul(&v, &clifford_mul(&v, &s)).is_zero());
    }

    #[test]
    fn rho_scales_by_the_determinant_squared(field in odd_rational(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k1 = HalfSpinor::random(field, Half::Minus, &mut rng);
        let k2 = HalfSpinor::random(field, Half::Minus, &mut rng);
        let [a, b, c, d] = [0; 4].map(|_| field.random(&mut rng));
        let x = k1.scale(&a).add(&k2.scale(&b));
        let y = k1.scale(&c).add(&k2.scale(&d));
        let det = &(&a * &d) - &(&b * &c);
        let base = rho(&k1, &k2).unwrap().value;
        prop_assert_eq!(rho(&x, &y).unwrap().value, &(&det * &det) * &base);
        // a swap has determinant -1
        prop_assert_eq!(rho(&k2, &k1).unwrap().value, base);
        prop_assert!(rho(&k1, &k1).unwrap().vanishes());
    }

    #[test]
    fn rho_vanishes_on_secants_through_pure_spinors(field in odd_rational(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_pure(field, Half::Minus, &mut rng).spinor;
        let k = HalfSpinor::random(field, Half::Minus, &mut rng);
        prop_assert!(rho(&tau, &k).unwrap().vanishes());
    }
}
