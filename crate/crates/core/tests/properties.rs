use kmsflow::algebra::{AlgebraElement, BlockShape};
use kmsflow::infogeo::{alpha_divergence, virtual_temperature, AlphaParams};
use kmsflow::linalg::{random_complex_matrix, random_hermitian, CMatrix};
use kmsflow::scaling::{sigma_index, Boundary, ScaleGrid, ScalingSection};
use kmsflow::states::{central_decomposition, is_disjoint, is_quasi_equivalent, reassembly_error, StateFunctional};
use kmsflow::thermal::{default_probes, gibbs_state, kms_defect, lorentz_boost, Dynamics, InverseTemperature4Vector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape_strategy() -> impl Strategy<Value = BlockShape> {
    prop::collection::vec(1usize..=3, 1..=3).prop_map(|d| BlockShape::new(d).unwrap())
}

fn state(shape: &BlockShape, seed: u64, mask: u8) -> StateFunctional {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = shape.num_blocks();
    let mask = if (mask as usize).is_multiple_of(1 << k) { 1 } else { mask as usize % (1 << k) };
    let blocks = shape
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            if mask >> i & 1 == 1 {
                let g = random_complex_matrix(&mut rng, n, n);
                &g * g.adjoint()
            } else {
                CMatrix::zeros(n, n)
            }
        })
        .collect();
    StateFunctional::from_unnormalized(shape.clone(), blocks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_weights_are_a_distribution(shape in shape_strategy(), seed: u64, mask: u8) {
        let w = state(&shape, seed, mask).block_weights();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(w.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn central_decomposition_reassembles(shape in shape_strategy(), seed: u64, mask: u8) {
        let s = state(&shape, seed, mask);
        let dec = central_decomposition(&s, 1e-10).unwrap();
        prop_assert!(reassembly_error(&s, &dec).unwrap() < 1e-12);
        prop_assert_eq!(dec.components.len(), s.charged_blocks(1e-12).len());
    }

    #[test]
    fn sector_relations_are_symmetric(shape in shape_strategy(), s1: u64, s2: u64, m1: u8, m2: u8) {
        let (a, b) = (state(&shape, s1, m1), state(&shape, s2, m2));
        prop_assert_eq!(is_disjoint(&a, &b, 1e-10).unwrap(), is_disjoint(&b, &a, 1e-10).unwrap());
        prop_assert_eq!(is_quasi_equivalent(&a, &b, 1e-10).unwrap(), is_quasi_equivalent(&b, &a, 1e-10).unwrap());
        prop_assert!(is_quasi_equivalent(&a, &a, 1e-10).unwrap());
    }

    #[test]
    fn gibbs_states_satisfy_kms(n in 1usize..=4, seed: u64, beta in 0.1f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Unit operator norm keeps e^{β·spread} rounding amplification small.
        let h = random_hermitian(&mut rng, n);
        let h = &h / kmsflow::linalg::re(kmsflow::linalg::spectral_norm(&h).max(1e-12));
        let d = Dynamics::new(BlockShape::full(n).unwrap(), vec![h], 1e-12).unwrap();
        let omega = gibbs_state(&d, beta).unwrap();
        prop_assert!(kms_defect(&omega, &d, beta, &default_probes(d.shape(), 2, seed)).unwrap() < 1e-9);
    }

    #[test]
    fn divergence_is_nonnegative_and_swap_symmetric(n in 2usize..=4, s1: u64, s2: u64, p in 1.05f64..8.0) {
        let shape = BlockShape::full(n).unwrap();
        let (a, b) = (state(&shape, s1, 1), state(&shape, s2, 1));
        let r = StateFunctional::maximally_mixed(&shape);
        let params = AlphaParams::from_p(p).unwrap();
        let d = alpha_divergence(&a, &b, params, &r, 1e-14).unwrap();
        prop_assert!(d >= -1e-12);
        prop_assert_eq!(d, alpha_divergence(&b, &a, params.swapped(), &r, 1e-14).unwrap());
    }

    #[test]
    fn alpha_round_trips(alpha in -0.99f64..0.99) {
        let p = AlphaParams::from_alpha(alpha).unwrap();
        prop_assert!((p.alpha() - alpha).abs() < 1e-12);
        prop_assert!((1.0 / p.p() + 1.0 / p.q() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn virtual_temperature_decreases(beta in 0.01f64..10.0, p1 in 1.0f64..50.0, p2 in 1.0f64..50.0) {
        let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
        let (t_lo, t_hi) = (virtual_temperature(beta, lo).unwrap(), virtual_temperature(beta, hi).unwrap());
        prop_assert!(t_hi <= t_lo && t_lo <= beta && t_hi >= 0.0);
    }

    #[test]
    fn sigma_group_law(k in 1usize..=3, m1 in -6i64..=6, m2 in -6i64..=6, seed: u64) {
        let grid = ScaleGrid::new(3.0, k, Boundary::Cyclic).unwrap();
        let shape = BlockShape::new(vec![2, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| AlgebraElement::new(shape.clone(), vec![random_complex_matrix(&mut rng, 2, 2), random_complex_matrix(&mut rng, 1, 1)]).unwrap())
            .collect();
        let a = ScalingSection::new(grid, values).unwrap();
        let lhs = sigma_index(m1, &sigma_index(m2, &a).unwrap()).unwrap();
        prop_assert!(lhs == sigma_index(m1 + m2, &a).unwrap());
        prop_assert_eq!(sigma_index(m1, &a).unwrap().sup_norm(), a.sup_norm());
    }

    #[test]
    fn boosts_preserve_beta(beta in 0.1f64..5.0, r in prop::array::uniform3(-1.5f64..1.5)) {
        let v = InverseTemperature4Vector::at_rest(beta).unwrap();
        let b = lorentz_boost(&v, r);
        prop_assert!((b.minkowski_square().sqrt() - beta).abs() < 1e-9 * beta.max(1.0) * r.iter().map(|x| x.abs().exp()).product::<f64>());
    }
}
