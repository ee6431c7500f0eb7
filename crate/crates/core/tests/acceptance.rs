//! Acceptance suite. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion:
//!
//! ```text
//! cargo test -p kmsflow-core --test acceptance
//! ```

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use kmsflow::algebra::{AlgebraElement, BlockShape};
use kmsflow::infogeo::{alpha_divergence, virtual_temperature, AlphaParams};
use kmsflow::linalg::{self, random_complex_matrix, re, CMatrix};
use kmsflow::runner::{self, render_csv, render_json, RunOptions, Scenario, TaskSpec};
use kmsflow::scaling::{
    center_restriction, rg_flow_of_gibbs, scale_sector_witness, scaled_gibbs_defect, scaled_lift, sigma_alpha_covariance,
    sigma_index, Boundary, ScaleGrid, ScaledDynamicsFamily, ScalingSection,
};
use kmsflow::states::{central_decomposition, evaluate, gns, is_disjoint, StateFunctional};
use kmsflow::symmetry::{
    augmented_center, fixed_point_algebra, group_average, induce_covariant_representation, maximal_unbroken_subgroup,
    AugmentedAlgebra, AutomorphicAction,
};
use kmsflow::thermal::{
    beta_decompose, default_probes, lorentz_boost, velocity_to_rapidity, Dynamics, InverseTemperature4Vector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL_KMS: f64 = 1e-9;
const TOL_KMS_MISS: f64 = 1e-3;
const TOL_CLUSTER: f64 = 1e-10;
const TOL_PRODUCT: f64 = 1e-10;
const TOL_REASSEMBLY: f64 = 1e-12;
const TOL_COVARIANCE: f64 = 1e-10;
const TOL_DIV_NEG: f64 = 1e-12;
const TOL_DIV_ZERO: f64 = 1e-10;
const TOL_DENSITY_EQ: f64 = 1e-8;
const TOL_CLASSICAL: f64 = 1e-12;
const TOL_BOOST: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn scenario(name: &str) -> Scenario {
    runner::load_scenario(&root().join("scenarios").join(name)).expect("bundled scenario")
}

const GROUP_SCENARIOS: [&str; 4] = ["z2_flip.json", "s3_over_z3.json", "z4_quotient.json", "inner_z2.json"];

/// Every (action, state) pair named by an ssb task of the bundled scenarios.
fn group_cases() -> Vec<(String, AutomorphicAction, StateFunctional)> {
    let mut out = Vec::new();
    for file in GROUP_SCENARIOS {
        let s = scenario(file);
        for task in &s.tasks {
            if let TaskSpec::Ssb { state } = task {
                let action = s.action.clone().expect("group scenario");
                out.push((format!("{file}:{state}"), action, s.state(state).unwrap().clone()));
            }
        }
    }
    out
}

fn random_hermitian_dynamics(rng: &mut ChaCha8Rng, n: usize) -> Dynamics {
    let h = linalg::random_hermitian(rng, n);
    Dynamics::new(BlockShape::full(n).unwrap(), vec![h], 1e-12).unwrap()
}

fn random_density(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> CMatrix {
    let g = random_complex_matrix(rng, n, rank);
    &g * g.adjoint()
}

fn random_element(rng: &mut ChaCha8Rng, shape: &BlockShape) -> AlgebraElement {
    let blocks = shape.dims().iter().map(|&n| random_complex_matrix(rng, n, n)).collect();
    AlgebraElement::new(shape.clone(), blocks).unwrap()
}

fn random_section(rng: &mut ChaCha8Rng, grid: ScaleGrid, shape: &BlockShape, support: &[usize]) -> ScalingSection {
    let values = (0..grid.len())
        .map(|k| if support.contains(&k) { random_element(rng, shape) } else { AlgebraElement::zero(shape) })
        .collect();
    ScalingSection::new(grid, values).unwrap()
}

/// State on `shape` with a random density on each block of `charged`.
fn random_state(rng: &mut ChaCha8Rng, shape: &BlockShape, charged: &[usize]) -> StateFunctional {
    let blocks = shape
        .dims()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            if charged.contains(&i) {
                let rank = rng.gen_range(1..=n);
                random_density(rng, n, rank)
            } else {
                CMatrix::zeros(n, n)
            }
        })
        .collect();
    StateFunctional::from_unnormalized(shape.clone(), blocks).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let grid = ScaleGrid::new(2.0, 2, Boundary::Cyclic).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mut worst_hit, mut worst_miss) = (0.0f64, f64::INFINITY);
    for case in 0..5 {
        let n = 2 + case % 3;
        let d = random_hermitian_dynamics(&mut rng, n);
        let probes = default_probes(d.shape(), 4, 1000 + case as u64);
        for beta in [0.5, 1.0, 2.0] {
            for lambda in grid.points() {
                let rec = rg_flow_of_gibbs(&d, beta, grid, lambda, &probes).unwrap();
                worst_hit = worst_hit.max(rec.kms_defect);
                let miss = scaled_gibbs_defect(&d, beta, grid, lambda, 1.1 * beta / lambda, &probes).unwrap();
                worst_miss = worst_miss.min(miss);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_hit <= TOL_KMS && worst_miss >= TOL_KMS_MISS && secs < 5.0,
        format!(
            "max defect at β/λ {worst_hit:.2e} (≤ {TOL_KMS:.0e}), min defect at 1.1β/λ {worst_miss:.2e} (≥ {TOL_KMS_MISS:.0e}), {secs:.2}s (< 5s)"
        ),
    )
}

fn criterion_2() -> Outcome {
    let grid = ScaleGrid::new(2.0, 2, Boundary::Cyclic).unwrap();
    let d = Dynamics::new(BlockShape::full(2).unwrap(), vec![linalg::diag(&[0.0, 1.0])], 1e-12).unwrap();
    let omega = kmsflow::thermal::gibbs_state(&d, 1.0).unwrap();
    let mut checked = 0;
    for l1 in grid.points() {
        for l2 in grid.points() {
            if l1 == l2 {
                continue;
            }
            let (a, b) = (scaled_lift(&omega, grid, l1).unwrap(), scaled_lift(&omega, grid, l2).unwrap());
            let (k, chi) = match scale_sector_witness(&a, &b).unwrap() {
                Some(w) => w,
                None => return outcome(false, format!("no witness for λ₁ = {l1}, λ₂ = {l2}")),
            };
            let (on_a, on_b) = (a.evaluate(&chi).unwrap(), b.evaluate(&chi).unwrap());
            if k != grid.index_of(l1).unwrap() || on_a != re(1.0) || on_b != re(0.0) {
                return outcome(false, format!("witness χ_{k} gives {on_a} and {on_b} at λ₁ = {l1}, λ₂ = {l2}"));
            }
            let moved = a.compose_sigma(l2 / l1).unwrap();
            let support = center_restriction(&moved).unwrap().support();
            if support != vec![grid.index_of(l2).unwrap()] {
                return outcome(false, format!("σ̂ moved sector of λ₁ = {l1} to {support:?}, expected λ₂ = {l2}"));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} ordered pairs: witness indicators exact, σ̂ label map exact"))
}

fn criterion_3() -> Outcome {
    let expected = [("z2_flip.json", 2usize), ("s3_over_z3.json", 2), ("inner_z2.json", 1)];
    let mut parts = Vec::new();
    let mut pass = true;
    for (file, dim) in expected {
        let s = scenario(file);
        let action = s.action.clone().unwrap();
        let state = match &s.tasks[0] {
            TaskSpec::Ssb { state } => s.state(state).unwrap().clone(),
            _ => unreachable!(),
        };
        let g = gns(&state, TOL_CLUSTER).unwrap();
        let h = maximal_unbroken_subgroup(&action, g.structure(), TOL_CLUSTER).unwrap();
        let alg = AugmentedAlgebra::new(action, h.subgroup()).unwrap();
        let ind = induce_covariant_representation(&alg, &h.pair, TOL_CLUSTER).unwrap();
        let report = augmented_center(&ind, &h.pair, TOL_CLUSTER).unwrap();
        let ok = report.hat_centre_dim == dim && report.coset_count == dim && report.holds();
        pass &= ok;
        parts.push(format!("{} → {} (cosets {})", file.trim_end_matches(".json"), report.hat_centre_dim, report.coset_count));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, action, state) in group_cases() {
        let g = gns(&state, TOL_CLUSTER).unwrap();
        let h = maximal_unbroken_subgroup(&action, g.structure(), TOL_CLUSTER).unwrap();
        let sub = h.subgroup().clone();
        let alg = AugmentedAlgebra::new(action.clone(), &sub).unwrap();
        let hat = alg.fixed_point_algebra(TOL_CLUSTER).unwrap().dim();
        let base = fixed_point_algebra(&action, &sub, TOL_CLUSTER).unwrap().dim();
        pass &= hat == base;
        parts.push(format!("{name} {hat}={base}"));
        for _ in 0..5 {
            let a = group_average(&action, &sub, &random_element(&mut rng, action.shape())).unwrap();
            let b = group_average(&action, &sub, &random_element(&mut rng, action.shape())).unwrap();
            let ia = alg.fixed_point_isomorphism(&a, 1e-9).unwrap();
            let ib = alg.fixed_point_isomorphism(&b, 1e-9).unwrap();
            let iab = alg.fixed_point_isomorphism(&a.try_mul(&b).unwrap(), 1e-9).unwrap();
            let prod = ia.try_mul(&ib).unwrap();
            worst = worst.max(prod.distance(&iab).unwrap());
            worst = worst.max(alg.equivariance_defect(&ia).unwrap());
            worst = worst.max(alg.fixed_point_value(&prod).unwrap().distance(&a.try_mul(&b).unwrap()).unwrap());
        }
    }
    pass &= worst <= TOL_PRODUCT;
    outcome(pass, format!("dims {}; product/equivariance defect {worst:.2e} (≤ {TOL_PRODUCT:.0e})", parts.join(", ")))
}

/// `π = ⊕ (id on block i) ⊗ 1_{rank ρᵢ}`, built without the library.
fn oracle_representation(shape: &BlockShape, state: &StateFunctional) -> Vec<(usize, usize)> {
    (0..shape.num_blocks())
        .filter_map(|i| {
            let sv = state.density(i).clone().svd(false, false).singular_values;
            let rank = sv.iter().filter(|&&s| s > 1e-10).count();
            (rank > 0).then_some((i, rank))
        })
        .collect()
}

fn oracle_image(shape: &BlockShape, rep: &[(usize, usize)], a: &AlgebraElement) -> CMatrix {
    let dim: usize = rep.iter().map(|&(i, r)| shape.block_dim(i) * r).sum();
    let mut out = CMatrix::zeros(dim, dim);
    let mut off = 0;
    for &(i, r) in rep {
        let n = shape.block_dim(i);
        let block = a.block(i).kronecker(&CMatrix::identity(r, r));
        out.view_mut((off, off), (n * r, n * r)).copy_from(&block);
        off += n * r;
    }
    out
}

/// Whether `T π₁(A) = π₂(A) T` has a nonzero solution, by a stacked SVD.
fn oracle_intertwines(shape: &BlockShape, r1: &[(usize, usize)], r2: &[(usize, usize)]) -> bool {
    let d1: usize = r1.iter().map(|&(i, r)| shape.block_dim(i) * r).sum();
    let d2: usize = r2.iter().map(|&(i, r)| shape.block_dim(i) * r).sum();
    let units = shape.algebra_dim();
    let cols = d1 * d2;
    let mut system = CMatrix::zeros(units * cols, cols);
    for u in 0..units {
        let e = AlgebraElement::matrix_unit(shape, u);
        let (p1, p2) = (oracle_image(shape, r1, &e), oracle_image(shape, r2, &e));
        let block = p1.transpose().kronecker(&CMatrix::identity(d2, d2)) - CMatrix::identity(d1, d1).kronecker(&p2);
        system.view_mut((u * cols, 0), (cols, cols)).copy_from(&block);
    }
    let sv = system.svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-9 * smax.max(1.0)).count();
    rank < cols
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut agree, mut disjoint_cases) = (0, 0);
    for _ in 0..50 {
        let k = rng.gen_range(1..=3);
        let dims: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let shape = BlockShape::new(dims).unwrap();
        let pick = |rng: &mut ChaCha8Rng| {
            let mut c: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
            if c.is_empty() {
                c.push(rng.gen_range(0..k));
            }
            c
        };
        let (c1, c2) = (pick(&mut rng), pick(&mut rng));
        let (w1, w2) = (random_state(&mut rng, &shape, &c1), random_state(&mut rng, &shape, &c2));
        let predicate = is_disjoint(&w1, &w2, TOL_CLUSTER).unwrap();
        let r1 = oracle_representation(&shape, &w1);
        let r2 = oracle_representation(&shape, &w2);
        let brute = !oracle_intertwines(&shape, &r1, &r2);
        if predicate == brute {
            agree += 1;
        }
        disjoint_cases += predicate as usize;
    }
    outcome(agree == 50, format!("{agree}/50 agree ({disjoint_cases} disjoint, {} overlapping)", 50 - disjoint_cases))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut worst, mut weight_err) = (0.0f64, 0.0f64);
    let mut structural = true;
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let dims: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let shape = BlockShape::new(dims).unwrap();
        let charged: Vec<usize> = (0..k).collect();
        let omega = random_state(&mut rng, &shape, &charged);
        let dec = central_decomposition(&omega, TOL_CLUSTER).unwrap();
        for u in 0..shape.algebra_dim() {
            let e = AlgebraElement::matrix_unit(&shape, u);
            let mut sum = re(0.0);
            for comp in &dec.components {
                sum += evaluate(&comp.state, &e).unwrap() * comp.weight;
            }
            worst = worst.max((sum - evaluate(&omega, &e).unwrap()).norm());
        }
        for (i, a) in dec.components.iter().enumerate() {
            weight_err = weight_err.max((a.weight - omega.density(a.block).trace().re).abs());
            structural &= a.state.is_factor(TOL_CLUSTER);
            for b in &dec.components[i + 1..] {
                structural &= is_disjoint(&a.state, &b.state, TOL_CLUSTER).unwrap();
            }
        }
    }
    outcome(
        worst <= TOL_REASSEMBLY && weight_err <= TOL_REASSEMBLY && structural,
        format!(
            "reassembly {worst:.2e}, weight error {weight_err:.2e} (≤ {TOL_REASSEMBLY:.0e}); factor and disjoint: {structural}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    for (_, action, state) in group_cases() {
        let g = gns(&state, TOL_CLUSTER).unwrap();
        let h = maximal_unbroken_subgroup(&action, g.structure(), TOL_CLUSTER).unwrap();
        let alg = AugmentedAlgebra::new(action, h.subgroup()).unwrap();
        let ind = induce_covariant_representation(&alg, &h.pair, TOL_CLUSTER).unwrap();
        worst = worst.max(ind.hat_covariance_defect().unwrap()).max(ind.bar_covariance_defect().unwrap());
    }
    outcome(worst <= TOL_COVARIANCE, format!("max covariance defect {worst:.2e} (≤ {TOL_COVARIANCE:.0e})"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let shape = BlockShape::new(vec![2, 1]).unwrap();
    let h = AlgebraElement::new(shape.clone(), vec![linalg::random_hermitian(&mut rng, 2), linalg::diag(&[0.7])]).unwrap();
    let d = Dynamics::from_element(&h, 1e-12).unwrap();

    let cyclic = ScaleGrid::new(2.0, 2, Boundary::Cyclic).unwrap();
    let mut group_law = true;
    let mut norm_err = 0.0f64;
    let mut cov_inside = 0.0f64;
    let all: Vec<usize> = (0..cyclic.len()).collect();
    for _ in 0..5 {
        let a = random_section(&mut rng, cyclic, &shape, &all);
        for m1 in -4i64..=4 {
            for m2 in -4i64..=4 {
                let lhs = sigma_index(m1, &sigma_index(m2, &a).unwrap()).unwrap();
                group_law &= lhs == sigma_index(m1 + m2, &a).unwrap();
            }
            norm_err = norm_err.max((sigma_index(m1, &a).unwrap().sup_norm() - a.sup_norm()).abs());
            let family = ScaledDynamicsFamily::constant(cyclic, &d);
            for t in [-0.7, 0.3, 1.9] {
                cov_inside = cov_inside.max(sigma_alpha_covariance(&family, m1, t, &a).unwrap().0);
            }
        }
    }

    // Strict window: sections supported where the shift stays inside.
    let strict = ScaleGrid::new(2.0, 2, Boundary::Strict).unwrap();
    let family = ScaledDynamicsFamily::constant(strict, &d);
    let mut cov_strict = 0.0f64;
    for m in -2i64..=2 {
        let support: Vec<usize> = (0..strict.len()).filter(|&j| (j as i64 - m) >= 0 && (j as i64 - m) < 5).collect();
        for _ in 0..3 {
            let a = random_section(&mut rng, strict, &shape, &support);
            for t in [-0.7, 0.3, 1.9] {
                let (inside, wrapped) = sigma_alpha_covariance(&family, m, t, &a).unwrap();
                cov_strict = cov_strict.max(inside).max(wrapped);
            }
            for m2 in -2i64..=2 {
                if let Ok(inner) = sigma_index(m2, &a) {
                    if let (Ok(lhs), Ok(rhs)) = (sigma_index(m, &inner), sigma_index(m + m2, &a)) {
                        group_law &= lhs == rhs;
                    }
                }
            }
        }
    }
    let cov = cov_inside.max(cov_strict);
    outcome(
        group_law && cov <= TOL_COVARIANCE && norm_err == 0.0,
        format!(
            "group law exact: {group_law}; σ̂α̂ covariance {cov:.2e} (≤ {TOL_COVARIANCE:.0e}; cyclic non-wrapping fibers and strict window); sup-norm drift {norm_err:.1e}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut min_d = f64::INFINITY;
    let mut iff_ok = true;
    let mut swap_ok = true;
    for i in 0..100 {
        let n = 2 + i % 3;
        let shape = BlockShape::full(n).unwrap();
        let a = StateFunctional::from_unnormalized(shape.clone(), vec![random_density(&mut rng, n, n)]).unwrap();
        let b = if i % 10 == 0 {
            a.clone()
        } else {
            let rank = rng.gen_range(1..=n);
            StateFunctional::from_unnormalized(shape.clone(), vec![random_density(&mut rng, n, rank)]).unwrap()
        };
        let reference = StateFunctional::maximally_mixed(&shape);
        let params = AlphaParams::from_p(rng.gen_range(1.2..6.0)).unwrap();
        let d = alpha_divergence(&a, &b, params, &reference, 1e-14).unwrap();
        min_d = min_d.min(d);
        let equal = a.distance(&b).unwrap() <= TOL_DENSITY_EQ;
        iff_ok &= (d.abs() <= TOL_DIV_ZERO) == equal;
        swap_ok &= d == alpha_divergence(&b, &a, params.swapped(), &reference, 1e-14).unwrap();
    }

    let mut classical = 0.0f64;
    for i in 0..50 {
        let n = 2 + i % 3;
        let pa: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let pb: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let (sa, sb) = (pa.iter().sum::<f64>(), pb.iter().sum::<f64>());
        let (pa, pb): (Vec<f64>, Vec<f64>) = (pa.iter().map(|x| x / sa).collect(), pb.iter().map(|x| x / sb).collect());
        let p = rng.gen_range(1.2..6.0);
        let params = AlphaParams::from_p(p).unwrap();
        let q = params.q();
        let scalar = p * q * (1.0 - pa.iter().zip(&pb).map(|(x, y)| x.powf(1.0 / p) * y.powf(1.0 / q)).sum::<f64>());
        let shape = BlockShape::full(n).unwrap();
        let to_state = |w: &[f64]| StateFunctional::new(shape.clone(), vec![linalg::diag(w)], 1e-12).unwrap();
        let reference = StateFunctional::maximally_mixed(&shape);
        let d = alpha_divergence(&to_state(&pa), &to_state(&pb), params, &reference, 1e-14).unwrap();
        classical = classical.max((d - scalar).abs());
    }

    let beta = 1.7;
    let temps: Vec<f64> = [1.0, 2.0, 10.0, f64::INFINITY].iter().map(|&p| virtual_temperature(beta, p).unwrap()).collect();
    let temps_ok = temps.iter().all(|&t| (0.0..=beta).contains(&t)) && temps.windows(2).all(|w| w[0] >= w[1]);

    let pass = min_d >= -TOL_DIV_NEG && iff_ok && swap_ok && classical <= TOL_CLASSICAL && temps_ok;
    outcome(
        pass,
        format!(
            "min D {min_d:.2e} (≥ −{TOL_DIV_NEG:.0e}), zero-iff-equal {iff_ok}, swap exact {swap_ok}, classical {classical:.2e} (≤ {TOL_CLASSICAL:.0e}), τ bounds {temps_ok}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let beta = rng.gen_range(0.2..5.0);
        let v0: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
        let start = InverseTemperature4Vector::moving(beta, v0).unwrap();
        let boost: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
        let boosted = lorentz_boost(&start, velocity_to_rapidity(boost).unwrap());
        let frame = beta_decompose(&boosted).unwrap();
        worst = worst.max((frame.beta - beta).abs());
        let [t, x, y, z] = frame.u;
        worst = worst.max((t * t - x * x - y * y - z * z - 1.0).abs());
        let rebuilt = InverseTemperature4Vector::moving(frame.beta, frame.velocity).unwrap().components();
        let original = boosted.components();
        for i in 0..4 {
            worst = worst.max((rebuilt[i] - original[i]).abs());
        }
    }
    outcome(worst <= TOL_BOOST, format!("β, u·u and round-trip defect {worst:.2e} (≤ {TOL_BOOST:.0e}) over 20 boosts"))
}

fn criterion_11() -> Outcome {
    let dir = root().join("scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut identical = true;
    for f in &files {
        let a = render_json(&runner::run_scenario(f, RunOptions::default()).unwrap());
        let b = render_json(&runner::run_scenario(f, RunOptions { tolerance: None, jobs: 3 }).unwrap());
        identical &= a == b;
    }
    let csv = render_csv(&runner::run_scenario(&dir.join("two_level_flow.json"), RunOptions::default()).unwrap()).unwrap();
    let golden = std::fs::read_to_string(dir.join("golden/two_level_flow.csv")).unwrap();
    let golden_ok = csv == golden;
    outcome(
        identical && golden_ok,
        format!("{} scenarios byte-identical: {identical}; golden flow CSV: {golden_ok}", files.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("KMS shift β → β/λ", criterion_1),
        ("scale sectors disjoint with witness", criterion_2),
        ("augmented centre dimension", criterion_3),
        ("fixed-point isomorphism", criterion_4),
        ("disjointness vs intertwiner oracle", criterion_5),
        ("central decomposition", criterion_6),
        ("induced covariance", criterion_7),
        ("scale-action algebra", criterion_8),
        ("α-divergence", criterion_9),
        ("relativistic kinematics", criterion_10),
        ("runner determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += !o.pass as usize;
        println!("criterion {:>2} {:<38} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
