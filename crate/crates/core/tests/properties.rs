use proptest::prelude::*;

use entk::dynamics::{evolve, uniform_times, ChannelKind, LindbladModel};
use entk::linalg::{hermitian_eigenvalues, max_abs, random_unitary, singular_values, CMatrix};
use entk::pure::{
    concurrence_2x2_pure, eof_from_concurrence, i_concurrence, multipartite_concurrence, selective_concurrence,
    ProjectorMix, SignPattern,
};
use entk::rng::SplitMix64;
use entk::roof::{build_correlation_tensor, compute_bounds, symmetric_roof_infimum, wootters_gap, BoundConfig};
use entk::state::{
    bell, eigen_ensemble, ghz, is_ppt, partial_trace, purity, random_density, random_local_unitaries, random_pure,
    schmidt_decompose, transform_ensemble, von_neumann_entropy, BellKind, DensityMatrix, FactorStructure,
};

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        Just(vec![2, 2]),
        Just(vec![2, 3]),
        Just(vec![3, 3]),
        Just(vec![2, 4]),
        Just(vec![2, 2, 2]),
        Just(vec![2, 3, 2]),
    ]
}

fn spectrum_above(m: &CMatrix, floor: f64) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_eigenvalues(m).into_iter().filter(|&x| x > floor).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complementary_reductions_share_spectra(dims in dims_strategy(), seed in any::<u64>()) {
        let f = FactorStructure::new(dims.clone()).unwrap();
        let rho = random_pure(&f, &mut SplitMix64::new(seed)).to_density();
        let a = partial_trace(&rho, &[0]).unwrap();
        let rest: Vec<usize> = (1..dims.len()).collect();
        let b = partial_trace(&rho, &rest).unwrap();
        let (sa, sb) = (spectrum_above(a.matrix(), 1e-12), spectrum_above(b.matrix(), 1e-12));
        prop_assert_eq!(sa.len(), sb.len());
        for (x, y) in sa.iter().zip(&sb) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_coefficients_are_local_invariants(dims in dims_strategy(), seed in any::<u64>()) {
        let f = FactorStructure::new(dims).unwrap();
        let mut g = SplitMix64::new(seed);
        let psi = random_pure(&f, &mut g);
        let moved = psi.apply_local(&random_local_unitaries(&f, &mut g));
        let a = schmidt_decompose(&psi, &[0]).unwrap().coefficients;
        let b = schmidt_decompose(&moved, &[0]).unwrap().coefficients;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let c0 = i_concurrence(&psi, &[0]).unwrap();
        prop_assert!((c0 - i_concurrence(&moved, &[0]).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn ensemble_transforms_preserve_the_state(dims in dims_strategy(), rank in 1usize..4, extra in 0usize..4, seed in any::<u64>()) {
        let f = FactorStructure::new(dims).unwrap();
        let mut g = SplitMix64::new(seed);
        let rho = random_density(&f, rank, &mut g);
        let e = eigen_ensemble(&rho);
        let k = e.len() + extra;
        let u = random_unitary(k, &mut g);
        let v = u.columns(0, e.len()).into_owned();
        let t = transform_ensemble(&e, &v).unwrap();
        prop_assert_eq!(t.len(), k);
        prop_assert!(max_abs(&(t.reconstruct() - rho.matrix())) < 1e-10);
    }

    #[test]
    fn product_mixtures_are_ppt(seed in any::<u64>(), terms in 1usize..5) {
        let mut g = SplitMix64::new(seed);
        let (fa, fb) = (FactorStructure::new(vec![3]).unwrap(), FactorStructure::new(vec![2]).unwrap());
        let mut acc: Option<DensityMatrix> = None;
        for i in 0..terms {
            let term = random_density(&fa, 1 + i % 3, &mut g).tensor(&random_density(&fb, 1 + i % 2, &mut g));
            acc = Some(match acc {
                None => term,
                Some(prev) => prev.mix(&term, 1.0 - 1.0 / (i as f64 + 1.0)),
            });
        }
        let (ppt, min) = is_ppt(&acc.unwrap());
        prop_assert!(ppt, "min eigenvalue {min}");
    }

    #[test]
    fn zero_entropy_iff_pure(dims in dims_strategy(), rank in 1usize..4, seed in any::<u64>()) {
        let f = FactorStructure::new(dims).unwrap();
        let rho = random_density(&f, rank, &mut SplitMix64::new(seed));
        let (s, p) = (von_neumann_entropy(&rho), purity(&rho));
        prop_assert_eq!(s.abs() < 1e-9, (p - 1.0).abs() < 1e-9);
    }

    #[test]
    fn appending_a_product_factor_keeps_c_n(n in 2usize..5, seed in any::<u64>()) {
        let mut g = SplitMix64::new(seed);
        let psi = random_pure(&FactorStructure::qubits(n), &mut g);
        let phi = random_pure(&FactorStructure::qubits(1), &mut g);
        let joined = psi.tensor(&phi);
        let (a, b) = (multipartite_concurrence(&joined).unwrap(), multipartite_concurrence(&psi).unwrap());
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn two_qubit_concurrences_agree(seed in any::<u64>()) {
        let psi = random_pure(&FactorStructure::qubits(2), &mut SplitMix64::new(seed));
        let a = concurrence_2x2_pure(&psi).unwrap();
        prop_assert!((a - i_concurrence(&psi, &[0]).unwrap()).abs() < 1e-12);
        prop_assert!((a - multipartite_concurrence(&psi).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn roof_infimum_is_congruence_invariant(n in 2usize..7, seed in any::<u64>()) {
        let mut g = SplitMix64::new(seed);
        let raw = CMatrix::from_fn(n, n, |_, _| entk::linalg::c(g.next_gaussian(), g.next_gaussian()));
        let tau = &raw + raw.transpose();
        let u = random_unitary(n, &mut g);
        let moved = &u * &tau * u.transpose();
        let (a, b) = (symmetric_roof_infimum(&tau).unwrap(), symmetric_roof_infimum(&moved).unwrap());
        prop_assert!((a.value - b.value).abs() < 1e-10);
        for (x, y) in singular_values(&tau).iter().zip(&singular_values(&moved)) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn correlation_tensor_symmetries(dims in dims_strategy(), rank in 1usize..4, seed in any::<u64>()) {
        let f = FactorStructure::new(dims.clone()).unwrap();
        let rho = random_density(&f, rank, &mut SplitMix64::new(seed));
        let t = build_correlation_tensor(&rho, &ProjectorMix::default_for(dims.len()).unwrap()).unwrap();
        prop_assert!(t.index_symmetry_deviation() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bounds_are_local_unitary_invariants(dims in prop_oneof![Just(vec![2, 2]), Just(vec![3, 3]), Just(vec![2, 2, 2])], seed in any::<u64>()) {
        let f = FactorStructure::new(dims.clone()).unwrap();
        let mut g = SplitMix64::new(seed);
        let rho = random_density(&f, 2, &mut g);
        let moved = rho.apply_local(&random_local_unitaries(&f, &mut g));
        let mix = ProjectorMix::default_for(dims.len()).unwrap();
        let cfg = BoundConfig { seed: 5, ..BoundConfig::default() };
        let (a, b) = (compute_bounds(&rho, &mix, &cfg).unwrap(), compute_bounds(&moved, &mix, &cfg).unwrap());
        let close = |x: Option<f64>, y: Option<f64>| match (x, y) {
            (Some(x), Some(y)) => (x - y).abs() < 1e-8,
            (None, None) => true,
            _ => false,
        };
        prop_assert!(close(a.best_algebraic, b.best_algebraic), "{:?} {:?}", a.best_algebraic, b.best_algebraic);
        prop_assert!(close(a.quasi_pure, b.quasi_pure));
        prop_assert!((a.lower_optimized - b.lower_optimized).abs() < 1e-8, "{} {}", a.lower_optimized, b.lower_optimized);
        prop_assert!(close(a.upper, b.upper), "{:?} {:?}", a.upper, b.upper);
    }
}

#[test]
fn selective_concurrence_separates_product_and_entangled_groups() {
    let mut g = SplitMix64::new(3);
    let f1 = FactorStructure::qubits(1);
    for pattern in ["--+", "-+-", "+--"] {
        let mix = ProjectorMix::single(pattern.parse::<SignPattern>().unwrap());
        let product = random_pure(&f1, &mut g).tensor(&random_pure(&f1, &mut g)).tensor(&random_pure(&f1, &mut g));
        // The expectation under the square root vanishes up to rounding.
        assert!(selective_concurrence(&product, &mix).unwrap().powi(2) < 1e-14);
        // Entangle exactly the two factors marked '-'.
        let pair = bell(BellKind::PhiPlus);
        let single = random_pure(&f1, &mut g);
        let state = match pattern {
            "--+" => pair.tensor(&single),
            "+--" => single.tensor(&pair),
            _ => {
                // |Φ⁺⟩ on factors 0 and 2 with factor 1 in between.
                let mut amps = entk::linalg::CVector::zeros(8);
                for (i, &x) in single.amplitudes().iter().enumerate() {
                    amps[i << 1] += x * std::f64::consts::FRAC_1_SQRT_2;
                    amps[4 | i << 1 | 1] += x * std::f64::consts::FRAC_1_SQRT_2;
                }
                entk::state::PureState::new(amps, FactorStructure::qubits(3)).unwrap()
            }
        };
        assert!(selective_concurrence(&state, &mix).unwrap() > 0.1, "{pattern}");
    }
}

#[test]
fn eof_is_midpoint_convex() {
    let grid: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
    let mut g = SplitMix64::new(17);
    for _ in 0..1000 {
        let a = grid[g.next_below(1001) as usize];
        let b = grid[g.next_below(1001) as usize];
        let mid = eof_from_concurrence((a + b) / 2.0).unwrap();
        let avg = (eof_from_concurrence(a).unwrap() + eof_from_concurrence(b).unwrap()) / 2.0;
        assert!(mid <= avg + 1e-12, "c = {a}, {b}");
    }
}

#[test]
fn trace_and_positivity_along_trajectories() {
    let times = uniform_times(5.0, 26);
    for ch in [
        ChannelKind::ZeroTemperature { gamma: 0.7 },
        ChannelKind::Thermal { gamma: 0.7, nbar: 0.4 },
        ChannelKind::InfiniteTemperature { gamma: 0.7 },
        ChannelKind::Dephasing { gamma: 0.7 },
    ] {
        for n in 2..=3 {
            let rho = random_density(&FactorStructure::qubits(n), 3, &mut SplitMix64::new(n as u64));
            let tr = evolve(&rho, &LindbladModel::qubits(n, ch).unwrap(), &times).unwrap();
            for s in &tr.states {
                let trace: f64 = (0..s.dim()).map(|i| s.matrix()[(i, i)].re).sum();
                assert!((trace - 1.0).abs() <= 1e-10);
                assert!(s.eigenvalues().iter().all(|&x| x >= -1e-8));
            }
        }
    }
}

#[test]
fn dephasing_keeps_rank_two() {
    let times = uniform_times(4.0, 41);
    let model = |n| LindbladModel::qubits(n, ChannelKind::Dephasing { gamma: 1.0 }).unwrap();
    let mut starts = vec![(2, bell(BellKind::PsiPlus)), (2, bell(BellKind::PsiMinus))];
    starts.extend((2..=4).map(|n| (n, ghz(n).unwrap())));
    for (n, psi) in starts {
        let tr = evolve(&psi.to_density(), &model(n), &times).unwrap();
        for s in &tr.states {
            assert!(s.eigenvalues()[2] <= 1e-10);
        }
    }
}

#[test]
fn thermal_reservoir_disentangles_in_finite_time() {
    let model = LindbladModel::qubits(2, ChannelKind::Thermal { gamma: 1.0, nbar: 0.1 }).unwrap();
    let times = uniform_times(3.0, 301);
    let tr = evolve(&bell(BellKind::PsiPlus).to_density(), &model, &times).unwrap();
    let gaps: Vec<f64> = tr.states.iter().map(|s| wootters_gap(s).unwrap()).collect();
    let crossing = gaps.windows(2).position(|w| w[0] > 0.0 && w[1] <= 0.0).expect("sign change");
    let conc = &tr.observables["concurrence"];
    assert_eq!(conc[crossing + 1], 0.0);
    assert!(conc[crossing + 1..].iter().all(|&c| c == 0.0));
}
