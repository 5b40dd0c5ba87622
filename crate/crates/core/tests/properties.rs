use num_complex::Complex64;
use proptest::prelude::*;

use vilenkin::characters::RootTables;
use vilenkin::hardy::{atom_martingale, conditional_expectation, hardy_quasinorm};
use vilenkin::kernels::{dirichlet, fejer, lebesgue_bounds_with, lebesgue_constant, VariationForm};
use vilenkin::means::{CesaroCoeffs, MeanKind, WeightSequence};
use vilenkin::report::format_g17;
use vilenkin::spectral::{convolve, lp_norm, transform_forward, transform_inverse};
use vilenkin::verify::random_atom;
use vilenkin::{GridFunction, GroupSpec};

fn pattern() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=5, 1..=3)
}

/// A group together with a resolution whose grid stays small.
fn group_and_res(cap: usize) -> impl Strategy<Value = (GroupSpec, usize)> {
    pattern().prop_flat_map(move |m| {
        let g = GroupSpec::new(&m, 10).unwrap();
        let top = (1..=10).rev().find(|&r| g.power(r) <= cap).unwrap_or(1);
        (Just(g), 1..=top)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn digits_round_trip(m in pattern(), n in 0usize..100_000) {
        let g = GroupSpec::new(&m, 20).unwrap();
        prop_assume!(n < g.power(20));
        let d = g.digits_of(n).unwrap();
        prop_assert_eq!(g.from_digits(&d.digits).unwrap(), n);
        if n > 0 {
            prop_assert!(g.power(d.hi) <= n && n < g.power(d.hi + 1));
            prop_assert!(d.lo <= d.hi);
        }
    }

    #[test]
    fn hat_arithmetic_inverts(m in pattern(), a in 0usize..5000, b in 0usize..5000) {
        let g = GroupSpec::new(&m, 16).unwrap();
        let s = g.hat_add(a, b).unwrap();
        prop_assert_eq!(g.hat_sub(s, b).unwrap(), a);
        prop_assert_eq!(g.hat_add(b, a).unwrap(), s);
    }

    #[test]
    fn group_law((g, res) in group_and_res(2000), x in any::<usize>(), y in any::<usize>(), z in any::<usize>()) {
        let size = g.power(res);
        let (x, y, z) = (x % size, y % size, z % size);
        let xy = g.index_add(x, y, res);
        prop_assert_eq!(g.index_sub(xy, y, res), x);
        prop_assert_eq!(g.index_add(g.index_add(x, y, res), z, res), g.index_add(x, g.index_add(y, z, res), res));
        prop_assert_eq!(xy, g.index_add(y, x, res));
    }

    #[test]
    fn characters_are_multiplicative((g, res) in group_and_res(2000), n in any::<usize>(), x in any::<usize>(), y in any::<usize>()) {
        let size = g.power(res);
        let (n, x, y) = (n % size, x % size, y % size);
        let t = RootTables::new(&g);
        let lhs = t.psi_index(&g, n, g.index_add(x, y, res), res);
        let rhs = t.psi_index(&g, n, x, res) * t.psi_index(&g, n, y, res);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((t.psi_index(&g, n, x, res).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transform_round_trip_and_energy((g, res) in group_and_res(1024), seed in any::<u64>()) {
        let f = GridFunction::random(&g, res, seed).unwrap();
        let s = transform_forward(&f);
        prop_assert!(transform_inverse(&s).max_diff(&f).unwrap() < 1e-12);
        let energy: f64 = s.coeffs.iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((energy - lp_norm(&f, 2.0).unwrap().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn convolution_multiplies_coefficients((g, res) in group_and_res(512), seed in any::<u64>()) {
        let f = GridFunction::random(&g, res, seed).unwrap();
        let h = GridFunction::random(&g, res, seed ^ 0xff).unwrap();
        let c = transform_forward(&convolve(&f, &h).unwrap());
        let (a, b) = (transform_forward(&f), transform_forward(&h));
        for j in 0..c.coeffs.len() {
            prop_assert!((c.coeffs[j] - a.coeffs[j] * b.coeffs[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn kernels_have_unit_integral((g, res) in group_and_res(1024), n in 1usize..1024) {
        prop_assume!(n <= g.power(res));
        let d = dirichlet(&g, n, res).unwrap();
        let k = fejer(&g, n, res).unwrap();
        prop_assert!((d.integral() - 1.0).norm() < 1e-10);
        prop_assert!((k.integral() - 1.0).norm() < 1e-10);
        prop_assert!((d.values[0].re - n as f64).abs() < 1e-9);
    }

    #[test]
    fn lebesgue_within_variation_bounds(m in pattern(), n in 1usize..600) {
        let g = GroupSpec::new(&m, 14).unwrap();
        let l = lebesgue_constant(&g, n).unwrap();
        let b = lebesgue_bounds_with(&g, &g.digits_of(n).unwrap(), VariationForm::FromZero);
        prop_assert!(l >= b.lower - 1e-10 && l <= b.upper + 1e-10);
    }

    #[test]
    fn regular_means_fix_constants((g, res) in group_and_res(256), n in 1usize..64, c in -5.0f64..5.0) {
        prop_assume!(n <= g.power(res));
        let f = GridFunction::constant(&g, res, Complex64::new(c, -c)).unwrap();
        let kinds = [
            MeanKind::Fejer,
            MeanKind::Cesaro { alpha: 0.5 },
            MeanKind::RieszLog,
            MeanKind::NorlundLog,
            MeanKind::Norlund(WeightSequence::harmonic(n + 2)),
        ];
        for kind in kinds {
            if n < kind.min_index() {
                continue;
            }
            prop_assert!(kind.apply(&f, n).unwrap().max_diff(&f).unwrap() < 1e-10, "{}", kind.name());
        }
    }

    #[test]
    fn conditional_expectations_tower((g, res) in group_and_res(512), seed in any::<u64>(), a in 0usize..10, b in 0usize..10) {
        let f = GridFunction::random(&g, res, seed).unwrap();
        let (lo, hi) = (a.min(b).min(res), a.max(b).min(res));
        let e_hi = conditional_expectation(&f, hi).unwrap();
        let both = conditional_expectation(&e_hi, lo).unwrap();
        prop_assert!(both.max_diff(&conditional_expectation(&f, lo).unwrap()).unwrap() < 1e-12);
        prop_assert!((e_hi.integral() - f.integral()).norm() < 1e-12);
    }

    #[test]
    fn atomic_decompositions_bound_the_quasinorm((g, res) in group_and_res(256), seed in any::<u64>(), p in 0.3f64..1.0) {
        let atoms: Vec<(f64, _)> = (0..3u64)
            .map(|i| {
                let level = (seed.wrapping_add(i) % res as u64) as usize;
                let lam = 1.0 / (1.0 + i as f64);
                (lam, random_atom(&g, res, p, level, seed.wrapping_mul(31).wrapping_add(i)).unwrap())
            })
            .collect();
        let (mart, budget) = atom_martingale(&atoms).unwrap();
        let h = hardy_quasinorm(&mart, p).unwrap().powf(p);
        prop_assert!(h <= budget * (1.0 + 1e-10));
    }

    #[test]
    fn cesaro_recurrences(alpha in -0.9f64..3.0, n in 1usize..80) {
        let a = CesaroCoeffs::new(alpha, n).unwrap();
        let am = CesaroCoeffs::new(alpha - 1.0, n).unwrap();
        let s: f64 = (0..=n).map(|k| am.get(k).unwrap()).sum();
        prop_assert!((a.get(n).unwrap() - s).abs() < 1e-9 * a.get(n).unwrap().abs().max(1.0));
        prop_assert!((a.get(n).unwrap() - a.get(n - 1).unwrap() - am.get(n).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn g17_round_trips(x in any::<f64>()) {
        prop_assume!(x.is_finite());
        prop_assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
    }
}
