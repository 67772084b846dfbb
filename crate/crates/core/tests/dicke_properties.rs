use nalgebra::{Matrix2, SymmetricEigen};
use proptest::prelude::*;
use qpt_overlap::dicke::{
    critical_coupling, critical_reference, critical_state, critical_trace_limit, gaussian_overlap, ground_state,
    normal_spectrum, DickeParams, GaussianState, SpectrumVariant,
};
use qpt_overlap::oracle::gaussian_quadrature_overlap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_matrix(g: &GaussianState<f64>) -> Matrix2<f64> {
    let a = g.matrix();
    Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
}

fn random_spd(rng: &mut impl Rng) -> GaussianState<f64> {
    let angle = rng.gen_range(-1.5..1.5);
    GaussianState::from_rotation(angle, rng.gen_range(0.2..4.0), rng.gen_range(0.2..4.0))
}

fn spd() -> impl Strategy<Value = GaussianState<f64>> {
    (-1.5f64..1.5, 0.05f64..10.0, 0.05f64..10.0).prop_map(|(a, d0, d1)| GaussianState::from_rotation(a, d0, d1))
}

proptest! {
    #[test]
    fn overlap_symmetric_and_bounded(g in spd(), h in spd()) {
        let a = gaussian_overlap(&g, &h).unwrap();
        let b = gaussian_overlap(&h, &g).unwrap();
        prop_assert!((a - b).abs() <= 1e-14);
        prop_assert!(a > 0.0 && a <= 1.0 + 1e-15);
    }

    #[test]
    fn overlap_with_itself_is_one(g in spd()) {
        prop_assert!((gaussian_overlap(&g, &g).unwrap() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn ground_state_determinant(
        omega0 in 0.2f64..3.0, omega in 0.2f64..3.0, frac in 0.0f64..0.999,
        literature in any::<bool>(),
    ) {
        let variant = if literature { SpectrumVariant::Literature } else { SpectrumVariant::Paper };
        let base = DickeParams::new(omega0, omega, 0.0, variant).unwrap();
        let p = base.with_lambda(frac * critical_coupling(&base)).unwrap();
        let s = normal_spectrum(&p).unwrap();
        let g = ground_state(&p).unwrap();
        prop_assert!((g.det() - s.eps_minus * s.eps_plus).abs() <= 1e-12 * s.eps_minus * s.eps_plus);
        prop_assert!(s.eps_plus >= s.eps_minus && s.eps_minus > 0.0);
        prop_assert!(s.squeeze_angle.abs() < std::f64::consts::FRAC_PI_4);
        let m = to_matrix(&g);
        prop_assert_eq!(m, m.transpose());
        let eig = SymmetricEigen::new(m).eigenvalues;
        let (lo, hi) = (eig.min(), eig.max());
        prop_assert!((lo - s.eps_minus).abs() <= 1e-12 * s.eps_plus);
        prop_assert!((hi - s.eps_plus).abs() <= 1e-12 * s.eps_plus);
    }
}

#[test]
fn overlap_matches_plane_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (g, h) = (random_spd(&mut rng), random_spd(&mut rng));
        let closed = gaussian_overlap(&g, &h).unwrap();
        let quad = gaussian_quadrature_overlap(&g, &h).unwrap();
        worst = worst.max((closed - quad).abs());
    }
    assert!(worst <= 1e-8, "max deviation {worst:e}");
}

#[test]
fn overlap_is_one_only_for_equal_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (g, h) = (random_spd(&mut rng), random_spd(&mut rng));
        assert!(gaussian_overlap(&g, &h).unwrap() < 1.0);
    }
}

#[test]
fn lower_energy_decreases_monotonically() {
    for variant in [SpectrumVariant::Paper, SpectrumVariant::Literature] {
        for (omega0, omega) in [(1.0, 1.0), (0.5, 2.0), (2.5, 0.7)] {
            let base = DickeParams::new(omega0, omega, 0.0, variant).unwrap();
            let lc = critical_coupling(&base);
            let gaps: Vec<f64> = (0..2000)
                .map(|i| {
                    let p = base.with_lambda(lc * i as f64 / 2000.0).unwrap();
                    normal_spectrum(&p).unwrap().eps_minus
                })
                .collect();
            assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{variant:?} {omega0} {omega}");
        }
    }
}

#[test]
fn literature_spectrum_matches_coupled_oscillators() {
    // normal-mode frequencies² are the eigenvalues of [[ω², 2λ√(ωω₀)], [2λ√(ωω₀), ω₀²]]
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..100 {
        let (omega0, omega) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let base = DickeParams::new(omega0, omega, 0.0, SpectrumVariant::Literature).unwrap();
        let lambda = rng.gen_range(0.0..0.99) * critical_coupling(&base);
        let off = 2.0 * lambda * f64::sqrt(omega * omega0);
        let eig = SymmetricEigen::new(Matrix2::new(omega * omega, off, off, omega0 * omega0)).eigenvalues;
        let s = normal_spectrum(&base.with_lambda(lambda).unwrap()).unwrap();
        assert!((s.eps_minus.powi(2) - eig.min()).abs() <= 1e-12 * eig.max());
        assert!((s.eps_plus.powi(2) - eig.max()).abs() <= 1e-12 * eig.max());
    }
    // at resonance both discriminants coincide
    let p: DickeParams<f64> = DickeParams::resonant(0.3).unwrap();
    let a = normal_spectrum(&p).unwrap();
    let b = normal_spectrum(&p.with_variant(SpectrumVariant::Literature)).unwrap();
    assert!((a.eps_minus - b.eps_minus).abs() < 1e-15);
}

#[test]
fn trace_limit_matches_direct_matrix_algebra() {
    for variant in [SpectrumVariant::Paper, SpectrumVariant::Literature] {
        for (omega0, omega) in [(1.0, 1.0), (0.5, 2.0), (1.7, 0.9)] {
            for delta in [1e-3, 1e-2, 0.1] {
                let p = DickeParams::new(omega0, omega, 0.0, variant).unwrap();
                let closed = critical_trace_limit(&p, delta).unwrap();
                let a = to_matrix(&critical_state(&p).unwrap());
                let b = to_matrix(&ground_state(&critical_reference(&p, delta).unwrap()).unwrap());
                let direct = (b.try_inverse().unwrap() * a).trace();
                assert!(closed > 0.0);
                assert!((closed - direct).abs() <= 1e-8 * direct, "{closed} vs {direct}");
            }
        }
    }
}

#[test]
fn trace_and_determinant_limits_approached_from_below() {
    let p = DickeParams::resonant(0.0).unwrap();
    let delta = 1e-3;
    let limit = critical_trace_limit(&p, delta).unwrap();
    let b = to_matrix(&ground_state(&critical_reference(&p, delta).unwrap()).unwrap());
    let b_inv = b.try_inverse().unwrap();
    let lc = critical_coupling(&p);
    let mut previous = f64::INFINITY;
    for offset in [1e-4, 1e-6, 1e-8, 1e-10] {
        let a = to_matrix(&ground_state(&p.with_lambda(lc * (1.0 - offset)).unwrap()).unwrap());
        let trace_gap = ((b_inv * a).trace() - limit).abs();
        let det_gap = ((Matrix2::identity() + b_inv * a).determinant() - (1.0 + limit)).abs();
        // the residual is carried by ε₋ ∝ √offset, divided by ε̃₋ ≈ 0.045
        assert!(trace_gap < previous);
        assert!(trace_gap <= 50.0 * offset.sqrt());
        assert!(det_gap <= 50.0 * offset.sqrt());
        previous = trace_gap;
    }
}

#[test]
fn log_overlap_tracks_quarter_power_of_gap() {
    let p = DickeParams::resonant(0.0).unwrap();
    let lc = critical_coupling(&p);
    let delta_lambda = 1e-2;
    let at = |d: f64| {
        let here = p.with_lambda(lc - d).unwrap();
        let there = p.with_lambda(lc - d - delta_lambda).unwrap();
        let o = gaussian_overlap(&ground_state(&here).unwrap(), &ground_state(&there).unwrap()).unwrap();
        (o.ln(), normal_spectrum(&here).unwrap().eps_minus.ln())
    };
    let (o1, e1) = at(1e-8);
    let (o2, e2) = at(2e-8);
    let ratio = (o2 - o1) / (e2 - e1);
    assert!((ratio / 0.25 - 1.0).abs() < 0.02, "ratio {ratio}");
}

#[test]
fn overlap_collapses_at_criticality() {
    let p = DickeParams::resonant(0.0).unwrap();
    let lc = critical_coupling(&p);
    let mut previous = 1.0;
    for d in [1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
        let here = ground_state(&p.with_lambda(lc - d).unwrap()).unwrap();
        let there = ground_state(&p.with_lambda(lc - d - 1e-6).unwrap()).unwrap();
        let o = gaussian_overlap(&here, &there).unwrap();
        assert!(o < previous);
        previous = o;
    }
    // Δ^{1/8} decay: about 0.25 at Δ = 1e-12 for δλ = 1e-6
    assert!(previous < 0.3);
}
