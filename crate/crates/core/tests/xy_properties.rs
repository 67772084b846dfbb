use proptest::prelude::*;
use qpt_overlap::oracle::overlap_oracle;
use qpt_overlap::xy::{
    dtheta_dgamma, dtheta_dlambda, ground_state_overlap, mode_table, overlap_gaussian_approx, s_gamma, s_lambda,
    Direction, XyParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xy(gamma: f64, lambda: f64, n: usize) -> XyParams<f64> {
    XyParams::new(gamma, lambda, n).unwrap()
}

/// Central difference of θ_k along one parameter.
fn theta_fd(p: &XyParams<f64>, k: usize, direction: Direction, h: f64) -> f64 {
    let plus = p.shifted_along(direction, h).unwrap().mode(k).unwrap().theta;
    let minus = p.shifted_along(direction, -h).unwrap().mode(k).unwrap().theta;
    (plus - minus) / (2.0 * h)
}

fn odd_size() -> impl Strategy<Value = usize> {
    (1usize..200).prop_map(|m| 2 * m + 1)
}

proptest! {
    #[test]
    fn energy_identity(gamma in -2.0f64..2.0, lambda in -2.0f64..2.0, n in odd_size()) {
        for m in mode_table(&xy(gamma, lambda, n)) {
            let s = m.x.sin();
            let lhs = m.energy * m.energy;
            let rhs = m.eps * m.eps + gamma * gamma * s * s;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
            if m.energy > 0.0 {
                prop_assert!((m.theta.cos() * m.energy - m.eps).abs() <= 1e-12 * m.energy.max(1.0));
            }
            if gamma >= 0.0 {
                prop_assert!(m.theta.sin() >= 0.0);
                prop_assert!((0.0..=std::f64::consts::PI).contains(&m.theta));
            }
        }
    }

    #[test]
    fn overlap_is_symmetric_and_bounded(
        g1 in -1.5f64..1.5, l1 in -1.5f64..1.5,
        dg in -0.2f64..0.2, dl in -0.2f64..0.2,
        n in odd_size(),
    ) {
        let p = xy(g1, l1, n);
        let q = xy(g1 + dg, l1 + dl, n);
        let a = ground_state_overlap(&p, &q).unwrap();
        let b = ground_state_overlap(&q, &p).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=1.0).contains(&a.overlap));
        prop_assert!(a.log_overlap <= 0.0);
        if !a.degenerate {
            prop_assert_eq!(a.overlap, a.log_overlap.exp());
        }
    }

    #[test]
    fn overlap_is_even_in_anisotropy(
        g1 in -1.5f64..1.5, l1 in -1.5f64..1.5,
        dg in -0.2f64..0.2, dl in -0.2f64..0.2,
        n in odd_size(),
    ) {
        let a = ground_state_overlap(&xy(g1, l1, n), &xy(g1 + dg, l1 + dl, n)).unwrap();
        let b = ground_state_overlap(&xy(-g1, l1, n), &xy(-(g1 + dg), l1 + dl, n)).unwrap();
        prop_assert_eq!(a.degenerate, b.degenerate);
        prop_assert!((a.overlap - b.overlap).abs() <= 1e-12);
    }

    #[test]
    fn susceptibilities_are_non_negative(gamma in -1.5f64..1.5, lambda in -1.5f64..1.5, n in odd_size()) {
        let p = xy(gamma, lambda, n);
        prop_assert!(s_lambda(&p).unwrap() >= 0.0);
        prop_assert!(s_gamma(&p).unwrap() >= 0.0);
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 2000 {
        let n = 2 * rng.gen_range(1..300) + 1;
        let p = xy(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), n);
        let k = rng.gen_range(1..=p.n_modes());
        let m = p.mode(k).unwrap();
        let dl = dtheta_dlambda(&m, &p).unwrap();
        let dg = dtheta_dgamma(&m, &p).unwrap();
        if m.energy < 0.1 || dl.abs() < 1e-3 || dg.abs() < 1e-3 {
            continue;
        }
        let fd_l = theta_fd(&p, k, Direction::Lambda, 1e-6);
        let fd_g = theta_fd(&p, k, Direction::Gamma, 1e-6);
        assert!((fd_l - dl).abs() <= 1e-5 * dl.abs(), "lambda: {p:?} k={k} {fd_l} vs {dl}");
        // the gamma derivative carries the opposite sign to d(atan2)/dγ
        assert!((fd_g + dg).abs() <= 1e-5 * dg.abs(), "gamma: {p:?} k={k} {fd_g} vs {dg}");
        checked += 1;
    }
}

#[test]
fn single_mode_finite_differences() {
    let p = xy(0.5, 0.7, 101);
    let m = p.mode(7).unwrap();
    let d = dtheta_dlambda(&m, &p).unwrap();
    assert!((theta_fd(&p, 7, Direction::Lambda, 1e-6) - d).abs() <= 1e-6 * d.abs());

    let p = xy(0.5, 0.3, 101);
    let m = p.mode(11).unwrap();
    let d = dtheta_dgamma(&m, &p).unwrap();
    assert!((theta_fd(&p, 11, Direction::Gamma, 1e-6).abs() - d.abs()).abs() <= 1e-6 * d.abs());
}

#[test]
fn gaussian_approximation_tracks_exact_overlap() {
    let p = xy(1.0, 0.5, 10001);
    let approx = overlap_gaussian_approx(&p, Direction::Lambda, 1e-6).unwrap();
    let exact = ground_state_overlap(&p, &p.shifted(0.0, 1e-6).unwrap()).unwrap().overlap;
    assert!((approx - exact).abs() <= 1e-10);

    let approx = overlap_gaussian_approx(&p, Direction::Gamma, 1e-5).unwrap();
    let exact = ground_state_overlap(&p, &p.shifted(1e-5, 0.0).unwrap()).unwrap().overlap;
    assert!((approx - exact).abs() <= 1e-10);
}

#[test]
fn off_critical_susceptibilities_grow_linearly() {
    let sizes = [1001usize, 3001, 10001, 30001, 100001];
    for s in [s_lambda::<f64>, s_gamma::<f64>] {
        let per_site: Vec<f64> = sizes.iter().map(|&n| s(&xy(1.0, 0.5, n)).unwrap() / n as f64).collect();
        for w in per_site.windows(2) {
            assert!((w[1] / w[0] - 1.0).abs() < 0.01, "{per_site:?}");
        }
    }
}

#[test]
fn near_xx_line_lambda_susceptibility_is_extensive() {
    // for each fixed small γ, S^λ γ²/N settles to a constant as N grows
    let sizes = [10001usize, 30001, 100001, 300001];
    for gamma in [0.02, 0.01, 0.005] {
        let scaled: Vec<f64> =
            sizes.iter().map(|&n| s_lambda(&xy(gamma, 0.5, n)).unwrap() * gamma * gamma / n as f64).collect();
        let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        assert!(hi / lo - 1.0 < 0.1, "gamma = {gamma}: {scaled:?}");
    }
}

#[test]
fn closed_form_matches_eigenvector_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = 2 * rng.gen_range(1..=50) + 1;
        let gamma = rng.gen_range(0.05..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = xy(gamma, rng.gen_range(-1.5..1.5), n);
        let q = xy(gamma + rng.gen_range(-0.02..0.02), p.lambda() + rng.gen_range(-0.3..0.3), n);
        let closed = ground_state_overlap(&p, &q).unwrap();
        let oracle = overlap_oracle(&p, &q).unwrap().unwrap();
        worst = worst.max((closed.overlap - oracle).abs());
    }
    assert!(worst <= 1e-12, "max deviation {worst:e}");
}

#[test]
fn three_site_oracle_value() {
    let (p, q) = (xy(1.0, 0.0, 3), xy(1.0, 0.1, 3));
    let oracle = overlap_oracle(&p, &q).unwrap().unwrap();
    assert!((oracle - ground_state_overlap(&p, &q).unwrap().overlap).abs() <= 1e-12);
    assert!((oracle - 0.99916).abs() < 1e-5);
}
