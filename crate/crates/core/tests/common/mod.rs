//! Invariant checks shared by the property suite and the acceptance runner.
#![allow(dead_code)]

use std::f64::consts::PI;

use hybrid_doa::array::{synthesize_hybrid, ArrayConfig, Emitter, SnapshotMatrix};
use hybrid_doa::estimators::{
    alias_family, max_rp_qi, parabola_vertex, power_profile, quadratic_interp,
    root_music_plus_max_rp_qi, root_music_polynomial, virtual_phase, PowerProfile, QiStatus,
};
use hybrid_doa::numerics::{
    aberth_roots, hermitian_evd, poly_eval, poly_from_roots, poly_roots, sample_covariance,
    HermitianMatrix,
};
use hybrid_doa::C64;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const CASES: u32 = 128;

pub type Check = Result<(), TestCaseError>;

/// Small geometry used for the randomized checks: N = 256, M = 8, K = 32, Q = 8.
pub fn small_cfg() -> ArrayConfig {
    ArrayConfig::new(256, 8, 32)
        .unwrap()
        .with_left_subarrays(8)
        .unwrap()
}

pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    })
}

fn scaled(m: &DMatrix<C64>, c: C64) -> DMatrix<C64> {
    m.map(|z| z * c)
}

fn profile_of(data: &DMatrix<C64>, sectors: &[f64]) -> PowerProfile {
    let s = SnapshotMatrix {
        data: data.clone(),
        noise_variance: 0.0,
    };
    power_profile(&s, sectors).unwrap()
}

/// (seed, angle, snr_db, factor): hybrid draws at a random source and SNR.
pub fn scenario() -> impl Strategy<Value = (u64, f64, f64, f64)> {
    (any::<u64>(), 0.2f64..(PI - 0.2), 0.0f64..25.0, 0.0f64..1.0)
}

fn draw(seed: u64, angle: f64, snr_db: f64) -> (ArrayConfig, DMatrix<C64>, DMatrix<C64>) {
    let cfg = small_cfg();
    let e = Emitter::new(angle, 1.0).unwrap();
    let h = synthesize_hybrid(&cfg, &e, 10f64.powf(-snr_db / 10.0), 64, seed).unwrap();
    (cfg, h.left, h.right.data)
}

fn estimates(cfg: &ArrayConfig, left: &DMatrix<C64>, right: &DMatrix<C64>) -> (usize, f64, f64) {
    let profile = profile_of(right, &cfg.right_sector_angles());
    let snap = SnapshotMatrix {
        data: right.clone(),
        noise_variance: 0.0,
    };
    let combined = root_music_plus_max_rp_qi(&snap, left, cfg).unwrap();
    (profile.argmax(), max_rp_qi(&profile).angle, combined.angle)
}

/// Rotating every snapshot by one unit phasor leaves all three estimates in place.
/// Complex products round, so values are compared to 1e-9 rad.
pub fn check_phase_invariance(seed: u64, angle: f64, snr_db: f64, frac: f64) -> Check {
    let (cfg, left, right) = draw(seed, angle, snr_db);
    let rot = C64::from_polar(1.0, 2.0 * PI * frac);
    let a = estimates(&cfg, &left, &right);
    let b = estimates(&cfg, &scaled(&left, rot), &scaled(&right, rot));
    prop_assert_eq!(a.0, b.0);
    prop_assert!((a.1 - b.1).abs() < 1e-9, "qi {} vs {}", a.1, b.1);
    prop_assert!((a.2 - b.2).abs() < 1e-9, "combined {} vs {}", a.2, b.2);
    Ok(())
}

/// Positive scaling keeps the arg-max, the QI vertex and the noise projector.
pub fn check_scale_invariance(seed: u64, angle: f64, snr_db: f64, frac: f64) -> Check {
    let (cfg, left, right) = draw(seed, angle, snr_db);
    let c = C64::new(10f64.powf(4.0 * frac - 2.0), 0.0);
    let a = estimates(&cfg, &left, &right);
    let b = estimates(&cfg, &scaled(&left, c), &scaled(&right, c));
    prop_assert_eq!(a.0, b.0);
    prop_assert!((a.1 - b.1).abs() < 1e-9);
    let pa = hermitian_evd(&sample_covariance(&left).unwrap()).unwrap().noise_projector(1);
    let pb = hermitian_evd(&sample_covariance(&scaled(&left, c)).unwrap())
        .unwrap()
        .noise_projector(1);
    prop_assert!((pa - pb).norm() < 1e-8);
    Ok(())
}

/// Sector triple around `t1` with the middle power strictly largest.
pub fn concave_triple() -> impl Strategy<Value = ([f64; 3], [f64; 3])> {
    (
        0.6f64..2.5,
        1e-3f64..0.5,
        1e-3f64..0.5,
        1e-3f64..10.0,
        0.0f64..0.999,
        0.0f64..0.999,
    )
        .prop_map(|(t1, d0, d2, p1, f0, f2)| ([t1 - d0, t1, t1 + d2], [p1 * f0, p1, p1 * f2]))
}

/// The refined angle stays inside the bracket of the neighbouring sectors.
pub fn check_qi_bracket(t: [f64; 3], p: [f64; 3]) -> Check {
    let v = parabola_vertex(t, p);
    prop_assert!(v.is_some(), "strict maximum must give a concave fit");
    let v = v.unwrap();
    prop_assert!(v >= t[0] && v <= t[2], "{v} outside [{}, {}]", t[0], t[2]);
    let prof = PowerProfile::new(t.to_vec(), p.to_vec()).unwrap();
    let q = quadratic_interp(&prof, 1).unwrap();
    prop_assert_eq!(q.status, QiStatus::Interior);
    prop_assert!(q.angle >= t[0] && q.angle <= t[2]);
    Ok(())
}

/// (seed, Q, L) for random left-part covariances.
pub fn covariance_case() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 2usize..9, 1usize..40)
}

/// Root-MUSIC polynomials are conjugate-self-reciprocal, so `z` and
/// `1/conj(z)` are roots together.
pub fn check_root_pairs(seed: u64, q: usize, l: usize) -> Check {
    let y = gaussian_matrix(q, l, seed);
    let r = sample_covariance(&y).unwrap();
    let p = hermitian_evd(&r).unwrap().noise_projector(1);
    let c = root_music_polynomial(&p);
    let d = c.len() - 1;
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..=d {
        prop_assert!((c[d - i] - c[i].conj()).norm() <= 1e-12 * scale.max(1.0));
    }
    let roots = poly_roots(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for z in roots {
        let w = z.conj().inv();
        let bound = 1e-6 * scale * w.norm().max(1.0).powi(d as i32);
        prop_assert!(poly_eval(&c, w).norm() <= bound, "partner of {z} is not a root");
    }
    Ok(())
}

/// (angle, M, d) for alias families.
pub fn alias_case() -> impl Strategy<Value = (f64, usize, f64)> {
    (0.01f64..(PI - 0.01), 1usize..17, prop_oneof![Just(0.5), 0.1f64..1.0])
}

/// Re-aliasing any member of a family regenerates the family.
pub fn check_alias_closure(angle: f64, m: usize, d: f64) -> Check {
    let cfg = ArrayConfig::new(m * 4, m, 4).unwrap().with_spacing(d).unwrap();
    let family = alias_family(&cfg, virtual_phase(&cfg, angle));
    prop_assert!(family.iter().any(|a| (a - angle).abs() < 1e-9), "source missing");
    for &member in &family {
        let again = alias_family(&cfg, virtual_phase(&cfg, member));
        prop_assert_eq!(again.len(), family.len());
        for (x, y) in again.iter().zip(&family) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
    Ok(())
}

/// (seed, n) for random Hermitian matrices.
pub fn hermitian_case() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1usize..12)
}

pub fn check_evd(seed: u64, n: usize) -> Check {
    let g = gaussian_matrix(n, n, seed);
    let a = HermitianMatrix::new(&g + g.adjoint()).unwrap();
    let e = hermitian_evd(&a).unwrap();
    let scale = a.norm().max(1.0);
    prop_assert!((e.reconstruct() - a.as_matrix()).norm() <= 1e-10 * scale);
    let gram = e.vectors.adjoint() * &e.vectors;
    prop_assert!((gram - DMatrix::<C64>::identity(n, n)).norm() <= 1e-10 * n as f64);
    prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    Ok(())
}

/// Roots with moduli in [0.3, 3] and arbitrary arguments.
pub fn root_case() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.3f64..3.0, -PI..PI), 1..11)
}

/// Rooting the polynomial built from known roots and rebuilding it returns
/// the same coefficients, by both rooting routes.
pub fn check_root_round_trip(spec: Vec<(f64, f64)>) -> Check {
    let roots: Vec<C64> = spec.iter().map(|&(r, a)| C64::from_polar(r, a)).collect();
    let coeffs = poly_from_roots(&roots);
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for found in [poly_roots(&coeffs), aberth_roots(&coeffs)] {
        let found = found.map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(found.len(), roots.len());
        let rebuilt = poly_from_roots(&found);
        let err = rebuilt
            .iter()
            .zip(&coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-8 * scale, "coefficient error {err}");
    }
    Ok(())
}

/// The sample covariance has no negative eigenvalue beyond roundoff and a
/// nonnegative quadratic form.
pub fn check_covariance_psd(seed: u64, q: usize, l: usize) -> Check {
    let y = gaussian_matrix(q, l, seed);
    let r = sample_covariance(&y).unwrap();
    let e = hermitian_evd(&r).unwrap();
    let tol = 1e-12 * r.trace().max(1.0);
    prop_assert!(e.values.iter().all(|&v| v >= -tol));
    let x = DVector::from_iterator(q, gaussian_matrix(q, 1, seed ^ 1).iter().copied());
    let form = (x.adjoint() * r.as_matrix() * &x)[(0, 0)];
    prop_assert!(form.re >= -tol * x.norm_squared());
    prop_assert!(form.im.abs() <= 1e-10 * (1.0 + form.re.abs()));
    Ok(())
}
