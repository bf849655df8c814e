use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::array::ArrayConfig;
use crate::numerics::{hermitian_evd, poly_roots, sample_covariance, HermitianMatrix};
use crate::{Error, Result, C64};

/// Candidates closer than this (rad) are merged.
const DEDUP_TOL: f64 = 1e-9;
/// Roots farther than this from the unit circle carry no direction.
const CIRCLE_TOL: f64 = 0.5;

/// Outcome of the subspace stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootMusicStatus {
    Found,
    /// Eigenvalue spread below the presence threshold.
    NoSignal,
    /// Every root is farther than 0.5 from the unit circle.
    NoRootNearCircle,
}

/// Ascending candidate angles (rad) produced by one Root-MUSIC root and its
/// alias family.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    angles: Vec<f64>,
    root: Option<C64>,
    status: RootMusicStatus,
}

impl CandidateSet {
    /// Sorts and merges angles within 1e-9 rad.
    pub fn new(mut angles: Vec<f64>, root: Option<C64>, status: RootMusicStatus) -> Self {
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|b, a| (*b - *a).abs() < DEDUP_TOL);
        Self {
            angles,
            root,
            status,
        }
    }

    pub fn empty(status: RootMusicStatus) -> Self {
        Self::new(Vec::new(), None, status)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// The selected root, mapped inside or onto the unit circle.
    pub fn root(&self) -> Option<C64> {
        self.root
    }

    pub fn status(&self) -> RootMusicStatus {
        self.status
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// All angles whose virtual-array phase `2 pi M d cos(theta)` equals `phase`
/// modulo `2 pi`, i.e. `u_m = (phase / 2pi + m) / (M d)` for every integer
/// `m` with `u_m` in the open interval `(-1, 1)`. Ascending.
pub fn alias_family(cfg: &ArrayConfig, phase: f64) -> Vec<f64> {
    let md = cfg.subarray_size() as f64 * cfg.spacing_wavelengths();
    let base = phase / (2.0 * PI);
    let lo = (-md - base).floor() as i64;
    let hi = (md - base).ceil() as i64;
    let mut angles: Vec<f64> = (lo..=hi)
        .map(|m| (base + m as f64) / md)
        .filter(|u| *u > -1.0 && *u < 1.0)
        .map(f64::acos)
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// Virtual-array phase of `angle` wrapped to `(-pi, pi]`.
pub fn virtual_phase(cfg: &ArrayConfig, angle: f64) -> f64 {
    let md = cfg.subarray_size() as f64 * cfg.spacing_wavelengths();
    let x = md * angle.cos();
    2.0 * PI * (x - x.round())
}

/// Ascending coefficients of `z^(Q-1) a(z)^H P a(z)` on the unit circle:
/// the coefficient of `z^(d + Q - 1)` is the sum of the `d`-th diagonal of `P`.
pub fn root_music_polynomial(projector: &DMatrix<C64>) -> Vec<C64> {
    let q = projector.nrows();
    let mut coeffs = vec![C64::new(0.0, 0.0); 2 * q - 1];
    for i in 0..q {
        for j in 0..q {
            coeffs[j + q - 1 - i] += projector[(i, j)];
        }
    }
    coeffs
}

/// Root-MUSIC on the left-part covariance with signal dimension one.
///
/// The root kept is the one nearest the unit circle after mapping each root
/// to its inside member `1 / conj(z)`; the candidate set is its full alias
/// family.
pub fn root_music_from_covariance(
    cov: &HermitianMatrix,
    n_snapshots: usize,
    cfg: &ArrayConfig,
) -> Result<CandidateSet> {
    let q = cfg.left_subarrays();
    if q < 2 {
        return Err(Error::InvalidConfig(format!(
            "Root-MUSIC needs at least 2 left subarrays, got {q}"
        )));
    }
    if cov.order() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: cov.order(),
        });
    }
    if n_snapshots == 0 {
        return Err(Error::EmptyInput("n_snapshots must be at least 1"));
    }
    let evd = hermitian_evd(cov)?;
    if !signal_present(&evd.values, n_snapshots) {
        return Ok(CandidateSet::empty(RootMusicStatus::NoSignal));
    }

    let coeffs = root_music_polynomial(&evd.noise_projector(1));
    let roots = poly_roots(&coeffs)?;
    let best = roots
        .iter()
        .map(|&z| if z.norm() > 1.0 { z.conj().inv() } else { z })
        .min_by(|a, b| (1.0 - a.norm()).total_cmp(&(1.0 - b.norm())));
    let Some(root) = best else {
        return Ok(CandidateSet::empty(RootMusicStatus::NoRootNearCircle));
    };
    if (1.0 - root.norm()).abs() > CIRCLE_TOL {
        return Ok(CandidateSet::empty(RootMusicStatus::NoRootNearCircle));
    }
    let angles = alias_family(cfg, root.arg());
    Ok(CandidateSet::new(angles, Some(root), RootMusicStatus::Found))
}

/// Root-MUSIC candidates from the `Q x L` left-part snapshots.
pub fn root_music_candidates(left_snapshots: &DMatrix<C64>, cfg: &ArrayConfig) -> Result<CandidateSet> {
    if left_snapshots.nrows() != cfg.left_subarrays() {
        return Err(Error::DimensionMismatch {
            expected: cfg.left_subarrays(),
            found: left_snapshots.nrows(),
        });
    }
    let cov = sample_covariance(left_snapshots)?;
    root_music_from_covariance(&cov, left_snapshots.ncols(), cfg)
}

/// Presence test `lambda_1 / mean(rest) >= 1 + 3 / sqrt(L)`.
fn signal_present(values: &[f64], n_snapshots: usize) -> bool {
    let top = values[0];
    if !(top > 0.0) {
        return false;
    }
    let rest = &values[1..];
    let mean_rest = rest.iter().sum::<f64>() / rest.len() as f64;
    if mean_rest <= 0.0 {
        return true;
    }
    top / mean_rest >= 1.0 + 3.0 / (n_snapshots as f64).sqrt()
}
