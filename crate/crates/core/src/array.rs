//! Geometry and signal model of a sub-connected hybrid analog/digital ULA.
//!
//! The array holds `N = K * M` antennas split into `K` contiguous subarrays
//! of `M` elements, each behind one RF chain. A single angle convention is
//! used throughout the crate: the spatial frequency of a direction `theta`
//! is `u = cos(theta)` with `theta` in the open interval `(0, pi)`.
//!
//! Subarray and element indices are zero-based at the API boundary.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result, C64};

/// Below this distance from an integer, the phasor sum is evaluated at its limit.
const SINGULARITY_TOL: f64 = 1e-12;

/// Static geometry and partition of the hybrid array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    n_antennas: usize,
    subarray_size: usize,
    n_subarrays: usize,
    spacing_wavelengths: f64,
    left_subarrays: usize,
}

impl ArrayConfig {
    /// Builds a configuration with half-wavelength spacing and no left
    /// (Root-MUSIC) part.
    pub fn new(n_antennas: usize, subarray_size: usize, n_subarrays: usize) -> Result<Self> {
        if subarray_size == 0 || n_subarrays == 0 {
            return Err(Error::InvalidConfig(
                "subarray size and subarray count must be positive".into(),
            ));
        }
        if subarray_size.checked_mul(n_subarrays) != Some(n_antennas) {
            return Err(Error::InvalidConfig(format!(
                "n_antennas ({n_antennas}) must equal n_subarrays ({n_subarrays}) x subarray_size ({subarray_size})"
            )));
        }
        Ok(Self {
            n_antennas,
            subarray_size,
            n_subarrays,
            spacing_wavelengths: 0.5,
            left_subarrays: 0,
        })
    }

    pub fn with_spacing(mut self, spacing_wavelengths: f64) -> Result<Self> {
        if !(spacing_wavelengths.is_finite() && spacing_wavelengths > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "element spacing must be positive, got {spacing_wavelengths}"
            )));
        }
        self.spacing_wavelengths = spacing_wavelengths;
        Ok(self)
    }

    /// Sets the number `Q` of left subarrays driven with zero-phase weights.
    pub fn with_left_subarrays(mut self, left_subarrays: usize) -> Result<Self> {
        if left_subarrays > self.n_subarrays {
            return Err(Error::InvalidConfig(format!(
                "left_subarrays ({left_subarrays}) exceeds n_subarrays ({})",
                self.n_subarrays
            )));
        }
        self.left_subarrays = left_subarrays;
        Ok(self)
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn subarray_size(&self) -> usize {
        self.subarray_size
    }

    pub fn n_subarrays(&self) -> usize {
        self.n_subarrays
    }

    pub fn spacing_wavelengths(&self) -> f64 {
        self.spacing_wavelengths
    }

    pub fn left_subarrays(&self) -> usize {
        self.left_subarrays
    }

    /// Subarrays steered to sectors when a left part is present.
    pub fn right_subarrays(&self) -> usize {
        self.n_subarrays - self.left_subarrays
    }

    /// Fails unless the configuration can feed the Root-MUSIC stage
    /// (`Q >= 2` and at least one right subarray for the reference estimate).
    pub fn require_root_music(&self) -> Result<()> {
        if self.left_subarrays < 2 {
            return Err(Error::InvalidConfig(format!(
                "Root-MUSIC needs at least 2 left subarrays, got {}",
                self.left_subarrays
            )));
        }
        if self.right_subarrays() == 0 {
            return Err(Error::InvalidConfig(
                "Root-MUSIC plus Max-RP-QI needs at least one right subarray".into(),
            ));
        }
        Ok(())
    }

    /// Sector centers for the full `K`-subarray Max-RP receiver.
    pub fn sector_angles(&self) -> Vec<f64> {
        sector_centers(self.n_subarrays)
    }

    /// Sector centers for the `K - Q` right subarrays of the combined receiver.
    pub fn right_sector_angles(&self) -> Vec<f64> {
        sector_centers(self.right_subarrays())
    }

    /// Spacing of the alias family in spatial frequency, `1 / (M d)`.
    pub fn alias_period(&self) -> f64 {
        1.0 / (self.subarray_size as f64 * self.spacing_wavelengths)
    }
}

/// A single far-field narrowband emitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Emitter {
    angle: f64,
    power: f64,
}

impl Emitter {
    pub fn new(angle: f64, power: f64) -> Result<Self> {
        check_angle(angle)?;
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "emitter power must be finite and nonnegative, got {power}"
            )));
        }
        Ok(Self { angle, power })
    }

    pub fn from_degrees(angle_deg: f64, power: f64) -> Result<Self> {
        Self::new(angle_deg.to_radians(), power)
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn power(&self) -> f64 {
        self.power
    }
}

/// Subarray outputs after analog combining: one row per subarray, one
/// column per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    pub data: DMatrix<C64>,
    pub noise_variance: f64,
}

impl SnapshotMatrix {
    pub fn n_rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_snapshots(&self) -> usize {
        self.data.ncols()
    }
}

/// Both halves of the combined receiver, driven by the same source waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridSnapshots {
    /// `Q x L` outputs of the zero-phase left subarrays.
    pub left: DMatrix<C64>,
    /// `(K - Q) x L` outputs of the sector-steered right subarrays.
    pub right: SnapshotMatrix,
}

/// `u(theta) = cos(theta)`.
pub fn spatial_frequency(angle: f64) -> f64 {
    angle.cos()
}

/// Centers `(2k - 1) pi / (2 count)`, `k = 1..count`, of `count` equal sectors
/// covering `(0, pi)`.
pub fn sector_centers(count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| (2 * k + 1) as f64 * PI / (2 * count) as f64)
        .collect()
}

pub(crate) fn check_angle(angle: f64) -> Result<()> {
    if angle.is_finite() && angle > 0.0 && angle < PI {
        Ok(())
    } else {
        Err(Error::AngleOutOfDomain(angle))
    }
}

fn check_subarray(cfg: &ArrayConfig, k: usize) -> Result<()> {
    if k < cfg.n_subarrays {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: k,
            len: cfg.n_subarrays,
        })
    }
}

/// `sum_{m=0}^{count-1} exp(j 2 pi m t)`.
///
/// Evaluated as `exp(j pi (count-1) r) sin(pi count r) / sin(pi r)` with `r`
/// the offset of `t` from its nearest integer, which is the ratio of complex
/// exponentials rewritten so it stays accurate next to the removable
/// singularity. At the singularity the sum is `count`.
pub fn phasor_sum(count: usize, t: f64) -> C64 {
    let r = t - t.round();
    let m = count as f64;
    if r.abs() < SINGULARITY_TOL {
        return C64::new(m, 0.0);
    }
    let magnitude = (PI * m * r).sin() / (PI * r).sin();
    C64::from_polar(magnitude, PI * (m - 1.0) * r)
}

/// Manifold of subarray `k`: element `m` (zero-based) carries the phase
/// `2 pi [psi_k + (m + 1 - M/2) d u]` with `psi_k = (k - K/2) M d u`.
pub fn steering_vector(cfg: &ArrayConfig, k: usize, angle: f64) -> Result<DVector<C64>> {
    check_subarray(cfg, k)?;
    check_angle(angle)?;
    let d = cfg.spacing_wavelengths;
    let m_size = cfg.subarray_size as f64;
    let u = spatial_frequency(angle);
    let psi = (k as f64 - cfg.n_subarrays as f64 / 2.0) * m_size * d * u;
    Ok(DVector::from_fn(cfg.subarray_size, |m, _| {
        let phase = 2.0 * PI * (psi + (m as f64 + 1.0 - m_size / 2.0) * d * u);
        C64::from_polar(1.0, phase)
    }))
}

/// Analog weights of subarray `k` steered to `sector_angle`, scaled by
/// `1/sqrt(M)` so the combined noise keeps variance `sigma_w^2`.
pub fn analog_weights(cfg: &ArrayConfig, k: usize, sector_angle: f64) -> Result<DVector<C64>> {
    let scale = 1.0 / (cfg.subarray_size as f64).sqrt();
    Ok(steering_vector(cfg, k, sector_angle)? * C64::new(scale, 0.0))
}

/// Weights of the left part: every phase shifter at zero phase.
pub fn zero_phase_weights(cfg: &ArrayConfig) -> DVector<C64> {
    let scale = 1.0 / (cfg.subarray_size as f64).sqrt();
    DVector::from_element(cfg.subarray_size, C64::new(scale, 0.0))
}

/// Normalized Dirichlet response of a subarray steered to `sector_angle`
/// for a source at `source_angle`:
/// `[exp(j2pi M d du) - 1] / [exp(j2pi d du) - 1] / sqrt(M)`,
/// `du = cos(source) - cos(sector)`. Its modulus peaks at `sqrt(M)`.
pub fn gamma_kernel(cfg: &ArrayConfig, sector_angle: f64, source_angle: f64) -> Result<C64> {
    check_angle(sector_angle)?;
    check_angle(source_angle)?;
    Ok(gamma_unchecked(cfg, sector_angle.cos(), source_angle.cos()))
}

#[inline]
pub(crate) fn gamma_unchecked(cfg: &ArrayConfig, sector_u: f64, source_u: f64) -> C64 {
    let t = cfg.spacing_wavelengths * (source_u - sector_u);
    phasor_sum(cfg.subarray_size, t) / (cfg.subarray_size as f64).sqrt()
}

/// Sum of one subarray's element phasors, `sum_m exp(j 2pi m d u)`, which is
/// the gain seen through zero-phase weights (before the `1/sqrt(M)` factor).
pub fn g_factor(cfg: &ArrayConfig, angle: f64) -> Result<C64> {
    check_angle(angle)?;
    Ok(phasor_sum(
        cfg.subarray_size,
        cfg.spacing_wavelengths * spatial_frequency(angle),
    ))
}

/// Manifold of the virtual `Q`-element array formed by the left subarrays:
/// element `q` is `exp(j 2pi q M d u)`.
pub fn virtual_manifold(cfg: &ArrayConfig, angle: f64) -> Result<DVector<C64>> {
    if cfg.left_subarrays < 2 {
        return Err(Error::InvalidConfig(format!(
            "virtual manifold needs at least 2 left subarrays, got {}",
            cfg.left_subarrays
        )));
    }
    check_angle(angle)?;
    Ok(virtual_manifold_unchecked(cfg, angle))
}

pub(crate) fn virtual_manifold_unchecked(cfg: &ArrayConfig, angle: f64) -> DVector<C64> {
    let step = cfg.subarray_size as f64 * cfg.spacing_wavelengths * spatial_frequency(angle);
    DVector::from_fn(cfg.left_subarrays, |q, _| {
        C64::from_polar(1.0, 2.0 * PI * q as f64 * step)
    })
}

/// Noiseless response of each left subarray, `g(theta) a_Q(theta) / sqrt(M)`.
pub(crate) fn left_response(cfg: &ArrayConfig, angle: f64) -> DVector<C64> {
    let g = phasor_sum(
        cfg.subarray_size,
        cfg.spacing_wavelengths * spatial_frequency(angle),
    ) / (cfg.subarray_size as f64).sqrt();
    virtual_manifold_unchecked(cfg, angle) * g
}

fn check_draw_params(noise_variance: f64, n_snapshots: usize) -> Result<()> {
    if n_snapshots == 0 {
        return Err(Error::EmptyInput("n_snapshots must be at least 1"));
    }
    if !(noise_variance.is_finite() && noise_variance >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "noise variance must be finite and nonnegative, got {noise_variance}"
        )));
    }
    Ok(())
}

fn complex_gaussian(rng: &mut ChaCha8Rng, variance: f64) -> C64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(scale * re, scale * im)
}

/// Draws `rows x L` circular Gaussian noise in row-major order.
fn noise_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize, variance: f64) -> DMatrix<C64> {
    let draws: Vec<C64> = (0..rows * cols)
        .map(|_| complex_gaussian(rng, variance))
        .collect();
    DMatrix::from_row_slice(rows, cols, &draws)
}

fn waveform(rng: &mut ChaCha8Rng, power: f64, n_snapshots: usize) -> Vec<C64> {
    (0..n_snapshots)
        .map(|_| complex_gaussian(rng, power))
        .collect()
}

fn steered_rows(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    sector_angles: &[f64],
    signal: &[C64],
    noise: DMatrix<C64>,
) -> DMatrix<C64> {
    let source_u = spatial_frequency(emitter.angle);
    let mut data = noise;
    for (k, &sector) in sector_angles.iter().enumerate() {
        let gain = gamma_unchecked(cfg, sector.cos(), source_u);
        for (l, s) in signal.iter().enumerate() {
            data[(k, l)] += gain * s;
        }
    }
    data
}

/// Synthesizes `y_k(l) = gamma_k s(l) + w_k(l)` for the full `K`-subarray
/// Max-RP receiver, row `k` steered to `sector_angles[k]`.
///
/// The waveform `s` is i.i.d. `CN(0, P_s)` and the combined noise is i.i.d.
/// `CN(0, noise_variance)`. Output is a pure function of the arguments.
pub fn synthesize_snapshots(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    noise_variance: f64,
    n_snapshots: usize,
    seed: u64,
    sector_angles: &[f64],
) -> Result<SnapshotMatrix> {
    if sector_angles.len() != cfg.n_subarrays {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_subarrays,
            found: sector_angles.len(),
        });
    }
    synthesize_steered(cfg, emitter, noise_variance, n_snapshots, seed, sector_angles)
}

/// Like [`synthesize_snapshots`] but for any number of steered rows.
pub fn synthesize_steered(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    noise_variance: f64,
    n_snapshots: usize,
    seed: u64,
    sector_angles: &[f64],
) -> Result<SnapshotMatrix> {
    check_draw_params(noise_variance, n_snapshots)?;
    for &a in sector_angles {
        check_angle(a)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signal = waveform(&mut rng, emitter.power, n_snapshots);
    let noise = noise_rows(&mut rng, sector_angles.len(), n_snapshots, noise_variance);
    Ok(SnapshotMatrix {
        data: steered_rows(cfg, emitter, sector_angles, &signal, noise),
        noise_variance,
    })
}

/// Synthesizes one time slot of the combined receiver: `Q` zero-phase left
/// subarrays and `K - Q` right subarrays steered to
/// [`ArrayConfig::right_sector_angles`].
pub fn synthesize_hybrid(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    noise_variance: f64,
    n_snapshots: usize,
    seed: u64,
) -> Result<HybridSnapshots> {
    cfg.require_root_music()?;
    check_draw_params(noise_variance, n_snapshots)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signal = waveform(&mut rng, emitter.power, n_snapshots);

    let response = left_response(cfg, emitter.angle);
    let mut left = noise_rows(&mut rng, cfg.left_subarrays, n_snapshots, noise_variance);
    for q in 0..cfg.left_subarrays {
        for (l, s) in signal.iter().enumerate() {
            left[(q, l)] += response[q] * s;
        }
    }

    let sectors = cfg.right_sector_angles();
    let noise = noise_rows(&mut rng, sectors.len(), n_snapshots, noise_variance);
    let right = SnapshotMatrix {
        data: steered_rows(cfg, emitter, &sectors, &signal, noise),
        noise_variance,
    };
    Ok(HybridSnapshots { left, right })
}
