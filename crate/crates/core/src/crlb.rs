//! Numerical hybrid Cramér-Rao bound and closed-form FLOP counts.
//!
//! The bound treats the waveform as known up to one unknown complex gain per
//! receiver part (the zero-phase left subarrays and the steered right
//! subarrays), so arbitrary per-part phase references drop out. With
//! `a_p(theta)` the noiseless response of part `p`,
//!
//! `I(theta) = (2 L P_s / sigma^2) sum_p (|a_p'|^2 - |a_p^H a_p'|^2 / |a_p|^2)`.
//!
//! Derivatives come from central differences with one Richardson step.

use nalgebra::DVector;

use crate::array::{gamma_unchecked, left_response, ArrayConfig, Emitter};
use crate::{Error, Result, C64};

/// Central-difference step (rad).
pub const FD_STEP: f64 = 1e-6;
/// Largest tolerated relative change between the Richardson value and the
/// finer central difference.
const RICHARDSON_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrlbPoint {
    pub snr_db: f64,
    pub n_snapshots: usize,
    /// Root-CRLB in degrees.
    pub crlb_deg: f64,
}

/// Noiseless per-snapshot response of each receiver part: the left part when
/// `Q >= 1`, then the subarrays steered to `sector_angles`.
pub fn hybrid_mean(cfg: &ArrayConfig, angle: f64, sector_angles: &[f64]) -> Vec<DVector<C64>> {
    let mut parts = Vec::with_capacity(2);
    if cfg.left_subarrays() >= 1 {
        parts.push(left_response(cfg, angle));
    }
    if !sector_angles.is_empty() {
        let u = angle.cos();
        parts.push(DVector::from_iterator(
            sector_angles.len(),
            sector_angles.iter().map(|s| gamma_unchecked(cfg, s.cos(), u)),
        ));
    }
    parts
}

fn central_difference(cfg: &ArrayConfig, angle: f64, sectors: &[f64], h: f64) -> Vec<DVector<C64>> {
    let plus = hybrid_mean(cfg, angle + h, sectors);
    let minus = hybrid_mean(cfg, angle - h, sectors);
    plus.iter()
        .zip(&minus)
        .map(|(p, m)| (p - m) / C64::new(2.0 * h, 0.0))
        .collect()
}

/// `d a_p / d theta` for every part, Richardson-extrapolated from steps `h`
/// and `h / 2`.
pub fn hybrid_mean_derivative(
    cfg: &ArrayConfig,
    angle: f64,
    sector_angles: &[f64],
) -> Result<Vec<DVector<C64>>> {
    let h = FD_STEP;
    if !(angle - h > 0.0 && angle + h < std::f64::consts::PI) {
        return Err(Error::AngleOutOfDomain(angle));
    }
    let coarse = central_difference(cfg, angle, sector_angles, h);
    let fine = central_difference(cfg, angle, sector_angles, h / 2.0);
    let mut out = Vec::with_capacity(coarse.len());
    for (c, f) in coarse.iter().zip(&fine) {
        let r = (f * C64::new(4.0, 0.0) - c) / C64::new(3.0, 0.0);
        if r.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("finite-difference derivative"));
        }
        let scale = r.norm().max(1.0);
        if (&r - f).norm() > RICHARDSON_TOL * scale {
            return Err(Error::Numerical(
                "finite-difference derivative failed the Richardson check".into(),
            ));
        }
        out.push(r);
    }
    Ok(out)
}

/// Fisher information for the angle given per-part responses and their
/// derivatives, each part carrying its own unknown complex gain.
pub fn fisher_from_derivatives(
    parts: &[DVector<C64>],
    derivatives: &[DVector<C64>],
    signal_power: f64,
    noise_variance: f64,
    n_snapshots: usize,
) -> f64 {
    let projected: f64 = parts
        .iter()
        .zip(derivatives)
        .map(|(a, da)| {
            let aa = a.norm_squared();
            let full = da.norm_squared();
            if aa == 0.0 {
                return 0.0;
            }
            let cross = a.dotc(da).norm_sqr();
            (full - cross / aa).max(0.0)
        })
        .sum();
    2.0 * n_snapshots as f64 * signal_power / noise_variance * projected
}

/// Root-CRLB of the hybrid receiver described by `cfg` (left part of `Q`
/// zero-phase subarrays) whose steered subarrays point at `sector_angles`.
pub fn hybrid_crlb(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    noise_variance: f64,
    n_snapshots: usize,
    sector_angles: &[f64],
) -> Result<CrlbPoint> {
    if !(noise_variance.is_finite() && noise_variance > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "CRLB needs a positive noise variance, got {noise_variance}"
        )));
    }
    if !(emitter.power() > 0.0) {
        return Err(Error::InvalidConfig("CRLB needs a positive emitter power".into()));
    }
    if n_snapshots == 0 {
        return Err(Error::EmptyInput("n_snapshots must be at least 1"));
    }
    for &s in sector_angles {
        crate::array::check_angle(s)?;
    }
    let angle = emitter.angle();
    let parts = hybrid_mean(cfg, angle, sector_angles);
    let derivatives = hybrid_mean_derivative(cfg, angle, sector_angles)?;
    let info = fisher_from_derivatives(&parts, &derivatives, emitter.power(), noise_variance, n_snapshots);
    if !(info.is_finite() && info > 0.0) {
        return Err(Error::Numerical(format!(
            "Fisher information is not positive ({info})"
        )));
    }
    Ok(CrlbPoint {
        snr_db: 10.0 * (emitter.power() / noise_variance).log10(),
        n_snapshots,
        crlb_deg: info.sqrt().recip().to_degrees(),
    })
}

/// Estimators with a closed-form complexity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    MaxRP,
    MaxRPQI,
    RootMusicPlusMaxRPQI,
    TLHAD,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::MaxRP,
        Method::MaxRPQI,
        Method::RootMusicPlusMaxRPQI,
        Method::TLHAD,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::MaxRP => "max_rp",
            Method::MaxRPQI => "max_rp_qi",
            Method::RootMusicPlusMaxRPQI => "root_music_max_rp_qi",
            Method::TLHAD => "tlhad",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// Exact FLOP count as a reduced fraction; every formula is a multiple of 1/12.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactFlops {
    pub numer: u128,
    pub denom: u128,
}

impl ExactFlops {
    fn from_twelfths(twelfths: u128) -> Self {
        let mut a = twelfths;
        let mut b = 12u128;
        while b != 0 {
            (a, b) = (b, a % b);
        }
        let g = a.max(1);
        Self {
            numer: twelfths / g,
            denom: 12 / g,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

/// Closed-form complexity of `method` at `cfg` and `L` snapshots, exact.
pub fn flops_exact(method: Method, cfg: &ArrayConfig, n_snapshots: usize) -> Result<ExactFlops> {
    if n_snapshots == 0 {
        return Err(Error::EmptyInput("n_snapshots must be at least 1"));
    }
    let k = cfg.n_subarrays() as u128;
    let m = cfg.subarray_size() as u128;
    let n = cfg.n_antennas() as u128;
    let l = n_snapshots as u128;

    // per-subarray power computation, 3 M L^2 + L^2 - M >= 0 since L >= 1
    let per_subarray = 3 * m * l * l + l * l - m;
    // (K^3 + 6 K^2 + 2 K) / 3 in twelfths
    let qi_twelfths = 4 * (k * k * k + 6 * k * k + 2 * k);

    let twelfths = match method {
        Method::MaxRP => 12 * k * per_subarray,
        Method::MaxRPQI => 12 * k * per_subarray + qi_twelfths,
        Method::RootMusicPlusMaxRPQI => {
            if k < 2 {
                return Err(Error::InvalidConfig(
                    "combined-method complexity needs at least 2 subarrays".into(),
                ));
            }
            (k - 2) * (12 * per_subarray + qi_twelfths) + 12 * (m * m * m + 2 * m * l * l)
        }
        Method::TLHAD => {
            12 * (m * m * m + m * m * (2 * l - 1)) + 3 * (n * n * n + n * n * (2 * l - 1))
        }
    };
    Ok(ExactFlops::from_twelfths(twelfths))
}

/// [`flops_exact`] as a float.
pub fn flops(method: Method, cfg: &ArrayConfig, n_snapshots: usize) -> Result<f64> {
    Ok(flops_exact(method, cfg, n_snapshots)?.to_f64())
}
