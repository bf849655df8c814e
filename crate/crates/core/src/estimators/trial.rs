use std::time::{Duration, Instant};

use super::combined::{root_music_plus_max_rp_qi, CombinedEstimate};
use super::power::{max_rp, power_profile};
use super::qi::{max_rp_qi, QiEstimate};
use crate::array::{synthesize_hybrid, synthesize_snapshots, ArrayConfig, Emitter};
use crate::seed::derive_seed;
use crate::Result;

/// Sub-stream of a trial seed feeding the full `K`-subarray receiver.
pub const STREAM_SECTORS: u64 = 0;
/// Sub-stream of a trial seed feeding the hybrid left/right receiver.
pub const STREAM_HYBRID: u64 = 1;

/// Wall time spent in each estimator, synthesis excluded.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub max_rp: Duration,
    pub max_rp_qi: Duration,
    pub root_music_qi: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub true_angle: f64,
    pub max_rp: f64,
    pub max_rp_qi: QiEstimate,
    /// Absent when the configuration has fewer than two left subarrays.
    pub root_music_qi: Option<CombinedEstimate>,
    pub seed: u64,
    pub timings: Timings,
}

/// Max-RP and Max-RP-QI on one time slot of the full `K`-sector receiver.
pub fn sector_trial(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    noise_variance: f64,
    n_snapshots: usize,
    seed: u64,
) -> Result<(f64, QiEstimate)> {
    let sectors = cfg.sector_angles();
    let s = synthesize_snapshots(cfg, emitter, noise_variance, n_snapshots, seed, &sectors)?;
    let profile = power_profile(&s, &sectors)?;
    Ok((max_rp(&profile), max_rp_qi(&profile)))
}

/// Root-MUSIC plus Max-RP-QI on one time slot of the hybrid receiver.
pub fn hybrid_trial(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    noise_variance: f64,
    n_snapshots: usize,
    seed: u64,
) -> Result<CombinedEstimate> {
    let h = synthesize_hybrid(cfg, emitter, noise_variance, n_snapshots, seed)?;
    root_music_plus_max_rp_qi(&h.right, &h.left, cfg)
}

/// Runs every estimator the configuration supports on independent draws
/// derived from `seed`.
pub fn run_trial(
    cfg: &ArrayConfig,
    emitter: &Emitter,
    noise_variance: f64,
    n_snapshots: usize,
    seed: u64,
) -> Result<EstimateReport> {
    let sectors = cfg.sector_angles();
    let s = synthesize_snapshots(
        cfg,
        emitter,
        noise_variance,
        n_snapshots,
        derive_seed(seed, &[STREAM_SECTORS]),
        &sectors,
    )?;

    let start = Instant::now();
    let profile = power_profile(&s, &sectors)?;
    let rp = max_rp(&profile);
    let t_rp = start.elapsed();

    let start = Instant::now();
    let profile = power_profile(&s, &sectors)?;
    let qi = max_rp_qi(&profile);
    let t_qi = start.elapsed();

    let (combined, t_combined) = if cfg.left_subarrays() >= 2 {
        let h = synthesize_hybrid(
            cfg,
            emitter,
            noise_variance,
            n_snapshots,
            derive_seed(seed, &[STREAM_HYBRID]),
        )?;
        let start = Instant::now();
        let est = root_music_plus_max_rp_qi(&h.right, &h.left, cfg)?;
        (Some(est), Some(start.elapsed()))
    } else {
        (None, None)
    };

    Ok(EstimateReport {
        true_angle: emitter.angle(),
        max_rp: rp,
        max_rp_qi: qi,
        root_music_qi: combined,
        seed,
        timings: Timings {
            max_rp: t_rp,
            max_rp_qi: t_qi,
            root_music_qi: t_combined,
        },
    })
}
