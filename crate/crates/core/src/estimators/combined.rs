use nalgebra::DMatrix;

use super::power::{power_profile, PowerProfile};
use super::qi::{max_rp_qi, QiEstimate};
use super::root_music::{root_music_candidates, CandidateSet};
use crate::array::{ArrayConfig, SnapshotMatrix};
use crate::{Error, Result, C64};

/// Result of choosing one alias against the reference angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disambiguation {
    pub angle: f64,
    /// No candidates were available; `angle` is the reference.
    pub fallback: bool,
    /// The reference lies more than a quarter alias period (in `cos` space)
    /// from the chosen candidate.
    pub low_confidence: bool,
}

/// Candidate nearest to `reference` in squared angle; ties go to the smaller angle.
pub fn disambiguate(candidates: &CandidateSet, reference: f64, cfg: &ArrayConfig) -> Disambiguation {
    let mut best: Option<f64> = None;
    for &a in candidates.angles() {
        match best {
            Some(b) if (a - reference).powi(2) >= (b - reference).powi(2) => {}
            _ => best = Some(a),
        }
    }
    match best {
        Some(angle) => Disambiguation {
            angle,
            fallback: false,
            low_confidence: (angle.cos() - reference.cos()).abs() > cfg.alias_period() / 4.0,
        },
        None => Disambiguation {
            angle: reference,
            fallback: true,
            low_confidence: true,
        },
    }
}

/// Full output of the Root-MUSIC plus Max-RP-QI estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedEstimate {
    pub angle: f64,
    pub reference: QiEstimate,
    pub candidates: CandidateSet,
    pub fallback: bool,
    pub low_confidence: bool,
}

/// Joins a right-part profile and a left-part candidate set.
pub fn combine(profile: &PowerProfile, candidates: CandidateSet, cfg: &ArrayConfig) -> CombinedEstimate {
    let reference = max_rp_qi(profile);
    let d = disambiguate(&candidates, reference.angle, cfg);
    CombinedEstimate {
        angle: d.angle,
        reference,
        candidates,
        fallback: d.fallback,
        low_confidence: d.low_confidence,
    }
}

/// Root-MUSIC on the `Q` left subarrays, with Max-RP-QI on the `K - Q`
/// right subarrays (steered to [`ArrayConfig::right_sector_angles`]) picking
/// the alias.
pub fn root_music_plus_max_rp_qi(
    snapshots: &SnapshotMatrix,
    left_snapshots: &DMatrix<C64>,
    cfg: &ArrayConfig,
) -> Result<CombinedEstimate> {
    cfg.require_root_music()?;
    if snapshots.n_snapshots() != left_snapshots.ncols() {
        return Err(Error::DimensionMismatch {
            expected: left_snapshots.ncols(),
            found: snapshots.n_snapshots(),
        });
    }
    let profile = power_profile(snapshots, &cfg.right_sector_angles())?;
    let candidates = root_music_candidates(left_snapshots, cfg)?;
    Ok(combine(&profile, candidates, cfg))
}
