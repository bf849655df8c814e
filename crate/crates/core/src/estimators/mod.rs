//! Max-RP, Max-RP-QI and Root-MUSIC plus Max-RP-QI.

mod combined;
mod power;
mod qi;
mod root_music;
mod trial;

pub use combined::{combine, disambiguate, root_music_plus_max_rp_qi, CombinedEstimate, Disambiguation};
pub use power::{containing_sector, max_rp, power_profile, PowerProfile};
pub use qi::{max_rp_qi, parabola_vertex, quadratic_interp, QiEstimate, QiStatus};
pub use root_music::{
    alias_family, root_music_candidates, root_music_from_covariance, root_music_polynomial,
    virtual_phase, CandidateSet, RootMusicStatus,
};
pub use trial::{
    hybrid_trial, run_trial, sector_trial, EstimateReport, Timings, STREAM_HYBRID, STREAM_SECTORS,
};
