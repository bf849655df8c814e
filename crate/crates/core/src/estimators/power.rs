use std::f64::consts::PI;

use crate::array::SnapshotMatrix;
use crate::{Error, Result};

/// Per-sector average output power paired with the sector centers.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfile {
    sector_angles: Vec<f64>,
    powers: Vec<f64>,
}

impl PowerProfile {
    /// Angles must be strictly increasing inside `(0, pi)` and powers finite
    /// and nonnegative.
    pub fn new(sector_angles: Vec<f64>, powers: Vec<f64>) -> Result<Self> {
        if sector_angles.len() != powers.len() {
            return Err(Error::DimensionMismatch {
                expected: sector_angles.len(),
                found: powers.len(),
            });
        }
        if powers.is_empty() {
            return Err(Error::EmptyInput("power profile"));
        }
        for &a in &sector_angles {
            crate::array::check_angle(a)?;
        }
        if sector_angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec(
                "sector angles must be strictly increasing".into(),
            ));
        }
        if powers.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("sector powers"));
        }
        if powers.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidSpec("sector powers must be nonnegative".into()));
        }
        Ok(Self {
            sector_angles,
            powers,
        })
    }

    pub fn sector_angles(&self) -> &[f64] {
        &self.sector_angles
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// Index of the largest power; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &p) in self.powers.iter().enumerate().skip(1) {
            if p > self.powers[best] {
                best = k;
            }
        }
        best
    }
}

/// `P(theta_k) = (1/L) sum_l |y_k(l)|^2` for every row.
pub fn power_profile(snapshots: &SnapshotMatrix, sector_angles: &[f64]) -> Result<PowerProfile> {
    let data = &snapshots.data;
    if data.nrows() != sector_angles.len() {
        return Err(Error::DimensionMismatch {
            expected: sector_angles.len(),
            found: data.nrows(),
        });
    }
    if data.ncols() == 0 {
        return Err(Error::EmptyInput("snapshot matrix"));
    }
    let scale = 1.0 / data.ncols() as f64;
    let powers = data
        .row_iter()
        .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>() * scale)
        .collect();
    PowerProfile::new(sector_angles.to_vec(), powers)
}

/// Sector center with the largest received power.
pub fn max_rp(profile: &PowerProfile) -> f64 {
    profile.sector_angles[profile.argmax()]
}

/// Index of the sector of `count` equal sectors over `(0, pi)` that contains `angle`.
pub fn containing_sector(count: usize, angle: f64) -> usize {
    let k = (angle / PI * count as f64).floor();
    (k.max(0.0) as usize).min(count - 1)
}
