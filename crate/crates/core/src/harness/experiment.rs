use crate::array::{ArrayConfig, Emitter};
use crate::crlb::{hybrid_crlb, Method};
use crate::estimators::{hybrid_trial, sector_trial, STREAM_HYBRID, STREAM_SECTORS};
use crate::exec::Execution;
use crate::seed::derive_seed;
use crate::{Error, Result};

/// Description of the trial-to-seed mapping, echoed in every CSV.
pub const SEED_DERIVATION: &str = "trial_seed=derive_seed(master;snr_index,snapshot_index,trial); \
sectors=derive_seed(trial_seed;0); hybrid=derive_seed(trial_seed;1,left_subarrays); \
derive_seed folds each coordinate c as s=splitmix64(s^splitmix64(c)) from s=splitmix64(master)";

/// Emitted power; the noise variance is `10^(-snr/10)`.
pub const SIGNAL_POWER: f64 = 1.0;

pub fn noise_variance(snr_db: f64) -> f64 {
    SIGNAL_POWER * 10f64.powf(-snr_db / 10.0)
}

/// Monte Carlo RMSE sweep over SNR, snapshot count and left-part size.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Geometry; its own left-part size is ignored.
    pub cfg: ArrayConfig,
    pub theta0_deg: f64,
    pub snr_grid_db: Vec<f64>,
    pub snapshot_grid: Vec<usize>,
    /// `K_L` values for the combined method.
    pub left_subarray_grid: Vec<usize>,
    pub n_trials: usize,
    pub master_seed: u64,
    pub methods: Vec<Method>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.snr_grid_db.is_empty() || self.snapshot_grid.is_empty() {
            return Err(Error::InvalidSpec("SNR and snapshot grids must be nonempty".into()));
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidSpec("SNR grid entries must be finite".into()));
        }
        if self.snapshot_grid.contains(&0) {
            return Err(Error::InvalidSpec("snapshot counts must be positive".into()));
        }
        if !(self.theta0_deg > 0.0 && self.theta0_deg < 180.0) {
            return Err(Error::InvalidSpec(format!(
                "theta0_deg must lie in (0, 180), got {}",
                self.theta0_deg
            )));
        }
        if self.n_trials == 0 {
            return Err(Error::InvalidSpec("n_trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidSpec("no methods selected".into()));
        }
        if self.methods.contains(&Method::TLHAD) {
            return Err(Error::InvalidSpec("TLHAD has no estimator, only a FLOP count".into()));
        }
        if self.methods.contains(&Method::RootMusicPlusMaxRPQI) {
            if self.left_subarray_grid.is_empty() {
                return Err(Error::InvalidSpec("left-subarray grid must be nonempty".into()));
            }
            for &q in &self.left_subarray_grid {
                self.cfg.with_left_subarrays(q)?.require_root_music()?;
            }
        }
        Ok(())
    }
}

/// One aggregated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseRow {
    pub method: Method,
    pub snr_db: f64,
    pub n_snapshots: usize,
    /// `K_L`; zero for the methods that use all `K` subarrays as sectors.
    pub k_left: usize,
    /// Over non-failed trials; NaN when every trial failed.
    pub rmse_deg: f64,
    pub n_trials: usize,
    pub failures: usize,
    pub crlb_deg: f64,
}

fn rmse_deg(errors: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut sum = 0.0;
    let mut count = 0;
    for e in errors {
        sum += e.to_degrees().powi(2);
        count += 1;
    }
    if count == 0 {
        (f64::NAN, 0)
    } else {
        ((sum / count as f64).sqrt(), count)
    }
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

/// [`run_experiment_with`] on the default execution.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RmseRow>> {
    run_experiment_with(spec, Execution::default())
}

/// Runs every grid point; rows are ordered by SNR, then snapshot count,
/// then method, then `K_L`.
pub fn run_experiment_with(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<RmseRow>> {
    spec.validate()?;
    let cfg = spec.cfg.with_left_subarrays(0)?;
    let emitter = Emitter::from_degrees(spec.theta0_deg, SIGNAL_POWER)?;
    let theta = emitter.angle();
    let want = |m: Method| spec.methods.contains(&m);
    let mut rows = Vec::new();

    for (si, &snr) in spec.snr_grid_db.iter().enumerate() {
        let sigma2 = noise_variance(snr);
        for (li, &l) in spec.snapshot_grid.iter().enumerate() {
            let trial_seed = |t: usize| derive_seed(spec.master_seed, &[si as u64, li as u64, t as u64]);

            if want(Method::MaxRP) || want(Method::MaxRPQI) {
                let results = exec.map_indices(spec.n_trials, |t| {
                    let seed = derive_seed(trial_seed(t), &[STREAM_SECTORS]);
                    sector_trial(&cfg, &emitter, sigma2, l, seed)
                });
                let results = first_error(results)?;
                let crlb = hybrid_crlb(&cfg, &emitter, sigma2, l, &cfg.sector_angles())?.crlb_deg;
                if want(Method::MaxRP) {
                    let (rmse, _) = rmse_deg(results.iter().map(|(rp, _)| rp - theta));
                    rows.push(RmseRow {
                        method: Method::MaxRP,
                        snr_db: snr,
                        n_snapshots: l,
                        k_left: 0,
                        rmse_deg: rmse,
                        n_trials: spec.n_trials,
                        failures: 0,
                        crlb_deg: crlb,
                    });
                }
                if want(Method::MaxRPQI) {
                    let (rmse, _) = rmse_deg(results.iter().map(|(_, qi)| qi.angle - theta));
                    rows.push(RmseRow {
                        method: Method::MaxRPQI,
                        snr_db: snr,
                        n_snapshots: l,
                        k_left: 0,
                        rmse_deg: rmse,
                        n_trials: spec.n_trials,
                        failures: 0,
                        crlb_deg: crlb,
                    });
                }
            }

            if want(Method::RootMusicPlusMaxRPQI) {
                for &q in &spec.left_subarray_grid {
                    let cfg_q = cfg.with_left_subarrays(q)?;
                    let results = exec.map_indices(spec.n_trials, |t| {
                        let seed = derive_seed(trial_seed(t), &[STREAM_HYBRID, q as u64]);
                        hybrid_trial(&cfg_q, &emitter, sigma2, l, seed)
                    });
                    let results = first_error(results)?;
                    let (rmse, ok) = rmse_deg(
                        results
                            .iter()
                            .filter(|r| !r.fallback)
                            .map(|r| r.angle - theta),
                    );
                    let crlb =
                        hybrid_crlb(&cfg_q, &emitter, sigma2, l, &cfg_q.right_sector_angles())?
                            .crlb_deg;
                    rows.push(RmseRow {
                        method: Method::RootMusicPlusMaxRPQI,
                        snr_db: snr,
                        n_snapshots: l,
                        k_left: q,
                        rmse_deg: rmse,
                        n_trials: spec.n_trials,
                        failures: spec.n_trials - ok,
                        crlb_deg: crlb,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Sector-averaged power profiles for a set of source angles and SNRs.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfileSpec {
    pub cfg: ArrayConfig,
    pub theta0_deg: Vec<f64>,
    pub snr_grid_db: Vec<f64>,
    pub n_snapshots: usize,
    pub n_trials: usize,
    pub master_seed: u64,
}

/// Trial-averaged profile at one `(theta0, SNR)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRun {
    pub theta0_deg: f64,
    pub snr_db: f64,
    pub sector_angles: Vec<f64>,
    pub mean_powers: Vec<f64>,
    /// Trials whose own arg-max is the sector containing `theta0`.
    pub peak_hits: usize,
    pub n_trials: usize,
}

impl ProfileRun {
    /// Arg-max of the averaged profile; ties go to the lowest index.
    pub fn peak_index(&self) -> usize {
        let mut best = 0;
        for (k, &p) in self.mean_powers.iter().enumerate() {
            if p > self.mean_powers[best] {
                best = k;
            }
        }
        best
    }
}

/// Seeds: `derive_seed(master; theta_index, snr_index, trial)`.
pub fn emit_power_profile(spec: &PowerProfileSpec, exec: Execution) -> Result<Vec<ProfileRun>> {
    use crate::array::synthesize_snapshots;
    use crate::estimators::{containing_sector, power_profile};

    if spec.theta0_deg.is_empty() || spec.snr_grid_db.is_empty() {
        return Err(Error::InvalidSpec("angle and SNR grids must be nonempty".into()));
    }
    if spec.n_trials == 0 || spec.n_snapshots == 0 {
        return Err(Error::InvalidSpec("trials and snapshots must be positive".into()));
    }
    if spec.snr_grid_db.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidSpec("SNR grid entries must be finite".into()));
    }
    let cfg = spec.cfg.with_left_subarrays(0)?;
    let sectors = cfg.sector_angles();
    let k = sectors.len();
    let mut runs = Vec::new();
    for (ti, &theta_deg) in spec.theta0_deg.iter().enumerate() {
        let emitter = Emitter::from_degrees(theta_deg, SIGNAL_POWER)?;
        let target = containing_sector(k, emitter.angle());
        for (si, &snr) in spec.snr_grid_db.iter().enumerate() {
            let sigma2 = noise_variance(snr);
            let profiles = exec.map_indices(spec.n_trials, |t| {
                let seed = derive_seed(spec.master_seed, &[ti as u64, si as u64, t as u64]);
                let s = synthesize_snapshots(&cfg, &emitter, sigma2, spec.n_snapshots, seed, &sectors)?;
                power_profile(&s, &sectors)
            });
            let profiles = first_error(profiles)?;
            let mut mean = vec![0.0; k];
            let mut hits = 0;
            for p in &profiles {
                for (m, v) in mean.iter_mut().zip(p.powers()) {
                    *m += v;
                }
                if p.argmax() == target {
                    hits += 1;
                }
            }
            for m in &mut mean {
                *m /= spec.n_trials as f64;
            }
            runs.push(ProfileRun {
                theta0_deg: theta_deg,
                snr_db: snr,
                sector_angles: sectors.clone(),
                mean_powers: mean,
                peak_hits: hits,
                n_trials: spec.n_trials,
            });
        }
    }
    Ok(runs)
}

/// Which geometry parameter stays fixed while `N` varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// `K` fixed, `M = N / K`.
    FixedSubarrays(usize),
    /// `M` fixed, `K = N / M`.
    FixedSubarraySize(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityRow {
    pub n_antennas: usize,
    pub subarray_size: usize,
    pub n_subarrays: usize,
    pub n_snapshots: usize,
    pub method: Method,
    pub flops: crate::crlb::ExactFlops,
}

/// FLOP counts of all four methods along `n_grid`.
pub fn emit_complexity_curves(n_grid: &[usize], sweep: Sweep, n_snapshots: usize) -> Result<Vec<ComplexityRow>> {
    if n_grid.is_empty() {
        return Err(Error::InvalidSpec("antenna grid is empty".into()));
    }
    let mut rows = Vec::new();
    for &n in n_grid {
        let (m, k) = match sweep {
            Sweep::FixedSubarrays(k) if k > 0 && n % k == 0 => (n / k, k),
            Sweep::FixedSubarraySize(m) if m > 0 && n % m == 0 => (m, n / m),
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "N = {n} is not divisible under {sweep:?}"
                )))
            }
        };
        let cfg = ArrayConfig::new(n, m, k)?;
        for method in Method::ALL {
            rows.push(ComplexityRow {
                n_antennas: n,
                subarray_size: m,
                n_subarrays: k,
                n_snapshots,
                method,
                flops: crate::crlb::flops_exact(method, &cfg, n_snapshots)?,
            });
        }
    }
    Ok(rows)
}

/// Bound of the full-sector receiver (`k_left = 0`) and of each hybrid split.
#[derive(Debug, Clone, PartialEq)]
pub struct CrlbRow {
    pub k_left: usize,
    pub snr_db: f64,
    pub n_snapshots: usize,
    pub crlb_deg: f64,
}

pub fn crlb_table(
    cfg: &ArrayConfig,
    theta0_deg: f64,
    snr_grid_db: &[f64],
    snapshot_grid: &[usize],
    left_subarray_grid: &[usize],
) -> Result<Vec<CrlbRow>> {
    let emitter = Emitter::from_degrees(theta0_deg, SIGNAL_POWER)?;
    let base = cfg.with_left_subarrays(0)?;
    let mut splits = vec![(0usize, base.sector_angles())];
    for &q in left_subarray_grid {
        let c = base.with_left_subarrays(q)?;
        c.require_root_music()?;
        splits.push((q, c.right_sector_angles()));
    }
    let mut rows = Vec::new();
    for &snr in snr_grid_db {
        for &l in snapshot_grid {
            for (q, sectors) in &splits {
                let c = base.with_left_subarrays(*q)?;
                let p = hybrid_crlb(&c, &emitter, noise_variance(snr), l, sectors)?;
                rows.push(CrlbRow {
                    k_left: *q,
                    snr_db: snr,
                    n_snapshots: l,
                    crlb_deg: p.crlb_deg,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> ExperimentSpec {
        ExperimentSpec {
            cfg: ArrayConfig::new(256, 8, 32).unwrap(),
            theta0_deg: 61.0,
            snr_grid_db: vec![0.0, 20.0],
            snapshot_grid: vec![40],
            left_subarray_grid: vec![8],
            n_trials: 20,
            master_seed: 9,
            methods: vec![Method::MaxRP, Method::MaxRPQI, Method::RootMusicPlusMaxRPQI],
        }
    }

    #[test]
    fn rows_are_scheduling_independent() {
        let spec = small_spec();
        let a = run_experiment_with(&spec, Execution::Sequential).unwrap();
        let b = run_experiment_with(&spec, Execution::Parallel { threads: 3 }).unwrap();
        assert_eq!(a.len(), 6);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.rmse_deg.to_bits(), y.rmse_deg.to_bits());
            assert_eq!(x, y);
        }
        assert_eq!(a[2].k_left, 8);
        assert!(a.iter().all(|r| r.crlb_deg > 0.0));
    }

    #[test]
    fn spec_validation() {
        let mut s = small_spec();
        s.methods.push(Method::TLHAD);
        assert!(run_experiment(&s).is_err());
        let mut s = small_spec();
        s.left_subarray_grid = vec![1];
        assert!(run_experiment(&s).is_err());
        let mut s = small_spec();
        s.n_trials = 0;
        assert!(run_experiment(&s).is_err());
    }

    #[test]
    fn complexity_grid() {
        let rows = emit_complexity_curves(&[1024, 2048], Sweep::FixedSubarrays(128), 100).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].flops.to_f64(), 31_998_976.0);
        assert_eq!(rows[3].flops.to_f64(), 320_615_360.0);
        assert!(emit_complexity_curves(&[], Sweep::FixedSubarrays(128), 100).is_err());
        assert!(emit_complexity_curves(&[1000], Sweep::FixedSubarraySize(8), 100).is_ok());
        assert!(emit_complexity_curves(&[1001], Sweep::FixedSubarraySize(8), 100).is_err());
    }

    #[test]
    fn noise_only_profile_is_flat() {
        let spec = PowerProfileSpec {
            cfg: ArrayConfig::new(128, 8, 16).unwrap(),
            theta0_deg: vec![41.0],
            snr_grid_db: vec![-200.0],
            n_snapshots: 100,
            n_trials: 50,
            master_seed: 1,
        };
        let run = &emit_power_profile(&spec, Execution::Sequential).unwrap()[0];
        // each mean is an average of 5000 unit-mean exponentials
        let band = 4.0 / (5000f64).sqrt() * noise_variance(-200.0);
        for p in &run.mean_powers {
            assert!((p - noise_variance(-200.0)).abs() < band);
        }
    }
}
