//! Random search for the multi-sector plate with the largest Shannon
//! dimensionality.
//!
//! A plate with `N` mesas has `2N` boundaries and alternates pi, 0, pi, 0, ...
//! The objective is rotation invariant, so every candidate is turned to put
//! its first boundary at 0 and only the other `2N - 1` angles are searched.
//! Each restart draws uniform candidates, keeps the best, and then (unless
//! disabled) polishes it by coordinate pattern search with a halving step.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dimension::shannon_dimension;
use crate::error::{Error, Result};
use crate::plate::SectorPlate;
use crate::spectrum::{mode_spectrum, LMaxRule};

/// Smallest gap kept between neighbouring boundaries.
const MIN_GAP: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Independent restarts; the sampling budget is split evenly over them.
    pub restarts: usize,
    /// Coordinate pattern refinement after sampling. Off gives plain random
    /// search.
    pub refine: bool,
    /// Initial refinement step; `None` means `pi / (8N)`.
    pub initial_step: Option<f64>,
    pub min_step: f64,
    /// Window used while searching. Dimensions are exact for any window, so
    /// this only trades memory for nothing and is kept minimal.
    pub search_rule: LMaxRule,
    /// Window for the final recomputation in the report.
    pub report_rule: LMaxRule,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 8,
            refine: true,
            initial_step: None,
            min_step: 1e-6,
            search_rule: LMaxRule::Fixed(0),
            report_rule: LMaxRule::DEFAULT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationReport {
    pub n_mesas: usize,
    #[serde(skip)]
    pub best_plate: SectorPlate,
    pub boundaries_rad: Vec<f64>,
    pub dimension: f64,
    /// Objective evaluations over all restarts, sampling and refinement.
    pub evaluations: usize,
    pub seed: u64,
    pub refinement_iterations: usize,
    pub l_max_used: usize,
    /// Best sampled dimension of the winning restart, before refinement.
    #[serde(skip)]
    pub sampled_dimension: f64,
    /// Incumbent dimension after every improvement of the winning restart.
    #[serde(skip)]
    pub trajectory: Vec<f64>,
    #[serde(skip)]
    pub restart: usize,
}

impl OptimizationReport {
    pub fn best_dimension(&self) -> f64 {
        self.dimension
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Shannon dimensionality of the alternating plate on `boundaries`.
pub fn evaluate_candidate(boundaries: &[f64], rule: LMaxRule) -> Result<f64> {
    let plate = SectorPlate::alternating(boundaries)?;
    shannon_dimension(&mode_spectrum(&plate, rule.resolve(&plate)))
}

pub fn optimize_plate(n_mesas: usize, budget: usize, seed: u64) -> Result<OptimizationReport> {
    optimize_plate_with(n_mesas, budget, seed, &OptimizerConfig::default())
}

pub fn optimize_plate_with(n_mesas: usize, budget: usize, seed: u64, config: &OptimizerConfig) -> Result<OptimizationReport> {
    if n_mesas == 0 {
        return Err(Error::InvalidMesaCount);
    }
    if budget == 0 || config.restarts == 0 {
        return Err(Error::InvalidBudget);
    }
    let restarts = config.restarts.min(budget);
    let runs: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let draws = budget / restarts + usize::from(r < budget % restarts);
            run_restart(n_mesas, draws, restart_seed(seed, r), config)
        })
        .collect::<Result<_>>()?;

    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let (restart, best) = runs
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.dimension > a.1.dimension { b } else { a })
        .expect("at least one restart");

    let best_plate = SectorPlate::alternating(&best.boundaries)?;
    let l_max_used = config.report_rule.resolve(&best_plate);
    let dimension = shannon_dimension(&mode_spectrum(&best_plate, l_max_used))?;
    Ok(OptimizationReport {
        n_mesas,
        boundaries_rad: best.boundaries,
        best_plate,
        dimension,
        evaluations,
        seed,
        refinement_iterations: best.refinement_iterations,
        l_max_used,
        sampled_dimension: best.sampled_dimension,
        trajectory: best.trajectory,
        restart,
    })
}

/// One report per `N` in `1..=n_max`.
pub fn dimension_vs_sectors(n_max: usize, budget_per_n: usize, seed: u64) -> Result<Vec<OptimizationReport>> {
    dimension_vs_sectors_with(n_max, budget_per_n, seed, &OptimizerConfig::default())
}

pub fn dimension_vs_sectors_with(
    n_max: usize,
    budget_per_n: usize,
    seed: u64,
    config: &OptimizerConfig,
) -> Result<Vec<OptimizationReport>> {
    if n_max == 0 {
        return Err(Error::InvalidMesaCount);
    }
    (1..=n_max).map(|n| optimize_plate_with(n, budget_per_n, seed, config)).collect()
}

/// `n,dimension_max` table.
pub fn sweep_csv(reports: &[OptimizationReport]) -> String {
    let mut out = String::from("n,dimension_max\n");
    for r in reports {
        out.push_str(&format!("{},{:?}\n", r.n_mesas, r.dimension));
    }
    out
}

struct RestartOutcome {
    boundaries: Vec<f64>,
    dimension: f64,
    sampled_dimension: f64,
    evaluations: usize,
    refinement_iterations: usize,
    trajectory: Vec<f64>,
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    // splitmix64 finalizer over (seed, restart)
    let mut z = seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_restart(n_mesas: usize, draws: usize, seed: u64, config: &OptimizerConfig) -> Result<RestartOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = 2 * n_mesas;
    let mut evaluations = 0;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut trajectory = Vec::new();

    for _ in 0..draws {
        let candidate = sample_candidate(&mut rng, count);
        let d = evaluate_candidate(&candidate, config.search_rule)?;
        evaluations += 1;
        if best.as_ref().is_none_or(|(_, b)| d > *b) {
            trajectory.push(d);
            best = Some((candidate, d));
        }
    }
    let (mut boundaries, mut dimension) = best.expect("draws >= 1");
    let sampled_dimension = dimension;
    let mut refinement_iterations = 0;

    if config.refine {
        let mut step = config.initial_step.unwrap_or(PI / (8.0 * n_mesas as f64));
        while step >= config.min_step {
            refinement_iterations += 1;
            let mut improved = false;
            for i in 1..count {
                let lo = boundaries[i - 1] + MIN_GAP;
                let hi = if i + 1 < count { boundaries[i + 1] } else { TAU } - MIN_GAP;
                for direction in [1.0, -1.0] {
                    let moved = (boundaries[i] + direction * step).clamp(lo, hi);
                    if moved == boundaries[i] {
                        continue;
                    }
                    let mut candidate = boundaries.clone();
                    candidate[i] = moved;
                    let d = evaluate_candidate(&candidate, config.search_rule)?;
                    evaluations += 1;
                    if d > dimension {
                        boundaries = candidate;
                        dimension = d;
                        trajectory.push(d);
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }

    Ok(RestartOutcome {
        boundaries,
        dimension,
        sampled_dimension,
        evaluations,
        refinement_iterations,
        trajectory,
    })
}

/// `count` sorted uniform angles, turned so the first sits at 0, with
/// coincident angles pushed apart by [`MIN_GAP`].
fn sample_candidate(rng: &mut impl Rng, count: usize) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let origin = angles[0];
    for a in &mut angles {
        *a -= origin;
    }
    for k in 1..count {
        angles[k] = angles[k].max(angles[k - 1] + MIN_GAP);
    }
    let last = count - 1;
    if angles[last] > TAU - MIN_GAP {
        angles[last] = TAU - MIN_GAP;
        for k in (1..last).rev() {
            angles[k] = angles[k].min(angles[k + 1] - MIN_GAP);
        }
    }
    angles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn objective_examples() {
        assert!((evaluate_candidate(&[0.0, FRAC_PI_2], LMaxRule::Fixed(0)).unwrap() - 6.0).abs() < 1e-12);
        assert!((evaluate_candidate(&[0.0, PI], LMaxRule::Fixed(0)).unwrap() - 3.0).abs() < 1e-12);
        let near_uniform = evaluate_candidate(&[0.0, 1e-6], LMaxRule::DEFAULT).unwrap();
        assert!((near_uniform - 1.0).abs() < 1e-5);
        assert!(evaluate_candidate(&[0.0, 1.0, 2.0], LMaxRule::Fixed(0)).is_err());
    }

    #[test]
    fn objective_is_independent_of_window() {
        let b = [0.0, 0.4, 1.3, 2.0, 3.1, 4.4];
        let exact = evaluate_candidate(&b, LMaxRule::Fixed(0)).unwrap();
        for rule in [LMaxRule::Fixed(10), LMaxRule::DEFAULT, LMaxRule::Fixed(9000)] {
            assert!((evaluate_candidate(&b, rule).unwrap() - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn objective_symmetries() {
        let b = [0.3, 0.9, 1.7, 2.0, 4.2, 5.9];
        let d = evaluate_candidate(&b, LMaxRule::Fixed(0)).unwrap();
        let plate = SectorPlate::alternating(&b).unwrap();
        for plate in [plate.rotate(Angle::new(2.2)), plate.reflect()] {
            let e = shannon_dimension(&mode_spectrum(&plate, 0)).unwrap();
            assert!((d - e).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(optimize_plate(0, 10, 1).unwrap_err(), Error::InvalidMesaCount);
        assert_eq!(optimize_plate(1, 0, 1).unwrap_err(), Error::InvalidBudget);
        assert_eq!(dimension_vs_sectors(0, 10, 1).unwrap_err(), Error::InvalidMesaCount);
    }

    #[test]
    fn candidates_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for count in [2, 4, 20] {
            for _ in 0..100 {
                let c = sample_candidate(&mut rng, count);
                assert_eq!(c[0], 0.0);
                assert!(c.windows(2).all(|w| w[1] - w[0] >= MIN_GAP * 0.999));
                assert!(*c.last().unwrap() < TAU);
                SectorPlate::alternating(&c).unwrap();
            }
        }
    }

    #[test]
    fn single_mesa_finds_quarter_sector() {
        let r = optimize_plate(1, 2000, 7).unwrap();
        assert!((r.dimension - 6.0).abs() < 0.01);
        let w = r.best_plate.widths();
        let pi_sector = w[0];
        assert!((pi_sector - FRAC_PI_2).abs() < 0.01 || (pi_sector - 1.5 * PI).abs() < 0.01);
    }

    #[test]
    fn reports_are_reproducible_and_monotone() {
        let a = optimize_plate(2, 300, 11).unwrap();
        let b = optimize_plate(2, 300, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.trajectory.windows(2).all(|w| w[1] >= w[0]));
        assert!(a.dimension >= a.sampled_dimension - 1e-9);
        assert_eq!(a.best_plate.sector_count(), 4);
        let recomputed = shannon_dimension(&mode_spectrum(&a.best_plate, a.l_max_used)).unwrap();
        assert!((recomputed - a.dimension).abs() < 1e-9);
        let doubled = shannon_dimension(&mode_spectrum(&a.best_plate, 2 * a.l_max_used)).unwrap();
        assert!((doubled - a.dimension).abs() < 1e-4);
    }

    #[test]
    fn random_only_mode_skips_refinement() {
        let config = OptimizerConfig {
            refine: false,
            ..OptimizerConfig::default()
        };
        let r = optimize_plate_with(2, 100, 5, &config).unwrap();
        assert_eq!(r.refinement_iterations, 0);
        assert_eq!(r.evaluations, 100);
        assert_eq!(r.dimension, r.sampled_dimension);
    }
}
