//! Executable checks of the axiom system against arbitrary value functionals.
//!
//! Each checker draws seeded random instances, measures a deviation from the
//! axiom, and returns an [`AxiomReport`]. A failing report carries the first
//! offending instance as a [`Witness`] that can be replayed against any
//! functional.

mod checks;
mod functionals;
pub mod sampling;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use checks::{
    check, check_benchmarks, check_cohesion_monotonicity, check_dictatorship_invariance,
    check_dummy, check_linearity, check_luce_odds, check_scale_invariance,
    check_shapley_calibration, check_size_cohesion_separability, check_symmetry,
    check_uniform_benchmark, luce_deviation, separability_deviation, Measurement, WitnessCase,
};
pub use functionals::{
    concentration, countermodel_constant_sizeweights, countermodel_dummy_perturbation,
    countermodel_nonpower_transform, countermodel_player_exponents, countermodels,
    positive_functionals, CohesionValue, ConstantSizeWeights, DummyPerturbation, NonPowerTransform,
    NormalizedIndex, PlayerExponents, ValueFunctional, ZeroFunctional,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomId {
    Linearity,
    Dummy,
    Symmetry,
    ScaleInvariance,
    CohesionMonotonicity,
    LuceOdds,
    SizeCohesionSeparability,
    UniformBenchmark,
    ShapleyCalibration,
    DictatorshipInvariance,
}

impl AxiomId {
    pub const ALL: [AxiomId; 10] = [
        AxiomId::Linearity,
        AxiomId::Dummy,
        AxiomId::Symmetry,
        AxiomId::ScaleInvariance,
        AxiomId::CohesionMonotonicity,
        AxiomId::LuceOdds,
        AxiomId::SizeCohesionSeparability,
        AxiomId::UniformBenchmark,
        AxiomId::ShapleyCalibration,
        AxiomId::DictatorshipInvariance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomId::Linearity => "linearity",
            AxiomId::Dummy => "dummy",
            AxiomId::Symmetry => "symmetry",
            AxiomId::ScaleInvariance => "scale-invariance",
            AxiomId::CohesionMonotonicity => "cohesion-monotonicity",
            AxiomId::LuceOdds => "luce-odds",
            AxiomId::SizeCohesionSeparability => "size-cohesion-separability",
            AxiomId::UniformBenchmark => "uniform-benchmark",
            AxiomId::ShapleyCalibration => "shapley-calibration",
            AxiomId::DictatorshipInvariance => "dictatorship-invariance",
        }
    }

    /// Deviation above which a trial counts as a violation. Exact-zero claims
    /// are absolute, odds claims relative, oracle comparisons absolute.
    pub fn tolerance(self) -> f64 {
        match self {
            AxiomId::Linearity => 1e-9,
            AxiomId::Dummy => 1e-12,
            AxiomId::Symmetry => 1e-12,
            AxiomId::ScaleInvariance => 1e-10,
            AxiomId::CohesionMonotonicity => 1e-12,
            AxiomId::LuceOdds => 1e-9,
            AxiomId::SizeCohesionSeparability => 1e-9,
            AxiomId::UniformBenchmark => 1e-12,
            AxiomId::ShapleyCalibration => 1e-10,
            AxiomId::DictatorshipInvariance => 1e-12,
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub axiom: AxiomId,
    pub verdict: Verdict,
}

/// Trial count, seed, and the player counts to cycle through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    pub min_players: usize,
    pub max_players: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0x5eed,
            min_players: 2,
            max_players: 6,
        }
    }
}

impl TrialConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            ..Self::default()
        }
    }

    pub fn with_players(self, min_players: usize, max_players: usize) -> Self {
        Self {
            min_players,
            max_players,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::schema("trials", "must be at least 1"));
        }
        if self.min_players < 2
            || self.min_players > self.max_players
            || self.max_players > crate::coalition::MAX_PLAYERS
        {
            return Err(Error::PlayerCount(self.max_players.max(self.min_players)));
        }
        Ok(())
    }

    /// Player count for a trial; trials cycle through the configured range.
    pub fn players_for(&self, trial: usize) -> usize {
        self.min_players + trial % (self.max_players - self.min_players + 1)
    }
}

/// The first violating instance found by a checker.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub n: usize,
    pub deviation: f64,
    pub player: Option<usize>,
    pub case: WitnessCase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub functional: String,
    pub verdict: Verdict,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    /// Re-evaluates the stored witness against `functional`.
    pub fn replay(&self, functional: &dyn ValueFunctional) -> Option<Result<Measurement>> {
        self.witness.as_ref().map(|w| w.case.measure(functional))
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axiom={} functional={} verdict={} trials={} seed={} tolerance={:e} max_deviation={:e}",
            self.axiom,
            self.functional,
            self.verdict,
            self.trials,
            self.seed,
            self.tolerance,
            self.max_deviation
        )?;
        if let Some(w) = &self.witness {
            write!(f, " witness_trial={} witness_n={}", w.trial, w.n)?;
            if let Some(p) = w.player {
                write!(f, " witness_player={p}")?;
            }
        }
        Ok(())
    }
}

/// A report paired with the verdict the functional was expected to receive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub expected: Verdict,
    pub report: AxiomReport,
}

impl SuiteEntry {
    pub fn as_expected(&self) -> bool {
        self.expected == self.report.verdict
    }
}

/// Runs every check in the functional's expected profile.
pub fn run_expectations(
    functional: &dyn ValueFunctional,
    cfg: &TrialConfig,
) -> Result<Vec<SuiteEntry>> {
    functional
        .expected_profile()
        .into_iter()
        .map(|e| {
            Ok(SuiteEntry {
                expected: e.verdict,
                report: check(e.axiom, functional, cfg)?,
            })
        })
        .collect()
}
