use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coalition::{Coalition, Game, Permutation};
use crate::cohesion::CohesionStructure;
use crate::error::{Error, Result};
use crate::values::{classical_shapley_oracle, normalize_values, CoalitionDistribution};

use super::functionals::ValueFunctional;
use super::sampling::{self, trial_rng};
use super::{AxiomId, AxiomReport, TrialConfig, Verdict, Witness};

/// Largest deviation found on one instance, and the player where it occurred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measurement {
    pub deviation: f64,
    pub player: Option<usize>,
}

impl Measurement {
    fn zero() -> Self {
        Self {
            deviation: 0.0,
            player: None,
        }
    }

    fn observe(&mut self, player: usize, deviation: f64) {
        if deviation > self.deviation || deviation.is_nan() {
            self.deviation = deviation;
            self.player = Some(player);
        }
    }
}

/// One self-contained test instance. Tables are dense over all `2^n`
/// coalitions, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessCase {
    Linearity {
        v: Vec<f64>,
        w: Vec<f64>,
        kappa: Vec<f64>,
        a: f64,
        c: f64,
    },
    Dummy {
        v: Vec<f64>,
        kappa: Vec<f64>,
        player: usize,
    },
    Symmetry {
        v: Vec<f64>,
        kappa: Vec<f64>,
        permutation: Permutation,
    },
    Scale {
        v: Vec<f64>,
        kappa: Vec<f64>,
        a: f64,
    },
    CohesionMonotonicity {
        v: Vec<f64>,
        kappa: Vec<f64>,
        raised: Vec<f64>,
        player: usize,
    },
    LuceOdds {
        kappa: Vec<f64>,
    },
    Separability {
        kappa: Vec<f64>,
    },
    Uniform {
        n: usize,
    },
    Calibration {
        v: Vec<f64>,
    },
    Dictator {
        v: Vec<f64>,
        kappa: Vec<f64>,
        dictator: usize,
    },
}

fn table_n(table: &[f64]) -> usize {
    table.len().trailing_zeros() as usize
}

fn game(table: &[f64]) -> Result<Game> {
    Game::new(sampling::players(table_n(table)), table.to_vec())
}

fn cohesion(table: &[f64]) -> Result<CohesionStructure> {
    CohesionStructure::new(sampling::players(table_n(table)), table.to_vec())
}

fn distribution(
    f: &dyn ValueFunctional,
    kappa: &CohesionStructure,
    player: usize,
) -> Result<CoalitionDistribution> {
    f.distribution(kappa, player)
        .unwrap_or_else(|| Err(Error::NoDistribution(f.name())))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

impl WitnessCase {
    /// Evaluates `functional` on this instance and returns the deviation
    /// from the axiom the case was generated for.
    pub fn measure(&self, functional: &dyn ValueFunctional) -> Result<Measurement> {
        let f = functional;
        let mut m = Measurement::zero();
        match self {
            WitnessCase::Linearity { v, w, kappa, a, c } => {
                let (v, w, kappa) = (game(v)?, game(w)?, cohesion(kappa)?);
                let combined = Game::linear_combination(*a, &v, *c, &w)?;
                let lhs = f.evaluate(&combined, &kappa)?;
                let fv = f.evaluate(&v, &kappa)?;
                let fw = f.evaluate(&w, &kappa)?;
                for i in 0..lhs.len() {
                    m.observe(i, (lhs[i] - (a * fv[i] + c * fw[i])).abs());
                }
            }
            WitnessCase::Dummy { v, kappa, player } => {
                let values = f.evaluate(&game(v)?, &cohesion(kappa)?)?;
                m.observe(*player, values[*player].abs());
            }
            WitnessCase::Symmetry {
                v,
                kappa,
                permutation,
            } => {
                let (v, kappa) = (game(v)?, cohesion(kappa)?);
                let base = f.evaluate(&v, &kappa)?;
                let moved = f.evaluate(&v.permuted(permutation)?, &kappa.permuted(permutation)?)?;
                for (i, x) in base.iter().enumerate() {
                    m.observe(i, (moved[permutation.apply(i)] - x).abs());
                }
            }
            WitnessCase::Scale { v, kappa, a } => {
                let (v, kappa) = (game(v)?, cohesion(kappa)?);
                let base = f.evaluate(&v, &kappa)?;
                let scaled = f.evaluate(&v, &kappa.scale(*a)?)?;
                for (i, (x, y)) in scaled.iter().zip(&base).enumerate() {
                    m.observe(i, relative(*x, *y));
                }
            }
            WitnessCase::CohesionMonotonicity {
                v,
                kappa,
                raised,
                player,
            } => {
                let v = game(v)?;
                let before = f.evaluate(&v, &cohesion(kappa)?)?[*player];
                let after = f.evaluate(&v, &cohesion(raised)?)?[*player];
                m.observe(*player, (before - after).max(0.0));
            }
            WitnessCase::LuceOdds { kappa } => {
                let kappa = cohesion(kappa)?;
                for i in 0..kappa.n() {
                    m.observe(i, luce_deviation(&distribution(f, &kappa, i)?, &kappa));
                }
            }
            WitnessCase::Separability { kappa } => {
                let kappa = cohesion(kappa)?;
                for i in 0..kappa.n() {
                    m.observe(
                        i,
                        separability_deviation(&distribution(f, &kappa, i)?, &kappa),
                    );
                }
            }
            WitnessCase::Uniform { n } => {
                let kappa = CohesionStructure::constant(sampling::players(*n), 1.0)?;
                let uniform = 0.5f64.powi(*n as i32 - 1);
                for i in 0..*n {
                    let dist = distribution(f, &kappa, i)?;
                    for (_, p) in dist.iter() {
                        m.observe(i, (p - uniform).abs());
                    }
                }
            }
            WitnessCase::Calibration { v } => {
                let v = game(v)?;
                let one = CohesionStructure::constant(v.players().clone(), 1.0)?;
                let got = f.evaluate(&v, &one)?;
                let phi = classical_shapley_oracle(&v)?;
                for (i, (x, y)) in got.iter().zip(&phi).enumerate() {
                    m.observe(i, (x - y).abs());
                }
            }
            WitnessCase::Dictator { v, kappa, dictator } => {
                let v = game(v)?;
                let raw = f.evaluate(&v, &cohesion(kappa)?)?;
                let normalized = normalize_values(&raw, v.grand_worth());
                for values in [&raw, &normalized] {
                    for (i, x) in values.iter().enumerate() {
                        let target = if i == *dictator { 1.0 } else { 0.0 };
                        m.observe(i, (x - target).abs());
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Relative violation of power-law odds for one player's distribution.
///
/// The exponent is estimated from the pair of positive-cohesion coalitions
/// with the widest cohesion ratio, then every other coalition is checked
/// against it. A coalition with zero cohesion but positive probability
/// (support clause) counts as deviation 1.
pub fn luce_deviation(dist: &CoalitionDistribution, kappa: &CohesionStructure) -> f64 {
    let player = dist.player();
    let entries: Vec<(f64, f64)> = dist
        .iter()
        .map(|(s, p)| (kappa.value(s.with(player)), p))
        .collect();
    let positive: Vec<(f64, f64)> = entries.iter().copied().filter(|&(k, _)| k > 0.0).collect();
    support_violation(&entries).max(power_fit_deviation(&[positive]))
}

/// Relative violation of `p(S) ∝ ω_{|S|}·κ(S ∪ {i})^b` for some size weights
/// `ω` and one exponent `b`: odds must follow a common power law within every
/// size class.
pub fn separability_deviation(dist: &CoalitionDistribution, kappa: &CohesionStructure) -> f64 {
    let player = dist.player();
    let n = kappa.n();
    let mut classes: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
    let mut entries = Vec::with_capacity(dist.len());
    for (s, p) in dist.iter() {
        let k = kappa.value(s.with(player));
        entries.push((k, p));
        if k > 0.0 {
            classes[s.len()].push((k, p));
        }
    }
    support_violation(&entries).max(power_fit_deviation(&classes))
}

fn support_violation(entries: &[(f64, f64)]) -> f64 {
    if entries.iter().any(|&(k, p)| k == 0.0 && p != 0.0) {
        1.0
    } else {
        0.0
    }
}

/// Fits one exponent `b` across groups so that within each group
/// `p ∝ κ^b`, and returns the worst relative misfit.
fn power_fit_deviation(groups: &[Vec<(f64, f64)>]) -> f64 {
    // Each group's reference is its largest-cohesion member.
    let refs: Vec<Option<(f64, f64)>> = groups
        .iter()
        .map(|g| g.iter().copied().max_by(|a, b| a.0.total_cmp(&b.0)))
        .collect();

    let mut widest: Option<(f64, f64)> = None; // (|log κ ratio|, estimate)
    let mut deviation: f64 = 0.0;
    for (group, reference) in groups.iter().zip(&refs) {
        let Some((k_ref, p_ref)) = *reference else {
            continue;
        };
        if p_ref == 0.0 {
            // A size class may carry zero weight, but then uniformly so.
            if group.iter().any(|&(_, p)| p != 0.0) {
                deviation = deviation.max(1.0);
            }
            continue;
        }
        for &(k, p) in group {
            let log_ratio = (k / k_ref).ln();
            if p > 0.0 && log_ratio.abs() > widest.map_or(1e-12, |w| w.0) {
                widest = Some((log_ratio.abs(), (p / p_ref).ln() / log_ratio));
            }
        }
    }
    let b = widest.map_or(0.0, |w| w.1);
    for (group, reference) in groups.iter().zip(&refs) {
        let Some((k_ref, p_ref)) = *reference else {
            continue;
        };
        if p_ref == 0.0 {
            continue;
        }
        for &(k, p) in group {
            let predicted = p_ref * (k / k_ref).powf(b);
            deviation = deviation.max((p - predicted).abs() / predicted);
        }
    }
    deviation
}

fn run<G>(
    axiom: AxiomId,
    f: &dyn ValueFunctional,
    cfg: &TrialConfig,
    generate: G,
) -> Result<AxiomReport>
where
    G: Fn(&mut rand_chacha::ChaCha8Rng, usize) -> WitnessCase + Sync,
{
    cfg.validate()?;
    let tolerance = axiom.tolerance();
    let outcomes: Vec<(Measurement, Option<Witness>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let n = cfg.players_for(trial);
            let case = generate(&mut rng, n);
            let m = case.measure(f)?;
            // NaN deviations count as violations.
            let witness = if m.deviation <= tolerance {
                None
            } else {
                Some(Witness {
                    trial,
                    n,
                    deviation: m.deviation,
                    player: m.player,
                    case,
                })
            };
            Ok((m, witness))
        })
        .collect::<Result<_>>()?;

    let mut max_deviation: f64 = 0.0;
    let mut first = None;
    for (m, witness) in outcomes {
        if m.deviation.is_nan() || m.deviation > max_deviation {
            max_deviation = m.deviation;
        }
        if first.is_none() {
            first = witness;
        }
    }
    Ok(AxiomReport {
        axiom,
        functional: f.name(),
        verdict: if first.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        trials: cfg.trials,
        seed: cfg.seed,
        tolerance,
        max_deviation,
        witness: first,
    })
}

/// `F(a·v + c·w, κ) = a·F(v, κ) + c·F(w, κ)` on random TU games.
pub fn check_linearity(f: &dyn ValueFunctional, cfg: &TrialConfig) -> Result<AxiomReport> {
    run(AxiomId::Linearity, f, cfg, |rng, n| {
        WitnessCase::Linearity {
            v: sampling::tu_game(rng, n).table().to_vec(),
            w: sampling::tu_game(rng, n).table().to_vec(),
            kappa: sampling::admissible_kappa(rng, n).table().to_vec(),
            a: rng.random_range(-2.0..=2.0),
            c: rng.random_range(-2.0..=2.0),
        }
    })
}

/// A player whose membership never changes worth gets exactly zero.
pub fn check_dummy(f: &dyn ValueFunctional, cfg: &TrialConfig) -> Result<AxiomReport> {
    run(AxiomId::Dummy, f, cfg, |rng, n| {
        let player = rng.random_range(0..n);
        WitnessCase::Dummy {
            v: sampling::game_with_dummy(rng, n, player).table().to_vec(),
            kappa: sampling::admissible_kappa(rng, n).table().to_vec(),
            player,
        }
    })
}

/// `F_{π(i)}(πv, πκ) = F_i(v, κ)` for random relabellings.
pub fn check_symmetry(f: &dyn ValueFunctional, cfg: &TrialConfig) -> Result<AxiomReport> {
    run(AxiomId::Symmetry, f, cfg, |rng, n| WitnessCase::Symmetry {
        v: sampling::tu_game(rng, n).table().to_vec(),
        kappa: sampling::admissible_kappa(rng, n).table().to_vec(),
        permutation: sampling::permutation(rng, n),
    })
}

/// `F(v, aκ) = F(v, κ)` for log-uniform `a ∈ [1e−3, 1e3]`.
pub fn check_scale_invariance(f: &dyn ValueFunctional, cfg: &TrialConfig) -> Result<AxiomReport> {
    run(AxiomId::ScaleInvariance, f, cfg, |rng, n| {
        WitnessCase::Scale {
            v: sampling::tu_game(rng, n).table().to_vec(),
            kappa: sampling::admissible_kappa(rng, n).table().to_vec(),
            a: sampling::scale_factor(rng),
        }
    })
}

/// On weighted majority games, raising cohesion only on coalitions where the
/// player swings (strictly on at least one) never lowers the player's value.
pub fn check_cohesion_monotonicity(
    f: &dyn ValueFunctional,
    cfg: &TrialConfig,
) -> Result<AxiomReport> {
    run(AxiomId::CohesionMonotonicity, f, cfg, |rng, n| {
        let game = sampling::weighted_majority(rng, n).to_simple_game();
        let candidates: Vec<usize> = (0..n).filter(|&i| !game.is_dummy(i)).collect();
        let player = candidates[rng.random_range(0..candidates.len())];
        let kappa = sampling::admissible_kappa(rng, n);
        let mut raised = kappa.table().to_vec();
        let swings: Vec<Coalition> = game.swings(player).collect();
        let forced = rng.random_range(0..swings.len());
        for (j, s) in swings.iter().enumerate() {
            if j == forced || rng.random_bool(0.5) {
                raised[s.with(player).index()] += rng.random_range(0.01..=1.0);
            }
        }
        WitnessCase::CohesionMonotonicity {
            v: game.table().to_vec(),
            kappa: kappa.table().to_vec(),
            raised,
            player,
        }
    })
}

/// Power-law odds `p(S)/p(T) = (κ(S∪i)/κ(T∪i))^b` and the zero-support clause.
pub fn check_luce_odds(f: &dyn ValueFunctional, cfg: &TrialConfig) -> Result<AxiomReport> {
    run(AxiomId::LuceOdds, f, cfg, |rng, n| WitnessCase::LuceOdds {
        kappa: sampling::admissible_kappa(rng, n).table().to_vec(),
    })
}

/// `p(S) ∝ ω_{|S|}·κ(S ∪ i)^b`.
pub fn check_size_cohesion_separability(
    f: &dyn ValueFunctional,
    cfg: &TrialConfig,
) -> Result<AxiomReport> {
    run(AxiomId::SizeCohesionSeparability, f, cfg, |rng, n| {
        WitnessCase::Separability {
            kappa: sampling::admissible_kappa(rng, n).table().to_vec(),
        }
    })
}

/// At constant cohesion every coalition has probability `2^−(n−1)`.
pub fn check_uniform_benchmark(f: &dyn ValueFunctional, cfg: &TrialConfig) -> Result<AxiomReport> {
    run(AxiomId::UniformBenchmark, f, cfg, |_, n| {
        WitnessCase::Uniform { n }
    })
}

/// At constant cohesion the value equals the ordering-average Shapley value.
pub fn check_shapley_calibration(
    f: &dyn ValueFunctional,
    cfg: &TrialConfig,
) -> Result<AxiomReport> {
    run(AxiomId::ShapleyCalibration, f, cfg, |rng, n| {
        WitnessCase::Calibration {
            v: sampling::tu_game(rng, n).table().to_vec(),
        }
    })
}

/// Uniformity for the Banzhaf branch, calibration for the Shapley branch.
pub fn check_benchmarks(
    f: &dyn ValueFunctional,
    branch: crate::values::Branch,
    cfg: &TrialConfig,
) -> Result<AxiomReport> {
    match branch {
        crate::values::Branch::Banzhaf => check_uniform_benchmark(f, cfg),
        crate::values::Branch::Shapley => check_shapley_calibration(f, cfg),
    }
}

/// A dictator gets 1 and everybody else 0 under any admissible cohesion,
/// before and after normalization. Half the trials also cordon off a random
/// set of the dictator's partners.
pub fn check_dictatorship_invariance(
    f: &dyn ValueFunctional,
    cfg: &TrialConfig,
) -> Result<AxiomReport> {
    run(AxiomId::DictatorshipInvariance, f, cfg, |rng, n| {
        let dictator = rng.random_range(0..n);
        let v = Game::dictator(sampling::players(n), dictator).expect("valid dictator");
        let mut kappa = sampling::admissible_kappa(rng, n);
        if rng.random_bool(0.5) {
            let partners = sampling::subset_of(rng, Coalition::grand(n).without(dictator));
            kappa = kappa.apply_cordon(partners);
        }
        WitnessCase::Dictator {
            v: v.table().to_vec(),
            kappa: kappa.table().to_vec(),
            dictator,
        }
    })
}

pub fn check(axiom: AxiomId, f: &dyn ValueFunctional, cfg: &TrialConfig) -> Result<AxiomReport> {
    match axiom {
        AxiomId::Linearity => check_linearity(f, cfg),
        AxiomId::Dummy => check_dummy(f, cfg),
        AxiomId::Symmetry => check_symmetry(f, cfg),
        AxiomId::ScaleInvariance => check_scale_invariance(f, cfg),
        AxiomId::CohesionMonotonicity => check_cohesion_monotonicity(f, cfg),
        AxiomId::LuceOdds => check_luce_odds(f, cfg),
        AxiomId::SizeCohesionSeparability => check_size_cohesion_separability(f, cfg),
        AxiomId::UniformBenchmark => check_uniform_benchmark(f, cfg),
        AxiomId::ShapleyCalibration => check_shapley_calibration(f, cfg),
        AxiomId::DictatorshipInvariance => check_dictatorship_invariance(f, cfg),
    }
}
