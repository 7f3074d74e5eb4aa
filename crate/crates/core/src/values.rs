//! Coalition probability systems and the cohesion-weighted Banzhaf and
//! Shapley families built on them.
//!
//! For a player `i`, both branches put a probability on each `S ⊆ N \ {i}`
//! proportional to a size factor times `κ(S ∪ {i})^b`, and the value of `i`
//! is its expected marginal contribution under that distribution. The
//! Banzhaf branch uses a flat size factor; the Shapley branch uses the
//! classical weights `k!(n−k−1)!/n!`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::{coalitions_without, Coalition, Game};
use crate::cohesion::CohesionStructure;
use crate::error::{Error, Result};

/// Largest accepted cohesion exponent.
pub const MAX_EXPONENT: f64 = 64.0;

/// Below this absolute sum, normalization falls back to the all-zero profile.
pub const ZERO_SUM_TOLERANCE: f64 = 1e-12;

/// Tolerance on `Σ C(n−1,k)·α_k = 1`.
pub const SIZE_WEIGHT_TOLERANCE: f64 = 1e-12;

/// Largest player count the ordering-enumeration oracle accepts.
pub const MAX_ORACLE_PLAYERS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Banzhaf,
    Shapley,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::Banzhaf, Branch::Shapley];

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Banzhaf => "banzhaf",
            Branch::Shapley => "shapley",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "banzhaf" => Ok(Branch::Banzhaf),
            "shapley" => Ok(Branch::Shapley),
            other => Err(format!(
                "unknown branch `{other}` (expected banzhaf or shapley)"
            )),
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Per-size coalition weights `α_0, …, α_{n−1}` with `Σ C(n−1,k)·α_k = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeWeights {
    alpha: Vec<f64>,
}

impl SizeWeights {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        let n = alpha.len();
        if n < 2 {
            return Err(Error::InvalidSizeWeights(format!(
                "need at least 2 weights, got {n}"
            )));
        }
        if let Some(k) = alpha.iter().position(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidSizeWeights(format!(
                "weight {k} is negative or not finite"
            )));
        }
        let total: f64 = alpha
            .iter()
            .enumerate()
            .map(|(k, a)| binomial(n - 1, k) * a)
            .sum();
        if (total - 1.0).abs() > SIZE_WEIGHT_TOLERANCE {
            return Err(Error::InvalidSizeWeights(format!(
                "Σ C(n−1,k)·α_k = {total}, expected 1"
            )));
        }
        Ok(Self { alpha })
    }

    /// `α_k = k!(n−k−1)!/n! = 1 / (n·C(n−1,k))`.
    pub fn shapley(n: usize) -> Self {
        Self {
            alpha: (0..n)
                .map(|k| 1.0 / (n as f64 * binomial(n - 1, k)))
                .collect(),
        }
    }

    /// Flat weights `2^−(n−1)`, which turn the Shapley-type construction into
    /// the Banzhaf one.
    pub fn uniform(n: usize) -> Self {
        Self {
            alpha: vec![0.5f64.powi(n as i32 - 1); n],
        }
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn get(&self, size: usize) -> f64 {
        self.alpha[size]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.alpha
    }
}

pub fn shapley_size_weights(n: usize) -> SizeWeights {
    SizeWeights::shapley(n)
}

pub fn check_exponent(b: f64) -> Result<()> {
    if b.is_finite() && (0.0..=MAX_EXPONENT).contains(&b) {
        Ok(())
    } else {
        Err(Error::InvalidExponent { value: b })
    }
}

/// `κ^b` for `κ > 0`, and 0 for `κ = 0` regardless of `b` (including `b = 0`).
#[inline]
pub fn cohesion_weight(kappa_value: f64, b: f64) -> f64 {
    if kappa_value == 0.0 {
        0.0
    } else {
        kappa_value.powf(b)
    }
}

/// Probabilities over `S ⊆ N \ {player}`, in increasing mask order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoalitionDistribution {
    player: usize,
    probs: Vec<(Coalition, f64)>,
    underflow: bool,
}

impl CoalitionDistribution {
    /// Normalizes `weight(S, κ(S ∪ {i}))` over `S ⊆ N \ {i}`.
    ///
    /// Fails with [`Error::DegenerateDenominator`] when all weights vanish.
    pub fn from_weights(
        kappa: &CohesionStructure,
        player: usize,
        mut weight: impl FnMut(Coalition, f64) -> f64,
    ) -> Result<Self> {
        kappa.players().check_player(player)?;
        let n = kappa.n();
        let mut underflow = false;
        let mut probs: Vec<(Coalition, f64)> = coalitions_without(n, player)
            .map(|s| {
                let k = kappa.value(s.with(player));
                let w = weight(s, k);
                underflow |= k > 0.0 && w == 0.0;
                (s, w)
            })
            .collect();
        let total: f64 = probs.iter().map(|&(_, w)| w).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::DegenerateDenominator {
                label: kappa.players().label(player).to_owned(),
            });
        }
        for (_, p) in &mut probs {
            *p /= total;
        }
        Ok(Self {
            player,
            probs,
            underflow,
        })
    }

    pub fn player(&self) -> usize {
        self.player
    }

    /// Probability of `S`; zero for coalitions containing the player.
    pub fn prob(&self, coalition: Coalition) -> f64 {
        if coalition.contains(self.player) {
            return 0.0;
        }
        let bits = coalition.bits();
        let low = bits & ((1 << self.player) - 1);
        let high = (bits >> (self.player + 1)) << self.player;
        self.probs
            .get((low | high) as usize)
            .map_or(0.0, |&(_, p)| p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coalition, f64)> + '_ {
        self.probs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().map(|&(_, p)| p).sum()
    }

    /// Some coalition with positive cohesion received zero weight because
    /// `κ^b` underflowed.
    pub fn underflow(&self) -> bool {
        self.underflow
    }

    /// `Σ_S p(S)·Δ_i v(S)`.
    pub fn expected_marginal(&self, v: &Game) -> f64 {
        self.probs
            .iter()
            .map(|&(s, p)| p * v.delta(self.player, s))
            .sum()
    }
}

/// `p_i(S) ∝ κ(S ∪ {i})^b`.
pub fn banzhaf_probabilities(
    kappa: &CohesionStructure,
    player: usize,
    b: f64,
) -> Result<CoalitionDistribution> {
    check_exponent(b)?;
    CoalitionDistribution::from_weights(kappa, player, |_, k| cohesion_weight(k, b))
}

/// `p_i(S) ∝ α_{|S|}·κ(S ∪ {i})^b`.
pub fn shapley_probabilities(
    kappa: &CohesionStructure,
    player: usize,
    b: f64,
    alpha: &SizeWeights,
) -> Result<CoalitionDistribution> {
    check_exponent(b)?;
    if alpha.n() != kappa.n() {
        return Err(Error::InvalidSizeWeights(format!(
            "{} weights for {} players",
            alpha.n(),
            kappa.n()
        )));
    }
    CoalitionDistribution::from_weights(kappa, player, |s, k| {
        alpha.get(s.len()) * cohesion_weight(k, b)
    })
}

/// Per-player index values for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerProfile {
    pub branch: Branch,
    pub exponent: f64,
    pub normalized: bool,
    pub values: Vec<f64>,
    /// Set when some positive cohesion underflowed to zero weight.
    pub underflow: bool,
}

impl PowerProfile {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }
}

fn distribution_for(
    kappa: &CohesionStructure,
    player: usize,
    branch: Branch,
    b: f64,
    alpha: Option<&SizeWeights>,
) -> Result<CoalitionDistribution> {
    match branch {
        Branch::Banzhaf => banzhaf_probabilities(kappa, player, b),
        Branch::Shapley => match alpha {
            Some(alpha) => shapley_probabilities(kappa, player, b, alpha),
            None => shapley_probabilities(kappa, player, b, &SizeWeights::shapley(kappa.n())),
        },
    }
}

/// The coalition distribution of `player` in the given branch.
pub fn probabilities(
    kappa: &CohesionStructure,
    player: usize,
    branch: Branch,
    b: f64,
) -> Result<CoalitionDistribution> {
    distribution_for(kappa, player, branch, b, None)
}

/// Unnormalized cohesion value: each player's expected marginal contribution.
///
/// `alpha` overrides the Shapley size weights and is rejected for the
/// Banzhaf branch. `κ` must be admissible.
pub fn cohesion_value(
    v: &Game,
    kappa: &CohesionStructure,
    branch: Branch,
    b: f64,
    alpha: Option<&SizeWeights>,
) -> Result<PowerProfile> {
    check_exponent(b)?;
    if v.n() != kappa.n() {
        return Err(Error::TableSize {
            n: v.n(),
            got: kappa.table().len(),
        });
    }
    if branch == Branch::Banzhaf && alpha.is_some() {
        return Err(Error::InvalidSizeWeights(
            "size weights apply only to the shapley branch".into(),
        ));
    }
    kappa.ensure_admissible()?;
    let per_player: Vec<(f64, bool)> = (0..v.n())
        .into_par_iter()
        .map(|i| {
            let dist = distribution_for(kappa, i, branch, b, alpha)?;
            Ok((dist.expected_marginal(v), dist.underflow()))
        })
        .collect::<Result<_>>()?;
    Ok(PowerProfile {
        branch,
        exponent: b,
        normalized: false,
        underflow: per_player.iter().any(|&(_, u)| u),
        values: per_player.into_iter().map(|(x, _)| x).collect(),
    })
}

/// Rescales `values` to sum to `grand_worth`; all zeros when the sum vanishes.
pub fn normalize_values(values: &[f64], grand_worth: f64) -> Vec<f64> {
    let total: f64 = values.iter().sum();
    if total.abs() < ZERO_SUM_TOLERANCE {
        vec![0.0; values.len()]
    } else {
        values.iter().map(|x| x / total * grand_worth).collect()
    }
}

pub fn normalize_index(profile: &PowerProfile, grand_worth: f64) -> PowerProfile {
    PowerProfile {
        normalized: true,
        values: normalize_values(&profile.values, grand_worth),
        ..profile.clone()
    }
}

/// The normalized index: cohesion value rescaled to sum to `v(N)`.
pub fn power_index(
    v: &Game,
    kappa: &CohesionStructure,
    branch: Branch,
    b: f64,
) -> Result<PowerProfile> {
    let raw = cohesion_value(v, kappa, branch, b, None)?;
    Ok(normalize_index(&raw, v.grand_worth()))
}

/// Shapley value by averaging marginal contributions over all `n!` orderings.
///
/// Shares no code with the probability-system path above.
pub fn classical_shapley_oracle(v: &Game) -> Result<Vec<f64>> {
    let n = v.n();
    if n > MAX_ORACLE_PLAYERS {
        return Err(Error::OracleTooLarge {
            n,
            max: MAX_ORACLE_PLAYERS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut totals = vec![0.0; n];
    let mut orderings = 0u64;
    let mut visit = |order: &[usize]| {
        let mut coalition = Coalition::EMPTY;
        let mut before = 0.0;
        for &p in order {
            coalition = coalition.with(p);
            let after = v.worth(coalition);
            totals[p] += after - before;
            before = after;
        }
        orderings += 1;
    };
    // Heap's algorithm, iterative form.
    let mut counters = vec![0usize; n];
    visit(&order);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(counters[i], i);
            }
            visit(&order);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(totals.into_iter().map(|t| t / orderings as f64).collect())
}

/// Unnormalized Banzhaf value: swing average over all `2^(n−1)` coalitions.
pub fn classical_banzhaf(v: &Game) -> Vec<f64> {
    let n = v.n();
    let scale = 0.5f64.powi(n as i32 - 1);
    (0..n)
        .map(|i| {
            let mut total = 0.0;
            for bits in 0..1u32 << n {
                if bits & (1 << i) == 0 {
                    total += v.worth(Coalition::from_bits(bits | (1 << i)))
                        - v.worth(Coalition::from_bits(bits));
                }
            }
            total * scale
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::{build_weighted_majority, PlayerSet};
    use crate::cohesion::{range_cohesion, IdeologyProfile};

    const EPS: f64 = 1e-12;

    fn majority3() -> Game {
        build_weighted_majority(PlayerSet::numbered(3).unwrap(), vec![1.0, 1.0, 1.0], 2.0)
            .unwrap()
            .into_game()
    }

    fn wende_pre() -> (Game, CohesionStructure) {
        let players = PlayerSet::new(["CDU/CSU", "SPD", "FDP"]).unwrap();
        let game = build_weighted_majority(players.clone(), vec![226.0, 218.0, 53.0], 249.0)
            .unwrap()
            .into_game();
        let kappa = range_cohesion(&IdeologyProfile::new(players, vec![7.0, 3.0, 5.5]).unwrap());
        (game, kappa)
    }

    #[test]
    fn shapley_weights_small() {
        let w = SizeWeights::shapley(3);
        let expected = [1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0];
        for (a, e) in w.as_slice().iter().zip(expected) {
            assert!((a - e).abs() < EPS);
        }
        assert_eq!(SizeWeights::shapley(2).as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn shapley_weights_normalized() {
        for n in 2..=24 {
            let w = SizeWeights::shapley(n);
            assert!(SizeWeights::new(w.as_slice().to_vec()).is_ok(), "n = {n}");
            assert!(SizeWeights::new(SizeWeights::uniform(n).as_slice().to_vec()).is_ok());
        }
        assert!(SizeWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SizeWeights::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn weight_of_zero_cohesion_is_zero() {
        assert_eq!(cohesion_weight(0.0, 0.0), 0.0);
        assert_eq!(cohesion_weight(0.0, 2.0), 0.0);
        assert_eq!(cohesion_weight(0.4, 1.0), 0.4);
        assert_eq!(cohesion_weight(0.9, 0.0), 1.0);
    }

    #[test]
    fn exponent_bounds() {
        assert!(check_exponent(0.0).is_ok());
        assert!(check_exponent(MAX_EXPONENT).is_ok());
        assert!(check_exponent(-0.1).is_err());
        assert!(check_exponent(64.5).is_err());
        assert!(check_exponent(f64::NAN).is_err());
    }

    #[test]
    fn two_player_banzhaf_probabilities() {
        let players = PlayerSet::numbered(2).unwrap();
        let kappa = CohesionStructure::new(players, vec![0.0, 1.0, 1.0, 3.0]).unwrap();
        let dist = banzhaf_probabilities(&kappa, 0, 1.0).unwrap();
        assert!((dist.prob(Coalition::EMPTY) - 0.25).abs() < EPS);
        assert!((dist.prob(Coalition::singleton(1)) - 0.75).abs() < EPS);
        assert_eq!(dist.prob(Coalition::singleton(0)), 0.0);
    }

    #[test]
    fn constant_cohesion_is_uniform() {
        let kappa = CohesionStructure::constant(PlayerSet::numbered(5).unwrap(), 1.0).unwrap();
        for b in [0.0, 0.5, 1.0, 2.0] {
            let dist = banzhaf_probabilities(&kappa, 2, b).unwrap();
            assert_eq!(dist.len(), 16);
            assert!(dist.iter().all(|(_, p)| p == 1.0 / 16.0));
        }
        let alpha = SizeWeights::shapley(5);
        let dist = shapley_probabilities(&kappa, 1, 1.0, &alpha).unwrap();
        for (s, p) in dist.iter() {
            assert!((p - alpha.get(s.len())).abs() < EPS);
        }
    }

    #[test]
    fn wende_pre_cdu_distribution() {
        let (_, kappa) = wende_pre();
        let alpha = SizeWeights::shapley(3);
        // Unnormalized weights: 1/3, 0.2/6, 0.4/6, 0.2/3, summing to 0.5.
        let dist = shapley_probabilities(&kappa, 0, 1.0, &alpha).unwrap();
        let pivotal = dist.prob(Coalition::singleton(1)) + dist.prob(Coalition::singleton(2));
        assert!((pivotal - 0.1 / 0.5).abs() < EPS);
        assert!((dist.prob(Coalition::EMPTY) - (1.0 / 3.0) / 0.5).abs() < EPS);
    }

    #[test]
    fn wende_pre_values() {
        let (game, kappa) = wende_pre();
        let raw = cohesion_value(&game, &kappa, Branch::Shapley, 1.0, None).unwrap();
        // Pivotal mass over denominator, by hand: 0.1/0.5, (17/210)/(101/210), (12/105)/(54/105).
        let expected = [1.0 / 5.0, 17.0 / 101.0, 2.0 / 9.0];
        for (got, want) in raw.values.iter().zip(expected) {
            assert!((got - want).abs() < EPS, "{got} vs {want}");
        }
        let index = normalize_index(&raw, game.grand_worth());
        for (got, want) in index.values.iter().zip([0.339, 0.285, 0.376]) {
            assert!((got - want).abs() < 0.002, "{got} vs {want}");
        }
        assert!((index.sum() - 1.0).abs() < 1e-12);
        assert!(index.normalized);
    }

    #[test]
    fn dictator_gets_everything() {
        let players = PlayerSet::numbered(4).unwrap();
        let game = Game::dictator(players.clone(), 1).unwrap();
        let kappa = CohesionStructure::from_fn(players, |s| 1.0 / s.len() as f64).unwrap();
        for branch in Branch::ALL {
            let raw = cohesion_value(&game, &kappa, branch, 1.5, None).unwrap();
            let index = normalize_index(&raw, 1.0);
            for values in [&raw.values, &index.values] {
                for (got, want) in values.iter().zip([0.0, 1.0, 0.0, 0.0]) {
                    assert!((got - want).abs() < EPS);
                }
            }
        }
    }

    #[test]
    fn symmetric_majority_benchmarks() {
        let game = majority3();
        let kappa = CohesionStructure::constant(game.players().clone(), 1.0).unwrap();
        let shapley = cohesion_value(&game, &kappa, Branch::Shapley, 1.0, None).unwrap();
        for x in &shapley.values {
            assert!((x - 1.0 / 3.0).abs() < EPS);
        }
        assert_eq!(classical_banzhaf(&game), vec![0.5, 0.5, 0.5]);
        let banzhaf = cohesion_value(&game, &kappa, Branch::Banzhaf, 2.0, None).unwrap();
        assert_eq!(banzhaf.values, vec![0.5, 0.5, 0.5]);
        let oracle = classical_shapley_oracle(&game).unwrap();
        for x in oracle {
            assert!((x - 1.0 / 3.0).abs() < EPS);
        }
    }

    #[test]
    fn oracle_on_dictator_and_bundestag() {
        let players = PlayerSet::numbered(4).unwrap();
        let dictator = Game::dictator(players, 3).unwrap();
        assert_eq!(
            classical_shapley_oracle(&dictator).unwrap(),
            vec![0.0, 0.0, 0.0, 1.0]
        );

        let players = PlayerSet::new(["CDU/CSU", "AfD", "SPD", "Grüne", "Linke"]).unwrap();
        let bt =
            build_weighted_majority(players, vec![208.0, 152.0, 120.0, 85.0, 64.0], 316.0).unwrap();
        let phi = classical_shapley_oracle(&bt).unwrap();
        let expected = [0.4, 0.7 / 3.0, 0.7 / 3.0, 0.2 / 3.0, 0.2 / 3.0];
        for (got, want) in phi.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn oracle_rejects_large_games() {
        let game = Game::dictator(PlayerSet::numbered(11).unwrap(), 0).unwrap();
        assert_eq!(
            classical_shapley_oracle(&game),
            Err(Error::OracleTooLarge { n: 11, max: 10 })
        );
    }

    #[test]
    fn zero_sum_falls_back_to_zero() {
        let profile = PowerProfile {
            branch: Branch::Shapley,
            exponent: 1.0,
            normalized: false,
            values: vec![0.0, 1e-14, -1e-14],
            underflow: false,
        };
        let out = normalize_index(&profile, 1.0);
        assert!(out.is_all_zero());
        assert!(out.normalized);
    }

    #[test]
    fn inadmissible_rejected_with_label() {
        let players = PlayerSet::new(["X", "Y", "Z"]).unwrap();
        let game = majority3();
        let game = Game::new(players.clone(), game.table().to_vec()).unwrap();
        let kappa = CohesionStructure::from_fn(players, |s| {
            if s == Coalition::singleton(2) {
                0.0
            } else {
                1.0
            }
        })
        .unwrap();
        let err = cohesion_value(&game, &kappa, Branch::Shapley, 1.0, None).unwrap_err();
        assert_eq!(
            err,
            Error::NotAdmissible {
                label: "Z".into(),
                value: 0.0
            }
        );
    }

    #[test]
    fn degenerate_denominator() {
        let players = PlayerSet::new(["X", "Y"]).unwrap();
        let kappa = CohesionStructure::new(players, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            banzhaf_probabilities(&kappa, 1, 1.0),
            Err(Error::DegenerateDenominator { label: "Y".into() })
        );
    }

    #[test]
    fn underflow_is_flagged() {
        let players = PlayerSet::numbered(2).unwrap();
        let kappa = CohesionStructure::new(players, vec![0.0, 1.0, 1.0, 1e-10]).unwrap();
        let dist = banzhaf_probabilities(&kappa, 0, 64.0).unwrap();
        assert!(dist.underflow());
        assert!(!banzhaf_probabilities(&kappa, 0, 1.0).unwrap().underflow());
    }

    #[test]
    fn banzhaf_rejects_size_weights() {
        let game = majority3();
        let kappa = CohesionStructure::constant(game.players().clone(), 1.0).unwrap();
        let alpha = SizeWeights::shapley(3);
        assert!(cohesion_value(&game, &kappa, Branch::Banzhaf, 1.0, Some(&alpha)).is_err());
    }

    #[test]
    fn branch_parse() {
        assert_eq!("shapley".parse::<Branch>(), Ok(Branch::Shapley));
        assert!("owen".parse::<Branch>().is_err());
        assert_eq!(Branch::Banzhaf.to_string(), "banzhaf");
    }
}
