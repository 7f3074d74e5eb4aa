//! Value functionals under test: the two cohesion-weighted families, their
//! normalized indices, and the countermodels that each break one axiom.

use crate::coalition::Game;
use crate::cohesion::CohesionStructure;
use crate::error::{Error, Result};
use crate::values::{
    banzhaf_probabilities, check_exponent, cohesion_value, normalize_values, shapley_probabilities,
    Branch, CoalitionDistribution, SizeWeights,
};

use super::{AxiomId, Expectation, Verdict};

/// A map `(v, κ) ↦ F(v, κ) ∈ ℝ^N`, deterministic for fixed inputs.
pub trait ValueFunctional: Send + Sync {
    fn name(&self) -> String;

    fn evaluate(&self, v: &Game, kappa: &CohesionStructure) -> Result<Vec<f64>>;

    /// The coalition probabilities behind `F_i`, for functionals that have them.
    fn distribution(
        &self,
        _kappa: &CohesionStructure,
        _player: usize,
    ) -> Option<Result<CoalitionDistribution>> {
        None
    }

    /// Verdicts this functional is expected to receive.
    fn expected_profile(&self) -> Vec<Expectation>;
}

fn expect(pass: &[AxiomId], fail: &[AxiomId]) -> Vec<Expectation> {
    pass.iter()
        .map(|&axiom| Expectation {
            axiom,
            verdict: Verdict::Pass,
        })
        .chain(fail.iter().map(|&axiom| Expectation {
            axiom,
            verdict: Verdict::Fail,
        }))
        .collect()
}

fn evaluate_with<F>(v: &Game, kappa: &CohesionStructure, mut dist: F) -> Result<Vec<f64>>
where
    F: FnMut(usize) -> Result<CoalitionDistribution>,
{
    kappa.ensure_admissible()?;
    (0..v.n())
        .map(|i| dist(i).map(|d| d.expected_marginal(v)))
        .collect()
}

/// The unnormalized cohesion-weighted value of one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CohesionValue {
    pub branch: Branch,
    pub b: f64,
}

impl ValueFunctional for CohesionValue {
    fn name(&self) -> String {
        format!("{}-value(b={})", self.branch, self.b)
    }

    fn evaluate(&self, v: &Game, kappa: &CohesionStructure) -> Result<Vec<f64>> {
        Ok(cohesion_value(v, kappa, self.branch, self.b, None)?.values)
    }

    fn distribution(
        &self,
        kappa: &CohesionStructure,
        player: usize,
    ) -> Option<Result<CoalitionDistribution>> {
        Some(crate::values::probabilities(
            kappa,
            player,
            self.branch,
            self.b,
        ))
    }

    fn expected_profile(&self) -> Vec<Expectation> {
        use AxiomId::*;
        let common = [
            Linearity,
            Dummy,
            Symmetry,
            ScaleInvariance,
            CohesionMonotonicity,
            SizeCohesionSeparability,
            DictatorshipInvariance,
        ];
        match self.branch {
            Branch::Banzhaf => {
                let mut pass = common.to_vec();
                pass.extend([LuceOdds, UniformBenchmark]);
                expect(&pass, &[])
            }
            Branch::Shapley => {
                let mut pass = common.to_vec();
                pass.push(ShapleyCalibration);
                // Size weights distort odds across size classes.
                expect(&pass, &[LuceOdds])
            }
        }
    }
}

/// The normalized index built on [`CohesionValue`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedIndex {
    pub branch: Branch,
    pub b: f64,
}

impl ValueFunctional for NormalizedIndex {
    fn name(&self) -> String {
        format!("{}-index(b={})", self.branch, self.b)
    }

    fn evaluate(&self, v: &Game, kappa: &CohesionStructure) -> Result<Vec<f64>> {
        let raw = cohesion_value(v, kappa, self.branch, self.b, None)?;
        Ok(normalize_values(&raw.values, v.grand_worth()))
    }

    fn expected_profile(&self) -> Vec<Expectation> {
        use AxiomId::*;
        expect(
            &[Dummy, Symmetry, ScaleInvariance, DictatorshipInvariance],
            &[Linearity],
        )
    }
}

/// `F ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroFunctional;

impl ValueFunctional for ZeroFunctional {
    fn name(&self) -> String {
        "zero".into()
    }

    fn evaluate(&self, v: &Game, _kappa: &CohesionStructure) -> Result<Vec<f64>> {
        Ok(vec![0.0; v.n()])
    }

    fn expected_profile(&self) -> Vec<Expectation> {
        use AxiomId::*;
        expect(&[Linearity, Dummy, Symmetry, ScaleInvariance], &[])
    }
}

/// `h(κ) = Σ κ(T)² / (Σ κ(T))² − 1/(2^n − 1)` over non-empty `T`.
///
/// Vanishes on constant structures and is invariant under relabelling and
/// positive scaling.
pub fn concentration(kappa: &CohesionStructure) -> f64 {
    let nonempty = &kappa.table()[1..];
    let sum: f64 = nonempty.iter().sum();
    let sum_sq: f64 = nonempty.iter().map(|k| k * k).sum();
    sum_sq / (sum * sum) - 1.0 / nonempty.len() as f64
}

/// Adds `c·h(κ)·v(N)` to every player's Shapley-branch value. Breaks the
/// dummy axiom whenever `h(κ) ≠ 0` and `v(N) ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DummyPerturbation {
    pub base: CohesionValue,
    pub c: f64,
}

impl ValueFunctional for DummyPerturbation {
    fn name(&self) -> String {
        format!("dummy-perturbation(c={}, {})", self.c, self.base.name())
    }

    fn evaluate(&self, v: &Game, kappa: &CohesionStructure) -> Result<Vec<f64>> {
        let shift = self.c * concentration(kappa) * v.grand_worth();
        Ok(self
            .base
            .evaluate(v, kappa)?
            .into_iter()
            .map(|x| x + shift)
            .collect())
    }

    fn distribution(
        &self,
        kappa: &CohesionStructure,
        player: usize,
    ) -> Option<Result<CoalitionDistribution>> {
        self.base.distribution(kappa, player)
    }

    fn expected_profile(&self) -> Vec<Expectation> {
        use AxiomId::*;
        let benchmark = match self.base.branch {
            Branch::Banzhaf => UniformBenchmark,
            Branch::Shapley => ShapleyCalibration,
        };
        expect(&[Linearity, Symmetry, ScaleInvariance, benchmark], &[Dummy])
    }
}

/// Banzhaf-type value with a separate exponent per player.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerExponents {
    exponents: Vec<f64>,
}

impl PlayerExponents {
    pub fn new(exponents: Vec<f64>) -> Result<Self> {
        for &b in &exponents {
            check_exponent(b)?;
        }
        Ok(Self { exponents })
    }

    /// `b_i = i + 1` (one-based player index) for up to `n` players.
    pub fn increasing(n: usize) -> Self {
        Self {
            exponents: (1..=n).map(|i| i as f64).collect(),
        }
    }

    fn exponent(&self, player: usize) -> Result<f64> {
        self.exponents
            .get(player)
            .copied()
            .ok_or(Error::PlayerOutOfRange {
                index: player,
                n: self.exponents.len(),
            })
    }
}

impl ValueFunctional for PlayerExponents {
    fn name(&self) -> String {
        "player-exponents".into()
    }

    fn evaluate(&self, v: &Game, kappa: &CohesionStructure) -> Result<Vec<f64>> {
        evaluate_with(v, kappa, |i| {
            banzhaf_probabilities(kappa, i, self.exponent(i)?)
        })
    }

    fn distribution(
        &self,
        kappa: &CohesionStructure,
        player: usize,
    ) -> Option<Result<CoalitionDistribution>> {
        Some(
            self.exponent(player)
                .and_then(|b| banzhaf_probabilities(kappa, player, b)),
        )
    }

    fn expected_profile(&self) -> Vec<Expectation> {
        use AxiomId::*;
        expect(&[Linearity, Dummy, ScaleInvariance, LuceOdds], &[Symmetry])
    }
}

/// Banzhaf-type value with `p_i(S) ∝ κ(S ∪ {i}) + κ(S ∪ {i})²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NonPowerTransform;

impl NonPowerTransform {
    pub fn transform(x: f64) -> f64 {
        x + x * x
    }

    fn dist(kappa: &CohesionStructure, player: usize) -> Result<CoalitionDistribution> {
        CoalitionDistribution::from_weights(kappa, player, |_, k| Self::transform(k))
    }
}

impl ValueFunctional for NonPowerTransform {
    fn name(&self) -> String {
        "non-power-transform(x+x^2)".into()
    }

    fn evaluate(&self, v: &Game, kappa: &CohesionStructure) -> Result<Vec<f64>> {
        evaluate_with(v, kappa, |i| Self::dist(kappa, i))
    }

    fn distribution(
        &self,
        kappa: &CohesionStructure,
        player: usize,
    ) -> Option<Result<CoalitionDistribution>> {
        Some(Self::dist(kappa, player))
    }

    fn expected_profile(&self) -> Vec<Expectation> {
        use AxiomId::*;
        expect(
            &[
                Linearity,
                Dummy,
                Symmetry,
                CohesionMonotonicity,
                UniformBenchmark,
            ],
            &[LuceOdds, ScaleInvariance],
        )
    }
}

/// Shapley-type construction with flat size weights `2^−(n−1)`; at `κ = 1`
/// it yields the Banzhaf value instead of the Shapley value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSizeWeights {
    pub b: f64,
}

impl ConstantSizeWeights {
    fn dist(&self, kappa: &CohesionStructure, player: usize) -> Result<CoalitionDistribution> {
        shapley_probabilities(kappa, player, self.b, &SizeWeights::uniform(kappa.n()))
    }
}

impl ValueFunctional for ConstantSizeWeights {
    fn name(&self) -> String {
        format!("constant-size-weights(b={})", self.b)
    }

    fn evaluate(&self, v: &Game, kappa: &CohesionStructure) -> Result<Vec<f64>> {
        evaluate_with(v, kappa, |i| self.dist(kappa, i))
    }

    fn distribution(
        &self,
        kappa: &CohesionStructure,
        player: usize,
    ) -> Option<Result<CoalitionDistribution>> {
        Some(self.dist(kappa, player))
    }

    fn expected_profile(&self) -> Vec<Expectation> {
        use AxiomId::*;
        expect(
            &[
                Linearity,
                Dummy,
                Symmetry,
                ScaleInvariance,
                CohesionMonotonicity,
                SizeCohesionSeparability,
            ],
            &[ShapleyCalibration],
        )
    }
}

pub fn countermodel_dummy_perturbation(c: f64) -> DummyPerturbation {
    DummyPerturbation {
        base: CohesionValue {
            branch: Branch::Shapley,
            b: 1.0,
        },
        c,
    }
}

pub fn countermodel_player_exponents(exponents: Vec<f64>) -> Result<PlayerExponents> {
    PlayerExponents::new(exponents)
}

pub fn countermodel_nonpower_transform() -> NonPowerTransform {
    NonPowerTransform
}

pub fn countermodel_constant_sizeweights(b: f64) -> ConstantSizeWeights {
    ConstantSizeWeights { b }
}

/// The four countermodels with their default parameters.
pub fn countermodels() -> Vec<Box<dyn ValueFunctional>> {
    vec![
        Box::new(countermodel_dummy_perturbation(1.0)),
        Box::new(PlayerExponents::increasing(crate::coalition::MAX_PLAYERS)),
        Box::new(countermodel_nonpower_transform()),
        Box::new(countermodel_constant_sizeweights(1.0)),
    ]
}

/// Cohesion values of the requested branches at each exponent.
pub fn positive_functionals(
    branches: &[Branch],
    exponents: &[f64],
) -> Vec<Box<dyn ValueFunctional>> {
    branches
        .iter()
        .flat_map(|&branch| {
            exponents
                .iter()
                .map(move |&b| Box::new(CohesionValue { branch, b }) as Box<dyn ValueFunctional>)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::PlayerSet;

    #[test]
    fn concentration_vanishes_on_constants() {
        for n in 2..=6 {
            let players = PlayerSet::numbered(n).unwrap();
            for c in [1.0, 0.3, 7.0] {
                let k = CohesionStructure::constant(players.clone(), c).unwrap();
                assert!(concentration(&k).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn concentration_scale_invariant() {
        let players = PlayerSet::numbered(3).unwrap();
        let k = CohesionStructure::from_fn(players, |s| 1.0 / s.len() as f64).unwrap();
        let h = concentration(&k);
        assert!(h > 0.0);
        for a in [1e-3, 0.5, 2.0, 1e3] {
            let scaled = concentration(&k.scale(a).unwrap());
            assert!((scaled - h).abs() < 1e-15 * h.max(1.0) * 10.0);
        }
    }

    #[test]
    fn dummy_perturbation_agrees_at_constant_cohesion() {
        let players = PlayerSet::numbered(3).unwrap();
        let v = Game::from_fn(players.clone(), |s| s.len() as f64 * 0.25).unwrap();
        let one = CohesionStructure::constant(players.clone(), 1.0).unwrap();
        let f = countermodel_dummy_perturbation(1.0);
        let perturbed = f.evaluate(&v, &one).unwrap();
        let base = f.base.evaluate(&v, &one).unwrap();
        for (x, y) in perturbed.iter().zip(&base) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn dummy_perturbation_moves_dummy() {
        // Player 2 is a dummy; v(N) = 1.
        let players = PlayerSet::numbered(3).unwrap();
        let v = Game::from_fn(players.clone(), |s| {
            f64::from(u8::from(s.contains(0) && s.contains(1)))
        })
        .unwrap();
        assert!(v.is_dummy(2));
        let kappa = CohesionStructure::from_fn(players, |s| 1.0 / s.len() as f64).unwrap();
        let c = 0.5;
        let out = countermodel_dummy_perturbation(c)
            .evaluate(&v, &kappa)
            .unwrap();
        let expected = c * concentration(&kappa);
        assert!(expected > 0.0);
        assert!((out[2] - expected).abs() < 1e-15);
    }

    #[test]
    fn player_exponents_identity_is_base() {
        let players = PlayerSet::numbered(3).unwrap();
        let kappa = CohesionStructure::from_fn(players, |s| 0.2 * s.bits() as f64).unwrap();
        let f = PlayerExponents::new(vec![1.0, 1.0, 1.0]).unwrap();
        for i in 0..3 {
            let d = f.distribution(&kappa, i).unwrap().unwrap();
            assert_eq!(d, banzhaf_probabilities(&kappa, i, 1.0).unwrap());
        }
        let short = PlayerExponents::increasing(2);
        assert!(short.distribution(&kappa, 2).unwrap().is_err());
    }

    #[test]
    fn nonpower_keeps_support() {
        assert_eq!(NonPowerTransform::transform(0.0), 0.0);
        assert_eq!(NonPowerTransform::transform(1.0), 2.0);
    }

    #[test]
    fn constant_sizeweights_is_banzhaf_at_one() {
        let players = PlayerSet::numbered(4).unwrap();
        let v = Game::from_fn(players.clone(), |s| (s.bits() % 5) as f64).unwrap();
        let one = CohesionStructure::constant(players, 1.0).unwrap();
        let got = countermodel_constant_sizeweights(1.0)
            .evaluate(&v, &one)
            .unwrap();
        let banzhaf = crate::values::classical_banzhaf(&v);
        for (x, y) in got.iter().zip(banzhaf) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn inadmissible_rejected_by_every_functional() {
        let players = PlayerSet::numbered(2).unwrap();
        let v = Game::dictator(players.clone(), 0).unwrap();
        let kappa = CohesionStructure::new(players, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        assert!(NonPowerTransform.evaluate(&v, &kappa).is_err());
        assert!(countermodel_constant_sizeweights(1.0)
            .evaluate(&v, &kappa)
            .is_err());
        assert!(PlayerExponents::increasing(2).evaluate(&v, &kappa).is_err());
    }
}
