//! Cohesion structures: non-negative feasibility weights on coalitions.

use std::fmt;

use crate::coalition::{all_coalitions, check_table, Coalition, Permutation, PlayerSet};
use crate::error::{Error, Result};

/// `κ: 2^N → [0, ∞)` with `κ(∅) = 0`, stored densely.
#[derive(Clone, PartialEq)]
pub struct CohesionStructure {
    players: PlayerSet,
    kappa: Vec<f64>,
}

/// How [`explicit_cohesion`] fills coalitions that have no entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefaultRule {
    /// Unlisted singletons get 1, other unlisted coalitions 0.
    #[default]
    SingletonsOne,
    /// Every unlisted coalition gets 0.
    Zero,
}

impl CohesionStructure {
    pub fn new(players: PlayerSet, kappa: Vec<f64>) -> Result<Self> {
        check_table(players.len(), &kappa)?;
        if let Some((bits, &value)) = kappa.iter().enumerate().find(|(_, &k)| k < 0.0) {
            return Err(Error::InvalidCohesion {
                coalition: bits as u32,
                value,
            });
        }
        Ok(Self { players, kappa })
    }

    pub fn from_fn(players: PlayerSet, mut kappa: impl FnMut(Coalition) -> f64) -> Result<Self> {
        let table = all_coalitions(players.len())
            .map(|s| if s.is_empty() { 0.0 } else { kappa(s) })
            .collect();
        Self::new(players, table)
    }

    /// The cohesionless structure: `value` on every non-empty coalition.
    pub fn constant(players: PlayerSet, value: f64) -> Result<Self> {
        Self::from_fn(players, |_| value)
    }

    pub fn players(&self) -> &PlayerSet {
        &self.players
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn value(&self, coalition: Coalition) -> f64 {
        self.kappa[coalition.index()]
    }

    pub fn table(&self) -> &[f64] {
        &self.kappa
    }

    /// Every singleton has strictly positive cohesion.
    pub fn is_admissible(&self) -> bool {
        self.first_inadmissible().is_none()
    }

    pub fn first_inadmissible(&self) -> Option<usize> {
        (0..self.n()).find(|&i| self.kappa[Coalition::singleton(i).index()] <= 0.0)
    }

    /// Errors with the offending singleton's label unless admissible.
    pub fn ensure_admissible(&self) -> Result<()> {
        match self.first_inadmissible() {
            None => Ok(()),
            Some(i) => Err(Error::NotAdmissible {
                label: self.players.label(i).to_owned(),
                value: self.kappa[Coalition::singleton(i).index()],
            }),
        }
    }

    /// Zero cohesion on every coalition of two or more players that contains a
    /// pariah. Singletons are left alone, so admissibility is preserved.
    pub fn apply_cordon(&self, pariahs: Coalition) -> Self {
        let mut kappa = self.kappa.clone();
        for (bits, k) in kappa.iter_mut().enumerate() {
            let s = Coalition::from_bits(bits as u32);
            if s.len() >= 2 && s.intersects(pariahs) {
                *k = 0.0;
            }
        }
        Self {
            players: self.players.clone(),
            kappa,
        }
    }

    /// Pointwise scaling by `a > 0`.
    pub fn scale(&self, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidScale(a));
        }
        Ok(Self {
            players: self.players.clone(),
            kappa: self.kappa.iter().map(|k| a * k).collect(),
        })
    }

    /// `πκ` with `(πκ)(πS) = κ(S)`.
    pub fn permuted(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::InvalidPermutation(perm.len()));
        }
        Ok(Self {
            players: self.players.permuted(perm),
            kappa: perm.permute_table(&self.kappa),
        })
    }
}

impl fmt::Debug for CohesionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohesionStructure")
            .field("players", &self.players)
            .field("kappa", &self.kappa)
            .finish()
    }
}

/// Left-right positions of the players.
#[derive(Debug, Clone, PartialEq)]
pub struct IdeologyProfile {
    players: PlayerSet,
    positions: Vec<f64>,
}

impl IdeologyProfile {
    pub fn new(players: PlayerSet, positions: Vec<f64>) -> Result<Self> {
        if positions.len() != players.len() {
            return Err(Error::WeightCount {
                expected: players.len(),
                got: positions.len(),
            });
        }
        if let Some(i) = positions.iter().position(|x| !x.is_finite()) {
            return Err(Error::schema(
                format!("positions[{i}]"),
                format!("position of `{}` is not finite", players.label(i)),
            ));
        }
        Ok(Self { players, positions })
    }

    pub fn players(&self) -> &PlayerSet {
        &self.players
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Largest pairwise distance within the coalition.
    pub fn range(&self, coalition: Coalition) -> f64 {
        let (lo, hi) = coalition
            .members()
            .map(|i| self.positions[i])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        if lo > hi {
            0.0
        } else {
            hi - lo
        }
    }
}

/// Inverse ideological range: `κ(S) = 1 / (1 + max |λ_i − λ_j|)`, so
/// singletons get 1.
pub fn range_cohesion(profile: &IdeologyProfile) -> CohesionStructure {
    CohesionStructure::from_fn(profile.players.clone(), |s| 1.0 / (1.0 + profile.range(s)))
        .expect("range cohesion is finite and positive")
}

/// Cohesion from listed coalition values, with unlisted coalitions filled by `rule`.
pub fn explicit_cohesion(
    players: PlayerSet,
    entries: &[(Coalition, f64)],
    rule: DefaultRule,
) -> Result<CohesionStructure> {
    let n = players.len();
    let mut kappa = vec![0.0; 1 << n];
    if rule == DefaultRule::SingletonsOne {
        for i in 0..n {
            kappa[Coalition::singleton(i).index()] = 1.0;
        }
    }
    for &(s, value) in entries {
        if !s.is_subset_of(players.grand()) {
            return Err(Error::PlayerOutOfRange {
                index: 31 - s.bits().leading_zeros() as usize,
                n,
            });
        }
        if s.is_empty() && value != 0.0 {
            return Err(Error::NonzeroEmpty(value));
        }
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidCohesion {
                coalition: s.bits(),
                value,
            });
        }
        kappa[s.index()] = value;
    }
    CohesionStructure::new(players, kappa)
}

pub fn apply_cordon(base: &CohesionStructure, pariahs: Coalition) -> CohesionStructure {
    base.apply_cordon(pariahs)
}

pub fn scale_cohesion(base: &CohesionStructure, a: f64) -> Result<CohesionStructure> {
    base.scale(a)
}

pub fn is_admissible(kappa: &CohesionStructure) -> bool {
    kappa.is_admissible()
}
