//! Players, coalitions and characteristic-function games.
//!
//! Coalitions are bitmasks over at most [`MAX_PLAYERS`] players, so every game
//! and cohesion structure can be stored as a dense table indexed by the mask.

use std::collections::HashSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound on the number of players. Dense tables hold `2^n` entries.
pub const MAX_PLAYERS: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn singleton(player: usize) -> Self {
        Self(1 << player)
    }

    /// The grand coalition of `n` players.
    pub const fn grand(n: usize) -> Self {
        Self(((1u64 << n) - 1) as u32)
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        Self(members.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub const fn contains(self, player: usize) -> bool {
        self.0 & (1 << player) != 0
    }

    pub const fn with(self, player: usize) -> Self {
        Self(self.0 | (1 << player))
    }

    pub const fn without(self, player: usize) -> Self {
        Self(self.0 & !(1 << player))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Member indices in increasing order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// Every subset of `self`, starting with the empty set, in increasing
    /// mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

impl BitOr for Coalition {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

impl BitAnd for Coalition {
    type Output = Self;

    fn bitand(self, rhs: Self) -> Self {
        Self(self.0 & rhs.0)
    }
}

impl Sub for Coalition {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self(self.0 & !rhs.0)
    }
}

pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// Submask enumeration (carry-rippler).
pub struct Subsets {
    set: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let current = self.next?;
        let following = current.wrapping_sub(self.set) & self.set;
        self.next = (following != 0).then_some(following);
        Some(Coalition(current))
    }
}

/// All `2^n` coalitions of `n` players.
pub fn all_coalitions(n: usize) -> impl Iterator<Item = Coalition> + Clone {
    (0..1u32 << n).map(Coalition)
}

/// The `2^(n-1)` coalitions of `N \ {player}`.
pub fn coalitions_without(n: usize, player: usize) -> Subsets {
    Coalition::grand(n).without(player).subsets()
}

/// Named players. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct PlayerSet {
    labels: Arc<[String]>,
}

impl PlayerSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if !(2..=MAX_PLAYERS).contains(&labels.len()) {
            return Err(Error::PlayerCount(labels.len()));
        }
        let mut seen = HashSet::new();
        for (i, label) in labels.iter().enumerate() {
            if label.trim().is_empty() {
                return Err(Error::EmptyLabel(i));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// Players labelled `1..=n`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, player: usize) -> &str {
        &self.labels[player]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.len())
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player < self.len() {
            Ok(())
        } else {
            Err(Error::PlayerOutOfRange {
                index: player,
                n: self.len(),
            })
        }
    }

    /// Coalition of the named players.
    pub fn coalition_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Coalition> {
        labels.iter().try_fold(Coalition::EMPTY, |acc, label| {
            let label = label.as_ref();
            self.index_of(label)
                .map(|i| acc.with(i))
                .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
        })
    }

    pub(crate) fn permuted(&self, perm: &Permutation) -> Self {
        let mut labels = vec![String::new(); self.len()];
        for (i, label) in self.labels.iter().enumerate() {
            labels[perm.apply(i)] = label.clone();
        }
        Self {
            labels: labels.into(),
        }
    }
}

impl fmt::Debug for PlayerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A relabelling of players: player `i` becomes player `image[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &j in &image {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPermutation(n));
            }
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, player: usize) -> usize {
        self.0[player]
    }

    pub fn apply_coalition(&self, coalition: Coalition) -> Coalition {
        Coalition::from_members(coalition.members().map(|i| self.0[i]))
    }

    /// Table `t'` with `t'(pi S) = t(S)`.
    pub(crate) fn permute_table(&self, table: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; table.len()];
        for (bits, &value) in table.iter().enumerate() {
            out[self.apply_coalition(Coalition(bits as u32)).index()] = value;
        }
        out
    }
}

/// Validates a dense table over all coalitions: size, finiteness and a zero
/// entry at the empty coalition.
pub(crate) fn check_table(n: usize, table: &[f64]) -> Result<()> {
    if table.len() != 1 << n {
        return Err(Error::TableSize {
            n,
            got: table.len(),
        });
    }
    if let Some(bits) = table.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            coalition: bits as u32,
        });
    }
    if table[0] != 0.0 {
        return Err(Error::NonzeroEmpty(table[0]));
    }
    Ok(())
}

/// A transferable-utility game with a dense worth table.
#[derive(Clone, PartialEq)]
pub struct Game {
    players: PlayerSet,
    worth: Vec<f64>,
}

impl Game {
    pub fn new(players: PlayerSet, worth: Vec<f64>) -> Result<Self> {
        check_table(players.len(), &worth)?;
        Ok(Self { players, worth })
    }

    pub fn from_fn(players: PlayerSet, mut worth: impl FnMut(Coalition) -> f64) -> Result<Self> {
        let table = all_coalitions(players.len())
            .map(|s| if s.is_empty() { 0.0 } else { worth(s) })
            .collect();
        Self::new(players, table)
    }

    /// The game in which `dictator` alone decides: `v(S) = 1` iff `dictator ∈ S`.
    pub fn dictator(players: PlayerSet, dictator: usize) -> Result<Self> {
        players.check_player(dictator)?;
        Self::from_fn(players, |s| f64::from(u8::from(s.contains(dictator))))
    }

    pub fn players(&self) -> &PlayerSet {
        &self.players
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn worth(&self, coalition: Coalition) -> f64 {
        self.worth[coalition.index()]
    }

    pub fn grand_worth(&self) -> f64 {
        self.worth[self.players.grand().index()]
    }

    pub fn table(&self) -> &[f64] {
        &self.worth
    }

    /// `v(S ∪ {i}) − v(S)` for `i ∉ S`.
    pub fn marginal_contribution(&self, player: usize, coalition: Coalition) -> Result<f64> {
        self.players.check_player(player)?;
        if coalition.contains(player) {
            return Err(Error::PlayerInCoalition {
                player,
                coalition: coalition.bits(),
            });
        }
        Ok(self.delta(player, coalition))
    }

    #[inline]
    pub(crate) fn delta(&self, player: usize, coalition: Coalition) -> f64 {
        self.worth[coalition.with(player).index()] - self.worth[coalition.index()]
    }

    /// True iff every marginal contribution of `player` is zero.
    pub fn is_dummy(&self, player: usize) -> bool {
        coalitions_without(self.n(), player).all(|s| self.delta(player, s) == 0.0)
    }

    pub fn is_simple(&self) -> bool {
        self.worth.iter().all(|&w| w == 0.0 || w == 1.0) && self.grand_worth() == 1.0
    }

    /// Checks `v(S) ≤ v(S ∪ {i})` along every single-player extension, which
    /// is equivalent to monotonicity under inclusion.
    pub fn is_monotone(&self) -> bool {
        (0..self.n()).all(|i| coalitions_without(self.n(), i).all(|s| self.delta(i, s) >= 0.0))
    }

    /// `a·v + c·w` on the same player set.
    pub fn linear_combination(a: f64, v: &Game, c: f64, w: &Game) -> Result<Game> {
        if v.n() != w.n() {
            return Err(Error::TableSize {
                n: v.n(),
                got: w.worth.len(),
            });
        }
        let worth = v
            .worth
            .iter()
            .zip(&w.worth)
            .map(|(x, y)| a * x + c * y)
            .collect();
        Game::new(v.players.clone(), worth)
    }

    /// The relabelled game `πv` with `(πv)(πS) = v(S)`.
    pub fn permuted(&self, perm: &Permutation) -> Result<Game> {
        if perm.len() != self.n() {
            return Err(Error::InvalidPermutation(perm.len()));
        }
        Ok(Game {
            players: self.players.permuted(perm),
            worth: perm.permute_table(&self.worth),
        })
    }
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("players", &self.players)
            .field("worth", &self.worth)
            .finish()
    }
}

/// A game with worths in `{0, 1}`, `v(∅) = 0` and `v(N) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGame {
    game: Game,
    monotone: bool,
}

impl SimpleGame {
    pub fn new(game: Game) -> Result<Self> {
        if let Some((bits, &value)) = game
            .worth
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0.0 && w != 1.0)
        {
            return Err(Error::NotSimple {
                coalition: bits as u32,
                value,
            });
        }
        if game.grand_worth() != 1.0 {
            return Err(Error::NotSimple {
                coalition: game.players.grand().bits(),
                value: game.grand_worth(),
            });
        }
        let monotone = game.is_monotone();
        Ok(Self { game, monotone })
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn into_game(self) -> Game {
        self.game
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_winning(&self, coalition: Coalition) -> bool {
        self.game.worth(coalition) == 1.0
    }

    /// Coalitions `S ⊆ N \ {i}` at which `i` swings the outcome from losing to winning.
    pub fn swings(&self, player: usize) -> impl Iterator<Item = Coalition> + '_ {
        coalitions_without(self.game.n(), player)
            .filter(move |&s| self.game.delta(player, s) == 1.0)
    }

    pub fn check_marginal_dichotomy(&self, player: usize) -> Result<DichotomyReport> {
        self.game.players.check_player(player)?;
        let mut out_of_range = Vec::new();
        let mut negative = Vec::new();
        for s in coalitions_without(self.game.n(), player) {
            let d = self.game.delta(player, s);
            if d != -1.0 && d != 0.0 && d != 1.0 {
                out_of_range.push((s, d));
            }
            if d < 0.0 {
                negative.push(s);
            }
        }
        Ok(DichotomyReport {
            player,
            monotone: self.monotone,
            out_of_range,
            negative,
        })
    }
}

impl std::ops::Deref for SimpleGame {
    type Target = Game;

    fn deref(&self) -> &Game {
        &self.game
    }
}

/// Outcome of checking that marginals of a simple game lie in `{−1, 0, 1}`,
/// and in `{0, 1}` when the game is monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyReport {
    pub player: usize,
    pub monotone: bool,
    /// Coalitions with a marginal outside `{−1, 0, 1}`. Always empty for a valid simple game.
    pub out_of_range: Vec<(Coalition, f64)>,
    /// Coalitions where the marginal is `−1`.
    pub negative: Vec<Coalition>,
}

impl DichotomyReport {
    /// Whether the report is consistent with the dichotomy: no out-of-range
    /// value, and no negative value if the game is monotone.
    pub fn holds(&self) -> bool {
        self.out_of_range.is_empty() && (!self.monotone || self.negative.is_empty())
    }

    /// Marginals are all in `{0, 1}`.
    pub fn is_binary(&self) -> bool {
        self.out_of_range.is_empty() && self.negative.is_empty()
    }
}

/// `S` wins iff its total weight reaches the quota.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMajorityGame {
    players: PlayerSet,
    weights: Vec<f64>,
    quota: f64,
}

impl WeightedMajorityGame {
    pub fn new(players: PlayerSet, weights: Vec<f64>, quota: f64) -> Result<Self> {
        if weights.len() != players.len() {
            return Err(Error::WeightCount {
                expected: players.len(),
                got: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeight(players.label(i).to_owned()));
        }
        if !quota.is_finite() || quota <= 0.0 {
            return Err(Error::InvalidQuota(quota));
        }
        let total: f64 = weights.iter().sum();
        if quota > total {
            return Err(Error::QuotaExceedsTotal { quota, total });
        }
        Ok(Self {
            players,
            weights,
            quota,
        })
    }

    pub fn players(&self) -> &PlayerSet {
        &self.players
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn quota(&self) -> f64 {
        self.quota
    }

    pub fn weight_of(&self, coalition: Coalition) -> f64 {
        coalition.members().map(|i| self.weights[i]).sum()
    }

    /// Weak inequality: reaching the quota exactly wins.
    pub fn wins(&self, coalition: Coalition) -> bool {
        self.weight_of(coalition) >= self.quota
    }

    pub fn to_simple_game(&self) -> SimpleGame {
        let game = Game::from_fn(self.players.clone(), |s| f64::from(u8::from(self.wins(s))))
            .expect("weighted majority worths are finite with v(∅) = 0");
        SimpleGame::new(game).expect("grand coalition wins by construction")
    }
}

/// Builds the simple game induced by `weights` and `quota`.
pub fn build_weighted_majority(
    players: PlayerSet,
    weights: Vec<f64>,
    quota: f64,
) -> Result<SimpleGame> {
    Ok(WeightedMajorityGame::new(players, weights, quota)?.to_simple_game())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> PlayerSet {
        PlayerSet::new(["A", "B", "C"]).unwrap()
    }

    fn bundestag() -> SimpleGame {
        let players = PlayerSet::new(["CDU/CSU", "AfD", "SPD", "Grüne", "Linke"]).unwrap();
        build_weighted_majority(players, vec![208.0, 152.0, 120.0, 85.0, 64.0], 316.0).unwrap()
    }

    #[test]
    fn subsets_enumerate_submasks() {
        let got: Vec<u32> = Coalition::from_bits(0b1010)
            .subsets()
            .map(Coalition::bits)
            .collect();
        assert_eq!(got, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        assert_eq!(Coalition::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn coalitions_without_player() {
        for n in 2..=8 {
            for i in 0..n {
                let subsets: Vec<_> = coalitions_without(n, i).collect();
                assert_eq!(subsets.len(), 1 << (n - 1));
                assert!(subsets.iter().all(|s| !s.contains(i)));
            }
        }
    }

    #[test]
    fn player_set_validation() {
        assert_eq!(PlayerSet::new(["A"]), Err(Error::PlayerCount(1)));
        assert_eq!(
            PlayerSet::new(["A", "A"]),
            Err(Error::DuplicateLabel("A".into()))
        );
        assert_eq!(PlayerSet::new(["A", " "]), Err(Error::EmptyLabel(1)));
        assert!(PlayerSet::numbered(MAX_PLAYERS + 1).is_err());
    }

    #[test]
    fn apex_pair_wins() {
        let game = build_weighted_majority(abc(), vec![45.0, 35.0, 20.0], 51.0).unwrap();
        assert!(game.is_winning(Coalition::from_members([1, 2])));
        assert!(!game.is_winning(Coalition::singleton(0)));
        assert_eq!(game.worth(Coalition::EMPTY), 0.0);
    }

    #[test]
    fn bundestag_largest_losing_coalition() {
        let game = bundestag();
        let afd_gruene_linke = Coalition::from_members([1, 3, 4]);
        assert_eq!(game.worth(afd_gruene_linke), 0.0);
        // CDU/CSU joining SPD: 120 < 316 <= 328.
        let d = game
            .marginal_contribution(0, Coalition::singleton(2))
            .unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn quota_above_total_rejected() {
        let err = build_weighted_majority(abc(), vec![45.0, 35.0, 20.0], 101.0).unwrap_err();
        assert!(matches!(err, Error::QuotaExceedsTotal { .. }));
        assert!(matches!(
            build_weighted_majority(abc(), vec![1.0, 1.0, 1.0], 0.0),
            Err(Error::InvalidQuota(_))
        ));
        assert!(matches!(
            build_weighted_majority(abc(), vec![1.0, -1.0, 1.0], 1.0),
            Err(Error::InvalidWeight(_))
        ));
    }

    #[test]
    fn quota_tie_wins() {
        let game = build_weighted_majority(abc(), vec![50.0, 30.0, 20.0], 50.0).unwrap();
        assert!(game.is_winning(Coalition::singleton(0)));
    }

    #[test]
    fn dictator_marginals() {
        let game = Game::dictator(PlayerSet::numbered(4).unwrap(), 2).unwrap();
        for s in coalitions_without(4, 2) {
            assert_eq!(game.marginal_contribution(2, s).unwrap(), 1.0);
        }
        for j in [0, 1, 3] {
            for s in coalitions_without(4, j) {
                assert_eq!(game.marginal_contribution(j, s).unwrap(), 0.0);
            }
            assert!(game.is_dummy(j));
        }
        assert!(!game.is_dummy(2));
    }

    #[test]
    fn marginal_requires_outsider() {
        let game = Game::dictator(abc(), 0).unwrap();
        assert!(matches!(
            game.marginal_contribution(0, Coalition::singleton(0)),
            Err(Error::PlayerInCoalition { .. })
        ));
    }

    #[test]
    fn game_table_validation() {
        let players = abc();
        assert!(matches!(
            Game::new(players.clone(), vec![0.0; 7]),
            Err(Error::TableSize { .. })
        ));
        let mut worth = vec![0.0; 8];
        worth[0] = 0.5;
        assert_eq!(
            Game::new(players.clone(), worth),
            Err(Error::NonzeroEmpty(0.5))
        );
        let mut worth = vec![0.0; 8];
        worth[3] = f64::NAN;
        assert!(matches!(
            Game::new(players, worth),
            Err(Error::NonFinite { coalition: 3 })
        ));
    }

    #[test]
    fn monotone_game_is_binary() {
        let game = bundestag();
        assert!(game.is_monotone());
        for i in 0..5 {
            let report = game.check_marginal_dichotomy(i).unwrap();
            assert!(report.holds());
            assert!(report.is_binary());
        }
    }

    #[test]
    fn non_monotone_simple_game_has_negative_marginal() {
        // v({1}) = 1, v({1,2}) = 0, v(N) = 1 on three players.
        let players = PlayerSet::numbered(3).unwrap();
        let mut worth = vec![0.0; 8];
        worth[0b001] = 1.0;
        worth[0b111] = 1.0;
        let game = SimpleGame::new(Game::new(players, worth).unwrap()).unwrap();
        assert!(!game.is_monotone());
        let report = game.check_marginal_dichotomy(1).unwrap();
        assert!(report.out_of_range.is_empty());
        assert_eq!(report.negative, vec![Coalition::singleton(0)]);
        assert!(report.holds());
        assert!(!report.is_binary());
    }

    #[test]
    fn simple_game_rejects_other_worths() {
        let players = PlayerSet::numbered(2).unwrap();
        let err = SimpleGame::new(Game::new(players.clone(), vec![0.0, 0.5, 0.0, 1.0]).unwrap());
        assert!(matches!(err, Err(Error::NotSimple { coalition: 1, .. })));
        let err = SimpleGame::new(Game::new(players, vec![0.0, 0.0, 0.0, 0.0]).unwrap());
        assert!(matches!(err, Err(Error::NotSimple { coalition: 3, .. })));
    }

    #[test]
    fn permuted_game_relabels() {
        let game = Game::dictator(abc(), 0).unwrap();
        let perm = Permutation::new(vec![2, 0, 1]).unwrap();
        let moved = game.permuted(&perm).unwrap();
        assert_eq!(moved.players().label(2), "A");
        assert!(!moved.is_dummy(2));
        assert!(moved.is_dummy(0));
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn coalition_of_labels() {
        let players = abc();
        assert_eq!(
            players.coalition_of(&["A", "C"]).unwrap(),
            Coalition::from_members([0, 2])
        );
        assert_eq!(
            players.coalition_of(&["D"]),
            Err(Error::UnknownLabel("D".into()))
        );
    }
}
