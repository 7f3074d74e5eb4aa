//! Random games and cohesion structures for property trials.
//!
//! Every trial owns a generator derived from `(seed, trial)`, so results do
//! not depend on how trials are scheduled.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::{
    all_coalitions, Coalition, Game, Permutation, PlayerSet, WeightedMajorityGame,
};
use crate::cohesion::CohesionStructure;

/// Probability that a multi-player coalition gets zero cohesion.
const ZERO_COHESION_RATE: f64 = 0.15;

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn players(n: usize) -> PlayerSet {
    PlayerSet::numbered(n).expect("trial player counts are within range")
}

/// Worths i.i.d. uniform on `[−1, 1]`, `v(∅) = 0`.
pub fn tu_game<R: Rng>(rng: &mut R, n: usize) -> Game {
    Game::from_fn(players(n), |_| rng.random_range(-1.0..=1.0)).expect("finite worths")
}

/// A TU game in which `dummy` never changes any worth.
pub fn game_with_dummy<R: Rng>(rng: &mut R, n: usize, dummy: usize) -> Game {
    let mut worth = vec![0.0; 1 << n];
    for s in all_coalitions(n).filter(|s| !s.contains(dummy) && !s.is_empty()) {
        let w = rng.random_range(-1.0..=1.0);
        worth[s.index()] = w;
        worth[s.with(dummy).index()] = w;
    }
    Game::new(players(n), worth).expect("finite worths")
}

/// Integer seats uniform on `[1, 100]` and quota `⌊total/2⌋ + 1`.
pub fn weighted_majority<R: Rng>(rng: &mut R, n: usize) -> WeightedMajorityGame {
    let seats: Vec<f64> = (0..n)
        .map(|_| f64::from(rng.random_range(1u32..=100)))
        .collect();
    let total: f64 = seats.iter().sum();
    let quota = (total / 2.0).floor() + 1.0;
    WeightedMajorityGame::new(players(n), seats, quota).expect("valid weighted majority game")
}

/// Singletons uniform on `[0.05, 1]`; larger coalitions zero with a small
/// probability and otherwise uniform on `[0.05, 1]`.
pub fn admissible_kappa<R: Rng>(rng: &mut R, n: usize) -> CohesionStructure {
    CohesionStructure::from_fn(players(n), |s| {
        if s.len() >= 2 && rng.random_bool(ZERO_COHESION_RATE) {
            0.0
        } else {
            rng.random_range(0.05..=1.0)
        }
    })
    .expect("non-negative cohesion")
}

pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::new(image).expect("shuffle is a permutation")
}

/// Log-uniform on `[1e−3, 1e3]`.
pub fn scale_factor<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(rng.random_range(-3.0..=3.0))
}

/// Random subset of `candidates`.
pub fn subset_of<R: Rng>(rng: &mut R, candidates: Coalition) -> Coalition {
    Coalition::from_members(candidates.members().filter(|_| rng.random_bool(0.5)))
}
