//! Seeded inputs shared by the benchmarks.

use cohesive_core::axioms::sampling::{admissible_kappa, trial_rng, tu_game, weighted_majority};
use cohesive_core::{CohesionStructure, Game, SimpleGame};

pub const SEED: u64 = 0xbe4c;

pub fn tu_instance(n: usize) -> (Game, CohesionStructure) {
    let mut rng = trial_rng(SEED, n);
    (tu_game(&mut rng, n), admissible_kappa(&mut rng, n))
}

pub fn voting_instance(n: usize) -> (SimpleGame, CohesionStructure) {
    let mut rng = trial_rng(SEED, 1000 + n);
    (
        weighted_majority(&mut rng, n).to_simple_game(),
        admissible_kappa(&mut rng, n),
    )
}
