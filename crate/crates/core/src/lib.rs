pub mod axioms;
pub mod coalition;
pub mod cohesion;
pub mod error;
pub mod golden;
pub mod scenarios;
pub mod values;

pub use coalition::{
    build_weighted_majority, Coalition, Game, Permutation, PlayerSet, SimpleGame,
    WeightedMajorityGame, MAX_PLAYERS,
};
pub use cohesion::{
    apply_cordon, explicit_cohesion, range_cohesion, CohesionStructure, DefaultRule,
    IdeologyProfile,
};
pub use error::{Error, Result};
pub use values::{cohesion_value, normalize_index, power_index, Branch, PowerProfile, SizeWeights};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
