//! Top-k-counting committee scoring rules: data model, winner determination,
//! axiom analysis and hardness-reduction instance generators.
//!
//! The library is organized around the lifecycle of a committee election:
//!
//! - [`election`]: elections, committees, position arithmetic, the text file
//!   format and a seedable instance-generation PRNG ([`rng`]).
//! - [`scoring`]: committee scoring functions (counting functions, OWA
//!   operators, weakly separable and representation-focused rules) with exact
//!   rational scores.
//! - [`winners`]: winner-determination algorithms, from the brute-force
//!   oracle through the polynomial special cases and the greedy
//!   approximation.
//! - [`fpt`]: the FPT-by-voters integer program and its branch-and-bound
//!   solver.
//! - [`axioms`]: the fixed-majority characterization as executable checks and
//!   counterexample constructions.
//! - [`generators`]: random and reduction-based instance generators.
//!
//! Everything is immutable after construction and safe to share across
//! threads; generators take explicit seeds.

pub mod axioms;
pub mod election;
pub mod fixtures;
pub mod fpt;
pub mod generators;
pub mod rng;
pub mod scoring;
pub mod winners;

pub use election::{
    committee_positions, dominates, parse_election, position_of, serialize_election, Committee,
    Election, ElectionFile, PositionSequence,
};
pub use scoring::{
    builtin, committee_score, counting_to_owa, is_concave, is_convex, singularity, top_k_count,
    CountingFunction, OwaOperator, Rule, Score, ScoringEvaluator, SingleWinnerScoring, Singularity,
};
pub use winners::{
    brute_force_winners, exists_committee_with_score, greedy_concave, near_perfectionist_winners,
    perfectionist_winners, separable_winners, Algorithm, WinnerResult,
};
