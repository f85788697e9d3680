//! Bundled example elections used across tests and by the CLI docs.

use crate::election::{parse_election, Election, ElectionFile};

pub const EXAMPLE1_TEXT: &str = include_str!("../fixtures/example1.elect");
pub const FM_COUNTEREXAMPLE_TEXT: &str = include_str!("../fixtures/fm_counterexample.elect");
pub const PARTITION_EXAMPLE_TEXT: &str = include_str!("../fixtures/partition_example.elect");

fn parse(text: &str) -> ElectionFile {
    parse_election(text).expect("bundled fixture parses")
}

/// The 8-candidate, 8-voter election on which SNTV, Bloc, k-Borda, the
/// Chamberlin-Courant rules and Perfectionist all disagree (k = 2).
pub fn example1() -> Election {
    parse(EXAMPLE1_TEXT).election
}

/// Three voters over {a,b,c,d}; a majority puts {a,b} on top, yet several
/// rules fail to elect {a,b} uniquely (k = 2).
pub fn fm_counterexample() -> Election {
    parse(FM_COUNTEREXAMPLE_TEXT).election
}

/// Six voters over {a,..,f}; the voter-subset partition for k = 3 has exactly
/// five nonempty groups.
pub fn partition_example() -> Election {
    parse(PARTITION_EXAMPLE_TEXT).election
}
