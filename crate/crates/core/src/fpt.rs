//! Winner determination parameterized by the number of voters: candidates are
//! bucketed by the exact set of voters ranking them in the top k, the choice
//! collapses to one integer variable per bucket, and the resulting program is
//! solved exactly by branch and bound.

use std::fmt::Write as _;

use num::Zero;
use thiserror::Error;

use crate::election::{Committee, Election};
use crate::scoring::{format_rational, is_concave, CountingFunction, Score, ScoringError};
use crate::winners::{Algorithm, WinnerResult};

/// Largest number of voters accepted by default: the bucketing is over voter
/// subsets, so memory and solve time grow with 2^n.
pub const DEFAULT_VOTER_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FptError {
    #[error("election has {n} voters, exceeding the cap of {cap}")]
    VoterCapExceeded { n: usize, cap: usize },
    #[error("counting function is not concave")]
    NotConcave,
    #[error("committee size k = {k} exceeds m = {m}")]
    KTooLarge { k: usize, m: usize },
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}

/// Candidates bucketed by the exact voter subset (bitmask) that ranks them in
/// the top k. Only nonempty buckets are stored, sorted by mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterSubsetPartition {
    num_voters: usize,
    groups: Vec<(u32, Vec<usize>)>,
}

impl VoterSubsetPartition {
    pub fn num_voters(&self) -> usize {
        self.num_voters
    }

    /// Nonempty groups as (voter bitmask, sorted candidate indices), in
    /// ascending mask order.
    pub fn groups(&self) -> &[(u32, Vec<usize>)] {
        &self.groups
    }

    pub fn candidates_for(&self, mask: u32) -> Option<&[usize]> {
        self.groups
            .iter()
            .find(|(m, _)| *m == mask)
            .map(|(_, cs)| cs.as_slice())
    }
}

/// Buckets every candidate that appears in some voter's top k by the exact
/// set of voters ranking it there.
pub fn build_voter_partition(
    election: &Election,
    k: usize,
) -> Result<VoterSubsetPartition, FptError> {
    build_voter_partition_capped(election, k, DEFAULT_VOTER_CAP)
}

pub fn build_voter_partition_capped(
    election: &Election,
    k: usize,
    voter_cap: usize,
) -> Result<VoterSubsetPartition, FptError> {
    let n = election.num_voters();
    let m = election.num_candidates();
    if n > voter_cap {
        return Err(FptError::VoterCapExceeded { n, cap: voter_cap });
    }
    if k > m {
        return Err(FptError::KTooLarge { k, m });
    }
    let mut masks = vec![0u32; m];
    for (v, vote) in election.votes().iter().enumerate() {
        for &c in &vote[..k] {
            masks[c] |= 1 << v;
        }
    }
    let mut groups: Vec<(u32, Vec<usize>)> = Vec::new();
    for c in 0..m {
        if masks[c] == 0 {
            continue;
        }
        match groups.binary_search_by_key(&masks[c], |(mask, _)| *mask) {
            Ok(i) => groups[i].1.push(c),
            Err(i) => groups.insert(i, (masks[c], vec![c])),
        }
    }
    Ok(VoterSubsetPartition { num_voters: n, groups })
}

/// The integer program over bucket variables z_i: maximize
/// sum_{i,j} x_{i,j} * (g(j) - g(j-1)) subject to sum z_i = k,
/// x_i = sum_{j: voter i in S_j} z_j, sum_j x_{i,j} = x_i,
/// 0 <= x_{i,j} <= 1 and 0 <= z_i <= |T(S_i)|.
#[derive(Debug, Clone)]
pub struct FptProgram {
    pub k: usize,
    pub num_voters: usize,
    /// (voter bitmask, capacity |T(S_i)|) per bucket, ascending mask order.
    pub groups: Vec<(u32, usize)>,
    /// Objective differentials g(j) - g(j-1) for j = 1..=k.
    pub objective: Vec<Score>,
}

impl FptProgram {
    pub fn new(
        g: &CountingFunction,
        partition: &VoterSubsetPartition,
        k: usize,
    ) -> Result<Self, FptError> {
        if g.k() != k {
            return Err(ScoringError::CommitteeSize { got: k, expected: g.k() }.into());
        }
        Ok(FptProgram {
            k,
            num_voters: partition.num_voters(),
            groups: partition
                .groups()
                .iter()
                .map(|(mask, cs)| (*mask, cs.len()))
                .collect(),
            objective: g.differentials(),
        })
    }

    /// Renders the program in LP text format (variables `z<g>` integer,
    /// `x<i>` integer, `y<i>_<j>` for the relaxed x_{i,j}) for cross-checks
    /// with external solvers.
    pub fn to_lp_format(&self) -> String {
        let mut out = String::new();
        out.push_str("Maximize\n obj:");
        let mut first = true;
        for i in 1..=self.num_voters {
            for (j, d) in self.objective.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let c = format_rational(*d);
                if first {
                    let _ = write!(out, " {c} y{i}_{}", j + 1);
                    first = false;
                } else {
                    let _ = write!(out, " + {c} y{i}_{}", j + 1);
                }
            }
        }
        if first {
            out.push_str(" 0 y1_1");
        }
        out.push_str("\nSubject To\n size:");
        for g in 1..=self.groups.len() {
            let _ = write!(out, "{}z{g}", if g == 1 { " " } else { " + " });
        }
        let _ = writeln!(out, " = {}", self.k);
        for i in 1..=self.num_voters {
            let _ = write!(out, " xdef{i}: x{i}");
            for (g, (mask, _)) in self.groups.iter().enumerate() {
                if mask >> (i - 1) & 1 == 1 {
                    let _ = write!(out, " - z{}", g + 1);
                }
            }
            out.push_str(" = 0\n");
            let _ = write!(out, " xsum{i}:");
            for j in 1..=self.k {
                let _ = write!(out, "{}y{i}_{j}", if j == 1 { " " } else { " + " });
            }
            let _ = writeln!(out, " - x{i} = 0");
        }
        out.push_str("Bounds\n");
        for (g, (_, cap)) in self.groups.iter().enumerate() {
            let _ = writeln!(out, " 0 <= z{} <= {cap}", g + 1);
        }
        for i in 1..=self.num_voters {
            let _ = writeln!(out, " 0 <= x{i} <= {}", self.k);
            for j in 1..=self.k {
                let _ = writeln!(out, " 0 <= y{i}_{j} <= 1");
            }
        }
        out.push_str("Generals\n");
        for g in 1..=self.groups.len() {
            let _ = write!(out, " z{g}");
        }
        for i in 1..=self.num_voters {
            let _ = write!(out, " x{i}");
        }
        out.push_str("\nEnd\n");
        out
    }
}

/// An optimal assignment: integral z per group, the induced per-voter counts
/// x_i, the relaxed x_{i,j} values from the greedy fill (always 0/1 here),
/// and the objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptSolution {
    pub z: Vec<usize>,
    pub x: Vec<usize>,
    pub x_ij: Vec<Vec<Score>>,
    pub objective: Score,
}

/// Exact branch-and-bound solve over the integral z variables. The inner
/// assignment of x_{i,j} given integral x_i is the greedy fill x_{i,j} = 1
/// iff j <= x_i, which is optimal for nonincreasing (concave) differentials.
pub fn solve_fpt(program: &FptProgram, g: &CountingFunction) -> FptSolution {
    let n = program.num_voters;
    let k = program.k;
    let num_groups = program.groups.len();
    let d1 = if k > 0 { g.at(1) - g.at(0) } else { Score::zero() };

    // explore groups in decreasing popcount order for tighter bounds
    let mut order: Vec<usize> = (0..num_groups).collect();
    order.sort_by_key(|&i| {
        (
            std::cmp::Reverse(program.groups[i].0.count_ones()),
            program.groups[i].0,
        )
    });

    // suffix capacity, for feasibility pruning
    let mut suffix_cap = vec![0usize; num_groups + 1];
    for t in (0..num_groups).rev() {
        suffix_cap[t] = suffix_cap[t + 1] + program.groups[order[t]].1;
    }

    struct Search<'a> {
        program: &'a FptProgram,
        g: &'a CountingFunction,
        order: &'a [usize],
        suffix_cap: &'a [usize],
        d1: Score,
        counts: Vec<usize>,
        z: Vec<usize>,
        best: Option<(Score, Vec<usize>)>,
    }

    impl Search<'_> {
        fn value(&self) -> Score {
            self.counts.iter().map(|&c| self.g.at(c)).sum()
        }

        fn recurse(&mut self, t: usize, remaining: usize) {
            if remaining > self.suffix_cap[t] {
                return;
            }
            if t == self.order.len() || remaining == 0 {
                let value = self.value();
                if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                    self.best = Some((value, self.z.clone()));
                }
                return;
            }
            // admissible bound: each remaining unit reaches at most the
            // widest remaining bucket, each touched voter gains at most d1
            if let Some((b, _)) = &self.best {
                let pop = self.program.groups[self.order[t]].0.count_ones() as i64;
                let bound = self.value()
                    + self.d1 * Score::from_integer(remaining as i64 * pop);
                if bound <= *b {
                    return;
                }
            }
            let gi = self.order[t];
            let (mask, cap) = self.program.groups[gi];
            let hi = cap.min(remaining);
            for take in (0..=hi).rev() {
                self.z[gi] = take;
                for v in 0..self.counts.len() {
                    if mask >> v & 1 == 1 {
                        self.counts[v] += take;
                    }
                }
                self.recurse(t + 1, remaining - take);
                for v in 0..self.counts.len() {
                    if mask >> v & 1 == 1 {
                        self.counts[v] -= take;
                    }
                }
                self.z[gi] = 0;
            }
        }
    }

    let mut search = Search {
        program,
        g,
        order: &order,
        suffix_cap: &suffix_cap,
        d1,
        counts: vec![0; n],
        z: vec![0; num_groups],
        best: None,
    };
    search.recurse(0, k);
    let (objective, z) = search.best.expect("program is feasible");

    let mut x = vec![0usize; n];
    for (gi, &(mask, _)) in program.groups.iter().enumerate() {
        for (v, xv) in x.iter_mut().enumerate() {
            if mask >> v & 1 == 1 {
                *xv += z[gi];
            }
        }
    }
    let x_ij: Vec<Vec<Score>> = x
        .iter()
        .map(|&xv| {
            (1..=k)
                .map(|j| if j <= xv { Score::from_integer(1) } else { Score::zero() })
                .collect()
        })
        .collect();
    FptSolution { z, x, x_ij, objective }
}

/// Exact winners for a concave top-k-counting rule, parameterized by the
/// number of voters. Reports one optimal committee, built by taking the z_i
/// lowest-index candidates from each bucket.
pub fn fpt_voters_winners(
    g: &CountingFunction,
    election: &Election,
    k: usize,
) -> Result<WinnerResult, FptError> {
    fpt_voters_winners_capped(g, election, k, DEFAULT_VOTER_CAP)
}

pub fn fpt_voters_winners_capped(
    g: &CountingFunction,
    election: &Election,
    k: usize,
    voter_cap: usize,
) -> Result<WinnerResult, FptError> {
    if !is_concave(g) {
        return Err(FptError::NotConcave);
    }
    let partition = build_voter_partition_capped(election, k, voter_cap)?;
    let program = FptProgram::new(g, &partition, k)?;
    let solution = solve_fpt(&program, g);

    let mut members: Vec<usize> = Vec::with_capacity(k);
    for (gi, (_, candidates)) in partition.groups().iter().enumerate() {
        members.extend(candidates[..solution.z[gi]].iter().copied());
    }
    members.sort_unstable();
    let committee = Committee::new(members).expect("buckets are disjoint");
    Ok(WinnerResult {
        winners: vec![committee],
        best_score: solution.objective,
        algorithm: Algorithm::FptVoters,
        exact: true,
        truncated: false,
    })
}
