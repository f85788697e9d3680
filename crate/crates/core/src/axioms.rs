//! The fixed-majority criterion as executable checks: the counting-function
//! characterization, empirical verification against the brute-force oracle,
//! and constructive counterexample elections.

use thiserror::Error;

use crate::election::{Committee, Election, PositionSequence};
use crate::scoring::{
    is_concave, is_convex, CountingFunction, Score, ScoringError, ScoringEvaluator,
};
use crate::winners::{brute_force_winners, WinnerError, WinnerResult};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AxiomError {
    #[error("need m >= 2k, got m = {m}, k = {k}")]
    MTooSmall { m: usize, k: usize },
    #[error("witness_general requires a tabulated evaluator")]
    NotTabulated,
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Winner(#[from] WinnerError),
}

/// A failed instance of the inequality g(k) - g(k-k2) >= g(k1+k2) - g(k1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmViolation {
    pub k1: usize,
    pub k2: usize,
    pub lhs: Score,
    pub rhs: Score,
}

/// Outcome of the counting-function fixed-majority test: the rule satisfies
/// the criterion iff g is nonconstant and no inequality fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmCheckResult {
    pub satisfies: bool,
    pub nonconstant: bool,
    pub violation: Option<FmViolation>,
}

/// Tests condition (ii) over all (k1, k2) with k1 + k2 <= k, lexicographically,
/// plus nonconstancy (condition (i)).
pub fn fm_condition_check(g: &CountingFunction) -> FmCheckResult {
    let k = g.k();
    let mut violation = None;
    'outer: for k1 in 0..=k {
        for k2 in 0..=k - k1 {
            let lhs = g.at(k) - g.at(k - k2);
            let rhs = g.at(k1 + k2) - g.at(k1);
            if lhs < rhs {
                violation = Some(FmViolation { k1, k2, lhs, rhs });
                break 'outer;
            }
        }
    }
    let nonconstant = !g.is_constant();
    FmCheckResult { satisfies: nonconstant && violation.is_none(), nonconstant, violation }
}

/// The unique size-k set occupying the top k positions of strictly more than
/// half of the votes, if one exists.
pub fn is_fixed_majority_instance(election: &Election, k: usize) -> Option<Committee> {
    let n = election.num_voters();
    let mut counts: std::collections::HashMap<Vec<usize>, usize> = std::collections::HashMap::new();
    for vote in election.votes() {
        let mut top = vote[..k].to_vec();
        top.sort_unstable();
        *counts.entry(top).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .find(|(_, c)| 2 * c > n)
        .map(|(members, _)| Committee::new(members).expect("valid"))
}

/// Result of checking the fixed-majority definition directly against the
/// brute-force winners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmpiricalFm {
    /// The majority committee is the unique winner.
    Pass,
    /// The majority committee is not the unique winner; carries the actual
    /// winner set.
    Fail(WinnerResult),
    /// The election has no fixed-majority committee.
    NotApplicable,
}

pub fn empirical_fm_check(
    evaluator: &ScoringEvaluator,
    election: &Election,
    k: usize,
) -> Result<EmpiricalFm, WinnerError> {
    let Some(majority) = is_fixed_majority_instance(election, k) else {
        return Ok(EmpiricalFm::NotApplicable);
    };
    let result = brute_force_winners(evaluator, election, k)?;
    let pass = !result.truncated && result.winners.len() == 1 && result.winners[0] == majority;
    Ok(if pass { EmpiricalFm::Pass } else { EmpiricalFm::Fail(result) })
}

/// A constructed election on which a rule fails the fixed-majority criterion:
/// `majority_committee` (M) has majority support but `beating_committee` (S)
/// scores at least as much.
#[derive(Debug, Clone)]
pub struct FmWitness {
    pub election: Election,
    pub majority_committee: Committee,
    pub beating_committee: Committee,
    pub n_used: usize,
    /// The violation parameters: (k1, k2) for counting witnesses, (t, t) for
    /// general ones.
    pub params: (usize, usize),
}

/// Minimal n with base + n * slope < 0, where slope < 0.
fn minimal_n(base: Score, slope: Score) -> usize {
    debug_assert!(slope < Score::from_integer(0));
    let ratio = base / -slope;
    let n = ratio.floor().to_integer() + 1;
    n.max(1) as usize
}

/// Builds the (2n+1)-voter counterexample election for a counting function
/// violating the fixed-majority inequality, with the minimal replication n
/// that makes the majority committee lose.
pub fn witness_counting(
    g: &CountingFunction,
    m: usize,
    k: usize,
) -> Result<Option<FmWitness>, AxiomError> {
    if m < 2 * k {
        return Err(AxiomError::MTooSmall { m, k });
    }
    if g.k() != k {
        return Err(ScoringError::CommitteeSize { got: k, expected: g.k() }.into());
    }
    let check = fm_condition_check(g);
    let Some(FmViolation { k1, k2, lhs, rhs }) = check.violation else {
        return Ok(None);
    };

    // score(M) - score(S) = n*(lhs - rhs) + g(k) - g(k1+k2)
    let n = minimal_n(g.at(k) - g.at(k1 + k2), lhs - rhs);

    let identity: Vec<usize> = (0..m).collect();
    // c_1 .. c_{k1}, then c_m, c_{m-1}, .., c_{k1+1}
    let mut flipped: Vec<usize> = (0..k1).collect();
    flipped.extend((k1..m).rev());
    let mut votes = vec![identity; n + 1];
    votes.extend(vec![flipped; n]);
    let election = Election::from_votes(m, votes).expect("permutations");

    let majority = Committee::new((0..k).collect()).expect("valid");
    let r = k - k1 - k2;
    let mut beating: Vec<usize> = (0..k1 + k2).collect();
    beating.extend(m - r..m);
    let beating = Committee::new(beating).expect("valid");
    Ok(Some(FmWitness {
        election,
        majority_committee: majority,
        beating_committee: beating,
        n_used: n,
        params: (k1, k2),
    }))
}

/// The probe sequence I_t = (1..t, k+1..2k-t).
pub fn probe_upper(t: usize, m: usize, k: usize) -> PositionSequence {
    let mut p: Vec<usize> = (1..=t).collect();
    p.extend(k + 1..=2 * k - t);
    PositionSequence::new(p, m).expect("valid for m >= 2k")
}

/// The probe sequence J_t = (k-t+1..k, m-(k-t)+1..m).
pub fn probe_lower(t: usize, m: usize, k: usize) -> PositionSequence {
    let mut p: Vec<usize> = (k - t + 1..=k).collect();
    p.extend(m - (k - t) + 1..=m);
    PositionSequence::new(p, m).expect("valid for m >= 2k")
}

/// For an arbitrary (tabulated) committee scoring function: if some probe pair
/// has f(I_t) > f(J_t), builds the X/Y/Z/D counterexample election with the
/// minimal n making the majority committee lose; returns None when all pairs
/// tie, which certifies the function is top-k-counting-shaped.
pub fn witness_general(
    evaluator: &ScoringEvaluator,
    m: usize,
    k: usize,
) -> Result<Option<FmWitness>, AxiomError> {
    if !matches!(evaluator, ScoringEvaluator::Tabulated { .. }) {
        return Err(AxiomError::NotTabulated);
    }
    if m < 2 * k {
        return Err(AxiomError::MTooSmall { m, k });
    }
    if evaluator.m() != m {
        return Err(ScoringError::ElectionSize { got: m, expected: evaluator.m() }.into());
    }
    if evaluator.k() != k {
        return Err(ScoringError::CommitteeSize { got: k, expected: evaluator.k() }.into());
    }

    let f = |seq: &PositionSequence| evaluator.eval(seq);
    let top = f(&probe_upper(k, m, k))?; // f(I_k) = f(1..k)
    for t in 0..=k {
        let fi = f(&probe_upper(t, m, k))?;
        let fj = f(&probe_lower(t, m, k))?;
        if fi > fj {
            // score(M) - score(N) = f(I_k) - f(I_t) + n*(f(J_t) - f(I_t))
            let n = minimal_n(top - fi, fj - fi);
            // X = 0..t, Y = t..k, Z = k..2k-t, D = 2k-t..m
            let group1: Vec<usize> = (0..m).collect();
            let mut group2: Vec<usize> = (k..2 * k - t).collect();
            group2.extend(0..t);
            group2.extend(2 * k - t..m);
            group2.extend(t..k);
            let mut votes = vec![group1; n + 1];
            votes.extend(vec![group2; n]);
            let election = Election::from_votes(m, votes).expect("permutations");
            let majority = Committee::new((0..k).collect()).expect("valid");
            let mut beating: Vec<usize> = (0..t).collect();
            beating.extend(k..2 * k - t);
            let beating = Committee::new(beating).expect("valid");
            return Ok(Some(FmWitness {
                election,
                majority_committee: majority,
                beating_committee: beating,
                n_used: n,
                params: (t, t),
            }));
        }
    }
    Ok(None)
}

/// Classification of a counting function by convexity shape alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeVerdict {
    /// Convex and nonconstant: satisfies the fixed-majority criterion.
    FmYes,
    /// Concave but not linear: fails the criterion.
    FmNo,
    /// Neither case applies; defer to [`fm_condition_check`].
    Deferred,
}

pub fn shape_check(g: &CountingFunction) -> ShapeVerdict {
    let verdict = if is_convex(g) && !g.is_constant() {
        ShapeVerdict::FmYes
    } else if is_concave(g) && !g.is_linear() {
        ShapeVerdict::FmNo
    } else {
        ShapeVerdict::Deferred
    };
    // the shape shortcut must agree with the full characterization
    let full = fm_condition_check(g);
    match verdict {
        ShapeVerdict::FmYes => debug_assert!(full.satisfies),
        ShapeVerdict::FmNo => debug_assert!(!full.satisfies),
        ShapeVerdict::Deferred => {}
    }
    verdict
}
