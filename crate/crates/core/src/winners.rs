//! Winner-determination algorithms: the brute-force oracle, the polynomial
//! special cases, and the greedy approximation for concave rules.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num::Zero;
use thiserror::Error;

use crate::election::{binomial, for_each_committee, Committee, Election};
use crate::scoring::{
    committee_score, is_concave, is_convex, singularity, CountingFunction, Score,
    ScoringError, ScoringEvaluator, Singularity,
};

/// Default enumeration budget: brute force refuses elections with more than
/// this many committees.
pub const DEFAULT_ENUMERATION_CAP: u128 = 5_000_000;

/// Complete tie sets are reported up to this many committees; beyond it only
/// the lexicographically least winner is kept and `truncated` is set.
pub const TIE_CAP: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WinnerError {
    #[error("enumeration cap exceeded: C(m,k) = {committees} > {cap}")]
    CapExceeded { committees: u128, cap: u128 },
    #[error("counting function is not concave")]
    NotConcave,
    #[error("near-perfectionist precondition violated: k - sing(g) = {gap} > q = {q}")]
    NearPerfectionist { gap: usize, q: usize },
    #[error("committee size k = {k} exceeds m = {m}")]
    KTooLarge { k: usize, m: usize },
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}

/// Which algorithm produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    BruteForce,
    Separable,
    Perfectionist,
    NearPerfectionist,
    GreedyConcave,
    FptVoters,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algorithm::BruteForce => "brute-force",
            Algorithm::Separable => "separable",
            Algorithm::Perfectionist => "perfectionist",
            Algorithm::NearPerfectionist => "near-perfectionist",
            Algorithm::GreedyConcave => "greedy-concave",
            Algorithm::FptVoters => "fpt-voters",
        };
        f.write_str(s)
    }
}

/// The outcome of a winner-determination run: the tied winning committees
/// (possibly truncated), their common score, and provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinnerResult {
    pub winners: Vec<Committee>,
    pub best_score: Score,
    pub algorithm: Algorithm,
    /// True when the score is provably optimal.
    pub exact: bool,
    /// True when the tie set was larger than [`TIE_CAP`] and only the
    /// lexicographically least winner is reported.
    pub truncated: bool,
}

impl WinnerResult {
    fn new(winners: Vec<Committee>, best_score: Score, algorithm: Algorithm, exact: bool) -> Self {
        assert!(!winners.is_empty());
        WinnerResult { winners, best_score, algorithm, exact, truncated: false }
    }
}

/// Accumulates tied best committees in enumeration order with the tie cap.
struct Best {
    score: Option<Score>,
    winners: Vec<Committee>,
    tie_count: usize,
}

impl Best {
    fn new() -> Self {
        Best { score: None, winners: Vec::new(), tie_count: 0 }
    }

    fn offer(&mut self, committee: &[usize], score: Score) {
        match self.score {
            Some(best) if score < best => {}
            Some(best) if score == best => {
                self.tie_count += 1;
                if self.winners.len() < TIE_CAP {
                    self.winners.push(Committee::new(committee.to_vec()).expect("valid"));
                }
            }
            _ => {
                self.score = Some(score);
                self.winners.clear();
                self.winners.push(Committee::new(committee.to_vec()).expect("valid"));
                self.tie_count = 1;
            }
        }
    }

    fn finish(self, algorithm: Algorithm, exact: bool) -> WinnerResult {
        let mut winners = self.winners;
        let truncated = self.tie_count > TIE_CAP;
        if truncated {
            winners.truncate(1);
        }
        WinnerResult {
            winners,
            best_score: self.score.expect("at least one committee"),
            algorithm,
            exact,
            truncated,
        }
    }
}

fn check_cap(m: usize, k: usize, cap: u128) -> Result<(), WinnerError> {
    if k > m {
        return Err(WinnerError::KTooLarge { k, m });
    }
    let committees = binomial(m, k);
    if committees > cap {
        return Err(WinnerError::CapExceeded { committees, cap });
    }
    Ok(())
}

/// Scores every size-k committee and returns the exact tied-winner set.
/// Enumeration is lexicographic, so the first winner reported is always the
/// lexicographically least one.
pub fn brute_force_winners(
    evaluator: &ScoringEvaluator,
    election: &Election,
    k: usize,
) -> Result<WinnerResult, WinnerError> {
    brute_force_winners_capped(evaluator, election, k, DEFAULT_ENUMERATION_CAP, 1)
}

/// Brute force with an explicit enumeration cap and thread count. With
/// `threads > 1` the committee space is split by first member; the merge is
/// order-preserving, so results are identical to the sequential run.
pub fn brute_force_winners_capped(
    evaluator: &ScoringEvaluator,
    election: &Election,
    k: usize,
    cap: u128,
    threads: usize,
) -> Result<WinnerResult, WinnerError> {
    let m = election.num_candidates();
    check_cap(m, k, cap)?;
    if evaluator.k() != k {
        return Err(ScoringError::CommitteeSize { got: k, expected: evaluator.k() }.into());
    }

    if threads <= 1 || k == 0 || m - k == 0 {
        let mut best = Best::new();
        let mut err = None;
        for_each_committee(m, k, |c| {
            let committee = Committee::new(c.to_vec()).expect("valid");
            match committee_score(evaluator, election, &committee) {
                Ok(s) => {
                    best.offer(c, s);
                    true
                }
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        if let Some(e) = err {
            return Err(e.into());
        }
        return Ok(best.finish(Algorithm::BruteForce, true));
    }

    // Partition by first committee member. Workers report (score, winners,
    // tie_count) and are merged in ascending first-member order, which keeps
    // the result bit-identical to the sequential enumeration.
    let firsts: Vec<usize> = (0..=m - k).collect();
    let chunk = firsts.len().div_ceil(threads);
    let mut partials: Vec<Result<Best, WinnerError>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = firsts
            .chunks(chunk)
            .map(|assigned| {
                scope.spawn(move || {
                    let mut best = Best::new();
                    for &f in assigned {
                        let mut err = None;
                        for_each_committee(m - f - 1, k - 1, |rest| {
                            let mut c = Vec::with_capacity(k);
                            c.push(f);
                            c.extend(rest.iter().map(|&r| r + f + 1));
                            let committee = Committee::new(c.clone()).expect("valid");
                            match committee_score(evaluator, election, &committee) {
                                Ok(s) => {
                                    best.offer(&c, s);
                                    true
                                }
                                Err(e) => {
                                    err = Some(e);
                                    false
                                }
                            }
                        });
                        if let Some(e) = err {
                            return Err(WinnerError::from(e));
                        }
                    }
                    Ok(best)
                })
            })
            .collect();
        for h in handles {
            partials.push(h.join().expect("worker panicked"));
        }
    });

    let mut merged = Best::new();
    for partial in partials {
        let partial = partial?;
        let Some(score) = partial.score else { continue };
        match merged.score {
            Some(best) if score < best => {}
            Some(best) if score == best => {
                for w in partial.winners {
                    if merged.winners.len() < TIE_CAP {
                        merged.winners.push(w);
                    }
                }
                merged.tie_count += partial.tie_count;
            }
            _ => {
                merged.score = Some(score);
                merged.winners = partial.winners;
                merged.tie_count = partial.tie_count;
            }
        }
    }
    Ok(merged.finish(Algorithm::BruteForce, true))
}

/// Winners of a weakly separable rule: each candidate's gamma-score is
/// computed in one pass and the winners are the committees of the k highest
/// scorers (expanding boundary ties).
pub fn separable_winners(
    gamma: &crate::scoring::SingleWinnerScoring,
    election: &Election,
    k: usize,
) -> Result<WinnerResult, WinnerError> {
    let m = election.num_candidates();
    if k > m {
        return Err(WinnerError::KTooLarge { k, m });
    }
    if gamma.m() != m {
        return Err(ScoringError::ElectionSize { got: m, expected: gamma.m() }.into());
    }
    let mut scores = vec![Score::zero(); m];
    for vote in election.votes() {
        for (pos, &c) in vote.iter().enumerate() {
            scores[c] += gamma.at(pos + 1);
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));

    let threshold = scores[order[k - 1]];
    let above: Vec<usize> = (0..m).filter(|&c| scores[c] > threshold).collect();
    let border: Vec<usize> = (0..m).filter(|&c| scores[c] == threshold).collect();
    let need = k - above.len();
    let best_score: Score = above.iter().map(|&c| scores[c]).sum::<Score>()
        + threshold * Score::from_integer(need as i64);

    let tie_sets = binomial(border.len(), need);
    let mut winners = Vec::new();
    let truncated = tie_sets > TIE_CAP as u128;
    if truncated {
        let mut members = above.clone();
        members.extend(border[..need].iter().copied());
        winners.push(Committee::new(members).expect("valid"));
    } else {
        for_each_committee(border.len(), need, |sel| {
            let mut members = above.clone();
            members.extend(sel.iter().map(|&i| border[i]));
            winners.push(Committee::new(members).expect("valid"));
            true
        });
        winners.sort();
    }
    Ok(WinnerResult {
        winners,
        best_score,
        algorithm: Algorithm::Separable,
        exact: true,
        truncated,
    })
}

/// Perfectionist winners: only voters' top-k prefixes can score, so at most n
/// committees are evaluated.
pub fn perfectionist_winners(election: &Election, k: usize) -> Result<WinnerResult, WinnerError> {
    let m = election.num_candidates();
    if k > m {
        return Err(WinnerError::KTooLarge { k, m });
    }
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for vote in election.votes() {
        let mut prefix = vote[..k].to_vec();
        prefix.sort_unstable();
        *counts.entry(prefix).or_insert(0) += 1;
    }
    let best = *counts.values().max().expect("n >= 1");
    let mut winners: Vec<Committee> = counts
        .iter()
        .filter(|(_, &c)| c == best)
        .map(|(members, _)| Committee::new(members.clone()).expect("valid"))
        .collect();
    winners.sort();
    Ok(WinnerResult::new(
        winners,
        Score::from_integer(best as i64),
        Algorithm::Perfectionist,
        true,
    ))
}

/// Winners of a top-k-counting rule whose singularity is within `q` of k.
///
/// Follows the two-case scheme: committees giving some voter at least
/// `sing(g)` of her top-k candidates are enumerated directly; otherwise the
/// rule behaves linearly and the Bloc winner is evaluated. For convex g this
/// is provably optimal. For non-convex g the linear-regime bound
/// `d1 * blocmax` can exceed everything found, in which case we fall back to
/// brute force so the result still equals the oracle.
pub fn near_perfectionist_winners(
    g: &CountingFunction,
    election: &Election,
    k: usize,
    q: usize,
) -> Result<WinnerResult, WinnerError> {
    let m = election.num_candidates();
    if k > m {
        return Err(WinnerError::KTooLarge { k, m });
    }
    let evaluator = ScoringEvaluator::TopKCounting { m, g: g.clone() };
    if evaluator.k() != k {
        return Err(ScoringError::CommitteeSize { got: k, expected: evaluator.k() }.into());
    }

    let sing = if k < 2 { Singularity::Infinite } else { singularity(g)? };
    let sing = match sing {
        // linear g: the rule is Bloc up to scale
        Singularity::Infinite => {
            let bloc = separable_winners(&crate::scoring::SingleWinnerScoring::alpha(m, k), election, k)?;
            let best_score = committee_score(&evaluator, election, &bloc.winners[0])?;
            return Ok(WinnerResult {
                winners: bloc.winners,
                best_score,
                algorithm: Algorithm::NearPerfectionist,
                exact: true,
                truncated: bloc.truncated,
            });
        }
        Singularity::Finite(s) => s,
    };
    let gap = k - sing;
    if gap > q {
        return Err(WinnerError::NearPerfectionist { gap, q });
    }
    if 2 * q >= k {
        // k <= 2q is constant-sized; brute force as in the proof
        let mut result = brute_force_winners(&evaluator, election, k)?;
        result.algorithm = Algorithm::NearPerfectionist;
        return Ok(result);
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut best = Best::new();
    // case 1: some voter has >= sing of her top-k candidates in the committee
    for vote in election.votes() {
        let top: Vec<usize> = vote[..k].to_vec();
        let rest: Vec<usize> = {
            let top_set: HashSet<usize> = top.iter().copied().collect();
            (0..m).filter(|c| !top_set.contains(c)).collect()
        };
        for t in sing..=k {
            for_each_committee(k, t, |sel_top| {
                let chosen_top: Vec<usize> = sel_top.iter().map(|&i| top[i]).collect();
                for_each_committee(rest.len(), k - t, |sel_rest| {
                    let mut members: Vec<usize> = chosen_top.clone();
                    members.extend(sel_rest.iter().map(|&i| rest[i]));
                    members.sort_unstable();
                    if seen.insert(members.clone()) {
                        let committee = Committee::new(members.clone()).expect("valid");
                        let s = committee_score(&evaluator, election, &committee)
                            .expect("sizes match");
                        best.offer(&members, s);
                    }
                    true
                });
                true
            });
        }
    }

    // case 2: all voters below the singularity, where g is linear; the Bloc
    // winner dominates that regime
    let bloc = separable_winners(&crate::scoring::SingleWinnerScoring::alpha(m, k), election, k)?;
    for w in &bloc.winners {
        let s = committee_score(&evaluator, election, w)?;
        best.offer(w.members(), s);
    }

    // admissible bound on any committee living entirely in the linear regime
    let d1 = g.at(1) - g.at(0);
    let linear_bound = d1 * bloc.best_score;
    let found = best.score.expect("nonempty");
    if !is_convex(g) && found < linear_bound {
        // the two-case argument is only conclusive for convex g; stay exact
        let mut result = brute_force_winners(&evaluator, election, k)?;
        result.algorithm = Algorithm::NearPerfectionist;
        return Ok(result);
    }
    let mut result = best.finish(Algorithm::NearPerfectionist, true);
    result.winners.sort();
    Ok(result)
}

/// Greedy (1 - 1/e)-approximation for concave counting functions: repeatedly
/// add the candidate with the largest marginal gain, breaking ties by lowest
/// index.
pub fn greedy_concave(
    g: &CountingFunction,
    election: &Election,
    k: usize,
) -> Result<WinnerResult, WinnerError> {
    if !is_concave(g) {
        return Err(WinnerError::NotConcave);
    }
    let m = election.num_candidates();
    if k > m {
        return Err(WinnerError::KTooLarge { k, m });
    }
    if g.k() != k {
        return Err(ScoringError::CommitteeSize { got: k, expected: g.k() }.into());
    }

    // voters that rank each candidate in their top k
    let mut approvers: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, vote) in election.votes().iter().enumerate() {
        for &c in &vote[..k] {
            approvers[c].push(v);
        }
    }

    let mut counts = vec![0usize; election.num_voters()];
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut total = Score::zero();
    for _ in 0..k {
        let mut best_gain: Option<(Score, usize)> = None;
        for c in 0..m {
            if chosen.contains(&c) {
                continue;
            }
            let gain: Score =
                approvers[c].iter().map(|&v| g.at(counts[v] + 1) - g.at(counts[v])).sum();
            match best_gain {
                Some((bg, _)) if gain <= bg => {}
                _ => best_gain = Some((gain, c)),
            }
        }
        let (gain, c) = best_gain.expect("k <= m");
        for &v in &approvers[c] {
            counts[v] += 1;
        }
        chosen.push(c);
        total += gain;
    }
    let committee = Committee::new(chosen).expect("valid");
    Ok(WinnerResult::new(vec![committee], total, Algorithm::GreedyConcave, false))
}

/// True iff some size-k committee scores at least `threshold`.
pub fn exists_committee_with_score(
    evaluator: &ScoringEvaluator,
    election: &Election,
    k: usize,
    threshold: Score,
) -> Result<bool, WinnerError> {
    exists_committee_with_score_capped(evaluator, election, k, threshold, DEFAULT_ENUMERATION_CAP)
}

pub fn exists_committee_with_score_capped(
    evaluator: &ScoringEvaluator,
    election: &Election,
    k: usize,
    threshold: Score,
    cap: u128,
) -> Result<bool, WinnerError> {
    let m = election.num_candidates();
    check_cap(m, k, cap)?;
    if evaluator.k() != k {
        return Err(ScoringError::CommitteeSize { got: k, expected: evaluator.k() }.into());
    }
    let mut found = false;
    let mut err = None;
    for_each_committee(m, k, |c| {
        let committee = Committee::new(c.to_vec()).expect("valid");
        match committee_score(evaluator, election, &committee) {
            Ok(s) => {
                if s >= threshold {
                    found = true;
                    return false;
                }
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(found)
}

/// Exact maximum top-k-counting score over all size-k committees, for
/// elections in which a designated set of "private" candidates each appear in
/// the top k of at most one voter.
///
/// The reduction-generated elections are far too large for committee
/// enumeration, but private candidates of one voter are interchangeable and
/// candidates of different voters interact only through that voter's count.
/// Enumerating subsets of the shared candidates and allocating the remaining
/// slots to private candidates with an exact dynamic program therefore covers
/// every committee up to a score-preserving symmetry.
pub fn max_score_with_private_candidates(
    g: &CountingFunction,
    election: &Election,
    k: usize,
    is_private: &[bool],
) -> Result<Score, WinnerError> {
    let m = election.num_candidates();
    assert_eq!(is_private.len(), m);
    if k > m {
        return Err(WinnerError::KTooLarge { k, m });
    }
    if g.k() != k {
        return Err(ScoringError::CommitteeSize { got: k, expected: g.k() }.into());
    }

    // check the privacy precondition and collect per-voter structure
    let mut private_seen = vec![false; m];
    #[derive(PartialEq, Eq, Hash)]
    struct VoterShape {
        shared_top: Vec<usize>,
        private_slots: usize,
    }
    let mut classes: HashMap<VoterShape, usize> = HashMap::new();
    for vote in election.votes() {
        let mut shared_top = Vec::new();
        let mut private_slots = 0;
        for &c in &vote[..k] {
            if is_private[c] {
                assert!(!private_seen[c], "private candidate in two voters' top k");
                private_seen[c] = true;
                private_slots += 1;
            } else {
                shared_top.push(c);
            }
        }
        shared_top.sort_unstable();
        *classes.entry(VoterShape { shared_top, private_slots }).or_insert(0) += 1;
    }

    let shared: Vec<usize> =
        (0..m).filter(|&c| !is_private[c]).filter(|&c| election.votes().iter().any(|v| v[..k].contains(&c))).collect();
    assert!(
        shared.len() <= 24,
        "too many shared candidates for subset enumeration ({})",
        shared.len()
    );
    let classes: Vec<(VoterShape, usize)> = classes.into_iter().collect();

    // for padding: committee slots may also go to candidates outside every
    // top k (zero gain); private capacity plus those is always sufficient
    let mut best = Score::zero();
    for mask in 0u32..(1u32 << shared.len()) {
        let size = mask.count_ones() as usize;
        if size > k {
            continue;
        }
        let budget = k - size;
        let picked: Vec<usize> =
            (0..shared.len()).filter(|&i| mask >> i & 1 == 1).map(|i| shared[i]).collect();

        // per class: base score and the best gain from t private picks
        let mut class_gains: Vec<Vec<Score>> = Vec::with_capacity(classes.len());
        let mut base = Score::zero();
        for (shape, count) in &classes {
            let x = shape.shared_top.iter().filter(|c| picked.contains(c)).count();
            base += g.at(x) * Score::from_integer(*count as i64);
            // gain(j) for one voter of this class
            let cap = shape.private_slots.min(budget);
            let gain: Vec<Score> = (0..=cap).map(|j| g.at(x + j) - g.at(x)).collect();
            // best total gain from t picks spread over up to `count` voters
            let mut per_t = vec![Score::zero(); budget + 1];
            // dp over number of voters used (at most budget voters matter)
            let voters = (*count).min(budget);
            let mut dp = vec![Score::zero(); budget + 1];
            for _ in 0..voters {
                let mut next = dp.clone();
                for t in 0..=budget {
                    for j in 1..=cap.min(t) {
                        let cand = dp[t - j] + gain[j];
                        if cand > next[t] {
                            next[t] = cand;
                        }
                    }
                }
                dp = next;
            }
            for t in 0..=budget {
                per_t[t] = dp[t];
            }
            class_gains.push(per_t);
        }

        // combine classes under the shared budget
        let mut dp = vec![Score::zero(); budget + 1];
        for per_t in &class_gains {
            let mut next = dp.clone();
            for t in 0..=budget {
                for (j, &gj) in per_t.iter().enumerate().take(t + 1).skip(1) {
                    let cand = dp[t - j] + gj;
                    if cand > next[t] {
                        next[t] = cand;
                    }
                }
            }
            dp = next;
        }
        let total = base + dp[budget];
        if total > best {
            best = total;
        }
    }
    Ok(best)
}
