//! Core election data structures and position arithmetic.
//!
//! Candidates are 0-based indices into a label table; all algorithms work on
//! indices. Positions in a vote are 1-based (the top candidate has position 1).

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElectionError {
    #[error("election must have at least one candidate and one voter")]
    Empty,
    #[error("vote {vote} is not a permutation of the candidates")]
    NotAPermutation { vote: usize },
    #[error("candidate index {index} out of range (m = {m})")]
    CandidateOutOfRange { index: usize, m: usize },
    #[error("committee is not a strictly increasing sequence of candidate indices")]
    BadCommittee,
    #[error("position sequence is not strictly increasing within [1, {m}]")]
    BadPositionSequence { m: usize },
    #[error("position sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An election: a candidate roster and one strict preference order per voter.
///
/// Each vote is a permutation of `0..m`, most-preferred candidate first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    candidates: Vec<String>,
    votes: Vec<Vec<usize>>,
}

impl Election {
    pub fn new(candidates: Vec<String>, votes: Vec<Vec<usize>>) -> Result<Self, ElectionError> {
        if candidates.is_empty() || votes.is_empty() {
            return Err(ElectionError::Empty);
        }
        let m = candidates.len();
        for (i, vote) in votes.iter().enumerate() {
            if !is_permutation(vote, m) {
                return Err(ElectionError::NotAPermutation { vote: i });
            }
        }
        Ok(Election { candidates, votes })
    }

    /// Builds an election with generated labels `c1..cm`.
    pub fn from_votes(m: usize, votes: Vec<Vec<usize>>) -> Result<Self, ElectionError> {
        let labels = (1..=m).map(|i| format!("c{i}")).collect();
        Election::new(labels, votes)
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_voters(&self) -> usize {
        self.votes.len()
    }

    pub fn candidate_labels(&self) -> &[String] {
        &self.candidates
    }

    pub fn label(&self, candidate: usize) -> &str {
        &self.candidates[candidate]
    }

    pub fn candidate_by_label(&self, label: &str) -> Option<usize> {
        self.candidates.iter().position(|l| l == label)
    }

    pub fn votes(&self) -> &[Vec<usize>] {
        &self.votes
    }

    pub fn vote(&self, i: usize) -> &[usize] {
        &self.votes[i]
    }
}

fn is_permutation(vote: &[usize], m: usize) -> bool {
    if vote.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &c in vote {
        if c >= m || seen[c] {
            return false;
        }
        seen[c] = true;
    }
    true
}

/// A size-k subset of candidates, kept as a strictly increasing index vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee {
    members: Vec<usize>,
}

impl Committee {
    pub fn new(mut members: Vec<usize>) -> Result<Self, ElectionError> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(ElectionError::BadCommittee);
        }
        Ok(Committee { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.members.binary_search(&candidate).is_ok()
    }

    pub fn labels(&self, election: &Election) -> Vec<String> {
        self.members.iter().map(|&c| election.label(c).to_string()).collect()
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A strictly increasing sequence of k positions from `[1, m]`: the sorted
/// positions a committee occupies in one vote.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionSequence {
    positions: Vec<usize>,
}

impl PositionSequence {
    pub fn new(positions: Vec<usize>, m: usize) -> Result<Self, ElectionError> {
        let increasing = positions.windows(2).all(|w| w[0] < w[1]);
        let in_range = positions.iter().all(|&p| p >= 1 && p <= m);
        if positions.is_empty() || !increasing || !in_range {
            return Err(ElectionError::BadPositionSequence { m });
        }
        Ok(PositionSequence { positions })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// 1-based position of `candidate` in `vote`.
pub fn position_of(vote: &[usize], candidate: usize) -> Result<usize, ElectionError> {
    vote.iter()
        .position(|&c| c == candidate)
        .map(|i| i + 1)
        .ok_or(ElectionError::CandidateOutOfRange { index: candidate, m: vote.len() })
}

/// Sorted 1-based positions of the committee members in `vote`.
pub fn committee_positions(vote: &[usize], committee: &Committee) -> PositionSequence {
    let m = vote.len();
    let mut positions: Vec<usize> = Vec::with_capacity(committee.size());
    for (i, &c) in vote.iter().enumerate() {
        if committee.contains(c) {
            positions.push(i + 1);
        }
    }
    PositionSequence::new(positions, m).expect("positions of a valid committee are well-formed")
}

/// Weak dominance of position sequences: `I` dominates `J` iff every entry of
/// `I` is <= the corresponding entry of `J`.
pub fn dominates(i: &PositionSequence, j: &PositionSequence) -> Result<bool, ElectionError> {
    if i.len() != j.len() {
        return Err(ElectionError::LengthMismatch(i.len(), j.len()));
    }
    Ok(i.positions().iter().zip(j.positions()).all(|(a, b)| a <= b))
}

/// An election together with the committee size it was written with.
///
/// The file format is UTF-8 text:
/// - line 1: `m n k`
/// - next `m` lines: candidate labels, one per line, no whitespace
/// - next `n` lines: full rankings as comma-separated labels, most-preferred
///   first
/// - lines starting with `#` are comments and are ignored
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionFile {
    pub election: Election,
    pub k: usize,
}

pub fn parse_election(text: &str) -> Result<ElectionFile, ElectionError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());

    let (header_no, header) = lines
        .next()
        .ok_or(ElectionError::Parse { line: 1, msg: "empty file".into() })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(ElectionError::Parse {
            line: header_no + 1,
            msg: format!("expected header `m n k`, got {header:?}"),
        });
    }
    let parse_num = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| ElectionError::Parse {
            line: header_no + 1,
            msg: format!("bad {what}: {s:?}"),
        })
    };
    let m = parse_num(parts[0], "candidate count")?;
    let n = parse_num(parts[1], "voter count")?;
    let k = parse_num(parts[2], "committee size")?;
    if m == 0 || n == 0 {
        return Err(ElectionError::Parse { line: header_no + 1, msg: "m and n must be >= 1".into() });
    }
    if k > m {
        return Err(ElectionError::Parse { line: header_no + 1, msg: format!("k = {k} > m = {m}") });
    }

    let mut candidates = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, line) = lines.next().ok_or(ElectionError::Parse {
            line: header_no + 1,
            msg: format!("expected {m} candidate lines"),
        })?;
        let label = line.trim();
        if label.contains(char::is_whitespace) {
            return Err(ElectionError::Parse {
                line: no + 1,
                msg: format!("candidate label may not contain whitespace: {label:?}"),
            });
        }
        if candidates.iter().any(|c: &String| c == label) {
            return Err(ElectionError::Parse {
                line: no + 1,
                msg: format!("duplicate candidate label {label:?}"),
            });
        }
        candidates.push(label.to_string());
    }

    let mut votes = Vec::with_capacity(n);
    for _ in 0..n {
        let (no, line) = lines.next().ok_or(ElectionError::Parse {
            line: header_no + 1,
            msg: format!("expected {n} vote lines"),
        })?;
        let mut vote = Vec::with_capacity(m);
        let mut seen = vec![false; m];
        for label in line.split(',') {
            let label = label.trim();
            let idx = candidates.iter().position(|c| c == label).ok_or_else(|| {
                ElectionError::Parse { line: no + 1, msg: format!("unknown candidate {label:?}") }
            })?;
            if seen[idx] {
                return Err(ElectionError::Parse {
                    line: no + 1,
                    msg: format!("vote repeats candidate {label:?}"),
                });
            }
            seen[idx] = true;
            vote.push(idx);
        }
        if vote.len() != m {
            return Err(ElectionError::Parse {
                line: no + 1,
                msg: format!("vote ranks {} of {m} candidates", vote.len()),
            });
        }
        votes.push(vote);
    }

    if let Some((no, _)) = lines.next() {
        return Err(ElectionError::Parse { line: no + 1, msg: "trailing content".into() });
    }

    let election = Election::new(candidates, votes)?;
    Ok(ElectionFile { election, k })
}

pub fn serialize_election(file: &ElectionFile) -> String {
    let e = &file.election;
    let mut out = String::new();
    out.push_str(&format!("{} {} {}\n", e.num_candidates(), e.num_voters(), file.k));
    for label in e.candidate_labels() {
        out.push_str(label);
        out.push('\n');
    }
    for vote in e.votes() {
        let line: Vec<&str> = vote.iter().map(|&c| e.label(c)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Lexicographic enumeration of all size-k subsets of `0..m`, calling `f` on
/// each. Returns early with `false` from `f` to stop.
pub fn for_each_committee(m: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    assert!(k <= m);
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 {
        f(&idx);
        return;
    }
    loop {
        if !f(&idx) {
            return;
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Number of size-k subsets of an m-element set, saturating at `u128::MAX`.
pub fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example1() -> Election {
        crate::fixtures::example1()
    }

    #[test]
    fn position_of_example1_votes() {
        let e = example1();
        let f = e.candidate_by_label("f").unwrap();
        let c = e.candidate_by_label("c").unwrap();
        assert_eq!(position_of(e.vote(0), f).unwrap(), 2);
        assert_eq!(position_of(e.vote(7), c).unwrap(), 8);
        // the first-listed candidate of any vote has position 1
        for v in e.votes() {
            assert_eq!(position_of(v, v[0]).unwrap(), 1);
        }
    }

    #[test]
    fn position_of_rejects_unknown_candidate() {
        let vote = vec![0, 1, 2];
        assert!(position_of(&vote, 5).is_err());
    }

    #[test]
    fn committee_positions_worked_case() {
        // vote a > b > c > d > e with S = {a, c, d}
        let vote = vec![0, 1, 2, 3, 4];
        let s = Committee::new(vec![0, 2, 3]).unwrap();
        assert_eq!(committee_positions(&vote, &s).positions(), &[1, 3, 4]);
    }

    #[test]
    fn committee_positions_top_k_prefix() {
        let e = example1();
        let k = 3;
        for v in e.votes() {
            let prefix = Committee::new(v[..k].to_vec()).unwrap();
            assert_eq!(committee_positions(v, &prefix).positions(), &[1, 2, 3]);
        }
    }

    #[test]
    fn committee_positions_example1_v3() {
        let e = example1();
        let g = e.candidate_by_label("g").unwrap();
        let h = e.candidate_by_label("h").unwrap();
        let s = Committee::new(vec![g, h]).unwrap();
        assert_eq!(committee_positions(e.vote(2), &s).positions(), &[4, 5]);
    }

    #[test]
    fn dominance_basics() {
        let ps = |v: Vec<usize>| PositionSequence::new(v, 10).unwrap();
        assert!(dominates(&ps(vec![1, 2]), &ps(vec![1, 2])).unwrap());
        assert!(dominates(&ps(vec![1, 3]), &ps(vec![2, 4])).unwrap());
        assert!(!dominates(&ps(vec![1, 5]), &ps(vec![2, 4])).unwrap());
        assert!(dominates(&ps(vec![1]), &ps(vec![1, 2])).is_err());
    }

    #[test]
    fn parse_single_candidate() {
        let file = parse_election("1 1 1\na\na\n").unwrap();
        assert_eq!(file.election.num_candidates(), 1);
        assert_eq!(file.election.num_voters(), 1);
    }

    #[test]
    fn parse_rejects_repeated_candidate_in_vote() {
        let err = parse_election("2 1 1\na\nb\na,a\n").unwrap_err();
        match err {
            ElectionError::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("repeats"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_unknown_label() {
        let err = parse_election("2 1 1\na\nb\na,x\n").unwrap_err();
        assert!(matches!(err, ElectionError::Parse { line: 4, .. }));
    }

    #[test]
    fn parse_skips_comments() {
        let file = parse_election("# hello\n2 1 1\na\nb\n# mid\nb,a\n").unwrap();
        assert_eq!(file.election.vote(0), &[1, 0]);
    }

    #[test]
    fn committee_enumeration_is_lexicographic() {
        let mut seen = Vec::new();
        for_each_committee(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(binomial(4, 2), 6);
    }
}
