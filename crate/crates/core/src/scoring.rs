//! Committee scoring functions: counting functions, OWA conversion,
//! structural analysis and the built-in rules.
//!
//! All scores are exact nonnegative rationals. The paper-facing objects are:
//! a `CountingFunction` g (with g(0) = 0) defines a top-k-counting rule; a
//! `SingleWinnerScoring` gamma is a nonincreasing position-scoring vector; an
//! `OwaOperator` weights a committee's sorted per-member scores.

use std::collections::HashMap;
use std::fmt;

use num::rational::Ratio;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::election::{
    committee_positions, for_each_committee, Committee, Election, PositionSequence,
};

pub type Score = Ratio<i64>;

pub fn score_int(v: i64) -> Score {
    Ratio::from_integer(v)
}

/// Largest `m` for which `Tabulated` evaluators are allowed; the
/// construction-time monotonicity check enumerates all of `[m]_k`.
pub const TABULATED_MAX_M: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoringError {
    #[error("counting function must start at 0, be nondecreasing and nonnegative")]
    BadCountingFunction,
    #[error("scoring vector must be nonincreasing and nonnegative")]
    BadGamma,
    #[error("OWA operator entries must be nonnegative")]
    BadOwa,
    #[error("singularity requires k >= 2")]
    KTooSmall,
    #[error("position sequence has length {got}, evaluator expects k = {expected}")]
    SequenceLength { got: usize, expected: usize },
    #[error("position {0} out of range for m = {1}")]
    PositionOutOfRange(usize, usize),
    #[error("committee size {got} does not match evaluator k = {expected}")]
    CommitteeSize { got: usize, expected: usize },
    #[error("election has {got} candidates, evaluator expects m = {expected}")]
    ElectionSize { got: usize, expected: usize },
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("alpha_t-PAV requires a t parameter with t <= m")]
    BadPavParameter,
    #[error("tabulated evaluators are limited to m <= {TABULATED_MAX_M}")]
    TabulatedTooLarge,
    #[error("tabulated scores are missing an entry for {0:?}")]
    TabulatedIncomplete(Vec<usize>),
    #[error("tabulated scores violate dominance monotonicity at {0:?} vs {1:?}")]
    TabulatedNotMonotone(Vec<usize>, Vec<usize>),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// A single-winner scoring vector gamma(1) >= ... >= gamma(m) >= 0 (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleWinnerScoring {
    gamma: Vec<Score>,
}

impl SingleWinnerScoring {
    pub fn new(gamma: Vec<Score>) -> Result<Self, ScoringError> {
        let nonincreasing = gamma.windows(2).all(|w| w[0] >= w[1]);
        let nonnegative = gamma.iter().all(|x| !x.is_negative());
        if gamma.is_empty() || !nonincreasing || !nonnegative {
            return Err(ScoringError::BadGamma);
        }
        Ok(SingleWinnerScoring { gamma })
    }

    /// t-Approval: 1 for the first t positions, 0 after.
    pub fn alpha(m: usize, t: usize) -> Self {
        let gamma = (1..=m).map(|i| if i <= t { Score::one() } else { Score::zero() }).collect();
        SingleWinnerScoring { gamma }
    }

    /// Borda: position i scores m - i.
    pub fn borda(m: usize) -> Self {
        let gamma = (1..=m).map(|i| score_int((m - i) as i64)).collect();
        SingleWinnerScoring { gamma }
    }

    pub fn m(&self) -> usize {
        self.gamma.len()
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> Score {
        self.gamma[i - 1]
    }
}

/// The sequence g(0..k) defining a top-k-counting rule. g(0) = 0 and g is
/// nondecreasing and nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountingFunction {
    values: Vec<Score>,
}

impl CountingFunction {
    pub fn new(values: Vec<Score>) -> Result<Self, ScoringError> {
        if values.is_empty() || !values[0].is_zero() {
            return Err(ScoringError::BadCountingFunction);
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(ScoringError::BadCountingFunction);
        }
        Ok(CountingFunction { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, ScoringError> {
        CountingFunction::new(values.iter().map(|&v| score_int(v)).collect())
    }

    /// Parses the CLI form `0,1,1,2` with rationals written `p/q`.
    pub fn parse(text: &str) -> Result<Self, ScoringError> {
        let values = text.split(',').map(|s| parse_rational(s.trim())).collect::<Result<_, _>>()?;
        CountingFunction::new(values)
    }

    pub fn k(&self) -> usize {
        self.values.len() - 1
    }

    pub fn at(&self, x: usize) -> Score {
        self.values[x]
    }

    pub fn values(&self) -> &[Score] {
        &self.values
    }

    /// g(i) - g(i-1) for i in 1..=k.
    pub fn differentials(&self) -> Vec<Score> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_linear(&self) -> bool {
        let d = self.differentials();
        d.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn parse_rational(s: &str) -> Result<Score, ScoringError> {
    let bad = || ScoringError::BadRational(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Ratio::new(p, q))
    } else {
        let p: i64 = s.parse().map_err(|_| bad())?;
        Ok(score_int(p))
    }
}

pub fn format_rational(x: Score) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// An OWA operator: k nonnegative weights applied to a committee's sorted
/// per-member scores. No unit-sum requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwaOperator {
    lambdas: Vec<Score>,
}

impl OwaOperator {
    pub fn new(lambdas: Vec<Score>) -> Result<Self, ScoringError> {
        if lambdas.is_empty() || lambdas.iter().any(|x| x.is_negative()) {
            return Err(ScoringError::BadOwa);
        }
        Ok(OwaOperator { lambdas })
    }

    /// The PAV weights (1, 1/2, ..., 1/k).
    pub fn harmonic(k: usize) -> Self {
        OwaOperator { lambdas: (1..=k as i64).map(|t| Ratio::new(1, t)).collect() }
    }

    pub fn k(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Score] {
        &self.lambdas
    }
}

/// Converts a counting function to the OWA operator of its rule: the vector
/// of differentials (g(1)-g(0), ..., g(k)-g(k-1)). Applying that operator to
/// k-Approval scores reproduces the top-k-counting rule pointwise.
pub fn counting_to_owa(g: &CountingFunction) -> OwaOperator {
    OwaOperator { lambdas: g.differentials() }
}

/// Where the differential of g first changes, or infinite for linear g.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::Finite(i) => write!(f, "{i}"),
            Singularity::Infinite => write!(f, "inf"),
        }
    }
}

/// Smallest i in {2..k} with g(i)-g(i-1) != g(i-1)-g(i-2); `Infinite` when
/// the differential never changes (the Bloc family).
pub fn singularity(g: &CountingFunction) -> Result<Singularity, ScoringError> {
    if g.k() < 2 {
        return Err(ScoringError::KTooSmall);
    }
    let d = g.differentials();
    for i in 2..=g.k() {
        if d[i - 1] != d[i - 2] {
            return Ok(Singularity::Finite(i));
        }
    }
    Ok(Singularity::Infinite)
}

/// Nondecreasing differentials. Vacuously true for k < 2.
pub fn is_convex(g: &CountingFunction) -> bool {
    g.differentials().windows(2).all(|w| w[1] >= w[0])
}

/// Nonincreasing differentials. Vacuously true for k < 2.
pub fn is_concave(g: &CountingFunction) -> bool {
    g.differentials().windows(2).all(|w| w[1] <= w[0])
}

/// Number of committee members the vote ranks in positions 1..=k.
pub fn top_k_count(vote: &[usize], committee: &Committee, k: usize) -> usize {
    vote[..k.min(vote.len())].iter().filter(|&&c| committee.contains(c)).count()
}

/// A concrete committee scoring function f_{m,k}, with the pair (m, k) fixed
/// at construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoringEvaluator {
    TopKCounting { m: usize, g: CountingFunction },
    WeaklySeparable { k: usize, gamma: SingleWinnerScoring },
    RepresentationFocused { k: usize, gamma: SingleWinnerScoring },
    OwaBased { lambdas: OwaOperator, gamma: SingleWinnerScoring },
    Tabulated { m: usize, k: usize, table: HashMap<Vec<usize>, Score> },
}

impl ScoringEvaluator {
    pub fn m(&self) -> usize {
        match self {
            ScoringEvaluator::TopKCounting { m, .. } => *m,
            ScoringEvaluator::WeaklySeparable { gamma, .. } => gamma.m(),
            ScoringEvaluator::RepresentationFocused { gamma, .. } => gamma.m(),
            ScoringEvaluator::OwaBased { gamma, .. } => gamma.m(),
            ScoringEvaluator::Tabulated { m, .. } => *m,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            ScoringEvaluator::TopKCounting { g, .. } => g.k(),
            ScoringEvaluator::WeaklySeparable { k, .. } => *k,
            ScoringEvaluator::RepresentationFocused { k, .. } => *k,
            ScoringEvaluator::OwaBased { lambdas, .. } => lambdas.k(),
            ScoringEvaluator::Tabulated { k, .. } => *k,
        }
    }

    /// Builds a tabulated evaluator, validating dominance monotonicity
    /// exhaustively (hence the m <= 10 limit). The table must cover all of
    /// `[m]_k`.
    pub fn tabulated(
        m: usize,
        k: usize,
        table: HashMap<Vec<usize>, Score>,
    ) -> Result<Self, ScoringError> {
        if m > TABULATED_MAX_M {
            return Err(ScoringError::TabulatedTooLarge);
        }
        let mut err = None;
        for_each_committee(m, k, |c| {
            let seq: Vec<usize> = c.iter().map(|&i| i + 1).collect();
            let Some(&v) = table.get(&seq) else {
                err = Some(ScoringError::TabulatedIncomplete(seq));
                return false;
            };
            // check every covering pair: lower one coordinate by 1
            for t in 0..k {
                if seq[t] > 1 && (t == 0 || seq[t - 1] < seq[t] - 1) {
                    let mut dom = seq.clone();
                    dom[t] -= 1;
                    match table.get(&dom) {
                        Some(&w) if w >= v => {}
                        Some(_) => {
                            err = Some(ScoringError::TabulatedNotMonotone(dom, seq.clone()));
                            return false;
                        }
                        None => {
                            err = Some(ScoringError::TabulatedIncomplete(dom));
                            return false;
                        }
                    }
                }
            }
            true
        });
        match err {
            Some(e) => Err(e),
            None => Ok(ScoringEvaluator::Tabulated { m, k, table }),
        }
    }

    /// Converts any evaluator at small (m, k) into a tabulated one.
    pub fn tabulate(&self) -> Result<Self, ScoringError> {
        let (m, k) = (self.m(), self.k());
        if m > TABULATED_MAX_M {
            return Err(ScoringError::TabulatedTooLarge);
        }
        let mut table = HashMap::new();
        let mut err = None;
        for_each_committee(m, k, |c| {
            let seq: Vec<usize> = c.iter().map(|&i| i + 1).collect();
            let ps = PositionSequence::new(seq.clone(), m).expect("valid sequence");
            match self.eval(&ps) {
                Ok(v) => {
                    table.insert(seq, v);
                    true
                }
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(ScoringEvaluator::Tabulated { m, k, table }),
        }
    }

    /// The score f_{m,k}(I) of one position sequence.
    pub fn eval(&self, seq: &PositionSequence) -> Result<Score, ScoringError> {
        let (m, k) = (self.m(), self.k());
        if seq.len() != k {
            return Err(ScoringError::SequenceLength { got: seq.len(), expected: k });
        }
        if let Some(&p) = seq.positions().iter().find(|&&p| p < 1 || p > m) {
            return Err(ScoringError::PositionOutOfRange(p, m));
        }
        let positions = seq.positions();
        Ok(match self {
            ScoringEvaluator::TopKCounting { g, .. } => {
                let count = positions.iter().filter(|&&p| p <= k).count();
                g.at(count)
            }
            ScoringEvaluator::WeaklySeparable { gamma, .. } => {
                positions.iter().map(|&p| gamma.at(p)).sum()
            }
            ScoringEvaluator::RepresentationFocused { gamma, .. } => gamma.at(positions[0]),
            ScoringEvaluator::OwaBased { lambdas, gamma } => lambdas
                .lambdas()
                .iter()
                .zip(positions)
                .map(|(&l, &p)| l * gamma.at(p))
                .sum(),
            ScoringEvaluator::Tabulated { table, .. } => *table
                .get(positions)
                .ok_or_else(|| ScoringError::TabulatedIncomplete(positions.to_vec()))?,
        })
    }

    /// For top-k-counting evaluators, the counting function.
    pub fn counting_function(&self) -> Option<&CountingFunction> {
        match self {
            ScoringEvaluator::TopKCounting { g, .. } => Some(g),
            _ => None,
        }
    }

    /// The gamma vector for weakly separable evaluators.
    pub fn separable_gamma(&self) -> Option<&SingleWinnerScoring> {
        match self {
            ScoringEvaluator::WeaklySeparable { gamma, .. } => Some(gamma),
            _ => None,
        }
    }
}

/// Total score a committee receives: the sum over voters of f(pos_v(S)).
pub fn committee_score(
    evaluator: &ScoringEvaluator,
    election: &Election,
    committee: &Committee,
) -> Result<Score, ScoringError> {
    if election.num_candidates() != evaluator.m() {
        return Err(ScoringError::ElectionSize {
            got: election.num_candidates(),
            expected: evaluator.m(),
        });
    }
    if committee.size() != evaluator.k() {
        return Err(ScoringError::CommitteeSize { got: committee.size(), expected: evaluator.k() });
    }
    let mut total = Score::zero();
    // fast path for top-k-counting rules: only the count matters
    if let ScoringEvaluator::TopKCounting { g, .. } = evaluator {
        let k = evaluator.k();
        for vote in election.votes() {
            total += g.at(top_k_count(vote, committee, k));
        }
        return Ok(total);
    }
    for vote in election.votes() {
        total += evaluator.eval(&committee_positions(vote, committee))?;
    }
    Ok(total)
}

/// Reads the counting function off an evaluator by probing the I_t sequences
/// (1..t, k+1..2k-t), then checks that the evaluator really depends only on
/// the number of positions <= k. Requires m >= 2k. Returns `None` when the
/// evaluator is not top-k-counting-shaped.
pub fn induced_counting_function(
    evaluator: &ScoringEvaluator,
) -> Result<Option<CountingFunction>, ScoringError> {
    let (m, k) = (evaluator.m(), evaluator.k());
    assert!(m >= 2 * k, "induced_counting_function requires m >= 2k");
    let mut values = Vec::with_capacity(k + 1);
    for t in 0..=k {
        let mut seq: Vec<usize> = (1..=t).collect();
        seq.extend(k + 1..=k + (k - t));
        let ps = PositionSequence::new(seq, m).expect("I_t is valid for m >= 2k");
        values.push(evaluator.eval(&ps)?);
    }
    let base = values[0];
    // normalize so that g(0) = 0; a shape check, not a rescaling of the rule
    let shifted: Vec<Score> = values.iter().map(|&v| v - base).collect();
    if shifted.iter().any(|v| v.is_negative()) || shifted.windows(2).any(|w| w[0] > w[1]) {
        return Ok(None);
    }
    if !base.is_zero() {
        return Ok(None);
    }
    let g = CountingFunction::new(shifted).expect("checked above");
    // verify the shape on all of [m]_k
    let mut shaped = true;
    let mut err = None;
    for_each_committee(m, k, |c| {
        let seq: Vec<usize> = c.iter().map(|&i| i + 1).collect();
        let count = seq.iter().filter(|&&p| p <= k).count();
        let ps = PositionSequence::new(seq, m).expect("valid");
        match evaluator.eval(&ps) {
            Ok(v) => {
                if v != g.at(count) {
                    shaped = false;
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
        return Err(e);
    }
    Ok(if shaped { Some(g) } else { None })
}

/// The built-in rules of the artifact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Sntv,
    Bloc,
    KBorda,
    BetaCc,
    AlphaKCc,
    Perfectionist,
    NearlyBloc,
    /// alpha_t-PAV with the given t.
    AlphaTPav(usize),
}

impl Rule {
    pub fn parse(name: &str, t: Option<usize>) -> Result<Self, ScoringError> {
        Ok(match name {
            "sntv" => Rule::Sntv,
            "bloc" => Rule::Bloc,
            "k-borda" | "kborda" => Rule::KBorda,
            "beta-cc" | "cc" => Rule::BetaCc,
            "cc-alpha" | "alpha-cc" | "alpha-k-cc" => Rule::AlphaKCc,
            "perfectionist" => Rule::Perfectionist,
            "nearly-bloc" | "nearlybloc" => Rule::NearlyBloc,
            "pav" | "alpha-t-pav" => Rule::AlphaTPav(t.ok_or(ScoringError::BadPavParameter)?),
            other => return Err(ScoringError::UnknownRule(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Sntv => "sntv",
            Rule::Bloc => "bloc",
            Rule::KBorda => "k-borda",
            Rule::BetaCc => "beta-cc",
            Rule::AlphaKCc => "cc-alpha",
            Rule::Perfectionist => "perfectionist",
            Rule::NearlyBloc => "nearly-bloc",
            Rule::AlphaTPav(_) => "pav",
        }
    }

    /// The counting function for the top-k-counting built-ins, `None` for the
    /// rules that are not top-k-counting.
    pub fn counting_function(&self, k: usize) -> Option<CountingFunction> {
        let values: Vec<Score> = match self {
            Rule::Bloc => (0..=k as i64).map(score_int).collect(),
            Rule::Perfectionist => {
                (0..=k).map(|x| if x == k { Score::one() } else { Score::zero() }).collect()
            }
            Rule::AlphaKCc => {
                (0..=k).map(|x| if x >= 1 { Score::one() } else { Score::zero() }).collect()
            }
            Rule::NearlyBloc => (0..=k as i64).map(|x| score_int((x - 1).max(0))).collect(),
            _ => return None,
        };
        Some(CountingFunction::new(values).expect("built-in counting functions are valid"))
    }
}

/// Instantiates a built-in rule for a concrete (m, k).
pub fn builtin(rule: Rule, m: usize, k: usize) -> Result<ScoringEvaluator, ScoringError> {
    Ok(match rule {
        Rule::Sntv => {
            ScoringEvaluator::RepresentationFocused { k, gamma: SingleWinnerScoring::alpha(m, 1) }
        }
        Rule::Bloc => {
            ScoringEvaluator::WeaklySeparable { k, gamma: SingleWinnerScoring::alpha(m, k) }
        }
        Rule::KBorda => {
            ScoringEvaluator::WeaklySeparable { k, gamma: SingleWinnerScoring::borda(m) }
        }
        Rule::BetaCc => {
            ScoringEvaluator::RepresentationFocused { k, gamma: SingleWinnerScoring::borda(m) }
        }
        Rule::AlphaKCc | Rule::Perfectionist | Rule::NearlyBloc => ScoringEvaluator::TopKCounting {
            m,
            g: rule.counting_function(k).expect("top-k-counting built-in"),
        },
        Rule::AlphaTPav(t) => {
            if t > m {
                return Err(ScoringError::BadPavParameter);
            }
            ScoringEvaluator::OwaBased {
                lambdas: OwaOperator::harmonic(k),
                gamma: SingleWinnerScoring::alpha(m, t),
            }
        }
    })
}
