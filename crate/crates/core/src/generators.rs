//! Instance generators: random profiles, planted fixed-majority profiles, and
//! the two hardness reductions (exact cover for alpha_k-CC, clique for convex
//! rules).

use num::integer::lcm;
use num::Zero;
use thiserror::Error;

use crate::election::{binomial, Committee, Election};
use crate::rng::SplitMix64;
use crate::scoring::{is_convex, singularity, CountingFunction, Score, Singularity};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("universe size {0} is not a multiple of 3")]
    BadUniverse(usize),
    #[error("set {0} does not have exactly 3 distinct in-range elements")]
    BadSet(usize),
    #[error("element {0} occurs in more than 3 sets")]
    TooManyOccurrences(usize),
    #[error("edge ({0}, {1}) is invalid (self-loop, duplicate or out of range)")]
    BadEdge(usize, usize),
    #[error("graph is not regular")]
    NotRegular,
    #[error("counting function is not convex")]
    NotConvex,
    #[error("counting function is linear; the reduction needs a singularity")]
    NoSingularity,
    #[error("singularity {sing} is too late: need (k - sing) * c >= k for k = {k}, c = {c}")]
    SingularityTooLate { k: usize, sing: usize, c: usize },
    #[error("counting function has k = {got}, the reduction needs k = (c+2)h = {expected}")]
    KMismatch { got: usize, expected: usize },
}

/// An exact-cover-by-3-sets instance: 3-element subsets of {0..3n'-1}, each
/// element occurring in at most 3 sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3cInstance {
    universe_size: usize,
    sets: Vec<[usize; 3]>,
}

impl X3cInstance {
    pub fn new(universe_size: usize, sets: Vec<[usize; 3]>) -> Result<Self, GeneratorError> {
        if universe_size == 0 || universe_size % 3 != 0 {
            return Err(GeneratorError::BadUniverse(universe_size));
        }
        let mut occurrences = vec![0usize; universe_size];
        for (i, s) in sets.iter().enumerate() {
            let mut sorted = *s;
            sorted.sort_unstable();
            if sorted[0] == sorted[1] || sorted[1] == sorted[2] || sorted[2] >= universe_size {
                return Err(GeneratorError::BadSet(i));
            }
            for &x in s {
                occurrences[x] += 1;
                if occurrences[x] > 3 {
                    return Err(GeneratorError::TooManyOccurrences(x));
                }
            }
        }
        Ok(X3cInstance { universe_size, sets })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn num_targets(&self) -> usize {
        self.universe_size / 3
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }
}

/// A simple undirected graph with normalized (low, high) edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GeneratorError> {
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            let e = (a.min(b), a.max(b));
            if a == b || e.1 >= vertex_count || normalized.contains(&e) {
                return Err(GeneratorError::BadEdge(a, b));
            }
            normalized.push(e);
        }
        Ok(Graph { vertex_count, edges: normalized })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.vertex_count).all(|v| self.degree(v) == d).then_some(d)
    }
}

/// `n` independent uniformly random votes, deterministic per seed.
pub fn gen_impartial_culture(m: usize, n: usize, seed: u64) -> Election {
    assert!(m >= 1 && n >= 1);
    let mut rng = SplitMix64::new(seed);
    let votes = (0..n).map(|_| rng.permutation(m)).collect();
    Election::from_votes(m, votes).expect("permutations are valid votes")
}

/// An election in which a planted committee W occupies the top k positions of
/// strictly more than half of the votes (in randomized internal order); the
/// remaining votes are uniformly random.
pub fn gen_fixed_majority_profile(
    m: usize,
    n: usize,
    k: usize,
    seed: u64,
) -> (Election, Committee) {
    assert!(k <= m && n >= 1 && k >= 1);
    let mut rng = SplitMix64::new(seed);
    let perm = rng.permutation(m);
    let mut members = perm[..k].to_vec();
    members.sort_unstable();
    let committee = Committee::new(members.clone()).expect("valid");
    let rest_pool: Vec<usize> = (0..m).filter(|c| !members.contains(c)).collect();

    let majority = n / 2 + 1;
    let mut votes = Vec::with_capacity(n);
    for _ in 0..majority {
        let mut top = members.clone();
        rng.shuffle(&mut top);
        let mut rest = rest_pool.clone();
        rng.shuffle(&mut rest);
        top.extend(rest);
        votes.push(top);
    }
    for _ in majority..n {
        votes.push(rng.permutation(m));
    }
    let election = Election::from_votes(m, votes).expect("permutations are valid votes");
    (election, committee)
}

/// The election emitted by [`gen_from_x3c`]: a committee of size `k` with
/// alpha_k-CC score >= `target_score` exists iff the instance has an exact
/// cover. `vacuous_no` flags universes with uncovered elements.
#[derive(Debug, Clone)]
pub struct X3cElection {
    pub election: Election,
    pub k: usize,
    pub target_score: Score,
    pub vacuous_no: bool,
}

fn complete_vote(top: Vec<usize>, m: usize, buffer: &mut Vec<bool>) -> Vec<usize> {
    buffer.clear();
    buffer.resize(m, false);
    for &c in &top {
        buffer[c] = true;
    }
    let mut vote = top;
    vote.extend((0..m).filter(|&c| !buffer[c]));
    vote
}

/// Exact-cover reduction: one candidate per set, one voter per universe
/// element; each voter ranks her containing sets first, then n' private
/// dummies, then everyone else. Committee size n', target score 3n' under
/// alpha_k-CC.
pub fn gen_from_x3c(instance: &X3cInstance) -> X3cElection {
    let n_prime = instance.num_targets();
    let n = instance.universe_size();
    let p = instance.sets().len();
    let m = p + n * n_prime;
    let mut labels: Vec<String> = (1..=p).map(|i| format!("S{i}")).collect();
    for voter in 1..=n {
        for i in 1..=n_prime {
            labels.push(format!("dummy_{voter}_{i}"));
        }
    }

    let mut vacuous_no = false;
    let mut buffer = Vec::new();
    let mut votes = Vec::with_capacity(n);
    for x in 0..n {
        let mut top: Vec<usize> = (0..p).filter(|&s| instance.sets()[s].contains(&x)).collect();
        if top.is_empty() {
            vacuous_no = true;
        }
        let dummies_start = p + x * n_prime;
        top.extend(dummies_start..dummies_start + n_prime);
        votes.push(complete_vote(top, m, &mut buffer));
    }
    let election = Election::new(labels, votes).expect("construction yields permutations");
    X3cElection {
        election,
        k: n_prime,
        target_score: Score::from_integer(3 * n_prime as i64),
        vacuous_no,
    }
}

/// Affine rescaling of a convex counting function: subtract the linear part
/// and scale so the pre-singularity differentials become 0 and the jump at
/// the singularity becomes 2, then clear denominators.
pub fn normalize_for_clique(g: &CountingFunction) -> Result<CountingFunction, GeneratorError> {
    if !is_convex(g) {
        return Err(GeneratorError::NotConvex);
    }
    let sing = match singularity(g).map_err(|_| GeneratorError::NoSingularity)? {
        Singularity::Finite(s) => s,
        Singularity::Infinite => return Err(GeneratorError::NoSingularity),
    };
    let d = g.differentials();
    let d1 = d[0];
    let jump = d[sing - 1] - d1;
    let scale = Score::from_integer(2) / jump;
    let values: Vec<Score> = (0..=g.k())
        .map(|x| (g.at(x) - d1 * Score::from_integer(x as i64)) * scale)
        .collect();
    let denom_lcm = values.iter().fold(1i64, |acc, v| lcm(acc, *v.denom()));
    let values = values
        .into_iter()
        .map(|v| v * Score::from_integer(denom_lcm))
        .collect();
    Ok(CountingFunction::new(values).expect("normalization preserves validity"))
}

/// The election emitted by [`gen_from_clique`]. `is_private` marks the dummy
/// candidates (each in the top k of exactly one voter), enabling the
/// symmetry-collapsed exact search.
#[derive(Debug, Clone)]
pub struct CliqueElection {
    pub election: Election,
    pub k: usize,
    pub target: Score,
    pub normalized_g: CountingFunction,
    pub fixed_no: bool,
    pub is_private: Vec<bool>,
}

/// Clique reduction for a convex rule with a late singularity: committee size
/// k = (c+2)h; a committee with score >= target exists iff the graph has a
/// size-h clique. Graphs with h > degree+1 yield a fixed no-instance.
pub fn gen_from_clique(
    graph: &Graph,
    h: usize,
    g: &CountingFunction,
    c: usize,
) -> Result<CliqueElection, GeneratorError> {
    let delta = graph.regular_degree().ok_or(GeneratorError::NotRegular)?;
    let k = (c + 2) * h;
    if g.k() != k {
        return Err(GeneratorError::KMismatch { got: g.k(), expected: k });
    }
    let g = normalize_for_clique(g)?;
    let sing = match singularity(&g).expect("k >= 2") {
        Singularity::Finite(s) => s,
        Singularity::Infinite => unreachable!("normalization keeps the singularity"),
    };
    if (k - sing) * c < k {
        return Err(GeneratorError::SingularityTooLate { k, sing, c });
    }

    if h > delta + 1 {
        // no size-h clique can exist; emit a fixed no-instance
        let election = Election::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1]],
        )
        .expect("valid");
        return Ok(CliqueElection {
            election,
            k: 1,
            target: Score::from_integer(2),
            normalized_g: CountingFunction::from_ints(&[0, 1]).expect("valid"),
            fixed_no: true,
            is_private: vec![false, false],
        });
    }

    let m_e = graph.edges().len();
    let gk = g.at(k);
    assert!(gk.is_integer() && !gk.is_zero());
    let gk = *gk.numer() as usize;

    let num_edge_fillers = sing - 2;
    let num_general_fillers = k - h - num_edge_fillers;
    let num_vertices = graph.vertex_count();
    let edge_voters = 2 * gk * m_e;
    let filler_voters = 2 * gk * (m_e + h) * gk;
    let shared = num_edge_fillers + num_general_fillers + num_vertices;
    let m = shared + edge_voters * (k - sing) + filler_voters * h;

    let mut labels: Vec<String> = Vec::with_capacity(m);
    labels.extend((1..=num_edge_fillers).map(|i| format!("c{i}")));
    labels.extend((1..=num_general_fillers).map(|i| format!("b{i}")));
    labels.extend((0..num_vertices).map(|v| format!("v{v}")));

    let edge_fillers: Vec<usize> = (0..num_edge_fillers).collect();
    let general_fillers: Vec<usize> =
        (num_edge_fillers..num_edge_fillers + num_general_fillers).collect();
    let vertex_base = num_edge_fillers + num_general_fillers;

    let mut votes: Vec<Vec<usize>> = Vec::with_capacity(edge_voters + filler_voters);
    let mut buffer = Vec::new();
    let mut next_dummy = shared;
    let mut voter_no = 0usize;
    let mut fresh_dummies = |count: usize, labels: &mut Vec<String>, voter_no: &mut usize| {
        *voter_no += 1;
        let start = next_dummy;
        for i in 1..=count {
            labels.push(format!("dummy_{}_{i}", *voter_no));
        }
        next_dummy += count;
        (start..start + count).collect::<Vec<usize>>()
    };

    for &(u, v) in graph.edges() {
        for _ in 0..2 * gk {
            let mut top = vec![vertex_base + u, vertex_base + v];
            top.extend(&edge_fillers);
            top.extend(fresh_dummies(k - sing, &mut labels, &mut voter_no));
            votes.push(top);
        }
    }
    for _ in 0..filler_voters {
        let mut top = edge_fillers.clone();
        top.extend(&general_fillers);
        top.extend(fresh_dummies(h, &mut labels, &mut voter_no));
        votes.push(top);
    }
    assert_eq!(labels.len(), m);
    let votes = votes
        .into_iter()
        .map(|top| complete_vote(top, m, &mut buffer))
        .collect();
    let election = Election::new(labels, votes).expect("construction yields permutations");

    let int = |x: usize| Score::from_integer(x as i64);
    let t1 = int(2 * gk * (m_e + h) * gk) * g.at(k - h);
    let t2 = int(2 * gk * m_e) * g.at(sing - 2);
    let t3 = int(2 * gk * delta * h) * (g.at(sing - 1) - g.at(sing - 2));
    let t4 = int(2 * gk) * Score::from_integer(binomial(h, 2) as i64)
        * (g.at(sing) - g.at(sing - 2)
            - Score::from_integer(2) * (g.at(sing - 1) - g.at(sing - 2)));
    let target = t1 + t2 + t3 + t4;

    let mut is_private = vec![false; m];
    for p in is_private.iter_mut().skip(shared) {
        *p = true;
    }
    Ok(CliqueElection { election, k, target, normalized_g: g, fixed_no: false, is_private })
}
