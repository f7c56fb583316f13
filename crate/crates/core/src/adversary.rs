//! Attack models: worst-case link removal (jamming) and position spoofing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    algebraic_connectivity, lambda2, remove_links, GraphError, Position, SpectralResult,
    WeightedGraph,
};

/// Subset count up to which [`SearchMode::Auto`] enumerates exhaustively.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u64 = 50_000;

/// Two removals whose attacked connectivity differs by less than this
/// (relative to max(1, lambda2)) are considered equally damaging.
pub const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("removal budget {budget} exceeds the {edges} links in the graph")]
    BudgetExceedsEdges { budget: usize, edges: usize },

    #[error("spoof target {target} out of range for {agents} agents")]
    InvalidTarget { target: usize, agents: usize },

    #[error("invalid spoof specification: {0}")]
    InvalidSpoof(String),

    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Maximum number of links the attacker may remove.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RemovalBudget(pub usize);

impl RemovalBudget {
    pub fn m(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Greedy,
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseResult {
    /// Edge indices into the attacked graph, ascending.
    pub removal: Vec<usize>,
    pub lambda2_after: f64,
    /// True when found by exhaustive enumeration.
    pub exact: bool,
}

pub fn worst_case_removal(
    g: &WeightedGraph,
    budget: RemovalBudget,
    mode: SearchMode,
) -> Result<WorstCaseResult, AdversaryError> {
    worst_case_removal_with_limit(g, budget, mode, DEFAULT_EXHAUSTIVE_LIMIT)
}

/// As [`worst_case_removal`] with an explicit exhaustive/greedy crossover
/// for [`SearchMode::Auto`].
pub fn worst_case_removal_with_limit(
    g: &WeightedGraph,
    budget: RemovalBudget,
    mode: SearchMode,
    exhaustive_limit: u64,
) -> Result<WorstCaseResult, AdversaryError> {
    let m = budget.m();
    if m > g.edge_count() {
        return Err(AdversaryError::BudgetExceedsEdges {
            budget: m,
            edges: g.edge_count(),
        });
    }
    let exhaustive = match mode {
        SearchMode::Exhaustive => true,
        SearchMode::Greedy => false,
        SearchMode::Auto => binomial(g.edge_count() as u64, m as u64) <= exhaustive_limit as u128,
    };
    if exhaustive {
        exhaustive_search(g, m)
    } else {
        greedy_search(g, m)
    }
}

/// Smallest worst case over all removals of at most `m` links.
///
/// Candidates are ordered by size, then lexicographically; among removals
/// within [`TIE_TOL`] of the minimum the first in that order wins.
fn exhaustive_search(g: &WeightedGraph, m: usize) -> Result<WorstCaseResult, AdversaryError> {
    let subsets: Vec<Vec<usize>> = (0..=m)
        .flat_map(|k| Combinations::new(g.edge_count(), k))
        .collect();
    let eval =
        |s: &Vec<usize>| -> Result<f64, AdversaryError> { Ok(lambda2(&remove_links(g, s)?)?) };
    let values: Vec<f64> = if subsets.len() > 64 {
        subsets.par_iter().map(eval).collect::<Result<_, _>>()?
    } else {
        subsets.iter().map(eval).collect::<Result<_, _>>()?
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = min + TIE_TOL * min.abs().max(1.0);
    let best = values
        .iter()
        .position(|&v| v <= cutoff)
        .expect("at least the empty removal is evaluated");
    Ok(WorstCaseResult {
        removal: subsets[best].clone(),
        lambda2_after: values[best],
        exact: true,
    })
}

/// Repeatedly cuts the link with the largest Fiedler impact score.
fn greedy_search(g: &WeightedGraph, m: usize) -> Result<WorstCaseResult, AdversaryError> {
    // origin[k] = index in `g` of edge k of the current attacked graph
    let mut current = g.clone();
    let mut origin: Vec<usize> = (0..g.edge_count()).collect();
    let mut removal = Vec::with_capacity(m);
    let mut spectral = algebraic_connectivity(&current)?;
    for _ in 0..m {
        if spectral.lambda2 == 0.0 || current.edge_count() == 0 {
            break;
        }
        let scores = edge_impact_scores(&current, &spectral);
        let (pick, _) = scores
            .iter()
            .fold(None::<(usize, f64)>, |best, &(k, s)| match best {
                Some((_, bs)) if bs >= s => best,
                _ => Some((k, s)),
            })
            .expect("graph has edges");
        removal.push(origin[pick]);
        current = remove_links(&current, &[pick])?;
        origin.remove(pick);
        spectral = algebraic_connectivity(&current)?;
    }
    removal.sort_unstable();
    Ok(WorstCaseResult {
        removal,
        lambda2_after: spectral.lambda2,
        exact: false,
    })
}

/// `w_ij (v_i - v_j)^2` per edge, where `v` is the Fiedler vector. These sum
/// to `v^T L v = lambda2`.
pub fn edge_impact_scores(g: &WeightedGraph, spectral: &SpectralResult) -> Vec<(usize, f64)> {
    let v = &spectral.fiedler;
    g.edges()
        .iter()
        .enumerate()
        .map(|(k, e)| (k, e.w * (v[e.i] - v[e.j]).powi(2)))
        .collect()
}

/// Corrupts the reported positions of `targets` by `offset` during
/// `[start_step, start_step + duration)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpoofSpec {
    pub targets: Vec<usize>,
    pub offset: Position,
    pub start_step: usize,
    pub duration: usize,
}

impl SpoofSpec {
    pub fn new(
        targets: Vec<usize>,
        offset: Position,
        start_step: usize,
        duration: usize,
    ) -> Result<Self, AdversaryError> {
        if targets.is_empty() {
            return Err(AdversaryError::InvalidSpoof("no targets".into()));
        }
        if duration == 0 {
            return Err(AdversaryError::InvalidSpoof(
                "duration must be at least 1".into(),
            ));
        }
        if !offset.is_finite() {
            return Err(AdversaryError::InvalidSpoof("non-finite offset".into()));
        }
        Ok(SpoofSpec {
            targets,
            offset,
            start_step,
            duration,
        })
    }

    pub fn is_active(&self, step: usize) -> bool {
        step >= self.start_step && step - self.start_step < self.duration
    }

    pub fn end_step(&self) -> usize {
        self.start_step + self.duration
    }
}

/// Positions as reported by the agents' (possibly spoofed) sensors.
pub fn apply_spoofing(
    true_positions: &[Position],
    spoof: &SpoofSpec,
    step: usize,
) -> Result<Vec<Position>, AdversaryError> {
    let mut reported = true_positions.to_vec();
    for &t in &spoof.targets {
        if t >= true_positions.len() {
            return Err(AdversaryError::InvalidTarget {
                target: t,
                agents: true_positions.len(),
            });
        }
        if true_positions[t].dim() != spoof.offset.dim() {
            return Err(GraphError::DimensionMismatch {
                index: t,
                expected: spoof.offset.dim(),
                got: true_positions[t].dim(),
            }
            .into());
        }
    }
    if spoof.is_active(step) {
        let mut targets = spoof.targets.clone();
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            reported[t] = &true_positions[t] + &spoof.offset;
        }
    }
    Ok(reported)
}

/// `C(n, k)`, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Lexicographic k-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in (i + 1)..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::unweighted(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn path3() -> WeightedGraph {
        WeightedGraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(
            Combinations::new(3, 0).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(45, 2), 990);
        assert_eq!(binomial(5, 7), 0);
    }

    #[test]
    fn zero_budget_is_no_attack() {
        let r = worst_case_removal(&triangle(), RemovalBudget(0), SearchMode::Auto).unwrap();
        assert!(r.removal.is_empty());
        assert!((r.lambda2_after - 3.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_single_removal_picks_first_edge() {
        let r = worst_case_removal(&triangle(), RemovalBudget(1), SearchMode::Exhaustive).unwrap();
        assert_eq!(r.removal, vec![0]);
        assert!((r.lambda2_after - 1.0).abs() < 1e-12);
        assert!(r.exact);
    }

    #[test]
    fn path_single_removal_disconnects() {
        for mode in [SearchMode::Exhaustive, SearchMode::Greedy] {
            let r = worst_case_removal(&path3(), RemovalBudget(1), mode).unwrap();
            assert_eq!(r.removal.len(), 1);
            assert_eq!(r.lambda2_after, 0.0);
        }
        // A larger budget does not buy a larger removal once disconnected.
        let r = worst_case_removal(&path3(), RemovalBudget(2), SearchMode::Exhaustive).unwrap();
        assert_eq!(r.removal, vec![0]);
    }

    #[test]
    fn budget_over_edge_count_is_rejected() {
        assert_eq!(
            worst_case_removal(&path3(), RemovalBudget(3), SearchMode::Auto),
            Err(AdversaryError::BudgetExceedsEdges {
                budget: 3,
                edges: 2
            })
        );
    }

    #[test]
    fn impact_scores_sum_to_lambda2_on_path() {
        let g = path3();
        let s = algebraic_connectivity(&g).unwrap();
        let total: f64 = edge_impact_scores(&g, &s).iter().map(|(_, x)| x).sum();
        assert!((total - 1.0).abs() < 1e-12);

        let flipped = SpectralResult {
            fiedler: s.fiedler.iter().map(|x| -x).collect(),
            ..s.clone()
        };
        assert_eq!(edge_impact_scores(&g, &s), edge_impact_scores(&g, &flipped));
    }

    #[test]
    fn remote_edge_scores_near_zero() {
        // Two tight clusters joined by a weak bridge plus a far-away pair
        // hanging off one cluster: the pair sits on one side of the cut.
        let g = WeightedGraph::new(
            6,
            vec![
                crate::graph::Edge { i: 0, j: 1, w: 1.0 },
                crate::graph::Edge {
                    i: 1,
                    j: 2,
                    w: 0.01,
                },
                crate::graph::Edge { i: 2, j: 3, w: 1.0 },
                crate::graph::Edge { i: 3, j: 4, w: 1.0 },
                crate::graph::Edge { i: 4, j: 5, w: 1.0 },
                crate::graph::Edge { i: 3, j: 5, w: 1.0 },
            ],
        )
        .unwrap();
        let s = algebraic_connectivity(&g).unwrap();
        let scores = edge_impact_scores(&g, &s);
        let bridge = scores[1].1;
        let remote = scores[4].1;
        assert!(remote < 1e-3 * bridge.max(1e-12) || remote < 1e-6);
    }

    #[test]
    fn spoofing_window() {
        let truth = vec![Position::new(vec![0.0, 0.0]), Position::new(vec![1.0, 1.0])];
        let spoof = SpoofSpec::new(vec![1], Position::new(vec![10.0, 0.0]), 9, 5).unwrap();
        assert_eq!(apply_spoofing(&truth, &spoof, 8).unwrap(), truth);
        assert_eq!(apply_spoofing(&truth, &spoof, 14).unwrap(), truth);
        let r = apply_spoofing(&truth, &spoof, 9).unwrap();
        assert_eq!(r[0], truth[0]);
        assert_eq!(r[1], Position::new(vec![11.0, 1.0]));

        let zero = SpoofSpec::new(vec![0, 1], Position::zeros(2), 0, 3).unwrap();
        assert_eq!(apply_spoofing(&truth, &zero, 1).unwrap(), truth);
    }

    #[test]
    fn spoof_validation() {
        assert!(SpoofSpec::new(vec![], Position::zeros(2), 0, 1).is_err());
        assert!(SpoofSpec::new(vec![0], Position::zeros(2), 0, 0).is_err());
        let truth = vec![Position::zeros(2)];
        let s = SpoofSpec::new(vec![3], Position::zeros(2), 0, 1).unwrap();
        assert!(matches!(
            apply_spoofing(&truth, &s, 0),
            Err(AdversaryError::InvalidTarget {
                target: 3,
                agents: 1
            })
        ));
    }
}
