//! Candidate symmetric pairs: the affinity matrix over feature points and an
//! exact minimum-cost c-cardinality matching on it.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Result, SymmetryError};
use crate::signatures::FeatureSet;

pub const DEFAULT_Q_MULTIPLIER: f64 = 1000.0;
pub const DEFAULT_MAX_PAIRS: usize = 8;

/// Largest `d` accepted by [`brute_force_assignment`].
pub const BRUTE_FORCE_MAX_D: usize = 10;

/// Symmetric `d × d` pairing costs with diagonal `q`.
#[derive(Debug, Clone)]
pub struct AffinityMatrix {
    pub w: DMatrix<f64>,
    pub q: f64,
}

impl AffinityMatrix {
    pub fn from_matrix(w: DMatrix<f64>, q: f64) -> Result<Self> {
        if !w.is_square() {
            return Err(SymmetryError::Dimension(format!(
                "affinity matrix is {}x{}",
                w.nrows(),
                w.ncols()
            )));
        }
        Ok(Self { w, q })
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }
}

/// Default penalty: `multiplier × max pairwise HKS distance` (1 if all are equal).
pub fn default_q(features: &FeatureSet, multiplier: f64) -> f64 {
    let d = features.len();
    let mut max_dist: f64 = 0.0;
    for a in 0..d {
        for b in a + 1..d {
            max_dist = max_dist.max(features.hks_distance(a, b));
        }
    }
    if max_dist > 0.0 {
        multiplier * max_dist
    } else {
        1.0
    }
}

/// `W[j,j'] = ‖h_j − h_j'‖ + q·[s_j = s_j']`, `W[j,j] = q`.
pub fn build_affinity(features: &FeatureSet, q: f64) -> AffinityMatrix {
    let d = features.len();
    let mut w = DMatrix::from_element(d, d, q);
    for a in 0..d {
        for b in a + 1..d {
            let same_signs = features.signs[a] == features.signs[b];
            let v = features.hks_distance(a, b) + if same_signs { q } else { 0.0 };
            w[(a, b)] = v;
            w[(b, a)] = v;
        }
    }
    AffinityMatrix { w, q }
}

/// `c` disjoint unordered pairs of feature positions, each stored `(a, b)` with `a < b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSet {
    pub pairs: Vec<(usize, usize)>,
    /// `Σ 2·W[a,b]` over the pairs (both directed entries of Π).
    pub total_cost: f64,
}

impl PairSet {
    /// The symmetric 0/1 matrix Π of the pairing.
    pub fn pi_matrix(&self, d: usize) -> DMatrix<u8> {
        let mut pi = DMatrix::zeros(d, d);
        for &(a, b) in &self.pairs {
            pi[(a, b)] = 1;
            pi[(b, a)] = 1;
        }
        pi
    }
}

/// `min(max_pairs, ⌊d/2⌋)`.
pub fn default_pair_count(d: usize, max_pairs: usize) -> usize {
    max_pairs.min(d / 2)
}

fn check_feasible(d: usize, c: usize) -> Result<()> {
    if c == 0 || 2 * c > d {
        return Err(SymmetryError::Infeasible {
            pairs: c,
            features: d,
        });
    }
    Ok(())
}

fn pair_cost(w: &DMatrix<f64>, a: usize, b: usize) -> f64 {
    w[(a, b)] + w[(b, a)]
}

/// Exact minimum-cost set of `c` disjoint pairs by branch and bound.
///
/// Pairs are explored in lexicographic order, so among equal-cost optima the
/// lexicographically smallest pair list is returned.
pub fn solve_assignment(aff: &AffinityMatrix, c: usize) -> Result<PairSet> {
    let d = aff.dim();
    check_feasible(d, c)?;
    // Slack absorbs summation-order round-off when the greedy matching is optimal.
    let greedy = greedy_cost(&aff.w, c);
    let bound = greedy + 1e-9 * greedy.abs().max(1.0);
    let mut search = BranchAndBound {
        w: &aff.w,
        d,
        c,
        used: vec![false; d],
        current: Vec::with_capacity(c),
        best: None,
        best_cost: bound,
    };
    search.descend(0, 0.0);
    let pairs = search
        .best
        .expect("greedy bound is attained by some matching");
    Ok(PairSet {
        total_cost: pairs.iter().map(|&(a, b)| pair_cost(&aff.w, a, b)).sum(),
        pairs,
    })
}

fn greedy_cost(w: &DMatrix<f64>, c: usize) -> f64 {
    let d = w.nrows();
    let mut edges: Vec<(f64, usize, usize)> = (0..d)
        .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
        .map(|(a, b)| (pair_cost(w, a, b), a, b))
        .collect();
    edges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used = vec![false; d];
    let mut total = 0.0;
    let mut taken = 0;
    for (cost, a, b) in edges {
        if taken == c {
            break;
        }
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            total += cost;
            taken += 1;
        }
    }
    total
}

struct BranchAndBound<'a> {
    w: &'a DMatrix<f64>,
    d: usize,
    c: usize,
    used: Vec<bool>,
    current: Vec<(usize, usize)>,
    best: Option<Vec<(usize, usize)>>,
    best_cost: f64,
}

impl BranchAndBound<'_> {
    /// Lower bound on the cost of `need` more pairs among free vertices `>= from`:
    /// every pair {a,b} costs at least (m_a + m_b)/2 where m_v is the cheapest
    /// pair cost from v, so the total is at least half the 2·need smallest m_v.
    fn lower_bound(&self, from: usize, need: usize) -> f64 {
        if need == 0 {
            return 0.0;
        }
        let free: Vec<usize> = (from..self.d).filter(|&v| !self.used[v]).collect();
        let mut mins: Vec<f64> = free
            .iter()
            .map(|&a| {
                free.iter()
                    .filter(|&&b| b != a)
                    .map(|&b| pair_cost(self.w, a, b))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        mins.sort_by(|x, y| x.total_cmp(y));
        0.5 * mins[..2 * need].iter().sum::<f64>()
    }

    fn pruned(&self, bound: f64) -> bool {
        match self.best {
            None => bound > self.best_cost,
            Some(_) => bound >= self.best_cost,
        }
    }

    fn descend(&mut self, from: usize, cost: f64) {
        let need = self.c - self.current.len();
        if need == 0 {
            let better = match self.best {
                None => cost <= self.best_cost,
                Some(_) => cost < self.best_cost,
            };
            if better {
                self.best_cost = cost;
                self.best = Some(self.current.clone());
            }
            return;
        }
        let Some(i) = (from..self.d).find(|&v| !self.used[v]) else {
            return;
        };
        let free_after = (i + 1..self.d).filter(|&v| !self.used[v]).count();
        if free_after + 1 < 2 * need {
            return;
        }
        if self.pruned(cost + self.lower_bound(i, need)) {
            return;
        }

        self.used[i] = true;
        for j in i + 1..self.d {
            if self.used[j] {
                continue;
            }
            let next = cost + pair_cost(self.w, i, j);
            self.used[j] = true;
            self.current.push((i, j));
            self.descend(i + 1, next);
            self.current.pop();
            self.used[j] = false;
        }
        self.used[i] = false;

        // leave i unmatched
        if free_after >= 2 * need {
            self.used[i] = true;
            self.descend(i + 1, cost);
            self.used[i] = false;
        }
    }
}

/// Exhaustive enumeration of all `c`-pair matchings; reference for
/// [`solve_assignment`] on small inputs.
pub fn brute_force_assignment(aff: &AffinityMatrix, c: usize) -> Result<PairSet> {
    let d = aff.dim();
    check_feasible(d, c)?;
    if d > BRUTE_FORCE_MAX_D {
        return Err(SymmetryError::Dimension(format!(
            "brute force limited to d <= {BRUTE_FORCE_MAX_D}, got {d}"
        )));
    }
    let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
    let mut used = vec![false; d];
    let mut current = Vec::new();
    enumerate(&aff.w, c, &mut used, &mut current, &mut best);
    let (total_cost, pairs) = best.expect("2c <= d guarantees a matching");
    Ok(PairSet { pairs, total_cost })
}

fn enumerate(
    w: &DMatrix<f64>,
    c: usize,
    used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    best: &mut Option<(f64, Vec<(usize, usize)>)>,
) {
    if current.len() == c {
        let mut sorted = current.clone();
        sorted.sort();
        let cost: f64 = sorted.iter().map(|&(a, b)| pair_cost(w, a, b)).sum();
        let replace = match best {
            None => true,
            Some((bc, bp)) => cost < *bc || (cost == *bc && sorted < *bp),
        };
        if replace {
            *best = Some((cost, sorted));
        }
        return;
    }
    // pairs are generated with increasing first element to avoid duplicates
    let start = current.last().map_or(0, |&(a, _)| a + 1);
    let d = used.len();
    for a in start..d {
        if used[a] {
            continue;
        }
        used[a] = true;
        for b in a + 1..d {
            if used[b] {
                continue;
            }
            used[b] = true;
            current.push((a, b));
            enumerate(w, c, used, current, best);
            current.pop();
            used[b] = false;
        }
        used[a] = false;
    }
}
