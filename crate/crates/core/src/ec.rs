//! Existential closure.
//!
//! A graph is n-e.c. when for every pair of disjoint vertex sets `A`, `B`
//! with `|A ∪ B| = n` some vertex `z ∉ A ∪ B` is adjacent to all of `A` and
//! to none of `B`.
//!
//! Searches enumerate the n-subsets `T` in lexicographic order and, for each
//! `T`, the splits by mask `0..2^n` where bit `i` set puts the `i`-th
//! smallest vertex of `T` in `A`. The reported failure is always the first
//! one in that order, however the work is split across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::binomial;
use crate::bitset;
use crate::design::Design;
use crate::graph::Graph;

/// Default ceiling for [`xi`].
pub const DEFAULT_XI_CAP: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("order n must be at least 1")]
    ZeroOrder,
    #[error("{n}-e.c. is undecidable by witness on {vertices} vertices: no vertex can lie outside A ∪ B")]
    TooFewVertices { n: usize, vertices: usize },
}

/// A split `(A, B)` for which no witness vertex exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcFailure {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl EcFailure {
    fn from_mask(t: &[usize], mask: usize) -> Self {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, &x) in t.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.push(x);
            } else {
                b.push(x);
            }
        }
        EcFailure { a, b }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcResult {
    pub holds: bool,
    pub witness_failure: Option<EcFailure>,
    /// Splits examined up to and including the failure (all of them when
    /// the property holds).
    pub checked_pairs: u64,
}

impl EcResult {
    fn holding(checked_pairs: u64) -> Self {
        EcResult {
            holds: true,
            witness_failure: None,
            checked_pairs,
        }
    }

    fn failing(failure: EcFailure, checked_pairs: u64) -> Self {
        EcResult {
            holds: false,
            witness_failure: Some(failure),
            checked_pairs,
        }
    }
}

fn check_order(g: &Graph, n: usize) -> Result<(), EcError> {
    if n == 0 {
        return Err(EcError::ZeroOrder);
    }
    if n >= g.n() {
        return Err(EcError::TooFewVertices { n, vertices: g.n() });
    }
    Ok(())
}

/// Smallest vertex outside `a ∪ b` adjacent to all of `a` and none of `b`.
pub fn witness_vertex(g: &Graph, a: &[usize], b: &[usize]) -> Option<usize> {
    (0..g.n()).find(|&z| {
        !a.contains(&z)
            && !b.contains(&z)
            && a.iter().all(|&x| g.has_edge(z, x))
            && b.iter().all(|&y| !g.has_edge(z, y))
    })
}

/// Splits per subset times the number of subsets whose smallest element
/// is `first`.
fn group_size(vertices: usize, n: usize, first: usize) -> u64 {
    (binomial((vertices - 1 - first) as i64, (n - 1) as i64) as u64) << n
}

struct GroupHit {
    first: usize,
    t: Vec<usize>,
    mask: usize,
    checked_in_group: u64,
}

/// Prefix-sharing search over all n-subsets with a fixed smallest vertex.
///
/// `levels[d]` holds, for each of the `2^d` sign patterns of the first `d`
/// chosen vertices, the vertices still eligible as a witness.
struct Searcher<'g> {
    g: &'g Graph,
    non_adjacent: &'g Graph,
    n: usize,
    words: usize,
    levels: Vec<Vec<u64>>,
    chosen: Vec<usize>,
    checked: u64,
}

impl<'g> Searcher<'g> {
    fn new(g: &'g Graph, non_adjacent: &'g Graph, n: usize) -> Self {
        let words = g.words();
        let mut levels: Vec<Vec<u64>> = (0..=n).map(|d| vec![0u64; words << d]).collect();
        levels[0] = bitset::full(g.n());
        Searcher {
            g,
            non_adjacent,
            n,
            words,
            levels,
            chosen: Vec::with_capacity(n),
            checked: 0,
        }
    }

    fn extend(&mut self, depth: usize, u: usize) {
        let w = self.words;
        let (lower, upper) = self.levels.split_at_mut(depth + 1);
        let parent = &lower[depth];
        let child = &mut upper[0];
        let adj = self.g.neighbors(u);
        let non = self.non_adjacent.neighbors(u);
        let high = 1usize << depth;
        for m in 0..high {
            let p = &parent[m * w..(m + 1) * w];
            for i in 0..w {
                child[m * w + i] = p[i] & non[i];
                child[(m | high) * w + i] = p[i] & adj[i];
            }
        }
    }

    fn leaf(&mut self) -> Option<usize> {
        let w = self.words;
        let level = &self.levels[self.n];
        for mask in 0..1usize << self.n {
            self.checked += 1;
            if bitset::is_empty(&level[mask * w..(mask + 1) * w]) {
                return Some(mask);
            }
        }
        None
    }

    fn descend(&mut self, depth: usize, start: usize) -> Option<usize> {
        if depth == self.n {
            return self.leaf();
        }
        let last = self.g.n() - (self.n - depth);
        for u in start..=last {
            self.chosen.push(u);
            self.extend(depth, u);
            if let Some(mask) = self.descend(depth + 1, u + 1) {
                return Some(mask);
            }
            self.chosen.pop();
        }
        None
    }

    fn run_group(mut self, first: usize) -> Option<GroupHit> {
        self.chosen.push(first);
        self.extend(0, first);
        let mask = self.descend(1, first + 1)?;
        Some(GroupHit {
            first,
            t: self.chosen,
            mask,
            checked_in_group: self.checked,
        })
    }
}

/// Decides whether `g` is n-e.c. by exhaustive search.
pub fn is_n_ec(g: &Graph, n: usize) -> Result<EcResult, EcError> {
    check_order(g, n)?;
    let vertices = g.n();
    let non_adjacent = g.complement();
    let hit = (0..=vertices - n)
        .into_par_iter()
        .find_map_first(|first| Searcher::new(g, &non_adjacent, n).run_group(first));
    Ok(match hit {
        None => EcResult::holding(binomial(vertices as i64, n as i64) as u64 * (1u64 << n)),
        Some(hit) => {
            let before: u64 = (0..hit.first).map(|f| group_size(vertices, n, f)).sum();
            EcResult::failing(
                EcFailure::from_mask(&hit.t, hit.mask),
                before + hit.checked_in_group,
            )
        }
    })
}

/// Fast 2-e.c. test. For each pair `u < v` the witness sets of the four
/// splits are `V ∖ (N(u) ∪ N(v))`, `N(u) ∖ N(v)`, `N(v) ∖ N(u)` and
/// `N(u) ∩ N(v)`, each with `u` and `v` removed. Same contract and same
/// reported failure as `is_n_ec(g, 2)`.
pub fn is_2_ec_fast(g: &Graph) -> Result<EcResult, EcError> {
    check_order(g, 2)?;
    let vertices = g.n();
    let full = bitset::full(vertices);
    let hit = (0..vertices - 1).into_par_iter().find_map_first(|u| {
        let ru = g.neighbors(u);
        let mut checked = 0u64;
        for v in u + 1..vertices {
            let rv = g.neighbors(v);
            let mut found = [0u64; 4];
            for i in 0..full.len() {
                let mut keep = full[i];
                if i == u / bitset::WORD {
                    keep &= !(1 << (u % bitset::WORD));
                }
                if i == v / bitset::WORD {
                    keep &= !(1 << (v % bitset::WORD));
                }
                let (a, b) = (ru[i], rv[i]);
                found[0] |= !(a | b) & keep;
                found[1] |= a & !b & keep;
                found[2] |= b & !a & keep;
                found[3] |= a & b & keep;
            }
            for (mask, &f) in found.iter().enumerate() {
                checked += 1;
                if f == 0 {
                    return Some((u, v, mask, checked));
                }
            }
        }
        None
    });
    Ok(match hit {
        None => EcResult::holding(binomial(vertices as i64, 2) as u64 * 4),
        Some((u, v, mask, checked)) => {
            let before: u64 = (0..u).map(|f| group_size(vertices, 2, f)).sum();
            EcResult::failing(EcFailure::from_mask(&[u, v], mask), before + checked)
        }
    })
}

/// 1-e.c. via degrees: every vertex needs a neighbour and a non-neighbour.
pub fn is_1_ec_by_degree(g: &Graph) -> Result<EcResult, EcError> {
    check_order(g, 1)?;
    let last = g.n() - 1;
    for x in 0..g.n() {
        let d = g.degree(x);
        let checked = 2 * x as u64;
        if d == last {
            return Ok(EcResult::failing(EcFailure { a: vec![], b: vec![x] }, checked + 1));
        }
        if d == 0 {
            return Ok(EcResult::failing(EcFailure { a: vec![x], b: vec![] }, checked + 2));
        }
    }
    Ok(EcResult::holding(2 * g.n() as u64))
}

/// Existential closure number, possibly capped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Xi {
    pub value: usize,
    /// The cap was reached, so the true value may be larger.
    pub at_least: bool,
    /// The failing split at order `value + 1`, when one was found.
    pub next_failure: Option<EcFailure>,
}

/// Existential closure number with the default ceiling.
pub fn xi(g: &Graph) -> Xi {
    xi_with_cap(g, DEFAULT_XI_CAP)
}

/// Largest n such that `g` is n-e.c., searching no further than `cap`.
/// Graphs on fewer than two vertices have value 0.
pub fn xi_with_cap(g: &Graph, cap: usize) -> Xi {
    let mut value = 0;
    let mut next_failure = None;
    loop {
        let next = value + 1;
        if next > cap {
            return Xi { value, at_least: true, next_failure: None };
        }
        if next >= g.n() {
            break;
        }
        let res = match next {
            1 => is_1_ec_by_degree(g),
            2 => is_2_ec_fast(g),
            _ => is_n_ec(g, next),
        }
        .expect("order checked against the vertex count");
        if res.holds {
            value = next;
        } else {
            next_failure = res.witness_failure;
            break;
        }
    }
    Xi { value, at_least: false, next_failure }
}

/// True when every block of `d` meets `B_i ∪ B_j`.
pub fn is_dominating_pair(d: &Design, i: usize, j: usize) -> bool {
    let union: Vec<u64> = d
        .block_mask(i)
        .iter()
        .zip(d.block_mask(j))
        .map(|(x, y)| x | y)
        .collect();
    (0..d.b()).all(|k| bitset::intersects(d.block_mask(k), &union))
}

/// First pair of blocks `(i, j)`, `i < j`, whose union meets every block.
/// Such a pair leaves the split `A = ∅`, `B = {i, j}` without a witness in
/// the block intersection graph.
pub fn find_dominating_union_pair(d: &Design) -> Option<(usize, usize)> {
    let b = d.b();
    (0..b)
        .into_par_iter()
        .find_map_first(|i| (i + 1..b).find(|&j| is_dominating_pair(d, i, j)).map(|j| (i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn five_cycle_is_1_ec() {
        let g = cycle(5);
        assert!(is_n_ec(&g, 1).unwrap().holds);
        assert!(is_1_ec_by_degree(&g).unwrap().holds);
        assert!(!is_n_ec(&g, 2).unwrap().holds);
        assert_eq!(xi(&g).value, 1);
    }

    #[test]
    fn order_errors() {
        let g = cycle(5);
        assert_eq!(is_n_ec(&g, 0).unwrap_err(), EcError::ZeroOrder);
        assert_eq!(
            is_n_ec(&g, 5).unwrap_err(),
            EcError::TooFewVertices { n: 5, vertices: 5 }
        );
        assert!(is_2_ec_fast(&Graph::empty(2)).is_err());
    }

    #[test]
    fn complete_graph_fails_with_empty_a() {
        let r = is_n_ec(&Graph::complete(4), 1).unwrap();
        assert_eq!(r.witness_failure, Some(EcFailure { a: vec![], b: vec![0] }));
        assert_eq!(r.checked_pairs, 1);
        assert_eq!(is_1_ec_by_degree(&Graph::complete(4)).unwrap(), r);
    }

    #[test]
    fn degree_form_matches_search_on_star() {
        // Leaves have degree 1, the centre degree n-1.
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(is_1_ec_by_degree(&g).unwrap(), is_n_ec(&g, 1).unwrap());
    }

    #[test]
    fn fast_matches_search_including_witness_and_count() {
        for n in 3..12 {
            let g = cycle(n);
            assert_eq!(is_2_ec_fast(&g).unwrap(), is_n_ec(&g, 2).unwrap(), "C_{n}");
        }
    }

    #[test]
    fn holding_count_is_all_splits() {
        // The Paley graph on 13 vertices is 2-e.c.
        let squares: Vec<usize> = (1..13).map(|x| x * x % 13).collect();
        let g = Graph::from_edges(
            13,
            (0..13).flat_map(|u| (u + 1..13).map(move |v| (u, v)))
                .filter(|&(u, v)| squares.contains(&(v - u))),
        )
        .unwrap();
        let r = is_n_ec(&g, 2).unwrap();
        assert!(r.holds);
        assert_eq!(r.checked_pairs, 78 * 4);
        assert_eq!(is_2_ec_fast(&g).unwrap(), r);
        assert_eq!(xi(&g).value, 2);
    }

    #[test]
    fn xi_small_graphs() {
        assert_eq!(xi(&Graph::empty(0)).value, 0);
        assert_eq!(xi(&Graph::empty(1)).value, 0);
        assert_eq!(xi(&Graph::complete(2)).value, 0);
        let capped = xi_with_cap(&cycle(5), 1);
        assert_eq!((capped.value, capped.at_least), (1, true));
    }

    #[test]
    fn witness_vertex_lookup() {
        let g = cycle(6);
        assert_eq!(witness_vertex(&g, &[0], &[2]), Some(5));
        assert_eq!(witness_vertex(&g, &[0, 3], &[]), None);
    }
}
