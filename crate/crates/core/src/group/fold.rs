//! Stallings foldings of subgroup graphs of free groups.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{GroupError, Word};

/// A labelled edge `source --generator--> target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub source: usize,
    pub generator: u8,
    pub target: usize,
}

/// A folded, connected, base-pointed subgroup graph of `F(a_1, .., a_rank)`.
///
/// Vertices are numbered canonically by breadth-first search from the base
/// vertex `0`, visiting edges in `(generator, outgoing before incoming)`
/// order, so two graphs are label- and base-preserving isomorphic exactly
/// when they compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubgroupGraph {
    rank: usize,
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// Which pending fold is performed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldOrder {
    /// Smallest `(vertex, label)` first.
    Lexicographic,
    /// Largest `(vertex, label)` first.
    ReverseLexicographic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubgroupIndex {
    Finite(usize),
    Infinite,
}

/// Folds the petal graph of `words` in the lexicographic order.
pub fn stallings_fold(rank: usize, words: &[Word]) -> Result<SubgroupGraph, GroupError> {
    stallings_fold_with_order(rank, words, FoldOrder::Lexicographic)
}

pub fn stallings_fold_with_order(
    rank: usize,
    words: &[Word],
    order: FoldOrder,
) -> Result<SubgroupGraph, GroupError> {
    if rank == 0 {
        return Err(GroupError::EmptyAlphabet);
    }
    if rank > 26 {
        return Err(GroupError::GeneratorOutOfRange {
            word: String::new(),
            rank,
        });
    }
    for w in words {
        if w.min_rank() > rank {
            return Err(GroupError::GeneratorOutOfRange {
                word: w.to_string(),
                rank,
            });
        }
    }

    let mut vertex_count = 1;
    let mut edges = Vec::new();
    for w in words.iter().filter(|w| !w.is_empty()) {
        let n = w.len();
        let mut current = 0;
        for (i, l) in w.letters().iter().enumerate() {
            let next = if i + 1 == n {
                0
            } else {
                vertex_count += 1;
                vertex_count - 1
            };
            edges.push(if l.inverse {
                Edge {
                    source: next,
                    generator: l.generator,
                    target: current,
                }
            } else {
                Edge {
                    source: current,
                    generator: l.generator,
                    target: next,
                }
            });
            current = next;
        }
    }

    let mut parent: Vec<usize> = (0..vertex_count).collect();
    loop {
        let live: BTreeSet<Edge> = edges
            .iter()
            .map(|e| Edge {
                source: find(&mut parent, e.source),
                generator: e.generator,
                target: find(&mut parent, e.target),
            })
            .collect();
        edges = live.into_iter().collect();

        // (vertex, label, incoming?) -> far endpoints
        let mut star: BTreeMap<(usize, u8, bool), BTreeSet<usize>> = BTreeMap::new();
        for e in &edges {
            star.entry((e.source, e.generator, false))
                .or_default()
                .insert(e.target);
            star.entry((e.target, e.generator, true))
                .or_default()
                .insert(e.source);
        }
        let mut pending = star.values().filter(|ends| ends.len() > 1);
        let ends = match order {
            FoldOrder::Lexicographic => pending.next(),
            FoldOrder::ReverseLexicographic => pending.next_back(),
        };
        let Some(ends) = ends else { break };
        let mut it = ends.iter();
        let (keep, merge) = (*it.next().unwrap(), *it.next().unwrap());
        parent[merge] = keep;
    }

    Ok(canonicalize(rank, &edges))
}

fn find(parent: &mut [usize], v: usize) -> usize {
    let mut root = v;
    while parent[root] != root {
        root = parent[root];
    }
    let mut v = v;
    while parent[v] != root {
        let next = parent[v];
        parent[v] = root;
        v = next;
    }
    root
}

/// Renumbers a folded graph breadth-first from the base vertex `0`.
fn canonicalize(rank: usize, edges: &[Edge]) -> SubgroupGraph {
    let mut adjacency: BTreeMap<usize, Vec<(u8, bool, usize)>> = BTreeMap::new();
    for e in edges {
        adjacency
            .entry(e.source)
            .or_default()
            .push((e.generator, false, e.target));
        adjacency
            .entry(e.target)
            .or_default()
            .push((e.generator, true, e.source));
    }
    for list in adjacency.values_mut() {
        list.sort();
    }
    let mut new_id: BTreeMap<usize, usize> = BTreeMap::new();
    new_id.insert(0, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &(_, _, w) in adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if !new_id.contains_key(&w) {
                new_id.insert(w, new_id.len());
                queue.push_back(w);
            }
        }
    }
    let mut relabelled: Vec<Edge> = edges
        .iter()
        .map(|e| Edge {
            source: new_id[&e.source],
            generator: e.generator,
            target: new_id[&e.target],
        })
        .collect();
    relabelled.sort();
    SubgroupGraph {
        rank,
        vertex_count: new_id.len(),
        edges: relabelled,
    }
}

impl SubgroupGraph {
    pub fn rank_of_ambient(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// No vertex has two outgoing, or two incoming, edges with one label.
    pub fn is_folded(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| {
            seen.insert((e.source, e.generator, false))
                && seen.insert((e.target, e.generator, true))
        })
    }

    /// Rank of the represented subgroup: the first Betti number `E - V + 1`.
    pub fn subgroup_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// Index in the ambient free group: the vertex count when every vertex
    /// has one outgoing and one incoming edge per generator.
    pub fn index(&self) -> SubgroupIndex {
        subgroup_index(self)
    }

    /// Whether the graph reads `word` as a closed path at the base vertex.
    pub fn accepts(&self, word: &Word) -> bool {
        let mut v = 0;
        for l in word.letters() {
            let next = self.edges.iter().find_map(|e| {
                if e.generator != l.generator {
                    None
                } else if !l.inverse && e.source == v {
                    Some(e.target)
                } else if l.inverse && e.target == v {
                    Some(e.source)
                } else {
                    None
                }
            });
            match next {
                Some(w) => v = w,
                None => return false,
            }
        }
        v == 0
    }
}

pub fn subgroup_index(g: &SubgroupGraph) -> SubgroupIndex {
    let mut out = vec![vec![0u32; g.rank]; g.vertex_count];
    let mut inc = vec![vec![0u32; g.rank]; g.vertex_count];
    for e in &g.edges {
        out[e.source][usize::from(e.generator)] += 1;
        inc[e.target][usize::from(e.generator)] += 1;
    }
    let complete = out
        .iter()
        .chain(inc.iter())
        .all(|row| row.iter().all(|&c| c == 1));
    if complete {
        SubgroupIndex::Finite(g.vertex_count)
    } else {
        SubgroupIndex::Infinite
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|w| w.parse().unwrap()).collect()
    }

    #[test]
    fn whole_group() {
        let g = stallings_fold(2, &words(&["a", "b"])).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.index(), SubgroupIndex::Finite(1));
    }

    #[test]
    fn index_two_subgroup() {
        let g = stallings_fold(2, &words(&["aa", "b", "abA"])).unwrap();
        assert!(g.is_folded());
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.index(), SubgroupIndex::Finite(2));
        assert_eq!(g.subgroup_rank(), 3);
        assert!(!g.accepts(&"ab".parse().unwrap()));
        assert!(g.accepts(&"aba".parse().unwrap()));
        assert!(g.accepts(&"abbA".parse().unwrap()));
    }

    #[test]
    fn commutator_has_infinite_index() {
        let g = stallings_fold(2, &words(&["abAB"])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.index(), SubgroupIndex::Infinite);
        assert_eq!(g.subgroup_rank(), 1);
    }

    #[test]
    fn trivial_subgroup_is_a_point() {
        let g = stallings_fold(1, &words(&["1", "aA"])).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.index(), SubgroupIndex::Infinite);
    }

    #[test]
    fn errors() {
        assert_eq!(stallings_fold(0, &[]), Err(GroupError::EmptyAlphabet));
        assert!(matches!(
            stallings_fold(1, &words(&["ab"])),
            Err(GroupError::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn fold_orders_agree_on_example() {
        let ws = words(&["aab", "aBa", "bbA", "abab"]);
        assert_eq!(
            stallings_fold_with_order(2, &ws, FoldOrder::Lexicographic).unwrap(),
            stallings_fold_with_order(2, &ws, FoldOrder::ReverseLexicographic).unwrap()
        );
    }
}
