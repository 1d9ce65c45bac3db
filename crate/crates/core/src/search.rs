//! Exhaustive search for total perfect codes.
//!
//! A code is an exact cover of the vertex set by open neighbourhoods: choose
//! rows `v` (code vertices) whose neighbourhoods `Γ(v)` cover every column
//! (vertex) exactly once. The solver is Algorithm X on bitsets: branch on the
//! uncovered column with the fewest remaining candidate rows (ties to the
//! lowest index), try candidates in increasing order, and drop every row
//! whose neighbourhood meets the chosen one.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::cayley::CayleyGraph;
use crate::codes::{check_normal_subgroup_code, verify_pseudocover_partition, verify_tpc};
use crate::error::Result;
use crate::group::{enumerate_normal_subgroups, right_translate, Group, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    First,
    All,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: SearchMode,
    pub limit: Option<usize>,
    /// Report one representative per right-translation orbit.
    pub canonical: bool,
    /// Split the search tree on the first branching column across the
    /// current rayon pool. Output is identical either way.
    pub parallel: bool,
}

impl SearchOptions {
    pub fn new(mode: SearchMode) -> SearchOptions {
        SearchOptions { mode, limit: None, canonical: false, parallel: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub solutions: Vec<VertexSet>,
    pub count: u64,
    /// The search tree was explored completely.
    pub exhausted: bool,
}

impl SearchResult {
    fn empty() -> SearchResult {
        SearchResult { solutions: Vec::new(), count: 0, exhausted: true }
    }

    /// The search stopped at the limit before exploring the whole tree.
    pub fn limit_reached(&self) -> bool {
        !self.exhausted
    }
}

/// Columns are vertices; row `v` covers `Γ(v)`.
#[derive(Debug, Clone)]
pub struct ExactCoverInstance {
    n: usize,
    rows: Vec<VertexSet>,
    /// `conflicts[v]`: rows whose coverage meets row `v`, i.e. `Γ(Γ(v))`.
    conflicts: Vec<VertexSet>,
}

impl ExactCoverInstance {
    pub fn from_graph(graph: &CayleyGraph) -> ExactCoverInstance {
        let n = graph.order();
        let rows: Vec<VertexSet> = graph.rows().to_vec();
        let conflicts = rows
            .iter()
            .map(|row| {
                let mut c = VertexSet::new(n);
                for u in row {
                    c.union_with(&rows[u]);
                }
                c
            })
            .collect();
        ExactCoverInstance { n, rows, conflicts }
    }

    pub fn columns(&self) -> usize {
        self.n
    }

    pub fn row(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    /// Column with the fewest candidate rows, or `None` when all are covered.
    /// Returns `(column, candidates)`.
    fn choose_column(&self, uncovered: &VertexSet, available: &VertexSet) -> Option<(usize, VertexSet)> {
        let mut best: Option<(usize, usize)> = None;
        for u in uncovered {
            let count = self.rows[u].intersection_count(available);
            if best.is_none_or(|(_, c)| count < c) {
                best = Some((u, count));
                if count <= 1 {
                    break;
                }
            }
        }
        best.map(|(u, _)| (u, self.rows[u].intersection(available)))
    }

    fn select(&self, v: usize, uncovered: &VertexSet, available: &VertexSet) -> (VertexSet, VertexSet) {
        (uncovered.difference(&self.rows[v]), available.difference(&self.conflicts[v]))
    }

    /// Depth-first enumeration; `visit` receives each solution's rows.
    pub fn solve<F>(
        &self,
        uncovered: VertexSet,
        available: VertexSet,
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let Some((_, candidates)) = self.choose_column(&uncovered, &available) else {
            return visit(chosen);
        };
        for v in &candidates {
            let (unc, avail) = self.select(v, &uncovered, &available);
            chosen.push(v);
            let flow = self.solve(unc, avail, chosen, visit);
            chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn full_state(&self) -> (VertexSet, VertexSet) {
        (VertexSet::full(self.n), VertexSet::full(self.n))
    }

    /// Solutions in depth-first order, stopping after `cap`. Returns the
    /// solutions and the number found (which equals `cap` when stopped early).
    fn collect(&self, uncovered: VertexSet, available: VertexSet, chosen: Vec<usize>, cap: Option<usize>, keep: bool) -> (Vec<VertexSet>, u64) {
        let mut out = Vec::new();
        let mut count = 0u64;
        let mut chosen = chosen;
        let _ = self.solve(uncovered, available, &mut chosen, &mut |rows| {
            count += 1;
            if keep {
                out.push(VertexSet::from_indices(self.n, rows.iter().copied()));
            }
            match cap {
                Some(c) if count >= c as u64 => ControlFlow::Break(()),
                _ => ControlFlow::Continue(()),
            }
        });
        (out, count)
    }
}

/// Necessary divisibility for a code: `d | n` and `n/d` even.
pub fn degree_admits_code(n: usize, d: usize) -> bool {
    d >= 1 && n.is_multiple_of(d) && (n / d).is_multiple_of(2)
}

/// Lexicographically least right translate `C·g` (comparing sorted element lists).
pub fn canonical_translate(g: &Group, c: &VertexSet) -> VertexSet {
    (0..g.order())
        .map(|x| right_translate(g, c, x))
        .min_by(|a, b| a.iter().cmp(b.iter()))
        .expect("nonempty group")
}

/// Total perfect codes of `graph`.
///
/// `First` returns the first solution in search order, `All` returns every
/// solution (up to `limit`, taken in search order) sorted by bitset value, and
/// `Count` counts without storing solutions unless `canonical` is set.
pub fn find_tpcs(graph: &CayleyGraph, opts: &SearchOptions) -> SearchResult {
    let n = graph.order();
    if !degree_admits_code(n, graph.degree()) {
        return SearchResult::empty();
    }
    let inst = ExactCoverInstance::from_graph(graph);
    let cap = match opts.mode {
        SearchMode::First => Some(1),
        _ => opts.limit,
    };
    let keep = opts.mode != SearchMode::Count || opts.canonical;
    let (mut solutions, found) = run(&inst, cap, keep, opts.parallel);
    let exhausted = cap.is_none_or(|c| found < c as u64);
    let count = if opts.canonical {
        let reps: BTreeSet<VertexSet> =
            solutions.iter().map(|c| canonical_translate(graph.group(), c)).collect();
        solutions = reps.into_iter().collect();
        solutions.len() as u64
    } else {
        found
    };
    debug_assert!(solutions.iter().all(|c| verify_tpc(graph, c).ok));
    if opts.mode == SearchMode::Count {
        solutions.clear();
    } else if opts.mode == SearchMode::All {
        solutions.sort();
    }
    SearchResult { solutions, count, exhausted }
}

fn run(inst: &ExactCoverInstance, cap: Option<usize>, keep: bool, parallel: bool) -> (Vec<VertexSet>, u64) {
    let (unc, avail) = inst.full_state();
    if !parallel {
        return inst.collect(unc, avail, Vec::new(), cap, keep);
    }
    let Some((_, candidates)) = inst.choose_column(&unc, &avail) else {
        return inst.collect(unc, avail, Vec::new(), cap, keep);
    };
    let branches: Vec<(Vec<VertexSet>, u64)> = candidates
        .to_vec()
        .into_par_iter()
        .map(|v| {
            let (u, a) = inst.select(v, &unc, &avail);
            inst.collect(u, a, vec![v], cap, keep)
        })
        .collect();
    // Concatenating branches in candidate order reproduces the sequential
    // depth-first order; truncating at the cap reproduces its early stop.
    let mut solutions = Vec::new();
    let mut count = 0u64;
    for (sols, c) in branches {
        solutions.extend(sols);
        count += c;
    }
    if let Some(c) = cap {
        solutions.truncate(c);
        count = count.min(c as u64);
    }
    (solutions, count)
}

/// Partition of the vertex set into total perfect codes, found by repeatedly
/// picking a code through the smallest remaining vertex among the remaining
/// vertices and backtracking over those choices.
pub fn find_tpc_partition(graph: &CayleyGraph) -> Option<Vec<VertexSet>> {
    let n = graph.order();
    if !degree_admits_code(n, graph.degree()) {
        return None;
    }
    let inst = ExactCoverInstance::from_graph(graph);
    let mut parts = Vec::new();
    if !partition_layer(&inst, VertexSet::full(n), &mut parts) {
        return None;
    }
    debug_assert!(verify_pseudocover_partition(graph, &parts).is_ok_and(|v| v.ok));
    Some(parts)
}

fn partition_layer(inst: &ExactCoverInstance, remaining: VertexSet, parts: &mut Vec<VertexSet>) -> bool {
    let Some(m) = remaining.first() else {
        return true;
    };
    let (unc, avail) = inst.select(m, &VertexSet::full(inst.n), &remaining);
    let mut done = false;
    let _ = inst.solve(unc, avail, &mut vec![m], &mut |rows| {
        let code = VertexSet::from_indices(inst.n, rows.iter().copied());
        let rest = remaining.difference(&code);
        parts.push(code);
        if partition_layer(inst, rest, parts) {
            done = true;
            return ControlFlow::Break(());
        }
        parts.pop();
        ControlFlow::Continue(())
    });
    done
}

/// Normal subgroups that are total perfect codes in `Cay(G, S)`.
pub fn find_subgroup_tpcs(graph: &CayleyGraph) -> Result<Vec<VertexSet>> {
    let g = graph.group();
    let s = graph.connection_set().set();
    let mut out = Vec::new();
    for n in enumerate_normal_subgroups(g)? {
        if check_normal_subgroup_code(g, s, &n)?.verdict.ok {
            debug_assert!(verify_tpc(graph, &n).ok);
            out.push(n);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_cayley;
    use crate::group::{closure, make_group};

    fn graph(spec: &str, s: &[usize]) -> CayleyGraph {
        let g = make_group(spec).unwrap();
        build_cayley(&g, &g.set_of(s).unwrap()).unwrap()
    }

    fn naive(gr: &CayleyGraph) -> Vec<VertexSet> {
        let n = gr.order();
        (0u64..1 << n)
            .map(|m| VertexSet::from_indices(n, (0..n).filter(|&i| m >> i & 1 == 1)))
            .filter(|c| verify_tpc(gr, c).ok)
            .collect()
    }

    fn all(gr: &CayleyGraph) -> Vec<VertexSet> {
        find_tpcs(gr, &SearchOptions::new(SearchMode::All)).solutions
    }

    #[test]
    fn q3_fast_fails() {
        let gr = graph("elem2:3", &[1, 2, 4]);
        let r = find_tpcs(&gr, &SearchOptions::new(SearchMode::Count));
        assert_eq!(r.count, 0);
        assert!(r.exhausted);
        assert!(find_tpc_partition(&gr).is_none());
    }

    #[test]
    fn q4_contains_example_cosets() {
        let gr = graph("elem2:4", &[1, 2, 4, 8]);
        let sols = all(&gr);
        let g = gr.group();
        let c0 = g.set_of(&g.parse_elements("0000,1110,0001,1111").unwrap()).unwrap();
        for e in [0, 1, 2, 4] {
            assert!(sols.contains(&right_translate(g, &c0, e)));
        }
        assert_eq!(sols, naive(&gr));
        let parts = find_tpc_partition(&gr).unwrap();
        assert_eq!(parts.len(), 4);
        assert!(verify_pseudocover_partition(&gr, &parts).unwrap().ok);
    }

    #[test]
    fn k33_has_nine_codes() {
        let gr = graph("sym:3", &[1, 2, 5]);
        let sols = all(&gr);
        assert_eq!(sols.len(), 9);
        assert_eq!(sols, naive(&gr));
        let even = [0usize, 3, 4];
        assert!(sols.iter().all(|c| c.len() == 2 && c.iter().filter(|v| even.contains(v)).count() == 1));
    }

    #[test]
    fn z18_partition_and_subgroup_codes() {
        let gr = graph("cyclic:18", &[1, 9, 17]);
        let parts = find_tpc_partition(&gr).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(verify_pseudocover_partition(&gr, &parts).unwrap().ok);
        let g = gr.group();
        let sub = find_subgroup_tpcs(&gr).unwrap();
        assert_eq!(sub, vec![closure(g, &g.set_of(&[3]).unwrap())]);
    }

    #[test]
    fn subgroup_codes_in_q4_and_odd_groups() {
        let gr = graph("elem2:4", &[1, 2, 4, 8]);
        let g = gr.group();
        let c0 = g.set_of(&g.parse_elements("0000,1110,0001,1111").unwrap()).unwrap();
        assert!(find_subgroup_tpcs(&gr).unwrap().contains(&c0));
        let z3sq = make_group("product:(cyclic:3),(cyclic:3)").unwrap();
        let s = z3sq.set_of(&[1, 2, 3, 6]).unwrap();
        let gr = build_cayley(&z3sq, &s).unwrap();
        assert!(find_subgroup_tpcs(&gr).unwrap().is_empty());
        assert_eq!(find_tpcs(&gr, &SearchOptions::new(SearchMode::Count)).count, 0);
    }

    #[test]
    fn modes_and_limits() {
        let gr = graph("elem2:4", &[1, 2, 4, 8]);
        let total = all(&gr).len() as u64;
        let count = find_tpcs(&gr, &SearchOptions::new(SearchMode::Count));
        assert_eq!(count.count, total);
        assert!(count.solutions.is_empty());
        let first = find_tpcs(&gr, &SearchOptions::new(SearchMode::First));
        assert_eq!(first.solutions.len(), 1);
        assert!(!first.exhausted);
        let mut opts = SearchOptions::new(SearchMode::All);
        opts.limit = Some(3);
        let limited = find_tpcs(&gr, &opts);
        assert_eq!(limited.solutions.len(), 3);
        assert!(limited.limit_reached());
        opts.limit = Some(10_000);
        assert!(find_tpcs(&gr, &opts).exhausted);
    }

    #[test]
    fn parallel_matches_sequential() {
        for (spec, s) in [("elem2:4", vec![1, 2, 4, 8]), ("cyclic:12", vec![1, 6, 11]), ("dihedral:4", vec![4, 5, 6, 7])] {
            let gr = graph(spec, &s);
            for mode in [SearchMode::First, SearchMode::All, SearchMode::Count] {
                for limit in [None, Some(2)] {
                    for canonical in [false, true] {
                        let mut opts = SearchOptions { mode, limit, canonical, parallel: false };
                        let seq = find_tpcs(&gr, &opts);
                        opts.parallel = true;
                        assert_eq!(find_tpcs(&gr, &opts), seq, "{spec} {mode:?} {limit:?} {canonical}");
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_quotients_by_right_translation() {
        let gr = graph("cyclic:12", &[1, 6, 11]);
        let g = gr.group();
        let sols = all(&gr);
        let mut opts = SearchOptions::new(SearchMode::All);
        opts.canonical = true;
        let reps = find_tpcs(&gr, &opts);
        let mut orbits: BTreeSet<BTreeSet<VertexSet>> = BTreeSet::new();
        for c in &sols {
            orbits.insert((0..12).map(|x| right_translate(g, c, x)).collect());
        }
        assert_eq!(reps.solutions.len(), orbits.len());
        for r in &reps.solutions {
            assert_eq!(&canonical_translate(g, r), r);
        }
    }

    #[test]
    fn solution_set_is_closed_under_right_translation() {
        for (spec, s) in [("dihedral:4", vec![1, 3, 4]), ("cyclic:20", vec![1, 2, 10, 18, 19]), ("sym:3", vec![2, 5])] {
            let gr = graph(spec, &s);
            let g = gr.group();
            let sols: BTreeSet<VertexSet> = all(&gr).into_iter().collect();
            for c in &sols {
                for x in 0..g.order() {
                    assert!(sols.contains(&right_translate(g, c, x)));
                }
            }
        }
    }
}
