//! Cayley graphs `Cay(G, S)`: `x ~ y` iff `x·y⁻¹ ∈ S`, so the neighbourhood
//! of `v` is `S·v`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, inverse_set, is_conjugation_closed, Group, VertexSet};

/// An identity-free, inverse-closed connection set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSet {
    set: VertexSet,
    classes: Vec<VertexSet>,
    conjugation_closed: bool,
}

impl ConnectionSet {
    pub fn new(g: &Group, set: VertexSet) -> Result<ConnectionSet> {
        if set.universe() != g.order() {
            return Err(Error::MalformedElements("connection set has the wrong universe".into()));
        }
        if set.contains(0) {
            return Err(Error::IdentityInConnectionSet);
        }
        if let Some(x) = set.iter().find(|&x| !set.contains(g.inv(x))) {
            return Err(Error::NotInverseClosed { element: x });
        }
        let conjugation_closed = is_conjugation_closed(g, &set);
        let classes = if conjugation_closed {
            conjugacy_classes(g)
                .parts()
                .iter()
                .filter(|k| k.is_subset(&set) && !k.is_empty())
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        Ok(ConnectionSet { set, classes, conjugation_closed })
    }

    pub fn set(&self) -> &VertexSet {
        &self.set
    }

    /// Conjugacy classes making up the set; empty unless conjugation-closed.
    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn is_conjugation_closed(&self) -> bool {
        self.conjugation_closed
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    group: Group,
    conn: ConnectionSet,
    adj: Vec<VertexSet>,
}

impl CayleyGraph {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn connection_set(&self) -> &ConnectionSet {
        &self.conn
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn degree(&self) -> usize {
        self.conn.len()
    }

    /// Neighbourhood row `S·v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[v].contains(u)
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        self.adj
            .iter()
            .map(|row| (0..self.order()).map(|u| i64::from(row.contains(u))).collect())
            .collect()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.order() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"Cay({})\" {{", self.group.label());
        for v in 0..self.order() {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", self.group.format_element(v));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            group: self.group.label().to_string(),
            s: self.conn.set().to_vec(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// `{"group": label, "S": [...], "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, Serialize)]
pub struct GraphJson {
    pub group: String,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

pub fn build_cayley(g: &Group, s: &VertexSet) -> Result<CayleyGraph> {
    let conn = ConnectionSet::new(g, s.clone())?;
    Ok(build_from_connection_set(g, conn))
}

pub fn build_from_connection_set(g: &Group, conn: ConnectionSet) -> CayleyGraph {
    let n = g.order();
    let gens = conn.set().to_vec();
    let adj = (0..n)
        .map(|v| VertexSet::from_indices(n, gens.iter().map(|&s| g.mul(s, v))))
        .collect();
    CayleyGraph { group: g.clone(), conn, adj }
}

/// Smallest inverse-closed (and optionally conjugation-closed) superset of `seed`.
pub fn close_connection_set(
    g: &Group,
    seed: &VertexSet,
    under_conjugation: bool,
) -> Result<ConnectionSet> {
    if seed.contains(0) {
        return Err(Error::IdentityInConnectionSet);
    }
    let mut set = seed.union(&inverse_set(g, seed));
    if under_conjugation && !g.is_abelian() {
        let mut grown = g.empty_set();
        for x in &set {
            for h in 0..g.order() {
                grown.insert(g.conjugate(h, x));
            }
        }
        set = grown;
    }
    ConnectionSet::new(g, set)
}

/// Breadth-first search from the identity.
pub fn is_connected(graph: &CayleyGraph) -> bool {
    let n = graph.order();
    let mut seen = VertexSet::new(n);
    seen.insert(0);
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        for u in graph.neighbors(v) {
            if !seen.contains(u) {
                seen.insert(u);
                frontier.push(u);
            }
        }
    }
    seen.len() == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{closure, make_group};

    fn graph(spec: &str, s: &[usize]) -> CayleyGraph {
        let g = make_group(spec).unwrap();
        build_cayley(&g, &g.set_of(s).unwrap()).unwrap()
    }

    fn check_invariants(gr: &CayleyGraph) {
        let a = gr.adjacency_matrix();
        let n = gr.order();
        for u in 0..n {
            assert_eq!(a[u][u], 0);
            assert_eq!(a[u].iter().sum::<i64>() as usize, gr.degree());
            for v in 0..n {
                assert_eq!(a[u][v], a[v][u]);
                let g = gr.group();
                assert_eq!(a[u][v] == 1, gr.connection_set().set().contains(g.mul(u, g.inv(v))));
            }
        }
    }

    #[test]
    fn four_cycle() {
        let gr = graph("cyclic:4", &[1, 3]);
        check_invariants(&gr);
        assert_eq!(gr.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn hypercube_q4() {
        let gr = graph("elem2:4", &[1, 2, 4, 8]);
        check_invariants(&gr);
        assert_eq!(gr.order(), 16);
        assert_eq!(gr.degree(), 4);
        assert!(is_connected(&gr));
    }

    #[test]
    fn sym3_transpositions_is_k33() {
        let gr = graph("sym:3", &[1, 2, 5]);
        check_invariants(&gr);
        let even = [0usize, 3, 4];
        for u in 0..6 {
            for v in 0..6 {
                let expect = even.contains(&u) != even.contains(&v);
                assert_eq!(gr.is_adjacent(u, v), expect, "{u} {v}");
            }
        }
        assert!(gr.connection_set().is_conjugation_closed());
        assert_eq!(gr.connection_set().classes().len(), 1);
    }

    #[test]
    fn connection_set_errors() {
        let g = make_group("cyclic:18").unwrap();
        assert_eq!(
            build_cayley(&g, &g.set_of(&[0, 1, 17]).unwrap()).unwrap_err(),
            Error::IdentityInConnectionSet
        );
        assert_eq!(
            build_cayley(&g, &g.set_of(&[1]).unwrap()).unwrap_err(),
            Error::NotInverseClosed { element: 1 }
        );
    }

    #[test]
    fn closing_connection_sets() {
        let g = make_group("cyclic:18").unwrap();
        let c = close_connection_set(&g, &g.set_of(&[1]).unwrap(), false).unwrap();
        assert_eq!(c.set().to_vec(), vec![1, 17]);
        let again = close_connection_set(&g, c.set(), false).unwrap();
        assert_eq!(again, c);
        let s3 = make_group("sym:3").unwrap();
        let c = close_connection_set(&s3, &s3.set_of(&[2]).unwrap(), true).unwrap();
        assert_eq!(c.set().to_vec(), vec![1, 2, 5]);
        let c = close_connection_set(&s3, &s3.set_of(&[2]).unwrap(), false).unwrap();
        assert_eq!(c.set().to_vec(), vec![2]);
        assert!(!c.is_conjugation_closed());
        assert!(close_connection_set(&s3, &s3.set_of(&[0]).unwrap(), true).is_err());
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&graph("cyclic:18", &[1, 17])));
        assert!(!is_connected(&graph("cyclic:18", &[9])));
        assert!(is_connected(&graph("elem2:4", &[1, 2, 4, 8])));
    }

    #[test]
    fn connectivity_matches_closure_and_translation_is_automorphism() {
        for spec in ["cyclic:12", "dihedral:4", "sym:3", "elem2:3"] {
            let g = make_group(spec).unwrap();
            let n = g.order();
            for mask in 1u64..(1 << (n - 1)).min(1 << 11) {
                let seed = VertexSet::from_indices(n, (1..n).filter(|&x| mask >> (x - 1) & 1 == 1));
                let Ok(conn) = close_connection_set(&g, &seed, false) else { continue };
                let gr = build_from_connection_set(&g, conn);
                assert_eq!(is_connected(&gr), closure(&g, gr.connection_set().set()).len() == n);
                for h in 0..n {
                    for v in 0..n {
                        let img: Vec<usize> = gr.neighbors(v).iter().map(|u| g.mul(u, h)).collect();
                        let row = gr.neighbors(g.mul(v, h));
                        assert!(img.iter().all(|&u| row.contains(u)));
                    }
                }
            }
        }
    }

    #[test]
    fn exports() {
        let gr = graph("elem2:2", &[1, 2]);
        let dot = gr.to_dot();
        assert!(dot.starts_with("graph \"Cay(elem2:2)\" {"));
        assert!(dot.contains("  3 [label=\"11\"];"));
        assert!(dot.contains("  0 -- 1;"));
        let json = serde_json::to_string(&gr.to_json()).unwrap();
        assert_eq!(json, r#"{"group":"elem2:2","S":[1,2],"edges":[[0,1],[0,2],[1,3],[2,3]]}"#);
    }
}
