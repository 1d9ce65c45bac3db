//! Verification of total perfect codes and the algebraic characterizations
//! available for Cayley graphs.
//!
//! Every check returns a [`Verdict`]; a failed verdict carries a witness that
//! can be re-checked against the graph. Witnesses always name the first
//! failing vertex or element in index order.

use serde::Serialize;

use crate::cayley::{build_cayley, CayleyGraph};
use crate::error::{Error, Result};
use crate::group::{
    is_conjugation_closed, is_normal, is_subgroup, left_translate, product_set, right_translate,
    Group, VertexSet,
};

/// Largest order for which the characterization checks cross-check themselves
/// against direct verification in debug builds.
const DEBUG_CROSSCHECK_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A vertex with `count != 1` neighbours in the code.
    NeighborCount { vertex: usize, count: usize },
    /// A vertex of the code whose induced degree in the code is not 1.
    InducedDegree { vertex: usize, count: usize },
    /// Two code vertices whose outside-neighbourhoods share `vertex`.
    SharedNeighbor { vertex: usize, first: usize, second: usize },
    /// A vertex outside the code with no neighbour in it.
    Uncovered { vertex: usize },
    OddSize { size: usize },
    /// A cardinality equation `lhs = rhs` that fails.
    Cardinality { equation: String, lhs: usize, rhs: usize },
    /// An element lying in a set that must avoid it, or missing from a set
    /// that must contain it.
    Element { condition: String, element: usize },
    /// Two translates that overlap in `element`.
    Overlap { first: usize, second: usize, element: usize },
    /// A failing part of a partition.
    Part { index: usize, witness: Box<Witness> },
    /// A translate `C·g` (or `g·C`) that fails verification.
    Translate { by: usize, witness: Box<Witness> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Verdict {
        Verdict { ok: true, witness: None }
    }

    pub fn fail(witness: Witness) -> Verdict {
        Verdict { ok: false, witness: Some(witness) }
    }
}

fn check_universe(graph: &CayleyGraph, c: &VertexSet) -> Result<()> {
    if c.universe() != graph.order() {
        return Err(Error::MalformedElements("code has the wrong universe".into()));
    }
    Ok(())
}

/// Every vertex has exactly one neighbour in `c`.
pub fn verify_tpc(graph: &CayleyGraph, c: &VertexSet) -> Verdict {
    for v in 0..graph.order() {
        let count = graph.neighbors(v).intersection_count(c);
        if count != 1 {
            return Verdict::fail(Witness::NeighborCount { vertex: v, count });
        }
    }
    assert_eq!(
        c.len() * graph.degree(),
        graph.order(),
        "a total perfect code has |V|/d elements"
    );
    Verdict::pass()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Edges of the induced matching, smaller endpoint first.
    pub matching: Vec<(usize, usize)>,
}

/// The induced subgraph on `c` is a perfect matching and the sets
/// `Γ(v) \ C`, `v ∈ C`, partition the complement of `c`.
pub fn check_matching_structure(graph: &CayleyGraph, c: &VertexSet) -> MatchingReport {
    let mut matching = Vec::new();
    let fail = |w| MatchingReport { verdict: Verdict::fail(w), matching: Vec::new() };
    if c.len() % 2 == 1 {
        return fail(Witness::OddSize { size: c.len() });
    }
    for v in c {
        let inside = graph.neighbors(v).intersection(c);
        if inside.len() != 1 {
            return fail(Witness::InducedDegree { vertex: v, count: inside.len() });
        }
        let u = inside.first().expect("one neighbour");
        if v < u {
            matching.push((v, u));
        }
    }
    let n = graph.order();
    let mut owner = vec![usize::MAX; n];
    for v in c {
        for u in graph.neighbors(v).difference(c).iter() {
            if owner[u] != usize::MAX {
                return fail(Witness::SharedNeighbor { vertex: u, first: owner[u], second: v });
            }
            owner[u] = v;
        }
    }
    if let Some(u) = (0..n).find(|&u| !c.contains(u) && owner[u] == usize::MAX) {
        return fail(Witness::Uncovered { vertex: u });
    }
    MatchingReport { verdict: Verdict::pass(), matching }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslateReport {
    /// Each right translate `C·g`, `g ∈ S`, is a code.
    pub right_translates_are_codes: Verdict,
    /// The left translates `g·C`, `g ∈ S`, partition `G`.
    pub left_translates_partition: Verdict,
    /// The right translates partition `G`; only checked when `S` is
    /// conjugation-closed.
    pub right_translates_partition: Option<Verdict>,
    /// `(g, C·g)` for `g ∈ S` in increasing order.
    pub right_translates: Vec<(usize, Vec<usize>)>,
    pub left_translates: Vec<(usize, Vec<usize>)>,
}

fn translates_partition(n: usize, translates: &[(usize, VertexSet)]) -> Verdict {
    let mut owner = vec![usize::MAX; n];
    for (g, t) in translates {
        for x in t {
            if owner[x] != usize::MAX {
                return Verdict::fail(Witness::Overlap { first: owner[x], second: *g, element: x });
            }
            owner[x] = *g;
        }
    }
    match owner.iter().position(|&o| o == usize::MAX) {
        Some(x) => Verdict::fail(Witness::Element { condition: "covered by a translate".into(), element: x }),
        None => Verdict::pass(),
    }
}

/// Translate properties of a verified code.
pub fn check_translates(graph: &CayleyGraph, c: &VertexSet) -> Result<TranslateReport> {
    check_universe(graph, c)?;
    if !verify_tpc(graph, c).ok {
        return Err(Error::NotACode);
    }
    let g = graph.group();
    let s = graph.connection_set();
    let right: Vec<(usize, VertexSet)> =
        s.set().iter().map(|x| (x, right_translate(g, c, x))).collect();
    let left: Vec<(usize, VertexSet)> =
        s.set().iter().map(|x| (x, left_translate(g, x, c))).collect();

    let mut right_codes = Verdict::pass();
    for (x, t) in &right {
        let v = verify_tpc(graph, t);
        if let Some(w) = v.witness {
            right_codes = Verdict::fail(Witness::Translate { by: *x, witness: Box::new(w) });
            break;
        }
    }
    let left_partition = translates_partition(g.order(), &left);
    let right_partition =
        s.is_conjugation_closed().then(|| translates_partition(g.order(), &right));
    Ok(TranslateReport {
        right_translates_are_codes: right_codes,
        left_translates_partition: left_partition,
        right_translates_partition: right_partition,
        right_translates: right.into_iter().map(|(x, t)| (x, t.to_vec())).collect(),
        left_translates: left.into_iter().map(|(x, t)| (x, t.to_vec())).collect(),
    })
}

fn require_connection_set(g: &Group, s: &VertexSet) -> Result<()> {
    if s.universe() != g.order() {
        return Err(Error::MalformedElements("connection set has the wrong universe".into()));
    }
    if s.contains(0) {
        return Err(Error::IdentityInConnectionSet);
    }
    if let Some(x) = s.iter().find(|&x| !s.contains(g.inv(x))) {
        return Err(Error::NotInverseClosed { element: x });
    }
    Ok(())
}

fn cardinality(equation: &str, lhs: usize, rhs: usize) -> Option<Verdict> {
    (lhs != rhs).then(|| Verdict::fail(Witness::Cardinality { equation: equation.into(), lhs, rhs }))
}

fn debug_crosscheck(g: &Group, s: &VertexSet, c: &VertexSet, verdict: &Verdict, what: &str) {
    if cfg!(debug_assertions) && g.order() <= DEBUG_CROSSCHECK_LIMIT {
        let graph = build_cayley(g, s).expect("validated connection set");
        debug_assert_eq!(verify_tpc(&graph, c).ok, verdict.ok, "{what} disagrees with verify_tpc");
    }
}

/// `|C|·|S| = |G|` and `C ∩ (S² \ {1})·C = ∅`, for a conjugation-closed `C`.
pub fn check_theorem_pseudo(g: &Group, s: &VertexSet, c: &VertexSet) -> Result<Verdict> {
    require_connection_set(g, s)?;
    if !is_conjugation_closed(g, c) {
        return Err(Error::CodeNotConjugationClosed);
    }
    let verdict = theorem_pseudo_conditions(g, s, c);
    debug_crosscheck(g, s, c, &verdict, "check_theorem_pseudo");
    Ok(verdict)
}

fn theorem_pseudo_conditions(g: &Group, s: &VertexSet, c: &VertexSet) -> Verdict {
    if let Some(v) = cardinality("|C||S| = |G|", c.len() * s.len(), g.order()) {
        return v;
    }
    let mut s2 = product_set(g, s, s);
    s2.remove(0);
    let blocked = product_set(g, &s2, c);
    match blocked.intersection(c).first() {
        Some(x) => Verdict::fail(Witness::Element {
            condition: "C ∩ (S²\\{1})C = ∅".into(),
            element: x,
        }),
        None => Verdict::pass(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalCodeVerdict {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// The unique element of `N ∩ S`, an involution, when the verdict is ok.
    pub involution: Option<usize>,
}

fn require_normal(g: &Group, n: &VertexSet) -> Result<()> {
    if n.universe() != g.order() || !is_subgroup(g, n) {
        return Err(Error::NotASubgroup);
    }
    if !is_normal(g, n)? {
        return Err(Error::NotNormal);
    }
    Ok(())
}

/// `|G:N| = |S|` and `N ∩ S² = {1}` for a normal subgroup `N`.
pub fn check_normal_subgroup_code(
    g: &Group,
    s: &VertexSet,
    n: &VertexSet,
) -> Result<NormalCodeVerdict> {
    require_connection_set(g, s)?;
    require_normal(g, n)?;
    let verdict = normal_subgroup_conditions(g, s, n);
    debug_crosscheck(g, s, n, &verdict, "check_normal_subgroup_code");
    let involution = if verdict.ok {
        let meet = n.intersection(s).to_vec();
        if meet.len() != 1 || g.mul(meet[0], meet[0]) != 0 {
            return Err(Error::InternalInvariantViolated(format!(
                "N ∩ S = {meet:?} is not a single involution"
            )));
        }
        Some(meet[0])
    } else {
        None
    };
    Ok(NormalCodeVerdict { verdict, involution })
}

fn normal_subgroup_conditions(g: &Group, s: &VertexSet, n: &VertexSet) -> Verdict {
    if let Some(v) = cardinality("|G:N| = |S|", n.len() * s.len(), g.order()) {
        return v;
    }
    let s2 = product_set(g, s, s);
    match n.intersection(&s2).iter().find(|&x| x != 0) {
        Some(x) => Verdict::fail(Witness::Element { condition: "N ∩ S² = {1}".into(), element: x }),
        None => Verdict::pass(),
    }
}

/// `N ∪ gN` is a code iff `|G:N| = 2|S|`, `N ∩ S² = {1}` and
/// `N ∩ S = gN ∩ S² = g⁻¹N ∩ S² = ∅`.
pub fn check_union_coset_code(
    g: &Group,
    s: &VertexSet,
    n: &VertexSet,
    x: usize,
) -> Result<Verdict> {
    require_connection_set(g, s)?;
    require_normal(g, n)?;
    if x >= g.order() {
        return Err(Error::ElementOutOfRange { element: x, order: g.order() });
    }
    if n.contains(x) {
        return Err(Error::ElementInSubgroup(x));
    }
    if !s.contains(x) {
        return Err(Error::ElementNotInS(x));
    }
    let verdict = union_coset_conditions(g, s, n, x);
    if cfg!(debug_assertions) && g.order() <= DEBUG_CROSSCHECK_LIMIT {
        let code = n.union(&left_translate(g, x, n));
        debug_crosscheck(g, s, &code, &verdict, "check_union_coset_code");
    }
    Ok(verdict)
}

fn union_coset_conditions(g: &Group, s: &VertexSet, n: &VertexSet, x: usize) -> Verdict {
    if let Some(v) = cardinality("|G:N| = 2|S|", n.len() * 2 * s.len(), g.order()) {
        return v;
    }
    let s2 = product_set(g, s, s);
    if let Some(e) = n.intersection(&s2).iter().find(|&e| e != 0) {
        return Verdict::fail(Witness::Element { condition: "N ∩ S² = {1}".into(), element: e });
    }
    if let Some(e) = n.intersection(s).first() {
        return Verdict::fail(Witness::Element { condition: "N ∩ S = ∅".into(), element: e });
    }
    let gn = left_translate(g, x, n);
    if let Some(e) = gn.intersection(&s2).first() {
        return Verdict::fail(Witness::Element { condition: "gN ∩ S² = ∅".into(), element: e });
    }
    let ginv_n = left_translate(g, g.inv(x), n);
    if let Some(e) = ginv_n.intersection(&s2).first() {
        return Verdict::fail(Witness::Element { condition: "g⁻¹N ∩ S² = ∅".into(), element: e });
    }
    Verdict::pass()
}

/// For abelian `G`: `|C|·|S| = |G|` and `(C − C) ∩ (S + S) = {0}`. When `C`
/// is a subgroup this reduces to `C ∩ (S + S) = {0}`.
pub fn check_abelian_condition(g: &Group, s: &VertexSet, c: &VertexSet) -> Result<Verdict> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    require_connection_set(g, s)?;
    let verdict = abelian_conditions(g, s, c);
    debug_crosscheck(g, s, c, &verdict, "check_abelian_condition");
    Ok(verdict)
}

fn abelian_conditions(g: &Group, s: &VertexSet, c: &VertexSet) -> Verdict {
    if let Some(v) = cardinality("|C||S| = |G|", c.len() * s.len(), g.order()) {
        return v;
    }
    let s2 = product_set(g, s, s);
    let differences =
        if is_subgroup(g, c) { c.clone() } else { product_set(g, c, &crate::group::inverse_set(g, c)) };
    match differences.intersection(&s2).iter().find(|&x| x != 0) {
        Some(x) => Verdict::fail(Witness::Element {
            condition: "(C − C) ∩ (S + S) = {0}".into(),
            element: x,
        }),
        None => Verdict::pass(),
    }
}

/// Every part is a code; when so, each part induces a perfect matching and
/// every vertex has exactly one neighbour in each other part.
pub fn verify_pseudocover_partition(graph: &CayleyGraph, parts: &[VertexSet]) -> Result<Verdict> {
    let n = graph.order();
    crate::group::GroupPartition::new(n, parts.to_vec())?;
    if graph.degree() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    for (i, p) in parts.iter().enumerate() {
        if let Some(w) = verify_tpc(graph, p).witness {
            return Ok(Verdict::fail(Witness::Part { index: i, witness: Box::new(w) }));
        }
    }
    for v in 0..n {
        for (j, p) in parts.iter().enumerate() {
            let count = graph.neighbors(v).intersection_count(p);
            if count != 1 {
                return Err(Error::InternalInvariantViolated(format!(
                    "vertex {v} has {count} neighbours in part {j} of a code partition"
                )));
            }
        }
    }
    Ok(Verdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_cayley;
    use crate::group::{closure, make_group};

    fn setup(spec: &str, s: &[usize]) -> (Group, VertexSet, CayleyGraph) {
        let g = make_group(spec).unwrap();
        let s = g.set_of(s).unwrap();
        let gr = build_cayley(&g, &s).unwrap();
        (g, s, gr)
    }

    fn q4() -> (Group, VertexSet, CayleyGraph) {
        setup("elem2:4", &[1, 2, 4, 8])
    }

    fn c0(g: &Group) -> VertexSet {
        g.set_of(&g.parse_elements("0000,1110,0001,1111").unwrap()).unwrap()
    }

    #[test]
    fn verify_examples() {
        let (g, _, gr) = q4();
        assert!(verify_tpc(&gr, &c0(&g)).ok);
        let (g, _, gr) = setup("cyclic:18", &[1, 9, 17]);
        assert!(verify_tpc(&gr, &g.set_of(&[0, 3, 6, 9, 12, 15]).unwrap()).ok);
        let c = g.set_of(&[0, 3]).unwrap();
        let v = verify_tpc(&gr, &c);
        // The first failing vertex is 0 (neighbours 1, 9, 17); 6 (neighbours 5, 7, 15) fails too.
        assert_eq!(v, Verdict::fail(Witness::NeighborCount { vertex: 0, count: 0 }));
        assert_eq!(gr.neighbors(6).to_vec(), vec![5, 7, 15]);
        assert_eq!(gr.neighbors(6).intersection_count(&c), 0);
        let (g, _, gr) = setup("cyclic:20", &[1, 2, 10, 18, 19]);
        assert!(verify_tpc(&gr, &g.set_of(&[0, 5, 10, 15]).unwrap()).ok);
    }

    #[test]
    fn matching_examples() {
        let (g, _, gr) = q4();
        let r = check_matching_structure(&gr, &c0(&g));
        assert!(r.verdict.ok);
        // 0000–0001 is 0–8 and 1110–1111 is 7–15.
        assert_eq!(r.matching, vec![(0, 8), (7, 15)]);
        let (g, _, gr) = setup("cyclic:18", &[1, 9, 17]);
        let r = check_matching_structure(&gr, &g.set_of(&[0, 3, 6, 9, 12, 15]).unwrap());
        assert!(r.verdict.ok);
        assert_eq!(r.matching, vec![(0, 9), (3, 12), (6, 15)]);
        let r = check_matching_structure(&gr, &g.set_of(&[0, 3, 6]).unwrap());
        assert_eq!(r.verdict.witness, Some(Witness::OddSize { size: 3 }));
    }

    #[test]
    fn matching_agrees_with_verify_exhaustively() {
        for (spec, s) in [("cyclic:8", vec![1, 7]), ("cyclic:6", vec![1, 3, 5]), ("sym:3", vec![1, 2, 5])] {
            let (g, _, gr) = setup(spec, &s);
            let n = g.order();
            for mask in 0u64..(1 << n) {
                let c = VertexSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1));
                assert_eq!(check_matching_structure(&gr, &c).verdict.ok, verify_tpc(&gr, &c).ok);
            }
        }
    }

    #[test]
    fn translate_examples() {
        let (g, _, gr) = setup("cyclic:18", &[1, 9, 17]);
        let r = check_translates(&gr, &g.set_of(&[0, 3, 6, 9, 12, 15]).unwrap()).unwrap();
        assert!(r.right_translates_are_codes.ok);
        assert!(r.left_translates_partition.ok);
        assert_eq!(r.right_translates_partition.as_ref().map(|v| v.ok), Some(true));
        assert_eq!(r.right_translates[0], (1, vec![1, 4, 7, 10, 13, 16]));

        let (g, _, gr) = q4();
        let r = check_translates(&gr, &c0(&g)).unwrap();
        assert!(r.right_translates_are_codes.ok && r.left_translates_partition.ok);
        let e1 = g.parse_elements("1000,0110,1001,0111").unwrap();
        let mut e1_sorted = e1.clone();
        e1_sorted.sort();
        assert_eq!(r.right_translates[0], (1, e1_sorted));

        // K3,3: a code is one even and one odd permutation that are adjacent.
        let (g, _, gr) = setup("sym:3", &[1, 2, 5]);
        let c = g.set_of(&[0, 1]).unwrap();
        assert!(verify_tpc(&gr, &c).ok);
        let r = check_translates(&gr, &c).unwrap();
        assert!(r.right_translates_are_codes.ok && r.left_translates_partition.ok);
        assert_eq!(r.right_translates_partition.map(|v| v.ok), Some(true));

        assert_eq!(check_translates(&gr, &g.set_of(&[0]).unwrap()).unwrap_err(), Error::NotACode);
    }

    #[test]
    fn right_translates_partition_needs_conjugation_closure() {
        // S = {(12), (13)} in S3 is inverse-closed but not a union of classes.
        let (_, _, gr) = setup("sym:3", &[2, 5]);
        assert!(!gr.connection_set().is_conjugation_closed());
        for mask in 0u64..64 {
            let c = VertexSet::from_indices(6, (0..6).filter(|&i| mask >> i & 1 == 1));
            if verify_tpc(&gr, &c).ok {
                let r = check_translates(&gr, &c).unwrap();
                assert!(r.right_translates_partition.is_none());
                assert!(r.left_translates_partition.ok);
                assert!(r.right_translates_are_codes.ok);
            }
        }
    }

    #[test]
    fn pseudo_theorem_examples() {
        let g = make_group("cyclic:18").unwrap();
        let s = g.set_of(&[1, 9, 17]).unwrap();
        assert!(check_theorem_pseudo(&g, &s, &g.set_of(&[0, 3, 6, 9, 12, 15]).unwrap()).unwrap().ok);
        let v = check_theorem_pseudo(&g, &s, &g.full_set()).unwrap();
        assert!(matches!(v.witness, Some(Witness::Cardinality { .. })));
        let g = make_group("cyclic:20").unwrap();
        let s = g.set_of(&[1, 2, 10, 18, 19]).unwrap();
        assert!(check_theorem_pseudo(&g, &s, &g.set_of(&[0, 5, 10, 15]).unwrap()).unwrap().ok);

        let s3 = make_group("sym:3").unwrap();
        let t = s3.set_of(&[1, 2, 5]).unwrap();
        assert_eq!(
            check_theorem_pseudo(&s3, &t, &s3.set_of(&[0, 1]).unwrap()),
            Err(Error::CodeNotConjugationClosed)
        );
    }

    #[test]
    fn normal_subgroup_examples() {
        let g = make_group("cyclic:18").unwrap();
        let s = g.set_of(&[1, 9, 17]).unwrap();
        let n = closure(&g, &g.set_of(&[3]).unwrap());
        let r = check_normal_subgroup_code(&g, &s, &n).unwrap();
        assert!(r.verdict.ok);
        assert_eq!(r.involution, Some(9));

        let (g, s, _) = q4();
        let r = check_normal_subgroup_code(&g, &s, &c0(&g)).unwrap();
        assert!(r.verdict.ok);
        assert_eq!(r.involution, Some(8));

        let g = make_group("cyclic:20").unwrap();
        let s = g.set_of(&[1, 2, 10, 18, 19]).unwrap();
        let n = closure(&g, &g.set_of(&[5]).unwrap());
        let r = check_normal_subgroup_code(&g, &s, &n).unwrap();
        assert!(r.verdict.ok);
        assert_eq!(r.involution, Some(10));

        let s3 = make_group("sym:3").unwrap();
        let t = s3.set_of(&[1, 2, 5]).unwrap();
        assert_eq!(
            check_normal_subgroup_code(&s3, &t, &s3.set_of(&[0, 2]).unwrap()),
            Err(Error::NotNormal)
        );
        assert_eq!(
            check_normal_subgroup_code(&s3, &t, &s3.set_of(&[0, 1, 2]).unwrap()),
            Err(Error::NotASubgroup)
        );
    }

    #[test]
    fn union_coset_examples() {
        let g = make_group("cyclic:4").unwrap();
        let s = g.set_of(&[1, 3]).unwrap();
        let trivial = g.set_of(&[0]).unwrap();
        assert!(check_union_coset_code(&g, &s, &trivial, 1).unwrap().ok);
        let gr = build_cayley(&g, &s).unwrap();
        assert!(verify_tpc(&gr, &g.set_of(&[0, 1]).unwrap()).ok);

        // Index clause fails fast.
        let g8 = make_group("cyclic:8").unwrap();
        let s8 = g8.set_of(&[1, 7]).unwrap();
        let v = check_union_coset_code(&g8, &s8, &g8.set_of(&[0]).unwrap(), 1).unwrap();
        assert!(matches!(v.witness, Some(Witness::Cardinality { .. })));

        // Cay(Z8, {1,7}) with N = {0,4}, g = 1: N ∪ (1 + N) = {0,1,4,5} is a code of C8.
        let s8 = g8.set_of(&[1, 7]).unwrap();
        let n = g8.set_of(&[0, 4]).unwrap();
        assert!(check_union_coset_code(&g8, &s8, &n, 1).unwrap().ok);
        assert!(verify_tpc(&build_cayley(&g8, &s8).unwrap(), &g8.set_of(&[0, 1, 4, 5]).unwrap()).ok);

        // Cay(Z12, {1,6,11}) with N = {0,6}: S + S = {0,2,5,7,10} meets N only in 0, but 6 ∈ N ∩ S.
        let g12 = make_group("cyclic:12").unwrap();
        let s12 = g12.set_of(&[1, 6, 11]).unwrap();
        let v = check_union_coset_code(&g12, &s12, &g12.set_of(&[0, 6]).unwrap(), 1).unwrap();
        assert_eq!(v.witness, Some(Witness::Element { condition: "N ∩ S = ∅".into(), element: 6 }));

        assert_eq!(check_union_coset_code(&g, &s, &trivial, 2), Err(Error::ElementNotInS(2)));
        let n2 = g.set_of(&[0, 2]).unwrap();
        assert_eq!(check_union_coset_code(&g, &g.set_of(&[2]).unwrap(), &n2, 2), Err(Error::ElementInSubgroup(2)));
    }

    #[test]
    fn abelian_examples() {
        let g = make_group("cyclic:18").unwrap();
        let s = g.set_of(&[1, 9, 17]).unwrap();
        assert!(check_abelian_condition(&g, &s, &g.set_of(&[0, 3, 6, 9, 12, 15]).unwrap()).unwrap().ok);
        let v = check_abelian_condition(&g, &s, &g.set_of(&[0, 3, 6, 9, 12, 16]).unwrap()).unwrap();
        assert!(!v.ok);
        let g = make_group("cyclic:20").unwrap();
        let s = g.set_of(&[1, 2, 10, 18, 19]).unwrap();
        assert!(check_abelian_condition(&g, &s, &g.set_of(&[0, 5, 10, 15]).unwrap()).unwrap().ok);
        let s3 = make_group("sym:3").unwrap();
        assert_eq!(
            check_abelian_condition(&s3, &s3.set_of(&[1, 2, 5]).unwrap(), &s3.set_of(&[0]).unwrap()),
            Err(Error::NotAbelian)
        );
    }

    #[test]
    fn pseudocover_examples() {
        let (g, _, gr) = q4();
        let c = c0(&g);
        let parts: Vec<VertexSet> = [0usize, 1, 2, 4].iter().map(|&e| right_translate(&g, &c, e)).collect();
        assert!(verify_pseudocover_partition(&gr, &parts).unwrap().ok);

        let (g, _, gr) = setup("cyclic:18", &[1, 9, 17]);
        let c = g.set_of(&[0, 3, 6, 9, 12, 15]).unwrap();
        let parts: Vec<VertexSet> = [0usize, 1, 17].iter().map(|&e| right_translate(&g, &c, e)).collect();
        assert!(verify_pseudocover_partition(&gr, &parts).unwrap().ok);

        let bad = vec![g.set_of(&(0..9).collect::<Vec<_>>()).unwrap(), g.set_of(&(9..18).collect::<Vec<_>>()).unwrap()];
        let v = verify_pseudocover_partition(&gr, &bad).unwrap();
        assert!(matches!(v.witness, Some(Witness::Part { index: 0, .. })));

        let overlapping = vec![g.full_set(), g.set_of(&[0]).unwrap()];
        assert!(matches!(verify_pseudocover_partition(&gr, &overlapping), Err(Error::NotAPartition(_))));

        let (g1, _, gr1) = setup("cyclic:1", &[]);
        assert_eq!(verify_pseudocover_partition(&gr1, &[g1.full_set()]), Err(Error::EmptyEdgeSet));
    }

    /// Two fibre-preserving 2-fold covers of `Cay(G, S)`: the disjoint double
    /// `Cay(G × Z2, S × {0})` and the bipartite double `Cay(G × Z2, S × {1})`,
    /// with fibres `{2v, 2v + 1}`. Preimages of codes are codes.
    #[test]
    fn covering_preimages_are_codes() {
        for (spec, s) in [("cyclic:18", vec![1, 9, 17]), ("cyclic:20", vec![1, 2, 10, 18, 19]), ("sym:3", vec![1, 2, 5])] {
            let (g, _, gr) = setup(spec, &s);
            let cover = make_group(&format!("product:({spec}),(cyclic:2)")).unwrap();
            let n = g.order();
            for layer in [0usize, 1] {
                let lifted = cover.set_of(&s.iter().map(|&x| 2 * x + layer).collect::<Vec<_>>()).unwrap();
                let sigma = build_cayley(&cover, &lifted).unwrap();
                for mask in 0u64..(1 << n) {
                    let c = VertexSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1));
                    if !verify_tpc(&gr, &c).ok {
                        continue;
                    }
                    let pre = cover.set_of(&c.iter().flat_map(|v| [2 * v, 2 * v + 1]).collect::<Vec<_>>()).unwrap();
                    assert!(verify_tpc(&sigma, &pre).ok, "{spec} layer {layer}");
                }
            }
        }
    }

    #[test]
    fn odd_order_circulants_have_no_codes() {
        for n in (1..=15).step_by(2) {
            let g = make_group(&format!("cyclic:{n}")).unwrap();
            let pairs: Vec<usize> = (1..=n / 2).collect();
            for mask in 1u64..(1 << pairs.len()) {
                let s: Vec<usize> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1)
                    .flat_map(|(_, &j)| [j, n - j]).collect();
                let gr = build_cayley(&g, &g.set_of(&s).unwrap()).unwrap();
                for cm in 0u64..(1 << n) {
                    let c = VertexSet::from_indices(n, (0..n).filter(|&i| cm >> i & 1 == 1));
                    assert!(!verify_tpc(&gr, &c).ok);
                }
            }
        }
    }
}
