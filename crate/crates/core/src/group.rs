//! Finite groups on dense element indices with the identity pinned at 0.
//!
//! Element encodings per construction:
//! - `cyclic:n`: index `j` is `a^j`.
//! - `elem2:k`: index is the bit pattern of the vector, coordinate `i` in bit `i`.
//! - `dihedral:n`: `0..n` are rotations `r^i`, `n..2n` are reflections `r^i s`.
//! - `sym:n`: lexicographic rank of the permutation of `0..n`; products
//!   compose right to left, `(στ)(i) = σ(τ(i))`.
//! - `product:(A),(B)`: the pair `(a, b)` is `a·|B| + b`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type VertexSet = BitSet;

/// Largest group order accepted by [`make_group`], except `elem2:k` with `k <= 16`.
pub const MAX_ORDER: usize = 20_000;
pub const MAX_ELEM2_DIMENSION: u32 = 16;
pub const NORMAL_SUBGROUP_GUARD: usize = 512;

#[derive(Clone, Debug)]
enum Law {
    Table(Arc<Vec<u32>>),
    Cyclic(usize),
    Elem2(u32),
    Dihedral(usize),
    Product(Arc<Group>, Arc<Group>),
}

/// A finite group given by its multiplication law.
///
/// Structured families multiply arithmetically; symmetric groups and imported
/// groups carry an explicit table.
#[derive(Clone, Debug)]
pub struct Group {
    order: usize,
    law: Law,
    inv: Arc<Vec<u32>>,
    label: String,
    abelian: bool,
}

/// Serialized group: `{"order": n, "mul": [[...]], "label": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default)]
    pub label: String,
}

impl Group {
    fn from_law(order: usize, law: Law, label: String) -> Group {
        let mut g = Group { order, law, inv: Arc::new(Vec::new()), label, abelian: false };
        let inv: Vec<u32> = match &g.law {
            Law::Cyclic(n) => (0..*n).map(|j| ((n - j) % n) as u32).collect(),
            Law::Elem2(_) => (0..order as u32).collect(),
            Law::Dihedral(n) => (0..2 * n)
                .map(|j| if j < *n { ((n - j) % n) as u32 } else { j as u32 })
                .collect(),
            Law::Product(a, b) => (0..order)
                .map(|x| (a.inv(x / b.order) * b.order + b.inv(x % b.order)) as u32)
                .collect(),
            Law::Table(t) => (0..order)
                .map(|x| {
                    (0..order)
                        .find(|&y| t[x * order + y] == 0)
                        .expect("validated table has inverses") as u32
                })
                .collect(),
        };
        g.inv = Arc::new(inv);
        g.abelian = match &g.law {
            Law::Cyclic(_) | Law::Elem2(_) => true,
            Law::Dihedral(n) => *n <= 2,
            Law::Product(a, b) => a.abelian && b.abelian,
            Law::Table(_) => {
                (0..order).all(|x| (x + 1..order).all(|y| g.mul(x, y) == g.mul(y, x)))
            }
        };
        g
    }

    /// Validates an explicit multiplication table (identity at 0, Latin
    /// square). Associativity is not checked here; see
    /// [`Group::check_associativity`].
    pub fn from_table(mul: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Group> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::SizeOverflow { order: n, limit: MAX_ORDER });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (x, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {x} has length {}", row.len())));
            }
            for &y in row {
                if y >= n {
                    return Err(Error::InvalidTable(format!("entry {y} out of range in row {x}")));
                }
                flat.push(y as u32);
            }
        }
        for x in 0..n {
            if flat[x] as usize != x || flat[x * n] as usize != x {
                return Err(Error::InvalidTable(format!("element 0 is not an identity at {x}")));
            }
        }
        let mut seen = vec![0usize; n];
        for x in 0..n {
            for y in 0..n {
                let v = flat[x * n + y] as usize;
                if seen[v] == 2 * x + 1 {
                    return Err(Error::InvalidTable(format!("row {x} repeats {v}")));
                }
                seen[v] = 2 * x + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for y in 0..n {
            for x in 0..n {
                let v = flat[x * n + y] as usize;
                if seen[v] == 2 * y + 2 {
                    return Err(Error::InvalidTable(format!("column {y} repeats {v}")));
                }
                seen[v] = 2 * y + 2;
            }
        }
        Ok(Group::from_law(n, Law::Table(Arc::new(flat)), label.into()))
    }

    pub fn from_json(json: &GroupJson) -> Result<Group> {
        if json.order != json.mul.len() {
            return Err(Error::InvalidTable(format!(
                "order {} does not match table size {}",
                json.order,
                json.mul.len()
            )));
        }
        let label = if json.label.is_empty() { "json".to_string() } else { json.label.clone() };
        Group::from_table(json.mul.clone(), label)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { order: self.order, mul: self.mul_table(), label: self.label.clone() }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// `Some(n)` when built as `cyclic:n`, so that index `j` is `a^j`.
    pub fn cyclic_order(&self) -> Option<usize> {
        match self.law {
            Law::Cyclic(n) => Some(n),
            _ => None,
        }
    }

    /// `Some(k)` when built as `elem2:k`.
    pub fn elem2_dimension(&self) -> Option<u32> {
        match self.law {
            Law::Elem2(k) => Some(k),
            _ => None,
        }
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.law {
            Law::Cyclic(n) => {
                let s = x + y;
                if s >= *n {
                    s - n
                } else {
                    s
                }
            }
            Law::Elem2(_) => x ^ y,
            Law::Dihedral(n) => {
                let n = *n;
                match (x < n, y < n) {
                    (true, true) => (x + y) % n,
                    (true, false) => n + (x + y - n) % n,
                    (false, true) => n + (x - n + n - y) % n,
                    (false, false) => (x - n + 2 * n - y) % n,
                }
            }
            Law::Product(a, b) => {
                let m = b.order;
                a.mul(x / m, y / m) * m + b.mul(x % m, y % m)
            }
            Law::Table(t) => t[x * self.order + y] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn mul_table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| (0..self.order).map(|y| self.mul(x, y)).collect()).collect()
    }

    /// Full O(n³) associativity sweep; returns the first failing triple.
    pub fn check_associativity(&self) -> std::result::Result<(), (usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err((a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.order)
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.order)
    }

    pub fn set_of(&self, elements: &[usize]) -> Result<VertexSet> {
        let mut s = self.empty_set();
        for &e in elements {
            if e >= self.order {
                return Err(Error::ElementOutOfRange { element: e, order: self.order });
            }
            s.insert(e);
        }
        Ok(s)
    }

    /// Parses a comma-separated element list. Tokens are indices; for
    /// `elem2:k` a token of exactly `k` characters over `{0,1}` is read as a
    /// coordinate string (`"1000"` is `e₁`, index 1).
    pub fn parse_elements(&self, text: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            out.push(self.parse_element(tok)?);
        }
        Ok(out)
    }

    pub fn parse_element(&self, tok: &str) -> Result<usize> {
        if let Some(k) = self.elem2_dimension() {
            if tok.len() == k as usize && tok.chars().all(|c| c == '0' || c == '1') {
                let v = BitSet::from_bit_string(tok).expect("checked characters");
                return Ok(v.to_u64() as usize);
            }
        }
        let e: usize = tok
            .parse()
            .map_err(|_| Error::MalformedElements(format!("cannot parse element `{tok}`")))?;
        if e >= self.order {
            return Err(Error::ElementOutOfRange { element: e, order: self.order });
        }
        Ok(e)
    }

    /// Index as a string, or the coordinate string for `elem2:k`.
    pub fn format_element(&self, x: usize) -> String {
        match self.elem2_dimension() {
            Some(k) => BitSet::from_u64(k as usize, x as u64).to_bit_string(),
            None => x.to_string(),
        }
    }
}

fn malformed(spec: &str, reason: impl Into<String>) -> Error {
    Error::MalformedSpec { spec: spec.to_string(), reason: reason.into() }
}

fn parse_param(spec: &str, value: &str) -> Result<usize> {
    value.trim().parse().map_err(|_| malformed(spec, format!("`{value}` is not a number")))
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::SizeOverflow { order, limit: MAX_ORDER });
    }
    Ok(())
}

/// Splits `(A),(B)` at the top-level comma.
fn split_product(spec: &str, body: &str) -> Result<(String, String)> {
    let body = body.trim();
    let mut depth = 0i32;
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(malformed(spec, "unbalanced parentheses"));
                }
            }
            ',' if depth == 0 => {
                let strip = |s: &str| -> Result<String> {
                    let s = s.trim();
                    s.strip_prefix('(')
                        .and_then(|s| s.strip_suffix(')'))
                        .map(|s| s.to_string())
                        .ok_or_else(|| malformed(spec, "product factors must be parenthesized"))
                };
                return Ok((strip(&body[..i])?, strip(&body[i + 1..])?));
            }
            _ => {}
        }
    }
    Err(malformed(spec, "product needs two factors"))
}

/// Builds a group from a construction string:
/// `cyclic:n`, `elem2:k`, `dihedral:n`, `sym:n`, `product:(A),(B)`.
pub fn make_group(spec: &str) -> Result<Group> {
    let spec = spec.trim();
    let (kind, arg) =
        spec.split_once(':').ok_or_else(|| malformed(spec, "expected `<family>:<parameter>`"))?;
    match kind.trim() {
        "cyclic" => {
            let n = parse_param(spec, arg)?;
            if n == 0 {
                return Err(malformed(spec, "cyclic order must be at least 1"));
            }
            check_order(n)?;
            Ok(Group::from_law(n, Law::Cyclic(n), format!("cyclic:{n}")))
        }
        "elem2" => {
            let k = parse_param(spec, arg)?;
            if !(1..=MAX_ELEM2_DIMENSION as usize).contains(&k) {
                return Err(malformed(spec, "elem2 dimension must be in 1..=16"));
            }
            Ok(Group::from_law(1 << k, Law::Elem2(k as u32), format!("elem2:{k}")))
        }
        "dihedral" => {
            let n = parse_param(spec, arg)?;
            if n < 2 {
                return Err(malformed(spec, "dihedral parameter must be at least 2"));
            }
            check_order(2 * n)?;
            Ok(Group::from_law(2 * n, Law::Dihedral(n), format!("dihedral:{n}")))
        }
        "sym" => {
            let n = parse_param(spec, arg)?;
            if !(1..=6).contains(&n) {
                return Err(malformed(spec, "sym degree must be in 1..=6"));
            }
            Ok(symmetric_group(n))
        }
        "product" => {
            let (a, b) = split_product(spec, arg)?;
            let a = make_group(&a)?;
            let b = make_group(&b)?;
            let order = a.order.saturating_mul(b.order);
            check_order(order)?;
            let label = format!("product:({}),({})", a.label, b.label);
            Ok(Group::from_law(order, Law::Product(Arc::new(a), Arc::new(b)), label))
        }
        other => Err(malformed(spec, format!("unknown family `{other}`"))),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn symmetric_group(n: usize) -> Group {
    let perms = permutations(n);
    let rank = |p: &[usize]| -> usize {
        // Lehmer code, which is the lexicographic rank.
        let mut r = 0;
        for i in 0..n {
            let smaller = p[i + 1..].iter().filter(|&&q| q < p[i]).count();
            r = r * (n - i) + smaller;
        }
        r
    };
    let m = perms.len();
    let mut flat = vec![0u32; m * m];
    for (x, sigma) in perms.iter().enumerate() {
        for (y, tau) in perms.iter().enumerate() {
            let comp: Vec<usize> = (0..n).map(|i| sigma[tau[i]]).collect();
            flat[x * m + y] = rank(&comp) as u32;
        }
    }
    Group::from_law(m, Law::Table(Arc::new(flat)), format!("sym:{n}"))
}

/// A partition of the group elements into disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPartition {
    parts: Vec<VertexSet>,
    part_of: Vec<usize>,
}

impl GroupPartition {
    /// Validates that `parts` are nonempty, disjoint and cover `0..n`.
    pub fn new(n: usize, parts: Vec<VertexSet>) -> Result<GroupPartition> {
        let mut part_of = vec![usize::MAX; n];
        for (i, p) in parts.iter().enumerate() {
            if p.universe() != n {
                return Err(Error::NotAPartition(format!("part {i} has the wrong universe")));
            }
            if p.is_empty() {
                return Err(Error::NotAPartition(format!("part {i} is empty")));
            }
            for v in p {
                if part_of[v] != usize::MAX {
                    return Err(Error::NotAPartition(format!(
                        "vertex {v} lies in parts {} and {i}",
                        part_of[v]
                    )));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::NotAPartition(format!("vertex {v} is not covered")));
        }
        Ok(GroupPartition { parts, part_of })
    }

    pub fn singletons(n: usize) -> GroupPartition {
        GroupPartition {
            parts: (0..n).map(|v| VertexSet::from_indices(n, [v])).collect(),
            part_of: (0..n).collect(),
        }
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Number of elements partitioned.
    pub fn universe(&self) -> usize {
        self.part_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(VertexSet::len).collect()
    }
}

/// Orbits of conjugation, ordered by minimum element.
pub fn conjugacy_classes(g: &Group) -> GroupPartition {
    let n = g.order();
    if g.is_abelian() {
        return GroupPartition::singletons(n);
    }
    let mut parts = Vec::new();
    let mut seen = g.empty_set();
    for x in 0..n {
        if seen.contains(x) {
            continue;
        }
        let mut class = g.empty_set();
        for h in 0..n {
            class.insert(g.conjugate(h, x));
        }
        seen.union_with(&class);
        parts.push(class);
    }
    GroupPartition::new(n, parts).expect("conjugation orbits partition the group")
}

/// Smallest subgroup containing `seed`.
pub fn closure(g: &Group, seed: &VertexSet) -> VertexSet {
    let gens: Vec<usize> = seed.iter().filter(|&x| x != 0).collect();
    let mut h = g.empty_set();
    h.insert(0);
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if !h.contains(y) {
                h.insert(y);
                queue.push(y);
            }
        }
    }
    h
}

pub fn is_subgroup(g: &Group, h: &VertexSet) -> bool {
    h.contains(0) && closure(g, h) == *h
}

fn require_subgroup(g: &Group, h: &VertexSet) -> Result<()> {
    if h.universe() != g.order() || !is_subgroup(g, h) {
        return Err(Error::NotASubgroup);
    }
    Ok(())
}

/// Whether the subset is closed under conjugation by every group element.
pub fn is_conjugation_closed(g: &Group, set: &VertexSet) -> bool {
    if g.is_abelian() {
        return true;
    }
    set.iter().all(|x| (0..g.order()).all(|h| set.contains(g.conjugate(h, x))))
}

pub fn is_normal(g: &Group, h: &VertexSet) -> Result<bool> {
    require_subgroup(g, h)?;
    Ok(is_conjugation_closed(g, h))
}

/// Left cosets `xH`, ordered by minimum element; `H` itself comes first.
pub fn left_cosets(g: &Group, h: &VertexSet) -> Result<GroupPartition> {
    require_subgroup(g, h)?;
    let n = g.order();
    let members = h.to_vec();
    let mut seen = g.empty_set();
    let mut parts = Vec::with_capacity(n / members.len());
    for x in 0..n {
        if seen.contains(x) {
            continue;
        }
        let coset = VertexSet::from_indices(n, members.iter().map(|&y| g.mul(x, y)));
        seen.union_with(&coset);
        parts.push(coset);
    }
    GroupPartition::new(n, parts)
}

/// `{a·b : a ∈ A, b ∈ B}`.
pub fn product_set(g: &Group, a: &VertexSet, b: &VertexSet) -> VertexSet {
    let bs = b.to_vec();
    let mut out = g.empty_set();
    for x in a {
        for &y in &bs {
            out.insert(g.mul(x, y));
        }
    }
    out
}

/// `{x⁻¹ : x ∈ A}`.
pub fn inverse_set(g: &Group, a: &VertexSet) -> VertexSet {
    VertexSet::from_indices(g.order(), a.iter().map(|x| g.inv(x)))
}

/// Right translate `A·x`.
pub fn right_translate(g: &Group, a: &VertexSet, x: usize) -> VertexSet {
    VertexSet::from_indices(g.order(), a.iter().map(|y| g.mul(y, x)))
}

/// Left translate `x·A`.
pub fn left_translate(g: &Group, x: usize, a: &VertexSet) -> VertexSet {
    VertexSet::from_indices(g.order(), a.iter().map(|y| g.mul(x, y)))
}

fn guard(g: &Group) -> Result<()> {
    if g.order() > NORMAL_SUBGROUP_GUARD {
        return Err(Error::SizeGuardExceeded {
            what: "group order",
            size: g.order(),
            limit: NORMAL_SUBGROUP_GUARD,
        });
    }
    Ok(())
}

/// All normal subgroups, sorted by size and then by bitset value.
///
/// Every normal subgroup is generated by the conjugacy classes it contains,
/// so growing `{1}` one class at a time and closing reaches all of them.
pub fn enumerate_normal_subgroups(g: &Group) -> Result<Vec<VertexSet>> {
    guard(g)?;
    let classes = conjugacy_classes(g);
    let mut found: BTreeSet<VertexSet> = BTreeSet::new();
    let trivial = VertexSet::from_indices(g.order(), [0]);
    found.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(n) = frontier.pop() {
        for class in classes.parts() {
            if class.is_subset(&n) {
                continue;
            }
            let next = closure(g, &n.union(class));
            if found.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<VertexSet> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// All cyclic subgroups `⟨x⟩`, sorted like [`enumerate_normal_subgroups`].
pub fn cyclic_subgroups(g: &Group) -> Result<Vec<VertexSet>> {
    guard(g)?;
    let found: BTreeSet<VertexSet> =
        (0..g.order()).map(|x| closure(g, &VertexSet::from_indices(g.order(), [x]))).collect();
    let mut out: Vec<VertexSet> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Normal subgroups together with cyclic subgroups, deduplicated.
pub fn normal_and_cyclic_subgroups(g: &Group) -> Result<Vec<VertexSet>> {
    let mut all: BTreeSet<VertexSet> = enumerate_normal_subgroups(g)?.into_iter().collect();
    all.extend(cyclic_subgroups(g)?);
    let mut out: Vec<VertexSet> = all.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}
