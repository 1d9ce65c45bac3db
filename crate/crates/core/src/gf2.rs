//! GF(2) linear algebra and linear total perfect codes in cubelike graphs.
//!
//! Vectors are row vectors stored as [`BitSet`]s: coordinate `i` is bit `i`,
//! which is also how `elem2:n` encodes group elements. A code is the left
//! kernel `{x : xM = 0}` of an `n × t` check matrix `M`; it is a total
//! perfect code in `Cay(Z₂ⁿ, S)` exactly when `|S| = 2^t` and the images
//! `uM`, `u ∈ S`, are pairwise distinct.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::cayley::build_cayley;
use crate::codes::{verify_tpc, Verdict, Witness};
use crate::error::{Error, Result};
use crate::group::{make_group, VertexSet};

/// Largest dimension for which codewords are materialized.
pub const MATERIALIZE_LIMIT: usize = 20;
/// Largest dimension for which verification builds the Cayley graph.
const GRAPH_VERIFY_LIMIT: usize = 12;
/// Random candidates tried before the exhaustive search.
const RANDOM_ATTEMPT_CAP: u64 = 1 << 12;
pub const HAMMING_GUARD: u32 = 16;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitSet>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> GF2Matrix {
        GF2Matrix { rows, cols, data: vec![BitSet::new(cols); rows] }
    }

    pub fn identity(k: usize) -> GF2Matrix {
        let mut m = GF2Matrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitSet>) -> GF2Matrix {
        assert!(rows.iter().all(|r| r.universe() == cols), "row width mismatch");
        GF2Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Rows given as `'0'/'1'` strings of equal length.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<GF2Matrix> {
        let cols = rows.first().map_or(0, |r| r.as_ref().trim().len());
        let mut data = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_ref().trim();
            let bits = BitSet::from_bit_string(r)
                .ok_or_else(|| Error::InvalidVectors(format!("`{r}` is not a 0/1 string")))?;
            if bits.universe() != cols {
                return Err(Error::InvalidVectors(format!("row `{r}` has width {} not {cols}", r.len())));
            }
            data.push(bits);
        }
        Ok(GF2Matrix { rows: data.len(), cols, data })
    }

    pub fn to_bit_strings(&self) -> Vec<String> {
        self.data.iter().map(BitSet::to_bit_string).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitSet {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].contains(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.data[i].insert(j);
        } else {
            self.data[i].remove(j);
        }
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row {
                t.data[j].insert(i);
            }
        }
        t
    }

    /// `xM` for a row vector `x` of width `rows`.
    pub fn left_mul(&self, x: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.cols);
        for i in x {
            out.xor_with(&self.data[i]);
        }
        out
    }

    pub fn rank(&self) -> usize {
        gf2_eliminate(self).rank
    }

    /// Basis of `{x : xM = 0}`, in reduced echelon form.
    pub fn left_kernel(&self) -> Vec<BitSet> {
        gf2_eliminate(self).left_kernel
    }

    /// Basis of `{y : My = 0}`, in reduced echelon form.
    pub fn right_kernel(&self) -> Vec<BitSet> {
        self.transpose().left_kernel()
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Option<GF2Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = GF2Matrix::identity(n).data;
        for col in 0..n {
            let p = (col..n).find(|&r| a[r].contains(col))?;
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && a[r].contains(col) {
                    let (pa, pi) = (a[col].clone(), inv[col].clone());
                    a[r].xor_with(&pa);
                    inv[r].xor_with(&pi);
                }
            }
        }
        Some(GF2Matrix { rows: n, cols: n, data: inv })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Elimination {
    /// Row rank, equal to column rank.
    pub rank: usize,
    /// `rows − rank`: dimension of `{x : xM = 0}`.
    pub left_nullity: usize,
    /// `cols − rank`: dimension of `{y : My = 0}`.
    pub right_nullity: usize,
    pub left_kernel: Vec<BitSet>,
}

/// Row reduction with the lowest-index pivot row for each column in turn,
/// tracking row combinations so that rows reduced to zero give the left
/// kernel.
pub fn gf2_eliminate(m: &GF2Matrix) -> Gf2Elimination {
    let mut work = m.data.clone();
    let mut combos: Vec<BitSet> = (0..m.rows).map(|i| BitSet::from_indices(m.rows, [i])).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| work[r].contains(col)) else { continue };
        work.swap(rank, p);
        combos.swap(rank, p);
        for r in rank + 1..m.rows {
            if work[r].contains(col) {
                let (pw, pc) = (work[rank].clone(), combos[rank].clone());
                work[r].xor_with(&pw);
                combos[r].xor_with(&pc);
            }
        }
        rank += 1;
    }
    let left_kernel = reduced_basis(m.rows, combos.split_off(rank));
    Gf2Elimination { rank, left_nullity: m.rows - rank, right_nullity: m.cols - rank, left_kernel }
}

/// Reduced echelon form of a set of independent vectors, pivots at the
/// lowest set bit, sorted by pivot.
pub fn reduced_basis(width: usize, mut vectors: Vec<BitSet>) -> Vec<BitSet> {
    let mut out: Vec<BitSet> = Vec::new();
    for col in 0..width {
        let Some(p) = vectors.iter().position(|v| v.contains(col)) else { continue };
        let pivot = vectors.swap_remove(p);
        for v in vectors.iter_mut().chain(out.iter_mut()) {
            if v.contains(col) {
                v.xor_with(&pivot);
            }
        }
        out.push(pivot);
    }
    out
}

/// A binary linear code `{x ∈ V(n, 2) : xM = 0}` with check matrix `M` (`n × t`).
#[derive(Clone, Debug)]
pub struct LinearCode {
    check_matrix: GF2Matrix,
    codewords: Option<VertexSet>,
}

impl LinearCode {
    pub fn from_check_matrix(m: GF2Matrix) -> LinearCode {
        let codewords = (m.rows() <= MATERIALIZE_LIMIT).then(|| materialize(&m));
        LinearCode { check_matrix: m, codewords }
    }

    pub fn dimension(&self) -> usize {
        self.check_matrix.rows()
    }

    pub fn check_matrix(&self) -> &GF2Matrix {
        &self.check_matrix
    }

    /// `log₂ |C| = n − rank(M)`.
    pub fn log_size(&self) -> usize {
        self.dimension() - self.check_matrix.rank()
    }

    pub fn contains(&self, x: &BitSet) -> bool {
        self.check_matrix.left_mul(x).is_empty()
    }

    /// Codewords as a subset of `elem2:n`, present when `n <= 20`.
    pub fn codewords(&self) -> Option<&VertexSet> {
        self.codewords.as_ref()
    }

    pub fn kernel_basis(&self) -> Vec<BitSet> {
        self.check_matrix.left_kernel()
    }
}

fn materialize(m: &GF2Matrix) -> VertexSet {
    let n = m.rows();
    let basis: Vec<usize> = m.left_kernel().iter().map(|v| v.to_u64() as usize).collect();
    let mut out = VertexSet::new(1 << n);
    let mut x = 0usize;
    out.insert(0);
    // Gray code walk over the span.
    for k in 1u64..(1u64 << basis.len()) {
        x ^= basis[k.trailing_zeros() as usize];
        out.insert(x);
    }
    out
}

fn validate_connection_vectors(n: usize, s: &[BitSet]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidVectors("dimension must be at least 1".into()));
    }
    let mut seen = HashSet::new();
    for u in s {
        if u.universe() != n {
            return Err(Error::InvalidVectors(format!("vector {} has width {}, not {n}", u.to_bit_string(), u.universe())));
        }
        if u.is_empty() {
            return Err(Error::InvalidVectors("zero vector in connection set".into()));
        }
        if !seen.insert(u.clone()) {
            return Err(Error::InvalidVectors(format!("repeated vector {}", u.to_bit_string())));
        }
    }
    Ok(())
}

/// `t` with `d = 2^t`, when the degree admits a code in `Z₂ⁿ`.
fn degree_exponent(n: usize, d: usize) -> Result<usize> {
    if d == 0 || !d.is_power_of_two() || d.trailing_zeros() as usize > n {
        return Err(Error::DegreeNotPowerOfTwo { degree: d, dimension: n });
    }
    Ok(d.trailing_zeros() as usize)
}

/// Image values `uM` as integers (bit `j` is coordinate `j`).
fn images(s: &[BitSet], rows: &[u64]) -> Vec<u64> {
    s.iter().map(|u| u.iter().fold(0, |acc, i| acc ^ rows[i])).collect()
}

fn all_distinct(values: &[u64], t: usize, seen: &mut [bool]) -> bool {
    seen.iter_mut().for_each(|s| *s = false);
    debug_assert!(values.iter().all(|&v| v < 1 << t));
    values.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
}

fn matrix_from_values(t: usize, rows: &[u64]) -> GF2Matrix {
    GF2Matrix::from_rows(t, rows.iter().map(|&r| BitSet::from_u64(t, r)).collect())
}

/// Linear total perfect code in `Cay(Z₂ⁿ, S)`.
///
/// Searches for `M` (`n × t`, `|S| = 2^t`) whose images `uM` are pairwise
/// distinct: first seeded random candidates, then an exhaustive
/// backtracking search over the images of a basis drawn from `S`.
pub fn construct_cubelike_tpc(n: usize, s: &[BitSet], seed: u64) -> Result<LinearCode> {
    validate_connection_vectors(n, s)?;
    let t = degree_exponent(n, s.len())?;
    let rank = gf2_eliminate(&GF2Matrix::from_rows(n, s.to_vec())).rank;
    if rank < n {
        return Err(Error::NotSpanning(n));
    }
    if t >= 63 {
        return Err(Error::SizeGuardExceeded { what: "degree exponent", size: t, limit: 62 });
    }
    let rows = random_check_matrix(n, t, s, seed).or_else(|| exhaustive_check_matrix(n, t, s));
    let Some(rows) = rows else {
        return Err(Error::ConstructionExhausted);
    };
    let m = matrix_from_values(t, &rows);
    if m.rank() != t {
        return Err(Error::InternalInvariantViolated("check matrix rank below t".into()));
    }
    Ok(LinearCode::from_check_matrix(m))
}

fn random_check_matrix(n: usize, t: usize, s: &[BitSet], seed: u64) -> Option<Vec<u64>> {
    let exponent = (n * t) as u32;
    let cap = if exponent >= 60 { RANDOM_ATTEMPT_CAP } else { (10u64 << exponent).min(RANDOM_ATTEMPT_CAP) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = vec![false; 1 << t];
    let mask = (1u64 << t) - 1;
    for _ in 0..cap {
        let rows: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & mask).collect();
        if all_distinct(&images(s, &rows), t, &mut seen) {
            return Some(rows);
        }
    }
    None
}

/// Chooses a basis `B ⊆ S`, assigns images `y_j = b_j M` one basis vector at
/// a time, and checks distinctness of every element of `S` as soon as its
/// image is determined. Returns `M = B⁻¹Y`.
///
/// Any invertible change of coordinates on the images keeps them distinct, so
/// the images are kept canonical: with `y_1, …, y_{k-1}` spanning the first
/// `r` unit vectors, `y_k` is either below `2^r` or equal to `2^r`.
fn exhaustive_check_matrix(n: usize, t: usize, s: &[BitSet]) -> Option<Vec<u64>> {
    let (basis_idx, coords) = basis_coordinates(n, s);
    let basis = GF2Matrix::from_rows(n, basis_idx.iter().map(|&i| s[i].clone()).collect());
    let binv = basis.inverse().expect("basis is invertible");
    // Elements grouped by the last basis index their coordinates use.
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, c) in coords.iter().enumerate() {
        let last = c.iter().last().expect("nonzero vector has coordinates");
        by_last[last].push(e);
    }
    let mut y = vec![0u64; n];
    let mut used = vec![false; 1 << t];
    if !assign(0, 0, t, &coords, &by_last, &mut y, &mut used) {
        return None;
    }
    let rows = (0..n).map(|i| binv.row(i).iter().fold(0, |acc, j| acc ^ y[j])).collect();
    Some(rows)
}

fn assign(
    k: usize,
    r: usize,
    t: usize,
    coords: &[BitSet],
    by_last: &[Vec<usize>],
    y: &mut [u64],
    used: &mut [bool],
) -> bool {
    if k == y.len() {
        return true;
    }
    let top = if r < t { 1u64 << r } else { (1u64 << t) - 1 };
    for value in 0..=top {
        y[k] = value;
        let next_r = if r < t && value == 1 << r { r + 1 } else { r };
        let mut marked = Vec::with_capacity(by_last[k].len());
        let mut ok = true;
        for &e in &by_last[k] {
            let img = coords[e].iter().fold(0, |acc, j| acc ^ y[j]) as usize;
            if used[img] {
                ok = false;
                break;
            }
            used[img] = true;
            marked.push(img);
        }
        if ok && assign(k + 1, next_r, t, coords, by_last, y, used) {
            return true;
        }
        for img in marked {
            used[img] = false;
        }
    }
    false
}

/// Greedy basis from `S` (in order) and the coordinates of every element of
/// `S` in that basis.
fn basis_coordinates(n: usize, s: &[BitSet]) -> (Vec<usize>, Vec<BitSet>) {
    // Echelon rows with the combination of basis positions they represent.
    let mut echelon: Vec<(usize, BitSet, BitSet)> = Vec::new();
    let mut basis_idx = Vec::new();
    let reduce = |echelon: &[(usize, BitSet, BitSet)], v: &BitSet| -> (BitSet, BitSet) {
        let mut v = v.clone();
        let mut combo = BitSet::new(n);
        for (pivot, row, c) in echelon {
            if v.contains(*pivot) {
                v.xor_with(row);
                combo.xor_with(c);
            }
        }
        (v, combo)
    };
    for (i, u) in s.iter().enumerate() {
        if basis_idx.len() == n {
            break;
        }
        let (rest, mut combo) = reduce(&echelon, u);
        if let Some(pivot) = rest.first() {
            combo.insert(basis_idx.len());
            basis_idx.push(i);
            // Keep echelon rows fully reduced against the new pivot.
            for (_, row, c) in echelon.iter_mut() {
                if row.contains(pivot) {
                    row.xor_with(&rest);
                    c.xor_with(&combo);
                }
            }
            echelon.push((pivot, rest, combo));
        }
    }
    let coords = s
        .iter()
        .map(|u| {
            let (rest, combo) = reduce(&echelon, u);
            debug_assert!(rest.is_empty());
            combo
        })
        .collect();
    (basis_idx, coords)
}

/// The code whose check-matrix rows (a `2^t × t` matrix) are all vectors of
/// `V(t, 2)` in binary counting order with the zero row last; a total perfect
/// code in the hypercube `Q_{2^t}`.
pub fn hamming_style_code(t: u32) -> Result<LinearCode> {
    if t == 0 || t > HAMMING_GUARD {
        return Err(Error::SizeGuardExceeded { what: "t", size: t as usize, limit: HAMMING_GUARD as usize });
    }
    let d = 1usize << t;
    let rows: Vec<u64> = (0..d).map(|i| ((i + 1) % d) as u64).collect();
    Ok(LinearCode::from_check_matrix(matrix_from_values(t as usize, &rows)))
}

pub fn standard_basis(n: usize) -> Vec<BitSet> {
    (0..n).map(|i| BitSet::from_indices(n, [i])).collect()
}

/// The cosets `C + u`, `u ∈ S`, in the order of `S`. They partition `V(n, 2)`.
pub fn coset_family(code: &LinearCode, s: &[BitSet]) -> Result<Vec<VertexSet>> {
    let n = code.dimension();
    let Some(c) = code.codewords() else {
        return Err(Error::SizeGuardExceeded { what: "dimension", size: n, limit: MATERIALIZE_LIMIT });
    };
    validate_connection_vectors(n, s)?;
    let words = c.to_vec();
    let mut covered = VertexSet::new(1 << n);
    let mut family = Vec::with_capacity(s.len());
    for u in s {
        let shift = u.to_u64() as usize;
        let coset = VertexSet::from_indices(1 << n, words.iter().map(|&w| w ^ shift));
        if coset.intersects(&covered) {
            return Err(Error::InternalInvariantViolated(format!(
                "coset C + {} overlaps an earlier coset",
                u.to_bit_string()
            )));
        }
        covered.union_with(&coset);
        family.push(coset);
    }
    if covered.len() != 1 << n {
        return Err(Error::InternalInvariantViolated("cosets do not cover V(n, 2)".into()));
    }
    Ok(family)
}

/// Checks that `code` is a total perfect code in `Cay(Z₂ⁿ, S)`.
///
/// Up to dimension 12 this builds the graph; up to 20 it counts neighbours
/// implicitly (`x` sees `x + u` for `u ∈ S`); above that it checks the
/// algebraic conditions `|C||S| = 2ⁿ` and `C ∩ (S + S) = {0}`, the latter as
/// pairwise distinct images `uM`.
pub fn verify_linear_code(code: &LinearCode, s: &[BitSet]) -> Result<Verdict> {
    let n = code.dimension();
    validate_connection_vectors(n, s)?;
    if let Some(c) = code.codewords() {
        if n <= GRAPH_VERIFY_LIMIT {
            let g = make_group(&format!("elem2:{n}"))?;
            let set = g.set_of(&s.iter().map(|u| u.to_u64() as usize).collect::<Vec<_>>())?;
            return Ok(verify_tpc(&build_cayley(&g, &set)?, c));
        }
        let shifts: Vec<usize> = s.iter().map(|u| u.to_u64() as usize).collect();
        for x in 0..1usize << n {
            let count = shifts.iter().filter(|&&u| c.contains(x ^ u)).count();
            if count != 1 {
                return Ok(Verdict::fail(Witness::NeighborCount { vertex: x, count }));
            }
        }
        return Ok(Verdict::pass());
    }
    let log_size = code.log_size();
    if log_size + s.len().trailing_zeros() as usize != n || !s.len().is_power_of_two() {
        return Ok(Verdict::fail(Witness::Cardinality {
            equation: "|C||S| = 2^n".into(),
            lhs: log_size + s.len().trailing_zeros() as usize,
            rhs: n,
        }));
    }
    let mut seen = HashSet::new();
    for (i, u) in s.iter().enumerate() {
        if !seen.insert(code.check_matrix().left_mul(u)) {
            return Ok(Verdict::fail(Witness::Element { condition: "C ∩ (S + S) = {0}".into(), element: i }));
        }
    }
    Ok(Verdict::pass())
}

/// Random spanning set of `2^t` distinct nonzero vectors in `V(n, 2)`.
pub fn random_spanning_set(n: usize, t: u32, seed: u64) -> Result<Vec<BitSet>> {
    let d = 1usize.checked_shl(t).unwrap_or(0);
    if n == 0 || d < n || (n < 64 && d as u64 >= 1u64 << n) || d == 0 {
        return Err(Error::InvalidVectors(format!("no spanning set of size 2^{t} in V({n}, 2)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(d);
        while out.len() < d {
            let v = BitSet::from_indices(n, (0..n).filter(|_| rng.gen::<bool>()));
            if !v.is_empty() && seen.insert(v.clone()) {
                out.push(v);
            }
        }
        if gf2_eliminate(&GF2Matrix::from_rows(n, out.clone())).rank == n {
            return Ok(out);
        }
    }
}
