//! The representation matrix, its derived weighted graph, and the exact
//! evaluators for cut weight, `‖Rx‖²` and discrepancy.
//!
//! Everything here is integer arithmetic. The cut identity
//!
//! ```text
//! 4·Cut(G, x) + ‖Rx‖² = Σ_{i,j} [RᵀR]_{i,j} = Σ_ℓ |L_ℓ|²
//! ```
//!
//! holds bit-exactly, which the tests rely on.

use std::fmt;

use crate::error::{Error, Result};

/// A sparse `m × n` 0/1 matrix, kept both by rows (label sets `L_ℓ`) and by
/// columns (vertex sets `S_v`). Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepresentationMatrix {
    n: usize,
    label_sets: Vec<Vec<usize>>,
    vertex_sets: Vec<Vec<usize>>,
}

impl RepresentationMatrix {
    /// Builds a matrix over `n` vertices from one vertex list per label.
    ///
    /// Lists may arrive in any order; they are sorted. A vertex listed twice
    /// under the same label, or a vertex `>= n`, is rejected.
    pub fn from_label_sets(n: usize, label_sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut label_sets = label_sets;
        for (label, set) in label_sets.iter_mut().enumerate() {
            set.sort_unstable();
            for w in set.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateVertex {
                        label,
                        vertex: w[0],
                    });
                }
            }
            if let Some(&v) = set.last() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
        }
        Ok(Self::from_sorted_unchecked(n, label_sets))
    }

    /// Builds from label sets already known to be sorted, deduplicated and in
    /// range. Used by the sampler, which produces them in that form.
    pub(crate) fn from_sorted_unchecked(n: usize, label_sets: Vec<Vec<usize>>) -> Self {
        let mut vertex_sets = vec![Vec::new(); n];
        for (label, set) in label_sets.iter().enumerate() {
            for &v in set {
                vertex_sets[v].push(label);
            }
        }
        Self {
            n,
            label_sets,
            vertex_sets,
        }
    }

    /// The all-zero matrix.
    pub fn empty(m: usize, n: usize) -> Self {
        Self::from_sorted_unchecked(n, vec![Vec::new(); m])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.label_sets.len()
    }

    /// `L_ℓ`, the sorted vertices that chose `label`.
    pub fn label_set(&self, label: usize) -> &[usize] {
        &self.label_sets[label]
    }

    pub fn label_sets(&self) -> &[Vec<usize>] {
        &self.label_sets
    }

    /// `S_v`, the sorted labels chosen by `vertex`.
    pub fn vertex_set(&self, vertex: usize) -> &[usize] {
        &self.vertex_sets[vertex]
    }

    pub fn vertex_sets(&self) -> &[Vec<usize>] {
        &self.vertex_sets
    }

    pub fn contains(&self, label: usize, vertex: usize) -> bool {
        self.label_sets[label].binary_search(&vertex).is_ok()
    }

    /// A label is strong when at least three vertices chose it.
    pub fn is_strong(&self, label: usize) -> bool {
        self.label_sets[label].len() >= 3
    }

    /// Number of ones in the matrix, `Σ_ℓ |L_ℓ| = Σ_v |S_v|`.
    pub fn ones(&self) -> u64 {
        self.label_sets.iter().map(|s| s.len() as u64).sum()
    }

    /// Sum of every entry of `RᵀR`, diagonal included: `Σ_ℓ |L_ℓ|²`.
    pub fn gram_total(&self) -> u64 {
        self.label_sets
            .iter()
            .map(|s| (s.len() as u64) * (s.len() as u64))
            .sum()
    }

    /// Off-diagonal sum `Σ_{i≠j} [RᵀR]_{i,j}`, twice the total edge weight.
    pub fn total_offdiag(&self) -> u64 {
        self.gram_total() - self.ones()
    }

    pub fn max_label_size(&self) -> usize {
        self.label_sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Treats the rows as the set system `Σ = {L_1, …, L_m}`.
    pub fn set_system(&self) -> SetSystem<'_> {
        SetSystem { matrix: self }
    }

    /// The row sums `Rx`.
    pub fn row_sums(&self, x: &Coloring) -> Result<Vec<i64>> {
        self.check_len(x)?;
        Ok(self
            .label_sets
            .iter()
            .map(|set| set.iter().map(|&v| x.sign(v)).sum())
            .collect())
    }

    /// `‖Rx‖² = Σ_ℓ (Σ_{v∈L_ℓ} x_v)²`.
    pub fn norm_sq(&self, x: &Coloring) -> Result<u64> {
        Ok(self.row_sums(x)?.into_iter().map(|s| (s * s) as u64).sum())
    }

    /// `disc(Σ, x) = ‖Rx‖∞`; zero when there are no labels.
    pub fn discrepancy(&self, x: &Coloring) -> Result<u64> {
        Ok(self
            .row_sums(x)?
            .into_iter()
            .map(i64::unsigned_abs)
            .max()
            .unwrap_or(0))
    }

    /// Cut weight through the norm identity, `¼(Σ_ℓ |L_ℓ|² − ‖Rx‖²)`.
    pub fn cut_weight(&self, x: &Coloring) -> Result<u64> {
        let norm = self.norm_sq(x)?;
        let diff = self.gram_total() - norm;
        debug_assert_eq!(diff % 4, 0);
        Ok(diff / 4)
    }

    /// Materializes the weighted intersection graph.
    pub fn graph(&self) -> WeightedIntersectionGraph {
        WeightedIntersectionGraph::from_matrix(self)
    }

    pub(crate) fn check_len(&self, x: &Coloring) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// Read-only view of a representation matrix as the set system whose
/// incidence matrix it is.
#[derive(Debug, Clone, Copy)]
pub struct SetSystem<'a> {
    matrix: &'a RepresentationMatrix,
}

impl<'a> SetSystem<'a> {
    pub fn matrix(&self) -> &'a RepresentationMatrix {
        self.matrix
    }

    pub fn len(&self) -> usize {
        self.matrix.m()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.m() == 0
    }

    pub fn sets(&self) -> impl Iterator<Item = &'a [usize]> + 'a {
        self.matrix.label_sets.iter().map(Vec::as_slice)
    }

    /// Imbalance of each set under `x`.
    pub fn imbalances(&self, x: &Coloring) -> Result<Vec<u64>> {
        Ok(self
            .matrix
            .row_sums(x)?
            .into_iter()
            .map(i64::unsigned_abs)
            .collect())
    }

    pub fn discrepancy(&self, x: &Coloring) -> Result<u64> {
        self.matrix.discrepancy(x)
    }
}

/// A 2-coloring: one `+1` or `-1` per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(Vec<i8>);

impl Coloring {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
            return Err(Error::InvalidSign {
                index,
                value: value as i64,
            });
        }
        Ok(Self(values))
    }

    pub fn all_plus(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn all_minus(n: usize) -> Self {
        Self(vec![-1; n])
    }

    /// `+1` where `side[v]` is true.
    pub fn from_sides(side: impl IntoIterator<Item = bool>) -> Self {
        Self(side.into_iter().map(|b| if b { 1 } else { -1 }).collect())
    }

    /// Decodes a bitmask: bit `v` set means `x_v = -1`.
    pub fn from_minus_mask(n: usize, mask: u64) -> Self {
        Self(
            (0..n)
                .map(|v| if mask >> v & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sign(&self, v: usize) -> i64 {
        self.0[v] as i64
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    pub(crate) fn set(&mut self, v: usize, sign: i8) {
        debug_assert!(sign == 1 || sign == -1);
        self.0[v] = sign;
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(if *s > 0 { "+1" } else { "-1" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: u64,
}

/// Simple weighted graph with `w(u, v) = |S_u ∩ S_v|`. Pairs sharing no
/// label are absent and the diagonal of `RᵀR` is not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedIntersectionGraph {
    n: usize,
    edges: Vec<WeightedEdge>,
    total_offdiag: u64,
}

impl WeightedIntersectionGraph {
    /// Accumulates co-occurrences label by label, `O(Σ_ℓ |L_ℓ|²)`.
    pub fn from_matrix(r: &RepresentationMatrix) -> Self {
        let n = r.n();
        let mut scratch = vec![0u64; n];
        let mut touched = Vec::new();
        let mut edges = Vec::new();
        for u in 0..n {
            for &label in r.vertex_set(u) {
                for &v in r.label_set(label) {
                    if v > u {
                        if scratch[v] == 0 {
                            touched.push(v);
                        }
                        scratch[v] += 1;
                    }
                }
            }
            touched.sort_unstable();
            for &v in &touched {
                edges.push(WeightedEdge {
                    u,
                    v,
                    weight: scratch[v],
                });
                scratch[v] = 0;
            }
            touched.clear();
        }
        let total_offdiag = 2 * edges.iter().map(|e| e.weight).sum::<u64>();
        Self {
            n,
            edges,
            total_offdiag,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn total_offdiag(&self) -> u64 {
        self.total_offdiag
    }

    pub fn total_weight(&self) -> u64 {
        self.total_offdiag / 2
    }

    pub fn weight(&self, u: usize, v: usize) -> u64 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(a, b)))
            .map(|i| self.edges[i].weight)
            .unwrap_or(0)
    }

    /// Direct edge sum of crossing weights, `¼ Σ w_{ij} (x_i − x_j)²`.
    pub fn cut_weight(&self, x: &Coloring) -> Result<u64> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| x.sign(e.u) != x.sign(e.v))
            .map(|e| e.weight)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> RepresentationMatrix {
        RepresentationMatrix::from_label_sets(3, vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    fn single3() -> RepresentationMatrix {
        RepresentationMatrix::from_label_sets(3, vec![vec![0, 1, 2]]).unwrap()
    }

    fn x(v: &[i8]) -> Coloring {
        Coloring::new(v.to_vec()).unwrap()
    }

    #[test]
    fn graph_of_two_overlapping_labels() {
        let g = path3().graph();
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
        assert_eq!(e, vec![(0, 1, 1), (1, 2, 1)]);
        assert_eq!(g.total_offdiag(), 4);
    }

    #[test]
    fn graph_of_zero_matrix() {
        let g = RepresentationMatrix::empty(3, 4).graph();
        assert!(g.edges().is_empty());
        assert_eq!(g.total_offdiag(), 0);
    }

    #[test]
    fn graph_of_single_label_is_triangle() {
        let g = single3().graph();
        assert_eq!(g.edges().len(), 3);
        assert!(g.edges().iter().all(|e| e.weight == 1));
        assert_eq!(g.total_offdiag(), 6);
    }

    #[test]
    fn shared_labels_accumulate() {
        let r = RepresentationMatrix::from_label_sets(3, vec![vec![0, 2], vec![0, 1, 2], vec![2]])
            .unwrap();
        let g = r.graph();
        assert_eq!(g.weight(0, 2), 2);
        assert_eq!(g.weight(2, 0), 2);
        assert_eq!(g.weight(0, 1), 1);
        assert_eq!(g.total_offdiag(), r.total_offdiag());
    }

    #[test]
    fn evaluators_on_path() {
        let r = path3();
        let alt = x(&[1, -1, 1]);
        assert_eq!(r.cut_weight(&alt).unwrap(), 2);
        assert_eq!(r.graph().cut_weight(&alt).unwrap(), 2);
        assert_eq!(r.discrepancy(&alt).unwrap(), 0);
        assert_eq!(r.norm_sq(&alt).unwrap(), 0);

        let plus = Coloring::all_plus(3);
        assert_eq!(r.cut_weight(&plus).unwrap(), 0);
        assert_eq!(r.graph().cut_weight(&plus).unwrap(), 0);
        assert_eq!(r.discrepancy(&plus).unwrap(), 2);
        assert_eq!(r.norm_sq(&plus).unwrap(), 8);
    }

    #[test]
    fn evaluators_on_single_label() {
        let r = single3();
        let c = x(&[1, 1, -1]);
        assert_eq!(r.cut_weight(&c).unwrap(), 2);
        assert_eq!(r.graph().cut_weight(&c).unwrap(), 2);
        assert_eq!(r.discrepancy(&c).unwrap(), 1);
        assert_eq!(r.norm_sq(&c).unwrap(), 1);
    }

    #[test]
    fn no_labels_means_zero_discrepancy() {
        let r = RepresentationMatrix::empty(0, 4);
        assert_eq!(r.discrepancy(&Coloring::all_plus(4)).unwrap(), 0);
        assert_eq!(r.set_system().len(), 0);
    }

    #[test]
    fn singleton_and_empty_labels() {
        let r = RepresentationMatrix::from_label_sets(2, vec![vec![], vec![1]]).unwrap();
        assert!(r.graph().edges().is_empty());
        assert_eq!(r.discrepancy(&Coloring::all_minus(2)).unwrap(), 1);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let r = path3();
        let short = Coloring::all_plus(2);
        let want = Err(Error::LengthMismatch {
            expected: 3,
            got: 2,
        });
        assert_eq!(r.cut_weight(&short), want);
        assert_eq!(r.norm_sq(&short), want);
        assert_eq!(r.discrepancy(&short), want);
        assert_eq!(r.graph().cut_weight(&short), want);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            RepresentationMatrix::from_label_sets(2, vec![vec![0, 2]]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(
            RepresentationMatrix::from_label_sets(3, vec![vec![1, 0, 1]]),
            Err(Error::DuplicateVertex {
                label: 0,
                vertex: 1
            })
        );
        assert!(matches!(
            Coloring::new(vec![1, 0]),
            Err(Error::InvalidSign { index: 1, .. })
        ));
    }

    #[test]
    fn views_are_transposes() {
        let r = RepresentationMatrix::from_label_sets(4, vec![vec![3, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(r.label_set(0), &[1, 3]);
        assert_eq!(r.vertex_set(1), &[0, 1]);
        assert_eq!(r.vertex_set(3), &[0]);
        assert!(r.contains(1, 2) && !r.contains(0, 2));
        assert!(r.is_strong(1) && !r.is_strong(0));
    }

    #[test]
    fn coloring_display_and_mask() {
        let c = Coloring::from_minus_mask(4, 0b0101);
        assert_eq!(c.to_string(), "-1 +1 -1 +1");
        assert_eq!(c.negated().to_string(), "+1 -1 +1 -1");
    }
}
