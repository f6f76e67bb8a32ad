//! Weak bipartization of an intersection graph.
//!
//! The graph is a multigraph union of one clique per label. Each clique is
//! replaced by a random maximal matching, giving the skeleton `G^(b)`. While
//! the skeleton holds an odd cycle using at least one strong label
//! (`|L_ℓ| ≥ 3`), the matching of one such label is redrawn. Odd cycles made
//! only of weak labels (`|L_ℓ| = 2`) cannot be broken this way; one edge of
//! each is set aside in the excluded set, after which the rest of the
//! skeleton is bipartite and its parity coloring balances every label.
//!
//! The module also counts closed vertex-label sequences, exactly on a given
//! matrix and in expectation over the model (see [`counting`]).

pub mod counting;
mod detect;

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Coloring, RepresentationMatrix};
use crate::sampling::{streams, Seed};

pub use counting::{count_sequences_exact, count_sequences_exact_capped, expected_sequence_count};

use detect::Multigraph;

/// One skeleton edge, `u < v`, tagged with the label whose matching holds it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkeletonEdge {
    pub u: usize,
    pub v: usize,
    pub label: usize,
}

impl SkeletonEdge {
    pub fn new(a: usize, b: usize, label: usize) -> Self {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Self { u, v, label }
    }
}

/// Shuffle-and-pair: a uniform maximal matching of the clique on `vertices`,
/// `⌊|L|/2⌋` disjoint pairs, each stored as `(small, large)`.
pub fn random_maximal_matching<R: Rng + ?Sized>(
    vertices: &[usize],
    rng: &mut R,
) -> Vec<(usize, usize)> {
    if vertices.len() < 2 {
        return Vec::new();
    }
    let mut shuffled = vertices.to_vec();
    shuffled.shuffle(rng);
    shuffled
        .chunks_exact(2)
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect()
}

/// A closed vertex-label sequence `v_1, ℓ_1, v_2, …, v_k, ℓ_k, v_1`, kept
/// rotated so that `v_1` is its smallest vertex. Reflections are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexLabelSequence {
    vertices: Vec<usize>,
    labels: Vec<usize>,
    strength: usize,
}

impl VertexLabelSequence {
    /// Checks `{v_i, v_{i+1}} ⊆ L_{ℓ_i}` cyclically and canonicalizes.
    pub fn new(r: &RepresentationMatrix, vertices: Vec<usize>, labels: Vec<usize>) -> Result<Self> {
        let k = vertices.len();
        if k == 0 || labels.len() != k {
            return Err(Error::InvalidConfig(format!(
                "sequence needs matching non-empty vertex and label lists, got {} and {}",
                k,
                labels.len()
            )));
        }
        for i in 0..k {
            let (a, b, l) = (vertices[i], vertices[(i + 1) % k], labels[i]);
            if a >= r.n() || b >= r.n() || l >= r.m() || !r.contains(l, a) || !r.contains(l, b) {
                return Err(Error::InvalidConfig(format!(
                    "vertices {a} and {b} are not both in label {l}"
                )));
            }
        }
        Ok(Self::canonical(r, vertices, labels))
    }

    fn canonical(
        r: &RepresentationMatrix,
        mut vertices: Vec<usize>,
        mut labels: Vec<usize>,
    ) -> Self {
        let start = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        vertices.rotate_left(start);
        labels.rotate_left(start);
        let strength = labels.iter().filter(|&&l| r.is_strong(l)).count();
        Self {
            vertices,
            labels,
            strength,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of labels, `k`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of strong labels, `λ`.
    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn is_odd(&self) -> bool {
        self.len() % 2 == 1
    }

    pub fn has_distinct_labels(&self) -> bool {
        let set: HashSet<_> = self.labels.iter().collect();
        set.len() == self.labels.len()
    }

    fn key(&self) -> (Vec<usize>, Vec<usize>) {
        (self.vertices.clone(), self.labels.clone())
    }
}

/// Matchings per label, and the detection bookkeeping for weak odd cycles.
#[derive(Debug, Clone)]
pub struct BipartizationState<'a> {
    matrix: &'a RepresentationMatrix,
    matchings: Vec<Vec<(usize, usize)>>,
    excluded: BTreeSet<SkeletonEdge>,
    zero_strong: Vec<VertexLabelSequence>,
    label_disjoint: bool,
}

impl<'a> BipartizationState<'a> {
    /// Draws one random maximal matching per label, in label order.
    pub fn new<R: Rng + ?Sized>(matrix: &'a RepresentationMatrix, rng: &mut R) -> Self {
        let matchings = matrix
            .label_sets()
            .iter()
            .map(|set| random_maximal_matching(set, rng))
            .collect();
        Self::with_matchings(matrix, matchings).expect("drawn matchings are valid")
    }

    /// A state with caller-chosen matchings. Each must be a maximal
    /// matching of its label's clique.
    pub fn with_matchings(
        matrix: &'a RepresentationMatrix,
        matchings: Vec<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        if matchings.len() != matrix.m() {
            return Err(Error::InvalidConfig(format!(
                "{} matchings for {} labels",
                matchings.len(),
                matrix.m()
            )));
        }
        let mut normalized = Vec::with_capacity(matchings.len());
        for (label, pairs) in matchings.into_iter().enumerate() {
            let mut used = HashSet::new();
            let mut out = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                let ok = a != b
                    && a < matrix.n()
                    && b < matrix.n()
                    && matrix.contains(label, a)
                    && matrix.contains(label, b)
                    && used.insert(a)
                    && used.insert(b);
                if !ok {
                    return Err(Error::InvalidConfig(format!(
                        "pair ({a}, {b}) is not a valid matching edge of label {label}"
                    )));
                }
                out.push((a.min(b), a.max(b)));
            }
            if out.len() != matrix.label_set(label).len() / 2 {
                return Err(Error::InvalidConfig(format!(
                    "matching of label {label} is not maximal"
                )));
            }
            normalized.push(out);
        }
        Ok(Self {
            matrix,
            matchings: normalized,
            excluded: BTreeSet::new(),
            zero_strong: Vec::new(),
            label_disjoint: true,
        })
    }

    pub fn matrix(&self) -> &'a RepresentationMatrix {
        self.matrix
    }

    pub fn matching(&self, label: usize) -> &[(usize, usize)] {
        &self.matchings[label]
    }

    pub fn matchings(&self) -> &[Vec<(usize, usize)>] {
        &self.matchings
    }

    /// Every edge of `G^(b)`, in label order.
    pub fn skeleton(&self) -> impl Iterator<Item = SkeletonEdge> + '_ {
        self.matchings
            .iter()
            .enumerate()
            .flat_map(|(label, pairs)| {
                pairs
                    .iter()
                    .map(move |&(u, v)| SkeletonEdge { u, v, label })
            })
    }

    /// Edges set aside, one per recorded 0-strong odd cycle.
    pub fn excluded(&self) -> impl Iterator<Item = &SkeletonEdge> {
        self.excluded.iter()
    }

    pub fn zero_strong_cycles(&self) -> &[VertexLabelSequence] {
        &self.zero_strong
    }

    /// False once two recorded 0-strong cycles share a label.
    pub fn label_disjoint(&self) -> bool {
        self.label_disjoint
    }

    /// Redraws the matching of one label.
    pub fn rematch<R: Rng + ?Sized>(&mut self, label: usize, rng: &mut R) {
        self.matchings[label] = random_maximal_matching(self.matrix.label_set(label), rng);
    }

    /// Forgets the excluded edges and recorded 0-strong cycles.
    pub fn reset_detection(&mut self) {
        self.excluded.clear();
        self.zero_strong.clear();
        self.label_disjoint = true;
    }

    /// `H`: the skeleton without the excluded edges.
    fn working_graph(&self) -> Multigraph {
        Multigraph::new(
            self.matrix.n(),
            self.skeleton().filter(|e| !self.excluded.contains(e)),
        )
    }

    /// Looks for an odd cycle of `H` that uses a strong label.
    ///
    /// Repeatedly takes a shortest odd cycle of `H`. Where parallel edges
    /// give a choice, a strong label is preferred (smallest index first),
    /// otherwise the smallest weak label. A cycle with a strong label is
    /// returned. A cycle of weak labels only is recorded, its edge with the
    /// smallest label is excluded, and the search goes on. `None` means `H`
    /// is bipartite.
    ///
    /// The returned cycle always has distinct vertices. Its labels are
    /// distinct unless a strong label contributes two matching edges to it,
    /// which a shortest cycle of the skeleton does not rule out.
    pub fn find_codd_member(&mut self) -> Option<VertexLabelSequence> {
        loop {
            let h = self.working_graph();
            let (vertices, _) = h.shortest_odd_cycle()?;
            let pairs = h.pair_labels();
            let k = vertices.len();
            let labels: Vec<usize> = (0..k)
                .map(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % k]);
                    let options = &pairs[&(a.min(b), a.max(b))];
                    options
                        .iter()
                        .copied()
                        .find(|&l| self.matrix.is_strong(l))
                        .unwrap_or(options[0])
                })
                .collect();
            let seq = VertexLabelSequence::canonical(self.matrix, vertices, labels);
            if seq.strength() > 0 {
                return Some(seq);
            }
            let (pos, &label) = seq
                .labels()
                .iter()
                .enumerate()
                .min_by_key(|(_, &l)| l)
                .expect("cycle has labels");
            let (a, b) = (seq.vertices[pos], seq.vertices[(pos + 1) % k]);
            self.excluded.insert(SkeletonEdge::new(a, b, label));
            let seen: HashSet<usize> = self
                .zero_strong
                .iter()
                .flat_map(|c| c.labels().iter().copied())
                .collect();
            if seq.labels().iter().any(|l| seen.contains(l)) {
                self.label_disjoint = false;
            }
            self.zero_strong.push(seq);
        }
    }

    /// Whether `H` admits a proper 2-coloring.
    pub fn is_bipartite(&self) -> bool {
        self.working_graph().two_color().is_some()
    }
}

#[derive(Debug, Clone)]
pub struct BipartizationOutcome<'a> {
    pub terminated: bool,
    /// Number of re-matchings performed.
    pub iterations: usize,
    /// Distinct odd cycles with a strong label met along the way.
    pub codd_encounters: usize,
    pub state: BipartizationState<'a>,
    pub zero_strong_cycles: Vec<VertexLabelSequence>,
    pub label_disjoint: bool,
}

/// `max(1000, 10·n·⌈log₂(n+2)⌉)`.
pub fn default_max_rematch(n: usize) -> usize {
    let log = (usize::BITS - (n + 1).leading_zeros()) as usize; // ⌈log₂(n+2)⌉
    1000usize.max(10 * n * log)
}

/// Runs weak bipartization with matchings drawn from the
/// [`streams::MATCHING`] stream of `seed`.
///
/// Each round clears the detection bookkeeping, searches for an odd cycle
/// with a strong label and, if one exists, redraws the matching of its
/// smallest strong label. Stops when no such cycle is left, or reports
/// `terminated = false` once `max_rematch` redraws have been spent.
pub fn weak_bipartization(
    r: &RepresentationMatrix,
    seed: Seed,
    max_rematch: usize,
) -> BipartizationOutcome<'_> {
    let mut rng = seed.rng(streams::MATCHING);
    let state = BipartizationState::new(r, &mut rng);
    run_from(state, &mut rng, max_rematch)
}

/// Continues weak bipartization from a given state.
pub fn run_from<'a, R: Rng + ?Sized>(
    mut state: BipartizationState<'a>,
    rng: &mut R,
    max_rematch: usize,
) -> BipartizationOutcome<'a> {
    let mut iterations = 0;
    let mut encounters = HashSet::new();
    let terminated = loop {
        state.reset_detection();
        let Some(seq) = state.find_codd_member() else {
            break true;
        };
        encounters.insert(seq.key());
        if iterations >= max_rematch {
            break false;
        }
        let label = seq
            .labels()
            .iter()
            .copied()
            .filter(|&l| state.matrix.is_strong(l))
            .min()
            .expect("returned cycles carry a strong label");
        state.rematch(label, rng);
        iterations += 1;
    };
    BipartizationOutcome {
        terminated,
        iterations,
        codd_encounters: encounters.len(),
        zero_strong_cycles: state.zero_strong.clone(),
        label_disjoint: state.label_disjoint,
        state,
    }
}

/// Parity coloring of `H` = skeleton minus excluded edges: in each
/// component the smallest vertex gets `+1`, vertices at even distance `+1`,
/// at odd distance `−1`. Isolated vertices get `+1`.
///
/// Every non-excluded label ends with imbalance `|L_ℓ| mod 2`, every
/// excluded one with imbalance 2.
pub fn extract_coloring(outcome: &BipartizationOutcome<'_>) -> Result<Coloring> {
    if !outcome.terminated {
        return Err(Error::NotTerminated);
    }
    let colors = outcome
        .state
        .working_graph()
        .two_color()
        .expect("terminated runs leave a bipartite working graph");
    Coloring::new(colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::brute_force_max_cut;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rm(n: usize, sets: &[&[usize]]) -> RepresentationMatrix {
        RepresentationMatrix::from_label_sets(n, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    fn weak_triangle() -> RepresentationMatrix {
        rm(3, &[&[0, 1], &[1, 2], &[0, 2]])
    }

    #[test]
    fn matching_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_maximal_matching(&[4, 7], &mut rng), vec![(4, 7)]);
        assert!(random_maximal_matching(&[], &mut rng).is_empty());
        assert!(random_maximal_matching(&[3], &mut rng).is_empty());
        for size in 2..9 {
            let set: Vec<usize> = (0..size).collect();
            let mm = random_maximal_matching(&set, &mut rng);
            assert_eq!(mm.len(), size / 2);
            let mut used: Vec<usize> = mm.iter().flat_map(|&(a, b)| [a, b]).collect();
            used.sort_unstable();
            used.dedup();
            assert_eq!(used.len(), 2 * (size / 2));
        }
    }

    #[test]
    fn matching_of_three_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 10_000;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            match random_maximal_matching(&[0, 1, 2], &mut rng)[..] {
                [(0, 1)] => counts[0] += 1,
                [(0, 2)] => counts[1] += 1,
                [(1, 2)] => counts[2] += 1,
                ref other => panic!("unexpected matching {other:?}"),
            }
        }
        let se = ((1.0 / 3.0) * (2.0 / 3.0) / draws as f64).sqrt();
        for c in counts {
            let f = c as f64 / draws as f64;
            assert!((f - 1.0 / 3.0).abs() <= 4.0 * se, "{counts:?}");
        }
    }

    #[test]
    fn sequence_validation_and_canonical_form() {
        let r = weak_triangle();
        let s = VertexLabelSequence::new(&r, vec![2, 0, 1], vec![2, 0, 1]).unwrap();
        assert_eq!(s.vertices(), &[0, 1, 2]);
        assert_eq!(s.labels(), &[0, 1, 2]);
        assert_eq!(s.strength(), 0);
        assert!(s.is_odd() && s.has_distinct_labels());
        assert!(VertexLabelSequence::new(&r, vec![0, 1, 2], vec![0, 0, 2]).is_err());
        assert!(VertexLabelSequence::new(&r, vec![0, 1], vec![0]).is_err());
    }

    #[test]
    fn weak_triangle_is_recorded_not_returned() {
        let r = weak_triangle();
        let mut state =
            BipartizationState::with_matchings(&r, vec![vec![(0, 1)], vec![(1, 2)], vec![(0, 2)]])
                .unwrap();
        assert!(state.find_codd_member().is_none());
        assert_eq!(state.zero_strong_cycles().len(), 1);
        let excluded: Vec<_> = state.excluded().copied().collect();
        assert_eq!(excluded, vec![SkeletonEdge::new(0, 1, 0)]);
        assert!(state.label_disjoint());
        assert!(state.is_bipartite());
    }

    #[test]
    fn strong_triangle_is_returned() {
        let r = rm(4, &[&[0, 1, 3], &[1, 2], &[0, 2]]);
        let mut state =
            BipartizationState::with_matchings(&r, vec![vec![(0, 1)], vec![(1, 2)], vec![(0, 2)]])
                .unwrap();
        let seq = state.find_codd_member().unwrap();
        assert_eq!(seq.vertices(), &[0, 1, 2]);
        assert_eq!(seq.labels(), &[0, 1, 2]);
        assert_eq!(seq.strength(), 1);
        assert!(state.zero_strong_cycles().is_empty());
    }

    #[test]
    fn bipartite_skeleton_has_no_member() {
        let r = rm(2, &[&[0, 1]]);
        let mut state = BipartizationState::with_matchings(&r, vec![vec![(0, 1)]]).unwrap();
        assert!(state.find_codd_member().is_none());
        assert!(state.zero_strong_cycles().is_empty());
    }

    #[test]
    fn repeated_strong_label_on_shortest_cycle() {
        // label 0 = {0,1,2,3} matched as {0,1},{2,3}; weak labels close the
        // 5-cycle 0–1–4–2–3–0, the only odd cycle of the skeleton
        let r = rm(5, &[&[0, 1, 2, 3], &[1, 4], &[2, 4], &[0, 3]]);
        let mut state = BipartizationState::with_matchings(
            &r,
            vec![
                vec![(0, 1), (2, 3)],
                vec![(1, 4)],
                vec![(2, 4)],
                vec![(0, 3)],
            ],
        )
        .unwrap();
        let seq = state.find_codd_member().unwrap();
        assert_eq!(seq.len(), 5);
        assert_eq!(seq.strength(), 2);
        assert!(!seq.has_distinct_labels());
    }

    #[test]
    fn parallel_weak_edges_break_label_disjointness() {
        // two weak labels on the same pair: the triangle is found twice
        let r = rm(3, &[&[0, 1], &[0, 1], &[1, 2], &[0, 2]]);
        let mut state = BipartizationState::with_matchings(
            &r,
            vec![vec![(0, 1)], vec![(0, 1)], vec![(1, 2)], vec![(0, 2)]],
        )
        .unwrap();
        assert!(state.find_codd_member().is_none());
        assert_eq!(state.zero_strong_cycles().len(), 2);
        assert!(!state.label_disjoint());
    }

    #[test]
    fn with_matchings_rejects_bad_input() {
        let r = rm(4, &[&[0, 1, 2, 3]]);
        assert!(BipartizationState::with_matchings(&r, vec![vec![(0, 1)]]).is_err());
        assert!(BipartizationState::with_matchings(&r, vec![vec![(0, 1), (1, 2)]]).is_err());
        assert!(BipartizationState::with_matchings(&r, vec![]).is_err());
        assert!(BipartizationState::with_matchings(&r, vec![vec![(0, 1), (3, 2)]]).is_ok());
    }

    #[test]
    fn weak_triangle_terminates_immediately() {
        let r = weak_triangle();
        let out = weak_bipartization(&r, Seed(0), 10);
        assert!(out.terminated);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.zero_strong_cycles.len(), 1);
        let x = extract_coloring(&out).unwrap();
        assert_eq!(r.cut_weight(&x).unwrap(), 2);
        assert_eq!(
            r.cut_weight(&x).unwrap(),
            brute_force_max_cut(&r).unwrap().weight
        );
        let rows = r.set_system().imbalances(&x).unwrap();
        assert_eq!(rows, vec![2, 0, 0]);
    }

    #[test]
    fn forced_bad_matching_gets_rematched() {
        // only M(0) = {0,1} closes an odd cycle with the weak labels
        let r = rm(4, &[&[0, 1, 3], &[1, 2], &[0, 2]]);
        for s in 0..20 {
            let state = BipartizationState::with_matchings(
                &r,
                vec![vec![(0, 1)], vec![(1, 2)], vec![(0, 2)]],
            )
            .unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let out = run_from(state, &mut rng, 100);
            assert!(out.terminated);
            assert!(out.iterations >= 1);
            assert_eq!(out.codd_encounters, 1);
            let m0 = out.state.matching(0);
            assert!(m0 == [(0, 3)] || m0 == [(1, 3)], "{m0:?}");
        }
    }

    #[test]
    fn single_strong_label_balances_exactly() {
        let r = rm(4, &[&[0, 1, 2, 3]]);
        let out = weak_bipartization(&r, Seed(5), 10);
        assert!(out.terminated);
        let x = extract_coloring(&out).unwrap();
        assert_eq!(r.discrepancy(&x).unwrap(), 0);
        assert_eq!(r.cut_weight(&x).unwrap(), 4);
        assert_eq!(brute_force_max_cut(&r).unwrap().weight, 4);
    }

    #[test]
    fn edge_free_matrix_colors_all_plus() {
        let r = rm(4, &[&[2]]);
        let out = weak_bipartization(&r, Seed(5), 10);
        assert_eq!(extract_coloring(&out).unwrap(), Coloring::all_plus(4));
    }

    #[test]
    fn non_termination_is_reported() {
        // zero budget on a state that holds a member
        let r = rm(4, &[&[0, 1, 3], &[1, 2], &[0, 2]]);
        let state =
            BipartizationState::with_matchings(&r, vec![vec![(0, 1)], vec![(1, 2)], vec![(0, 2)]])
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = run_from(state, &mut rng, 0);
        assert!(!out.terminated);
        assert_eq!(out.iterations, 0);
        assert_eq!(extract_coloring(&out), Err(Error::NotTerminated));
    }

    #[test]
    fn default_cap() {
        assert_eq!(default_max_rematch(1), 1000);
        // ⌈log₂ 1002⌉ = 10
        assert_eq!(default_max_rematch(1000), 100_000);
        assert_eq!(default_max_rematch(2), 1000);
    }
}
