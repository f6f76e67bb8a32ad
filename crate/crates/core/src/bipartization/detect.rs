//! Odd-cycle search on the matching skeleton.

use std::collections::{HashMap, VecDeque};

use super::SkeletonEdge;

const UNSEEN: usize = usize::MAX;

/// Adjacency of a multigraph given as labelled edges.
pub(crate) struct Multigraph {
    adj: Vec<Vec<(usize, usize)>>,
}

impl Multigraph {
    pub(crate) fn new(n: usize, edges: impl IntoIterator<Item = SkeletonEdge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in edges {
            adj[e.u].push((e.v, e.label));
            adj[e.v].push((e.u, e.label));
        }
        Self { adj }
    }

    pub(crate) fn n(&self) -> usize {
        self.adj.len()
    }

    /// BFS parity coloring, rooted at the smallest vertex of every
    /// component: `+1` on even layers, `−1` on odd ones. `None` when some
    /// edge joins two vertices of equal parity.
    pub(crate) fn two_color(&self) -> Option<Vec<i8>> {
        let n = self.n();
        let mut color = vec![0i8; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            color[root] = 1;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &self.adj[u] {
                    if color[w] == 0 {
                        color[w] = -color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// Vertices lying in components that contain an odd cycle, ascending.
    fn odd_component_vertices(&self) -> Vec<usize> {
        let n = self.n();
        let mut color = vec![0i8; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let mut members = Vec::new();
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            color[root] = 1;
            queue.push_back(root);
            members.clear();
            let mut odd = false;
            while let Some(u) = queue.pop_front() {
                members.push(u);
                for &(w, _) in &self.adj[u] {
                    if color[w] == 0 {
                        color[w] = -color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        odd = true;
                    }
                }
            }
            if odd {
                out.extend_from_slice(&members);
            }
        }
        out.sort_unstable();
        out
    }

    /// A shortest odd cycle as `(vertices, edge labels)`, where label `i`
    /// joins vertex `i` to vertex `i + 1` (cyclically). Among cycles of
    /// minimum length the one found from the smallest BFS root wins.
    ///
    /// A BFS from `s` that meets an edge between two vertices on the same
    /// layer `d` closes an odd walk of length `2d + 1`. The minimum over all
    /// roots is attained by a simple cycle, because a non-simple one would
    /// contain a shorter odd cycle that some other root would have found.
    pub(crate) fn shortest_odd_cycle(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let candidates = self.odd_component_vertices();
        if candidates.is_empty() {
            return None;
        }
        let n = self.n();
        let mut dist = vec![UNSEEN; n];
        let mut parent = vec![(UNSEEN, UNSEEN); n];
        let mut seen = Vec::new();
        let mut queue = VecDeque::new();
        // (length, root, u, w, label of u–w)
        let mut best: Option<(usize, usize, usize, usize, usize)> = None;
        let mut best_parents: Vec<(usize, usize)> = Vec::new();
        let mut best_dist: Vec<usize> = Vec::new();

        for &root in &candidates {
            for &v in &seen {
                dist[v] = UNSEEN;
                parent[v] = (UNSEEN, UNSEEN);
            }
            seen.clear();
            queue.clear();
            dist[root] = 0;
            seen.push(root);
            queue.push_back(root);
            let mut found: Option<(usize, usize, usize, usize)> = None;
            'bfs: while let Some(u) = queue.pop_front() {
                let limit = found
                    .map(|f| f.0)
                    .or(best.map(|b| b.0))
                    .unwrap_or(usize::MAX);
                if 2 * dist[u] + 1 >= limit {
                    break 'bfs;
                }
                for &(w, label) in &self.adj[u] {
                    if dist[w] == UNSEEN {
                        dist[w] = dist[u] + 1;
                        parent[w] = (u, label);
                        seen.push(w);
                        queue.push_back(w);
                    } else if dist[w] == dist[u] {
                        let len = 2 * dist[u] + 1;
                        if found.is_none_or(|f| len < f.0) {
                            found = Some((len, u, w, label));
                        }
                    }
                }
            }
            if let Some((len, u, w, label)) = found {
                if best.is_none_or(|b| len < b.0) {
                    best = Some((len, root, u, w, label));
                    best_parents.clone_from(&parent);
                    best_dist.clone_from(&dist);
                }
            }
            if best.is_some_and(|b| b.0 == 3) {
                break;
            }
        }

        let (_, root, u, w, closing) = best?;
        let walk_up = |mut v: usize| {
            let mut verts = vec![v];
            let mut labels = Vec::new();
            while v != root {
                let (p, l) = best_parents[v];
                labels.push(l);
                verts.push(p);
                v = p;
            }
            (verts, labels)
        };
        debug_assert_eq!(best_dist[u], best_dist[w]);
        // root → … → u, then u–w, then w → … → root
        let (mut up_u, mut lab_u) = walk_up(u);
        up_u.reverse();
        lab_u.reverse();
        let (up_w, lab_w) = walk_up(w);
        let mut vertices = up_u;
        let mut labels = lab_u;
        labels.push(closing);
        vertices.extend_from_slice(&up_w[..up_w.len() - 1]);
        labels.extend_from_slice(&lab_w);
        debug_assert_eq!(vertices.len(), labels.len());
        debug_assert!({
            let mut s = vertices.clone();
            s.sort_unstable();
            s.windows(2).all(|p| p[0] != p[1])
        });
        Some((vertices, labels))
    }

    /// Labels of all edges between each unordered vertex pair.
    pub(crate) fn pair_labels(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &(w, label) in nbrs {
                if u < w {
                    map.entry((u, w)).or_default().push(label);
                }
            }
        }
        for labels in map.values_mut() {
            labels.sort_unstable();
        }
        map
    }
}
