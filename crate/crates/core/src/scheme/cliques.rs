// Copyright 2026 The qcsi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Maximal clique enumeration (Bron–Kerbosch with pivoting) on graphs of at
//! most 32 vertices, using bitmask vertex sets.

/// Adjacency as one bitmask per vertex. No self loops.
pub(crate) struct MaskGraph {
    adj: Vec<u32>,
}

impl MaskGraph {
    pub fn new(vertices: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(vertices <= 32);
        let mut adj = vec![0u32; vertices];
        for i in 0..vertices {
            for j in i + 1..vertices {
                if edge(i, j) {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        MaskGraph { adj }
    }

    /// All maximal cliques, each as a sorted vertex list; the list itself is
    /// sorted lexicographically.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut out = Vec::new();
        self.expand(0, all, 0, &mut out);
        let mut cliques: Vec<Vec<usize>> = out
            .into_iter()
            .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
            .collect();
        cliques.sort();
        cliques
    }

    fn expand(&self, r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        // pivot with the most neighbours in P
        let pivot = bits(p | x)
            .max_by_key(|&u| (self.adj[u] & p).count_ones())
            .expect("P ∪ X is non-empty");
        for v in bits(p & !self.adj[pivot]) {
            let nv = self.adj[v];
            self.expand(r | 1 << v, p & nv, x & nv, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        let is_clique = |m: u32| (0..n).all(|i| (i + 1..n).all(|j| m >> i & 1 == 0 || m >> j & 1 == 0 || edge(i, j)));
        let mut out = Vec::new();
        for m in 0..1u32 << n {
            if !is_clique(m) {
                continue;
            }
            let maximal = (0..n).all(|v| m >> v & 1 == 1 || !is_clique(m | 1 << v));
            if maximal {
                out.push((0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>());
            }
        }
        out.sort();
        out
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn matches_brute_force_on_pseudo_random_graphs() {
        let mut state = 0x2545F4914F6CDD1Du64;
        for n in 0..11 {
            for _ in 0..5 {
                let mut edges = vec![vec![false; n]; n];
                for i in 0..n {
                    for j in i + 1..n {
                        state ^= state << 13;
                        state ^= state >> 7;
                        state ^= state << 17;
                        edges[i][j] = !state.is_multiple_of(3);
                        edges[j][i] = edges[i][j];
                    }
                }
                let g = MaskGraph::new(n, |i, j| edges[i][j]);
                assert_eq!(g.maximal_cliques(), brute_force(n, |i, j| edges[i][j]));
            }
        }
    }

    #[test]
    fn empty_and_complete() {
        assert_eq!(
            MaskGraph::new(0, |_, _| true).maximal_cliques(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(MaskGraph::new(3, |_, _| true).maximal_cliques(), vec![vec![0, 1, 2]]);
        assert_eq!(
            MaskGraph::new(3, |_, _| false).maximal_cliques(),
            vec![vec![0], vec![1], vec![2]]
        );
    }
}
