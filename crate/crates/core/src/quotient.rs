//! Quotient graph of a partitioned directed hypergraph.
//!
//! One node per block; a directed edge `i -> j` whenever some enabled net
//! has tail pins in block `i` and head pins in block `j`. Multiplicities
//! count the `(net, tail block, head block)` witnesses so edges can be
//! maintained incrementally under vertex moves.

use std::collections::VecDeque;

use crate::hypergraph::DirectedHypergraph;
use crate::partition::Partition;

#[derive(Debug, Clone)]
pub struct QuotientGraph {
    k: usize,
    multiplicity: Vec<u32>,
}

impl QuotientGraph {
    pub fn empty(k: usize) -> Self {
        QuotientGraph { k, multiplicity: vec![0; k * k] }
    }

    /// Builds the quotient graph of `part` over `h`'s enabled nets.
    pub fn build(h: &DirectedHypergraph, part: &Partition) -> Self {
        let mut q = QuotientGraph::empty(part.num_blocks());
        let mut tail_blocks = Vec::new();
        let mut head_blocks = Vec::new();
        for e in h.enabled_nets() {
            tail_blocks.clear();
            head_blocks.clear();
            for &t in h.tails(e) {
                let b = part.block_of(t);
                if !tail_blocks.contains(&b) {
                    tail_blocks.push(b);
                }
            }
            for &hd in h.heads(e) {
                let b = part.block_of(hd);
                if !head_blocks.contains(&b) {
                    head_blocks.push(b);
                }
            }
            for &i in &tail_blocks {
                for &j in &head_blocks {
                    if i != j {
                        q.multiplicity[i * q.k + j] += 1;
                    }
                }
            }
        }
        q
    }

    pub fn num_blocks(&self) -> usize {
        self.k
    }

    pub fn multiplicity(&self, from: usize, to: usize) -> u32 {
        self.multiplicity[from * self.k + to]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.multiplicity(from, to) > 0
    }

    /// Adds one witness; returns true if this created a new edge.
    pub fn add_witness(&mut self, from: usize, to: usize) -> bool {
        let m = &mut self.multiplicity[from * self.k + to];
        *m += 1;
        *m == 1
    }

    pub fn remove_witness(&mut self, from: usize, to: usize) {
        let m = &mut self.multiplicity[from * self.k + to];
        debug_assert!(*m > 0, "removing witness from empty edge {from}->{to}");
        *m -= 1;
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.k).flat_map(move |i| {
            (0..self.k).filter_map(move |j| {
                let m = self.multiplicity(i, j);
                (m > 0).then_some((i, j, m))
            })
        })
    }

    /// Kahn's algorithm on the block graph.
    pub fn is_acyclic(&self) -> bool {
        let k = self.k;
        let mut indegree = vec![0usize; k];
        for (_, j, _) in self.edges() {
            indegree[j] += 1;
        }
        let mut queue: VecDeque<usize> = (0..k).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop_front() {
            seen += 1;
            for j in 0..k {
                if self.has_edge(i, j) {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        seen == k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::diamond;

    fn partition_of(h: &DirectedHypergraph, blocks: &[usize], k: usize) -> Partition {
        Partition::from_assignment(h, blocks.to_vec(), k, 0.03).unwrap()
    }

    #[test]
    fn diamond_aligned_split_has_single_edge() {
        let h = diamond();
        let part = partition_of(&h, &[0, 0, 1, 1], 2);
        let q = QuotientGraph::build(&h, &part);
        // Witnesses via e1 (tail 0 -> head 2) and e2 (tail 1 -> head 3).
        assert_eq!(q.multiplicity(0, 1), 2);
        assert_eq!(q.multiplicity(1, 0), 0);
        assert!(q.is_acyclic());
    }

    #[test]
    fn diamond_crossed_split_is_cyclic() {
        let h = diamond();
        let part = partition_of(&h, &[0, 1, 1, 0], 2);
        let q = QuotientGraph::build(&h, &part);
        assert!(q.has_edge(0, 1));
        assert!(q.has_edge(1, 0));
        assert!(!q.is_acyclic());
    }

    #[test]
    fn single_block_has_no_edges() {
        let h = diamond();
        let part = partition_of(&h, &[0, 0, 0, 0], 1);
        let q = QuotientGraph::build(&h, &part);
        assert_eq!(q.edges().count(), 0);
        assert!(q.is_acyclic());
    }

    #[test]
    fn three_block_ring_is_cyclic() {
        let mut q = QuotientGraph::empty(3);
        q.add_witness(0, 1);
        q.add_witness(1, 2);
        q.add_witness(2, 0);
        assert!(!q.is_acyclic());
        q.remove_witness(2, 0);
        assert!(q.is_acyclic());
    }
}
