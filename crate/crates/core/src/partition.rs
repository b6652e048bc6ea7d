//! Block assignments with incremental connectivity bookkeeping.
//!
//! A `Partition` tracks, per net and block, the pin, tail and head counts,
//! the connectivity `lambda` of each net, and the running km1 and cut-net
//! objectives. All of it is updated in O(incident pins) per vertex move
//! and can be cross-checked against a from-scratch recount.

use thiserror::Error;

use crate::hypergraph::{ContractionMemento, DirectedHypergraph, PinRole};
use crate::quotient::QuotientGraph;
use crate::toposort;

pub const UNASSIGNED: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("vertex {0} has no block assignment")]
    Incomplete(usize),
    #[error("vertex {vertex} assigned to block {block} but k = {k}")]
    BlockOutOfRange { vertex: usize, block: usize, k: usize },
    #[error("assignment has {len} entries but the hypergraph has {n} vertices")]
    LengthMismatch { len: usize, n: usize },
    #[error("no move target exists for k = {0}")]
    NoTarget(usize),
}

/// `L_max = (1 + epsilon) * ceil(total / k)`.
pub fn balance_limit(total_weight: f64, k: usize, epsilon: f64) -> f64 {
    (1.0 + epsilon) * (total_weight / k as f64).ceil()
}

#[derive(Debug, Clone)]
pub struct Partition {
    k: usize,
    epsilon: f64,
    block_of: Vec<usize>,
    block_weight: Vec<f64>,
    block_capacity: Vec<f64>,
    // Flat per-net-per-block counters, indexed e * k + block.
    pin_counts: Vec<u32>,
    tail_counts: Vec<u32>,
    head_counts: Vec<u32>,
    lambda: Vec<u32>,
    km1: f64,
    cut: f64,
}

impl Partition {
    /// Builds the full bookkeeping for `assignment`. Every enabled vertex
    /// must carry a block id below `k`; disabled vertices are ignored.
    /// Counters cover disabled nets too (their surviving pins), so that
    /// uncontraction can restore them incrementally.
    pub fn from_assignment(
        h: &DirectedHypergraph,
        assignment: Vec<usize>,
        k: usize,
        epsilon: f64,
    ) -> Result<Self, PartitionError> {
        if assignment.len() != h.num_vertices() {
            return Err(PartitionError::LengthMismatch {
                len: assignment.len(),
                n: h.num_vertices(),
            });
        }
        for v in h.enabled_vertices() {
            let b = assignment[v];
            if b == UNASSIGNED {
                return Err(PartitionError::Incomplete(v));
            }
            if b >= k {
                return Err(PartitionError::BlockOutOfRange { vertex: v, block: b, k });
            }
        }

        let mut block_weight = vec![0.0; k];
        for v in h.enabled_vertices() {
            block_weight[assignment[v]] += h.vertex_weight(v);
        }
        let l_max = balance_limit(h.total_vertex_weight(), k, epsilon);

        let m = h.num_nets();
        let mut part = Partition {
            k,
            epsilon,
            block_of: assignment,
            block_weight,
            block_capacity: vec![l_max; k],
            pin_counts: vec![0; m * k],
            tail_counts: vec![0; m * k],
            head_counts: vec![0; m * k],
            lambda: vec![0; m],
            km1: 0.0,
            cut: 0.0,
        };
        for e in 0..m {
            for &t in h.tails(e) {
                let b = part.block_of[t];
                part.pin_counts[e * k + b] += 1;
                part.tail_counts[e * k + b] += 1;
            }
            for &hd in h.heads(e) {
                let b = part.block_of[hd];
                part.pin_counts[e * k + b] += 1;
                part.head_counts[e * k + b] += 1;
            }
            let lambda = (0..k).filter(|&b| part.pin_counts[e * k + b] > 0).count() as u32;
            part.lambda[e] = lambda;
            if h.is_net_enabled(e) && lambda > 1 {
                part.km1 += (lambda - 1) as f64 * h.net_weight(e);
                part.cut += h.net_weight(e);
            }
        }
        Ok(part)
    }

    pub fn num_blocks(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.block_of
    }

    pub fn block_weight(&self, b: usize) -> f64 {
        self.block_weight[b]
    }

    pub fn block_capacity(&self, b: usize) -> f64 {
        self.block_capacity[b]
    }

    /// Overrides the per-block weight caps (recursive bipartitioning uses
    /// non-uniform targets).
    pub fn set_block_capacities(&mut self, caps: Vec<f64>) {
        assert_eq!(caps.len(), self.k);
        self.block_capacity = caps;
    }

    pub fn max_block_weight(&self) -> f64 {
        self.block_weight.iter().cloned().fold(0.0, f64::max)
    }

    /// Sum of block weight above capacity; zero means feasible.
    pub fn total_overload(&self) -> f64 {
        self.block_weight
            .iter()
            .zip(&self.block_capacity)
            .map(|(w, c)| (w - c).max(0.0))
            .sum()
    }

    /// Connectivity objective `km1 = sum (lambda(e) - 1) * weight(e)`.
    pub fn km1(&self) -> f64 {
        self.km1
    }

    /// Cut-net objective: total weight of nets spanning several blocks.
    pub fn cut_weight(&self) -> f64 {
        self.cut
    }

    pub fn lambda(&self, e: usize) -> u32 {
        self.lambda[e]
    }

    pub fn pin_count(&self, e: usize, b: usize) -> u32 {
        self.pin_counts[e * self.k + b]
    }

    pub fn tail_count(&self, e: usize, b: usize) -> u32 {
        self.tail_counts[e * self.k + b]
    }

    pub fn head_count(&self, e: usize, b: usize) -> u32 {
        self.head_counts[e * self.k + b]
    }

    /// Blocks with at least one pin of net `e` (its connectivity set).
    pub fn connectivity_set(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(move |&b| self.pin_count(e, b) > 0)
    }

    /// Gain of moving `v` to `target`: the resulting reduction in km1.
    pub fn gain(
        &self,
        h: &DirectedHypergraph,
        v: usize,
        target: usize,
    ) -> Result<f64, PartitionError> {
        if self.k < 2 || target >= self.k || target == self.block_of[v] {
            return Err(PartitionError::NoTarget(self.k));
        }
        Ok(self.gain_raw(h, v, target))
    }

    pub(crate) fn gain_raw(&self, h: &DirectedHypergraph, v: usize, target: usize) -> f64 {
        let from = self.block_of[v];
        let mut gain = 0.0;
        for &e in h.incident_nets(v) {
            if !h.is_net_enabled(e) {
                continue;
            }
            let w = h.net_weight(e);
            if self.pin_count(e, from) == 1 {
                gain += w;
            }
            if self.pin_count(e, target) == 0 {
                gain -= w;
            }
        }
        gain
    }

    /// Moves `v` to `target`, updating weights, counters, lambda and both
    /// objectives incrementally.
    pub fn move_vertex(&mut self, h: &DirectedHypergraph, v: usize, target: usize) {
        let from = self.block_of[v];
        debug_assert_ne!(from, target);
        let k = self.k;
        self.block_of[v] = target;
        let w_v = h.vertex_weight(v);
        self.block_weight[from] -= w_v;
        self.block_weight[target] += w_v;
        for &e in h.incident_nets(v) {
            let role = h.pin_role(e, v).expect("incident net must contain the pin");
            let (fi, ti) = (e * k + from, e * k + target);
            self.pin_counts[fi] -= 1;
            self.pin_counts[ti] += 1;
            match role {
                PinRole::Tail => {
                    self.tail_counts[fi] -= 1;
                    self.tail_counts[ti] += 1;
                }
                PinRole::Head => {
                    self.head_counts[fi] -= 1;
                    self.head_counts[ti] += 1;
                }
            }
            let enabled = h.is_net_enabled(e);
            let w = h.net_weight(e);
            if self.pin_counts[fi] == 0 {
                self.lambda[e] -= 1;
                if enabled {
                    self.km1 -= w;
                    if self.lambda[e] == 1 {
                        self.cut -= w;
                    }
                }
            }
            if self.pin_counts[ti] == 1 {
                self.lambda[e] += 1;
                if enabled {
                    self.km1 += w;
                    if self.lambda[e] == 2 {
                        self.cut += w;
                    }
                }
            }
        }
    }

    /// Restores bookkeeping after `h.uncontract(m)`: the removed vertex
    /// rejoins the survivor's block and its pins re-enter the counters.
    pub fn apply_uncontract(&mut self, m: &ContractionMemento) {
        let b = self.block_of[m.survivor()];
        debug_assert_ne!(b, UNASSIGNED);
        self.block_of[m.removed()] = b;
        for (e, role) in m.removed_pins() {
            let i = e * self.k + b;
            self.pin_counts[i] += 1;
            match role {
                PinRole::Tail => self.tail_counts[i] += 1,
                PinRole::Head => self.head_counts[i] += 1,
            }
        }
        for e in m.promoted_nets() {
            let i = e * self.k + b;
            self.head_counts[i] -= 1;
            self.tail_counts[i] += 1;
        }
    }

    /// From-scratch km1 used to cross-check the incremental value.
    pub fn recount_km1(&self, h: &DirectedHypergraph) -> f64 {
        let mut km1 = 0.0;
        let mut blocks = Vec::new();
        for e in h.enabled_nets() {
            blocks.clear();
            for p in h.pins(e) {
                let b = self.block_of[p];
                if !blocks.contains(&b) {
                    blocks.push(b);
                }
            }
            if blocks.len() > 1 {
                km1 += (blocks.len() - 1) as f64 * h.net_weight(e);
            }
        }
        km1
    }
}

/// Verification report for a complete k-way partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub acyclic: bool,
    pub balanced: bool,
    pub blocks_nonempty: bool,
    pub km1: f64,
    pub cut: f64,
    pub max_block_weight: f64,
    pub l_max: f64,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.acyclic && self.balanced && self.blocks_nonempty
    }
}

/// Recomputes every partition property from scratch: quotient acyclicity,
/// balance against `L_max`, non-empty blocks and both objectives.
pub fn verify_partition(
    h: &DirectedHypergraph,
    assignment: &[usize],
    k: usize,
    epsilon: f64,
) -> Result<PartitionReport, PartitionError> {
    let part = Partition::from_assignment(h, assignment.to_vec(), k, epsilon)?;
    let quotient = QuotientGraph::build(h, &part);
    let acyclic = quotient.is_acyclic() && toposort::is_acyclic(h);
    let l_max = balance_limit(h.total_vertex_weight(), k, epsilon);
    let max_block_weight = part.max_block_weight();
    let mut occupied = vec![false; k];
    for v in h.enabled_vertices() {
        occupied[part.block_of(v)] = true;
    }
    Ok(PartitionReport {
        acyclic,
        balanced: part.block_weight.iter().all(|&w| w <= l_max),
        blocks_nonempty: occupied.iter().all(|&o| o),
        km1: part.km1(),
        cut: part.cut_weight(),
        max_block_weight,
        l_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::diamond;

    #[test]
    fn diamond_metrics() {
        let h = diamond();
        let part = Partition::from_assignment(&h, vec![0, 0, 1, 1], 2, 0.03).unwrap();
        assert_eq!(part.km1(), 2.0);
        assert_eq!(part.cut_weight(), 2.0);
        assert_eq!(part.lambda(0), 1);
        assert_eq!(part.lambda(1), 2);
        assert_eq!(part.lambda(2), 2);
    }

    #[test]
    fn single_block_has_zero_objectives() {
        let h = diamond();
        let part = Partition::from_assignment(&h, vec![0; 4], 1, 0.03).unwrap();
        assert_eq!(part.km1(), 0.0);
        assert_eq!(part.cut_weight(), 0.0);
    }

    #[test]
    fn weighted_net_spanning_three_blocks() {
        let h = crate::hypergraph::DirectedHypergraph::build(
            &[1.0; 3],
            &[(vec![2], vec![0, 1], 2.0)],
        )
        .unwrap();
        let part = Partition::from_assignment(&h, vec![0, 1, 2], 3, 0.03).unwrap();
        assert_eq!(part.km1(), 4.0);
        assert_eq!(part.cut_weight(), 2.0);
    }

    #[test]
    fn balance_limit_matches_formula() {
        let l = balance_limit(10.0, 3, 0.03);
        assert!((l - 4.12).abs() < 1e-12);
    }

    #[test]
    fn verify_reports_diamond_split() {
        let h = diamond();
        let report = verify_partition(&h, &[0, 0, 1, 1], 2, 0.03).unwrap();
        assert!(report.acyclic);
        assert!(report.balanced);
        assert!(report.blocks_nonempty);
        assert_eq!(report.km1, 2.0);
    }

    #[test]
    fn verify_flags_imbalance() {
        let h = diamond();
        let report = verify_partition(&h, &[0, 1, 1, 1], 2, 0.03).unwrap();
        assert!(!report.balanced);
        assert!((report.l_max - 2.06).abs() < 1e-12);
        assert_eq!(report.max_block_weight, 3.0);
    }

    #[test]
    fn verify_rejects_incomplete_assignment() {
        let h = diamond();
        let err = verify_partition(&h, &[0, 0, UNASSIGNED, 1], 2, 0.03).unwrap_err();
        assert_eq!(err, PartitionError::Incomplete(2));
    }

    #[test]
    fn gain_matches_recount_on_diamond() {
        let h = diamond();
        let part = Partition::from_assignment(&h, vec![0, 0, 1, 1], 2, 0.03).unwrap();
        // Moving vertex 2 to block 0 makes e1 internal: km1 2 -> 1.
        assert_eq!(part.gain(&h, 2, 0).unwrap(), 1.0);
        let mut moved = part.clone();
        moved.move_vertex(&h, 2, 0);
        assert_eq!(part.km1() - moved.km1(), 1.0);
        assert_eq!(moved.km1(), moved.recount_km1(&h));
    }

    #[test]
    fn gain_requires_a_target() {
        let h = diamond();
        let part = Partition::from_assignment(&h, vec![0; 4], 1, 0.03).unwrap();
        assert_eq!(part.gain(&h, 0, 0).unwrap_err(), PartitionError::NoTarget(1));
    }

    #[test]
    fn moves_keep_bookkeeping_consistent() {
        let h = diamond();
        let mut part = Partition::from_assignment(&h, vec![0, 0, 1, 1], 2, 0.03).unwrap();
        for (v, to) in [(2, 0), (3, 0), (0, 1), (2, 1), (3, 1)] {
            part.move_vertex(&h, v, to);
            assert_eq!(part.km1(), part.recount_km1(&h), "after moving {v} to {to}");
            let fresh =
                Partition::from_assignment(&h, part.assignment().to_vec(), 2, 0.03).unwrap();
            assert_eq!(part.pin_counts, fresh.pin_counts);
            assert_eq!(part.tail_counts, fresh.tail_counts);
            assert_eq!(part.head_counts, fresh.head_counts);
            assert_eq!(part.lambda, fresh.lambda);
            assert_eq!(part.cut_weight(), fresh.cut_weight());
        }
    }

    #[test]
    fn uncontract_restores_bookkeeping() {
        use crate::hypergraph::ContractMode;
        let mut h = diamond();
        let mut part = Partition::from_assignment(&h, vec![0, 0, 0, 1], 2, 0.03).unwrap();
        let km1_before = part.km1();
        let m = h.contract(1, 2, ContractMode::SingleHead).unwrap();
        // Same-block contraction never changes km1.
        let coarse = Partition::from_assignment(&h, part.assignment().to_vec(), 2, 0.03).unwrap();
        assert_eq!(coarse.km1(), km1_before);
        h.uncontract(&m).unwrap();
        // Rebuild coarse state, then check apply_uncontract matches scratch.
        let mut h2 = diamond();
        let m2 = h2.contract(1, 2, ContractMode::SingleHead).unwrap();
        let mut tracked =
            Partition::from_assignment(&h2, part.assignment().to_vec(), 2, 0.03).unwrap();
        h2.uncontract(&m2).unwrap();
        tracked.apply_uncontract(&m2);
        let fresh = Partition::from_assignment(&h2, tracked.assignment().to_vec(), 2, 0.03)
            .unwrap();
        assert_eq!(tracked.pin_counts, fresh.pin_counts);
        assert_eq!(tracked.tail_counts, fresh.tail_counts);
        assert_eq!(tracked.head_counts, fresh.head_counts);
        assert_eq!(tracked.km1(), fresh.km1());
        let _ = part.gain(&h, 3, 0);
    }
}
