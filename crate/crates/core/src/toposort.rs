//! Topological orderings and toplevels for directed hypergraphs.
//!
//! Kahn's algorithm is adapted to nets: a vertex's effective indegree is
//! the number of enabled nets in which it is a head and which have at
//! least one tail; a net releases its heads once all of its tails have
//! been ordered. Direction-less nets (no heads or no tails) impose no
//! ordering constraints.

use std::collections::VecDeque;

use thiserror::Error;

use crate::hypergraph::DirectedHypergraph;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("the directed hypergraph contains a cycle")]
pub struct CyclicInput;

/// Direction for toplevel computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Longest path from any indegree-zero vertex.
    Forward,
    /// Longest path to any outdegree-zero vertex.
    Reversed,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reversed,
            Direction::Reversed => Direction::Forward,
        }
    }
}

struct Kahn {
    reversed: bool,
    indegree: Vec<usize>,
    remaining: Vec<usize>,
}

impl Kahn {
    fn new(h: &DirectedHypergraph, reversed: bool) -> Self {
        let mut indegree = vec![0usize; h.num_vertices()];
        let mut remaining = vec![0usize; h.num_nets()];
        for e in h.enabled_nets() {
            let (sources, targets) = Self::split(h, e, reversed);
            if sources.is_empty() || targets.is_empty() {
                continue;
            }
            remaining[e] = sources.len();
            for &t in targets {
                indegree[t] += 1;
            }
        }
        Kahn { reversed, indegree, remaining }
    }

    fn split(h: &DirectedHypergraph, e: usize, reversed: bool) -> (&[usize], &[usize]) {
        if reversed {
            (h.heads(e), h.tails(e))
        } else {
            (h.tails(e), h.heads(e))
        }
    }

    /// FIFO queue seeded with all effective sources in ascending id.
    fn seed(&self, h: &DirectedHypergraph) -> VecDeque<usize> {
        h.enabled_vertices().filter(|&v| self.indegree[v] == 0).collect()
    }
}

fn order_impl(
    h: &DirectedHypergraph,
    reversed: bool,
    mut levels: Option<&mut Vec<usize>>,
) -> Result<Vec<usize>, CyclicInput> {
    let mut kahn = Kahn::new(h, reversed);
    let mut net_level = vec![0usize; h.num_nets()];
    let mut order = Vec::with_capacity(h.num_enabled_vertices());
    let mut queue = kahn.seed(h);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let v_level = levels.as_ref().map_or(0, |l| l[v]);
        for &e in h.incident_nets(v) {
            if !h.is_net_enabled(e) || kahn.remaining[e] == 0 {
                continue;
            }
            let (sources, targets) = Kahn::split(h, e, reversed);
            if !sources.contains(&v) {
                continue;
            }
            net_level[e] = net_level[e].max(v_level);
            kahn.remaining[e] -= 1;
            if kahn.remaining[e] == 0 {
                for &t in targets {
                    if let Some(l) = levels.as_mut() {
                        l[t] = l[t].max(net_level[e] + 1);
                    }
                    kahn.indegree[t] -= 1;
                    if kahn.indegree[t] == 0 {
                        queue.push_back(t);
                    }
                }
            }
        }
    }
    if order.len() == h.num_enabled_vertices() {
        Ok(order)
    } else {
        Err(CyclicInput)
    }
}

/// Topological order of the enabled vertices; `CyclicInput` doubles as
/// the acyclicity test.
pub fn topological_order(h: &DirectedHypergraph) -> Result<Vec<usize>, CyclicInput> {
    order_impl(h, false, None)
}

pub fn is_acyclic(h: &DirectedHypergraph) -> bool {
    topological_order(h).is_ok()
}

/// Toplevel of each enabled vertex: length of the longest path from a
/// source (forward) or to a sink (reversed). Entries for disabled
/// vertices are zero and meaningless.
pub fn toplevels(
    h: &DirectedHypergraph,
    direction: Direction,
) -> Result<Vec<usize>, CyclicInput> {
    let mut levels = vec![0usize; h.num_vertices()];
    order_impl(h, direction == Direction::Reversed, Some(&mut levels))?;
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{chain3, diamond, two_cycle};

    #[test]
    fn chain_toplevels_and_order() {
        let h = chain3();
        assert_eq!(toplevels(&h, Direction::Forward).unwrap(), vec![0, 1, 2]);
        assert_eq!(topological_order(&h).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn diamond_toplevels_both_directions() {
        let h = diamond();
        assert_eq!(toplevels(&h, Direction::Forward).unwrap(), vec![0, 1, 1, 2]);
        assert_eq!(toplevels(&h, Direction::Reversed).unwrap(), vec![2, 1, 1, 0]);
    }

    #[test]
    fn diamond_order_respects_all_tail_head_pairs() {
        let h = diamond();
        let order = topological_order(&h).unwrap();
        let mut pos = vec![0; 4];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for e in h.enabled_nets() {
            for &t in h.tails(e) {
                for &hd in h.heads(e) {
                    assert!(pos[t] < pos[hd], "net {e}: {t} must precede {hd}");
                }
            }
        }
    }

    #[test]
    fn two_cycle_is_rejected() {
        let h = two_cycle();
        assert_eq!(topological_order(&h).unwrap_err(), CyclicInput);
        assert_eq!(toplevels(&h, Direction::Forward).unwrap_err(), CyclicInput);
        assert!(!is_acyclic(&h));
    }

    #[test]
    fn directionless_nets_impose_no_constraint() {
        let h = crate::hypergraph::DirectedHypergraph::build_relaxed(
            &[1.0; 3],
            &[(vec![1], vec![0], 1.0), (vec![], vec![1, 2], 1.0)],
        )
        .unwrap();
        assert!(is_acyclic(&h));
        assert_eq!(toplevels(&h, Direction::Forward).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn contraction_keeps_kahn_consistent() {
        use crate::hypergraph::ContractMode;
        let mut h = diamond();
        let m = h.contract(1, 2, ContractMode::SingleHead).unwrap();
        assert_eq!(topological_order(&h).unwrap(), vec![0, 1, 3]);
        assert_eq!(toplevels(&h, Direction::Forward).unwrap()[3], 2);
        h.uncontract(&m).unwrap();
        assert_eq!(toplevels(&h, Direction::Forward).unwrap(), vec![0, 1, 1, 2]);
    }
}
