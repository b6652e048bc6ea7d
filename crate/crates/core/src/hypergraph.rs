//! Directed hypergraph storage with reversible pairwise contraction.
//!
//! Vertices and nets carry dense 0-based ids that stay stable across
//! contractions: entities are disabled, never deleted, so a memento can
//! restore the exact prior state.

use thiserror::Error;

/// Role of a pin inside a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinRole {
    Head,
    Tail,
}

/// How contraction resolves pin roles in shared nets.
///
/// `SingleHead` is for hypergraphs where every net has at most one head:
/// contracting a head with a tail promotes the survivor to head.
/// `MultiHead` requires both endpoints to have the same role in every
/// shared net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractMode {
    SingleHead,
    MultiHead,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("net {net}: vertex {vertex} appears more than once")]
    DuplicatePin { net: usize, vertex: usize },
    #[error("net {net}: empty head or tail set")]
    EmptyHeadOrTail { net: usize },
    #[error("net {net}: fewer than two pins")]
    TooFewPins { net: usize },
    #[error("{entity} {id}: weight must be strictly positive")]
    NonPositiveWeight { entity: &'static str, id: usize },
    #[error("net {net}: vertex {vertex} out of range (vertex count {n})")]
    IdOutOfRange { net: usize, vertex: usize, n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContractError {
    #[error("vertices {u} and {v} have conflicting roles in shared net {net}")]
    RoleConflict { u: usize, v: usize, net: usize },
    #[error("vertex {0} is disabled")]
    VertexDisabled(usize),
    #[error("memento does not match the most recent unreverted contraction")]
    OutOfOrderUncontract,
}

#[derive(Debug, Clone)]
struct Net {
    heads: Vec<usize>,
    tails: Vec<usize>,
    weight: f64,
    enabled: bool,
}

impl Net {
    fn size(&self) -> usize {
        self.heads.len() + self.tails.len()
    }

    fn contains(&self, v: usize) -> bool {
        self.heads.contains(&v) || self.tails.contains(&v)
    }

    fn role_of(&self, v: usize) -> Option<PinRole> {
        if self.heads.contains(&v) {
            Some(PinRole::Head)
        } else if self.tails.contains(&v) {
            Some(PinRole::Tail)
        } else {
            None
        }
    }

    fn role_list(&mut self, role: PinRole) -> &mut Vec<usize> {
        match role {
            PinRole::Head => &mut self.heads,
            PinRole::Tail => &mut self.tails,
        }
    }
}

/// One pin-level edit performed by a contraction, with enough position
/// information to undo it exactly.
#[derive(Debug, Clone)]
enum PinChange {
    /// `removed` was replaced by the survivor at `pos` of the `role` list.
    Replaced { net: usize, role: PinRole, pos: usize },
    /// `removed` was deleted from `pos` of the `role` list.
    Removed { net: usize, role: PinRole, pos: usize },
    /// The survivor moved from `tail_pos` of the tail list to the end of
    /// the head list (single-head promotion).
    Promoted { net: usize, tail_pos: usize },
}

/// Reversible record of one pairwise contraction.
#[derive(Debug, Clone)]
pub struct ContractionMemento {
    survivor: usize,
    removed: usize,
    weight_delta: f64,
    changes: Vec<PinChange>,
    disabled_nets: Vec<usize>,
    incidence_added: usize,
    id: u64,
}

impl ContractionMemento {
    pub fn survivor(&self) -> usize {
        self.survivor
    }

    pub fn removed(&self) -> usize {
        self.removed
    }

    /// Nets that dropped below two pins and were disabled by this
    /// contraction.
    pub fn disabled_nets(&self) -> &[usize] {
        &self.disabled_nets
    }

    /// Nets in which the removed vertex lost a pin (as opposed to having
    /// it renamed to the survivor), paired with the removed pin's role.
    pub fn removed_pins(&self) -> impl Iterator<Item = (usize, PinRole)> + '_ {
        self.changes.iter().filter_map(|c| match *c {
            PinChange::Removed { net, role, .. } => Some((net, role)),
            _ => None,
        })
    }

    /// Nets in which the survivor switched from tail to head.
    pub fn promoted_nets(&self) -> impl Iterator<Item = usize> + '_ {
        self.changes.iter().filter_map(|c| match *c {
            PinChange::Promoted { net, .. } => Some(net),
            _ => None,
        })
    }
}

/// A directed hypergraph: nets split their pins into tails and heads.
#[derive(Debug, Clone)]
pub struct DirectedHypergraph {
    vertex_weight: Vec<f64>,
    vertex_enabled: Vec<bool>,
    incidence: Vec<Vec<usize>>,
    nets: Vec<Net>,
    num_enabled_vertices: usize,
    memento_counter: u64,
    active_contractions: Vec<u64>,
}

impl DirectedHypergraph {
    /// Builds a hypergraph from vertex weights and `(heads, tails, weight)`
    /// net specs. Every net must have at least one head and one tail.
    pub fn build(
        vertex_weights: &[f64],
        net_specs: &[(Vec<usize>, Vec<usize>, f64)],
    ) -> Result<Self, BuildError> {
        Self::build_impl(vertex_weights, net_specs, false)
    }

    /// Like [`build`](Self::build) but accepts direction-less nets (empty
    /// head or tail set) as long as each net keeps at least two pins.
    /// Induced subhypergraphs of partition blocks need this.
    pub fn build_relaxed(
        vertex_weights: &[f64],
        net_specs: &[(Vec<usize>, Vec<usize>, f64)],
    ) -> Result<Self, BuildError> {
        Self::build_impl(vertex_weights, net_specs, true)
    }

    fn build_impl(
        vertex_weights: &[f64],
        net_specs: &[(Vec<usize>, Vec<usize>, f64)],
        relaxed: bool,
    ) -> Result<Self, BuildError> {
        let n = vertex_weights.len();
        for (v, &w) in vertex_weights.iter().enumerate() {
            if !(w > 0.0) {
                return Err(BuildError::NonPositiveWeight { entity: "vertex", id: v });
            }
        }
        let mut seen = vec![usize::MAX; n];
        for (e, (heads, tails, weight)) in net_specs.iter().enumerate() {
            if !(*weight > 0.0) {
                return Err(BuildError::NonPositiveWeight { entity: "net", id: e });
            }
            if !relaxed && (heads.is_empty() || tails.is_empty()) {
                return Err(BuildError::EmptyHeadOrTail { net: e });
            }
            if heads.len() + tails.len() < 2 {
                return Err(BuildError::TooFewPins { net: e });
            }
            for &v in heads.iter().chain(tails.iter()) {
                if v >= n {
                    return Err(BuildError::IdOutOfRange { net: e, vertex: v, n });
                }
                if seen[v] == e {
                    return Err(BuildError::DuplicatePin { net: e, vertex: v });
                }
                seen[v] = e;
            }
        }

        let mut incidence = vec![Vec::new(); n];
        let nets: Vec<Net> = net_specs
            .iter()
            .enumerate()
            .map(|(e, (heads, tails, weight))| {
                for &v in heads.iter().chain(tails.iter()) {
                    incidence[v].push(e);
                }
                Net { heads: heads.clone(), tails: tails.clone(), weight: *weight, enabled: true }
            })
            .collect();

        Ok(DirectedHypergraph {
            vertex_weight: vertex_weights.to_vec(),
            vertex_enabled: vec![true; n],
            incidence,
            nets,
            num_enabled_vertices: n,
            memento_counter: 0,
            active_contractions: Vec::new(),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_weight.len()
    }

    pub fn num_nets(&self) -> usize {
        self.nets.len()
    }

    pub fn num_enabled_vertices(&self) -> usize {
        self.num_enabled_vertices
    }

    pub fn is_vertex_enabled(&self, v: usize) -> bool {
        self.vertex_enabled[v]
    }

    pub fn is_net_enabled(&self, e: usize) -> bool {
        self.nets[e].enabled
    }

    pub fn vertex_weight(&self, v: usize) -> f64 {
        self.vertex_weight[v]
    }

    pub fn net_weight(&self, e: usize) -> f64 {
        self.nets[e].weight
    }

    pub fn heads(&self, e: usize) -> &[usize] {
        &self.nets[e].heads
    }

    pub fn tails(&self, e: usize) -> &[usize] {
        &self.nets[e].tails
    }

    pub fn net_size(&self, e: usize) -> usize {
        self.nets[e].size()
    }

    pub fn pins(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.nets[e].heads.iter().chain(self.nets[e].tails.iter()).copied()
    }

    pub fn pin_role(&self, e: usize, v: usize) -> Option<PinRole> {
        self.nets[e].role_of(v)
    }

    /// Nets incident to `v`, including ones currently disabled.
    pub fn incident_nets(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn enabled_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vertices()).filter(move |&v| self.vertex_enabled[v])
    }

    pub fn enabled_nets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_nets()).filter(move |&e| self.nets[e].enabled)
    }

    /// Total weight of the enabled vertices.
    pub fn total_vertex_weight(&self) -> f64 {
        self.enabled_vertices().map(|v| self.vertex_weight[v]).sum()
    }

    /// Successors of `v`: heads of enabled nets in which `v` is a tail.
    /// Sorted, deduplicated.
    pub fn successors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &e in &self.incidence[v] {
            let net = &self.nets[e];
            if net.enabled && net.tails.contains(&v) {
                out.extend_from_slice(&net.heads);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Predecessors of `v`: tails of enabled nets in which `v` is a head.
    /// Sorted, deduplicated.
    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &e in &self.incidence[v] {
            let net = &self.nets[e];
            if net.enabled && net.heads.contains(&v) {
                out.extend_from_slice(&net.tails);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// All co-pins of `v` across enabled nets. Sorted, deduplicated.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &e in &self.incidence[v] {
            let net = &self.nets[e];
            if net.enabled {
                out.extend(net.heads.iter().chain(net.tails.iter()).copied().filter(|&u| u != v));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Contraction mode this hypergraph supports: `SingleHead` when every
    /// enabled net has at most one head.
    pub fn contract_mode(&self) -> ContractMode {
        if self.enabled_nets().all(|e| self.nets[e].heads.len() <= 1) {
            ContractMode::SingleHead
        } else {
            ContractMode::MultiHead
        }
    }

    /// Heavy-edge rating `r(u, v)`: sum of `weight / (size - 1)` over the
    /// enabled nets shared by `u` and `v`. Zero for non-neighbors.
    pub fn heavy_edge_rating(&self, u: usize, v: usize) -> f64 {
        debug_assert!(u != v && self.vertex_enabled[u] && self.vertex_enabled[v]);
        let (small, other) = if self.incidence[u].len() <= self.incidence[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        let mut rating = 0.0;
        for &e in &self.incidence[small] {
            let net = &self.nets[e];
            if net.enabled && net.contains(other) && net.contains(small) {
                rating += net.weight / (net.size() - 1) as f64;
            }
        }
        rating
    }

    /// Whether `contract(u, v, mode)` would pass its role preconditions.
    pub fn can_contract(&self, u: usize, v: usize, mode: ContractMode) -> bool {
        self.check_roles(u, v, mode).is_ok()
    }

    fn check_roles(&self, u: usize, v: usize, mode: ContractMode) -> Result<(), ContractError> {
        for &e in &self.incidence[v] {
            let net = &self.nets[e];
            if !net.enabled || !net.contains(u) || !net.contains(v) {
                continue;
            }
            match mode {
                ContractMode::SingleHead => {
                    if net.heads.len() > 1 {
                        return Err(ContractError::RoleConflict { u, v, net: e });
                    }
                }
                ContractMode::MultiHead => {
                    if net.role_of(u) != net.role_of(v) {
                        return Err(ContractError::RoleConflict { u, v, net: e });
                    }
                }
            }
        }
        Ok(())
    }

    /// Contracts `v` into `u`: `u` absorbs `v`'s weight and pins. Nets
    /// shedding `v` as a duplicate pin lose it; nets reduced below two
    /// pins are disabled. Returns a memento that undoes everything.
    pub fn contract(
        &mut self,
        u: usize,
        v: usize,
        mode: ContractMode,
    ) -> Result<ContractionMemento, ContractError> {
        assert!(u != v, "cannot contract a vertex with itself");
        if !self.vertex_enabled[u] {
            return Err(ContractError::VertexDisabled(u));
        }
        if !self.vertex_enabled[v] {
            return Err(ContractError::VertexDisabled(v));
        }
        self.check_roles(u, v, mode)?;

        let weight_delta = self.vertex_weight[v];
        self.vertex_weight[u] += weight_delta;

        let mut changes = Vec::new();
        let mut disabled_nets = Vec::new();
        let mut incidence_added = 0;
        // Disabled nets are edited too: they keep exactly one live pin, so
        // that partition counters stay meaningful at every level.
        let incident: Vec<usize> = self.incidence[v].clone();
        for e in incident {
            let net = &mut self.nets[e];
            if net.contains(u) {
                // Shared net: drop v; under single-head rules the survivor
                // inherits the head role if either endpoint held it.
                let v_role = net.role_of(v).expect("pin must be present");
                let list = net.role_list(v_role);
                let pos = list.iter().position(|&p| p == v).unwrap();
                list.remove(pos);
                changes.push(PinChange::Removed { net: e, role: v_role, pos });
                if mode == ContractMode::SingleHead
                    && v_role == PinRole::Head
                    && net.role_of(u) == Some(PinRole::Tail)
                {
                    let tail_pos = net.tails.iter().position(|&p| p == u).unwrap();
                    net.tails.remove(tail_pos);
                    net.heads.push(u);
                    changes.push(PinChange::Promoted { net: e, tail_pos });
                }
                if net.enabled && net.size() < 2 {
                    net.enabled = false;
                    disabled_nets.push(e);
                }
            } else {
                // v is the only endpoint: rename the pin to u in place.
                let v_role = net.role_of(v).expect("pin must be present");
                let list = net.role_list(v_role);
                let pos = list.iter().position(|&p| p == v).unwrap();
                list[pos] = u;
                changes.push(PinChange::Replaced { net: e, role: v_role, pos });
                self.incidence[u].push(e);
                incidence_added += 1;
            }
        }

        self.vertex_enabled[v] = false;
        self.num_enabled_vertices -= 1;
        self.memento_counter += 1;
        let id = self.memento_counter;
        self.active_contractions.push(id);

        Ok(ContractionMemento {
            survivor: u,
            removed: v,
            weight_delta,
            changes,
            disabled_nets,
            incidence_added,
            id,
        })
    }

    /// Reverses the most recent unreverted contraction. Mementos must be
    /// replayed in LIFO order.
    pub fn uncontract(&mut self, m: &ContractionMemento) -> Result<(), ContractError> {
        if self.active_contractions.last() != Some(&m.id) {
            return Err(ContractError::OutOfOrderUncontract);
        }
        self.active_contractions.pop();

        for &e in &m.disabled_nets {
            self.nets[e].enabled = true;
        }
        for change in m.changes.iter().rev() {
            match *change {
                PinChange::Replaced { net, role, pos } => {
                    self.nets[net].role_list(role)[pos] = m.removed;
                }
                PinChange::Removed { net, role, pos } => {
                    self.nets[net].role_list(role).insert(pos, m.removed);
                }
                PinChange::Promoted { net, tail_pos } => {
                    let u = self.nets[net].heads.pop().expect("promotion must be undone");
                    debug_assert_eq!(u, m.survivor);
                    self.nets[net].tails.insert(tail_pos, u);
                }
            }
        }
        let keep = self.incidence[m.survivor].len() - m.incidence_added;
        self.incidence[m.survivor].truncate(keep);
        self.vertex_weight[m.survivor] -= m.weight_delta;
        self.vertex_enabled[m.removed] = true;
        self.num_enabled_vertices += 1;
        Ok(())
    }
}
