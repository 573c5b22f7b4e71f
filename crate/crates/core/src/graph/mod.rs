//! Graph states decorated with local Clifford side effects.
//!
//! A [`GraphState`] stands for `(⊗_v C_v) Π_{(u,w)∈E} CZ_{uw} |+⟩^V`. The
//! rewrite rules keep that physical state fixed (local complementation) or
//! track it through Pauli measurements (`measure_z`, `fuse_xx`). Vertex ids
//! double as qubit indices in [`GraphState::to_circuit`].

mod clifford;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

pub use clifford::{group as local_clifford_group, LocalGate, SideEffect};

use crate::stab::{Gate, StabError, Tableau};
use crate::Sign;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("vertex {0} already exists or was removed earlier")]
    VertexReused(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("no edge between {0} and {1}")]
    MissingEdge(usize, usize),
    #[error("vertex {vertex} carries side effect {tag}, which does not commute with the measurement")]
    IncompatibleSideEffect { vertex: usize, tag: SideEffect },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphState {
    adj: BTreeMap<usize, BTreeSet<usize>>,
    tags: BTreeMap<usize, SideEffect>,
    removed: BTreeSet<usize>,
}

impl GraphState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Vertices `0..n`, no edges, all tags `I`.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n {
            g.add_vertex(v).expect("fresh ids");
        }
        g
    }

    pub fn from_edges(vertices: impl IntoIterator<Item = usize>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for &(u, w) in edges {
            g.add_edge(u, w)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: usize) -> Result<(), GraphError> {
        if self.adj.contains_key(&v) || self.removed.contains(&v) {
            return Err(GraphError::VertexReused(v));
        }
        self.adj.insert(v, BTreeSet::new());
        self.tags.insert(v, SideEffect::I);
        Ok(())
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if self.adj.contains_key(&v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    fn check_pair(&self, u: usize, w: usize) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(w)?;
        if u == w {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    /// Edges as `(u, w)` with `u < w`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj.iter().flat_map(|(&u, n)| n.range(u + 1..).map(move |&w| (u, w))).collect()
    }

    pub fn neighbors(&self, v: usize) -> Result<&BTreeSet<usize>, GraphError> {
        self.adj.get(&v).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&w))
    }

    pub fn add_edge(&mut self, u: usize, w: usize) -> Result<(), GraphError> {
        self.check_pair(u, w)?;
        self.adj.get_mut(&u).unwrap().insert(w);
        self.adj.get_mut(&w).unwrap().insert(u);
        Ok(())
    }

    /// Toggle the edge `{u, w}`. On the graph level this is a CZ gate.
    pub fn toggle_edge(&mut self, u: usize, w: usize) -> Result<(), GraphError> {
        self.check_pair(u, w)?;
        self.toggle_unchecked(u, w);
        Ok(())
    }

    fn toggle_unchecked(&mut self, u: usize, w: usize) {
        let nu = self.adj.get_mut(&u).unwrap();
        if !nu.remove(&w) {
            nu.insert(w);
            self.adj.get_mut(&w).unwrap().insert(u);
        } else {
            self.adj.get_mut(&w).unwrap().remove(&u);
        }
    }

    pub fn side_effect(&self, v: usize) -> Result<SideEffect, GraphError> {
        self.tags.get(&v).copied().ok_or(GraphError::UnknownVertex(v))
    }

    pub fn side_effects(&self) -> &BTreeMap<usize, SideEffect> {
        &self.tags
    }

    pub fn set_side_effect(&mut self, v: usize, tag: SideEffect) -> Result<(), GraphError> {
        self.check(v)?;
        self.tags.insert(v, tag);
        Ok(())
    }

    /// Apply a physical gate after the current tag: `C_v <- U C_v`.
    pub fn apply_local(&mut self, v: usize, u: SideEffect) -> Result<(), GraphError> {
        self.check(v)?;
        let t = self.tags.get_mut(&v).unwrap();
        *t = t.then(u);
        Ok(())
    }

    /// Graph-level `Z` on `v`: `C_v <- C_v Z`. For `I`/`Z` tags this is a toggle.
    pub fn toggle_z(&mut self, v: usize) -> Result<(), GraphError> {
        self.check(v)?;
        let t = self.tags.get_mut(&v).unwrap();
        *t = SideEffect::Z.then(*t);
        Ok(())
    }

    fn remove_vertex(&mut self, v: usize) {
        if let Some(n) = self.adj.remove(&v) {
            for w in n {
                self.adj.get_mut(&w).unwrap().remove(&v);
            }
        }
        self.tags.remove(&v);
        self.removed.insert(v);
    }

    /// Complement the edges within `N(v)` and compensate with local Cliffords
    /// so the physical state is unchanged.
    pub fn local_complement(&mut self, v: usize) -> Result<(), GraphError> {
        let n: Vec<usize> = self.neighbors(v)?.iter().copied().collect();
        for (i, &a) in n.iter().enumerate() {
            for &b in &n[i + 1..] {
                self.toggle_unchecked(a, b);
            }
        }
        // |G> = exp(+i pi/4 X_v) prod_u exp(-i pi/4 Z_u) |tau_v G>, up to phase.
        self.tags.entry(v).and_modify(|t| *t = SideEffect::SQRT_X.then(*t));
        for u in n {
            self.tags.entry(u).and_modify(|t| *t = SideEffect::SDG.then(*t));
        }
        Ok(())
    }

    /// Physical Z measurement of `v` with the given outcome. `v`'s tag must map
    /// `Z` to `±Z`; its sign is folded into the outcome.
    pub fn measure_z(&mut self, v: usize, outcome: Sign) -> Result<(), GraphError> {
        let tag = self.side_effect(v)?;
        let fold = tag.z_sign().ok_or(GraphError::IncompatibleSideEffect { vertex: v, tag })?;
        let n: Vec<usize> = self.adj[&v].iter().copied().collect();
        self.remove_vertex(v);
        if (outcome * fold).is_minus() {
            for u in n {
                self.toggle_z(u).unwrap();
            }
        }
        Ok(())
    }

    /// Graph-level sign of a physical X outcome on `v`, when `v`'s tag maps `X`
    /// to `±X`.
    pub fn fold_x(&self, v: usize, physical: Sign) -> Result<Sign, GraphError> {
        let tag = self.side_effect(v)?;
        let s = tag.x_sign().ok_or(GraphError::IncompatibleSideEffect { vertex: v, tag })?;
        Ok(physical * s)
    }

    /// X measurements on both ends of the edge `(a, b)`, outcomes given on the
    /// graph level (tags of `a` and `b` already folded in).
    pub fn fuse_xx(&mut self, a: usize, b: usize, outcome_a: Sign, outcome_b: Sign) -> Result<(), GraphError> {
        self.check_pair(a, b)?;
        if !self.has_edge(a, b) {
            return Err(GraphError::MissingEdge(a, b));
        }
        for v in [a, b] {
            let tag = self.tags[&v];
            if tag.x_sign().is_none() {
                return Err(GraphError::IncompatibleSideEffect { vertex: v, tag });
            }
        }
        let na: Vec<usize> = self.adj[&a].iter().copied().filter(|&u| u != b).collect();
        let nb: Vec<usize> = self.adj[&b].iter().copied().filter(|&u| u != a).collect();
        self.remove_vertex(a);
        self.remove_vertex(b);
        // Projecting onto X_a = s_a, X_b = s_b leaves
        //   (1 + s_a Z_Na + s_b Z_Nb - s_a s_b Z_Na Z_Nb) |G - a - b>,
        // a phase (-1)^{(p_a + c_a)(p_b + c_b)} over neighborhood parities.
        for &u in &na {
            for &w in &nb {
                if u != w {
                    self.toggle_unchecked(u, w);
                } else {
                    self.toggle_z(u).unwrap();
                }
            }
        }
        if outcome_b.is_minus() {
            for &u in &na {
                self.toggle_z(u).unwrap();
            }
        }
        if outcome_a.is_minus() {
            for &w in &nb {
                self.toggle_z(w).unwrap();
            }
        }
        Ok(())
    }

    /// Bell measurement in graph terms: CZ between `a` and `b`, then `fuse_xx`.
    pub fn bsm(&mut self, a: usize, b: usize, outcome_a: Sign, outcome_b: Sign) -> Result<(), GraphError> {
        self.toggle_edge(a, b)?;
        if !self.has_edge(a, b) {
            // The CZ removed an existing edge; undo and report.
            self.toggle_unchecked(a, b);
            return Err(GraphError::MissingEdge(a, b));
        }
        self.fuse_xx(a, b, outcome_a, outcome_b)
    }

    /// Gates preparing this state from `|0…0⟩` with vertex ids as qubit indices.
    pub fn to_circuit(&self) -> Vec<Gate> {
        let mut gates: Vec<Gate> = self.vertices().map(Gate::H).collect();
        gates.extend(self.edges().into_iter().map(|(u, w)| Gate::Cz(u, w)));
        for (&v, tag) in &self.tags {
            gates.extend(tag.gates().iter().map(|g| g.on(v)));
        }
        gates
    }

    /// Fresh tableau of `width` qubits prepared by [`to_circuit`](Self::to_circuit).
    pub fn to_tableau(&self, width: usize) -> Result<Tableau, StabError> {
        let mut t = Tableau::new(width)?;
        t.apply_all(self.to_circuit())?;
        Ok(t)
    }

    /// Graphviz rendering with side effects as labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for (&v, tag) in &self.tags {
            let _ = writeln!(s, "  {v} [label=\"{v}:{tag}\"];");
        }
        for (u, w) in self.edges() {
            let _ = writeln!(s, "  {u} -- {w};");
        }
        s.push_str("}\n");
        s
    }
}
