//! Greedy aggregation on the filtered graph, the piecewise-constant
//! tentative prolongator, and transfer of auxiliary data to the coarse level.

use std::io::Write;

use crate::error::{AmgError, Result};
use crate::fem::MaterialTensor;
use crate::filter::DropMask;
use crate::soc::{AuxiliaryData, SocMatrix};
use crate::sparse::CsrMatrix;

/// Symmetric adjacency of kept off-diagonal connections with their
/// strengths.
#[derive(Debug, Clone)]
pub struct FilteredGraph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
}

impl FilteredGraph {
    pub fn from_mask(s: &SocMatrix, mask: &DropMask) -> Result<Self> {
        if !mask.matches(&s.matrix) {
            return Err(AmgError::PatternMismatch);
        }
        let m = &s.matrix;
        let keep = mask.keep();
        let mut offsets = Vec::with_capacity(m.n_rows() + 1);
        let mut neighbors = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for i in 0..m.n_rows() {
            for k in m.row_range(i) {
                let j = m.col_indices()[k];
                if j != i && keep[k] {
                    neighbors.push(j);
                    weights.push(m.values()[k]);
                }
            }
            offsets.push(neighbors.len());
        }
        Ok(Self { offsets, neighbors, weights })
    }

    /// Graph from an explicit undirected edge list with unit weights.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut offsets = vec![0];
        let mut neighbors = Vec::new();
        for mut list in adj {
            list.sort_unstable();
            list.dedup();
            neighbors.extend(list);
            offsets.push(neighbors.len());
        }
        let weights = vec![1.0; neighbors.len()];
        Self { offsets, neighbors, weights }
    }

    pub fn n_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.neighbors[r.clone()], &self.weights[r])
    }
}

/// Disjoint covering of the non-excluded nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    /// Aggregate of each node; `None` for excluded (Dirichlet) nodes.
    pub node_to_aggregate: Vec<Option<usize>>,
    pub n_aggregates: usize,
    /// Seed node of every aggregate.
    pub roots: Vec<usize>,
}

impl Aggregation {
    pub fn n_nodes(&self) -> usize {
        self.node_to_aggregate.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.n_aggregates];
        for a in self.node_to_aggregate.iter().flatten() {
            s[*a] += 1;
        }
        s
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.n_aggregates];
        for (i, a) in self.node_to_aggregate.iter().enumerate() {
            if let Some(a) = a {
                m[*a].push(i);
            }
        }
        m
    }

    /// Every aggregate is a singleton.
    pub fn is_trivial(&self) -> bool {
        self.n_aggregates == self.node_to_aggregate.iter().flatten().count()
    }

    /// `level,node_id,x,y,z,aggregate_id`; excluded nodes carry id -1.
    pub fn write_csv<W: Write>(&self, level: usize, coords: &[[f64; 3]], mut w: W) -> Result<()> {
        writeln!(w, "level,node_id,x,y,z,aggregate_id")?;
        for (i, a) in self.node_to_aggregate.iter().enumerate() {
            let x = coords[i];
            let id = a.map_or(-1, |a| a as i64);
            writeln!(w, "{level},{i},{},{},{},{id}", x[0], x[1], x[2])?;
        }
        Ok(())
    }
}

/// Three-phase greedy aggregation.
///
/// 1. Scanning nodes in ascending order, a node none of whose neighbours is
///    aggregated becomes a root and forms an aggregate with all neighbours.
/// 2. Each leftover node joins the phase-1 aggregate it is most strongly
///    connected to (sum of strengths; ties go to the lower aggregate index).
/// 3. Whatever is left becomes a singleton.
///
/// Nodes flagged in `excluded` never join an aggregate.
pub fn aggregate(graph: &FilteredGraph, excluded: &[bool]) -> Result<Aggregation> {
    let n = graph.n_nodes();
    if excluded.len() != n {
        return Err(AmgError::DimensionMismatch { expected: n, actual: excluded.len() });
    }
    let mut agg: Vec<Option<usize>> = vec![None; n];
    let mut roots = Vec::new();

    for i in 0..n {
        if excluded[i] || agg[i].is_some() {
            continue;
        }
        let (nbrs, _) = graph.neighbors(i);
        if nbrs.iter().any(|&j| agg[j].is_some()) {
            continue;
        }
        let id = roots.len();
        roots.push(i);
        agg[i] = Some(id);
        for &j in nbrs {
            if !excluded[j] {
                agg[j] = Some(id);
            }
        }
    }

    let phase1 = agg.clone();
    let mut scores: Vec<(usize, f64)> = Vec::new();
    for i in 0..n {
        if excluded[i] || agg[i].is_some() {
            continue;
        }
        scores.clear();
        let (nbrs, w) = graph.neighbors(i);
        for (&j, &s) in nbrs.iter().zip(w) {
            if let Some(a) = phase1[j] {
                match scores.iter_mut().find(|e| e.0 == a) {
                    Some(e) => e.1 += s,
                    None => scores.push((a, s)),
                }
            }
        }
        let best = scores
            .iter()
            .copied()
            .reduce(|best, c| if c.1 > best.1 || (c.1 == best.1 && c.0 < best.0) { c } else { best });
        if let Some((a, _)) = best {
            agg[i] = Some(a);
        }
    }

    for i in 0..n {
        if !excluded[i] && agg[i].is_none() {
            agg[i] = Some(roots.len());
            roots.push(i);
        }
    }

    Ok(Aggregation { node_to_aggregate: agg, n_aggregates: roots.len(), roots })
}

/// `n_fine x n_aggregates` matrix with a single unit entry per aggregated
/// row; excluded rows are empty.
pub fn tentative_prolongator(agg: &Aggregation, n_fine: usize) -> Result<CsrMatrix> {
    if agg.n_nodes() != n_fine {
        return Err(AmgError::DimensionMismatch { expected: n_fine, actual: agg.n_nodes() });
    }
    let rows = agg
        .node_to_aggregate
        .iter()
        .map(|a| a.map(|a| vec![(a, 1.0)]).unwrap_or_default())
        .collect();
    Ok(CsrMatrix::from_sorted_rows(n_fine, agg.n_aggregates, rows))
}

/// Per-aggregate mean coordinate and mean tensor.
pub fn coarsen_auxiliary(agg: &Aggregation, aux: &AuxiliaryData) -> Result<AuxiliaryData> {
    if aux.len() != agg.n_nodes() || aux.materials.len() != agg.n_nodes() {
        return Err(AmgError::DimensionMismatch { expected: agg.n_nodes(), actual: aux.len() });
    }
    let members = agg.members();
    let coords = members
        .iter()
        .map(|m| {
            let mut c = [0.0; 3];
            for &i in m {
                for (ck, xk) in c.iter_mut().zip(aux.coords[i]) {
                    *ck += xk;
                }
            }
            c.map(|v| v / m.len() as f64)
        })
        .collect();
    let materials = members
        .iter()
        .map(|m| MaterialTensor::mean(m.iter().map(|&i| &aux.materials[i])).expect("aggregates are non-empty"))
        .collect();
    Ok(AuxiliaryData { coords, materials })
}
