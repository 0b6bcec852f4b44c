//! Graphs realizing odd-prime products as spanning-tree counts.
//!
//! A partition `<x_1, ..., x_k>` of `s` into parts `>= 3` becomes the flower
//! `C_{x_1,...,x_k}` (cycles glued at vertex 0), and a path on `n - s + k`
//! vertices hangs off that shared vertex so the result has exactly `n`
//! vertices. The cycles and the path edges are the blocks, so the tree count
//! is the product of the parts. For odd-prime parts unique factorization
//! makes those products pairwise distinct across `P_n`.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::Count;
use crate::graph::{cycle, path, Graph, VertexId};
use crate::partitions::{p_set_enumerate, PartClass, Partition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("flower parts must all be at least 3, got {0}")]
    PartTooSmall(usize),
    #[error("a flower needs at least one cycle")]
    NoParts,
    #[error("witness parts must be odd primes, got {0}")]
    NotOddPrime(usize),
    #[error("attachment vertex {0} is not in the flower")]
    AttachOutOfRange(usize),
    #[error("partition sum {sum} exceeds target vertex count {n}")]
    SumExceedsTarget { sum: usize, n: usize },
}

/// The vertex shared by every petal of a flower built by [`flower`].
pub const FLOWER_CENTER: VertexId = VertexId(0);

/// One-point union of the cycles `C_{x_i}` at vertex 0.
pub fn flower(parts: &Partition) -> Result<Graph, WitnessError> {
    if parts.is_empty() {
        return Err(WitnessError::NoParts);
    }
    if let Some(&bad) = parts.parts().iter().find(|&&p| p < 3) {
        return Err(WitnessError::PartTooSmall(bad));
    }
    let mut petals = parts.parts().iter().map(|&p| cycle(p).expect("part >= 3"));
    let first = petals.next().expect("nonempty");
    Ok(petals.fold(first, |acc, petal| {
        acc.identify(FLOWER_CENTER, &petal, VertexId(0))
            .expect("vertex 0 exists in both")
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub partition: Partition,
    pub graph: Graph,
    /// Product of the parts.
    pub tau_value: Count,
    pub n: usize,
}

/// Attaches `P_{n-s+k}` by an endpoint to the flower vertex `attach`.
pub fn build_witness_at(p: &Partition, n: usize, attach: VertexId) -> Result<Witness, WitnessError> {
    if let Some(&bad) = p.parts().iter().find(|&&x| !PartClass::OddPrime.admits(x)) {
        return Err(WitnessError::NotOddPrime(bad));
    }
    if p.sum() > n {
        return Err(WitnessError::SumExceedsTarget { sum: p.sum(), n });
    }
    let petals = flower(p)?;
    let tail = path(n - p.sum() + p.len()).expect("length >= k >= 1");
    let graph = petals
        .identify(attach, &tail, VertexId(0))
        .map_err(|_| WitnessError::AttachOutOfRange(attach.0))?;
    debug_assert_eq!(graph.n_vertices(), n);
    Ok(Witness {
        partition: p.clone(),
        graph,
        tau_value: p.product(),
        n,
    })
}

/// Witness with the path hung off the flower's shared vertex.
pub fn build_witness(p: &Partition, n: usize) -> Result<Witness, WitnessError> {
    build_witness_at(p, n, FLOWER_CENTER)
}

/// One witness per member of `P_n`, in `P_n` enumeration order.
pub fn witness_family(n: usize) -> impl Iterator<Item = Witness> {
    p_set_enumerate(n).map(move |p| build_witness(&p, n).expect("P_n members are valid witness inputs"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctReport {
    pub distinct: bool,
    /// Indices of the first colliding pair, in input order.
    pub collision: Option<(usize, usize)>,
}

pub fn certify_distinct<'a, I>(witnesses: I) -> DistinctReport
where
    I: IntoIterator<Item = &'a Witness>,
{
    let mut seen: HashMap<&Count, usize> = HashMap::new();
    for (i, w) in witnesses.into_iter().enumerate() {
        if let Some(&j) = seen.get(&w.tau_value) {
            return DistinctReport {
                distinct: false,
                collision: Some((j, i)),
            };
        }
        seen.insert(&w.tau_value, i);
    }
    DistinctReport {
        distinct: true,
        collision: None,
    }
}

/// JSON sidecar written next to each witness edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSidecar {
    pub n: usize,
    pub parts: Vec<usize>,
    pub tau: Count,
}

impl Witness {
    pub fn sidecar(&self) -> WitnessSidecar {
        WitnessSidecar {
            n: self.n,
            parts: self.partition.parts().to_vec(),
            tau: self.tau_value.clone(),
        }
    }

    /// Writes `witness_<n>_<index>.edges` and `witness_<n>_<index>.json`
    /// into `dir` and returns both paths.
    pub fn write_to(&self, dir: &Path, index: usize) -> io::Result<(PathBuf, PathBuf)> {
        let stem = format!("witness_{}_{}", self.n, index);
        let edges = dir.join(format!("{stem}.edges"));
        let sidecar = dir.join(format!("{stem}.json"));
        fs::write(&edges, self.graph.to_string())?;
        let json = serde_json::to_string_pretty(&self.sidecar()).map_err(io::Error::other)?;
        fs::write(&sidecar, json + "\n")?;
        Ok((edges, sidecar))
    }
}
