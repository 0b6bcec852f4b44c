//! Exhaustive ground truth for small vertex counts.
//!
//! `exact_atlas(n)` scans every edge subset of `K_n` as a bitmask over the
//! `n(n-1)/2` vertex pairs in lexicographic order `(0,1), (0,2), ...`,
//! keeps the connected ones and collects their distinct spanning-tree counts.
//! The mask space is split into chunks on the high-order bits; each worker
//! builds a local set and the sets are merged by union, so the result does
//! not depend on worker count or chunk order.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::Count;
use crate::partitions::p_set_size;
use crate::graph::Graph;
use crate::spanning::{det_bareiss_i64, tau};
use crate::witness::witness_family;

/// Largest `n` accepted without `allow_large`.
pub const DEFAULT_MAX_N: usize = 8;
/// Masks are `u64`, so `n(n-1)/2` must stay below 64.
pub const ABSOLUTE_MAX_N: usize = 11;

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("n must be at least 1")]
    ZeroVertices,
    #[error("n = {n} exceeds the cap of {cap}; pass an explicit override")]
    AboveCap { n: usize, cap: usize },
    #[error("n = {0} is beyond what a 64-bit edge mask can hold")]
    Unsupported(usize),
    #[error("n = {n} needs {needed} edge subsets, budget is {budget}")]
    BudgetExceeded { n: usize, needed: u64, budget: u64 },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

pub type ProgressFn = Arc<dyn Fn(u64, u64) + Send + Sync>;

#[derive(Clone)]
pub struct AtlasConfig {
    pub max_n: usize,
    /// Lift `max_n` (still bounded by [`ABSOLUTE_MAX_N`]).
    pub allow_large: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
    /// Refuse to start if the subset count exceeds this.
    pub max_subsets: Option<u64>,
    /// Process chunks from the highest mask range down.
    pub reverse_chunks: bool,
    /// Called with `(masks_done, masks_total)` as chunks finish.
    pub progress: Option<ProgressFn>,
}

impl Default for AtlasConfig {
    fn default() -> Self {
        AtlasConfig {
            max_n: DEFAULT_MAX_N,
            allow_large: false,
            jobs: None,
            max_subsets: None,
            reverse_chunks: false,
            progress: None,
        }
    }
}

impl std::fmt::Debug for AtlasConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AtlasConfig")
            .field("max_n", &self.max_n)
            .field("allow_large", &self.allow_large)
            .field("jobs", &self.jobs)
            .field("max_subsets", &self.max_subsets)
            .field("reverse_chunks", &self.reverse_chunks)
            .finish_non_exhaustive()
    }
}

/// The exact set `A_n` with scan metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasRecord {
    pub n: usize,
    /// Ascending, no duplicates.
    pub values: Vec<Count>,
    pub graphs_scanned: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Serialize, Deserialize)]
struct AtlasFile {
    n: usize,
    size: usize,
    values: Vec<Count>,
    graphs_scanned: u64,
    elapsed_ms: u64,
}

impl AtlasRecord {
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn contains(&self, value: &Count) -> bool {
        self.values.binary_search(value).is_ok()
    }

    pub fn to_json(&self) -> String {
        let file = AtlasFile {
            n: self.n,
            size: self.size(),
            values: self.values.clone(),
            graphs_scanned: self.graphs_scanned,
            elapsed_ms: self.elapsed.as_millis() as u64,
        };
        serde_json::to_string_pretty(&file).expect("atlas serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let file: AtlasFile = serde_json::from_str(text)?;
        let mut values = file.values;
        values.sort();
        values.dedup();
        if values.len() != file.size {
            return Err(serde::de::Error::custom(format!(
                "size {} does not match {} distinct values",
                file.size,
                values.len()
            )));
        }
        Ok(AtlasRecord {
            n: file.n,
            values,
            graphs_scanned: file.graphs_scanned,
            elapsed: Duration::from_millis(file.elapsed_ms),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), AtlasError> {
        fs::write(path, self.to_json() + "\n").map_err(|source| AtlasError::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, AtlasError> {
        let text = fs::read_to_string(path).map_err(|source| AtlasError::Io {
            path: path.to_owned(),
            source,
        })?;
        AtlasRecord::from_json(&text).map_err(|source| AtlasError::Json {
            path: path.to_owned(),
            source,
        })
    }
}

/// Conventional file name for the atlas of `n` inside an atlas directory.
pub fn atlas_file_name(n: usize) -> String {
    format!("atlas_{n}.json")
}

/// Loads `atlas_1.json, atlas_2.json, ...` from `dir` until the first gap.
pub fn load_atlas_dir(dir: &Path) -> Result<Vec<AtlasRecord>, AtlasError> {
    let mut records = Vec::new();
    for n in 1..=ABSOLUTE_MAX_N {
        let path = dir.join(atlas_file_name(n));
        if !path.exists() {
            break;
        }
        records.push(AtlasRecord::load(&path)?);
    }
    Ok(records)
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Vertex pairs in mask bit order.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

struct Scanner {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Scanner {
    fn connected(&self, mask: u64) -> bool {
        let mut adjacency = [0u16; ABSOLUTE_MAX_N];
        let mut bits = mask;
        while bits != 0 {
            let (u, v) = self.pairs[bits.trailing_zeros() as usize];
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
            bits &= bits - 1;
        }
        let all = (1u16 << self.n) - 1;
        let mut reached = 1u16;
        let mut frontier = 1u16;
        while frontier != 0 {
            let mut next = 0u16;
            let mut f = frontier;
            while f != 0 {
                next |= adjacency[f.trailing_zeros() as usize];
                f &= f - 1;
            }
            frontier = next & !reached;
            reached |= next;
        }
        reached == all
    }

    /// Spanning-tree count through the cofactor deleting the last vertex.
    fn tau(&self, mask: u64) -> u64 {
        let order = self.n - 1;
        let mut lap = [0i64; (ABSOLUTE_MAX_N - 1) * (ABSOLUTE_MAX_N - 1)];
        let mut bits = mask;
        while bits != 0 {
            let (u, v) = self.pairs[bits.trailing_zeros() as usize];
            if v < order {
                lap[u * order + u] += 1;
                lap[v * order + v] += 1;
                lap[u * order + v] -= 1;
                lap[v * order + u] -= 1;
            } else {
                lap[u * order + u] += 1;
            }
            bits &= bits - 1;
        }
        match det_bareiss_i64(&mut lap[..order * order], order) {
            Some(det) => u64::try_from(det).expect("Laplacian cofactor is nonnegative"),
            // Only reachable for n >= 10.
            None => tau(&self.graph(mask)).to_u64().expect("n^(n-2) fits in u64 for n <= 11"),
        }
    }

    fn graph(&self, mask: u64) -> Graph {
        let edges = (0..self.pairs.len()).filter(|b| mask >> b & 1 == 1).map(|b| self.pairs[b]);
        Graph::from_pairs(self.n, edges).expect("pairs are valid")
    }

    fn scan(&self, range: std::ops::Range<u64>) -> BTreeSet<u64> {
        let mut values = BTreeSet::new();
        let min_edges = (self.n - 1) as u32;
        for mask in range {
            if mask.count_ones() >= min_edges && self.connected(mask) {
                values.insert(self.tau(mask));
            }
        }
        values
    }
}

/// Exact `A_n` over simple connected graphs on `n` labeled vertices.
pub fn exact_atlas(n: usize, config: &AtlasConfig) -> Result<AtlasRecord, AtlasError> {
    let start = Instant::now();
    if n == 0 {
        return Err(AtlasError::ZeroVertices);
    }
    if n > ABSOLUTE_MAX_N {
        return Err(AtlasError::Unsupported(n));
    }
    if n > config.max_n && !config.allow_large {
        return Err(AtlasError::AboveCap { n, cap: config.max_n });
    }
    let bits = pair_count(n);
    let total: u64 = 1 << bits;
    if let Some(budget) = config.max_subsets {
        if total > budget {
            return Err(AtlasError::BudgetExceeded { n, needed: total, budget });
        }
    }
    if n == 1 {
        return Ok(AtlasRecord {
            n,
            values: vec![Count::one()],
            graphs_scanned: 1,
            elapsed: start.elapsed(),
        });
    }

    let scanner = Scanner { n, pairs: pairs(n) };
    let chunk_bits = bits.min(12);
    let low_bits = bits - chunk_bits;
    let mut chunks: Vec<u64> = (0..1u64 << chunk_bits).collect();
    if config.reverse_chunks {
        chunks.reverse();
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    let pool = builder.build().map_err(|e| AtlasError::Pool(e.to_string()))?;
    let done = AtomicU64::new(0);
    let merged: BTreeSet<u64> = pool.install(|| {
        chunks
            .par_iter()
            .map(|&chunk| {
                let lo = chunk << low_bits;
                let hi = (chunk + 1) << low_bits;
                let local = scanner.scan(lo..hi);
                if let Some(report) = &config.progress {
                    let so_far = done.fetch_add(hi - lo, Ordering::Relaxed) + (hi - lo);
                    report(so_far, total);
                }
                local
            })
            .reduce(BTreeSet::new, |mut a, mut b| {
                if a.len() < b.len() {
                    std::mem::swap(&mut a, &mut b);
                }
                a.extend(b);
                a
            })
    });

    Ok(AtlasRecord {
        n,
        values: merged.into_iter().map(Count::from).collect(),
        graphs_scanned: total,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaStatus {
    Exact,
    /// `alpha` is a lower bound: the value is absent from every atlas below it.
    LowerBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaRecord {
    pub m: Count,
    pub alpha: usize,
    pub status: AlphaStatus,
}

/// Number of leading atlases covering `1..=N` without gaps.
pub fn contiguous_coverage(atlases: &[AtlasRecord]) -> usize {
    let present: BTreeSet<usize> = atlases.iter().map(|a| a.n).collect();
    (1..).take_while(|k| present.contains(k)).count()
}

/// Least `n` with `m` in `A_n`, using atlases for `1..=N`. When `m` is in
/// none of them the result is a lower bound `N + 1`.
pub fn alpha_exact(m: &Count, atlases: &[AtlasRecord]) -> AlphaRecord {
    let covered = contiguous_coverage(atlases);
    for n in 1..=covered {
        let record = atlases.iter().find(|a| a.n == n).expect("covered");
        if record.contains(m) {
            return AlphaRecord {
                m: m.clone(),
                alpha: n,
                status: AlphaStatus::Exact,
            };
        }
    }
    AlphaRecord {
        m: m.clone(),
        alpha: covered + 1,
        status: AlphaStatus::LowerBoundOnly,
    }
}

/// Upper bound on `alpha(m)` for `m > 6`: `(m+6)/3` when `m = 0 mod 3`,
/// `(m+4)/3` when `m = 2 mod 3`, and nothing for `m = 1 mod 3`.
pub fn sedlacek_bound(m: u64) -> Option<u64> {
    if m <= 6 {
        return None;
    }
    match m % 3 {
        0 => Some((m + 6) / 3),
        2 => Some((m + 4) / 3),
        _ => None,
    }
}

/// Upper bound on `alpha(m)` for `m > 25`: `(m+4)/3` when `m = 2 mod 3`,
/// otherwise `(m+9)/4` rounded down (alpha is an integer).
pub fn azarija_skrekovski_bound(m: u64) -> Option<u64> {
    if m <= 25 {
        return None;
    }
    Some(if m % 3 == 2 { (m + 4) / 3 } else { (m + 9) / 4 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundReport {
    pub n: usize,
    pub p_set_size: Count,
    pub atlas_size: usize,
    /// Witness tree counts that are missing from `A_n`; empty when sound.
    pub missing: Vec<Count>,
}

impl LowerBoundReport {
    pub fn holds(&self) -> bool {
        self.missing.is_empty() && Count::from(self.atlas_size as u64) >= self.p_set_size
    }
}

/// Checks `|A_n| >= |P_n|` and that every witness count lies in `A_n`.
pub fn verify_lower_bound(atlas: &AtlasRecord) -> LowerBoundReport {
    let n = atlas.n;
    let missing = if n >= 3 {
        witness_family(n)
            .map(|w| w.tau_value)
            .filter(|t| !atlas.contains(t))
            .collect()
    } else {
        Vec::new()
    };
    LowerBoundReport {
        n,
        p_set_size: p_set_size(n),
        atlas_size: atlas.size(),
        missing,
    }
}
