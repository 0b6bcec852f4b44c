//! Spanning-tree counting through the Matrix-Tree theorem.
//!
//! `tau` takes a principal cofactor of the graph Laplacian and evaluates it
//! with fraction-free (Bareiss) elimination. Every intermediate value of that
//! elimination is itself a minor of the input, so the computation stays in
//! the integers. A checked `i64` pass handles the common case and the
//! arbitrary-precision pass takes over on overflow.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::count::Count;
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpanningError {
    #[error("brute force needs {needed} edge subsets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    order: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(order: usize) -> Self {
        IntMatrix {
            order,
            entries: vec![BigInt::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = IntMatrix::zeros(order);
        for i in 0..order {
            m.entries[i * order + i] = BigInt::one();
        }
        m
    }

    /// Panics if `rows` is not square.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for row in rows {
            assert_eq!(row.len(), order, "matrix must be square");
            entries.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.order + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[row * self.order + col] = value;
    }

    /// The matrix with row and column `index` removed.
    pub fn principal_minor(&self, index: usize) -> IntMatrix {
        assert!(index < self.order);
        let order = self.order - 1;
        let mut entries = Vec::with_capacity(order * order);
        for r in (0..self.order).filter(|&r| r != index) {
            for c in (0..self.order).filter(|&c| c != index) {
                entries.push(self.get(r, c).clone());
            }
        }
        IntMatrix { order, entries }
    }

    fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(ToPrimitive::to_i64).collect()
    }
}

/// Kirchhoff Laplacian `D - A`, multiplicities included.
pub fn laplacian(g: &Graph) -> IntMatrix {
    let mut m = IntMatrix::zeros(g.n_vertices());
    let n = g.n_vertices();
    for (e, mult) in g.edges() {
        let (u, v) = e.endpoints();
        let mult = BigInt::from(mult);
        m.entries[u * n + u] += &mult;
        m.entries[v * n + v] += &mult;
        m.entries[u * n + v] -= &mult;
        m.entries[v * n + u] -= &mult;
    }
    m
}

/// Fraction-free determinant over `i64` with overflow checks.
///
/// `entries` is a row-major `order x order` matrix and is overwritten.
/// Returns `None` only if an intermediate product leaves the `i64` range.
pub fn det_bareiss_i64(entries: &mut [i64], order: usize) -> Option<i64> {
    debug_assert_eq!(entries.len(), order * order);
    if order == 0 {
        return Some(1);
    }
    let mut negate = false;
    let mut prev = 1i64;
    for k in 0..order - 1 {
        if entries[k * order + k] == 0 {
            match (k + 1..order).find(|&r| entries[r * order + k] != 0) {
                Some(swap) => {
                    for c in 0..order {
                        entries.swap(k * order + c, swap * order + c);
                    }
                    negate = !negate;
                }
                None => return Some(0),
            }
        }
        let pivot = entries[k * order + k];
        for i in k + 1..order {
            let lead = entries[i * order + k];
            for j in k + 1..order {
                let a = entries[i * order + j].checked_mul(pivot)?;
                let b = lead.checked_mul(entries[k * order + j])?;
                entries[i * order + j] = a.checked_sub(b)? / prev;
            }
        }
        prev = pivot;
    }
    let det = entries[order * order - 1];
    Some(if negate { -det } else { det })
}

fn det_bareiss_big(m: &IntMatrix) -> BigInt {
    let order = m.order;
    if order == 0 {
        return BigInt::one();
    }
    let mut a = m.entries.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..order - 1 {
        if a[k * order + k].is_zero() {
            match (k + 1..order).find(|&r| !a[r * order + k].is_zero()) {
                Some(swap) => {
                    for c in 0..order {
                        a.swap(k * order + c, swap * order + c);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * order + k].clone();
        for i in k + 1..order {
            let lead = a[i * order + k].clone();
            for j in k + 1..order {
                let num = &a[i * order + j] * &pivot - &lead * &a[k * order + j];
                a[i * order + j] = num / &prev;
            }
        }
        prev = pivot;
    }
    let det = a[order * order - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact determinant by fraction-free elimination. The 0x0 determinant is 1.
pub fn det_fraction_free(m: &IntMatrix) -> BigInt {
    if let Some(mut small) = m.to_i64() {
        if let Some(det) = det_bareiss_i64(&mut small, m.order) {
            return BigInt::from(det);
        }
    }
    det_bareiss_big(m)
}

/// Same as [`det_fraction_free`] but never takes the `i64` shortcut.
pub fn det_fraction_free_bigint(m: &IntMatrix) -> BigInt {
    det_bareiss_big(m)
}

fn to_count(det: BigInt) -> Count {
    // A Laplacian cofactor is never negative.
    debug_assert!(!det.is_negative());
    let (sign, mag) = det.into_parts();
    if sign == Sign::Minus {
        Count::zero()
    } else {
        Count::from(mag)
    }
}

/// Number of spanning trees of `g`. By convention the 0-vertex graph has
/// none and the 1-vertex graph has one.
pub fn tau(g: &Graph) -> Count {
    match g.n_vertices() {
        0 => Count::zero(),
        1 => Count::one(),
        n => tau_deleting(g, n - 1),
    }
}

/// `tau` via the cofactor that removes row and column `index`.
pub fn tau_deleting(g: &Graph, index: usize) -> Count {
    let n = g.n_vertices();
    if n == 0 {
        return Count::zero();
    }
    assert!(index < n, "cofactor index out of range");
    let order = n - 1;
    let reduced = |x: usize| if x < index { Some(x) } else if x > index { Some(x - 1) } else { None };

    // Degrees are bounded by the edge count, so the i64 Laplacian only fails
    // to build for absurd multiplicities.
    let mut small = vec![0i64; order * order];
    let mut fits = true;
    for (e, mult) in g.edges() {
        let (u, v) = e.endpoints();
        let m = i64::from(mult);
        for (x, y) in [(u, v), (v, u)] {
            if let Some(rx) = reduced(x) {
                let diag = &mut small[rx * order + rx];
                match diag.checked_add(m) {
                    Some(d) => *diag = d,
                    None => fits = false,
                }
                if let Some(ry) = reduced(y) {
                    small[rx * order + ry] -= m;
                }
            }
        }
    }
    if fits {
        if let Some(det) = det_bareiss_i64(&mut small, order) {
            return Count::from(BigUint::from(det.max(0) as u64));
        }
    }
    to_count(det_bareiss_big(&laplacian(g).principal_minor(index)))
}

/// Default limit on the number of edge subsets `tau_bruteforce` will scan.
pub const DEFAULT_BRUTEFORCE_BUDGET: u128 = 50_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Counts spanning trees by checking every `(n-1)`-subset of edges, with
/// parallel copies treated as distinct edges. Independent of the Laplacian
/// route and only meant as an oracle for small graphs.
pub fn tau_bruteforce(g: &Graph, budget: u128) -> Result<Count, SpanningError> {
    let n = g.n_vertices();
    match n {
        0 => return Ok(Count::zero()),
        1 => return Ok(Count::one()),
        _ => {}
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .flat_map(|(e, m)| std::iter::repeat_n(e.endpoints(), m as usize))
        .collect();
    let k = n - 1;
    let needed = binomial(edges.len() as u128, k as u128);
    if needed > budget {
        return Err(SpanningError::BudgetExceeded { needed, budget });
    }
    if edges.len() < k {
        return Ok(Count::zero());
    }

    let mut chosen: Vec<usize> = (0..k).collect();
    let mut trees: u64 = 0;
    let mut parent = vec![0usize; n];
    loop {
        if is_forest(&edges, &chosen, &mut parent) {
            trees += 1;
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(Count::from(trees));
            }
            i -= 1;
            if chosen[i] < edges.len() - k + i {
                break;
            }
        }
        chosen[i] += 1;
        for j in i + 1..k {
            chosen[j] = chosen[j - 1] + 1;
        }
    }
}

/// `n - 1` acyclic edges on `n` vertices form a spanning tree.
fn is_forest(edges: &[(usize, usize)], chosen: &[usize], parent: &mut [usize]) -> bool {
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i;
    }
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &idx in chosen {
        let (u, v) = edges[idx];
        let (ru, rv) = (root(parent, u), root(parent, v));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
    }
    true
}
