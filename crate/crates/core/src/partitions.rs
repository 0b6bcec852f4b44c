//! Integer partitions with restricted parts.
//!
//! Three part classes are supported: every positive integer, primes, and odd
//! primes. Counting uses the usual coin-change table over the allowed parts;
//! enumeration walks weakly increasing part sequences in lexicographic order.
//! The cumulative set `P_n` collects the odd-prime partitions of every sum
//! from 3 to `n`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::count::Count;

/// Which integers may appear as parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartClass {
    All,
    Prime,
    OddPrime,
}

impl PartClass {
    /// Allowed parts up to `n`, ascending.
    pub fn parts_up_to(self, n: usize) -> Vec<usize> {
        match self {
            PartClass::All => (1..=n).collect(),
            PartClass::Prime => primes_up_to(n),
            PartClass::OddPrime => primes_up_to(n).into_iter().filter(|&p| p != 2).collect(),
        }
    }

    pub fn admits(self, part: usize) -> bool {
        match self {
            PartClass::All => part >= 1,
            PartClass::Prime => is_prime(part),
            PartClass::OddPrime => part != 2 && is_prime(part),
        }
    }
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            for multiple in (i * i..=n).step_by(i) {
                composite[multiple] = true;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).collect()
}

fn is_prime(k: usize) -> bool {
    k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d))
}

/// A weakly increasing sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
    sum: usize,
}

impl Partition {
    /// Sorts `parts` ascending. Returns `None` if any part is zero.
    pub fn new(mut parts: Vec<usize>) -> Option<Self> {
        if parts.contains(&0) {
            return None;
        }
        parts.sort_unstable();
        let sum = parts.iter().sum();
        Some(Partition { parts, sum })
    }

    pub fn empty() -> Self {
        Partition {
            parts: Vec::new(),
            sum: 0,
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.sum
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn product(&self) -> Count {
        Count::product(self.parts.iter().map(|&p| p as u64))
    }

    pub fn is_in_class(&self, class: PartClass) -> bool {
        self.parts.iter().all(|&p| class.admits(p))
    }
}

/// Parts joined with `+`, e.g. `3+3+5`. The empty partition prints as `0`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Counts `table[m]` of partitions of every `m <= n` into parts of `class`.
pub fn partition_table(n: usize, class: PartClass) -> Vec<BigUint> {
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for part in class.parts_up_to(n) {
        for m in part..=n {
            let (low, high) = table.split_at_mut(m);
            high[0] += &low[m - part];
        }
    }
    table
}

pub fn count_partitions(n: usize, class: PartClass) -> Count {
    Count::from(partition_table(n, class).swap_remove(n))
}

/// Lazily yields every partition of `n` with parts in `class`, in
/// lexicographic order of the ascending part sequences.
pub fn enumerate_partitions(n: usize, class: PartClass) -> PartitionIter {
    PartitionIter::new(n, class.parts_up_to(n))
}

pub struct PartitionIter {
    target: usize,
    allowed: Vec<usize>,
    // Indices into `allowed`, nondecreasing.
    stack: Vec<usize>,
    sum: usize,
    state: IterState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl PartitionIter {
    fn new(target: usize, allowed: Vec<usize>) -> Self {
        PartitionIter {
            target,
            allowed,
            stack: Vec::new(),
            sum: 0,
            state: IterState::Fresh,
        }
    }

    fn push(&mut self, idx: usize) {
        self.stack.push(idx);
        self.sum += self.allowed[idx];
    }

    /// Replaces the top of the stack with the next larger part that fits,
    /// popping levels that are exhausted. Returns false when the whole
    /// search space is used up.
    fn advance(&mut self) -> bool {
        while let Some(idx) = self.stack.pop() {
            self.sum -= self.allowed[idx];
            let next = idx + 1;
            if next < self.allowed.len() && self.sum + self.allowed[next] <= self.target {
                self.push(next);
                return true;
            }
        }
        false
    }

    /// Extends the stack with the smallest admissible parts until the sum
    /// reaches the target or no part fits.
    fn descend(&mut self) -> bool {
        loop {
            if self.sum == self.target {
                return true;
            }
            let from = self.stack.last().copied().unwrap_or(0);
            match self.allowed.get(from) {
                Some(&p) if self.sum + p <= self.target => self.push(from),
                _ => return false,
            }
        }
    }

    fn current(&self) -> Partition {
        let parts: Vec<usize> = self.stack.iter().map(|&i| self.allowed[i]).collect();
        Partition {
            parts,
            sum: self.sum,
        }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
                if self.target == 0 {
                    self.state = IterState::Done;
                    return Some(Partition::empty());
                }
                if self.descend() {
                    return Some(self.current());
                }
            }
            IterState::Running => {}
        }
        loop {
            if !self.advance() {
                self.state = IterState::Done;
                return None;
            }
            if self.descend() {
                return Some(self.current());
            }
        }
    }
}

/// `|P_n|`: odd-prime partitions with sum in `3..=n`. The empty partition
/// is not a member.
pub fn p_set_size(n: usize) -> Count {
    let table = partition_table(n, PartClass::OddPrime);
    Count::from(table.into_iter().skip(3).sum::<BigUint>())
}

/// `|P_m|` for every `m <= n`.
pub fn p_set_sizes(n: usize) -> Vec<BigUint> {
    let table = partition_table(n, PartClass::OddPrime);
    let mut running = BigUint::zero();
    table
        .into_iter()
        .enumerate()
        .map(|(m, c)| {
            if m >= 3 {
                running += c;
            }
            running.clone()
        })
        .collect()
}

/// Members of `P_n`, grouped by ascending sum and lexicographic within a sum.
pub fn p_set_enumerate(n: usize) -> impl Iterator<Item = Partition> {
    (3..=n).flat_map(|s| enumerate_partitions(s, PartClass::OddPrime))
}
