//! Streaming enumeration of set partitions into exactly `k` blocks, encoded
//! as restricted growth strings.
//!
//! A restricted growth string `a` of length `N` has `a[0] = 0` and
//! `a[i] <= 1 + max(a[..i])`; strings whose maximum is `k - 1` correspond
//! one-to-one with partitions of `N` items into `k` unordered nonempty
//! blocks. The stream visits them in lexicographic order and never
//! materializes more than one at a time.

use crate::error::{Error, Result};

/// Iterator state over all partitions of `item_count` items into exactly
/// `block_count` nonempty unordered blocks.
pub struct OrbitPartitionStream {
    assignment: Vec<u8>,
    prefix_max: Vec<u8>,
    k: u8,
    state: State,
}

#[derive(PartialEq)]
enum State {
    Fresh,
    Running,
    Done,
}

impl OrbitPartitionStream {
    pub fn new(item_count: usize, block_count: usize) -> Result<Self> {
        if block_count == 0 || block_count > item_count {
            return Err(Error::BlockCountOutOfRange {
                k: block_count,
                max: item_count,
            });
        }
        debug_assert!(item_count < 256);
        let n = item_count;
        let k = block_count as u8;
        // lexicographically least string reaching block k-1: zeros, then a ramp
        let mut assignment = vec![0u8; n];
        for (i, slot) in assignment.iter_mut().enumerate() {
            let needed = (k as isize - 1) - (n as isize - 1 - i as isize);
            if needed > 0 {
                *slot = needed as u8;
            }
        }
        let mut stream = OrbitPartitionStream {
            assignment,
            prefix_max: vec![0u8; n],
            k,
            state: State::Fresh,
        };
        stream.recompute_prefix_max(0);
        stream
            .assignment
            .iter()
            .zip(&stream.prefix_max)
            .for_each(|(&a, &b)| debug_assert!(a <= b + 1));
        Ok(stream)
    }

    fn recompute_prefix_max(&mut self, from: usize) {
        let n = self.assignment.len();
        let mut running = if from == 0 {
            0
        } else {
            self.prefix_max[from - 1].max(self.assignment[from - 1])
        };
        for i in from..n {
            self.prefix_max[i] = running;
            running = running.max(self.assignment[i]);
        }
    }

    /// Advances to the next partition and returns its block assignment, or
    /// `None` when exhausted. `out[i]` is the block index of item `i`.
    pub fn next_assignment(&mut self) -> Option<&[u8]> {
        match self.state {
            State::Done => return None,
            State::Fresh => {
                self.state = State::Running;
                return Some(&self.assignment);
            }
            State::Running => {}
        }
        let n = self.assignment.len();
        let target = self.k - 1;
        // rightmost position that can be incremented while a max of k-1
        // remains reachable in the suffix
        let mut pos = None;
        for j in (1..n).rev() {
            let a = self.assignment[j];
            if a >= target || a > self.prefix_max[j] {
                continue;
            }
            let new_max = self.prefix_max[j].max(a + 1);
            if new_max as usize + (n - 1 - j) >= target as usize {
                pos = Some(j);
                break;
            }
        }
        let Some(j) = pos else {
            self.state = State::Done;
            return None;
        };
        self.assignment[j] += 1;
        // minimal suffix: zeros, then just enough of a climb to reach k-1
        let reached = self.prefix_max[j].max(self.assignment[j]);
        let climb_start = n - (target - reached) as usize;
        for i in j + 1..n {
            self.assignment[i] = if i >= climb_start {
                reached + 1 + (i - climb_start) as u8
            } else {
                0
            };
        }
        self.recompute_prefix_max(j);
        Some(&self.assignment)
    }

    /// Number of items being partitioned.
    pub fn item_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn block_count(&self) -> usize {
        self.k as usize
    }

    /// Consumes the remainder of the stream, counting partitions.
    pub fn count_remaining(mut self) -> u64 {
        let mut count = 0;
        while self.next_assignment().is_some() {
            count += 1;
        }
        count
    }
}
