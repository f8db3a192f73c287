//! Cycle detection over iterated step functions.
//!
//! Two strategies, matched to how the interpreters use them: a bounded set of
//! configuration hashes for exact first-recurrence reporting at desk scale,
//! and Brent's tortoise-and-hare as the constant-memory fallback once the
//! hash set would exceed its cap.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::hash::{BuildHasher, BuildHasherDefault, DefaultHasher, Hash};

/// Fixed-key hasher so runs report identical cycle indices across processes.
pub type StableBuild = BuildHasherDefault<DefaultHasher>;

/// Hash of one configuration under the stable hasher.
pub fn config_hash<T: Hash>(value: &T) -> u64 {
    StableBuild::default().hash_one(value)
}

/// Outcome of feeding one configuration to [`HashWindow::observe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Fresh,
    /// Same hash seen before at the given step; candidate recurrence only,
    /// callers confirm by replay before reporting a cycle.
    Candidate {
        first_seen: u64,
    },
    /// The set hit its cap; callers should degrade to [`brent`].
    CapExceeded,
}

/// Bounded map from configuration hash to the step it was first seen at.
#[derive(Debug)]
pub struct HashWindow {
    seen: HashMap<u64, u64, StableBuild>,
    cap: usize,
}

impl HashWindow {
    pub fn new(cap: usize) -> Self {
        HashWindow {
            seen: HashMap::default(),
            cap,
        }
    }

    pub fn observe(&mut self, hash: u64, step: u64) -> Observation {
        if self.seen.len() >= self.cap {
            return Observation::CapExceeded;
        }
        match self.seen.entry(hash) {
            Entry::Occupied(e) => Observation::Candidate {
                first_seen: *e.get(),
            },
            Entry::Vacant(e) => {
                e.insert(step);
                Observation::Fresh
            }
        }
    }
}

/// Cycle parameters: the step of first entry into the cycle and its length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cycle {
    pub entry: u64,
    pub period: u64,
}

/// Brent's algorithm on a partial step function. `step` returns `None` when
/// the sequence halts instead of cycling, and the search reports `None`.
/// `max_steps` bounds the hare's total travel.
pub fn brent<T, F>(start: T, mut step: F, max_steps: u64) -> Option<Cycle>
where
    T: Clone + PartialEq,
    F: FnMut(&T) -> Option<T>,
{
    let mut power: u64 = 1;
    let mut period: u64 = 1;
    let mut tortoise = start.clone();
    let mut hare = step(&start)?;
    let mut travelled: u64 = 1;
    while tortoise != hare {
        if travelled >= max_steps {
            return None;
        }
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        hare = step(&hare)?;
        travelled += 1;
        period += 1;
    }

    // Find the entry point: advance the hare `period` steps from the start,
    // then move both in lockstep.
    let mut entry: u64 = 0;
    tortoise = start.clone();
    hare = start;
    for _ in 0..period {
        hare = step(&hare)?;
    }
    while tortoise != hare {
        tortoise = step(&tortoise)?;
        hare = step(&hare)?;
        entry += 1;
        if entry > max_steps {
            return None;
        }
    }
    Some(Cycle { entry, period })
}

#[cfg(test)]
mod tests {
    use super::*;

    // x -> (x + 5) % 6 + 3 from -10 enters a cycle of length 3 after 2 steps.
    #[test]
    fn brent_finds_rho_shape() {
        let got = brent(-10i64, |x| Some((x + 5) % 6 + 3), 1000).unwrap();
        assert_eq!(
            got,
            Cycle {
                entry: 2,
                period: 3
            }
        );
    }

    #[test]
    fn brent_reports_none_on_halt() {
        // Strictly decreasing to zero, then halts: no cycle.
        let got = brent(10i64, |x| if *x > 0 { Some(x - 1) } else { None }, 1000);
        assert_eq!(got, None);
    }

    #[test]
    fn hash_window_caps() {
        let mut w = HashWindow::new(2);
        assert_eq!(w.observe(1, 0), Observation::Fresh);
        assert_eq!(w.observe(2, 1), Observation::Fresh);
        assert_eq!(w.observe(3, 2), Observation::CapExceeded);
        assert_eq!(w.observe(1, 3), Observation::CapExceeded);
    }
}
