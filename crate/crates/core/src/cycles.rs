//! Return times and the cycles between them.

use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::dynamics::Trajectory;
use crate::lattice::Site;

/// The stretch of a trajectory between two consecutive returns to its base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cycle {
    pub base: Site,
    pub t_start: usize,
    pub t_end: usize,
    /// Velocity at the end matches the velocity at the start.
    pub local: bool,
}

impl Cycle {
    pub fn length(&self) -> usize {
        self.t_end - self.t_start
    }

    /// Sites from base to base, both ends included.
    pub fn sites<'a>(&self, traj: &'a Trajectory) -> &'a [Site] {
        &traj.positions[self.t_start..=self.t_end]
    }
}

/// Unfinished tail after the last return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenSegment {
    pub t_start: usize,
    pub t_end: usize,
}

impl OpenSegment {
    pub fn length(&self) -> usize {
        self.t_end - self.t_start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub base: Site,
    /// Starts with 0.
    pub return_times: Vec<usize>,
    pub cycles: Vec<Cycle>,
    /// `None` when the run ends exactly on a return.
    pub trailing: Option<OpenSegment>,
}

impl CycleDecomposition {
    pub fn lengths(&self) -> Vec<usize> {
        cycle_lengths(self)
    }
}

pub fn decompose(traj: &Trajectory) -> CycleDecomposition {
    let base = traj.positions[0];
    let mut return_times = Vec::new();
    return_times.push(0);
    return_times.extend(
        traj.positions
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &s)| s == base)
            .map(|(t, _)| t),
    );
    let cycles = return_times
        .windows(2)
        .map(|w| Cycle {
            base,
            t_start: w[0],
            t_end: w[1],
            local: traj.dirs[w[0]] == traj.dirs[w[1]],
        })
        .collect();
    let last = *return_times.last().unwrap_or(&0);
    let end = traj.steps();
    let trailing = (last < end).then_some(OpenSegment {
        t_start: last,
        t_end: end,
    });
    CycleDecomposition {
        base,
        return_times,
        cycles,
        trailing,
    }
}

pub fn cycle_lengths(d: &CycleDecomposition) -> Vec<usize> {
    d.cycles.iter().map(Cycle::length).collect()
}

/// Whether the sites are pairwise distinct. With `closed`, the last site
/// must equal the first and is left out of the comparison.
pub fn is_self_avoiding(segment: &[Site], closed: bool) -> bool {
    let body = if closed {
        match segment.split_last() {
            Some((last, rest)) if rest.first() == Some(last) => rest,
            Some(_) => return false,
            None => return true,
        }
    } else {
        segment
    };
    let mut seen = HashSet::with_capacity(body.len());
    body.iter().all(|s| seen.insert(*s))
}

pub fn is_local_cycle(c: &Cycle, traj: &Trajectory) -> bool {
    traj.dirs[c.t_start] == traj.dirs[c.t_end]
}

/// Whether the site set is unchanged by `(p, q) → (2 − p, q)`, the reflection
/// in the vertical line `x = 1/2`.
pub fn is_symmetric_x_half(sites: &[Site]) -> bool {
    let set: HashSet<(i32, i32)> = sites.iter().map(|s| (s.p(), s.q())).collect();
    set.iter().all(|&(p, q)| set.contains(&(2 - p, q)))
}

/// First time the trajectory revisits a site other than its start, if any.
pub fn first_crossing_off_base(traj: &Trajectory) -> Option<usize> {
    let base = traj.positions[0];
    let mut seen: HashSet<Site> = HashSet::new();
    for (t, &s) in traj.positions.iter().enumerate() {
        if s != base && !seen.insert(s) {
            return Some(t);
        }
    }
    None
}

/// Visit counts per site, used for renderers and diagnostics.
pub fn visit_counts(positions: &[Site]) -> HashMap<Site, usize> {
    let mut m = HashMap::new();
    for &s in positions {
        *m.entry(s).or_insert(0) += 1;
    }
    m
}

/// Index of the first entry where `found` departs from `expected`, or
/// `None` when `found` starts with all of `expected`.
pub fn first_mismatch(found: &[usize], expected: &[u32]) -> Option<usize> {
    expected
        .iter()
        .enumerate()
        .find(|&(i, &e)| found.get(i).map(|&f| f as u32) != Some(e))
        .map(|(i, _)| i)
}
