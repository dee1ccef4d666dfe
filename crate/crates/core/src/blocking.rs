//! Blocking times of periodic configurations and the recurrence harness.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::config::Configuration;
use crate::cycles::is_self_avoiding;
use crate::dynamics::{InitialCondition, Simulation, SystemKind};
use crate::error::{Error, Result};
use crate::lattice::Site;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnProbe {
    Returned(usize),
    Exceeded,
}

/// First `t ≥ 1` with the particle back at its starting site, probed on a
/// copy of `c`.
pub fn first_return_time(
    ic: InitialCondition,
    c: &Configuration,
    bound: usize,
) -> Result<ReturnProbe> {
    Ok(first_return_cycle(ic, c, bound)?.0)
}

fn first_return_cycle(
    ic: InitialCondition,
    c: &Configuration,
    bound: usize,
) -> Result<(ReturnProbe, Vec<Site>)> {
    if bound < 1 {
        return Err(Error::Contract("return bound must be at least 1"));
    }
    let mut sim = Simulation::new(SystemKind::Rotator, ic, c.clone());
    let mut sites = alloc::vec![ic.site];
    for t in 1..=bound {
        let st = sim.advance();
        sites.push(st.site);
        if st.site == ic.site {
            return Ok((ReturnProbe::Returned(t), sites));
        }
    }
    Ok((ReturnProbe::Exceeded, sites))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockingTime {
    Blocking(usize),
    NotBlockingWithin(usize),
}

/// First-return cycles that agree up to translation and rotation (and
/// reflection, when requested).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeClass {
    /// Canonical site set.
    pub shape: Vec<Site>,
    pub length: usize,
    pub count: usize,
    pub example: InitialCondition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingReport {
    pub blocking_time: BlockingTime,
    /// Initial condition attaining the maximum, or the first escaping one.
    pub witness: InitialCondition,
    pub probes: Vec<(InitialCondition, ReturnProbe)>,
    pub shapes: Vec<ShapeClass>,
}

impl BlockingReport {
    pub fn return_lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .probes
            .iter()
            .filter_map(|(_, p)| match p {
                ReturnProbe::Returned(t) => Some(*t),
                ReturnProbe::Exceeded => None,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeSymmetry {
    RotationTranslation,
    /// Rotations, reflections and translations.
    Full,
}

/// Probe every site of one fundamental domain with each allowed velocity.
pub fn blocking_time(c: &Configuration, bound: usize) -> Result<BlockingReport> {
    blocking_time_with(c, bound, ShapeSymmetry::RotationTranslation)
}

pub fn blocking_time_with(
    c: &Configuration,
    bound: usize,
    symmetry: ShapeSymmetry,
) -> Result<BlockingReport> {
    let period = c.period().ok_or(Error::Contract(
        "blocking time needs a periodic configuration without overrides",
    ))?;
    let mut probes = Vec::new();
    let mut shapes: BTreeMap<Vec<(i32, i32)>, ShapeClass> = BTreeMap::new();
    let mut worst: Option<(usize, InitialCondition)> = None;
    let mut escape: Option<InitialCondition> = None;
    for site in period.representatives() {
        for dir in site.allowed_directions() {
            let ic = InitialCondition { site, dir };
            let (probe, sites) = first_return_cycle(ic, c, bound)?;
            probes.push((ic, probe));
            match probe {
                ReturnProbe::Returned(t) => {
                    if worst.is_none_or(|(w, _)| t > w) {
                        worst = Some((t, ic));
                    }
                    let key = canonical_shape(&sites[..sites.len() - 1], symmetry);
                    shapes
                        .entry(key.clone())
                        .and_modify(|s| s.count += 1)
                        .or_insert_with(|| ShapeClass {
                            shape: key
                                .iter()
                                .map(|&(p, q)| Site::new_unchecked(p, q))
                                .collect(),
                            length: t,
                            count: 1,
                            example: ic,
                        });
                }
                ReturnProbe::Exceeded => {
                    escape.get_or_insert(ic);
                }
            }
        }
    }
    let (blocking_time, witness) = match (escape, worst) {
        (Some(ic), _) => (BlockingTime::NotBlockingWithin(bound), ic),
        (None, Some((t, ic))) => (BlockingTime::Blocking(t), ic),
        (None, None) => return Err(Error::Internal("fundamental domain has no sites")),
    };
    let mut shapes: Vec<ShapeClass> = shapes.into_values().collect();
    shapes.sort_by_key(|s| (s.length, s.example));
    Ok(BlockingReport {
        blocking_time,
        witness,
        probes,
        shapes,
    })
}

/// Rotate by 60° about the hexagon center `(1, 1)`.
fn rotate60((p, q): (i32, i32)) -> (i32, i32) {
    let (x, y) = (p - 1, q - 1);
    ((x - 3 * y) / 2 + 1, (x + y) / 2 + 1)
}

/// Reflect in the horizontal line through `(1, 1)`.
fn reflect((p, q): (i32, i32)) -> (i32, i32) {
    (p, 2 - q)
}

/// Lexicographically smallest sorted site list over the chosen symmetries,
/// translated so the smallest site lands on `(0, 0)` or `(2, 0)`.
pub fn canonical_shape(sites: &[Site], symmetry: ShapeSymmetry) -> Vec<(i32, i32)> {
    let base: Vec<(i32, i32)> = sites
        .iter()
        .map(|s| (s.p(), s.q()))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    let mut variants = alloc::vec![base.clone()];
    if symmetry == ShapeSymmetry::Full {
        variants.push(base.iter().map(|&x| reflect(x)).collect());
    }
    let mut best: Option<Vec<(i32, i32)>> = None;
    for v in variants {
        let mut cur = v;
        for _ in 0..6 {
            cur = cur.iter().map(|&x| rotate60(x)).collect();
            let mut sorted = cur.clone();
            sorted.sort_unstable();
            let (p0, q0) = sorted[0];
            let target = if p0.rem_euclid(3) == 2 { 2 } else { 0 };
            let shifted: Vec<(i32, i32)> = sorted
                .iter()
                .map(|&(p, q)| (p - p0 + target, q - q0))
                .collect();
            if best.as_ref().is_none_or(|b| shifted < *b) {
                best = Some(shifted);
            }
        }
    }
    best.unwrap_or_default()
}

/// Returns found by a long run from one initial condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub return_times: Vec<usize>,
    /// Every completed segment between returns visits distinct sites.
    pub self_avoiding: bool,
    pub steps_run: usize,
}

impl RecurrenceReport {
    pub fn found(&self, n: usize) -> bool {
        self.return_times.len() >= n
    }
}

/// Run until `n_returns` returns or `step_budget` steps, whichever comes
/// first. Falling short is reported, not raised.
pub fn recurrence_probe(
    ic: InitialCondition,
    c: &Configuration,
    n_returns: usize,
    step_budget: usize,
) -> RecurrenceReport {
    let mut sim = Simulation::new(SystemKind::Rotator, ic, c.clone());
    let mut return_times = Vec::new();
    let mut segment = alloc::vec![ic.site];
    let mut self_avoiding = true;
    let mut steps_run = 0;
    while return_times.len() < n_returns && steps_run < step_budget {
        let st = sim.advance();
        steps_run += 1;
        segment.push(st.site);
        if st.site == ic.site {
            return_times.push(steps_run);
            self_avoiding &= is_self_avoiding(&segment, true);
            segment.clear();
            segment.push(ic.site);
        }
    }
    RecurrenceReport {
        return_times,
        self_avoiding,
        steps_run,
    }
}

/// Longest run of consecutive steps that each land on a site not visited
/// before.
pub fn longest_fresh_run(positions: &[Site]) -> usize {
    let mut seen = HashSet::new();
    let mut best = 0;
    let mut run = 0;
    for (i, &s) in positions.iter().enumerate() {
        let fresh = seen.insert(s);
        if i == 0 {
            continue;
        }
        if fresh {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}
