//! Flipping rotator and flipping mirror steppers.
//!
//! One step moves the particle along its velocity, scatters it with the
//! orientation found at the new site, then flips that scatterer.

use alloc::vec::Vec;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::lattice::{Direction, Site, Sublattice};

/// Longest trajectory `run` will record in memory.
pub const MAX_RECORDED_STEPS: usize = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Rotator,
    Mirror,
}

/// Starting site and velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InitialCondition {
    pub site: Site,
    pub dir: Direction,
}

impl InitialCondition {
    pub fn new(site: Site, dir: Direction) -> Result<Self> {
        if site.allows(dir) {
            Ok(InitialCondition { site, dir })
        } else {
            Err(Error::DirectionNotAllowed {
                p: site.p(),
                q: site.q(),
                k: dir.index(),
            })
        }
    }
}

impl Default for InitialCondition {
    /// The origin heading along +x.
    fn default() -> Self {
        InitialCondition {
            site: Site::ORIGIN,
            dir: Direction::D0,
        }
    }
}

/// Position, velocity right after time `time`, and the time itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParticleState {
    pub site: Site,
    pub dir: Direction,
    pub time: u64,
}

impl ParticleState {
    pub fn new(site: Site, dir: Direction) -> Result<Self> {
        let ic = InitialCondition::new(site, dir)?;
        Ok(ic.into())
    }
}

impl From<InitialCondition> for ParticleState {
    fn from(ic: InitialCondition) -> Self {
        ParticleState {
            site: ic.site,
            dir: ic.dir,
            time: 0,
        }
    }
}

/// Advance one time step, flipping the scatterer at the arrival site.
#[inline]
pub fn step(kind: SystemKind, st: ParticleState, c: &mut Configuration) -> ParticleState {
    let site = st.site.step(st.dir);
    let z = c.orientation(site);
    let z = match (kind, site.sublattice()) {
        (SystemKind::Mirror, Sublattice::Minus) => -z,
        _ => z,
    };
    c.flip(site);
    ParticleState {
        site,
        dir: st.dir.rotate(z),
        time: st.time + 1,
    }
}

/// A particle and the configuration it owns, advanced one step per `next`.
#[derive(Debug, Clone)]
pub struct Simulation {
    kind: SystemKind,
    state: ParticleState,
    config: Configuration,
}

impl Simulation {
    pub fn new(kind: SystemKind, ic: InitialCondition, config: Configuration) -> Self {
        Simulation {
            kind,
            state: ic.into(),
            config,
        }
    }

    pub fn state(&self) -> ParticleState {
        self.state
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn into_config(self) -> Configuration {
        self.config
    }

    pub fn advance(&mut self) -> ParticleState {
        self.state = step(self.kind, self.state, &mut self.config);
        self.state
    }
}

impl Iterator for Simulation {
    type Item = ParticleState;

    /// Yields the state after each step; never ends.
    fn next(&mut self) -> Option<ParticleState> {
        Some(self.advance())
    }
}

/// Recorded positions and velocities for `t = 0..=T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub kind: SystemKind,
    pub positions: Vec<Site>,
    pub dirs: Vec<Direction>,
}

impl Trajectory {
    /// Number of steps `T`.
    pub fn steps(&self) -> usize {
        self.positions.len() - 1
    }

    pub fn initial(&self) -> InitialCondition {
        InitialCondition {
            site: self.positions[0],
            dir: self.dirs[0],
        }
    }

    pub fn state(&self, t: usize) -> ParticleState {
        ParticleState {
            site: self.positions[t],
            dir: self.dirs[t],
            time: t as u64,
        }
    }
}

/// Run `steps` steps from `ic`, leaving `c` at its final state.
pub fn run(
    kind: SystemKind,
    ic: InitialCondition,
    c: &mut Configuration,
    steps: usize,
) -> Result<Trajectory> {
    if steps > MAX_RECORDED_STEPS {
        return Err(Error::Budget {
            what: "recorded trajectory length",
            limit: MAX_RECORDED_STEPS as u64,
        });
    }
    let mut positions = Vec::with_capacity(steps + 1);
    let mut dirs = Vec::with_capacity(steps + 1);
    let mut st = ParticleState::from(ic);
    positions.push(st.site);
    dirs.push(st.dir);
    for _ in 0..steps {
        st = step(kind, st, c);
        positions.push(st.site);
        dirs.push(st.dir);
    }
    Ok(Trajectory {
        kind,
        positions,
        dirs,
    })
}

/// Check both directions of the rotator/mirror correspondence over `steps`
/// steps: rotator on `c` against mirror on φ(c), and mirror on `c` against
/// rotator on φ(c).
pub fn check_equivalence(ic: InitialCondition, c: &Configuration, steps: usize) -> bool {
    let same = |a: SystemKind, ca: Configuration, b: SystemKind, cb: Configuration| {
        let mut x = Simulation::new(a, ic, ca);
        let mut y = Simulation::new(b, ic, cb);
        (0..steps).all(|_| x.advance().site == y.advance().site)
    };
    same(SystemKind::Rotator, c.clone(), SystemKind::Mirror, c.phi())
        && same(SystemKind::Mirror, c.clone(), SystemKind::Rotator, c.phi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Pattern;

    fn s(p: i32, q: i32) -> Site {
        Site::new(p, q).unwrap()
    }

    #[test]
    fn all_right_hexagon() {
        let mut c = Configuration::all_right();
        let t = run(SystemKind::Rotator, InitialCondition::default(), &mut c, 6).unwrap();
        assert_eq!(
            t.positions,
            [
                s(0, 0),
                s(2, 0),
                s(3, -1),
                s(2, -2),
                s(0, -2),
                s(-1, -1),
                s(0, 0)
            ]
        );
        assert_eq!(t.dirs[6], Direction::D0);
        assert_eq!(c.flip_count(), 6);
    }

    #[test]
    fn all_left_hexagon_is_counterclockwise() {
        let mut c = Configuration::new(Pattern::AllLeft);
        let t = run(SystemKind::Rotator, InitialCondition::default(), &mut c, 6).unwrap();
        assert_eq!(t.positions[1], s(2, 0));
        assert_eq!(t.positions[2], s(3, 1));
        assert_eq!(t.positions[6], s(0, 0));
    }

    #[test]
    fn mirror_on_phi_matches_rotator() {
        let ic = InitialCondition::default();
        let mut r = Configuration::all_right();
        let mut m = Configuration::all_right().phi();
        let a = run(SystemKind::Rotator, ic, &mut r, 6).unwrap();
        let b = run(SystemKind::Mirror, ic, &mut m, 6).unwrap();
        assert_eq!(a.positions, b.positions);
    }

    #[test]
    fn early_return_times() {
        let mut c = Configuration::all_right();
        let t = run(SystemKind::Rotator, InitialCondition::default(), &mut c, 72).unwrap();
        let returns: Vec<usize> = (1..=72)
            .filter(|&i| t.positions[i] == Site::ORIGIN)
            .collect();
        assert_eq!(returns, [6, 24, 30, 72]);
    }

    #[test]
    fn zero_steps() {
        let mut c = Configuration::all_right();
        let t = run(SystemKind::Rotator, InitialCondition::default(), &mut c, 0).unwrap();
        assert_eq!(t.positions.len(), 1);
        assert_eq!(t.steps(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let mut c = Configuration::all_right();
        let r = run(
            SystemKind::Rotator,
            InitialCondition::default(),
            &mut c,
            MAX_RECORDED_STEPS + 1,
        );
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn equivalence_examples() {
        let ic = InitialCondition::default();
        assert!(check_equivalence(ic, &Configuration::all_right(), 10_000));
        let rnd = Pattern::Random(crate::config::RandomPattern::new(42, 0.5).unwrap());
        assert!(check_equivalence(ic, &Configuration::new(rnd), 10_000));
    }

    #[test]
    fn mirror_without_phi_differs() {
        let ic = InitialCondition::default();
        let mut a = Configuration::all_right();
        let mut b = Configuration::all_right();
        let ra = run(SystemKind::Rotator, ic, &mut a, 20).unwrap();
        let rb = run(SystemKind::Mirror, ic, &mut b, 20).unwrap();
        assert_ne!(ra.positions, rb.positions);
    }

    #[test]
    fn initial_condition_checks_direction() {
        assert!(InitialCondition::new(Site::ORIGIN, Direction::D1).is_err());
        assert!(InitialCondition::new(s(2, 0), Direction::D3).is_ok());
    }
}
