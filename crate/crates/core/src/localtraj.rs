//! Local trajectories on unions of hexagons and triperfect partitions.
//!
//! A region is a finite set of hexagons. Each entry port yields one crossing,
//! simulated on its own copy of the configuration. Local cycles are found by
//! seeding every interior state no crossing or earlier cycle passes through.
//! A triperfect partition splits these trajectories into three parts so that
//! every site lies on exactly one trajectory of each part.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::config::{Configuration, Pattern};
use crate::dynamics::{step, ParticleState, SystemKind};
use crate::error::{Error, Result};
use crate::lattice::{Direction, HexId, Site};

/// Steps allowed for one local passage before giving up.
pub const PASSAGE_GUARD: usize = 1 << 20;
/// Search nodes allowed for one partition search.
pub const SEARCH_BUDGET: u64 = 1 << 24;

/// A finite union of hexagons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    hexes: Vec<HexId>,
    sites: Vec<Site>,
    site_set: HashSet<Site>,
    ports: Vec<(Site, Direction)>,
}

impl Region {
    pub fn new(hexes: impl IntoIterator<Item = HexId>) -> Self {
        let hexes: Vec<HexId> = hexes
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let sites: Vec<Site> = hexes
            .iter()
            .flat_map(|h| h.ring())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let site_set: HashSet<Site> = sites.iter().copied().collect();
        let ports = sites
            .iter()
            .flat_map(|&s| s.allowed_directions().map(|d| (s, d)))
            .filter(|(s, d)| !site_set.contains(&s.step(*d)))
            .collect();
        Region {
            hexes,
            sites,
            site_set,
            ports,
        }
    }

    /// The hexagons within `radius` adjacency steps of `center`: 1, 7, 19, …
    pub fn disc(center: HexId, radius: usize) -> Self {
        let mut seen = BTreeSet::new();
        seen.insert(center);
        let mut frontier = alloc::vec![center];
        for _ in 0..radius {
            let mut next = Vec::new();
            for h in frontier {
                for g in h.adjacent() {
                    if seen.insert(g) {
                        next.push(g);
                    }
                }
            }
            frontier = next;
        }
        Region::new(seen)
    }

    pub fn hexes(&self) -> &[HexId] {
        &self.hexes
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn contains(&self, s: Site) -> bool {
        self.site_set.contains(&s)
    }

    /// `(site, direction)` pairs whose bond leaves the region.
    pub fn ports(&self) -> &[(Site, Direction)] {
        &self.ports
    }

    pub fn is_empty(&self) -> bool {
        self.hexes.is_empty()
    }

    /// Hexagons in breadth-first order from the first one.
    fn growth_order(&self) -> Vec<HexId> {
        let set: BTreeSet<HexId> = self.hexes.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        for &start in &self.hexes {
            if !seen.insert(start) {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            while let Some(h) = queue.pop_front() {
                order.push(h);
                for g in h.adjacent() {
                    if set.contains(&g) && seen.insert(g) {
                        queue.push_back(g);
                    }
                }
            }
        }
        order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalKind {
    Crossing,
    LocalCycle,
}

/// A crossing from port to port, or a closed local cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalTrajectory {
    pub kind: LocalKind,
    /// Site and outgoing velocity at each visit inside the region. Cycles
    /// start at their smallest state.
    pub states: Vec<(Site, Direction)>,
}

impl LocalTrajectory {
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.states.iter().map(|s| s.0)
    }

    pub fn site_set(&self) -> BTreeSet<Site> {
        self.sites().collect()
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut seen = HashSet::new();
        self.sites().all(|s| seen.insert(s))
    }

    /// Directed bonds `(from, to)` walked inside the region.
    pub fn bonds(&self) -> impl Iterator<Item = (Site, Site)> + '_ {
        self.states.iter().map(|&(s, d)| (s, s.step(d)))
    }
}

/// Everything enumeration found in a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalTrajectories {
    pub trajectories: Vec<LocalTrajectory>,
    /// Seeds that neither closed into a local cycle nor were explained by
    /// another trajectory.
    pub unexplained: Vec<(Site, Direction)>,
}

impl LocalTrajectories {
    /// How many trajectories pass through each region site.
    pub fn cover_counts(&self, region: &Region) -> Vec<(Site, usize)> {
        let mut counts: HashMap<Site, usize> = region.sites().iter().map(|&s| (s, 0)).collect();
        for t in &self.trajectories {
            for s in t.site_set() {
                if let Some(n) = counts.get_mut(&s) {
                    *n += 1;
                }
            }
        }
        region.sites().iter().map(|&s| (s, counts[&s])).collect()
    }

    pub fn crossings(&self) -> impl Iterator<Item = &LocalTrajectory> {
        self.trajectories
            .iter()
            .filter(|t| t.kind == LocalKind::Crossing)
    }

    pub fn cycles(&self) -> impl Iterator<Item = &LocalTrajectory> {
        self.trajectories
            .iter()
            .filter(|t| t.kind == LocalKind::LocalCycle)
    }
}

/// The configuration restricted to the region, on an all-right background.
/// Sites outside the region are never scattered on by a local passage.
fn local_copy(region: &Region, c: &Configuration) -> Configuration {
    let mut local = Configuration::new(Pattern::AllRight);
    for &s in region.sites() {
        local.set(s, c.orientation(s));
    }
    local
}

fn crossing_from(
    region: &Region,
    base: &Configuration,
    port: (Site, Direction),
) -> Result<LocalTrajectory> {
    let (site, ext) = port;
    let mut c = base.clone();
    let mut st = ParticleState {
        site: site.step(ext),
        dir: ext.opposite(),
        time: 0,
    };
    let mut states = Vec::new();
    for _ in 0..PASSAGE_GUARD {
        st = step(SystemKind::Rotator, st, &mut c);
        if !region.contains(st.site) {
            return Ok(LocalTrajectory {
                kind: LocalKind::Crossing,
                states,
            });
        }
        states.push((st.site, st.dir));
    }
    Err(Error::Internal("local crossing exceeded the passage guard"))
}

/// Follow a seed state until it leaves the region or first comes back to its
/// site. Returns the cycle states when it closes with the seed velocity and
/// no site repeats on the way.
fn cycle_from(
    region: &Region,
    base: &Configuration,
    seed: (Site, Direction),
) -> Result<Option<Vec<(Site, Direction)>>> {
    let mut c = base.clone();
    let mut st = ParticleState {
        site: seed.0,
        dir: seed.1,
        time: 0,
    };
    let mut states = alloc::vec![seed];
    let mut seen = HashSet::new();
    seen.insert(seed.0);
    for _ in 0..PASSAGE_GUARD {
        st = step(SystemKind::Rotator, st, &mut c);
        if !region.contains(st.site) {
            return Ok(None);
        }
        if st.site == seed.0 {
            return Ok((st.dir == seed.1).then_some(states));
        }
        if !seen.insert(st.site) {
            return Ok(None);
        }
        states.push((st.site, st.dir));
    }
    Err(Error::Internal(
        "local cycle search exceeded the passage guard",
    ))
}

/// Rotate a closed state sequence to start at its smallest state.
fn normalize_cycle(mut states: Vec<(Site, Direction)>) -> Vec<(Site, Direction)> {
    let start = states
        .iter()
        .enumerate()
        .min_by_key(|(_, s)| **s)
        .map_or(0, |(i, _)| i);
    states.rotate_left(start);
    states
}

pub fn enumerate_local_trajectories(
    region: &Region,
    c: &Configuration,
) -> Result<LocalTrajectories> {
    let base = local_copy(region, c);
    let mut trajectories = Vec::new();
    let mut explained: HashSet<(Site, Direction)> = HashSet::new();
    for &port in region.ports() {
        let t = crossing_from(region, &base, port)?;
        explained.extend(t.states.iter().copied());
        trajectories.push(t);
    }
    let mut unexplained = Vec::new();
    for &s in region.sites() {
        for d in s.allowed_directions() {
            if !region.contains(s.step(d)) || explained.contains(&(s, d)) {
                continue;
            }
            match cycle_from(region, &base, (s, d))? {
                Some(states) => {
                    explained.extend(states.iter().copied());
                    trajectories.push(LocalTrajectory {
                        kind: LocalKind::LocalCycle,
                        states: normalize_cycle(states),
                    });
                }
                None => unexplained.push((s, d)),
            }
        }
    }
    Ok(LocalTrajectories {
        trajectories,
        unexplained,
    })
}

/// Part index, 0 to 2, for each trajectory in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriperfectPartition {
    pub parts: Vec<u8>,
}

/// Crossings are self-avoiding, and each region site lies on exactly three
/// trajectories, one from each part.
pub fn verify_triperfect(
    region: &Region,
    found: &LocalTrajectories,
    partition: &TriperfectPartition,
) -> bool {
    if partition.parts.len() != found.trajectories.len() || partition.parts.iter().any(|&p| p > 2) {
        return false;
    }
    if !found.crossings().all(LocalTrajectory::is_self_avoiding) {
        return false;
    }
    let mut seen: HashMap<Site, Vec<u8>> = HashMap::new();
    for (t, &part) in found.trajectories.iter().zip(&partition.parts) {
        for s in t.site_set() {
            seen.entry(s).or_default().push(part);
        }
    }
    region.sites().iter().all(|s| match seen.get(s) {
        Some(parts) if parts.len() == 3 => {
            let mut p = parts.clone();
            p.sort_unstable();
            p == [0, 1, 2]
        }
        _ => false,
    })
}

/// Search for a triperfect partition.
///
/// Returns the enumerated trajectories together with `Some(partition)`, or
/// `None` when the crossings are not self-avoiding, some site is not covered
/// exactly three times, or no proper 3-colouring exists.
pub fn find_triperfect(
    region: &Region,
    c: &Configuration,
) -> Result<(LocalTrajectories, Option<TriperfectPartition>)> {
    let found = enumerate_local_trajectories(region, c)?;
    if !found.crossings().all(LocalTrajectory::is_self_avoiding)
        || found.cover_counts(region).iter().any(|&(_, n)| n != 3)
    {
        return Ok((found, None));
    }
    let n = found.trajectories.len();
    let mut by_site: HashMap<Site, Vec<usize>> = HashMap::new();
    for (i, t) in found.trajectories.iter().enumerate() {
        for s in t.site_set() {
            by_site.entry(s).or_default().push(i);
        }
    }
    let mut neighbors: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); n];
    for group in by_site.values() {
        for &a in group {
            for &b in group {
                if a != b {
                    neighbors[a].insert(b);
                }
            }
        }
    }
    // Hexagon-by-hexagon variable order.
    let mut order = Vec::with_capacity(n);
    let mut placed = alloc::vec![false; n];
    for h in region.growth_order() {
        for s in h.ring() {
            for &i in &by_site[&s] {
                if !placed[i] {
                    placed[i] = true;
                    order.push(i);
                }
            }
        }
    }
    for (i, p) in placed.iter().enumerate() {
        if !p {
            order.push(i);
        }
    }
    let neighbors: Vec<Vec<usize>> = neighbors
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    let mut colors: Vec<Option<u8>> = alloc::vec![None; n];
    let mut budget = SEARCH_BUDGET;
    let ok = color(&order, 0, &neighbors, &mut colors, &mut budget)?;
    let partition = ok.then(|| TriperfectPartition {
        parts: colors.into_iter().map(|c| c.unwrap_or(0)).collect(),
    });
    Ok((found, partition))
}

fn color(
    order: &[usize],
    at: usize,
    neighbors: &[Vec<usize>],
    colors: &mut [Option<u8>],
    budget: &mut u64,
) -> Result<bool> {
    let Some(&v) = order.get(at) else {
        return Ok(true);
    };
    for part in 0..3u8 {
        if *budget == 0 {
            return Err(Error::Budget {
                what: "triperfect partition search",
                limit: SEARCH_BUDGET,
            });
        }
        *budget -= 1;
        if neighbors[v].iter().any(|&u| colors[u] == Some(part)) {
            continue;
        }
        colors[v] = Some(part);
        // Forward check: every uncoloured neighbour keeps an option.
        let alive = neighbors[v].iter().all(|&u| {
            colors[u].is_some()
                || (0..3u8).any(|p| neighbors[u].iter().all(|&w| colors[w] != Some(p)))
        });
        if alive && color(order, at + 1, neighbors, colors, budget)? {
            return Ok(true);
        }
        colors[v] = None;
    }
    Ok(false)
}

/// Permutation `perm` with `perm[b_part] = a_part` that makes two partitions
/// assign matching parts to every directed bond both regions walk. `None`
/// when no such permutation exists.
pub fn relabel_to_agree(
    a: &LocalTrajectories,
    a_part: &TriperfectPartition,
    b: &LocalTrajectories,
    b_part: &TriperfectPartition,
) -> Option<[u8; 3]> {
    let mut bond_part: HashMap<(Site, Site), u8> = HashMap::new();
    for (t, &p) in a.trajectories.iter().zip(&a_part.parts) {
        for bond in t.bonds() {
            bond_part.insert(bond, p);
        }
    }
    let mut perm: [Option<u8>; 3] = [None; 3];
    for (t, &p) in b.trajectories.iter().zip(&b_part.parts) {
        for bond in t.bonds() {
            if let Some(&q) = bond_part.get(&bond) {
                match perm[p as usize] {
                    None => perm[p as usize] = Some(q),
                    Some(x) if x != q => return None,
                    _ => {}
                }
            }
        }
    }
    // Fill unconstrained slots with the unused parts, keeping a bijection.
    let mut unused: Vec<u8> = (0..3).filter(|x| !perm.contains(&Some(*x))).collect();
    let mut out = [0u8; 3];
    for i in 0..3 {
        out[i] = match perm[i] {
            Some(x) => x,
            None => unused.remove(0),
        };
    }
    let mut check = out;
    check.sort_unstable();
    (check == [0, 1, 2]).then_some(out)
}
