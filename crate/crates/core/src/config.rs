//! Scatterer configurations: an immutable background pattern shared behind an
//! `Arc`, plus a sparse map of every site the particle has flipped.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::Neg;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::hexclass::HexWord;
use crate::lattice::{is_site, HexId, Site, Sublattice};

/// Scatterer orientation. Right is +1, left is −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum Orientation {
    Left = -1,
    Right = 1,
}

impl Orientation {
    pub const fn value(self) -> i8 {
        self as i8
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Orientation::Right),
            -1 => Ok(Orientation::Left),
            _ => Err(Error::Contract("orientation must be +1 or -1")),
        }
    }

    /// Orientation as seen through the mirror correspondence at `s`.
    pub fn phi_at(self, s: Site) -> Self {
        match s.sublattice() {
            Sublattice::Plus => self,
            Sublattice::Minus => -self,
        }
    }
}

impl Neg for Orientation {
    type Output = Orientation;

    fn neg(self) -> Orientation {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    }
}

/// Two translation vectors in `(p, q)` units generating a period lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Period {
    u: (i32, i32),
    v: (i32, i32),
}

impl Period {
    /// Both vectors must map sites to sites and be linearly independent.
    pub fn new(u: (i32, i32), v: (i32, i32)) -> Result<Self> {
        let ok = |(p, q): (i32, i32)| p.rem_euclid(3) == 0 && (p + q).rem_euclid(2) == 0;
        if !ok(u) || !ok(v) {
            return Err(Error::Contract(
                "period vectors must be lattice translations (p divisible by 3, p+q even)",
            ));
        }
        let per = Period { u, v };
        if per.det() == 0 {
            return Err(Error::Contract("period vectors are linearly dependent"));
        }
        Ok(per)
    }

    pub fn vectors(&self) -> [(i32, i32); 2] {
        [self.u, self.v]
    }

    fn det(&self) -> i64 {
        self.u.0 as i64 * self.v.1 as i64 - self.u.1 as i64 * self.v.0 as i64
    }

    /// Sites per fundamental domain. The site lattice itself has two sites in
    /// a cell of determinant 6.
    pub fn sites_per_cell(&self) -> usize {
        (self.det().unsigned_abs() / 3) as usize
    }

    /// Residue of a point modulo the period lattice.
    pub fn key(&self, p: i32, q: i32) -> (i64, i64) {
        let (p, q) = (p as i64, q as i64);
        let d = self.det().abs();
        let a = p * self.v.1 as i64 - q * self.v.0 as i64;
        let b = self.u.0 as i64 * q - self.u.1 as i64 * p;
        (a.rem_euclid(d), b.rem_euclid(d))
    }

    pub fn contains(&self, dp: i32, dq: i32) -> bool {
        self.key(dp, dq) == (0, 0)
    }

    /// One site per residue class, the first met in a scan ordered by
    /// `(|p|+|q|, p, q)`, then sorted.
    pub fn representatives(&self) -> Vec<Site> {
        let want = self.sites_per_cell();
        let reach = self.u.0.abs() + self.v.0.abs() + self.u.1.abs() + self.v.1.abs() + 4;
        let mut cands: Vec<Site> = Vec::new();
        for p in -reach..=reach {
            for q in -reach..=reach {
                if is_site(p, q) {
                    cands.push(Site::new_unchecked(p, q));
                }
            }
        }
        cands.sort_by_key(|s| (s.p().abs() + s.q().abs(), s.p(), s.q()));
        let mut seen = BTreeMap::new();
        for s in cands {
            seen.entry(self.key(s.p(), s.q())).or_insert(s);
            if seen.len() == want {
                break;
            }
        }
        let mut reps: Vec<Site> = seen.into_values().collect();
        reps.sort();
        reps
    }
}

/// Hexagons of left scatterers placed on a superlattice over an all-right
/// background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftHexagons {
    pub period: Period,
    pub anchor: HexId,
}

impl LeftHexagons {
    pub fn is_left_hexagon(&self, h: HexId) -> bool {
        self.period
            .contains(h.p() - self.anchor.p(), h.q() - self.anchor.q())
    }
}

impl Default for LeftHexagons {
    /// Left hexagons on a triangular superlattice three faces apart, with
    /// one of them touching the origin.
    fn default() -> Self {
        LeftHexagons {
            period: Period::new((0, 6), (9, 3)).expect("valid default period"),
            anchor: HexId::new_unchecked(1, 1),
        }
    }
}

/// Horizontal bands of `thickness` rows, right and left alternating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layers {
    pub thickness: i32,
    pub phase: i32,
}

impl Layers {
    pub fn new(thickness: i32, phase: i32) -> Result<Self> {
        if thickness < 1 {
            return Err(Error::Contract("layer thickness must be at least 1"));
        }
        Ok(Layers { thickness, phase })
    }

    pub fn orientation(&self, s: Site) -> Orientation {
        if (s.q() - self.phase).div_euclid(self.thickness) % 2 == 0 {
            Orientation::Right
        } else {
            Orientation::Left
        }
    }
}

impl Default for Layers {
    fn default() -> Self {
        Layers {
            thickness: 3,
            phase: 0,
        }
    }
}

/// An explicit periodic tiling: the orientation of each residue class, with
/// unspecified classes taking `default`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTile {
    period: Period,
    default: Orientation,
    cells: BTreeMap<(i64, i64), Orientation>,
}

impl PeriodicTile {
    pub fn new(
        period: Period,
        default: Orientation,
        cells: impl IntoIterator<Item = (Site, Orientation)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (s, o) in cells {
            let key = period.key(s.p(), s.q());
            if let Some(prev) = map.insert(key, o) {
                if prev != o {
                    return Err(Error::Contract("tile cells disagree on one residue class"));
                }
            }
        }
        Ok(PeriodicTile {
            period,
            default,
            cells: map,
        })
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn default_orientation(&self) -> Orientation {
        self.default
    }

    pub fn orientation(&self, s: Site) -> Orientation {
        *self
            .cells
            .get(&self.period.key(s.p(), s.q()))
            .unwrap_or(&self.default)
    }

    /// Non-default cells, one representative site each.
    pub fn cells(&self) -> Vec<(Site, Orientation)> {
        self.period
            .representatives()
            .into_iter()
            .map(|s| (s, self.orientation(s)))
            .filter(|(_, o)| *o != self.default)
            .collect()
    }
}

/// Independent per-site coin flips derived from a seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPattern {
    pub seed: u64,
    pub p_right: f64,
}

impl RandomPattern {
    pub fn new(seed: u64, p_right: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_right) {
            return Err(Error::Contract("probability of right must lie in [0, 1]"));
        }
        Ok(RandomPattern { seed, p_right })
    }

    pub fn orientation(&self, s: Site) -> Orientation {
        let cell = ((s.p() as u32 as u64) << 32) | s.q() as u32 as u64;
        let u = splitmix64(self.seed.wrapping_add(splitmix64(cell)));
        if unit_f64(u) < self.p_right {
            Orientation::Right
        } else {
            Orientation::Left
        }
    }
}

/// The background a configuration starts from.
#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    AllRight,
    AllLeft,
    LeftHexagons(LeftHexagons),
    Layers(Layers),
    PeriodicTile(PeriodicTile),
    Random(RandomPattern),
}

impl Pattern {
    pub fn pattern_a() -> Self {
        Pattern::LeftHexagons(LeftHexagons::default())
    }

    pub fn pattern_b() -> Self {
        Pattern::Layers(Layers::default())
    }

    pub fn orientation(&self, s: Site) -> Orientation {
        match self {
            Pattern::AllRight => Orientation::Right,
            Pattern::AllLeft => Orientation::Left,
            Pattern::LeftHexagons(lh) => {
                if s.hexagons().iter().any(|&h| lh.is_left_hexagon(h)) {
                    Orientation::Left
                } else {
                    Orientation::Right
                }
            }
            Pattern::Layers(l) => l.orientation(s),
            Pattern::PeriodicTile(t) => t.orientation(s),
            Pattern::Random(r) => r.orientation(s),
        }
    }

    /// The translation lattice of the pattern, if it has one.
    pub fn period(&self) -> Option<Period> {
        match self {
            Pattern::AllRight | Pattern::AllLeft => Period::new((0, 2), (3, 1)).ok(),
            Pattern::LeftHexagons(lh) => Some(lh.period),
            Pattern::Layers(l) => Period::new((6, 0), (0, 2 * l.thickness)).ok(),
            Pattern::PeriodicTile(t) => Some(t.period),
            Pattern::Random(_) => None,
        }
    }
}

/// The splitmix64 output function applied to `x + 0x9E3779B97F4A7C15`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_f64(u: u64) -> f64 {
    (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential splitmix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        let out = splitmix64(self.state);
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        out
    }

    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        (((self.next_u64() as u128) * (n as u128)) >> 64) as u64
    }
}

/// A live configuration: background, the φ flag, and the flipped sites.
#[derive(Debug, Clone)]
pub struct Configuration {
    background: Arc<Pattern>,
    phi: bool,
    overrides: HashMap<Site, Orientation>,
    flip_count: u64,
}

impl Configuration {
    pub fn new(pattern: Pattern) -> Self {
        Self::shared(Arc::new(pattern))
    }

    pub fn shared(background: Arc<Pattern>) -> Self {
        Configuration {
            background,
            phi: false,
            overrides: HashMap::new(),
            flip_count: 0,
        }
    }

    pub fn all_right() -> Self {
        Self::new(Pattern::AllRight)
    }

    pub fn background(&self) -> &Arc<Pattern> {
        &self.background
    }

    pub fn is_phi_mapped(&self) -> bool {
        self.phi
    }

    fn background_at(&self, s: Site) -> Orientation {
        let o = self.background.orientation(s);
        if self.phi {
            o.phi_at(s)
        } else {
            o
        }
    }

    #[inline]
    pub fn orientation(&self, s: Site) -> Orientation {
        match self.overrides.get(&s) {
            Some(&o) => o,
            None => self.background_at(s),
        }
    }

    /// Set a scatterer without counting it as a flip.
    pub fn set(&mut self, s: Site, o: Orientation) {
        self.overrides.insert(s, o);
    }

    #[inline]
    pub fn flip(&mut self, s: Site) {
        let o = -self.orientation(s);
        self.overrides.insert(s, o);
        self.flip_count += 1;
    }

    pub fn flip_count(&self) -> u64 {
        self.flip_count
    }

    pub fn overrides(&self) -> impl Iterator<Item = (Site, Orientation)> + '_ {
        self.overrides.iter().map(|(&s, &o)| (s, o))
    }

    pub fn override_count(&self) -> usize {
        self.overrides.len()
    }

    /// The mirror-equivalent configuration: Minus sites negated.
    pub fn phi(&self) -> Configuration {
        Configuration {
            background: Arc::clone(&self.background),
            phi: !self.phi,
            overrides: self
                .overrides
                .iter()
                .map(|(&s, &o)| (s, o.phi_at(s)))
                .collect(),
            flip_count: self.flip_count,
        }
    }

    /// Translation lattice, available only while no site deviates from the
    /// background.
    pub fn period(&self) -> Option<Period> {
        if self.overrides.is_empty() {
            self.background.period()
        } else {
            None
        }
    }

    pub fn hexagon_word(&self, h: HexId) -> HexWord {
        HexWord::from_orientations(h.ring().map(|s| self.orientation(s)))
    }
}
