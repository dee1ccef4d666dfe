//! Integer geometry of the honeycomb lattice.
//!
//! A site `(p, q)` sits at `x = p/2`, `y = q·√3/2`. Valid sites have `p + q`
//! even and `p mod 3 ∈ {0, 2}`; the leftover class `p ≡ 1 (mod 3)` names
//! hexagon centers, so sites and faces share one namespace without clashing.

use core::fmt;

use crate::config::Orientation;
use crate::error::{Error, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// A lattice vertex in the `(p, q)` chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    p: i32,
    q: i32,
}

impl Site {
    pub const ORIGIN: Site = Site { p: 0, q: 0 };

    pub fn new(p: i32, q: i32) -> Result<Self> {
        if is_site(p, q) {
            Ok(Site { p, q })
        } else {
            Err(Error::InvalidSite { p, q })
        }
    }

    /// Caller guarantees validity; used on hot paths after a checked move.
    pub(crate) const fn new_unchecked(p: i32, q: i32) -> Self {
        Site { p, q }
    }

    pub const fn p(self) -> i32 {
        self.p
    }

    pub const fn q(self) -> i32 {
        self.q
    }

    pub fn sublattice(self) -> Sublattice {
        if self.p.rem_euclid(3) == 2 {
            Sublattice::Plus
        } else {
            Sublattice::Minus
        }
    }

    pub fn allowed_directions(self) -> [Direction; 3] {
        match self.sublattice() {
            Sublattice::Minus => [Direction::D0, Direction::D2, Direction::D4],
            Sublattice::Plus => [Direction::D1, Direction::D3, Direction::D5],
        }
    }

    pub fn allows(self, d: Direction) -> bool {
        // Minus sites use even directions, Plus sites odd ones.
        (d.index() % 2 == 1) == (self.sublattice() == Sublattice::Plus)
    }

    pub fn neighbor(self, d: Direction) -> Result<Site> {
        if self.allows(d) {
            Ok(self.step(d))
        } else {
            Err(Error::DirectionNotAllowed {
                p: self.p,
                q: self.q,
                k: d.index(),
            })
        }
    }

    /// Move along `d` without checking that the bond exists.
    #[inline]
    pub(crate) fn step(self, d: Direction) -> Site {
        let (dp, dq) = d.delta();
        Site::new_unchecked(self.p + dp, self.q + dq)
    }

    pub fn euclidean(self) -> (f64, f64) {
        (self.p as f64 / 2.0, self.q as f64 * SQRT_3 / 2.0)
    }

    /// `4·|r|²` as an exact integer.
    pub fn norm2_x4(self) -> i64 {
        let p = self.p as i64;
        let q = self.q as i64;
        p * p + 3 * q * q
    }

    pub fn norm2(self) -> f64 {
        self.norm2_x4() as f64 / 4.0
    }

    /// The three faces whose ring passes through this site.
    pub fn hexagons(self) -> [HexId; 3] {
        let mut out = [HexId::new_unchecked(0, 0); 3];
        let mut n = 0;
        for (dp, dq) in RING_OFFSETS {
            let (p, q) = (self.p - dp, self.q - dq);
            if p.rem_euclid(3) == 1 {
                out[n] = HexId::new_unchecked(p, q);
                n += 1;
            }
        }
        debug_assert_eq!(n, 3);
        out.sort_unstable();
        out
    }

    /// The direction leading from `self` to the adjacent site `other`.
    pub fn direction_to(self, other: Site) -> Option<Direction> {
        let d = (other.p - self.p, other.q - self.q);
        Direction::ALL
            .into_iter()
            .find(|k| k.delta() == d && self.allows(*k))
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

pub fn is_site(p: i32, q: i32) -> bool {
    (p + q).rem_euclid(2) == 0 && p.rem_euclid(3) != 1
}

/// H+ (right end of its horizontal bond) or H− (left end).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sublattice {
    Plus,
    Minus,
}

/// One of the six unit directions, `k` counting 60° steps from +x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(u8);

const DELTAS: [(i32, i32); 6] = [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)];

impl Direction {
    pub const D0: Direction = Direction(0);
    pub const D1: Direction = Direction(1);
    pub const D2: Direction = Direction(2);
    pub const D3: Direction = Direction(3);
    pub const D4: Direction = Direction(4);
    pub const D5: Direction = Direction(5);
    pub const ALL: [Direction; 6] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
    ];

    pub fn new(k: u8) -> Result<Self> {
        if k < 6 {
            Ok(Direction(k))
        } else {
            Err(Error::Contract("direction index must be in 0..6"))
        }
    }

    pub const fn index(self) -> u8 {
        self.0
    }

    pub const fn delta(self) -> (i32, i32) {
        DELTAS[self.0 as usize]
    }

    pub const fn opposite(self) -> Direction {
        Direction((self.0 + 3) % 6)
    }

    /// Turn by `k` steps of +60°.
    pub const fn turn(self, k: i32) -> Direction {
        Direction((self.0 as i32 + k).rem_euclid(6) as u8)
    }

    /// Right scatterers turn by −60°, left ones by +60°.
    #[inline]
    pub const fn rotate(self, z: Orientation) -> Direction {
        match z {
            Orientation::Right => Direction((self.0 + 5) % 6),
            Orientation::Left => Direction((self.0 + 1) % 6),
        }
    }

    pub fn unit_vector(self) -> (f64, f64) {
        let (dp, dq) = self.delta();
        (dp as f64 / 2.0, dq as f64 * SQRT_3 / 2.0)
    }
}

/// Offsets from a hexagon center to its ring, clockwise from the vertex of
/// largest `p`.
pub const RING_OFFSETS: [(i32, i32); 6] = [(2, 0), (1, -1), (-1, -1), (-2, 0), (-1, 1), (1, 1)];

/// A hexagonal face named by its center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HexId {
    p: i32,
    q: i32,
}

impl HexId {
    pub fn new(p: i32, q: i32) -> Result<Self> {
        if p.rem_euclid(3) == 1 && (p + q).rem_euclid(2) == 0 {
            Ok(HexId { p, q })
        } else {
            Err(Error::InvalidHex { p, q })
        }
    }

    pub(crate) const fn new_unchecked(p: i32, q: i32) -> Self {
        HexId { p, q }
    }

    pub const fn p(self) -> i32 {
        self.p
    }

    pub const fn q(self) -> i32 {
        self.q
    }

    /// Ring sites in clockwise order starting at the vertex of largest `p`.
    pub fn ring(self) -> [Site; 6] {
        RING_OFFSETS.map(|(dp, dq)| Site::new_unchecked(self.p + dp, self.q + dq))
    }

    pub fn vertex_index(self, s: Site) -> Option<usize> {
        self.ring().iter().position(|&r| r == s)
    }

    /// The bond of ring vertex `i` that leaves the hexagon, as a direction
    /// pointing outward.
    pub fn external_direction(self, i: usize) -> Direction {
        // Vertex i sits at angle 60°·(-i); its outward bond points the same way.
        Direction((6 - (i % 6) as u8) % 6)
    }

    /// The six faces sharing an edge with this one.
    pub fn adjacent(self) -> [HexId; 6] {
        [(3, 1), (0, 2), (-3, 1), (-3, -1), (0, -2), (3, -1)]
            .map(|(dp, dq)| HexId::new_unchecked(self.p + dp, self.q + dq))
    }

    pub fn translate(self, dp: i32, dq: i32) -> Result<HexId> {
        HexId::new(self.p + dp, self.q + dq)
    }
}

impl fmt::Display for HexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hex({}, {})", self.p, self.q)
    }
}
