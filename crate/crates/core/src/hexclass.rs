//! Single-hexagon classification.
//!
//! A hexagon word is the six ring orientations read clockwise from the vertex
//! of largest `p`. Words are stored as a 6-bit mask with bit `i` set when
//! vertex `i` is a left scatterer. Up to rotation and reflection there are 13
//! classes, and the particle passing through a hexagon moves its word between
//! classes along the transition graph.

use alloc::vec::Vec;

use crate::config::{Configuration, Orientation};
use crate::error::{Error, Result};
use crate::lattice::HexId;

const ALL_RIGHT: u8 = 0;
const FULL: u8 = 0b11_1111;

/// Six ring orientations, clockwise from the vertex of largest `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HexWord(u8);

impl HexWord {
    pub const ALL_RIGHT: HexWord = HexWord(ALL_RIGHT);
    pub const ALL_LEFT: HexWord = HexWord(FULL);

    pub fn from_bits(bits: u8) -> Result<Self> {
        if bits <= FULL {
            Ok(HexWord(bits))
        } else {
            Err(Error::Contract("hexagon word needs exactly six bits"))
        }
    }

    pub fn from_orientations(o: [Orientation; 6]) -> Self {
        let mut bits = 0;
        for (i, z) in o.iter().enumerate() {
            if *z == Orientation::Left {
                bits |= 1 << i;
            }
        }
        HexWord(bits)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub fn get(self, i: usize) -> Orientation {
        if self.0 >> i & 1 == 1 {
            Orientation::Left
        } else {
            Orientation::Right
        }
    }

    pub fn orientations(self) -> [Orientation; 6] {
        core::array::from_fn(|i| self.get(i))
    }

    pub fn values(self) -> [i8; 6] {
        self.orientations().map(Orientation::value)
    }

    pub fn all() -> impl Iterator<Item = HexWord> {
        (0..=FULL).map(HexWord)
    }

    /// Read vertex `i + r` into slot `i`.
    pub const fn rotated(self, r: usize) -> HexWord {
        HexWord(rotate_bits(self.0, r))
    }

    /// Reverse the reading direction about vertex 0.
    pub const fn reflected(self) -> HexWord {
        HexWord(reflect_bits(self.0))
    }

    /// The 12 dihedral images: rotations, then rotations of the reflection.
    pub fn images(self) -> [HexWord; 12] {
        core::array::from_fn(|g| HexWord(image_bits(self.0, g)))
    }

    /// Lexicographic minimum over the dihedral images, ordering left below
    /// right.
    pub fn canonical(self) -> HexWord {
        HexWord(canonical_bits(self.0))
    }

    pub fn class(self) -> ClassId {
        ClassId::of(self)
    }
}

impl PartialOrd for HexWord {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HexWord {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        lex_key(self.0).cmp(&lex_key(other.0))
    }
}

/// Sort key matching lexicographic order of the `±1` tuple.
const fn lex_key(bits: u8) -> u8 {
    let mut k = 0;
    let mut i = 0;
    while i < 6 {
        if bits >> i & 1 == 0 {
            k |= 1 << (5 - i);
        }
        i += 1;
    }
    k
}

const fn rotate_bits(bits: u8, r: usize) -> u8 {
    let r = (r % 6) as u32;
    ((bits >> r) | (bits << (6 - r))) & FULL
}

const fn reflect_bits(bits: u8) -> u8 {
    let mut out = 0;
    let mut i = 0;
    while i < 6 {
        if bits >> i & 1 == 1 {
            out |= 1 << ((6 - i) % 6);
        }
        i += 1;
    }
    out
}

const fn image_bits(bits: u8, g: usize) -> u8 {
    if g < 6 {
        rotate_bits(bits, g)
    } else {
        rotate_bits(reflect_bits(bits), g - 6)
    }
}

const fn canonical_bits(bits: u8) -> u8 {
    let mut best = bits;
    let mut g = 1;
    while g < 12 {
        let w = image_bits(bits, g);
        if lex_key(w) < lex_key(best) {
            best = w;
        }
        g += 1;
    }
    best
}

/// A dihedral class with its label, 1 to 13 in order of canonical word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    canonical: HexWord,
    label: u8,
}

impl ClassId {
    pub fn of(w: HexWord) -> ClassId {
        let canonical = w.canonical();
        let label = CLASS_REPS
            .iter()
            .position(|&r| r == canonical.0)
            .expect("canonical word is a class representative") as u8
            + 1;
        ClassId { canonical, label }
    }

    pub fn all() -> [ClassId; 13] {
        CLASS_REPS.map(|b| ClassId::of(HexWord(b)))
    }

    pub fn from_label(label: u8) -> Result<ClassId> {
        if (1..=13).contains(&label) {
            Ok(ClassId::of(HexWord(CLASS_REPS[label as usize - 1])))
        } else {
            Err(Error::Contract("class labels run from 1 to 13"))
        }
    }

    pub fn canonical(self) -> HexWord {
        self.canonical
    }

    pub fn label(self) -> u8 {
        self.label
    }
}

const fn class_reps() -> [u8; 13] {
    let mut seen = [false; 64];
    let mut w = 0;
    while w < 64 {
        seen[canonical_bits(w as u8) as usize] = true;
        w += 1;
    }
    // Emit in increasing lexicographic key, i.e. decreasing "right" weight.
    let mut reps = [0u8; 13];
    let mut n = 0;
    let mut key = 0;
    while key < 64 {
        let mut b = 0;
        while b < 64 {
            if seen[b] && lex_key(b as u8) == key as u8 {
                reps[n] = b as u8;
                n += 1;
            }
            b += 1;
        }
        key += 1;
    }
    assert!(n == 13);
    reps
}

const CLASS_REPS: [u8; 13] = class_reps();

/// How the particle arrived at its current ring vertex.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Came {
    Outside,
    /// From vertex `i − 1`, moving clockwise.
    Clockwise,
    /// From vertex `i + 1`, moving counterclockwise.
    Counter,
}

/// Result of one passage through a hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub word: HexWord,
    pub exit: usize,
    pub scatterings: u32,
}

const TRANSITION_GUARD: u32 = 1 << 16;

/// Passage through a lone hexagon, tracked on ring indices only.
///
/// Returns `(word, exit vertex, scatterings)`, or `None` if the guard trips.
const fn passage(bits: u8, entry: usize) -> Option<(u8, usize, u32)> {
    let mut w = bits;
    let mut i = entry % 6;
    let mut came = Came::Outside;
    let mut n = 0;
    while n < TRANSITION_GUARD {
        let right = w >> i & 1 == 0;
        w ^= 1 << i;
        n += 1;
        let next = match (came, right) {
            (Came::Outside, true) | (Came::Counter, false) => Some(Came::Counter),
            (Came::Outside, false) | (Came::Clockwise, true) => Some(Came::Clockwise),
            (Came::Clockwise, false) | (Came::Counter, true) => None,
        };
        match next {
            None => return Some((w, i, n)),
            Some(Came::Counter) => i = (i + 5) % 6,
            Some(_) => i = (i + 1) % 6,
        }
        came = match next {
            Some(c) => c,
            None => Came::Outside,
        };
    }
    None
}

/// Send the particle into a hexagon with word `w` through the external bond
/// of vertex `entry`, and follow it until it leaves.
pub fn hexagon_transition(w: HexWord, entry: usize) -> Result<Transition> {
    if entry >= 6 {
        return Err(Error::Contract("entry vertex must be in 0..6"));
    }
    match passage(w.0, entry) {
        Some((word, exit, scatterings)) => Ok(Transition {
            word: HexWord(word),
            exit,
            scatterings,
        }),
        None => Err(Error::Internal("hexagon passage did not terminate")),
    }
}

/// Words reachable from all-right by passages and dihedral images, as a mask
/// over the 64 words.
const fn admissible_mask() -> u64 {
    let mut mask: u64 = 1 << ALL_RIGHT;
    loop {
        let before = mask;
        let mut w = 0;
        while w < 64 {
            if mask >> w & 1 == 1 {
                let mut g = 0;
                while g < 12 {
                    mask |= 1 << image_bits(w as u8, g);
                    g += 1;
                }
                let mut e = 0;
                while e < 6 {
                    if let Some((out, _, _)) = passage(w as u8, e) {
                        mask |= 1 << out;
                    }
                    e += 1;
                }
            }
            w += 1;
        }
        if mask == before {
            return mask;
        }
    }
}

const ADMISSIBLE: u64 = admissible_mask();

/// Which side of the transition graph a word falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    /// Contains the all-right hexagon.
    Admissible,
    NonAdmissible,
}

pub fn component_of(w: HexWord) -> Component {
    if ADMISSIBLE >> w.0 & 1 == 1 {
        Component::Admissible
    } else {
        Component::NonAdmissible
    }
}

/// Class-level transition graph over the 13 classes.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    nodes: [ClassId; 13],
    edges: Vec<(ClassId, ClassId, usize)>,
    components: Vec<Vec<ClassId>>,
}

impl TransitionGraph {
    pub fn nodes(&self) -> &[ClassId] {
        &self.nodes
    }

    /// `(from, to, entry)` for each of the 78 simulated entries, with
    /// `entry` counted on the canonical word.
    pub fn edges(&self) -> &[(ClassId, ClassId, usize)] {
        &self.edges
    }

    /// Weak components, each sorted, the one containing all-right first.
    pub fn components(&self) -> &[Vec<ClassId>] {
        &self.components
    }

    pub fn component_sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn admissible_classes(&self) -> &[ClassId] {
        &self.components[0]
    }

    pub fn successors(&self, c: ClassId) -> Vec<ClassId> {
        let mut v: Vec<ClassId> = self
            .edges
            .iter()
            .filter(|e| e.0 == c)
            .map(|e| e.1)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Whether `a → b` implies `b → a` at class level.
    pub fn is_symmetric(&self) -> bool {
        self.edges
            .iter()
            .all(|&(a, b, _)| self.edges.iter().any(|&(x, y, _)| x == b && y == a))
    }
}

/// Simulate all 78 class entries and collapse them into the class graph.
///
/// The word-level transitions are checked first: rotating a word and its
/// entry must rotate the result, and every word of a class must reach the
/// same set of classes. Either failing is reported as an internal error.
pub fn build_transition_graph() -> Result<TransitionGraph> {
    // Rotation equivariance per entry.
    for w in HexWord::all() {
        for e in 0..6 {
            let t = hexagon_transition(w, e)?;
            for r in 0..6 {
                let tr = hexagon_transition(w.rotated(r), (e + 6 - r) % 6)?;
                if tr.word != t.word.rotated(r) {
                    return Err(Error::Internal("passage is not rotation equivariant"));
                }
            }
        }
    }
    // Reflections reverse chirality, so they only hold on successor sets.
    let out_set = |w: HexWord| -> Result<u16> {
        let mut set = 0u16;
        for e in 0..6 {
            set |= 1 << (ClassId::of(hexagon_transition(w, e)?.word).label - 1);
        }
        Ok(set)
    };
    for w in HexWord::all() {
        if out_set(w)? != out_set(w.canonical())? {
            return Err(Error::Internal(
                "class successors depend on the representative",
            ));
        }
    }

    let nodes = ClassId::all();
    let mut edges = Vec::with_capacity(78);
    for &c in &nodes {
        for e in 0..6 {
            let t = hexagon_transition(c.canonical, e)?;
            edges.push((c, ClassId::of(t.word), e));
        }
    }

    let mut parent: [usize; 13] = core::array::from_fn(|i| i);
    fn find(parent: &mut [usize; 13], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b, _) in &edges {
        let ra = find(&mut parent, a.label as usize - 1);
        let rb = find(&mut parent, b.label as usize - 1);
        parent[ra] = rb;
    }
    let right_root = find(
        &mut parent,
        ClassId::of(HexWord::ALL_RIGHT).label as usize - 1,
    );
    let mut roots: Vec<usize> = (0..13).map(|i| find(&mut parent, i)).collect();
    roots.sort();
    roots.dedup();
    roots.sort_by_key(|&r| r != right_root);
    let components = roots
        .into_iter()
        .map(|r| {
            nodes
                .iter()
                .copied()
                .filter(|c| find(&mut parent, c.label as usize - 1) == r)
                .collect()
        })
        .collect();

    Ok(TransitionGraph {
        nodes,
        edges,
        components,
    })
}

/// Whether every hexagon of `region` carries an admissible word under `c`.
pub fn is_admissible(c: &Configuration, region: &[HexId]) -> Result<bool> {
    if region.is_empty() {
        return Err(Error::Contract("admissibility needs a nonempty region"));
    }
    Ok(region
        .iter()
        .all(|&h| component_of(c.hexagon_word(h)) == Component::Admissible))
}

/// Orbit count of the 64 words under the dihedral group, by the
/// cycle-counting formula.
pub fn burnside_orbit_count() -> usize {
    let mut total = 0;
    for g in 0..12 {
        // Permutation of vertex slots induced by image g.
        let perm: [usize; 6] =
            core::array::from_fn(|i| image_bits(1 << i, g).trailing_zeros() as usize);
        let mut seen = [false; 6];
        let mut cycles = 0;
        for start in 0..6 {
            if !seen[start] {
                cycles += 1;
                let mut j = start;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        total += 1usize << cycles;
    }
    total / 12
}
