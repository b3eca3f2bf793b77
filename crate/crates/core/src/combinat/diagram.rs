use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::nodal::tree::{adjacency, unrooted_code};
use crate::nodal::UnionFind;

/// Non-crossing perfect matching of the points `0..2n` placed
/// counterclockwise on a circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ChordDiagram {
    partner: Vec<usize>,
}

impl TryFrom<Vec<usize>> for ChordDiagram {
    type Error = Error;

    fn try_from(partner: Vec<usize>) -> Result<Self> {
        Self::new(partner)
    }
}

impl From<ChordDiagram> for Vec<usize> {
    fn from(d: ChordDiagram) -> Self {
        d.partner
    }
}

fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    inside(b.0) != inside(b.1)
}

impl ChordDiagram {
    /// From the partner map; rejects non-involutions and crossings.
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        let len = partner.len();
        if len == 0 || len % 2 == 1 {
            return Err(Error::Invariant(format!("matching needs an even positive number of points, got {len}")));
        }
        for (i, &p) in partner.iter().enumerate() {
            if p >= len || p == i || partner[p] != i {
                return Err(Error::Invariant(format!("point {i} is not properly matched")));
            }
        }
        let d = Self { partner };
        let chords = d.chords();
        for (x, &a) in chords.iter().enumerate() {
            if let Some(&b) = chords[x + 1..].iter().find(|&&b| interleave(a, b)) {
                return Err(Error::Invariant(format!("chords {}-{} and {}-{} cross", a.0, a.1, b.0, b.1)));
            }
        }
        Ok(d)
    }

    pub fn from_chords(n: usize, chords: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; 2 * n];
        for &(a, b) in chords {
            if a >= 2 * n || b >= 2 * n || partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::Invariant(format!("bad chord {a}-{b}")));
            }
            partner[a] = b;
            partner[b] = a;
        }
        Self::new(partner)
    }

    /// Chords `(0,1), (2,3), …`.
    pub fn adjacent(n: usize) -> Result<Self> {
        Self::from_chords(n, &(0..n).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn points(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i % self.partner.len()]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Chords `(a, b)` with `a < b`, sorted.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        (0..self.points()).filter(|&i| i < self.partner[i]).map(|i| (i, self.partner[i])).collect()
    }

    /// Relabel point `i` as `i + shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let len = self.points();
        let mut partner = vec![0; len];
        for i in 0..len {
            partner[(i + shift) % len] = (self.partner[i] + shift) % len;
        }
        Self { partner }
    }

    fn offsets(&self) -> Vec<usize> {
        let len = self.points();
        (0..len).map(|i| (self.partner[i] + len - i) % len).collect()
    }

    /// Rotation whose offset sequence `partner(i) - i` is lexicographically
    /// least; equal for diagrams differing by a rotation.
    pub fn canonical(&self) -> Self {
        let len = self.points();
        (0..len)
            .map(|s| self.rotated(s))
            .min_by(|a, b| a.offsets().cmp(&b.offsets()))
            .expect("nonempty")
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.points() == other.points() && self.canonical() == other.canonical()
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chords().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ChordDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chords = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part.split_once('-').ok_or_else(|| Error::Parse(format!("expected i-j, got {part:?}")))?;
            let a: usize = a.trim().parse().map_err(|_| Error::Parse(format!("bad point in {part:?}")))?;
            let b: usize = b.trim().parse().map_err(|_| Error::Parse(format!("bad point in {part:?}")))?;
            chords.push((a, b));
        }
        if chords.is_empty() {
            return Err(Error::Parse("empty diagram".into()));
        }
        Self::from_chords(chords.len(), &chords)
    }
}

/// All non-crossing perfect matchings of `2n` points, `1 <= n <= 8`.
pub fn enumerate_diagrams(n: usize) -> Result<Vec<ChordDiagram>> {
    if !(1..=8).contains(&n) {
        return domain(format!("enumeration needs 1 <= n <= 8, got {n}"));
    }
    fn rec(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
        if lo >= hi {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in (lo + 1..hi).step_by(2) {
            for inner in rec(lo + 1, p) {
                for outer in rec(p + 1, hi) {
                    let mut c = vec![(lo, p)];
                    c.extend(&inner);
                    c.extend(&outer);
                    out.push(c);
                }
            }
        }
        out
    }
    rec(0, 2 * n).into_iter().map(|c| ChordDiagram::from_chords(n, &c)).collect()
}

/// Curves and regions obtained by gluing a diagram in the upper hemisphere
/// to its antipodal image in the lower one along the equator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedCurveSystem {
    pub components: usize,
    /// Chords traversed by each component, upper and lower together.
    pub lengths: Vec<usize>,
    pub regions: usize,
    /// Unrooted code of the region adjacency tree.
    pub region_tree: String,
}

/// Point `q` of the lower copy is matched to `D(q - n) + n`.
pub fn antipodal_image(d: &ChordDiagram) -> ChordDiagram {
    d.rotated(d.n())
}

/// Faces of a diagram as sets of boundary arcs; arc `a` runs from point
/// `a` to `a + 1`. Returns the face index of each arc.
fn arc_faces(d: &ChordDiagram) -> (usize, Vec<usize>) {
    let len = d.points();
    let mut face = vec![usize::MAX; len];
    let mut count = 0;
    for start in 0..len {
        if face[start] != usize::MAX {
            continue;
        }
        let mut a = start;
        while face[a] == usize::MAX {
            face[a] = count;
            a = d.partner((a + 1) % len);
        }
        count += 1;
    }
    (count, face)
}

pub fn glue_antipodal(d: &ChordDiagram) -> GluedCurveSystem {
    let lower = antipodal_image(d);
    let len = d.points();

    // curve through point p: alternate upper and lower chords
    let mut curve_of = vec![usize::MAX; len];
    let mut lengths = Vec::new();
    for start in 0..len {
        if curve_of[start] != usize::MAX {
            continue;
        }
        let c = lengths.len();
        let mut p = start;
        let mut chords = 0;
        loop {
            curve_of[p] = c;
            let q = d.partner(p);
            curve_of[q] = c;
            let r = lower.partner(q);
            chords += 2;
            if r == start {
                break;
            }
            p = r;
        }
        lengths.push(chords);
    }

    // regions: upper faces glued to lower faces along the arcs they share
    let (fu, upper_face) = arc_faces(d);
    let (fl, lower_face) = arc_faces(&lower);
    let mut uf = UnionFind::new(fu + fl);
    for a in 0..len {
        uf.union(upper_face[a], fu + lower_face[a]);
    }
    let mut region_id = std::collections::HashMap::new();
    let mut region_of_arc = vec![0; len];
    for a in 0..len {
        let r = uf.find(upper_face[a]);
        let next = region_id.len();
        region_of_arc[a] = *region_id.entry(r).or_insert(next);
    }
    let regions = region_id.len();

    // each curve separates the regions on the two sides of any of its chords
    let mut edges = Vec::with_capacity(lengths.len());
    for c in 0..lengths.len() {
        let p = (0..len).find(|&p| curve_of[p] == c).expect("curve has a point");
        let q = d.partner(p);
        edges.push((region_of_arc[(p + len - 1) % len], region_of_arc[(q + len - 1) % len]));
    }
    let region_tree = unrooted_code(&adjacency(regions, &edges)).unwrap_or_default();
    GluedCurveSystem { components: lengths.len(), lengths, regions, region_tree }
}
