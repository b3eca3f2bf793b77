use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use super::diagram::{enumerate_diagrams, ChordDiagram};
use crate::error::{Error, Result};

/// Edge key `(min, max)`.
pub type EdgeKey = (usize, usize);

fn key(a: usize, b: usize) -> EdgeKey {
    (a.min(b), a.max(b))
}

/// A forest properly embedded in the closed disc: leaves on the boundary
/// circle at positions `0..2n` (counterclockwise), everything else inside.
///
/// Text form, one tree per `;`-separated part: `<parens> @ <positions>`.
/// The outermost pair is a leaf (the root) with a single child; children are
/// listed counterclockwise after the parent; the positions belong to the
/// leaves in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedForest {
    /// Neighbours of each vertex in counterclockwise order.
    rotation: Vec<Vec<usize>>,
    position: Vec<Option<usize>>,
    leaf_at: Vec<usize>,
    roots: Vec<usize>,
    tree_of: Vec<usize>,
}

struct Builder {
    rotation: Vec<Vec<usize>>,
    leaves: Vec<usize>,
}

impl Builder {
    /// Parse `( … )` at `s[i]`, returning the vertex and the index after it.
    fn parse(&mut self, s: &[u8], mut i: usize, parent: Option<usize>) -> Result<(usize, usize)> {
        if s.get(i) != Some(&b'(') {
            return Err(Error::Parse(format!("expected '(' at {i}")));
        }
        let v = self.rotation.len();
        self.rotation.push(parent.into_iter().collect());
        i += 1;
        let mut children = 0;
        while s.get(i) == Some(&b'(') {
            let (c, next) = self.parse(s, i, Some(v))?;
            self.rotation[v].push(c);
            children += 1;
            i = next;
        }
        if s.get(i) != Some(&b')') {
            return Err(Error::Parse(format!("expected ')' at {i}")));
        }
        if self.rotation[v].len() == 1 && (parent.is_some() || children == 1) {
            self.leaves.push(v);
        }
        Ok((v, i + 1))
    }
}

impl EmbeddedForest {
    fn from_parts(rotation: Vec<Vec<usize>>, roots: Vec<usize>, leaf_pos: Vec<(usize, usize)>) -> Result<Self> {
        let nv = rotation.len();
        let mut position = vec![None; nv];
        let points = leaf_pos.len();
        if points == 0 || points % 2 == 1 {
            return Err(Error::Invariant(format!("forest needs an even positive number of leaves, got {points}")));
        }
        let mut leaf_at = vec![usize::MAX; points];
        for &(v, p) in &leaf_pos {
            if p >= points || leaf_at[p] != usize::MAX {
                return Err(Error::Invariant(format!("leaf positions must be a permutation of 0..{points}")));
            }
            leaf_at[p] = v;
            position[v] = Some(p);
        }
        let mut tree_of = vec![usize::MAX; nv];
        for (t, &r) in roots.iter().enumerate() {
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                if tree_of[v] != usize::MAX {
                    continue;
                }
                tree_of[v] = t;
                stack.extend(rotation[v].iter().copied());
            }
        }
        let f = Self { rotation, position, leaf_at, roots, tree_of };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        for (v, nb) in self.rotation.iter().enumerate() {
            let leaf = self.position[v].is_some();
            if leaf != (nb.len() == 1) {
                return Err(Error::Invariant(format!("vertex {v}: leaves are exactly the degree-1 vertices")));
            }
            if !leaf && nb.len() % 2 == 1 {
                return Err(Error::Invariant(format!("internal vertex {v} has odd degree {}", nb.len())));
            }
        }
        let points = self.points();
        for t in 0..self.roots.len() {
            let pos = self.tree_positions(t);
            let descents = (0..pos.len()).filter(|&i| pos[i] > pos[(i + 1) % pos.len()]).count();
            if descents != 1 {
                return Err(Error::Invariant(format!("leaves of tree {t} are not in counterclockwise order")));
            }
        }
        // trees may not interleave around the circle
        for a in 0..self.roots.len() {
            let mut pa = self.tree_positions(a);
            pa.sort_unstable();
            let gap = |p: usize| pa.iter().filter(|&&q| q < p).count() % pa.len();
            for b in 0..self.roots.len() {
                if a == b {
                    continue;
                }
                let pb = self.tree_positions(b);
                if pb.iter().any(|&p| gap(p) != gap(pb[0])) {
                    return Err(Error::Invariant(format!("trees {a} and {b} cross")));
                }
            }
        }
        debug_assert_eq!(self.leaf_at.len(), points);
        Ok(())
    }

    /// The one-edge-per-tree forest of a chord diagram.
    pub fn from_diagram(d: &ChordDiagram) -> Self {
        let mut rotation = Vec::new();
        let mut roots = Vec::new();
        let mut leaves = Vec::new();
        for (a, b) in d.chords() {
            let v = rotation.len();
            rotation.push(vec![v + 1]);
            rotation.push(vec![v]);
            roots.push(v);
            leaves.push((v, a));
            leaves.push((v + 1, b));
        }
        Self::from_parts(rotation, roots, leaves).expect("diagram forest is valid")
    }

    pub fn points(&self) -> usize {
        self.leaf_at.len()
    }

    pub fn n(&self) -> usize {
        self.points() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn tree_count(&self) -> usize {
        self.roots.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.position[v]
    }

    pub fn leaf_at(&self, p: usize) -> usize {
        self.leaf_at[p % self.points()]
    }

    pub fn tree_of(&self, v: usize) -> usize {
        self.tree_of[v]
    }

    /// Edges of tree `t` as `(parent, child)` in preorder from its root.
    pub fn tree_edges(&self, t: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.walk(self.roots[t], None, &mut |p, c| out.push((p, c)));
        out
    }

    pub fn edges(&self) -> Vec<EdgeKey> {
        let mut e: Vec<EdgeKey> =
            (0..self.tree_count()).flat_map(|t| self.tree_edges(t)).map(|(a, b)| key(a, b)).collect();
        e.sort_unstable();
        e
    }

    /// Children of `v` counterclockwise after `parent`.
    pub fn children(&self, v: usize, parent: Option<usize>) -> Vec<usize> {
        let nb = &self.rotation[v];
        match parent {
            None => nb.clone(),
            Some(p) => {
                let i = nb.iter().position(|&x| x == p).expect("parent is a neighbour");
                (1..nb.len()).map(|k| nb[(i + k) % nb.len()]).collect()
            }
        }
    }

    fn walk(&self, v: usize, parent: Option<usize>, f: &mut impl FnMut(usize, usize)) {
        for c in self.children(v, parent) {
            f(v, c);
            self.walk(c, Some(v), f);
        }
    }

    fn tree_positions(&self, t: usize) -> Vec<usize> {
        let mut out = vec![self.position[self.roots[t]].expect("root is a leaf")];
        self.walk(self.roots[t], None, &mut |_, c| {
            if let Some(p) = self.position[c] {
                out.push(p);
            }
        });
        out
    }

    /// Replace the leaf `leaf` by a vertex with `2k + 1` new leaf edges
    /// (`branches = 2k + 1`), shifting later positions.
    pub fn split_leaf(&self, leaf: usize, branches: usize) -> Result<Self> {
        let q = self.position[leaf].ok_or_else(|| Error::Invariant(format!("vertex {leaf} is not a leaf")))?;
        if branches % 2 == 0 {
            return Err(Error::Invariant("a split needs an odd number of new edges".into()));
        }
        let mut rotation = self.rotation.clone();
        let first = rotation.len();
        // the old leaf becomes the inner vertex; new leaves follow counterclockwise
        for b in 0..branches {
            rotation[leaf].push(first + b);
            rotation.push(vec![leaf]);
        }
        let shift = |p: usize| if p > q { p + branches - 1 } else { p };
        let mut leaves: Vec<(usize, usize)> = Vec::new();
        for (v, p) in self.position.iter().enumerate() {
            if let Some(p) = *p {
                if v != leaf {
                    leaves.push((v, shift(p)));
                }
            }
        }
        for b in 0..branches {
            leaves.push((first + b, q + b));
        }
        let mut roots = self.roots.clone();
        if let Some(t) = roots.iter().position(|&r| r == leaf) {
            // the root must stay a leaf: re-root at the first new leaf, which
            // keeps the tree's first position
            roots[t] = first;
        }
        Self::from_parts(rotation, roots, leaves)
    }

    fn encode(&self, t: usize) -> (String, Vec<usize>) {
        fn rec(f: &EmbeddedForest, v: usize, parent: Option<usize>, s: &mut String, pos: &mut Vec<usize>) {
            s.push('(');
            if let Some(p) = f.position[v] {
                pos.push(p);
            }
            for c in f.children(v, parent) {
                rec(f, c, Some(v), s, pos);
            }
            s.push(')');
        }
        let mut s = String::new();
        let mut pos = Vec::new();
        rec(self, self.roots[t], None, &mut s, &mut pos);
        (s, pos)
    }
}

impl fmt::Display for EmbeddedForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<usize> = (0..self.tree_count()).collect();
        order.sort_by_key(|&t| self.position[self.roots[t]]);
        let parts: Vec<String> = order
            .into_iter()
            .map(|t| {
                let (s, pos) = self.encode(t);
                let pos: Vec<String> = pos.iter().map(|p| p.to_string()).collect();
                format!("{s} @ {}", pos.join(","))
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

impl FromStr for EmbeddedForest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut b = Builder { rotation: Vec::new(), leaves: Vec::new() };
        let mut roots = Vec::new();
        let mut leaf_pos = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (tree, pos) =
                part.split_once('@').ok_or_else(|| Error::Parse(format!("expected '<parens> @ <positions>' in {part:?}")))?;
            let tree: Vec<u8> = tree.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
            let start = b.leaves.len();
            let (root, end) = b.parse(&tree, 0, None)?;
            if end != tree.len() {
                return Err(Error::Parse(format!("trailing characters in {part:?}")));
            }
            if b.rotation[root].len() != 1 {
                return Err(Error::Invariant("the root must be a leaf with exactly one child".into()));
            }
            // the root is pushed last by the recursive parser; move it first
            let root_leaf = b.leaves.pop().expect("root recorded");
            b.leaves.insert(start, root_leaf);
            let pos: Vec<usize> = pos
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad position {p:?}"))))
                .collect::<Result<_>>()?;
            if pos.len() != b.leaves.len() - start {
                return Err(Error::Parse(format!(
                    "tree has {} leaves but {} positions",
                    b.leaves.len() - start,
                    pos.len()
                )));
            }
            leaf_pos.extend(b.leaves[start..].iter().copied().zip(pos));
            roots.push(root);
        }
        if roots.is_empty() {
            return Err(Error::Parse("empty forest".into()));
        }
        Self::from_parts(b.rotation, roots, leaf_pos)
    }
}

/// Random forest: a random diagram on at most 3 chords, then leaves split
/// into 3 or 5 branches while the edge count stays within `max_edges`.
pub fn random_forest<R: rand::Rng + ?Sized>(rng: &mut R, max_edges: usize) -> EmbeddedForest {
    let n = rng.gen_range(1..=3.min(max_edges.max(1)));
    let all = enumerate_diagrams(n).expect("small n");
    let mut f = EmbeddedForest::from_diagram(&all[rng.gen_range(0..all.len())]);
    loop {
        let branches = if rng.gen_bool(0.7) { 3 } else { 5 };
        if f.edges().len() + branches > max_edges || rng.gen_bool(0.15) {
            return f;
        }
        let leaf = f.leaf_at(rng.gen_range(0..f.points()));
        f = f.split_leaf(leaf, branches).expect("leaf split with odd branches");
    }
}

/// A boundary cycle of a face: directed edge traversals and boundary arcs
/// (arc `q` runs from position `q` to `q + 1`), face on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<(usize, usize)>,
    pub arcs: Vec<usize>,
}

impl Face {
    /// Number of boundary components, one per arc at infinity.
    pub fn degree(&self) -> usize {
        self.arcs.len()
    }
}

pub fn faces(f: &EmbeddedForest) -> Vec<Face> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let darts: Vec<(usize, usize)> = f.edges().iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    for &start in &darts {
        if seen.contains(&start) {
            continue;
        }
        let mut face = Face { darts: Vec::new(), arcs: Vec::new() };
        let mut d = start;
        loop {
            seen.insert(d);
            face.darts.push(d);
            let (u, v) = d;
            d = match f.position[v] {
                Some(q) => {
                    face.arcs.push(q);
                    let w = f.leaf_at(q + 1);
                    (w, f.rotation[w][0])
                }
                None => {
                    let nb = &f.rotation[v];
                    let i = nb.iter().position(|&x| x == u).expect("dart endpoints adjacent");
                    (v, nb[(i + nb.len() - 1) % nb.len()])
                }
            };
            if d == start {
                break;
            }
        }
        out.push(face);
    }
    out
}

/// Edge labels as rational multiples of `π`.
pub type Labels = BTreeMap<EdgeKey, Ratio<i64>>;

/// Labels from replaying vertex insertions top-down: an edge whose reduced
/// label is `x` keeps `x/2` when its far end is a vertex, and the edges
/// after it around that vertex get `x/2`, `2 - x/2`, … (in units of `π`).
pub fn label_forest(f: &EmbeddedForest) -> Result<Labels> {
    let two = Ratio::from_integer(2);
    let mut labels = Labels::new();
    for t in 0..f.tree_count() {
        let root = f.roots[t];
        let mut stack = vec![(root, f.rotation[root][0], two)];
        while let Some((p, v, x)) = stack.pop() {
            if f.position[v].is_some() {
                labels.insert(key(p, v), x);
                continue;
            }
            let kids = f.children(v, Some(p));
            if kids.len() % 2 == 0 {
                return Err(Error::Invariant(format!("internal vertex {v} has odd degree {}", kids.len() + 1)));
            }
            let half = x / 2;
            labels.insert(key(p, v), half);
            for (i, c) in kids.into_iter().enumerate() {
                stack.push((v, c, if i % 2 == 0 { half } else { two - half }));
            }
        }
    }
    Ok(labels)
}

/// Whether every face's label sum equals `2π` times its degree.
pub fn face_sums_ok(f: &EmbeddedForest, labels: &Labels) -> bool {
    faces(f).iter().all(|face| {
        let sum: Ratio<i64> = face.darts.iter().map(|&(a, b)| labels[&key(a, b)]).sum();
        sum == Ratio::from_integer(2 * face.degree() as i64)
    })
}

/// Head vertex of every edge.
pub type Orientation = BTreeMap<EdgeKey, usize>;

/// Whether edges alternate in/out around every internal vertex.
pub fn vertex_rule_ok(f: &EmbeddedForest, o: &Orientation) -> bool {
    (0..f.vertex_count()).filter(|&v| f.position[v].is_none()).all(|v| {
        let nb = &f.rotation[v];
        (0..nb.len()).all(|i| {
            let a = o[&key(v, nb[i])] == v;
            let b = o[&key(v, nb[(i + 1) % nb.len()])] == v;
            a != b
        })
    })
}

/// Whether each face boundary is traversed consistently (all edges with or
/// all against the walk).
pub fn faces_consistent(f: &EmbeddedForest, o: &Orientation) -> bool {
    faces(f).iter().all(|face| {
        let forward = |&(a, b): &(usize, usize)| o[&key(a, b)] == b;
        let first = forward(&face.darts[0]);
        face.darts.iter().all(|d| forward(d) == first)
    })
}

/// The two orientations of tree `t` satisfying the vertex rule: the root
/// edge pointing inward, then outward.
pub fn tree_orientations(f: &EmbeddedForest, t: usize) -> [Orientation; 2] {
    let orient = |inward: bool| {
        let mut o = Orientation::new();
        let root = f.roots[t];
        let first = f.rotation[root][0];
        o.insert(key(root, first), if inward { first } else { root });
        let mut stack = vec![(root, first)];
        while let Some((p, v)) = stack.pop() {
            let into_v = o[&key(p, v)] == v;
            for (i, c) in f.children(v, Some(p)).into_iter().enumerate() {
                // position i + 1 around v counting the parent edge as 0
                let toward_v = if i % 2 == 0 { !into_v } else { into_v };
                o.insert(key(v, c), if toward_v { v } else { c });
                stack.push((v, c));
            }
        }
        o
    };
    [orient(true), orient(false)]
}

/// Orient tree 0, then each tree met across a shared face so that the face
/// boundary is consistently oriented.
pub fn orient_forest(f: &EmbeddedForest) -> Result<Orientation> {
    let trees = f.tree_count();
    let choices: Vec<[Orientation; 2]> = (0..trees).map(|t| tree_orientations(f, t)).collect();
    let all_faces = faces(f);
    let mut chosen: Vec<Option<usize>> = vec![None; trees];
    let mut o = Orientation::new();
    let mut queue = VecDeque::from([0]);
    chosen[0] = Some(0);
    o.extend(choices[0][0].clone());
    while let Some(t) = queue.pop_front() {
        for face in &all_faces {
            let Some(&(a, b)) = face.darts.iter().find(|&&(a, _)| f.tree_of[a] == t) else {
                continue;
            };
            let forward = o[&key(a, b)] == b;
            for &(c, d) in &face.darts {
                let s = f.tree_of[c];
                if chosen[s].is_some() {
                    continue;
                }
                let pick = if (choices[s][0][&key(c, d)] == d) == forward { 0 } else { 1 };
                chosen[s] = Some(pick);
                o.extend(choices[s][pick].clone());
                queue.push_back(s);
            }
        }
    }
    if chosen.iter().any(Option::is_none) {
        return Err(Error::Invariant("forest faces do not connect all trees".into()));
    }
    if !faces_consistent(f, &o) {
        return Err(Error::Invariant("face propagation produced an inconsistent orientation".into()));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn parse_round_trip() {
        let f: EmbeddedForest = "((()()())) @ 0,1,2,3".parse().unwrap();
        assert_eq!(f.points(), 4);
        assert_eq!(f.to_string(), "((()()())) @ 0,1,2,3");
        let g: EmbeddedForest = "(()) @ 0,3; (()) @ 1,2".parse().unwrap();
        assert_eq!(g.tree_count(), 2);
        assert_eq!(g.to_string(), "(()) @ 0,3; (()) @ 1,2");
        assert!("(()) @ 0,2; (()) @ 1,3".parse::<EmbeddedForest>().is_err());
        assert!("((()())) @ 0,1,2".parse::<EmbeddedForest>().is_err());
        assert!("((()()())) @ 0,2,1,3".parse::<EmbeddedForest>().is_err());
    }

    #[test]
    fn face_structure() {
        let f: EmbeddedForest = "((()()())) @ 0,1,2,3".parse().unwrap();
        let fs = faces(&f);
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|x| x.degree() == 1 && x.darts.len() == 2));
        let d = ChordDiagram::adjacent(3).unwrap();
        let g = EmbeddedForest::from_diagram(&d);
        let fs = faces(&g);
        assert_eq!(fs.len(), 2 * 3 - 3 + 1);
        assert_eq!(fs.iter().map(Face::degree).sum::<usize>(), 6);
    }

    #[test]
    fn labels_of_quoted_cases() {
        let single: EmbeddedForest = "(()) @ 0,1".parse().unwrap();
        assert_eq!(label_forest(&single).unwrap().values().copied().collect::<Vec<_>>(), vec![r(2, 1)]);
        let star: EmbeddedForest = "((()()())) @ 0,1,2,3".parse().unwrap();
        let l = label_forest(&star).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.values().all(|&x| x == r(1, 1)));
        assert!(face_sums_ok(&star, &l));
    }

    #[test]
    fn split_then_label() {
        let f = EmbeddedForest::from_diagram(&ChordDiagram::adjacent(2).unwrap());
        let g = f.split_leaf(f.leaf_at(1), 3).unwrap();
        assert_eq!(g.points(), 6);
        let h = g.split_leaf(g.leaf_at(2), 5).unwrap();
        let l = label_forest(&h).unwrap();
        assert!(face_sums_ok(&h, &l));
        assert!(l.values().any(|&x| x == r(1, 2)));
    }

    #[test]
    fn orientations() {
        let star: EmbeddedForest = "((()()())) @ 0,1,2,3".parse().unwrap();
        let [a, b] = tree_orientations(&star, 0);
        assert!(vertex_rule_ok(&star, &a) && vertex_rule_ok(&star, &b));
        assert!(a.iter().all(|(k, &h)| b[k] != h));
        let f = EmbeddedForest::from_diagram(&ChordDiagram::adjacent(3).unwrap());
        let o = orient_forest(&f).unwrap();
        assert!(faces_consistent(&f, &o));
    }
}
