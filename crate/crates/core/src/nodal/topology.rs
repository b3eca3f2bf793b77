use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::grid::{sample, FieldRef, SampledGrid, Surface, MAX_COLS};
use super::tree::{rooted_code, unrooted_code};
use super::unionfind::UnionFind;
use crate::error::{Error, Result};

/// Identifier of a grid edge. Horizontal edges `(i,j)-(i,j+1)` come first,
/// then vertical edges `(i,j)-(i+1,j)`.
pub type EdgeId = u32;

/// Sign-component labels of the grid vertices.
#[derive(Debug, Clone)]
pub struct DomainLabels {
    /// Domain of each vertex, `u32::MAX` for exact zeros.
    pub label: Vec<u32>,
    /// Sign of each domain, `+1` or `-1`.
    pub signs: Vec<i8>,
}

impl DomainLabels {
    pub fn count(&self) -> usize {
        self.signs.len()
    }

    pub fn of(&self, v: usize) -> Option<usize> {
        let l = self.label[v];
        (l != u32::MAX).then_some(l as usize)
    }
}

/// Relative size below which a saddle value counts as an exact crossing.
const SADDLE_TOL: f64 = 1e-9;

/// Whether the bilinear interpolant of a saddle cell connects corners 0 and
/// 2 (corners listed cyclically). `None` when the saddle value vanishes to
/// rounding, i.e. the nodal lines really cross inside the cell.
#[inline]
pub(crate) fn saddle_joins_02(a: f64, b: f64, c: f64, d: f64) -> Option<bool> {
    let denom = a + c - b - d;
    let s = (a * c - b * d) / denom;
    if denom == 0.0 || s.abs() <= SADDLE_TOL * (a.abs() + b.abs() + c.abs() + d.abs()) {
        return None;
    }
    Some((s > 0.0) == (a > 0.0))
}

/// Label same-sign components with 4-adjacency, azimuthal wrap and pole
/// identification. Saddle cells join the diagonal chosen by the bilinear
/// interpolant.
pub fn label_domains(grid: &SampledGrid) -> DomainLabels {
    let (rows, cols) = (grid.rows, grid.cols);
    let n = rows * cols;
    let mut uf = UnionFind::new(n);
    let sign = |v: usize| -> i8 {
        if grid.zero[v] {
            0
        } else if grid.values[v] > 0.0 {
            1
        } else {
            -1
        }
    };
    for i in 0..rows {
        for j in 0..cols {
            let v = grid.idx(i, j);
            let s = sign(v);
            if s == 0 {
                continue;
            }
            if grid.collapsed(i) {
                if j > 0 {
                    uf.union(v, grid.idx(i, 0));
                }
            } else {
                let right = grid.idx(i, j + 1);
                if sign(right) == s {
                    uf.union(v, right);
                }
            }
            if i + 1 < rows {
                let down = grid.idx(i + 1, j);
                if sign(down) == s {
                    uf.union(v, down);
                }
            }
        }
    }
    for i in 0..rows - 1 {
        for j in 0..cols {
            let c = [grid.idx(i, j), grid.idx(i, j + 1), grid.idx(i + 1, j + 1), grid.idx(i + 1, j)];
            let s: Vec<i8> = c.iter().map(|&v| sign(v)).collect();
            if s.contains(&0) || !(s[0] == s[2] && s[1] == s[3] && s[0] != s[1]) {
                continue;
            }
            let vals = c.map(|v| grid.values[v]);
            match saddle_joins_02(vals[0], vals[1], vals[2], vals[3]) {
                Some(true) => {
                    uf.union(c[0], c[2]);
                }
                Some(false) => {
                    uf.union(c[1], c[3]);
                }
                None => {}
            }
        }
    }
    let mut label = vec![u32::MAX; n];
    let mut signs = Vec::new();
    let mut root_label: HashMap<usize, u32> = HashMap::new();
    for v in 0..n {
        let s = sign(v);
        if s == 0 {
            continue;
        }
        let r = uf.find(v);
        let l = *root_label.entry(r).or_insert_with(|| {
            signs.push(s);
            (signs.len() - 1) as u32
        });
        label[v] = l;
    }
    DomainLabels { label, signs }
}

/// Number of nodal domains and their signs.
pub fn count_domains(grid: &SampledGrid) -> (usize, Vec<i8>) {
    let d = label_domains(grid);
    (d.count(), d.signs)
}

/// One traced nodal curve: the crossing edges it passes through.
#[derive(Debug, Clone)]
pub struct Curve {
    pub edges: Vec<EdgeId>,
    pub closed: bool,
}

/// Marching-squares output: curves and the raw segments between edges.
#[derive(Debug, Clone)]
pub struct Curves {
    pub curves: Vec<Curve>,
    pub segments: Vec<(EdgeId, EdgeId)>,
    /// Curve index of every crossing edge.
    pub edge_curve: HashMap<EdgeId, u32>,
}

impl Curves {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn closed_count(&self) -> usize {
        self.curves.iter().filter(|c| c.closed).count()
    }
}

#[inline]
pub(crate) fn h_edge(grid: &SampledGrid, i: usize, j: usize) -> EdgeId {
    (i * grid.cols + j % grid.cols) as EdgeId
}

#[inline]
pub(crate) fn v_edge(grid: &SampledGrid, i: usize, j: usize) -> EdgeId {
    (grid.rows * grid.cols + i * grid.cols + j % grid.cols) as EdgeId
}

/// Endpoint vertices of an edge.
pub(crate) fn edge_vertices(grid: &SampledGrid, e: EdgeId) -> (usize, usize) {
    let e = e as usize;
    let hn = grid.rows * grid.cols;
    if e < hn {
        let (i, j) = (e / grid.cols, e % grid.cols);
        (grid.idx(i, j), grid.idx(i, j + 1))
    } else {
        let e = e - hn;
        let (i, j) = (e / grid.cols, e % grid.cols);
        (grid.idx(i, j), grid.idx(i + 1, j))
    }
}

/// Fractional grid position `(i, j)` of the zero crossing on an edge.
pub(crate) fn edge_crossing(grid: &SampledGrid, e: EdgeId) -> (f64, f64) {
    let (a, b) = edge_vertices(grid, e);
    let (va, vb) = (grid.values[a], grid.values[b]);
    let t = if va == vb { 0.5 } else { (va / (va - vb)).clamp(0.0, 1.0) };
    let (ia, ja) = ((a / grid.cols) as f64, (a % grid.cols) as f64);
    let hn = grid.rows * grid.cols;
    if (e as usize) < hn {
        (ia, ja + t)
    } else {
        (ia + t, ja)
    }
}

/// Trace nodal curves by marching squares with bilinear saddle resolution.
pub fn trace_curves(grid: &SampledGrid) -> Curves {
    let (rows, cols) = (grid.rows, grid.cols);
    let mut segments = Vec::new();
    let mut crossings = Vec::new();
    for i in 0..rows - 1 {
        for j in 0..cols {
            let v = [grid.idx(i, j), grid.idx(i, j + 1), grid.idx(i + 1, j + 1), grid.idx(i + 1, j)];
            let p = v.map(|x| grid.pos(x));
            let e = [h_edge(grid, i, j), v_edge(grid, i, j + 1), h_edge(grid, i + 1, j), v_edge(grid, i, j)];
            let cross = [p[0] != p[1], p[1] != p[2], p[3] != p[2], p[0] != p[3]];
            let k = cross.iter().filter(|&&c| c).count();
            if k == 2 {
                let mut it = (0..4).filter(|&q| cross[q]);
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                segments.push((e[a], e[b]));
            } else if k == 4 {
                let val = |q: usize| {
                    let x = grid.values[v[q]];
                    if grid.zero[v[q]] {
                        f64::MIN_POSITIVE
                    } else {
                        x
                    }
                };
                let joined = saddle_joins_02(val(0), val(1), val(2), val(3));
                if joined == Some(false) {
                    segments.push((e[3], e[0]));
                    segments.push((e[1], e[2]));
                } else {
                    segments.push((e[0], e[1]));
                    segments.push((e[2], e[3]));
                    if joined.is_none() {
                        crossings.push((e[1], e[2]));
                    }
                }
            }
        }
    }
    let mut index: HashMap<EdgeId, usize> = HashMap::new();
    let mut edges: Vec<EdgeId> = Vec::new();
    let mut degree: Vec<u8> = Vec::new();
    let mut id = |e: EdgeId, edges: &mut Vec<EdgeId>, degree: &mut Vec<u8>| -> usize {
        *index.entry(e).or_insert_with(|| {
            edges.push(e);
            degree.push(0);
            edges.len() - 1
        })
    };
    let mut pairs = Vec::with_capacity(segments.len());
    for &(a, b) in &segments {
        let ia = id(a, &mut edges, &mut degree);
        let ib = id(b, &mut edges, &mut degree);
        degree[ia] += 1;
        degree[ib] += 1;
        pairs.push((ia, ib));
    }
    let mut uf = UnionFind::new(edges.len());
    for &(a, b) in &pairs {
        uf.union(a, b);
    }
    for &(a, b) in &crossings {
        uf.union(index[&a], index[&b]);
    }
    let mut comp: BTreeMap<usize, usize> = BTreeMap::new();
    let mut curves: Vec<Curve> = Vec::new();
    let mut edge_curve = HashMap::with_capacity(edges.len());
    for (k, &e) in edges.iter().enumerate() {
        let r = uf.find(k);
        let c = *comp.entry(r).or_insert_with(|| {
            curves.push(Curve { edges: Vec::new(), closed: true });
            curves.len() - 1
        });
        curves[c].edges.push(e);
        if degree[k] != 2 {
            curves[c].closed = false;
        }
        edge_curve.insert(e, c as u32);
    }
    Curves { curves, segments, edge_curve }
}

/// Number of nodal curves. On the sphere every curve must close and the
/// count must equal `domains - 1`.
pub fn count_components(grid: &SampledGrid) -> Result<usize> {
    let curves = trace_curves(grid);
    if grid.is_sphere() {
        check_sphere_curves(grid, &curves, &label_domains(grid))?;
    }
    Ok(curves.len())
}

fn check_sphere_curves(grid: &SampledGrid, curves: &Curves, domains: &DomainLabels) -> Result<()> {
    if curves.curves.iter().any(|c| !c.closed) {
        return Err(Error::Extraction("open chain on the sphere".into()));
    }
    if grid.zero_vertices() == 0 && domains.count() != curves.len() + 1 {
        return Err(Error::Extraction(format!(
            "{} domains but {} curves on the sphere",
            domains.count(),
            curves.len()
        )));
    }
    Ok(())
}

/// Pair of domains separated by a curve.
fn curve_sides(grid: &SampledGrid, curve: &Curve, domains: &DomainLabels) -> Option<(usize, usize)> {
    curve.edges.iter().find_map(|&e| {
        let (a, b) = edge_vertices(grid, e);
        match (domains.of(a), domains.of(b)) {
            (Some(x), Some(y)) if x != y => Some((x, y)),
            _ => None,
        }
    })
}

/// Canonical nesting structure.
///
/// Sphere: unrooted region-adjacency tree (domains as nodes, curves as
/// edges). Disc: rooted tree of closed curves, rooted at the merged region
/// touching the boundary.
pub fn nesting_forest(grid: &SampledGrid, curves: &Curves, domains: &DomainLabels) -> Result<String> {
    match grid.surface {
        Surface::Sphere => {
            let mut adj = vec![Vec::new(); domains.count()];
            for c in &curves.curves {
                let (a, b) = curve_sides(grid, c, domains)
                    .ok_or_else(|| Error::Extraction("curve without two adjacent domains".into()))?;
                adj[a].push(b);
                adj[b].push(a);
            }
            unrooted_code(&adj).ok_or_else(|| Error::Extraction("region graph is not a tree".into()))
        }
        Surface::Disc { .. } => {
            let last = grid.rows - 1;
            let mut outer = vec![false; domains.count()];
            for j in 0..grid.cols {
                if let Some(d) = domains.of(grid.idx(last, j)) {
                    outer[d] = true;
                }
            }
            // node 0 is the merged outer region
            let mut node = vec![0usize; domains.count()];
            let mut next = 1;
            for (d, &o) in outer.iter().enumerate() {
                if !o {
                    node[d] = next;
                    next += 1;
                }
            }
            let mut adj = vec![Vec::new(); next];
            for c in curves.curves.iter().filter(|c| c.closed) {
                let (a, b) = curve_sides(grid, c, domains)
                    .ok_or_else(|| Error::Extraction("curve without two adjacent domains".into()))?;
                let (a, b) = (node[a], node[b]);
                adj[a].push(b);
                adj[b].push(a);
            }
            rooted_code(&adj, 0).ok_or_else(|| Error::Extraction("closed curves do not nest".into()))
        }
    }
}

/// Match every curve with the curve through its antipodal image. Returns
/// `(odd_count, oval_pair_count)`.
pub fn antipodal_classify(grid: &SampledGrid, curves: &Curves) -> Result<(usize, usize)> {
    if !grid.is_sphere() {
        return Err(Error::Domain("antipodal classification needs the sphere".into()));
    }
    let half = grid.cols / 2;
    let hn = grid.rows * grid.cols;
    let anti = |e: EdgeId| -> EdgeId {
        let e = e as usize;
        if e < hn {
            let (i, j) = (e / grid.cols, e % grid.cols);
            h_edge(grid, grid.rows - 1 - i, j + half)
        } else {
            let (i, j) = ((e - hn) / grid.cols, (e - hn) % grid.cols);
            v_edge(grid, grid.rows - 2 - i, j + half)
        }
    };
    let mut partner = Vec::with_capacity(curves.len());
    for (ci, c) in curves.curves.iter().enumerate() {
        let mut votes: BTreeMap<u32, usize> = BTreeMap::new();
        for &e in &c.edges {
            if let Some(&k) = curves.edge_curve.get(&anti(e)) {
                *votes.entry(k).or_default() += 1;
            }
        }
        let best = votes
            .into_iter()
            .max_by_key(|&(k, n)| (n, std::cmp::Reverse(k)))
            .map(|(k, _)| k as usize)
            .ok_or_else(|| Error::Extraction(format!("curve {ci} has no antipodal image")))?;
        partner.push(best);
    }
    let mut odd = 0;
    let mut pairs = 0;
    for (c, &p) in partner.iter().enumerate() {
        if partner[p] != c {
            return Err(Error::Extraction(format!("curve {c} maps to {p} but not back")));
        }
        if p == c {
            odd += 1;
        } else if c < p {
            pairs += 1;
        }
    }
    Ok((odd, pairs))
}

/// Counts and structure extracted from one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalTopology {
    pub surface: Surface,
    /// `[rows, cols]` of the grid the topology was read from.
    pub resolution: [usize; 2],
    pub components: usize,
    pub open_arcs: usize,
    pub domains: usize,
    pub domain_signs: Vec<i8>,
    pub nesting: String,
    pub odd_count: Option<usize>,
    pub pair_count: Option<usize>,
    pub stable: bool,
    pub indeterminate_cells: usize,
    pub zero_vertices: usize,
}

impl NodalTopology {
    /// Equality of topology as a pair (surface, nodal set).
    pub fn equivalent(&self, other: &NodalTopology) -> bool {
        self.components == other.components
            && self.domains == other.domains
            && self.nesting == other.nesting
    }

    /// [`equivalent`](Self::equivalent) plus equal antipodal classification.
    pub fn equivalent_antipodal(&self, other: &NodalTopology) -> bool {
        self.equivalent(other)
            && self.odd_count == other.odd_count
            && self.pair_count == other.pair_count
    }

    /// Sphere identity `domains = components + 1`.
    pub fn euler_ok(&self) -> bool {
        self.domains == self.components + 1
    }
}

/// Full extraction on one grid.
pub fn extract_topology(grid: &SampledGrid) -> Result<NodalTopology> {
    let domains = label_domains(grid);
    let curves = trace_curves(grid);
    if grid.is_sphere() {
        check_sphere_curves(grid, &curves, &domains)?;
    }
    let nesting = nesting_forest(grid, &curves, &domains)?;
    let (odd_count, pair_count) = if grid.is_sphere() {
        let (o, p) = antipodal_classify(grid, &curves)?;
        (Some(o), Some(p))
    } else {
        (None, None)
    };
    Ok(NodalTopology {
        surface: grid.surface,
        resolution: [grid.rows, grid.cols],
        components: curves.len(),
        open_arcs: curves.len() - curves.closed_count(),
        domains: domains.count(),
        domain_signs: domains.signs.clone(),
        nesting,
        odd_count,
        pair_count,
        stable: false,
        indeterminate_cells: grid.indeterminate_cells,
        zero_vertices: grid.zero_vertices(),
    })
}

/// Resolution schedule for [`refine_until_stable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefineOptions {
    pub start_cols: usize,
    pub max_cols: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { start_cols: 128, max_cols: MAX_COLS }
    }
}

/// Topology from the finest level examined, with its grid.
pub struct Refined {
    pub topology: NodalTopology,
    pub grid: SampledGrid,
}

/// Double the resolution until two consecutive levels agree on components,
/// domains, nesting and antipodal classes with no indeterminate cells. On
/// success `stable` is set; otherwise the finest level is returned with
/// `stable == false`.
pub fn refine_until_stable(field: FieldRef<'_>, options: RefineOptions) -> Result<Refined> {
    let mut cols = options.start_cols;
    let mut previous: Option<NodalTopology> = None;
    let mut last: Option<Refined> = None;
    let mut last_err = None;
    while cols <= options.max_cols.min(MAX_COLS) {
        let grid = sample(field, cols)?;
        match extract_topology(&grid) {
            Ok(mut topo) => {
                let clean = topo.indeterminate_cells == 0;
                if let Some(prev) = &previous {
                    if clean && prev.equivalent_antipodal(&topo) {
                        topo.stable = true;
                        return Ok(Refined { topology: topo, grid });
                    }
                }
                previous = clean.then(|| topo.clone());
                last = Some(Refined { topology: topo, grid });
            }
            Err(e) => {
                previous = None;
                last_err = Some(e);
            }
        }
        cols *= 2;
    }
    last.ok_or_else(|| last_err.unwrap_or_else(|| Error::Domain("empty resolution schedule".into())))
}
