//! Hyperbolic Voronoi diagrams and Delaunay complexes via bisector
//! intervals, outer-vertex detection through ideal arcs, outerplanarity by
//! combinatorial face peeling, and layer-area diagnostics.
//!
//! For each site pair the perpendicular bisector is parametrized by
//! arclength; every third site restricts the region of the bisector closest
//! to the pair to an interval (cells are convex, so intervals suffice). The
//! pair is a Delaunay edge iff the intersection of all restrictions is
//! nonempty; finite interval endpoints are Voronoi vertices, infinite ends
//! are ideal Voronoi vertices.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::hgeom::minkowski::MVec;
use crate::hgeom::{
    angle_at, dist, disk_area, halfplane_ideal_arc, perpendicular_bisector, Geodesic, HPoint,
    IdealPoint,
};

/// Interval endpoints closer than this arclength are merged; edges with
/// shorter dual intervals are treated as degenerate and dropped.
const INTERVAL_EPS: f64 = 1e-9;

/// Deterministic symbolic perturbation: site i gets an angular jitter of
/// (i+1)·1e-9 before construction, which triangulates cocircular ties.
const JITTER: f64 = 1e-9;

/// One end of a Voronoi (dual) edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualEnd {
    /// Finite end: the circumcenter with the named third site, at the given
    /// arclength parameter of the bisector.
    Vertex { third: usize, t: f64 },
    /// Unbounded end reaching the ideal boundary.
    Ideal,
}

/// The Voronoi edge dual to a Delaunay edge (u, v), u < v: the part of the
/// perpendicular bisector between `lo` and `hi` (parameters increase towards
/// the bisector's second ideal endpoint).
#[derive(Debug, Clone)]
pub struct DualEdge {
    pub geodesic: Geodesic,
    pub lo: DualEnd,
    pub hi: DualEnd,
}

impl DualEdge {
    pub fn lo_param(&self) -> Option<f64> {
        match self.lo {
            DualEnd::Vertex { t, .. } => Some(t),
            DualEnd::Ideal => None,
        }
    }

    pub fn hi_param(&self) -> Option<f64> {
        match self.hi {
            DualEnd::Vertex { t, .. } => Some(t),
            DualEnd::Ideal => None,
        }
    }

    /// A point strictly inside the Voronoi edge.
    pub fn midpoint(&self) -> HPoint {
        let t = match (self.lo_param(), self.hi_param()) {
            (Some(a), Some(b)) => (a + b) / 2.0,
            (Some(a), None) => a + 1.0,
            (None, Some(b)) => b - 1.0,
            (None, None) => 0.0,
        };
        self.geodesic.point_at(t)
    }

    /// Ideal endpoint for an unbounded end: `false` selects the `lo` side.
    pub fn ideal_endpoint(&self, hi_side: bool) -> IdealPoint {
        let (a, b) = self.geodesic.endpoints();
        if hi_side {
            b
        } else {
            a
        }
    }
}

/// Sites, Delaunay edges, Voronoi vertices (finite and ideal), the rotation
/// system, and outer-vertex flags.
#[derive(Debug, Clone)]
pub struct DelaunayComplex {
    sites: Vec<HPoint>,
    edges: Vec<(usize, usize)>,
    dual: BTreeMap<(usize, usize), DualEdge>,
    voronoi_vertices: Vec<([usize; 3], HPoint)>,
    ideal_voronoi_vertices: Vec<((usize, usize), IdealPoint)>,
    rotation: Vec<Vec<usize>>,
    outer: Vec<bool>,
}

impl DelaunayComplex {
    /// The (perturbed) sites the complex is built on.
    pub fn sites(&self) -> &[HPoint] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.dual.contains_key(&key)
    }

    pub fn dual_edge(&self, u: usize, v: usize) -> Option<&DualEdge> {
        self.dual.get(&(u.min(v), u.max(v)))
    }

    pub fn voronoi_vertices(&self) -> &[([usize; 3], HPoint)] {
        &self.voronoi_vertices
    }

    pub fn ideal_voronoi_vertices(&self) -> &[((usize, usize), IdealPoint)] {
        &self.ideal_voronoi_vertices
    }

    /// Neighbors of `s` in counterclockwise angular order around `s`.
    pub fn rotation(&self, s: usize) -> &[usize] {
        &self.rotation[s]
    }

    pub fn degree(&self, s: usize) -> usize {
        self.rotation[s].len()
    }

    pub fn is_outer(&self, s: usize) -> bool {
        self.outer[s]
    }

    pub fn outer_flags(&self) -> &[bool] {
        &self.outer
    }
}

/// Build the Delaunay complex of pairwise distinct sites.
pub fn build_delaunay(sites: &[HPoint]) -> Result<DelaunayComplex> {
    if sites.is_empty() {
        return Err(Error::InvalidInput("build_delaunay needs at least one site".into()));
    }
    for (i, p) in sites.iter().enumerate() {
        for q in &sites[i + 1..] {
            if dist(p, q) < 1e-12 {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    let sites: Vec<HPoint> = sites
        .iter()
        .enumerate()
        .map(|(i, p)| HPoint::new(p.radial(), p.angle() + (i as f64 + 1.0) * JITTER))
        .collect();
    let n = sites.len();
    let mink: Vec<MVec> = sites.iter().map(|p| p.to_minkowski()).collect();

    let mut dual: BTreeMap<(usize, usize), DualEdge> = BTreeMap::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if let Some(d) = dual_interval(&sites, &mink, u, v) {
                dual.insert((u, v), d);
            }
        }
    }

    let edges: Vec<(usize, usize)> = dual.keys().copied().collect();

    // Collect Voronoi vertices by defining triple (deduplicated).
    let mut seen: HashMap<[usize; 3], HPoint> = HashMap::new();
    for ((u, v), d) in &dual {
        for end in [&d.lo, &d.hi] {
            if let DualEnd::Vertex { third, t } = end {
                let mut key = [*u, *v, *third];
                key.sort_unstable();
                seen.entry(key).or_insert_with(|| d.geodesic.point_at(*t));
            }
        }
    }
    let mut voronoi_vertices: Vec<([usize; 3], HPoint)> = seen.into_iter().collect();
    voronoi_vertices.sort_by(|a, b| a.0.cmp(&b.0));

    let mut ideal_voronoi_vertices: Vec<((usize, usize), IdealPoint)> = Vec::new();
    for ((u, v), d) in &dual {
        if matches!(d.lo, DualEnd::Ideal) {
            ideal_voronoi_vertices.push(((*u, *v), d.ideal_endpoint(false)));
        }
        if matches!(d.hi, DualEnd::Ideal) {
            ideal_voronoi_vertices.push(((*u, *v), d.ideal_endpoint(true)));
        }
    }

    // Rotation system: neighbors in ccw angular order around each site.
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &edges {
        rotation[u].push(v);
        rotation[v].push(u);
    }
    for s in 0..n {
        let site = sites[s];
        rotation[s].sort_by(|&a, &b| {
            angle_at(&site, &sites[a]).total_cmp(&angle_at(&site, &sites[b]))
        });
    }

    let outer = compute_outer_flags(&sites);

    Ok(DelaunayComplex {
        sites,
        edges,
        dual,
        voronoi_vertices,
        ideal_voronoi_vertices,
        rotation,
        outer,
    })
}

// Intersection over all third sites of the "closer to u/v than to w"
// intervals on the bisector of (u, v). None when empty.
fn dual_interval(sites: &[HPoint], mink: &[MVec], u: usize, v: usize) -> Option<DualEdge> {
    let g = perpendicular_bisector(&sites[u], &sites[v]).ok()?;
    let base = g.base();
    let fwd = g.forward();
    let mut lo = DualEnd::Ideal;
    let mut hi = DualEnd::Ideal;
    let mut lo_t = f64::NEG_INFINITY;
    let mut hi_t = f64::INFINITY;
    for w in 0..sites.len() {
        if w == u || w == v {
            continue;
        }
        let d = mink[u].sub(mink[w]);
        let p = base.dot(d);
        let q = fwd.dot(d);
        // Constraint: p cosh t + q sinh t >= 0 on the kept part.
        if p >= q.abs() {
            continue; // holds everywhere
        }
        if p <= -q.abs() {
            return None; // holds nowhere
        }
        let ratio = -p / q;
        if ratio.abs() >= 1.0 {
            if p > 0.0 {
                continue;
            }
            return None;
        }
        let t0 = ratio.atanh();
        if q > 0.0 {
            if t0 > lo_t {
                lo_t = t0;
                lo = DualEnd::Vertex { third: w, t: t0 };
            }
        } else if t0 < hi_t {
            hi_t = t0;
            hi = DualEnd::Vertex { third: w, t: t0 };
        }
    }
    if hi_t - lo_t <= INTERVAL_EPS {
        return None;
    }
    Some(DualEdge { geodesic: g, lo, hi })
}

// s is an outer vertex iff the intersection over all w of the ideal arcs
// closer to s than to w is nonempty: sweep arc coverage on the circle.
fn compute_outer_flags(sites: &[HPoint]) -> Vec<bool> {
    let n = sites.len();
    if n == 1 {
        return vec![true];
    }
    let mut out = vec![false; n];
    for s in 0..n {
        // Each arc is (start, width) going counterclockwise.
        let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * n);
        for w in 0..n {
            if w == s {
                continue;
            }
            let arc = halfplane_ideal_arc(&sites[s], &sites[w]).expect("distinct sites");
            // Convert clockwise (from -> to) to ccw [to, to + width), split at 2π.
            let a = arc.to.angle();
            let b = a + arc.width();
            if b <= std::f64::consts::TAU {
                events.push((a, 1));
                events.push((b, -1));
            } else {
                events.push((a, 1));
                events.push((std::f64::consts::TAU, -1));
                events.push((0.0, 1));
                events.push((b - std::f64::consts::TAU, -1));
            }
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)));
        let mut cover = 0i32;
        let mut best = 0i32;
        for (_, delta) in events {
            cover += delta;
            best = best.max(cover);
        }
        out[s] = best as usize == n - 1;
    }
    out
}

/// Sites whose Voronoi cell is unbounded.
pub fn outer_vertices(c: &DelaunayComplex) -> Vec<usize> {
    (0..c.len()).filter(|&s| c.is_outer(s)).collect()
}

// ---------------------------------------------------------------------------
// Faces and peeling.

type Dart = (usize, usize);

/// Faces of the embedding as dart orbits (each face is the region to the
/// left of its darts), plus the index of the outer face.
pub(crate) fn faces(c: &DelaunayComplex) -> (Vec<Vec<Dart>>, usize) {
    let mut next: HashMap<Dart, Dart> = HashMap::new();
    let mut darts: Vec<Dart> = Vec::new();
    for s in 0..c.len() {
        let rot = c.rotation(s);
        for (i, &w) in rot.iter().enumerate() {
            // The face left of (w -> s) continues along (s -> predecessor of
            // w in the ccw rotation at s).
            let succ = rot[(i + rot.len() - 1) % rot.len()];
            next.insert((w, s), (s, succ));
            darts.push((w, s));
        }
    }
    darts.sort_unstable();
    let mut face_list: Vec<Vec<Dart>> = Vec::new();
    let mut seen: HashSet<Dart> = HashSet::new();
    for d0 in darts {
        if seen.contains(&d0) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut d = d0;
        loop {
            orbit.push(d);
            seen.insert(d);
            d = next[&d];
            if d == d0 {
                break;
            }
        }
        face_list.push(orbit);
    }
    if face_list.is_empty() {
        return (vec![Vec::new()], 0);
    }
    // Outer face: at the max-radial site the radially outward direction has
    // local angle 0, which always falls in the wraparound gap of the ccw
    // rotation; the face there is the one left of (v0 -> last neighbor).
    let v0 = (0..c.len())
        .max_by(|&a, &b| c.sites()[a].radial().total_cmp(&c.sites()[b].radial()))
        .unwrap();
    let last = *c.rotation(v0).last().expect("connected complex");
    let outer_dart = (v0, last);
    let outer_idx = face_list
        .iter()
        .position(|f| f.contains(&outer_dart))
        .expect("outer dart belongs to a face");
    (face_list, outer_idx)
}

/// The peeling number of the fixed embedding: repeatedly delete all vertices
/// incident to the current outer face (faces merge combinatorially; the
/// complex is never rebuilt) until no vertex remains.
pub fn outerplanarity(c: &DelaunayComplex) -> usize {
    let n = c.len();
    if n == 1 {
        return 1;
    }
    let (face_list, outer_idx) = faces(c);
    let f = face_list.len();
    // Union-find over faces.
    let mut parent: Vec<usize> = (0..f).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    // vertex -> incident face ids (deduplicated).
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, orbit) in face_list.iter().enumerate() {
        for &(u, _) in orbit {
            if !incident[u].contains(&fi) {
                incident[u].push(fi);
            }
        }
    }
    let mut alive = vec![true; n];
    let mut alive_count = n;
    let mut rounds = 0usize;
    while alive_count > 0 {
        rounds += 1;
        let outer_root = find(&mut parent, outer_idx);
        let peel: Vec<usize> = (0..n)
            .filter(|&v| {
                alive[v]
                    && incident[v].iter().any(|&fi| find(&mut parent, fi) == outer_root)
            })
            .collect();
        // Every embedded graph has at least one vertex on its outer face.
        assert!(!peel.is_empty(), "peeling stalled with {alive_count} vertices alive");
        for &v in &peel {
            alive[v] = false;
            alive_count -= 1;
            for &fi in &incident[v] {
                let r = find(&mut parent, fi);
                let o = find(&mut parent, outer_idx);
                parent[r] = o;
            }
        }
    }
    rounds
}

// ---------------------------------------------------------------------------
// Inner degree audit.

#[derive(Debug, Clone)]
pub struct DegreeAudit {
    pub bound: usize,
    pub min_inner_degree: Option<usize>,
    pub inner_count: usize,
}

/// Check that every inner vertex has Delaunay degree at least ⌈e^r⌉
/// (requires sites pairwise at least 2r apart).
pub fn inner_degree_audit(c: &DelaunayComplex, r: f64) -> Result<DegreeAudit> {
    let bound = r.exp().ceil() as usize;
    let mut min_inner: Option<usize> = None;
    let mut inner_count = 0;
    for s in 0..c.len() {
        if c.is_outer(s) {
            continue;
        }
        inner_count += 1;
        let d = c.degree(s);
        min_inner = Some(min_inner.map_or(d, |m: usize| m.min(d)));
        if d < bound {
            return Err(Error::AuditFailure(format!(
                "inner vertex {s} has degree {d} < ⌈e^r⌉ = {bound}"
            )));
        }
    }
    Ok(DegreeAudit { bound, min_inner_degree: min_inner, inner_count })
}

// ---------------------------------------------------------------------------
// Layer polygons and areas.

#[derive(Debug, Clone)]
pub struct LayerDecomposition {
    pub center: usize,
    /// Layers V_1, V_2, ... (hop distance from the center), restricted to
    /// the maximal prefix in which every layer consists of inner vertices.
    pub layers: Vec<Vec<usize>>,
    /// Layer polygons as corner sequences (sites interleaved with points on
    /// the dual Voronoi edges).
    pub polygons: Vec<Vec<HPoint>>,
    pub areas: Vec<f64>,
    /// area(P_ℓ) / area(P_{ℓ-1}) for consecutive polygons.
    pub ratios: Vec<f64>,
    /// The asserted growth floor 10/(10-r), when r ≤ 1.8.
    pub growth_floor: Option<f64>,
}

/// Layer polygons around an inner site and their areas; for r ≤ 1.8 the
/// per-layer growth ratio is checked against 10/(10-r).
pub fn layer_areas(c: &DelaunayComplex, s: usize, r: f64) -> Result<LayerDecomposition> {
    if c.is_outer(s) {
        return Err(Error::InvalidInput(format!("site {s} is an outer vertex")));
    }
    // BFS layers.
    let n = c.len();
    let mut depth = vec![usize::MAX; n];
    depth[s] = 0;
    let mut frontier = vec![s];
    let mut all_layers: Vec<Vec<usize>> = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in c.rotation(v) {
                if depth[u] == usize::MAX {
                    depth[u] = depth[v] + 1;
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        all_layers.push(next.clone());
        frontier = next;
    }
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for layer in &all_layers {
        if layer.iter().any(|&v| c.is_outer(v)) {
            break;
        }
        layers.push(layer.clone());
    }
    if layers.is_empty() {
        return Err(Error::InvalidInput(format!("site {s} has no inner layer")));
    }
    let mut polygons = Vec::new();
    let mut areas = Vec::new();
    for layer in &layers {
        let cycle = layer_cycle(c, layer)?;
        let mut corners: Vec<HPoint> = Vec::with_capacity(2 * cycle.len());
        for (k, &v) in cycle.iter().enumerate() {
            let w = cycle[(k + 1) % cycle.len()];
            corners.push(c.sites()[v]);
            let d = c
                .dual_edge(v, w)
                .ok_or_else(|| Error::AuditFailure(format!("missing dual edge {v},{w}")))?;
            corners.push(d.midpoint());
        }
        let area = polygon_area_from(&c.sites()[s], &corners);
        polygons.push(corners);
        areas.push(area);
    }
    let mut ratios = Vec::new();
    for w in areas.windows(2) {
        ratios.push(w[1] / w[0]);
    }
    let growth_floor = (r <= 1.8).then(|| 10.0 / (10.0 - r));
    if let Some(floor) = growth_floor {
        for (i, &ratio) in ratios.iter().enumerate() {
            if ratio < floor - 1e-9 {
                return Err(Error::AuditFailure(format!(
                    "layer {} area ratio {ratio} below 10/(10-r) = {floor}",
                    i + 2
                )));
            }
        }
    }
    Ok(LayerDecomposition { center: s, layers, polygons, areas, ratios, growth_floor })
}

// The cyclic order of a layer: its induced subgraph must be a single cycle.
fn layer_cycle(c: &DelaunayComplex, layer: &[usize]) -> Result<Vec<usize>> {
    use std::collections::HashSet;
    let set: HashSet<usize> = layer.iter().copied().collect();
    if layer.len() < 3 {
        return Err(Error::AuditFailure(format!("layer of size {} is not a cycle", layer.len())));
    }
    let nbrs = |v: usize| -> Vec<usize> {
        c.rotation(v).iter().copied().filter(|u| set.contains(u)).collect()
    };
    for &v in layer {
        if nbrs(v).len() != 2 {
            return Err(Error::AuditFailure(format!(
                "layer vertex {v} has {} in-layer neighbors, expected 2",
                nbrs(v).len()
            )));
        }
    }
    let start = layer[0];
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = nbrs(start)[0];
    while cur != start {
        cycle.push(cur);
        let nb = nbrs(cur);
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != layer.len() {
        return Err(Error::AuditFailure("layer induces more than one cycle".into()));
    }
    Ok(cycle)
}

// Area of the polygon given by `corners` via a signed triangle fan from `s`.
fn polygon_area_from(s: &HPoint, corners: &[HPoint]) -> f64 {
    let mut total = 0.0;
    for (k, a) in corners.iter().enumerate() {
        let b = &corners[(k + 1) % corners.len()];
        total += crate::hgeom::triangle_area_signed(s, a, b);
    }
    total.abs()
}

/// Area lower bound for the innermost layer polygon: it contains the center
/// cell, which contains a disk of radius r.
pub fn first_layer_area_floor(r: f64) -> f64 {
    disk_area(r)
}
