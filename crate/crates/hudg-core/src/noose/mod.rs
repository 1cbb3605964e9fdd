//! Candidate nooses: generalized polygons over graph vertices whose
//! connectors are Voronoi circumcenters or ideal bisector endpoints, with
//! the validity and well-spacedness predicates and the dynamic program that
//! assembles noose hierarchies into a maximum independent set.
//!
//! A candidate noose is a cyclic corner sequence. Between consecutive
//! visited sites it carries either one Voronoi corner (two geodesic
//! segments), a pair of ideal corners joined by a boundary arc (two rays and
//! an arc), or a single shared ideal corner (two rays). Arcs are traversed
//! clockwise on clockwise-oriented nooses and counterclockwise on reversed
//! ones; the orientation is derived from the chord shoelace, so reversing
//! the corner cycle yields the same curve with interior and exterior
//! swapped.

mod search;

pub use search::{dp_max_is, enumerate_candidates, mis_exact_ramp, DpOutcome, EnumerationBudget, RampOutcome};

use crate::graph::DiskGraph;
use crate::hgeom::{
    dist, dist_point_ray, dist_point_segment, HPoint, IdealPoint, Ray, Segment,
};

/// Distance slack: comparisons that certify independence or well-spacedness
/// resolve ties toward rejection by this margin.
pub const SPACING_SLACK: f64 = 1e-9;

/// A corner of a candidate noose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Corner {
    /// A vertex of the graph (a site of the prospective independent set).
    Site(usize),
    /// A Voronoi vertex: the circumcenter of its sorted triple.
    Voronoi { triple: [usize; 3], pos: HPoint },
    /// An ideal Voronoi vertex: one end of the perpendicular bisector of the
    /// sorted pair (`plus` selects the bisector's second endpoint).
    Ideal { pair: (usize, usize), plus: bool, pos: IdealPoint },
}

impl Corner {
    /// Identity key (geometry-free); distinct corners get distinct keys.
    pub fn key(&self) -> u64 {
        match self {
            Corner::Site(v) => (*v as u64) << 2,
            Corner::Voronoi { triple, .. } => {
                1 | ((triple[0] as u64) << 2) | ((triple[1] as u64) << 22) | ((triple[2] as u64) << 42)
            }
            Corner::Ideal { pair, plus, .. } => {
                2 | ((*plus as u64) << 2) | ((pair.0 as u64) << 3) | ((pair.1 as u64) << 23)
            }
        }
    }

    pub fn site(&self) -> Option<usize> {
        match self {
            Corner::Site(v) => Some(*v),
            _ => None,
        }
    }

    fn is_ideal(&self) -> bool {
        matches!(self, Corner::Ideal { .. })
    }

    /// Klein-model position ([cos, sin] on the unit circle for ideal corners).
    fn klein(&self, g: &DiskGraph) -> [f64; 2] {
        match self {
            Corner::Site(v) => g.center(*v).to_klein(),
            Corner::Voronoi { pos, .. } => pos.to_klein(),
            Corner::Ideal { pos, .. } => [pos.angle().cos(), pos.angle().sin()],
        }
    }
}

/// Typed edge of a candidate noose, in traversal order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NooseEdge {
    /// Geodesic segment between a site and a Voronoi corner.
    Segment(usize, usize),
    /// Geodesic ray between a site and an ideal corner (either direction).
    Ray(usize, usize),
    /// Boundary arc between two ideal corners.
    Arc(usize, usize),
}

impl NooseEdge {
    pub fn endpoints(&self) -> (usize, usize) {
        match *self {
            NooseEdge::Segment(a, b) | NooseEdge::Ray(a, b) | NooseEdge::Arc(a, b) => (a, b),
        }
    }
}

/// A generalized polygon candidate: cyclic corners, derived orientation,
/// visited sites, and the Klein-area ordering key.
#[derive(Debug, Clone)]
pub struct CandidateNoose {
    corners: Vec<Corner>,
    clockwise: bool,
    visited: Vec<usize>,
    area_key: f64,
    klein: Vec<[f64; 2]>,
}

impl CandidateNoose {
    /// Validate a corner cycle and build the noose. Rejects malformed corner
    /// patterns, repeated corners, and geometric self-intersection.
    pub fn assemble(corners: Vec<Corner>, g: &DiskGraph) -> Result<Self, &'static str> {
        if corners.len() < 3 {
            return Err("fewer than three corners");
        }
        let n = corners.len();
        // Adjacency pattern: sites never touch sites, Voronoi corners are
        // flanked by sites, and at most two ideals run consecutively.
        for i in 0..n {
            let a = &corners[i];
            let b = &corners[(i + 1) % n];
            let ok = matches!(
                (a, b),
                (Corner::Site(_), Corner::Voronoi { .. })
                    | (Corner::Voronoi { .. }, Corner::Site(_))
                    | (Corner::Site(_), Corner::Ideal { .. })
                    | (Corner::Ideal { .. }, Corner::Site(_))
                    | (Corner::Ideal { .. }, Corner::Ideal { .. })
            );
            if !ok {
                return Err("illegal corner adjacency");
            }
        }
        for i in 0..n {
            if corners[i].is_ideal()
                && corners[(i + 1) % n].is_ideal()
                && corners[(i + 2) % n].is_ideal()
            {
                return Err("three consecutive ideal corners");
            }
        }
        let mut visited: Vec<usize> = corners.iter().filter_map(Corner::site).collect();
        if visited.is_empty() {
            return Err("no visited site");
        }
        visited.sort_unstable();
        let mut keys: Vec<u64> = corners.iter().map(Corner::key).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err("repeated corner");
        }
        let klein: Vec<[f64; 2]> = corners.iter().map(|c| c.klein(g)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let (dx, dy) = (klein[i][0] - klein[j][0], klein[i][1] - klein[j][1]);
                if dx.abs() < 1e-12 && dy.abs() < 1e-12 {
                    return Err("coincident corner positions");
                }
            }
        }
        let shoelace: f64 = (0..n)
            .map(|i| {
                let a = klein[i];
                let b = klein[(i + 1) % n];
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
            / 2.0;
        let clockwise = shoelace <= 0.0;
        let area_key = if clockwise {
            -shoelace
        } else {
            std::f64::consts::PI - shoelace
        };
        let noose = Self { corners, clockwise, visited, area_key, klein };
        if !noose.simple() {
            return Err("not simple");
        }
        Ok(noose)
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn visited(&self) -> &[usize] {
        &self.visited
    }

    pub fn clockwise(&self) -> bool {
        self.clockwise
    }

    /// Euclidean area of the enclosed Klein region (ideal arcs approximated
    /// by their chords); used only to order the dynamic program.
    pub fn interior_area_key(&self) -> f64 {
        self.area_key
    }

    /// Identity key: the lexicographically minimal rotation of the corner
    /// key cycle. Reflections are distinct (orientation matters).
    pub fn canonical_key(&self) -> Vec<u64> {
        let keys: Vec<u64> = self.corners.iter().map(Corner::key).collect();
        minimal_rotation(&keys)
    }

    /// The same curve traversed in the opposite direction (interior and
    /// exterior swap).
    pub fn reversed(&self) -> Self {
        let mut corners = self.corners.clone();
        corners[1..].reverse();
        let mut klein = self.klein.clone();
        klein[1..].reverse();
        Self {
            corners,
            clockwise: !self.clockwise,
            visited: self.visited.clone(),
            area_key: std::f64::consts::PI - self.area_key,
            klein,
        }
    }

    /// Typed edges in traversal order, as corner index pairs.
    pub fn edges(&self) -> Vec<NooseEdge> {
        let n = self.corners.len();
        (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                match (&self.corners[i], &self.corners[j]) {
                    (Corner::Ideal { .. }, Corner::Ideal { .. }) => NooseEdge::Arc(i, j),
                    (Corner::Site(_), Corner::Voronoi { .. })
                    | (Corner::Voronoi { .. }, Corner::Site(_)) => NooseEdge::Segment(i, j),
                    _ => NooseEdge::Ray(i, j),
                }
            })
            .collect()
    }

    // Geometric extent of the arc edge (i, j) as (ccw_lo, ccw_width).
    fn arc_extent(&self, i: usize, j: usize) -> (f64, f64) {
        let (ai, aj) = match (&self.corners[i], &self.corners[j]) {
            (Corner::Ideal { pos: a, .. }, Corner::Ideal { pos: b, .. }) => (a.angle(), b.angle()),
            _ => unreachable!("arc endpoints must be ideal"),
        };
        // Clockwise traversal sweeps from ai down to aj; as a ccw interval
        // that is [aj, ai]. Counterclockwise traversal sweeps [ai, aj].
        let (lo, hi) = if self.clockwise { (aj, ai) } else { (ai, aj) };
        let width = (hi - lo).rem_euclid(std::f64::consts::TAU);
        (lo, if width == 0.0 { std::f64::consts::TAU } else { width })
    }

    /// Identity of the edge starting at corner position `pos` (undirected;
    /// arcs carry their extent via the clockwise start corner).
    pub(crate) fn edge_key_at(&self, pos: usize) -> (u64, u64, u64) {
        let n = self.corners.len();
        let q = (pos + 1) % n;
        let ki = self.corners[pos].key();
        let kj = self.corners[q].key();
        let extent = match (&self.corners[pos], &self.corners[q]) {
            (Corner::Ideal { .. }, Corner::Ideal { .. }) => {
                if self.clockwise {
                    ki
                } else {
                    kj
                }
            }
            _ => 0,
        };
        (ki.min(kj), ki.max(kj), extent)
    }

    /// Canonical multiset of typed geometric edges (undirected; arcs carry
    /// their extent). Two nooses share an entry exactly when they contain
    /// the same piece of curve.
    pub fn edge_multiset(&self) -> Vec<(u64, u64, u64)> {
        let mut out: Vec<(u64, u64, u64)> =
            (0..self.corners.len()).map(|i| self.edge_key_at(i)).collect();
        out.sort_unstable();
        out
    }

    /// Simplicity of the Klein-model drawing: chords may meet only at shared
    /// corners, arcs live on the unit circle.
    pub fn simple(&self) -> bool {
        let n = self.corners.len();
        let edges = self.edges();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                match (&edges[i], &edges[j]) {
                    (NooseEdge::Arc(a0, a1), NooseEdge::Arc(b0, b1)) => {
                        if arcs_overlap(self.arc_extent(*a0, *a1), self.arc_extent(*b0, *b1)) {
                            return false;
                        }
                    }
                    (NooseEdge::Arc(a0, a1), other) | (other, NooseEdge::Arc(a0, a1)) => {
                        let (lo, width) = self.arc_extent(*a0, *a1);
                        let (c0, c1) = other.endpoints();
                        for c in [c0, c1] {
                            if let Corner::Ideal { pos, .. } = &self.corners[c] {
                                if c != *a0 && c != *a1 {
                                    let off = (pos.angle() - lo).rem_euclid(std::f64::consts::TAU);
                                    if off < width {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                    (a, b) => {
                        let (a0, a1) = a.endpoints();
                        let (b0, b1) = b.endpoints();
                        if adjacent {
                            // Shared corner only; reject overlap beyond it.
                            let shared = if a1 == b0 { a1 } else { a0 };
                            let pa = if a0 == shared { a1 } else { a0 };
                            let pb = if b0 == shared { b1 } else { b0 };
                            if on_segment(self.klein[shared], self.klein[pa], self.klein[pb])
                                || on_segment(self.klein[shared], self.klein[pb], self.klein[pa])
                            {
                                return false;
                            }
                        } else if segments_intersect(
                            self.klein[a0],
                            self.klein[a1],
                            self.klein[b0],
                            self.klein[b1],
                        ) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Is the finite point `x` strictly inside the noose's interior (the
    /// region to the right of the traversal)?
    pub fn point_in_interior(&self, x: &HPoint, _g: &DiskGraph) -> bool {
        let p = x.to_klein();
        let inside = self.jordan_inside(p);
        if self.clockwise {
            inside
        } else {
            !inside
        }
    }

    // Ray-casting parity against chords and boundary arcs. Retries with
    // rotated directions when the cast is degenerate.
    fn jordan_inside(&self, p: [f64; 2]) -> bool {
        'dir: for k in 0..16u32 {
            let ang = 0.5477 + k as f64 * 0.7853981;
            let d = [ang.cos(), ang.sin()];
            let mut crossings = 0usize;
            for e in self.edges() {
                match e {
                    NooseEdge::Arc(i, j) => {
                        // The cast ray exits the unit circle exactly once.
                        let exit = ray_circle_exit(p, d);
                        let (lo, width) = self.arc_extent(i, j);
                        let off = (exit - lo).rem_euclid(std::f64::consts::TAU);
                        if off < 1e-9 || (width - off).abs() < 1e-9 {
                            continue 'dir; // grazes an arc endpoint
                        }
                        if off < width {
                            crossings += 1;
                        }
                    }
                    NooseEdge::Segment(i, j) | NooseEdge::Ray(i, j) => {
                        match ray_segment_crossing(p, d, self.klein[i], self.klein[j]) {
                            Crossing::None => {}
                            Crossing::Proper => crossings += 1,
                            Crossing::Degenerate => continue 'dir,
                        }
                    }
                }
            }
            return crossings % 2 == 1;
        }
        false
    }

    /// Minimum hyperbolic distance from a point to the segment and ray
    /// elements of the noose; ideal arcs contribute +infinity.
    pub fn polygon_site_distance(&self, p: &HPoint, g: &DiskGraph) -> f64 {
        let mut best = f64::INFINITY;
        for e in self.edges() {
            let d = match e {
                NooseEdge::Arc(..) => continue,
                NooseEdge::Segment(i, j) | NooseEdge::Ray(i, j) => {
                    let (ci, cj) = (&self.corners[i], &self.corners[j]);
                    match (ci, cj) {
                        (Corner::Ideal { pos, .. }, _) => {
                            let origin = corner_point(cj, g).expect("ray has a finite end");
                            dist_point_ray(p, &Ray { origin, end: *pos })
                        }
                        (_, Corner::Ideal { pos, .. }) => {
                            let origin = corner_point(ci, g).expect("ray has a finite end");
                            dist_point_ray(p, &Ray { origin, end: *pos })
                        }
                        _ => {
                            let a = corner_point(ci, g).expect("segment end");
                            let b = corner_point(cj, g).expect("segment end");
                            dist_point_segment(p, &Segment { a, b })
                        }
                    }
                }
            };
            best = best.min(d);
        }
        best
    }
}

fn corner_point(c: &Corner, g: &DiskGraph) -> Option<HPoint> {
    match c {
        Corner::Site(v) => Some(*g.center(*v)),
        Corner::Voronoi { pos, .. } => Some(*pos),
        Corner::Ideal { .. } => None,
    }
}

pub(crate) fn minimal_rotation(keys: &[u64]) -> Vec<u64> {
    let n = keys.len();
    let mut best = 0usize;
    for s in 1..n {
        for k in 0..n {
            let a = keys[(s + k) % n];
            let b = keys[(best + k) % n];
            if a != b {
                if a < b {
                    best = s;
                }
                break;
            }
        }
    }
    (0..n).map(|k| keys[(best + k) % n]).collect()
}

// --- Euclidean helpers on Klein coordinates ---------------------------------

const GEOM_EPS: f64 = 1e-12;

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

// Is q on the closed segment [a, b] (beyond an eps of a)?
fn on_segment(a: [f64; 2], b: [f64; 2], q: [f64; 2]) -> bool {
    if orient(a, b, q).abs() > GEOM_EPS {
        return false;
    }
    let d = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).hypot(p[1] - q[1]);
    let len = d(a, b);
    d(a, q) + d(q, b) <= len + GEOM_EPS && d(a, q) > GEOM_EPS
}

// Closed intersection test for segments that share no endpoint.
fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > GEOM_EPS && o2 < -GEOM_EPS) || (o1 < -GEOM_EPS && o2 > GEOM_EPS))
        && ((o3 > GEOM_EPS && o4 < -GEOM_EPS) || (o3 < -GEOM_EPS && o4 > GEOM_EPS))
    {
        return true;
    }
    for (p, q, r) in [(a, b, c), (a, b, d), (c, d, a), (c, d, b)] {
        if orient(p, q, r).abs() <= GEOM_EPS {
            let within = r[0] >= p[0].min(q[0]) - GEOM_EPS
                && r[0] <= p[0].max(q[0]) + GEOM_EPS
                && r[1] >= p[1].min(q[1]) - GEOM_EPS
                && r[1] <= p[1].max(q[1]) + GEOM_EPS;
            if within {
                return true;
            }
        }
    }
    false
}

// Do the two arcs (as ccw intervals) overlap in more than isolated points?
fn arcs_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    let tau = std::f64::consts::TAU;
    let (lo_a, w_a) = a;
    let (lo_b, w_b) = b;
    // Overlap length of [0, w_a) and the shifted [delta, delta + w_b) on the circle.
    let delta = (lo_b - lo_a).rem_euclid(tau);
    let overlap1 = (w_a - delta).min(w_b).max(0.0);
    let delta2 = (lo_a - lo_b).rem_euclid(tau);
    let overlap2 = (w_b - delta2).min(w_a).max(0.0);
    overlap1 > 1e-9 || overlap2 > 1e-9
}

// Exit angle of the ray p + t d (t > 0) through the unit circle.
fn ray_circle_exit(p: [f64; 2], d: [f64; 2]) -> f64 {
    let b = p[0] * d[0] + p[1] * d[1];
    let c = p[0] * p[0] + p[1] * p[1] - 1.0;
    let t = -b + (b * b - c).max(0.0).sqrt();
    (p[1] + t * d[1]).atan2(p[0] + t * d[0])
}

enum Crossing {
    None,
    Proper,
    Degenerate,
}

// Does the ray p + t d (t > 0) properly cross segment [a, b]?
fn ray_segment_crossing(p: [f64; 2], d: [f64; 2], a: [f64; 2], b: [f64; 2]) -> Crossing {
    let r = d;
    let s = [b[0] - a[0], b[1] - a[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    let qp = [a[0] - p[0], a[1] - p[1]];
    if denom.abs() < GEOM_EPS {
        // Parallel: degenerate when collinear and overlapping ahead.
        if (qp[0] * r[1] - qp[1] * r[0]).abs() < GEOM_EPS {
            return Crossing::Degenerate;
        }
        return Crossing::None;
    }
    let t = (qp[0] * s[1] - qp[1] * s[0]) / denom;
    let u = (qp[0] * r[1] - qp[1] * r[0]) / denom;
    if t <= GEOM_EPS {
        return Crossing::None;
    }
    if u < -1e-9 || u > 1.0 + 1e-9 {
        return Crossing::None;
    }
    if u < 1e-9 || u > 1.0 - 1e-9 {
        return Crossing::Degenerate; // grazes an endpoint; retry the cast
    }
    Crossing::Proper
}

// --- combination predicates --------------------------------------------------

/// Lemma-style validity of a child--parent relation: the parent's typed edge
/// multiset is the symmetric difference of the children's, exactly two
/// corner points are shared by all three, and the children's interiors are
/// disjoint subsets of the parent's (area keys plus representative points).
pub fn valid_combination(
    parent: &CandidateNoose,
    left: &CandidateNoose,
    right: &CandidateNoose,
    g: &DiskGraph,
) -> bool {
    let pe = parent.edge_multiset();
    let le = left.edge_multiset();
    let re = right.edge_multiset();
    if symmetric_difference(&le, &re) != pe {
        return false;
    }
    // Exactly two corners shared by all three.
    let pk: std::collections::HashSet<u64> = parent.corners.iter().map(Corner::key).collect();
    let lk: std::collections::HashSet<u64> = left.corners.iter().map(Corner::key).collect();
    let shared = right
        .corners
        .iter()
        .map(Corner::key)
        .filter(|k| pk.contains(k) && lk.contains(k))
        .count();
    if shared != 2 {
        return false;
    }
    // Intervia areas: children tile the parent.
    let (ap, al, ar) = (parent.area_key, left.area_key, right.area_key);
    if al >= ap || ar >= ap || (al + ar - ap).abs() > 1e-9 * ap.max(1.0) {
        return false;
    }
    // Representative interior points.
    for (child, other) in [(left, right), (right, left)] {
        if let Some(rep) = interior_representative(child, g) {
            if !parent.point_in_interior(&rep, g) || other.point_in_interior(&rep, g) {
                return false;
            }
        }
    }
    true
}

// A point strictly inside the noose, found by nudging edge midpoints.
fn interior_representative(noose: &CandidateNoose, g: &DiskGraph) -> Option<HPoint> {
    for e in noose.edges() {
        let (i, j) = match e {
            NooseEdge::Arc(..) => continue,
            NooseEdge::Segment(i, j) | NooseEdge::Ray(i, j) => (i, j),
        };
        let a = noose.klein[i];
        let b = noose.klein[j];
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let mut nrm = [-(b[1] - a[1]), b[0] - a[0]];
        let len = nrm[0].hypot(nrm[1]);
        if len < GEOM_EPS {
            continue;
        }
        nrm = [nrm[0] / len, nrm[1] / len];
        for delta in [1e-6, 1e-4, 1e-2] {
            for sign in [1.0, -1.0] {
                let cand = [mid[0] + sign * delta * nrm[0], mid[1] + sign * delta * nrm[1]];
                if cand[0].hypot(cand[1]) >= 1.0 - 1e-12 {
                    continue;
                }
                if let Ok(p) = crate::hgeom::from_klein(cand) {
                    if noose.point_in_interior(&p, g) {
                        return Some(p);
                    }
                }
            }
        }
    }
    None
}

fn symmetric_difference(
    a: &[(u64, u64, u64)],
    b: &[(u64, u64, u64)],
) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Well-spacedness of a valid child--parent relation: the union of the
/// visited sites is pairwise more than 2r apart, and each polygon keeps
/// distance at least r from every union site it does not visit. Ties resolve
/// toward rejection by [`SPACING_SLACK`].
pub fn well_spaced(
    parent: &CandidateNoose,
    left: &CandidateNoose,
    right: &CandidateNoose,
    g: &DiskGraph,
) -> bool {
    let mut union: Vec<usize> = parent
        .visited
        .iter()
        .chain(&left.visited)
        .chain(&right.visited)
        .copied()
        .collect();
    union.sort_unstable();
    union.dedup();
    for (k, &a) in union.iter().enumerate() {
        for &b in &union[k + 1..] {
            if dist(g.center(a), g.center(b)) <= 2.0 * g.radius() + SPACING_SLACK {
                return false;
            }
        }
    }
    for noose in [parent, left, right] {
        for &v in &union {
            if noose.visited.binary_search(&v).is_err()
                && noose.polygon_site_distance(g.center(v), g) < g.radius() + SPACING_SLACK
            {
                return false;
            }
        }
    }
    true
}
