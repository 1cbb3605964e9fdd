//! Hyperbolic uniform disk graphs: adjacency from center distances, exact
//! ply, and a brute-force maximum independent set oracle for small inputs.

use crate::error::{Error, Result};
use crate::hgeom::{dist, HPoint};

/// Centers are considered duplicates below this distance; duplicates are
/// legal but counted so callers can warn.
const DUPLICATE_EPS: f64 = 1e-12;

/// Intersection graph of equal-radius closed disks: vertices i and j are
/// adjacent iff the center distance is at most 2r (touching counts).
#[derive(Debug, Clone)]
pub struct DiskGraph {
    centers: Vec<HPoint>,
    radius: f64,
    adj: Vec<Vec<u64>>,
    duplicate_pairs: usize,
}

impl DiskGraph {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn centers(&self) -> &[HPoint] {
        &self.centers
    }

    pub fn center(&self, v: usize) -> &HPoint {
        &self.centers[v]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[v];
        (0..self.len()).filter(move |&u| row[u / 64] >> (u % 64) & 1 == 1)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Number of center pairs closer than the duplicate threshold.
    pub fn duplicate_pairs(&self) -> usize {
        self.duplicate_pairs
    }

    /// Induced subgraph on `keep` (preserves the radius); returns the
    /// subgraph together with the original index of each kept vertex.
    pub fn induced(&self, keep: &[usize]) -> (DiskGraph, Vec<usize>) {
        let centers: Vec<HPoint> = keep.iter().map(|&v| self.centers[v]).collect();
        (build_graph(centers, self.radius).expect("radius already validated"), keep.to_vec())
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn word_row(&self, v: usize) -> &[u64] {
        &self.adj[v]
    }
}

/// Build the disk graph over `centers` with hyperbolic radius `r > 0`.
pub fn build_graph(centers: Vec<HPoint>, r: f64) -> Result<DiskGraph> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("radius must be positive and finite, got {r}")));
    }
    let n = centers.len();
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    let mut duplicate_pairs = 0usize;
    let threshold = 2.0 * r;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dist(&centers[i], &centers[j]);
            if d < DUPLICATE_EPS {
                duplicate_pairs += 1;
            }
            if d <= threshold {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    Ok(DiskGraph { centers, radius: r, adj, duplicate_pairs })
}

/// A set of pairwise non-adjacent vertices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    vertices: Vec<usize>,
}

impl IndependentSet {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Pairwise non-adjacency in `g`.
    pub fn is_valid(&self, g: &DiskGraph) -> bool {
        for (k, &i) in self.vertices.iter().enumerate() {
            for &j in &self.vertices[k + 1..] {
                if g.adjacent(i, j) {
                    return false;
                }
            }
        }
        self.vertices.iter().all(|&v| v < g.len())
    }
}

/// Exact maximum ply: the largest number of closed radius-r disks sharing a
/// point. The depth function attains its maximum at a disk center or at an
/// intersection point of two disk boundaries, so those candidates suffice.
/// Hyperbolic circles are Euclidean circles in the Poincaré model, where the
/// candidates are computed.
pub fn ply(g: &DiskGraph) -> usize {
    assert!(!g.is_empty(), "ply of an empty graph");
    let n = g.len();
    let discs: Vec<([f64; 2], f64)> = g
        .centers()
        .iter()
        .map(|c| poincare_circle(c, g.radius()))
        .collect();
    let mut candidates: Vec<[f64; 2]> = discs.iter().map(|d| d.0).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            circle_intersections(&discs[i], &discs[j], &mut candidates);
        }
    }
    let mut best = 0usize;
    for p in &candidates {
        let mut c = 0usize;
        for (center, rad) in &discs {
            let dx = p[0] - center[0];
            let dy = p[1] - center[1];
            if dx * dx + dy * dy <= rad * rad * (1.0 + 1e-9) + 1e-18 {
                c += 1;
            }
        }
        best = best.max(c);
    }
    best
}

/// Euclidean center and radius of the Poincaré image of the hyperbolic disk
/// with the given center and radius.
pub(crate) fn poincare_circle(center: &HPoint, r: f64) -> ([f64; 2], f64) {
    let near = ((center.radial() - r) / 2.0).tanh();
    let far = ((center.radial() + r) / 2.0).tanh();
    let mid = (near + far) / 2.0;
    let rad = (far - near) / 2.0;
    let (s, c) = center.angle().sin_cos();
    ([mid * c, mid * s], rad)
}

fn circle_intersections(a: &([f64; 2], f64), b: &([f64; 2], f64), out: &mut Vec<[f64; 2]>) {
    let dx = b.0[0] - a.0[0];
    let dy = b.0[1] - a.0[1];
    let d = dx.hypot(dy);
    if d == 0.0 || d > a.1 + b.1 || d < (a.1 - b.1).abs() {
        return;
    }
    let l = (a.1 * a.1 - b.1 * b.1 + d * d) / (2.0 * d);
    let h2 = a.1 * a.1 - l * l;
    let h = h2.max(0.0).sqrt();
    let (ux, uy) = (dx / d, dy / d);
    out.push([a.0[0] + l * ux - h * uy, a.0[1] + l * uy + h * ux]);
    out.push([a.0[0] + l * ux + h * uy, a.0[1] + l * uy - h * ux]);
}

/// Guard for the exhaustive solver.
pub const BRUTE_FORCE_MAX: usize = 40;

/// Exact maximum independent set by branch and bound: branch on a
/// maximum-degree vertex, split into connected components, prune with a
/// greedy lower bound. Deterministic (lowest-index tie-breaks).
pub fn brute_force_mis(g: &DiskGraph) -> Result<IndependentSet> {
    let n = g.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX });
    }
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let rows: Vec<u64> = (0..n).map(|v| g.word_row(v).first().copied().unwrap_or(0)).collect();
    let mut best_memo = std::collections::HashMap::new();
    let set = mis_bitset(&rows, full, &mut best_memo);
    let vertices = (0..n).filter(|&v| set >> v & 1 == 1).collect();
    Ok(IndependentSet::new(vertices))
}

fn mis_bitset(rows: &[u64], mut alive: u64, memo: &mut std::collections::HashMap<u64, u64>) -> u64 {
    if alive == 0 {
        return 0;
    }
    if let Some(&s) = memo.get(&alive) {
        return s;
    }
    let original = alive;
    let mut chosen = 0u64;
    // Peel vertices of degree 0 and 1 (always safe to take greedily).
    loop {
        let mut changed = false;
        let mut m = alive;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if alive >> v & 1 == 0 {
                continue;
            }
            let nb = rows[v] & alive;
            let deg = nb.count_ones();
            if deg == 0 {
                chosen |= 1 << v;
                alive &= !(1 << v);
                changed = true;
            } else if deg == 1 {
                chosen |= 1 << v;
                alive &= !(1 << v) & !nb;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if alive == 0 {
        memo.insert(original, chosen);
        return chosen;
    }
    // Component split.
    let comp = component_mask(rows, alive);
    if comp != alive {
        let a = mis_bitset(rows, comp, memo);
        let b = mis_bitset(rows, alive & !comp, memo);
        let s = chosen | a | b;
        memo.insert(original, s);
        return s;
    }
    // Branch on the lowest-index maximum-degree vertex.
    let mut pivot = usize::MAX;
    let mut pivot_deg = 0;
    let mut m = alive;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        let deg = (rows[v] & alive).count_ones();
        if deg > pivot_deg {
            pivot_deg = deg;
            pivot = v;
        }
    }
    let with = mis_bitset(rows, alive & !(1 << pivot) & !rows[pivot], memo) | 1 << pivot;
    let without = mis_bitset(rows, alive & !(1 << pivot), memo);
    let s = chosen
        | if with.count_ones() >= without.count_ones() {
            with
        } else {
            without
        };
    memo.insert(original, s);
    s
}

fn component_mask(rows: &[u64], alive: u64) -> u64 {
    let start = alive.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        let mut m = frontier;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            next |= rows[v] & alive & !seen;
        }
        seen |= next;
        frontier = next;
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::HPoint;

    fn far_points(n: usize) -> Vec<HPoint> {
        (0..n).map(|i| HPoint::new(10.0 + i as f64 * 10.0, 0.1 * i as f64)).collect()
    }

    #[test]
    fn single_center_no_edges() {
        let g = build_graph(vec![HPoint::origin()], 1.0).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(build_graph(vec![HPoint::origin()], 0.0).is_err());
        assert!(build_graph(vec![HPoint::origin()], -1.0).is_err());
    }

    #[test]
    fn touching_disks_are_adjacent() {
        let g = build_graph(vec![HPoint::origin(), HPoint::new(2.0, 0.0)], 1.0).unwrap();
        assert!(g.adjacent(0, 1));
        let g2 = build_graph(vec![HPoint::origin(), HPoint::new(2.0 + 1e-9, 0.0)], 1.0).unwrap();
        assert!(!g2.adjacent(0, 1));
    }

    #[test]
    fn duplicates_flagged() {
        let p = HPoint::new(1.0, 1.0);
        let g = build_graph(vec![p, p, HPoint::origin()], 1.0).unwrap();
        assert_eq!(g.duplicate_pairs(), 1);
    }

    #[test]
    fn ply_far_apart_is_one() {
        let g = build_graph(far_points(5), 1.0).unwrap();
        assert_eq!(ply(&g), 1);
    }

    #[test]
    fn ply_coincident_centers() {
        let p = HPoint::new(0.7, 0.3);
        for m in 1..=5 {
            let g = build_graph(vec![p; m], 0.5).unwrap();
            assert_eq!(ply(&g), m);
        }
    }

    #[test]
    fn ply_two_overlapping() {
        let g = build_graph(vec![HPoint::origin(), HPoint::new(1.0, 0.0)], 1.0).unwrap();
        assert_eq!(ply(&g), 2);
        let far = build_graph(vec![HPoint::origin(), HPoint::new(5.0, 0.0)], 1.0).unwrap();
        assert_eq!(ply(&far), 1);
    }

    #[test]
    fn brute_force_edgeless_and_clique() {
        let g = build_graph(far_points(7), 1.0).unwrap();
        assert_eq!(brute_force_mis(&g).unwrap().len(), 7);
        let c = build_graph(vec![HPoint::origin(); 6], 1.0).unwrap();
        assert_eq!(brute_force_mis(&c).unwrap().len(), 1);
    }

    #[test]
    fn brute_force_guard() {
        let g = build_graph(far_points(41), 1.0).unwrap();
        assert!(matches!(brute_force_mis(&g), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn brute_force_returns_valid_witness() {
        // Small random-ish cluster with structure.
        let pts: Vec<HPoint> = (0..12)
            .map(|i| HPoint::new(0.3 * (i % 4) as f64, 0.9 * (i / 4) as f64))
            .collect();
        let g = build_graph(pts, 0.4).unwrap();
        let s = brute_force_mis(&g).unwrap();
        assert!(s.is_valid(&g));
    }
}
