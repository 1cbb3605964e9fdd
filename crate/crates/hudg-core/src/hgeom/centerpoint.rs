//! Hyperbolic centerpoints via the Beltrami–Klein model.
//!
//! Geodesics map to Euclidean chords in the Klein disk, so a Euclidean
//! centerpoint of the Klein images is a hyperbolic centerpoint. Candidates
//! are produced by a ladder (centroid and medians, then a cutting-plane
//! refinement driven by exact depth counterexamples, then intersections of
//! near-halving lines) and every returned point is certified by an exact
//! O(n log n) rotational-sweep Tukey depth check.

use super::point::{from_klein, HPoint};

/// Exact halfspace depth of `x` in the Klein plane: the minimum over all
/// directions of the number of points in the closed halfplane on that side.
/// Points coinciding with `x` lie on every line through it and count always.
pub fn klein_tukey_depth(points: &[[f64; 2]], x: [f64; 2]) -> usize {
    let mut angles: Vec<f64> = Vec::with_capacity(points.len());
    let mut coincident = 0usize;
    for p in points {
        let (dx, dy) = (p[0] - x[0], p[1] - x[1]);
        if dx == 0.0 && dy == 0.0 {
            coincident += 1;
        } else {
            angles.push(dy.atan2(dx));
        }
    }
    if angles.is_empty() {
        return coincident;
    }
    angles.sort_unstable_by(f64::total_cmp);
    let m = angles.len();
    let tau = std::f64::consts::TAU;
    let half = std::f64::consts::FRAC_PI_2;

    // Critical directions are perpendicular to some data direction; the
    // depth function is constant on open arcs between them, so evaluating at
    // arc midpoints is exact.
    let mut criticals: Vec<f64> = Vec::with_capacity(2 * m);
    for &a in &angles {
        criticals.push((a + half).rem_euclid(tau));
        criticals.push((a - half).rem_euclid(tau));
    }
    criticals.sort_unstable_by(f64::total_cmp);
    criticals.dedup();

    let mut wrapped: Vec<f64> = angles.iter().map(|a| a.rem_euclid(tau)).collect();
    wrapped.sort_unstable_by(f64::total_cmp);

    let mut best = usize::MAX;
    let k = criticals.len();
    for i in 0..k {
        let lo = criticals[i];
        let hi = if i + 1 == k { criticals[0] + tau } else { criticals[i + 1] };
        let nu = (lo + hi) / 2.0;
        let c = count_in_closed(&wrapped, (nu - half).rem_euclid(tau), (nu + half).rem_euclid(tau));
        best = best.min(c);
        if best == 0 {
            break;
        }
    }
    best.min(m) + coincident
}

// Number of sorted values in [lo, hi] on the circle [0, τ); handles wrap.
fn count_in_closed(sorted: &[f64], lo: f64, hi: f64) -> usize {
    let le = |v: f64| sorted.partition_point(|&a| a <= v);
    let lt = |v: f64| sorted.partition_point(|&a| a < v);
    if lo <= hi {
        le(hi) - lt(lo)
    } else {
        (sorted.len() - lt(lo)) + le(hi)
    }
}

/// A point such that every geodesic through it leaves at least ⌊n/3⌋ input
/// points on each closed side. Existence is the centerpoint theorem; the
/// result is always certified by [`klein_tukey_depth`] before it is returned.
pub fn centerpoint(points: &[HPoint]) -> HPoint {
    assert!(!points.is_empty(), "centerpoint of an empty set");
    if points.len() == 1 {
        return points[0];
    }
    let n = points.len();
    let need = n / 3;
    let kp: Vec<[f64; 2]> = points.iter().map(|p| p.to_klein()).collect();
    let pass = |x: [f64; 2]| klein_tukey_depth(&kp, x) >= need;

    // Rung 1: cheap candidates.
    let centroid = {
        let (mut sx, mut sy) = (0.0, 0.0);
        for p in &kp {
            sx += p[0];
            sy += p[1];
        }
        [sx / n as f64, sy / n as f64]
    };
    let median = {
        let mut xs: Vec<f64> = kp.iter().map(|p| p[0]).collect();
        let mut ys: Vec<f64> = kp.iter().map(|p| p[1]).collect();
        xs.sort_unstable_by(f64::total_cmp);
        ys.sort_unstable_by(f64::total_cmp);
        [xs[n / 2], ys[n / 2]]
    };
    let nearest_input = {
        let mut best = kp[0];
        let mut bd = f64::INFINITY;
        for p in &kp {
            let d = (p[0] - median[0]).hypot(p[1] - median[1]);
            if d < bd {
                bd = d;
                best = *p;
            }
        }
        best
    };
    let mut quick: Vec<[f64; 2]> = vec![centroid, median, nearest_input];
    if n <= 8 {
        quick.extend(kp.iter().copied());
    }
    for cand in quick {
        if pass(cand) {
            return klein_point(cand);
        }
    }

    // Rung 2: cutting planes from exact sweep counterexamples.
    if let Some(x) = cutting_plane_search(&kp, need, &pass) {
        return klein_point(x);
    }

    // Rung 3: intersections of near-halving lines through point pairs,
    // exhaustive for small inputs, best-first otherwise.
    if let Some(x) = line_intersection_search(&kp, need, &pass) {
        return klein_point(x);
    }

    panic!("centerpoint search exhausted; input size {n}");
}

fn klein_point(x: [f64; 2]) -> HPoint {
    let norm = x[0].hypot(x[1]);
    let x = if norm >= 1.0 {
        [x[0] / (norm + 1e-12), x[1] / (norm + 1e-12)]
    } else {
        x
    };
    from_klein(x).expect("centerpoint candidate inside the Klein disk")
}

// Outer polytope refinement: every constraint added is valid for the true
// centerpoint region, and every failed candidate contributes the violated
// constraint discovered by the sweep direction that realized its depth.
fn cutting_plane_search(
    kp: &[[f64; 2]],
    need: usize,
    pass: &dyn Fn([f64; 2]) -> bool,
) -> Option<[f64; 2]> {
    let mut constraints: Vec<([f64; 2], f64)> = Vec::new();
    for k in 0..4 {
        let a = match k {
            0 => [1.0, 0.0],
            1 => [-1.0, 0.0],
            2 => [0.0, 1.0],
            _ => [0.0, -1.0],
        };
        constraints.push((a, 1.0));
    }
    // Seed with quantile constraints for a fan of directions.
    for k in 0..32 {
        let ang = k as f64 * std::f64::consts::TAU / 32.0;
        let a = [ang.cos(), ang.sin()];
        constraints.push((a, quantile_bound(kp, a, need)));
    }

    for _ in 0..200 {
        let (x, slack) = chebyshev_center(&constraints)?;
        if slack < -1e-12 {
            return None;
        }
        if pass(x) {
            return Some(x);
        }
        // Find a violated direction exactly: scan critical directions.
        let a = worst_direction(kp, x)?;
        let bound = quantile_bound(kp, a, need);
        if a[0] * x[0] + a[1] * x[1] <= bound + 1e-15 {
            // No strict cut available; bail to the next rung.
            return None;
        }
        constraints.push((a, bound));
    }
    None
}

// Upper bound on a·y over the centerpoint region: at least `need` points must
// project at or above a·y, so a·y is at most the need-th largest projection.
fn quantile_bound(kp: &[[f64; 2]], a: [f64; 2], need: usize) -> f64 {
    let mut proj: Vec<f64> = kp.iter().map(|p| a[0] * p[0] + a[1] * p[1]).collect();
    proj.sort_unstable_by(f64::total_cmp);
    let need = need.max(1);
    proj[proj.len() - need]
}

// Direction realizing (approximately) the minimum closed-side count at x.
fn worst_direction(kp: &[[f64; 2]], x: [f64; 2]) -> Option<[f64; 2]> {
    let mut best: Option<([f64; 2], usize)> = None;
    let mut angles: Vec<f64> = Vec::new();
    for p in kp {
        let (dx, dy) = (p[0] - x[0], p[1] - x[1]);
        if dx != 0.0 || dy != 0.0 {
            angles.push(dy.atan2(dx));
        }
    }
    if angles.is_empty() {
        return None;
    }
    let half = std::f64::consts::FRAC_PI_2;
    let mut criticals: Vec<f64> = Vec::with_capacity(2 * angles.len());
    for &a in &angles {
        criticals.push(a + half);
        criticals.push(a - half);
    }
    criticals.sort_unstable_by(f64::total_cmp);
    criticals.dedup();
    let k = criticals.len();
    for i in 0..k {
        let lo = criticals[i];
        let hi = if i + 1 == k {
            criticals[0] + std::f64::consts::TAU
        } else {
            criticals[i + 1]
        };
        let nu = (lo + hi) / 2.0;
        let a = [nu.cos(), nu.sin()];
        let c = kp
            .iter()
            .filter(|p| a[0] * (p[0] - x[0]) + a[1] * (p[1] - x[1]) >= 0.0)
            .count();
        if best.map_or(true, |(_, bc)| c < bc) {
            best = Some((a, c));
        }
    }
    best.map(|(a, _)| a)
}

// Chebyshev center of {y : a_i·y <= c_i}: maximize t subject to
// a_i·y + t <= c_i by enumerating basis triples (constraint counts here stay
// small, so cubic enumeration is fine).
fn chebyshev_center(constraints: &[([f64; 2], f64)]) -> Option<([f64; 2], f64)> {
    let m = constraints.len();
    let mut best: Option<([f64; 2], f64)> = None;
    let feasible = |x: [f64; 2], t: f64| {
        constraints.iter().all(|(a, c)| a[0] * x[0] + a[1] * x[1] + t <= c + 1e-9)
    };
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let rows = [constraints[i], constraints[j], constraints[k]];
                if let Some((x, t)) = solve3(&rows) {
                    if t.is_finite() && feasible(x, t) && best.map_or(true, |(_, bt)| t > bt) {
                        best = Some((x, t));
                    }
                }
            }
        }
    }
    best
}

fn solve3(rows: &[([f64; 2], f64); 3]) -> Option<([f64; 2], f64)> {
    // Solve [a_x a_y 1][x y t]^T = c for the three rows.
    let mut m = [[0.0f64; 4]; 3];
    for (r, (a, c)) in rows.iter().enumerate() {
        m[r] = [a[0], a[1], 1.0, *c];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs()))?;
        if m[piv][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, piv);
        let d = m[col][col];
        for c2 in col..4 {
            m[col][c2] /= d;
        }
        for r in 0..3 {
            if r != col {
                let f = m[r][col];
                for c2 in col..4 {
                    m[r][c2] -= f * m[col][c2];
                }
            }
        }
    }
    Some(([m[0][3], m[1][3]], m[2][3]))
}

// Candidate vertices of the depth region: intersections of lines through
// point pairs whose two closed sides are both reasonably large.
fn line_intersection_search(
    kp: &[[f64; 2]],
    need: usize,
    pass: &dyn Fn([f64; 2]) -> bool,
) -> Option<[f64; 2]> {
    let n = kp.len();
    struct Line {
        p: [f64; 2],
        d: [f64; 2],
        balance: usize,
    }
    let mut lines: Vec<Line> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = [kp[j][0] - kp[i][0], kp[j][1] - kp[i][1]];
            let norm = d[0].hypot(d[1]);
            if norm == 0.0 {
                continue;
            }
            let d = [d[0] / norm, d[1] / norm];
            let nrm = [-d[1], d[0]];
            let mut left = 0usize;
            let mut right = 0usize;
            for p in kp {
                let s = nrm[0] * (p[0] - kp[i][0]) + nrm[1] * (p[1] - kp[i][1]);
                if s >= 0.0 {
                    left += 1;
                }
                if s <= 0.0 {
                    right += 1;
                }
            }
            let balance = left.min(right);
            if balance >= need {
                lines.push(Line { p: kp[i], d, balance });
            }
        }
    }
    lines.sort_by(|a, b| b.balance.cmp(&a.balance));
    let cap = if n <= 140 { lines.len() } else { 120.min(lines.len()) };
    let lines = &lines[..cap];
    for p in kp {
        if pass(*p) {
            return Some(*p);
        }
    }
    for (i, li) in lines.iter().enumerate() {
        for lj in lines.iter().skip(i + 1) {
            let det = li.d[0] * lj.d[1] - li.d[1] * lj.d[0];
            if det.abs() < 1e-14 {
                continue;
            }
            let rx = lj.p[0] - li.p[0];
            let ry = lj.p[1] - li.p[1];
            let s = (rx * lj.d[1] - ry * lj.d[0]) / det;
            let x = [li.p[0] + s * li.d[0], li.p[1] + s * li.d[1]];
            if x[0].hypot(x[1]) < 1.0 && pass(x) {
                return Some(x);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::HPoint;

    fn verify(points: &[HPoint]) {
        let c = centerpoint(points);
        let kp: Vec<[f64; 2]> = points.iter().map(|p| p.to_klein()).collect();
        let depth = klein_tukey_depth(&kp, c.to_klein());
        assert!(
            depth >= points.len() / 3,
            "depth {depth} < {} for n = {}",
            points.len() / 3,
            points.len()
        );
    }

    #[test]
    fn single_point_is_its_own_centerpoint() {
        let p = HPoint::new(3.0, 1.0);
        let c = centerpoint(&[p]);
        assert_eq!(c, p);
    }

    #[test]
    fn symmetric_triangle() {
        let pts: Vec<HPoint> =
            (0..3).map(|i| HPoint::new(1.0, i as f64 * std::f64::consts::TAU / 3.0)).collect();
        verify(&pts);
        // Depth of the returned point is at least 1 = ⌊3/3⌋.
    }

    #[test]
    fn collinear_points() {
        let pts: Vec<HPoint> = (0..9)
            .map(|i| {
                if i < 5 {
                    HPoint::new(i as f64 * 0.5, 0.0)
                } else {
                    HPoint::new((i - 4) as f64 * 0.5, std::f64::consts::PI)
                }
            })
            .collect();
        verify(&pts);
    }

    #[test]
    fn coincident_blob() {
        let pts: Vec<HPoint> = (0..7).map(|_| HPoint::new(2.0, 1.0)).collect();
        verify(&pts);
    }

    #[test]
    fn depth_counts_closed_sides() {
        // Four points on the axes; the origin sees two on each closed side of
        // any line (the two on the line itself count for both).
        let kp = vec![[0.5, 0.0], [-0.5, 0.0], [0.0, 0.5], [0.0, -0.5]];
        assert_eq!(klein_tukey_depth(&kp, [0.0, 0.0]), 2);
        assert_eq!(klein_tukey_depth(&kp, [0.9, 0.0]), 0);
    }
}
