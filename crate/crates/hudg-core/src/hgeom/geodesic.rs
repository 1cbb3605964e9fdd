//! Geodesics, segments, rays, ideal arcs, and the closed-form constructions
//! on them (perpendicular bisectors, circumcenters, feet of perpendiculars).

use std::f64::consts::TAU;

use super::minkowski::{self, wrap_angle, MVec};
use super::point::{dist, HPoint, IdealPoint};
use crate::error::Error;

/// Circumcenters whose radial coordinate exceeds this are treated as escaped
/// to infinity (no finite Voronoi vertex).
pub const CIRCUMCENTER_RADIAL_CAP: f64 = 1e4;

/// A complete geodesic, stored as its ordered pair of ideal endpoints.
/// Traveling from `start` to `end`, the positive side of [`Geodesic::normal`]
/// is on the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    start: IdealPoint,
    end: IdealPoint,
}

impl Geodesic {
    pub fn new(start: IdealPoint, end: IdealPoint) -> Result<Self, Error> {
        let g = Self { start, end };
        if g.raw_normal().normalize_spacelike().is_none() {
            return Err(Error::CoincidentPoints);
        }
        Ok(g)
    }

    /// Geodesic through `p` heading in tangent direction `dir_angle`
    /// (measured in the tangent basis of `p`).
    pub fn through(p: &HPoint, dir_angle: f64) -> Self {
        let pm = p.to_minkowski();
        let (e1, e2) = minkowski::tangent_basis(pm);
        let (s, c) = dir_angle.sin_cos();
        let u = e1.scale(c).add(e2.scale(s));
        let fwd = pm.add(u);
        let back = pm.sub(u);
        Self {
            start: IdealPoint::new(back.y.atan2(back.x)),
            end: IdealPoint::new(fwd.y.atan2(fwd.x)),
        }
    }

    pub fn endpoints(&self) -> (IdealPoint, IdealPoint) {
        (self.start, self.end)
    }

    fn raw_normal(&self) -> MVec {
        self.start.to_light().cross(self.end.to_light())
    }

    /// Unit spacelike normal; B(x, normal) > 0 on the left of start->end.
    /// (The Minkowski cross of the two future lightlike endpoint directions,
    /// taken in traversal order, already points to the left side.)
    pub(crate) fn normal(&self) -> MVec {
        self.raw_normal().normalize_spacelike().expect("degenerate geodesic")
    }

    /// Point on the geodesic closest to the model origin (the parameter base).
    pub(crate) fn base(&self) -> MVec {
        let n = self.normal();
        let o = MVec::new(0.0, 0.0, 1.0);
        o.sub(n.scale(o.dot(n))).normalize_timelike().expect("geodesic base")
    }

    /// Unit tangent at [`Geodesic::base`] pointing towards `end`.
    pub(crate) fn forward(&self) -> MVec {
        let c = self.base();
        let w = minkowski::tangent_towards_ideal(c, self.end.to_light());
        w.normalize_spacelike().expect("geodesic tangent")
    }

    /// Arclength parametrization with `point_at(0)` the closest point to the
    /// model origin, increasing towards `end`.
    pub fn point_at(&self, t: f64) -> HPoint {
        let c = self.base();
        let d = self.forward();
        HPoint::from_minkowski(c.scale(t.cosh()).add(d.scale(t.sinh())))
    }

    /// Signed projection parameter of the foot of the perpendicular from `p`.
    /// Minimizes A cosh t + C sinh t, hence tanh t = -C/A.
    pub fn foot_param(&self, p: &HPoint) -> f64 {
        let pm = p.to_minkowski();
        let a = -pm.dot(self.base());
        let c = -pm.dot(self.forward());
        (-c / a).atanh()
    }
}

/// Signed distance from `p` to `g`: positive on the left of start->end.
pub fn signed_dist_point_geodesic(p: &HPoint, g: &Geodesic) -> f64 {
    p.to_minkowski().dot(g.normal()).asinh()
}

/// Distance from a point to a complete geodesic.
pub fn dist_point_geodesic(p: &HPoint, g: &Geodesic) -> f64 {
    signed_dist_point_geodesic(p, g).abs()
}

/// A geodesic segment between two distinct finite points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: HPoint,
    pub b: HPoint,
}

/// A geodesic ray from a finite origin to an ideal endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: HPoint,
    pub end: IdealPoint,
}

/// A boundary arc traversed clockwise from `from` to `to`; membership uses
/// the half-open convention [from, to).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealArc {
    pub from: IdealPoint,
    pub to: IdealPoint,
}

impl IdealArc {
    /// Clockwise angular extent in (0, 2π].
    pub fn width(&self) -> f64 {
        let w = wrap_angle(self.from.angle() - self.to.angle());
        if w == 0.0 {
            TAU
        } else {
            w
        }
    }

    pub fn contains(&self, angle: f64) -> bool {
        let offset = wrap_angle(self.from.angle() - wrap_angle(angle));
        offset < self.width() || offset == 0.0
    }
}

/// Distance from `p` to the segment; clamps to the nearer endpoint when the
/// foot of the perpendicular falls outside.
pub fn dist_point_segment(p: &HPoint, seg: &Segment) -> f64 {
    let u = seg.a.to_minkowski();
    let v = seg.b.to_minkowski();
    let len = dist(&seg.a, &seg.b);
    if len == 0.0 {
        return dist(p, &seg.a);
    }
    let w = match minkowski::tangent_towards(u, v) {
        Some(w) => w,
        None => return dist(p, &seg.a),
    };
    let pm = p.to_minkowski();
    let a = -pm.dot(u);
    let c = -pm.dot(w);
    let t = (-c / a).atanh();
    if t <= 0.0 {
        dist(p, &seg.a)
    } else if t >= len {
        dist(p, &seg.b)
    } else {
        let n = u.cross(w).normalize_spacelike().expect("segment normal");
        pm.dot(n).abs().asinh()
    }
}

/// Distance from `p` to the ray; clamps to the origin when the foot of the
/// perpendicular falls behind it.
pub fn dist_point_ray(p: &HPoint, ray: &Ray) -> f64 {
    let u = ray.origin.to_minkowski();
    let w = match minkowski::tangent_towards_ideal(u, ray.end.to_light()).normalize_spacelike() {
        Some(w) => w,
        None => return dist(p, &ray.origin),
    };
    let pm = p.to_minkowski();
    let a = -pm.dot(u);
    let c = -pm.dot(w);
    let t = (-c / a).atanh();
    if t <= 0.0 {
        dist(p, &ray.origin)
    } else {
        let n = u.cross(w).normalize_spacelike().expect("ray normal");
        pm.dot(n).abs().asinh()
    }
}

/// Perpendicular bisector of two distinct points, oriented with `p` on its
/// left side.
pub fn perpendicular_bisector(p: &HPoint, q: &HPoint) -> Result<Geodesic, Error> {
    let pm = p.to_minkowski();
    let qm = q.to_minkowski();
    let n = pm.sub(qm);
    let n = n.normalize_spacelike().ok_or(Error::CoincidentPoints)?;
    let (a1, a2) = plane_ideal_angles(n).ok_or(Error::CoincidentPoints)?;
    let g = Geodesic::new(IdealPoint::new(a1), IdealPoint::new(a2))?;
    if g.normal().dot(pm) >= 0.0 {
        Ok(g)
    } else {
        Ok(Geodesic::new(IdealPoint::new(a2), IdealPoint::new(a1))?)
    }
}

/// Ideal angles of the plane with spacelike normal `n` (two lightlike
/// directions with B(l, n) = 0).
fn plane_ideal_angles(n: MVec) -> Option<(f64, f64)> {
    let r = n.x.hypot(n.y);
    if r == 0.0 {
        return None;
    }
    let phi = n.y.atan2(n.x);
    let psi = (n.t / r).clamp(-1.0, 1.0).acos();
    Some((wrap_angle(phi - psi), wrap_angle(phi + psi)))
}

/// The point equidistant from three pairwise distinct points, when a finite
/// one exists. `None` signals that the bisectors meet at infinity or diverge.
pub fn circumcenter(a: &HPoint, b: &HPoint, c: &HPoint) -> Option<HPoint> {
    let am = a.to_minkowski();
    let bm = b.to_minkowski();
    let cm = c.to_minkowski();
    let x = am.sub(bm).cross(am.sub(cm));
    let x = x.normalize_timelike()?;
    let p = HPoint::from_minkowski(x);
    if p.radial() > CIRCUMCENTER_RADIAL_CAP {
        None
    } else {
        Some(p)
    }
}

/// The set of ideal directions whose points at infinity are closer to `s`
/// than to `w`: exactly the boundary arc cut off by the perpendicular
/// bisector of (s, w) on the `s` side.
pub fn halfplane_ideal_arc(s: &HPoint, w: &HPoint) -> Result<IdealArc, Error> {
    let d = s.to_minkowski().sub(w.to_minkowski());
    d.normalize_spacelike().ok_or(Error::CoincidentPoints)?;
    // Membership condition: d.x cos α + d.y sin α > d.t.
    let r = d.x.hypot(d.y);
    let phi = d.y.atan2(d.x);
    let psi = (d.t / r).clamp(-1.0, 1.0).acos();
    Ok(IdealArc {
        from: IdealPoint::new(phi + psi),
        to: IdealPoint::new(phi - psi),
    })
}

/// Direction angle of `q` in the tangent basis of `p`; requires p != q.
pub fn angle_at(p: &HPoint, q: &HPoint) -> f64 {
    minkowski::direction_angle(p.to_minkowski(), q.to_minkowski())
}

/// Interior angle of the triangle (a, b, c) at vertex `a`, in [0, π].
pub fn interior_angle(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    let d = (angle_at(a, b) - angle_at(a, c)).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Signed area of the triangle (a, b, c) via the angle defect, positive for
/// counterclockwise orientation (in the Klein model). Degenerate triangles
/// have area 0.
pub fn triangle_area_signed(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    let ka = a.to_klein();
    let kb = b.to_klein();
    let kc = c.to_klein();
    let cross = (kb[0] - ka[0]) * (kc[1] - ka[1]) - (kb[1] - ka[1]) * (kc[0] - ka[0]);
    if cross == 0.0 {
        return 0.0;
    }
    let defect = std::f64::consts::PI
        - interior_angle(a, b, c)
        - interior_angle(b, c, a)
        - interior_angle(c, a, b);
    defect.max(0.0) * cross.signum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bisector_of_symmetric_pair_contains_origin() {
        let p = HPoint::new(2.0, 0.25);
        let q = HPoint::new(2.0, 0.25 + PI);
        let g = perpendicular_bisector(&p, &q).unwrap();
        assert!(dist_point_geodesic(&HPoint::origin(), &g) < 1e-9);
    }

    #[test]
    fn bisector_contains_midpoint() {
        let p = HPoint::new(1.0, 0.3);
        let q = HPoint::new(2.5, 1.9);
        let m = HPoint::from_minkowski(
            p.to_minkowski().add(q.to_minkowski()).normalize_timelike().unwrap(),
        );
        let g = perpendicular_bisector(&p, &q).unwrap();
        assert!(dist_point_geodesic(&m, &g) < 1e-9);
        assert!((dist(&m, &p) - dist(&m, &q)).abs() < 1e-9);
    }

    #[test]
    fn bisector_orientation_has_first_point_on_left() {
        let p = HPoint::new(1.2, 0.1);
        let q = HPoint::new(0.4, 2.0);
        let g = perpendicular_bisector(&p, &q).unwrap();
        assert!(signed_dist_point_geodesic(&p, &g) > 0.0);
        assert!(signed_dist_point_geodesic(&q, &g) < 0.0);
    }

    #[test]
    fn geodesic_through_point_passes_it() {
        let p = HPoint::new(1.7, 4.0);
        let g = Geodesic::through(&p, 1.1);
        assert!(dist_point_geodesic(&p, &g) < 1e-9);
        // point_at(foot) recovers p
        let t = g.foot_param(&p);
        assert!(dist(&g.point_at(t), &p) < 1e-9);
    }

    #[test]
    fn circumcenter_equilateral_is_origin() {
        let pts: Vec<HPoint> = (0..3).map(|i| HPoint::new(1.5, i as f64 * TAU / 3.0)).collect();
        let c = circumcenter(&pts[0], &pts[1], &pts[2]).unwrap();
        assert!(c.radial() < 1e-9);
    }

    #[test]
    fn circumcenter_absent_for_far_collinear_points() {
        // Points on the common geodesic through the origin, slightly perturbed.
        let a = HPoint::new(6.0, 0.0);
        let b = HPoint::new(0.0, 0.0);
        let c = HPoint::new(6.0, PI + 1e-12);
        assert!(circumcenter(&a, &b, &c).is_none());
    }

    #[test]
    fn segment_distance_clamps() {
        let seg = Segment { a: HPoint::new(1.0, 0.0), b: HPoint::new(2.0, 0.0) };
        // Beyond the far endpoint.
        let p = HPoint::new(3.0, 0.0);
        assert!((dist_point_segment(&p, &seg) - 1.0).abs() < 1e-9);
        // On the element.
        let q = HPoint::new(1.5, 0.0);
        assert!(dist_point_segment(&q, &seg) < 1e-9);
        // Foot inside: equals distance to the supporting geodesic.
        let r = HPoint::new(1.5, 0.4);
        let g = Geodesic::through(&HPoint::new(1.0, 0.0), 0.0);
        assert!((dist_point_segment(&r, &seg) - dist_point_geodesic(&r, &g)).abs() < 1e-9);
    }

    #[test]
    fn ray_distance_clamps_to_origin() {
        let ray = Ray { origin: HPoint::new(1.0, 0.0), end: IdealPoint::new(0.0) };
        let p = HPoint::new(0.5, PI);
        assert!((dist_point_ray(&p, &ray) - 1.5).abs() < 1e-9);
        let on = HPoint::new(4.0, 0.0);
        assert!(dist_point_ray(&on, &ray) < 1e-9);
    }

    #[test]
    fn halfplane_arc_symmetric_case() {
        let s = HPoint::origin();
        let w = HPoint::new(2.0, 0.0);
        let arc = halfplane_ideal_arc(&s, &w).unwrap();
        assert!(arc.contains(PI));
        assert!(!arc.contains(0.0));
        // Complementarity up to endpoints.
        let rev = halfplane_ideal_arc(&w, &s).unwrap();
        for k in 0..360 {
            let a = k as f64 * TAU / 360.0 + 0.001;
            assert!(arc.contains(a) != rev.contains(a), "angle {a}");
        }
    }

    #[test]
    fn arc_membership_half_open() {
        let arc = IdealArc { from: IdealPoint::new(1.0), to: IdealPoint::new(0.5) };
        assert!(arc.contains(1.0));
        assert!(!arc.contains(0.5));
        assert!(arc.contains(0.75));
        assert!(!arc.contains(2.0));
    }

    #[test]
    fn triangle_area_sign_flips_with_orientation() {
        let a = HPoint::new(1.0, 0.0);
        let b = HPoint::new(1.0, 2.0);
        let c = HPoint::new(1.0, 4.0);
        let s1 = triangle_area_signed(&a, &b, &c);
        let s2 = triangle_area_signed(&a, &c, &b);
        assert!(s1 > 0.0);
        assert!((s1 + s2).abs() < 1e-9);
    }
}
