//! Hyperboloid-model backend.
//!
//! Points of the hyperbolic plane live on the upper sheet of
//! `x^2 + y^2 - t^2 = -1`, ideal points are future lightlike directions
//! normalized to `t = 1`, and geodesics are intersections of the sheet with
//! planes through the origin (represented by a unit spacelike normal).
//! All closed-form constructions (bisectors, circumcenters, feet of
//! perpendiculars) reduce to linear algebra with the bilinear form
//! `B(u, v) = u.x v.x + u.y v.y - u.t v.t`.

use std::f64::consts::TAU;

/// A vector of the ambient Minkowski space R^{2,1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MVec {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl MVec {
    pub const fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    /// The point of the upper sheet with polar coordinates (radial, angle).
    pub fn from_polar(radial: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let sh = radial.sinh();
        Self::new(sh * c, sh * s, radial.cosh())
    }

    /// Future lightlike direction for the ideal point at `angle`, scaled to t = 1.
    pub fn light(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c, s, 1.0)
    }

    /// Minkowski bilinear form of signature (+, +, -).
    pub fn dot(self, o: MVec) -> f64 {
        self.x * o.x + self.y * o.y - self.t * o.t
    }

    pub fn add(self, o: MVec) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.t + o.t)
    }

    pub fn sub(self, o: MVec) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.t - o.t)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k, self.t * k)
    }

    /// Minkowski cross product: B(cross(u, v), u) = B(cross(u, v), v) = 0.
    pub fn cross(self, o: MVec) -> Self {
        let cx = self.y * o.t - self.t * o.y;
        let cy = self.t * o.x - self.x * o.t;
        let ct = self.x * o.y - self.y * o.x;
        // Lower the index: the Euclidean cross is orthogonal w.r.t. the
        // Euclidean form; flipping the t component makes it B-orthogonal.
        Self::new(cx, cy, -ct)
    }

    /// Normalize a timelike vector onto the upper sheet (B = -1, t > 0).
    /// Returns `None` when the vector is not timelike.
    pub fn normalize_timelike(self) -> Option<Self> {
        let q = self.dot(self);
        if q >= 0.0 || !q.is_finite() {
            return None;
        }
        let k = (-q).sqrt().recip();
        let v = self.scale(if self.t < 0.0 { -k } else { k });
        Some(v)
    }

    /// Normalize a spacelike vector to B = +1. Returns `None` otherwise.
    pub fn normalize_spacelike(self) -> Option<Self> {
        let q = self.dot(self);
        if q <= 0.0 || !q.is_finite() {
            return None;
        }
        Some(self.scale(q.sqrt().recip()))
    }

    /// Polar coordinates (radial, angle in [0, 2π)) of a sheet point.
    pub fn to_polar(self) -> (f64, f64) {
        let rho = self.t.max(1.0).acosh();
        if rho == 0.0 {
            return (0.0, 0.0);
        }
        let angle = self.y.atan2(self.x);
        (rho, wrap_angle(angle))
    }
}

/// Reduce an angle to [0, 2π).
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// arcosh(1 + x) evaluated without cancellation for small x.
pub fn acosh1p(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// log(sinh(t)) for t > 0 without overflow.
pub fn ln_sinh(t: f64) -> f64 {
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if t > 20.0 {
        t - std::f64::consts::LN_2 + (-(-2.0 * t).exp()).ln_1p()
    } else {
        t.sinh().ln()
    }
}

/// Orthonormal tangent basis at a sheet point: `e1` points radially away from
/// the origin, `e2` in the direction of increasing angle. At the origin the
/// basis is the standard (x, y) pair.
pub fn tangent_basis(p: MVec) -> (MVec, MVec) {
    let (rho, angle) = p.to_polar();
    let (s, c) = angle.sin_cos();
    let e1 = MVec::new(rho.cosh() * c, rho.cosh() * s, rho.sinh());
    let e2 = MVec::new(-s, c, 0.0);
    (e1, e2)
}

/// Direction angle of `q` seen from `p`, in the tangent basis of `p`.
/// Requires p != q.
pub fn direction_angle(p: MVec, q: MVec) -> f64 {
    let w = q.add(p.scale(p.dot(q)));
    let (e1, e2) = tangent_basis(p);
    wrap_angle(w.dot(e2).atan2(w.dot(e1)))
}

/// Unit tangent at `p` pointing along the geodesic towards `q`. p != q.
pub fn tangent_towards(p: MVec, q: MVec) -> Option<MVec> {
    q.add(p.scale(p.dot(q))).normalize_spacelike()
}

/// Unit tangent at `p` pointing towards the ideal point with lightlike
/// representative `l`.
pub fn tangent_towards_ideal(p: MVec, l: MVec) -> MVec {
    // B(p, l) < 0 for any sheet point and future lightlike l.
    let b = p.dot(l);
    l.scale(-b.recip()).sub(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_b_orthogonal() {
        let u = MVec::from_polar(1.3, 0.7);
        let v = MVec::from_polar(2.1, 4.0);
        let c = u.cross(v);
        assert!(c.dot(u).abs() < 1e-12);
        assert!(c.dot(v).abs() < 1e-12);
    }

    #[test]
    fn polar_round_trip() {
        let p = MVec::from_polar(3.25, 1.234);
        let (r, a) = p.to_polar();
        assert!((r - 3.25).abs() < 1e-12);
        assert!((a - 1.234).abs() < 1e-12);
    }

    #[test]
    fn tangent_towards_is_unit_and_orthogonal() {
        let p = MVec::from_polar(0.9, 2.2);
        let q = MVec::from_polar(1.7, 5.1);
        let w = tangent_towards(p, q).unwrap();
        assert!((w.dot(w) - 1.0).abs() < 1e-10);
        assert!(w.dot(p).abs() < 1e-10);
    }

    #[test]
    fn ideal_tangent_is_unit() {
        let p = MVec::from_polar(2.0, 0.3);
        let w = tangent_towards_ideal(p, MVec::light(1.0));
        assert!((w.dot(w) - 1.0).abs() < 1e-9);
        assert!(w.dot(p).abs() < 1e-9);
    }
}
