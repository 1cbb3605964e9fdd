//! Points of the hyperbolic plane in native polar form, plus conversions to
//! the Poincaré disk, Beltrami–Klein disk, and upper half-plane models.
//!
//! Polar form keeps large radii exact: a Poincaré radius `tanh(d/2)` is
//! indistinguishable from 1 in doubles once `d` exceeds ~38, while polar
//! coordinates carry radii in the hundreds without loss. Model conversions
//! exist for I/O, fixtures, and Klein-model combinatorial tests.

use std::f64::consts::TAU;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::minkowski::{acosh1p, ln_sinh, wrap_angle, MVec};
use crate::error::Error;

/// A point of the hyperbolic plane: distance to the origin and direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    radial: f64,
    angle: f64,
}

impl HPoint {
    /// Construct from polar data; the angle is reduced to [0, 2π) and the
    /// origin is canonicalized to angle 0.
    pub fn new(radial: f64, angle: f64) -> Self {
        assert!(radial.is_finite() && radial >= 0.0, "radial must be finite and >= 0");
        if radial == 0.0 {
            return Self { radial: 0.0, angle: 0.0 };
        }
        Self { radial, angle: wrap_angle(angle) }
    }

    pub const fn origin() -> Self {
        Self { radial: 0.0, angle: 0.0 }
    }

    pub fn radial(&self) -> f64 {
        self.radial
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub(crate) fn to_minkowski(self) -> MVec {
        MVec::from_polar(self.radial, self.angle)
    }

    pub(crate) fn from_minkowski(v: MVec) -> Self {
        let (radial, angle) = v.to_polar();
        Self::new(radial, angle)
    }

    /// Euclidean image in the Poincaré disk (radius tanh(d/2)).
    pub fn to_poincare(self) -> [f64; 2] {
        let e = (self.radial / 2.0).tanh();
        let (s, c) = self.angle.sin_cos();
        [e * c, e * s]
    }

    /// Euclidean image in the Beltrami–Klein disk (radius tanh d).
    pub fn to_klein(self) -> [f64; 2] {
        let e = self.radial.tanh();
        let (s, c) = self.angle.sin_cos();
        [e * c, e * s]
    }
}

/// Hyperbolic distance via the polar law of cosines, evaluated through the
/// cancellation-free identity
/// `cosh d - 1 = 2 [ (sin(Δθ/2) sinh((r1+r2)/2))² + (cos(Δθ/2) sinh((r1-r2)/2))² ]`,
/// finished with arcosh(1+x) = log1p(x + sqrt(x(x+2))). Every term is
/// nonnegative, so the formula is accurate both for the near-Euclidean grid
/// regime (distances ~1e-4) and deep in the hyperbolic regime. Sums of radii
/// beyond ~700 (where sinh overflows) switch to an equivalent log-space form.
pub fn dist(p: &HPoint, q: &HPoint) -> f64 {
    let (r1, a1) = (p.radial, p.angle);
    let (r2, a2) = (q.radial, q.angle);
    let dmid = (a1 - a2).rem_euclid(TAU);
    let half = if dmid > std::f64::consts::PI { TAU - dmid } else { dmid } / 2.0;
    let (sh, ch) = (half.sin(), half.cos());
    let sum = r1 + r2;
    let diff = (r1 - r2).abs();

    if sum > 700.0 {
        // log-space: cosh d - 1 = 2 (a² + b²) with a, b as below.
        let la = if sh == 0.0 { f64::NEG_INFINITY } else { sh.ln() + ln_sinh(sum / 2.0) };
        let lb = if ch == 0.0 || diff == 0.0 { f64::NEG_INFINITY } else { ch.ln() + ln_sinh(diff / 2.0) };
        let m = la.max(lb);
        if m == f64::NEG_INFINITY {
            return 0.0;
        }
        let ln_x = std::f64::consts::LN_2 + 2.0 * m + (2.0 * (la.min(lb) - m)).exp().ln_1p();
        // x is astronomically large here; arcosh(1 + x) = ln(2x) + O(1/x).
        return std::f64::consts::LN_2 + ln_x;
    }

    let a = sh * (sum / 2.0).sinh();
    let b = ch * (diff / 2.0).sinh();
    acosh1p(2.0 * (a * a + b * b))
}

/// An ideal point: a direction at infinity, identified by its boundary angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint {
    angle: f64,
}

impl IdealPoint {
    pub fn new(angle: f64) -> Self {
        Self { angle: wrap_angle(angle) }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub(crate) fn to_light(self) -> MVec {
        MVec::light(self.angle)
    }
}

/// Inverse of [`HPoint::to_poincare`]. Rejects points on or outside the unit circle.
pub fn from_poincare(p: [f64; 2]) -> Result<HPoint, Error> {
    let e = p[0].hypot(p[1]);
    if !(e < 1.0) {
        return Err(Error::OutsideModelDisk { norm: e });
    }
    // d = 2 artanh(e), stable for e near 0.
    let radial = ((2.0 * e) / (1.0 - e)).ln_1p();
    Ok(HPoint::new(radial, p[1].atan2(p[0])))
}

/// Inverse of [`HPoint::to_klein`]. Rejects points on or outside the unit circle.
pub fn from_klein(p: [f64; 2]) -> Result<HPoint, Error> {
    let e = p[0].hypot(p[1]);
    if !(e < 1.0) {
        return Err(Error::OutsideModelDisk { norm: e });
    }
    let radial = 0.5 * ((2.0 * e) / (1.0 - e)).ln_1p();
    Ok(HPoint::new(radial, p[1].atan2(p[0])))
}

/// Map an upper half-plane point to polar form via the Cayley transform
/// `w = (z - i) / (z + i)`, which sends (0, 1) to the model center.
pub fn from_halfplane(x: f64, y: f64) -> Result<HPoint, Error> {
    if !(y > 0.0) {
        return Err(Error::InvalidHalfPlane { y });
    }
    // w = (x + i(y-1)) / (x + i(y+1))
    let (nr, ni) = (x, y - 1.0);
    let (dr, di) = (x, y + 1.0);
    let den = dr * dr + di * di;
    let wr = (nr * dr + ni * di) / den;
    let wi = (ni * dr - nr * di) / den;
    from_poincare([wr, wi])
}

/// Inverse Cayley transform `z = i (1 + w) / (1 - w)`.
pub fn to_halfplane(p: &HPoint) -> [f64; 2] {
    let [wr, wi] = p.to_poincare();
    let (nr, ni) = (1.0 + wr, wi);
    let (dr, di) = (1.0 - wr, -wi);
    let den = dr * dr + di * di;
    let zr = (nr * dr + ni * di) / den;
    let zi = (ni * dr - nr * di) / den;
    // multiply by i
    [-zi, zr]
}

// HPoint serializes as the two-element array [radial, angle].
impl Serialize for HPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.radial)?;
        t.serialize_element(&self.angle)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for HPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = HPoint;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a [radial, angle] pair")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<HPoint, A::Error> {
                let radial: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let angle: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if !(radial.is_finite() && radial >= 0.0) {
                    return Err(de::Error::custom("radial must be finite and >= 0"));
                }
                Ok(HPoint::new(radial, angle))
            }
        }
        deserializer.deserialize_tuple(2, V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_identity() {
        for p in [HPoint::origin(), HPoint::new(3.0, 1.0), HPoint::new(40.0, 5.0)] {
            assert_eq!(dist(&p, &p), 0.0);
        }
    }

    #[test]
    fn dist_through_origin() {
        for d in [1e-6, 0.5, 2.0, 25.0] {
            let p = HPoint::new(d, 0.3);
            let q = HPoint::new(d, 0.3 + std::f64::consts::PI);
            let got = dist(&p, &q);
            assert!((got - 2.0 * d).abs() <= 1e-12 * (2.0 * d), "d={d} got={got}");
        }
    }

    #[test]
    fn dist_matches_halfplane_formula_grid_scale() {
        // Theorem-style cross check at n = 4: points (0, 1) and (2/n^3, 1).
        let n: f64 = 4.0;
        let dx = 2.0 / n.powi(3);
        let p = from_halfplane(0.0, 1.0).unwrap();
        let q = from_halfplane(dx, 1.0).unwrap();
        let expected = acosh1p(dx * dx / 2.0);
        let got = dist(&p, &q);
        assert!((got - expected).abs() <= 1e-9 * expected.max(1e-300));
    }

    #[test]
    fn dist_huge_radii_log_space() {
        let p = HPoint::new(400.0, 0.0);
        let q = HPoint::new(400.0, 1.0);
        // cosh d ≈ sin²(1/2) e^{800} / 2; d ≈ 800 + ln(sin²(0.5)/2) + ln 2... compare
        // against the analytic dominant term.
        let expected = 800.0 + (0.5f64.sin().powi(2)).ln();
        assert!((dist(&p, &q) - expected).abs() < 1e-6);
    }

    #[test]
    fn halfplane_base_point_is_origin() {
        let p = from_halfplane(0.0, 1.0).unwrap();
        assert_eq!(p.radial(), 0.0);
    }

    #[test]
    fn poincare_definition_point() {
        let p = HPoint::new(2.0, 0.0);
        let [x, y] = p.to_poincare();
        assert!((x - 1.0f64.tanh()).abs() < 1e-15 && y.abs() < 1e-15);
        assert_eq!(HPoint::origin().to_poincare(), [0.0, 0.0]);
        assert_eq!(HPoint::origin().to_klein(), [0.0, 0.0]);
    }

    #[test]
    fn inverse_conversions_reject_boundary() {
        assert!(from_poincare([1.0, 0.0]).is_err());
        assert!(from_klein([0.8, 0.7]).is_err());
        assert!(from_halfplane(0.0, 0.0).is_err());
        assert!(from_halfplane(1.0, -2.0).is_err());
    }

    #[test]
    fn serde_two_element_array() {
        let p = HPoint::new(1.5, 2.25);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[1.5,2.25]");
        let back: HPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
