//! Closed-form scalar identities of the hyperbolic plane.

/// Angle of parallelism: sin Π(x) = 1 / cosh(x). Strictly decreasing, with
/// Π(0+) = π/2.
pub fn angle_of_parallelism(x: f64) -> f64 {
    assert!(x > 0.0, "angle of parallelism needs x > 0");
    x.cosh().recip().asin()
}

/// Area of a disk of hyperbolic radius r: 4π sinh²(r/2).
pub fn disk_area(r: f64) -> f64 {
    assert!(r >= 0.0);
    let s = (r / 2.0).sinh();
    4.0 * std::f64::consts::PI * s * s
}

/// Area of a right-angled triangle with legs a and b:
/// 2 arctan(tanh(a/2) tanh(b/2)).
pub fn right_triangle_area(a: f64, b: f64) -> f64 {
    assert!(a >= 0.0 && b >= 0.0);
    2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atan()
}

/// Summit length of a Saccheri quadrilateral with the given base and legs:
/// sinh(summit/2) = cosh(leg) sinh(base/2).
pub fn saccheri_summit(base: f64, leg: f64) -> f64 {
    assert!(base > 0.0 && leg > 0.0);
    2.0 * (leg.cosh() * (base / 2.0).sinh()).asinh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parallelism_limit_and_monotonicity() {
        assert!((angle_of_parallelism(1e-9) - PI / 2.0).abs() < 1e-6);
        let mut prev = PI / 2.0;
        for i in 1..200 {
            let x = i as f64 * 0.05;
            let v = angle_of_parallelism(x);
            assert!(v < prev && v > 0.0 && v < PI / 2.0);
            prev = v;
        }
    }

    #[test]
    fn parallelism_exponential_bound() {
        // Π(x) ≤ (π/2) sin Π(x) = (π/2) / cosh(x) < π e^{-x} / 2 · 2; the bound
        // used by the inner-degree argument is Π(x) ≤ π e^{-x}.
        for i in 1..400 {
            let x = i as f64 * 0.05;
            assert!(angle_of_parallelism(x) < PI * (-x).exp());
        }
    }

    #[test]
    fn parallelism_at_one() {
        let expected = (1.0f64.cosh().recip()).asin();
        assert_eq!(angle_of_parallelism(1.0), expected);
    }

    #[test]
    fn disk_area_edge_cases() {
        assert_eq!(disk_area(0.0), 0.0);
        // Euclidean limit: area / (π r²) -> 1 as r -> 0.
        for r in [1e-4, 1e-3, 1e-2] {
            let ratio = disk_area(r) / (PI * r * r);
            assert!((ratio - 1.0).abs() < 1e-3, "r={r} ratio={ratio}");
        }
        // Strictly increasing.
        let mut prev = 0.0;
        for i in 1..100 {
            let a = disk_area(i as f64 * 0.1);
            assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn disk_area_beats_polygon_bound() {
        // Bounded Voronoi cells need area < (n-3)π while the inscribed disk of
        // radius log n has area 4π sinh²(log(n)/2) — larger from n = 26 on.
        for n in 26..=100 {
            let nf = n as f64;
            assert!(disk_area(nf.ln()) > (nf - 3.0) * PI, "n={n}");
        }
    }

    #[test]
    fn triangle_area_bounds() {
        assert_eq!(right_triangle_area(0.0, 2.0), 0.0);
        for i in 0..=18 {
            let a = i as f64 * 0.1;
            for j in 0..60 {
                let b = j as f64 * 0.1;
                let area = right_triangle_area(a, b);
                // Lemma-level bounds: area ≤ min{a, π} and, for a ≤ 1.8,
                // area ≥ a/5 · min{b, π}.
                assert!(area <= a.min(PI) + 1e-12);
                assert!(area + 1e-12 >= a / 5.0 * b.min(PI), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn saccheri_degenerate_and_box_diameter() {
        for base in [0.1, 1.0, 3.0] {
            let s = saccheri_summit(base, 1e-12);
            assert!((s - base).abs() < 1e-9);
        }
        // Box-diameter inequality: base tanh r, legs r gives summit < 2r.
        for r in [0.01f64, 0.1, 1.0, 5.0] {
            assert!(saccheri_summit(r.tanh(), r) < 2.0 * r, "r={r}");
        }
        let expected = 2.0 * (1.0f64.cosh() * 0.5f64.sinh()).asinh();
        assert_eq!(saccheri_summit(1.0, 1.0), expected);
    }
}
