//! Instance generation and the shared JSON instance format.
//!
//! All generators are deterministic per seed (ChaCha8 keyed by the seed), so
//! instances are reproducible across runs and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, DiskGraph};
use crate::hgeom::{dist, from_halfplane, HPoint};

/// A problem instance: the shared JSON format is
/// `{"r": <real>, "points": [[radial, angle], ...]}` with optional
/// provenance fields. Adjacency is never serialized; it is recomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub r: f64,
    pub points: Vec<HPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

impl Instance {
    pub fn new(r: f64, points: Vec<HPoint>) -> Self {
        Self { r, points, seed: None, generator: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_graph(&self) -> Result<DiskGraph> {
        build_graph(self.points.clone(), self.r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(s)?;
        if !(inst.r > 0.0) || !inst.r.is_finite() {
            return Err(Error::InvalidInput(format!("instance radius must be positive, got {}", inst.r)));
        }
        Ok(inst)
    }
}

/// Sample a radial coordinate uniform in hyperbolic area on a disk of radius
/// `big_r`: CDF sinh²(ρ/2)/sinh²(R/2), i.e. ρ = arcosh(1 + u (cosh R - 1)).
fn sample_radial(rng: &mut ChaCha8Rng, big_r: f64) -> f64 {
    let u: f64 = rng.gen();
    let x = u * 2.0 * (big_r / 2.0).sinh().powi(2);
    crate::hgeom::minkowski::acosh1p(x)
}

/// `n` centers sampled uniformly (by hyperbolic area) in the disk of radius
/// `big_r`, packaged with disk radius `r`.
pub fn gen_random(n: usize, big_r: f64, r: f64, seed: u64) -> Instance {
    assert!(n >= 1 && big_r > 0.0 && r > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            let angle = rng.gen::<f64>() * std::f64::consts::TAU;
            let radial = sample_radial(&mut rng, big_r);
            HPoint::new(radial, angle)
        })
        .collect();
    Instance { r, points, seed: Some(seed), generator: Some(format!("random(n={n},R={big_r})")) }
}

/// Margin added to the 2r minimum pairwise distance so downstream strict
/// comparisons are robust.
const MINDIST_MARGIN: f64 = 1e-9;

/// Rejection-sample `n` points with pairwise distance > 2r inside the disk
/// of radius `big_r`. Fails once the attempt budget runs out.
pub fn gen_mindist(n: usize, r: f64, big_r: f64, seed: u64, attempt_budget: u64) -> Result<Instance> {
    assert!(n >= 1 && big_r > 0.0 && r > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<HPoint> = Vec::with_capacity(n);
    let mut attempts = 0u64;
    while points.len() < n {
        attempts += 1;
        if attempts > attempt_budget {
            return Err(Error::SamplingExhausted { attempts });
        }
        let angle = rng.gen::<f64>() * std::f64::consts::TAU;
        let radial = sample_radial(&mut rng, big_r);
        let p = HPoint::new(radial, angle);
        if points.iter().all(|q| dist(&p, q) > 2.0 * r + MINDIST_MARGIN) {
            points.push(p);
        }
    }
    Ok(Instance {
        r,
        points,
        seed: Some(seed),
        generator: Some(format!("mindist(n={n},R={big_r})")),
    })
}

/// The k×k grid realization: vertex (i, j) at half-plane coordinate
/// (2i/n³, 1 + 2j/n³) with disk radius 1/n³, n = k².
pub fn gen_grid(k: usize) -> Instance {
    assert!(k >= 2);
    let n = (k * k) as f64;
    let n3 = n.powi(3);
    let mut points = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let p = from_halfplane(2.0 * i as f64 / n3, 1.0 + 2.0 * j as f64 / n3)
                .expect("half-plane grid coordinate");
            points.push(p);
        }
    }
    Instance { r: 1.0 / n3, points, seed: None, generator: Some(format!("grid(k={k})")) }
}

/// The star S_n realization: center at the origin, n-1 leaves evenly on the
/// circle of radius 2r with r = log n.
pub fn gen_star(n: usize) -> Instance {
    assert!(n >= 3);
    let r = (n as f64).ln();
    let mut points = Vec::with_capacity(n);
    points.push(HPoint::origin());
    let leaves = n - 1;
    for j in 0..leaves {
        points.push(HPoint::new(2.0 * r, j as f64 * std::f64::consts::TAU / leaves as f64));
    }
    Instance { r, points, seed: None, generator: Some(format!("star(n={n})")) }
}

/// Grid-graph adjacency oracle for the fixture: (i, j) indexed row-major.
pub fn grid_graph_adjacent(k: usize, a: usize, b: usize) -> bool {
    let (ai, aj) = (a / k, a % k);
    let (bi, bj) = (b / k, b % k);
    ai.abs_diff(bi) + aj.abs_diff(bj) == 1
}
