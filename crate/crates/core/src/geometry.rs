//! Planar point-process primitives: homogeneous Poisson sampling on a disk,
//! independent thinning, translation, and nearest-point queries.
//!
//! Everything here is pure given its RNG stream. [`PointSet`] values are
//! immutable after construction and safe to share across threads; parallelism
//! always lives one level up, over independent realizations.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn offset_by(self, offset: Point2) -> Point2 {
        Point2::new(self.x + offset.x, self.y + offset.y)
    }

    pub fn negated(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// An ordered list of points together with the sampling window radius and the
/// nominal intensity of the process that produced it.
///
/// Freshly sampled sets live inside the disk of `window_radius` centered at
/// the origin; [`translate`] shifts the points while keeping the radius as
/// provenance of the original window.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point2>,
    window_radius: f64,
    intensity: f64,
}

impl PointSet {
    /// Wraps an explicit list of points (fixtures, tests).
    pub fn from_points(points: Vec<Point2>, window_radius: f64, intensity: f64) -> Self {
        Self {
            points,
            window_radius,
            intensity,
        }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn window_radius(&self) -> f64 {
        self.window_radius
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }
}

/// A 64-bit seed. Identical seeds reproduce identical realizations
/// bit-for-bit; [`RngSeed::stream`] derives independent sub-streams from it
/// so that every (realization, purpose) pair gets its own generator, which is
/// what makes parallel Monte Carlo reproducible regardless of scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Single stream derived from the bare seed.
    pub fn rng(self) -> ChaCha8Rng {
        self.stream(0, 0)
    }

    /// Independent stream for (realization, purpose).
    pub fn stream(self, realization: u64, purpose: u64) -> ChaCha8Rng {
        self.stream_attempt(realization, purpose, 0)
    }

    /// Like [`RngSeed::stream`] but with a resampling attempt counter, used
    /// when a realization is rejected and redrawn.
    pub fn stream_attempt(self, realization: u64, purpose: u64, attempt: u32) -> ChaCha8Rng {
        // splitmix64 is a bijection on u64, so distinct (seed, realization,
        // purpose, attempt) tuples map to distinct 32-byte ChaCha seeds.
        let words = [
            splitmix64(self.0),
            splitmix64(realization ^ 0x9e37_79b9_7f4a_7c15),
            splitmix64(purpose.wrapping_add(0x2545_f491_4f6c_dd1d)),
            splitmix64(attempt as u64 ^ 0xda94_2042_e4dd_58b5),
        ];
        let mut seed = [0u8; 32];
        for (chunk, word) in seed.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Samples a homogeneous Poisson point process of the given intensity on the
/// disk of `window_radius` centered at the origin.
///
/// The point count is Poisson with mean `intensity * pi * radius^2` and the
/// points are i.i.d. uniform on the disk.
pub fn sample_ppp<R: Rng + ?Sized>(
    intensity: f64,
    window_radius: f64,
    rng: &mut R,
) -> Result<PointSet> {
    if !intensity.is_finite() || intensity < 0.0 {
        return Err(Error::InvalidParameter {
            name: "intensity",
            reason: format!("must be finite and non-negative, got {intensity}"),
        });
    }
    if !window_radius.is_finite() || window_radius <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "window_radius",
            reason: format!("must be finite and positive, got {window_radius}"),
        });
    }

    let mean = intensity * std::f64::consts::PI * window_radius * window_radius;
    let count = if mean == 0.0 {
        0
    } else {
        let poisson = Poisson::new(mean).map_err(|e| Error::InvalidParameter {
            name: "intensity",
            reason: format!("invalid Poisson mean {mean}: {e}"),
        })?;
        poisson.sample(rng) as usize
    };

    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        // radial CDF inversion: area-uniform radius, uniform angle
        let r = window_radius * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        points.push(Point2::new(r * theta.cos(), r * theta.sin()));
    }
    Ok(PointSet {
        points,
        window_radius,
        intensity,
    })
}

/// Keeps each point independently with probability `retain_prob`. The output
/// intensity is `retain_prob` times the input intensity.
pub fn thin<R: Rng + ?Sized>(set: &PointSet, retain_prob: f64, rng: &mut R) -> Result<PointSet> {
    if !retain_prob.is_finite() || !(0.0..=1.0).contains(&retain_prob) {
        return Err(Error::InvalidParameter {
            name: "retain_prob",
            reason: format!("must lie in [0, 1], got {retain_prob}"),
        });
    }
    let points = set
        .points
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < retain_prob)
        .collect();
    Ok(PointSet {
        points,
        window_radius: set.window_radius,
        intensity: set.intensity * retain_prob,
    })
}

/// Shifts every point by `offset`. Stationarity makes the shifted process
/// equal in law to the original; this is what puts the serving BS at the
/// origin before UL interference is summed.
pub fn translate(set: &PointSet, offset: Point2) -> PointSet {
    PointSet {
        points: set.points.iter().map(|p| p.offset_by(offset)).collect(),
        window_radius: set.window_radius,
        intensity: set.intensity,
    }
}

/// Index and distance of the point closest to `from`. Ties break toward the
/// lowest index.
pub fn nearest(set: &PointSet, from: Point2) -> Result<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in set.points.iter().enumerate() {
        let d2 = p.distance_squared(from);
        match best {
            Some((_, bd2)) if d2 >= bd2 => {}
            _ => best = Some((i, d2)),
        }
    }
    best.map(|(i, d2)| (i, d2.sqrt())).ok_or(Error::EmptyPointSet)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_intensity_yields_empty_set() {
        let mut rng = RngSeed(1).rng();
        let set = sample_ppp(0.0, 100.0, &mut rng).unwrap();
        assert!(set.is_empty());
        assert_eq!(set.intensity(), 0.0);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = sample_ppp(1e-4, 1000.0, &mut RngSeed(7).rng()).unwrap();
        let b = sample_ppp(1e-4, 1000.0, &mut RngSeed(7).rng()).unwrap();
        assert_eq!(a, b);
        let c = sample_ppp(1e-4, 1000.0, &mut RngSeed(8).rng()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn substreams_differ_by_purpose_and_realization() {
        let seed = RngSeed(3);
        let mut a = seed.stream(0, 0);
        let mut b = seed.stream(0, 1);
        let mut c = seed.stream(1, 0);
        let (xa, xb, xc) = (a.random::<u64>(), b.random::<u64>(), c.random::<u64>());
        assert_ne!(xa, xb);
        assert_ne!(xa, xc);
        assert_ne!(xb, xc);
    }

    #[test]
    fn points_stay_inside_window() {
        let set = sample_ppp(1e-3, 200.0, &mut RngSeed(11).rng()).unwrap();
        assert!(!set.is_empty());
        for p in set.points() {
            assert!(p.norm() <= 200.0 + 1e-9);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = RngSeed(0).rng();
        assert!(sample_ppp(-1.0, 10.0, &mut rng).is_err());
        assert!(sample_ppp(f64::NAN, 10.0, &mut rng).is_err());
        assert!(sample_ppp(1.0, 0.0, &mut rng).is_err());
        let set = sample_ppp(1e-2, 50.0, &mut rng).unwrap();
        assert!(thin(&set, -0.1, &mut rng).is_err());
        assert!(thin(&set, 1.5, &mut rng).is_err());
    }

    #[test]
    fn thin_extremes() {
        let mut rng = RngSeed(5).rng();
        let set = sample_ppp(1e-2, 100.0, &mut rng).unwrap();
        let kept = thin(&set, 1.0, &mut rng).unwrap();
        assert_eq!(kept.points(), set.points());
        assert_eq!(kept.intensity(), set.intensity());
        let none = thin(&set, 0.0, &mut rng).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn translate_identity_and_recentering() {
        let set = PointSet::from_points(vec![Point2::new(3.0, 4.0)], 10.0, 1.0);
        let same = translate(&set, Point2::ORIGIN);
        assert_eq!(same.points(), set.points());
        let moved = translate(&set, Point2::new(-3.0, -4.0));
        assert_eq!(moved.points()[0], Point2::ORIGIN);
    }

    #[test]
    fn nearest_basics_and_tie_break() {
        let set = PointSet::from_points(
            vec![Point2::new(1.0, 0.0), Point2::new(0.0, 2.0)],
            10.0,
            1.0,
        );
        let (i, d) = nearest(&set, Point2::ORIGIN).unwrap();
        assert_eq!(i, 0);
        assert!((d - 1.0).abs() < 1e-15);

        // exactly equidistant points: lowest index wins
        let tie = PointSet::from_points(
            vec![Point2::new(0.0, 1.0), Point2::new(1.0, 0.0)],
            10.0,
            1.0,
        );
        let (i, _) = nearest(&tie, Point2::ORIGIN).unwrap();
        assert_eq!(i, 0);

        let empty = PointSet::from_points(vec![], 10.0, 0.0);
        assert_eq!(nearest(&empty, Point2::ORIGIN), Err(Error::EmptyPointSet));
    }
}
