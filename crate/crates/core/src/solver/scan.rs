//! Grid scans for fixed points and for the sign of `J_GF`.

use std::fmt;

use num_traits::Float;
use rayon::prelude::*;

use crate::model::Point2;

use super::fixed_point::{newton_refine, solve_g_contour, FixedPointResult};
use super::system::NumericSystem;

/// Where a fixed point lies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Origin,
    /// `x > 0`, `0 < y < x^2`.
    InteriorXi,
    /// On the boundary of the invariant region, away from the origin.
    BoundaryXi,
    /// In the closed quadrant but outside the invariant region.
    Quadrant,
    /// A negative coordinate.
    Outside,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Location::Origin => "origin",
            Location::InteriorXi => "interior-xi",
            Location::BoundaryXi => "boundary-xi",
            Location::Quadrant => "quadrant",
            Location::Outside => "outside",
        })
    }
}

/// Tolerance for deciding coordinate signs and region boundaries.
const EDGE: f64 = 1e-12;

pub fn locate<T: Float>(p: Point2<T>) -> Location {
    let (x, y) = (
        p.x.to_f64().unwrap_or(f64::NAN),
        p.y.to_f64().unwrap_or(f64::NAN),
    );
    if x.hypot(y) < 1e-9 {
        Location::Origin
    } else if x < -EDGE || y < -EDGE {
        Location::Outside
    } else if x > EDGE && y > EDGE && y < x * x - EDGE {
        Location::InteriorXi
    } else if y <= x * x + EDGE {
        Location::BoundaryXi
    } else {
        Location::Quadrant
    }
}

/// The region whose grid nodes seed Newton.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanRegion<T> {
    /// `(0, x_hi] x [0, 1]` in strip coordinates.
    Strip { x_hi: T },
    /// `[0, x_hi] x [0, y_hi]` in the quadrant.
    Quadrant { x_hi: T, y_hi: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions<T> {
    pub grid_n: usize,
    pub region: ScanRegion<T>,
    pub newton_tol: T,
    pub max_newton: usize,
    /// Fixed points accepted below this residual.
    pub accept_residual: T,
    /// Points closer than this form one cluster.
    pub cluster_tol: T,
}

impl<T: Float> ScanOptions<T> {
    pub fn strip(grid_n: usize, x_hi: T) -> Self {
        Self::with_region(grid_n, ScanRegion::Strip { x_hi })
    }

    pub fn quadrant(grid_n: usize, x_hi: T, y_hi: T) -> Self {
        Self::with_region(grid_n, ScanRegion::Quadrant { x_hi, y_hi })
    }

    fn with_region(grid_n: usize, region: ScanRegion<T>) -> Self {
        let c = |v: f64| T::from(v).expect("representable");
        ScanOptions {
            grid_n,
            region,
            newton_tol: c(1e-12),
            max_newton: 50,
            accept_residual: c(1e-10),
            cluster_tol: c(1e-6),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster<T = f64> {
    /// The member with the smallest residual.
    pub representative: FixedPointResult<T>,
    pub location: Location,
    /// Number of grid seeds that converged here.
    pub members: usize,
    /// Grid index of the first seed that converged here.
    pub first_seed: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport<T = f64> {
    pub grid_n: usize,
    pub seeds: usize,
    pub converged: usize,
    pub clusters: Vec<Cluster<T>>,
    /// `J_GF` samples at strip nodes with `0 < z < 1` and `F <= 1`.
    pub jgf_samples: usize,
    pub jgf_positive: usize,
}

impl<T: Float> UniquenessReport<T> {
    pub fn count(&self, loc: Location) -> usize {
        self.clusters.iter().filter(|c| c.location == loc).count()
    }

    pub fn interior_count(&self) -> usize {
        self.count(Location::InteriorXi)
    }

    /// Clusters in the closed quadrant (everything but [`Location::Outside`]).
    pub fn quadrant_count(&self) -> usize {
        self.clusters.len() - self.count(Location::Outside)
    }

    pub fn interior(&self) -> impl Iterator<Item = &Cluster<T>> {
        self.clusters
            .iter()
            .filter(|c| c.location == Location::InteriorXi)
    }
}

/// A strip bound safely past the fixed point: `x*(z)` is largest at `z = 0`.
pub fn default_x_hi<T: Float>(sys: &NumericSystem<T>) -> T {
    let tol = T::from(1e-12).unwrap();
    solve_g_contour(sys, T::zero(), tol)
        .map(|(x, _)| x * T::from(1.5).unwrap())
        .unwrap_or_else(|_| T::from(2.0).unwrap())
}

fn seeds<T: Float>(opts: &ScanOptions<T>) -> Vec<Point2<T>> {
    let n = opts.grid_n;
    let nf = T::from(n).unwrap();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (fi, fj) = (T::from(i).unwrap(), T::from(j).unwrap());
            let p = match opts.region {
                ScanRegion::Strip { x_hi } => {
                    let x = x_hi * (fi + T::one()) / nf;
                    let z = fj / (nf - T::one());
                    Point2::new(x, x * x * z)
                }
                ScanRegion::Quadrant { x_hi, y_hi } => {
                    Point2::new(x_hi * fi / (nf - T::one()), y_hi * fj / (nf - T::one()))
                }
            };
            out.push(p);
        }
    }
    out
}

/// Newton from every grid node, then clustering in grid order.
pub fn scan_uniqueness<T: Float + Send + Sync>(
    sys: &NumericSystem<T>,
    opts: &ScanOptions<T>,
) -> UniquenessReport<T> {
    assert!(opts.grid_n >= 2, "grid needs at least 2 nodes per side");
    let seeds = seeds(opts);
    let results: Vec<Option<FixedPointResult<T>>> = seeds
        .par_iter()
        .map(|&s| {
            newton_refine(sys, s, opts.newton_tol, opts.max_newton)
                .ok()
                .filter(|r| r.residual < opts.accept_residual)
        })
        .collect();

    let mut clusters: Vec<Cluster<T>> = Vec::new();
    let mut converged = 0;
    for (idx, r) in results.into_iter().enumerate() {
        let Some(r) = r else { continue };
        converged += 1;
        let p = r.point();
        let near = clusters.iter_mut().find(|c| {
            let q = c.representative.point();
            (p.x - q.x).abs().max((p.y - q.y).abs()) < opts.cluster_tol
        });
        match near {
            Some(c) => {
                c.members += 1;
                if r.residual < c.representative.residual {
                    c.representative = r;
                }
            }
            None => clusters.push(Cluster {
                location: locate(p),
                representative: r,
                members: 1,
                first_seed: idx,
            }),
        }
    }

    let (jgf_samples, jgf_positive) = jgf_tally(sys, opts);
    UniquenessReport {
        grid_n: opts.grid_n,
        seeds: seeds.len(),
        converged,
        clusters,
        jgf_samples,
        jgf_positive,
    }
}

/// Signs of `J_GF` at strip nodes with `0 < z < 1` and `F <= 1`.
pub fn jgf_tally<T: Float + Send + Sync>(
    sys: &NumericSystem<T>,
    opts: &ScanOptions<T>,
) -> (usize, usize) {
    let x_hi = match opts.region {
        ScanRegion::Strip { x_hi } | ScanRegion::Quadrant { x_hi, .. } => x_hi,
    };
    let n = opts.grid_n;
    let nf = T::from(n).unwrap();
    let counts: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = x_hi * T::from(i + 1).unwrap() / nf;
            let mut tally = (0, 0);
            for j in 0..n {
                let z = T::from(j + 1).unwrap() / (nf + T::one());
                if sys.f_at(x, z) <= T::one() {
                    tally.0 += 1;
                    if sys.jgf_sign(x, z) > T::zero() {
                        tally.1 += 1;
                    }
                }
            }
            tally
        })
        .collect();
    counts
        .into_iter()
        .fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}
