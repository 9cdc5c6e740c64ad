//! The `G = 1` contour, the `F = 1` crossing, and Newton polishing.

use num_traits::Float;

use crate::algebra::{ExactScalar, Var};
use crate::conditions::{check_basic, check_o_x, Status};
use crate::model::{in_interior_xi, Point2, WModel};
use crate::Rational;

use super::system::NumericSystem;
use super::SolverError;

/// Tolerances for [`solve_fixed_point`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions<T> {
    /// Bisection width for `x*(z)`, relative to `max(1, x)`.
    pub tol: T,
    /// Bisection width in `z`.
    pub z_tol: T,
    /// Newton stops below this residual.
    pub newton_tol: T,
    pub max_newton: usize,
    /// Initial `z` grid used to detect every sign change of `h`.
    pub z_samples: usize,
    /// Re-evaluate the residual exactly at the rational rounding of the
    /// result.
    pub exact_confirmation: bool,
}

impl<T: Float> Default for SolveOptions<T> {
    fn default() -> Self {
        let c = |v: f64| T::from(v).expect("representable");
        SolveOptions {
            tol: c(1e-12),
            z_tol: c(1e-10),
            newton_tol: c(1e-12),
            max_newton: 50,
            z_samples: 64,
            exact_confirmation: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointResult<T = f64> {
    pub x_f: T,
    pub y_f: T,
    pub z_f: T,
    /// `max |Phi(p) - p|` in floating point.
    pub residual: T,
    /// The same, evaluated exactly at the rational rounding of `p`.
    pub exact_residual: Option<f64>,
    pub bisection_iterations: usize,
    pub newton_iterations: usize,
    pub newton_converged: bool,
    pub interior_xi: bool,
    /// `0 < z < 1`, `G <= 1`, `F <= 1`, with slack `1e-9` on `G` and `F`
    /// (a fixed point sits on `G = F = 1`).
    pub in_xi_prime: bool,
    /// Every `z` where `h(z) = F(x*(z), z) - 1` changed sign.
    pub crossings: Vec<T>,
}

impl<T: Float> FixedPointResult<T> {
    pub fn point(&self) -> Point2<T> {
        Point2::new(self.x_f, self.y_f)
    }
}

fn c<T: Float>(v: f64) -> T {
    T::from(v).expect("representable")
}

/// `x*(z)`: the unique `x > 0` with `G(x, z) = 1`, with the iteration count.
pub fn solve_g_contour<T: Float>(
    sys: &NumericSystem<T>,
    z: T,
    tol: T,
) -> Result<(T, usize), SolverError> {
    let one = T::one();
    let mut lo = T::zero();
    let mut hi = tol;
    let mut iterations = 0;
    while sys.g_at(hi, z) < one {
        lo = hi;
        hi = hi + hi;
        iterations += 1;
        if !hi.is_finite() || hi > c(1e150) {
            return Err(SolverError::BracketNotFound {
                z: z.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    while hi - lo > tol * hi.max(one) && iterations < 2000 {
        let mid = lo + (hi - lo) / c(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if sys.g_at(mid, z) < one {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok((lo + (hi - lo) / c(2.0), iterations))
}

/// `h(z) = F(x*(z), z) - 1`.
pub fn h_value<T: Float>(sys: &NumericSystem<T>, z: T, tol: T) -> Result<T, SolverError> {
    let (x, _) = solve_g_contour(sys, z, tol)?;
    Ok(sys.f_at(x, z) - T::one())
}

/// Bisection on `[lo, hi]` where `h` changes sign; `lo_positive` is the
/// sign of `h(lo)`.
fn bisect_h<T: Float>(
    sys: &NumericSystem<T>,
    mut lo: T,
    mut hi: T,
    lo_positive: bool,
    opts: &SolveOptions<T>,
) -> Result<(T, usize), SolverError> {
    let mut iterations = 0;
    while hi - lo > opts.z_tol && iterations < 2000 {
        let mid = lo + (hi - lo) / c(2.0);
        if (h_value(sys, mid, opts.tol)? > T::zero()) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok((lo + (hi - lo) / c(2.0), iterations))
}

fn require_class(m: &WModel) -> Result<(), SolverError> {
    let mut rep = check_basic(m);
    rep.merge(check_o_x(m));
    if rep.status() != Status::Pass {
        let failed: Vec<&str> = rep
            .checks
            .iter()
            .filter(|c| c.status != Status::Pass)
            .map(|c| c.name)
            .collect();
        return Err(SolverError::ClassViolation(format!(
            "failed checks: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

/// The interior fixed point: bisection along the contour, then Newton.
///
/// If Newton fails, the bisection point is returned with
/// `newton_converged = false`.
pub fn solve_fixed_point<T: Float + Send + Sync>(
    m: &WModel,
    opts: &SolveOptions<T>,
) -> Result<FixedPointResult<T>, SolverError> {
    require_class(m)?;
    let sys = NumericSystem::<T>::new(m)?;
    solve_fixed_point_in(m, &sys, opts)
}

/// [`solve_fixed_point`] with a prebuilt system and no class check.
pub fn solve_fixed_point_in<T: Float>(
    m: &WModel,
    sys: &NumericSystem<T>,
    opts: &SolveOptions<T>,
) -> Result<FixedPointResult<T>, SolverError> {
    let n = opts.z_samples.max(2);
    let zs: Vec<T> = (0..=n)
        .map(|i| T::from(i).unwrap() / T::from(n).unwrap())
        .collect();
    let hs = zs
        .iter()
        .map(|&z| h_value(sys, z, opts.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let h1 = *hs.last().unwrap();
    if !(h1 > T::zero()) {
        return Err(SolverError::NoCrossing {
            h1: h1.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut crossings = Vec::new();
    let mut bisection_iterations = 0;
    for i in 0..n {
        let (pos_a, pos_b) = (hs[i] > T::zero(), hs[i + 1] > T::zero());
        if pos_a != pos_b {
            let (z, it) = bisect_h(sys, zs[i], zs[i + 1], pos_a, opts)?;
            crossings.push(z);
            bisection_iterations += it;
        }
    }
    let z_star = crossings[0];
    let (x_star, it) = solve_g_contour(sys, z_star, opts.tol)?;
    bisection_iterations += it;
    let seed = Point2::new(x_star, x_star * x_star * z_star);

    let mut result = match newton_refine(sys, seed, opts.newton_tol, opts.max_newton) {
        Ok(r) => r,
        Err(_) => {
            let mut r = describe(sys, seed, 0, false);
            r.newton_converged = false;
            r
        }
    };
    result.bisection_iterations = bisection_iterations;
    result.crossings = crossings;
    if opts.exact_confirmation {
        result.exact_residual = Some(exact_residual(m, result.point())?);
    }
    Ok(result)
}

fn describe<T: Float>(
    sys: &NumericSystem<T>,
    p: Point2<T>,
    newton_iterations: usize,
    converged: bool,
) -> FixedPointResult<T> {
    let z = if p.x > T::zero() {
        p.y / (p.x * p.x)
    } else {
        T::zero()
    };
    let slack = T::one() + c(1e-9);
    let interior = in_interior_xi(&Point2::new(
        p.x.to_f64().unwrap_or(f64::NAN),
        p.y.to_f64().unwrap_or(f64::NAN),
    ));
    let in_xi_prime = interior && sys.g_at(p.x, z) <= slack && sys.f_at(p.x, z) <= slack;
    FixedPointResult {
        x_f: p.x,
        y_f: p.y,
        z_f: z,
        residual: sys.residual(p),
        exact_residual: None,
        bisection_iterations: 0,
        newton_iterations,
        newton_converged: converged,
        interior_xi: interior,
        in_xi_prime,
        crossings: Vec::new(),
    }
}

/// Newton's method on `Phi(p) - p`.
pub fn newton_refine<T: Float>(
    sys: &NumericSystem<T>,
    seed: Point2<T>,
    tol: T,
    max_iter: usize,
) -> Result<FixedPointResult<T>, SolverError> {
    if !(seed.x.is_finite() && seed.y.is_finite()) {
        return Err(SolverError::NonFinite);
    }
    let mut p = seed;
    for k in 0..=max_iter {
        let r = sys.residual(p);
        if !r.is_finite() {
            return Err(SolverError::NonFinite);
        }
        if r < tol {
            return Ok(describe(sys, p, k, true));
        }
        if k == max_iter {
            break;
        }
        let q = sys.phi(p);
        let d = sys.dphi(p);
        let (a, b, cc, dd) = (d[0][0] - T::one(), d[0][1], d[1][0], d[1][1] - T::one());
        let det = a * dd - b * cc;
        let norm = (a.abs() + b.abs()).max(cc.abs() + dd.abs());
        let inv_norm = (dd.abs() + b.abs()).max(cc.abs() + a.abs()) / det.abs();
        let cond = norm * inv_norm;
        if det == T::zero() || !cond.is_finite() || cond > c(1e14) {
            return Err(SolverError::Singular {
                cond: cond.to_f64().unwrap_or(f64::INFINITY),
            });
        }
        let (fx, fy) = (q.x - p.x, q.y - p.y);
        let dx = (dd * fx - b * fy) / det;
        let dy = (a * fy - cc * fx) / det;
        p = Point2::new(p.x - dx, p.y - dy);
    }
    Err(SolverError::MaxIterations {
        iterations: max_iter,
        residual: sys.residual(p).to_f64().unwrap_or(f64::NAN),
    })
}

/// `max |Phi(p) - p|` evaluated exactly at the rational value of `p`.
pub fn exact_residual<T: Float>(m: &WModel, p: Point2<T>) -> Result<f64, SolverError> {
    let to_q = |v: T| {
        Rational::from_float(v.to_f64().unwrap_or(f64::NAN))
            .map(ExactScalar::from_rational)
            .ok_or(SolverError::NonFinite)
    };
    let (px, py) = (to_q(p.x)?, to_q(p.y)?);
    let (xm, ym) = m.grad();
    let at = [(Var::X, px.clone()), (Var::Y, py.clone())];
    let rx = (&xm.eval_exact(&at).expect("assigned") - &px)
        .to_f64()
        .abs();
    let ry = (&ym.eval_exact(&at).expect("assigned") - &py)
        .to_f64()
        .abs();
    Ok(rx.max(ry))
}

/// Eigenvalues of `DPhi(p)`: `(re1, im1, re2, im2)`.
pub fn dphi_eigenvalues<T: Float>(sys: &NumericSystem<T>, p: Point2<T>) -> [(T, T); 2] {
    let d = sys.dphi(p);
    let tr = d[0][0] + d[1][1];
    let det = d[0][0] * d[1][1] - d[0][1] * d[1][0];
    let half = tr / c(2.0);
    let disc = half * half - det;
    if disc >= T::zero() {
        let s = disc.sqrt();
        [(half + s, T::zero()), (half - s, T::zero())]
    } else {
        let s = (-disc).sqrt();
        [(half, s), (half, -s)]
    }
}
