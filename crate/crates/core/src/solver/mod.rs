//! Numerical solving: the contour construction of the interior fixed point,
//! Newton polishing, orbits and uniqueness scans.
//!
//! Everything is generic over `num_traits::Float`; polynomials are
//! evaluated with compensated Horner.

mod fixed_point;
mod horner;
mod orbit;
mod scan;
mod system;

pub use fixed_point::{
    dphi_eigenvalues, exact_residual, h_value, newton_refine, solve_fixed_point,
    solve_fixed_point_in, solve_g_contour, FixedPointResult, SolveOptions,
};
pub use horner::Poly2;
pub use orbit::{iterate_map, OrbitClass, OrbitOptions, OrbitRecord};
pub use scan::{
    default_x_hi, jgf_tally, locate, scan_uniqueness, Cluster, Location, ScanOptions, ScanRegion,
    UniquenessReport,
};
pub use system::NumericSystem;

use crate::model::ModelError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model outside the class: {0}")]
    ClassViolation(String),
    #[error("no bracket for G = 1 at z = {z}")]
    BracketNotFound { z: f64 },
    #[error("F(x*(z), z) never reaches 1 (h(1) = {h1})")]
    NoCrossing { h1: f64 },
    #[error("singular Jacobian (condition estimate {cond:e})")]
    Singular { cond: f64 },
    #[error("Newton did not converge in {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },
    #[error("non-finite iterate")]
    NonFinite,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::model::{apply_phi_polys, Point2};
    use crate::{ExactScalar, Q3Poly, WModel};

    /// Confirmed by a 50-digit Newton solve of the displayed fixed-point
    /// equations, seeded from a dense grid (residual < 1e-50).
    pub const W3_FIXED: (f64, f64) = (0.429_444_901_339_001_5, 0.049_983_950_566_095_11);
    pub const W4_FIXED: (f64, f64) = (0.565_498_824_383_792_8, 0.083_788_716_264_656_22);

    fn sys(m: &WModel) -> NumericSystem<f64> {
        NumericSystem::new(m).unwrap()
    }

    #[test]
    fn contour_examples() {
        let eps0 = sys(&WModel::w_eps(ExactScalar::from_integer(0)).unwrap());
        let (x, _) = solve_g_contour(&eps0, 0.0, 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-11);

        let w3 = sys(&WModel::w3());
        let (x, _) = solve_g_contour(&w3, 0.0, 1e-12).unwrap();
        assert!((x + 2.0 * x * x + 2.0 * x * x * x - 1.0).abs() < 1e-11);
        for k in 0..=20 {
            let z = k as f64 / 20.0;
            let (x, _) = solve_g_contour(&w3, z, 1e-12).unwrap();
            assert!(w3.g_at(x - 1e-11, z) < 1.0 && w3.g_at(x + 1e-11, z) > 1.0);
            assert!((w3.g_at(x, z) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn h_boundary_values() {
        for m in [WModel::w3(), WModel::w4()] {
            let s = sys(&m);
            assert!(h_value(&s, 0.0, 1e-12).unwrap() <= 1e-12);
            assert!(h_value(&s, 1.0, 1e-12).unwrap() > 0.0);
        }
    }

    #[test]
    fn w3_and_w4_regression() {
        for (m, (fx, fy)) in [(WModel::w3(), W3_FIXED), (WModel::w4(), W4_FIXED)] {
            let r = solve_fixed_point::<f64>(&m, &SolveOptions::default()).unwrap();
            assert!(r.residual < 1e-12 && r.newton_converged);
            assert!(r.interior_xi && r.in_xi_prime);
            assert!((r.x_f - fx).abs() < 1e-12 && (r.y_f - fy).abs() < 1e-12);
            assert_eq!(r.crossings.len(), 1);
            assert!((r.y_f - r.x_f * r.x_f * r.z_f).abs() < 1e-15);
        }
    }

    #[test]
    fn w4_primed_system() {
        let r = solve_fixed_point::<f64>(&WModel::w4(), &SolveOptions::default()).unwrap();
        let xp: Q3Poly = parse_poly(
            "x^2 + 3*x^3 + 6*x^4 + 6*x^5 + 12*x^3*y + 30*x^4*y + 18*x^2*y^2 + 78*x^3*y^2 + 96*x^2*y^3 + 132*x*y^4 + 132*y^5",
        )
        .unwrap();
        let yp: Q3Poly =
            parse_poly("x^4 + 2*x^5 + 4*x^3*y + 13*x^4*y + 32*x^3*y^2 + 88*x^2*y^3 + 22*y^4 + 220*x*y^4 + 186*y^5").unwrap();
        let p: Point2<f64> = Point2::new(r.x_f / 3f64.sqrt(), r.y_f / 3.0);
        let q = apply_phi_polys(&xp, &yp, p);
        assert!((q.x - p.x).abs() < 1e-10 && (q.y - p.y).abs() < 1e-10);
    }

    #[test]
    fn eps_zero_fixed_point() {
        let m = WModel::w_eps(ExactScalar::from_integer(0)).unwrap();
        let r = solve_fixed_point::<f64>(&m, &SolveOptions::default()).unwrap();
        assert!((r.x_f - 0.662).abs() < 1e-3 && (r.y_f - 0.192).abs() < 1e-3);
        assert!((r.x_f + 4.0 * r.x_f.powi(6) - 1.0).abs() < 1e-12);
        assert!((r.y_f - r.x_f.powi(4)).abs() < 1e-12);
    }

    #[test]
    fn f32_solve() {
        let r = solve_fixed_point::<f32>(
            &WModel::w3(),
            &SolveOptions {
                tol: 1e-6,
                z_tol: 1e-6,
                newton_tol: 1e-6,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((r.x_f as f64 - W3_FIXED.0).abs() < 1e-5);
    }

    #[test]
    fn class_violation() {
        let m = WModel::general([((3, 0), ExactScalar::from_integer(1))]).unwrap();
        assert!(matches!(
            solve_fixed_point::<f64>(&m, &SolveOptions::default()),
            Err(SolverError::ClassViolation(_))
        ));
    }

    #[test]
    fn newton_examples() {
        let s = sys(&WModel::w3());
        let exact = Point2::new(W3_FIXED.0, W3_FIXED.1);
        let r = newton_refine(&s, exact, 1e-12, 50).unwrap();
        assert_eq!(r.newton_iterations, 0);
        let origin = newton_refine(&s, Point2::new(0.0, 0.0), 1e-12, 50).unwrap();
        assert!(!origin.interior_xi && origin.x_f == 0.0);
        let near = newton_refine(
            &s,
            Point2::new(W3_FIXED.0 + 0.007, W3_FIXED.1 - 0.007),
            1e-12,
            50,
        )
        .unwrap();
        assert!(near.newton_iterations <= 6 && near.interior_xi);
        let ev = dphi_eigenvalues(&s, exact);
        assert!(ev[0].0 > 1.0);
    }

    #[test]
    fn orbits() {
        let s = sys(&WModel::w3());
        let fixed = Point2::new(W3_FIXED.0, W3_FIXED.1);
        let o = iterate_map(
            &s,
            Point2::new(0.0, 0.0),
            Some(fixed),
            &OrbitOptions::default(),
        );
        assert_eq!((o.class, o.steps), (OrbitClass::ConvergedToOrigin, 0));
        let o = iterate_map(&s, fixed, Some(fixed), &OrbitOptions::default());
        assert_eq!((o.class, o.steps), (OrbitClass::ConvergedToFixedPoint, 0));
        let o = iterate_map(
            &s,
            Point2::new(2.0, 0.0),
            Some(fixed),
            &OrbitOptions::default(),
        );
        assert_eq!(o.class, OrbitClass::Diverged);
        let o = iterate_map(
            &s,
            Point2::new(0.2, 0.01),
            Some(fixed),
            &OrbitOptions::default(),
        );
        assert_eq!(o.class, OrbitClass::ConvergedToOrigin);
    }

    #[test]
    fn scans() {
        for m in [WModel::w3(), WModel::w4()] {
            let s = sys(&m);
            let rep = scan_uniqueness(&s, &ScanOptions::strip(40, default_x_hi(&s)));
            assert_eq!(rep.interior_count(), 1);
            assert_eq!(rep.jgf_positive, rep.jgf_samples);
            assert!(rep.jgf_samples > 0);
        }
        let eps = |e: ExactScalar| sys(&WModel::w_eps(e).unwrap());
        let rep = scan_uniqueness(
            &eps(ExactScalar::ratio(1, 10)),
            &ScanOptions::quadrant(40, 2.0, 4.0),
        );
        assert_eq!((rep.quadrant_count(), rep.interior_count()), (4, 1));
        let rep = scan_uniqueness(
            &eps(ExactScalar::from_integer(0)),
            &ScanOptions::quadrant(40, 2.0, 4.0),
        );
        assert_eq!((rep.quadrant_count(), rep.interior_count()), (2, 1));
    }
}
