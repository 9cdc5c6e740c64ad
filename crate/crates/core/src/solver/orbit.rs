//! Forward orbits of `Phi`.

use std::fmt;

use num_traits::Float;

use crate::model::{in_xi, Point2};

use super::system::NumericSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitClass {
    ConvergedToFixedPoint,
    ConvergedToOrigin,
    Diverged,
    /// Left the invariant region and then neither converged nor diverged.
    LeftXi,
    Undetermined,
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitClass::ConvergedToFixedPoint => "converged-to-fixed-point",
            OrbitClass::ConvergedToOrigin => "converged-to-origin",
            OrbitClass::Diverged => "diverged",
            OrbitClass::LeftXi => "left-xi",
            OrbitClass::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitOptions<T> {
    pub n_max: usize,
    pub escape_radius: T,
    pub origin_tol: T,
    pub fixed_point_tol: T,
}

impl<T: Float> Default for OrbitOptions<T> {
    fn default() -> Self {
        let c = |v: f64| T::from(v).expect("representable");
        OrbitOptions {
            n_max: 1000,
            escape_radius: c(1e6),
            origin_tol: c(1e-9),
            fixed_point_tol: c(1e-9),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord<T = f64> {
    /// `p_0, p_1, ...` up to and including the classifying point.
    pub points: Vec<Point2<T>>,
    pub class: OrbitClass,
    /// Index of the classifying point.
    pub steps: usize,
    /// First index outside the invariant region, if any.
    pub left_xi_at: Option<usize>,
}

fn norm<T: Float>(p: Point2<T>) -> T {
    p.x.hypot(p.y)
}

/// Iterates `Phi` from `p0`. `fixed` is the nontrivial fixed point to test
/// convergence against, if known.
pub fn iterate_map<T: Float>(
    sys: &NumericSystem<T>,
    p0: Point2<T>,
    fixed: Option<Point2<T>>,
    opts: &OrbitOptions<T>,
) -> OrbitRecord<T> {
    let mut points = vec![p0];
    let mut left_xi_at = None;
    let mut p = p0;
    for k in 0..=opts.n_max {
        let class = if !(p.x.is_finite() && p.y.is_finite()) || norm(p) > opts.escape_radius {
            Some(OrbitClass::Diverged)
        } else if norm(p) < opts.origin_tol {
            Some(OrbitClass::ConvergedToOrigin)
        } else if fixed
            .is_some_and(|f| norm(Point2::new(p.x - f.x, p.y - f.y)) < opts.fixed_point_tol)
        {
            Some(OrbitClass::ConvergedToFixedPoint)
        } else {
            None
        };
        let inside = {
            let (x, y) = (
                p.x.to_f64().unwrap_or(f64::NAN),
                p.y.to_f64().unwrap_or(f64::NAN),
            );
            in_xi(&Point2::new(x, y))
        };
        if !inside && left_xi_at.is_none() {
            left_xi_at = Some(k);
        }
        if let Some(class) = class {
            return OrbitRecord {
                points,
                class,
                steps: k,
                left_xi_at,
            };
        }
        if k == opts.n_max {
            break;
        }
        p = sys.phi(p);
        points.push(p);
    }
    let class = if left_xi_at.is_some() {
        OrbitClass::LeftXi
    } else {
        OrbitClass::Undetermined
    };
    OrbitRecord {
        steps: points.len() - 1,
        points,
        class,
        left_xi_at,
    }
}
