//! Odd-degree hyperelliptic curve model: y^2 = f(x) with f monic of degree
//! 2g+1, places on the curve, and analytic continuation of y along paths.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;
use crate::tol;

/// A nonsingular odd-degree hyperelliptic curve y^2 = f(x).
#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    /// Monic coefficients of f, ascending degree, length 2g+2.
    pub coefficients: Vec<Complex64>,
    pub genus: usize,
    /// Finite branch points, sorted lexicographically by (Re, Im).
    pub branch_points: Vec<Complex64>,
}

/// A point (x, y) on the curve. Regular affine places have y != 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Place {
    pub x: Complex64,
    pub y: Complex64,
}

impl Place {
    pub fn conjugate(&self) -> Place {
        Place {
            x: self.x,
            y: -self.y,
        }
    }
}

/// A polyline in the x-plane with an initial sheet seed for continuation.
#[derive(Clone, Debug)]
pub struct PathPlan {
    pub waypoints: Vec<Complex64>,
    pub detour_radius: f64,
    pub initial_y: Complex64,
    /// Closed plans are cycles; the last waypoint equals the first.
    pub closed: bool,
}

impl HyperellipticCurve {
    /// Build a curve from ascending coefficients of f. The polynomial must
    /// have odd degree >= 3; a leading coefficient within 1e-9 of 1 is
    /// rescaled to exactly monic.
    pub fn from_coefficients(coeffs: &[Complex64]) -> Result<Self> {
        let mut coeffs: Vec<Complex64> = coeffs.to_vec();
        while coeffs.len() > 1 && coeffs.last().unwrap().norm() == 0.0 {
            coeffs.pop();
        }
        let deg = coeffs.len().saturating_sub(1);
        if deg < 3 || deg % 2 == 0 {
            return Err(Error::BadDegree(deg));
        }
        let lead = *coeffs.last().unwrap();
        if (lead - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::BadInput(format!(
                "leading coefficient {lead} is not within 1e-9 of 1; supply a monic model"
            )));
        }
        for c in coeffs.iter_mut() {
            *c /= lead;
        }
        let genus = (deg - 1) / 2;

        let mut branch_points = poly::aberth_roots(&coeffs)?;
        branch_points.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });

        let scale = branch_points
            .iter()
            .map(|b| b.norm())
            .fold(1.0f64, f64::max);
        for i in 0..branch_points.len() {
            for j in (i + 1)..branch_points.len() {
                if (branch_points[i] - branch_points[j]).norm() < tol::BRANCH_SEPARATION * scale {
                    return Err(Error::SingularCurve(i, j));
                }
            }
        }
        for b in &branch_points {
            let res = poly::eval(&coeffs, *b).norm() / poly::residual_scale(&coeffs, *b);
            if res > tol::ROOT_RESIDUAL {
                return Err(Error::RootResidual(res));
            }
        }

        Ok(HyperellipticCurve {
            coefficients: coeffs,
            genus,
            branch_points,
        })
    }

    pub fn f(&self, x: Complex64) -> Complex64 {
        poly::eval(&self.coefficients, x)
    }

    pub fn f_derivative(&self, x: Complex64) -> Complex64 {
        poly::eval_with_derivative(&self.coefficients, x).1
    }

    /// Distance from x to the nearest branch point.
    pub fn branch_distance(&self, x: Complex64) -> f64 {
        self.branch_points
            .iter()
            .map(|b| (x - b).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Curve length scale: max branch-point modulus, at least 1.
    pub fn scale(&self) -> f64 {
        self.branch_points
            .iter()
            .map(|b| b.norm())
            .fold(1.0f64, f64::max)
    }

    /// Minimal pairwise distance between branch points.
    pub fn min_branch_separation(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.branch_points.len() {
            for j in (i + 1)..self.branch_points.len() {
                m = m.min((self.branch_points[i] - self.branch_points[j]).norm());
            }
        }
        m
    }

    /// The two square roots of f(x), principal root first.
    pub fn sheets_at(&self, x: Complex64) -> Result<(Complex64, Complex64)> {
        if self.branch_distance(x) < 1e-12 * (1.0 + self.scale()) {
            return Err(Error::AtBranchPoint(x));
        }
        let w = self.f(x).sqrt();
        Ok((w, -w))
    }

    /// Validate that (x, y) lies on the curve and return it as a place.
    pub fn place(&self, x: Complex64, y: Complex64) -> Result<Place> {
        let fx = self.f(x);
        let residual = (y * y - fx).norm();
        if residual > tol::ON_CURVE * (1.0 + fx.norm()) {
            return Err(Error::NotOnCurve { x, y, residual });
        }
        Ok(Place { x, y })
    }

    /// Is (x, y) a regular affine place (off the branch locus, y != 0)?
    pub fn is_regular(&self, p: &Place) -> bool {
        p.y.norm() > 1e-10 * (1.0 + self.scale())
            && self.branch_distance(p.x) > 1e-10 * (1.0 + self.scale())
    }

    /// Continue y along a straight segment from (x0, y0) to x1.
    ///
    /// Steps are bounded by a fraction of the distance to the nearest branch
    /// point so the two sheet values never come within swap distance; the
    /// step is halved when the nearest-root choice becomes ambiguous.
    pub fn continue_segment(
        &self,
        x0: Complex64,
        y0: Complex64,
        x1: Complex64,
    ) -> Result<Complex64> {
        let total = x1 - x0;
        let len = total.norm();
        if len == 0.0 {
            return Ok(y0);
        }
        let dir = total / len;
        let mut t = 0.0f64;
        let mut y = y0;
        let min_step = 1e-13 * (1.0 + len);
        let mut step = (0.2 * self.branch_distance(x0)).min(len);
        loop {
            if t >= len {
                return Ok(y);
            }
            step = step
                .min(len - t)
                .min(0.35 * self.branch_distance(x0 + dir * t).max(1e-15));
            if step < min_step {
                return Err(Error::SheetAmbiguity(x0 + dir * t));
            }
            let xn = x0 + dir * (t + step);
            let w = self.f(xn).sqrt();
            let (cand, other) = if (w - y).norm() <= (-w - y).norm() {
                (w, -w)
            } else {
                (-w, w)
            };
            // demand a clear winner before committing the step
            if (cand - y).norm() > 0.5 * (other - y).norm() && w.norm() > 0.0 {
                step *= 0.5;
                continue;
            }
            y = cand;
            t += step;
            step *= 1.9;
        }
    }

    /// Continue y along a path plan, returning y at the final waypoint.
    pub fn continue_y(&self, plan: &PathPlan) -> Result<Complex64> {
        let start = plan.waypoints[0];
        let fx = self.f(start);
        if (plan.initial_y * plan.initial_y - fx).norm() > tol::ON_CURVE * (1.0 + fx.norm()) {
            return Err(Error::NotOnCurve {
                x: start,
                y: plan.initial_y,
                residual: (plan.initial_y * plan.initial_y - fx).norm(),
            });
        }
        let mut y = plan.initial_y;
        for w in plan.waypoints.windows(2) {
            y = self.continue_segment(w[0], y, w[1])?;
        }
        Ok(y)
    }
}

/// A closed circular path plan around `center` with the given seed.
pub fn circle_plan(center: Complex64, radius: f64, initial_y: Complex64, segments: usize) -> PathPlan {
    let mut waypoints = Vec::with_capacity(segments + 1);
    for k in 0..=segments {
        let angle = 2.0 * std::f64::consts::PI * (k as f64) / (segments as f64);
        waypoints.push(center + Complex64::from_polar(radius, angle));
    }
    PathPlan {
        waypoints,
        detour_radius: radius,
        initial_y,
        closed: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic() -> HyperellipticCurve {
        // y^2 = x^3 - x
        HyperellipticCurve::from_coefficients(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap()
    }

    #[test]
    fn cubic_branch_points() {
        let curve = cubic();
        assert_eq!(curve.genus, 1);
        let expect = [c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        for (b, e) in curve.branch_points.iter().zip(expect.iter()) {
            assert!((b - e).norm() < 1e-12);
        }
    }

    #[test]
    fn quintic_roots_of_unity() {
        let mut coeffs = vec![c(0.0, 0.0); 6];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[5] = c(1.0, 0.0);
        let curve = HyperellipticCurve::from_coefficients(&coeffs).unwrap();
        assert_eq!(curve.genus, 2);
        for b in &curve.branch_points {
            assert!((b.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_double_root_rejected() {
        // x^3 - 2x^2 + x has a double root at 1
        let res = HyperellipticCurve::from_coefficients(&[
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(-2.0, 0.0),
            c(1.0, 0.0),
        ]);
        assert!(matches!(res, Err(Error::SingularCurve(_, _))));
    }

    #[test]
    fn even_degree_rejected() {
        let res = HyperellipticCurve::from_coefficients(&[
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]);
        assert!(matches!(res, Err(Error::BadDegree(4))));
    }

    #[test]
    fn sheets_at_two() {
        let curve = cubic();
        let (a, b) = curve.sheets_at(c(2.0, 0.0)).unwrap();
        assert!((a - c(6.0f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((b + a).norm() < 1e-15);
        // principal first: argument in (-pi/2, pi/2]
        let (p, _) = curve.sheets_at(c(0.0, 1.0)).unwrap();
        assert!(p.re > 0.0 || (p.re == 0.0 && p.im > 0.0));
    }

    #[test]
    fn sheets_at_branch_point_errors() {
        let curve = cubic();
        assert!(matches!(
            curve.sheets_at(c(0.0, 0.0)),
            Err(Error::AtBranchPoint(_))
        ));
    }

    #[test]
    fn monodromy_single_branch_point_flips_sign() {
        let curve = cubic();
        // small circle around x = 1 only
        let start = c(1.4, 0.0);
        let y0 = curve.sheets_at(start).unwrap().0;
        let plan = circle_plan(c(1.0, 0.0), 0.4, y0, 48);
        let y1 = curve.continue_y(&plan).unwrap();
        assert!((y1 + y0).norm() < 1e-9, "expected sign flip, got {y1} vs {y0}");
    }

    #[test]
    fn monodromy_no_branch_point_identity() {
        let curve = cubic();
        let start = c(2.5, 2.0);
        let y0 = curve.sheets_at(start).unwrap().0;
        let plan = circle_plan(c(2.0, 2.0), 0.5, y0, 48);
        let y1 = curve.continue_y(&plan).unwrap();
        assert!((y1 - y0).norm() < 1e-9);
    }

    #[test]
    fn monodromy_two_branch_points_identity() {
        let curve = cubic();
        // circle around -1 and 0 but not 1
        let start = c(0.4, 0.0);
        let y0 = curve.sheets_at(start).unwrap().0;
        let plan = circle_plan(c(-0.5, 0.0), 0.9, y0, 96);
        let y1 = curve.continue_y(&plan).unwrap();
        assert!((y1 - y0).norm() < 1e-9);
    }

    #[test]
    fn homotopic_paths_agree() {
        let curve = cubic();
        let from = c(-3.0, -1.0);
        let to = c(3.0, -1.0);
        let y0 = curve.sheets_at(from).unwrap().0;
        // two routes below the real axis enclosing no branch point between them
        let p1 = PathPlan {
            waypoints: vec![from, c(0.0, -2.0), to],
            detour_radius: 0.5,
            initial_y: y0,
            closed: false,
        };
        let p2 = PathPlan {
            waypoints: vec![from, c(-1.0, -3.0), c(1.0, -3.0), to],
            detour_radius: 0.5,
            initial_y: y0,
            closed: false,
        };
        let y1 = curve.continue_y(&p1).unwrap();
        let y2 = curve.continue_y(&p2).unwrap();
        assert!((y1 - y2).norm() < 1e-10);
    }
}
