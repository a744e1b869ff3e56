//! Deterministic path planning in the cut plane.
//!
//! Routes never cross a branch cut except through the fixed gate on the ray
//! to infinity, so every planned path between the same endpoints lies in one
//! homology class up to a-cycle and pole-loop corrections, both of which
//! leave theta arguments and exponential factors unchanged.

use num_complex::Complex64;

use crate::curve::{PathPlan, Place};
use crate::error::{Error, Result};
use crate::numeric::{dist_point_segment, segment_crosses_ray, segments_intersect};
use crate::surface::Surface;

pub struct Router<'s> {
    pub surface: &'s Surface,
    /// Extra point obstacles (pole x-projections).
    pub obstacles: Vec<Complex64>,
    /// Clearance radius kept from branch points and obstacles.
    pub margin: f64,
}

impl<'s> Router<'s> {
    pub fn new(surface: &'s Surface, obstacles: Vec<Complex64>) -> Self {
        let margin = 0.05 * surface.min_sep;
        Router {
            surface,
            obstacles,
            margin,
        }
    }

    fn all_point_obstacles(&self) -> Vec<Complex64> {
        let mut v = self.surface.curve.branch_points.clone();
        v.extend_from_slice(&self.obstacles);
        v
    }

    /// Plan a polyline from `a` to `b` in the cut plane, crossing no cut and
    /// keeping `margin` clearance from branch points and obstacles. Obstacles
    /// within 1.5 margin of either endpoint are exempt (integration targets).
    pub fn route_plane(&self, a: Complex64, b: Complex64) -> Result<Vec<Complex64>> {
        let obstacles = self.all_point_obstacles();
        let exempt: Vec<bool> = obstacles
            .iter()
            .map(|p| (p - a).norm() < 1.5 * self.margin || (p - b).norm() < 1.5 * self.margin)
            .collect();
        let mut waypoints = vec![a];
        self.fix_segment(a, b, &obstacles, &exempt, 0, &mut waypoints)?;
        Ok(waypoints)
    }

    fn fix_segment(
        &self,
        a: Complex64,
        b: Complex64,
        obstacles: &[Complex64],
        exempt: &[bool],
        depth: u32,
        out: &mut Vec<Complex64>,
    ) -> Result<()> {
        if depth > 48 {
            return Err(Error::PathBlocked(format!(
                "detour recursion exceeded near {a} -> {b}"
            )));
        }
        if (b - a).norm() == 0.0 {
            out.push(b);
            return Ok(());
        }
        // earliest violation along the segment decides the detour
        let mut best: Option<(f64, Complex64)> = None;
        let cuts = &self.surface.cuts;
        for (u, v) in &cuts.cuts {
            if segments_intersect(a, b, *u, *v) {
                let t = crossing_parameter(a, b, *u, *v);
                let w = detour_around_cut(*u, *v, a, b, 2.0 * self.margin);
                if best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, w));
                }
            }
        }
        if segment_crosses_ray(a, b, cuts.ray_origin, cuts.ray_dir) {
            let far = cuts.ray_origin + cuts.ray_dir * 1e6;
            let t = crossing_parameter(a, b, cuts.ray_origin, far);
            let w = cuts.ray_origin - cuts.ray_dir * (2.0 * self.margin);
            if best.map_or(true, |(bt, _)| t < bt) {
                best = Some((t, w));
            }
        }
        for (i, p) in obstacles.iter().enumerate() {
            let clearance = if exempt[i] { 1e-12 } else { self.margin };
            if dist_point_segment(*p, a, b) < clearance * 0.999 {
                let ab = b - a;
                let t = (((p - a).re * ab.re + (p - a).im * ab.im) / ab.norm_sqr()).clamp(0.0, 1.0);
                let n = Complex64::new(0.0, 1.0) * ab / ab.norm();
                let cross = ab.re * (p - a).im - ab.im * (p - a).re;
                let side = if cross >= 0.0 { -1.0 } else { 1.0 };
                let w = p + n * side * (2.0 * clearance.max(self.margin));
                if best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, w));
                }
            }
        }
        match best {
            None => {
                out.push(b);
                Ok(())
            }
            Some((_, w)) => {
                self.fix_segment(a, w, obstacles, exempt, depth + 1, out)?;
                self.fix_segment(w, b, obstacles, exempt, depth + 1, out)
            }
        }
    }

    /// Plan a path between two places, crossing the gate when they lie on
    /// different sheets. The returned plan's continuation is verified to land
    /// on `to`.
    pub fn route(&self, from: &Place, to: &Place) -> Result<PathPlan> {
        let s1 = self.surface.sheet_of(from)?;
        let s2 = self.surface.sheet_of(to)?;
        let mut waypoints;
        if s1 == s2 {
            waypoints = self.route_plane(from.x, to.x)?;
        } else {
            let cuts = &self.surface.cuts;
            let n = Complex64::new(0.0, 1.0) * cuts.ray_dir;
            let delta = 1.2 * self.margin;
            let gm = cuts.gate + n * delta;
            let gp = cuts.gate - n * delta;
            waypoints = self.route_plane(from.x, gm)?;
            waypoints.push(gp);
            let leg2 = self.route_plane(gp, to.x)?;
            waypoints.extend_from_slice(&leg2[1..]);
        }
        let plan = PathPlan {
            waypoints,
            detour_radius: self.margin,
            initial_y: from.y,
            closed: false,
        };
        let y_end = self.surface.curve.continue_y(&plan)?;
        if (y_end - to.y).norm() > 1e-6 * (1.0 + to.y.norm()) {
            return Err(Error::PathBlocked(format!(
                "sheet bookkeeping mismatch at {}: continued y {} vs target {}",
                to.x, y_end, to.y
            )));
        }
        Ok(plan)
    }
}

fn crossing_parameter(a: Complex64, b: Complex64, u: Complex64, v: Complex64) -> f64 {
    // parameter of the intersection of line AB with line UV along AB
    let r = b - a;
    let s = v - u;
    let denom = r.re * s.im - r.im * s.re;
    if denom.abs() < 1e-30 {
        return 0.5;
    }
    let q = u - a;
    ((q.re * s.im - q.im * s.re) / denom).clamp(0.0, 1.0)
}

fn detour_around_cut(
    u: Complex64,
    v: Complex64,
    a: Complex64,
    b: Complex64,
    step: f64,
) -> Complex64 {
    // go around whichever cut endpoint is closer to the crossing point
    let t = crossing_parameter(a, b, u, v);
    let hit = a + (b - a) * t;
    let (near, far_end) = if (hit - u).norm() <= (hit - v).norm() {
        (u, v)
    } else {
        (v, u)
    };
    let out_dir = (near - far_end) / (near - far_end).norm();
    near + out_dir * step
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::HyperellipticCurve;
    use crate::surface::Sheet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic_surface() -> Surface {
        let curve = HyperellipticCurve::from_coefficients(&[
            c(0.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ])
        .unwrap();
        Surface::new(curve).unwrap()
    }

    fn polyline_crosses_cut(s: &Surface, way: &[Complex64]) -> bool {
        for w in way.windows(2) {
            for (u, v) in &s.cuts.cuts {
                if segments_intersect(w[0], w[1], *u, *v) {
                    return true;
                }
            }
            if segment_crosses_ray(w[0], w[1], s.cuts.ray_origin, s.cuts.ray_dir) {
                return true;
            }
        }
        false
    }

    #[test]
    fn same_sheet_route_avoids_cuts() {
        let s = cubic_surface();
        let r = Router::new(&s, vec![]);
        // endpoints on opposite sides of the cut [-1, 0]
        let way = r.route_plane(c(-0.5, 0.8), c(-0.5, -0.8)).unwrap();
        assert!(!polyline_crosses_cut(&s, &way), "route must dodge the cut");
    }

    #[test]
    fn cross_sheet_route_crosses_once_at_gate() {
        let s = cubic_surface();
        let r = Router::new(&s, vec![]);
        let from = s.place_on_sheet(c(-2.0, 1.0), Sheet::Plus).unwrap();
        let to = s.place_on_sheet(c(-2.0, 1.0), Sheet::Minus).unwrap();
        let plan = r.route(&from, &to).unwrap();
        let mut crossings = 0;
        for w in plan.waypoints.windows(2) {
            if segment_crosses_ray(w[0], w[1], s.cuts.ray_origin, s.cuts.ray_dir) {
                crossings += 1;
            }
        }
        assert_eq!(crossings, 1);
    }

    #[test]
    fn obstacle_detour() {
        let s = cubic_surface();
        let obstacle = c(2.0, 2.0);
        let r = Router::new(&s, vec![obstacle]);
        let way = r.route_plane(c(1.0, 2.0), c(3.0, 2.0)).unwrap();
        for w in way.windows(2) {
            assert!(dist_point_segment(obstacle, w[0], w[1]) > 0.9 * r.margin);
        }
    }

    #[test]
    fn route_determinism() {
        let s = cubic_surface();
        let r = Router::new(&s, vec![c(0.5, 0.5)]);
        let w1 = r.route_plane(c(-2.0, 1.0), c(2.2, -0.7)).unwrap();
        let w2 = r.route_plane(c(-2.0, 1.0), c(2.2, -0.7)).unwrap();
        assert_eq!(w1, w2);
    }
}
