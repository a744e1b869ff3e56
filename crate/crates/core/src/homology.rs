//! Canonical homology basis from the branch-cut chain.
//!
//! a_k is a rectangle hugging cut k on the plus sheet. b_k is a rectangle
//! enclosing branch points e_{2k}..e_{2g+1}; its left edge crosses cut k and
//! its right edge crosses the ray to infinity, so the loop closes through
//! both sheets and meets a_k exactly once. b-rectangles are nested so the
//! cycles stay pairwise disjoint. The construction is certified a posteriori
//! by the period-matrix invariants.

use num_complex::Complex64;

use crate::curve::PathPlan;
use crate::error::{Error, Result};
use crate::numeric::{dist_point_segment, segment_crosses_ray, segments_intersect};
use crate::surface::Surface;

/// A quadrilateral cycle support, corners in traversal order.
#[derive(Clone, Debug)]
pub struct Rect {
    pub corners: [Complex64; 4],
}

impl Rect {
    pub fn edges(&self) -> [(Complex64, Complex64); 4] {
        let c = &self.corners;
        [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])]
    }

    pub fn contains(&self, p: Complex64) -> bool {
        // convex, counterclockwise corners
        for (a, b) in self.edges() {
            let cross = (b.re - a.re) * (p.im - a.im) - (b.im - a.im) * (p.re - a.re);
            if cross < 0.0 {
                return false;
            }
        }
        true
    }

    pub fn edge_distance(&self, p: Complex64) -> f64 {
        self.edges()
            .iter()
            .map(|(a, b)| dist_point_segment(p, *a, *b))
            .fold(f64::INFINITY, f64::min)
    }

    fn waypoints(&self) -> Vec<Complex64> {
        let c = &self.corners;
        vec![c[0], c[1], c[2], c[3], c[0]]
    }
}

/// Homology basis as concrete sheet-tracked contours.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub a_cycles: Vec<PathPlan>,
    pub b_cycles: Vec<PathPlan>,
    pub a_rects: Vec<Rect>,
    pub b_rects: Vec<Rect>,
    /// The finite cut pairs (e_{2k-1}, e_{2k}).
    pub cut_pairs: Vec<(Complex64, Complex64)>,
    pub detour_radius: f64,
}

impl HomologyBasis {
    /// True when `x` keeps `clearance` away from every cycle edge and lies
    /// outside every a-rectangle (paths ending inside an a-rectangle pick up
    /// uncontrolled b-periods).
    pub fn point_admissible(&self, x: Complex64, clearance: f64) -> bool {
        for r in self.a_rects.iter() {
            if r.contains(x) || r.edge_distance(x) < clearance {
                return false;
            }
        }
        for r in self.b_rects.iter() {
            if r.edge_distance(x) < clearance {
                return false;
            }
        }
        true
    }

    /// Reverse every b-cycle (orientation calibration).
    pub fn flip_b_orientation(&mut self) {
        for plan in self.b_cycles.iter_mut() {
            plan.waypoints.reverse();
        }
    }
}

/// Build the basis with geometry scaled by `scale`, verifying the whole
/// crossing/containment pattern and keeping `avoid` points (poles, base
/// points) clear of all cycle edges.
pub fn build_homology(surface: &Surface, avoid: &[Complex64], scale: f64) -> Result<HomologyBasis> {
    let curve = &surface.curve;
    let g = curve.genus;
    let e = &curve.branch_points;
    let min_sep = surface.min_sep;
    let cuts = &surface.cuts;

    // chain frame: maps the sorted branch chain roughly onto the real axis
    let origin = e[0];
    let chain = e[2 * g] - e[0];
    let chain_dir = chain / chain.norm();
    let to_frame = |x: Complex64| (x - origin) * chain_dir.conj();
    let from_frame = |w: Complex64| origin + w * chain_dir;

    // a-rectangles around each cut
    let mut a_rects = Vec::with_capacity(g);
    let mut margins = Vec::with_capacity(g);
    for k in 0..g {
        let (u, v) = cuts.cuts[k];
        let mut d_other = f64::INFINITY;
        for (i, b) in e.iter().enumerate() {
            if i != 2 * k && i != 2 * k + 1 {
                d_other = d_other.min(dist_point_segment(*b, u, v));
            }
        }
        let m = scale * 0.3 * d_other;
        let t = (v - u) / (v - u).norm();
        let n = Complex64::new(0.0, 1.0) * t;
        a_rects.push(Rect {
            corners: [
                u - t * m - n * m,
                v + t * m - n * m,
                v + t * m + n * m,
                u - t * m + n * m,
            ],
        });
        margins.push(m);
    }
    let m_max = margins.iter().cloned().fold(0.0f64, f64::max);

    // nested b-rectangles in the chain frame
    let h_base = scale * (0.45 * min_sep).max(1.7 * m_max);
    let out_base = scale * 0.35 * min_sep;
    let mut b_rects = Vec::with_capacity(g);
    for k in 1..=g {
        let enclosed: Vec<Complex64> = ((2 * k - 1)..=(2 * g)).map(|i| to_frame(e[i])).collect();
        let xl = 0.5 * (to_frame(e[2 * k - 2]).re + to_frame(e[2 * k - 1]).re);
        let xr = enclosed
            .iter()
            .map(|w| w.re)
            .fold(f64::NEG_INFINITY, f64::max)
            + out_base * ((g + 1 - k) as f64);
        let h = h_base * (1.0 + 0.45 * ((g - k) as f64));
        b_rects.push(Rect {
            corners: [
                from_frame(Complex64::new(xl, -h)),
                from_frame(Complex64::new(xr, -h)),
                from_frame(Complex64::new(xr, h)),
                from_frame(Complex64::new(xl, h)),
            ],
        });
    }

    verify_geometry(surface, &a_rects, &b_rects, avoid, scale)?;

    let detour = 0.05 * min_sep;
    let mut a_cycles = Vec::with_capacity(g);
    for r in &a_rects {
        let y0 = surface.y_ref(r.corners[0])?;
        a_cycles.push(PathPlan {
            waypoints: r.waypoints(),
            detour_radius: detour,
            initial_y: y0,
            closed: true,
        });
    }
    let mut b_cycles = Vec::with_capacity(g);
    for r in &b_rects {
        let y0 = surface.y_ref(r.corners[0])?;
        b_cycles.push(PathPlan {
            waypoints: r.waypoints(),
            detour_radius: detour,
            initial_y: y0,
            closed: true,
        });
    }

    Ok(HomologyBasis {
        a_cycles,
        b_cycles,
        a_rects,
        b_rects,
        cut_pairs: cuts.cuts.clone(),
        detour_radius: detour,
    })
}

/// Build with automatic geometry rescaling until the avoid set is clear.
pub fn build_homology_avoiding(surface: &Surface, avoid: &[Complex64]) -> Result<HomologyBasis> {
    let mut geometry_ok = false;
    for scale in [1.0, 0.85, 1.15, 0.7, 1.3, 0.55, 1.45] {
        match build_homology(surface, avoid, scale) {
            Ok(b) => return Ok(b),
            Err(Error::CycleTouchesPole) => {
                geometry_ok = true;
            }
            Err(Error::DegenerateGeometry(_)) => {}
            Err(other) => return Err(other),
        }
    }
    if geometry_ok {
        Err(Error::CycleTouchesPole)
    } else {
        build_homology(surface, avoid, 1.0).map_err(|e| match e {
            Error::CycleTouchesPole => Error::CycleTouchesPole,
            other => other,
        })
    }
}

fn verify_geometry(
    surface: &Surface,
    a_rects: &[Rect],
    b_rects: &[Rect],
    avoid: &[Complex64],
    scale: f64,
) -> Result<()> {
    let curve = &surface.curve;
    let g = curve.genus;
    let e = &curve.branch_points;
    let cuts = &surface.cuts;
    let cl = 0.18 * surface.min_sep * scale.min(1.0);
    let fail = |msg: String| Err(Error::DegenerateGeometry(msg));

    // a-rectangles: own endpoints inside, others outside with clearance,
    // mutually disjoint
    for (k, r) in a_rects.iter().enumerate() {
        for (i, b) in e.iter().enumerate() {
            let inside = r.contains(*b);
            let own = i == 2 * k || i == 2 * k + 1;
            if own && !inside {
                return fail(format!("cut {k} endpoint escaped its a-rectangle"));
            }
            if !own && (inside || r.edge_distance(*b) < cl) {
                return fail(format!("branch point {i} too close to a-rectangle {k}"));
            }
        }
        for (j, r2) in a_rects.iter().enumerate() {
            if j <= k {
                continue;
            }
            for (p, q) in r.edges() {
                for (p2, q2) in r2.edges() {
                    if segments_intersect(p, q, p2, q2) {
                        return fail(format!("a-rectangles {k} and {j} intersect"));
                    }
                }
            }
        }
        // a-rectangle edges must not meet any cut except its own
        for (p, q) in r.edges() {
            for (ci, (u, v)) in cuts.cuts.iter().enumerate() {
                if ci != k && segments_intersect(p, q, *u, *v) {
                    return fail(format!("a-rectangle {k} crosses cut {ci}"));
                }
            }
            if segment_crosses_ray(p, q, cuts.ray_origin, cuts.ray_dir) {
                return fail(format!("a-rectangle {k} crosses the ray"));
            }
        }
    }

    for (kb, r) in b_rects.iter().enumerate() {
        let k = kb + 1; // 1-based cycle index
        // branch-point containment with clearance
        for (i, b) in e.iter().enumerate() {
            let should_be_inside = i + 1 >= 2 * k; // e_{2k}..e_{2g+1}, 1-based
            if should_be_inside {
                if !r.contains(*b) || r.edge_distance(*b) < cl {
                    return fail(format!("branch point {i} not safely inside b-rectangle {k}"));
                }
            } else if r.contains(*b) || r.edge_distance(*b) < cl {
                return fail(format!("branch point {i} not safely outside b-rectangle {k}"));
            }
        }
        // crossing pattern: left edge crosses exactly cut k, right edge the ray
        let edges = r.edges();
        let (bottom, right, top, left) = (edges[0], edges[1], edges[2], edges[3]);
        for (ci, (u, v)) in cuts.cuts.iter().enumerate() {
            let crosses = segments_intersect(left.0, left.1, *u, *v);
            if ci == k - 1 && !crosses {
                return fail(format!("b-rectangle {k} left edge misses cut {ci}"));
            }
            if ci != k - 1 && crosses {
                return fail(format!("b-rectangle {k} left edge crosses cut {ci}"));
            }
            for seg in [bottom, right, top] {
                if segments_intersect(seg.0, seg.1, *u, *v) {
                    return fail(format!("b-rectangle {k} side crosses cut {ci}"));
                }
            }
        }
        if !segment_crosses_ray(right.0, right.1, cuts.ray_origin, cuts.ray_dir) {
            return fail(format!("b-rectangle {k} right edge misses the ray"));
        }
        for seg in [bottom, top, left] {
            if segment_crosses_ray(seg.0, seg.1, cuts.ray_origin, cuts.ray_dir) {
                return fail(format!("b-rectangle {k} extra ray crossing"));
            }
        }
        // gate clearance
        if r.contains(cuts.gate) || r.edge_distance(cuts.gate) < cl {
            return fail(format!("gate too close to b-rectangle {k}"));
        }
        // nesting inside earlier b-rectangles
        for (jb, rj) in b_rects.iter().enumerate().take(kb) {
            for c in &r.corners {
                if !rj.contains(*c) {
                    return fail(format!("b-rectangle {k} not nested in {}", jb + 1));
                }
            }
            for (p, q) in r.edges() {
                for (p2, q2) in rj.edges() {
                    if segments_intersect(p, q, p2, q2) {
                        return fail(format!("b-rectangles {k} and {} intersect", jb + 1));
                    }
                }
            }
        }
        // a-rectangle relations
        for (j, ra) in a_rects.iter().enumerate() {
            let mut crossings = 0;
            for (p, q) in ra.edges() {
                if segments_intersect(left.0, left.1, p, q) {
                    crossings += 1;
                }
                for seg in [bottom, right, top] {
                    if segments_intersect(seg.0, seg.1, p, q) {
                        return fail(format!(
                            "b-rectangle {k} side touches a-rectangle {j}"
                        ));
                    }
                }
            }
            if j == k - 1 {
                if crossings != 2 {
                    return fail(format!(
                        "b-rectangle {k} left edge crosses a-rectangle {j} {crossings} times"
                    ));
                }
            } else if crossings != 0 {
                return fail(format!(
                    "b-rectangle {k} left edge touches a-rectangle {j}"
                ));
            }
            let inside_expected = j + 1 > k;
            let all_in = ra.corners.iter().all(|c| r.contains(*c));
            let all_out = ra.corners.iter().all(|c| !r.contains(*c));
            if inside_expected && !all_in {
                return fail(format!("a-rectangle {j} escapes b-rectangle {k}"));
            }
            if j + 1 < k && !all_out {
                return fail(format!("a-rectangle {j} intrudes into b-rectangle {k}"));
            }
        }
    }

    // avoid set: clear of every edge; outside every a-rectangle
    let pole_cl = (0.12 * surface.min_sep * scale.min(1.0)).max(3.0 * 0.05 * surface.min_sep);
    for p in avoid {
        for r in a_rects.iter() {
            if r.contains(*p) || r.edge_distance(*p) < pole_cl {
                return Err(Error::CycleTouchesPole);
            }
        }
        for r in b_rects.iter() {
            if r.edge_distance(*p) < pole_cl {
                return Err(Error::CycleTouchesPole);
            }
        }
    }
    if g >= 3 {
        // triple-digit chains get cramped; insist on generous gaps
        for w in e.windows(2) {
            if (w[1] - w[0]).norm() < 0.3 * surface.min_sep {
                return fail("chain too cramped for genus >= 3 geometry".into());
            }
        }
    }
    Ok(())
}
