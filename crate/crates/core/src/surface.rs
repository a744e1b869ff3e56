//! The marked curve model: branch cuts from sorted branch-point pairing, a
//! ray to infinity, a fixed gate for sheet crossings, and the sheet-labeling
//! anchor. All path pinning in the crate is relative to this marking.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{HyperellipticCurve, Place};
use crate::error::{Error, Result};
use crate::numeric::{dist_point_ray, dist_point_segment};

/// Sheet label under the anchor convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Sheet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sheet::Plus => write!(f, "+"),
            Sheet::Minus => write!(f, "-"),
        }
    }
}

/// Branch cuts: g finite segments plus one ray from the last branch point.
#[derive(Clone, Debug)]
pub struct CutSystem {
    /// Finite cuts [e_{2k-1}, e_{2k}], k = 1..g.
    pub cuts: Vec<(Complex64, Complex64)>,
    /// Ray origin (the last finite branch point).
    pub ray_origin: Complex64,
    /// Unit ray direction.
    pub ray_dir: Complex64,
    /// Designated crossing point on the ray for sheet changes.
    pub gate: Complex64,
}

impl CutSystem {
    /// Distance from a point to the whole cut locus.
    pub fn distance(&self, x: Complex64) -> f64 {
        let mut d = dist_point_ray(x, self.ray_origin, self.ray_dir);
        for (a, b) in &self.cuts {
            d = d.min(dist_point_segment(x, *a, *b));
        }
        d
    }
}

/// A curve together with its marking.
#[derive(Clone, Debug)]
pub struct Surface {
    pub curve: HyperellipticCurve,
    pub cuts: CutSystem,
    pub anchor_x: Complex64,
    pub anchor_y: Complex64,
    /// Minimal pairwise branch separation, cached.
    pub min_sep: f64,
    /// Max pairwise branch distance, cached.
    pub spread: f64,
}

impl Surface {
    pub fn new(curve: HyperellipticCurve) -> Result<Self> {
        let g = curve.genus;
        let e = &curve.branch_points;
        let min_sep = curve.min_branch_separation();
        let mut spread = 0.0f64;
        for i in 0..e.len() {
            for j in (i + 1)..e.len() {
                spread = spread.max((e[i] - e[j]).norm());
            }
        }
        let spread = spread.max(1.0);

        let cuts: Vec<(Complex64, Complex64)> =
            (0..g).map(|k| (e[2 * k], e[2 * k + 1])).collect();
        let ray_origin = e[2 * g];

        // pick a ray direction clear of the other branch points and cuts
        let candidates = [
            0.0,
            -std::f64::consts::FRAC_PI_6,
            std::f64::consts::FRAC_PI_6,
            -std::f64::consts::FRAC_PI_3,
            std::f64::consts::FRAC_PI_3,
            -std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::PI,
        ];
        let clear = 0.4 * min_sep;
        let mut ray_dir = None;
        'dirs: for th in candidates {
            let dir = Complex64::from_polar(1.0, th);
            for (i, b) in e.iter().enumerate() {
                if i == 2 * g {
                    continue;
                }
                if dist_point_ray(*b, ray_origin, dir) < clear {
                    continue 'dirs;
                }
            }
            // the ray must not slice through a finite cut
            for (a, b) in &cuts {
                let far = ray_origin + dir * (10.0 * spread + 10.0);
                if crate::numeric::segments_intersect(*a, *b, ray_origin, far) {
                    continue 'dirs;
                }
            }
            ray_dir = Some(dir);
            break;
        }
        let ray_dir = ray_dir.ok_or_else(|| {
            Error::DegenerateGeometry("no admissible ray direction to infinity".into())
        })?;

        // cuts must be mutually separated
        for i in 0..cuts.len() {
            for j in (i + 1)..cuts.len() {
                let d = segment_gap(cuts[i], cuts[j]);
                if d < 0.2 * min_sep {
                    return Err(Error::DegenerateGeometry(format!(
                        "cuts {i} and {j} come within {d:.3e}"
                    )));
                }
            }
        }

        let gate = ray_origin + ray_dir * (2.0 + 0.75 * spread);

        // anchor below the configuration, clear of cuts and branch points
        let centroid = e.iter().sum::<Complex64>() / (e.len() as f64);
        let mut anchor_x = None;
        for th in [-0.5, -0.35, -0.65, -0.2, -0.8, 0.5, 0.35].map(|t| t * std::f64::consts::PI) {
            let cand = centroid + Complex64::from_polar(1.5 * spread + 1.0, th);
            let cut_d = {
                let mut d = dist_point_ray(cand, ray_origin, ray_dir);
                for (a, b) in &cuts {
                    d = d.min(dist_point_segment(cand, *a, *b));
                }
                d
            };
            if cut_d > 0.5 * min_sep && curve.branch_distance(cand) > 0.5 * min_sep {
                anchor_x = Some(cand);
                break;
            }
        }
        let anchor_x = anchor_x
            .ok_or_else(|| Error::DegenerateGeometry("no admissible sheet anchor".into()))?;
        let anchor_y = curve.f(anchor_x).sqrt();

        Ok(Surface {
            curve,
            cuts: CutSystem {
                cuts,
                ray_origin,
                ray_dir,
                gate,
            },
            anchor_x,
            anchor_y,
            min_sep,
            spread,
        })
    }

    pub fn genus(&self) -> usize {
        self.curve.genus
    }

    /// The reference branch of y on the cut plane, by continuation from the
    /// anchor along a cut-avoiding route. Single-valued off the cuts.
    pub fn y_ref(&self, x: Complex64) -> Result<Complex64> {
        let router = crate::planner::Router::new(self, Vec::new());
        let way = router.route_plane(self.anchor_x, x)?;
        self.curve.continue_y(&crate::curve::PathPlan {
            waypoints: way,
            detour_radius: router.margin,
            initial_y: self.anchor_y,
            closed: false,
        })
    }

    /// Construct the place over x on the given sheet.
    pub fn place_on_sheet(&self, x: Complex64, sheet: Sheet) -> Result<Place> {
        let yr = self.y_ref(x)?;
        Ok(Place {
            x,
            y: yr * sheet.sign(),
        })
    }

    /// Which sheet does a place lie on?
    pub fn sheet_of(&self, p: &Place) -> Result<Sheet> {
        let yr = self.y_ref(p.x)?;
        let dp = (p.y - yr).norm();
        let dm = (p.y + yr).norm();
        if dp < dm {
            Ok(Sheet::Plus)
        } else {
            Ok(Sheet::Minus)
        }
    }
}

fn segment_gap(s1: (Complex64, Complex64), s2: (Complex64, Complex64)) -> f64 {
    let mut d = f64::INFINITY;
    d = d.min(dist_point_segment(s1.0, s2.0, s2.1));
    d = d.min(dist_point_segment(s1.1, s2.0, s2.1));
    d = d.min(dist_point_segment(s2.0, s1.0, s1.1));
    d = d.min(dist_point_segment(s2.1, s1.0, s1.1));
    d
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn cut_layout_cubic() {
        let s = cubic_surface();
        assert_eq!(s.cuts.cuts.len(), 1);
        assert!((s.cuts.cuts[0].0 - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((s.cuts.cuts[0].1 - c(0.0, 0.0)).norm() < 1e-12);
        assert!((s.cuts.ray_origin - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sheet_labels_are_stable() {
        let s = cubic_surface();
        let x = c(2.5, 1.0);
        let p = s.place_on_sheet(x, Sheet::Plus).unwrap();
        assert_eq!(s.sheet_of(&p).unwrap(), Sheet::Plus);
        assert_eq!(s.sheet_of(&p.conjugate()).unwrap(), Sheet::Minus);
        // determinism: repeated calls agree bit for bit
        let p2 = s.place_on_sheet(x, Sheet::Plus).unwrap();
        assert_eq!(p.y, p2.y);
    }

    #[test]
    fn y_ref_single_valued_across_calls() {
        let s = cubic_surface();
        for x in [c(-3.0, 0.5), c(0.5, 2.0), c(2.0, -1.5), c(-0.5, -0.4)] {
            let a = s.y_ref(x).unwrap();
            let b = s.y_ref(x).unwrap();
            assert_eq!(a, b);
            assert!((a * a - s.curve.f(x)).norm() < 1e-9 * (1.0 + s.curve.f(x).norm()));
        }
    }
}
