//! Normalized holomorphic basis and third-kind differentials with poles
//! (Q_plus, Q_minus), residues +1/-1 and vanishing a-periods.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::curve::Place;
use crate::error::{Error, Result};
use crate::homology::HomologyBasis;
use crate::periods::{a_condition, PeriodData};
use crate::quad::{integrate_differentials, DiffExpr};
use crate::surface::Surface;
use crate::tol;

/// The normalized basis omega_i = sum_k C[i][k] x^k dx / y with identity
/// a-periods.
#[derive(Clone, Debug)]
pub struct HolomorphicBasis {
    /// C = a_raw^{-1}; row i holds omega_i in monomial coordinates.
    pub coefficient_matrix: DMatrix<Complex64>,
}

impl HolomorphicBasis {
    pub fn genus(&self) -> usize {
        self.coefficient_matrix.nrows()
    }

    pub fn omega(&self, i: usize) -> DiffExpr {
        let row: Vec<Complex64> = self
            .coefficient_matrix
            .row(i)
            .iter()
            .cloned()
            .collect();
        DiffExpr::Poly(row)
    }

    pub fn omegas(&self) -> Vec<DiffExpr> {
        (0..self.genus()).map(|i| self.omega(i)).collect()
    }
}

/// Build the normalized basis from period data, guarding conditioning.
pub fn holomorphic_basis(periods: &PeriodData) -> Result<HolomorphicBasis> {
    let cond = a_condition(&periods.a_raw);
    if cond > tol::A_COND_LIMIT {
        return Err(Error::IllConditioned(cond));
    }
    Ok(HolomorphicBasis {
        coefficient_matrix: periods.normalization.clone(),
    })
}

/// A normalized differential of the third kind: simple poles at `pole_plus`
/// (residue +1) and `pole_minus` (residue -1), vanishing a-periods.
#[derive(Clone, Debug)]
pub struct ThirdKindDifferential {
    pub pole_plus: Place,
    pub pole_minus: Place,
    /// Coefficients of the normalized omega_k subtracted to kill a-periods.
    pub correction: Vec<Complex64>,
    /// The same correction in monomial coordinates, cached for evaluation.
    corr_poly: Vec<Complex64>,
}

impl ThirdKindDifferential {
    pub fn expr(&self) -> DiffExpr {
        DiffExpr::Third {
            xp: self.pole_plus.x,
            yp: self.pole_plus.y,
            xm: self.pole_minus.x,
            ym: self.pole_minus.y,
            corr: self.corr_poly.clone(),
        }
    }
}

/// Construct the normalized third-kind differential for a pole pair.
pub fn third_kind(
    surface: &Surface,
    basis: &HolomorphicBasis,
    homology: &HomologyBasis,
    q_plus: &Place,
    q_minus: &Place,
    quad_tol: f64,
) -> Result<ThirdKindDifferential> {
    let curve = &surface.curve;
    if !curve.is_regular(q_plus) || !curve.is_regular(q_minus) {
        return Err(Error::PoleAtBranch);
    }
    let same_x = (q_plus.x - q_minus.x).norm() < 1e-10 * (1.0 + curve.scale());
    let same_y = (q_plus.y - q_minus.y).norm() < 1e-10 * (1.0 + q_plus.y.norm());
    if same_x && same_y {
        return Err(Error::CoincidentPoles);
    }

    let raw = DiffExpr::Third {
        xp: q_plus.x,
        yp: q_plus.y,
        xm: q_minus.x,
        ym: q_minus.y,
        corr: vec![],
    };
    // correction_k = a_k-period of the raw kernel, since the normalized
    // basis has identity a-periods
    let g = basis.genus();
    let mut correction = Vec::with_capacity(g);
    for plan in &homology.a_cycles {
        let r = integrate_differentials(
            curve,
            std::slice::from_ref(&raw),
            &plan.waypoints,
            plan.initial_y,
            quad_tol,
        )?;
        correction.push(r.values[0]);
    }
    // fold into monomial coordinates: sum_k correction_k * C_row_k
    let deg = basis.coefficient_matrix.ncols();
    let mut corr_poly = vec![Complex64::new(0.0, 0.0); deg];
    for (k, c) in correction.iter().enumerate() {
        for j in 0..deg {
            corr_poly[j] += c * basis.coefficient_matrix[(k, j)];
        }
    }
    Ok(ThirdKindDifferential {
        pole_plus: *q_plus,
        pole_minus: *q_minus,
        correction,
        corr_poly,
    })
}

/// b-periods of a differential over the basis b-cycles.
pub fn b_periods(
    surface: &Surface,
    homology: &HomologyBasis,
    expr: &DiffExpr,
    quad_tol: f64,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(homology.b_cycles.len());
    for plan in &homology.b_cycles {
        let r = integrate_differentials(
            &surface.curve,
            std::slice::from_ref(expr),
            &plan.waypoints,
            plan.initial_y,
            quad_tol,
        )?;
        out.push(r.values[0]);
    }
    Ok(out)
}

/// a-periods of a differential over the basis a-cycles.
pub fn a_periods(
    surface: &Surface,
    homology: &HomologyBasis,
    expr: &DiffExpr,
    quad_tol: f64,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(homology.a_cycles.len());
    for plan in &homology.a_cycles {
        let r = integrate_differentials(
            &surface.curve,
            std::slice::from_ref(expr),
            &plan.waypoints,
            plan.initial_y,
            quad_tol,
        )?;
        out.push(r.values[0]);
    }
    Ok(out)
}

/// Residue of a differential at a place by a small sheet-tracked contour:
/// (1 / 2 pi i) times the loop integral on a circle of the given radius.
pub fn contour_residue(
    surface: &Surface,
    expr: &DiffExpr,
    at: &Place,
    radius: f64,
    quad_tol: f64,
) -> Result<Complex64> {
    let curve = &surface.curve;
    let n = 16usize;
    let mut waypoints = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
        waypoints.push(at.x + Complex64::from_polar(radius, ang));
    }
    let y0 = curve.continue_segment(at.x, at.y, waypoints[0])?;
    let r = integrate_differentials(curve, std::slice::from_ref(expr), &waypoints, y0, quad_tol)?;
    Ok(r.values[0] / (2.0 * std::f64::consts::PI * Complex64::i()))
}

/// Default contour radius for residue checks at a place.
pub fn residue_radius(surface: &Surface, at: &Place, others: &[Place]) -> f64 {
    let mut d = surface.curve.branch_distance(at.x);
    for o in others {
        let sep = (at.x - o.x).norm();
        if sep > 0.0 {
            d = d.min(sep);
        }
    }
    0.1 * d
}
