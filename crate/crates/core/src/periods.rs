//! Period matrices of the raw differential basis x^{k-1} dx / y and the
//! normalized matrix tau, with orientation calibration and invariant checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::homology::HomologyBasis;
use crate::quad::{integrate_differentials, DiffExpr};
use crate::surface::Surface;
use crate::tol;

#[derive(Clone, Debug)]
pub struct PeriodData {
    /// a_raw[(i, k)] = integral of x^i dx/y over a_k.
    pub a_raw: DMatrix<Complex64>,
    pub b_raw: DMatrix<Complex64>,
    /// Normalization C = a_raw^{-1}; row i gives the normalized basis
    /// element omega_i in monomial coordinates.
    pub normalization: DMatrix<Complex64>,
    /// tau = C * b_raw, so tau[(i, j)] is the b_j-period of omega_i.
    pub tau: DMatrix<Complex64>,
    pub sym_error: f64,
    pub min_eig_im_tau: f64,
    pub quad_error: f64,
}

/// Raw monomial differentials x^i dx / y, i = 0..g-1.
pub fn raw_basis(genus: usize) -> Vec<DiffExpr> {
    (0..genus).map(DiffExpr::Monomial).collect()
}

/// Compute all periods over the basis cycles. Flips the b-orientation once
/// if the imaginary part of tau comes out negative definite; any remaining
/// violation of symmetry or positivity is reported as NonCanonicalBasis.
pub fn compute_periods(
    surface: &Surface,
    basis: &mut HomologyBasis,
    tol: f64,
) -> Result<PeriodData> {
    let g = surface.genus();
    let diffs = raw_basis(g);
    let mut quad_error = 0.0f64;

    let mut integrate_cycles = |plans: &[crate::curve::PathPlan]| -> Result<DMatrix<Complex64>> {
        let mut m = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
        for (k, plan) in plans.iter().enumerate() {
            let r = integrate_differentials(
                &surface.curve,
                &diffs,
                &plan.waypoints,
                plan.initial_y,
                tol,
            )?;
            quad_error = quad_error.max(r.err);
            for i in 0..g {
                m[(i, k)] = r.values[i];
            }
        }
        Ok(m)
    };

    let a_raw = integrate_cycles(&basis.a_cycles)?;
    let mut b_raw = integrate_cycles(&basis.b_cycles)?;

    let normalization = a_raw
        .clone()
        .try_inverse()
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    let mut tau = &normalization * &b_raw;

    let (sym, min_eig) = tau_diagnostics(&tau);
    if min_eig < 0.0 {
        // orientation calibration: flipping every b-cycle negates tau
        let (_, max_eig_neg) = tau_diagnostics(&(-tau.clone()));
        if max_eig_neg > 0.0 {
            basis.flip_b_orientation();
            b_raw = -b_raw;
            tau = -tau;
        }
    }
    let (sym_error, min_eig_im_tau) = tau_diagnostics(&tau);
    let scale = 1.0
        + tau
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
    if sym_error > tol::TAU_SYMMETRY * scale {
        return Err(Error::NonCanonicalBasis(format!(
            "tau asymmetry {sym_error:.3e} exceeds tolerance (scale {scale:.3e})"
        )));
    }
    if min_eig_im_tau <= 0.0 {
        return Err(Error::NonCanonicalBasis(format!(
            "Im tau not positive definite (min eig {min_eig_im_tau:.3e}, sym err {sym:.3e})"
        )));
    }

    Ok(PeriodData {
        a_raw,
        b_raw,
        normalization,
        tau,
        sym_error,
        min_eig_im_tau,
        quad_error,
    })
}

/// (max-norm asymmetry, smallest eigenvalue of the symmetrized Im tau).
pub fn tau_diagnostics(tau: &DMatrix<Complex64>) -> (f64, f64) {
    let g = tau.nrows();
    let mut sym = 0.0f64;
    for i in 0..g {
        for j in 0..g {
            sym = sym.max((tau[(i, j)] - tau[(j, i)]).norm());
        }
    }
    let mut im = DMatrix::<f64>::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            im[(i, j)] = 0.5 * (tau[(i, j)].im + tau[(j, i)].im);
        }
    }
    let eig = im.symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    (sym, min_eig)
}

/// Condition number of the raw a-period matrix.
pub fn a_condition(a_raw: &DMatrix<Complex64>) -> f64 {
    let svd = a_raw.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let min = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Genus-1 modular j-invariant from a scalar period ratio via theta
/// constants: lambda = (theta2/theta3)^4, j = 256 (1 - l + l^2)^3 / (l^2 (1-l)^2).
pub fn j_invariant(tau: Complex64) -> Complex64 {
    let q = (Complex64::i() * std::f64::consts::PI * tau).exp();
    let mut th2 = Complex64::new(0.0, 0.0);
    let mut th3 = Complex64::new(1.0, 0.0);
    for n in 1..64i32 {
        let nf = n as f64;
        th3 += 2.0 * q.powf(nf * nf);
    }
    for n in 0..64i32 {
        let nf = n as f64 + 0.5;
        th2 += 2.0 * q.powf(nf * nf);
    }
    let l = (th2 / th3).powu(4);
    let one = Complex64::new(1.0, 0.0);
    256.0 * (one - l + l * l).powu(3) / (l * l * (one - l) * (one - l))
}
