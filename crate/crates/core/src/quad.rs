//! Adaptive Gauss-Kronrod quadrature of curve differentials along polylines
//! with sheet tracking, plus a functional mode that carries running inner
//! integrals (needed for cycle functionals and winding numbers).

use num_complex::Complex64;

use crate::curve::HyperellipticCurve;
use crate::error::{Error, Result};
use crate::poly;

/// 15-point Kronrod nodes on [-1, 1], ascending.
const NODES: [f64; 15] = [
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
];

const W_KRONROD: [f64; 15] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
];

/// 7-point Gauss weights aligned with the odd Kronrod nodes.
const W_GAUSS: [f64; 7] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
    0.381830050505119,
    0.279705391489277,
    0.129484966168870,
];

/// Gauss indices inside `NODES`.
const GAUSS_IDX: [usize; 7] = [1, 3, 5, 7, 9, 11, 13];

const MAX_DEPTH: u32 = 26;

/// A differential on the curve, evaluated as a density with respect to dx.
#[derive(Clone, Debug)]
pub enum DiffExpr {
    /// x^k dx / y
    Monomial(usize),
    /// p(x) dx / y with ascending coefficients
    Poly(Vec<Complex64>),
    /// Third-kind kernel with poles at (xp, yp) and (xm, ym), corrected by a
    /// polynomial part:
    ///   [ (y+yp)/(x-xp) - (y+ym)/(x-xm) ] dx/(2y) - corr(x) dx/y
    Third {
        xp: Complex64,
        yp: Complex64,
        xm: Complex64,
        ym: Complex64,
        corr: Vec<Complex64>,
    },
}

impl DiffExpr {
    #[inline]
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        match self {
            DiffExpr::Monomial(k) => x.powu(*k as u32) / y,
            DiffExpr::Poly(p) => poly::eval(p, x) / y,
            DiffExpr::Third { xp, yp, xm, ym, corr } => {
                let kern = ((y + yp) / (x - xp) - (y + ym) / (x - xm)) / (2.0 * y);
                if corr.is_empty() {
                    kern
                } else {
                    kern - poly::eval(corr, x) / y
                }
            }
        }
    }
}

/// Result of a polyline integration.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub values: Vec<Complex64>,
    pub y_end: Complex64,
    pub err: f64,
}

/// Integrate a family of differentials along a polyline with shared sheet
/// tracking. `tol` is an absolute bound on the total quadrature error.
pub fn integrate_differentials(
    curve: &HyperellipticCurve,
    diffs: &[DiffExpr],
    waypoints: &[Complex64],
    y0: Complex64,
    tol: f64,
) -> Result<QuadResult> {
    let nseg = waypoints.len().saturating_sub(1).max(1);
    let seg_tol = tol / nseg as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); diffs.len()];
    let mut err = 0.0f64;
    let mut y = y0;
    for w in waypoints.windows(2) {
        if (w[1] - w[0]).norm() == 0.0 {
            continue;
        }
        let (v, ynew, e) = segment_adaptive(curve, diffs, w[0], w[1], y, seg_tol)?;
        for (acc, dv) in values.iter_mut().zip(v.iter()) {
            *acc += dv;
        }
        err += e;
        y = ynew;
    }
    Ok(QuadResult { values, y_end: y, err })
}

fn segment_adaptive(
    curve: &HyperellipticCurve,
    diffs: &[DiffExpr],
    a: Complex64,
    b: Complex64,
    ya: Complex64,
    tol: f64,
) -> Result<(Vec<Complex64>, Complex64, f64)> {
    let mut values = vec![Complex64::new(0.0, 0.0); diffs.len()];
    let mut total_err = 0.0;
    let mut worst = 0.0f64;
    // explicit stack of (t0, t1, y at t0, depth), processed left to right
    let mut pending = vec![(0.0f64, 1.0f64, ya, 0u32)];
    let mut y_end = ya;
    while let Some((t0, t1, y0, depth)) = pending.pop() {
        let xa = a + (b - a) * t0;
        let xb = a + (b - a) * t1;
        let (k, g, yb) = panel(curve, diffs, xa, xb, y0)?;
        let mut perr = 0.0f64;
        for (kk, gg) in k.iter().zip(g.iter()) {
            perr = perr.max((kk - gg).norm());
        }
        let budget = tol * (t1 - t0);
        if perr <= budget || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH {
                worst = worst.max(perr);
            }
            for (acc, dv) in values.iter_mut().zip(k.iter()) {
                *acc += dv;
            }
            total_err += perr;
            y_end = yb;
        } else {
            let tm = 0.5 * (t0 + t1);
            // push right first so the left half is processed next (stack order)
            pending.push((tm, t1, Complex64::new(0.0, 0.0), depth + 1));
            let idx = pending.len() - 1;
            let xm = a + (b - a) * tm;
            let ym = curve.continue_segment(xa, y0, xm)?;
            pending[idx].2 = ym;
            pending.push((t0, tm, y0, depth + 1));
        }
    }
    if worst > tol * 16.0 {
        return Err(Error::QuadratureFailure {
            wanted: tol,
            achieved: worst,
        });
    }
    Ok((values, y_end, total_err))
}

/// One GK15 panel over the straight segment [xa, xb]; returns per-diff
/// Kronrod and Gauss sums and y at xb.
fn panel(
    curve: &HyperellipticCurve,
    diffs: &[DiffExpr],
    xa: Complex64,
    xb: Complex64,
    ya: Complex64,
) -> Result<(Vec<Complex64>, Vec<Complex64>, Complex64)> {
    let mid = 0.5 * (xa + xb);
    let half = 0.5 * (xb - xa);
    let mut kron = vec![Complex64::new(0.0, 0.0); diffs.len()];
    let mut gauss = vec![Complex64::new(0.0, 0.0); diffs.len()];
    let mut x_prev = xa;
    let mut y_prev = ya;
    let mut gauss_slot = 0usize;
    for (i, t) in NODES.iter().enumerate() {
        let x = mid + half * *t;
        let y = curve.continue_segment(x_prev, y_prev, x)?;
        for (j, d) in diffs.iter().enumerate() {
            let dens = d.eval(x, y) * half;
            kron[j] += W_KRONROD[i] * dens;
            if gauss_slot < GAUSS_IDX.len() && GAUSS_IDX[gauss_slot] == i {
                gauss[j] += W_GAUSS[gauss_slot] * dens;
            }
        }
        if gauss_slot < GAUSS_IDX.len() && GAUSS_IDX[gauss_slot] == i {
            gauss_slot += 1;
        }
        x_prev = x;
        y_prev = y;
    }
    let y_end = curve.continue_segment(x_prev, y_prev, xb)?;
    Ok((kron, gauss, y_end))
}

/// Result of a functional integration.
#[derive(Clone, Debug)]
pub struct FunctionalResult {
    pub values: Vec<Complex64>,
    pub y_end: Complex64,
    pub h_end: Vec<Complex64>,
    pub err: f64,
}

/// Integrate a vector-valued functional `outer(x, y, h)` along a polyline,
/// where `h` is the vector of running integrals of `inners` from the path
/// start (seeded with `h0`). Used for constants that pair a cycle integrand
/// with an accumulated abelian integral, and for winding numbers where the
/// integrand depends on the continued Abel data.
pub fn integrate_functional(
    curve: &HyperellipticCurve,
    inners: &[DiffExpr],
    h0: &[Complex64],
    waypoints: &[Complex64],
    y0: Complex64,
    outer: &mut dyn FnMut(Complex64, Complex64, &[Complex64]) -> Vec<Complex64>,
    n_out: usize,
    tol: f64,
) -> Result<FunctionalResult> {
    assert_eq!(inners.len(), h0.len());
    let nseg = waypoints.len().saturating_sub(1).max(1);
    let seg_tol = tol / nseg as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); n_out];
    let mut err = 0.0;
    let mut y = y0;
    let mut h = h0.to_vec();
    for w in waypoints.windows(2) {
        if (w[1] - w[0]).norm() == 0.0 {
            continue;
        }
        let out = functional_segment(curve, inners, &h, w[0], w[1], y, outer, n_out, seg_tol)?;
        for (acc, dv) in values.iter_mut().zip(out.values.iter()) {
            *acc += dv;
        }
        err += out.err;
        y = out.y_end;
        h = out.h_end;
    }
    Ok(FunctionalResult {
        values,
        y_end: y,
        h_end: h,
        err,
    })
}

#[allow(clippy::too_many_arguments)]
fn functional_segment(
    curve: &HyperellipticCurve,
    inners: &[DiffExpr],
    h0: &[Complex64],
    a: Complex64,
    b: Complex64,
    ya: Complex64,
    outer: &mut dyn FnMut(Complex64, Complex64, &[Complex64]) -> Vec<Complex64>,
    n_out: usize,
    tol: f64,
) -> Result<FunctionalResult> {
    struct Frame {
        t0: f64,
        t1: f64,
        y0: Complex64,
        h0: Vec<Complex64>,
        depth: u32,
    }
    let mut values = vec![Complex64::new(0.0, 0.0); n_out];
    let mut total_err = 0.0;
    let mut worst = 0.0f64;
    let mut y_end = ya;
    let mut h_end = h0.to_vec();
    let mut pending = vec![Frame {
        t0: 0.0,
        t1: 1.0,
        y0: ya,
        h0: h0.to_vec(),
        depth: 0,
    }];
    while let Some(fr) = pending.pop() {
        let xa = a + (b - a) * fr.t0;
        let xb = a + (b - a) * fr.t1;
        let (kron, gauss, yb, hb, perr_inner) =
            functional_panel(curve, inners, &fr.h0, xa, xb, fr.y0, outer, n_out)?;
        let mut perr = perr_inner;
        for (kk, gg) in kron.iter().zip(gauss.iter()) {
            perr = perr.max((kk - gg).norm());
        }
        let budget = tol * (fr.t1 - fr.t0);
        if perr <= budget || fr.depth >= MAX_DEPTH {
            if fr.depth >= MAX_DEPTH {
                worst = worst.max(perr);
            }
            for (acc, dv) in values.iter_mut().zip(kron.iter()) {
                *acc += dv;
            }
            total_err += perr;
            y_end = yb;
            h_end = hb;
        } else {
            let tm = 0.5 * (fr.t0 + fr.t1);
            let xm = a + (b - a) * tm;
            // advance y and h to the midpoint for the right child
            let (ym, hm) = advance_inner(curve, inners, xa, fr.y0, &fr.h0, xm)?;
            pending.push(Frame {
                t0: tm,
                t1: fr.t1,
                y0: ym,
                h0: hm,
                depth: fr.depth + 1,
            });
            pending.push(Frame {
                t0: fr.t0,
                t1: tm,
                y0: fr.y0,
                h0: fr.h0,
                depth: fr.depth + 1,
            });
        }
    }
    if worst > tol * 16.0 {
        return Err(Error::QuadratureFailure {
            wanted: tol,
            achieved: worst,
        });
    }
    Ok(FunctionalResult {
        values,
        y_end,
        h_end,
        err: total_err,
    })
}

/// Advance the inner integrals along [xa, xb] with a fixed 7-point Gauss rule
/// (sub-panel intervals are short, so this is at machine precision).
fn advance_inner(
    curve: &HyperellipticCurve,
    inners: &[DiffExpr],
    xa: Complex64,
    ya: Complex64,
    h: &[Complex64],
    xb: Complex64,
) -> Result<(Complex64, Vec<Complex64>)> {
    let mid = 0.5 * (xa + xb);
    let half = 0.5 * (xb - xa);
    let mut hn = h.to_vec();
    let mut x_prev = xa;
    let mut y_prev = ya;
    for (slot, &gi) in GAUSS_IDX.iter().enumerate() {
        let x = mid + half * NODES[gi];
        let y = curve.continue_segment(x_prev, y_prev, x)?;
        for (j, d) in inners.iter().enumerate() {
            hn[j] += W_GAUSS[slot] * d.eval(x, y) * half;
        }
        x_prev = x;
        y_prev = y;
    }
    let yb = curve.continue_segment(x_prev, y_prev, xb)?;
    Ok((yb, hn))
}

#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn functional_panel(
    curve: &HyperellipticCurve,
    inners: &[DiffExpr],
    h0: &[Complex64],
    xa: Complex64,
    xb: Complex64,
    ya: Complex64,
    outer: &mut dyn FnMut(Complex64, Complex64, &[Complex64]) -> Vec<Complex64>,
    n_out: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>, Complex64, Vec<Complex64>, f64)> {
    let mid = 0.5 * (xa + xb);
    let half = 0.5 * (xb - xa);
    let mut kron = vec![Complex64::new(0.0, 0.0); n_out];
    let mut gauss = vec![Complex64::new(0.0, 0.0); n_out];
    let mut x_prev = xa;
    let mut y_prev = ya;
    let mut h = h0.to_vec();
    let mut gauss_slot = 0usize;
    for (i, t) in NODES.iter().enumerate() {
        let x = mid + half * *t;
        let (y, hn) = advance_inner(curve, inners, x_prev, y_prev, &h, x)?;
        h = hn;
        let out = outer(x, y, &h);
        debug_assert_eq!(out.len(), n_out);
        for (j, v) in out.iter().enumerate() {
            let dens = v * half;
            kron[j] += W_KRONROD[i] * dens;
            if gauss_slot < GAUSS_IDX.len() && GAUSS_IDX[gauss_slot] == i {
                gauss[j] += W_GAUSS[gauss_slot] * dens;
            }
        }
        if gauss_slot < GAUSS_IDX.len() && GAUSS_IDX[gauss_slot] == i {
            gauss_slot += 1;
        }
        x_prev = x;
        y_prev = y;
    }
    let (y_end, h_end) = advance_inner(curve, inners, x_prev, y_prev, &h, xb)?;
    Ok((kron, gauss, y_end, h_end, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::HyperellipticCurve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic() -> HyperellipticCurve {
        HyperellipticCurve::from_coefficients(&[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap()
    }

    /// Closed square around the origin, counterclockwise.
    fn square(center: Complex64, half: f64) -> Vec<Complex64> {
        vec![
            center + c(-half, -half),
            center + c(half, -half),
            center + c(half, half),
            center + c(-half, half),
            center + c(-half, -half),
        ]
    }

    #[test]
    fn third_kind_kernel_contour_residue() {
        // Residue of the third-kind kernel at its plus pole equals +1:
        // (1/2pi i) contour integral = 1 on a small loop around the pole.
        let curve = cubic();
        let xq = c(2.0, 0.5);
        let yq = curve.sheets_at(xq).unwrap().0;
        let xm = c(-2.0, 0.4);
        let ym = curve.sheets_at(xm).unwrap().0;
        let d = DiffExpr::Third {
            xp: xq,
            yp: yq,
            xm,
            ym,
            corr: vec![],
        };
        let contour = square(xq, 0.15);
        let y0 = curve.continue_segment(xq, yq, contour[0]).unwrap();
        let r = integrate_differentials(&curve, &[d], &contour, y0, 1e-12).unwrap();
        let res = r.values[0] / c(0.0, 2.0 * std::f64::consts::PI);
        assert!(
            (res - c(1.0, 0.0)).norm() < 1e-9,
            "residue should be +1, got {res}"
        );
    }

    #[test]
    fn holomorphic_closed_loop_around_nothing_is_zero() {
        let curve = cubic();
        let contour = square(c(3.0, 3.0), 0.5);
        let y0 = curve.sheets_at(contour[0]).unwrap().0;
        let d = DiffExpr::Monomial(0);
        let r = integrate_differentials(&curve, &[d], &contour, y0, 1e-12).unwrap();
        assert!(r.values[0].norm() < 1e-10);
    }

    #[test]
    fn functional_matches_plain_product_rule() {
        // integral of (d h^2/dx)/2 = h db where h = int of monomial; check
        // against h(end)^2/2 along an open path (h0 = 0, outer = h * dens).
        let curve = cubic();
        let path = vec![c(2.0, 1.0), c(3.0, 1.5), c(4.0, 0.5)];
        let y0 = curve.sheets_at(path[0]).unwrap().0;
        let d = DiffExpr::Monomial(0);
        let plain =
            integrate_differentials(&curve, &[d.clone()], &path, y0, 1e-13).unwrap();
        let h_total = plain.values[0];
        let inners = [d.clone()];
        let h0 = [c(0.0, 0.0)];
        let mut outer = |x: Complex64, y: Complex64, h: &[Complex64]| {
            vec![h[0] * DiffExpr::Monomial(0).eval(x, y)]
        };
        let f = integrate_functional(&curve, &inners, &h0, &path, y0, &mut outer, 1, 1e-13)
            .unwrap();
        let expect = 0.5 * h_total * h_total;
        assert!(
            (f.values[0] - expect).norm() < 1e-10,
            "{} vs {}",
            f.values[0],
            expect
        );
        assert!((f.h_end[0] - h_total).norm() < 1e-11);
    }
}
