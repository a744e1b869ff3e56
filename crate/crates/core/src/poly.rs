//! Complex polynomials and the Aberth-Ehrlich simultaneous root finder.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Evaluate a polynomial with ascending coefficients at `x` (Horner).
pub fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Evaluate polynomial and derivative together.
pub fn eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Coefficients of the derivative.
pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * (k as f64))
        .collect()
}

/// Backward-error scale: sum |c_k| |x|^k, used to normalize residuals.
pub fn residual_scale(coeffs: &[Complex64], x: Complex64) -> f64 {
    let ax = x.norm();
    let mut acc = 0.0;
    let mut p = 1.0;
    for c in coeffs {
        acc += c.norm() * p;
        p *= ax;
    }
    acc.max(1e-300)
}

/// All complex roots of a monic polynomial by Aberth-Ehrlich iteration,
/// with deterministic perturbation restarts and Newton polishing.
pub fn aberth_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    assert!(deg >= 1, "constant polynomial has no roots");
    let radius = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);

    let mut restart = 0u32;
    'restart: loop {
        let mut z: Vec<Complex64> = (0..deg)
            .map(|k| {
                let angle =
                    2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.41 + 0.17 * restart as f64;
                Complex64::from_polar(radius * (1.0 + 0.05 * restart as f64), angle)
            })
            .collect();

        for _iter in 0..400 {
            let mut max_step = 0.0f64;
            let snapshot = z.clone();
            for i in 0..deg {
                let (p, dp) = eval_with_derivative(coeffs, snapshot[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let newton = if dp.norm() > 0.0 { p / dp } else { p };
                let mut s = Complex64::new(0.0, 0.0);
                for (j, zj) in snapshot.iter().enumerate() {
                    if j != i {
                        let d = snapshot[i] - zj;
                        if d.norm() < 1e-300 {
                            restart += 1;
                            if restart > 8 {
                                return Err(Error::RootResidual(f64::INFINITY));
                            }
                            continue 'restart;
                        }
                        s += 1.0 / d;
                    }
                }
                let denom = Complex64::new(1.0, 0.0) - newton * s;
                let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
                z[i] = snapshot[i] - step;
                max_step = max_step.max(step.norm());
            }
            if max_step < 1e-14 * radius {
                break;
            }
        }

        // Newton polish and residual certification
        let mut worst = 0.0f64;
        for zi in z.iter_mut() {
            for _ in 0..4 {
                let (p, dp) = eval_with_derivative(coeffs, *zi);
                if dp.norm() == 0.0 {
                    break;
                }
                *zi -= p / dp;
            }
            let res = eval(coeffs, *zi).norm() / residual_scale(coeffs, *zi);
            worst = worst.max(res);
        }
        if worst < tol::ROOT_RESIDUAL {
            return Ok(z);
        }
        restart += 1;
        if restart > 8 {
            return Err(Error::RootResidual(worst));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cubic_roots() {
        // x^3 - x = x(x-1)(x+1)
        let coeffs = vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let mut roots = aberth_roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((roots[1] - c(0.0, 0.0)).norm() < 1e-12);
        assert!((roots[2] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quintic_roots_of_unity() {
        // x^5 - 1
        let mut coeffs = vec![c(0.0, 0.0); 6];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[5] = c(1.0, 0.0);
        let roots = aberth_roots(&coeffs).unwrap();
        for r in &roots {
            assert!((r.norm() - 1.0).abs() < 1e-12);
            assert!(eval(&coeffs, *r).norm() < 1e-12);
        }
    }

    #[test]
    fn repeated_root_still_converges_residual() {
        // (x-1)^2 x = x^3 - 2x^2 + x: roots cluster at 1; residual passes but
        // separation checking happens at the curve layer.
        let coeffs = vec![c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)];
        let roots = aberth_roots(&coeffs).unwrap();
        let near_one = roots.iter().filter(|r| (*r - c(1.0, 0.0)).norm() < 1e-4).count();
        assert_eq!(near_one, 2);
    }
}
