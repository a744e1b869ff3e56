//! Scaled complex arithmetic and small numeric helpers.

use num_complex::Complex64;

/// A complex number carried as `val * exp(log)` with real `log`.
///
/// Theta sums composed with exponentials of third-kind integrals overflow
/// f64 near the poles; all such values are passed around in this form and
/// only collapsed to a plain `Complex64` when the caller knows it is safe.
#[derive(Clone, Copy, Debug)]
pub struct Scaled {
    pub val: Complex64,
    pub log: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        val: Complex64::new(0.0, 0.0),
        log: 0.0,
    };

    pub fn new(val: Complex64) -> Self {
        Scaled { val, log: 0.0 }.normalized()
    }

    pub fn from_parts(val: Complex64, log: f64) -> Self {
        Scaled { val, log }.normalized()
    }

    /// exp(c) as a scaled value.
    pub fn exp(c: Complex64) -> Self {
        Scaled {
            val: Complex64::new(0.0, c.im).exp(),
            log: c.re,
        }
    }

    fn normalized(self) -> Self {
        let n = self.val.norm();
        if n == 0.0 || !n.is_finite() {
            return self;
        }
        // keep |val| within a decade of 1
        if !(0.1..=10.0).contains(&n) {
            let l = n.ln();
            Scaled {
                val: self.val / n,
                log: self.log + l,
            }
        } else {
            self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.val == Complex64::new(0.0, 0.0)
    }

    pub fn mul(self, other: Scaled) -> Scaled {
        Scaled {
            val: self.val * other.val,
            log: self.log + other.log,
        }
        .normalized()
    }

    pub fn mul_complex(self, c: Complex64) -> Scaled {
        Scaled {
            val: self.val * c,
            log: self.log,
        }
        .normalized()
    }

    pub fn div(self, other: Scaled) -> Scaled {
        Scaled {
            val: self.val / other.val,
            log: self.log - other.log,
        }
        .normalized()
    }

    pub fn neg(self) -> Scaled {
        Scaled {
            val: -self.val,
            log: self.log,
        }
    }

    /// Sum of scaled values, factored on the largest magnitude.
    pub fn sum(terms: &[Scaled]) -> Scaled {
        let mut lmax = f64::NEG_INFINITY;
        for t in terms {
            if !t.is_zero() && t.log > lmax {
                lmax = t.log;
            }
        }
        if lmax == f64::NEG_INFINITY {
            return Scaled::ZERO;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in terms {
            if !t.is_zero() {
                acc += t.val * (t.log - lmax).exp();
            }
        }
        Scaled { val: acc, log: lmax }.normalized()
    }

    /// ln of the value as a plain complex number (principal branch).
    pub fn ln(&self) -> Complex64 {
        self.val.ln() + Complex64::new(self.log, 0.0)
    }

    /// log of the modulus.
    pub fn log_norm(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.val.norm().ln() + self.log
        }
    }

    /// Collapse to a plain complex value; may overflow to infinity.
    pub fn to_complex(&self) -> Complex64 {
        self.val * self.log.exp()
    }
}

/// max-norm distance between two complex numbers seen as points.
pub fn cdist(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

/// Distance from point `p` to the segment `[a, b]`.
pub fn dist_point_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from point `p` to the ray `a + t*dir`, `t >= 0` (`dir` unit).
pub fn dist_point_ray(p: Complex64, a: Complex64, dir: Complex64) -> f64 {
    let t = (p - a).re * dir.re + (p - a).im * dir.im;
    let t = t.max(0.0);
    (p - (a + dir * t)).norm()
}

/// Test whether segments `[a1, b1]` and `[a2, b2]` intersect.
pub fn segments_intersect(a1: Complex64, b1: Complex64, a2: Complex64, b2: Complex64) -> bool {
    fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
        (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
    }
    let d1 = orient(a2, b2, a1);
    let d2 = orient(a2, b2, b1);
    let d3 = orient(a1, b1, a2);
    let d4 = orient(a1, b1, b2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    // touching counts as intersecting for routing purposes
    let on = |a: Complex64, b: Complex64, c: Complex64| {
        orient(a, b, c).abs() < 1e-14 * (1.0 + (b - a).norm() * (c - a).norm())
            && c.re >= a.re.min(b.re) - 1e-14
            && c.re <= a.re.max(b.re) + 1e-14
            && c.im >= a.im.min(b.im) - 1e-14
            && c.im <= a.im.max(b.im) + 1e-14
    };
    on(a1, b1, a2) || on(a1, b1, b2) || on(a2, b2, a1) || on(a2, b2, b1)
}

/// Intersection of segment `[a, b]` with a ray, if any.
pub fn segment_crosses_ray(a: Complex64, b: Complex64, origin: Complex64, dir: Complex64) -> bool {
    // treat the ray as a long segment; curves in this crate stay at desk scale
    let far = origin + dir * 1e6;
    segments_intersect(a, b, origin, far)
}
