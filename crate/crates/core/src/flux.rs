//! Scalar flux functions `f` with derivative `f'`.

use crate::error::{Error, Result};
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq)]
pub enum FluxKind {
    /// `f(u) = u²/2`.
    Burgers,
    /// `f(u) = u³/3`.
    Cubic,
    /// User-supplied pair of expressions in the variable `x`, standing for `u`.
    Expression { f: Expr, fprime: Expr },
}

/// A flux with its derivative and the Lipschitz constant of the derivative on the data range.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSpec {
    kind: FluxKind,
    lipschitz_m: f64,
    range: f64,
}

const SPOT_CHECK_POINTS: usize = 5;

impl FluxSpec {
    pub fn burgers() -> Self {
        FluxSpec {
            kind: FluxKind::Burgers,
            lipschitz_m: 1.0,
            range: f64::INFINITY,
        }
    }

    /// Cubic flux; `range` is the data sup-norm R used for the constant `M = 2R`.
    pub fn cubic(range: f64) -> Self {
        FluxSpec {
            kind: FluxKind::Cubic,
            lipschitz_m: 2.0 * range.abs(),
            range: range.abs(),
        }
    }

    /// Expression flux, validated on `[-range, range]`: the derivative is spot-checked against
    /// central differences of `f` and `M` is estimated from differences of `f'`.
    pub fn from_expressions(f: Expr, fprime: Expr, range: f64) -> Result<Self> {
        let r = range.abs().max(1e-6);
        for k in 0..SPOT_CHECK_POINTS {
            let u = -r + 2.0 * r * (k as f64 + 0.5) / SPOT_CHECK_POINTS as f64;
            let h = 1e-5 * (1.0 + u.abs());
            let fd = (f.eval(u + h) - f.eval(u - h)) / (2.0 * h);
            let d = fprime.eval(u);
            if !(fd.is_finite() && d.is_finite()) || (fd - d).abs() > 1e-6 * (1.0 + d.abs()) {
                return Err(Error::InvalidArgument(format!(
                    "fprime does not match the derivative of f at u = {u} ({d} vs {fd})"
                )));
            }
        }
        let samples = 2000;
        let h = 2.0 * r / samples as f64;
        let mut m: f64 = 0.0;
        let mut prev = fprime.eval(-r);
        for k in 1..=samples {
            let v = fprime.eval(-r + k as f64 * h);
            m = m.max((v - prev).abs() / h);
            prev = v;
        }
        Ok(FluxSpec {
            kind: FluxKind::Expression { f, fprime },
            lipschitz_m: m * (1.0 + 1e-3),
            range: r,
        })
    }

    pub fn kind(&self) -> &FluxKind {
        &self.kind
    }

    pub fn lipschitz_m(&self) -> f64 {
        self.lipschitz_m
    }

    pub fn is_burgers(&self) -> bool {
        self.kind == FluxKind::Burgers
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FluxKind::Burgers => "burgers".into(),
            FluxKind::Cubic => "cubic".into(),
            FluxKind::Expression { f, .. } => format!("f(u) = {f}"),
        }
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => 0.5 * u * u,
            FluxKind::Cubic => u * u * u / 3.0,
            FluxKind::Expression { f, .. } => f.eval(u),
        }
    }

    #[inline]
    pub fn fprime(&self, u: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers => u,
            FluxKind::Cubic => u * u,
            FluxKind::Expression { fprime, .. } => fprime.eval(u),
        }
    }

    /// Largest |f'| over `[lo, hi]`, sampled (exact for monotone or convex `f'`).
    pub fn max_speed(&self, lo: f64, hi: f64) -> f64 {
        let samples = 256;
        let mut m = self.fprime(lo).abs().max(self.fprime(hi).abs());
        for k in 1..samples {
            let u = lo + (hi - lo) * k as f64 / samples as f64;
            m = m.max(self.fprime(u).abs());
        }
        m
    }

    /// Whether `f'` is non-decreasing on `[lo, hi]` (checked on a fine sample).
    pub fn is_convex_on(&self, lo: f64, hi: f64) -> bool {
        let samples = 1000;
        let mut prev = self.fprime(lo);
        for k in 1..=samples {
            let v = self.fprime(lo + (hi - lo) * k as f64 / samples as f64);
            if v < prev - 1e-12 * (1.0 + prev.abs()) {
                return false;
            }
            prev = v;
        }
        true
    }

    /// Point of `[lo, hi]` minimising a convex `f`.
    pub fn argmin_on(&self, lo: f64, hi: f64) -> f64 {
        match &self.kind {
            FluxKind::Burgers | FluxKind::Cubic => 0.0f64.clamp(lo, hi),
            FluxKind::Expression { .. } => {
                if self.fprime(lo) >= 0.0 {
                    return lo;
                }
                if self.fprime(hi) <= 0.0 {
                    return hi;
                }
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if self.fprime(m) < 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                0.5 * (a + b)
            }
        }
    }

    /// Rankine–Hugoniot speed of a jump from `a` to `b` (characteristic speed if equal).
    pub fn rh_speed(&self, a: f64, b: f64) -> f64 {
        if a == b {
            self.fprime(a)
        } else {
            (self.f(a) - self.f(b)) / (a - b)
        }
    }

    pub fn range(&self) -> f64 {
        self.range
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_flux_validated() {
        let f = Expr::parse("x^3/3").unwrap();
        let fp = Expr::parse("x^2").unwrap();
        let flux = FluxSpec::from_expressions(f.clone(), fp, 2.0).unwrap();
        assert!((flux.lipschitz_m() - 4.0).abs() < 0.05);
        assert!(FluxSpec::from_expressions(f, Expr::parse("2*x").unwrap(), 2.0).is_err());
    }

    #[test]
    fn convexity() {
        assert!(FluxSpec::burgers().is_convex_on(-3.0, 3.0));
        assert!(FluxSpec::cubic(2.0).is_convex_on(0.0, 2.0));
        assert!(!FluxSpec::cubic(2.0).is_convex_on(-1.0, 1.0));
    }

    #[test]
    fn speeds() {
        let c = FluxSpec::cubic(2.0);
        assert!((c.rh_speed(2.0, 0.0) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.max_speed(0.0, 2.0), 4.0);
        assert_eq!(FluxSpec::burgers().rh_speed(1.0, 0.0), 0.5);
    }
}
