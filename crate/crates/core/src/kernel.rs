//! The mollifier family and discrete convolution against grid functions.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::funcspace::GridFunction1D;

/// Unnormalised bump `exp(-1/(1-x^2))` on (-1, 1), zero elsewhere.
pub fn raw_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Integrates `f` over `[a, b]` by adaptive Simpson quadrature to the given relative tolerance.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    // A coarse first pass fixes the absolute scale of the tolerance.
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    let rough = adaptive_simpson(f, a, fa, b, fb, m, fm, whole, 1e-4 * whole.abs().max(1e-300), 40);
    let tol = rel_tol * rough.abs().max(1e-300);
    adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, 60)
}

/// Continuum normalisation constant of the bump, `∫ exp(-1/(1-x^2)) dx` over (-1, 1).
pub fn mollifier_normalization() -> f64 {
    static I: OnceLock<f64> = OnceLock::new();
    *I.get_or_init(|| integrate(&raw_bump, -1.0, 1.0, 1e-10))
}

/// Normalised default bump η with unit mass on (-1, 1).
pub fn standard_bump(x: f64) -> f64 {
    raw_bump(x) / mollifier_normalization()
}

/// A discrete symmetric kernel of half-width `epsilon` with unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Mollifier {
    epsilon: f64,
    dx: f64,
    /// Weights for offsets 0..=r; the kernel is the mirror image of this half.
    half: Vec<f64>,
    normalization_i: f64,
}

impl Mollifier {
    /// Builds the default bump kernel `η_ε(x) = ε⁻¹ η(x/ε)` sampled on spacing `dx`.
    pub fn build(epsilon: f64, dx: f64) -> Result<Self> {
        Self::with_profile(epsilon, dx, &raw_bump, mollifier_normalization())
    }

    /// Builds a kernel from an arbitrary nonnegative profile supported in [-1, 1].
    ///
    /// The profile is only sampled on `0 ≤ s ≤ 1`; the negative side is the mirror image.
    pub fn with_profile(
        epsilon: f64,
        dx: f64,
        profile: &dyn Fn(f64) -> f64,
        normalization_i: f64,
    ) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0 && dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon and dx must be positive and finite (got {epsilon}, {dx})"
            )));
        }
        if epsilon < dx * (1.0 - 1e-12) {
            return Err(Error::Resolution { epsilon, dx });
        }
        // Guard against ratios such as 0.1/0.01 = 10.000000000000002.
        let r = (epsilon / dx - 1e-9).ceil().max(1.0) as usize;
        let mut half: Vec<f64> = (0..=r)
            .map(|k| {
                let s = k as f64 * dx / epsilon;
                if s >= 1.0 {
                    0.0
                } else {
                    profile(s).max(0.0)
                }
            })
            .collect();
        let total = half[0] + 2.0 * half[1..].iter().sum::<f64>();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidArgument("kernel profile has no mass".into()));
        }
        for w in &mut half {
            *w /= total;
        }
        // Put any rounding residue into the centre weight so the sum is 1 to the last bit
        // that the summation order below can represent.
        let tail: f64 = half[1..].iter().sum::<f64>();
        half[0] = 1.0 - 2.0 * tail;
        Ok(Mollifier {
            epsilon,
            dx,
            half,
            normalization_i,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Kernel radius in grid cells.
    pub fn radius(&self) -> usize {
        self.half.len() - 1
    }

    pub fn normalization_i(&self) -> f64 {
        self.normalization_i
    }

    /// Weight at integer offset `k` (zero outside the support).
    pub fn weight(&self, k: isize) -> f64 {
        self.half.get(k.unsigned_abs()).copied().unwrap_or(0.0)
    }

    /// Weights for offsets `-r..=r`.
    pub fn weights(&self) -> Vec<f64> {
        let r = self.radius() as isize;
        (-r..=r).map(|k| self.weight(k)).collect()
    }

    /// Weights for offsets `0..=r`.
    pub fn half_weights(&self) -> &[f64] {
        &self.half
    }

    /// Discrete sup norm of η_ε: largest weight divided by dx.
    pub fn sup_density(&self) -> f64 {
        self.half.iter().cloned().fold(0.0, f64::max) / self.dx
    }

    pub fn convolve(&self, u: &GridFunction1D) -> Result<GridFunction1D> {
        if (u.dx() - self.dx).abs() > 1e-12 * self.dx {
            return Err(Error::GridMismatch(format!(
                "mollifier built for dx = {} applied to grid with dx = {}",
                self.dx,
                u.dx()
            )));
        }
        let mut out = vec![0.0; u.len()];
        let mut scratch = Vec::new();
        self.convolve_slice(u.values(), &mut out, &mut scratch);
        GridFunction1D::new(u.x0(), u.dx(), out)
    }

    /// Convolves `values` with constant extension at both ends, writing into `out`.
    ///
    /// The sum is evaluated in deviation form, `u_i + Σ w_k ((u_{i-k} - u_i) + (u_{i+k} - u_i))`,
    /// which reproduces constants exactly and keeps identical rows identical in 2D.
    pub fn convolve_slice(&self, values: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) {
        let n = values.len();
        let r = self.radius();
        assert_eq!(out.len(), n);
        scratch.clear();
        scratch.reserve(n + 2 * r);
        scratch.extend(std::iter::repeat(values[0]).take(r));
        scratch.extend_from_slice(values);
        scratch.extend(std::iter::repeat(values[n - 1]).take(r));
        out.fill(0.0);
        for k in 1..=r {
            let w = self.half[k];
            if w == 0.0 {
                continue;
            }
            let left = &scratch[r - k..r - k + n];
            let right = &scratch[r + k..r + k + n];
            for (((o, &l), &rv), &c) in out.iter_mut().zip(left).zip(right).zip(values) {
                *o += w * ((l - c) + (rv - c));
            }
        }
        for (o, &c) in out.iter_mut().zip(values) {
            *o += c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_constant() {
        let i = mollifier_normalization();
        assert!((i - 0.443_993_816_168_079_4).abs() < 1e-8, "{i}");
        assert!((standard_bump(0.0) * i - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(standard_bump(1.0), 0.0);
        assert_eq!(standard_bump(-1.0), 0.0);
    }

    #[test]
    fn weights_shape() {
        let m = Mollifier::build(0.1, 0.01).unwrap();
        let w = m.weights();
        assert_eq!(w.len(), 21);
        let s: f64 = w.iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
        for k in 0..21 {
            assert_eq!(w[k], w[20 - k]);
            assert!(w[k] >= 0.0);
        }
        assert_eq!(w[0], 0.0);
    }

    #[test]
    fn under_resolved_rejected() {
        assert!(matches!(Mollifier::build(0.05, 0.1), Err(Error::Resolution { .. })));
    }

    #[test]
    fn convolution_examples() {
        let m = Mollifier::build(0.1, 0.01).unwrap();
        let c = GridFunction1D::new(-1.0, 0.01, vec![0.7; 201]).unwrap();
        assert!(m.convolve(&c).unwrap().values().iter().all(|&v| v == 0.7));

        let step = GridFunction1D::from_fn(-1.0, 0.01, 201, |x| if x < -1e-12 { 0.0 } else { 1.0 }).unwrap();
        let v = m.convolve(&step).unwrap();
        assert!((v.values()[100] - 0.5).abs() <= m.weight(0));

        let lin = GridFunction1D::from_fn(-1.0, 0.01, 201, |x| x).unwrap();
        let v = m.convolve(&lin).unwrap();
        for i in 10..191 {
            assert!((v.values()[i] - lin.values()[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn spacing_mismatch() {
        let m = Mollifier::build(0.1, 0.01).unwrap();
        let u = GridFunction1D::new(0.0, 0.02, vec![1.0; 10]).unwrap();
        assert!(matches!(m.convolve(&u), Err(Error::GridMismatch(_))));
    }
}
