use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Quadrature settings for [`oscillatory_integral`].
#[derive(Debug, Clone)]
pub struct Quadrature {
    /// Relative to `∫|integrand|`.
    pub rel_tol: f64,
    pub max_levels: usize,
    /// Integrand values below `cutoff · max` are treated as zero when sizing the box.
    pub cutoff: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { rel_tol: 1e-10, max_levels: 9, cutoff: 1e-20 }
    }
}

/// `∫_{ℝ_{>0}^n} e^{-W(t)/z} φ(t) Π dt_i/t_i` for real positive `q = e^ℓ`, `z > 0`, `n ≤ 2`.
pub fn oscillatory_integral(w: &LaurentPoly, phi: Option<&LaurentPoly>, ell: &[f64], z: f64, quad: &Quadrature) -> Result<f64> {
    let n = w.n;
    if n == 0 || n > 2 {
        return Err(Error::Unsupported(format!("quadrature in dimension {n}")));
    }
    if z <= 0.0 {
        return Err(Error::Domain("z must be positive".into()));
    }
    let f = |u: &[f64]| {
        let p = phi.map_or(1.0, |p| p.eval_log_real(u, ell));
        (-w.eval_log_real(u, ell) / z).exp() * p
    };
    let (lo, hi) = integration_box(n, &f, quad.cutoff)?;
    let mut h = 0.5;
    let scale = trapezoid(n, &|u: &[f64]| f(u).abs(), &lo, &hi, h);
    let mut prev = trapezoid(n, &f, &lo, &hi, h);
    for _ in 0..quad.max_levels {
        h /= 2.0;
        let cur = trapezoid(n, &f, &lo, &hi, h);
        if (cur - prev).abs() <= quad.rel_tol * scale.max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Numeric(format!("quadrature did not converge (last two estimates {prev:e})")))
}

fn grid(lo: f64, hi: f64, h: f64) -> impl Iterator<Item = f64> {
    let k = ((hi - lo) / h).round() as usize;
    (0..=k).map(move |i| lo + i as f64 * h)
}

fn trapezoid(n: usize, f: &impl Fn(&[f64]) -> f64, lo: &[f64], hi: &[f64], h: f64) -> f64 {
    // the integrand is negligible on the boundary, so the plain sum is the trapezoid rule
    if n == 1 {
        grid(lo[0], hi[0], h).map(|x| f(&[x])).sum::<f64>() * h
    } else {
        grid(lo[0], hi[0], h)
            .map(|x| grid(lo[1], hi[1], h).map(|y| f(&[x, y])).sum::<f64>())
            .sum::<f64>()
            * h
            * h
    }
}

/// Grows `[lo, hi]^n` until the integrand is below `cutoff · max` on every face.
fn integration_box(n: usize, f: &impl Fn(&[f64]) -> f64, cutoff: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut lo = vec![-2.0; n];
    let mut hi = vec![2.0; n];
    let step = 0.25;
    for _ in 0..200 {
        let mut peak: f64 = 0.0;
        let mut face = vec![[0.0f64; 2]; n];
        let pts: Vec<Vec<f64>> = if n == 1 {
            grid(lo[0], hi[0], step).map(|x| vec![x]).collect()
        } else {
            grid(lo[0], hi[0], step).flat_map(|x| grid(lo[1], hi[1], step).map(move |y| vec![x, y])).collect()
        };
        for p in &pts {
            let v = f(p).abs();
            if !v.is_finite() {
                return Err(Error::Numeric(format!("integrand not finite at {p:?}")));
            }
            peak = peak.max(v);
            for k in 0..n {
                if p[k] == lo[k] {
                    face[k][0] = face[k][0].max(v);
                }
                if p[k] == hi[k] {
                    face[k][1] = face[k][1].max(v);
                }
            }
        }
        let mut grew = false;
        for k in 0..n {
            if face[k][0] > cutoff * peak {
                lo[k] -= 1.0;
                grew = true;
            }
            if face[k][1] > cutoff * peak {
                hi[k] += 1.0;
                grew = true;
            }
        }
        if !grew {
            return Ok((lo, hi));
        }
    }
    Err(Error::Numeric("integrand does not decay (is 0 interior to the Newton polytope?)".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p1_w() -> LaurentPoly {
        LaurentPoly::monomial(vec![1], q(1), vec![q(0)]).add(&LaurentPoly::monomial(vec![-1], q(1), vec![q(1)]))
    }

    #[test]
    fn bessel_k0() {
        // 2 K_0(0.4) from the series Σ x^d/(d!)^2 (2H_d - log x - 2γ), x = 0.04
        let x: f64 = 0.04;
        let (mut s, mut fact, mut h) = (0.0, 1.0, 0.0);
        for d in 0..20 {
            if d > 0 {
                fact *= d as f64;
                h += 1.0 / d as f64;
            }
            s += x.powi(d) / (fact * fact) * (2.0 * h - x.ln() - 2.0 * crate::gamma::EULER_GAMMA);
        }
        let v = oscillatory_integral(&p1_w(), None, &[x.ln()], 1.0, &Quadrature::default()).unwrap();
        assert!((v - s).abs() < 1e-9 * s, "{v} vs {s}");
        assert!((v - 2.2291).abs() < 1e-3);
    }

    #[test]
    fn inversion_symmetry() {
        // W = t + q/t is symmetric under t -> q/t, so ∫ (t - q/t) e^{-W} dt/t = 0
        let ell = [0.3f64.ln()];
        let phi = LaurentPoly::monomial(vec![1], q(1), vec![q(0)]).add(&LaurentPoly::monomial(vec![-1], q(-1), vec![q(1)]));
        let v = oscillatory_integral(&p1_w(), Some(&phi), &ell, 1.0, &Quadrature::default()).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn rejects_high_dimension() {
        let w = LaurentPoly::monomial(vec![1, 0, 0], q(1), vec![q(0)]);
        assert!(oscillatory_integral(&w, None, &[0.0], 1.0, &Quadrature::default()).is_err());
    }
}
