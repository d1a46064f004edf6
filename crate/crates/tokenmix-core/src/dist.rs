//! Hand-rolled samplers for the normal, gamma, and beta distributions.
//!
//! Beta(α, α) is built from two Gamma(α, 1) draws via the ratio
//! construction; Gamma uses the Marsaglia-Tsang rejection scheme with the
//! `u^(1/α)` boost for shape < 1.

use crate::rng::RngStream;

/// Standard normal via the Marsaglia polar method.
pub fn sample_standard_normal(rng: &mut RngStream) -> f64 {
    loop {
        let u = 2.0 * rng.next_f64() - 1.0;
        let v = 2.0 * rng.next_f64() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * libm::sqrt(-2.0 * libm::log(s) / s);
        }
    }
}

/// Gamma(shape, 1) for any positive shape.
pub fn sample_gamma(rng: &mut RngStream, shape: f64) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        // boost: Gamma(a) = Gamma(a + 1) * U^(1/a)
        let g = sample_gamma_large(rng, shape + 1.0);
        let u = rng.next_open01();
        return g * libm::pow(u, 1.0 / shape);
    }
    sample_gamma_large(rng, shape)
}

// Marsaglia & Tsang (2000), valid for shape >= 1.
fn sample_gamma_large(rng: &mut RngStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / libm::sqrt(9.0 * d);
    loop {
        let x = sample_standard_normal(rng);
        let v_cbrt = 1.0 + c * x;
        if v_cbrt <= 0.0 {
            continue;
        }
        let v = v_cbrt * v_cbrt * v_cbrt;
        let u = rng.next_open01();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || libm::log(u) < 0.5 * x2 + d * (1.0 - v + libm::log(v)) {
            return d * v;
        }
    }
}

/// Beta(alpha, alpha) in `[0, 1]` via the two-gamma ratio.
pub fn sample_beta_symmetric(rng: &mut RngStream, alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0);
    let x = sample_gamma(rng, alpha);
    let y = sample_gamma(rng, alpha);
    if x + y == 0.0 {
        // both gammas underflowed (tiny alpha); the ratio is a fair coin
        return if rng.next_u64() & 1 == 0 { 0.0 } else { 1.0 };
    }
    x / (x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Purpose;

    #[test]
    fn normal_moments() {
        let mut rng = RngStream::new(11, 0, Purpose::Lambda);
        let n = 20_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let x = sample_standard_normal(&mut rng);
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.03, "mean {}", mean);
        assert!((var - 1.0).abs() < 0.05, "var {}", var);
    }

    #[test]
    fn gamma_mean_matches_shape() {
        for &shape in &[0.2, 1.0, 2.0, 7.5] {
            let mut rng = RngStream::new(12, shape.to_bits(), Purpose::Lambda);
            let n = 20_000;
            let mut sum = 0.0;
            for _ in 0..n {
                let g = sample_gamma(&mut rng, shape);
                assert!(g >= 0.0 && g.is_finite());
                sum += g;
            }
            let mean = sum / n as f64;
            // E[Gamma(a,1)] = a, sd of the estimate = sqrt(a/n)
            let tol = 4.0 * libm::sqrt(shape / n as f64);
            assert!((mean - shape).abs() < tol, "shape {}: mean {}", shape, mean);
        }
    }

    #[test]
    fn beta_in_unit_interval_and_symmetric() {
        let mut rng = RngStream::new(13, 0, Purpose::Lambda);
        let n = 20_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let b = sample_beta_symmetric(&mut rng, 0.5);
            assert!((0.0..=1.0).contains(&b));
            sum += b;
        }
        let mean = sum / n as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {}", mean);
    }
}
