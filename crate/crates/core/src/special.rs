//! Gaussian special functions used by the interval code and the theory lab.

use statrs::function::erf as sf;

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Inverse standard normal CDF for `p` in (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * sf::erfc_inv(2.0 * p)
}

/// Two-sided critical value z* with P(|N(0,1)| <= z*) = q, for q in (0, 1).
pub fn z_critical(q: f64) -> f64 {
    normal_quantile(0.5 + 0.5 * q)
}
