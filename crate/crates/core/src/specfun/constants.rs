use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// `B_2, B_4, …, B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `η(iy) = e^{−πy/12} Π_{n≥1} (1 − e^{−2πny})` for `y > 0`.
///
/// The product is summed as `Σ log(1 − qⁿ)` until `qⁿ < 1e−17`. For `y < 0.1`
/// the modular relation `η(iy) = η(i/y)/√y` is applied first, since the
/// product converges slowly there.
pub fn dedekind_eta(y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidArgument(format!("eta needs y > 0, got {y}")));
    }
    if y < 0.1 {
        return Ok(eta_product(1.0 / y) / y.sqrt());
    }
    Ok(eta_product(y))
}

fn eta_product(y: f64) -> f64 {
    let q = (-2.0 * PI * y).exp();
    let mut log = CompensatedSum::new();
    log.add(-PI * y / 12.0);
    let mut qn = q;
    while qn >= 1e-17 {
        log.add((-qn).ln_1p());
        qn *= q;
    }
    log.value().exp()
}

/// `ζ(s)` for real `s > 1` by Euler–Maclaurin summation with ten Bernoulli
/// corrections after twenty terms.
pub fn riemann_zeta_real(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("zeta needs real s > 1, got {s}")));
    }
    const N: u32 = 20;
    let n = N as f64;
    let mut sum = CompensatedSum::new();
    for k in 1..N {
        sum.add((k as f64).powf(-s));
    }
    sum.add(n.powf(1.0 - s) / (s - 1.0));
    sum.add(0.5 * n.powf(-s));
    // B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        sum.add(b / factorial * rising * power);
        let j = j as f64 + 1.0;
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        power /= n * n;
    }
    Ok(sum.value())
}

/// Catalan's constant `G = Σ_{k≥0} (−1)^k/(2k+1)²`.
///
/// Alternating-series acceleration of Cohen, Rodriguez Villegas and Zagier
/// with 30 terms; the error is below `5.8^{−30}` relative.
pub fn catalan_constant() -> f64 {
    let n = 30usize;
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0f64;
    let mut c = -d;
    let mut s = 0.0f64;
    for k in 0..n {
        c = b - c;
        let a = 1.0 / ((2 * k + 1) as f64).powi(2);
        s += c * a;
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA_QUARTER: f64 = 3.625_609_908_221_908;

    #[test]
    fn eta_at_i() {
        let expected = GAMMA_QUARTER / (2.0 * PI.powf(0.75));
        assert!((dedekind_eta(1.0).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.768_225_4).abs() < 1e-7);
    }

    #[test]
    fn eta_modular_and_limits() {
        let lhs = dedekind_eta(0.5).unwrap();
        let rhs = dedekind_eta(2.0).unwrap() * 2f64.sqrt();
        assert!((lhs - rhs).abs() < 1e-12);
        let y = 12.0;
        assert!((dedekind_eta(y).unwrap() / (-PI * y / 12.0).exp() - 1.0).abs() < 1e-15);
        // both sides of the modular switch
        let a = dedekind_eta(0.099).unwrap();
        let b = eta_product(0.099);
        assert!((a - b).abs() < 1e-13 * a);
        assert!(dedekind_eta(0.0).is_err());
    }

    #[test]
    fn zeta_values() {
        assert!((riemann_zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta_real(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        // direct sum with an integral tail bound as the oracle for ζ(3)
        let direct: f64 = (1..200_000u64).rev().map(|k| (k as f64).powi(-3)).sum::<f64>()
            + 0.5 / 200_000f64.powi(2);
        assert!((riemann_zeta_real(3.0).unwrap() - direct).abs() < 1e-13);
        assert!((riemann_zeta_real(3.0).unwrap() - 1.202_056_9).abs() < 1e-7);
        assert!(riemann_zeta_real(1.0).is_err());
        assert!((riemann_zeta_real(1.1).unwrap() - 10.584_448_464_950_81).abs() < 1e-11);
    }

    #[test]
    fn catalan() {
        let g = catalan_constant();
        assert!((g - 0.915_965_594_2).abs() < 1e-10);
        assert!((4.0 * g / PI - 1.166_243_6).abs() < 1e-7);
        // coarse bracket from consecutive partial sums
        let partial = |n: usize| -> f64 {
            (0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / ((2 * k + 1) as f64).powi(2)).sum()
        };
        let (lo, hi) = (partial(4), partial(3));
        assert!(lo < g && g < hi);
        assert!(g > 0.9 && g < 0.92);
    }
}
