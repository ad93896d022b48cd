//! Multiprecision counterparts of the f64 routines, for quantities whose
//! interesting part lies far below double precision: residuals that decay
//! like `e^{−cn}` and closed forms that must round to an exact integer.

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::graphs::{generator_c, validate_generators};

/// Working precision for quantities indexed by `n`: 192 guard bits plus four
/// bits per unit of `n`, enough for residuals of size `e^{−2n}`.
pub fn default_bits(n: u64) -> u32 {
    192 + 4 * n.min(1 << 20) as u32
}

fn float(bits: u32, x: impl Into<f64>) -> Float {
    Float::with_val(bits, x.into())
}

fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// `4 sin²(π p/q)`, the Laplacian eigenvalue of a cycle of length `q` at
/// frequency `p`.
fn cycle_eigenvalue(p: u64, q: u64, bits: u32) -> Float {
    let p = p % q;
    let angle = pi(bits) * Float::with_val(bits, p) / Float::with_val(bits, q);
    let s = angle.sin();
    Float::with_val(bits, &s * &s) * 4u32
}

/// `log det* Δ` of `C_n^Γ` at `bits` of precision.
pub fn log_det_star_circulant(n: u64, generators: &[u64], bits: u32) -> Result<Float> {
    validate_generators(generators)?;
    if n < 2 {
        return Err(Error::InvalidArgument("need n ≥ 2".into()));
    }
    let mut sum = Float::with_val(bits, 0);
    for k in 1..n {
        let mut lambda = Float::with_val(bits, 0);
        for &g in generators {
            lambda += cycle_eigenvalue((g % n) * k % n, n, bits);
        }
        if lambda.is_zero() {
            return Err(Error::Disconnected);
        }
        sum += lambda.ln();
    }
    Ok(sum)
}

/// `log det* Δ` of `ℤ/m_1 × … × ℤ/m_r` at `bits` of precision, visiting at
/// most `cap` vertices.
pub fn log_det_star_torus(sides: &[u64], cap: u128, bits: u32) -> Result<Float> {
    if sides.is_empty() || sides.contains(&0) {
        return Err(Error::InvalidSpec("torus sides must be positive".into()));
    }
    let size: u128 = sides.iter().map(|&m| m as u128).product();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let per_side: Vec<Vec<Float>> = sides
        .iter()
        .map(|&m| (0..m).map(|k| cycle_eigenvalue(k, m, bits)).collect())
        .collect();
    let mut index = vec![0usize; sides.len()];
    let mut sum = Float::with_val(bits, 0);
    let mut zeros = 0usize;
    loop {
        let mut lambda = Float::with_val(bits, 0);
        for (i, &k) in index.iter().enumerate() {
            lambda += &per_side[i][k];
        }
        if lambda.is_zero() {
            zeros += 1;
        } else {
            sum += lambda.ln();
        }
        let mut i = sides.len();
        loop {
            if i == 0 {
                return if zeros == 1 { Ok(sum) } else { Err(Error::Disconnected) };
            }
            i -= 1;
            index[i] += 1;
            if index[i] < per_side[i].len() {
                break;
            }
            index[i] = 0;
        }
    }
}

/// `arccosh(x/2)` for `x ≥ 2` given as an exact rational `num/den`.
pub fn arccosh_lead(num: i64, den: i64, bits: u32) -> Result<Float> {
    if den <= 0 || num < 2 * den {
        return Err(Error::InvalidArgument(format!("arccosh lead needs x ≥ 2, got {num}/{den}")));
    }
    let half = Float::with_val(bits, num) / Float::with_val(bits, 2 * den);
    let y = Float::with_val(bits, &half - 1u32);
    let root = Float::with_val(bits, &y * Float::with_val(bits, &y + 2u32)).sqrt();
    Ok(Float::with_val(bits, &y + &root).ln_1p())
}

/// `arccosh(x/2)` for a multiprecision `x ≥ 2`.
pub fn arccosh_lead_float(x: &Float) -> Result<Float> {
    let bits = x.prec();
    if *x < 2u32 {
        return Err(Error::InvalidArgument(format!("arccosh lead needs x ≥ 2, got {}", x.to_f64())));
    }
    let y = Float::with_val(bits, x / 2u32) - 1u32;
    let root = Float::with_val(bits, &y * Float::with_val(bits, &y + 2u32)).sqrt();
    Ok(Float::with_val(bits, &y + &root).ln_1p())
}

/// `z^g (2d − Σ_γ (z^γ + z^{−γ}))` divided by `(z − 1)²`, as integer
/// coefficients from the constant term up.
fn deflated_symbol(generators: &[u64]) -> Vec<i128> {
    let g = *generators.iter().max().expect("validated") as usize;
    let mut q = vec![0i128; 2 * g + 1];
    q[g] = 2 * generators.len() as i128;
    for &gamma in generators {
        q[g + gamma as usize] -= 1;
        q[g - gamma as usize] -= 1;
    }
    // two synthetic divisions by (z − 1), from the top coefficient down
    for _ in 0..2 {
        let deg = q.len() - 1;
        let mut out = vec![0i128; deg];
        let mut carry = 0i128;
        for i in (1..=deg).rev() {
            carry += q[i];
            out[i - 1] = carry;
        }
        debug_assert_eq!(carry + q[0], 0, "z = 1 must be a root");
        q = out;
    }
    q
}

/// Simultaneous (Aberth–Ehrlich) root iteration in double precision.
fn aberth_roots(coeffs: &[i128]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect();
    let lead = coeffs[deg] as f64;
    let radius = 1.0 + coeffs[..deg].iter().map(|&x| (x as f64 / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    Err(Error::Precision("Aberth iteration did not converge".into()))
}

#[derive(Clone)]
struct Cx {
    re: Float,
    im: Float,
}

impl Cx {
    fn new(bits: u32, z: Complex64) -> Self {
        Self {
            re: float(bits, z.re),
            im: float(bits, z.im),
        }
    }

    fn zero(bits: u32) -> Self {
        Self {
            re: Float::new(bits),
            im: Float::new(bits),
        }
    }

    fn mul(&self, o: &Cx) -> Cx {
        let bits = self.re.prec();
        Cx {
            re: Float::with_val(bits, &self.re * &o.re) - Float::with_val(bits, &self.im * &o.im),
            im: Float::with_val(bits, &self.re * &o.im) + Float::with_val(bits, &self.im * &o.re),
        }
    }

    fn add(&self, o: &Cx) -> Cx {
        let bits = self.re.prec();
        Cx {
            re: Float::with_val(bits, &self.re + &o.re),
            im: Float::with_val(bits, &self.im + &o.im),
        }
    }

    fn div(&self, o: &Cx) -> Cx {
        let bits = self.re.prec();
        let norm = Float::with_val(bits, o.re.square_ref()) + Float::with_val(bits, o.im.square_ref());
        let conj = Cx {
            re: o.re.clone(),
            im: Float::with_val(bits, -&o.im),
        };
        let num = self.mul(&conj);
        Cx {
            re: num.re / &norm,
            im: num.im / &norm,
        }
    }

    fn abs(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }
}

/// Newton polish of a double-precision root to `bits` bits.
fn polish(coeffs: &[i128], start: Complex64, bits: u32) -> Result<Cx> {
    let mut z = Cx::new(bits, start);
    let threshold = Float::with_val(bits, 1u32) >> (bits - 16);
    let mut converged_steps = 0;
    for _ in 0..(20 + bits.ilog2() * 4) {
        let mut p = Cx::zero(bits);
        let mut dp = Cx::zero(bits);
        for &a in coeffs.iter().rev() {
            dp = dp.mul(&z).add(&p);
            p = p.mul(&z);
            p.re += Float::with_val(bits, a);
        }
        if p.re.is_zero() && p.im.is_zero() {
            return Ok(z);
        }
        let step = p.div(&dp);
        let size = step.abs();
        z = Cx {
            re: Float::with_val(bits, &z.re - &step.re),
            im: Float::with_val(bits, &z.im - &step.im),
        };
        if size <= Float::with_val(bits, &threshold * z.abs().max(&Float::with_val(bits, 1u32))) {
            converged_steps += 1;
            // one more step after reaching the threshold doubles the digits
            if converged_steps == 2 {
                return Ok(z);
            }
        }
    }
    Err(Error::Precision(format!("Newton polish did not reach {bits} bits")))
}

/// The circulant lead term `𝓘_d^Γ` to `bits` bits via Jensen's formula:
/// `𝓘 = log|lead| + Σ_{|r|>1} log|r|` over the roots of the symbol polynomial
/// with its double root at 1 removed. Exact integer coefficients make the
/// polished roots accurate to working precision.
pub fn lead_term_circulant(generators: &[u64], bits: u32) -> Result<Float> {
    validate_generators(generators)?;
    let coeffs = deflated_symbol(generators);
    let lead = *coeffs.last().expect("nonempty");
    let mut total = Float::with_val(bits, lead.unsigned_abs()).ln();
    if coeffs.len() == 1 {
        return Ok(total);
    }
    let roots = aberth_roots(&coeffs)?;
    let mut outside = 0usize;
    for r in roots {
        let z = polish(&coeffs, r, bits)?;
        let modulus = z.abs();
        // the symbol is positive on the unit circle away from 1
        if (modulus.to_f64() - 1.0).abs() < 1e-9 {
            return Err(Error::DegenerateSpectrum(format!(
                "symbol of {generators:?} has a root on the unit circle"
            )));
        }
        if modulus > 1u32 {
            outside += 1;
            total += modulus.ln();
        }
    }
    if 2 * outside != coeffs.len() - 1 {
        return Err(Error::Precision(format!(
            "root count outside the unit circle is {outside}, expected {}",
            (coeffs.len() - 1) / 2
        )));
    }
    Ok(total)
}

/// Exact and predicted `log det*` at the same precision.
#[derive(Debug, Clone)]
pub struct PreciseComparison {
    pub exact: Float,
    pub predicted: Float,
}

impl PreciseComparison {
    pub fn residual(&self) -> Float {
        Float::with_val(self.exact.prec(), &self.exact - &self.predicted)
    }
}

/// `log det* Δ(C_n^Γ)` against `n𝓘 + 2 log n − log c_Γ`, at `bits` of precision.
pub fn circulant_comparison(n: u64, generators: &[u64], bits: u32) -> Result<PreciseComparison> {
    let lead = lead_term_circulant(generators, bits)?;
    circulant_comparison_with_lead(n, generators, &lead)
}

/// As [`circulant_comparison`] with the lead term supplied; its precision
/// sets the working precision.
pub fn circulant_comparison_with_lead(n: u64, generators: &[u64], lead: &Float) -> Result<PreciseComparison> {
    let bits = lead.prec();
    let exact = log_det_star_circulant(n, generators, bits)?;
    let nf = Float::with_val(bits, n);
    let c = Float::with_val(bits, generator_c(generators));
    let predicted = Float::with_val(bits, lead * &nf) + nf.ln() * 2u32 - c.ln();
    Ok(PreciseComparison { exact, predicted })
}

/// `log det* − n𝓘 − 2 log n + log c_Γ` for `C_n^Γ` at `bits` of precision.
pub fn circulant_residual(n: u64, generators: &[u64], bits: u32) -> Result<Float> {
    Ok(circulant_comparison(n, generators, bits)?.residual())
}

/// `log det* Δ` of `ℤ^p/A × ℤ/(nβ)` against
/// `nβ Σ_j arccosh(1 + λ_j/2) + 2 log n + 2 log β`, the one-dimensional
/// B-block case, at `bits` of precision.
pub fn torus_constant_comparison(
    n: u64,
    alpha: &[u64],
    beta: u64,
    cap: u128,
    bits: u32,
) -> Result<PreciseComparison> {
    if n == 0 || beta == 0 || alpha.contains(&0) {
        return Err(Error::InvalidSpec("torus sides must be positive".into()));
    }
    let mut sides = alpha.to_vec();
    sides.push(n * beta);
    let exact = log_det_star_torus(&sides, cap, bits)?;
    let per_side: Vec<Vec<Float>> = alpha
        .iter()
        .map(|&m| (0..m).map(|k| cycle_eigenvalue(k, m, bits)).collect())
        .collect();
    let mut lead = Float::with_val(bits, 0);
    let mut index = vec![0usize; alpha.len()];
    'outer: loop {
        let mut x = Float::with_val(bits, 2u32);
        for (i, &k) in index.iter().enumerate() {
            x += &per_side[i][k];
        }
        lead += arccosh_lead_float(&x)?;
        let mut i = alpha.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            index[i] += 1;
            if index[i] < per_side[i].len() {
                break;
            }
            index[i] = 0;
        }
    }
    let nf = Float::with_val(bits, n);
    let bf = Float::with_val(bits, beta);
    let scale = Float::with_val(bits, &nf * &bf);
    let predicted = lead * scale + nf.ln() * 2u32 + bf.ln() * 2u32;
    Ok(PreciseComparison { exact, predicted })
}

/// Residual of [`torus_constant_comparison`].
pub fn torus_constant_residual(n: u64, alpha: &[u64], beta: u64, bits: u32) -> Result<Float> {
    Ok(torus_constant_comparison(n, alpha, beta, u128::MAX, bits)?.residual())
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{circulant_spectrum, log_det_star, torus_log_det_star, CirculantSpec, TorusSpec};

    #[test]
    fn symbol_deflation() {
        assert_eq!(deflated_symbol(&[1]), vec![-1]);
        // −(z² + 3z + 1)
        assert_eq!(deflated_symbol(&[1, 2]), vec![-1, -3, -1]);
    }

    #[test]
    fn golden_lead_to_high_precision() {
        let bits = 400;
        let l = lead_term_circulant(&[1, 2], bits).unwrap();
        let phi = (Float::with_val(bits, 5u32).sqrt() + 1u32) / 2u32;
        let diff = Float::with_val(bits, &l - phi.ln() * 2u32);
        assert!(diff.abs() < Float::with_val(bits, 1u32) >> 380);
        assert_eq!(lead_term_circulant(&[1], bits).unwrap(), 0);
    }

    #[test]
    fn lead_agrees_with_quadrature() {
        for gens in [vec![1u64, 3], vec![1, 2, 3], vec![1, 4, 5]] {
            let hp = lead_term_circulant(&gens, 200).unwrap().to_f64();
            let q = crate::asym::lead_term_circulant(&gens).unwrap().value;
            assert!((hp - q).abs() < 1e-9, "{gens:?}: {hp} vs {q}");
        }
    }

    #[test]
    fn log_det_matches_f64() {
        let spec = CirculantSpec::new(37, vec![1, 3]).unwrap();
        let f = log_det_star(&circulant_spectrum(&spec)).unwrap();
        let hp = log_det_star_circulant(37, &[1, 3], 128).unwrap().to_f64();
        assert!((f - hp).abs() < 1e-11);
        let t = torus_log_det_star(&TorusSpec::new(vec![3, 4, 2]).unwrap(), 1000).unwrap();
        let hp = log_det_star_torus(&[3, 4, 2], 1000, 128).unwrap().to_f64();
        assert!((t - hp).abs() < 1e-11);
        assert!(matches!(
            log_det_star_torus(&[10, 10], 50, 64),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn fibonacci_residual_is_exact_log() {
        // det* = n² F_n², so the residual is 2 log(1 − (−φ^{−2})^n)·… ; check it
        // against the closed form 2 log(1 − (−1)^n φ^{−2n})
        let n = 60u64;
        let bits = default_bits(n);
        let r = circulant_residual(n, &[1, 2], bits).unwrap();
        let phi = (Float::with_val(bits, 5u32).sqrt() + 1u32) / 2u32;
        let x = Float::with_val(bits, rug::ops::Pow::pow(&phi, -(2 * n as i32)));
        let expected = Float::with_val(bits, 1u32 - x).ln() * 2u32;
        let diff = Float::with_val(bits, &r - &expected);
        assert!(diff.abs() < Float::with_val(bits, 1u32) >> 300, "{}", to_decimal(&r, 20));
    }

    #[test]
    fn torus_residual_closed_form() {
        // Π_k (6 − 2cos θ_k) = 2cosh(nJ) − 2 with 2cosh J = 6
        let n = 40u64;
        let bits = default_bits(n);
        let r = torus_constant_residual(n, &[2], 1, bits).unwrap();
        let j = arccosh_lead(6, 1, bits).unwrap();
        let e = Float::with_val(bits, -(j * n)).exp();
        let expected = Float::with_val(bits, 1u32 - e).ln() * 2u32;
        let diff = Float::with_val(bits, &r - &expected);
        assert!(diff.abs() < Float::with_val(bits, 1u32) >> 250);
    }

    #[test]
    fn arccosh_values() {
        let v = arccosh_lead(4, 1, 100).unwrap().to_f64();
        assert!((v - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-15);
        assert!(arccosh_lead(2, 1, 100).unwrap().is_zero());
        assert!(arccosh_lead(3, 2, 100).is_err());
    }
}
