//! Small floating-point helpers shared across modules.

/// Neumaier-compensated running sum. Order of `add` calls fixes the result.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `sin(π p / q)` with the argument reduced exactly in integers first.
pub fn sin_pi_ratio(p: u64, q: u64) -> f64 {
    let r = p % (2 * q);
    // sin(π r/q) for r in [0, 2q)
    let (r, sign) = if r >= q { (r - q, -1.0) } else { (r, 1.0) };
    // fold into [0, q/2]
    let r = if 2 * r > q { q - r } else { r };
    sign * (std::f64::consts::PI * r as f64 / q as f64).sin()
}

/// `cos(2π p / q)`, reduced in integers.
pub fn cos_two_pi_ratio(p: u64, q: u64) -> f64 {
    1.0 - 2.0 * sin_pi_ratio(p, q).powi(2)
}

/// Euler–Mascheroni constant γ = −Γ'(1), to 30 digits.
pub const EULER_GAMMA_STR: &str = "0.577215664901532860606512090082";
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Γ(s) for s a positive integer or half-integer (`twice_s = 2s`).
pub fn gamma_half_integer(twice_s: u32) -> f64 {
    assert!(twice_s >= 1, "gamma needs s > 0");
    if twice_s % 2 == 0 {
        // (s-1)!
        (1..twice_s / 2).map(|k| k as f64).product()
    } else {
        // Γ(k + 1/2) = (2k-1)!! √π / 2^k
        let k = (twice_s - 1) / 2;
        let mut v = std::f64::consts::PI.sqrt();
        for j in 0..k {
            v *= (2 * j + 1) as f64 / 2.0;
        }
        v
    }
}
