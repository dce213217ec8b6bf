//! Internal numeric helpers: scaled floating point (separate power-of-two
//! exponent, so products of thousands of factors never over- or underflow),
//! binomial coefficients, falling factorials and compensated summation.

/// A nonnegative value `mantissa * 2^exp` with `mantissa` normalized to
/// `[1, 2)` (or exactly zero). Multiplying scaled values only touches the
/// mantissa, so chains like `C(n-1,k) * theta^k * (1-theta)^(n-1-k)` stay
/// representable for any n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Scaled {
    mantissa: f64,
    exp: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mantissa: 0.0, exp: 0 };
    pub const ONE: Scaled = Scaled { mantissa: 1.0, exp: 0 };

    pub fn from_f64(x: f64) -> Scaled {
        assert!(x >= 0.0 && x.is_finite(), "Scaled::from_f64: bad input {x}");
        if x == 0.0 {
            return Scaled::ZERO;
        }
        // Lift subnormals into normal range first so the exponent field is valid.
        if x < f64::MIN_POSITIVE {
            return Scaled::normalize(x * f64::powi(2.0, 64), -64);
        }
        Scaled::normalize(x, 0)
    }

    /// Renormalize `m * 2^e` so the mantissa lands in [1, 2).
    fn normalize(m: f64, e: i64) -> Scaled {
        if m == 0.0 {
            return Scaled::ZERO;
        }
        debug_assert!(m.is_finite() && m >= f64::MIN_POSITIVE);
        let bits = m.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let shift = biased - 1023;
        // Rewrite the exponent field to 1023, leaving the mantissa bits alone:
        // this divides by 2^shift exactly.
        let mant = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
        Scaled { mantissa: mant, exp: e + shift }
    }

    pub fn mul(self, other: Scaled) -> Scaled {
        if self.mantissa == 0.0 || other.mantissa == 0.0 {
            return Scaled::ZERO;
        }
        Scaled::normalize(self.mantissa * other.mantissa, self.exp + other.exp)
    }

    pub fn mul_f64(self, x: f64) -> Scaled {
        self.mul(Scaled::from_f64(x))
    }

    pub fn recip(self) -> Scaled {
        assert!(self.mantissa != 0.0, "Scaled::recip of zero");
        Scaled::normalize(1.0 / self.mantissa, -self.exp)
    }

    pub fn to_f64(self) -> f64 {
        ldexp(self.mantissa, self.exp)
    }

    /// self^k by repeated squaring.
    pub fn powi(self, mut k: u64) -> Scaled {
        let mut base = self;
        let mut acc = Scaled::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }
}

/// `m * 2^e` with saturation to 0 / infinity. Power-of-two multiplies are
/// exact, so this adds no rounding beyond the final underflow, if any.
pub(crate) fn ldexp(mut m: f64, mut e: i64) -> f64 {
    const STEP: i64 = 600;
    let up = f64::powi(2.0, STEP as i32);
    let down = f64::powi(2.0, -(STEP as i32));
    while e > STEP {
        m *= up;
        e -= STEP;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -STEP {
        m *= down;
        e += STEP;
        if m == 0.0 {
            return 0.0;
        }
    }
    m * f64::from_bits(((1023 + e) as u64) << 52)
}

/// Exact binomial coefficient for small arguments (u128 intermediates).
pub(crate) fn binom_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) as u128 / i as u128;
    }
    u64::try_from(acc).expect("binom_u64 overflow")
}

/// Binomial coefficient in scaled arithmetic; exact cancellation-friendly
/// (the same call sequence always yields the identical value).
pub(crate) fn binom_scaled(n: u64, k: u64) -> Scaled {
    if k > n {
        return Scaled::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = Scaled::ONE;
    for i in 1..=k {
        acc = acc.mul_f64((n - k + i) as f64 / i as f64);
    }
    acc
}

/// Falling factorial n(n-1)...(n-d+1) as f64; 1 for d = 0, 0 once a factor
/// crosses zero.
pub(crate) fn falling_factorial(n: f64, d: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..d {
        let factor = n - i as f64;
        if factor <= 0.0 {
            return 0.0;
        }
        acc *= factor;
    }
    acc
}

/// Kahan–Babuška compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> KahanSum {
        KahanSum::default()
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_roundtrip() {
        for &x in &[1.0, 0.5, 0.1, 1e-300, 1e300, 3.7, f64::MIN_POSITIVE / 8.0] {
            assert_eq!(Scaled::from_f64(x).to_f64(), x, "roundtrip {x}");
        }
        assert_eq!(Scaled::ZERO.to_f64(), 0.0);
    }

    #[test]
    fn scaled_products_beyond_f64_range() {
        // 2^-5000 * 2^5000 = 1, far outside f64 range in the middle.
        let tiny = Scaled::from_f64(0.5).powi(5000);
        let huge = Scaled::from_f64(2.0).powi(5000);
        assert_eq!(tiny.mul(huge).to_f64(), 1.0);
        assert_eq!(tiny.to_f64(), 0.0); // underflows only on materialization
    }

    #[test]
    fn scaled_recip_cancels() {
        let b = binom_scaled(9999, 4321);
        let r = b.mul_f64(10000.0).recip();
        let v = b.mul(r).to_f64();
        assert!((v - 1e-4).abs() < 1e-18, "got {v}");
    }

    #[test]
    fn binom_exact_small() {
        assert_eq!(binom_u64(0, 0), 1);
        assert_eq!(binom_u64(5, 2), 10);
        assert_eq!(binom_u64(10, 10), 1);
        assert_eq!(binom_u64(10, 11), 0);
        assert_eq!(binom_u64(52, 5), 2_598_960);
    }

    #[test]
    fn binom_scaled_matches_exact() {
        for n in 0..=30u64 {
            for k in 0..=n {
                let exact = binom_u64(n, k) as f64;
                let got = binom_scaled(n, k).to_f64();
                assert!((got - exact).abs() <= exact * 1e-13, "C({n},{k})");
            }
        }
    }

    #[test]
    fn falling_factorial_cases() {
        assert_eq!(falling_factorial(5.0, 0), 1.0);
        assert_eq!(falling_factorial(5.0, 2), 20.0);
        assert_eq!(falling_factorial(3.0, 4), 0.0);
        assert_eq!(falling_factorial(0.0, 1), 0.0);
    }

    #[test]
    fn kahan_small_increments() {
        let mut s = KahanSum::new();
        for _ in 0..1_000_000 {
            s.add(0.1);
        }
        assert!((s.value() - 100_000.0).abs() < 1e-9);
    }
}
