//! Rounded-value arithmetic over `N_eps = {0} ∪ {(1+eps)^x : x ∈ ℕ}` and
//! the per-height error schedule of the approximate DP.
//!
//! Values are stored as exponents. Threshold comparisons ((1+eps)^x against
//! a rational, or against a sum of two members) are decided by a fast
//! floating-point filter whose ambiguous cases fall back to exact
//! big-integer arithmetic, so results never depend on floating-point drift.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = Ratio<BigInt>;

/// A member of `N_eps`: zero, or `(1+eps)^x` stored as its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoundedValue {
    Zero,
    Pow(u64),
}

impl RoundedValue {
    pub const ONE: RoundedValue = RoundedValue::Pow(0);

    pub fn is_zero(&self) -> bool {
        matches!(self, RoundedValue::Zero)
    }
}

pub fn ratio_from_usize(v: usize) -> Rational {
    Ratio::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

fn bigint_pow(base: &BigInt, mut e: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut b = base.clone();
    loop {
        if e & 1 == 1 {
            result = &result * &b;
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        b = &b * &b;
    }
    result
}

/// Exact `a ~_gamma b` for rationals: `b/(1+gamma) <= a <= (1+gamma)*b`.
pub fn close_ratio(a: &Rational, b: &Rational, gamma: &Rational) -> bool {
    let one_plus = Rational::one() + gamma;
    a * &one_plus >= *b && b * &one_plus >= *a
}

/// Arithmetic context for a fixed rational `eps > 0`.
#[derive(Debug, Clone)]
pub struct EpsArith {
    eps: Rational,
    /// `ln(1+eps)` as f64, used only by the filter.
    ln_base: f64,
}

/// Filter margin in log space; comparisons closer than this go exact.
const LOG_MARGIN: f64 = 1e-9;

impl EpsArith {
    pub fn new(eps: Rational) -> Result<EpsArith, Error> {
        if eps <= Rational::zero() {
            return Err(Error::config("eps must be positive"));
        }
        // ln_1p keeps full relative precision for tiny eps; a plain
        // (1+eps).ln() would rot the filter margin.
        let ln_base = eps.to_f64().unwrap_or(0.0).ln_1p();
        Ok(EpsArith { eps, ln_base })
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    /// Numeric value as f64 (for display; comparisons never use this alone).
    pub fn value_f64(&self, v: RoundedValue) -> f64 {
        match v {
            RoundedValue::Zero => 0.0,
            RoundedValue::Pow(x) => (x as f64 * self.ln_base).exp(),
        }
    }

    /// Exact value of a member as a rational.
    pub fn value_ratio(&self, v: RoundedValue) -> Rational {
        match v {
            RoundedValue::Zero => Rational::zero(),
            RoundedValue::Pow(x) => {
                let num = bigint_pow(&(self.eps.numer() + self.eps.denom()), x);
                let den = bigint_pow(self.eps.denom(), x);
                Ratio::new(num, den)
            }
        }
    }

    /// Sign of `(1+eps)^x - r`.
    pub fn cmp_pow_ratio(&self, x: u64, r: &Rational) -> Ordering {
        if !r.is_positive() {
            return Ordering::Greater;
        }
        let r_f64 = r.to_f64().unwrap_or(f64::NAN);
        if r_f64.is_finite() && r_f64 > 0.0 {
            let diff = x as f64 * self.ln_base - r_f64.ln();
            if diff > LOG_MARGIN {
                return Ordering::Greater;
            }
            if diff < -LOG_MARGIN {
                return Ordering::Less;
            }
        }
        // Exact: (q+p)^x * Q  vs  P * q^x  for eps = p/q, r = P/Q.
        let (p, q) = (self.eps.numer(), self.eps.denom());
        let lhs = bigint_pow(&(p + q), x) * r.denom();
        let rhs = r.numer() * bigint_pow(q, x);
        lhs.cmp(&rhs)
    }

    /// Sign of `(1+eps)^z - ((1+eps)^x + (1+eps)^y)`.
    fn cmp_pow_vs_sum(&self, z: u64, x: u64, y: u64) -> Ordering {
        let m = z.min(x).min(y);
        let (z, x, y) = (z - m, x - m, y - m);
        let l = self.ln_base;
        let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
        let sum_log = hi as f64 * l + ((lo as f64 - hi as f64) * l).exp().ln_1p();
        let diff = z as f64 * l - sum_log;
        if diff > LOG_MARGIN {
            return Ordering::Greater;
        }
        if diff < -LOG_MARGIN {
            return Ordering::Less;
        }
        let (p, q) = (self.eps.numer(), self.eps.denom());
        let base = p + q;
        let emax = z.max(x).max(y);
        let lhs = bigint_pow(&base, z) * bigint_pow(q, emax - z);
        let rhs = bigint_pow(&base, x) * bigint_pow(q, emax - x)
            + bigint_pow(&base, y) * bigint_pow(q, emax - y);
        lhs.cmp(&rhs)
    }

    /// `[a]_eps`: the largest member of `N_eps` that is `<= a`.
    /// Satisfies `[a]_eps ~_eps a`.
    pub fn round_down_ratio(&self, a: &Rational) -> RoundedValue {
        assert!(!a.is_negative(), "round_down needs a >= 0");
        if *a < Rational::one() {
            return RoundedValue::Zero;
        }
        let guess = (a.to_f64().unwrap_or(1.0).ln() / self.ln_base).floor();
        let mut x = if guess.is_finite() && guess >= 0.0 {
            guess as u64
        } else {
            0
        };
        // Certify: (1+eps)^x <= a < (1+eps)^(x+1), adjusting the guess.
        while self.cmp_pow_ratio(x, a) == Ordering::Greater {
            x -= 1; // x >= 1 here since (1+eps)^0 = 1 <= a
        }
        while self.cmp_pow_ratio(x + 1, a) != Ordering::Greater {
            x += 1;
        }
        RoundedValue::Pow(x)
    }

    /// `[value(a) + value(b)]_eps` (the join-node addition).
    ///
    /// Adding zero is the identity: a member of `N_eps` rounds to itself.
    pub fn add(&self, a: RoundedValue, b: RoundedValue) -> RoundedValue {
        match (a, b) {
            (RoundedValue::Zero, v) | (v, RoundedValue::Zero) => v,
            (RoundedValue::Pow(x), RoundedValue::Pow(y)) => {
                let l = self.ln_base;
                let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
                let sum_log = hi as f64 * l + ((lo as f64 - hi as f64) * l).exp().ln_1p();
                let mut z = (sum_log / l).floor().max(hi as f64) as u64;
                while self.cmp_pow_vs_sum(z, x, y) == Ordering::Greater {
                    z -= 1;
                }
                while self.cmp_pow_vs_sum(z + 1, x, y) != Ordering::Greater {
                    z += 1;
                }
                RoundedValue::Pow(z)
            }
        }
    }

    /// `[value(a) + 1]_eps` (the forget-node increment).
    pub fn add_one(&self, a: RoundedValue) -> RoundedValue {
        self.add(a, RoundedValue::ONE)
    }

    /// `value(v) ~_gamma m` for an integer `m`.
    pub fn close_to_int(&self, v: RoundedValue, m: usize, gamma: &Rational) -> bool {
        let m_ratio = ratio_from_usize(m);
        match v {
            RoundedValue::Zero => m == 0,
            RoundedValue::Pow(x) => {
                if m == 0 {
                    return false;
                }
                let one_plus = Rational::one() + gamma;
                self.cmp_pow_ratio(x, &(&m_ratio * &one_plus)) != Ordering::Greater
                    && self.cmp_pow_ratio(x, &(&m_ratio / &one_plus)) != Ordering::Less
            }
        }
    }

    /// `value(v) >= r`.
    pub fn ge_ratio(&self, v: RoundedValue, r: &Rational) -> bool {
        match v {
            RoundedValue::Zero => !r.is_positive(),
            RoundedValue::Pow(x) => self.cmp_pow_ratio(x, r) != Ordering::Less,
        }
    }

    /// `floor(value(v) * (1+gamma))` as an integer.
    pub fn floor_mul_one_plus(&self, v: RoundedValue, gamma: &Rational) -> usize {
        match v {
            RoundedValue::Zero => 0,
            RoundedValue::Pow(x) => {
                let one_plus = Rational::one() + gamma;
                let approx = self.value_f64(v) * one_plus.to_f64().unwrap_or(1.0);
                let mut m = approx.floor().max(0.0) as usize;
                // Certify: m/(1+gamma) <= (1+eps)^x < (m+1)/(1+gamma).
                loop {
                    let upper = ratio_from_usize(m + 1) / &one_plus;
                    if self.cmp_pow_ratio(x, &upper) != Ordering::Less {
                        m += 1;
                        continue;
                    }
                    if m > 0 {
                        let lower = ratio_from_usize(m) / &one_plus;
                        if self.cmp_pow_ratio(x, &lower) == Ordering::Less {
                            m -= 1;
                            continue;
                        }
                    }
                    return m;
                }
            }
        }
    }

    /// `ceil(value(v) / (1+gamma))` as an integer.
    pub fn ceil_div_one_plus(&self, v: RoundedValue, gamma: &Rational) -> usize {
        match v {
            RoundedValue::Zero => 0,
            RoundedValue::Pow(x) => {
                let one_plus = Rational::one() + gamma;
                let approx = self.value_f64(v) / one_plus.to_f64().unwrap_or(1.0);
                let mut m = approx.ceil().max(1.0) as usize;
                // Certify: (m-1)(1+gamma) < (1+eps)^x <= m(1+gamma).
                loop {
                    let upper = ratio_from_usize(m) * &one_plus;
                    if self.cmp_pow_ratio(x, &upper) == Ordering::Greater {
                        m += 1;
                        continue;
                    }
                    if m > 1 {
                        let lower = ratio_from_usize(m - 1) * &one_plus;
                        if self.cmp_pow_ratio(x, &lower) != Ordering::Greater {
                            m -= 1;
                            continue;
                        }
                    }
                    return m;
                }
            }
        }
    }
}

/// Per-height error schedule: `eps_h = 2*h*eps`, `delta_h = 4*(h+1)*h*eps`,
/// precomputed up to the realized root height `h0`.
#[derive(Debug, Clone)]
pub struct ErrorSchedule {
    pub arith: EpsArith,
    h0: usize,
    eps_h: Vec<Rational>,
    delta_h: Vec<Rational>,
}

impl ErrorSchedule {
    pub fn h0(&self) -> usize {
        self.h0
    }

    pub fn eps_h(&self, h: usize) -> &Rational {
        &self.eps_h[h]
    }

    pub fn delta_h(&self, h: usize) -> &Rational {
        &self.delta_h[h]
    }

    pub fn delta_h0(&self) -> &Rational {
        &self.delta_h[self.h0]
    }
}

/// `log2(n)` with 32 fractional bits (truncated), as an exact rational.
/// Exact for powers of two; deterministic everywhere.
fn log2_fixed(n: u64) -> Rational {
    assert!(n >= 1);
    let e = 63 - n.leading_zeros() as u64;
    // Q62 representation of n / 2^e, a value in [1, 2).
    let mut z: u128 = if e <= 62 {
        (n as u128) << (62 - e as u32)
    } else {
        (n as u128) >> (e as u32 - 62)
    };
    let mut frac: u64 = 0;
    for _ in 0..32 {
        z = (z * z) >> 62;
        frac <<= 1;
        if z >= 2u128 << 62 {
            frac |= 1;
            z >>= 1;
        }
    }
    Ratio::new(
        BigInt::from(e) * BigInt::from(1u64 << 32) + BigInt::from(frac),
        BigInt::from(1u64 << 32),
    )
}

/// The default `eps = 1/(w^2 * log2(n))^3`, made rational by taking the
/// ceiling of the cubed denominator.
pub fn default_epsilon(w: usize, n: usize) -> Rational {
    let n = n.max(2) as u64;
    let l = log2_fixed(n);
    let scaled = Rational::from_integer(BigInt::from((w * w) as u64)) * l;
    let cubed = &scaled * &scaled * &scaled;
    let denom = cubed.ceil().to_integer();
    Ratio::new(BigInt::one(), denom.max(BigInt::one()))
}

/// Builds the schedule with the default `eps` for `(w, n)` and the measured
/// root height `h0`. The default is additionally clamped so that
/// `delta_h0 <= 1/2` whatever the measured height is (a smaller `eps` only
/// tightens the guarantee); explicit overrides are rejected when
/// `delta_h0 >= 1`.
pub fn schedule(w: usize, n: usize, h0: usize) -> Result<ErrorSchedule, Error> {
    let mut eps = default_epsilon(w, n);
    if h0 > 0 {
        let clamp = Ratio::new(BigInt::one(), BigInt::from(8 * (h0 + 1) * h0));
        if eps > clamp {
            eps = clamp;
        }
    }
    schedule_with(eps, h0)
}

/// Builds the schedule for an explicit `eps` (the `--epsilon` override).
pub fn schedule_with(eps: Rational, h0: usize) -> Result<ErrorSchedule, Error> {
    let arith = EpsArith::new(eps.clone())?;
    let mut eps_h = Vec::with_capacity(h0 + 1);
    let mut delta_h = Vec::with_capacity(h0 + 1);
    for h in 0..=h0 {
        let h_ratio = ratio_from_usize(h);
        eps_h.push(&eps * ratio(2, 1) * &h_ratio);
        delta_h.push(&eps * ratio(4, 1) * &h_ratio * ratio_from_usize(h + 1));
    }
    if delta_h[h0] >= Rational::one() {
        return Err(Error::config(format!(
            "delta_h0 = {} >= 1 for eps = {} at height {}; choose a smaller eps",
            delta_h[h0], eps, h0
        )));
    }
    Ok(ErrorSchedule {
        arith,
        h0,
        eps_h,
        delta_h,
    })
}
