//! Sign plus magnitude representation for factors that leave the `f64` range.
//!
//! Values are stored as `sign · mantissa · 2^exponent` with the mantissa in
//! `[1, 2)`, so conversion to and from `f64` is exact whenever the value is
//! representable. The natural-log magnitude is derived on demand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

#[derive(Clone, Copy, PartialEq)]
pub struct ScaledValue {
    sign: i8,
    mantissa: f64,
    exponent: i64,
}

/// Multiplies `m` by `2^e` without intermediate overflow.
pub(crate) fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

/// Splits a finite, nonzero `x` into `(m, e)` with `|m| ∈ [1, 2)`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x != 0.0 && x.is_finite());
    let (x, bias) = if x.abs() < f64::MIN_POSITIVE {
        (x * 2f64.powi(64), -64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let e = raw_exp - 1023;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1023u64 << 52));
    (m, e + bias)
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue {
        sign: 0,
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: ScaledValue = ScaledValue {
        sign: 1,
        mantissa: 1.0,
        exponent: 0,
    };

    fn normalized(sign: i8, mantissa: f64, exponent: i64) -> Self {
        if sign == 0 || mantissa == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = frexp(mantissa.abs());
        Self {
            sign: sign * mantissa.signum() as i8,
            mantissa: m,
            exponent: exponent + e,
        }
    }

    /// Exact conversion from a finite real. Non-finite input panics in debug builds.
    pub fn from_real(x: f64) -> Self {
        debug_assert!(x.is_finite(), "ScaledValue::from_real({x})");
        if x == 0.0 {
            return Self::ZERO;
        }
        Self::normalized(1, x, 0)
    }

    /// Builds `sign · e^{log_mag}`.
    pub fn from_log(sign: i8, log_mag: f64) -> Self {
        if sign == 0 || log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let e = (log_mag / std::f64::consts::LN_2).floor();
        let m = (log_mag - e * std::f64::consts::LN_2).exp();
        Self::normalized(sign.signum(), m, e as i64)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        if self.sign == 0 {
            return f64::NEG_INFINITY;
        }
        self.mantissa.ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// Converts back to `f64`; overflows to `±inf` and underflows to zero.
    pub fn to_real(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        f64::from(self.sign) * ldexp(self.mantissa, self.exponent)
    }

    pub fn abs(self) -> Self {
        Self {
            sign: self.sign.abs(),
            ..self
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero ScaledValue");
        Self::normalized(self.sign, 1.0 / self.mantissa, -self.exponent)
    }

    pub fn powi(self, k: i64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let mut base = if k < 0 { self.recip() } else { self };
        let mut k = k.unsigned_abs();
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Real power of a nonnegative value.
    pub fn powf(self, a: f64) -> Self {
        assert!(self.sign >= 0, "powf of negative ScaledValue");
        if a == 0.0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let t = a * self.exponent as f64;
        let ti = t.floor();
        let frac = t - ti;
        Self::normalized(1, self.mantissa.powf(a) * frac.exp2(), ti as i64)
    }

    /// Sum of two scaled values; the smaller is dropped when it lies far below
    /// the precision of the larger.
    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let top = self.exponent.max(other.exponent);
        let a = f64::from(self.sign) * ldexp(self.mantissa, self.exponent - top);
        let b = f64::from(other.sign) * ldexp(other.mantissa, other.exponent - top);
        let s = a + b;
        if s == 0.0 {
            return Self::ZERO;
        }
        Self::normalized(1, s, top)
    }

    pub fn cmp_magnitude(&self, other: &Self) -> Ordering {
        match (self.sign == 0, other.sign == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exponent
                .cmp(&other.exponent)
                .then(self.mantissa.total_cmp(&other.mantissa)),
        }
    }
}

impl fmt::Debug for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ScaledValue {{ sign: {}, log_mag: {} }}",
            self.sign,
            self.log_mag()
        )
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        Self::normalized(
            self.sign * rhs.sign,
            self.mantissa * rhs.mantissa,
            self.exponent + rhs.exponent,
        )
    }
}

impl Div for ScaledValue {
    type Output = ScaledValue;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;
    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            ..self
        }
    }
}

impl From<f64> for ScaledValue {
    fn from(x: f64) -> Self {
        Self::from_real(x)
    }
}
