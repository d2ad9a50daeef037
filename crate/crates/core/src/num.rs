//! Extended reals, orders and log-domain helpers.

#[allow(unused_imports)]
use num_traits::Float;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// A nonnegative real or `+inf`.
///
/// Tiny negative values produced by rounding are clamped to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(0.0);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    /// Panics on NaN.
    pub fn new(x: f64) -> Self {
        assert!(!x.is_nan(), "ExtReal from NaN");
        ExtReal(if x > 0.0 { x } else { 0.0 })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn max(self, other: Self) -> Self {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.0 <= other.0 {
            self
        } else {
            other
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else if let Some(p) = f.precision() {
            write!(f, "{:.*}", p, self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl From<ExtReal> for f64 {
    fn from(x: ExtReal) -> f64 {
        x.0
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for ExtReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = ExtReal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a nonnegative number or \"inf\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> core::result::Result<ExtReal, E> {
                if v.is_nan() {
                    return Err(E::custom("NaN"));
                }
                Ok(ExtReal::new(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> core::result::Result<ExtReal, E> {
                Ok(ExtReal::new(v as f64))
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> core::result::Result<ExtReal, E> {
                Ok(ExtReal::new(v as f64))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> core::result::Result<ExtReal, E> {
                match v {
                    "inf" | "+inf" | "infinity" => Ok(ExtReal::INFINITY),
                    _ => v.parse::<f64>().map(ExtReal::new).map_err(E::custom),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// An order in `[-inf, inf]`.
///
/// The orders 0, 1 and the two infinities are kept as dedicated variants since
/// every measure is defined there by a limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    NegInf,
    Zero,
    One,
    PosInf,
    /// Any other finite value.
    Finite(f64),
}

impl Order {
    /// Classifies `x`; `0`, `-0`, `1` and the infinities map to their variants.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::InvalidOrder)
        } else if x == f64::INFINITY {
            Ok(Order::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(Order::NegInf)
        } else if x == 0.0 {
            Ok(Order::Zero)
        } else if x == 1.0 {
            Ok(Order::One)
        } else {
            Ok(Order::Finite(x))
        }
    }

    /// Infallible variant for internal use; NaN is a programming error.
    pub(crate) fn of(x: f64) -> Self {
        Order::new(x).expect("NaN order")
    }

    /// `1 / (1 - x)`, with `x = 1` giving `+inf` and `x -> +inf` giving `0-`.
    pub(crate) fn inv_one_minus(x: f64) -> Self {
        if x.is_infinite() {
            Order::Zero
        } else {
            Order::of(1.0 / (1.0 - x))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Order::NegInf => f64::NEG_INFINITY,
            Order::Zero => 0.0,
            Order::One => 1.0,
            Order::PosInf => f64::INFINITY,
            Order::Finite(x) => x,
        }
    }

    /// Rejects negative orders.
    pub fn nonnegative(self) -> Result<Self> {
        if self.value() < 0.0 {
            Err(Error::InvalidOrder)
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::NegInf => write!(f, "-inf"),
            Order::PosInf => write!(f, "inf"),
            Order::Zero => write!(f, "0"),
            Order::One => write!(f, "1"),
            Order::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" | "Infinity" => Ok(Order::PosInf),
            "-inf" | "-infinity" | "-Infinity" => Ok(Order::NegInf),
            t => t.parse::<f64>().map_err(|_| Error::InvalidOrder).and_then(Order::new),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Order::NegInf | Order::PosInf => s.collect_str(self),
            o => s.serialize_f64(o.value()),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = Order;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a number, \"inf\" or \"-inf\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> core::result::Result<Order, E> {
                Order::new(v).map_err(E::custom)
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> core::result::Result<Order, E> {
                Order::new(v as f64).map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> core::result::Result<Order, E> {
                Order::new(v as f64).map_err(E::custom)
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> core::result::Result<Order, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Serializes log-domain values, writing `-inf` as a string since JSON has no infinities.
#[cfg(feature = "serde")]
pub(crate) mod serde_log {
    use core::fmt;

    pub fn serialize<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = f64;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a number, \"inf\" or \"-inf\"")
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "-inf" => Ok(f64::NEG_INFINITY),
                    "inf" => Ok(f64::INFINITY),
                    _ => Err(E::custom("expected a number")),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// `log(sum(exp(x)))` with the max shifted out; empty or all `-inf` gives `-inf`.
pub(crate) fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut m = f64::NEG_INFINITY;
    let mut acc = 0.0;
    for x in xs {
        if x == f64::NEG_INFINITY {
            continue;
        }
        if x == f64::INFINITY {
            return f64::INFINITY;
        }
        if x > m {
            acc = acc * (m - x).exp() + 1.0;
            m = x;
        } else {
            acc += (x - m).exp();
        }
    }
    if m == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        m + acc.ln()
    }
}

/// Ratio of two nonnegative quantities with `x / 0 = +inf`.
pub(crate) fn ratio(num: f64, den: f64) -> ExtReal {
    if den <= 0.0 {
        ExtReal::INFINITY
    } else {
        ExtReal::new(num / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn order_classification() {
        assert_eq!(Order::new(0.0).unwrap(), Order::Zero);
        assert_eq!(Order::new(-0.0).unwrap(), Order::Zero);
        assert_eq!(Order::new(1.0).unwrap(), Order::One);
        assert_eq!(Order::new(f64::INFINITY).unwrap(), Order::PosInf);
        assert!(Order::new(f64::NAN).is_err());
        assert_eq!(Order::inv_one_minus(1.0), Order::PosInf);
        assert_eq!(Order::inv_one_minus(0.0), Order::One);
        assert_eq!(Order::inv_one_minus(f64::INFINITY), Order::Zero);
        assert_eq!("inf".parse::<Order>().unwrap(), Order::PosInf);
        assert_eq!("-inf".parse::<Order>().unwrap(), Order::NegInf);
        assert_eq!("0.5".parse::<Order>().unwrap(), Order::Finite(0.5));
        assert!(Order::Finite(-2.0).nonnegative().is_err());
        assert_eq!(Order::PosInf.to_string(), "inf");
    }

    #[test]
    fn ext_real_clamps_and_orders() {
        assert_eq!(ExtReal::new(-1e-17), ExtReal::ZERO);
        assert!(ExtReal::INFINITY > ExtReal::new(1e300));
        assert_eq!(ExtReal::INFINITY.to_string(), "inf");
    }

    #[test]
    fn lse() {
        let v = log_sum_exp([0.0f64.ln(), 0.25f64.ln(), 0.75f64.ln()]);
        assert!(v.abs() < 1e-15);
        assert_eq!(log_sum_exp([]), f64::NEG_INFINITY);
        assert!((log_sum_exp([1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
