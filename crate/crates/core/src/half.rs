//! Half-integer angular momentum quantum numbers.

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A half-integer value stored as twice its value, so `Half(3)` is 3/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Half(pub i32);

impl Half {
    pub const ZERO: Half = Half(0);

    #[inline]
    pub fn from_twice(twice: i32) -> Self {
        Half(twice)
    }

    #[inline]
    pub fn from_int(v: i32) -> Self {
        Half(2 * v)
    }

    /// Exact conversion; fails when `v` is not an integer multiple of 1/2.
    pub fn from_f64(v: f64) -> Option<Self> {
        let twice = 2.0 * v;
        if twice.is_finite() && (twice - twice.round()).abs() < 1e-9 {
            Some(Half(twice.round() as i32))
        } else {
            None
        }
    }

    #[inline]
    pub fn twice(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn value(self) -> f64 {
        f64::from(self.0) * 0.5
    }

    #[inline]
    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `j(j+1)`.
    #[inline]
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}

impl Neg for Half {
    type Output = Half;

    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Half {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Half::from_f64(v)
            .ok_or_else(|| serde::de::Error::custom(format!("{v} is not a half-integer")))
    }
}
