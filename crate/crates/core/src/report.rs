//! Report primitives: extended nonnegative reals and deterministic float
//! formatting shared by the JSON and CSV emitters.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative real extended with `+inf`, serialized as a JSON number or
/// the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtReal(pub f64);

impl ExtReal {
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal(x)
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0.is_infinite() && self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("nan")
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(ExtReal(x)),
            Raw::Str(s) if s == "inf" || s == "+inf" || s == "infinity" => {
                Ok(ExtReal(f64::INFINITY))
            }
            Raw::Str(s) => Err(D::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

/// Fixed 17-significant-digit rendering; reproducible byte-for-byte and
/// round-trips every finite f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}
