use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::{IntMatrix, Rational};

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) fn ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

pub(crate) fn matrix_rows(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    m.to_rows().iter().map(|r| ints(r)).collect()
}

/// `"p/q"`, or `"n"` for integers.
pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}
