//! Serde helpers: exact quantities serialize as decimal / `p/q` strings so
//! JSON consumers never see lossy floats.

use num_bigint::BigUint;
use num_rational::BigRational;

/// Canonical `p/q` rendering of an exact ratio (already reduced by
/// construction).
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `#[serde(with = "...")]` adapter: `BigUint` as a decimal string.
pub mod biguint_dec {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }
}

/// `#[serde(with = "...")]` adapter: `BigRational` as a `p/q` string.
pub mod ratio_str {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&ratio_string(v))
    }
}
