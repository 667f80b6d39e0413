//! Scalar field tag and the JSON encoding shared by every coefficient list.
//!
//! All arithmetic runs on `Complex64`. A real-field value is a complex number
//! whose imaginary part is exactly zero; the field tag decides which scalars a
//! search may range over and how values are written out.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{OrthoError, Result};

pub type Scalar = Complex64;

pub const ZERO: Scalar = Complex64::new(0.0, 0.0);
pub const ONE: Scalar = Complex64::new(1.0, 0.0);
pub const I: Scalar = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    pub fn is_real(self) -> bool {
        matches!(self, ScalarField::Real)
    }

    /// Checks that `z` is a legal scalar of this field.
    pub fn admit(self, z: Scalar) -> Result<Scalar> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(OrthoError::NonFinite);
        }
        if self.is_real() && z.im != 0.0 {
            return Err(OrthoError::FieldMismatch {
                detail: format!("complex entry {z} in a real-field object"),
            });
        }
        Ok(z)
    }
}

impl std::fmt::Display for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScalarField::Real => "real",
            ScalarField::Complex => "complex",
        })
    }
}

/// One serialized coefficient: a bare number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn encode(field: ScalarField, z: Scalar) -> Self {
        match field {
            ScalarField::Real => Entry::Real(z.re),
            ScalarField::Complex => Entry::Complex([z.re, z.im]),
        }
    }

    pub fn decode(self, field: ScalarField) -> Result<Scalar> {
        let z = match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => {
                if field.is_real() {
                    return Err(OrthoError::FieldMismatch {
                        detail: "[re, im] pair in a real-field object".into(),
                    });
                }
                Complex64::new(re, im)
            }
        };
        field.admit(z)
    }
}

pub fn encode_all(field: ScalarField, zs: impl IntoIterator<Item = Scalar>) -> Vec<Entry> {
    zs.into_iter().map(|z| Entry::encode(field, z)).collect()
}

pub fn decode_all(field: ScalarField, entries: &[Entry]) -> Result<Vec<Scalar>> {
    entries.iter().map(|e| e.decode(field)).collect()
}

/// `z / |z|`, or zero at the origin.
pub fn unit_phase(z: Scalar) -> Scalar {
    let r = z.norm();
    if r == 0.0 {
        ZERO
    } else {
        z / r
    }
}

/// Serde adapter writing a scalar as `[re, im]`.
pub mod pair_repr {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Same as [`pair_repr`] for optional scalars (`null` when absent).
pub mod opt_pair_repr {
    use super::*;

    pub fn serialize<S: Serializer>(
        z: &Option<Scalar>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        z.map(|z| [z.re, z.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Scalar>, D::Error> {
        let v = Option::<[f64; 2]>::deserialize(d)?;
        Ok(v.map(|[re, im]| Complex64::new(re, im)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_field_rejects_pairs() {
        let e: Entry = serde_json::from_str("[1.0, 2.0]").unwrap();
        assert!(e.decode(ScalarField::Real).is_err());
        assert_eq!(e.decode(ScalarField::Complex).unwrap(), Complex64::new(1.0, 2.0));
    }

    #[test]
    fn complex_field_accepts_bare_numbers() {
        let e: Entry = serde_json::from_str("-3.5").unwrap();
        assert_eq!(e.decode(ScalarField::Complex).unwrap(), Complex64::new(-3.5, 0.0));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(ScalarField::Real.admit(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn phase_of_zero_is_zero() {
        assert_eq!(unit_phase(ZERO), ZERO);
        assert!((unit_phase(Complex64::new(0.0, -4.0)) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
