use std::ops::{Add, Neg, Sub};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{OrthoError, Result};
use crate::scalar::{decode_all, encode_all, Entry, Scalar, ScalarField, ONE, ZERO};

#[derive(Serialize, Deserialize)]
struct CoeffsJson {
    field: ScalarField,
    entries: Vec<Entry>,
}

fn checked(field: ScalarField, entries: Vec<Scalar>) -> Result<DVector<Scalar>> {
    if entries.is_empty() {
        return Err(OrthoError::EmptyDimension);
    }
    for &z in &entries {
        field.admit(z)?;
    }
    Ok(DVector::from_vec(entries))
}

/// An element of the space: `n` scalars of the owning field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoeffsJson", into = "CoeffsJson")]
pub struct Vector {
    field: ScalarField,
    entries: DVector<Scalar>,
}

/// A linear functional, acting by `f(x) = sum_i f_i x_i` with no conjugation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoeffsJson", into = "CoeffsJson")]
pub struct DualVector {
    field: ScalarField,
    entries: DVector<Scalar>,
}

macro_rules! coefficient_list {
    ($ty:ident) => {
        impl $ty {
            pub fn new(field: ScalarField, entries: Vec<Scalar>) -> Result<Self> {
                Ok(Self { field, entries: checked(field, entries)? })
            }

            /// Real-field constructor. Panics on non-finite input.
            pub fn real(entries: &[f64]) -> Self {
                let zs = entries.iter().map(|&r| Scalar::new(r, 0.0)).collect();
                Self::new(ScalarField::Real, zs).expect("finite real entries")
            }

            /// Complex-field constructor from `(re, im)` pairs. Panics on non-finite input.
            pub fn complex(entries: &[(f64, f64)]) -> Self {
                let zs = entries.iter().map(|&(re, im)| Scalar::new(re, im)).collect();
                Self::new(ScalarField::Complex, zs).expect("finite complex entries")
            }

            pub(crate) fn from_dvector(field: ScalarField, entries: DVector<Scalar>) -> Self {
                debug_assert!(!field.is_real() || entries.iter().all(|z| z.im == 0.0));
                Self { field, entries }
            }

            pub fn zeros(field: ScalarField, n: usize) -> Self {
                Self { field, entries: DVector::from_element(n, ZERO) }
            }

            /// The `i`-th standard basis element (dual basis element for functionals).
            pub fn basis(field: ScalarField, n: usize, i: usize) -> Self {
                let mut entries = DVector::from_element(n, ZERO);
                entries[i] = ONE;
                Self { field, entries }
            }

            pub fn field(&self) -> ScalarField {
                self.field
            }

            pub fn dim(&self) -> usize {
                self.entries.len()
            }

            pub fn entries(&self) -> &DVector<Scalar> {
                &self.entries
            }

            pub fn to_vec(&self) -> Vec<Scalar> {
                self.entries.iter().copied().collect()
            }

            pub fn is_zero(&self) -> bool {
                self.entries.iter().all(|z| *z == ZERO)
            }

            /// Euclidean length of the coefficient list, used only for tolerance scales.
            pub fn euclidean_norm(&self) -> f64 {
                self.entries.norm()
            }

            /// Multiplies by a scalar. A non-real factor promotes a real-field value to
            /// the complex field.
            pub fn scaled(&self, a: Scalar) -> Self {
                let field = if a.im != 0.0 { ScalarField::Complex } else { self.field };
                Self { field, entries: &self.entries * a }
            }

            /// `a * self + b * other`.
            pub fn combine(&self, a: Scalar, other: &Self, b: Scalar) -> Result<Self> {
                if self.dim() != other.dim() {
                    return Err(OrthoError::DimensionMismatch {
                        expected: self.dim(),
                        found: other.dim(),
                    });
                }
                let real = self.field.is_real()
                    && other.field.is_real()
                    && a.im == 0.0
                    && b.im == 0.0;
                let field = if real { ScalarField::Real } else { ScalarField::Complex };
                Ok(Self { field, entries: &self.entries * a + &other.entries * b })
            }

            /// Re-tags a real-field value as complex; complex values are returned as is.
            pub fn complexified(&self) -> Self {
                Self { field: ScalarField::Complex, entries: self.entries.clone() }
            }
        }

        impl TryFrom<CoeffsJson> for $ty {
            type Error = OrthoError;
            fn try_from(raw: CoeffsJson) -> Result<Self> {
                let zs = decode_all(raw.field, &raw.entries)?;
                Self::new(raw.field, zs)
            }
        }

        impl From<$ty> for CoeffsJson {
            fn from(v: $ty) -> Self {
                CoeffsJson { field: v.field, entries: encode_all(v.field, v.entries.iter().copied()) }
            }
        }

        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                self.combine(ONE, rhs, ONE).expect("conforming dimensions")
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                self.combine(ONE, rhs, -ONE).expect("conforming dimensions")
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                self.scaled(-ONE)
            }
        }
    };
}

coefficient_list!(Vector);
coefficient_list!(DualVector);

impl DualVector {
    /// `f(x) = sum_i f_i x_i`.
    pub fn apply(&self, x: &Vector) -> Result<Scalar> {
        if self.dim() != x.dim() {
            return Err(OrthoError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(self.entries.iter().zip(x.entries.iter()).map(|(f, v)| f * v).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        let v = Vector::real(&[1.0, -2.5]);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"field":"real","entries":[1.0,-2.5]}"#
        );
        let w = Vector::complex(&[(0.0, 1.0), (2.0, 0.0)]);
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"field":"complex","entries":[[0.0,1.0],[2.0,0.0]]}"#
        );
        let back: Vector = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn rejects_empty_and_mixed() {
        assert!(serde_json::from_str::<Vector>(r#"{"field":"real","entries":[]}"#).is_err());
        assert!(serde_json::from_str::<Vector>(r#"{"field":"real","entries":[[1,2]]}"#).is_err());
    }

    #[test]
    fn functional_is_bilinear_without_conjugation() {
        let f = DualVector::complex(&[(0.0, 1.0), (1.0, 0.0)]);
        let x = Vector::complex(&[(0.0, 1.0), (0.0, 0.0)]);
        // i * i = -1, no conjugate
        assert_eq!(f.apply(&x).unwrap(), Scalar::new(-1.0, 0.0));
    }

    #[test]
    fn combine_promotes_field() {
        let x = Vector::real(&[1.0, 0.0]);
        let y = x.combine(ONE, &x, Scalar::new(0.0, 1.0)).unwrap();
        assert_eq!(y.field(), ScalarField::Complex);
        assert_eq!(y.entries()[0], Scalar::new(1.0, 1.0));
    }
}
