//! Exponent-tagged coordinate vectors for finite truncations of l_p.

use std::fmt;
use std::ops::{Index, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Magnitudes below this are treated as exact zeros before fractional powers.
pub const UNDERFLOW: f64 = 1e-300;

/// `|x|^p`, with the zero guard applied for tiny magnitudes.
#[inline]
pub fn pow_abs(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if a < UNDERFLOW {
        0.0
    } else if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

/// An l_p exponent: a finite p > 1 or the sup norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(Exponent::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExponentRepr {
    Number(f64),
    Text(String),
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => ExponentRepr::Number(*p),
            Exponent::Infinite => ExponentRepr::Text("inf".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ExponentRepr::deserialize(d)? {
            ExponentRepr::Number(p) => Exponent::finite(p).map_err(D::Error::custom),
            ExponentRepr::Text(t) if t == "inf" || t == "infinity" => Ok(Exponent::Infinite),
            ExponentRepr::Text(t) => Err(D::Error::custom(format!("invalid exponent `{t}`"))),
        }
    }
}

/// `(Σ|v_i|^p)^{1/p}`, or `max |v_i|` for the sup norm. Accepts any finite `p >= 1`.
pub fn lp_norm(coords: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        coords.iter().fold(0.0, |m, x| m.max(x.abs()))
    } else {
        norm_pow(coords, p).powf(1.0 / p)
    }
}

/// `Σ|v_i|^p` without the final root.
pub fn norm_pow(coords: &[f64], p: f64) -> f64 {
    coords.iter().map(|&x| pow_abs(x, p)).sum()
}

/// Coordinates of a vector in a truncated l_p; the exponent is a semantic tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpVector {
    exponent: Exponent,
    coords: Vec<f64>,
}

impl LpVector {
    pub fn new(exponent: Exponent, coords: Vec<f64>) -> Result<Self> {
        if let Some((i, &x)) = coords.iter().enumerate().find(|(_, x)| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {i} is not finite ({x})"
            )));
        }
        Ok(LpVector { exponent, coords })
    }

    pub fn zeros(exponent: Exponent, n: usize) -> Self {
        LpVector {
            exponent,
            coords: vec![0.0; n],
        }
    }

    pub(crate) fn from_raw(exponent: Exponent, coords: Vec<f64>) -> Self {
        LpVector { exponent, coords }
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    pub fn with_exponent(mut self, exponent: Exponent) -> Self {
        self.exponent = exponent;
        self
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Norm under the vector's own exponent tag.
    pub fn norm(&self) -> f64 {
        lp_norm(&self.coords, self.exponent.value())
    }

    pub fn norm_with(&self, p: Exponent) -> f64 {
        lp_norm(&self.coords, p.value())
    }

    pub fn scaled(&self, t: f64) -> Self {
        LpVector::from_raw(self.exponent, self.coords.iter().map(|x| t * x).collect())
    }

    pub fn max_abs_diff(&self, other: &LpVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Index<usize> for LpVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl Sub for &LpVector {
    type Output = LpVector;

    fn sub(self, rhs: &LpVector) -> LpVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        LpVector::from_raw(
            self.exponent,
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        assert_eq!(lp_norm(&[3.0, 4.0], 2.0), 5.0);
        assert!((lp_norm(&[1.0; 4], 4.0) - 4f64.powf(0.25)).abs() < 1e-15);
        assert!((lp_norm(&[1.0; 4], 4.0) - 1.41421356237).abs() < 1e-10);
        assert_eq!(lp_norm(&[1.0, -7.5, 2.0], f64::INFINITY), 7.5);
    }

    #[test]
    fn exponent_validation_and_serde() {
        assert!(Exponent::finite(1.0).is_err());
        assert!(Exponent::finite(f64::NAN).is_err());
        assert_eq!(Exponent::finite(f64::INFINITY).unwrap(), Exponent::Infinite);
        let v = LpVector::new(Exponent::Infinite, vec![1.0, 2.0]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"exponent":"inf","coords":[1.0,2.0]}"#);
        let back: LpVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<LpVector>(r#"{"exponent":0.5,"coords":[]}"#).is_err());
    }

    #[test]
    fn rejects_non_finite_coordinates() {
        assert!(LpVector::new(Exponent::Finite(2.0), vec![f64::NAN]).is_err());
    }

    #[test]
    fn tiny_values_are_zeroed_before_powers() {
        assert_eq!(pow_abs(1e-310, 0.5), 0.0);
        assert_eq!(pow_abs(-2.0, 3.0), 8.0);
    }
}
