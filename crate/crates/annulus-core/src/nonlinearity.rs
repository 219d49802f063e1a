//! Source terms f(u) for the semilinear problem: nonnegative and
//! nonincreasing on the attained solution range.

use serde::{Deserialize, Serialize};

/// The implemented families. `f(u) >= 0` holds by construction for
/// `Constant` and `ExpDecreasing`; for `AffineDecreasing` it is checked
/// against the attained range after the solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Nonlinearity {
    /// f(u) = c, c >= 0.
    Constant { c: f64 },
    /// f(u) = c0 - c1 u, c0 > 0, c1 >= 0.
    AffineDecreasing { c0: f64, c1: f64 },
    /// f(u) = c0 exp(-c1 u), c0 > 0, c1 >= 0.
    ExpDecreasing { c0: f64, c1: f64 },
}

impl Nonlinearity {
    pub fn constant(c: f64) -> Self {
        Nonlinearity::Constant { c }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        match *self {
            Nonlinearity::Constant { c } => {
                if !(c >= 0.0) {
                    v.push("Constant requires c >= 0".into());
                }
            }
            Nonlinearity::AffineDecreasing { c0, c1 }
            | Nonlinearity::ExpDecreasing { c0, c1 } => {
                if !(c0 > 0.0) {
                    v.push("c0 > 0 violated".into());
                }
                if !(c1 >= 0.0) {
                    v.push("c1 >= 0 violated".into());
                }
            }
        }
        v
    }

    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            Nonlinearity::Constant { c } => c,
            Nonlinearity::AffineDecreasing { c0, c1 } => c0 - c1 * u,
            Nonlinearity::ExpDecreasing { c0, c1 } => c0 * (-c1 * u).exp(),
        }
    }

    /// f'(u); nonpositive everywhere for every family.
    pub fn deriv(&self, u: f64) -> f64 {
        match *self {
            Nonlinearity::Constant { .. } => 0.0,
            Nonlinearity::AffineDecreasing { c1, .. } => -c1,
            Nonlinearity::ExpDecreasing { c0, c1 } => -c0 * c1 * (-c1 * u).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_nonincreasing() {
        let fams = [
            Nonlinearity::constant(1.0),
            Nonlinearity::AffineDecreasing { c0: 2.0, c1: 0.5 },
            Nonlinearity::ExpDecreasing { c0: 1.0, c1: 1.0 },
        ];
        for f in fams {
            assert!(f.validate().is_empty());
            for k in 0..20 {
                let u = 0.3 * k as f64;
                assert!(f.deriv(u) <= 0.0);
                assert!(f.eval(u + 0.1) <= f.eval(u) + 1e-15);
            }
        }
    }

    #[test]
    fn json_kind_tagging() {
        let f: Nonlinearity = serde_json::from_str(r#"{"kind":"Constant","c":1.0}"#).unwrap();
        assert_eq!(f, Nonlinearity::constant(1.0));
        let bad: Result<Nonlinearity, _> =
            serde_json::from_str(r#"{"kind":"Constant","c":1.0,"zz":2}"#);
        assert!(bad.is_err());
    }
}
