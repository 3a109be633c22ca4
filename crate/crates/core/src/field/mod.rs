//! Exact valued-field backends.
//!
//! Two computable fields stand in for an algebraically closed valued field:
//!
//! * `RatFunc` — rational functions `Q(t)` with the `t`-adic valuation
//!   (value group `Z`), fully exact;
//! * `Puiseux` — truncated Puiseux series (value group `Q`), exact up to a
//!   per-element precision budget.
//!
//! Every algorithm in this crate is field-agnostic and only uses the valued
//! field interface below, so working over these non-closed subfields is
//! sound. The residue field is `Q` in both cases, which is infinite and of
//! characteristic 0 — enough for every linear-independence test performed on
//! residues. Operations that need `t^γ` check that `γ` lies in the backend's
//! value group and fail with `VALUE_GROUP` otherwise.

mod puiseux;
mod ratfunc;

pub use puiseux::{Prec, Puiseux};
pub use ratfunc::RatFunc;

use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{GammaVal, Rat};

/// Which exact field an element lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Backend {
    RatFunc,
    Puiseux,
}

impl Backend {
    /// Whether `γ` lies in this backend's value group (`Z` resp. `Q`).
    pub fn contains_gamma(&self, gamma: &Rat) -> bool {
        match self {
            Backend::RatFunc => gamma.is_integer(),
            Backend::Puiseux => true,
        }
    }

    pub fn check_gamma(&self, gamma: &Rat) -> Result<()> {
        if self.contains_gamma(gamma) {
            Ok(())
        } else {
            Err(Error::ValueGroup(gamma.to_string()))
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::RatFunc => write!(f, "ratfunc"),
            Backend::Puiseux => write!(f, "puiseux"),
        }
    }
}

/// An element of one of the valued-field backends.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldElem {
    RatFunc(RatFunc),
    Puiseux(Puiseux),
}

impl FieldElem {
    pub fn backend(&self) -> Backend {
        match self {
            FieldElem::RatFunc(_) => Backend::RatFunc,
            FieldElem::Puiseux(_) => Backend::Puiseux,
        }
    }

    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::RatFunc => FieldElem::RatFunc(RatFunc::zero()),
            Backend::Puiseux => FieldElem::Puiseux(Puiseux::zero()),
        }
    }

    pub fn one(backend: Backend) -> Self {
        match backend {
            Backend::RatFunc => FieldElem::RatFunc(RatFunc::one()),
            Backend::Puiseux => FieldElem::Puiseux(Puiseux::one()),
        }
    }

    pub fn from_rat(backend: Backend, q: Rat) -> Self {
        match backend {
            Backend::RatFunc => FieldElem::RatFunc(RatFunc::from_rat(q)),
            Backend::Puiseux => FieldElem::Puiseux(Puiseux::from_rat(q)),
        }
    }

    /// `t^γ`; fails when `γ` is outside the backend value group.
    pub fn t_pow(backend: Backend, gamma: &Rat) -> Result<Self> {
        backend.check_gamma(gamma)?;
        Ok(match backend {
            Backend::RatFunc => FieldElem::RatFunc(RatFunc::t_pow(gamma.to_i64()?)),
            Backend::Puiseux => FieldElem::Puiseux(Puiseux::t_pow(gamma.clone())),
        })
    }

    fn pair<'a>(&'a self, rhs: &'a FieldElem, op: &str) -> Result<Paired<'a>> {
        match (self, rhs) {
            (FieldElem::RatFunc(a), FieldElem::RatFunc(b)) => Ok(Paired::RatFunc(a, b)),
            (FieldElem::Puiseux(a), FieldElem::Puiseux(b)) => Ok(Paired::Puiseux(a, b)),
            _ => Err(Error::BackendMismatch(format!(
                "{op} over {} and {}",
                self.backend(),
                rhs.backend()
            ))),
        }
    }

    pub fn add(&self, rhs: &FieldElem) -> Result<FieldElem> {
        Ok(match self.pair(rhs, "add")? {
            Paired::RatFunc(a, b) => FieldElem::RatFunc(a.add(b)),
            Paired::Puiseux(a, b) => FieldElem::Puiseux(a.add(b)),
        })
    }

    pub fn sub(&self, rhs: &FieldElem) -> Result<FieldElem> {
        Ok(match self.pair(rhs, "sub")? {
            Paired::RatFunc(a, b) => FieldElem::RatFunc(a.sub(b)),
            Paired::Puiseux(a, b) => FieldElem::Puiseux(a.sub(b)),
        })
    }

    pub fn mul(&self, rhs: &FieldElem) -> Result<FieldElem> {
        Ok(match self.pair(rhs, "mul")? {
            Paired::RatFunc(a, b) => FieldElem::RatFunc(a.mul(b)),
            Paired::Puiseux(a, b) => FieldElem::Puiseux(a.mul(b)),
        })
    }

    pub fn div(&self, rhs: &FieldElem) -> Result<FieldElem> {
        Ok(match self.pair(rhs, "div")? {
            Paired::RatFunc(a, b) => FieldElem::RatFunc(a.div(b)?),
            Paired::Puiseux(a, b) => FieldElem::Puiseux(a.div(b)?),
        })
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::RatFunc(a) => FieldElem::RatFunc(a.neg()),
            FieldElem::Puiseux(a) => FieldElem::Puiseux(a.neg()),
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(match self {
            FieldElem::RatFunc(a) => FieldElem::RatFunc(a.inv()?),
            FieldElem::Puiseux(a) => FieldElem::Puiseux(a.inv()?),
        })
    }

    pub fn scale(&self, q: &Rat) -> FieldElem {
        match self {
            FieldElem::RatFunc(a) => FieldElem::RatFunc(a.scale(q)),
            FieldElem::Puiseux(a) => FieldElem::Puiseux(a.scale(q)),
        }
    }

    /// Whether the element is zero. On the Puiseux backend this can be
    /// undecidable at the stored precision.
    pub fn is_zero(&self) -> Result<bool> {
        match self {
            FieldElem::RatFunc(a) => Ok(a.is_zero()),
            FieldElem::Puiseux(a) => a.is_zero(),
        }
    }

    pub fn val(&self) -> Result<GammaVal> {
        match self {
            FieldElem::RatFunc(a) => Ok(a.val()),
            FieldElem::Puiseux(a) => a.val(),
        }
    }

    pub fn residue(&self) -> Result<Rat> {
        match self {
            FieldElem::RatFunc(a) => a.residue(),
            FieldElem::Puiseux(a) => a.residue(),
        }
    }

    /// Truncation of the `t`-adic expansion below `t^cutoff`: the canonical
    /// representative modulo `t^cutoff·O`. On the `Q(t)` backend the cutoff
    /// must be an integer.
    pub fn section(&self, cutoff: &Rat) -> Result<FieldElem> {
        match self {
            FieldElem::RatFunc(a) => {
                Backend::RatFunc.check_gamma(cutoff)?;
                Ok(FieldElem::RatFunc(a.section(cutoff.to_i64()?)))
            }
            FieldElem::Puiseux(a) => Ok(FieldElem::Puiseux(a.section(cutoff)?)),
        }
    }

    /// Canonical representative modulo `t^cutoff·M` (keeps the exponent-
    /// `cutoff` term). Used by coset coding with strict thresholds.
    pub fn section_strict(&self, cutoff: &Rat) -> Result<FieldElem> {
        match self {
            FieldElem::RatFunc(a) => {
                // t^γ·M ∩ Q(t) = t^(floor(γ)+1)·O by discreteness.
                let c = cutoff.floor().to_i64()? + 1;
                Ok(FieldElem::RatFunc(a.section(c)))
            }
            FieldElem::Puiseux(a) => Ok(FieldElem::Puiseux(a.section_closed(cutoff)?)),
        }
    }

    /// Canonical representative modulo `t^γ·O` where the reduction set is
    /// intersected with the backend field (relevant for non-integer `γ`
    /// over `Q(t)`).
    pub fn section_in_field(&self, cutoff: &Rat) -> Result<FieldElem> {
        match self {
            FieldElem::RatFunc(a) => Ok(FieldElem::RatFunc(a.section(cutoff.ceil().to_i64()?))),
            FieldElem::Puiseux(a) => Ok(FieldElem::Puiseux(a.section(cutoff)?)),
        }
    }
}

enum Paired<'a> {
    RatFunc(&'a RatFunc, &'a RatFunc),
    Puiseux(&'a Puiseux, &'a Puiseux),
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::RatFunc(a) => write!(f, "{a}"),
            FieldElem::Puiseux(a) => write!(f, "{a}"),
        }
    }
}

// --- JSON wire format ----------------------------------------------------
//
// RatFunc: {"num": [["p/q", e], ...], "den": [["p/q", e], ...]}  (e: integer)
// Puiseux: {"terms": [["p/q", "e"], ...], "prec": "r/s" | "exact"}

fn poly_to_pairs(p: &Poly) -> Vec<(String, u64)> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (c.to_string(), k as u64))
        .collect()
}

fn poly_from_pairs(pairs: Vec<(String, u64)>) -> std::result::Result<Poly, Error> {
    let mut p = Poly::zero();
    for (c, e) in pairs {
        let c: Rat = c.parse()?;
        p = p.add(&Poly::monomial(c, e as usize));
    }
    Ok(p)
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FieldElem::RatFunc(x) => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("num", &poly_to_pairs(x.num()))?;
                map.serialize_entry("den", &poly_to_pairs(x.den()))?;
                map.end()
            }
            FieldElem::Puiseux(x) => {
                let terms: Vec<(String, String)> = x
                    .terms()
                    .iter()
                    .map(|(c, e)| (c.to_string(), e.to_string()))
                    .collect();
                let prec = match x.prec() {
                    Prec::Exact => "exact".to_string(),
                    Prec::Bound(b) => b.to_string(),
                };
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("terms", &terms)?;
                map.serialize_entry("prec", &prec)?;
                map.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldElemRepr {
    RatFunc {
        num: Vec<(String, u64)>,
        den: Vec<(String, u64)>,
    },
    Puiseux {
        terms: Vec<(String, String)>,
        prec: String,
    },
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldElemRepr::deserialize(deserializer)?;
        match repr {
            FieldElemRepr::RatFunc { num, den } => {
                let num = poly_from_pairs(num).map_err(|e| D::Error::custom(e.to_string()))?;
                let den = poly_from_pairs(den).map_err(|e| D::Error::custom(e.to_string()))?;
                let x = RatFunc::new(num, den).map_err(|e| D::Error::custom(e.to_string()))?;
                Ok(FieldElem::RatFunc(x))
            }
            FieldElemRepr::Puiseux { terms, prec } => {
                let prec = if prec == "exact" {
                    Prec::Exact
                } else {
                    Prec::Bound(prec.parse().map_err(|e: Error| D::Error::custom(e.to_string()))?)
                };
                let mut parsed = Vec::with_capacity(terms.len());
                for (c, e) in terms {
                    let c: Rat = c.parse().map_err(|e: Error| D::Error::custom(e.to_string()))?;
                    let e: Rat = e.parse().map_err(|e: Error| D::Error::custom(e.to_string()))?;
                    parsed.push((c, e));
                }
                Ok(FieldElem::Puiseux(Puiseux::new(parsed, prec)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> FieldElem {
        FieldElem::t_pow(Backend::RatFunc, &Rat::one()).unwrap()
    }

    #[test]
    fn value_group_checks() {
        assert!(FieldElem::t_pow(Backend::RatFunc, &Rat::new(1, 2)).is_err());
        assert!(FieldElem::t_pow(Backend::Puiseux, &Rat::new(1, 2)).is_ok());
    }

    #[test]
    fn backend_mismatch_detected() {
        let a = t();
        let b = FieldElem::one(Backend::Puiseux);
        assert!(matches!(a.add(&b), Err(Error::BackendMismatch(_))));
    }

    #[test]
    fn json_round_trip_ratfunc() {
        let x = FieldElem::one(Backend::RatFunc)
            .add(&t())
            .unwrap()
            .div(&FieldElem::from_rat(Backend::RatFunc, Rat::from_int(2)).sub(&t()).unwrap())
            .unwrap();
        let s = serde_json::to_string(&x).unwrap();
        let y: FieldElem = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&y).unwrap(), s);
    }

    #[test]
    fn json_round_trip_puiseux() {
        let x = FieldElem::Puiseux(Puiseux::new(
            vec![(Rat::new(3, 1), Rat::new(1, 2)), (Rat::one(), Rat::one())],
            Prec::Bound(Rat::new(7, 3)),
        ));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"terms":[["3","1/2"],["1","1"]],"prec":"7/3"}"#
        );
        let y: FieldElem = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let z = FieldElem::zero(Backend::Puiseux);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"terms":[],"prec":"exact"}"#);
        assert_eq!(serde_json::from_str::<FieldElem>(&s).unwrap(), z);
    }
}
