//! JSON input documents and their conversion to core types.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use toricap_core::fan::{Fan, FanError, SupportFunction};
use toricap_core::lattice::{format_rational, parse_rational, LatticeVector, Rational, RationalVector};
use toricap_core::polytope::{DelzantPolytope, Facet, PolytopeError};

use crate::error::CliError;

/// A rational carried as the string `"p/q"`; integers are also accepted on
/// input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                parse_rational(v).map(Exact).map_err(|e| E::custom(format!("{v:?}: {e}")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

pub fn exact_vec(v: &RationalVector) -> Vec<Exact> {
    v.coords().iter().cloned().map(Exact).collect()
}

pub fn rational_vec(v: &[Exact]) -> RationalVector {
    RationalVector::new(v.iter().map(|x| x.0.clone()).collect())
}

/// Integer vector as `i64`s; the documents never need more.
pub fn int_vec(v: &LatticeVector) -> Vec<i64> {
    v.to_i64().expect("coordinates fit in i64")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Polytope,
    Fan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetDoc {
    pub normal: Vec<i64>,
    pub offset: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupDoc {
    pub parent: Vec<FacetDoc>,
    pub vertex: Vec<Exact>,
    pub epsilon: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub kind: DocumentKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<FacetDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cones: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Exact>>,
    /// Blow-ups that produced this polytope, oldest first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ancestry: Vec<BlowupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

/// A document after shape checks and mathematical validation.
#[derive(Clone, Debug)]
pub enum Parsed {
    Polytope { polytope: DelzantPolytope, dropped: Vec<usize>, ancestry: Vec<BlowupDoc> },
    Fan { fan: Fan, phi: SupportFunction },
}

pub fn facet_docs(facets: &[Facet]) -> Vec<FacetDoc> {
    facets
        .iter()
        .map(|f| FacetDoc { normal: int_vec(&f.normal), offset: Exact(f.offset.clone()) })
        .collect()
}

fn facets_from_docs(dim: usize, docs: &[FacetDoc]) -> Result<Vec<Facet>, CliError> {
    docs.iter()
        .enumerate()
        .map(|(k, f)| {
            if f.normal.len() != dim {
                return Err(CliError::Parse(format!("facet {k}: normal has {} entries, expected {dim}", f.normal.len())));
            }
            Ok(Facet::new(LatticeVector::from_i64(&f.normal), f.offset.0.clone()))
        })
        .collect()
}

pub fn polytope_from_docs(dim: usize, docs: &[FacetDoc], prune: bool) -> Result<(DelzantPolytope, Vec<usize>), CliError> {
    let facets = facets_from_docs(dim, docs)?;
    DelzantPolytope::build(facets, prune).map_err(polytope_error)
}

pub fn polytope_error(e: PolytopeError) -> CliError {
    match e {
        PolytopeError::DimensionMismatch { .. } => CliError::Parse(e.to_string()),
        other => CliError::Validation { message: other.to_string(), diagnostics: Vec::new() },
    }
}

pub fn fan_error(e: FanError) -> CliError {
    match e {
        FanError::DimensionMismatch { .. }
        | FanError::ConeSize { .. }
        | FanError::IndexOutOfRange { .. }
        | FanError::SupportLength { .. } => CliError::Parse(e.to_string()),
        FanError::Invalid(diagnostics) => CliError::Validation {
            message: "fan is not complete and regular".into(),
            diagnostics: diagnostics.iter().map(|d| d.to_string()).collect(),
        },
        other => CliError::Validation { message: other.to_string(), diagnostics: Vec::new() },
    }
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn polytope(polytope: &DelzantPolytope) -> Self {
        Self {
            kind: DocumentKind::Polytope,
            dim: polytope.dim(),
            facets: Some(facet_docs(polytope.facets())),
            generators: None,
            max_cones: None,
            support: None,
            ancestry: Vec::new(),
            fixture: None,
        }
    }

    pub fn fan(fan: &Fan, phi: &SupportFunction) -> Self {
        Self {
            kind: DocumentKind::Fan,
            dim: fan.dim(),
            facets: None,
            generators: Some(fan.generators().iter().map(int_vec).collect()),
            max_cones: Some(fan.max_cones().to_vec()),
            support: Some(phi.values().iter().cloned().map(Exact).collect()),
            ancestry: Vec::new(),
            fixture: None,
        }
    }

    fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        field.as_ref().ok_or_else(|| CliError::Parse(format!("missing field `{name}`")))
    }

    pub fn parse(&self, prune: bool) -> Result<Parsed, CliError> {
        if self.dim == 0 {
            return Err(CliError::Parse("dim must be positive".into()));
        }
        match self.kind {
            DocumentKind::Polytope => {
                if self.generators.is_some() || self.max_cones.is_some() || self.support.is_some() {
                    return Err(CliError::Parse("polytope documents take `facets` only".into()));
                }
                let (polytope, dropped) = polytope_from_docs(self.dim, Self::require(&self.facets, "facets")?, prune)?;
                for (k, step) in self.ancestry.iter().enumerate() {
                    if step.vertex.len() != self.dim {
                        return Err(CliError::Parse(format!("ancestry {k}: vertex has the wrong dimension")));
                    }
                    facets_from_docs(self.dim, &step.parent)?;
                }
                Ok(Parsed::Polytope { polytope, dropped, ancestry: self.ancestry.clone() })
            }
            DocumentKind::Fan => {
                if self.facets.is_some() || !self.ancestry.is_empty() {
                    return Err(CliError::Parse("fan documents take `generators`, `max_cones`, `support`".into()));
                }
                let gens = Self::require(&self.generators, "generators")?;
                for (k, g) in gens.iter().enumerate() {
                    if g.len() != self.dim {
                        return Err(CliError::Parse(format!("generator {k} has {} entries, expected {}", g.len(), self.dim)));
                    }
                }
                let gens = gens.iter().map(|g| LatticeVector::from_i64(g)).collect();
                let cones = Self::require(&self.max_cones, "max_cones")?.clone();
                let support = Self::require(&self.support, "support")?;
                let fan = Fan::new(self.dim, gens, cones).map_err(fan_error)?;
                if support.len() != fan.len() {
                    return Err(CliError::Parse(format!(
                        "support has {} values for {} generators",
                        support.len(),
                        fan.len()
                    )));
                }
                let fan = fan.validated().map_err(fan_error)?;
                let phi = SupportFunction::new(support.iter().map(|x| x.0.clone()).collect());
                Ok(Parsed::Fan { fan, phi })
            }
        }
    }
}
