//! Report documents: exact values with their witnesses, as JSON or text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use toricap_core::capacity::{CapacityReport, Normalization, RelationVector, UpsilonBound};
use toricap_core::fan::{Fan, FanoVerdict};
use toricap_core::lattice::{rational_to_f64, IntMatrix, Rational, RationalVector, UnimodularMap};
use toricap_core::packing::{PackingCertificate, PackingPiece};
use toricap_core::polytope::{CertificateSource, DelzantPolytope};

use crate::document::{exact_vec, int_vec, DocumentKind, Exact};

/// An exact value, whether it is to be multiplied by 2π, and a decimal
/// rendering of the product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantity {
    pub exact: Exact,
    pub times_2pi: bool,
    pub decimal: String,
}

impl Quantity {
    pub fn new(value: &Rational, times_2pi: bool) -> Self {
        let scale = if times_2pi { 2.0 * std::f64::consts::PI } else { 1.0 };
        Self { exact: Exact(value.clone()), times_2pi, decimal: format!("{:.6}", rational_to_f64(value) * scale) }
    }

    pub fn with(value: &Rational, normalization: Normalization) -> Self {
        Self::new(value, normalization == Normalization::Polytope2Pi)
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.times_2pi {
            write!(f, "{} ×2π ≈ {}", self.exact, self.decimal)
        } else {
            write!(f, "{} ≈ {}", self.exact, self.decimal)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceBlock {
    pub kind: DocumentKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pruned_facets: Vec<usize>,
    #[serde(default)]
    pub blowups: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFigureDoc {
    pub vertex: Vec<Exact>,
    pub edges: Vec<Vec<i64>>,
    pub ratios: Vec<Exact>,
    pub e_p: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeBlock {
    pub facets: usize,
    pub vertices: Vec<Vec<Exact>>,
    pub volume: Exact,
    pub vertex_figures: Vec<VertexFigureDoc>,
}

impl PolytopeBlock {
    pub fn new(p: &DelzantPolytope) -> Self {
        Self {
            facets: p.facets().len(),
            vertices: p.vertices().iter().map(exact_vec).collect(),
            volume: Exact(p.volume()),
            vertex_figures: p
                .vertex_figures()
                .iter()
                .map(|f| VertexFigureDoc {
                    vertex: exact_vec(&f.vertex),
                    edges: f.edge_dirs.iter().map(int_vec).collect(),
                    ratios: f.ratios.iter().cloned().map(Exact).collect(),
                    e_p: Exact(f.e_p.clone()),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionDoc {
    pub generators: Vec<usize>,
    pub target_cone: Vec<usize>,
    pub relation: Vec<i64>,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflexiveDoc {
    pub r: Exact,
    pub m: Vec<Exact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoBlock {
    pub fano: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<CollectionDoc>,
    pub anticanonical_convex: bool,
    pub reflexive: Option<ReflexiveDoc>,
    pub primitive_collections: Vec<CollectionDoc>,
}

fn to_i64(v: &toricap_core::lattice::Int) -> i64 {
    i64::try_from(v).expect("small integer")
}

impl FanoBlock {
    pub fn new(fan: &Fan, verdict: &FanoVerdict, reflexive: Option<(Rational, RationalVector)>) -> Self {
        let d = fan.len();
        let doc = |p: &toricap_core::fan::PrimitiveCollection| CollectionDoc {
            generators: p.indices.clone(),
            target_cone: p.target_cone.clone(),
            relation: p.relation_vector(d).iter().map(to_i64).collect(),
            degree: to_i64(&p.degree),
        };
        Self {
            fano: verdict.fano,
            witness: verdict.witness.as_ref().map(doc),
            anticanonical_convex: verdict.anticanonical_convex,
            reflexive: reflexive.map(|(r, m)| ReflexiveDoc { r: Exact(r), m: exact_vec(&m) }),
            primitive_collections: fan.primitive_collections().expect("validated fan").iter().map(doc).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    /// Rows of the integer matrix.
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<Exact>,
}

impl MapDoc {
    pub fn new(map: &UnimodularMap) -> Self {
        Self {
            matrix: map.matrix().rows().iter().map(|r| r.iter().map(to_i64).collect()).collect(),
            translation: exact_vec(map.translation()),
        }
    }

    pub fn to_map(&self, strict_sl: bool) -> Result<UnimodularMap, String> {
        let matrix = IntMatrix::from_i64_rows(&self.matrix).map_err(|e| e.to_string())?;
        if !matrix.is_square() || matrix.nrows() != self.translation.len() {
            return Err("matrix must be square and match the translation".into());
        }
        UnimodularMap::new(matrix, crate::document::rational_vec(&self.translation), strict_sl).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthDoc {
    pub value: Quantity,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<Exact>>,
    pub map: MapDoc,
    pub weights: Vec<Exact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaDoc {
    pub value: Quantity,
    pub cap: Quantity,
    pub argmax: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsilonDoc {
    pub value: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Only a capacity bound for Fano fans.
    pub capacity_bound: bool,
    pub argmin: Vec<Vec<u64>>,
    pub basis_size: usize,
    pub zero_value_elements: bool,
    pub negative_value_elements: bool,
}

impl UpsilonDoc {
    fn new(result: &Result<UpsilonBound, toricap_core::capacity::CapacityError>, bound: bool, n: Normalization) -> Self {
        match result {
            Ok(u) => Self {
                value: Some(Quantity::with(&u.value, n)),
                error: None,
                capacity_bound: bound,
                argmin: u.argmin.iter().map(coeffs).collect(),
                basis_size: u.basis_size,
                zero_value_elements: u.zero_value_elements,
                negative_value_elements: u.negative_value_elements,
            },
            Err(e) => Self {
                value: None,
                error: Some(e.to_string()),
                capacity_bound: false,
                argmin: Vec::new(),
                basis_size: 0,
                zero_value_elements: false,
                negative_value_elements: false,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncestorDoc {
    pub generator_indices: Vec<usize>,
    pub ancestor_fano: bool,
    pub restricted_convex: bool,
    pub valid_bound: bool,
    pub upsilon: UpsilonDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityBlock {
    pub normalization: String,
    pub width_lower: WidthDoc,
    pub lambda: LambdaDoc,
    pub upsilon: UpsilonDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ancestor: Option<AncestorDoc>,
    pub best_upper: Quantity,
    /// Seshadri constant bound, always ×2π.
    pub seshadri_upper: Quantity,
    pub sandwich_closed: bool,
}

fn coeffs(r: &RelationVector) -> Vec<u64> {
    r.coeffs.clone()
}

impl CapacityBlock {
    pub fn new(report: &CapacityReport) -> Self {
        let n = report.normalization;
        let w = &report.width;
        Self {
            normalization: match n {
                Normalization::FanNormalized => "fan_normalized".into(),
                Normalization::Polytope2Pi => "polytope_2pi".into(),
            },
            width_lower: WidthDoc {
                value: Quantity::with(&w.value, n),
                source: match &w.source {
                    CertificateSource::VertexFigure(_) => "vertex_figure".into(),
                    CertificateSource::Search => "search".into(),
                },
                anchor: match &w.source {
                    CertificateSource::VertexFigure(p) => Some(exact_vec(p)),
                    CertificateSource::Search => None,
                },
                map: MapDoc::new(&w.map),
                weights: w.simplex.weights().iter().cloned().map(Exact).collect(),
            },
            lambda: LambdaDoc {
                value: Quantity::with(&report.lambda.value, n),
                cap: Quantity::with(&report.lambda.cap, n),
                argmax: report.lambda.argmax.iter().map(coeffs).collect(),
            },
            upsilon: UpsilonDoc::new(&report.upsilon, report.upsilon_is_capacity_bound(), n),
            ancestor: report.ancestor.as_ref().map(|a| AncestorDoc {
                generator_indices: a.generator_indices.clone(),
                ancestor_fano: a.ancestor_fano,
                restricted_convex: a.restricted_convex,
                valid_bound: a.is_valid_bound(),
                upsilon: UpsilonDoc::new(&a.upsilon, a.is_valid_bound(), n),
            }),
            best_upper: Quantity::with(&report.best_upper(), n),
            seshadri_upper: Quantity::new(&report.seshadri_upper(), true),
            sandwich_closed: report.sandwich_closed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipsoidDoc {
    pub capacity_weights: Vec<Exact>,
    pub epsilon_margin: Exact,
    pub radii: Vec<String>,
    pub radii_decimal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub map: MapDoc,
    pub weights: Vec<Exact>,
    pub ellipsoid: EllipsoidDoc,
}

impl PieceDoc {
    fn new(p: &PackingPiece) -> Self {
        Self {
            map: MapDoc::new(&p.map),
            weights: p.simplex.weights().iter().cloned().map(Exact).collect(),
            ellipsoid: EllipsoidDoc {
                capacity_weights: p.ellipsoid.capacity_weights.iter().cloned().map(Exact).collect(),
                epsilon_margin: Exact(p.ellipsoid.epsilon_margin.clone()),
                radii: p.ellipsoid.radii_symbolic(),
                radii_decimal: p.ellipsoid.radii_f64().iter().map(|r| format!("{r:.6}")).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingBlock {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Exact>,
    pub pieces: Vec<PieceDoc>,
    /// Filled share of the symplectic volume as `ε → 0`.
    pub fraction: Quantity,
}

impl PackingBlock {
    pub fn new(cert: &PackingCertificate, vertices: &[RationalVector], epsilon: Option<&Rational>) -> Self {
        Self {
            vertices: vertices.iter().map(exact_vec).collect(),
            epsilon: epsilon.cloned().map(Exact),
            pieces: cert.pieces.iter().map(PieceDoc::new).collect(),
            fraction: Quantity::new(&cert.fraction, false),
        }
    }
}

/// Disagreement between a computed value and a published one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub published: String,
    pub computed: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub source: SourceBlock,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fano: Option<FanoBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CapacityBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packing: Option<PackingBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<Discrepancy>,
}

fn point(v: &[Exact]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn relation(v: &[u64]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |key: &str, value: String| {
            let _ = writeln!(out, "{key:<22}{value}");
        };
        let kind = match self.source.kind {
            DocumentKind::Polytope => "polytope",
            DocumentKind::Fan => "fan",
        };
        let mut source = format!("{kind}, dim {}", self.source.dim);
        if let Some(f) = &self.source.fixture {
            source = format!("fixture {f} ({source})");
        }
        line("input", source);
        if !self.source.pruned_facets.is_empty() {
            line("pruned facets", format!("{:?}", self.source.pruned_facets));
        }
        if self.source.blowups > 0 {
            line("blow-ups", self.source.blowups.to_string());
        }
        line("valid", if self.valid { "yes".into() } else { "no".into() });
        if let Some(p) = &self.polytope {
            line("facets", p.facets.to_string());
            line("vertices", p.vertices.len().to_string());
            for v in &p.vertices {
                line("", point(v));
            }
            line("volume", p.volume.to_string());
            let e: Vec<String> = p.vertex_figures.iter().map(|f| format!("{}: {}", point(&f.vertex), f.e_p)).collect();
            line("E_p", e.join(", "));
        }
        if let Some(f) = &self.fano {
            let verdict = match &f.witness {
                None => "yes".to_string(),
                Some(w) => format!("no (collection {:?} has degree {})", w.generators, w.degree),
            };
            line("fano", verdict);
            for c in &f.primitive_collections {
                line("primitive collection", format!("{:?} degree {}", c.generators, c.degree));
            }
            match &f.reflexive {
                Some(r) => line("reflexive rescaling", format!("r = {}, m = {}", r.r, point(&r.m))),
                None => line("reflexive rescaling", "none".into()),
            }
        }
        if let Some(c) = &self.capacity {
            line("normalization", c.normalization.clone());
            let w = &c.width_lower;
            let at = w.anchor.as_ref().map(|a| format!(" at {}", point(a))).unwrap_or_default();
            line("width lower bound", format!("{} ({}{at})", w.value, w.source));
            line("lambda", c.lambda.value.to_string());
            for a in &c.lambda.argmax {
                line("  argmax", relation(a));
            }
            match (&c.upsilon.value, &c.upsilon.error) {
                (Some(v), _) => {
                    let tag = if c.upsilon.capacity_bound { "" } else { " (not a capacity bound: not Fano)" };
                    line("upsilon", format!("{v}{tag}"));
                    for a in &c.upsilon.argmin {
                        line("  argmin", relation(a));
                    }
                }
                (None, Some(e)) => line("upsilon", format!("unavailable: {e}")),
                (None, None) => line("upsilon", "unavailable".into()),
            }
            if let Some(a) = &c.ancestor {
                let v = a.upsilon.value.as_ref().map(|q| q.to_string()).unwrap_or_else(|| "unavailable".into());
                line("ancestor upsilon", format!("{v} (valid bound: {})", if a.valid_bound { "yes" } else { "no" }));
            }
            line("best upper bound", c.best_upper.to_string());
            line("seshadri upper", c.seshadri_upper.to_string());
            line("sandwich closed", if c.sandwich_closed { "yes".into() } else { "no".into() });
        }
        if let Some(p) = &self.packing {
            line("pieces", p.pieces.len().to_string());
            for piece in &p.pieces {
                line("  ellipsoid", format!("E({})", piece.ellipsoid.radii.join(", ")));
            }
            line("packed fraction", p.fraction.to_string());
        }
        for d in &self.discrepancies {
            line("discrepancy", format!("{}: published {}, computed {}", d.quantity, d.published, d.computed));
            line("", d.note.clone());
        }
        out
    }
}
