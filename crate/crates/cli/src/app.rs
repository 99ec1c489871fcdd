//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use toricap_core::capacity::{capacity_report, CapacityError, CapacityInput, ReportOptions};
use toricap_core::constructions::{
    blowup_at_vertex, fixture, lambda_apol_closed_form, lambda_up_closed_form, pol_reduction, polygon_apol_space,
    polygon_up_space, ConstructionError, Fixture, FixtureName, PolygonPolytope, PolygonWeights,
};
use toricap_core::capacity::lambda_bound;
use toricap_core::fan::normal_fan;
use toricap_core::lattice::{parse_rational, Rational, RationalVector};
use toricap_core::packing::{theorem_6_4_certificate, verify_general_packing, PackingError};
use toricap_core::polytope::{DelzantPolytope, SimplexSpec, WidthSearch};

use crate::document::{
    exact_vec, facet_docs, fan_error, polytope_error, polytope_from_docs, BlowupDoc, DocumentKind, Exact,
    InputDocument, Parsed,
};
use crate::error::CliError;
use crate::published::{self, Computed};
use crate::report::{CapacityBlock, FanoBlock, MapDoc, PackingBlock, PolytopeBlock, ReportDocument, SourceBlock};

#[derive(Parser, Debug)]
#[command(name = "toricap", version, about = "Exact capacity bounds for smooth toric manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: GlobalOptions,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOptions {
    /// Machine-readable JSON only.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest absolute entry of extra matrix columns tried by the width search.
    #[arg(long, global = true, default_value_t = 3)]
    pub search_budget: u32,
    /// Norm bound for the Hilbert basis completion.
    #[arg(long, global = true, default_value_t = toricap_core::capacity::DEFAULT_NORM_CAP)]
    pub norm_cap: u64,
    /// Drop redundant facets instead of rejecting them.
    #[arg(long, global = true)]
    pub prune: bool,
    /// Require certificate matrices of determinant +1.
    #[arg(long, global = true)]
    pub strict_sl: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a document and report Fano data and capacity bounds.
    Analyze {
        file: Option<PathBuf>,
        /// Analyze a named fixture instead of a file.
        #[arg(long, conflicts_with = "file")]
        fixture: Option<String>,
    },
    /// Cut off a vertex of a polytope document.
    Blowup {
        file: PathBuf,
        /// Vertex coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        vertex: String,
        #[arg(long)]
        eps: String,
    },
    /// Packing certificates from separated vertices, or verification of given pieces.
    Pack {
        #[arg(required_unless_present = "verify")]
        file: Option<PathBuf>,
        /// Vertices separated by `;`, coordinates by `,`.
        #[arg(long, allow_hyphen_values = true, requires = "file")]
        vertices: Option<String>,
        #[arg(long, requires = "vertices")]
        eps: Option<String>,
        /// Pieces file to verify.
        #[arg(long, conflicts_with_all = ["file", "vertices"])]
        verify: Option<PathBuf>,
    },
    /// Polygon-space polytopes and their closed-form Λ.
    Polygon {
        /// Weights, comma separated.
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Space::Up)]
        space: Space,
    },
    /// Print the input document of a named fixture.
    Fixture { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Up,
    Apol,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let CliError::Validation { diagnostics, .. } = &e {
                for d in diagnostics {
                    let _ = writeln!(err, "  {d}");
                }
            }
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let o = &cli.options;
    match &cli.command {
        Command::Analyze { file, fixture } => {
            let doc = match (file, fixture) {
                (Some(path), None) => read_document(path)?,
                (None, Some(name)) => fixture_document(name)?,
                _ => return Err(CliError::Usage("analyze needs a file or --fixture <name>".into())),
            };
            let report = analyze(&doc, o)?;
            Ok(if o.json { report.to_json() } else { report.to_text() })
        }
        Command::Blowup { file, vertex, eps } => {
            let doc = read_document(file)?;
            let p = parse_point(vertex)?;
            let eps = parse_value(eps)?;
            Ok(blowup(&doc, &p, &eps, o)?.to_json())
        }
        Command::Pack { file, vertices, eps, verify } => {
            let report = match (file, verify) {
                (_, Some(pieces)) => pack_verify(&read_text(pieces)?, o)?,
                (Some(path), None) => {
                    let vertices = vertices.as_deref().ok_or_else(|| CliError::Usage("pack needs --vertices".into()))?;
                    let eps = eps.as_deref().ok_or_else(|| CliError::Usage("pack needs --eps".into()))?;
                    let points = parse_points(vertices)?;
                    pack(&read_document(path)?, &points, &parse_value(eps)?, o)?
                }
                (None, None) => return Err(CliError::Usage("pack needs a file or --verify".into())),
            };
            Ok(if o.json { report.to_json() } else { report.to_text() })
        }
        Command::Polygon { alpha, space } => {
            let weights = parse_list(alpha)?;
            let out = polygon(&weights, *space)?;
            Ok(if o.json { out.to_json() } else { out.to_text() })
        }
        Command::Fixture { name } => Ok(fixture_document(name)?.to_json()),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> Result<InputDocument, CliError> {
    InputDocument::from_json(&read_text(path)?)
}

fn parse_value(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Parse(format!("{text:?}: {e}")))
}

fn parse_list(text: &str) -> Result<Vec<Rational>, CliError> {
    if text.trim().is_empty() {
        return Err(CliError::Usage("empty list".into()));
    }
    text.split(',').map(parse_value).collect()
}

fn parse_point(text: &str) -> Result<RationalVector, CliError> {
    parse_list(text).map(RationalVector::new)
}

fn parse_points(text: &str) -> Result<Vec<RationalVector>, CliError> {
    let points: Vec<&str> = text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    if points.is_empty() {
        return Err(CliError::Usage("--vertices lists no vertex".into()));
    }
    points.into_iter().map(parse_point).collect()
}

pub fn fixture_document(name: &str) -> Result<InputDocument, CliError> {
    let id: FixtureName = name.parse().map_err(|e: ConstructionError| CliError::Usage(e.to_string()))?;
    let mut doc = match fixture(id).map_err(|e| CliError::validation(e.to_string()))? {
        Fixture::Fan(fan, phi) => InputDocument::fan(&fan, &phi),
        Fixture::Polytope(p) => InputDocument::polytope(&p),
    };
    doc.fixture = Some(id.as_str().to_string());
    Ok(doc)
}

fn report_options(o: &GlobalOptions) -> ReportOptions {
    ReportOptions {
        width: WidthSearch { entry_bound: o.search_budget, strict_sl: o.strict_sl, ..WidthSearch::default() },
        norm_cap: o.norm_cap,
        ancestor: None,
    }
}

fn capacity_error(e: CapacityError) -> CliError {
    match e {
        CapacityError::Fan(f) => fan_error(f),
        other => CliError::validation(other.to_string()),
    }
}

fn fixture_name(doc: &InputDocument) -> Option<FixtureName> {
    doc.fixture.as_deref().and_then(|f| f.parse().ok())
}

/// The full report for a document.
pub fn analyze(doc: &InputDocument, o: &GlobalOptions) -> Result<ReportDocument, CliError> {
    let parsed = doc.parse(o.prune)?;
    let mut options = report_options(o);
    let (report, polytope, dropped) = match &parsed {
        Parsed::Polytope { polytope, dropped, ancestry } => {
            if let Some(first) = ancestry.first() {
                let (root, _) = polytope_from_docs(doc.dim, &first.parent, false)?;
                options.ancestor = Some(normal_fan(&root).0);
            }
            let report = capacity_report(CapacityInput::Polytope(polytope), &options).map_err(capacity_error)?;
            (report, polytope.clone(), dropped.clone())
        }
        Parsed::Fan { fan, phi } => {
            let report = capacity_report(CapacityInput::Fan(fan, phi), &options).map_err(capacity_error)?;
            let polytope = fan.polytope_from_support(phi).map_err(fan_error)?;
            (report, polytope, Vec::new())
        }
    };
    let fano = FanoBlock::new(&report.fan, &report.fano, polytope.reflexive_normalization());
    let mut out = ReportDocument {
        source: SourceBlock {
            kind: doc.kind,
            dim: doc.dim,
            fixture: doc.fixture.clone(),
            pruned_facets: dropped,
            blowups: doc.ancestry.len(),
        },
        valid: true,
        polytope: Some(PolytopeBlock::new(&polytope)),
        fano: Some(fano),
        capacity: Some(CapacityBlock::new(&report)),
        packing: None,
        discrepancies: Vec::new(),
    };
    if let Some(id) = fixture_name(doc) {
        let upsilon = report.upsilon.as_ref().ok().map(|u| &u.value);
        out.discrepancies = published::discrepancies(
            id,
            &Computed {
                lambda: Some(&report.lambda.value),
                upsilon,
                width: Some(&report.width.value),
                vertices: polytope.vertices(),
                max_cones: report.fan.max_cones().len(),
            },
        );
    }
    Ok(out)
}

fn host_polytope(doc: &InputDocument, o: &GlobalOptions) -> Result<DelzantPolytope, CliError> {
    match doc.parse(o.prune)? {
        Parsed::Polytope { polytope, .. } => Ok(polytope),
        Parsed::Fan { fan, phi } => fan.polytope_from_support(&phi).map_err(fan_error),
    }
}

pub fn blowup(doc: &InputDocument, p: &RationalVector, eps: &Rational, o: &GlobalOptions) -> Result<InputDocument, CliError> {
    if doc.kind != DocumentKind::Polytope {
        return Err(CliError::Usage("blowup takes a polytope document".into()));
    }
    if p.dim() != doc.dim {
        return Err(CliError::Parse(format!("vertex has {} coordinates, expected {}", p.dim(), doc.dim)));
    }
    let parent = host_polytope(doc, o)?;
    let record = blowup_at_vertex(&parent, p, eps).map_err(|e| match e {
        ConstructionError::Polytope(pe) => polytope_error(pe),
        other => CliError::validation(other.to_string()),
    })?;
    let mut out = InputDocument::polytope(&record.child);
    out.ancestry = doc.ancestry.clone();
    out.ancestry.push(BlowupDoc { parent: facet_docs(parent.facets()), vertex: exact_vec(p), epsilon: Exact(eps.clone()) });
    Ok(out)
}

fn packing_error(e: PackingError, vertices: &[RationalVector]) -> CliError {
    match e {
        PackingError::NotSeparating { first, second } => CliError::validation(format!(
            "vertices {} and {} (positions {first} and {second}) are not simplicially separating",
            vertices[first], vertices[second]
        )),
        other => CliError::validation(other.to_string()),
    }
}

pub fn pack(doc: &InputDocument, vertices: &[RationalVector], eps: &Rational, o: &GlobalOptions) -> Result<ReportDocument, CliError> {
    if vertices.is_empty() {
        return Err(CliError::Usage("--vertices lists no vertex".into()));
    }
    if let Some(v) = vertices.iter().find(|v| v.dim() != doc.dim) {
        return Err(CliError::Parse(format!("vertex {v} has the wrong dimension")));
    }
    let host = host_polytope(doc, o)?;
    let cert = theorem_6_4_certificate(&host, vertices, eps).map_err(|e| packing_error(e, vertices))?;
    let block = PackingBlock::new(&cert, vertices, Some(eps));
    let mut discrepancies = Vec::new();
    if fixture_name(doc) == Some(FixtureName::Remark15) {
        let radii: Vec<String> = block.pieces.iter().map(|p| format!("E({})", p.ellipsoid.radii.join(", "))).collect();
        discrepancies = published::radius_discrepancies(vertices, &radii);
    }
    Ok(ReportDocument {
        source: SourceBlock { kind: doc.kind, dim: doc.dim, fixture: doc.fixture.clone(), pruned_facets: Vec::new(), blowups: doc.ancestry.len() },
        valid: true,
        polytope: None,
        fano: None,
        capacity: None,
        packing: Some(block),
        discrepancies,
    })
}

/// A pieces file: a host document and unimodular images of weighted simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecesDocument {
    pub host: InputDocument,
    pub pieces: Vec<PieceInput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceInput {
    /// Rows of the integer matrix.
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<Exact>,
    pub weights: Vec<Exact>,
}

pub fn pack_verify(text: &str, o: &GlobalOptions) -> Result<ReportDocument, CliError> {
    let doc: PiecesDocument = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let host = host_polytope(&doc.host, o)?;
    let mut pieces = Vec::with_capacity(doc.pieces.len());
    for (k, p) in doc.pieces.iter().enumerate() {
        let map = MapDoc { matrix: p.matrix.clone(), translation: p.translation.clone() }
            .to_map(o.strict_sl)
            .map_err(|e| CliError::Parse(format!("piece {k}: {e}")))?;
        let simplex = SimplexSpec::new(p.weights.iter().map(|w| w.0.clone()).collect())
            .ok_or_else(|| CliError::Parse(format!("piece {k}: weights must be positive")))?;
        if map.dim() != doc.host.dim || simplex.dim() != doc.host.dim {
            return Err(CliError::Parse(format!("piece {k} has the wrong dimension")));
        }
        pieces.push((map, simplex));
    }
    let cert = verify_general_packing(&host, &pieces).map_err(|e| CliError::validation(e.to_string()))?;
    Ok(ReportDocument {
        source: SourceBlock {
            kind: doc.host.kind,
            dim: doc.host.dim,
            fixture: doc.host.fixture.clone(),
            pruned_facets: Vec::new(),
            blowups: doc.host.ancestry.len(),
        },
        valid: true,
        polytope: None,
        fano: None,
        capacity: None,
        packing: Some(PackingBlock::new(&cert, &[], None)),
        discrepancies: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionBlock {
    pub applies: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_alpha: Option<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_generic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonBlock {
    pub space: Space,
    pub alpha: Vec<Exact>,
    pub template_facets: usize,
    pub redundant_facets: Vec<usize>,
    /// The closed-form maximum.
    pub closed_form: Exact,
    /// The same maximum by enumeration over all template normals.
    pub template_lambda: Exact,
    pub agreement: bool,
    /// Λ of the normal fan of the polytope after dropping redundant facets.
    pub fan_lambda: Exact,
    /// `m · max α_i`.
    pub cap: Exact,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonOutput {
    pub document: InputDocument,
    pub closed_form: PolygonBlock,
}

impl PolygonOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializes")
    }

    pub fn to_text(&self) -> String {
        let b = &self.closed_form;
        let mut lines = vec![
            format!("{:<22}{}", "space", if b.space == Space::Up { "up" } else { "apol" }),
            format!("{:<22}{}", "alpha", b.alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")),
            format!("{:<22}{} ({} redundant: {:?})", "template facets", b.template_facets, b.redundant_facets.len(), b.redundant_facets),
            format!("{:<22}{}", "closed form", b.closed_form),
            format!("{:<22}{}", "template lambda", b.template_lambda),
            format!("{:<22}{}", "agreement", if b.agreement { "yes" } else { "no" }),
            format!("{:<22}{}", "fan lambda", b.fan_lambda),
            format!("{:<22}{}", "cap m·max α", b.cap),
        ];
        if let Some(r) = &b.reduction {
            let text = match &r.reduced_alpha {
                Some(a) => format!("applies: {}", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
                None => "inapplicable".into(),
            };
            lines.push(format!("{:<22}{text}", "reduction"));
        }
        lines.push(String::new());
        lines.push(self.document.to_json());
        lines.join("\n")
    }
}

fn construction_error(e: ConstructionError) -> CliError {
    match e {
        ConstructionError::WeightCount { .. } => CliError::Usage(e.to_string()),
        other => CliError::validation(other.to_string()),
    }
}

pub fn polygon(alpha: &[Rational], space: Space) -> Result<PolygonOutput, CliError> {
    let weights = PolygonWeights::new(alpha.to_vec()).map_err(construction_error)?;
    let (pp, closed): (PolygonPolytope, Rational) = match space {
        Space::Up => (
            polygon_up_space(&weights).map_err(construction_error)?,
            lambda_up_closed_form(&weights).map_err(construction_error)?,
        ),
        Space::Apol => (
            polygon_apol_space(&weights).map_err(construction_error)?,
            lambda_apol_closed_form(&weights).map_err(construction_error)?,
        ),
    };
    let template = pp.template_lambda().map_err(construction_error)?;
    let (fan, phi) = normal_fan(&pp.polytope);
    let fan_lambda = lambda_bound(&fan, &phi).map_err(capacity_error)?.value;
    let m = alpha.len();
    let cap = alpha.iter().max().expect("non-empty").clone() * Rational::from_integer(m.into());
    let reduction = (m >= 5).then(|| match pol_reduction(&weights) {
        Ok(r) => ReductionBlock {
            applies: true,
            reduced_alpha: Some(r.weights().iter().cloned().map(Exact).collect()),
            reduced_generic: Some(r.is_generic()),
        },
        Err(_) => ReductionBlock { applies: false, reduced_alpha: None, reduced_generic: None },
    });
    let mut document = InputDocument::polytope(&pp.polytope);
    document.facets = Some(facet_docs(pp.polytope.facets()));
    Ok(PolygonOutput {
        document,
        closed_form: PolygonBlock {
            space,
            alpha: alpha.iter().cloned().map(Exact).collect(),
            template_facets: pp.template.len(),
            redundant_facets: pp.redundant.clone(),
            agreement: closed == template,
            closed_form: Exact(closed),
            template_lambda: Exact(template),
            fan_lambda: Exact(fan_lambda),
            cap: Exact(cap),
            reduction,
        },
    })
}

pub fn default_options() -> GlobalOptions {
    GlobalOptions { json: true, search_budget: 3, norm_cap: toricap_core::capacity::DEFAULT_NORM_CAP, prune: false, strict_sl: false }
}
