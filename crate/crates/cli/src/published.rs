//! Published values for the named fixtures, compared against computed ones.

use std::collections::BTreeSet;

use toricap_core::constructions::FixtureName;
use toricap_core::lattice::{format_rational, rat, Rational, RationalVector};

use crate::report::Discrepancy;

/// Vertex labels `q1..q7` of the heptagon.
pub const HEPTAGON_LABELS: [(i64, i64, i64, i64); 7] =
    [(1, 2, 3, 2), (4, 3, 7, 3), (5, 2, 7, 3), (5, 2, 3, 2), (4, 3, 1, 3), (2, 3, 1, 3), (1, 2, 1, 2)];

pub fn heptagon_vertex(label: usize) -> RationalVector {
    let (a, b, c, d) = HEPTAGON_LABELS[label - 1];
    RationalVector::from_pairs(&[(a, b), (c, d)])
}

/// The seven vertex groups listed as packable.
pub const HEPTAGON_GROUPS: [[usize; 3]; 7] = [[1, 3, 5], [1, 3, 6], [2, 4, 6], [2, 4, 7], [3, 5, 7], [1, 4, 6], [2, 5, 7]];

/// Published ellipsoid radii at `q1..q7`.
const HEPTAGON_RADII: [&str; 7] = [
    "E(√2, √(5√2/3))",
    "E(√(5√2/3), √(7/3))",
    "E(√(7/3), √(5/3))",
    "E(√(5/3), √(7√2/3))",
    "E(√(7√2/3), √(4/3))",
    "E(√(4/3), √(√10/3))",
    "E(√(√10/3), √2)",
];

pub const EXAMPLE_4_1_VERTICES: [[i64; 4]; 8] = [
    [-1, -1, 0, 0],
    [1, 0, 0, 0],
    [3, 1, 1, 0],
    [1, -1, 0, 1],
    [0, -1, 0, 0],
    [0, 0, 0, 0],
    [0, -1, 1, 0],
    [0, -1, 0, 1],
];

pub const EXAMPLE_4_3_VERTICES: [[i64; 4]; 23] = [
    [1, 1, 0, 0],
    [1, 1, -1, 0],
    [1, 1, 0, -1],
    [1, -2, 0, 1],
    [1, -2, -1, 1],
    [1, -2, 0, 0],
    [1, 0, -2, 1],
    [1, -1, -2, 1],
    [1, 0, 0, 1],
    [1, -1, 0, -1],
    [-2, 1, 1, -1],
    [0, -1, -2, -2],
    [-2, 1, 1, 1],
    [0, 1, 1, 0],
    [0, 1, 1, -2],
    [-2, -1, 0, -1],
    [-1, 1, -1, 0],
    [0, -1, 1, 1],
    [0, -1, -1, -1],
    [-1, 0, -1, 1],
    [0, 0, 1, 1],
    [0, 0, 1, -2],
    [0, 0, -2, 1],
];

pub const EXAMPLE_4_3_MAX_CONES: usize = 23;

/// Values computed for a fixture.
pub struct Computed<'a> {
    pub lambda: Option<&'a Rational>,
    pub upsilon: Option<&'a Rational>,
    pub width: Option<&'a Rational>,
    pub vertices: &'a [RationalVector],
    pub max_cones: usize,
}

fn points(v: &[RationalVector]) -> String {
    v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn vertex_discrepancy(published: &[RationalVector], computed: &[RationalVector]) -> Option<Discrepancy> {
    let p: BTreeSet<&RationalVector> = published.iter().collect();
    let c: BTreeSet<&RationalVector> = computed.iter().collect();
    if p == c {
        return None;
    }
    let missing: Vec<RationalVector> = p.difference(&c).map(|v| (*v).clone()).collect();
    let extra: Vec<RationalVector> = c.difference(&p).map(|v| (*v).clone()).collect();
    let negated: BTreeSet<RationalVector> = computed.iter().map(|v| v.neg()).collect();
    let neg_missing = published.iter().filter(|v| !negated.contains(*v)).count();
    let mut note = format!(
        "{} of {} published points are not vertices: {}; computed vertices not listed: {}",
        missing.len(),
        published.len(),
        points(&missing),
        if extra.is_empty() { "none".into() } else { points(&extra) }
    );
    if neg_missing < missing.len() {
        note.push_str(&format!(
            "; against the reflected polytope −Δ only {neg_missing} published points are off"
        ));
    }
    Some(Discrepancy {
        quantity: "vertices".into(),
        published: format!("{} points", published.len()),
        computed: format!("{} vertices", computed.len()),
        note,
    })
}

fn value_discrepancy(
    quantity: &str,
    published: Rational,
    published_text: &str,
    computed: Option<&Rational>,
    note: &str,
) -> Option<Discrepancy> {
    let computed = computed?;
    (published != *computed).then(|| Discrepancy {
        quantity: quantity.into(),
        published: published_text.into(),
        computed: format_rational(computed),
        note: note.into(),
    })
}

fn lattice_points<const N: usize>(rows: &[[i64; N]]) -> Vec<RationalVector> {
    rows.iter().map(|r| RationalVector::from_i64(r)).collect()
}

pub fn discrepancies(fixture: FixtureName, c: &Computed<'_>) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    match fixture {
        FixtureName::Example41 => {
            out.extend(vertex_discrepancy(&lattice_points(&EXAMPLE_4_1_VERTICES), c.vertices));
            out.extend(value_discrepancy("lambda", rat(1, 1), "1", c.lambda, "fan-normalized"));
        }
        FixtureName::Example43 => {
            if c.max_cones != EXAMPLE_4_3_MAX_CONES {
                out.push(Discrepancy {
                    quantity: "max cones".into(),
                    published: EXAMPLE_4_3_MAX_CONES.to_string(),
                    computed: c.max_cones.to_string(),
                    note: "the published list keeps ⟨u2,u3,u4,u5⟩, which contains the blown-up cone ⟨u2,u5⟩; \
                           the star subdivision replaces it by ⟨u2,u3,u4,u8⟩ and ⟨u3,u4,u5,u8⟩"
                        .into(),
                });
            }
            out.extend(value_discrepancy(
                "upsilon",
                rat(1, 1),
                "1",
                c.upsilon,
                "with φ ≡ 1 the value of a relation is its total; no relation among the nine generators has total below 3",
            ));
            out.extend(value_discrepancy(
                "capacity",
                rat(1, 1),
                "1",
                c.width.filter(|w| **w > rat(1, 1)),
                "the certified width lower bound exceeds the published capacity value",
            ));
            out.extend(vertex_discrepancy(&lattice_points(&EXAMPLE_4_3_VERTICES), c.vertices));
        }
        FixtureName::Remark15 => {
            let labels: Vec<RationalVector> = (1..=7).map(heptagon_vertex).collect();
            out.extend(vertex_discrepancy(&labels, c.vertices));
            out.extend(value_discrepancy(
                "lambda",
                rat(25, 6),
                "25/6 (25π/3 after ×2π)",
                c.lambda,
                "exact enumeration over relations with total at most 3; the value is ×2π",
            ));
            out.extend(value_discrepancy(
                "upsilon",
                rat(1, 6),
                "1/6 (π/3 after ×2π)",
                c.upsilon,
                "least positive value over the Hilbert basis of relations; the value is ×2π",
            ));
        }
    }
    out
}

/// Published radii use Euclidean edge lengths; the computed ones use ratios
/// along primitive edge vectors.
pub fn radius_discrepancies(vertices: &[RationalVector], radii: &[String]) -> Vec<Discrepancy> {
    vertices
        .iter()
        .zip(radii)
        .filter_map(|(v, computed)| {
            let label = (1..=7).find(|&k| heptagon_vertex(k) == *v)?;
            Some(Discrepancy {
                quantity: format!("ellipsoid at q{label}"),
                published: HEPTAGON_RADII[label - 1].into(),
                computed: computed.clone(),
                note: "computed radii are √(2 r_p) with r_p measured along primitive edge vectors".into(),
            })
        })
        .collect()
}
