//! Ellipsoid packings from disjoint unimodular simplices in a polytope.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{format_rational, invert_rational, rational_to_f64, Rational, RationalVector, UnimodularMap};
use crate::lp::{LinearProgram, LpOutcome};
use crate::polytope::{DelzantPolytope, SimplexSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("{0} is not a vertex")]
    NotAVertex(RationalVector),
    #[error("vertices {first} and {second} are not simplicially separating")]
    NotSeparating { first: usize, second: usize },
    #[error("epsilon {epsilon} must satisfy 0 < ε < {bound} and keep every radius positive")]
    EpsilonOutOfRange { epsilon: Rational, bound: Rational },
    #[error("piece {piece} has the wrong dimension")]
    DimensionMismatch { piece: usize },
    #[error("piece {piece} is not contained in the polytope")]
    NotContained { piece: usize },
    #[error("pieces {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
}

/// Open ellipsoid `E(√(2a_1) − ε, …, √(2a_n) − ε)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EllipsoidSpec {
    pub capacity_weights: Vec<Rational>,
    pub epsilon_margin: Rational,
}

impl EllipsoidSpec {
    pub fn new(capacity_weights: Vec<Rational>, epsilon_margin: Rational) -> Option<Self> {
        let ok = capacity_weights.iter().all(|a| a.is_positive())
            && !epsilon_margin.is_negative()
            && capacity_weights.iter().all(|a| &epsilon_margin * &epsilon_margin < a * Rational::from_integer(2.into()));
        ok.then_some(Self { capacity_weights, epsilon_margin })
    }

    /// Radii as text, e.g. `√(2·5/6)−1/100`.
    pub fn radii_symbolic(&self) -> Vec<String> {
        self.capacity_weights
            .iter()
            .map(|a| {
                let root = format!("√(2·{})", format_rational(a));
                if self.epsilon_margin.is_zero() {
                    root
                } else {
                    format!("{root}−{}", format_rational(&self.epsilon_margin))
                }
            })
            .collect()
    }

    /// Display-only decimal radii.
    pub fn radii_f64(&self) -> Vec<f64> {
        let eps = rational_to_f64(&self.epsilon_margin);
        self.capacity_weights.iter().map(|a| (2.0 * rational_to_f64(a)).sqrt() - eps).collect()
    }
}

impl fmt::Display for EllipsoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({})", self.radii_symbolic().join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingPiece {
    pub map: UnimodularMap,
    pub simplex: SimplexSpec,
    pub ellipsoid: EllipsoidSpec,
}

impl PackingPiece {
    pub fn image_vertices(&self) -> Vec<RationalVector> {
        self.simplex.image_vertices(&self.map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCertificate {
    pub host: DelzantPolytope,
    pub pieces: Vec<PackingPiece>,
    pub fraction: Rational,
}

/// Whether the open simplices `conv(a)` and `conv(b)` (each with `n + 1`
/// affinely independent vertices) are disjoint.
///
/// A separating facet hyperplane, or a centroid strictly inside the other
/// simplex, decides most pairs. Otherwise maximizes `s` over barycentric
/// coordinates `λ, μ ≥ s` of a common point; the interiors meet iff the
/// optimum is positive, so touching closures count as disjoint.
pub fn open_simplices_disjoint(a: &[RationalVector], b: &[RationalVector]) -> bool {
    if let (Some(ca), Some(cb)) = (Barycentric::new(a), Barycentric::new(b)) {
        if ca.facet_separates(b) || cb.facet_separates(a) {
            return true;
        }
        if cb.strictly_inside(&centroid(a)) || ca.strictly_inside(&centroid(b)) {
            return false;
        }
    }
    disjoint_by_lp(a, b)
}

fn centroid(v: &[RationalVector]) -> RationalVector {
    let sum = v.iter().skip(1).fold(v[0].clone(), |acc, x| acc.add(x));
    sum.scale(&Rational::new(1.into(), (v.len() as i64).into()))
}

/// Barycentric coordinates with respect to a full-dimensional simplex.
struct Barycentric {
    origin: RationalVector,
    inverse: Vec<Vec<Rational>>,
}

impl Barycentric {
    fn new(v: &[RationalVector]) -> Option<Self> {
        let n = v[0].dim();
        if v.len() != n + 1 {
            return None;
        }
        let m: Vec<Vec<Rational>> = (0..n).map(|i| (1..=n).map(|j| &v[j][i] - &v[0][i]).collect()).collect();
        Some(Self { origin: v[0].clone(), inverse: invert_rational(&m)? })
    }

    fn coords(&self, x: &RationalVector) -> Vec<Rational> {
        let d = x.sub(&self.origin);
        let tail: Vec<Rational> = self.inverse.iter().map(|row| row.iter().zip(d.iter()).map(|(a, b)| a * b).sum()).collect();
        let head = Rational::one() - tail.iter().sum::<Rational>();
        std::iter::once(head).chain(tail).collect()
    }

    /// Some facet hyperplane has every point of `other` on its closed outer side.
    fn facet_separates(&self, other: &[RationalVector]) -> bool {
        let coords: Vec<Vec<Rational>> = other.iter().map(|x| self.coords(x)).collect();
        (0..=self.inverse.len()).any(|k| coords.iter().all(|c| !c[k].is_positive()))
    }

    fn strictly_inside(&self, x: &RationalVector) -> bool {
        self.coords(x).iter().all(Signed::is_positive)
    }
}

fn disjoint_by_lp(a: &[RationalVector], b: &[RationalVector]) -> bool {
    let (ka, kb) = (a.len(), b.len());
    let n = a[0].dim();
    let nvars = ka + kb + 1;
    let s = ka + kb;
    let mut lp = LinearProgram::new(nvars);
    for i in 0..n {
        let mut row = vec![Rational::zero(); nvars];
        for (j, v) in a.iter().enumerate() {
            row[j] = v.coords()[i].clone();
        }
        for (j, v) in b.iter().enumerate() {
            row[ka + j] = -v.coords()[i].clone();
        }
        lp.equal(row, Rational::zero());
    }
    for range in [0..ka, ka..ka + kb] {
        let mut row = vec![Rational::zero(); nvars];
        for j in range.clone() {
            row[j] = Rational::one();
        }
        lp.equal(row, Rational::one());
        for j in range {
            let mut row = vec![Rational::zero(); nvars];
            row[j] = Rational::one();
            row[s] = -Rational::one();
            lp.at_least(row, Rational::zero());
        }
    }
    let mut objective = vec![Rational::zero(); nvars];
    objective[s] = Rational::one();
    match lp.maximize(&objective) {
        LpOutcome::Optimal { value, .. } => !value.is_positive(),
        LpOutcome::Infeasible => true,
        LpOutcome::Unbounded => unreachable!("s ≤ 1 / (n + 1) on the feasible set"),
    }
}

/// Whether the vertex simplices at `p` and `q` have disjoint interiors.
pub fn simplicially_separating(
    polytope: &DelzantPolytope,
    p: &RationalVector,
    q: &RationalVector,
) -> Result<bool, PackingError> {
    let sp = vertex_simplex(polytope, p)?;
    let sq = vertex_simplex(polytope, q)?;
    Ok(p != q && open_simplices_disjoint(&sp, &sq))
}

fn vertex_simplex(polytope: &DelzantPolytope, p: &RationalVector) -> Result<Vec<RationalVector>, PackingError> {
    polytope.vertex_simplex(p).map_err(|_| PackingError::NotAVertex(p.clone()))
}

/// One piece per vertex, anchored by the vertex-figure map, with weights
/// `r_p` and ellipsoid margin `ε`.
pub fn theorem_6_4_certificate(
    polytope: &DelzantPolytope,
    vertices: &[RationalVector],
    epsilon: &Rational,
) -> Result<PackingCertificate, PackingError> {
    let mut figures = Vec::with_capacity(vertices.len());
    for p in vertices {
        figures.push(polytope.vertex_figure(p).map_err(|_| PackingError::NotAVertex(p.clone()))?);
    }
    if let Some(bound) = figures.iter().map(|f| f.e_p.clone()).min() {
        let out_of_range = || PackingError::EpsilonOutOfRange { epsilon: epsilon.clone(), bound: bound.clone() };
        if !epsilon.is_positive() || *epsilon >= bound {
            return Err(out_of_range());
        }
        if figures.iter().any(|f| EllipsoidSpec::new(f.ratios.clone(), epsilon.clone()).is_none()) {
            return Err(out_of_range());
        }
    }
    let simplices: Vec<Vec<RationalVector>> = figures
        .iter()
        .map(|f| std::iter::once(f.vertex.clone()).chain(f.adjacent_vertices()).collect())
        .collect();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i] == vertices[j] || !open_simplices_disjoint(&simplices[i], &simplices[j]) {
                return Err(PackingError::NotSeparating { first: i, second: j });
            }
        }
    }
    let pieces: Vec<PackingPiece> = figures
        .iter()
        .map(|f| {
            let (map, simplex) = f.certificate();
            let ellipsoid = EllipsoidSpec::new(f.ratios.clone(), epsilon.clone()).expect("checked above");
            PackingPiece { map, simplex, ellipsoid }
        })
        .collect();
    Ok(finish(polytope, pieces))
}

/// Checks inclusion and pairwise interior disjointness of arbitrary pieces.
/// The ellipsoids carry no margin.
pub fn verify_general_packing(
    polytope: &DelzantPolytope,
    pieces: &[(UnimodularMap, SimplexSpec)],
) -> Result<PackingCertificate, PackingError> {
    let mut images = Vec::with_capacity(pieces.len());
    for (k, (map, simplex)) in pieces.iter().enumerate() {
        match polytope.verify_simplex_inclusion(map, simplex) {
            Ok(true) => images.push(simplex.image_vertices(map)),
            Ok(false) => return Err(PackingError::NotContained { piece: k }),
            Err(_) => return Err(PackingError::DimensionMismatch { piece: k }),
        }
    }
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if !open_simplices_disjoint(&images[i], &images[j]) {
                return Err(PackingError::Overlap { first: i, second: j });
            }
        }
    }
    let pieces = pieces
        .iter()
        .map(|(map, simplex)| PackingPiece {
            map: map.clone(),
            simplex: simplex.clone(),
            ellipsoid: EllipsoidSpec::new(simplex.weights().to_vec(), Rational::zero()).expect("weights are positive"),
        })
        .collect();
    Ok(finish(polytope, pieces))
}

fn finish(polytope: &DelzantPolytope, pieces: Vec<PackingPiece>) -> PackingCertificate {
    let mut cert = PackingCertificate { host: polytope.clone(), pieces, fraction: Rational::zero() };
    cert.fraction = packed_fraction(&cert);
    cert
}

/// `Σ_k Π_i a_i^(k) / (n! · vol Δ)`, the share of symplectic volume filled
/// in the limit `ε → 0`.
pub fn packed_fraction(cert: &PackingCertificate) -> Rational {
    let n = cert.host.dim();
    let factorial: Rational = (1..=n).map(|k| Rational::from_integer(k.into())).product();
    let filled: Rational = cert.pieces.iter().map(|p| p.simplex.product()).sum();
    filled / (factorial * cert.host.volume())
}
