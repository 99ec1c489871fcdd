//! Relation enumeration and the capacity sandwich.
//!
//! `Λ` maximizes `Σ φ(u_k) a_k` over nonnegative relations `Σ a_k u_k = 0`
//! with `1 ≤ Σ a_k ≤ n + 1`; `Υ` is the least positive value over all
//! nonnegative relations. Values are stored without the factor 2π; the
//! [`Normalization`] tag says how to render them.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::fan::{normal_fan, ConvexityViolation, Fan, FanError, FanoVerdict, SupportFunction};
use crate::lattice::{Int, LatticeVector, Rational};
use crate::polytope::{DelzantPolytope, WidthCertificate, WidthSearch};

pub const DEFAULT_NORM_CAP: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CapacityError {
    #[error("support function is not strictly convex: {0}")]
    NotStrictlyConvex(ConvexityViolation),
    #[error("no relation with total at most {bound}")]
    NoRelations { bound: u64 },
    #[error("Λ = {value} violates 0 < Λ ≤ (n+1)·max φ = {cap}")]
    BoundViolated { value: Rational, cap: Rational },
    #[error("Hilbert basis completion exceeded norm cap {cap} ({partial} partial elements, unusable)")]
    NormCapExceeded { cap: u64, partial: usize },
    #[error("no relation has positive value")]
    NoPositiveValue,
    #[error("ancestor generators are not a subset of the current generators")]
    AncestorMismatch,
    #[error("generator coordinates exceed machine range")]
    Overflow,
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// Nonnegative integer vector `a` with `Σ a_k u_k = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationVector {
    pub coeffs: Vec<u64>,
    pub total: u64,
    /// `Σ φ(u_k) a_k` once a support function has been applied.
    pub value: Option<Rational>,
}

impl RelationVector {
    pub fn new(coeffs: Vec<u64>) -> Self {
        let total = coeffs.iter().sum();
        Self { coeffs, total, value: None }
    }

    pub fn evaluate(&self, phi: &SupportFunction) -> Rational {
        phi.values()
            .iter()
            .zip(&self.coeffs)
            .fold(Rational::zero(), |acc, (v, &a)| acc + v * Rational::from_integer(a.into()))
    }

    pub fn valued(mut self, phi: &SupportFunction) -> Self {
        self.value = Some(self.evaluate(phi));
        self
    }

    pub fn is_relation_of(&self, generators: &[LatticeVector]) -> bool {
        let n = generators.first().map_or(0, LatticeVector::dim);
        let sum = generators
            .iter()
            .zip(&self.coeffs)
            .fold(LatticeVector::zero(n), |acc, (u, &a)| acc.add(&u.scale(&Int::from(a))));
        self.coeffs.len() == generators.len() && sum.is_zero()
    }
}

fn machine_generators(generators: &[LatticeVector]) -> Result<Vec<Vec<i64>>, CapacityError> {
    generators.iter().map(|g| g.to_i64().ok_or(CapacityError::Overflow)).collect()
}

/// Generators re-expressed through the reduced row echelon form of the
/// matrix with columns `u_k`, each row scaled to a primitive integer vector.
/// The relations are unchanged, and the result does not depend on the
/// coordinates chosen for the lattice.
fn canonical_generators(generators: &[LatticeVector]) -> Result<Vec<Vec<i64>>, CapacityError> {
    let d = generators.len();
    let n = generators.first().map_or(0, LatticeVector::dim);
    let mut rows: Vec<Vec<Rational>> =
        (0..n).map(|i| generators.iter().map(|g| Rational::from_integer(g[i].clone())).collect()).collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(pivot) = (rank..n).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x /= &lead;
        }
        for r in 0..n {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    let int_rows: Vec<Vec<Int>> = rows
        .into_iter()
        .map(|row| {
            let den = row.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<Int> = row.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
            ints.into_iter().map(|x| x / &g).collect()
        })
        .collect();
    (0..d)
        .map(|k| int_rows.iter().map(|r| r[k].to_i64().ok_or(CapacityError::Overflow)).collect())
        .collect()
}

/// All `a ∈ Z_{≥0}^d` with `Σ a_k u_k = 0` and `1 ≤ Σ a_k ≤ bound`,
/// lexicographically sorted.
pub fn bounded_relations(generators: &[LatticeVector], bound: u64) -> Result<Vec<RelationVector>, CapacityError> {
    machine_generators(generators)?;
    let gens = canonical_generators(generators)?;
    let n = gens.first().map_or(0, Vec::len);
    let max_coord = gens.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0) as i128;
    let mut out = Vec::new();
    let mut coeffs = vec![0u64; gens.len()];
    let mut sum = vec![0i128; n];
    dfs(&gens, 0, bound, max_coord, &mut coeffs, &mut sum, &mut out);
    out.sort();
    Ok(out)
}

fn dfs(
    gens: &[Vec<i64>],
    k: usize,
    remaining: u64,
    max_coord: i128,
    coeffs: &mut Vec<u64>,
    sum: &mut Vec<i128>,
    out: &mut Vec<RelationVector>,
) {
    let norm = sum.iter().map(|x| x.abs()).max().unwrap_or(0);
    if norm > remaining as i128 * max_coord {
        return;
    }
    if k == gens.len() {
        if norm == 0 && coeffs.iter().any(|&a| a > 0) {
            out.push(RelationVector::new(coeffs.clone()));
        }
        return;
    }
    for a in 0..=remaining {
        coeffs[k] = a;
        dfs(gens, k + 1, remaining - a, max_coord, coeffs, sum, out);
        for (s, &g) in sum.iter_mut().zip(&gens[k]) {
            *s += g as i128;
        }
    }
    for (s, &g) in sum.iter_mut().zip(&gens[k]) {
        *s -= g as i128 * (remaining as i128 + 1);
    }
    coeffs[k] = 0;
}

/// Minimal nonzero nonnegative solutions of `Σ a_k u_k = 0` by the
/// Contejean–Devie completion on the canonical system, lexicographically
/// sorted.
///
/// A candidate `p` with residue `Ap ≠ 0` is extended by `e_j` only when
/// `⟨Ap, Ae_j⟩ < 0`; candidates dominating a found solution are discarded.
pub fn hilbert_basis(generators: &[LatticeVector], norm_cap: u64) -> Result<Vec<RelationVector>, CapacityError> {
    machine_generators(generators)?;
    let gens = canonical_generators(generators)?;
    let d = gens.len();
    let n = gens.first().map_or(0, Vec::len);
    let residue = |p: &[u64]| -> Vec<i128> {
        (0..n).map(|i| p.iter().zip(&gens).map(|(&a, g)| a as i128 * g[i] as i128).sum()).collect()
    };
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut frontier: Vec<Vec<u64>> = (0..d)
        .map(|j| {
            let mut e = vec![0; d];
            e[j] = 1;
            e
        })
        .collect();
    while !frontier.is_empty() {
        let mut pending = Vec::new();
        for p in frontier {
            let r = residue(&p);
            if r.iter().all(|x| *x == 0) {
                basis.push(p);
            } else {
                pending.push((p, r));
            }
        }
        let mut next = BTreeSet::new();
        for (p, r) in pending {
            for j in 0..d {
                let dot: i128 = r.iter().zip(&gens[j]).map(|(a, &b)| a * b as i128).sum();
                if dot >= 0 {
                    continue;
                }
                let mut q = p.clone();
                q[j] += 1;
                if basis.iter().any(|b| b.iter().zip(&q).all(|(x, y)| x <= y)) {
                    continue;
                }
                if q[j] > norm_cap {
                    return Err(CapacityError::NormCapExceeded { cap: norm_cap, partial: basis.len() });
                }
                next.insert(q);
            }
        }
        frontier = next.into_iter().collect();
    }
    let mut out: Vec<RelationVector> = basis.into_iter().map(RelationVector::new).collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaBound {
    pub value: Rational,
    /// Optimal relations, lexicographic.
    pub argmax: Vec<RelationVector>,
    /// `(n+1)·max_k φ(u_k)`.
    pub cap: Rational,
}

fn require_convex(fan: &Fan, phi: &SupportFunction) -> Result<(), CapacityError> {
    match fan.strict_convexity(phi)? {
        Ok(()) => Ok(()),
        Err(v) => Err(CapacityError::NotStrictlyConvex(v)),
    }
}

/// `Λ(Σ, φ)`.
pub fn lambda_bound(fan: &Fan, phi: &SupportFunction) -> Result<LambdaBound, CapacityError> {
    require_convex(fan, phi)?;
    let bound = fan.dim() as u64 + 1;
    let relations = bounded_relations(fan.generators(), bound)?;
    let valued: Vec<RelationVector> = relations.into_iter().map(|r| r.valued(phi)).collect();
    let value = valued
        .iter()
        .filter_map(|r| r.value.clone())
        .max()
        .ok_or(CapacityError::NoRelations { bound })?;
    let argmax = valued.into_iter().filter(|r| r.value.as_ref() == Some(&value)).collect();
    let cap = phi.max_value() * Rational::from_integer(bound.into());
    if !value.is_positive() || value > cap {
        return Err(CapacityError::BoundViolated { value, cap });
    }
    Ok(LambdaBound { value, argmax, cap })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonBound {
    pub value: Rational,
    pub argmin: Vec<RelationVector>,
    pub basis_size: usize,
    /// Some Hilbert basis element has value 0.
    pub zero_value_elements: bool,
    /// Some Hilbert basis element has negative value; the minimum over the
    /// basis is then not known to be the infimum over the monoid.
    pub negative_value_elements: bool,
}

/// Least positive `Σ φ_k a_k` over the Hilbert basis of the given generators.
pub fn upsilon_over(
    generators: &[LatticeVector],
    phi: &SupportFunction,
    norm_cap: u64,
) -> Result<UpsilonBound, CapacityError> {
    let basis: Vec<RelationVector> = hilbert_basis(generators, norm_cap)?
        .into_iter()
        .map(|r| r.valued(phi))
        .collect();
    let values: Vec<&Rational> = basis.iter().filter_map(|r| r.value.as_ref()).collect();
    let zero_value_elements = values.iter().any(|v| v.is_zero());
    let negative_value_elements = values.iter().any(|v| v.is_negative());
    let value = values
        .into_iter()
        .filter(|v| v.is_positive())
        .min()
        .cloned()
        .ok_or(CapacityError::NoPositiveValue)?;
    let basis_size = basis.len();
    let argmin = basis.into_iter().filter(|r| r.value.as_ref() == Some(&value)).collect();
    Ok(UpsilonBound { value, argmin, basis_size, zero_value_elements, negative_value_elements })
}

/// `Υ(Σ, φ)` for strictly convex `φ`.
pub fn upsilon_bound(fan: &Fan, phi: &SupportFunction, norm_cap: u64) -> Result<UpsilonBound, CapacityError> {
    require_convex(fan, phi)?;
    upsilon_over(fan.generators(), phi, norm_cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Values are bounds in the units of `φ` itself.
    FanNormalized,
    /// Values are to be multiplied by 2π (polytope input, `φ = −λ`).
    Polytope2Pi,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub width: WidthSearch,
    pub norm_cap: u64,
    /// Fan of the Fano manifold this one was blown up from; its generators
    /// must be a subset of the current ones.
    pub ancestor: Option<Fan>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { width: WidthSearch::default(), norm_cap: DEFAULT_NORM_CAP, ancestor: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AncestorUpsilon {
    /// Positions of the ancestor's generators among the current generators.
    pub generator_indices: Vec<usize>,
    pub ancestor_fano: bool,
    /// The current `φ`, restricted, is strictly convex on the ancestor fan.
    pub restricted_convex: bool,
    pub upsilon: Result<UpsilonBound, CapacityError>,
}

impl AncestorUpsilon {
    pub fn is_valid_bound(&self) -> bool {
        self.ancestor_fano && self.restricted_convex && self.upsilon.is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct CapacityReport {
    pub normalization: Normalization,
    pub fan: Fan,
    pub phi: SupportFunction,
    pub fano: FanoVerdict,
    pub lambda: LambdaBound,
    /// Always computed; a capacity bound only when `fano.fano`.
    pub upsilon: Result<UpsilonBound, CapacityError>,
    pub width: WidthCertificate,
    pub ancestor: Option<AncestorUpsilon>,
}

impl CapacityReport {
    pub fn upsilon_is_capacity_bound(&self) -> bool {
        self.fano.fano && self.upsilon.is_ok()
    }

    /// Least valid capacity upper bound.
    pub fn best_upper(&self) -> Rational {
        best_upper(&self.lambda, &self.upsilon, self.fano.fano, self.ancestor.as_ref())
    }

    /// Seshadri constant bound `min(Λ, Υ if Fano)`; always rendered ×2π.
    pub fn seshadri_upper(&self) -> Rational {
        match (&self.upsilon, self.fano.fano) {
            (Ok(u), true) => self.lambda.value.clone().min(u.value.clone()),
            _ => self.lambda.value.clone(),
        }
    }

    pub fn sandwich_closed(&self) -> bool {
        self.width.value == self.best_upper()
    }
}

fn best_upper(
    lambda: &LambdaBound,
    upsilon: &Result<UpsilonBound, CapacityError>,
    fano: bool,
    ancestor: Option<&AncestorUpsilon>,
) -> Rational {
    let mut best = lambda.value.clone();
    if let (true, Ok(u)) = (fano, upsilon) {
        best = best.min(u.value.clone());
    }
    if let Some(Ok(u)) = ancestor.filter(|a| a.is_valid_bound()).map(|a| &a.upsilon) {
        best = best.min(u.value.clone());
    }
    best
}

pub enum CapacityInput<'a> {
    Polytope(&'a DelzantPolytope),
    Fan(&'a Fan, &'a SupportFunction),
}

pub fn capacity_report(input: CapacityInput<'_>, options: &ReportOptions) -> Result<CapacityReport, CapacityError> {
    let (fan, phi, polytope, normalization) = match input {
        CapacityInput::Polytope(p) => {
            let (fan, phi) = normal_fan(p);
            (fan, phi, p.clone(), Normalization::Polytope2Pi)
        }
        CapacityInput::Fan(fan, phi) => {
            let polytope = fan.polytope_from_support(phi)?;
            (fan.clone(), phi.clone(), polytope, Normalization::FanNormalized)
        }
    };
    let lambda = lambda_bound(&fan, &phi)?;
    let upsilon = upsilon_bound(&fan, &phi, options.norm_cap);
    let fano = fan.is_fano()?;
    let ancestor = match &options.ancestor {
        Some(root) => Some(ancestor_upsilon(&fan, &phi, root, options.norm_cap)?),
        None => None,
    };
    // no lower bound can pass the best upper bound, so the search stops there
    let upper = best_upper(&lambda, &upsilon, fano.fano, ancestor.as_ref());
    let width = polytope.width_lower_bound_until(&options.width, Some(&upper));
    Ok(CapacityReport { normalization, fan, phi, fano, lambda, upsilon, width, ancestor })
}

fn ancestor_upsilon(
    fan: &Fan,
    phi: &SupportFunction,
    root: &Fan,
    norm_cap: u64,
) -> Result<AncestorUpsilon, CapacityError> {
    let generator_indices = root
        .generators()
        .iter()
        .map(|g| fan.generators().iter().position(|h| h == g))
        .collect::<Option<Vec<usize>>>()
        .ok_or(CapacityError::AncestorMismatch)?;
    let restricted = phi.restrict(&generator_indices);
    let ancestor_fano = root.is_fano()?.fano;
    let restricted_convex = root.is_strictly_convex(&restricted);
    let upsilon = upsilon_over(root.generators(), &restricted, norm_cap);
    Ok(AncestorUpsilon { generator_indices, ancestor_fano, restricted_convex, upsilon })
}
