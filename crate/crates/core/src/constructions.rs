//! Named polytopes and fans: projective spaces, vertex blow-ups, the worked
//! fixtures, and polygon-space polytopes with their closed-form `Λ`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::capacity::{bounded_relations, CapacityError};
use crate::fan::{Fan, FanError, SupportFunction};
use crate::lattice::{int, rat, Int, LatticeVector, Rational, RationalVector};
use crate::polytope::{DelzantPolytope, Facet, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("epsilon {epsilon} must satisfy 0 < ε < E_p = {e_p}")]
    EpsilonOutOfRange { epsilon: Rational, e_p: Rational },
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("need between {min} and {max} weights, found {found}")]
    WeightCount { min: usize, max: usize, found: usize },
    #[error("weights are not generic: signs {signs:?} sum to zero")]
    NonGeneric { signs: Vec<i8> },
    #[error("reduction needs α_(m-1) > α_m > ½·Σ_(j<m) α_j")]
    ReductionInapplicable,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

/// Unit simplex `{x_i ≥ 0, −Σ x_i ≥ −1}`.
pub fn projective_space(n: usize) -> Result<DelzantPolytope, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::ZeroDimension);
    }
    let mut facets: Vec<Facet> = (0..n).map(|i| Facet::new(LatticeVector::unit(n, i), Rational::zero())).collect();
    facets.push(Facet::new(LatticeVector::new(vec![int(-1); n]), -Rational::one()));
    Ok(DelzantPolytope::new(facets)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupRecord {
    pub parent: DelzantPolytope,
    pub vertex: RationalVector,
    pub epsilon: Rational,
    pub child: DelzantPolytope,
    /// Earlier blow-ups, oldest first; their own ancestry lists are empty.
    pub ancestry: Vec<BlowupRecord>,
}

impl BlowupRecord {
    /// The polytope before any recorded blow-up.
    pub fn root(&self) -> &DelzantPolytope {
        self.ancestry.first().map_or(&self.parent, |r| &r.parent)
    }

    /// Blows up the child again, extending the ancestry.
    pub fn blowup(&self, p: &RationalVector, epsilon: &Rational) -> Result<BlowupRecord, ConstructionError> {
        let mut next = blowup_at_vertex(&self.child, p, epsilon)?;
        let mut ancestry = self.ancestry.clone();
        ancestry.push(BlowupRecord { ancestry: Vec::new(), ..self.clone() });
        next.ancestry = ancestry;
        Ok(next)
    }

    /// Number of blow-ups including this one.
    pub fn depth(&self) -> usize {
        self.ancestry.len() + 1
    }
}

/// Cuts off the vertex `p` by the facet through the points `p + ε v_i`.
///
/// The new inward normal is the sum of the active normals at `p`, which pairs
/// to 1 with every edge direction; the new facet is appended last.
pub fn blowup_at_vertex(
    parent: &DelzantPolytope,
    p: &RationalVector,
    epsilon: &Rational,
) -> Result<BlowupRecord, ConstructionError> {
    let fig = parent.vertex_figure(p)?;
    if !epsilon.is_positive() || *epsilon >= fig.e_p {
        return Err(ConstructionError::EpsilonOutOfRange { epsilon: epsilon.clone(), e_p: fig.e_p });
    }
    let n = parent.dim();
    let normal = fig
        .active
        .iter()
        .fold(LatticeVector::zero(n), |acc, &k| acc.add(&parent.facets()[k].normal));
    let offset = normal.dot_rational(p) + epsilon;
    let mut facets = parent.facets().to_vec();
    facets.push(Facet::new(normal, offset));
    let child = DelzantPolytope::new(facets)?;
    Ok(BlowupRecord { parent: parent.clone(), vertex: p.clone(), epsilon: epsilon.clone(), child, ancestry: Vec::new() })
}

/// `CP^n` blown up at `e_n` with size `τ`: facets `x_i ≥ 0`, `−Σx_i ≥ −1`,
/// `−x_n ≥ −(1 − τ)`.
pub fn blown_up_projective_space(n: usize, tau: &Rational) -> Result<BlowupRecord, ConstructionError> {
    let base = projective_space(n)?;
    blowup_at_vertex(&base, &LatticeVector::unit(n, n - 1).to_rational(), tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixtureName {
    /// Resolution of `CP^4(1,1,2,2,2)` with the Kähler class `ω`.
    Example41,
    /// `CP^2 × CP^2` blown up along the three surfaces of the cones
    /// `{u1,u4}`, `{u2,u5}`, `{u3,u6}`, with the anticanonical function.
    /// The star subdivision has 24 maximal cones.
    Example43,
    /// The heptagon polygon-space polytope.
    Remark15,
}

impl FixtureName {
    pub const ALL: [FixtureName; 3] = [FixtureName::Example41, FixtureName::Example43, FixtureName::Remark15];

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::Example41 => "example_4_1",
            FixtureName::Example43 => "example_4_3",
            FixtureName::Remark15 => "remark_1_5",
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureName {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FixtureName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| ConstructionError::UnknownFixture(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fixture {
    Fan(Fan, SupportFunction),
    Polytope(DelzantPolytope),
}

fn lvs(rows: &[&[i64]]) -> Vec<LatticeVector> {
    rows.iter().map(|r| LatticeVector::from_i64(r)).collect()
}

/// Cones are listed with 1-based generator labels, as published.
fn cones_1based(rows: &[[usize; 4]]) -> Vec<Vec<usize>> {
    rows.iter().map(|c| c.iter().map(|i| i - 1).collect()).collect()
}

pub fn fixture(name: FixtureName) -> Result<Fixture, ConstructionError> {
    match name {
        FixtureName::Example41 => {
            let gens = lvs(&[&[-1, -2, -2, -2], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, -1, -1, -1]]);
            let cones = cones_1based(&[
                [1, 3, 4, 5],
                [1, 4, 5, 6],
                [1, 3, 5, 6],
                [1, 3, 4, 6],
                [2, 3, 4, 5],
                [2, 4, 5, 6],
                [2, 3, 5, 6],
                [2, 3, 4, 6],
            ]);
            let fan = Fan::new(4, gens, cones)?.validated()?;
            let omega = SupportFunction::new([1, 0, 1, 0, 0, 0].iter().map(|&v| rat(v, 1)).collect());
            Ok(Fixture::Fan(fan, omega))
        }
        FixtureName::Example43 => {
            let gens = lvs(&[
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[-1, -1, 0, 0],
                &[0, 0, 1, 0],
                &[0, 0, 0, 1],
                &[0, 0, -1, -1],
                &[1, 0, 1, 0],
                &[0, 1, 0, 1],
                &[-1, -1, -1, -1],
            ]);
            let cones = cones_1based(&[
                [1, 2, 7, 8],
                [1, 2, 6, 8],
                [1, 2, 6, 7],
                [1, 3, 5, 7],
                [1, 3, 5, 9],
                [1, 3, 7, 9],
                [1, 5, 6, 8],
                [1, 5, 6, 9],
                [1, 5, 7, 8],
                [1, 6, 7, 9],
                [2, 3, 4, 9],
                [2, 3, 8, 9],
                [2, 3, 4, 8],
                [3, 4, 5, 8],
                [2, 4, 7, 8],
                [2, 4, 6, 7],
                [2, 4, 6, 9],
                [2, 6, 8, 9],
                [3, 4, 5, 7],
                [3, 4, 7, 9],
                [3, 5, 8, 9],
                [4, 5, 7, 8],
                [4, 6, 7, 9],
                [5, 6, 8, 9],
            ]);
            let fan = Fan::new(4, gens, cones)?.validated()?;
            Ok(Fixture::Fan(fan, SupportFunction::constant(9, Rational::one())))
        }
        FixtureName::Remark15 => {
            let f = |u: &[i64], n: i64, d: i64| Facet::new(LatticeVector::from_i64(u), rat(n, d));
            Ok(Fixture::Polytope(DelzantPolytope::new(vec![
                f(&[1, 0], 1, 2),
                f(&[-1, 0], -5, 2),
                f(&[0, 1], 1, 3),
                f(&[0, -1], -7, 3),
                f(&[1, 1], 1, 1),
                f(&[1, -1], -1, 1),
                f(&[-1, 1], -1, 1),
            ])?))
        }
    }
}

/// Positive generic weights `α_1, …, α_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolygonWeights(Vec<Rational>);

pub const MAX_POLYGON_WEIGHTS: usize = 20;

impl PolygonWeights {
    pub fn new(alpha: Vec<Rational>) -> Result<Self, ConstructionError> {
        let w = Self::positive(alpha)?;
        w.check_generic()?;
        Ok(w)
    }

    /// Positive weights without the genericity check.
    pub fn positive(alpha: Vec<Rational>) -> Result<Self, ConstructionError> {
        if alpha.len() > MAX_POLYGON_WEIGHTS || alpha.is_empty() {
            return Err(ConstructionError::WeightCount { min: 1, max: MAX_POLYGON_WEIGHTS, found: alpha.len() });
        }
        if alpha.iter().any(|a| !a.is_positive()) {
            return Err(ConstructionError::NonPositiveWeight);
        }
        Ok(Self(alpha))
    }

    pub fn is_generic(&self) -> bool {
        self.check_generic().is_ok()
    }

    pub fn check_generic(&self) -> Result<(), ConstructionError> {
        let alpha = &self.0;
        let m = alpha.len();
        // the first sign can be fixed to +1 by symmetry
        for mask in 0u32..(1 << (m - 1)) {
            let signs: Vec<i8> = (0..m).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 }).collect();
            let total = alpha
                .iter()
                .zip(&signs)
                .fold(Rational::zero(), |acc, (a, &s)| if s > 0 { acc + a } else { acc - a });
            if total.is_zero() {
                return Err(ConstructionError::NonGeneric { signs });
            }
        }
        Ok(())
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn require_len(&self, min: usize) -> Result<(), ConstructionError> {
        self.check_generic()?;
        if self.0.len() < min {
            return Err(ConstructionError::WeightCount { min, max: MAX_POLYGON_WEIGHTS, found: self.0.len() });
        }
        Ok(())
    }
}

/// A polygon-space polytope with its full facet template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonPolytope {
    pub template: Vec<Facet>,
    pub polytope: DelzantPolytope,
    /// Template indices dropped as redundant.
    pub redundant: Vec<usize>,
}

impl PolygonPolytope {
    fn from_template(template: Vec<Facet>) -> Result<Self, ConstructionError> {
        let (polytope, redundant) = DelzantPolytope::build(template.clone(), true)?;
        Ok(Self { template, polytope, redundant })
    }

    /// `max Σ(−λ_k) a_k` over relations of all template normals with
    /// `1 ≤ Σ a_k ≤ dim + 1`, ignoring redundancy.
    pub fn template_lambda(&self) -> Result<Rational, ConstructionError> {
        let normals: Vec<LatticeVector> = self.template.iter().map(|f| f.normal.clone()).collect();
        let phi = SupportFunction::new(self.template.iter().map(|f| -f.offset.clone()).collect());
        let bound = self.polytope.dim() as u64 + 1;
        bounded_relations(&normals, bound)?
            .into_iter()
            .map(|r| r.evaluate(&phi))
            .max()
            .ok_or(ConstructionError::Capacity(CapacityError::NoRelations { bound }))
    }
}

/// The upper path space polytope: `x_i ∈ [−α_i, α_i]` for `i < m` and
/// `Σ x_i ≥ α_m`, with facet order `e_i`, `−e_i`, `Σ e_i`.
pub fn polygon_up_space(alpha: &PolygonWeights) -> Result<PolygonPolytope, ConstructionError> {
    alpha.require_len(3)?;
    let a = alpha.weights();
    let m = a.len();
    let n = m - 1;
    let mut template = Vec::with_capacity(2 * m - 1);
    for (i, ai) in a.iter().take(n).enumerate() {
        template.push(Facet::new(LatticeVector::unit(n, i), -ai.clone()));
    }
    for (i, ai) in a.iter().take(n).enumerate() {
        template.push(Facet::new(LatticeVector::unit(n, i).neg(), -ai.clone()));
    }
    template.push(Facet::new(LatticeVector::new(vec![int(1); n]), a[m - 1].clone()));
    PolygonPolytope::from_template(template)
}

/// The abelian polygon space polytope: `y_i ∈ [−α_i, α_i]` for `i ≤ m−2`
/// and `α_m − α_{m−1} ≤ Σ y_i ≤ α_m + α_{m−1}`.
pub fn polygon_apol_space(alpha: &PolygonWeights) -> Result<PolygonPolytope, ConstructionError> {
    alpha.require_len(4)?;
    let a = alpha.weights();
    let m = a.len();
    let n = m - 2;
    let mut template = Vec::with_capacity(2 * n + 2);
    for (i, ai) in a.iter().take(n).enumerate() {
        template.push(Facet::new(LatticeVector::unit(n, i), -ai.clone()));
    }
    for (i, ai) in a.iter().take(n).enumerate() {
        template.push(Facet::new(LatticeVector::unit(n, i).neg(), -ai.clone()));
    }
    template.push(Facet::new(LatticeVector::new(vec![int(1); n]), &a[m - 1] - &a[m - 2]));
    template.push(Facet::new(LatticeVector::new(vec![int(-1); n]), -(&a[m - 1] + &a[m - 2])));
    PolygonPolytope::from_template(template)
}

/// Maximum of `Σ c_i b_i` over `b ∈ Z_{≥0}^k` with `lo ≤ Σ w_i b_i ≤ hi`
/// (all `w_i > 0`).
fn weighted_max(coeffs: &[Rational], weights: &[u64], lo: u64, hi: u64) -> Option<Rational> {
    let ranges = weights.iter().map(|&w| 0..=hi / w);
    ranges
        .multi_cartesian_product()
        .filter(|b| {
            let s: u64 = b.iter().zip(weights).map(|(x, w)| x * w).sum();
            lo <= s && s <= hi
        })
        .map(|b| {
            b.iter()
                .zip(coeffs)
                .fold(Rational::zero(), |acc, (&x, c)| acc + c * Rational::from_integer(Int::from(x)))
        })
        .max()
}

/// `max{2Σ_{i<m} α_i b_i + (Σ_{i<m} α_i − α_m) b_m : 1 ≤ 2Σ_{i<m} b_i + m b_m ≤ m}`.
pub fn lambda_up_closed_form(alpha: &PolygonWeights) -> Result<Rational, ConstructionError> {
    alpha.require_len(3)?;
    let a = alpha.weights();
    let m = a.len();
    let head: Rational = a[..m - 1].iter().cloned().sum();
    let mut coeffs: Vec<Rational> = a[..m - 1].iter().map(|x| x * rat(2, 1)).collect();
    coeffs.push(head - &a[m - 1]);
    let mut weights = vec![2u64; m - 1];
    weights.push(m as u64);
    Ok(weighted_max(&coeffs, &weights, 1, m as u64).expect("b = e_1 is admissible"))
}

/// The abelian closed form as published:
/// `max{2Σ_{i≤m−2} μ_i α_i + μ_{m−1}(Σ_{i≤m−1} α_i − α_m) + μ_m(α_{m−1} + α_m − Σ_{i≤m−2} α_i)}`
/// subject to `1 ≤ 2Σ_{i≤m−2} μ_i + (m−1)μ_{m−1} + (m−3)μ_m ≤ m−1`.
pub fn lambda_apol_closed_form(alpha: &PolygonWeights) -> Result<Rational, ConstructionError> {
    alpha.require_len(4)?;
    let a = alpha.weights();
    let m = a.len();
    let head: Rational = a[..m - 2].iter().cloned().sum();
    let mut coeffs: Vec<Rational> = a[..m - 2].iter().map(|x| x * rat(2, 1)).collect();
    coeffs.push(&head + &a[m - 2] - &a[m - 1]);
    coeffs.push(&a[m - 2] + &a[m - 1] - &head);
    let mut weights = vec![2u64; m - 2];
    weights.push(m as u64 - 1);
    weights.push(m as u64 - 3);
    Ok(weighted_max(&coeffs, &weights, 1, m as u64 - 1).expect("μ = e_1 is admissible"))
}

/// `(α_1, …, α_{m−2}, α_{m−1} − α_m)` under `α_{m−1} > α_m > ½ Σ_{j<m} α_j`.
///
/// Genericity is not required of either side.
pub fn pol_reduction(alpha: &PolygonWeights) -> Result<PolygonWeights, ConstructionError> {
    if alpha.len() < 5 {
        return Err(ConstructionError::WeightCount { min: 5, max: MAX_POLYGON_WEIGHTS, found: alpha.len() });
    }
    let a = alpha.weights();
    let m = a.len();
    let half: Rational = a[..m - 1].iter().cloned().sum::<Rational>() / rat(2, 1);
    if !(a[m - 2] > a[m - 1] && a[m - 1] > half) {
        return Err(ConstructionError::ReductionInapplicable);
    }
    let mut reduced = a[..m - 2].to_vec();
    reduced.push(&a[m - 2] - &a[m - 1]);
    PolygonWeights::positive(reduced)
}

pub fn pol_reduction_applies(alpha: &PolygonWeights) -> bool {
    pol_reduction(alpha).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::lambda_bound;
    use crate::fan::normal_fan;

    fn weights(v: &[(i64, i64)]) -> PolygonWeights {
        PolygonWeights::new(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn projective_spaces() {
        let p = projective_space(1).unwrap();
        assert_eq!(p.vertices(), &[RationalVector::from_i64(&[0]), RationalVector::from_i64(&[1])]);
        let p = projective_space(4).unwrap();
        assert_eq!((p.facets().len(), p.vertices().len()), (5, 5));
        assert_eq!(projective_space(0), Err(ConstructionError::ZeroDimension));
    }

    #[test]
    fn blowup_family_vertices() {
        for n in 2..=4 {
            let tau = rat(1, 4);
            let delta = Rational::one() - &tau;
            let rec = blown_up_projective_space(n, &tau).unwrap();
            let mut expected = vec![RationalVector::zero(n), LatticeVector::unit(n, n - 1).to_rational().scale(&delta)];
            for i in 0..n - 1 {
                let ei = LatticeVector::unit(n, i).to_rational();
                expected.push(ei.clone());
                // the cut meets the edge [e_i, e_n] at τe_i + δe_n
                expected.push(ei.scale(&tau).add(&LatticeVector::unit(n, n - 1).to_rational().scale(&delta)));
            }
            expected.sort();
            assert_eq!(rec.child.vertices(), expected.as_slice());
            let last = rec.child.facets().last().unwrap();
            assert_eq!(last.normal, LatticeVector::unit(n, n - 1).neg());
            assert_eq!(last.offset, -delta);
        }
    }

    #[test]
    fn blowup_epsilon_range() {
        let p = projective_space(2).unwrap();
        let v = RationalVector::from_i64(&[0, 1]);
        assert!(matches!(blowup_at_vertex(&p, &v, &rat(1, 1)), Err(ConstructionError::EpsilonOutOfRange { .. })));
        assert!(matches!(blowup_at_vertex(&p, &v, &rat(0, 1)), Err(ConstructionError::EpsilonOutOfRange { .. })));
    }

    #[test]
    fn square_corner_to_pentagon() {
        let f = |u: &[i64], n: i64| Facet::new(LatticeVector::from_i64(u), rat(n, 1));
        let square = DelzantPolytope::new(vec![f(&[1, 0], 0), f(&[-1, 0], -1), f(&[0, 1], 0), f(&[0, -1], -1)]).unwrap();
        let rec = blowup_at_vertex(&square, &RationalVector::zero(2), &rat(1, 3)).unwrap();
        assert_eq!(rec.child.vertices().len(), 5);
        assert_eq!(rec.child.volume(), rat(1, 1) - rat(1, 18));
        let again = rec.blowup(&RationalVector::from_i64(&[1, 1]), &rat(1, 2)).unwrap();
        assert_eq!(again.depth(), 2);
        assert_eq!(again.root(), &square);
    }

    #[test]
    fn fixtures_validate() {
        match fixture(FixtureName::Example41).unwrap() {
            Fixture::Fan(fan, omega) => {
                assert_eq!((fan.len(), fan.max_cones().len()), (6, 8));
                assert_eq!(omega.values()[0], rat(1, 1));
            }
            other => panic!("{other:?}"),
        }
        match fixture(FixtureName::Example43).unwrap() {
            Fixture::Fan(fan, _) => {
                assert_eq!((fan.len(), fan.max_cones().len()), (9, 24));
                assert!(fan.is_fano().unwrap().fano);
            }
            other => panic!("{other:?}"),
        }
        match fixture(FixtureName::Remark15).unwrap() {
            Fixture::Polytope(p) => assert_eq!(p.facets().len(), 7),
            other => panic!("{other:?}"),
        }
        assert_eq!("remark_1_5".parse::<FixtureName>().unwrap(), FixtureName::Remark15);
        assert!("example_9_9".parse::<FixtureName>().is_err());
    }

    #[test]
    fn genericity() {
        assert!(matches!(
            PolygonWeights::new(vec![rat(1, 1); 4]),
            Err(ConstructionError::NonGeneric { .. })
        ));
        assert!(PolygonWeights::new(vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(2, 1)]).is_ok());
    }

    #[test]
    fn up_space_templates() {
        let up = polygon_up_space(&weights(&[(1, 1), (1, 1), (1, 1), (2, 1)])).unwrap();
        assert_eq!(up.template.len(), 7);
        assert_eq!(up.polytope.dim(), 3);
        // lower faces x_i = −1 never reach Σx ≥ 2
        assert_eq!(up.redundant, vec![0, 1, 2]);
        assert_eq!(lambda_up_closed_form(&weights(&[(1, 1), (1, 1), (1, 1), (2, 1)])).unwrap(), rat(4, 1));
        assert_eq!(up.template_lambda().unwrap(), rat(4, 1));

        let up = polygon_up_space(&weights(&[(3, 2), (1, 1), (1, 1), (1, 1), (4, 3)])).unwrap();
        assert_eq!((up.template.len(), up.polytope.dim()), (9, 4));
    }

    #[test]
    fn up_closed_form_matches_irredundant_fan() {
        // Σ_{j<m} α_j − 2α_i > α_m for all i keeps every template facet
        let alpha = weights(&[(3, 1), (4, 1), (5, 1), (1, 1)]);
        let up = polygon_up_space(&alpha).unwrap();
        assert!(up.redundant.is_empty());
        let (fan, phi) = normal_fan(&up.polytope);
        assert_eq!(lambda_bound(&fan, &phi).unwrap().value, lambda_up_closed_form(&alpha).unwrap());
    }

    #[test]
    fn apol_templates() {
        let ap = polygon_apol_space(&weights(&[(1, 1), (1, 1), (1, 1), (1, 1), (3, 1)])).unwrap();
        assert_eq!((ap.template.len(), ap.polytope.dim()), (8, 3));
        let ap = polygon_apol_space(&weights(&[(1, 1), (1, 1), (1, 1), (2, 1)])).unwrap();
        assert_eq!(ap.polytope.dim(), 2);
    }

    fn positive(v: &[i64]) -> PolygonWeights {
        PolygonWeights::positive(v.iter().map(|&n| rat(n, 1)).collect()).unwrap()
    }

    #[test]
    fn reduction() {
        // 1 + 1 + 1 − 10 + 7 = 0, so neither side is generic
        let alpha = positive(&[1, 1, 1, 10, 7]);
        assert!(!alpha.is_generic());
        assert_eq!(pol_reduction(&alpha).unwrap(), positive(&[1, 1, 1, 3]));
        assert_eq!(
            pol_reduction(&positive(&[1, 1, 1, 7, 10])),
            Err(ConstructionError::ReductionInapplicable)
        );
        assert!(!pol_reduction_applies(&weights(&[(3, 2), (1, 1), (1, 1), (1, 1), (4, 3)])));
    }
}
