//! Delzant polytopes given by facet inequalities `⟨x, u_k⟩ ≥ λ_k`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    int, rank_rational, rat_int, solve_rational, Int, IntMatrix, LatticeError, LatticeVector, Rational,
    RationalVector, UnimodularMap,
};
use crate::lp::{LinearProgram, LpOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("need at least {needed} facets in dimension {dim}, found {found}")]
    TooFewFacets { dim: usize, needed: usize, found: usize },
    #[error("facet {facet} has dimension {found}, expected {expected}")]
    DimensionMismatch { facet: usize, expected: usize, found: usize },
    #[error("facet {0} has a zero normal")]
    ZeroNormal(usize),
    #[error("facet {facet} normal {normal} is not primitive")]
    NonPrimitive { facet: usize, normal: LatticeVector },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is not full-dimensional")]
    LowerDimensional,
    #[error("vertex {vertex} lies on {active} facets (not simple)")]
    NonSimple { vertex: RationalVector, active: usize },
    #[error("vertex {vertex} is not smooth (det = {det})")]
    NonSmooth { vertex: RationalVector, det: Int },
    #[error("facet {0} is redundant")]
    RedundantFacet(usize),
    #[error("{0} is not a vertex")]
    NotAVertex(RationalVector),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: LatticeVector, offset: Rational) -> Self {
        Self { normal, offset }
    }

    /// `⟨x, u⟩ − λ`, nonnegative exactly on the closed halfspace.
    pub fn slack(&self, x: &RationalVector) -> Rational {
        self.normal.dot_rational(x) - &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantPolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<RationalVector>,
    incidence: Vec<Vec<usize>>,
}

/// Weighted simplex `Δ(a_1, …, a_n)`; the closed version is
/// `conv(0, a_1 e_1, …, a_n e_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplexSpec {
    weights: Vec<Rational>,
}

impl SimplexSpec {
    pub fn new(weights: Vec<Rational>) -> Option<Self> {
        (!weights.is_empty() && weights.iter().all(Signed::is_positive)).then_some(Self { weights })
    }

    pub fn uniform(dim: usize, a: Rational) -> Option<Self> {
        Self::new(vec![a; dim])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn product(&self) -> Rational {
        self.weights.iter().fold(Rational::one(), |acc, w| acc * w)
    }

    /// Vertices of the closed image `map(conv(0, a_k e_k))`: the anchor first,
    /// then one per weight.
    pub fn image_vertices(&self, map: &UnimodularMap) -> Vec<RationalVector> {
        let mut out = vec![map.translation().clone()];
        for (k, a) in self.weights.iter().enumerate() {
            let column = map.matrix().column(k).to_rational().scale(a);
            out.push(map.translation().add(&column));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFigure {
    pub vertex: RationalVector,
    /// Active facet indices, ascending; edge `k` leaves facet `active[k]`.
    pub active: Vec<usize>,
    pub edge_dirs: Vec<LatticeVector>,
    pub ratios: Vec<Rational>,
    pub e_p: Rational,
}

impl VertexFigure {
    pub fn adjacent_vertices(&self) -> Vec<RationalVector> {
        self.edge_dirs
            .iter()
            .zip(&self.ratios)
            .map(|(v, r)| self.vertex.add(&v.to_rational().scale(r)))
            .collect()
    }

    pub fn edge_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.edge_dirs).expect("edges share the ambient dimension")
    }

    /// The map sending `conv(0, r_k e_k)` onto the vertex simplex at `p`.
    pub fn certificate(&self) -> (UnimodularMap, SimplexSpec) {
        let map = UnimodularMap::new(self.edge_matrix(), self.vertex.clone(), false)
            .expect("edge directions form a lattice basis");
        let simplex = SimplexSpec::new(self.ratios.clone()).expect("ratios are positive");
        (map, simplex)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateSource {
    VertexFigure(RationalVector),
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthCertificate {
    pub value: Rational,
    pub map: UnimodularMap,
    pub simplex: SimplexSpec,
    pub source: CertificateSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WidthSearch {
    /// Largest absolute entry of the extra candidate columns.
    pub entry_bound: u32,
    /// Deterministic cap on candidate matrices evaluated by the search.
    pub max_candidates: usize,
    pub strict_sl: bool,
}

impl Default for WidthSearch {
    fn default() -> Self {
        Self { entry_bound: 3, max_candidates: 400, strict_sl: false }
    }
}

fn rational_rows(vs: &[&LatticeVector]) -> Vec<Vec<Rational>> {
    vs.iter().map(|v| v.iter().map(rat_int).collect()).collect()
}

impl DelzantPolytope {
    /// Validates a facet presentation; redundant facets are an error.
    pub fn new(facets: Vec<Facet>) -> Result<Self, PolytopeError> {
        Self::build(facets, false).map(|(p, _)| p)
    }

    /// With `prune`, redundant facets are dropped and their original indices
    /// returned instead of raising an error.
    pub fn build(facets: Vec<Facet>, prune: bool) -> Result<(Self, Vec<usize>), PolytopeError> {
        let dim = facets.first().map_or(0, |f| f.normal.dim());
        if dim == 0 || facets.len() < dim + 1 {
            return Err(PolytopeError::TooFewFacets { dim, needed: dim + 1, found: facets.len() });
        }
        for (k, f) in facets.iter().enumerate() {
            if f.normal.dim() != dim {
                return Err(PolytopeError::DimensionMismatch { facet: k, expected: dim, found: f.normal.dim() });
            }
            if f.normal.is_zero() {
                return Err(PolytopeError::ZeroNormal(k));
            }
            if !f.normal.is_primitive() {
                return Err(PolytopeError::NonPrimitive { facet: k, normal: f.normal.clone() });
            }
        }
        check_bounded(dim, &facets)?;
        check_full_dimensional(dim, &facets)?;

        let (vertices, incidence) = enumerate_vertices(dim, &facets);
        let redundant: Vec<usize> = (0..facets.len())
            .filter(|&k| !supports_facet(dim, k, &vertices, &incidence))
            .collect();
        if !redundant.is_empty() {
            if !prune {
                return Err(PolytopeError::RedundantFacet(redundant[0]));
            }
            let kept: Vec<Facet> = facets
                .into_iter()
                .enumerate()
                .filter(|(k, _)| !redundant.contains(k))
                .map(|(_, f)| f)
                .collect();
            let (p, _) = Self::build(kept, false)?;
            return Ok((p, redundant));
        }

        let polytope = Self { dim, facets, vertices, incidence };
        polytope.check_simple_and_smooth()?;
        Ok((polytope, Vec::new()))
    }

    fn check_simple_and_smooth(&self) -> Result<(), PolytopeError> {
        for (v, act) in self.vertices.iter().zip(&self.incidence) {
            if act.len() != self.dim {
                return Err(PolytopeError::NonSimple { vertex: v.clone(), active: act.len() });
            }
            let det = self.active_matrix(act).det();
            if !det.abs().is_one() {
                return Err(PolytopeError::NonSmooth { vertex: v.clone(), det });
            }
        }
        Ok(())
    }

    fn active_matrix(&self, active: &[usize]) -> IntMatrix {
        let rows: Vec<LatticeVector> = active.iter().map(|&k| self.facets[k].normal.clone()).collect();
        IntMatrix::from_row_vectors(&rows).expect("normals share the ambient dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn normals(&self) -> Vec<LatticeVector> {
        self.facets.iter().map(|f| f.normal.clone()).collect()
    }

    pub fn offsets(&self) -> Vec<Rational> {
        self.facets.iter().map(|f| f.offset.clone()).collect()
    }

    /// Vertices in ascending lexicographic order.
    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    /// Active facet indices per vertex, aligned with `vertices()`.
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn vertex_index(&self, p: &RationalVector) -> Option<usize> {
        self.vertices.binary_search(p).ok()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn contains_in_interior(&self, x: &RationalVector) -> bool {
        self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    pub fn vertex_figure(&self, p: &RationalVector) -> Result<VertexFigure, PolytopeError> {
        let idx = self.vertex_index(p).ok_or_else(|| PolytopeError::NotAVertex(p.clone()))?;
        Ok(self.vertex_figure_at(idx))
    }

    pub fn vertex_figure_at(&self, idx: usize) -> VertexFigure {
        let p = &self.vertices[idx];
        let active = self.incidence[idx].clone();
        let inverse = self
            .active_matrix(&active)
            .inverse_unimodular()
            .expect("smooth vertex has a unimodular cone");
        let mut edge_dirs = Vec::with_capacity(self.dim);
        let mut ratios = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let dir = inverse.column(k);
            let mut best: Option<Rational> = None;
            for f in &self.facets {
                let rate = f.normal.dot(&dir);
                if !rate.is_negative() {
                    continue;
                }
                let step = f.slack(p) / rat_int(&-rate);
                if best.as_ref().is_none_or(|b| step < *b) {
                    best = Some(step);
                }
            }
            edge_dirs.push(dir);
            ratios.push(best.expect("bounded polytope blocks every edge"));
        }
        let e_p = ratios.iter().min().cloned().expect("dimension is positive");
        VertexFigure { vertex: p.clone(), active, edge_dirs, ratios, e_p }
    }

    pub fn vertex_figures(&self) -> Vec<VertexFigure> {
        (0..self.vertices.len()).map(|i| self.vertex_figure_at(i)).collect()
    }

    /// `max_p E_p` with the lexicographically smallest attaining vertex.
    pub fn max_vertex_bound(&self) -> (Rational, RationalVector) {
        let mut best: Option<VertexFigure> = None;
        for fig in self.vertex_figures() {
            if best.as_ref().is_none_or(|b| fig.e_p > b.e_p) {
                best = Some(fig);
            }
        }
        let best = best.expect("polytope has vertices");
        (best.e_p, best.vertex)
    }

    /// Closed inclusion of `map(conv(0, a_k e_k))` in the polytope.
    pub fn verify_simplex_inclusion(&self, map: &UnimodularMap, simplex: &SimplexSpec) -> Result<bool, PolytopeError> {
        if map.dim() != self.dim {
            return Err(PolytopeError::DimensionMismatch { facet: 0, expected: self.dim, found: map.dim() });
        }
        if simplex.dim() != self.dim {
            return Err(PolytopeError::DimensionMismatch { facet: 0, expected: self.dim, found: simplex.dim() });
        }
        Ok(simplex.image_vertices(map).iter().all(|v| self.contains(v)))
    }

    /// Largest uniform `a` with `M(conv(0, a e_k)) + t ⊆ Δ` over all `t`,
    /// together with an optimal `t`.
    pub fn fit_uniform_simplex(&self, matrix: &IntMatrix) -> Option<(Rational, RationalVector)> {
        let n = self.dim;
        let mut lp = LinearProgram::new(n + 1);
        for f in &self.facets {
            let w = matrix.transpose().mul_lattice(&f.normal);
            let lowest = w.iter().min().cloned().unwrap_or_default();
            let c = if lowest.is_negative() { -lowest } else { Int::zero() };
            let mut row: Vec<Rational> = f.normal.iter().map(rat_int).collect();
            row.push(-rat_int(&c));
            lp.at_least(row, f.offset.clone());
        }
        let mut nonneg = vec![Rational::zero(); n + 1];
        nonneg[n] = Rational::one();
        lp.at_least(nonneg.clone(), Rational::zero());
        match lp.maximize(&nonneg) {
            LpOutcome::Optimal { value, point } => {
                Some((value, RationalVector::new(point[..n].to_vec())))
            }
            _ => None,
        }
    }

    /// Certified lower bound for the lattice width invariant `W(Δ)`.
    ///
    /// Starts from the best vertex figure, then re-fits every vertex-figure
    /// matrix with a free translation, then scans unimodular matrices whose
    /// columns come from the polytope's edge directions and small primitive
    /// vectors. Every candidate is re-verified exactly before it is kept.
    pub fn width_lower_bound(&self, search: &WidthSearch) -> WidthCertificate {
        self.width_lower_bound_until(search, None)
    }

    /// As [`Self::width_lower_bound`], but stops once the bound reaches
    /// `stop_at` (a known upper bound, say).
    pub fn width_lower_bound_until(&self, search: &WidthSearch, stop_at: Option<&Rational>) -> WidthCertificate {
        let n = self.dim;
        let figures = self.vertex_figures();
        let (e_best, p_best) = self.max_vertex_bound();
        let fig = &figures[self.vertex_index(&p_best).expect("vertex")];
        let mut best = WidthCertificate {
            value: e_best.clone(),
            map: uniform_anchor(fig.edge_matrix(), fig.vertex.clone(), &e_best, search.strict_sl),
            simplex: SimplexSpec::uniform(n, e_best).expect("positive"),
            source: CertificateSource::VertexFigure(p_best),
        };

        // extent of Δ along each facet normal; a simplex of size a spans
        // a·(max(0, ⟨Me_j,u⟩) − min(0, ⟨Me_j,u⟩)) along u
        let extents: Vec<(LatticeVector, Rational)> = self
            .facets
            .iter()
            .map(|f| {
                let values: Vec<Rational> = self.vertices.iter().map(|v| f.normal.dot_rational(v)).collect();
                let hi = values.iter().max().expect("vertices").clone();
                let lo = values.iter().min().expect("vertices").clone();
                (f.normal.clone(), hi - lo)
            })
            .collect();
        let cheap_bound = |matrix: &IntMatrix| -> Option<Rational> {
            let mt = matrix.transpose();
            extents
                .iter()
                .filter_map(|(u, extent)| {
                    let w = mt.mul_lattice(u);
                    let hi = w.iter().max().cloned().unwrap_or_default().max(Int::zero());
                    let lo = w.iter().min().cloned().unwrap_or_default().min(Int::zero());
                    let span = hi - lo;
                    (!span.is_zero()).then(|| extent / rat_int(&span))
                })
                .min()
        };

        let consider = |matrix: IntMatrix, best: &mut WidthCertificate| {
            if stop_at.is_some_and(|s| best.value >= *s) {
                return;
            }
            if cheap_bound(&matrix).is_some_and(|b| b <= best.value) {
                return;
            }
            let Some((a, t)) = self.fit_uniform_simplex(&matrix) else { return };
            if a <= best.value {
                return;
            }
            let map = uniform_anchor_translated(matrix, t, &a, search.strict_sl);
            let simplex = SimplexSpec::uniform(n, a.clone()).expect("positive");
            if self.verify_simplex_inclusion(&map, &simplex) == Ok(true) {
                *best = WidthCertificate { value: a, map, simplex, source: CertificateSource::Search };
            }
        };

        let mut seen: BTreeSet<Vec<LatticeVector>> = BTreeSet::new();
        for f in &figures {
            let mut key = f.edge_dirs.clone();
            key.sort();
            if seen.insert(key) {
                consider(f.edge_matrix(), &mut best);
            }
        }

        let mut pool: Vec<LatticeVector> = Vec::new();
        let mut in_pool = BTreeSet::new();
        for f in &figures {
            for d in &f.edge_dirs {
                for v in [d.clone(), d.neg()] {
                    if in_pool.insert(v.clone()) {
                        pool.push(v);
                    }
                }
            }
        }
        for v in small_primitive_vectors(n, search.entry_bound) {
            if in_pool.insert(v.clone()) {
                pool.push(v);
            }
        }

        // machine-integer determinant filter when entries are small
        let small_pool: Option<Vec<Vec<i64>>> = (n <= 8)
            .then(|| {
                pool.iter()
                    .map(|v| v.to_i64().filter(|c| c.iter().all(|x| x.abs() <= 1 << 16)))
                    .collect::<Option<Vec<_>>>()
            })
            .flatten();

        let candidates: Box<dyn Iterator<Item = Vec<usize>>> = match small_pool {
            Some(small) => Box::new(unimodular_subsets(small, n)),
            None => Box::new((0..pool.len()).combinations(n)),
        };
        let mut evaluated = 0;
        for idx in candidates {
            if evaluated >= search.max_candidates || stop_at.is_some_and(|s| best.value >= *s) {
                break;
            }
            let cols: Vec<&LatticeVector> = idx.iter().map(|&i| &pool[i]).collect();
            let mut key: Vec<LatticeVector> = cols.iter().map(|&c| c.clone()).collect();
            key.sort();
            if seen.contains(&key) {
                continue;
            }
            let matrix = IntMatrix::from_columns(&key).expect("same dimension");
            if !matrix.det().abs().is_one() {
                continue;
            }
            seen.insert(key);
            evaluated += 1;
            consider(matrix, &mut best);
        }
        debug_assert_eq!(self.verify_simplex_inclusion(&best.map, &best.simplex), Ok(true));
        best
    }

    /// Euclidean volume via a pulling triangulation over the face lattice.
    pub fn volume(&self) -> Rational {
        let mut total = Rational::zero();
        let mut factorial = Int::one();
        for k in 2..=self.dim {
            factorial *= int(k as i64);
        }
        for simplex in self.pulling_triangulation(&BTreeSet::new(), self.dim) {
            let apex = &self.vertices[simplex[0]];
            let rows: Vec<Vec<Rational>> =
                simplex[1..].iter().map(|&i| self.vertices[i].sub(apex).into_coords()).collect();
            total += rational_det(rows).abs();
        }
        total / rat_int(&factorial)
    }

    fn face_vertices(&self, face: &BTreeSet<usize>) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| face.iter().all(|k| self.incidence[i].contains(k)))
            .collect()
    }

    fn pulling_triangulation(&self, face: &BTreeSet<usize>, face_dim: usize) -> Vec<Vec<usize>> {
        let verts = self.face_vertices(face);
        if face_dim == 0 {
            return vec![verts];
        }
        let apex = verts[0];
        let mut out = Vec::new();
        let candidates: BTreeSet<usize> = verts.iter().flat_map(|&v| self.incidence[v].iter().copied()).collect();
        for k in candidates {
            if face.contains(&k) || self.incidence[apex].contains(&k) {
                continue;
            }
            let mut sub = face.clone();
            sub.insert(k);
            for mut s in self.pulling_triangulation(&sub, face_dim - 1) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }

    /// Solves `r(λ_i + ⟨m, u_i⟩) = −1` for all facets and checks that
    /// `r(m + Δ)` is a lattice polytope whose only interior lattice point is 0.
    pub fn reflexive_normalization(&self) -> Option<(Rational, RationalVector)> {
        let n = self.dim;
        let mut lp = LinearProgram::new(n + 1);
        for f in &self.facets {
            let mut row: Vec<Rational> = f.normal.iter().map(rat_int).collect();
            row.push(Rational::one());
            lp.equal(row, -f.offset.clone());
        }
        let point = lp.feasible_point()?;
        let s = point[n].clone();
        if !s.is_positive() {
            return None;
        }
        let r = s.recip();
        let m = RationalVector::new(point[..n].to_vec());
        let image = self.translate(&m).scale(&r);
        let lattice_vertices: Option<Vec<LatticeVector>> = image.vertices.iter().map(|v| v.to_lattice()).collect();
        let lattice_vertices = lattice_vertices?;
        let interior = image.interior_lattice_points(&lattice_vertices);
        (interior == [LatticeVector::zero(n)]).then_some((r, m))
    }

    fn interior_lattice_points(&self, integral_vertices: &[LatticeVector]) -> Vec<LatticeVector> {
        let n = self.dim;
        let lo: Vec<i64> = (0..n)
            .map(|k| integral_vertices.iter().map(|v| v[k].clone()).min().unwrap_or_default())
            .map(|x| num_traits::ToPrimitive::to_i64(&x).expect("small coordinates"))
            .collect();
        let hi: Vec<i64> = (0..n)
            .map(|k| integral_vertices.iter().map(|v| v[k].clone()).max().unwrap_or_default())
            .map(|x| num_traits::ToPrimitive::to_i64(&x).expect("small coordinates"))
            .collect();
        let mut out = Vec::new();
        for point in (0..n).map(|k| lo[k]..=hi[k]).multi_cartesian_product() {
            let x = LatticeVector::from_i64(&point);
            if self.contains_in_interior(&x.to_rational()) {
                out.push(x);
            }
        }
        out
    }

    /// `{x + t : x ∈ Δ}`.
    pub fn translate(&self, t: &RationalVector) -> DelzantPolytope {
        self.map_unchecked(|f| Facet::new(f.normal.clone(), &f.offset + f.normal.dot_rational(t)), |v| v.add(t))
    }

    /// `{r x : x ∈ Δ}` for positive `r`.
    pub fn scale(&self, r: &Rational) -> DelzantPolytope {
        assert!(r.is_positive(), "scale factor must be positive");
        self.map_unchecked(|f| Facet::new(f.normal.clone(), &f.offset * r), |v| v.scale(r))
    }

    /// `{M x + t : x ∈ Δ}`.
    pub fn transform(&self, map: &UnimodularMap) -> DelzantPolytope {
        let inv_t = map.matrix().inverse_unimodular().expect("unimodular").transpose();
        self.map_unchecked(
            |f| {
                let normal = inv_t.mul_lattice(&f.normal);
                let offset = &f.offset + normal.dot_rational(map.translation());
                Facet::new(normal, offset)
            },
            |v| map.apply(v),
        )
    }

    /// Applies an affine lattice automorphism; validity is preserved, only the
    /// vertex order needs restoring.
    fn map_unchecked(
        &self,
        facet_map: impl Fn(&Facet) -> Facet,
        point_map: impl Fn(&RationalVector) -> RationalVector,
    ) -> DelzantPolytope {
        let facets: Vec<Facet> = self.facets.iter().map(facet_map).collect();
        let mut pairs: Vec<(RationalVector, Vec<usize>)> =
            self.vertices.iter().map(&point_map).zip(self.incidence.iter().cloned()).collect();
        pairs.sort();
        let (vertices, incidence) = pairs.into_iter().unzip();
        DelzantPolytope { dim: self.dim, facets, vertices, incidence }
    }

    /// An affine lattice map `Ψ x + t` carrying `self` onto `other`.
    pub fn isomorphism_to(&self, other: &DelzantPolytope) -> Option<UnimodularMap> {
        if self.dim != other.dim || self.vertices.len() != other.vertices.len() || self.facets.len() != other.facets.len() {
            return None;
        }
        let source = self.vertex_figure_at(0);
        let source_inv = source.edge_matrix().inverse_unimodular().ok()?;
        let targets: BTreeSet<&RationalVector> = other.vertices.iter().collect();
        for fig in other.vertex_figures() {
            for perm in (0..self.dim).permutations(self.dim) {
                let cols: Vec<LatticeVector> = perm.iter().map(|&k| fig.edge_dirs[k].clone()).collect();
                let psi = IntMatrix::from_columns(&cols).ok()?.mul(&source_inv);
                let t = fig.vertex.sub(&psi.mul_rational(&source.vertex));
                let Ok(map) = UnimodularMap::new(psi, t, false) else { continue };
                if self.vertices.iter().all(|v| targets.contains(&map.apply(v))) {
                    return Some(map);
                }
            }
        }
        None
    }

    /// Vertices of `conv(p, p_1, …, p_n)` for the vertex `p`.
    pub fn vertex_simplex(&self, p: &RationalVector) -> Result<Vec<RationalVector>, PolytopeError> {
        let fig = self.vertex_figure(p)?;
        let mut out = vec![fig.vertex.clone()];
        out.extend(fig.adjacent_vertices());
        Ok(out)
    }
}

fn uniform_anchor(matrix: IntMatrix, anchor: RationalVector, a: &Rational, strict_sl: bool) -> UnimodularMap {
    uniform_anchor_translated(matrix, anchor, a, strict_sl)
}

/// Map for a uniform simplex; with `strict_sl` a determinant −1 is repaired
/// by swapping two columns (dimension ≥ 2) or by flipping the segment
/// (dimension 1), neither of which changes the image.
fn uniform_anchor_translated(matrix: IntMatrix, anchor: RationalVector, a: &Rational, strict_sl: bool) -> UnimodularMap {
    let det = matrix.det();
    if strict_sl && det.is_negative() {
        let mut cols = matrix.columns();
        if cols.len() >= 2 {
            cols.swap(0, 1);
            let m = IntMatrix::from_columns(&cols).expect("square");
            return UnimodularMap::new(m, anchor, true).expect("det +1 after swap");
        }
        let shifted = anchor.add(&cols[0].to_rational().scale(a));
        let m = IntMatrix::from_columns(&[cols[0].neg()]).expect("square");
        return UnimodularMap::new(m, shifted, true).expect("det +1 after flip");
    }
    UnimodularMap::new(matrix, anchor, false).expect("unimodular candidate")
}

/// Index sets `i_1 < … < i_n` whose columns have determinant ±1, in
/// lexicographic order. The last column `x` completes a prefix iff
/// `c·x = ±1` for the prefix's cofactor vector `c`.
fn unimodular_subsets(pool: Vec<Vec<i64>>, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let len = pool.len();
    (0..len).combinations(n - 1).flat_map(move |prefix| {
        let cols: Vec<&[i64]> = prefix.iter().map(|&i| pool[i].as_slice()).collect();
        let cofactors: Vec<i128> = (0..n)
            .map(|row| {
                let minor: Vec<Vec<i64>> = cols
                    .iter()
                    .map(|c| c.iter().enumerate().filter(|&(r, _)| r != row).map(|(_, &x)| x).collect())
                    .collect();
                let refs: Vec<&[i64]> = minor.iter().map(|c| c.as_slice()).collect();
                let sign = if (row + n - 1).is_multiple_of(2) { 1 } else { -1 };
                sign * small_det(&refs)
            })
            .collect();
        let coprime = cofactors.iter().fold(0i128, |g, &c| num_integer::gcd(g, c)) == 1;
        let start = prefix.last().map_or(0, |&i| i + 1);
        let matches: Vec<Vec<usize>> = if coprime {
            (start..len)
                .filter(|&j| {
                    let d: i128 = cofactors.iter().zip(&pool[j]).map(|(c, &x)| c * x as i128).sum();
                    d.abs() == 1
                })
                .map(|j| {
                    let mut idx = prefix.clone();
                    idx.push(j);
                    idx
                })
                .collect()
        } else {
            Vec::new()
        };
        matches
    })
}

/// Bareiss determinant of the matrix with the given columns.
fn small_det(cols: &[&[i64]]) -> i128 {
    if cols.is_empty() {
        return 1;
    }
    let n = cols.len();
    let mut m: Vec<Vec<i128>> = (0..n).map(|i| cols.iter().map(|c| c[i] as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn small_primitive_vectors(n: usize, bound: u32) -> Vec<LatticeVector> {
    let b = bound as i64;
    let mut out: Vec<LatticeVector> = (0..n)
        .map(|_| -b..=b)
        .multi_cartesian_product()
        .map(|c| LatticeVector::from_i64(&c))
        .filter(|v| !v.is_zero() && v.is_primitive())
        .collect();
    out.sort_by(|x, y| x.max_abs().cmp(&y.max_abs()).then_with(|| x.cmp(y)));
    out
}

fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &m[col][col];
            let (lo, hi) = m.split_at_mut(i);
            for (x, p) in hi[0].iter_mut().zip(&lo[col]) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Bounded iff the normals admit a strictly positive zero combination and
/// span the space.
fn check_bounded(dim: usize, facets: &[Facet]) -> Result<(), PolytopeError> {
    let normals: Vec<&LatticeVector> = facets.iter().map(|f| &f.normal).collect();
    if rank_rational(&rational_rows(&normals)) < dim {
        return Err(PolytopeError::Unbounded);
    }
    let d = facets.len();
    let mut lp = LinearProgram::new(d);
    for k in 0..d {
        let mut row = vec![Rational::zero(); d];
        row[k] = Rational::one();
        lp.at_least(row, Rational::one());
    }
    for axis in 0..dim {
        let row: Vec<Rational> = normals.iter().map(|u| rat_int(&u[axis])).collect();
        lp.equal(row, Rational::zero());
    }
    lp.feasible_point().map(|_| ()).ok_or(PolytopeError::Unbounded)
}

/// Largest uniform inner slack; positive iff the interior is nonempty.
fn check_full_dimensional(dim: usize, facets: &[Facet]) -> Result<(), PolytopeError> {
    let mut lp = LinearProgram::new(dim + 1);
    for f in facets {
        let mut row: Vec<Rational> = f.normal.iter().map(rat_int).collect();
        row.push(-Rational::one());
        lp.at_least(row, f.offset.clone());
    }
    let mut cap = vec![Rational::zero(); dim + 1];
    cap[dim] = Rational::one();
    lp.at_most(cap.clone(), Rational::one());
    match lp.maximize(&cap) {
        LpOutcome::Optimal { value, .. } if value.is_positive() => Ok(()),
        LpOutcome::Optimal { value, .. } if value.is_zero() => Err(PolytopeError::LowerDimensional),
        _ => Err(PolytopeError::Empty),
    }
}

fn enumerate_vertices(dim: usize, facets: &[Facet]) -> (Vec<RationalVector>, Vec<Vec<usize>>) {
    let mut found: BTreeMap<RationalVector, Vec<usize>> = BTreeMap::new();
    for subset in (0..facets.len()).combinations(dim) {
        let rows: Vec<&LatticeVector> = subset.iter().map(|&k| &facets[k].normal).collect();
        let rhs = RationalVector::new(subset.iter().map(|&k| facets[k].offset.clone()).collect());
        let Ok(x) = solve_rational(&rational_rows(&rows), &rhs) else { continue };
        if found.contains_key(&x) || !facets.iter().all(|f| !f.slack(&x).is_negative()) {
            continue;
        }
        let active = (0..facets.len()).filter(|&k| facets[k].slack(&x).is_zero()).collect();
        found.insert(x, active);
    }
    found.into_iter().unzip()
}

fn supports_facet(dim: usize, k: usize, vertices: &[RationalVector], incidence: &[Vec<usize>]) -> bool {
    let on: Vec<&RationalVector> = vertices.iter().zip(incidence).filter(|(_, a)| a.contains(&k)).map(|(v, _)| v).collect();
    let Some(base) = on.first() else { return false };
    let diffs: Vec<Vec<Rational>> = on[1..].iter().map(|v| v.sub(base).into_coords()).collect();
    rank_rational(&diffs) + 1 == dim
}
