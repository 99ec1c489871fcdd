//! Complete regular fans and piecewise-linear support functions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{rat_int, solve_rational, Int, IntMatrix, LatticeVector, Rational, RationalVector};
use crate::lp::LinearProgram;
use crate::polytope::{DelzantPolytope, Facet, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("fan has no generators")]
    Empty,
    #[error("generator {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("generator {index} = {vector} is not primitive")]
    NonPrimitive { index: usize, vector: LatticeVector },
    #[error("max cone {cone} has {found} generators, expected {expected}")]
    ConeSize { cone: usize, expected: usize, found: usize },
    #[error("max cone {cone} refers to generator {index} out of range")]
    IndexOutOfRange { cone: usize, index: usize },
    #[error("support function has {found} values for {expected} generators")]
    SupportLength { expected: usize, found: usize },
    #[error("fan is invalid: {}", .0.iter().map(ToString::to_string).join("; "))]
    Invalid(Vec<FanDiagnostic>),
    #[error("no cone contains {0}")]
    ConeNotFound(LatticeVector),
    #[error("support function is not strictly convex: {0}")]
    NotStrictlyConvex(ConvexityViolation),
    #[error("support polytope does not reproduce the fan")]
    RoundTrip,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FanDiagnostic {
    DuplicateGenerator { first: usize, second: usize },
    UnusedGenerator(usize),
    DuplicateCone(Vec<usize>),
    NotRegular { cone: Vec<usize>, det: Int },
    ImproperIntersection { first: Vec<usize>, second: Vec<usize> },
    WallMultiplicity { wall: Vec<usize>, cones: usize },
    Disconnected { components: usize },
}

impl fmt::Display for FanDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateGenerator { first, second } => write!(f, "generators {first} and {second} coincide"),
            Self::UnusedGenerator(k) => write!(f, "generator {k} lies in no max cone"),
            Self::DuplicateCone(c) => write!(f, "max cone {c:?} listed twice"),
            Self::NotRegular { cone, det } => write!(f, "max cone {cone:?} has det {det}"),
            Self::ImproperIntersection { first, second } => {
                write!(f, "cones {first:?} and {second:?} do not meet in a common face")
            }
            Self::WallMultiplicity { wall, cones } => write!(f, "wall {wall:?} lies in {cones} max cones (need 2)"),
            Self::Disconnected { components } => write!(f, "cone adjacency graph has {components} components"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    dim: usize,
    generators: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportFunction {
    values: Vec<Rational>,
}

impl SupportFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn constant(d: usize, value: Rational) -> Self {
        Self { values: vec![value; d] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Degree pairing `Σ μ_k φ(u_k)`.
    pub fn pair(&self, coeffs: &[Int]) -> Rational {
        self.values
            .iter()
            .zip(coeffs)
            .fold(Rational::zero(), |acc, (v, c)| acc + v * rat_int(c))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { values: self.values.iter().map(|v| v * r).collect() }
    }

    pub fn max_value(&self) -> Rational {
        self.values.iter().max().cloned().unwrap_or_default()
    }

    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self { values: indices.iter().map(|&k| self.values[k].clone()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimitiveCollection {
    pub indices: Vec<usize>,
    /// Generators of the cone σ(P) containing `Σ_{i∈P} u_i` in its relative
    /// interior; empty when the sum is zero.
    pub target_cone: Vec<usize>,
    pub coefficients: Vec<Int>,
    pub degree: Int,
}

impl PrimitiveCollection {
    /// `d`-vector of the primitive relation `Σ_P u_i − Σ c_j u_j = 0`.
    pub fn relation_vector(&self, d: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); d];
        for &i in &self.indices {
            v[i] += Int::one();
        }
        for (&j, c) in self.target_cone.iter().zip(&self.coefficients) {
            v[j] -= c;
        }
        v
    }
}

impl fmt::Display for PrimitiveCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} (degree {})", self.indices.iter().map(|i| format!("u{}", i + 1)).join(","), self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WallRelation {
    pub wall: Vec<usize>,
    pub flanks: (usize, usize),
    /// `b_1..b_{n−1}` on the wall generators, then the two flank ones.
    pub coefficients: Vec<Int>,
    pub relation_vector: Vec<Int>,
}

impl fmt::Display for WallRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wall {:?} between u{} and u{}", self.wall, self.flanks.0 + 1, self.flanks.1 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexityViolation {
    Wall(WallRelation),
    Collection(PrimitiveCollection),
}

impl fmt::Display for ConvexityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Wall(w) => write!(f, "{w}"),
            Self::Collection(p) => write!(f, "primitive collection {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoVerdict {
    pub fano: bool,
    /// A primitive collection of nonpositive degree when not Fano.
    pub witness: Option<PrimitiveCollection>,
    /// Whether the anticanonical function `φ ≡ 1` is strictly convex; must
    /// agree with `fano`.
    pub anticanonical_convex: bool,
}

impl Fan {
    /// Structural checks only; see [`Fan::validate`] for the geometric ones.
    pub fn new(dim: usize, generators: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self, FanError> {
        if generators.is_empty() {
            return Err(FanError::Empty);
        }
        for (index, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return Err(FanError::DimensionMismatch { index, expected: dim, found: g.dim() });
            }
            if g.is_zero() || !g.is_primitive() {
                return Err(FanError::NonPrimitive { index, vector: g.clone() });
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, mut cone) in max_cones.into_iter().enumerate() {
            if let Some(&index) = cone.iter().find(|&&i| i >= generators.len()) {
                return Err(FanError::IndexOutOfRange { cone: c, index });
            }
            cone.sort_unstable();
            cone.dedup();
            if cone.len() != dim {
                return Err(FanError::ConeSize { cone: c, expected: dim, found: cone.len() });
            }
            cones.push(cone);
        }
        cones.sort();
        Ok(Self { dim, generators, max_cones: cones })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        let cols: Vec<LatticeVector> = cone.iter().map(|&i| self.generators[i].clone()).collect();
        IntMatrix::from_columns(&cols).expect("generators share the ambient dimension")
    }

    /// Coordinates of `x` in the basis of the given max cone.
    fn cone_coordinates(&self, cone: &[usize], x: &RationalVector) -> Option<RationalVector> {
        solve_rational(&self.cone_matrix(cone).to_rational_rows(), x).ok()
    }

    pub fn validate(&self) -> Vec<FanDiagnostic> {
        let mut out = Vec::new();
        for (i, j) in (0..self.len()).tuple_combinations() {
            if self.generators[i] == self.generators[j] {
                out.push(FanDiagnostic::DuplicateGenerator { first: i, second: j });
            }
        }
        let used: BTreeSet<usize> = self.max_cones.iter().flatten().copied().collect();
        out.extend((0..self.len()).filter(|k| !used.contains(k)).map(FanDiagnostic::UnusedGenerator));
        for (a, b) in self.max_cones.iter().tuple_windows() {
            if a == b {
                out.push(FanDiagnostic::DuplicateCone(a.clone()));
            }
        }
        let mut regular = true;
        for cone in &self.max_cones {
            let det = self.cone_matrix(cone).det();
            if !det.abs().is_one() {
                regular = false;
                out.push(FanDiagnostic::NotRegular { cone: cone.clone(), det });
            }
        }
        if regular {
            for (a, b) in self.max_cones.iter().tuple_combinations() {
                if a != b && !self.meet_properly(a, b) {
                    out.push(FanDiagnostic::ImproperIntersection { first: a.clone(), second: b.clone() });
                }
            }
        }
        for (wall, cones) in self.walls() {
            if cones.len() != 2 {
                out.push(FanDiagnostic::WallMultiplicity { wall, cones: cones.len() });
            }
        }
        let components = self.adjacency_components();
        if components > 1 {
            out.push(FanDiagnostic::Disconnected { components });
        }
        out
    }

    pub fn validated(self) -> Result<Self, FanError> {
        let diagnostics = self.validate();
        if diagnostics.is_empty() {
            Ok(self)
        } else {
            Err(FanError::Invalid(diagnostics))
        }
    }

    /// Separation test: the cones meet in their common face iff some `h`
    /// vanishes on the shared generators, is positive on the rest of `a` and
    /// negative on the rest of `b`.
    fn meet_properly(&self, a: &[usize], b: &[usize]) -> bool {
        let n = self.dim;
        let mut lp = LinearProgram::new(n);
        let row = |k: usize| -> Vec<Rational> { self.generators[k].iter().map(rat_int).collect() };
        for &k in a {
            if b.contains(&k) {
                lp.equal(row(k), Rational::zero());
            } else {
                lp.at_least(row(k), Rational::one());
            }
        }
        for &k in b.iter().filter(|k| !a.contains(k)) {
            lp.at_most(row(k), -Rational::one());
        }
        lp.feasible_point().is_some()
    }

    /// Every (n−1)-face of a max cone with the max cones containing it.
    pub fn walls(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (c, cone) in self.max_cones.iter().enumerate() {
            for skip in 0..cone.len() {
                let wall: Vec<usize> = cone.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &g)| g).collect();
                walls.entry(wall).or_default().push(c);
            }
        }
        walls
    }

    fn adjacency_components(&self) -> usize {
        let m = self.max_cones.len();
        let mut adj = vec![Vec::new(); m];
        for cones in self.walls().values() {
            for (&x, &y) in cones.iter().tuple_combinations() {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        let mut seen = vec![false; m];
        let mut components = 0;
        for start in 0..m {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                for &nb in &adj[c] {
                    if !seen[nb] {
                        seen[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }
        components
    }

    fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut faces = BTreeSet::new();
        for cone in &self.max_cones {
            for k in 0..=cone.len() {
                for s in cone.iter().copied().combinations(k) {
                    faces.insert(s);
                }
            }
        }
        faces
    }

    /// The max cone containing `x` and the coordinates of `x` in its basis.
    pub fn locate(&self, x: &RationalVector) -> Option<(usize, RationalVector)> {
        self.max_cones.iter().enumerate().find_map(|(c, cone)| {
            let coords = self.cone_coordinates(cone, x)?;
            coords.iter().all(|t| !t.is_negative()).then_some((c, coords))
        })
    }

    /// Evaluates the piecewise-linear extension of `φ` at `x`.
    pub fn evaluate(&self, phi: &SupportFunction, x: &RationalVector) -> Result<Rational, FanError> {
        let (c, coords) = self
            .locate(x)
            .ok_or_else(|| FanError::ConeNotFound(x.to_lattice().unwrap_or_else(|| LatticeVector::zero(self.dim))))?;
        Ok(self.max_cones[c]
            .iter()
            .zip(coords.iter())
            .fold(Rational::zero(), |acc, (&g, t)| acc + t * &phi.values[g]))
    }

    /// Minimal non-faces with their primitive relations, ordered by size then
    /// lexicographically.
    pub fn primitive_collections(&self) -> Result<Vec<PrimitiveCollection>, FanError> {
        let faces = self.faces();
        let mut out = Vec::new();
        for size in 2..=self.dim + 1 {
            for subset in (0..self.len()).combinations(size) {
                if faces.contains(&subset) {
                    continue;
                }
                let minimal = subset
                    .iter()
                    .all(|skip| faces.contains(&subset.iter().copied().filter(|x| x != skip).collect::<Vec<_>>()));
                if minimal {
                    out.push(self.primitive_relation(subset)?);
                }
            }
        }
        Ok(out)
    }

    fn primitive_relation(&self, indices: Vec<usize>) -> Result<PrimitiveCollection, FanError> {
        let sum = indices
            .iter()
            .fold(LatticeVector::zero(self.dim), |acc, &i| acc.add(&self.generators[i]));
        let (c, coords) = self.locate(&sum.to_rational()).ok_or_else(|| FanError::ConeNotFound(sum.clone()))?;
        let mut target_cone = Vec::new();
        let mut coefficients = Vec::new();
        for (&g, t) in self.max_cones[c].iter().zip(coords.iter()) {
            if t.is_positive() {
                target_cone.push(g);
                coefficients.push(t.to_integer());
            }
        }
        let degree = Int::from(indices.len()) - coefficients.iter().sum::<Int>();
        Ok(PrimitiveCollection { indices, target_cone, coefficients, degree })
    }

    /// One relation per wall with both flank coefficients equal to 1.
    pub fn wall_relations(&self) -> Vec<WallRelation> {
        let mut out = Vec::new();
        for (wall, cones) in self.walls() {
            if cones.len() != 2 {
                continue;
            }
            let flank = |c: usize| *self.max_cones[c].iter().find(|g| !wall.contains(g)).expect("cone extends wall");
            let (mut a, mut b) = (flank(cones[0]), flank(cones[1]));
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            let mut basis = wall.clone();
            basis.push(a);
            let coords = self
                .cone_coordinates(&basis, &self.generators[b].to_rational())
                .expect("max cone is a basis");
            let mut coefficients: Vec<Int> = coords[..wall.len()].iter().map(|t| -t.to_integer()).collect();
            coefficients.push(Int::one());
            coefficients.push(Int::one());
            let mut relation_vector = vec![Int::zero(); self.len()];
            for (&g, c) in wall.iter().zip(&coefficients) {
                relation_vector[g] = c.clone();
            }
            relation_vector[a] = Int::one();
            relation_vector[b] = Int::one();
            out.push(WallRelation { wall, flanks: (a, b), coefficients, relation_vector });
        }
        out
    }

    fn check_support(&self, phi: &SupportFunction) -> Result<(), FanError> {
        if phi.len() != self.len() {
            return Err(FanError::SupportLength { expected: self.len(), found: phi.len() });
        }
        Ok(())
    }

    /// Wall criterion: `Σ φ(u_k) v(σ)_k > 0` for every wall.
    pub fn strict_convexity(&self, phi: &SupportFunction) -> Result<Result<(), ConvexityViolation>, FanError> {
        self.check_support(phi)?;
        Ok(match self.wall_relations().into_iter().find(|w| !phi.pair(&w.relation_vector).is_positive()) {
            Some(w) => Err(ConvexityViolation::Wall(w)),
            None => Ok(()),
        })
    }

    pub fn is_strictly_convex(&self, phi: &SupportFunction) -> bool {
        matches!(self.strict_convexity(phi), Ok(Ok(())))
    }

    /// Collection criterion: `Σ_{i∈P} φ(u_i) > φ(Σ_{i∈P} u_i)` for every
    /// primitive collection.
    pub fn strict_convexity_by_collections(
        &self,
        phi: &SupportFunction,
    ) -> Result<Result<(), ConvexityViolation>, FanError> {
        self.check_support(phi)?;
        for p in self.primitive_collections()? {
            let lhs: Rational = p.indices.iter().fold(Rational::zero(), |acc, &i| acc + &phi.values[i]);
            let rhs: Rational = p
                .target_cone
                .iter()
                .zip(&p.coefficients)
                .fold(Rational::zero(), |acc, (&j, c)| acc + &phi.values[j] * rat_int(c));
            if lhs <= rhs {
                return Ok(Err(ConvexityViolation::Collection(p)));
            }
        }
        Ok(Ok(()))
    }

    pub fn is_fano(&self) -> Result<FanoVerdict, FanError> {
        let witness = self
            .primitive_collections()?
            .into_iter()
            .find(|p| !p.degree.is_positive());
        let anticanonical_convex = self.is_strictly_convex(&SupportFunction::constant(self.len(), Rational::one()));
        Ok(FanoVerdict { fano: witness.is_none(), witness, anticanonical_convex })
    }

    /// `Δ_φ = {m : ⟨m, u_k⟩ ≥ −φ(u_k)}` with its vertices checked against the
    /// per-cone solves and its normal fan checked against `self`.
    pub fn polytope_from_support(&self, phi: &SupportFunction) -> Result<DelzantPolytope, FanError> {
        if let Err(v) = self.strict_convexity(phi)? {
            return Err(FanError::NotStrictlyConvex(v));
        }
        let facets = self
            .generators
            .iter()
            .zip(phi.values())
            .map(|(u, v)| Facet::new(u.clone(), -v.clone()))
            .collect();
        let polytope = DelzantPolytope::new(facets)?;
        let mut expected = BTreeSet::new();
        for cone in &self.max_cones {
            let rows: Vec<Vec<Rational>> = cone
                .iter()
                .map(|&g| self.generators[g].iter().map(rat_int).collect())
                .collect();
            let rhs = RationalVector::new(cone.iter().map(|&g| -phi.values[g].clone()).collect());
            expected.insert(solve_rational(&rows, &rhs).map_err(|_| FanError::RoundTrip)?);
        }
        let actual: BTreeSet<RationalVector> = polytope.vertices().iter().cloned().collect();
        if actual != expected || normal_fan(&polytope).0 != *self {
            return Err(FanError::RoundTrip);
        }
        Ok(polytope)
    }
}

/// Generators are the facet normals, max cones the active sets at vertices,
/// and `φ(u_k) = −λ_k`.
pub fn normal_fan(polytope: &DelzantPolytope) -> (Fan, SupportFunction) {
    let fan = Fan::new(polytope.dim(), polytope.normals(), polytope.incidence().to_vec())
        .expect("a Delzant polytope has a regular normal fan");
    let phi = SupportFunction::new(polytope.offsets().into_iter().map(|l| -l).collect());
    (fan, phi)
}
