//! One PASS/FAIL line per acceptance criterion. Every comparison is exact
//! rational equality unless a tolerance is named below.

use std::collections::BTreeSet;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricap::app::{analyze, default_options, fixture_document};
use toricap::document::InputDocument;
use toricap::published::{heptagon_vertex, EXAMPLE_4_1_VERTICES, EXAMPLE_4_3_MAX_CONES, EXAMPLE_4_3_VERTICES, HEPTAGON_GROUPS};
use toricap::report::ReportDocument;
use toricap_core::capacity::{
    bounded_relations, capacity_report, hilbert_basis, lambda_bound, upsilon_bound, CapacityInput, ReportOptions,
    DEFAULT_NORM_CAP,
};
use toricap_core::constructions::{
    blowup_at_vertex, blown_up_projective_space, fixture, lambda_up_closed_form, pol_reduction, pol_reduction_applies,
    polygon_up_space, projective_space, Fixture, FixtureName, PolygonWeights,
};
use toricap_core::fan::{normal_fan, Fan, SupportFunction};
use toricap_core::lattice::{rat, IntMatrix, LatticeVector, Rational, RationalVector, UnimodularMap};
use toricap_core::packing::{packed_fraction, simplicially_separating, theorem_6_4_certificate, verify_general_packing};
use toricap_core::polytope::{DelzantPolytope, Facet, SimplexSpec};

/// Absolute tolerance on the decimal rendering of ×2π values.
const DECIMAL_TOLERANCE: f64 = 1e-6;
const SEED: u64 = 0x7043_6170;

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

fn fan_fixture(name: FixtureName) -> (Fan, SupportFunction) {
    match fixture(name).unwrap() {
        Fixture::Fan(f, p) => (f, p),
        Fixture::Polytope(_) => unreachable!(),
    }
}

fn heptagon() -> DelzantPolytope {
    match fixture(FixtureName::Remark15).unwrap() {
        Fixture::Polytope(p) => p,
        Fixture::Fan(..) => unreachable!(),
    }
}

fn point_set(v: &[RationalVector]) -> BTreeSet<RationalVector> {
    v.iter().cloned().collect()
}

fn lattice_points(rows: &[[i64; 4]]) -> Vec<RationalVector> {
    rows.iter().map(|r| RationalVector::from_i64(r)).collect()
}

fn uniform_map(columns: &[RationalVector], anchor: &RationalVector) -> Option<UnimodularMap> {
    let cols: Vec<LatticeVector> = columns.iter().map(|c| c.sub(anchor).to_lattice()).collect::<Option<_>>()?;
    UnimodularMap::new(IntMatrix::from_columns(&cols).ok()?, anchor.clone(), false).ok()
}

/// Whether `conv(anchor, others)` is a unimodular simplex of size one inside `p`.
fn unit_simplex_inside(p: &DelzantPolytope, anchor: &RationalVector, others: &[RationalVector]) -> bool {
    let Some(map) = uniform_map(others, anchor) else { return false };
    let simplex = SimplexSpec::uniform(p.dim(), rat(1, 1)).unwrap();
    p.verify_simplex_inclusion(&map, &simplex).unwrap_or(false)
}

fn criterion_1(o: &mut Outcome) {
    let (fan, phi) = fan_fixture(FixtureName::Example41);
    o.check(fan.validate().is_empty(), "fan validates");
    let collections: BTreeSet<(Vec<usize>, i64)> = fan
        .primitive_collections()
        .unwrap()
        .into_iter()
        .map(|c| (c.indices, i64::try_from(c.degree).unwrap()))
        .collect();
    let expected: BTreeSet<(Vec<usize>, i64)> = [(vec![0, 1], 0), (vec![2, 3, 4, 5], 4)].into_iter().collect();
    o.check(collections == expected, format!("primitive collections {collections:?}"));
    o.check(!fan.is_fano().unwrap().fano, "Fano = false");
    let p = fan.polytope_from_support(&phi).unwrap();
    let t = lattice_points(&EXAMPLE_4_1_VERTICES);
    o.check(
        point_set(p.vertices()) == point_set(&t),
        format!("published t1..t8 are the vertices (computed {:?})", p.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>()),
    );
    let lambda = lambda_bound(&fan, &phi).unwrap().value;
    o.check(lambda == rat(1, 1), format!("Λ = 1 (computed {lambda})"));
    let anchor = &t[4];
    let others = [t[5].clone(), t[1].clone(), t[6].clone(), t[7].clone()];
    let all_vertices = [&t[5], &t[1], &t[4], &t[6], &t[7]].iter().all(|v| p.vertex_index(v).is_some());
    o.check(all_vertices && unit_simplex_inside(&p, anchor, &others), "certificate on {t6,t2,t5,t7,t8} gives width ≥ 1");
    let report = capacity_report(CapacityInput::Fan(&fan, &phi), &ReportOptions::default()).unwrap();
    o.check(report.width.value >= rat(1, 1), "width_lower ≥ 1");
    o.check(report.sandwich_closed() && report.best_upper() == rat(1, 1), "sandwich closes at 1");
}

fn criterion_2(o: &mut Outcome) {
    let (fan, phi) = fan_fixture(FixtureName::Example43);
    o.check(fan.validate().is_empty(), "fan validates");
    o.check(
        fan.max_cones().len() == EXAMPLE_4_3_MAX_CONES,
        format!("{EXAMPLE_4_3_MAX_CONES} max cones (a valid fan on these rays has {})", fan.max_cones().len()),
    );
    o.check(fan.is_fano().unwrap().fano, "Fano = true");
    let upsilon = upsilon_bound(&fan, &phi, DEFAULT_NORM_CAP).unwrap().value;
    o.check(upsilon == rat(1, 1), format!("Υ = 1 (computed {upsilon})"));
    let p = fan.polytope_from_support(&phi).unwrap();
    let published = lattice_points(&EXAMPLE_4_3_VERTICES);
    let off = published.iter().filter(|v| p.vertex_index(v).is_none()).count();
    o.check(
        point_set(p.vertices()) == point_set(&published),
        format!("23 published vertices reproduced ({off} are not vertices; {} computed)", p.vertices().len()),
    );
    let t1 = &published[0];
    let anchored = p
        .vertex_figure(t1)
        .map(|fig| fig.e_p >= rat(1, 1) || p.fit_uniform_simplex(&fig.edge_matrix()).is_some_and(|(a, _)| a >= rat(1, 1)))
        .unwrap_or(false);
    o.check(anchored, format!("unimodular certificate anchored at t1 = {t1} gives width ≥ 1"));
    let report = capacity_report(CapacityInput::Fan(&fan, &phi), &ReportOptions::default()).unwrap();
    o.check(
        report.sandwich_closed() && report.best_upper() == rat(1, 1),
        format!("sandwich closes at 1 (width {}, upper {})", report.width.value, report.best_upper()),
    );
}

fn decimal_matches(text: &str, value: &Rational) -> bool {
    let expected = toricap_core::lattice::rational_to_f64(value) * 2.0 * std::f64::consts::PI;
    text.parse::<f64>().is_ok_and(|x| (x - expected).abs() <= DECIMAL_TOLERANCE)
}

fn criterion_3(o: &mut Outcome) {
    for n in 2..=4 {
        for tau in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            let record = blown_up_projective_space(n, &tau).unwrap();
            let want = rat(1, 1) - &tau;
            let mut doc = InputDocument::polytope(&record.child);
            doc.ancestry.push(toricap::document::BlowupDoc {
                parent: toricap::document::facet_docs(record.parent.facets()),
                vertex: toricap::document::exact_vec(&record.vertex),
                epsilon: toricap::document::Exact(record.epsilon.clone()),
            });
            let report = analyze(&doc, &default_options()).unwrap();
            let cap = report.capacity.unwrap();
            let upsilon = cap.upsilon.value.as_ref().map(|q| q.exact.0.clone());
            o.check(upsilon.as_ref() == Some(&want), format!("n={n} τ={tau}: Υ = 1−τ (computed {upsilon:?})"));
            o.check(cap.width_lower.value.exact.0 == want, format!("n={n} τ={tau}: width = 1−τ (computed {})", cap.width_lower.value.exact));
            o.check(
                cap.normalization == "polytope_2pi"
                    && cap.width_lower.value.times_2pi
                    && decimal_matches(&cap.width_lower.value.decimal, &want),
                format!("n={n} τ={tau}: polytope report carries ×2π"),
            );
            let reflexive = record.child.reflexive_normalization();
            let expected = (tau == rat(1, 2)).then(|| (rat(2, 1), RationalVector::new(vec![rat(-1, 2); n])));
            o.check(
                reflexive == expected,
                format!(
                    "n={n} τ={tau}: reflexive normalization {}",
                    match &reflexive {
                        Some((r, m)) => format!("r = {r}, m = {m}"),
                        None => "absent".into(),
                    }
                ),
            );
        }
    }
}

fn criterion_4(o: &mut Outcome) {
    for n in 1..=4 {
        let p = projective_space(n).unwrap();
        let report = capacity_report(CapacityInput::Polytope(&p), &ReportOptions::default()).unwrap();
        o.check(report.width.value == rat(1, 1), format!("CP^{n}: width_lower = 1"));
        o.check(report.lambda.value == rat(1, 1), format!("CP^{n}: Λ = 1"));
        let doc = InputDocument::polytope(&p);
        let cap = analyze(&doc, &default_options()).unwrap().capacity.unwrap();
        o.check(
            decimal_matches(&cap.width_lower.value.decimal, &rat(1, 1)) && decimal_matches(&cap.lambda.value.decimal, &rat(1, 1)),
            format!("CP^{n}: 2π in the polytope report"),
        );
    }
}

/// Primitive integer direction of a rational vector and the factor it was
/// scaled by.
fn primitive_ratio(v: &RationalVector) -> Rational {
    use num_integer::Integer;
    let den = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| acc.gcd(x));
    Rational::new(g, den)
}

/// `E_p` of a convex polygon from its vertex cycle.
fn polygon_e_p(vertices: &[RationalVector]) -> Vec<Rational> {
    let f = |x: &Rational| toricap_core::lattice::rational_to_f64(x);
    let cx = vertices.iter().map(|v| f(&v[0])).sum::<f64>() / vertices.len() as f64;
    let cy = vertices.iter().map(|v| f(&v[1])).sum::<f64>() / vertices.len() as f64;
    let mut cycle = vertices.to_vec();
    cycle.sort_by(|a, b| {
        let ta = (f(&a[1]) - cy).atan2(f(&a[0]) - cx);
        let tb = (f(&b[1]) - cy).atan2(f(&b[0]) - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    let k = cycle.len();
    let mut out: Vec<Rational> = (0..k)
        .map(|i| {
            let p = &cycle[i];
            let a = primitive_ratio(&cycle[(i + 1) % k].sub(p));
            let b = primitive_ratio(&cycle[(i + k - 1) % k].sub(p));
            a.min(b)
        })
        .collect();
    out.sort();
    out
}

fn grid(d: usize, hi: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (hi + 1).pow(d as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; d];
        for x in v.iter_mut().rev() {
            *x = k % (hi + 1);
            k /= hi + 1;
        }
        v
    })
}

fn is_relation(gens: &[Vec<i64>], a: &[u64]) -> bool {
    let n = gens[0].len();
    (0..n).all(|i| gens.iter().zip(a).map(|(g, &x)| g[i] * x as i64).sum::<i64>() == 0)
}

fn naive_bounded(gens: &[Vec<i64>], bound: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = grid(gens.len(), bound)
        .filter(|a| (1..=bound).contains(&a.iter().sum::<u64>()) && is_relation(gens, a))
        .collect();
    out.sort();
    out
}

fn naive_minimal(gens: &[Vec<i64>], hi: u64) -> Vec<Vec<u64>> {
    let mut sols: Vec<Vec<u64>> = grid(gens.len(), hi).filter(|a| a.iter().any(|&x| x > 0) && is_relation(gens, a)).collect();
    sols.sort_by_key(|a| a.iter().sum::<u64>());
    let mut minimal: Vec<Vec<u64>> = Vec::new();
    for a in sols {
        if !minimal.iter().any(|b| b.iter().zip(&a).all(|(x, y)| x <= y)) {
            minimal.push(a);
        }
    }
    minimal.sort();
    minimal
}

fn value(a: &[u64], phi: &[Rational]) -> Rational {
    a.iter().zip(phi).map(|(&x, v)| v * Rational::from_integer(x.into())).sum()
}

fn criterion_5(o: &mut Outcome) {
    let p = heptagon();
    let labels: Vec<RationalVector> = (1..=7).map(heptagon_vertex).collect();
    o.check(point_set(p.vertices()) == point_set(&labels), "seven vertices reproduced");
    let mut e_p: Vec<Rational> = p.vertex_figures().into_iter().map(|f| f.e_p).collect();
    e_p.sort();
    let mut table = vec![rat(5, 6), rat(5, 6), rat(5, 6), rat(5, 6), rat(2, 3), rat(1, 6), rat(1, 6)];
    table.sort();
    let oracle = polygon_e_p(&labels);
    o.check(e_p == table && oracle == table, format!("E_p table (computed {e_p:?}, edge-ratio oracle {oracle:?})"));
    let psi = IntMatrix::from_i64_rows(&[vec![1, 0], vec![0, -1]]).unwrap();
    let fit = p.fit_uniform_simplex(&psi);
    let verified = fit.as_ref().is_some_and(|(a, t)| {
        *a >= rat(1, 1)
            && p.verify_simplex_inclusion(
                &UnimodularMap::new(psi.clone(), t.clone(), false).unwrap(),
                &SimplexSpec::uniform(2, rat(1, 1)).unwrap(),
            )
            .unwrap()
    });
    o.check(verified, "Ψ = diag(1,−1) certificate verifies width ≥ 1");

    let (fan, phi) = normal_fan(&p);
    let gens: Vec<Vec<i64>> = fan.generators().iter().map(|g| g.to_i64().unwrap()).collect();
    let phis = phi.values().to_vec();
    let lambda_oracle = naive_bounded(&gens, 3).iter().map(|a| value(a, &phis)).max().unwrap();
    let upsilon_oracle = naive_minimal(&gens, 5).iter().map(|a| value(a, &phis)).filter(|v| *v > rat(0, 1)).min().unwrap();
    let lambda = lambda_bound(&fan, &phi).unwrap().value;
    let upsilon = upsilon_bound(&fan, &phi, DEFAULT_NORM_CAP).unwrap().value;
    o.check(lambda == lambda_oracle, format!("Λ = {lambda} matches oracle {lambda_oracle}"));
    o.check(upsilon == upsilon_oracle, format!("Υ = {upsilon} matches oracle {upsilon_oracle}"));
    let report = analyze(&fixture_document("remark_1_5").unwrap(), &default_options()).unwrap();
    let text: String = report.discrepancies.iter().map(|d| format!("{} {}", d.published, d.note)).collect();
    o.check(text.contains("25π/3") && text.contains("(π/3"), "report carries the 25π/3 and π/3 notes");
}

fn random_gens(rng: &mut ChaCha8Rng, n: usize, d: usize, entry: i64) -> Vec<Vec<i64>> {
    (0..d).map(|_| (0..n).map(|_| rng.gen_range(-entry..=entry)).collect()).collect()
}

fn lattice(gens: &[Vec<i64>]) -> Vec<LatticeVector> {
    gens.iter().map(|g| LatticeVector::from_i64(g)).collect()
}

fn criterion_6(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for case in 0..20 {
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(2..=7);
        let bound = rng.gen_range(1..=4);
        let gens = random_gens(&mut rng, n, d, 2);
        let fast: Vec<Vec<u64>> = bounded_relations(&lattice(&gens), bound).unwrap().into_iter().map(|r| r.coeffs).collect();
        o.check(fast == naive_bounded(&gens, bound), format!("bounded_relations case {case}: {gens:?} B={bound}"));
    }
    for case in 0..20 {
        let d = if case % 2 == 0 { 4 } else { 5 };
        let gens = random_gens(&mut rng, 2, d, 3);
        let basis: Vec<Vec<u64>> = hilbert_basis(&lattice(&gens), 200).unwrap().into_iter().map(|r| r.coeffs).collect();
        let in_box: Vec<Vec<u64>> = basis.into_iter().filter(|a| a.iter().all(|&x| x <= 10)).collect();
        o.check(in_box == naive_minimal(&gens, 10), format!("hilbert_basis case {case}: {gens:?}"));
    }
}

fn fixture_polytopes() -> Vec<(String, DelzantPolytope)> {
    let mut out = Vec::new();
    for name in FixtureName::ALL {
        let p = match fixture(name).unwrap() {
            Fixture::Fan(fan, phi) => fan.polytope_from_support(&phi).unwrap(),
            Fixture::Polytope(p) => p,
        };
        out.push((name.as_str().to_string(), p));
    }
    out
}

fn random_map(rng: &mut ChaCha8Rng, n: usize) -> UnimodularMap {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..rng.gen_range(0..8) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let k = rng.gen_range(-2..=2);
        if i != j {
            for c in 0..n {
                m[i][c] += k * m[j][c];
            }
        }
        if rng.gen_bool(0.3) {
            m[i].iter_mut().for_each(|x| *x = -*x);
        }
    }
    let t: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect();
    UnimodularMap::new(IntMatrix::from_i64_rows(&m).unwrap(), RationalVector::from_pairs(&t), false).unwrap()
}

fn random_delzant(rng: &mut ChaCha8Rng) -> DelzantPolytope {
    let n = rng.gen_range(2..=3);
    let base = if rng.gen_bool(0.5) {
        projective_space(n).unwrap().scale(&rat(rng.gen_range(1..=4), rng.gen_range(1..=2)))
    } else {
        let mut facets = Vec::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            facets.push(Facet::new(LatticeVector::from_i64(&e), rat(0, 1)));
            e[i] = -1;
            facets.push(Facet::new(LatticeVector::from_i64(&e), -rat(rng.gen_range(1..=4), rng.gen_range(1..=2))));
        }
        DelzantPolytope::new(facets).unwrap()
    };
    let mut p = base.transform(&random_map(rng, n));
    for _ in 0..rng.gen_range(0..=2) {
        let v = p.vertices()[rng.gen_range(0..p.vertices().len())].clone();
        let k = rng.gen_range(1..=3);
        let eps = p.vertex_figure(&v).unwrap().e_p * rat(k, k + 1);
        p = blowup_at_vertex(&p, &v, &eps).unwrap().child;
    }
    p
}

fn facet_key(p: &DelzantPolytope) -> BTreeSet<(Vec<i64>, Rational)> {
    p.facets().iter().map(|f| (f.normal.to_i64().unwrap(), f.offset.clone())).collect()
}

fn criterion_7(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut polytopes: Vec<(String, DelzantPolytope)> = fixture_polytopes();
    for k in 0..20 {
        polytopes.push((format!("random {k}"), random_delzant(&mut rng)));
    }
    for (name, p) in &polytopes {
        let (fan, phi) = normal_fan(p);
        let back = fan.polytope_from_support(&phi);
        o.check(
            back.is_ok_and(|b| facet_key(&b) == facet_key(p) && b.vertices() == p.vertices()),
            format!("{name}: polytope_from_support ∘ normal_fan"),
        );
        let doc = InputDocument::polytope(p);
        let again = InputDocument::from_json(&doc.to_json());
        o.check(again.is_ok_and(|d| d == doc && d.to_json() == doc.to_json()), format!("{name}: document JSON identity"));
    }
    for name in FixtureName::ALL {
        let doc = fixture_document(name.as_str()).unwrap();
        o.check(InputDocument::from_json(&doc.to_json()).is_ok_and(|d| d == doc), format!("{name}: fixture document JSON"));
        let report = analyze(&doc, &default_options()).unwrap();
        let json = report.to_json();
        o.check(ReportDocument::from_json(&json).is_ok_and(|r| r == report && r.to_json() == json), format!("{name}: report JSON"));
    }
}

fn lambda_upsilon(p: &DelzantPolytope) -> (Rational, Rational) {
    let (fan, phi) = normal_fan(p);
    (lambda_bound(&fan, &phi).unwrap().value, upsilon_bound(&fan, &phi, DEFAULT_NORM_CAP).unwrap().value)
}

fn e_p_sorted(p: &DelzantPolytope) -> Vec<Rational> {
    let mut v: Vec<Rational> = p.vertex_figures().into_iter().map(|f| f.e_p).collect();
    v.sort();
    v
}

fn separation_table(p: &DelzantPolytope, vs: &[RationalVector]) -> Vec<bool> {
    let mut out = Vec::new();
    for a in vs {
        for b in vs {
            out.push(simplicially_separating(p, a, b).unwrap());
        }
    }
    out
}

fn criterion_8(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for (name, p) in fixture_polytopes() {
        let base = (lambda_upsilon(&p), e_p_sorted(&p), p.volume());
        let separation = separation_table(&p, p.vertices());
        for k in 0..10 {
            let map = random_map(&mut rng, p.dim());
            let q = p.transform(&map);
            let rebuilt = DelzantPolytope::new(q.facets().to_vec());
            o.check(rebuilt.is_ok_and(|r| r.vertices() == q.vertices()), format!("{name} map {k}: image validates"));
            o.check((lambda_upsilon(&q), e_p_sorted(&q), q.volume()) == base, format!("{name} map {k}: Λ, Υ, E_p, volume"));
            let image: Vec<RationalVector> = p.vertices().iter().map(|v| map.apply(v)).collect();
            o.check(separation_table(&q, &image) == separation, format!("{name} map {k}: packing validity"));
        }
        let (fan, phi) = normal_fan(&p);
        let l = lambda_bound(&fan, &phi).unwrap().value;
        for r in [rat(2, 1), rat(1, 3)] {
            let scaled = lambda_bound(&fan, &phi.scale(&r)).unwrap().value;
            o.check(scaled == &l * &r, format!("{name}: Λ({r}φ) = {r}Λ(φ)"));
        }
    }
}

fn random_weights(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| rat(rng.gen_range(1..=12), rng.gen_range(1..=4))).collect()
}

fn reduction_hypothesis(alpha: &[Rational]) -> bool {
    let m = alpha.len();
    if m < 5 {
        return false;
    }
    let half: Rational = alpha[..m - 1].iter().sum::<Rational>() / rat(2, 1);
    alpha[m - 2] > alpha[m - 1] && alpha[m - 1] > half
}

fn criterion_9(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut runs = 0;
    let mut attempts = 0;
    while runs < 10 && attempts < 10_000 {
        attempts += 1;
        let m = if runs % 2 == 0 { 4 } else { 5 };
        let Ok(alpha) = PolygonWeights::new(random_weights(&mut rng, m)) else { continue };
        let Ok(space) = polygon_up_space(&alpha) else { continue };
        if !space.redundant.is_empty() {
            continue;
        }
        runs += 1;
        let (fan, phi) = normal_fan(&space.polytope);
        let lambda = lambda_bound(&fan, &phi).unwrap().value;
        let closed = lambda_up_closed_form(&alpha).unwrap();
        o.check(closed == lambda, format!("α = {:?}: closed form {closed} vs Λ {lambda}", alpha.weights()));
        let cap = alpha.weights().iter().max().unwrap() * rat(m as i64, 1);
        o.check(lambda <= cap, format!("α = {:?}: Λ ≤ m·max α", alpha.weights()));
    }
    o.check(runs == 10, format!("only {runs} irredundant generic samples"));
    let mut hits = 0;
    for k in 0..200 {
        let m = 5 + k % 2;
        let mut raw = random_weights(&mut rng, m);
        if k % 3 == 0 {
            let s: Rational = raw[..m - 2].iter().sum();
            raw[m - 1] = &s + rat(1, 1);
            raw[m - 2] = &s + rat(3, 2);
        }
        let Ok(alpha) = PolygonWeights::positive(raw.clone()) else { continue };
        let expected = reduction_hypothesis(&raw);
        hits += usize::from(expected);
        o.check(pol_reduction_applies(&alpha) == expected, format!("reduction predicate on {raw:?}"));
        o.check(pol_reduction(&alpha).is_ok() == expected, format!("reduction on {raw:?}"));
    }
    o.check(hits > 0, "reduction hypothesis exercised");
}

fn criterion_10(o: &mut Outcome) {
    let p = heptagon();
    let eps = rat(1, 100);
    for group in HEPTAGON_GROUPS {
        let vertices: Vec<RationalVector> = group.iter().map(|&k| heptagon_vertex(k)).collect();
        for i in 0..3 {
            for j in i + 1..3 {
                o.check(
                    simplicially_separating(&p, &vertices[i], &vertices[j]).unwrap(),
                    format!("group {group:?}: q{} and q{} separate", group[i], group[j]),
                );
            }
        }
        match theorem_6_4_certificate(&p, &vertices, &eps) {
            Ok(cert) => {
                let included = cert.pieces.iter().all(|piece| p.verify_simplex_inclusion(&piece.map, &piece.simplex).unwrap());
                o.check(included, format!("group {group:?}: inclusion"));
                let pieces: Vec<(UnimodularMap, SimplexSpec)> =
                    cert.pieces.iter().map(|piece| (piece.map.clone(), piece.simplex.clone())).collect();
                let again = verify_general_packing(&p, &pieces);
                o.check(
                    again.as_ref().is_ok_and(|c| c.fraction == cert.fraction),
                    format!("group {group:?}: round trip through verify_general_packing"),
                );
                let f = packed_fraction(&cert);
                o.check(f > rat(0, 1) && f <= rat(1, 1), format!("group {group:?}: packed fraction {f} in (0,1]"));
            }
            Err(e) => o.check(false, format!("group {group:?}: {e}")),
        }
    }
}

fn criterion_11(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let mut fans: Vec<(String, Fan, SupportFunction)> = Vec::new();
    for name in FixtureName::ALL {
        let (fan, phi) = match fixture(name).unwrap() {
            Fixture::Fan(f, p) => (f, p),
            Fixture::Polytope(p) => normal_fan(&p),
        };
        fans.push((name.as_str().to_string(), fan, phi));
    }
    for (name, fan, phi) in &fans {
        for k in 0..20 {
            let scale = rat(rng.gen_range(0..=3), 1);
            let m: Vec<Rational> = (0..fan.dim()).map(|_| rat(rng.gen_range(-2..=2), 1)).collect();
            let m = RationalVector::new(m);
            let values: Vec<Rational> = phi
                .values()
                .iter()
                .zip(fan.generators())
                .map(|(v, u)| v * &scale + rat(rng.gen_range(-2..=2), 2) + u.dot_rational(&m))
                .collect();
            let psi = SupportFunction::new(values);
            let walls = fan.strict_convexity(&psi).unwrap().is_ok();
            let collections = fan.strict_convexity_by_collections(&psi).unwrap().is_ok();
            o.check(walls == collections, format!("{name} function {k}: wall and collection criteria"));
        }
        let verdict = fan.is_fano().unwrap();
        o.check(verdict.fano == verdict.anticanonical_convex, format!("{name}: Fano criteria agree"));
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Outcome)); 11] = [
        ("first four-dimensional fan fixture", criterion_1),
        ("Fano star-subdivision fixture", criterion_2),
        ("blown-up projective spaces", criterion_3),
        ("projective spaces", criterion_4),
        ("heptagon fixture", criterion_5),
        ("relation enumeration oracles", criterion_6),
        ("round trips", criterion_7),
        ("unimodular invariance and scaling", criterion_8),
        ("polygon spaces", criterion_9),
        ("heptagon packings", criterion_10),
        ("convexity and Fano criteria agreement", criterion_11),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let mut o = Outcome::new();
        let start = std::time::Instant::now();
        run(&mut o);
        let elapsed = start.elapsed().as_secs_f64();
        if o.failures.is_empty() {
            println!("criterion {:>2}: PASS  {title} ({elapsed:.2}s)", k + 1);
        } else {
            failed += 1;
            println!("criterion {:>2}: FAIL  {title} ({elapsed:.2}s)", k + 1);
            for f in &o.failures {
                println!("              - {f}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
