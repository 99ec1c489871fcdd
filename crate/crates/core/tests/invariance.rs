mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use toricap_core::capacity::{lambda_bound, upsilon_bound, DEFAULT_NORM_CAP};
use toricap_core::constructions::{fixture, Fixture, FixtureName};
use toricap_core::fan::{normal_fan, SupportFunction};
use toricap_core::lattice::{rat, Rational, RationalVector};
use toricap_core::packing::theorem_6_4_certificate;
use toricap_core::polytope::DelzantPolytope;

use common::{delzant_polytope, fixture_fans, fixture_polytopes, unimodular};

fn e_p_multiset(p: &DelzantPolytope) -> Vec<Rational> {
    let mut v: Vec<Rational> = p.vertex_figures().into_iter().map(|f| f.e_p).collect();
    v.sort();
    v
}

fn lambda_upsilon(p: &DelzantPolytope) -> (Rational, Rational) {
    let (fan, phi) = normal_fan(p);
    let l = lambda_bound(&fan, &phi).unwrap().value;
    let u = upsilon_bound(&fan, &phi, DEFAULT_NORM_CAP).unwrap().value;
    (l, u)
}

fn same_facets(a: &DelzantPolytope, b: &DelzantPolytope) -> bool {
    let key = |p: &DelzantPolytope| -> BTreeSet<(Vec<i64>, Rational)> {
        p.facets().iter().map(|f| (f.normal.to_i64().unwrap(), f.offset.clone())).collect()
    };
    key(a) == key(b)
}

#[test]
fn round_trip_on_fixtures() {
    for (name, p) in fixture_polytopes() {
        let (fan, phi) = normal_fan(&p);
        let back = fan.polytope_from_support(&phi).unwrap();
        assert!(same_facets(&p, &back), "{name}");
        assert_eq!(p.vertices(), back.vertices(), "{name}");
    }
}

#[test]
fn fan_fixtures_round_trip_through_their_polytope() {
    for name in [FixtureName::Example41, FixtureName::Example43] {
        let Fixture::Fan(fan, phi) = fixture(name).unwrap() else { unreachable!() };
        let (fan2, phi2) = normal_fan(&fan.polytope_from_support(&phi).unwrap());
        let pairs = |f: &toricap_core::fan::Fan, s: &SupportFunction| -> BTreeSet<(Vec<i64>, Rational)> {
            f.generators().iter().map(|g| g.to_i64().unwrap()).zip(s.values().iter().cloned()).collect()
        };
        assert_eq!(pairs(&fan, &phi), pairs(&fan2, &phi2), "{name}");
        assert_eq!(fan.max_cones().len(), fan2.max_cones().len());
    }
}

#[test]
fn lambda_scales_linearly() {
    for (name, fan, phi) in fixture_fans() {
        let base = lambda_bound(&fan, &phi).unwrap().value;
        for r in [rat(2, 1), rat(1, 3)] {
            let scaled = lambda_bound(&fan, &phi.scale(&r)).unwrap().value;
            assert_eq!(scaled, &base * &r, "{name}");
        }
    }
}

#[test]
fn fano_criteria_agree_on_fixture_fans() {
    for (name, fan, _) in fixture_fans() {
        let v = fan.is_fano().unwrap();
        assert_eq!(v.fano, v.anticanonical_convex, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn round_trip_random_polytopes(p in delzant_polytope()) {
        let (fan, phi) = normal_fan(&p);
        prop_assert!(fan.validate().is_empty());
        let back = fan.polytope_from_support(&phi).unwrap();
        prop_assert!(same_facets(&p, &back));
        prop_assert_eq!(p.vertices(), back.vertices());
        let rebuilt = DelzantPolytope::new(p.facets().to_vec()).unwrap();
        prop_assert_eq!(rebuilt.vertices(), p.vertices());
    }

    #[test]
    fn convexity_criteria_agree(
        k in 0usize..5,
        scale in 1i64..=3,
        noise in prop::collection::vec(-2i64..=2, 12),
        linear in prop::collection::vec(-2i64..=2, 4),
    ) {
        let (_, fan, phi) = &fixture_fans()[k];
        let m = RationalVector::from_i64(&linear[..fan.dim()]);
        let values: Vec<Rational> = phi
            .values()
            .iter()
            .zip(fan.generators())
            .zip(noise.iter().cycle())
            .map(|((v, u), &e)| v * rat(scale, 1) + rat(e, 2) + u.dot_rational(&m))
            .collect();
        let psi = SupportFunction::new(values);
        let walls = fan.strict_convexity(&psi).unwrap().is_ok();
        let collections = fan.strict_convexity_by_collections(&psi).unwrap().is_ok();
        prop_assert_eq!(walls, collections);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, ..ProptestConfig::default() })]

    #[test]
    fn invariants_under_unimodular_maps(seed in any::<u64>()) {
        use proptest::strategy::ValueTree;
        use proptest::test_runner::{Config, TestRunner, RngAlgorithm, TestRng};
        let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &seed_bytes(seed)));
        for (name, p) in fixture_polytopes() {
            let map = unimodular(p.dim()).new_tree(&mut runner).unwrap().current();
            let q = p.transform(&map);
            let rebuilt = DelzantPolytope::new(q.facets().to_vec()).unwrap();
            prop_assert_eq!(rebuilt.vertices(), q.vertices(), "{}", name);
            prop_assert_eq!(p.volume(), q.volume(), "{}", name);
            prop_assert_eq!(e_p_multiset(&p), e_p_multiset(&q), "{}", name);
            prop_assert_eq!(lambda_upsilon(&p), lambda_upsilon(&q), "{}", name);
            if p.dim() == 2 {
                let vs = p.vertices().to_vec();
                for i in 0..vs.len() {
                    for j in i + 1..vs.len() {
                        let a = toricap_core::packing::simplicially_separating(&p, &vs[i], &vs[j]).unwrap();
                        let b = toricap_core::packing::simplicially_separating(&q, &map.apply(&vs[i]), &map.apply(&vs[j])).unwrap();
                        prop_assert_eq!(a, b);
                    }
                }
                let eps = e_p_multiset(&p)[0].clone() / rat(2, 1);
                let ok_p = theorem_6_4_certificate(&p, &vs[..2], &eps).is_ok();
                let image: Vec<RationalVector> = vs[..2].iter().map(|v| map.apply(v)).collect();
                prop_assert_eq!(ok_p, theorem_6_4_certificate(&q, &image, &eps).is_ok());
            }
        }
    }
}

fn seed_bytes(seed: u64) -> [u8; 32] {
    let mut out = [0u8; 32];
    for (k, chunk) in out.chunks_mut(8).enumerate() {
        chunk.copy_from_slice(&(seed.wrapping_add(k as u64)).to_le_bytes());
    }
    out
}

#[test]
fn separation_is_symmetric() {
    for (name, p) in fixture_polytopes() {
        let vs = p.vertices();
        for a in vs {
            for b in vs {
                let ab = toricap_core::packing::simplicially_separating(&p, a, b).unwrap();
                let ba = toricap_core::packing::simplicially_separating(&p, b, a).unwrap();
                assert_eq!(ab, ba, "{name}");
            }
        }
    }
}
