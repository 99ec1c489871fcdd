#![allow(dead_code)]

use proptest::prelude::*;
use toricap_core::constructions::{blown_up_projective_space, fixture, projective_space, Fixture, FixtureName};
use toricap_core::fan::{normal_fan, Fan, SupportFunction};
use toricap_core::lattice::{rat, IntMatrix, Rational, RationalVector, UnimodularMap};
use toricap_core::polytope::{DelzantPolytope, Facet};

/// Every fixture as a polytope, plus small projective spaces and a blow-up.
pub fn fixture_polytopes() -> Vec<(String, DelzantPolytope)> {
    let mut out = Vec::new();
    for name in FixtureName::ALL {
        let p = match fixture(name).unwrap() {
            Fixture::Fan(fan, phi) => fan.polytope_from_support(&phi).unwrap(),
            Fixture::Polytope(p) => p,
        };
        out.push((name.as_str().to_string(), p));
    }
    out.push(("cp2".into(), projective_space(2).unwrap()));
    out.push(("cp3_blowup".into(), blown_up_projective_space(3, &rat(1, 2)).unwrap().child));
    out
}

pub fn fixture_fans() -> Vec<(String, Fan, SupportFunction)> {
    fixture_polytopes()
        .into_iter()
        .map(|(name, p)| {
            let (fan, phi) = normal_fan(&p);
            (name, fan, phi)
        })
        .collect()
}

/// Products of elementary row operations and sign flips.
pub fn unimodular(n: usize) -> impl Strategy<Value = UnimodularMap> {
    let ops = prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..8);
    let translation = prop::collection::vec((-3i64..=3, 1i64..=3), n);
    (ops, translation).prop_map(move |(ops, t)| {
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k, flip) in ops {
            if i != j {
                for c in 0..n {
                    m[i][c] += k * m[j][c];
                }
            }
            if flip {
                for x in m[i].iter_mut() {
                    *x = -*x;
                }
            }
        }
        let t = RationalVector::from_pairs(&t.iter().map(|&(a, b)| (a, b)).collect::<Vec<_>>());
        UnimodularMap::new(IntMatrix::from_i64_rows(&m).unwrap(), t, false).unwrap()
    })
}

fn boxed(sides: &[Rational]) -> DelzantPolytope {
    let n = sides.len();
    let mut facets = Vec::new();
    for (i, s) in sides.iter().enumerate() {
        let mut e = vec![0; n];
        e[i] = 1;
        facets.push(Facet::new(toricap_core::lattice::LatticeVector::from_i64(&e), rat(0, 1)));
        e[i] = -1;
        facets.push(Facet::new(toricap_core::lattice::LatticeVector::from_i64(&e), -s.clone()));
    }
    DelzantPolytope::new(facets).unwrap()
}

/// Boxes and simplices, moved by a unimodular map and blown up at up to two
/// vertices.
pub fn delzant_polytope() -> impl Strategy<Value = DelzantPolytope> {
    (2usize..=3)
        .prop_flat_map(|n| {
            (
                Just(n),
                any::<bool>(),
                prop::collection::vec((1i64..=4, 1i64..=2), n),
                unimodular(n),
                prop::collection::vec((any::<prop::sample::Index>(), 1i64..=3), 0..=2),
            )
        })
        .prop_map(|(n, simplex, sides, map, cuts)| {
            let base = if simplex {
                projective_space(n).unwrap().scale(&rat(sides[0].0, sides[0].1))
            } else {
                boxed(&sides.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>())
            };
            let mut p = base.transform(&map);
            for (idx, k) in cuts {
                let v = idx.get(p.vertices()).clone();
                let e_p = p.vertex_figure(&v).unwrap().e_p;
                let eps = e_p * rat(k, k + 1);
                p = toricap_core::constructions::blowup_at_vertex(&p, &v, &eps).unwrap().child;
            }
            p
        })
}
