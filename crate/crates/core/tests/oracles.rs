//! The library's cohomology pipeline against an independent brute-force
//! enumerator and a term-by-term evaluation of the twisted coboundary.

mod common;

use std::sync::Arc;

use common::BruteComplex;
use seccoh::cochain::CochainComplex;
use seccoh::cohomology::AbelianComplex;
use seccoh::groups::{FiniteGammaGroup, FiniteGroup, GammaAction};
use seccoh::space::{Cover, GammaSpace, SimplicialCover};
use seccoh::suite;

/// Largest brute-force enumeration attempted.
const LIMIT: u128 = 1 << 20;

fn gamma_group(gamma: &Arc<FiniteGroup>, n: usize, generator: Option<Vec<usize>>) -> Arc<FiniteGammaGroup> {
    let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
    Arc::new(match generator {
        None => FiniteGammaGroup::trivial(gamma.clone(), g),
        Some(map) => FiniteGammaGroup::new(GammaAction::from_cyclic_generator(gamma.clone(), g, map).unwrap()).unwrap(),
    })
}

fn negation(n: usize) -> Option<Vec<usize>> {
    Some((0..n).map(|x| (n - x) % n).collect())
}

/// Compares `|H^p|`, `|Z^p|` and `|B^p|` with the brute-force counts for
/// every degree small enough to enumerate; returns how many were compared.
fn compare(space: &GammaSpace, cover: &Cover, coeff: &Arc<FiniteGammaGroup>, pmax: usize) -> usize {
    let brute = BruteComplex::new(space, cover, coeff, pmax + 1);
    let sc = Arc::new(SimplicialCover::new(Arc::new(space.clone()), Arc::new(cover.clone()), pmax + 1).unwrap());
    let a = AbelianComplex::new(CochainComplex::new(sc, coeff.clone()).unwrap()).unwrap();
    let census = seccoh::cohomology::census(&a, pmax).unwrap();
    let mut compared = 0;
    for p in 0..=pmax {
        assert_eq!(a.complex().components(p).unwrap(), brute.levels[p].components, "components in degree {p}");
        if brute.cost(p) > LIMIT {
            continue;
        }
        let (z, b) = brute.orders(p);
        assert_eq!(census[p].cocycles, z.to_string(), "|Z^{p}|");
        assert_eq!(census[p].coboundaries, b.to_string(), "|B^{p}|");
        assert_eq!(a.cohomology(p).unwrap().order(), z / b, "|H^{p}|");
        compared += 1;
    }
    compared
}

#[test]
fn group_cohomology_of_cyclic_groups_matches_enumeration() {
    let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let pt = GammaSpace::point(z2.clone());
    let cover = Cover::whole(1);
    for (n, gen) in [(2, None), (3, negation(3)), (4, negation(4)), (4, None), (5, negation(5))] {
        let coeff = gamma_group(&z2, n, gen);
        assert_eq!(compare(&pt, &cover, &coeff, 3), 4, "ℤ/{n}");
    }
    // Γ = ℤ/3 acting on ℤ/7 by x ↦ 2x
    let z3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
    let coeff = gamma_group(&z3, 7, Some((0..7).map(|x| 2 * x % 7).collect()));
    assert!(compare(&GammaSpace::point(z3), &cover, &coeff, 2) >= 2);
}

#[test]
fn known_group_cohomology_values() {
    let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let sc = Arc::new(SimplicialCover::new(Arc::new(GammaSpace::point(z2.clone())), Arc::new(Cover::whole(1)), 4).unwrap());
    let pt = GammaSpace::point(z2.clone());
    let cover = Cover::whole(1);
    for (n, gen, expected) in [(2, None, 2u128), (3, negation(3), 1), (4, negation(4), 2), (4, None, 2)] {
        let coeff = gamma_group(&z2, n, gen);
        let brute = BruteComplex::new(&pt, &cover, &coeff, 4);
        let a = AbelianComplex::new(CochainComplex::new(sc.clone(), coeff.clone()).unwrap()).unwrap();
        for p in 1..=3 {
            let (z, b) = brute.orders(p);
            assert_eq!(z / b, expected, "H^{p}(ℤ/2; ℤ/{n}) by enumeration");
            assert_eq!(a.cohomology(p).unwrap().order(), expected, "H^{p}(ℤ/2; ℤ/{n}) by Smith normal form");
        }
    }
}

#[test]
fn suite_cohomology_matches_enumeration() {
    let mut compared = 0;
    for scenario in suite::all().unwrap() {
        let sc = &scenario.cover;
        for coeff in scenario.coefficients.values().filter(|g| g.group().is_abelian()) {
            compared += compare(sc.space(), sc.cover(), coeff, 2);
        }
    }
    assert!(compared >= 30, "only {compared} degrees were small enough to enumerate");
}

#[test]
fn coboundary_matches_the_face_formula() {
    for scenario in suite::all().unwrap() {
        let sc = &scenario.cover;
        for (name, coeff) in scenario.coefficients.iter().filter(|(_, g)| g.group().is_abelian()) {
            let brute = BruteComplex::new(sc.space(), sc.cover(), coeff, 3);
            let k = CochainComplex::new(sc.clone(), coeff.clone()).unwrap();
            for p in 0..=2 {
                let lib_level = sc.level(p).unwrap();
                let lib_next = sc.level(p + 1).unwrap();
                assert_eq!(lib_level.len(), brute.levels[p].keys.len(), "{}: admissible slots in degree {p}", scenario.name);
                for seed in 0..20 {
                    let phi = k.random(p, seed).unwrap();
                    let mut values = vec![usize::MAX; lib_level.len()];
                    for s in 0..lib_level.len() {
                        let slot = lib_level.slot(s);
                        let key = (slot.index.0.clone(), slot.point.gammas.clone(), slot.point.x);
                        values[brute.levels[p].index[&key]] = phi.get(s);
                    }
                    let expected = brute.coboundary(p, &values);
                    let got = k.coboundary(&phi).unwrap();
                    for t in 0..lib_next.len() {
                        let slot = lib_next.slot(t);
                        let key = (slot.index.0.clone(), slot.point.gammas.clone(), slot.point.x);
                        assert_eq!(
                            got.get(t),
                            expected[brute.levels[p + 1].index[&key]],
                            "{} ({name}): δ in degree {p} at {key:?}",
                            scenario.name
                        );
                    }
                }
            }
        }
    }
}
