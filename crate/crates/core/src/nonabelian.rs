//! Non-abelian degree-0 and degree-1 cocycles (the pointed sets TC⁰, TC¹),
//! their equivalence, the connecting maps of a central extension and the
//! Dixmier-Douady class.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{Cochain, CochainComplex};
use crate::cohomology::{AbelianComplex, CohomologyGroup, ExactnessCheck, LesReport};
use crate::error::{invalid, Error, Result};
use crate::extension::CentralExtension;
use crate::space::{for_each_tuple, SimplicialCover};

/// Default cap on exhaustive searches (`|G|^{slots}` or visited nodes).
pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 20;

/// `n^k`, saturating.
pub fn search_space(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(n as u128);
    }
    acc
}

fn describe_slot(k: &CochainComplex, p: usize, s: usize) -> String {
    let level = k.cover().level(p).expect("level exists");
    let slot = level.slot(s);
    let cover = k.cover().cover();
    let space = k.cover().space();
    let gamma = k.cover().gamma();
    let names: Vec<&str> = slot.index.0.iter().map(|&a| cover.name(a)).collect();
    let gammas: Vec<String> = slot.point.gammas.iter().map(|&g| gamma.label(g)).collect();
    format!(
        "cell ({}) at (γ = [{}], x = {})",
        names.join(","),
        gammas.join(","),
        space.label(slot.point.x)
    )
}

/// `(δ₁φ)⁻¹(δ₂φ)(δ₀φ)`, the degree-2 defect of a degree-1 cochain.
pub fn cocycle_defect(k: &CochainComplex, phi: &Cochain) -> Result<Cochain> {
    if phi.degree() != 1 {
        return invalid("the TC¹ defect is defined for degree-1 cochains");
    }
    let d0 = k.twisted_pullback(0, phi)?;
    let d1 = k.twisted_pullback(1, phi)?;
    let d2 = k.twisted_pullback(2, phi)?;
    k.product(&[k.invert(&d1), d2, d0])
}

/// Result of auditing a degree-1 cochain against the TC¹ conditions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tc1Check {
    pub violations: Vec<String>,
}

impl Tc1Check {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks normalization `φ_{(a,a)}(1,x) = 1` and the cocycle condition at
/// every degree-2 cell.
pub fn tc1_check(k: &CochainComplex, phi: &Cochain) -> Result<Tc1Check> {
    let mut check = Tc1Check::default();
    let g = k.coeff().group();
    let gamma = k.cover().gamma();
    let level = k.cover().level(1)?;
    for s in 0..level.len() {
        let slot = level.slot(s);
        if slot.index.0[0] == slot.index.0[1] && slot.point.gammas[0] == gamma.identity() && phi.get(s) != g.identity() {
            check
                .violations
                .push(format!("normalization φ_aa(1,x) = 1 fails at {}", describe_slot(k, 1, s)));
        }
    }
    let defect = cocycle_defect(k, phi)?;
    for (t, &v) in defect.values().iter().enumerate() {
        if v != g.identity() {
            check.violations.push(format!(
                "cocycle condition (δ₁φ)⁻¹(δ₂φ)(δ₀φ) = 1 fails at {}",
                describe_slot(k, 2, t)
            ));
        }
    }
    Ok(check)
}

pub fn is_tc1(k: &CochainComplex, phi: &Cochain) -> Result<bool> {
    Ok(tc1_check(k, phi)?.holds())
}

/// Degree-1 cells where `(δ₁μ)⁻¹(δ₀μ) ≠ 1`.
pub fn tc0_violations(k: &CochainComplex, mu: &Cochain) -> Result<Vec<String>> {
    if mu.degree() != 0 {
        return invalid("TC⁰ membership is defined for degree-0 cochains");
    }
    let d0 = k.twisted_pullback(0, mu)?;
    let d1 = k.twisted_pullback(1, mu)?;
    let e = k.coeff().group().identity();
    let defect = k.compose(&k.invert(&d1), &d0)?;
    Ok(defect
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != e)
        .map(|(s, _)| format!("(δ₁μ)⁻¹(δ₀μ) = 1 fails at {}", describe_slot(k, 1, s)))
        .collect())
}

pub fn is_tc0(k: &CochainComplex, mu: &Cochain) -> Result<bool> {
    Ok(tc0_violations(k, mu)?.is_empty())
}

/// Cocycle `φ′ = (δ₁μ)φ(δ₀μ)⁻¹`, the unique `φ′` with `(δ₁μ)φ = φ′(δ₀μ)`.
pub fn act(k: &CochainComplex, mu: &Cochain, phi: &Cochain) -> Result<Cochain> {
    if mu.degree() != 0 || phi.degree() != 1 {
        return invalid("equivalences act by degree-0 cochains on degree-1 cochains");
    }
    let d0 = k.twisted_pullback(0, mu)?;
    let d1 = k.twisted_pullback(1, mu)?;
    k.product(&[d1, phi.clone(), k.invert(&d0)])
}

/// Whether `(δ₁μ)φ¹ = φ²(δ₀μ)`.
pub fn is_equivalence(k: &CochainComplex, mu: &Cochain, phi1: &Cochain, phi2: &Cochain) -> Result<bool> {
    Ok(act(k, mu, phi1)? == *phi2)
}

/// Precomputed `(d₀ component, d₁ component, γ₁)` for every degree-1 slot.
struct EquivalenceTable {
    faces: Vec<(usize, usize, usize)>,
    /// Representative degree-1 slots whose faces lie among the first `i+1`
    /// degree-0 components.
    ready: Vec<Vec<usize>>,
}

impl EquivalenceTable {
    fn new(k: &CochainComplex) -> Result<Self> {
        let l0 = k.cover().level(0)?;
        let level = k.cover().level(1)?;
        let mut ready = vec![Vec::new(); l0.component_count()];
        let faces: Vec<_> = (0..level.len())
            .map(|t| (l0.component(level.face(0, t)), l0.component(level.face(1, t)), level.first_gamma(t)))
            .collect();
        for &t in level.component_reps() {
            let (f0, f1, _) = faces[t];
            ready[f0.max(f1)].push(t);
        }
        Ok(Self { faces, ready })
    }
}

/// Outcome of an exhaustive equivalence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceSearch {
    /// Lexicographically least witness `μ`.
    Witness(Cochain),
    /// Every candidate in `K⁰` was ruled out; `nodes` partial assignments
    /// were visited.
    Inequivalent { candidates: u128, nodes: u128 },
}

impl EquivalenceSearch {
    pub fn witness(&self) -> Option<&Cochain> {
        match self {
            EquivalenceSearch::Witness(mu) => Some(mu),
            EquivalenceSearch::Inequivalent { .. } => None,
        }
    }
}

/// Exhaustive search for `μ ∈ K⁰` with `(δ₁μ)φ¹ = φ²(δ₀μ)`.
///
/// Candidates are enumerated lexicographically with early rejection at each
/// degree-1 cell once both of its faces are assigned. Fails with
/// [`Error::Budget`] when `|K⁰| = |G|^{components}` exceeds `budget`.
pub fn find_equivalence(k: &CochainComplex, phi1: &Cochain, phi2: &Cochain, budget: u128) -> Result<EquivalenceSearch> {
    if phi1.degree() != 1 || phi2.degree() != 1 {
        return invalid("equivalence search compares degree-1 cochains");
    }
    let g = k.coeff().group();
    let n0 = k.components(0)?;
    let candidates = search_space(g.order(), n0);
    if candidates > budget {
        return Err(Error::Budget { needed: candidates, budget });
    }
    let table = EquivalenceTable::new(k)?;
    let coeff = k.coeff();
    let consistent = |mu: &[usize], i: usize| {
        table.ready[i].iter().all(|&t| {
            let (f0, f1, gamma) = table.faces[t];
            g.mul(mu[f1], phi1.get(t)) == g.mul(phi2.get(t), coeff.act(gamma, mu[f0]))
        })
    };
    let mut mu = vec![0usize; n0];
    let mut nodes: u128 = 0;
    if n0 == 0 {
        return Ok(if phi1 == phi2 {
            EquivalenceSearch::Witness(k.identity(0)?)
        } else {
            EquivalenceSearch::Inequivalent { candidates, nodes }
        });
    }
    // iterative depth-first search
    let mut depth = 0usize;
    mu[0] = 0;
    loop {
        nodes += 1;
        if consistent(&mu, depth) {
            if depth + 1 == n0 {
                return Ok(EquivalenceSearch::Witness(k.expand(0, &mu)?));
            }
            depth += 1;
            mu[depth] = 0;
            continue;
        }
        // advance to the next candidate, backtracking as needed
        loop {
            mu[depth] += 1;
            if mu[depth] < g.order() {
                break;
            }
            if depth == 0 {
                return Ok(EquivalenceSearch::Inequivalent { candidates, nodes });
            }
            depth -= 1;
        }
    }
}

/// All TC¹ cocycles, in lexicographic order of component values, by
/// backtracking over degree-1 components with the degree-2 condition checked as soon as a cell is complete.
///
/// Fails with [`Error::Budget`] once more than `budget` partial assignments
/// have been visited.
pub fn enumerate_tc1(k: &CochainComplex, budget: u128) -> Result<Vec<Cochain>> {
    let g = k.coeff().group();
    let coeff = k.coeff();
    let l2 = k.cover().level(2)?;
    let l1 = k.cover().level(1)?;
    let n1 = l1.component_count();
    let mut ready = vec![Vec::new(); n1];
    let faces: Vec<_> = l2
        .component_reps()
        .iter()
        .map(|&t| {
            let c = |i| l1.component(l2.face(i, t));
            (c(0), c(1), c(2), l2.first_gamma(t))
        })
        .collect();
    for (t, &(f0, f1, f2, _)) in faces.iter().enumerate() {
        ready[f0.max(f1).max(f2)].push(t);
    }
    let consistent = |phi: &[usize], i: usize| {
        ready[i].iter().all(|&t| {
            let (f0, f1, f2, gamma) = faces[t];
            g.mul(phi[f2], coeff.act(gamma, phi[f0])) == phi[f1]
        })
    };
    let mut out = Vec::new();
    if n1 == 0 {
        out.push(k.identity(1)?);
        return Ok(out);
    }
    let mut phi = vec![0usize; n1];
    let mut depth = 0usize;
    let mut nodes: u128 = 0;
    loop {
        nodes += 1;
        if nodes > budget {
            return Err(Error::Budget { needed: nodes, budget });
        }
        let ok = consistent(&phi, depth);
        if ok && depth + 1 < n1 {
            depth += 1;
            phi[depth] = 0;
            continue;
        }
        if ok {
            out.push(k.expand(1, &phi)?);
        }
        loop {
            phi[depth] += 1;
            if phi[depth] < g.order() {
                break;
            }
            if depth == 0 {
                return Ok(out);
            }
            depth -= 1;
        }
    }
}

/// All TC⁰ cochains (exhaustive over `K⁰`), lexicographically.
pub fn enumerate_tc0(k: &CochainComplex, budget: u128) -> Result<Vec<Cochain>> {
    let n0 = k.components(0)?;
    let order = k.coeff().group().order();
    let candidates = search_space(order, n0);
    if candidates > budget {
        return Err(Error::Budget { needed: candidates, budget });
    }
    let mut out = Vec::new();
    let mut err = None;
    for_each_tuple(order, n0, |t| {
        if err.is_some() {
            return;
        }
        match k.expand(0, t).and_then(|mu| Ok((is_tc0(k, &mu)?, mu))) {
            Ok((true, mu)) => out.push(mu),
            Ok((false, _)) => {}
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Orbit of a degree-1 cochain under all of `K⁰`.
pub fn orbit(k: &CochainComplex, phi: &Cochain, budget: u128) -> Result<BTreeSet<Cochain>> {
    let n0 = k.components(0)?;
    let order = k.coeff().group().order();
    let candidates = search_space(order, n0);
    if candidates > budget {
        return Err(Error::Budget { needed: candidates, budget });
    }
    let table = EquivalenceTable::new(k)?;
    let g = k.coeff().group();
    let coeff = k.coeff();
    let mut out = BTreeSet::new();
    for_each_tuple(order, n0, |mu| {
        let values = table
            .faces
            .iter()
            .enumerate()
            .map(|(t, &(f0, f1, gamma))| g.mul(g.mul(mu[f1], phi.get(t)), g.inv(coeff.act(gamma, mu[f0]))))
            .collect();
        out.insert(k.from_values(1, values).expect("orbit stays in K¹"));
    });
    Ok(out)
}

/// Lexicographically least cocycle equivalent to `φ`.
pub fn canonical(k: &CochainComplex, phi: &Cochain, budget: u128) -> Result<Cochain> {
    Ok(orbit(k, phi, budget)?.into_iter().next().expect("orbit contains φ"))
}

/// Equivalence classes of TC¹, each given by its least member, plus orbit sizes.
pub fn tc1_classes(k: &CochainComplex, budget: u128) -> Result<Vec<(Cochain, usize)>> {
    let all = enumerate_tc1(k, budget)?;
    let mut seen: HashSet<Cochain> = HashSet::with_capacity(all.len());
    let mut classes = Vec::new();
    for phi in &all {
        if seen.contains(phi) {
            continue;
        }
        let orb = orbit(k, phi, budget)?;
        classes.push((phi.clone(), orb.len()));
        seen.extend(orb);
    }
    Ok(classes)
}

/// Comparison of the pointed sets TC⁰/TC¹ with `H⁰`/`H¹` for abelian
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tc1H1Report {
    pub tc0_count: usize,
    pub h0_order: u128,
    pub tc1_cocycles: usize,
    pub tc1_classes: usize,
    pub h1_order: u128,
    pub h1_factors: Vec<u64>,
    /// `class_of` is constant on each TC¹ class and injective across classes.
    pub class_map_bijective: bool,
}

impl Tc1H1Report {
    pub fn agrees(&self) -> bool {
        self.tc0_count as u128 == self.h0_order && self.tc1_classes as u128 == self.h1_order && self.class_map_bijective
    }
}

pub fn tc1_h1_compare(k: &CochainComplex, budget: u128) -> Result<Tc1H1Report> {
    let ak = AbelianComplex::new(k.clone())?;
    let h0 = ak.cohomology(0)?;
    let h1 = ak.cohomology(1)?;
    let tc0 = enumerate_tc0(k, budget)?;
    let all = enumerate_tc1(k, budget)?;
    let mut seen: HashSet<Cochain> = HashSet::new();
    let mut class_images: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    let mut classes = 0;
    let mut constant = true;
    for phi in &all {
        if seen.contains(phi) {
            continue;
        }
        classes += 1;
        let c = h1.class_of(phi)?;
        let orb = orbit(k, phi, budget)?;
        for psi in &orb {
            if h1.class_of(psi)? != c {
                constant = false;
            }
        }
        *class_images.entry(c).or_default() += 1;
        seen.extend(orb);
    }
    Ok(Tc1H1Report {
        tc0_count: tc0.len(),
        h0_order: h0.order(),
        tc1_cocycles: all.len(),
        tc1_classes: classes,
        h1_order: h1.order(),
        h1_factors: h1.factors().to_vec(),
        class_map_bijective: constant && class_images.values().all(|&n| n == 1) && class_images.len() as u128 == h1.order(),
    })
}

fn extension_complexes(ext: &CentralExtension, cover: &Arc<SimplicialCover>) -> Result<[CochainComplex; 3]> {
    Ok([
        CochainComplex::new(cover.clone(), ext.a().clone())?,
        CochainComplex::new(cover.clone(), ext.b().clone())?,
        CochainComplex::new(cover.clone(), ext.c().clone())?,
    ])
}

fn lift(kb: &CochainComplex, ext: &CentralExtension, c: &Cochain) -> Result<Cochain> {
    kb.from_values(c.degree(), c.values().iter().map(|&v| ext.section().apply(v)).collect())
}

fn pull_back_alpha(ka: &CochainComplex, ext: &CentralExtension, b: &Cochain, what: &str) -> Result<Cochain> {
    let values = b
        .values()
        .iter()
        .map(|&v| {
            ext.alpha_preimage(v)
                .ok_or_else(|| Error::Axiom(format!("{what} does not lie in α(A): β of it is not 1")))
        })
        .collect::<Result<Vec<_>>>()?;
    ka.from_values(b.degree(), values)
}

/// `α⁻¹((δ₁η)⁻¹(δ₀η))` for a B-valued degree-0 lift `η` of a TC⁰ element.
pub fn delta0_of_lift(ext: &CentralExtension, cover: &Arc<SimplicialCover>, eta: &Cochain) -> Result<Cochain> {
    let [ka, kb, _] = extension_complexes(ext, cover)?;
    let d0 = kb.twisted_pullback(0, eta)?;
    let d1 = kb.twisted_pullback(1, eta)?;
    let nu = kb.compose(&kb.invert(&d1), &d0)?;
    pull_back_alpha(&ka, ext, &nu, "(δ₁η)⁻¹(δ₀η)")
}

/// Cochain-level `Δ⁰` using the extension's section.
pub fn delta0_cochain(ext: &CentralExtension, cover: &Arc<SimplicialCover>, mu: &Cochain) -> Result<Cochain> {
    let [_, kb, kc] = extension_complexes(ext, cover)?;
    if !is_tc0(&kc, mu)? {
        return Err(Error::Axiom("Δ⁰ input is not in TC⁰: (δ₁μ)⁻¹(δ₀μ) ≠ 1".into()));
    }
    delta0_of_lift(ext, cover, &lift(&kb, ext, mu)?)
}

/// `Δ⁰[μ] ∈ H¹(A)` in the coordinates of `h1a`.
pub fn delta0(ext: &CentralExtension, cover: &Arc<SimplicialCover>, mu: &Cochain, h1a: &CohomologyGroup) -> Result<Vec<u64>> {
    h1a.class_of(&delta0_cochain(ext, cover, mu)?)
}

/// `α⁻¹((δ₁ψ)⁻¹(δ₂ψ)(δ₀ψ))` for a B-valued lift `ψ` of a TC¹ cocycle; checked
/// to be an A-valued 2-cocycle.
pub fn delta1_of_lift(ext: &CentralExtension, cover: &Arc<SimplicialCover>, psi: &Cochain) -> Result<Cochain> {
    let [ka, kb, _] = extension_complexes(ext, cover)?;
    let defect = cocycle_defect(&kb, psi)?;
    let nu = pull_back_alpha(&ka, ext, &defect, "(δ₁ψ)⁻¹(δ₂ψ)(δ₀ψ)")?;
    if cover.max_degree() >= 3 {
        // (δν) = (δ₀ν)(δ₁ν)⁻¹(δ₂ν)(δ₃ν)⁻¹, evaluated in this order
        let d: Vec<Cochain> = (0..4).map(|i| ka.twisted_pullback(i, &nu)).collect::<Result<_>>()?;
        let dnu = ka.product(&[d[0].clone(), ka.invert(&d[1]), d[2].clone(), ka.invert(&d[3])])?;
        if !ka.is_identity(&dnu) {
            return Err(Error::Axiom("Δ¹ defect is not an A-valued 2-cocycle".into()));
        }
    }
    Ok(nu)
}

/// Cochain-level `Δ¹` using the extension's section.
pub fn delta1_cochain(ext: &CentralExtension, cover: &Arc<SimplicialCover>, phi: &Cochain) -> Result<Cochain> {
    let [_, kb, kc] = extension_complexes(ext, cover)?;
    let check = tc1_check(&kc, phi)?;
    if !check.holds() {
        return Err(Error::Axiom(format!("Δ¹ input is not in TC¹: {}", check.violations[0])));
    }
    delta1_of_lift(ext, cover, &lift(&kb, ext, phi)?)
}

/// `Δ¹[φ] ∈ H²(A)` in the coordinates of `h2a`.
pub fn delta1(ext: &CentralExtension, cover: &Arc<SimplicialCover>, phi: &Cochain, h2a: &CohomologyGroup) -> Result<Vec<u64>> {
    h2a.class_of(&delta1_cochain(ext, cover, phi)?)
}

/// The Dixmier-Douady class of the bundle with transition cocycle `φ`.
pub fn dd(ext: &CentralExtension, cover: &Arc<SimplicialCover>, phi: &Cochain, h2a: &CohomologyGroup) -> Result<Vec<u64>> {
    delta1(ext, cover, phi, h2a)
}

/// Invariance of `Δ¹[φ]` under the choices made in its construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DdInvarianceReport {
    /// Class computed with the extension's own section.
    pub class: Vec<u64>,
    pub trials: usize,
    /// Random sections `s: C → B` giving a different class.
    pub section_mismatches: usize,
    /// Lifts `s∘φ·α(ω)`, `ω ∈ K¹(A)` random, giving a different class.
    pub lift_mismatches: usize,
    /// Equivalent cocycles `(δ₁μ)φ(δ₀μ)⁻¹`, `μ ∈ K⁰(C)` random, giving a
    /// different class.
    pub representative_mismatches: usize,
}

impl DdInvarianceReport {
    pub fn holds(&self) -> bool {
        self.section_mismatches == 0 && self.lift_mismatches == 0 && self.representative_mismatches == 0
    }
}

/// Recomputes `Δ¹[φ]` with `trials` re-chosen sections, lifts and equivalent
/// representatives, seeded from `seed`.
pub fn dd_invariance_check(
    ext: &CentralExtension,
    cover: &Arc<SimplicialCover>,
    phi: &Cochain,
    trials: usize,
    seed: u64,
) -> Result<DdInvarianceReport> {
    let [ka, kb, kc] = extension_complexes(ext, cover)?;
    let h2a = AbelianComplex::new(ka.clone())?.cohomology(2)?;
    let class = delta1(ext, cover, phi, &h2a)?;
    let mut report = DdInvarianceReport {
        class: class.clone(),
        trials,
        section_mismatches: 0,
        lift_mismatches: 0,
        representative_mismatches: 0,
    };
    let base = lift(&kb, ext, phi)?;
    for t in 0..trials as u64 {
        let s = seed.wrapping_add(t);
        let section = crate::extension::Section::random(ext.beta().hom(), s)?;
        if delta1(&ext.resectioned(section)?, cover, phi, &h2a)? != class {
            report.section_mismatches += 1;
        }
        let omega = ka.random(1, s)?;
        let alpha_omega = kb.from_values(1, omega.values().iter().map(|&a| ext.alpha().apply(a)).collect())?;
        let psi = kb.compose(&base, &alpha_omega)?;
        if h2a.class_of(&delta1_of_lift(ext, cover, &psi)?)? != class {
            report.lift_mismatches += 1;
        }
        let mu = kc.random(0, s)?;
        if delta1(ext, cover, &act(&kc, &mu, phi)?, &h2a)? != class {
            report.representative_mismatches += 1;
        }
    }
    Ok(report)
}

/// Exactness of
/// `1 → H⁰(A) → H⁰(B) → H⁰(C) → H¹(A) → H¹(B) → H¹(C) → H²(A)`
/// as pointed sets, by exhaustive enumeration of TC⁰ and TC¹ classes.
pub fn six_term_check(ext: &CentralExtension, cover: &Arc<SimplicialCover>, budget: u128) -> Result<LesReport> {
    let [ka, kb, kc] = extension_complexes(ext, cover)?;
    let aa = AbelianComplex::new(ka.clone())?;
    let h1a = aa.cohomology(1)?;
    let h2a = aa.cohomology(2)?;
    let map = |k_from: &CochainComplex, f: &crate::extension::GammaHom, phi: &Cochain| k_from.map_coefficients(f, phi);

    let tc0: Vec<Vec<Cochain>> = [&ka, &kb, &kc].iter().map(|k| enumerate_tc0(k, budget)).collect::<Result<_>>()?;
    let h1b: Vec<Cochain> = tc1_classes(&kb, budget)?.into_iter().map(|(c, _)| c).collect();
    let h1c: Vec<Cochain> = tc1_classes(&kc, budget)?.into_iter().map(|(c, _)| c).collect();
    let h1a_elems = h1a.elements(budget)?;

    let zero = |n: usize| vec![0u64; n];
    let one_b = canonical(&kb, &kb.identity(1)?, budget)?;
    let one_c = canonical(&kc, &kc.identity(1)?, budget)?;

    let mut checks = Vec::new();
    let mut push = |position: &str, image: BTreeSet<String>, kernel: BTreeSet<String>| {
        checks.push(ExactnessCheck {
            position: position.to_string(),
            image_order: image.len() as u128,
            kernel_order: kernel.len() as u128,
            exact: image == kernel,
        });
    };
    let key = |c: &Cochain| format!("{:?}", c.values());
    let key_v = |c: &[u64]| format!("{c:?}");

    // H⁰(A): image of the trivial group vs kernel of α
    let e_a = ka.identity(0)?;
    let ker: BTreeSet<String> = tc0[0]
        .iter()
        .filter(|mu| kb.is_identity(&map(&ka, ext.alpha(), mu).unwrap()))
        .map(key)
        .collect();
    push("H^0(A)", std::iter::once(key(&e_a)).collect(), ker);

    // H⁰(B)
    let image: BTreeSet<String> = tc0[0].iter().map(|mu| map(&ka, ext.alpha(), mu).map(|c| key(&c))).collect::<Result<_>>()?;
    let ker: BTreeSet<String> = tc0[1]
        .iter()
        .filter(|mu| kc.is_identity(&map(&kb, ext.beta(), mu).unwrap()))
        .map(key)
        .collect();
    push("H^0(B)", image, ker);

    // H⁰(C)
    let image: BTreeSet<String> = tc0[1].iter().map(|mu| map(&kb, ext.beta(), mu).map(|c| key(&c))).collect::<Result<_>>()?;
    let mut ker = BTreeSet::new();
    for mu in &tc0[2] {
        if delta0(ext, cover, mu, &h1a)?.iter().all(|&v| v == 0) {
            ker.insert(key(mu));
        }
    }
    push("H^0(C)", image, ker);

    // H¹(A)
    let mut image = BTreeSet::new();
    for mu in &tc0[2] {
        image.insert(key_v(&delta0(ext, cover, mu, &h1a)?));
    }
    let mut ker = BTreeSet::new();
    for c in &h1a_elems {
        let rep = map(&ka, ext.alpha(), &h1a.representative(c)?)?;
        if canonical(&kb, &rep, budget)? == one_b {
            ker.insert(key_v(c));
        }
    }
    push("H^1(A)", image, ker);

    // H¹(B)
    let mut image = BTreeSet::new();
    for c in &h1a_elems {
        let rep = map(&ka, ext.alpha(), &h1a.representative(c)?)?;
        image.insert(key(&canonical(&kb, &rep, budget)?));
    }
    let mut ker = BTreeSet::new();
    for phi in &h1b {
        if canonical(&kc, &map(&kb, ext.beta(), phi)?, budget)? == one_c {
            ker.insert(key(phi));
        }
    }
    push("H^1(B)", image, ker);

    // H¹(C)
    let mut image = BTreeSet::new();
    for phi in &h1b {
        image.insert(key(&canonical(&kc, &map(&kb, ext.beta(), phi)?, budget)?));
    }
    let mut ker = BTreeSet::new();
    for phi in &h1c {
        if delta1(ext, cover, phi, &h2a)? == zero(h2a.factors().len()) {
            ker.insert(key(phi));
        }
    }
    push("H^1(C)", image, ker);

    let terms = vec![
        ("H^0(A)".to_string(), vec![tc0[0].len() as u64]),
        ("H^0(B)".to_string(), vec![tc0[1].len() as u64]),
        ("H^0(C)".to_string(), vec![tc0[2].len() as u64]),
        ("H^1(A)".to_string(), h1a.factors().to_vec()),
        ("H^1(B)".to_string(), vec![h1b.len() as u64]),
        ("H^1(C)".to_string(), vec![h1c.len() as u64]),
        ("H^2(A)".to_string(), h2a.factors().to_vec()),
    ];
    Ok(LesReport { terms, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::GammaHom;
    use crate::groups::{FiniteGammaGroup, FiniteGroup, GammaAction};
    use crate::space::{Cover, GammaSpace};

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2).unwrap())
    }

    fn point_cover(gamma: &Arc<FiniteGroup>, max_degree: usize) -> Arc<SimplicialCover> {
        Arc::new(SimplicialCover::new(Arc::new(GammaSpace::point(gamma.clone())), Arc::new(Cover::whole(1)), max_degree).unwrap())
    }

    fn cyclic(gamma: &Arc<FiniteGroup>, n: usize, negate: bool) -> Arc<FiniteGammaGroup> {
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        Arc::new(if negate {
            FiniteGammaGroup::new(GammaAction::from_cyclic_generator(gamma.clone(), g, (0..n).map(|x| (n - x) % n).collect()).unwrap())
                .unwrap()
        } else {
            FiniteGammaGroup::trivial(gamma.clone(), g)
        })
    }

    fn bockstein(gamma: &Arc<FiniteGroup>, negate_b: bool) -> CentralExtension {
        let (a, b, c) = (cyclic(gamma, 2, false), cyclic(gamma, 4, negate_b), cyclic(gamma, 2, false));
        CentralExtension::new(
            GammaHom::new(a, b.clone(), vec![0, 2]).unwrap(),
            GammaHom::new(b, c, vec![0, 1, 0, 1]).unwrap(),
        )
        .unwrap()
    }

    /// Slot of the degree-1 point `(γ, pt)`.
    fn slot_of(cover: &SimplicialCover, gamma: usize) -> usize {
        let level = cover.level(1).unwrap();
        (0..level.len()).find(|&s| level.slot(s).point.gammas == vec![gamma]).unwrap()
    }

    fn hom_cocycle(k: &CochainComplex) -> Cochain {
        let mut v = vec![0; 2];
        v[slot_of(k.cover(), 1)] = 1;
        k.from_values(1, v).unwrap()
    }

    #[test]
    fn tc0_examples() {
        let gamma = z2();
        let sc = point_cover(&gamma, 2);
        let k = CochainComplex::new(sc, cyclic(&gamma, 3, true)).unwrap();
        assert!(is_tc0(&k, &k.identity(0).unwrap()).unwrap());
        assert!(!is_tc0(&k, &k.from_values(0, vec![1]).unwrap()).unwrap());
    }

    #[test]
    fn tc1_examples() {
        let gamma = z2();
        let sc = point_cover(&gamma, 2);
        let k = CochainComplex::new(sc.clone(), cyclic(&gamma, 2, false)).unwrap();
        assert!(is_tc1(&k, &k.identity(1).unwrap()).unwrap());
        let phi = hom_cocycle(&k);
        assert!(is_tc1(&k, &phi).unwrap());
        let bad = k.from_values(1, vec![1, 1]).unwrap();
        let check = tc1_check(&k, &bad).unwrap();
        assert!(!check.holds());
        assert!(check.violations.iter().any(|v| v.starts_with("normalization")));
    }

    #[test]
    fn equivalence_search() {
        let gamma = z2();
        let sc = point_cover(&gamma, 2);
        let k = CochainComplex::new(sc, cyclic(&gamma, 4, true)).unwrap();
        let phi = k.identity(1).unwrap();
        let found = find_equivalence(&k, &phi, &phi, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(found.witness(), Some(&k.identity(0).unwrap()));
        for seed in 0..8 {
            let mu = k.random(0, seed).unwrap();
            let psi = act(&k, &mu, &phi).unwrap();
            assert!(is_tc1(&k, &psi).unwrap());
            let w = find_equivalence(&k, &phi, &psi, DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(is_equivalence(&k, w.witness().unwrap(), &phi, &psi).unwrap());
        }
        assert!(matches!(find_equivalence(&k, &phi, &phi, 2), Err(Error::Budget { .. })));
    }

    #[test]
    fn tc_classes_match_cohomology_on_point() {
        let gamma = z2();
        for (n, negate) in [(2, false), (3, true), (4, true), (4, false)] {
            let k = CochainComplex::new(point_cover(&gamma, 2), cyclic(&gamma, n, negate)).unwrap();
            let report = tc1_h1_compare(&k, DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(report.agrees(), "{n} {negate}: {report:?}");
        }
    }

    #[test]
    fn bockstein_obstruction() {
        let gamma = z2();
        let sc = point_cover(&gamma, 3);
        let ext = bockstein(&gamma, false);
        let kc = CochainComplex::new(sc.clone(), ext.c().clone()).unwrap();
        let h2a = AbelianComplex::new(CochainComplex::new(sc.clone(), ext.a().clone()).unwrap())
            .unwrap()
            .cohomology(2)
            .unwrap();
        assert_eq!(h2a.factors(), &[2]);
        assert_eq!(dd(&ext, &sc, &hom_cocycle(&kc), &h2a).unwrap(), vec![1]);
        assert_eq!(dd(&ext, &sc, &kc.identity(1).unwrap(), &h2a).unwrap(), vec![0]);

        // negation on B: the homomorphism cocycle lifts
        let ext = bockstein(&gamma, true);
        assert_eq!(dd(&ext, &sc, &hom_cocycle(&kc), &h2a).unwrap(), vec![0]);
    }

    #[test]
    fn dd_does_not_depend_on_choices() {
        let gamma = z2();
        let sc = point_cover(&gamma, 3);
        for negate in [false, true] {
            let ext = bockstein(&gamma, negate);
            let kc = CochainComplex::new(sc.clone(), ext.c().clone()).unwrap();
            let report = dd_invariance_check(&ext, &sc, &hom_cocycle(&kc), 10, 3).unwrap();
            assert!(report.holds(), "{report:?}");
            assert_eq!(report.class, if negate { vec![0] } else { vec![1] });
        }
    }

    #[test]
    fn six_term_sequences_are_exact() {
        let gamma = z2();
        let sc = point_cover(&gamma, 3);
        for negate in [false, true] {
            let report = six_term_check(&bockstein(&gamma, negate), &sc, DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(report.exact(), "{report:?}");
        }
    }
}
