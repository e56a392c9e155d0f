//! Combinatorial semi-equivariant principal bundles `P^φ`, cocycle extraction
//! from section families, bundle isomorphisms, and the classification of
//! liftings through a central extension.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::cochain::{Cochain, CochainComplex};
use crate::cohomology::AbelianComplex;
use crate::error::{invalid, Error, Result};
use crate::extension::CentralExtension;
use crate::linalg::{lift_row_moduli, solve};
use crate::nonabelian::{self, search_space, EquivalenceSearch};
use crate::space::{for_each_tuple, MultiIndex, SimplexPoint, SimplicialCover};

/// Disjoint-set forest with path halving; roots are the least members.
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Violations found while auditing the bundle axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BundleAudit {
    pub violations: Vec<String>,
}

impl BundleAudit {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok && self.violations.len() < 64 {
            self.violations.push(msg());
        }
    }
}

/// `P^φ = ⊔_a U_a × G / (a,x,g) ∼ (b,x,φ_{ba}(1,x)g)` with its right G-action,
/// projection and left Γ-action `γ[a,x,g] = [b,γx,φ_{ba}(γ,x)(γg)]`.
#[derive(Debug, Clone)]
pub struct CombinatorialBundle {
    complex: CochainComplex,
    cocycle: Cochain,
    /// Triple `(a,x,g)`, encoded as `slot₀(a,x)·|G| + g`, to its class.
    class_of: Vec<usize>,
    /// Least triple of each class.
    reps: Vec<usize>,
    projection: Vec<usize>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
}

impl CombinatorialBundle {
    /// Materializes `P^φ` by union-find over all triples `(a,x,g)`.
    pub fn from_cocycle(k: &CochainComplex, phi: &Cochain) -> Result<Self> {
        let check = nonabelian::tc1_check(k, phi)?;
        if !check.holds() {
            return Err(Error::Axiom(format!("cannot glue a bundle: {}", check.violations[0])));
        }
        let g = k.coeff().group();
        let n = g.order();
        let sc = k.cover();
        let gamma = sc.gamma();
        let l0 = sc.level(0)?;
        let l1 = sc.level(1)?;
        let triples = l0.len() * n;
        let mut uf = UnionFind::new(triples);
        for t in 0..l1.len() {
            let slot = l1.slot(t);
            if slot.point.gammas[0] != gamma.identity() {
                continue;
            }
            let (b, a, x) = (slot.index.0[0], slot.index.0[1], slot.point.x);
            let sa = slot0(k, a, x)?;
            let sb = slot0(k, b, x)?;
            for h in 0..n {
                uf.union(sa * n + h, sb * n + g.mul(phi.get(t), h));
            }
        }
        let mut class_of = vec![usize::MAX; triples];
        let mut reps = Vec::new();
        for t in 0..triples {
            let root = uf.find(t);
            if class_of[root] == usize::MAX {
                class_of[root] = reps.len();
                reps.push(root);
            }
            class_of[t] = class_of[root];
        }
        let projection = reps.iter().map(|&t| l0.slot(t / n).point.x).collect();
        let right = reps
            .iter()
            .map(|&t| (0..n).map(|h| class_of[(t / n) * n + g.mul(t % n, h)]).collect())
            .collect();
        let mut bundle = Self {
            complex: k.clone(),
            cocycle: phi.clone(),
            class_of,
            reps,
            projection,
            right,
            left: Vec::new(),
        };
        bundle.left = gamma
            .elements()
            .map(|c| {
                (0..bundle.reps.len())
                    .map(|cls| bundle.act_triple(c, bundle.reps[cls], None))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(bundle)
    }

    /// `γ·(a,x,g)` computed through patch `b` (least admissible when `None`).
    fn act_triple(&self, c: usize, triple: usize, patch: Option<usize>) -> Result<usize> {
        let k = &self.complex;
        let g = k.coeff().group();
        let n = g.order();
        let sc = k.cover();
        let slot = sc.level(0)?.slot(triple / n);
        let (a, x, h) = (slot.index.0[0], slot.point.x, triple % n);
        let y = sc.space().act(c, x);
        let cover = sc.cover();
        let b = match patch {
            Some(b) => b,
            None => (0..cover.len())
                .find(|&b| cover.contains(b, y))
                .ok_or_else(|| Error::Axiom("cover does not cover γx".into()))?,
        };
        let t = sc
            .level(1)?
            .find(&MultiIndex(vec![b, a]), &SimplexPoint::new(vec![c], x))
            .ok_or_else(|| Error::Axiom("γx is not in the chosen patch".into()))?;
        let value = g.mul(self.cocycle.get(t), k.coeff().act(c, h));
        Ok(self.class_of[slot0(k, b, y)? * n + value])
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    /// Number of points `[a,x,g]` of the total space.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class of `(a, x, g)`.
    pub fn class(&self, a: usize, x: usize, g: usize) -> Result<usize> {
        let n = self.complex.coeff().group().order();
        if g >= n {
            return invalid("group element out of range");
        }
        Ok(self.class_of[slot0(&self.complex, a, x)? * n + g])
    }

    /// `π[a,x,g] = x`.
    pub fn project(&self, p: usize) -> usize {
        self.projection[p]
    }

    /// `p·g`.
    pub fn right(&self, p: usize, g: usize) -> usize {
        self.right[p][g]
    }

    /// `γ·p`.
    pub fn left(&self, gamma: usize, p: usize) -> usize {
        self.left[gamma][p]
    }

    /// Classes over `x`.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.projection[p] == x).collect()
    }

    /// Exhaustive audit of the principal-bundle and semi-equivariance axioms,
    /// including independence of the Γ-action from the patch choice.
    pub fn audit(&self) -> Result<BundleAudit> {
        let mut audit = BundleAudit::default();
        let k = &self.complex;
        let g = k.coeff().group();
        let n = g.order();
        let sc = k.cover();
        let gamma = sc.gamma();
        let space = sc.space();
        for x in 0..space.len() {
            let fiber = self.fiber(x);
            audit.record(fiber.len() == n, || format!("fiber over {} has {} points, expected {n}", space.label(x), fiber.len()));
            if let Some(&p) = fiber.first() {
                let orbit: BTreeSet<usize> = (0..n).map(|h| self.right(p, h)).collect();
                audit.record(orbit.len() == n, || format!("right action is not free over {}", space.label(x)));
                audit.record(orbit == fiber.iter().copied().collect(), || {
                    format!("right action is not transitive over {}", space.label(x))
                });
            }
        }
        for p in 0..self.len() {
            for h in 0..n {
                for h2 in 0..n {
                    audit.record(self.right(self.right(p, h), h2) == self.right(p, g.mul(h, h2)), || {
                        "right action is not an action".into()
                    });
                }
            }
            audit.record(self.left(gamma.identity(), p) == p, || "identity of Γ acts nontrivially".into());
            for c in gamma.elements() {
                let q = self.left(c, p);
                audit.record(self.project(q) == space.act(c, self.project(p)), || format!("π(γp) ≠ γπ(p) at γ = {}", gamma.label(c)));
                for h in 0..n {
                    audit.record(self.left(c, self.right(p, h)) == self.right(q, k.coeff().act(c, h)), || {
                        format!("γ(pg) ≠ (γp)(γg) at γ = {}", gamma.label(c))
                    });
                }
                for c2 in gamma.elements() {
                    audit.record(self.left(c, self.left(c2, p)) == self.left(gamma.mul(c, c2), p), || {
                        "Γ-action on the total space is not an action".into()
                    });
                }
            }
        }
        // patch independence over all triples and all admissible patches
        let cover = sc.cover();
        for triple in 0..self.class_of.len() {
            let cls = self.class_of[triple];
            let x = sc.level(0)?.slot(triple / n).point.x;
            for c in gamma.elements() {
                let y = space.act(c, x);
                for b in (0..cover.len()).filter(|&b| cover.contains(b, y)) {
                    let q = self.act_triple(c, triple, Some(b))?;
                    audit.record(q == self.left(c, cls), || {
                        format!("Γ-action depends on the patch choice (patch {})", cover.name(b))
                    });
                }
            }
        }
        Ok(audit)
    }

    /// Number of connected "sheets": classes are joined when they have
    /// representatives `(a,x,g)` and `(a,y,g)` on a common patch.
    pub fn sheet_components(&self) -> usize {
        let n = self.complex.coeff().group().order();
        let l0 = self.complex.cover().level(0).expect("level 0");
        let mut uf = UnionFind::new(self.len());
        let mut first: std::collections::HashMap<(usize, usize), usize> = std::collections::HashMap::new();
        for triple in 0..self.class_of.len() {
            let a = l0.slot(triple / n).index.0[0];
            let key = (a, triple % n);
            let cls = self.class_of[triple];
            match first.get(&key) {
                Some(&other) => uf.union(other, cls),
                None => {
                    first.insert(key, cls);
                }
            }
        }
        (0..self.len()).filter(|&p| uf.find(p) == p).count()
    }
}

fn slot0(k: &CochainComplex, a: usize, x: usize) -> Result<usize> {
    k.cover()
        .level(0)?
        .find(&MultiIndex(vec![a]), &SimplexPoint::new(Vec::new(), x))
        .ok_or_else(|| Error::Invalid(format!("point {x} is not in patch {a}")))
}

/// Local sections `s_a: U_a → P`, one class per degree-0 slot `(a, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionFamily {
    values: Vec<usize>,
}

impl SectionFamily {
    /// Checks `π∘s_a = id`.
    pub fn new(bundle: &CombinatorialBundle, values: Vec<usize>) -> Result<Self> {
        let l0 = bundle.complex.cover().level(0)?;
        if values.len() != l0.len() {
            return invalid("a section family needs one point per (patch, point) pair");
        }
        for (s, &p) in values.iter().enumerate() {
            if p >= bundle.len() || bundle.project(p) != l0.slot(s).point.x {
                return Err(Error::Axiom(format!(
                    "section over patch {} fails π∘s = id",
                    bundle.complex.cover().cover().name(l0.slot(s).index.0[0])
                )));
            }
        }
        Ok(Self { values })
    }

    /// `s_a(x) = [a, x, 1]`.
    pub fn canonical(bundle: &CombinatorialBundle) -> Result<Self> {
        let n = bundle.complex.coeff().group().order();
        let e = bundle.complex.coeff().group().identity();
        let l0 = bundle.complex.cover().level(0)?;
        Self::new(bundle, (0..l0.len()).map(|s| bundle.class_of[s * n + e]).collect())
    }

    /// `s′_a(x) = s_a(x)·μ_a(x)`.
    pub fn perturbed(&self, bundle: &CombinatorialBundle, mu: &Cochain) -> Result<Self> {
        if mu.degree() != 0 || mu.len() != self.values.len() {
            return invalid("perturbation must be a degree-0 cochain");
        }
        Self::new(bundle, self.values.iter().zip(mu.values()).map(|(&p, &m)| bundle.right(p, m)).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// `φ_{ba}(γ,x)` = the unique `g` with `γ s_a(x) = s_b(γx) g`.
pub fn cocycle_from_sections(bundle: &CombinatorialBundle, s: &SectionFamily) -> Result<Cochain> {
    let k = &bundle.complex;
    let sc = k.cover();
    let l1 = sc.level(1)?;
    let n = k.coeff().group().order();
    let mut values = Vec::with_capacity(l1.len());
    for t in 0..l1.len() {
        let slot = l1.slot(t);
        let (b, a, c, x) = (slot.index.0[0], slot.index.0[1], slot.point.gammas[0], slot.point.x);
        let lhs = bundle.left(c, s.values[slot0(k, a, x)?]);
        let base = s.values[slot0(k, b, sc.space().act(c, x))?];
        let h = (0..n)
            .find(|&h| bundle.right(base, h) == lhs)
            .ok_or_else(|| Error::Axiom("γ s_a(x) is not in the fiber of s_b(γx)".into()))?;
        values.push(h);
    }
    let phi = k.from_values(1, values)?;
    let check = nonabelian::tc1_check(k, &phi)?;
    if !check.holds() {
        return Err(Error::Axiom(format!("extracted cocycle fails: {}", check.violations[0])));
    }
    Ok(phi)
}

/// Whether `f` (class ↦ class) is a bijective, π-, G- and Γ-compatible map
/// `P → Q` over the same cover and coefficients.
pub fn verify_bundle_map(p: &CombinatorialBundle, q: &CombinatorialBundle, f: &[usize]) -> Result<BundleAudit> {
    let mut audit = BundleAudit::default();
    if f.len() != p.len() || p.len() != q.len() {
        audit.violations.push("total spaces have different sizes".into());
        return Ok(audit);
    }
    let image: BTreeSet<usize> = f.iter().copied().collect();
    audit.record(image.len() == q.len(), || "map is not bijective".into());
    let g = p.complex.coeff().group();
    let gamma = p.complex.cover().gamma();
    for x in 0..p.len() {
        audit.record(q.project(f[x]) == p.project(x), || "map does not cover the identity of X".into());
        for h in g.elements() {
            audit.record(f[p.right(x, h)] == q.right(f[x], h), || "map is not G-equivariant".into());
        }
        for c in gamma.elements() {
            audit.record(f[p.left(c, x)] == q.left(c, f[x]), || "map is not Γ-equivariant".into());
        }
    }
    Ok(audit)
}

/// An explicit isomorphism `[a,x,g] ↦ [a,x,μ_a(x)g]` with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleIsomorphism {
    pub witness: Cochain,
    pub map: Vec<usize>,
}

/// Decides `P₁ ≅ P₂` through an equivalence search on their canonical
/// cocycles, then builds and audits the explicit map.
pub fn bundle_iso_check(p1: &CombinatorialBundle, p2: &CombinatorialBundle, budget: u128) -> Result<Option<BundleIsomorphism>> {
    let k = &p1.complex;
    let phi1 = cocycle_from_sections(p1, &SectionFamily::canonical(p1)?)?;
    let phi2 = cocycle_from_sections(p2, &SectionFamily::canonical(p2)?)?;
    let mu = match nonabelian::find_equivalence(k, &phi1, &phi2, budget)? {
        EquivalenceSearch::Witness(mu) => mu,
        EquivalenceSearch::Inequivalent { .. } => return Ok(None),
    };
    let g = k.coeff().group();
    let n = g.order();
    let mut map = vec![usize::MAX; p1.len()];
    for triple in 0..p1.class_of.len() {
        let (s, h) = (triple / n, triple % n);
        let target = p2.class_of[s * n + g.mul(mu.get(s), h)];
        let cls = p1.class_of[triple];
        if map[cls] == usize::MAX {
            map[cls] = target;
        } else if map[cls] != target {
            return Err(Error::Axiom("isomorphism induced by μ is not well defined".into()));
        }
    }
    let audit = verify_bundle_map(p1, p2, &map)?;
    if !audit.holds() {
        return Err(Error::Axiom(format!("isomorphism induced by μ fails: {}", audit.violations[0])));
    }
    Ok(Some(BundleIsomorphism { witness: mu, map }))
}

/// Round-trip results between cocycles and bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    /// Canonical sections of `P^φ` give back `φ` exactly.
    pub cocycle_exact: bool,
    /// Sections perturbed by `μ` give a cocycle equivalent to `φ` via `μ`.
    pub perturbed_equivalent: bool,
    /// `P^{φ^s} → P`, `[a,x,g] ↦ s_a(x)g`, is an isomorphism.
    pub bundle_iso: bool,
    pub bundle_axioms: bool,
    pub violations: Vec<String>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.cocycle_exact && self.perturbed_equivalent && self.bundle_iso && self.bundle_axioms
    }
}

/// Both directions of the cocycle/bundle correspondence for `φ`, with the
/// section perturbation drawn from `seed`.
pub fn roundtrip_check(k: &CochainComplex, phi: &Cochain, seed: u64) -> Result<RoundtripReport> {
    let bundle = CombinatorialBundle::from_cocycle(k, phi)?;
    let mut violations = bundle.audit()?.violations;
    let bundle_axioms = violations.is_empty();
    let canonical = SectionFamily::canonical(&bundle)?;
    let cocycle_exact = cocycle_from_sections(&bundle, &canonical)? == *phi;
    let mu = k.random(0, seed)?;
    let perturbed = canonical.perturbed(&bundle, &mu)?;
    let phi_s = cocycle_from_sections(&bundle, &perturbed)?;
    let perturbed_equivalent = nonabelian::is_equivalence(k, &mu, &phi_s, phi)?;
    let iso = sections_isomorphism(&bundle, &perturbed)?;
    violations.extend(iso.violations.iter().cloned());
    Ok(RoundtripReport {
        cocycle_exact,
        perturbed_equivalent,
        bundle_iso: iso.holds(),
        bundle_axioms,
        violations,
    })
}

/// Rebuilds `P^{φ^s}` and audits `[a,x,g] ↦ s_a(x)g` as an isomorphism onto `P`.
pub fn sections_isomorphism(bundle: &CombinatorialBundle, s: &SectionFamily) -> Result<BundleAudit> {
    let k = &bundle.complex;
    let phi_s = cocycle_from_sections(bundle, s)?;
    let rebuilt = CombinatorialBundle::from_cocycle(k, &phi_s)?;
    let n = k.coeff().group().order();
    let mut map = vec![usize::MAX; rebuilt.len()];
    let mut audit = BundleAudit::default();
    for triple in 0..rebuilt.class_of.len() {
        let target = bundle.right(s.values[triple / n], triple % n);
        let cls = rebuilt.class_of[triple];
        if map[cls] == usize::MAX {
            map[cls] = target;
        } else {
            audit.record(map[cls] == target, || "[a,x,g] ↦ s_a(x)g is not well defined".into());
        }
    }
    audit.violations.extend(verify_bundle_map(&rebuilt, bundle, &map)?.violations);
    Ok(audit)
}

/// Result of classifying the liftings of `φ` through `1 → A → B → C → 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftingClassification {
    /// `DD(φ)` in the coordinates of `H²(A)`.
    pub dd_class: Vec<u64>,
    pub h2_factors: Vec<u64>,
    pub exists: bool,
    /// One B-valued lifting per class (lexicographically least in its
    /// `α(K⁰(A))`-orbit when that orbit is small enough to enumerate).
    #[serde(serialize_with = "serialize_cochains")]
    pub representatives: Vec<Cochain>,
    pub class_count: u128,
    pub h1_factors: Vec<u64>,
    pub h1_order: u128,
}

fn serialize_cochains<S: serde::Serializer>(v: &[Cochain], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(c.values())?;
    }
    seq.end()
}

fn section_lift(kb: &CochainComplex, ext: &CentralExtension, phi: &Cochain) -> Result<Cochain> {
    kb.from_values(phi.degree(), phi.values().iter().map(|&v| ext.section().apply(v)).collect())
}

/// `ψ·α(ω)`.
fn twist_by(kb: &CochainComplex, ext: &CentralExtension, psi: &Cochain, omega: &Cochain) -> Result<Cochain> {
    kb.compose(psi, &kb.from_values(psi.degree(), omega.values().iter().map(|&a| ext.alpha().apply(a)).collect())?)
}

/// Solves for liftings: with `ψ₀ = s∘φ` and `ν = Δ¹`-defect, the liftings are
/// `ψ₀·α(ω)` with `δω = −ν`, one class per element of `H¹(A)`.
pub fn solve_liftings(
    ext: &CentralExtension,
    cover: &Arc<SimplicialCover>,
    phi: &Cochain,
    budget: u128,
) -> Result<LiftingClassification> {
    let ka = CochainComplex::new(cover.clone(), ext.a().clone())?;
    let kb = CochainComplex::new(cover.clone(), ext.b().clone())?;
    let kc = CochainComplex::new(cover.clone(), ext.c().clone())?;
    let aa = AbelianComplex::new(ka.clone())?;
    let h1 = aa.cohomology(1)?;
    let h2 = aa.cohomology(2)?;
    let nu = nonabelian::delta1_cochain(ext, cover, phi)?;
    let dd_class = h2.class_of(&nu)?;
    let mut out = LiftingClassification {
        dd_class: dd_class.clone(),
        h2_factors: h2.factors().to_vec(),
        exists: false,
        representatives: Vec::new(),
        class_count: 0,
        h1_factors: h1.factors().to_vec(),
        h1_order: h1.order(),
    };
    if dd_class.iter().any(|&c| c != 0) {
        return Ok(out);
    }
    // δω ≡ −ν, coordinate-wise modulo the factors of A
    let e = aa.modulus();
    let d = aa.coboundary_matrix(1)?;
    let target_moduli = aa.moduli(2)?;
    let rhs: Vec<u64> = aa
        .coords(&nu)
        .iter()
        .zip(&target_moduli)
        .map(|(&v, &m)| ((m - v % m) % m) * (e / m) % e)
        .collect();
    let omega0 = if d.rows() == 0 || d.cols() == 0 {
        vec![0; d.cols()]
    } else {
        solve(&lift_row_moduli(&d, &target_moduli), &rhs)
            .ok_or_else(|| Error::Axiom("DD vanishes but δω = −ν has no solution".into()))?
    };
    let omega0 = aa.cochain(1, &omega0)?;
    let psi0 = section_lift(&kb, ext, phi)?;
    let elems = h1.elements(budget)?;
    let n0 = ka.components(0)?;
    let a_order = ka.coeff().group().order();
    let canonicalize = search_space(a_order, n0) <= budget;
    let mut reps = Vec::with_capacity(elems.len());
    for c in &elems {
        let omega = ka.compose(&omega0, &h1.representative(c)?)?;
        let mut psi = twist_by(&kb, ext, &psi0, &omega)?;
        if !nonabelian::is_tc1(&kb, &psi)? || kb.map_coefficients(ext.beta(), &psi)? != *phi {
            return Err(Error::Axiom("solved lifting is not a TC¹ lifting of φ".into()));
        }
        if canonicalize {
            let mut best = psi.clone();
            for_each_tuple(a_order, n0, |lam| {
                let mu = kb
                    .expand(0, &lam.iter().map(|&a| ext.alpha().apply(a)).collect::<Vec<_>>())
                    .expect("α(λ) is a B-valued cochain");
                let cand = nonabelian::act(&kb, &mu, &psi).expect("degrees match");
                if cand < best {
                    best = cand;
                }
            });
            psi = best;
        }
        reps.push(psi);
    }
    let _ = kc;
    reps.sort();
    out.exists = true;
    out.class_count = reps.len() as u128;
    out.representatives = reps;
    Ok(out)
}

/// Exhaustive lifting census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteLiftings {
    /// Number of pointwise lifts `ψ` with `β∘ψ = φ` examined.
    pub candidates: u128,
    pub cocycles: usize,
    /// Least member of each lifting class, in increasing order. Two liftings
    /// are equivalent when an isomorphism of B-bundles over `P^φ` relates
    /// them, i.e. a gauge `μ ∈ K⁰(B)` with `β∘μ = 1`.
    #[serde(serialize_with = "serialize_cochains")]
    pub representatives: Vec<Cochain>,
    pub class_sizes: Vec<usize>,
    /// Classes of the liftings as plain B-bundles (any `μ ∈ K⁰(B)`); this can
    /// be coarser when `Δ⁰: H⁰(C) → H¹(A)` is nonzero.
    pub bundle_classes: usize,
}

impl BruteLiftings {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }
}

/// Enumerates every pointwise lift of `φ`, keeps the TC¹ ones, groups them
/// into lifting classes by exhaustive search over gauges `α(λ)`,
/// `λ ∈ K⁰(A)`, and separately counts their B-isomorphism classes.
pub fn enumerate_liftings_bruteforce(
    ext: &CentralExtension,
    cover: &Arc<SimplicialCover>,
    phi: &Cochain,
    bound: u128,
) -> Result<BruteLiftings> {
    let kb = CochainComplex::new(cover.clone(), ext.b().clone())?;
    let n1 = kb.components(1)?;
    let n0 = kb.components(0)?;
    let a_order = ext.a().group().order();
    let candidates = search_space(a_order, n1);
    let gauges = search_space(a_order, n0);
    if candidates > bound || gauges > bound {
        return Err(Error::Budget {
            needed: candidates.max(gauges),
            budget: bound,
        });
    }
    let psi0 = kb.component_values(&section_lift(&kb, ext, phi)?)?;
    let b = kb.coeff().group();
    let mut cocycles = Vec::new();
    let mut err = None;
    for_each_tuple(a_order, n1, |omega| {
        if err.is_some() {
            return;
        }
        let values: Vec<usize> = psi0
            .iter()
            .zip(omega)
            .map(|(&v, &a)| b.mul(v, ext.alpha().apply(a)))
            .collect();
        match kb.expand(1, &values).and_then(|psi| Ok((nonabelian::is_tc1(&kb, &psi)?, psi))) {
            Ok((true, psi)) => cocycles.push(psi),
            Ok((false, _)) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    cocycles.sort();
    let mut gauge_list = Vec::with_capacity(gauges as usize);
    for_each_tuple(a_order, n0, |lam| {
        gauge_list.push(
            kb.expand(0, &lam.iter().map(|&a| ext.alpha().apply(a)).collect::<Vec<_>>())
                .expect("α(λ) is a B-valued cochain"),
        );
    });
    let mut classes: BTreeMap<Cochain, usize> = BTreeMap::new();
    for psi in &cocycles {
        let mut least = psi.clone();
        for mu in &gauge_list {
            let cand = nonabelian::act(&kb, mu, psi)?;
            if cand < least {
                least = cand;
            }
        }
        *classes.entry(least).or_default() += 1;
    }
    let (representatives, class_sizes): (Vec<Cochain>, Vec<usize>) = classes.into_iter().unzip();
    let mut bundle_reps: Vec<&Cochain> = Vec::new();
    'next: for psi in &representatives {
        for rep in &bundle_reps {
            if nonabelian::find_equivalence(&kb, rep, psi, bound)?.witness().is_some() {
                continue 'next;
            }
        }
        bundle_reps.push(psi);
    }
    Ok(BruteLiftings {
        candidates,
        cocycles: cocycles.len(),
        bundle_classes: bundle_reps.len(),
        representatives,
        class_sizes,
    })
}

/// Checks that `β` induces a bundle map `P^ψ → P^φ`, `[a,x,b] ↦ [a,x,β(b)]`,
/// which is surjective, covers the identity, is Γ-equivariant and satisfies
/// `f(qb) = f(q)β(b)`.
pub fn verify_lifting_bundle(ext: &CentralExtension, cover: &Arc<SimplicialCover>, psi: &Cochain, phi: &Cochain) -> Result<BundleAudit> {
    let kb = CochainComplex::new(cover.clone(), ext.b().clone())?;
    let kc = CochainComplex::new(cover.clone(), ext.c().clone())?;
    let q = CombinatorialBundle::from_cocycle(&kb, psi)?;
    let p = CombinatorialBundle::from_cocycle(&kc, phi)?;
    let mut audit = q.audit()?;
    let nb = ext.b().group().order();
    let nc = ext.c().group().order();
    let mut map = vec![usize::MAX; q.len()];
    for triple in 0..q.class_of.len() {
        let target = p.class_of[(triple / nb) * nc + ext.beta().apply(triple % nb)];
        let cls = q.class_of[triple];
        if map[cls] == usize::MAX {
            map[cls] = target;
        } else {
            audit.record(map[cls] == target, || "[a,x,b] ↦ [a,x,β(b)] is not well defined".into());
        }
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    audit.record(image.len() == p.len(), || "β-map onto P^φ is not surjective".into());
    let gamma = cover.gamma();
    for x in 0..q.len() {
        audit.record(p.project(map[x]) == q.project(x), || "β-map does not cover the identity".into());
        for c in gamma.elements() {
            audit.record(map[q.left(c, x)] == p.left(c, map[x]), || "β-map is not Γ-equivariant".into());
        }
        for h in 0..nb {
            audit.record(map[q.right(x, h)] == p.right(map[x], ext.beta().apply(h)), || {
                "β-map is not compatible with the right actions".into()
            });
        }
    }
    Ok(audit)
}

/// `DD(P)` for a bundle: extract its cocycle with canonical sections, then Δ¹.
pub fn bundle_dd(
    ext: &CentralExtension,
    bundle: &CombinatorialBundle,
    h2a: &crate::cohomology::CohomologyGroup,
) -> Result<Vec<u64>> {
    let phi = cocycle_from_sections(bundle, &SectionFamily::canonical(bundle)?)?;
    nonabelian::dd(ext, bundle.complex.cover(), &phi, h2a)
}
