//! Finite groups given by multiplication tables, homomorphisms, Γ-actions by
//! automorphisms and semidirect products.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, ModMatrix};

/// Size guards for exhaustive axiom checks.
///
/// Associativity is checked on all `n³` triples when `n ≤ exhaustive_order`;
/// above that, on `samples` triples drawn from a fixed-seed generator.
#[derive(Debug, Clone, Copy)]
pub struct CheckLimits {
    pub exhaustive_order: usize,
    pub samples: usize,
}

impl Default for CheckLimits {
    fn default() -> Self {
        Self {
            exhaustive_order: 128,
            samples: 200_000,
        }
    }
}

/// List of violated axioms; empty means the object is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn into_result(self, what: &str) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Axiom(format!("{what}: {}", self.violations.join("; "))))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

/// A finite group on the elements `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    identity: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from its multiplication table, checking the axioms.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        Self::from_table_with(table, labels, CheckLimits::default())
    }

    pub fn from_table_with(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
        limits: CheckLimits,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return invalid("group table is empty");
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return invalid(format!("row {i} of the group table has {} entries, expected {n}", row.len()));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return invalid(format!("group table entry {bad} in row {i} is out of range"));
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return invalid(format!("{} labels for a group of order {n}", l.len()));
            }
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| flat[e * n + g] == g && flat[g * n + e] == g))
            .ok_or_else(|| Error::Axiom("group table has no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            let inv = (0..n).find(|&h| flat[g * n + h] == identity && flat[h * n + g] == identity);
            match inv {
                Some(h) => inverses[g] = h,
                None => return Err(Error::Axiom(format!("element {g} has no inverse"))),
            }
        }
        let group = Self {
            order: n,
            identity,
            table: flat,
            inverses,
            labels,
        };
        group.check_associativity(limits)?;
        Ok(group)
    }

    fn check_associativity(&self, limits: CheckLimits) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        if n <= limits.exhaustive_order {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if bad(a, b, c) {
                            return Err(Error::Axiom(format!("multiplication is not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..limits.samples {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(a, b, c) {
                    return Err(Error::Axiom(format!("multiplication is not associative at ({a},{b},{c})")));
                }
            }
        }
        Ok(())
    }

    /// ℤ/n under addition, identity `0`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("cyclic group order must be at least 1");
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|a| a.to_string()).collect();
        Self::from_table(table, Some(labels))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    /// Direct product; element `(a, b)` has index `a·|other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self> {
        let (n, m) = (self.order, other.order);
        let mut table = vec![vec![0; n * m]; n * m];
        let mut labels = Vec::with_capacity(n * m);
        for a1 in 0..n {
            for b1 in 0..m {
                labels.push(format!("({},{})", self.label(a1), other.label(b1)));
                for a2 in 0..n {
                    for b2 in 0..m {
                        table[a1 * m + b1][a2 * m + b2] = self.mul(a1, a2) * m + other.mul(b1, b2);
                    }
                }
            }
        }
        Self::from_table(table, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a) as u64)
            .fold(1, linalg::lcm) as usize
    }

    pub fn is_central(&self, a: usize) -> bool {
        self.elements().all(|b| self.mul(a, b) == self.mul(b, a))
    }

    /// `a^k` for `k ≥ 0`.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }
}

/// A homomorphism between finite groups, stored as an image array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() {
            return invalid(format!(
                "homomorphism has {} images for a source of order {}",
                images.len(),
                source.order()
            ));
        }
        if let Some(&bad) = images.iter().find(|&&v| v >= target.order()) {
            return invalid(format!("homomorphism image {bad} is out of range"));
        }
        let hom = Self { source, target, images };
        let report = hom.check();
        report.into_result("not a homomorphism")?;
        Ok(hom)
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let images = group.elements().collect();
        Self {
            source: group.clone(),
            target: group,
            images,
        }
    }

    fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (s, t) = (&self.source, &self.target);
        if self.images[s.identity()] != t.identity() {
            report.push("identity is not mapped to identity");
        }
        'outer: for x in s.elements() {
            for y in s.elements() {
                if self.images[s.mul(x, y)] != t.mul(self.images[x], self.images[y]) {
                    report.push(format!("image of {x}·{y} differs from the product of images"));
                    break 'outer;
                }
            }
        }
        report
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.images.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &y in &self.images {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source
            .elements()
            .filter(|&x| self.images[x] == self.target.identity())
            .collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.target.order()];
        for &y in &self.images {
            seen[y] = true;
        }
        (0..seen.len()).filter(|&y| seen[y]).collect()
    }
}

/// An action of Γ on G: one permutation of G's elements per γ.
///
/// Validity as an action by automorphisms is checked by
/// [`check_gamma_group`]; construction itself only checks shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaAction {
    gamma: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    perms: Vec<Vec<usize>>,
}

impl GammaAction {
    pub fn new(gamma: Arc<FiniteGroup>, target: Arc<FiniteGroup>, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != gamma.order() {
            return invalid(format!(
                "action lists {} maps for a group Γ of order {}",
                perms.len(),
                gamma.order()
            ));
        }
        for (k, p) in perms.iter().enumerate() {
            if p.len() != target.order() || p.iter().any(|&v| v >= target.order()) {
                return invalid(format!("action map for γ={k} is not a map of the {}-element target", target.order()));
            }
        }
        Ok(Self { gamma, target, perms })
    }

    pub fn trivial(gamma: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Self {
        let id: Vec<usize> = target.elements().collect();
        let perms = vec![id; gamma.order()];
        Self { gamma, target, perms }
    }

    /// Extends the image of a single generator of a cyclic Γ (element `1` of
    /// `ℤ/n`) to the whole group, `θ_k = θ_1^k`.
    pub fn from_cyclic_generator(gamma: Arc<FiniteGroup>, target: Arc<FiniteGroup>, generator: Vec<usize>) -> Result<Self> {
        let n = gamma.order();
        if target.order() != generator.len() || generator.iter().any(|&v| v >= target.order()) {
            return invalid("generator image is not a map of the target");
        }
        let gen_el = if n > 1 { 1 } else { 0 };
        if n > 1 && gamma.element_order(gen_el) != n {
            return invalid("Γ is not generated by element 1; list the action for every element");
        }
        let mut perms = vec![Vec::new(); n];
        let mut current: Vec<usize> = target.elements().collect();
        let mut g = gamma.identity();
        for _ in 0..n {
            perms[g] = current.clone();
            current = current.iter().map(|&x| generator[x]).collect();
            g = gamma.mul(gen_el, g);
        }
        Self::new(gamma, target, perms)
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    /// θ_γ(g)
    #[inline]
    pub fn act(&self, gamma: usize, g: usize) -> usize {
        self.perms[gamma][g]
    }

    pub fn map(&self, gamma: usize) -> &[usize] {
        &self.perms[gamma]
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.iter().all(|p| p.iter().enumerate().all(|(i, &v)| i == v))
    }
}

/// Checks that θ is an action of Γ on G by group automorphisms.
pub fn check_gamma_group(gamma: &FiniteGroup, group: &FiniteGroup, theta: &GammaAction) -> Result<ValidationReport> {
    if theta.gamma.as_ref() != gamma || theta.target.as_ref() != group {
        return invalid("action's acting/target groups do not match Γ and G");
    }
    let mut report = ValidationReport::default();
    for c in gamma.elements() {
        let p = theta.map(c);
        let mut seen = vec![false; group.order()];
        let bijective = p.iter().all(|&v| !std::mem::replace(&mut seen[v], true));
        let mut hom = true;
        'h: for x in group.elements() {
            for y in group.elements() {
                if p[group.mul(x, y)] != group.mul(p[x], p[y]) {
                    hom = false;
                    break 'h;
                }
            }
        }
        if !bijective || !hom {
            report.push(format!("θ_{} is not an automorphism", gamma.label(c)));
        }
    }
    if theta.map(gamma.identity()).iter().enumerate().any(|(i, &v)| i != v) {
        report.push("θ_1 is not the identity");
    }
    'outer: for c1 in gamma.elements() {
        for c2 in gamma.elements() {
            let prod = gamma.mul(c1, c2);
            if group.elements().any(|g| theta.act(prod, g) != theta.act(c1, theta.act(c2, g))) {
                report.push(format!(
                    "γ ↦ θ_γ is not a homomorphism: θ_({}·{}) ≠ θ_{}∘θ_{}",
                    gamma.label(c1),
                    gamma.label(c2),
                    gamma.label(c1),
                    gamma.label(c2)
                ));
                break 'outer;
            }
        }
    }
    Ok(report)
}

/// A group G together with an action θ of Γ by automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGammaGroup {
    group: Arc<FiniteGroup>,
    action: GammaAction,
}

impl FiniteGammaGroup {
    pub fn new(action: GammaAction) -> Result<Self> {
        check_gamma_group(&action.gamma, &action.target, &action)?.into_result("invalid Γ-group")?;
        Ok(Self {
            group: action.target.clone(),
            action,
        })
    }

    pub fn trivial(gamma: Arc<FiniteGroup>, group: Arc<FiniteGroup>) -> Self {
        Self {
            action: GammaAction::trivial(gamma, group.clone()),
            group,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn action(&self) -> &GammaAction {
        &self.action
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        self.action.gamma()
    }

    #[inline]
    pub fn act(&self, gamma: usize, g: usize) -> usize {
        self.action.act(gamma, g)
    }
}

/// Outer semidirect product Γ ⋉_θ G with `(γ₁,g₁)(γ₂,g₂) = (γ₁γ₂, g₁·θ_{γ₁}(g₂))`.
///
/// Element `(γ, g)` has index `γ·|G| + g`.
pub fn semidirect_product(gamma: &FiniteGroup, group: &FiniteGroup, theta: &GammaAction) -> Result<FiniteGroup> {
    check_gamma_group(gamma, group, theta)?.into_result("cannot form semidirect product")?;
    let (n, m) = (gamma.order(), group.order());
    let mut table = vec![vec![0; n * m]; n * m];
    let mut labels = Vec::with_capacity(n * m);
    for c1 in 0..n {
        for g1 in 0..m {
            labels.push(format!("({},{})", gamma.label(c1), group.label(g1)));
            for c2 in 0..n {
                for g2 in 0..m {
                    let c = gamma.mul(c1, c2);
                    let g = group.mul(g1, theta.act(c1, g2));
                    table[c1 * m + g1][c2 * m + g2] = c * m + g;
                }
            }
        }
    }
    FiniteGroup::from_table(table, Some(labels))
}

/// Invariant-factor decomposition `G ≅ ℤ/n₁ ⊕ … ⊕ ℤ/n_k` with `n₁ | n₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianPresentation {
    factors: Vec<u64>,
    coords: Vec<Vec<u64>>,
    decode: HashMap<Vec<u64>, usize>,
}

impl AbelianPresentation {
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Least common multiple of the factors (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn encode(&self, g: usize) -> &[u64] {
        &self.coords[g]
    }

    /// Element with the given coordinates (reduced modulo the factors).
    pub fn decode(&self, c: &[u64]) -> usize {
        let key: Vec<u64> = c.iter().zip(&self.factors).map(|(v, n)| v % n).collect();
        self.decode[&key]
    }

    /// Integer matrix (columns = images of unit vectors) of a homomorphism
    /// between presented groups.
    pub fn hom_matrix(&self, target: &AbelianPresentation, map: impl Fn(usize) -> usize) -> Vec<Vec<u64>> {
        let mut cols = Vec::with_capacity(self.rank());
        for j in 0..self.rank() {
            let mut unit = vec![0; self.rank()];
            unit[j] = 1;
            cols.push(target.encode(map(self.decode(&unit))).to_vec());
        }
        cols
    }
}

/// Computes the invariant factors of an abelian group and coordinate maps.
///
/// The relation module is the free module on all elements modulo
/// `[g] + [h] − [gh]`, reduced with a Smith normal form over ℤ/exp(G).
pub fn abelian_presentation(group: &FiniteGroup) -> Result<AbelianPresentation> {
    if !group.is_abelian() {
        return Err(Error::NonAbelian("coefficients must be abelian".into()));
    }
    let n = group.order();
    let e = group.exponent() as u64;
    if n == 1 {
        let mut decode = HashMap::new();
        decode.insert(Vec::new(), 0);
        return Ok(AbelianPresentation {
            factors: Vec::new(),
            coords: vec![Vec::new()],
            decode,
        });
    }
    let mut relations = Vec::new();
    for g in 0..n {
        for h in g..n {
            let mut col = vec![0u64; n];
            col[g] = (col[g] + 1) % e;
            col[h] = (col[h] + 1) % e;
            let gh = group.mul(g, h);
            col[gh] = (col[gh] + e - 1) % e;
            relations.push(col);
        }
    }
    let rel = ModMatrix::from_columns(n, &relations, e);
    let snf = linalg::smith_normal_form(&rel);
    let moduli = snf.cokernel_moduli(n);
    let keep: Vec<usize> = (0..n).filter(|&i| moduli[i] > 1).collect();
    let factors: Vec<u64> = keep.iter().map(|&i| moduli[i]).collect();
    let mut coords = Vec::with_capacity(n);
    let mut decode = HashMap::with_capacity(n);
    for g in 0..n {
        let c: Vec<u64> = keep.iter().map(|&i| snf.p.get(i, g) % moduli[i]).collect();
        if decode.insert(c.clone(), g).is_some() {
            return Err(Error::Axiom("abelian presentation is not injective".into()));
        }
        coords.push(c);
    }
    let pres = AbelianPresentation { factors, coords, decode };
    for g in 0..n {
        for h in 0..n {
            let sum: Vec<u64> = pres
                .encode(g)
                .iter()
                .zip(pres.encode(h))
                .zip(&pres.factors)
                .map(|((a, b), m)| (a + b) % m)
                .collect();
            if pres.encode(group.mul(g, h)) != sum.as_slice() {
                return Err(Error::Axiom("abelian presentation is not additive".into()));
            }
        }
    }
    Ok(pres)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n).unwrap())
    }

    fn negation(gamma: &Arc<FiniteGroup>, g: &Arc<FiniteGroup>) -> GammaAction {
        let n = g.order();
        GammaAction::from_cyclic_generator(gamma.clone(), g.clone(), (0..n).map(|x| (n - x) % n).collect()).unwrap()
    }

    #[test]
    fn cyclic_groups() {
        let t = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(t.order(), 1);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(z2.table(), vec![vec![0, 1], vec![1, 0]]);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(z4.inv(3), 1);
        assert_eq!(z4.identity(), 0);
        assert!(FiniteGroup::cyclic(0).is_err());
    }

    #[test]
    fn rejects_broken_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]], None).is_err());
        // a loop that is not associative: order-3 quasigroup with identity 0
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 0]];
        assert!(FiniteGroup::from_table(t, None).is_err());
    }

    #[test]
    fn negation_is_a_gamma_action() {
        let (g2, g4) = (z(2), z(4));
        let theta = negation(&g2, &g4);
        assert!(check_gamma_group(&g2, &g4, &theta).unwrap().is_valid());
        let triv = GammaAction::trivial(g2.clone(), g4.clone());
        assert!(check_gamma_group(&g2, &g4, &triv).unwrap().is_valid());
    }

    #[test]
    fn swap_is_not_an_automorphism() {
        let (g2, g4) = (z(2), z(4));
        let theta = GammaAction::from_cyclic_generator(g2.clone(), g4.clone(), vec![0, 2, 1, 3]).unwrap();
        let report = check_gamma_group(&g2, &g4, &theta).unwrap();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("not an automorphism")));
    }

    #[test]
    fn non_homomorphic_assignment_is_reported() {
        // Γ = ℤ/3 acting on ℤ/3 by negation for every nonidentity γ
        let (g3, z3) = (z(3), z(3));
        let neg: Vec<usize> = vec![0, 2, 1];
        let theta = GammaAction::new(g3.clone(), z3.clone(), vec![vec![0, 1, 2], neg.clone(), neg]).unwrap();
        let report = check_gamma_group(&g3, &z3, &theta).unwrap();
        assert!(report.violations.iter().any(|v| v.contains("not a homomorphism")));
    }

    #[test]
    fn semidirect_products() {
        let (g2, g4) = (z(2), z(4));
        let direct = semidirect_product(&g2, &g4, &GammaAction::trivial(g2.clone(), g4.clone())).unwrap();
        assert!(direct.is_abelian());
        let d8 = semidirect_product(&g2, &g4, &negation(&g2, &g4)).unwrap();
        assert_eq!(d8.order(), 8);
        assert!(!d8.is_abelian());
        assert_eq!(d8.exponent(), 4);
        // (1,g)(γ,1) = (γ,g); (γ,1)(1,g) = (γ, γg)
        let idx = |c: usize, g: usize| c * 4 + g;
        assert_eq!(d8.mul(idx(0, 1), idx(1, 0)), idx(1, 1));
        assert_eq!(d8.mul(idx(1, 0), idx(0, 1)), idx(1, 3));
        assert_eq!(d8.label(idx(1, 3)), "(1,3)");
    }

    #[test]
    fn semidirect_rejects_invalid_action() {
        let (g2, g4) = (z(2), z(4));
        let theta = GammaAction::from_cyclic_generator(g2.clone(), g4.clone(), vec![0, 2, 1, 3]).unwrap();
        assert!(semidirect_product(&g2, &g4, &theta).is_err());
    }

    #[test]
    fn presentations() {
        assert_eq!(abelian_presentation(&FiniteGroup::cyclic(4).unwrap()).unwrap().factors(), &[4]);
        let v4 = FiniteGroup::cyclic(2).unwrap().direct_product(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(abelian_presentation(&v4).unwrap().factors(), &[2, 2]);
        let z6 = FiniteGroup::cyclic(2).unwrap().direct_product(&FiniteGroup::cyclic(3).unwrap()).unwrap();
        assert_eq!(abelian_presentation(&z6).unwrap().factors(), &[6]);
        let z2z4 = FiniteGroup::cyclic(2).unwrap().direct_product(&FiniteGroup::cyclic(4).unwrap()).unwrap();
        assert_eq!(abelian_presentation(&z2z4).unwrap().factors(), &[2, 4]);
        assert!(abelian_presentation(&FiniteGroup::trivial()).unwrap().factors().is_empty());
        let d8 = semidirect_product(&z(2), &z(4), &negation(&z(2), &z(4))).unwrap();
        assert!(matches!(abelian_presentation(&d8), Err(Error::NonAbelian(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn presentation_round_trips(a in 1usize..7, b in 1usize..7) {
                let g = FiniteGroup::cyclic(a).unwrap().direct_product(&FiniteGroup::cyclic(b).unwrap()).unwrap();
                let p = abelian_presentation(&g).unwrap();
                let product: u64 = p.factors().iter().product();
                prop_assert_eq!(product as usize, a * b);
                for x in g.elements() {
                    prop_assert_eq!(p.decode(p.encode(x)), x);
                }
            }

            #[test]
            fn actions_compose(n in 2usize..9, unit_seed in 0usize..8) {
                // multiplication by a unit u of ℤ/n, for Γ = ℤ/ord(u)
                let units: Vec<usize> = (1..n).filter(|&u| linalg::gcd(u as u64, n as u64) == 1).collect();
                let u = units[unit_seed % units.len()];
                let mut ord = 1;
                let mut x = u % n;
                while x != 1 % n { x = x * u % n; ord += 1; }
                let gamma = z(ord);
                let g = z(n);
                let theta = GammaAction::from_cyclic_generator(gamma.clone(), g.clone(), (0..n).map(|x| x * u % n).collect()).unwrap();
                prop_assert!(check_gamma_group(&gamma, &g, &theta).unwrap().is_valid());
                for c1 in gamma.elements() {
                    for c2 in gamma.elements() {
                        for x in g.elements() {
                            prop_assert_eq!(theta.act(gamma.mul(c1, c2), x), theta.act(c1, theta.act(c2, x)));
                        }
                    }
                }
                let sd = semidirect_product(&gamma, &g, &theta).unwrap();
                prop_assert_eq!(sd.order(), ord * n);
            }
        }
    }
}
