//! Γ-equivariant homomorphisms, set-sections and central extensions
//! `1 → A → B → C → 1` of Γ-groups.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::groups::{FiniteGammaGroup, GroupHom, ValidationReport};

/// A homomorphism of Γ-groups: `φ(γg) = γφ(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaHom {
    source: Arc<FiniteGammaGroup>,
    target: Arc<FiniteGammaGroup>,
    hom: GroupHom,
}

impl GammaHom {
    pub fn new(source: Arc<FiniteGammaGroup>, target: Arc<FiniteGammaGroup>, images: Vec<usize>) -> Result<Self> {
        if source.gamma() != target.gamma() {
            return invalid("Γ-group homomorphism between groups with different Γ");
        }
        let hom = GroupHom::new(source.group().clone(), target.group().clone(), images)?;
        let map = Self { source, target, hom };
        if !map.is_equivariant() {
            return Err(crate::Error::Axiom("homomorphism is not Γ-equivariant".into()));
        }
        Ok(map)
    }

    pub fn identity(group: Arc<FiniteGammaGroup>) -> Self {
        Self {
            hom: GroupHom::identity(group.group().clone()),
            source: group.clone(),
            target: group,
        }
    }

    pub fn is_equivariant(&self) -> bool {
        let gamma = self.source.gamma();
        gamma.elements().all(|c| {
            self.source
                .group()
                .elements()
                .all(|g| self.hom.apply(self.source.act(c, g)) == self.target.act(c, self.hom.apply(g)))
        })
    }

    pub fn source(&self) -> &Arc<FiniteGammaGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGammaGroup> {
        &self.target
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.hom.apply(g)
    }
}

/// A set-theoretic section `s: C → B` of a surjection `β: B → C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    images: Vec<usize>,
}

impl Section {
    /// Checks `β∘s = id` and `s(1) = 1`.
    pub fn from_choices(beta: &GroupHom, images: Vec<usize>) -> Result<Self> {
        let (b, c) = (beta.source(), beta.target());
        if images.len() != c.order() || images.iter().any(|&x| x >= b.order()) {
            return invalid("section must pick one element of B per element of C");
        }
        if images[c.identity()] != b.identity() {
            return invalid("section must send 1 to 1");
        }
        if c.elements().any(|y| beta.apply(images[y]) != y) {
            return invalid("section is not a right inverse of β");
        }
        Ok(Self { images })
    }

    /// A random section, reproducible from `seed`, still sending 1 to 1.
    pub fn random(beta: &GroupHom, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (b, c) = (beta.source(), beta.target());
        let mut images = Vec::with_capacity(c.order());
        for y in c.elements() {
            if y == c.identity() {
                images.push(b.identity());
                continue;
            }
            let fiber: Vec<usize> = b.elements().filter(|&x| beta.apply(x) == y).collect();
            match fiber.choose(&mut rng) {
                Some(&x) => images.push(x),
                None => return invalid("β is not surjective"),
            }
        }
        Self::from_choices(beta, images)
    }

    #[inline]
    pub fn apply(&self, c: usize) -> usize {
        self.images[c]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// The deterministic section: least-index preimage, with `1 ↦ 1` forced.
///
/// Elements are enumerated in index order; for a direct product `X × Y` the
/// index of `(x, y)` is `x·|Y| + y`, so the least preimage under the first
/// projection has second coordinate `0`.
pub fn section_of(beta: &GroupHom) -> Result<Section> {
    let (b, c) = (beta.source(), beta.target());
    let mut images = vec![usize::MAX; c.order()];
    for x in b.elements() {
        let y = beta.apply(x);
        if images[y] == usize::MAX {
            images[y] = x;
        }
    }
    if images.contains(&usize::MAX) {
        return invalid("β is not surjective");
    }
    images[c.identity()] = b.identity();
    Section::from_choices(beta, images)
}

/// `1 → A →α B →β C → 1` with α(A) central in B, plus a section of β.
#[derive(Debug, Clone)]
pub struct CentralExtension {
    alpha: GammaHom,
    beta: GammaHom,
    section: Section,
    alpha_inverse: Vec<Option<usize>>,
}

/// Audits every defining condition of a central extension elementwise.
pub fn check_central_extension(alpha: &GammaHom, beta: &GammaHom, section: Option<&Section>) -> ValidationReport {
    let mut report = ValidationReport::default();
    if alpha.target().group() != beta.source().group() {
        report.push("α's target is not β's source");
        return report;
    }
    if !alpha.hom().is_injective() {
        report.push("α not injective");
    }
    if !beta.hom().is_surjective() {
        report.push("β not surjective");
    }
    let mut image = alpha.hom().image();
    image.sort_unstable();
    let mut kernel = beta.hom().kernel();
    kernel.sort_unstable();
    if image != kernel {
        report.push("image(α) ≠ kernel(β)");
    }
    let b = alpha.target().group();
    if alpha.hom().image().iter().any(|&x| !b.is_central(x)) {
        report.push("α(A) is not central in B");
    }
    if !alpha.is_equivariant() {
        report.push("α not Γ-equivariant");
    }
    if !beta.is_equivariant() {
        report.push("β not Γ-equivariant");
    }
    if let Some(s) = section {
        let c = beta.target().group();
        if s.images().len() != c.order() || c.elements().any(|y| beta.apply(s.apply(y)) != y) {
            report.push("β∘s ≠ id");
        }
    }
    report
}

impl CentralExtension {
    /// Validates the data and attaches the deterministic section.
    pub fn new(alpha: GammaHom, beta: GammaHom) -> Result<Self> {
        check_central_extension(&alpha, &beta, None).into_result("invalid central extension")?;
        let section = section_of(beta.hom())?;
        Self::with_section(alpha, beta, section)
    }

    pub fn with_section(alpha: GammaHom, beta: GammaHom, section: Section) -> Result<Self> {
        check_central_extension(&alpha, &beta, Some(&section)).into_result("invalid central extension")?;
        let mut alpha_inverse = vec![None; alpha.target().group().order()];
        for a in alpha.source().group().elements() {
            alpha_inverse[alpha.apply(a)] = Some(a);
        }
        Ok(Self {
            alpha,
            beta,
            section,
            alpha_inverse,
        })
    }

    /// Same extension with a different section.
    pub fn resectioned(&self, section: Section) -> Result<Self> {
        Self::with_section(self.alpha.clone(), self.beta.clone(), section)
    }

    pub fn a(&self) -> &Arc<FiniteGammaGroup> {
        self.alpha.source()
    }

    pub fn b(&self) -> &Arc<FiniteGammaGroup> {
        self.alpha.target()
    }

    pub fn c(&self) -> &Arc<FiniteGammaGroup> {
        self.beta.target()
    }

    pub fn alpha(&self) -> &GammaHom {
        &self.alpha
    }

    pub fn beta(&self) -> &GammaHom {
        &self.beta
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    /// The unique `a` with `α(a) = b`, if `b ∈ image(α)`.
    pub fn alpha_preimage(&self, b: usize) -> Option<usize> {
        self.alpha_inverse[b]
    }
}
