//! Cochain groups `K^p`, twisted pullbacks `δ_i`, the coboundary, refinement
//! restriction, coefficient change and the refinement cochain homotopy.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::extension::GammaHom;
use crate::groups::FiniteGammaGroup;
use crate::space::{degeneracy_point, MultiIndex, Refinement, SimplicialCover};

/// A degree-`p` cochain: one G-element per admissible slot `(a^p, x^p)`,
/// in the slot order of the level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    degree: usize,
    values: Vec<usize>,
}

impl Cochain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn get(&self, slot: usize) -> usize {
        self.values[slot]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The cochain complex `K^•_Γ(𝒰, X, (G, θ))`.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    cover: Arc<SimplicialCover>,
    coeff: Arc<FiniteGammaGroup>,
}

impl CochainComplex {
    pub fn new(cover: Arc<SimplicialCover>, coeff: Arc<FiniteGammaGroup>) -> Result<Self> {
        if cover.gamma() != coeff.gamma() {
            return invalid("coefficient group and space are acted on by different groups Γ");
        }
        Ok(Self { cover, coeff })
    }

    pub fn cover(&self) -> &Arc<SimplicialCover> {
        &self.cover
    }

    pub fn coeff(&self) -> &Arc<FiniteGammaGroup> {
        &self.coeff
    }

    /// Same cover, different coefficients.
    pub fn with_coeff(&self, coeff: Arc<FiniteGammaGroup>) -> Result<Self> {
        Self::new(self.cover.clone(), coeff)
    }

    pub fn max_degree(&self) -> usize {
        self.cover.max_degree()
    }

    /// Number of slots in degree `p`.
    pub fn slots(&self, p: usize) -> Result<usize> {
        Ok(self.cover.level(p)?.len())
    }

    /// Number of connected components in degree `p` (coordinates of a
    /// locally constant cochain).
    pub fn components(&self, p: usize) -> Result<usize> {
        Ok(self.cover.level(p)?.component_count())
    }

    /// Validates values (one per slot) and local constancy.
    pub fn from_values(&self, degree: usize, values: Vec<usize>) -> Result<Cochain> {
        let level = self.cover.level(degree)?;
        let n = level.len();
        if values.len() != n {
            return invalid(format!("degree-{degree} cochain needs {n} values, got {}", values.len()));
        }
        let order = self.coeff.group().order();
        if let Some(&v) = values.iter().find(|&&v| v >= order) {
            return invalid(format!("cochain value {v} is not an element of the coefficient group"));
        }
        if let Some(s) = (0..n).find(|&s| values[s] != values[level.component_reps()[level.component(s)]]) {
            return Err(Error::Axiom(format!(
                "degree-{degree} cochain is not locally constant on the cell {:?}",
                level.slot(s).index.0
            )));
        }
        Ok(Cochain { degree, values })
    }

    /// Locally constant cochain from one value per component.
    pub fn expand(&self, degree: usize, component_values: &[usize]) -> Result<Cochain> {
        let level = self.cover.level(degree)?;
        if component_values.len() != level.component_count() {
            return invalid(format!(
                "degree-{degree} cochain needs {} component values, got {}",
                level.component_count(),
                component_values.len()
            ));
        }
        let order = self.coeff.group().order();
        if component_values.iter().any(|&v| v >= order) {
            return invalid("cochain value is not an element of the coefficient group");
        }
        Ok(Cochain {
            degree,
            values: (0..level.len()).map(|s| component_values[level.component(s)]).collect(),
        })
    }

    /// Values at the component representatives.
    pub fn component_values(&self, phi: &Cochain) -> Result<Vec<usize>> {
        self.check_degree(phi)?;
        let level = self.cover.level(phi.degree)?;
        Ok(level.component_reps().iter().map(|&s| phi.values[s]).collect())
    }

    /// The constant-identity cochain (the basepoint).
    pub fn identity(&self, degree: usize) -> Result<Cochain> {
        let n = self.slots(degree)?;
        Ok(Cochain {
            degree,
            values: vec![self.coeff.group().identity(); n],
        })
    }

    /// Cochain constant equal to `g` on every slot.
    pub fn constant(&self, degree: usize, g: usize) -> Result<Cochain> {
        self.from_values(degree, vec![g; self.slots(degree)?])
    }

    /// Pseudo-random locally constant cochain: one value per component drawn
    /// uniformly from G by a ChaCha8 generator seeded with `seed`.
    pub fn random(&self, degree: usize, seed: u64) -> Result<Cochain> {
        let n = self.components(degree)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = self.coeff.group().order();
        let values: Vec<usize> = (0..n).map(|_| rng.gen_range(0..order)).collect();
        self.expand(degree, &values)
    }

    fn check_degree(&self, phi: &Cochain) -> Result<()> {
        let n = self.slots(phi.degree)?;
        if n != phi.values.len() {
            return invalid("cochain does not belong to this complex");
        }
        Ok(())
    }

    /// `(δ_i φ)_{a^{p+1}}(x^{p+1}) = θ_i^{x^{p+1}}(φ_{d_i a^{p+1}}(d_i x^{p+1}))`.
    pub fn twisted_pullback(&self, i: usize, phi: &Cochain) -> Result<Cochain> {
        self.check_degree(phi)?;
        let p = phi.degree;
        if i > p + 1 {
            return invalid(format!("pullback index {i} out of range for degree {p}"));
        }
        let level = self.cover.level(p + 1)?;
        let values = (0..level.len())
            .map(|s| {
                let v = phi.values[level.face(i, s)];
                if i == 0 {
                    self.coeff.act(level.first_gamma(s), v)
                } else {
                    v
                }
            })
            .collect();
        Ok(Cochain { degree: p + 1, values })
    }

    /// Pointwise product `φ′φ`.
    pub fn compose(&self, lhs: &Cochain, rhs: &Cochain) -> Result<Cochain> {
        if lhs.degree != rhs.degree || lhs.values.len() != rhs.values.len() {
            return invalid("cannot compose cochains of different degree");
        }
        let g = self.coeff.group();
        Ok(Cochain {
            degree: lhs.degree,
            values: lhs.values.iter().zip(&rhs.values).map(|(&a, &b)| g.mul(a, b)).collect(),
        })
    }

    pub fn invert(&self, phi: &Cochain) -> Cochain {
        let g = self.coeff.group();
        Cochain {
            degree: phi.degree,
            values: phi.values.iter().map(|&a| g.inv(a)).collect(),
        }
    }

    /// Left-to-right product of cochains of equal degree.
    pub fn product(&self, factors: &[Cochain]) -> Result<Cochain> {
        let (first, rest) = factors.split_first().ok_or_else(|| Error::Invalid("empty product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, f| self.compose(&acc, f))
    }

    pub fn is_identity(&self, phi: &Cochain) -> bool {
        let e = self.coeff.group().identity();
        phi.values.iter().all(|&v| v == e)
    }

    pub fn is_abelian(&self) -> bool {
        self.coeff.group().is_abelian()
    }

    /// `δφ = Σ_{i=0}^{p+1} (−1)^i δ_iφ` (additive notation).
    pub fn coboundary(&self, phi: &Cochain) -> Result<Cochain> {
        if !self.is_abelian() {
            return Err(Error::NonAbelian(
                "the alternating-sum coboundary is only defined for abelian coefficients; use the face maps directly".into(),
            ));
        }
        let p = phi.degree;
        let mut acc = self.identity(p + 1)?;
        for i in 0..=(p + 1) {
            let term = self.twisted_pullback(i, phi)?;
            let term = if i % 2 == 0 { term } else { self.invert(&term) };
            acc = self.compose(&acc, &term)?;
        }
        Ok(acc)
    }

    /// Pointwise image under a Γ-group homomorphism; the result lives in the
    /// complex with the homomorphism's target coefficients.
    pub fn map_coefficients(&self, map: &GammaHom, phi: &Cochain) -> Result<Cochain> {
        if map.source().as_ref() != self.coeff.as_ref() {
            return invalid("homomorphism source does not match the coefficient group");
        }
        if !map.is_equivariant() {
            return Err(Error::Axiom("coefficient map is not Γ-equivariant".into()));
        }
        self.check_degree(phi)?;
        Ok(Cochain {
            degree: phi.degree,
            values: phi.values.iter().map(|&v| map.apply(v)).collect(),
        })
    }

    /// Restriction `r_*φ` to a refinement; `fine` is the complex over 𝒱 with
    /// the same coefficients.
    pub fn restrict(&self, phi: &Cochain, refinement: &Refinement, fine: &CochainComplex) -> Result<Cochain> {
        self.check_degree(phi)?;
        let p = phi.degree;
        let map = crate::space::induced_refinement(refinement, &fine.cover, &self.cover, p)?;
        Ok(Cochain {
            degree: p,
            values: map.iter().map(|&s| phi.values[s]).collect(),
        })
    }

    /// Cochain homotopy between two refining maps `r, s: B → A`:
    ///
    /// `(hφ)_{(b₀,…,b_{p−1})} = Σ_k (−1)^k φ_{(r(b₀),…,r(b_k),s(b_k),…,s(b_{p−1}))} ∘ e_k`.
    ///
    /// With this sign convention `s_*φ − r_*φ = h(δφ) + δ(hφ)`.
    pub fn homotopy(&self, phi: &Cochain, r: &Refinement, s: &Refinement, fine: &CochainComplex) -> Result<Cochain> {
        if !self.is_abelian() {
            return Err(Error::NonAbelian("the refinement homotopy needs abelian coefficients".into()));
        }
        if r.fine() != s.fine() {
            return invalid("refining maps must share the refined cover");
        }
        self.check_degree(phi)?;
        let p = phi.degree;
        if p == 0 {
            return invalid("the homotopy lowers degree; degree-0 input has no image");
        }
        let g = self.coeff.group();
        let gamma = self.cover.gamma();
        let coarse = self.cover.level(p)?;
        let target = fine.cover.level(p - 1)?;
        let mut values = Vec::with_capacity(target.len());
        for slot in target.slots() {
            let b = &slot.index.0;
            let mut acc = g.identity();
            for k in 0..p {
                let mut idx: Vec<usize> = b[..=k].iter().map(|&x| r.apply(x)).collect();
                idx.extend(b[k..].iter().map(|&x| s.apply(x)));
                let pt = degeneracy_point(gamma, k, &slot.point)?;
                let at = coarse.find(&MultiIndex(idx), &pt).ok_or_else(|| {
                    Error::Axiom(format!("homotopy term k={k} leaves the simplicial cover at {:?}", slot.index.0))
                })?;
                let v = phi.values[at];
                acc = if k % 2 == 0 { g.mul(acc, v) } else { g.mul(acc, g.inv(v)) };
            }
            values.push(acc);
        }
        Ok(Cochain { degree: p - 1, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteGroup, GammaAction};
    use crate::space::{Cover, GammaSpace};

    fn point_complex(n: usize, negate: bool, max_degree: usize) -> CochainComplex {
        let gamma = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let coeff = if negate {
            let theta = GammaAction::from_cyclic_generator(gamma.clone(), g, (0..n).map(|x| (n - x) % n).collect()).unwrap();
            FiniteGammaGroup::new(theta).unwrap()
        } else {
            FiniteGammaGroup::trivial(gamma.clone(), g)
        };
        let sc = SimplicialCover::new(Arc::new(GammaSpace::point(gamma)), Arc::new(Cover::whole(1)), max_degree).unwrap();
        CochainComplex::new(Arc::new(sc), Arc::new(coeff)).unwrap()
    }

    #[test]
    fn pullback_of_identity_is_identity() {
        let k = point_complex(4, true, 3);
        for p in 0..3 {
            let one = k.identity(p).unwrap();
            for i in 0..=(p + 1) {
                assert!(k.is_identity(&k.twisted_pullback(i, &one).unwrap()));
            }
        }
    }

    #[test]
    fn d0_applies_theta() {
        let k = point_complex(4, true, 2);
        let mu = k.from_values(0, vec![1]).unwrap();
        let d0 = k.twisted_pullback(0, &mu).unwrap();
        let level = k.cover().level(1).unwrap();
        let at_g = (0..level.len()).find(|&s| level.slot(s).point.gammas == vec![1]).unwrap();
        let at_1 = (0..level.len()).find(|&s| level.slot(s).point.gammas == vec![0]).unwrap();
        assert_eq!(d0.get(at_g), 3);
        assert_eq!(d0.get(at_1), 1);
    }

    #[test]
    fn coboundary_of_constant_on_point() {
        let k = point_complex(2, false, 2);
        let mu = k.from_values(0, vec![1]).unwrap();
        assert!(k.is_identity(&k.coboundary(&mu).unwrap()));
        assert!(k.is_identity(&k.coboundary(&k.identity(1).unwrap()).unwrap()));
    }

    #[test]
    fn delta_squares_to_zero() {
        let k = point_complex(4, true, 4);
        for p in 0..3 {
            for seed in 0..20 {
                let phi = k.random(p, seed).unwrap();
                let dd = k.coboundary(&k.coboundary(&phi).unwrap()).unwrap();
                assert!(k.is_identity(&dd));
            }
        }
    }

    #[test]
    fn group_operations() {
        let k = point_complex(4, true, 2);
        let a = k.random(1, 1).unwrap();
        let b = k.random(1, 2).unwrap();
        assert!(k.is_identity(&k.compose(&a, &k.invert(&a)).unwrap()));
        assert_eq!(k.compose(&a, &b).unwrap(), k.compose(&b, &a).unwrap());
        for i in 0..3 {
            let lhs = k.twisted_pullback(i, &k.compose(&a, &b).unwrap()).unwrap();
            let rhs = k
                .compose(&k.twisted_pullback(i, &a).unwrap(), &k.twisted_pullback(i, &b).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        assert!(k.compose(&a, &k.random(0, 1).unwrap()).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let k = point_complex(4, false, 3);
        assert_eq!(k.random(2, 7).unwrap(), k.random(2, 7).unwrap());
        assert_ne!(k.random(2, 7).unwrap(), k.random(2, 8).unwrap());
        assert_eq!(k.random(2, 7).unwrap().len(), k.slots(2).unwrap());
    }

    #[test]
    fn coboundary_rejects_nonabelian() {
        let gamma = Arc::new(FiniteGroup::trivial());
        let s3 = FiniteGroup::from_table(
            {
                // S3 as permutations of {0,1,2}, composition table
                let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
                let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
                perms
                    .iter()
                    .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
                    .collect()
            },
            None,
        )
        .unwrap();
        let coeff = FiniteGammaGroup::trivial(gamma.clone(), Arc::new(s3));
        let sc = SimplicialCover::new(Arc::new(GammaSpace::point(gamma)), Arc::new(Cover::whole(1)), 2).unwrap();
        let k = CochainComplex::new(Arc::new(sc), Arc::new(coeff)).unwrap();
        let phi = k.random(0, 0).unwrap();
        assert!(matches!(k.coboundary(&phi), Err(Error::NonAbelian(_))));
    }
}
