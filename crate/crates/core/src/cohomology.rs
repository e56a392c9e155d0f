//! Exact computation of `H^p_Γ(𝒰, X; A)` for abelian Γ-groups `A`.
//!
//! Cochains are linearized over `ℤ/e`, `e = exp(A)`, through the invariant
//! factor decomposition `A ≅ ⊕ ℤ/n_k`. A cochain coordinate attached to the
//! factor `ℤ/n` is represented by any lift in `ℤ/e`; the lattice `n·ℤ/e` of
//! lifts of zero is added to the coboundaries, so that
//! `H^p = ker(δ^p) / (im(δ^{p−1}) + lifts of zero)` is computed entirely with
//! Smith normal forms over `ℤ/e`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::cochain::{Cochain, CochainComplex};
use crate::error::{invalid, Error, Result};
use crate::extension::{CentralExtension, GammaHom};
use crate::groups::{abelian_presentation, AbelianPresentation};
use crate::linalg::{lift_row_moduli, smith_normal_form, solve_with, ModMatrix, Snf};
use crate::space::{Refinement, SimplicialCover};

/// Default cap on the number of cohomology classes enumerated by the
/// exactness checks.
pub const DEFAULT_CLASS_BUDGET: u128 = 1 << 20;

/// A cochain complex with abelian coefficients and their linearization.
#[derive(Debug, Clone)]
pub struct AbelianComplex {
    complex: CochainComplex,
    pres: AbelianPresentation,
    modulus: u64,
}

impl AbelianComplex {
    pub fn new(complex: CochainComplex) -> Result<Self> {
        let pres = abelian_presentation(complex.coeff().group())?;
        let modulus = pres.exponent();
        Ok(Self { complex, pres, modulus })
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn presentation(&self) -> &AbelianPresentation {
        &self.pres
    }

    /// The working modulus `e = exp(A)`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of linear coordinates of `K^p` (components × factors).
    pub fn dimension(&self, p: usize) -> Result<usize> {
        Ok(self.complex.components(p)? * self.pres.rank())
    }

    /// Coordinate moduli of `K^p`, component-major.
    pub fn moduli(&self, p: usize) -> Result<Vec<u64>> {
        let n = self.complex.components(p)?;
        Ok((0..n).flat_map(|_| self.pres.factors().iter().copied()).collect())
    }

    /// Linear coordinates of a cochain.
    pub fn coords(&self, phi: &Cochain) -> Vec<u64> {
        let level = self.complex.cover().level(phi.degree()).expect("cochain degree is within bounds");
        level
            .component_reps()
            .iter()
            .flat_map(|&s| self.pres.encode(phi.get(s)).iter().copied())
            .collect()
    }

    /// Cochain with the given coordinates (reduced modulo the factors).
    pub fn cochain(&self, p: usize, coords: &[u64]) -> Result<Cochain> {
        let r = self.pres.rank();
        let n = self.complex.components(p)?;
        if coords.len() != n * r {
            return invalid("coordinate vector has the wrong length");
        }
        let values = if r == 0 {
            vec![self.complex.coeff().group().identity(); n]
        } else {
            coords.chunks(r).map(|c| self.pres.decode(c)).collect()
        };
        self.complex.expand(p, &values)
    }

    fn automorphism_matrix(&self, gamma: usize) -> Vec<Vec<u64>> {
        let coeff = self.complex.coeff();
        self.pres.hom_matrix(&self.pres, |g| coeff.act(gamma, g))
    }

    /// Matrix of `δ^p : K^p → K^{p+1}` over ℤ/e.
    pub fn coboundary_matrix(&self, p: usize) -> Result<ModMatrix> {
        let e = self.modulus;
        let r = self.pres.rank();
        let cover = self.complex.cover();
        let target = cover.level(p + 1)?;
        let source = cover.level(p)?;
        let rows = target.component_count() * r;
        let cols = self.dimension(p)?;
        let mut m = ModMatrix::zeros(rows, cols, e.max(1));
        if r == 0 {
            return Ok(m);
        }
        let autos: Vec<Vec<Vec<u64>>> = cover.gamma().elements().map(|c| self.automorphism_matrix(c)).collect();
        for (row, &t) in target.component_reps().iter().enumerate() {
            let t_slot = t;
            let t = row;
            for i in 0..=(p + 1) {
                let s = source.component(target.face(i, t_slot));
                let sign = if i % 2 == 0 { 1 } else { e - 1 };
                if i == 0 {
                    let auto = &autos[target.first_gamma(t_slot)];
                    for (j, col) in auto.iter().enumerate() {
                        for (k, &v) in col.iter().enumerate() {
                            m.add_to(t * r + k, s * r + j, v * sign % e);
                        }
                    }
                } else {
                    for k in 0..r {
                        m.add_to(t * r + k, s * r + k, sign);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Whether `φ` is a cocycle.
    pub fn is_cocycle(&self, phi: &Cochain) -> Result<bool> {
        Ok(self.complex.is_identity(&self.complex.coboundary(phi)?))
    }

    /// `H^p` with invariant factors, representative generators and a class map.
    pub fn cohomology(&self, p: usize) -> Result<CohomologyGroup> {
        CohomologyGroup::compute(self, p)
    }

    /// `H^0, …, H^pmax`.
    pub fn cohomology_up_to(&self, pmax: usize) -> Result<Vec<CohomologyGroup>> {
        (0..=pmax).map(|p| self.cohomology(p)).collect()
    }
}

/// Orders of cochains, cocycles, coboundaries and cohomology in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCensus {
    pub degree: usize,
    pub cochains: String,
    pub cocycles: String,
    pub coboundaries: String,
    pub cohomology: String,
    pub invariant_factors: Vec<u64>,
}

/// Per-degree orders `|K^p|, |Z^p|, |B^p|, |H^p|` for `p ≤ pmax`, using
/// `|B^{p+1}| = |K^p| / |Z^p|` and `|Z^p| = |H^p|·|B^p|`.
///
/// Orders are reported as decimal strings since `|K^p|` overflows fixed-size
/// integers quickly.
pub fn census(complex: &AbelianComplex, pmax: usize) -> Result<Vec<DegreeCensus>> {
    let mut out = Vec::new();
    let mut boundaries = BigUint::one();
    for p in 0..=pmax {
        let h = complex.cohomology(p)?;
        let k: BigUint = complex.moduli(p)?.into_iter().map(BigUint::from).product();
        let z: BigUint = &boundaries * h.factors().iter().map(|&f| BigUint::from(f)).product::<BigUint>();
        out.push(DegreeCensus {
            degree: p,
            cochains: k.to_string(),
            cocycles: z.to_string(),
            coboundaries: boundaries.to_string(),
            cohomology: h.order().to_string(),
            invariant_factors: h.factors().to_vec(),
        });
        boundaries = k / z;
    }
    Ok(out)
}

/// Orders of `Z^p` and `B^p` found by enumerating every locally constant
/// cochain of degrees `p` and `p − 1` and applying the group-valued
/// coboundary directly, without any linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumeratedOrders {
    pub degree: usize,
    pub cocycles: u128,
    pub coboundaries: u128,
}

impl EnumeratedOrders {
    pub fn cohomology(&self) -> u128 {
        self.cocycles / self.coboundaries
    }
}

pub fn enumerate_orders(complex: &CochainComplex, p: usize, budget: u128) -> Result<EnumeratedOrders> {
    let order = complex.coeff().group().order();
    let n = complex.components(p)?;
    let below = if p > 0 { complex.components(p - 1)? } else { 0 };
    let needed = crate::nonabelian::search_space(order, n).saturating_add(crate::nonabelian::search_space(order, below));
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut err = None;
    let mut cocycles: u128 = 0;
    crate::space::for_each_tuple(order, n, |t| {
        if err.is_some() {
            return;
        }
        match complex.expand(p, t).and_then(|phi| complex.coboundary(&phi)) {
            Ok(d) if complex.is_identity(&d) => cocycles += 1,
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    });
    let mut image = BTreeSet::new();
    if p == 0 {
        image.insert(complex.identity(0)?);
    } else {
        crate::space::for_each_tuple(order, below, |t| {
            if err.is_some() {
                return;
            }
            match complex.expand(p - 1, t).and_then(|mu| complex.coboundary(&mu)) {
                Ok(d) => {
                    image.insert(d);
                }
                Err(e) => err = Some(e),
            }
        });
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok(EnumeratedOrders {
        degree: p,
        cocycles,
        coboundaries: image.len() as u128,
    })
}

/// Cokernel `(ℤ/e)^k / col(M)` with coordinates `P·x mod moduli`.
struct Cokernel {
    p: ModMatrix,
    p_inv: ModMatrix,
    moduli: Vec<u64>,
}

fn cokernel(k: usize, columns: &[Vec<u64>], e: u64) -> Cokernel {
    if columns.is_empty() || k == 0 {
        return Cokernel {
            p: ModMatrix::identity(k, e),
            p_inv: ModMatrix::identity(k, e),
            moduli: vec![e; k],
        };
    }
    let m = ModMatrix::from_columns(k, columns, e);
    let snf = smith_normal_form(&m);
    Cokernel {
        moduli: snf.cokernel_moduli(k),
        p: snf.p,
        p_inv: snf.p_inv,
    }
}

fn kernel(m: &ModMatrix) -> Vec<Vec<u64>> {
    let e = m.modulus();
    if m.rows() == 0 {
        return (0..m.cols())
            .map(|i| {
                let mut v = vec![0; m.cols()];
                v[i] = 1 % e;
                v
            })
            .collect();
    }
    smith_normal_form(m).kernel_generators(m.rows())
}

/// A computed cohomology group `H^p ≅ ⊕ ℤ/f_i`.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    degree: usize,
    modulus: u64,
    factors: Vec<u64>,
    generators: Vec<Cochain>,
    /// Generators of the cocycle module, as columns.
    cocycles: ModMatrix,
    /// Quotient coordinates of `K^p / (B^p + lifts of zero)`.
    quotient: Snf,
    quotient_moduli: Vec<u64>,
    /// `π(Z)`, rows lifted to congruences modulo `e`, and its normal form.
    projected: Snf,
    projected_rows: usize,
    /// Class coordinates `P₂·c` of cocycle-module coordinates `c`.
    class_p: ModMatrix,
    class_moduli: Vec<u64>,
    keep: Vec<usize>,
    coboundary: ModMatrix,
    target_moduli: Vec<u64>,
    complex: AbelianComplex,
}

impl CohomologyGroup {
    fn compute(ac: &AbelianComplex, p: usize) -> Result<Self> {
        let e = ac.modulus().max(1);
        let n = ac.dimension(p)?;
        let moduli = ac.moduli(p)?;
        let d = ac.coboundary_matrix(p)?;
        let target_moduli = ac.moduli(p + 1)?;

        // Z = ker(diag(e/n_i)·δ^p)
        let lifted = lift_row_moduli(&d, &target_moduli);
        let z_cols = kernel(&lifted);
        let k = z_cols.len();
        let cocycles = ModMatrix::from_columns(n, &z_cols, e);

        // B' = im(δ^{p−1}) + Σ n_j·e_j
        let mut b_cols: Vec<Vec<u64>> = Vec::new();
        if p > 0 {
            let prev = ac.coboundary_matrix(p - 1)?;
            for j in 0..prev.cols() {
                b_cols.push(prev.column(j));
            }
        }
        for (j, &m) in moduli.iter().enumerate() {
            let mut v = vec![0; n];
            v[j] = m % e;
            b_cols.push(v);
        }
        let b = ModMatrix::from_columns(n, &b_cols, e);
        let quotient = if n == 0 {
            smith_normal_form(&ModMatrix::zeros(0, 0, e))
        } else {
            smith_normal_form(&b)
        };
        let quotient_moduli = quotient.cokernel_moduli(n);

        // F = π∘Z : (ℤ/e)^k → ⊕ ℤ/h_i, with the congruences lifted to mod e
        let f = if n == 0 || k == 0 {
            ModMatrix::zeros(n, k, e)
        } else {
            quotient.p.mul(&cocycles)
        };
        let f_lifted = lift_row_moduli(&f, &quotient_moduli);
        let f_kernel = if k == 0 { Vec::new() } else { kernel(&f_lifted) };
        let projected = smith_normal_form(&f_lifted);

        // H ≅ (ℤ/e)^k / ker F
        let ck = cokernel(k, &f_kernel, e);
        let keep: Vec<usize> = (0..k).filter(|&i| ck.moduli[i] > 1).collect();
        let mut generators = Vec::with_capacity(keep.len());
        for &i in &keep {
            let c = ck.p_inv.column(i);
            let x: Vec<u64> = cocycles.mul_vec(&c).iter().zip(&moduli).map(|(v, m)| v % m).collect();
            generators.push(ac.cochain(p, &x)?);
        }
        Ok(Self {
            degree: p,
            modulus: e,
            factors: keep.iter().map(|&i| ck.moduli[i]).collect(),
            generators,
            cocycles,
            quotient,
            quotient_moduli,
            projected,
            projected_rows: n,
            class_p: ck.p,
            class_moduli: ck.moduli,
            keep,
            coboundary: d,
            target_moduli,
            complex: ac.clone(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Invariant factors `f₁ | f₂ | …` (all `> 1`).
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&f| f as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Cocycle representatives of the standard generators.
    pub fn generators(&self) -> &[Cochain] {
        &self.generators
    }

    /// Number of generators of the cocycle module used internally.
    pub fn cocycle_rank(&self) -> usize {
        self.cocycles.cols()
    }

    pub fn abelian_complex(&self) -> &AbelianComplex {
        &self.complex
    }

    fn check_cocycle(&self, x: &[u64]) -> bool {
        let image = if self.coboundary.rows() == 0 {
            Vec::new()
        } else {
            self.coboundary.mul_vec(x)
        };
        image.iter().zip(&self.target_moduli).all(|(v, m)| v % m == 0)
    }

    /// Class of a cocycle, in coordinates `(c_i mod f_i)` w.r.t. the generators.
    pub fn class_of(&self, phi: &Cochain) -> Result<Vec<u64>> {
        if phi.degree() != self.degree {
            return invalid("cochain has the wrong degree");
        }
        let x = self.complex.coords(phi);
        if !self.check_cocycle(&x) {
            return Err(Error::Axiom(format!("degree-{} cochain is not a cocycle", self.degree)));
        }
        if self.keep.is_empty() {
            return Ok(Vec::new());
        }
        let e = self.modulus;
        let px = self.quotient.p.mul_vec(&x);
        let b: Vec<u64> = px
            .iter()
            .zip(&self.quotient_moduli)
            .map(|(&v, &h)| (v % h) * (e / h) % e)
            .collect();
        let c = solve_with(&self.projected, self.projected_rows, self.cocycles.cols(), &b)
            .ok_or_else(|| Error::Axiom("cocycle does not lie in the cocycle module".into()))?;
        let pc = self.class_p.mul_vec(&c);
        Ok(self.keep.iter().map(|&i| pc[i] % self.class_moduli[i]).collect())
    }

    pub fn is_coboundary(&self, phi: &Cochain) -> Result<bool> {
        Ok(self.class_of(phi)?.iter().all(|&c| c == 0))
    }

    /// Representative `Σ c_i·gen_i` of a class.
    pub fn representative(&self, class: &[u64]) -> Result<Cochain> {
        if class.len() != self.factors.len() {
            return invalid("class coordinates have the wrong length");
        }
        let k = self.complex.complex();
        let mut acc = k.identity(self.degree)?;
        let g = k.coeff().group();
        for (gen, &c) in self.generators.iter().zip(class) {
            let values: Vec<usize> = gen.values().iter().map(|&v| g.pow(v, c as usize)).collect();
            acc = k.compose(&acc, &k.from_values(self.degree, values)?)?;
        }
        Ok(acc)
    }

    /// All class coordinate vectors, in lexicographic order.
    pub fn elements(&self, budget: u128) -> Result<Vec<Vec<u64>>> {
        let order = self.order();
        if order > budget {
            return Err(Error::Budget { needed: order, budget });
        }
        let mut out = vec![Vec::with_capacity(self.factors.len())];
        for &f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..f).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        Ok(out)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.factors).map(|((x, y), f)| (x + y) % f).collect()
    }

    fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(x, f)| x * (c % f) % f).collect()
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.factors.len()]
    }

    /// Human-readable `ℤ/f₁ ⊕ …` (or `0`).
    pub fn describe(&self) -> String {
        describe_factors(&self.factors)
    }
}

pub fn describe_factors(factors: &[u64]) -> String {
    if factors.is_empty() {
        "0".to_string()
    } else {
        factors.iter().map(|f| format!("Z/{f}")).collect::<Vec<_>>().join(" + ")
    }
}

/// A homomorphism between computed cohomology groups, given by the images
/// of the source generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyMap {
    pub images: Vec<Vec<u64>>,
}

impl CohomologyMap {
    /// Builds the map from a cochain-level operation taking cocycles to cocycles.
    pub fn from_cochain_map(
        source: &CohomologyGroup,
        target: &CohomologyGroup,
        f: impl Fn(&Cochain) -> Result<Cochain>,
    ) -> Result<Self> {
        let images = source
            .generators()
            .iter()
            .map(|g| target.class_of(&f(g)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { images })
    }

    pub fn apply(&self, target: &CohomologyGroup, class: &[u64]) -> Vec<u64> {
        let mut acc = target.zero();
        for (img, &c) in self.images.iter().zip(class) {
            acc = target.add(&acc, &target.scale(img, c));
        }
        acc
    }
}

/// Map `φ ↦ f∘φ` induced by a coefficient homomorphism, on degree `p`.
pub fn induced_map(
    source: &CohomologyGroup,
    target: &CohomologyGroup,
    map: &GammaHom,
) -> Result<CohomologyMap> {
    let k = source.abelian_complex().complex().clone();
    CohomologyMap::from_cochain_map(source, target, |phi| k.map_coefficients(map, phi))
}

/// Cochain-level connecting map of an abelian extension: `c ↦ α⁻¹(δ(s∘c))`.
pub fn connecting_cochain(ext: &CentralExtension, cover: &Arc<SimplicialCover>, c: &Cochain) -> Result<Cochain> {
    if !ext.b().group().is_abelian() {
        return Err(Error::NonAbelian("abelian connecting map needs an abelian middle group".into()));
    }
    let kb = CochainComplex::new(cover.clone(), ext.b().clone())?;
    let ka = CochainComplex::new(cover.clone(), ext.a().clone())?;
    let lifted = kb.from_values(c.degree(), c.values().iter().map(|&v| ext.section().apply(v)).collect())?;
    let db = kb.coboundary(&lifted)?;
    let values = db
        .values()
        .iter()
        .map(|&v| {
            ext.alpha_preimage(v)
                .ok_or_else(|| Error::Axiom("δ(s∘c) leaves the image of α; input is not a cocycle".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    ka.from_values(c.degree() + 1, values)
}

/// `Δ: H^p(C) → H^{p+1}(A)`.
pub fn connecting_abelian(
    ext: &CentralExtension,
    cover: &Arc<SimplicialCover>,
    source: &CohomologyGroup,
    target: &CohomologyGroup,
) -> Result<CohomologyMap> {
    CohomologyMap::from_cochain_map(source, target, |c| connecting_cochain(ext, cover, c))
}

/// One position of an exactness check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessCheck {
    pub position: String,
    pub image_order: u128,
    pub kernel_order: u128,
    pub exact: bool,
}

/// The long exact sequence `… → H^p(A) → H^p(B) → H^p(C) → H^{p+1}(A) → …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LesReport {
    /// `(name, invariant factors)` of each term, in sequence order.
    pub terms: Vec<(String, Vec<u64>)>,
    pub checks: Vec<ExactnessCheck>,
}

impl LesReport {
    pub fn exact(&self) -> bool {
        self.checks.iter().all(|c| c.exact)
    }
}

/// `im(f) = ker(g)` inside the middle group, by enumeration of classes.
fn exact_at(
    position: String,
    src: Option<(&CohomologyGroup, &CohomologyMap)>,
    mid: &CohomologyGroup,
    out: Option<(&CohomologyGroup, &CohomologyMap)>,
    budget: u128,
) -> Result<ExactnessCheck> {
    let image: BTreeSet<Vec<u64>> = match src {
        Some((s, f)) => s.elements(budget)?.iter().map(|c| f.apply(mid, c)).collect(),
        None => std::iter::once(mid.zero()).collect(),
    };
    let kernel: BTreeSet<Vec<u64>> = match out {
        Some((t, g)) => mid
            .elements(budget)?
            .into_iter()
            .filter(|c| g.apply(t, c).iter().all(|&v| v == 0))
            .collect(),
        None => mid.elements(budget)?.into_iter().collect(),
    };
    Ok(ExactnessCheck {
        position,
        image_order: image.len() as u128,
        kernel_order: kernel.len() as u128,
        exact: image == kernel,
    })
}

/// Checks exactness of the cohomology sequence of an abelian extension at
/// every term from `H^0(A)` through `H^pmax(C)`.
///
/// The cover needs levels up to `pmax + 2`.
pub fn les_exactness_check(
    ext: &CentralExtension,
    cover: &Arc<SimplicialCover>,
    pmax: usize,
    budget: u128,
) -> Result<LesReport> {
    let complex = |g| -> Result<AbelianComplex> { AbelianComplex::new(CochainComplex::new(cover.clone(), g)?) };
    let (ka, kb, kc) = (complex(ext.a().clone())?, complex(ext.b().clone())?, complex(ext.c().clone())?);
    let ha = ka.cohomology_up_to(pmax + 1)?;
    let hb = kb.cohomology_up_to(pmax)?;
    let hc = kc.cohomology_up_to(pmax)?;
    let mut terms = Vec::new();
    let mut checks = Vec::new();
    let mut prev_delta: Option<CohomologyMap> = None;
    for p in 0..=pmax {
        let alpha = induced_map(&ha[p], &hb[p], ext.alpha())?;
        let beta = induced_map(&hb[p], &hc[p], ext.beta())?;
        let delta = connecting_abelian(ext, cover, &hc[p], &ha[p + 1])?;
        terms.push((format!("H^{p}(A)"), ha[p].factors().to_vec()));
        terms.push((format!("H^{p}(B)"), hb[p].factors().to_vec()));
        terms.push((format!("H^{p}(C)"), hc[p].factors().to_vec()));
        let src = if p == 0 {
            None
        } else {
            Some((&hc[p - 1], prev_delta.as_ref().unwrap()))
        };
        checks.push(exact_at(format!("H^{p}(A)"), src, &ha[p], Some((&hb[p], &alpha)), budget)?);
        checks.push(exact_at(format!("H^{p}(B)"), Some((&ha[p], &alpha)), &hb[p], Some((&hc[p], &beta)), budget)?);
        checks.push(exact_at(format!("H^{p}(C)"), Some((&hb[p], &beta)), &hc[p], Some((&ha[p + 1], &delta)), budget)?);
        prev_delta = Some(delta);
    }
    Ok(LesReport { terms, checks })
}

/// Results of comparing two refining maps `r, s: 𝒱 → 𝒰`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinementReport {
    pub degree: usize,
    /// Random cochains on which `s_*φ − r_*φ = h(δφ) + δ(hφ)` was tested.
    pub homotopy_samples: usize,
    pub homotopy_failures: usize,
    /// `r_*` and `s_*` agree on every generator of `H^p(𝒰)`.
    pub induced_maps_agree: bool,
    pub induced_map: CohomologyMap,
    pub coarse_factors: Vec<u64>,
    pub fine_factors: Vec<u64>,
}

impl RefinementReport {
    pub fn passed(&self) -> bool {
        self.homotopy_failures == 0 && self.induced_maps_agree
    }
}

/// Verifies the chain homotopy between the restrictions along `r` and `s`
/// on random cochains, and that both induce the same map on `H^p`.
pub fn refinement_action_check(
    coarse: &AbelianComplex,
    fine: &AbelianComplex,
    r: &Refinement,
    s: &Refinement,
    p: usize,
    samples: usize,
    seed: u64,
) -> Result<RefinementReport> {
    let kc = coarse.complex();
    let kf = fine.complex();
    let mut failures = 0;
    for t in 0..samples {
        let phi = kc.random(p, seed.wrapping_add(t as u64))?;
        let diff = kf.compose(&kc.restrict(&phi, s, kf)?, &kf.invert(&kc.restrict(&phi, r, kf)?))?;
        let mut rhs = kc.homotopy(&kc.coboundary(&phi)?, r, s, kf)?;
        if p > 0 {
            rhs = kf.compose(&rhs, &kf.coboundary(&kc.homotopy(&phi, r, s, kf)?)?)?;
        }
        if diff != rhs {
            failures += 1;
        }
    }
    let hc = coarse.cohomology(p)?;
    let hf = fine.cohomology(p)?;
    let via_r = CohomologyMap::from_cochain_map(&hc, &hf, |phi| kc.restrict(phi, r, kf))?;
    let via_s = CohomologyMap::from_cochain_map(&hc, &hf, |phi| kc.restrict(phi, s, kf))?;
    Ok(RefinementReport {
        degree: p,
        homotopy_samples: samples,
        homotopy_failures: failures,
        induced_maps_agree: via_r == via_s,
        induced_map: via_r,
        coarse_factors: hc.factors().to_vec(),
        fine_factors: hf.factors().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteGammaGroup, FiniteGroup, GammaAction};
    use crate::space::{Cover, GammaSpace};

    fn point(gamma_order: usize, n: usize, negate: bool, max_degree: usize) -> AbelianComplex {
        let gamma = Arc::new(FiniteGroup::cyclic(gamma_order).unwrap());
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let coeff = if negate {
            FiniteGammaGroup::new(
                GammaAction::from_cyclic_generator(gamma.clone(), g, (0..n).map(|x| (n - x) % n).collect()).unwrap(),
            )
            .unwrap()
        } else {
            FiniteGammaGroup::trivial(gamma.clone(), g)
        };
        let sc = SimplicialCover::new(Arc::new(GammaSpace::point(gamma)), Arc::new(Cover::whole(1)), max_degree).unwrap();
        AbelianComplex::new(CochainComplex::new(Arc::new(sc), Arc::new(coeff)).unwrap()).unwrap()
    }

    #[test]
    fn group_cohomology_of_z2() {
        let trivial = point(2, 2, false, 4);
        for p in 0..=3 {
            assert_eq!(trivial.cohomology(p).unwrap().factors(), &[2], "H^{p}(Z/2; Z/2)");
        }
        let neg4 = point(2, 4, true, 4);
        for p in 0..=3 {
            assert_eq!(neg4.cohomology(p).unwrap().factors(), &[2], "H^{p}(Z/2; Z/4⁻)");
        }
        let neg3 = point(2, 3, true, 4);
        for p in 0..=3 {
            assert!(neg3.cohomology(p).unwrap().is_trivial(), "H^{p}(Z/2; Z/3⁻)");
        }
        let triv4 = point(2, 4, false, 4);
        let expect: [&[u64]; 4] = [&[4], &[2], &[2], &[2]];
        for p in 0..=3 {
            assert_eq!(triv4.cohomology(p).unwrap().factors(), expect[p], "H^{p}(Z/2; Z/4)");
        }
    }

    #[test]
    fn generators_are_cocycles_with_unit_classes() {
        let k = point(2, 4, false, 4);
        for p in 0..=2 {
            let h = k.cohomology(p).unwrap();
            for (i, g) in h.generators().iter().enumerate() {
                assert!(k.is_cocycle(g).unwrap());
                let mut unit = vec![0; h.factors().len()];
                unit[i] = 1;
                assert_eq!(h.class_of(g).unwrap(), unit);
            }
            for c in h.elements(1000).unwrap() {
                assert_eq!(h.class_of(&h.representative(&c).unwrap()).unwrap(), c);
            }
        }
    }

    #[test]
    fn class_of_rejects_non_cocycles() {
        let k = point(2, 4, true, 3);
        let h = k.cohomology(1).unwrap();
        let phi = k.complex().from_values(1, vec![1, 1]).unwrap();
        assert!(!k.is_cocycle(&phi).unwrap());
        assert!(h.class_of(&phi).is_err());
    }

    #[test]
    fn coboundaries_have_zero_class() {
        let k = point(3, 3, false, 4);
        let h = k.cohomology(2).unwrap();
        assert_eq!(h.factors(), &[3]);
        for seed in 0..10 {
            let mu = k.complex().random(1, seed).unwrap();
            let d = k.complex().coboundary(&mu).unwrap();
            assert!(h.is_coboundary(&d).unwrap());
        }
    }

    #[test]
    fn census_of_point() {
        let k = point(2, 2, false, 4);
        let c = census(&k, 2).unwrap();
        assert_eq!(c[0].cochains, "2");
        assert_eq!(c[1].cochains, "4");
        assert_eq!(c[1].cocycles, "2");
        assert_eq!(c[1].coboundaries, "1");
        assert_eq!(c[2].coboundaries, "2");
        assert_eq!(c[2].cochains, "16");
    }

    #[test]
    fn triangle_circle_has_the_cohomology_of_a_circle() {
        let gamma = Arc::new(FiniteGroup::trivial());
        let space = GammaSpace::trivial(gamma.clone(), 3).unwrap().with_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        let cover = Cover::new(3, vec!["U0".into(), "U1".into(), "U2".into()], vec![vec![0, 2], vec![0, 1], vec![1, 2]]).unwrap();
        let sc = Arc::new(SimplicialCover::new(Arc::new(space), Arc::new(cover), 3).unwrap());
        let coeff = Arc::new(FiniteGammaGroup::trivial(gamma, Arc::new(FiniteGroup::cyclic(2).unwrap())));
        let a = AbelianComplex::new(CochainComplex::new(sc, coeff).unwrap()).unwrap();
        assert_eq!(a.cohomology(0).unwrap().factors(), &[2]);
        assert_eq!(a.cohomology(1).unwrap().factors(), &[2]);
        assert!(a.cohomology(2).unwrap().is_trivial());
        let census = census(&a, 1).unwrap();
        assert_eq!(census[0].cochains, "8");
    }

    #[test]
    fn refinements_of_the_circle_induce_one_map() {
        use crate::space::Refinement;
        let gamma = Arc::new(FiniteGroup::trivial());
        let space = Arc::new(GammaSpace::trivial(gamma.clone(), 3).unwrap().with_edges(&[(0, 1), (1, 2), (0, 2)]).unwrap());
        let coarse_cover = Cover::new(3, vec!["U0".into(), "U1".into(), "U2".into()], vec![vec![0, 2], vec![0, 1], vec![1, 2]]).unwrap();
        let names = ["V0", "V1", "V2", "V3", "V4", "V5"].iter().map(|s| s.to_string()).collect();
        let fine_cover = Arc::new(
            Cover::new(3, names, vec![vec![0], vec![1], vec![2], vec![0, 2], vec![0, 1], vec![1, 2]]).unwrap(),
        );
        let r = Refinement::new(&coarse_cover, fine_cover.clone(), vec![0, 1, 2, 0, 1, 2]).unwrap();
        let s = Refinement::new(&coarse_cover, fine_cover.clone(), vec![1, 2, 0, 0, 1, 2]).unwrap();
        let coeff = Arc::new(FiniteGammaGroup::trivial(gamma, Arc::new(FiniteGroup::cyclic(4).unwrap())));
        let coarse = SimplicialCover::new(space.clone(), Arc::new(coarse_cover), 3).unwrap();
        let fine = SimplicialCover::new(space, fine_cover, 3).unwrap();
        let kc = AbelianComplex::new(CochainComplex::new(Arc::new(coarse), coeff.clone()).unwrap()).unwrap();
        let kf = AbelianComplex::new(CochainComplex::new(Arc::new(fine), coeff).unwrap()).unwrap();
        for p in 0..=2 {
            let report = refinement_action_check(&kc, &kf, &r, &s, p, 8, 11).unwrap();
            assert!(report.passed(), "{report:?}");
        }
        let h1 = refinement_action_check(&kc, &kf, &r, &s, 1, 1, 0).unwrap();
        assert_eq!(h1.coarse_factors, vec![4]);
        assert_eq!(h1.fine_factors, vec![4]);
    }

    #[test]
    fn refinement_homotopy_with_twisted_coefficients() {
        use crate::space::Refinement;
        let gamma = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let space = Arc::new(GammaSpace::from_cyclic_generator(gamma.clone(), vec![1, 0, 2]).unwrap());
        let coarse_cover = Cover::new(3, vec!["U".into(), "V".into()], vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        let fine_cover = Arc::new(
            Cover::new(3, vec!["A".into(), "B".into(), "C".into()], vec![vec![0, 1], vec![2], vec![0, 1, 2]]).unwrap(),
        );
        let r = Refinement::new(&coarse_cover, fine_cover.clone(), vec![0, 0, 1]).unwrap();
        let s = Refinement::new(&coarse_cover, fine_cover.clone(), vec![1, 0, 0]).unwrap();
        let theta = GammaAction::from_cyclic_generator(gamma, Arc::new(FiniteGroup::cyclic(4).unwrap()), vec![0, 3, 2, 1]).unwrap();
        let coeff = Arc::new(FiniteGammaGroup::new(theta).unwrap());
        let coarse = SimplicialCover::new(space.clone(), Arc::new(coarse_cover), 3).unwrap();
        let fine = SimplicialCover::new(space, fine_cover, 3).unwrap();
        let kc = AbelianComplex::new(CochainComplex::new(Arc::new(coarse), coeff.clone()).unwrap()).unwrap();
        let kf = AbelianComplex::new(CochainComplex::new(Arc::new(fine), coeff).unwrap()).unwrap();
        for p in 0..=2 {
            let report = refinement_action_check(&kc, &kf, &r, &s, p, 8, 5).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }
}
