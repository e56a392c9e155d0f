//! Independent brute-force oracle for semi-equivariant Čech cohomology.
//!
//! Nothing here goes through the library's simplicial levels, coboundary or
//! linear algebra: admissible points are found by scanning every
//! `(a₀,…,a_p; γ₁,…,γ_p; x)`, cochains are plain value vectors, and the
//! coboundary is evaluated term by term from the face maps
//!
//! * `d₀` drops `γ₁` and is twisted by `θ_{γ₁}`,
//! * `d_i` (`0 < i < p+1`) merges `γ_i γ_{i+1}`,
//! * `d_{p+1}` drops `γ_{p+1}` and moves `x` to `γ_{p+1} x`,
//!
//! with `x_i = γ_{i+1}⋯γ_p·x ∈ U_{a_i}` deciding admissibility. Cochains are
//! locally constant: equal on adjacent points of one cell at the same `γ`s.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use seccoh::groups::{FiniteGammaGroup, FiniteGroup};
use seccoh::space::{Cover, GammaSpace};

pub type Key = (Vec<usize>, Vec<usize>, usize);

pub struct BruteLevel {
    pub keys: Vec<Key>,
    pub index: HashMap<Key, usize>,
    /// Component label of every slot.
    pub component: Vec<usize>,
    pub components: usize,
}

pub struct BruteComplex<'a> {
    pub space: &'a GammaSpace,
    pub cover: &'a Cover,
    pub gamma: &'a FiniteGroup,
    pub coeff: &'a FiniteGammaGroup,
    pub levels: Vec<BruteLevel>,
}

fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// `x_i = γ_{i+1}⋯γ_p·x` for `i = 0..=p`.
pub fn point_sequence(space: &GammaSpace, gammas: &[usize], x: usize) -> Vec<usize> {
    let p = gammas.len();
    let mut seq = vec![x; p + 1];
    for i in (0..p).rev() {
        seq[i] = space.act(gammas[i], seq[i + 1]);
    }
    seq
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl<'a> BruteComplex<'a> {
    pub fn new(space: &'a GammaSpace, cover: &'a Cover, coeff: &'a FiniteGammaGroup, max_degree: usize) -> Self {
        let gamma = space.gamma().as_ref();
        let mut levels = Vec::new();
        for p in 0..=max_degree {
            let mut keys = Vec::new();
            for idx in tuples(cover.len(), p + 1) {
                for gammas in tuples(gamma.order(), p) {
                    for x in 0..space.len() {
                        let seq = point_sequence(space, &gammas, x);
                        if seq.iter().zip(&idx).all(|(&y, &a)| cover.contains(a, y)) {
                            keys.push((idx.clone(), gammas.clone(), x));
                        }
                    }
                }
            }
            let index: HashMap<Key, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
            let mut parent: Vec<usize> = (0..keys.len()).collect();
            for (i, (idx, gammas, x)) in keys.iter().enumerate() {
                for y in 0..space.len() {
                    if space.adjacent(*x, y) {
                        if let Some(&j) = index.get(&(idx.clone(), gammas.clone(), y)) {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            parent[ri] = rj;
                        }
                    }
                }
            }
            let mut label = HashMap::new();
            let component: Vec<usize> = (0..keys.len())
                .map(|i| {
                    let r = find(&mut parent, i);
                    let n = label.len();
                    *label.entry(r).or_insert(n)
                })
                .collect();
            levels.push(BruteLevel {
                keys,
                index,
                components: label.len(),
                component,
            });
        }
        BruteComplex {
            space,
            cover,
            gamma,
            coeff,
            levels,
        }
    }

    /// Cochain from one value per component.
    pub fn expand(&self, p: usize, values: &[usize]) -> Vec<usize> {
        self.levels[p].component.iter().map(|&c| values[c]).collect()
    }

    /// `(δφ)` at every degree-`p+1` slot, `Σ_i (−1)^i θ_i(φ(d_i a, d_i x))`,
    /// for abelian coefficients.
    pub fn coboundary(&self, p: usize, phi: &[usize]) -> Vec<usize> {
        let g = self.coeff.group();
        let level = &self.levels[p];
        self.levels[p + 1]
            .keys
            .iter()
            .map(|(idx, gammas, x)| {
                let mut acc = g.identity();
                for i in 0..=p + 1 {
                    let mut fidx = idx.clone();
                    fidx.remove(i);
                    let (fg, fx) = if i == 0 {
                        (gammas[1..].to_vec(), *x)
                    } else if i == p + 1 {
                        (gammas[..p].to_vec(), self.space.act(gammas[p], *x))
                    } else {
                        let mut fg = gammas[..i - 1].to_vec();
                        fg.push(self.gamma.mul(gammas[i - 1], gammas[i]));
                        fg.extend_from_slice(&gammas[i + 1..]);
                        (fg, *x)
                    };
                    let s = level.index[&(fidx, fg, fx)];
                    let mut v = phi[s];
                    if i == 0 {
                        v = self.coeff.act(gammas[0], v);
                    }
                    if i % 2 == 1 {
                        v = g.inv(v);
                    }
                    acc = g.mul(acc, v);
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self, v: &[usize]) -> bool {
        v.iter().all(|&x| x == self.coeff.group().identity())
    }

    /// `(|Z^p|, |B^p|)` by exhaustive enumeration of locally constant
    /// cochains of degrees `p` and `p − 1`.
    pub fn orders(&self, p: usize) -> (u128, u128) {
        let n = self.coeff.group().order();
        let cocycles = tuples(n, self.levels[p].components)
            .into_iter()
            .filter(|t| self.is_zero(&self.coboundary(p, &self.expand(p, t))))
            .count() as u128;
        let boundaries = if p == 0 {
            1
        } else {
            tuples(n, self.levels[p - 1].components)
                .into_iter()
                .map(|t| self.coboundary(p - 1, &self.expand(p - 1, &t)))
                .collect::<BTreeSet<_>>()
                .len() as u128
        };
        (cocycles, boundaries)
    }

    /// Number of enumerated cochains needed by [`orders`].
    pub fn cost(&self, p: usize) -> u128 {
        let n = self.coeff.group().order() as u128;
        let below = if p == 0 { 0 } else { self.levels[p - 1].components as u32 };
        let pow = |k: u32| n.checked_pow(k).unwrap_or(u128::MAX);
        pow(self.levels[p].components as u32).saturating_add(pow(below))
    }
}
