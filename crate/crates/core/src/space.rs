//! Finite Γ-sets, covers, the simplicial space `X^p = Γ^p × X` with its face,
//! degeneracy and twisting maps, and the simplicial cover indexed by `A^p`.
//!
//! Point sequence convention: for `x^p = (γ₁,…,γ_p,x)` the `i`-th point is
//! `γ_{i+1}⋯γ_p·x`, so the last entry is `x` itself and the first is
//! `γ₁⋯γ_p·x`. A point `x^p` lies in `U_{(a₀,…,a_p)}` when its `i`-th point
//! lies in `U_{a_i}`. In degree one this reads `x ∈ U_{a₁}`, `γx ∈ U_{a₀}`, so a
//! 1-cochain value at `((b,a),(γ,x))` is the transition value `φ_{ba}(γ,x)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::groups::{FiniteGroup, GammaAction, ValidationReport};

/// A finite set `{0,…,m−1}` with an action σ of Γ by permutations.
///
/// An optional symmetric adjacency relation gives the set a graph topology:
/// a subset's connected components are those of the induced subgraph, and
/// cochains are locally constant, i.e. constant on the components of every
/// `U_{a^p}`. Without edges the space is discrete and cochains are arbitrary
/// functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSpace {
    gamma: Arc<FiniteGroup>,
    perms: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    adjacency: Vec<Vec<usize>>,
}

impl GammaSpace {
    /// Builds the space and checks that σ is a group action.
    pub fn new(gamma: Arc<FiniteGroup>, points: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        let space = Self::new_unchecked(gamma, points, perms)?;
        space.check_action().into_result("invalid Γ-space")?;
        Ok(space)
    }

    /// Shape checks only; the action axioms are not verified.
    pub fn new_unchecked(gamma: Arc<FiniteGroup>, points: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if points == 0 {
            return invalid("the space must have at least one point");
        }
        if perms.len() != gamma.order() {
            return invalid(format!("space action lists {} maps for Γ of order {}", perms.len(), gamma.order()));
        }
        for (k, p) in perms.iter().enumerate() {
            if p.len() != points || p.iter().any(|&v| v >= points) {
                return invalid(format!("space action for γ={k} is not a map of the {points} points"));
            }
        }
        Ok(Self {
            gamma,
            perms,
            labels: None,
            adjacency: vec![Vec::new(); points],
        })
    }

    /// A single point with the trivial action.
    pub fn point(gamma: Arc<FiniteGroup>) -> Self {
        let perms = vec![vec![0]; gamma.order()];
        Self {
            gamma,
            perms,
            labels: None,
            adjacency: vec![Vec::new()],
        }
    }

    pub fn trivial(gamma: Arc<FiniteGroup>, points: usize) -> Result<Self> {
        let id: Vec<usize> = (0..points).collect();
        Self::new(gamma.clone(), points, vec![id; gamma.order()])
    }

    /// Action of a cyclic Γ determined by the permutation of its generator.
    pub fn from_cyclic_generator(gamma: Arc<FiniteGroup>, generator: Vec<usize>) -> Result<Self> {
        let points = generator.len();
        let n = gamma.order();
        if n > 1 && gamma.element_order(1) != n {
            return invalid("Γ is not generated by element 1; list the action for every element");
        }
        let mut perms = vec![Vec::new(); n];
        let mut current: Vec<usize> = (0..points).collect();
        let mut g = gamma.identity();
        for _ in 0..n {
            perms[g] = current.clone();
            current = current.iter().map(|&x| generator.get(x).copied().unwrap_or(usize::MAX)).collect();
            if n > 1 {
                g = gamma.mul(1, g);
            }
        }
        Self::new(gamma, points, perms)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return invalid("point label count does not match the number of points");
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Adds undirected edges; every σ_γ must map edges to edges.
    pub fn with_edges(mut self, edges: &[(usize, usize)]) -> Result<Self> {
        let n = self.len();
        for &(x, y) in edges {
            if x >= n || y >= n {
                return invalid(format!("edge ({x},{y}) refers to a point outside the space"));
            }
            if x != y {
                self.adjacency[x].push(y);
                self.adjacency[y].push(x);
            }
        }
        for nb in &mut self.adjacency {
            nb.sort_unstable();
            nb.dedup();
        }
        for c in self.gamma.elements() {
            for x in 0..n {
                for &y in &self.adjacency[x] {
                    if !self.adjacent(self.act(c, x), self.act(c, y)) {
                        return Err(Error::Axiom(format!(
                            "σ_{} does not preserve adjacency: ({},{}) is an edge but its image is not",
                            self.gamma.label(c),
                            self.label(x),
                            self.label(y)
                        )));
                    }
                }
            }
        }
        Ok(self)
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    /// Edges `(x, y)` with `x < y`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.adjacency[x].iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
            .collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.adjacency.iter().all(Vec::is_empty)
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.perms[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// σ_γ(x)
    #[inline]
    pub fn act(&self, gamma: usize, x: usize) -> usize {
        self.perms[gamma][x]
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn check_action(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let g = &self.gamma;
        for c in g.elements() {
            let mut seen = vec![false; self.len()];
            if !self.perms[c].iter().all(|&v| !std::mem::replace(&mut seen[v], true)) {
                report.push(format!("σ_{} is not a permutation", g.label(c)));
            }
        }
        if (0..self.len()).any(|x| self.act(g.identity(), x) != x) {
            report.push("σ_1 is not the identity");
        }
        'outer: for c1 in g.elements() {
            for c2 in g.elements() {
                if (0..self.len()).any(|x| self.act(g.mul(c1, c2), x) != self.act(c1, self.act(c2, x))) {
                    report.push(format!("σ is not an action: σ_({}·{}) ≠ σ_{}∘σ_{}", g.label(c1), g.label(c2), g.label(c1), g.label(c2)));
                    break 'outer;
                }
            }
        }
        report
    }
}

/// A finite cover `{U_a}` of the space by named nonempty subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    names: Vec<String>,
    sets: Vec<Vec<usize>>,
    contains: Vec<Vec<bool>>,
}

impl Cover {
    pub fn new(points: usize, names: Vec<String>, sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.is_empty() {
            return invalid("cover has no sets");
        }
        if names.len() != sets.len() {
            return invalid("cover names and sets differ in length");
        }
        let mut unique = names.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != names.len() {
            return invalid("cover set names must be unique");
        }
        let mut contains = vec![vec![false; points]; sets.len()];
        let mut sorted = Vec::with_capacity(sets.len());
        for (a, set) in sets.into_iter().enumerate() {
            if set.is_empty() {
                return invalid(format!("cover set {} is empty", names[a]));
            }
            let mut s = set;
            s.sort_unstable();
            s.dedup();
            for &x in &s {
                if x >= points {
                    return invalid(format!("cover set {} contains point {x} outside the space", names[a]));
                }
                contains[a][x] = true;
            }
            sorted.push(s);
        }
        if let Some(x) = (0..points).find(|&x| contains.iter().all(|c| !c[x])) {
            return invalid(format!("cover does not cover the space: point {x} lies in no set"));
        }
        Ok(Self {
            names,
            sets: sorted,
            contains,
        })
    }

    /// The cover by the single set `X`.
    pub fn whole(points: usize) -> Self {
        Self::new(points, vec!["U".into()], vec![(0..points).collect()]).expect("whole space cover")
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set(&self, a: usize) -> &[usize] {
        &self.sets[a]
    }

    #[inline]
    pub fn contains(&self, a: usize, x: usize) -> bool {
        self.contains[a][x]
    }

    pub fn points(&self) -> usize {
        self.contains[0].len()
    }
}

/// A point `(γ₁,…,γ_p, x)` of `X^p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexPoint {
    pub gammas: Vec<usize>,
    pub x: usize,
}

impl SimplexPoint {
    pub fn new(gammas: Vec<usize>, x: usize) -> Self {
        Self { gammas, x }
    }

    pub fn degree(&self) -> usize {
        self.gammas.len()
    }
}

/// A multi-index `(a₀,…,a_p)` of cover labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

/// Face map `d_i: X^p → X^{p−1}`.
pub fn face_point(space: &GammaSpace, i: usize, pt: &SimplexPoint) -> Result<SimplexPoint> {
    let p = pt.degree();
    if p == 0 || i > p {
        return invalid(format!("face index {i} out of range for degree {p}"));
    }
    let g = space.gamma();
    let mut gammas = pt.gammas.clone();
    let mut x = pt.x;
    if i == 0 {
        gammas.remove(0);
    } else if i < p {
        let merged = g.mul(gammas[i - 1], gammas[i]);
        gammas[i - 1] = merged;
        gammas.remove(i);
    } else {
        let last = gammas.pop().expect("p ≥ 1");
        x = space.act(last, x);
    }
    Ok(SimplexPoint { gammas, x })
}

/// Degeneracy map `e_i: X^p → X^{p+1}`, inserting `1` after position `i`.
pub fn degeneracy_point(gamma: &FiniteGroup, i: usize, pt: &SimplexPoint) -> Result<SimplexPoint> {
    let p = pt.degree();
    if i > p {
        return invalid(format!("degeneracy index {i} out of range for degree {p}"));
    }
    let mut gammas = pt.gammas.clone();
    gammas.insert(i, gamma.identity());
    Ok(SimplexPoint { gammas, x: pt.x })
}

/// Γ-element whose automorphism twists the `i`-th pullback at `pt`:
/// `γ₁` for `i = 0`, the identity otherwise.
pub fn twist(gamma: &FiniteGroup, i: usize, pt: &SimplexPoint) -> usize {
    if i == 0 && pt.degree() > 0 {
        pt.gammas[0]
    } else {
        gamma.identity()
    }
}

/// The `i`-th point of the associated sequence, `γ_{i+1}⋯γ_p·x`.
pub fn point_sequence(space: &GammaSpace, pt: &SimplexPoint, i: usize) -> usize {
    pt.gammas[i..].iter().rev().fold(pt.x, |y, &c| space.act(c, y))
}

/// Whether `pt ∈ U_{a^p}`.
pub fn member(space: &GammaSpace, cover: &Cover, pt: &SimplexPoint, index: &MultiIndex) -> bool {
    debug_assert_eq!(pt.degree(), index.degree());
    // walk from x outwards, applying γ_p, γ_{p-1}, … in turn
    let p = pt.degree();
    let mut y = pt.x;
    if !cover.contains(index.0[p], y) {
        return false;
    }
    for i in (0..p).rev() {
        y = space.act(pt.gammas[i], y);
        if !cover.contains(index.0[i], y) {
            return false;
        }
    }
    true
}

pub fn face_index(i: usize, index: &MultiIndex) -> Result<MultiIndex> {
    if index.0.len() < 2 || i >= index.0.len() {
        return invalid(format!("face index {i} out of range for degree {}", index.degree()));
    }
    let mut v = index.0.clone();
    v.remove(i);
    Ok(MultiIndex(v))
}

pub fn degeneracy_index(i: usize, index: &MultiIndex) -> Result<MultiIndex> {
    if i >= index.0.len() {
        return invalid(format!("degeneracy index {i} out of range for degree {}", index.degree()));
    }
    let mut v = index.0.clone();
    v.insert(i, index.0[i]);
    Ok(MultiIndex(v))
}

/// All points of `X^p` in lexicographic order.
pub fn all_points(space: &GammaSpace, p: usize) -> Vec<SimplexPoint> {
    let n = space.gamma().order();
    let mut out = Vec::new();
    for_each_tuple(n, p, |gammas| {
        for x in 0..space.len() {
            out.push(SimplexPoint::new(gammas.to_vec(), x));
        }
    });
    out
}

/// All multi-indices of `A^p` in lexicographic order.
pub fn all_indices(cover: &Cover, p: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for_each_tuple(cover.len(), p + 1, |t| out.push(MultiIndex(t.to_vec())));
    out
}

pub(crate) fn for_each_tuple(base: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if base == 0 && len > 0 {
        return;
    }
    let mut t = vec![0usize; len];
    loop {
        f(&t);
        let mut k = len;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < base {
                break;
            }
            t[k] = 0;
        }
    }
}

/// One admissible pair `(a^p, x^p)` with `x^p ∈ U_{a^p}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub index: MultiIndex,
    pub point: SimplexPoint,
}

/// The nonempty sets `U_{a^p}` of one degree, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Level {
    degree: usize,
    slots: Vec<Slot>,
    cells: Vec<(MultiIndex, std::ops::Range<usize>)>,
    lookup: HashMap<(Vec<usize>, Vec<usize>, usize), usize>,
    faces: Vec<Vec<usize>>,
    first_gamma: Vec<usize>,
    empty_cells: usize,
    component: Vec<usize>,
    component_reps: Vec<usize>,
}

impl Level {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of admissible `(a^p, x^p)` pairs, i.e. cochain coordinates per
    /// coefficient factor.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, s: usize) -> &Slot {
        &self.slots[s]
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Nonempty cells with their points.
    pub fn cells(&self) -> impl Iterator<Item = (&MultiIndex, Vec<&SimplexPoint>)> {
        self.cells
            .iter()
            .map(move |(idx, r)| (idx, self.slots[r.clone()].iter().map(|s| &s.point).collect()))
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Multi-indices whose set `U_{a^p}` is empty.
    pub fn empty_cells(&self) -> usize {
        self.empty_cells
    }

    pub fn find(&self, index: &MultiIndex, point: &SimplexPoint) -> Option<usize> {
        self.lookup
            .get(&(index.0.clone(), point.gammas.clone(), point.x))
            .copied()
    }

    /// Slot of `(d_i a^p, d_i x^p)` in the level below.
    #[inline]
    pub fn face(&self, i: usize, s: usize) -> usize {
        self.faces[i][s]
    }

    /// `γ₁` of the slot's point (identity in degree 0).
    #[inline]
    pub fn first_gamma(&self, s: usize) -> usize {
        self.first_gamma[s]
    }

    /// Connected component (of the slot's cell, at fixed `γ`'s) containing
    /// the slot; components are numbered by their least slot.
    #[inline]
    pub fn component(&self, s: usize) -> usize {
        self.component[s]
    }

    /// Number of connected components, i.e. coordinates of a locally
    /// constant cochain.
    pub fn component_count(&self) -> usize {
        self.component_reps.len()
    }

    /// Least slot of each component.
    pub fn component_reps(&self) -> &[usize] {
        &self.component_reps
    }
}

/// The simplicial cover `𝒰^•` up to a fixed degree, with face maps between
/// consecutive levels precomputed.
#[derive(Debug, Clone)]
pub struct SimplicialCover {
    space: Arc<GammaSpace>,
    cover: Arc<Cover>,
    levels: Vec<Level>,
}

pub const DEFAULT_MAX_DEGREE: usize = 4;

impl SimplicialCover {
    pub fn new(space: Arc<GammaSpace>, cover: Arc<Cover>, max_degree: usize) -> Result<Self> {
        if cover.points() != space.len() {
            return invalid("cover and space have different point counts");
        }
        let mut levels: Vec<Level> = Vec::with_capacity(max_degree + 1);
        for p in 0..=max_degree {
            let level = build_level(&space, &cover, p, levels.last())?;
            levels.push(level);
        }
        Ok(Self { space, cover, levels })
    }

    pub fn space(&self) -> &Arc<GammaSpace> {
        &self.space
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        self.space.gamma()
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    /// Cells of degree `p`.
    pub fn level(&self, p: usize) -> Result<&Level> {
        self.levels.get(p).ok_or(Error::DegreeBound {
            degree: p,
            bound: self.max_degree(),
        })
    }

    /// Census of slot counts per degree.
    pub fn census(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }
}

fn build_level(space: &GammaSpace, cover: &Cover, p: usize, below: Option<&Level>) -> Result<Level> {
    let gamma = space.gamma();
    let mut slots = Vec::new();
    for pt in all_points(space, p) {
        let seq: Vec<usize> = (0..=p).map(|i| point_sequence(space, &pt, i)).collect();
        let choices: Vec<Vec<usize>> = seq
            .iter()
            .map(|&y| (0..cover.len()).filter(|&a| cover.contains(a, y)).collect())
            .collect();
        let mut idx = vec![0usize; p + 1];
        enumerate_product(&choices, 0, &mut idx, &mut |t| {
            slots.push(Slot {
                index: MultiIndex(t.to_vec()),
                point: pt.clone(),
            })
        });
    }
    slots.sort_by(|a, b| (&a.index, &a.point).cmp(&(&b.index, &b.point)));

    let mut cells = Vec::new();
    let mut start = 0;
    for s in 1..=slots.len() {
        if s == slots.len() || slots[s].index != slots[start].index {
            cells.push((slots[start].index.clone(), start..s));
            start = s;
        }
    }
    let total_indices = cover.len().pow((p + 1) as u32);
    let empty_cells = total_indices - cells.len();

    let lookup: HashMap<_, _> = slots
        .iter()
        .enumerate()
        .map(|(k, s)| ((s.index.0.clone(), s.point.gammas.clone(), s.point.x), k))
        .collect();

    let mut faces = Vec::new();
    if let Some(below) = below {
        for i in 0..=p {
            let mut map = Vec::with_capacity(slots.len());
            for s in &slots {
                let fi = face_index(i, &s.index)?;
                let fp = face_point(space, i, &s.point)?;
                match below.find(&fi, &fp) {
                    Some(k) => map.push(k),
                    None => {
                        return Err(Error::Axiom(format!(
                            "cover compatibility d_{i}(U_a) ⊆ U_(d_i a) fails at index {:?}, point {:?}",
                            s.index.0, s.point
                        )))
                    }
                }
            }
            faces.push(map);
        }
    }
    let first_gamma = slots
        .iter()
        .map(|s| s.point.gammas.first().copied().unwrap_or(gamma.identity()))
        .collect();

    // components: slots of one cell with equal γ's and adjacent base points
    let mut parent: Vec<usize> = (0..slots.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (k, s) in slots.iter().enumerate() {
        for &y in space.neighbors(s.point.x) {
            if let Some(&j) = lookup.get(&(s.index.0.clone(), s.point.gammas.clone(), y)) {
                let (rk, rj) = (root(&mut parent, k), root(&mut parent, j));
                let (lo, hi) = (rk.min(rj), rk.max(rj));
                parent[hi] = lo;
            }
        }
    }
    let mut component = vec![usize::MAX; slots.len()];
    let mut component_reps = Vec::new();
    for k in 0..slots.len() {
        let r = root(&mut parent, k);
        if component[r] == usize::MAX {
            component[r] = component_reps.len();
            component_reps.push(r);
        }
        component[k] = component[r];
    }
    for map in &faces {
        let below = below.expect("faces exist only above degree 0");
        for k in 0..slots.len() {
            let rep = component_reps[component[k]];
            if below.component(map[k]) != below.component(map[rep]) {
                return Err(Error::Axiom(format!(
                    "face maps do not respect connected components at index {:?}",
                    slots[k].index.0
                )));
            }
        }
    }
    Ok(Level {
        degree: p,
        slots,
        cells,
        lookup,
        faces,
        first_gamma,
        empty_cells,
        component,
        component_reps,
    })
}

fn enumerate_product(choices: &[Vec<usize>], k: usize, idx: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k == choices.len() {
        f(idx);
        return;
    }
    for &c in &choices[k] {
        idx[k] = c;
        enumerate_product(choices, k + 1, idx, f);
    }
}

/// Outcome of an exhaustive identity check.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct IdentityReport {
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexamples.len() < 50 {
            self.counterexamples.push(msg());
        } else if !ok {
            // keep the list bounded but never report success
            if self.counterexamples.len() == 50 {
                self.counterexamples.push("… further counterexamples omitted".into());
            }
        }
    }
}

/// Simplicial identities for the face and degeneracy maps on points and on
/// multi-indices, for every degree `p ≤ pmax`.
pub fn verify_simplicial_identities(space: &GammaSpace, cover: &Cover, pmax: usize) -> IdentityReport {
    let mut rep = IdentityReport::default();
    let g = space.gamma();
    for p in 0..=pmax {
        for pt in all_points(space, p) {
            // d_i ∘ d_j = d_{j−1} ∘ d_i, i < j, on X^p (p ≥ 2)
            if p >= 2 {
                for j in 1..=p {
                    for i in 0..j {
                        let lhs = face_point(space, i, &face_point(space, j, &pt).unwrap()).unwrap();
                        let rhs = face_point(space, j - 1, &face_point(space, i, &pt).unwrap()).unwrap();
                        rep.record(lhs == rhs, || format!("d_{i}∘d_{j} ≠ d_{}∘d_{i} at {pt:?}", j - 1));
                    }
                }
            }
            // e_i ∘ e_j = e_{j+1} ∘ e_i, i ≤ j
            for j in 0..=p {
                for i in 0..=j {
                    let lhs = degeneracy_point(g, i, &degeneracy_point(g, j, &pt).unwrap()).unwrap();
                    let rhs = degeneracy_point(g, j + 1, &degeneracy_point(g, i, &pt).unwrap()).unwrap();
                    rep.record(lhs == rhs, || format!("e_{i}∘e_{j} ≠ e_{}∘e_{i} at {pt:?}", j + 1));
                }
            }
            // d_i ∘ e_j on X^p, e_j: X^p → X^{p+1}, 0 ≤ i ≤ p+1
            for j in 0..=p {
                let up = degeneracy_point(g, j, &pt).unwrap();
                for i in 0..=(p + 1) {
                    let lhs = face_point(space, i, &up).unwrap();
                    let rhs = if i < j {
                        degeneracy_point(g, j - 1, &face_point(space, i, &pt).unwrap()).unwrap()
                    } else if i == j || i == j + 1 {
                        pt.clone()
                    } else {
                        degeneracy_point(g, j, &face_point(space, i - 1, &pt).unwrap()).unwrap()
                    };
                    rep.record(lhs == rhs, || format!("d_{i}∘e_{j} identity fails at {pt:?}"));
                }
            }
        }
        for idx in all_indices(cover, p) {
            if p >= 2 {
                for j in 1..=p {
                    for i in 0..j {
                        let lhs = face_index(i, &face_index(j, &idx).unwrap()).unwrap();
                        let rhs = face_index(j - 1, &face_index(i, &idx).unwrap()).unwrap();
                        rep.record(lhs == rhs, || format!("index d_{i}∘d_{j} fails at {:?}", idx.0));
                    }
                }
            }
            for j in 0..=p {
                for i in 0..=j {
                    let lhs = degeneracy_index(i, &degeneracy_index(j, &idx).unwrap()).unwrap();
                    let rhs = degeneracy_index(j + 1, &degeneracy_index(i, &idx).unwrap()).unwrap();
                    rep.record(lhs == rhs, || format!("index e_{i}∘e_{j} fails at {:?}", idx.0));
                }
                let up = degeneracy_index(j, &idx).unwrap();
                for i in 0..=(p + 1) {
                    let lhs = face_index(i, &up).unwrap();
                    let rhs = if i < j {
                        degeneracy_index(j - 1, &face_index(i, &idx).unwrap()).unwrap()
                    } else if i == j || i == j + 1 {
                        idx.clone()
                    } else {
                        degeneracy_index(j, &face_index(i - 1, &idx).unwrap()).unwrap()
                    };
                    rep.record(lhs == rhs, || format!("index d_{i}∘e_{j} fails at {:?}", idx.0));
                }
            }
        }
    }
    rep
}

fn compose_twists(theta: &GammaAction, outer: usize, inner: usize) -> Vec<usize> {
    theta.map(inner).iter().map(|&g| theta.act(outer, g)).collect()
}

/// Twisting identities `θ^x_j∘θ^{d_j x}_i = θ^x_i∘θ^{d_i x}_{j−1}` (i < j) and
/// the degeneracy relations, compared as maps of G.
pub fn verify_twist_identities(space: &GammaSpace, theta: &GammaAction, pmax: usize) -> IdentityReport {
    let mut rep = IdentityReport::default();
    let g = space.gamma();
    for p in 2..=pmax {
        for pt in all_points(space, p) {
            for j in 1..=p {
                for i in 0..j {
                    let dj = face_point(space, j, &pt).unwrap();
                    let di = face_point(space, i, &pt).unwrap();
                    let lhs = compose_twists(theta, twist(g, j, &pt), twist(g, i, &dj));
                    let rhs = compose_twists(theta, twist(g, i, &pt), twist(g, j - 1, &di));
                    rep.record(lhs == rhs, || format!("twist identity (i={i}, j={j}) fails at {pt:?}"));
                }
            }
        }
    }
    for p in 0..pmax {
        for pt in all_points(space, p) {
            for j in 0..=p {
                let up = degeneracy_point(g, j, &pt).unwrap();
                for i in 0..=(p + 1) {
                    let lhs = theta.map(twist(g, i, &up)).to_vec();
                    let rhs = if i < j {
                        theta.map(twist(g, i, &pt)).to_vec()
                    } else if i == j || i == j + 1 {
                        theta.map(g.identity()).to_vec()
                    } else {
                        theta.map(twist(g, i - 1, &pt)).to_vec()
                    };
                    rep.record(lhs == rhs, || format!("θ^(e_{j} x)_{i} identity fails at {pt:?}"));
                }
            }
        }
    }
    rep
}

/// Cover compatibility `member(x, a) ⇒ member(d_i x, d_i a)` for all points and
/// indices up to `pmax`, and agreement of degree-one membership with
/// `U_a ∩ γ⁻¹U_b`.
pub fn verify_face_compat(space: &GammaSpace, cover: &Cover, pmax: usize) -> IdentityReport {
    let mut rep = IdentityReport::default();
    for p in 1..=pmax {
        let points = all_points(space, p);
        for idx in all_indices(cover, p) {
            for pt in &points {
                if !member(space, cover, pt, &idx) {
                    continue;
                }
                for i in 0..=p {
                    let fp = face_point(space, i, pt).unwrap();
                    let fi = face_index(i, &idx).unwrap();
                    rep.record(member(space, cover, &fp, &fi), || {
                        format!("d_{i}(U_a) ⊄ U_(d_i a) at index {:?}, point {pt:?}", idx.0)
                    });
                }
            }
        }
    }
    if pmax >= 1 {
        for idx in all_indices(cover, 1) {
            let (b, a) = (idx.0[0], idx.0[1]);
            for pt in all_points(space, 1) {
                let (c, x) = (pt.gammas[0], pt.x);
                let direct = cover.contains(a, x) && cover.contains(b, space.act(c, x));
                rep.record(member(space, cover, &pt, &idx) == direct, || {
                    format!("degree-1 membership disagrees with U_a ∩ γ⁻¹U_b at {:?}, {pt:?}", idx.0)
                });
            }
        }
    }
    rep
}

/// A refinement `(𝒱, r)` of a cover `𝒰` with `V_b ⊆ U_{r(b)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    fine: Arc<Cover>,
    map: Vec<usize>,
}

impl Refinement {
    pub fn new(coarse: &Cover, fine: Arc<Cover>, map: Vec<usize>) -> Result<Self> {
        if map.len() != fine.len() {
            return invalid("refining map must assign one coarse set to every fine set");
        }
        for (b, &a) in map.iter().enumerate() {
            if a >= coarse.len() {
                return invalid(format!("refining map sends {} outside the coarse cover", fine.name(b)));
            }
            if let Some(&x) = fine.set(b).iter().find(|&&x| !coarse.contains(a, x)) {
                return invalid(format!(
                    "refinement violates V_{} ⊆ U_{}: point {x}",
                    fine.name(b),
                    coarse.name(a)
                ));
            }
        }
        Ok(Self { fine, map })
    }

    pub fn identity(cover: Arc<Cover>) -> Self {
        let map = (0..cover.len()).collect();
        Self { fine: cover, map }
    }

    pub fn fine(&self) -> &Arc<Cover> {
        &self.fine
    }

    #[inline]
    pub fn apply(&self, b: usize) -> usize {
        self.map[b]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// Slot map of `𝒱^p` into `𝒰^p`, `(b₀,…,b_p) ↦ (r(b₀),…,r(b_p))`, with the
/// containment checked pointwise.
pub fn induced_refinement(refinement: &Refinement, fine: &SimplicialCover, coarse: &SimplicialCover, p: usize) -> Result<Vec<usize>> {
    let fl = fine.level(p)?;
    let cl = coarse.level(p)?;
    fl.slots()
        .iter()
        .map(|s| {
            let idx = MultiIndex(s.index.0.iter().map(|&b| refinement.apply(b)).collect());
            cl.find(&idx, &s.point).ok_or_else(|| {
                Error::Axiom(format!("refinement containment V_b ⊆ U_r(b) fails at {:?}, {:?}", s.index.0, s.point))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2).unwrap())
    }

    #[test]
    fn face_maps() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let space = GammaSpace::from_cyclic_generator(g.clone(), vec![1, 2, 0]).unwrap();
        let pt = SimplexPoint::new(vec![1, 2], 0);
        assert_eq!(face_point(&space, 0, &pt).unwrap(), SimplexPoint::new(vec![2], 0));
        assert_eq!(face_point(&space, 1, &pt).unwrap(), SimplexPoint::new(vec![0], 0));
        assert_eq!(face_point(&space, 2, &pt).unwrap(), SimplexPoint::new(vec![1], 2));
        assert!(face_point(&space, 3, &pt).is_err());
        assert!(face_point(&space, 0, &SimplexPoint::new(vec![], 0)).is_err());
    }

    #[test]
    fn degeneracy_maps() {
        let g = z2();
        let pt = SimplexPoint::new(vec![1], 0);
        assert_eq!(degeneracy_point(&g, 0, &pt).unwrap(), SimplexPoint::new(vec![0, 1], 0));
        assert_eq!(degeneracy_point(&g, 1, &pt).unwrap(), SimplexPoint::new(vec![1, 0], 0));
        assert!(degeneracy_point(&g, 2, &pt).is_err());
        let space = GammaSpace::point(g.clone());
        for i in 0..=1 {
            let up = degeneracy_point(&g, i, &pt).unwrap();
            assert_eq!(face_point(&space, i, &up).unwrap(), pt);
        }
    }

    #[test]
    fn twisting() {
        let g = z2();
        let pt = SimplexPoint::new(vec![1, 0], 0);
        assert_eq!(twist(&g, 0, &pt), 1);
        assert_eq!(twist(&g, 1, &pt), 0);
        assert_eq!(twist(&g, 0, &SimplexPoint::new(vec![0, 1], 0)), 0);
    }

    #[test]
    fn point_sequences() {
        let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let space = GammaSpace::from_cyclic_generator(g, vec![1, 2, 0]).unwrap();
        assert_eq!(point_sequence(&space, &SimplexPoint::new(vec![], 2), 0), 2);
        let pt = SimplexPoint::new(vec![1, 2], 0);
        assert_eq!(point_sequence(&space, &pt, 2), 0);
        assert_eq!(point_sequence(&space, &pt, 1), 2);
        assert_eq!(point_sequence(&space, &pt, 0), 0); // 1+2 ≡ 0 acts trivially
    }

    #[test]
    fn membership() {
        let g = z2();
        let space = GammaSpace::from_cyclic_generator(g, vec![1, 0, 2]).unwrap();
        let cover = Cover::new(3, vec!["U0".into(), "U1".into()], vec![vec![0, 2], vec![1, 2]]).unwrap();
        assert!(member(&space, &cover, &SimplexPoint::new(vec![], 0), &MultiIndex(vec![0])));
        assert!(!member(&space, &cover, &SimplexPoint::new(vec![], 0), &MultiIndex(vec![1])));
        // (γ,x) ∈ U_(b,a) ⇔ x ∈ U_a and γx ∈ U_b
        assert!(member(&space, &cover, &SimplexPoint::new(vec![1], 0), &MultiIndex(vec![1, 0])));
        assert!(!member(&space, &cover, &SimplexPoint::new(vec![1], 0), &MultiIndex(vec![0, 1])));
        let whole = Cover::whole(3);
        for pt in all_points(&space, 2) {
            assert!(member(&space, &whole, &pt, &MultiIndex(vec![0, 0, 0])));
        }
    }

    #[test]
    fn index_maps() {
        let idx = MultiIndex(vec![0, 1, 2]);
        assert_eq!(face_index(1, &idx).unwrap(), MultiIndex(vec![0, 2]));
        assert_eq!(degeneracy_index(0, &MultiIndex(vec![0, 1])).unwrap(), MultiIndex(vec![0, 0, 1]));
        let ab = MultiIndex(vec![3, 4]);
        assert_eq!(face_index(0, &degeneracy_index(0, &ab).unwrap()).unwrap(), ab);
        assert!(face_index(3, &idx).is_err());
    }

    #[test]
    fn cells_on_a_point() {
        let g = z2();
        let sc = SimplicialCover::new(Arc::new(GammaSpace::point(g)), Arc::new(Cover::whole(1)), 2).unwrap();
        let l1 = sc.level(1).unwrap();
        assert_eq!(l1.cell_count(), 1);
        let (_, pts) = l1.cells().next().unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(sc.level(0).unwrap().len(), 1);
        assert!(matches!(sc.level(3), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn cells_match_brute_force_scan() {
        let g = z2();
        let space = Arc::new(GammaSpace::from_cyclic_generator(g, vec![1, 0, 2]).unwrap());
        let cover = Arc::new(Cover::new(3, vec!["U0".into(), "U1".into()], vec![vec![0, 2], vec![1]]).unwrap());
        let sc = SimplicialCover::new(space.clone(), cover.clone(), 2).unwrap();
        let level = sc.level(2).unwrap();
        let mut total = 0;
        for idx in all_indices(&cover, 2) {
            let count = all_points(&space, 2).iter().filter(|pt| member(&space, &cover, pt, &idx)).count();
            total += count;
            let listed = level.cells().find(|(i, _)| **i == idx).map_or(0, |(_, p)| p.len());
            assert_eq!(listed, count, "index {:?}", idx.0);
        }
        assert_eq!(level.len(), total);
        assert_eq!(level.cell_count() + level.empty_cells(), 8);
    }

    #[test]
    fn identities_hold_and_corruption_is_caught() {
        let g = z2();
        let space = GammaSpace::from_cyclic_generator(g.clone(), vec![1, 0, 3, 2]).unwrap();
        let cover = Cover::new(4, vec!["U0".into(), "U1".into()], vec![vec![0, 2, 3], vec![1, 2]]).unwrap();
        assert!(verify_simplicial_identities(&space, &cover, 3).passed());
        assert!(verify_face_compat(&space, &cover, 3).passed());
        let theta = GammaAction::from_cyclic_generator(g.clone(), Arc::new(FiniteGroup::cyclic(4).unwrap()), vec![0, 3, 2, 1]).unwrap();
        assert!(verify_twist_identities(&space, &theta, 3).passed());

        // σ_g∘σ_g ≠ id
        let bad = GammaSpace::new_unchecked(g, 4, vec![vec![0, 1, 2, 3], vec![1, 2, 3, 0]]).unwrap();
        assert!(!bad.check_action().is_valid());
        assert!(!verify_simplicial_identities(&bad, &cover, 3).passed());
    }

    #[test]
    fn refinements() {
        let g = Arc::new(FiniteGroup::trivial());
        let space = Arc::new(GammaSpace::trivial(g, 4).unwrap());
        let coarse = Arc::new(Cover::new(4, vec!["U0".into(), "U1".into()], vec![vec![0, 1, 2], vec![2, 3]]).unwrap());
        let fine = Arc::new(
            Cover::new(4, vec!["V0".into(), "V1".into(), "V2".into()], vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap(),
        );
        let r = Refinement::new(&coarse, fine.clone(), vec![0, 0, 1]).unwrap();
        assert!(Refinement::new(&coarse, fine.clone(), vec![0, 1, 1]).is_err());
        let sc = SimplicialCover::new(space.clone(), coarse.clone(), 2).unwrap();
        let sf = SimplicialCover::new(space, fine, 2).unwrap();
        for p in 0..=2 {
            let map = induced_refinement(&r, &sf, &sc, p).unwrap();
            for (s, &t) in map.iter().enumerate() {
                let fs = sf.level(p).unwrap().slot(s);
                let cs = sc.level(p).unwrap().slot(t);
                assert_eq!(fs.point, cs.point);
                let mapped: Vec<usize> = fs.index.0.iter().map(|&b| r.apply(b)).collect();
                assert_eq!(mapped, cs.index.0);
            }
        }
        let id = Refinement::identity(coarse);
        let map = induced_refinement(&id, &sc, &sc, 1).unwrap();
        assert!(map.iter().enumerate().all(|(a, &b)| a == b));
    }

    #[test]
    fn cover_validation() {
        assert!(Cover::new(3, vec!["U".into()], vec![vec![0, 1]]).is_err());
        assert!(Cover::new(3, vec!["U".into(), "V".into()], vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(Cover::new(2, vec!["U".into(), "U".into()], vec![vec![0], vec![1]]).is_err());
    }

    #[test]
    fn edges_must_be_preserved() {
        let path = GammaSpace::from_cyclic_generator(z2(), vec![1, 0, 2]).unwrap();
        assert!(path.clone().with_edges(&[(0, 1)]).is_ok());
        assert!(path.clone().with_edges(&[(1, 2)]).is_err());
        assert!(path.clone().with_edges(&[(0, 3)]).is_err());
        let s = path.with_edges(&[(0, 2), (1, 2), (2, 2)]).unwrap();
        assert_eq!(s.edges(), vec![(0, 2), (1, 2)]);
        assert!(s.adjacent(2, 0) && !s.adjacent(0, 1));
        assert!(!s.is_discrete());
    }

    #[test]
    fn components_of_the_triangle_circle() {
        let space = GammaSpace::trivial(Arc::new(FiniteGroup::trivial()), 3)
            .unwrap()
            .with_edges(&[(0, 1), (1, 2), (0, 2)])
            .unwrap();
        let cover = Cover::new(3, vec!["U0".into(), "U1".into(), "U2".into()], vec![vec![0, 2], vec![0, 1], vec![1, 2]]).unwrap();
        let sc = SimplicialCover::new(Arc::new(space), Arc::new(cover.clone()), 2).unwrap();
        assert_eq!(sc.level(0).unwrap().len(), 6);
        assert_eq!(sc.level(0).unwrap().component_count(), 3);
        // three connected diagonal cells plus six single-point overlaps
        assert_eq!(sc.level(1).unwrap().len(), 12);
        assert_eq!(sc.level(1).unwrap().component_count(), 9);
        let l1 = sc.level(1).unwrap();
        for s in 0..l1.len() {
            let rep = l1.component_reps()[l1.component(s)];
            assert_eq!(l1.slot(s).index, l1.slot(rep).index);
        }
        // without edges every slot is its own component
        let discrete = SimplicialCover::new(
            Arc::new(GammaSpace::trivial(Arc::new(FiniteGroup::trivial()), 3).unwrap()),
            Arc::new(cover),
            2,
        )
        .unwrap();
        for p in 0..=2 {
            let l = discrete.level(p).unwrap();
            assert_eq!(l.component_count(), l.len());
        }
    }
}
