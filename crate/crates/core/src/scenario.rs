//! JSON scenario files.
//!
//! A scenario bundles the acting group Γ, named coefficient Γ-groups, a finite
//! Γ-space with an optional edge set, a named cover, and optionally transition
//! cocycles, central extensions and refinements. Everything is validated
//! eagerly: group axioms, actions by automorphisms, the space action and its
//! compatibility with the edges, the cover, extension exactness and
//! centrality, refinement containments and cocycle membership.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "bockstein",
//!   "gamma": { "cyclic": 2 },
//!   "coefficients": {
//!     "A": { "group": { "cyclic": 2 } },
//!     "B": { "group": { "cyclic": 4 } },
//!     "C": { "group": { "cyclic": 2 } }
//!   },
//!   "space": { "points": 1 },
//!   "cover": [ { "name": "U", "points": [0] } ],
//!   "cocycles": {
//!     "phi": { "coefficients": "C",
//!              "values": [ { "cell": ["U", "U"], "gammas": [1], "value": 1 } ] }
//!   },
//!   "extensions": {
//!     "bockstein": { "a": "A", "b": "B", "c": "C", "alpha": [0, 2], "beta": [0, 1, 0, 1] }
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::cochain::{Cochain, CochainComplex};
use crate::error::{Error, Result};
use crate::extension::{CentralExtension, GammaHom, Section};
use crate::groups::{FiniteGammaGroup, FiniteGroup, GammaAction};
use crate::nonabelian;
use crate::space::{Cover, GammaSpace, MultiIndex, Refinement, SimplicialCover};

/// Supported value of the `schema` field.
pub const SCHEMA_VERSION: u32 = 1;

/// Default number of simplicial levels built above degree 0.
pub const DEFAULT_MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub gamma: GroupSpec,
    pub coefficients: BTreeMap<String, CoefficientSpec>,
    pub space: SpaceSpec,
    pub cover: Vec<SetSpec>,
    #[serde(default)]
    pub max_degree: Option<usize>,
    #[serde(default)]
    pub cocycles: BTreeMap<String, CocycleSpec>,
    #[serde(default)]
    pub extensions: BTreeMap<String, ExtensionSpec>,
    #[serde(default)]
    pub refinements: BTreeMap<String, RefinementSpec>,
}

/// Either `{"cyclic": n}` or `{"table": [[…]], "labels": […]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub cyclic: Option<usize>,
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub group: GroupSpec,
    /// Absent means the trivial action.
    #[serde(default)]
    pub action: Option<ActionSpec>,
}

/// `{"generator": […]}` (image of element 1 of a cyclic Γ) or
/// `{"maps": [[…], …]}` (one map per element of Γ).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    #[serde(default)]
    pub generator: Option<Vec<usize>>,
    #[serde(default)]
    pub maps: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub points: usize,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub generator: Option<Vec<usize>>,
    #[serde(default)]
    pub maps: Option<Vec<Vec<usize>>>,
    /// Undirected edges; cochains are constant along edges inside a cell.
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub name: String,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub coefficients: String,
    #[serde(default = "default_cocycle_degree")]
    pub degree: usize,
    #[serde(default)]
    pub values: Vec<EntrySpec>,
}

fn default_cocycle_degree() -> usize {
    1
}

/// Value on the connected component of `(cell, gammas, x)`; without `x`,
/// on every point of the cell with these group elements.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub cell: Vec<String>,
    #[serde(default)]
    pub gammas: Vec<usize>,
    #[serde(default)]
    pub x: Option<usize>,
    pub value: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub a: String,
    pub b: String,
    pub c: String,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    #[serde(default)]
    pub section: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinementSpec {
    pub cover: Vec<SetSpec>,
    /// Refining maps by name: the coarse set chosen for each fine set.
    pub maps: BTreeMap<String, Vec<String>>,
}

/// A validated cocycle and the name of its coefficient group.
#[derive(Debug, Clone)]
pub struct NamedCocycle {
    pub coefficients: String,
    pub cochain: Cochain,
}

/// A validated extension together with the names of `A`, `B`, `C`.
#[derive(Debug, Clone)]
pub struct NamedExtension {
    pub a: String,
    pub b: String,
    pub c: String,
    pub extension: CentralExtension,
}

/// A refined cover and its refining maps.
#[derive(Debug, Clone)]
pub struct NamedRefinement {
    pub cover: Arc<SimplicialCover>,
    pub maps: BTreeMap<String, Refinement>,
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub gamma: Arc<FiniteGroup>,
    pub coefficients: BTreeMap<String, Arc<FiniteGammaGroup>>,
    pub cover: Arc<SimplicialCover>,
    pub cocycles: BTreeMap<String, NamedCocycle>,
    pub extensions: BTreeMap<String, NamedExtension>,
    pub refinements: BTreeMap<String, NamedRefinement>,
    /// Hex SHA-256 of the source text.
    pub digest: String,
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read scenario {}: {e}", path.display())))?;
    Scenario::from_json(&text)
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Invalid(m) => Error::Invalid(format!("{path}: {m}")),
        Error::Axiom(m) => Error::Axiom(format!("{path}: {m}")),
        other => other,
    })
}

fn build_group(path: &str, spec: &GroupSpec) -> Result<FiniteGroup> {
    let group = match (spec.cyclic, &spec.table) {
        (Some(n), None) => {
            if spec.labels.is_some() {
                return Err(Error::Invalid(format!("{path}.labels: labels are only allowed with a table")));
            }
            FiniteGroup::cyclic(n)
        }
        (None, Some(t)) => FiniteGroup::from_table(t.clone(), spec.labels.clone()),
        _ => return Err(Error::Invalid(format!("{path}: give exactly one of `cyclic` or `table`"))),
    };
    at(path, group)
}

fn build_action(path: &str, gamma: &Arc<FiniteGroup>, group: &Arc<FiniteGroup>, spec: &Option<ActionSpec>) -> Result<FiniteGammaGroup> {
    let action = match spec {
        None => return Ok(FiniteGammaGroup::trivial(gamma.clone(), group.clone())),
        Some(ActionSpec { generator: Some(g), maps: None }) => {
            at(path, GammaAction::from_cyclic_generator(gamma.clone(), group.clone(), g.clone()))?
        }
        Some(ActionSpec { generator: None, maps: Some(m) }) => at(path, GammaAction::new(gamma.clone(), group.clone(), m.clone()))?,
        Some(_) => return Err(Error::Invalid(format!("{path}: give exactly one of `generator` or `maps`"))),
    };
    // check_gamma_group runs inside the constructor; its findings are reported verbatim
    at(path, FiniteGammaGroup::new(action))
}

fn build_cover(path: &str, points: usize, sets: &[SetSpec]) -> Result<Cover> {
    at(
        path,
        Cover::new(
            points,
            sets.iter().map(|s| s.name.clone()).collect(),
            sets.iter().map(|s| s.points.clone()).collect(),
        ),
    )
}

impl Scenario {
    /// Parses and validates scenario JSON; errors carry the path of the
    /// offending field.
    pub fn from_json(text: &str) -> Result<Scenario> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Invalid(format!("{path}: {}", e.into_inner()))
        })?;
        let digest = hex::encode(Sha256::digest(text.as_bytes()));
        Self::from_file(file, digest)
    }

    pub fn from_file(file: ScenarioFile, digest: String) -> Result<Scenario> {
        if file.schema != SCHEMA_VERSION {
            return Err(Error::Invalid(format!(
                "schema: unsupported version {} (expected {SCHEMA_VERSION})",
                file.schema
            )));
        }
        let gamma = Arc::new(build_group("gamma", &file.gamma)?);
        if file.coefficients.is_empty() {
            return Err(Error::Invalid("coefficients: at least one coefficient group is required".into()));
        }
        let mut coefficients = BTreeMap::new();
        for (name, spec) in &file.coefficients {
            let path = format!("coefficients.{name}");
            let group = Arc::new(build_group(&format!("{path}.group"), &spec.group)?);
            let coeff = build_action(&format!("{path}.action"), &gamma, &group, &spec.action)?;
            coefficients.insert(name.clone(), Arc::new(coeff));
        }

        let sp = &file.space;
        let space = match (&sp.generator, &sp.maps) {
            (None, None) => GammaSpace::trivial(gamma.clone(), sp.points),
            (Some(g), None) => {
                if g.len() != sp.points {
                    return Err(Error::Invalid(format!(
                        "space.generator: permutation of {} points for a space of {}",
                        g.len(),
                        sp.points
                    )));
                }
                GammaSpace::from_cyclic_generator(gamma.clone(), g.clone())
            }
            (None, Some(m)) => GammaSpace::new(gamma.clone(), sp.points, m.clone()),
            (Some(_), Some(_)) => return Err(Error::Invalid("space: give at most one of `generator` or `maps`".into())),
        };
        let mut space = at("space", space)?;
        if let Some(labels) = &sp.labels {
            space = at("space.labels", space.with_labels(labels.clone()))?;
        }
        let edges: Vec<(usize, usize)> = sp.edges.iter().map(|e| (e[0], e[1])).collect();
        let space = Arc::new(at("space.edges", space.with_edges(&edges))?);

        let cover = Arc::new(build_cover("cover", sp.points, &file.cover)?);
        let max_degree = file.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
        if max_degree < 2 {
            return Err(Error::Invalid("max_degree: at least 2 levels are needed for TC¹".into()));
        }
        let sc = Arc::new(at("cover", SimplicialCover::new(space.clone(), cover.clone(), max_degree))?);

        let mut extensions = BTreeMap::new();
        for (name, spec) in &file.extensions {
            let path = format!("extensions.{name}");
            let get = |field: &str, key: &str| {
                coefficients
                    .get(key)
                    .cloned()
                    .ok_or_else(|| Error::Invalid(format!("{path}.{field}: unknown coefficient group `{key}`")))
            };
            let (a, b, c) = (get("a", &spec.a)?, get("b", &spec.b)?, get("c", &spec.c)?);
            let alpha = at(&format!("{path}.alpha"), GammaHom::new(a, b.clone(), spec.alpha.clone()))?;
            let beta = at(&format!("{path}.beta"), GammaHom::new(b, c, spec.beta.clone()))?;
            let ext = match &spec.section {
                None => at(&path, CentralExtension::new(alpha, beta))?,
                Some(s) => {
                    let section = at(&format!("{path}.section"), Section::from_choices(beta.hom(), s.clone()))?;
                    at(&path, CentralExtension::with_section(alpha, beta, section))?
                }
            };
            extensions.insert(
                name.clone(),
                NamedExtension {
                    a: spec.a.clone(),
                    b: spec.b.clone(),
                    c: spec.c.clone(),
                    extension: ext,
                },
            );
        }

        let mut cocycles = BTreeMap::new();
        for (name, spec) in &file.cocycles {
            let path = format!("cocycles.{name}");
            let coeff = coefficients.get(&spec.coefficients).cloned().ok_or_else(|| {
                Error::Invalid(format!("{path}.coefficients: unknown coefficient group `{}`", spec.coefficients))
            })?;
            let k = CochainComplex::new(sc.clone(), coeff)?;
            let cochain = build_cochain(&path, &k, spec)?;
            cocycles.insert(
                name.clone(),
                NamedCocycle {
                    coefficients: spec.coefficients.clone(),
                    cochain,
                },
            );
        }

        let mut refinements = BTreeMap::new();
        for (name, spec) in &file.refinements {
            let path = format!("refinements.{name}");
            let fine = Arc::new(build_cover(&format!("{path}.cover"), sp.points, &spec.cover)?);
            if spec.maps.is_empty() {
                return Err(Error::Invalid(format!("{path}.maps: at least one refining map is required")));
            }
            let mut maps = BTreeMap::new();
            for (map_name, targets) in &spec.maps {
                let mpath = format!("{path}.maps.{map_name}");
                let map = targets
                    .iter()
                    .map(|t| {
                        cover
                            .index_of(t)
                            .ok_or_else(|| Error::Invalid(format!("{mpath}: unknown coarse set `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                maps.insert(map_name.clone(), at(&mpath, Refinement::new(&cover, fine.clone(), map))?);
            }
            let fine_sc = Arc::new(at(&path, SimplicialCover::new(space.clone(), fine, max_degree))?);
            refinements.insert(name.clone(), NamedRefinement { cover: fine_sc, maps });
        }

        Ok(Scenario {
            name: file.name,
            description: file.description,
            gamma,
            coefficients,
            cover: sc,
            cocycles,
            extensions,
            refinements,
            digest,
        })
    }

    /// The same Γ and coefficients over a single point covered by one set;
    /// its cohomology is the group cohomology of Γ.
    pub fn point_cover(&self) -> Result<Arc<SimplicialCover>> {
        Ok(Arc::new(SimplicialCover::new(
            Arc::new(GammaSpace::point(self.gamma.clone())),
            Arc::new(Cover::whole(1)),
            self.cover.max_degree(),
        )?))
    }

    pub fn coefficient(&self, name: &str) -> Result<&Arc<FiniteGammaGroup>> {
        self.coefficients
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unknown coefficient group `{name}`")))
    }

    pub fn complex(&self, coefficients: &str) -> Result<CochainComplex> {
        CochainComplex::new(self.cover.clone(), self.coefficient(coefficients)?.clone())
    }
}

/// Sparse entries set whole connected components; everything else is the
/// identity. The result must be locally constant and satisfy TC⁰ (degree 0)
/// or TC¹ (degree 1).
fn build_cochain(path: &str, k: &CochainComplex, spec: &CocycleSpec) -> Result<Cochain> {
    let p = spec.degree;
    if p > 1 {
        return Err(Error::Invalid(format!("{path}.degree: only degree-0 and degree-1 cocycles can be listed")));
    }
    let sc = k.cover();
    let level = sc.level(p)?;
    let g = k.coeff().group();
    let mut values: Vec<Option<usize>> = vec![None; level.component_count()];
    for (i, entry) in spec.values.iter().enumerate() {
        let epath = format!("{path}.values[{i}]");
        if entry.cell.len() != p + 1 || entry.gammas.len() != p {
            return Err(Error::Invalid(format!(
                "{epath}: a degree-{p} entry needs {} cover sets and {p} elements of Γ",
                p + 1
            )));
        }
        let index = MultiIndex(
            entry
                .cell
                .iter()
                .map(|n| {
                    sc.cover()
                        .index_of(n)
                        .ok_or_else(|| Error::Invalid(format!("{epath}.cell: unknown cover set `{n}`")))
                })
                .collect::<Result<_>>()?,
        );
        if entry.gammas.iter().any(|&c| c >= sc.gamma().order()) {
            return Err(Error::Invalid(format!("{epath}.gammas: element outside Γ")));
        }
        if entry.value >= g.order() {
            return Err(Error::Invalid(format!("{epath}.value: {} is not an element of the group", entry.value)));
        }
        let matches: Vec<usize> = (0..level.len())
            .filter(|&s| {
                let slot = level.slot(s);
                slot.index == index && slot.point.gammas == entry.gammas && entry.x.map_or(true, |x| slot.point.x == x)
            })
            .collect();
        if matches.is_empty() {
            return Err(Error::Invalid(format!(
                "{epath}: no admissible point of the cell ({}) with γ = {:?}{}",
                entry.cell.join(","),
                entry.gammas,
                entry.x.map(|x| format!(", x = {x}")).unwrap_or_default()
            )));
        }
        for s in matches {
            let c = level.component(s);
            match values[c] {
                Some(v) if v != entry.value => {
                    return Err(Error::Axiom(format!(
                        "{epath}: conflicting values on one connected component (cochains are locally constant)"
                    )))
                }
                _ => values[c] = Some(entry.value),
            }
        }
    }
    let values: Vec<usize> = values.into_iter().map(|v| v.unwrap_or(g.identity())).collect();
    let cochain = k.expand(p, &values)?;
    if p == 0 {
        if let Some(v) = nonabelian::tc0_violations(k, &cochain)?.first() {
            return Err(Error::Axiom(format!("{path}: not in TC⁰: {v}")));
        }
    } else {
        let check = nonabelian::tc1_check(k, &cochain)?;
        if let Some(v) = check.violations.first() {
            return Err(Error::Axiom(format!("{path}: not in TC¹: {v}")));
        }
    }
    Ok(cochain)
}
