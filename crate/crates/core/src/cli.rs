//! Command dispatch and machine-readable reports for the `seccoh` binary.
//!
//! Reports are JSON objects with a fixed envelope (`report_schema`, tool,
//! version, command, options, seed, scenario name and SHA-256 digest) and a
//! command-specific `results` value. Reports contain no timing data, so the
//! same scenario, command, options and seed always give byte-identical
//! output.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bundle::{enumerate_liftings_bruteforce, roundtrip_check, solve_liftings, verify_lifting_bundle};
use crate::cochain::{Cochain, CochainComplex};
use crate::cohomology::{census, enumerate_orders, les_exactness_check, refinement_action_check, AbelianComplex};
use crate::error::{Error, Result};
use crate::groups::FiniteGammaGroup;
use crate::nonabelian::{self, DEFAULT_SEARCH_BUDGET};
use crate::scenario::{NamedExtension, Scenario};
use crate::space::{verify_face_compat, verify_simplicial_identities, verify_twist_identities, SimplicialCover};

/// Version of the report envelope.
pub const REPORT_SCHEMA: u32 = 1;

/// Random trials used by `verify` and `dd`.
pub const RANDOM_TRIALS: usize = 100;
pub const DD_TRIALS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// H^p of every abelian coefficient group over the scenario's cover.
    Cohomology,
    /// Dixmier-Douady classes of cocycles through extensions.
    Dd,
    /// Existence and classification of liftings through extensions.
    Lift,
    /// Identity, exactness, oracle and round-trip suites.
    Verify,
    /// H^p over a single point: the group cohomology of Γ.
    GroupCohomology,
    /// Cocycle → bundle → cocycle and bundle → cocycle → bundle.
    Roundtrip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    Solve,
    Brute,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Options {
    pub degree: Option<usize>,
    pub extension: Option<String>,
    pub cocycle: Option<String>,
    pub oracle: Oracle,
    pub seed: u64,
    pub budget: u128,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            degree: None,
            extension: None,
            cocycle: None,
            oracle: Oracle::Solve,
            seed: 0,
            budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub report_schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    pub options: Options,
    pub seed: u64,
    pub scenario: String,
    pub scenario_digest: String,
    pub results: Value,
    /// Whether every assertion made by the command held.
    pub ok: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Process exit code for an error: 1 assertion failure, 2 input error,
/// 3 budget exceeded.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Budget { .. } => 3,
        Error::Axiom(_) => 1,
        Error::Invalid(_) | Error::NonAbelian(_) | Error::DegreeBound { .. } => 2,
    }
}

pub fn run(command: Command, scenario: &Scenario, options: &Options) -> Result<Report> {
    let (results, ok) = match command {
        Command::Cohomology => cohomology(scenario, &scenario.cover, options)?,
        Command::GroupCohomology => cohomology(scenario, &scenario.point_cover()?, options)?,
        Command::Dd => dd(scenario, options)?,
        Command::Lift => lift(scenario, options)?,
        Command::Roundtrip => roundtrip(scenario, options)?,
        Command::Verify => verify(scenario, options)?,
    };
    Ok(Report {
        report_schema: REPORT_SCHEMA,
        tool: "seccoh",
        version: env!("CARGO_PKG_VERSION"),
        command,
        options: options.clone(),
        seed: options.seed,
        scenario: scenario.name.clone(),
        scenario_digest: scenario.digest.clone(),
        results,
        ok,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn abelian(scenario: &Scenario) -> impl Iterator<Item = (&String, &Arc<FiniteGammaGroup>)> {
    scenario.coefficients.iter().filter(|(_, g)| g.group().is_abelian())
}

fn cohomology(scenario: &Scenario, cover: &Arc<SimplicialCover>, options: &Options) -> Result<(Value, bool)> {
    let top = cover.max_degree() - 1;
    let degrees: Vec<usize> = match options.degree {
        Some(p) if p > top => return Err(Error::DegreeBound { degree: p, bound: top }),
        Some(p) => vec![p],
        None => (0..=top).collect(),
    };
    let mut groups = Vec::new();
    for (name, coeff) in &scenario.coefficients {
        if !coeff.group().is_abelian() {
            groups.push(json!({ "coefficients": name, "abelian": false }));
            continue;
        }
        let a = AbelianComplex::new(CochainComplex::new(cover.clone(), coeff.clone())?)?;
        let pmax = *degrees.last().expect("at least one degree");
        let sizes = census(&a, pmax)?;
        let mut entries = Vec::new();
        for &p in &degrees {
            let h = a.cohomology(p)?;
            entries.push(json!({
                "degree": p,
                "group": h.describe(),
                "factors": h.factors(),
                "order": h.order().to_string(),
                "generators": h.generators().iter().map(|g| g.values().to_vec()).collect::<Vec<_>>(),
                "census": to_value(&sizes[p]),
            }));
        }
        groups.push(json!({ "coefficients": name, "abelian": true, "degrees": entries }));
    }
    Ok((json!({ "coefficients": groups }), true))
}

/// `(extension, cocycle name, cocycle)` triples selected by the options:
/// the named cocycle or every listed degree-1 cocycle with coefficients `C`,
/// falling back to the trivial cocycle.
fn pairs<'a>(scenario: &'a Scenario, options: &Options) -> Result<Vec<(&'a str, &'a NamedExtension, String, Cochain)>> {
    let extensions: Vec<(&str, &NamedExtension)> = match &options.extension {
        Some(name) => {
            let (key, ext) = scenario
                .extensions
                .get_key_value(name)
                .ok_or_else(|| Error::Invalid(format!("unknown extension `{name}`")))?;
            vec![(key.as_str(), ext)]
        }
        None => scenario.extensions.iter().map(|(n, e)| (n.as_str(), e)).collect(),
    };
    if extensions.is_empty() {
        return Err(Error::Invalid("scenario defines no extensions".into()));
    }
    let mut out = Vec::new();
    for (ename, ext) in extensions {
        match &options.cocycle {
            Some(cname) => {
                let c = scenario
                    .cocycles
                    .get(cname)
                    .ok_or_else(|| Error::Invalid(format!("unknown cocycle `{cname}`")))?;
                if c.coefficients != ext.c || c.cochain.degree() != 1 {
                    return Err(Error::Invalid(format!(
                        "cocycle `{cname}` is not a degree-1 cocycle with coefficients `{}` of extension `{ename}`",
                        ext.c
                    )));
                }
                out.push((ename, ext, cname.clone(), c.cochain.clone()));
            }
            None => {
                let listed: Vec<_> = scenario
                    .cocycles
                    .iter()
                    .filter(|(_, c)| c.coefficients == ext.c && c.cochain.degree() == 1)
                    .collect();
                if listed.is_empty() {
                    let k = scenario.complex(&ext.c)?;
                    out.push((ename, ext, "identity".to_string(), k.identity(1)?));
                }
                for (cname, c) in listed {
                    out.push((ename, ext, cname.clone(), c.cochain.clone()));
                }
            }
        }
    }
    Ok(out)
}

fn dd(scenario: &Scenario, options: &Options) -> Result<(Value, bool)> {
    let mut entries = Vec::new();
    let mut ok = true;
    for (ename, ext, cname, phi) in pairs(scenario, options)? {
        let ext = &ext.extension;
        let report = nonabelian::dd_invariance_check(ext, &scenario.cover, &phi, DD_TRIALS, options.seed)?;
        let h2 = AbelianComplex::new(CochainComplex::new(scenario.cover.clone(), ext.a().clone())?)?.cohomology(2)?;
        ok &= report.holds();
        entries.push(json!({
            "extension": ename,
            "cocycle": cname,
            "h2_a": h2.describe(),
            "h2_factors": h2.factors(),
            "class": report.class,
            "zero": report.class.iter().all(|&c| c == 0),
            "invariance": to_value(&report),
        }));
    }
    Ok((json!({ "dd": entries }), ok))
}

fn lift(scenario: &Scenario, options: &Options) -> Result<(Value, bool)> {
    let mut entries = Vec::new();
    let mut ok = true;
    for (ename, named, cname, phi) in pairs(scenario, options)? {
        let ext = &named.extension;
        let cover = &scenario.cover;
        let mut entry = json!({ "extension": ename, "cocycle": cname });
        let solved = match options.oracle {
            Oracle::Brute => None,
            _ => Some(solve_liftings(ext, cover, &phi, options.budget)?),
        };
        let brute = match options.oracle {
            Oracle::Solve => None,
            _ => Some(enumerate_liftings_bruteforce(ext, cover, &phi, options.budget)?),
        };
        if let Some(s) = &solved {
            let audits = s
                .representatives
                .iter()
                .map(|psi| verify_lifting_bundle(ext, cover, psi, &phi).map(|a| a.holds()))
                .collect::<Result<Vec<_>>>()?;
            let bundles_ok = audits.iter().all(|&b| b);
            let torsor_ok = !s.exists || s.class_count == s.h1_order;
            ok &= bundles_ok && torsor_ok;
            entry["exists"] = json!(s.exists);
            entry["classes"] = json!(s.class_count);
            entry["solve"] = json!({
                "classification": to_value(s),
                "lifting_bundles_verified": bundles_ok,
                "class_count_equals_h1": torsor_ok,
            });
        }
        if let Some(b) = &brute {
            entry["brute"] = json!({
                "candidates": b.candidates.to_string(),
                "cocycles": b.cocycles,
                "classes": b.class_count(),
                "class_sizes": b.class_sizes,
                "bundle_classes": b.bundle_classes,
                "representatives": b.representatives.iter().map(|c| c.values().to_vec()).collect::<Vec<_>>(),
            });
            if solved.is_none() {
                entry["exists"] = json!(b.cocycles > 0);
                entry["classes"] = json!(b.class_count());
            }
        }
        if let (Some(s), Some(b)) = (&solved, &brute) {
            // both sides report the least member of each α(K⁰(A))-orbit
            let agree = s.exists == (b.cocycles > 0)
                && s.class_count == b.class_count() as u128
                && s.representatives == b.representatives;
            ok &= agree;
            entry["oracle_agreement"] = json!(agree);
        }
        entries.push(entry);
    }
    Ok((json!({ "liftings": entries }), ok))
}

/// Listed degree-1 cocycles (or the named one), plus the trivial cocycle of
/// every coefficient group when no cocycle is named.
fn roundtrip_subjects(scenario: &Scenario, options: &Options) -> Result<Vec<(String, CochainComplex, Cochain)>> {
    let mut out = Vec::new();
    if let Some(cname) = &options.cocycle {
        let c = scenario
            .cocycles
            .get(cname)
            .ok_or_else(|| Error::Invalid(format!("unknown cocycle `{cname}`")))?;
        if c.cochain.degree() != 1 {
            return Err(Error::Invalid(format!("cocycle `{cname}` has degree 0; round trips need transition cocycles")));
        }
        out.push((cname.clone(), scenario.complex(&c.coefficients)?, c.cochain.clone()));
        return Ok(out);
    }
    for name in scenario.coefficients.keys() {
        let k = scenario.complex(name)?;
        let id = k.identity(1)?;
        out.push((format!("identity:{name}"), k, id));
    }
    for (cname, c) in &scenario.cocycles {
        if c.cochain.degree() == 1 {
            out.push((cname.clone(), scenario.complex(&c.coefficients)?, c.cochain.clone()));
        }
    }
    Ok(out)
}

fn roundtrip(scenario: &Scenario, options: &Options) -> Result<(Value, bool)> {
    let mut entries = Vec::new();
    let mut ok = true;
    for (name, k, phi) in roundtrip_subjects(scenario, options)? {
        let report = roundtrip_check(&k, &phi, options.seed)?;
        ok &= report.passed();
        entries.push(json!({ "cocycle": name, "passed": report.passed(), "report": to_value(&report) }));
    }
    Ok((json!({ "roundtrips": entries }), ok))
}

/// One verification outcome; `passed = None` means skipped (budget).
#[derive(Debug, Clone, Serialize)]
struct Check {
    suite: &'static str,
    subject: String,
    passed: Option<bool>,
    detail: Value,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, suite: &'static str, subject: impl Into<String>, passed: bool, detail: Value) {
        self.checks.push(Check {
            suite,
            subject: subject.into(),
            passed: Some(passed),
            detail,
        });
    }

    /// Records the outcome of a fallible check; budget overruns are recorded
    /// as skipped, other errors as failures.
    fn record<T>(&mut self, suite: &'static str, subject: impl Into<String>, r: Result<T>, f: impl FnOnce(&T) -> (bool, Value)) {
        let subject = subject.into();
        match r {
            Ok(v) => {
                let (passed, detail) = f(&v);
                self.push(suite, subject, passed, detail);
            }
            Err(e @ Error::Budget { .. }) => self.checks.push(Check {
                suite,
                subject,
                passed: None,
                detail: json!({ "skipped": e.to_string() }),
            }),
            Err(e) => self.push(suite, subject, false, json!({ "error": e.to_string() })),
        }
    }
}

fn verify(scenario: &Scenario, options: &Options) -> Result<(Value, bool)> {
    let mut suite = Suite { checks: Vec::new() };
    let cover = &scenario.cover;
    let space = cover.space();
    let max = cover.max_degree();
    let budget = options.budget;

    let pid = max.min(3);
    let rep = verify_simplicial_identities(space, cover.cover(), pid);
    suite.push("identities", "simplicial", rep.passed(), to_value(&rep));
    let rep = verify_face_compat(space, cover.cover(), pid);
    suite.push("identities", "cover compatibility", rep.passed(), to_value(&rep));
    for (name, coeff) in &scenario.coefficients {
        let rep = verify_twist_identities(space, coeff.action(), pid);
        suite.push("identities", format!("twisting ({name})"), rep.passed(), to_value(&rep));
    }

    for (name, coeff) in abelian(scenario) {
        let k = CochainComplex::new(cover.clone(), coeff.clone())?;
        let a = AbelianComplex::new(k.clone())?;
        for p in 0..=max.saturating_sub(2).min(2) {
            let mut failures = 0;
            for t in 0..RANDOM_TRIALS as u64 {
                let phi = k.random(p, options.seed.wrapping_add(1000 * p as u64 + t))?;
                if !k.is_identity(&k.coboundary(&k.coboundary(&phi)?)?) {
                    failures += 1;
                }
            }
            suite.push(
                "coboundary squared",
                format!("{name}, degree {p}"),
                failures == 0,
                json!({ "samples": RANDOM_TRIALS, "failures": failures }),
            );
        }
        for p in 0..=(max - 1).min(2) {
            let h = a.cohomology(p)?;
            let sizes = census(&a, p)?;
            suite.record(
                "cohomology oracle",
                format!("{name}, degree {p}"),
                enumerate_orders(&k, p, budget),
                |e| {
                    let passed = e.cocycles.to_string() == sizes[p].cocycles
                        && e.coboundaries.to_string() == sizes[p].coboundaries
                        && e.cohomology() == h.order();
                    (passed, json!({ "enumerated": to_value(e), "census": to_value(&sizes[p]) }))
                },
            );
        }
        suite.record("TC vs H", name.clone(), nonabelian::tc1_h1_compare(&k, budget), |r| (r.agrees(), to_value(r)));
    }

    for (ename, named) in &scenario.extensions {
        let ext = &named.extension;
        if ext.b().group().is_abelian() {
            suite.record(
                "long exact sequence",
                ename.clone(),
                les_exactness_check(ext, cover, max.saturating_sub(2).min(2), budget),
                |r| (r.exact(), to_value(r)),
            );
        }
        suite.record("six-term sequence", ename.clone(), nonabelian::six_term_check(ext, cover, budget), |r| {
            (r.exact(), to_value(r))
        });
    }

    for (rname, refinement) in &scenario.refinements {
        let maps: Vec<_> = refinement.maps.iter().collect();
        for (sname, s) in maps.iter().skip(1) {
            let (r_name, r) = maps[0];
            for (name, coeff) in abelian(scenario) {
                let coarse = AbelianComplex::new(CochainComplex::new(cover.clone(), coeff.clone())?)?;
                let fine = AbelianComplex::new(CochainComplex::new(refinement.cover.clone(), coeff.clone())?)?;
                for p in 0..=(max - 1).min(2) {
                    suite.record(
                        "refinement",
                        format!("{rname}: {r_name} vs {sname}, {name}, degree {p}"),
                        refinement_action_check(&coarse, &fine, r, s, p, RANDOM_TRIALS, options.seed),
                        |r| (r.passed(), to_value(r)),
                    );
                }
            }
        }
    }

    let all = Options {
        extension: None,
        cocycle: None,
        ..options.clone()
    };
    if !scenario.extensions.is_empty() {
        for (ename, named, cname, phi) in pairs(scenario, &all)? {
            let ext = &named.extension;
            suite.record(
                "dd invariance",
                format!("{ename}, {cname}"),
                nonabelian::dd_invariance_check(ext, cover, &phi, DD_TRIALS, options.seed),
                |r| (r.holds(), to_value(r)),
            );
            let one = Options {
                extension: Some(ename.to_string()),
                cocycle: (cname != "identity").then(|| cname.clone()),
                oracle: Oracle::Both,
                ..options.clone()
            };
            suite.record("lifting oracle", format!("{ename}, {cname}"), lift(scenario, &one), |(v, ok)| {
                (*ok, v.clone())
            });
        }
    }

    for (name, k, phi) in roundtrip_subjects(scenario, &all)? {
        suite.record("roundtrip", name, roundtrip_check(&k, &phi, options.seed), |r| (r.passed(), to_value(r)));
    }

    let failed = suite.checks.iter().filter(|c| c.passed == Some(false)).count();
    let skipped = suite.checks.iter().filter(|c| c.passed.is_none()).count();
    let value = json!({
        "checks": to_value(&suite.checks),
        "total": suite.checks.len(),
        "failed": failed,
        "skipped": skipped,
    });
    Ok((value, failed == 0))
}
