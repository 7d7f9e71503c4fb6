//! The full verification run: every catalog, witness and certificate row,
//! then the checks derived from their results.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::Algebra;
use crate::catalog::{instance_name, AlgRef, CertKind, Corpus, Witness};
use crate::degeneration::{self, DegenReport, Mode};
use crate::graph::{class_preorder, figure_coverage, Coverage, Preorder};
use crate::invariants::{derivation_dim, find_isomorphism, fingerprint};
use crate::nondegeneration::{self, CertReport, ClosedSet, Outcome, SearchOutcome};
use crate::report::{Report, Row, Verdict};
use crate::scalar::GaussRat;
use crate::spotcheck;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub search_budget: usize,
    pub borel_trials: usize,
    pub digits: u32,
    pub action_draws: usize,
    pub parallel: bool,
    /// Row ids, id prefixes (`nil3`, `comm4-non`) or kinds; empty runs all.
    pub only: Vec<String>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            search_budget: nondegeneration::DEFAULT_SEARCH_BUDGET,
            borel_trials: nondegeneration::DEFAULT_BOREL_TRIALS,
            digits: degeneration::DEFAULT_DIGITS,
            action_draws: spotcheck::ACTION_DRAWS,
            parallel: true,
            only: Vec::new(),
        }
    }
}

fn group(id: &str) -> &str {
    id.split('.').next().unwrap_or(id)
}

impl SuiteOptions {
    pub fn selects(&self, id: &str, kind: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|s| s == id || s == group(id) || s == kind)
    }

    fn degen_options(&self) -> degeneration::Options {
        degeneration::Options { digits: self.digits, seed: self.seed, ..Default::default() }
    }

    fn cert_options(&self) -> nondegeneration::Options {
        nondegeneration::Options { budget: self.search_budget, borel_trials: self.borel_trials, seed: self.seed }
    }
}

/// Classes with a drawn graph, in display order.
pub const VARIETIES: [&str; 3] = ["nil3", "comm4", "anti5"];

/// Printed dim Der against the multiplication table, at every default
/// sample for families.
pub fn der_row(corpus: &Corpus, id: &str) -> Option<Row> {
    let e = corpus.get(id).ok()?;
    let printed = e.der?;
    let samples: Vec<Option<_>> = if e.is_family() { e.default_samples().into_iter().map(Some).collect() } else { vec![None] };
    let mut computed = Vec::new();
    let mut details = Vec::new();
    let mut broken = false;
    for s in &samples {
        match e.algebra(s.as_ref()) {
            Ok(a) => computed.push((s.clone(), derivation_dim(&a))),
            Err(err) => {
                broken = true;
                details.push(format!("{err}"));
            }
        }
    }
    for (s, d) in &computed {
        let name = instance_name(id, s.as_ref());
        details.push(format!("{name}: dim Der = {d}, printed {printed}"));
    }
    let all_equal = |v: usize| !computed.is_empty() && computed.iter().all(|(_, d)| *d == v);
    let verdict = if broken {
        Verdict::Fail
    } else if all_equal(printed) {
        Verdict::Pass
    } else if corpus.errata.der.get(id).is_some_and(|&v| all_equal(v)) {
        details.push("known misprint: the computed value is listed in the errata".to_string());
        Verdict::PassWithNote
    } else {
        Verdict::Fail
    };
    Some(Row::new(format!("der.{id}"), "der", verdict, "exact", details))
}

/// Every entry of a class is nilpotent and has the class flavor at every
/// sample.
pub fn nilpotency_row(corpus: &Corpus, class: &str) -> Row {
    let flavor = nondegeneration::variety_flavor(corpus, class);
    let mut bad = Vec::new();
    let mut count = 0;
    for (name, a) in class_instances(corpus, class, &mut bad) {
        count += 1;
        if a.nilpotency_index().is_none() {
            bad.push(format!("{name} is not nilpotent"));
        }
        if !a.satisfies(flavor) {
            bad.push(format!("{name} is not {}", flavor.as_str()));
        }
    }
    let mut details = vec![format!("{count} instances, nilpotent and {}", flavor.as_str())];
    details.extend(bad.iter().cloned());
    Row::from_bool(format!("nilpotent.{class}"), "catalog", bad.is_empty(), "exact", details)
}

fn class_instances(corpus: &Corpus, class: &str, errors: &mut Vec<String>) -> Vec<(String, Algebra<GaussRat>)> {
    let mut out = Vec::new();
    for e in corpus.class(class) {
        let samples: Vec<Option<GaussRat>> = if e.is_family() { e.default_samples().into_iter().map(Some).collect() } else { vec![None] };
        for s in samples {
            match e.algebra(s.as_ref()) {
                Ok(a) => out.push((instance_name(&e.id, s.as_ref()), a)),
                Err(err) => errors.push(err.to_string()),
            }
        }
    }
    out
}

pub const DISTINCT_ISO_BUDGET: usize = 300;

/// Sampled instances of a class are pairwise non-isomorphic. Pairs with
/// equal fingerprints go to an isomorphism search; an isomorphism between
/// different entries fails, one between members of a family is reported,
/// and a pair the search cannot join stays unresolved.
pub fn distinctness_row(corpus: &Corpus, class: &str, seed: u64) -> Row {
    let mut errors = Vec::new();
    let inst = class_instances(corpus, class, &mut errors);
    let prints: Vec<_> = inst.iter().map(|(_, a)| fingerprint(a)).collect();
    let (mut separated, mut collisions, mut unresolved) = (0, Vec::new(), Vec::new());
    let base = |n: &str| n.split('(').next().unwrap_or(n).to_string();
    for i in 0..inst.len() {
        for j in i + 1..inst.len() {
            if prints[i] != prints[j] {
                separated += 1;
                continue;
            }
            let (x, y) = (&inst[i].0, &inst[j].0);
            match find_isomorphism(&inst[i].1, &inst[j].1, DISTINCT_ISO_BUDGET, seed) {
                Some(_) => collisions.push((base(x) == base(y), format!("{x} ≅ {y}"))),
                None => unresolved.push(format!("{x}, {y}")),
            }
        }
    }
    let mut details = vec![format!(
        "{} instances: {separated} pairs separated by invariants, {} isomorphic, {} unresolved",
        inst.len(),
        collisions.len(),
        unresolved.len()
    )];
    details.extend(errors.iter().cloned());
    details.extend(collisions.iter().map(|(_, c)| format!("isomorphic: {c}")));
    details.extend(unresolved.iter().map(|u| format!("same invariants, no isomorphism found: {u}")));
    let verdict = if !errors.is_empty() || collisions.iter().any(|(same, _)| !same) {
        Verdict::Fail
    } else if collisions.is_empty() && unresolved.is_empty() {
        Verdict::Pass
    } else {
        Verdict::PassWithNote
    };
    Row::new(format!("distinct.{class}"), "catalog", verdict, "exact", details)
}

pub fn degeneration_row(corpus: &Corpus, r: &DegenReport) -> Row {
    let mut details = r.details();
    let all_iso = r.error.is_none() && !r.samples.is_empty() && r.samples.iter().all(|s| s.exact_pass() || s.isomorphic_limit);
    let verdict = if r.literal_pass() {
        Verdict::Pass
    } else if r.exact_pass() {
        details.push(format!(
            "the {} limit is exact; the numeric trace alone misses its tolerance",
            if r.mode() == Mode::Numeric { "series" } else { r.mode().as_str() }
        ));
        Verdict::PassWithNote
    } else if all_iso {
        details.push("limit is isomorphic to the target but not equal to it".to_string());
        if let Some(new) = corpus.errata.replacement(&r.id) {
            details.push(format!("replaced by {new}"));
        }
        Verdict::PassWithNote
    } else {
        Verdict::Fail
    };
    let mode = if r.exact_pass() && r.mode() == Mode::Numeric { "series+numeric" } else { r.mode().as_str() };
    Row::new(r.id.clone(), "degeneration", verdict, mode, details)
}

pub fn nondegeneration_row(r: &CertReport) -> Row {
    let verdict = if r.passed() && r.semi_decision() {
        Verdict::PassWithNote
    } else if r.passed() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let mode = match r.kind {
        crate::catalog::CertKind::Chain => "search",
        _ => "exact",
    };
    Row::new(r.id.clone(), "nondegeneration", verdict, mode, r.details())
}

/// Verified edges `(source id, target id, witness id)`: rows whose exact
/// limit equals the target at every sample.
pub fn verified_edges<'a>(corpus: &'a Corpus, reports: &'a [DegenReport]) -> Vec<(&'a str, &'a str, &'a str)> {
    reports
        .iter()
        .filter(|r| r.exact_pass())
        .filter_map(|r| {
            let w = corpus.witness(&r.id)?;
            Some((w.source.id.as_str(), w.target.id.as_str(), r.id.as_str()))
        })
        .collect()
}

/// Instance-level graph: `C20(0) -> C26` rather than `C20 -> C26`.
pub fn instance_graph(reports: &[DegenReport]) -> Preorder {
    let mut g = Preorder::default();
    for r in reports {
        for s in r.samples.iter().filter(|s| s.exact_pass()) {
            g.add(&s.source, &s.target, &r.id);
        }
    }
    g
}

fn generic_der(corpus: &Corpus, id: &str) -> Option<usize> {
    let e = corpus.get(id).ok()?;
    e.default_samples().iter().filter_map(|s| e.algebra(Some(s)).ok()).map(|a| derivation_dim(&a)).min()
}

/// `dim Der` strictly increases along every verified proper degeneration.
/// A parametric index degenerates the whole family, whose closure has one
/// dimension more than a member's orbit, so there `dim Der` may stay put.
pub fn monotonicity_row(corpus: &Corpus, class: &str, reports: &[DegenReport]) -> Row {
    let (mut checked, mut family) = (0, 0);
    let mut bad = Vec::new();
    for r in reports {
        let Some(w) = corpus.witness(&r.id) else { continue };
        if corpus.get(&w.source.id).map_or(true, |e| e.class != class) {
            continue;
        }
        for s in r.samples.iter().filter(|s| s.exact_pass()) {
            let tgt = derivation_dim(&s.target_alg);
            let (src, ok) = match &s.source_alg {
                Some(a) => {
                    checked += 1;
                    let d = derivation_dim(a);
                    (Some(d), d < tgt)
                }
                None => {
                    family += 1;
                    let d = generic_der(corpus, &w.source.id);
                    (d, d.is_some_and(|d| d <= tgt))
                }
            };
            if !ok {
                let d = src.map_or("?".to_string(), |d| d.to_string());
                bad.push(format!("{} {}: {} -> {} has dim Der {d} -> {tgt}", r.id, s.label, s.source, s.target));
            }
        }
    }
    let mut details = vec![format!(
        "{checked} verified samples strictly increasing, {family} family rows non-decreasing, {} exceptions",
        bad.len()
    )];
    details.extend(bad.iter().cloned());
    Row::from_bool(format!("monotonicity.{class}"), "monotonicity", bad.is_empty() && checked > 0, "exact", details)
}

/// Maximal elements of the verified preorder against the marked rigid
/// nodes, which must dominate every other algebra.
pub fn rigidity_row(corpus: &Corpus, class: &str, reports: &[DegenReport]) -> Row {
    let id = format!("rigidity.{class}");
    let Some(fig) = corpus.figure(class) else {
        return Row::new(id, "rigidity", Verdict::Fail, "closure", vec![format!("no figure for {class}")]);
    };
    let g = class_preorder(corpus, class, verified_edges(corpus, reports));
    let maximal = g.maximal();
    let undominated = g.undominated(&maximal);
    let mut want = fig.rigid.clone();
    want.sort();
    let ok = maximal == want && undominated.is_empty();
    let details = vec![
        format!("maximal elements: {}", maximal.join(", ")),
        format!("expected rigid: {}", want.join(", ")),
        format!("{} algebras, {} verified edges, undominated: {}", g.nodes.len(), g.edges.len(), if undominated.is_empty() { "none".to_string() } else { undominated.join(", ") }),
    ];
    Row::from_bool(id, "rigidity", ok, "closure", details)
}

/// Every drawn edge realized by a witness or a chain of witnesses.
pub fn coverage_row(corpus: &Corpus, class: &str, reports: &[DegenReport]) -> Row {
    let id = format!("coverage.{class}");
    let Some(fig) = corpus.figure(class) else {
        return Row::new(id, "coverage", Verdict::Fail, "closure", vec![format!("no figure for {class}")]);
    };
    let g = class_preorder(corpus, class, verified_edges(corpus, reports));
    let cov = figure_coverage(fig, &g);
    let mut details = Vec::new();
    let (mut direct, mut composite, mut missing) = (0, 0, 0);
    for (e, c) in &cov {
        let note = e.note.as_ref().map(|n| format!(" [{n}]")).unwrap_or_default();
        match c {
            Coverage::Direct(_) => direct += 1,
            Coverage::Composite(p) => {
                composite += 1;
                details.push(format!("{} -> {}{note} via {}", e.from, e.to, p.join(" -> ")));
            }
            Coverage::Missing => {
                missing += 1;
                details.push(format!("{} -> {}{note}: no verified route", e.from, e.to));
            }
        }
    }
    details.insert(0, format!("{} drawn edges: {direct} direct, {composite} composite, {missing} missing", cov.len()));
    Row::from_bool(id, "coverage", missing == 0, "closure", details)
}

/// Passing non-degeneration instances `(source, target, certificate)`.
pub fn refuted_pairs(certs: &[CertReport]) -> Vec<(String, String, String)> {
    certs
        .iter()
        .filter(|c| c.passed())
        .flat_map(|c| {
            c.instances
                .iter()
                .filter(|i| !matches!(i.outcome, Outcome::Refuted(_)))
                .map(|i| (i.source.clone(), i.target.clone(), c.id.clone()))
        })
        .collect()
}

/// No certified non-degeneration is contradicted by a chain of verified
/// witnesses.
pub fn consistency_row(reports: &[DegenReport], certs: &[CertReport]) -> Row {
    let g = instance_graph(reports);
    let pairs = refuted_pairs(certs);
    let mut conflicts = Vec::new();
    for (x, y, cert) in &pairs {
        if let Some(p) = g.path(x, y) {
            conflicts.push(format!("{cert} says {x} -/-> {y}, witnesses give {}", p.join(" -> ")));
        }
    }
    let mut details = vec![format!(
        "{} certified pairs against {} verified instance edges: {} conflicts",
        pairs.len(),
        g.edges.len(),
        conflicts.len()
    )];
    details.extend(conflicts.iter().cloned());
    Row::from_bool("consistency", "consistency", conflicts.is_empty() && !pairs.is_empty(), "closure", details)
}

/// `X -/-> Y` follows from `Z ->* X` and a certified `Z -/-> Y`; also no
/// witness chain may reach `Y` from `X`.
/// The disputed pairs get a wider search than the certificate rows.
pub const DISPUTED_BUDGET_FACTOR: usize = 10;

/// The chain certificates aimed at `y` whose set holds `x` as written, each
/// with a search for a basis of `y` inside the set.
pub fn direct_searches(corpus: &Corpus, x: &str, y: &str, budget: usize, seed: u64) -> Vec<(String, SearchOutcome)> {
    let (Ok(xr), Ok(yr)) = (AlgRef::parse(x), AlgRef::parse(y)) else {
        return Vec::new();
    };
    let none = HashMap::new();
    let (Ok(xa), Ok(ya), Ok(xe)) = (corpus.instance(&xr, &none), corpus.instance(&yr, &none), corpus.get(&xr.id)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for cert in &corpus.certificates {
        if cert.kind != CertKind::Chain || !cert.targets.iter().any(|(t, _)| t.id == yr.id) {
            continue;
        }
        let uses_a = cert.polys.iter().any(|(l, r)| l.symbols().into_iter().chain(r.symbols()).any(|s| s == "a"));
        let a = match nondegeneration::constant_param(&cert.source) {
            Ok(a) => a,
            Err(_) => continue,
        };
        if uses_a && a.is_none() {
            continue;
        }
        let set = ClosedSet::new(xa.dim(), xe.flavor, cert.chains.clone(), cert.polys.clone(), a);
        if xa.dim() != ya.dim() || !set.contains(&xa) {
            continue;
        }
        let s = nondegeneration::search_basis_into_r(&ya, &set, budget, seed);
        out.push((cert.id.clone(), s));
    }
    out
}

pub fn disputed_row(
    x: &str,
    y: &str,
    reports: &[DegenReport],
    certs: &[CertReport],
    direct: &[(String, SearchOutcome)],
) -> Row {
    let id = format!("consistency.{x}-{y}");
    let g = instance_graph(reports);
    let mut details = Vec::new();
    let contradiction = g.path(x, y);
    if let Some(p) = &contradiction {
        details.push(format!("witness chain {}", p.join(" -> ")));
    }
    let mut separated = None;
    for (z, t, cert) in refuted_pairs(certs) {
        if t != y {
            continue;
        }
        if z == x {
            separated = Some(format!("{cert}: {x} -/-> {y} directly"));
            break;
        }
        if let Some(p) = g.path(&z, x) {
            separated = Some(format!("{} and {cert}: {z} -/-> {y}, so {x} -/-> {y}", p.join(" -> ")));
            break;
        }
    }
    for (cert, s) in direct {
        match &s.found {
            None => {
                let line = format!("{x} lies in R of {cert}; no basis of {y} into R in {} trials (semi-decision)", s.trials);
                details.push(line.clone());
                separated.get_or_insert(line);
            }
            Some(_) => details.push(format!("{x} and {y} both lie in R of {cert}")),
        }
    }
    match &separated {
        Some(s) if !details.contains(s) => details.push(s.clone()),
        Some(_) => {}
        None => details.push(format!("no certificate separates {x} from {y}")),
    }
    let verdict = if contradiction.is_some() {
        Verdict::Fail
    } else if separated.is_some() {
        Verdict::Pass
    } else {
        Verdict::Unresolved
    };
    Row::new(id, "consistency", verdict, "closure", details)
}

/// Everything the run produced, kept for the graph and rigidity commands.
#[derive(Debug, Default)]
pub struct SuiteRun {
    pub report: Report,
    pub degenerations: Vec<DegenReport>,
    pub certificates: Vec<CertReport>,
}

pub fn witnesses_for<'a>(corpus: &'a Corpus, opts: &SuiteOptions, all: bool) -> Vec<&'a Witness> {
    corpus.witnesses.iter().filter(|w| all || opts.selects(&w.id, "degeneration")).collect()
}

pub fn run(corpus: &Corpus, opts: &SuiteOptions) -> SuiteRun {
    let mut rows = Vec::new();
    let derived = ["monotonicity", "rigidity", "coverage", "consistency"];
    let needs_all = opts.only.is_empty() || derived.iter().any(|k| opts.only.iter().any(|s| s == k || s.starts_with(&format!("{k}."))));

    for e in &corpus.algebras {
        if opts.selects(&format!("der.{}", e.id), "der") {
            rows.extend(der_row(corpus, &e.id));
        }
    }

    for class in VARIETIES {
        if opts.selects(&format!("nilpotent.{class}"), "catalog") {
            rows.push(nilpotency_row(corpus, class));
        }
        if opts.selects(&format!("distinct.{class}"), "catalog") {
            rows.push(distinctness_row(corpus, class, opts.seed));
        }
    }

    let ws = witnesses_for(corpus, opts, needs_all);
    let degens = degeneration::verify_all(corpus, &ws, &opts.degen_options(), opts.parallel);
    for r in &degens {
        if opts.selects(&r.id, "degeneration") {
            rows.push(degeneration_row(corpus, r));
        }
    }

    let certs: Vec<_> = corpus
        .certificates
        .iter()
        .filter(|c| needs_all || opts.selects(&c.id, "nondegeneration"))
        .collect();
    let cert_reports = nondegeneration::verify_all(corpus, &certs, &opts.cert_options(), opts.parallel);
    for r in &cert_reports {
        if opts.selects(&r.id, "nondegeneration") {
            rows.push(nondegeneration_row(r));
        }
    }

    for fam in &corpus.automorphisms {
        let h2 = spotcheck::cohomology_row(corpus, fam);
        if opts.selects(&h2.id, "cohomology") {
            rows.push(h2);
        }
        if opts.selects(&format!("orbit.{}", fam.base), "extension") || opts.selects("orbit", "extension") {
            rows.extend(spotcheck::orbit_rows(corpus, fam, opts.seed).into_iter().filter(|r| opts.selects(&r.id, &r.kind)));
        }
        if opts.selects(&format!("aut.{}", fam.base), "automorphism") || opts.selects("aut", "automorphism") {
            rows.extend(
                spotcheck::action_rows(corpus, fam, opts.action_draws, opts.seed)
                    .into_iter()
                    .filter(|r| opts.selects(&r.id, &r.kind)),
            );
        }
    }

    if needs_all {
        let mut derived_rows = Vec::new();
        for class in VARIETIES {
            derived_rows.push(monotonicity_row(corpus, class, &degens));
        }
        for class in VARIETIES {
            derived_rows.push(coverage_row(corpus, class, &degens));
        }
        for class in VARIETIES {
            derived_rows.push(rigidity_row(corpus, class, &degens));
        }
        derived_rows.push(consistency_row(&degens, &cert_reports));
        for (x, y) in &corpus.errata.disputed {
            if !opts.selects(&format!("consistency.{x}-{y}"), "consistency") {
                continue;
            }
            let direct = direct_searches(corpus, x, y, DISPUTED_BUDGET_FACTOR * opts.search_budget, opts.seed);
            derived_rows.push(disputed_row(x, y, &degens, &cert_reports, &direct));
        }
        rows.extend(derived_rows.into_iter().filter(|r| opts.selects(&r.id, &r.kind)));
    }

    SuiteRun { report: Report { rows }, degenerations: degens, certificates: cert_reports }
}

/// Verified edges of each variety, for graph output.
pub fn preorders(corpus: &Corpus, reports: &[DegenReport]) -> BTreeMap<String, Preorder> {
    VARIETIES
        .iter()
        .map(|c| (c.to_string(), class_preorder(corpus, c, verified_edges(corpus, reports))))
        .collect()
}
