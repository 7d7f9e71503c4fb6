//! Acceptance criteria 1-10, one line each. Expected values are the printed
//! ones. Criteria 1 and 2 fail on rows whose printed data is wrong; those
//! rows are pinned below, and the process exits non-zero on any failure
//! outside them.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng as _;

use nildegen::algebra::Flavor;
use nildegen::catalog::{CertKind, Corpus};
use nildegen::degeneration::{self, DegenReport};
use nildegen::extensions::{central_extension, coboundaries, h2_basis, h2_coordinates, same_class, Cocycle};
use nildegen::invariants::{derivation_dim, find_isomorphism};
use nildegen::linalg::Subspace;
use nildegen::nondegeneration::{self, CertReport, Outcome};
use nildegen::rng;
use nildegen::scalar::numeric::ten_to_minus;
use nildegen::scalar::{GaussRat, Ring};
use nildegen::spotcheck;
use nildegen::suite;

const DER_LIMIT: Duration = Duration::from_secs(10);
const DEGEN_LIMIT: Duration = Duration::from_secs(120);
const NONDEGEN_LIMIT: Duration = Duration::from_secs(300);
const SEARCH_BUDGET: usize = 10_000;
const BOREL_TRIALS: usize = 100;
const ACTION_DRAWS: usize = 200;
const RANDOM_EXTENSIONS: usize = 100;

/// Printed dim Der of the 3-dim nilpotent, 4-dim commutative and 5-dim
/// anticommutative lists.
const PRINTED_DER: &[(&str, usize)] = &[
    ("N1", 2), ("N2", 1), ("N3", 3), ("N4", 3), ("N5", 5), ("N6", 4), ("N7", 6), ("N8", 4),
    ("C01", 10), ("C02", 5), ("C03", 6), ("C04", 8), ("C05", 4), ("C06", 6), ("C07", 7), ("C08", 7),
    ("C09", 4), ("C10", 4), ("C11", 5), ("C12", 3), ("C13", 3), ("C14", 2), ("C15", 2), ("C16", 1),
    ("C17", 2), ("C18", 1), ("C19", 1), ("C20", 4), ("C21", 3), ("C22", 2), ("C23", 2), ("C24", 1),
    ("C25", 3), ("C26", 5), ("C27", 4), ("C28", 4), ("C29", 2), ("C30", 3),
    ("A01", 16), ("A02", 12), ("A03", 15), ("A04", 10), ("A05", 11), ("A06", 10), ("A07", 9), ("A08", 9),
    ("A09", 8), ("A10", 7), ("A11", 6),
];

const PRINTED_H2: &[(&str, Flavor, usize)] = &[
    ("C01_3", Flavor::Commutative, 5),
    ("C02_3", Flavor::Commutative, 4),
    ("C03_3", Flavor::Commutative, 4),
    ("C04_3", Flavor::Commutative, 5),
    ("A01_4", Flavor::Anticommutative, 5),
    ("A02_4", Flavor::Anticommutative, 4),
];

/// Failing items of the criteria that cannot pass as printed: three dim Der
/// misprints, three bases that reach the target only up to isomorphism,
/// and one row whose numeric error shrinks like t.
const KNOWN_FAILURES: &[(usize, &[&str])] =
    &[(1, &["A02", "A03", "A05"]), (2, &["comm4.11", "comm4.12", "comm4.17", "comm4.38"])];

const RIGID: &[(&str, &str)] = &[("nil3", "N2"), ("comm4", "C19"), ("anti5", "A11")];

struct Line {
    ok: bool,
    text: String,
    /// Ids behind a failure, when the criterion is row-based.
    failing: Vec<String>,
}

fn line(ok: bool, text: impl Into<String>) -> Line {
    Line { ok, text: text.into(), failing: Vec::new() }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn criterion_1(c: &Corpus) -> Line {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut ids = BTreeSet::new();
    let mut checked = 0;
    for &(id, printed) in PRINTED_DER {
        let e = c.get(id).expect("catalog entry");
        let samples: Vec<Option<GaussRat>> =
            if e.is_family() { e.default_samples().into_iter().map(Some).collect() } else { vec![None] };
        if e.is_family() && samples.len() < 3 {
            bad.push(format!("{id}: only {} admissible samples", samples.len()));
        }
        for s in &samples {
            let d = derivation_dim(&e.algebra(s.as_ref()).expect("instance"));
            checked += 1;
            if d != printed {
                ids.insert(id.to_string());
                bad.push(format!("{id}{}: {d} != {printed}", s.as_ref().map_or(String::new(), |v| format!("({v})"))));
            }
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took < DER_LIMIT;
    let mut l = line(ok, format!("{checked} instances in {} (limit {}), mismatches: [{}]", secs(took), secs(DER_LIMIT), bad.join(", ")));
    l.failing = ids.into_iter().collect();
    if took >= DER_LIMIT || bad.len() != l.failing.len() {
        l.failing.push("runtime or sampling".into());
    }
    l
}

fn is_printed_row(id: &str) -> bool {
    ["nil3.", "comm4.", "comm4-index.", "anti5."].iter().any(|p| id.starts_with(p))
}

fn numeric_ok(r: &DegenReport) -> bool {
    let tol = ten_to_minus(10);
    let tol2 = &tol * &tol;
    r.samples.iter().filter_map(|s| s.numeric.as_ref()).all(|t| {
        let sizes: Vec<_> = t.points.iter().map(|p| p.deviation.norm_sq()).collect();
        let shrinks = sizes.windows(2).all(|w| w[1] < w[0] || (w[0].is_zero() && w[1].is_zero()));
        t.points.last().is_some_and(|p| p.k == 8) && shrinks && sizes.last().is_some_and(|s| *s < tol2)
    })
}

fn criterion_2(c: &Corpus, degens: &[DegenReport], took: Duration) -> Line {
    let printed: Vec<&DegenReport> = degens.iter().filter(|r| is_printed_row(&r.id)).collect();
    let mut bad = Vec::new();
    for r in &printed {
        if !r.literal_pass() || !numeric_ok(r) {
            bad.push(r.id.clone());
        }
    }
    let counts: Vec<String> = ["nil3.", "comm4.", "comm4-index.", "anti5."]
        .iter()
        .map(|p| format!("{}{}", p, printed.iter().filter(|r| r.id.starts_with(p)).count()))
        .collect();
    let extra_bad: Vec<&str> =
        degens.iter().filter(|r| r.id.starts_with("extra.") && !r.literal_pass()).map(|r| r.id.as_str()).collect();
    let complete = printed.len() == c.witnesses.iter().filter(|w| is_printed_row(&w.id)).count();
    let ok = bad.is_empty() && took < DEGEN_LIMIT && complete;
    let mut failing = bad.clone();
    if took >= DEGEN_LIMIT || !complete || !extra_bad.is_empty() {
        failing.push("runtime, coverage or supplementary rows".into());
    }
    let mut l = line(
        ok,
        format!(
            "rows {} in {} (limit {}), numeric tolerance 1e-10 at t=1e-8; failing: [{}]; supplementary rows failing: [{}]",
            counts.join(" "),
            secs(took),
            secs(DEGEN_LIMIT),
            bad.join(", "),
            extra_bad.join(", ")
        ),
    );
    l.failing = failing;
    l
}

fn criterion_3(certs: &[CertReport], took: Duration) -> Line {
    let mut bad = Vec::new();
    let mut chain = 0;
    for r in certs {
        let borel_ok = r.borel.iter().all(|(_, b)| b.trials == BOREL_TRIALS && b.stable == BOREL_TRIALS);
        let searched = r.kind != CertKind::Chain
            || r.instances.iter().all(|i| match i.outcome {
                Outcome::NotFound { trials } => trials == SEARCH_BUDGET,
                Outcome::Proved(_) => true,
                Outcome::Refuted(_) => false,
            });
        if r.kind == CertKind::Chain {
            chain += 1;
        }
        if !r.passed() || !borel_ok || !searched || (r.kind == CertKind::Chain && r.borel.is_empty()) {
            bad.push(r.id.clone());
        }
    }
    let ok = bad.is_empty() && took < NONDEGEN_LIMIT;
    line(
        ok,
        format!(
            "{} certificates ({chain} closed-set), Borel {BOREL_TRIALS}/{BOREL_TRIALS}, search none/{SEARCH_BUDGET}, {} (limit {}); failing: [{}]",
            certs.len(),
            secs(took),
            secs(NONDEGEN_LIMIT),
            bad.join(", ")
        ),
    )
}

fn criterion_4(degens: &[DegenReport]) -> Line {
    let mut strict = 0;
    let mut family_rows = 0;
    let mut bad = Vec::new();
    for r in degens.iter().filter(|r| r.exact_pass()) {
        for s in &r.samples {
            let Some(src) = &s.source_alg else {
                family_rows += 1;
                continue;
            };
            let (ds, dt) = (derivation_dim(src), derivation_dim(&s.target_alg));
            if ds < dt {
                strict += 1;
            } else if ds > dt || find_isomorphism(src, &s.target_alg, 200, 0).is_none() {
                bad.push(format!("{} {}: {ds} -> {dt}", r.id, s.label));
            }
        }
    }
    line(
        bad.is_empty(),
        format!("{strict} proper degenerations strictly increase dim Der; {family_rows} parametric-index samples have no single source; exceptions: [{}]", bad.join(", ")),
    )
}

fn criterion_5(c: &Corpus) -> Line {
    let mut got = Vec::new();
    let mut ok = true;
    for &(id, flavor, want) in PRINTED_H2 {
        let a = c.get(id).unwrap().algebra(None).unwrap();
        let d = h2_basis(&a, flavor).len();
        ok &= d == want;
        got.push(format!("{id} {d}/{want}"));
    }
    line(ok, format!("dim H2 computed/printed: {}", got.join(", ")))
}

fn criterion_6(c: &Corpus) -> Line {
    let a02 = c.get("A02_4").unwrap().algebra(None).unwrap();
    let a11 = c.get("A11").unwrap().algebra(None).unwrap();
    let ext = central_extension(&a02, &[Cocycle::delta(4, 3, 4, Flavor::Anticommutative)]);
    let iso = find_isomorphism(&ext, &a11, 2000, 0);
    let verified = iso.as_ref().is_some_and(|i| ext.change_basis(&i.p).as_ref() == Some(&a11));
    let mut rows = 0;
    let mut bad = Vec::new();
    for fam in &c.automorphisms {
        for r in spotcheck::orbit_rows(c, fam, 0) {
            rows += 1;
            if !r.verdict.is_ok() {
                bad.push(r.id);
            }
        }
    }
    line(
        verified && bad.is_empty() && rows > 0,
        format!("A02 + D34 {} A11; {rows} orbit representatives matched, failing: [{}]", if verified { "≅" } else { "not matched to" }, bad.join(", ")),
    )
}

fn criterion_7(c: &Corpus) -> Line {
    let mut parts = Vec::new();
    let mut ok = true;
    for base in ["C01_3", "C02_3", "C03_3", "C04_3", "A02_4"] {
        let Some(fam) = c.automorphisms.iter().find(|f| f.base == base) else {
            ok = false;
            parts.push(format!("{base}: no closed forms"));
            continue;
        };
        let (a, ns) = spotcheck::nabla(c, fam).expect("cocycles");
        for (k, comp) in fam.components.iter().enumerate() {
            let ch = spotcheck::action_check(&a, &ns, comp, ACTION_DRAWS, 7, &format!("acceptance {base} {k}"));
            let good = ch.draws == ACTION_DRAWS && ch.not_automorphism == 0 && ch.mismatches.is_empty();
            ok &= good;
            parts.push(format!("{base}[{}] {} draws, {} mismatches", k + 1, ch.draws, ch.not_automorphism + ch.mismatches.len()));
        }
    }
    line(ok, format!("closed forms agree exactly: {}", parts.join(", ")))
}

fn criterion_8(c: &Corpus, degens: &[DegenReport]) -> Line {
    let pre = suite::preorders(c, degens);
    let mut ok = true;
    let mut parts = Vec::new();
    for &(class, want) in RIGID {
        let max = pre[class].maximal();
        ok &= max == [want.to_string()];
        parts.push(format!("{class} {{{}}}", max.join(", ")));
    }
    let index: Vec<&DegenReport> = degens.iter().filter(|r| r.id.starts_with("comm4-index.")).collect();
    let index_ok = index.len() == 6 && index.iter().all(|r| r.literal_pass());
    ok &= index_ok;
    line(ok, format!("maximal elements {}; family rows {}/6 verified", parts.join(", "), index.iter().filter(|r| r.literal_pass()).count()))
}

fn criterion_9(c: &Corpus) -> Line {
    let mut failures = Vec::new();
    let mut count = [0usize; 4];
    for seed in common::seeds() {
        let mut r = rng::seeded(seed);
        for k in 0..RANDOM_EXTENSIONS {
            // annihilator formula
            let (id, a, flavor) = common::catalog_algebra(c, &mut r);
            let m = a.dim();
            let s = r.gen_range(1..=2);
            let thetas: Vec<_> = (0..s).map(|_| common::random_form(&mut r, m, flavor)).collect();
            let ext = central_extension(&a, &thetas);
            let base = common::joint_perp(m, &thetas).intersect(&common::annihilator_oracle(&a));
            let mut vs: Vec<Vec<GaussRat>> = base.basis().iter().map(|v| {
                let mut w = v.clone();
                w.resize(m + s, GaussRat::zero());
                w
            }).collect();
            for j in m..m + s {
                let mut e = vec![GaussRat::zero(); m + s];
                e[j] = GaussRat::one();
                vs.push(e);
            }
            count[0] += 1;
            if ext.annihilator() != Subspace::span(m + s, &vs) {
                failures.push(format!("annihilator seed {seed} #{k} on {id}"));
            }

            // basis-change action law
            let x = common::random_algebra(&mut r, 4, Flavor::Neither);
            let (p, q) = (rng::invertible(&mut r, 4), rng::invertible(&mut r, 4));
            count[1] += 1;
            if x.change_basis(&p).and_then(|y| y.change_basis(&q)) != x.change_basis(&p.mul(&q)) {
                failures.push(format!("action law seed {seed} #{k}"));
            }

            // flavor preservation
            let form_flavor = [Flavor::Neither, Flavor::Commutative, Flavor::Anticommutative][r.gen_range(0..3)];
            let theta = common::random_form(&mut r, m, form_flavor);
            let ext = central_extension(&a, std::slice::from_ref(&theta));
            let sym = theta.matrix == theta.matrix.transpose();
            let anti = theta.matrix == theta.matrix.transpose().map(|v| v.neg());
            count[2] += 1;
            if ext.is_commutative() != (a.is_commutative() && sym) || ext.is_anticommutative() != (a.is_anticommutative() && anti) {
                failures.push(format!("flavor seed {seed} #{k} on {id}"));
            }

            // quotient well-definedness
            let b2 = coboundaries(&a);
            let h2 = h2_basis(&a, flavor);
            let theta = common::random_form(&mut r, m, flavor);
            let shifted = theta.add(&common::random_coboundary(&mut r, &a, flavor));
            count[3] += 1;
            if !same_class(&b2, &theta, &shifted) || h2_coordinates(&b2, &h2, &theta) != h2_coordinates(&b2, &h2, &shifted) {
                failures.push(format!("quotient seed {seed} #{k} on {id}"));
            }
        }
    }
    line(
        failures.is_empty(),
        format!(
            "seeds {:?}: annihilator {}, action law {}, flavor {}, quotient {}; failures: [{}]",
            common::seeds(),
            count[0],
            count[1],
            count[2],
            count[3],
            failures.join(", ")
        ),
    )
}

fn criterion_10(c: &Corpus, degens: &[DegenReport], certs: &[CertReport]) -> Line {
    let row = suite::consistency_row(degens, certs);
    let mut ok = row.verdict.is_ok();
    let mut parts = vec![row.details.first().cloned().unwrap_or_default()];
    let mut pairs = BTreeSet::new();
    for (x, y) in &c.errata.disputed {
        pairs.insert((x.clone(), y.clone()));
        let direct = suite::direct_searches(c, x, y, suite::DISPUTED_BUDGET_FACTOR * SEARCH_BUDGET, 0);
        let r = suite::disputed_row(x, y, degens, certs, &direct);
        let no_witness = !c.witnesses.iter().any(|w| w.source.id == *x && w.target.id == *y);
        let direct_none = !direct.is_empty() && direct.iter().all(|(_, s)| s.found.is_none());
        ok &= r.verdict.is_ok() && no_witness && direct_none;
        parts.push(format!("{x} -/-> {y}: {} (direct search none in {}: {direct_none})", r.verdict, suite::DISPUTED_BUDGET_FACTOR * SEARCH_BUDGET));
    }
    let want: BTreeSet<_> = [("C09", "C26"), ("C26", "C08")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    ok &= pairs == want;
    line(ok, parts.join("; "))
}

fn main() {
    let c = common::corpus();
    let mut lines = Vec::new();
    lines.push(criterion_1(&c));

    let ws: Vec<_> = c.witnesses.iter().collect();
    let start = Instant::now();
    let degens = degeneration::verify_all(&c, &ws, &degeneration::Options::default(), true);
    let degen_time = start.elapsed();
    lines.push(criterion_2(&c, &degens, degen_time));

    let certs: Vec<_> = c.certificates.iter().collect();
    let opts = nondegeneration::Options { budget: SEARCH_BUDGET, borel_trials: BOREL_TRIALS, seed: 0 };
    let start = Instant::now();
    let cert_reports = nondegeneration::verify_all(&c, &certs, &opts, true);
    let cert_time = start.elapsed();
    lines.push(criterion_3(&cert_reports, cert_time));

    lines.push(criterion_4(&degens));
    lines.push(criterion_5(&c));
    lines.push(criterion_6(&c));
    lines.push(criterion_7(&c));
    lines.push(criterion_8(&c, &degens));
    lines.push(criterion_9(&c));
    lines.push(criterion_10(&c, &degens, &cert_reports));

    for (i, l) in lines.iter().enumerate() {
        println!("criterion {}: {} {}", i + 1, if l.ok { "PASS" } else { "FAIL" }, l.text);
    }
    let failed: Vec<usize> = lines.iter().enumerate().filter(|(_, l)| !l.ok).map(|(i, _)| i + 1).collect();
    println!("acceptance: {}/{} criteria pass", lines.len() - failed.len(), lines.len());
    let mut unexpected = Vec::new();
    for &n in &failed {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n).map(|(_, ids)| *ids).unwrap_or(&[]);
        let extra: Vec<&String> = lines[n - 1].failing.iter().filter(|id| !known.contains(&id.as_str())).collect();
        if known.is_empty() || !extra.is_empty() || lines[n - 1].failing.is_empty() {
            unexpected.push(format!("{n} {extra:?}"));
        } else {
            println!("criterion {n} fails only on the pinned rows {known:?}");
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {}", unexpected.join("; "));
        std::process::exit(1);
    }
}
