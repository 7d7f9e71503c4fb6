mod common;

use std::collections::{BTreeSet, HashMap};

use nildegen::algebra::{Algebra, Flavor};
use nildegen::catalog::{AlgRef, Certificate, Corpus, Witness};
use nildegen::degeneration::{self, Options};
use nildegen::extensions::{central_extension, coboundaries, h2_coordinates, Cocycle};
use nildegen::graph::{check_dot, node_level, to_dot};
use nildegen::invariants::{find_isomorphism, fingerprint};
use nildegen::linalg::Matrix;
use nildegen::nondegeneration::{self, search_basis_into_r, ClosedSet};
use nildegen::rng;
use nildegen::scalar::{Expr, GaussRat, Ring};
use nildegen::spotcheck;
use nildegen::suite::{self, SuiteOptions};

fn witness<'a>(c: &'a Corpus, source: &str, target: &str) -> &'a Witness {
    c.witnesses
        .iter()
        .find(|w| w.source.id == source && w.target.id == target && !w.id.starts_with("extra."))
        .unwrap_or_else(|| panic!("no witness {source} -> {target}"))
}

fn cert<'a>(c: &'a Corpus, id: &str) -> &'a Certificate {
    c.certificates.iter().find(|x| x.id == id).unwrap()
}

fn alg(c: &Corpus, id: &str) -> Algebra<GaussRat> {
    c.instance(&AlgRef::parse(id).unwrap(), &HashMap::new()).unwrap()
}

fn chain_set(c: &Corpus, id: &str) -> ClosedSet {
    let x = cert(c, id);
    let e = c.get(&x.source.id).unwrap();
    ClosedSet::new(e.dim, e.flavor, x.chains.clone(), x.polys.clone(), None)
}

#[test]
fn a02_extension_along_d34_is_a11() {
    let c = common::corpus();
    let ext = central_extension(&alg(&c, "A02_4"), &[Cocycle::delta(4, 3, 4, Flavor::Anticommutative)]);
    let a11 = alg(&c, "A11");
    let iso = find_isomorphism(&ext, &a11, 2000, 0).expect("isomorphism");
    assert_eq!(ext.change_basis(&iso.p), Some(a11));
}

#[test]
fn c01_first_orbit_lands_on_c11() {
    let c = common::corpus();
    let f = Flavor::Commutative;
    let theta = Cocycle::delta(3, 1, 2, f).add(&Cocycle::delta(3, 3, 3, f));
    let ext = central_extension(&alg(&c, "C01_3"), &[theta]);
    let c11 = alg(&c, "C11");
    assert_ne!(fingerprint(&ext), fingerprint(&alg(&c, "C09")));
    let iso = find_isomorphism(&ext, &c11, 2000, 0).expect("isomorphism onto C11");
    assert_eq!(ext.change_basis(&iso.p), Some(c11));
}

/// Coordinate of the top generator under an explicit automorphism,
/// computed by hand against the closed form.
fn top_coordinate(c: &Corpus, base: &str, phi: Matrix<GaussRat>, k: usize) -> (GaussRat, GaussRat) {
    let fam = c.automorphisms.iter().find(|f| f.base == base).unwrap();
    let (a, ns) = spotcheck::nabla(c, fam).unwrap();
    assert_eq!(a.change_basis(&phi).as_ref(), Some(&a), "not an automorphism");
    let alphas: Vec<GaussRat> = (1..=ns.len() as i64).map(|i| GaussRat::from_i64(i + 1)).collect();
    let theta = alphas.iter().zip(&ns).fold(Cocycle::zero(a.dim(), ns[0].flavor), |acc, (x, n)| acc.add(&n.scale(x)));
    let coords = h2_coordinates(&coboundaries(&a), &ns, &theta.act(&phi)).unwrap();
    (coords[k - 1].clone(), alphas[k - 1].clone())
}

#[test]
fn a02_top_coefficient_scales_by_x3_z2() {
    let c = common::corpus();
    let (x, z, y, u, v, h, g) = (3, 5, 1, -2, 7, 4, -1);
    let q = GaussRat::from_i64;
    let phi = Matrix::from_rows(vec![
        vec![q(x), q(0), q(0), q(0)],
        vec![q(y), q(z), q(0), q(0)],
        vec![q(u), q(v), q(x * z), q(0)],
        vec![q(h), q(g), q(x * v), q(x * x * z)],
    ]);
    let (got, a4) = top_coordinate(&c, "A02_4", phi, 4);
    assert_eq!(got, a4.mul(&q(x * x * x * z * z)));
}

#[test]
fn c02_third_coefficient_scales_by_x6() {
    let c = common::corpus();
    let (x, y) = (2, 3);
    let q = GaussRat::from_i64;
    let phi = Matrix::from_rows(vec![vec![q(x), q(0), q(0)], vec![q(0), q(x * x), q(0)], vec![q(y), q(0), q(x.pow(4))]]);
    let (got, a3) = top_coordinate(&c, "C02_3", phi, 3);
    assert_eq!(got, a3.mul(&q(x.pow(6))));
}

#[test]
fn corrupted_closed_form_is_caught() {
    let c = common::corpus();
    let fam = c.automorphisms.iter().find(|f| f.base == "C02_3").unwrap();
    let (a, ns) = spotcheck::nabla(&c, fam).unwrap();
    let mut comp = fam.components[0].clone();
    let (k, e) = comp.actions[2].clone();
    comp.actions[2] = (k, Expr::parse(&format!("2 ({e})")).unwrap());
    let bad = spotcheck::action_check(&a, &ns, &comp, 20, 3, "negative control");
    assert!(!bad.mismatches.is_empty());
    let good = spotcheck::action_check(&a, &ns, &fam.components[0], 20, 3, "negative control");
    assert!(good.mismatches.is_empty());
}

#[test]
fn printed_degeneration_examples() {
    let c = common::corpus();
    let r = degeneration::verify_witness(&c, witness(&c, "N2", "N3"), &Options::default());
    assert!(r.literal_pass() && r.mode() == degeneration::Mode::Exact, "{:?}", r.details());

    let r = degeneration::verify_witness(&c, witness(&c, "C23", "C20"), &Options::default());
    assert!(r.literal_pass(), "{:?}", r.details());
    assert!(r.samples.iter().any(|s| s.label.contains("a = 4")), "{:?}", r.details());
}

#[test]
fn n6_has_no_basis_in_the_n3_set() {
    let c = common::corpus();
    let set = chain_set(&c, "nil3-non.02");
    assert!(set.contains(&alg(&c, "N3")));
    assert!(search_basis_into_r(&alg(&c, "N3"), &set, 10, 0).found.is_some());
    assert!(search_basis_into_r(&alg(&c, "N6"), &set, 10_000, 0).found.is_none());
}

#[test]
fn c26_has_no_basis_in_the_c05_set() {
    let c = common::corpus();
    let set = chain_set(&c, "comm4-non.01");
    assert!(set.contains(&alg(&c, "C05")));
    assert!(search_basis_into_r(&alg(&c, "C26"), &set, 10_000, 0).found.is_none());
}

#[test]
fn c24_does_not_degenerate_to_c13() {
    let c = common::corpus();
    let x = cert(&c, "comm4-non.14");
    assert!(x.targets.iter().any(|(t, _)| t.id == "C13"));
    let r = nondegeneration::verify_certificate(&c, x, &nondegeneration::Options { budget: 2000, borel_trials: 100, seed: 0 });
    assert!(r.passed(), "{:?}", r.details());
}

#[test]
fn scaling_keeps_chain_membership() {
    let c = common::corpus();
    let mut r = rng::seeded(4);
    for x in c.certificates.iter().filter(|x| x.polys.is_empty() && !x.chains.is_empty()) {
        let set = chain_set(&c, &x.id);
        let src = c.instance(&x.source, &HashMap::new());
        let Ok(src) = src else { continue };
        let n = src.dim();
        let mut d = Matrix::zeros(n, n);
        for i in 0..n {
            d.set(i, i, rng::nonzero(&mut r));
        }
        assert_eq!(set.contains(&src), set.contains(&src.change_basis(&d).unwrap()), "{}", x.id);
    }
}

fn quick_options(seed: u64) -> SuiteOptions {
    SuiteOptions {
        seed,
        search_budget: 300,
        borel_trials: 20,
        action_draws: 10,
        only: ["nil3", "nil3-non", "h2", "der"].map(String::from).to_vec(),
        ..Default::default()
    }
}

#[test]
fn reports_are_deterministic() {
    let c = common::corpus();
    let a = suite::run(&c, &quick_options(9)).report.to_text(true);
    let b = suite::run(&c, &SuiteOptions { parallel: false, ..quick_options(9) }).report.to_text(true);
    assert_eq!(a, b);
    assert!(a.contains("nil3.01"));
}

#[test]
fn graphs_are_valid_dot() {
    let c = common::corpus();
    let ws: Vec<_> = c.witnesses.iter().collect();
    let reports = degeneration::verify_all(&c, &ws, &Options::default(), true);
    let pre = suite::preorders(&c, &reports);
    for name in suite::VARIETIES {
        let fig = c.figure(name).unwrap();
        let dot = to_dot(&c, fig, &pre[name]);
        check_dot(&dot).unwrap_or_else(|e| panic!("{name}: {e}"));
        for (id, _) in &fig.nodes {
            assert!(dot.contains(&format!("\"{id}\"")), "{name}: node {id} missing");
        }
    }
}

fn levels(c: &Corpus, name: &str) -> BTreeSet<usize> {
    c.figure(name).unwrap().nodes.iter().map(|(id, _)| node_level(c, id).unwrap()).collect()
}

#[test]
fn graph_levels_follow_dim_der() {
    let c = common::corpus();
    assert_eq!(levels(&c, "nil3"), BTreeSet::from([8, 7, 6, 5, 4, 3, 0]));
    assert_eq!(levels(&c, "comm4"), BTreeSet::from([15, 14, 13, 12, 11, 10, 9, 8, 6, 0]));
    // the drawn anti5 ranks carry the A03 misprint: 13 where the table gives 12
    let drawn = BTreeSet::from([19, 18, 17, 16, 15, 14, 13, 10, 9, 0]);
    let anti = levels(&c, "anti5");
    assert_eq!(drawn.symmetric_difference(&anti).copied().collect::<Vec<_>>(), vec![12, 13]);
}
