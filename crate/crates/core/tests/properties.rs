mod common;

use proptest::prelude::*;
use rand::Rng as _;

use nildegen::algebra::{Algebra, Flavor};
use nildegen::degeneration::{self, clear_fractional_powers, compare_limits, constant_basis, lift};
use nildegen::extensions::{annihilator_formula_check, central_extension, coboundaries, h2_basis, same_class, Cocycle};
use nildegen::invariants::{derivation_dim, find_isomorphism};
use nildegen::linalg::{Matrix, Subspace};
use nildegen::rng::{self, SeededRng};
use nildegen::scalar::numeric::{eval_at, ten_to_minus};
use nildegen::scalar::{parse_gauss, Field, GaussRat, Limit, Ring, TExpr, Q};

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-20i64..20, 1i64..9, -20i64..20, 1i64..9)
        .prop_map(|(a, b, c, d)| GaussRat::from_ratio(a, b).add(&GaussRat::from_ratio(c, d).mul(&GaussRat::i())))
}

/// Sum of a few monomials with non-negative rational exponents, sometimes
/// times `sqrt(1 + t)`.
fn random_texpr(r: &mut SeededRng) -> TExpr<GaussRat> {
    let mut x = TExpr::zero();
    for _ in 0..r.gen_range(1..=3) {
        let q = [1, 2, 3][r.gen_range(0..3)];
        let e = Q::new(r.gen_range(0..4 * q), q);
        x = x.add(&TExpr::monomial(rng::nonzero(r), e));
    }
    if r.gen_bool(0.3) {
        let root = TExpr::one().add(&TExpr::t()).rad(2).expect("radical");
        x = x.mul(&root);
    }
    x
}

fn laurent_basis(r: &mut SeededRng, n: usize) -> Matrix<TExpr<GaussRat>> {
    loop {
        let m = Matrix::new(
            n,
            n,
            (0..n * n)
                .map(|_| {
                    if r.gen_bool(0.5) {
                        TExpr::zero()
                    } else {
                        TExpr::monomial(rng::small(r), Q::from_integer(r.gen_range(-2..3)))
                    }
                })
                .collect(),
        );
        if !m.det().is_zero() {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in gauss(), b in gauss(), c in gauss()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !b.is_zero() {
            prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
        }
        prop_assert_eq!(a.sub(&a), GaussRat::zero());
    }

    #[test]
    fn gauss_print_parse_round_trip(a in gauss()) {
        prop_assert_eq!(parse_gauss(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn limit_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let (x, y) = (random_texpr(&mut r), random_texpr(&mut r));
        if let (Limit::Value(lx), Limit::Value(ly)) = (x.limit_at_zero(), y.limit_at_zero()) {
            prop_assert_eq!(x.mul(&y).limit_at_zero(), Limit::Value(lx.mul(&ly)));
        }
    }

    #[test]
    fn numeric_values_approach_the_limit(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let x = random_texpr(&mut r);
        if let Limit::Value(l) = x.limit_at_zero() {
            let devs: Vec<_> = [4u32, 6, 8]
                .iter()
                .map(|&k| eval_at(&x, &GaussRat::from_rational(ten_to_minus(k)), 60).unwrap().sub(&l).norm_sq())
                .collect();
            let constant = x.terms().iter().all(|t| *t.exp.numer() == 0 && t.rads.is_empty());
            prop_assert!(constant || (devs[1] < devs[0] && devs[2] < devs[1]), "{:?}", devs);
        }
    }

    #[test]
    fn clearing_fractional_powers_keeps_limits(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let n = 2;
        let src = Algebra::new(n, (0..n * n * n).map(|_| random_texpr(&mut r)).collect());
        let p = Matrix::new(n, n, (0..n * n).map(|_| random_texpr(&mut r)).collect());
        let (s2, p2, l) = clear_fractional_powers(&src, &p);
        prop_assert!(l >= 1);
        for (a, b) in src.constants().iter().zip(s2.constants()).chain(p.entries().iter().zip(p2.entries())) {
            prop_assert_eq!(a.limit_at_zero(), b.limit_at_zero());
            prop_assert!(b.terms().iter().all(|t| *t.exp.denom() == 1));
        }
    }

    #[test]
    fn basis_change_is_a_right_action(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let a = common::random_algebra(&mut r, 4, Flavor::Neither);
        let (p, q) = (rng::invertible(&mut r, 4), rng::invertible(&mut r, 4));
        let twice = a.change_basis(&p).and_then(|b| b.change_basis(&q));
        prop_assert_eq!(twice, a.change_basis(&p.mul(&q)));
    }

    #[test]
    fn laurent_transport_composes(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let n = 3;
        let a = lift(&common::random_algebra(&mut r, n, Flavor::Neither));
        let e = laurent_basis(&mut r, n);
        let f = constant_basis(&rng::invertible(&mut r, n));
        let (num, det) = a.transport(&e.mul(&f));
        let (n1, d1) = a.transport(&e);
        let (n2, d2) = n1.transport(&f);
        let d_seq = d1.mul(&d2);
        for (x, y) in num.constants().iter().zip(n2.constants()) {
            prop_assert_eq!(x.mul(&d_seq), y.mul(&det));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_survive_basis_change(seed in any::<u64>()) {
        let c = common::corpus();
        let mut r = rng::seeded(seed);
        let (id, a, _) = common::catalog_algebra(&c, &mut r);
        let p = rng::invertible(&mut r, a.dim());
        let b = a.change_basis(&p).unwrap();
        prop_assert_eq!(a.annihilator().dim(), b.annihilator().dim(), "{}", id);
        prop_assert_eq!(a.nilpotency_index(), b.nilpotency_index(), "{}", id);
        prop_assert_eq!(a.flavor(), b.flavor(), "{}", id);
        prop_assert_eq!(derivation_dim(&a), derivation_dim(&b), "{}", id);
    }

    #[test]
    fn annihilator_is_an_ideal(seed in any::<u64>()) {
        let c = common::corpus();
        let mut r = rng::seeded(seed);
        let (_, a, _) = common::catalog_algebra(&c, &mut r);
        let p = rng::invertible(&mut r, a.dim());
        let a = a.change_basis(&p).unwrap();
        let ann = a.annihilator();
        let whole = Subspace::whole(a.dim());
        prop_assert!(a.subspace_product(&ann, &whole).is_zero());
        prop_assert!(a.subspace_product(&whole, &ann).is_zero());
        prop_assert_eq!(ann, common::annihilator_oracle(&a));
    }

    #[test]
    fn anticommutative_products_need_only_unordered_pairs(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let a = common::random_algebra(&mut r, 5, Flavor::Anticommutative);
        let u = Subspace::span(5, &(0..3).map(|_| (0..5).map(|_| rng::small(&mut r)).collect()).collect::<Vec<_>>());
        let b = u.basis();
        let mut prods = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                prods.push(a.multiply(&b[i], &b[j]));
            }
        }
        prop_assert_eq!(a.subspace_product(&u, &u), Subspace::span(5, &prods));
    }

    #[test]
    fn found_isomorphisms_are_exact(seed in any::<u64>()) {
        let c = common::corpus();
        let mut r = rng::seeded(seed);
        let (_, a, _) = common::catalog_algebra(&c, &mut r);
        let b = a.change_basis(&rng::invertible(&mut r, a.dim())).unwrap();
        let iso = find_isomorphism(&a, &b, 400, seed);
        if let Some(iso) = iso {
            prop_assert_eq!(a.change_basis(&iso.p), Some(b));
        }
    }

    #[test]
    fn cocycle_action_is_a_right_action(seed in any::<u64>()) {
        let mut r = rng::seeded(seed);
        let flavor = [Flavor::Neither, Flavor::Commutative, Flavor::Anticommutative][r.gen_range(0..3)];
        let theta = common::random_form(&mut r, 4, flavor);
        let (p, q) = (rng::invertible(&mut r, 4), rng::invertible(&mut r, 4));
        let image = theta.act(&p);
        prop_assert!(image.is_consistent());
        prop_assert_eq!(image.act(&q), theta.act(&p.mul(&q)));
    }

    #[test]
    fn identity_witness_reaches_itself(seed in any::<u64>()) {
        let c = common::corpus();
        let mut r = rng::seeded(seed);
        let (_, a, _) = common::catalog_algebra(&c, &mut r);
        let t = degeneration::transport(&lift(&a), &constant_basis(&Matrix::identity(a.dim()))).unwrap();
        let (_, limits) = t.limits().unwrap();
        prop_assert!(compare_limits(&limits, &a).is_empty());
    }
}

/// Criterion-9 properties, each under the three fixed seeds.
#[test]
fn extension_properties_under_fixed_seeds() {
    let c = common::corpus();
    for seed in common::seeds() {
        let mut r = rng::seeded(seed);
        for k in 0..100 {
            let (id, a, flavor) = common::catalog_algebra(&c, &mut r);
            let m = a.dim();
            let thetas: Vec<_> = (0..r.gen_range(1..=2)).map(|_| common::random_form(&mut r, m, flavor)).collect();
            assert!(annihilator_formula_check(&a, &thetas), "annihilator formula, seed {seed} #{k} on {id}");

            let theta = thetas[0].clone();
            let ext = central_extension(&a, std::slice::from_ref(&theta));
            match flavor {
                Flavor::Commutative => assert!(ext.is_commutative(), "{id}"),
                Flavor::Anticommutative => assert!(ext.is_anticommutative(), "{id}"),
                Flavor::Neither => {}
            }
            let b2 = coboundaries(&a);
            let shifted = theta.add(&common::random_coboundary(&mut r, &a, flavor));
            assert!(same_class(&b2, &theta, &shifted), "class of θ + δf, seed {seed} #{k} on {id}");
        }
    }
}

#[test]
fn asymmetric_forms_break_commutativity() {
    let c = common::corpus();
    let a = c.get("C04_3").unwrap().algebra(None).unwrap();
    let theta = Cocycle::delta(3, 1, 2, Flavor::Neither);
    assert!(!central_extension(&a, &[theta]).is_commutative());
    let sym = Cocycle::delta(3, 1, 2, Flavor::Commutative);
    assert!(central_extension(&a, &[sym]).is_commutative());
    let anti = Cocycle::delta(3, 1, 2, Flavor::Anticommutative);
    assert!(!central_extension(&a, &[anti]).is_commutative());
}

#[test]
fn h2_classes_ignore_coboundaries() {
    let c = common::corpus();
    for fam in &c.automorphisms {
        let e = c.get(&fam.base).unwrap();
        let a = e.algebra(None).unwrap();
        let b2 = coboundaries(&a);
        for h in h2_basis(&a, e.flavor) {
            assert!(!b2.contains(&h.flat()), "{}: basis element is a coboundary", fam.base);
        }
    }
}
