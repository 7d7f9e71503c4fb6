//! Checks on the extension data: cohomology dimensions, the algebras named
//! by orbit representatives, and the closed-form automorphism actions.

use std::collections::HashMap;

use crate::algebra::{Algebra, Flavor};
use crate::catalog::{eval_const, AutComponent, AutFamily, CatalogEntry, Corpus};
use crate::extensions::{central_extension, coboundaries, h2_basis, h2_coordinates, ts_check, Cocycle, TsVerdict};
use crate::invariants::find_isomorphism;
use crate::linalg::{Matrix, Subspace};
use crate::report::{Row, Verdict};
use crate::rng;
use crate::scalar::{Expr, GaussRat, Ring};

pub const ACTION_DRAWS: usize = 200;
pub const ISO_BUDGET: usize = 2000;

fn flavor_of(e: &CatalogEntry) -> Flavor {
    e.flavor
}

/// `nabla` cocycles of a family in the file's order.
pub fn nabla(corpus: &Corpus, fam: &AutFamily) -> Result<(Algebra<GaussRat>, Vec<Cocycle<GaussRat>>), String> {
    let e = corpus.get(&fam.base).map_err(|e| e.to_string())?;
    let a = e.algebra(None).map_err(|e| e.to_string())?;
    let ns = fam
        .nabla
        .iter()
        .map(|s| Cocycle::parse_delta(e.dim, s, flavor_of(e)).ok_or_else(|| format!("bad cocycle `{s}`")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((a, ns))
}

/// `dim H^2` of the base against the listed generators, which must be
/// independent modulo coboundaries.
pub fn cohomology_row(corpus: &Corpus, fam: &AutFamily) -> Row {
    let id = format!("h2.{}", fam.base);
    let (a, ns) = match nabla(corpus, fam) {
        Ok(x) => x,
        Err(e) => return Row::new(id, "cohomology", Verdict::Fail, "exact", vec![e]),
    };
    let flavor = ns.first().map_or(Flavor::Neither, |c| c.flavor);
    let m = a.dim();
    let h2 = h2_basis(&a, flavor);
    let b2 = coboundaries(&a);
    let mut flat: Vec<Vec<GaussRat>> = b2.basis().to_vec();
    flat.extend(ns.iter().map(|c| c.flat()));
    let span = Subspace::span(m * m, &flat);
    let independent = span.dim() == b2.dim() + ns.len();
    let spans = h2.iter().all(|c| span.contains(&c.flat()));
    let ok = independent && spans && h2.len() == ns.len();
    Row::from_bool(
        id,
        "cohomology",
        ok,
        "exact",
        vec![format!(
            "dim H2 = {} ({}), listed {} ({}independent mod B2, {}spanning)",
            h2.len(),
            flavor.as_str(),
            ns.len(),
            if independent { "" } else { "not " },
            if spans { "" } else { "not " }
        )],
    )
}

/// Coefficients of `n1, n2, ...` in a linear combination.
fn combo_coefficients(combo: &Expr, k: usize, vars: &HashMap<String, GaussRat>) -> Result<Vec<GaussRat>, String> {
    let at = |hot: Option<usize>| {
        let mut v = vars.clone();
        for i in 0..k {
            v.insert(format!("n{}", i + 1), if Some(i) == hot { GaussRat::one() } else { GaussRat::zero() });
        }
        eval_const(combo, &v).map_err(|e| e.to_string())
    };
    let c0 = at(None)?;
    if !c0.is_zero() {
        return Err(format!("`{combo}` is not linear in the generators"));
    }
    (0..k).map(|i| at(Some(i))).collect()
}

/// Extension along each orbit representative against the named algebra, by
/// an exactly verified isomorphism.
pub fn orbit_rows(corpus: &Corpus, fam: &AutFamily, seed: u64) -> Vec<Row> {
    let (a, ns) = match nabla(corpus, fam) {
        Ok(x) => x,
        Err(e) => return vec![Row::new(format!("orbit.{}", fam.base), "extension", Verdict::Fail, "exact", vec![e])],
    };
    let flavor = ns.first().map_or(Flavor::Neither, |c| c.flavor);
    let mut rows = Vec::new();
    for o in &fam.orbits {
        let id = format!("orbit.{}.{}", fam.base, o.target);
        let samples: Vec<HashMap<String, GaussRat>> = match &o.target.arg {
            Some(_) => match corpus.get(&o.target.id) {
                Ok(t) => t
                    .default_samples()
                    .into_iter()
                    .map(|s| HashMap::from([("a".to_string(), s)]))
                    .collect(),
                Err(e) => {
                    rows.push(Row::new(id, "extension", Verdict::Fail, "exact", vec![e.to_string()]));
                    continue;
                }
            },
            None => vec![HashMap::new()],
        };
        let mut ok = true;
        let mut details = Vec::new();
        for vars in &samples {
            let label = vars.get("a").map_or(String::new(), |v| format!("a = {v}: "));
            let theta = match combo_coefficients(&o.combo, ns.len(), vars) {
                Ok(c) => c.iter().zip(&ns).fold(Cocycle::zero(a.dim(), flavor), |acc, (x, n)| acc.add(&n.scale(x))),
                Err(e) => {
                    ok = false;
                    details.push(format!("{label}{e}"));
                    continue;
                }
            };
            let ts = ts_check(&a, std::slice::from_ref(&theta));
            let ext = central_extension(&a, &[theta]);
            let target = match corpus.instance(&o.target, vars) {
                Ok(t) => t,
                Err(e) => {
                    ok = false;
                    details.push(format!("{label}{e}"));
                    continue;
                }
            };
            match find_isomorphism(&ext, &target, ISO_BUDGET, seed) {
                Some(iso) if ts == TsVerdict::Ok => {
                    details.push(format!("{label}{} + {} ≅ {} via {:?}", fam.base, o.combo, o.target, iso.method))
                }
                Some(_) => {
                    ok = false;
                    details.push(format!("{label}representative fails the T_s condition: {ts:?}"));
                }
                None => {
                    ok = false;
                    details.push(format!("{label}no isomorphism onto {} found in {ISO_BUDGET} trials", o.target));
                }
            }
        }
        rows.push(Row::from_bool(id, "extension", ok, "exact", details));
    }
    rows
}

fn aut_matrix(comp: &AutComponent, vars: &HashMap<String, GaussRat>) -> Result<Matrix<GaussRat>, String> {
    let rows = comp
        .rows
        .iter()
        .map(|r| r.iter().map(|e| eval_const(e, vars).map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(rows))
}

/// Outcome of the action oracle on one automorphism component.
#[derive(Clone, Debug, Default)]
pub struct ActionCheck {
    pub draws: usize,
    pub not_automorphism: usize,
    pub mismatches: Vec<String>,
}

/// Random parameters for `phi` and `theta`: `phi` must be an automorphism
/// and the coordinates of `phi^T theta phi` must equal the closed forms.
pub fn action_check(
    base: &Algebra<GaussRat>,
    ns: &[Cocycle<GaussRat>],
    comp: &AutComponent,
    draws: usize,
    seed: u64,
    label: &str,
) -> ActionCheck {
    let mut r = rng::substream(seed, label);
    let b2 = coboundaries(base);
    let mut syms: Vec<String> = comp.rows.iter().flatten().flat_map(|e| e.symbols()).collect();
    syms.sort();
    syms.dedup();
    let mut out = ActionCheck::default();
    while out.draws < draws {
        let mut vars: HashMap<String, GaussRat> = syms.iter().map(|s| (s.clone(), rng::nonzero(&mut r))).collect();
        let Ok(phi) = aut_matrix(comp, &vars) else {
            out.mismatches.push("automorphism entries do not evaluate".into());
            return out;
        };
        if phi.det().is_zero() {
            continue;
        }
        out.draws += 1;
        if base.change_basis(&phi).as_ref() != Some(base) {
            out.not_automorphism += 1;
            continue;
        }
        let alphas: Vec<GaussRat> = (0..ns.len()).map(|_| rng::entry(&mut r)).collect();
        for (i, a) in alphas.iter().enumerate() {
            vars.insert(format!("a{}", i + 1), a.clone());
        }
        let theta = alphas.iter().zip(ns).fold(Cocycle::zero(base.dim(), ns[0].flavor), |acc, (x, n)| acc.add(&n.scale(x)));
        let Some(coords) = h2_coordinates(&b2, ns, &theta.act(&phi)) else {
            out.mismatches.push("image leaves the listed cohomology".into());
            continue;
        };
        for (k, e) in &comp.actions {
            let want = eval_const(e, &vars);
            let got = coords.get(k - 1);
            if want.as_ref().ok() != got && out.mismatches.len() < 5 {
                out.mismatches.push(format!(
                    "coordinate {k}: closed form {}, computed {}",
                    want.map_or_else(|e| e.to_string(), |w| w.to_string()),
                    got.map_or("missing".to_string(), |g| g.to_string())
                ));
            }
        }
    }
    out
}

pub fn action_rows(corpus: &Corpus, fam: &AutFamily, draws: usize, seed: u64) -> Vec<Row> {
    let (a, ns) = match nabla(corpus, fam) {
        Ok(x) => x,
        Err(e) => return vec![Row::new(format!("aut.{}", fam.base), "automorphism", Verdict::Fail, "exact", vec![e])],
    };
    fam.components
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            let id = if fam.components.len() > 1 { format!("aut.{}.{}", fam.base, ci + 1) } else { format!("aut.{}", fam.base) };
            let c = action_check(&a, &ns, comp, draws, seed, &id);
            let ok = c.not_automorphism == 0 && c.mismatches.is_empty();
            let mut details = vec![format!(
                "{} draws, {} automorphisms, {} closed-form coordinates checked per draw",
                c.draws,
                c.draws - c.not_automorphism,
                comp.actions.len()
            )];
            details.extend(c.mismatches);
            Row::from_bool(id, "automorphism", ok, "exact", details)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_combination_coefficients() {
        let e = Expr::parse("a n2 + n3 + n4").unwrap();
        let vars = HashMap::from([("a".to_string(), GaussRat::from_i64(5))]);
        let c = combo_coefficients(&e, 4, &vars).unwrap();
        assert_eq!(c, vec![GaussRat::zero(), GaussRat::from_i64(5), GaussRat::one(), GaussRat::one()]);
        assert!(combo_coefficients(&Expr::parse("n1 + 1").unwrap(), 2, &vars).is_err());
    }

    #[test]
    fn embedded_spot_checks() {
        let c = Corpus::embedded();
        for fam in &c.automorphisms {
            let row = cohomology_row(&c, fam);
            assert!(row.verdict.is_ok(), "{row:?}");
            for row in orbit_rows(&c, fam, 1) {
                assert!(row.verdict.is_ok(), "{row:?}");
            }
            for row in action_rows(&c, fam, 20, 1) {
                assert!(row.verdict.is_ok(), "{row:?}");
            }
        }
    }
}
