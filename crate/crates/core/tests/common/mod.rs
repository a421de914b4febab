//! Shared fixtures for the integration tests: instance generators, linear
//! coordinate changes and the generated germ corpus.
#![allow(dead_code)]

use germcalc::atlas;
use germcalc::ops::{self, Unfolding};
use germcalc::{parse_multigerm, parse_poly, Poly, QMultiGerm, QPoly, Scalar, StabilizationPolicy, Q};
use proptest::prelude::*;

pub fn pol() -> StabilizationPolicy {
    StabilizationPolicy::default()
}

pub fn germ(text: &str) -> QMultiGerm {
    parse_multigerm(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn poly(text: &str) -> QPoly {
    parse_poly(text).unwrap_or_else(|e| panic!("{text}: {e}")).0
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-4i64..=-1, 1i64..=4]
}

/// A stable corank-1 germ of known type, as DSL text plus the expected
/// `k_i` of its branches.
#[derive(Clone, Debug)]
pub struct StableInstance {
    pub text: String,
    pub ks: Vec<usize>,
}

/// Stable normal forms with random nonzero integers on the unfolding
/// terms (and on the relative position of the branches).
pub fn stable_instance() -> impl Strategy<Value = StableInstance> {
    let inst = |text: String, ks: Vec<usize>| StableInstance { text, ks };
    prop_oneof![
        nonzero().prop_map(move |a| inst(format!("(x, y, {a}*z^2)"), vec![1])),
        nonzero().prop_map(move |a| inst(format!("(x, y, z^3{a:+}*y*z)"), vec![2])),
        (nonzero(), nonzero())
            .prop_map(move |(a, b)| inst(format!("(x, y, z^4{a:+}*x*z{b:+}*y*z^2)"), vec![3])),
        nonzero().prop_map(move |a| inst(format!("{{(x, y, z^2); (x, z^2{a:+}*x, y)}}"), vec![1, 1])),
        (nonzero(), nonzero()).prop_map(move |(a, b)| inst(
            format!("{{(x, y, z^3{a:+}*y*z); (z^2{b:+}*y, y, x)}}"),
            vec![2, 1]
        )),
        (nonzero(), nonzero())
            .prop_filter("planes in general position", |(a, b)| a * b != 1)
            .prop_map(move |(a, b)| inst(
                format!("{{(x, y, z^2); (x, z^2{a:+}*x, y); (z^2{b:+}*x, x, y)}}"),
                vec![1, 1, 1]
            )),
        nonzero().prop_map(move |a| inst(format!("(x, y^2, {a}*x*y)"), vec![1])),
        nonzero().prop_map(move |a| inst(format!("{{(x, y, 0); (x, {a}*x, y)}}"), vec![0, 0])),
    ]
}

/// Random unimodular integer matrix: a permutation times an elementary
/// shear `I + c e_ij`.
///
/// Products of several shears are just as valid, but they make every
/// component dense and the exact elimination then costs seconds per germ;
/// one shear already mixes coordinates across the normal form.
pub fn unimodular(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (
        Just((0..dim).collect::<Vec<usize>>()).prop_shuffle(),
        0..dim,
        1..dim,
        -2i64..=2,
    )
        .prop_map(move |(perm, i, offset, c)| {
            let j = (i + offset) % dim;
            let mut shear = vec![vec![0i64; dim]; dim];
            for (k, row) in shear.iter_mut().enumerate() {
                row[k] = 1;
            }
            shear[i][j] = c;
            perm.iter().map(|&p| shear[p].clone()).collect()
        })
}

fn linear_polys(m: &[Vec<i64>], nvars: usize) -> Vec<QPoly> {
    m.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .fold(Poly::zero(nvars), |acc, (j, c)| {
                    &acc + &Poly::var(nvars, j).scale(&Q::from_int(*c))
                })
        })
        .collect()
}

/// Applies `target` after every branch and `sources[i]` before branch `i`.
pub fn linear_change(f: &QMultiGerm, target: &[Vec<i64>], sources: &[Vec<Vec<i64>>]) -> QMultiGerm {
    let mut g = f.compose_target(&linear_polys(target, f.p())).unwrap();
    for (i, s) in sources.iter().enumerate().take(f.r()) {
        g = g.compose_source(i, &linear_polys(s, f.n())).unwrap();
    }
    g
}

/// Every atlas instance with parameter at most `cap`, labelled.
pub fn atlas_instances(cap: u32) -> Vec<(String, atlas::ParamValue, QMultiGerm)> {
    let mut out = Vec::new();
    for e in atlas::entries() {
        for v in e.params_up_to(cap) {
            out.push((e.name.to_string(), v, e.instantiate(&v).unwrap()));
        }
    }
    out
}

/// The generated corpus: atlas instances up to parameter 3 and the outputs
/// of every construction on a few standard unfoldings.
pub fn corpus() -> Vec<QMultiGerm> {
    let mut out: Vec<QMultiGerm> = atlas_instances(3).into_iter().map(|(_, _, g)| g).collect();
    let unf = |t: &str, s: usize| Unfolding::unchecked(germ(t), s).unwrap();
    let cusp = unf("(x^3+x*y, y)", 1);
    let swallow = unf("(x, y^4+x*y+z*y^2, z)", 1);
    let trigerm = unf("{(x^2,y,z);(x,y^2,z);(x^2+y+z,y,z)}", 1);
    let space_curve = unf("(y^2, y^3+x*y, x)", 1);
    for k in 1..=4 {
        let phi = poly(&format!("z^{k}"));
        out.push(ops::augment(&swallow, &phi).unwrap());
        out.push(ops::augment(&cusp, &phi).unwrap());
        out.push(ops::sim_aug_concat(&trigerm, &phi).unwrap());
        out.push(ops::sim_aug_concat(&space_curve, &phi).unwrap());
    }
    out.push(ops::monic_concat(&swallow).unwrap());
    out.push(ops::monic_concat(&space_curve).unwrap());
    out.push(ops::binary_concat(&cusp, &cusp).unwrap());
    out.push(ops::generalised_concat(&unf("(x^3+y^2*x+z^2*x, y, z)", 2), &germ("(x, y^3+x*y)")).unwrap());
    out
}
