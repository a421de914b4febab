mod common;

use common::*;
use germcalc::atlas::{self, ParamValue};
use germcalc::gates::{simplicity_report, Assertions};
use germcalc::ops::{self, Unfolding};
use germcalc::ring::tjurina;
use germcalc::tangent::{ae_codim, is_stable};

fn codim(f: &germcalc::QMultiGerm) -> usize {
    ae_codim(f, &pol()).unwrap().value
}

/// `A_{F,z^k}(f)` for the plane germ `f = (x, y^4 + x y)` of codimension 1,
/// unfolded to the swallowtail: a chain of adjacencies with codimensions
/// `k - 1`.
#[test]
fn adjacency_chain_of_augmentations() {
    let u = Unfolding::new(germ("(x, y^4+x*y+z*y^2, z)"), 1, &pol()).unwrap();
    assert_eq!(codim(u.base()), 1);
    let mut previous = None;
    for k in (2..=5).rev() {
        let h = ops::augment(&u, &poly(&format!("z^{k}"))).unwrap();
        let c = codim(&h);
        assert_eq!(c, k as usize - 1, "k = {k}");
        let tau = tjurina(&poly(&format!("z^{k}")), &pol()).unwrap();
        assert_eq!(c, tau);
        if let Some(p) = previous {
            assert!(c < p);
        }
        previous = Some(c);
    }
}

#[test]
fn augmentation_by_a_submersion_is_stable() {
    let u = Unfolding::new(germ("(x, y^4+x*y+z*y^2, z)"), 1, &pol()).unwrap();
    let h = ops::augment(&u, &poly("z")).unwrap();
    assert!(is_stable(&h, &pol()).unwrap());
}

#[test]
fn augconc_meets_the_quasi_homogeneous_prediction() {
    let u = Unfolding::new(germ("{(x^2,y,z);(x,y^2,z);(x^2+y+z,y,z)}"), 1, &pol()).unwrap();
    let base = codim(u.base());
    assert_eq!(base, 1);
    for k in 2..=4 {
        let phi = poly(&format!("z^{k}"));
        let tau = tjurina(&phi, &pol()).unwrap();
        let h = ops::sim_aug_concat(&u, &phi).unwrap();
        assert_eq!(h.r(), 4);
        assert_eq!(codim(&h), ops::predicted_codim_augconc(base, tau), "k = {k}");
    }
}

#[test]
fn augconc_of_the_plane_bigerm() {
    let u = Unfolding::new(germ("{(x^2, y, z); (x^2+y^3+z, y, z)}"), 1, &pol()).unwrap();
    let h = ops::sim_aug_concat(&u, &poly("z^2")).unwrap();
    assert_eq!(h, germ("{(x^2,y,z); (x^2+y^3+z^2,y,z); (x,y,z^2)}"));
    assert_eq!(codim(&h), 4);
}

#[test]
fn space_curve_family() {
    // f = (y^2, y^3) with the unfolding y^3 + x y
    let u = Unfolding::new(germ("(y^2, y^3+x*y, x)"), 1, &pol()).unwrap();
    for k in 1..=3u32 {
        let a = ops::augment(&u, &poly(&format!("x^{}", k + 1))).unwrap();
        assert_eq!(a.r(), 1);
        let bigerm = ops::sim_aug_concat(&u, &poly(&format!("x^{}", k + 1))).unwrap();
        assert_eq!(bigerm.r(), 2);
        let tau = tjurina(&poly(&format!("x^{}", k + 1)), &pol()).unwrap();
        assert_eq!(codim(&bigerm), ops::predicted_codim_augconc(codim(u.base()), tau));
    }
    let monic = ops::monic_concat(&u).unwrap();
    assert_eq!(monic, germ("{(y^2, y^3+x*y, x); (y, x, 0)}"));
}

#[test]
fn constructions_keep_branches_at_the_origin() {
    for f in corpus() {
        for b in f.branches() {
            assert!(b.components().iter().all(|c| c.vanishes_at_origin()));
        }
    }
}

#[test]
fn binary_concatenation_is_the_first_a2a2_row() {
    let cusp = Unfolding::new(germ("(x^3+x*y, y)"), 1, &pol()).unwrap();
    let h = ops::binary_concat(&cusp, &cusp).unwrap();
    assert_eq!(h, atlas::instantiate("A2A2-a", &ParamValue::None).unwrap());
    assert_eq!(codim(&h), 1);
}

#[test]
fn edge_in_the_limiting_plane_has_codim_two() {
    // the cuspidal edge of the first branch lies in the limiting tangent
    // plane of the second
    let f = germ("{(x^3+z*x, y, z); (x, y, z^3+y*z)}");
    assert_eq!(codim(&f), 2);
}

#[test]
fn lips_concatenated_with_a_cusp() {
    // codimension l + 1 for (x^3 + (y^2 + z^l) x, y, z) with a cusp
    for l in 2..=4 {
        let f = germ(&format!("{{(x^3+y^2*x+z^{l}*x, y, z); (x, y, z^3+y*z)}}"));
        assert_eq!(codim(&f), l + 1, "l = {l}");
    }
}

#[test]
fn lookup_identifies_every_instance() {
    for (name, value, f) in atlas_instances(3) {
        let (_, matches) = atlas::lookup(&f, &pol()).unwrap();
        assert!(
            matches.iter().any(|m| m.entry == name && m.params == value && m.exact),
            "{name} ({value}) not identified: {matches:?}"
        );
    }
}

#[test]
fn reports_are_deterministic() {
    let f = germ("{(x,y,z^3+y*z);(x^4+y*x+z*x^2,y,z)}");
    let a = simplicity_report(&f, &pol(), &Assertions::none(), None).unwrap();
    let b = simplicity_report(&f, &pol(), &Assertions::none(), None).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn verify_all_at_cap_one() {
    let report = atlas::verify_all(1, &pol()).unwrap();
    assert!(!report.rows.is_empty());
    for row in &report.rows {
        // the single known disagreement with the published table
        if row.entry == "3_muA1A1" && row.params.to_string() == "1" {
            assert!(!row.matched);
            continue;
        }
        assert!(row.matched, "{} ({}) computed {:?}, expected {}", row.entry, row.params, row.computed, row.expected);
    }
}
