//! Structural oracles over a random corpus of weighted systems: mapping
//! cones against direct constructions, the slice oracle route, permutation
//! invariance of homology, annihilation of homology by the elements, and
//! termwise accounting along the truncation sequence.

mod common;

use common::{field, random_system, rng};
use kcech::builder::{
    co_quotient_L, default_cap, koszul, quotient_L, sub_co_koszul, sub_koszul, rees_slice_oracle,
};
use kcech::complex::{mapping_cone, DegreeCap};
use kcech::monomial::NegPowerConvention;
use kcech::multiplicity::random_sop_instance;
use rand::Rng;

#[test]
fn mapping_cones_reassemble_random_truncations() {
    let mut rng = rng(0xC0FF_EE00);
    for case in 0..24 {
        let (ws, module) = random_system(&mut rng);
        let t = ws.len();
        let (b, c_b) = ws.elements()[t - 1].clone();
        let head = ws.prefix(t - 1);
        let conv = if case % 2 == 0 { NegPowerConvention::Unit } else { NegPowerConvention::Zero };
        let n: i64 = rng.random_range(-2..=6);
        let n_co: i64 = rng.random_range(0..=6);

        let from = sub_koszul(&head, &module, n - i64::from(c_b), conv).unwrap();
        let to = sub_koszul(&head, &module, n, conv).unwrap();
        assert_eq!(
            mapping_cone(&b, &from, &to).unwrap(),
            sub_koszul(&ws, &module, n, conv).unwrap(),
            "chain submodule cone, case {case}"
        );

        let from = quotient_L(&head, &module, n - i64::from(c_b), conv).unwrap();
        let to = quotient_L(&head, &module, n, conv).unwrap();
        assert_eq!(
            mapping_cone(&b, &from, &to).unwrap(),
            quotient_L(&ws, &module, n, conv).unwrap(),
            "chain quotient cone, case {case}"
        );

        let from = sub_co_koszul(&head, &module, n_co).unwrap();
        let to = sub_co_koszul(&head, &module, n_co + i64::from(c_b)).unwrap();
        assert_eq!(
            mapping_cone(&b, &from, &to).unwrap(),
            sub_co_koszul(&ws, &module, n_co).unwrap(),
            "cochain submodule cone, case {case}"
        );

        let from = co_quotient_L(&head, &module, n_co).unwrap();
        let to = co_quotient_L(&head, &module, n_co + i64::from(c_b)).unwrap();
        assert_eq!(
            mapping_cone(&b, &from, &to).unwrap(),
            co_quotient_L(&ws, &module, n_co).unwrap(),
            "cochain quotient cone, case {case}"
        );
    }
}

#[test]
fn slice_oracle_agrees_with_the_builder_route() {
    let mut rng = rng(0xBEEF_0001);
    for case in 0..24 {
        let (ws, module) = random_system(&mut rng);
        let n: i64 = rng.random_range(-2..=6);
        assert_eq!(
            rees_slice_oracle(&ws, &module, n).unwrap(),
            sub_koszul(&ws, &module, n, NegPowerConvention::Zero).unwrap(),
            "case {case}, n = {n}"
        );
    }
}

#[test]
fn permuting_the_elements_preserves_homology() {
    let f = field();
    let mut rng = rng(0x5EED_0002);
    for id in 0..5 {
        let (ws, module) = random_sop_instance(0xACE0_5EED, id).unwrap();
        let t = ws.len();
        // Fisher–Yates with the seeded generator.
        let mut perm: Vec<usize> = (0..t).collect();
        for i in (1..t).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let shuffled = ws.permuted(&perm).unwrap();
        let n = 3;
        let cap = default_cap(&ws.monomials(), Some(ws.q()), &module, n).unwrap();
        let conv = NegPowerConvention::Unit;

        let base = sub_koszul(&ws, &module, n, conv).unwrap().homology_dims(f, cap).unwrap();
        let moved =
            sub_koszul(&shuffled, &module, n, conv).unwrap().homology_dims(f, cap).unwrap();
        assert_eq!(base.dims(), moved.dims(), "submodule truncation, instance {id}");

        let base = quotient_L(&ws, &module, n, conv).unwrap().homology_dims(f, cap).unwrap();
        let moved =
            quotient_L(&shuffled, &module, n, conv).unwrap().homology_dims(f, cap).unwrap();
        assert_eq!(base.dims(), moved.dims(), "quotient truncation, instance {id}");

        let base = sub_co_koszul(&ws, &module, n).unwrap().homology_dims(f, cap).unwrap();
        let moved = sub_co_koszul(&shuffled, &module, n).unwrap().homology_dims(f, cap).unwrap();
        assert_eq!(base.dims(), moved.dims(), "cochain submodule, instance {id}");

        let base = co_quotient_L(&ws, &module, n).unwrap().homology_dims(f, cap).unwrap();
        let moved = co_quotient_L(&shuffled, &module, n).unwrap().homology_dims(f, cap).unwrap();
        assert_eq!(base.dims(), moved.dims(), "cochain quotient, instance {id}");
    }
}

#[test]
fn every_element_annihilates_all_four_homologies() {
    let f = field();
    for id in 0..3 {
        let (ws, module) = random_sop_instance(0xA117_0003, id).unwrap();
        let n = 2;
        let cap = default_cap(&ws.monomials(), Some(ws.q()), &module, n).unwrap();
        let conv = NegPowerConvention::Unit;
        let complexes = [
            sub_koszul(&ws, &module, n, conv).unwrap(),
            quotient_L(&ws, &module, n, conv).unwrap(),
            sub_co_koszul(&ws, &module, n).unwrap(),
            co_quotient_L(&ws, &module, n).unwrap(),
        ];
        for (which, complex) in complexes.iter().enumerate() {
            for (a, _) in ws.elements() {
                let report = complex.annihilation_check(f, a, cap).unwrap();
                assert!(
                    report.ok,
                    "element {a} fails to annihilate homology of complex {which} \
                     in instance {id}: {:?}",
                    report.violations
                );
            }
        }
    }
}

#[test]
fn truncation_terms_split_the_full_complex_slicewise() {
    let mut rng = rng(0xD1CE_0004);
    for case in 0..12 {
        let (ws, module) = random_system(&mut rng);
        let n: i64 = rng.random_range(0..=5);
        let conv = NegPowerConvention::Unit;
        let sub = sub_koszul(&ws, &module, n, conv).unwrap();
        let full = koszul(&ws.monomials(), &module).unwrap();
        let quot = quotient_L(&ws, &module, n, conv).unwrap();
        let (lo, hi) = full.index_range();
        for i in lo..=hi {
            for e in -2..=8 {
                let (s, m, q) =
                    (sub.slice(i, e).dim, full.slice(i, e).dim, quot.slice(i, e).dim);
                assert_eq!(s + q, m, "case {case}: slice ({i}, {e}) fails to split");
            }
        }
    }
}

#[test]
fn degree_caps_reject_non_primary_ambient_data() {
    // A system whose ambient ideal has a free direction cannot get a default
    // degree cap: the scan would never stabilize.
    let mut rng = rng(0xCAFE_0005);
    let mut saw_rejection = false;
    for _ in 0..40 {
        let (ws, module) = random_system(&mut rng);
        let ambient = module.relations().sum(&ws.elements_ideal());
        let cap = default_cap(&ws.monomials(), Some(ws.q()), &module, 1);
        assert_eq!(
            cap.is_ok(),
            ambient.is_m_primary(),
            "default_cap must succeed exactly for m-primary ambient ideals"
        );
        saw_rejection |= cap.is_err();
    }
    assert!(saw_rejection, "corpus never produced a non-primary instance");
}

#[test]
fn sop_corpus_is_reproducible_and_well_formed() {
    for id in 0..10 {
        let (ws1, m1) = random_sop_instance(77, id).unwrap();
        let (ws2, m2) = random_sop_instance(77, id).unwrap();
        assert_eq!(ws1.elements(), ws2.elements(), "instance {id} must be deterministic");
        assert_eq!(ws1.q(), ws2.q());
        assert_eq!(m1.relations(), m2.relations());
        // t equals the dimension and (a) + I is m-primary by construction.
        assert_eq!(ws1.len() as i64, m1.krull_dim());
        assert!(m1.relations().sum(&ws1.elements_ideal()).is_m_primary());
    }
}
