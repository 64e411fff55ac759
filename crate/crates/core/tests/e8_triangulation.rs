use std::collections::BTreeSet;
use std::sync::OnceLock;

use covering::e8::cells::to_simplex;
use covering::e8::orbits::apply_hah;
use covering::e8::*;
use covering::exact::linalg::primitive_integer_row;
use covering::exact::{int, Rational, SymMatrix};
use num_traits::{Signed, Zero};

struct Fixture {
    model: E8Model,
    classes: Vec<DiagonalClass>,
    orbits: Vec<GOrbit>,
    refined: RefinedTriangulation,
    regs: RegulatorSet,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let model = build_model();
        let classes = diagonal_classes(&model);
        let orbits = g_orbits(&model);
        let t = PeriodicTriangulation::named("I1", &classes, &orbits).unwrap();
        let refined = RefinedTriangulation::build(&model, &t);
        let regs = regulators_of(&refined);
        Fixture {
            model,
            classes,
            orbits,
            refined,
            regs,
        }
    })
}

#[test]
fn refined_triangulation_is_face_to_face() {
    let f = fixture();
    assert_eq!(f.refined.simplices.len(), 19200);
    let distinct: BTreeSet<_> = f.refined.simplices.iter().map(|s| s.vertices).collect();
    assert_eq!(distinct.len(), 19200);
    assert_eq!(f.refined.unmatched_facets, 0);
    assert_eq!(f.refined.pairs.len(), 19200 * 9 / 2);
}

#[test]
fn volumes_sum_to_one() {
    let f = fixture();
    let total: Rational = f.refined.simplices.iter().map(|s| to_simplex(&s.vertices).volume()).sum();
    assert_eq!(total, int(1));
    let unrefined: Rational = simplex_representatives(&f.model).iter().map(|s| to_simplex(s).volume()).sum();
    let fact: i64 = (1..=8).product();
    let cross = Rational::new(256.into(), fact.into());
    assert_eq!(unrefined + cross * int(135), int(1));
}

#[test]
fn split_volume_matches_cross_polytope() {
    let f = fixture();
    for c in f.classes.iter().step_by(9) {
        let p = cross_polytope(&f.model, c.representative).unwrap();
        // linear image of the unit cross polytope with half-diagonals as columns
        let half: Vec<Vec<Rational>> = p.diagonals().iter().map(|d| d.to_rat().scale(&Rational::new(1.into(), 2.into())).into_inner()).collect();
        let det = covering::exact::RatMatrix::from_rows(half).unwrap().determinant().unwrap();
        let fact: i64 = (1..=8).product();
        let expect = det.abs() * Rational::new(256.into(), fact.into());
        for &d in &p.diagonals() {
            let pieces = split_cross_polytope(&p, d).unwrap();
            let sum: Rational = pieces.iter().map(|s| to_simplex(s).volume()).sum();
            assert_eq!(sum, expect);
        }
    }
}

#[test]
fn regulator_counts() {
    let f = fixture();
    assert_eq!(f.regs.pair_counts, [135 * 128, 135 * 128 / 2, 135 * 448]);
    let d = f.regs.distinct_counts();
    assert_eq!(d[2], 945);
    println!("distinct regulators per kind: {d:?}");
}

#[test]
fn signs_at_standard_form() {
    let f = fixture();
    let id = SymMatrix::identity(8);
    for r in &f.regs.regulators {
        let v = r.evaluate(&id);
        match r.kind {
            RegulatorKind::Type3 => assert!(v.is_zero()),
            _ => assert!(v.is_positive(), "{:?}", r.terms),
        }
        let s: Rational = r.terms.iter().map(|t| t.0.clone()).sum();
        assert!(s.is_zero());
    }
}

#[test]
fn closed_form_type3_agrees() {
    let f = fixture();
    let closed: BTreeSet<Vec<Rational>> = type3_regulators(&f.classes, &f.refined.triangulation)
        .iter()
        .map(|r| r.form.upper_triangle())
        .collect();
    let solved: BTreeSet<Vec<Rational>> = f
        .regs
        .regulators
        .iter()
        .filter(|r| r.kind == RegulatorKind::Type3)
        .map(|r| r.form.upper_triangle())
        .collect();
    assert_eq!(closed, solved);
}

#[test]
fn regulators_are_translation_invariant() {
    let f = fixture();
    for p in f.refined.pairs.iter().step_by(997) {
        let kind = covering::e8::regulators::pair_kind(&f.refined.simplices[p.a], &f.refined.simplices[p.b]);
        let base = covering::e8::regulators::regulator_from_pair(kind, p.a_opposite, p.b_opposite, &p.facet);
        let t = E8Point([1, -1, 3, 1, -1, 1, 1, 3]);
        let facet = p.facet.map(|x| x + t);
        let moved = covering::e8::regulators::regulator_from_pair(kind, p.a_opposite + t, p.b_opposite + t, &facet);
        assert_eq!(base, moved);
    }
}

#[test]
fn adjacency_counts() {
    let f = fixture();
    for s in simplices_of_subdivision(&f.model).iter().step_by(1777) {
        assert_eq!(neighbor_counts(&f.model, &Cell::Simplex(s.clone())), (0, 9));
    }
    for &w in f.model.shell4.iter().step_by(311) {
        let p = cross_polytope(&f.model, w).unwrap();
        assert_eq!(neighbor_counts(&f.model, &Cell::Cross(p)), (128, 128));
    }
}

#[test]
fn hah_swaps_the_two_triangulations() {
    let f = fixture();
    let orbit = |id: usize| -> BTreeSet<E8Point> { f.orbits[id - 1].members.iter().copied().collect() };
    for (a, b) in [(1, 13), (3, 7), (6, 11), (10, 20), (12, 12)] {
        let image: BTreeSet<E8Point> = orbit(a).iter().map(|p| apply_hah(p).unwrap()).collect();
        assert_eq!(image, orbit(b), "O{a} -> O{b}");
    }
    let union = |sel: &[usize]| -> BTreeSet<E8Point> { sel.iter().flat_map(|&i| orbit(i)).collect() };
    let image: BTreeSet<E8Point> = union(&I1).iter().map(|p| apply_hah(p).unwrap()).collect();
    assert_eq!(image, union(&I2));
}

#[test]
fn restricted_rows() {
    let f = fixture();
    let s = covering::maxdet::invariant_subspace();
    let rows: BTreeSet<Vec<num_bigint::BigInt>> = f
        .regs
        .regulators
        .iter()
        .map(|r| primitive_integer_row(&s.restrict(&r.form)))
        .collect();
    println!("distinct restricted rows: {}", rows.len());
    assert!(rows.len() < 100);
}

#[test]
fn secondary_cone_facets() {
    let f = fixture();
    let t0 = std::time::Instant::now();
    let r = facet_count(&f.regs).unwrap();
    println!("facets {} ({} through the identity) from {} forms in {} orbits, {:?}", r.facets, r.facets_through_identity, r.inequalities, r.orbits, t0.elapsed());
    assert_eq!(r.inequalities, 10473);
    assert_eq!(r.facets, 428);
    assert_eq!(r.facets_through_identity, 427);
}
