//! The p-adic side against exact character sums, for a few primes.

use zetakit::charsums::dwork_construction;
use zetakit::dwork::{
    fredholm_direct, fredholm_from_traces, traces, verify_trace_formula, DworkSetup, WeightProgram,
};
use zetakit::fields::{make_extension, FieldSpec};
use zetakit::geometry::{MultiPoly, PolySystem};

fn poly(p: u32, n: usize, terms: &[(i64, &[u32])]) -> (FieldSpec, MultiPoly) {
    let spec = FieldSpec::prime(p).unwrap();
    let f = make_extension(&spec, 1, 1 << 20).unwrap();
    let g = MultiPoly::from_terms(n, terms.iter().map(|(c, e)| (e.to_vec(), f.from_int(*c))), &f).unwrap();
    (spec, g)
}

#[test]
fn trace_formula_over_f5_and_f2() {
    let cases = [
        poly(5, 1, &[(2, &[1])]),
        poly(5, 1, &[(1, &[2]), (3, &[1])]),
        poly(2, 2, &[(1, &[1, 1]), (1, &[1, 0])]),
        poly(3, 1, &[(1, &[1]), (1, &[0])]),
    ];
    for (spec, g) in cases {
        let records = verify_trace_formula(&g, &spec, 2, 10, 4, 1 << 20).unwrap();
        for rec in records {
            assert!(rec.passes, "p = {}, g = {g:?}: {rec:?}", spec.p);
        }
    }
}

#[test]
fn dwork_construction_of_a_hypersurface_has_valid_traces() {
    // {x1² − 1} over F_3 lifted to g = y·(x² − 1) in two variables.
    let spec = FieldSpec::prime(3).unwrap();
    let f = make_extension(&spec, 1, 1 << 20).unwrap();
    let h = MultiPoly::from_terms(1, [(vec![2], f.from_int(1)), (vec![0], f.from_int(-1))], &f).unwrap();
    let system = PolySystem::new(spec.clone(), 1, vec![h]).unwrap();
    let g = dwork_construction(&system);
    for rec in verify_trace_formula(&g, &spec, 2, 8, 5, 1 << 20).unwrap() {
        assert!(rec.passes, "{rec:?}");
    }
}

#[test]
fn determinant_paths_agree_on_subspaces() {
    let (spec, g) = poly(3, 2, &[(1, &[2, 1]), (2, &[0, 1])]);
    let setup = DworkSetup::new(&g, &spec, 8, 8).unwrap();
    let ring = setup.ring();
    let wp = WeightProgram::new(1, vec![2], vec![]);
    for subset in [vec![], vec![0usize], vec![1], vec![0, 1]] {
        for cone in [None, Some(&wp)] {
            let a = setup.matrix(&subset, cone).unwrap();
            let tr = traces(&a, 3);
            let newton = fredholm_from_traces(ring, &tr, a.floor, 3).unwrap();
            let direct = fredholm_direct(&a, 3);
            for k in 0..=3 {
                let diff = ring.sub(&newton.coeffs[k], &direct.coeffs[k]);
                assert!(ring.val(&diff) >= newton.precision[k], "subset {subset:?}, k = {k}");
            }
        }
    }
}
