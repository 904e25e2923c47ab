use super::*;
use crate::degree::VarSet;
use crate::hilbert::{collect_partitions, hdepth, Summand};
use crate::module::{Presentation, RelationTerm};

fn md(v: &[u32]) -> MultiDegree {
    MultiDegree::new(v.to_vec())
}

fn vars(v: &[usize]) -> VarSet {
    VarSet::from_indices(v.iter().map(|i| i - 1))
}

fn y(f: Field, i: usize, j: usize) -> SparsePoly {
    SparsePoly::var(f, GenericVar::new(i, j))
}

fn ideal_sum() -> (GradedModule, HilbertDecomposition) {
    let q = Field::Rationals;
    let m = Presentation::monomial_ideal(2, q, &[md(&[1, 0]), md(&[0, 1])]).unwrap();
    let p = Presentation::monomial_ideal(2, q, &[md(&[1, 1])]).unwrap();
    let gm = GradedModule::build(Presentation::direct_sum(&[m, p]).unwrap(), md(&[1, 1])).unwrap();
    let d = HilbertDecomposition::new(vec![
        Summand::new(vars(&[1, 2]), md(&[1, 0])),
        Summand::new(vars(&[1, 2]), md(&[0, 1])),
    ]);
    (gm, d)
}

pub(crate) fn twisted(field: Field) -> (GradedModule, HilbertDecomposition) {
    let one = field.one();
    let gens = vec![
        md(&[3, 0]),
        md(&[3, 0]),
        md(&[2, 1]),
        md(&[1, 2]),
        md(&[0, 3]),
    ];
    let rels = vec![
        vec![
            RelationTerm::new(0, md(&[0, 1]), one.clone()),
            RelationTerm::new(2, md(&[1, 0]), -one.clone()),
        ],
        vec![
            RelationTerm::new(1, md(&[0, 2]), one.clone()),
            RelationTerm::new(3, md(&[2, 0]), -one.clone()),
        ],
        vec![
            RelationTerm::new(0, md(&[0, 3]), one.clone()),
            RelationTerm::new(1, md(&[0, 3]), one.clone()),
            RelationTerm::new(4, md(&[3, 0]), -one),
        ],
    ];
    let pres = Presentation::new(2, field, gens, rels).unwrap();
    let gm = GradedModule::build(pres, md(&[3, 3])).unwrap();
    let d = HilbertDecomposition::new(vec![
        Summand::new(vars(&[1, 2]), md(&[3, 0])),
        Summand::new(vars(&[1]), md(&[3, 0])),
        Summand::new(vars(&[1]), md(&[2, 1])),
        Summand::new(vars(&[1]), md(&[1, 2])),
        Summand::new(vars(&[1, 2]), md(&[0, 3])),
        Summand::new(vars(&[2]), md(&[2, 2])),
        Summand::new(vars(&[2]), md(&[2, 3])),
        Summand::new(vars(&[2]), md(&[1, 3])),
    ]);
    (gm, d)
}

fn maximal_ideal(n: usize) -> GradedModule {
    let gens: Vec<_> = (0..n).map(|k| MultiDegree::unit(n, k)).collect();
    let p = Presentation::monomial_ideal(n, Field::Rationals, &gens).unwrap();
    GradedModule::build(p, MultiDegree::ones(n)).unwrap()
}

fn opts() -> CheckOptions {
    CheckOptions::default()
}

#[test]
fn ideal_sum_matrices() {
    let (gm, d) = ideal_sum();
    let f = gm.field();
    let fam = build_matrices(&gm, &d).unwrap();
    let zero = SparsePoly::zero(f);
    assert_eq!(
        fam.get(&md(&[1, 0])).unwrap().symbolic(f),
        vec![vec![y(f, 1, 1)]]
    );
    assert_eq!(
        fam.get(&md(&[0, 1])).unwrap().symbolic(f),
        vec![vec![y(f, 2, 1)]]
    );
    assert_eq!(
        fam.get(&md(&[1, 1])).unwrap().symbolic(f),
        vec![vec![y(f, 1, 1), y(f, 2, 1)], vec![zero.clone(), zero]]
    );
    for mode in [
        CheckMode::Symbolic,
        CheckMode::Unified,
        CheckMode::Transversal,
        CheckMode::Randomized,
    ] {
        let r = check_family(&fam, mode, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::NotInduced, "{mode}");
        if mode != CheckMode::Randomized {
            assert_eq!(r.failing_degree, Some(md(&[1, 1])), "{mode}");
        }
    }
    assert!(matches!(
        extract_witness(&fam, &WitnessOptions::default()),
        Err(Error::NoWitness(_)) | Err(Error::Resource(_))
    ));
}

#[test]
fn twisted_determinants() {
    let (gm, d) = twisted(Field::Rationals);
    assert_eq!(validate_decomposition(&d, &gm), Ok(()));
    let f = gm.field();
    let fam = build_matrices(&gm, &d).unwrap();
    assert_eq!(fam.variables().len(), 14);
    let det = |a: &[u32]| {
        let m = fam.get(&md(a)).unwrap();
        det_symbolic(f, &m.symbolic(f)).unwrap()
    };
    let up_to_sign = |p: SparsePoly, q: SparsePoly| p == q || p == q.neg();
    assert!(up_to_sign(det(&[3, 1]), y(f, 1, 2).mul(&y(f, 3, 1))));
    assert!(up_to_sign(det(&[3, 2]), y(f, 1, 1).mul(&y(f, 4, 1))));
    let d33 = det(&[3, 3]);
    let plus = y(f, 1, 1).add(&y(f, 1, 2)).mul(&y(f, 5, 1));
    let minus = y(f, 1, 1).sub(&y(f, 1, 2)).mul(&y(f, 5, 1));
    assert!(up_to_sign(d33.clone(), plus) || up_to_sign(d33, minus));
}

#[test]
fn twisted_trichotomy() {
    let (gm, d) = twisted(Field::Rationals);
    assert_eq!(
        check(&gm, &d, CheckMode::Symbolic, &opts())
            .unwrap()
            .verdict,
        Verdict::Induced
    );
    assert_eq!(
        check(&gm, &d, CheckMode::Transversal, &opts())
            .unwrap()
            .verdict,
        Verdict::Induced
    );

    let f2 = Field::prime(2).unwrap();
    let (gm2, d2) = twisted(f2);
    let fam2 = build_matrices(&gm2, &d2).unwrap();
    let r = check_finite(&fam2, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::NotInduced);
    assert_eq!(r.reduced_product_zero, Some(true));
    let u = check_unified(&fam2, &opts()).unwrap();
    assert_eq!(u.verdict, Verdict::NotInduced);
    assert!(matches!(check_infinite(&fam2), Err(Error::Mode(_))));
    assert!(matches!(check_transversal(&fam2), Err(Error::Mode(_))));
    assert!(matches!(
        extract_witness(&fam2, &WitnessOptions::default()),
        Err(Error::NoWitness(_))
    ));

    let f5 = Field::prime(5).unwrap();
    let (gm5, d5) = twisted(f5);
    let fam5 = build_matrices(&gm5, &d5).unwrap();
    assert_eq!(
        check_unified(&fam5, &opts()).unwrap().verdict,
        Verdict::Induced
    );
    assert_eq!(
        check_finite(&fam5, &opts()).unwrap().reduced_product_zero,
        Some(false)
    );
    let w = extract_witness(&fam5, &WitnessOptions::default()).unwrap();
    assert_eq!(verify_witness(&gm5, &d5, &w).unwrap(), None);
}

#[test]
fn all_ones_fails_over_f2() {
    let f2 = Field::prime(2).unwrap();
    let (gm, d) = twisted(f2);
    let fam = build_matrices(&gm, &d).unwrap();
    // with y11 = y12 = 1 the factor (Y11 + Y12)Y5 vanishes; the other degrees can be
    // made invertible, so (3,3) is the only obstruction
    let vars = fam.variables();
    let rest: Vec<GenericVar> = vars[2..].to_vec();
    let mut reached = false;
    for bits in 0u32..1 << rest.len() {
        let mut y: Assignment = rest
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, f2.from_u64((bits >> k & 1) as u64)))
            .collect();
        y.insert(vars[0], f2.one());
        y.insert(vars[1], f2.one());
        let fail = fam.verify(&y).unwrap();
        assert!(fail.is_some());
        if fail == Some(md(&[3, 3])) {
            reached = true;
            let mut partial = y;
            partial.remove(&GenericVar::new(8, 2));
            assert!(matches!(
                fam.verify(&partial),
                Err(Error::UnboundVariable(_))
            ));
            break;
        }
    }
    assert!(reached);
    let zeros: Assignment = fam
        .variables()
        .into_iter()
        .map(|v| (v, f2.zero()))
        .collect();
    let first = fam.degrees()[0].degree.clone();
    assert_eq!(fam.verify(&zeros).unwrap(), Some(first));
}

#[test]
fn rational_witness_for_twisted() {
    let (gm, d) = twisted(Field::Rationals);
    let fam = build_matrices(&gm, &d).unwrap();
    let w = extract_witness(&fam, &WitnessOptions::default()).unwrap();
    assert_eq!(verify_witness(&gm, &d, &w).unwrap(), None);
    // same search, same result
    assert_eq!(
        extract_witness(&fam, &WitnessOptions::default()).unwrap(),
        w
    );
}

#[test]
fn determinants_are_squarefree_and_homogeneous() {
    for field in [
        Field::Rationals,
        Field::prime(2).unwrap(),
        Field::prime(5).unwrap(),
    ] {
        let (gm, d) = twisted(field);
        let fam = build_matrices(&gm, &d).unwrap();
        for (dm, det) in fam.degrees().iter().zip(fam.determinants().unwrap()) {
            if det.is_zero() {
                continue;
            }
            let deg = det.summand_degree().expect("0/1 homogeneous");
            let cols: std::collections::BTreeSet<usize> =
                dm.columns.iter().map(|i| i + 1).collect();
            assert_eq!(deg, cols);
        }
    }
}

#[test]
fn one_dimensional_pieces_fast_path() {
    // when every dim M_a ≤ 1 the verdict is "no A_a is the zero matrix"
    for n in 2..=3 {
        let gm = maximal_ideal(n);
        let s = TruncatedSeries::from_module(&gm);
        for p in collect_partitions(&s, 0, Some(40)) {
            let d = partition_to_decomposition(&p, &s).unwrap();
            let fam = build_matrices(&gm, &d).unwrap();
            let fast = fam.degrees().iter().all(|m| !m.is_zero_matrix());
            let r = check_infinite(&fam).unwrap();
            assert_eq!(r.verdict == Verdict::Induced, fast);
        }
    }
}

#[test]
fn unified_takes_the_cheap_route_for_distinct_variables() {
    let f2 = Field::prime(2).unwrap();
    let gens: Vec<_> = (0..2).map(|k| MultiDegree::unit(2, k)).collect();
    let p = Presentation::monomial_ideal(2, f2, &gens).unwrap();
    let gm = GradedModule::build(p, md(&[1, 1])).unwrap();
    // singleton intervals: each summand lives in one degree of [0, g]
    let d = HilbertDecomposition::new(vec![
        Summand::new(vars(&[1]), md(&[1, 0])),
        Summand::new(vars(&[2]), md(&[0, 1])),
        Summand::new(vars(&[1, 2]), md(&[1, 1])),
    ]);
    let r = check(&gm, &d, CheckMode::Unified, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Induced);
    assert!(r.note.starts_with("exponent bound 1"), "{}", r.note);

    // Y[2,1] occurs in two determinants, so the bound reaches q = 2 and P is expanded
    let d = HilbertDecomposition::new(vec![
        Summand::new(vars(&[1]), md(&[1, 0])),
        Summand::new(vars(&[1, 2]), md(&[0, 1])),
    ]);
    let r = check(&gm, &d, CheckMode::Unified, &opts()).unwrap();
    assert_eq!(r.verdict, Verdict::Induced);
    assert_eq!(r.reduced_product_zero, Some(false));
    assert!(r.note.starts_with("exponent bound 2"), "{}", r.note);
}

#[test]
fn modes_agree_on_small_modules() {
    let q = Field::Rationals;
    let modules = vec![
        ideal_sum().0,
        maximal_ideal(2),
        GradedModule::build_default(
            Presentation::direct_sum(&[
                Presentation::monomial_ideal(2, q, &[md(&[1, 0]), md(&[0, 1])]).unwrap(),
                Presentation::free(2, q, &[md(&[0, 0])]).unwrap(),
            ])
            .unwrap(),
        )
        .unwrap(),
        GradedModule::build_default(
            Presentation::quotient_by_monomial_ideal(2, q, &[md(&[2, 1]), md(&[0, 2])]).unwrap(),
        )
        .unwrap(),
    ];
    for gm in modules {
        let s = TruncatedSeries::from_module(&gm);
        for p in collect_partitions(&s, 0, Some(60)) {
            let d = partition_to_decomposition(&p, &s).unwrap();
            let fam = build_matrices(&gm, &d).unwrap();
            let a = check_infinite(&fam).unwrap().verdict;
            assert_eq!(check_unified(&fam, &opts()).unwrap().verdict, a);
            assert_eq!(check_transversal(&fam).unwrap().verdict, a);
            if a == Verdict::Induced {
                let w = extract_witness(&fam, &WitnessOptions::default()).unwrap();
                assert_eq!(fam.verify(&w).unwrap(), None);
            }
        }
    }
}

#[test]
fn stanley_depth_of_small_modules() {
    let expected = [(2, 1), (3, 2), (4, 2)];
    for (n, s) in expected {
        let r = sdepth(&maximal_ideal(n), &SdepthOptions::default()).unwrap();
        assert_eq!(r.depth, Depth::Finite(s), "n = {n}");
        assert_eq!(r.decomposition.depth(), Depth::Finite(s));
        assert_eq!(
            verify_witness(&maximal_ideal(n), &r.decomposition, &r.witness).unwrap(),
            None
        );
    }
    for n in 1..=3 {
        let r = Presentation::free(n, Field::Rationals, &[MultiDegree::zero(n)]).unwrap();
        let gm = GradedModule::build_default(r).unwrap();
        assert_eq!(
            sdepth(&gm, &SdepthOptions::default()).unwrap().depth,
            Depth::Finite(n)
        );
    }
    let z = GradedModule::build(Presentation::zero(2, Field::Rationals), md(&[1, 1])).unwrap();
    assert_eq!(
        sdepth(&z, &SdepthOptions::default()).unwrap().depth,
        Depth::Infinite
    );
}

#[test]
fn stanley_depth_of_ideal_sum_against_oracle() {
    let (gm, _) = ideal_sum();
    let s = TruncatedSeries::from_module(&gm);
    // oracle: best depth over all partitions that pass the determinant test
    let mut best = None;
    for p in collect_partitions(&s, 0, None) {
        let d = partition_to_decomposition(&p, &s).unwrap();
        let fam = build_matrices(&gm, &d).unwrap();
        if check_infinite(&fam).unwrap().verdict == Verdict::Induced {
            best = best.max(Some(d.depth()));
        }
    }
    let r = sdepth(&gm, &SdepthOptions::default()).unwrap();
    assert_eq!(Some(r.depth), best);
    assert!(r.depth <= hdepth(&gm));
}

#[test]
fn invalid_decomposition_is_rejected() {
    let (gm, _) = ideal_sum();
    let d = HilbertDecomposition::new(vec![Summand::new(vars(&[1, 2]), md(&[1, 0]))]);
    assert!(matches!(
        build_matrices(&gm, &d),
        Err(Error::InvalidDecomposition(_))
    ));
}
