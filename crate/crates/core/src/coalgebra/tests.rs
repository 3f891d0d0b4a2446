use num_traits::Zero;

use super::*;
use crate::gca::GcaPresentation;
use crate::scalar::{int, Scalar};

fn exterior2() -> FiniteDga {
    let p = GcaPresentation::from_degrees([("t1", 1), ("t2", 1)]).unwrap();
    FiniteDga::truncated(&p, &[]).unwrap()
}

fn truncated_poly(m: u32) -> FiniteDga {
    let p = GcaPresentation::from_degrees([("b", 2)]).unwrap();
    FiniteDga::truncated(&p, &[("b", m)]).unwrap()
}

fn kodaira_thurston_algebra() -> (GcaPresentation, FiniteDga) {
    let p = GcaPresentation::from_degrees([("x1", 1), ("x2", 1), ("x3", 1), ("x4", 1)]).unwrap();
    let dx4 = p.poly(&[(int(1), &[("x1", 1), ("x2", 1)])]).unwrap();
    let p = p.with_differential("x4", dx4).unwrap();
    let b = FiniteDga::truncated(&p, &[]).unwrap();
    (p, b)
}

fn idx(b: &FiniteDga, label: &str) -> usize {
    b.index_of(label)
        .unwrap_or_else(|| panic!("no basis element {label}"))
}

fn terms_of(dual: &DualCoalgebra, e: usize) -> Vec<(String, String, Scalar)> {
    let b = dual.dga();
    dual.coproduct(e)
        .iter()
        .map(|(i, j, c)| (b.label(*i).to_string(), b.label(*j).to_string(), c.clone()))
        .collect()
}

#[test]
fn coproduct_of_top_exterior_class() {
    let b = exterior2();
    let dual = DualCoalgebra::dualize(&b);
    let mut got = terms_of(&dual, idx(&b, "t1*t2"));
    got.sort();
    let mut expected = vec![
        ("1".to_string(), "t1*t2".to_string(), int(1)),
        ("t1".to_string(), "t2".to_string(), int(1)),
        ("t2".to_string(), "t1".to_string(), int(-1)),
        ("t1*t2".to_string(), "1".to_string(), int(1)),
    ];
    expected.sort();
    assert_eq!(got, expected);
}

#[test]
fn unit_dual_is_grouplike_and_beta_is_primitive() {
    let b = truncated_poly(1);
    let dual = DualCoalgebra::dualize(&b);
    assert_eq!(
        terms_of(&dual, b.unit()),
        vec![("1".into(), "1".into(), int(1))]
    );
    let mut got = terms_of(&dual, idx(&b, "b"));
    got.sort();
    assert_eq!(
        got,
        vec![
            ("1".into(), "b".into(), int(1)),
            ("b".into(), "1".into(), int(1))
        ]
    );
}

#[test]
fn iterated_coproduct_base_case_is_coproduct() {
    let b = exterior2();
    let dual = DualCoalgebra::dualize(&b);
    for k in 0..b.dim() {
        let e = DualElement::basis(k);
        let once = dual.iterated_coproduct(&e, 1);
        assert_eq!(once, dual.coproduct_of(&e));
        let zero = dual.iterated_coproduct(&e, 0);
        assert_eq!(
            zero,
            vec![CoproductTerm {
                slots: vec![k],
                coeff: int(1)
            }]
        );
    }
}

#[test]
fn iterated_coproduct_on_truncated_powers() {
    let b = truncated_poly(2);
    let dual = DualCoalgebra::dualize(&b);
    let (one, beta, beta2) = (b.unit(), idx(&b, "b"), idx(&b, "b^2"));
    let terms = dual.iterated_coproduct(&DualElement::basis(beta2), 2);
    let coeff = |slots: [usize; 3]| {
        terms
            .iter()
            .find(|t| t.slots == slots)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Scalar::zero)
    };
    assert_eq!(coeff([beta, beta, one]), int(1));
    assert_eq!(coeff([beta, one, beta]), int(1));
    assert_eq!(coeff([one, beta, beta]), int(1));
    assert_eq!(coeff([beta2, one, one]), int(1));
    assert_eq!(terms.len(), 6);
}

#[test]
fn iterated_coproduct_contains_shuffle_terms() {
    for m in 1..=4usize {
        let b = truncated_poly(m as u32);
        let dual = DualCoalgebra::dualize(&b);
        let top = idx(
            &b,
            &if m == 1 {
                "b".to_string()
            } else {
                format!("b^{m}")
            },
        );
        let beta = idx(&b, "b");
        let terms = dual.iterated_coproduct(&DualElement::basis(top), m);
        let shuffles: Vec<&CoproductTerm> = terms
            .iter()
            .filter(|t| t.slots.iter().filter(|&&s| s == b.unit()).count() == 1)
            .filter(|t| t.slots.iter().filter(|&&s| s == beta).count() == m)
            .collect();
        assert_eq!(shuffles.len(), m + 1);
        assert!(shuffles.iter().all(|t| t.coeff == int(1)));
        for t in &terms {
            let deg: i32 = t.slots.iter().map(|&s| dual.degree(s)).sum();
            assert_eq!(deg, dual.degree(top));
        }
    }
}

#[test]
fn pairing_with_products() {
    let (_, b) = kodaira_thurston_algebra();
    let dual = DualCoalgebra::dualize(&b);
    for k in 0..b.dim() {
        for x in 0..b.dim() {
            for y in 0..b.dim() {
                let via_coproduct: Scalar = dual
                    .coproduct(k)
                    .iter()
                    .filter(|(i, j, _)| *i == x && *j == y)
                    .map(|(_, _, c)| c.clone())
                    .fold(Scalar::zero(), |a, b| a + b);
                let via_product = DualElement::basis(k).eval(b.product(x, y));
                assert_eq!(via_coproduct, via_product);
            }
        }
    }
}

#[test]
fn coassociativity_and_counit() {
    assert!(DualCoalgebra::dualize(&exterior2())
        .check_coassociativity()
        .is_empty());
    for m in 1..=4 {
        let dual = DualCoalgebra::dualize(&truncated_poly(m));
        assert!(dual.check_coassociativity().is_empty());
        assert!(dual.check_counit().is_empty());
    }
    let (_, kt) = kodaira_thurston_algebra();
    let dual = DualCoalgebra::dualize(&kt);
    assert!(dual.check_coassociativity().is_empty());
    assert!(dual.check_counit().is_empty());
}

#[test]
fn corrupted_table_is_caught() {
    let mut b = exterior2();
    let (t1, t2, top) = (idx(&b, "t1"), idx(&b, "t2"), idx(&b, "t1*t2"));
    b.corrupt_product(t2, t1, SparseVec::from([(top, int(1))]));
    assert!(b
        .validate()
        .iter()
        .any(|s| s.contains("graded-commutative")));

    // non-associative: (t1 t2) t3 set to zero while t1 (t2 t3) is not
    let p = GcaPresentation::from_degrees([("t1", 1), ("t2", 1), ("t3", 1)]).unwrap();
    let mut e = FiniteDga::truncated(&p, &[]).unwrap();
    assert!(e.validate().is_empty());
    let (t12, t3) = (idx(&e, "t1*t2"), idx(&e, "t3"));
    e.corrupt_product(t12, t3, SparseVec::new());
    e.corrupt_product(t3, t12, SparseVec::new());
    assert!(e.validate().iter().any(|s| s.contains("associativity")));
    assert!(!DualCoalgebra::dualize(&e)
        .check_coassociativity()
        .is_empty());
}

#[test]
fn explicit_table_rejects_non_associative() {
    // basis 1, a, b, c of degrees 0, 2, 2, 4 with a*a = c but a*b = 0, b*a = 0,
    // b*b = c: fine. Then break commutativity.
    let basis = vec![
        BasisElement {
            label: "1".into(),
            degree: 0,
        },
        BasisElement {
            label: "a".into(),
            degree: 2,
        },
        BasisElement {
            label: "b".into(),
            degree: 2,
        },
        BasisElement {
            label: "c".into(),
            degree: 4,
        },
    ];
    let good = FiniteDga::from_table(
        basis.clone(),
        0,
        [
            ((1, 1), SparseVec::from([(3, int(1))])),
            ((2, 2), SparseVec::from([(3, int(1))])),
        ],
        vec![SparseVec::new(); 4],
    );
    assert!(good.is_ok());
    let bad = FiniteDga::from_table(
        basis,
        0,
        [((1, 2), SparseVec::from([(3, int(1))]))],
        vec![SparseVec::new(); 4],
    );
    assert!(matches!(bad, Err(CoalgebraError::InvalidDga(_))));
}

#[test]
fn dual_differential_squares_to_zero() {
    let (_, b) = kodaira_thurston_algebra();
    let dual = DualCoalgebra::dualize(&b);
    for k in 0..b.dim() {
        let e = DualElement::basis(k);
        let de = dual.apply_codifferential(&e);
        assert!(dual.apply_codifferential(&de).is_zero());
        for j in de.coeffs.keys() {
            assert_eq!(dual.degree(*j), dual.degree(k) + 1);
        }
    }
    // d(x1 x2)_* picks up x4_* since d x4 = x1 x2
    let e = DualElement::basis(idx(&b, "x1*x2"));
    let de = dual.apply_codifferential(&e);
    assert_eq!(de.coeffs.get(&idx(&b, "x4")), Some(&int(1)));
}

#[test]
fn adapted_basis_properties() {
    let (_, b) = kodaira_thurston_algebra();
    let dual = DualCoalgebra::dualize(&b);
    let ab = dual.adapted_basis();
    assert_eq!(ab.a.len() + ab.b.len() + ab.c.len(), b.dim());
    assert_eq!(ab.a.len(), ab.b.len());
    for (a, bk) in ab.a.iter().zip(&ab.b) {
        assert_eq!(&dual.apply_codifferential(a), bk);
    }
    for c in &ab.c {
        assert!(dual.apply_codifferential(c).is_zero());
    }
    assert_eq!(ab.c[0], DualElement::basis(b.unit()));
    // every cycle class count: c's are the homology of B_*, which has the
    // dimension of H*(KT) = 1 + 3 + 4 + 3 + 1
    assert_eq!(ab.c.len(), 12);
}

#[test]
fn pd_targets() {
    let z = GcaPresentation::from_degrees([("b", 2), ("y", 3)]).unwrap();
    let dy = z.poly(&[(int(1), &[("b", 2)])]).unwrap();
    let z = z.with_differential("y", dy).unwrap();
    let t = pd_quasi_target(&z).unwrap();
    assert_eq!(t.algebra.dim(), 2);
    assert_eq!(t.caps, vec![("b".to_string(), 1)]);
    assert!(t.images.contains(&("y".to_string(), None)));

    let empty = GcaPresentation::new(Vec::new()).unwrap();
    assert_eq!(pd_quasi_target(&empty).unwrap().algebra.dim(), 1);

    // the non-nilpotent example has the same shape: dτ = σ²
    let z = GcaPresentation::from_degrees([("sigma", 2), ("tau", 3)]).unwrap();
    let dt = z.poly(&[(int(1), &[("sigma", 2)])]).unwrap();
    let z = z.with_differential("tau", dt).unwrap();
    let t = pd_quasi_target(&z).unwrap();
    assert_eq!(t.algebra.dim(), 2);
    assert_eq!(t.algebra.top_degree(), 2);

    let z = GcaPresentation::from_degrees([("a", 3), ("b", 5)]).unwrap();
    assert!(matches!(
        pd_quasi_target(&z),
        Err(CoalgebraError::Unsupported(_))
    ));
}

#[test]
fn poincare_duality_of_supported_targets() {
    for m in 1..=3u32 {
        for k in 0..=2usize {
            let mut gens: Vec<(String, i32)> = Vec::new();
            for i in 1..=k {
                gens.push((format!("t{i}1"), 1));
                gens.push((format!("t{i}2"), 1));
            }
            gens.push(("b".into(), 2));
            let p = GcaPresentation::new(
                gens.iter()
                    .map(|(n, d)| crate::gca::Generator::new(n.clone(), *d)),
            )
            .unwrap();
            let b = FiniteDga::truncated(&p, &[("b", m)]).unwrap();
            let top = b.top_degree();
            assert_eq!(top, 2 * m as i32 + 2 * k as i32);
            let top_class: Vec<usize> = (0..b.dim()).filter(|&i| b.degree(i) == top).collect();
            assert_eq!(top_class.len(), 1);
            for p_deg in 0..=top {
                let lower: Vec<usize> = (0..b.dim()).filter(|&i| b.degree(i) == p_deg).collect();
                let upper: Vec<usize> = (0..b.dim())
                    .filter(|&i| b.degree(i) == top - p_deg)
                    .collect();
                assert_eq!(lower.len(), upper.len());
                let rows: Vec<Vec<Scalar>> = lower
                    .iter()
                    .map(|&i| {
                        upper
                            .iter()
                            .map(|&j| {
                                b.product(i, j)
                                    .get(&top_class[0])
                                    .cloned()
                                    .unwrap_or_else(Scalar::zero)
                            })
                            .collect()
                    })
                    .collect();
                if !lower.is_empty() {
                    assert_eq!(
                        crate::linalg::Matrix::from_rows(upper.len(), rows).rank(),
                        lower.len()
                    );
                }
            }
            if k == 0 {
                // the C-part vanishes in degree 2m - 1
                assert!((0..b.dim()).all(|i| b.degree(i) != 2 * m as i32 - 1));
            }
        }
    }
}

#[test]
fn quasi_iso_checks() {
    let (p, b) = kodaira_thurston_algebra();
    let eta = QuasiIso::identity(&p, &b).unwrap();
    let f = [int(2), int(3), int(5), int(6)];
    assert!(eta.rescaled(&p, &b, &f).is_ok());
    let bad = [int(2), int(3), int(5), int(7)];
    assert!(matches!(
        eta.rescaled(&p, &b, &bad),
        Err(CoalgebraError::NotAChainMap(_))
    ));
}
