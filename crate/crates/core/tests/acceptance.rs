//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Exits nonzero if
//! any criterion fails. All comparisons are exact.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rht_core::bs_model::{reduce_mod_mu, Ambient};
use rht_core::coalgebra::{DualCoalgebra, DualElement, FiniteDga};
use rht_core::gca::{GcaPresentation, Poly};
use rht_core::linalg::Matrix;
use rht_core::nilmanifold::{baut1_poly_generators, NilmanifoldModel};
use rht_core::scalar::{self, int, ratio, Scalar};
use rht_core::sep_symplectic::{
    extendable_functionals, is_extendable, kappa, moduli_dim_s2, sum_classifying,
    torus_over_s2_check, ClassifyingData, KappaMap, SeparableSpec,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn pascal(n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = vec![vec![1]];
    for i in 1..=n {
        let mut row = vec![1u64; i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

fn top_power_label(m: u32) -> String {
    if m == 1 {
        "y⊗b_*".into()
    } else {
        format!("y⊗(b^{m})_*")
    }
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let cases = [
        (1, 1, 1),
        (1, 2, 1),
        (2, 1, 6),
        (2, 2, 7),
        (3, 1, 15),
        (3, 2, 30),
    ];
    let mut got = Vec::new();
    for (k, m, expected) in cases {
        let spec = SeparableSpec::torus_times_cp(k, m).map_err(|e| e.to_string())?;
        let model = spec.build_model().map_err(|e| e.to_string())?;
        let d = moduli_dim_s2(&spec, &model).map_err(|e| e.to_string())?;
        ensure!(
            d.moduli == expected,
            "(k, m) = ({k}, {m}): pipeline {} != {expected}",
            d.moduli
        );
        got.push(d.moduli);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("values {got:?} in {:.2?}", elapsed))
}

fn ac2() -> Outcome {
    let mut seen = Vec::new();
    for k in 1..=2 {
        for m in 1..=3u32 {
            let spec = SeparableSpec::torus_times_cp(k, m).map_err(|e| e.to_string())?;
            let model = spec.build_model().map_err(|e| e.to_string())?;
            let a = model.ambient();
            let g = a
                .index_by_name(&top_power_label(m))
                .map_err(|e| e.to_string())?;
            let reduced = model
                .reduce(&a.delta_on_generator(g))
                .map_err(|e| e.to_string())?;
            let beta = model
                .presentation()
                .generator("b⊗1_*")
                .map_err(|e| e.to_string())?;
            let (mono, one) = beta.terms().next().unwrap();
            ensure!(
                one.is_one() && reduced.len() == 1,
                "δ(y⊗(b^{m})_*) = {} is not a multiple of b⊗1_*",
                model.presentation().render(&reduced)
            );
            let c = reduced.coefficient(mono);
            let abs = if scalar::is_negative(&c) {
                -c.clone()
            } else {
                c.clone()
            };
            ensure!(
                abs == int(m as i64 + 1),
                "k = {k}, m = {m}: coefficient {c}"
            );
            if k == 1 {
                seen.push(scalar::render_short(&c));
            }
        }
    }
    Ok(format!("coefficients {} for m = 1, 2, 3", seen.join(", ")))
}

fn ac3() -> Outcome {
    let mut count = 0;
    for k in 1..=3 {
        for m in 1..=2 {
            let spec = SeparableSpec::torus_times_cp(k, m).map_err(|e| e.to_string())?;
            let model = spec.build_model().map_err(|e| e.to_string())?;
            for [a, b] in spec.torus() {
                for t in [a, b] {
                    let nf = model
                        .normal_form(&format!("b⊗{t}_*"))
                        .map_err(|e| e.to_string())?;
                    ensure!(
                        nf.is_zero(),
                        "k = {k}, m = {m}: b⊗{t}_* ↦ {}",
                        model.presentation().render(&nf)
                    );
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} generators reduce to 0"))
}

fn ac4() -> Outcome {
    let c = pascal(12);
    let mut checked = Vec::new();
    for (k, m) in [
        (1usize, 1u32),
        (1, 2),
        (1, 3),
        (2, 1),
        (2, 2),
        (3, 1),
        (3, 2),
    ] {
        let spec = SeparableSpec::torus_times_cp(k, m).map_err(|e| e.to_string())?;
        let model = spec.build_model().map_err(|e| e.to_string())?;
        let expected = 2 * k as u64
            + (0..=m.min(k as u32) as usize)
                .map(|s| c[2 * k][2 * s])
                .sum::<u64>();
        let basis = model.degree_one_basis();
        ensure!(
            basis.len() as u64 == expected,
            "(k, m) = ({k}, {m}): |(E/M_u)¹| = {} != {expected}",
            basis.len()
        );
        let h1 = model.h1_aut1().map_err(|e| e.to_string())?;
        let mut names: Vec<&str> = h1.classes.iter().map(|c| c.name.as_str()).collect();
        names.sort();
        let top = top_power_label(m);
        let mut rest: Vec<&str> = basis.iter().copied().filter(|n| *n != top).collect();
        rest.sort();
        ensure!(names == rest, "(k, m) = ({k}, {m}): H¹ basis {names:?}");
        // the excluded class really is not a cocycle
        let p = model.presentation();
        let i = p.index_of(&top).map_err(|e| e.to_string())?;
        ensure!(!p.differential_of(i).is_zero(), "δ({top}) = 0");
        checked.push(format!("({k},{m}):{}", basis.len()));
    }
    Ok(format!("cardinalities {}", checked.join(" ")))
}

fn ac5() -> Outcome {
    let mut n = 0;
    for a in -3..=3 {
        for b in -3..=3 {
            let v = torus_over_s2_check(a, b).map_err(|e| e.to_string())?;
            ensure!(
                v.extendable == (a == 0 && b == 0),
                "({a}, {b}) → {}",
                v.extendable
            );
            n += 1;
        }
    }
    Ok(format!("{n} pairs"))
}

/// Dimension of the degree-1 part for a nilmanifold computed directly:
/// each degree-0 generator `x_i ⊗ (x_j)_*` contributes the relation
/// `∂(d x_i)/∂x_j` among the `x ⊗ 1_*`, so the answer is `n` minus the rank
/// of all those partial derivatives.
fn nil_oracle(n: usize, quadratic: &[(usize, usize, usize, i64)]) -> usize {
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Scalar::zero(); n];
            for &(target, a, b, c) in quadratic {
                if target != i {
                    continue;
                }
                // d x_i ∋ c x_a x_b: derivative from the left in x_j
                if a == j {
                    row[b] += int(c);
                }
                if b == j {
                    row[a] -= int(c);
                }
            }
            rows.push(row);
        }
    }
    n - Matrix::from_rows(n, rows).rank()
}

fn ac6() -> Outcome {
    let mut report = Vec::new();
    for n in 1..=6 {
        let nil = NilmanifoldModel::torus(n).map_err(|e| e.to_string())?;
        let model = nil.build_model().map_err(|e| e.to_string())?;
        let (delta, _) = model.delta_matrix().map_err(|e| e.to_string())?;
        ensure!(delta.is_zero(), "T^{n}: δ ≠ 0 on degree 1");
        let gens = baut1_poly_generators(&model).map_err(|e| e.to_string())?;
        ensure!(
            gens.count() == n && n == nil_oracle(n, &[]),
            "T^{n}: {} generators",
            gens.count()
        );
        report.push(format!("T^{n}:{}", gens.count()));
    }
    let kt = NilmanifoldModel::kodaira_thurston().map_err(|e| e.to_string())?;
    let model = kt.build_model().map_err(|e| e.to_string())?;
    let (delta, _) = model.delta_matrix().map_err(|e| e.to_string())?;
    ensure!(delta.is_zero(), "KT: δ ≠ 0 on degree 1");
    let gens = baut1_poly_generators(&model).map_err(|e| e.to_string())?;
    let oracle = nil_oracle(4, &[(3, 0, 1, 1)]);
    ensure!(
        gens.count() == 2 && oracle == 2,
        "KT: engine {} oracle {oracle}",
        gens.count()
    );
    report.push(format!("KT:{}", gens.count()));
    Ok(report.join(" "))
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let x = random_scalar(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn random_vanishing(rng: &mut ChaCha8Rng, basis: &[Vec<Scalar>], n: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    for b in basis {
        let c = random_scalar(rng);
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    v
}

fn composite(f: &ClassifyingData, k: &KappaMap) -> Matrix {
    f.matrix.mul(&k.matrix)
}

fn ac7() -> Outcome {
    let spec = SeparableSpec::torus_times_cp(2, 1).map_err(|e| e.to_string())?;
    let model = spec.build_model().map_err(|e| e.to_string())?;
    let kap = kappa(&spec, &model).map_err(|e| e.to_string())?;
    let w2 = kap.w2_basis.clone();
    let n = w2.len();
    let ker = extendable_functionals(&kap);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data = |v: Vec<Scalar>| ClassifyingData::over_s2(w2.clone(), v).unwrap();
    for trial in 0..200 {
        let f = data(random_vanishing(&mut rng, &ker, n));
        let g = data(random_vanishing(&mut rng, &ker, n));
        ensure!(
            composite(&f, &kap).is_zero() && composite(&g, &kap).is_zero(),
            "trial {trial}: sample does not vanish on Im κ"
        );
        let s = sum_classifying(&f, &g).map_err(|e| e.to_string())?;
        for x in [&f, &g, &s] {
            let v = is_extendable(&kap, x).map_err(|e| e.to_string())?;
            ensure!(
                v.extendable && v.witness.is_none(),
                "trial {trial}: closure fails"
            );
        }
    }
    let mut witnesses = 0;
    for trial in 0..200 {
        let mut f: Vec<Scalar> = random_vanishing(&mut rng, &ker, n);
        // push f off the subspace along a class in Im κ
        let j = rng.gen_range(0..2 * spec.k());
        let row = (0..n).find(|&r| !kap.matrix.get(r, j).is_zero()).unwrap();
        f[row] += random_nonzero(&mut rng);
        let f = data(f);
        let g = if rng.gen_bool(0.5) {
            data(random_vanishing(&mut rng, &ker, n))
        } else {
            data((0..n).map(|_| random_scalar(&mut rng)).collect())
        };
        let s = sum_classifying(&f, &g).map_err(|e| e.to_string())?;
        for x in [&f, &g, &s] {
            let v = is_extendable(&kap, x).map_err(|e| e.to_string())?;
            let comp = composite(x, &kap);
            ensure!(
                v.extendable == comp.is_zero(),
                "trial {trial}: verdict disagrees with H²(f)∘κ"
            );
            if let Some(w) = v.witness {
                let col = kap.source.iter().position(|s| *s == w.class).unwrap();
                ensure!(
                    w.image.iter().any(|c| !c.is_zero()),
                    "trial {trial}: witness {} has zero image",
                    w.class
                );
                ensure!(
                    w.image == comp.column(col),
                    "trial {trial}: witness image differs from H²(f)∘κ({})",
                    w.class
                );
                witnesses += 1;
            }
        }
        ensure!(
            !is_extendable(&kap, &f).unwrap().extendable,
            "trial {trial}: f off the subspace judged extendable"
        );
    }
    Ok(format!(
        "dim W² = {n}, 200 closed pairs, {witnesses} witnesses verified"
    ))
}

fn law_presentations() -> Vec<GcaPresentation> {
    let mixed = {
        let p = GcaPresentation::from_degrees([
            ("x1", 1),
            ("x2", 1),
            ("x3", 1),
            ("x4", 1),
            ("b", 2),
            ("y", 3),
        ])
        .unwrap();
        let dx4 = p.poly(&[(int(1), &[("x1", 1), ("x2", 1)])]).unwrap();
        let dy = p
            .poly(&[
                (int(1), &[("b", 2)]),
                (int(1), &[("x1", 1), ("x2", 1), ("b", 1)]),
            ])
            .unwrap();
        p.with_differential("x4", dx4)
            .unwrap()
            .with_differential("y", dy)
            .unwrap()
    };
    let sphere = {
        let p = GcaPresentation::from_degrees([("a", 4), ("z", 7)]).unwrap();
        let dz = p.poly(&[(ratio(3, 2), &[("a", 2)])]).unwrap();
        p.with_differential("z", dz).unwrap()
    };
    let kt = NilmanifoldModel::kodaira_thurston()
        .unwrap()
        .presentation()
        .clone();
    let cp = SeparableSpec::torus_times_cp(1, 2)
        .unwrap()
        .full_model()
        .unwrap();
    vec![mixed, sphere, kt, cp]
}

fn random_poly(p: &GcaPresentation, rng: &mut ChaCha8Rng) -> (Poly, i32) {
    loop {
        let n = rng.gen_range(0..=5);
        let basis = p.basis_in_degree(n).unwrap();
        if basis.is_empty() {
            continue;
        }
        let coords: Vec<Scalar> = basis.iter().map(|_| random_scalar(rng)).collect();
        return (p.from_coordinates(&coords, &basis), n);
    }
}

fn dual_coalgebras() -> Vec<DualCoalgebra> {
    let mut out = Vec::new();
    let kt = NilmanifoldModel::kodaira_thurston().unwrap();
    out.push(DualCoalgebra::dualize(
        &kt.mapping_input().unwrap().coefficients,
    ));
    out.push(DualCoalgebra::dualize(
        &SeparableSpec::torus_times_cp(1, 2)
            .unwrap()
            .mapping_input()
            .unwrap()
            .coefficients,
    ));
    let p = GcaPresentation::from_degrees([("b", 2), ("c", 2), ("x", 3)]).unwrap();
    out.push(DualCoalgebra::dualize(
        &FiniteDga::truncated(&p, &[("b", 2), ("c", 1)]).unwrap(),
    ));
    out
}

type Tensor = BTreeMap<Vec<usize>, Scalar>;

fn add_to(t: &mut Tensor, key: Vec<usize>, c: Scalar) {
    let e = t.entry(key).or_insert_with(Scalar::zero);
    *e += c;
}

fn clean(mut t: Tensor) -> Tensor {
    t.retain(|_, c| !c.is_zero());
    t
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let presentations = law_presentations();
    let coalgebras = dual_coalgebras();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..1000 {
        let p = &presentations[case % presentations.len()];
        let (a, da) = random_poly(p, &mut rng);
        let (b, db) = random_poly(p, &mut rng);
        let ab = p.multiply(&a, &b).unwrap();
        let ba = p.multiply(&b, &a).unwrap();
        ensure!(
            ab == p.scale(&ba, &scalar::sign((da * db) as i64)).unwrap(),
            "case {case}: Koszul commutativity"
        );
        let lhs = p.apply_d(&ab).unwrap();
        let rhs = p
            .add(
                &p.multiply(&p.apply_d(&a).unwrap(), &b).unwrap(),
                &p.scale(
                    &p.multiply(&a, &p.apply_d(&b).unwrap()).unwrap(),
                    &scalar::sign(da as i64),
                )
                .unwrap(),
            )
            .unwrap();
        ensure!(lhs == rhs, "case {case}: Leibniz");
        ensure!(
            p.apply_d(&p.apply_d(&ab).unwrap()).unwrap().is_zero(),
            "case {case}: d² on a product"
        );

        let c = &coalgebras[case % coalgebras.len()];
        let mut e = DualElement {
            coeffs: Default::default(),
        };
        for j in 0..c.dim() {
            if rng.gen_bool(0.3) {
                e.coeffs.insert(j, random_nonzero(&mut rng));
            }
        }
        // (Δ ⊗ 1)Δ versus (1 ⊗ Δ)Δ, term by term
        let mut left = Tensor::new();
        for t in c.iterated_coproduct(&e, 2) {
            add_to(&mut left, t.slots.clone(), t.coeff.clone());
        }
        let mut right = Tensor::new();
        let mut counit_left = Tensor::new();
        let mut counit_right = Tensor::new();
        let unit = c.dga().unit();
        for t in c.coproduct_of(&e) {
            let (i, j) = (t.slots[0], t.slots[1]);
            for (x, y, k) in c.coproduct(j) {
                add_to(&mut right, vec![i, *x, *y], &t.coeff * k);
            }
            if i == unit {
                add_to(&mut counit_left, vec![j], t.coeff.clone());
            }
            if j == unit {
                add_to(&mut counit_right, vec![i], t.coeff.clone());
            }
        }
        ensure!(clean(left) == clean(right), "case {case}: coassociativity");
        let expected: Tensor = clean(
            e.coeffs
                .iter()
                .map(|(j, x)| (vec![*j], x.clone()))
                .collect(),
        );
        ensure!(
            clean(counit_left) == expected && clean(counit_right) == expected,
            "case {case}: counit"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("1000 cases in {elapsed:.2?}"))
}

fn verdicts(k: &KappaMap, fs: &[Vec<Scalar>]) -> Vec<(bool, Option<String>)> {
    fs.iter()
        .map(|v| {
            let f = ClassifyingData::over_s2(k.w2_basis.clone(), v.clone()).unwrap();
            let r = is_extendable(k, &f).unwrap();
            (r.extendable, r.witness.map(|w| w.class))
        })
        .collect()
}

fn ac9() -> Outcome {
    let mut specs = 0;
    for k in 0..=3usize {
        for m in 0..=3u32 {
            if 2 * k + 2 * m as usize > 10 {
                continue;
            }
            let spec = SeparableSpec::torus_times_cp(k, m).map_err(|e| e.to_string())?;
            let model = spec.build_model().map_err(|e| e.to_string())?;
            let kap = kappa(&spec, &model).map_err(|e| e.to_string())?;
            ensure!(
                kap.rank() == 2 * k,
                "(k, m) = ({k}, {m}): rank {}",
                kap.rank()
            );
            specs += 1;
        }
    }

    let spec = SeparableSpec::torus_times_cp(2, 1).map_err(|e| e.to_string())?;
    let model = spec.build_model().map_err(|e| e.to_string())?;
    let base = kappa(&spec, &model).map_err(|e| e.to_string())?;
    let n = base.w2_basis.len();
    let ker = extendable_functionals(&base);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut fs: Vec<Vec<Scalar>> = (0..10)
        .map(|_| random_vanishing(&mut rng, &ker, n))
        .collect();
    fs.extend((0..10).map(|_| (0..n).map(|_| random_scalar(&mut rng)).collect::<Vec<_>>()));
    let expected = verdicts(&base, &fs);

    for trial in 0..50 {
        let q_i = (0..spec.k()).map(|_| random_nonzero(&mut rng)).collect();
        let scaled = spec
            .with_coefficients(random_nonzero(&mut rng), q_i)
            .map_err(|e| e.to_string())?;
        let m2 = scaled.build_model().map_err(|e| e.to_string())?;
        let k2 = kappa(&scaled, &m2).map_err(|e| e.to_string())?;
        ensure!(
            k2.w2_basis == base.w2_basis,
            "q-trial {trial}: W² basis changed"
        );
        ensure!(
            verdicts(&k2, &fs) == expected,
            "q-trial {trial}: verdicts changed"
        );
    }
    for trial in 0..50 {
        let mut input = spec.mapping_input().map_err(|e| e.to_string())?;
        let factors: Vec<Scalar> = (0..input.model.len())
            .map(|_| random_nonzero(&mut rng))
            .collect();
        input.eta = input
            .eta
            .rescaled(&input.model, &input.coefficients, &factors)
            .map_err(|e| e.to_string())?;
        let m2 = reduce_mod_mu(Ambient::new(input).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let k2 = kappa(&spec, &m2).map_err(|e| e.to_string())?;
        ensure!(
            m2.degree_one_basis() == model.degree_one_basis(),
            "η-trial {trial}: degree-1 basis changed"
        );
        ensure!(
            k2.w2_basis == base.w2_basis && k2.rank() == base.rank(),
            "η-trial {trial}: W² or rank changed"
        );
        ensure!(
            verdicts(&k2, &fs) == expected,
            "η-trial {trial}: verdicts changed"
        );
    }
    Ok(format!(
        "rank 2k on {specs} specs; 50 q-rescalings and 50 η-rescalings"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "binomial corollary", ac1),
        ("AC2", "(m+1) differential coefficient", ac2),
        ("AC3", "ideal membership of b⊗t_*", ac3),
        ("AC4", "degree-1 roster and H¹", ac4),
        ("AC5", "torus over S² dichotomy", ac5),
        ("AC6", "nilmanifold vanishing", ac6),
        ("AC7", "closure and witnesses", ac7),
        ("AC8", "randomized algebra laws", ac8),
        ("AC9", "κ rank and rescaling invariance", ac9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, title, f) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
