//! Extendability of the symplectic class for fibrations whose fibre is
//! `T^2k`-separable: the model splits as `⊗ Λ(t_i1, t_i2) ⊗ ΛZ` with
//! `[ω] = q[β] + Σ q_i [t_i1 t_i2]`.
//!
//! The detective map `κ: H¹(T^2k) → H²(Baut₁M)` sends `s_iλ` to the class of
//! `t_iλ ⊗ 1_*`, read in `W² ≅ H¹(aut₁M)`. A fibration with classifying data
//! `f` admits an extension of `[ω]` exactly when `f ∘ κ = 0`.

use num_traits::Zero;

use crate::bs_model::{
    mixed_name, reduce_mod_mu, Ambient, BsError, BsModel, H1Basis, MappingSpaceInput,
};
use crate::coalgebra::{pd_quasi_target, CoalgebraError, FiniteDga, QuasiIso, SparseVec};
use crate::gca::{GcaError, GcaPresentation, Generator, Poly};
use crate::linalg::Matrix;
use crate::scalar::{self, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum SepError {
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error(transparent)]
    Bs(#[from] BsError),
    #[error("invalid separable data: {0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A `T^2k`-separable model with its symplectic class.
#[derive(Clone, Debug)]
pub struct SeparableSpec {
    k: usize,
    zpart: GcaPresentation,
    beta: Option<String>,
    q: Scalar,
    q_i: Vec<Scalar>,
    /// Names of `(t_i1, t_i2)`; `s_iλ` maps to `t_iλ` under `p_M^*`.
    torus: Vec<[String; 2]>,
}

fn require(ok: bool, why: impl FnOnce() -> String) -> Result<(), SepError> {
    if ok {
        Ok(())
    } else {
        Err(SepError::InvalidSpec(why()))
    }
}

impl SeparableSpec {
    /// Torus generators are named `t{i}1`, `t{i}2`.
    pub fn new(
        k: usize,
        zpart: GcaPresentation,
        beta: Option<&str>,
        q: Scalar,
        q_i: Vec<Scalar>,
    ) -> Result<Self, SepError> {
        let torus = (1..=k)
            .map(|i| [format!("t{i}1"), format!("t{i}2")])
            .collect();
        Self::with_torus(torus, zpart, beta, q, q_i)
    }

    pub fn with_torus(
        torus: Vec<[String; 2]>,
        zpart: GcaPresentation,
        beta: Option<&str>,
        q: Scalar,
        q_i: Vec<Scalar>,
    ) -> Result<Self, SepError> {
        let k = torus.len();
        require(q_i.len() == k, || {
            format!("expected {k} torus coefficients, got {}", q_i.len())
        })?;
        require(q_i.iter().all(|x| !x.is_zero()), || {
            "torus coefficients must be nonzero".into()
        })?;
        if let Some(g) = zpart.generators().iter().find(|g| g.degree == 1) {
            return Err(SepError::InvalidSpec(format!(
                "`{}` has degree 1 in the simply-connected part",
                g.name
            )));
        }
        for name in torus.iter().flatten() {
            require(zpart.index_of(name).is_err(), || {
                format!("`{name}` is declared twice")
            })?;
        }
        match beta {
            Some(b) => {
                let i = zpart.index_of(b)?;
                require(zpart.degree_of_generator(i) == 2, || {
                    format!("`{b}` must have degree 2")
                })?;
                require(zpart.differential_of(i).is_zero(), || {
                    format!("`{b}` must be closed")
                })?;
                require(!q.is_zero(), || {
                    "the coefficient of β must be nonzero".into()
                })?;
            }
            None => require(zpart.is_empty(), || {
                "a nontrivial simply-connected part needs a class β".into()
            })?,
        }
        Ok(SeparableSpec {
            k,
            zpart,
            beta: beta.map(String::from),
            q,
            q_i,
            torus,
        })
    }

    /// `T^2k × CP(m)` with `ω = β + Σ t_i1 t_i2`; `m = 0` gives the torus.
    pub fn torus_times_cp(k: usize, m: u32) -> Result<Self, SepError> {
        let ones = vec![scalar::one(); k];
        if m == 0 {
            return Self::new(
                k,
                GcaPresentation::new(Vec::new())?,
                None,
                scalar::one(),
                ones,
            );
        }
        let z = GcaPresentation::from_degrees([("b", 2), ("y", 2 * m as i32 + 1)])?;
        let dy = z.power(&z.generator("b")?, m + 1)?;
        let z = z.with_differential("y", dy)?;
        Self::new(k, z, Some("b"), scalar::one(), ones)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn zpart(&self) -> &GcaPresentation {
        &self.zpart
    }

    pub fn beta(&self) -> Option<&str> {
        self.beta.as_deref()
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn q_i(&self) -> &[Scalar] {
        &self.q_i
    }

    pub fn torus(&self) -> &[[String; 2]] {
        &self.torus
    }

    /// Same spec with new coefficients.
    pub fn with_coefficients(&self, q: Scalar, q_i: Vec<Scalar>) -> Result<Self, SepError> {
        Self::with_torus(
            self.torus.clone(),
            self.zpart.clone(),
            self.beta.as_deref(),
            q,
            q_i,
        )
    }

    /// Names `s11, s12, …` of the basis of `H¹(T^2k)`.
    pub fn source_basis(&self) -> Vec<String> {
        (1..=self.k)
            .flat_map(|i| [format!("s{i}1"), format!("s{i}2")])
            .collect()
    }

    fn torus_generators(&self) -> Vec<Generator> {
        self.torus
            .iter()
            .flatten()
            .map(|n| Generator::new(n.clone(), 1))
            .collect()
    }

    /// `⊗ Λ(t_i1, t_i2) ⊗ ΛZ`.
    pub fn full_model(&self) -> Result<GcaPresentation, SepError> {
        let mut gens = self.torus_generators();
        gens.extend(self.zpart.generators().iter().cloned());
        let mut p = GcaPresentation::new(gens)?;
        for (i, g) in self.zpart.generators().iter().enumerate() {
            let d = p.transport(self.zpart.differential_of(i), &self.zpart)?;
            p.set_differential(&g.name, d)?;
        }
        Ok(p)
    }

    /// `q β + Σ q_i t_i1 t_i2` in the full model.
    pub fn symplectic_form(&self) -> Result<Poly, SepError> {
        let p = self.full_model()?;
        let mut w = p.zero();
        if let Some(b) = &self.beta {
            w = p.add(&w, &p.scale(&p.generator(b)?, &self.q)?)?;
        }
        for ([a, b], c) in self.torus.iter().zip(&self.q_i) {
            let t = p.multiply(&p.generator(a)?, &p.generator(b)?)?;
            w = p.add(&w, &p.scale(&t, c)?)?;
        }
        Ok(w)
    }

    /// Full model, finite model `B` (torus exterior algebra tensor a
    /// truncated polynomial algebra on `β`) and `η` between them.
    pub fn mapping_input(&self) -> Result<MappingSpaceInput, SepError> {
        let model = self.full_model()?;
        let pd = pd_quasi_target(&self.zpart)?;
        let mut gens = self.torus_generators();
        gens.extend(pd.generators.iter().cloned());
        let base = GcaPresentation::new(gens)?;
        let caps: Vec<(&str, u32)> = pd.caps.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        let b = FiniteDga::truncated(&base, &caps)?;
        let mut images = Vec::new();
        for name in self.torus.iter().flatten() {
            images.push((name.clone(), unit_vector(&b, name)?));
        }
        for (name, target) in &pd.images {
            let v = match target {
                Some(t) => unit_vector(&b, t)?,
                None => SparseVec::new(),
            };
            images.push((name.clone(), v));
        }
        let eta = QuasiIso::new(&model, &b, images)?;
        Ok(MappingSpaceInput {
            model,
            coefficients: b,
            eta,
        })
    }

    /// The reduced mapping-space model of `aut₁M`.
    pub fn build_model(&self) -> Result<BsModel, SepError> {
        Ok(reduce_mod_mu(Ambient::new(self.mapping_input()?)?)?)
    }
}

fn unit_vector(b: &FiniteDga, label: &str) -> Result<SparseVec, SepError> {
    let k = b
        .index_of(label)
        .ok_or_else(|| SepError::InvalidSpec(format!("no basis element `{label}`")))?;
    Ok(SparseVec::from([(k, scalar::one())]))
}

/// `κ` as a matrix: column `s_iλ` holds the coordinates of `[t_iλ ⊗ 1_*]`
/// in the `W²` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaMap {
    pub source: Vec<String>,
    pub w2_basis: Vec<String>,
    pub matrix: Matrix,
}

impl KappaMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Names of the `W²` elements hit by some `κ(s_iλ)`.
    pub fn image_support(&self) -> Vec<&str> {
        (0..self.matrix.rows())
            .filter(|&r| self.matrix.row(r).iter().any(|x| !x.is_zero()))
            .map(|r| self.w2_basis[r].as_str())
            .collect()
    }
}

/// `W² ≅ H¹(aut₁M)` with the basis chosen by the reduction.
pub fn w2_basis(model: &BsModel) -> Result<H1Basis, SepError> {
    Ok(model.h1_aut1()?)
}

pub fn kappa(spec: &SeparableSpec, model: &BsModel) -> Result<KappaMap, SepError> {
    let h1 = model.h1_aut1()?;
    let mut cols = Vec::with_capacity(2 * spec.k);
    for name in spec.torus.iter().flatten() {
        let nf = model.normal_form(&mixed_name(name, "1"))?;
        let v = model.degree_one_coordinates(&nf)?;
        let c = h1
            .coordinates(&v)
            .ok_or_else(|| BsError::ModelInconsistency(format!("{name}⊗1_* is not a cocycle")))?;
        cols.push(c);
    }
    Ok(KappaMap {
        source: spec.source_basis(),
        w2_basis: h1.classes.iter().map(|c| c.name.clone()).collect(),
        matrix: Matrix::from_columns(h1.dim(), &cols),
    })
}

/// `H²(f)` restricted to `W²`: row `r` gives the component along the
/// `r`-th basis element of `H²(B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyingData {
    pub w2_basis: Vec<String>,
    pub target_basis: Vec<String>,
    pub matrix: Matrix,
}

impl ClassifyingData {
    pub fn new(
        w2_basis: Vec<String>,
        target_basis: Vec<String>,
        matrix: Matrix,
    ) -> Result<Self, SepError> {
        check_dim(target_basis.len(), matrix.rows())?;
        check_dim(w2_basis.len(), matrix.cols())?;
        Ok(ClassifyingData {
            w2_basis,
            target_basis,
            matrix,
        })
    }

    /// Base `S²`: a single functional on `W²`.
    pub fn over_s2(w2_basis: Vec<String>, values: Vec<Scalar>) -> Result<Self, SepError> {
        let n = w2_basis.len();
        check_dim(n, values.len())?;
        Self::new(
            w2_basis,
            vec!["u".into()],
            Matrix::from_rows(n, vec![values]),
        )
    }

    pub fn zero(w2_basis: Vec<String>, target_basis: Vec<String>) -> Self {
        let matrix = Matrix::zeros(target_basis.len(), w2_basis.len());
        ClassifyingData {
            w2_basis,
            target_basis,
            matrix,
        }
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), SepError> {
    if expected == found {
        Ok(())
    } else {
        Err(SepError::DimensionMismatch { expected, found })
    }
}

/// A class of `H¹(T^2k)` whose image under `H²(f) ∘ κ` is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub class: String,
    pub image: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub extendable: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub(crate) fn from_composite(source: &[String], composite: &Matrix) -> Self {
        let witness = (0..composite.cols()).find_map(|c| {
            let image = composite.column(c);
            image.iter().any(|x| !x.is_zero()).then(|| Witness {
                class: source[c].clone(),
                image,
            })
        });
        Verdict {
            extendable: witness.is_none(),
            witness,
        }
    }
}

/// `[ω]` extends to the total space iff `H²(f) ∘ κ = 0`.
pub fn is_extendable(kappa: &KappaMap, f: &ClassifyingData) -> Result<Verdict, SepError> {
    check_dim(kappa.w2_basis.len(), f.w2_basis.len())?;
    if kappa.w2_basis != f.w2_basis {
        return Err(SepError::InvalidSpec(
            "classifying data uses a different W² basis".into(),
        ));
    }
    Ok(Verdict::from_composite(
        &kappa.source,
        &f.matrix.mul(&kappa.matrix),
    ))
}

/// `H*(f ∗ f') = H*(f) + H*(f')` for fibrations over a co-H-space.
pub fn sum_classifying(
    f: &ClassifyingData,
    g: &ClassifyingData,
) -> Result<ClassifyingData, SepError> {
    if f.w2_basis != g.w2_basis || f.target_basis != g.target_basis {
        return Err(SepError::DimensionMismatch {
            expected: f.matrix.rows() * f.matrix.cols(),
            found: g.matrix.rows() * g.matrix.cols(),
        });
    }
    Ok(ClassifyingData {
        w2_basis: f.w2_basis.clone(),
        target_basis: f.target_basis.clone(),
        matrix: f.matrix.add(&g.matrix),
    })
}

/// Basis of the functionals on `W²` that vanish on `Im κ`, i.e. the
/// extendable classifying data over `S²`.
pub fn extendable_functionals(kappa: &KappaMap) -> Vec<Vec<Scalar>> {
    kappa.matrix.transpose().kernel()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuliDim {
    pub w2: usize,
    pub moduli: usize,
}

/// `dim W² − 2k`, the rank of the extendable fibrations over `S²`.
pub fn moduli_dim_s2(spec: &SeparableSpec, model: &BsModel) -> Result<ModuliDim, SepError> {
    let w2 = model.h1_aut1()?.dim();
    let moduli = w2
        .checked_sub(2 * spec.k)
        .ok_or_else(|| BsError::ModelInconsistency(format!("dim W² = {w2} is below 2k")))?;
    Ok(ModuliDim { w2, moduli })
}

/// `Σ_{s=1}^{min(m,k)} C(2k, 2s)`.
pub fn corollary_dim_closed_form(k: u64, m: u64) -> u64 {
    (1..=m.min(k))
        .map(|s| num_integer::binomial(2 * k, 2 * s))
        .sum()
}

/// `T²` over `S²` with classifying data `(a, b)` on `[t11⊗1_*], [t12⊗1_*]`.
pub fn torus_over_s2_check(a: i64, b: i64) -> Result<Verdict, SepError> {
    let spec = SeparableSpec::torus_times_cp(1, 0)?;
    let model = spec.build_model()?;
    let kappa = kappa(&spec, &model)?;
    let f = ClassifyingData::over_s2(kappa.w2_basis.clone(), vec![scalar::int(a), scalar::int(b)])?;
    is_extendable(&kappa, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn pascal(n: usize) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![1u64]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u64; i + 1];
            for j in 1..i {
                row[j] = prev[j - 1] + prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(corollary_dim_closed_form(1, 1), 1);
        assert_eq!(corollary_dim_closed_form(2, 1), 6);
        assert_eq!(corollary_dim_closed_form(3, 2), 30);
        let c = pascal(12);
        for k in 1..=6u64 {
            for m in 1..=6u64 {
                let expected: u64 = (1..=m.min(k))
                    .map(|s| c[2 * k as usize][2 * s as usize])
                    .sum();
                assert_eq!(corollary_dim_closed_form(k, m), expected);
            }
        }
    }

    #[test]
    fn kappa_on_torus_times_cp1() {
        let spec = SeparableSpec::torus_times_cp(1, 1).unwrap();
        let model = spec.build_model().unwrap();
        let k = kappa(&spec, &model).unwrap();
        assert_eq!(k.w2_basis.len(), 3);
        assert_eq!(k.rank(), 2);
        assert_eq!(k.image_support(), vec!["t11⊗1_*", "t12⊗1_*"]);
        assert_eq!(
            moduli_dim_s2(&spec, &model).unwrap(),
            ModuliDim { w2: 3, moduli: 1 }
        );
        assert_eq!(extendable_functionals(&k).len(), 1);
    }

    #[test]
    fn trivial_fibre_part() {
        let spec = SeparableSpec::torus_times_cp(0, 0).unwrap();
        let model = spec.build_model().unwrap();
        let k = kappa(&spec, &model).unwrap();
        assert_eq!(k.rank(), 0);
        assert_eq!(moduli_dim_s2(&spec, &model).unwrap().moduli, 0);
    }

    #[test]
    fn torus_alone_has_no_moduli() {
        for k in 1..=3 {
            let spec = SeparableSpec::torus_times_cp(k, 0).unwrap();
            let model = spec.build_model().unwrap();
            assert_eq!(
                moduli_dim_s2(&spec, &model).unwrap(),
                ModuliDim {
                    w2: 2 * k,
                    moduli: 0
                }
            );
        }
    }

    #[test]
    fn torus_over_sphere_examples() {
        assert!(torus_over_s2_check(0, 0).unwrap().extendable);
        let v = torus_over_s2_check(1, 0).unwrap();
        assert!(!v.extendable);
        assert_eq!(v.witness.unwrap().class, "s11");
        assert!(!torus_over_s2_check(0, -3).unwrap().extendable);
    }

    #[test]
    fn verdicts_on_torus_times_cp1() {
        let spec = SeparableSpec::torus_times_cp(1, 1).unwrap();
        let model = spec.build_model().unwrap();
        let k = kappa(&spec, &model).unwrap();
        let n = k.w2_basis.len();
        let zero = ClassifyingData::over_s2(k.w2_basis.clone(), vec![int(0); n]).unwrap();
        assert!(is_extendable(&k, &zero).unwrap().extendable);
        // nonzero only on the class outside Im κ
        let mut values = vec![int(0); n];
        let off = k.w2_basis.iter().position(|b| !b.starts_with('t')).unwrap();
        values[off] = ratio(5, 2);
        let f = ClassifyingData::over_s2(k.w2_basis.clone(), values.clone()).unwrap();
        assert!(is_extendable(&k, &f).unwrap().extendable);
        let neg = ClassifyingData::over_s2(
            k.w2_basis.clone(),
            values.iter().map(|x| -x.clone()).collect(),
        )
        .unwrap();
        let sum = sum_classifying(&f, &neg).unwrap();
        assert!(sum.matrix.is_zero());
        assert_eq!(sum_classifying(&f, &zero).unwrap(), f);
    }

    #[test]
    fn mismatched_data_is_rejected() {
        let spec = SeparableSpec::torus_times_cp(1, 1).unwrap();
        let model = spec.build_model().unwrap();
        let k = kappa(&spec, &model).unwrap();
        let f = ClassifyingData::over_s2(vec!["a".into()], vec![int(1)]).unwrap();
        assert!(matches!(
            is_extendable(&k, &f),
            Err(SepError::DimensionMismatch { .. })
        ));
        assert!(ClassifyingData::over_s2(vec!["a".into()], vec![]).is_err());
    }

    #[test]
    fn invalid_specs() {
        let z = GcaPresentation::from_degrees([("b", 2), ("y", 3)]).unwrap();
        assert!(SeparableSpec::new(1, z.clone(), Some("b"), int(1), vec![int(0)]).is_err());
        assert!(SeparableSpec::new(1, z.clone(), Some("b"), int(0), vec![int(1)]).is_err());
        assert!(SeparableSpec::new(1, z.clone(), Some("y"), int(1), vec![int(1)]).is_err());
        assert!(SeparableSpec::new(1, z, None, int(1), vec![int(1)]).is_err());
        let bad = GcaPresentation::from_degrees([("a", 1)]).unwrap();
        assert!(SeparableSpec::new(0, bad, None, int(1), vec![]).is_err());
    }

    #[test]
    fn symplectic_form_renders() {
        let spec = SeparableSpec::torus_times_cp(2, 1)
            .unwrap()
            .with_coefficients(int(3), vec![int(1), ratio(-1, 2)])
            .unwrap();
        let p = spec.full_model().unwrap();
        assert_eq!(
            p.render(&spec.symplectic_form().unwrap()),
            "t11*t12 - 1/2*t21*t22 + 3*b"
        );
    }
}
