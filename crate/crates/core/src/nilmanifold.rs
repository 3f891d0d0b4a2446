//! Nilmanifolds: models `Λ(x_1, …, x_n)` with every `x_i` of degree 1 and
//! `d(x_i) ∈ Λ(x_1, …, x_{i-1})`.
//!
//! Here `δ` vanishes on the degree-1 part of the mapping-space model, so
//! `H*(Baut₁N)` is polynomial on one degree-2 class per basis element of
//! that part, and a fibration extends `[ω]` iff `H*(f)` kills all of them.

use crate::bs_model::{reduce_mod_mu, Ambient, BsError, BsModel, MappingSpaceInput};
use crate::coalgebra::{CoalgebraError, FiniteDga, QuasiIso};
use crate::gca::{GcaError, GcaPresentation, Poly};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::sep_symplectic::Verdict;

#[derive(Debug, thiserror::Error)]
pub enum NilError {
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error(transparent)]
    Bs(#[from] BsError),
    #[error("not a nilmanifold model: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("δ is nonzero on degree 1: {}", .0.join("; "))]
    NonvanishingDelta(Vec<String>),
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Problems with a candidate model; empty iff every generator has degree 1,
/// the differential is strictly lower-triangular for `order`, and `d² = 0`.
pub fn validate_nil(pres: &GcaPresentation, order: &[String]) -> Vec<String> {
    let mut report = Vec::new();
    if order.len() != pres.len() {
        report.push(format!(
            "order lists {} generators, model has {}",
            order.len(),
            pres.len()
        ));
        return report;
    }
    let mut position = vec![usize::MAX; pres.len()];
    for (i, name) in order.iter().enumerate() {
        match pres.index_of(name) {
            Ok(g) => position[g] = i,
            Err(_) => report.push(format!("`{name}` is not a generator")),
        }
    }
    if !report.is_empty() {
        return report;
    }
    for (g, gen) in pres.generators().iter().enumerate() {
        if gen.degree != 1 {
            report.push(format!("`{}` has degree {}", gen.name, gen.degree));
        }
        for (m, _) in pres.differential_of(g).terms() {
            if let Some(&(h, _)) = m
                .factors()
                .iter()
                .find(|&&(h, _)| position[h] >= position[g])
            {
                report.push(format!(
                    "d({}) involves `{}`",
                    gen.name,
                    pres.generator_at(h).name
                ));
                break;
            }
        }
    }
    for v in pres.check_d_squared() {
        report.push(format!("d²({}) = {}", v.generator, v.value));
    }
    report
}

#[derive(Clone, Debug)]
pub struct NilmanifoldModel {
    pres: GcaPresentation,
    order: Vec<String>,
    symplectic: Option<Poly>,
}

impl NilmanifoldModel {
    pub fn new(pres: GcaPresentation, order: Vec<String>) -> Result<Self, NilError> {
        let report = validate_nil(&pres, &order);
        if !report.is_empty() {
            return Err(NilError::Invalid(report));
        }
        Ok(NilmanifoldModel {
            pres,
            order,
            symplectic: None,
        })
    }

    /// Generators `x1 … xn` in that order, with zero differential.
    pub fn torus(n: usize) -> Result<Self, NilError> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let pres = GcaPresentation::from_degrees(names.iter().map(|s| (s.as_str(), 1)))?;
        Self::new(pres, names)
    }

    /// `Λ(x1, x2, x3, x4)` with `d x4 = x1 x2`.
    pub fn kodaira_thurston() -> Result<Self, NilError> {
        let t = Self::torus(4)?;
        let p = t.pres;
        let dx4 = p.multiply(&p.generator("x1")?, &p.generator("x2")?)?;
        Self::new(p.with_differential("x4", dx4)?, t.order)
    }

    /// Attaches a symplectic class: a closed degree-2 element whose top
    /// power is nonzero in cohomology.
    pub fn with_symplectic(mut self, omega: Poly) -> Result<Self, NilError> {
        let p = &self.pres;
        let mut problems = Vec::new();
        if p.degree(&omega)? != Some(2) {
            problems.push("ω must be a nonzero element of degree 2".to_string());
        } else if !p.apply_d(&omega)?.is_zero() {
            problems.push("ω is not closed".to_string());
        } else if p.len() % 2 == 1 {
            problems.push("odd dimension".to_string());
        } else {
            let n = p.len() as i32;
            let top = p.power(&omega, (n / 2) as u32)?;
            let basis = p.basis_in_degree(n)?;
            let boundaries = p.differential_matrix(&p.basis_in_degree(n - 1)?, &basis)?;
            if boundaries.solve(&p.coordinates(&top, &basis)?).is_some() {
                problems.push("[ω]^n vanishes".to_string());
            }
        }
        if !problems.is_empty() {
            return Err(NilError::Invalid(problems));
        }
        self.symplectic = Some(omega);
        Ok(self)
    }

    pub fn presentation(&self) -> &GcaPresentation {
        &self.pres
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn symplectic(&self) -> Option<&Poly> {
        self.symplectic.as_ref()
    }

    /// `B = ΛZ` itself (finite since all generators are odd), `η = id`.
    pub fn mapping_input(&self) -> Result<MappingSpaceInput, NilError> {
        let b = FiniteDga::truncated(&self.pres, &[])?;
        let eta = QuasiIso::identity(&self.pres, &b)?;
        Ok(MappingSpaceInput {
            model: self.pres.clone(),
            coefficients: b,
            eta,
        })
    }

    pub fn build_model(&self) -> Result<BsModel, NilError> {
        Ok(reduce_mod_mu(Ambient::new(self.mapping_input()?)?)?)
    }
}

/// Degree-2 polynomial generators of `H*(Baut₁N)`, named `[g]` after the
/// degree-1 basis elements `g` of the reduced model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGenerators {
    pub names: Vec<String>,
}

impl PolyGenerators {
    pub fn count(&self) -> usize {
        self.names.len()
    }
}

pub fn baut1_poly_generators(model: &BsModel) -> Result<PolyGenerators, NilError> {
    let p = model.presentation();
    let bad: Vec<String> = (0..p.len())
        .filter(|&i| p.degree_of_generator(i) == 1 && !p.differential_of(i).is_zero())
        .map(|i| {
            format!(
                "δ({}) = {}",
                p.generator_at(i).name,
                p.render(p.differential_of(i))
            )
        })
        .collect();
    if !bad.is_empty() {
        return Err(NilError::NonvanishingDelta(bad));
    }
    Ok(PolyGenerators {
        names: model
            .degree_one_basis()
            .into_iter()
            .map(|n| format!("[{n}]"))
            .collect(),
    })
}

/// Extendable iff `H*(f)` vanishes on every polynomial generator. `values`
/// holds `H²(f)` of each generator as a vector over a basis of `H²(B)`.
pub fn is_extendable_nil(
    gens: &PolyGenerators,
    values: &[Vec<Scalar>],
) -> Result<Verdict, NilError> {
    if values.len() != gens.count() {
        return Err(NilError::DimensionMismatch {
            expected: gens.count(),
            found: values.len(),
        });
    }
    let rows = values.first().map_or(0, Vec::len);
    if let Some(v) = values.iter().find(|v| v.len() != rows) {
        return Err(NilError::DimensionMismatch {
            expected: rows,
            found: v.len(),
        });
    }
    let composite = Matrix::from_columns(rows, values);
    Ok(Verdict::from_composite(&gens.names, &composite))
}
