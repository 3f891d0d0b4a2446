use num_traits::{One, Zero};

use super::dga::{FiniteDga, SparseVec};
use super::CoalgebraError;
use crate::gca::{GcaPresentation, Generator, Poly};
use crate::scalar::Scalar;

/// A DGA map `η: (ΛV, d) → (B, d)` given on generators.
#[derive(Clone, Debug)]
pub struct QuasiIso {
    /// `images[i]` is `η` of generator `i` of the source presentation.
    images: Vec<SparseVec>,
}

impl QuasiIso {
    pub fn new(
        source: &GcaPresentation,
        target: &FiniteDga,
        images: Vec<(String, SparseVec)>,
    ) -> Result<Self, CoalgebraError> {
        let mut out = vec![SparseVec::new(); source.len()];
        for (name, v) in images {
            let i = source.index_of(&name)?;
            let deg = source.degree_of_generator(i);
            if v.keys().any(|&k| target.degree(k) != deg) {
                return Err(CoalgebraError::NotAChainMap(format!(
                    "η({name}) has the wrong degree"
                )));
            }
            out[i] = v;
        }
        let eta = QuasiIso { images: out };
        eta.check_chain_map(source, target)?;
        Ok(eta)
    }

    /// `η(v) = v` for a presentation that is itself finite-dimensional
    /// (all generators odd), with `B` its own truncation.
    pub fn identity(source: &GcaPresentation, target: &FiniteDga) -> Result<Self, CoalgebraError> {
        let images = source
            .generators()
            .iter()
            .map(|g| {
                let k = target.index_of(&g.name).ok_or_else(|| {
                    CoalgebraError::NotAChainMap(format!("no basis element `{}`", g.name))
                })?;
                Ok((g.name.clone(), SparseVec::from([(k, Scalar::one())])))
            })
            .collect::<Result<Vec<_>, CoalgebraError>>()?;
        Self::new(source, target, images)
    }

    pub fn image(&self, generator: usize) -> &SparseVec {
        &self.images[generator]
    }

    /// `η` on an arbitrary polynomial.
    pub fn apply(&self, target: &FiniteDga, p: &Poly) -> SparseVec {
        let mut out = SparseVec::new();
        let one = SparseVec::from([(target.unit(), Scalar::one())]);
        for (m, c) in p.terms() {
            let mut acc = one.clone();
            for g in m.sequence() {
                acc = target.multiply(&acc, &self.images[g]);
            }
            super::dga::add_into(&mut out, &acc, c);
        }
        out
    }

    /// Checks `η ∘ d = d ∘ η` on generators.
    pub fn check_chain_map(
        &self,
        source: &GcaPresentation,
        target: &FiniteDga,
    ) -> Result<(), CoalgebraError> {
        for i in 0..source.len() {
            let lhs = self.apply(target, source.differential_of(i));
            let rhs = target.apply_d(&self.images[i]);
            if lhs != rhs {
                return Err(CoalgebraError::NotAChainMap(format!(
                    "η(d {}) != d η({})",
                    source.generator_at(i).name,
                    source.generator_at(i).name
                )));
            }
        }
        Ok(())
    }

    /// Multiplies `η(v)` by `factors[v]`; the caller is responsible for the
    /// result still commuting with `d` (checked).
    pub fn rescaled(
        &self,
        source: &GcaPresentation,
        target: &FiniteDga,
        factors: &[Scalar],
    ) -> Result<Self, CoalgebraError> {
        let images = self
            .images
            .iter()
            .zip(factors)
            .map(|(v, f)| {
                v.iter()
                    .map(|(k, x)| (*k, x * f))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        let eta = QuasiIso { images };
        eta.check_chain_map(source, target)?;
        Ok(eta)
    }
}

/// A finite Poincaré-duality replacement for a simply-connected part of a
/// model, together with where its generators go.
#[derive(Clone, Debug)]
pub struct PdTarget {
    /// Generators of the replacement (even ones carry a truncation cap).
    pub generators: Vec<Generator>,
    pub caps: Vec<(String, u32)>,
    /// For each source generator: its image as a single replacement generator
    /// (`Some(name)`), or zero (`None`).
    pub images: Vec<(String, Option<String>)>,
    /// The finite algebra itself.
    pub algebra: FiniteDga,
}

/// Finite PD replacement for the supported simply-connected parts:
/// the trivial algebra, or `Λ(β, y)` with `dy = c·β^(m+1)`, `|β| = 2`,
/// replaced by `ℚ[β]/(β^(m+1))` with `η(β) = β`, `η(y) = 0`.
pub fn pd_quasi_target(z: &GcaPresentation) -> Result<PdTarget, CoalgebraError> {
    let empty = GcaPresentation::new(Vec::new())?;
    if z.is_empty() {
        return Ok(PdTarget {
            generators: Vec::new(),
            caps: Vec::new(),
            images: Vec::new(),
            algebra: FiniteDga::truncated(&empty, &[])?,
        });
    }
    let unsupported = |why: &str| CoalgebraError::Unsupported(why.to_string());
    if z.len() != 2 {
        return Err(unsupported(
            "only Λ(β, y) with dy = c·β^(m+1) is replaced automatically",
        ));
    }
    let (beta, y) = (z.generator_at(0), z.generator_at(1));
    if beta.degree != 2 || !y.is_odd() || !z.differential_of(0).is_zero() {
        return Err(unsupported(
            "expected a closed degree-2 generator and an odd generator",
        ));
    }
    let dy = z.differential_of(1);
    let mut terms = dy.terms();
    let (m_exp, coeff) = match (terms.next(), terms.next()) {
        (Some((mono, c)), None) if mono.factors() == [(0, mono.exponent(0))] => {
            (mono.exponent(0), c.clone())
        }
        _ => return Err(unsupported("dy must be a nonzero multiple of a power of β")),
    };
    if coeff.is_zero() || m_exp < 2 {
        return Err(unsupported("dy must be c·β^(m+1) with m ≥ 1"));
    }
    let m = m_exp - 1;
    let gens = vec![Generator::new(beta.name.clone(), 2)];
    let pres = GcaPresentation::new(gens.clone())?;
    let algebra = FiniteDga::truncated(&pres, &[(&beta.name, m)])?;
    Ok(PdTarget {
        generators: gens,
        caps: vec![(beta.name.clone(), m)],
        images: vec![
            (beta.name.clone(), Some(beta.name.clone())),
            (y.name.clone(), None),
        ],
        algebra,
    })
}
