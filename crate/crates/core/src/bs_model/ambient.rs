use std::collections::HashMap;

use num_traits::Zero;

use super::BsError;
use crate::coalgebra::{DualCoalgebra, DualElement, FiniteDga, QuasiIso};
use crate::gca::{DSquaredViolation, GcaPresentation, Generator, Poly};
use crate::scalar::{self, Scalar};

/// `τ(n) = ⌊(n + 1) / 2⌋`.
pub fn tau(n: i32) -> i32 {
    (n + 1).div_euclid(2)
}

/// The data a mapping-space model is built from: a Sullivan model `(ΛV, d)`
/// of the target, a finite model `B` of the source, and a DGA map
/// `η: ΛV → B` representing the base map (for the identity component of
/// self-maps, `η` is the quasi-isomorphism itself).
#[derive(Clone, Debug)]
pub struct MappingSpaceInput {
    pub model: GcaPresentation,
    pub coefficients: FiniteDga,
    pub eta: QuasiIso,
}

/// A generator `v ⊗ b_j*` of `Λ(V ⊗ B_*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGenerator {
    /// Index of `v` in the model presentation.
    pub v: usize,
    /// Index of `b_j` in the basis of `B`.
    pub e: usize,
    pub degree: i32,
    pub name: String,
}

/// The free algebra `Λ(V ⊗ B_*)` with its differential `δ`.
#[derive(Clone, Debug)]
pub struct Ambient {
    input: MappingSpaceInput,
    dual: DualCoalgebra,
    pres: GcaPresentation,
    gens: Vec<MixedGenerator>,
    /// `(v, e)` to index in `pres`.
    lookup: HashMap<(usize, usize), usize>,
}

pub fn mixed_name(v: &str, label: &str) -> String {
    if label.chars().all(|c| c.is_alphanumeric() || c == '_') {
        format!("{v}⊗{label}_*")
    } else {
        format!("{v}⊗({label})_*")
    }
}

impl Ambient {
    pub fn new(input: MappingSpaceInput) -> Result<Self, BsError> {
        let dual = DualCoalgebra::dualize(&input.coefficients);
        let v = &input.model;
        let b = &input.coefficients;
        let mut raw = Vec::with_capacity(v.len() * b.dim());
        for vi in 0..v.len() {
            for e in 0..b.dim() {
                raw.push(MixedGenerator {
                    v: vi,
                    e,
                    degree: v.degree_of_generator(vi) - b.degree(e),
                    name: mixed_name(&v.generator_at(vi).name, b.label(e)),
                });
            }
        }
        let pres =
            GcaPresentation::new(raw.iter().map(|g| Generator::new(g.name.clone(), g.degree)))?;
        let mut gens: Vec<Option<MixedGenerator>> = vec![None; raw.len()];
        let mut lookup = HashMap::with_capacity(raw.len());
        for g in raw {
            let i = pres.index_of(&g.name)?;
            lookup.insert((g.v, g.e), i);
            gens[i] = Some(g);
        }
        let gens = gens
            .into_iter()
            .map(|g| g.expect("every slot filled"))
            .collect();
        Ok(Ambient {
            input,
            dual,
            pres,
            gens,
            lookup,
        })
    }

    pub fn input(&self) -> &MappingSpaceInput {
        &self.input
    }

    pub fn dual(&self) -> &DualCoalgebra {
        &self.dual
    }

    pub fn presentation(&self) -> &GcaPresentation {
        &self.pres
    }

    pub fn generators(&self) -> &[MixedGenerator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &MixedGenerator {
        &self.gens[i]
    }

    pub fn index(&self, v: usize, e: usize) -> usize {
        self.lookup[&(v, e)]
    }

    pub fn index_by_name(&self, name: &str) -> Result<usize, BsError> {
        Ok(self.pres.index_of(name)?)
    }

    /// Indices of the generators `v ⊗ e` with degree in `degrees`, in the
    /// ambient monomial order.
    pub fn build_mixed_generators(&self, degrees: &[i32]) -> Vec<usize> {
        (0..self.gens.len())
            .filter(|&i| degrees.contains(&self.gens[i].degree))
            .collect()
    }

    /// True for `v ⊗ 1_*`.
    pub fn is_unit_slot(&self, i: usize) -> bool {
        self.gens[i].e == self.input.coefficients.unit()
    }

    /// `δ(v ⊗ e)`: the coproduct of `e` distributed over the factors of each
    /// monomial of `dv` with Koszul signs, plus `(-1)^|v| v ⊗ d_{B*} e`.
    pub fn delta_on_generator(&self, g: usize) -> Poly {
        let MixedGenerator { v, e, .. } = self.gens[g];
        let model = &self.input.model;
        let mut out = self.pres.zero();
        let dv = model.differential_of(v);
        let e_elt = DualElement::basis(e);
        let mut by_length: HashMap<usize, Vec<crate::coalgebra::CoproductTerm>> = HashMap::new();
        for (mono, c) in dv.terms() {
            let factors = mono.sequence();
            let r = factors.len();
            if r == 0 {
                continue;
            }
            let terms = by_length
                .entry(r)
                .or_insert_with(|| self.dual.iterated_coproduct(&e_elt, r - 1));
            let fdeg: Vec<i32> = factors
                .iter()
                .map(|&w| model.degree_of_generator(w))
                .collect();
            for t in terms.iter() {
                // (-1)^{Σ_{i<l} |e_i| |w_l|}
                let mut exponent = 0i64;
                let mut suffix: i64 = fdeg.iter().map(|&d| d as i64).sum();
                let mut seq = Vec::with_capacity(r);
                for (i, &w) in factors.iter().enumerate() {
                    suffix -= fdeg[i] as i64;
                    exponent += self.dual.degree(t.slots[i]) as i64 * suffix;
                    seq.push(self.index(w, t.slots[i]));
                }
                let coeff = c * &t.coeff * scalar::sign(exponent);
                self.pres.add_sequence(&mut out, &seq, coeff);
            }
        }
        let de = self.dual.codifferential(e);
        if !de.is_empty() {
            let s = scalar::sign(model.degree_of_generator(v) as i64);
            for (j, x) in de {
                self.pres
                    .add_sequence(&mut out, &[self.index(v, *j)], x * &s);
            }
        }
        out
    }

    /// `u(v ⊗ b_j*) = (-1)^τ(|v|) · b_j*(η(v))` on degree-0 generators.
    pub fn evaluation_character(&self, g: usize) -> Scalar {
        let MixedGenerator { v, e, degree, .. } = self.gens[g];
        if degree != 0 {
            return Scalar::zero();
        }
        let image = self.input.eta.image(v);
        match image.get(&e) {
            Some(x) => scalar::sign(tau(self.input.model.degree_of_generator(v)) as i64) * x,
            None => Scalar::zero(),
        }
    }

    /// Full `Λ(V ⊗ B_*)` with `δ` installed as its differential. Only
    /// practical for small inputs.
    pub fn as_presentation(&self) -> Result<GcaPresentation, BsError> {
        let mut p = self.pres.clone();
        for g in 0..self.gens.len() {
            let d = self.delta_on_generator(g);
            p.set_differential(&self.gens[g].name, d)?;
        }
        Ok(p)
    }

    /// Generators where `δ² ≠ 0` on the whole ambient algebra.
    pub fn check_delta_squared(&self) -> Result<Vec<DSquaredViolation>, BsError> {
        Ok(self.as_presentation()?.check_d_squared())
    }

    /// `u(δ g)` for every degree `-1` generator `g`, listing the nonzero
    /// ones. `u` is a chain map exactly when this is empty.
    pub fn check_character_is_chain_map(&self) -> Vec<(String, Scalar)> {
        let mut bad = Vec::new();
        for g in self.build_mixed_generators(&[-1]) {
            let value = self.character_of(&self.delta_on_generator(g));
            if !value.is_zero() {
                bad.push((self.gens[g].name.clone(), value));
            }
        }
        bad
    }

    /// `u` extended multiplicatively to a degree-0 polynomial (generators of
    /// nonzero degree evaluate to 0).
    pub fn character_of(&self, p: &Poly) -> Scalar {
        let mut total = Scalar::zero();
        for (m, c) in p.terms() {
            let mut x = c.clone();
            for &(g, e) in m.factors() {
                let u = self.evaluation_character(g);
                for _ in 0..e {
                    x *= &u;
                }
                if x.is_zero() {
                    break;
                }
            }
            total += x;
        }
        total
    }
}
