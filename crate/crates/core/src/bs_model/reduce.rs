use std::collections::HashMap;

use num_traits::Zero;

use super::ambient::{tau, Ambient};
use super::BsError;
use crate::gca::{DSquaredViolation, GcaPresentation, Generator, Monomial, Poly};
use crate::linalg::{Matrix, Rref};
use crate::scalar::{self, Scalar};

/// The quotient `Λ(V ⊗ B_*) / M_u` through degree 3.
#[derive(Clone, Debug)]
pub struct BsModel {
    ambient: Ambient,
    /// Generators: the surviving degree-1 ambient generators, then all
    /// degree-2 and degree-3 ambient generators, under their ambient names.
    reduced: GcaPresentation,
    /// Ambient index to reduced index, for generators of degree 1 to 3 that
    /// survive.
    to_reduced: HashMap<usize, usize>,
    /// Ambient degree-1 generator to its normal form.
    normal_forms: HashMap<usize, Poly>,
    degree_one: Vec<usize>,
    relations: Rref,
}

/// A class in `H¹` of the quotient: the cocycle and the name of the
/// generator that indexes it.
#[derive(Clone, Debug)]
pub struct H1Class {
    pub name: String,
    pub cocycle: Poly,
}

#[derive(Clone, Debug)]
pub struct H1Basis {
    pub classes: Vec<H1Class>,
    /// Names of the degree-1 basis, the coordinate order of `kernel`.
    pub degree_one: Vec<String>,
    /// Coordinates of each class in the degree-1 basis.
    pub kernel: Vec<Vec<Scalar>>,
}

impl H1Basis {
    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Coordinates of a degree-1 cocycle in this basis, or `None` if it is
    /// not in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let cols: Vec<Vec<Scalar>> = self.kernel.clone();
        Matrix::from_columns(self.degree_one.len(), &cols).solve(v)
    }
}

/// `Σ_j (-1)^τ(|b_j|) r(x ⊗ b_j*) ⊗ b_j`, one entry per basis element of
/// `B` with nonzero reduced coefficient.
#[derive(Clone, Debug)]
pub struct EvalImage {
    pub terms: Vec<(usize, Poly)>,
}

/// Builds the quotient by `M_u` in degrees `≤ 3`.
///
/// Fails with `ModelInconsistency` if `u` is not a chain map or the
/// reduction does not respect `δ`.
pub fn reduce_mod_mu(ambient: Ambient) -> Result<BsModel, BsError> {
    let bad = ambient.check_character_is_chain_map();
    if let Some((name, value)) = bad.first() {
        return Err(BsError::ModelInconsistency(format!(
            "u(δ({name})) = {}",
            scalar::render_short(value)
        )));
    }

    let degree_one = ambient.build_mixed_generators(&[1]);
    let column: HashMap<usize, usize> = degree_one
        .iter()
        .enumerate()
        .map(|(c, &g)| (g, c))
        .collect();
    let mut rows = Vec::new();
    for g in ambient.build_mixed_generators(&[0]) {
        let mut row = vec![Scalar::zero(); degree_one.len()];
        for (m, c) in ambient.delta_on_generator(g).terms() {
            let mut x = c.clone();
            let mut linear = None;
            for &(f, e) in m.factors() {
                match ambient.generator(f).degree {
                    0 => {
                        let u = ambient.evaluation_character(f);
                        for _ in 0..e {
                            x *= &u;
                        }
                    }
                    1 => linear = Some(f),
                    _ => x = Scalar::zero(),
                }
                if x.is_zero() {
                    break;
                }
            }
            if let (false, Some(f)) = (x.is_zero(), linear) {
                row[column[&f]] += x;
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
    // Pivot first on generators v ⊗ e with e ≠ 1, so that the v ⊗ 1_*
    // survive whenever possible.
    let mut order: Vec<usize> = (0..degree_one.len())
        .filter(|&c| !ambient.is_unit_slot(degree_one[c]))
        .collect();
    order.extend((0..degree_one.len()).filter(|&c| ambient.is_unit_slot(degree_one[c])));
    let relations = Matrix::from_rows(degree_one.len(), rows).rref_with_order(&order);

    let free = relations.free_columns();
    let mut gens: Vec<Generator> = free
        .iter()
        .map(|&c| Generator::new(ambient.generator(degree_one[c]).name.clone(), 1))
        .collect();
    for g in ambient.build_mixed_generators(&[2, 3]) {
        let mg = ambient.generator(g);
        gens.push(Generator::new(mg.name.clone(), mg.degree));
    }
    let reduced = GcaPresentation::new(gens)?;
    let mut to_reduced = HashMap::new();
    for g in ambient.build_mixed_generators(&[1, 2, 3]) {
        if let Ok(i) = reduced.index_of(&ambient.generator(g).name) {
            to_reduced.insert(g, i);
        }
    }
    let mut normal_forms = HashMap::new();
    for (c, &g) in degree_one.iter().enumerate() {
        let mut p = reduced.zero();
        if let Some(&i) = to_reduced.get(&g) {
            p = reduced.generator_poly(i);
        } else {
            let r = relations
                .pivots
                .iter()
                .position(|&q| q == c)
                .expect("non-free column is a pivot");
            for &f in &free {
                let x = &relations.rows[r][f];
                if !x.is_zero() {
                    let gen = reduced.generator_poly(to_reduced[&degree_one[f]]);
                    p = reduced.add(&p, &reduced.scale(&gen, &-x.clone())?)?;
                }
            }
        }
        normal_forms.insert(g, p);
    }

    let mut model = BsModel {
        ambient,
        reduced,
        to_reduced,
        normal_forms,
        degree_one,
        relations,
    };
    model.install_differential()?;
    model.check_well_defined()?;
    Ok(model)
}

impl BsModel {
    fn install_differential(&mut self) -> Result<(), BsError> {
        for g in self.ambient.build_mixed_generators(&[1, 2]) {
            let Some(&i) = self.to_reduced.get(&g) else {
                continue;
            };
            let d = self.reduce(&self.ambient.delta_on_generator(g))?;
            let name = self.reduced.generator_at(i).name.clone();
            self.reduced.set_differential(&name, d)?;
        }
        Ok(())
    }

    /// `r(δh) = δ̄(r(h))` for every degree-1 generator `h`.
    fn check_well_defined(&self) -> Result<(), BsError> {
        for &g in &self.degree_one {
            if self.to_reduced.contains_key(&g) {
                continue;
            }
            let direct = self.reduce(&self.ambient.delta_on_generator(g))?;
            let via = self.reduced.apply_d(&self.normal_forms[&g])?;
            if direct != via {
                return Err(BsError::ModelInconsistency(format!(
                    "δ does not descend along {}",
                    self.ambient.generator(g).name
                )));
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    /// The quotient presentation with `δ̄` installed on generators of degree
    /// 1 and 2. Differentials of degree-3 generators are not computed.
    pub fn presentation(&self) -> &GcaPresentation {
        &self.reduced
    }

    /// Names of the basis of the degree-1 part of the quotient.
    pub fn degree_one_basis(&self) -> Vec<&str> {
        self.reduced
            .generators()
            .iter()
            .filter(|g| g.degree == 1)
            .map(|g| g.name.as_str())
            .collect()
    }

    /// Rank of the linear relations imposed on degree-1 generators.
    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// Image of an ambient polynomial of degree `≤ 3` in the quotient.
    pub fn reduce(&self, p: &Poly) -> Result<Poly, BsError> {
        let a = &self.ambient;
        let mut out = self.reduced.zero();
        'terms: for (m, c) in p.terms() {
            if m.factors().iter().any(|&(f, _)| a.generator(f).degree < 0) {
                continue;
            }
            let mut acc = self.reduced.constant(c.clone());
            for f in m.sequence() {
                let factor = match a.generator(f).degree {
                    0 => {
                        let u = a.evaluation_character(f);
                        if u.is_zero() {
                            continue 'terms;
                        }
                        acc = self.reduced.scale(&acc, &u)?;
                        continue;
                    }
                    1 => self.normal_forms[&f].clone(),
                    2 | 3 => self.reduced.generator_poly(self.to_reduced[&f]),
                    d => return Err(BsError::OutOfRange(d)),
                };
                acc = self.reduced.multiply(&acc, &factor)?;
                if acc.is_zero() {
                    continue 'terms;
                }
            }
            out = self.reduced.add(&out, &acc)?;
        }
        Ok(out)
    }

    /// Image of the ambient generator called `name`.
    pub fn normal_form(&self, name: &str) -> Result<Poly, BsError> {
        let g = self
            .ambient
            .index_by_name(name)
            .map_err(|_| BsError::UnknownGenerator(name.to_string()))?;
        self.reduce(&self.ambient.presentation().generator_poly(g))
    }

    /// Coordinates of a degree-1 element of the quotient in
    /// [`degree_one_basis`](Self::degree_one_basis).
    pub fn degree_one_coordinates(&self, p: &Poly) -> Result<Vec<Scalar>, BsError> {
        let basis: Vec<Monomial> = (0..self.reduced.len())
            .filter(|&i| self.reduced.degree_of_generator(i) == 1)
            .map(Monomial::generator)
            .collect();
        Ok(self.reduced.coordinates(p, &basis)?)
    }

    /// Matrix of `δ̄` from degree 1 to degree 2, with the monomial basis of
    /// the target.
    pub fn delta_matrix(&self) -> Result<(Matrix, Vec<Monomial>), BsError> {
        let target = self.reduced.basis_in_degree(2)?;
        let mut cols = Vec::new();
        for i in 0..self.reduced.len() {
            if self.reduced.degree_of_generator(i) == 1 {
                cols.push(
                    self.reduced
                        .coordinates(self.reduced.differential_of(i), &target)?,
                );
            }
        }
        Ok((Matrix::from_columns(target.len(), &cols), target))
    }

    /// A basis of `H¹`; since degree 0 is just the scalars, this is the
    /// kernel of `δ̄` on degree 1. Classes are indexed by generators
    /// `v ⊗ 1_*` whenever possible.
    pub fn h1_aut1(&self) -> Result<H1Basis, BsError> {
        let (m, _) = self.delta_matrix()?;
        let names: Vec<String> = self
            .degree_one_basis()
            .into_iter()
            .map(String::from)
            .collect();
        let unit = self.ambient.input().coefficients.unit();
        let is_unit: Vec<bool> = names
            .iter()
            .map(|n| {
                let g = self
                    .ambient
                    .index_by_name(n)
                    .expect("reduced names are ambient names");
                self.ambient.generator(g).e == unit
            })
            .collect();
        let mut order: Vec<usize> = (0..names.len()).filter(|&c| !is_unit[c]).collect();
        order.extend((0..names.len()).filter(|&c| is_unit[c]));
        let rref = m.rref_with_order(&order);
        let kernel = rref.kernel();
        let free = rref.free_columns();
        let classes = free
            .iter()
            .zip(&kernel)
            .map(|(&f, v)| {
                let basis: Vec<Monomial> = (0..names.len()).map(Monomial::generator).collect();
                H1Class {
                    name: names[f].clone(),
                    cocycle: self.reduced.from_coordinates(v, &basis),
                }
            })
            .collect();
        Ok(H1Basis {
            classes,
            degree_one: names,
            kernel,
        })
    }

    /// Generators of degree 1 where `δ̄² ≠ 0`.
    pub fn check_delta_squared(&self) -> Vec<DSquaredViolation> {
        (0..self.reduced.len())
            .filter(|&i| self.reduced.degree_of_generator(i) == 1)
            .filter_map(|i| {
                let dd = self
                    .reduced
                    .apply_d(self.reduced.differential_of(i))
                    .expect("δ̄ is defined through degree 2");
                (!dd.is_zero()).then(|| DSquaredViolation {
                    generator: self.reduced.generator_at(i).name.clone(),
                    value: self.reduced.render(&dd),
                })
            })
            .collect()
    }

    /// The model of the evaluation map on a generator `x` of the target
    /// model with `|x| ≤ 3`.
    pub fn ev_model(&self, x: &str) -> Result<EvalImage, BsError> {
        let input = self.ambient.input();
        let v = input
            .model
            .index_of(x)
            .map_err(|_| BsError::UnknownGenerator(x.to_string()))?;
        let deg = input.model.degree_of_generator(v);
        if deg > 3 {
            return Err(BsError::OutOfRange(deg));
        }
        let b = &input.coefficients;
        let mut terms = Vec::new();
        for j in 0..b.dim() {
            let g = self.ambient.index(v, j);
            let p = self.reduce(&self.ambient.presentation().generator_poly(g))?;
            if !p.is_zero() {
                let s = scalar::sign(tau(b.degree(j)) as i64);
                terms.push((j, self.reduced.scale(&p, &s)?));
            }
        }
        Ok(EvalImage { terms })
    }
}
