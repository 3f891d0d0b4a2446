use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::CoalgebraError;
use crate::gca::{GcaPresentation, Monomial};
use crate::scalar::{self, Scalar};

/// Sparse vector over a basis, keyed by basis index.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub(crate) fn add_into(acc: &mut SparseVec, v: &SparseVec, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (i, x) in v {
        let e = acc.entry(*i).or_insert_with(Scalar::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub degree: i32,
}

/// A finite-dimensional commutative DGA with an explicit basis.
///
/// Basis element 0 need not be the unit; [`FiniteDga::unit`] records which
/// one is. Products and the differential are stored as sparse vectors.
#[derive(Clone, Debug)]
pub struct FiniteDga {
    basis: Vec<BasisElement>,
    unit: usize,
    mult: Vec<Vec<SparseVec>>,
    diff: Vec<SparseVec>,
    labels: HashMap<String, usize>,
}

impl FiniteDga {
    /// Builds from an explicit multiplication table and runs every structural
    /// check (see [`FiniteDga::validate`]).
    ///
    /// `products` lists the nonzero products `b_i * b_j`; products with the
    /// unit are filled in automatically and need not be listed.
    pub fn from_table(
        basis: Vec<BasisElement>,
        unit: usize,
        products: impl IntoIterator<Item = ((usize, usize), SparseVec)>,
        differential: Vec<SparseVec>,
    ) -> Result<Self, CoalgebraError> {
        let dga = Self::assemble(basis, unit, products, differential)?;
        let report = dga.validate();
        if report.is_empty() {
            Ok(dga)
        } else {
            Err(CoalgebraError::InvalidDga(report))
        }
    }

    fn assemble(
        basis: Vec<BasisElement>,
        unit: usize,
        products: impl IntoIterator<Item = ((usize, usize), SparseVec)>,
        differential: Vec<SparseVec>,
    ) -> Result<Self, CoalgebraError> {
        let n = basis.len();
        if unit >= n || basis[unit].degree != 0 {
            return Err(CoalgebraError::InvalidDga(vec![
                "unit must be a degree-0 basis element".into(),
            ]));
        }
        if differential.len() != n {
            return Err(CoalgebraError::InvalidDga(vec![
                "differential table has wrong length".into(),
            ]));
        }
        let mut labels = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.degree < 0 {
                return Err(CoalgebraError::InvalidDga(vec![format!(
                    "`{}` has negative degree",
                    b.label
                )]));
            }
            if labels.insert(b.label.clone(), i).is_some() {
                return Err(CoalgebraError::InvalidDga(vec![format!(
                    "duplicate label `{}`",
                    b.label
                )]));
            }
        }
        let mut mult = vec![vec![SparseVec::new(); n]; n];
        for i in 0..n {
            mult[unit][i] = SparseVec::from([(i, Scalar::one())]);
            mult[i][unit] = SparseVec::from([(i, Scalar::one())]);
        }
        for ((i, j), v) in products {
            if i >= n || j >= n {
                return Err(CoalgebraError::InvalidDga(vec![format!(
                    "product index ({i}, {j}) out of range"
                )]));
            }
            if i == unit || j == unit {
                continue;
            }
            mult[i][j] = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        }
        Ok(FiniteDga {
            basis,
            unit,
            mult,
            diff: differential,
            labels,
        })
    }

    /// The quotient of a free graded-commutative algebra by the monomial
    /// ideal `(g^(cap_g + 1))`, using the presentation's differential.
    ///
    /// Every generator must have positive degree; odd generators need no cap,
    /// and every even generator must have one so the result is finite.
    pub fn truncated(pres: &GcaPresentation, caps: &[(&str, u32)]) -> Result<Self, CoalgebraError> {
        let mut cap = vec![None; pres.len()];
        for &(name, c) in caps {
            cap[pres.index_of(name)?] = Some(c);
        }
        for (i, g) in pres.generators().iter().enumerate() {
            if g.degree <= 0 {
                return Err(CoalgebraError::InvalidDga(vec![format!(
                    "generator `{}` must have positive degree",
                    g.name
                )]));
            }
            if !g.is_odd() && cap[i].is_none() {
                return Err(CoalgebraError::InvalidDga(vec![format!(
                    "even generator `{}` needs a truncation cap",
                    g.name
                )]));
            }
        }
        let within = |m: &Monomial| {
            m.factors()
                .iter()
                .all(|&(g, e)| cap[g].is_none_or(|c| e <= c))
        };

        // d must preserve the ideal: d(g^(c+1)) has to land in it
        for (i, c) in cap.iter().enumerate() {
            if let Some(c) = c {
                let gp = pres.power(&pres.generator_poly(i), c + 1)?;
                let dg = pres.apply_d(&gp)?;
                if dg.terms().any(|(m, _)| within(m)) {
                    return Err(CoalgebraError::InvalidDga(vec![format!(
                        "differential does not preserve the truncation of `{}`",
                        pres.generator_at(i).name
                    )]));
                }
            }
        }

        let top: i32 = pres
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| g.degree * cap[i].unwrap_or(1) as i32)
            .sum();
        let mut monos: Vec<Monomial> = Vec::new();
        for n in 0..=top {
            monos.extend(pres.basis_in_degree(n)?.into_iter().filter(|m| within(m)));
        }
        let index: HashMap<&Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let basis: Vec<BasisElement> = monos
            .iter()
            .map(|m| BasisElement {
                label: pres.render_monomial(m),
                degree: pres.monomial_degree(m),
            })
            .collect();
        let n = monos.len();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if let Some((neg, m)) = monos[i].multiply(&monos[j], |g| pres.is_odd(g)) {
                    if let Some(&k) = index.get(&m) {
                        let c = if neg { -Scalar::one() } else { Scalar::one() };
                        products.push(((i, j), SparseVec::from([(k, c)])));
                    }
                }
            }
        }
        let mut differential = Vec::with_capacity(n);
        for m in &monos {
            let dm = pres.apply_d(&pres.monomial_poly(m.clone()))?;
            let v: SparseVec = dm
                .terms()
                .filter_map(|(t, c)| index.get(t).map(|&k| (k, c.clone())))
                .collect();
            differential.push(v);
        }
        let unit = index[&Monomial::one()];
        Self::assemble(basis, unit, products, differential)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.get(label).copied()
    }

    pub fn top_degree(&self) -> i32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn differential(&self, i: usize) -> &SparseVec {
        &self.diff[i]
    }

    pub fn multiply(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a {
            for (j, y) in b {
                add_into(&mut out, &self.mult[*i][*j], &(x * y));
            }
        }
        out
    }

    pub fn apply_d(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a {
            add_into(&mut out, &self.diff[*i], x);
        }
        out
    }

    fn basis_vec(&self, i: usize) -> SparseVec {
        SparseVec::from([(i, Scalar::one())])
    }

    /// Structural checks: degrees of products and differential, graded
    /// commutativity, associativity on all triples, `d² = 0` and Leibniz.
    /// Returns a list of human-readable violations, empty on success.
    pub fn validate(&self) -> Vec<String> {
        let n = self.dim();
        let mut report = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = &self.mult[i][j];
                let deg = self.degree(i) + self.degree(j);
                if p.keys().any(|&k| self.degree(k) != deg) {
                    report.push(format!(
                        "{}*{} has the wrong degree",
                        self.label(i),
                        self.label(j)
                    ));
                }
                let q = &self.mult[j][i];
                let s = scalar::sign((self.degree(i) * self.degree(j)) as i64);
                let mut diff = p.clone();
                add_into(&mut diff, q, &-s);
                if !diff.is_empty() {
                    report.push(format!(
                        "{}*{} is not graded-commutative",
                        self.label(i),
                        self.label(j)
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let l = self.multiply(&self.mult[i][j], &self.basis_vec(k));
                    let r = self.multiply(&self.basis_vec(i), &self.mult[j][k]);
                    if l != r {
                        report.push(format!(
                            "associativity fails on ({}, {}, {})",
                            self.label(i),
                            self.label(j),
                            self.label(k)
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            if self.diff[i]
                .keys()
                .any(|&k| self.degree(k) != self.degree(i) + 1)
            {
                report.push(format!("d({}) has the wrong degree", self.label(i)));
            }
            if !self.apply_d(&self.diff[i]).is_empty() {
                report.push(format!("d²({}) != 0", self.label(i)));
            }
        }
        if !self.diff[self.unit].is_empty() {
            report.push("d(1) != 0".into());
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply_d(&self.mult[i][j]);
                let mut rhs = self.multiply(&self.diff[i], &self.basis_vec(j));
                let s = scalar::sign(self.degree(i) as i64);
                add_into(
                    &mut rhs,
                    &self.multiply(&self.basis_vec(i), &self.diff[j]),
                    &s,
                );
                if lhs != rhs {
                    report.push(format!(
                        "Leibniz rule fails on {}*{}",
                        self.label(i),
                        self.label(j)
                    ));
                }
            }
        }
        report
    }

    /// Overwrites one product entry without validation; used to build
    /// negative controls in tests.
    #[doc(hidden)]
    pub fn corrupt_product(&mut self, i: usize, j: usize, v: SparseVec) {
        self.mult[i][j] = v;
    }
}
