use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::dga::{add_into, FiniteDga, SparseVec};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// An element of the dual coalgebra `B_*`, as coefficients on the dual basis
/// `{b_j*}`. `b_j*` has degree `-|b_j|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualElement {
    pub coeffs: SparseVec,
}

impl DualElement {
    pub fn basis(j: usize) -> Self {
        DualElement {
            coeffs: SparseVec::from([(j, Scalar::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluates on an element of `B` with the plain pairing `b_i*(b_j) = δ_ij`.
    pub fn eval(&self, x: &SparseVec) -> Scalar {
        self.coeffs
            .iter()
            .filter_map(|(i, c)| x.get(i).map(|y| c * y))
            .fold(Scalar::zero(), |a, b| a + b)
    }
}

/// One term `coeff · b_{j_0}* ⊗ ... ⊗ b_{j_m}*` of a (iterated) coproduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductTerm {
    pub slots: Vec<usize>,
    pub coeff: Scalar,
}

/// Sign of the dual differential, `(d e)(x) = ε(|e|) · e(d x)`.
///
/// The dual of a cochain algebra is taken with the unsigned pairing in every
/// degree; the mapping-space differential then squares to zero and the
/// evaluation character is a chain map (both are tested).
fn dual_differential_sign(_dual_degree: i32) -> Scalar {
    Scalar::one()
}

/// The dual coalgebra `(B_*, D, d_{B*})` of a finite DGA.
///
/// Degrees are non-positive. `D` is dual to the product:
/// `⟨D(e), x ⊗ y⟩ = ⟨e, x y⟩` with the unsigned tensor pairing.
#[derive(Clone, Debug)]
pub struct DualCoalgebra {
    dga: FiniteDga,
    coproduct: Vec<Vec<(usize, usize, Scalar)>>,
    codifferential: Vec<SparseVec>,
}

impl DualCoalgebra {
    /// Dualizes `B`. The table is not revalidated here; build `B` through
    /// [`FiniteDga::from_table`] or [`FiniteDga::truncated`], which check it.
    pub fn dualize(dga: &FiniteDga) -> Self {
        let n = dga.dim();
        let mut coproduct = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in dga.product(i, j) {
                    coproduct[*k].push((i, j, c.clone()));
                }
            }
        }
        let mut codifferential = vec![SparseVec::new(); n];
        for j in 0..n {
            for (k, c) in dga.differential(j) {
                // b_k* picks up b_j* whenever d(b_j) involves b_k
                let s = dual_differential_sign(-dga.degree(*k));
                add_into(
                    &mut codifferential[*k],
                    &SparseVec::from([(j, c * &s)]),
                    &Scalar::one(),
                );
            }
        }
        DualCoalgebra {
            dga: dga.clone(),
            coproduct,
            codifferential,
        }
    }

    pub fn dga(&self) -> &FiniteDga {
        &self.dga
    }

    pub fn dim(&self) -> usize {
        self.dga.dim()
    }

    /// Degree of `b_j*`.
    pub fn degree(&self, j: usize) -> i32 {
        -self.dga.degree(j)
    }

    /// `D(b_k*)` as `(i, j, c)` triples meaning `c · b_i* ⊗ b_j*`.
    pub fn coproduct(&self, k: usize) -> &[(usize, usize, Scalar)] {
        &self.coproduct[k]
    }

    pub fn coproduct_of(&self, e: &DualElement) -> Vec<CoproductTerm> {
        let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (k, c) in &e.coeffs {
            for (i, j, x) in &self.coproduct[*k] {
                accumulate(&mut acc, vec![*i, *j], c * x);
            }
        }
        finish(acc)
    }

    /// `d_{B*}(b_k*)`.
    pub fn codifferential(&self, k: usize) -> &SparseVec {
        &self.codifferential[k]
    }

    pub fn apply_codifferential(&self, e: &DualElement) -> DualElement {
        let mut out = SparseVec::new();
        for (k, c) in &e.coeffs {
            add_into(&mut out, &self.codifferential[*k], c);
        }
        DualElement { coeffs: out }
    }

    /// The counit `ε(e) = e(1)`.
    pub fn counit(&self, e: &DualElement) -> Scalar {
        e.coeffs
            .get(&self.dga.unit())
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// `Δ^(m)(e)`: `m` applications of the coproduct, always splitting the
    /// first tensor factor. `m = 0` is the identity.
    pub fn iterated_coproduct(&self, e: &DualElement, m: usize) -> Vec<CoproductTerm> {
        let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (k, c) in &e.coeffs {
            accumulate(&mut acc, vec![*k], c.clone());
        }
        for _ in 0..m {
            let mut next: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
            for (slots, c) in acc {
                for (i, j, x) in &self.coproduct[slots[0]] {
                    let mut s = Vec::with_capacity(slots.len() + 1);
                    s.push(*i);
                    s.push(*j);
                    s.extend_from_slice(&slots[1..]);
                    accumulate(&mut next, s, &c * x);
                }
            }
            acc = next;
        }
        finish(acc)
    }

    /// Compares `(D ⊗ 1) D` with `(1 ⊗ D) D` on every dual basis element;
    /// returns the labels where they differ.
    pub fn check_coassociativity(&self) -> Vec<String> {
        let mut report = Vec::new();
        for k in 0..self.dim() {
            let mut left: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
            let mut right: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
            for (i, j, c) in &self.coproduct[k] {
                for (a, b, x) in &self.coproduct[*i] {
                    accumulate(&mut left, vec![*a, *b, *j], c * x);
                }
                for (a, b, x) in &self.coproduct[*j] {
                    accumulate(&mut right, vec![*i, *a, *b], c * x);
                }
            }
            if left != right {
                report.push(format!("({})_*", self.dga.label(k)));
            }
        }
        report
    }

    /// Counit laws `(ε ⊗ 1) D = id = (1 ⊗ ε) D`; returns violating labels.
    pub fn check_counit(&self) -> Vec<String> {
        let unit = self.dga.unit();
        let mut report = Vec::new();
        for k in 0..self.dim() {
            let mut left = SparseVec::new();
            let mut right = SparseVec::new();
            for (i, j, c) in &self.coproduct[k] {
                if *i == unit {
                    add_into(
                        &mut left,
                        &SparseVec::from([(*j, c.clone())]),
                        &Scalar::one(),
                    );
                }
                if *j == unit {
                    add_into(
                        &mut right,
                        &SparseVec::from([(*i, c.clone())]),
                        &Scalar::one(),
                    );
                }
            }
            let id = SparseVec::from([(k, Scalar::one())]);
            if left != id || right != id {
                report.push(format!("({})_*", self.dga.label(k)));
            }
        }
        report
    }

    /// A basis `{a_k, b_k, c_j}` of `B_*` with `d a_k = b_k`, `d c_j = 0`,
    /// and `c_0 = 1_*`, computed degree by degree.
    pub fn adapted_basis(&self) -> AdaptedBasis {
        let n = self.dim();
        let top = self.dga.top_degree();
        let mut a = Vec::new();
        let mut b: Vec<DualElement> = Vec::new();
        let mut c = Vec::new();
        // ascending, so the b's landing in degree q are known before its c's
        for q in -top..=0 {
            let here: Vec<usize> = (0..n).filter(|&j| self.degree(j) == q).collect();
            let up: Vec<usize> = (0..n).filter(|&j| self.degree(j) == q + 1).collect();
            if here.is_empty() {
                continue;
            }
            let pos_up: HashMap<usize, usize> =
                up.iter().enumerate().map(|(r, &j)| (j, r)).collect();
            let columns: Vec<Vec<Scalar>> = here
                .iter()
                .map(|&j| {
                    let mut col = vec![Scalar::zero(); up.len()];
                    for (k, x) in &self.codifferential[j] {
                        col[pos_up[k]] = x.clone();
                    }
                    col
                })
                .collect();
            let d = Matrix::from_columns(up.len(), &columns);
            let cycles = d.kernel();
            let to_dual = |v: &[Scalar]| DualElement {
                coeffs: here
                    .iter()
                    .zip(v)
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(&j, x)| (j, x.clone()))
                    .collect(),
            };

            // a's: unit vectors completing the cycles to a basis
            let mut span: Vec<Vec<Scalar>> = cycles.clone();
            for t in 0..here.len() {
                let mut e = vec![Scalar::zero(); here.len()];
                e[t] = Scalar::one();
                span.push(e.clone());
                if Matrix::from_rows(here.len(), span.clone()).rank() == span.len() {
                    let ak = to_dual(&e);
                    let bk = self.apply_codifferential(&ak);
                    a.push(ak);
                    b.push(bk);
                } else {
                    span.pop();
                }
            }

            // c's: cycles completing the boundaries that land in this degree
            let coords = |e: &DualElement| -> Vec<Scalar> {
                here.iter()
                    .map(|j| e.coeffs.get(j).cloned().unwrap_or_else(Scalar::zero))
                    .collect()
            };
            let mut span: Vec<Vec<Scalar>> = b
                .iter()
                .filter(|e| e.coeffs.keys().next().is_some_and(|&j| self.degree(j) == q))
                .map(coords)
                .collect();
            let base = Matrix::from_rows(here.len(), span.clone()).rank();
            let mut rank = base;
            // prefer the dual of the unit first so that c_0 = 1_*
            let mut candidates = cycles.clone();
            let unit = self.dga.unit();
            if let Some(p) = here.iter().position(|&j| j == unit) {
                let mut e = vec![Scalar::zero(); here.len()];
                e[p] = Scalar::one();
                candidates.insert(0, e);
            }
            for z in candidates {
                span.push(z.clone());
                let r = Matrix::from_rows(here.len(), span.clone()).rank();
                if r > rank {
                    rank = r;
                    c.push(to_dual(&z));
                } else {
                    span.pop();
                }
            }
        }
        if let Some(p) = c
            .iter()
            .position(|e| *e == DualElement::basis(self.dga.unit()))
        {
            let unit = c.remove(p);
            c.insert(0, unit);
        }
        AdaptedBasis { a, b, c }
    }
}

/// Output of [`DualCoalgebra::adapted_basis`].
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub a: Vec<DualElement>,
    pub b: Vec<DualElement>,
    pub c: Vec<DualElement>,
}

fn accumulate(acc: &mut BTreeMap<Vec<usize>, Scalar>, key: Vec<usize>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(key.clone()).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&key);
    }
}

fn finish(acc: BTreeMap<Vec<usize>, Scalar>) -> Vec<CoproductTerm> {
    acc.into_iter()
        .map(|(slots, coeff)| CoproductTerm { slots, coeff })
        .collect()
}
