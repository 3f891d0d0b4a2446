use std::collections::BTreeMap;

use num_traits::Zero;

use super::Monomial;
use crate::scalar::Scalar;

/// A polynomial in a free graded-commutative algebra.
///
/// Polys remember which presentation built them; arithmetic across
/// presentations is rejected by [`GcaPresentation`](super::GcaPresentation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub(crate) owner: u64,
    pub(crate) terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub(crate) fn zero_in(owner: u64) -> Self {
        Poly {
            owner,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn term_in(owner: u64, coeff: Scalar, mono: Monomial) -> Self {
        let mut p = Self::zero_in(owner);
        p.add_term(mono, coeff);
        p
    }

    pub fn owner(&self) -> u64 {
        self.owner
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `coeff * mono`, dropping the entry if it cancels.
    pub(crate) fn add_term(&mut self, mono: Monomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        debug_assert_eq!(self.owner, other.owner);
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub(crate) fn scaled(&self, c: &Scalar) -> Poly {
        let mut p = Poly::zero_in(self.owner);
        p.add_scaled(self, c);
        p
    }
}
