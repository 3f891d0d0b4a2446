//! Free graded-commutative algebras over the rationals with derivation
//! differentials.
//!
//! A [`GcaPresentation`] is a list of named generators with integer degrees
//! and a differential given on generators. Odd generators square to zero and
//! anticommute; the Koszul sign of every reordering is tracked exactly.

mod cohomology;
mod monomial;
mod poly;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};
use thiserror::Error;

pub use cohomology::CohomologyGroup;
pub use monomial::Monomial;
pub use poly::Poly;

use crate::scalar::{self, Scalar};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GcaError {
    #[error("operands belong to different presentations")]
    PresentationMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("d({generator}) has degree {found}, expected {expected}")]
    DegreeMismatch {
        generator: String,
        expected: i32,
        found: i32,
    },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("generator `{0}` has non-positive degree; degree enumeration would not terminate")]
    NonPositiveDegree(String),
    #[error("no differential known for generator `{0}`")]
    MissingDifferential(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// Report entry for a generator with `d(d(g)) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredViolation {
    pub generator: String,
    pub value: String,
}

/// A free graded-commutative algebra `(ΛV, d)`.
#[derive(Clone, Debug)]
pub struct GcaPresentation {
    id: u64,
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
    odd: Vec<bool>,
    differential: Vec<Poly>,
}

impl GcaPresentation {
    /// Creates a presentation with zero differential.
    ///
    /// Generators are stored sorted by degree, then by name; this order is
    /// the monomial order.
    pub fn new(generators: impl IntoIterator<Item = Generator>) -> Result<Self, GcaError> {
        let mut gens: Vec<Generator> = generators.into_iter().collect();
        gens.sort_by(|a, b| (a.degree, &a.name).cmp(&(b.degree, &b.name)));
        let mut index = HashMap::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(GcaError::DuplicateGenerator(g.name.clone()));
            }
        }
        let id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        let odd = gens.iter().map(Generator::is_odd).collect();
        let differential = vec![Poly::zero_in(id); gens.len()];
        Ok(GcaPresentation {
            id,
            gens,
            index,
            odd,
            differential,
        })
    }

    /// Convenience constructor from `(name, degree)` pairs.
    pub fn from_degrees<'a>(
        gens: impl IntoIterator<Item = (&'a str, i32)>,
    ) -> Result<Self, GcaError> {
        Self::new(gens.into_iter().map(|(n, d)| Generator::new(n, d)))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_at(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GcaError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GcaError::UnknownGenerator(name.to_string()))
    }

    pub fn degree_of_generator(&self, i: usize) -> i32 {
        self.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Sets `d(name) = value`; the value must be homogeneous of degree
    /// `|name| + 1` (or zero).
    pub fn set_differential(&mut self, name: &str, value: Poly) -> Result<(), GcaError> {
        self.check_owner(&value)?;
        let i = self.index_of(name)?;
        let expected = self.gens[i].degree + 1;
        if let Some(found) = self.degree(&value)? {
            if found != expected {
                return Err(GcaError::DegreeMismatch {
                    generator: name.to_string(),
                    expected,
                    found,
                });
            }
        }
        self.differential[i] = value;
        Ok(())
    }

    pub fn with_differential(mut self, name: &str, value: Poly) -> Result<Self, GcaError> {
        self.set_differential(name, value)?;
        Ok(self)
    }

    pub fn differential_of(&self, i: usize) -> &Poly {
        &self.differential[i]
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(Poly::is_zero)
    }

    fn check_owner(&self, p: &Poly) -> Result<(), GcaError> {
        if p.owner == self.id {
            Ok(())
        } else {
            Err(GcaError::PresentationMismatch)
        }
    }

    pub fn zero(&self) -> Poly {
        Poly::zero_in(self.id)
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        Poly::term_in(self.id, c, Monomial::one())
    }

    pub fn one(&self) -> Poly {
        self.constant(Scalar::one())
    }

    pub fn generator(&self, name: &str) -> Result<Poly, GcaError> {
        let i = self.index_of(name)?;
        Ok(self.generator_poly(i))
    }

    pub fn generator_poly(&self, i: usize) -> Poly {
        Poly::term_in(self.id, Scalar::one(), Monomial::generator(i))
    }

    pub fn monomial_poly(&self, m: Monomial) -> Poly {
        Poly::term_in(self.id, Scalar::one(), m)
    }

    /// Builds `Σ c · Π g^e` from named factors, applying Koszul signs for the
    /// order in which factors are listed.
    pub fn poly(&self, terms: &[(Scalar, &[(&str, u32)])]) -> Result<Poly, GcaError> {
        let mut p = self.zero();
        for (c, factors) in terms {
            let mut seq = Vec::new();
            for &(name, e) in factors.iter() {
                let i = self.index_of(name)?;
                seq.extend(std::iter::repeat_n(i, e as usize));
            }
            self.add_sequence(&mut p, &seq, c.clone());
        }
        Ok(p)
    }

    /// Adds `c · g_1 ⋯ g_r` for an ordered list of generator indices.
    pub(crate) fn add_sequence(&self, p: &mut Poly, seq: &[usize], c: Scalar) {
        if let Some((neg, m)) = Monomial::from_sequence(seq, |g| self.odd[g]) {
            p.add_term(m, if neg { -c } else { c });
        }
    }

    /// Degree of a homogeneous poly; `None` for zero.
    pub fn degree(&self, p: &Poly) -> Result<Option<i32>, GcaError> {
        self.check_owner(p)?;
        let mut deg = None;
        for m in p.terms.keys() {
            let d = self.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(GcaError::NotHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i32 {
        m.degree(|g| self.gens[g].degree)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Result<Poly, GcaError> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        let mut out = a.clone();
        out.add_scaled(b, &Scalar::one());
        Ok(out)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Result<Poly, GcaError> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        let mut out = a.clone();
        out.add_scaled(b, &-Scalar::one());
        Ok(out)
    }

    pub fn scale(&self, a: &Poly, c: &Scalar) -> Result<Poly, GcaError> {
        self.check_owner(a)?;
        Ok(a.scaled(c))
    }

    /// Graded-commutative product with exact Koszul signs.
    pub fn multiply(&self, a: &Poly, b: &Poly) -> Result<Poly, GcaError> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = self.zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((neg, m)) = ma.multiply(mb, |g| self.odd[g]) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn power(&self, a: &Poly, e: u32) -> Result<Poly, GcaError> {
        self.check_owner(a)?;
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul_unchecked(&out, a);
        }
        Ok(out)
    }

    /// Extends the differential to `p` by the graded Leibniz rule.
    pub fn apply_d(&self, p: &Poly) -> Result<Poly, GcaError> {
        self.check_owner(p)?;
        self.apply_derivation(p, |g| Some(&self.differential[g]))
    }

    /// Extends a derivation given on generators (of degree +1) to `p`.
    ///
    /// `on_generator` may return `None` for generators where the derivation
    /// is not known; hitting one is an error.
    pub fn apply_derivation<'a>(
        &self,
        p: &Poly,
        on_generator: impl Fn(usize) -> Option<&'a Poly>,
    ) -> Result<Poly, GcaError> {
        let mut out = self.zero();
        for (m, c) in &p.terms {
            let seq = m.sequence();
            let mut prefix_degree = 0;
            for (j, &g) in seq.iter().enumerate() {
                let dg = on_generator(g)
                    .ok_or_else(|| GcaError::MissingDifferential(self.gens[g].name.clone()))?;
                if dg.owner != self.id {
                    return Err(GcaError::PresentationMismatch);
                }
                if !dg.is_zero() {
                    let coeff = scalar::sign(prefix_degree as i64) * c;
                    for (dm, dc) in &dg.terms {
                        let mut s = seq[..j].to_vec();
                        s.extend(dm.sequence());
                        s.extend_from_slice(&seq[j + 1..]);
                        self.add_sequence(&mut out, &s, &coeff * dc);
                    }
                }
                prefix_degree += self.gens[g].degree;
            }
        }
        Ok(out)
    }

    /// Generators `g` with `d(d(g)) != 0`; empty iff the differential squares
    /// to zero.
    pub fn check_d_squared(&self) -> Vec<DSquaredViolation> {
        (0..self.gens.len())
            .filter_map(|g| {
                let dd = self
                    .apply_d(&self.differential[g])
                    .expect("differential values share the presentation");
                (!dd.is_zero()).then(|| DSquaredViolation {
                    generator: self.gens[g].name.clone(),
                    value: self.render(&dd),
                })
            })
            .collect()
    }

    /// True when every `d(v)` is decomposable (no linear terms).
    pub fn is_minimal(&self) -> bool {
        self.differential
            .iter()
            .all(|p| p.terms.keys().all(|m| m.length() != 1))
    }

    /// Complete monomial basis of degree `n`, in monomial order.
    pub fn basis_in_degree(&self, n: i32) -> Result<Vec<Monomial>, GcaError> {
        if let Some(g) = self.gens.iter().find(|g| g.degree <= 0) {
            return Err(GcaError::NonPositiveDegree(g.name.clone()));
        }
        let mut out = Vec::new();
        if n < 0 {
            return Ok(out);
        }
        let mut current = Vec::new();
        self.enumerate(0, n, &mut current, &mut out);
        out.sort();
        Ok(out)
    }

    fn enumerate(
        &self,
        i: usize,
        remaining: i32,
        current: &mut Vec<(usize, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial::from_sorted(current.clone()));
            return;
        }
        if i == self.gens.len() {
            return;
        }
        let d = self.gens[i].degree;
        let max_e = if self.odd[i] {
            1
        } else {
            (remaining / d) as u32
        };
        for e in 0..=max_e {
            let rest = remaining - e as i32 * d;
            if rest < 0 {
                break;
            }
            if e > 0 {
                current.push((i, e));
            }
            self.enumerate(i + 1, rest, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }

    /// Coordinates of a homogeneous poly in a monomial basis.
    pub fn coordinates(&self, p: &Poly, basis: &[Monomial]) -> Result<Vec<Scalar>, GcaError> {
        self.check_owner(p)?;
        let pos: HashMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = vec![Scalar::zero(); basis.len()];
        for (m, c) in &p.terms {
            let i = *pos.get(m).ok_or(GcaError::NotHomogeneous)?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coordinates(&self, coords: &[Scalar], basis: &[Monomial]) -> Poly {
        let mut p = self.zero();
        for (c, m) in coords.iter().zip(basis) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (k, &(g, e)) in m.factors().iter().enumerate() {
            if k > 0 {
                s.push('*');
            }
            s.push_str(&self.gens[g].name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }

    /// Re-expresses `p`, a polynomial of `source`, in this presentation by
    /// matching generator names.
    pub fn transport(&self, p: &Poly, source: &GcaPresentation) -> Result<Poly, GcaError> {
        source.check_owner(p)?;
        let mut out = self.zero();
        for (m, c) in &p.terms {
            let seq = m
                .sequence()
                .into_iter()
                .map(|g| self.index_of(&source.gens[g].name))
                .collect::<Result<Vec<_>, _>>()?;
            self.add_sequence(&mut out, &seq, c.clone());
        }
        Ok(out)
    }

    /// Human-readable form such as `b^2 - 1/2*t1*t2`.
    pub fn render(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms.iter().enumerate() {
            let negative = scalar::is_negative(c);
            let abs = if negative { -c.clone() } else { c.clone() };
            match (k, negative) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if m.is_one() {
                s.push_str(&scalar::render_short(&abs));
            } else if abs.is_one() {
                s.push_str(&self.render_monomial(m));
            } else {
                let _ = write!(
                    s,
                    "{}*{}",
                    scalar::render_short(&abs),
                    self.render_monomial(m)
                );
            }
        }
        s
    }
}
