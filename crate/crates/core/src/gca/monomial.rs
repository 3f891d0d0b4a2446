use std::fmt;

/// A monomial in a free graded-commutative algebra.
///
/// Factors are `(generator index, exponent)` pairs sorted by index, with
/// positive exponents. The sign produced by bringing an arbitrary product
/// into this order is carried by the owning term, never by the monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        Monomial(vec![(index, 1)])
    }

    /// Builds from already-sorted factors. Zero exponents are dropped.
    pub(crate) fn from_sorted(factors: Vec<(usize, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(factors.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of factors counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0
            .binary_search_by_key(&index, |&(g, _)| g)
            .map_or(0, |p| self.0[p].1)
    }

    /// The factors written out one at a time, in order.
    pub fn sequence(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
            .collect()
    }

    pub fn degree(&self, degree_of: impl Fn(usize) -> i32) -> i32 {
        self.0.iter().map(|&(g, e)| e as i32 * degree_of(g)).sum()
    }

    /// Normal form of the ordered product `g_1 g_2 ... g_r`.
    ///
    /// Returns `None` when an odd generator repeats. Otherwise returns the
    /// sorted monomial and the parity of odd-odd transpositions needed to
    /// sort the sequence.
    pub fn from_sequence(seq: &[usize], is_odd: impl Fn(usize) -> bool) -> Option<(bool, Self)> {
        let mut v = seq.to_vec();
        let mut negative = false;
        // insertion sort; each swap of two odd factors flips the sign
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if is_odd(v[j - 1]) && is_odd(v[j]) {
                    negative = !negative;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut factors: Vec<(usize, u32)> = Vec::new();
        for g in v {
            match factors.last_mut() {
                Some((h, e)) if *h == g => {
                    if is_odd(g) {
                        return None;
                    }
                    *e += 1;
                }
                _ => factors.push((g, 1)),
            }
        }
        Some((negative, Monomial(factors)))
    }

    /// Product `self * other` in normal form, or `None` if it vanishes.
    pub fn multiply(&self, other: &Self, is_odd: impl Fn(usize) -> bool) -> Option<(bool, Self)> {
        let mut negative = false;
        // odd factors of `other` must hop over larger odd factors of `self`
        let odd_in_self: Vec<usize> = self
            .0
            .iter()
            .filter(|&&(g, _)| is_odd(g))
            .map(|&(g, _)| g)
            .collect();
        for &(g, _) in other.0.iter().filter(|&&(g, _)| is_odd(g)) {
            let above = odd_in_self.len() - odd_in_self.partition_point(|&h| h <= g);
            if above % 2 == 1 {
                negative = !negative;
            }
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) if a == b => {
                    if is_odd(a) {
                        return None;
                    }
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, ea)), Some(&(b, _))) if a < b => {
                    out.push((a, ea));
                    i += 1;
                }
                (Some(_), Some(&(b, eb))) => {
                    out.push((b, eb));
                    j += 1;
                }
                (Some(&x), None) => {
                    out.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    out.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some((negative, Monomial(out)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "#{g}")?;
            } else {
                write!(f, "#{g}^{e}")?;
            }
        }
        Ok(())
    }
}
