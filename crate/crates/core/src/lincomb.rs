//! Finite formal linear combinations with exact coefficients.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// `Σ c_b · b` over a basis `B`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinComb<B: Ord> {
    terms: BTreeMap<B, Scalar>,
}

impl<B: Ord> Default for LinComb<B> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> LinComb<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Scalar::one())
    }

    pub fn term(b: B, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn add_term(&mut self, b: B, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, b: &B) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect(),
        }
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> LinComb<C>) -> LinComb<C> {
        let mut out = LinComb::zero();
        for (b, c) in &self.terms {
            for (b2, c2) in f(b).terms {
                out.add_term(b2, c * c2);
            }
        }
        out
    }

    /// Applies a linear functional given on basis elements.
    pub fn pair<E>(&self, mut f: impl FnMut(&B) -> Result<Scalar, E>) -> Result<Scalar, E> {
        let mut acc = Scalar::zero();
        for (b, c) in &self.terms {
            acc += c * f(b)?;
        }
        Ok(acc)
    }

    pub fn into_terms(self) -> BTreeMap<B, Scalar> {
        self.terms
    }
}

impl<B: Ord + Clone> FromIterator<(B, Scalar)> for LinComb<B> {
    fn from_iter<I: IntoIterator<Item = (B, Scalar)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord + Clone> AddAssign<&LinComb<B>> for LinComb<B> {
    fn add_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl<B: Ord + Clone> SubAssign<&LinComb<B>> for LinComb<B> {
    fn sub_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), -c);
        }
    }
}

impl<B: Ord + Clone> Add for LinComb<B> {
    type Output = LinComb<B>;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<B: Ord + Clone> Sub for LinComb<B> {
    type Output = LinComb<B>;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<B: Ord + Clone> Neg for LinComb<B> {
    type Output = LinComb<B>;
    fn neg(self) -> Self {
        LinComb {
            terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect(),
        }
    }
}

impl<B: Ord + Clone> Mul<&Scalar> for LinComb<B> {
    type Output = LinComb<B>;
    fn mul(self, rhs: &Scalar) -> Self {
        self.scale(rhs)
    }
}

impl<B: Ord + fmt::Display> fmt::Display for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let sign = if *c < Scalar::zero() { "-" } else { "+" };
            let abs = if *c < Scalar::zero() { -c.clone() } else { c.clone() };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if abs.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{}·{b}", crate::scalar::format_scalar(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn cancellation_removes_terms() {
        let mut a = LinComb::term("x", int(2));
        a.add_term("y", int(1));
        let b = LinComb::term("x", int(2));
        let d = a.clone() - b;
        assert_eq!(d.len(), 1);
        assert_eq!(d.coeff(&"x"), int(0));
        assert_eq!((a.clone() - a).len(), 0);
    }

    #[test]
    fn display() {
        let mut a = LinComb::term("x", int(-1));
        a.add_term("y", int(3));
        assert_eq!(a.to_string(), "-x + 3·y");
    }
}
