//! Sibling-intractable polynomial sharing: a monic polynomial that takes
//! the value K at every designated root, published as its coefficients.

use std::collections::HashSet;

use thiserror::Error;

use crate::field::PrimeField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SiffError {
    #[error("no roots given")]
    NoRoots,
    #[error("duplicate root")]
    DuplicateRoot,
}

/// P(x) = x^n + a_1 x^{n-1} + ... + a_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiffPolynomial<F> {
    // a_1 .. a_n, the leading 1 is implicit
    coeffs: Vec<F>,
}

impl<F: PrimeField> SiffPolynomial<F> {
    /// P(x) = prod(x - r_i) + K, so P(r_i) = K for every root.
    pub fn build(roots: &[F], key: F) -> Result<Self, SiffError> {
        if roots.is_empty() {
            return Err(SiffError::NoRoots);
        }
        let mut seen = HashSet::with_capacity(roots.len());
        if !roots.iter().all(|r| seen.insert(*r)) {
            return Err(SiffError::DuplicateRoot);
        }
        // descending coefficients of the running product, leading 1 included
        let mut prod = vec![F::one()];
        for r in roots {
            prod.push(F::zero());
            for i in (1..prod.len()).rev() {
                let prev = prod[i - 1];
                prod[i] -= prev * *r;
            }
        }
        let n = roots.len();
        prod[n] += key;
        Ok(Self { coeffs: prod.split_off(1) })
    }

    /// Rebuilds from published coefficients a_1..a_n.
    pub fn from_coefficients(coeffs: Vec<F>) -> Result<Self, SiffError> {
        if coeffs.is_empty() {
            return Err(SiffError::NoRoots);
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[F] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: F) -> F {
        self.coeffs.iter().fold(F::one(), |acc, a| acc * x + *a)
    }
}
