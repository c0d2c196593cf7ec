use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{FinAbError, FinAbGroup, GroupElement};

/// Homomorphism between two finite abelian groups, stored as an integer matrix.
///
/// Entry `(i, j)` is the image of source generator `j` in target factor `i`,
/// reduced modulo the order of target factor `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: Vec<Vec<BigInt>>,
}

/// Smallest positive value an `(i, j)` entry must be a multiple of:
/// `order_i / gcd(order_i, order_j)`.
pub(crate) fn entry_step(target_order: &BigInt, source_order: &BigInt) -> BigInt {
    target_order / target_order.gcd(source_order)
}

impl Homomorphism {
    pub fn new<T: Into<BigInt> + Clone>(
        matrix: &[Vec<T>],
        source: &FinAbGroup,
        target: &FinAbGroup,
    ) -> Result<Self, FinAbError> {
        let m: Vec<Vec<BigInt>> = matrix
            .iter()
            .map(|row| row.iter().cloned().map(Into::into).collect())
            .collect();
        Self::from_big(m, source, target)
    }

    pub fn from_big(
        matrix: Vec<Vec<BigInt>>,
        source: &FinAbGroup,
        target: &FinAbGroup,
    ) -> Result<Self, FinAbError> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(source.len(), Vec::len);
        if rows != target.len() || cols != source.len() || matrix.iter().any(|r| r.len() != cols) {
            return Err(FinAbError::Shape {
                expected: (target.len(), source.len()),
                got: (rows, cols),
            });
        }
        let mut reduced = matrix;
        for (i, row) in reduced.iter_mut().enumerate() {
            let oi = target.order(i);
            for (j, c) in row.iter_mut().enumerate() {
                *c = c.mod_floor(oi);
                let step = entry_step(oi, source.order(j));
                if !c.is_multiple_of(&step) {
                    return Err(FinAbError::Congruence {
                        row: i,
                        col: j,
                        divisor: step,
                    });
                }
            }
        }
        Ok(Self::from_reduced(reduced, source.clone(), target.clone()))
    }

    pub(crate) fn from_reduced(
        matrix: Vec<Vec<BigInt>>,
        source: FinAbGroup,
        target: FinAbGroup,
    ) -> Self {
        Self {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        Self::scalar(g, 1)
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        let matrix = vec![vec![BigInt::zero(); source.len()]; target.len()];
        Self::from_reduced(matrix, source.clone(), target.clone())
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FinAbGroup, k: i64) -> Self {
        let n = g.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::from(k).mod_floor(g.order(i))
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_reduced(matrix, g.clone(), g.clone())
    }

    /// Diagonal endomorphism with the given entries (each reduced mod its factor order).
    pub fn diagonal(g: &FinAbGroup, entries: &[BigInt]) -> Result<Self, FinAbError> {
        let n = g.len();
        if entries.len() != n {
            return Err(FinAbError::Shape {
                expected: (n, n),
                got: (entries.len(), entries.len()),
            });
        }
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            entries[i].clone()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect::<Vec<Vec<BigInt>>>();
        Self::from_big(matrix, g, g)
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// Image of a coordinate vector of the source (not necessarily reduced).
    pub(crate) fn apply_coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix
            .iter()
            .zip(self.target.orders())
            .map(|(row, o)| {
                row.iter()
                    .zip(x)
                    .fold(BigInt::zero(), |acc, (c, xj)| acc + c * xj)
                    .mod_floor(o)
            })
            .collect()
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, FinAbError> {
        if x.coords.len() != self.source.len() {
            return Err(FinAbError::Shape {
                expected: (self.source.len(), 1),
                got: (x.coords.len(), 1),
            });
        }
        Ok(GroupElement {
            coords: self.apply_coords(&x.coords),
        })
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism, FinAbError> {
        if inner.target != self.source {
            return Err(FinAbError::Mismatch(
                "inner target differs from outer source",
            ));
        }
        let rows = self.target.len();
        let cols = inner.source.len();
        let mid = self.source.len();
        let mut out = vec![vec![BigInt::zero(); cols]; rows];
        for (i, out_row) in out.iter_mut().enumerate() {
            for (j, slot) in out_row.iter_mut().enumerate() {
                let mut acc = BigInt::zero();
                for k in 0..mid {
                    acc += &self.matrix[i][k] * &inner.matrix[k][j];
                }
                *slot = acc.mod_floor(self.target.order(i));
            }
        }
        Ok(Self::from_reduced(
            out,
            inner.source.clone(),
            self.target.clone(),
        ))
    }

    /// `f^n` for an endomorphism, with `f^0` the identity.
    pub fn power(&self, n: u32) -> Result<Homomorphism, FinAbError> {
        if !self.is_endomorphism() {
            return Err(FinAbError::NotEndomorphism);
        }
        let mut acc = Self::identity(&self.source);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.matrix.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
