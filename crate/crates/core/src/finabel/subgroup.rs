use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FinAbError, FinAbGroup, GroupElement, Homomorphism};

/// Subgroup of a finite abelian group in canonical form.
///
/// A subgroup `H ≤ ⊕ Z(n_i)` corresponds to the full-rank lattice `L ⊂ Z^k`
/// of coordinate vectors landing in `H`; `L` contains `diag(n_i)`. The
/// stored basis is the upper-triangular Hermite normal form of `L`: row `i`
/// has its pivot in column `i`, pivots are positive and divide `n_i`, and
/// every entry above a pivot lies in `[0, pivot)`. The form is unique, so
/// derived equality is subgroup equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: FinAbGroup,
    basis: Vec<Vec<BigInt>>,
}

/// Row-style Hermite normal form of `rows ∪ {n_i e_i}`.
///
/// Pivot rule: among the active rows with a nonzero entry in the current
/// column, take the smallest absolute value, earliest row on ties.
pub(crate) fn hnf_with_relations(
    mut rows: Vec<Vec<BigInt>>,
    moduli: &[BigInt],
) -> Vec<Vec<BigInt>> {
    let k = moduli.len();
    // Entries right of the current column can be reduced mod n_j because the
    // untouched relation row n_j e_j is still among the active rows.
    let reduce_tail = |row: &mut Vec<BigInt>, from: usize| {
        for j in from..k {
            row[j] = row[j].mod_floor(&moduli[j]);
        }
    };
    for r in rows.iter_mut() {
        reduce_tail(r, 0);
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    for (i, n) in moduli.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k];
        r[i] = n.clone();
        rows.push(r);
    }

    let mut pivots: Vec<Vec<BigInt>> = Vec::with_capacity(k);
    for c in 0..k {
        loop {
            let mut best: Option<usize> = None;
            let mut nonzero = 0usize;
            for (idx, r) in rows.iter().enumerate() {
                if r[c].is_zero() {
                    continue;
                }
                nonzero += 1;
                match best {
                    Some(b) if rows[b][c].abs() <= r[c].abs() => {}
                    _ => best = Some(idx),
                }
            }
            let b = best.expect("relation row guarantees a pivot");
            if nonzero == 1 {
                let mut piv = rows.swap_remove(b);
                if piv[c].is_negative() {
                    for x in piv.iter_mut() {
                        *x = -&*x;
                    }
                }
                reduce_tail(&mut piv, c + 1);
                pivots.push(piv);
                break;
            }
            let pivot_row = rows[b].clone();
            for (idx, r) in rows.iter_mut().enumerate() {
                if idx == b || r[c].is_zero() {
                    continue;
                }
                let q = r[c].div_floor(&pivot_row[c]);
                for j in c..k {
                    let d = &q * &pivot_row[j];
                    r[j] -= d;
                }
                reduce_tail(r, c + 1);
            }
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }

    for j in 0..k {
        let (above, rest) = pivots.split_at_mut(j);
        let pj = &rest[0];
        for r in above.iter_mut() {
            let q = r[j].div_floor(&pj[j]);
            if !q.is_zero() {
                for t in j..k {
                    let d = &q * &pj[t];
                    r[t] -= d;
                }
            }
        }
    }
    pivots
}

impl Subgroup {
    /// Subgroup generated by the given coordinate vectors.
    pub fn generated_by(ambient: &FinAbGroup, gens: &[Vec<BigInt>]) -> Result<Self, FinAbError> {
        if gens.iter().any(|g| g.len() != ambient.len()) {
            return Err(FinAbError::Mismatch(
                "generator length differs from factor count",
            ));
        }
        Ok(Self {
            basis: hnf_with_relations(gens.to_vec(), ambient.orders()),
            ambient: ambient.clone(),
        })
    }

    pub fn from_elements(ambient: &FinAbGroup, gens: &[GroupElement]) -> Result<Self, FinAbError> {
        let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
        Self::generated_by(ambient, &rows)
    }

    pub fn whole(ambient: &FinAbGroup) -> Self {
        let k = ambient.len();
        let basis = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            ambient: ambient.clone(),
            basis,
        }
    }

    pub fn trivial(ambient: &FinAbGroup) -> Self {
        let k = ambient.len();
        let basis = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            ambient.order(i).clone()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            ambient: ambient.clone(),
            basis,
        }
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    /// Canonical generators, one per factor (row `i` has its pivot in column `i`).
    pub fn canonical_gens(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn cardinality(&self) -> BigInt {
        self.basis
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (i, r)| {
                acc * (self.ambient.order(i) / &r[i])
            })
    }

    pub fn is_whole(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    pub fn is_trivial(&self) -> bool {
        self.basis
            .iter()
            .enumerate()
            .all(|(i, r)| &r[i] == self.ambient.order(i))
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        if x.coords.len() != self.ambient.len() {
            return false;
        }
        let mut v = x.coords.clone();
        for (i, row) in self.basis.iter().enumerate() {
            let (q, r) = v[i].div_rem(&row[i]);
            if !r.is_zero() {
                return false;
            }
            for (t, b) in row.iter().enumerate().skip(i) {
                v[t] -= &q * b;
            }
        }
        true
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient
            && self
                .basis
                .iter()
                .all(|r| other.contains(&GroupElement { coords: r.clone() }))
    }

    /// `self + other`.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup, FinAbError> {
        if self.ambient != other.ambient {
            return Err(FinAbError::Mismatch("subgroups live in different groups"));
        }
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::generated_by(&self.ambient, &gens)
    }

    /// `f(self)` as a subgroup of `f.target`.
    pub fn map(&self, f: &Homomorphism) -> Result<Subgroup, FinAbError> {
        if f.source() != &self.ambient {
            return Err(FinAbError::Mismatch(
                "map source differs from ambient group",
            ));
        }
        let gens: Vec<Vec<BigInt>> = self.basis.iter().map(|r| f.apply_coords(r)).collect();
        Subgroup::generated_by(f.target(), &gens)
    }

    pub fn equals(&self, other: &Subgroup) -> Result<bool, FinAbError> {
        if self.ambient != other.ambient {
            return Err(FinAbError::Mismatch("subgroups live in different groups"));
        }
        Ok(self.basis == other.basis)
    }

    /// Every element, for small subgroups.
    pub fn elements(&self) -> Vec<GroupElement> {
        self.ambient
            .elements()
            .filter(|x| self.contains(x))
            .collect()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, "> in {}", self.ambient)
    }
}

/// `{x : f(x) = 0}`.
pub(crate) fn kernel_of(f: &Homomorphism) -> Subgroup {
    let src = f.source();
    let tgt = f.target();
    let k = src.len();
    let m = tgt.len();
    // Rows [f(e_j) | e_j] together with [n'_i e_i | 0]; echelonize the left
    // block; rows whose left block vanishes span the kernel lattice.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(k + m);
    for j in 0..k {
        let mut r = vec![BigInt::zero(); m + k];
        for (slot, row) in r.iter_mut().zip(f.matrix()) {
            *slot = row[j].clone();
        }
        r[m + j] = BigInt::one();
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); m + k];
        r[i] = tgt.order(i).clone();
        rows.push(r);
    }
    let mut done = 0usize;
    for c in 0..m {
        loop {
            let active = &rows[done..];
            let nonzero: Vec<usize> = active
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[c].is_zero())
                .map(|(i, _)| i + done)
                .collect();
            let Some(&first) = nonzero.first() else { break };
            let b = nonzero.iter().copied().fold(first, |b, i| {
                if rows[i][c].abs() < rows[b][c].abs() {
                    i
                } else {
                    b
                }
            });
            if nonzero.len() == 1 {
                rows.swap(done, b);
                done += 1;
                break;
            }
            let pr = rows[b].clone();
            for &i in &nonzero {
                if i == b {
                    continue;
                }
                let q = rows[i][c].div_floor(&pr[c]);
                for t in 0..m + k {
                    let d = &q * &pr[t];
                    rows[i][t] -= d;
                }
                for (t, x) in rows[i].iter_mut().enumerate().take(m).skip(c + 1) {
                    *x = x.mod_floor(tgt.order(t));
                }
                // keep the solution part small: n_j e_j lies in the kernel lattice
                for t in 0..k {
                    rows[i][m + t] = rows[i][m + t].mod_floor(src.order(t));
                }
            }
        }
    }
    let gens: Vec<Vec<BigInt>> = rows[done..].iter().map(|r| r[m..].to_vec()).collect();
    Subgroup::generated_by(src, &gens).expect("lengths match by construction")
}
