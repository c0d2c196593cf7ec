//! Element-table evaluation for groups with at most 64 elements.
//!
//! Elements are encoded as mixed-radix indices (last factor fastest) and
//! subsets as `u64` bitmasks. An endomorphism is expanded into its full
//! value table, and image chains are computed as plain set images. This path
//! is independent of the lattice normal form in `subgroup` and is what makes
//! the exhaustive oracle fast.

use num_integer::Integer;

use super::{FinAbGroup, Homomorphism};

pub const MAX_TABLE_CARD: u64 = 64;

pub(crate) struct SmallGroup {
    card: usize,
    orders: Vec<u32>,
    weights: Vec<u32>,
    add: Vec<u8>,
    low: Vec<u8>,
    pred: Vec<u8>,
    full: u64,
}

impl SmallGroup {
    pub(crate) fn new(g: &FinAbGroup) -> Option<Self> {
        let card = g.small_cardinality()?;
        if card > MAX_TABLE_CARD {
            return None;
        }
        let card = card as usize;
        let k = g.len();
        let orders: Vec<u32> = g
            .orders()
            .iter()
            .map(|o| u32::try_from(o).unwrap())
            .collect();
        let mut weights = vec![1u32; k];
        for j in (0..k.saturating_sub(1)).rev() {
            weights[j] = weights[j + 1] * orders[j + 1];
        }
        let decode = |mut x: usize| -> Vec<u32> {
            let mut c = vec![0u32; k];
            for j in (0..k).rev() {
                c[j] = (x as u32) % orders[j];
                x /= orders[j] as usize;
            }
            c
        };
        let encode =
            |c: &[u32]| -> usize { c.iter().zip(&weights).map(|(a, w)| (a * w) as usize).sum() };
        let digits: Vec<Vec<u32>> = (0..card).map(decode).collect();
        let mut add = vec![0u8; card * card];
        for x in 0..card {
            for y in 0..card {
                let s: Vec<u32> = (0..k)
                    .map(|j| (digits[x][j] + digits[y][j]) % orders[j])
                    .collect();
                add[x * card + y] = encode(&s) as u8;
            }
        }
        let mut low = vec![0u8; card];
        let mut pred = vec![0u8; card];
        for x in 1..card {
            let j = (0..k).rev().find(|&j| digits[x][j] != 0).unwrap();
            low[x] = j as u8;
            pred[x] = (x - weights[j] as usize) as u8;
        }
        let full = if card == 64 {
            u64::MAX
        } else {
            (1u64 << card) - 1
        };
        Some(Self {
            card,
            orders,
            weights,
            add,
            low,
            pred,
            full,
        })
    }

    pub(crate) fn card(&self) -> usize {
        self.card
    }

    pub(crate) fn factor_count(&self) -> usize {
        self.orders.len()
    }

    pub(crate) fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    /// Encoded image of generator `j` under a matrix with reduced entries.
    pub(crate) fn column_code(&self, f: &Homomorphism, j: usize) -> u32 {
        (0..self.factor_count())
            .map(|i| u32::try_from(&f.matrix()[i][j]).unwrap() * self.weights[i])
            .sum()
    }

    /// Full value table of the endomorphism whose generator images are `cols`.
    #[inline]
    pub(crate) fn fill_table(&self, cols: &[u32], out: &mut [u8]) {
        out[0] = 0;
        let card = self.card;
        for x in 1..card {
            let p = out[self.pred[x] as usize] as usize;
            out[x] = self.add[p * card + cols[self.low[x] as usize] as usize];
        }
    }

    pub(crate) fn table_of(&self, f: &Homomorphism) -> Vec<u8> {
        let cols: Vec<u32> = (0..self.factor_count())
            .map(|j| self.column_code(f, j))
            .collect();
        let mut t = vec![0u8; self.card];
        self.fill_table(&cols, &mut t);
        t
    }

    #[inline]
    pub(crate) fn image_mask(table: &[u8], mask: u64) -> u64 {
        let mut m = mask;
        let mut out = 0u64;
        while m != 0 {
            let x = m.trailing_zeros() as usize;
            out |= 1u64 << table[x];
            m &= m - 1;
        }
        out
    }

    /// Least `n` with `f^n(G) = f^{n+1}(G)`.
    #[inline]
    pub(crate) fn stab_index(&self, table: &[u8]) -> u32 {
        let mut cur = self.full;
        let mut n = 0;
        loop {
            let next = Self::image_mask(table, cur);
            if next == cur {
                return n;
            }
            cur = next;
            n += 1;
        }
    }

    /// For `n = 0..=upto`, whether `f^n(G) + ker f^n = G`, by forming the sum set explicitly.
    pub(crate) fn sum_decomposition(&self, table: &[u8], upto: u32, out: &mut Vec<bool>) {
        out.clear();
        let card = self.card;
        let mut im = self.full;
        let mut ker = 1u64; // ker f^0 = {0}
        for n in 0..=upto {
            // union of the cosets x + ker, one representative x per coset
            let mut sum = 0u64;
            let mut a = im;
            while a != 0 {
                let x = a.trailing_zeros() as usize;
                let row = &self.add[x * card..(x + 1) * card];
                let mut b = ker;
                while b != 0 {
                    let y = b.trailing_zeros() as usize;
                    sum |= 1u64 << row[y];
                    b &= b - 1;
                }
                a &= !sum;
            }
            out.push(sum == self.full);
            if n == upto {
                break;
            }
            im = Self::image_mask(table, im);
            let mut next_ker = 0u64;
            for (x, &y) in table.iter().enumerate().take(card) {
                if ker & (1u64 << y) != 0 {
                    next_ker |= 1u64 << x;
                }
            }
            ker = next_ker;
        }
    }
}

/// Mixed-radix odometer over the admissible entries of an endomorphism
/// matrix, tracking encoded generator images incrementally.
pub(crate) struct Odometer<'a> {
    small: &'a SmallGroup,
    /// (column, step * weight(row), radix) per row-major position
    slots: Vec<(usize, u32, u32)>,
    digits: Vec<u32>,
    pub(crate) cols: Vec<u32>,
}

impl<'a> Odometer<'a> {
    pub(crate) fn new(small: &'a SmallGroup, g: &FinAbGroup) -> Self {
        let k = g.len();
        let mut slots = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let oi = small.orders[i];
                let oj = small.orders[j];
                let gcd = oi.gcd(&oj);
                let step = oi / gcd;
                slots.push((j, step * small.weight(i), gcd));
            }
        }
        Self {
            small,
            digits: vec![0; slots.len()],
            slots,
            cols: vec![0; k],
        }
    }

    /// Jump to the endomorphism with enumeration index `idx`.
    pub(crate) fn seek(&mut self, mut idx: u64) {
        self.cols.iter_mut().for_each(|c| *c = 0);
        for pos in (0..self.slots.len()).rev() {
            let (col, unit, radix) = self.slots[pos];
            let d = (idx % radix as u64) as u32;
            idx /= radix as u64;
            self.digits[pos] = d;
            self.cols[col] += d * unit;
        }
    }

    /// Advance by one in row-major order (last position fastest).
    #[inline]
    pub(crate) fn step(&mut self) {
        for pos in (0..self.slots.len()).rev() {
            let (col, unit, radix) = self.slots[pos];
            let d = self.digits[pos] + 1;
            if d < radix {
                self.digits[pos] = d;
                self.cols[col] += unit;
                return;
            }
            self.cols[col] -= (radix - 1) * unit;
            self.digits[pos] = 0;
        }
    }

    pub(crate) fn small(&self) -> &SmallGroup {
        self.small
    }
}
