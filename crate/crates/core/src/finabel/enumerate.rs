use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::hom::entry_step;
use super::table::{Odometer, SmallGroup};
use super::{stab_index, FinAbError, FinAbGroup, Homomorphism};
use crate::par::{map_chunks, ranges, Parallelism};

const CHUNK: u64 = 1 << 15;

/// The endomorphisms of a finite abelian group, indexed in row-major odometer order.
///
/// Position `(i, j)` ranges over the `gcd(order_i, order_j)` admissible
/// residues `t * order_i / gcd`, `t = 0, 1, ...`; the last position varies
/// fastest, so index 0 is the zero map.
#[derive(Clone, Debug)]
pub struct EndoSpace {
    group: FinAbGroup,
    steps: Vec<BigInt>,
    radices: Vec<BigInt>,
    count: BigInt,
}

impl EndoSpace {
    pub fn new(group: &FinAbGroup) -> Self {
        let k = group.len();
        let mut steps = Vec::with_capacity(k * k);
        let mut radices = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let oi = group.order(i);
                let oj = group.order(j);
                steps.push(entry_step(oi, oj));
                radices.push(oi.gcd(oj));
            }
        }
        let count = radices.iter().fold(BigInt::one(), |a, r| a * r);
        Self {
            group: group.clone(),
            steps,
            radices,
            count,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// `|End(G)| = ∏ gcd(order_i, order_j)`.
    pub fn count(&self) -> &BigInt {
        &self.count
    }

    pub fn endo_at(&self, idx: &BigInt) -> Homomorphism {
        let k = self.group.len();
        let mut rest = idx.clone();
        let mut m = vec![vec![BigInt::zero(); k]; k];
        for pos in (0..k * k).rev() {
            let (q, d) = rest.div_rem(&self.radices[pos]);
            rest = q;
            m[pos / k][pos % k] = d * &self.steps[pos];
        }
        Homomorphism::from_reduced(m, self.group.clone(), self.group.clone())
    }

    fn checked_count(&self, cap: u64) -> Result<u64, FinAbError> {
        match self.count.to_u64() {
            Some(c) if c <= cap => Ok(c),
            _ => Err(FinAbError::TooManyEndomorphisms {
                count: self.count.clone(),
                cap,
            }),
        }
    }
}

/// Stream of every endomorphism, produced by [`enumerate_endos`].
pub struct Endos {
    space: EndoSpace,
    next: u64,
    total: u64,
}

impl Iterator for Endos {
    type Item = Homomorphism;

    fn next(&mut self) -> Option<Homomorphism> {
        if self.next >= self.total {
            return None;
        }
        let h = self.space.endo_at(&BigInt::from(self.next));
        self.next += 1;
        Some(h)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.total - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Endos {}

pub fn enumerate_endos(g: &FinAbGroup, cap: u64) -> Result<Endos, FinAbError> {
    let space = EndoSpace::new(g);
    let total = space.checked_count(cap)?;
    Ok(Endos {
        space,
        next: 0,
        total,
    })
}

/// Runs `visit` on the value table of every endomorphism with index in
/// `[start, end)`, in order. Only for groups accepted by [`SmallGroup`].
pub(crate) fn scan_tables<A>(
    small: &SmallGroup,
    g: &FinAbGroup,
    start: u64,
    end: u64,
    mut acc: A,
    mut visit: impl FnMut(&mut A, u64, &[u8]),
) -> A {
    let mut odo = Odometer::new(small, g);
    odo.seek(start);
    let mut table = vec![0u8; small.card()];
    for idx in start..end {
        odo.small().fill_table(&odo.cols, &mut table);
        visit(&mut acc, idx, &table);
        odo.step();
    }
    acc
}

/// `(max stab index, least index attaining it)` over all endomorphisms.
pub(crate) fn max_stab_scan(space: &EndoSpace, total: u64, par: Parallelism) -> (u32, u64) {
    let g = space.group();
    let chunks = ranges(total, CHUNK);
    let best = match SmallGroup::new(g) {
        Some(small) => map_chunks(par, chunks.len(), |c| {
            let (s, e) = chunks[c];
            scan_tables(&small, g, s, e, (0u32, s), |best, idx, t| {
                let n = small.stab_index(t);
                if n > best.0 {
                    *best = (n, idx);
                }
            })
        }),
        None => map_chunks(par, chunks.len(), |c| {
            let (s, e) = chunks[c];
            let mut best = (0u32, s);
            for idx in s..e {
                let f = space.endo_at(&BigInt::from(idx));
                let n = stab_index(&f).expect("enumerated maps are endomorphisms");
                if n > best.0 {
                    best = (n, idx);
                }
            }
            best
        }),
    };
    best.into_iter()
        .fold((0u32, 0u64), |acc, b| if b.0 > acc.0 { b } else { acc })
}

pub fn max_stab_index_with(
    g: &FinAbGroup,
    cap: u64,
    par: Parallelism,
) -> Result<(u32, Homomorphism), FinAbError> {
    let space = EndoSpace::new(g);
    let total = space.checked_count(cap)?;
    let (n, idx) = max_stab_scan(&space, total, par);
    Ok((n, space.endo_at(&BigInt::from(idx))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endo_counts() {
        let z2 = FinAbGroup::new(&[(2, 1)]).unwrap();
        let all: Vec<_> = enumerate_endos(&z2, 10).unwrap().collect();
        assert_eq!(
            all,
            vec![Homomorphism::zero(&z2, &z2), Homomorphism::identity(&z2)]
        );

        let g = FinAbGroup::new(&[(2, 2), (2, 1)]).unwrap();
        assert_eq!(enumerate_endos(&g, 1000).unwrap().len(), 32);

        let z8 = FinAbGroup::new(&[(2, 3)]).unwrap();
        match enumerate_endos(&z8, 4) {
            Err(FinAbError::TooManyEndomorphisms { count, cap }) => {
                assert_eq!(count, BigInt::from(8));
                assert_eq!(cap, 4);
            }
            _ => panic!("expected refusal"),
        }
    }

    #[test]
    fn enumeration_is_exhaustive_and_distinct() {
        // oracle: every 2x2 matrix with entries in 0..4 that passes validation
        let g = FinAbGroup::new(&[(2, 2), (2, 1)]).unwrap();
        let mut brute = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..2 {
                    for d in 0..2 {
                        if let Ok(h) = Homomorphism::new(&[vec![a, b], vec![c, d]], &g, &g) {
                            brute.push(h);
                        }
                    }
                }
            }
        }
        let listed: Vec<_> = enumerate_endos(&g, 1000).unwrap().collect();
        assert_eq!(listed.len(), brute.len());
        for h in &brute {
            assert_eq!(listed.iter().filter(|x| *x == h).count(), 1);
        }
        // row-major odometer: last entry fastest
        assert_eq!(listed[1].matrix()[1][1], BigInt::from(1));
        assert_eq!(listed[2].matrix()[1][0], BigInt::from(1));
    }

    #[test]
    fn odometer_matches_endo_at() {
        let g = FinAbGroup::new(&[(2, 2), (2, 1), (3, 1)]).unwrap();
        let space = EndoSpace::new(&g);
        let small = SmallGroup::new(&g).unwrap();
        let total = space.count().to_u64().unwrap();
        let seen = scan_tables(&small, &g, 3, total, Vec::new(), |v, idx, t| {
            v.push((idx, t.to_vec()))
        });
        for (idx, t) in seen {
            let f = space.endo_at(&BigInt::from(idx));
            assert_eq!(t, small.table_of(&f), "index {idx}");
        }
    }
}
