//! Running-codeword accumulators for the enumeration hot loop.
//!
//! Binary codewords are bit-packed (xor + popcount). Ternary codewords use
//! two bit planes, one marking entries equal to 1 and one marking entries
//! equal to 2, so a row add is a handful of word operations per 64 symbols.
//! Other primes fall back to one byte per symbol with the weight maintained
//! incrementally over each row's support.

use crate::codes::Alphabet;

pub(crate) trait Accumulator: Send {
    /// Current codeword += row (sign +1) or -= row (sign -1).
    fn step(&mut self, row: usize, sign: i8);
    /// Current codeword := sum of coef_i * row_i.
    fn load(&mut self, coefs: &[(usize, u8)]);
    fn weight(&self) -> usize;
    fn entries(&self) -> Vec<u8>;
}

pub(crate) fn accumulator(alpha: &Alphabet, rows: &[Vec<u8>], len: usize) -> Box<dyn Accumulator> {
    match alpha.p() {
        2 => Box::new(Binary::new(rows, len)),
        3 => Box::new(Ternary::new(rows, len)),
        _ => Box::new(Generic::new(alpha.clone(), rows, len)),
    }
}

fn words(len: usize) -> usize {
    len.div_ceil(64)
}

pub(crate) struct Binary {
    len: usize,
    rows: Vec<Vec<u64>>,
    cur: Vec<u64>,
}

impl Binary {
    pub(crate) fn new(rows: &[Vec<u8>], len: usize) -> Binary {
        let rows = rows
            .iter()
            .map(|r| {
                let mut w = vec![0u64; words(len)];
                for (i, &x) in r.iter().enumerate() {
                    if x & 1 == 1 {
                        w[i / 64] |= 1 << (i % 64);
                    }
                }
                w
            })
            .collect();
        Binary { len, rows, cur: vec![0; words(len)] }
    }
}

impl Accumulator for Binary {
    #[inline]
    fn step(&mut self, row: usize, _sign: i8) {
        for (c, r) in self.cur.iter_mut().zip(&self.rows[row]) {
            *c ^= r;
        }
    }

    fn load(&mut self, coefs: &[(usize, u8)]) {
        self.cur.iter_mut().for_each(|w| *w = 0);
        for &(r, c) in coefs {
            if c & 1 == 1 {
                self.step(r, 1);
            }
        }
    }

    #[inline]
    fn weight(&self) -> usize {
        self.cur.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn entries(&self) -> Vec<u8> {
        (0..self.len).map(|i| ((self.cur[i / 64] >> (i % 64)) & 1) as u8).collect()
    }
}

/// Entrywise sum of two ternary vectors in one-hot bit-plane form.
#[inline]
pub(crate) fn ternary_add(a1: u64, a2: u64, b1: u64, b2: u64) -> (u64, u64) {
    let a0 = !(a1 | a2);
    let b0 = !(b1 | b2);
    let c1 = (a1 & b0) | (a0 & b1) | (a2 & b2);
    let c2 = (a2 & b0) | (a0 & b2) | (a1 & b1);
    (c1, c2)
}

pub(crate) struct Ternary {
    len: usize,
    ones: Vec<Vec<u64>>,
    twos: Vec<Vec<u64>>,
    cur1: Vec<u64>,
    cur2: Vec<u64>,
}

impl Ternary {
    pub(crate) fn new(rows: &[Vec<u8>], len: usize) -> Ternary {
        let plane = |v: u8| -> Vec<Vec<u64>> {
            rows.iter()
                .map(|r| {
                    let mut w = vec![0u64; words(len)];
                    for (i, &x) in r.iter().enumerate() {
                        if x == v {
                            w[i / 64] |= 1 << (i % 64);
                        }
                    }
                    w
                })
                .collect()
        };
        Ternary {
            len,
            ones: plane(1),
            twos: plane(2),
            cur1: vec![0; words(len)],
            cur2: vec![0; words(len)],
        }
    }
}

impl Accumulator for Ternary {
    #[inline]
    fn step(&mut self, row: usize, sign: i8) {
        // subtracting a row adds its negation, which swaps the planes
        let (b1, b2) = if sign > 0 {
            (&self.ones[row], &self.twos[row])
        } else {
            (&self.twos[row], &self.ones[row])
        };
        for i in 0..self.cur1.len() {
            let (c1, c2) = ternary_add(self.cur1[i], self.cur2[i], b1[i], b2[i]);
            self.cur1[i] = c1;
            self.cur2[i] = c2;
        }
    }

    fn load(&mut self, coefs: &[(usize, u8)]) {
        self.cur1.iter_mut().for_each(|w| *w = 0);
        self.cur2.iter_mut().for_each(|w| *w = 0);
        for &(r, c) in coefs {
            match c % 3 {
                1 => self.step(r, 1),
                2 => self.step(r, -1),
                _ => {}
            }
        }
    }

    #[inline]
    fn weight(&self) -> usize {
        self.cur1
            .iter()
            .zip(&self.cur2)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    fn entries(&self) -> Vec<u8> {
        (0..self.len)
            .map(|i| {
                let bit = 1u64 << (i % 64);
                if self.cur1[i / 64] & bit != 0 {
                    1
                } else if self.cur2[i / 64] & bit != 0 {
                    2
                } else {
                    0
                }
            })
            .collect()
    }
}

pub(crate) struct Generic {
    alpha: Alphabet,
    rows: Vec<Vec<(u32, u8)>>,
    cur: Vec<u8>,
    weight: usize,
}

impl Generic {
    pub(crate) fn new(alpha: Alphabet, rows: &[Vec<u8>], len: usize) -> Generic {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| (i as u32, x))
                    .collect()
            })
            .collect();
        Generic { alpha, rows, cur: vec![0; len], weight: 0 }
    }
}

impl Accumulator for Generic {
    #[inline]
    fn step(&mut self, row: usize, sign: i8) {
        let alpha = &self.alpha;
        let mut w = self.weight as isize;
        for &(i, x) in &self.rows[row] {
            let old = self.cur[i as usize];
            let new = if sign > 0 { alpha.add(old, x) } else { alpha.sub(old, x) };
            w += (new != 0) as isize - (old != 0) as isize;
            self.cur[i as usize] = new;
        }
        self.weight = w as usize;
    }

    fn load(&mut self, coefs: &[(usize, u8)]) {
        self.cur.iter_mut().for_each(|x| *x = 0);
        for &(r, c) in coefs {
            for &(i, x) in &self.rows[r] {
                let v = &mut self.cur[i as usize];
                *v = self.alpha.add(*v, self.alpha.mul(c, x));
            }
        }
        self.weight = self.cur.iter().filter(|&&x| x != 0).count();
    }

    #[inline]
    fn weight(&self) -> usize {
        self.weight
    }

    fn entries(&self) -> Vec<u8> {
        self.cur.clone()
    }
}
