//! Dense bit matrices over the two-element field. Rows are packed into
//! 64-bit words; rank and kernel computations are plain Gaussian
//! elimination, which is exact and cheap at the sizes used here.

use std::fmt;

/// A rows x cols matrix over F2.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64).max(1);
        Gf2Matrix { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.wpr + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        let w = &mut self.data[i * self.wpr + j / 64];
        if bit {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.wpr..(i + 1) * self.wpr]
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.wpr, src * self.wpr);
        for k in 0..self.wpr {
            let v = self.data[s + k];
            self.data[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.data.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Gf2Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (d, s) = (i * out.wpr, k * rhs.wpr);
                    for w in 0..out.wpr {
                        out.data[d + w] ^= rhs.data[s + w];
                    }
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector packed into one word.
    /// Requires cols <= 64 and rows <= 64.
    pub fn apply_bits(&self, v: u64) -> u64 {
        debug_assert!(self.cols <= 64 && self.rows <= 64);
        let mut out = 0u64;
        for i in 0..self.rows {
            if (self.row(i)[0] & v).count_ones() % 2 == 1 {
                out |= 1 << i;
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.clone().echelonize().0
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    /// Row reduction in place; returns (rank, pivot columns).
    fn echelonize(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            let Some(pivot) = (r..self.rows).find(|&i| self.get(i, j)) else {
                continue;
            };
            self.swap_rows(r, pivot);
            for i in 0..self.rows {
                if i != r && self.get(i, j) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(j);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        (r, pivots)
    }

    /// A basis of the right kernel, one vector per row of the result.
    pub fn kernel_basis(&self) -> Gf2Matrix {
        let mut m = self.clone();
        let (rank, pivots) = m.echelonize();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Gf2Matrix::zeros(free.len(), self.cols);
        for (bi, &fj) in free.iter().enumerate() {
            basis.set(bi, fj, true);
            for (pi, &pj) in pivots.iter().enumerate().take(rank) {
                if m.get(pi, fj) {
                    basis.set(bi, pj, true);
                }
            }
        }
        basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Stacks blocks into one matrix; every row of `blocks` must have
    /// consistent heights and every column consistent widths.
    pub fn from_blocks(blocks: &[&[&Gf2Matrix]]) -> Gf2Matrix {
        let rows: usize = blocks.iter().map(|r| r[0].rows).sum();
        let cols: usize = blocks[0].iter().map(|b| b.cols).sum();
        let mut out = Gf2Matrix::zeros(rows, cols);
        let mut roff = 0;
        for brow in blocks {
            let h = brow[0].rows;
            let mut coff = 0;
            for b in *brow {
                assert_eq!(b.rows, h, "ragged block row");
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        if b.get(i, j) {
                            out.set(roff + i, coff + j, true);
                        }
                    }
                }
                coff += b.cols;
            }
            assert_eq!(coff, cols, "ragged block column");
            roff += h;
        }
        out
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        // [1 1 0; 0 1 1] has rank 2 and kernel spanned by (1,1,1).
        let m = Gf2Matrix::from_fn(2, 3, |i, j| matches!((i, j), (0, 0) | (0, 1) | (1, 1) | (1, 2)));
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        assert!(k.get(0, 0) && k.get(0, 1) && k.get(0, 2));
        // Every kernel vector maps to zero.
        let prod = m.mul(&Gf2Matrix::from_fn(3, 1, |i, _| k.get(0, i)));
        assert_eq!(prod, Gf2Matrix::zeros(2, 1));
    }

    #[test]
    fn identity_is_bijective() {
        let id = Gf2Matrix::identity(5);
        assert!(id.is_injective() && id.is_surjective());
        assert_eq!(id.kernel_dim(), 0);
    }

    #[test]
    fn blocks_assemble() {
        let a = Gf2Matrix::identity(2);
        let z = Gf2Matrix::zeros(2, 1);
        let b = Gf2Matrix::from_fn(1, 2, |_, _| true);
        let c = Gf2Matrix::identity(1);
        let m = Gf2Matrix::from_blocks(&[&[&a, &z], &[&b, &c]]);
        assert_eq!((m.rows(), m.cols()), (3, 3));
        assert!(m.get(2, 0) && m.get(2, 1) && m.get(2, 2) && m.get(0, 0));
        assert!(!m.get(0, 2));
    }

    #[test]
    fn apply_bits_matches_mul() {
        let m = Gf2Matrix::from_fn(4, 4, |i, j| (i + j) % 3 == 0);
        for v in 0u64..16 {
            let col = Gf2Matrix::from_fn(4, 1, |i, _| v >> i & 1 == 1);
            let prod = m.mul(&col);
            let expect: u64 = (0..4).filter(|&i| prod.get(i, 0)).map(|i| 1 << i).sum();
            assert_eq!(m.apply_bits(v), expect);
        }
    }
}
