//! Smith normal form over F2[x].
//!
//! F2[x] is a Euclidean domain, so the classical reduction works: pick the
//! minimal-degree nonzero entry as pivot (ties broken row-major, which
//! makes the reduction deterministic), clear its row and column by
//! division, and fix up divisibility by folding offending rows into the
//! pivot row. Every elementary operation has determinant 1 over this
//! field, so the transforms are genuinely unimodular.

use std::fmt;
use std::ops::Index;

use super::poly::Poly2;

/// A dense rectangular matrix over F2[x], row major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly2>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly2::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly2::one());
        }
        m
    }

    pub fn diagonal(entries: &[Poly2]) -> Self {
        let n = entries.len();
        let mut m = PolyMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly2>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly2) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly2::is_zero)
    }

    pub fn diagonal_entries(&self) -> Vec<Poly2> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = PolyMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let cur = &out[(i, j)] + &(a * b);
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    /// Cofactor expansion; intended for the small square transforms that
    /// show up in tests.
    pub fn determinant(&self) -> Poly2 {
        assert_eq!(self.rows, self.cols, "determinant of a nonsquare matrix");
        match self.rows {
            0 => Poly2::one(),
            1 => self[(0, 0)].clone(),
            n => {
                let mut det = Poly2::zero();
                for j in 0..n {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let mut minor = PolyMatrix::zeros(n - 1, n - 1);
                    for i in 1..n {
                        let mut jj = 0;
                        for k in 0..n {
                            if k != j {
                                minor.set(i - 1, jj, self[(i, k)].clone());
                                jj += 1;
                            }
                        }
                    }
                    det = &det + &(&self[(0, j)] * &minor.determinant());
                }
                det
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_multiple_of_row(&mut self, dst: usize, src: usize, q: &Poly2) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(dst, j)] + &(q * &self[(src, j)]);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_multiple_of_col(&mut self, dst: usize, src: usize, q: &Poly2) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, dst)] + &(q * &self[(i, src)]);
            self.set(i, dst, v);
        }
    }
}

impl Index<(usize, usize)> for PolyMatrix {
    type Output = Poly2;
    fn index(&self, (i, j): (usize, usize)) -> &Poly2 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// U * A * V = D with D diagonal, each diagonal entry dividing the next,
/// and U, V unimodular. `u_inv` is maintained alongside so that module
/// decompositions can move between coordinates without a solve.
pub struct SmithDecomposition {
    pub u: PolyMatrix,
    pub u_inv: PolyMatrix,
    pub d: PolyMatrix,
    pub v: PolyMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries, units included.
    pub fn invariant_factors(&self) -> Vec<Poly2> {
        self.d.diagonal_entries().into_iter().filter(|e| !e.is_zero()).collect()
    }
}

struct Reduction {
    d: PolyMatrix,
    u: PolyMatrix,
    u_inv: PolyMatrix,
    v: PolyMatrix,
}

impl Reduction {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    /// row[i] += q * row[t], tracked through u and its inverse.
    fn row_op(&mut self, i: usize, t: usize, q: &Poly2) {
        self.d.add_multiple_of_row(i, t, q);
        self.u.add_multiple_of_row(i, t, q);
        // (L U)^-1 = U^-1 L^-1; over F2 the inverse of I + qE_{i,t} is itself,
        // and right multiplication by it adds q * col[i] to col[t].
        self.u_inv.add_multiple_of_col(t, i, q);
    }

    /// col[j] += q * col[t], tracked through v.
    fn col_op(&mut self, j: usize, t: usize, q: &Poly2) {
        self.d.add_multiple_of_col(j, t, q);
        self.v.add_multiple_of_col(j, t, q);
    }
}

/// Minimal-degree nonzero entry of the trailing submatrix starting at
/// (t, t), ties broken row-major.
fn min_degree_pivot(m: &PolyMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            if let Some(deg) = m[(i, j)].degree() {
                if best.is_none_or(|(bd, _, _)| deg < bd) {
                    best = Some((deg, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(a: &PolyMatrix) -> SmithDecomposition {
    let mut r = Reduction {
        d: a.clone(),
        u: PolyMatrix::identity(a.rows()),
        u_inv: PolyMatrix::identity(a.rows()),
        v: PolyMatrix::identity(a.cols()),
    };
    let mut rank = 0;

    for t in 0..a.rows().min(a.cols()) {
        let Some((pi, pj)) = min_degree_pivot(&r.d, t) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);

        loop {
            let mut settled = true;

            for i in t + 1..r.d.rows() {
                if r.d[(i, t)].is_zero() {
                    continue;
                }
                let q = &r.d[(i, t)] / &r.d[(t, t)];
                r.row_op(i, t, &q);
                if !r.d[(i, t)].is_zero() {
                    // remainder has smaller degree; promote it to the pivot
                    r.swap_rows(t, i);
                    settled = false;
                }
            }
            for j in t + 1..r.d.cols() {
                if r.d[(t, j)].is_zero() {
                    continue;
                }
                let q = &r.d[(t, j)] / &r.d[(t, t)];
                r.col_op(j, t, &q);
                if !r.d[(t, j)].is_zero() {
                    r.swap_cols(t, j);
                    settled = false;
                }
            }
            if !settled {
                continue;
            }

            // Pivot row and column are clear; enforce that the pivot divides
            // the rest of the trailing submatrix.
            let offender = (t + 1..r.d.rows())
                .flat_map(|i| (t + 1..r.d.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| !(&r.d[(i, j)] % &r.d[(t, t)]).is_zero());
            match offender {
                Some((i, _)) => {
                    r.row_op(t, i, &Poly2::one());
                }
                None => break,
            }
        }
        rank += 1;
    }

    SmithDecomposition { u: r.u, u_inv: r.u_inv, d: r.d, v: r.v, rank }
}
