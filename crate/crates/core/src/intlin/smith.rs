use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseIntMatrix;

/// Smith normal form `U * M * V = D` together with the inverses of the
/// unimodular transforms.
#[derive(Clone, Debug)]
pub struct Smith {
    diagonal: Vec<BigInt>,
    rank: usize,
    pub u: SparseIntMatrix,
    pub u_inv: SparseIntMatrix,
    pub v: SparseIntMatrix,
    pub v_inv: SparseIntMatrix,
}

impl Smith {
    pub fn of(m: &SparseIntMatrix) -> Smith {
        let mut w = Work::new(m);
        w.run();
        w.finish()
    }

    /// Full diagonal of `D`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    /// The nonzero invariant factors `d_1 | d_2 | ... | d_rank`.
    pub fn nonzero_diagonal(&self) -> &[BigInt] {
        &self.diagonal[..self.rank]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn d(&self) -> SparseIntMatrix {
        SparseIntMatrix::diagonal(self.u.rows(), self.v.rows(), &self.diagonal)
    }
}

/// `(D, U, V)` with `U * M * V = D`, `U` and `V` unimodular, and the diagonal of
/// `D` a divisibility chain of nonnegative integers followed by zeros.
pub fn smith_normal_form(m: &SparseIntMatrix) -> (SparseIntMatrix, SparseIntMatrix, SparseIntMatrix) {
    let s = Smith::of(m);
    (s.d(), s.u, s.v)
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = c * &row[src];
            row[dst] += t;
        }
    }
}

fn col_swap(m: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

impl Work {
    fn new(m: &SparseIntMatrix) -> Work {
        let (rows, cols) = m.shape();
        Work {
            a: m.to_dense(),
            u: dense_identity(rows),
            u_inv: dense_identity(rows),
            v: dense_identity(cols),
            v_inv: dense_identity(cols),
            rows,
            cols,
        }
    }

    // row_dst += c * row_src
    fn row_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        row_axpy(&mut self.a, dst, src, c);
        row_axpy(&mut self.u, dst, src, c);
        col_axpy(&mut self.u_inv, src, dst, &-c);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        col_swap(&mut self.u_inv, i, j);
    }

    fn row_negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    // col_dst += c * col_src
    fn col_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        col_axpy(&mut self.a, dst, src, c);
        col_axpy(&mut self.v, dst, src, c);
        row_axpy(&mut self.v_inv, src, dst, &-c);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        col_swap(&mut self.a, i, j);
        col_swap(&mut self.v, i, j);
        self.v_inv.swap(i, j);
    }

    /// Smallest nonzero |entry| in the trailing block starting at `(t, t)`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let is_one = ax.is_one();
                    best = Some((i, j, ax));
                    if is_one {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero |entry| in row `t` or column `t`, restricted to the trailing block.
    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a[t][t].abs());
        for i in t + 1..self.rows {
            let x = self.a[i][t].abs();
            if !x.is_zero() && (best.2.is_zero() || x < best.2) {
                best = (i, t, x);
            }
        }
        for j in t + 1..self.cols {
            let x = self.a[t][j].abs();
            if !x.is_zero() && (best.2.is_zero() || x < best.2) {
                best = (t, j, x);
            }
        }
        (best.0, best.1)
    }

    fn run(&mut self) {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.min_pivot(t) else {
                break;
            };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_add(i, t, &-q);
                    if !self.a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_add(j, t, &-q);
                    if !self.a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    let (i, j) = self.min_in_cross(t);
                    self.row_swap(t, i);
                    self.col_swap(t, j);
                    continue;
                }
                let pivot = self.a[t][t].clone();
                let bad = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&pivot))
                });
                match bad {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_negate(t);
            }
        }
    }

    fn finish(self) -> Smith {
        let n = self.rows.min(self.cols);
        let diagonal: Vec<BigInt> = (0..n).map(|i| self.a[i][i].clone()).collect();
        let rank = diagonal.iter().take_while(|d| !d.is_zero()).count();
        debug_assert!(diagonal[rank..].iter().all(|d| d.is_zero()));
        Smith {
            diagonal,
            rank,
            u: SparseIntMatrix::from_dense(self.rows, self.rows, &self.u),
            u_inv: SparseIntMatrix::from_dense(self.rows, self.rows, &self.u_inv),
            v: SparseIntMatrix::from_dense(self.cols, self.cols, &self.v),
            v_inv: SparseIntMatrix::from_dense(self.cols, self.cols, &self.v_inv),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag_of(m: &SparseIntMatrix) -> Vec<i64> {
        let s = Smith::of(m);
        s.diagonal().iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    fn check_identity(m: &SparseIntMatrix) {
        let s = Smith::of(m);
        let d = s.d();
        assert_eq!(&(&s.u * m) * &s.v, d);
        assert_eq!(&s.u * &s.u_inv, SparseIntMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, SparseIntMatrix::identity(m.cols()));
        let du = s.u.determinant().unwrap();
        let dv = s.v.determinant().unwrap();
        assert!(du.abs().is_one() && dv.abs().is_one());
        let nz = s.nonzero_diagonal();
        for w in nz.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(nz.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(diag_of(&SparseIntMatrix::identity(2)), vec![1, 1]);
        assert_eq!(diag_of(&SparseIntMatrix::zeros(2, 2)), vec![0, 0]);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are (2, 4)
        let m = SparseIntMatrix::from_rows(&[[2, 4], [6, 8]]);
        assert_eq!(diag_of(&m), vec![2, 4]);
        check_identity(&m);
    }

    #[test]
    fn rectangular_and_empty() {
        check_identity(&SparseIntMatrix::from_rows(&[[0, 3, 6], [2, 0, 4]]));
        check_identity(&SparseIntMatrix::zeros(0, 3));
        check_identity(&SparseIntMatrix::zeros(3, 0));
    }

    #[test]
    fn idempotent_on_diagonal_output() {
        let m = SparseIntMatrix::from_rows(&[[4, -6, 2], [8, 3, -1], [0, 12, 6]]);
        let s = Smith::of(&m);
        let again = Smith::of(&s.d());
        assert_eq!(again.diagonal(), s.diagonal());
    }

    fn small_matrix() -> impl Strategy<Value = SparseIntMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = v.chunks(c.max(1)).map(|ch| ch.to_vec()).collect();
                if r == 0 || c == 0 {
                    SparseIntMatrix::zeros(r, c)
                } else {
                    SparseIntMatrix::from_rows(&rows)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn decomposition_identity_holds(m in small_matrix()) {
            check_identity(&m);
        }

        #[test]
        fn cokernel_invariant_under_permutation(m in small_matrix(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut pr: Vec<usize> = (0..m.rows()).collect();
            let mut pc: Vec<usize> = (0..m.cols()).collect();
            pr.shuffle(&mut rng);
            pc.shuffle(&mut rng);
            let pm = m.permute_rows(&pr).permute_cols(&pc);
            prop_assert_eq!(super::super::cokernel(&m), super::super::cokernel(&pm));
        }
    }
}
