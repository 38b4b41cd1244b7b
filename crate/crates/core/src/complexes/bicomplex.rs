use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{ChainComplex, ChainMap, HomologyPresentation, Label};
use crate::error::{Error, Result};
use crate::intlin::{self, AbelianGroup, SparseIntMatrix};

/// Double complex with vertical maps `(s, t) -> (s, t-1)` and horizontal maps
/// `(s, t) -> (s-1, t)` that anticommute.
///
/// `complete` is the range of total degrees in which every cell is present;
/// total complexes and E¹ terms can only be formed inside it.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    cells: BTreeMap<(i64, i64), Vec<Label>>,
    vertical: BTreeMap<(i64, i64), SparseIntMatrix>,
    horizontal: BTreeMap<(i64, i64), SparseIntMatrix>,
    complete: (i64, i64),
}

impl Bicomplex {
    /// Validates shapes, `v∘v = 0`, `h∘h = 0` and `v∘h + h∘v = 0` on every cell.
    /// Missing maps are zero.
    pub fn new(
        cells: BTreeMap<(i64, i64), Vec<Label>>,
        vertical: BTreeMap<(i64, i64), SparseIntMatrix>,
        horizontal: BTreeMap<(i64, i64), SparseIntMatrix>,
        complete: (i64, i64),
    ) -> Result<Self> {
        let b = Bicomplex { cells, vertical, horizontal, complete };
        for (&(s, t), m) in &b.vertical {
            if m.shape() != (b.dim(s, t - 1), b.dim(s, t)) {
                return Err(Error::DimensionMismatch(format!("vertical map at ({s}, {t})")));
            }
        }
        for (&(s, t), m) in &b.horizontal {
            if m.shape() != (b.dim(s - 1, t), b.dim(s, t)) {
                return Err(Error::DimensionMismatch(format!("horizontal map at ({s}, {t})")));
            }
        }
        for &(s, t) in b.cells.keys() {
            if !(&b.v(s, t - 1) * &b.v(s, t)).is_zero() {
                return Err(Error::CompositionNonzero(format!("vertical² != 0 at ({s}, {t})")));
            }
            if !(&b.h(s - 1, t) * &b.h(s, t)).is_zero() {
                return Err(Error::CompositionNonzero(format!("horizontal² != 0 at ({s}, {t})")));
            }
            let anti = &(&b.v(s - 1, t) * &b.h(s, t)) + &(&b.h(s, t - 1) * &b.v(s, t));
            if !anti.is_zero() {
                return Err(Error::CompositionNonzero(format!(
                    "vertical and horizontal do not anticommute at ({s}, {t})"
                )));
            }
        }
        Ok(b)
    }

    pub fn dim(&self, s: i64, t: i64) -> usize {
        self.cells.get(&(s, t)).map_or(0, |c| c.len())
    }

    pub fn cell(&self, s: i64, t: i64) -> &[Label] {
        self.cells.get(&(s, t)).map_or(&[], |c| c.as_slice())
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.cells.keys().copied()
    }

    pub fn complete_range(&self) -> (i64, i64) {
        self.complete
    }

    /// Vertical map out of `(s, t)`.
    pub fn v(&self, s: i64, t: i64) -> SparseIntMatrix {
        self.vertical
            .get(&(s, t))
            .cloned()
            .unwrap_or_else(|| SparseIntMatrix::zeros(self.dim(s, t - 1), self.dim(s, t)))
    }

    /// Horizontal map out of `(s, t)`.
    pub fn h(&self, s: i64, t: i64) -> SparseIntMatrix {
        self.horizontal
            .get(&(s, t))
            .cloned()
            .unwrap_or_else(|| SparseIntMatrix::zeros(self.dim(s - 1, t), self.dim(s, t)))
    }

    /// Cells of total degree `n`, ordered by `s`.
    fn diagonal(&self, n: i64) -> Vec<(i64, i64)> {
        self.cells.keys().filter(|&&(s, t)| s + t == n).copied().collect()
    }

    fn check_window(&self, lo: i64, hi: i64) -> Result<()> {
        if lo < self.complete.0 || hi > self.complete.1 || lo > hi {
            return Err(Error::TruncationTooTight(format!(
                "window {lo}..={hi} is not inside the complete range {}..={}",
                self.complete.0, self.complete.1
            )));
        }
        Ok(())
    }

    /// Total complex on total degrees `lo..=hi`; the differential is
    /// vertical + horizontal.
    pub fn total_complex(&self, lo: i64, hi: i64) -> Result<ChainComplex> {
        self.check_window(lo, hi)?;
        let diags: Vec<Vec<(i64, i64)>> = (lo..=hi).map(|n| self.diagonal(n)).collect();
        let bases: Vec<Vec<Label>> = diags
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .flat_map(|&(s, t)| {
                        self.cell(s, t).iter().map(move |l| Label::Cell {
                            s,
                            t,
                            inner: Box::new(l.clone()),
                        })
                    })
                    .collect()
            })
            .collect();
        let offsets = |cells: &[(i64, i64)]| -> BTreeMap<(i64, i64), usize> {
            let mut off = 0;
            cells
                .iter()
                .map(|&c| {
                    let o = off;
                    off += self.dim(c.0, c.1);
                    (c, o)
                })
                .collect()
        };
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let src = &diags[(n - lo) as usize];
            let tgt = &diags[(n - 1 - lo) as usize];
            let so = offsets(src);
            let to = offsets(tgt);
            let rows: usize = tgt.iter().map(|&(s, t)| self.dim(s, t)).sum();
            let cols: usize = src.iter().map(|&(s, t)| self.dim(s, t)).sum();
            let mut m = SparseIntMatrix::zeros(rows, cols);
            for &(s, t) in src {
                let c0 = so[&(s, t)];
                if let Some(&r0) = to.get(&(s, t - 1)) {
                    m.insert_block(r0, c0, &self.v(s, t));
                }
                if let Some(&r0) = to.get(&(s - 1, t)) {
                    m.insert_block(r0, c0, &self.h(s, t));
                }
            }
            diffs.push(m);
        }
        ChainComplex::new(lo, bases, diffs)
    }

    /// Basis offset of cell `(s, t)` inside total degree `s + t`.
    pub fn total_offset(&self, s: i64, t: i64) -> usize {
        self.diagonal(s + t)
            .iter()
            .take_while(|&&c| c != (s, t))
            .map(|&(a, b)| self.dim(a, b))
            .sum()
    }

    /// Column `s` as a chain complex in the `t` direction, over rows `lo..=hi`.
    pub fn column(&self, s: i64, lo: i64, hi: i64) -> Result<ChainComplex> {
        let bases = (lo..=hi).map(|t| self.cell(s, t).to_vec()).collect();
        let diffs = (lo + 1..=hi).map(|t| self.v(s, t)).collect();
        ChainComplex::new(lo, bases, diffs)
    }

    /// E¹ page: homology of each column under the vertical differential, for
    /// every cell whose total degree leaves room for the incoming boundary.
    pub fn e1(&self) -> Result<BTreeMap<(i64, i64), AbelianGroup>> {
        let mut out = BTreeMap::new();
        for (s, t) in self.e1_cells() {
            out.insert((s, t), intlin::homology_pair(&self.v(s, t), &self.v(s, t + 1))?);
        }
        Ok(out)
    }

    fn e1_cells(&self) -> Vec<(i64, i64)> {
        let (lo, hi) = self.complete;
        let mut cells: Vec<(i64, i64)> =
            self.cells.keys().filter(|&&(s, t)| s + t >= lo && s + t < hi).copied().collect();
        // E¹ is also defined (and zero) on empty cells; only stored ones are listed
        cells.sort();
        cells
    }

    /// Presentation of `E¹_{s,t}`, optionally with `Z/q` coefficients.
    pub fn e1_presentation(&self, s: i64, t: i64, modulus: Option<&BigInt>) -> Result<HomologyPresentation> {
        let (lo, hi) = self.complete;
        if s + t < lo || s + t >= hi {
            return Err(Error::TruncationTooTight(format!("E¹ at ({s}, {t}) is outside the window")));
        }
        match modulus {
            None => HomologyPresentation::compute(&self.v(s, t), &self.v(s, t + 1)),
            Some(q) => {
                let col = self.column(s, t - 1, t + 2)?;
                ChainMap::scalar(&col, q).cone()?.homology_presentation(t)
            }
        }
    }

    /// Map `E¹_{s,t} -> E¹_{s-1,t}` induced by the horizontal differential.
    /// The sign `(-1)^t` turning the anticommuting square into a chain map is
    /// applied, so the result is a genuine map on vertical homology.
    pub fn e1_horizontal(&self, s: i64, t: i64, modulus: Option<&BigInt>) -> Result<SparseIntMatrix> {
        let src = self.e1_presentation(s, t, modulus)?;
        let tgt = self.e1_presentation(s - 1, t, modulus)?;
        let sign = BigInt::from(if t.rem_euclid(2) == 0 { 1 } else { -1 });
        match modulus {
            None => tgt.image_of(&self.h(s, t).scale(&sign), &src),
            Some(_) => {
                // on Cone(q)_t = C_{t-1} ⊕ C_t the map is h ⊕ h, with signs (-1)^{t-1}, (-1)^t
                let (a, b) = (self.dim(s, t - 1), self.dim(s, t));
                let (c, d) = (self.dim(s - 1, t - 1), self.dim(s - 1, t));
                let mut m = SparseIntMatrix::zeros(c + d, a + b);
                m.insert_block(0, 0, &self.h(s, t - 1).scale(&-&sign));
                m.insert_block(c, a, &self.h(s, t).scale(&sign));
                tgt.image_of(&m, &src)
            }
        }
    }

    /// Swaps `s` and `t` together with the two differentials.
    pub fn transpose(&self) -> Bicomplex {
        let swap = |m: &BTreeMap<(i64, i64), SparseIntMatrix>| {
            m.iter().map(|(&(s, t), x)| ((t, s), x.clone())).collect()
        };
        Bicomplex {
            cells: self.cells.iter().map(|(&(s, t), l)| ((t, s), l.clone())).collect(),
            vertical: swap(&self.horizontal),
            horizontal: swap(&self.vertical),
            complete: self.complete,
        }
    }
}
