//! Levels of the filtered tensor product `(X_0 ⊗ ... ⊗ X_q)(k)`, the colimit
//! of `X_0(a_0) ⊗ ... ⊗ X_q(a_q)` over `a_0 + ... + a_q <= k`.
//!
//! Pieces are constant above `0`, so the colimit only sees tuples in the box
//! `∏ [lo_r, 0]`. It is presented on the tuples with `Σ a = min(k, 0)`: every
//! tuple one step lower maps to each of its upper neighbours, and those
//! images are identified.

use num_bigint::BigInt;

use super::FilteredAbelianGroup;
use crate::intlin::lattice::{kron, Presentation};
use crate::intlin::{AbelianGroup, SparseIntMatrix};

#[derive(Clone, Debug)]
pub struct TensorLevel {
    k: i64,
    tuples: Vec<Vec<i64>>,
    offsets: Vec<usize>,
    sizes: Vec<Vec<usize>>,
    presentation: Presentation,
}

/// Tuples in `∏ [lo_r, 0]` with the given sum, in lexicographic order.
pub(crate) fn box_tuples(los: &[i64], sum: i64) -> Vec<Vec<i64>> {
    fn go(los: &[i64], sum: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if los.is_empty() {
            if sum == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest_lo: i64 = los[1..].iter().sum();
        for a in los[0]..=0 {
            let left = sum - a;
            if left <= 0 && left >= rest_lo {
                prefix.push(a);
                go(&los[1..], left, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(los, sum, &mut Vec::new(), &mut out);
    out
}

/// `X_0(a_0) ⊗ ... ⊗ X_q(a_q)`, generator index in mixed radix with the first
/// factor most significant.
fn block_presentation(factors: &[&FilteredAbelianGroup], a: &[i64]) -> Presentation {
    let mut p = Presentation::free(1);
    for (x, &s) in factors.iter().zip(a) {
        p = p.tensor(&x.piece(s));
    }
    p
}

/// `id ⊗ .. ⊗ f ⊗ .. ⊗ id` with `f` in slot `r`.
pub(crate) fn slot_map(sizes_src: &[usize], r: usize, f: &SparseIntMatrix) -> SparseIntMatrix {
    let before: usize = sizes_src[..r].iter().product();
    let after: usize = sizes_src[r + 1..].iter().product();
    kron(&kron(&SparseIntMatrix::identity(before), f), &SparseIntMatrix::identity(after))
}

impl TensorLevel {
    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn tuples(&self) -> &[Vec<i64>] {
        &self.tuples
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn group(&self) -> AbelianGroup {
        self.presentation.group()
    }

    pub fn generators(&self) -> usize {
        self.presentation.generators()
    }

    pub fn position(&self, tuple: &[i64]) -> Option<usize> {
        self.tuples.iter().position(|t| t == tuple)
    }

    pub fn offset(&self, idx: usize) -> usize {
        self.offsets[idx]
    }

    /// Generator counts of each factor in the block of tuple `idx`.
    pub fn sizes(&self, idx: usize) -> &[usize] {
        &self.sizes[idx]
    }

    pub fn block_size(&self, idx: usize) -> usize {
        self.sizes[idx].iter().product()
    }
}

/// `(X_0 ⊗ ... ⊗ X_q)(k)` as a presented group.
pub fn tensor_level(factors: &[&FilteredAbelianGroup], k: i64) -> TensorLevel {
    let los: Vec<i64> = factors.iter().map(|x| x.lo()).collect();
    let top = k.min(0);
    let tuples = box_tuples(&los, top);
    let sizes: Vec<Vec<usize>> = tuples
        .iter()
        .map(|a| factors.iter().zip(a).map(|(x, &s)| x.generators(s)).collect())
        .collect();
    let mut offsets = Vec::new();
    let mut total = 0;
    for s in &sizes {
        offsets.push(total);
        total += s.iter().product::<usize>();
    }
    let mut triples: Vec<(usize, usize, BigInt)> = Vec::new();
    let mut col = 0;
    for (idx, a) in tuples.iter().enumerate() {
        let rel = block_presentation(factors, a).relations().clone();
        triples.extend(rel.entries().map(|(r, c, v)| (offsets[idx] + r, col + c, v.clone())));
        col += rel.cols();
    }
    // gluing: images of a lower tuple in its upper neighbours agree
    let level = |t: &[i64]| tuples.iter().position(|u| u == t);
    for c in box_tuples(&los, top - 1) {
        let c_sizes: Vec<usize> = factors.iter().zip(&c).map(|(x, &s)| x.generators(s)).collect();
        let ups: Vec<(usize, SparseIntMatrix)> = (0..c.len())
            .filter(|&r| c[r] < 0)
            .map(|r| {
                let mut up = c.clone();
                up[r] += 1;
                let m = slot_map(&c_sizes, r, &factors[r].transition(c[r]));
                (level(&up).expect("upper neighbour in the box"), m)
            })
            .collect();
        for w in ups.windows(2) {
            let ((i0, m0), (i1, m1)) = (&w[0], &w[1]);
            triples.extend(m0.entries().map(|(r, x, v)| (offsets[*i0] + r, col + x, v.clone())));
            triples.extend(m1.entries().map(|(r, x, v)| (offsets[*i1] + r, col + x, -v)));
            col += m0.cols();
        }
    }
    let relations = SparseIntMatrix::from_triples(total, col, triples).expect("indices inside the level");
    let presentation = Presentation::new(relations);
    TensorLevel { k, tuples, offsets, sizes, presentation }
}

/// Map from level `k - 1` to level `k`.
pub(crate) fn level_transition(factors: &[&FilteredAbelianGroup], lower: &TensorLevel, upper: &TensorLevel) -> SparseIntMatrix {
    let mut m = SparseIntMatrix::zeros(upper.generators(), lower.generators());
    if upper.k > 0 {
        return SparseIntMatrix::identity(upper.generators());
    }
    for (idx, c) in lower.tuples.iter().enumerate() {
        let r = c.iter().position(|&a| a < 0).expect("tuple below the top has a negative entry");
        let mut up = c.clone();
        up[r] += 1;
        let j = upper.position(&up).expect("upper neighbour in the box");
        let block = slot_map(&lower.sizes[idx], r, &factors[r].transition(c[r]));
        m.insert_block(upper.offsets[j], lower.offsets[idx], &block);
    }
    m
}

/// The filtered group `X_0 ⊗ ... ⊗ X_q`, supported on `[Σ lo_r, 0]`.
pub fn tensor_filtration(factors: &[&FilteredAbelianGroup]) -> FilteredAbelianGroup {
    let lo: i64 = factors.iter().map(|x| x.lo()).sum();
    let levels: Vec<TensorLevel> = (lo..=0).map(|k| tensor_level(factors, k)).collect();
    let transitions = levels.windows(2).map(|w| level_transition(factors, &w[0], &w[1])).collect();
    let pieces = levels.into_iter().map(|l| l.presentation).collect();
    FilteredAbelianGroup::new(lo, pieces, transitions).expect("structure maps of a colimit")
}

/// `(X ⊗ Y)(k)`.
pub fn filtered_tensor(x: &FilteredAbelianGroup, y: &FilteredAbelianGroup, k: i64) -> TensorLevel {
    tensor_level(&[x, y], k)
}
