//! Filtered abelian groups and rings indexed by the integers, supported on a
//! window `[lo, 0]`: pieces are constant above `0` and trivial below `lo`.

mod bar;
mod load;
mod tensor;

pub use bar::{
    cyclic_bar, fixed_points_check, graded_comparison, CyclicBar, CyclicIdentityReport, FixedPointReport,
    GradedComparison,
};
pub use load::{filtered_ring_from_toml, filtered_ring_to_toml};
pub use tensor::{filtered_tensor, tensor_filtration, tensor_level, TensorLevel};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlin::lattice::{kron, Presentation};
use crate::intlin::{is_prime, AbelianGroup, SparseIntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredAbelianGroup {
    lo: i64,
    pieces: Vec<Presentation>,
    // transitions[k] : piece(lo + k) -> piece(lo + k + 1)
    transitions: Vec<SparseIntMatrix>,
}

impl FilteredAbelianGroup {
    /// `pieces[k]` is the piece at index `lo + k`; `transitions[k]` maps it
    /// to the next one. Every transition must respect the relations.
    pub fn new(lo: i64, pieces: Vec<Presentation>, transitions: Vec<SparseIntMatrix>) -> Result<Self> {
        if lo > 0 {
            return Err(Error::InvalidParams(format!("lowest index {lo} is above 0")));
        }
        if pieces.len() as i64 != 1 - lo || transitions.len() as i64 != -lo {
            return Err(Error::DimensionMismatch(format!(
                "window [{lo}, 0] needs {} pieces and {} transitions",
                1 - lo,
                -lo
            )));
        }
        for (k, t) in transitions.iter().enumerate() {
            if t.shape() != (pieces[k + 1].generators(), pieces[k].generators()) {
                return Err(Error::DimensionMismatch(format!("transition out of index {}", lo + k as i64)));
            }
            if !pieces[k].map_well_defined(&pieces[k + 1], t) {
                return Err(Error::InvalidParams(format!(
                    "transition out of index {} does not respect relations",
                    lo + k as i64
                )));
            }
        }
        Ok(FilteredAbelianGroup { lo, pieces, transitions })
    }

    /// `A` in every index `>= 0` and `0` below.
    pub fn constant(p: Presentation) -> Self {
        FilteredAbelianGroup { lo: 0, pieces: vec![p], transitions: vec![] }
    }

    /// The unit for the filtered tensor: `Z` from index `0` on.
    pub fn unit() -> Self {
        Self::constant(Presentation::free(1))
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn piece(&self, s: i64) -> Presentation {
        if s < self.lo {
            Presentation::zero()
        } else {
            self.pieces[(s.min(0) - self.lo) as usize].clone()
        }
    }

    pub fn generators(&self, s: i64) -> usize {
        if s < self.lo {
            0
        } else {
            self.pieces[(s.min(0) - self.lo) as usize].generators()
        }
    }

    pub fn group(&self, s: i64) -> AbelianGroup {
        self.piece(s).group()
    }

    /// Structure map from index `s` to `s + 1`.
    pub fn transition(&self, s: i64) -> SparseIntMatrix {
        if s < self.lo || s >= 0 {
            let n = self.generators(s);
            return if s >= 0 {
                SparseIntMatrix::identity(n)
            } else {
                SparseIntMatrix::zeros(self.generators(s + 1), 0)
            };
        }
        self.transitions[(s - self.lo) as usize].clone()
    }

    /// Composite structure map from index `s` to `t >= s`.
    pub fn map_up(&self, s: i64, t: i64) -> SparseIntMatrix {
        assert!(s <= t);
        let mut m = SparseIntMatrix::identity(self.generators(s));
        for u in s..t.min(0) {
            m = &self.transition(u) * &m;
        }
        m
    }

    /// `M(s) / M(s - 1)`, on the generators of `M(s)`.
    pub fn quotient(&self, s: i64) -> Presentation {
        self.piece(s).quotient_by(&self.transition(s - 1))
    }
}

/// Filtered abelian group with products `M(i) ⊗ M(j) -> M(i + j)` and a unit
/// in `M(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredRing {
    group: FilteredAbelianGroup,
    // (i, j) -> matrix from the generators of piece(i) ⊗ piece(j) to piece(i + j)
    products: BTreeMap<(i64, i64), SparseIntMatrix>,
    unit: Vec<BigInt>,
}

impl FilteredRing {
    /// Validates well-definedness, compatibility with the structure maps,
    /// associativity and unitality. Missing products are zero.
    pub fn new(
        group: FilteredAbelianGroup,
        products: BTreeMap<(i64, i64), SparseIntMatrix>,
        unit: Vec<BigInt>,
    ) -> Result<Self> {
        let r = FilteredRing { group, products, unit };
        r.validate()?;
        Ok(r)
    }

    pub fn group(&self) -> &FilteredAbelianGroup {
        &self.group
    }

    pub fn lo(&self) -> i64 {
        self.group.lo
    }

    pub fn unit_vector(&self) -> &[BigInt] {
        &self.unit
    }

    /// `μ_{i,j}`, with indices clamped to the window.
    pub fn product(&self, i: i64, j: i64) -> SparseIntMatrix {
        let (i, j) = (i.min(0), j.min(0));
        let g = &self.group;
        let cols = g.generators(i) * g.generators(j);
        let rows = g.generators(i + j);
        self.products.get(&(i, j)).cloned().unwrap_or_else(|| SparseIntMatrix::zeros(rows, cols))
    }

    fn fail(msg: String) -> Error {
        Error::InvalidAlgebra(msg)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.group;
        let lo = g.lo;
        for (&(i, j), m) in &self.products {
            if i < lo || j < lo || i > 0 || j > 0 {
                return Err(Self::fail(format!("product ({i}, {j}) outside the window")));
            }
            if m.shape() != (g.generators(i + j), g.generators(i) * g.generators(j)) {
                return Err(Error::DimensionMismatch(format!("product ({i}, {j})")));
            }
        }
        if self.unit.len() != g.generators(0) {
            return Err(Error::DimensionMismatch("unit vector".into()));
        }
        for i in lo..=0 {
            for j in lo..=0 {
                let src = g.piece(i).tensor(&g.piece(j));
                let tgt = g.piece(i + j);
                let mu = self.product(i, j);
                if !src.map_well_defined(&tgt, &mu) {
                    return Err(Self::fail(format!("product ({i}, {j}) does not respect relations")));
                }
                if i < 0 {
                    let lhs = &self.product(i + 1, j) * &kron(&g.transition(i), &SparseIntMatrix::identity(g.generators(j)));
                    let rhs = &g.transition(i + j) * &mu;
                    if !Presentation::maps_equal(&g.piece(i + j + 1), &lhs, &rhs) {
                        return Err(Self::fail(format!("product ({i}, {j}) is not compatible with the left structure map")));
                    }
                }
                if j < 0 {
                    let lhs = &self.product(i, j + 1) * &kron(&SparseIntMatrix::identity(g.generators(i)), &g.transition(j));
                    let rhs = &g.transition(i + j) * &mu;
                    if !Presentation::maps_equal(&g.piece(i + j + 1), &lhs, &rhs) {
                        return Err(Self::fail(format!("product ({i}, {j}) is not compatible with the right structure map")));
                    }
                }
                for k in lo..=0 {
                    let nk = g.generators(k);
                    let left = &self.product(i + j, k) * &kron(&mu, &SparseIntMatrix::identity(nk));
                    let right = &self.product(i, j + k)
                        * &kron(&SparseIntMatrix::identity(g.generators(i)), &self.product(j, k));
                    if !Presentation::maps_equal(&g.piece(i + j + k), &left, &right) {
                        return Err(Self::fail(format!("associativity fails on ({i}, {j}, {k})")));
                    }
                }
            }
            let n = g.generators(i);
            let u = SparseIntMatrix::from_columns(g.generators(0), std::slice::from_ref(&self.unit));
            let id = SparseIntMatrix::identity(n);
            let left = &self.product(0, i) * &kron(&u, &id);
            let right = &self.product(i, 0) * &kron(&id, &u);
            if !Presentation::maps_equal(&g.piece(i), &left, &id) || !Presentation::maps_equal(&g.piece(i), &right, &id) {
                return Err(Self::fail(format!("unit law fails on index {i}")));
            }
        }
        Ok(())
    }

    /// Associated graded ring: `gr(M)(k) = ⊕_{lo <= i <= k} M(i)/M(i-1)`.
    pub fn graded(&self) -> FilteredRing {
        let g = &self.group;
        let lo = g.lo;
        let quotients: Vec<Presentation> = (lo..=0).map(|i| g.quotient(i)).collect();
        let offsets: Vec<usize> = (lo..=0)
            .scan(0, |acc, i| {
                let o = *acc;
                *acc += g.generators(i);
                Some(o)
            })
            .collect();
        let sum = |k: i64| -> Presentation {
            let mut p = Presentation::zero();
            for i in lo..=k.min(0) {
                p = p.direct_sum(&quotients[(i - lo) as usize]);
            }
            p
        };
        let pieces: Vec<Presentation> = (lo..=0).map(sum).collect();
        let transitions = (lo..0)
            .map(|k| {
                let (rows, cols) = (pieces[(k + 1 - lo) as usize].generators(), pieces[(k - lo) as usize].generators());
                let mut m = SparseIntMatrix::zeros(rows, cols);
                m.insert_block(0, 0, &SparseIntMatrix::identity(cols));
                m
            })
            .collect();
        let group = FilteredAbelianGroup::new(lo, pieces, transitions).expect("inclusions of direct sums");
        let mut products = BTreeMap::new();
        for k in lo..=0 {
            for l in lo..=0 {
                let (nk, nl) = (group.generators(k), group.generators(l));
                let mut m = SparseIntMatrix::zeros(group.generators(k + l), nk * nl);
                for i in lo..=k {
                    for j in lo..=l {
                        if i + j < lo {
                            continue;
                        }
                        let mu = self.product(i, j);
                        let (oi, oj, oij) = (offsets[(i - lo) as usize], offsets[(j - lo) as usize], offsets[(i + j - lo) as usize]);
                        let nj = g.generators(j);
                        for (r, c, v) in mu.entries() {
                            let (a, b) = (c / nj, c % nj);
                            m.set(oij + r, (oi + a) * nl + oj + b, v.clone());
                        }
                    }
                }
                if !m.is_zero() {
                    products.insert((k, l), m);
                }
            }
        }
        let mut unit = vec![BigInt::zero(); group.generators(0)];
        let o0 = offsets[(-lo) as usize];
        for (x, v) in self.unit.iter().enumerate() {
            unit[o0 + x] = v.clone();
        }
        FilteredRing::new(group, products, unit).expect("associated graded of a filtered ring")
    }
}

/// The `I`-adic filtration of `Z/p^n` for `I = p^e Z/p^n`: the piece at
/// `-s` is `I^s`, generated by `p^{es}`.
pub fn adic_filtration_power(p: u64, n: u32, e: u32) -> Result<FilteredRing> {
    if !is_prime(p) || n < 1 || e < 1 {
        return Err(Error::InvalidParams(format!("need a prime p, n >= 1 and e >= 1; got p = {p}, n = {n}, e = {e}")));
    }
    let pb = BigInt::from(p);
    // I^s = 0 once e·s >= n
    let depth = (n as i64 + e as i64 - 1) / e as i64 - 1;
    let lo = -depth;
    let pieces = (lo..=0)
        .map(|s| Presentation::with_orders(&[pb.pow(n - (e as i64 * -s) as u32)]))
        .collect();
    let transitions = (lo..0).map(|_| SparseIntMatrix::from_columns(1, &[vec![pb.pow(e)]])).collect();
    let group = FilteredAbelianGroup::new(lo, pieces, transitions)?;
    let mut products = BTreeMap::new();
    for i in lo..=0 {
        for j in lo..=0 {
            if i + j >= lo {
                products.insert((i, j), SparseIntMatrix::identity(1));
            }
        }
    }
    FilteredRing::new(group, products, vec![BigInt::one()])
}

/// `p`-adic filtration of `Z/p^n`.
pub fn adic_filtration(p: u64, n: u32) -> Result<FilteredRing> {
    adic_filtration_power(p, n, 1)
}
