//! The filtered cyclic bar construction `Z_q(M)(k) = M^{⊗(q+1)}(k)` with its
//! cyclic operators, and the comparisons built on it.
//!
//! `t` sends `a_0 ⊗ ... ⊗ a_q` to `a_q ⊗ a_0 ⊗ ... ⊗ a_{q-1}`;
//! `d_i = t^i (μ ⊗ id) t^{-i}` and `s_i = t^{i+1} (η ⊗ id) t^{-(i+1)}`.

use std::cell::OnceCell;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::tensor::{box_tuples, level_transition, slot_map, tensor_level, TensorLevel};
use super::{FilteredAbelianGroup, FilteredRing};
use crate::error::{Error, Result};
use crate::intlin::lattice::{solve, Lattice, Presentation};
use crate::intlin::{AbelianGroup, SparseIntMatrix};

/// Mixed-radix digits of `x`, first digit most significant.
fn digits(mut x: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for r in (0..sizes.len()).rev() {
        out[r] = x % sizes[r];
        x /= sizes[r];
    }
    out
}

fn undigits(d: &[usize], sizes: &[usize]) -> usize {
    d.iter().zip(sizes).fold(0, |acc, (&x, &n)| acc * n + x)
}

fn rotate<T: Clone>(v: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len());
    out.push(v[v.len() - 1].clone());
    out.extend_from_slice(&v[..v.len() - 1]);
    out
}

/// Permutation matrix of the right shift on a level whose tuples are closed
/// under rotation.
fn rotation_on(level: &TensorLevel) -> SparseIntMatrix {
    let n = level.generators();
    let mut m = SparseIntMatrix::zeros(n, n);
    for (idx, a) in level.tuples().iter().enumerate() {
        let j = level.position(&rotate(a)).expect("rotated tuple");
        let sizes = level.sizes(idx);
        let rsizes = rotate(sizes);
        for x in 0..level.block_size(idx) {
            let y = undigits(&rotate(&digits(x, sizes)), &rsizes);
            m.set(level.offset(j) + y, level.offset(idx) + x, BigInt::one());
        }
    }
    m
}

fn power(m: &SparseIntMatrix, e: usize) -> SparseIntMatrix {
    let mut out = SparseIntMatrix::identity(m.cols());
    for _ in 0..e {
        out = m * &out;
    }
    out
}

#[derive(Clone, Debug)]
pub struct CyclicBar {
    ring: FilteredRing,
    q: usize,
    k: i64,
    // levels[n] = Z_n(M)(k) for n = 0..=q+2
    levels: Vec<TensorLevel>,
}

/// `Z_q(M)(k)` together with the neighbouring degrees needed to state the
/// cyclic identities.
pub fn cyclic_bar(m: &FilteredRing, q: usize, k: i64) -> CyclicBar {
    let g = m.group();
    let levels = (0..=q + 2)
        .map(|n| {
            let factors: Vec<&FilteredAbelianGroup> = vec![g; n + 1];
            tensor_level(&factors, k)
        })
        .collect();
    CyclicBar { ring: m.clone(), q, k, levels }
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicIdentityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CyclicIdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl CyclicBar {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn level(&self, n: usize) -> &TensorLevel {
        &self.levels[n]
    }

    pub fn group(&self) -> AbelianGroup {
        self.levels[self.q].group()
    }

    /// `t_n` on `Z_n(M)(k)`.
    pub fn t(&self, n: usize) -> SparseIntMatrix {
        rotation_on(&self.levels[n])
    }

    fn t_inv(&self, n: usize) -> SparseIntMatrix {
        power(&self.t(n), n)
    }

    /// `μ ⊗ id: Z_n -> Z_{n-1}`.
    fn mu_first(&self, n: usize) -> SparseIntMatrix {
        let (src, tgt) = (&self.levels[n], &self.levels[n - 1]);
        let g = self.ring.group();
        let mut m = SparseIntMatrix::zeros(tgt.generators(), src.generators());
        for (idx, a) in src.tuples().iter().enumerate() {
            let s = a[0] + a[1];
            if s < g.lo() {
                continue;
            }
            let mut b = vec![s];
            b.extend_from_slice(&a[2..]);
            let j = tgt.position(&b).expect("product tuple");
            let rest: usize = src.sizes(idx)[2..].iter().product();
            let block = crate::intlin::lattice::kron(&self.ring.product(a[0], a[1]), &SparseIntMatrix::identity(rest));
            m.insert_block(tgt.offset(j), src.offset(idx), &block);
        }
        m
    }

    /// `η ⊗ id: Z_n -> Z_{n+1}`, inserting the unit as the first factor.
    fn unit_first(&self, n: usize) -> SparseIntMatrix {
        let (src, tgt) = (&self.levels[n], &self.levels[n + 1]);
        let u = SparseIntMatrix::from_columns(self.ring.group().generators(0), &[self.ring.unit_vector().to_vec()]);
        let mut m = SparseIntMatrix::zeros(tgt.generators(), src.generators());
        for (idx, a) in src.tuples().iter().enumerate() {
            let mut b = vec![0];
            b.extend_from_slice(a);
            let j = tgt.position(&b).expect("tuple with a unit slot");
            let block = slot_map(&[1, src.block_size(idx)], 0, &u);
            m.insert_block(tgt.offset(j), src.offset(idx), &block);
        }
        m
    }

    /// Face `d_i: Z_n -> Z_{n-1}`, `0 <= i <= n`.
    pub fn d(&self, n: usize, i: usize) -> SparseIntMatrix {
        assert!(n >= 1 && i <= n);
        &(&power(&self.t(n - 1), i) * &self.mu_first(n)) * &power(&self.t_inv(n), i)
    }

    /// Degeneracy `s_i: Z_n -> Z_{n+1}`, `0 <= i <= n`.
    pub fn s(&self, n: usize, i: usize) -> SparseIntMatrix {
        assert!(i <= n);
        &(&power(&self.t(n + 1), i + 1) * &self.unit_first(n)) * &power(&self.t_inv(n), i + 1)
    }

    /// Checks the cyclic and simplicial identities on every degree up to `q`,
    /// as equalities of homomorphisms between the presented groups.
    pub fn identities(&self) -> CyclicIdentityReport {
        let q = self.q;
        let lattices: Vec<OnceCell<Lattice>> = self.levels.iter().map(|_| OnceCell::new()).collect();
        let ts: Vec<SparseIntMatrix> = (0..=q + 2).map(|n| self.t(n)).collect();
        let ds: Vec<Vec<SparseIntMatrix>> =
            (0..=q + 1).map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| self.d(n, i)).collect() }).collect();
        let ss: Vec<Vec<SparseIntMatrix>> = (0..=q + 1).map(|n| (0..=n).map(|i| self.s(n, i)).collect()).collect();
        let mut report = CyclicIdentityReport { checked: 0, failures: Vec::new() };
        let mut check = |name: String, target: usize, f: &SparseIntMatrix, g: &SparseIntMatrix| {
            report.checked += 1;
            let diff = f - g;
            if diff.is_zero() {
                return;
            }
            let lattice = lattices[target].get_or_init(|| Lattice::new(self.levels[target].presentation().relations()));
            if !lattice.contains_columns(&diff) {
                report.failures.push(name);
            }
        };
        let rel = |n: usize| self.levels[n].presentation().relations();
        let zero = |f: &SparseIntMatrix, n: usize| SparseIntMatrix::zeros(f.rows(), rel(n).cols());
        for n in 0..=q {
            let t = &ts[n];
            check(format!("t_{n} well defined"), n, &(t * rel(n)), &zero(t, n));
            check(format!("t_{n}^{}", n + 1), n, &power(t, n + 1), &SparseIntMatrix::identity(t.cols()));
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = &ss[n + 1][i] * &ss[n][j];
                    let rhs = &ss[n + 1][j + 1] * &ss[n][i];
                    check(format!("s_{i} s_{j} on Z_{n}"), n + 2, &lhs, &rhs);
                }
                for i in 0..=n + 1 {
                    let lhs = &ds[n + 1][i] * &ss[n][j];
                    let rhs = if i == j || i == j + 1 {
                        SparseIntMatrix::identity(t.cols())
                    } else if i < j {
                        &ss[n - 1][j - 1] * &ds[n][i]
                    } else {
                        &ss[n - 1][j] * &ds[n][i - 1]
                    };
                    check(format!("d_{i} s_{j} on Z_{n}"), n, &lhs, &rhs);
                }
                let lhs = &ss[n][j] * t;
                let rhs = if j == 0 { &power(&ts[n + 1], 2) * &ss[n][n] } else { &ts[n + 1] * &ss[n][j - 1] };
                check(format!("s_{j} t_{n}"), n + 1, &lhs, &rhs);
            }
            if n == 0 {
                continue;
            }
            for j in 0..=n {
                let dj = &ds[n][j];
                check(format!("d_{j} on Z_{n} well defined"), n - 1, &(dj * rel(n)), &zero(dj, n));
                if n >= 2 {
                    for i in 0..j {
                        let lhs = &ds[n - 1][i] * dj;
                        let rhs = &ds[n - 1][j - 1] * &ds[n][i];
                        check(format!("d_{i} d_{j} on Z_{n}"), n - 2, &lhs, &rhs);
                    }
                }
                let lhs = dj * t;
                let rhs = if j == 0 { ds[n][n].clone() } else { &ts[n - 1] * &ds[n][j - 1] };
                check(format!("d_{j} t_{n}"), n - 1, &lhs, &rhs);
            }
        }
        report
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedComparison {
    pub q: usize,
    pub k: i64,
    pub lhs: AbelianGroup,
    pub rhs: AbelianGroup,
    pub map_well_defined: bool,
    pub inverse_well_defined: bool,
    pub groups_equal: bool,
    pub rotation_compatible: bool,
    pub passed: bool,
}

/// Compares `Z_q(M)(k) / Z_q(M)(k-1)` with `⊕_{Σ i_r = k} ⊗_r M(i_r)/M(i_r - 1)`
/// through the map that is the identity on tensors of generators.
pub fn graded_comparison(m: &FilteredRing, q: usize, k: i64) -> GradedComparison {
    let g = m.group();
    let factors: Vec<&FilteredAbelianGroup> = vec![g; q + 1];
    let upper = tensor_level(&factors, k);
    let lower = tensor_level(&factors, k - 1);
    let lhs = upper.presentation().quotient_by(&level_transition(&factors, &lower, &upper));

    // right-hand side, indexed independently
    let los = vec![g.lo(); q + 1];
    let tuples = if k > 0 { Vec::new() } else { box_tuples(&los, k) };
    let mut rhs = Presentation::zero();
    let mut rhs_offsets = Vec::new();
    for a in &tuples {
        rhs_offsets.push(rhs.generators());
        let block = a.iter().fold(Presentation::free(1), |p, &i| p.tensor(&g.quotient(i)));
        rhs = rhs.direct_sum(&block);
    }
    let mut phi = SparseIntMatrix::zeros(rhs.generators(), lhs.generators());
    for (idx, a) in upper.tuples().iter().enumerate() {
        if let Some(j) = tuples.iter().position(|b| b == a) {
            let block = SparseIntMatrix::identity(upper.block_size(idx));
            phi.insert_block(rhs_offsets[j], upper.offset(idx), &block);
        }
    }
    let mut rot = SparseIntMatrix::zeros(rhs.generators(), rhs.generators());
    for (idx, a) in tuples.iter().enumerate() {
        let sizes: Vec<usize> = a.iter().map(|&i| g.generators(i)).collect();
        let j = tuples.iter().position(|b| *b == rotate(a)).expect("rotated tuple");
        let n: usize = sizes.iter().product();
        for x in 0..n {
            let y = undigits(&rotate(&digits(x, &sizes)), &rotate(&sizes));
            rot.set(rhs_offsets[j] + y, rhs_offsets[idx] + x, BigInt::one());
        }
    }
    let t = rotation_on(&upper);
    let map_well_defined = lhs.map_well_defined(&rhs, &phi);
    let inverse_well_defined = rhs.map_well_defined(&lhs, &phi.transpose());
    let (lg, rg) = (lhs.group(), rhs.group());
    let groups_equal = lg == rg;
    let rotation_compatible = lhs.map_well_defined(&lhs, &t)
        && rhs.map_well_defined(&rhs, &rot)
        && Presentation::maps_equal(&rhs, &(&phi * &t), &(&rot * &phi));
    let passed = map_well_defined && inverse_well_defined && groups_equal && rotation_compatible;
    GradedComparison {
        q,
        k,
        lhs: lg,
        rhs: rg,
        map_well_defined,
        inverse_well_defined,
        groups_equal,
        rotation_compatible,
        passed,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub q: usize,
    pub s: i64,
    pub level: i64,
    /// Basis elements `b` of `Y(0)` with `b^{⊗q}` in the image of level `s`.
    pub fixed: Vec<usize>,
    /// Basis elements of `Y(0)` coming from `Y(⌊s/q⌋)`.
    pub expected: Vec<usize>,
    pub colimit_injects: bool,
    pub passed: bool,
}

/// Index of the basis element of `Y(0)` hit by each basis element of `Y(s)`,
/// or an error unless every piece is free and every transition sends basis
/// elements to distinct basis elements.
fn basis_embedding(y: &FilteredAbelianGroup, s: i64) -> Result<Vec<usize>> {
    let m = y.map_up(s, 0);
    let mut hit = vec![false; m.rows()];
    let mut out = Vec::new();
    for c in 0..m.cols() {
        let col: Vec<(usize, BigInt)> = m.entries().filter(|e| e.1 == c).map(|e| (e.0, e.2.clone())).collect();
        match col.as_slice() {
            [(r, v)] if v.is_one() && !hit[*r] => {
                hit[*r] = true;
                out.push(*r);
            }
            _ => {
                return Err(Error::UnsupportedFiltration(format!(
                    "structure map from index {s} is not a split inclusion of bases"
                )))
            }
        }
    }
    Ok(out)
}

pub fn fixed_points_check(y: &FilteredAbelianGroup, q: usize, s: i64) -> Result<FixedPointReport> {
    if q == 0 {
        return Err(Error::InvalidParams("power must be at least 1".into()));
    }
    for i in y.lo()..=0 {
        if !y.piece(i).relations().is_zero() {
            return Err(Error::UnsupportedFiltration(format!("piece at index {i} is not free")));
        }
        basis_embedding(y, i)?;
    }
    let factors: Vec<&FilteredAbelianGroup> = vec![y; q];
    let level = tensor_level(&factors, s);
    let n0 = y.generators(0);
    let total = n0.pow(q as u32);
    // Y^{⊗q}(s) -> Y(0)^{⊗q}
    let mut f = SparseIntMatrix::zeros(total, level.generators());
    for (idx, a) in level.tuples().iter().enumerate() {
        let block = a.iter().fold(SparseIntMatrix::identity(1), |acc, &i| {
            crate::intlin::lattice::kron(&acc, &y.map_up(i, 0))
        });
        f.insert_block(0, level.offset(idx), &block);
    }
    let colimit_injects = level.presentation().is_injective(&Presentation::free(total), &f);
    let mut fixed = Vec::new();
    for x in 0..total {
        let d = digits(x, &vec![n0; q]);
        if rotate(&d) != d {
            continue;
        }
        let target = crate::intlin::lattice::unit_vector(total, x);
        if solve(&f, &target).is_some() {
            fixed.push(d[0]);
        }
    }
    let fl = s.div_euclid(q as i64);
    let mut expected = if fl < y.lo() { Vec::new() } else { basis_embedding(y, fl.min(0))? };
    expected.sort_unstable();
    let passed = colimit_injects && fixed == expected;
    Ok(FixedPointReport { q, s, level: fl, fixed, expected, colimit_injects, passed })
}
