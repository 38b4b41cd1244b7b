//! Lattice primitives on top of the Smith decomposition: kernels, integral
//! solving, and finitely presented abelian groups `Z^g / im(R)` with
//! homomorphisms given by integer matrices on generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{AbelianGroup, Smith, SparseIntMatrix};

/// Basis of `ker(m)` over Z, as the columns of an `n x (n - rank)` matrix.
pub fn kernel_basis(m: &SparseIntMatrix) -> SparseIntMatrix {
    let s = Smith::of(m);
    let n = m.cols();
    s.v.submatrix(0..n, s.rank()..n)
}

/// Some integral `x` with `m * x = b`, or `None` if none exists.
pub fn solve(m: &SparseIntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = Smith::of(m);
    solve_with(&s, m.cols(), b)
}

fn solve_with(s: &Smith, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); cols];
    for (i, val) in ub.iter().enumerate() {
        if i < s.rank() {
            let (q, r) = val.div_rem(&s.diagonal()[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Whether every column of `b` lies in the Z-span of the columns of `m`.
pub fn columns_in_span(m: &SparseIntMatrix, b: &SparseIntMatrix) -> bool {
    assert_eq!(m.rows(), b.rows());
    if b.is_zero() {
        return true;
    }
    let s = Smith::of(m);
    b.columns().iter().all(|col| solve_with(&s, m.cols(), col).is_some())
}

/// The Z-span of a fixed set of columns, factored once for repeated
/// membership queries.
pub struct Lattice {
    smith: Smith,
    cols: usize,
}

impl Lattice {
    pub fn new(m: &SparseIntMatrix) -> Self {
        Lattice { smith: Smith::of(m), cols: m.cols() }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.iter().all(|x| x.is_zero()) || solve_with(&self.smith, self.cols, v).is_some()
    }

    pub fn contains_columns(&self, b: &SparseIntMatrix) -> bool {
        b.is_zero() || b.columns().iter().all(|c| self.contains(c))
    }
}

/// Finitely presented abelian group `Z^generators / im(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: usize,
    relations: SparseIntMatrix,
}

impl Presentation {
    pub fn new(relations: SparseIntMatrix) -> Self {
        Presentation { generators: relations.rows(), relations }
    }

    pub fn free(generators: usize) -> Self {
        Presentation { generators, relations: SparseIntMatrix::zeros(generators, 0) }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `⊕ Z/orders[i]`, with order `0` meaning a free generator.
    pub fn with_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let nz: Vec<usize> = (0..n).filter(|&i| !orders[i].is_zero()).collect();
        let mut r = SparseIntMatrix::zeros(n, nz.len());
        for (c, &i) in nz.iter().enumerate() {
            r.set(i, c, orders[i].clone());
        }
        Presentation { generators: n, relations: r }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &SparseIntMatrix {
        &self.relations
    }

    pub fn group(&self) -> AbelianGroup {
        super::cokernel(&self.relations)
    }

    /// Adds the columns of `extra` as further relations.
    pub fn quotient_by(&self, extra: &SparseIntMatrix) -> Presentation {
        Presentation::new(self.relations.hstack(extra))
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        v.iter().all(|x| x.is_zero())
            || solve(&self.relations, v).is_some()
    }

    /// `f` (a `target.generators x self.generators` matrix) respects relations.
    pub fn map_well_defined(&self, target: &Presentation, f: &SparseIntMatrix) -> bool {
        assert_eq!(f.shape(), (target.generators, self.generators));
        columns_in_span(&target.relations, &(f * &self.relations))
    }

    /// `f == g` as homomorphisms into `target`.
    pub fn maps_equal(target: &Presentation, f: &SparseIntMatrix, g: &SparseIntMatrix) -> bool {
        columns_in_span(&target.relations, &(f - g))
    }

    pub fn is_surjective(target: &Presentation, f: &SparseIntMatrix) -> bool {
        super::cokernel(&f.hstack(&target.relations)).is_trivial()
    }

    /// Generators of the preimage lattice `{x : f x ∈ im(R_target)}`.
    pub fn preimage_lattice(target: &Presentation, f: &SparseIntMatrix) -> SparseIntMatrix {
        let k = kernel_basis(&f.hstack(&target.relations));
        k.submatrix(0..f.cols(), 0..k.cols())
    }

    pub fn is_injective(&self, target: &Presentation, f: &SparseIntMatrix) -> bool {
        let pre = Self::preimage_lattice(target, f);
        columns_in_span(&self.relations, &pre)
    }

    /// Whether `A --f--> self --g--> C` is exact at `self`.
    pub fn is_exact_at(&self, f: &SparseIntMatrix, g: &SparseIntMatrix, c: &Presentation) -> bool {
        let image = f.hstack(&self.relations);
        let kernel = Self::preimage_lattice(c, g);
        columns_in_span(&kernel, &image) && columns_in_span(&image, &kernel)
    }

    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        let mut r = SparseIntMatrix::zeros(
            self.generators + other.generators,
            self.relations.cols() + other.relations.cols(),
        );
        r.insert_block(0, 0, &self.relations);
        r.insert_block(self.generators, self.relations.cols(), &other.relations);
        Presentation::new(r)
    }

    /// Tensor product; generator `(i, j)` has index `i * other.generators + j`.
    pub fn tensor(&self, other: &Presentation) -> Presentation {
        let (a, b) = (self.generators, other.generators);
        let left = kron(&self.relations, &SparseIntMatrix::identity(b));
        let right = kron(&SparseIntMatrix::identity(a), &other.relations);
        Presentation { generators: a * b, relations: left.hstack(&right) }
    }
}

/// Kronecker product.
pub fn kron(a: &SparseIntMatrix, b: &SparseIntMatrix) -> SparseIntMatrix {
    let mut out = SparseIntMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for (i, j, x) in a.entries() {
        for (k, l, y) in b.entries() {
            out.set(i * b.rows() + k, j * b.cols() + l, x * y);
        }
    }
    out
}

/// Unit vector `e_i` of length `n`.
pub fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}
