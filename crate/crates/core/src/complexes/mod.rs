//! Chain complexes of finitely generated free Z-modules with labelled bases.
//!
//! Complexes are truncations: a complex carrying chains in degrees
//! `min..=max` can only report homology in degrees `min..max`, because the
//! incoming boundary from degree `i + 1` must be present.

mod bicomplex;
mod homology;
mod serial;

pub use bicomplex::Bicomplex;
pub use homology::{ExactnessCheck, ExactnessReport, HomologyPresentation};
pub use serial::{complex_from_json, complex_to_json};

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{self, is_prime, rank_mod_prime, AbelianGroup, SparseIntMatrix};

/// Structured basis label. Tensor, cone and total-complex constructions wrap
/// the labels of their inputs, so bases stay canonical and reproducible.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Gen(String),
    /// Hochschild word `a_0 ⊗ a_1 ⊗ ... ⊗ a_k`.
    Word(Vec<String>),
    Pair(Box<Label>, Box<Label>),
    /// Bicomplex cell `(s, t)` entry inside a total complex.
    Cell { s: i64, t: i64, inner: Box<Label> },
    ConeSource(Box<Label>),
    ConeTarget(Box<Label>),
}

impl Label {
    pub fn gen(name: impl Into<String>) -> Label {
        Label::Gen(name.into())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Gen(s) => write!(f, "{s}"),
            Label::Word(w) => {
                let (head, tail) = w.split_first().map(|(h, t)| (h.as_str(), t)).unwrap_or(("", &[]));
                write!(f, "{head}[{}]", tail.join("|"))
            }
            Label::Pair(a, b) => write!(f, "({a} ⊗ {b})"),
            Label::Cell { s, t, inner } => write!(f, "{inner}@({s},{t})"),
            Label::ConeSource(a) => write!(f, "src:{a}"),
            Label::ConeTarget(b) => write!(f, "tgt:{b}"),
        }
    }
}

/// Graded free Z-module with differential `d_n : C_n -> C_{n-1}`, carried in
/// degrees `min_degree..=max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    min_degree: i64,
    bases: Vec<Vec<Label>>,
    // differentials[k] is d at degree min_degree + k + 1
    differentials: Vec<SparseIntMatrix>,
}

impl ChainComplex {
    /// `bases[k]` is the basis in degree `min_degree + k`, and
    /// `differentials[k]` the map from degree `min_degree + k + 1` down.
    /// Shapes and `d ∘ d = 0` are validated.
    pub fn new(
        min_degree: i64,
        bases: Vec<Vec<Label>>,
        differentials: Vec<SparseIntMatrix>,
    ) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::InvalidParams("a chain complex needs at least one degree".into()));
        }
        if differentials.len() + 1 != bases.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                bases.len(),
                bases.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            let expect = (bases[k].len(), bases[k + 1].len());
            if d.shape() != expect {
                return Err(Error::DimensionMismatch(format!(
                    "differential out of degree {} is {:?}, expected {:?}",
                    min_degree + k as i64 + 1,
                    d.shape(),
                    expect
                )));
            }
        }
        for k in 1..differentials.len() {
            if !(&differentials[k - 1] * &differentials[k]).is_zero() {
                return Err(Error::CompositionNonzero(format!(
                    "d∘d != 0 out of degree {}",
                    min_degree + k as i64 + 1
                )));
            }
        }
        Ok(ChainComplex { min_degree, bases, differentials })
    }

    /// `Z` in a single degree.
    pub fn unit() -> Self {
        ChainComplex::new(0, vec![vec![Label::gen("1")]], vec![]).expect("unit complex")
    }

    /// Two-term complex `Z --m--> Z` in degrees 1 and 0.
    pub fn two_term(m: BigInt) -> Self {
        let mut d = SparseIntMatrix::zeros(1, 1);
        d.set(0, 0, m);
        ChainComplex::new(0, vec![vec![Label::gen("e0")], vec![Label::gen("e1")]], vec![d])
            .expect("two-term complex")
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.bases.len() as i64 - 1
    }

    pub fn contains_degree(&self, n: i64) -> bool {
        n >= self.min_degree && n <= self.max_degree()
    }

    pub fn rank(&self, n: i64) -> usize {
        self.basis(n).len()
    }

    pub fn basis(&self, n: i64) -> &[Label] {
        if self.contains_degree(n) {
            &self.bases[(n - self.min_degree) as usize]
        } else {
            &[]
        }
    }

    /// `d_n : C_n -> C_{n-1}`; zero outside the carried range.
    pub fn differential(&self, n: i64) -> SparseIntMatrix {
        if n > self.min_degree && n <= self.max_degree() {
            self.differentials[(n - self.min_degree - 1) as usize].clone()
        } else {
            SparseIntMatrix::zeros(self.rank(n - 1), self.rank(n))
        }
    }

    fn check_homology_degree(&self, i: i64) -> Result<()> {
        if i < self.min_degree || i + 1 > self.max_degree() {
            return Err(Error::TruncationTooTight(format!(
                "H_{i} needs chains in degrees {i}..={} but the complex carries {}..={}",
                i + 1,
                self.min_degree,
                self.max_degree()
            )));
        }
        Ok(())
    }

    /// `H_i = ker d_i / im d_{i+1}`.
    pub fn homology(&self, i: i64) -> Result<AbelianGroup> {
        self.check_homology_degree(i)?;
        intlin::homology_pair(&self.differential(i), &self.differential(i + 1))
    }

    /// Homology with explicit cycle representatives and a coordinate map.
    pub fn homology_presentation(&self, i: i64) -> Result<HomologyPresentation> {
        self.check_homology_degree(i)?;
        HomologyPresentation::compute(&self.differential(i), &self.differential(i + 1))
    }

    /// `H_i(C ⊗ Z/q)`. For prime `q` this is computed from ranks over `F_q`;
    /// otherwise as the homology of the cone of multiplication by `q`.
    pub fn homology_mod(&self, i: i64, q: &BigInt) -> Result<AbelianGroup> {
        if *q < BigInt::from(2) {
            return Err(Error::InvalidModulus(format!("coefficients Z/{q} need q >= 2")));
        }
        self.check_homology_degree(i)?;
        match u64::try_from(q) {
            Ok(qq) if is_prime(qq) => {
                let n = self.rank(i);
                let dim = n - rank_mod_prime(&self.differential(i), q)
                    - rank_mod_prime(&self.differential(i + 1), q);
                Ok(AbelianGroup::elementary(q, dim))
            }
            _ => self.homology_mod_via_cone(i, q),
        }
    }

    /// `H_i(C ⊗ Z/q)` as `H_i(Cone(q · id))`; valid for any `q >= 2` because
    /// the chain groups are free.
    pub fn homology_mod_via_cone(&self, i: i64, q: &BigInt) -> Result<AbelianGroup> {
        if *q < BigInt::from(2) {
            return Err(Error::InvalidModulus(format!("coefficients Z/{q} need q >= 2")));
        }
        self.check_homology_degree(i)?;
        ChainMap::scalar(self, q).cone()?.homology(i)
    }

    /// Degree-shifted copy: `C[k]_n = C_{n-k}`, differentials unchanged.
    pub fn shift(&self, k: i64) -> ChainComplex {
        ChainComplex {
            min_degree: self.min_degree + k,
            bases: self.bases.clone(),
            differentials: self.differentials.clone(),
        }
    }

    /// Restriction to degrees `lo..=hi` (intersected with the carried range).
    pub fn truncate(&self, lo: i64, hi: i64) -> Result<ChainComplex> {
        let lo = lo.max(self.min_degree);
        let hi = hi.min(self.max_degree());
        if lo > hi {
            return Err(Error::TruncationTooTight(format!("empty window {lo}..={hi}")));
        }
        let bases = (lo..=hi).map(|n| self.basis(n).to_vec()).collect();
        let diffs = (lo + 1..=hi).map(|n| self.differential(n)).collect();
        ChainComplex::new(lo, bases, diffs)
    }

    /// Tensor product over the largest window on which every chain group is
    /// complete.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        let hi = (self.max_degree() + other.min_degree).min(self.min_degree + other.max_degree());
        tensor_window(self, other, hi)
    }

    /// Tensor product up to degree `max_degree`, which must not exceed the
    /// largest complete degree.
    pub fn tensor_up_to(&self, other: &ChainComplex, max_degree: i64) -> Result<ChainComplex> {
        let hi = (self.max_degree() + other.min_degree).min(self.min_degree + other.max_degree());
        if max_degree > hi {
            return Err(Error::TruncationTooTight(format!(
                "tensor product is only complete up to degree {hi}, requested {max_degree}"
            )));
        }
        let lo = self.min_degree + other.min_degree;
        if max_degree < lo {
            return Err(Error::TruncationTooTight(format!(
                "requested degree {max_degree} is below the bottom degree {lo}"
            )));
        }
        Ok(tensor_window(self, other, max_degree))
    }
}

fn koszul_sign(deg: i64) -> BigInt {
    if deg.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

fn tensor_window(c: &ChainComplex, d: &ChainComplex, hi: i64) -> ChainComplex {
    let lo = c.min_degree + d.min_degree;
    // index of (a-degree, i, j) inside the degree-n basis
    let layout = |n: i64| -> Vec<(i64, usize, usize)> {
        let mut v = Vec::new();
        for a in c.min_degree..=c.max_degree() {
            let b = n - a;
            for i in 0..c.rank(a) {
                for j in 0..d.rank(b) {
                    v.push((a, i, j));
                }
            }
        }
        v
    };
    let layouts: Vec<Vec<(i64, usize, usize)>> = (lo..=hi).map(layout).collect();
    let bases: Vec<Vec<Label>> = layouts
        .iter()
        .enumerate()
        .map(|(k, lay)| {
            let n = lo + k as i64;
            lay.iter()
                .map(|&(a, i, j)| {
                    Label::Pair(
                        Box::new(c.basis(a)[i].clone()),
                        Box::new(d.basis(n - a)[j].clone()),
                    )
                })
                .collect()
        })
        .collect();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let src = &layouts[(n - lo) as usize];
        let tgt = &layouts[(n - 1 - lo) as usize];
        let index: std::collections::HashMap<(i64, usize, usize), usize> =
            tgt.iter().enumerate().map(|(k, &key)| (key, k)).collect();
        let mut m = SparseIntMatrix::zeros(tgt.len(), src.len());
        let mut dc_cache = std::collections::HashMap::new();
        let mut dd_cache = std::collections::HashMap::new();
        for (col, &(a, i, j)) in src.iter().enumerate() {
            let b = n - a;
            let dc = dc_cache.entry(a).or_insert_with(|| c.differential(a));
            for (r, cc, v) in dc.entries() {
                if cc == i {
                    if let Some(&row) = index.get(&(a - 1, r, j)) {
                        m.add_to(row, col, v);
                    }
                }
            }
            let dd = dd_cache.entry(b).or_insert_with(|| d.differential(b));
            let sign = koszul_sign(a);
            for (r, cc, v) in dd.entries() {
                if cc == j {
                    if let Some(&row) = index.get(&(a, i, r)) {
                        m.add_to(row, col, &(&sign * v));
                    }
                }
            }
        }
        diffs.push(m);
    }
    ChainComplex::new(lo, bases, diffs).expect("tensor product satisfies d∘d = 0")
}

/// Degreewise map of chain complexes, `f_n : source_n -> target_n`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: Vec<SparseIntMatrix>,
    lo: i64,
}

impl ChainMap {
    /// `components[k]` is the map in degree `lo + k`, where `lo` is the larger
    /// of the two minimal degrees. Components are required on the common
    /// degree range; commutation with the differentials is validated.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: Vec<SparseIntMatrix>,
    ) -> Result<Self> {
        let lo = source.min_degree().max(target.min_degree());
        let hi = source.max_degree().min(target.max_degree());
        let expected = (hi - lo + 1).max(0) as usize;
        if components.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "chain map needs {expected} components, got {}",
                components.len()
            )));
        }
        for (k, f) in components.iter().enumerate() {
            let n = lo + k as i64;
            if f.shape() != (target.rank(n), source.rank(n)) {
                return Err(Error::DimensionMismatch(format!(
                    "component in degree {n} has shape {:?}",
                    f.shape()
                )));
            }
        }
        let map = ChainMap { source, target, components, lo };
        for n in lo + 1..=hi {
            let lhs = &map.target.differential(n) * &map.component(n);
            let rhs = &map.component(n - 1) * &map.source.differential(n);
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("d f != f d in degree {n}")));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        Self::scalar(c, &BigInt::from(1))
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Result<ChainMap> {
        let lo = source.min_degree().max(target.min_degree());
        let hi = source.max_degree().min(target.max_degree());
        let comps = (lo..=hi)
            .map(|n| SparseIntMatrix::zeros(target.rank(n), source.rank(n)))
            .collect();
        ChainMap::new(source.clone(), target.clone(), comps)
    }

    /// Multiplication by `q` on every chain group.
    pub fn scalar(c: &ChainComplex, q: &BigInt) -> ChainMap {
        let comps = (c.min_degree()..=c.max_degree())
            .map(|n| SparseIntMatrix::identity(c.rank(n)).scale(q))
            .collect();
        ChainMap { source: c.clone(), target: c.clone(), components: comps, lo: c.min_degree() }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> SparseIntMatrix {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.components.len() {
            self.components[k as usize].clone()
        } else {
            SparseIntMatrix::zeros(self.target.rank(n), self.source.rank(n))
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &ChainMap) -> Result<ChainMap> {
        if self.target != g.source {
            return Err(Error::DimensionMismatch("composed chain maps do not match".into()));
        }
        let lo = self.source.min_degree().max(g.target.min_degree());
        let hi = self.source.max_degree().min(g.target.max_degree());
        let comps = (lo..=hi).map(|n| &g.component(n) * &self.component(n)).collect();
        ChainMap::new(self.source.clone(), g.target.clone(), comps)
    }

    /// Induced map `H_n(source) -> H_n(target)` in generator coordinates.
    pub fn on_homology(
        &self,
        n: i64,
        src: &HomologyPresentation,
        tgt: &HomologyPresentation,
    ) -> Result<SparseIntMatrix> {
        tgt.image_of(&self.component(n), src)
    }

    /// Mapping cone with `Cone_n = source_{n-1} ⊕ target_n` and differential
    /// `(a, b) ↦ (-d a, f a + d b)`.
    pub fn cone(&self) -> Result<ChainComplex> {
        let lo = (self.source.min_degree() + 1).min(self.target.min_degree());
        let hi = (self.source.max_degree() + 1).min(self.target.max_degree());
        if lo > hi {
            return Err(Error::TruncationTooTight("mapping cone has no complete degree".into()));
        }
        let bases: Vec<Vec<Label>> = (lo..=hi)
            .map(|n| {
                let mut b: Vec<Label> = self
                    .source
                    .basis(n - 1)
                    .iter()
                    .map(|l| Label::ConeSource(Box::new(l.clone())))
                    .collect();
                b.extend(self.target.basis(n).iter().map(|l| Label::ConeTarget(Box::new(l.clone()))));
                b
            })
            .collect();
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let (s_hi, t_hi) = (self.source.rank(n - 1), self.target.rank(n));
            let (s_lo, t_lo) = (self.source.rank(n - 2), self.target.rank(n - 1));
            let mut m = SparseIntMatrix::zeros(s_lo + t_lo, s_hi + t_hi);
            m.insert_block(0, 0, &-&self.source.differential(n - 1));
            m.insert_block(s_lo, 0, &self.component(n - 1));
            m.insert_block(s_lo, s_hi, &self.target.differential(n));
            diffs.push(m);
        }
        ChainComplex::new(lo, bases, diffs)
    }

    /// Exactness of `... -> H_n(src) -> H_n(tgt) -> H_n(cone) -> H_{n-1}(src) -> ...`
    /// at every node whose three groups are computable.
    pub fn cone_les_check(&self) -> Result<ExactnessReport> {
        let cone = self.cone()?;
        homology::cone_sequence_report(self, &cone)
    }
}

/// Homology of `C ⊗ D` agrees with that of `D ⊗ C`; exposed for callers that
/// want the symmetry check on their own complexes.
pub fn tensor_symmetric(c: &ChainComplex, d: &ChainComplex) -> Result<bool> {
    let cd = c.tensor(d);
    let dc = d.tensor(c);
    for n in cd.min_degree()..cd.max_degree() {
        if cd.homology(n)? != dc.homology(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}
