//! Cyclic homology from the `(b, B)` bicomplex, relative groups through
//! mapping cones, and the Connes exact sequence as a consistency check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::complexes::{Bicomplex, ChainComplex, ChainMap, ExactnessReport, HomologyPresentation, Label};
use crate::dga::{koszul_resolution, reduction_map, DGAMorphism, DGAlgebra};
use crate::error::{Error, Result};
use crate::hochschild::{induced_between, HochschildComplex};
use crate::intlin::lattice::Presentation;
use crate::intlin::{is_prime, AbelianGroup, SparseIntMatrix};

/// The bicomplex with `(s, t)` entry `C_{t-s}`, vertical differential the
/// Hochschild differential and horizontal differential Connes' `B`, with its
/// total complex through degree `bound + 1`.
#[derive(Clone, Debug)]
pub struct CyclicComplexBundle {
    bound: i64,
    hochschild: HochschildComplex,
    bicomplex: Bicomplex,
    total: ChainComplex,
}

impl CyclicComplexBundle {
    pub fn new(algebra: &DGAlgebra, bound: i64) -> Result<Self> {
        let h = HochschildComplex::new(algebra, bound)?;
        Self::from_hochschild(h)
    }

    pub fn from_hochschild(h: HochschildComplex) -> Result<Self> {
        let bound = h.bound();
        let top = bound + 1;
        let mut cells = BTreeMap::new();
        let mut vertical = BTreeMap::new();
        let mut horizontal = BTreeMap::new();
        for s in 0..=top / 2 {
            for j in 0..=top - 2 * s {
                let t = s + j;
                cells.insert((s, t), h.words(j).iter().map(|w| h.word_label(w)).collect::<Vec<Label>>());
                if j > 0 {
                    vertical.insert((s, t), h.differential(j));
                }
                if s > 0 {
                    horizontal.insert((s, t), h.connes_matrix(j));
                }
            }
        }
        let bicomplex = Bicomplex::new(cells, vertical, horizontal, (0, top))?;
        let total = bicomplex.total_complex(0, top)?;
        Ok(CyclicComplexBundle { bound, hochschild: h, bicomplex, total })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn algebra(&self) -> &DGAlgebra {
        self.hochschild.algebra()
    }

    pub fn hochschild(&self) -> &HochschildComplex {
        &self.hochschild
    }

    pub fn bicomplex(&self) -> &Bicomplex {
        &self.bicomplex
    }

    pub fn total(&self) -> &ChainComplex {
        &self.total
    }

    fn check(&self, i: i64) -> Result<()> {
        if i < 0 || i > self.bound {
            return Err(Error::BoundTooSmall(format!("HC_{i} needs bound >= {i}, have {}", self.bound)));
        }
        Ok(())
    }

    pub fn homology(&self, i: i64) -> Result<AbelianGroup> {
        self.check(i)?;
        self.total.homology(i)
    }

    pub fn homology_mod(&self, i: i64, q: &BigInt) -> Result<AbelianGroup> {
        self.check(i)?;
        self.total.homology_mod(i, q)
    }

    /// Presentation of `HC_i`; zero below degree 0.
    pub fn presentation(&self, i: i64) -> Result<HomologyPresentation> {
        if i < 0 {
            return empty_presentation();
        }
        self.check(i)?;
        self.total.homology_presentation(i)
    }

    /// Chain map of total complexes induced by `f`, cell by cell.
    pub fn induced_total_map(f: &DGAMorphism, src: &Self, tgt: &Self) -> Result<ChainMap> {
        let hmap = induced_between(f, &src.hochschild, &tgt.hochschild)?;
        let comps = (0..=src.bound + 1)
            .map(|n| {
                let mut m = SparseIntMatrix::zeros(tgt.total.rank(n), src.total.rank(n));
                for s in 0..=n / 2 {
                    let t = n - s;
                    m.insert_block(
                        tgt.bicomplex.total_offset(s, t),
                        src.bicomplex.total_offset(s, t),
                        &hmap.component(t - s),
                    );
                }
                m
            })
            .collect();
        ChainMap::new(src.total.clone(), tgt.total.clone(), comps)
    }

    /// Exactness of `HH_n -I-> HC_n -S-> HC_{n-2} -∂-> HH_{n-1} -> ...` for
    /// `n <= bound`. `I` includes column 0, `S` drops it, and `∂` applies `B`
    /// to the column-0 part of a cycle.
    pub fn sbi_check(&self) -> Result<ExactnessReport> {
        let mut names = Vec::new();
        let mut groups = Vec::new();
        let mut maps = Vec::new();
        for n in (0..=self.bound).rev() {
            let hh = self.hochschild.complex().homology_presentation(n)?;
            let hc = self.presentation(n)?;
            let hc2 = self.presentation(n - 2)?;
            if !groups.is_empty() {
                maps.push(self.connecting(n + 1));
            }
            names.extend([format!("HH_{n}"), format!("HC_{n}"), format!("HC_{}", n - 2)]);
            groups.extend([hh, hc, hc2]);
            maps.push(self.inclusion(n));
            maps.push(self.periodicity(n));
        }
        let refs: Vec<&HomologyPresentation> = groups.iter().collect();
        let maps: Vec<SparseIntMatrix> = maps
            .into_iter()
            .enumerate()
            .map(|(k, m)| lift_map(m, refs[k], refs[k + 1]))
            .collect::<Result<_>>()?;
        let mut report = ExactnessReport::default();
        report.push_sequence(&names, &refs, &maps);
        Ok(report)
    }

    fn inclusion(&self, n: i64) -> SparseIntMatrix {
        let c = self.hochschild.words(n).len();
        let mut m = SparseIntMatrix::zeros(self.total.rank(n), c);
        m.insert_block(self.bicomplex.total_offset(0, n), 0, &SparseIntMatrix::identity(c));
        m
    }

    fn periodicity(&self, n: i64) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zeros(self.total.rank(n - 2), self.total.rank(n));
        for s in 1..=n / 2 {
            let t = n - s;
            let d = self.bicomplex.dim(s, t);
            if d > 0 {
                m.insert_block(
                    self.bicomplex.total_offset(s - 1, t - 1),
                    self.bicomplex.total_offset(s, t),
                    &SparseIntMatrix::identity(d),
                );
            }
        }
        m
    }

    /// `HC_{n-2} -> HH_{n-1}`.
    fn connecting(&self, n: i64) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::zeros(self.hochschild.words(n - 1).len(), self.total.rank(n - 2));
        if n >= 2 {
            m.insert_block(0, self.bicomplex.total_offset(0, n - 2), &self.hochschild.connes_matrix(n - 2));
        }
        m
    }
}

fn empty_presentation() -> Result<HomologyPresentation> {
    HomologyPresentation::compute(&SparseIntMatrix::zeros(0, 0), &SparseIntMatrix::zeros(0, 0))
}

/// Chain-level matrix to a map of presented homology groups.
fn lift_map(
    chain: SparseIntMatrix,
    src: &HomologyPresentation,
    tgt: &HomologyPresentation,
) -> Result<SparseIntMatrix> {
    tgt.image_of(&chain, src)
}

/// `HC_i(A)`.
pub fn hc(a: &DGAlgebra, i: i64, bound: i64) -> Result<AbelianGroup> {
    if i > bound {
        return Err(Error::BoundTooSmall(format!("HC_{i} needs bound >= {i}, have {bound}")));
    }
    CyclicComplexBundle::new(a, bound)?.homology(i)
}

/// Relative cyclic homology of `f`, defined as `H_{i+1}` of the mapping cone
/// of the induced map of total complexes, so that
/// `HC_{i+1}(target) -> HC_i(f) -> HC_i(source) -> HC_i(target)` is exact.
pub fn hc_relative(f: &DGAMorphism, i: i64, bound: i64) -> Result<AbelianGroup> {
    if i > bound {
        return Err(Error::BoundTooSmall(format!("relative HC_{i} needs bound >= {i}, have {bound}")));
    }
    RelativeCyclic::new(f, bound)?.homology(i)
}

/// Source and target bundles built one degree higher than the relative
/// range, with the mapping cone of the induced map.
#[derive(Clone, Debug)]
pub struct RelativeCyclic {
    bound: i64,
    source: CyclicComplexBundle,
    target: CyclicComplexBundle,
    map: ChainMap,
    cone: ChainComplex,
}

impl RelativeCyclic {
    pub fn new(f: &DGAMorphism, bound: i64) -> Result<Self> {
        if bound < 0 {
            return Err(Error::BoundTooSmall(format!("bound {bound} is negative")));
        }
        let source = CyclicComplexBundle::new(f.source(), bound + 1)?;
        let target = CyclicComplexBundle::new(f.target(), bound + 1)?;
        let map = CyclicComplexBundle::induced_total_map(f, &source, &target)?;
        let cone = map.cone()?;
        Ok(RelativeCyclic { bound, source, target, map, cone })
    }

    pub fn homology(&self, i: i64) -> Result<AbelianGroup> {
        if i < 0 || i > self.bound {
            return Err(Error::BoundTooSmall(format!("relative HC_{i} needs bound >= {i}, have {}", self.bound)));
        }
        self.cone.homology(i + 1)
    }

    pub fn source(&self) -> &CyclicComplexBundle {
        &self.source
    }

    pub fn target(&self) -> &CyclicComplexBundle {
        &self.target
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }

    /// Exactness of the long exact sequence of the pair.
    pub fn les_check(&self) -> Result<ExactnessReport> {
        self.map.cone_les_check()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub p: u64,
    pub n: u32,
    pub degree: i64,
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    pub onto: bool,
    /// Whether the degree lies in `0..=2p-1`, where surjectivity is known.
    pub in_verified_range: bool,
}

fn tower_params(p: u64, n: u32, i: i64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!("level n = {n} must be at least 2")));
    }
    if i < 0 {
        return Err(Error::InvalidParams(format!("degree {i} is negative")));
    }
    Ok(())
}

/// Whether `HC_i(Z/p^n) -> HC_i(Z/p^{n-1})` is onto, for `0 <= i <= 2p - 1`.
pub fn hc_tower_surjectivity(p: u64, n: u32, i: i64) -> Result<TowerReport> {
    tower_params(p, n, i)?;
    if i > 2 * p as i64 - 1 {
        return Err(Error::Range(format!("degree {i} is outside 0..={}", 2 * p - 1)));
    }
    hc_tower_surjectivity_unchecked(p, n, i)
}

/// As [`hc_tower_surjectivity`] without the range restriction; the report
/// records whether the degree is in the verified range.
pub fn hc_tower_surjectivity_unchecked(p: u64, n: u32, i: i64) -> Result<TowerReport> {
    tower_params(p, n, i)?;
    let pb = BigInt::from(p);
    let f = reduction_map(&pb.pow(n), &pb.pow(n - 1))?;
    let src = CyclicComplexBundle::new(f.source(), i)?;
    let tgt = CyclicComplexBundle::new(f.target(), i)?;
    let map = CyclicComplexBundle::induced_total_map(&f, &src, &tgt)?;
    let hs = src.presentation(i)?;
    let ht = tgt.presentation(i)?;
    let on_h = map.on_homology(i, &hs, &ht)?;
    Ok(TowerReport {
        p,
        n,
        degree: i,
        source: hs.group().clone(),
        target: ht.group().clone(),
        onto: Presentation::is_surjective(&ht.presentation(), &on_h),
        in_verified_range: i < 2 * p as i64,
    })
}

/// `H_i(Tot ⊗ Z/p)` of the bicomplex of the resolution of `Z/p^n`, for
/// `i = 0..=max_degree`.
pub fn mod_p_control(p: u64, n: u32, max_degree: i64) -> Result<Vec<AbelianGroup>> {
    if !is_prime(p) || n < 1 {
        return Err(Error::InvalidParams(format!("need a prime p and n >= 1, got p = {p}, n = {n}")));
    }
    let pb = BigInt::from(p);
    let bundle = CyclicComplexBundle::new(&koszul_resolution(&pb.pow(n))?, max_degree)?;
    (0..=max_degree).map(|i| bundle.homology_mod(i, &pb)).collect()
}

#[cfg(test)]
mod tests;
