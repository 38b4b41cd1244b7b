use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::intlin::lattice::{unit_vector, Presentation};
use crate::intlin::{AbelianGroup, Smith, SparseIntMatrix};

/// `ker(d_out) / im(d_in)` with cycle representatives for its cyclic
/// summands and a map from cycles to class coordinates.
///
/// Generator `j` has order `moduli[j]` (`0` for a free summand); coordinates
/// of torsion summands are reduced into `[0, moduli[j])`.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    group: AbelianGroup,
    moduli: Vec<BigInt>,
    generators: Vec<Vec<BigInt>>,
    coordinates: SparseIntMatrix,
    d_out: SparseIntMatrix,
}

impl HomologyPresentation {
    pub fn compute(d_out: &SparseIntMatrix, d_in: &SparseIntMatrix) -> Result<Self> {
        if d_in.rows() != d_out.cols() {
            return Err(Error::DimensionMismatch("d_in does not land in the source of d_out".into()));
        }
        if !(d_out * d_in).is_zero() {
            return Err(Error::CompositionNonzero("d_out * d_in != 0".into()));
        }
        let n = d_out.cols();
        let outer = Smith::of(d_out);
        let r = outer.rank();
        // cycles z = K y with y = P z
        let kernel = outer.v.submatrix(0..n, r..n);
        let project = outer.v_inv.submatrix(r..n, 0..n);
        let boundaries = &project * d_in;
        let inner = Smith::of(&boundaries);
        let k = n - r;
        let full = &inner.u * &project;
        let mut moduli = Vec::new();
        let mut generators = Vec::new();
        let mut rows = Vec::new();
        for i in 0..k {
            let m = if i < inner.rank() { inner.diagonal()[i].clone() } else { BigInt::zero() };
            if m.is_one() {
                continue;
            }
            let y = inner.u_inv.mul_vec(&unit_vector(k, i));
            generators.push(kernel.mul_vec(&y));
            moduli.push(m);
            rows.push(i);
        }
        let mut coordinates = SparseIntMatrix::zeros(rows.len(), n);
        for (new_r, &old_r) in rows.iter().enumerate() {
            for c in 0..n {
                coordinates.set(new_r, c, full.get(old_r, c));
            }
        }
        let group = AbelianGroup::from_orders(0, moduli.clone());
        Ok(HomologyPresentation { group, moduli, generators, coordinates, d_out: d_out.clone() })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::with_orders(&self.moduli)
    }

    pub fn is_cycle(&self, z: &[BigInt]) -> bool {
        self.d_out.mul_vec(z).iter().all(|x| x.is_zero())
    }

    /// Class coordinates of a cycle.
    pub fn coordinates(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        if !self.is_cycle(z) {
            return Err(Error::NotAChainMap("vector is not a cycle".into()));
        }
        let mut c = self.coordinates.mul_vec(z);
        for (x, m) in c.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
        Ok(c)
    }

    /// Matrix of the map on homology induced by the chain-level matrix `f`,
    /// from `src` into `self`.
    pub fn image_of(&self, f: &SparseIntMatrix, src: &HomologyPresentation) -> Result<SparseIntMatrix> {
        let cols: Result<Vec<Vec<BigInt>>> =
            src.generators.iter().map(|g| self.coordinates(&f.mul_vec(g))).collect();
        Ok(SparseIntMatrix::from_columns(self.moduli.len(), &cols?))
    }
}

/// One node of a long exact sequence.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessCheck {
    pub node: String,
    pub group: AbelianGroup,
    pub exact: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExactnessReport {
    pub checks: Vec<ExactnessCheck>,
}

impl ExactnessReport {
    pub fn all_exact(&self) -> bool {
        self.checks.iter().all(|c| c.exact)
    }

    pub fn first_failure(&self) -> Option<&ExactnessCheck> {
        self.checks.iter().find(|c| !c.exact)
    }

    /// Appends exactness checks for a sequence `A_0 -> A_1 -> ... -> A_k` of
    /// presented groups with `maps[i] : A_i -> A_{i+1}`, at every interior node.
    pub fn push_sequence(
        &mut self,
        names: &[String],
        groups: &[&HomologyPresentation],
        maps: &[SparseIntMatrix],
    ) {
        assert_eq!(groups.len(), maps.len() + 1);
        for i in 1..groups.len().saturating_sub(1) {
            let mid = groups[i].presentation();
            let exact = mid.is_exact_at(&maps[i - 1], &maps[i], &groups[i + 1].presentation());
            self.checks.push(ExactnessCheck {
                node: names[i].clone(),
                group: groups[i].group().clone(),
                exact,
            });
        }
    }
}

pub(super) fn cone_sequence_report(f: &ChainMap, cone: &ChainComplex) -> Result<ExactnessReport> {
    let src = f.source();
    let tgt = f.target();
    let computable = |c: &ChainComplex, n: i64| n >= c.min_degree() && n < c.max_degree();

    let lo = src.min_degree().min(tgt.min_degree()).min(cone.min_degree());
    let hi = src.max_degree().max(tgt.max_degree()).max(cone.max_degree());
    // the sequence runs downward: src_n, tgt_n, cone_n, src_{n-1}, ...
    let mut nodes: Vec<(String, HomologyPresentation, i64, u8)> = Vec::new();
    let mut report = ExactnessReport::default();
    let flush = |nodes: &mut Vec<(String, HomologyPresentation, i64, u8)>,
                 report: &mut ExactnessReport|
     -> Result<()> {
        if nodes.len() >= 3 {
            let mut maps = Vec::new();
            for w in nodes.windows(2) {
                maps.push(connecting(f, cone, &w[0], &w[1])?);
            }
            let names: Vec<String> = nodes.iter().map(|n| n.0.clone()).collect();
            let groups: Vec<&HomologyPresentation> = nodes.iter().map(|n| &n.1).collect();
            report.push_sequence(&names, &groups, &maps);
        }
        nodes.clear();
        Ok(())
    };
    for n in (lo..=hi).rev() {
        for kind in 0..3u8 {
            let (c, name) = match kind {
                0 => (src, format!("H_{n}(source)")),
                1 => (tgt, format!("H_{n}(target)")),
                _ => (cone, format!("H_{n}(cone)")),
            };
            if computable(c, n) {
                nodes.push((name, c.homology_presentation(n)?, n, kind));
            } else {
                flush(&mut nodes, &mut report)?;
            }
        }
    }
    flush(&mut nodes, &mut report)?;
    Ok(report)
}

type Node = (String, HomologyPresentation, i64, u8);

fn connecting(f: &ChainMap, cone: &ChainComplex, a: &Node, b: &Node) -> Result<SparseIntMatrix> {
    let (n, kind) = (a.2, a.3);
    let chain = match kind {
        0 => f.component(n),
        1 => {
            // tgt_n -> cone_n, b ↦ (0, b)
            let s = f.source().rank(n - 1);
            let t = f.target().rank(n);
            let mut m = SparseIntMatrix::zeros(cone.rank(n), t);
            m.insert_block(s, 0, &SparseIntMatrix::identity(t));
            m
        }
        _ => {
            // cone_n -> src_{n-1}, (a, b) ↦ a
            let s = f.source().rank(n - 1);
            let mut m = SparseIntMatrix::zeros(s, cone.rank(n));
            m.insert_block(0, 0, &SparseIntMatrix::identity(s));
            m
        }
    };
    b.1.image_of(&chain, &a.1)
}
