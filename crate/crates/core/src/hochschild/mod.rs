//! Normalized Hochschild complex of a DG algebra with Connes' operator.
//!
//! Chains are words `a0[a1|...|ak]` with `a1..ak` non-unit basis elements,
//! in total degree `|a0| + Σ (|ai| + 1)`. Write `‖a‖ = |a| + 1`. With these
//! conventions
//!
//! * `δ(a0[..]) = (d a0)[..] - Σ_i (-1)^{|a0| + ‖a1‖ + .. + ‖a_{i-1}‖} a0[..|d ai|..]`
//! * `b(a0[..]) = (-1)^{|a0|} a0a1[a2|..] + Σ_{0<i<k} (-1)^{|a0| + ‖a1‖ + .. + ‖ai‖} a0[..|ai a_{i+1}|..]
//!   - (-1)^{‖ak‖ (|a0| + ‖a1‖ + .. + ‖a_{k-1}‖)} ak a0[a1|..|a_{k-1}]`
//! * `B(a0[a1|..|ak]) = Σ_i (-1)^{(‖a0‖ + .. + ‖a_{i-1}‖)(‖ai‖ + .. + ‖ak‖)} 1[ai|..|ak|a0|..|a_{i-1}]`
//!
//! For the resolution of `Z/m` this gives `D(t[t|..|t]) = m·1[t|..|t]` and
//! `B(t[t^{k-1}]) = k·1[t^k]`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complexes::{Bicomplex, ChainComplex, ChainMap, Label};
use crate::dga::{DGAMorphism, DGAlgebra};
use crate::error::{Error, Result};
use crate::intlin::{AbelianGroup, SparseIntMatrix};

pub type Word = Vec<usize>;

fn sign(exp: i64) -> BigInt {
    if exp.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[derive(Clone, Debug)]
pub struct HochschildComplex {
    algebra: DGAlgebra,
    bound: i64,
    words: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
    bicomplex: Bicomplex,
    complex: ChainComplex,
    b: Vec<SparseIntMatrix>,
    internal: Vec<SparseIntMatrix>,
    connes: Vec<SparseIntMatrix>,
}

/// Words of total degree `n`, ordered by length and then lexicographically.
fn words_of_degree(a: &DGAlgebra, n: i64) -> Vec<Word> {
    fn extend(a: &DGAlgebra, prefix: &mut Word, left: i64, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(prefix.clone());
        }
        for x in 0..a.dim() {
            let w = a.degree(x) + 1;
            if x != a.unit() && w <= left {
                prefix.push(x);
                extend(a, prefix, left - w, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    for a0 in 0..a.dim() {
        if a.degree(a0) <= n {
            extend(a, &mut vec![a0], n - a.degree(a0), &mut out);
        }
    }
    out.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
    out
}

fn norm(a: &DGAlgebra, w: &[usize]) -> i64 {
    w.iter().map(|&x| a.degree(x) + 1).sum()
}

type Chain = BTreeMap<Word, BigInt>;

fn push(a: &DGAlgebra, out: &mut Chain, w: Word, v: BigInt) {
    if v.is_zero() || w[1..].contains(&a.unit()) {
        return;
    }
    let e = out.entry(w.clone()).or_insert_with(BigInt::zero);
    *e += v;
    if e.is_zero() {
        out.remove(&w);
    }
}

pub(crate) fn internal_of(a: &DGAlgebra, w: &[usize]) -> Chain {
    let mut out = Chain::new();
    for (&c, v) in a.diff(w[0]) {
        let mut x = w.to_vec();
        x[0] = c;
        push(a, &mut out, x, v.clone());
    }
    for i in 1..w.len() {
        let s = -sign(a.degree(w[0]) + norm(a, &w[1..i]));
        for (&c, v) in a.diff(w[i]) {
            let mut x = w.to_vec();
            x[i] = c;
            push(a, &mut out, x, &s * v);
        }
    }
    out
}

pub(crate) fn b_of(a: &DGAlgebra, w: &[usize]) -> Chain {
    let mut out = Chain::new();
    let k = w.len() - 1;
    if k == 0 {
        return out;
    }
    let d0 = a.degree(w[0]);
    let s = sign(d0);
    for (&c, v) in &a.product(w[0], w[1]) {
        let mut x = vec![c];
        x.extend_from_slice(&w[2..]);
        push(a, &mut out, x, &s * v);
    }
    for i in 1..k {
        let s = sign(d0 + norm(a, &w[1..=i]));
        for (&c, v) in &a.product(w[i], w[i + 1]) {
            let mut x = w[..i].to_vec();
            x.push(c);
            x.extend_from_slice(&w[i + 2..]);
            push(a, &mut out, x, &s * v);
        }
    }
    let s = -sign((a.degree(w[k]) + 1) * (d0 + norm(a, &w[1..k])));
    for (&c, v) in &a.product(w[k], w[0]) {
        let mut x = vec![c];
        x.extend_from_slice(&w[1..k]);
        push(a, &mut out, x, &s * v);
    }
    out
}

pub(crate) fn connes_of(a: &DGAlgebra, w: &[usize]) -> Chain {
    let mut out = Chain::new();
    if w[0] == a.unit() {
        return out;
    }
    let weights: Vec<i64> = w.iter().map(|&x| a.degree(x) + 1).collect();
    let total: i64 = weights.iter().sum();
    let mut before = 0;
    for i in 0..w.len() {
        let mut x = vec![a.unit()];
        x.extend_from_slice(&w[i..]);
        x.extend_from_slice(&w[..i]);
        push(a, &mut out, x, sign(before * (total - before)));
        before += weights[i];
    }
    out
}

impl HochschildComplex {
    /// Builds chains in total degrees `0..=bound + 1`, so that homology is
    /// available through degree `bound`, and `B` out of degrees `0..=bound`.
    pub fn new(algebra: &DGAlgebra, bound: i64) -> Result<Self> {
        if bound < 0 {
            return Err(Error::BoundTooSmall(format!("bound {bound} is negative")));
        }
        if let Some(v) = algebra.validate().violation {
            return Err(Error::InvalidAlgebra(format!("{}: {}", v.axiom, v.detail)));
        }
        let a = algebra;
        let top = bound + 1;
        let words: Vec<Vec<Word>> = (0..=top).map(|n| words_of_degree(a, n)).collect();
        let index: Vec<HashMap<Word, usize>> = words
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();

        let matrix = |n: i64, target: i64, op: &dyn Fn(&DGAlgebra, &[usize]) -> Chain| {
            let (src, tgt) = (&words[n as usize], &index[target as usize]);
            let mut m = SparseIntMatrix::zeros(tgt.len(), src.len());
            for (c, w) in src.iter().enumerate() {
                for (x, v) in op(a, w) {
                    m.set(tgt[&x], c, v);
                }
            }
            m
        };
        let b: Vec<SparseIntMatrix> = (1..=top).map(|n| matrix(n, n - 1, &b_of)).collect();
        let internal: Vec<SparseIntMatrix> = (1..=top).map(|n| matrix(n, n - 1, &internal_of)).collect();
        let connes: Vec<SparseIntMatrix> = (0..=bound).map(|n| matrix(n, n + 1, &connes_of)).collect();

        // bicomplex with s = word length, t = internal degree
        let mut cells: BTreeMap<(i64, i64), Vec<Label>> = BTreeMap::new();
        let mut cell_words: BTreeMap<(i64, i64), Vec<Word>> = BTreeMap::new();
        for n in 0..=top {
            for s in 0..=n {
                cells.insert((s, n - s), vec![]);
                cell_words.insert((s, n - s), vec![]);
            }
            for w in &words[n as usize] {
                let s = w.len() as i64 - 1;
                cells.get_mut(&(s, n - s)).unwrap().push(Self::label_of(a, w));
                cell_words.get_mut(&(s, n - s)).unwrap().push(w.clone());
            }
        }
        let cell_index: BTreeMap<(i64, i64), HashMap<&Word, usize>> = cell_words
            .iter()
            .map(|(&c, ws)| (c, ws.iter().enumerate().map(|(i, w)| (w, i)).collect()))
            .collect();
        let mut vertical = BTreeMap::new();
        let mut horizontal = BTreeMap::new();
        for (&(s, t), ws) in &cell_words {
            if ws.is_empty() {
                continue;
            }
            for (target, op, store) in [
                ((s, t - 1), &internal_of as &dyn Fn(&DGAlgebra, &[usize]) -> Chain, &mut vertical),
                ((s - 1, t), &b_of, &mut horizontal),
            ] {
                let Some(tgt) = cell_index.get(&target) else { continue };
                let mut m = SparseIntMatrix::zeros(tgt.len(), ws.len());
                for (c, w) in ws.iter().enumerate() {
                    for (x, v) in op(a, w) {
                        m.set(tgt[&x], c, v);
                    }
                }
                store.insert((s, t), m);
            }
        }
        let bicomplex = Bicomplex::new(cells, vertical, horizontal, (0, top))?;
        let complex = bicomplex.total_complex(0, top)?;

        let h = HochschildComplex { algebra: a.clone(), bound, words, index, bicomplex, complex, b, internal, connes };
        h.check_connes()?;
        Ok(h)
    }

    fn label_of(a: &DGAlgebra, w: &[usize]) -> Label {
        Label::Word(w.iter().map(|&x| a.label(x).to_string()).collect())
    }

    fn check_connes(&self) -> Result<()> {
        for n in 0..self.bound {
            if !(&self.connes[n as usize + 1] * &self.connes[n as usize]).is_zero() {
                return Err(Error::CompositionNonzero(format!("B∘B != 0 out of degree {n}")));
            }
        }
        for n in 0..=self.bound {
            let lhs = &self.differential(n + 1) * &self.connes[n as usize];
            let rhs = if n > 0 {
                &self.connes[n as usize - 1] * &self.differential(n)
            } else {
                SparseIntMatrix::zeros(lhs.rows(), lhs.cols())
            };
            if !(&lhs + &rhs).is_zero() {
                return Err(Error::CompositionNonzero(format!("DB + BD != 0 on degree {n}")));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &DGAlgebra {
        &self.algebra
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn bicomplex(&self) -> &Bicomplex {
        &self.bicomplex
    }

    /// Words in degree `n`, in basis order.
    pub fn words(&self, n: i64) -> &[Word] {
        if n >= 0 && n <= self.bound + 1 {
            &self.words[n as usize]
        } else {
            &[]
        }
    }

    pub fn word_index(&self, n: i64, w: &[usize]) -> Option<usize> {
        self.index.get(n as usize)?.get(w).copied()
    }

    /// Readable form of a word, `a0[a1|...|ak]`.
    pub fn word_label(&self, w: &[usize]) -> Label {
        Self::label_of(&self.algebra, w)
    }

    /// Total differential `D = b + δ` out of degree `n`.
    pub fn differential(&self, n: i64) -> SparseIntMatrix {
        self.complex.differential(n)
    }

    /// Hochschild boundary out of degree `n`, for `1 <= n <= bound + 1`.
    pub fn b_matrix(&self, n: i64) -> SparseIntMatrix {
        self.b[(n - 1) as usize].clone()
    }

    pub fn internal_matrix(&self, n: i64) -> SparseIntMatrix {
        self.internal[(n - 1) as usize].clone()
    }

    /// Connes' operator `B : C_n -> C_{n+1}`, for `0 <= n <= bound`.
    pub fn connes_matrix(&self, n: i64) -> SparseIntMatrix {
        self.connes[n as usize].clone()
    }

    pub fn homology(&self, i: i64) -> Result<AbelianGroup> {
        if i < 0 || i > self.bound {
            return Err(Error::BoundTooSmall(format!("HH_{i} needs bound >= {i}, have {}", self.bound)));
        }
        self.complex.homology(i)
    }
}

pub fn hochschild_complex(a: &DGAlgebra, bound: i64) -> Result<HochschildComplex> {
    HochschildComplex::new(a, bound)
}

/// `HH_i(A)`, computed from the complex truncated at `bound`.
pub fn hh(a: &DGAlgebra, i: i64, bound: i64) -> Result<AbelianGroup> {
    if i > bound {
        return Err(Error::BoundTooSmall(format!("HH_{i} needs bound >= {i}, have {bound}")));
    }
    HochschildComplex::new(a, bound)?.homology(i)
}

/// Connes' operator out of each degree `0..=bound`.
pub fn connes_b(h: &HochschildComplex) -> Vec<SparseIntMatrix> {
    (0..=h.bound()).map(|n| h.connes_matrix(n)).collect()
}

/// Word-wise image of a chain under `f`, dropping words with a unit in a bar
/// position.
fn apply_word(f: &DGAMorphism, w: &[usize]) -> Chain {
    let target = f.target();
    let mut terms: Vec<(Word, BigInt)> = vec![(vec![], BigInt::one())];
    for &x in w {
        let mut next = Vec::new();
        for (prefix, v) in &terms {
            for (&y, u) in f.image(x) {
                if !prefix.is_empty() && y == target.unit() {
                    continue;
                }
                let mut p = prefix.clone();
                p.push(y);
                next.push((p, v * u));
            }
        }
        terms = next;
    }
    let mut out = Chain::new();
    for (x, v) in terms {
        push(target, &mut out, x, v);
    }
    out
}

/// Chain map of Hochschild complexes induced by `f`, checked against `D`
/// and `B`.
pub fn induced_map(f: &DGAMorphism, bound: i64) -> Result<(HochschildComplex, HochschildComplex, ChainMap)> {
    let src = HochschildComplex::new(f.source(), bound)?;
    let tgt = HochschildComplex::new(f.target(), bound)?;
    let map = induced_between(f, &src, &tgt)?;
    Ok((src, tgt, map))
}

/// As [`induced_map`], between complexes already built with equal bounds.
pub fn induced_between(f: &DGAMorphism, src: &HochschildComplex, tgt: &HochschildComplex) -> Result<ChainMap> {
    if src.bound != tgt.bound || src.algebra != *f.source() || tgt.algebra != *f.target() {
        return Err(Error::DimensionMismatch("Hochschild complexes do not match the morphism".into()));
    }
    let comps: Vec<SparseIntMatrix> = (0..=src.bound + 1)
        .map(|n| word_map_matrix(f, src, tgt, n))
        .collect();
    for n in 0..=src.bound {
        let lhs = &tgt.connes_matrix(n) * &comps[n as usize];
        let rhs = &comps[n as usize + 1] * &src.connes_matrix(n);
        if lhs != rhs {
            return Err(Error::NotAChainMap(format!("induced map does not commute with B in degree {n}")));
        }
    }
    ChainMap::new(src.complex.clone(), tgt.complex.clone(), comps)
}

pub(crate) fn word_map_matrix(
    f: &DGAMorphism,
    src: &HochschildComplex,
    tgt: &HochschildComplex,
    n: i64,
) -> SparseIntMatrix {
    let ws = src.words(n);
    let mut m = SparseIntMatrix::zeros(tgt.words(n).len(), ws.len());
    for (c, w) in ws.iter().enumerate() {
        for (x, v) in apply_word(f, w) {
            let r = tgt.word_index(n, &x).expect("morphisms preserve degree");
            m.set(r, c, v);
        }
    }
    m
}

#[cfg(test)]
mod tests;
