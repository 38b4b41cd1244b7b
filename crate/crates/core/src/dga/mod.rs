//! Finitely generated differential graded algebras over Z, given by a
//! labelled basis, a multiplication table and a differential.

mod load;

pub use load::{dga_from_toml, dga_to_toml};

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complexes::{ChainComplex, Label};
use crate::error::{Error, Result};
use crate::intlin::SparseIntMatrix;

/// Integer combination of basis elements, keyed by basis index. Zero
/// coefficients are never stored.
pub type Combo = BTreeMap<usize, BigInt>;

/// Products `(x, y) -> x·y` given by basis labels.
pub type ProductTable = Vec<((String, String), Vec<(String, BigInt)>)>;

pub(crate) fn combo_add(acc: &mut Combo, idx: usize, v: &BigInt) {
    if v.is_zero() {
        return;
    }
    let e = acc.entry(idx).or_insert_with(BigInt::zero);
    *e += v;
    if e.is_zero() {
        acc.remove(&idx);
    }
}

fn combo_add_scaled(acc: &mut Combo, c: &Combo, k: &BigInt) {
    for (&i, v) in c {
        combo_add(acc, i, &(v * k));
    }
}

fn sign(exp: i64) -> BigInt {
    if exp.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    labels: Vec<String>,
    degrees: Vec<i64>,
    unit: usize,
    mult: HashMap<(usize, usize), Combo>,
    diff: Vec<Combo>,
}

/// First violated axiom found by [`DGAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked: usize,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

impl DGAlgebra {
    /// Assembles an algebra without checking the axioms; see [`Self::new`].
    /// Products involving the unit are filled in automatically.
    pub fn from_parts(
        basis: Vec<(String, i64)>,
        unit: &str,
        products: ProductTable,
        differential: Vec<(String, Vec<(String, BigInt)>)>,
    ) -> Result<Self> {
        let index: HashMap<&str, usize> =
            basis.iter().enumerate().map(|(i, (l, _))| (l.as_str(), i)).collect();
        if index.len() != basis.len() {
            return Err(Error::InvalidAlgebra("duplicate basis label".into()));
        }
        let look = |l: &str| -> Result<usize> {
            index.get(l).copied().ok_or_else(|| Error::InvalidAlgebra(format!("unknown label '{l}'")))
        };
        let combo = |terms: &[(String, BigInt)]| -> Result<Combo> {
            let mut c = Combo::new();
            for (l, v) in terms {
                combo_add(&mut c, look(l)?, v);
            }
            Ok(c)
        };
        let u = look(unit)?;
        let n = basis.len();
        let mut mult = HashMap::new();
        for ((a, b), terms) in &products {
            let key = (look(a)?, look(b)?);
            if mult.insert(key, combo(terms)?).is_some() {
                return Err(Error::InvalidAlgebra(format!("product {a}*{b} given twice")));
            }
        }
        for i in 0..n {
            let one: Combo = [(i, BigInt::one())].into_iter().collect();
            mult.entry((u, i)).or_insert_with(|| one.clone());
            mult.entry((i, u)).or_insert(one);
        }
        mult.retain(|_, c| !c.is_empty());
        let mut diff = vec![Combo::new(); n];
        for (l, terms) in &differential {
            diff[look(l)?] = combo(terms)?;
        }
        let (labels, degrees) = basis.into_iter().unzip();
        Ok(DGAlgebra { labels, degrees, unit: u, mult, diff })
    }

    /// Like [`Self::from_parts`], then rejects the result unless every axiom
    /// holds.
    pub fn new(
        basis: Vec<(String, i64)>,
        unit: &str,
        products: ProductTable,
        differential: Vec<(String, Vec<(String, BigInt)>)>,
    ) -> Result<Self> {
        let a = Self::from_parts(basis, unit, products, differential)?;
        match a.validate().violation {
            None => Ok(a),
            Some(v) => Err(Error::InvalidAlgebra(format!("{}: {}", v.axiom, v.detail))),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn max_degree(&self) -> i64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Basis indices in degree `n`, in declaration order.
    pub fn basis_in_degree(&self, n: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == n).collect()
    }

    pub fn product(&self, a: usize, b: usize) -> Combo {
        self.mult.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn diff(&self, a: usize) -> &Combo {
        &self.diff[a]
    }

    pub fn mul_combo(&self, x: &Combo, y: &Combo) -> Combo {
        let mut out = Combo::new();
        for (&a, u) in x {
            for (&b, v) in y {
                combo_add_scaled(&mut out, &self.product(a, b), &(u * v));
            }
        }
        out
    }

    pub fn diff_combo(&self, x: &Combo) -> Combo {
        let mut out = Combo::new();
        for (&a, u) in x {
            combo_add_scaled(&mut out, &self.diff[a], u);
        }
        out
    }

    fn basis_combo(i: usize) -> Combo {
        [(i, BigInt::one())].into_iter().collect()
    }

    fn show(&self, c: &Combo) -> String {
        if c.is_empty() {
            return "0".into();
        }
        c.iter().map(|(&i, v)| format!("{v}*{}", self.labels[i])).collect::<Vec<_>>().join(" + ")
    }

    /// Exhaustive check of the axioms on basis elements, stopping at the first
    /// counterexample.
    pub fn validate(&self) -> ValidationReport {
        let mut checked = 0;
        let n = self.dim();
        let fail = |axiom, detail: String, checked| ValidationReport {
            checked,
            violation: Some(Violation { axiom, detail }),
        };
        if self.degrees[self.unit] != 0 {
            return fail("unit", "the unit is not in degree 0".into(), checked);
        }
        for i in 0..n {
            checked += 1;
            if self.degrees[i] < 0 {
                return fail("grading", format!("{} has negative degree", self.labels[i]), checked);
            }
            if let Some((&j, _)) = self.diff[i].iter().find(|(&j, _)| self.degrees[j] != self.degrees[i] - 1) {
                return fail(
                    "grading",
                    format!("d({}) has a term {} of the wrong degree", self.labels[i], self.labels[j]),
                    checked,
                );
            }
            let dd = self.diff_combo(&self.diff[i]);
            if !dd.is_empty() {
                return fail("d²=0", format!("d(d({})) = {}", self.labels[i], self.show(&dd)), checked);
            }
        }
        let mut keys: Vec<&(usize, usize)> = self.mult.keys().collect();
        keys.sort();
        for &&(a, b) in &keys {
            checked += 1;
            let deg = self.degrees[a] + self.degrees[b];
            if let Some((&j, _)) = self.mult[&(a, b)].iter().find(|(&j, _)| self.degrees[j] != deg) {
                return fail(
                    "grading",
                    format!("{}*{} has a term {} of the wrong degree", self.labels[a], self.labels[b], self.labels[j]),
                    checked,
                );
            }
        }
        let unit = Self::basis_combo(self.unit);
        for i in 0..n {
            checked += 1;
            let x = Self::basis_combo(i);
            if self.mul_combo(&unit, &x) != x || self.mul_combo(&x, &unit) != x {
                return fail("unitality", format!("1*{0} or {0}*1 differs from {0}", self.labels[i]), checked);
            }
        }
        if !self.diff[self.unit].is_empty() {
            return fail("Leibniz", "d(1) != 0".into(), checked);
        }
        for a in 0..n {
            for b in 0..n {
                checked += 1;
                let (x, y) = (Self::basis_combo(a), Self::basis_combo(b));
                let lhs = self.diff_combo(&self.mul_combo(&x, &y));
                let mut rhs = self.mul_combo(&self.diff[a], &y);
                combo_add_scaled(&mut rhs, &self.mul_combo(&x, &self.diff[b]), &sign(self.degrees[a]));
                if lhs != rhs {
                    return fail(
                        "Leibniz",
                        format!(
                            "d({0}*{1}) = {2} but d({0})*{1} ± {0}*d({1}) = {3}",
                            self.labels[a],
                            self.labels[b],
                            self.show(&lhs),
                            self.show(&rhs)
                        ),
                        checked,
                    );
                }
                for c in 0..n {
                    checked += 1;
                    let z = Self::basis_combo(c);
                    let l = self.mul_combo(&self.mul_combo(&x, &y), &z);
                    let r = self.mul_combo(&x, &self.mul_combo(&y, &z));
                    if l != r {
                        return fail(
                            "associativity",
                            format!("({0}*{1})*{2} != {0}*({1}*{2})", self.labels[a], self.labels[b], self.labels[c]),
                            checked,
                        );
                    }
                }
            }
        }
        ValidationReport { checked, violation: None }
    }

    /// The underlying chain complex, carried one degree past the top so that
    /// every degree of the algebra has computable homology.
    pub fn underlying_complex(&self) -> ChainComplex {
        let top = self.max_degree() + 1;
        let bases: Vec<Vec<usize>> = (0..=top).map(|n| self.basis_in_degree(n)).collect();
        let labels = bases
            .iter()
            .map(|b| b.iter().map(|&i| Label::gen(self.labels[i].clone())).collect())
            .collect();
        let diffs = (1..=top as usize)
            .map(|n| {
                let mut m = SparseIntMatrix::zeros(bases[n - 1].len(), bases[n].len());
                let row: HashMap<usize, usize> = bases[n - 1].iter().enumerate().map(|(r, &i)| (i, r)).collect();
                for (c, &i) in bases[n].iter().enumerate() {
                    for (j, v) in &self.diff[i] {
                        m.set(row[j], c, v.clone());
                    }
                }
                m
            })
            .collect();
        ChainComplex::new(0, labels, diffs).expect("validated algebra has d² = 0")
    }

    /// Graded tensor product `A ⊗ B` with labels `a*b`, product
    /// `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'` and the Koszul differential.
    pub fn tensor(&self, other: &DGAlgebra) -> DGAlgebra {
        let m = other.dim();
        let pair = |i: usize, j: usize| i * m + j;
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        for i in 0..self.dim() {
            for j in 0..m {
                labels.push(format!("{}*{}", self.labels[i], other.labels[j]));
                degrees.push(self.degrees[i] + other.degrees[j]);
            }
        }
        let mut mult = HashMap::new();
        for ((a, a2), x) in &self.mult {
            for ((b, b2), y) in &other.mult {
                let s = sign(other.degrees[*b] * self.degrees[*a2]);
                let mut c = Combo::new();
                for (&i, u) in x {
                    for (&j, v) in y {
                        combo_add(&mut c, pair(i, j), &(&s * u * v));
                    }
                }
                if !c.is_empty() {
                    mult.insert((pair(*a, *b), pair(*a2, *b2)), c);
                }
            }
        }
        let mut diff = vec![Combo::new(); self.dim() * m];
        for i in 0..self.dim() {
            for j in 0..m {
                let d = &mut diff[pair(i, j)];
                for (&k, v) in &self.diff[i] {
                    combo_add(d, pair(k, j), v);
                }
                for (&k, v) in &other.diff[j] {
                    combo_add(d, pair(i, k), &(sign(self.degrees[i]) * v));
                }
            }
        }
        DGAlgebra { labels, degrees, unit: pair(self.unit, other.unit), mult, diff }
    }
}

/// Exterior algebra on one generator `t` of degree 1 with `d t = m·1`,
/// a free resolution of `Z/m`.
pub fn koszul_resolution(m: &BigInt) -> Result<DGAlgebra> {
    if *m < BigInt::from(2) {
        return Err(Error::InvalidModulus(format!("the resolution of Z/{m} needs m >= 2")));
    }
    DGAlgebra::new(
        vec![("1".into(), 0), ("t".into(), 1)],
        "1",
        vec![],
        vec![("t".into(), vec![("1".into(), m.clone())])],
    )
}

/// `Z` in degree 0.
pub fn base_ring() -> DGAlgebra {
    DGAlgebra::new(vec![("1".into(), 0)], "1", vec![], vec![]).expect("Z is a DG algebra")
}

/// Map of DG algebras given on basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAMorphism {
    source: DGAlgebra,
    target: DGAlgebra,
    action: Vec<Combo>,
}

impl DGAMorphism {
    /// Checks degree, unit, multiplicativity and compatibility with `d` on
    /// every basis element and pair.
    pub fn new(source: DGAlgebra, target: DGAlgebra, action: Vec<Combo>) -> Result<Self> {
        if action.len() != source.dim() {
            return Err(Error::DimensionMismatch("morphism must be given on every basis element".into()));
        }
        let f = DGAMorphism { source, target, action };
        let (s, t) = (&f.source, &f.target);
        for i in 0..s.dim() {
            if f.action[i].keys().any(|&j| j >= t.dim() || t.degree(j) != s.degree(i)) {
                return Err(Error::NotAChainMap(format!("image of {} has the wrong degree", s.label(i))));
            }
            if f.apply(s.diff(i)) != t.diff_combo(&f.action[i]) {
                return Err(Error::NotAChainMap(format!("f(d {0}) != d f({0})", s.label(i))));
            }
        }
        if f.action[s.unit()] != DGAlgebra::basis_combo(t.unit()) {
            return Err(Error::NotAChainMap("unit is not preserved".into()));
        }
        for a in 0..s.dim() {
            for b in 0..s.dim() {
                if f.apply(&s.product(a, b)) != t.mul_combo(&f.action[a], &f.action[b]) {
                    return Err(Error::NotAChainMap(format!(
                        "f({0}*{1}) != f({0})*f({1})",
                        s.label(a),
                        s.label(b)
                    )));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(a: &DGAlgebra) -> DGAMorphism {
        let action = (0..a.dim()).map(DGAlgebra::basis_combo).collect();
        DGAMorphism { source: a.clone(), target: a.clone(), action }
    }

    pub fn source(&self) -> &DGAlgebra {
        &self.source
    }

    pub fn target(&self) -> &DGAlgebra {
        &self.target
    }

    pub fn image(&self, i: usize) -> &Combo {
        &self.action[i]
    }

    pub fn apply(&self, x: &Combo) -> Combo {
        let mut out = Combo::new();
        for (&i, v) in x {
            combo_add_scaled(&mut out, &self.action[i], v);
        }
        out
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &DGAMorphism) -> Result<DGAMorphism> {
        if self.target != g.source {
            return Err(Error::DimensionMismatch("composed morphisms do not match".into()));
        }
        let action = self.action.iter().map(|c| g.apply(c)).collect();
        Ok(DGAMorphism { source: self.source.clone(), target: g.target.clone(), action })
    }
}

/// Lift of `Z/m -> Z/m'` to the resolutions: `1 ↦ 1`, `t ↦ (m/m')·t'`.
pub fn reduction_map(m: &BigInt, m_prime: &BigInt) -> Result<DGAMorphism> {
    let source = koszul_resolution(m)?;
    let target = koszul_resolution(m_prime)?;
    let (q, r) = m.div_rem(m_prime);
    if !r.is_zero() || q.is_negative() {
        return Err(Error::NotDivisible { divisor: m_prime.to_string(), dividend: m.to_string() });
    }
    let action = vec![DGAlgebra::basis_combo(0), [(1, q)].into_iter().collect()];
    DGAMorphism::new(source, target, action)
}
