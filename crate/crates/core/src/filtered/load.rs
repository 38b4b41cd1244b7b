//! TOML form of a filtered ring.
//!
//! ```toml
//! unit = [1]
//!
//! [[piece]]
//! index = 0
//! orders = [9]
//!
//! [[piece]]
//! index = -1
//! orders = [3]
//!
//! [[transition]]
//! from = -1
//! matrix = [[3]]
//!
//! [[product]]
//! left = -1
//! right = 0
//! matrix = [[1]]
//! ```
//!
//! Each piece lists the order of every generator (`0` for a free one).
//! Matrices are row lists acting on generator coordinates; a product matrix
//! acts on `piece(left) ⊗ piece(right)` with generator `(a, b)` at index
//! `a * n_right + b`. Omitted products are zero. Pieces must cover `[lo, 0]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{FilteredAbelianGroup, FilteredRing};
use crate::error::{Error, Result};
use crate::intlin::lattice::Presentation;
use crate::intlin::SparseIntMatrix;

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum Coef {
    Int(i64),
    Big(String),
}

impl Coef {
    fn value(&self) -> Result<BigInt> {
        match self {
            Coef::Int(v) => Ok(BigInt::from(*v)),
            Coef::Big(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad integer '{s}'"))),
        }
    }

    fn from_big(v: &BigInt) -> Coef {
        i64::try_from(v).map(Coef::Int).unwrap_or_else(|_| Coef::Big(v.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceEntry {
    index: i64,
    orders: Vec<Coef>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionEntry {
    from: i64,
    matrix: Vec<Vec<Coef>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductEntry {
    left: i64,
    right: i64,
    matrix: Vec<Vec<Coef>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilteredDoc {
    unit: Vec<Coef>,
    piece: Vec<PieceEntry>,
    #[serde(default)]
    transition: Vec<TransitionEntry>,
    #[serde(default)]
    product: Vec<ProductEntry>,
}

fn matrix(rows: &[Vec<Coef>], shape: (usize, usize), what: &str) -> Result<SparseIntMatrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::Parse(format!("{what} must be {} x {}", shape.0, shape.1)));
    }
    let dense = rows.iter().map(|r| r.iter().map(Coef::value).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(SparseIntMatrix::from_dense(shape.0, shape.1, &dense))
}

fn rows_of(m: &SparseIntMatrix) -> Vec<Vec<Coef>> {
    m.to_dense().iter().map(|r| r.iter().map(Coef::from_big).collect()).collect()
}

fn orders_of(p: &Presentation) -> Option<Vec<BigInt>> {
    let mut orders = vec![BigInt::zero(); p.generators()];
    for col in p.relations().columns() {
        let mut nz = col.iter().enumerate().filter(|(_, v)| !v.is_zero());
        match (nz.next(), nz.next()) {
            (Some((r, v)), None) => orders[r] = orders[r].gcd(v),
            (None, _) => {}
            _ => return None,
        }
    }
    Some(orders)
}

pub fn filtered_ring_from_toml(text: &str) -> Result<FilteredRing> {
    let doc: FilteredDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut pieces: BTreeMap<i64, Presentation> = BTreeMap::new();
    for p in &doc.piece {
        if p.index > 0 {
            return Err(Error::Parse(format!("piece index {} is above 0", p.index)));
        }
        let orders = p.orders.iter().map(Coef::value).collect::<Result<Vec<_>>>()?;
        if pieces.insert(p.index, Presentation::with_orders(&orders)).is_some() {
            return Err(Error::Parse(format!("piece {} listed twice", p.index)));
        }
    }
    let lo = *pieces.keys().next().ok_or_else(|| Error::Parse("no pieces".into()))?;
    if pieces.len() as i64 != 1 - lo {
        return Err(Error::Parse(format!("pieces must cover [{lo}, 0] without gaps")));
    }
    let gens = |s: i64| pieces[&s].generators();
    let mut transitions: BTreeMap<i64, SparseIntMatrix> = BTreeMap::new();
    for t in &doc.transition {
        if t.from < lo || t.from >= 0 {
            return Err(Error::Parse(format!("transition from {} outside [{lo}, -1]", t.from)));
        }
        let m = matrix(&t.matrix, (gens(t.from + 1), gens(t.from)), &format!("transition from {}", t.from))?;
        transitions.insert(t.from, m);
    }
    let transitions = (lo..0)
        .map(|s| transitions.remove(&s).ok_or_else(|| Error::Parse(format!("missing transition from {s}"))))
        .collect::<Result<Vec<_>>>()?;
    let group = FilteredAbelianGroup::new(lo, pieces.into_values().collect(), transitions)
        .map_err(|e| Error::InvalidAlgebra(e.to_string()))?;
    let mut products = BTreeMap::new();
    for p in &doc.product {
        if p.left < lo || p.right < lo || p.left > 0 || p.right > 0 {
            return Err(Error::Parse(format!("product ({}, {}) outside the window", p.left, p.right)));
        }
        let shape = (group.generators(p.left + p.right), group.generators(p.left) * group.generators(p.right));
        let m = matrix(&p.matrix, shape, &format!("product ({}, {})", p.left, p.right))?;
        products.insert((p.left, p.right), m);
    }
    let unit = doc.unit.iter().map(Coef::value).collect::<Result<Vec<_>>>()?;
    FilteredRing::new(group, products, unit).map_err(|e| match e {
        Error::DimensionMismatch(m) => Error::Parse(m),
        other => other,
    })
}

/// Serializes a ring whose relations each involve a single generator.
pub fn filtered_ring_to_toml(r: &FilteredRing) -> Result<String> {
    let g = r.group();
    let mut piece = Vec::new();
    for s in g.lo()..=0 {
        let orders = orders_of(&g.piece(s))
            .ok_or_else(|| Error::InvalidParams(format!("piece {s} is not given by generator orders")))?;
        piece.push(PieceEntry { index: s, orders: orders.iter().map(Coef::from_big).collect() });
    }
    let transition = (g.lo()..0).map(|s| TransitionEntry { from: s, matrix: rows_of(&g.transition(s)) }).collect();
    let mut product = Vec::new();
    for i in g.lo()..=0 {
        for j in g.lo()..=0 {
            let m = r.product(i, j);
            if !m.is_zero() {
                product.push(ProductEntry { left: i, right: j, matrix: rows_of(&m) });
            }
        }
    }
    let doc = FilteredDoc { unit: r.unit_vector().iter().map(Coef::from_big).collect(), piece, transition, product };
    toml::to_string(&doc).map_err(|e| Error::Parse(e.to_string()))
}
