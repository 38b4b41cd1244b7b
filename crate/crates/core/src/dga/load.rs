//! TOML form of a DG algebra.
//!
//! ```toml
//! unit = "1"
//!
//! [[basis]]
//! label = "1"
//! degree = 0
//!
//! [[basis]]
//! label = "t"
//! degree = 1
//!
//! [differential]
//! t = { "1" = 4 }
//!
//! [[product]]
//! left = "t"
//! right = "t"
//! result = {}
//! ```
//!
//! Coefficients are integers or decimal strings. Products with the unit may
//! be omitted; any other omitted product is zero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::DGAlgebra;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coef {
    Int(i64),
    Big(String),
}

impl Coef {
    fn value(&self) -> Result<BigInt> {
        match self {
            Coef::Int(v) => Ok(BigInt::from(*v)),
            Coef::Big(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient '{s}'"))),
        }
    }

    fn from_big(v: &BigInt) -> Coef {
        i64::try_from(v).map(Coef::Int).unwrap_or_else(|_| Coef::Big(v.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisEntry {
    label: String,
    degree: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductEntry {
    left: String,
    right: String,
    #[serde(default)]
    result: BTreeMap<String, Coef>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DgaDoc {
    unit: String,
    basis: Vec<BasisEntry>,
    #[serde(default)]
    differential: BTreeMap<String, BTreeMap<String, Coef>>,
    #[serde(default)]
    product: Vec<ProductEntry>,
}

fn terms(m: &BTreeMap<String, Coef>) -> Result<Vec<(String, BigInt)>> {
    m.iter().map(|(l, c)| Ok((l.clone(), c.value()?))).collect()
}

/// Parses and validates an algebra; unknown labels and failed axioms are
/// errors.
pub fn dga_from_toml(text: &str) -> Result<DGAlgebra> {
    let doc: DgaDoc = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let basis = doc.basis.into_iter().map(|b| (b.label, b.degree)).collect();
    let products = doc
        .product
        .iter()
        .map(|p| Ok(((p.left.clone(), p.right.clone()), terms(&p.result)?)))
        .collect::<Result<Vec<_>>>()?;
    let differential =
        doc.differential.iter().map(|(l, m)| Ok((l.clone(), terms(m)?))).collect::<Result<Vec<_>>>()?;
    DGAlgebra::new(basis, &doc.unit, products, differential)
}

pub fn dga_to_toml(a: &DGAlgebra) -> String {
    let name = |i: usize| a.label(i).to_string();
    let combo = |c: &super::Combo| c.iter().map(|(&i, v)| (name(i), Coef::from_big(v))).collect();
    let mut product: Vec<ProductEntry> = Vec::new();
    for x in 0..a.dim() {
        for y in 0..a.dim() {
            let c = a.product(x, y);
            if x != a.unit() && y != a.unit() && !c.is_empty() {
                product.push(ProductEntry { left: name(x), right: name(y), result: combo(&c) });
            }
        }
    }
    let doc = DgaDoc {
        unit: name(a.unit()),
        basis: (0..a.dim()).map(|i| BasisEntry { label: name(i), degree: a.degree(i) }).collect(),
        differential: (0..a.dim())
            .filter(|&i| !a.diff(i).is_empty())
            .map(|i| (name(i), combo(a.diff(i))))
            .collect(),
        product,
    };
    toml::to_string(&doc).expect("algebra serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::koszul_resolution;

    #[test]
    fn round_trip() {
        let a = koszul_resolution(&"100000000000000000000000".parse().unwrap()).unwrap();
        let text = dga_to_toml(&a);
        assert_eq!(dga_from_toml(&text).unwrap(), a);
    }

    #[test]
    fn dual_numbers_from_text() {
        let text = r#"
            unit = "1"
            [[basis]]
            label = "1"
            degree = 0
            [[basis]]
            label = "x"
            degree = 0
        "#;
        let a = dga_from_toml(text).unwrap();
        assert!(a.product(1, 1).is_empty());
    }

    #[test]
    fn unknown_label_in_file() {
        let text = r#"
            unit = "1"
            [[basis]]
            label = "1"
            degree = 0
            [differential]
            t = { "1" = 2 }
        "#;
        assert!(matches!(dga_from_toml(text), Err(Error::InvalidAlgebra(_))));
        assert!(matches!(dga_from_toml("unit = 3"), Err(Error::Parse(_))));
    }
}
