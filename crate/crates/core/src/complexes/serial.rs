//! JSON form of a chain complex: degrees, basis labels and sparse
//! differentials as `(row, col, "value")` triples. Values are decimal strings
//! so arbitrary-precision entries survive unchanged.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{ChainComplex, Label};
use crate::error::{Error, Result};
use crate::intlin::SparseIntMatrix;

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    min_degree: i64,
    max_degree: i64,
    bases: Vec<Vec<Label>>,
    differentials: Vec<MatrixDoc>,
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    degree: i64,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

pub fn complex_to_json(c: &ChainComplex) -> String {
    let doc = ComplexDoc {
        min_degree: c.min_degree(),
        max_degree: c.max_degree(),
        bases: (c.min_degree()..=c.max_degree()).map(|n| c.basis(n).to_vec()).collect(),
        differentials: (c.min_degree() + 1..=c.max_degree())
            .map(|n| {
                let d = c.differential(n);
                MatrixDoc {
                    degree: n,
                    rows: d.rows(),
                    cols: d.cols(),
                    entries: d.entries().map(|(r, c, v)| (r, c, v.to_string())).collect(),
                }
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("complex serializes")
}

pub fn complex_from_json(text: &str) -> Result<ChainComplex> {
    let doc: ComplexDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.max_degree - doc.min_degree + 1 != doc.bases.len() as i64 {
        return Err(Error::Parse("degree range does not match the number of bases".into()));
    }
    let mut diffs = Vec::new();
    for (k, m) in doc.differentials.into_iter().enumerate() {
        if m.degree != doc.min_degree + k as i64 + 1 {
            return Err(Error::Parse(format!("differentials out of order at degree {}", m.degree)));
        }
        let triples = m
            .entries
            .into_iter()
            .map(|(r, c, v)| {
                v.parse::<BigInt>().map(|v| (r, c, v)).map_err(|e| Error::Parse(format!("{v}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mat = SparseIntMatrix::from_triples(m.rows, m.cols, triples)
            .map_err(|e| Error::Parse(e.to_string()))?;
        diffs.push(mat);
    }
    ChainComplex::new(doc.min_degree, doc.bases, diffs)
}
