use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Smith, SparseIntMatrix};
use crate::error::{Error, Result};

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with
/// `2 <= d_1 | d_2 | ... | d_k`.
///
/// Factors equal to one are dropped, so structural equality is group
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    free_rank: usize,
    #[serde(with = "decimal_list")]
    invariant_factors: Vec<BigInt>,
}

impl AbelianGroup {
    /// Validating constructor; the factor list must already be canonical.
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self> {
        if let Some(d) = invariant_factors.iter().find(|d| **d < BigInt::from(2)) {
            return Err(Error::InvalidParams(format!("invariant factor {d} is < 2")));
        }
        if let Some(w) = invariant_factors.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidParams(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(AbelianGroup { free_rank, invariant_factors })
    }

    /// Canonical form of `Z^free_rank ⊕ ⊕ Z/orders[i]`. Orders may be arbitrary
    /// (units are dropped, zeros become free summands, signs are ignored).
    pub fn from_orders(free_rank: usize, orders: Vec<BigInt>) -> Self {
        let mut free = free_rank;
        let mut finite: Vec<BigInt> = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                free += 1;
            } else if !o.is_one() {
                finite.push(o);
            }
        }
        let already_chain = finite.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        let invariant_factors = if already_chain {
            finite
        } else {
            let n = finite.len();
            let snf = Smith::of(&SparseIntMatrix::diagonal(n, n, &finite));
            snf.nonzero_diagonal().iter().filter(|d| !d.is_one()).cloned().collect()
        };
        AbelianGroup { free_rank: free, invariant_factors }
    }

    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    /// `Z/n`; `n = 0` gives `Z`.
    pub fn cyclic(n: BigInt) -> Self {
        Self::from_orders(0, vec![n])
    }

    pub fn elementary(p: &BigInt, count: usize) -> Self {
        Self::from_orders(0, vec![p.clone(); count])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.invariant_factors.len() <= 1
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Number of cyclic summands in the canonical decomposition.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// The `p`-primary part of the torsion, together with the free part.
    pub fn p_part(&self, p: &BigInt) -> AbelianGroup {
        let orders = self
            .invariant_factors
            .iter()
            .map(|d| {
                let mut d = d.clone();
                let mut pp = BigInt::one();
                while d.is_multiple_of(p) {
                    d /= p;
                    pp *= p;
                }
                pp
            })
            .collect();
        AbelianGroup::from_orders(self.free_rank, orders)
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        AbelianGroup::from_orders(self.free_rank + other.free_rank, orders)
    }

    /// `self ⊗ Z/q`.
    pub fn tensor_mod(&self, q: &BigInt) -> AbelianGroup {
        let mut orders = vec![q.clone(); self.free_rank];
        orders.extend(self.invariant_factors.iter().map(|d| d.gcd(q)));
        AbelianGroup::from_orders(0, orders)
    }

    /// `Tor(self, Z/q)`.
    pub fn tor_mod(&self, q: &BigInt) -> AbelianGroup {
        AbelianGroup::from_orders(0, self.invariant_factors.iter().map(|d| d.gcd(q)).collect())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

mod decimal_list {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| s.parse::<BigInt>().map_err(D::Error::custom)).collect()
    }
}
