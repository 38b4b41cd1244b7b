//! K-groups of `Z/p^n` in low degrees.
//!
//! The `p`-part is assembled from relative cyclic homology along the tower
//! `Z/p^n -> Z/p^{n-1}` (ideal of square zero), and the prime-to-`p` part is
//! Quillen's `K_{2j-1}(F_p) = Z/(p^j - 1)`. That each extension in the tower
//! stays cyclic is taken as an input and tagged `AXIOM-TC`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cyclic::hc_relative;
use crate::dga::reduction_map;
use crate::error::{Error, Result};
use crate::intlin::{is_prime, AbelianGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Certificate {
    Iso,
    Surjection,
    Unverified,
}

impl Certificate {
    pub fn as_str(self) -> &'static str {
        match self {
            Certificate::Iso => "ISO",
            Certificate::Surjection => "SURJECTION",
            Certificate::Unverified => "UNVERIFIED",
        }
    }
}

/// Degrees where the trace from relative K to relative cyclic homology is an
/// isomorphism (`0 <= i < iso_below`) or onto (`i < surj_below`), for an
/// ideal with `I^m = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeCertificate {
    pub p: u64,
    pub m: u32,
    #[serde(serialize_with = "ratio_string")]
    pub iso_below: BigRational,
    #[serde(serialize_with = "ratio_string")]
    pub surj_below: BigRational,
}

fn ratio_string<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl RangeCertificate {
    pub fn is_iso(&self, i: i64) -> bool {
        i >= 0 && BigRational::from_integer(BigInt::from(i)) < self.iso_below
    }

    pub fn is_surjection(&self, i: i64) -> bool {
        BigRational::from_integer(BigInt::from(i)) < self.surj_below
    }

    pub fn classify(&self, i: i64) -> Certificate {
        if self.is_iso(i) {
            Certificate::Iso
        } else if self.is_surjection(i) {
            Certificate::Surjection
        } else {
            Certificate::Unverified
        }
    }
}

pub fn goodwillie_range(p: u64, m: u32) -> Result<RangeCertificate> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    if m < 2 {
        return Err(Error::InvalidParams(format!("nilpotency degree {m} must be at least 2")));
    }
    let base = BigRational::new(BigInt::from(p), BigInt::from(m - 1));
    Ok(RangeCertificate {
        p,
        m,
        iso_below: &base - BigRational::from_integer(BigInt::from(2)),
        surj_below: &base - BigRational::one(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeK {
    pub p: u64,
    pub n: u32,
    pub degree: i64,
    /// `p`-part of the relative cyclic group one degree down.
    pub group: AbelianGroup,
    /// The relative cyclic group it was read off from.
    pub hc_group: AbelianGroup,
    pub certificate: Certificate,
}

/// Relative `K_i` of `(Z/p^n, p^{n-1}Z/p^n)` through relative `HC_{i-1}`,
/// computed with cyclic chains through `bound`.
pub fn relative_k(p: u64, n: u32, i: i64, bound: i64) -> Result<RelativeK> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!("level n = {n} must be at least 2")));
    }
    if i < 0 {
        return Err(Error::InvalidParams(format!("degree {i} is negative")));
    }
    let certificate = goodwillie_range(p, 2)?.classify(i);
    let hc_group = if i == 0 {
        AbelianGroup::trivial()
    } else {
        let pb = BigInt::from(p);
        let f = reduction_map(&pb.pow(n), &pb.pow(n - 1))?;
        hc_relative(&f, i - 1, bound)?
    };
    let group = hc_group.p_part(&BigInt::from(p));
    Ok(RelativeK { p, n, degree: i, group, hc_group, certificate })
}

fn k_params(p: u64, n: u32, i: i64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    if n < 1 {
        return Err(Error::InvalidParams("level n must be at least 1".into()));
    }
    if i < 1 || i > p as i64 - 3 {
        return Err(Error::OutOfRange(format!("degree {i} is outside 1..={}", p as i64 - 3)));
    }
    Ok(())
}

/// `K_i(Z/p^n)` for `1 <= i <= p - 3`: zero in even degrees and
/// `Z/p^{j(n-1)}(p^j - 1)` in degree `2j - 1`.
pub fn k_group(p: u64, n: u32, i: i64) -> Result<AbelianGroup> {
    k_params(p, n, i)?;
    if i % 2 == 0 {
        return Ok(AbelianGroup::trivial());
    }
    let j = ((i + 1) / 2) as u32;
    let pb = BigInt::from(p);
    let group = AbelianGroup::from_orders(0, vec![pb.pow(j * (n - 1)), pb.pow(j) - 1]);
    if !group.is_cyclic() {
        return Err(Error::InvalidParams(format!("K_{i}(Z/{p}^{n}) came out non-cyclic: {group}")));
    }
    Ok(group)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KEntry {
    pub degree: i64,
    pub group: AbelianGroup,
    pub p_part: AbelianGroup,
    pub prime_to_p: AbelianGroup,
    /// Relative groups used at each step `Z/p^{n'} -> Z/p^{n'-1}`.
    pub tower: Vec<RelativeK>,
    pub provenance: Vec<String>,
    pub matches_closed_form: bool,
}

/// `K_i(Z/p^n)` for `1 <= i <= p - 3`, with the `p`-part rebuilt step by
/// step from relative cyclic homology.
pub fn k_table(p: u64, n: u32) -> Result<Vec<KEntry>> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not prime")));
    }
    if p < 5 {
        return Err(Error::RangeEmpty(format!("1 <= i <= p - 3 is empty for p = {p}")));
    }
    if n < 1 {
        return Err(Error::InvalidParams("level n must be at least 1".into()));
    }
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    for i in 1..=p as i64 - 3 {
        let tower = (2..=n).map(|m| relative_k(p, m, i, i - 1)).collect::<Result<Vec<_>>>()?;
        let p_order: BigInt = tower.iter().map(|r| r.group.order().unwrap_or_default()).product();
        let p_part = if p_order.is_one() { AbelianGroup::trivial() } else { AbelianGroup::cyclic(p_order.clone()) };
        let quillen = if i % 2 == 1 { pb.pow(((i + 1) / 2) as u32) - 1 } else { BigInt::one() };
        let prime_to_p = AbelianGroup::from_orders(0, vec![quillen.clone()]);
        let group = AbelianGroup::from_orders(0, vec![p_order.clone(), quillen.clone()]);
        let mut provenance = vec![format!("K_{i}(F_{p}) = {prime_to_p} (Quillen)")];
        for r in &tower {
            provenance.push(format!(
                "relative HC_{}(Z/{p}^{}, {p}^{}) = {} [{}]",
                i - 1,
                r.n,
                r.n - 1,
                r.hc_group,
                r.certificate.as_str()
            ));
        }
        if n >= 2 && i % 2 == 1 {
            provenance.push("AXIOM-TC: each extension along the tower is cyclic".into());
        }
        let coprime = p_order.gcd(&quillen).is_one() && !p_order.is_negative();
        let matches_closed_form = coprime && k_group(p, n, i)? == group;
        out.push(KEntry { degree: i, group, p_part, prime_to_p, tower, provenance, matches_closed_form });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
