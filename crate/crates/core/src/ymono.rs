//! Monomials in the variables `Y_{i, a q^s}` on a single spectral lattice.
//!
//! The base point `a` is formal, so a variable is identified by the pair
//! `(node, offset)`. A monomial keeps its factors sorted node-major, then by
//! offset, with no zero exponents; this ordering is the canonical one used for
//! text, JSON and hashing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::{integral_root_coordinates, CartanData, Weight};
use crate::error::{Error, Result};

/// One factor `Y_{node, offset}^exp`.
pub type Factor = (u32, i64, i64);

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Factor>", into = "Vec<Factor>")]
pub struct YMonomial {
    factors: Vec<Factor>,
}

impl TryFrom<Vec<Factor>> for YMonomial {
    type Error = Error;

    fn try_from(v: Vec<Factor>) -> Result<Self> {
        YMonomial::from_factors(v)
    }
}

impl From<YMonomial> for Vec<Factor> {
    fn from(m: YMonomial) -> Self {
        m.factors
    }
}

impl YMonomial {
    pub fn one() -> Self {
        YMonomial { factors: Vec::new() }
    }

    /// The single variable `Y_{node, offset}`.
    pub fn y(node: u32, offset: i64) -> Self {
        YMonomial { factors: vec![(node, offset, 1)] }
    }

    /// Builds a monomial from arbitrary factors, merging repeats and dropping zeros.
    pub fn from_factors(factors: impl IntoIterator<Item = Factor>) -> Result<Self> {
        let mut map: BTreeMap<(u32, i64), i64> = BTreeMap::new();
        for (i, s, e) in factors {
            let slot = map.entry((i, s)).or_insert(0);
            *slot = slot.checked_add(e).ok_or(Error::Overflow)?;
        }
        Ok(YMonomial { factors: map.into_iter().filter(|&(_, e)| e != 0).map(|((i, s), e)| (i, s, e)).collect() })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, node: u32, offset: i64) -> i64 {
        self.factors.binary_search_by(|&(i, s, _)| (i, s).cmp(&(node, offset))).map(|idx| self.factors[idx].2).unwrap_or(0)
    }

    pub fn checked_mul(&self, other: &YMonomial) -> Result<YMonomial> {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            let (ka, kb) = ((a[x].0, a[x].1), (b[y].0, b[y].1));
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[x].2.checked_add(b[y].2).ok_or(Error::Overflow)?;
                    if e != 0 {
                        out.push((ka.0, ka.1, e));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        Ok(YMonomial { factors: out })
    }

    pub fn checked_pow(&self, e: i64) -> Result<YMonomial> {
        if e == 0 {
            return Ok(YMonomial::one());
        }
        let factors =
            self.factors.iter().map(|&(i, s, x)| x.checked_mul(e).map(|v| (i, s, v)).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        Ok(YMonomial { factors })
    }

    pub fn inverse(&self) -> Result<YMonomial> {
        self.checked_pow(-1)
    }

    /// `self * other^{-1}`.
    pub fn checked_div(&self, other: &YMonomial) -> Result<YMonomial> {
        self.checked_mul(&other.inverse()?)
    }

    /// Shifts every spectral offset by `ds` (the substitution `a -> a q^ds`).
    pub fn translate(&self, ds: i64) -> YMonomial {
        YMonomial { factors: self.factors.iter().map(|&(i, s, e)| (i, s + ds, e)).collect() }
    }

    /// `(offset, exponent)` pairs of the `node`-part.
    pub fn node_part(&self, node: u32) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.factors.iter().filter(move |f| f.0 == node).map(|f| (f.1, f.2))
    }

    /// The monomial restricted to the nodes not equal to `node`.
    pub fn without_node(&self, node: u32) -> YMonomial {
        YMonomial { factors: self.factors.iter().copied().filter(|f| f.0 != node).collect() }
    }

    pub fn max_offset(&self) -> Option<i64> {
        self.factors.iter().map(|f| f.1).max()
    }

    pub fn min_offset(&self) -> Option<i64> {
        self.factors.iter().map(|f| f.1).min()
    }

    pub fn is_dominant(&self) -> bool {
        self.factors.iter().all(|f| f.2 >= 0)
    }

    pub fn is_node_dominant(&self, node: u32) -> bool {
        self.factors.iter().all(|f| f.0 != node || f.2 >= 0)
    }

    /// Exponents, offsets and node numbers fit in the supplied rank.
    pub fn check_rank(&self, cd: &CartanData) -> Result<()> {
        for &(i, _, _) in &self.factors {
            cd.check_node(i as usize)?;
        }
        Ok(())
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (idx, &(i, s, e)) in self.factors.iter().enumerate() {
            if idx > 0 {
                write!(f, " * ")?;
            }
            write!(f, "Y[{i},{s}]")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for YMonomial {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "monomial", input: input.to_string() };
        let text = input.trim();
        if text == "1" {
            return Ok(YMonomial::one());
        }
        let mut factors = Vec::new();
        for part in text.split('*') {
            let part = part.trim();
            let rest = part.strip_prefix("Y[").ok_or_else(bad)?;
            let (inside, tail) = rest.split_once(']').ok_or_else(bad)?;
            let (i, s) = inside.split_once(',').ok_or_else(bad)?;
            let i: u32 = i.trim().parse().map_err(|_| bad())?;
            let s: i64 = s.trim().parse().map_err(|_| bad())?;
            let e: i64 = match tail.trim() {
                "" => 1,
                t => t.strip_prefix('^').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?,
            };
            factors.push((i, s, e));
        }
        YMonomial::from_factors(factors)
    }
}

/// Exponents of a product `prod A_{i,s}^{-v_{i,s}}`, keyed by `(node, offset)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AVector(BTreeMap<(u32, i64), u64>);

impl AVector {
    pub fn new() -> Self {
        AVector::default()
    }

    pub fn add(&mut self, node: u32, offset: i64, count: u64) {
        if count > 0 {
            *self.0.entry((node, offset)).or_insert(0) += count;
        }
    }

    pub fn get(&self, node: u32, offset: i64) -> u64 {
        self.0.get(&(node, offset)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, i64, u64)> + '_ {
        self.0.iter().map(|(&(i, s), &v)| (i, s, v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of `A^{-1}` factors.
    pub fn depth(&self) -> u64 {
        self.0.values().sum()
    }

    /// `prod A_{i,s}^{-v_{i,s}}` as a Y-monomial.
    pub fn to_monomial(&self, cd: &CartanData) -> Result<YMonomial> {
        let mut m = YMonomial::one();
        for (&(i, s), &v) in &self.0 {
            let a = a_monomial(cd, i as usize, s)?;
            m = m.checked_mul(&a.checked_pow(-(v as i64))?)?;
        }
        Ok(m)
    }
}

/// `A_{i,s}` on the lattice.
pub fn a_monomial(cd: &CartanData, i: usize, s: i64) -> Result<YMonomial> {
    cd.check_node(i)?;
    let ri = cd.r(i);
    let mut factors: Vec<Factor> = vec![(i as u32, s - ri, 1), (i as u32, s + ri, 1)];
    for j in cd.nodes() {
        let offsets: &[i64] = match cd.c(j, i) {
            -1 => &[0],
            -2 => &[-1, 1],
            -3 => &[-2, 0, 2],
            _ => &[],
        };
        factors.extend(offsets.iter().map(|&d| (j as u32, s + d, -1)));
    }
    YMonomial::from_factors(factors)
}

/// `A_{i,s}^{-1}`.
pub fn a_inverse(cd: &CartanData, i: usize, s: i64) -> Result<YMonomial> {
    a_monomial(cd, i, s)?.inverse()
}

/// Highest monomial `Y_{i,s} Y_{i,s+2r_i} ... Y_{i,s+2r_i(k-1)}` of the KR module `W^{(i)}_{k,s}`.
pub fn kr_monomial(cd: &CartanData, i: usize, s: i64, k: i64) -> Result<YMonomial> {
    cd.check_node(i)?;
    if k < 0 {
        return Err(Error::NegativeLength(k));
    }
    let step = 2 * cd.r(i);
    Ok(YMonomial { factors: (0..k).map(|t| (i as u32, s + step * t, 1)).collect() })
}

pub fn is_dominant(m: &YMonomial) -> bool {
    m.is_dominant()
}

/// `m` has nonnegative exponents at every node of `nodes`.
pub fn is_j_dominant(m: &YMonomial, nodes: &[usize]) -> bool {
    nodes.iter().all(|&j| m.is_node_dominant(j as u32))
}

/// All nonzero exponents at the largest occurring offset are negative.
pub fn is_right_negative(m: &YMonomial) -> Result<bool> {
    let top = m.max_offset().ok_or(Error::IdentityMonomial)?;
    Ok(m.factors().iter().filter(|f| f.1 == top).all(|f| f.2 < 0))
}

/// `omega(m) = sum_{i,s} u_{i,s}(m) Lambda_i`.
pub fn omega(cd: &CartanData, m: &YMonomial) -> Weight {
    let mut w = Weight::zero(cd.rank());
    for &(i, _, e) in m.factors() {
        w.0[i as usize - 1] += e;
    }
    w
}

/// Finds `v >= 0` with `m = m_prime * prod A_{i,s}^{-v_{i,s}}`, i.e. decides `m <= m_prime`.
///
/// The top spectral offset of `A_{i,s}` is `s + r_i` and occurs only at node `i`,
/// so the exponents of the ratio at its largest offset determine the `A` factors
/// there; peeling proceeds downward until the ratio is 1. Returns `Ok(None)` when
/// the ratio is not a product of `A`'s with nonnegative exponents.
pub fn factor_over_a(cd: &CartanData, m: &YMonomial, m_prime: &YMonomial) -> Result<Option<AVector>> {
    let mut ratio = m_prime.checked_div(m)?;
    let Some(root) = integral_root_coordinates(cd, &omega(cd, &ratio)) else {
        return Ok(None);
    };
    if root.iter().any(|&c| c < 0) {
        return Ok(None);
    }
    let budget: i64 = root.iter().sum();
    let mut used = 0i64;
    let mut v = AVector::new();
    while let Some(top) = ratio.max_offset() {
        let tops: Vec<Factor> = ratio.factors().iter().copied().filter(|f| f.1 == top).collect();
        for (i, s, e) in tops {
            if e < 0 {
                return Ok(None);
            }
            used += e;
            if used > budget {
                return Ok(None);
            }
            let c = s - cd.r(i as usize);
            v.add(i, c, e as u64);
            ratio = ratio.checked_mul(&a_monomial(cd, i as usize, c)?.checked_pow(-e)?)?;
        }
    }
    Ok(Some(v))
}

/// `m <= m_prime` in the `A`-order.
pub fn is_lower(cd: &CartanData, m: &YMonomial, m_prime: &YMonomial) -> Result<bool> {
    Ok(factor_over_a(cd, m, m_prime)?.is_some())
}
