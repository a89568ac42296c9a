//! Ordinary characters `Z[e^w]`, weights in fundamental-weight coordinates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cartan::{integral_root_coordinates, simple_reflection, CartanData, Weight};
use crate::error::{Error, Result};
use crate::qchar::{LaurentPoly, QCharacter};
use crate::ymono::omega;

/// A finite sum of `c * e^w`. Zero coefficients are never stored.
///
/// Serializes as a list of `[[coords...], coeff]` in weight order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Weight, i64)>", into = "Vec<(Weight, i64)>")]
pub struct Character {
    terms: BTreeMap<Weight, i64>,
}

impl TryFrom<Vec<(Weight, i64)>> for Character {
    type Error = Error;

    fn try_from(v: Vec<(Weight, i64)>) -> Result<Self> {
        let mut chi = Character::zero();
        for (w, c) in v {
            chi.add_term(w, c)?;
        }
        Ok(chi)
    }
}

impl From<Character> for Vec<(Weight, i64)> {
    fn from(c: Character) -> Self {
        c.terms.into_iter().collect()
    }
}

impl Character {
    pub fn zero() -> Self {
        Character::default()
    }

    pub fn monomial(w: Weight, c: i64) -> Self {
        let mut chi = Character::zero();
        if c != 0 {
            chi.terms.insert(w, c);
        }
        chi
    }

    /// `e^0`.
    pub fn one(rank: usize) -> Self {
        Character::monomial(Weight::zero(rank), 1)
    }

    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Sum of all coefficients (the dimension, for module characters).
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add_term(&mut self, w: Weight, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(w.clone()).or_insert(0);
        *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
        if *slot == 0 {
            self.terms.remove(&w);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Character) -> Result<Character> {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Character) -> Result<Character> {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c.checked_neg().ok_or(Error::Overflow)?)?;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Character) -> Result<Character> {
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let slot = acc.entry(a + b).or_insert(0);
                *slot = slot.checked_add(ca.checked_mul(cb).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(Character { terms: acc })
    }

    pub fn checked_pow(&self, rank: usize, e: u64) -> Result<Character> {
        let mut acc = Character::one(rank);
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplies by `e^{-by}`.
    pub fn normalize(&self, by: &Weight) -> Character {
        Character { terms: self.terms.iter().map(|(w, &c)| (w - by, c)).collect() }
    }

    /// Dominant weights with their coefficients.
    pub fn dominant_part(&self) -> Vec<(Weight, i64)> {
        self.terms.iter().filter(|(w, _)| w.is_dominant()).map(|(w, &c)| (w.clone(), c)).collect()
    }
}

/// `beta(chi_q)`: sends each monomial `m` to `e^{omega(m)}`.
pub fn restrict(cd: &CartanData, chi: &QCharacter) -> Character {
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (m, &c) in chi.terms() {
        *out.entry(omega(cd, m)).or_insert(0) += c as i64;
    }
    Character { terms: out }
}

pub fn restrict_poly(cd: &CartanData, p: &LaurentPoly) -> Character {
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (m, c) in p.iter() {
        *out.entry(omega(cd, m)).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    Character { terms: out }
}

pub fn normalize(chi: &Character, by: &Weight) -> Character {
    chi.normalize(by)
}

/// `prod_{alpha > 0} (1 - e^{-alpha})`.
pub fn delta_product(cd: &CartanData) -> Character {
    let mut acc = Character::one(cd.rank());
    for alpha in cd.pos_roots_weights() {
        let mut f = Character::one(cd.rank());
        f.add_term(-&alpha, -1).expect("single term");
        acc = acc.checked_mul(&f).expect("delta product fits in i64");
    }
    acc
}

/// `Q+`-degree of `-w`, i.e. the sum of root coordinates of `-w`.
pub fn degree(cd: &CartanData, w: &Weight) -> Result<i64> {
    match integral_root_coordinates(cd, w) {
        Some(c) if c.iter().all(|&x| x <= 0) => Ok(-c.iter().sum::<i64>()),
        _ => Err(Error::NotInRootLattice(w.to_string())),
    }
}

/// Keeps the terms of degree `<= d`; every weight must lie in `-Q+`.
pub fn truncate(cd: &CartanData, chi: &Character, d: u32) -> Result<Character> {
    let mut out = Character::zero();
    for (w, &c) in &chi.terms {
        if degree(cd, w)? <= i64::from(d) {
            out.terms.insert(w.clone(), c);
        }
    }
    Ok(out)
}

/// Product of two `-Q+`-supported characters, dropping terms of degree `> d` early.
pub fn mul_truncated(cd: &CartanData, a: &Character, b: &Character, d: u32) -> Result<Character> {
    let graded = |chi: &'_ Character| -> Result<Vec<(Weight, i64, i64)>> {
        let mut v = Vec::new();
        for (w, &c) in &chi.terms {
            let g = degree(cd, w)?;
            if g <= i64::from(d) {
                v.push((w.clone(), c, g));
            }
        }
        Ok(v)
    };
    let (da, db) = (graded(a)?, graded(b)?);
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (wa, ca, ga) in &da {
        for (wb, cb, gb) in &db {
            if ga + gb <= i64::from(d) {
                let slot = acc.entry(wa + wb).or_insert(0);
                *slot = slot.checked_add(ca.checked_mul(*cb).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
    }
    acc.retain(|_, c| *c != 0);
    Ok(Character { terms: acc })
}

/// Fixed by every simple reflection.
pub fn is_weyl_invariant(cd: &CartanData, chi: &Character) -> bool {
    cd.nodes().all(|i| chi.terms.iter().all(|(w, &c)| simple_reflection(cd, i, w).map(|v| chi.coefficient(&v) == c).unwrap_or(false)))
}
