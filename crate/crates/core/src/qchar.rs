//! Laurent polynomials in the `Y` variables and q-characters.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ymono::YMonomial;

/// A sparse Laurent polynomial with integer coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: FxHashMap<YMonomial, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(m: YMonomial, c: i64) -> Self {
        let mut p = LaurentPoly::zero();
        if c != 0 {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(YMonomial::one(), 1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &YMonomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&YMonomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Terms in canonical monomial order.
    pub fn sorted_terms(&self) -> Vec<(YMonomial, i64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, &c)| (m.clone(), c)).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn add_term(&mut self, m: YMonomial, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let v = e.get().checked_add(c).ok_or(Error::Overflow)?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &LaurentPoly, scale: i64) -> Result<()> {
        for (m, &c) in &other.terms {
            self.add_term(m.clone(), c.checked_mul(scale).ok_or(Error::Overflow)?)?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = self.clone();
        out.add_scaled(other, 1)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out: FxHashMap<YMonomial, i64> = FxHashMap::default();
        out.reserve(large.len());
        for (a, &ca) in &small.terms {
            for (b, &cb) in &large.terms {
                let m = a.checked_mul(b)?;
                let c = ca.checked_mul(cb).ok_or(Error::Overflow)?;
                let slot = out.entry(m).or_insert(0);
                *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(LaurentPoly { terms: out })
    }

    /// Multiplies every term by the monomial `m`.
    pub fn shift_by(&self, m: &YMonomial) -> Result<LaurentPoly> {
        let mut terms = FxHashMap::default();
        terms.reserve(self.len());
        for (a, &c) in &self.terms {
            terms.insert(a.checked_mul(m)?, c);
        }
        Ok(LaurentPoly { terms })
    }

    pub fn translate(&self, ds: i64) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, &c)| (m.translate(ds), c)).collect() }
    }

    /// Dominant monomials with their coefficients, in canonical order.
    pub fn dominant_terms(&self) -> Vec<(YMonomial, i64)> {
        let mut v: Vec<_> = self.terms.iter().filter(|(m, _)| m.is_dominant()).map(|(m, &c)| (m.clone(), c)).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    pub fn retain(&mut self, f: impl FnMut(&YMonomial, &mut i64) -> bool) {
        self.terms.retain(f);
    }
}

impl FromIterator<(YMonomial, i64)> for LaurentPoly {
    fn from_iter<T: IntoIterator<Item = (YMonomial, i64)>>(iter: T) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c).expect("coefficient overflow");
        }
        p
    }
}

/// The q-character of a module with a distinguished highest monomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QCharacter {
    highest: YMonomial,
    terms: BTreeMap<YMonomial, u64>,
}

impl QCharacter {
    /// The character `{1: 1}` of the trivial module.
    pub fn trivial() -> Self {
        QCharacter::single(YMonomial::one())
    }

    pub fn single(m: YMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m.clone(), 1);
        QCharacter { highest: m, terms }
    }

    /// Builds a character; zero multiplicities are dropped and `highest` must occur.
    pub fn from_terms(highest: YMonomial, terms: impl IntoIterator<Item = (YMonomial, u64)>) -> Result<Self> {
        let mut map: BTreeMap<YMonomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            if c > 0 {
                let slot = map.entry(m).or_insert(0);
                *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
            }
        }
        if !map.contains_key(&highest) {
            return Err(Error::Inconsistent { monomial: highest.to_string(), detail: "highest monomial missing from term list".into() });
        }
        Ok(QCharacter { highest, terms: map })
    }

    /// Converts a polynomial with nonnegative coefficients.
    pub fn from_poly(highest: YMonomial, poly: &LaurentPoly) -> Result<Self> {
        let mut terms = Vec::with_capacity(poly.len());
        for (m, c) in poly.iter() {
            if c < 0 {
                return Err(Error::Inconsistent { monomial: m.to_string(), detail: format!("negative multiplicity {c}") });
            }
            terms.push((m.clone(), c as u64));
        }
        QCharacter::from_terms(highest, terms)
    }

    pub fn highest(&self) -> &YMonomial {
        &self.highest
    }

    pub fn terms(&self) -> &BTreeMap<YMonomial, u64> {
        &self.terms
    }

    pub fn multiplicity(&self, m: &YMonomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Number of distinct monomials.
    pub fn monomial_count(&self) -> usize {
        self.terms.len()
    }

    /// Sum of the multiplicities.
    pub fn dimension(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.terms.reserve(self.terms.len());
        for (m, &c) in &self.terms {
            p.terms.insert(m.clone(), c as i64);
        }
        p
    }

    pub fn translate(&self, ds: i64) -> QCharacter {
        QCharacter { highest: self.highest.translate(ds), terms: self.terms.iter().map(|(m, &c)| (m.translate(ds), c)).collect() }
    }

    pub fn dominant_monomials(&self) -> Vec<(YMonomial, u64)> {
        dominant_monomials(self)
    }

    pub fn is_special(&self) -> bool {
        is_special(self)
    }
}

pub fn dominant_monomials(chi: &QCharacter) -> Vec<(YMonomial, u64)> {
    chi.terms.iter().filter(|(m, _)| m.is_dominant()).map(|(m, &c)| (m.clone(), c)).collect()
}

/// Exactly one dominant monomial, of multiplicity 1, equal to the highest one.
pub fn is_special(chi: &QCharacter) -> bool {
    let dom = dominant_monomials(chi);
    dom.len() == 1 && dom[0].1 == 1 && dom[0].0 == chi.highest
}

/// Product of q-characters (tensor product of modules).
pub fn multiply(a: &QCharacter, b: &QCharacter) -> Result<QCharacter> {
    let (small, large) = if a.terms.len() <= b.terms.len() { (a, b) } else { (b, a) };
    let mut acc: FxHashMap<YMonomial, u64> = FxHashMap::default();
    acc.reserve(large.terms.len());
    for (x, &cx) in &small.terms {
        for (y, &cy) in &large.terms {
            let m = x.checked_mul(y)?;
            let c = cx.checked_mul(cy).ok_or(Error::Overflow)?;
            let slot = acc.entry(m).or_insert(0);
            *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
        }
    }
    QCharacter::from_terms(a.highest.checked_mul(&b.highest)?, acc)
}

/// Product of a list of characters; the empty product is trivial.
pub fn multiply_all<'a>(chars: impl IntoIterator<Item = &'a QCharacter>) -> Result<QCharacter> {
    let mut acc = QCharacter::trivial();
    for c in chars {
        acc = multiply(&acc, c)?;
    }
    Ok(acc)
}
