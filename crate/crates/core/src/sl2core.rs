//! Rank-one machinery: normal writings, sl2 KR q-characters, the lifted
//! characters `L_i(m)` and the single-node decomposition of a q-character.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use rustc_hash::FxHashMap;

use crate::cartan::{CartanData, Rational};
use crate::error::{Error, Result};
use crate::qchar::{LaurentPoly, QCharacter};
use crate::ymono::{a_inverse, omega, YMonomial};

/// A string `Y_s Y_{s+2r} ... Y_{s+2r(k-1)}` on one node; the node and `r` come from context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2String {
    pub start: i64,
    pub length: u32,
}

impl Sl2String {
    pub fn new(start: i64, length: u32) -> Self {
        assert!(length >= 1, "strings have positive length");
        Sl2String { start, length }
    }

    pub fn offsets(&self, r: i64) -> impl Iterator<Item = i64> {
        let (start, len) = (self.start, self.length as i64);
        (0..len).map(move |t| start + 2 * r * t)
    }

    /// Largest offset covered by the string.
    pub fn end(&self, r: i64) -> i64 {
        self.start + 2 * r * (self.length as i64 - 1)
    }

    /// Offsets `c` of the rank-one `A_c^{-1}` factors, from the top of the string downward.
    pub fn a_offsets_descending(&self, r: i64) -> impl Iterator<Item = i64> {
        let (start, len) = (self.start, self.length as i64);
        (1..=len).rev().map(move |t| start + r * (2 * t - 1))
    }
}

/// Two strings on the same node are in special position when the exponent-wise
/// maximum is a strictly larger string.
pub fn in_special_position(a: &Sl2String, b: &Sl2String, r: i64) -> bool {
    let step = 2 * r;
    if (a.start - b.start).rem_euclid(step) != 0 {
        return false;
    }
    let (a0, a1, b0, b1) = (a.start, a.end(r), b.start, b.end(r));
    let union_is_string = a0.max(b0) <= a1.min(b1) + step;
    let nested = (a0 <= b0 && b1 <= a1) || (b0 <= a0 && a1 <= b1);
    union_is_string && !nested
}

/// Normal writing of a dominant single-node monomial given as `offset -> multiplicity`.
///
/// Level decomposition: for each threshold `l`, the maximal runs (step `2r`) of
/// offsets with multiplicity at least `l`. Congruence classes modulo `2r` are
/// handled independently.
pub fn normal_writing(mu: &BTreeMap<i64, i64>, r: i64) -> Result<Vec<Sl2String>> {
    let step = 2 * r;
    let mut classes: BTreeMap<i64, BTreeMap<i64, i64>> = BTreeMap::new();
    for (&s, &m) in mu {
        if m <= 0 {
            return Err(Error::NonPositiveMultiplicity { offset: s, value: m });
        }
        classes.entry(s.rem_euclid(step)).or_default().insert(s, m);
    }
    let mut out = Vec::new();
    for class in classes.values() {
        let top = class.values().copied().max().unwrap_or(0);
        for level in 1..=top {
            let mut run: Option<(i64, u32)> = None;
            for (&s, &m) in class {
                if m < level {
                    continue;
                }
                run = match run {
                    Some((start, len)) if start + step * len as i64 == s => Some((start, len + 1)),
                    Some((start, len)) => {
                        out.push(Sl2String::new(start, len));
                        Some((s, 1))
                    }
                    None => Some((s, 1)),
                };
            }
            if let Some((start, len)) = run {
                out.push(Sl2String::new(start, len));
            }
        }
    }
    Ok(out)
}

/// q-character of the sl2 KR module `W_{k,s}` (node 1, `q_1 = q^r`).
pub fn sl2_kr_qchar(r: i64, s: i64, k: i64) -> Result<QCharacter> {
    if k < 0 {
        return Err(Error::NegativeLength(k));
    }
    let a_inv = |c: i64| YMonomial::from_factors([(1, c - r, -1), (1, c + r, -1)]);
    let highest = YMonomial::from_factors((0..k).map(|t| (1, s + 2 * r * t, 1)))?;
    let mut terms = vec![(highest.clone(), 1)];
    if k > 0 {
        let string = Sl2String::new(s, k as u32);
        let mut cur = highest.clone();
        for c in string.a_offsets_descending(r) {
            cur = cur.checked_mul(&a_inv(c)?)?;
            terms.push((cur.clone(), 1));
        }
    }
    QCharacter::from_terms(highest, terms)
}

/// Strings of the normal writing of the `i`-part of `m`.
pub fn node_strings(cd: &CartanData, i: usize, m: &YMonomial) -> Result<Vec<Sl2String>> {
    let mu: BTreeMap<i64, i64> = m.node_part(i as u32).collect();
    normal_writing(&mu, cd.r(i))
}

/// Terms of `L_i(m)` as `(monomial, multiplicity, number of A^{-1} factors)`.
pub(crate) fn lift_terms(cd: &CartanData, i: usize, m: &YMonomial) -> Result<Vec<(YMonomial, u64, u32)>> {
    if !m.is_node_dominant(i as u32) {
        return Err(Error::NotIDominant { node: i, monomial: m.to_string() });
    }
    let r = cd.r(i);
    let strings = node_strings(cd, i, m)?;
    let mut a_cache: FxHashMap<i64, YMonomial> = FxHashMap::default();
    let mut terms: Vec<(YMonomial, u64, u32)> = vec![(m.clone(), 1, 0)];
    for string in &strings {
        let offsets: Vec<i64> = string.a_offsets_descending(r).collect();
        for &c in &offsets {
            if let Entry::Vacant(e) = a_cache.entry(c) {
                e.insert(a_inverse(cd, i, c)?);
            }
        }
        let mut next: FxHashMap<YMonomial, (u64, u32)> = FxHashMap::default();
        for (base, mult, depth) in &terms {
            let mut cur = base.clone();
            let mut d = *depth;
            let entry = next.entry(cur.clone()).or_insert((0, d));
            entry.0 = entry.0.checked_add(*mult).ok_or(Error::Overflow)?;
            for c in &offsets {
                cur = cur.checked_mul(&a_cache[c])?;
                d += 1;
                let entry = next.entry(cur.clone()).or_insert((0, d));
                entry.0 = entry.0.checked_add(*mult).ok_or(Error::Overflow)?;
            }
        }
        terms = next.into_iter().map(|(m, (c, d))| (m, c, d)).collect();
    }
    Ok(terms)
}

/// The lifted character `L_i(m)` for an `i`-dominant monomial `m`.
pub fn lift_l(cd: &CartanData, i: usize, m: &YMonomial) -> Result<QCharacter> {
    cd.check_node(i)?;
    let terms = lift_terms(cd, i, m)?;
    QCharacter::from_terms(m.clone(), terms.into_iter().map(|(m, c, _)| (m, c)))
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct HeapKey(Rational, std::cmp::Reverse<YMonomial>);

/// Decomposes `chi = sum lambda_i(m) L_i(m)` over `i`-dominant monomials, peeling
/// in decreasing order of weight height. Returns the pairs with `lambda > 0` in
/// peeling order.
pub fn i_decompose(cd: &CartanData, i: usize, chi: &LaurentPoly) -> Result<Vec<(YMonomial, u64)>> {
    cd.check_node(i)?;
    let node = i as u32;
    let mut residual = chi.clone();
    let mut heap = BinaryHeap::new();
    let mut queued: HashSet<YMonomial> = HashSet::new();
    for (m, _) in chi.iter() {
        if m.is_node_dominant(node) && queued.insert(m.clone()) {
            heap.push(HeapKey(cd.height(&omega(cd, m)), std::cmp::Reverse(m.clone())));
        }
    }
    let mut out = Vec::new();
    while let Some(HeapKey(_, std::cmp::Reverse(m))) = heap.pop() {
        let c = residual.coefficient(&m);
        if c == 0 {
            continue;
        }
        if c < 0 {
            return Err(Error::NegativeResidual { node: i, monomial: m.to_string(), coefficient: c });
        }
        for (lower, mult, _) in lift_terms(cd, i, &m)? {
            let delta = (mult as i64).checked_mul(c).ok_or(Error::Overflow)?;
            if lower.is_node_dominant(node) && queued.insert(lower.clone()) {
                heap.push(HeapKey(cd.height(&omega(cd, &lower)), std::cmp::Reverse(lower.clone())));
            }
            residual.add_term(lower, -delta)?;
        }
        out.push((m, c as u64));
    }
    if !residual.is_empty() {
        let example = residual.sorted_terms()[0].0.to_string();
        return Err(Error::NonZeroRemainder { node: i, count: residual.len(), example });
    }
    Ok(out)
}
