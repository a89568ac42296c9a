//! T-system and Q-system identities for KR modules, with the supporting
//! checks on dominant monomials, the module `S`, and the normalized limit.
//!
//! Notation: `W(i, k, s)` is the KR module with highest monomial
//! `m(i, k, s) = Y_{i,s} Y_{i,s+2r_i} ... Y_{i,s+2r_i(k-1)}`, and
//! `M = m(i, k, s) m(i, k, s + 2r_i)`, `M' = M A_{i,s+r_i(2k-1)}^{-1} ... A_{i,s+r_i}^{-1}`.

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, Series};
use crate::charring::{restrict, restrict_poly, Character};
use crate::error::{Error, Result};
use crate::fmalgo::KrCache;
use crate::qchar::{multiply, LaurentPoly, QCharacter};
use crate::report::VerifyReport;
use crate::sl2core::node_strings;
use crate::ymono::{a_inverse, factor_over_a, is_right_negative, kr_monomial, YMonomial};

/// A tensor product of KR modules, as `(node, length, offset)` triples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrFactorList(Vec<(usize, i64, i64)>);

impl KrFactorList {
    /// Drops length-0 factors and sorts by node, then offset.
    pub fn new(mut factors: Vec<(usize, i64, i64)>) -> Self {
        factors.retain(|f| f.1 != 0);
        factors.sort_by_key(|&(j, k, s)| (j, s, k));
        KrFactorList(factors)
    }

    pub fn factors(&self) -> &[(usize, i64, i64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of the highest monomials.
    pub fn highest(&self, cd: &CartanData) -> Result<YMonomial> {
        let mut m = YMonomial::one();
        for &(j, k, s) in &self.0 {
            m = m.checked_mul(&kr_monomial(cd, j, s, k)?)?;
        }
        Ok(m)
    }

    pub fn qchar(&self, cd: &CartanData, cache: &KrCache) -> Result<QCharacter> {
        let mut acc = QCharacter::trivial();
        for &(j, k, s) in &self.0 {
            acc = multiply(&acc, &cache.kr_qchar(cd, j, s, k)?)?;
        }
        Ok(acc)
    }
}

fn check_args(cd: &CartanData, i: usize, k: i64) -> Result<()> {
    cd.check_node(i)?;
    if k < 1 {
        return Err(Error::InvalidLength(k));
    }
    Ok(())
}

/// Factors of the module `S` in the T-system at `(i, k, s)`.
pub fn s_factors(cd: &CartanData, i: usize, k: i64, s: i64) -> Result<KrFactorList> {
    check_args(cd, i, k)?;
    let ri = cd.r(i);
    let others = cd.nodes().filter(|&j| j != i);
    let mut out = Vec::new();
    if ri >= 2 {
        for j in others {
            match cd.c(j, i) {
                -1 => out.push((j, k, s + ri)),
                c if c <= -2 => out.push((j, ri * k, s + 1)),
                _ => {}
            }
        }
    } else if cd.series() == Series::G {
        let j = others.into_iter().next().expect("G2 has two nodes");
        let (r, rem) = (k / 3, k % 3);
        let len = |slot: i64| if slot < rem { r + 1 } else { r };
        out.extend((0..3).map(|t| (j, len(t), s + 1 + 2 * t)));
    } else {
        let (r, rem) = (k / 2, k % 2);
        for j in others {
            match cd.c(i, j) {
                -1 => out.push((j, k, s + 1)),
                -2 => {
                    out.push((j, r + rem, s + 1));
                    out.push((j, r, s + 3));
                }
                _ => {}
            }
        }
    }
    Ok(KrFactorList::new(out))
}

/// Factors of `R` in the Q-system: the `S` factors with offsets set to 0.
pub fn r_factors(cd: &CartanData, i: usize, k: i64) -> Result<KrFactorList> {
    let s = s_factors(cd, i, k, 0)?;
    Ok(KrFactorList::new(s.0.into_iter().map(|(j, l, _)| (j, l, 0)).collect()))
}

/// `M` and `M'` at `(i, k, s)`.
pub fn m_and_m_prime(cd: &CartanData, i: usize, k: i64, s: i64) -> Result<(YMonomial, YMonomial)> {
    check_args(cd, i, k)?;
    let ri = cd.r(i);
    let m = kr_monomial(cd, i, s, k)?.checked_mul(&kr_monomial(cd, i, s + 2 * ri, k)?)?;
    let mut mp = m.clone();
    for t in (1..=k).rev() {
        mp = mp.checked_mul(&a_inverse(cd, i, s + ri * (2 * t - 1))?)?;
    }
    Ok((m, mp))
}

/// Both sides of the T-system as polynomials.
#[derive(Clone, Debug)]
pub struct TSides {
    /// `chi(W(i,k,s)) chi(W(i,k,s+2r_i))`.
    pub lhs: QCharacter,
    /// `chi(W(i,k+1,s)) chi(W(i,k-1,s+2r_i))`.
    pub rhs_main: QCharacter,
    /// `chi(S)`.
    pub rhs_s: QCharacter,
}

impl TSides {
    pub fn lhs_poly(&self) -> LaurentPoly {
        self.lhs.to_poly()
    }

    pub fn rhs_poly(&self) -> Result<LaurentPoly> {
        self.rhs_main.to_poly().checked_add(&self.rhs_s.to_poly())
    }
}

pub fn t_system_sides(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<TSides> {
    check_args(cd, i, k)?;
    let shift = s + 2 * cd.r(i);
    let factors = s_factors(cd, i, k, s)?;
    let (lhs, (rhs_main, rhs_s)) = rayon::join(
        || multiply(&cache.kr_qchar(cd, i, s, k)?, &cache.kr_qchar(cd, i, shift, k)?),
        || rayon::join(|| multiply(&cache.kr_qchar(cd, i, s, k + 1)?, &cache.kr_qchar(cd, i, shift, k - 1)?), || factors.qchar(cd, cache)),
    );
    Ok(TSides { lhs: lhs?, rhs_main: rhs_main?, rhs_s: rhs_s? })
}

/// Exact comparison of both sides of the T-system.
pub fn verify_t_system(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<VerifyReport> {
    let sides = t_system_sides(cd, i, k, s, cache)?;
    Ok(VerifyReport::compare_polys(&sides.lhs_poly(), &sides.rhs_poly()?))
}

/// Computed dominant monomials of the two products of the T-system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantLedger {
    pub side1: Vec<(YMonomial, u64)>,
    pub side2: Vec<(YMonomial, u64)>,
}

/// The lists `M, M A^{-1}_{i,s+r_i(2k-1)}, ...` of length `k + 1` and `k`.
pub fn expected_ledger(cd: &CartanData, i: usize, k: i64, s: i64) -> Result<(Vec<YMonomial>, Vec<YMonomial>)> {
    let (m, _) = m_and_m_prime(cd, i, k, s)?;
    let ri = cd.r(i);
    let mut chain = vec![m];
    for t in (1..=k).rev() {
        let next = chain.last().expect("nonempty").checked_mul(&a_inverse(cd, i, s + ri * (2 * t - 1))?)?;
        chain.push(next);
    }
    let side2 = chain[..k as usize].to_vec();
    Ok((chain, side2))
}

pub fn dominant_ledger(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<DominantLedger> {
    check_args(cd, i, k)?;
    let shift = s + 2 * cd.r(i);
    let side1 = dominant_products(&cache.kr_qchar(cd, i, s, k)?, &cache.kr_qchar(cd, i, shift, k)?)?;
    let side2 = dominant_products(&cache.kr_qchar(cd, i, s, k + 1)?, &cache.kr_qchar(cd, i, shift, k - 1)?)?;
    Ok(DominantLedger { side1, side2 })
}

/// Computed ledger equals the expected lists, every multiplicity 1.
pub fn ledger_matches(cd: &CartanData, i: usize, k: i64, s: i64, ledger: &DominantLedger) -> Result<bool> {
    let (e1, e2) = expected_ledger(cd, i, k, s)?;
    let same = |got: &[(YMonomial, u64)], mut want: Vec<YMonomial>| {
        want.sort();
        got.iter().all(|(_, c)| *c == 1) && got.iter().map(|(m, _)| m.clone()).collect::<Vec<_>>() == want
    };
    Ok(same(&ledger.side1, e1) && same(&ledger.side2, e2))
}

fn product_is_dominant(a: &YMonomial, b: &YMonomial) -> bool {
    let (fa, fb) = (a.factors(), b.factors());
    let (mut x, mut y) = (0, 0);
    while x < fa.len() || y < fb.len() {
        let key_a = fa.get(x).map(|f| (f.0, f.1));
        let key_b = fb.get(y).map(|f| (f.0, f.1));
        let e = match (key_a, key_b) {
            (Some(ka), Some(kb)) if ka == kb => {
                x += 1;
                y += 1;
                fa[x - 1].2 + fb[y - 1].2
            }
            (Some(ka), Some(kb)) if ka < kb => {
                x += 1;
                fa[x - 1].2
            }
            (Some(_), None) => {
                x += 1;
                fa[x - 1].2
            }
            _ => {
                y += 1;
                fb[y - 1].2
            }
        };
        if e < 0 {
            return false;
        }
    }
    true
}

/// Dominant monomials of `a * b` with multiplicities, in canonical order, without forming the product.
pub fn dominant_products(a: &QCharacter, b: &QCharacter) -> Result<Vec<(YMonomial, u64)>> {
    let mut acc: std::collections::BTreeMap<YMonomial, u64> = std::collections::BTreeMap::new();
    for (x, &cx) in a.terms() {
        for (y, &cy) in b.terms() {
            if product_is_dominant(x, y) {
                *acc.entry(x.checked_mul(y)?).or_insert(0) += cx * cy;
            }
        }
    }
    Ok(acc.into_iter().collect())
}

/// Dominant monomials of `chi(S)` at `(i, k, s)`.
pub fn s_dominant_monomials(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<Vec<(YMonomial, u64)>> {
    let factors = s_factors(cd, i, k, s)?;
    let list = factors.factors();
    let Some((&(j, l, t), rest)) = list.split_last() else {
        return Ok(vec![(YMonomial::one(), 1)]);
    };
    let head = KrFactorList(rest.to_vec()).qchar(cd, cache)?;
    dominant_products(&head, &cache.kr_qchar(cd, j, t, l)?)
}

/// `chi(S)` has the single dominant monomial `M'`, with multiplicity 1.
pub fn verify_s_special(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<bool> {
    Ok(s_special_report(cd, i, k, s, cache)?.equal)
}

/// Dominant part of `chi(S)` against the single term `M'`.
pub fn s_special_report(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<VerifyReport> {
    let (_, mp) = m_and_m_prime(cd, i, k, s)?;
    let got: LaurentPoly = s_dominant_monomials(cd, i, k, s, cache)?.into_iter().map(|(m, c)| (m, c as i64)).collect();
    Ok(VerifyReport::compare_polys(&got, &LaurentPoly::monomial(mp, 1)))
}

/// Strings `(node, length, start)` of the normal writing of `M'`; none lies on node `i`.
pub fn m_prime_strings(cd: &CartanData, i: usize, k: i64, s: i64) -> Result<Vec<(usize, i64, i64)>> {
    let (_, mp) = m_and_m_prime(cd, i, k, s)?;
    let mut out = Vec::new();
    for j in cd.nodes() {
        for st in node_strings(cd, j, &mp)? {
            out.push((j, i64::from(st.length), st.start));
        }
    }
    Ok(out)
}

/// The set `B'`: `m(i,k,s)` followed by the `k` successive `A_i^{-1}` steps from the top.
pub fn b_prime_set(cd: &CartanData, i: usize, k: i64, s: i64) -> Result<Vec<YMonomial>> {
    check_args(cd, i, k)?;
    let ri = cd.r(i);
    let mut chain = vec![kr_monomial(cd, i, s, k)?];
    for t in (1..=k).rev() {
        let next = chain.last().expect("nonempty").checked_mul(&a_inverse(cd, i, s + ri * (2 * t - 1))?)?;
        chain.push(next);
    }
    Ok(chain)
}

/// The set `B`: for `1 <= k' + 1 <= k` steps down the `B'` chain, times the top `A^{-1}` of one string of `M'`.
pub fn b_set(cd: &CartanData, i: usize, k: i64, s: i64) -> Result<Vec<YMonomial>> {
    let chain = b_prime_set(cd, i, k, s)?;
    let mut out = Vec::new();
    for (l_node, l_len, l_start) in m_prime_strings(cd, i, k, s)? {
        let top = a_inverse(cd, l_node, l_start + cd.r(l_node) * (2 * l_len - 1))?;
        for base in &chain[1..] {
            out.push(base.checked_mul(&top)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every monomial of `m(i, k, s + 2r_i) * B` is right-negative.
pub fn b_set_right_negative(cd: &CartanData, i: usize, k: i64, s: i64) -> Result<bool> {
    let shifted = kr_monomial(cd, i, s + 2 * cd.r(i), k)?;
    for b in b_set(cd, i, k, s)? {
        if !is_right_negative(&shifted.checked_mul(&b)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every monomial of `chi(W(i,k,s))` lies in `B'` or is lower than a monomial of `B`.
pub fn monomials_covered_by_b(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<bool> {
    let chi = cache.kr_qchar(cd, i, s, k)?;
    let b_prime = b_prime_set(cd, i, k, s)?;
    let b = b_set(cd, i, k, s)?;
    for m in chi.terms().keys() {
        if b_prime.contains(m) {
            continue;
        }
        let mut covered = false;
        for top in &b {
            if factor_over_a(cd, m, top)?.is_some() {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both sides of the Q-system as ordinary characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSides {
    pub lhs: Character,
    pub rhs: Character,
}

pub fn q_system_sides(cd: &CartanData, i: usize, k: i64, cache: &KrCache) -> Result<QSides> {
    check_args(cd, i, k)?;
    let q = |j: usize, l: i64| -> Result<Character> { Ok(restrict(cd, &*cache.kr_qchar_base(cd, j, l)?)) };
    let qk = q(i, k)?;
    let lhs = qk.checked_mul(&qk)?;
    let mut r = Character::one(cd.rank());
    for &(j, l, _) in r_factors(cd, i, k)?.factors() {
        r = r.checked_mul(&q(j, l)?)?;
    }
    let rhs = q(i, k + 1)?.checked_mul(&q(i, k - 1)?)?.checked_add(&r)?;
    Ok(QSides { lhs, rhs })
}

/// Exact comparison of both sides of the Q-system.
pub fn verify_q_system(cd: &CartanData, i: usize, k: i64, cache: &KrCache) -> Result<VerifyReport> {
    let sides = q_system_sides(cd, i, k, cache)?;
    Ok(VerifyReport::compare_characters(&sides.lhs, &sides.rhs))
}

/// Restriction of the T-system sides equals the Q-system sides.
pub fn restriction_commutes(cd: &CartanData, i: usize, k: i64, cache: &KrCache) -> Result<bool> {
    let t = t_system_sides(cd, i, k, 0, cache)?;
    let q = q_system_sides(cd, i, k, cache)?;
    Ok(restrict_poly(cd, &t.lhs_poly()) == q.lhs && restrict_poly(cd, &t.rhs_poly()?) == q.rhs)
}

/// `chi(W(i, k, -2 r_i k)) / m(i, k, -2 r_i k)` restricted to depth `<= d`.
pub fn normalized_truncation(cd: &CartanData, i: usize, k: i64, d: u32, cache: &KrCache) -> Result<LaurentPoly> {
    check_args(cd, i, k)?;
    let s = -2 * cd.r(i) * k;
    let chi = cache.kr_qchar(cd, i, s, k)?;
    let inv = chi.highest().inverse()?;
    let mut out = LaurentPoly::zero();
    for (m, &c) in chi.terms() {
        let ratio = m.checked_mul(&inv)?;
        let depth = -cd.height(&crate::ymono::omega(cd, &ratio));
        if depth <= crate::cartan::Rational::from_integer(i64::from(d)) {
            out.add_term(ratio, c as i64)?;
        }
    }
    Ok(out)
}

/// Compares the depth-`<= d` part of the normalized character at the first `k` of `ks` with every other one.
pub fn limit_report(cd: &CartanData, i: usize, d: u32, ks: &[i64], cache: &KrCache) -> Result<VerifyReport> {
    if d < 1 || ks.len() < 2 || ks.iter().any(|&k| k < i64::from(d)) {
        return Err(Error::BadRange { depth: d as usize });
    }
    let first = normalized_truncation(cd, i, ks[0], d, cache)?;
    let mut report: Option<VerifyReport> = None;
    for &k in &ks[1..] {
        let next = VerifyReport::compare_polys(&first, &normalized_truncation(cd, i, k, d, cache)?);
        report = Some(match report {
            None => next,
            Some(r) => r.and(next),
        });
    }
    Ok(report.expect("at least two lengths"))
}

/// The depth-`<= d` parts of the normalized characters agree for every `k` in `ks`.
pub fn limit_stabilization(cd: &CartanData, i: usize, d: u32, ks: &[i64], cache: &KrCache) -> Result<bool> {
    Ok(limit_report(cd, i, d, ks, cache)?.equal)
}

/// `E = chi(W(i,k+1,s)) - Y_{i,s} chi(W(i,k,s+2r_i))` has nonnegative coefficients and
/// every monomial is below `m(i,k+1,s) A^{-1}_{i,s+r_i} A^{-1}_{i,s+3r_i} ... A^{-1}_{i,s+(2k+1)r_i}`.
pub fn e_positivity(cd: &CartanData, i: usize, k: i64, s: i64, cache: &KrCache) -> Result<bool> {
    cd.check_node(i)?;
    if k < 0 {
        return Err(Error::NegativeLength(k));
    }
    let ri = cd.r(i);
    let big = cache.kr_qchar(cd, i, s, k + 1)?.to_poly();
    let small = cache.kr_qchar(cd, i, s + 2 * ri, k)?.to_poly().shift_by(&YMonomial::y(i as u32, s))?;
    let e = big.checked_sub(&small)?;
    if !e.has_nonnegative_coefficients() {
        return Ok(false);
    }
    let mut bound = kr_monomial(cd, i, s, k + 1)?;
    for t in 0..=k {
        bound = bound.checked_mul(&a_inverse(cd, i, s + (2 * t + 1) * ri)?)?;
    }
    for (m, _) in e.iter() {
        if factor_over_a(cd, m, &bound)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
