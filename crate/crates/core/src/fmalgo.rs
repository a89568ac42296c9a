//! Saturation algorithm for q-characters of special modules, and the cached
//! KR q-character store built on it.
//!
//! The algorithm proceeds by depth `p = v(m / m+)`. For every node `i` it keeps
//! the polynomial `D_i = sum lambda_i(m'') L_i(m'')` demanded by the
//! `i`-dominant monomials finalized so far. A monomial of depth `p + 1` that is
//! not `i`-dominant receives its coefficient from `D_i`; every such direction
//! must agree. A dominant monomial other than the highest one aborts the run.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use rustc_hash::FxHashMap;

use crate::cache::{self, CacheFile};
use crate::cartan::{CartanData, Series};
use crate::error::{Error, Result};
use crate::qchar::{is_special, QCharacter};
use crate::sl2core::lift_terms;
use crate::ymono::{kr_monomial, YMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_depth: usize,
    pub max_monomials: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_depth: 200, max_monomials: 5_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct FmReport {
    pub qchar: QCharacter,
    pub depth_reached: usize,
    pub monomial_count: usize,
    pub special: bool,
}

fn inconsistent(m: &YMonomial, detail: String) -> Error {
    Error::Inconsistent { monomial: m.to_string(), detail }
}

/// Computes the q-character of the special module with highest monomial `m_plus`.
pub fn fm_qchar(cd: &CartanData, m_plus: &YMonomial, caps: &Caps) -> Result<FmReport> {
    m_plus.check_rank(cd)?;
    if let Some(&(i, _, _)) = m_plus.factors().iter().find(|f| f.2 < 0) {
        return Err(Error::NotIDominant { node: i as usize, monomial: m_plus.to_string() });
    }
    let n = cd.rank();
    let mut finalized: FxHashMap<YMonomial, u64> = FxHashMap::default();
    finalized.insert(m_plus.clone(), 1);
    let mut level: Vec<YMonomial> = vec![m_plus.clone()];
    // demand[i - 1][depth][monomial]
    let mut demand: Vec<BTreeMap<usize, FxHashMap<YMonomial, i64>>> = vec![BTreeMap::new(); n];
    let mut depth = 0usize;
    let mut depth_reached = 0usize;

    loop {
        for i in 1..=n {
            let node = i as u32;
            let bucket = demand[i - 1].remove(&depth).unwrap_or_default();
            for m in level.iter().filter(|m| m.is_node_dominant(node)) {
                let lambda = finalized[m] as i64 - bucket.get(m).copied().unwrap_or(0);
                if lambda < 0 {
                    return Err(inconsistent(m, format!("negative lambda {lambda} in direction {i}")));
                }
                if lambda == 0 || m.node_part(node).next().is_none() {
                    continue;
                }
                for (lower, mult, d) in lift_terms(cd, i, m)? {
                    if d == 0 {
                        continue;
                    }
                    let target = depth + d as usize;
                    let slot = demand[i - 1].entry(target).or_default().entry(lower).or_insert(0);
                    *slot = slot.checked_add((mult as i64).checked_mul(lambda).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
                }
            }
            for (m, &c) in &bucket {
                if c != 0 && m.is_node_dominant(node) && !finalized.contains_key(m) {
                    return Err(inconsistent(m, format!("direction {i} demands {c} but no coefficient was assigned")));
                }
            }
        }

        let next = depth + 1;
        let mut candidates: Vec<YMonomial> = Vec::new();
        for per_node in &demand {
            if let Some(bucket) = per_node.get(&next) {
                candidates.extend(bucket.keys().cloned());
            }
        }
        candidates.sort_unstable();
        candidates.dedup();

        let mut next_level = Vec::new();
        for m in candidates {
            if m.is_dominant() {
                return Err(Error::NotSpecial(m.to_string()));
            }
            let mut common: Option<(usize, i64)> = None;
            for i in 1..=n {
                if m.is_node_dominant(i as u32) {
                    continue;
                }
                let c = demand[i - 1].get(&next).and_then(|b| b.get(&m)).copied().unwrap_or(0);
                match common {
                    None => common = Some((i, c)),
                    Some((j, prev)) if prev != c => {
                        return Err(inconsistent(&m, format!("direction {j} gives {prev}, direction {i} gives {c}")));
                    }
                    _ => {}
                }
            }
            let (_, c) = common.expect("non-dominant monomials have a negative direction");
            if c < 0 {
                return Err(inconsistent(&m, format!("negative coefficient {c}")));
            }
            if c > 0 {
                finalized.insert(m.clone(), c as u64);
                next_level.push(m);
            }
        }
        if finalized.len() > caps.max_monomials {
            return Err(Error::MonomialCapExceeded(caps.max_monomials));
        }
        if !next_level.is_empty() {
            if next > caps.max_depth {
                return Err(Error::DepthCapExceeded(caps.max_depth));
            }
            depth_reached = next;
        }
        level = next_level;
        depth = next;
        if level.is_empty() && demand.iter().all(|d| d.is_empty()) {
            break;
        }
    }

    let qchar = QCharacter::from_terms(m_plus.clone(), finalized)?;
    let special = is_special(&qchar);
    Ok(FmReport { monomial_count: qchar.monomial_count(), qchar, depth_reached, special })
}

type MemoKey = (Series, usize, usize, i64);

/// Memoized KR q-characters, optionally backed by a cache directory.
///
/// Characters are stored at spectral offset 0 and translated on request.
#[derive(Debug)]
pub struct KrCache {
    caps: Caps,
    dir: Option<PathBuf>,
    memo: RwLock<HashMap<MemoKey, Arc<QCharacter>>>,
}

impl KrCache {
    /// In-memory only.
    pub fn new(caps: Caps) -> Self {
        KrCache { caps, dir: None, memo: RwLock::new(HashMap::new()) }
    }

    pub fn with_dir(dir: impl Into<PathBuf>, caps: Caps) -> Self {
        KrCache { caps, dir: Some(dir.into()), memo: RwLock::new(HashMap::new()) }
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// `chi_q(W^{(i)}_{k,0})`, shared.
    pub fn kr_qchar_base(&self, cd: &CartanData, i: usize, k: i64) -> Result<Arc<QCharacter>> {
        cd.check_node(i)?;
        if k < 0 {
            return Err(Error::NegativeLength(k));
        }
        let key = (cd.series(), cd.rank(), i, k);
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let highest = kr_monomial(cd, i, 0, k)?;
        let chi = match self.load(cd, i, k, &highest)? {
            Some(chi) => chi,
            None => {
                let chi = if k == 0 { QCharacter::trivial() } else { fm_qchar(cd, &highest, &self.caps)?.qchar };
                self.store(cd, i, k, &chi)?;
                chi
            }
        };
        let chi = Arc::new(chi);
        self.memo.write().expect("memo lock").entry(key).or_insert_with(|| Arc::clone(&chi));
        Ok(chi)
    }

    /// `chi_q(W^{(i)}_{k,s})`.
    pub fn kr_qchar(&self, cd: &CartanData, i: usize, s: i64, k: i64) -> Result<QCharacter> {
        let base = self.kr_qchar_base(cd, i, k)?;
        Ok(if s == 0 { (*base).clone() } else { base.translate(s) })
    }

    fn load(&self, cd: &CartanData, i: usize, k: i64, highest: &YMonomial) -> Result<Option<QCharacter>> {
        let Some(dir) = &self.dir else { return Ok(None) };
        let path = cache::entry_path(dir, cd.series(), cd.rank(), i, k);
        match cache::read(&path)? {
            None => Ok(None),
            Some(file) => {
                let meta_ok = file.meta.series == cd.series() && file.meta.rank == cd.rank() && file.meta.node == i && file.meta.k == k;
                if !meta_ok {
                    return Err(Error::Cache { path, message: "metadata does not match file name".into() });
                }
                file.into_qchar(highest.clone()).map(Some)
            }
        }
    }

    fn store(&self, cd: &CartanData, i: usize, k: i64, chi: &QCharacter) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = cache::entry_path(dir, cd.series(), cd.rank(), i, k);
        cache::write_atomic(&path, &CacheFile::new(cd.series(), cd.rank(), i, k, chi).to_json())
    }
}

fn global_cache() -> &'static KrCache {
    static GLOBAL: OnceLock<KrCache> = OnceLock::new();
    GLOBAL.get_or_init(|| KrCache::new(Caps::default()))
}

/// `chi_q(W^{(i)}_{k,s})` through a process-wide in-memory memo.
///
/// `caps` only applies when the character is not memoized yet.
pub fn kr_qchar(cd: &CartanData, i: usize, s: i64, k: i64, caps: &Caps) -> Result<QCharacter> {
    let global = global_cache();
    if *caps == global.caps {
        return global.kr_qchar(cd, i, s, k);
    }
    let key = (cd.series(), cd.rank(), i, k);
    if let Some(hit) = global.memo.read().expect("memo lock").get(&key) {
        return Ok(hit.translate(s));
    }
    KrCache::new(*caps).kr_qchar(cd, i, s, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::make_cartan;
    use crate::qchar::multiply;
    use crate::sl2core::sl2_kr_qchar;

    fn mono(s: &str) -> YMonomial {
        s.parse().unwrap()
    }

    #[test]
    fn sl2_kr_module() {
        let a1 = make_cartan(Series::A, 1).unwrap();
        let rep = fm_qchar(&a1, &mono("Y[1,0] * Y[1,2]"), &Caps::default()).unwrap();
        assert!(rep.special);
        assert_eq!(rep.monomial_count, 3);
        assert_eq!(rep.depth_reached, 2);
        assert_eq!(rep.qchar, sl2_kr_qchar(1, 0, 2).unwrap());
    }

    #[test]
    fn a2_fundamental() {
        let a2 = make_cartan(Series::A, 2).unwrap();
        let rep = fm_qchar(&a2, &mono("Y[1,0]"), &Caps::default()).unwrap();
        let expected: Vec<YMonomial> = vec![mono("Y[1,0]"), mono("Y[1,2]^-1 * Y[2,1]"), mono("Y[2,3]^-1")];
        let mut got: Vec<YMonomial> = rep.qchar.terms().keys().cloned().collect();
        got.sort();
        let mut exp = expected.clone();
        exp.sort();
        assert_eq!(got, exp);
        assert_eq!(rep.qchar.dimension(), 3);
        assert!(rep.special);
    }

    #[test]
    fn non_special_position_product() {
        let a1 = make_cartan(Series::A, 1).unwrap();
        let rep = fm_qchar(&a1, &mono("Y[1,0] * Y[1,4]"), &Caps::default()).unwrap();
        let oracle = multiply(&sl2_kr_qchar(1, 0, 1).unwrap(), &sl2_kr_qchar(1, 4, 1).unwrap()).unwrap();
        assert_eq!(rep.qchar, oracle);
        assert_eq!(rep.qchar.dimension(), 4);
    }

    #[test]
    fn non_special_module_detected() {
        // L(Y_0 Y_2^2 Y_4) = W_3(0) (x) W_1(2) in A1; its character also contains Y_0 Y_2.
        let a1 = make_cartan(Series::A, 1).unwrap();
        let err = fm_qchar(&a1, &mono("Y[1,0] * Y[1,2]^2 * Y[1,4]"), &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::NotSpecial(ref m) if m == "Y[1,0] * Y[1,2]"), "{err}");
    }

    #[test]
    fn caps_are_enforced() {
        let a1 = make_cartan(Series::A, 1).unwrap();
        let caps = Caps { max_depth: 1, max_monomials: 100 };
        assert!(matches!(fm_qchar(&a1, &mono("Y[1,0] * Y[1,2]"), &caps), Err(Error::DepthCapExceeded(1))));
        let caps = Caps { max_depth: 100, max_monomials: 2 };
        assert!(matches!(fm_qchar(&a1, &mono("Y[1,0] * Y[1,2]"), &caps), Err(Error::MonomialCapExceeded(2))));
        assert!(matches!(fm_qchar(&a1, &mono("Y[1,0]^-1"), &Caps::default()), Err(Error::NotIDominant { .. })));
    }

    #[test]
    fn kr_cache_translation_and_trivial() {
        let a2 = make_cartan(Series::A, 2).unwrap();
        let cache = KrCache::new(Caps::default());
        let w = cache.kr_qchar(&a2, 1, 0, 1).unwrap();
        assert_eq!(w.monomial_count(), 3);
        let shifted = cache.kr_qchar(&a2, 1, 7, 1).unwrap();
        assert_eq!(shifted, w.translate(7));
        assert_eq!(cache.kr_qchar(&a2, 2, 3, 0).unwrap(), QCharacter::trivial());
        let a1 = make_cartan(Series::A, 1).unwrap();
        for k in 0..=5 {
            assert_eq!(kr_qchar(&a1, 1, 0, k, &Caps::default()).unwrap().monomial_count() as i64, k + 1);
        }
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let b2 = make_cartan(Series::B, 2).unwrap();
        let first = KrCache::with_dir(dir.path(), Caps::default()).kr_qchar(&b2, 2, 0, 2).unwrap();
        assert_eq!(cache::list(dir.path()).unwrap().len(), 1);
        let second = KrCache::with_dir(dir.path(), Caps::default()).kr_qchar(&b2, 2, 0, 2).unwrap();
        assert_eq!(first, second);
    }
}
