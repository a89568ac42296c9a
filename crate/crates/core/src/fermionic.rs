//! The fermionic sum `F(nu)` and the comparison with normalized KR characters.
//!
//! `F(nu)` is a power series in the `e^{-alpha_i}`; everything here is
//! truncated by total degree, the sum of the root coordinates of `-weight`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, Rational, Weight};
use crate::charring::{delta_product, mul_truncated, normalize, restrict, truncate, Character};
use crate::error::{Error, Result};
use crate::fmalgo::KrCache;
use crate::report::VerifyReport;

/// Occupation data `nu_k^{(i)}`, keyed by `(node, level)`.
///
/// Text form is a comma-separated list of `i:k:mult`; JSON form is a list of `[i, k, mult]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, u32, u64)>", into = "Vec<(usize, u32, u64)>")]
pub struct NuSpec(BTreeMap<(usize, u32), u64>);

/// Quasi-particle numbers `N_k^{(i)}`, keyed by `(node, level)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NVector(BTreeMap<(usize, u32), u64>);

macro_rules! sparse_counts {
    ($t:ident) => {
        impl $t {
            pub fn new() -> Self {
                $t(BTreeMap::new())
            }

            pub fn add(&mut self, node: usize, level: u32, count: u64) {
                if count > 0 {
                    *self.0.entry((node, level)).or_insert(0) += count;
                }
            }

            pub fn get(&self, node: usize, level: u32) -> u64 {
                self.0.get(&(node, level)).copied().unwrap_or(0)
            }

            pub fn entries(&self) -> impl Iterator<Item = (usize, u32, u64)> + '_ {
                self.0.iter().map(|(&(i, k), &c)| (i, k, c))
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            /// Checks nodes against `cd` and that every level is at least 1.
            pub fn validate(&self, cd: &CartanData) -> Result<()> {
                for &(i, k) in self.0.keys() {
                    cd.check_node(i)?;
                    if k == 0 {
                        return Err(Error::InvalidLength(0));
                    }
                }
                Ok(())
            }
        }

        impl FromIterator<(usize, u32, u64)> for $t {
            fn from_iter<I: IntoIterator<Item = (usize, u32, u64)>>(iter: I) -> Self {
                let mut v = $t::new();
                for (i, k, c) in iter {
                    v.add(i, k, c);
                }
                v
            }
        }
    };
}

sparse_counts!(NuSpec);
sparse_counts!(NVector);

impl TryFrom<Vec<(usize, u32, u64)>> for NuSpec {
    type Error = Error;

    fn try_from(v: Vec<(usize, u32, u64)>) -> Result<Self> {
        if v.iter().any(|&(i, k, _)| i == 0 || k == 0) {
            return Err(Error::Parse { what: "nu", input: format!("{v:?}") });
        }
        Ok(v.into_iter().collect())
    }
}

impl From<NuSpec> for Vec<(usize, u32, u64)> {
    fn from(nu: NuSpec) -> Self {
        nu.entries().collect()
    }
}

impl FromStr for NuSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "nu", input: s.to_string() };
        let mut nu = NuSpec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = item.split(':').collect();
            let [i, k, c] = parts.as_slice() else { return Err(bad()) };
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            let c: u64 = c.trim().parse().map_err(|_| bad())?;
            if i == 0 || k == 0 {
                return Err(bad());
            }
            nu.add(i, k, c);
        }
        Ok(nu)
    }
}

impl fmt::Display for NuSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries().map(|(i, k, c)| format!("{i}:{k}:{c}")).collect();
        f.write_str(&items.join(","))
    }
}

/// `a (a-1) ... (a-b+1) / b!`, for any integer `a`.
pub fn gen_binomial(a: i64, b: i64) -> Result<i64> {
    if b < 0 {
        return Err(Error::NegativeB(b));
    }
    let mut acc: i128 = 1;
    for t in 0..i128::from(b) {
        acc = acc.checked_mul(i128::from(a) - t).ok_or(Error::Overflow)? / (t + 1);
    }
    i64::try_from(acc).map_err(|_| Error::Overflow)
}

/// The vacancy number `P_k^{(i)}(nu, N)`.
pub fn p_quantity(cd: &CartanData, nu: &NuSpec, n: &NVector, i: usize, k: u32) -> Result<i64> {
    cd.check_node(i)?;
    if k == 0 {
        return Err(Error::InvalidLength(0));
    }
    let mut p = Rational::from_integer(0);
    for (node, l, c) in nu.entries() {
        if node == i {
            p += Rational::from_integer(c as i64 * i64::from(k.min(l)));
        }
    }
    let ri = cd.r(i);
    for (j, l, c) in n.entries() {
        let cij = cd.c(i, j);
        if cij == 0 {
            continue;
        }
        let m = Rational::new(i64::from(k), cd.r(j)).min(Rational::new(i64::from(l), ri));
        p -= m * (c as i64 * ri * cij);
    }
    if !p.is_integer() {
        return Err(Error::NonIntegralP { node: i, level: k, value: p.to_string() });
    }
    Ok(p.to_integer())
}

/// Every `N` with `sum_{i,k} k N_k^{(i)} <= d`.
pub fn n_vectors(cd: &CartanData, d: u32) -> Vec<NVector> {
    let slots: Vec<(usize, u32)> = cd.nodes().flat_map(|i| (1..=d).map(move |k| (i, k))).collect();
    let mut out = Vec::new();
    let mut current = NVector::new();
    enumerate(&slots, 0, d, &mut current, &mut out);
    out
}

fn enumerate(slots: &[(usize, u32)], at: usize, budget: u32, current: &mut NVector, out: &mut Vec<NVector>) {
    if at == slots.len() {
        out.push(current.clone());
        return;
    }
    let (i, k) = slots[at];
    for c in 0..=budget / k {
        if c > 0 {
            current.0.insert((i, k), u64::from(c));
        }
        enumerate(slots, at + 1, budget - c * k, current, out);
    }
    current.0.remove(&(i, k));
}

/// `F(nu)` truncated to degree `<= d`, summed over unrestricted `N`.
pub fn fermionic_sum(cd: &CartanData, nu: &NuSpec, d: u32) -> Result<Character> {
    nu.validate(cd)?;
    let mut out = Character::zero();
    for n in n_vectors(cd, d) {
        let mut coeff: i64 = 1;
        let mut root = vec![0i64; cd.rank()];
        for (i, k, c) in n.entries() {
            let c = c as i64;
            let p = p_quantity(cd, nu, &n, i, k)?;
            coeff = coeff.checked_mul(gen_binomial(p + c, c)?).ok_or(Error::Overflow)?;
            root[i - 1] += i64::from(k) * c;
        }
        if coeff != 0 {
            out.add_term(-&cd.from_root_coords(&root), coeff)?;
        }
    }
    Ok(out)
}

fn normalized_kr(cd: &CartanData, cache: &KrCache, i: usize, k: u32) -> Result<Character> {
    let chi = cache.kr_qchar_base(cd, i, i64::from(k))?;
    Ok(normalize(&restrict(cd, &chi), &(i64::from(k) * &Weight::fundamental(cd.rank(), i))))
}

/// `Q_nu = prod (e^{-k Lambda_i} chi(W_k^{(i)}))^{nu_k^{(i)}}`, untruncated.
pub fn q_nu(cd: &CartanData, nu: &NuSpec, cache: &KrCache) -> Result<Character> {
    nu.validate(cd)?;
    let mut acc = Character::one(cd.rank());
    for (i, k, c) in nu.entries() {
        acc = acc.checked_mul(&normalized_kr(cd, cache, i, k)?.checked_pow(cd.rank(), c)?)?;
    }
    Ok(acc)
}

/// Compares `Q_nu * prod(1 - e^{-alpha})` with `F(nu)` up to degree `d`.
pub fn verify_kr_formula(cd: &CartanData, nu: &NuSpec, d: u32, cache: &KrCache) -> Result<VerifyReport> {
    nu.validate(cd)?;
    let mut lhs = truncate(cd, &delta_product(cd), d)?;
    for (i, k, c) in nu.entries() {
        let factor = truncate(cd, &normalized_kr(cd, cache, i, k)?, d)?;
        for _ in 0..c {
            lhs = mul_truncated(cd, &lhs, &factor, d)?;
        }
    }
    let rhs = fermionic_sum(cd, nu, d)?;
    Ok(VerifyReport::compare_characters(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{make_cartan, Series};
    use crate::fmalgo::Caps;
    use proptest::prelude::*;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

    fn a(n: usize) -> CartanData {
        make_cartan(Series::A, n).unwrap()
    }

    fn e(cd: &CartanData, root: &[i64], c: i64) -> (Weight, i64) {
        (-&cd.from_root_coords(root), c)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(gen_binomial(0, 0).unwrap(), 1);
        assert_eq!(gen_binomial(-1, 1).unwrap(), -1);
        assert_eq!(gen_binomial(-2, 2).unwrap(), 3);
        assert_eq!(gen_binomial(5, 2).unwrap(), 10);
        assert_eq!(gen_binomial(2, 5).unwrap(), 0);
        assert!(matches!(gen_binomial(3, -1), Err(Error::NegativeB(-1))));
    }

    #[test]
    fn pascal_recurrence() {
        let mut runner = TestRunner::new_with_rng(Config::with_cases(1000), TestRng::from_seed(RngAlgorithm::ChaCha, &[3; 32]));
        runner
            .run(&(-40i64..40, 1i64..12), |(a, b)| {
                prop_assert_eq!(gen_binomial(a, b).unwrap(), gen_binomial(a - 1, b - 1).unwrap() + gen_binomial(a - 1, b).unwrap());
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn vacancy_numbers() {
        let cd = a(1);
        let n2: NVector = [(1, 1, 2)].into_iter().collect();
        assert_eq!(p_quantity(&cd, &NuSpec::new(), &n2, 1, 1).unwrap(), -4);
        let nu: NuSpec = "1:1:1".parse().unwrap();
        assert_eq!(p_quantity(&cd, &nu, &NVector::new(), 1, 3).unwrap(), 1);
        for k in 1..6 {
            assert_eq!(p_quantity(&cd, &NuSpec::new(), &NVector::new(), 1, k).unwrap(), 0);
        }
        let g2 = make_cartan(Series::G, 2).unwrap();
        let n: NVector = [(1, 1, 1), (2, 2, 3)].into_iter().collect();
        for i in 1..=2 {
            for k in 1..5 {
                p_quantity(&g2, &NuSpec::new(), &n, i, k).unwrap();
            }
        }
    }

    #[test]
    fn fermionic_sums_a1() {
        let cd = a(1);
        let zero = fermionic_sum(&cd, &NuSpec::new(), 2).unwrap();
        assert_eq!(zero, Character::try_from(vec![e(&cd, &[0], 1), e(&cd, &[1], -1)]).unwrap());
        let one = fermionic_sum(&cd, &"1:1:1".parse().unwrap(), 2).unwrap();
        assert_eq!(one, Character::try_from(vec![e(&cd, &[0], 1), e(&cd, &[2], -1)]).unwrap());
        assert_eq!(fermionic_sum(&a(3), &"2:1:1".parse().unwrap(), 0).unwrap(), Character::one(3));
    }

    #[test]
    fn n_vector_count() {
        // Partitions of 0..=4 into parts of one colour: 1 + 1 + 2 + 3 + 5.
        assert_eq!(n_vectors(&a(1), 4).len(), 12);
    }

    #[test]
    fn kr_formula_small() {
        let cache = KrCache::new(Caps::default());
        assert!(verify_kr_formula(&a(1), &"1:1:1".parse().unwrap(), 4, &cache).unwrap().equal);
        assert!(verify_kr_formula(&a(2), &"1:1:1".parse().unwrap(), 4, &cache).unwrap().equal);
        assert!(verify_kr_formula(&a(2), &NuSpec::new(), 4, &cache).unwrap().equal);
    }

    #[test]
    fn nu_text_and_json() {
        let nu: NuSpec = " 1:2:1, 2:1:3".parse().unwrap();
        assert_eq!(nu.to_string(), "1:2:1,2:1:3");
        assert_eq!(serde_json::to_string(&nu).unwrap(), "[[1,2,1],[2,1,3]]");
        assert_eq!(serde_json::from_str::<NuSpec>("[[1,2,1],[2,1,3]]").unwrap(), nu);
        assert!("1:0:1".parse::<NuSpec>().is_err());
        assert!("1:1".parse::<NuSpec>().is_err());
        assert!(nu.validate(&a(1)).is_err());
    }
}
