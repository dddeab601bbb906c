//! Sorted finite sets of small integers and the binomial bookkeeping around them.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

/// `n choose k`, saturating at `u128::MAX`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let num = (n - i) as u128;
        match acc.checked_mul(num) {
            Some(v) => acc = v / (i as u128 + 1),
            None => {
                let g = num_integer::gcd(acc, i as u128 + 1);
                let reduced = (acc / g).checked_mul(num / ((i as u128 + 1) / g));
                match reduced {
                    Some(v) => acc = v,
                    None => return u128::MAX,
                }
            }
        }
    }
    acc
}

/// A set of distinct integers kept in increasing order.
///
/// Ordering and equality are lexicographic on the sorted element list, which
/// is also the order used for every deterministic tie-break in the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Subset(Vec<u32>);

impl Subset {
    /// Builds a subset from arbitrary-order elements, rejecting repeats.
    pub fn new(mut elems: Vec<u32>) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated element in {elems:?}")));
        }
        Ok(Subset(elems))
    }

    /// Wraps an already strictly increasing list.
    pub(crate) fn from_sorted(elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Subset(elems)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elems(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// `self ⊆ other`, by a merge walk over both sorted lists.
    pub fn is_subset_of(&self, other: &Subset) -> bool {
        let mut it = other.0.iter();
        'outer: for x in &self.0 {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn intersection_len(&self, other: &Subset) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Checks that the subset has exactly `size` elements, all in `lo..=hi`.
    pub fn check_shape(&self, size: usize, lo: u32, hi: u32) -> Result<()> {
        if self.len() != size {
            return Err(Error::invalid(format!(
                "set {self} has {} elements, expected {size}",
                self.len()
            )));
        }
        if let Some(&x) = self.0.iter().find(|&&x| x < lo || x > hi) {
            return Err(Error::invalid(format!(
                "element {x} of {self} outside {lo}..={hi}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

impl FromStr for Subset {
    type Err = Error;

    /// Accepts `1,2,3`, `{1,2,3}` or `{}`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        if body.trim().is_empty() {
            return Ok(Subset(Vec::new()));
        }
        let elems = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::invalid(format!("bad set element {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Subset::new(elems)
    }
}

/// All `k`-subsets of `lo..=hi` in lexicographic order.
pub fn all_subsets(lo: u32, hi: u32, k: usize) -> Vec<Subset> {
    if hi < lo {
        return if k == 0 {
            vec![Subset(Vec::new())]
        } else {
            Vec::new()
        };
    }
    (lo..=hi).combinations(k).map(Subset::from_sorted).collect()
}

/// The `rank`-th `k`-subset of `lo..lo+n` in lexicographic order.
pub fn unrank_subset(lo: u32, n: u32, k: u32, mut rank: u128) -> Subset {
    let mut out = Vec::with_capacity(k as usize);
    let mut next = 0u32;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let block = binom((n - next - 1) as u64, remaining as u64);
            if rank < block {
                out.push(lo + next);
                next += 1;
                break;
            }
            rank -= block;
            next += 1;
        }
    }
    Subset::from_sorted(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(4, 3), 4);
        assert_eq!(binom(6, 4), 15);
        assert_eq!(binom(5, 0), 1);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(45, 9), 886_163_135);
        assert_eq!(binom(100, 50), 100_891_344_545_564_193_334_812_497_256);
    }

    #[test]
    fn binom_saturates() {
        assert_eq!(binom(400, 200), u128::MAX);
    }

    #[test]
    fn subset_ops() {
        let a: Subset = "1,2".parse().unwrap();
        let b: Subset = "{3,1,2}".parse().unwrap();
        assert_eq!(b.elems(), &[1, 2, 3]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(!Subset::new(vec![1, 4]).unwrap().is_subset_of(&b));
        assert_eq!(a.intersection_len(&b), 2);
        assert!(Subset::new(vec![1, 1]).is_err());
        assert_eq!(b.to_string(), "{1,2,3}");
    }

    #[test]
    fn unrank_matches_enumeration() {
        let all = all_subsets(1, 7, 3);
        for (r, s) in all.iter().enumerate() {
            assert_eq!(&unrank_subset(1, 7, 3, r as u128), s);
        }
    }
}
