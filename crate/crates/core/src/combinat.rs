//! Binomials, non-decreasing multi-indices and exterior-algebra subsets.
//!
//! All indices are 0-based internally; user-facing text prints them 1-based.

use std::fmt;

use crate::error::{Error, Result};

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as usize
}

/// Number of non-decreasing tuples of length `k` with values in `0..c`.
pub fn num_tuples(c: usize, k: i64) -> usize {
    if k < 0 {
        0
    } else if c == 0 {
        usize::from(k == 0)
    } else {
        binomial(k + c as i64 - 1, c as i64 - 1)
    }
}

/// A non-decreasing tuple `u_1 <= ... <= u_k` with values in `0..c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    c: usize,
    entries: Vec<usize>,
}

impl MultiIndex {
    pub fn new(c: usize, mut entries: Vec<usize>) -> Result<Self> {
        if entries.iter().any(|&e| e >= c) {
            return Err(Error::Invalid(format!("tuple entry out of range 1..{c}")));
        }
        entries.sort_unstable();
        Ok(MultiIndex { c, entries })
    }

    pub fn empty(c: usize) -> Self {
        MultiIndex { c, entries: Vec::new() }
    }

    /// All tuples of length `k`, in lexicographic order.
    pub fn all(c: usize, k: usize) -> Vec<MultiIndex> {
        fn go(c: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex { c, entries: cur.clone() });
                return;
            }
            for v in start..c {
                cur.push(v);
                go(c, k, v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::with_capacity(num_tuples(c, k as i64));
        go(c, k, 0, &mut Vec::with_capacity(k), &mut out);
        out
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// 0-based lexicographic rank among tuples of the same length.
    pub fn rank(&self) -> usize {
        let k = self.len();
        let mut r = 0;
        let mut lo = 0;
        for (pos, &v) in self.entries.iter().enumerate() {
            let rest = (k - pos - 1) as i64;
            for smaller in lo..v {
                r += num_tuples(self.c - smaller, rest);
            }
            lo = v;
        }
        r
    }

    pub fn unrank(c: usize, k: usize, mut r: usize) -> Result<Self> {
        if r >= num_tuples(c, k as i64) {
            return Err(Error::Invalid(format!("rank {r} out of range for c={c}, k={k}")));
        }
        let mut entries = Vec::with_capacity(k);
        let mut lo = 0;
        for pos in 0..k {
            let rest = (k - pos - 1) as i64;
            let mut v = lo;
            loop {
                let block = num_tuples(c - v, rest);
                if r < block {
                    break;
                }
                r -= block;
                v += 1;
            }
            entries.push(v);
            lo = v;
        }
        Ok(MultiIndex { c, entries })
    }

    /// `[v j]`: append `j` and sort.
    pub fn insert(&self, j: usize) -> MultiIndex {
        let mut entries = self.entries.clone();
        let at = entries.partition_point(|&e| e <= j);
        entries.insert(at, j);
        MultiIndex { c: self.c, entries }
    }

    /// Removes one copy of `j`, if present.
    pub fn remove_one(&self, j: usize) -> Option<MultiIndex> {
        let at = self.entries.iter().position(|&e| e == j)?;
        let mut entries = self.entries.clone();
        entries.remove(at);
        Some(MultiIndex { c: self.c, entries })
    }

    /// Distinct values, ascending.
    pub fn distinct(&self) -> Vec<usize> {
        let mut d = self.entries.clone();
        d.dedup();
        d
    }

    /// Multiplicity of each value `0..c`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.c];
        for &e in &self.entries {
            m[e] += 1;
        }
        m
    }

    pub fn from_multiplicities(m: &[usize]) -> MultiIndex {
        let entries = m.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect();
        MultiIndex { c: m.len(), entries }
    }

    /// Concatenate and sort.
    pub fn merge(&self, other: &MultiIndex) -> MultiIndex {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        entries.sort_unstable();
        MultiIndex { c: self.c, entries }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join1(&self.entries))
    }
}

/// Comma-separated, 1-based.
pub fn join1(v: &[usize]) -> String {
    v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// Strictly increasing subsets of `0..n` of size `k`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Position of `s` in [`subsets`]`(n, s.len())`.
pub fn subset_rank(n: usize, s: &[usize]) -> usize {
    let k = s.len();
    let mut r = 0;
    let mut lo = 0;
    for (pos, &v) in s.iter().enumerate() {
        let rest = (k - pos - 1) as i64;
        for smaller in lo..v {
            r += binomial((n - smaller - 1) as i64, rest);
        }
        lo = v + 1;
    }
    r
}

/// `e_t ∧ e_S = sign * e_{S ∪ t}`; `None` if `t ∈ S`.
pub fn insert_sign(s: &[usize], t: usize) -> Option<(i64, Vec<usize>)> {
    let at = s.partition_point(|&x| x < t);
    if s.get(at) == Some(&t) {
        return None;
    }
    let mut out = s.to_vec();
    out.insert(at, t);
    Some((if at % 2 == 0 { 1 } else { -1 }, out))
}

/// `e_S ∧ e_T = sign * e_{S ∪ T}`; `None` if the subsets overlap.
pub fn wedge_sign(s: &[usize], t: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut inversions = 0usize;
    for &a in s {
        for &b in t {
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    let mut out: Vec<usize> = s.iter().chain(t).copied().collect();
    out.sort_unstable();
    Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tuple_enumeration() {
        let t: Vec<String> = MultiIndex::all(3, 2).iter().map(|m| m.to_string()).collect();
        assert_eq!(t, ["(1,1)", "(1,2)", "(1,3)", "(2,2)", "(2,3)", "(3,3)"]);
        assert_eq!(MultiIndex::new(3, vec![0, 2]).unwrap().rank(), 2);
        assert_eq!(num_tuples(2, 3), 4);
        assert_eq!(MultiIndex::all(3, 0).len(), 1);
        assert_eq!(MultiIndex::empty(3).rank(), 0);
        assert_eq!(num_tuples(3, -1), 0);
        assert!(MultiIndex::unrank(3, 2, 6).is_err());
    }

    #[test]
    fn rank_unrank_inverse() {
        for c in 1..=4 {
            for k in 0..=6 {
                let all = MultiIndex::all(c, k);
                assert_eq!(all.len(), num_tuples(c, k as i64));
                for (r, t) in all.iter().enumerate() {
                    assert_eq!(t.rank(), r);
                    assert_eq!(&MultiIndex::unrank(c, k, r).unwrap(), t);
                }
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn subset_order_and_signs() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        for n in 0..6 {
            for k in 0..=n {
                for (r, s) in subsets(n, k).iter().enumerate() {
                    assert_eq!(subset_rank(n, s), r);
                }
            }
        }
        assert_eq!(insert_sign(&[0, 2], 1), Some((-1, vec![0, 1, 2])));
        assert_eq!(insert_sign(&[0, 2], 2), None);
        assert_eq!(wedge_sign(&[1, 2], &[0]), Some((1, vec![0, 1, 2])));
        assert_eq!(wedge_sign(&[2], &[0, 1]), Some((1, vec![0, 1, 2])));
        assert_eq!(wedge_sign(&[1], &[0]), Some((-1, vec![0, 1])));
    }

    proptest! {
        #[test]
        fn wedge_is_graded_commutative(a in proptest::collection::btree_set(0usize..6, 0..4),
                                       b in proptest::collection::btree_set(0usize..6, 0..4)) {
            let a: Vec<usize> = a.into_iter().collect();
            let b: Vec<usize> = b.into_iter().collect();
            match (wedge_sign(&a, &b), wedge_sign(&b, &a)) {
                (Some((s, u)), Some((t, v))) => {
                    prop_assert_eq!(u, v);
                    let expect = if (a.len() * b.len()).is_multiple_of(2) { 1 } else { -1 };
                    prop_assert_eq!(s * t, expect);
                }
                (None, None) => {}
                _ => prop_assert!(false, "asymmetric vanishing"),
            }
        }

        #[test]
        fn bracket_normalization(c in 1usize..5, k in 0usize..5, seed in 0usize..1000, j in 0usize..5) {
            let j = j % c;
            let all = MultiIndex::all(c, k);
            let v = &all[seed % all.len()];
            let w = v.insert(j);
            prop_assert!(w.entries().windows(2).all(|p| p[0] <= p[1]));
            prop_assert_eq!(w.remove_one(j).unwrap(), v.clone());
            prop_assert_eq!(MultiIndex::from_multiplicities(&w.multiplicities()), w);
        }
    }
}
