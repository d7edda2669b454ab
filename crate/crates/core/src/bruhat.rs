//! Permutations in one-line notation and the Bruhat order on `S_k`.
//!
//! Inversions are *position* pairs `(i, j)`, `i < j`, with `w(i) > w(j)`.
//! A cover `u < u'` means `u' = u * (n m)` (the entries at positions `n < m`
//! swapped) with `l(u') = l(u) + 1`; the label `sum_{t=n}^{m-1} v_t` used by
//! the chain polynomial `R_w` refers to those positions.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Builds from one-line notation `w(1), ..., w(k)` over `{1..k}`.
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let k = one_line.len();
        let mut seen = vec![false; k + 1];
        for &x in &one_line {
            contract!((1..=k).contains(&x) && !seen[x], "{one_line:?} is not a permutation of 1..{k}");
            seen[x] = true;
        }
        Ok(Permutation(one_line))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((1..=k).collect())
    }

    pub fn longest(k: usize) -> Self {
        Permutation((1..=k).rev().collect())
    }

    /// All of `S_k` in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        let mut used = vec![false; k + 1];
        fn rec(k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == k {
                out.push(Permutation(current.clone()));
                return;
            }
            for x in 1..=k {
                if !used[x] {
                    used[x] = true;
                    current.push(x);
                    rec(k, current, used, out);
                    current.pop();
                    used[x] = false;
                }
            }
        }
        rec(k, &mut current, &mut used, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    /// `w(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// Position pairs `(i, j)`, 1-based, `i < j`, `w(i) > w(j)`.
    pub fn inversions(&self) -> BTreeSet<(usize, usize)> {
        let w = &self.0;
        let mut out = BTreeSet::new();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    out.insert((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        let w = &self.0;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    /// Swaps the entries at 1-based positions `a` and `b`.
    pub fn swap_positions(&self, a: usize, b: usize) -> Permutation {
        let mut w = self.0.clone();
        w.swap(a - 1, b - 1);
        Permutation(w)
    }

    /// Upper covers, each paired with the swapped positions `(n, m)`.
    pub fn covers_with_positions(&self) -> Vec<(Permutation, (usize, usize))> {
        let w = &self.0;
        let mut out = Vec::new();
        for n in 0..w.len() {
            for m in n + 1..w.len() {
                // Length rises by exactly one iff w(n) < w(m) and no entry
                // strictly between the two positions has a value between them.
                if w[n] < w[m] && !(n + 1..m).any(|t| w[n] < w[t] && w[t] < w[m]) {
                    out.push((self.swap_positions(n + 1, m + 1), (n + 1, m + 1)));
                }
            }
        }
        out
    }

    pub fn covers(&self) -> Vec<Permutation> {
        self.covers_with_positions().into_iter().map(|(p, _)| p).collect()
    }

    /// Lower covers `u` with `u < self`, paired with the swapped positions.
    pub fn lower_covers_with_positions(&self) -> Vec<(Permutation, (usize, usize))> {
        let w = &self.0;
        let mut out = Vec::new();
        for n in 0..w.len() {
            for m in n + 1..w.len() {
                if w[n] > w[m] && !(n + 1..m).any(|t| w[m] < w[t] && w[t] < w[n]) {
                    out.push((self.swap_positions(n + 1, m + 1), (n + 1, m + 1)));
                }
            }
        }
        out
    }

    /// `K_{s,t}`: inversions `(i, j)` with `s <= i < j <= t + 1`.
    pub fn k_st(&self, s: usize, t: usize) -> Result<usize> {
        let k = self.size();
        contract!(
            1 <= s && s <= t && t < k,
            "K_{{s,t}} needs 1 <= s <= t <= {}, got s={s}, t={t}",
            k.saturating_sub(1)
        );
        Ok(self.inversions().iter().filter(|&&(i, j)| s <= i && j <= t + 1).count())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn same_size(u: &Permutation, w: &Permutation) -> Result<()> {
    contract!(u.size() == w.size(), "permutations of different sizes: {u} vs {w}");
    Ok(())
}

/// `u <= w` in the Bruhat order, by upward search through covers.
pub fn bruhat_leq(u: &Permutation, w: &Permutation) -> Result<bool> {
    same_size(u, w)?;
    let target_len = w.length();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([u.clone()]);
    seen.insert(u.clone());
    while let Some(x) = queue.pop_front() {
        if &x == w {
            return Ok(true);
        }
        if x.length() >= target_len {
            continue;
        }
        for y in x.covers() {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(false)
}

/// Every `u <= w`.
pub fn lower_interval(w: &Permutation) -> BTreeSet<Permutation> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([w.clone()]);
    seen.insert(w.clone());
    while let Some(x) = queue.pop_front() {
        for (y, _) in x.lower_covers_with_positions() {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Maximal chains `id = u_0 < u_1 < ... < u_{l(w)} = w`.
pub fn bruhat_chains(w: &Permutation) -> Vec<Vec<Permutation>> {
    fn rec(w: &Permutation, memo: &mut HashMap<Permutation, Vec<Vec<Permutation>>>) -> Vec<Vec<Permutation>> {
        if let Some(c) = memo.get(w) {
            return c.clone();
        }
        let chains = if w.length() == 0 {
            vec![vec![w.clone()]]
        } else {
            let mut out = Vec::new();
            for (u, _) in w.lower_covers_with_positions() {
                for mut chain in rec(&u, memo) {
                    chain.push(w.clone());
                    out.push(chain);
                }
            }
            out
        };
        memo.insert(w.clone(), chains.clone());
        chains
    }
    rec(w, &mut HashMap::new())
}

/// Number of maximal chains below `w`, counted recursively over lower covers.
pub fn chain_count(w: &Permutation) -> u64 {
    fn rec(w: &Permutation, memo: &mut HashMap<Permutation, u64>) -> u64 {
        if w.length() == 0 {
            return 1;
        }
        if let Some(&c) = memo.get(w) {
            return c;
        }
        let c = w.lower_covers_with_positions().iter().map(|(u, _)| rec(u, memo)).sum();
        memo.insert(w.clone(), c);
        c
    }
    rec(w, &mut HashMap::new())
}
