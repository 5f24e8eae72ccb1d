use std::collections::HashMap;

use super::SystemError;

/// Finite partial order on named elements, stored as its full `≤` relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    index: HashMap<String, usize>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `relations` (pairs `lower ≤ upper`
    /// by index) and rejects cycles.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, SystemError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(SystemError::DuplicateElement(name.clone()));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(SystemError::UnknownIndex(a.max(b)));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i][k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(SystemError::NotAntisymmetric(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(Poset { names, leq, index })
    }

    /// Builds a poset from named covering pairs `(lower, upper)`.
    pub fn from_named(names: &[&str], relations: &[(&str, &str)]) -> Result<Self, SystemError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let lookup: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut rel = Vec::with_capacity(relations.len());
        for (a, b) in relations {
            let ia = *lookup.get(a).ok_or_else(|| SystemError::UnknownElement(a.to_string()))?;
            let ib = *lookup.get(b).ok_or_else(|| SystemError::UnknownElement(b.to_string()))?;
            rel.push((ia, ib));
        }
        Poset::new(names, &rel)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::new(names, &rel).expect("chains are posets")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    /// Elements strictly above `a`, in index order.
    pub fn strictly_above(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.lt(a, b)).collect()
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All comparable pairs `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).filter(move |&b| a != b).map(move |b| (a, b))).filter(|&(a, b)| self.leq[a][b]).collect()
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq[x][m]))
    }

    /// Every pair has an upper bound. For finite posets this is the same as
    /// having a maximum (the empty poset counts as directed).
    pub fn is_directed(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| (0..n).any(|c| self.leq[a][c] && self.leq[b][c])))
    }

    /// Every element lies below some member of `subset`.
    pub fn is_cofinal(&self, subset: &[usize]) -> bool {
        (0..self.len()).all(|x| subset.iter().any(|&s| self.leq[x][s]))
    }

    pub fn is_down_set(&self, subset: &[bool]) -> bool {
        (0..self.len()).all(|b| !subset[b] || (0..self.len()).all(|a| !self.leq[a][b] || subset[a]))
    }

    /// The induced suborder on `subset` (kept in the given order).
    pub fn induced(&self, subset: &[usize]) -> Poset {
        let names = subset.iter().map(|&i| self.names[i].clone()).collect();
        let mut rel = Vec::new();
        for (a, &x) in subset.iter().enumerate() {
            for (b, &y) in subset.iter().enumerate() {
                if a != b && self.leq[x][y] {
                    rel.push((a, b));
                }
            }
        }
        Poset::new(names, &rel).expect("suborders of posets are posets")
    }

    /// Number of strict chains with `k + 1` elements, for each `k`.
    pub fn chain_counts(&self) -> Vec<u128> {
        let n = self.len();
        let mut counts = Vec::new();
        let mut layer = vec![1u128; n];
        while layer.iter().any(|&c| c > 0) {
            counts.push(layer.iter().fold(0u128, |a, &c| a.saturating_add(c)));
            let next: Vec<u128> = (0..n)
                .map(|x| {
                    (0..n)
                        .filter(|&y| self.lt(x, y))
                        .fold(0u128, |a, y| a.saturating_add(layer[y]))
                })
                .collect();
            layer = next;
        }
        counts
    }

    /// Strict chains `x_0 < … < x_k` grouped by `k`, each list in
    /// lexicographic order of element indices.
    pub fn strict_chains(&self) -> Vec<Vec<Vec<usize>>> {
        let n = self.len();
        let above: Vec<Vec<usize>> = (0..n).map(|x| self.strictly_above(x)).collect();
        let mut by_len: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut layer: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for c in &layer {
                for &y in &above[*c.last().expect("nonempty chain")] {
                    let mut d = c.clone();
                    d.push(y);
                    next.push(d);
                }
            }
            by_len.push(layer);
            layer = next;
        }
        for l in by_len.iter_mut() {
            l.sort();
        }
        by_len
    }
}
