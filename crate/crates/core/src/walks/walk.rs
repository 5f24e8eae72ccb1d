use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use super::ladder::LadderSystem;
use super::ordinal::OrdinalCNF;
use super::WalkError;

/// The fiber maps `e_β = ρ₁(·, β)` below a bound, for one ladder system.
///
/// `ρ₁` values are memoized; the memo is a pure cache shared by clones.
#[derive(Clone)]
pub struct WalkFamily {
    ladders: Arc<dyn LadderSystem>,
    bound: OrdinalCNF,
    memo: Arc<Mutex<HashMap<(OrdinalCNF, OrdinalCNF), u64>>>,
}

impl WalkFamily {
    pub fn new(ladders: Arc<dyn LadderSystem>, bound: OrdinalCNF) -> Self {
        WalkFamily { ladders, bound, memo: Arc::new(Mutex::new(HashMap::new())) }
    }

    pub fn ladders(&self) -> &dyn LadderSystem {
        self.ladders.as_ref()
    }

    pub fn bound(&self) -> &OrdinalCNF {
        &self.bound
    }

    fn check(&self, alpha: &OrdinalCNF) -> Result<(), WalkError> {
        if alpha >= &self.bound {
            return Err(WalkError::BoundExceeded { ordinal: alpha.to_string(), bound: self.bound.to_string() });
        }
        Ok(())
    }

    fn check_order(xi: &OrdinalCNF, beta: &OrdinalCNF) -> Result<(), WalkError> {
        if xi > beta {
            return Err(WalkError::NotOrdered { low: xi.to_string(), high: beta.to_string() });
        }
        Ok(())
    }

    /// One step of the walk from `beta` towards `xi < beta`: the weight
    /// `|C_β ∩ ξ|` and the next ordinal. Finite descents are taken in one jump.
    fn step(&self, xi: &OrdinalCNF, beta: &OrdinalCNF) -> (u64, OrdinalCNF) {
        if beta.is_successor() {
            // every weight on β → β-1 → … is zero
            let (lam, _) = beta.split_finite();
            let next = if xi >= &lam { xi.clone() } else { lam };
            (0, next)
        } else {
            self.ladders.split(beta, xi)
        }
    }

    /// `ρ₁(ξ, β) = max{|C_β ∩ ξ|, ρ₁(ξ, min(C_β ∖ ξ))}`, `ρ₁(ξ, ξ) = 0`.
    pub fn rho1(&self, xi: &OrdinalCNF, beta: &OrdinalCNF) -> Result<u64, WalkError> {
        self.check(beta)?;
        Self::check_order(xi, beta)?;
        let key = (xi.clone(), beta.clone());
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(v);
        }
        let mut cur = beta.clone();
        let mut weight = 0;
        while &cur != xi {
            let (w, next) = self.step(xi, &cur);
            weight = weight.max(w);
            cur = next;
        }
        self.memo.lock().expect("memo lock").insert(key, weight);
        Ok(weight)
    }

    /// The full walk `β = β_0 > β_1 > … > β_k = ξ` with the weight of each step.
    pub fn walk(&self, xi: &OrdinalCNF, beta: &OrdinalCNF) -> Result<Vec<(OrdinalCNF, u64)>, WalkError> {
        self.check(beta)?;
        Self::check_order(xi, beta)?;
        let mut out = Vec::new();
        let mut cur = beta.clone();
        while &cur != xi {
            if cur.is_successor() {
                let p = cur.pred().expect("successor");
                out.push((cur, 0));
                cur = p;
            } else {
                let (w, next) = self.ladders.split(&cur, xi);
                out.push((cur, w));
                cur = next;
            }
        }
        out.push((cur, 0));
        Ok(out)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    /// `{ξ ∈ [lo, α) : ρ₁(ξ, α) < w}`, a finite set.
    pub fn below_weight(&self, alpha: &OrdinalCNF, w: u64, lo: &OrdinalCNF) -> Result<BTreeSet<OrdinalCNF>, WalkError> {
        self.check(alpha)?;
        let mut out = BTreeSet::new();
        self.below_weight_into(alpha, w, lo, &mut out);
        Ok(out)
    }

    fn below_weight_into(&self, alpha: &OrdinalCNF, w: u64, lo: &OrdinalCNF, out: &mut BTreeSet<OrdinalCNF>) {
        if w == 0 || alpha <= lo {
            return;
        }
        if alpha.is_successor() {
            // ξ ∈ [λ, α) is reached by zero-weight steps
            let (lam, k) = alpha.split_finite();
            for i in 0..k {
                let x = lam.plus_nat(i);
                if &x >= lo {
                    out.insert(x);
                }
            }
            self.below_weight_into(&lam, w, lo, out);
            return;
        }
        let mut prev: Option<OrdinalCNF> = None;
        for n in 0..w {
            let g = self.ladders.term(alpha, n);
            let start = match &prev {
                Some(p) => p.succ().max(lo.clone()),
                None => lo.clone(),
            };
            if g >= start {
                out.insert(g.clone());
                self.below_weight_into(&g, w, &start, out);
            }
            prev = Some(g);
        }
    }

    /// The fiber `e_β^{-1}(k)`.
    pub fn fiber(&self, beta: &OrdinalCNF, k: u64) -> Result<BTreeSet<OrdinalCNF>, WalkError> {
        let upto = self.below_weight(beta, k + 1, &OrdinalCNF::zero())?;
        let below = self.below_weight(beta, k, &OrdinalCNF::zero())?;
        Ok(upto.difference(&below).cloned().collect())
    }

    /// `D(α, β) = {ξ < α : e_α(ξ) ≠ e_β(ξ)}` for `α ≤ β`, computed exactly by
    /// recursion on the walks from `α` and `β` over intervals of `ξ`.
    pub fn coherence_defect(&self, alpha: &OrdinalCNF, beta: &OrdinalCNF) -> Result<BTreeSet<OrdinalCNF>, WalkError> {
        self.check(beta)?;
        Self::check_order(alpha, beta)?;
        let mut out = BTreeSet::new();
        self.diff_into(alpha.clone(), 0, beta.clone(), 0, OrdinalCNF::zero(), &mut out)?;
        Ok(out)
    }

    /// Adds `{ξ ∈ [lo, min(α, β)) : max(a, ρ₁(ξ, α)) ≠ max(b, ρ₁(ξ, β))}`.
    fn diff_into(
        &self,
        alpha: OrdinalCNF,
        a: u64,
        beta: OrdinalCNF,
        b: u64,
        lo: OrdinalCNF,
        out: &mut BTreeSet<OrdinalCNF>,
    ) -> Result<(), WalkError> {
        let (alpha, a, beta, b) = if alpha <= beta { (alpha, a, beta, b) } else { (beta, b, alpha, a) };
        if alpha <= lo {
            return Ok(());
        }
        if alpha == beta {
            if a != b {
                self.below_weight_into(&alpha, a.max(b), &lo, out);
            }
            return Ok(());
        }
        if beta.is_successor() {
            let (lam, _) = beta.split_finite();
            let next = if alpha >= lam { alpha.clone() } else { lam };
            return self.diff_into(alpha, a, next, b, lo, out);
        }
        // ξ in (β[n-1], β[n]] walks to β[n] with weight n
        // ladder points below lo contribute nothing
        let mut n = if lo.is_zero() { 0 } else { self.ladders.split(&beta, &lo).0 };
        let mut prev = n.checked_sub(1).map(|m| self.ladders.term(&beta, m));
        loop {
            let g = self.ladders.term(&beta, n);
            let start = match &prev {
                Some(p) => p.succ().max(lo.clone()),
                None => lo.clone(),
            };
            let bn = b.max(n);
            if g >= alpha {
                self.diff_into(alpha, a, g, bn, start, out)?;
                return Ok(());
            }
            if g >= start {
                let left = a.max(self.rho1(&g, &alpha)?);
                if left != bn {
                    out.insert(g.clone());
                }
                self.diff_into(alpha.clone(), a, g.clone(), bn, start, out)?;
            }
            prev = Some(g);
            n += 1;
        }
    }
}

/// Reported, not asserted: `|D(α, β)|` histogram and largest fibers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefectStatistics {
    pub pairs: usize,
    pub defect_sizes: BTreeMap<usize, usize>,
    pub max_defect: usize,
    pub max_fiber: usize,
}

/// Statistics over the given pairs `α ≤ β`, with fibers `e_β^{-1}(k)` for `k ≤ max_k`.
pub fn defect_statistics(
    walks: &WalkFamily,
    pairs: &[(OrdinalCNF, OrdinalCNF)],
    max_k: u64,
) -> Result<DefectStatistics, WalkError> {
    let mut stats = DefectStatistics::default();
    for (alpha, beta) in pairs {
        let d = walks.coherence_defect(alpha, beta)?.len();
        *stats.defect_sizes.entry(d).or_default() += 1;
        stats.max_defect = stats.max_defect.max(d);
        for k in 0..=max_k {
            stats.max_fiber = stats.max_fiber.max(walks.fiber(beta, k)?.len());
        }
        stats.pairs += 1;
    }
    Ok(stats)
}
