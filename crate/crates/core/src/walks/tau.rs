use std::collections::BTreeSet;

use super::ordinal::OrdinalCNF;
use super::walk::WalkFamily;
use super::WalkError;

/// `f : k → [bound]^{<ω}` on a finite slice `k` of ω, with
/// `X(f) = {(i, ξ) : ξ ∈ f(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinalFunction {
    rows: Vec<BTreeSet<OrdinalCNF>>,
}

impl OrdinalFunction {
    pub fn new(rows: Vec<Vec<OrdinalCNF>>) -> Self {
        OrdinalFunction { rows: rows.into_iter().map(|r| r.into_iter().collect()).collect() }
    }

    pub fn rows(&self) -> &[BTreeSet<OrdinalCNF>] {
        &self.rows
    }

    /// `X(f)` in row-major order.
    pub fn x_set(&self) -> Vec<(usize, OrdinalCNF)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |x| (i, x.clone()))).collect()
    }

    /// `f ≤ g` iff `X(f) ⊆ X(g)`.
    pub fn leq(&self, other: &OrdinalFunction) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.is_empty() || other.rows.get(i).is_some_and(|s| r.is_subset(s)))
    }

    /// Strong supremum of `⋃ f(i)`: the least ordinal above all of it.
    pub fn sp(&self) -> OrdinalCNF {
        self.rows.iter().filter_map(|r| r.last()).max().map_or_else(OrdinalCNF::zero, OrdinalCNF::succ)
    }
}

/// `τ_γ(i, ξ) = 1` iff `e_γ(ξ) = i`, for `ξ < γ`.
pub fn tau(walks: &WalkFamily, gamma: &OrdinalCNF, i: usize, xi: &OrdinalCNF) -> Result<u8, WalkError> {
    if xi >= gamma {
        return Err(WalkError::NotOrdered { low: xi.to_string(), high: gamma.to_string() });
    }
    Ok(u8::from(walks.rho1(xi, gamma)? == i as u64))
}

/// `τ_{sp(f)}` on the columns `⋃ f(i)` together with `φ_f` on `X(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauPhi {
    pub sp: OrdinalCNF,
    /// `(ξ, e_{sp(f)}(ξ))`: the unique row where column `ξ` of `τ_{sp(f)}` is 1.
    pub tau_columns: Vec<(OrdinalCNF, u64)>,
    /// `((i, ξ), φ_f(i, ξ))` over `X(f)`.
    pub phi: Vec<((usize, OrdinalCNF), u8)>,
}

/// `φ_f(i, ξ) = 1` iff `e_{sp(f)}(ξ) = i`, evaluated from its definition and
/// asserted equal to `τ_{sp(f)}|_{X(f)}`.
pub fn build_tau_phi(walks: &WalkFamily, f: &OrdinalFunction) -> Result<TauPhi, WalkError> {
    let sp = f.sp();
    let columns: BTreeSet<&OrdinalCNF> = f.rows.iter().flatten().collect();
    let mut tau_columns = Vec::with_capacity(columns.len());
    for xi in columns {
        tau_columns.push((xi.clone(), walks.rho1(xi, &sp)?));
    }
    let mut phi = Vec::new();
    for (i, xi) in f.x_set() {
        let e = walks.rho1(&xi, &sp)?;
        let value = u8::from(e == i as u64);
        let t = tau_columns.iter().find(|(x, _)| x == &xi).map(|&(_, row)| u8::from(row == i as u64));
        if t != Some(value) {
            return Err(WalkError::Verification(format!("phi_f differs from tau_sp(f) at ({i}, {xi})")));
        }
        phi.push(((i, xi), value));
    }
    Ok(TauPhi { sp, tau_columns, phi })
}
