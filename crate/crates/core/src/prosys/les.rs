use num_bigint::BigInt;
use num_traits::Zero;

use crate::zmodule::{group_from_map, FinAbGroup, IntegerMatrix, IntegerSolver, ModuleMap};

use super::{is_flasque, lattice, roos_complex_to_degree, Caps, InverseSystem, RoosComplex, SystemError};

/// `0 → sub → mid → quot → 0`, exact at every element and natural in the poset.
#[derive(Clone, Debug)]
pub struct SesOfSystems {
    sub: InverseSystem,
    mid: InverseSystem,
    quot: InverseSystem,
    inclusion: Vec<ModuleMap>,
    projection: Vec<ModuleMap>,
}

impl SesOfSystems {
    pub fn new(
        sub: InverseSystem,
        mid: InverseSystem,
        quot: InverseSystem,
        inclusion: Vec<ModuleMap>,
        projection: Vec<ModuleMap>,
    ) -> Result<Self, SystemError> {
        if sub.poset() != mid.poset() || mid.poset() != quot.poset() {
            return Err(SystemError::DifferentPosets);
        }
        let coeff = mid.coeff();
        if sub.coeff() != coeff || quot.coeff() != coeff {
            return Err(SystemError::DifferentPosets);
        }
        let poset = mid.poset();
        let n = poset.len();
        if inclusion.len() != n || projection.len() != n {
            return Err(SystemError::RankCount { expected: n, found: inclusion.len().min(projection.len()) });
        }
        let inclusion: Vec<ModuleMap> = inclusion.into_iter().map(|m| m.with_coeff(coeff)).collect();
        let projection: Vec<ModuleMap> = projection.into_iter().map(|m| m.with_coeff(coeff)).collect();
        let bad = |x: usize, reason: &str| SystemError::NotExactInput {
            element: poset.name(x).to_string(),
            reason: reason.to_string(),
        };
        for x in 0..n {
            let (i, p) = (&inclusion[x], &projection[x]);
            if i.rows() != mid.rank(x) || i.cols() != sub.rank(x) {
                return Err(bad(x, "inclusion has wrong dimensions"));
            }
            if p.rows() != quot.rank(x) || p.cols() != mid.rank(x) {
                return Err(bad(x, "projection has wrong dimensions"));
            }
            if lattice::kernel(i)?.cols() != 0 {
                return Err(bad(x, "inclusion is not injective"));
            }
            if !group_from_map(p)?.1.is_trivial() {
                return Err(bad(x, "projection is not surjective"));
            }
            if !p.mul(i)?.is_zero() {
                return Err(bad(x, "projection does not vanish on the image of the inclusion"));
            }
            if !lattice::contains(i, &lattice::kernel(p)?)? {
                return Err(bad(x, "kernel of the projection is larger than the image of the inclusion"));
            }
        }
        for (x, y) in poset.strict_pairs() {
            if inclusion[x].mul(sub.map(x, y))? != mid.map(x, y).mul(&inclusion[y])? {
                return Err(bad(x, "inclusion does not commute with transition maps"));
            }
            if projection[x].mul(mid.map(x, y))? != quot.map(x, y).mul(&projection[y])? {
                return Err(bad(x, "projection does not commute with transition maps"));
            }
        }
        Ok(SesOfSystems { sub, mid, quot, inclusion, projection })
    }

    pub fn sub(&self) -> &InverseSystem {
        &self.sub
    }

    pub fn mid(&self) -> &InverseSystem {
        &self.mid
    }

    pub fn quot(&self) -> &InverseSystem {
        &self.quot
    }

    pub fn inclusion(&self, x: usize) -> &ModuleMap {
        &self.inclusion[x]
    }

    pub fn projection(&self, x: usize) -> &ModuleMap {
        &self.projection[x]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessNode {
    pub position: String,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    pub max_degree: usize,
    pub directed: bool,
    /// `lim^n sub` for `n ≤ max_degree + 1`.
    pub sub: Vec<FinAbGroup>,
    pub mid: Vec<FinAbGroup>,
    pub quot: Vec<FinAbGroup>,
    /// Whether `δ : lim^n quot → lim^{n+1} sub` is nonzero.
    pub connecting_nonzero: Vec<bool>,
    pub nodes: Vec<ExactnessNode>,
    /// `None` when the subset cap prevents deciding.
    pub mid_flasque: Option<bool>,
    /// `lim quot / im(lim mid)`.
    pub lim1_quotient: FinAbGroup,
    /// `lim^1 sub ≅ lim quot / im(lim mid)`, evaluated when mid is flasque.
    pub lim1_holds: Option<bool>,
    /// `(n, lim^n sub ≅ lim^{n-1} quot)` for `n ≥ 2`, evaluated when mid is flasque.
    pub limn_holds: Vec<(usize, bool)>,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

struct Level {
    cocycles: IntegerMatrix,
    boundaries: IntegerMatrix,
}

fn levels(r: &RoosComplex, top: usize) -> Result<Vec<Level>, SystemError> {
    let c = r.complex();
    (0..=top as i64)
        .map(|n| {
            Ok(Level { cocycles: lattice::kernel(&c.differential_at(n))?, boundaries: c.differential_at(n - 1) })
        })
        .collect()
}

/// Block-diagonal chain map in degree `n` induced by per-element maps.
fn chain_map(src: &RoosComplex, dst: &RoosComplex, maps: &[ModuleMap], n: usize) -> IntegerMatrix {
    let coeff = maps.first().map_or(dst.complex().coeff(), |m| m.coeff());
    let mut out = IntegerMatrix::zeros(dst.complex().rank_at(n as i64), src.complex().rank_at(n as i64), coeff);
    for (k, c) in src.chains(n).iter().enumerate() {
        out.write_block(dst.offset(n, k), src.offset(n, k), &maps[c[0]]);
    }
    out
}

/// `{Z a : F Z a ∈ span(B)}` as generating columns.
fn preimage(z: &IntegerMatrix, f: &IntegerMatrix, b: &IntegerMatrix) -> Result<IntegerMatrix, SystemError> {
    let fz = f.mul(z)?;
    let joint = fz.hstack(&b.scale(&BigInt::from(-1)))?;
    let ker = lattice::kernel(&joint)?;
    let top: Vec<usize> = (0..z.cols()).collect();
    Ok(z.mul(&ker.select_rows(&top))?)
}

/// Connecting map on cocycle generators of `quot` in degree `n`.
struct Connecting<'a> {
    ses: &'a SesOfSystems,
    lift: Vec<IntegerSolver>,
    incl: Vec<IntegerSolver>,
}

impl<'a> Connecting<'a> {
    fn new(ses: &'a SesOfSystems) -> Result<Self, SystemError> {
        let n = ses.mid.poset().len();
        let lift = (0..n).map(|x| IntegerSolver::new(&ses.projection[x])).collect::<Result<_, _>>()?;
        let incl = (0..n).map(|x| IntegerSolver::new(&ses.inclusion[x])).collect::<Result<_, _>>()?;
        Ok(Connecting { ses, lift, incl })
    }

    fn apply(
        &self,
        roos: [&RoosComplex; 3],
        n: usize,
        z: &[BigInt],
    ) -> Result<Vec<BigInt>, SystemError> {
        let [rs, rm, rq] = roos;
        let ses = self.ses;
        let mut y = vec![BigInt::zero(); rm.complex().rank_at(n as i64)];
        for (k, c) in rq.chains(n).iter().enumerate() {
            let x = c[0];
            let (oq, om) = (rq.offset(n, k), rm.offset(n, k));
            let block = &z[oq..oq + ses.quot.rank(x)];
            if ses.mid.rank(x) == 0 {
                continue;
            }
            let sol = self.lift[x]
                .solve(block)?
                .ok_or_else(|| SystemError::Verification("projection not surjective on a chain".into()))?;
            y[om..om + sol.len()].clone_from_slice(&sol);
        }
        let w = rm.complex().differential_at(n as i64).apply(&y)?;
        let mut out = vec![BigInt::zero(); rs.complex().rank_at(n as i64 + 1)];
        for (k, c) in rm.chains(n + 1).iter().enumerate() {
            let x = c[0];
            let (om, os) = (rm.offset(n + 1, k), rs.offset(n + 1, k));
            let block = &w[om..om + ses.mid.rank(x)];
            if ses.sub.rank(x) == 0 {
                if block.iter().any(|v| !v.is_zero()) {
                    return Err(SystemError::Verification("zig-zag leaves the image of the inclusion".into()));
                }
                continue;
            }
            let sol = self.incl[x]
                .solve(block)?
                .ok_or_else(|| SystemError::Verification("zig-zag leaves the image of the inclusion".into()))?;
            out[os..os + sol.len()].clone_from_slice(&sol);
        }
        Ok(out)
    }

    fn matrix(&self, roos: [&RoosComplex; 3], n: usize, gens: &IntegerMatrix) -> Result<IntegerMatrix, SystemError> {
        let rows = roos[0].complex().rank_at(n as i64 + 1);
        let cols = (0..gens.cols()).map(|j| self.apply(roos, n, &gens.column(j))).collect::<Result<Vec<_>, _>>()?;
        Ok(IntegerMatrix::from_columns(rows, &cols, gens.coeff()))
    }
}

/// Long exact sequence of derived limits up to `lim^{max_degree}`, with
/// exactness verified at every node. A node that fails is a verification error.
pub fn les_of_ses(ses: &SesOfSystems, max_degree: usize, caps: &Caps) -> Result<LesReport, SystemError> {
    let top = max_degree + 2;
    let rs = roos_complex_to_degree(&ses.sub, top, caps)?;
    let rm = roos_complex_to_degree(&ses.mid, top, caps)?;
    let rq = roos_complex_to_degree(&ses.quot, top, caps)?;
    let roos = [&rs, &rm, &rq];
    let (ls, lm, lq) = (levels(&rs, max_degree + 1)?, levels(&rm, max_degree)?, levels(&rq, max_degree)?);
    let coeff = ses.mid.coeff();

    let group = |r: &RoosComplex, n: usize| r.complex().cohomology_at(n as i64);
    let sub = (0..=max_degree + 1).map(|n| group(&rs, n)).collect::<Result<Vec<_>, _>>()?;
    let mid = (0..=max_degree).map(|n| group(&rm, n)).collect::<Result<Vec<_>, _>>()?;
    let quot = (0..=max_degree).map(|n| group(&rq, n)).collect::<Result<Vec<_>, _>>()?;

    let conn = Connecting::new(ses)?;
    let deltas: Vec<IntegerMatrix> =
        (0..=max_degree).map(|n| conn.matrix(roos, n, &lq[n].cocycles)).collect::<Result<_, _>>()?;
    let mut connecting_nonzero = Vec::with_capacity(max_degree + 1);
    for (n, d) in deltas.iter().enumerate() {
        connecting_nonzero.push(!lattice::contains(&ls[n + 1].boundaries, d)?);
    }

    let mut nodes = Vec::new();
    for n in 0..=max_degree {
        let inc = chain_map(&rs, &rm, &ses.inclusion, n);
        let proj = chain_map(&rm, &rq, &ses.projection, n);

        // ker(i_*) = im(δ)
        let kernel_i = preimage(&ls[n].cocycles, &inc, &lm[n].boundaries)?;
        let image_delta = if n == 0 {
            lattice::empty(rs.complex().rank_at(0), coeff)
        } else {
            deltas[n - 1].clone()
        };
        let image_delta = image_delta.hstack(&ls[n].boundaries)?;
        nodes.push(ExactnessNode {
            position: format!("lim^{n}(sub)"),
            exact: lattice::same_span(&kernel_i, &image_delta)?,
        });

        // ker(π_*) = im(i_*)
        let kernel_p = preimage(&lm[n].cocycles, &proj, &lq[n].boundaries)?;
        let image_i = inc.mul(&ls[n].cocycles)?.hstack(&lm[n].boundaries)?;
        nodes.push(ExactnessNode {
            position: format!("lim^{n}(mid)"),
            exact: lattice::same_span(&kernel_p, &image_i)?,
        });

        // ker(δ) = im(π_*)
        let zq = &lq[n].cocycles;
        let joint = deltas[n].hstack(&ls[n + 1].boundaries.scale(&BigInt::from(-1)))?;
        let ker = lattice::kernel(&joint)?;
        let top_rows: Vec<usize> = (0..zq.cols()).collect();
        let kernel_d = zq.mul(&ker.select_rows(&top_rows))?;
        let image_p = proj.mul(&lm[n].cocycles)?.hstack(&lq[n].boundaries)?;
        nodes.push(ExactnessNode {
            position: format!("lim^{n}(quot)"),
            exact: lattice::same_span(&kernel_d, &image_p)?,
        });
    }

    // lim quot / im(lim mid)
    let proj0 = chain_map(&rm, &rq, &ses.projection, 0);
    let image0 = proj0.mul(&lm[0].cocycles)?;
    let coords = lattice::coordinates(&lq[0].cocycles, &image0)?
        .ok_or_else(|| SystemError::Verification("image of lim mid is not compatible".into()))?;
    let lim1_quotient = group_from_map(&coords)?.1;

    let mid_flasque = match is_flasque(&ses.mid, caps) {
        Ok(r) => Some(r.flasque),
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e),
    };
    let (lim1_holds, limn_holds) = if mid_flasque == Some(true) {
        let lim1 = Some(sub[1] == lim1_quotient);
        let limn = (2..=max_degree + 1).map(|n| (n, sub[n] == quot[n - 1])).collect();
        (lim1, limn)
    } else {
        (None, Vec::new())
    };

    let report = LesReport {
        max_degree,
        directed: ses.mid.poset().is_directed(),
        sub,
        mid,
        quot,
        connecting_nonzero,
        nodes,
        mid_flasque,
        lim1_quotient,
        lim1_holds,
        limn_holds,
    };
    if let Some(bad) = report.nodes.iter().find(|n| !n.exact) {
        return Err(SystemError::Verification(format!("long exact sequence fails at {}", bad.position)));
    }
    if report.lim1_holds == Some(false) || report.limn_holds.iter().any(|&(_, h)| !h) {
        return Err(SystemError::Verification("flasque middle term but the quotient description fails".into()));
    }
    Ok(report)
}
