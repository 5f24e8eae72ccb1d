//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact; the only tolerances are the runtime budgets printed with each line.

#[path = "../../core/tests/common/lemma_oracle.rs"]
#[allow(dead_code)]
mod lemma_oracle;

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rlim_cli::input::{load_ses, load_system, read_document, ses_source};
use rlim_cli::run::{bundled_corpus, gaussian_dims};
use rlim_cli::{run, Command, ExperimentConfig};
use rlim_core::coherence::{
    build_akl_systems, build_ideal, extend_family, find_trivialization, is_n_coherent, CoherentFamily, Target,
};
use rlim_core::prosys::{derived_limits, is_flasque, les_of_ses, roos_complex, Caps};
use rlim_core::random::{random_directed_poset, random_flasque_system, random_poset, random_system};
use rlim_core::walks::{
    build_tau_phi, recursive_base_family, support_invariant_holds, tau, CanonicalLadders, OrdinalCNF, OrdinalFunction,
    WalkFamily,
};
use rlim_core::zmodule::{Coeff, FinAbGroup};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite_a_systems() -> Outcome {
    let caps = Caps::default();
    for kappa in 1..=2 {
        for lambda in 1..=2 {
            let ses = build_akl_systems(kappa, lambda, Target::new(Coeff::Integers, 1), &caps).map_err(|e| e.to_string())?;
            let l = derived_limits(ses.sub(), 2, &caps).map_err(|e| e.to_string())?;
            let expected = [FinAbGroup::free(Coeff::Integers, kappa * lambda), FinAbGroup::trivial(Coeff::Integers), FinAbGroup::trivial(Coeff::Integers)];
            ensure(l == expected, || format!("A({kappa},{lambda}): got {l:?}"))?;
        }
    }
    Ok("A(k,l) for k,l in {1,2}: lim^0 = Z^(kl), lim^1 = lim^2 = 0".into())
}

fn flasque_vanishing() -> Outcome {
    let caps = Caps::default();
    let b = build_akl_systems(2, 2, Target::new(Coeff::Integers, 1), &caps).map_err(|e| e.to_string())?;
    ensure(is_flasque(b.mid(), &caps).map_err(|e| e.to_string())?.flasque, || "B(2,2) not flasque".into())?;
    let l = derived_limits(b.mid(), 2, &caps).map_err(|e| e.to_string())?;
    ensure(l[1].is_trivial() && l[2].is_trivial(), || format!("B(2,2): lim^1 = {}, lim^2 = {}", l[1], l[2]))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..50 {
        let n = rng.gen_range(1..=6);
        let p = random_poset(&mut rng, n, 0.4);
        let summands = rng.gen_range(1..=3);
        let s = random_flasque_system(&mut rng, p, summands, Coeff::Integers).map_err(|e| e.to_string())?;
        ensure(is_flasque(&s, &caps).map_err(|e| e.to_string())?.flasque, || format!("random system {i} not flasque"))?;
        let l = derived_limits(&s, 2, &caps).map_err(|e| e.to_string())?;
        ensure(l[1].is_trivial() && l[2].is_trivial(), || format!("random flasque system {i}: {l:?}"))?;
    }
    Ok("B(2,2) flasque with lim^1 = lim^2 = 0; 50 random flasque systems vanish".into())
}

fn v_poset_nonvanishing() -> Outcome {
    let caps = Caps::default();
    let doc = read_document(&bundled_corpus().join("v_poset.json")).map_err(|e| e.to_string())?;
    let s = load_system(doc.node(), Coeff::Integers, &caps).map_err(|e| e.to_string())?;
    let l = derived_limits(&s, 1, &caps).map_err(|e| e.to_string())?;
    ensure(l[0].is_trivial() && l[1] == FinAbGroup::free(Coeff::Integers, 1), || format!("got {l:?}"))?;
    for p in [2, 3] {
        let r = roos_complex(&s.with_coeff(Coeff::ModP(p)), &caps).map_err(|e| e.to_string())?;
        let dims = gaussian_dims(r.complex(), p);
        ensure(dims.get(1) == Some(&1), || format!("F_{p} dims {dims:?}"))?;
    }
    Ok("lim^1 = Z; row-reduction dim H^1 = 1 over F_2 and F_3".into())
}

fn oracle_equivalence() -> Outcome {
    let mut cfg = ExperimentConfig::new(Command::SuiteOracle { max_rank: 64 }, None);
    cfg.coeff = Some(Coeff::ModP(2));
    let report = run(&cfg).map_err(|e| e.to_string())?;
    ensure(report.failures.is_empty(), || report.failures.join("; "))?;
    let t = report.table("oracle").ok_or("no oracle table")?;
    ensure(t.rows.len() >= 8, || format!("only {} corpus systems checked", t.rows.len()))?;
    ensure(t.rows.iter().all(|r| r[4] == "true"), || "disagreement".into())?;
    Ok(format!("{} corpus systems agree in every degree over Z/2", t.rows.len()))
}

fn lemma_equivalence() -> Outcome {
    let caps = Caps::default();
    let instances: Vec<lemma_oracle::Instance> =
        (1..=4).flat_map(|m| (1..=2).flat_map(move |n| lemma_oracle::instances(m, n))).collect();
    let bad: Vec<String> = instances
        .par_iter()
        .filter_map(|inst| {
            let out = lemma_oracle::decide(inst, &caps);
            (out.lim_vanishes != out.all_trivial || out.solver_disagreements > 0).then(|| {
                format!("gens {:?} J {:b} n {}: {out:?}", inst.gens, inst.jmax, inst.n)
            })
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} instances fail, first {}", bad.len(), bad[0]))?;
    Ok(format!("{} instances, |Y| <= 4, n in {{1,2}}", instances.len()))
}

fn les_exactness() -> Outcome {
    let caps = Caps::default();
    let mut files: Vec<_> = std::fs::read_dir(bundled_corpus()).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut checked = 0;
    let mut flasque_mid = 0;
    for f in files {
        let Ok(doc) = read_document(&f) else { continue };
        if ses_source(doc.node()).is_none() {
            continue;
        }
        let name = f.file_stem().unwrap().to_string_lossy().into_owned();
        let ses = load_ses(doc.node(), Coeff::Integers, &caps).map_err(|e| format!("{name}: {e}"))?;
        let r = les_of_ses(&ses, 2, &caps).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.all_exact(), || format!("{name}: not exact"))?;
        if r.mid_flasque == Some(true) {
            flasque_mid += 1;
            ensure(r.lim1_holds == Some(true), || format!("{name}: lim^1 quotient description fails"))?;
        }
        if name == "v_ses" {
            ensure(r.connecting_nonzero.first() == Some(&true), || "V-poset connecting map is zero".into())?;
        }
        checked += 1;
    }
    ensure(checked >= 3, || format!("only {checked} sequences in the corpus"))?;
    Ok(format!("{checked} corpus sequences exact ({flasque_mid} with flasque middle); V-poset connecting map nonzero"))
}

/// `δψ` for a 1-dimensional family `ψ` with rank-one values.
fn coboundary(psi: &CoherentFamily) -> Result<CoherentFamily, String> {
    let mut f = CoherentFamily::zero(2, psi.index().to_vec(), psi.target(), psi.modulus().clone()).map_err(|e| e.to_string())?;
    for t in f.tuples(2).collect::<Vec<_>>() {
        let dom = f.domain(&t);
        let at = |face: usize, y: usize| {
            let d = psi.domain(&[face]);
            psi.get(&[face])[(d & ((1u64 << y) - 1)).count_ones() as usize].clone()
        };
        let v: Vec<BigInt> = (0..64).filter(|y| dom >> y & 1 == 1).map(|y| at(t[1], y) - at(t[0], y)).collect();
        f.set(&t, v).map_err(|e| e.to_string())?;
    }
    Ok(f)
}

/// Coherent by construction: restrictions of one function (`n = 1`) or a
/// coboundary (`n = 2`), then changed arbitrarily at coordinates in `J_max`.
fn coherent_family(rng: &mut ChaCha8Rng, bits: usize, n: usize) -> Result<CoherentFamily, String> {
    let jmax: Vec<usize> = (0..bits).filter(|_| rng.gen_bool(0.4)).collect();
    let modulus = build_ideal(bits, std::slice::from_ref(&jmax)).map_err(|e| e.to_string())?;
    let index: Vec<u64> = (0..1u64 << bits).collect();
    let target = Target::new(Coeff::ModP(2), 1);
    let mut psi = CoherentFamily::zero(1, index, target, modulus).map_err(|e| e.to_string())?;
    let g: Vec<i64> = (0..bits).map(|_| rng.gen_range(0..2)).collect();
    for t in psi.tuples(1).collect::<Vec<_>>() {
        let dom = psi.domain(&t);
        let v = (0..bits)
            .filter(|y| dom >> y & 1 == 1)
            .map(|y| BigInt::from(if n == 1 { g[y] } else { rng.gen_range(0..2) }))
            .collect();
        psi.set(&t, v).map_err(|e| e.to_string())?;
    }
    let mut fam = if n == 1 { psi } else { coboundary(&psi)? };
    for t in fam.tuples(n).collect::<Vec<_>>() {
        let dom = fam.domain(&t);
        let mut v = fam.get(&t);
        for (k, y) in (0..bits).filter(|y| dom >> y & 1 == 1).enumerate() {
            if jmax.contains(&y) && rng.gen_bool(0.5) {
                v[k] += 1;
            }
        }
        fam.set(&t, v).map_err(|e| e.to_string())?;
    }
    Ok(fam)
}

fn extension_operator() -> Outcome {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut changed = Vec::new();
    let mut nonzero = 0;
    for i in 0..20 {
        let (kappa, lambda) = if i % 2 == 0 { (1, 1) } else { (1, 2) };
        let n = 1 + (i / 2) % 2;
        let fam = coherent_family(&mut rng, kappa * lambda, n)?;
        nonzero += usize::from(!fam.is_zero());
        let ext = extend_family(&fam, kappa, lambda, 2, 2, &caps).map_err(|e| e.to_string())?;
        let before = (is_n_coherent(&fam).coherent, find_trivialization(&fam).map_err(|e| e.to_string())?.is_some());
        let after = (is_n_coherent(&ext).coherent, find_trivialization(&ext).map_err(|e| e.to_string())?.is_some());
        if !before.0 || before != after {
            changed.push(format!("family {i}: {before:?} -> {after:?}"));
        }
    }
    ensure(changed.is_empty(), || changed.join("; "))?;
    Ok(format!("20 coherent families ({nonzero} nonzero) stay coherent and trivial over (2,2)"))
}

fn sample(rng: &mut ChaCha8Rng) -> OrdinalCNF {
    let mut x = OrdinalCNF::monomial(3, rng.gen_range(0..3));
    for e in (0..3).rev() {
        x = x.add(&OrdinalCNF::monomial(e, rng.gen_range(0..5)));
    }
    x
}

fn walks_fidelity() -> Outcome {
    let bound: OrdinalCNF = "w^3*3".parse().map_err(|e| format!("{e}"))?;
    let w = WalkFamily::new(Arc::new(CanonicalLadders), bound.clone());
    let err = |e: rlim_core::walks::WalkError| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut functions = 0;
    while functions < 100 {
        let rows = rng.gen_range(1..5);
        let f = OrdinalFunction::new((0..rows).map(|_| (0..rng.gen_range(0..4)).map(|_| sample(&mut rng)).collect()).collect());
        if f.sp() >= bound {
            continue;
        }
        let tp = build_tau_phi(&w, &f).map_err(err)?;
        for ((i, xi), v) in &tp.phi {
            ensure(*v == tau(&w, &tp.sp, *i, xi).map_err(err)?, || format!("phi_f differs from tau at ({i}, {xi})"))?;
        }
        functions += 1;
    }
    for k in 0..500 {
        let mut t = [sample(&mut rng), sample(&mut rng), sample(&mut rng)];
        t.sort();
        let [a, b, c] = t;
        let dac = w.coherence_defect(&a, &c).map_err(err)?;
        let dab = w.coherence_defect(&a, &b).map_err(err)?;
        let dbc = w.coherence_defect(&b, &c).map_err(err)?;
        for x in &dac {
            ensure(dab.contains(x) || dbc.contains(x), || format!("triple {k}: {x} in D({a},{c}) only"))?;
            ensure(w.rho1(x, &a).map_err(err)? != w.rho1(x, &c).map_err(err)?, || format!("triple {k}: {x} wrongly in D({a},{c})"))?;
        }
        // completeness on sampled points below a
        for _ in 0..4 {
            let x = sample(&mut rng);
            if x < a && !dac.contains(&x) {
                ensure(w.rho1(&x, &a).map_err(err)? == w.rho1(&x, &c).map_err(err)?, || format!("triple {k}: {x} missing from D({a},{c})"))?;
            }
        }
    }
    let omega2: OrdinalCNF = "w^2".parse().map_err(|e| format!("{e}"))?;
    let fam = recursive_base_family(&CanonicalLadders, &omega2, 4, Coeff::ModP(2)).map_err(err)?;
    for s in &fam.stages {
        ensure(support_invariant_holds(&fam.stages, &s.beta.succ()), || format!("support invariant fails at {}", s.beta))?;
    }
    Ok(format!("phi = tau on 100 functions; 500 defect triples; support invariant at {} stages below w^2", fam.stages.len()))
}

fn goblot_directed() -> Outcome {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..50 {
        let n = rng.gen_range(1..=6);
        let p = random_directed_poset(&mut rng, n, 0.3);
        let top = p.maximum().ok_or_else(|| format!("system {i}: no maximum"))?;
        let summands = rng.gen_range(1..=3);
        let s = random_system(&mut rng, p, summands, Coeff::Integers).map_err(|e| e.to_string())?;
        let r = roos_complex(&s, &caps).map_err(|e| e.to_string())?;
        let h = r.complex().cohomology().map_err(|e| e.to_string())?;
        let lim0 = h.first().map_or(FinAbGroup::trivial(Coeff::Integers), |(_, g)| g.clone());
        ensure(lim0 == FinAbGroup::free(Coeff::Integers, s.rank(top)), || format!("system {i}: lim^0 = {lim0}, top term rank {}", s.rank(top)))?;
        for (k, g) in h.iter().skip(1) {
            ensure(g.is_trivial(), || format!("system {i}: lim^{k} = {g}"))?;
        }
    }
    Ok("50 random directed systems: lim^0 = top term, lim^n = 0 for n >= 1".into())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("1 finite A-systems", Duration::from_secs(60), finite_a_systems),
        ("2 flasque vanishing", Duration::from_secs(60), flasque_vanishing),
        ("3 V-poset lim^1", Duration::from_secs(60), v_poset_nonvanishing),
        ("4 oracle equivalence", Duration::from_secs(300), oracle_equivalence),
        ("5 coherent families", Duration::from_secs(600), lemma_equivalence),
        ("6 long exact sequences", Duration::from_secs(60), les_exactness),
        ("7 extension operator", Duration::from_secs(60), extension_operator),
        ("8 walks", Duration::from_secs(120), walks_fidelity),
        ("9 directed systems", Duration::from_secs(60), goblot_directed),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}, but took {elapsed:.1?} > {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [exact; {:.2}s of {}s]", elapsed.as_secs_f64(), budget.as_secs()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [exact; {:.2}s of {}s]", elapsed.as_secs_f64(), budget.as_secs());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
