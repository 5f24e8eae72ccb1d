//! The JSON input document.
//!
//! Top-level keys: `coeff`, `poset`, `system`, `ses`, `ideal`, `family`,
//! `akl`, `xsys`, `ysys`, `walks`. Matrices are row-major integer arrays;
//! a transition map `p[x,y]` for `x ≤ y` has `rank(x)` rows and `rank(y)`
//! columns.

use std::collections::HashMap;

use num_bigint::BigInt;
use rlim_core::coherence::{
    build_akl_systems, build_ideal, build_x_ses, build_x_system, build_y_system, CoherentFamily, SetIdeal, Target,
};
use rlim_core::prosys::{build_system, Caps, InverseSystem, Poset, SesOfSystems};
use rlim_core::walks::OrdinalCNF;
use rlim_core::zmodule::{Coeff, IntegerMatrix};
use serde_json::Value;

use crate::error::{AtPath, CliError};

/// A cursor into the document that remembers its path for error messages.
#[derive(Clone, Copy)]
pub struct Node<'a> {
    value: &'a Value,
    path: &'a str,
}

pub struct Owned {
    value: Value,
}

impl Owned {
    pub fn node(&self) -> Node<'_> {
        Node { value: &self.value, path: "$" }
    }
}

type Res<T> = Result<T, CliError>;

impl<'a> Node<'a> {
    pub fn path(&self) -> &str {
        self.path
    }

    pub fn value(&self) -> &'a Value {
        self.value
    }

    fn err<T>(&self, message: impl Into<String>) -> Res<T> {
        Err(CliError::schema(self.path, message))
    }

    pub fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some_and(|v| !v.is_null())
    }

    /// Optional child at `key`; `null` counts as absent.
    pub fn with<T>(&self, key: &str, f: impl FnOnce(Option<Node<'_>>) -> Res<T>) -> Res<T> {
        let path = format!("{}.{key}", self.path);
        match self.value.get(key).filter(|v| !v.is_null()) {
            Some(v) => f(Some(Node { value: v, path: &path })),
            None => f(None),
        }
    }

    pub fn req<T>(&self, key: &str, f: impl FnOnce(Node<'_>) -> Res<T>) -> Res<T> {
        let path = format!("{}.{key}", self.path);
        match self.value.get(key).filter(|v| !v.is_null()) {
            Some(v) => f(Node { value: v, path: &path }),
            None => Err(CliError::schema(path, "required key is missing")),
        }
    }

    pub fn items<T>(&self, mut f: impl FnMut(usize, Node<'_>) -> Res<T>) -> Res<Vec<T>> {
        let Some(arr) = self.value.as_array() else {
            return self.err("expected an array");
        };
        arr.iter()
            .enumerate()
            .map(|(i, v)| {
                let path = format!("{}[{i}]", self.path);
                f(i, Node { value: v, path: &path })
            })
            .collect()
    }

    pub fn entries<T>(&self, mut f: impl FnMut(&str, Node<'_>) -> Res<T>) -> Res<Vec<T>> {
        let Some(obj) = self.value.as_object() else {
            return self.err("expected an object");
        };
        obj.iter()
            .map(|(k, v)| {
                let path = format!("{}.{k}", self.path);
                f(k, Node { value: v, path: &path })
            })
            .collect()
    }

    pub fn usize(&self) -> Res<usize> {
        match self.value.as_u64() {
            Some(x) => Ok(x as usize),
            None => self.err("expected a non-negative integer"),
        }
    }

    pub fn u64(&self) -> Res<u64> {
        match self.value.as_u64() {
            Some(x) => Ok(x),
            None => self.err("expected a non-negative integer"),
        }
    }

    pub fn string(&self) -> Res<String> {
        match self.value.as_str() {
            Some(s) => Ok(s.to_string()),
            None => self.err("expected a string"),
        }
    }

    pub fn int(&self) -> Res<BigInt> {
        match &self.value {
            Value::Number(n) => match n.as_i64() {
                Some(x) => Ok(BigInt::from(x)),
                None => n.to_string().parse().or_else(|_| self.err("expected an integer")),
            },
            Value::String(s) => s.parse().or_else(|_| self.err("expected an integer")),
            _ => self.err("expected an integer"),
        }
    }

    pub fn ints(&self) -> Res<Vec<BigInt>> {
        self.items(|_, n| n.int())
    }

    pub fn usizes(&self) -> Res<Vec<usize>> {
        self.items(|_, n| n.usize())
    }

    /// A matrix with the given shape; `[]` denotes any `0 × cols` matrix.
    pub fn matrix(&self, rows: usize, cols: usize, coeff: Coeff) -> Res<IntegerMatrix> {
        let data = self.items(|_, r| r.ints())?;
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            let got_cols = data.first().map_or(0, Vec::len);
            return self.err(format!("expected a {rows}x{cols} matrix, got {}x{got_cols}", data.len()));
        }
        IntegerMatrix::from_rows_with_width(&data, cols, coeff).at(self.path)
    }

    pub fn ordinal(&self) -> Res<OrdinalCNF> {
        match &self.value {
            Value::String(s) => s.parse::<OrdinalCNF>().at(self.path),
            Value::Number(_) => Ok(OrdinalCNF::nat(self.u64()?)),
            Value::Array(_) => {
                let terms = self.items(|_, t| {
                    let pair = t.items(|_, x| x.u64())?;
                    match pair[..] {
                        [e, c] => Ok((e as u32, c)),
                        _ => t.err("expected [exponent, coefficient]"),
                    }
                })?;
                OrdinalCNF::from_terms(terms).at(self.path)
            }
            _ => self.err("expected an ordinal (string, integer or CNF term list)"),
        }
    }
}

pub fn parse_document(text: &str, origin: &str) -> Res<Owned> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if !value.is_object() {
        return Err(CliError::schema("$", "document must be an object"));
    }
    Ok(Owned { value })
}

pub fn read_document(path: &std::path::Path) -> Res<Owned> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: origin.clone(), source })?;
    parse_document(&text, &origin)
}

/// The flag wins over the document's `coeff`; the default is ℤ.
pub fn coefficient(doc: Node<'_>, flag: Option<Coeff>) -> Res<Coeff> {
    if let Some(c) = flag {
        return Ok(c);
    }
    doc.with("coeff", |n| match n {
        None => Ok(Coeff::Integers),
        Some(n) => Coeff::parse(&n.string()?).at(n.path()),
    })
}

pub fn parse_poset(node: Node<'_>) -> Res<Poset> {
    let names = node.req("elements", |n| n.items(|_, e| e.string()))?;
    let relations = node.with("relations", |n| match n {
        None => Ok(Vec::new()),
        Some(n) => n.items(|_, r| {
            let pair = r.items(|_, e| e.string())?;
            match &pair[..] {
                [lo, hi] => Ok((lo.clone(), hi.clone())),
                _ => r.err("expected [lower, upper]"),
            }
        }),
    })?;
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut rel = Vec::with_capacity(relations.len());
    for (i, (lo, hi)) in relations.iter().enumerate() {
        let find = |s: &str| {
            index.get(s).copied().ok_or_else(|| CliError::schema(format!("{}.relations[{i}]", node.path()), format!("unknown element {s:?}")))
        };
        rel.push((find(lo)?, find(hi)?));
    }
    Poset::new(names, &rel).at(node.path())
}

fn element(poset: &Poset, node: Node<'_>) -> Res<usize> {
    let name = node.string()?;
    poset.index_of(&name).ok_or_else(|| CliError::schema(node.path(), format!("unknown element {name:?}")))
}

/// `{"ranks": {name: r} | [r, …], "maps": [{"x", "y", "matrix"}]}` over `poset`.
pub fn parse_system(poset: &Poset, node: Node<'_>, coeff: Coeff) -> Res<InverseSystem> {
    let ranks = node.req("ranks", |n| {
        if n.value().is_array() {
            let r = n.usizes()?;
            if r.len() != poset.len() {
                return n.err(format!("expected {} ranks, got {}", poset.len(), r.len()));
            }
            Ok(r)
        } else {
            let mut r = vec![0; poset.len()];
            n.entries(|k, v| {
                let i = poset.index_of(k).ok_or_else(|| CliError::schema(v.path(), format!("unknown element {k:?}")))?;
                r[i] = v.usize()?;
                Ok(())
            })?;
            Ok(r)
        }
    })?;
    let maps = node.with("maps", |n| match n {
        None => Ok(Vec::new()),
        Some(n) => n.items(|_, m| {
            let x = m.req("x", |e| element(poset, e))?;
            let y = m.req("y", |e| element(poset, e))?;
            let mat = m.req("matrix", |e| e.matrix(ranks[x], ranks[y], coeff))?;
            Ok((x, y, mat))
        }),
    })?;
    build_system(poset.clone(), ranks, maps, coeff).at(node.path())
}

/// `{name: matrix}` with one entry per poset element.
fn parse_componentwise(poset: &Poset, node: Node<'_>, rows: &[usize], cols: &[usize], coeff: Coeff) -> Res<Vec<IntegerMatrix>> {
    let mut out: Vec<Option<IntegerMatrix>> = vec![None; poset.len()];
    node.entries(|k, v| {
        let i = poset.index_of(k).ok_or_else(|| CliError::schema(v.path(), format!("unknown element {k:?}")))?;
        out[i] = Some(v.matrix(rows[i], cols[i], coeff)?);
        Ok(())
    })?;
    out.into_iter()
        .enumerate()
        .map(|(i, m)| match m {
            Some(m) => Ok(m),
            None if rows[i] == 0 || cols[i] == 0 => Ok(IntegerMatrix::zeros(rows[i], cols[i], coeff)),
            None => Err(CliError::schema(node.path(), format!("missing component at {:?}", poset.name(i)))),
        })
        .collect()
}

fn target(node: Node<'_>, coeff: Coeff) -> Res<Target> {
    let rank = node.with("rank", |n| n.map_or(Ok(1), |n| n.usize()))?;
    Ok(Target::new(coeff, rank))
}

/// `{"ground": m, "generators": [[…], …]}`.
pub fn parse_ideal(node: Node<'_>) -> Res<SetIdeal> {
    let ground = node.req("ground", |n| n.usize())?;
    let gens = node.req("generators", |n| n.items(|_, g| g.usizes()))?;
    build_ideal(ground, &gens).at(node.path())
}

fn akl_params(node: Node<'_>) -> Res<(usize, usize)> {
    Ok((node.req("kappa", |n| n.usize())?, node.req("lambda", |n| n.usize())?))
}

/// Where a loaded system came from, for reports.
pub fn system_source(doc: Node<'_>) -> Option<&'static str> {
    ["system", "akl", "xsys", "ysys"].into_iter().find(|k| doc.has(k))
}

/// The system named by `system`, `akl` (its `part`: `a`, `b` or `quot`),
/// `xsys` or `ysys`.
pub fn load_system(doc: Node<'_>, coeff: Coeff, caps: &Caps) -> Res<InverseSystem> {
    match system_source(doc) {
        Some("system") => {
            let poset = doc.req("poset", parse_poset)?;
            doc.req("system", |n| parse_system(&poset, n, coeff))
        }
        Some("akl") => doc.req("akl", |n| {
            let (k, l) = akl_params(n)?;
            let part = n.with("part", |p| p.map_or(Ok("a".to_string()), |p| p.string()))?;
            let ses = build_akl_systems(k, l, Target::new(coeff, 1), caps).at(n.path())?;
            match part.as_str() {
                "a" => Ok(ses.sub().clone()),
                "b" => Ok(ses.mid().clone()),
                "quot" => Ok(ses.quot().clone()),
                other => Err(CliError::schema(format!("{}.part", n.path()), format!("unknown part {other:?} (a, b or quot)"))),
            }
        }),
        Some("xsys") => doc.req("xsys", |n| {
            let index = n.req("index", parse_ideal)?;
            let modulus = n.req("modulus", parse_ideal)?;
            build_x_system(&index, &modulus, target(n, coeff)?).at(n.path())
        }),
        Some("ysys") => doc.req("ysys", |n| {
            let kappa = n.req("kappa", |k| k.usize())?;
            let tilde = n.req("tilde", parse_ideal)?;
            build_y_system(kappa, tilde.ground(), &tilde, Target::new(coeff, 1), caps).at(n.path())
        }),
        _ => Err(CliError::schema("$", "no system in document (expected one of system, akl, xsys, ysys)")),
    }
}

pub fn ses_source(doc: Node<'_>) -> Option<&'static str> {
    ["ses", "akl", "xsys"].into_iter().find(|k| doc.has(k))
}

/// `ses` (`sub`, `mid`, `quot` systems plus `inclusion`/`projection`
/// components), `akl` or `xsys`.
pub fn load_ses(doc: Node<'_>, coeff: Coeff, caps: &Caps) -> Res<SesOfSystems> {
    match ses_source(doc) {
        Some("ses") => {
            let poset = doc.req("poset", parse_poset)?;
            doc.req("ses", |n| {
                let sub = n.req("sub", |s| parse_system(&poset, s, coeff))?;
                let mid = n.req("mid", |s| parse_system(&poset, s, coeff))?;
                let quot = n.req("quot", |s| parse_system(&poset, s, coeff))?;
                let inc = n.req("inclusion", |m| parse_componentwise(&poset, m, mid.ranks(), sub.ranks(), coeff))?;
                let proj = n.req("projection", |m| parse_componentwise(&poset, m, quot.ranks(), mid.ranks(), coeff))?;
                SesOfSystems::new(sub, mid, quot, inc, proj).at(n.path())
            })
        }
        Some("akl") => doc.req("akl", |n| {
            let (k, l) = akl_params(n)?;
            build_akl_systems(k, l, Target::new(coeff, 1), caps).at(n.path())
        }),
        Some("xsys") => doc.req("xsys", |n| {
            let index = n.req("index", parse_ideal)?;
            let modulus = n.req("modulus", parse_ideal)?;
            build_x_ses(&index, &modulus, target(n, coeff)?).at(n.path())
        }),
        _ => Err(CliError::schema("$", "no short exact sequence in document (expected one of ses, akl, xsys)")),
    }
}

/// `ideal` is the modulus; `family` holds `n`, `rank`, `index` (a list of
/// subsets, or `"full"` for every subset of the ground set) and `values`
/// (`[{"tuple": [positions], "values": [...]}]`, entries listed over the
/// intersection in increasing order, `rank` per element).
pub fn load_family(doc: Node<'_>, coeff: Coeff) -> Res<CoherentFamily> {
    let modulus = doc.req("ideal", parse_ideal)?;
    doc.req("family", |n| {
        let dim = n.req("n", |d| d.usize())?;
        let tgt = target(n, coeff)?;
        let ground = modulus.ground();
        let index: Vec<u64> = n.req("index", |i| {
            if i.value().as_str() == Some("full") {
                if ground >= 20 {
                    return i.err("\"full\" index needs a ground set below 20 points");
                }
                return Ok((0..1u64 << ground).collect());
            }
            i.items(|_, s| {
                let elems = s.usizes()?;
                if let Some(&e) = elems.iter().find(|&&e| e >= ground) {
                    return s.err(format!("element {e} outside the ground set of size {ground}"));
                }
                Ok(elems.iter().fold(0u64, |m, &e| m | 1 << e))
            })
        })?;
        let mut fam = CoherentFamily::zero(dim, index, tgt, modulus.clone()).at(n.path())?;
        n.with("values", |v| match v {
            None => Ok(()),
            Some(v) => v
                .items(|_, e| {
                    let tuple = e.req("tuple", |t| t.usizes())?;
                    let values = e.req("values", |t| t.ints())?;
                    fam.set(&tuple, values).at(e.path())
                })
                .map(|_| ()),
        })?;
        Ok(fam)
    })
}

/// Parameters for the walks commands.
#[derive(Clone, Debug)]
pub struct WalksInput {
    pub bound: OrdinalCNF,
    pub pairs: Vec<(OrdinalCNF, OrdinalCNF)>,
    pub function: Vec<Vec<OrdinalCNF>>,
    pub samples: Option<usize>,
    pub width: Option<u64>,
    pub max_k: u64,
}

pub fn load_walks(doc: Node<'_>) -> Res<WalksInput> {
    doc.req("walks", |n| {
        let bound = n.with("bound", |b| b.map_or_else(|| Ok("w^3*3".parse().expect("valid")), |b| b.ordinal()))?;
        let pairs = n.with("pairs", |p| match p {
            None => Ok(Vec::new()),
            Some(p) => p.items(|_, q| {
                let v = q.items(|_, o| o.ordinal())?;
                match &v[..] {
                    [a, b] => Ok((a.clone(), b.clone())),
                    _ => q.err("expected a pair of ordinals"),
                }
            }),
        })?;
        let function = n.with("f", |f| f.map_or(Ok(Vec::new()), |f| f.items(|_, r| r.items(|_, o| o.ordinal()))))?;
        let samples = n.with("samples", |s| s.map(|s| s.usize()).transpose())?;
        let width = n.with("width", |s| s.map(|s| s.u64()).transpose())?;
        let max_k = n.with("max_k", |s| s.map_or(Ok(4), |s| s.u64()))?;
        Ok(WalksInput { bound, pairs, function, samples, width, max_k })
    })
}
