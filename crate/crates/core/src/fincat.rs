//! Finite categories, functors, natural transformations and (adjoint)
//! equivalences — the strict 2-category of finite categories in which every
//! pasting equality in this library is decided by literal table comparison.
//!
//! All identifiers are plain strings; every collection is a `BTreeMap` /
//! `BTreeSet` so values are canonical and equality is bit-exact.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Report;

/// A finite category given by explicit tables.
///
/// `mor` contains *all* morphisms, including the identities; `compose`
/// contains an entry for every composable pair `(g, f)` (meaning `g ∘ f`,
/// i.e. `f` first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct FinCat {
    pub objects: BTreeSet<String>,
    /// morphism name → (source object, target object)
    pub mor: BTreeMap<String, (String, String)>,
    /// object → name of its identity morphism
    pub identity: BTreeMap<String, String>,
    /// (g, f) → g ∘ f, for every pair with tgt(f) = src(g)
    pub compose: BTreeMap<(String, String), String>,
}

impl FinCat {
    /// The terminal category: one object, one (identity) morphism.
    pub fn terminal() -> FinCat {
        FinCat::discrete(&["*"])
    }

    /// Discrete category on the given object names.
    pub fn discrete(names: &[&str]) -> FinCat {
        let mut c = FinCat::default();
        for n in names {
            let n = n.to_string();
            let id = format!("id_{n}");
            c.objects.insert(n.clone());
            c.mor.insert(id.clone(), (n.clone(), n.clone()));
            c.identity.insert(n, id.clone());
            c.compose.insert((id.clone(), id.clone()), id);
        }
        c
    }

    pub fn src(&self, m: &str) -> &str {
        &self.mor[m].0
    }

    pub fn tgt(&self, m: &str) -> &str {
        &self.mor[m].1
    }

    pub fn id_of(&self, o: &str) -> &str {
        &self.identity[o]
    }

    /// `g ∘ f` (apply `f` first). Panics on non-composable input: all callers
    /// are expected to have validated boundaries already.
    pub fn comp(&self, g: &str, f: &str) -> &str {
        self.compose
            .get(&(g.to_string(), f.to_string()))
            .unwrap_or_else(|| panic!("compose table missing ({g}, {f})"))
    }

    /// Compose a sequence of morphism names applied left-to-right
    /// (`word[0]` first). An empty word denotes the identity at `at`.
    pub fn comp_word(&self, word: &[String], at: &str) -> String {
        let mut acc = self.id_of(at).to_string();
        for m in word {
            acc = self.comp(m, &acc).to_string();
        }
        acc
    }

    pub fn hom(&self, a: &str, b: &str) -> Vec<String> {
        self.mor
            .iter()
            .filter(|(_, (s, t))| s == a && t == b)
            .map(|(m, _)| m.clone())
            .collect()
    }

    /// Does `m` have a (necessarily unique) two-sided inverse?
    pub fn inverse_of(&self, m: &str) -> Option<String> {
        let (a, b) = self.mor[m].clone();
        for n in self.hom(&b, &a) {
            if self.comp(&n, m) == self.id_of(&a) && self.comp(m, &n) == self.id_of(&b) {
                return Some(n);
            }
        }
        None
    }

    pub fn is_iso(&self, m: &str) -> bool {
        self.inverse_of(m).is_some()
    }

    /// Connected components of the underlying graph (objects modulo zigzags).
    /// Returned canonically: components sorted by their least object.
    pub fn pi0(&self) -> Vec<BTreeSet<String>> {
        let mut uf = UnionFind::new(self.objects.iter().cloned());
        for (s, t) in self.mor.values() {
            uf.union(s, t);
        }
        uf.classes()
    }

    /// Isomorphism classes of objects, sorted by least representative.
    pub fn iso_classes(&self) -> Vec<BTreeSet<String>> {
        let mut uf = UnionFind::new(self.objects.iter().cloned());
        for (m, (s, t)) in &self.mor {
            if self.is_iso(m) {
                uf.union(s, t);
            }
        }
        uf.classes()
    }
}

/// A small deterministic union–find over string keys.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: BTreeMap<String, String>,
}

impl UnionFind {
    pub fn new(keys: impl IntoIterator<Item = String>) -> Self {
        UnionFind { parent: keys.into_iter().map(|k| (k.clone(), k)).collect() }
    }

    pub fn find(&mut self, k: &str) -> String {
        let p = self.parent[k].clone();
        if p == k {
            return p;
        }
        let root = self.find(&p);
        self.parent.insert(k.to_string(), root.clone());
        root
    }

    pub fn union(&mut self, a: &str, b: &str) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Attach the lexicographically larger root under the smaller one
            // so results are order-independent.
            if ra < rb {
                self.parent.insert(rb, ra);
            } else {
                self.parent.insert(ra, rb);
            }
        }
    }

    pub fn same(&mut self, a: &str, b: &str) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn classes(&mut self) -> Vec<BTreeSet<String>> {
        let keys: Vec<String> = self.parent.keys().cloned().collect();
        let mut by_root: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for k in keys {
            let r = self.find(&k);
            by_root.entry(r).or_default().insert(k);
        }
        by_root.into_values().collect()
    }
}

/// Validate the category laws exhaustively.
///
/// Returns `Err(MalformedTables)` when identifiers dangle (the tables cannot
/// even be interpreted); otherwise a [`Report`] with one entry per law
/// instance.
pub fn check_category(c: &FinCat) -> Result<Report> {
    // Well-formedness: every referenced identifier must be declared.
    for (m, (s, t)) in &c.mor {
        if !c.objects.contains(s) || !c.objects.contains(t) {
            return Err(Error::MalformedTables(format!(
                "morphism {m} references undeclared object ({s} or {t})"
            )));
        }
    }
    for o in &c.objects {
        match c.identity.get(o) {
            None => return Err(Error::MalformedTables(format!("object {o} has no identity entry"))),
            Some(i) if !c.mor.contains_key(i) => {
                return Err(Error::MalformedTables(format!("identity of {o} is undeclared morphism {i}")))
            }
            _ => {}
        }
    }
    for ((g, f), h) in &c.compose {
        for m in [g, f, h] {
            if !c.mor.contains_key(m) {
                return Err(Error::MalformedTables(format!(
                    "compose entry ({g}, {f}) references undeclared morphism {m}"
                )));
            }
        }
    }

    let mut rep = Report::new("category");

    // Identities must be endomorphisms at their object.
    for (o, i) in &c.identity {
        let ok = c.src(i) == o && c.tgt(i) == o;
        rep.check("identity-boundary", o.clone(), ok, || {
            format!("identity {i} of {o} has boundary {} -> {}", c.src(i), c.tgt(i))
        });
    }

    // Totality and closure of composition.
    let morphs: Vec<String> = c.mor.keys().cloned().collect();
    for g in &morphs {
        for f in &morphs {
            if c.src(g) != c.tgt(f) {
                if c.compose.contains_key(&(g.clone(), f.clone())) {
                    rep.fail("compose-typed", format!("({g},{f})"), "entry for non-composable pair");
                }
                continue;
            }
            match c.compose.get(&(g.clone(), f.clone())) {
                None => rep.fail("compose-total", format!("({g},{f})"), "missing entry"),
                Some(h) => {
                    let ok = c.src(h) == c.src(f) && c.tgt(h) == c.tgt(g);
                    rep.check("compose-closed", format!("({g},{f})"), ok, || {
                        format!("{g}∘{f} = {h} has boundary {} -> {}", c.src(h), c.tgt(h))
                    });
                }
            }
        }
    }
    if !rep.is_pass() {
        // Unit/associativity scans below would panic on missing entries.
        return Ok(rep);
    }

    // Units.
    for f in &morphs {
        let (a, b) = c.mor[f].clone();
        let left = c.comp(c.identity[&b].clone().as_str(), f).to_string();
        rep.check("unit-left", f.clone(), left == *f, || format!("id_{b}∘{f} = {left}"));
        let right = c.comp(f, c.identity[&a].clone().as_str()).to_string();
        rep.check("unit-right", f.clone(), right == *f, || format!("{f}∘id_{a} = {right}"));
    }

    // Associativity.
    for h in &morphs {
        for g in &morphs {
            if c.src(h) != c.tgt(g) {
                continue;
            }
            for f in &morphs {
                if c.src(g) != c.tgt(f) {
                    continue;
                }
                let l = c.comp(c.comp(h, g).to_string().as_str(), f).to_string();
                let r = c.comp(h, c.comp(g, f).to_string().as_str()).to_string();
                rep.check("assoc", format!("({h},{g},{f})"), l == r, || {
                    format!("({h}∘{g})∘{f} = {l} but {h}∘({g}∘{f}) = {r}")
                });
            }
        }
    }
    Ok(rep)
}

/// A functor between finite categories, stored with both endpoint categories
/// by value so equality of functors is equality of everything in sight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fun {
    pub dom: FinCat,
    pub cod: FinCat,
    pub omap: BTreeMap<String, String>,
    pub mmap: BTreeMap<String, String>,
}

impl Fun {
    pub fn identity(c: &FinCat) -> Fun {
        Fun {
            dom: c.clone(),
            cod: c.clone(),
            omap: c.objects.iter().map(|o| (o.clone(), o.clone())).collect(),
            mmap: c.mor.keys().map(|m| (m.clone(), m.clone())).collect(),
        }
    }

    /// Constant functor at the object `o` of `cod`.
    pub fn constant(dom: &FinCat, cod: &FinCat, o: &str) -> Fun {
        Fun {
            dom: dom.clone(),
            cod: cod.clone(),
            omap: dom.objects.iter().map(|x| (x.clone(), o.to_string())).collect(),
            mmap: dom.mor.keys().map(|m| (m.clone(), cod.id_of(o).to_string())).collect(),
        }
    }

    /// Build a functor from maps on objects and morphisms given as closures.
    pub fn from_maps(
        dom: &FinCat,
        cod: &FinCat,
        fo: impl Fn(&str) -> String,
        fm: impl Fn(&str) -> String,
    ) -> Fun {
        Fun {
            dom: dom.clone(),
            cod: cod.clone(),
            omap: dom.objects.iter().map(|o| (o.clone(), fo(o))).collect(),
            mmap: dom.mor.keys().map(|m| (m.clone(), fm(m))).collect(),
        }
    }

    pub fn ob(&self, o: &str) -> &str {
        self.omap
            .get(o)
            .unwrap_or_else(|| panic!("functor object map missing {o}"))
    }

    pub fn mo(&self, m: &str) -> &str {
        self.mmap
            .get(m)
            .unwrap_or_else(|| panic!("functor morphism map missing {m}"))
    }

    /// Exhaustive functoriality check.
    pub fn check(&self) -> Result<()> {
        for (o, fo) in &self.omap {
            if !self.dom.objects.contains(o) || !self.cod.objects.contains(fo) {
                return Err(Error::MalformedTables(format!("functor object entry {o} -> {fo} dangles")));
            }
        }
        for o in &self.dom.objects {
            if !self.omap.contains_key(o) {
                return Err(Error::MalformedTables(format!("functor object map missing {o}")));
            }
        }
        for (m, fm) in &self.mmap {
            let Some((s, t)) = self.dom.mor.get(m) else {
                return Err(Error::MalformedTables(format!("functor morphism entry for undeclared {m}")));
            };
            let Some((fs, ft)) = self.cod.mor.get(fm) else {
                return Err(Error::MalformedTables(format!("functor maps {m} to undeclared {fm}")));
            };
            if fs != self.ob(s) || ft != self.ob(t) {
                return Err(Error::BoundaryMismatch(format!(
                    "functor breaks boundary of {m}: image {fm}: {fs} -> {ft}, expected {} -> {}",
                    self.ob(s),
                    self.ob(t)
                )));
            }
        }
        for m in self.dom.mor.keys() {
            if !self.mmap.contains_key(m) {
                return Err(Error::MalformedTables(format!("functor morphism map missing {m}")));
            }
        }
        for (o, i) in &self.dom.identity {
            if self.mo(i) != self.cod.id_of(self.ob(o)) {
                return Err(Error::CheckFailed(format!("functor breaks identity at {o}")));
            }
        }
        for ((g, f), h) in &self.dom.compose {
            let lhs = self.cod.comp(self.mo(g), self.mo(f));
            if lhs != self.mo(h) {
                return Err(Error::CheckFailed(format!(
                    "functor breaks composition at ({g},{f}): F{g}∘F{f} = {lhs} but F({g}∘{f}) = {}",
                    self.mo(h)
                )));
            }
        }
        Ok(())
    }
}

/// Strict composite `g ∘ f` of functors.
pub fn compose_fun(g: &Fun, f: &Fun) -> Result<Fun> {
    if f.cod != g.dom {
        return Err(Error::BoundaryMismatch("compose_fun: f.cod != g.dom".into()));
    }
    Ok(Fun {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        omap: f.omap.iter().map(|(o, fo)| (o.clone(), g.ob(fo).to_string())).collect(),
        mmap: f.mmap.iter().map(|(m, fm)| (m.clone(), g.mo(fm).to_string())).collect(),
    })
}

/// A natural transformation between parallel functors, as its component table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Nat {
    pub src: Fun,
    pub tgt: Fun,
    /// object of `src.dom` → morphism of `src.cod`
    pub comp: BTreeMap<String, String>,
}

impl Nat {
    pub fn identity(f: &Fun) -> Nat {
        Nat {
            src: f.clone(),
            tgt: f.clone(),
            comp: f.omap.iter().map(|(o, fo)| (o.clone(), f.cod.id_of(fo).to_string())).collect(),
        }
    }

    pub fn at(&self, o: &str) -> &str {
        self.comp
            .get(o)
            .unwrap_or_else(|| panic!("nat component missing at {o}"))
    }

    /// Boundary + naturality check (exhaustive).
    pub fn check(&self) -> Result<()> {
        if self.src.dom != self.tgt.dom || self.src.cod != self.tgt.cod {
            return Err(Error::BoundaryMismatch("nat between non-parallel functors".into()));
        }
        let cod = &self.src.cod;
        for o in &self.src.dom.objects {
            let Some(m) = self.comp.get(o) else {
                return Err(Error::MalformedTables(format!("nat component missing at {o}")));
            };
            if !cod.mor.contains_key(m) {
                return Err(Error::MalformedTables(format!("nat component at {o} dangles: {m}")));
            }
            if cod.src(m) != self.src.ob(o) || cod.tgt(m) != self.tgt.ob(o) {
                return Err(Error::BoundaryMismatch(format!(
                    "nat component at {o} has boundary {} -> {}, expected {} -> {}",
                    cod.src(m),
                    cod.tgt(m),
                    self.src.ob(o),
                    self.tgt.ob(o)
                )));
            }
        }
        for (m, (a, b)) in &self.src.dom.mor {
            let left = cod.comp(self.at(b), self.src.mo(m)).to_string();
            let right = cod.comp(self.tgt.mo(m), self.at(a)).to_string();
            if left != right {
                return Err(Error::CheckFailed(format!(
                    "naturality fails at {m}: α_{b}∘F{m} = {left} but G{m}∘α_{a} = {right}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_invertible(&self) -> bool {
        self.src
            .dom
            .objects
            .iter()
            .all(|o| self.src.cod.is_iso(self.at(o)))
    }

    pub fn invert(&self) -> Result<Nat> {
        let mut comp = BTreeMap::new();
        for (o, m) in &self.comp {
            match self.src.cod.inverse_of(m) {
                Some(inv) => {
                    comp.insert(o.clone(), inv);
                }
                None => {
                    return Err(Error::CheckFailed(format!("component at {o} is not invertible")));
                }
            }
        }
        Ok(Nat { src: self.tgt.clone(), tgt: self.src.clone(), comp })
    }
}

/// Vertical composite `β ∘ α` (apply `α` first).
pub fn vcompose_nat(beta: &Nat, alpha: &Nat) -> Result<Nat> {
    if alpha.tgt != beta.src {
        return Err(Error::BoundaryMismatch("vcompose_nat: alpha.tgt != beta.src".into()));
    }
    let cod = &alpha.src.cod;
    let comp = alpha
        .comp
        .iter()
        .map(|(o, m)| (o.clone(), cod.comp(beta.at(o), m).to_string()))
        .collect();
    Ok(Nat { src: alpha.src.clone(), tgt: beta.tgt.clone(), comp })
}

/// Left whisker `F ∗ α` (post-compose by `F`): components `F(α_x)`.
pub fn hwhisker_left(f: &Fun, alpha: &Nat) -> Result<Nat> {
    if alpha.src.cod != f.dom {
        return Err(Error::BoundaryMismatch("hwhisker_left: alpha.cod != F.dom".into()));
    }
    Ok(Nat {
        src: compose_fun(f, &alpha.src)?,
        tgt: compose_fun(f, &alpha.tgt)?,
        comp: alpha.comp.iter().map(|(o, m)| (o.clone(), f.mo(m).to_string())).collect(),
    })
}

/// Right whisker `α ∗ F` (pre-compose by `F`): components `α_{F x}`.
pub fn hwhisker_right(alpha: &Nat, f: &Fun) -> Result<Nat> {
    if f.cod != alpha.src.dom {
        return Err(Error::BoundaryMismatch("hwhisker_right: F.cod != alpha.dom".into()));
    }
    Ok(Nat {
        src: compose_fun(&alpha.src, f)?,
        tgt: compose_fun(&alpha.tgt, f)?,
        comp: f.omap.iter().map(|(o, fo)| (o.clone(), alpha.at(fo).to_string())).collect(),
    })
}

/// Horizontal composite `β ∗ α` for `α: F ⇒ G: C → D`, `β: H ⇒ K: D → E`,
/// defined as `(β ∗ G) ∘ (H ∗ α)` (equal to the other order by interchange).
pub fn hcompose_nat(beta: &Nat, alpha: &Nat) -> Result<Nat> {
    let left = hwhisker_left(&beta.src, alpha)?;
    let right = hwhisker_right(beta, &alpha.tgt)?;
    vcompose_nat(&right, &left)
}

/// Product of finitely many categories, with tuple naming `"(a,b,…)"` for
/// both objects and morphisms.
pub fn product_cats(parts: &[&FinCat]) -> FinCat {
    assert!(!parts.is_empty(), "product of zero categories not supported");
    if parts.len() == 1 {
        return parts[0].clone();
    }
    let mut c = FinCat::default();
    // Cartesian products of object and morphism name lists, in order.
    let obj_tuples = cartesian(&parts.iter().map(|p| p.objects.iter().cloned().collect()).collect::<Vec<Vec<_>>>());
    let mor_tuples = cartesian(&parts.iter().map(|p| p.mor.keys().cloned().collect()).collect::<Vec<Vec<_>>>());
    for t in &obj_tuples {
        c.objects.insert(tuple(t));
    }
    for t in &mor_tuples {
        let srcs: Vec<String> = t.iter().zip(parts).map(|(m, p)| p.src(m).to_string()).collect();
        let tgts: Vec<String> = t.iter().zip(parts).map(|(m, p)| p.tgt(m).to_string()).collect();
        c.mor.insert(tuple(t), (tuple(&srcs), tuple(&tgts)));
    }
    for t in &obj_tuples {
        let ids: Vec<String> = t.iter().zip(parts).map(|(o, p)| p.id_of(o).to_string()).collect();
        c.identity.insert(tuple(t), tuple(&ids));
    }
    for g in &mor_tuples {
        for f in &mor_tuples {
            if g.iter().zip(f.iter()).zip(parts).all(|((gi, fi), p)| p.src(gi) == p.tgt(fi)) {
                let comp: Vec<String> =
                    g.iter().zip(f.iter()).zip(parts).map(|((gi, fi), p)| p.comp(gi, fi).to_string()).collect();
                c.compose.insert((tuple(g), tuple(f)), tuple(&comp));
            }
        }
    }
    c
}

pub fn product_cat(a: &FinCat, b: &FinCat) -> FinCat {
    product_cats(&[a, b])
}

/// Pointwise product of two functors, between the binary product categories.
pub fn product_fun(f: &Fun, g: &Fun) -> Fun {
    let dom = product_cat(&f.dom, &g.dom);
    let cod = product_cat(&f.cod, &g.cod);
    let mut omap = BTreeMap::new();
    for o1 in &f.dom.objects {
        for o2 in &g.dom.objects {
            omap.insert(
                tuple(&[o1.clone(), o2.clone()]),
                tuple(&[f.ob(o1).to_string(), g.ob(o2).to_string()]),
            );
        }
    }
    let mut mmap = BTreeMap::new();
    for m1 in f.dom.mor.keys() {
        for m2 in g.dom.mor.keys() {
            mmap.insert(
                tuple(&[m1.clone(), m2.clone()]),
                tuple(&[f.mo(m1).to_string(), g.mo(m2).to_string()]),
            );
        }
    }
    Fun { dom, cod, omap, mmap }
}

/// Pointwise product of two natural transformations.
pub fn product_nat(a: &Nat, b: &Nat) -> Nat {
    let src = product_fun(&a.src, &b.src);
    let tgt = product_fun(&a.tgt, &b.tgt);
    let mut comp = BTreeMap::new();
    for o1 in &a.src.dom.objects {
        for o2 in &b.src.dom.objects {
            comp.insert(
                tuple(&[o1.clone(), o2.clone()]),
                tuple(&[a.at(o1).to_string(), b.at(o2).to_string()]),
            );
        }
    }
    Nat { src, tgt, comp }
}

/// Opposite category: same names, boundaries flipped, compose transposed.
pub fn opposite_cat(c: &FinCat) -> FinCat {
    FinCat {
        objects: c.objects.clone(),
        mor: c.mor.iter().map(|(m, (s, t))| (m.clone(), (t.clone(), s.clone()))).collect(),
        identity: c.identity.clone(),
        compose: c.compose.iter().map(|((g, f), h)| ((f.clone(), g.clone()), h.clone())).collect(),
    }
}

/// `"(a,b,…)"`.
pub fn tuple(parts: &[String]) -> String {
    format!("({})", parts.join(","))
}

/// Inverse of [`tuple`]: split at top-level commas. Non-tuple names are
/// returned as a single component.
pub fn untuple(s: &str) -> Vec<String> {
    if !(s.starts_with('(') && s.ends_with(')')) {
        return vec![s.to_string()];
    }
    let inner = &s[1..s.len() - 1];
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts
}

fn cartesian(lists: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut acc: Vec<Vec<String>> = vec![vec![]];
    for list in lists {
        let mut next = Vec::new();
        for prefix in &acc {
            for item in list {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        acc = next;
    }
    acc
}

/// Witness of an equivalence `forward: C → D`, `backward: D → C` with
/// `unit: id_C ⇒ backward∘forward` and `counit: forward∘backward ⇒ id_D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub forward: Fun,
    pub backward: Fun,
    pub unit: Nat,
    pub counit: Nat,
}

/// Check boundaries, functoriality, naturality, invertibility and both
/// triangle identities exactly.
pub fn verify_adjoint_equivalence(w: &EquivalenceWitness) -> Report {
    let mut rep = Report::new("adjoint equivalence");
    let c = &w.forward.dom;
    let d = &w.forward.cod;
    if w.backward.dom != *d || w.backward.cod != *c {
        rep.fail("boundary", "backward", "backward is not D -> C");
        return rep;
    }
    for (name, f) in [("forward", &w.forward), ("backward", &w.backward)] {
        rep.check("functor", name, f.check().is_ok(), || format!("{name} is not a functor: {:?}", f.check()));
    }
    let gf = match compose_fun(&w.backward, &w.forward) {
        Ok(x) => x,
        Err(e) => {
            rep.fail("boundary", "G∘F", e.to_string());
            return rep;
        }
    };
    let fg = compose_fun(&w.forward, &w.backward).expect("boundaries already checked");
    rep.check("unit-boundary", "", w.unit.src == Fun::identity(c) && w.unit.tgt == gf, || {
        "unit is not id_C ⇒ G∘F".to_string()
    });
    rep.check("counit-boundary", "", w.counit.src == fg && w.counit.tgt == Fun::identity(d), || {
        "counit is not F∘G ⇒ id_D".to_string()
    });
    if !rep.is_pass() {
        return rep;
    }
    rep.check("unit-natural", "", w.unit.check().is_ok(), || format!("{:?}", w.unit.check()));
    rep.check("counit-natural", "", w.counit.check().is_ok(), || format!("{:?}", w.counit.check()));
    rep.check("unit-invertible", "", w.unit.is_invertible(), || "unit has a non-iso component".into());
    rep.check("counit-invertible", "", w.counit.is_invertible(), || "counit has a non-iso component".into());
    if !rep.is_pass() {
        return rep;
    }
    // Triangle 1: ε_{F a} ∘ F(η_a) = id_{F a} for every object a of C.
    for a in &c.objects {
        let fa = w.forward.ob(a).to_string();
        let lhs = d.comp(w.counit.at(&fa), w.forward.mo(w.unit.at(a))).to_string();
        rep.check("triangle-F", a.clone(), lhs == *d.id_of(&fa), || {
            format!("ε_F{a}∘F(η_{a}) = {lhs} ≠ id_{fa}")
        });
    }
    // Triangle 2: G(ε_d) ∘ η_{G d} = id_{G d} for every object d of D.
    for ob in &d.objects {
        let gd = w.backward.ob(ob).to_string();
        let lhs = c.comp(w.backward.mo(w.counit.at(ob)), w.unit.at(&gd)).to_string();
        rep.check("triangle-G", ob.clone(), lhs == *c.id_of(&gd), || {
            format!("G(ε_{ob})∘η_G{ob} = {lhs} ≠ id_{gd}")
        });
    }
    rep
}

impl EquivalenceWitness {
    pub fn identity(c: &FinCat) -> EquivalenceWitness {
        let idf = Fun::identity(c);
        EquivalenceWitness {
            forward: idf.clone(),
            backward: idf.clone(),
            unit: Nat::identity(&idf),
            counit: Nat::identity(&idf),
        }
    }

    /// Compose two adjoint equivalences `C ≃ D ≃ E` into one `C ≃ E`
    /// (standard composite unit/counit; triangles are preserved).
    pub fn compose(second: &EquivalenceWitness, first: &EquivalenceWitness) -> Result<EquivalenceWitness> {
        let forward = compose_fun(&second.forward, &first.forward)?;
        let backward = compose_fun(&first.backward, &second.backward)?;
        // unit: id_C ⇒ G1 G2 F2 F1 is η1 then G1 η2 F1.
        let mid_unit = hwhisker_right(&hwhisker_left(&first.backward, &second.unit)?, &first.forward)?;
        let unit = vcompose_nat(&mid_unit, &first.unit)?;
        // counit: F2 F1 G1 G2 ⇒ id_E is F2 ε1 G2 then ε2.
        let mid_counit = hwhisker_right(&hwhisker_left(&second.forward, &first.counit)?, &second.backward)?;
        let counit = vcompose_nat(&second.counit, &mid_counit)?;
        Ok(EquivalenceWitness { forward, backward, unit, counit })
    }
}

/// Search for an adjoint equivalence between two finite categories.
///
/// Strategy: equivalent finite categories have isomorphic skeletons, so we
/// (1) split both categories into isomorphism classes, (2) search for an
/// isomorphism between the full subcategories on class representatives by
/// bounded backtracking, and (3) assemble the skeleton inclusions/retractions
/// into an adjoint equivalence, promoting the counit to the unique one
/// satisfying the triangle identities.
///
/// Returns `Ok(None)` for a definite negative (iso-class counts differ, or
/// the exhaustive skeleton search finishes empty) and `BudgetExhausted` when
/// the search was cut short.
pub fn find_equivalence(c: &FinCat, d: &FinCat, budget: u64) -> Result<Option<EquivalenceWitness>> {
    let cc = c.iso_classes();
    let dc = d.iso_classes();
    if cc.len() != dc.len() {
        return Ok(None);
    }
    let (skc, retr_c, incl_c, to_rep_c) = skeleton(c, &cc);
    let (skd, retr_d, incl_d, _to_rep_d) = skeleton(d, &dc);
    let Some(iso) = find_isomorphism(&skc, &skd, budget)? else {
        return Ok(None);
    };
    let iso_inv = invert_iso_fun(&iso);
    // F: C --retr--> skC --iso--> skD --incl--> D, and dually for G.
    let forward = compose_fun(&incl_d, &compose_fun(&iso, &retr_c)?)?;
    let backward = compose_fun(&incl_c, &compose_fun(&iso_inv, &retr_d)?)?;
    // Unit η_a: a → rep(a), the chosen iso to the representative.
    let gf = compose_fun(&backward, &forward)?;
    let unit = Nat {
        src: Fun::identity(c),
        tgt: gf,
        comp: c.objects.iter().map(|a| (a.clone(), to_rep_c[a].clone())).collect(),
    };
    unit.check()?;
    // Counit: the unique ε with G(ε_x) = η_{G x}⁻¹ (G is fully faithful).
    let fg = compose_fun(&forward, &backward)?;
    let mut counit_comp = BTreeMap::new();
    for x in &d.objects {
        let gx = backward.ob(x).to_string();
        let eta_inv = c.inverse_of(&unit.comp[&gx]).expect("unit components are isos");
        let fgx = fg.ob(x).to_string();
        let mut found = None;
        for m in d.hom(&fgx, x) {
            if backward.mo(&m) == eta_inv {
                found = Some(m);
                break;
            }
        }
        let Some(m) = found else {
            return Err(Error::CheckFailed(format!("no counit component over {x}")));
        };
        counit_comp.insert(x.clone(), m);
    }
    let counit = Nat { src: fg, tgt: Fun::identity(d), comp: counit_comp };
    let w = EquivalenceWitness { forward, backward, unit, counit };
    let rep = verify_adjoint_equivalence(&w);
    if rep.is_pass() {
        Ok(Some(w))
    } else {
        Err(Error::CheckFailed(format!(
            "constructed witness failed verification: {:?}",
            rep.first_failure()
        )))
    }
}

/// Full subcategory on the least object of each isomorphism class, plus the
/// retraction, inclusion, and the chosen isos `a → rep(a)`.
fn skeleton(c: &FinCat, classes: &[BTreeSet<String>]) -> (FinCat, Fun, Fun, BTreeMap<String, String>) {
    let mut rep_of: BTreeMap<String, String> = BTreeMap::new();
    for class in classes {
        let rep = class.iter().next().expect("nonempty class").clone();
        for o in class {
            rep_of.insert(o.clone(), rep.clone());
        }
    }
    // Choose, per object, an iso to its representative (identity for reps).
    let mut to_rep: BTreeMap<String, String> = BTreeMap::new();
    for o in &c.objects {
        let r = rep_of[o].clone();
        if *o == r {
            to_rep.insert(o.clone(), c.id_of(o).to_string());
        } else {
            let m = c
                .hom(o, &r)
                .into_iter()
                .find(|m| c.is_iso(m))
                .expect("object isomorphic to its representative");
            to_rep.insert(o.clone(), m);
        }
    }
    let reps: BTreeSet<String> = rep_of.values().cloned().collect();
    let mut sk = FinCat::default();
    sk.objects = reps.clone();
    for (m, (s, t)) in &c.mor {
        if reps.contains(s) && reps.contains(t) {
            sk.mor.insert(m.clone(), (s.clone(), t.clone()));
        }
    }
    for o in &reps {
        sk.identity.insert(o.clone(), c.id_of(o).to_string());
    }
    for ((g, f), h) in &c.compose {
        if sk.mor.contains_key(g) && sk.mor.contains_key(f) {
            sk.compose.insert((g.clone(), f.clone()), h.clone());
        }
    }
    let incl = Fun::from_maps(&sk, c, |o| o.to_string(), |m| m.to_string());
    // Retraction: S(a) = rep(a), S(m: a→b) = to_rep(b) ∘ m ∘ to_rep(a)⁻¹.
    let retr = Fun::from_maps(c, &sk, |o| rep_of[o].clone(), |m| {
        let (a, b) = c.mor[m].clone();
        let from_a = c.inverse_of(&to_rep[&a]).expect("to_rep is iso");
        c.comp(&c.comp(&to_rep[&b], m).to_string(), &from_a).to_string()
    });
    (sk, retr, incl, to_rep)
}

fn invert_iso_fun(f: &Fun) -> Fun {
    Fun {
        dom: f.cod.clone(),
        cod: f.dom.clone(),
        omap: f.omap.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        mmap: f.mmap.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
    }
}

/// Backtracking search for an isomorphism of categories (bijective on objects
/// and morphisms, strictly functorial). Skeletal inputs expected but not
/// required. `budget` bounds the number of search steps.
fn find_isomorphism(c: &FinCat, d: &FinCat, budget: u64) -> Result<Option<Fun>> {
    if c.objects.len() != d.objects.len() || c.mor.len() != d.mor.len() {
        return Ok(None);
    }
    let cobjs: Vec<String> = c.objects.iter().cloned().collect();
    let dobjs: Vec<String> = d.objects.iter().cloned().collect();
    let mut steps = 0u64;
    let mut omap: BTreeMap<String, String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    fn hom_profile(c: &FinCat, o: &str) -> (usize, usize) {
        (c.hom(o, o).len(), c.mor.values().filter(|(s, _)| s == o).count())
    }
    fn go(
        idx: usize,
        cobjs: &[String],
        dobjs: &[String],
        c: &FinCat,
        d: &FinCat,
        omap: &mut BTreeMap<String, String>,
        used: &mut BTreeSet<String>,
        steps: &mut u64,
        budget: u64,
    ) -> Result<Option<Fun>> {
        if idx == cobjs.len() {
            // Objects fixed; now search a compatible morphism bijection.
            return mor_bijection(c, d, omap, steps, budget);
        }
        let a = &cobjs[idx];
        for b in dobjs {
            *steps += 1;
            if *steps > budget {
                return Err(Error::BudgetExhausted("isomorphism search".into()));
            }
            if used.contains(b) || hom_profile(c, a) != hom_profile(d, b) {
                continue;
            }
            omap.insert(a.clone(), b.clone());
            used.insert(b.clone());
            if let Some(f) = go(idx + 1, cobjs, dobjs, c, d, omap, used, steps, budget)? {
                return Ok(Some(f));
            }
            omap.remove(a);
            used.remove(b);
        }
        Ok(None)
    }
    go(0, &cobjs, &dobjs, c, d, &mut omap, &mut used, &mut steps, budget)
}

/// Given a fixed object bijection, search for a functorial morphism bijection.
fn mor_bijection(
    c: &FinCat,
    d: &FinCat,
    omap: &BTreeMap<String, String>,
    steps: &mut u64,
    budget: u64,
) -> Result<Option<Fun>> {
    let morphs: Vec<String> = c.mor.keys().cloned().collect();
    let mut mmap: BTreeMap<String, String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    // Identities are forced.
    for (o, i) in &c.identity {
        let di = d.id_of(&omap[o]).to_string();
        mmap.insert(i.clone(), di.clone());
        used.insert(di);
    }
    fn consistent(c: &FinCat, d: &FinCat, mmap: &BTreeMap<String, String>) -> bool {
        for ((g, f), h) in &c.compose {
            if let (Some(dg), Some(df)) = (mmap.get(g), mmap.get(f)) {
                let dh = d.comp(dg, df).to_string();
                match mmap.get(h) {
                    Some(x) if *x != dh => return false,
                    None if mmap.values().any(|v| *v == dh) && !mmap.values().any(|v| *v == dh && mmap.get(h) == Some(v)) => {
                        // dh already used by a different source morphism; h must map to dh.
                        return false;
                    }
                    _ => {}
                }
            }
        }
        true
    }
    fn go(
        idx: usize,
        morphs: &[String],
        c: &FinCat,
        d: &FinCat,
        omap: &BTreeMap<String, String>,
        mmap: &mut BTreeMap<String, String>,
        used: &mut BTreeSet<String>,
        steps: &mut u64,
        budget: u64,
    ) -> Result<Option<Fun>> {
        if idx == morphs.len() {
            let f = Fun {
                dom: c.clone(),
                cod: d.clone(),
                omap: omap.clone(),
                mmap: mmap.clone(),
            };
            return Ok(if f.check().is_ok() { Some(f) } else { None });
        }
        let m = &morphs[idx];
        if mmap.contains_key(m) {
            return go(idx + 1, morphs, c, d, omap, mmap, used, steps, budget);
        }
        let (a, b) = c.mor[m].clone();
        for cand in d.hom(&omap[&a], &omap[&b]) {
            *steps += 1;
            if *steps > budget {
                return Err(Error::BudgetExhausted("isomorphism search".into()));
            }
            if used.contains(&cand) {
                continue;
            }
            mmap.insert(m.clone(), cand.clone());
            used.insert(cand.clone());
            if consistent(c, d, mmap) {
                if let Some(f) = go(idx + 1, morphs, c, d, omap, mmap, used, steps, budget)? {
                    return Ok(Some(f));
                }
            }
            mmap.remove(m);
            used.remove(&cand);
        }
        Ok(None)
    }
    go(0, &morphs, c, d, omap, &mut mmap, &mut used, steps, budget)
}
