//! Finite strict 2-categories used as index shapes, together with product
//! and opposite constructions and strict 2-functors for reshaping indices.
//!
//! Conventions: 2-cell names are globally unique across all hom-categories.
//! `X^op` reverses 1-cells only; 2-cells keep their vertical direction.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{check_category, product_cats, tuple, untuple, FinCat};
use crate::report::Report;

/// A finite strict 2-category as explicit tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Fin2Cat {
    pub objects: BTreeSet<String>,
    /// 1-cell name → (source object, target object); includes identities.
    pub onecells: BTreeMap<String, (String, String)>,
    /// object → its identity 1-cell.
    pub id1: BTreeMap<String, String>,
    /// Hom-category per ordered pair of objects: objects are the 1-cells
    /// `a → b`, morphisms are the 2-cells between them.
    pub hom: BTreeMap<(String, String), FinCat>,
    /// Horizontal composition of 1-cells: `(g, f) → g∘f`.
    pub hcomp1: BTreeMap<(String, String), String>,
    /// Horizontal composition of 2-cells: `(β, α) → β∗α`.
    pub hcomp2: BTreeMap<(String, String), String>,
}

impl Fin2Cat {
    pub fn src1(&self, f: &str) -> &str {
        &self.onecells[f].0
    }

    pub fn tgt1(&self, f: &str) -> &str {
        &self.onecells[f].1
    }

    pub fn id1_of(&self, o: &str) -> &str {
        &self.id1[o]
    }

    pub fn hom_of(&self, a: &str, b: &str) -> &FinCat {
        &self.hom[&(a.to_string(), b.to_string())]
    }

    /// The hom-category containing the 1-cell `f`.
    pub fn hom_at(&self, f: &str) -> &FinCat {
        let (a, b) = &self.onecells[f];
        &self.hom[&(a.clone(), b.clone())]
    }

    pub fn hc1(&self, g: &str, f: &str) -> &str {
        self.hcomp1
            .get(&(g.to_string(), f.to_string()))
            .unwrap_or_else(|| panic!("hcomp1 missing ({g}, {f})"))
    }

    pub fn hc2(&self, beta: &str, alpha: &str) -> &str {
        self.hcomp2
            .get(&(beta.to_string(), alpha.to_string()))
            .unwrap_or_else(|| panic!("hcomp2 missing ({beta}, {alpha})"))
    }

    /// All 1-cells, in canonical order.
    pub fn all1(&self) -> Vec<String> {
        self.onecells.keys().cloned().collect()
    }

    /// All 2-cells as (name, hom key), canonical order.
    pub fn all2(&self) -> Vec<(String, (String, String))> {
        let mut out = Vec::new();
        for (key, h) in &self.hom {
            for t in h.mor.keys() {
                out.push((t.clone(), key.clone()));
            }
        }
        out.sort();
        out
    }

    /// (source 1-cell, target 1-cell) of a 2-cell.
    pub fn two_boundary(&self, t: &str) -> (String, String) {
        for h in self.hom.values() {
            if let Some((s, tg)) = h.mor.get(t) {
                return (s.clone(), tg.clone());
            }
        }
        panic!("unknown 2-cell {t}")
    }

    /// Identity 2-cell on a 1-cell.
    pub fn id2_of(&self, f: &str) -> String {
        self.hom_at(f).id_of(f).to_string()
    }

    /// Composable 1-cell pairs `(g, f)` (f first).
    pub fn composable1(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for g in self.onecells.keys() {
            for f in self.onecells.keys() {
                if self.src1(g) == self.tgt1(f) {
                    out.push((g.clone(), f.clone()));
                }
            }
        }
        out
    }

    /// Locally discrete 2-category on a finite category: 1-cells are the
    /// morphisms, all 2-cells are identities.
    pub fn from_cat(c: &FinCat) -> Fin2Cat {
        let mut t = Fin2Cat::default();
        t.objects = c.objects.clone();
        t.onecells = c.mor.clone();
        t.id1 = c.identity.clone();
        for a in &c.objects {
            for b in &c.objects {
                let names: Vec<String> = c.hom(a, b);
                let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                t.hom.insert((a.clone(), b.clone()), FinCat::discrete(&refs));
            }
        }
        t.hcomp1 = c.compose.clone();
        for ((g, f), h) in &c.compose {
            t.hcomp2.insert((format!("id_{g}"), format!("id_{f}")), format!("id_{h}"));
        }
        t
    }

    pub fn terminal() -> Fin2Cat {
        Fin2Cat::from_cat(&FinCat::terminal())
    }
}

/// Opposite 2-category: 1-cells reversed, 2-cells keep direction.
pub fn op2(t: &Fin2Cat) -> Fin2Cat {
    Fin2Cat {
        objects: t.objects.clone(),
        onecells: t.onecells.iter().map(|(f, (a, b))| (f.clone(), (b.clone(), a.clone()))).collect(),
        id1: t.id1.clone(),
        hom: t.hom.iter().map(|((a, b), h)| ((b.clone(), a.clone()), h.clone())).collect(),
        hcomp1: t.hcomp1.iter().map(|((g, f), h)| ((f.clone(), g.clone()), h.clone())).collect(),
        hcomp2: t.hcomp2.iter().map(|((b, a), c)| ((a.clone(), b.clone()), c.clone())).collect(),
    }
}

/// Product of finitely many 2-categories with tuple naming at every level.
pub fn product2(parts: &[&Fin2Cat]) -> Fin2Cat {
    assert!(!parts.is_empty());
    if parts.len() == 1 {
        return parts[0].clone();
    }
    let mut t = Fin2Cat::default();
    let objs = cartesian(&parts.iter().map(|p| p.objects.iter().cloned().collect()).collect::<Vec<Vec<_>>>());
    for o in &objs {
        t.objects.insert(tuple(o));
    }
    let ones = cartesian(&parts.iter().map(|p| p.onecells.keys().cloned().collect()).collect::<Vec<Vec<_>>>());
    for f in &ones {
        let s: Vec<String> = f.iter().zip(parts).map(|(fi, p)| p.src1(fi).to_string()).collect();
        let tg: Vec<String> = f.iter().zip(parts).map(|(fi, p)| p.tgt1(fi).to_string()).collect();
        t.onecells.insert(tuple(f), (tuple(&s), tuple(&tg)));
    }
    for o in &objs {
        let ids: Vec<String> = o.iter().zip(parts).map(|(oi, p)| p.id1_of(oi).to_string()).collect();
        t.id1.insert(tuple(o), tuple(&ids));
    }
    for a in &objs {
        for b in &objs {
            let homs: Vec<&FinCat> =
                a.iter().zip(b.iter()).zip(parts).map(|((ai, bi), p)| p.hom_of(ai, bi)).collect();
            t.hom.insert((tuple(a), tuple(b)), product_cats(&homs));
        }
    }
    for g in &ones {
        for f in &ones {
            if g.iter().zip(f.iter()).zip(parts).all(|((gi, fi), p)| p.src1(gi) == p.tgt1(fi)) {
                let h: Vec<String> =
                    g.iter().zip(f.iter()).zip(parts).map(|((gi, fi), p)| p.hc1(gi, fi).to_string()).collect();
                t.hcomp1.insert((tuple(g), tuple(f)), tuple(&h));
            }
        }
    }
    let twos: Vec<Vec<(String, String, String)>> = parts
        .iter()
        .map(|p| {
            p.all2()
                .into_iter()
                .map(|(t2, (a, b))| (t2, a, b))
                .collect()
        })
        .collect();
    let two_tuples = cartesian(
        &twos
            .iter()
            .map(|v| v.iter().map(|(t2, _, _)| t2.clone()).collect())
            .collect::<Vec<Vec<_>>>(),
    );
    for beta in &two_tuples {
        for alpha in &two_tuples {
            let ok = beta.iter().zip(alpha.iter()).zip(parts).all(|((bi, ai), p)| {
                let (bs, _) = p.two_boundary(bi);
                let (as_, _) = p.two_boundary(ai);
                p.src1(&bs) == p.tgt1(&as_)
            });
            if ok {
                let h: Vec<String> = beta
                    .iter()
                    .zip(alpha.iter())
                    .zip(parts)
                    .map(|((bi, ai), p)| p.hc2(bi, ai).to_string())
                    .collect();
                t.hcomp2.insert((tuple(beta), tuple(alpha)), tuple(&h));
            }
        }
    }
    t
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

/// Exhaustive check of the strict 2-category laws.
pub fn check_two_category(t: &Fin2Cat) -> Result<Report> {
    // Well-formedness.
    for (f, (a, b)) in &t.onecells {
        if !t.objects.contains(a) || !t.objects.contains(b) {
            return Err(Error::MalformedTables(format!("1-cell {f} references undeclared object")));
        }
    }
    for o in &t.objects {
        if !t.id1.contains_key(o) {
            return Err(Error::MalformedTables(format!("object {o} has no identity 1-cell")));
        }
    }
    let mut rep = Report::new("two-category");
    let mut seen2: BTreeSet<String> = BTreeSet::new();
    for ((a, b), h) in &t.hom {
        if !t.objects.contains(a) || !t.objects.contains(b) {
            return Err(Error::MalformedTables(format!("hom({a},{b}) over undeclared objects")));
        }
        match check_category(h) {
            Ok(r) if r.is_pass() => rep.pass("hom-category", format!("({a},{b})")),
            Ok(r) => rep.fail("hom-category", format!("({a},{b})"), format!("{:?}", r.first_failure())),
            Err(e) => return Err(e),
        }
        let expected: BTreeSet<String> = t
            .onecells
            .iter()
            .filter(|(_, (s, tt))| s == a && tt == b)
            .map(|(f, _)| f.clone())
            .collect();
        rep.check("hom-objects", format!("({a},{b})"), h.objects == expected, || {
            format!("hom({a},{b}) objects {:?} != declared 1-cells {:?}", h.objects, expected)
        });
        for m in h.mor.keys() {
            if !seen2.insert(m.clone()) {
                return Err(Error::MalformedTables(format!("2-cell name {m} reused across homs")));
            }
        }
    }
    if !rep.is_pass() {
        return Ok(rep);
    }
    // hcomp1 totality/closure/associativity/units.
    for (g, f) in t.composable1() {
        match t.hcomp1.get(&(g.clone(), f.clone())) {
            None => rep.fail("hcomp1-total", format!("({g},{f})"), "missing"),
            Some(h) => {
                let ok = t.src1(h) == t.src1(&f) && t.tgt1(h) == t.tgt1(&g);
                rep.check("hcomp1-closed", format!("({g},{f})"), ok, || format!("{g}∘{f}={h} misboundaried"));
            }
        }
    }
    if !rep.is_pass() {
        return Ok(rep);
    }
    for f in t.onecells.keys() {
        let (a, b) = t.onecells[f].clone();
        rep.check("hcomp1-unit", f.clone(), t.hc1(t.id1_of(&b), f) == f && t.hc1(f, t.id1_of(&a)) == f, || {
            format!("identity 1-cells are not strict units at {f}")
        });
    }
    for h in t.onecells.keys() {
        for g in t.onecells.keys() {
            if t.src1(h) != t.tgt1(g) {
                continue;
            }
            for f in t.onecells.keys() {
                if t.src1(g) != t.tgt1(f) {
                    continue;
                }
                let l = t.hc1(&t.hc1(h, g).to_string(), f).to_string();
                let r = t.hc1(h, &t.hc1(g, f).to_string()).to_string();
                rep.check("hcomp1-assoc", format!("({h},{g},{f})"), l == r, || format!("{l} != {r}"));
            }
        }
    }
    // hcomp2: totality, closure, functoriality (interchange + identities),
    // associativity, units.
    let all2 = t.all2();
    for (beta, (b1, _c1)) in &all2 {
        for (alpha, (a0, b0)) in &all2 {
            if b0 != b1 {
                continue;
            }
            let key = (beta.clone(), alpha.clone());
            match t.hcomp2.get(&key) {
                None => rep.fail("hcomp2-total", format!("({beta},{alpha})"), "missing"),
                Some(res) => {
                    let (bs, bt) = t.two_boundary(beta);
                    let (as_, at) = t.two_boundary(alpha);
                    let (rs, rt) = t.two_boundary(res);
                    let ok = rs == *t.hc1(&bs, &as_) && rt == *t.hc1(&bt, &at);
                    rep.check("hcomp2-closed", format!("({beta},{alpha})"), ok, || {
                        format!("β∗α = {res} has boundary ({rs},{rt}), expected ({},{})", t.hc1(&bs, &as_), t.hc1(&bt, &at))
                    });
                    let _ = (a0, at);
                }
            }
        }
    }
    if !rep.is_pass() {
        return Ok(rep);
    }
    // id ∗ id = id.
    for (g, f) in t.composable1() {
        let lhs = t.hc2(&t.id2_of(&g), &t.id2_of(&f)).to_string();
        let rhs = t.id2_of(t.hc1(&g, &f).to_string().as_str());
        rep.check("hcomp2-identity", format!("({g},{f})"), lhs == rhs, || format!("{lhs} != {rhs}"));
    }
    // Interchange: (β′ ∘v β) ∗ (α′ ∘v α) = (β′ ∗ α′) ∘v (β ∗ α).
    for ((la, lb), habl) in &t.hom {
        let _ = la;
        for ((ra, rb), habr) in &t.hom {
            if lb != ra {
                continue;
            }
            let _ = rb;
            let hcl = habl;
            let hcr = habr;
            for ((b2, b1), bv) in &hcr.compose {
                for ((a2, a1), av) in &hcl.compose {
                    let lhs = t.hc2(bv, av).to_string();
                    let step1 = t.hc2(b1, a1).to_string();
                    let step2 = t.hc2(b2, a2).to_string();
                    // Vertical composite of step2 ∘ step1 lives in hom(la, rb).
                    let (s1s, _) = t.two_boundary(&step1);
                    let hom_lr = t.hom_at(&s1s);
                    let rhs = hom_lr.comp(&step2, &step1).to_string();
                    rep.check(
                        "interchange",
                        format!("({b2},{b1},{a2},{a1})"),
                        lhs == rhs,
                        || format!("{lhs} != {rhs}"),
                    );
                }
            }
        }
    }
    // Horizontal associativity and units on 2-cells.
    for (c2, _) in &all2 {
        for (b2, _) in &all2 {
            let (cs, _) = t.two_boundary(c2);
            let (bs, _) = t.two_boundary(b2);
            if t.src1(&cs) != t.tgt1(&bs) {
                continue;
            }
            for (a2, _) in &all2 {
                let (as_, _) = t.two_boundary(a2);
                if t.src1(&bs) != t.tgt1(&as_) {
                    continue;
                }
                let l = t.hc2(&t.hc2(c2, b2).to_string(), a2).to_string();
                let r = t.hc2(c2, &t.hc2(b2, a2).to_string()).to_string();
                rep.check("hcomp2-assoc", format!("({c2},{b2},{a2})"), l == r, || format!("{l} != {r}"));
            }
        }
    }
    for (a2, _) in &all2 {
        let (as_, _) = t.two_boundary(a2);
        let (sa, ta) = (t.src1(&as_).to_string(), t.tgt1(&as_).to_string());
        let idl = t.id2_of(t.id1_of(&ta).to_string().as_str());
        let idr = t.id2_of(t.id1_of(&sa).to_string().as_str());
        let ok = t.hc2(&idl, a2) == a2 && t.hc2(a2, &idr) == a2;
        rep.check("hcomp2-unit", a2.clone(), ok, || "identity 2-cell on id1 is not a strict unit".into());
    }
    Ok(rep)
}

/// A strict 2-functor between finite 2-categories, used purely for index
/// reshaping (embeddings, swaps, regroupings).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strict2Fun {
    pub dom: Fin2Cat,
    pub cod: Fin2Cat,
    pub ob: BTreeMap<String, String>,
    pub on1: BTreeMap<String, String>,
    pub on2: BTreeMap<String, String>,
}

impl Strict2Fun {
    pub fn from_maps(
        dom: &Fin2Cat,
        cod: &Fin2Cat,
        fo: impl Fn(&str) -> String,
        f1: impl Fn(&str) -> String,
        f2: impl Fn(&str) -> String,
    ) -> Strict2Fun {
        Strict2Fun {
            dom: dom.clone(),
            cod: cod.clone(),
            ob: dom.objects.iter().map(|o| (o.clone(), fo(o))).collect(),
            on1: dom.onecells.keys().map(|f| (f.clone(), f1(f))).collect(),
            on2: dom.all2().into_iter().map(|(t, _)| (t.clone(), f2(&t))).collect(),
        }
    }

    pub fn o(&self, x: &str) -> &str {
        &self.ob[x]
    }

    pub fn c1(&self, f: &str) -> &str {
        &self.on1[f]
    }

    pub fn c2(&self, t: &str) -> &str {
        &self.on2[t]
    }

    /// Exhaustive strictness check.
    pub fn check(&self) -> Result<()> {
        for (f, (a, b)) in &self.dom.onecells {
            let g = self.c1(f);
            if self.cod.src1(g) != self.o(a) || self.cod.tgt1(g) != self.o(b) {
                return Err(Error::BoundaryMismatch(format!("strict 2-functor breaks 1-cell boundary at {f}")));
            }
        }
        for (o, i) in &self.dom.id1 {
            if self.c1(i) != self.cod.id1_of(self.o(o)) {
                return Err(Error::CheckFailed(format!("strict 2-functor breaks id1 at {o}")));
            }
        }
        for ((g, f), h) in &self.dom.hcomp1 {
            if self.cod.hc1(self.c1(g), self.c1(f)) != self.c1(h) {
                return Err(Error::CheckFailed(format!("strict 2-functor breaks hcomp1 at ({g},{f})")));
            }
        }
        for (tc, _) in self.dom.all2() {
            let (s, t) = self.dom.two_boundary(&tc);
            let (cs, ct) = self.cod.two_boundary(self.c2(&tc));
            if cs != *self.c1(&s) || ct != *self.c1(&t) {
                return Err(Error::BoundaryMismatch(format!("strict 2-functor breaks 2-cell boundary at {tc}")));
            }
        }
        // Vertical functoriality within each hom.
        for h in self.dom.hom.values() {
            for ((b, a), c) in &h.compose {
                let (s, _) = self.dom.two_boundary(a);
                let _ = s;
                let (sa, _) = self.dom.two_boundary(a);
                let cod_hom = self.cod.hom_at(self.c1(&sa));
                if cod_hom.comp(self.c2(b), self.c2(a)) != self.c2(c) {
                    return Err(Error::CheckFailed(format!("strict 2-functor breaks vertical composition at ({b},{a})")));
                }
            }
        }
        for ((b, a), c) in &self.dom.hcomp2 {
            if self.cod.hc2(self.c2(b), self.c2(a)) != self.c2(c) {
                return Err(Error::CheckFailed(format!("strict 2-functor breaks hcomp2 at ({b},{a})")));
            }
        }
        Ok(())
    }
}

/// A product/opposite shape: the list of factors (with op markers) plus the
/// realized total 2-category. A single factor is unwrapped (no tuple names).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub factors: Vec<(Fin2Cat, bool)>,
    pub total: Fin2Cat,
}

impl Shape {
    pub fn new(factors: Vec<(Fin2Cat, bool)>) -> Shape {
        let opped: Vec<Fin2Cat> =
            factors.iter().map(|(c, op)| if *op { op2(c) } else { c.clone() }).collect();
        let refs: Vec<&Fin2Cat> = opped.iter().collect();
        let total = product2(&refs);
        Shape { factors, total }
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Compose a total-shape name from per-factor names.
    pub fn name(&self, parts: &[&str]) -> String {
        assert_eq!(parts.len(), self.arity());
        if self.arity() == 1 {
            parts[0].to_string()
        } else {
            tuple(&parts.iter().map(|s| s.to_string()).collect::<Vec<_>>())
        }
    }

    /// Split a total-shape name into per-factor names.
    pub fn split(&self, name: &str) -> Vec<String> {
        if self.arity() == 1 {
            vec![name.to_string()]
        } else {
            let parts = untuple(name);
            assert_eq!(parts.len(), self.arity(), "bad shape name {name}");
            parts
        }
    }
}

#[cfg(test)]
pub mod tests {
    use super::*;

    /// The walking 2-cell: objects a, b; parallel f, g: a → b; one 2-cell m: f ⇒ g.
    pub fn walking_twocell() -> Fin2Cat {
        let mut t = Fin2Cat::default();
        t.objects = ["a", "b"].iter().map(|s| s.to_string()).collect();
        for (n, s, tg) in [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")] {
            t.onecells.insert(n.into(), (s.into(), tg.into()));
        }
        t.id1.insert("a".into(), "1a".into());
        t.id1.insert("b".into(), "1b".into());
        // hom(a,b): objects f, g; morphisms id_f, id_g, m: f ⇒ g.
        let mut hab = FinCat::discrete(&["f", "g"]);
        hab.mor.insert("m".into(), ("f".into(), "g".into()));
        hab.compose.insert(("m".into(), "id_f".into()), "m".into());
        hab.compose.insert(("id_g".into(), "m".into()), "m".into());
        t.hom.insert(("a".into(), "b".into()), hab);
        t.hom.insert(("a".into(), "a".into()), FinCat::discrete(&["1a"]));
        t.hom.insert(("b".into(), "b".into()), FinCat::discrete(&["1b"]));
        t.hom.insert(("b".into(), "a".into()), FinCat::default());
        for (g, f, h) in [
            ("1a", "1a", "1a"),
            ("1b", "1b", "1b"),
            ("f", "1a", "f"),
            ("g", "1a", "g"),
            ("1b", "f", "f"),
            ("1b", "g", "g"),
        ] {
            t.hcomp1.insert((g.into(), f.into()), h.into());
        }
        for (b, a, c) in [
            ("id_1a", "id_1a", "id_1a"),
            ("id_1b", "id_1b", "id_1b"),
            ("id_f", "id_1a", "id_f"),
            ("id_g", "id_1a", "id_g"),
            ("m", "id_1a", "m"),
            ("id_1b", "id_f", "id_f"),
            ("id_1b", "id_g", "id_g"),
            ("id_1b", "m", "m"),
        ] {
            t.hcomp2.insert((b.into(), a.into()), c.into());
        }
        t
    }

    #[test]
    fn locally_discrete_passes() {
        let mut c = FinCat::discrete(&["a", "b"]);
        c.mor.insert("f".into(), ("a".into(), "b".into()));
        c.compose.insert(("f".into(), "id_a".into()), "f".into());
        c.compose.insert(("id_b".into(), "f".into()), "f".into());
        let t = Fin2Cat::from_cat(&c);
        assert!(check_two_category(&t).unwrap().is_pass());
    }

    #[test]
    fn walking_twocell_passes() {
        assert!(check_two_category(&walking_twocell()).unwrap().is_pass());
    }

    #[test]
    fn mutated_interchange_fails() {
        let mut t = walking_twocell();
        t.hcomp2.insert(("id_1b".into(), "m".into()), "id_g".into());
        let rep = check_two_category(&t).unwrap();
        assert!(!rep.is_pass());
    }

    #[test]
    fn op_is_involution_and_passes() {
        let t = walking_twocell();
        assert_eq!(op2(&op2(&t)), t);
        assert!(check_two_category(&op2(&t)).unwrap().is_pass());
    }

    #[test]
    fn product_counts_and_laws() {
        let t = walking_twocell();
        let u = Fin2Cat::terminal();
        let p = product2(&[&t, &u]);
        assert_eq!(p.onecells.len(), t.onecells.len());
        assert!(check_two_category(&p).unwrap().is_pass());
        let sq = product2(&[&t, &t]);
        assert_eq!(sq.onecells.len(), t.onecells.len() * t.onecells.len());
        assert!(check_two_category(&sq).unwrap().is_pass());
    }

    #[test]
    fn shape_roundtrip_names() {
        let t = walking_twocell();
        let s = Shape::new(vec![(t.clone(), true), (t.clone(), false)]);
        assert!(check_two_category(&s.total).unwrap().is_pass());
        let n = s.name(&["a", "b"]);
        assert_eq!(n, "(a,b)");
        assert_eq!(s.split(&n), vec!["a".to_string(), "b".to_string()]);
        // op reverses 1-cells: f: a→b becomes f: b→a in the first factor.
        assert_eq!(s.total.src1("(f,1a)"), "(b,a)");
    }

    #[test]
    fn strict2fun_identity_checks() {
        let t = walking_twocell();
        let idf = Strict2Fun::from_maps(&t, &t, |o| o.into(), |f| f.into(), |c| c.into());
        assert!(idf.check().is_ok());
    }
}
