//! Category presentations and the quotient engine.
//!
//! A category is presented by objects, typed generating arrows and relations
//! between composable words. `realize` completes the relations into a
//! confluent rewrite system (Knuth–Bendix style, under the length-then-lex
//! order on generator names) within a step budget and enumerates normal
//! forms into an explicit [`FinCat`]. Nontermination surfaces as the
//! first-class [`Error::BudgetExhausted`] outcome, never as a wrong answer.
//!
//! Tagged disjoint unions (coproducts of categories with index tags embedded
//! in identifier names) also live here.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Fun};

/// A composable word of generating arrows. `gens` are applied left-to-right:
/// `gens[0]` first. The empty word is the identity at `src == tgt`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    pub src: String,
    pub tgt: String,
    pub gens: Vec<String>,
}

/// A presentation of a category by generators and relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatPresentation {
    pub name: String,
    pub objects: BTreeSet<String>,
    /// generator name → (source, target); identities are implicit.
    pub arrows: BTreeMap<String, (String, String)>,
    pub relations: Vec<(Word, Word)>,
}

impl CatPresentation {
    pub fn new(name: impl Into<String>) -> Self {
        CatPresentation {
            name: name.into(),
            objects: BTreeSet::new(),
            arrows: BTreeMap::new(),
            relations: Vec::new(),
        }
    }

    pub fn object(&mut self, o: impl Into<String>) -> &mut Self {
        self.objects.insert(o.into());
        self
    }

    pub fn arrow(&mut self, name: impl Into<String>, src: impl Into<String>, tgt: impl Into<String>) -> &mut Self {
        self.arrows.insert(name.into(), (src.into(), tgt.into()));
        self
    }

    /// Build a typed word from generators applied left-to-right, checking
    /// composability. An empty `gens` with `at = Some(object)` denotes an
    /// identity word.
    pub fn word(&self, gens: &[&str], at: Option<&str>) -> Result<Word> {
        if gens.is_empty() {
            let o = at.ok_or_else(|| Error::BoundaryError("empty word needs an object".into()))?;
            if !self.objects.contains(o) {
                return Err(Error::BoundaryError(format!("unknown object {o}")));
            }
            return Ok(Word { src: o.to_string(), tgt: o.to_string(), gens: vec![] });
        }
        let mut src = None;
        let mut cur = None;
        for g in gens {
            let Some((s, t)) = self.arrows.get(*g) else {
                return Err(Error::BoundaryError(format!("unknown generator {g}")));
            };
            if let Some(prev) = &cur {
                if prev != s {
                    return Err(Error::BoundaryError(format!(
                        "word not composable at {g}: expected source {prev}, found {s}"
                    )));
                }
            } else {
                src = Some(s.clone());
            }
            cur = Some(t.clone());
        }
        Ok(Word { src: src.unwrap(), tgt: cur.unwrap(), gens: gens.iter().map(|s| s.to_string()).collect() })
    }

    pub fn relation(&mut self, lhs: Word, rhs: Word) -> Result<&mut Self> {
        if lhs.src != rhs.src || lhs.tgt != rhs.tgt {
            return Err(Error::BoundaryError(format!(
                "relation sides have different boundaries: {}→{} vs {}→{}",
                lhs.src, lhs.tgt, rhs.src, rhs.tgt
            )));
        }
        self.relations.push((lhs, rhs));
        Ok(self)
    }

    /// Presentation of an existing finite category: generators are its
    /// non-identity morphisms, relations its whole composition table.
    pub fn of_cat(name: impl Into<String>, c: &FinCat) -> CatPresentation {
        let mut p = CatPresentation::new(name);
        p.objects = c.objects.clone();
        let ids: BTreeSet<&String> = c.identity.values().collect();
        for (m, (s, t)) in &c.mor {
            if !ids.contains(m) {
                p.arrows.insert(m.clone(), (s.clone(), t.clone()));
            }
        }
        for ((g, f), h) in &c.compose {
            if ids.contains(g) || ids.contains(f) {
                continue;
            }
            let lhs = Word { src: c.src(f).into(), tgt: c.tgt(g).into(), gens: vec![f.clone(), g.clone()] };
            let rhs = if ids.contains(h) {
                Word { src: c.src(f).into(), tgt: c.tgt(g).into(), gens: vec![] }
            } else {
                Word { src: c.src(f).into(), tgt: c.tgt(g).into(), gens: vec![h.clone()] }
            };
            p.relations.push((lhs, rhs));
        }
        p
    }

    fn validate(&self) -> Result<()> {
        for (g, (s, t)) in &self.arrows {
            if !self.objects.contains(s) || !self.objects.contains(t) {
                return Err(Error::MalformedTables(format!("arrow {g} references undeclared object")));
            }
        }
        for (l, r) in &self.relations {
            for w in [l, r] {
                // Re-derive boundaries to catch hand-built words.
                let gens: Vec<&str> = w.gens.iter().map(|s| s.as_str()).collect();
                let rebuilt = self.word(&gens, Some(&w.src))?;
                if rebuilt.src != w.src || rebuilt.tgt != w.tgt {
                    return Err(Error::BoundaryError(format!("word {:?} has wrong recorded boundary", w.gens)));
                }
            }
            if l.src != r.src || l.tgt != r.tgt {
                return Err(Error::BoundaryError("relation sides have different boundaries".into()));
            }
        }
        Ok(())
    }
}

/// An oriented, boundary-preserving string rewrite system over generator
/// names, ordered by length-then-lexicographic comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RewriteSystem {
    /// Each rule `lhs → rhs` satisfies `lhs > rhs` in length-lex order and
    /// shares boundaries with its replacement.
    pub rules: Vec<(Vec<String>, Vec<String>)>,
}

fn lenlex_gt(a: &[String], b: &[String]) -> bool {
    (a.len(), a) > (b.len(), b)
}

fn find_sub(hay: &[String], needle: &[String]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

impl RewriteSystem {
    /// Reduce to the unique normal form (unique once the system is confluent).
    pub fn normal_form(&self, w: &[String]) -> Vec<String> {
        let mut cur = w.to_vec();
        'outer: loop {
            for (l, r) in &self.rules {
                if let Some(i) = find_sub(&cur, l) {
                    let mut next = cur[..i].to_vec();
                    next.extend(r.iter().cloned());
                    next.extend(cur[i + l.len()..].iter().cloned());
                    cur = next;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    fn is_normal(&self, w: &[String]) -> bool {
        self.rules.iter().all(|(l, _)| find_sub(w, l).is_none())
    }
}

/// Normal form of a typed word under a realized system (see [`Realized`]).
pub fn normal_form(rs: &RewriteSystem, w: &Word) -> Word {
    Word { src: w.src.clone(), tgt: w.tgt.clone(), gens: rs.normal_form(&w.gens) }
}

/// Knuth–Bendix completion under length-lex, with a hard step budget.
fn complete(relations: &[(Word, Word)], budget: &mut u64) -> Result<RewriteSystem> {
    let mut rs = RewriteSystem::default();
    let mut pending: VecDeque<(Vec<String>, Vec<String>)> =
        relations.iter().map(|(l, r)| (l.gens.clone(), r.gens.clone())).collect();
    loop {
        while let Some((a, b)) = pending.pop_front() {
            if *budget == 0 {
                return Err(Error::BudgetExhausted("completion".into()));
            }
            *budget -= 1;
            let a = rs.normal_form(&a);
            let b = rs.normal_form(&b);
            if a == b {
                continue;
            }
            let (l, r) = if lenlex_gt(&a, &b) { (a, b) } else { (b, a) };
            rs.rules.push((l, r));
        }
        // Critical pairs of the current rule set.
        let n = rs.rules.len();
        let mut new_pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (l1, r1) = rs.rules[i].clone();
                let (l2, r2) = rs.rules[j].clone();
                if *budget < 1 {
                    return Err(Error::BudgetExhausted("completion".into()));
                }
                *budget -= 1;
                // Overlap: proper suffix of l1 equals proper prefix of l2.
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        // word = l1 ++ l2[k..]; two reductions.
                        let mut left = r1.clone();
                        left.extend(l2[k..].iter().cloned());
                        let mut right = l1[..l1.len() - k].to_vec();
                        right.extend(r2.iter().cloned());
                        new_pairs.push((left, right));
                    }
                }
                // Containment: l2 inside l1 (strictly smaller or at an offset).
                if i != j {
                    if let Some(pos) = find_sub(&l1, &l2) {
                        let mut alt = l1[..pos].to_vec();
                        alt.extend(r2.iter().cloned());
                        alt.extend(l1[pos + l2.len()..].iter().cloned());
                        new_pairs.push((r1.clone(), alt));
                    }
                }
            }
        }
        let mut added = false;
        for (a, b) in new_pairs {
            if rs.normal_form(&a) != rs.normal_form(&b) {
                pending.push_back((a, b));
                added = true;
            }
        }
        if !added {
            return Ok(rs);
        }
    }
}

/// A realized presentation: the quotient category plus the machinery to map
/// words to canonical morphism names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realized {
    pub cat: FinCat,
    pub rs: RewriteSystem,
    pub pres: CatPresentation,
}

/// Canonical morphism name for a normal-form word: `id_a` for the empty word
/// at `a`, the generator name for singletons, `"h.g.f"` (rightmost applied
/// first) otherwise.
fn word_name(nf: &[String], at_src: &str) -> String {
    if nf.is_empty() {
        format!("id_{at_src}")
    } else if nf.len() == 1 {
        nf[0].clone()
    } else {
        let mut parts: Vec<String> = nf.to_vec();
        parts.reverse();
        parts.join(".")
    }
}

impl Realized {
    /// Name of the morphism presented by `w`.
    pub fn nf(&self, w: &Word) -> String {
        word_name(&self.rs.normal_form(&w.gens), &w.src)
    }

    /// Name of the image of a single generator.
    pub fn gen(&self, g: &str) -> String {
        let (s, _) = self.pres.arrows[g].clone();
        word_name(&self.rs.normal_form(std::slice::from_ref(&g.to_string())), &s)
    }
}

/// Realize a presentation as an explicit finite category.
pub fn realize(p: &CatPresentation, budget: u64) -> Result<Realized> {
    p.validate()?;
    let mut budget = budget;
    let rs = complete(&p.relations, &mut budget)?;

    // Enumerate normal forms breadth-first: every proper prefix of a normal
    // form is normal, so extending normal forms generator-by-generator and
    // keeping the irreducible results reaches everything.
    let mut cat = FinCat::default();
    cat.objects = p.objects.clone();
    // (word, src, tgt), keyed canonically.
    // Identities are handled separately (the empty word is not a valid map
    // key across objects); seed with the singleton normal forms.
    let mut forms: BTreeMap<Vec<String>, (String, String)> = BTreeMap::new();
    let mut queue: VecDeque<Vec<String>> = VecDeque::new();
    for (g, (s, t)) in &p.arrows {
        let nf = rs.normal_form(std::slice::from_ref(g));
        if nf == vec![g.clone()] {
            if forms.insert(nf.clone(), (s.clone(), t.clone())).is_none() {
                queue.push_back(nf);
            }
        }
    }
    while let Some(w) = queue.pop_front() {
        // Charge by word length: a divergent enumeration produces ever-longer
        // words, so it exhausts the budget before the quadratic string work
        // of building them becomes noticeable.
        let cost = w.len() as u64 + 1;
        if budget < cost {
            return Err(Error::BudgetExhausted("normal-form enumeration".into()));
        }
        budget -= cost;
        let (src, tgt) = forms[&w].clone();
        for (g, (gs, gt)) in &p.arrows {
            if *gs != tgt {
                continue;
            }
            let mut ext = w.clone();
            ext.push(g.clone());
            if !rs.is_normal(&ext) {
                continue;
            }
            if forms.insert(ext.clone(), (src.clone(), gt.clone())).is_none() {
                queue.push_back(ext);
            }
        }
    }
    // Build the tables.
    for o in &p.objects {
        let id = format!("id_{o}");
        if cat.mor.insert(id.clone(), (o.clone(), o.clone())).is_some() {
            return Err(Error::MalformedTables(format!("name collision at {id}")));
        }
        cat.identity.insert(o.clone(), id);
    }
    let mut name_of: BTreeMap<(Vec<String>, String), String> = BTreeMap::new();
    for (o, id) in &cat.identity {
        name_of.insert((vec![], o.clone()), id.clone());
    }
    for (w, (s, t)) in &forms {
        let n = word_name(w, s);
        if cat.mor.insert(n.clone(), (s.clone(), t.clone())).is_some() {
            return Err(Error::MalformedTables(format!("morphism name collision at {n}")));
        }
        name_of.insert((w.clone(), s.clone()), n);
    }
    // Composition: normal form of concatenation.
    let mut all: Vec<(Vec<String>, String, String)> = vec![];
    for (o, _) in &cat.identity {
        all.push((vec![], o.clone(), o.clone()));
    }
    for (w, (s, t)) in &forms {
        all.push((w.clone(), s.clone(), t.clone()));
    }
    for (wg, gs, _gt) in &all {
        for (wf, fs, ft) in &all {
            if gs != ft {
                continue;
            }
            let mut cc = wf.clone();
            cc.extend(wg.iter().cloned());
            let nf = rs.normal_form(&cc);
            let Some(h) = name_of.get(&(nf.clone(), fs.clone())) else {
                return Err(Error::BudgetExhausted(format!(
                    "composite {:?} normalizes outside the enumerated set",
                    cc
                )));
            };
            let gname = name_of[&(wg.clone(), gs.clone())].clone();
            let fname = name_of[&(wf.clone(), fs.clone())].clone();
            cat.compose.insert((gname, fname), h.clone());
        }
    }
    let out = Realized { cat, rs, pres: p.clone() };
    debug_assert!(crate::fincat::check_category(&out.cat).map(|r| r.is_pass()).unwrap_or(false));
    Ok(out)
}

/// A coproduct of categories with index tags embedded in identifier names
/// (`"x:tag"`), so the inclusions are literal injections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedUnion {
    pub index: Vec<String>,
    pub parts: BTreeMap<String, FinCat>,
    pub result: FinCat,
    pub inclusions: BTreeMap<String, Fun>,
}

pub fn tagged(name: &str, tag: &str) -> String {
    format!("{name}:{tag}")
}

/// Disjoint union of an indexed family of categories.
pub fn disjoint_union(parts: &BTreeMap<String, FinCat>) -> TaggedUnion {
    let mut result = FinCat::default();
    for (tag, c) in parts {
        for o in &c.objects {
            result.objects.insert(tagged(o, tag));
        }
        for (m, (s, t)) in &c.mor {
            result.mor.insert(tagged(m, tag), (tagged(s, tag), tagged(t, tag)));
        }
        for (o, i) in &c.identity {
            result.identity.insert(tagged(o, tag), tagged(i, tag));
        }
        for ((g, f), h) in &c.compose {
            result.compose.insert((tagged(g, tag), tagged(f, tag)), tagged(h, tag));
        }
    }
    let inclusions = parts
        .iter()
        .map(|(tag, c)| {
            let f = Fun::from_maps(c, &result, |o| tagged(o, tag), |m| tagged(m, tag));
            (tag.clone(), f)
        })
        .collect();
    TaggedUnion {
        index: parts.keys().cloned().collect(),
        parts: parts.clone(),
        result,
        inclusions,
    }
}

/// Present `base` with extra generating arrows and relations, realize the
/// quotient, and return it with the (not necessarily faithful) inclusion.
pub fn adjoin_generators(
    base: &FinCat,
    new_arrows: &[(String, String, String)],
    new_relations: &[(Word, Word)],
    budget: u64,
) -> Result<(Realized, Fun)> {
    let mut p = CatPresentation::of_cat("adjoin", base);
    for (n, s, t) in new_arrows {
        if p.arrows.contains_key(n) || base.mor.contains_key(n) {
            return Err(Error::MalformedTables(format!("adjoined generator {n} collides")));
        }
        p.arrows.insert(n.clone(), (s.clone(), t.clone()));
    }
    for (l, r) in new_relations {
        p.relation(l.clone(), r.clone())?;
    }
    let realized = realize(&p, budget)?;
    let ids: BTreeSet<&String> = base.identity.values().collect();
    let incl = Fun::from_maps(base, &realized.cat, |o| o.to_string(), |m| {
        if ids.contains(&m.to_string()) {
            format!("id_{}", base.src(m))
        } else {
            realized.gen(m)
        }
    });
    incl.check().map_err(|e| Error::CheckFailed(format!("adjoin inclusion not a functor: {e}")))?;
    Ok((realized, incl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::check_category;

    fn two_path() -> CatPresentation {
        let mut p = CatPresentation::new("path2");
        p.object("a").object("b").object("c");
        p.arrow("f", "a", "b").arrow("g", "b", "c");
        p
    }

    #[test]
    fn free_two_path_has_six_morphisms() {
        let r = realize(&two_path(), 10_000).unwrap();
        assert_eq!(r.cat.mor.len(), 6);
        assert!(check_category(&r.cat).unwrap().is_pass());
        let w = two_path().word(&["f", "g"], None).unwrap();
        assert_eq!(r.nf(&w), "g.f");
    }

    #[test]
    fn z2_realizes_to_two_morphisms() {
        let mut p = CatPresentation::new("z2");
        p.object("*");
        p.arrow("s", "*", "*");
        let ss = p.word(&["s", "s"], None).unwrap();
        let e = p.word(&[], Some("*")).unwrap();
        p.relation(ss, e).unwrap();
        let r = realize(&p, 10_000).unwrap();
        assert_eq!(r.cat.mor.len(), 2);
        assert!(r.cat.is_iso("s"));
    }

    #[test]
    fn free_endomorphism_exhausts_budget() {
        let mut p = CatPresentation::new("free");
        p.object("*");
        p.arrow("s", "*", "*");
        assert!(matches!(realize(&p, 500), Err(Error::BudgetExhausted(_))));
    }

    #[test]
    fn relation_boundary_mismatch_rejected() {
        let mut p = two_path();
        let gf = p.word(&["f", "g"], None).unwrap();
        let f = p.word(&["f"], None).unwrap();
        assert!(p.relation(gf, f).is_err());
    }

    #[test]
    fn normal_form_idempotent_and_respects_relations() {
        let mut p = CatPresentation::new("m");
        p.object("*");
        p.arrow("s", "*", "*").arrow("t", "*", "*");
        let st = p.word(&["s", "t"], None).unwrap();
        let t = p.word(&["t"], None).unwrap();
        p.relation(st, t.clone()).unwrap();
        let tt = p.word(&["t", "t"], None).unwrap();
        let e = p.word(&[], Some("*")).unwrap();
        p.relation(tt, e).unwrap();
        let ss = p.word(&["s", "s"], None).unwrap();
        p.relation(ss, p.word(&["s"], None).unwrap()).unwrap();
        let r = realize(&p, 100_000).unwrap();
        assert!(check_category(&r.cat).unwrap().is_pass());
        for (l, rr) in &p.relations {
            assert_eq!(r.nf(l), r.nf(rr));
        }
        let w = p.word(&["s", "t", "s", "t"], None).unwrap();
        let n1 = r.rs.normal_form(&w.gens);
        assert_eq!(r.rs.normal_form(&n1), n1);
    }

    #[test]
    fn disjoint_union_counts() {
        let mut parts = BTreeMap::new();
        parts.insert("p".to_string(), FinCat::terminal());
        parts.insert("q".to_string(), FinCat::terminal());
        let u = disjoint_union(&parts);
        assert_eq!(u.result.objects.len(), 2);
        assert_eq!(u.result.mor.len(), 2);
        assert!(check_category(&u.result).unwrap().is_pass());
        for inc in u.inclusions.values() {
            assert!(inc.check().is_ok());
        }
    }

    #[test]
    fn adjoin_inverse_gives_walking_iso() {
        let mut c = FinCat::discrete(&["a", "b"]);
        c.mor.insert("f".into(), ("a".into(), "b".into()));
        c.compose.insert(("f".into(), "id_a".into()), "f".into());
        c.compose.insert(("id_b".into(), "f".into()), "f".into());
        let mut p2 = CatPresentation::of_cat("tmp", &c);
        p2.arrow("finv", "b", "a");
        let l1 = p2.word(&["f", "finv"], None).unwrap();
        let r1 = p2.word(&[], Some("a")).unwrap();
        let l2 = p2.word(&["finv", "f"], None).unwrap();
        let r2 = p2.word(&[], Some("b")).unwrap();
        let (realized, incl) = adjoin_generators(
            &c,
            &[("finv".into(), "b".into(), "a".into())],
            &[(l1, r1), (l2, r2)],
            10_000,
        )
        .unwrap();
        assert_eq!(realized.cat.mor.len(), 4);
        assert!(realized.cat.is_iso("f"));
        assert!(incl.check().is_ok());
    }

    #[test]
    fn adjoin_nothing_is_identity_shape() {
        let c = FinCat::discrete(&["a"]);
        let (realized, incl) = adjoin_generators(&c, &[], &[], 1_000).unwrap();
        assert_eq!(realized.cat, c);
        assert_eq!(incl, Fun::identity(&c));
    }

    #[test]
    fn adjoin_free_endo_exhausts() {
        let c = FinCat::discrete(&["a"]);
        let res = adjoin_generators(&c, &[("e".into(), "a".into(), "a".into())], &[], 500);
        assert!(matches!(res, Err(Error::BudgetExhausted(_))));
    }
}
