//! Seeded instance generators, a single-entry mutation harness, and
//! independent union-find oracles.
//!
//! Everything here exists to feed the randomized test suites: small index
//! categories drawn from a pool known to terminate under completion,
//! discrete-valued pseudofunctors built as sums of representables (strict by
//! associativity), central coboundary pseudonaturals for the composition
//! combinators, and table mutators that break exactly one entry of an
//! otherwise valid structure. The oracles recompute π0-level answers straight
//! from the input tables, sharing no code with the engine under test.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::extra::ExtraPseudoNat;
use crate::fincat::{compose_fun, FinCat, Fun, Nat, UnionFind};
use crate::presentations::{realize, CatPresentation, Realized};
use crate::pseudo::{constant_pseudofunctor, PseudoFun, PseudoNat};
use crate::twocat::{Fin2Cat, Shape};

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Index-category pool
// ---------------------------------------------------------------------------

/// Presentations of small index categories (≤ 3 objects, ≤ 6 generating
/// arrows) whose completions terminate. Random instances are drawn from this
/// pool rather than from arbitrary presentations, which may present infinite
/// categories.
pub fn index_pool() -> Vec<CatPresentation> {
    let mut pool = Vec::new();

    let mut p = CatPresentation::new("terminal");
    p.object("a");
    pool.push(p);

    let mut p = CatPresentation::new("discrete2");
    p.object("a").object("b");
    pool.push(p);

    let mut p = CatPresentation::new("arrow");
    p.object("a").object("b").arrow("f", "a", "b");
    pool.push(p);

    let mut p = CatPresentation::new("path2");
    p.object("a").object("b").object("c").arrow("f", "a", "b").arrow("g", "b", "c");
    pool.push(p);

    let mut p = CatPresentation::new("parallel");
    p.object("a").object("b").arrow("f", "a", "b").arrow("g", "a", "b");
    pool.push(p);

    let mut p = CatPresentation::new("span");
    p.object("a").object("b").object("c").arrow("f", "a", "b").arrow("g", "a", "c");
    pool.push(p);

    let mut p = CatPresentation::new("cospan");
    p.object("a").object("b").object("c").arrow("f", "a", "c").arrow("g", "b", "c");
    pool.push(p);

    let mut p = CatPresentation::new("z2");
    p.object("a").arrow("s", "a", "a");
    let ss = p.word(&["s", "s"], None).unwrap();
    let e = p.word(&[], Some("a")).unwrap();
    p.relation(ss, e).unwrap();
    pool.push(p);

    let mut p = CatPresentation::new("z3");
    p.object("a").arrow("s", "a", "a");
    let sss = p.word(&["s", "s", "s"], None).unwrap();
    let e = p.word(&[], Some("a")).unwrap();
    p.relation(sss, e).unwrap();
    pool.push(p);

    let mut p = CatPresentation::new("idempotent");
    p.object("a").arrow("e", "a", "a");
    let ee = p.word(&["e", "e"], None).unwrap();
    let ew = p.word(&["e"], None).unwrap();
    p.relation(ee, ew).unwrap();
    pool.push(p);

    let mut p = CatPresentation::new("iso");
    p.object("a").object("b").arrow("f", "a", "b").arrow("g", "b", "a");
    let gf = p.word(&["f", "g"], None).unwrap();
    let ida = p.word(&[], Some("a")).unwrap();
    let fg = p.word(&["g", "f"], None).unwrap();
    let idb = p.word(&[], Some("b")).unwrap();
    p.relation(gf, ida).unwrap();
    p.relation(fg, idb).unwrap();
    pool.push(p);

    let mut p = CatPresentation::new("triangle");
    p.object("a")
        .object("b")
        .object("c")
        .arrow("f", "a", "b")
        .arrow("g", "b", "c")
        .arrow("h", "a", "c");
    let fg = p.word(&["f", "g"], None).unwrap();
    let hw = p.word(&["h"], None).unwrap();
    p.relation(fg, hw).unwrap();
    pool.push(p);

    pool
}

/// The pool, realized. Deterministic (no randomness involved).
pub fn realized_pool(budget: u64) -> Result<Vec<Realized>> {
    index_pool().iter().map(|p| realize(p, budget)).collect()
}

/// The cyclic group Z/n as a one-object category: morphisms `id_*`, `g1`,
/// …, `g{n-1}` with `gi ∘ gj = g{(i+j) mod n}`.
pub fn cyclic(n: usize) -> FinCat {
    assert!(n >= 1);
    let mut c = FinCat::discrete(&["*"]);
    let name = |k: usize| if k == 0 { "id_*".to_string() } else { format!("g{k}") };
    for k in 1..n {
        c.mor.insert(name(k), ("*".into(), "*".into()));
    }
    for i in 0..n {
        for j in 0..n {
            c.compose.insert((name(i), name(j)), name((i + j) % n));
        }
    }
    c
}

/// Underlying 1-category of a locally discrete 2-category.
pub fn underlying_cat(t: &Fin2Cat) -> FinCat {
    FinCat {
        objects: t.objects.clone(),
        mor: t.onecells.clone(),
        identity: t.id1.clone(),
        compose: t.hcomp1.clone(),
    }
}

/// The coend shape `[B^op, B]` over a 1-category.
pub fn square_shape(b: &FinCat) -> Shape {
    let b2 = Fin2Cat::from_cat(b);
    Shape::new(vec![(b2.clone(), true), (b2, false)])
}

/// The joint shape `[A^op, B^op, A, B]` over two 1-categories.
pub fn joint_shape(a: &FinCat, b: &FinCat) -> Shape {
    let a2 = Fin2Cat::from_cat(a);
    let b2 = Fin2Cat::from_cat(b);
    Shape::new(vec![(a2.clone(), true), (b2.clone(), true), (a2, false), (b2, false)])
}

// ---------------------------------------------------------------------------
// Discrete-valued pseudofunctors: sums of representables
// ---------------------------------------------------------------------------

/// Strict discrete-valued pseudofunctor `⊔_i Hom(c_i, −)` on a locally
/// discrete shape: the value at `x` is the discrete category on the names
/// `"i:m"` for morphisms `m: c_i → x` of the underlying 1-category; 1-cells
/// act by postcomposition, which is strictly functorial.
pub fn representable_sum(shape: &Shape, points: &[String]) -> Result<PseudoFun> {
    let e = underlying_cat(&shape.total);
    for c in points {
        if !e.objects.contains(c) {
            return Err(Error::MalformedTables(format!(
                "representable_sum: unknown shape object {c}"
            )));
        }
    }
    let elements = |x: &str| -> Vec<String> {
        let mut out = Vec::new();
        for (i, c) in points.iter().enumerate() {
            for m in e.hom(c, x) {
                out.push(format!("{i}:{m}"));
            }
        }
        out
    };
    let mut ob = BTreeMap::new();
    for x in &e.objects {
        let names = elements(x);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        ob.insert(x.clone(), FinCat::discrete(&refs));
    }
    let act = |f: &str, el: &str| -> String {
        let (i, m) = el.split_once(':').expect("tagged element");
        format!("{i}:{}", e.comp(f, m))
    };
    let mut on1 = BTreeMap::new();
    for (f, (s, t)) in &e.mor {
        let fun = Fun::from_maps(
            &ob[s],
            &ob[t],
            |o| act(f, o),
            |m| {
                let o = m.strip_prefix("id_").expect("discrete morphism");
                format!("id_{}", act(f, o))
            },
        );
        on1.insert(f.clone(), fun);
    }
    PseudoFun::strict(&shape.total, ob, on1)
}

/// Random sum of 1–`max_points` representables over the shape.
pub fn random_representable_sum(
    shape: &Shape,
    max_points: usize,
    r: &mut ChaCha8Rng,
) -> Result<PseudoFun> {
    let objs: Vec<String> = shape.total.objects.iter().cloned().collect();
    let n = r.gen_range(1..=max_points.max(1));
    let points: Vec<String> =
        (0..n).map(|_| objs[r.gen_range(0..objs.len())].clone()).collect();
    representable_sum(shape, &points)
}

// ---------------------------------------------------------------------------
// Independent union-find oracles
// ---------------------------------------------------------------------------

fn cartesian(parts: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![vec![]];
    for p in parts {
        let mut next = Vec::new();
        for prefix in &out {
            for x in p {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// π0 of the 1-categorical coend of `P` over a shape of the form
/// `[C_1^op, …, C_k^op, C_1, …, C_k]`, computed by union-find directly from
/// the tables: one node per object of a diagonal fiber `P(e, e)`, merged
/// along fiber morphisms and along `P(μ, 1)(o) ~ P(1, μ)(o)` for every
/// morphism `μ` of the index and every object `o` of the mixed fiber.
pub fn coend_pi0(p: &PseudoFun, shape: &Shape) -> Result<usize> {
    let arity = shape.arity();
    if arity % 2 != 0 {
        return Err(Error::MalformedTables("coend_pi0: odd arity".into()));
    }
    let k = arity / 2;
    for i in 0..k {
        if !shape.factors[i].1 || shape.factors[k + i].1 {
            return Err(Error::MalformedTables(
                "coend_pi0: expected [C^op…, C…] factor pattern".into(),
            ));
        }
        if shape.factors[i].0 != shape.factors[k + i].0 {
            return Err(Error::MalformedTables(
                "coend_pi0: contravariant/covariant factors differ".into(),
            ));
        }
    }
    let cats: Vec<FinCat> =
        (0..k).map(|i| underlying_cat(&shape.factors[k + i].0)).collect();

    let diag = |e: &[String]| -> String {
        let both: Vec<&str> =
            e.iter().map(|s| s.as_str()).chain(e.iter().map(|s| s.as_str())).collect();
        shape.name(&both)
    };
    let key = |d: &str, o: &str| format!("{d}|{o}");

    let obj_lists: Vec<Vec<String>> =
        cats.iter().map(|c| c.objects.iter().cloned().collect()).collect();
    let mut keys = Vec::new();
    for e in cartesian(&obj_lists) {
        let d = diag(&e);
        for o in &p.at_ob(&d).objects {
            keys.push(key(&d, o));
        }
    }
    let mut uf = UnionFind::new(keys);

    // Merge along morphisms inside each diagonal fiber.
    for e in cartesian(&obj_lists) {
        let d = diag(&e);
        let fiber = p.at_ob(&d);
        for (s, t) in fiber.mor.values() {
            uf.union(&key(&d, s), &key(&d, t));
        }
    }
    // Merge the two actions of every index morphism.
    let mor_lists: Vec<Vec<String>> =
        cats.iter().map(|c| c.mor.keys().cloned().collect()).collect();
    for mu in cartesian(&mor_lists) {
        let src: Vec<String> =
            mu.iter().zip(&cats).map(|(m, c)| c.src(m).to_string()).collect();
        let tgt: Vec<String> =
            mu.iter().zip(&cats).map(|(m, c)| c.tgt(m).to_string()).collect();
        let ids_src: Vec<String> =
            src.iter().zip(&cats).map(|(o, c)| c.id_of(o).to_string()).collect();
        let ids_tgt: Vec<String> =
            tgt.iter().zip(&cats).map(|(o, c)| c.id_of(o).to_string()).collect();
        // Mixed fiber P(tgt, src).
        let mixed_parts: Vec<&str> =
            tgt.iter().map(|s| s.as_str()).chain(src.iter().map(|s| s.as_str())).collect();
        let mixed = shape.name(&mixed_parts);
        // P(μ, 1): P(tgt, src) → P(src, src).
        let contra_parts: Vec<&str> =
            mu.iter().map(|s| s.as_str()).chain(ids_src.iter().map(|s| s.as_str())).collect();
        let contra = p.at1(&shape.name(&contra_parts));
        // P(1, μ): P(tgt, src) → P(tgt, tgt).
        let cov_parts: Vec<&str> =
            ids_tgt.iter().map(|s| s.as_str()).chain(mu.iter().map(|s| s.as_str())).collect();
        let cov = p.at1(&shape.name(&cov_parts));
        let d_src = diag(&src);
        let d_tgt = diag(&tgt);
        for o in &p.at_ob(&mixed).objects {
            uf.union(&key(&d_src, contra.ob(o)), &key(&d_tgt, cov.ob(o)));
        }
    }
    Ok(uf.classes().len())
}

/// The discrete representable presheaf `y(c) = Hom(−, c)` on `A^op`:
/// the value at `x` is the discrete category on `Hom_A(x, c)`, and a
/// morphism `h: x → y` of `A` acts by precomposition `m ↦ m ∘ h`.
pub fn representable_presheaf(a: &FinCat, c: &str) -> Result<PseudoFun> {
    let aop = crate::twocat::op2(&Fin2Cat::from_cat(a));
    let mut ob = BTreeMap::new();
    for x in &a.objects {
        let names = a.hom(x, c);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        ob.insert(x.clone(), FinCat::discrete(&refs));
    }
    let mut on1 = BTreeMap::new();
    for (h, (x, y)) in &a.mor {
        // In A^op the 1-cell named h runs y → x.
        let fun = Fun::from_maps(
            &ob[y],
            &ob[x],
            |m| a.comp(m, h).to_string(),
            |i| {
                let m = i.strip_prefix("id_").expect("discrete morphism");
                format!("id_{}", a.comp(m, h))
            },
        );
        on1.insert(h.clone(), fun);
    }
    PseudoFun::strict(&aop, ob, on1)
}

/// Union-find count of the 1-categorical co-Yoneda quotient
/// `⊔_x F(x) × A(b, x)` modulo `(u, h∘g) ~ (F(h)(u), g)`, computed straight
/// from the tables for a presheaf `F` on `A^op`.
pub fn coyoneda_pi0(a: &FinCat, f: &PseudoFun, b: &str) -> usize {
    let key = |x: &str, u: &str, g: &str| format!("{x}|{u}|{g}");
    let mut keys = Vec::new();
    for x in &a.objects {
        for u in &f.at_ob(x).objects {
            for g in a.hom(b, x) {
                keys.push(key(x, u, &g));
            }
        }
    }
    let mut uf = UnionFind::new(keys);
    for x in &a.objects {
        let fx = f.at_ob(x);
        for g in a.hom(b, x) {
            for (s, t) in fx.mor.values() {
                uf.union(&key(x, s, &g), &key(x, t, &g));
            }
        }
    }
    for (h, (x, y)) in &a.mor {
        let fh = f.at1(h); // F(h): F(y) → F(x)
        for g in a.hom(b, x) {
            let hg = a.comp(h, &g).to_string();
            for u in &f.at_ob(y).objects {
                uf.union(&key(y, u, &hg), &key(x, fh.ob(u), &g));
            }
        }
    }
    uf.classes().len()
}

// ---------------------------------------------------------------------------
// Central coboundary pseudonaturals
// ---------------------------------------------------------------------------

/// Pseudonatural self-transformation of the constant pseudofunctor at a
/// one-object category `x`: identity component functors, and at a 1-cell
/// `f: a → b` of the (locally discrete) index the cell is the coboundary
/// `ψ(b) ∘ ψ(a)⁻¹` for a potential `ψ` on index objects valued in invertible
/// endomorphisms of `x`. Coboundaries telescope over composition, so the
/// result always satisfies the pseudonaturality axioms.
pub fn coboundary_pseudonat(
    x: &FinCat,
    index: &Fin2Cat,
    potential: &BTreeMap<String, String>,
) -> Result<PseudoNat> {
    if x.objects.len() != 1 {
        return Err(Error::MalformedTables(
            "coboundary_pseudonat expects a one-object value category".into(),
        ));
    }
    let pt = x.objects.iter().next().unwrap().clone();
    let g = constant_pseudofunctor(x, index);
    let idf = Fun::identity(x);
    let idid = compose_fun(&idf, &idf)?;
    let value = |o: &str| -> Result<String> {
        potential
            .get(o)
            .cloned()
            .ok_or_else(|| Error::MalformedTables(format!("potential missing at {o}")))
    };
    let mut comp = BTreeMap::new();
    for a in &index.objects {
        comp.insert(a.clone(), idf.clone());
    }
    let mut cell = BTreeMap::new();
    for (f, (a, b)) in &index.onecells {
        let pa = value(a)?;
        let pb = value(b)?;
        let pa_inv = x
            .inverse_of(&pa)
            .ok_or_else(|| Error::MalformedTables(format!("potential at {a} not invertible")))?;
        let t = x.comp(&pb, &pa_inv).to_string();
        cell.insert(
            f.clone(),
            Nat { src: idid.clone(), tgt: idid.clone(), comp: BTreeMap::from([(pt.clone(), t)]) },
        );
    }
    Ok(PseudoNat { f: g.clone(), g, comp, cell })
}

/// A random potential on the objects of an index, valued in the invertible
/// morphisms of a one-object category.
pub fn random_potential(
    x: &FinCat,
    index: &Fin2Cat,
    r: &mut ChaCha8Rng,
) -> BTreeMap<String, String> {
    let isos: Vec<String> = x.mor.keys().filter(|m| x.is_iso(m)).cloned().collect();
    index
        .objects
        .iter()
        .map(|o| (o.clone(), isos[r.gen_range(0..isos.len())].clone()))
        .collect()
}

// ---------------------------------------------------------------------------
// Single-entry mutations
// ---------------------------------------------------------------------------

fn pick<'a, T>(r: &mut ChaCha8Rng, v: &'a [T]) -> &'a T {
    &v[r.gen_range(0..v.len())]
}

/// A value from `pool` different from `not`, if one exists.
fn pick_other(r: &mut ChaCha8Rng, pool: &[String], not: &str) -> Option<String> {
    let others: Vec<&String> = pool.iter().filter(|m| m.as_str() != not).collect();
    if others.is_empty() {
        None
    } else {
        Some(others[r.gen_range(0..others.len())].clone())
    }
}

/// Change exactly one table entry of a finite category. Returns the mutant
/// and a description of the change; `None` if the category is too small to
/// mutate (fewer than two morphisms).
pub fn mutate_fincat(c: &FinCat, r: &mut ChaCha8Rng) -> Option<(FinCat, String)> {
    let mors: Vec<String> = c.mor.keys().cloned().collect();
    if mors.len() < 2 {
        return None;
    }
    for _ in 0..64 {
        let mut m = c.clone();
        let desc = match r.gen_range(0..3u8) {
            0 => {
                let keys: Vec<(String, String)> = c.compose.keys().cloned().collect();
                let k = pick(r, &keys).clone();
                let cur = &c.compose[&k];
                let Some(new) = pick_other(r, &mors, cur) else { continue };
                m.compose.insert(k.clone(), new.clone());
                format!("compose[({},{})] := {new}", k.0, k.1)
            }
            1 => {
                let objs: Vec<String> = c.objects.iter().cloned().collect();
                let o = pick(r, &objs).clone();
                let cur = c.identity[&o].clone();
                let Some(new) = pick_other(r, &mors, &cur) else { continue };
                m.identity.insert(o.clone(), new.clone());
                format!("identity[{o}] := {new}")
            }
            _ => {
                let nonid: Vec<String> = c
                    .mor
                    .iter()
                    .filter(|(n, _)| c.identity.values().all(|i| i != *n))
                    .map(|(n, _)| n.clone())
                    .collect();
                if nonid.is_empty() {
                    continue;
                }
                let f = pick(r, &nonid).clone();
                let (s, t) = c.mor[&f].clone();
                let objs: Vec<String> = c.objects.iter().cloned().collect();
                let Some(new_t) = pick_other(r, &objs, &t) else { continue };
                m.mor.insert(f.clone(), (s, new_t.clone()));
                format!("target[{f}] := {new_t}")
            }
        };
        if m != *c {
            return Some((m, desc));
        }
    }
    None
}

/// Change exactly one entry of a pseudofunctor's tables: a 1-cell image's
/// object or morphism map, or a φ component.
pub fn mutate_pseudofun(p: &PseudoFun, r: &mut ChaCha8Rng) -> Option<(PseudoFun, String)> {
    for _ in 0..64 {
        let mut m = p.clone();
        let desc = match r.gen_range(0..3u8) {
            0 => {
                let keys: Vec<String> = p.on1.keys().cloned().collect();
                let f = pick(r, &keys).clone();
                let fun = &p.on1[&f];
                let objs: Vec<String> = fun.cod.objects.iter().cloned().collect();
                let okeys: Vec<String> = fun.omap.keys().cloned().collect();
                if okeys.is_empty() {
                    continue;
                }
                let o = pick(r, &okeys).clone();
                let Some(new) = pick_other(r, &objs, &fun.omap[&o]) else { continue };
                m.on1.get_mut(&f).unwrap().omap.insert(o.clone(), new.clone());
                format!("F({f}).ob[{o}] := {new}")
            }
            1 => {
                let keys: Vec<String> = p.on1.keys().cloned().collect();
                let f = pick(r, &keys).clone();
                let fun = &p.on1[&f];
                let mors: Vec<String> = fun.cod.mor.keys().cloned().collect();
                let mkeys: Vec<String> = fun.mmap.keys().cloned().collect();
                if mkeys.is_empty() {
                    continue;
                }
                let mk = pick(r, &mkeys).clone();
                let Some(new) = pick_other(r, &mors, &fun.mmap[&mk]) else { continue };
                m.on1.get_mut(&f).unwrap().mmap.insert(mk.clone(), new.clone());
                format!("F({f}).mo[{mk}] := {new}")
            }
            _ => {
                let keys: Vec<(String, String)> = p.phi2.keys().cloned().collect();
                if keys.is_empty() {
                    continue;
                }
                let k = pick(r, &keys).clone();
                let nat = &p.phi2[&k];
                let mors: Vec<String> = nat.src.cod.mor.keys().cloned().collect();
                let ckeys: Vec<String> = nat.comp.keys().cloned().collect();
                if ckeys.is_empty() {
                    continue;
                }
                let o = pick(r, &ckeys).clone();
                let Some(new) = pick_other(r, &mors, &nat.comp[&o]) else { continue };
                m.phi2.get_mut(&k).unwrap().comp.insert(o.clone(), new.clone());
                format!("phi({},{}).comp[{o}] := {new}", k.0, k.1)
            }
        };
        if m != *p {
            return Some((m, desc));
        }
    }
    None
}

/// Change exactly one cell component of a pseudonatural transformation at a
/// non-identity 1-cell (identity cells are forced and checked separately).
pub fn mutate_pseudonat(al: &PseudoNat, r: &mut ChaCha8Rng) -> Option<(PseudoNat, String)> {
    let dom = &al.f.dom;
    let nonid: Vec<String> = dom
        .onecells
        .keys()
        .filter(|f| dom.id1.values().all(|i| i != *f))
        .cloned()
        .collect();
    if nonid.is_empty() {
        return None;
    }
    for _ in 0..64 {
        let f = pick(r, &nonid).clone();
        let nat = &al.cell[&f];
        let mors: Vec<String> = nat.src.cod.mor.keys().cloned().collect();
        let ckeys: Vec<String> = nat.comp.keys().cloned().collect();
        if ckeys.is_empty() {
            continue;
        }
        let o = pick(r, &ckeys).clone();
        let Some(new) = pick_other(r, &mors, &nat.comp[&o]) else { continue };
        let mut m = al.clone();
        m.cell.get_mut(&f).unwrap().comp.insert(o.clone(), new.clone());
        return Some((m, format!("cell[{f}].comp[{o}] := {new}")));
    }
    None
}

/// Change exactly one entry of an extrapseudonatural transformation: a
/// component functor's object map, or a B/C-direction cell component.
pub fn mutate_extrapseudonat(
    e: &ExtraPseudoNat,
    r: &mut ChaCha8Rng,
) -> Option<(ExtraPseudoNat, String)> {
    for _ in 0..64 {
        let mut m = e.clone();
        let desc = match r.gen_range(0..3u8) {
            0 => {
                let keys: Vec<_> = e.comp.keys().cloned().collect();
                let k = pick(r, &keys).clone();
                let fun = &e.comp[&k];
                let objs: Vec<String> = fun.cod.objects.iter().cloned().collect();
                let okeys: Vec<String> = fun.omap.keys().cloned().collect();
                if okeys.is_empty() {
                    continue;
                }
                let o = pick(r, &okeys).clone();
                let Some(new) = pick_other(r, &objs, &fun.omap[&o]) else { continue };
                m.comp.get_mut(&k).unwrap().omap.insert(o.clone(), new.clone());
                format!("comp[{k:?}].ob[{o}] := {new}")
            }
            1 => {
                let keys: Vec<_> = e.cell_b.keys().cloned().collect();
                if keys.is_empty() {
                    continue;
                }
                let k = pick(r, &keys).clone();
                let nat = &e.cell_b[&k];
                let mors: Vec<String> = nat.src.cod.mor.keys().cloned().collect();
                let ckeys: Vec<String> = nat.comp.keys().cloned().collect();
                if ckeys.is_empty() {
                    continue;
                }
                let o = pick(r, &ckeys).clone();
                let Some(new) = pick_other(r, &mors, &nat.comp[&o]) else { continue };
                m.cell_b.get_mut(&k).unwrap().comp.insert(o.clone(), new.clone());
                format!("cell_b[{k:?}].comp[{o}] := {new}")
            }
            _ => {
                let keys: Vec<_> = e.cell_c.keys().cloned().collect();
                if keys.is_empty() {
                    continue;
                }
                let k = pick(r, &keys).clone();
                let nat = &e.cell_c[&k];
                let mors: Vec<String> = nat.src.cod.mor.keys().cloned().collect();
                let ckeys: Vec<String> = nat.comp.keys().cloned().collect();
                if ckeys.is_empty() {
                    continue;
                }
                let o = pick(r, &ckeys).clone();
                let Some(new) = pick_other(r, &mors, &nat.comp[&o]) else { continue };
                m.cell_c.get_mut(&k).unwrap().comp.insert(o.clone(), new.clone());
                format!("cell_c[{k:?}].comp[{o}] := {new}")
            }
        };
        if m != *e {
            return Some((m, desc));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codescent::{bicoend, coherence_data_of, pi0_oracle};
    use crate::fincat::check_category;
    use crate::pseudo::{check_pseudofunctor, check_pseudonat};

    #[test]
    fn the_pool_realizes_within_budget() {
        let pool = realized_pool(500_000).unwrap();
        assert_eq!(pool.len(), index_pool().len());
        for r in &pool {
            assert!(check_category(&r.cat).unwrap().is_pass());
            assert!(r.cat.objects.len() <= 3);
        }
    }

    #[test]
    fn representable_sums_are_strict_and_discrete() {
        let pool = realized_pool(500_000).unwrap();
        let mut r = rng(7);
        for real in &pool {
            let shape = square_shape(&real.cat);
            let p = random_representable_sum(&shape, 3, &mut r).unwrap();
            assert!(check_pseudofunctor(&p).is_pass());
        }
    }

    #[test]
    fn coend_oracle_matches_pi0_oracle_on_random_instances() {
        let pool = realized_pool(500_000).unwrap();
        let mut r = rng(42);
        for _ in 0..20 {
            let real = &pool[r.gen_range(0..pool.len())];
            let shape = square_shape(&real.cat);
            let p = random_representable_sum(&shape, 3, &mut r).unwrap();
            let cd = coherence_data_of(&p, &shape).unwrap();
            assert_eq!(coend_pi0(&p, &shape).unwrap(), pi0_oracle(&cd).len());
        }
    }

    #[test]
    fn coend_oracle_matches_the_realized_codescent_on_z2() {
        let z2 = cyclic(2);
        let shape = square_shape(&z2);
        // Hom(*, −) summed twice: the regular action on 2 + 2 elements.
        let p = representable_sum(&shape, &["(*,*)".into(), "(*,*)".into()]).unwrap();
        let c = bicoend(&p, &shape, 500_000).unwrap();
        assert_eq!(coend_pi0(&p, &shape).unwrap(), c.sol.apex.pi0().len());
    }

    #[test]
    fn representable_presheaf_agrees_with_the_coyoneda_oracle() {
        // For F = Hom(−, c), the co-Yoneda quotient at b is Hom(b, c).
        let pool = realized_pool(500_000).unwrap();
        for real in &pool {
            for c in &real.cat.objects {
                let f = representable_presheaf(&real.cat, c).unwrap();
                assert!(check_pseudofunctor(&f).is_pass());
                for b in &real.cat.objects {
                    assert_eq!(coyoneda_pi0(&real.cat, &f, b), real.cat.hom(b, c).len());
                }
            }
        }
    }

    #[test]
    fn coboundary_pseudonats_pass_the_checker() {
        let pool = realized_pool(500_000).unwrap();
        let mut r = rng(3);
        for real in &pool {
            let shape = square_shape(&real.cat);
            for n in [2usize, 3] {
                let x = cyclic(n);
                let psi = random_potential(&x, &shape.total, &mut r);
                let beta = coboundary_pseudonat(&x, &shape.total, &psi).unwrap();
                assert!(check_pseudonat(&beta).is_pass());
            }
        }
    }

    #[test]
    fn mutants_differ_and_fail_their_checkers() {
        let mut r = rng(11);
        let z3 = cyclic(3);
        for _ in 0..10 {
            let (m, desc) = mutate_fincat(&z3, &mut r).unwrap();
            assert_ne!(m, z3, "{desc}");
            let broken = match check_category(&m) {
                Ok(rep) => !rep.is_pass(),
                Err(_) => true,
            };
            assert!(broken, "mutant still passes: {desc}");
        }
    }
}
