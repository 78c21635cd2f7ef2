//! Pseudofunctors built from bicoends: the parametrized bicoend
//! `a ↦ ∫^b P(a,b,b)` of a three-variable diagram, and the co-Yoneda
//! construction `I(F) = ∫^a F(a) × A(−,a)` with its action on pseudonatural
//! transformations and modifications.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::codescent::{
    coherence_data_of, compute_codescent, from_extrapseudonat, induce_1cell, induce_2cell,
    to_extrapseudonat, Codescent,
};
use crate::compose::stalactite;
use crate::error::{Error, Result};
use crate::fincat::{
    compose_fun, hwhisker_left, hwhisker_right, product_cat, product_fun, product_nat, tuple,
    untuple, vcompose_nat, Fun, Nat,
};
use crate::pseudo::{check_pseudofunctor, check_pseudonat, fix_arguments, PseudoFun, PseudoNat};
use crate::report::Report;
use crate::twocat::{op2, Fin2Cat, Shape};

/// A modification Σ: α ⇛ β between parallel pseudonatural transformations:
/// one 2-cell Σ_a: α_a ⇒ β_a per object, compatible with the cells of α, β.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modification {
    pub src: PseudoNat,
    pub tgt: PseudoNat,
    pub comp: BTreeMap<String, Nat>,
}

impl Modification {
    pub fn identity(alpha: &PseudoNat) -> Modification {
        Modification {
            src: alpha.clone(),
            tgt: alpha.clone(),
            comp: alpha
                .comp
                .iter()
                .map(|(a, f)| (a.clone(), Nat::identity(f)))
                .collect(),
        }
    }

    pub fn at(&self, a: &str) -> &Nat {
        self.comp.get(a).unwrap_or_else(|| panic!("modification has no component at {a}"))
    }
}

/// Decide the modification axiom:
/// `β_f ∘ (Σ_b ∗ 1_{Ff}) = (1_{Gf} ∗ Σ_a) ∘ α_f` for every `f: a → b`.
pub fn check_modification(m: &Modification) -> Report {
    let mut rep = Report::new("modification");
    if m.src.f != m.tgt.f || m.src.g != m.tgt.g {
        rep.fail("boundary", "", "source and target transformations are not parallel");
        return rep;
    }
    let dom = &m.src.f.dom;
    for a in &dom.objects {
        let Some(c) = m.comp.get(a) else {
            rep.fail("component", a, "missing component");
            continue;
        };
        rep.check("boundary", a, c.src == *m.src.at(a) && c.tgt == *m.tgt.at(a), || {
            format!("Σ_{a} is not α_{a} ⇒ β_{a}")
        });
        rep.check("natural", a, c.check().is_ok(), || format!("{:?}", c.check()));
    }
    if !rep.is_pass() {
        return rep;
    }
    for f in dom.onecells.keys() {
        let a = dom.src1(f).to_string();
        let b = dom.tgt1(f).to_string();
        let res = (|| -> Result<bool> {
            let lhs = vcompose_nat(
                m.tgt.cell_at(f),
                &hwhisker_right(m.at(&b), m.src.f.at1(f))?,
            )?;
            let rhs = vcompose_nat(
                &hwhisker_left(m.src.g.at1(f), m.at(&a))?,
                m.src.cell_at(f),
            )?;
            Ok(lhs == rhs)
        })();
        match res {
            Ok(ok) => rep.check("axiom", f, ok, || format!("modification axiom fails at {f}")),
            Err(e) => rep.fail("axiom", f, e.to_string()),
        }
    }
    rep
}

/// Vertical composite of modifications (`second` after `first`).
pub fn vcompose_modification(second: &Modification, first: &Modification) -> Result<Modification> {
    if first.tgt != second.src {
        return Err(Error::BoundaryMismatch("modifications not composable".into()));
    }
    let mut comp = BTreeMap::new();
    for (a, n1) in &first.comp {
        comp.insert(a.clone(), vcompose_nat(second.at(a), n1)?);
    }
    Ok(Modification { src: first.src.clone(), tgt: second.tgt.clone(), comp })
}

/// The parametrized bicoend `F(a) = ∫^b P(a,b,b)` together with the
/// per-object universal solutions it was assembled from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamBicoend {
    pub fun: PseudoFun,
    /// The inner shape `[B^op, B]` shared by every fiber.
    pub inner_shape: Shape,
    pub per_object: BTreeMap<String, Codescent>,
}

/// The restriction pseudonatural transformation `P(f,−,−): P_a ⇒ P_{a'}`
/// for a slot-0 1-cell `f: a → a'`, with cells from the coherence of P.
fn restriction_pseudonat(
    p: &PseudoFun,
    shape: &Shape,
    outer: &Fin2Cat,
    f: &str,
    p_src: &PseudoFun,
    p_tgt: &PseudoFun,
    shape2: &Shape,
) -> Result<PseudoNat> {
    let bcat = &shape.factors[1].0;
    let a0 = outer.src1(f).to_string();
    let a1 = outer.tgt1(f).to_string();
    let ia0 = outer.id1_of(&a0).to_string();
    let ia1 = outer.id1_of(&a1).to_string();
    let ids = |z: &str| -> Vec<String> {
        shape2.split(z).iter().map(|x| bcat.id1_of(x).to_string()).collect()
    };
    let mut comp = BTreeMap::new();
    for z in &shape2.total.objects {
        let i = ids(z);
        comp.insert(z.clone(), p.at1(&shape.name(&[f, &i[0], &i[1]])).clone());
    }
    let mut cell = BTreeMap::new();
    for m in shape2.total.onecells.keys() {
        let i0 = ids(shape2.total.src1(m));
        let i1 = ids(shape2.total.tgt1(m));
        let gm = shape2.split(m);
        cell.insert(
            m.clone(),
            p.factor_iso(
                &shape.name(&[f, &i1[0], &i1[1]]),
                &shape.name(&[&ia0, &gm[0], &gm[1]]),
                &shape.name(&[&ia1, &gm[0], &gm[1]]),
                &shape.name(&[f, &i0[0], &i0[1]]),
            )?,
        );
    }
    let out = PseudoNat { f: p_src.clone(), g: p_tgt.clone(), comp, cell };
    let rep = check_pseudonat(&out);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "restriction along {f} is not pseudonatural: {:?}",
            rep.first_failure()
        )));
    }
    Ok(out)
}

/// Assemble the 2-cell `β: h∘x_a ⇒ k∘x_a` over the source fiber from a
/// family of slot-0 coherence cells `per_b[b]` valued in `P(a'',b,b)`,
/// pushed into the target apex, and induce the corresponding 2-cell.
fn induce_from_slot0(
    c_src: &Codescent,
    c_tgt: &Codescent,
    h: &Fun,
    k: &Fun,
    per_b: &BTreeMap<String, Nat>,
) -> Result<Nat> {
    let mut comp = BTreeMap::new();
    for (b, inc) in &c_src.data.x1.inclusions {
        let inc_tgt = &c_tgt.data.x1.inclusions[b];
        let eta = &per_b[b];
        for (o, to) in &inc.omap {
            comp.insert(to.clone(), c_tgt.sol.x.mo(inc_tgt.mo(eta.at(o))).to_string());
        }
    }
    let beta = Nat {
        src: compose_fun(h, &c_src.sol.x)?,
        tgt: compose_fun(k, &c_src.sol.x)?,
        comp,
    };
    induce_2cell(c_src, h, k, &beta)
}

/// Compute the pseudofunctor `F: A → Cat`, `F(a) = ∫^b P(a,b,b)`, for
/// `P` on a shape `[A, B^op, B]` (the outer factor may carry either
/// orientation). Functoriality in `a` is induced by the universal property
/// of each fiber; the output passes `check_pseudofunctor` by construction.
pub fn parametrized_bicoend(p: &PseudoFun, shape: &Shape, budget: u64) -> Result<ParamBicoend> {
    if shape.arity() != 3 || !shape.factors[1].1 || shape.factors[2].1 {
        return Err(Error::MalformedTables(
            "parametrized_bicoend expects shape [A, B^op, B]".into(),
        ));
    }
    if shape.factors[1].0 != shape.factors[2].0 {
        return Err(Error::MalformedTables("parametrized_bicoend: inner factors differ".into()));
    }
    if shape.total != p.dom {
        return Err(Error::BoundaryMismatch("parametrized_bicoend: shape does not match P".into()));
    }
    let outer = if shape.factors[0].1 {
        op2(&shape.factors[0].0)
    } else {
        shape.factors[0].0.clone()
    };
    let bcat = shape.factors[1].0.clone();

    // Per-object fibers.
    let mut per: BTreeMap<String, Codescent> = BTreeMap::new();
    let mut inner_shape: Option<Shape> = None;
    for a in &outer.objects {
        let fixed: BTreeMap<usize, String> = [(0usize, a.clone())].into_iter().collect();
        let (pa, shape2) = fix_arguments(p, shape, &fixed)?;
        let cd = coherence_data_of(&pa, &shape2)?;
        per.insert(a.clone(), compute_codescent(&cd, budget)?);
        inner_shape.get_or_insert(shape2);
    }
    let inner_shape = inner_shape.expect("outer 2-category has at least one object");

    // Action on 1-cells: transport the target cocone along the restriction
    // pseudonatural and factor through the source fiber.
    let mut on1: BTreeMap<String, Fun> = BTreeMap::new();
    for f in outer.onecells.keys() {
        let a0 = outer.src1(f).to_string();
        let a1 = outer.tgt1(f).to_string();
        let beta = restriction_pseudonat(
            p,
            shape,
            &outer,
            f,
            &per[&a0].data.p,
            &per[&a1].data.p,
            &inner_shape,
        )?;
        let j = to_extrapseudonat(&per[&a1].data, &per[&a1].sol)?;
        let moved = stalactite(&beta, &inner_shape, &j)?;
        let solf = from_extrapseudonat(&per[&a0].data, &moved)?;
        on1.insert(f.clone(), induce_1cell(&per[&a0], &solf)?);
    }

    // Action on 2-cells.
    let mut on2: BTreeMap<String, Nat> = BTreeMap::new();
    for (theta, _) in outer.all2() {
        let (f0, f1) = outer.two_boundary(&theta);
        let a0 = outer.src1(&f0).to_string();
        let a1 = outer.tgt1(&f0).to_string();
        let per_b: BTreeMap<String, Nat> = bcat
            .objects
            .iter()
            .map(|b| {
                let i2 = bcat.id2_of(bcat.id1_of(b));
                (b.clone(), p.at2(&shape.name(&[&theta, &i2, &i2])).clone())
            })
            .collect();
        on2.insert(
            theta.clone(),
            induce_from_slot0(&per[&a0], &per[&a1], &on1[&f0], &on1[&f1], &per_b)?,
        );
    }

    // Composition coherence.
    let mut phi2: BTreeMap<(String, String), Nat> = BTreeMap::new();
    for (g, f) in outer.composable1() {
        let gf = outer.hc1(&g, &f).to_string();
        let a0 = outer.src1(&f).to_string();
        let atop = outer.tgt1(&g).to_string();
        let per_b: BTreeMap<String, Nat> = bcat
            .objects
            .iter()
            .map(|b| {
                let ib = bcat.id1_of(b);
                (
                    b.clone(),
                    p.phi(&shape.name(&[&g, ib, ib]), &shape.name(&[&f, ib, ib])).clone(),
                )
            })
            .collect();
        let h = compose_fun(&on1[&g], &on1[&f])?;
        phi2.insert(
            (g.clone(), f.clone()),
            induce_from_slot0(&per[&a0], &per[&atop], &h, &on1[&gf], &per_b)?,
        );
    }

    // Unit coherence.
    let mut phi0: BTreeMap<String, Nat> = BTreeMap::new();
    for a in &outer.objects {
        let ia = outer.id1_of(a).to_string();
        let per_b: BTreeMap<String, Nat> = bcat
            .objects
            .iter()
            .map(|b| (b.clone(), p.phi_ob(&shape.name(&[a, b, b])).clone()))
            .collect();
        let idf = Fun::identity(&per[a].sol.apex);
        phi0.insert(a.clone(), induce_from_slot0(&per[a], &per[a], &on1[&ia], &idf, &per_b)?);
    }

    let fun = PseudoFun {
        dom: outer,
        ob: per.iter().map(|(a, c)| (a.clone(), c.sol.apex.clone())).collect(),
        on1,
        on2,
        phi2,
        phi0,
    };
    let rep = check_pseudofunctor(&fun);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "parametrized bicoend failed pseudofunctor axioms: {:?}",
            rep.first_failure()
        )));
    }
    Ok(ParamBicoend { fun, inner_shape, per_object: per })
}

/// The strict hom 2-functor `A(−,−): A^op × A → Cat` of a strict
/// 2-category: objects to hom-categories, 1-cells to whiskering functors,
/// 2-cells to horizontal-composition natural transformations.
pub fn hom_pseudofunctor(a2: &Fin2Cat) -> Result<(PseudoFun, Shape)> {
    let shape = Shape::new(vec![(a2.clone(), true), (a2.clone(), false)]);
    let mut ob = BTreeMap::new();
    for o in &shape.total.objects {
        let pr = shape.split(o);
        ob.insert(o.clone(), a2.hom_of(&pr[0], &pr[1]).clone());
    }
    let mut on1 = BTreeMap::new();
    for m in shape.total.onecells.keys() {
        let pr = shape.split(m);
        let dom = ob[shape.total.src1(m)].clone();
        let cod = ob[shape.total.tgt1(m)].clone();
        let (g, h) = (pr[0].clone(), pr[1].clone());
        let fun = Fun::from_maps(
            &dom,
            &cod,
            |m0| a2.hc1(&h, a2.hc1(m0, &g)).to_string(),
            |t| a2.hc2(&a2.id2_of(&h), a2.hc2(t, &a2.id2_of(&g))).to_string(),
        );
        on1.insert(m.clone(), fun);
    }
    let mut on2 = BTreeMap::new();
    for (t, _) in shape.total.all2() {
        let pr = shape.split(&t);
        let (s1, t1) = shape.total.two_boundary(&t);
        let src = on1[&s1].clone();
        let comp: BTreeMap<String, String> = src
            .dom
            .objects
            .iter()
            .map(|m0| {
                (m0.clone(), a2.hc2(&pr[1], a2.hc2(&a2.id2_of(m0), &pr[0])).to_string())
            })
            .collect();
        on2.insert(t.clone(), Nat { src, tgt: on1[&t1].clone(), comp });
    }
    let mut phi2 = BTreeMap::new();
    for (g, f) in shape.total.composable1() {
        phi2.insert((g.clone(), f.clone()), Nat::identity(&compose_fun(&on1[&g], &on1[&f])?));
    }
    let mut phi0 = BTreeMap::new();
    for o in &shape.total.objects {
        phi0.insert(o.clone(), Nat::identity(&on1[shape.total.id1_of(o)]));
    }
    let p = PseudoFun { dom: shape.total.clone(), ob, on1, on2, phi2, phi0 };
    let rep = check_pseudofunctor(&p);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "hom 2-functor failed its axioms: {:?}",
            rep.first_failure()
        )));
    }
    Ok((p, shape))
}

/// The co-Yoneda construction on a presheaf `F: A^op → Cat`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coyoneda {
    pub f: PseudoFun,
    pub a: Fin2Cat,
    /// The integrand `P(b,x,y) = F(x) × A(b,y)` on `[A^op, A^op, A]`.
    pub p3: PseudoFun,
    pub shape3: Shape,
    pub hom: PseudoFun,
    pub hom_shape: Shape,
    /// `I(F) = ∫^x F(x) × A(−,x)`, pointwise.
    pub param: ParamBicoend,
}

/// Compute `I(F)(b) = ∫^x F(x) × A(b,x)` as a pseudofunctor on `A^op`.
pub fn coyoneda_object(f: &PseudoFun, a2: &Fin2Cat, budget: u64) -> Result<Coyoneda> {
    let aop = op2(a2);
    if f.dom != aop {
        return Err(Error::BoundaryMismatch("coyoneda_object expects F on A^op".into()));
    }
    let (hom, hom_shape) = hom_pseudofunctor(a2)?;
    let shape3 = Shape::new(vec![(a2.clone(), true), (a2.clone(), true), (a2.clone(), false)]);
    let hname = |g: &str, h: &str| hom_shape.name(&[g, h]);
    let mut ob = BTreeMap::new();
    for o in &shape3.total.objects {
        let pr = shape3.split(o);
        ob.insert(o.clone(), product_cat(f.at_ob(&pr[1]), &hom.ob[&hname(&pr[0], &pr[2])]));
    }
    let mut on1 = BTreeMap::new();
    for m in shape3.total.onecells.keys() {
        let pr = shape3.split(m);
        on1.insert(m.clone(), product_fun(f.at1(&pr[1]), hom.at1(&hname(&pr[0], &pr[2]))));
    }
    let mut on2 = BTreeMap::new();
    for (t, _) in shape3.total.all2() {
        let pr = shape3.split(&t);
        on2.insert(t.clone(), product_nat(f.at2(&pr[1]), hom.at2(&hname(&pr[0], &pr[2]))));
    }
    let mut phi2 = BTreeMap::new();
    for (g, fc) in shape3.total.composable1() {
        let pg = shape3.split(&g);
        let pf = shape3.split(&fc);
        let hcomp = compose_fun(
            hom.at1(&hname(&pg[0], &pg[2])),
            hom.at1(&hname(&pf[0], &pf[2])),
        )?;
        phi2.insert(
            (g.clone(), fc.clone()),
            product_nat(f.phi(&pg[1], &pf[1]), &Nat::identity(&hcomp)),
        );
    }
    let mut phi0 = BTreeMap::new();
    for o in &shape3.total.objects {
        let pr = shape3.split(o);
        let hid = hom.at1(&hname(a2.id1_of(&pr[0]), a2.id1_of(&pr[2])));
        phi0.insert(o.clone(), product_nat(f.phi_ob(&pr[1]), &Nat::identity(hid)));
    }
    let p3 = PseudoFun { dom: shape3.total.clone(), ob, on1, on2, phi2, phi0 };
    let rep = check_pseudofunctor(&p3);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "co-Yoneda integrand failed pseudofunctor axioms: {:?}",
            rep.first_failure()
        )));
    }
    let param = parametrized_bicoend(&p3, &shape3, budget)?;
    Ok(Coyoneda { f: f.clone(), a: a2.clone(), p3, shape3, hom, hom_shape, param })
}

/// `I(γ): I(F) ⇒ I(G)` for `γ: F ⇒ G`, with the per-object witness isos
/// `Γ_b: I(γ)_b ∘ i^F_b ≅ i^G_b ∘ (γ × 1)` (identities here, since the
/// induced functors factor on the nose). Components are transported cocones
/// factored through the universal property; cells are induced 2-cells.
pub fn coyoneda_on_pseudonat(
    cf: &Coyoneda,
    cg: &Coyoneda,
    gamma: &PseudoNat,
) -> Result<(PseudoNat, BTreeMap<String, Nat>)> {
    if cf.a != cg.a {
        return Err(Error::BoundaryMismatch("co-Yoneda inputs over different indices".into()));
    }
    if gamma.f != cf.f || gamma.g != cg.f {
        return Err(Error::BoundaryMismatch("γ does not match the co-Yoneda inputs".into()));
    }
    let a2 = &cf.a;
    let aop = op2(a2);
    let mut comp: BTreeMap<String, Fun> = BTreeMap::new();
    let mut witnesses: BTreeMap<String, Nat> = BTreeMap::new();
    for b in &aop.objects {
        let c_f = &cf.param.per_object[b];
        let c_g = &cg.param.per_object[b];
        let shape2 = &c_f.data.shape;
        // γ × 1: P^F_b ⇒ P^G_b.
        let mut gcomp = BTreeMap::new();
        for z in &shape2.total.objects {
            let pr = shape2.split(z);
            gcomp.insert(
                z.clone(),
                product_fun(gamma.at(&pr[0]), &Fun::identity(a2.hom_of(b, &pr[1]))),
            );
        }
        let mut gcell = BTreeMap::new();
        for m in shape2.total.onecells.keys() {
            let pr = shape2.split(m);
            let hfun = cf.hom.at1(&cf.hom_shape.name(&[a2.id1_of(b), &pr[1]]));
            gcell.insert(
                m.clone(),
                product_nat(gamma.cell_at(&pr[0]), &Nat::identity(hfun)),
            );
        }
        let gx1 = PseudoNat {
            f: c_f.data.p.clone(),
            g: c_g.data.p.clone(),
            comp: gcomp,
            cell: gcell,
        };
        let rep = check_pseudonat(&gx1);
        if !rep.is_pass() {
            return Err(Error::CheckFailed(format!(
                "γ × 1 is not pseudonatural at {b}: {:?}",
                rep.first_failure()
            )));
        }
        let j = to_extrapseudonat(&c_g.data, &c_g.sol)?;
        let moved = stalactite(&gx1, shape2, &j)?;
        let solb = from_extrapseudonat(&c_f.data, &moved)?;
        let igb = induce_1cell(c_f, &solb)?;
        witnesses.insert(b.clone(), Nat::identity(&compose_fun(&igb, &c_f.sol.x)?));
        comp.insert(b.clone(), igb);
    }
    let mut cell: BTreeMap<String, Nat> = BTreeMap::new();
    for m in aop.onecells.keys() {
        let b0 = aop.src1(m).to_string();
        let b1 = aop.tgt1(m).to_string();
        let c_f = &cf.param.per_object[&b0];
        let c_g1 = &cg.param.per_object[&b1];
        let h = compose_fun(&comp[&b1], cf.param.fun.at1(m))?;
        let k = compose_fun(cg.param.fun.at1(m), &comp[&b0])?;
        let mut bcomp = BTreeMap::new();
        for (x, inc) in &c_f.data.x1.inclusions {
            let inc_g = &c_g1.data.x1.inclusions[x];
            let ix = a2.id1_of(x).to_string();
            let unit = gamma.cell_at(&ix);
            for (o, to) in &inc.omap {
                let pr = untuple(o);
                let tm = a2.hc1(&pr[1], m).to_string();
                let hom_id = a2.hom_of(&b1, x).id_of(&tm).to_string();
                let mor = tuple(&[unit.at(&pr[0]).to_string(), hom_id]);
                bcomp.insert(to.clone(), c_g1.sol.x.mo(inc_g.mo(&mor)).to_string());
            }
        }
        let beta = Nat {
            src: compose_fun(&h, &c_f.sol.x)?,
            tgt: compose_fun(&k, &c_f.sol.x)?,
            comp: bcomp,
        };
        cell.insert(m.clone(), induce_2cell(c_f, &h, &k, &beta)?);
    }
    let out = PseudoNat { f: cf.param.fun.clone(), g: cg.param.fun.clone(), comp, cell };
    let rep = check_pseudonat(&out);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "I(γ) failed the pseudonaturality axioms: {:?}",
            rep.first_failure()
        )));
    }
    Ok((out, witnesses))
}

/// `I(Σ): I(γ) ⇛ I(δ)` for a modification `Σ: γ ⇛ δ`; each component is
/// the unique induced 2-cell, so functoriality in Σ is strict.
pub fn coyoneda_on_modification(
    cf: &Coyoneda,
    cg: &Coyoneda,
    igamma: &PseudoNat,
    idelta: &PseudoNat,
    sigma: &Modification,
) -> Result<Modification> {
    if sigma.src.f != cf.f || sigma.src.g != cg.f {
        return Err(Error::BoundaryMismatch("Σ does not match the co-Yoneda inputs".into()));
    }
    let a2 = &cf.a;
    let aop = op2(a2);
    let mut comp = BTreeMap::new();
    for b in &aop.objects {
        let c_f = &cf.param.per_object[b];
        let c_g = &cg.param.per_object[b];
        let mut bcomp = BTreeMap::new();
        for (x, inc) in &c_f.data.x1.inclusions {
            let inc_g = &c_g.data.x1.inclusions[x];
            let sx = sigma.at(x);
            for (o, to) in &inc.omap {
                let pr = untuple(o);
                let hom_id = a2.hom_of(b, x).id_of(&pr[1]).to_string();
                let mor = tuple(&[sx.at(&pr[0]).to_string(), hom_id]);
                bcomp.insert(to.clone(), c_g.sol.x.mo(inc_g.mo(&mor)).to_string());
            }
        }
        let h = igamma.at(b).clone();
        let k = idelta.at(b).clone();
        let beta = Nat {
            src: compose_fun(&h, &c_f.sol.x)?,
            tgt: compose_fun(&k, &c_f.sol.x)?,
            comp: bcomp,
        };
        comp.insert(b.clone(), induce_2cell(c_f, &h, &k, &beta)?);
    }
    let out = Modification { src: igamma.clone(), tgt: idelta.clone(), comp };
    let rep = check_modification(&out);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "I(Σ) failed the modification axiom: {:?}",
            rep.first_failure()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{find_equivalence, FinCat};
    use crate::pseudo::constant_pseudofunctor;

    fn walking_arrow_2cat() -> Fin2Cat {
        let mut c = FinCat::discrete(&["p", "q"]);
        c.mor.insert("w".into(), ("p".into(), "q".into()));
        c.compose.insert(("w".into(), "id_p".into()), "w".into());
        c.compose.insert(("id_q".into(), "w".into()), "w".into());
        Fin2Cat::from_cat(&c)
    }

    fn z2_2cat() -> Fin2Cat {
        let mut c = FinCat::discrete(&["*"]);
        c.mor.insert("s".into(), ("*".into(), "*".into()));
        for (k, v) in [(("s", "id_*"), "s"), (("id_*", "s"), "s"), (("s", "s"), "id_*")] {
            c.compose.insert((k.0.into(), k.1.into()), v.into());
        }
        Fin2Cat::from_cat(&c)
    }

    fn z2_group_cat() -> FinCat {
        let mut c = FinCat::discrete(&["*"]);
        c.mor.insert("s".into(), ("*".into(), "*".into()));
        for (k, v) in [(("s", "id_*"), "s"), (("id_*", "s"), "s"), (("s", "s"), "id_*")] {
            c.compose.insert((k.0.into(), k.1.into()), v.into());
        }
        c
    }

    #[test]
    fn hom_pseudofunctor_of_walking_arrow() {
        let a2 = walking_arrow_2cat();
        let (h, shape) = hom_pseudofunctor(&a2).unwrap();
        assert_eq!(h.ob[&shape.name(&["p", "q"])].objects.len(), 1);
        assert!(h.ob[&shape.name(&["q", "p"])].objects.is_empty());
        // Precomposition by w sends id_q to w.
        let act = h.at1(&shape.name(&["w", "id_q"]));
        assert_eq!(act.ob("id_q"), "w");
    }

    #[test]
    fn parametrized_bicoend_over_trivial_inner() {
        // B trivial: F(a) is P(a,*,*) up to tagging, and F(w) is P(w,1,1).
        let a2 = walking_arrow_2cat();
        let t = Fin2Cat::terminal();
        let shape = Shape::new(vec![(a2.clone(), false), (t.clone(), true), (t, false)]);
        let two = FinCat::discrete(&["u0", "u1"]);
        let one = FinCat::discrete(&["v"]);
        let collapse = Fun::constant(&two, &one, "v");
        let mut ob = BTreeMap::new();
        let mut on1 = BTreeMap::new();
        for o in &shape.total.objects {
            let pr = shape.split(o);
            ob.insert(o.clone(), if pr[0] == "p" { two.clone() } else { one.clone() });
        }
        for m in shape.total.onecells.keys() {
            let pr = shape.split(m);
            on1.insert(
                m.clone(),
                match pr[0].as_str() {
                    "id_p" => Fun::identity(&two),
                    "id_q" => Fun::identity(&one),
                    _ => collapse.clone(),
                },
            );
        }
        let p = PseudoFun::strict(&shape.total, ob, on1).unwrap();
        let out = parametrized_bicoend(&p, &shape, 100_000).unwrap();
        assert_eq!(out.fun.at_ob("p").objects.len(), 2);
        assert_eq!(out.fun.at_ob("q").objects.len(), 1);
        let fw = out.fun.at1("w");
        assert!(fw.omap.values().all(|v| v == "v:*"));
    }

    #[test]
    fn parametrized_bicoend_constant_in_outer() {
        // The Z/2 sign action, constant along the walking arrow: both fibers
        // are the two-object groupoid with one order-two loop each, and F(w)
        // is an isomorphism.
        let a2 = walking_arrow_2cat();
        let b2 = z2_2cat();
        let shape = Shape::new(vec![(a2, false), (b2.clone(), true), (b2, false)]);
        let two = FinCat::discrete(&["0", "1"]);
        let swap = Fun::from_maps(
            &two,
            &two,
            |o| if o == "0" { "1".into() } else { "0".into() },
            |m| if m == "id_0" { "id_1".into() } else { "id_0".into() },
        );
        let mut ob = BTreeMap::new();
        let mut on1 = BTreeMap::new();
        for o in &shape.total.objects {
            ob.insert(o.clone(), two.clone());
        }
        for m in shape.total.onecells.keys() {
            let parity = shape.split(m).iter().skip(1).filter(|x| *x == "s").count() % 2;
            on1.insert(m.clone(), if parity == 1 { swap.clone() } else { Fun::identity(&two) });
        }
        let p = PseudoFun::strict(&shape.total, ob, on1).unwrap();
        let out = parametrized_bicoend(&p, &shape, 500_000).unwrap();
        for a in ["p", "q"] {
            assert_eq!(out.fun.at_ob(a).objects.len(), 2);
            assert_eq!(out.fun.at_ob(a).mor.len(), 4);
        }
        let fw = out.fun.at1("w");
        assert!(fw.check().is_ok());
        assert_eq!(fw.omap.len(), 2);
    }

    /// The representable presheaf A(−, q) on the walking arrow, extracted
    /// from the hom 2-functor.
    fn representable_at_q(a2: &Fin2Cat) -> PseudoFun {
        let (h, hshape) = hom_pseudofunctor(a2).unwrap();
        let fixed: BTreeMap<usize, String> = [(1usize, "q".to_string())].into_iter().collect();
        let (f, rem) = fix_arguments(&h, &hshape, &fixed).unwrap();
        assert_eq!(rem.total, op2(a2));
        f
    }

    #[test]
    fn coyoneda_of_representable_recovers_the_presheaf() {
        let a2 = walking_arrow_2cat();
        let f = representable_at_q(&a2);
        let cy = coyoneda_object(&f, &a2, 500_000).unwrap();
        for b in ["p", "q"] {
            let val = cy.param.fun.at_ob(b);
            let target = f.at_ob(b);
            assert_eq!(val.pi0().len(), target.pi0().len(), "π0 mismatch at {b}");
            let w = find_equivalence(val, target, 1_000_000).unwrap();
            assert!(w.is_some(), "I(F)({b}) not equivalent to F({b})");
        }
    }

    #[test]
    fn coyoneda_on_pseudonat_to_terminal() {
        let a2 = walking_arrow_2cat();
        let aop = op2(&a2);
        let f = representable_at_q(&a2);
        let g = constant_pseudofunctor(&FinCat::terminal(), &aop);
        // The unique transformation F ⇒ Δ1.
        let mut comp = BTreeMap::new();
        let mut cell = BTreeMap::new();
        for x in &aop.objects {
            comp.insert(x.clone(), Fun::constant(f.at_ob(x), &FinCat::terminal(), "*"));
        }
        for m in aop.onecells.keys() {
            let x0 = aop.src1(m).to_string();
            let x1 = aop.tgt1(m).to_string();
            let src = compose_fun(&comp[&x1], f.at1(m)).unwrap();
            let tgt = compose_fun(g.at1(m), &comp[&x0]).unwrap();
            let c: BTreeMap<String, String> =
                src.dom.objects.iter().map(|o| (o.clone(), "id_*".to_string())).collect();
            cell.insert(m.clone(), Nat { src, tgt, comp: c });
        }
        let gamma = PseudoNat { f: f.clone(), g: g.clone(), comp, cell };
        assert!(check_pseudonat(&gamma).is_pass());
        let cf = coyoneda_object(&f, &a2, 500_000).unwrap();
        let cg = coyoneda_object(&g, &a2, 500_000).unwrap();
        let (ig, wits) = coyoneda_on_pseudonat(&cf, &cg, &gamma).unwrap();
        assert!(check_pseudonat(&ig).is_pass());
        assert_eq!(wits.len(), 2);
    }

    #[test]
    fn coyoneda_on_modification_is_strict() {
        // Over the terminal index: F(*) = Z/2 as a one-object groupoid, and
        // Σ the central loop, an order-two modification of the identity.
        let t = Fin2Cat::terminal();
        let g = z2_group_cat();
        let f = constant_pseudofunctor(&g, &op2(&t));
        let cy = coyoneda_object(&f, &t, 100_000).unwrap();
        let idnat = PseudoNat::identity(&f);
        let (ig, _) = coyoneda_on_pseudonat(&cy, &cy, &idnat).unwrap();
        let sigma = Modification {
            src: idnat.clone(),
            tgt: idnat.clone(),
            comp: [(
                "*".to_string(),
                Nat {
                    src: Fun::identity(&g),
                    tgt: Fun::identity(&g),
                    comp: [("*".to_string(), "s".to_string())].into_iter().collect(),
                },
            )]
            .into_iter()
            .collect(),
        };
        assert!(check_modification(&sigma).is_pass());
        let isig = coyoneda_on_modification(&cy, &cy, &ig, &ig, &sigma).unwrap();
        assert_ne!(isig, Modification::identity(&ig));
        // Σ∘Σ is the identity modification; strict functoriality gives
        // I(Σ)∘I(Σ) = I(Σ∘Σ) = identity.
        let square = vcompose_modification(&isig, &isig).unwrap();
        let sigma2 = vcompose_modification(&sigma, &sigma).unwrap();
        assert_eq!(sigma2, Modification::identity(&idnat));
        let isig2 = coyoneda_on_modification(&cy, &cy, &ig, &ig, &sigma2).unwrap();
        assert_eq!(square, isig2);
    }
}
