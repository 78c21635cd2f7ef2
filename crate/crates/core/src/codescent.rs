//! Bicodescent objects (bicoends) of pseudofunctors `P: B^op × B → Cat`.
//!
//! The coherence data of `P` is the diagram
//!
//! ```text
//!   X3 ⇉⇉ X2 ⇄ X1        X1 = ⊔_a P(a,a),   X2 = ⊔_{f: a→b} P(b,a),
//!                         X3 = ⊔_{θ: g·f ⇒ h} P(c,a)
//! ```
//!
//! with functors `u, w: X2 → X1`, `v: X1 → X2`, `p, q, r: X3 → X2` and
//! invertible 2-cells `δ: uv ⇒ id`, `γ: id ⇒ wv`, `κ: up ⇒ uq`,
//! `λ: wr ⇒ wq`, `ρ: ur ⇒ wp` built from the coherence cells of `P`.
//!
//! A cocone (candidate solution) is `x: X1 → Y` with an invertible
//! `χ: xu ⇒ xw` satisfying
//!
//! - BC1: `(χ∗1_q)∘(1_x∗κ) = (1_x∗λ)∘(χ∗1_r)∘(1_x∗ρ⁻¹)∘(χ∗1_p)`,
//! - BC2: `χ∗1_v = (1_x∗γ)∘(1_x∗δ)`.
//!
//! `compute_codescent` presents the universal solution by generators and
//! relations and realizes it as an explicit finite category; BC3 and BC4
//! (one- and two-dimensional universality) are realized by `induce_1cell`
//! and `induce_2cell`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extra::{
    check_extrapseudonat, forced_a_cell, key3, pad_terminal, terminal_triple_shape,
    ExtraPseudoNat, Key3,
};
use crate::fincat::{
    compose_fun, hwhisker_left, hwhisker_right, vcompose_nat, FinCat, Fun, Nat, UnionFind,
};
use crate::presentations::{disjoint_union, realize, CatPresentation, Realized, TaggedUnion, Word};
use crate::pseudo::{constant_pseudofunctor, is_constant, PseudoFun};
use crate::report::Report;
use crate::twocat::{Fin2Cat, Shape};

/// The strict coherence diagram extracted from `P: B^op × B → Cat`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceData {
    pub p: PseudoFun,
    pub shape: Shape,
    /// Diagonal summands, tagged by objects of B.
    pub x1: TaggedUnion,
    /// Off-diagonal summands, tagged by 1-cells of B.
    pub x2: TaggedUnion,
    /// Summands tagged by `"(f,g,θ)"` for every 2-cell `θ: g·f ⇒ h`.
    pub x3: TaggedUnion,
    /// `tag of X3 → (f, g, θ)`.
    pub x3_index: BTreeMap<String, (String, String, String)>,
    pub u: Fun,
    pub w: Fun,
    pub v: Fun,
    pub pp: Fun,
    pub qq: Fun,
    pub rr: Fun,
    pub delta: Nat,
    pub gamma: Nat,
    pub kappa: Nat,
    pub lambda: Nat,
    pub rho: Nat,
}

/// A cocone under the coherence data: `x: X1 → apex`, `χ: xu ⇒ xw`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodescentSolution {
    pub apex: FinCat,
    pub x: Fun,
    pub chi: Nat,
}

/// The computed universal solution, with its presentation machinery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codescent {
    pub data: CoherenceData,
    pub realized: Realized,
    pub sol: CodescentSolution,
}

/// Glue per-tag functors `parts[tag]: U.parts[tag] → cod` into a functor
/// out of the tagged union.
fn glue_fun(un: &TaggedUnion, cod: &FinCat, parts: &BTreeMap<String, Fun>) -> Result<Fun> {
    let mut omap = BTreeMap::new();
    let mut mmap = BTreeMap::new();
    for (tag, inc) in &un.inclusions {
        let Some(part) = parts.get(tag) else {
            return Err(Error::MalformedTables(format!("glue_fun: no part for tag {tag}")));
        };
        if part.dom != un.parts[tag] || part.cod != *cod {
            return Err(Error::BoundaryMismatch(format!("glue_fun: part {tag} misboundaried")));
        }
        for (o, to) in &inc.omap {
            omap.insert(to.clone(), part.ob(o).to_string());
        }
        for (m, tm) in &inc.mmap {
            mmap.insert(tm.clone(), part.mo(m).to_string());
        }
    }
    Ok(Fun { dom: un.result.clone(), cod: cod.clone(), omap, mmap })
}

/// Glue per-tag natural transformations into one out of the tagged union.
fn glue_nat(
    un: &TaggedUnion,
    src: &Fun,
    tgt: &Fun,
    parts: &BTreeMap<String, Nat>,
) -> Result<Nat> {
    let mut comp = BTreeMap::new();
    for (tag, inc) in &un.inclusions {
        let Some(part) = parts.get(tag) else {
            return Err(Error::MalformedTables(format!("glue_nat: no part for tag {tag}")));
        };
        for (o, to) in &inc.omap {
            comp.insert(to.clone(), part.at(o).to_string());
        }
    }
    let n = Nat { src: src.clone(), tgt: tgt.clone(), comp };
    n.check().map_err(|e| Error::CheckFailed(format!("glued 2-cell is not natural: {e}")))?;
    Ok(n)
}

/// Extract the coherence diagram of `P: B^op × B → Cat`.
pub fn coherence_data_of(p: &PseudoFun, shape: &Shape) -> Result<CoherenceData> {
    if shape.arity() != 2 || !shape.factors[0].1 || shape.factors[1].1 {
        return Err(Error::MalformedTables("coherence data expects shape [B^op, B]".into()));
    }
    if shape.factors[0].0 != shape.factors[1].0 {
        return Err(Error::MalformedTables("coherence data: the two factors differ".into()));
    }
    if shape.total != p.dom {
        return Err(Error::BoundaryMismatch("coherence data: shape does not match P".into()));
    }
    let b: Fin2Cat = shape.factors[0].0.clone();
    let name = |x: &str, y: &str| shape.name(&[x, y]);

    // The three tagged unions.
    let mut parts1 = BTreeMap::new();
    for a in &b.objects {
        parts1.insert(a.clone(), p.at_ob(&name(a, a)).clone());
    }
    let x1 = disjoint_union(&parts1);
    let mut parts2 = BTreeMap::new();
    for f in b.onecells.keys() {
        let (a, bb) = (b.src1(f), b.tgt1(f));
        parts2.insert(f.clone(), p.at_ob(&name(bb, a)).clone());
    }
    let x2 = disjoint_union(&parts2);
    let mut parts3 = BTreeMap::new();
    let mut x3_index = BTreeMap::new();
    for (g, f) in b.composable1() {
        let gf = b.hc1(&g, &f).to_string();
        let a = b.src1(&f).to_string();
        let c = b.tgt1(&g).to_string();
        for (theta, (ts, _)) in &b.hom_at(&gf).mor {
            if *ts != gf {
                continue;
            }
            let tag = crate::fincat::tuple(&[f.clone(), g.clone(), theta.clone()]);
            parts3.insert(tag.clone(), p.at_ob(&name(&c, &a)).clone());
            x3_index.insert(tag, (f.clone(), g.clone(), theta.clone()));
        }
    }
    let x3 = disjoint_union(&parts3);

    // Functor legs.
    let mut u_parts = BTreeMap::new();
    let mut w_parts = BTreeMap::new();
    for f in b.onecells.keys() {
        let (a, bb) = (b.src1(f).to_string(), b.tgt1(f).to_string());
        let ia = b.id1_of(&a).to_string();
        let ib = b.id1_of(&bb).to_string();
        u_parts.insert(f.clone(), compose_fun(&x1.inclusions[&a], p.at1(&name(f, &ia)))?);
        w_parts.insert(f.clone(), compose_fun(&x1.inclusions[&bb], p.at1(&name(&ib, f)))?);
    }
    let u = glue_fun(&x2, &x1.result, &u_parts)?;
    let w = glue_fun(&x2, &x1.result, &w_parts)?;
    let mut v_parts = BTreeMap::new();
    for a in &b.objects {
        v_parts.insert(a.clone(), x2.inclusions[b.id1_of(a)].clone());
    }
    let v = glue_fun(&x1, &x2.result, &v_parts)?;
    let mut p_parts = BTreeMap::new();
    let mut q_parts = BTreeMap::new();
    let mut r_parts = BTreeMap::new();
    for (tag, (f, g, theta)) in &x3_index {
        let a = b.src1(f).to_string();
        let c = b.tgt1(g).to_string();
        let ia = b.id1_of(&a).to_string();
        let ic = b.id1_of(&c).to_string();
        let h = b.two_boundary(theta).1;
        p_parts.insert(tag.clone(), compose_fun(&x2.inclusions[f], p.at1(&name(g, &ia)))?);
        q_parts.insert(tag.clone(), x2.inclusions[&h].clone());
        r_parts.insert(tag.clone(), compose_fun(&x2.inclusions[g], p.at1(&name(&ic, f)))?);
    }
    let pp = glue_fun(&x3, &x2.result, &p_parts)?;
    let qq = glue_fun(&x3, &x2.result, &q_parts)?;
    let rr = glue_fun(&x3, &x2.result, &r_parts)?;
    for fun in [&u, &w, &v, &pp, &qq, &rr] {
        fun.check().map_err(|e| Error::CheckFailed(format!("coherence leg not a functor: {e}")))?;
    }

    // Structure 2-cells.
    let mut d_parts = BTreeMap::new();
    let mut g_parts = BTreeMap::new();
    for a in &b.objects {
        let whisk = hwhisker_left(&x1.inclusions[a], p.phi_ob(&name(a, a)))?;
        g_parts.insert(a.clone(), whisk.invert()?);
        d_parts.insert(a.clone(), whisk);
    }
    let delta = glue_nat(&x1, &compose_fun(&u, &v)?, &Fun::identity(&x1.result), &d_parts)?;
    let gamma = glue_nat(&x1, &Fun::identity(&x1.result), &compose_fun(&w, &v)?, &g_parts)?;
    let mut k_parts = BTreeMap::new();
    let mut l_parts = BTreeMap::new();
    let mut r2_parts = BTreeMap::new();
    for (tag, (f, g, theta)) in &x3_index {
        let a = b.src1(f).to_string();
        let bb = b.tgt1(f).to_string();
        let c = b.tgt1(g).to_string();
        let ia = b.id1_of(&a).to_string();
        let ib = b.id1_of(&bb).to_string();
        let ic = b.id1_of(&c).to_string();
        let id2a = b.id2_of(&ia);
        let id2c = b.id2_of(&ic);
        // κ: 1_{I_a} ∗ (P(θ, 1) ∘ φ_{(f,1),(g,1)}).
        let inner_k = vcompose_nat(
            p.at2(&shape.name(&[theta, &id2a])),
            p.phi(&name(f, &ia), &name(g, &ia)),
        )?;
        k_parts.insert(tag.clone(), hwhisker_left(&x1.inclusions[&a], &inner_k)?);
        // λ: 1_{I_c} ∗ (P(1, θ) ∘ φ_{(1,g),(1,f)}).
        let inner_l = vcompose_nat(
            p.at2(&shape.name(&[&id2c, theta])),
            p.phi(&name(&ic, g), &name(&ic, f)),
        )?;
        l_parts.insert(tag.clone(), hwhisker_left(&x1.inclusions[&c], &inner_l)?);
        // ρ: 1_{I_b} ∗ (φ⁻¹_{(1,f),(g,1)} ∘ φ_{(g,1),(1,f)}).
        let inner_r = p.factor_iso(&name(g, &ib), &name(&ic, f), &name(&ib, f), &name(g, &ia))?;
        r2_parts.insert(tag.clone(), hwhisker_left(&x1.inclusions[&bb], &inner_r)?);
    }
    let kappa = glue_nat(&x3, &compose_fun(&u, &pp)?, &compose_fun(&u, &qq)?, &k_parts)?;
    let lambda = glue_nat(&x3, &compose_fun(&w, &rr)?, &compose_fun(&w, &qq)?, &l_parts)?;
    let rho = glue_nat(&x3, &compose_fun(&u, &rr)?, &compose_fun(&w, &pp)?, &r2_parts)?;

    Ok(CoherenceData {
        p: p.clone(),
        shape: shape.clone(),
        x1,
        x2,
        x3,
        x3_index,
        u,
        w,
        v,
        pp,
        qq,
        rr,
        delta,
        gamma,
        kappa,
        lambda,
        rho,
    })
}

/// Decide the cocone axioms (boundaries, invertibility, BC1, BC2).
pub fn check_cocone(cd: &CoherenceData, sol: &CodescentSolution) -> Report {
    let mut rep = Report::new("codescent cocone");
    if sol.x.dom != cd.x1.result || sol.x.cod != sol.apex {
        rep.fail("boundary", "x", "x is not X1 → apex");
        return rep;
    }
    rep.check("functor", "x", sol.x.check().is_ok(), || format!("{:?}", sol.x.check()));
    if !rep.is_pass() {
        return rep;
    }
    let xu = compose_fun(&sol.x, &cd.u).expect("boundaries checked");
    let xw = compose_fun(&sol.x, &cd.w).expect("boundaries checked");
    rep.check("boundary", "chi", sol.chi.src == xu && sol.chi.tgt == xw, || {
        "χ is not xu ⇒ xw".into()
    });
    if !rep.is_pass() {
        return rep;
    }
    rep.check("natural", "chi", sol.chi.check().is_ok(), || format!("{:?}", sol.chi.check()));
    rep.check("invertible", "chi", sol.chi.is_invertible(), || "χ has a non-iso component".into());
    if !rep.is_pass() {
        return rep;
    }
    let res = (|| -> Result<(bool, bool)> {
        let bc1_l = vcompose_nat(
            &hwhisker_right(&sol.chi, &cd.qq)?,
            &hwhisker_left(&sol.x, &cd.kappa)?,
        )?;
        let bc1_r = vcompose_nat(
            &hwhisker_left(&sol.x, &cd.lambda)?,
            &vcompose_nat(
                &hwhisker_right(&sol.chi, &cd.rr)?,
                &vcompose_nat(
                    &hwhisker_left(&sol.x, &cd.rho.invert()?)?,
                    &hwhisker_right(&sol.chi, &cd.pp)?,
                )?,
            )?,
        )?;
        let bc2_l = hwhisker_right(&sol.chi, &cd.v)?;
        let bc2_r = vcompose_nat(
            &hwhisker_left(&sol.x, &cd.gamma)?,
            &hwhisker_left(&sol.x, &cd.delta)?,
        )?;
        Ok((bc1_l == bc1_r, bc2_l == bc2_r))
    })();
    match res {
        Ok((bc1, bc2)) => {
            rep.check("BC1", "", bc1, || "BC1 pasting equality fails".into());
            rep.check("BC2", "", bc2, || "BC2 pasting equality fails".into());
        }
        Err(e) => rep.fail("BC1/BC2", "", e.to_string()),
    }
    rep
}

fn chi_name(z: &str) -> String {
    format!("chi[{z}]")
}

fn chi_inv_name(z: &str) -> String {
    format!("chi_inv[{z}]")
}

/// The singleton word of a morphism of X1, with identities erased.
fn word_of(x1: &FinCat, m: &str) -> Vec<String> {
    if x1.identity.values().any(|i| i == m) {
        vec![]
    } else {
        vec![m.to_string()]
    }
}

/// Compute the universal solution by presenting the quotient category:
/// objects and morphisms of X1, plus an invertible generator `χ_z` per
/// object `z` of X2, modulo naturality of χ and BC1/BC2.
pub fn compute_codescent(cd: &CoherenceData, budget: u64) -> Result<Codescent> {
    let x1 = &cd.x1.result;
    let mut pres = CatPresentation::of_cat("codescent", x1);
    for z in &cd.x2.result.objects {
        for n in [chi_name(z), chi_inv_name(z)] {
            if pres.arrows.contains_key(&n) || x1.mor.contains_key(&n) {
                return Err(Error::MalformedTables(format!("generator name {n} collides")));
            }
        }
        pres.arrow(chi_name(z), cd.u.ob(z), cd.w.ob(z));
        pres.arrow(chi_inv_name(z), cd.w.ob(z), cd.u.ob(z));
    }
    let word = |src: &str, tgt: &str, gens: Vec<String>| Word {
        src: src.to_string(),
        tgt: tgt.to_string(),
        gens,
    };
    // Invertibility of χ.
    for z in &cd.x2.result.objects {
        let (uo, wo) = (cd.u.ob(z).to_string(), cd.w.ob(z).to_string());
        pres.relation(
            word(&uo, &uo, vec![chi_name(z), chi_inv_name(z)]),
            word(&uo, &uo, vec![]),
        )?;
        pres.relation(
            word(&wo, &wo, vec![chi_inv_name(z), chi_name(z)]),
            word(&wo, &wo, vec![]),
        )?;
    }
    // Naturality of χ against every morphism of X2.
    for (m, (zs, zt)) in &cd.x2.result.mor {
        if cd.x2.result.identity.values().any(|i| i == m) {
            continue;
        }
        let mut lhs = word_of(x1, cd.u.mo(m));
        lhs.push(chi_name(zt));
        let mut rhs = vec![chi_name(zs)];
        rhs.extend(word_of(x1, cd.w.mo(m)));
        pres.relation(
            word(cd.u.ob(zs), cd.w.ob(zt), lhs),
            word(cd.u.ob(zs), cd.w.ob(zt), rhs),
        )?;
    }
    // BC1 pointwise over X3.
    for z3 in &cd.x3.result.objects {
        let pz = cd.pp.ob(z3).to_string();
        let qz = cd.qq.ob(z3).to_string();
        let rz = cd.rr.ob(z3).to_string();
        let rho_inv = x1
            .inverse_of(cd.rho.at(z3))
            .ok_or_else(|| Error::CheckFailed(format!("ρ not invertible at {z3}")))?;
        let mut lhs = word_of(x1, cd.kappa.at(z3));
        lhs.push(chi_name(&qz));
        let mut rhs = vec![chi_name(&pz)];
        rhs.extend(word_of(x1, &rho_inv));
        rhs.push(chi_name(&rz));
        rhs.extend(word_of(x1, cd.lambda.at(z3)));
        pres.relation(
            word(cd.u.ob(&pz), cd.w.ob(&qz), lhs),
            word(cd.u.ob(&pz), cd.w.ob(&qz), rhs),
        )?;
    }
    // BC2 pointwise over X1.
    for z1 in &x1.objects {
        let vz = cd.v.ob(z1).to_string();
        let lhs = vec![chi_name(&vz)];
        let mut rhs = word_of(x1, cd.delta.at(z1));
        rhs.extend(word_of(x1, cd.gamma.at(z1)));
        pres.relation(
            word(cd.u.ob(&vz), cd.w.ob(&vz), lhs),
            word(cd.u.ob(&vz), cd.w.ob(&vz), rhs),
        )?;
    }
    let realized = realize(&pres, budget)?;
    let apex = realized.cat.clone();
    let ids: std::collections::BTreeSet<&String> = x1.identity.values().collect();
    let x = Fun::from_maps(x1, &apex, |o| o.to_string(), |m| {
        if ids.contains(&m.to_string()) {
            format!("id_{}", x1.src(m))
        } else {
            realized.gen(m)
        }
    });
    x.check().map_err(|e| Error::CheckFailed(format!("quotient map not a functor: {e}")))?;
    let chi = Nat {
        src: compose_fun(&x, &cd.u)?,
        tgt: compose_fun(&x, &cd.w)?,
        comp: cd
            .x2
            .result
            .objects
            .iter()
            .map(|z| (z.clone(), realized.gen(&chi_name(z))))
            .collect(),
    };
    let sol = CodescentSolution { apex, x, chi };
    let rep = check_cocone(cd, &sol);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "computed solution failed the cocone axioms: {:?}",
            rep.first_failure()
        )));
    }
    Ok(Codescent { data: cd.clone(), realized, sol })
}

/// Convenience: coherence data plus universal solution in one call.
pub fn bicoend(p: &PseudoFun, shape: &Shape, budget: u64) -> Result<Codescent> {
    let cd = coherence_data_of(p, shape)?;
    compute_codescent(&cd, budget)
}

/// π0 of the bicodescent object, computed directly by union–find: objects of
/// X1 modulo (a) morphisms of X1 and (b) `u(z) ~ w(z)` for every object `z`
/// of X2. Adding the χ generators and quotienting by the relations changes
/// no connectivity, so this agrees with `pi0` of the computed apex.
pub fn pi0_oracle(cd: &CoherenceData) -> Vec<std::collections::BTreeSet<String>> {
    let mut uf = UnionFind::new(cd.x1.result.objects.iter().cloned());
    for (s, t) in cd.x1.result.mor.values() {
        uf.union(s, t);
    }
    for z in &cd.x2.result.objects {
        uf.union(cd.u.ob(z), cd.w.ob(z));
    }
    uf.classes()
}

fn insert_consistent(
    map: &mut BTreeMap<String, String>,
    key: &str,
    val: &str,
    what: &str,
) -> Result<()> {
    match map.get(key) {
        Some(old) if old != val => Err(Error::CheckFailed(format!(
            "{what}: {key} receives both {old} and {val}"
        ))),
        Some(_) => Ok(()),
        None => {
            map.insert(key.to_string(), val.to_string());
            Ok(())
        }
    }
}

/// BC3: induce the unique-up-to-identity mediating functor from the computed
/// universal solution to any other cocone, satisfying `h∘x = y` and
/// `1_h ∗ χ = υ` exactly.
pub fn induce_1cell(c: &Codescent, other: &CodescentSolution) -> Result<Fun> {
    let rep = check_cocone(&c.data, other);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "induce_1cell target is not a cocone: {:?}",
            rep.first_failure()
        )));
    }
    let apex = &c.sol.apex;
    let z = &other.apex;
    // Generator images.
    let mut known: BTreeMap<String, String> = BTreeMap::new();
    for o in &apex.objects {
        insert_consistent(&mut known, apex.id_of(o), z.id_of(other.x.ob(o)), "induce_1cell")?;
    }
    let ids: std::collections::BTreeSet<&String> = c.data.x1.result.identity.values().collect();
    for m in c.data.x1.result.mor.keys() {
        if ids.contains(m) {
            continue;
        }
        insert_consistent(&mut known, c.sol.x.mo(m), other.x.mo(m), "induce_1cell")?;
    }
    for zo in &c.data.x2.result.objects {
        let img = other.chi.at(zo).to_string();
        insert_consistent(&mut known, c.sol.chi.at(zo), &img, "induce_1cell")?;
        let inv_apex = apex
            .inverse_of(c.sol.chi.at(zo))
            .expect("χ is invertible in the universal solution");
        let inv_z = z
            .inverse_of(&img)
            .ok_or_else(|| Error::CheckFailed(format!("υ not invertible at {zo}")))?;
        insert_consistent(&mut known, &inv_apex, &inv_z, "induce_1cell")?;
    }
    // Close under composition: every apex morphism is a composite of the
    // generators above, so a fixpoint pass over the composition table
    // reaches everything.
    loop {
        let mut changed = false;
        for ((g, f), h) in &apex.compose {
            let (Some(vg), Some(vf)) = (known.get(g), known.get(f)) else { continue };
            let val = z.comp(vg, vf).to_string();
            if !known.contains_key(h) {
                known.insert(h.clone(), val);
                changed = true;
            } else if known[h] != val {
                return Err(Error::CheckFailed(format!(
                    "induce_1cell: inconsistent images for {h}"
                )));
            }
        }
        if !changed {
            break;
        }
    }
    for m in apex.mor.keys() {
        if !known.contains_key(m) {
            return Err(Error::CheckFailed(format!(
                "induce_1cell: {m} is not generated by x-images and χ"
            )));
        }
    }
    let h = Fun {
        dom: apex.clone(),
        cod: z.clone(),
        omap: apex.objects.iter().map(|o| (o.clone(), other.x.ob(o).to_string())).collect(),
        mmap: known,
    };
    h.check().map_err(|e| Error::CheckFailed(format!("induced map not a functor: {e}")))?;
    if compose_fun(&h, &c.sol.x)? != other.x {
        return Err(Error::CheckFailed("induce_1cell: h∘x ≠ y".into()));
    }
    if hwhisker_left(&h, &c.sol.chi)? != other.chi {
        return Err(Error::CheckFailed("induce_1cell: 1_h ∗ χ ≠ υ".into()));
    }
    Ok(h)
}

/// BC4: given `h, k: apex → Z` and `β: h∘x ⇒ k∘x` satisfying
/// `(1_k∗χ)∘(β∗1_u) = (β∗1_w)∘(1_h∗χ)`, produce the unique `β′: h ⇒ k`
/// with `β′ ∗ 1_x = β`. Uniqueness is literal: `x` is bijective on objects,
/// so the components of `β′` are forced.
pub fn induce_2cell(c: &Codescent, h: &Fun, k: &Fun, beta: &Nat) -> Result<Nat> {
    let apex = &c.sol.apex;
    if h.dom != *apex || k.dom != *apex || h.cod != k.cod {
        return Err(Error::BoundaryMismatch("induce_2cell: h, k must be parallel from the apex".into()));
    }
    if beta.src != compose_fun(h, &c.sol.x)? || beta.tgt != compose_fun(k, &c.sol.x)? {
        return Err(Error::BoundaryMismatch("induce_2cell: β is not h∘x ⇒ k∘x".into()));
    }
    beta.check().map_err(|e| Error::CheckFailed(format!("β is not natural: {e}")))?;
    let lhs = vcompose_nat(&hwhisker_left(k, &c.sol.chi)?, &hwhisker_right(beta, &c.data.u)?)?;
    let rhs = vcompose_nat(&hwhisker_right(beta, &c.data.w)?, &hwhisker_left(h, &c.sol.chi)?)?;
    if lhs != rhs {
        return Err(Error::CheckFailed("induce_2cell: BC4 precondition fails".into()));
    }
    let mut comp: BTreeMap<String, String> = BTreeMap::new();
    for o in &c.data.x1.result.objects {
        insert_consistent(&mut comp, c.sol.x.ob(o), beta.at(o), "induce_2cell")?;
    }
    if comp.len() != apex.objects.len() {
        return Err(Error::CheckFailed("induce_2cell: x is not bijective on objects".into()));
    }
    let bp = Nat { src: h.clone(), tgt: k.clone(), comp };
    bp.check().map_err(|e| Error::CheckFailed(format!("induced 2-cell not natural: {e}")))?;
    if hwhisker_right(&bp, &c.sol.x)? != *beta {
        return Err(Error::CheckFailed("induce_2cell: β′ ∗ 1_x ≠ β".into()));
    }
    Ok(bp)
}

/// An adjoint equivalence between any two computed universal solutions of
/// the same coherence data, via the mediating functors of BC3 and the
/// induced 2-cells of BC4.
pub fn equivalence_of_solutions(
    c1: &Codescent,
    c2: &Codescent,
) -> Result<crate::fincat::EquivalenceWitness> {
    if c1.data != c2.data {
        return Err(Error::BoundaryMismatch(
            "equivalence_of_solutions: different coherence data".into(),
        ));
    }
    let forward = induce_1cell(c1, &c2.sol)?;
    let backward = induce_1cell(c2, &c1.sol)?;
    let gf = compose_fun(&backward, &forward)?;
    let id1 = Fun::identity(&c1.sol.apex);
    let unit_down = Nat {
        src: compose_fun(&id1, &c1.sol.x)?,
        tgt: compose_fun(&gf, &c1.sol.x)?,
        comp: c1
            .data
            .x1
            .result
            .objects
            .iter()
            .map(|o| (o.clone(), c1.sol.apex.id_of(c1.sol.x.ob(o)).to_string()))
            .collect(),
    };
    let unit = induce_2cell(c1, &id1, &gf, &unit_down)?;
    let fg = compose_fun(&forward, &backward)?;
    let id2 = Fun::identity(&c2.sol.apex);
    let counit_down = Nat {
        src: compose_fun(&fg, &c2.sol.x)?,
        tgt: compose_fun(&id2, &c2.sol.x)?,
        comp: c2
            .data
            .x1
            .result
            .objects
            .iter()
            .map(|o| (o.clone(), c2.sol.apex.id_of(c2.sol.x.ob(o)).to_string()))
            .collect(),
    };
    let counit = induce_2cell(c2, &fg, &id2, &counit_down)?;
    let w = crate::fincat::EquivalenceWitness { forward, backward, unit, counit };
    let rep = crate::fincat::verify_adjoint_equivalence(&w);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "solution equivalence failed verification: {:?}",
            rep.first_failure()
        )));
    }
    Ok(w)
}

/// View a cocone as an extrapseudonatural transformation `P ⇏ Δ_apex`
/// (over the padded shape `1 × B^op × B`): components `y_b = x∘I_b`, B-cells
/// the restriction of χ to each summand, unit A-cells forced, C-cells
/// identities.
pub fn to_extrapseudonat(cd: &CoherenceData, sol: &CodescentSolution) -> Result<ExtraPseudoNat> {
    let rep = check_cocone(cd, sol);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "to_extrapseudonat input is not a cocone: {:?}",
            rep.first_failure()
        )));
    }
    let (p_pad, pad_shape) = pad_terminal(&cd.p, &cd.shape)?;
    let q_shape = terminal_triple_shape();
    let q = constant_pseudofunctor(&sol.apex, &q_shape.total);
    let b = cd.shape.factors[0].0.clone();
    let t1 = Fin2Cat::terminal();
    let tid = t1.id1_of("*").to_string();
    let mut comp: BTreeMap<Key3, Fun> = BTreeMap::new();
    let mut cell_a = BTreeMap::new();
    let mut cell_b = BTreeMap::new();
    let mut cell_c = BTreeMap::new();
    for a in &b.objects {
        let y = compose_fun(&sol.x, &cd.x1.inclusions[a])?;
        cell_a.insert(
            key3(&tid, a, "*"),
            forced_a_cell(&p_pad, &pad_shape, &q, &q_shape, &y, "*", a, "*")?,
        );
        cell_c.insert(
            key3("*", a, &tid),
            Nat::identity(&compose_fun(&Fun::identity(&sol.apex), &y)?),
        );
        comp.insert(key3("*", a, "*"), y);
    }
    for f in b.onecells.keys() {
        let a = b.src1(f).to_string();
        let bb = b.tgt1(f).to_string();
        let ia = b.id1_of(&a).to_string();
        let ib = b.id1_of(&bb).to_string();
        let src = compose_fun(&comp[&key3("*", &a, "*")], cd.p.at1(&cd.shape.name(&[f, &ia])))?;
        let tgt = compose_fun(&comp[&key3("*", &bb, "*")], cd.p.at1(&cd.shape.name(&[&ib, f])))?;
        let inc = &cd.x2.inclusions[f];
        let n = Nat {
            src,
            tgt,
            comp: inc
                .omap
                .iter()
                .map(|(o, to)| (o.clone(), sol.chi.at(to).to_string()))
                .collect(),
        };
        cell_b.insert(key3("*", f, "*"), n);
    }
    let out = ExtraPseudoNat {
        p: p_pad,
        p_shape: pad_shape,
        q,
        q_shape,
        comp,
        cell_a,
        cell_b,
        cell_c,
    };
    let rep = check_extrapseudonat(&out);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "cocone did not convert to a valid extrapseudonatural transformation: {:?}",
            rep.first_failure()
        )));
    }
    Ok(out)
}

/// Inverse of [`to_extrapseudonat`]: glue the components into `y: X1 → apex`
/// and the B-cells into `υ: yu ⇒ yw`.
pub fn from_extrapseudonat(cd: &CoherenceData, e: &ExtraPseudoNat) -> Result<CodescentSolution> {
    let (p_pad, pad_shape) = pad_terminal(&cd.p, &cd.shape)?;
    if e.p != p_pad || e.p_shape != pad_shape {
        return Err(Error::BoundaryMismatch(
            "from_extrapseudonat: source is not the padded diagram".into(),
        ));
    }
    if !is_constant(&e.q) {
        return Err(Error::MalformedTables("from_extrapseudonat requires a constant target".into()));
    }
    let apex = e.q.ob.values().next().expect("constant target nonempty").clone();
    let b = cd.shape.factors[0].0.clone();
    let mut y_parts = BTreeMap::new();
    for a in &b.objects {
        y_parts.insert(a.clone(), e.comp_at("*", a, "*").clone());
    }
    let y = glue_fun(&cd.x1, &apex, &y_parts)?;
    let mut comp = BTreeMap::new();
    for (f, inc) in &cd.x2.inclusions {
        let cell = e.cell_b_at("*", f, "*");
        for (o, to) in &inc.omap {
            comp.insert(to.clone(), cell.at(o).to_string());
        }
    }
    let chi = Nat { src: compose_fun(&y, &cd.u)?, tgt: compose_fun(&y, &cd.w)?, comp };
    let sol = CodescentSolution { apex, x: y, chi };
    let rep = check_cocone(cd, &sol);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "extrapseudonatural data did not convert to a cocone: {:?}",
            rep.first_failure()
        )));
    }
    Ok(sol)
}
