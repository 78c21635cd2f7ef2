//! Fubini for bicoends: for `P: A^op × B^op × A × B → Cat` the iterated
//! bicoend `∫^a ∫^b P(a,b,a,b)` and the joint bicoend `∫^{(a,b)} P(a,b,a,b)`
//! are adjoint-equivalent, and the two iteration orders agree.
//!
//! The comparison runs through explicit mediating functors:
//!
//! - `σ`: iterated → joint, induced from the per-object cocones `φ^a` that
//!   restrict the joint cocone to the diagonal in one variable;
//! - `θ`: joint → iterated, induced from the pairing of the row family
//!   (inner cocones pushed into the iterated apex) with the column family
//!   (outer cocone cells read off at each inner generator).
//!
//! The row/column pairing requires a compatibility pasting equality at every
//! pair of 1-cells; [`check_fublemma`] decides it. Both unit and counit of
//! the final equivalence have identity components because every mediating
//! triangle commutes on the nose.

use std::collections::BTreeMap;

use crate::codescent::{
    bicoend, coherence_data_of, compute_codescent, from_extrapseudonat, induce_1cell,
    induce_2cell, to_extrapseudonat, Codescent, CodescentSolution,
};
use crate::derived::{parametrized_bicoend, ParamBicoend};
use crate::error::{Error, Result};
use crate::extra::{
    assemble_pair, check_extrapseudonat, forced_a_cell, key3, pad_terminal, restrict,
    ExtraPseudoNat, PairedDiagram,
};
use crate::fincat::{
    compose_fun, tuple, untuple, verify_adjoint_equivalence, EquivalenceWitness, Fun, Nat,
};
use crate::pseudo::{constant_pseudofunctor, fix_arguments, precompose, PseudoFun};
use crate::report::Report;
use crate::twocat::{Fin2Cat, Shape, Strict2Fun};

/// The three bicoend computations the comparison is built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FubiniCore {
    /// `P` repackaged over the pair index `1 × (A×B)^op × (A×B)`.
    pub diag: PairedDiagram,
    /// The joint bicoend `∫^{(a,b)} P(a,b,a,b)`.
    pub joint: Codescent,
    /// The inner family `Q(a',a) = ∫^b P(a',b,a,b)` as a pseudofunctor on
    /// `A^op × A`, with its per-object universal solutions.
    pub inner: ParamBicoend,
    /// The outer bicoend `∫^a Q(a,a)` — the iterated bicoend.
    pub outer: Codescent,
}

impl FubiniCore {
    /// The inner universal solution at the pair `(a', a)`.
    pub fn fiber(&self, ap: &str, a: &str) -> &Codescent {
        &self.inner.per_object[&tuple(&[ap.to_string(), a.to_string()])]
    }

    /// The leg `k_a: Q(a,a) → iterated apex` of the outer cocone.
    pub fn outer_leg(&self, a: &str) -> Result<Fun> {
        compose_fun(&self.outer.sol.x, &self.outer.data.x1.inclusions[a])
    }
}

/// The comparison `σ` with the data it was induced from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaData {
    /// `φ^a: Q(a,a) → joint apex`, the joint cocone restricted to the
    /// diagonal at `a`.
    pub phi_obj: BTreeMap<String, Fun>,
    /// The `φ` family as an extrapseudonatural transformation `Q ⇏ Δ_joint`.
    pub phi: ExtraPseudoNat,
    /// The same family as a cocone on the outer coherence data.
    pub cocone: CodescentSolution,
    /// `σ: iterated apex → joint apex`.
    pub sigma: Fun,
}

/// The comparison `θ` with the data it was induced from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaData {
    /// The assembled row/column family `P ⇏ Δ_iterated` over the pair index.
    pub assembled: ExtraPseudoNat,
    /// The same family as a cocone on the joint coherence data.
    pub cocone: CodescentSolution,
    /// `θ: joint apex → iterated apex`.
    pub theta: Fun,
}

/// The full comparison bundle returned by [`fubini_equivalence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FubiniBundle {
    pub core: FubiniCore,
    pub sigma: SigmaData,
    pub theta: ThetaData,
    /// `κ: σ∘θ ⇒ id` on the joint apex (identity components).
    pub kappa: Nat,
    /// `λ: id ⇒ θ∘σ` on the iterated apex (identity components).
    pub lambda: Nat,
    /// The verified adjoint equivalence, `forward = σ`, `backward = θ`,
    /// `unit = λ`, `counit = κ`.
    pub witness: EquivalenceWitness,
}

/// Both iteration orders with the connecting equivalences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interchange {
    /// The comparison for the given order (`A` outside).
    pub ab: FubiniBundle,
    /// The comparison for the transposed diagram (`B` outside).
    pub ba: FubiniBundle,
    /// The equivalence between the two joint bicoends (tag transposition).
    pub joints: EquivalenceWitness,
    /// The composite equivalence between the two iterated bicoends.
    pub witness: EquivalenceWitness,
}

/// Compute the joint bicoend, the inner family and the outer bicoend of
/// `P: A^op × B^op × A × B → Cat`.
pub fn fubini_core(p4: &PseudoFun, shape4: &Shape, budget: u64) -> Result<FubiniCore> {
    let diag = PairedDiagram::new(p4, shape4)?;

    // Joint bicoend over the pair index (drop the terminal padding).
    let fixed0: BTreeMap<usize, String> = [(0usize, "*".to_string())].into_iter().collect();
    let (joint_p, joint_shape) = fix_arguments(&diag.p, &diag.shape, &fixed0)?;
    let joint = bicoend(&joint_p, &joint_shape, budget)?;

    // Inner family: reorganize P over [(A^op×A), B^op, B] and take the
    // parametrized bicoend in the B variables.
    let outer_shape = Shape::new(vec![(diag.a.clone(), true), (diag.a.clone(), false)]);
    let dcat = outer_shape.total.clone();
    let shape3 =
        Shape::new(vec![(dcat, false), (diag.b.clone(), true), (diag.b.clone(), false)]);
    let reorder = |n: &str| -> String {
        let parts = shape3.split(n);
        let aa = untuple(&parts[0]);
        shape4.name(&[&aa[0], &parts[1], &aa[1], &parts[2]])
    };
    let emb = Strict2Fun::from_maps(
        &shape3.total,
        &shape4.total,
        |o| reorder(o),
        |f| reorder(f),
        |t| reorder(t),
    );
    let p3 = precompose(p4, &emb)?;
    let inner = parametrized_bicoend(&p3, &shape3, budget)?;

    // Outer bicoend of Q over [A^op, A].
    let cd_outer = coherence_data_of(&inner.fun, &outer_shape)?;
    let outer = compute_codescent(&cd_outer, budget)?;

    Ok(FubiniCore { diag, joint, inner, outer })
}

/// A 2-cell between parallel functors out of a codescent apex whose
/// components are all identities, in the shape `induce_2cell` expects.
fn identity_down(h: &Fun, k: &Fun, c: &Codescent) -> Result<Nat> {
    let comp = c
        .data
        .x1
        .result
        .objects
        .iter()
        .map(|o| (o.clone(), h.cod.id_of(h.ob(c.sol.x.ob(o))).to_string()))
        .collect();
    Ok(Nat { src: compose_fun(h, &c.sol.x)?, tgt: compose_fun(k, &c.sol.x)?, comp })
}

/// Build `σ: iterated → joint` by restricting the joint cocone to the
/// diagonal (`φ^a`), gluing the restrictions into a cocone on the outer data
/// (`φ^f` induced per 1-cell by two-dimensional universality), and factoring
/// through the outer apex.
pub fn build_sigma(core: &FubiniCore) -> Result<SigmaData> {
    let e_joint = to_extrapseudonat(&core.joint.data, &core.joint.sol)?;
    let acat = &core.diag.a;
    let q = &core.inner.fun;
    let qshape = &core.outer.data.shape;
    let japex = core.joint.sol.apex.clone();

    // Object components φ^a from the restricted joint cocone.
    let mut phi_obj: BTreeMap<String, Fun> = BTreeMap::new();
    for a in &acat.objects {
        let row = restrict(&e_joint, &core.diag, true, a)?;
        let sol_a = from_extrapseudonat(&core.fiber(a, a).data, &row)?;
        phi_obj.insert(a.clone(), induce_1cell(core.fiber(a, a), &sol_a)?);
    }

    // Assemble the family as an extrapseudonatural transformation Q ⇏ Δ.
    let (q_pad, pad_shape) = pad_terminal(q, qshape)?;
    let tq_shape = crate::extra::terminal_triple_shape();
    let tq = constant_pseudofunctor(&japex, &tq_shape.total);
    let t1 = Fin2Cat::terminal();
    let tid = t1.id1_of("*").to_string();
    let mut comp = BTreeMap::new();
    let mut cell_a = BTreeMap::new();
    let mut cell_b = BTreeMap::new();
    let mut cell_c = BTreeMap::new();
    for a in &acat.objects {
        let y = &phi_obj[a];
        cell_a.insert(
            key3(&tid, a, "*"),
            forced_a_cell(&q_pad, &pad_shape, &tq, &tq_shape, y, "*", a, "*")?,
        );
        cell_c.insert(
            key3("*", a, &tid),
            Nat::identity(&compose_fun(&Fun::identity(&japex), y)?),
        );
        comp.insert(key3("*", a, "*"), y.clone());
    }
    // A-direction cells φ^f, induced on the (a',a) fiber from the joint χ at
    // the tags (f, id_b).
    for f in acat.onecells.keys() {
        let a = acat.src1(f).to_string();
        let ap = acat.tgt1(f).to_string();
        let ia = acat.id1_of(&a).to_string();
        let iap = acat.id1_of(&ap).to_string();
        let fiber = core.fiber(&ap, &a);
        let h = compose_fun(&phi_obj[&a], q.at1(&qshape.name(&[f, &ia])))?;
        let k = compose_fun(&phi_obj[&ap], q.at1(&qshape.name(&[&iap, f])))?;
        let mut bcomp = BTreeMap::new();
        for (b, inc) in &fiber.data.x1.inclusions {
            let ib = core.diag.b.id1_of(b).to_string();
            let jinc = &core.joint.data.x2.inclusions[&tuple(&[f.clone(), ib])];
            for (o, to) in &inc.omap {
                bcomp.insert(to.clone(), core.joint.sol.chi.at(jinc.ob(o)).to_string());
            }
        }
        let beta = Nat {
            src: compose_fun(&h, &fiber.sol.x)?,
            tgt: compose_fun(&k, &fiber.sol.x)?,
            comp: bcomp,
        };
        cell_b.insert(key3("*", f, "*"), induce_2cell(fiber, &h, &k, &beta)?);
    }
    let phi = ExtraPseudoNat {
        p: q_pad,
        p_shape: pad_shape,
        q: tq,
        q_shape: tq_shape,
        comp,
        cell_a,
        cell_b,
        cell_c,
    };
    let rep = check_extrapseudonat(&phi);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "the φ family is not extrapseudonatural: {:?}",
            rep.first_failure()
        )));
    }
    let cocone = from_extrapseudonat(&core.outer.data, &phi)?;
    let sigma = induce_1cell(&core.outer, &cocone)?;
    Ok(SigmaData { phi_obj, phi, cocone, sigma })
}

/// Postcompose an extrapseudonatural transformation with constant target by
/// a functor out of that target. B-cells are whiskered, A-cells re-forced,
/// C-cells stay identities; the result is re-checked.
fn postcompose_constant(e: &ExtraPseudoNat, k: &Fun) -> Result<ExtraPseudoNat> {
    let old = e.q.ob.values().next().expect("constant target nonempty");
    if k.dom != *old {
        return Err(Error::BoundaryMismatch(
            "postcompose_constant: functor does not start at the target".into(),
        ));
    }
    let q = constant_pseudofunctor(&k.cod, &e.q_shape.total);
    let t1 = Fin2Cat::terminal();
    let tid = t1.id1_of("*").to_string();
    let mut comp = BTreeMap::new();
    let mut cell_a = BTreeMap::new();
    let mut cell_b = BTreeMap::new();
    let mut cell_c = BTreeMap::new();
    for b in &e.b_cat().objects.clone() {
        let y = compose_fun(k, e.comp_at("*", b, "*"))?;
        cell_a.insert(
            key3(&tid, b, "*"),
            forced_a_cell(&e.p, &e.p_shape, &q, &e.q_shape, &y, "*", b, "*")?,
        );
        cell_c.insert(
            key3("*", b, &tid),
            Nat::identity(&compose_fun(&Fun::identity(&k.cod), &y)?),
        );
        comp.insert(key3("*", b, "*"), y);
    }
    for g in e.b_cat().onecells.keys().cloned().collect::<Vec<_>>() {
        cell_b.insert(
            key3("*", &g, "*"),
            crate::fincat::hwhisker_left(k, e.cell_b_at("*", &g, "*"))?,
        );
    }
    let out = ExtraPseudoNat {
        p: e.p.clone(),
        p_shape: e.p_shape.clone(),
        q,
        q_shape: e.q_shape.clone(),
        comp,
        cell_a,
        cell_b,
        cell_c,
    };
    let rep = check_extrapseudonat(&out);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "postcomposed family is not extrapseudonatural: {:?}",
            rep.first_failure()
        )));
    }
    Ok(out)
}

/// The row family (inner cocones pushed along the outer legs) and column
/// family (outer χ cells at the inner generators) of the composite cocone
/// `k_a ∘ j^{aa}_b: P(a,b,a,b) → iterated apex`.
fn composite_family(
    core: &FubiniCore,
) -> Result<(BTreeMap<String, ExtraPseudoNat>, BTreeMap<String, ExtraPseudoNat>)> {
    let acat = &core.diag.a;
    let bcat = &core.diag.b;
    let oapex = core.outer.sol.apex.clone();
    let t1 = Fin2Cat::terminal();
    let tid = t1.id1_of("*").to_string();

    let mut rows: BTreeMap<String, ExtraPseudoNat> = BTreeMap::new();
    for a in &acat.objects {
        let fiber = core.fiber(a, a);
        let e = to_extrapseudonat(&fiber.data, &fiber.sol)?;
        rows.insert(a.clone(), postcompose_constant(&e, &core.outer_leg(a)?)?);
    }

    let tq_shape = crate::extra::terminal_triple_shape();
    let tq = constant_pseudofunctor(&oapex, &tq_shape.total);
    let mut cols: BTreeMap<String, ExtraPseudoNat> = BTreeMap::new();
    for b in &bcat.objects {
        let (pb, pbs) = core.diag.fix_b(b)?;
        let mut comp = BTreeMap::new();
        let mut cell_a = BTreeMap::new();
        let mut cell_b = BTreeMap::new();
        let mut cell_c = BTreeMap::new();
        for a in &acat.objects {
            let y = rows[a].comp_at("*", b, "*").clone();
            cell_a.insert(
                key3(&tid, a, "*"),
                forced_a_cell(&pb, &pbs, &tq, &tq_shape, &y, "*", a, "*")?,
            );
            cell_c.insert(
                key3("*", a, &tid),
                Nat::identity(&compose_fun(&Fun::identity(&oapex), &y)?),
            );
            comp.insert(key3("*", a, "*"), y);
        }
        for f in acat.onecells.keys() {
            let a = acat.src1(f).to_string();
            let ap = acat.tgt1(f).to_string();
            let ia = acat.id1_of(&a).to_string();
            let iap = acat.id1_of(&ap).to_string();
            let fiber = core.fiber(&ap, &a);
            let src = compose_fun(&comp[&key3("*", &a, "*")], pb.at1(&pbs.name(&[&tid, f, &ia])))?;
            let tgt =
                compose_fun(&comp[&key3("*", &ap, "*")], pb.at1(&pbs.name(&[&tid, &iap, f])))?;
            let oinc = &core.outer.data.x2.inclusions[f];
            let finc = &fiber.data.x1.inclusions[b];
            let mut c = BTreeMap::new();
            for o in &src.dom.objects {
                let z = fiber.sol.x.ob(finc.ob(o));
                c.insert(o.clone(), core.outer.sol.chi.at(oinc.ob(z)).to_string());
            }
            cell_b.insert(key3("*", f, "*"), Nat { src, tgt, comp: c });
        }
        let col = ExtraPseudoNat {
            p: pb,
            p_shape: pbs,
            q: tq.clone(),
            q_shape: tq_shape.clone(),
            comp,
            cell_a,
            cell_b,
            cell_c,
        };
        let rep = check_extrapseudonat(&col);
        if !rep.is_pass() {
            return Err(Error::CheckFailed(format!(
                "column family at {b} is not extrapseudonatural: {:?}",
                rep.first_failure()
            )));
        }
        cols.insert(b.clone(), col);
    }
    Ok((rows, cols))
}

/// Decide the pairing compatibility of the row and column families of the
/// composite cocone: at every pair of 1-cells `(f, g)` the two pastings
/// (through the row first or the column first) must agree.
pub fn check_fublemma(core: &FubiniCore) -> Report {
    let mut rep = Report::new("fubini pairing compatibility");
    match composite_family(core).and_then(|(rows, cols)| assemble_pair(&core.diag, &rows, &cols))
    {
        Ok(_) => rep.pass("compatibility", "all pairs"),
        Err(Error::CompatibilityFailure(msg)) => rep.fail("compatibility", msg, "pastings differ"),
        Err(e) => rep.fail("assembly", "", e.to_string()),
    }
    rep
}

/// Build `θ: joint → iterated` by pairing the row and column families into a
/// cocone over the pair index and factoring through the joint apex.
pub fn build_theta(core: &FubiniCore) -> Result<ThetaData> {
    let (rows, cols) = composite_family(core)?;
    let assembled = assemble_pair(&core.diag, &rows, &cols)?;
    let cocone = from_extrapseudonat(&core.joint.data, &assembled)?;
    let theta = induce_1cell(&core.joint, &cocone)?;
    Ok(ThetaData { assembled, cocone, theta })
}

/// The full Fubini comparison: an adjoint equivalence between the iterated
/// and the joint bicoend, with all mediating data exposed and every axiom
/// re-verified.
pub fn fubini_equivalence(p4: &PseudoFun, shape4: &Shape, budget: u64) -> Result<FubiniBundle> {
    let core = fubini_core(p4, shape4, budget)?;
    let sigma = build_sigma(&core)?;
    let theta = build_theta(&core)?;

    // Both round trips agree with the identity on the nose on the generating
    // cocones, so the unit and counit have identity components.
    let st = compose_fun(&sigma.sigma, &theta.theta)?;
    let idj = Fun::identity(&core.joint.sol.apex);
    let kappa = induce_2cell(&core.joint, &st, &idj, &identity_down(&st, &idj, &core.joint)?)?;
    let ts = compose_fun(&theta.theta, &sigma.sigma)?;
    let ido = Fun::identity(&core.outer.sol.apex);
    let lambda = induce_2cell(&core.outer, &ido, &ts, &identity_down(&ido, &ts, &core.outer)?)?;

    let witness = EquivalenceWitness {
        forward: sigma.sigma.clone(),
        backward: theta.theta.clone(),
        unit: lambda.clone(),
        counit: kappa.clone(),
    };
    let rep = verify_adjoint_equivalence(&witness);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "fubini comparison is not an adjoint equivalence: {:?}",
            rep.first_failure()
        )));
    }
    Ok(FubiniBundle { core, sigma, theta, kappa, lambda, witness })
}

/// Reverse an adjoint equivalence.
pub fn reverse_witness(w: &EquivalenceWitness) -> Result<EquivalenceWitness> {
    Ok(EquivalenceWitness {
        forward: w.backward.clone(),
        backward: w.forward.clone(),
        unit: w.counit.invert()?,
        counit: w.unit.invert()?,
    })
}

/// The cocone on `src`'s coherence data obtained from `tgt`'s universal
/// solution by transposing the pair tags `(a,b) ↔ (b,a)`.
fn transposed_solution(src: &Codescent, tgt: &Codescent) -> Result<CodescentSolution> {
    let swap = |tag: &str| -> String {
        let parts = untuple(tag);
        tuple(&[parts[1].clone(), parts[0].clone()])
    };
    let mut omap = BTreeMap::new();
    let mut mmap = BTreeMap::new();
    for (tag, inc) in &src.data.x1.inclusions {
        let tinc = tgt
            .data
            .x1
            .inclusions
            .get(&swap(tag))
            .ok_or_else(|| Error::MalformedTables(format!("no transposed summand for {tag}")))?;
        for (o, to) in &inc.omap {
            omap.insert(to.clone(), tgt.sol.x.ob(tinc.ob(o)).to_string());
        }
        for (m, tm) in &inc.mmap {
            mmap.insert(tm.clone(), tgt.sol.x.mo(tinc.mo(m)).to_string());
        }
    }
    let x = Fun { dom: src.data.x1.result.clone(), cod: tgt.sol.apex.clone(), omap, mmap };
    let mut comp = BTreeMap::new();
    for (tag, inc) in &src.data.x2.inclusions {
        let tinc = tgt
            .data
            .x2
            .inclusions
            .get(&swap(tag))
            .ok_or_else(|| Error::MalformedTables(format!("no transposed summand for {tag}")))?;
        for (o, to) in &inc.omap {
            comp.insert(to.clone(), tgt.sol.chi.at(tinc.ob(o)).to_string());
        }
    }
    let chi = Nat { src: compose_fun(&x, &src.data.u)?, tgt: compose_fun(&x, &src.data.w)?, comp };
    Ok(CodescentSolution { apex: tgt.sol.apex.clone(), x, chi })
}

/// The equivalence between the two joint bicoends given by transposing tags.
fn joint_transposition(c1: &Codescent, c2: &Codescent) -> Result<EquivalenceWitness> {
    let forward = induce_1cell(c1, &transposed_solution(c1, c2)?)?;
    let backward = induce_1cell(c2, &transposed_solution(c2, c1)?)?;
    let id1 = Fun::identity(&c1.sol.apex);
    let id2 = Fun::identity(&c2.sol.apex);
    let gf = compose_fun(&backward, &forward)?;
    let fg = compose_fun(&forward, &backward)?;
    let unit = induce_2cell(c1, &id1, &gf, &identity_down(&id1, &gf, c1)?)?;
    let counit = induce_2cell(c2, &fg, &id2, &identity_down(&fg, &id2, c2)?)?;
    let w = EquivalenceWitness { forward, backward, unit, counit };
    let rep = verify_adjoint_equivalence(&w);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "joint transposition is not an adjoint equivalence: {:?}",
            rep.first_failure()
        )));
    }
    Ok(w)
}

/// Run the Fubini comparison in both iteration orders and connect them:
/// `∫^a ∫^b ≃ ∫^{(a,b)} ≃ ∫^{(b,a)} ≃ ∫^b ∫^a`.
pub fn interchange(p4: &PseudoFun, shape4: &Shape, budget: u64) -> Result<Interchange> {
    let ab = fubini_equivalence(p4, shape4, budget)?;

    // Transposed diagram over [B^op, A^op, B, A].
    let a2 = shape4.factors[0].0.clone();
    let b2 = shape4.factors[1].0.clone();
    let shape4t = Shape::new(vec![
        (b2.clone(), true),
        (a2.clone(), true),
        (b2, false),
        (a2, false),
    ]);
    let reorder = |n: &str| -> String {
        let parts = shape4t.split(n);
        shape4.name(&[&parts[1], &parts[0], &parts[3], &parts[2]])
    };
    let emb = Strict2Fun::from_maps(
        &shape4t.total,
        &shape4.total,
        |o| reorder(o),
        |f| reorder(f),
        |t| reorder(t),
    );
    let p4t = precompose(p4, &emb)?;
    let ba = fubini_equivalence(&p4t, &shape4t, budget)?;

    let joints = joint_transposition(&ab.core.joint, &ba.core.joint)?;
    let witness = EquivalenceWitness::compose(
        &reverse_witness(&ba.witness)?,
        &EquivalenceWitness::compose(&joints, &ab.witness)?,
    )?;
    let rep = verify_adjoint_equivalence(&witness);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "interchange composite is not an adjoint equivalence: {:?}",
            rep.first_failure()
        )));
    }
    Ok(Interchange { ab, ba, joints, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codescent::pi0_oracle;
    use crate::fincat::{find_equivalence, product_cat, product_fun, FinCat};

    const BUDGET: u64 = 2_000_000;

    fn walking_arrow_cat() -> FinCat {
        let mut c = FinCat::discrete(&["m", "n"]);
        c.mor.insert("e".into(), ("m".into(), "n".into()));
        c.compose.insert(("e".into(), "id_m".into()), "e".into());
        c.compose.insert(("id_n".into(), "e".into()), "e".into());
        c
    }

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

    fn shape4_of(a2: &Fin2Cat, b2: &Fin2Cat) -> Shape {
        Shape::new(vec![
            (a2.clone(), true),
            (b2.clone(), true),
            (a2.clone(), false),
            (b2.clone(), false),
        ])
    }

    /// `P(a,b,c,d) = F(c) × G(d)`: covariant in the last two slots, constant
    /// in the contravariant ones.
    fn covariant_product_p4(
        a2: &Fin2Cat,
        b2: &Fin2Cat,
        f_ob: &BTreeMap<String, FinCat>,
        f_on1: &BTreeMap<String, Fun>,
        g_ob: &BTreeMap<String, FinCat>,
        g_on1: &BTreeMap<String, Fun>,
    ) -> (PseudoFun, Shape) {
        let shape = shape4_of(a2, b2);
        let ob: BTreeMap<String, FinCat> = shape
            .total
            .objects
            .iter()
            .map(|o| {
                let p = shape.split(o);
                (o.clone(), product_cat(&f_ob[&p[2]], &g_ob[&p[3]]))
            })
            .collect();
        let on1: BTreeMap<String, Fun> = shape
            .total
            .onecells
            .keys()
            .map(|m| {
                let p = shape.split(m);
                (m.clone(), product_fun(&f_on1[&p[2]], &g_on1[&p[3]]))
            })
            .collect();
        let p4 = PseudoFun::strict(&shape.total, ob, on1).expect("strictly functorial");
        (p4, shape)
    }

    /// F on the walking arrow: two points over p collapsing to one over q.
    fn collapse_f() -> (BTreeMap<String, FinCat>, BTreeMap<String, Fun>) {
        let dp = FinCat::discrete(&["u0", "u1"]);
        let dq = FinCat::discrete(&["v"]);
        let ob: BTreeMap<String, FinCat> =
            [("p".to_string(), dp.clone()), ("q".to_string(), dq.clone())].into_iter().collect();
        let on1: BTreeMap<String, Fun> = [
            ("id_p".to_string(), Fun::identity(&dp)),
            ("id_q".to_string(), Fun::identity(&dq)),
            ("w".to_string(), Fun::from_maps(&dp, &dq, |_| "v".into(), |_| "id_v".into())),
        ]
        .into_iter()
        .collect();
        (ob, on1)
    }

    /// G on Z/2: the parity action on two points.
    fn parity_g() -> (BTreeMap<String, FinCat>, BTreeMap<String, Fun>) {
        let d = FinCat::discrete(&["0", "1"]);
        let swap = Fun::from_maps(
            &d,
            &d,
            |o| if o == "0" { "1".into() } else { "0".into() },
            |m| if m == "id_0" { "id_1".into() } else { "id_0".into() },
        );
        let ob: BTreeMap<String, FinCat> = [("*".to_string(), d.clone())].into_iter().collect();
        let on1: BTreeMap<String, Fun> =
            [("id_*".to_string(), Fun::identity(&d)), ("s".to_string(), swap)]
                .into_iter()
                .collect();
        (ob, on1)
    }

    /// G on Z/2: the trivial action on two points.
    fn trivial_g() -> (BTreeMap<String, FinCat>, BTreeMap<String, Fun>) {
        let d = FinCat::discrete(&["0", "1"]);
        let ob: BTreeMap<String, FinCat> = [("*".to_string(), d.clone())].into_iter().collect();
        let on1: BTreeMap<String, Fun> =
            [("id_*".to_string(), Fun::identity(&d)), ("s".to_string(), Fun::identity(&d))]
                .into_iter()
                .collect();
        (ob, on1)
    }

    #[test]
    fn constant_square_collapses_to_the_value() {
        let t = Fin2Cat::terminal();
        let shape4 = shape4_of(&t, &t);
        let arrow = walking_arrow_cat();
        let p4 = constant_pseudofunctor(&arrow, &shape4.total);
        let bundle = fubini_equivalence(&p4, &shape4, BUDGET).unwrap();
        assert!(check_fublemma(&bundle.core).is_pass());
        let w = find_equivalence(&bundle.core.joint.sol.apex, &arrow, 10_000).unwrap();
        assert!(w.is_some(), "joint apex of a constant square should be the value");
        assert_eq!(bundle.core.outer.sol.apex.pi0().len(), 1);
    }

    #[test]
    fn product_diagram_components_match_the_oracle() {
        let a2 = walking_arrow_2cat();
        let b2 = z2_2cat();
        let (f_ob, f_on1) = collapse_f();
        let (g_ob, g_on1) = parity_g();
        let (p4, shape4) = covariant_product_p4(&a2, &b2, &f_ob, &f_on1, &g_ob, &g_on1);
        let bundle = fubini_equivalence(&p4, &shape4, BUDGET).unwrap();
        // X1 of the joint: (2×2) over (p,*) plus (1×2) over (q,*).
        assert_eq!(bundle.core.joint.data.x1.result.objects.len(), 6);
        assert_eq!(pi0_oracle(&bundle.core.joint.data).len(), 1);
        assert_eq!(bundle.core.joint.sol.apex.pi0().len(), 1);
        assert_eq!(bundle.core.outer.sol.apex.pi0().len(), 1);
        assert!(check_fublemma(&bundle.core).is_pass());
    }

    #[test]
    fn fublemma_detects_a_twisted_row_cell() {
        let a2 = walking_arrow_2cat();
        let b2 = z2_2cat();
        let (f_ob, f_on1) = collapse_f();
        let (g_ob, g_on1) = trivial_g();
        let (p4, shape4) = covariant_product_p4(&a2, &b2, &f_ob, &f_on1, &g_ob, &g_on1);
        let core = fubini_core(&p4, &shape4, BUDGET).unwrap();
        let (mut rows, cols) = composite_family(&core).unwrap();
        assert!(assemble_pair(&core.diag, &rows, &cols).is_ok());

        // Twist the row cell at (q, s) by a nonidentity loop of the iterated
        // apex; the pasting at the pair (w, s) must then break.
        let apex = core.outer.sol.apex.clone();
        let cell = rows
            .get_mut("q")
            .unwrap()
            .cell_b
            .get_mut(&key3("*", "s", "*"))
            .unwrap();
        let mut twisted = 0;
        for m in cell.comp.values_mut() {
            let t = apex.tgt(m).to_string();
            let loop_m = apex
                .mor
                .iter()
                .find(|(l, (s, tg))| *s == t && *tg == t && **l != *apex.id_of(&t))
                .map(|(l, _)| l.clone());
            if let Some(l) = loop_m {
                *m = apex.comp(&l, m).to_string();
                twisted += 1;
            }
        }
        assert!(twisted > 0, "trivial action should leave loops in the apex");
        match assemble_pair(&core.diag, &rows, &cols) {
            Err(Error::CompatibilityFailure(msg)) => {
                assert!(msg.contains("(w,s)"), "failure should name the pair, got: {msg}")
            }
            other => panic!("expected a compatibility failure, got {other:?}"),
        }
    }

    #[test]
    fn interchange_agrees_on_both_orders() {
        let a2 = walking_arrow_2cat();
        let b2 = z2_2cat();
        let (f_ob, f_on1) = collapse_f();
        let (g_ob, g_on1) = parity_g();
        let (p4, shape4) = covariant_product_p4(&a2, &b2, &f_ob, &f_on1, &g_ob, &g_on1);
        let inter = interchange(&p4, &shape4, BUDGET).unwrap();
        assert_eq!(
            inter.ab.core.outer.sol.apex.pi0().len(),
            inter.ba.core.outer.sol.apex.pi0().len()
        );
        assert_eq!(inter.witness.forward.dom, inter.ab.core.outer.sol.apex);
        assert_eq!(inter.witness.forward.cod, inter.ba.core.outer.sol.apex);
    }
}
