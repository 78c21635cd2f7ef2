//! Composition combinators for extrapseudonatural transformations:
//!
//! - `stalactite`: precompose an extrapseudonatural `γ: G ⇏ X` (constant
//!   target) with a pseudonatural `β: F ⇒ G` over `A^op × A`, giving
//!   `F ⇏ X`;
//! - `stalagmite`: the dual — postcompose `γ: X ⇏ F` (constant source) with
//!   `β: F ⇒ G`, giving `X ⇏ G`;
//! - `yank`: contract the middle pair of `G: A × A^op × A → Cat` between an
//!   extrapseudonatural `β: F ⇏ G` and `γ: G ⇏ H`, producing an ordinary
//!   pseudonatural transformation `F ⇒ H`.
//!
//! Every output is re-verified by the corresponding checker; a failure is an
//! internal-consistency alarm (`CheckFailed`), not a user error.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extra::{
    check_extrapseudonat, forced_a_cell, key3, pad_terminal, terminal_triple_shape,
    ExtraPseudoNat, Key3,
};
use crate::fincat::{compose_fun, hwhisker_left, hwhisker_right, vcompose_nat, Fun, Nat};
use crate::pseudo::{
    check_pseudonat, constant_pseudofunctor, is_constant, precompose, PseudoFun, PseudoNat,
};
use crate::twocat::{Fin2Cat, Shape, Strict2Fun};

/// Pad a single-variable pseudofunctor `F: A → Cat` to the 3-factor shape
/// `A × 1^op × 1` (trivial extra pair), for use as the source or target of
/// an extrapseudonatural transformation that is ordinary-pseudonatural in A.
pub fn pad_outer(f: &PseudoFun) -> Result<(PseudoFun, Shape)> {
    let a = f.dom.clone();
    let padded = Shape::new(vec![
        (a.clone(), false),
        (Fin2Cat::terminal(), true),
        (Fin2Cat::terminal(), false),
    ]);
    let drop_rest = |name: &str| -> String {
        let parts = padded.split(name);
        parts[0].clone()
    };
    let emb = Strict2Fun::from_maps(
        &padded.total,
        &a,
        |o| drop_rest(o),
        |f1| drop_rest(f1),
        |t| drop_rest(t),
    );
    Ok((precompose(f, &emb)?, padded))
}

/// Reindex `G: A × A^op × A → Cat` by swapping the two covariant slots:
/// `G'(x, y, z) = G(z, y, x)`. The result is again over `A × A^op × A` and
/// presents the *first* slot of G as the extra pair partner of the middle
/// slot, which is the form `yank` needs for its left input.
pub fn reshuffle_inner(g: &PseudoFun, shape: &Shape) -> Result<(PseudoFun, Shape)> {
    let ops: Vec<bool> = shape.factors.iter().map(|(_, o)| *o).collect();
    if shape.arity() != 3 || ops != [false, true, false] {
        return Err(Error::MalformedTables("reshuffle_inner expects shape [A, A^op, A]".into()));
    }
    if shape.factors[0].0 != shape.factors[2].0 {
        return Err(Error::MalformedTables("reshuffle_inner: outer factors differ".into()));
    }
    let swap = |name: &str| -> String {
        let parts = shape.split(name);
        shape.name(&[&parts[2], &parts[1], &parts[0]])
    };
    let emb = Strict2Fun::from_maps(
        &shape.total,
        &shape.total,
        |o| swap(o),
        |f| swap(f),
        |t| swap(t),
    );
    Ok((precompose(g, &emb)?, shape.clone()))
}

/// Precompose `γ: G ⇏ X` (over `1 × A^op × A`, constant target) with
/// `β: F ⇒ G` pseudonatural over `A^op × A`, producing `δ: F ⇏ X` with
///
/// `δ_a = γ_a ∘ β_{(a,a)}` and
/// `δ_f = (1_{γ_b} ∗ β_{(1,f)}⁻¹) ∘ (γ_f ∗ 1_{β_{(b,a)}}) ∘ (1_{γ_a} ∗ β_{(f,1)})`.
pub fn stalactite(
    beta: &PseudoNat,
    shape2: &Shape,
    gamma: &ExtraPseudoNat,
) -> Result<ExtraPseudoNat> {
    if shape2.arity() != 2 || !shape2.factors[0].1 || shape2.factors[1].1 {
        return Err(Error::MalformedTables("stalactite expects β over shape [A^op, A]".into()));
    }
    if shape2.factors[0].0 != shape2.factors[1].0 {
        return Err(Error::MalformedTables("stalactite: shape factors differ".into()));
    }
    let (g_pad, pad_shape) = pad_terminal(&beta.g, shape2)?;
    if gamma.p != g_pad || gamma.p_shape != pad_shape {
        return Err(Error::BoundaryMismatch(
            "stalactite: γ is not over the padded target of β".into(),
        ));
    }
    if !is_constant(&gamma.q) {
        return Err(Error::MalformedTables("stalactite requires a constant target".into()));
    }
    let a_cat = shape2.factors[0].0.clone();
    let x = gamma.q.ob.values().next().expect("constant target nonempty").clone();
    let (f_pad, f_shape) = pad_terminal(&beta.f, shape2)?;
    let q_shape = terminal_triple_shape();
    let q = constant_pseudofunctor(&x, &q_shape.total);
    let t1 = Fin2Cat::terminal();
    let tid = t1.id1_of("*").to_string();

    let mut comp: BTreeMap<Key3, Fun> = BTreeMap::new();
    let mut cell_a = BTreeMap::new();
    let mut cell_b = BTreeMap::new();
    let mut cell_c = BTreeMap::new();
    for a in &a_cat.objects {
        let y = compose_fun(gamma.comp_at("*", a, "*"), beta.at(&shape2.name(&[a, a])))?;
        cell_a.insert(
            key3(&tid, a, "*"),
            forced_a_cell(&f_pad, &f_shape, &q, &q_shape, &y, "*", a, "*")?,
        );
        cell_c.insert(key3("*", a, &tid), Nat::identity(&compose_fun(&Fun::identity(&x), &y)?));
        comp.insert(key3("*", a, "*"), y);
    }
    for f in a_cat.onecells.keys() {
        let a = a_cat.src1(f).to_string();
        let b = a_cat.tgt1(f).to_string();
        let ia = a_cat.id1_of(&a).to_string();
        let ib = a_cat.id1_of(&b).to_string();
        // β cells at (f, 1_a) and (1_b, f) in A^op × A.
        let bf1 = beta.cell_at(&shape2.name(&[f, &ia]));
        let b1f = beta.cell_at(&shape2.name(&[&ib, f]));
        let s1 = hwhisker_left(gamma.comp_at("*", &a, "*"), bf1)?;
        let s2 = hwhisker_right(gamma.cell_b_at("*", f, "*"), beta.at(&shape2.name(&[&b, &a])))?;
        let s3 = hwhisker_left(gamma.comp_at("*", &b, "*"), &b1f.invert()?)?;
        cell_b.insert(key3("*", f, "*"), vcompose_nat(&s3, &vcompose_nat(&s2, &s1)?)?);
    }
    let out = ExtraPseudoNat {
        p: f_pad,
        p_shape: f_shape,
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
            "stalactite output failed the EP suite: {:?}",
            rep.first_failure()
        )));
    }
    Ok(out)
}

/// Postcompose `γ: X ⇏ F` (constant source over `1 × 1^op × 1`, target-side
/// variable C over `1 × C^op × C`) with `β: F ⇒ G` over `C^op × C`,
/// producing `δ: X ⇏ G` with
///
/// `δ_c = β_{(c,c)} ∘ γ_c` and
/// `δ_h = (β_{(1,h)} ∗ 1_{γ_c}) ∘ (1_{β_{(c,c')}} ∗ γ_h) ∘ (β_{(h,1)}⁻¹ ∗ 1_{γ_{c'}})`.
pub fn stalagmite(
    gamma: &ExtraPseudoNat,
    beta: &PseudoNat,
    shape2: &Shape,
) -> Result<ExtraPseudoNat> {
    if shape2.arity() != 2 || !shape2.factors[0].1 || shape2.factors[1].1 {
        return Err(Error::MalformedTables("stalagmite expects β over shape [C^op, C]".into()));
    }
    if shape2.factors[0].0 != shape2.factors[1].0 {
        return Err(Error::MalformedTables("stalagmite: shape factors differ".into()));
    }
    let (f_pad, pad_shape) = pad_terminal(&beta.f, shape2)?;
    if gamma.q != f_pad || gamma.q_shape != pad_shape {
        return Err(Error::BoundaryMismatch(
            "stalagmite: γ is not into the padded source of β".into(),
        ));
    }
    if !is_constant(&gamma.p) {
        return Err(Error::MalformedTables("stalagmite requires a constant source".into()));
    }
    let c_cat = shape2.factors[0].0.clone();
    let x = gamma.p.ob.values().next().expect("constant source nonempty").clone();
    let (g_pad, g_shape) = pad_terminal(&beta.g, shape2)?;
    let p_shape = terminal_triple_shape();
    let p = constant_pseudofunctor(&x, &p_shape.total);
    let t1 = Fin2Cat::terminal();
    let tid = t1.id1_of("*").to_string();

    let mut comp: BTreeMap<Key3, Fun> = BTreeMap::new();
    let mut cell_a = BTreeMap::new();
    let mut cell_b = BTreeMap::new();
    let mut cell_c = BTreeMap::new();
    for c in &c_cat.objects {
        let y = compose_fun(beta.at(&shape2.name(&[c, c])), gamma.comp_at("*", "*", c))?;
        cell_a.insert(
            key3(&tid, "*", c),
            forced_a_cell(&p, &p_shape, &g_pad, &g_shape, &y, "*", "*", c)?,
        );
        cell_b.insert(key3("*", &tid, c), Nat::identity(&compose_fun(&y, &Fun::identity(&x))?));
        comp.insert(key3("*", "*", c), y);
    }
    for h in c_cat.onecells.keys() {
        let c = c_cat.src1(h).to_string();
        let cp = c_cat.tgt1(h).to_string();
        let ic = c_cat.id1_of(&c).to_string();
        let icp = c_cat.id1_of(&cp).to_string();
        // β cells at (h, 1_{c'}) and (1_c, h) in C^op × C.
        let bh1 = beta.cell_at(&shape2.name(&[h, &icp]));
        let b1h = beta.cell_at(&shape2.name(&[&ic, h]));
        let s1 = hwhisker_right(&bh1.invert()?, gamma.comp_at("*", "*", &cp))?;
        let s2 = hwhisker_left(
            beta.at(&shape2.name(&[&c, &cp])),
            gamma.cell_c_at("*", "*", h),
        )?;
        let s3 = hwhisker_right(b1h, gamma.comp_at("*", "*", &c))?;
        cell_c.insert(key3("*", "*", h), vcompose_nat(&s3, &vcompose_nat(&s2, &s1)?)?);
    }
    let out = ExtraPseudoNat {
        p,
        p_shape,
        q: g_pad,
        q_shape: g_shape,
        comp,
        cell_a,
        cell_b,
        cell_c,
    };
    let rep = check_extrapseudonat(&out);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "stalagmite output failed the EP suite: {:?}",
            rep.first_failure()
        )));
    }
    Ok(out)
}

/// Contract the middle pair of `G: A × A^op × A → Cat`.
///
/// Inputs:
/// - `beta: F ⇏ G` with source `pad_outer(F)` and target
///   `reshuffle_inner(G)` (so `beta.comp[(a,*,c)]: F(a) → G(c,c,a)`);
/// - `gamma: G ⇏ H` with source G as given and target `pad_outer(H)` (so
///   `gamma.comp[(a,b,*)]: G(a,b,b) → H(a)`).
///
/// Output: the pseudonatural transformation `δ: F ⇒ H` with
/// `δ_a = γ_{aa} ∘ β_{aa}` and, for `f: a → b`,
/// `δ_f = (γ_{fa} ∗ 1_{β_{aa}}) ∘ (1_{γ_{ba}} ∗ β_{fa}) ∘ (γ_{bf}⁻¹ ∗ 1_{β_{ba}}) ∘ (1_{γ_{bb}} ∗ β_{bf})`.
pub fn yank(
    f_fun: &PseudoFun,
    h_fun: &PseudoFun,
    g_fun: &PseudoFun,
    g_shape: &Shape,
    beta: &ExtraPseudoNat,
    gamma: &ExtraPseudoNat,
) -> Result<PseudoNat> {
    let (f_pad, _) = pad_outer(f_fun)?;
    let (h_pad, h_pad_shape) = pad_outer(h_fun)?;
    let (g_resh, _) = reshuffle_inner(g_fun, g_shape)?;
    if beta.p != f_pad {
        return Err(Error::BoundaryMismatch("yank: β source is not pad_outer(F)".into()));
    }
    if beta.q != g_resh {
        return Err(Error::BoundaryMismatch("yank: β target is not reshuffle_inner(G)".into()));
    }
    if gamma.p != *g_fun || gamma.p_shape != *g_shape {
        return Err(Error::BoundaryMismatch("yank: γ source is not G".into()));
    }
    if gamma.q != h_pad || gamma.q_shape != h_pad_shape {
        return Err(Error::BoundaryMismatch("yank: γ target is not pad_outer(H)".into()));
    }
    let a_cat = f_fun.dom.clone();
    let mut comp: BTreeMap<String, Fun> = BTreeMap::new();
    for a in &a_cat.objects {
        // γ_{aa} ∘ β_{aa}: F(a) → G(a,a,a) → H(a).
        comp.insert(
            a.clone(),
            compose_fun(gamma.comp_at(a, a, "*"), beta.comp_at(a, "*", a))?,
        );
    }
    let mut cell: BTreeMap<String, Nat> = BTreeMap::new();
    for f in a_cat.onecells.keys() {
        let a = a_cat.src1(f).to_string();
        let b = a_cat.tgt1(f).to_string();
        // β_{bf}: β_{bb}∘F(f) ⇒ G(1,1,f)∘β_{ba} (A-direction cell of β at c=b).
        let s1 = hwhisker_left(gamma.comp_at(&b, &b, "*"), beta.cell_a_at(f, "*", &b))?;
        // γ_{bf}⁻¹: γ_{bb}∘G(1,1,f) ⇒ γ_{ba}∘G(1,f,1) (B-direction cell of γ).
        let s2 = hwhisker_right(
            &gamma.cell_b_at(&b, f, "*").invert()?,
            beta.comp_at(&a, "*", &b),
        )?;
        // β_{fa}: G(1,f,1)∘β_{ba} ⇒ G(f,1,1)∘β_{aa} (C-direction cell of β).
        let s3 = hwhisker_left(gamma.comp_at(&b, &a, "*"), beta.cell_c_at(&a, "*", f))?;
        // γ_{fa}: γ_{ba}∘G(f,1,1) ⇒ H(f)∘γ_{aa} (A-direction cell of γ at b=a).
        let s4 = hwhisker_right(gamma.cell_a_at(f, &a, "*"), beta.comp_at(&a, "*", &a))?;
        let delta =
            vcompose_nat(&s4, &vcompose_nat(&s3, &vcompose_nat(&s2, &s1)?)?)?;
        cell.insert(f.clone(), delta);
    }
    let out = PseudoNat { f: f_fun.clone(), g: h_fun.clone(), comp, cell };
    let rep = check_pseudonat(&out);
    if !rep.is_pass() {
        return Err(Error::CheckFailed(format!(
            "yank output failed the PS suite: {:?}",
            rep.first_failure()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extra::identity_celled;
    use crate::fincat::FinCat;

    fn z2() -> FinCat {
        let mut c = FinCat::discrete(&["*"]);
        c.mor.insert("s".into(), ("*".into(), "*".into()));
        for (k, v) in [(("s", "id_*"), "s"), (("id_*", "s"), "s"), (("s", "s"), "id_*")] {
            c.compose.insert((k.0.into(), k.1.into()), v.into());
        }
        c
    }

    fn walking_arrow_2cat() -> Fin2Cat {
        let mut c = FinCat::discrete(&["x", "y"]);
        c.mor.insert("w".into(), ("x".into(), "y".into()));
        c.compose.insert(("w".into(), "id_x".into()), "w".into());
        c.compose.insert(("id_y".into(), "w".into()), "w".into());
        Fin2Cat::from_cat(&c)
    }

    fn square_shape(a: &Fin2Cat) -> Shape {
        Shape::new(vec![(a.clone(), true), (a.clone(), false)])
    }

    /// γ: pad(G) ⇏ X over the A^op×A diagonal with identity components.
    fn diagonal_gamma(g: &PseudoFun, shape2: &Shape) -> ExtraPseudoNat {
        let (g_pad, pad_shape) = pad_terminal(g, shape2).unwrap();
        let q_shape = terminal_triple_shape();
        let x = z2();
        let q = constant_pseudofunctor(&x, &q_shape.total);
        let a = shape2.factors[0].0.clone();
        let mut comp = BTreeMap::new();
        for o in &a.objects {
            comp.insert(key3("*", o, "*"), Fun::identity(&x));
        }
        identity_celled(&g_pad, &pad_shape, &q, &q_shape, comp).unwrap()
    }

    #[test]
    fn stalactite_composes_identity_data() {
        let a = walking_arrow_2cat();
        let shape2 = square_shape(&a);
        let x = z2();
        let g = constant_pseudofunctor(&x, &shape2.total);
        let beta = PseudoNat::identity(&g);
        let gamma = diagonal_gamma(&g, &shape2);
        let delta = stalactite(&beta, &shape2, &gamma).unwrap();
        assert!(check_extrapseudonat(&delta).is_pass());
        for o in &a.objects {
            assert_eq!(delta.comp_at("*", o, "*"), &compose_fun(&Fun::identity(&x), &Fun::identity(&x)).unwrap());
        }
    }

    #[test]
    fn stalactite_with_central_twisted_pseudonat() {
        // β cells carry the central element s on the four single-generator
        // 1-cells of A^op×A and cancel on the diagonal composite (w,w).
        let a = walking_arrow_2cat();
        let shape2 = square_shape(&a);
        let x = z2();
        let g = constant_pseudofunctor(&x, &shape2.total);
        let mut beta = PseudoNat::identity(&g);
        for onecell in shape2.total.onecells.keys() {
            let parts = shape2.split(onecell);
            let gens = parts.iter().filter(|p| *p == "w").count();
            if gens == 1 {
                let mut n = beta.cell[onecell].clone();
                n.comp.insert("*".into(), "s".into());
                beta.cell.insert(onecell.clone(), n);
            }
        }
        assert!(check_pseudonat(&beta).is_pass());
        let gamma = diagonal_gamma(&g, &shape2);
        let delta = stalactite(&beta, &shape2, &gamma).unwrap();
        // The two s-twists cancel in the stalactite cell at w.
        let n = delta.cell_b_at("*", "w", "*");
        assert_eq!(*n, Nat::identity(&n.src));
    }

    #[test]
    fn stalactite_rejects_mismatched_gamma() {
        let a = walking_arrow_2cat();
        let shape2 = square_shape(&a);
        let x = z2();
        let g = constant_pseudofunctor(&x, &shape2.total);
        let f = constant_pseudofunctor(&FinCat::terminal(), &shape2.total);
        let beta = PseudoNat::identity(&f);
        let gamma = diagonal_gamma(&g, &shape2);
        let err = stalactite(&beta, &shape2, &gamma).unwrap_err();
        assert!(matches!(err, Error::BoundaryMismatch(_)));
    }

    /// γ: X ⇏ pad(F) with identity components (dual of `diagonal_gamma`).
    fn codiagonal_gamma(f: &PseudoFun, shape2: &Shape) -> ExtraPseudoNat {
        let (f_pad, pad_shape) = pad_terminal(f, shape2).unwrap();
        let p_shape = terminal_triple_shape();
        let x = z2();
        let p = constant_pseudofunctor(&x, &p_shape.total);
        let c = shape2.factors[0].0.clone();
        let mut comp = BTreeMap::new();
        for o in &c.objects {
            comp.insert(key3("*", "*", o), Fun::identity(&x));
        }
        identity_celled(&p, &p_shape, &f_pad, &pad_shape, comp).unwrap()
    }

    #[test]
    fn stalagmite_composes_identity_data() {
        let c = walking_arrow_2cat();
        let shape2 = square_shape(&c);
        let x = z2();
        let f = constant_pseudofunctor(&x, &shape2.total);
        let beta = PseudoNat::identity(&f);
        let gamma = codiagonal_gamma(&f, &shape2);
        let delta = stalagmite(&gamma, &beta, &shape2).unwrap();
        assert!(check_extrapseudonat(&delta).is_pass());
        assert!(is_constant(&delta.p));
    }

    #[test]
    fn yank_contracts_identity_data() {
        let a = walking_arrow_2cat();
        let x = z2();
        let f_fun = constant_pseudofunctor(&x, &a);
        let h_fun = constant_pseudofunctor(&x, &a);
        let g_shape = Shape::new(vec![(a.clone(), false), (a.clone(), true), (a.clone(), false)]);
        let g_fun = constant_pseudofunctor(&x, &g_shape.total);
        let (f_pad, f_pad_shape) = pad_outer(&f_fun).unwrap();
        let (g_resh, g_resh_shape) = reshuffle_inner(&g_fun, &g_shape).unwrap();
        let mut bcomp = BTreeMap::new();
        for ao in &a.objects {
            for co in &a.objects {
                bcomp.insert(key3(ao, "*", co), Fun::identity(&x));
            }
        }
        let beta =
            identity_celled(&f_pad, &f_pad_shape, &g_resh, &g_resh_shape, bcomp).unwrap();
        assert!(check_extrapseudonat(&beta).is_pass());
        let (h_pad, h_pad_shape) = pad_outer(&h_fun).unwrap();
        let mut gcomp = BTreeMap::new();
        for ao in &a.objects {
            for bo in &a.objects {
                gcomp.insert(key3(ao, bo, "*"), Fun::identity(&x));
            }
        }
        let gamma = identity_celled(&g_fun, &g_shape, &h_pad, &h_pad_shape, gcomp).unwrap();
        assert!(check_extrapseudonat(&gamma).is_pass());
        let delta = yank(&f_fun, &h_fun, &g_fun, &g_shape, &beta, &gamma).unwrap();
        assert!(check_pseudonat(&delta).is_pass());
        // Identity data contracts to identity cells.
        let n = delta.cell_at("w");
        assert_eq!(*n, Nat::identity(&n.src));
    }

    #[test]
    fn yank_propagates_a_central_twist() {
        let a = walking_arrow_2cat();
        let x = z2();
        let f_fun = constant_pseudofunctor(&x, &a);
        let h_fun = constant_pseudofunctor(&x, &a);
        let g_shape = Shape::new(vec![(a.clone(), false), (a.clone(), true), (a.clone(), false)]);
        let g_fun = constant_pseudofunctor(&x, &g_shape.total);
        let (f_pad, f_pad_shape) = pad_outer(&f_fun).unwrap();
        let (g_resh, g_resh_shape) = reshuffle_inner(&g_fun, &g_shape).unwrap();
        let mut bcomp = BTreeMap::new();
        for ao in &a.objects {
            for co in &a.objects {
                bcomp.insert(key3(ao, "*", co), Fun::identity(&x));
            }
        }
        let beta =
            identity_celled(&f_pad, &f_pad_shape, &g_resh, &g_resh_shape, bcomp).unwrap();
        let (h_pad, h_pad_shape) = pad_outer(&h_fun).unwrap();
        let mut gcomp = BTreeMap::new();
        for ao in &a.objects {
            for bo in &a.objects {
                gcomp.insert(key3(ao, bo, "*"), Fun::identity(&x));
            }
        }
        let mut gamma = identity_celled(&g_fun, &g_shape, &h_pad, &h_pad_shape, gcomp).unwrap();
        // Twist every B-direction cell of γ at the generator w by s.
        for ao in &a.objects {
            let k = key3(ao, "w", "*");
            let mut n = gamma.cell_b[&k].clone();
            n.comp.insert("*".into(), "s".into());
            gamma.cell_b.insert(k, n);
        }
        assert!(check_extrapseudonat(&gamma).is_pass(), "twisted γ must stay valid");
        let delta = yank(&f_fun, &h_fun, &g_fun, &g_shape, &beta, &gamma).unwrap();
        // The twist survives into the contracted cell at w (s is self-inverse).
        assert_eq!(delta.cell_at("w").comp["*"], "s");
    }
}
