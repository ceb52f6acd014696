//! Admissible rules built from the primitive sequent rules: the graded box
//! `Grd[r](Lin A)`, graded implication `Grd[r](X) -o A`, and the distribution
//! of `Grd[r]` over `><`.

use crate::deriv::{as_gs, as_ms, CheckError, RuleError};
use crate::sc::{ScDeriv, ScRule};
use crate::semiring::{Grade, SemiringId};
use crate::syntax::*;

pub type DResult = Result<ScDeriv, CheckError>;

fn bad(rule: &str, msg: impl Into<String>) -> CheckError {
    CheckError { path: vec![], rule: rule.to_string(), error: RuleError::Shape(msg.into()) }
}

/// `Grd[r](Lin A)`.
pub fn box_type(r: Grade, a: LType) -> LType {
    LType::grd(r, GType::lin(a))
}

fn supply_for(ds: &[&ScDeriv]) -> NameSupply {
    let mut s = NameSupply::new();
    for d in ds {
        d.visit(&mut |_, n| s.reserve_all(n.concl.all_names().iter()));
    }
    s
}

/// From `δ ⊙ (x : Lin A, ..) ; ⊢ l : A` conclude `r*δ ⊙ .. ; ⊢ Grd[r] (Lin l) : Grd[r](Lin A)`.
pub fn derive_box_intro(sr: SemiringId, r: Grade, d: ScDeriv) -> DResult {
    let (g, l, _, _) = as_ms(&d.concl).map_err(|_| bad("box_I", "premise must be a mixed judgment"))?;
    if !l.is_empty() {
        return Err(bad("box_I", "premise must have an empty linear context"));
    }
    if let Some(e) = g.iter().find(|e| !matches!(e.ty, GType::Lin(_))) {
        return Err(bad("box_I", format!("graded hypothesis `{}` is not of the form Lin A", e.name)));
    }
    let lin = ScDeriv::unary(sr, ScRule::LinR, d)?;
    ScDeriv::unary(sr, ScRule::GrdR { r }, lin)
}

/// From `Δ₁ ; Γ₁ ⊢ l₁ : Grd[r](Lin A)` and `Δ₂ ; Γ₂ ⊢ l₂ : B` where `x : Lin A` is
/// graded at `r` in `Δ₂`, conclude `Δ₁, Δ₂∖x ; Γ₁, Γ₂ ⊢ let Grd[r] x = l₁ in l₂ : B`.
pub fn derive_box_elim(sr: SemiringId, d1: ScDeriv, x: &str, d2: ScDeriv) -> DResult {
    let (_, _, _, a) = as_ms(&d1.concl).map_err(|_| bad("box_E", "first premise must be mixed"))?;
    let (r, inner) = match a {
        LType::Grd(r, inner) if matches!(**inner, GType::Lin(_)) => (r.clone(), (**inner).clone()),
        _ => return Err(bad("box_E", format!("first premise has type {a}, expected a box"))),
    };
    let i = d2.concl.find_graded(x).ok_or_else(|| bad("box_E", format!("`{x}` is not a graded hypothesis")))?;
    let e = &d2.concl.gctx()[i];
    if e.ty != inner || e.grade != r {
        return Err(bad("box_E", format!("`{x}` must be {inner} at grade {r}")));
    }
    let z = supply_for(&[&d1, &d2]).fresh("z");
    let left = ScDeriv::unary(sr, ScRule::GrdL { x: x.into(), z: z.clone(), at: 0 }, d2)?;
    ScDeriv::binary(sr, ScRule::CutMS { x: z }, d1, left)
}

/// From `Δ₁ ⊢ t : X` and `Δ₂ ; Γ, x : B ⊢ l : C` conclude
/// `r*Δ₁, Δ₂ ; Γ[z : Grd[r](X) -o B / x] ⊢ [z (Grd[r] t)/x] l : C`.
pub fn derive_gimpl_left(sr: SemiringId, r: Grade, d1: ScDeriv, x: &str, d2: ScDeriv) -> DResult {
    as_gs(&d1.concl).map_err(|_| bad("gimpl_L", "first premise must be graded"))?;
    if d2.concl.find_linear(x).is_none() {
        return Err(bad("gimpl_L", format!("`{x}` is not a linear hypothesis of the second premise")));
    }
    let z = supply_for(&[&d1, &d2]).fresh("f");
    let promoted = ScDeriv::unary(sr, ScRule::GrdR { r }, d1)?;
    ScDeriv::binary(sr, ScRule::LolliL { x: x.into(), z }, promoted, d2)
}

/// From `Δ, x : X at r ; Γ ⊢ l : A` conclude
/// `Δ ; Γ ⊢ \z : Grd[r](X) . let Grd[r] x = z in l : Grd[r](X) -o A`.
pub fn derive_gimpl_right(sr: SemiringId, x: &str, d: ScDeriv) -> DResult {
    as_ms(&d.concl).map_err(|_| bad("gimpl_R", "premise must be mixed"))?;
    if d.concl.find_graded(x).is_none() {
        return Err(bad("gimpl_R", format!("`{x}` is not a graded hypothesis")));
    }
    let z = supply_for(&[&d]).fresh("z");
    let unboxed = ScDeriv::unary(sr, ScRule::GrdL { x: x.into(), z: z.clone(), at: 0 }, d)?;
    ScDeriv::unary(sr, ScRule::LolliR { x: z }, unboxed)
}

/// `; ⊢ Grd[r](X >< Y) -o (Grd[r](X) * Grd[r](Y))`.
pub fn derive_grd_tensor_dist(sr: SemiringId, r: Grade, x: GType, y: GType) -> DResult {
    let left = ScDeriv::leaf(sr, ScRule::IdGS { x: "a".into(), ty: x })?;
    let left = ScDeriv::unary(sr, ScRule::GrdR { r: r.clone() }, left)?;
    let right = ScDeriv::leaf(sr, ScRule::IdGS { x: "b".into(), ty: y })?;
    let right = ScDeriv::unary(sr, ScRule::GrdR { r }, right)?;
    let pair = ScDeriv::binary(sr, ScRule::TensorR, left, right)?;
    let split = ScDeriv::unary(sr, ScRule::TenLMS { x: "a".into(), y: "b".into(), z: "p".into() }, pair)?;
    let unboxed = ScDeriv::unary(sr, ScRule::GrdL { x: "p".into(), z: "z".into(), at: 0 }, split)?;
    ScDeriv::unary(sr, ScRule::LolliR { x: "z".into() }, unboxed)
}
