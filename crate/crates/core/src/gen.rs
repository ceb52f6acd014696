//! Seeded random generators for checked derivations, used by property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deriv::{Deriv, Frag, Rule};
use crate::nd::{NdDeriv, NdRule};
use crate::sc::{ScDeriv, ScRule};
use crate::semiring::{Grade, SemiringId};
use crate::syntax::*;

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_depth: usize,
    /// Chance that an inner node of an SC tree is a cut.
    pub cut_chance: f64,
    /// Restrict the grade of graded unit elimination to 1 (the grade inference picks).
    pub unit_grade_one: bool,
}

impl GenConfig {
    pub fn new(max_depth: usize) -> GenConfig {
        GenConfig { max_depth, cut_chance: 0.0, unit_grade_one: false }
    }

    pub fn with_cuts(mut self, chance: f64) -> GenConfig {
        self.cut_chance = chance;
        self
    }
}

fn levels(cfg: &GenConfig) -> usize {
    cfg.max_depth.max(1)
}

/// A checked SC derivation with at most `max_depth` levels of rules, so
/// `max_depth = 1` gives an axiom.
pub fn gen_sc_derivation(sr: SemiringId, seed: u64, max_depth: usize, frag: Frag, cuts: bool) -> ScDeriv {
    let cfg = GenConfig::new(max_depth).with_cuts(if cuts { 0.35 } else { 0.0 });
    gen_sc_with(sr, seed, &cfg, frag)
}

pub fn gen_sc_with(sr: SemiringId, seed: u64, cfg: &GenConfig, frag: Frag) -> ScDeriv {
    let mut g = Gen::new(sr, seed, cfg.clone());
    loop {
        let d = g.sc(frag, levels(cfg) - 1);
        if d.depth() < levels(cfg) {
            return d;
        }
    }
}

/// A checked ND derivation with at most `max_depth` levels of rules.
pub fn gen_nd_derivation(sr: SemiringId, seed: u64, max_depth: usize, frag: Frag) -> NdDeriv {
    gen_nd_with(sr, seed, &GenConfig::new(max_depth), frag)
}

pub fn gen_nd_with(sr: SemiringId, seed: u64, cfg: &GenConfig, frag: Frag) -> NdDeriv {
    let mut g = Gen::new(sr, seed, cfg.clone());
    loop {
        let d = g.nd(frag, levels(cfg) - 1);
        if d.depth() < levels(cfg) {
            return d;
        }
    }
}

/// A small random grade of the given semiring.
pub fn random_grade<G: Rng>(sr: SemiringId, rng: &mut G) -> Grade {
    let lit = match sr {
        SemiringId::NatExact | SemiringId::NatLeq => rng.gen_range(0..4u32).to_string(),
        SemiringId::N01w => ["0", "1", "w"].choose(rng).unwrap().to_string(),
        SemiringId::Sec => ["Lo", "Hi"].choose(rng).unwrap().to_string(),
        SemiringId::Rat => format!("{}/{}", rng.gen_range(0..5u32), rng.gen_range(1..4u32)),
    };
    sr.parse_grade(&lit).expect("generated literal parses")
}

/// A random grade at or above `g`.
pub fn random_above<G: Rng>(sr: SemiringId, g: &Grade, rng: &mut G) -> Grade {
    let mut pool: Vec<Grade> = (0..6).map(|_| random_grade(sr, rng)).filter(|c| sr.leq(g, c).unwrap_or(false)).collect();
    if let Ok(s) = sr.add(g, &random_grade(sr, rng)) {
        if sr.leq(g, &s).unwrap_or(false) {
            pool.push(s);
        }
    }
    pool.push(g.clone());
    pool.choose(rng).unwrap().clone()
}

pub struct Gen {
    pub sr: SemiringId,
    pub rng: ChaCha8Rng,
    cfg: GenConfig,
    counter: usize,
}

impl Gen {
    pub fn new(sr: SemiringId, seed: u64, cfg: GenConfig) -> Gen {
        Gen { sr, rng: ChaCha8Rng::seed_from_u64(seed), cfg, counter: 0 }
    }

    pub fn name(&mut self, base: &str) -> Name {
        self.counter += 1;
        format!("{base}{}", self.counter)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p.clamp(0.0, 1.0))
    }

    pub fn grade(&mut self) -> Grade {
        random_grade(self.sr, &mut self.rng)
    }

    fn above(&mut self, g: &Grade) -> Grade {
        random_above(self.sr, g, &mut self.rng)
    }

    fn unit_grade(&mut self) -> Grade {
        if self.cfg.unit_grade_one {
            self.sr.one()
        } else {
            self.grade()
        }
    }

    pub fn gtype(&mut self, depth: usize) -> GType {
        let k = if depth == 0 { self.rng.gen_range(0..3) } else { self.rng.gen_range(0..5) };
        match k {
            0 => GType::atom("X"),
            1 => GType::atom("Y"),
            2 => GType::J,
            3 => GType::tensor(self.gtype(depth - 1), self.gtype(depth - 1)),
            _ => GType::lin(self.ltype(depth - 1)),
        }
    }

    pub fn ltype(&mut self, depth: usize) -> LType {
        let k = if depth == 0 { self.rng.gen_range(0..3) } else { self.rng.gen_range(0..6) };
        match k {
            0 => LType::atom("A"),
            1 => LType::atom("B"),
            2 => LType::I,
            3 => LType::tensor(self.ltype(depth - 1), self.ltype(depth - 1)),
            4 => LType::lolli(self.ltype(depth - 1), self.ltype(depth - 1)),
            _ => {
                let r = self.grade();
                LType::grd(r, self.gtype(depth - 1))
            }
        }
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> Option<T> {
        xs.choose(&mut self.rng).cloned()
    }

    fn mk<R: Rule>(&self, rule: R, kids: Vec<Deriv<R>>) -> Option<Deriv<R>> {
        Deriv::new(self.sr, rule, kids).ok()
    }

    // -- sequent calculus ----------------------------------------------------

    pub fn sc(&mut self, frag: Frag, depth: usize) -> ScDeriv {
        if depth > 0 && !self.chance(0.15) {
            for _ in 0..8 {
                let r = match frag {
                    Frag::Graded => self.sc_gs_step(depth),
                    Frag::Mixed => self.sc_ms_step(depth),
                };
                if let Some(d) = r {
                    return d;
                }
            }
        }
        self.sc_axiom(frag)
    }

    fn sc_axiom(&mut self, frag: Frag) -> ScDeriv {
        let rule = match (frag, self.rng.gen_range(0..5)) {
            (Frag::Graded, 0) => ScRule::UnitJR,
            (Frag::Graded, _) => {
                let ty = self.gtype(1);
                ScRule::IdGS { x: self.name("x"), ty }
            }
            (Frag::Mixed, 0) => ScRule::UnitIR,
            (Frag::Mixed, _) => {
                let ty = self.ltype(1);
                ScRule::IdMS { x: self.name("a"), ty }
            }
        };
        Deriv::leaf(self.sr, rule).expect("axiom")
    }

    /// Rules that leave the conclusion formula alone and only touch contexts.
    fn sc_structural(&mut self, d: ScDeriv) -> Option<ScDeriv> {
        let frag = Frag::of(&d.concl);
        let g = d.concl.gctx().clone();
        let l = d.concl.lctx().to_vec();
        let ms = frag == Frag::Mixed;
        match self.rng.gen_range(0..10) {
            0 | 1 => {
                let ty = self.gtype(1);
                let at = self.rng.gen_range(0..=g.len());
                let x = self.name("w");
                let rule = if ms { ScRule::WeakMS { x, ty, at } } else { ScRule::WeakGS { x, ty, at } };
                self.mk(rule, vec![d])
            }
            2 | 3 => {
                let i = (0..g.len().saturating_sub(1)).filter(|&i| g[i].ty == g[i + 1].ty).collect::<Vec<_>>();
                let i = self.pick(&i)?;
                let (x, y) = (g[i].name.clone(), g[i + 1].name.clone());
                let z = x.clone();
                let rule = if ms { ScRule::ContMS { x, y, z } } else { ScRule::ContGS { x, y, z } };
                self.mk(rule, vec![d])
            }
            4 => {
                if g.len() < 2 {
                    return None;
                }
                let k = self.rng.gen_range(0..g.len() - 1);
                self.mk(if ms { ScRule::GExMS { k } } else { ScRule::ExGS { k } }, vec![d])
            }
            5 if ms && l.len() >= 2 => {
                let k = self.rng.gen_range(0..l.len() - 1);
                self.mk(ScRule::ExMS { k }, vec![d])
            }
            6 | 7 => {
                if g.is_empty() {
                    return None;
                }
                let to: Vec<Grade> = g.iter().map(|e| e.grade.clone()).collect::<Vec<_>>();
                let to = to.iter().map(|r| self.above(r)).collect();
                self.mk(if ms { ScRule::SubMS { to } } else { ScRule::SubGS { to } }, vec![d])
            }
            _ => {
                let r = self.grade();
                let at = self.rng.gen_range(0..=g.len());
                let x = self.name("u");
                let rule = if ms { ScRule::UnitJLMS { x, r, at } } else { ScRule::UnitJL { x, r, at } };
                self.mk(rule, vec![d])
            }
        }
    }

    fn sc_gs_step(&mut self, depth: usize) -> Option<ScDeriv> {
        let cut = self.chance(self.cfg.cut_chance);
        if cut {
            let c2 = self.sc(Frag::Graded, depth - 1);
            let g = c2.concl.gctx().clone();
            let e = self.pick(&g)?;
            let c1 = self.sc_of_gtype(&e.ty, depth - 1);
            return self.mk(ScRule::CutGS { x: e.name }, vec![c1, c2]);
        }
        match self.rng.gen_range(0..6) {
            0 => {
                let a = self.sc(Frag::Graded, depth - 1);
                let b = self.sc(Frag::Graded, depth - 1);
                self.mk(ScRule::TenR, vec![a, b])
            }
            1 => {
                let m = self.sc_closed(depth - 1)?;
                self.mk(ScRule::LinR, vec![m])
            }
            2 => {
                let c = self.sc(Frag::Graded, depth - 1);
                let z = self.name("p");
                self.sc_pair_left(c, z, false)
            }
            _ => {
                let c = self.sc(Frag::Graded, depth - 1);
                self.sc_structural(c)
            }
        }
    }

    fn sc_pair_left(&mut self, c: ScDeriv, z: Name, ms: bool) -> Option<ScDeriv> {
        let g = c.concl.gctx().clone();
        let i = (0..g.len().saturating_sub(1)).filter(|&i| g[i].grade == g[i + 1].grade).collect::<Vec<_>>();
        let i = self.pick(&i)?;
        let (x, y) = (g[i].name.clone(), g[i + 1].name.clone());
        let rule = if ms { ScRule::TenLMS { x, y, z } } else { ScRule::TenL { x, y, z } };
        self.mk(rule, vec![c])
    }

    /// A mixed derivation with an empty linear context.
    fn sc_closed(&mut self, depth: usize) -> Option<ScDeriv> {
        if depth == 0 {
            return self.mk(ScRule::UnitIR, vec![]);
        }
        match self.rng.gen_range(0..3) {
            0 => {
                let g = self.sc(Frag::Graded, depth - 1);
                let r = self.grade();
                self.mk(ScRule::GrdR { r }, vec![g])
            }
            1 => {
                let ty = self.ltype(1);
                self.sc_closed_of(&ty, depth)
            }
            _ => {
                let budget = depth.saturating_sub(2);
                let mut d = self.sc(Frag::Mixed, budget);
                while let Some(x) = d.concl.linear_names().first().cloned() {
                    d = self.mk(ScRule::LolliR { x }, vec![d])?;
                }
                Some(d)
            }
        }
    }

    fn sc_closed_of(&mut self, ty: &LType, depth: usize) -> Option<ScDeriv> {
        match ty {
            LType::I => self.mk(ScRule::UnitIR, vec![]),
            LType::Grd(r, x) if depth > 0 => {
                let g = self.sc_of_gtype(x, depth - 1);
                self.mk(ScRule::GrdR { r: r.clone() }, vec![g])
            }
            LType::Tensor(a, b) if depth > 0 => {
                let a = self.sc_closed_of(a, depth - 1)?;
                let b = self.sc_closed_of(b, depth - 1)?;
                self.mk(ScRule::TensorR, vec![a, b])
            }
            _ if depth > 0 => {
                let x = self.name("a");
                let z = self.name("c");
                let id = self.mk(ScRule::IdMS { x: x.clone(), ty: ty.clone() }, vec![])?;
                self.mk(ScRule::LinL { x, z, at: 0 }, vec![id])
            }
            _ => None,
        }
    }

    fn sc_ms_step(&mut self, depth: usize) -> Option<ScDeriv> {
        if self.chance(self.cfg.cut_chance) {
            let c2 = self.sc(Frag::Mixed, depth - 1);
            let graded = self.chance(0.5);
            if graded || c2.concl.lctx().is_empty() {
                let e = self.pick(c2.concl.gctx())?;
                let c1 = self.sc_of_gtype(&e.ty, depth - 1);
                return self.mk(ScRule::GCutMS { x: e.name }, vec![c1, c2]);
            }
            let e = self.pick(c2.concl.lctx())?;
            let c1 = self.sc_of_ltype(&e.ty, depth - 1);
            return self.mk(ScRule::CutMS { x: e.name }, vec![c1, c2]);
        }
        match self.rng.gen_range(0..12) {
            0 => {
                let a = self.sc(Frag::Mixed, depth - 1);
                let b = self.sc(Frag::Mixed, depth - 1);
                self.mk(ScRule::TensorR, vec![a, b])
            }
            1 => {
                let c = self.sc(Frag::Mixed, depth - 1);
                let e = self.pick(c.concl.lctx())?;
                self.mk(ScRule::LolliR { x: e.name }, vec![c])
            }
            2 => {
                let c2 = self.sc(Frag::Mixed, depth - 1);
                let e = self.pick(c2.concl.lctx())?;
                let c1 = self.sc(Frag::Mixed, depth - 1);
                let z = self.name("f");
                self.mk(ScRule::LolliL { x: e.name, z }, vec![c1, c2])
            }
            3 => {
                let c = self.sc(Frag::Mixed, depth - 1);
                let at = self.rng.gen_range(0..=c.concl.lctx().len());
                let x = self.name("i");
                self.mk(ScRule::UnitIL { x, at }, vec![c])
            }
            4 => {
                let c = self.sc(Frag::Mixed, depth - 1);
                let l = c.concl.lctx().to_vec();
                if l.len() < 2 {
                    return None;
                }
                let i = self.rng.gen_range(0..l.len() - 1);
                let z = self.name("t");
                self.mk(ScRule::TensorL { x: l[i].name.clone(), y: l[i + 1].name.clone(), z }, vec![c])
            }
            5 => {
                let c = self.sc(Frag::Mixed, depth - 1);
                let z = self.name("p");
                self.sc_pair_left(c, z, true)
            }
            6 => {
                let g = self.sc(Frag::Graded, depth - 1);
                let r = self.grade();
                self.mk(ScRule::GrdR { r }, vec![g])
            }
            7 => {
                let c = self.sc(Frag::Mixed, depth - 1);
                let e = self.pick(c.concl.lctx())?;
                let at = self.rng.gen_range(0..=c.concl.gctx().len());
                let z = self.name("c");
                self.mk(ScRule::LinL { x: e.name, z, at }, vec![c])
            }
            8 => {
                let c = self.sc(Frag::Mixed, depth - 1);
                let e = self.pick(c.concl.gctx())?;
                let at = self.rng.gen_range(0..c.concl.lctx().len() + 1);
                let z = self.name("b");
                self.mk(ScRule::GrdL { x: e.name, z, at }, vec![c])
            }
            _ => {
                let c = self.sc(Frag::Mixed, depth - 1);
                self.sc_structural(c)
            }
        }
    }

    /// A derivation concluding the given graded formula.
    pub fn sc_of_gtype(&mut self, ty: &GType, depth: usize) -> ScDeriv {
        let d = if depth == 0 || self.chance(0.3) {
            None
        } else {
            match ty {
                GType::J => self.mk(ScRule::UnitJR, vec![]),
                GType::Tensor(a, b) => {
                    let a = self.sc_of_gtype(a, depth - 1);
                    let b = self.sc_of_gtype(b, depth - 1);
                    self.mk(ScRule::TenR, vec![a, b])
                }
                GType::Lin(a) => self.sc_closed_of(a, depth - 1).and_then(|m| self.mk(ScRule::LinR, vec![m])),
                GType::Atom(_) => {
                    let inner = self.sc_of_gtype(ty, depth - 1);
                    self.sc_structural(inner)
                }
            }
        };
        d.unwrap_or_else(|| {
            let x = self.name("x");
            Deriv::leaf(self.sr, ScRule::IdGS { x, ty: ty.clone() }).expect("axiom")
        })
    }

    pub fn sc_of_ltype(&mut self, ty: &LType, depth: usize) -> ScDeriv {
        let d = if depth == 0 || self.chance(0.3) {
            None
        } else {
            match ty {
                LType::I => self.mk(ScRule::UnitIR, vec![]),
                LType::Tensor(a, b) => {
                    let a = self.sc_of_ltype(a, depth - 1);
                    let b = self.sc_of_ltype(b, depth - 1);
                    self.mk(ScRule::TensorR, vec![a, b])
                }
                LType::Grd(r, x) => {
                    let g = self.sc_of_gtype(x, depth - 1);
                    self.mk(ScRule::GrdR { r: r.clone() }, vec![g])
                }
                _ => {
                    let inner = self.sc_of_ltype(ty, depth - 1);
                    self.sc_structural(inner)
                }
            }
        };
        d.unwrap_or_else(|| {
            let x = self.name("a");
            Deriv::leaf(self.sr, ScRule::IdMS { x, ty: ty.clone() }).expect("axiom")
        })
    }

    // -- natural deduction ---------------------------------------------------

    pub fn nd(&mut self, frag: Frag, depth: usize) -> NdDeriv {
        if depth > 0 && !self.chance(0.15) {
            for _ in 0..8 {
                let r = match frag {
                    Frag::Graded => self.nd_gt_step(depth),
                    Frag::Mixed => self.nd_mt_step(depth),
                };
                if let Some(d) = r {
                    return d;
                }
            }
        }
        self.nd_axiom(frag)
    }

    fn nd_axiom(&mut self, frag: Frag) -> NdDeriv {
        let rule = match (frag, self.rng.gen_range(0..5)) {
            (Frag::Graded, 0) => NdRule::UnitJI,
            (Frag::Graded, _) => {
                let ty = self.gtype(1);
                NdRule::IdG { x: self.name("x"), ty }
            }
            (Frag::Mixed, 0) => NdRule::UnitII,
            (Frag::Mixed, _) => {
                let ty = self.ltype(1);
                NdRule::IdM { x: self.name("a"), ty }
            }
        };
        Deriv::leaf(self.sr, rule).expect("axiom")
    }

    fn nd_structural(&mut self, d: NdDeriv) -> Option<NdDeriv> {
        let ms = Frag::of(&d.concl) == Frag::Mixed;
        let g = d.concl.gctx().clone();
        let l = d.concl.lctx().to_vec();
        match self.rng.gen_range(0..8) {
            0 | 1 => {
                let ty = self.gtype(1);
                let at = self.rng.gen_range(0..=g.len());
                let x = self.name("w");
                let rule = if ms { NdRule::WeakM { x, ty, at } } else { NdRule::WeakG { x, ty, at } };
                self.mk(rule, vec![d])
            }
            2 | 3 => {
                let i = (0..g.len().saturating_sub(1)).filter(|&i| g[i].ty == g[i + 1].ty).collect::<Vec<_>>();
                let i = self.pick(&i)?;
                let (x, y) = (g[i].name.clone(), g[i + 1].name.clone());
                let z = x.clone();
                let rule = if ms { NdRule::ContM { x, y, z } } else { NdRule::ContG { x, y, z } };
                self.mk(rule, vec![d])
            }
            4 => {
                if g.len() < 2 {
                    return None;
                }
                let k = self.rng.gen_range(0..g.len() - 1);
                self.mk(if ms { NdRule::GExM { k } } else { NdRule::ExG { k } }, vec![d])
            }
            5 if ms && l.len() >= 2 => {
                let k = self.rng.gen_range(0..l.len() - 1);
                self.mk(NdRule::ExM { k }, vec![d])
            }
            _ => {
                if g.is_empty() {
                    return None;
                }
                let to: Vec<Grade> = g.iter().map(|e| e.grade.clone()).collect::<Vec<_>>();
                let to = to.iter().map(|r| self.above(r)).collect();
                self.mk(if ms { NdRule::GSub { to } } else { NdRule::SubG { to } }, vec![d])
            }
        }
    }

    fn nd_pair_elim(&mut self, c: NdDeriv, depth: usize) -> Option<NdDeriv> {
        let g = c.concl.gctx().clone();
        let i = (0..g.len().saturating_sub(1)).filter(|&i| g[i].grade == g[i + 1].grade).collect::<Vec<_>>();
        let i = self.pick(&i)?;
        let (x, y) = (g[i].name.clone(), g[i + 1].name.clone());
        let s = self.nd_of_gtype(&GType::tensor(g[i].ty.clone(), g[i + 1].ty.clone()), depth - 1);
        let rule = if Frag::of(&c.concl) == Frag::Mixed { NdRule::TenEM { x, y } } else { NdRule::TenE { x, y } };
        self.mk(rule, vec![s, c])
    }

    fn nd_unit_elim(&mut self, c: NdDeriv, depth: usize) -> Option<NdDeriv> {
        let s = self.nd_of_gtype(&GType::J, depth - 1);
        let r = self.unit_grade();
        let at = self.rng.gen_range(0..=c.concl.gctx().len());
        let rule = if Frag::of(&c.concl) == Frag::Mixed { NdRule::UnitJEM { r, at } } else { NdRule::UnitJE { r, at } };
        self.mk(rule, vec![s, c])
    }

    fn nd_gt_step(&mut self, depth: usize) -> Option<NdDeriv> {
        match self.rng.gen_range(0..7) {
            0 => {
                let a = self.nd(Frag::Graded, depth - 1);
                let b = self.nd(Frag::Graded, depth - 1);
                self.mk(NdRule::TenI, vec![a, b])
            }
            1 => {
                let m = self.nd_closed(depth - 1)?;
                self.mk(NdRule::LinI, vec![m])
            }
            2 => {
                let c = self.nd(Frag::Graded, depth - 1);
                self.nd_pair_elim(c, depth)
            }
            3 => {
                let c = self.nd(Frag::Graded, depth - 1);
                self.nd_unit_elim(c, depth)
            }
            _ => {
                let c = self.nd(Frag::Graded, depth - 1);
                self.nd_structural(c)
            }
        }
    }

    fn nd_closed(&mut self, depth: usize) -> Option<NdDeriv> {
        if depth == 0 {
            return self.mk(NdRule::UnitII, vec![]);
        }
        match self.rng.gen_range(0..3) {
            0 => {
                let g = self.nd(Frag::Graded, depth - 1);
                let r = self.grade();
                self.mk(NdRule::GrdI { r }, vec![g])
            }
            1 => {
                let ty = self.ltype(1);
                self.nd_closed_of(&ty, depth)
            }
            _ => {
                let mut d = self.nd(Frag::Mixed, depth.saturating_sub(2));
                while let Some(x) = d.concl.linear_names().first().cloned() {
                    d = self.mk(NdRule::LolliI { x }, vec![d])?;
                }
                Some(d)
            }
        }
    }

    fn nd_closed_of(&mut self, ty: &LType, depth: usize) -> Option<NdDeriv> {
        match ty {
            LType::I => self.mk(NdRule::UnitII, vec![]),
            LType::Grd(r, x) if depth > 0 => {
                let g = self.nd_of_gtype(x, depth - 1);
                self.mk(NdRule::GrdI { r: r.clone() }, vec![g])
            }
            LType::Tensor(a, b) if depth > 0 => {
                let a = self.nd_closed_of(a, depth - 1)?;
                let b = self.nd_closed_of(b, depth - 1)?;
                self.mk(NdRule::TensorI, vec![a, b])
            }
            _ if depth > 0 => {
                let z = self.name("c");
                let id = self.mk(NdRule::IdG { x: z, ty: GType::lin(ty.clone()) }, vec![])?;
                self.mk(NdRule::LinE, vec![id])
            }
            _ => None,
        }
    }

    fn nd_mt_step(&mut self, depth: usize) -> Option<NdDeriv> {
        match self.rng.gen_range(0..14) {
            0 => {
                let a = self.nd(Frag::Mixed, depth - 1);
                let b = self.nd(Frag::Mixed, depth - 1);
                self.mk(NdRule::TensorI, vec![a, b])
            }
            1 => {
                let c = self.nd(Frag::Mixed, depth - 1);
                let e = self.pick(c.concl.lctx())?;
                self.mk(NdRule::LolliI { x: e.name }, vec![c])
            }
            2 => {
                // a beta redex: (\x. body) arg
                if depth < 2 {
                    return None;
                }
                let c = self.nd(Frag::Mixed, depth - 2);
                let e = self.pick(c.concl.lctx())?;
                let f = self.mk(NdRule::LolliI { x: e.name }, vec![c])?;
                let a = self.nd_of_ltype(&e.ty, depth - 1);
                self.mk(NdRule::LolliE, vec![f, a])
            }
            3 => {
                let a = self.nd(Frag::Mixed, depth - 1);
                let Judgment::MS { ty, .. } = &a.concl else { return None };
                let cod = self.ltype(1);
                let fx = self.name("f");
                let f = self.mk(NdRule::IdM { x: fx, ty: LType::lolli(ty.clone(), cod) }, vec![])?;
                self.mk(NdRule::LolliE, vec![f, a])
            }
            4 => {
                let c = self.nd(Frag::Mixed, depth - 1);
                let s = self.nd_of_ltype(&LType::I, depth - 1);
                let at = self.rng.gen_range(0..=c.concl.lctx().len());
                self.mk(NdRule::UnitIE { at }, vec![s, c])
            }
            5 => {
                let c = self.nd(Frag::Mixed, depth - 1);
                let l = c.concl.lctx().to_vec();
                if l.len() < 2 {
                    return None;
                }
                let i = self.rng.gen_range(0..l.len() - 1);
                let s = self.nd_of_ltype(&LType::tensor(l[i].ty.clone(), l[i + 1].ty.clone()), depth - 1);
                self.mk(NdRule::TensorE { x: l[i].name.clone(), y: l[i + 1].name.clone() }, vec![s, c])
            }
            6 => {
                let g = self.nd(Frag::Graded, depth - 1);
                let r = self.grade();
                self.mk(NdRule::GrdI { r }, vec![g])
            }
            7 => {
                let a = self.ltype(1);
                let s = self.nd_of_gtype(&GType::lin(a), depth - 1);
                self.mk(NdRule::LinE, vec![s])
            }
            8 => {
                let c = self.nd(Frag::Mixed, depth - 1);
                let e = self.pick(c.concl.gctx())?;
                let s = self.nd_of_ltype(&LType::grd(e.grade.clone(), e.ty.clone()), depth - 1);
                let at = self.rng.gen_range(0..=c.concl.lctx().len());
                self.mk(NdRule::GrdE { x: e.name, at }, vec![s, c])
            }
            9 => {
                let c = self.nd(Frag::Mixed, depth - 1);
                self.nd_pair_elim(c, depth)
            }
            10 => {
                let c = self.nd(Frag::Mixed, depth - 1);
                self.nd_unit_elim(c, depth)
            }
            _ => {
                let c = self.nd(Frag::Mixed, depth - 1);
                self.nd_structural(c)
            }
        }
    }

    pub fn nd_of_gtype(&mut self, ty: &GType, depth: usize) -> NdDeriv {
        let d = if depth == 0 || self.chance(0.3) {
            None
        } else {
            match ty {
                GType::J => self.mk(NdRule::UnitJI, vec![]),
                GType::Tensor(a, b) => {
                    let a = self.nd_of_gtype(a, depth - 1);
                    let b = self.nd_of_gtype(b, depth - 1);
                    self.mk(NdRule::TenI, vec![a, b])
                }
                GType::Lin(a) => self.nd_closed_of(a, depth - 1).and_then(|m| self.mk(NdRule::LinI, vec![m])),
                GType::Atom(_) => {
                    let inner = self.nd_of_gtype(ty, depth - 1);
                    self.nd_structural(inner)
                }
            }
        };
        d.unwrap_or_else(|| {
            let x = self.name("x");
            Deriv::leaf(self.sr, NdRule::IdG { x, ty: ty.clone() }).expect("axiom")
        })
    }

    pub fn nd_of_ltype(&mut self, ty: &LType, depth: usize) -> NdDeriv {
        let d = if depth == 0 || self.chance(0.3) {
            None
        } else {
            match ty {
                LType::I => self.mk(NdRule::UnitII, vec![]),
                LType::Tensor(a, b) => {
                    let a = self.nd_of_ltype(a, depth - 1);
                    let b = self.nd_of_ltype(b, depth - 1);
                    self.mk(NdRule::TensorI, vec![a, b])
                }
                LType::Grd(r, x) => {
                    let g = self.nd_of_gtype(x, depth - 1);
                    self.mk(NdRule::GrdI { r: r.clone() }, vec![g])
                }
                _ => {
                    let inner = self.nd_of_ltype(ty, depth - 1);
                    self.nd_structural(inner)
                }
            }
        };
        d.unwrap_or_else(|| {
            let x = self.name("a");
            Deriv::leaf(self.sr, NdRule::IdM { x, ty: ty.clone() }).expect("axiom")
        })
    }
}
