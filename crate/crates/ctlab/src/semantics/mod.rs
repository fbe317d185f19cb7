//! Satisfaction over causal teams (⊨^c) and generalized causal teams (⊨^g).

mod direct;
mod table;

pub use table::{Mask, Table, Universe, MAX_UNIVERSE};

use crate::error::{Error, Result};
use crate::intervention::Intervened;
use crate::model::{Assignment, CausalTeam, FunctionSystem, GeneralizedTeam, Signature, Team};
use crate::syntax::{Formula, Language};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Causal,
    Generalized,
}

impl std::str::FromStr for Semantics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c" | "causal" => Ok(Semantics::Causal),
            "g" | "generalized" => Ok(Semantics::Generalized),
            _ => Err(Error::Invalid(format!("unknown semantics `{s}`"))),
        }
    }
}

/// Evaluation settings for the direct evaluator.
#[derive(Clone, Debug)]
pub struct SatContext {
    /// Tensor splits that must enumerate subteams refuse teams larger than
    /// this.
    pub team_cap: usize,
    /// Split `a \/ b` with a CO side in one pass using flatness. Off means
    /// every split is enumerated.
    pub flat_shortcut: bool,
    /// Evaluate formulas that mix dependence atoms and global disjunction.
    pub allow_mixed: bool,
}

impl Default for SatContext {
    fn default() -> Self {
        SatContext { team_cap: 12, flat_shortcut: true, allow_mixed: false }
    }
}

fn precheck(sig: &Signature, f: &Formula, ctx: &SatContext) -> Result<()> {
    f.check(sig)?;
    if !ctx.allow_mixed && f.language() == Language::Mixed {
        return Err(Error::Language("formula uses both dep atoms and global disjunction".into()));
    }
    Ok(())
}

/// T ⊨^g φ.
pub fn satisfies_g(sig: &Signature, t: &GeneralizedTeam, f: &Formula, ctx: &SatContext) -> Result<bool> {
    precheck(sig, f, ctx)?;
    let mut ev = direct::Generalized::new(ctx);
    let ids = ev.intern(t);
    let r = ev.sat(&ids, f);
    if ev.over_budget {
        return Err(Error::Budget(format!("tensor split over more than {} members", ctx.team_cap)));
    }
    Ok(r)
}

/// T ⊨^c φ.
pub fn satisfies_c(sig: &Signature, t: &CausalTeam, f: &Formula, ctx: &SatContext) -> Result<bool> {
    precheck(sig, f, ctx)?;
    let mut over = false;
    let r = direct::sat_causal(ctx, t, f, &mut over);
    if over {
        return Err(Error::Budget(format!("tensor split over more than {} rows", ctx.team_cap)));
    }
    Ok(r)
}

/// Dispatch on the kind of team: causal teams use ⊨^c, generalized ones ⊨^g.
pub fn satisfies(sig: &Signature, t: &Team, f: &Formula, ctx: &SatContext) -> Result<bool> {
    match t {
        Team::Causal(t) => satisfies_c(sig, t, f, ctx),
        Team::Generalized(t) => satisfies_g(sig, t, f, ctx),
    }
}

/// {(s, F)} ⊨ φ. On a singleton the tensor disjunction is classical and
/// dependence atoms are trivially true.
pub fn eval_point(s: &Assignment, f: &FunctionSystem, phi: &Formula) -> bool {
    match phi {
        Formula::Eq(v, x) => s.get(*v) == *x,
        Formula::Dep(..) => true,
        Formula::Neg(a) => !eval_point(s, f, a),
        Formula::And(a, b) => eval_point(s, f, a) && eval_point(s, f, b),
        Formula::Or(a, b) | Formula::GlobalOr(a, b) => eval_point(s, f, a) || eval_point(s, f, b),
        Formula::Cf(iv, a) => {
            if !iv.is_consistent() {
                return true;
            }
            let i = Intervened::new(f, iv).expect("consistent and recursive");
            eval_point(&i.apply(s), &i.law, a)
        }
    }
}

/// Whether satisfaction of `f` reduces to its singletons on every team in
/// `scope`.
pub fn is_flat_on(sig: &Signature, f: &Formula, scope: &[GeneralizedTeam], ctx: &SatContext) -> Result<bool> {
    for t in scope {
        let whole = satisfies_g(sig, t, f, ctx)?;
        let each = t.members().iter().all(|(s, g)| eval_point(s, g, f));
        if whole != each {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive flatness check over every team of the signature, through the
/// table evaluator.
pub fn is_flat(sig: &Signature, f: &Formula, semantics: Semantics) -> Result<bool> {
    Ok(Universe::new(sig)?.is_flat(f, semantics))
}

/// Bounded entailment over every team with at most `max_rows` members.
pub fn entails_bounded(
    sig: &Signature,
    gamma: &[Formula],
    psi: &Formula,
    max_rows: usize,
    semantics: Semantics,
) -> Result<bool> {
    for f in gamma.iter().chain(std::iter::once(psi)) {
        f.check(sig)?;
    }
    Ok(Universe::new(sig)?.entails_bounded(gamma, psi, semantics, max_rows))
}
