//! Named elimination scripts over truncated presentations.
//!
//! Each script walks outward from base generators and solves one relator
//! instance per eliminated generator. A step whose relator falls outside the
//! box is skipped; that can only happen near the boundary, and a failed step
//! on an interior generator aborts the replay.

use std::collections::BTreeSet;

use crate::catalog::GroupFamily;
use crate::derived::{raw_derived, rs_label, simplified_derived};
use crate::error::{Error, Result};
use crate::tietze::{Outcome, TruncatedPresentation};
use crate::word::{FamilyDecl, Generator, Word, ALPHA, BETA};

pub const INTERIOR_MARGIN: i64 = 2;

/// Names accepted by [`replay`].
pub const SCRIPTS: &[&str] = &[
    "simplify-gvb",
    "simplify-sg",
    "gvb4-fin-gen",
    "gvbn-fin-gen",
    "sgn-fin-gen",
    "gvb3-free-quotient",
];

/// Label of the instance of family `family` at the given bindings.
pub fn instance(family: &str, bindings: &[(&str, i64)]) -> String {
    let mut parts: Vec<String> = bindings.iter().map(|(n, v)| format!("{n}={v}")).collect();
    parts.sort();
    format!("{family}[{}]", parts.join(","))
}

/// A replayed script with its counters.
#[derive(Debug, Clone)]
pub struct ScriptRun {
    pub script: String,
    pub n: i64,
    pub presentation: TruncatedPresentation,
    pub eliminated: usize,
    pub skipped: usize,
    pub noops: usize,
}

impl ScriptRun {
    fn new(script: &str, n: i64, mut presentation: TruncatedPresentation, audit: bool) -> Self {
        if audit {
            presentation.enable_audit();
        }
        ScriptRun {
            script: script.to_string(),
            n,
            presentation,
            eliminated: 0,
            skipped: 0,
            noops: 0,
        }
    }

    fn step(&mut self, target: Generator, label: &str) -> Result<()> {
        let interior = self.presentation.is_interior(&target);
        match self.presentation.eliminate(&target, label) {
            Ok(Outcome::Eliminated) => self.eliminated += 1,
            Ok(Outcome::NoOp) => self.noops += 1,
            Ok(Outcome::Skipped) if !interior => self.skipped += 1,
            Ok(Outcome::Skipped) => {
                return Err(self.fail(
                    label,
                    format!("relator for interior generator {target} is outside the box"),
                ))
            }
            Err(e) if !interior => {
                self.skipped += 1;
                self.presentation.note(format!("skip {target} via {label}: {e}"));
            }
            Err(e) => return Err(self.fail(label, e.to_string())),
        }
        Ok(())
    }

    fn fail(&self, step: &str, reason: String) -> Error {
        Error::Replay {
            script: self.script.clone(),
            step: step.to_string(),
            reason,
        }
    }

    pub fn interior_survivors(&self) -> BTreeSet<Generator> {
        self.presentation.interior_generators()
    }
}

/// `1, 2, ..., m` followed by `-1, -2, ..., -m`.
fn outward(m: i64) -> impl Iterator<Item = i64> {
    (1..=m).chain((1..=m).map(|v| -v))
}

fn declare_renamed(t: &mut TruncatedPresentation, n: i64) {
    t.declare(FamilyDecl::new(ALPHA, vec![Some((3, n - 1))]));
    t.declare(FamilyDecl::new(BETA, vec![None, Some((3, n - 1))]));
}

/// Replays the simplification of the raw presentation of `GVB_n'` or `SG_n'`.
pub fn simplify(group: GroupFamily, n: i64, window: i64, audit: bool) -> Result<ScriptRun> {
    let raw = raw_derived(group, n)?;
    let name = format!("simplify-{}", group.name().to_lowercase());
    let mut run = ScriptRun::new(
        &name,
        n,
        TruncatedPresentation::from_schema(&raw, window, INTERIOR_MARGIN),
        audit,
    );
    run.eliminated += run.presentation.kill_unit_relators();
    let m_range = -window..=window;
    let r1 = rs_label("r1");
    let r2 = rs_label("r2");
    let r3 = rs_label("r3");
    // β_{m,k,j} = β_{m,0,j} for j >= 3
    for j in 3..n {
        for m in m_range.clone() {
            for k in outward(window) {
                let at = if k > 0 { k - 1 } else { k };
                run.step(
                    Generator::beta(m, k, j),
                    &instance(&r2, &[("i", 1), ("j", j), ("m", m), ("k", at)]),
                )?;
            }
        }
    }
    // α_{m,k,i} = α_{m,0,i} for i >= 3
    for i in 3..n {
        for m in m_range.clone() {
            for k in outward(window) {
                let at = if k > 0 { k - 1 } else { k };
                run.step(
                    Generator::alpha(m, k, i),
                    &instance(&r3, &[("i", i), ("j", 1), ("m", m), ("k", at)]),
                )?;
            }
        }
    }
    // α_{m,0,j} = α_{0,0,j} for j >= 3
    for j in 3..n {
        for m in outward(window) {
            let at = if m > 0 { m - 1 } else { m };
            run.step(
                Generator::alpha(m, 0, j),
                &instance(&r1, &[("i", 1), ("j", j), ("m", at), ("k", 0)]),
            )?;
        }
    }
    if group == GroupFamily::SG {
        let r8 = rs_label("r8");
        for m in m_range.clone() {
            for k in outward(window) {
                let at = if k > 0 { k - 1 } else { k };
                run.step(
                    Generator::alpha(m, k, 1),
                    &instance(&r8, &[("i", 1), ("m", m), ("k", at)]),
                )?;
            }
        }
    }
    declare_renamed(&mut run.presentation, n);
    for j in 3..n {
        run.presentation
            .rename(&Generator::alpha(0, 0, j), &Generator::alpha_j(j))?;
        for m in m_range.clone() {
            run.presentation
                .rename(&Generator::beta(m, 0, j), &Generator::beta_j(m, j))?;
        }
    }
    run.eliminated += run.presentation.kill_unit_relators();
    Ok(run)
}

/// The published simplified presentation, truncated, with unit relators removed.
pub fn simplified_truncation(group: GroupFamily, n: i64, window: i64) -> Result<TruncatedPresentation> {
    let mut t = TruncatedPresentation::from_schema(&simplified_derived(group, n)?, window, INTERIOR_MARGIN);
    t.kill_unit_relators();
    Ok(t)
}

/// Differences between a replayed simplification and the published list on the interior.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InteriorDiff {
    pub only_replayed: BTreeSet<Word>,
    pub only_published: BTreeSet<Word>,
    pub generators_only_replayed: BTreeSet<Generator>,
    pub generators_only_published: BTreeSet<Generator>,
}

impl InteriorDiff {
    pub fn is_empty(&self) -> bool {
        self.only_replayed.is_empty()
            && self.only_published.is_empty()
            && self.generators_only_replayed.is_empty()
            && self.generators_only_published.is_empty()
    }
}

pub fn compare_interiors(replayed: &TruncatedPresentation, published: &TruncatedPresentation) -> InteriorDiff {
    let (a, b) = (replayed.interior_relators(), published.interior_relators());
    let (ga, gb) = (replayed.interior_generators(), published.interior_generators());
    InteriorDiff {
        only_replayed: a.difference(&b).cloned().collect(),
        only_published: b.difference(&a).cloned().collect(),
        generators_only_replayed: ga.difference(&gb).cloned().collect(),
        generators_only_published: gb.difference(&ga).cloned().collect(),
    }
}

fn require(script: &str, ok: bool, n: i64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Replay {
            script: script.to_string(),
            step: "precondition".to_string(),
            reason: format!("not applicable at n = {n}"),
        })
    }
}

fn a2(m: i64, k: i64) -> Generator {
    Generator::alpha(m, k, 2)
}

fn b2(m: i64, k: i64) -> Generator {
    Generator::beta(m, k, 2)
}

/// Reduces `GVB_4'` to nine generators.
pub fn gvb4_fin_gen(window: i64, audit: bool) -> Result<ScriptRun> {
    let mut run = ScriptRun::new(
        "gvb4-fin-gen",
        4,
        simplified_truncation(GroupFamily::GVB, 4, window)?,
        audit,
    );
    let w = window;
    // β_{m+1,3} = β_{m,3} α_{m,1,1}
    for m in outward(w) {
        let at = if m > 0 { m - 1 } else { m };
        run.step(
            Generator::beta_j(m, 3),
            &instance("g6", &[("j", 3), ("m", at), ("k", 0)]),
        )?;
    }
    for m in -w..=w {
        for k in -w..=w {
            run.step(b2(m, k), &instance("g20", &[("m", m - 2), ("k", k)]))?;
        }
    }
    for m in -w..=w {
        for k in 3..=w {
            run.step(a2(m, k), &instance("g13", &[("m", m + 2), ("k", k - 3)]))?;
        }
        for k in (-w..=-1).rev() {
            run.step(a2(m, k), &instance("g13", &[("m", m + 2), ("k", k)]))?;
        }
    }
    for k in 0..=2 {
        for m in 2..=w {
            run.step(a2(m, k), &instance("g11", &[("m", m - 2), ("k", k)]))?;
        }
        for m in (-w..=-1).rev() {
            run.step(a2(m, k), &instance("g11", &[("m", m), ("k", k)]))?;
        }
    }
    for k in -w..=w {
        if k == 0 {
            continue;
        }
        for m in outward(w) {
            let at = if m > 0 { m - 1 } else { m };
            run.step(
                Generator::alpha(m, k, 1),
                &instance("g1", &[("j", 3), ("m", at), ("k", k)]),
            )?;
        }
    }
    for k in 2..=w {
        run.step(Generator::alpha(0, k, 1), &instance("g16", &[("m", -1), ("k", k - 1)]))?;
    }
    for k in (-w..=-1).rev() {
        run.step(Generator::alpha(0, k, 1), &instance("g16", &[("m", -1), ("k", k)]))?;
    }
    Ok(run)
}

/// Reduces `GVB_n'`, `n >= 5`, to `3n - 7` generators.
pub fn gvbn_fin_gen(n: i64, window: i64, audit: bool) -> Result<ScriptRun> {
    require("gvbn-fin-gen", n >= 5, n)?;
    let mut run = ScriptRun::new(
        "gvbn-fin-gen",
        n,
        simplified_truncation(GroupFamily::GVB, n, window)?,
        audit,
    );
    let w = window;
    for m in -w..=w {
        for k in -w..=w {
            run.step(b2(m, k), &instance("g16", &[("m", m - 2), ("k", k)]))?;
        }
    }
    for m in -w..=w {
        for k in outward(w) {
            let at = if k > 0 { k - 1 } else { k };
            run.step(a2(m, k), &instance("g7", &[("j", 4), ("m", m), ("k", at)]))?;
        }
    }
    for m in 2..=w {
        run.step(a2(m, 0), &instance("g11", &[("m", m - 2), ("k", 0)]))?;
    }
    for m in (-w..=-1).rev() {
        run.step(a2(m, 0), &instance("g11", &[("m", m), ("k", 0)]))?;
    }
    for m in -w..=w {
        for k in outward(w) {
            let at = if k > 0 { k - 1 } else { k };
            run.step(
                Generator::alpha(m, k, 1),
                &instance("g6", &[("j", 3), ("m", m), ("k", at)]),
            )?;
        }
    }
    // β_{m,3} through the commutation of α_{m,1,1} with α_3, then β_{m,j}
    // for j >= 4 through the k = 0 instances of g6
    for m in 2..=w {
        run.step(
            Generator::beta_j(m, 3),
            &instance("g1", &[("j", 3), ("m", m - 2), ("k", 1)]),
        )?;
    }
    for m in (-w..=-1).rev() {
        run.step(
            Generator::beta_j(m, 3),
            &instance("g1", &[("j", 3), ("m", m), ("k", 1)]),
        )?;
    }
    for j in 4..n {
        for m in outward(w) {
            if m == 1 {
                continue;
            }
            let at = if m > 0 { m - 1 } else { m };
            run.step(
                Generator::beta_j(m, j),
                &instance("g6", &[("j", j), ("m", at), ("k", 0)]),
            )?;
        }
    }
    Ok(run)
}

/// Reduces `SG_n'`, `n >= 5`, to `2n - 4` generators.
pub fn sgn_fin_gen(n: i64, window: i64, audit: bool) -> Result<ScriptRun> {
    require("sgn-fin-gen", n >= 5, n)?;
    let mut run = ScriptRun::new(
        "sgn-fin-gen",
        n,
        simplified_truncation(GroupFamily::SG, n, window)?,
        audit,
    );
    let w = window;
    for k in -w..=w {
        for m in outward(w) {
            let at = if m > 0 { m - 1 } else { m };
            run.step(b2(m, k), &instance("s7", &[("i", 4), ("m", at), ("k", k)]))?;
        }
    }
    for k in outward(w) {
        let at = if k > 0 { k - 1 } else { k };
        run.step(b2(0, k), &instance("s3", &[("j", 4), ("m", 0), ("k", at)]))?;
    }
    for j in 3..n {
        for m in outward(w) {
            let at = if m > 0 { m - 1 } else { m };
            run.step(Generator::beta_j(m, j), &instance("s5", &[("j", j), ("m", at)]))?;
        }
    }
    for m in -w..=w {
        for k in outward(w) {
            let at = if k > 0 { k - 1 } else { k };
            run.step(a2(m, k), &instance("s6", &[("j", 4), ("m", m), ("k", at)]))?;
        }
    }
    for m in 2..=w {
        run.step(a2(m, 0), &instance("s9", &[("m", m - 2), ("k", 0)]))?;
    }
    for m in (-w..=-1).rev() {
        run.step(a2(m, 0), &instance("s9", &[("m", m), ("k", 0)]))?;
    }
    run.step(b2(0, 0), &instance("s12", &[("m", -2), ("k", 0)]))?;
    Ok(run)
}

/// Passes from `GVB_3'` to a quotient that is free on the interior.
pub fn gvb3_free_quotient(window: i64, audit: bool) -> Result<ScriptRun> {
    gvb3_free_quotient_stages(window, 4, audit)
}

/// The first `stages` stages of [`gvb3_free_quotient`]: removing `β_{m,k,2}`,
/// passing to the quotient by `w_{m,k}`, then by `v_{m,k}`, then solving for `α_{1,k,1}`.
pub fn gvb3_free_quotient_stages(window: i64, stages: usize, audit: bool) -> Result<ScriptRun> {
    let mut run = ScriptRun::new(
        "gvb3-free-quotient",
        3,
        simplified_truncation(GroupFamily::GVB, 3, window)?,
        audit,
    );
    let w = window;
    for m in -w..=w {
        for k in -w..=w {
            run.step(b2(m, k), &instance("g19", &[("m", m), ("k", k)]))?;
        }
    }
    if stages < 2 {
        return Ok(run);
    }
    for m in -w..w {
        for k in -w..=w {
            let word = Word::from_letters([(Generator::alpha(m, k, 1), 1), (a2(m + 1, k), 1)]);
            run.presentation
                .add_relator(&instance("W", &[("m", m), ("k", k)]), word)?;
        }
    }
    for m in -w..=w {
        for k in -w..=w {
            run.step(a2(m, k), &instance("W", &[("m", m - 1), ("k", k)]))?;
        }
    }
    if stages < 3 {
        return Ok(run);
    }
    for m in -w + 1..w {
        for k in -w..=w {
            let word = Word::from_letters([(Generator::alpha(m + 1, k, 1), -1), (Generator::alpha(m - 1, k, 1), 1)]);
            run.presentation
                .add_relator(&instance("V", &[("m", m), ("k", k)]), word)?;
        }
    }
    for k in -w..=w {
        for m in 2..=w {
            run.step(Generator::alpha(m, k, 1), &instance("V", &[("m", m - 1), ("k", k)]))?;
        }
        for m in (-w..=-1).rev() {
            run.step(Generator::alpha(m, k, 1), &instance("V", &[("m", m + 1), ("k", k)]))?;
        }
    }
    if stages < 4 {
        return Ok(run);
    }
    for k in -w..=w {
        run.step(Generator::alpha(1, k, 1), &instance("g10", &[("m", 0), ("k", k)]))?;
    }
    run.eliminated += run.presentation.kill_unit_relators();
    Ok(run)
}

/// The interior generators a script is expected to leave.
pub fn expected_survivors(script: &str, n: i64, window: i64) -> Option<BTreeSet<Generator>> {
    let r = window - INTERIOR_MARGIN;
    let mut out = BTreeSet::new();
    match script {
        "gvb4-fin-gen" if n == 4 => {
            for k in 0..=2 {
                out.insert(a2(0, k));
                out.insert(a2(1, k));
            }
            out.insert(Generator::alpha_j(3));
            out.insert(Generator::beta_j(0, 3));
            out.insert(Generator::alpha(0, 1, 1));
        }
        "gvbn-fin-gen" | "sgn-fin-gen" if n >= 5 => {
            out.insert(a2(0, 0));
            out.insert(a2(1, 0));
            for j in 3..n {
                out.insert(Generator::alpha_j(j));
                out.insert(Generator::beta_j(0, j));
                if script == "gvbn-fin-gen" {
                    out.insert(Generator::beta_j(1, j));
                }
            }
        }
        "gvb3-free-quotient" if n == 3 => {
            for k in -r..=r {
                if k != 0 {
                    out.insert(Generator::alpha(0, k, 1));
                }
            }
        }
        _ => return None,
    }
    Some(out)
}

/// Runs the script called `name`.
pub fn replay(name: &str, n: i64, window: i64) -> Result<ScriptRun> {
    replay_with(name, n, window, false)
}

/// Runs the script called `name`, optionally checking abelian invariants after every step.
pub fn replay_with(name: &str, n: i64, window: i64, audit: bool) -> Result<ScriptRun> {
    match name {
        "simplify-gvb" => simplify(GroupFamily::GVB, n, window, audit),
        "simplify-sg" => simplify(GroupFamily::SG, n, window, audit),
        "gvb4-fin-gen" => {
            require(name, n == 4, n)?;
            gvb4_fin_gen(window, audit)
        }
        "gvbn-fin-gen" => gvbn_fin_gen(n, window, audit),
        "sgn-fin-gen" => sgn_fin_gen(n, window, audit),
        "gvb3-free-quotient" => {
            require(name, n == 3, n)?;
            gvb3_free_quotient(window, audit)
        }
        _ => Err(Error::UnknownScript(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_labels_sort_names() {
        assert_eq!(
            instance("rs.r2", &[("i", 1), ("j", 3), ("m", 0), ("k", -1)]),
            "rs.r2[i=1,j=3,k=-1,m=0]"
        );
    }

    #[test]
    fn simplification_reproduces_published_lists() {
        for group in [GroupFamily::GVB, GroupFamily::SG] {
            for n in 3..=5 {
                let run = simplify(group, n, 4, false).unwrap();
                let published = simplified_truncation(group, n, 4).unwrap();
                assert!(!published.interior_relators().is_empty() || n == 3);
                let diff = compare_interiors(&run.presentation, &published);
                assert!(diff.is_empty(), "{group} n={n}: {diff:#?}");
            }
        }
    }

    #[test]
    fn fin_gen_scripts_leave_expected_survivors() {
        for (script, n, window) in [
            ("gvb4-fin-gen", 4, 5),
            ("gvbn-fin-gen", 5, 5),
            ("gvbn-fin-gen", 6, 4),
            ("sgn-fin-gen", 5, 5),
            ("sgn-fin-gen", 6, 4),
            ("gvb3-free-quotient", 3, 4),
        ] {
            let run = replay(script, n, window).unwrap();
            let expected = expected_survivors(script, n, window).unwrap();
            assert_eq!(run.interior_survivors(), expected, "{script} n={n}");
            if script == "gvb3-free-quotient" {
                assert!(run.presentation.interior_relators().is_empty());
            }
        }
    }

    #[test]
    fn eliminations_preserve_abelian_invariants() {
        for (script, n) in [
            ("gvb4-fin-gen", 4),
            ("sgn-fin-gen", 5),
            ("gvb3-free-quotient", 3),
            ("simplify-sg", 4),
        ] {
            let run = replay_with(script, n, 3, true).unwrap();
            let audit = run.presentation.audit().unwrap();
            assert!(audit.checks > 0);
            assert!(audit.failures.is_empty(), "{script}: {:?}", audit.failures);
        }
    }

    #[test]
    fn replay_rejects_bad_requests() {
        assert!(matches!(replay("nope", 4, 3), Err(Error::UnknownScript(_))));
        assert!(matches!(replay("gvb4-fin-gen", 5, 3), Err(Error::Replay { .. })));
        assert!(matches!(replay("sgn-fin-gen", 4, 3), Err(Error::Replay { .. })));
    }
}
