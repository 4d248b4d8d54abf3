//! Claim registry, batch verification and the summary table.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{ambient_invariants, perfectness_window_check, AbelianInvariants};
use crate::catalog::GroupFamily;
use crate::derived::expansion_identity_failures;
use crate::error::{Error, Result};
use crate::quotients::{
    free_quotient_certificate_gvb3, sg3_abelianization_certificate, sg3_as_quotient_of_sg4, verify_diagram_edge, Edge,
};
use crate::scripts::{compare_interiors, expected_survivors, replay, simplified_truncation, simplify};
use crate::word::Generator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Refuted,
    ExternallyCited,
    OutOfScope,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::ExternallyCited => "externally-cited",
            Verdict::OutOfScope => "out-of-scope",
        })
    }
}

/// How a claim depends on the strand count and the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scope {
    /// Once per selected group and strand count.
    PerGroupN,
    /// Once per selected group, strand count and window.
    PerGroupNWindow,
    /// Once per window.
    PerWindow,
    /// Once per strand count.
    PerN,
    /// Once per selected group.
    PerGroup,
}

/// One entry of the registry.
#[derive(Debug, Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    /// `None` for claims about both families.
    pub group: Option<GroupFamily>,
    pub statement: &'static str,
    scope: Scope,
}

pub const REGISTRY: &[Claim] = &[
    Claim {
        id: "ambient-abelianization",
        group: None,
        statement: "the abelianization of GVB_n and SG_n is Z x Z",
        scope: Scope::PerGroupN,
    },
    Claim {
        id: "expansion-identity",
        group: None,
        statement: "rewritten relators expand back to the conjugated ambient relators",
        scope: Scope::PerGroupNWindow,
    },
    Claim {
        id: "simplification",
        group: None,
        statement: "the simplified relator lists follow from the rewritten presentation",
        scope: Scope::PerGroupNWindow,
    },
    Claim {
        id: "gvb-fg",
        group: Some(GroupFamily::GVB),
        statement: "GVB_n' is finitely generated iff n >= 4, with rank at most 3n - 7 for n >= 5",
        scope: Scope::PerGroupNWindow,
    },
    Claim {
        id: "gvb-perfect",
        group: Some(GroupFamily::GVB),
        statement: "GVB_n' is perfect iff n >= 5",
        scope: Scope::PerGroupNWindow,
    },
    Claim {
        id: "sg-fg",
        group: Some(GroupFamily::SG),
        statement: "SG_n' is finitely generated iff n >= 5, with rank at most 2n - 4",
        scope: Scope::PerGroupNWindow,
    },
    Claim {
        id: "sg-perfect",
        group: Some(GroupFamily::SG),
        statement: "SG_n' is perfect iff n >= 5",
        scope: Scope::PerGroupNWindow,
    },
    Claim {
        id: "sg3-quotient",
        group: Some(GroupFamily::SG),
        statement: "SG_3' is SG_4' modulo alpha_3 and all beta_{m,3}",
        scope: Scope::PerWindow,
    },
    Claim {
        id: "ub-fg",
        group: Some(GroupFamily::SG),
        statement: "UB_3' and UB_4' are not finitely generated",
        scope: Scope::PerWindow,
    },
    Claim {
        id: "diagram",
        group: None,
        statement: "the quotient maps between the ambient groups",
        scope: Scope::PerN,
    },
    Claim {
        id: "finitely-presented",
        group: None,
        statement: "finite presentability of GVB_n' and SG_n'",
        scope: Scope::PerGroup,
    },
];

/// Result of one claim at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub group: Option<GroupFamily>,
    pub n: Option<i64>,
    pub window: Option<i64>,
    pub verdict: Verdict,
    /// Whether the property in question (finite generation, perfectness)
    /// holds at this point, for the summary table.
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub results: Vec<ClaimResult>,
}

impl Report {
    pub fn any_refuted(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Verdict::Refuted)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.any_refuted())
    }
}

/// Which claims and parameters to run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub groups: Vec<GroupFamily>,
    pub ns: Vec<i64>,
    pub windows: Vec<i64>,
    /// Claim ids; empty means all.
    pub claims: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
struct Task {
    claim: &'static Claim,
    group: Option<GroupFamily>,
    n: Option<i64>,
    window: Option<i64>,
}

fn tasks(config: &RunConfig) -> Result<Vec<Task>> {
    for id in &config.claims {
        if !REGISTRY.iter().any(|c| c.id == id) {
            return Err(Error::UnknownClaim(id.clone()));
        }
    }
    let mut out = Vec::new();
    for claim in REGISTRY {
        if !config.claims.is_empty() && !config.claims.iter().any(|c| c == claim.id) {
            continue;
        }
        let groups: Vec<GroupFamily> = config
            .groups
            .iter()
            .copied()
            .filter(|g| claim.group.is_none_or(|c| c == *g))
            .collect();
        if groups.is_empty() {
            continue;
        }
        let push = |out: &mut Vec<Task>, group, n, window| {
            out.push(Task {
                claim,
                group,
                n,
                window,
            })
        };
        match claim.scope {
            Scope::PerGroupN => {
                for &g in &groups {
                    for &n in &config.ns {
                        push(&mut out, Some(g), Some(n), None);
                    }
                }
            }
            Scope::PerGroupNWindow => {
                for &g in &groups {
                    for &n in &config.ns {
                        for &w in &config.windows {
                            push(&mut out, Some(g), Some(n), Some(w));
                        }
                    }
                }
            }
            Scope::PerWindow => {
                for &w in &config.windows {
                    push(&mut out, claim.group, None, Some(w));
                }
            }
            Scope::PerN => {
                for &n in config.ns.iter().filter(|n| (3..=5).contains(*n)) {
                    push(&mut out, None, Some(n), None);
                }
            }
            Scope::PerGroup => {
                for &g in &groups {
                    push(&mut out, Some(g), None, None);
                }
            }
        }
    }
    Ok(out)
}

fn verified(ok: bool) -> Verdict {
    if ok {
        Verdict::Verified
    } else {
        Verdict::Refuted
    }
}

fn z2() -> AbelianInvariants {
    AbelianInvariants {
        free_rank: 2,
        torsion: vec![],
    }
}

/// `(verdict, holds, detail)`; errors become refutations.
type Outcome = (Verdict, Option<bool>, String);

fn fin_gen_replay(script: &str, n: i64, window: i64, bound: usize) -> Result<Outcome> {
    let run = replay(script, n, window)?;
    let survivors = run.interior_survivors();
    let expected = expected_survivors(script, n, window);
    let ok = survivors.len() <= bound && expected.as_ref().is_none_or(|e| *e == survivors);
    let names: Vec<String> = survivors.iter().map(Generator::to_string).collect();
    Ok((
        verified(ok),
        Some(true),
        format!(
            "{} interior survivors (bound {bound}): {}",
            survivors.len(),
            names.join(" ")
        ),
    ))
}

fn sg3_certificate(window: i64) -> Result<(bool, String)> {
    let c = sg3_abelianization_certificate(window)?;
    let expected = (2 * (2 * (window - 2) + 1)) as usize;
    let ok = c.free_rank == expected && c.cross_check_rank == expected && c.torsion.is_empty();
    Ok((
        ok,
        format!(
            "SG_3' has a free abelian quotient of interior rank {} (expected {expected})",
            c.free_rank
        ),
    ))
}

fn evaluate(task: &Task) -> Result<Outcome> {
    let g = task.group;
    let n = task.n.unwrap_or(0);
    let w = task.window.unwrap_or(0);
    match task.claim.id {
        "ambient-abelianization" => {
            let inv = ambient_invariants(g.unwrap(), n)?;
            Ok((verified(inv == z2()), None, format!("abelianization {inv}")))
        }
        "expansion-identity" => {
            let failures = expansion_identity_failures(g.unwrap(), n, w)?;
            Ok((
                verified(failures.is_empty()),
                None,
                format!("{} failing instances", failures.len()),
            ))
        }
        "simplification" => {
            let group = g.unwrap();
            let run = simplify(group, n, w, false)?;
            let diff = compare_interiors(&run.presentation, &simplified_truncation(group, n, w)?);
            let detail = format!(
                "{} eliminations; {} replayed-only and {} published-only interior relators",
                run.eliminated,
                diff.only_replayed.len() + diff.generators_only_replayed.len(),
                diff.only_published.len() + diff.generators_only_published.len()
            );
            Ok((verified(diff.is_empty()), None, detail))
        }
        "gvb-fg" => match n {
            3 => {
                let c = free_quotient_certificate_gvb3(w)?;
                let ok = c.rank == (2 * (w - 2)) as usize && c.rank > 0;
                Ok((
                    verified(ok),
                    Some(false),
                    format!("free quotient of interior rank {}", c.rank),
                ))
            }
            4 => fin_gen_replay("gvb4-fin-gen", 4, w, 9),
            _ => fin_gen_replay("gvbn-fin-gen", n, w, (3 * n - 7) as usize),
        },
        "sg-fg" => match n {
            3 => {
                let (ok, detail) = sg3_certificate(w)?;
                Ok((verified(ok), Some(false), detail))
            }
            4 => {
                let q = sg3_as_quotient_of_sg4(w, None)?;
                let (ok, detail) = sg3_certificate(w)?;
                Ok((
                    verified(ok && q.matched),
                    Some(false),
                    format!("SG_4' maps onto SG_3'; {detail}"),
                ))
            }
            _ => fin_gen_replay("sgn-fin-gen", n, w, (2 * n - 4) as usize),
        },
        "gvb-perfect" => match n {
            3 => {
                let c = free_quotient_certificate_gvb3(w)?;
                Ok((
                    verified(c.abelian_rank > 0),
                    Some(false),
                    format!("free quotient has abelian rank {}", c.abelian_rank),
                ))
            }
            4 => Ok((
                Verdict::ExternallyCited,
                Some(false),
                "non-perfectness rests on an external argument".into(),
            )),
            _ => {
                let v = perfectness_window_check(GroupFamily::GVB, n, w)?;
                Ok((verified(v.perfect_on_interior), Some(true), v.to_string()))
            }
        },
        "sg-perfect" => match n {
            3 | 4 => {
                let (ok, detail) = sg3_certificate(w)?;
                let quotient_ok = n == 3 || sg3_as_quotient_of_sg4(w, None)?.matched;
                Ok((verified(ok && quotient_ok), Some(false), detail))
            }
            _ => {
                let v = perfectness_window_check(GroupFamily::SG, n, w)?;
                Ok((verified(v.perfect_on_interior), Some(true), v.to_string()))
            }
        },
        "sg3-quotient" => {
            let plain = sg3_as_quotient_of_sg4(w, None)?;
            let mutated = sg3_as_quotient_of_sg4(w, Some(&Generator::beta_j(0, 3)))?;
            let ok = plain.matched && !mutated.matched;
            Ok((
                verified(ok),
                None,
                format!("match {}, mutation detected {}", plain.matched, !mutated.matched),
            ))
        }
        "ub-fg" => {
            let edges = [3, 4]
                .iter()
                .map(|&n| verify_diagram_edge(Edge::Kappa, n))
                .collect::<Result<Vec<_>>>()?;
            let (ok, detail) = sg3_certificate(w)?;
            let quotient = sg3_as_quotient_of_sg4(w, None)?;
            let all = ok && quotient.matched && edges.iter().all(|e| e.passed());
            Ok((
                verified(all),
                Some(false),
                format!("UB_n maps onto SG_n for n = 3, 4; {detail}"),
            ))
        }
        "diagram" => {
            let verdicts = Edge::ALL
                .iter()
                .map(|&e| verify_diagram_edge(e, n))
                .collect::<Result<Vec<_>>>()?;
            let failed: Vec<String> = verdicts
                .iter()
                .filter(|v| !v.passed())
                .map(|v| v.edge.to_string())
                .collect();
            let detail = if failed.is_empty() {
                "all 8 edges match".to_string()
            } else {
                format!("failed: {}", failed.join(", "))
            };
            Ok((verified(failed.is_empty()), None, detail))
        }
        "finitely-presented" => Ok((Verdict::OutOfScope, None, "open".into())),
        other => Err(Error::UnknownClaim(other.to_string())),
    }
}

/// Runs the selected claims in parallel.
pub fn run(config: &RunConfig) -> Result<Report> {
    let tasks = tasks(config)?;
    let results = tasks
        .par_iter()
        .map(|t| {
            let (verdict, holds, detail) = evaluate(t).unwrap_or_else(|e| (Verdict::Refuted, None, e.to_string()));
            ClaimResult {
                claim: t.claim.id.to_string(),
                group: t.group,
                n: t.n,
                window: t.window,
                verdict,
                holds,
                detail,
            }
        })
        .collect();
    Ok(Report { results })
}

/// Summarizes `holds` over strand counts as e.g. `iff n >= 4 (n = 3..6)`.
fn summarize(word: &str, points: &BTreeMap<i64, (bool, bool)>) -> String {
    if points.is_empty() {
        return "-".into();
    }
    let ns: Vec<i64> = points.keys().copied().collect();
    let range = format!("n = {}..{}", ns[0], ns[ns.len() - 1]);
    let first_true = points.iter().find(|(_, (h, _))| *h).map(|(n, _)| *n);
    let monotone = points
        .iter()
        .all(|(n, (h, _))| first_true.map_or(!h, |t| (*n >= t) == *h));
    let mut text = match (monotone, first_true) {
        (true, Some(t)) if t == ns[0] => format!("{word} for all {range}"),
        (true, Some(t)) => format!("{word} iff n >= {t} ({range})"),
        (true, None) => format!("not {word} for {range}"),
        _ => points
            .iter()
            .map(|(n, (h, _))| format!("n={n}: {}", if *h { "yes" } else { "no" }))
            .collect::<Vec<_>>()
            .join(", "),
    };
    let cited: Vec<String> = points
        .iter()
        .filter(|(_, (_, c))| *c)
        .map(|(n, _)| format!("n={n}"))
        .collect();
    if !cited.is_empty() {
        text.push_str(&format!("; {} externally cited", cited.join(", ")));
    }
    text
}

/// The summary table followed by one line per result.
pub fn emit_table(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<6} | {:<36} | {:<52} | {}\n",
        "group", "finitely generated", "perfect", "finitely presented"
    ));
    out.push_str(&format!("{}\n", "-".repeat(6 + 36 + 52 + 30)));
    for (group, fg, perfect) in [
        (GroupFamily::GVB, "gvb-fg", "gvb-perfect"),
        (GroupFamily::SG, "sg-fg", "sg-perfect"),
    ] {
        if !report.results.iter().any(|r| r.group == Some(group)) {
            continue;
        }
        let collect = |id: &str| -> BTreeMap<i64, (bool, bool)> {
            let mut m = BTreeMap::new();
            for r in report
                .results
                .iter()
                .filter(|r| r.claim == id && r.verdict != Verdict::Refuted)
            {
                if let (Some(n), Some(h)) = (r.n, r.holds) {
                    m.insert(n, (h, r.verdict == Verdict::ExternallyCited));
                }
            }
            m
        };
        out.push_str(&format!(
            "{:<6} | {:<36} | {:<52} | {}\n",
            format!("{group}'"),
            summarize("f.g.", &collect(fg)),
            summarize("perfect", &collect(perfect)),
            "out-of-scope (open)"
        ));
    }
    out.push('\n');
    for r in &report.results {
        let group = r.group.map_or("-".to_string(), |g| g.to_string());
        let n = r.n.map_or("-".to_string(), |n| n.to_string());
        let w = r.window.map_or("-".to_string(), |w| w.to_string());
        out.push_str(&format!(
            "{:<24} {:<4} n={:<2} M={:<2} {:<17} {}\n",
            r.claim,
            group,
            n,
            w,
            r.verdict.to_string(),
            r.detail
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(groups: &[GroupFamily], claims: &[&str]) -> RunConfig {
        RunConfig {
            groups: groups.to_vec(),
            ns: vec![3, 4, 5],
            windows: vec![4],
            claims: claims.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn registry_ids_are_unique() {
        let mut ids: Vec<&str> = REGISTRY.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), REGISTRY.len());
    }

    #[test]
    fn unknown_claims_are_rejected() {
        assert!(matches!(
            run(&config(&[GroupFamily::SG], &["nope"])),
            Err(Error::UnknownClaim(_))
        ));
    }

    #[test]
    fn sg_summary_row() {
        let report = run(&config(&[GroupFamily::SG], &["sg-fg", "sg-perfect"])).unwrap();
        assert!(!report.any_refuted(), "{}", emit_table(&report));
        let table = emit_table(&report);
        assert!(table.contains("f.g. iff n >= 5 (n = 3..5)"), "{table}");
        assert!(table.contains("perfect iff n >= 5 (n = 3..5)"), "{table}");
        assert!(!table.contains("GVB'"));
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn gvb_summary_row() {
        let report = run(&config(&[GroupFamily::GVB], &["gvb-fg", "gvb-perfect"])).unwrap();
        let table = emit_table(&report);
        assert!(table.contains("f.g. iff n >= 4 (n = 3..5)"), "{table}");
        assert!(
            table.contains("perfect iff n >= 5 (n = 3..5); n=4 externally cited"),
            "{table}"
        );
    }

    #[test]
    fn results_keep_registry_order() {
        let report = run(&config(
            &[GroupFamily::GVB, GroupFamily::SG],
            &["finitely-presented", "ambient-abelianization"],
        ))
        .unwrap();
        let ids: Vec<&str> = report.results.iter().map(|r| r.claim.as_str()).collect();
        assert_eq!(ids[0], "ambient-abelianization");
        assert_eq!(ids.last(), Some(&"finitely-presented"));
        assert!(report
            .results
            .iter()
            .filter(|r| r.claim == "finitely-presented")
            .all(|r| r.verdict == Verdict::OutOfScope));
    }
}
