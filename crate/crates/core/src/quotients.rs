//! Quotient maps between the ambient groups and certificates for the derived subgroups.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::abelian::abelianize;
use crate::catalog::{catalog, relator_text, GroupFamily};
use crate::error::{Error, Result};
use crate::parser::parse_presentation;
use crate::schema::{canonical_set, RelatorSchema};
use crate::scripts::{
    compare_interiors, expected_survivors, gvb3_free_quotient, instance, simplified_truncation, InteriorDiff,
};
use crate::tietze::TruncatedPresentation;
use crate::word::{Generator, Word, RHO, SIGMA};

/// The surjections between the ambient groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Edge {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Omega,
    Zeta,
    Xi,
    Kappa,
}

impl Edge {
    pub const ALL: [Edge; 8] = [
        Edge::Alpha,
        Edge::Beta,
        Edge::Gamma,
        Edge::Delta,
        Edge::Omega,
        Edge::Zeta,
        Edge::Xi,
        Edge::Kappa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Edge::Alpha => "alpha",
            Edge::Beta => "beta",
            Edge::Gamma => "gamma",
            Edge::Delta => "delta",
            Edge::Omega => "omega",
            Edge::Zeta => "zeta",
            Edge::Xi => "xi",
            Edge::Kappa => "kappa",
        }
    }

    fn greek(self) -> &'static str {
        match self {
            Edge::Alpha => "α",
            Edge::Beta => "β",
            Edge::Gamma => "γ",
            Edge::Delta => "δ",
            Edge::Omega => "ω",
            Edge::Zeta => "ζ",
            Edge::Xi => "ξ",
            Edge::Kappa => "κ",
        }
    }

    pub fn source(self) -> GroupFamily {
        match self {
            Edge::Alpha | Edge::Gamma => GroupFamily::GVB,
            Edge::Beta => GroupFamily::B,
            Edge::Delta | Edge::Zeta => GroupFamily::VB,
            Edge::Omega => GroupFamily::SG,
            Edge::Xi | Edge::Kappa => GroupFamily::UB,
        }
    }

    pub fn target(self) -> GroupFamily {
        match self {
            Edge::Alpha | Edge::Omega => GroupFamily::B,
            Edge::Beta | Edge::Delta => GroupFamily::S,
            Edge::Gamma => GroupFamily::VB,
            Edge::Zeta => GroupFamily::WB,
            Edge::Xi => GroupFamily::GVB,
            Edge::Kappa => GroupFamily::SG,
        }
    }

    /// Labels of the relator families generating the kernel.
    pub fn kernel(self) -> &'static [&'static str] {
        match self {
            Edge::Alpha | Edge::Delta | Edge::Omega => &["rho"],
            Edge::Beta | Edge::Gamma => &["sq"],
            Edge::Zeta => &["wb"],
            Edge::Xi => &["r6", "r7", "r5"],
            Edge::Kappa => &["r6", "r7", "r8"],
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Edge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Edge::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s) || e.greek() == s)
            .ok_or_else(|| Error::UnknownEdge(s.to_string()))
    }
}

fn kernel_relators(edge: Edge, n: i64) -> Result<Vec<RelatorSchema>> {
    let mut text = format!("group K n={n}\ngen s arity 1 range 1..n-1\ngen r arity 1 range 1..n-1\n");
    for label in edge.kernel() {
        let body = match *label {
            "rho" => "forall i : r[i]",
            other => relator_text(other).expect("kernel relators come from the catalog"),
        };
        text.push_str(&format!("rel {label} {body}\n"));
    }
    Ok(parse_presentation(&text)?.relators)
}

/// A permutation of `1..=n` stored 0-based as images.
type Perm = Vec<usize>;

fn transposition(n: usize, i: usize) -> Perm {
    let mut p: Perm = (0..n).collect();
    p.swap(i - 1, i);
    p
}

/// Image of `w` under a map sending each letter to a permutation; products
/// are composed left to right.
fn permutation_image(w: &Word, n: usize, image: impl Fn(&Generator) -> Perm) -> Perm {
    let mut acc: Perm = (0..n).collect();
    for (g, e) in w.letters() {
        let p = image(g);
        let p = if e > 0 {
            p
        } else {
            let mut inv = vec![0; n];
            for (i, &j) in p.iter().enumerate() {
                inv[j] = i;
            }
            inv
        };
        acc = acc.iter().map(|&x| p[x]).collect();
    }
    acc
}

/// Verdict on one edge.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeVerdict {
    pub edge: Edge,
    pub n: i64,
    pub matched: bool,
    pub only_source: Vec<String>,
    pub only_target: Vec<String>,
    /// For edges landing in `S_n`: whether every relator maps to the identity permutation.
    pub permutation_check: Option<bool>,
    pub transcript: Vec<String>,
}

impl EdgeVerdict {
    pub fn passed(&self) -> bool {
        self.matched && self.permutation_check != Some(false)
    }
}

/// Checks that the source presentation plus the kernel relators is Tietze
/// equivalent to the target presentation.
pub fn verify_diagram_edge(edge: Edge, n: i64) -> Result<EdgeVerdict> {
    let source = catalog(edge.source(), n)?;
    let quotient = source.quotient_by(&kernel_relators(edge, n)?)?;
    let mut lhs = TruncatedPresentation::from_schema(&quotient, 0, 0);
    let mut rhs = TruncatedPresentation::from_schema(&catalog(edge.target(), n)?, 0, 0);
    lhs.kill_unit_relators();
    if edge == Edge::Gamma {
        // ρ_{i+1} is conjugate to ρ_i through r7; with σ_i^2 = 1 the relator r6 then collapses
        for t in [&mut lhs, &mut rhs] {
            for i in 1..n - 1 {
                t.eliminate(&Generator::rho(i + 1), &instance("r7", &[("i", i)]))?;
            }
            let sigmas: BTreeSet<Generator> = (1..n).map(Generator::sigma).collect();
            t.reduce_involutions(&sigmas)?;
        }
    }
    let a = canonical_set(lhs.relators().map(|(_, w)| w));
    let b = canonical_set(rhs.relators().map(|(_, w)| w));
    let gens_match = lhs.generators() == rhs.generators();
    let only_source: Vec<String> = a.difference(&b).map(|w| w.to_string()).collect();
    let only_target: Vec<String> = b.difference(&a).map(|w| w.to_string()).collect();
    let permutation_check = (edge.target() == GroupFamily::S).then(|| {
        let size = n as usize;
        let words: Vec<Word> = quotient
            .instances(0)
            .unwrap_or_default()
            .into_iter()
            .map(|i| i.word)
            .collect();
        let identity: Perm = (0..size).collect();
        let through_edge = words.iter().all(|w| {
            permutation_image(w, size, |g| match g.family {
                SIGMA => transposition(size, g.indices[0] as usize),
                _ => identity.clone(),
            }) == identity
        });
        // ρ_i may also go to the transposition (i, i+1) on the source relators
        let source_words: Vec<Word> = source
            .instances(0)
            .unwrap_or_default()
            .into_iter()
            .map(|i| i.word)
            .collect();
        let both_transpositions = source_words.iter().all(|w| {
            permutation_image(w, size, |g| match g.family {
                SIGMA | RHO => transposition(size, g.indices[0] as usize),
                _ => identity.clone(),
            }) == identity
        });
        through_edge && both_transpositions
    });
    Ok(EdgeVerdict {
        edge,
        n,
        matched: gens_match && only_source.is_empty() && only_target.is_empty(),
        only_source,
        only_target,
        permutation_check,
        transcript: lhs.transcript().to_vec(),
    })
}

/// A surjection from a truncation of `GVB_3'` onto a group free on the interior.
#[derive(Debug, Clone, Serialize)]
pub struct FreeQuotientCertificate {
    pub window: i64,
    pub free_on: Vec<String>,
    pub rank: usize,
    /// Rank of the free generators in the abelianization of the quotient.
    pub abelian_rank: usize,
    pub transcript: Vec<String>,
}

pub fn free_quotient_certificate_gvb3(window: i64) -> Result<FreeQuotientCertificate> {
    let run = gvb3_free_quotient(window, false)?;
    let refuse = |reason: String| Error::Replay {
        script: run.script.clone(),
        step: "certificate".into(),
        reason,
    };
    let t = &run.presentation;
    if let Some(w) = t.interior_relators().into_iter().next() {
        return Err(refuse(format!("relator {w} survives on interior generators")));
    }
    let survivors = t.interior_generators();
    if Some(&survivors) != expected_survivors(&run.script, 3, window).as_ref() {
        return Err(refuse(format!("unexpected interior generators {survivors:?}")));
    }
    let free_on: Vec<Generator> = survivors.into_iter().collect();
    let abelian_rank = abelianize(t).rank_of(&free_on);
    Ok(FreeQuotientCertificate {
        window,
        rank: free_on.len(),
        abelian_rank,
        free_on: free_on.iter().map(|g| g.to_string()).collect(),
        transcript: t.transcript().to_vec(),
    })
}

/// Outcome of identifying a quotient with a target presentation on the interior.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientVerdict {
    pub window: i64,
    pub matched: bool,
    pub only_quotient: Vec<String>,
    pub only_target: Vec<String>,
}

impl QuotientVerdict {
    fn from_diff(window: i64, d: InteriorDiff) -> Self {
        let mut only_quotient: Vec<String> = d.only_replayed.iter().map(|w| w.to_string()).collect();
        only_quotient.extend(d.generators_only_replayed.iter().map(|g| format!("generator {g}")));
        let mut only_target: Vec<String> = d.only_published.iter().map(|w| w.to_string()).collect();
        only_target.extend(d.generators_only_published.iter().map(|g| format!("generator {g}")));
        QuotientVerdict {
            window,
            matched: only_quotient.is_empty() && only_target.is_empty(),
            only_quotient,
            only_target,
        }
    }
}

/// Kills `α_3` and every `β_{m,3}` in `SG_4'` and compares with `SG_3'`.
/// A generator in `keep` is left alone, which must make the check fail.
pub fn sg3_as_quotient_of_sg4(window: i64, keep: Option<&Generator>) -> Result<QuotientVerdict> {
    let mut t = simplified_truncation(GroupFamily::SG, 4, window)?;
    let mut kill = vec![Generator::alpha_j(3)];
    kill.extend((-window..=window).map(|m| Generator::beta_j(m, 3)));
    for g in kill.iter().filter(|g| Some(*g) != keep) {
        let label = format!("kill.{g}");
        t.add_relator(&label, Word::letter(g.clone(), 1))?;
        t.eliminate(g, &label)?;
    }
    let target = simplified_truncation(GroupFamily::SG, 3, window)?;
    Ok(QuotientVerdict::from_diff(window, compare_interiors(&t, &target)))
}

/// Free abelian quotient of a truncation of `SG_3'`.
#[derive(Debug, Clone, Serialize)]
pub struct AbelianCertificate {
    pub window: i64,
    /// Rank of `{α_{0,k,2}, α_{1,k,2}}` over the interior `k` after the replay.
    pub free_rank: usize,
    /// The same rank computed on the truncation before any elimination.
    pub cross_check_rank: usize,
    pub torsion: Vec<String>,
    pub transcript: Vec<String>,
}

pub fn sg3_abelianization_certificate(window: i64) -> Result<AbelianCertificate> {
    let original = simplified_truncation(GroupFamily::SG, 3, window)?;
    let mut t = original.clone();
    let w = window;
    let fail = |step: String, e: Error| Error::Replay {
        script: "sg3-abelianization".into(),
        step,
        reason: e.to_string(),
    };
    let step = |t: &mut TruncatedPresentation, g: Generator, label: String| -> Result<()> {
        match t.eliminate(&g, &label) {
            Err(e) if t.is_interior(&g) => Err(fail(label, e)),
            _ => Ok(()),
        }
    };
    // β_{m,k,2} = α_{m+1,k,2} α_{m+1,k+1,2}^-1
    for m in -w..=w {
        for k in -w..=w {
            step(&mut t, Generator::beta(m, k, 2), instance("s15", &[("m", m), ("k", k)]))?;
        }
    }
    // α_{m+2,k,2} = α_{m+1,k,2} α_{m,k,2}^-1 up to commutators
    for k in -w..=w {
        for m in 2..=w {
            step(
                &mut t,
                Generator::alpha(m, k, 2),
                instance("s9", &[("m", m - 2), ("k", k)]),
            )?;
        }
        for m in (-w..=-1).rev() {
            step(&mut t, Generator::alpha(m, k, 2), instance("s9", &[("m", m), ("k", k)]))?;
        }
    }
    let r = w - t.margin;
    let designated: Vec<Generator> = (-r..=r)
        .flat_map(|k| [Generator::alpha(0, k, 2), Generator::alpha(1, k, 2)])
        .collect();
    let ab = abelianize(&t);
    let torsion = ab.invariants().torsion;
    if !torsion.is_empty() {
        return Err(fail(
            "certificate".into(),
            Error::UnknownClaim(format!("torsion {torsion:?} found")),
        ));
    }
    Ok(AbelianCertificate {
        window,
        free_rank: ab.rank_of(&designated),
        cross_check_rank: abelianize(&original).rank_of(&designated),
        torsion,
        transcript: t.transcript().to_vec(),
    })
}
