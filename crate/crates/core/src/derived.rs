//! Presentations of the commutator subgroups `GVB_n'` and `SG_n'`.
//!
//! The raw presentation is produced by rewriting every ambient relator family
//! at a formal coset. The simplified presentations are the published lists,
//! kept verbatim so that replayed simplifications can be checked against them.

use crate::catalog::{catalog, GroupFamily};
use crate::error::{Error, Result};
use crate::parser::parse_presentation;
use crate::rewriting::{expand, representative, rewrite_relator, rewrite_schema};
use crate::schema::PresentationSchema;
use crate::word::{AbelianImage, Generator};

fn check(group: GroupFamily, n: i64) -> Result<()> {
    if !matches!(group, GroupFamily::GVB | GroupFamily::SG) {
        return Err(Error::UnknownGroup(format!(
            "{group}' (only GVB' and SG' are supported)"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidStrandCount(n));
    }
    Ok(())
}

/// Label of the rewritten family of ambient relator `label`.
pub fn rs_label(label: &str) -> String {
    format!("rs.{label}")
}

pub const TRIVIAL_SIGMA: &str = "trivial.sigma1";
pub const TRIVIAL_RHO: &str = "trivial.rho1";

/// The Reidemeister–Schreier presentation before any simplification.
pub fn raw_derived(group: GroupFamily, n: i64) -> Result<PresentationSchema> {
    check(group, n)?;
    let ambient = catalog(group, n)?;
    let header = format!(
        "group {group}d n={n}\n\
         gen a arity 3 range *,*,1..n-1\n\
         gen b arity 3 range *,*,1..n-1\n\
         rel {TRIVIAL_SIGMA} forall m : a[m,0,1]\n\
         rel {TRIVIAL_RHO} forall m, k : b[m,k,1]\n"
    );
    let mut p = parse_presentation(&header)?;
    for r in &ambient.relators {
        p.relators.push(rewrite_schema(r, &rs_label(&r.label))?);
    }
    p.validate()?;
    Ok(p)
}

const GVB_SIMPLIFIED: &str = "\
rel g0 forall m : a[m,0,1]
rel g1 forall m, k, j in 3..n-1 : a[m,k,1] a[j] a[m+1,k,1]^-1 a[j]^-1
rel g2 forall m, k, j in 4..n-1 : a[m,k,2] a[j] a[m+1,k,2]^-1 a[j]^-1
rel g3 forall i, j where |i-j|>1 : a[i] a[j] a[i]^-1 a[j]^-1
rel g4 forall m, k, j in 4..n-1 : b[m,k,2] b[m,j] b[m,k+1,2]^-1 b[m,j]^-1
rel g5 forall m, i, j where |i-j|>1 : b[m,i] b[m,j] b[m,i]^-1 b[m,j]^-1
rel g6 forall m, k, j in 3..n-1 : a[m,k,1] b[m+1,j] a[m,k+1,1]^-1 b[m,j]^-1
rel g7 forall m, k, j in 4..n-1 : a[m,k,2] b[m+1,j] a[m,k+1,2]^-1 b[m,j]^-1
rel g8 forall m, k, i in 4..n-1 : a[i] b[m+1,k,2] a[i]^-1 b[m,k,2]^-1
rel g9 forall m, i, j where |i-j|>1 : a[i] b[m+1,j] a[i]^-1 b[m,j]^-1
rel g10 forall m, k : a[m,k,1] a[m+1,k,2] a[m+2,k,1] a[m+2,k,2]^-1 a[m+1,k,1]^-1 a[m,k,2]^-1
rel g11 forall m, k where n>=4 : a[m,k,2] a[3] a[m+2,k,2] a[3]^-1 a[m+1,k,2]^-1 a[3]^-1
rel g12 forall i in 3..n-2 : a[i] a[i+1] a[i] a[i+1]^-1 a[i]^-1 a[i+1]^-1
rel g13 forall m, k : b[m,k+1,2] b[m,k+2,2]^-1 b[m,k,2]^-1
rel g14 forall m, k where n>=4 : b[m,k,2] b[m,3] b[m,k+2,2] b[m,3]^-1 b[m,k+1,2]^-1 b[m,3]^-1
rel g15 forall m, i in 3..n-2 : b[m,i] b[m,i+1] b[m,i] b[m,i+1]^-1 b[m,i]^-1 b[m,i+1]^-1
rel g16 forall m, k : a[m,k+1,2] a[m+1,k+1,1] b[m+2,k,2]^-1 a[m+1,k,1]^-1 a[m,k,2]^-1
rel g17 forall m, k where n>=4 : b[m,k,2] a[3] a[m+1,k+1,2] b[m+2,3]^-1 a[m+1,k,2]^-1 a[3]^-1
rel g18 forall m, i in 3..n-2 : b[m,i] a[i+1] a[i] b[m+2,i+1]^-1 a[i]^-1 a[i+1]^-1
rel g19 forall m, k : b[m,k,2] a[m,k+1,1] a[m+1,k+1,2] a[m+1,k,2]^-1 a[m,k,1]^-1
rel g20 forall m, k where n>=4 : b[m,3] a[m,k+1,2] a[3] b[m+2,k,2]^-1 a[3]^-1 a[m,k,2]^-1
rel g21 forall m, i in 3..n-2 : b[m,i+1] a[i] a[i+1] b[m+2,i]^-1 a[i+1]^-1 a[i]^-1
";

const SG_SIMPLIFIED: &str = "\
rel s1 forall m, k, j in 4..n-1 : a[m,k,2] a[j] a[m+1,k,2]^-1 a[j]^-1
rel s2 forall i, j where |i-j|>1 : a[i] a[j] a[i]^-1 a[j]^-1
rel s3 forall m, k, j in 4..n-1 : b[m,k,2] b[m,j] b[m,k+1,2]^-1 b[m,j]^-1
rel s4 forall m, i, j where |i-j|>1 : b[m,i] b[m,j] b[m,i]^-1 b[m,j]^-1
rel s5 forall m, j : b[m+1,j] b[m,j]^-1
rel s6 forall m, k, j in 4..n-1 : a[m,k,2] b[m+1,j] a[m,k+1,2]^-1 b[m,j]^-1
rel s7 forall m, k, i in 4..n-1 : a[i] b[m+1,k,2] a[i]^-1 b[m,k,2]^-1
rel s8 forall m, i, j where |i-j|>1 : a[i] b[m+1,j] a[i]^-1 b[m,j]^-1
rel s9 forall m, k : a[m+1,k,2] a[m+2,k,2]^-1 a[m,k,2]^-1
rel s10 forall m, k where n>=4 : a[m,k,2] a[3] a[m+2,k,2] a[3]^-1 a[m+1,k,2]^-1 a[3]^-1
rel s11 forall i in 3..n-2 : a[i] a[i+1] a[i] a[i+1]^-1 a[i]^-1 a[i+1]^-1
rel s12 forall m, k : a[m,k+1,2] b[m+2,k,2]^-1 a[m,k,2]^-1
rel s13 forall m, k where n>=4 : b[m,k,2] a[3] a[m+1,k+1,2] b[m+2,3]^-1 a[m+1,k,2]^-1 a[3]^-1
rel s14 forall m, i in 3..n-2 : b[m,i] a[i+1] a[i] b[m+2,i+1]^-1 a[i]^-1 a[i+1]^-1
rel s15 forall m, k : b[m,k,2] a[m+1,k+1,2] a[m+1,k,2]^-1
rel s16 forall m, k where n>=4 : b[m,3] a[m,k+1,2] a[3] b[m+2,k,2]^-1 a[3]^-1 a[m,k,2]^-1
rel s17 forall m, i in 3..n-2 : b[m,i+1] a[i] a[i+1] b[m+2,i]^-1 a[i+1]^-1 a[i]^-1
rel s18 forall m, k : a[m,k,2] b[m+1,k,2] a[m,k+1,2]^-1 b[m,k,2]^-1
rel s19 forall m, i : a[i] b[m+1,i] a[i]^-1 b[m,i]^-1
";

/// The published simplified presentation.
pub fn simplified_derived(group: GroupFamily, n: i64) -> Result<PresentationSchema> {
    check(group, n)?;
    let (alpha_range, body) = match group {
        GroupFamily::GVB => ("1..2", GVB_SIMPLIFIED),
        _ => ("2..2", SG_SIMPLIFIED),
    };
    let text = format!(
        "group {group}s n={n}\n\
         gen a arity 3 range *,*,{alpha_range}\n\
         gen b arity 3 range *,*,2..2\n\
         gen a arity 1 range 3..n-1\n\
         gen b arity 2 range *,3..n-1\n\
         {body}"
    );
    let p = parse_presentation(&text)?;
    p.validate()?;
    Ok(p)
}

/// Checks `expand(τ(λ r λ^-1)) = λ r λ^-1` for every ambient relator `r` and
/// every coset representative `λ = σ_1^m ρ_1^k` with `|m|, |k| <= radius`.
/// Returns the failing instances.
pub fn expansion_identity_failures(group: GroupFamily, n: i64, radius: i64) -> Result<Vec<String>> {
    let ambient = catalog(group, n)?;
    let mut failures = Vec::new();
    for inst in ambient.instances(0)? {
        for m in -radius..=radius {
            for k in -radius..=radius {
                let key = AbelianImage::new(m, k);
                let conjugated = inst.word.conjugate(&representative(key));
                let core = rewrite_relator(key, &inst.word)?;
                if !expand(&core).freely_equal(&conjugated) {
                    failures.push(format!("{} at ({m}, {k})", inst.label));
                }
            }
        }
    }
    Ok(failures)
}

/// The renaming rules `α_{0,0,j} → α_j` and `β_{m,0,j} → β_{m,j}` over the box `[-m, m]`.
pub fn renamings(n: i64, window: i64) -> Vec<(Generator, Generator)> {
    let mut out = Vec::new();
    for j in 3..n {
        out.push((Generator::alpha(0, 0, j), Generator::alpha_j(j)));
    }
    for j in 3..n {
        for m in -window..=window {
            out.push((Generator::beta(m, 0, j), Generator::beta_j(m, j)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewriting::{tau_at_coset, unrename};
    use crate::schema::{canonical_set, schema_sets_equal, RelatorSchema};
    use crate::word::Word;

    /// The raw lists transcribed by hand, used only as an oracle.
    const GVB_RAW: &str = "\
rel e1 forall m : a[m,0,1]
rel e2 forall m, k : b[m,k,1]
rel e3 forall m, k, i, j where |i-j|>1 : a[m,k,i] a[m+1,k,j] a[m+1,k,i]^-1 a[m,k,j]^-1
rel e4 forall m, k, i, j where |i-j|>1 : b[m,k,i] b[m,k+1,j] b[m,k+1,i]^-1 b[m,k,j]^-1
rel e5 forall m, k, i, j where |i-j|>1 : a[m,k,i] b[m+1,k,j] a[m,k+1,i]^-1 b[m,k,j]^-1
rel e6 forall m, k, i in 1..n-2 : a[m,k,i] a[m+1,k,i+1] a[m+2,k,i] a[m+2,k,i+1]^-1 a[m+1,k,i]^-1 a[m,k,i+1]^-1
rel e7 forall m, k, i in 1..n-2 : b[m,k,i] b[m,k+1,i+1] b[m,k+2,i] b[m,k+2,i+1]^-1 b[m,k+1,i]^-1 b[m,k,i+1]^-1
rel e8 forall m, k, i in 1..n-2 : b[m,k,i] a[m,k+1,i+1] a[m+1,k+1,i] b[m+2,k,i+1]^-1 a[m+1,k,i]^-1 a[m,k,i+1]^-1
rel e9 forall m, k, i in 1..n-2 : b[m,k,i+1] a[m,k+1,i] a[m+1,k+1,i+1] b[m+2,k,i]^-1 a[m+1,k,i+1]^-1 a[m,k,i]^-1
";

    const SG_EXTRA: &str = "\
rel e10 forall m, k, i : a[m,k,i] b[m+1,k,i] a[m,k+1,i]^-1 b[m,k,i]^-1
";

    fn transcribed(group: GroupFamily, n: i64) -> Vec<RelatorSchema> {
        let mut body = String::from(GVB_RAW);
        if group == GroupFamily::SG {
            body = body
                .lines()
                .filter(|l| !l.starts_with("rel e7"))
                .collect::<Vec<_>>()
                .join("\n");
            body.push('\n');
            body.push_str(SG_EXTRA);
        }
        let text = format!("group T n={n}\ngen a arity 3 range *,*,1..n-1\ngen b arity 3 range *,*,1..n-1\n{body}");
        parse_presentation(&text).unwrap().relators
    }

    #[test]
    fn raw_lists_match_the_transcription() {
        for group in [GroupFamily::GVB, GroupFamily::SG] {
            for n in 3..=6 {
                let raw = raw_derived(group, n).unwrap();
                assert!(
                    schema_sets_equal(&raw.relators, &transcribed(group, n), 2),
                    "{group} n={n}"
                );
            }
        }
    }

    #[test]
    fn raw_family_counts() {
        assert_eq!(raw_derived(GroupFamily::GVB, 5).unwrap().relators.len(), 9);
        let sg = raw_derived(GroupFamily::SG, 5).unwrap();
        assert_eq!(sg.relators.len(), 9);
        let r8 = sg.relator("rs.r8").unwrap();
        assert_eq!(
            r8.at(&[("i", 2), ("m", 0), ("k", 0)]).unwrap(),
            "a[0,0,2] b[1,0,2] a[0,1,2]^-1 b[0,0,2]^-1".parse().unwrap()
        );
        // at n = 3 no pair of indices is far apart
        let gvb3 = raw_derived(GroupFamily::GVB, 3).unwrap();
        assert!(gvb3.relator("rs.r1").unwrap().enumerate_instances(2).is_empty());
    }

    #[test]
    fn sg_raw_differs_from_gvb_raw_by_r5_and_r8() {
        for n in 3..=6 {
            let gvb = raw_derived(GroupFamily::GVB, n).unwrap();
            let sg = raw_derived(GroupFamily::SG, n).unwrap();
            let labels = |p: &PresentationSchema| p.relators.iter().map(|r| r.label.clone()).collect::<Vec<_>>();
            let only_gvb: Vec<_> = labels(&gvb).into_iter().filter(|l| sg.relator(l).is_none()).collect();
            let only_sg: Vec<_> = labels(&sg).into_iter().filter(|l| gvb.relator(l).is_none()).collect();
            assert_eq!(only_gvb, ["rs.r5"]);
            assert_eq!(only_sg, ["rs.r8"]);
            for r in &sg.relators {
                if let Some(g) = gvb.relator(&r.label) {
                    assert_eq!(g, r);
                }
            }
        }
    }

    #[test]
    fn raw_instances_expand_to_conjugated_relators() {
        for group in [GroupFamily::GVB, GroupFamily::SG] {
            for n in 3..=6 {
                let ambient = catalog(group, n).unwrap();
                let raw = raw_derived(group, n).unwrap();
                for r in &ambient.relators {
                    let rewritten = raw.relator(&rs_label(&r.label)).unwrap();
                    for m in -3..=3 {
                        for k in -3..=3 {
                            let key = AbelianImage::new(m, k);
                            let lambda = representative(key);
                            let mut ambient_words = r.enumerate_instances(0);
                            let mut derived_words: Vec<Word> = rewritten
                                .enumerate_instances(3)
                                .into_iter()
                                .filter(|w| {
                                    let g = w.runs()[0].0.clone();
                                    g.indices[0] == m && g.indices[1] == k
                                })
                                .collect();
                            assert_eq!(ambient_words.len(), derived_words.len());
                            ambient_words.sort();
                            derived_words.sort();
                            for w in &ambient_words {
                                let core = tau_at_coset(key, w).unwrap();
                                assert!(derived_words.contains(&core));
                                assert_eq!(expand(&core), w.conjugate(&lambda));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_identity_holds() {
        for group in [GroupFamily::GVB, GroupFamily::SG] {
            assert!(expansion_identity_failures(group, 4, 2).unwrap().is_empty());
        }
    }

    #[test]
    fn simplified_lists() {
        let gvb = simplified_derived(GroupFamily::GVB, 5).unwrap();
        assert_eq!(gvb.relators.len(), 22);
        let sg = simplified_derived(GroupFamily::SG, 5).unwrap();
        assert_eq!(sg.relators.len(), 19);
        let s5 = sg.relator("s5").unwrap();
        assert_eq!(s5.at(&[("m", 0), ("j", 3)]).unwrap().to_string(), "b[1,3] b[0,3]^-1");
        let g10 = gvb.relator("g10").unwrap();
        assert_eq!(
            g10.at(&[("m", 0), ("k", 0)]).unwrap().to_string(),
            "a[0,0,1] a[1,0,2] a[2,0,1] a[2,0,2]^-1 a[1,0,1]^-1 a[0,0,2]^-1"
        );
        assert_eq!(
            gvb.relator("g0").unwrap().at(&[("m", 5)]).unwrap().to_string(),
            "a[5,0,1]"
        );
        assert_eq!(gvb.relator("g13").unwrap().enumerate_instances(1).len(), 9);
        // families needing j >= 4 are empty at n = 4
        let gvb4 = simplified_derived(GroupFamily::GVB, 4).unwrap();
        for label in ["g2", "g4", "g7", "g8"] {
            assert!(
                gvb4.relator(label).unwrap().enumerate_instances(2).is_empty(),
                "{label}"
            );
        }
        assert!(gvb4.instances(2).is_ok());
        assert!(simplified_derived(GroupFamily::GVB, 3).unwrap().instances(2).is_ok());
        assert!(simplified_derived(GroupFamily::B, 4).is_err());
    }

    #[test]
    fn simplified_relators_lie_in_the_kernel() {
        for group in [GroupFamily::GVB, GroupFamily::SG] {
            for n in 3..=6 {
                for inst in simplified_derived(group, n).unwrap().instances(2).unwrap() {
                    let unrenamed = inst.word.map_letters(|g| Word::letter(unrename(g), 1));
                    let image = expand(&unrenamed).phi_image().unwrap();
                    assert_eq!(image, AbelianImage::default(), "{}", inst.label);
                }
            }
        }
    }

    #[test]
    fn renaming_rules_are_explicit() {
        let rules = renamings(5, 1);
        assert!(rules.contains(&(Generator::alpha(0, 0, 4), Generator::alpha_j(4))));
        assert!(rules.contains(&(Generator::beta(-1, 0, 3), Generator::beta_j(-1, 3))));
        for (from, to) in &rules {
            assert_eq!(&unrename(to), from);
        }
        assert_eq!(rules.len(), 2 + 2 * 3);
    }

    #[test]
    fn canonical_set_ignores_trivial_words() {
        let words = [Word::identity(), "a[0,0,2]".parse().unwrap()];
        assert_eq!(canonical_set(&words).len(), 1);
    }
}
