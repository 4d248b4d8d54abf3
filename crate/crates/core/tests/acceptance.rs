//! Acceptance suite: one line per criterion, then a single assertion.
//!
//! Run with `cargo test -p braid-commutator --test acceptance`.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use braid_commutator::abelian::{ambient_invariants, perfectness_window_check, smith_normal_form, IntegerMatrix};
use braid_commutator::derived::expansion_identity_failures;
use braid_commutator::quotients::{
    free_quotient_certificate_gvb3, sg3_abelianization_certificate, sg3_as_quotient_of_sg4, verify_diagram_edge, Edge,
};
use braid_commutator::scripts::{compare_interiors, replay, replay_with, simplified_truncation, simplify, SCRIPTS};
use braid_commutator::{Generator, GroupFamily};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [GroupFamily; 2] = [GroupFamily::GVB, GroupFamily::SG];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(gens: &BTreeSet<Generator>) -> BTreeSet<String> {
    gens.iter().map(Generator::to_string).collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn expansion_identity() -> Check {
    let mut count = 0;
    for g in GROUPS {
        for n in 3..=6 {
            let failures = expansion_identity_failures(g, n, 3).map_err(|e| e.to_string())?;
            ensure(failures.is_empty(), || format!("{g} n={n}: {}", failures.join("; ")))?;
            count += 1;
        }
    }
    Ok(format!("{count} presentations, radius 3"))
}

fn simplification() -> Check {
    for g in GROUPS {
        for n in 3..=6 {
            let run = simplify(g, n, 4, false).map_err(|e| e.to_string())?;
            let published = simplified_truncation(g, n, 4).map_err(|e| e.to_string())?;
            let diff = compare_interiors(&run.presentation, &published);
            ensure(diff.is_empty(), || format!("{g} n={n}: {diff:?}"))?;
        }
    }
    Ok("GVB and SG, n = 3..6, M = 4: interiors identical".into())
}

fn finite_generation() -> Check {
    let window = 5;
    let survivors = |script: &str, n: i64| {
        replay(script, n, window)
            .map(|r| names(&r.interior_survivors()))
            .map_err(|e| e.to_string())
    };
    let gvb4 = survivors("gvb4-fin-gen", 4)?;
    let expected = set(&[
        "a[0,0,2]", "a[0,1,1]", "a[0,1,2]", "a[0,2,2]", "a[1,0,2]", "a[1,1,2]", "a[1,2,2]", "a3", "b[0,3]",
    ]);
    ensure(gvb4 == expected, || format!("GVB_4': {gvb4:?}"))?;
    let gvb5 = survivors("gvbn-fin-gen", 5)?;
    let expected = set(&[
        "a[0,0,2]", "a[1,0,2]", "a3", "a4", "b[0,3]", "b[0,4]", "b[1,3]", "b[1,4]",
    ]);
    ensure(gvb5 == expected, || format!("GVB_5': {gvb5:?}"))?;
    let sg5 = survivors("sgn-fin-gen", 5)?;
    let expected = set(&["a[0,0,2]", "a[1,0,2]", "a3", "a4", "b[0,3]", "b[0,4]"]);
    ensure(sg5 == expected, || format!("SG_5': {sg5:?}"))?;
    let gvb6 = survivors("gvbn-fin-gen", 6)?.len();
    let sg6 = survivors("sgn-fin-gen", 6)?.len();
    ensure(gvb6 == 3 * 6 - 7, || format!("GVB_6' has {gvb6} survivors"))?;
    ensure(sg6 == 2 * 6 - 4, || format!("SG_6' has {sg6} survivors"))?;
    Ok(format!(
        "M = {window}: GVB_4' 9, GVB_5' 8, GVB_6' {gvb6}, SG_5' 6, SG_6' {sg6}"
    ))
}

fn perfectness() -> Check {
    let window = 6;
    let mut lines = Vec::new();
    for (g, n, perfect) in [
        (GroupFamily::GVB, 5, true),
        (GroupFamily::GVB, 6, true),
        (GroupFamily::SG, 5, true),
        (GroupFamily::SG, 6, true),
        (GroupFamily::GVB, 3, false),
        (GroupFamily::SG, 3, false),
        (GroupFamily::SG, 4, false),
    ] {
        let v = perfectness_window_check(g, n, window).map_err(|e| e.to_string())?;
        ensure(v.perfect_on_interior == perfect, || v.to_string())?;
        lines.push(format!("{g}{n}:{}", if perfect { "perfect" } else { "not" }));
    }
    Ok(format!("M = {window}: {}", lines.join(" ")))
}

fn non_finite_generation_certificates() -> Check {
    let gvb: Vec<usize> = (3..=5)
        .map(|w| free_quotient_certificate_gvb3(w).map(|c| c.rank))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(gvb == [2, 4, 6], || format!("GVB_3' free ranks {gvb:?}"))?;
    let mut sg = Vec::new();
    for w in 4..=6 {
        let c = sg3_abelianization_certificate(w).map_err(|e| e.to_string())?;
        ensure(c.free_rank == c.cross_check_rank && c.torsion.is_empty(), || {
            format!("M={w}: {c:?}")
        })?;
        sg.push(c.free_rank);
    }
    ensure(sg == [10, 14, 18], || format!("SG_3' abelian ranks {sg:?}"))?;
    Ok(format!(
        "GVB_3' free ranks {gvb:?} (M = 3..5), SG_3' abelian ranks {sg:?} (M = 4..6)"
    ))
}

fn ambient_abelianization() -> Check {
    for g in GROUPS {
        for n in 3..=6 {
            let inv = ambient_invariants(g, n).map_err(|e| e.to_string())?;
            ensure(inv.free_rank == 2 && inv.torsion.is_empty(), || {
                format!("{g} n={n}: {inv}")
            })?;
        }
    }
    Ok("Z^2 for GVB and SG, n = 3..6".into())
}

fn diagram() -> Check {
    let mut permutation_checks = 0;
    for n in 3..=4 {
        for edge in Edge::ALL {
            let v = verify_diagram_edge(edge, n).map_err(|e| e.to_string())?;
            ensure(v.passed(), || {
                format!("{edge} n={n}: {:?} / {:?}", v.only_source, v.only_target)
            })?;
            permutation_checks += usize::from(v.permutation_check == Some(true));
        }
    }
    ensure(permutation_checks == 4, || {
        format!("{permutation_checks} permutation checks")
    })?;
    Ok(format!("8 edges at n = 3, 4; {permutation_checks} permutation checks"))
}

fn sg3_quotient() -> Check {
    let v = sg3_as_quotient_of_sg4(4, None).map_err(|e| e.to_string())?;
    ensure(v.matched, || format!("{:?} / {:?}", v.only_quotient, v.only_target))?;
    let mutated = sg3_as_quotient_of_sg4(4, Some(&Generator::beta_j(0, 3))).map_err(|e| e.to_string())?;
    ensure(!mutated.matched, || "dropping one kill went unnoticed".into())?;
    Ok("M = 4: identical interiors; mutation detected".into())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntegerMatrix {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
        .collect();
    IntegerMatrix::from_rows(&data)
}

fn snf_randomized() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let cases = 1000;
    for case in 0..cases {
        let a = random_matrix(&mut rng);
        let r = smith_normal_form(&a);
        ensure(r.u.mul(&a).mul(&r.v) == r.d, || format!("case {case}: U A V != D"))?;
        ensure(r.u.det().abs().is_one() && r.v.det().abs().is_one(), || {
            format!("case {case}: not unimodular")
        })?;
        let mut diagonal = Vec::new();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let x = r.d.get(i, j);
                if i == j {
                    diagonal.push(x.clone());
                } else {
                    ensure(x.is_zero(), || format!("case {case}: off-diagonal entry"))?;
                }
            }
        }
        let nonzero: Vec<&BigInt> = diagonal.iter().take_while(|x| !x.is_zero()).collect();
        ensure(diagonal[nonzero.len()..].iter().all(Zero::is_zero), || {
            format!("case {case}: zero before nonzero")
        })?;
        ensure(nonzero.iter().all(|x| x.is_positive()), || {
            format!("case {case}: negative factor")
        })?;
        ensure(nonzero.windows(2).all(|p| (p[1] % p[0]).is_zero()), || {
            format!("case {case}: divisibility")
        })?;
    }
    Ok(format!("{cases} random matrices up to 8x8, entries in [-9, 9]"))
}

fn audit() -> Check {
    let window = 4;
    let mut checks = 0;
    let mut runs = 0;
    for &script in SCRIPTS {
        let ns: &[i64] = match script {
            "simplify-gvb" | "simplify-sg" => &[3, 4, 5],
            "gvb4-fin-gen" => &[4],
            "gvbn-fin-gen" | "sgn-fin-gen" => &[5],
            _ => &[3],
        };
        for &n in ns {
            let run = replay_with(script, n, window, true).map_err(|e| e.to_string())?;
            let a = run.presentation.audit().ok_or("audit not enabled")?;
            ensure(a.failures.is_empty(), || {
                format!("{script} n={n}: {}", a.failures.join("; "))
            })?;
            checks += a.checks;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} replays at M = {window}, {checks} invariant checks, 0 failures"
    ))
}

/// Written past the test harness's capture so the lines show without `--nocapture`.
fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    writeln!(err, "{line}").unwrap();
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("expansion identity", expansion_identity),
        ("simplified presentations", simplification),
        ("finite generation", finite_generation),
        ("perfectness", perfectness),
        ("non-finite-generation certificates", non_finite_generation_certificates),
        ("ambient abelianization", ambient_abelianization),
        ("quotient diagram", diagram),
        ("SG_3' as a quotient of SG_4'", sg3_quotient),
        ("Smith normal form", snf_randomized),
        ("abelian audit", audit),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => report(&format!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1)),
            Err(why) => {
                report(&format!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1));
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
