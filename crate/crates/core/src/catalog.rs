//! Presentations of the ambient braid-type groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parser::parse_presentation;
use crate::schema::PresentationSchema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupFamily {
    S,
    B,
    VB,
    WB,
    GVB,
    SG,
    UB,
}

impl GroupFamily {
    pub const ALL: [GroupFamily; 7] = [
        GroupFamily::S,
        GroupFamily::B,
        GroupFamily::VB,
        GroupFamily::WB,
        GroupFamily::GVB,
        GroupFamily::SG,
        GroupFamily::UB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupFamily::S => "S",
            GroupFamily::B => "B",
            GroupFamily::VB => "VB",
            GroupFamily::WB => "WB",
            GroupFamily::GVB => "GVB",
            GroupFamily::SG => "SG",
            GroupFamily::UB => "UB",
        }
    }

    /// Labels of the relator families, in presentation order.
    pub fn relator_labels(self) -> &'static [&'static str] {
        match self {
            GroupFamily::S => &["sq", "r1", "r4"],
            GroupFamily::B => &["r1", "r4"],
            GroupFamily::VB => &["sq", "r1", "r4", "r2", "r5", "r3", "r7"],
            GroupFamily::WB => &["sq", "r1", "r4", "r2", "r5", "r3", "r7", "wb"],
            GroupFamily::GVB => &["r1", "r4", "r2", "r5", "r3", "r6", "r7"],
            GroupFamily::SG => &["r1", "r4", "r2", "r3", "r6", "r7", "r8"],
            GroupFamily::UB => &["r1", "r4", "r2", "r3"],
        }
    }

    /// Whether the group has the ρ generators.
    pub fn has_rho(self) -> bool {
        !matches!(self, GroupFamily::S | GroupFamily::B)
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupFamily::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

const RELATORS: &[(&str, &str)] = &[
    ("sq", "forall i : s[i]^2"),
    ("r1", "forall i, j where |i-j|>1 : s[i] s[j] s[i]^-1 s[j]^-1"),
    ("r2", "forall i, j where |i-j|>1 : r[i] r[j] r[i]^-1 r[j]^-1"),
    ("r3", "forall i, j where |i-j|>1 : s[i] r[j] s[i]^-1 r[j]^-1"),
    (
        "r4",
        "forall i in 1..n-2 : s[i] s[i+1] s[i] s[i+1]^-1 s[i]^-1 s[i+1]^-1",
    ),
    (
        "r5",
        "forall i in 1..n-2 : r[i] r[i+1] r[i] r[i+1]^-1 r[i]^-1 r[i+1]^-1",
    ),
    (
        "r6",
        "forall i in 1..n-2 : r[i] s[i+1] s[i] r[i+1]^-1 s[i]^-1 s[i+1]^-1",
    ),
    (
        "r7",
        "forall i in 1..n-2 : r[i+1] s[i] s[i+1] r[i]^-1 s[i+1]^-1 s[i]^-1",
    ),
    ("r8", "forall i : s[i] r[i] s[i]^-1 r[i]^-1"),
    (
        "wb",
        "forall i in 1..n-2 : s[i] r[i+1] r[i] s[i+1]^-1 r[i]^-1 r[i+1]^-1",
    ),
];

/// Body of the relator family `label`, as it appears after `rel <label>`.
pub fn relator_text(label: &str) -> Option<&'static str> {
    RELATORS.iter().find(|(l, _)| *l == label).map(|(_, body)| *body)
}

/// Text of the presentation of `family` on `n` strands.
pub fn catalog_text(family: GroupFamily, n: i64) -> String {
    let mut text = format!("group {} n={n}\ngen s arity 1 range 1..n-1\n", family.name());
    if family.has_rho() {
        text.push_str("gen r arity 1 range 1..n-1\n");
    }
    for label in family.relator_labels() {
        let body = RELATORS.iter().find(|(l, _)| l == label).unwrap().1;
        text.push_str(&format!("rel {label} {body}\n"));
    }
    text
}

pub fn catalog(family: GroupFamily, n: i64) -> Result<PresentationSchema> {
    if n < 3 {
        return Err(Error::InvalidStrandCount(n));
    }
    parse_presentation(&catalog_text(family, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn words(p: &PresentationSchema) -> Vec<Word> {
        p.instances(0).unwrap().into_iter().map(|i| i.word).collect()
    }

    #[test]
    fn generator_counts() {
        for n in 3..=6 {
            for g in GroupFamily::ALL {
                let p = catalog(g, n).unwrap();
                let count = p.box_generators(0).len() as i64;
                let expected = if g.has_rho() { 2 * (n - 1) } else { n - 1 };
                assert_eq!(count, expected, "{g} n={n}");
            }
        }
    }

    #[test]
    fn rejects_small_n_and_unknown_names() {
        assert_eq!(catalog(GroupFamily::B, 2), Err(Error::InvalidStrandCount(2)));
        assert!(matches!("XB".parse::<GroupFamily>(), Err(Error::UnknownGroup(_))));
        assert_eq!("gvb".parse::<GroupFamily>().unwrap(), GroupFamily::GVB);
    }

    #[test]
    fn b3_has_one_braid_relator() {
        let p = catalog(GroupFamily::B, 3).unwrap();
        let shown: Vec<String> = words(&p).iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["s1 s2 s1 s2^-1 s1^-1 s2^-1"]);
    }

    #[test]
    fn gvb3_relators() {
        let p = catalog(GroupFamily::GVB, 3).unwrap();
        let shown: Vec<String> = words(&p).iter().map(|w| w.to_string()).collect();
        assert_eq!(
            shown,
            [
                "s1 s2 s1 s2^-1 s1^-1 s2^-1",
                "r1 r2 r1 r2^-1 r1^-1 r2^-1",
                "r1 s2 s1 r2^-1 s1^-1 s2^-1",
                "r2 s1 s2 r1^-1 s2^-1 s1^-1",
            ]
        );
    }

    #[test]
    fn sg3_relators() {
        let p = catalog(GroupFamily::SG, 3).unwrap();
        let shown: Vec<String> = words(&p).iter().map(|w| w.to_string()).collect();
        assert_eq!(
            shown,
            [
                "s1 s2 s1 s2^-1 s1^-1 s2^-1",
                "r1 s2 s1 r2^-1 s1^-1 s2^-1",
                "r2 s1 s2 r1^-1 s2^-1 s1^-1",
                "s1 r1 s1^-1 r1^-1",
                "s2 r2 s2^-1 r2^-1",
            ]
        );
    }

    #[test]
    fn gvb_and_sg_share_sigma_and_mixed_families() {
        for n in 3..=6 {
            let gvb = catalog(GroupFamily::GVB, n).unwrap();
            let sg = catalog(GroupFamily::SG, n).unwrap();
            for label in ["r1", "r4", "r2", "r3", "r6", "r7"] {
                assert_eq!(gvb.relator(label), sg.relator(label), "{label}");
            }
            let only_gvb: Vec<&str> = gvb
                .relators
                .iter()
                .filter(|r| sg.relator(&r.label).is_none())
                .map(|r| r.label.as_str())
                .collect();
            let only_sg: Vec<&str> = sg
                .relators
                .iter()
                .filter(|r| gvb.relator(&r.label).is_none())
                .map(|r| r.label.as_str())
                .collect();
            assert_eq!(only_gvb, ["r5"]);
            assert_eq!(only_sg, ["r8"]);
        }
    }

    #[test]
    fn ub_relators_are_shared_by_gvb_and_sg() {
        let ub = catalog(GroupFamily::UB, 5).unwrap();
        for g in [GroupFamily::GVB, GroupFamily::SG] {
            let p = catalog(g, 5).unwrap();
            for r in &ub.relators {
                assert_eq!(p.relator(&r.label), Some(r));
            }
        }
    }

    #[test]
    fn balanced_relators_lie_in_the_kernel() {
        for g in [GroupFamily::B, GroupFamily::GVB, GroupFamily::SG, GroupFamily::UB] {
            for n in 3..=6 {
                for w in words(&catalog(g, n).unwrap()) {
                    let image = w.phi_image().unwrap();
                    assert_eq!((image.m, image.k), (0, 0), "{g} {w}");
                }
            }
        }
    }
}
