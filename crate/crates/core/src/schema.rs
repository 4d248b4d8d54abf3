//! Parametrized relator families and presentation schemas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Generator, Word};

pub type Bindings = BTreeMap<String, i64>;

/// An affine integer expression `c + Σ a_p · p`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Affine {
    pub constant: i64,
    /// Sorted by name, no zero coefficients.
    pub terms: Vec<(String, i64)>,
}

impl Affine {
    pub fn constant(c: i64) -> Self {
        Affine {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        Affine {
            constant: 0,
            terms: vec![(name.to_string(), 1)],
        }
    }

    pub fn offset(mut self, c: i64) -> Self {
        self.constant += c;
        self
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut terms: BTreeMap<String, i64> = self.terms.iter().cloned().collect();
        for (name, c) in &other.terms {
            *terms.entry(name.clone()).or_insert(0) += c;
        }
        Affine {
            constant: self.constant + other.constant,
            terms: terms.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn scale(&self, f: i64) -> Affine {
        if f == 0 {
            return Affine::constant(0);
        }
        Affine {
            constant: self.constant * f,
            terms: self.terms.iter().map(|(n, c)| (n.clone(), c * f)).collect(),
        }
    }

    /// The parameter name if the expression is exactly `p`.
    pub fn as_var(&self) -> Option<&str> {
        match self.terms.as_slice() {
            [(name, 1)] if self.constant == 0 => Some(name),
            _ => None,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> + '_ {
        self.terms.iter().map(|(n, _)| n.as_str())
    }

    /// Replaces parameter `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Affine) -> Affine {
        let mut out = Affine::constant(self.constant);
        for (n, c) in &self.terms {
            if n == name {
                out = out.add(&value.scale(*c));
            } else {
                out = out.add(&Affine {
                    constant: 0,
                    terms: vec![(n.clone(), *c)],
                });
            }
        }
        out
    }

    pub fn eval(&self, bindings: &Bindings) -> Result<i64> {
        let mut v = self.constant;
        for (name, c) in &self.terms {
            let x = bindings
                .get(name)
                .ok_or_else(|| Error::UnboundParameter(name.clone()))?;
            v += c * x;
        }
        Ok(v)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, c) in &self.terms {
            let sign = if *c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}*{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant > 0 {
            write!(f, "+{}", self.constant)
        } else if self.constant < 0 {
            write!(f, "{}", self.constant)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

/// `lhs op rhs`, or `|lhs| op rhs` when `abs_lhs` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Guard {
    pub lhs: Affine,
    pub abs_lhs: bool,
    pub op: CmpOp,
    pub rhs: Affine,
}

impl Guard {
    pub fn new(lhs: Affine, op: CmpOp, rhs: Affine) -> Self {
        Guard {
            lhs,
            abs_lhs: false,
            op,
            rhs,
        }
    }

    /// `|a - b| > 1`
    pub fn far_apart(a: &str, b: &str) -> Self {
        Guard {
            lhs: Affine::var(a).add(&Affine::var(b).scale(-1)),
            abs_lhs: true,
            op: CmpOp::Gt,
            rhs: Affine::constant(1),
        }
    }

    pub fn check(&self, bindings: &Bindings) -> Result<bool> {
        let mut l = self.lhs.eval(bindings)?;
        if self.abs_lhs {
            l = l.abs();
        }
        Ok(self.op.holds(l, self.rhs.eval(bindings)?))
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.abs_lhs {
            write!(f, "|{}|", self.lhs)?;
        } else {
            write!(f, "{}", self.lhs)?;
        }
        write!(f, "{}{}", self.op.symbol(), self.rhs)
    }
}

/// A quantified parameter; `range: None` ranges over the truncation window.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub range: Option<(i64, i64)>,
}

impl Param {
    pub fn window(name: &str) -> Self {
        Param {
            name: name.to_string(),
            range: None,
        }
    }

    pub fn ranged(name: &str, lo: i64, hi: i64) -> Self {
        Param {
            name: name.to_string(),
            range: Some((lo, hi)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LetterTemplate {
    pub family: char,
    pub indices: Vec<Affine>,
    pub exponent: i64,
}

impl LetterTemplate {
    pub fn new(family: char, indices: Vec<Affine>, exponent: i64) -> Self {
        LetterTemplate {
            family,
            indices,
            exponent,
        }
    }

    pub fn instantiate(&self, bindings: &Bindings) -> Result<(Generator, i64)> {
        let indices = self
            .indices
            .iter()
            .map(|a| a.eval(bindings))
            .collect::<Result<Vec<_>>>()?;
        Ok((Generator::new(self.family, indices), self.exponent))
    }
}

impl fmt::Display for LetterTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.family)?;
        for (n, a) in self.indices.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")?;
        if self.exponent != 1 {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

/// One relator family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelatorSchema {
    pub label: String,
    pub params: Vec<Param>,
    pub guards: Vec<Guard>,
    pub template: Vec<LetterTemplate>,
}

/// A concrete relator with the label of its family and its bindings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub label: String,
    pub word: Word,
}

impl RelatorSchema {
    pub fn new(label: &str, params: Vec<Param>, guards: Vec<Guard>, template: Vec<LetterTemplate>) -> Self {
        RelatorSchema {
            label: label.to_string(),
            params,
            guards,
            template,
        }
    }

    pub fn instantiate(&self, bindings: &Bindings) -> Result<Word> {
        for p in &self.params {
            let v = *bindings
                .get(&p.name)
                .ok_or_else(|| Error::UnboundParameter(p.name.clone()))?;
            if let Some((lo, hi)) = p.range {
                if v < lo || v > hi {
                    return Err(Error::GuardViolated(format!("{} in {lo}..{hi}", p.name)));
                }
            }
        }
        for g in &self.guards {
            if !g.check(bindings)? {
                return Err(Error::GuardViolated(g.to_string()));
            }
        }
        let letters = self
            .template
            .iter()
            .map(|l| l.instantiate(bindings))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_letters(letters))
    }

    /// Instantiates with the given `(name, value)` pairs.
    pub fn at(&self, values: &[(&str, i64)]) -> Result<Word> {
        let b: Bindings = values.iter().map(|(n, v)| (n.to_string(), *v)).collect();
        self.instantiate(&b)
    }

    /// Label of the instance at `bindings`, e.g. `4.10[k=0,m=1]`.
    pub fn instance_label(&self, bindings: &Bindings) -> String {
        if self.params.is_empty() {
            return self.label.clone();
        }
        let parts: Vec<String> = self
            .params
            .iter()
            .map(|p| format!("{}={}", p.name, bindings.get(&p.name).copied().unwrap_or(0)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        format!("{}[{}]", self.label, parts.join(","))
    }

    fn for_each_binding<F>(&self, ranges: &[(i64, i64)], mut f: F)
    where
        F: FnMut(&Bindings),
    {
        let mut bindings = Bindings::new();
        fn rec<F: FnMut(&Bindings)>(
            params: &[Param],
            ranges: &[(i64, i64)],
            depth: usize,
            bindings: &mut Bindings,
            f: &mut F,
        ) {
            if depth == params.len() {
                f(bindings);
                return;
            }
            let (lo, hi) = ranges[depth];
            for v in lo..=hi {
                bindings.insert(params[depth].name.clone(), v);
                rec(params, ranges, depth + 1, bindings, f);
            }
            bindings.remove(&params[depth].name);
        }
        rec(&self.params, ranges, 0, &mut bindings, &mut f);
    }

    fn ranges(&self, window: (i64, i64)) -> Vec<(i64, i64)> {
        self.params.iter().map(|p| p.range.unwrap_or(window)).collect()
    }

    /// All instances with window parameters in `[-m, m]`, in lexicographic
    /// parameter order; bindings violating a guard are skipped.
    pub fn enumerate_instances(&self, m: i64) -> Vec<Word> {
        self.enumerate_labelled(m).into_iter().map(|i| i.word).collect()
    }

    pub fn enumerate_labelled(&self, m: i64) -> Vec<Instance> {
        let mut out = Vec::new();
        if m < 0 {
            return out;
        }
        let ranges = self.ranges((-m, m));
        self.for_each_binding(&ranges, |b| {
            if let Ok(word) = self.instantiate(b) {
                out.push(Instance {
                    label: self.instance_label(b),
                    word,
                });
            }
        });
        out
    }

    /// Instances all of whose letters lie in the box `[-m, m]` on the
    /// unbounded index slots of `alphabet`.
    pub fn enumerate_in_box(&self, alphabet: &Alphabet, m: i64) -> Vec<Instance> {
        let mut out = Vec::new();
        if m < 0 {
            return out;
        }
        let reach: i64 = self
            .template
            .iter()
            .flat_map(|l| l.indices.iter())
            .map(|a| a.constant.abs())
            .max()
            .unwrap_or(0);
        let ranges = self.ranges((-m - reach, m + reach));
        self.for_each_binding(&ranges, |b| {
            if let Ok(word) = self.instantiate(b) {
                if word.generators().all(|g| in_box(alphabet, g, m)) {
                    out.push(Instance {
                        label: self.instance_label(b),
                        word,
                    });
                }
            }
        });
        out
    }

    /// Families referenced by the template, as `(symbol, arity)`.
    pub fn families(&self) -> BTreeSet<(char, usize)> {
        self.template.iter().map(|l| (l.family, l.indices.len())).collect()
    }
}

/// True iff every unbounded index slot of `g` lies in `[-m, m]`.
pub fn in_box(alphabet: &Alphabet, g: &Generator, m: i64) -> bool {
    match alphabet.family(g.family, g.arity()) {
        Some(decl) => g
            .indices
            .iter()
            .zip(&decl.domains)
            .all(|(i, d)| d.is_some() || (-m <= *i && *i <= m)),
        None => false,
    }
}

impl fmt::Display for RelatorSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel {}", self.label)?;
        if !self.params.is_empty() {
            write!(f, " forall ")?;
            for (n, p) in self.params.iter().enumerate() {
                if n > 0 {
                    write!(f, ", ")?;
                }
                match p.range {
                    Some((lo, hi)) => write!(f, "{} in {lo}..{hi}", p.name)?,
                    None => write!(f, "{}", p.name)?,
                }
            }
        }
        if !self.guards.is_empty() {
            write!(f, " where ")?;
            for (n, g) in self.guards.iter().enumerate() {
                if n > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{g}")?;
            }
        }
        write!(f, " :")?;
        for l in &self.template {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Generator families plus relator families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSchema {
    pub name: String,
    pub n: Option<i64>,
    pub alphabet: Alphabet,
    pub relators: Vec<RelatorSchema>,
}

impl PresentationSchema {
    pub fn relator(&self, label: &str) -> Option<&RelatorSchema> {
        self.relators.iter().find(|r| r.label == label)
    }

    /// Checks that every referenced family is declared with matching arity.
    pub fn validate(&self) -> Result<()> {
        for r in &self.relators {
            for (symbol, arity) in r.families() {
                if self.alphabet.family(symbol, arity).is_none() {
                    return Err(Error::UndeclaredFamily(format!(
                        "{symbol} (arity {arity}) in relator {}",
                        r.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every instance over the parameter window, validated against the alphabet.
    pub fn instances(&self, m: i64) -> Result<Vec<Instance>> {
        let mut out = Vec::new();
        for r in &self.relators {
            for inst in r.enumerate_labelled(m) {
                for g in inst.word.generators() {
                    self.alphabet.validate(g)?;
                }
                out.push(inst);
            }
        }
        Ok(out)
    }

    /// The truncation to the box `[-m, m]` on unbounded index slots.
    pub fn box_instances(&self, m: i64) -> Vec<Instance> {
        self.relators
            .iter()
            .flat_map(|r| r.enumerate_in_box(&self.alphabet, m))
            .collect()
    }

    /// All generators in the box `[-m, m]`.
    pub fn box_generators(&self, m: i64) -> BTreeSet<Generator> {
        let mut out = BTreeSet::new();
        for decl in &self.alphabet.families {
            let ranges: Vec<(i64, i64)> = decl.domains.iter().map(|d| d.unwrap_or((-m, m))).collect();
            let mut current = Vec::new();
            fn rec(ranges: &[(i64, i64)], current: &mut Vec<i64>, symbol: char, out: &mut BTreeSet<Generator>) {
                if current.len() == ranges.len() {
                    out.insert(Generator::new(symbol, current.clone()));
                    return;
                }
                let (lo, hi) = ranges[current.len()];
                for v in lo..=hi {
                    current.push(v);
                    rec(ranges, current, symbol, out);
                    current.pop();
                }
            }
            rec(&ranges, &mut current, decl.symbol, &mut out);
        }
        out
    }

    /// Appends relator families (no simplification).
    pub fn quotient_by(&self, extra: &[RelatorSchema]) -> Result<PresentationSchema> {
        let mut p = self.clone();
        p.relators.extend(extra.iter().cloned());
        p.validate()?;
        Ok(p)
    }
}

/// Canonical forms of nontrivial words, as a set.
pub fn canonical_set<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> BTreeSet<Word> {
    words
        .into_iter()
        .map(Word::canonical_relator)
        .filter(|w| !w.is_identity())
        .collect()
}

/// Whether two lists of relator families have the same instances over the
/// window, up to rotation and inversion.
pub fn schema_sets_equal(a: &[RelatorSchema], b: &[RelatorSchema], m: i64) -> bool {
    let words = |s: &[RelatorSchema]| -> Vec<Word> { s.iter().flat_map(|r| r.enumerate_instances(m)).collect() };
    canonical_set(&words(a)) == canonical_set(&words(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{FamilyDecl, ALPHA, SIGMA};

    fn v(name: &str) -> Affine {
        Affine::var(name)
    }

    fn s(idx: Affine, e: i64) -> LetterTemplate {
        LetterTemplate::new(SIGMA, vec![idx], e)
    }

    fn commute() -> RelatorSchema {
        RelatorSchema::new(
            "comm",
            vec![Param::ranged("i", 1, 4), Param::ranged("j", 1, 4)],
            vec![Guard::far_apart("i", "j")],
            vec![s(v("i"), 1), s(v("j"), 1), s(v("i"), -1), s(v("j"), -1)],
        )
    }

    fn alpha_m01() -> RelatorSchema {
        RelatorSchema::new(
            "a0",
            vec![Param::window("m")],
            vec![],
            vec![LetterTemplate::new(
                ALPHA,
                vec![v("m"), Affine::constant(0), Affine::constant(1)],
                1,
            )],
        )
    }

    #[test]
    fn affine_display_and_eval() {
        let e = v("m").offset(2);
        assert_eq!(e.to_string(), "m+2");
        assert_eq!(v("k").offset(-1).to_string(), "k-1");
        assert_eq!(Affine::constant(-3).to_string(), "-3");
        assert_eq!(v("i").add(&v("j").scale(-1)).to_string(), "i-j");
        let b: Bindings = [("m".to_string(), 5)].into_iter().collect();
        assert_eq!(e.eval(&b).unwrap(), 7);
        assert!(matches!(v("k").eval(&b), Err(Error::UnboundParameter(p)) if p == "k"));
    }

    #[test]
    fn guard_rejects() {
        let r = commute();
        assert!(matches!(r.at(&[("i", 2), ("j", 3)]), Err(Error::GuardViolated(g)) if g == "|i-j|>1"));
        assert_eq!(r.at(&[("i", 1), ("j", 3)]).unwrap().to_string(), "s1 s3 s1^-1 s3^-1");
        assert!(matches!(r.at(&[("i", 1)]), Err(Error::UnboundParameter(_))));
    }

    #[test]
    fn enumerate_window() {
        let words = alpha_m01().enumerate_instances(1);
        let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["a[-1,0,1]", "a[0,0,1]", "a[1,0,1]"]);
        let mut r = alpha_m01();
        r.guards.push(Guard::new(v("m"), CmpOp::Ge, Affine::constant(1)));
        assert!(r.enumerate_instances(0).is_empty());
        // six ordered pairs from 1..4 with |i-j| > 1
        assert_eq!(commute().enumerate_instances(0).len(), 6);
    }

    #[test]
    fn box_truncation_restricts_unbounded_slots() {
        let alphabet = Alphabet::new(vec![FamilyDecl::new(ALPHA, vec![None, None, Some((1, 2))])]);
        let r = RelatorSchema::new(
            "shift",
            vec![Param::window("m")],
            vec![],
            vec![
                LetterTemplate::new(ALPHA, vec![v("m"), Affine::constant(0), Affine::constant(1)], 1),
                LetterTemplate::new(
                    ALPHA,
                    vec![v("m").offset(2), Affine::constant(0), Affine::constant(1)],
                    -1,
                ),
            ],
        );
        let labels: Vec<String> = r.enumerate_in_box(&alphabet, 1).into_iter().map(|i| i.label).collect();
        assert_eq!(labels, ["shift[m=-1]"]);
    }

    #[test]
    fn sets_equal_up_to_rotation_and_inverse() {
        let x = |i: i64, e| s(Affine::constant(i), e);
        let a = RelatorSchema::new("a", vec![], vec![], vec![x(1, 1), x(2, 1), x(1, -1), x(2, -1)]);
        let b = RelatorSchema::new("b", vec![], vec![], vec![x(2, 1), x(1, 1), x(2, -1), x(1, -1)]);
        assert!(schema_sets_equal(std::slice::from_ref(&a), &[b], 0));
        let c = RelatorSchema::new("c", vec![], vec![], vec![x(1, 1), x(3, 1), x(1, -1), x(3, -1)]);
        assert!(!schema_sets_equal(&[a], &[c], 0));
    }

    /// Brute-force orbit of a word under rotation and inversion.
    fn orbit(w: &Word) -> BTreeSet<Vec<(Generator, i64)>> {
        let mut out = BTreeSet::new();
        for base in [w.clone(), w.inverse()] {
            let letters: Vec<(Generator, i64)> = base.letters().map(|(g, e)| (g.clone(), e)).collect();
            for cut in 0..letters.len().max(1) {
                let rotated: Vec<_> = letters[cut..].iter().chain(letters[..cut].iter()).cloned().collect();
                out.insert(rotated);
            }
        }
        out
    }

    #[test]
    fn canonical_form_agrees_with_orbit_oracle() {
        let x: Word = "s1 s2 s1^-1 s2^-1".parse().unwrap();
        let y: Word = "s2 s1 s2^-1 s1^-1".parse().unwrap();
        assert_eq!(orbit(&x), orbit(&y));
        assert_eq!(x.canonical_relator(), y.canonical_relator());
        let z: Word = "s1 s2 s1 s2^-1 s1^-1 s2^-1".parse().unwrap();
        assert_ne!(orbit(&x), orbit(&z));
        assert_ne!(x.canonical_relator(), z.canonical_relator());
    }
}
