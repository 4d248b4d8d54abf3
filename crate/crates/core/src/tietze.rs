//! Tietze transformations on box truncations of presentation schemas.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::abelian::{abelian_invariants, AbelianInvariants};
use crate::error::{Error, Result};
use crate::schema::{canonical_set, in_box, PresentationSchema};
use crate::word::{Alphabet, FamilyDecl, Generator, Word};

/// What a single elimination request did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Eliminated,
    /// The target was already gone.
    NoOp,
    /// The defining relator lies outside the box.
    Skipped,
}

/// A finite presentation obtained by truncating a schema to the box `[-M, M]`.
///
/// Generators whose unbounded indices lie in `[-(M - margin), M - margin]`
/// form the interior, where boundary effects of the truncation cannot reach.
#[derive(Debug, Clone)]
pub struct TruncatedPresentation {
    pub name: String,
    pub alphabet: Alphabet,
    pub window: i64,
    pub margin: i64,
    generators: BTreeSet<Generator>,
    relators: BTreeMap<String, Word>,
    occurs: HashMap<Generator, BTreeSet<String>>,
    definitions: Vec<(Generator, Word)>,
    transcript: Vec<String>,
    audit: Option<Audit>,
}

/// Abelian invariants checked after every elimination.
#[derive(Debug, Clone, Default)]
pub struct Audit {
    baseline: Option<AbelianInvariants>,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl TruncatedPresentation {
    pub fn from_schema(schema: &PresentationSchema, window: i64, margin: i64) -> Self {
        let mut t = TruncatedPresentation {
            name: schema.name.clone(),
            alphabet: schema.alphabet.clone(),
            window,
            margin,
            generators: schema.box_generators(window),
            relators: BTreeMap::new(),
            occurs: HashMap::new(),
            definitions: Vec::new(),
            transcript: Vec::new(),
            audit: None,
        };
        for inst in schema.box_instances(window) {
            t.insert(inst.label, inst.word.cyclically_reduced());
        }
        t
    }

    fn insert(&mut self, label: String, word: Word) {
        if word.is_identity() {
            return;
        }
        for g in word.generators() {
            self.occurs.entry(g.clone()).or_default().insert(label.clone());
        }
        self.relators.insert(label, word);
    }

    fn remove(&mut self, label: &str) -> Option<Word> {
        let word = self.relators.remove(label)?;
        for g in word.generators() {
            if let Some(set) = self.occurs.get_mut(g) {
                set.remove(label);
            }
        }
        Some(word)
    }

    pub fn generators(&self) -> &BTreeSet<Generator> {
        &self.generators
    }

    pub fn relators(&self) -> impl Iterator<Item = (&String, &Word)> + '_ {
        self.relators.iter()
    }

    pub fn relator(&self, label: &str) -> Option<&Word> {
        self.relators.get(label)
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn transcript(&self) -> &[String] {
        &self.transcript
    }

    /// Starts comparing abelian invariants before and after each elimination.
    pub fn enable_audit(&mut self) {
        let baseline = Some(abelian_invariants(self));
        self.audit = Some(Audit {
            baseline,
            ..Audit::default()
        });
    }

    pub fn audit(&self) -> Option<&Audit> {
        self.audit.as_ref()
    }

    fn audit_step(&mut self, step: &str, rebase: bool) {
        if self.audit.is_none() {
            return;
        }
        let now = abelian_invariants(self);
        let audit = self.audit.as_mut().unwrap();
        if !rebase {
            audit.checks += 1;
            if audit.baseline.as_ref() != Some(&now) {
                let before = audit.baseline.as_ref().map_or("-".to_string(), |b| b.to_string());
                audit.failures.push(format!("{step}: {before} became {now}"));
            }
        }
        audit.baseline = Some(now);
    }

    pub fn note(&mut self, line: String) {
        self.transcript.push(line);
    }

    /// Eliminated generators with their defining expressions, in order.
    pub fn definitions(&self) -> &[(Generator, Word)] {
        &self.definitions
    }

    pub fn interior_radius(&self) -> i64 {
        self.window - self.margin
    }

    pub fn is_interior(&self, g: &Generator) -> bool {
        in_box(&self.alphabet, g, self.interior_radius())
    }

    pub fn interior_generators(&self) -> BTreeSet<Generator> {
        self.generators
            .iter()
            .filter(|g| self.is_interior(g))
            .cloned()
            .collect()
    }

    /// Canonical forms of the relators involving interior generators only.
    pub fn interior_relators(&self) -> BTreeSet<Word> {
        canonical_set(
            self.relators
                .values()
                .filter(|w| w.generators().all(|g| self.is_interior(g))),
        )
    }

    /// Adds a generator family to the alphabet, e.g. before renaming into it.
    pub fn declare(&mut self, decl: FamilyDecl) {
        if self.alphabet.family(decl.symbol, decl.arity()).is_none() {
            self.alphabet.families.push(decl);
        }
    }

    fn replace_everywhere(&mut self, target: &Generator, expr: &Word) {
        let labels: Vec<String> = self
            .occurs
            .remove(target)
            .map(|s| s.into_iter().collect())
            .unwrap_or_default();
        for label in labels {
            if let Some(word) = self.remove(&label) {
                let replaced = word.substitute(target, expr).cyclically_reduced();
                self.insert(label, replaced);
            }
        }
        self.generators.remove(target);
    }

    /// Solves relator `label` for `target` and substitutes the solution
    /// everywhere, removing both the relator and the generator.
    pub fn eliminate(&mut self, target: &Generator, label: &str) -> Result<Outcome> {
        if !self.generators.contains(target) {
            self.transcript.push(format!("no-op {target}: already eliminated"));
            return Ok(Outcome::NoOp);
        }
        let Some(word) = self.relators.get(label) else {
            self.transcript
                .push(format!("skip {target} via {label}: relator outside the box"));
            return Ok(Outcome::Skipped);
        };
        let reject = |reason: &str| Error::Elimination {
            target: target.to_string(),
            relator: label.to_string(),
            reason: reason.to_string(),
        };
        let positions: Vec<usize> = (0..word.runs().len())
            .filter(|&i| &word.runs()[i].0 == target)
            .collect();
        if positions.len() != 1 {
            return Err(reject(&format!("target occurs in {} runs of {word}", positions.len())));
        }
        let p = positions[0];
        let e = word.runs()[p].1;
        if e.abs() != 1 {
            return Err(reject(&format!("target has exponent {e} in {word}")));
        }
        let u = Word::from_letters(word.runs()[..p].iter().cloned());
        let v = Word::from_letters(word.runs()[p + 1..].iter().cloned());
        // u t v = 1 gives t = u^-1 v^-1, and u t^-1 v = 1 gives t = v u
        let expr = if e == 1 {
            u.inverse().concat(&v.inverse())
        } else {
            v.concat(&u)
        };
        if !word.substitute(target, &expr).is_identity() {
            return Err(reject("defining relator does not reduce to the identity"));
        }
        self.remove(label);
        self.replace_everywhere(target, &expr);
        self.transcript
            .push(format!("eliminate {target} via {label} := {expr}"));
        self.definitions.push((target.clone(), expr));
        self.audit_step(label, false);
        Ok(Outcome::Eliminated)
    }

    /// Replaces generator `from` by a fresh generator `to`.
    pub fn rename(&mut self, from: &Generator, to: &Generator) -> Result<()> {
        self.alphabet.validate(to)?;
        if !self.generators.contains(from) {
            return Ok(());
        }
        self.replace_everywhere(from, &Word::letter(to.clone(), 1));
        self.generators.insert(to.clone());
        self.transcript.push(format!("rename {from} -> {to}"));
        self.definitions.push((from.clone(), Word::letter(to.clone(), 1)));
        self.audit_step(&format!("rename {from}"), false);
        Ok(())
    }

    /// Adds a relator, e.g. to pass to a quotient. Letters that were already
    /// eliminated are replaced by their expressions.
    pub fn add_relator(&mut self, label: &str, word: Word) -> Result<()> {
        for g in word.generators() {
            self.alphabet.validate(g)?;
        }
        let word = word.map_letters(|g| self.resolve(g)).cyclically_reduced();
        self.transcript.push(format!("add {label} : {word}"));
        self.generators.extend(word.generators().cloned());
        self.insert(label.to_string(), word);
        // a new relator passes to a quotient, so the invariants may change here
        self.audit_step(label, true);
        Ok(())
    }

    /// Eliminates every generator that has a relator of the form `g^{±1}`,
    /// until none is left. Returns the number of eliminations.
    pub fn kill_unit_relators(&mut self) -> usize {
        let mut count = 0;
        loop {
            let unit = self.relators.iter().find_map(|(label, w)| match w.runs() {
                [(g, e)] if e.abs() == 1 => Some((g.clone(), label.clone())),
                _ => None,
            });
            let Some((g, label)) = unit else { break };
            self.eliminate(&g, &label)
                .expect("a unit relator always solves for its letter");
            count += 1;
        }
        count
    }

    /// Reduces exponents of the given involutions mod 2 in every other
    /// relator, until nothing changes. Each `g^2` must be a relator.
    pub fn reduce_involutions(&mut self, involutions: &BTreeSet<Generator>) -> Result<()> {
        let squares: BTreeSet<Word> = involutions.iter().map(|g| Word::letter(g.clone(), 2)).collect();
        for sq in &squares {
            if !self.relators.values().any(|w| w == sq) {
                return Err(Error::Elimination {
                    target: sq.to_string(),
                    relator: "-".into(),
                    reason: "involution relator missing".into(),
                });
            }
        }
        let labels: Vec<String> = self.relators.keys().cloned().collect();
        let mut changed = false;
        for label in labels {
            let w = self.relators[&label].clone();
            if squares.contains(&w) {
                continue;
            }
            let mut cur = w.clone();
            loop {
                let next = Word::from_letters(
                    cur.runs()
                        .iter()
                        .map(|(g, e)| (g.clone(), if involutions.contains(g) { e.rem_euclid(2) } else { *e })),
                )
                .cyclically_reduced();
                if next == cur {
                    break;
                }
                cur = next;
            }
            if cur != w {
                changed = true;
                self.remove(&label);
                self.insert(label, cur);
            }
        }
        if changed {
            self.transcript.push("reduce involution exponents mod 2".into());
        }
        Ok(())
    }

    /// Expression of `g` over the surviving generators.
    pub fn resolve(&self, g: &Generator) -> Word {
        let mut w = Word::letter(g.clone(), 1);
        for (target, expr) in &self.definitions {
            if w.contains(target) {
                w = w.substitute(target, expr);
            }
        }
        w
    }
}
