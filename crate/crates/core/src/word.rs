//! Free-group words over indexed generator alphabets.
//!
//! Words are stored run-length encoded as `(generator, exponent)` pairs and
//! are always freely reduced: adjacent runs never share a generator and no
//! exponent is zero.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SIGMA: char = 's';
pub const RHO: char = 'r';
pub const ALPHA: char = 'a';
pub const BETA: char = 'b';

/// A generator symbol: a family letter plus an index tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub family: char,
    pub indices: Vec<i64>,
}

impl Generator {
    pub fn new(family: char, indices: impl Into<Vec<i64>>) -> Self {
        Generator {
            family,
            indices: indices.into(),
        }
    }

    pub fn sigma(i: i64) -> Self {
        Generator::new(SIGMA, [i])
    }

    pub fn rho(i: i64) -> Self {
        Generator::new(RHO, [i])
    }

    /// `α_{m,k,i}`
    pub fn alpha(m: i64, k: i64, i: i64) -> Self {
        Generator::new(ALPHA, [m, k, i])
    }

    /// `β_{m,k,i}`
    pub fn beta(m: i64, k: i64, i: i64) -> Self {
        Generator::new(BETA, [m, k, i])
    }

    /// The renamed `α_j = α_{0,0,j}`.
    pub fn alpha_j(j: i64) -> Self {
        Generator::new(ALPHA, [j])
    }

    /// The renamed `β_{m,j} = β_{m,0,j}`.
    pub fn beta_j(m: i64, j: i64) -> Self {
        Generator::new(BETA, [m, j])
    }

    pub fn arity(&self) -> usize {
        self.indices.len()
    }

    pub fn is_sigma_rho(&self) -> bool {
        (self.family == SIGMA || self.family == RHO) && self.indices.len() == 1
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.len() == 1 {
            write!(f, "{}{}", self.family, self.indices[0])
        } else {
            write!(f, "{}[", self.family)?;
            for (n, i) in self.indices.iter().enumerate() {
                if n > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "]")
        }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    runs: Vec<(Generator, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn letter(g: Generator, exponent: i64) -> Self {
        Word::from_letters([(g, exponent)])
    }

    /// Builds the freely reduced form of a raw letter sequence.
    pub fn from_letters<I: IntoIterator<Item = (Generator, i64)>>(letters: I) -> Self {
        let mut w = Word::identity();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: Generator, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    pub fn runs(&self) -> &[(Generator, i64)] {
        &self.runs
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters counted with multiplicity.
    pub fn length(&self) -> u64 {
        self.runs.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// Letter-by-letter expansion with exponents ±1.
    pub fn letters(&self) -> impl Iterator<Item = (&Generator, i64)> + '_ {
        self.runs
            .iter()
            .flat_map(|(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> + '_ {
        self.runs.iter().map(|(g, _)| g)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (g, e) in &other.runs {
            w.push(g.clone(), *e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            runs: self.runs.iter().rev().map(|(g, e)| (g.clone(), -e)).collect(),
        }
    }

    /// `by · self · by⁻¹`
    pub fn conjugate(&self, by: &Word) -> Word {
        by.concat(self).concat(&by.inverse())
    }

    pub fn power(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..e.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    pub fn freely_equal(&self, other: &Word) -> bool {
        self == other
    }

    /// Removes cancelling letters at the two ends, treating the word as cyclic.
    pub fn cyclically_reduced(&self) -> Word {
        let mut runs = self.runs.clone();
        loop {
            if runs.len() < 2 {
                break;
            }
            let last = runs.len() - 1;
            if runs[0].0 != runs[last].0 {
                break;
            }
            let (g, e) = runs.pop().unwrap();
            let merged = runs[0].1 + e;
            if merged == 0 {
                runs.remove(0);
            } else {
                runs[0] = (g, merged);
                break;
            }
        }
        Word { runs }
    }

    /// Total exponent of `g`, and the number of runs mentioning it.
    pub fn occurrences(&self, g: &Generator) -> (i64, usize) {
        let mut total = 0;
        let mut runs = 0;
        for (h, e) in &self.runs {
            if h == g {
                total += e;
                runs += 1;
            }
        }
        (total, runs)
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.runs.iter().any(|(h, _)| h == g)
    }

    /// Replaces every occurrence of `g` by `replacement`.
    pub fn substitute(&self, g: &Generator, replacement: &Word) -> Word {
        let inverse = replacement.inverse();
        let mut w = Word::identity();
        for (h, e) in &self.runs {
            if h == g {
                let piece = if *e > 0 { replacement } else { &inverse };
                for _ in 0..e.unsigned_abs() {
                    for (x, f) in &piece.runs {
                        w.push(x.clone(), *f);
                    }
                }
            } else {
                w.push(h.clone(), *e);
            }
        }
        w
    }

    /// Applies `f` to every letter and concatenates the images.
    pub fn map_letters<F>(&self, mut f: F) -> Word
    where
        F: FnMut(&Generator) -> Word,
    {
        let mut w = Word::identity();
        for (g, e) in &self.runs {
            let image = f(g);
            let piece = if *e > 0 { image } else { image.inverse() };
            for _ in 0..e.unsigned_abs() {
                for (x, k) in &piece.runs {
                    w.push(x.clone(), *k);
                }
            }
        }
        w
    }

    /// Lexicographically least word among the cyclic rotations (at run
    /// boundaries) of the cyclic reduction of `self` and of its inverse.
    pub fn canonical_relator(&self) -> Word {
        let base = self.cyclically_reduced();
        if base.runs.len() <= 1 {
            return match base.runs.first() {
                Some((g, e)) => Word {
                    runs: vec![(g.clone(), e.abs())],
                },
                None => base,
            };
        }
        let mut best: Option<Vec<(Generator, i64)>> = None;
        for candidate in [base.clone(), base.inverse()] {
            let n = candidate.runs.len();
            for start in 0..n {
                let rotated: Vec<_> = candidate.runs[start..]
                    .iter()
                    .chain(candidate.runs[..start].iter())
                    .cloned()
                    .collect();
                if best.as_ref().is_none_or(|b| rotated < *b) {
                    best = Some(rotated);
                }
            }
        }
        Word {
            runs: best.unwrap_or_default(),
        }
    }

    /// The abelianization image `φ(w) = (σ-exponent sum, ρ-exponent sum)`.
    pub fn phi_image(&self) -> Result<AbelianImage> {
        let mut image = AbelianImage::default();
        for (g, e) in &self.runs {
            match (g.family, g.arity()) {
                (SIGMA, 1) => image.m += e,
                (RHO, 1) => image.k += e,
                _ => return Err(Error::ForeignLetter(g.to_string())),
            }
        }
        Ok(image)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        for (n, (g, e)) in self.runs.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            letters.push(parse_letter(token)?);
        }
        Ok(Word::from_letters(letters))
    }
}

fn parse_letter(token: &str) -> Result<(Generator, i64)> {
    let err = |msg: &str| Error::Parse {
        line: 1,
        col: 1,
        msg: format!("{msg} in letter `{token}`"),
    };
    let (body, exponent) = match token.split_once('^') {
        Some((b, e)) => (b, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
        None => (token, 1),
    };
    let mut chars = body.chars();
    let family = chars
        .next()
        .filter(|c| c.is_ascii_lowercase())
        .ok_or_else(|| err("missing family letter"))?;
    let rest = chars.as_str();
    let indices = if let Some(inner) = rest.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| err("unclosed bracket"))?;
        inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| err("bad index")))
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![rest.parse::<i64>().map_err(|_| err("bad index"))?]
    };
    Ok((Generator::new(family, indices), exponent))
}

/// Image of a word under `φ : G_n → Z × Z`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AbelianImage {
    pub m: i64,
    pub k: i64,
}

impl AbelianImage {
    pub fn new(m: i64, k: i64) -> Self {
        AbelianImage { m, k }
    }
}

impl Add for AbelianImage {
    type Output = AbelianImage;
    fn add(self, o: AbelianImage) -> AbelianImage {
        AbelianImage::new(self.m + o.m, self.k + o.k)
    }
}

/// Per-slot index domain; `None` means all of Z.
pub type Domain = Option<(i64, i64)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDecl {
    pub symbol: char,
    pub domains: Vec<Domain>,
}

impl FamilyDecl {
    pub fn new(symbol: char, domains: Vec<Domain>) -> Self {
        FamilyDecl { symbol, domains }
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn admits(&self, indices: &[i64]) -> bool {
        indices.len() == self.domains.len()
            && indices
                .iter()
                .zip(&self.domains)
                .all(|(i, d)| d.is_none_or(|(lo, hi)| lo <= *i && *i <= hi))
    }
}

/// The declared generator families of one group instance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub families: Vec<FamilyDecl>,
}

impl Alphabet {
    pub fn new(families: Vec<FamilyDecl>) -> Self {
        Alphabet { families }
    }

    pub fn family(&self, symbol: char, arity: usize) -> Option<&FamilyDecl> {
        self.families.iter().find(|f| f.symbol == symbol && f.arity() == arity)
    }

    pub fn validate(&self, g: &Generator) -> Result<()> {
        let decl = self
            .family(g.family, g.arity())
            .ok_or_else(|| Error::UndeclaredFamily(g.to_string()))?;
        if decl.admits(&g.indices) {
            Ok(())
        } else {
            Err(Error::IndexOutOfDomain(g.to_string()))
        }
    }

    /// Validates every letter and returns the freely reduced word.
    pub fn normalize<I: IntoIterator<Item = (Generator, i64)>>(&self, letters: I) -> Result<Word> {
        let letters: Vec<_> = letters.into_iter().collect();
        for (g, _) in &letters {
            self.validate(g)?;
        }
        Ok(Word::from_letters(letters))
    }
}
