//! Text format for presentation schemas.
//!
//! ```text
//! group GVB n=4
//! gen s arity 1 range 1..n-1
//! gen a arity 3 range *,*,1..n-1
//! rel r1 forall i, j where |i-j|>1 : s[i] s[j] s[i]^-1 s[j]^-1
//! ```
//!
//! Parameters listed without `in lo..hi` take the domain of the bounded index
//! slots they fill directly, or range over the truncation window otherwise.
//! Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::schema::{Affine, CmpOp, Guard, LetterTemplate, Param, PresentationSchema, RelatorSchema};
use crate::word::{Alphabet, Domain, FamilyDecl};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    n: Option<i64>,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, n: Option<i64>) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            n,
            _src: src,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let want: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&want) {
            // keywords must not run into an identifier
            let next = self.chars.get(self.pos + want.len());
            let is_word = want.iter().all(|c| c.is_ascii_alphabetic());
            if is_word && next.is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                return false;
            }
            self.pos += want.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if start == self.pos || !self.chars[start].is_ascii_alphabetic() {
            self.pos = start;
            return Err(self.err("expected identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// A run of non-whitespace characters.
    fn raw_token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && !self.chars[self.pos].is_whitespace() && self.chars[self.pos] != ':' {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.err("expected integer")
        })
    }

    fn unsigned(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            self.chars[start..self.pos].iter().collect::<String>().parse().ok()
        }
    }

    fn term(&mut self) -> Result<Affine> {
        if let Some(c) = self.unsigned() {
            let save = self.pos;
            let star = self.eat("*");
            match self.peek() {
                Some(ch) if ch.is_ascii_alphabetic() && (star || self.pos == save) => {
                    let v = self.variable()?;
                    Ok(v.scale(c))
                }
                _ => {
                    if star {
                        return Err(self.err("expected parameter after `*`"));
                    }
                    Ok(Affine::constant(c))
                }
            }
        } else {
            self.variable()
        }
    }

    fn variable(&mut self) -> Result<Affine> {
        let name = self.ident()?;
        if name == "n" {
            match self.n {
                Some(v) => Ok(Affine::constant(v)),
                None => Err(self.err("`n` used but no `group ... n=K` line precedes it")),
            }
        } else {
            Ok(Affine::var(&name))
        }
    }

    fn affine(&mut self) -> Result<Affine> {
        let negate = self.eat("-");
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(-1);
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some('-') if self.chars.get(self.pos + 1) != Some(&'>') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t.scale(-1));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn constant(&mut self) -> Result<i64> {
        let a = self.affine()?;
        if a.terms.is_empty() {
            Ok(a.constant)
        } else {
            Err(self.err("expected a constant expression"))
        }
    }

    fn range(&mut self) -> Result<(i64, i64)> {
        let lo = self.constant()?;
        self.expect("..")?;
        let hi = self.constant()?;
        Ok((lo, hi))
    }

    fn op(&mut self) -> Result<CmpOp> {
        for (s, op) in [
            ("<=", CmpOp::Le),
            (">=", CmpOp::Ge),
            ("!=", CmpOp::Ne),
            ("<", CmpOp::Lt),
            (">", CmpOp::Gt),
            ("=", CmpOp::Eq),
        ] {
            if self.eat(s) {
                return Ok(op);
            }
        }
        Err(self.err("expected comparison operator"))
    }

    fn guard(&mut self) -> Result<Guard> {
        let (lhs, abs_lhs) = if self.eat("|") {
            let a = self.affine()?;
            self.expect("|")?;
            (a, true)
        } else {
            (self.affine()?, false)
        };
        let op = self.op()?;
        let rhs = self.affine()?;
        Ok(Guard { lhs, abs_lhs, op, rhs })
    }

    fn letter(&mut self, alphabet: &Alphabet) -> Result<LetterTemplate> {
        self.skip_ws();
        let col = self.pos;
        let family = match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_lowercase() => *c,
            _ => return Err(self.err("expected a letter such as `s[i]`")),
        };
        self.pos += 1;
        let indices = if self.chars.get(self.pos) == Some(&'[') {
            self.pos += 1;
            let mut idx = vec![self.affine()?];
            while self.eat(",") {
                idx.push(self.affine()?);
            }
            self.expect("]")?;
            idx
        } else {
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected index after family letter"));
            }
            let v: i64 = self.chars[start..self.pos].iter().collect::<String>().parse().unwrap();
            vec![Affine::constant(v)]
        };
        let exponent = if self.chars.get(self.pos) == Some(&'^') {
            self.pos += 1;
            self.int()?
        } else {
            1
        };
        if exponent == 0 {
            return Err(self.err("zero exponent"));
        }
        if alphabet.family(family, indices.len()).is_none() {
            let pos = self.pos;
            self.pos = col;
            let e = if alphabet.families.iter().any(|f| f.symbol == family) {
                self.err(format!(
                    "arity mismatch: family `{family}` has no arity {}",
                    indices.len()
                ))
            } else {
                self.err(format!("undeclared family `{family}`"))
            };
            self.pos = pos;
            return Err(e);
        }
        Ok(LetterTemplate::new(family, indices, exponent))
    }
}

fn parse_gen(c: &mut Cursor) -> Result<FamilyDecl> {
    c.skip_ws();
    let symbol = match c.chars.get(c.pos) {
        Some(ch) if ch.is_ascii_lowercase() => *ch,
        _ => return Err(c.err("expected a lowercase family letter")),
    };
    c.pos += 1;
    c.expect("arity")?;
    let arity = c.int()?;
    if !(1..=8).contains(&arity) {
        return Err(c.err("arity must be between 1 and 8"));
    }
    let mut domains: Vec<Domain> = vec![None; arity as usize];
    if c.eat("range") {
        for (slot, d) in domains.iter_mut().enumerate() {
            if slot > 0 {
                c.expect(",")?;
            }
            if !c.eat("*") {
                *d = Some(c.range()?);
            }
        }
    }
    if !c.at_end() {
        return Err(c.err("unexpected trailing input"));
    }
    Ok(FamilyDecl::new(symbol, domains))
}

fn parse_rel(c: &mut Cursor, alphabet: &Alphabet) -> Result<RelatorSchema> {
    let mut label = format!("L{}", c.line);
    let save = c.pos;
    let first = c.raw_token();
    if first.is_empty() || first == "forall" || first == "where" {
        c.pos = save;
    } else {
        label = first;
    }
    let mut declared: Vec<(String, Option<(i64, i64)>)> = Vec::new();
    if c.eat("forall") {
        loop {
            let name = c.ident()?;
            if name == "n" {
                return Err(c.err("`n` is reserved"));
            }
            let range = if c.eat("in") { Some(c.range()?) } else { None };
            declared.push((name, range));
            if !c.eat(",") {
                break;
            }
        }
    }
    let mut guards = Vec::new();
    if c.eat("where") {
        loop {
            guards.push(c.guard()?);
            if !c.eat(",") {
                break;
            }
        }
    }
    c.expect(":")?;
    let mut template = Vec::new();
    while !c.at_end() {
        template.push(c.letter(alphabet)?);
    }
    if template.is_empty() {
        return Err(c.err("empty relator"));
    }

    let mut inferred: BTreeMap<&str, (i64, i64)> = BTreeMap::new();
    for l in &template {
        let decl = alphabet.family(l.family, l.indices.len()).unwrap();
        for (a, d) in l.indices.iter().zip(&decl.domains) {
            if let (Some(p), Some((lo, hi))) = (a.as_var(), d) {
                let e = inferred.entry(p).or_insert((*lo, *hi));
                *e = (e.0.max(*lo), e.1.min(*hi));
            }
        }
    }
    let params: Vec<Param> = declared
        .iter()
        .map(|(name, range)| Param {
            name: name.clone(),
            range: range.or_else(|| inferred.get(name.as_str()).copied()),
        })
        .collect();
    let used = template
        .iter()
        .flat_map(|l| l.indices.iter())
        .chain(guards.iter().flat_map(|g| [&g.lhs, &g.rhs]))
        .flat_map(|a| a.vars());
    for v in used {
        if !params.iter().any(|p| p.name == v) {
            return Err(Error::Parse {
                line: c.line,
                col: 1,
                msg: format!("parameter `{v}` is not quantified"),
            });
        }
    }
    Ok(RelatorSchema {
        label,
        params,
        guards,
        template,
    })
}

pub fn parse_presentation(text: &str) -> Result<PresentationSchema> {
    let mut name = String::from("unnamed");
    let mut n = None;
    let mut families = Vec::new();
    let mut relators = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut c = Cursor::new(raw, line, n);
        if c.eat("group") {
            name = c.ident()?;
            if c.eat("n") {
                c.expect("=")?;
                n = Some(c.int()?);
            }
            if !c.at_end() {
                return Err(c.err("unexpected trailing input"));
            }
        } else if c.eat("gen") {
            let decl = parse_gen(&mut c)?;
            if families
                .iter()
                .any(|f: &FamilyDecl| f.symbol == decl.symbol && f.arity() == decl.arity())
            {
                return Err(Error::Parse {
                    line,
                    col: 1,
                    msg: format!("family `{}` with arity {} declared twice", decl.symbol, decl.arity()),
                });
            }
            families.push(decl);
        } else if c.eat("rel") {
            let alphabet = Alphabet::new(families.clone());
            relators.push(parse_rel(&mut c, &alphabet)?);
        } else {
            return Err(c.err("expected `group`, `gen` or `rel`"));
        }
    }
    Ok(PresentationSchema {
        name,
        n,
        alphabet: Alphabet::new(families),
        relators,
    })
}

/// Writes `p` in the text format; `parse_presentation` reads it back unchanged.
pub fn emit(p: &PresentationSchema) -> String {
    let mut out = String::new();
    match p.n {
        Some(n) => writeln!(out, "group {} n={n}", p.name).unwrap(),
        None => writeln!(out, "group {}", p.name).unwrap(),
    }
    for f in &p.alphabet.families {
        write!(out, "gen {} arity {}", f.symbol, f.arity()).unwrap();
        if f.domains.iter().any(|d| d.is_some()) {
            let slots: Vec<String> = f
                .domains
                .iter()
                .map(|d| match d {
                    Some((lo, hi)) => format!("{lo}..{hi}"),
                    None => "*".to_string(),
                })
                .collect();
            write!(out, " range {}", slots.join(",")).unwrap();
        }
        out.push('\n');
    }
    for r in &p.relators {
        writeln!(out, "{r}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "group T n=5\ngen s arity 1 range 1..n-1\n";

    #[test]
    fn commuting_braid_schema() {
        let p = parse_presentation(&format!(
            "{HEADER}rel forall i,j where |i-j|>1 : s[i] s[j] s[i]^-1 s[j]^-1\n"
        ))
        .unwrap();
        let r = &p.relators[0];
        assert_eq!(r.label, "L3");
        assert_eq!(r.params, vec![Param::ranged("i", 1, 4), Param::ranged("j", 1, 4)]);
        assert_eq!(r.guards, vec![Guard::far_apart("i", "j")]);
        assert_eq!(r.enumerate_instances(0).len(), 6);
    }

    #[test]
    fn empty_relator_is_a_syntax_error() {
        let err = parse_presentation(&format!("{HEADER}rel foo :\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_presentation(&format!("{HEADER}rel foo\n")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn semantic_errors_carry_positions() {
        let err = parse_presentation(&format!("{HEADER}rel x : s[1] r[1]\n")).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                col: 14,
                msg: "undeclared family `r`".into()
            }
        );
        let err = parse_presentation(&format!("{HEADER}rel x : s[1,2]\n")).unwrap_err();
        assert!(err.to_string().contains("arity mismatch"), "{err}");
        let err = parse_presentation(&format!("{HEADER}rel x : s[i]\n")).unwrap_err();
        assert!(err.to_string().contains("not quantified"), "{err}");
        let err = parse_presentation("gen s arity 1 range 1..n-1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn literal_letters_and_affine_indices() {
        let p = parse_presentation(
            "group D\ngen a arity 3 range *,*,1..2\ngen a arity 1 range 3..4\n\
             rel x forall m, k : a[m,k+1,2] a3 a[-m+2,2*k,1]^-2\n",
        )
        .unwrap();
        let r = &p.relators[0];
        assert_eq!(r.params, vec![Param::window("m"), Param::window("k")]);
        let w = r.at(&[("m", 1), ("k", -1)]).unwrap();
        assert_eq!(w.to_string(), "a[1,0,2] a3 a[1,-2,1]^-2");
        assert_eq!(
            emit(&p).lines().last().unwrap(),
            "rel x forall m, k : a[m,k+1,2] a[3] a[-m+2,2*k,1]^-2"
        );
    }

    #[test]
    fn round_trip() {
        let text = format!(
            "{HEADER}gen b arity 2 range *,3..4\n\
             rel q forall i in 1..3, m where i!=2, m>=-1 : s[i] b[m+1,3] s[i+1]^-1 b[m,3]^-1\n"
        );
        let p = parse_presentation(&text).unwrap();
        let again = parse_presentation(&emit(&p)).unwrap();
        assert_eq!(p, again);
        assert_eq!(emit(&again), emit(&p));
    }
}
