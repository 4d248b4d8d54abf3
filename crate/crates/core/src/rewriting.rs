//! Reidemeister–Schreier rewriting for the kernel of `φ : G_n → Z × Z`
//! with the Schreier transversal `{σ_1^m ρ_1^k}`.

use crate::error::{Error, Result};
use crate::schema::{Affine, LetterTemplate, Param, RelatorSchema};
use crate::word::{AbelianImage, Generator, Word, ALPHA, BETA, RHO, SIGMA};

/// The transversal element `σ_1^m ρ_1^k`.
pub fn representative(key: AbelianImage) -> Word {
    Word::from_letters([(Generator::sigma(1), key.m), (Generator::rho(1), key.k)])
}

pub fn coset_of(w: &Word) -> Result<AbelianImage> {
    w.phi_image()
}

/// A generator `S_{λ,a}` of the kernel together with its expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGenerator {
    pub name: Generator,
    pub expansion: Word,
}

fn check_letter(letter: &Generator, n: i64) -> Result<()> {
    if !letter.is_sigma_rho() {
        return Err(Error::ForeignLetter(letter.to_string()));
    }
    let i = letter.indices[0];
    if i < 1 || i > n - 1 {
        return Err(Error::IndexOutOfDomain(letter.to_string()));
    }
    Ok(())
}

/// Name of `S_{λ,a}` for `λ = σ_1^m ρ_1^k`: `α_{m,k,i}` for `σ_i`, `β_{m,k,i}` for `ρ_i`.
fn name_of(key: AbelianImage, letter: &Generator) -> Generator {
    let i = letter.indices[0];
    if letter.family == SIGMA {
        Generator::alpha(key.m, key.k, i)
    } else {
        Generator::beta(key.m, key.k, i)
    }
}

fn step(key: AbelianImage, letter: &Generator) -> AbelianImage {
    if letter.family == SIGMA {
        AbelianImage::new(key.m + 1, key.k)
    } else {
        AbelianImage::new(key.m, key.k + 1)
    }
}

pub fn schreier_generator(key: AbelianImage, letter: &Generator, n: i64) -> Result<SchreierGenerator> {
    check_letter(letter, n)?;
    Ok(SchreierGenerator {
        name: name_of(key, letter),
        expansion: expansion_of(key, letter),
    })
}

fn expansion_of(key: AbelianImage, letter: &Generator) -> Word {
    representative(key)
        .concat(&Word::letter(letter.clone(), 1))
        .concat(&representative(step(key, letter)).inverse())
}

/// True iff `λa` and the representative of its coset are freely equal.
pub fn is_trivial_pair(key: AbelianImage, letter: &Generator) -> bool {
    expansion_of(key, letter).is_identity()
}

/// Rewrites `w` read from coset `start`: letter `a^{+1}` contributes
/// `S_{K,a}` with `K` the coset before it, `a^{-1}` contributes `S_{K,a}^{-1}`
/// with `K` the coset after it.
pub fn tau_from(start: AbelianImage, w: &Word) -> Result<Word> {
    let mut coset = start;
    let mut letters = Vec::with_capacity(w.length() as usize);
    for (g, e) in w.letters() {
        if !g.is_sigma_rho() {
            return Err(Error::ForeignLetter(g.to_string()));
        }
        if e > 0 {
            letters.push((name_of(coset, g), 1));
            coset = step(coset, g);
        } else {
            coset = match g.family {
                SIGMA => AbelianImage::new(coset.m - 1, coset.k),
                _ => AbelianImage::new(coset.m, coset.k - 1),
            };
            letters.push((name_of(coset, g), -1));
        }
    }
    Ok(Word::from_letters(letters))
}

/// The rewriting process `τ` on a kernel element.
pub fn tau(w: &Word) -> Result<Word> {
    let image = w.phi_image()?;
    if image != AbelianImage::default() {
        return Err(Error::NotKernelElement {
            word: w.to_string(),
            m: image.m,
            k: image.k,
        });
    }
    tau_from(AbelianImage::default(), w)
}

/// `τ(λ r λ^{-1})` for `λ = σ_1^m ρ_1^k`.
pub fn rewrite_relator(key: AbelianImage, relator: &Word) -> Result<Word> {
    tau(&relator.conjugate(&representative(key)))
}

/// The core of `τ(λ r λ^{-1})` with the conjugating trivial generators removed.
pub fn tau_at_coset(key: AbelianImage, relator: &Word) -> Result<Word> {
    let image = relator.phi_image()?;
    if image != AbelianImage::default() {
        return Err(Error::NotKernelElement {
            word: relator.to_string(),
            m: image.m,
            k: image.k,
        });
    }
    tau_from(key, relator)
}

/// Maps the renamed generators `α_j`, `β_{m,j}` back to `α_{0,0,j}`, `β_{m,0,j}`.
pub fn unrename(g: &Generator) -> Generator {
    match (g.family, g.indices.as_slice()) {
        (ALPHA, [j]) => Generator::alpha(0, 0, *j),
        (BETA, [m, j]) => Generator::beta(*m, 0, *j),
        _ => g.clone(),
    }
}

/// Substitutes every `α`/`β` letter by its expansion over `σ`/`ρ`.
pub fn expand(w: &Word) -> Word {
    w.map_letters(|g| {
        let g = unrename(g);
        match (g.family, g.indices.as_slice()) {
            (ALPHA, [m, k, i]) => expansion_of(AbelianImage::new(*m, *k), &Generator::sigma(*i)),
            (BETA, [m, k, i]) => expansion_of(AbelianImage::new(*m, *k), &Generator::rho(*i)),
            _ => Word::letter(g.clone(), 1),
        }
    })
}

/// Rewrites a relator family over `σ`/`ρ` at a formal coset `(m, k)`.
///
/// Coset offsets along the template are integers, since each letter moves
/// the coset by a unit step independent of its index.
pub fn rewrite_schema(schema: &RelatorSchema, label: &str) -> Result<RelatorSchema> {
    for p in &schema.params {
        if p.name == "m" || p.name == "k" {
            return Err(Error::Parse {
                line: 0,
                col: 0,
                msg: format!("parameter `{}` clashes with the coset parameters", p.name),
            });
        }
    }
    let (mut dm, mut dk) = (0i64, 0i64);
    let mut template = Vec::new();
    for l in &schema.template {
        let (target, is_sigma) = match l.family {
            SIGMA => (ALPHA, true),
            RHO => (BETA, false),
            _ => return Err(Error::ForeignLetter(l.to_string())),
        };
        let index = l.indices[0].clone();
        for _ in 0..l.exponent.unsigned_abs() {
            let sign = l.exponent.signum();
            if sign < 0 {
                if is_sigma {
                    dm -= 1
                } else {
                    dk -= 1
                }
            }
            template.push(LetterTemplate::new(
                target,
                vec![Affine::var("m").offset(dm), Affine::var("k").offset(dk), index.clone()],
                sign,
            ));
            if sign > 0 {
                if is_sigma {
                    dm += 1
                } else {
                    dk += 1
                }
            }
        }
    }
    if (dm, dk) != (0, 0) {
        return Err(Error::NotKernelElement {
            word: schema.to_string(),
            m: dm,
            k: dk,
        });
    }
    let mut params = schema.params.clone();
    params.push(Param::window("m"));
    params.push(Param::window("k"));
    Ok(RelatorSchema::new(label, params, schema.guards.clone(), template))
}
