//! Exact integer linear algebra for abelianized presentations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use rayon::prelude::*;

use crate::catalog::{catalog, GroupFamily};
use crate::error::Result;
use crate::scripts::simplified_truncation;
use crate::tietze::TruncatedPresentation;
use crate::word::{Generator, Word};

/// A dense matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(t, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += f * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * f;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// `col[dst] += f * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * f;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Whitespace-separated rows, one per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

/// Smith normal form. The pivot is the entry of least absolute value in the
/// remaining block, ties going to the lowest `(row, col)`.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfResult {
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        let mut found = false;
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            found = true;
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if !d.get(i, t).is_zero() {
                    let q = -(d.get(i, t) / &p);
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= d.get(i, t).is_zero();
                }
            }
            for j in t + 1..c {
                if !d.get(t, j).is_zero() {
                    let q = -(d.get(t, j) / &p);
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= d.get(t, j).is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if !found {
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> = (0..r.min(c))
        .map(|i| d.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect();
    let free_rank = c - invariant_factors.len();
    SnfResult {
        d,
        u,
        v,
        invariant_factors,
        free_rank,
    }
}

/// Sparse row: sorted `(column, nonzero value)` pairs.
type SparseRow = Vec<(usize, BigInt)>;

fn combine(a: &SparseRow, fa: &BigInt, b: &SparseRow, fb: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        let (col, v) = if take_a {
            i += 1;
            (a[i - 1].0, &a[i - 1].1 * fa)
        } else if take_b {
            j += 1;
            (b[j - 1].0, &b[j - 1].1 * fb)
        } else {
            i += 1;
            j += 1;
            (a[i - 1].0, &a[i - 1].1 * fa + &b[j - 1].1 * fb)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// An integer row lattice kept in echelon form: one basis row per leading column.
#[derive(Debug, Clone, Default)]
pub struct Lattice {
    cols: usize,
    basis: BTreeMap<usize, SparseRow>,
}

impl Lattice {
    pub fn new(cols: usize) -> Self {
        Lattice {
            cols,
            basis: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds a vector to the generating set.
    pub fn insert(&mut self, mut row: SparseRow) {
        while let Some((c, lead)) = row.first().cloned() {
            let Some(p) = self.basis.get(&c) else {
                if lead.is_negative() {
                    for e in row.iter_mut() {
                        e.1 = -e.1.clone();
                    }
                }
                self.basis.insert(c, row);
                return;
            };
            let a = p[0].1.clone();
            if lead.is_multiple_of(&a) {
                row = combine(&row, &BigInt::one(), p, &-(&lead / &a));
                continue;
            }
            // unimodular change of basis on (p, row)
            let e = a.extended_gcd(&lead);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let new_p = combine(p, &s, &row, &t);
            let new_row = combine(&row, &(&a / &g), p, &-(&lead / &g));
            self.basis.insert(c, new_p);
            row = new_row;
        }
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        while let Some((c, lead)) = row.first().cloned() {
            match self.basis.get(&c) {
                Some(p) if lead.is_multiple_of(&p[0].1) => {
                    row = combine(&row, &BigInt::one(), p, &-(&lead / &p[0].1));
                }
                _ => return row,
            }
        }
        row
    }

    /// Whether `row` lies in the lattice.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Invariant factors greater than one of `Z^cols / L`.
    pub fn torsion(&self) -> Vec<BigInt> {
        let mut rows: Vec<SparseRow> = self.basis.values().cloned().collect();
        let mut dropped = BTreeSet::new();
        // a basis row with a unit leading entry splits off a copy of Z with its column
        let mut i = 0;
        while i < rows.len() {
            let (c, lead) = rows[i][0].clone();
            if lead.abs().is_one() {
                let p = rows.swap_remove(i);
                for r in rows.iter_mut() {
                    if let Ok(pos) = r.binary_search_by_key(&c, |e| e.0) {
                        let f = -(&r[pos].1 * &lead);
                        *r = combine(r, &BigInt::one(), &p, &f);
                    }
                }
                dropped.insert(c);
                i = 0;
            } else {
                i += 1;
            }
        }
        let keep: Vec<usize> = rows
            .iter()
            .flat_map(|r| r.iter().map(|e| e.0))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .filter(|c| !dropped.contains(c))
            .collect();
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut dense = IntegerMatrix::zeros(rows.len(), keep.len());
        for (i, r) in rows.iter().enumerate() {
            for (c, v) in r {
                dense.set(i, index[c], v.clone());
            }
        }
        smith_normal_form(&dense)
            .invariant_factors
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }
}

/// Rows of exponent sums of relators over an ordered generator list.
#[derive(Debug, Clone)]
pub struct RelationMatrix {
    pub generators: Vec<Generator>,
    index: BTreeMap<Generator, usize>,
    pub rows: Vec<SparseRow>,
}

impl RelationMatrix {
    pub fn new<'a, G, R>(generators: G, relators: R) -> Self
    where
        G: IntoIterator<Item = &'a Generator>,
        R: IntoIterator<Item = &'a Word>,
    {
        let generators: Vec<Generator> = generators
            .into_iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: BTreeMap<Generator, usize> = generators.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let mut rows = Vec::new();
        for w in relators {
            let mut sums: BTreeMap<usize, i64> = BTreeMap::new();
            for (g, e) in w.runs() {
                let col = *index
                    .get(g)
                    .unwrap_or_else(|| panic!("relator letter {g} is not a generator"));
                *sums.entry(col).or_default() += e;
            }
            rows.push(
                sums.into_iter()
                    .filter(|(_, v)| *v != 0)
                    .map(|(c, v)| (c, BigInt::from(v)))
                    .collect(),
            );
        }
        RelationMatrix {
            generators,
            index,
            rows,
        }
    }

    pub fn column(&self, g: &Generator) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows.len(), self.generators.len());
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                m.set(i, *c, v.clone());
            }
        }
        m
    }

    pub fn lattice(&self) -> Lattice {
        let mut l = Lattice::new(self.generators.len());
        for r in &self.rows {
            l.insert(r.clone());
        }
        l
    }
}

/// Free rank and torsion of an abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Abelian invariants of the abelianization of `<generators | relators>`.
pub fn invariants_of(m: &RelationMatrix) -> AbelianInvariants {
    let l = m.lattice();
    AbelianInvariants {
        free_rank: m.generators.len() - l.rank(),
        torsion: l.torsion().iter().map(|d| d.to_string()).collect(),
    }
}

/// Abelian analysis of one presentation: which generators die in the abelianization.
#[derive(Debug, Clone)]
pub struct Abelianized {
    pub matrix: RelationMatrix,
    pub lattice: Lattice,
}

impl Abelianized {
    pub fn new(matrix: RelationMatrix) -> Self {
        let lattice = matrix.lattice();
        Abelianized { matrix, lattice }
    }

    /// Whether `g` maps to zero in the abelianization.
    pub fn forced_trivial(&self, g: &Generator) -> bool {
        match self.matrix.column(g) {
            Some(c) => self.lattice.contains(vec![(c, BigInt::one())]),
            None => true,
        }
    }

    /// Rank over `Q` of the images of `gens` in the abelianization.
    pub fn rank_of(&self, gens: &[Generator]) -> usize {
        let mut l = self.lattice.clone();
        let before = l.rank();
        for g in gens {
            if let Some(c) = self.matrix.column(g) {
                l.insert(vec![(c, BigInt::one())]);
            }
        }
        l.rank() - before
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants {
            free_rank: self.matrix.generators.len() - self.lattice.rank(),
            torsion: self.lattice.torsion().iter().map(|d| d.to_string()).collect(),
        }
    }
}

/// The abelianization of a truncated presentation.
pub fn abelianize(p: &TruncatedPresentation) -> Abelianized {
    Abelianized::new(RelationMatrix::new(p.generators(), p.relators().map(|(_, w)| w)))
}

pub fn abelian_invariants(p: &TruncatedPresentation) -> AbelianInvariants {
    invariants_of(&RelationMatrix::new(p.generators(), p.relators().map(|(_, w)| w)))
}

/// Abelian invariants of an ambient group on `n` strands.
pub fn ambient_invariants(group: GroupFamily, n: i64) -> Result<AbelianInvariants> {
    let p = catalog(group, n)?;
    let words: Vec<Word> = p.instances(0)?.into_iter().map(|i| i.word).collect();
    Ok(invariants_of(&RelationMatrix::new(&p.box_generators(0), &words)))
}

/// Which interior generators of a truncated derived presentation die in the abelianization.
#[derive(Debug, Clone, Serialize)]
pub struct PerfectnessVerdict {
    pub group: GroupFamily,
    pub n: i64,
    pub window: i64,
    pub interior_generators: usize,
    pub forced_trivial: usize,
    /// Rank over `Q` of the interior generators in the abelianization.
    pub interior_rank: usize,
    pub survivors: Vec<String>,
    pub perfect_on_interior: bool,
}

impl fmt::Display for PerfectnessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.perfect_on_interior {
            "perfect-on-interior".to_string()
        } else {
            format!("not forced trivial at window {}", self.window)
        };
        write!(
            f,
            "{}_{}' M={}: {}/{} interior generators forced trivial, interior rank {} ({verdict})",
            self.group, self.n, self.window, self.forced_trivial, self.interior_generators, self.interior_rank
        )
    }
}

/// Abelianizes the truncated simplified presentation of `GVB_n'` or `SG_n'`.
pub fn perfectness_window_check(group: GroupFamily, n: i64, window: i64) -> Result<PerfectnessVerdict> {
    let t = simplified_truncation(group, n, window)?;
    let ab = abelianize(&t);
    let interior: Vec<Generator> = t.interior_generators().into_iter().collect();
    let survivors: Vec<Generator> = interior.par_iter().filter(|g| !ab.forced_trivial(g)).cloned().collect();
    Ok(PerfectnessVerdict {
        group,
        n,
        window,
        interior_generators: interior.len(),
        forced_trivial: interior.len() - survivors.len(),
        interior_rank: ab.rank_of(&interior),
        perfect_on_interior: survivors.is_empty(),
        survivors: survivors.iter().map(|g| g.to_string()).collect(),
    })
}
