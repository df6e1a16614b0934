//! Random instances of Schubert problems over `F_p`: flags, local
//! coordinates on a Schubert cell, and the determinantal equations.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{FieldElem, Matrix, MultiPoly, PrimeModulus, MAX_VARS};
use crate::schubert::{BoxShape, Partition, SchubertProblem};

/// A full flag `F_1 ⊂ … ⊂ F_m`, with `F_i` the span of the first `i` rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagMatrix {
    modulus: PrimeModulus,
    matrix: Matrix,
}

impl FlagMatrix {
    pub fn new(modulus: PrimeModulus, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() || matrix.det(modulus) == 0 {
            return Err(Error::parse("flag", "flag matrix must be square and invertible"));
        }
        Ok(FlagMatrix { modulus, matrix })
    }

    /// Ones on the anti-diagonal, so `F_i` is spanned by the last `i`
    /// coordinate vectors.
    pub fn anti_diagonal(modulus: PrimeModulus, m: usize) -> Self {
        let mut a = Matrix::zeros(m, m);
        for i in 0..m {
            a[(i, m - 1 - i)] = 1;
        }
        FlagMatrix { modulus, matrix: a }
    }

    /// The coordinate flag opposite to [`FlagMatrix::anti_diagonal`]: `F_i`
    /// is spanned by the first `i` coordinate vectors.
    pub fn identity(modulus: PrimeModulus, m: usize) -> Self {
        FlagMatrix { modulus, matrix: Matrix::identity(m) }
    }

    /// Uniformly random invertible matrix, by rejection on the determinant.
    pub fn random<R: Rng + ?Sized>(modulus: PrimeModulus, m: usize, rng: &mut R) -> Self {
        let p = modulus.value();
        loop {
            let rows = (0..m).map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect()).collect();
            let matrix = Matrix::from_rows(rows);
            if matrix.det(modulus) != 0 {
                return FlagMatrix { modulus, matrix };
            }
        }
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Basis of the annihilator of `F_f`: an `m × (m−f)` matrix `A` with
    /// `v ∈ F_f` iff `vA = 0`.
    pub fn annihilator(&self, f: usize) -> Matrix {
        let m = self.m();
        let top = Matrix::from_rows((0..f).map(|i| self.matrix.row(i).to_vec()).collect());
        let kernel = if f == 0 {
            (0..m).map(|i| (0..m).map(|j| u32::from(i == j)).collect()).collect()
        } else {
            top.nullspace(self.modulus)
        };
        let mut a = Matrix::zeros(m, kernel.len());
        for (c, v) in kernel.iter().enumerate() {
            for r in 0..m {
                a[(r, c)] = v[r];
            }
        }
        a
    }

    /// Parses `"p m e11 e12 … emm"`.
    pub fn parse(s: &str) -> Result<Self> {
        let nums: Vec<u64> = s
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(s, "expected integers")))
            .collect::<Result<_>>()?;
        let (&p, rest) = nums.split_first().ok_or_else(|| Error::parse(s, "empty"))?;
        let (&m, entries) = rest.split_first().ok_or_else(|| Error::parse(s, "missing m"))?;
        let m = m as usize;
        if entries.len() != m * m {
            return Err(Error::parse(s, format!("expected {} entries", m * m)));
        }
        let modulus = PrimeModulus::new(u32::try_from(p).map_err(|_| Error::NotPrime(p))?)?;
        let rows = entries.chunks(m).map(|r| r.iter().map(|&e| modulus.reduce(e)).collect());
        FlagMatrix::new(modulus, Matrix::from_rows(rows.collect()))
    }
}

impl fmt::Display for FlagMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.modulus, self.m())?;
        for i in 0..self.m() {
            for e in self.matrix.row(i) {
                write!(f, " {e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CellEntry {
    Zero,
    One,
    Star(usize),
}

/// Echelon form of the Schubert cell of `λ` relative to the anti-diagonal
/// flag. Row `i` (1-based) has its pivot in column `k − i + λ_i + 1`; entries
/// left of a pivot or in another row's pivot column are zero, and the rest
/// are free coordinates numbered row by row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CellPattern {
    shape: BoxShape,
    lambda: Partition,
    pivots: Vec<usize>,
    entries: Vec<Vec<CellEntry>>,
    stars: Vec<(usize, usize)>,
}

impl CellPattern {
    pub fn new(shape: BoxShape, lambda: &Partition) -> Result<Self> {
        if !shape.fits(lambda) {
            return Err(Error::DoesNotFit {
                partition: lambda.to_string(),
                rows: shape.k(),
                cols: shape.cols(),
            });
        }
        let (k, m) = (shape.k(), shape.m());
        let pivots: Vec<usize> = (1..=k).map(|i| k - i + lambda.part(i) as usize).collect();
        let mut entries = vec![vec![CellEntry::Zero; m]; k];
        let mut stars = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            entries[r][pc] = CellEntry::One;
            for c in pc + 1..m {
                if !pivots.contains(&c) {
                    entries[r][c] = CellEntry::Star(stars.len());
                    stars.push((r, c));
                }
            }
        }
        Ok(CellPattern { shape, lambda: lambda.clone(), pivots, entries, stars })
    }

    /// Coordinates on the intersection of the cell of `λ` (anti-diagonal
    /// flag) with the Schubert variety of `μ` relative to the identity flag.
    /// Row `r` is supported on columns `k − r + λ_r ..= m − r − μ_{k+1−r}`
    /// (0-based), with a 1 at the left end and free entries elsewhere; the
    /// number of free entries is `k(m−k) − |λ| − |μ|`.
    pub fn richardson(shape: BoxShape, lambda: &Partition, mu: &Partition) -> Result<Self> {
        for p in [lambda, mu] {
            if !shape.fits(p) {
                return Err(Error::DoesNotFit {
                    partition: p.to_string(),
                    rows: shape.k(),
                    cols: shape.cols(),
                });
            }
        }
        let (k, m) = (shape.k(), shape.m());
        let mut pivots = Vec::with_capacity(k);
        let mut entries = vec![vec![CellEntry::Zero; m]; k];
        let mut stars = Vec::new();
        for r in 1..=k {
            let (l, u) = (lambda.part(r) as usize, mu.part(k + 1 - r) as usize);
            if l + u > shape.cols() {
                return Err(Error::EmptyIntersection {
                    lambda: lambda.to_string(),
                    mu: mu.to_string(),
                });
            }
            let (a, b) = (k - r + l, m - r - u);
            pivots.push(a);
            entries[r - 1][a] = CellEntry::One;
            for c in a + 1..=b {
                entries[r - 1][c] = CellEntry::Star(stars.len());
                stars.push((r - 1, c));
            }
        }
        Ok(CellPattern { shape, lambda: lambda.clone(), pivots, entries, stars })
    }

    pub fn shape(&self) -> BoxShape {
        self.shape
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// 0-based pivot column of each row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn entries(&self) -> &[Vec<CellEntry>] {
        &self.entries
    }

    /// `(row, column)` of each free coordinate; variable `x_{i+1}` sits at
    /// `stars[i]`.
    pub fn stars(&self) -> &[(usize, usize)] {
        &self.stars
    }

    /// The `k × m` matrix `M_H` with polynomial entries.
    pub fn matrix(&self, modulus: PrimeModulus) -> Vec<Vec<MultiPoly>> {
        let nvars = self.stars.len();
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        CellEntry::Zero => MultiPoly::zero(modulus, nvars),
                        CellEntry::One => MultiPoly::constant(modulus, nvars, 1),
                        CellEntry::Star(v) => MultiPoly::var(modulus, nvars, *v),
                    })
                    .collect()
            })
            .collect()
    }

    /// Evaluates `M_H` at a point.
    pub fn evaluate(&self, point: &[FieldElem]) -> Matrix {
        Matrix::from_rows(
            self.entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| match e {
                            CellEntry::Zero => 0,
                            CellEntry::One => 1,
                            CellEntry::Star(v) => point[*v],
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

impl fmt::Display for CellPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<&str> = row
                .iter()
                .map(|e| match e {
                    CellEntry::Zero => "0",
                    CellEntry::One => "1",
                    CellEntry::Star(_) => "*",
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// How the rank conditions are turned into polynomials.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorStyle {
    /// `dim(H ∩ F_f) ≥ i` as `rank(M_H · A) ≤ k − i`, with `A` spanning the
    /// annihilator of `F_f`. Generates the same ideal as the stacked minors
    /// with far fewer, lower-degree polynomials.
    #[default]
    Projected,
    /// All `(k+f−i+1)`-minors of `M_H` stacked over the first `f` rows of
    /// the flag.
    Stacked,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerSelection {
    #[default]
    Essential,
    /// Every row with `λ_i > 0`, including implied conditions.
    All,
}

/// Local coordinates for the instance. The special flags of each chart are
/// fixed coordinate flags and the conditions they carry impose no equations.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    /// The open cell with every condition imposed by equations; solutions
    /// off the chart are lost.
    BigCell,
    /// The Schubert cell of the first condition.
    Cell,
    /// The first two conditions relative to a pair of opposite flags.
    #[default]
    Richardson,
}

impl Coordinates {
    /// How many leading flags must be the fixed coordinate flags.
    pub fn special_flags(self, conditions: usize) -> usize {
        match self {
            Coordinates::BigCell => 0,
            Coordinates::Cell => 1,
            Coordinates::Richardson => conditions.min(2),
        }
        .min(conditions.max(1))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealOptions {
    pub style: GeneratorStyle,
    pub corners: CornerSelection,
    #[serde(default)]
    pub coordinates: Coordinates,
}

/// The equations cutting out an instance in the chosen chart.
#[derive(Clone, Debug)]
pub struct InstanceIdeal {
    pub problem: SchubertProblem,
    pub flags: Vec<FlagMatrix>,
    pub pattern: CellPattern,
    pub generators: Vec<MultiPoly>,
}

impl InstanceIdeal {
    pub fn nvars(&self) -> usize {
        self.pattern.stars().len()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.flags[0].modulus
    }

    /// True iff every generator vanishes at `point`.
    pub fn vanishes_at(&self, point: &[FieldElem]) -> bool {
        self.generators.iter().all(|g| g.evaluate(point) == 0)
    }

    /// Checks the incidence conditions directly with matrix ranks, without
    /// the generators.
    pub fn satisfies_conditions(&self, point: &[FieldElem]) -> bool {
        let f = self.modulus();
        let shape = self.problem.shape();
        let h = self.pattern.evaluate(point);
        let k = shape.k();
        self.problem.conditions().iter().zip(&self.flags).all(|(lambda, flag)| {
            (1..=k).all(|i| {
                let fi = shape.cols() + i - lambda.part(i) as usize;
                let mut rows: Vec<Vec<FieldElem>> = (0..k).map(|r| h.row(r).to_vec()).collect();
                rows.extend((0..fi).map(|r| flag.matrix.row(r).to_vec()));
                Matrix::from_rows(rows).rank(f) <= k + fi - i
            })
        })
    }
}

/// Draws the flags for an instance: the chart's coordinate flags
/// (anti-diagonal, then identity) followed by uniformly random ones.
pub fn random_flags<R: Rng + ?Sized>(
    problem: &SchubertProblem,
    modulus: PrimeModulus,
    coordinates: Coordinates,
    rng: &mut R,
) -> Vec<FlagMatrix> {
    let m = problem.shape().m();
    let count = problem.conditions().len().max(1);
    let special = coordinates.special_flags(problem.conditions().len());
    (0..count)
        .map(|i| match i {
            0 if special > 0 => FlagMatrix::anti_diagonal(modulus, m),
            1 if special > 1 => FlagMatrix::identity(modulus, m),
            _ => FlagMatrix::random(modulus, m, rng),
        })
        .collect()
}

/// Builds the instance ideal: local coordinates from `options.coordinates`
/// and rank equations for every condition the chart does not carry.
pub fn build_instance_ideal(
    problem: &SchubertProblem,
    flags: &[FlagMatrix],
    options: IdealOptions,
) -> Result<InstanceIdeal> {
    problem.check_codimension()?;
    let shape = problem.shape();
    let conds = problem.conditions();
    let expected = conds.len().max(1);
    if flags.len() != expected {
        return Err(Error::FlagCount { flags: flags.len(), conditions: expected });
    }
    let modulus = flags[0].modulus;
    let special = options.coordinates.special_flags(conds.len());
    let m = shape.m();
    if special > 0 && flags[0] != FlagMatrix::anti_diagonal(modulus, m) {
        return Err(Error::FlagPosition { index: 0, expected: "anti-diagonal" });
    }
    if special > 1 && flags[1] != FlagMatrix::identity(modulus, m) {
        return Err(Error::FlagPosition { index: 1, expected: "identity" });
    }
    let pattern = match special {
        0 => CellPattern::new(shape, &Partition::zero())?,
        1 => CellPattern::new(shape, &conds.first().cloned().unwrap_or_default())?,
        _ => CellPattern::richardson(shape, &conds[0], &conds[1])?,
    };
    let nvars = pattern.stars().len();
    if nvars > MAX_VARS {
        return Err(Error::TooManyVariables(nvars));
    }
    let mh = pattern.matrix(modulus);
    let k = shape.k();

    let mut generators = Vec::new();
    for (lambda, flag) in conds.iter().zip(flags).skip(special) {
        let corners: Vec<(usize, usize)> = match options.corners {
            CornerSelection::Essential => shape.essential_corners(lambda),
            CornerSelection::All => (1..=k)
                .filter(|&i| lambda.part(i) > 0)
                .map(|i| (i, shape.cols() + i - lambda.part(i) as usize))
                .collect(),
        };
        let before = generators.len();
        for (i, f) in corners {
            match options.style {
                GeneratorStyle::Projected => {
                    let a = flag.annihilator(f);
                    let prod = poly_times_const(&mh, &a, modulus, nvars);
                    generators.extend(all_minors(&prod, k - i + 1, modulus, nvars));
                }
                GeneratorStyle::Stacked => {
                    let mut stacked = mh.clone();
                    for r in 0..f {
                        stacked.push(
                            flag.matrix
                                .row(r)
                                .iter()
                                .map(|&c| MultiPoly::constant(modulus, nvars, c))
                                .collect(),
                        );
                    }
                    generators.extend(all_minors(&stacked, k + f - i + 1, modulus, nvars));
                }
            }
        }
        generators[before..].iter().for_each(|g| {
            debug_assert!(g.total_degree().unwrap_or(0) as usize <= k);
        });
        if generators[before..].is_empty() {
            return Err(Error::DegenerateFlags { condition: lambda.to_string() });
        }
    }
    Ok(InstanceIdeal { problem: problem.clone(), flags: flags.to_vec(), pattern, generators })
}

fn poly_times_const(
    a: &[Vec<MultiPoly>],
    b: &Matrix,
    modulus: PrimeModulus,
    nvars: usize,
) -> Vec<Vec<MultiPoly>> {
    a.iter()
        .map(|row| {
            (0..b.cols())
                .map(|j| {
                    row.iter().enumerate().fold(MultiPoly::zero(modulus, nvars), |acc, (r, e)| {
                        if e.is_zero() {
                            acc
                        } else {
                            acc.add_scaled(e, b[(r, j)])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// All nonzero `size × size` minors. Each row subset is expanded along its
/// last row with the column-subset minors of the previous rows memoized.
fn all_minors(
    mat: &[Vec<MultiPoly>],
    size: usize,
    modulus: PrimeModulus,
    nvars: usize,
) -> Vec<MultiPoly> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    if size == 0 || size > rows || size > cols {
        return Vec::new();
    }
    let mut out = Vec::new();
    for row_set in subsets(rows, size) {
        // After processing t rows, `layer` maps each t-column bitmask to the
        // minor of those rows and columns.
        let mut layer: Vec<(u64, MultiPoly)> = (0..cols)
            .filter(|&c| !mat[row_set[0]][c].is_zero())
            .map(|c| (1u64 << c, mat[row_set[0]][c].clone()))
            .collect();
        for &r in row_set.iter().skip(1) {
            let mut next: rustc_hash::FxHashMap<u64, MultiPoly> = Default::default();
            for (mask, det) in &layer {
                for c in 0..cols {
                    if mask & (1 << c) != 0 || mat[r][c].is_zero() {
                        continue;
                    }
                    // Sign of placing column c as the last column among mask.
                    let after = (mask >> c).count_ones() as usize;
                    let term = det.mul(&mat[r][c]);
                    let signed = if after % 2 == 1 { term.scale(modulus.neg(1)) } else { term };
                    let e = next
                        .entry(mask | (1 << c))
                        .or_insert_with(|| MultiPoly::zero(modulus, nvars));
                    *e = e.add(&signed);
                }
            }
            layer = next.into_iter().filter(|(_, p)| !p.is_zero()).collect();
            layer.sort_by_key(|(m, _)| *m);
        }
        out.extend(layer.into_iter().map(|(_, p)| p).filter(|p| !p.is_zero()));
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
