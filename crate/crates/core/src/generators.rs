//! The five 27×27 generators f1, f2, d, ac, e′ and the 4×4 blocks they are built from.
//!
//! Coordinates are labelled −3, −2, −1, 1, …, 24 and stored at indices 0..27
//! in that order. Labels 1..24 fall into six blocks of four, B1 = {1..4},
//! …, B6 = {21..24}.

use std::fmt;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf41::{reduce_cyc, Gf41};
use crate::linalg::{CycMatrix, Matrix, DEFAULT_ORDER_CAP};

pub const DIM: usize = 27;

/// A coordinate label in {−3, −2, −1, 1, …, 24}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Label(i8);

impl Label {
    pub fn new(v: i8) -> Result<Self> {
        if (-3..=-1).contains(&v) || (1..=24).contains(&v) {
            Ok(Label(v))
        } else {
            Err(Error::InvalidArgument(format!("coordinate label {v} out of range")))
        }
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < DIM, "index {i} out of range");
        if i < 3 {
            Label(i as i8 - 3)
        } else {
            Label(i as i8 - 2)
        }
    }

    pub fn index(self) -> usize {
        if self.0 < 0 {
            (self.0 + 3) as usize
        } else {
            (self.0 + 2) as usize
        }
    }

    pub fn value(self) -> i8 {
        self.0
    }

    /// Block number 1..=6 for labels 1..24, `None` for the first three.
    pub fn block(self) -> Option<usize> {
        (self.0 > 0).then(|| (self.0 as usize - 1) / 4 + 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Powers of z on the diagonal of f1.
pub const F1_EXPONENTS: [u8; DIM] = [
    0, 0, 0, //
    1, 2, 3, 4, //
    0, 0, 0, 0, //
    3, 1, 4, 2, //
    3, 1, 4, 2, //
    1, 2, 3, 4, //
    2, 4, 1, 3,
];

/// Powers of z on the diagonal of f2.
pub const F2_EXPONENTS: [u8; DIM] = [
    0, 0, 0, //
    4, 3, 2, 1, //
    4, 3, 2, 1, //
    3, 1, 4, 2, //
    1, 2, 3, 4, //
    3, 1, 4, 2, //
    0, 0, 0, 0,
];

fn int_block(rows: [[i64; 4]; 4]) -> CycMatrix {
    Matrix::from_fn(4, 4, |r, c| CycNum::from_int(rows[r][c]))
}

/// Entry codes for the σ/τ blocks: 0, ±1, or `S`/`T` for σ and τ.
const S: i64 = 100;
const T: i64 = 200;

fn golden_block(rows: [[i64; 4]; 4]) -> CycMatrix {
    Matrix::from_fn(4, 4, |r, c| match rows[r][c] {
        S => CycNum::sigma(),
        T => CycNum::tau(),
        v => CycNum::from_int(v),
    })
}

/// The 4×4 building blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockConstants {
    pub i: CycMatrix,
    pub j: CycMatrix,
    pub k: CycMatrix,
    pub l: CycMatrix,
    pub a: CycMatrix,
    pub b: CycMatrix,
    pub c: CycMatrix,
    pub d: CycMatrix,
    pub e: CycMatrix,
    pub f: CycMatrix,
    pub g: CycMatrix,
}

impl BlockConstants {
    pub fn new() -> Self {
        BlockConstants {
            i: CycMatrix::identity(4),
            j: int_block([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
            k: int_block([[0, 1, 0, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 0, 1, 0]]),
            l: int_block([[0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0]]),
            a: golden_block([[0, T, S, 0], [T, 0, 0, S], [S, 0, 0, T], [0, S, T, 0]]),
            b: golden_block([[-1, T, S, -1], [T, -1, -1, S], [S, -1, -1, T], [-1, S, T, -1]]),
            c: golden_block([[1, S, T, 1], [S, 1, 1, T], [T, 1, 1, S], [1, T, S, 1]]),
            d: golden_block([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]]),
            e: golden_block([[T, 1, 1, S], [1, S, T, 1], [1, T, S, 1], [S, 1, 1, T]]),
            f: golden_block([[-1, S, T, -1], [S, -1, -1, T], [T, -1, -1, S], [-1, T, S, -1]]),
            g: golden_block([[T, 0, 0, S], [0, S, T, 0], [0, T, S, 0], [S, 0, 0, T]]),
        }
    }

    /// The seven σ/τ blocks in the order A..G.
    pub fn golden(&self) -> [&CycMatrix; 7] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f, &self.g]
    }
}

impl Default for BlockConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Writes `block` into `m` at block position (`br`, `bc`) of the 24×24 part (blocks numbered from 0).
fn place(m: &mut CycMatrix, br: usize, bc: usize, block: &CycMatrix) {
    for r in 0..4 {
        for c in 0..4 {
            m.set(3 + 4 * br + r, 3 + 4 * bc + c, block.get(r, c).clone());
        }
    }
}

pub fn build_f1f2() -> (CycMatrix, CycMatrix) {
    let diag = |exps: &[u8; DIM]| {
        let entries: Vec<CycNum> = exps.iter().map(|&e| CycNum::z_pow(e as i64)).collect();
        CycMatrix::diagonal(&entries)
    };
    (diag(&F1_EXPONENTS), diag(&F2_EXPONENTS))
}

pub fn build_d_ac() -> (CycMatrix, CycMatrix) {
    let blocks = BlockConstants::new();
    let i = CycNum::i();

    let mut d = CycMatrix::zeros(DIM, DIM);
    d.set(0, 0, CycNum::one());
    d.set(1, 1, CycNum::from_int(-1));
    d.set(2, 2, CycNum::from_int(-1));
    place(&mut d, 0, 0, &blocks.i.scale(&CycNum::from_int(-1)));
    place(&mut d, 1, 1, &blocks.j.scale(&CycNum::from_int(-1)));
    place(&mut d, 2, 3, &blocks.i.scale(&-&i));
    place(&mut d, 3, 2, &blocks.i.scale(&i));
    place(&mut d, 4, 5, &blocks.l.scale(&i));
    place(&mut d, 5, 4, &blocks.k.scale(&-&i));

    let mut ac = CycMatrix::zeros(DIM, DIM);
    ac.set(0, 1, CycNum::one());
    ac.set(1, 2, CycNum::one());
    ac.set(2, 0, CycNum::one());
    // row block -> column block holding K
    for (br, bc) in [(0, 4), (1, 5), (2, 0), (3, 1), (4, 2), (5, 3)] {
        place(&mut ac, br, bc, &blocks.k);
    }
    (d, ac)
}

/// Signs of the 3×24 interaction block, one per 4-block, for rows −3, −2, −1.
pub const EPRIME_MIXED: [[i64; 6]; 3] = [[0, -1, 1, 1, -1, 0], [-1, 0, 0, -1, 1, 1], [1, 1, -1, 0, 0, -1]];

/// Block grid of the 24×24 part of 5·e′, indices into A..G.
pub const EPRIME_GRID: [[u8; 6]; 6] = [
    [0, 1, 0, 3, 4, 5],
    [1, 2, 3, 6, 5, 6],
    [0, 3, 4, 5, 0, 1],
    [3, 6, 5, 6, 1, 2],
    [4, 5, 0, 1, 0, 3],
    [5, 6, 1, 2, 3, 6],
];

pub fn build_eprime() -> CycMatrix {
    let blocks = BlockConstants::new();
    let golden = blocks.golden();
    let mut m = CycMatrix::zeros(DIM, DIM);
    let corner = [[2, 2, 1], [2, 1, 2], [1, 2, 2]];
    for (r, row) in corner.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            m.set(r, c, CycNum::from_int(x));
        }
    }
    // a printed scalar in a 1×4 (4×1) slot stands for that scalar times the all-ones row (column)
    for (r, signs) in EPRIME_MIXED.iter().enumerate() {
        for (blk, &s) in signs.iter().enumerate() {
            for off in 0..4 {
                let idx = 3 + 4 * blk + off;
                m.set(r, idx, CycNum::from_int(s));
                m.set(idx, r, CycNum::from_int(s));
            }
        }
    }
    for (br, row) in EPRIME_GRID.iter().enumerate() {
        for (bc, &which) in row.iter().enumerate() {
            place(&mut m, br, bc, golden[which as usize]);
        }
    }
    m.scale(&CycNum::from_ratio(1, 5))
}

/// The generating set, over either scalar ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet<T> {
    pub f1: Matrix<T>,
    pub f2: Matrix<T>,
    pub d: Matrix<T>,
    pub ac: Matrix<T>,
    pub eprime: Matrix<T>,
}

pub const GENERATOR_NAMES: [&str; 5] = ["f1", "f2", "d", "ac", "eprime"];

impl<T: Field> GeneratorSet<T> {
    pub fn as_array(&self) -> [&Matrix<T>; 5] {
        [&self.f1, &self.f2, &self.d, &self.ac, &self.eprime]
    }

    pub fn named(&self) -> [(&'static str, &Matrix<T>); 5] {
        let a = self.as_array();
        std::array::from_fn(|k| (GENERATOR_NAMES[k], a[k]))
    }

    pub fn get(&self, name: &str) -> Option<&Matrix<T>> {
        self.named().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
    }

    /// Looks up a comma-separated list of names, or `all`.
    pub fn select(&self, spec: &str) -> Result<Vec<(&'static str, &Matrix<T>)>> {
        if spec.trim() == "all" {
            return Ok(self.named().to_vec());
        }
        spec.split(',')
            .map(|n| {
                let n = n.trim();
                self.named()
                    .into_iter()
                    .find(|(name, _)| *name == n || (n == "e'" && *name == "eprime"))
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown generator `{n}`")))
            })
            .collect()
    }

    pub fn try_map<U: Field>(&self, f: impl Fn(&Matrix<T>) -> Result<Matrix<U>>) -> Result<GeneratorSet<U>> {
        Ok(GeneratorSet {
            f1: f(&self.f1)?,
            f2: f(&self.f2)?,
            d: f(&self.d)?,
            ac: f(&self.ac)?,
            eprime: f(&self.eprime)?,
        })
    }
}

impl GeneratorSet<CycNum> {
    pub fn build() -> Self {
        let (f1, f2) = build_f1f2();
        let (d, ac) = build_d_ac();
        GeneratorSet {
            f1,
            f2,
            d,
            ac,
            eprime: build_eprime(),
        }
    }

    /// Entrywise reduction modulo 41.
    pub fn reduce(&self) -> Result<GeneratorSet<Gf41>> {
        self.try_map(|m| m.try_map(reduce_cyc))
    }
}

/// One named relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Outcome of [`verify_relations`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub checks: Vec<Check>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name.as_str())
    }
}

pub const REL_F1_ORDER: &str = "f1^5 = 1";
pub const REL_F2_ORDER: &str = "f2^5 = 1";
pub const REL_COMMUTE: &str = "f1 f2 = f2 f1";
pub const REL_D_INVOLUTION: &str = "d^2 = 1";
pub const REL_AC_ORDER: &str = "ac has order 12";
pub const REL_E_INVOLUTION: &str = "e'^2 = 1";
pub const REL_E_INVERTS_AC: &str = "e' inverts ac";
pub const REL_AC_CONJUGATES: &str = "(ac)^-1 f1 (ac) = f2";
pub const REL_UNITARY: &str = "all generators unitary";

pub fn verify_relations(g: &GeneratorSet<CycNum>) -> Result<RelationReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool| {
        checks.push(Check {
            name: name.to_string(),
            passed,
        })
    };

    push(REL_F1_ORDER, g.f1.pow(5)?.is_identity());
    push(REL_F2_ORDER, g.f2.pow(5)?.is_identity());
    push(REL_COMMUTE, g.f1.mul(&g.f2)? == g.f2.mul(&g.f1)?);
    push(REL_D_INVOLUTION, g.d.pow(2)?.is_identity());
    push(REL_AC_ORDER, g.ac.order(DEFAULT_ORDER_CAP).ok() == Some(12));
    push(REL_E_INVOLUTION, g.eprime.pow(2)?.is_identity());
    let ac_inv = g.ac.inverse()?;
    push(REL_E_INVERTS_AC, g.eprime.mul(&g.ac)?.mul(&g.eprime)? == ac_inv);
    push(REL_AC_CONJUGATES, ac_inv.mul(&g.f1)?.mul(&g.ac)? == g.f2);
    push(REL_UNITARY, g.as_array().iter().all(|m| m.is_unitary()));
    Ok(RelationReport { checks })
}
