//! Mod-41 replay of the basis search: joint eigenvectors of the 5², their
//! images under the 4A4 generated by `d` and `ac`, conjugation into that
//! monomial basis, and a canonical rescaling of the basis vectors.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::generators::GeneratorSet;
use crate::gf41::Gf41;
use crate::linalg::{common_nullspace, GfMatrix, Matrix};

/// Eigenvalue of f1 and f2 on the characteristic vector (−4).
pub const CHAR_EIGENVALUE: u8 = 37;
pub const SUBGROUP_CAP: usize = 1000;
pub const FIXED_COLUMNS: usize = 3;
pub const CHAR_COLUMNS: usize = 24;

/// Rescales `v` so its first nonzero coordinate is 1.
pub fn normalize(v: &[Gf41]) -> Option<Vec<Gf41>> {
    let lead = *v.iter().find(|x| !x.is_zero())?;
    let s = lead.inv().ok()?;
    Some(v.iter().map(|&x| x * s).collect())
}

/// The unique normalized vector killed by every constraint.
pub fn joint_nullvector(constraints: &[GfMatrix]) -> Result<Vec<Gf41>> {
    if constraints.is_empty() {
        return Err(Error::InvalidArgument("no constraints given".into()));
    }
    let ns = common_nullspace(constraints)?;
    if ns.len() != 1 {
        return Err(Error::DimensionNotOne(ns.len()));
    }
    Ok(normalize(&ns[0]).expect("nullspace basis vectors are nonzero"))
}

/// Joint eigenvector of `f1m` and `f2m` for the eigenvalues `ev1`, `ev2`.
pub fn find_char_vector(f1m: &GfMatrix, f2m: &GfMatrix, ev1: Gf41, ev2: Gf41) -> Result<Vec<Gf41>> {
    joint_nullvector(&[f1m.minus_scalar(&ev1)?, f2m.minus_scalar(&ev2)?])
}

/// Common fixed vector of `f1m`, `f2m` and `dm`.
pub fn find_fixed_vector(f1m: &GfMatrix, f2m: &GfMatrix, dm: &GfMatrix) -> Result<Vec<Gf41>> {
    let one = Gf41::ONE;
    joint_nullvector(&[f1m.minus_scalar(&one)?, f2m.minus_scalar(&one)?, dm.minus_scalar(&one)?])
}

/// All products of the generators, identity first, in BFS order.
pub fn subgroup_elements(gens: &[GfMatrix], cap: usize) -> Result<Vec<GfMatrix>> {
    let n = gens.first().map_or(0, Matrix::rows);
    if gens.iter().any(|g| !g.is_square() || g.rows() != n) {
        return Err(Error::DimensionMismatch("generators must be square of one size".into()));
    }
    let id = GfMatrix::identity(n);
    let mut seen: HashSet<GfMatrix> = HashSet::from([id.clone()]);
    let mut elems = vec![id];
    let mut k = 0;
    while k < elems.len() {
        for g in gens {
            let y = elems[k].mul(g)?;
            if !seen.contains(&y) {
                if elems.len() == cap {
                    return Err(Error::SubgroupCapExceeded(cap));
                }
                seen.insert(y.clone());
                elems.push(y);
            }
        }
        k += 1;
    }
    Ok(elems)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnSource {
    /// Image of the fixed vector under subgroup element `k`.
    Fixed(usize),
    /// Image of the characteristic vector under subgroup element `k`.
    Char(usize),
}

/// Basis columns, fixed-vector images first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCandidate {
    pub columns: Vec<Vec<Gf41>>,
    pub provenance: Vec<ColumnSource>,
}

impl BasisCandidate {
    pub fn matrix(&self) -> GfMatrix {
        Matrix::from_columns(&self.columns).expect("columns share one length")
    }
}

/// Distinct 1-spaces among the images of `v`, as normalized vectors.
fn distinct_images(v: &[Gf41], sub: &[GfMatrix]) -> Result<Vec<(usize, Vec<Gf41>)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (k, g) in sub.iter().enumerate() {
        let img = normalize(&g.mul_vec(v)?).ok_or(Error::Singular)?;
        if seen.insert(img.clone()) {
            out.push((k, img));
        }
    }
    Ok(out)
}

pub fn assemble_basis(charvec: &[Gf41], fixvec: &[Gf41], sub: &[GfMatrix]) -> Result<BasisCandidate> {
    let fixed = distinct_images(fixvec, sub)?;
    let chars = distinct_images(charvec, sub)?;
    if chars.len() != CHAR_COLUMNS {
        return Err(Error::WrongCount {
            expected: CHAR_COLUMNS,
            found: chars.len(),
        });
    }
    if fixed.len() != FIXED_COLUMNS {
        return Err(Error::WrongCount {
            expected: FIXED_COLUMNS,
            found: fixed.len(),
        });
    }
    let mut columns = Vec::with_capacity(FIXED_COLUMNS + CHAR_COLUMNS);
    let mut provenance = Vec::with_capacity(FIXED_COLUMNS + CHAR_COLUMNS);
    for (k, v) in fixed {
        columns.push(v);
        provenance.push(ColumnSource::Fixed(k));
    }
    for (k, v) in chars {
        columns.push(v);
        provenance.push(ColumnSource::Char(k));
    }
    let b = BasisCandidate { columns, provenance };
    if b.matrix().rank() != FIXED_COLUMNS + CHAR_COLUMNS {
        return Err(Error::Singular);
    }
    Ok(b)
}

/// `B⁻¹ M B` for every generator.
pub fn rebase(gens: &GeneratorSet<Gf41>, basis: &GfMatrix) -> Result<GeneratorSet<Gf41>> {
    let inv = basis.inverse()?;
    gens.try_map(|m| inv.mul(m)?.mul(basis))
}

/// Conjugates by the diagonal matrix `S`: entry (r, c) becomes `M[r][c]·s[c]/s[r]`.
fn diagonal_conjugate(gens: &GeneratorSet<Gf41>, s: &[Gf41]) -> Result<GeneratorSet<Gf41>> {
    let inv: Vec<Gf41> = s.iter().map(|&x| x.inv()).collect::<Result<_>>()?;
    gens.try_map(|m| Ok(Matrix::from_fn(m.rows(), m.cols(), |r, c| *m.get(r, c) * s[c] * inv[r])))
}

/// Column `c` of a monomial matrix goes to row `perm[c]` with coefficient `coef[c]`.
fn monomial_parts(m: &GfMatrix) -> Option<(Vec<usize>, Vec<Gf41>)> {
    if !m.is_monomial() {
        return None;
    }
    let (perm, coef) = (0..m.cols())
        .map(|c| {
            let r = (0..m.rows())
                .find(|&r| !m.get(r, c).is_zero())
                .expect("monomial column");
            (r, *m.get(r, c))
        })
        .unzip();
    Some((perm, coef))
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut done = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if done[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = start;
        while !done[j] {
            done[j] = true;
            cyc.push(j);
            j = perm[j];
        }
        out.push(cyc);
    }
    out
}

fn violation(msg: impl Into<String>) -> Error {
    Error::PatternViolation(msg.into())
}

/// Canonical rescaling of the basis vectors.
///
/// First `ac` is made a permutation matrix, each of its cycles anchored at
/// the smallest column. Each cycle in the 24-part then gets a common factor
/// making the two interaction blocks of e′ mirror each other, with the sign
/// fixed so the anchor's first nonzero interaction entry is 8. Returns the
/// adjusted generators and the multiple `c` (half the top-left entry of e′)
/// with every interaction entry in `{0, ±c}`.
pub fn scalar_balance(gens: &GeneratorSet<Gf41>) -> Result<(GeneratorSet<Gf41>, Gf41)> {
    let n = gens.ac.rows();
    if n != FIXED_COLUMNS + CHAR_COLUMNS {
        return Err(Error::DimensionMismatch(format!("expected 27x27, got {n}x{n}")));
    }
    let (perm, coef) = monomial_parts(&gens.ac).ok_or_else(|| violation("ac is not monomial"))?;
    let cycs = cycles(&perm);
    let fixed = |j: usize| j < FIXED_COLUMNS;

    let mut s = vec![Gf41::ONE; n];
    for cyc in &cycs {
        if cyc.iter().any(|&j| fixed(j) != fixed(cyc[0])) {
            return Err(violation("ac mixes the fixed and characteristic parts"));
        }
        for w in cyc.windows(2) {
            s[w[1]] = s[w[0]] * coef[w[0]];
        }
        let last = *cyc.last().expect("nonempty cycle");
        if s[last] * coef[last] != Gf41::ONE {
            return Err(violation(format!(
                "ac cycle through column {} has scalar product ≠ 1",
                cyc[0]
            )));
        }
    }
    let g = diagonal_conjugate(gens, &s)?;

    let e = &g.eprime;
    let eight = Gf41::new(8);
    let mut t = vec![Gf41::ONE; n];
    for cyc in cycs.iter().filter(|c| !fixed(c[0])) {
        let a = cyc[0];
        let f = (0..FIXED_COLUMNS)
            .find(|&f| !e.get(f, a).is_zero())
            .ok_or_else(|| violation(format!("column {a} has no interaction entry")))?;
        let ratio = e.get(a, f).checked_div(*e.get(f, a))?;
        let mut root = ratio
            .sqrt()
            .ok_or_else(|| violation(format!("column {a}: mirror ratio {ratio} is not a square")))?;
        if *e.get(f, a) * root != eight {
            root = -root;
        }
        for &j in cyc {
            t[j] = root;
        }
    }
    let g = diagonal_conjugate(&g, &t)?;

    let c = g.eprime.get(0, 0).checked_div(Gf41::new(2))?;
    check_interaction_pattern(&g.eprime, c)?;
    Ok((g, c))
}

fn check_interaction_pattern(e: &GfMatrix, c: Gf41) -> Result<()> {
    if c.is_zero() {
        return Err(violation("e' has a zero top-left entry"));
    }
    let allowed = [Gf41::ZERO, c, -c];
    for f in 0..FIXED_COLUMNS {
        for j in FIXED_COLUMNS..e.cols() {
            let (top, side) = (*e.get(f, j), *e.get(j, f));
            if !allowed.contains(&top) || !allowed.contains(&side) {
                return Err(violation(format!(
                    "interaction entries ({f},{j}) = {top}, {side} are not in {{0, ±{c}}}"
                )));
            }
            if top != side {
                return Err(violation(format!("interaction blocks differ at ({f},{j})")));
            }
        }
    }
    Ok(())
}

/// Nonzero entries of row 0 with their multiplicities.
pub fn top_row_multiset(m: &GfMatrix) -> BTreeMap<u8, usize> {
    let mut out = BTreeMap::new();
    for x in m.row(0).iter().filter(|x| !x.is_zero()) {
        *out.entry(x.value()).or_insert(0) += 1;
    }
    out
}

/// The multiset {25 ×2, 33 ×9, 8 ×8}.
pub fn expected_top_row() -> BTreeMap<u8, usize> {
    BTreeMap::from([(8, 8), (25, 2), (33, 9)])
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub basis: BasisCandidate,
    pub rebased: GeneratorSet<Gf41>,
    pub balanced: GeneratorSet<Gf41>,
    pub multiple: Gf41,
}

/// Eigenvectors, 4A4 images, rebasing and balancing.
pub fn run_pipeline(gens: &GeneratorSet<Gf41>) -> Result<PipelineOutput> {
    let ev = Gf41::new(CHAR_EIGENVALUE as i64);
    let charvec = find_char_vector(&gens.f1, &gens.f2, ev, ev)?;
    let fixvec = find_fixed_vector(&gens.f1, &gens.f2, &gens.d)?;
    let sub = subgroup_elements(&[gens.d.clone(), gens.ac.clone()], SUBGROUP_CAP)?;
    let basis = assemble_basis(&charvec, &fixvec, &sub)?;
    let rebased = rebase(gens, &basis.matrix())?;
    let (balanced, multiple) = scalar_balance(&rebased)?;
    Ok(PipelineOutput {
        basis,
        rebased,
        balanced,
        multiple,
    })
}

/// A seeded random invertible matrix.
pub fn random_invertible(n: usize, seed: u64) -> GfMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p = Matrix::from_fn(n, n, |_, _| Gf41::new(rng.random_range(0..41)));
        if p.rank() == n {
            return p;
        }
    }
}

/// Conjugates every generator by one seeded random invertible matrix.
pub fn scramble(gens: &GeneratorSet<Gf41>, seed: u64) -> Result<GeneratorSet<Gf41>> {
    rebase(gens, &random_invertible(gens.f1.rows(), seed))
}

fn sorted_diagonal(m: &GfMatrix) -> Vec<Gf41> {
    let mut d: Vec<Gf41> = (0..m.rows()).map(|k| *m.get(k, k)).collect();
    d.sort();
    d
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub checks: Vec<(String, bool)>,
    pub top_row: BTreeMap<u8, usize>,
    pub multiple: Gf41,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Scrambles `reference` by each seed, runs the pipeline, and checks the
/// recovered generators.
pub fn selftest(reference: &GeneratorSet<Gf41>, seeds: &[u64]) -> Result<SelftestReport> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("no scramble seeds".into()));
    }
    let mut checks = Vec::new();
    let mut first: Option<PipelineOutput> = None;
    for &seed in seeds {
        let out = run_pipeline(&scramble(reference, seed)?)?;
        let b = &out.balanced;
        checks.push((
            format!("seed {seed}: f1, f2 diagonal"),
            b.f1.is_diagonal() && b.f2.is_diagonal(),
        ));
        checks.push((
            format!("seed {seed}: f1 spectrum preserved"),
            sorted_diagonal(&b.f1) == sorted_diagonal(&reference.f1),
        ));
        checks.push((
            format!("seed {seed}: d, ac monomial"),
            b.d.is_monomial() && b.ac.is_monomial(),
        ));
        checks.push((
            format!("seed {seed}: e' top row"),
            top_row_multiset(&b.eprime) == expected_top_row(),
        ));
        if let Some(f) = &first {
            checks.push((
                format!("seed {seed}: same output as seed {}", seeds[0]),
                f.balanced == out.balanced,
            ));
        } else {
            first = Some(out);
        }
    }
    let first = first.expect("at least one seed");
    Ok(SelftestReport {
        checks,
        top_row: top_row_multiset(&first.balanced.eprime),
        multiple: first.multiple,
    })
}
