//! Exact vector and projective orbits, and the permutation action on them.
//!
//! Points are row vectors and a matrix `M` acts on the right, `v ↦ vM`.

use indexmap::IndexSet;
use rayon::prelude::*;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::CycMatrix;
pub use crate::stabchain::{stab_chain_order, transitivity_check, Perm, PermSet, StabChain};

pub const DEFAULT_ORBIT_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointMode {
    Vector,
    /// Rescaled so the first nonzero coordinate is 1.
    Projective,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalPoint {
    entries: Vec<CycNum>,
    mode: PointMode,
}

impl CanonicalPoint {
    pub fn new(entries: Vec<CycNum>, mode: PointMode) -> Result<Self> {
        Ok(CanonicalPoint {
            entries: canonicalize(entries, mode)?,
            mode,
        })
    }

    pub fn vector(entries: Vec<CycNum>) -> Self {
        CanonicalPoint {
            entries,
            mode: PointMode::Vector,
        }
    }

    pub fn projective(entries: Vec<CycNum>) -> Result<Self> {
        Self::new(entries, PointMode::Projective)
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn mode(&self) -> PointMode {
        self.mode
    }
}

fn canonicalize(mut v: Vec<CycNum>, mode: PointMode) -> Result<Vec<CycNum>> {
    if mode == PointMode::Projective {
        let lead = v
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("zero vector has no projective point".into()))?;
        if !lead.is_one() {
            let s = lead.inv()?;
            for x in v.iter_mut() {
                *x = &*x * &s;
            }
        }
    }
    Ok(v)
}

/// The vector (1,1,1;0²⁴).
pub fn fixed_seed() -> CanonicalPoint {
    let mut v = vec![CycNum::zero(); 27];
    for x in v.iter_mut().take(3) {
        *x = CycNum::one();
    }
    CanonicalPoint::vector(v)
}

/// The 1-space of (0,0,0; 0,0,0,0; i,1,−1,−i; 0¹⁶).
pub fn proj1755_seed() -> CanonicalPoint {
    let mut v = vec![CycNum::zero(); 27];
    let i = CycNum::i();
    v[7] = i.clone();
    v[8] = CycNum::one();
    v[9] = -CycNum::one();
    v[10] = -i;
    CanonicalPoint::projective(v).expect("nonzero seed")
}

/// Column-sparse copy of a matrix, for repeated vector-matrix products.
struct SparseAction {
    cols: Vec<Vec<(usize, CycNum)>>,
}

impl SparseAction {
    fn new(m: &CycMatrix) -> Self {
        let cols = (0..m.cols())
            .map(|c| {
                (0..m.rows())
                    .filter(|&r| !m.get(r, c).is_zero())
                    .map(|r| (r, m.get(r, c).clone()))
                    .collect()
            })
            .collect();
        SparseAction { cols }
    }

    fn apply(&self, v: &[CycNum]) -> Vec<CycNum> {
        self.cols
            .iter()
            .map(|col| {
                let mut acc = CycNum::zero();
                for (r, x) in col {
                    if !v[*r].is_zero() {
                        acc = &acc + &(&v[*r] * x);
                    }
                }
                acc
            })
            .collect()
    }
}

fn sparse_actions(gens: &[CycMatrix], dim: usize) -> Result<Vec<SparseAction>> {
    gens.iter()
        .map(|g| {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator is {}x{}, point has {} coordinates",
                    g.rows(),
                    g.cols(),
                    dim
                )));
            }
            Ok(SparseAction::new(g))
        })
        .collect()
}

/// Points numbered in BFS order from the seed.
#[derive(Clone, Debug)]
pub struct Orbit {
    points: IndexSet<Vec<CycNum>>,
    mode: PointMode,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mode(&self) -> PointMode {
        self.mode
    }

    pub fn base(&self) -> CanonicalPoint {
        self.point(0).expect("orbit contains its seed")
    }

    pub fn point(&self, k: usize) -> Option<CanonicalPoint> {
        self.points.get_index(k).map(|v| CanonicalPoint {
            entries: v.clone(),
            mode: self.mode,
        })
    }

    pub fn index_of(&self, p: &CanonicalPoint) -> Option<usize> {
        if p.mode != self.mode {
            return None;
        }
        self.points.get_index_of(&p.entries)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[CycNum]> {
        self.points.iter().map(|v| v.as_slice())
    }
}

/// BFS closure of `seed` under `gens`. Each BFS layer is mapped in
/// parallel and merged in (point, generator) order, so numbering matches
/// a sequential BFS.
pub fn enumerate_orbit(seed: &CanonicalPoint, gens: &[CycMatrix], cap: usize) -> Result<Orbit> {
    let actions = sparse_actions(gens, seed.entries.len())?;
    let mode = seed.mode;
    let mut points = IndexSet::new();
    points.insert(canonicalize(seed.entries.clone(), mode)?);
    if points.len() > cap {
        return Err(Error::OrbitCapExceeded(cap));
    }
    let mut start = 0;
    while start < points.len() {
        let end = points.len();
        let layer: Vec<&Vec<CycNum>> = (start..end).map(|k| &points[k]).collect();
        let images: Vec<Vec<Vec<CycNum>>> = layer
            .par_iter()
            .map(|p| {
                actions
                    .iter()
                    .map(|a| canonicalize(a.apply(p), mode))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for img in images.into_iter().flatten() {
            if !points.contains(&img) {
                if points.len() == cap {
                    return Err(Error::OrbitCapExceeded(cap));
                }
                points.insert(img);
            }
        }
        start = end;
    }
    Ok(Orbit { points, mode })
}

/// The permutation induced by each generator on the orbit's point indices.
pub fn perm_images(orbit: &Orbit, gens: &[CycMatrix]) -> Result<PermSet> {
    let dim = orbit.points.get_index(0).map_or(0, Vec::len);
    let actions = sparse_actions(gens, dim)?;
    let mut perms = Vec::with_capacity(gens.len());
    for (g, a) in actions.iter().enumerate() {
        let images: Vec<usize> = orbit
            .points
            .par_iter()
            .map(|p| {
                let img = canonicalize(a.apply(p), orbit.mode)?;
                orbit.points.get_index_of(&img).ok_or(Error::OrbitNotClosed(g))
            })
            .collect::<Result<_>>()?;
        perms.push(Perm::from_images(images).map_err(|_| Error::OrbitNotClosed(g))?);
    }
    PermSet::new(orbit.len(), perms)
}

/// The scalar `c` with `seed·m = c·seed`.
pub fn scalar_character(seed: &CanonicalPoint, m: &CycMatrix) -> Result<CycNum> {
    let v = &seed.entries;
    if m.rows() != v.len() || m.cols() != v.len() {
        return Err(Error::DimensionMismatch("matrix does not act on the point".into()));
    }
    let img = SparseAction::new(m).apply(v);
    let k = v.iter().position(|x| !x.is_zero()).ok_or(Error::NotAnEigenvector)?;
    let c = img[k].checked_div(&v[k])?;
    if img.iter().zip(v).all(|(a, b)| *a == &c * b) {
        Ok(c)
    } else {
        Err(Error::NotAnEigenvector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::GeneratorSet;
    use crate::linalg::Matrix;

    fn small_gens() -> Vec<CycMatrix> {
        // 3-cycle of coordinates and a sign flip on the first coordinate.
        let p = Matrix::from_fn(3, 3, |r, c| {
            if (r + 1) % 3 == c {
                CycNum::one()
            } else {
                CycNum::zero()
            }
        });
        let s = Matrix::diagonal(&[-CycNum::one(), CycNum::one(), CycNum::one()]);
        vec![p, s]
    }

    #[test]
    fn small_vector_orbit() {
        let seed = CanonicalPoint::vector(vec![CycNum::one(), CycNum::zero(), CycNum::zero()]);
        let o = enumerate_orbit(&seed, &small_gens(), 100).unwrap();
        assert_eq!(o.len(), 6);
        assert_eq!(o.base(), seed);
        let p = perm_images(&o, &small_gens()).unwrap();
        assert_eq!(stab_chain_order(&p), 24u32.into());
        assert!(transitivity_check(&p));
    }

    #[test]
    fn matrices_act_on_row_vectors() {
        let seed = CanonicalPoint::vector(vec![CycNum::one(), CycNum::zero(), CycNum::zero()]);
        let o = enumerate_orbit(&seed, &small_gens()[..1], 100).unwrap();
        assert_eq!(
            o.point(1).unwrap().entries(),
            &[CycNum::zero(), CycNum::one(), CycNum::zero()]
        );
    }

    #[test]
    fn small_projective_orbit() {
        let seed = CanonicalPoint::projective(vec![CycNum::from_int(2), CycNum::zero(), CycNum::zero()]).unwrap();
        assert_eq!(seed.entries()[0], CycNum::one());
        let o = enumerate_orbit(&seed, &small_gens(), 100).unwrap();
        assert_eq!(o.len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let seed = CanonicalPoint::vector(vec![CycNum::one(), CycNum::zero(), CycNum::zero()]);
        assert_eq!(
            enumerate_orbit(&seed, &small_gens(), 5).unwrap_err(),
            Error::OrbitCapExceeded(5)
        );
        assert!(enumerate_orbit(&seed, &small_gens(), 6).is_ok());
    }

    #[test]
    fn zero_vector_is_not_projective() {
        assert!(CanonicalPoint::projective(vec![CycNum::zero(); 3]).is_err());
    }

    #[test]
    fn missing_image_is_reported() {
        let seed = CanonicalPoint::vector(vec![CycNum::one(), CycNum::zero(), CycNum::zero()]);
        let o = enumerate_orbit(&seed, &small_gens()[..1], 100).unwrap();
        assert_eq!(perm_images(&o, &small_gens()).unwrap_err(), Error::OrbitNotClosed(1));
    }

    #[test]
    fn identity_gives_identity_perm() {
        let seed = CanonicalPoint::vector(vec![CycNum::one(), CycNum::zero(), CycNum::zero()]);
        let o = enumerate_orbit(&seed, &small_gens(), 100).unwrap();
        let p = perm_images(&o, &[Matrix::identity(3)]).unwrap();
        assert!(p.perms[0].is_identity());
    }

    #[test]
    fn seed_fixed_by_f1_f2() {
        let g = GeneratorSet::build();
        let o = enumerate_orbit(&fixed_seed(), &[g.f1.clone(), g.f2.clone()], DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(o.len(), 1);
    }

    #[test]
    fn characters_on_the_projective_seed() {
        let g = GeneratorSet::build();
        let seed = proj1755_seed();
        assert_eq!(scalar_character(&seed, &Matrix::identity(27)).unwrap(), CycNum::one());
        assert_eq!(scalar_character(&seed, &g.d).unwrap(), CycNum::one());
        let ac3 = g.ac.pow(3).unwrap();
        let c = scalar_character(&seed, &ac3).unwrap();
        let i = CycNum::i();
        assert!((0..4).any(|k| c == i.pow(k)));
        assert_eq!(scalar_character(&fixed_seed(), &g.f1).unwrap(), CycNum::one());
    }

    #[test]
    fn non_eigenvector_rejected() {
        let seed = CanonicalPoint::vector(vec![CycNum::one(), CycNum::zero(), CycNum::zero()]);
        assert_eq!(
            scalar_character(&seed, &small_gens()[0]).unwrap_err(),
            Error::NotAnEigenvector
        );
    }
}
