//! The invariant cubic form on the 27-space.
//!
//! The 45 terms are generated from four seed triples by closing under the
//! monomial generators, then checked for exact invariance under every
//! generator as a symmetric 3-tensor.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::generators::{GeneratorSet, Label, DIM, F1_EXPONENTS, F2_EXPONENTS};
use crate::linalg::CycMatrix;

/// Unordered triple of distinct coordinates with a ±1 coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedTriple {
    coords: [Label; 3],
    sign: i8,
}

impl SignedTriple {
    pub fn new(labels: [i8; 3], sign: i8) -> Result<Self> {
        let mut coords = [Label::new(labels[0])?, Label::new(labels[1])?, Label::new(labels[2])?];
        Self::from_labels(&mut coords, sign)
    }

    fn from_labels(coords: &mut [Label; 3], sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument(format!("sign {sign} is not ±1")));
        }
        coords.sort();
        if coords[0] == coords[1] || coords[1] == coords[2] {
            return Err(Error::InvalidArgument("triple labels must be distinct".into()));
        }
        Ok(SignedTriple { coords: *coords, sign })
    }

    pub fn coords(&self) -> [Label; 3] {
        self.coords
    }

    pub fn indices(&self) -> [usize; 3] {
        self.coords.map(Label::index)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn flipped(&self) -> Self {
        SignedTriple {
            coords: self.coords,
            sign: -self.sign,
        }
    }
}

/// `sign u v w`, e.g. `+ -3 -2 -1`.
impl fmt::Display for SignedTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{s} {} {} {}", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// The four seeds: + on (−3,−2,−1) and (1,10,24), − on (−3,1,4) and (1,9,17).
pub fn seed_triples() -> [SignedTriple; 4] {
    [
        SignedTriple::new([-3, -2, -1], 1).unwrap(),
        SignedTriple::new([-3, 1, 4], -1).unwrap(),
        SignedTriple::new([1, 9, 17], -1).unwrap(),
        SignedTriple::new([1, 10, 24], 1).unwrap(),
    ]
}

/// True iff the f1 and f2 eigenvalues on the triple multiply to 1.
pub fn eigenvalue_check(t: &SignedTriple) -> bool {
    let idx = t.indices();
    [&F1_EXPONENTS, &F2_EXPONENTS]
        .iter()
        .all(|table| idx.iter().map(|&i| table[i] as u32).sum::<u32>() % 5 == 0)
}

/// A matrix with one nonzero per row and column: e_j ↦ scale[j]·e_{perm[j]}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub perm: Vec<usize>,
    pub scale: Vec<CycNum>,
}

impl MonomialMap {
    pub fn identity(n: usize) -> Self {
        MonomialMap {
            perm: (0..n).collect(),
            scale: vec![CycNum::one(); n],
        }
    }
}

pub fn as_monomial(m: &CycMatrix) -> Result<MonomialMap> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("monomial map needs a square matrix".into()));
    }
    let n = m.rows();
    for r in 0..n {
        if m.row(r).iter().filter(|v| !v.is_zero()).count() != 1 {
            return Err(Error::NotMonomial(r));
        }
    }
    let mut perm = vec![usize::MAX; n];
    let mut scale = vec![CycNum::zero(); n];
    for c in 0..n {
        let hits: Vec<usize> = (0..n).filter(|&r| !m.get(r, c).is_zero()).collect();
        // rows are fine, so a bad column means some row was hit twice
        let &[r] = hits.as_slice() else {
            return Err(Error::NotMonomial(hits.get(1).copied().unwrap_or(0)));
        };
        perm[c] = r;
        scale[c] = m.get(r, c).clone();
    }
    Ok(MonomialMap { perm, scale })
}

pub fn act_on_triple(g: &MonomialMap, t: &SignedTriple) -> Result<SignedTriple> {
    let idx = t.indices();
    let product = idx.iter().fold(CycNum::one(), |acc, &i| acc * &g.scale[i]);
    let factor = if product == CycNum::one() {
        1
    } else if product == CycNum::from_int(-1) {
        -1
    } else {
        return Err(Error::NonRealSign(t.to_string()));
    };
    let mut coords = idx.map(|i| Label::from_index(g.perm[i]));
    SignedTriple::from_labels(&mut coords, t.sign * factor)
}

/// A set of signed triples, one per coordinate set, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CubicForm {
    terms: BTreeMap<[Label; 3], i8>,
}

impl CubicForm {
    pub fn from_terms(terms: impl IntoIterator<Item = SignedTriple>) -> Result<Self> {
        let mut form = CubicForm::default();
        for t in terms {
            form.insert(t)?;
        }
        Ok(form)
    }

    fn insert(&mut self, t: SignedTriple) -> Result<bool> {
        match self.terms.get(&t.coords) {
            Some(&s) if s != t.sign => Err(Error::SignConflict(t.to_string())),
            Some(_) => Ok(false),
            None => {
                self.terms.insert(t.coords, t.sign);
                Ok(true)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by coordinate triple.
    pub fn terms(&self) -> Vec<SignedTriple> {
        self.terms
            .iter()
            .map(|(c, &s)| SignedTriple { coords: *c, sign: s })
            .collect()
    }

    /// Copy with the sign of the term on `coords` reversed.
    pub fn with_flipped(&self, coords: [Label; 3]) -> Self {
        let mut out = self.clone();
        if let Some(s) = out.terms.get_mut(&coords) {
            *s = -*s;
        }
        out
    }

    /// C(x) = Σ sign·x_u x_v x_w over the terms.
    pub fn evaluate(&self, x: &[CycNum]) -> CycNum {
        self.terms().iter().fold(CycNum::zero(), |acc, t| {
            let [u, v, w] = t.indices();
            let p = &(&x[u] * &x[v]) * &x[w];
            if t.sign > 0 {
                acc + p
            } else {
                acc - p
            }
        })
    }
}

/// Breadth-first closure of the seeds under the monomial maps.
pub fn close_terms(seeds: &[SignedTriple], gens: &[MonomialMap]) -> Result<CubicForm> {
    let mut form = CubicForm::default();
    let mut queue = VecDeque::new();
    for s in seeds {
        if form.insert(*s)? {
            queue.push_back(*s);
        }
    }
    while let Some(t) = queue.pop_front() {
        for g in gens {
            let image = act_on_triple(g, &t)?;
            if form.insert(image)? {
                queue.push_back(image);
            }
        }
    }
    Ok(form)
}

/// The monomial parts of f1, f2, d and ac.
pub fn monomial_generators(g: &GeneratorSet<CycNum>) -> Result<Vec<MonomialMap>> {
    [&g.f1, &g.f2, &g.d, &g.ac].iter().map(|m| as_monomial(m)).collect()
}

/// The 45-term form: closure of the seed triples under the monomial generators.
pub fn dickson_form(g: &GeneratorSet<CycNum>) -> Result<CubicForm> {
    close_terms(&seed_triples(), &monomial_generators(g)?)
}

/// Dense fully symmetric 27×27×27 tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymTensor {
    dim: usize,
    data: Vec<CycNum>,
}

impl SymTensor {
    pub fn zeros(dim: usize) -> Self {
        SymTensor {
            dim,
            data: vec![CycNum::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, u: usize, v: usize, w: usize) -> &CycNum {
        &self.data[(u * self.dim + v) * self.dim + w]
    }

    fn set(&mut self, u: usize, v: usize, w: usize, x: CycNum) {
        self.data[(u * self.dim + v) * self.dim + w] = x;
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

/// T[u][v][w] = sign for every ordering of each term; C(x) = T(x,x,x)/6.
pub fn to_tensor(c: &CubicForm) -> SymTensor {
    let mut t = SymTensor::zeros(DIM);
    for term in c.terms() {
        let [a, b, d] = term.indices();
        let s = CycNum::from_int(term.sign as i64);
        for (u, v, w) in [(a, b, d), (a, d, b), (b, a, d), (b, d, a), (d, a, b), (d, b, a)] {
            t.set(u, v, w, s.clone());
        }
    }
    t
}

/// Checks T(Mx, Mx, Mx) = T(x, x, x) coefficientwise, i.e.
/// Σ T[a][b][c]·m[a][u]·m[b][v]·m[c][w] = T[u][v][w] for all u ≤ v ≤ w.
pub fn verify_tensor_invariance(t: &SymTensor, m: &CycMatrix) -> bool {
    let n = t.dim();
    if m.rows() != n || m.cols() != n {
        return false;
    }
    // nonzero (b, c, value) per leading index a
    let slices: Vec<Vec<(usize, usize, CycNum)>> = (0..n)
        .map(|a| {
            let mut out = Vec::new();
            for b in 0..n {
                for c in 0..n {
                    let x = t.get(a, b, c);
                    if !x.is_zero() {
                        out.push((b, c, x.clone()));
                    }
                }
            }
            out
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (v..n).map(move |w| (v, w))).collect();
    // q[a][k] = Σ_{b,c} T[a][b][c]·m[b][v]·m[c][w] for the k-th pair (v, w)
    let q: Vec<Vec<CycNum>> = slices
        .par_iter()
        .map(|slice| {
            pairs
                .iter()
                .map(|&(v, w)| {
                    slice.iter().fold(CycNum::zero(), |acc, (b, c, x)| {
                        let (mb, mc) = (m.get(*b, v), m.get(*c, w));
                        if mb.is_zero() || mc.is_zero() {
                            acc
                        } else {
                            acc + &(&(x * mb) * mc)
                        }
                    })
                })
                .collect()
        })
        .collect();
    (0..n).into_par_iter().all(|u| {
        pairs
            .iter()
            .enumerate()
            .filter(|(_, &(v, _))| v >= u)
            .all(|(k, &(v, w))| {
                let value = (0..n).fold(CycNum::zero(), |acc, a| {
                    let mau = m.get(a, u);
                    if mau.is_zero() || q[a][k].is_zero() {
                        acc
                    } else {
                        acc + &(mau * &q[a][k])
                    }
                });
                value == *t.get(u, v, w)
            })
    })
}

pub fn verify_invariance(c: &CubicForm, m: &CycMatrix) -> bool {
    verify_tensor_invariance(&to_tensor(c), m)
}

/// Outcome of [`jordan_identity_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanReport {
    /// Generators (by name) that do not fix the identity vector.
    pub non_fixing: Vec<String>,
    pub form_value: CycNum,
}

impl JordanReport {
    pub fn passed(&self) -> bool {
        self.non_fixing.is_empty() && self.form_value == CycNum::one()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.non_fixing.first().map(String::as_str)
    }
}

/// The vector (1,1,1;0²⁴).
pub fn identity_vector() -> Vec<CycNum> {
    (0..DIM)
        .map(|i| if i < 3 { CycNum::one() } else { CycNum::zero() })
        .collect()
}

/// Checks that each matrix fixes (1,1,1;0²⁴) and that the form takes the value 1 there.
pub fn jordan_identity_check(c: &CubicForm, gens: &[(&str, &CycMatrix)]) -> Result<JordanReport> {
    let v = identity_vector();
    let mut non_fixing = Vec::new();
    for (name, m) in gens {
        if m.mul_vec(&v)? != v {
            non_fixing.push(name.to_string());
        }
    }
    Ok(JordanReport {
        non_fixing,
        form_value: c.evaluate(&v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_d_ac, build_eprime};

    fn tri(l: [i8; 3], s: i8) -> SignedTriple {
        SignedTriple::new(l, s).unwrap()
    }

    fn monomial_gens() -> Vec<MonomialMap> {
        monomial_generators(&GeneratorSet::build()).unwrap()
    }

    #[test]
    fn triple_validation() {
        assert!(SignedTriple::new([1, 1, 2], 1).is_err());
        assert!(SignedTriple::new([1, 2, 3], 0).is_err());
        assert!(SignedTriple::new([0, 2, 3], 1).is_err());
        assert_eq!(tri([4, -3, 1], -1).to_string(), "- -3 1 4");
    }

    #[test]
    fn monomial_extraction() {
        let (d, ac) = build_d_ac();
        let dm = as_monomial(&d).unwrap();
        let allowed = [CycNum::one(), CycNum::from_int(-1), CycNum::i(), -CycNum::i()];
        assert!(dm.scale.iter().all(|s| allowed.contains(s)));
        let acm = as_monomial(&ac).unwrap();
        assert!(acm.scale.iter().all(|s| *s == CycNum::one()));
        assert_eq!(&acm.perm[..3], &[2, 0, 1]);
        assert!(matches!(as_monomial(&build_eprime()), Err(Error::NotMonomial(0))));
    }

    #[test]
    fn actions_on_seed() {
        let (d, ac) = build_d_ac();
        let t = tri([-3, -2, -1], 1);
        assert_eq!(act_on_triple(&as_monomial(&d).unwrap(), &t).unwrap(), t);
        assert_eq!(act_on_triple(&as_monomial(&ac).unwrap(), &t).unwrap(), t);
        assert_eq!(
            act_on_triple(&MonomialMap::identity(DIM), &tri([1, 9, 17], -1)).unwrap(),
            tri([1, 9, 17], -1)
        );
    }

    #[test]
    fn non_real_sign_rejected() {
        let (d, _) = build_d_ac();
        // d scales label 9 by −i; with 1 and 2 the product is not real
        let t = tri([1, 2, 9], 1);
        assert!(matches!(
            act_on_triple(&as_monomial(&d).unwrap(), &t),
            Err(Error::NonRealSign(_))
        ));
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(eigenvalue_check(&tri([1, 9, 17], 1)));
        assert!(eigenvalue_check(&tri([-3, -2, -1], 1)));
        assert!(!eigenvalue_check(&tri([1, 2, 3], 1)));
    }

    #[test]
    fn closure_gives_45_terms() {
        let form = close_terms(&seed_triples(), &monomial_gens()).unwrap();
        assert_eq!(form.len(), 45);
        assert!(form.terms().iter().all(eigenvalue_check));
    }

    #[test]
    fn seed_orbit_sizes() {
        let gens = monomial_gens();
        let sizes: Vec<usize> = seed_triples()
            .iter()
            .map(|s| close_terms(&[*s], &gens).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![1, 12, 16, 16]);
    }

    #[test]
    fn closure_is_generator_order_independent() {
        let mut gens = monomial_gens();
        let a = close_terms(&seed_triples(), &gens).unwrap();
        gens.reverse();
        assert_eq!(close_terms(&seed_triples(), &gens).unwrap(), a);
    }

    #[test]
    fn tensor_shapes() {
        let form = close_terms(&seed_triples(), &monomial_gens()).unwrap();
        assert_eq!(to_tensor(&form).nonzero_count(), 270);
        assert_eq!(to_tensor(&CubicForm::default()).nonzero_count(), 0);
        let single = CubicForm::from_terms([tri([-3, -2, -1], 1)]).unwrap();
        let t = to_tensor(&single);
        assert_eq!(t.nonzero_count(), 6);
        assert_eq!(t.get(2, 0, 1), &CycNum::one());
    }

    #[test]
    fn conflicting_terms_rejected() {
        let r = CubicForm::from_terms([tri([1, 2, 3], 1), tri([3, 2, 1], -1)]);
        assert!(matches!(r, Err(Error::SignConflict(_))));
    }

    #[test]
    fn jordan_identity() {
        let g = GeneratorSet::build();
        let form = close_terms(&seed_triples(), &monomial_gens()).unwrap();
        let report = jordan_identity_check(
            &form,
            &[("f1", &g.f1), ("f2", &g.f2), ("ac", &g.ac), ("eprime", &g.eprime)],
        )
        .unwrap();
        assert!(report.passed(), "{report:?}");
        let report = jordan_identity_check(&form, &[("d", &g.d)]).unwrap();
        assert_eq!(report.first_failure(), Some("d"));
        assert_eq!(form.evaluate(&identity_vector()), CycNum::one());
    }
}
