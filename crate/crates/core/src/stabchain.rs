//! Permutations and a deterministic Schreier–Sims stabilizer chain.
//!
//! Permutations act on the right: `x^(gh) = (x^g)^h`, and
//! [`Perm::then`] builds that product.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A bijection on 0..degree stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument("image list is not a bijection".into()));
            }
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(x, &y)| *x as u32 != y)
            .map(|(x, _)| x)
    }
}

/// One permutation per generator, all of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermSet {
    pub degree: usize,
    pub perms: Vec<Perm>,
}

impl PermSet {
    pub fn new(degree: usize, perms: Vec<Perm>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if perms.iter().any(|p| p.degree() != degree) {
            return Err(Error::DimensionMismatch("permutation degrees differ".into()));
        }
        Ok(PermSet { degree, perms })
    }

    pub fn subset(&self, idx: &[usize]) -> PermSet {
        PermSet {
            degree: self.degree,
            perms: idx.iter().map(|&i| self.perms[i].clone()).collect(),
        }
    }
}

/// True iff the generated group has a single orbit on 0..degree.
pub fn transitivity_check(p: &PermSet) -> bool {
    orbit_of(0, &p.perms, p.degree).len() == p.degree
}

fn orbit_of(point: usize, gens: &[Perm], degree: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut orbit = vec![point];
    let mut k = 0;
    while k < orbit.len() {
        let x = orbit[k];
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        k += 1;
    }
    orbit
}

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Indices of strong generators fixing all earlier base points.
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// Position in `reps` of the coset representative for each point, if in the orbit.
    slot: Vec<Option<u32>>,
    /// `reps[k]` maps the base point to `orbit[k]`.
    reps: Vec<Perm>,
    inv_reps: Vec<Perm>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        Level {
            base_point,
            gens: Vec::new(),
            orbit: Vec::new(),
            slot: vec![None; degree],
            reps: Vec::new(),
            inv_reps: Vec::new(),
        }
    }

    fn rebuild(&mut self, strong: &[Perm], strong_inv: &[Perm]) {
        let degree = self.slot.len();
        self.slot = vec![None; degree];
        self.orbit = vec![self.base_point];
        self.reps = vec![Perm::identity(degree)];
        self.inv_reps = vec![Perm::identity(degree)];
        self.slot[self.base_point] = Some(0);
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k];
            for &g in &self.gens {
                let y = strong[g].apply(x);
                if self.slot[y].is_none() {
                    self.slot[y] = Some(self.orbit.len() as u32);
                    self.orbit.push(y);
                    self.reps.push(self.reps[k].then(&strong[g]));
                    self.inv_reps.push(strong_inv[g].then(&self.inv_reps[k]));
                }
            }
            k += 1;
        }
    }
}

/// Base, strong generating set and explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    strong: Vec<Perm>,
    strong_inv: Vec<Perm>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Deterministic Schreier–Sims. Base points are chosen as the smallest
    /// point moved by the group, then the smallest point moved by each new
    /// strong generator that fixes the current base.
    pub fn build(p: &PermSet) -> Self {
        let degree = p.degree;
        let mut chain = StabChain {
            degree,
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
        };
        for g in &p.perms {
            if !g.is_identity() && !chain.strong.contains(g) {
                chain.strong_inv.push(g.inverse());
                chain.strong.push(g.clone());
            }
        }
        if let Some(first) = chain.strong.iter().filter_map(Perm::first_moved).min() {
            chain.levels.push(Level::new(first, degree));
        }
        for s in 0..chain.strong.len() {
            if chain.fixes_base(&chain.strong[s]) {
                let pt = chain.strong[s].first_moved().expect("non-identity generator");
                chain.levels.push(Level::new(pt, degree));
            }
        }
        for l in 0..chain.levels.len() {
            chain.levels[l].gens = chain.gens_fixing_prefix(l);
            chain.rebuild_level(l);
        }
        chain.complete();
        chain
    }

    fn fixes_base(&self, g: &Perm) -> bool {
        self.levels.iter().all(|l| g.apply(l.base_point) == l.base_point)
    }

    fn gens_fixing_prefix(&self, l: usize) -> Vec<usize> {
        (0..self.strong.len())
            .filter(|&s| {
                self.levels[..l]
                    .iter()
                    .all(|lv| self.strong[s].apply(lv.base_point) == lv.base_point)
            })
            .collect()
    }

    fn rebuild_level(&mut self, l: usize) {
        let (strong, strong_inv) = (&self.strong, &self.strong_inv);
        self.levels[l].rebuild(strong, strong_inv);
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level it stopped at.
    fn sift(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let beta = g.apply(level.base_point);
            match level.slot[beta] {
                None => return (g, l),
                Some(k) => g = g.then(&level.inv_reps[k as usize]),
            }
        }
        let depth = self.levels.len();
        (g, depth)
    }

    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut dirty = vec![false; self.levels.len()];
        let mut i = self.levels.len() - 1;
        loop {
            if dirty[i] {
                self.rebuild_level(i);
                dirty[i] = false;
            }
            match self.find_new_generator(i) {
                Some((h, j)) => {
                    let s = self.strong.len();
                    self.strong_inv.push(h.inverse());
                    self.strong.push(h);
                    if j == self.levels.len() {
                        let pt = self.strong[s].first_moved().expect("non-identity residue");
                        self.levels.push(Level::new(pt, self.degree));
                        dirty.push(false);
                    }
                    for l in 0..=j {
                        self.levels[l].gens.push(s);
                    }
                    for l in i + 1..=j {
                        self.rebuild_level(l);
                    }
                    for d in dirty.iter_mut().take(i + 1) {
                        *d = true;
                    }
                    i = j;
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
    }

    /// First Schreier generator at level `i` that does not sift through the levels below it.
    fn find_new_generator(&self, i: usize) -> Option<(Perm, usize)> {
        let level = &self.levels[i];
        for (k, &beta) in level.orbit.iter().enumerate() {
            for &s in &level.gens {
                let gamma = self.strong[s].apply(beta);
                let target = level.slot[gamma].expect("orbit is closed") as usize;
                let lhs = level.reps[k].then(&self.strong[s]);
                if lhs == level.reps[target] {
                    continue;
                }
                let schreier = lhs.then(&level.inv_reps[target]);
                let (h, j) = self.sift(schreier, i + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Perm] {
        &self.strong
    }

    pub fn order(&self) -> BigUint {
        self.transversal_sizes()
            .iter()
            .fold(BigUint::one(), |acc, &n| acc * BigUint::from(n))
    }

    /// Order of the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_order(&self, k: usize) -> BigUint {
        self.transversal_sizes()[k.min(self.levels.len())..]
            .iter()
            .fold(BigUint::one(), |acc, &n| acc * BigUint::from(n))
    }

    /// Group membership by sifting.
    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).0.is_identity()
    }
}

pub fn stab_chain_order(p: &PermSet) -> BigUint {
    StabChain::build(p).order()
}
