//! Exact arithmetic in the cyclotomic field Q(ζ), ζ = exp(2πi/20).
//!
//! Elements are stored in the power basis 1, ζ, …, ζ⁷, reduced modulo the
//! minimal polynomial Φ₂₀(x) = x⁸ − x⁶ + x⁴ − x² + 1, as eight integer
//! numerators over one positive common denominator with
//! gcd(numerators, denominator) = 1. Values whose numerators and denominator
//! fit in an `i64` are kept inline and computed with `i128` intermediates;
//! anything larger transparently moves to `BigInt` storage. The representation
//! is canonical, so derived equality and hashing are field equality.
//!
//! The scalars used throughout the crate live here:
//! `i = ζ⁵`, `z = ζ⁴ = exp(2πi/5)`, `σ = −z − z⁴ = (1 − √5)/2` and
//! `τ = −z² − z³ = (1 + √5)/2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Field;

/// Degree of Φ₂₀.
pub const DEGREE: usize = 8;

/// Exponents k with gcd(k, 20) = 1, i.e. the Galois group of Q(ζ₂₀).
const GALOIS_UNITS: [i64; 8] = [1, 3, 7, 9, 11, 13, 17, 19];

/// `(num_a, den_a, num_b, den_b) -> (num, den)`, `None` on overflow.
type RawOp<I> = fn(&[I; DEGREE], &I, &[I; DEGREE], &I) -> Option<([I; DEGREE], I)>;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: [i64; DEGREE], den: i64 },
    Big(Box<BigRepr>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct BigRepr {
    num: [BigInt; DEGREE],
    den: BigInt,
}

/// An element of Q(ζ₂₀) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    repr: Repr,
}

trait RawInt: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul {}
impl RawInt for i128 {}
impl RawInt for BigInt {}

/// Reduces a polynomial in ζ of degree < 20 to the power basis.
fn reduce_poly<T: RawInt>(mut p: Vec<T>) -> Option<[T; DEGREE]> {
    debug_assert!(p.len() <= 20);
    // ζ¹⁰ = −1
    for k in (10..p.len()).rev() {
        let c = std::mem::replace(&mut p[k], T::zero());
        if !c.is_zero() {
            p[k - 10] = p[k - 10].checked_sub(&c)?;
        }
    }
    p.resize(10, T::zero());
    // ζ⁸ = ζ⁶ − ζ⁴ + ζ² − 1, and the same shifted by one for ζ⁹
    for k in [9usize, 8] {
        let c = std::mem::replace(&mut p[k], T::zero());
        if c.is_zero() {
            continue;
        }
        p[k - 2] = p[k - 2].checked_add(&c)?;
        p[k - 4] = p[k - 4].checked_sub(&c)?;
        p[k - 6] = p[k - 6].checked_add(&c)?;
        p[k - 8] = p[k - 8].checked_sub(&c)?;
    }
    p.truncate(DEGREE);
    Some(std::array::from_fn(|k| p[k].clone()))
}

fn raw_add<T: RawInt>(an: &[T; DEGREE], ad: &T, bn: &[T; DEGREE], bd: &T) -> Option<([T; DEGREE], T)> {
    if ad == bd {
        let mut num: [T; DEGREE] = std::array::from_fn(|_| T::zero());
        for k in 0..DEGREE {
            num[k] = an[k].checked_add(&bn[k])?;
        }
        return Some((num, ad.clone()));
    }
    let mut num: [T; DEGREE] = std::array::from_fn(|_| T::zero());
    for k in 0..DEGREE {
        num[k] = an[k].checked_mul(bd)?.checked_add(&bn[k].checked_mul(ad)?)?;
    }
    Some((num, ad.checked_mul(bd)?))
}

fn raw_mul<T: RawInt>(an: &[T; DEGREE], ad: &T, bn: &[T; DEGREE], bd: &T) -> Option<([T; DEGREE], T)> {
    let mut prod: Vec<T> = vec![T::zero(); 2 * DEGREE - 1];
    for (j, a) in an.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, b) in bn.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            prod[j + k] = prod[j + k].checked_add(&a.checked_mul(b)?)?;
        }
    }
    Some((reduce_poly(prod)?, ad.checked_mul(bd)?))
}

/// Applies the automorphism ζ ↦ ζᵏ (k a unit mod 20).
fn raw_galois<T: RawInt>(an: &[T; DEGREE], k: i64) -> Option<[T; DEGREE]> {
    let mut p: Vec<T> = vec![T::zero(); 20];
    for (j, a) in an.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let e = (j as i64 * k).rem_euclid(20) as usize;
        p[e] = p[e].checked_add(a)?;
    }
    reduce_poly(p)
}

/// Divides out the common content and makes the denominator positive.
fn raw_normalize<T: RawInt>(mut num: [T; DEGREE], mut den: T) -> ([T; DEGREE], T) {
    if num.iter().all(Zero::is_zero) {
        return (std::array::from_fn(|_| T::zero()), T::one());
    }
    if den.is_negative() {
        den = -den;
        for c in num.iter_mut() {
            *c = -c.clone();
        }
    }
    let mut g = den.clone();
    for c in num.iter() {
        if g.is_one() {
            break;
        }
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if !g.is_one() {
        for c in num.iter_mut() {
            *c = c.div_floor(&g);
        }
        den = den.div_floor(&g);
    }
    (num, den)
}

impl CycNum {
    fn from_small_unchecked(num: [i64; DEGREE], den: i64) -> Self {
        CycNum {
            repr: Repr::Small { num, den },
        }
    }

    /// Builds a canonical value from wide numerators, demoting to inline storage when possible.
    fn from_wide(num: [i128; DEGREE], den: i128) -> Self {
        let (num, den) = raw_normalize(num, den);
        Self::from_small_wide(&num, den).unwrap_or_else(|| {
            let big: [BigInt; DEGREE] = std::array::from_fn(|k| BigInt::from(num[k]));
            CycNum {
                repr: Repr::Big(Box::new(BigRepr {
                    num: big,
                    den: BigInt::from(den),
                })),
            }
        })
    }

    fn from_small_wide(num: &[i128; DEGREE], den: i128) -> Option<Self> {
        let fits = |x: i128| x > i64::MIN as i128 && x <= i64::MAX as i128;
        if !fits(den) || !num.iter().all(|&x| fits(x)) {
            return None;
        }
        Some(Self::from_small_unchecked(
            std::array::from_fn(|k| num[k] as i64),
            den as i64,
        ))
    }

    fn from_big(num: [BigInt; DEGREE], den: BigInt) -> Self {
        let (num, den) = raw_normalize(num, den);
        let small = den.to_i128().and_then(|d| {
            let mut wide = [0i128; DEGREE];
            for k in 0..DEGREE {
                wide[k] = num[k].to_i128()?;
            }
            Self::from_small_wide(&wide, d)
        });
        small.unwrap_or_else(|| CycNum {
            repr: Repr::Big(Box::new(BigRepr { num, den })),
        })
    }

    fn wide(&self) -> Option<([i128; DEGREE], i128)> {
        match &self.repr {
            Repr::Small { num, den } => Some((std::array::from_fn(|k| num[k] as i128), *den as i128)),
            Repr::Big(_) => None,
        }
    }

    fn big(&self) -> ([BigInt; DEGREE], BigInt) {
        match &self.repr {
            Repr::Small { num, den } => (std::array::from_fn(|k| BigInt::from(num[k])), BigInt::from(*den)),
            Repr::Big(b) => (b.num.clone(), b.den.clone()),
        }
    }

    /// Runs a binary operation on the inline fast path, falling back to big integers on overflow.
    fn binary(&self, rhs: &Self, wide_op: RawOp<i128>, big_op: RawOp<BigInt>) -> Self {
        if let (Some((an, ad)), Some((bn, bd))) = (self.wide(), rhs.wide()) {
            if let Some((num, den)) = wide_op(&an, &ad, &bn, &bd) {
                return Self::from_wide(num, den);
            }
        }
        let (an, ad) = self.big();
        let (bn, bd) = rhs.big();
        let (num, den) = big_op(&an, &ad, &bn, &bd).expect("big integer arithmetic does not overflow");
        Self::from_big(num, den)
    }

    pub fn zero() -> Self {
        Self::from_small_unchecked([0; DEGREE], 1)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// The rational number p/q.
    ///
    /// Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let mut num = [0i128; DEGREE];
        num[0] = p as i128;
        Self::from_wide(num, q as i128)
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let mut num: [BigInt; DEGREE] = std::array::from_fn(|_| BigInt::zero());
        num[0] = r.numer().clone();
        Self::from_big(num, r.denom().clone())
    }

    /// Builds c0 + c1ζ + … + c7ζ⁷.
    pub fn from_coeffs(coeffs: &[BigRational; DEGREE]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num: [BigInt; DEGREE] = std::array::from_fn(|k| coeffs[k].numer() * (&den / coeffs[k].denom()));
        Self::from_big(num, den)
    }

    /// ζᵏ for any integer k.
    pub fn zeta(k: i64) -> Self {
        let mut p = vec![0i128; 20];
        p[k.rem_euclid(20) as usize] = 1;
        let num = reduce_poly(p).expect("unit coefficients cannot overflow");
        Self::from_wide(num, 1)
    }

    /// The imaginary unit i = ζ⁵.
    pub fn i() -> Self {
        Self::zeta(5)
    }

    /// z = ζ⁴ = exp(2πi/5).
    pub fn z() -> Self {
        Self::zeta(4)
    }

    /// zᵏ.
    pub fn z_pow(k: i64) -> Self {
        Self::zeta(4 * k)
    }

    /// σ = −z − z⁴ = (1 − √5)/2.
    pub fn sigma() -> Self {
        -(Self::z_pow(1) + Self::z_pow(4))
    }

    /// τ = −z² − z³ = (1 + √5)/2.
    pub fn tau() -> Self {
        -(Self::z_pow(2) + Self::z_pow(3))
    }

    /// The eight power-basis coefficients c0..c7 as reduced rationals.
    pub fn coeffs(&self) -> [BigRational; DEGREE] {
        let (num, den) = self.big();
        std::array::from_fn(|k| BigRational::new(num[k].clone(), den.clone()))
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        let (num, den) = self.big();
        BigRational::new(num[k].clone(), den)
    }

    /// Common denominator of the coefficients together with the numerators.
    pub fn numerators_and_denominator(&self) -> ([BigInt; DEGREE], BigInt) {
        self.big()
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|&c| c == 0),
            Repr::Big(_) => false,
        }
    }

    /// True when the value lies in Q.
    pub fn is_rational(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num[1..].iter().all(|&c| c == 0),
            Repr::Big(b) => b.num[1..].iter().all(Zero::is_zero),
        }
    }

    /// The image under ζ ↦ ζᵏ. `k` must be coprime to 20.
    pub fn galois(&self, k: i64) -> Self {
        assert!(k.gcd(&20) == 1, "exponent {k} is not a unit mod 20");
        if let Some((num, den)) = self.wide() {
            if let Some(num) = raw_galois(&num, k) {
                return Self::from_wide(num, den);
            }
        }
        let (num, den) = self.big();
        Self::from_big(raw_galois(&num, k).expect("big integers"), den)
    }

    /// Complex conjugation, ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        self.galois(19)
    }

    /// Multiplicative inverse via the product of the non-trivial Galois conjugates.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let cofactor = GALOIS_UNITS[1..]
            .iter()
            .fold(Self::one(), |acc, &k| acc * self.galois(k));
        let norm = self * &cofactor;
        debug_assert!(norm.is_rational(), "field norm must be rational");
        let norm = norm.coeff(0);
        Ok(cofactor * Self::from_rational(&norm.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Floating-point value under ζ ↦ exp(2πi/20). Diagnostics only.
    pub fn approx(&self) -> Complex64 {
        let root = Complex64::from_polar(1.0, std::f64::consts::TAU / 20.0);
        let mut power = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs().iter() {
            acc += power * c.to_f64().unwrap_or(f64::NAN);
            power *= root;
        }
        acc
    }

    /// Raises to a non-negative power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add<&CycNum> for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.binary(rhs, raw_add::<i128>, raw_add::<BigInt>)
    }
}

impl Mul<&CycNum> for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.is_zero() || rhs.is_zero() {
            return CycNum::zero();
        }
        self.binary(rhs, raw_mul::<i128>, raw_mul::<BigInt>)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        match &self.repr {
            // i64::MIN is never stored inline, so negation cannot overflow.
            Repr::Small { num, den } => CycNum::from_small_unchecked(num.map(|c| -c), *den),
            Repr::Big(b) => CycNum {
                repr: Repr::Big(Box::new(BigRepr {
                    num: std::array::from_fn(|k| -&b.num[k]),
                    den: b.den.clone(),
                })),
            },
        }
    }
}

impl Sub<&CycNum> for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                $tr::$method(&self, &rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                $tr::$method(&self, rhs)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                $tr::$method(self, &rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Field for CycNum {
    const TAG: &'static str = "cyc";

    fn zero() -> Self {
        CycNum::zero()
    }
    fn one() -> Self {
        CycNum::one()
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        CycNum::inv(self).ok()
    }
    fn from_i64(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

/// Text form: eight rationals `p/q` (or `p` when q = 1) separated by single spaces.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if c.denom().is_one() {
                write!(f, "{}", c.numer())?;
            } else {
                write!(f, "{}/{}", c.numer(), c.denom())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{self}]")
    }
}

impl FromStr for CycNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != DEGREE {
            return Err(Error::Parse(format!(
                "expected {DEGREE} coefficients, found {}: `{s}`",
                parts.len()
            )));
        }
        let mut coeffs: [BigRational; DEGREE] = std::array::from_fn(|_| BigRational::zero());
        for (k, p) in parts.iter().enumerate() {
            coeffs[k] = p
                .parse::<BigRational>()
                .map_err(|e| Error::Parse(format!("bad rational `{p}`: {e}")))?;
        }
        Ok(Self::from_coeffs(&coeffs))
    }
}
