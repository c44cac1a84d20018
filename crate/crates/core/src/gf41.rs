//! Arithmetic modulo 41 and the reduction of Q(ζ₂₀) onto GF(41).
//!
//! GF(41) contains primitive 4th and 5th roots of unity (41 ≡ 1 mod 20), so
//! Z[ζ₂₀] maps onto it once an image of ζ is fixed. We use the residue ω with
//! ω⁴ = 16 (the image of z) and ω⁵ = 9 (the image of i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::field::Field;

pub const MODULUS: u8 = 41;

/// A residue in [0, 40].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf41(u8);

impl Gf41 {
    pub const ZERO: Gf41 = Gf41(0);
    pub const ONE: Gf41 = Gf41(1);

    pub fn new(v: i64) -> Self {
        Gf41(v.rem_euclid(MODULUS as i64) as u8)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let r = v % BigInt::from(MODULUS);
        Gf41::new(r.to_i64().expect("residue fits"))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn pow(self, e: u64) -> Self {
        let mut base = self;
        let mut acc = Gf41::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(MODULUS as u64 - 2))
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.inv()?)
    }

    /// Smallest residue r with r² = self, if one exists.
    pub fn sqrt(self) -> Option<Self> {
        (0..MODULUS as i64).map(Gf41::new).find(|&r| r * r == self)
    }

    /// All residues, 0..=40.
    pub fn all() -> impl Iterator<Item = Gf41> {
        (0..MODULUS).map(Gf41)
    }
}

impl Add for Gf41 {
    type Output = Gf41;
    fn add(self, rhs: Gf41) -> Gf41 {
        Gf41((self.0 + rhs.0) % MODULUS)
    }
}

impl Sub for Gf41 {
    type Output = Gf41;
    fn sub(self, rhs: Gf41) -> Gf41 {
        Gf41((self.0 + MODULUS - rhs.0) % MODULUS)
    }
}

impl Mul for Gf41 {
    type Output = Gf41;
    fn mul(self, rhs: Gf41) -> Gf41 {
        Gf41(((self.0 as u16 * rhs.0 as u16) % MODULUS as u16) as u8)
    }
}

impl Neg for Gf41 {
    type Output = Gf41;
    fn neg(self) -> Gf41 {
        Gf41((MODULUS - self.0) % MODULUS)
    }
}

/// Panics on division by zero; use [`Gf41::checked_div`] for a fallible form.
impl Div for Gf41 {
    type Output = Gf41;
    fn div(self, rhs: Gf41) -> Gf41 {
        self.checked_div(rhs).expect("division by zero in GF(41)")
    }
}

impl fmt::Display for Gf41 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Gf41 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Gf41 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad residue `{s}`")))?;
        Ok(Gf41::new(v))
    }
}

impl Field for Gf41 {
    const TAG: &'static str = "gf41";

    fn zero() -> Self {
        Gf41::ZERO
    }
    fn one() -> Self {
        Gf41::ONE
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn inv(&self) -> Option<Self> {
        Gf41::inv(*self).ok()
    }
    fn from_i64(n: i64) -> Self {
        Gf41::new(n)
    }
}

/// Image of ζ₂₀: the unique residue with ω⁴ = 16 and ω⁵ = 9.
pub fn omega() -> Gf41 {
    static OMEGA: OnceLock<Gf41> = OnceLock::new();
    *OMEGA.get_or_init(|| {
        let mut found = Gf41::all().filter(|w| w.pow(4) == Gf41(16) && w.pow(5) == Gf41(9));
        let w = found.next().expect("a 20th root of unity exists mod 41");
        assert!(found.next().is_none(), "the image of zeta must be unique");
        assert_eq!(w, Gf41(9) * Gf41(16).inv().unwrap());
        w
    })
}

/// The ring homomorphism Z[1/n, ζ] → GF(41) (n coprime to 41) sending ζ to [`omega`].
pub fn reduce_cyc(a: &CycNum) -> Result<Gf41> {
    let (num, den) = a.numerators_and_denominator();
    let den = Gf41::from_bigint(&den);
    if den.is_zero() {
        return Err(Error::DenominatorDivisibleBy41);
    }
    let w = omega();
    let mut acc = Gf41::ZERO;
    let mut power = Gf41::ONE;
    for c in num.iter() {
        acc = acc + Gf41::from_bigint(c) * power;
        power = power * w;
    }
    Ok(acc * den.inv()?)
}

/// The designated residues and their lifts to Q(ζ₂₀).
///
/// Reduction is not injective (for example 25 is the image of both −z and
/// 2/5), so there is no general inverse of [`reduce_cyc`]; lifting is only
/// defined for this table.
pub fn lift_table() -> BTreeMap<Gf41, CycNum> {
    BTreeMap::from([
        (Gf41(16), CycNum::z()),
        (Gf41(10), CycNum::z_pow(2)),
        (Gf41(37), CycNum::z_pow(3)),
        (Gf41(18), CycNum::z_pow(4)),
        (Gf41(9), CycNum::i()),
        (Gf41(7), CycNum::sigma()),
        (Gf41(35), CycNum::tau()),
        (Gf41(33), CycNum::from_ratio(1, 5)),
    ])
}
