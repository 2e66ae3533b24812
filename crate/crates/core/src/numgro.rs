//! The rank-3 numerical Grothendieck lattice of coherent systems.
//!
//! A class `(r, d, n)` records the rank and degree of the sheaf part and the
//! dimension of the section space. All arithmetic is on [`BigInt`], so no
//! pairing or functor image can overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::charge::PlanePoint;
use crate::error::{Error, Result};
use crate::rational::{bigint_json, Rational};

/// Genus of the base curve; always at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Genus(u32);

impl Genus {
    pub fn new(g: i64) -> Result<Genus> {
        if g < 1 || g > u32::MAX as i64 {
            return Err(Error::InvalidGenus(g));
        }
        Ok(Genus(g as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn rational(self) -> Rational {
        Rational::from_integer(self.big())
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Genus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

impl<'de> Deserialize<'de> for Genus {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = i64::deserialize(d)?;
        Genus::new(g).map_err(serde::de::Error::custom)
    }
}

/// Numerical class `(r, d, n)` of an object of the derived category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NumClass {
    pub r: BigInt,
    pub d: BigInt,
    pub n: BigInt,
}

impl NumClass {
    pub fn new(r: impl Into<BigInt>, d: impl Into<BigInt>, n: impl Into<BigInt>) -> NumClass {
        NumClass { r: r.into(), d: d.into(), n: n.into() }
    }

    pub fn zero() -> NumClass {
        NumClass::default()
    }

    /// `[O → 0]`, the exceptional object generating the section-space part.
    pub fn o_to_zero() -> NumClass {
        NumClass::new(0, 0, 1)
    }

    /// `[O → O]` with the identity map.
    pub fn o_to_o() -> NumClass {
        NumClass::new(1, 0, 1)
    }

    /// `[0 → O_x]`, a skyscraper in the sheaf slot.
    pub fn skyscraper() -> NumClass {
        NumClass::new(0, 1, 0)
    }

    /// `[0 → O]`, the structure sheaf in the sheaf slot.
    pub fn structure_sheaf() -> NumClass {
        NumClass::new(1, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.d.is_zero() && self.n.is_zero()
    }

    /// gcd of the absolute entries is one; the zero class is not primitive.
    pub fn is_primitive(&self) -> bool {
        self.r.gcd(&self.d).gcd(&self.n).is_one()
    }

    pub fn scale(&self, k: &BigInt) -> NumClass {
        NumClass { r: &self.r * k, d: &self.d * k, n: &self.n * k }
    }

    pub fn parse(s: &str) -> Result<NumClass> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("class must be r,d,n: {s:?}")));
        }
        let mut v = Vec::with_capacity(3);
        for p in parts {
            v.push(p.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {p:?} in class")))?);
        }
        let n = v.pop().unwrap();
        let d = v.pop().unwrap();
        let r = v.pop().unwrap();
        Ok(NumClass { r, d, n })
    }
}

impl fmt::Display for NumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.r, self.d, self.n)
    }
}

impl Serialize for NumClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Triple<'a>(
            #[serde(with = "bigint_json")] &'a BigInt,
            #[serde(with = "bigint_json")] &'a BigInt,
            #[serde(with = "bigint_json")] &'a BigInt,
        );
        Triple(&self.r, &self.d, &self.n).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Triple(
            #[serde(with = "bigint_json")] BigInt,
            #[serde(with = "bigint_json")] BigInt,
            #[serde(with = "bigint_json")] BigInt,
        );
        let Triple(r, d, n) = Triple::deserialize(d)?;
        Ok(NumClass { r, d, n })
    }
}

impl Add for &NumClass {
    type Output = NumClass;
    fn add(self, o: &NumClass) -> NumClass {
        NumClass { r: &self.r + &o.r, d: &self.d + &o.d, n: &self.n + &o.n }
    }
}

impl Sub for &NumClass {
    type Output = NumClass;
    fn sub(self, o: &NumClass) -> NumClass {
        NumClass { r: &self.r - &o.r, d: &self.d - &o.d, n: &self.n - &o.n }
    }
}

impl Neg for &NumClass {
    type Output = NumClass;
    fn neg(self) -> NumClass {
        NumClass { r: -&self.r, d: -&self.d, n: -&self.n }
    }
}

impl Mul<&NumClass> for &BigInt {
    type Output = NumClass;
    fn mul(self, v: &NumClass) -> NumClass {
        v.scale(self)
    }
}

/// The Euler pairing `χ(v1, v2)`.
pub fn euler(v1: &NumClass, v2: &NumClass, g: Genus) -> BigInt {
    let one_minus_g = BigInt::one() - g.big();
    let r2_term = &v2.r * &one_minus_g;
    &v1.r * (&v2.d + &r2_term) - &v1.d * &v2.r + &v1.n * (&v2.n - &v2.d - &r2_term)
}

/// Class of the Serre functor image.
pub fn serre_class(v: &NumClass, g: Genus) -> NumClass {
    let gm1 = g.big() - BigInt::one();
    let nr = &v.n - &v.r;
    NumClass {
        r: nr.clone(),
        d: -&v.d + BigInt::from(2) * &nr * &gm1,
        n: &v.n - &v.d + &nr * &gm1,
    }
}

/// Integer matrix of [`serre_class`] acting on column vectors `(r, d, n)`.
pub fn serre_matrix(g: Genus) -> [[BigInt; 3]; 3] {
    let cols = [NumClass::new(1, 0, 0), NumClass::new(0, 1, 0), NumClass::new(0, 0, 1)].map(|e| serre_class(&e, g));
    [
        [cols[0].r.clone(), cols[1].r.clone(), cols[2].r.clone()],
        [cols[0].d.clone(), cols[1].d.clone(), cols[2].d.clone()],
        [cols[0].n.clone(), cols[1].n.clone(), cols[2].n.clone()],
    ]
}

pub fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Class of the duality functor image, `(n − r, d, n)`. An involution.
pub fn dual_class(v: &NumClass) -> NumClass {
    NumClass { r: &v.n - &v.r, d: v.d.clone(), n: v.n.clone() }
}

/// Left mutation of `v` through the exceptional class `e`: `v − χ(e, v)·e`.
pub fn mutate_left(e: &NumClass, v: &NumClass, g: Genus) -> Result<NumClass> {
    let self_pairing = euler(e, e, g);
    if !self_pairing.is_one() {
        return Err(Error::NotExceptional(e.to_string(), self_pairing.to_string()));
    }
    let chi = euler(e, v, g);
    Ok(v - &e.scale(&chi))
}

/// `Π(r, d, n) = (d/r, n/r)`.
pub fn project(v: &NumClass) -> Result<PlanePoint> {
    if v.r.is_zero() {
        return Err(Error::ZeroRank(v.to_string()));
    }
    let r = Rational::from_integer(v.r.clone());
    Ok(PlanePoint {
        b: Rational::from_integer(v.d.clone()) / &r,
        w: Rational::from_integer(v.n.clone()) / &r,
    })
}
