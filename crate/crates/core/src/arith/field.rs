//! Prime field arithmetic on machine words.

use std::fmt;

use crate::error::{Error, Result};

/// Largest prime accepted by the session guard.
pub const MAX_PRIME: u64 = 31;

pub fn check_prime(p: u64) -> Result<u32> {
    if !(2..=MAX_PRIME).contains(&p) || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        return Err(Error::BadPrime(p));
    }
    Ok(p as u32)
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    (a * b) % p
}

pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    pow(a, (p - 2) as u64, p)
}

/// Reduce a signed integer into `[0, p)`.
pub fn from_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// An element of 𝔽_p carrying its characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElement {
    value: u32,
    p: u32,
}

impl FpElement {
    pub fn new(v: i64, p: u32) -> Self {
        FpElement { value: from_i64(v, p), p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn characteristic(self) -> u32 {
        self.p
    }

    pub fn inverse(self) -> Option<Self> {
        (self.value != 0).then(|| FpElement { value: inv(self.value, self.p), p: self.p })
    }

    pub fn pow(self, e: u64) -> Self {
        FpElement { value: pow(self.value, e, self.p), p: self.p }
    }
}

impl std::ops::Add for FpElement {
    type Output = FpElement;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.p, o.p);
        FpElement { value: add(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Sub for FpElement {
    type Output = FpElement;
    fn sub(self, o: Self) -> Self {
        assert_eq!(self.p, o.p);
        FpElement { value: sub(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Mul for FpElement {
    type Output = FpElement;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.p, o.p);
        FpElement { value: mul(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> Self {
        FpElement { value: neg(self.value, self.p), p: self.p }
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard() {
        assert!(check_prime(2).is_ok());
        assert!(check_prime(31).is_ok());
        assert_eq!(check_prime(33), Err(Error::BadPrime(33)));
        assert_eq!(check_prime(9), Err(Error::BadPrime(9)));
        assert_eq!(check_prime(37), Err(Error::BadPrime(37)));
        assert_eq!(check_prime(1), Err(Error::BadPrime(1)));
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 11, 13, 31] {
            for a in 1..p {
                assert_eq!(mul(a, inv(a, p), p), 1);
            }
        }
        assert_eq!(FpElement::new(-1, 5).value(), 4);
        assert_eq!(FpElement::new(2, 5).pow(5).value(), 2);
    }
}
