//! Fixed-point interval arithmetic on big integers.
//!
//! A value is an enclosure `[lo, hi]·2^-frac_bits` with integer endpoints.
//! Every operation rounds `lo` down and `hi` up, so the true value is always
//! inside and the width is an honest error bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedInterval {
    lo: BigInt,
    hi: BigInt,
    frac_bits: u32,
}

fn floor_shr(x: &BigInt, bits: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << bits))
}

fn ceil_shr(x: &BigInt, bits: u32) -> BigInt {
    -((-x).div_floor(&(BigInt::one() << bits)))
}

/// `x·2^-frac_bits` as a float, for `x` of any size.
fn scaled_to_f64(x: &BigInt, frac_bits: u32) -> f64 {
    let bits = x.bits() as i64;
    let shift = (bits - 60).max(0) as u32;
    let mantissa = (x >> shift).to_f64().unwrap_or(f64::NAN);
    mantissa * 2f64.powi(shift as i32 - frac_bits as i32)
}

impl FixedInterval {
    pub fn from_int(n: &BigInt, frac_bits: u32) -> Self {
        let v = n << frac_bits;
        Self {
            lo: v.clone(),
            hi: v,
            frac_bits,
        }
    }

    /// Enclosure of `√n` for `n ≥ 0`; exact when `n` is a perfect square.
    pub fn sqrt(n: &BigInt, frac_bits: u32) -> Self {
        assert!(!n.is_negative(), "sqrt of negative integer");
        let scaled = n << (2 * frac_bits);
        let s = scaled.sqrt();
        let hi = if &s * &s == scaled { s.clone() } else { &s + 1 };
        Self {
            lo: s,
            hi,
            frac_bits,
        }
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            frac_bits: self.frac_bits,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
            frac_bits: self.frac_bits,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Division by two.
    pub fn half(&self) -> Self {
        Self {
            lo: floor_shr(&self.lo, 1),
            hi: ceil_shr(&self.hi, 1),
            frac_bits: self.frac_bits,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        Self {
            lo: floor_shr(min, self.frac_bits),
            hi: ceil_shr(max, self.frac_bits),
            frac_bits: self.frac_bits,
        }
    }

    /// `self^t` by binary exponentiation.
    pub fn pow(&self, mut t: u64) -> Self {
        let mut acc = Self::from_int(&BigInt::one(), self.frac_bits);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                acc = acc.mul(&base);
            }
            t >>= 1;
            if t > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Upper bound on the enclosure width.
    pub fn width(&self) -> f64 {
        scaled_to_f64(&(&self.hi - &self.lo), self.frac_bits)
    }

    pub fn midpoint(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.frac_bits + 1)
    }

    /// Integer nearest to the midpoint.
    pub fn round(&self) -> BigInt {
        let mid2 = &self.lo + &self.hi;
        // round(mid) = floor((lo + hi + 2^f) / 2^(f+1))
        floor_shr(&(mid2 + (BigInt::one() << self.frac_bits)), self.frac_bits + 1)
    }

    /// Midpoint of the residue modulo 2, in `[0, 2)`, together with the width.
    pub fn residue_mod2(&self) -> (f64, f64) {
        let modulus = BigInt::one() << (self.frac_bits + 1);
        let lo = self.lo.mod_floor(&modulus);
        let span = &self.hi - &self.lo;
        let twice: BigInt = &lo * 2 + &span;
        let mid2 = twice.mod_floor(&(&modulus * 2));
        let mut r = scaled_to_f64(&mid2, self.frac_bits + 1);
        if r >= 2.0 {
            r -= 2.0;
        }
        (r, scaled_to_f64(&span, self.frac_bits))
    }
}

/// Circular distance between two residues modulo 2.
pub fn mod2_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(2.0);
    d.min(2.0 - d)
}
