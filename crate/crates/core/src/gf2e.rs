//! Exact arithmetic in the binary fields GF(2^e).
//!
//! Elements are polynomial residues over the two-element field, encoded as
//! bit strings (bit `i` is the coefficient of `x^i`) and reduced modulo a
//! fixed irreducible polynomial. Squaring is a field automorphism in
//! characteristic 2, so every element has a unique square root; the
//! normalization of projective points in [`crate::geometry`] relies on that.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported field exponent. Everything downstream acts on at most
/// q^2 - 1 = 255 points for q = 2^16 is already far out of reach of the
/// enumeration-based group machinery, so element encodings fit in a `u16`.
pub const MAX_EXPONENT: u32 = 16;

/// Default irreducible moduli, indexed by exponent (1-based).
const DEFAULT_MODULI: [u32; 8] = [
    0b11,        // e=1: x + 1
    0b111,       // e=2: x^2 + x + 1
    0b1011,      // e=3: x^3 + x + 1
    0b10011,     // e=4: x^4 + x + 1
    0b100101,    // e=5: x^5 + x^2 + 1
    0b1000011,   // e=6: x^6 + x + 1
    0b10000011,  // e=7: x^7 + x + 1
    0b100011101, // e=8: x^8 + x^4 + x^3 + x^2 + 1
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field exponent must be between 1 and {MAX_EXPONENT}, got {0}")]
    ExponentOutOfRange(u32),
    #[error("modulus {0:#b} does not have degree {1}")]
    WrongModulusDegree(u32, u32),
    #[error("modulus {0:#b} is reducible")]
    ReducibleModulus(u32),
    #[error("no default modulus for exponent {0}; supply one explicitly")]
    NoDefaultModulus(u32),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("malformed field spec {0:?}, expected \"e=<int>,mod=<hex>\"")]
    MalformedSpec(String),
}

/// A field GF(2^e), fixed by its exponent and an irreducible modulus.
///
/// The spec string form `e=<int>,mod=<hex>` is what the CLI accepts and what
/// file headers carry; parsing and display round-trip exactly.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    e: u32,
    modulus: u32,
}

impl FieldSpec {
    /// Builds a field from an exponent and a modulus polynomial.
    ///
    /// The modulus must have degree exactly `e` and be irreducible;
    /// irreducibility is checked by trial division over every polynomial of
    /// lower degree.
    pub fn new(e: u32, modulus: u32) -> Result<Self, FieldError> {
        if !(1..=MAX_EXPONENT).contains(&e) {
            return Err(FieldError::ExponentOutOfRange(e));
        }
        if poly_degree(modulus) != Some(e) {
            return Err(FieldError::WrongModulusDegree(modulus, e));
        }
        // Trial division by every polynomial of degree 1..e.
        for d in 2u32..(1 << e) {
            if poly_rem(modulus, d) == 0 {
                return Err(FieldError::ReducibleModulus(modulus));
            }
        }
        Ok(FieldSpec { e, modulus })
    }

    /// Builds GF(2^e) with a fixed standard modulus (available for e <= 8).
    pub fn with_default_modulus(e: u32) -> Result<Self, FieldError> {
        if !(1..=MAX_EXPONENT).contains(&e) {
            return Err(FieldError::ExponentOutOfRange(e));
        }
        let modulus = *DEFAULT_MODULI
            .get(e as usize - 1)
            .ok_or(FieldError::NoDefaultModulus(e))?;
        FieldSpec::new(e, modulus)
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Field order q = 2^e.
    pub fn order(&self) -> u32 {
        1 << self.e
    }

    /// The element with the given bit encoding. Panics if out of range.
    pub fn element(&self, bits: u32) -> FieldElement {
        assert!(bits < self.order(), "element {bits:#x} out of range for {self}");
        FieldElement {
            bits: bits as u16,
            field: *self,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// All 2^e elements in ascending bit-encoding order. This is the
    /// canonical element order used for vertex numbering downstream.
    pub fn all_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(|bits| self.element(bits))
    }

    /// A generator of the multiplicative group: the element of smallest bit
    /// encoding whose multiplicative order is q - 1.
    pub fn primitive_element(&self) -> FieldElement {
        let target = (self.order() - 1) as u64;
        for bits in 1..self.order() {
            let a = self.element(bits);
            if a.multiplicative_order() == target {
                return a;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e={},mod={:#X}", self.e, self.modulus)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let malformed = || FieldError::MalformedSpec(s.to_string());
        let (e_part, mod_part) = s.split_once(',').ok_or_else(malformed)?;
        let e_str = e_part.strip_prefix("e=").ok_or_else(malformed)?;
        let mod_str = mod_part.strip_prefix("mod=").ok_or_else(malformed)?;
        let e: u32 = e_str.trim().parse().map_err(|_| malformed())?;
        let hex = mod_str.trim();
        let hex = hex.strip_prefix("0x").or_else(|| hex.strip_prefix("0X")).unwrap_or(hex);
        let modulus = u32::from_str_radix(hex, 16).map_err(|_| malformed())?;
        FieldSpec::new(e, modulus)
    }
}

/// An element of GF(2^e). Carries its field so mismatched operands are
/// caught; arithmetic between elements of different fields panics.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    bits: u16,
    field: FieldSpec,
}

impl FieldElement {
    pub fn bits(&self) -> u32 {
        self.bits as u32
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// a^k by square-and-multiply, with the convention a^0 = 1.
    pub fn pow(self, mut k: u64) -> FieldElement {
        let mut base = self;
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, computed as a^(2^e - 2).
    pub fn inv(self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(self.field.order() as u64 - 2))
    }

    /// The unique square root, computed as a^(2^(e-1)). Total: squaring is
    /// an automorphism in characteristic 2.
    pub fn sqrt(self) -> FieldElement {
        self.pow(1 << (self.field.e - 1))
    }

    /// The Frobenius automorphism a -> a^2. Iterating e times is the identity.
    pub fn square(self) -> FieldElement {
        self * self
    }

    /// Order of this element in the multiplicative group (0 has none; returns 0).
    pub fn multiplicative_order(self) -> u64 {
        if self.is_zero() {
            return 0;
        }
        let one = self.field.one();
        let mut acc = self;
        let mut k = 1u64;
        while acc != one {
            acc = acc * self;
            k += 1;
        }
        k
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mismatched fields in addition");
        FieldElement {
            bits: self.bits ^ rhs.bits,
            field: self.field,
        }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mismatched fields in multiplication");
        let spec = self.field;
        let mut a = self.bits as u32;
        let mut b = rhs.bits as u32;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> spec.e & 1 == 1 {
                a ^= spec.modulus;
            }
        }
        FieldElement {
            bits: acc as u16,
            field: spec,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:X}", self.bits)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}/{}", self.bits, self.field)
    }
}

/// Degree of a nonzero bit-encoded polynomial.
fn poly_degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

/// Remainder of bit-encoded polynomial long division.
fn poly_rem(mut num: u32, den: u32) -> u32 {
    let dd = poly_degree(den).expect("division by the zero polynomial");
    while let Some(dn) = poly_degree(num) {
        if dn < dd {
            break;
        }
        num ^= den << (dn - dd);
    }
    num
}
