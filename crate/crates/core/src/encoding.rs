//! Conversions between pixel bit strings, N-ary digit strings and rotation angles.
//!
//! Each qubit carries one digit `j` of an alphabet of size `m = 2^k`, i.e. `k`
//! consecutive pixels. The digit selects the encoding angle `θ_j = jπ/m`.
//!
//! Bits are grouped left to right into blocks of `k`; each block is read as a
//! big-endian integer (`"10"` is 2, `"01"` is 1). A short final block is padded
//! with trailing zeros. Two-dimensional images must be flattened row-major by
//! the caller before encoding.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Number of elemental patterns a single qubit can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlphabetSize(u32);

impl AlphabetSize {
    pub const BINARY: AlphabetSize = AlphabetSize(2);
    pub const QUATERNARY: AlphabetSize = AlphabetSize(4);

    pub fn new(m: u32) -> Result<Self> {
        if m >= 2 && m.is_power_of_two() {
            Ok(AlphabetSize(m))
        } else {
            Err(Error::InvalidAlphabet(m))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Pixels per qubit (`k` with `m = 2^k`).
    pub fn bits_per_digit(self) -> u32 {
        self.0.trailing_zeros()
    }
}

impl Default for AlphabetSize {
    fn default() -> Self {
        AlphabetSize::QUATERNARY
    }
}

impl fmt::Display for AlphabetSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Encoding angle in radians, always in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..PI).contains(&theta) {
            Ok(Angle(theta))
        } else {
            Err(Error::AngleOutOfRange(theta))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Returns `θ_j = jπ/m`.
pub fn digit_to_angle(j: u32, m: AlphabetSize) -> Result<Angle> {
    if j >= m.get() {
        return Err(Error::DigitOutOfRange {
            digit: j,
            m: m.get(),
        });
    }
    Ok(Angle(j as f64 * PI / m.get() as f64))
}

/// A string of pixel colours, one bit per pixel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryPattern(Vec<u8>);

impl BinaryPattern {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(char::from(b'0'.wrapping_add(b))));
        }
        Ok(BinaryPattern(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for BinaryPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinaryPattern::new(bits)
    }
}

impl fmt::Display for BinaryPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// One N-ary digit per qubit. Used for inputs, weights and targets alike.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternCode {
    digits: Vec<u32>,
    m: AlphabetSize,
}

impl PatternCode {
    pub fn new(digits: Vec<u32>, m: AlphabetSize) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::EmptyPattern);
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= m.get()) {
            return Err(Error::DigitOutOfRange {
                digit: d,
                m: m.get(),
            });
        }
        Ok(PatternCode { digits, m })
    }

    /// Parses `"1122"` style digit strings, or comma-separated integers
    /// (required once `m > 10`).
    pub fn parse(s: &str, m: AlphabetSize) -> Result<Self> {
        let s = s.trim();
        let invalid = || Error::InvalidCode(s.to_string());
        let digits = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| invalid()))
                .collect::<Result<Vec<_>>>()?
        } else if m.get() <= 10 {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(invalid))
                .collect::<Result<Vec<_>>>()?
        } else {
            vec![s.parse::<u32>().map_err(|_| invalid())?]
        };
        PatternCode::new(digits, m)
    }

    /// The `index`-th code of length `n` in lexicographic order, which is also
    /// the code whose decimal value is `index`.
    pub fn from_index(mut index: u64, n: usize, m: AlphabetSize) -> Result<Self> {
        let base = m.get() as u64;
        let mut digits = vec![0u32; n];
        for d in digits.iter_mut().rev() {
            *d = (index % base) as u32;
            index /= base;
        }
        if index != 0 {
            return Err(Error::InvalidCode(format!(
                "index out of range for {n} digits"
            )));
        }
        PatternCode::new(digits, m)
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn alphabet(&self) -> AlphabetSize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Encoding angle of every digit.
    pub fn angles(&self) -> Vec<Angle> {
        self.digits
            .iter()
            .map(|&d| Angle(d as f64 * PI / self.m.get() as f64))
            .collect()
    }

    /// Replaces the digit at `index`. Out-of-range digits are rejected.
    pub fn set_digit(&mut self, index: usize, digit: u32) -> Result<()> {
        if digit >= self.m.get() {
            return Err(Error::DigitOutOfRange {
                digit,
                m: self.m.get(),
            });
        }
        self.digits[index] = digit;
        Ok(())
    }

    /// Errors unless both codes have the same length and alphabet.
    pub fn check_compatible(&self, other: &PatternCode) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        if self.m != other.m {
            return Err(Error::AlphabetMismatch {
                left: self.m.get(),
                right: other.m.get(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for PatternCode {
    /// Plain digits for `m <= 10`, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.get() <= 10 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
        } else {
            for (i, d) in self.digits.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

pub fn binary_to_code(b: &BinaryPattern, m: AlphabetSize) -> PatternCode {
    let k = m.bits_per_digit() as usize;
    let digits = b
        .bits()
        .chunks(k)
        .map(|block| {
            let mut d = 0u32;
            for i in 0..k {
                d = (d << 1) | block.get(i).copied().unwrap_or(0) as u32;
            }
            d
        })
        .collect();
    PatternCode { digits, m }
}

pub fn code_to_binary(c: &PatternCode) -> BinaryPattern {
    let k = c.m.bits_per_digit();
    let bits = c
        .digits
        .iter()
        .flat_map(|&d| (0..k).rev().map(move |shift| ((d >> shift) & 1) as u8))
        .collect();
    BinaryPattern(bits)
}

/// Integer value of the code's bit expansion; the heatmap axis index.
pub fn code_to_decimal(c: &PatternCode) -> u64 {
    let k = c.m.bits_per_digit();
    c.digits.iter().fold(0u64, |acc, &d| (acc << k) | d as u64)
}
