//! Finite sets of naturals stored as bit words.
//!
//! A set `S` is identified with its code `Σ_{b∈S} 2^b`, so the derived `Ord`
//! on [`BitSet`] is the code order `≺` used by every "least" search in the
//! crate. Code order has order type ω and places `B` before `C` whenever
//! `max B < max C`.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_traits::PrimInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::FinSetError;

/// Unsigned machine word used as the bit storage of a [`BitSet`].
pub trait Word: PrimInt + Hash + fmt::Debug + Default + Send + Sync + 'static {
    /// Number of representable elements: `{0, .., BITS - 1}`.
    const BITS: u32;

    fn to_u128(self) -> u128;
    fn from_u128(value: u128) -> Option<Self>;
}

macro_rules! impl_word {
    ($($t:ty),*) => {$(
        impl Word for $t {
            const BITS: u32 = <$t>::BITS;

            #[inline]
            fn to_u128(self) -> u128 {
                self as u128
            }

            #[inline]
            fn from_u128(value: u128) -> Option<Self> {
                <$t>::try_from(value).ok()
            }
        }
    )*};
}

impl_word!(u8, u16, u32, u64, u128);

/// A finite set of naturals below `W::BITS`, canonical by construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitSet<W: Word> {
    bits: W,
}

impl<W: Word> BitSet<W> {
    pub fn empty() -> Self {
        Self { bits: W::zero() }
    }

    /// Set whose code is `code`; every word value is a valid code.
    #[inline]
    pub fn from_code(code: W) -> Self {
        Self { bits: code }
    }

    /// Decodes a wide integer, failing when it does not fit the word.
    pub fn from_code_u128(code: u128) -> Result<Self, FinSetError> {
        W::from_u128(code)
            .map(Self::from_code)
            .ok_or(FinSetError::CodeOverflow { code, bits: W::BITS })
    }

    #[inline]
    pub fn code(self) -> W {
        self.bits
    }

    pub fn singleton(element: u32) -> Result<Self, FinSetError> {
        if element >= W::BITS {
            return Err(FinSetError::UniverseOverflow { element, bits: W::BITS });
        }
        Ok(Self { bits: W::one() << element as usize })
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Result<Self, FinSetError> {
        elements
            .into_iter()
            .try_fold(Self::empty(), |acc, e| Ok(acc.union(Self::singleton(e)?)))
    }

    /// `{lo, .., hi}`; empty when `lo > hi`.
    pub fn interval(lo: u32, hi: u32) -> Result<Self, FinSetError> {
        if lo > hi {
            return Ok(Self::empty());
        }
        if hi >= W::BITS {
            return Err(FinSetError::UniverseOverflow { element: hi, bits: W::BITS });
        }
        Ok(Self { bits: low_mask::<W>(hi + 1) & !low_mask::<W>(lo) })
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits.is_zero()
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn contains(self, element: u32) -> bool {
        element < W::BITS && !(self.bits & (W::one() << element as usize)).is_zero()
    }

    #[inline]
    pub fn min(self) -> Option<u32> {
        (!self.is_empty()).then(|| self.bits.trailing_zeros())
    }

    #[inline]
    pub fn max(self) -> Option<u32> {
        (!self.is_empty()).then(|| W::BITS - 1 - self.bits.leading_zeros())
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        Self { bits: self.bits | other.bits }
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        Self { bits: self.bits & other.bits }
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        Self { bits: self.bits & !other.bits }
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        (self.bits & !other.bits).is_zero()
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        (self.bits & other.bits).is_zero()
    }

    /// `self ≺ other` in code order.
    #[inline]
    pub fn prec(self, other: Self) -> bool {
        self.bits < other.bits
    }

    /// Elements strictly below `bound`.
    #[inline]
    pub fn below(self, bound: u32) -> Self {
        if bound >= W::BITS {
            return self;
        }
        Self { bits: self.bits & low_mask::<W>(bound) }
    }

    /// Elements strictly above `bound`.
    #[inline]
    pub fn above(self, bound: u32) -> Self {
        if bound >= W::BITS - 1 {
            return Self::empty();
        }
        Self { bits: self.bits & !low_mask::<W>(bound + 1) }
    }

    /// Elements in the closed interval `[lo, hi]`.
    #[inline]
    pub fn window(self, lo: u32, hi: u32) -> Self {
        if lo > hi {
            return Self::empty();
        }
        self.below(hi.saturating_add(1)).difference(self.below(lo))
    }

    /// Union under the block convention `max self < min other`.
    pub fn block_union(self, other: Self) -> Result<Self, FinSetError> {
        match (self.max(), other.min()) {
            (Some(left_max), Some(right_min)) if left_max >= right_min => {
                Err(FinSetError::PrecedenceViolation { left_max, right_min })
            }
            _ => Ok(self.union(other)),
        }
    }

    /// `self` is a nonempty initial segment of `of`: `of ∩ [0, max self] = self`.
    pub fn is_initial_segment(self, of: Self) -> bool {
        match self.max() {
            Some(m) => of.below(m + 1) == self,
            None => false,
        }
    }

    /// `self` is a nonempty final segment of `of`: `of ∩ [min self, ∞) = self`.
    pub fn is_final_segment(self, of: Self) -> bool {
        match self.min() {
            Some(m) => of.difference(of.below(m)) == self,
            None => false,
        }
    }

    /// `self = A₀ ∪ segment ∪ A₁` with the blocks in order.
    pub fn contains_segment(self, segment: Self) -> bool {
        match (segment.min(), segment.max()) {
            (Some(lo), Some(hi)) => self.window(lo, hi) == segment,
            _ => false,
        }
    }

    /// Proper nonempty initial segments, shortest first.
    pub fn proper_initial_segments(self) -> impl Iterator<Item = Self> {
        let max = self.max();
        self.iter()
            .filter(move |&e| Some(e) != max)
            .map(move |e| self.below(e + 1))
    }

    /// Proper nonempty final segments, longest first.
    pub fn proper_final_segments(self) -> impl Iterator<Item = Self> {
        let min = self.min();
        self.iter()
            .filter(move |&e| Some(e) != min)
            .map(move |e| self.difference(self.below(e)))
    }

    pub fn iter(self) -> Elements<W> {
        Elements { rest: self.bits }
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }
}

#[inline]
fn low_mask<W: Word>(count: u32) -> W {
    if count >= W::BITS {
        !W::zero()
    } else {
        (W::one() << count as usize) - W::one()
    }
}

/// Ascending iterator over the elements of a [`BitSet`].
#[derive(Clone)]
pub struct Elements<W: Word> {
    rest: W,
}

impl<W: Word> Iterator for Elements<W> {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.rest.is_zero() {
            return None;
        }
        let e = self.rest.trailing_zeros();
        self.rest = self.rest & (self.rest - W::one());
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.rest.count_ones() as usize;
        (n, Some(n))
    }
}

impl<W: Word> IntoIterator for BitSet<W> {
    type Item = u32;
    type IntoIter = Elements<W>;

    fn into_iter(self) -> Elements<W> {
        self.iter()
    }
}

impl<W: Word> fmt::Display for BitSet<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl<W: Word> fmt::Debug for BitSet<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts either brace form `{1,4,9}` or a decimal code.
impl<W: Word> FromStr for BitSet<W> {
    type Err = FinSetError;

    fn from_str(text: &str) -> Result<Self, FinSetError> {
        let text = text.trim();
        let parse_err = || FinSetError::Parse(text.to_string());
        if let Some(inner) = text.strip_prefix('{') {
            let inner = inner.strip_suffix('}').ok_or_else(parse_err)?.trim();
            if inner.is_empty() {
                return Ok(Self::empty());
            }
            let mut elements = Vec::new();
            for part in inner.split(',') {
                elements.push(part.trim().parse::<u32>().map_err(|_| parse_err())?);
            }
            if elements.windows(2).any(|w| w[0] >= w[1]) {
                return Err(parse_err());
            }
            Self::from_elements(elements)
        } else {
            let code = text.parse::<u128>().map_err(|_| parse_err())?;
            Self::from_code_u128(code)
        }
    }
}

impl<W: Word> Serialize for BitSet<W> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, W: Word> Deserialize<'de> for BitSet<W> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Natural code of a finite set, `Σ 2^b`.
pub fn encode<W: Word>(set: BitSet<W>) -> W {
    set.code()
}

pub fn decode<W: Word>(code: W) -> BitSet<W> {
    BitSet::from_code(code)
}
