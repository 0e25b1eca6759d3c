//! Elementary colorings used as fixtures and search inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finset::{BitSet, Word};
use crate::ip::{Color, ColoringOracle};

/// Every set gets the same color.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub Color);

impl<W: Word> ColoringOracle<W> for Constant {
    fn arity(&self) -> u64 {
        self.0 + 1
    }

    fn color(&self, _set: BitSet<W>) -> Color {
        self.0
    }
}

/// `|S| mod 2`.
#[derive(Clone, Copy, Debug)]
pub struct CardinalityParity;

impl<W: Word> ColoringOracle<W> for CardinalityParity {
    fn arity(&self) -> u64 {
        2
    }

    fn color(&self, set: BitSet<W>) -> Color {
        u64::from(set.len() % 2)
    }
}

/// 0 when the set contains `element`, 1 otherwise.
#[derive(Clone, Copy, Debug)]
pub struct ContainsElement(pub u32);

impl<W: Word> ColoringOracle<W> for ContainsElement {
    fn arity(&self) -> u64 {
        2
    }

    fn color(&self, set: BitSet<W>) -> Color {
        u64::from(!set.contains(self.0))
    }
}

/// Seeded random coloring tabulated on codes below `bound`; sets at or
/// beyond the table get color 0.
#[derive(Clone, Debug)]
pub struct RandomColoring {
    seed: u64,
    arity: u64,
    table: Vec<u8>,
}

impl RandomColoring {
    pub fn new(seed: u64, arity: u64, bound: usize) -> Self {
        assert!((1..=256).contains(&arity), "arity must be in 1..=256");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = (0..bound).map(|_| rng.gen_range(0..arity) as u8).collect();
        Self { seed, arity, table }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl<W: Word> ColoringOracle<W> for RandomColoring {
    fn arity(&self) -> u64 {
        self.arity
    }

    fn color(&self, set: BitSet<W>) -> Color {
        usize::try_from(set.code().to_u128())
            .ok()
            .and_then(|code| self.table.get(code))
            .map_or(0, |&c| Color::from(c))
    }
}

/// Adapter turning a closure into a coloring.
pub struct FnColoring<F> {
    arity: u64,
    f: F,
}

impl<F> FnColoring<F> {
    pub fn new(arity: u64, f: F) -> Self {
        Self { arity, f }
    }
}

impl<W: Word, F: Fn(BitSet<W>) -> Color + Sync> ColoringOracle<W> for FnColoring<F> {
    fn arity(&self) -> u64 {
        self.arity
    }

    fn color(&self, set: BitSet<W>) -> Color {
        (self.f)(set)
    }
}

/// Coloring of positive integers: `n ↦ c(binary support of n)`.
pub fn induced_integer_coloring<W: Word, C: ColoringOracle<W> + ?Sized>(
    coloring: &C,
) -> impl Fn(W) -> Color + '_ {
    move |n| coloring.color(BitSet::from_code(n))
}
