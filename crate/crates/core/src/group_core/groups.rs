//! Concrete base groups.

use serde::Serialize;

use super::{Group, StableKey};

/// The integers under addition.
#[derive(Clone, Debug, Default)]
pub struct IntegerLine;

impl Group for IntegerLine {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn multiply(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inverse(&self, a: &i64) -> i64 {
        -a
    }

    fn name(&self) -> String {
        "Z".into()
    }

    fn is_torsion_free(&self) -> bool {
        true
    }
}

/// `Z^2` under addition; the generator set decides square vs triangular.
#[derive(Clone, Debug, Default)]
pub struct Lattice2;

impl Group for Lattice2 {
    type Elem = (i64, i64);

    fn identity(&self) -> (i64, i64) {
        (0, 0)
    }

    fn multiply(&self, a: &(i64, i64), b: &(i64, i64)) -> (i64, i64) {
        (a.0 + b.0, a.1 + b.1)
    }

    fn inverse(&self, a: &(i64, i64)) -> (i64, i64) {
        (-a.0, -a.1)
    }

    fn name(&self) -> String {
        "Z2".into()
    }

    fn is_torsion_free(&self) -> bool {
        true
    }
}

/// The cyclic group `Z_m`, elements `0..m`.
#[derive(Clone, Debug)]
pub struct Cyclic {
    pub modulus: u64,
}

impl Group for Cyclic {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn multiply(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }

    fn inverse(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    fn name(&self) -> String {
        format!("Z{}", self.modulus)
    }

    fn is_torsion_free(&self) -> bool {
        self.modulus == 1
    }
}

/// Reduced word in a free group. Letter `+i` is the `i`-th generator
/// (1-based), `-i` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FreeWord(pub Vec<i8>);

/// Free group of the given rank; its Cayley graph for the standard
/// generators is the homogeneous tree of degree `2 * rank`.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    pub rank: u8,
}

impl Group for FreeGroup {
    type Elem = FreeWord;

    fn identity(&self) -> FreeWord {
        FreeWord(Vec::new())
    }

    fn multiply(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        let mut out = a.0.clone();
        for &letter in &b.0 {
            if out.last() == Some(&-letter) {
                out.pop();
            } else {
                out.push(letter);
            }
        }
        FreeWord(out)
    }

    fn inverse(&self, a: &FreeWord) -> FreeWord {
        FreeWord(a.0.iter().rev().map(|l| -l).collect())
    }

    fn name(&self) -> String {
        format!("F{}", self.rank)
    }

    fn is_torsion_free(&self) -> bool {
        true
    }
}

/// Word in a free product of involutions: no two consecutive letters equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct InvolutionWord(pub Vec<u8>);

/// Free product of `factors` copies of `Z_2`. With the involutions as
/// generators its Cayley graph is the homogeneous tree of degree `factors`,
/// which covers odd degrees as well.
#[derive(Clone, Debug)]
pub struct InvolutionProduct {
    pub factors: u8,
}

impl Group for InvolutionProduct {
    type Elem = InvolutionWord;

    fn identity(&self) -> InvolutionWord {
        InvolutionWord(Vec::new())
    }

    fn multiply(&self, a: &InvolutionWord, b: &InvolutionWord) -> InvolutionWord {
        let mut out = a.0.clone();
        for &letter in &b.0 {
            if out.last() == Some(&letter) {
                out.pop();
            } else {
                out.push(letter);
            }
        }
        InvolutionWord(out)
    }

    fn inverse(&self, a: &InvolutionWord) -> InvolutionWord {
        InvolutionWord(a.0.iter().rev().copied().collect())
    }

    fn name(&self) -> String {
        format!("tree{}", self.factors)
    }

    fn is_torsion_free(&self) -> bool {
        self.factors == 0
    }
}

const MIX: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(MIX);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fold(state: u64, word: u64) -> u64 {
    mix64(state ^ word.wrapping_mul(MIX))
}

impl StableKey for i64 {
    fn stable_hash(&self) -> u64 {
        fold(1, *self as u64)
    }
}

impl StableKey for u64 {
    fn stable_hash(&self) -> u64 {
        fold(2, *self)
    }
}

impl StableKey for (i64, i64) {
    fn stable_hash(&self) -> u64 {
        fold(fold(3, self.0 as u64), self.1 as u64)
    }
}

impl StableKey for FreeWord {
    fn stable_hash(&self) -> u64 {
        self.0
            .iter()
            .fold(fold(4, self.0.len() as u64), |h, &l| fold(h, l as u8 as u64))
    }
}

impl StableKey for InvolutionWord {
    fn stable_hash(&self) -> u64 {
        self.0
            .iter()
            .fold(fold(5, self.0.len() as u64), |h, &l| fold(h, l as u64))
    }
}
