//! Elementary abelian 2-groups `G = Z2^r`, their characters and subgroups.
//!
//! Elements and characters are both bit vectors of length `r`. Bit `i` of a
//! [`GroupElement`] is the exponent of the `i`-th generator (`x`, `y`, `z`, `w`,
//! ...); bit `i` of a [`Character`] is its coordinate along the dual basis
//! character `chi_i`, so `chi_i(g_j) = -1` exactly when `i == j`.
//!
//! The canonical ("lexicographic") order used throughout the crate is the
//! order of the integer whose bit `i` is the `i`-th coordinate. For `r = 3`
//! that is `Id, x, y, x*y, z, x*z, y*z, x*y*z`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported rank.
pub const MAX_RANK: u8 = 8;

const GENERATOR_NAMES: [&str; MAX_RANK as usize] = ["x", "y", "z", "w", "v", "s", "t", "u"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("rank mismatch: {0} vs {1}")]
    Dimension(u8, u8),
    #[error("rank {0} out of bounds (1..={MAX_RANK})")]
    RankOutOfBounds(u8),
    #[error("cannot parse group element {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    rank: u8,
    bits: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    rank: u8,
    bits: u16,
}

fn check_rank(r: u8) -> Result<(), GroupError> {
    if r == 0 || r > MAX_RANK {
        Err(GroupError::RankOutOfBounds(r))
    } else {
        Ok(())
    }
}

fn mask(r: u8) -> u16 {
    ((1u32 << r) - 1) as u16
}

impl GroupElement {
    pub fn new(rank: u8, bits: u16) -> Result<Self, GroupError> {
        check_rank(rank)?;
        Ok(Self { rank, bits: bits & mask(rank) })
    }

    pub fn identity(rank: u8) -> Self {
        Self { rank, bits: 0 }
    }

    /// The `i`-th generator (0-based).
    pub fn generator(rank: u8, i: u8) -> Self {
        assert!(i < rank, "generator index {i} out of range for rank {rank}");
        Self { rank, bits: 1 << i }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn is_identity(&self) -> bool {
        self.bits == 0
    }

    pub fn compose(&self, other: &Self) -> Result<Self, GroupError> {
        if self.rank != other.rank {
            return Err(GroupError::Dimension(self.rank, other.rank));
        }
        Ok(Self { rank: self.rank, bits: self.bits ^ other.bits })
    }

    /// All `2^r` elements in canonical order.
    pub fn all(rank: u8) -> Vec<Self> {
        (0..(1u32 << rank)).map(|b| Self { rank, bits: b as u16 }).collect()
    }

    /// Parses `Id`, `1`, `xyz`, or `x*y*z` style labels.
    pub fn parse(rank: u8, s: &str) -> Result<Self, GroupError> {
        check_rank(rank)?;
        let s = s.trim();
        if s == "Id" || s == "1" || s == "e" {
            return Ok(Self::identity(rank));
        }
        let mut bits = 0u16;
        for c in s.chars().filter(|c| *c != '*' && !c.is_whitespace()) {
            let idx = GENERATOR_NAMES[..rank as usize]
                .iter()
                .position(|n| n.starts_with(c))
                .ok_or_else(|| GroupError::Parse(s.to_string()))?;
            bits ^= 1 << idx;
        }
        if bits == 0 {
            return Err(GroupError::Parse(s.to_string()));
        }
        Ok(Self { rank, bits })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "Id");
        }
        let names: Vec<&str> = (0..self.rank)
            .filter(|i| self.bits >> i & 1 == 1)
            .map(|i| GENERATOR_NAMES[i as usize])
            .collect();
        write!(f, "{}", names.join("*"))
    }
}

impl Character {
    pub fn new(rank: u8, bits: u16) -> Result<Self, GroupError> {
        check_rank(rank)?;
        Ok(Self { rank, bits: bits & mask(rank) })
    }

    pub fn trivial(rank: u8) -> Self {
        Self { rank, bits: 0 }
    }

    /// Dual basis character `chi_i`.
    pub fn basis(rank: u8, i: u8) -> Self {
        assert!(i < rank, "character index {i} out of range for rank {rank}");
        Self { rank, bits: 1 << i }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn is_trivial(&self) -> bool {
        self.bits == 0
    }

    /// Pointwise product of characters (sum in the dual group).
    pub fn product(&self, other: &Self) -> Result<Self, GroupError> {
        if self.rank != other.rank {
            return Err(GroupError::Dimension(self.rank, other.rank));
        }
        Ok(Self { rank: self.rank, bits: self.bits ^ other.bits })
    }

    pub fn all(rank: u8) -> Vec<Self> {
        (0..(1u32 << rank)).map(|b| Self { rank, bits: b as u16 }).collect()
    }

    pub fn eval(&self, g: &GroupElement) -> Result<i8, GroupError> {
        char_eval(self, g)
    }

    /// True when the character is `+1` on every element of `subgroup`.
    pub fn is_trivial_on(&self, subgroup: &Subgroup) -> bool {
        subgroup.elements().iter().all(|g| char_eval(self, g) == Ok(1))
    }

    /// The character with the same bit pattern as `g` (the self-duality of `Z2^r`).
    pub fn dual_of(g: &GroupElement) -> Self {
        Self { rank: g.rank, bits: g.bits }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "chi_0");
        }
        let idx: Vec<String> = (0..self.rank)
            .filter(|i| self.bits >> i & 1 == 1)
            .map(|i| (i + 1).to_string())
            .collect();
        write!(f, "chi_{}", idx.join(""))
    }
}

/// `chi(sigma) = (-1)^(chi . sigma)`.
pub fn char_eval(chi: &Character, sigma: &GroupElement) -> Result<i8, GroupError> {
    if chi.rank != sigma.rank {
        return Err(GroupError::Dimension(chi.rank, sigma.rank));
    }
    Ok(if (chi.bits & sigma.bits).count_ones().is_multiple_of(2) { 1 } else { -1 })
}

/// Sign matrix with rows indexed by group elements and columns by characters,
/// both in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub rows: Vec<GroupElement>,
    pub columns: Vec<Character>,
    pub values: Vec<Vec<i8>>,
}

pub fn character_table(r: u8) -> Result<CharacterTable, GroupError> {
    check_rank(r)?;
    let rows = GroupElement::all(r);
    let columns = Character::all(r);
    let values = rows
        .iter()
        .map(|g| columns.iter().map(|c| char_eval(c, g).expect("same rank")).collect())
        .collect();
    Ok(CharacterTable { rows, columns, values })
}

impl CharacterTable {
    /// Reorders rows by `order` and columns by the dual characters of `order`.
    pub fn reordered(&self, order: &[GroupElement]) -> CharacterTable {
        let columns: Vec<Character> = order.iter().map(Character::dual_of).collect();
        let values = order
            .iter()
            .map(|g| columns.iter().map(|c| char_eval(c, g).expect("same rank")).collect())
            .collect();
        CharacterTable { rows: order.to_vec(), columns, values }
    }

    pub fn rank(&self) -> u8 {
        self.rows.first().map(|g| g.rank).unwrap_or(0)
    }
}

/// The row order in which the `Z2^3` table is customarily printed:
/// `x*y*z, z, y, x, y*z, x*z, x*y, Id`, with columns in the dual order.
pub fn printed_order_rank3() -> Vec<GroupElement> {
    ["x*y*z", "z", "y", "x", "y*z", "x*z", "x*y", "Id"]
        .iter()
        .map(|s| GroupElement::parse(3, s).expect("valid label"))
        .collect()
}

/// A subgroup, stored as its sorted element set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subgroup {
    rank: u8,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_whole_group(&self) -> bool {
        self.elements.len() == 1usize << self.rank
    }

    /// One representative per coset, the smallest element of each coset.
    pub fn coset_representatives(&self) -> Vec<GroupElement> {
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for g in GroupElement::all(self.rank) {
            if seen.contains(&g) {
                continue;
            }
            reps.push(g);
            for h in &self.elements {
                seen.insert(g.compose(h).expect("same rank"));
            }
        }
        reps
    }

    /// Generators named as in [`GroupElement`]'s `Display`.
    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|g| g.to_string()).collect()
    }
}

/// Closure of `elems` under composition. The empty set generates `{Id}`.
pub fn subgroup_generated(rank: u8, elems: &[GroupElement]) -> Result<Subgroup, GroupError> {
    check_rank(rank)?;
    let mut set: BTreeSet<GroupElement> = BTreeSet::new();
    set.insert(GroupElement::identity(rank));
    for g in elems {
        if g.rank != rank {
            return Err(GroupError::Dimension(rank, g.rank));
        }
        if set.contains(g) {
            continue;
        }
        let current: Vec<GroupElement> = set.iter().copied().collect();
        for h in current {
            set.insert(h.compose(g)?);
        }
    }
    Ok(Subgroup { rank, elements: set.into_iter().collect() })
}
