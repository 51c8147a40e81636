//! Player identifiers and coalitions (player sets).

use std::fmt;

/// Index of a player within a game, in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerId(pub usize);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of players, stored as a bitmask: bit `i` set means player `i` is a
/// member. Holds up to [`crate::game::MAX_PLAYERS`] players.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition {
    bits: u32,
}

impl Coalition {
    pub const EMPTY: Coalition = Coalition { bits: 0 };

    pub fn empty() -> Self {
        Self::EMPTY
    }

    /// All players of an `n`-player game.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        Coalition {
            bits: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        }
    }

    pub fn singleton(player: PlayerId) -> Self {
        Coalition {
            bits: 1u32 << player.0,
        }
    }

    pub fn from_bits(bits: u32) -> Self {
        Coalition { bits }
    }

    pub fn from_players<I: IntoIterator<Item = PlayerId>>(players: I) -> Self {
        let mut bits = 0u32;
        for p in players {
            bits |= 1 << p.0;
        }
        Coalition { bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self::from_players(indices.into_iter().map(PlayerId))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn contains(self, player: PlayerId) -> bool {
        self.bits & (1 << player.0) != 0
    }

    pub fn with(self, player: PlayerId) -> Self {
        Coalition {
            bits: self.bits | (1 << player.0),
        }
    }

    pub fn without(self, player: PlayerId) -> Self {
        Coalition {
            bits: self.bits & !(1 << player.0),
        }
    }

    pub fn union(self, other: Coalition) -> Self {
        Coalition {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(self, other: Coalition) -> Self {
        Coalition {
            bits: self.bits & other.bits,
        }
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.bits & other.bits == self.bits
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = PlayerId> {
        let bits = self.bits;
        (0..32u32)
            .filter(move |i| bits & (1 << i) != 0)
            .map(|i| PlayerId(i as usize))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().map(|p| p.0).collect()
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_and_size() {
        let c = Coalition::from_indices([1, 3]);
        assert!(c.contains(PlayerId(1)));
        assert!(!c.contains(PlayerId(0)));
        assert_eq!(c.len(), 2);
        assert_eq!(c.indices(), vec![1, 3]);
    }

    #[test]
    fn full_and_subset() {
        let all = Coalition::full(4);
        assert_eq!(all.len(), 4);
        let sub = Coalition::from_indices([0, 2]);
        assert!(sub.is_subset_of(all));
        assert!(!all.is_subset_of(sub));
    }

    #[test]
    fn display_is_sorted() {
        let c = Coalition::from_indices([2, 0, 3]);
        assert_eq!(format!("{}", c), "{0, 2, 3}");
    }
}
