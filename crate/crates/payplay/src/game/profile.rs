//! Pure and mixed strategy profiles.

use std::fmt;

use crate::error::Error;
use crate::game::{Coalition, PlayerId};

/// A pure strategy profile: for each player, pay (fixed cost) or play
/// (set-dependent cost). Stored as a bitmask with bit `i` set when player
/// `i` pays.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PureProfile {
    n: usize,
    pay: u32,
}

impl PureProfile {
    pub fn from_pay_flags(flags: &[bool]) -> Self {
        let mut pay = 0u32;
        for (i, &f) in flags.iter().enumerate() {
            if f {
                pay |= 1 << i;
            }
        }
        PureProfile {
            n: flags.len(),
            pay,
        }
    }

    /// Profile from a bitmask; bits at or above `n` are ignored.
    pub fn from_pay_mask(n: usize, mask: u32) -> Self {
        PureProfile {
            n,
            pay: mask & Coalition::full(n).bits(),
        }
    }

    pub fn all_pay(n: usize) -> Self {
        Self::from_pay_mask(n, u32::MAX)
    }

    pub fn all_play(n: usize) -> Self {
        PureProfile { n, pay: 0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pays(&self, player: PlayerId) -> bool {
        self.pay & (1 << player.0) != 0
    }

    pub fn plays(&self, player: PlayerId) -> bool {
        !self.pays(player)
    }

    /// The set of players choosing the play strategy.
    pub fn play_set(&self) -> Coalition {
        Coalition::from_bits(!self.pay & Coalition::full(self.n).bits())
    }

    pub fn pay_set(&self) -> Coalition {
        Coalition::from_bits(self.pay)
    }

    /// Bitmask with bit `i` set when player `i` pays. Used as the canonical
    /// ordering key for profiles.
    pub fn pay_mask(&self) -> u32 {
        self.pay
    }

    pub fn with_flipped(&self, player: PlayerId) -> Self {
        PureProfile {
            n: self.n,
            pay: self.pay ^ (1 << player.0),
        }
    }

    pub fn with_pay(&self, player: PlayerId, pays: bool) -> Self {
        let bit = 1u32 << player.0;
        PureProfile {
            n: self.n,
            pay: if pays { self.pay | bit } else { self.pay & !bit },
        }
    }

    /// All `2^n` profiles in ascending pay-mask order.
    pub fn enumerate_all(n: usize) -> impl Iterator<Item = PureProfile> {
        (0u32..(1u32 << n)).map(move |m| PureProfile { n, pay: m })
    }

    pub fn to_mixed(&self) -> MixedProfile {
        MixedProfile {
            probs: (0..self.n)
                .map(|i| if self.pays(PlayerId(i)) { 1.0 } else { 0.0 })
                .collect(),
        }
    }
}

impl fmt::Display for PureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", if self.pays(PlayerId(i)) { "pay" } else { "play" })?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A mixed strategy profile: per-player probability of choosing the pay
/// strategy.
#[derive(Clone, PartialEq, Debug)]
pub struct MixedProfile {
    probs: Vec<f64>,
}

impl MixedProfile {
    pub fn new(probs: Vec<f64>) -> Result<Self, Error> {
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::BadProbability {
                    player: PlayerId(i),
                    value: p,
                });
            }
        }
        Ok(MixedProfile { probs })
    }

    /// Every player pays with the same probability `p`.
    pub fn uniform(n: usize, p: f64) -> Result<Self, Error> {
        Self::new(vec![p; n])
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn pay_prob(&self, player: PlayerId) -> f64 {
        self.probs[player.0]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn with_pay_prob(&self, player: PlayerId, p: f64) -> Result<Self, Error> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::BadProbability { player, value: p });
        }
        let mut probs = self.probs.clone();
        probs[player.0] = p;
        Ok(MixedProfile { probs })
    }

    /// The corresponding pure profile, when every coordinate is exactly 0 or 1.
    pub fn as_pure(&self) -> Option<PureProfile> {
        if self.probs.iter().all(|&p| p == 0.0 || p == 1.0) {
            Some(PureProfile::from_pay_flags(
                &self.probs.iter().map(|&p| p == 1.0).collect::<Vec<_>>(),
            ))
        } else {
            None
        }
    }
}

impl fmt::Display for MixedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}
