use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Emotional valence of a comparative word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The closed set of opposing word pairs a conclusion can be phrased with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparatorPair {
    MoreLess,
    BetterWorse,
    EasierHarder,
    /// Temporal marker used by the single-entity template. Valence-neutral.
    BeforeAfter,
}

impl ComparatorPair {
    pub const ALL: [ComparatorPair; 4] = [
        ComparatorPair::MoreLess,
        ComparatorPair::BetterWorse,
        ComparatorPair::EasierHarder,
        ComparatorPair::BeforeAfter,
    ];

    /// `(leading, trailing)` members. The leading member of a comparative
    /// pair is the positive-valence word.
    pub fn members(self) -> (Comparator, Comparator) {
        match self {
            ComparatorPair::MoreLess => (Comparator::More, Comparator::Less),
            ComparatorPair::BetterWorse => (Comparator::Better, Comparator::Worse),
            ComparatorPair::EasierHarder => (Comparator::Easier, Comparator::Harder),
            ComparatorPair::BeforeAfter => (Comparator::Before, Comparator::After),
        }
    }

    pub fn member(self, leading: bool) -> Comparator {
        let (a, b) = self.members();
        if leading {
            a
        } else {
            b
        }
    }

    pub fn is_temporal(self) -> bool {
        self == ComparatorPair::BeforeAfter
    }
}

/// A comparison word filling the `Comp` slot of a conclusion, or the
/// before/after marker of a temporal conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    More,
    Less,
    Better,
    Worse,
    Easier,
    Harder,
    Before,
    After,
}

impl Comparator {
    pub const ALL: [Comparator; 8] = [
        Comparator::More,
        Comparator::Less,
        Comparator::Better,
        Comparator::Worse,
        Comparator::Easier,
        Comparator::Harder,
        Comparator::Before,
        Comparator::After,
    ];

    pub const COMPARATIVE: [Comparator; 6] = [
        Comparator::More,
        Comparator::Less,
        Comparator::Better,
        Comparator::Worse,
        Comparator::Easier,
        Comparator::Harder,
    ];

    /// Lowercase surface word.
    pub fn word(self) -> &'static str {
        match self {
            Comparator::More => "more",
            Comparator::Less => "less",
            Comparator::Better => "better",
            Comparator::Worse => "worse",
            Comparator::Easier => "easier",
            Comparator::Harder => "harder",
            Comparator::Before => "before",
            Comparator::After => "after",
        }
    }

    /// Predicate name used in the textual axiom syntax.
    pub fn keyword(self) -> &'static str {
        match self {
            Comparator::More => "More",
            Comparator::Less => "Less",
            Comparator::Better => "Better",
            Comparator::Worse => "Worse",
            Comparator::Easier => "Easier",
            Comparator::Harder => "Harder",
            Comparator::Before => "before",
            Comparator::After => "after",
        }
    }

    /// Case-insensitive lookup.
    pub fn from_word(word: &str) -> Option<Comparator> {
        Comparator::ALL
            .into_iter()
            .find(|c| c.word().eq_ignore_ascii_case(word))
    }

    pub fn pair(self) -> ComparatorPair {
        match self {
            Comparator::More | Comparator::Less => ComparatorPair::MoreLess,
            Comparator::Better | Comparator::Worse => ComparatorPair::BetterWorse,
            Comparator::Easier | Comparator::Harder => ComparatorPair::EasierHarder,
            Comparator::Before | Comparator::After => ComparatorPair::BeforeAfter,
        }
    }

    pub fn is_leading(self) -> bool {
        self.pair().members().0 == self
    }

    pub fn is_temporal(self) -> bool {
        self.pair().is_temporal()
    }

    /// The other member of the same pair.
    pub fn flip(self) -> Comparator {
        self.pair().member(!self.is_leading())
    }

    /// `None` for the valence-neutral temporal markers.
    pub fn valence(self) -> Option<Polarity> {
        if self.is_temporal() {
            None
        } else if self.is_leading() {
            Some(Polarity::Positive)
        } else {
            Some(Polarity::Negative)
        }
    }

    /// `self` when `parity` is false, its flipped partner otherwise.
    pub fn resolve(self, parity: bool) -> Comparator {
        if parity {
            self.flip()
        } else {
            self
        }
    }

    /// Re-expresses this comparator's direction in another pair, e.g. a
    /// paraphrase written with better/worse for an axiom stated with
    /// easier/harder.
    pub fn in_pair(self, pair: ComparatorPair) -> Comparator {
        pair.member(self.is_leading())
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

impl FromStr for Comparator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Comparator::from_word(s.trim()).ok_or_else(|| format!("unknown comparator `{s}`"))
    }
}
