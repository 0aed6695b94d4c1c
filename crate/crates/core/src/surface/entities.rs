use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SurfaceError;

pub const MIN_ENTITY_LEN: usize = 3;
pub const MAX_ENTITY_LEN: usize = 12;
pub const MAX_REJECTIONS: usize = 1000;

const BUILTIN_VOCABULARY: &str = include_str!("../../data/vocabulary.txt");
const REAL_NAMES: &str = include_str!("../../data/real_names.txt");

/// Real words a novel entity must not coincide with.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary(HashSet<String>);

impl Vocabulary {
    /// About 28k frequent English words.
    pub fn builtin() -> Vocabulary {
        Vocabulary::from_text(BUILTIN_VOCABULARY)
    }

    /// One word per line; case-insensitive.
    pub fn from_text(text: &str) -> Vocabulary {
        Vocabulary(
            text.lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect(),
        )
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(&word.to_lowercase())
    }

    pub fn extend<I: IntoIterator<Item = S>, S: AsRef<str>>(&mut self, words: I) {
        self.0.extend(words.into_iter().map(|w| w.as_ref().to_lowercase()));
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Which kind of names fill the entity slots.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityMode {
    #[default]
    Novel,
    RealNames,
}

impl EntityMode {
    pub fn name(self) -> &'static str {
        match self {
            EntityMode::Novel => "novel",
            EntityMode::RealNames => "real_names",
        }
    }
}

pub fn real_names() -> Vec<&'static str> {
    REAL_NAMES.lines().map(str::trim).filter(|l| !l.is_empty()).collect()
}

/// Seeded stream of entity names.
pub struct EntityGenerator<'v> {
    rng: ChaCha8Rng,
    vocabulary: &'v Vocabulary,
    mode: EntityMode,
}

impl<'v> EntityGenerator<'v> {
    pub fn new(seed: u64, vocabulary: &'v Vocabulary, mode: EntityMode) -> Self {
        EntityGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            vocabulary,
            mode,
        }
    }

    /// Random lowercase a-z string of uniform length in [3, 12] that is not
    /// a vocabulary word.
    pub fn novel(&mut self) -> Result<String, SurfaceError> {
        for _ in 0..MAX_REJECTIONS {
            let len = self.rng.gen_range(MIN_ENTITY_LEN..=MAX_ENTITY_LEN);
            let word: String = (0..len).map(|_| self.rng.gen_range(b'a'..=b'z') as char).collect();
            if !self.vocabulary.contains(&word) {
                return Ok(word);
            }
        }
        Err(SurfaceError::ExhaustedRetries(MAX_REJECTIONS))
    }

    /// Two distinct names for one statement.
    pub fn pair(&mut self) -> Result<[String; 2], SurfaceError> {
        match self.mode {
            EntityMode::Novel => {
                let a = self.novel()?;
                loop {
                    let b = self.novel()?;
                    if b != a {
                        return Ok([a, b]);
                    }
                }
            }
            EntityMode::RealNames => {
                let names = real_names();
                let chosen: Vec<_> = names.choose_multiple(&mut self.rng, 2).collect();
                match chosen.as_slice() {
                    [a, b] => Ok([a.to_string(), b.to_string()]),
                    _ => Err(SurfaceError::ExhaustedRetries(0)),
                }
            }
        }
    }
}

/// One novel entity from `seed`.
pub fn gen_novel_entity(seed: u64, vocabulary: &Vocabulary) -> Result<String, SurfaceError> {
    EntityGenerator::new(seed, vocabulary, EntityMode::Novel).novel()
}

/// `n` rows of `k` entity pairs each. Every pair in the whole assignment
/// is distinct.
pub fn gen_entity_assignment(
    n: usize,
    k: usize,
    seed: u64,
    vocabulary: &Vocabulary,
    mode: EntityMode,
) -> Result<Vec<Vec<[String; 2]>>, SurfaceError> {
    let mut gen = EntityGenerator::new(seed, vocabulary, mode);
    let mut seen = HashSet::with_capacity(n * k);
    let capacity = match mode {
        EntityMode::Novel => usize::MAX,
        EntityMode::RealNames => {
            let m = real_names().len();
            m * m.saturating_sub(1)
        }
    };
    if n.saturating_mul(k) > capacity {
        return Err(SurfaceError::ExhaustedRetries(capacity));
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(k);
        while row.len() < k {
            let mut rejections = 0;
            let pair = loop {
                let p = gen.pair()?;
                if !seen.contains(&p) {
                    break p;
                }
                rejections += 1;
                if rejections >= MAX_REJECTIONS {
                    return Err(SurfaceError::ExhaustedRetries(MAX_REJECTIONS));
                }
            };
            seen.insert(pair.clone());
            row.push(pair);
        }
        out.push(row);
    }
    Ok(out)
}
