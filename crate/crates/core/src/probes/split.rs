use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProbeError;
use crate::fol::AxiomId;
use crate::surface::{gen_entity_assignment, EntityMode, Statement, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    ZeroShot,
    LowResource,
    HighResource,
    RawLarge,
}

impl Setting {
    pub fn name(self) -> &'static str {
        match self {
            Setting::ZeroShot => "zero_shot",
            Setting::LowResource => "low_resource",
            Setting::HighResource => "high_resource",
            Setting::RawLarge => "raw_large",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitName {
    Train,
    Val,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub setting: Setting,
    /// Explicit sizes; `None` takes the setting's default share of the pool.
    #[serde(default)]
    pub train: Option<usize>,
    #[serde(default)]
    pub val: Option<usize>,
    #[serde(default)]
    pub test: Option<usize>,
    /// Entity pairs per training statement. Defaults to 5 for the
    /// high-resource setting and 1 otherwise.
    #[serde(default)]
    pub entity_mult: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Axioms that may only ever appear in the test split.
    #[serde(default)]
    pub holdout_axioms: BTreeSet<AxiomId>,
}

impl SplitConfig {
    pub fn new(setting: Setting, seed: u64) -> SplitConfig {
        SplitConfig {
            setting,
            train: None,
            val: None,
            test: None,
            entity_mult: None,
            seed,
            holdout_axioms: BTreeSet::new(),
        }
    }

    pub fn entity_mult(&self) -> usize {
        self.entity_mult.unwrap_or(match self.setting {
            Setting::HighResource => 5,
            _ => 1,
        })
    }

    /// (train, val, test) for a pool of `n` statements. `None` for train
    /// means "everything left".
    fn sizes(&self, n: usize) -> (Option<usize>, usize, usize) {
        let tenth = n / 10;
        let (train, val, test) = match self.setting {
            Setting::ZeroShot => (Some(0), 0, tenth),
            Setting::LowResource => (Some(tenth), tenth, tenth),
            Setting::HighResource => (None, tenth, tenth),
            Setting::RawLarge => (None, 0, 0),
        };
        (self.train.or(train), self.val.unwrap_or(val), self.test.unwrap_or(test))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub split: SplitName,
    pub setting: Setting,
    pub seed: u64,
    pub entity_mult: usize,
    /// Statements after entity multiplication.
    pub instances: usize,
    pub statement_ids: Vec<String>,
    pub axiom_ids: Vec<AxiomId>,
    /// Statements of partially used axioms that could not be placed
    /// anywhere without breaking axiom-disjointness.
    pub discarded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSet {
    pub manifests: Vec<SplitManifest>,
    /// Training statements after entity multiplication.
    pub train_instances: Vec<Statement>,
}

impl SplitSet {
    pub fn get(&self, name: SplitName) -> Option<&SplitManifest> {
        self.manifests.iter().find(|m| m.split == name)
    }
}

struct Group {
    axiom: AxiomId,
    members: Vec<usize>,
}

/// Picks whole groups whose sizes sum exactly to `target`, preferring
/// earlier groups within each size class. Bounded knapsack over the
/// distinct group sizes, largest first, so small groups are used only to
/// make up the remainder and stay available for later splits.
fn exact_fill(groups: &[&Group], target: usize) -> Option<Vec<usize>> {
    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        by_size.entry(g.members.len()).or_default().push(i);
    }
    let kinds: Vec<(usize, &Vec<usize>)> = by_size.iter().rev().map(|(s, v)| (*s, v)).collect();
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    // used[k][s]: items of kind k used to first reach s
    let mut used: Vec<Vec<u32>> = Vec::with_capacity(kinds.len());
    for &(size, members) in &kinds {
        let mut cnt = vec![0u32; target + 1];
        if size > 0 {
            for s in size..=target {
                if !reach[s] && reach[s - size] && (cnt[s - size] as usize) < members.len() {
                    reach[s] = true;
                    cnt[s] = cnt[s - size] + 1;
                }
            }
        }
        used.push(cnt);
    }
    if !reach[target] {
        return None;
    }
    let mut s = target;
    let mut chosen = Vec::new();
    for (k, &(size, members)) in kinds.iter().enumerate().rev() {
        let c = used[k][s] as usize;
        chosen.extend_from_slice(&members[..c]);
        s -= c * size;
    }
    debug_assert_eq!(s, 0);
    chosen.sort_unstable();
    Some(chosen)
}

/// Fills one split from the available groups. Exact when some set of whole
/// groups sums to `target`; otherwise takes groups greedily and trims the
/// last one, returning the number of statements thrown away.
fn fill(groups: &[&Group], target: usize) -> (Vec<usize>, Vec<usize>, usize) {
    if let Some(chosen) = exact_fill(groups, target) {
        let statements = chosen.iter().flat_map(|&i| groups[i].members.iter().copied()).collect();
        return (chosen, statements, 0);
    }
    let mut chosen = Vec::new();
    let mut statements = Vec::new();
    let mut discarded = 0;
    for (i, g) in groups.iter().enumerate() {
        let room = target - statements.len();
        if room == 0 {
            break;
        }
        if g.members.len() <= room {
            statements.extend_from_slice(&g.members);
            chosen.push(i);
        }
    }
    if statements.len() < target {
        if let Some(i) = (0..groups.len()).find(|i| !chosen.contains(i)) {
            let room = target - statements.len();
            statements.extend_from_slice(&groups[i].members[..room]);
            discarded = groups[i].members.len() - room;
            chosen.push(i);
        }
    }
    (chosen, statements, discarded)
}

/// Axiom-disjoint train/val/test splits.
///
/// Axioms are shuffled with the seed, test is filled first, then
/// validation, then train. Held-out axioms are only eligible for test.
/// For the raw large-scale setting a fixed-size train set is sampled
/// uniformly over the remaining statements.
pub fn split_dataset(
    statements: &[Statement],
    config: &SplitConfig,
    vocabulary: &Vocabulary,
) -> Result<SplitSet, ProbeError> {
    let mut index: BTreeMap<&AxiomId, usize> = BTreeMap::new();
    let mut groups: Vec<Group> = Vec::new();
    for (i, s) in statements.iter().enumerate() {
        let g = *index.entry(&s.axiom_id).or_insert_with(|| {
            groups.push(Group {
                axiom: s.axiom_id.clone(),
                members: Vec::new(),
            });
            groups.len() - 1
        });
        groups[g].members.push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    groups.shuffle(&mut rng);

    let (train_size, val_size, test_size) = config.sizes(statements.len());
    let mut taken = vec![false; groups.len()];
    let take = |eligible: &dyn Fn(&Group) -> bool, target: usize, taken: &mut Vec<bool>| {
        let pool: Vec<usize> = (0..groups.len()).filter(|&i| !taken[i] && eligible(&groups[i])).collect();
        let available: usize = pool.iter().map(|&i| groups[i].members.len()).sum();
        if available < target {
            return Err(ProbeError::PoolTooSmall {
                requested: target,
                available,
            });
        }
        let refs: Vec<&Group> = pool.iter().map(|&i| &groups[i]).collect();
        let (chosen, members, discarded) = fill(&refs, target);
        for c in chosen {
            taken[pool[c]] = true;
        }
        Ok((members, discarded))
    };

    let holdout = &config.holdout_axioms;
    let (test, test_discarded) = take(&|_| true, test_size, &mut taken)?;
    let (val, val_discarded) = take(&|g| !holdout.contains(&g.axiom), val_size, &mut taken)?;
    let rest: Vec<usize> = (0..groups.len())
        .filter(|&i| !taken[i] && !holdout.contains(&groups[i].axiom))
        .collect();
    let rest_size: usize = rest.iter().map(|&i| groups[i].members.len()).sum();
    let (train, train_discarded) = match (train_size, config.setting) {
        (None, _) => (rest.iter().flat_map(|&i| groups[i].members.iter().copied()).collect(), 0),
        (Some(n), Setting::RawLarge) => {
            if rest_size < n {
                return Err(ProbeError::PoolTooSmall {
                    requested: n,
                    available: rest_size,
                });
            }
            let mut all: Vec<usize> = rest.iter().flat_map(|&i| groups[i].members.iter().copied()).collect();
            all.shuffle(&mut rng);
            all.truncate(n);
            all.sort_unstable();
            (all, 0)
        }
        (Some(n), _) => take(&|g| !holdout.contains(&g.axiom), n, &mut taken)?,
    };

    let mult = config.entity_mult().max(1);
    let train_statements: Vec<&Statement> = train.iter().map(|&i| &statements[i]).collect();
    let train_instances = if mult == 1 {
        train_statements.iter().map(|s| (*s).clone()).collect()
    } else {
        let mode = train_statements.first().map(|s| s.mode).unwrap_or(EntityMode::Novel);
        let assignment = gen_entity_assignment(
            train_statements.len(),
            mult,
            config.seed ^ 0x656e_7469_7479,
            vocabulary,
            mode,
        )?;
        train_statements
            .iter()
            .zip(assignment)
            .flat_map(|(s, pairs)| pairs.into_iter().map(move |p| s.rebind(p, mode)))
            .collect::<Vec<_>>()
    };

    let manifest = |split, members: &[usize], mult: usize, instances: usize, discarded: usize| {
        let mut axiom_ids: Vec<AxiomId> = members.iter().map(|&i| statements[i].axiom_id.clone()).collect();
        axiom_ids.sort();
        axiom_ids.dedup();
        SplitManifest {
            split,
            setting: config.setting,
            seed: config.seed,
            entity_mult: mult,
            instances,
            statement_ids: members.iter().map(|&i| statements[i].statement_id.clone()).collect(),
            axiom_ids,
            discarded,
        }
    };
    Ok(SplitSet {
        manifests: vec![
            manifest(SplitName::Train, &train, mult, train_instances.len(), train_discarded),
            manifest(SplitName::Val, &val, 1, val.len(), val_discarded),
            manifest(SplitName::Test, &test, 1, test.len(), test_discarded),
        ],
        train_instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(sizes: &[usize]) -> Vec<Group> {
        let mut next = 0;
        sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let g = Group {
                    axiom: AxiomId(format!("ax{i}")),
                    members: (next..next + n).collect(),
                };
                next += n;
                g
            })
            .collect()
    }

    #[test]
    fn exact_fill_finds_mixed_sizes() {
        let gs = groups(&[6, 6, 6, 4, 2, 6]);
        let refs: Vec<&Group> = gs.iter().collect();
        let chosen = exact_fill(&refs, 16).unwrap();
        let total: usize = chosen.iter().map(|&i| gs[i].members.len()).sum();
        assert_eq!(total, 16);
        assert!(exact_fill(&refs, 31).is_none());
        assert_eq!(exact_fill(&refs, 0).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn fill_falls_back_to_trimming() {
        let gs = groups(&[24, 24]);
        let refs: Vec<&Group> = gs.iter().collect();
        let (chosen, members, discarded) = fill(&refs, 30);
        assert_eq!(members.len(), 30);
        assert_eq!(chosen.len(), 2);
        assert_eq!(discarded, 18);
    }

    #[test]
    fn exact_fill_keeps_small_groups_for_later() {
        // 10 x 6 + 5 x 4: two consecutive fills of 20 must both be exact
        let mut sizes = vec![6; 10];
        sizes.extend([4; 5]);
        let gs = groups(&sizes);
        let refs: Vec<&Group> = gs.iter().collect();
        let first = exact_fill(&refs, 20).unwrap();
        let fours = first.iter().filter(|&&i| gs[i].members.len() == 4).count();
        assert_eq!(fours, 2);
        let rest: Vec<&Group> = (0..gs.len()).filter(|i| !first.contains(i)).map(|i| &gs[i]).collect();
        assert!(exact_fill(&rest, 20).is_some());
    }
}
