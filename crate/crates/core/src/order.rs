//! Tournaments over named options.
//!
//! A [`Tournament`] is a complete, antisymmetric relation that need not be
//! transitive. Direct-or-indirect precedence ([`Tournament::reaches`]) is
//! answered from a transitive closure computed once at construction.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("option name must not be empty")]
    EmptyName,
    #[error("duplicate option `{0}`")]
    DuplicateOption(OptionId),
    #[error("option `{0}` cannot be compared with itself")]
    SelfPair(OptionId),
    #[error("conflicting verdicts: both `{0}` beats `{1}` and `{1}` beats `{0}` are listed")]
    Conflict(OptionId, OptionId),
    #[error("no verdict between `{0}` and `{1}`")]
    Incomplete(OptionId, OptionId),
    #[error("unknown option `{0}`")]
    UnknownOption(OptionId),
    #[error("tournament has no options")]
    EmptyTournament,
    #[error("option sets differ")]
    OptionSetMismatch,
    #[error("ranking lists `{0}` more than once")]
    RepeatedInRanking(OptionId),
}

/// Name of an option, a solution of a game, or a loop of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OptionId(String);

impl OptionId {
    pub fn new(name: impl Into<String>) -> Result<Self, OrderError> {
        let name = name.into();
        if name.is_empty() {
            return Err(OrderError::EmptyName);
        }
        Ok(OptionId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for OptionId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for OptionId {
    type Error = OrderError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        OptionId::new(value)
    }
}

impl From<OptionId> for String {
    fn from(id: OptionId) -> String {
        id.0
    }
}

impl fmt::Display for OptionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parses a list of names into ids, rejecting empty and duplicate names.
pub fn option_ids<S: AsRef<str>>(names: &[S]) -> Result<Vec<OptionId>, OrderError> {
    let ids = names
        .iter()
        .map(|n| OptionId::new(n.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    index_of(&ids)?;
    Ok(ids)
}

fn index_of(options: &[OptionId]) -> Result<HashMap<OptionId, usize>, OrderError> {
    let mut index = HashMap::with_capacity(options.len());
    for (k, id) in options.iter().enumerate() {
        if index.insert(id.clone(), k).is_some() {
            return Err(OrderError::DuplicateOption(id.clone()));
        }
    }
    Ok(index)
}

/// A complete, antisymmetric, irreflexive "beats" relation.
#[derive(Debug, Clone)]
pub struct Tournament {
    options: Vec<OptionId>,
    index: HashMap<OptionId, usize>,
    // row-major n x n; beats[i * n + j] iff i beats j
    beats: Vec<bool>,
    // reflexive-transitive closure of `beats`
    reach: Vec<bool>,
}

impl PartialEq for Tournament {
    fn eq(&self, other: &Self) -> bool {
        self.options == other.options && self.beats == other.beats
    }
}

impl Eq for Tournament {}

impl Tournament {
    /// Builds a tournament from an explicit list of ordered "winner, loser" pairs.
    /// Every unordered pair of distinct options must appear exactly once.
    pub fn new(
        options: Vec<OptionId>,
        beats_pairs: &[(OptionId, OptionId)],
    ) -> Result<Self, OrderError> {
        if options.is_empty() {
            return Err(OrderError::EmptyTournament);
        }
        let index = index_of(&options)?;
        let n = options.len();
        let mut beats = vec![false; n * n];
        for (winner, loser) in beats_pairs {
            let w = *index
                .get(winner)
                .ok_or_else(|| OrderError::UnknownOption(winner.clone()))?;
            let l = *index
                .get(loser)
                .ok_or_else(|| OrderError::UnknownOption(loser.clone()))?;
            if w == l {
                return Err(OrderError::SelfPair(winner.clone()));
            }
            if beats[l * n + w] {
                return Err(OrderError::Conflict(winner.clone(), loser.clone()));
            }
            beats[w * n + l] = true;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !beats[i * n + j] && !beats[j * n + i] {
                    return Err(OrderError::Incomplete(
                        options[i].clone(),
                        options[j].clone(),
                    ));
                }
            }
        }
        Ok(Self::from_parts(options, index, beats))
    }

    /// Builds a tournament from a predicate over option indices. `beats(i, j)`
    /// is consulted only for `i < j`; its negation decides `j` beats `i`.
    pub fn from_fn(
        options: Vec<OptionId>,
        mut beats_fn: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        if options.is_empty() {
            return Err(OrderError::EmptyTournament);
        }
        let index = index_of(&options)?;
        let n = options.len();
        let mut beats = vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                if beats_fn(i, j) {
                    beats[i * n + j] = true;
                } else {
                    beats[j * n + i] = true;
                }
            }
        }
        Ok(Self::from_parts(options, index, beats))
    }

    fn from_parts(options: Vec<OptionId>, index: HashMap<OptionId, usize>, beats: Vec<bool>) -> Self {
        let reach = closure(options.len(), &beats);
        Tournament {
            options,
            index,
            beats,
            reach,
        }
    }

    pub fn options(&self) -> &[OptionId] {
        &self.options
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn index(&self, id: &OptionId) -> Result<usize, OrderError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| OrderError::UnknownOption(id.clone()))
    }

    pub fn contains(&self, id: &OptionId) -> bool {
        self.index.contains_key(id)
    }

    /// Direct precedence by index. `beats_idx(i, i)` is false.
    pub fn beats_idx(&self, i: usize, j: usize) -> bool {
        self.beats[i * self.len() + j]
    }

    pub fn beats(&self, i: &OptionId, j: &OptionId) -> Result<bool, OrderError> {
        Ok(self.beats_idx(self.index(i)?, self.index(j)?))
    }

    pub fn reaches_idx(&self, i: usize, j: usize) -> bool {
        self.reach[i * self.len() + j]
    }

    /// True when `i` precedes `j` directly or through a chain of wins.
    /// Every option reaches itself.
    pub fn reaches(&self, i: &OptionId, j: &OptionId) -> Result<bool, OrderError> {
        Ok(self.reaches_idx(self.index(i)?, self.index(j)?))
    }

    /// All "winner, loser" pairs in option order.
    pub fn beats_pairs(&self) -> Vec<(OptionId, OptionId)> {
        let n = self.len();
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in 0..n {
                if self.beats_idx(i, j) {
                    pairs.push((self.options[i].clone(), self.options[j].clone()));
                }
            }
        }
        pairs
    }

    /// The option beating every other option directly, if any.
    pub fn condorcet_winner(&self) -> Option<&OptionId> {
        let n = self.len();
        (0..n)
            .find(|&i| (0..n).all(|j| i == j || self.beats_idx(i, j)))
            .map(|i| &self.options[i])
    }

    /// The option beaten by every other option directly, if any.
    pub fn condorcet_loser(&self) -> Option<&OptionId> {
        let n = self.len();
        (0..n)
            .find(|&i| (0..n).all(|j| i == j || self.beats_idx(j, i)))
            .map(|i| &self.options[i])
    }

    /// A ranking in which each option beats its successor.
    ///
    /// Options are inserted in declaration order; each one goes in front of
    /// the first already-placed option it beats, or at the end if it beats
    /// none. The option it lands behind cannot be one it beats, so every
    /// consecutive pair stays a direct win.
    pub fn hamilton_path(&self) -> Ranking {
        let mut path: Vec<usize> = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            let at = path
                .iter()
                .position(|&p| self.beats_idx(k, p))
                .unwrap_or(path.len());
            path.insert(at, k);
        }
        Ranking {
            order: path.into_iter().map(|k| self.options[k].clone()).collect(),
        }
    }

    /// Checks that every option ranked above another reaches it.
    pub fn naturality(&self, ranking: &Ranking) -> Result<NaturalityReport, OrderError> {
        let positions = self.positions_of(ranking)?;
        let mut violations = Vec::new();
        for (a, &i) in positions.iter().enumerate() {
            for &j in &positions[a + 1..] {
                if !self.reaches_idx(i, j) {
                    violations.push((self.options[i].clone(), self.options[j].clone()));
                }
            }
        }
        Ok(NaturalityReport {
            natural: violations.is_empty(),
            violations,
        })
    }

    /// Maps a ranking onto option indices, verifying it covers the same set.
    fn positions_of(&self, ranking: &Ranking) -> Result<Vec<usize>, OrderError> {
        if ranking.len() != self.len() {
            return Err(OrderError::OptionSetMismatch);
        }
        let mut seen = vec![false; self.len()];
        ranking
            .order()
            .iter()
            .map(|id| {
                let k = self
                    .index
                    .get(id)
                    .copied()
                    .ok_or(OrderError::OptionSetMismatch)?;
                if std::mem::replace(&mut seen[k], true) {
                    return Err(OrderError::OptionSetMismatch);
                }
                Ok(k)
            })
            .collect()
    }

    /// Whether both tournaments are over the same option set (order ignored).
    pub fn same_options(&self, other: &Tournament) -> bool {
        self.len() == other.len() && self.options.iter().all(|o| other.contains(o))
    }
}

/// Warshall's algorithm on a boolean adjacency matrix, with the diagonal set.
fn closure(n: usize, beats: &[bool]) -> Vec<bool> {
    let mut reach = beats.to_vec();
    for i in 0..n {
        reach[i * n + i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if !reach[i * n + k] {
                continue;
            }
            for j in 0..n {
                if reach[k * n + j] {
                    reach[i * n + j] = true;
                }
            }
        }
    }
    reach
}

/// A strict total order, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ranking {
    order: Vec<OptionId>,
}

impl Ranking {
    pub fn new(order: Vec<OptionId>) -> Result<Self, OrderError> {
        let mut seen = std::collections::HashSet::with_capacity(order.len());
        for id in &order {
            if !seen.insert(id) {
                return Err(OrderError::RepeatedInRanking(id.clone()));
            }
        }
        Ok(Ranking { order })
    }

    pub fn order(&self) -> &[OptionId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn top(&self) -> Option<&OptionId> {
        self.order.first()
    }

    pub fn bottom(&self) -> Option<&OptionId> {
        self.order.last()
    }

    /// The transitive tournament in which earlier options beat later ones.
    /// Options keep ranking order.
    pub fn to_tournament(&self) -> Result<Tournament, OrderError> {
        Tournament::from_fn(self.order.clone(), |_, _| true)
    }

    /// Same as [`Ranking::to_tournament`], but with options listed in `options`
    /// order. Fails unless the ranking covers exactly that set.
    pub fn to_tournament_over(&self, options: &[OptionId]) -> Result<Tournament, OrderError> {
        let total = self.to_tournament()?;
        let rank: Vec<usize> = options
            .iter()
            .map(|o| total.index.get(o).copied().ok_or(OrderError::OptionSetMismatch))
            .collect::<Result<_, _>>()?;
        if options.len() != self.len() {
            return Err(OrderError::OptionSetMismatch);
        }
        Tournament::from_fn(options.to_vec(), |i, j| rank[i] < rank[j])
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, id) in self.order.iter().enumerate() {
            if k > 0 {
                f.write_str(" > ")?;
            }
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    pub natural: bool,
    /// Pairs ranked `i` above `j` where `i` does not reach `j`.
    pub violations: Vec<(OptionId, OptionId)>,
}

/// Wire format for tournaments:
/// `{"options": ["1","2","3"], "beats": [["2","1"],["1","3"],["3","2"]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TournamentDoc {
    pub options: Vec<OptionId>,
    pub beats: Vec<(OptionId, OptionId)>,
}

impl TryFrom<TournamentDoc> for Tournament {
    type Error = OrderError;

    fn try_from(doc: TournamentDoc) -> Result<Self, Self::Error> {
        Tournament::new(doc.options, &doc.beats)
    }
}

impl From<&Tournament> for TournamentDoc {
    fn from(t: &Tournament) -> Self {
        TournamentDoc {
            options: t.options.clone(),
            beats: t.beats_pairs(),
        }
    }
}
