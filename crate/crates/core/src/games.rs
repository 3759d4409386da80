//! Two-player strategic-form games and their Pareto-optimal solutions.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{OptionId, OrderError, Tournament};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("invalid game: {0}")]
    Invalid(String),
    #[error("unknown player `{0}`")]
    UnknownPlayer(String),
    #[error("player `{player}` has equal outcomes for `{first}` and `{second}`")]
    TiedOutcomes {
        player: String,
        first: OptionId,
        second: OptionId,
    },
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Options(#[from] OrderError),
}

/// Whether players minimise (`cost`) or maximise (`utility`) their outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Cost,
    Utility,
}

impl Orientation {
    fn prefers(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Cost => a < b,
            Orientation::Utility => a > b,
        }
    }
}

/// One strategy per player. Its label concatenates the strategy names, row player first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub strategies: [usize; 2],
    pub label: OptionId,
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.label.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategicGame {
    players: [String; 2],
    strategies: [Vec<String>; 2],
    orientation: Orientation,
    // outcomes[p][a][b]: player p's outcome when the row player picks a and the column player b
    outcomes: [Vec<Vec<f64>>; 2],
    solutions: Vec<Solution>,
}

impl StrategicGame {
    pub fn new(
        players: [String; 2],
        strategies: [Vec<String>; 2],
        orientation: Orientation,
        outcomes: [Vec<Vec<f64>>; 2],
    ) -> Result<Self, GameError> {
        if players[0].is_empty() || players[1].is_empty() {
            return Err(GameError::Invalid("player names must not be empty".into()));
        }
        if players[0] == players[1] {
            return Err(GameError::Invalid(format!(
                "both players are named `{}`",
                players[0]
            )));
        }
        for (name, list) in players.iter().zip(&strategies) {
            if list.is_empty() {
                return Err(GameError::Invalid(format!("player `{name}` has no strategies")));
            }
            let mut seen = HashSet::new();
            for s in list {
                if s.is_empty() {
                    return Err(GameError::Invalid(format!(
                        "player `{name}` has an empty strategy name"
                    )));
                }
                if !seen.insert(s) {
                    return Err(GameError::Invalid(format!(
                        "player `{name}` lists strategy `{s}` twice"
                    )));
                }
            }
        }
        let (rows, cols) = (strategies[0].len(), strategies[1].len());
        for (name, table) in players.iter().zip(&outcomes) {
            if table.len() != rows || table.iter().any(|r| r.len() != cols) {
                return Err(GameError::Invalid(format!(
                    "outcome table of `{name}` must be {rows}x{cols}"
                )));
            }
            if table.iter().flatten().any(|x| !x.is_finite()) {
                return Err(GameError::Invalid(format!(
                    "outcome table of `{name}` has a non-finite entry"
                )));
            }
        }

        let mut solutions = Vec::with_capacity(rows * cols);
        let mut labels = HashSet::new();
        for a in 0..rows {
            for b in 0..cols {
                let label = OptionId::new(format!("{}{}", strategies[0][a], strategies[1][b]))?;
                if !labels.insert(label.clone()) {
                    return Err(GameError::Invalid(format!(
                        "solution label `{label}` is ambiguous"
                    )));
                }
                solutions.push(Solution {
                    strategies: [a, b],
                    label,
                });
            }
        }
        Ok(StrategicGame {
            players,
            strategies,
            orientation,
            outcomes,
            solutions,
        })
    }

    pub fn players(&self) -> &[String; 2] {
        &self.players
    }

    pub fn strategies(&self) -> &[Vec<String>; 2] {
        &self.strategies
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// All strategy pairs, the row player's strategy varying slowest.
    pub fn solutions(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn solution_labels(&self) -> Vec<OptionId> {
        self.solutions.iter().map(|s| s.label.clone()).collect()
    }

    pub fn outcome(&self, player: usize, s: &Solution) -> f64 {
        self.outcomes[player][s.strategies[0]][s.strategies[1]]
    }

    pub fn player_index(&self, player: &str) -> Result<usize, GameError> {
        self.players
            .iter()
            .position(|p| p == player)
            .ok_or_else(|| GameError::UnknownPlayer(player.to_owned()))
    }

    fn check_strict(&self, player: usize) -> Result<(), GameError> {
        for (k, s) in self.solutions.iter().enumerate() {
            for t in &self.solutions[k + 1..] {
                if self.outcome(player, s) == self.outcome(player, t) {
                    return Err(GameError::TiedOutcomes {
                        player: self.players[player].clone(),
                        first: s.label.clone(),
                        second: t.label.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn prefers(&self, player: usize, s: &Solution, t: &Solution) -> bool {
        self.orientation
            .prefers(self.outcome(player, s), self.outcome(player, t))
    }

    /// The player's strict preference over solutions, as a tournament.
    pub fn preference_order(&self, player: &str) -> Result<Tournament, GameError> {
        let p = self.player_index(player)?;
        self.preference_of(p)
    }

    pub fn preference_of(&self, player: usize) -> Result<Tournament, GameError> {
        self.check_strict(player)?;
        Ok(Tournament::from_fn(self.solution_labels(), |i, j| {
            self.prefers(player, &self.solutions[i], &self.solutions[j])
        })?)
    }

    /// Every `(t, s)` where both players strictly prefer `t` to `s`.
    pub fn dominating_pairs(&self) -> Result<Vec<(&Solution, &Solution)>, GameError> {
        self.check_strict(0)?;
        self.check_strict(1)?;
        let mut pairs = Vec::new();
        for t in &self.solutions {
            for s in &self.solutions {
                if t != s && self.prefers(0, t, s) && self.prefers(1, t, s) {
                    pairs.push((t, s));
                }
            }
        }
        Ok(pairs)
    }

    /// Solutions no other solution improves for both players, in solution order.
    pub fn pareto_optimal(&self) -> Result<Vec<&Solution>, GameError> {
        let dominated: HashSet<&Solution> =
            self.dominating_pairs()?.into_iter().map(|(_, s)| s).collect();
        Ok(self
            .solutions
            .iter()
            .filter(|s| !dominated.contains(s))
            .collect())
    }

    pub fn to_doc(&self) -> GameDoc {
        let [a, b] = &self.players;
        GameDoc {
            players: self.players.clone(),
            strategies: BTreeMap::from([
                (a.clone(), self.strategies[0].clone()),
                (b.clone(), self.strategies[1].clone()),
            ]),
            orientation: self.orientation,
            outcomes: BTreeMap::from([
                (a.clone(), self.outcomes[0].clone()),
                (b.clone(), self.outcomes[1].clone()),
            ]),
        }
    }

    pub fn from_json(document: &str) -> Result<Self, GameError> {
        let doc: GameDoc =
            serde_json::from_str(document).map_err(|e| GameError::Syntax(e.to_string()))?;
        doc.try_into()
    }
}

/// Wire format:
/// `{"players":["A","B"], "strategies":{"A":[..],"B":[..]}, "orientation":"cost",
///   "outcomes":{"A":[[..]], "B":[[..]]}}`; outcome rows follow the first
/// player's strategies and columns the second's.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    pub players: [String; 2],
    pub strategies: BTreeMap<String, Vec<String>>,
    pub orientation: Orientation,
    pub outcomes: BTreeMap<String, Vec<Vec<f64>>>,
}

impl TryFrom<GameDoc> for StrategicGame {
    type Error = GameError;

    fn try_from(mut doc: GameDoc) -> Result<Self, Self::Error> {
        let take = |map: &mut BTreeMap<String, _>, player: &str, what: &str| {
            map.remove(player)
                .ok_or_else(|| GameError::Invalid(format!("missing {what} for player `{player}`")))
        };
        let [a, b] = doc.players.clone();
        let strategies = [
            take(&mut doc.strategies, &a, "strategies")?,
            take(&mut doc.strategies, &b, "strategies")?,
        ];
        let take = |map: &mut BTreeMap<String, _>, player: &str| {
            map.remove(player).ok_or_else(|| {
                GameError::Invalid(format!("missing outcomes for player `{player}`"))
            })
        };
        let outcomes = [take(&mut doc.outcomes, &a)?, take(&mut doc.outcomes, &b)?];
        if let Some(extra) = doc.strategies.keys().chain(doc.outcomes.keys()).next() {
            return Err(GameError::UnknownPlayer(extra.clone()));
        }
        StrategicGame::new(doc.players, strategies, doc.orientation, outcomes)
    }
}
