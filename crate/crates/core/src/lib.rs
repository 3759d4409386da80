//! Rankings, tournaments and games seen through two-block link diagrams.
//!
//! A [`LinkDiagram`] places two orders over the same options side by side:
//! each pair of loops crosses once per block, and the loop that precedes is
//! drawn over. The crate covers
//!
//! - [`order`]: tournaments, direct-or-indirect precedence, Condorcet
//!   winners and losers, Hamilton-path rankings and the naturality check;
//! - [`aggregate`]: pairwise comparison matrices with geometric-mean and
//!   principal-eigenvector weights;
//! - [`games`]: two-player strategic-form games and Pareto optimality;
//! - [`diagram`]: splittability queries and SVG rendering;
//! - [`cli`]: the `linkrank` command line.
//!
//! ```
//! use linkrank::{ComparisonMatrix, MatrixFormat};
//!
//! let m = ComparisonMatrix::parse("1,2,2\n1/2,1,9\n1/2,1/9,1", MatrixFormat::Csv).unwrap();
//! let t = m.tournament();
//! let gm = m.gm_weights().ranking().unwrap();
//! assert_eq!(gm.to_string(), "2 > 1 > 3");
//! assert!(!t.naturality(&gm).unwrap().natural);
//! assert!(t.naturality(&t.hamilton_path()).unwrap().natural);
//! ```

pub mod aggregate;
pub mod cli;
pub mod diagram;
pub mod games;
pub mod order;

pub use aggregate::{ComparisonMatrix, MatrixError, MatrixFormat, WeightVector};
pub use diagram::{parse_crossings, Block, Crossing, DiagramError, LinkDiagram, RenderStyle};
pub use games::{GameError, Orientation, Solution, StrategicGame};
pub use order::{NaturalityReport, OptionId, OrderError, Ranking, Tournament};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}
