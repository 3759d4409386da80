//! The `linkrank` command line.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 internal failure,
//! 3 naturality violated under `rank --check-naturality`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::aggregate::{self, ComparisonMatrix, MatrixError, MatrixFormat};
use crate::diagram::{LinkDiagram, RenderStyle};
use crate::games::StrategicGame;
use crate::order::{OptionId, Ranking, Tournament, TournamentDoc};
use crate::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;
pub const EXIT_UNNATURAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "linkrank", version)]
#[command(about = "Rank pairwise comparisons, check naturality, find Pareto-optimal solutions and draw link diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Aggregate a pairwise comparison matrix into a ranking
    Rank(RankArgs),
    /// Rank along a Hamilton path of the comparison tournament
    NaturalRank(NaturalRankArgs),
    /// Pareto analysis of a two-player game
    Game(GameArgs),
    /// Query splittability of loops in a diagram built from two order files
    Split(SplitArgs),
    /// Render the diagram of two order files as SVG
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Row geometric means
    Gm,
    /// Principal eigenvector
    Ev,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct StyleArgs {
    #[arg(long, default_value_t = 40.0)]
    row_height: f64,
    #[arg(long, default_value_t = 40.0)]
    column_width: f64,
    #[arg(long, default_value_t = 8.0)]
    strand_gap: f64,
    #[arg(long, default_value_t = 2.0)]
    stroke_width: f64,
    #[arg(long, default_value_t = 20.0)]
    margin: f64,
}

impl StyleArgs {
    fn style(&self) -> Result<RenderStyle, CliError> {
        Ok(RenderStyle::new(
            self.strand_gap,
            self.column_width,
            self.row_height,
            self.stroke_width,
            self.margin,
        )
        .map_err(Error::from)?)
    }
}

#[derive(Args, Debug)]
struct RankArgs {
    /// Comparison matrix (CSV grid or JSON)
    #[arg(long)]
    input: PathBuf,
    /// Input format; guessed from the file extension when omitted
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, default_value = "gm")]
    method: Method,
    /// Convergence tolerance for `--method ev`
    #[arg(long, default_value_t = aggregate::DEFAULT_EV_TOLERANCE)]
    tol: f64,
    /// Iteration cap for `--method ev`
    #[arg(long, default_value_t = aggregate::DEFAULT_EV_MAX_ITER)]
    max_iter: usize,
    /// Exit with status 3 if the ranking is not natural
    #[arg(long)]
    check_naturality: bool,
    /// Write the comparisons-vs-ranking diagram to this SVG file
    #[arg(long)]
    diagram: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    style: StyleArgs,
}

#[derive(Args, Debug)]
struct NaturalRankArgs {
    /// Comparison matrix (CSV or JSON) or tournament JSON
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    diagram: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    style: StyleArgs,
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Game JSON
    #[arg(long)]
    input: PathBuf,
    /// Write the diagram (first player's order left, second's right) to this SVG file
    #[arg(long)]
    diagram: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    style: StyleArgs,
}

#[derive(Args, Debug)]
struct SplitArgs {
    /// Order file for the left block
    #[arg(long)]
    left: PathBuf,
    /// Order file for the right block
    #[arg(long)]
    right: PathBuf,
    /// Query a single pair of loops
    #[arg(long, num_args = 2, value_names = ["I", "J"], conflicts_with = "loop_id")]
    pair: Option<Vec<String>>,
    /// Query whether one loop is splittable from all others
    #[arg(long = "loop", value_name = "I")]
    loop_id: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    /// SVG destination; printed to stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    style: StyleArgs,
}

/// What a finished invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Matrix(MatrixError::NoConvergence(_)) => CliError::internal(e.to_string()),
            e => CliError::input(e.to_string()),
        }
    }
}

/// A weight attached to its option, in option order.
#[derive(Debug, Serialize)]
struct WeightEntry {
    option: OptionId,
    weight: f64,
}

#[derive(Debug, Serialize)]
struct PlayerOrder {
    player: String,
    order: Vec<OptionId>,
}

#[derive(Debug, Serialize)]
struct SplitEntry {
    loops: Vec<OptionId>,
    splittable: bool,
}

/// Every key is always present; keys that do not apply to a verb are null.
#[derive(Debug, Default, Serialize)]
struct Report {
    verb: &'static str,
    method: Option<&'static str>,
    weights: Option<Vec<WeightEntry>>,
    ranking: Option<Vec<OptionId>>,
    naturality: Option<bool>,
    violations: Option<Vec<(OptionId, OptionId)>>,
    condorcet_winner: Option<OptionId>,
    condorcet_loser: Option<OptionId>,
    pareto: Option<Vec<OptionId>>,
    dominating_pairs: Option<Vec<(OptionId, OptionId)>>,
    preferences: Option<Vec<PlayerOrder>>,
    splittable: Option<Vec<SplitEntry>>,
    diagram: Option<String>,
}

impl Report {
    fn text(&self) -> String {
        let mut out = String::new();
        let list = |ids: &[OptionId], sep: &str| {
            ids.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(sep)
        };
        let pairs = |ps: &[(OptionId, OptionId)]| {
            if ps.is_empty() {
                "none".to_owned()
            } else {
                ps.iter()
                    .map(|(a, b)| format!("({a}, {b})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        };
        let opt = |o: &Option<OptionId>| o.as_ref().map_or("none".to_owned(), |o| o.to_string());

        if let Some(method) = self.method {
            let _ = writeln!(out, "method: {method}");
        }
        if let Some(weights) = &self.weights {
            let _ = writeln!(out, "weights:");
            for w in weights {
                let _ = writeln!(out, "  {}: {}", w.option, w.weight);
            }
        }
        if let Some(ranking) = &self.ranking {
            let _ = writeln!(out, "ranking: {}", list(ranking, " > "));
        }
        if let Some(natural) = self.naturality {
            let _ = writeln!(out, "natural: {}", if natural { "yes" } else { "no" });
        }
        if let Some(violations) = &self.violations {
            let _ = writeln!(out, "violations: {}", pairs(violations));
        }
        if matches!(self.verb, "rank" | "natural-rank") {
            let _ = writeln!(out, "condorcet winner: {}", opt(&self.condorcet_winner));
            let _ = writeln!(out, "condorcet loser: {}", opt(&self.condorcet_loser));
        }
        if let Some(prefs) = &self.preferences {
            for p in prefs {
                let _ = writeln!(out, "preference of {}: {}", p.player, list(&p.order, " > "));
            }
        }
        if let Some(pareto) = &self.pareto {
            let _ = writeln!(out, "pareto optimal: {}", list(pareto, ", "));
        }
        if let Some(dominating) = &self.dominating_pairs {
            let _ = writeln!(out, "dominating pairs: {}", pairs(dominating));
        }
        if let Some(split) = &self.splittable {
            for s in split {
                let _ = writeln!(
                    out,
                    "{}: {}",
                    list(&s.loops, " / "),
                    if s.splittable { "splittable" } else { "linked" }
                );
            }
        }
        if let Some(path) = &self.diagram {
            let _ = writeln!(out, "diagram: {path}");
        }
        out
    }

    fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.text()
        }
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

fn dispatch(command: Command) -> Result<(u8, String), CliError> {
    match command {
        Command::Rank(args) => rank(args),
        Command::NaturalRank(args) => natural_rank(args),
        Command::Game(args) => game(args),
        Command::Split(args) => split(args),
        Command::Render(args) => render(args),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn write_svg(path: &Path, svg: &str) -> Result<String, CliError> {
    fs::write(path, svg)
        .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn matrix_format(path: &Path, explicit: Option<Format>) -> MatrixFormat {
    match explicit {
        Some(Format::Csv) => MatrixFormat::Csv,
        Some(Format::Json) => MatrixFormat::Json,
        None if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json")) =>
        {
            MatrixFormat::Json
        }
        None => MatrixFormat::Csv,
    }
}

fn load_matrix(path: &Path, format: Option<Format>) -> Result<ComparisonMatrix, CliError> {
    let text = read(path)?;
    Ok(ComparisonMatrix::parse(&text, matrix_format(path, format)).map_err(Error::from)?)
}

/// Left block = comparisons, right block = the ranking as a total order.
fn ranking_diagram(t: &Tournament, r: &Ranking) -> Result<LinkDiagram, CliError> {
    let right = r.to_tournament_over(t.options()).map_err(Error::from)?;
    Ok(LinkDiagram::new(t.clone(), right).map_err(Error::from)?)
}

fn rank(args: RankArgs) -> Result<(u8, String), CliError> {
    let style = args.style.style()?;
    let m = load_matrix(&args.input, args.format)?;
    let (method, weights) = match args.method {
        Method::Gm => ("gm", m.gm_weights()),
        Method::Ev => (
            "ev",
            m.ev_weights(args.tol, args.max_iter).map_err(Error::from)?,
        ),
    };
    let ranking = weights.ranking().map_err(Error::from)?;
    let t = m.tournament();
    let report = t.naturality(&ranking).map_err(Error::from)?;
    let diagram = match &args.diagram {
        Some(path) => Some(write_svg(path, &ranking_diagram(&t, &ranking)?.render_svg(&style))?),
        None => None,
    };
    let out = Report {
        verb: "rank",
        method: Some(method),
        weights: Some(
            weights
                .iter()
                .map(|(o, w)| WeightEntry { option: o.clone(), weight: w })
                .collect(),
        ),
        ranking: Some(ranking.order().to_vec()),
        naturality: Some(report.natural),
        violations: Some(report.violations),
        condorcet_winner: t.condorcet_winner().cloned(),
        condorcet_loser: t.condorcet_loser().cloned(),
        diagram,
        ..Report::default()
    };
    let code = if args.check_naturality && !report.natural {
        EXIT_UNNATURAL
    } else {
        EXIT_OK
    };
    Ok((code, out.render(args.json)))
}

fn natural_rank(args: NaturalRankArgs) -> Result<(u8, String), CliError> {
    let style = args.style.style()?;
    let format = matrix_format(&args.input, args.format);
    let text = read(&args.input)?;
    let is_tournament = format == MatrixFormat::Json
        && serde_json::from_str::<serde_json::Value>(&text)
            .is_ok_and(|v| v.get("beats").is_some());
    let t = if is_tournament {
        let doc: TournamentDoc = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("syntax error: {e}")))?;
        Tournament::try_from(doc).map_err(Error::from)?
    } else {
        ComparisonMatrix::parse(&text, format)
            .map_err(Error::from)?
            .tournament()
    };
    let ranking = t.hamilton_path();
    let report = t.naturality(&ranking).map_err(Error::from)?;
    if !report.natural {
        return Err(CliError::internal("Hamilton-path ranking failed the naturality check"));
    }
    let diagram = match &args.diagram {
        Some(path) => Some(write_svg(path, &ranking_diagram(&t, &ranking)?.render_svg(&style))?),
        None => None,
    };
    let out = Report {
        verb: "natural-rank",
        ranking: Some(ranking.order().to_vec()),
        naturality: Some(report.natural),
        violations: Some(report.violations),
        condorcet_winner: t.condorcet_winner().cloned(),
        condorcet_loser: t.condorcet_loser().cloned(),
        diagram,
        ..Report::default()
    };
    Ok((EXIT_OK, out.render(args.json)))
}

fn game(args: GameArgs) -> Result<(u8, String), CliError> {
    let style = args.style.style()?;
    let g = StrategicGame::from_json(&read(&args.input)?).map_err(Error::from)?;
    let left = g.preference_of(0).map_err(Error::from)?;
    let right = g.preference_of(1).map_err(Error::from)?;
    let preferences = [&left, &right]
        .iter()
        .zip(g.players())
        .map(|(t, player)| PlayerOrder {
            player: player.clone(),
            order: t.hamilton_path().order().to_vec(),
        })
        .collect();
    let pareto = g
        .pareto_optimal()
        .map_err(Error::from)?
        .into_iter()
        .map(|s| s.label.clone())
        .collect();
    let dominating = g
        .dominating_pairs()
        .map_err(Error::from)?
        .into_iter()
        .map(|(t, s)| (t.label.clone(), s.label.clone()))
        .collect();
    let diagram = match &args.diagram {
        Some(path) => {
            let d = LinkDiagram::new(left, right).map_err(Error::from)?;
            Some(write_svg(path, &d.render_svg(&style))?)
        }
        None => None,
    };
    let out = Report {
        verb: "game",
        pareto: Some(pareto),
        dominating_pairs: Some(dominating),
        preferences: Some(preferences),
        diagram,
        ..Report::default()
    };
    Ok((EXIT_OK, out.render(args.json)))
}

/// An order file: a tournament, or `{"order": [...]}` for a total order.
#[derive(Deserialize)]
#[serde(untagged)]
enum OrderDoc {
    Tournament(TournamentDoc),
    Total { order: Vec<OptionId> },
}

fn load_order(path: &Path) -> Result<Tournament, CliError> {
    let doc: OrderDoc = serde_json::from_str(&read(path)?).map_err(|_| {
        CliError::input(format!(
            "{}: expected a tournament {{\"options\", \"beats\"}} or a total order {{\"order\"}}",
            path.display()
        ))
    })?;
    let t = match doc {
        OrderDoc::Tournament(doc) => Tournament::try_from(doc),
        OrderDoc::Total { order } => Ranking::new(order).and_then(|r| r.to_tournament()),
    };
    Ok(t.map_err(Error::from)?)
}

fn load_diagram(left: &Path, right: &Path) -> Result<LinkDiagram, CliError> {
    Ok(LinkDiagram::new(load_order(left)?, load_order(right)?).map_err(Error::from)?)
}

fn option_id(name: &str) -> Result<OptionId, CliError> {
    Ok(OptionId::new(name).map_err(Error::from)?)
}

fn split(args: SplitArgs) -> Result<(u8, String), CliError> {
    let d = load_diagram(&args.left, &args.right)?;
    let entries = if let Some(pair) = &args.pair {
        let (i, j) = (option_id(&pair[0])?, option_id(&pair[1])?);
        let splittable = d.splittable(&i, &j).map_err(Error::from)?;
        vec![SplitEntry { loops: vec![i, j], splittable }]
    } else if let Some(name) = &args.loop_id {
        let i = option_id(name)?;
        let splittable = d.splittable_from_all(&i).map_err(Error::from)?;
        vec![SplitEntry { loops: vec![i], splittable }]
    } else {
        let loops = d.loops();
        let mut entries = Vec::new();
        for a in 0..loops.len() {
            for b in (a + 1)..loops.len() {
                entries.push(SplitEntry {
                    loops: vec![loops[a].clone(), loops[b].clone()],
                    splittable: d.splittable_idx(a, b),
                });
            }
        }
        entries
    };
    let out = Report {
        verb: "split",
        splittable: Some(entries),
        ..Report::default()
    };
    Ok((EXIT_OK, out.render(args.json)))
}

fn render(args: RenderArgs) -> Result<(u8, String), CliError> {
    let style = args.style.style()?;
    let svg = load_diagram(&args.left, &args.right)?.render_svg(&style);
    match &args.output {
        Some(path) => {
            let path = write_svg(path, &svg)?;
            Ok((EXIT_OK, format!("diagram: {path}\n")))
        }
        None => Ok((EXIT_OK, svg)),
    }
}
