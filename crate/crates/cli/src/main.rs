mod render;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{Local, NaiveDate, Timelike};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use timestream_api::ServeError;
use timestream_core::analytics::{day_adherence, detect_patterns, DetectorConfig};
use timestream_core::layout::{day_layout, render_svg, LayoutConfig, LayoutError, Smoothing};
use timestream_core::sim::{deck, generate_scenario, generate_single_card_scenario, Persona, PersonaName, SimError};
use timestream_core::store::{load_or_default, save_journal, JournalLock, StoreError};
use timestream_core::time::{format_clock, parse_clock};
use timestream_core::{ActivityId, DomainError, IntervalKey, IntervalKind, Journal, ToggleOutcome};

#[derive(Parser)]
#[command(name = "timestream", version, about = "Plan, log and reflect on your day")]
struct Cli {
    /// Journal file; defaults to $AR_DATA_DIR/journal.json.
    #[arg(long, global = true)]
    journal: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Create an empty journal if none exists.
    Init,
    #[command(subcommand)]
    Activity(ActivityCmd),
    #[command(subcommand)]
    Plan(PlanCmd),
    #[command(subcommand)]
    Log(LogCmd),
    /// Show a day as text, an ASCII stream, JSON or SVG.
    Show(ShowArgs),
    /// List deviations between plan and log.
    Patterns(ReportArgs),
    /// Adherence of the log to the plan.
    Score(ReportArgs),
    #[command(subcommand)]
    Goal(GoalCmd),
    /// Generate a persona scenario with ground-truth labels.
    Sim(SimArgs),
    /// Serve the HTTP API.
    Serve {
        /// Defaults to $AR_PORT, then 8787.
        #[arg(long)]
        port: Option<u16>,
    },
}

#[derive(Subcommand)]
enum ActivityCmd {
    Add {
        name: String,
        #[arg(long)]
        color: String,
        #[arg(long)]
        order: Option<u32>,
    },
    List {
        #[arg(long)]
        json: bool,
    },
    Archive {
        activity: String,
    },
}

#[derive(Subcommand)]
enum PlanCmd {
    /// Plan a block; an end at or before the start runs past midnight.
    Add(SpanArgs),
    Remove {
        #[arg(value_parser = parse_date)]
        date: NaiveDate,
        /// Interval id as shown by `plan list`, e.g. a1@840.
        id: IntervalKey,
    },
    List {
        #[arg(value_parser = parse_date)]
        date: NaiveDate,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum LogCmd {
    Start(TimerArgs),
    Stop(TimerArgs),
    /// Record a block after the fact.
    Add(SpanArgs),
    Remove {
        #[arg(value_parser = parse_date)]
        date: NaiveDate,
        id: IntervalKey,
    },
}

#[derive(Args)]
struct SpanArgs {
    #[arg(value_parser = parse_date)]
    date: NaiveDate,
    activity: String,
    #[arg(value_parser = parse_clock_arg)]
    start: u16,
    #[arg(value_parser = parse_clock_arg)]
    end: u16,
}

#[derive(Args)]
struct TimerArgs {
    activity: String,
    /// Clock time to record instead of the wall clock.
    #[arg(long, value_parser = parse_clock_arg)]
    now: Option<u16>,
    #[arg(long, value_parser = parse_date)]
    date: Option<NaiveDate>,
}

#[derive(Args)]
struct ShowArgs {
    #[arg(value_parser = parse_date)]
    date: NaiveDate,
    #[arg(long)]
    ascii: bool,
    #[arg(long)]
    json: bool,
    /// Write the timeline stream as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 960)]
    width: u32,
    #[arg(long, default_value_t = 360)]
    height: u32,
    #[arg(long, value_parser = parse_smoothing, default_value = "cubic")]
    smooth: Smoothing,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(value_parser = parse_date)]
    date: NaiveDate,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum GoalCmd {
    Add {
        activity: String,
        minutes: u32,
        #[arg(long, value_parser = parse_date)]
        date: Option<NaiveDate>,
    },
    Progress {
        id: String,
        #[arg(long, value_parser = parse_date)]
        date: Option<NaiveDate>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    persona: PersonaName,
    #[arg(long)]
    out: PathBuf,
    /// Apply only this card (1-8) instead of drawing three.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
    card: Option<u8>,
}

fn parse_date(s: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| format!("invalid date {s:?}, expected YYYY-MM-DD"))
}

fn parse_clock_arg(s: &str) -> Result<u16, String> {
    parse_clock(s).map_err(|e| e.to_string())
}

fn parse_smoothing(s: &str) -> Result<Smoothing, String> {
    match s {
        "none" | "linear" => Ok(Smoothing::None),
        "cubic" => Ok(Smoothing::ShapePreservingCubic),
        _ => Err(format!("unknown smoothing {s:?}, expected none or cubic")),
    }
}

#[derive(Debug)]
enum CliError {
    Domain(DomainError),
    Store(StoreError),
    Layout(LayoutError),
    Sim(SimError),
    Serve(ServeError),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.code(),
            CliError::Store(e) => e.code(),
            CliError::Layout(e) => e.code(),
            CliError::Sim(e) => e.code(),
            CliError::Serve(e) => e.code(),
            CliError::Io(..) => "IoFailure",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => e.fmt(f),
            CliError::Store(e) => e.fmt(f),
            CliError::Layout(e) => e.fmt(f),
            CliError::Sim(e) => e.fmt(f),
            CliError::Serve(e) => e.fmt(f),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

macro_rules! from_error {
    ($($variant:ident($ty:ty)),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::$variant(e)
            }
        })*
    };
}

from_error!(Domain(DomainError), Store(StoreError), Layout(LayoutError), Sim(SimError), Serve(ServeError));

type CliResult = Result<String, CliError>;

fn today() -> NaiveDate {
    Local::now().date_naive()
}

fn clock_now() -> u16 {
    let now = Local::now();
    (now.hour() * 60 + now.minute()) as u16
}

fn compact<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn resolve(journal: &Journal, activity: &str) -> Result<ActivityId, CliError> {
    journal
        .resolve_activity(activity)
        .map(|a| a.id.clone())
        .ok_or_else(|| DomainError::UnknownActivity(activity.into()).into())
}

/// Runs `f` on the journal under the file lock and saves if it succeeds.
fn mutate(path: &Path, f: impl FnOnce(&mut Journal) -> CliResult) -> CliResult {
    let _lock = JournalLock::acquire(path)?;
    let mut journal = load_or_default(path)?;
    let out = f(&mut journal)?;
    save_journal(&journal, path)?;
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn run(cli: Cli) -> CliResult {
    let path = cli.journal.unwrap_or_else(timestream_api::journal_path_from_env);
    let read = || load_or_default(&path);
    match cli.command {
        Command::Init => {
            if path.exists() {
                read()?;
                return Ok(format!("journal already exists at {}\n", path.display()));
            }
            mutate(&path, |_| Ok(format!("created {}\n", path.display())))
        }
        Command::Activity(cmd) => activity(&path, cmd),
        Command::Plan(PlanCmd::Add(span)) => add_span(&path, IntervalKind::Planned, span),
        Command::Plan(PlanCmd::Remove { date, id }) => remove(&path, IntervalKind::Planned, date, id),
        Command::Plan(PlanCmd::List { date, json }) => {
            let journal = read()?;
            let day = journal.day(date);
            if json {
                return Ok(compact(&day.planned));
            }
            Ok(day.planned.iter().map(|iv| render::interval_line(&journal, iv) + "\n").collect())
        }
        Command::Log(LogCmd::Add(span)) => add_span(&path, IntervalKind::Logged, span),
        Command::Log(LogCmd::Remove { date, id }) => remove(&path, IntervalKind::Logged, date, id),
        Command::Log(LogCmd::Start(t)) => mutate(&path, |j| {
            let id = resolve(j, &t.activity)?;
            let (date, now) = (t.date.unwrap_or_else(today), t.now.unwrap_or_else(clock_now));
            j.start_timer(date, &id, now)?;
            Ok(format!("started {} at {}\n", render::name(j, &id), format_clock(now)))
        }),
        Command::Log(LogCmd::Stop(t)) => mutate(&path, |j| {
            let id = resolve(j, &t.activity)?;
            let (date, now) = (t.date.unwrap_or_else(today), t.now.unwrap_or_else(clock_now));
            carry_timer(j, &id, date);
            match j.stop_timer(date, &id, now)? {
                ToggleOutcome::Stopped(iv) => Ok(format!("logged {} {}\n", render::name(j, &id), render::span(&iv))),
                _ => Ok(format!("discarded zero-length {} timer\n", render::name(j, &id))),
            }
        }),
        Command::Show(args) => show(&read()?, args),
        Command::Patterns(args) => {
            let journal = read()?;
            let events = detect_patterns(&journal.day(args.date), &DetectorConfig::default());
            Ok(if args.json { compact(&events) } else { render::patterns_text(&journal, &events) })
        }
        Command::Score(args) => {
            let journal = read()?;
            let report = day_adherence(&journal.day(args.date), &journal.universe());
            Ok(if args.json { compact(&report) } else { render::score_text(&journal, &report) })
        }
        Command::Goal(GoalCmd::Add { activity, minutes, date }) => mutate(&path, |j| {
            let id = resolve(j, &activity)?;
            Ok(format!("{}\n", j.add_goal(&id, minutes, date.unwrap_or_else(today))?.id))
        }),
        Command::Goal(GoalCmd::Progress { id, date, json }) => {
            let journal = read()?;
            let p = journal.goal_progress(&id, date)?;
            if json {
                return Ok(compact(&p));
            }
            let goal = journal.goal(&id).expect("progress found it");
            Ok(format!(
                "{id} {} {}/{} min ({:.1}%){}\n",
                render::name(&journal, &goal.activity),
                p.logged_minutes,
                goal.target_minutes,
                p.fraction * 100.0,
                if p.met { " met" } else { "" }
            ))
        }
        Command::Sim(args) => sim(args),
        Command::Serve { port } => {
            let port = match port {
                Some(p) => p,
                None => timestream_api::port_from_env()?,
            };
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Serve(e.into()))?;
            rt.block_on(timestream_api::serve(&path, port))?;
            Ok(String::new())
        }
    }
}

/// A timer left running on an earlier day is split at each midnight so it
/// can be stopped on `date`.
fn carry_timer(journal: &mut Journal, activity: &ActivityId, date: NaiveDate) {
    let started = journal
        .active_timers()
        .into_iter()
        .filter(|(d, a, _)| *a == activity && *d < date)
        .map(|(d, _, _)| d)
        .max();
    if let Some(mut day) = started {
        if journal.day(date).timer(activity).is_some() {
            return;
        }
        while day < date {
            journal.midnight_rollover(day);
            day = day.succ_opt().unwrap_or(date);
        }
    }
}

fn activity(path: &Path, cmd: ActivityCmd) -> CliResult {
    match cmd {
        ActivityCmd::Add { name, color, order } => mutate(path, |j| Ok(format!("{}\n", j.define_activity(&name, &color, order)?.id))),
        ActivityCmd::List { json } => {
            let journal = load_or_default(path)?;
            if json {
                return Ok(compact(&journal.activities));
            }
            let mut defs = journal.activities.clone();
            defs.sort_by(|a, b| (a.order, &a.id).cmp(&(b.order, &b.id)));
            Ok(defs
                .iter()
                .map(|a| {
                    let flag = if a.archived { "  archived" } else { "" };
                    format!("{:<6} {:<14} {}  order {}{flag}\n", a.id.as_str(), a.name, a.color, a.order)
                })
                .collect())
        }
        ActivityCmd::Archive { activity } => mutate(path, |j| {
            let id = resolve(j, &activity)?;
            Ok(format!("archived {}\n", j.archive_activity(&id)?.name))
        }),
    }
}

fn add_span(path: &Path, kind: IntervalKind, span: SpanArgs) -> CliResult {
    mutate(path, |j| {
        let id = resolve(j, &span.activity)?;
        j.add_spanning_interval(span.date, kind, id.clone(), span.start, span.end)?;
        Ok(format!("{}@{}\n", id, span.start))
    })
}

fn remove(path: &Path, kind: IntervalKind, date: NaiveDate, key: IntervalKey) -> CliResult {
    mutate(path, |j| {
        let iv = j.remove_interval(date, kind, &key)?;
        Ok(format!("removed {} {}\n", render::name(j, &iv.activity), render::span(&iv)))
    })
}

fn show(journal: &Journal, args: ShowArgs) -> CliResult {
    let day = journal.day(args.date);
    let mut out = String::new();
    if let Some(svg_path) = &args.svg {
        let config = LayoutConfig::new(journal.universe()).with_smoothing(args.smooth);
        let geometry = day_layout(&day, &journal.universe(), &config)?;
        write_file(svg_path, &render_svg(&geometry, &journal.palette(), args.width, args.height)?)?;
        out.push_str(&format!("wrote {}\n", svg_path.display()));
    }
    if args.json {
        out.push_str(&compact(&timestream_api::DayView { date: args.date, day: day.clone() }));
    }
    if args.ascii {
        out.push_str(&render::ascii_histogram(
            &journal.bin_day(args.date, IntervalKind::Planned),
            &journal.bin_day(args.date, IntervalKind::Logged),
        ));
    }
    if out.is_empty() {
        out = render::day_text(journal, &day);
    }
    Ok(out)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    seed: u64,
    persona: PersonaName,
    date: NaiveDate,
    drawn_cards: &'a [timestream_core::sim::DrawnCard],
    ground_truth: &'a [timestream_core::analytics::PatternEvent],
}

fn sim(args: SimArgs) -> CliResult {
    let persona = Persona::builtin(args.persona);
    let result = match args.card {
        Some(id) => {
            let card = deck().into_iter().find(|c| c.id == id).expect("range checked by clap");
            generate_single_card_scenario(args.seed, &persona, &card)?
        }
        None => generate_scenario(args.seed, &persona)?,
    };
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::Io(args.out.clone(), e))?;
    let journal_path = args.out.join(timestream_api::JOURNAL_FILE);
    save_journal(&result.to_journal(&persona), &journal_path)?;
    let sidecar = Sidecar {
        seed: result.seed,
        persona: result.persona,
        date: result.date,
        drawn_cards: &result.drawn_cards,
        ground_truth: &result.ground_truth,
    };
    let truth_path = args.out.join("ground_truth.json");
    let mut text = serde_json::to_string_pretty(&sidecar).expect("serializable");
    text.push('\n');
    write_file(&truth_path, &text)?;
    let mut out = format!("{} seed {} on {}\n", result.persona, result.seed, result.date);
    for d in &result.drawn_cards {
        let note = if d.applied { "" } else { " (no target, no effect)" };
        out.push_str(&format!("  {} {}: {}{note}\n", format_clock(d.draw_time), d.card.id, d.card.title));
    }
    out.push_str(&format!("wrote {} and {}\n", journal_path.display(), truth_path.display()));
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
