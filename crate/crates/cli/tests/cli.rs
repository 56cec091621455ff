use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use timestream_core::store::load_journal;

struct Env {
    _dir: TempDir,
    journal: PathBuf,
}

impl Env {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let journal = dir.path().join("journal.json");
        Env { _dir: dir, journal }
    }

    fn dir(&self) -> &Path {
        self.journal.parent().unwrap()
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_timestream"))
            .env("AR_DATA_DIR", self.dir())
            .args(args)
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    }

    fn fails(&self, args: &[&str]) -> (i32, String) {
        let out = self.run(args);
        (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
    }
}

#[test]
fn activity_add_prints_the_new_id() {
    let env = Env::new();
    assert_eq!(env.ok(&["activity", "add", "Sleep", "--color", "#1a237e"]), "a1\n");
    assert_eq!(env.ok(&["activity", "add", "Study", "--color", "#2e7d32"]), "a2\n");
    let listed = env.ok(&["activity", "list"]);
    assert!(listed.contains("Sleep") && listed.contains("#2e7d32"));
    let json: Value = serde_json::from_str(&env.ok(&["activity", "list", "--json"])).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);
}

#[test]
fn planned_hour_shows_in_ascii_histogram() {
    let env = Env::new();
    env.ok(&["activity", "add", "Study", "--color", "#2e7d32"]);
    env.ok(&["plan", "add", "2024-03-04", "Study", "14:00", "15:00"]);
    let text = env.ok(&["show", "2024-03-04", "--ascii"]);
    let planned: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("planned"))
        .unwrap()
        .split_whitespace()
        .skip(1)
        .collect();
    assert_eq!(planned.len(), 24);
    assert_eq!(planned[14], "60");
    assert_eq!(planned.iter().filter(|c| **c != "0").count(), 1);
    let logged = text.lines().find(|l| l.starts_with("logged")).unwrap();
    assert!(logged.split_whitespace().skip(1).all(|c| c == "0"));
}

#[test]
fn stopping_an_idle_timer_is_a_domain_error() {
    let env = Env::new();
    env.ok(&["activity", "add", "Study", "--color", "#2e7d32"]);
    let (code, err) = env.fails(&["log", "stop", "Study", "--now", "10:00"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error[NotActive]"), "{err}");
    let (code, err) = env.fails(&["log", "start", "Ghost"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error[UnknownActivity]"));
}

#[test]
fn usage_errors_exit_two() {
    let env = Env::new();
    assert_eq!(env.fails(&["frobnicate"]).0, 2);
    assert_eq!(env.fails(&["plan", "add", "2024-03-04", "Study", "25:00", "26:00"]).0, 2);
    assert_eq!(env.fails(&["show", "yesterday"]).0, 2);
    assert_eq!(env.fails(&["sim", "--seed", "1", "--persona", "nobody", "--out", "x"]).0, 2);
}

#[test]
fn timers_log_and_cross_midnight() {
    let env = Env::new();
    env.ok(&["activity", "add", "Sleep", "--color", "#1a237e"]);
    env.ok(&["log", "start", "Sleep", "--date", "2024-03-04", "--now", "23:00"]);
    let out = env.ok(&["log", "stop", "Sleep", "--date", "2024-03-05", "--now", "07:00"]);
    assert_eq!(out, "logged Sleep 00:00-07:00\n");
    let j = load_journal(&env.journal).unwrap();
    let before = j.day("2024-03-04".parse().unwrap());
    assert_eq!((before.logged[0].start, before.logged[0].end), (1380, 1440));
    assert!(j.active_timers().is_empty());
}

#[test]
fn spanning_plans_split_at_midnight() {
    let env = Env::new();
    env.ok(&["activity", "add", "Sleep", "--color", "#1a237e"]);
    env.ok(&["plan", "add", "2024-03-04", "Sleep", "22:30", "06:30"]);
    assert!(env.ok(&["plan", "list", "2024-03-04"]).contains("22:30-24:00"));
    assert!(env.ok(&["plan", "list", "2024-03-05"]).contains("00:00-06:30"));
    env.ok(&["plan", "remove", "2024-03-05", "a1@0"]);
    assert_eq!(env.ok(&["plan", "list", "2024-03-05"]), "");
}

#[test]
fn reports_and_svg() {
    let env = Env::new();
    env.ok(&["activity", "add", "Study", "--color", "#2e7d32"]);
    env.ok(&["activity", "add", "Nap", "--color", "#00838f"]);
    env.ok(&["plan", "add", "2024-03-04", "Study", "14:00", "15:00"]);
    env.ok(&["log", "add", "2024-03-04", "Study", "15:00", "16:00"]);
    env.ok(&["log", "add", "2024-03-04", "Nap", "13:00", "13:30"]);
    let text = env.ok(&["patterns", "2024-03-04"]);
    assert!(text.contains("forward_shift") && text.contains("addition"));
    let events: Value = serde_json::from_str(&env.ok(&["patterns", "2024-03-04", "--json"])).unwrap();
    assert_eq!(events.as_array().unwrap().len(), 2);
    let score: Value = serde_json::from_str(&env.ok(&["score", "2024-03-04", "--json"])).unwrap();
    assert_eq!(score["overall"], 0.0);
    let empty: Value = serde_json::from_str(&env.ok(&["score", "2024-01-01", "--json"])).unwrap();
    assert_eq!(empty["overall"], Value::Null);

    let svg = env.dir().join("day.svg");
    env.ok(&["show", "2024-03-04", "--svg", svg.to_str().unwrap()]);
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(doc.matches("<path").count(), 3);
    let view: Value = serde_json::from_str(&env.ok(&["show", "2024-03-04", "--json"])).unwrap();
    assert_eq!(view["date"], "2024-03-04");
}

#[test]
fn goals_report_progress() {
    let env = Env::new();
    env.ok(&["activity", "add", "Study", "--color", "#2e7d32"]);
    assert_eq!(env.ok(&["goal", "add", "Study", "120", "--date", "2024-03-04"]), "g1\n");
    env.ok(&["log", "add", "2024-03-04", "Study", "09:00", "11:00"]);
    assert_eq!(env.ok(&["goal", "progress", "g1"]), "g1 Study 120/120 min (100.0%) met\n");
    let (code, err) = env.fails(&["goal", "add", "Study", "0"]);
    assert_eq!((code, err.starts_with("error[InvalidTarget]")), (1, true));
}

#[test]
fn sim_writes_journal_and_ground_truth() {
    let env = Env::new();
    let out = env.dir().join("scenario");
    let args = ["sim", "--seed", "42", "--persona", "student_athlete", "--out", out.to_str().unwrap()];
    env.ok(&args);
    let truth: Value = serde_json::from_str(&std::fs::read_to_string(out.join("ground_truth.json")).unwrap()).unwrap();
    assert_eq!(truth["persona"], "student_athlete");
    assert_eq!(truth["drawn_cards"].as_array().unwrap().len(), 3);
    let journal = out.join("journal.json");
    load_journal(&journal).unwrap();
    let detected: Value = serde_json::from_str(&env.ok(&["--journal", journal.to_str().unwrap(), "patterns", "2024-03-04", "--json"])).unwrap();
    assert_eq!(detected, truth["ground_truth"]);
    let first = std::fs::read(&journal).unwrap();
    env.ok(&args);
    assert_eq!(std::fs::read(&journal).unwrap(), first);
}

#[test]
fn init_is_idempotent_and_rejects_corrupt_files() {
    let env = Env::new();
    env.ok(&["init"]);
    assert!(env.ok(&["init"]).contains("already exists"));
    std::fs::write(&env.journal, "{not json").unwrap();
    let (code, err) = env.fails(&["activity", "list"]);
    assert_eq!((code, err.starts_with("error[ParseError]")), (1, true));
}
