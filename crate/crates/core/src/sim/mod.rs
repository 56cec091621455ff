//! Seeded persona days perturbed by life cards, with the pattern events each
//! card is expected to produce.

mod cards;
mod persona;

use chrono::NaiveDate;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{sort_events, PatternEvent};
use crate::day::DayRecord;
use crate::goal::BankableGoal;
use crate::journal::Journal;

pub use cards::{apply_life_card, deck, CardEffect, LifeCard};
pub use persona::{plan_day, standard_activities, Persona, PersonaName, STANDARD_ACTIVITIES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("persona cannot be scheduled: {0}")]
    InfeasiblePersona(String),
    #[error("no planned interval the card can act on")]
    NoEligibleTarget,
    #[error("draw time {0} is outside the day")]
    InvalidDrawTime(u16),
}

impl SimError {
    pub fn code(&self) -> &'static str {
        match self {
            SimError::InfeasiblePersona(_) => "InfeasiblePersona",
            SimError::NoEligibleTarget => "NoEligibleTarget",
            SimError::InvalidDrawTime(_) => "InvalidDrawTime",
        }
    }
}

/// Day every scenario is dated on unless a date is given.
pub fn default_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 3, 4).expect("valid constant date")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrawPoint {
    WakeUp,
    Noon,
    Evening,
}

impl DrawPoint {
    pub const ALL: [DrawPoint; 3] = [DrawPoint::WakeUp, DrawPoint::Noon, DrawPoint::Evening];

    pub fn time(self, persona: &Persona) -> u16 {
        match self {
            DrawPoint::WakeUp => persona.wake_time(),
            DrawPoint::Noon => 720,
            DrawPoint::Evening => 1080,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawnCard {
    pub draw_point: DrawPoint,
    pub draw_time: u16,
    pub card: LifeCard,
    /// False when the card found nothing to act on and so had no effect.
    pub applied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub persona: PersonaName,
    pub seed: u64,
    pub date: NaiveDate,
    pub planned_day: DayRecord,
    pub logged_day: DayRecord,
    pub ground_truth: Vec<PatternEvent>,
    pub drawn_cards: Vec<DrawnCard>,
}

impl ScenarioResult {
    /// The scenario as a journal: standard activities, one day holding the
    /// plan and the log, and the persona's goals for that day.
    pub fn to_journal(&self, persona: &Persona) -> Journal {
        let mut day = self.planned_day.clone();
        day.logged = self.logged_day.logged.clone();
        let mut journal = Journal::new();
        journal.activities = standard_activities();
        journal.goals = persona
            .goal_activities
            .iter()
            .enumerate()
            .map(|(i, (activity, minutes))| BankableGoal {
                id: format!("g{}", i + 1),
                activity: activity.clone(),
                target_minutes: u32::from(*minutes),
                date: self.date,
            })
            .collect();
        journal.days.insert(self.date, day);
        journal
    }
}

fn run(
    seed: u64,
    persona: &Persona,
    date: NaiveDate,
    draws: Vec<(DrawPoint, LifeCard)>,
) -> Result<ScenarioResult, SimError> {
    let plan = plan_day(persona, date)?;
    let mut log = DayRecord::new(date);
    log.logged = plan.planned.clone();
    let mut truth = Vec::new();
    let mut drawn = Vec::new();
    for (draw_point, card) in draws {
        let draw_time = draw_point.time(persona);
        let applied = match apply_life_card(&plan, &log, &card, draw_time) {
            Ok((next, events)) => {
                log = next;
                truth.extend(events);
                true
            }
            Err(SimError::NoEligibleTarget) => false,
            Err(e) => return Err(e),
        };
        drawn.push(DrawnCard {
            draw_point,
            draw_time,
            card,
            applied,
        });
    }
    sort_events(&mut truth);
    let mut planned_day = plan;
    planned_day.logged.clear();
    let mut logged_day = log;
    logged_day.planned.clear();
    Ok(ScenarioResult {
        persona: persona.name,
        seed,
        date,
        planned_day,
        logged_day,
        ground_truth: truth,
        drawn_cards: drawn,
    })
}

/// Three cards drawn without replacement, one at each draw point.
pub fn generate_scenario(seed: u64, persona: &Persona) -> Result<ScenarioResult, SimError> {
    generate_scenario_on(seed, persona, default_date())
}

pub fn generate_scenario_on(seed: u64, persona: &Persona, date: NaiveDate) -> Result<ScenarioResult, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cards = deck();
    let picks = index::sample(&mut rng, cards.len(), DrawPoint::ALL.len());
    let draws = DrawPoint::ALL
        .into_iter()
        .zip(picks.iter().map(|i| cards[i].clone()))
        .collect();
    run(seed, persona, date, draws)
}

/// One given card at a draw point picked by the seed.
pub fn generate_single_card_scenario(
    seed: u64,
    persona: &Persona,
    card: &LifeCard,
) -> Result<ScenarioResult, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = DrawPoint::ALL[rng.random_range(0..DrawPoint::ALL.len())];
    run(seed, persona, default_date(), vec![(point, card.clone())])
}
