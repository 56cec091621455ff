use std::collections::BTreeSet;
use std::sync::Arc;

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{delete, get, patch, post};
use axum::{Json, Router};
use chrono::{Days, Local, NaiveDate, Timelike};
use serde::{Deserialize, Serialize};
use timestream_core::analytics::{day_adherence, detect_patterns, AdherenceReport, DetectorConfig, PatternEvent};
use timestream_core::layout::{
    day_layout, render_svg, set_filter, week_layouts, LayoutConfig, Smoothing, WaveGeometry,
};
use timestream_core::{
    ActivityDef, ActivityId, ActivityPatch, BankableGoal, BinMatrix, DayRecord, DomainError, GoalProgress,
    Interval, IntervalKey, IntervalKind, Journal,
};

use crate::error::ApiError;
use crate::extract::{parse_date, Body, Clock, Params, Segments};
use crate::state::AppState;

type Shared = State<Arc<AppState>>;
type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/activities", get(list_activities).post(create_activity))
        .route("/api/activities/{id}", patch(update_activity))
        .route("/api/days/{date}", get(get_day))
        .route("/api/days/{date}/plan", post(add_plan))
        .route("/api/days/{date}/plan/{iid}", delete(remove_plan))
        .route("/api/days/{date}/log", post(add_log))
        .route("/api/days/{date}/log/{iid}", delete(remove_log))
        .route("/api/toggle", post(toggle))
        .route("/api/active", get(active))
        .route("/api/days/{date}/bins", get(bins))
        .route("/api/days/{date}/layout", get(layout))
        .route("/api/days/{date}/patterns", get(patterns))
        .route("/api/days/{date}/score", get(score))
        .route("/api/days/{date}/svg", get(svg))
        .route("/api/week/{date}/layouts", get(week))
        .route("/api/goals", get(list_goals).post(create_goal))
        .route("/api/goals/{id}/progress", get(goal_progress))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .with_state(state)
}

/// A day record with its date, as returned by every day-level endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayView {
    pub date: NaiveDate,
    #[serde(flatten)]
    pub day: DayRecord,
}

impl DayView {
    pub fn of(journal: &Journal, date: NaiveDate) -> Self {
        DayView {
            date,
            day: journal.day(date),
        }
    }
}

fn resolve(journal: &Journal, activity: &str) -> Result<ActivityId, ApiError> {
    journal
        .resolve_activity(activity)
        .map(|a| a.id.clone())
        .ok_or_else(|| DomainError::UnknownActivity(activity.into()).into())
}

async fn list_activities(State(state): Shared) -> Json<Vec<ActivityDef>> {
    Json(state.snapshot().activities.clone())
}

#[derive(Deserialize)]
struct NewActivity {
    name: String,
    color: String,
    order: Option<u32>,
}

async fn create_activity(State(state): Shared, Body(body): Body<NewActivity>) -> ApiResult<ActivityDef> {
    let def = state
        .mutate(|j| Ok(j.define_activity(&body.name, &body.color, body.order)?))
        .await?;
    Ok(Json(def))
}

async fn update_activity(
    State(state): Shared,
    Segments(id): Segments<String>,
    Body(patch): Body<ActivityPatch>,
) -> ApiResult<ActivityDef> {
    let def = state
        .mutate(|j| Ok(j.update_activity(&ActivityId::new(id), &patch)?))
        .await?;
    Ok(Json(def))
}

async fn get_day(State(state): Shared, Segments(date): Segments<String>) -> ApiResult<DayView> {
    Ok(Json(DayView::of(&state.snapshot(), parse_date(&date)?)))
}

#[derive(Deserialize)]
struct NewInterval {
    activity: String,
    start: Clock,
    end: Clock,
}

async fn add_interval(state: &AppState, date: &str, kind: IntervalKind, body: NewInterval) -> ApiResult<DayView> {
    let date = parse_date(date)?;
    let (start, end) = (body.start.minutes()?, body.end.minutes()?);
    let view = state
        .mutate(|j| {
            let iv = Interval::new(resolve(j, &body.activity)?, start, end)?;
            j.add_interval(date, kind, iv)?;
            Ok(DayView::of(j, date))
        })
        .await?;
    Ok(Json(view))
}

async fn remove_interval(state: &AppState, date: &str, kind: IntervalKind, iid: &str) -> ApiResult<DayView> {
    let date = parse_date(date)?;
    let key: IntervalKey = iid
        .parse()
        .map_err(|_| ApiError::malformed(format!("invalid interval id {iid:?}, expected ACTIVITY@START")))?;
    let view = state
        .mutate(|j| {
            j.remove_interval(date, kind, &key)?;
            Ok(DayView::of(j, date))
        })
        .await?;
    Ok(Json(view))
}

async fn add_plan(State(state): Shared, Segments(date): Segments<String>, Body(body): Body<NewInterval>) -> ApiResult<DayView> {
    add_interval(&state, &date, IntervalKind::Planned, body).await
}

async fn add_log(State(state): Shared, Segments(date): Segments<String>, Body(body): Body<NewInterval>) -> ApiResult<DayView> {
    add_interval(&state, &date, IntervalKind::Logged, body).await
}

async fn remove_plan(State(state): Shared, Segments((date, iid)): Segments<(String, String)>) -> ApiResult<DayView> {
    remove_interval(&state, &date, IntervalKind::Planned, &iid).await
}

async fn remove_log(State(state): Shared, Segments((date, iid)): Segments<(String, String)>) -> ApiResult<DayView> {
    remove_interval(&state, &date, IntervalKind::Logged, &iid).await
}

#[derive(Deserialize)]
struct ToggleRequest {
    activity: String,
    date: Option<NaiveDate>,
    now: Option<Clock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToggleResponse {
    pub status: String,
    pub interval: Option<Interval>,
    pub day: DayView,
}

async fn toggle(State(state): Shared, Body(body): Body<ToggleRequest>) -> ApiResult<ToggleResponse> {
    let wall = Local::now();
    let date = body.date.unwrap_or_else(|| wall.date_naive());
    let now = match &body.now {
        Some(c) => c.minutes()?,
        None => wall.hour() * 60 + wall.minute(),
    };
    let now = u16::try_from(now).map_err(|_| DomainError::InvalidRange { start: now, end: now })?;
    let response = state
        .mutate(|j| {
            let activity = resolve(j, &body.activity)?;
            let outcome = j.toggle(date, &activity, now)?;
            let interval = match &outcome {
                timestream_core::ToggleOutcome::Stopped(iv) => Some(iv.clone()),
                _ => None,
            };
            Ok(ToggleResponse {
                status: outcome.label().to_string(),
                interval,
                day: DayView::of(j, date),
            })
        })
        .await?;
    Ok(Json(response))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveEntry {
    pub date: NaiveDate,
    pub activity: ActivityId,
    pub started_at: u16,
}

async fn active(State(state): Shared) -> Json<Vec<ActiveEntry>> {
    let journal = state.snapshot();
    Json(
        journal
            .active_timers()
            .into_iter()
            .map(|(date, activity, started_at)| ActiveEntry {
                date,
                activity: activity.clone(),
                started_at,
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinsResponse {
    pub planned: BinMatrix,
    pub logged: BinMatrix,
}

async fn bins(State(state): Shared, Segments(date): Segments<String>) -> ApiResult<BinsResponse> {
    let date = parse_date(&date)?;
    let journal = state.snapshot();
    Ok(Json(BinsResponse {
        planned: journal.bin_day(date, IntervalKind::Planned),
        logged: journal.bin_day(date, IntervalKind::Logged),
    }))
}

#[derive(Debug, Default, Deserialize)]
pub struct ViewQuery {
    order: Option<String>,
    visible: Option<String>,
    smooth: Option<String>,
    samples: Option<u32>,
    width: Option<u32>,
    height: Option<u32>,
}

fn id_list(text: &str) -> Vec<ActivityId> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(ActivityId::from)
        .collect()
}

/// Session view settings from query parameters. `order` may list just the
/// activities to bring forward; the rest follow in stored order. An empty
/// `visible` hides everything.
pub fn layout_config(journal: &Journal, q: &ViewQuery) -> Result<LayoutConfig, ApiError> {
    let universe = journal.universe();
    let mut order = q.order.as_deref().map(id_list).unwrap_or_default();
    if let Some(unknown) = order.iter().find(|id| !universe.contains(id)) {
        return Err(DomainError::UnknownActivity(unknown.clone()).into());
    }
    for id in &universe {
        if !order.contains(id) {
            order.push(id.clone());
        }
    }
    let mut config = LayoutConfig::new(order);
    if let Some(visible) = &q.visible {
        config = set_filter(&config, id_list(visible).into_iter().collect::<BTreeSet<_>>())?;
    }
    if let Some(smooth) = &q.smooth {
        config.smoothing = match smooth.as_str() {
            "none" | "linear" | "false" | "0" => Smoothing::None,
            "cubic" | "shape_preserving_cubic" | "true" | "1" => Smoothing::ShapePreservingCubic,
            other => return Err(ApiError::malformed(format!("unknown smoothing {other:?}"))),
        };
    }
    if let Some(samples) = q.samples {
        config.samples_per_bin = samples;
    }
    config.validate()?;
    Ok(config)
}

async fn layout(State(state): Shared, Segments(date): Segments<String>, Params(q): Params<ViewQuery>) -> ApiResult<WaveGeometry> {
    let date = parse_date(&date)?;
    let journal = state.snapshot();
    let config = layout_config(&journal, &q)?;
    Ok(Json(day_layout(&journal.day(date), &journal.universe(), &config)?))
}

#[derive(Debug, Default, Deserialize)]
pub struct DetectorQuery {
    tolerance: Option<u32>,
    theta: Option<f64>,
}

async fn patterns(
    State(state): Shared,
    Segments(date): Segments<String>,
    Params(q): Params<DetectorQuery>,
) -> ApiResult<Vec<PatternEvent>> {
    let date = parse_date(&date)?;
    let mut config = DetectorConfig::default();
    if let Some(t) = q.tolerance {
        config.duration_tolerance_minutes = t;
    }
    if let Some(theta) = q.theta {
        config.replacement_overlap_fraction = theta;
    }
    config.validate().map_err(ApiError::malformed)?;
    Ok(Json(detect_patterns(&state.snapshot().day(date), &config)))
}

async fn score(State(state): Shared, Segments(date): Segments<String>) -> ApiResult<AdherenceReport> {
    let date = parse_date(&date)?;
    let journal = state.snapshot();
    Ok(Json(day_adherence(&journal.day(date), &journal.universe())))
}

async fn svg(
    State(state): Shared,
    Segments(date): Segments<String>,
    Params(q): Params<ViewQuery>,
) -> Result<impl IntoResponse, ApiError> {
    let date = parse_date(&date)?;
    let journal = state.snapshot();
    let config = layout_config(&journal, &q)?;
    let geometry = day_layout(&journal.day(date), &journal.universe(), &config)?;
    let doc = render_svg(&geometry, &journal.palette(), q.width.unwrap_or(960), q.height.unwrap_or(360))?;
    Ok((StatusCode::OK, [(header::CONTENT_TYPE, "image/svg+xml")], doc))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatedGeometry {
    pub date: NaiveDate,
    pub geometry: WaveGeometry,
}

async fn week(
    State(state): Shared,
    Segments(date): Segments<String>,
    Params(q): Params<ViewQuery>,
) -> ApiResult<Vec<DatedGeometry>> {
    let first = parse_date(&date)?;
    let journal = state.snapshot();
    let config = layout_config(&journal, &q)?;
    let dates: Vec<NaiveDate> = (0..7)
        .map(|i| first.checked_add_days(Days::new(i)))
        .collect::<Option<_>>()
        .ok_or_else(|| ApiError::malformed("week runs past the last representable date"))?;
    let days: Vec<DayRecord> = dates.iter().map(|&d| journal.day(d)).collect();
    let layouts = week_layouts(&days, &journal.universe(), &config)?;
    Ok(Json(
        dates
            .into_iter()
            .zip(layouts)
            .map(|(date, geometry)| DatedGeometry { date, geometry })
            .collect(),
    ))
}

async fn list_goals(State(state): Shared) -> Json<Vec<BankableGoal>> {
    Json(state.snapshot().goals.clone())
}

#[derive(Deserialize)]
struct NewGoal {
    activity: String,
    target_minutes: u32,
    date: NaiveDate,
}

async fn create_goal(State(state): Shared, Body(body): Body<NewGoal>) -> ApiResult<BankableGoal> {
    let goal = state
        .mutate(|j| {
            let activity = resolve(j, &body.activity)?;
            Ok(j.add_goal(&activity, body.target_minutes, body.date)?)
        })
        .await?;
    Ok(Json(goal))
}

#[derive(Deserialize)]
struct ProgressQuery {
    date: Option<String>,
}

async fn goal_progress(
    State(state): Shared,
    Segments(id): Segments<String>,
    Params(q): Params<ProgressQuery>,
) -> ApiResult<GoalProgress> {
    let date = q.date.as_deref().map(parse_date).transpose()?;
    Ok(Json(state.snapshot().goal_progress(&id, date)?))
}
