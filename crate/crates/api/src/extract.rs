use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{FromRequest, FromRequestParts, Path, Query, Request};
use axum::http::request::Parts;
use axum::Json;
use chrono::NaiveDate;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use timestream_core::time::parse_clock;

use crate::error::ApiError;

/// JSON body whose rejections use the API error shape.
pub struct Body<T>(pub T);

impl<S, T> FromRequest<S> for Body<T>
where
    Json<T>: FromRequest<S, Rejection = JsonRejection>,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(e) => Err(ApiError::malformed(e.body_text())),
        }
    }
}

pub struct Params<T>(pub T);

impl<S, T> FromRequestParts<S> for Params<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        match Query::<T>::from_request_parts(parts, state).await {
            Ok(Query(v)) => Ok(Params(v)),
            Err(e) => Err(ApiError::malformed(QueryRejection::body_text(&e))),
        }
    }
}

pub struct Segments<T>(pub T);

impl<S, T> FromRequestParts<S> for Segments<T>
where
    T: DeserializeOwned + Send,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        match Path::<T>::from_request_parts(parts, state).await {
            Ok(Path(v)) => Ok(Segments(v)),
            Err(e) => Err(ApiError::malformed(PathRejection::body_text(&e))),
        }
    }
}

pub fn parse_date(text: &str) -> Result<NaiveDate, ApiError> {
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .map_err(|_| ApiError::malformed(format!("invalid date {text:?}, expected YYYY-MM-DD")))
}

/// Minutes from midnight, given either as a number or as `"HH:MM"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Clock {
    Minutes(u32),
    Text(String),
}

impl Clock {
    pub fn minutes(&self) -> Result<u32, ApiError> {
        match self {
            Clock::Minutes(m) => Ok(*m),
            Clock::Text(t) => parse_clock(t)
                .map(u32::from)
                .map_err(|e| ApiError::malformed(e.to_string())),
        }
    }
}
