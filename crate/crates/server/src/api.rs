use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, RawQuery, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use phytobase_core::model::{AilmentCode, PlantRecord};
use phytobase_core::narration::{
    build_narration, media_manifest, render_narration_plaintext, LanguageRegistry, LanguageTag,
    MediaManifest,
};
use phytobase_core::pql::{
    evaluate_query, parse_query, structured_search, PlantSummary, ResultSet, SearchCriteria,
};
use phytobase_core::status::StatusReport;
use phytobase_core::store::{Database, Format, Selection};
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, ErrorCode};

#[derive(Clone)]
pub struct AppState {
    pub db: Arc<Database>,
    pub languages: Arc<LanguageRegistry>,
    pub default_language: LanguageTag,
}

impl AppState {
    pub fn new(db: Database, default_language: LanguageTag) -> Result<Self, ApiError> {
        let languages = LanguageRegistry::builtin()?;
        languages.catalog(&default_language)?;
        Ok(AppState {
            db: Arc::new(db),
            languages: Arc::new(languages),
            default_language,
        })
    }
}

/// Outcome of a PUT or DELETE.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mutation {
    pub id: String,
    pub revision: u64,
}

pub fn app(state: AppState) -> Router {
    Router::new()
        .route("/plants", get(list_plants))
        .route(
            "/plants/{id}",
            get(get_plant).put(put_plant).delete(delete_plant),
        )
        .route("/plants/{id}/narration", get(narration))
        .route("/plants/{id}/media", get(media))
        .route("/query", post(query))
        .route("/report/status", get(report))
        .route("/export", get(export))
        .route("/meta/codes", get(codes))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .method_not_allowed_fallback(|| async {
            ApiError::new(
                ErrorCode::MethodNotAllowed,
                "method not allowed on this endpoint",
            )
        })
        .with_state(state)
}

fn query_pairs(raw: Option<&str>) -> Vec<(String, String)> {
    form_urlencoded::parse(raw.unwrap_or("").as_bytes())
        .into_owned()
        .collect()
}

/// Picks the allowed parameters out of a query string; anything else is a
/// bad request.
fn single_params<const N: usize>(
    raw: Option<&str>,
    allowed: [&str; N],
) -> Result<[Option<String>; N], ApiError> {
    let mut out: [Option<String>; N] = std::array::from_fn(|_| None);
    for (key, value) in query_pairs(raw) {
        let i = allowed
            .iter()
            .position(|a| *a == key)
            .ok_or_else(|| ApiError::bad_request(format!("unknown parameter {key:?}")))?;
        if out[i].replace(value).is_some() {
            return Err(ApiError::bad_request(format!(
                "parameter {key:?} given more than once"
            )));
        }
    }
    Ok(out)
}

async fn list_plants(
    State(state): State<AppState>,
    RawQuery(raw): RawQuery,
) -> Result<Json<Vec<PlantSummary>>, ApiError> {
    let pairs = query_pairs(raw.as_deref());
    let store = state.db.read();
    if pairs.is_empty() {
        return Ok(Json(store.records().map(PlantSummary::of).collect()));
    }
    let criteria = SearchCriteria::from_pairs(pairs)?;
    let results = structured_search(&criteria, &store)?;
    Ok(Json(PlantSummary::from_results(&results, &store)))
}

async fn get_plant(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<PlantRecord>, ApiError> {
    Ok(Json(state.db.read().get(&id)?.clone()))
}

async fn put_plant(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<Mutation>, ApiError> {
    let mut record: PlantRecord = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("invalid record JSON: {e}")))?;
    if record.id.is_empty() {
        record.id = id.clone();
    } else if record.id != id {
        return Err(ApiError::bad_request(format!(
            "record id {:?} does not match path id {id:?}",
            record.id
        )));
    }
    let revision = state.db.upsert(record)?;
    Ok(Json(Mutation { id, revision }))
}

async fn delete_plant(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Mutation>, ApiError> {
    let revision = state.db.delete(&id)?;
    Ok(Json(Mutation { id, revision }))
}

async fn narration(
    State(state): State<AppState>,
    Path(id): Path<String>,
    RawQuery(raw): RawQuery,
) -> Result<Response, ApiError> {
    let [lang] = single_params(raw.as_deref(), ["lang"])?;
    let language = match lang {
        Some(code) => state.languages.lookup(&code)?,
        None => state.default_language.clone(),
    };
    let store = state.db.read();
    let record = store.get(&id)?;
    let script = build_narration(record, &language, &state.languages, store.codes())?
        .with_revision(store.revision());
    let text = render_narration_plaintext(&script);
    Ok((
        [
            (
                header::CONTENT_TYPE,
                "text/plain; charset=utf-8".to_string(),
            ),
            (header::CONTENT_LANGUAGE, language.to_string()),
        ],
        text,
    )
        .into_response())
}

async fn media(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<MediaManifest>, ApiError> {
    let store = state.db.read();
    Ok(Json(media_manifest(store.get(&id)?).manifest()))
}

async fn query(State(state): State<AppState>, body: Bytes) -> Result<Json<ResultSet>, ApiError> {
    let text =
        std::str::from_utf8(&body).map_err(|_| ApiError::bad_request("query body is not UTF-8"))?;
    let q = parse_query(text)?;
    Ok(Json(evaluate_query(&q, &state.db.read())?))
}

async fn report(State(state): State<AppState>) -> Json<StatusReport> {
    Json(state.db.read().status_report())
}

async fn export(
    State(state): State<AppState>,
    RawQuery(raw): RawQuery,
) -> Result<Response, ApiError> {
    let [ailment, format] = single_params(raw.as_deref(), ["ailment", "format"])?;
    let format = match format {
        Some(f) => f.parse::<Format>().map_err(ApiError::bad_request)?,
        None => Format::Json,
    };
    let selection = ailment.map(Selection::Ailment);
    let bytes = state.db.read().export_records(selection.as_ref(), format)?;
    let content_type = match format {
        Format::Csv => "text/csv; charset=utf-8",
        Format::Json => "application/json",
    };
    Ok(([(header::CONTENT_TYPE, content_type)], bytes).into_response())
}

async fn codes(State(state): State<AppState>) -> Json<Vec<AilmentCode>> {
    Json(state.db.read().codes().iter().collect())
}
