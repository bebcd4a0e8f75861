use std::collections::{BTreeMap, HashMap};
use std::future::Future;
use std::sync::Arc;

use axum::extract::{Path, Query, RawQuery, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use tokio::net::TcpListener;

use crate::error::{validation, Result, TelemetryError};
use crate::export::{export_feed, FeedFormat};
use crate::model::{default_field_labels, parse_timestamp, FeedQuery};
use crate::store::Store;

impl IntoResponse for TelemetryError {
    fn into_response(self) -> Response {
        let status = match self {
            TelemetryError::Validation(_) => StatusCode::BAD_REQUEST,
            TelemetryError::Unauthorized => StatusCode::UNAUTHORIZED,
            TelemetryError::NotFound(_) => StatusCode::NOT_FOUND,
            TelemetryError::Io(_) | TelemetryError::Serialization(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, self.to_string()).into_response()
    }
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/update", post(update).get(update))
        .route("/channels", post(create_channel).get(list_channels))
        .route("/channels/{id}/{file}", get(feed))
        .route("/channels/{id}/fields/{file}", get(field_feed))
        .with_state(store)
}

/// Serves until `shutdown` resolves, then lets in-flight requests finish.
pub async fn serve(
    listener: TcpListener,
    store: Arc<Store>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(store)).with_graceful_shutdown(shutdown).await
}

fn parse_update(pairs: &[(String, String)]) -> Result<(Option<String>, BTreeMap<usize, f64>, Option<String>)> {
    let mut key = None;
    let mut values = BTreeMap::new();
    let mut created_at = None;
    for (k, v) in pairs {
        match k.as_str() {
            "api_key" | "key" => key = Some(v.clone()),
            "created_at" => created_at = Some(v.clone()),
            _ => {
                if let Some(i) = k.strip_prefix("field").and_then(|n| n.parse::<usize>().ok()) {
                    let x: f64 = v.trim().parse().map_err(|_| validation(format!("{k}: '{v}' is not a number")))?;
                    values.insert(i, x);
                }
            }
        }
    }
    Ok((key, values, created_at))
}

/// Responds with the new entry id, or `0` on any failure.
async fn update(State(store): State<Arc<Store>>, RawQuery(query): RawQuery, body: String) -> Response {
    let pairs: Vec<(String, String)> = form_urlencoded::parse(query.unwrap_or_default().as_bytes())
        .chain(form_urlencoded::parse(body.as_bytes()))
        .map(|(k, v)| (k.into_owned(), v.into_owned()))
        .collect();
    let result = parse_update(&pairs).and_then(|(key, values, created_at)| {
        let key = key.ok_or(TelemetryError::Unauthorized)?;
        let ts = created_at.as_deref().map(parse_timestamp).transpose()?;
        store.write_update(&key, &values, ts)
    });
    match result {
        Ok(entry) => (StatusCode::OK, entry.entry_id.to_string()).into_response(),
        Err(TelemetryError::Unauthorized) => (StatusCode::UNAUTHORIZED, "0").into_response(),
        Err(TelemetryError::Validation(_)) => (StatusCode::BAD_REQUEST, "0").into_response(),
        Err(_) => (StatusCode::INTERNAL_SERVER_ERROR, "0").into_response(),
    }
}

#[derive(Debug, Deserialize)]
struct CreateChannel {
    name: String,
    #[serde(default)]
    field_labels: Option<Vec<String>>,
}

async fn create_channel(State(store): State<Arc<Store>>, Json(req): Json<CreateChannel>) -> Result<Response> {
    let labels = req.field_labels.unwrap_or_else(default_field_labels);
    let channel = store.create_channel(&req.name, labels)?;
    Ok((StatusCode::CREATED, Json(channel)).into_response())
}

/// Public channel metadata; write keys are never listed.
async fn list_channels(State(store): State<Arc<Store>>) -> Response {
    let list: Vec<serde_json::Value> = store
        .channels()
        .into_iter()
        .map(|c| serde_json::json!({ "id": c.channel_id, "name": c.name, "field_labels": c.field_labels }))
        .collect();
    Json(list).into_response()
}

fn split_file(file: &str) -> Result<(&str, FeedFormat)> {
    let (stem, ext) = file.rsplit_once('.').ok_or_else(|| TelemetryError::NotFound(file.to_string()))?;
    Ok((stem, ext.parse()?))
}

fn feed_query(params: &HashMap<String, String>, field: Option<usize>) -> Result<FeedQuery> {
    let num = |k: &str| -> Result<Option<u64>> {
        params
            .get(k)
            .map(|v| v.parse().map_err(|_| validation(format!("{k}: '{v}' is not a non-negative integer"))))
            .transpose()
    };
    Ok(FeedQuery {
        results: num("results")?.map(|n| n as usize),
        start: params.get("start").map(|s| parse_timestamp(s)).transpose()?,
        end: params.get("end").map(|s| parse_timestamp(s)).transpose()?,
        field,
        warmup_s: num("warmup")?,
    })
}

fn render(store: &Store, id: u64, format: FeedFormat, query: &FeedQuery) -> Result<Response> {
    let channel = store.channel(id)?;
    let entries = store.read_feed(id, query)?;
    let body = export_feed(&channel, &entries, format, query.field)?;
    Ok(([(header::CONTENT_TYPE, format.content_type())], body).into_response())
}

async fn feed(
    State(store): State<Arc<Store>>,
    Path((id, file)): Path<(u64, String)>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response> {
    let (stem, format) = split_file(&file)?;
    if stem != "feeds" {
        return Err(TelemetryError::NotFound(file));
    }
    render(&store, id, format, &feed_query(&params, None)?)
}

async fn field_feed(
    State(store): State<Arc<Store>>,
    Path((id, file)): Path<(u64, String)>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response> {
    let (stem, format) = split_file(&file)?;
    let field: usize = stem.parse().map_err(|_| TelemetryError::NotFound(file.clone()))?;
    render(&store, id, format, &feed_query(&params, Some(field))?)
}
