use std::collections::BTreeSet;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use phytobase_core::fixtures;
use phytobase_core::model::{PlantRecord, UseEntry};
use phytobase_core::narration::{
    build_narration, media_manifest, render_narration_plaintext, LanguageRegistry, LanguageTag,
};
use phytobase_core::pql::{evaluate_query, parse_query, PlantSummary};
use phytobase_core::status::PaperStatus;
use phytobase_core::store::{Database, Format, RecordStore, Selection};
use phytobase_server::{app, serve_on, ApiError, AppState, ErrorCode, Mutation};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tower::ServiceExt;

fn state_with(records: Vec<PlantRecord>) -> AppState {
    let db = Database::in_memory(RecordStore::with_records(records).unwrap());
    AppState::new(db, LanguageTag::english()).unwrap()
}

fn survey_app() -> Router {
    app(state_with(fixtures::survey_extract()))
}

struct Reply {
    status: StatusCode,
    content_type: String,
    body: Vec<u8>,
}

impl Reply {
    fn json<T: serde::de::DeserializeOwned>(&self) -> T {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| {
            panic!("{e}: {}", String::from_utf8_lossy(&self.body));
        })
    }

    fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }

    /// Every non-2xx reply must be a well-formed error from the closed set.
    fn error(&self) -> ApiError {
        let e: ApiError = self.json();
        assert!(ErrorCode::ALL.contains(&e.code));
        assert_eq!(e.status, self.status.as_u16());
        assert_eq!(e.code.status(), self.status);
        e
    }
}

async fn send(app: &Router, method: Method, uri: &str, body: impl Into<Body>) -> Reply {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .body(body.into())
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let content_type = response
        .headers()
        .get(header::CONTENT_TYPE)
        .map(|v| v.to_str().unwrap().to_string())
        .unwrap_or_default();
    let body = response
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    Reply {
        status,
        content_type,
        body,
    }
}

async fn get(app: &Router, uri: &str) -> Reply {
    send(app, Method::GET, uri, Body::empty()).await
}

fn summary_ids(reply: &Reply) -> Vec<String> {
    assert_eq!(reply.status, StatusCode::OK, "{}", reply.text());
    reply
        .json::<Vec<PlantSummary>>()
        .into_iter()
        .map(|s| s.id)
        .collect()
}

#[tokio::test]
async fn search_inf_returns_three_summaries() {
    let reply = get(&survey_app(), "/plants?ailment=INF").await;
    assert_eq!(
        summary_ids(&reply),
        [
            "elytraria-marginata",
            "euphorbia-laterifolia",
            "ficus-capensis"
        ]
    );
    let summaries: Vec<PlantSummary> = reply.json();
    assert!(summaries
        .iter()
        .all(|s| s.ailments.contains(&"INF".to_string())));
}

#[tokio::test]
async fn search_combines_criteria() {
    let app = survey_app();
    assert_eq!(
        summary_ids(&get(&app, "/plants?ailment=INF&part_used=Leaves").await),
        ["euphorbia-laterifolia", "ficus-capensis"]
    );
    assert_eq!(
        summary_ids(&get(&app, "/plants?ailment=wi").await),
        ["acalypha-villicaulis", "ageratum-conyzoides"]
    );
    assert_eq!(
        summary_ids(&get(&app, "/plants?name=jinja").await),
        ["zingiber-officinale"]
    );
    assert_eq!(
        summary_ids(&get(&app, "/plants?family=Zingiberaceae").await),
        ["zingiber-officinale"]
    );
    assert_eq!(
        summary_ids(&get(&app, "/plants?area_of_origin=Nigeria&ailment=AST").await),
        ["zingiber-officinale"]
    );
}

#[tokio::test]
async fn plants_without_filters_lists_everything() {
    let ids = summary_ids(&get(&survey_app(), "/plants").await);
    let expected: Vec<String> = RecordStore::with_records(fixtures::survey_extract())
        .unwrap()
        .ids()
        .map(str::to_string)
        .collect();
    assert_eq!(ids, expected);
    assert_eq!(ids.len(), 8);
}

#[tokio::test]
async fn bad_search_parameters() {
    let app = survey_app();
    let cases = [
        (
            "/plants?ailment=INF&ailment=WI",
            ErrorCode::DuplicateCriterion,
        ),
        ("/plants?colour=red", ErrorCode::UnknownField),
        ("/plants?description=ginger", ErrorCode::UnknownField),
    ];
    for (uri, code) in cases {
        let reply = get(&app, uri).await;
        assert_eq!(reply.error().code, code, "{uri}");
    }
}

#[tokio::test]
async fn query_endpoint_returns_the_library_result() {
    let app = survey_app();
    let text = "SELECT * FROM plants WHERE ailment = 'WI'";
    let reply = send(&app, Method::POST, "/query", text).await;
    assert_eq!(reply.status, StatusCode::OK);
    let body: serde_json::Value = reply.json();
    assert_eq!(body["rows"].as_array().unwrap().len(), 2);
    assert_eq!(body["total"], 2);

    let store = RecordStore::with_records(fixtures::survey_extract()).unwrap();
    let expected = evaluate_query(&parse_query(text).unwrap(), &store).unwrap();
    assert_eq!(body, serde_json::to_value(&expected).unwrap());
}

#[tokio::test]
async fn malformed_query_reports_parse_error_with_span() {
    let app = survey_app();
    for text in [
        "SELECT * FROM plants WHERE ailment = 'WI",
        "SELECT * FORM plants",
        "SELECT * FROM plants WHERE",
    ] {
        let reply = send(&app, Method::POST, "/query", text).await;
        let e = reply.error();
        assert_eq!(e.code, ErrorCode::ParseError, "{text}");
        assert_eq!(e.status, 400);
        assert_eq!(e.span, parse_query(text).unwrap_err().span(), "{text}");
        assert!(e.span.is_some());
    }
    let reply = send(&app, Method::POST, "/query", "SELECT colour FROM plants").await;
    let e = reply.error();
    assert_eq!(e.code, ErrorCode::UnknownField);
    assert_eq!(e.span, Some((7, 13)));

    let reply = send(&app, Method::POST, "/query", vec![0xff, 0xfe]).await;
    assert_eq!(reply.error().code, ErrorCode::BadRequest);
}

#[tokio::test]
async fn get_put_delete_round_trip() {
    let app = survey_app();
    let ginger = fixtures::survey_extract()
        .into_iter()
        .find(|r| r.id == "zingiber-officinale")
        .unwrap();
    let reply = get(&app, "/plants/zingiber-officinale").await;
    assert_eq!(reply.json::<PlantRecord>(), ginger);

    let missing = get(&app, "/plants/no-such-plant").await;
    assert_eq!(missing.error().code, ErrorCode::NotFound);

    let mut garlic = PlantRecord::new("Allium cepa L.");
    garlic.id = String::new();
    garlic.family = "Amaryllidaceae".into();
    garlic.uses.push(UseEntry::new("HEP", []));
    let body = serde_json::to_vec(&garlic).unwrap();
    let reply = send(&app, Method::PUT, "/plants/allium-cepa", body).await;
    assert_eq!(reply.status, StatusCode::OK, "{}", reply.text());
    let first: Mutation = reply.json();
    assert_eq!(first.id, "allium-cepa");

    let stored: PlantRecord = get(&app, "/plants/allium-cepa").await.json();
    assert_eq!(stored.family, "Amaryllidaceae");
    assert_eq!(
        summary_ids(&get(&app, "/plants?ailment=HEP").await),
        ["allium-cepa", "zingiber-officinale"]
    );

    let reply = send(&app, Method::DELETE, "/plants/allium-cepa", Body::empty()).await;
    let second: Mutation = reply.json();
    assert!(second.revision > first.revision);
    assert_eq!(
        get(&app, "/plants/allium-cepa").await.error().code,
        ErrorCode::NotFound
    );
    let again = send(&app, Method::DELETE, "/plants/allium-cepa", Body::empty()).await;
    assert_eq!(again.error().code, ErrorCode::NotFound);
}

#[tokio::test]
async fn put_rejects_bad_records() {
    let app = survey_app();
    let reply = send(&app, Method::PUT, "/plants/x", "{not json").await;
    assert_eq!(reply.error().code, ErrorCode::BadRequest);

    let mut r = PlantRecord::new("Allium cepa L.");
    let body = serde_json::to_vec(&r).unwrap();
    let reply = send(&app, Method::PUT, "/plants/other-id", body).await;
    assert_eq!(reply.error().code, ErrorCode::BadRequest);

    r.uses.push(UseEntry::new("XYZ", []));
    let body = serde_json::to_vec(&r).unwrap();
    let reply = send(&app, Method::PUT, "/plants/allium-cepa", body).await;
    let e = reply.error();
    assert_eq!(e.code, ErrorCode::InvalidRecord);
    assert_eq!(e.status, 422);
    assert_eq!(
        get(&app, "/plants/allium-cepa").await.status,
        StatusCode::NOT_FOUND
    );
}

#[tokio::test]
async fn status_report_matches_library() {
    let app = app(state_with(fixtures::trade_opinions()));
    let reply = get(&app, "/report/status").await;
    assert_eq!(reply.status, StatusCode::OK);
    let body: serde_json::Value = reply.json();
    let expected = RecordStore::with_records(fixtures::trade_opinions())
        .unwrap()
        .status_report();
    assert_eq!(expected.count(PaperStatus::Endangered), 10);
    assert_eq!(expected.count(PaperStatus::Threatened), 7);
    assert_eq!(body, serde_json::to_value(&expected).unwrap());
}

#[tokio::test]
async fn narration_is_plain_text_in_the_requested_language() {
    let app = survey_app();
    let store = RecordStore::with_records(fixtures::survey_extract()).unwrap();
    let registry = LanguageRegistry::builtin().unwrap();
    let ginger = store.get("zingiber-officinale").unwrap();
    for (uri, lang) in [
        ("/plants/zingiber-officinale/narration", "en"),
        ("/plants/zingiber-officinale/narration?lang=yo", "yo"),
        ("/plants/zingiber-officinale/narration?lang=fr", "fr"),
    ] {
        let reply = get(&app, uri).await;
        assert_eq!(reply.status, StatusCode::OK, "{uri}");
        assert!(reply.content_type.starts_with("text/plain"));
        let tag = LanguageTag::new(lang).unwrap();
        let script = build_narration(ginger, &tag, &registry, store.codes()).unwrap();
        assert_eq!(reply.text(), render_narration_plaintext(&script), "{uri}");
    }
    let english = get(&app, "/plants/zingiber-officinale/narration")
        .await
        .text();
    assert!(english.contains("Asthma"));
    assert!(english.contains("Cancer"));

    let cases = [
        (
            "/plants/zingiber-officinale/narration?lang=de",
            ErrorCode::UnknownLanguage,
        ),
        (
            "/plants/zingiber-officinale/narration?lang=english",
            ErrorCode::UnknownLanguage,
        ),
        (
            "/plants/zingiber-officinale/narration?lang=FR",
            ErrorCode::UnknownLanguage,
        ),
        (
            "/plants/zingiber-officinale/narration?lang=yo&lang=ha",
            ErrorCode::BadRequest,
        ),
        (
            "/plants/zingiber-officinale/narration?voice=x",
            ErrorCode::BadRequest,
        ),
        ("/plants/no-such-plant/narration", ErrorCode::NotFound),
    ];
    for (uri, code) in cases {
        assert_eq!(get(&app, uri).await.error().code, code, "{uri}");
    }
}

#[tokio::test]
async fn default_narration_language_comes_from_state() {
    let db = Database::in_memory(RecordStore::with_records(fixtures::survey_extract()).unwrap());
    let app = app(AppState::new(db, LanguageTag::yoruba()).unwrap());
    let default = get(&app, "/plants/zingiber-officinale/narration")
        .await
        .text();
    let yoruba = get(&app, "/plants/zingiber-officinale/narration?lang=yo")
        .await
        .text();
    assert_eq!(default, yoruba);

    let db = Database::in_memory(RecordStore::new());
    let e = AppState::new(db, LanguageTag::new("de").unwrap())
        .err()
        .unwrap();
    assert_eq!(e.code, ErrorCode::UnknownLanguage);
}

#[tokio::test]
async fn media_manifest_matches_library() {
    let records = fixtures::full_corpus();
    let app = app(state_with(records.clone()));
    for r in records.iter().take(10) {
        let reply = get(&app, &format!("/plants/{}/media", r.id)).await;
        assert_eq!(reply.status, StatusCode::OK);
        let body: serde_json::Value = reply.json();
        assert_eq!(
            body,
            serde_json::to_value(media_manifest(r).manifest()).unwrap()
        );
    }
}

#[tokio::test]
async fn export_by_ailment_as_csv() {
    let app = survey_app();
    let reply = get(&app, "/export?ailment=WI&format=csv").await;
    assert_eq!(reply.status, StatusCode::OK);
    assert!(reply.content_type.starts_with("text/csv"));
    let store = RecordStore::with_records(fixtures::survey_extract()).unwrap();
    let expected = store
        .export_records(Some(&Selection::Ailment("WI".into())), Format::Csv)
        .unwrap();
    assert_eq!(reply.body, expected);

    let mut copy = RecordStore::new();
    copy.import_records(&reply.body, Format::Csv).unwrap();
    let ids: Vec<&str> = copy.ids().collect();
    assert_eq!(ids, ["acalypha-villicaulis", "ageratum-conyzoides"]);
}

#[tokio::test]
async fn export_defaults_and_errors() {
    let app = survey_app();
    let reply = get(&app, "/export").await;
    assert_eq!(reply.content_type, "application/json");
    assert_eq!(reply.json::<Vec<PlantRecord>>().len(), 8);

    let cases = [
        ("/export?ailment=XYZ", ErrorCode::UnknownCode),
        ("/export?format=xml", ErrorCode::BadRequest),
        ("/export?ailment=WI&ailment=INF", ErrorCode::BadRequest),
    ];
    for (uri, code) in cases {
        assert_eq!(get(&app, uri).await.error().code, code, "{uri}");
    }
}

#[tokio::test]
async fn code_table_is_published() {
    let reply = get(&survey_app(), "/meta/codes").await;
    let codes: Vec<serde_json::Value> = reply.json();
    assert_eq!(codes.len(), 20);
    assert!(codes
        .iter()
        .any(|c| c["code"] == "WI" && c["full_name"] == "Women Infertility"));
}

#[tokio::test]
async fn unknown_routes_and_methods_use_the_error_shape() {
    let app = survey_app();
    assert_eq!(
        get(&app, "/nowhere").await.error().code,
        ErrorCode::NotFound
    );
    let reply = send(&app, Method::POST, "/plants", Body::empty()).await;
    assert_eq!(reply.error().code, ErrorCode::MethodNotAllowed);
    let reply = send(&app, Method::GET, "/query", Body::empty()).await;
    assert_eq!(reply.error().code, ErrorCode::MethodNotAllowed);
}

fn seeded_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let db = Database::open(dir.path(), false).unwrap();
    for r in fixtures::survey_extract() {
        db.upsert(r).unwrap();
    }
    db.compact().unwrap();
    dir
}

fn dir_contents(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[tokio::test]
async fn read_only_rejects_mutations_and_never_writes() {
    let dir = seeded_dir();
    let before = dir_contents(dir.path());
    let db = Database::open(dir.path(), true).unwrap();
    let app = app(AppState::new(db, LanguageTag::english()).unwrap());

    let body = serde_json::to_vec(&PlantRecord::new("Allium cepa L.")).unwrap();
    let put = send(&app, Method::PUT, "/plants/allium-cepa", body).await;
    assert_eq!(put.error().code, ErrorCode::ReadOnly);
    assert_eq!(put.status, StatusCode::FORBIDDEN);
    let delete = send(
        &app,
        Method::DELETE,
        "/plants/zingiber-officinale",
        Body::empty(),
    )
    .await;
    assert_eq!(delete.error().code, ErrorCode::ReadOnly);

    assert_eq!(
        summary_ids(&get(&app, "/plants?ailment=INF").await).len(),
        3
    );
    assert_eq!(
        get(&app, "/plants/zingiber-officinale").await.status,
        StatusCode::OK
    );
    assert_eq!(dir_contents(dir.path()), before);
}

#[tokio::test]
async fn concurrent_readers_and_writers() {
    let app = survey_app();
    let mut tasks = Vec::new();
    let writers = [
        "Allium cepa L.",
        "Allium porrum L.",
        "Allium fistulosum L.",
        "Allium ursinum L.",
    ];
    for i in 0..16 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            if i % 4 == 0 {
                let mut r = PlantRecord::new(writers[i / 4]);
                r.uses.push(UseEntry::new("INF", []));
                let body = serde_json::to_vec(&r).unwrap();
                let reply = send(&app, Method::PUT, &format!("/plants/{}", r.id), body).await;
                assert_eq!(reply.status, StatusCode::OK, "{}", reply.text());
            } else {
                let ids = summary_ids(&get(&app, "/plants?ailment=INF").await);
                assert!(ids.len() >= 3);
            }
        }));
    }
    for t in tasks {
        t.await.unwrap();
    }
    let ids: BTreeSet<String> = summary_ids(&get(&app, "/plants?ailment=INF").await)
        .into_iter()
        .collect();
    assert_eq!(ids.len(), 7);
}

async fn raw_get(addr: std::net::SocketAddr, path: &str) -> String {
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    let request = format!("GET {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n");
    stream.write_all(request.as_bytes()).await.unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).await.unwrap();
    response
}

#[tokio::test]
async fn live_server_compacts_on_shutdown() {
    let dir = seeded_dir();
    let db = Database::open(dir.path(), false).unwrap();
    let state = AppState::new(db, LanguageTag::english()).unwrap();
    state.db.delete("allium-sativum").unwrap();
    let log = dir.path().join(phytobase_core::store::persist::LOG_FILE);
    assert!(std::fs::metadata(&log).unwrap().len() > 0);

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(serve_on(listener, state, async {
        let _ = stopped.await;
    }));

    let response = raw_get(addr, "/plants?ailment=INF").await;
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains("ficus-capensis"));

    stop.send(()).unwrap();
    server.await.unwrap().unwrap();
    assert_eq!(std::fs::metadata(&log).unwrap().len(), 0);

    let reopened = Database::open(dir.path(), true).unwrap();
    assert!(!reopened.read().contains("allium-sativum"));
    assert_eq!(reopened.read().len(), 7);
}
