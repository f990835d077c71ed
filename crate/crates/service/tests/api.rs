use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use fca_core::datasets;
use fca_core::exploration::{Answer, ExplorationSession};
use fca_core::io::ContextJson;
use fca_service::{router, Store};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

fn transport_json() -> Value {
    serde_json::to_value(ContextJson::from(&datasets::transport())).unwrap()
}

fn hydroplane() -> Value {
    json!({"counterexample": {"label": "hydroplane", "attributes": ["air", "water"]}})
}

async fn open(app: &Router) -> (String, Value) {
    let (st, v) = call(app, Method::POST, "/contexts", Some(transport_json())).await;
    assert_eq!(st, StatusCode::CREATED);
    let cid = v["contextId"].as_str().unwrap().to_string();
    let (st, v) = call(app, Method::POST, "/sessions", Some(json!({"contextId": cid}))).await;
    assert_eq!(st, StatusCode::CREATED);
    (v["sessionId"].as_str().unwrap().to_string(), v)
}

#[tokio::test]
async fn transport_dialog_over_http() {
    let app = router(Arc::new(Store::in_memory()));
    let (sid, v) = open(&app).await;
    assert_eq!(v["pending"], json!({"premise": ["underwater"], "conclusion": ["water"]}));
    assert_eq!(v["state"], "awaiting_answer");

    let uri = format!("/sessions/{sid}/answer");
    let (st, v) = call(&app, Method::POST, &uri, Some(json!("accept"))).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["pending"], json!({"premise": ["air", "water"], "conclusion": ["surface", "underwater"]}));
    let (st, v) = call(&app, Method::POST, &uri, Some(hydroplane())).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["pending"], json!({"premise": ["air", "water", "underwater"], "conclusion": ["surface"]}));

    loop {
        let (st, v) = call(&app, Method::POST, &uri, Some(json!("accept"))).await;
        assert_eq!(st, StatusCode::OK);
        if v["state"] == "finished" {
            assert!(v["pending"].is_null());
            break;
        }
    }
    let (st, _) = call(&app, Method::POST, &uri, Some(json!("accept"))).await;
    assert_eq!(st, StatusCode::CONFLICT);
}

#[tokio::test]
async fn api_transcript_equals_library_transcript() {
    let app = router(Arc::new(Store::in_memory()));
    let (sid, _) = open(&app).await;
    let mut lib = ExplorationSession::start(datasets::transport()).unwrap();
    let answers = [json!("accept"), hydroplane(), json!("accept"), json!("accept")];
    for a in answers {
        let (st, _) = call(&app, Method::POST, &format!("/sessions/{sid}/answer"), Some(a.clone())).await;
        assert_eq!(st, StatusCode::OK);
        lib.answer(serde_json::from_value::<Answer>(a).unwrap()).unwrap();
        let (_, got) = call(&app, Method::GET, &format!("/sessions/{sid}"), None).await;
        assert_eq!(got.to_string(), lib.to_json().to_string());
    }
}

#[tokio::test]
async fn rejected_counterexamples() {
    let app = router(Arc::new(Store::in_memory()));
    let (sid, _) = open(&app).await;
    let uri = format!("/sessions/{sid}/answer");
    let boat = json!({"counterexample": {"label": "boat", "attributes": ["water"]}});
    let (st, v) = call(&app, Method::POST, &uri, Some(boat)).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["check"], json!({"has_premise": false, "has_conclusion": true, "violates": false}));
    assert!(v["error"].as_str().unwrap().contains("does not violate"));

    let unknown = json!({"counterexample": {"label": "x", "attributes": ["wings"]}});
    let (st, _) = call(&app, Method::POST, &uri, Some(unknown)).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);

    let (_, s) = call(&app, Method::GET, &format!("/sessions/{sid}"), None).await;
    assert_eq!(s["transcript"], json!([]));
}

#[tokio::test]
async fn unknown_ids_and_deletion() {
    let app = router(Arc::new(Store::in_memory()));
    for (m, uri) in [
        (Method::GET, "/sessions/nope"),
        (Method::DELETE, "/sessions/nope"),
        (Method::GET, "/contexts/nope/lattice"),
        (Method::GET, "/contexts/nope/dg-base"),
    ] {
        assert_eq!(call(&app, m, uri, None).await.0, StatusCode::NOT_FOUND, "{uri}");
    }
    let (st, _) = call(&app, Method::POST, "/sessions/nope/answer", Some(json!("accept"))).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    let (st, _) = call(&app, Method::POST, "/sessions", Some(json!({"contextId": "nope"}))).await;
    assert_eq!(st, StatusCode::NOT_FOUND);

    let (sid, _) = open(&app).await;
    let (st, _) = call(&app, Method::DELETE, &format!("/sessions/{sid}"), None).await;
    assert_eq!(st, StatusCode::NO_CONTENT);
    assert_eq!(call(&app, Method::GET, &format!("/sessions/{sid}"), None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn lattice_and_base_endpoints() {
    let app = router(Arc::new(Store::in_memory()));
    let cxt = fca_core::io::to_cxt(&datasets::geometric_figures());
    let (st, v) = call(&app, Method::POST, "/contexts", Some(json!({"format": "cxt", "data": cxt}))).await;
    assert_eq!(st, StatusCode::CREATED);
    let cid = v["contextId"].as_str().unwrap();
    let (st, lat) = call(&app, Method::GET, &format!("/contexts/{cid}/lattice"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(lat["concepts"].as_array().unwrap().len(), 9);
    assert_eq!(lat["layout"].as_array().unwrap().len(), 9);
    for c in lat["covers"].as_array().unwrap() {
        let (lo, hi) = (c[0].as_u64().unwrap() as usize, c[1].as_u64().unwrap() as usize);
        assert!(lat["layout"][hi]["y"].as_f64() > lat["layout"][lo]["y"].as_f64());
    }
    let (_, base) = call(&app, Method::GET, &format!("/contexts/{cid}/dg-base"), None).await;
    assert_eq!(base.as_array().unwrap().len(), 3);

    let (st, _) = call(&app, Method::POST, "/contexts", Some(json!({"format": "cxt", "data": "garbage"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn journal_replay_restores_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("journal.jsonl");
    let (finished, open_one, deleted);
    let snapshot = {
        let app = router(Arc::new(Store::open(&path).unwrap()));
        let (a, _) = open(&app).await;
        let (b, _) = open(&app).await;
        let (c, _) = open(&app).await;
        for ans in [json!("accept"), hydroplane(), json!("accept")] {
            call(&app, Method::POST, &format!("/sessions/{a}/answer"), Some(ans)).await;
        }
        loop {
            let (_, v) = call(&app, Method::POST, &format!("/sessions/{b}/answer"), Some(json!("accept"))).await;
            if v["state"] == "finished" {
                break;
            }
        }
        call(&app, Method::DELETE, &format!("/sessions/{c}"), None).await;
        let mut snap = Vec::new();
        for id in [&a, &b] {
            snap.push(call(&app, Method::GET, &format!("/sessions/{id}"), None).await.1);
        }
        (open_one, finished, deleted) = (a, b, c);
        snap
    };

    let store = Arc::new(Store::open(&path).unwrap());
    assert_eq!(store.session_ids().len(), 2);
    let app = router(store);
    for (id, before) in [&open_one, &finished].into_iter().zip(&snapshot) {
        let (st, after) = call(&app, Method::GET, &format!("/sessions/{id}"), None).await;
        assert_eq!(st, StatusCode::OK);
        assert_eq!(&after, before);
    }
    assert_eq!(call(&app, Method::GET, &format!("/sessions/{deleted}"), None).await.0, StatusCode::NOT_FOUND);
    // new ids do not collide with replayed ones
    let (fresh, _) = open(&app).await;
    assert!(![&open_one, &finished, &deleted].contains(&&fresh));
    let (st, _) = call(&app, Method::POST, &format!("/sessions/{open_one}/answer"), Some(json!("accept"))).await;
    assert_eq!(st, StatusCode::OK);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_answers_on_one_session_are_serialized() {
    let app = router(Arc::new(Store::in_memory()));
    let (sid, _) = open(&app).await;
    let tasks: Vec<_> = (0..16)
        .map(|_| {
            let app = app.clone();
            let uri = format!("/sessions/{sid}/answer");
            tokio::spawn(async move { call(&app, Method::POST, &uri, Some(json!("accept"))).await.0 })
        })
        .collect();
    let mut ok = 0;
    for t in tasks {
        match t.await.unwrap() {
            StatusCode::OK => ok += 1,
            s => assert_eq!(s, StatusCode::CONFLICT),
        }
    }
    let mut lib = ExplorationSession::start(datasets::transport()).unwrap();
    let mut n = 0;
    while !lib.is_finished() {
        lib.answer(Answer::Accept).unwrap();
        n += 1;
    }
    assert_eq!(ok, n);
    let (_, got) = call(&app, Method::GET, &format!("/sessions/{sid}"), None).await;
    assert_eq!(got, lib.to_json());
}
