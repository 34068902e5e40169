use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use tower::ServiceExt;

use qvgr::cluster::{build_xi_seed, window_torus, QuantumSeed, VariableMode};
use qvgr::cartan::{FiniteType, HeightFunction};
use qvgr::characters::Characters;
use qvgr::monomial::Site;
use qvgr_cli::server::{router, ErrorBody, SeedView};

fn seed() -> QuantumSeed {
    let ty: FiniteType = "B3".parse().unwrap();
    let mut ch = Characters::new(window_torus(ty, 3, 0).unwrap());
    let xi = HeightFunction::standard(ch.torus().cartan(), 0);
    build_xi_seed(&mut ch, &xi, 3, VariableMode::Truncated).unwrap()
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_owned())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

#[tokio::test]
async fn get_mutate_undo() {
    let s = seed();
    let app = router(s.clone());

    let (st, body) = call(&app, "GET", "/seed", None).await;
    assert_eq!(st, StatusCode::OK);
    let v: SeedView = serde_json::from_slice(&body).unwrap();
    assert!(v.history.is_empty());
    assert_eq!(serde_json::to_value(&v.seed).unwrap(), serde_json::to_value(s.to_json()).unwrap());

    let (st, body) = call(&app, "POST", "/mutate", Some(r#"{"vertex":[1,0]}"#)).await;
    assert_eq!(st, StatusCode::OK);
    let v: SeedView = serde_json::from_slice(&body).unwrap();
    assert_eq!(v.history, vec![Site::new(1, 0)]);
    let want = s.mutate_at(Site::new(1, 0)).unwrap();
    assert_eq!(serde_json::to_value(&v.seed).unwrap(), serde_json::to_value(want.to_json()).unwrap());
    assert_eq!(v.quiver.arrows.len(), want.quiver().arrows().len());

    let (st, body) = call(&app, "POST", "/undo", None).await;
    assert_eq!(st, StatusCode::OK);
    let v: SeedView = serde_json::from_slice(&body).unwrap();
    assert!(v.history.is_empty());
    assert_eq!(serde_json::to_value(&v.seed).unwrap(), serde_json::to_value(s.to_json()).unwrap());
}

#[tokio::test]
async fn errors_are_json() {
    let app = router(seed());
    for (method, uri, body, code) in [
        ("POST", "/undo", None, StatusCode::CONFLICT),
        ("POST", "/mutate", Some(r#"{"vertex":[9,0]}"#), StatusCode::NOT_FOUND),
        ("POST", "/mutate", Some(r#"{"vertex":[1,-4]}"#), StatusCode::CONFLICT),
    ] {
        let (st, b) = call(&app, method, uri, body).await;
        assert_eq!(st, code, "{uri} {body:?}");
        let e: ErrorBody = serde_json::from_slice(&b).unwrap();
        assert!(!e.error.is_empty());
    }
    let (st, _) = call(&app, "POST", "/mutate", Some("{}")).await;
    assert!(st.is_client_error());
    let (st, _) = call(&app, "GET", "/nowhere", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
}
