//! One in-process request against the HTTP router.

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use serde_json::json;
use tower::ServiceExt;

use netinform::service::{router, ServiceConfig};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let network: serde_json::Value =
        serde_json::from_str(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/six_node.json")))?;
    let body = json!({"network": network, "options": {"mode": "both", "probe": 0}});
    let app = router(&ServiceConfig {
        addr: String::new(),
        jobs: 1,
        cors_origin: None,
    });
    let req = Request::post("/v1/check")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))?;
    let resp = app.oneshot(req).await?;
    println!("status {}", resp.status());
    let bytes = resp.into_body().collect().await?.to_bytes();
    let report: serde_json::Value = serde_json::from_slice(&bytes)?;
    println!("outcome {}", report["outcome"]);
    Ok(())
}
