use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::Json;
use serde::{Deserialize, Serialize};
use tokio::task;

use splitweave::dsl::{validate, Diagnostic, Severity, StyleTag};
use splitweave::edits::{apply_edit, parse_edit, EditDescriptor};
use splitweave::parser::{parse, print};
use splitweave::render::{emit_svg, interpret, render, RenderOptions};
use splitweave::rng::Seed;
use splitweave::samplers::Sampler;

use crate::{ApiError, AppState};

type ApiResult<T> = Result<Json<T>, ApiError>;

fn body<T>(req: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    req.map(|Json(t)| t).map_err(ApiError::from)
}

/// Runs `f` on the blocking pool under the state's time budget.
async fn budgeted<T, F>(state: &AppState, f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce(AppState) -> Result<T, ApiError> + Send + 'static,
{
    let st = state.clone();
    match tokio::time::timeout(state.budget, task::spawn_blocking(move || f(st))).await {
        Ok(Ok(result)) => result,
        Ok(Err(join)) => Err(ApiError::internal(join.to_string())),
        Err(_) => Err(ApiError::budget()),
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticBody {
    pub severity: &'static str,
    pub path: String,
    pub message: String,
}

impl From<&Diagnostic> for DiagnosticBody {
    fn from(d: &Diagnostic) -> DiagnosticBody {
        let severity = match d.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        DiagnosticBody { severity, path: d.path.to_string(), message: d.message.clone() }
    }
}

#[derive(Debug, Deserialize)]
pub struct RenderRequest {
    program: String,
    seed: Seed,
}

#[derive(Debug, Serialize)]
pub struct RenderResponse {
    svg: String,
    diagnostics: Vec<DiagnosticBody>,
}

pub async fn render_handler(State(state): State<AppState>, req: Result<Json<RenderRequest>, JsonRejection>) -> ApiResult<RenderResponse> {
    let req = body(req)?;
    budgeted(&state, move |st| {
        let p = parse(&req.program)?;
        let graph = interpret(&p, req.seed, &st.registry)?;
        let svg = emit_svg(&graph, &RenderOptions::default());
        let diagnostics = validate(&p).iter().chain(&graph.warnings).map(DiagnosticBody::from).collect();
        Ok(Json(RenderResponse { svg, diagnostics }))
    })
    .await
}

#[derive(Debug, Deserialize)]
pub struct SampleRequest {
    style: String,
    seed: Seed,
}

#[derive(Debug, Serialize)]
pub struct ProgramResponse {
    program: String,
}

pub async fn sample(State(state): State<AppState>, req: Result<Json<SampleRequest>, JsonRejection>) -> ApiResult<ProgramResponse> {
    let req = body(req)?;
    let style = match StyleTag::from_name(&req.style) {
        Some(s @ (StyleTag::Mtp | StyleTag::Sfp)) => s,
        _ => return Err(ApiError::bad_request(format!("unknown style {:?}, expected mtp or sfp", req.style))),
    };
    budgeted(&state, move |st| {
        let sampler = Sampler { config: &st.config, registry: &st.registry };
        let p = match style {
            StyleTag::Mtp => sampler.sample_mtp(req.seed),
            _ => sampler.sample_sfp(req.seed),
        };
        Ok(Json(ProgramResponse { program: print(&p) }))
    })
    .await
}

#[derive(Debug, Deserialize)]
pub struct EditRequest {
    program: String,
    edit: String,
}

fn parse_edit_field(text: &str) -> Result<EditDescriptor, ApiError> {
    parse_edit(text).map_err(|e| ApiError::from(e).within("edit"))
}

pub async fn edit(State(state): State<AppState>, req: Result<Json<EditRequest>, JsonRejection>) -> ApiResult<ProgramResponse> {
    let req = body(req)?;
    budgeted(&state, move |_| {
        let p = parse(&req.program)?;
        let e = parse_edit_field(&req.edit)?;
        let edited = apply_edit(&p, &e)?;
        Ok(Json(ProgramResponse { program: print(&edited) }))
    })
    .await
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PreviewRequest {
    prog_a: String,
    edit: String,
    prog_b: String,
    seed: Seed,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PreviewResponse {
    a: String,
    a_prime: String,
    b: String,
    b_prime: String,
}

pub async fn quartet_preview(
    State(state): State<AppState>,
    req: Result<Json<PreviewRequest>, JsonRejection>,
) -> ApiResult<PreviewResponse> {
    let req = body(req)?;
    budgeted(&state, move |st| {
        let a = parse(&req.prog_a).map_err(|e| ApiError::from(e).within("progA"))?;
        let b = parse(&req.prog_b).map_err(|e| ApiError::from(e).within("progB"))?;
        let e = parse_edit_field(&req.edit)?;
        let a2 = apply_edit(&a, &e).map_err(|err| ApiError::from(err).within("a"))?;
        let b2 = apply_edit(&b, &e).map_err(|err| ApiError::from(err).within("b"))?;
        let opts = RenderOptions::default();
        let svg = |p| render(p, req.seed, &opts, &st.registry).map(|img| img.svg);
        Ok(Json(PreviewResponse { a: svg(&a)?, a_prime: svg(&a2)?, b: svg(&b)?, b_prime: svg(&b2)? }))
    })
    .await
}

#[derive(Debug, Serialize)]
pub struct MotifEntry {
    id: String,
    source: &'static str,
}

#[derive(Debug, Serialize)]
pub struct MotifsResponse {
    motifs: Vec<MotifEntry>,
}

pub async fn motifs(State(state): State<AppState>) -> Json<MotifsResponse> {
    let mut motifs: Vec<MotifEntry> =
        state.registry.iter().map(|m| MotifEntry { id: m.id.clone(), source: m.source.label() }).collect();
    motifs.sort_by(|x, y| x.id.cmp(&y.id));
    Json(MotifsResponse { motifs })
}
