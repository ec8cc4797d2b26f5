"""HTTP facade over sessions, knowledge, cases, and evaluation runs.

Every route is a thin adapter: the body parses into the core types, the
core operation runs, and the result serializes back out. Domain errors
translate to a stable envelope {"error": {code, message, details}} with
a closed code set: invalid_state (409), invalid_input (400), not_found
(404), upstream_llm_error (502), unauthorized (401), internal (500).

Checkpoint POSTs carry the client's session version; a mismatch with
the stored version is a lost-update conflict and comes back 409. Eval
runs are asynchronous jobs on a bounded worker pool, polled via
/eval/jobs/{id}.

Authentication is a single shared bearer token (header
"Authorization: Bearer <token>", configured via ApiSettings or the
TRIZ_API_TOKEN env var). This is workbench-grade, not production
auth: no users, no scopes, no rotation.
"""

from __future__ import annotations

import os
import re
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from fastapi import Body, Depends, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from .cases import (
    Case,
    CaseCollection,
    ProblemDescription,
    _case_from_doc,
    _case_to_doc,
    load_collection,
    save_collection,
    seed_cases,
    validate_case,
)
from .config import GatewayConfig, StorageConfig
from .errors import (
    CaseValidationError,
    EmptyStepOutputError,
    GatewayError,
    KnowledgeError,
    MetricError,
    SessionNotFoundError,
    SessionStateError,
    StaleVersionError,
    UsageError,
    WorkbenchError,
)
from .evaluation import (
    AGGREGATIONS,
    export_report,
    load_report,
    report_to_doc,
    run_contradiction_eval,
    run_solution_eval,
)
from .gateway import Gateway
from .knowledge import KnowledgeBase, default_knowledge_base
from .metrics import MatchConfig, MatchMode
from .projection import project_keywords
from .prompts import PromptEngine, PromptStrategy
from .workflow import (
    Session,
    SessionStore,
    TrizWorkflow,
    _session_to_doc,
)

_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


# -- settings -------------------------------------------------------------------


@dataclass
class ApiSettings:
    storage: StorageConfig = field(default_factory=StorageConfig)
    gateway: GatewayConfig = field(default_factory=GatewayConfig)
    # replay transcripts instead of calling a provider
    replay_dir: Path | None = None
    token: str | None = None
    token_env: str = "TRIZ_API_TOKEN"
    cors_origins: tuple[str, ...] = (
        "http://localhost:5173",
        "http://127.0.0.1:5173",
    )
    eval_workers: int = 2
    collection_path: Path | None = None
    # static web-ui build output, mounted read-only at /ui when set
    ui_dir: Path | None = None

    def resolved_token(self) -> str | None:
        if self.token is not None:
            return self.token or None
        return os.environ.get(self.token_env) or None

    def resolved_collection_path(self) -> Path:
        return self.collection_path or (self.storage.root / "cases.json")


# -- error envelope ---------------------------------------------------------------


class ApiException(Exception):
    def __init__(
        self,
        status: int,
        code: str,
        message: str,
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


def _envelope(status: int, code: str, message: str, details=None) -> JSONResponse:
    body: dict[str, Any] = {"error": {"code": code, "message": message}}
    if details:
        body["error"]["details"] = details
    return JSONResponse(status_code=status, content=body)


def _translate(exc: WorkbenchError) -> JSONResponse:
    if isinstance(exc, StaleVersionError):
        return _envelope(
            409,
            "invalid_state",
            str(exc),
            {"expected": exc.expected, "actual": exc.actual},
        )
    if isinstance(exc, SessionStateError):
        return _envelope(
            409,
            "invalid_state",
            str(exc),
            {"state": exc.actual, "allowed": list(exc.allowed)},
        )
    if isinstance(exc, SessionNotFoundError):
        return _envelope(404, "not_found", str(exc))
    if isinstance(exc, EmptyStepOutputError):
        # the provider answered, but with nothing usable
        return _envelope(502, "upstream_llm_error", str(exc))
    if isinstance(exc, GatewayError):
        return _envelope(502, "upstream_llm_error", str(exc))
    if isinstance(exc, CaseValidationError):
        return _envelope(400, "invalid_input", str(exc), {"findings": exc.findings})
    if isinstance(exc, (UsageError, KnowledgeError, MetricError)):
        return _envelope(400, "invalid_input", str(exc))
    return _envelope(500, "internal", str(exc))


def _check_id(value: str, what: str) -> str:
    if not _ID_PATTERN.match(value):
        raise ApiException(
            400, "invalid_input", f"{what} {value!r} has characters outside [A-Za-z0-9._-]"
        )
    return value


# -- request/response models -------------------------------------------------------


class ProblemModel(BaseModel):
    scenario: str
    current_state: str
    pain_point: str
    requirement: str


class CreateSessionIn(BaseModel):
    problem: ProblemModel
    model_id: Optional[str] = None
    session_id: Optional[str] = None


class SessionSummary(BaseModel):
    id: str
    state: str
    version: int
    model_id: str


class ParameterModel(BaseModel):
    ordinal: int
    name: str
    explanation: str = ""


class MappingModel(BaseModel):
    source: ParameterModel
    triz_number: Optional[int]
    triz_name: str
    resolved: bool


class RelationModel(BaseModel):
    improving_number: Optional[int]
    improving_name: str
    worsening_number: Optional[int]
    worsening_name: str
    explanation: str = ""
    complete: bool = False


class SolutionModel(BaseModel):
    principle_number: int
    text: str
    generation_index: int
    keywords: list[str] = Field(default_factory=list)


class StepErrorModel(BaseModel):
    step: int
    tag: str
    message: str


class SessionView(BaseModel):
    id: str
    state: str
    version: int
    model_id: str
    problem: ProblemModel
    step1_output: list[ParameterModel] = Field(default_factory=list)
    step2_output: list[MappingModel] = Field(default_factory=list)
    selected_triz_parameters: list[int] = Field(default_factory=list)
    step3_output: list[RelationModel] = Field(default_factory=list)
    selected_contradiction: Optional[RelationModel] = None
    recommended_principles: list[int] = Field(default_factory=list)
    selected_principles: list[int] = Field(default_factory=list)
    solutions: list[SolutionModel] = Field(default_factory=list)
    strategy_choices: dict[str, str] = Field(default_factory=dict)
    transcript_ids: list[str] = Field(default_factory=list)
    step_errors: list[StepErrorModel] = Field(default_factory=list)


class Step1In(BaseModel):
    version: int


class Step2In(BaseModel):
    version: int
    selected_ordinals: list[int]


class Step3In(BaseModel):
    version: int
    selected_numbers: list[int]
    strategy: Optional[str] = None


class PrinciplesIn(BaseModel):
    version: int
    chosen_index: int
    selected_principles: Optional[list[int]] = None


class Step4In(BaseModel):
    version: int
    principle: int
    strategy: Optional[str] = None
    count: Optional[int] = None


class ParameterInfo(BaseModel):
    number: int
    name: str
    definition: str


class PrincipleInfo(BaseModel):
    number: int
    name: str
    description: str


class MatrixCellOut(BaseModel):
    improving: int
    worsening: int
    principles: list[PrincipleInfo]


class RefContradictionModel(BaseModel):
    improving: int
    worsening: int
    explanation: str = ""


class GroundTruthModel(BaseModel):
    principle: int
    text: str


class KeywordModel(BaseModel):
    source: str
    phrase: str


class CaseModel(BaseModel):
    id: str
    title: str
    domain_tag: str
    published_after_cutoff: bool
    problem: ProblemModel
    reference_contradictions: list[RefContradictionModel] = Field(default_factory=list)
    reference_principles: list[int] = Field(default_factory=list)
    ground_truth_solutions: list[GroundTruthModel] = Field(default_factory=list)
    solution_keywords: list[KeywordModel] = Field(default_factory=list)
    source_citation: str = ""


class CollectionOut(BaseModel):
    name: str
    few_shot_case_ids: list[str]
    cases: list[CaseModel]


class CaseAddedOut(BaseModel):
    id: str
    case_count: int


class ValidationOut(BaseModel):
    ok: bool
    findings: list[str]


class EvalContradictionIn(BaseModel):
    strategies: Optional[list[str]] = None
    model_ids: Optional[list[str]] = None
    match_mode: str = MatchMode.ORDERED_PAIR.value
    aggregation: str = "macro"


class EvalSolutionIn(BaseModel):
    strategies: Optional[list[str]] = None
    model_ids: Optional[list[str]] = None
    per_principle_count: int = 3
    aggregation: str = "macro"


class JobOut(BaseModel):
    id: str
    kind: str
    status: str
    report_id: Optional[str] = None
    error: Optional[str] = None


class JobAccepted(BaseModel):
    job_id: str
    status: str


class ReportSummary(BaseModel):
    id: str
    step: int
    collection: str
    created_at: str
    case_count: int


class KeywordPairIn(BaseModel):
    label: str
    source: str


class ProjectionIn(BaseModel):
    keywords: list[KeywordPairIn]
    method: str = "pca"


class PointOut(BaseModel):
    label: str
    source: str
    x: float
    y: float


class ProjectionNoteOut(BaseModel):
    label: str
    source: str
    message: str


class ProjectionOut(BaseModel):
    method: str
    points: list[PointOut]
    findings: list[ProjectionNoteOut]


# -- in-process state ----------------------------------------------------------------


@dataclass
class _JobRecord:
    id: str
    kind: str
    status: str = "queued"
    report_id: str | None = None
    error: str | None = None

    def view(self) -> JobOut:
        return JobOut(
            id=self.id,
            kind=self.kind,
            status=self.status,
            report_id=self.report_id,
            error=self.error,
        )


class _CollectionBox:
    """The server's active case collection, persisted on every change."""

    def __init__(self, path: Path):
        self._path = path
        self._lock = threading.Lock()
        if path.exists():
            self._collection = load_collection(path)
        else:
            self._collection = seed_cases()

    def snapshot(self) -> CaseCollection:
        with self._lock:
            return self._collection

    def add(self, case: Case) -> CaseCollection:
        with self._lock:
            current = self._collection
            if any(c.id == case.id for c in current.cases):
                raise UsageError(f"case id {case.id!r} already exists")
            updated = CaseCollection(
                name=current.name,
                cases=current.cases + (case,),
                few_shot_case_ids=current.few_shot_case_ids,
            )
            self._path.parent.mkdir(parents=True, exist_ok=True)
            save_collection(updated, self._path)
            self._collection = updated
            return updated


# -- app factory -----------------------------------------------------------------------


def create_app(
    settings: ApiSettings | None = None,
    *,
    gateway: Gateway | None = None,
    kb: KnowledgeBase | None = None,
    engine: PromptEngine | None = None,
    clock: Callable[[], float] = time.time,
) -> FastAPI:
    settings = settings or ApiSettings()
    settings.storage.ensure()
    if gateway is None:
        if settings.replay_dir is not None:
            gateway = Gateway.replay(settings.replay_dir, config=settings.gateway)
        else:
            gateway = Gateway.live(settings.gateway)
    kb = kb or default_knowledge_base()
    store = SessionStore(settings.storage.sessions_dir)
    workflow = TrizWorkflow(gateway, kb=kb, engine=engine, store=store)
    collections = _CollectionBox(settings.resolved_collection_path())
    reports_dir = settings.storage.reports_dir

    executor = ThreadPoolExecutor(max_workers=settings.eval_workers)
    jobs: dict[str, _JobRecord] = {}
    jobs_lock = threading.Lock()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        executor.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(
        title="TRIZ workbench API",
        description=(
            "HTTP facade over the four-step TRIZ workflow, the knowledge "
            "base, case collections, and the evaluation harness. "
            "Authentication is a single shared bearer token; treat the "
            "server as a local workbench, not a hardened service."
        ),
        version="1.0.0",
        lifespan=lifespan,
    )
    app.state.settings = settings
    if settings.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(settings.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    # -- error handling ----------------------------------------------------

    @app.exception_handler(ApiException)
    async def on_api_exception(request: Request, exc: ApiException):
        return _envelope(exc.status, exc.code, exc.message, exc.details)

    @app.exception_handler(WorkbenchError)
    async def on_workbench_error(request: Request, exc: WorkbenchError):
        return _translate(exc)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        details = {
            "errors": [
                f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}"
                for e in exc.errors()
            ]
        }
        return _envelope(
            400, "invalid_input", "request failed schema validation", details
        )

    @app.exception_handler(StarletteHTTPException)
    async def on_http_exception(request: Request, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "invalid_input"
        return _envelope(exc.status_code, code, str(exc.detail))

    # -- auth ---------------------------------------------------------------

    def require_token(request: Request) -> None:
        expected = settings.resolved_token()
        if expected is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {expected}":
            raise ApiException(401, "unauthorized", "missing or wrong API token")

    guarded = [Depends(require_token)]

    # -- sessions ------------------------------------------------------------

    def _session_view(session: Session) -> SessionView:
        return SessionView(**_session_to_doc(session)["session"])

    def _summary(session: Session) -> SessionSummary:
        return SessionSummary(
            id=session.id,
            state=session.state.value,
            version=session.version,
            model_id=session.model_id,
        )

    def _checkout(session_id: str, version: int) -> Session:
        session = store.load(_check_id(session_id, "session id"))
        if version != session.version:
            raise StaleVersionError(expected=version, actual=session.version)
        return session

    def _strategy(value: str | None) -> PromptStrategy | None:
        if value is None:
            return None
        try:
            return PromptStrategy(value)
        except ValueError:
            raise UsageError(
                f"unknown prompt strategy {value!r}; choose one of "
                + ", ".join(s.value for s in PromptStrategy)
            ) from None

    @app.post(
        "/sessions",
        status_code=201,
        response_model=SessionSummary,
        dependencies=guarded,
    )
    def create_session(body: CreateSessionIn):
        if body.session_id is not None:
            _check_id(body.session_id, "session id")
        problem = ProblemDescription(**body.problem.model_dump())
        session = workflow.start_session(
            problem, model_id=body.model_id, session_id=body.session_id
        )
        return _summary(session)

    @app.get("/sessions", response_model=list[SessionSummary], dependencies=guarded)
    def list_sessions():
        return [_summary(store.load(sid)) for sid in store.list_ids()]

    @app.get(
        "/sessions/{session_id}", response_model=SessionView, dependencies=guarded
    )
    def get_session(session_id: str):
        return _session_view(store.load(_check_id(session_id, "session id")))

    @app.post(
        "/sessions/{session_id}/step1",
        response_model=SessionView,
        dependencies=guarded,
    )
    def post_step1(session_id: str, body: Step1In):
        session = _checkout(session_id, body.version)
        workflow.run_step1(session)
        store.save(session)
        return _session_view(session)

    @app.post(
        "/sessions/{session_id}/step2",
        response_model=SessionView,
        dependencies=guarded,
    )
    def post_step2(session_id: str, body: Step2In):
        session = _checkout(session_id, body.version)
        by_ordinal = {p.ordinal: p for p in session.step1_output}
        missing = [o for o in body.selected_ordinals if o not in by_ordinal]
        if missing:
            raise UsageError(
                f"ordinals {missing} are not part of the Step-1 output"
            )
        workflow.run_step2(session, [by_ordinal[o] for o in body.selected_ordinals])
        store.save(session)
        return _session_view(session)

    @app.post(
        "/sessions/{session_id}/step3",
        response_model=SessionView,
        dependencies=guarded,
    )
    def post_step3(session_id: str, body: Step3In):
        session = _checkout(session_id, body.version)
        workflow.run_step3(session, body.selected_numbers, _strategy(body.strategy))
        store.save(session)
        return _session_view(session)

    @app.post(
        "/sessions/{session_id}/principles",
        response_model=SessionView,
        dependencies=guarded,
    )
    def post_principles(session_id: str, body: PrinciplesIn):
        session = _checkout(session_id, body.version)
        if not 0 <= body.chosen_index < len(session.step3_output):
            raise UsageError(
                f"chosen_index {body.chosen_index} is out of range for "
                f"{len(session.step3_output)} Step-3 relations"
            )
        workflow.recommend_principles(
            session,
            session.step3_output[body.chosen_index],
            body.selected_principles,
        )
        store.save(session)
        return _session_view(session)

    @app.post(
        "/sessions/{session_id}/step4",
        response_model=SessionView,
        dependencies=guarded,
    )
    def post_step4(session_id: str, body: Step4In):
        session = _checkout(session_id, body.version)
        workflow.run_step4(
            session, body.principle, _strategy(body.strategy), body.count
        )
        store.save(session)
        return _session_view(session)

    # -- knowledge -------------------------------------------------------------

    @app.get(
        "/knowledge/parameters",
        response_model=list[ParameterInfo],
        dependencies=guarded,
    )
    def knowledge_parameters():
        return [
            ParameterInfo(number=p.number, name=p.name, definition=p.definition)
            for p in kb.parameters
        ]

    @app.get(
        "/knowledge/principles",
        response_model=list[PrincipleInfo],
        dependencies=guarded,
    )
    def knowledge_principles():
        return [
            PrincipleInfo(number=p.number, name=p.name, description=p.description)
            for p in kb.principles
        ]

    @app.get(
        "/knowledge/matrix", response_model=MatrixCellOut, dependencies=guarded
    )
    def knowledge_matrix(improving: int = Query(...), worsening: int = Query(...)):
        principles = kb.matrix_lookup(improving, worsening)
        return MatrixCellOut(
            improving=improving,
            worsening=worsening,
            principles=[
                PrincipleInfo(
                    number=p.number, name=p.name, description=p.description
                )
                for p in principles
            ],
        )

    # -- cases -------------------------------------------------------------------

    @app.get("/cases", response_model=CollectionOut, dependencies=guarded)
    def get_cases():
        collection = collections.snapshot()
        return CollectionOut(
            name=collection.name,
            few_shot_case_ids=list(collection.few_shot_case_ids),
            cases=[CaseModel(**_case_to_doc(c)) for c in collection.cases],
        )

    @app.post(
        "/cases", status_code=201, response_model=CaseAddedOut, dependencies=guarded
    )
    def post_case(body: CaseModel):
        case = _case_from_doc(body.model_dump())
        findings = validate_case(case)
        if findings:
            raise CaseValidationError(f"case {case.id!r} failed validation", findings)
        updated = collections.add(case)
        return CaseAddedOut(id=case.id, case_count=len(updated.cases))

    @app.post("/cases/validate", response_model=ValidationOut, dependencies=guarded)
    def post_case_validate(body: dict = Body(...)):
        try:
            case = _case_from_doc(body)
        except CaseValidationError as exc:
            return ValidationOut(ok=False, findings=[str(exc), *exc.findings])
        findings = validate_case(case)
        return ValidationOut(ok=not findings, findings=findings)

    # -- evaluation -----------------------------------------------------------------

    def _check_eval_inputs(
        strategies: list[str] | None, model_ids: list[str] | None, aggregation: str
    ) -> None:
        # fail bad requests at submit time, not inside the job
        if strategies is not None:
            if not strategies:
                raise UsageError("at least one prompt strategy is required")
            for s in strategies:
                _strategy(s)
        if model_ids is not None and not model_ids:
            raise UsageError("at least one model id is required")
        if aggregation not in AGGREGATIONS:
            raise UsageError(
                f"unknown aggregation {aggregation!r}; choose one of "
                + ", ".join(AGGREGATIONS)
            )

    def _submit(kind: str, run: Callable[[], Any]) -> JobAccepted:
        job_id = uuid.uuid4().hex[:12]
        record = _JobRecord(id=job_id, kind=kind)
        with jobs_lock:
            jobs[job_id] = record

        def task():
            with jobs_lock:
                record.status = "running"
            try:
                report = run()
                export_report(report, reports_dir / f"{job_id}.json")
                with jobs_lock:
                    record.report_id = job_id
                    record.status = "done"
            except Exception as exc:  # surfaced via polling, not a response
                with jobs_lock:
                    record.error = str(exc)
                    record.status = "failed"

        executor.submit(task)
        return JobAccepted(job_id=job_id, status=record.status)

    @app.post(
        "/eval/contradiction",
        status_code=202,
        response_model=JobAccepted,
        dependencies=guarded,
    )
    def post_eval_contradiction(body: EvalContradictionIn):
        try:
            mode = MatchMode(body.match_mode)
        except ValueError:
            raise UsageError(
                f"unknown match mode {body.match_mode!r}; choose one of "
                + ", ".join(m.value for m in MatchMode)
            ) from None
        _check_eval_inputs(body.strategies, body.model_ids, body.aggregation)
        collection = collections.snapshot()
        strategies = body.strategies
        model_ids = body.model_ids
        aggregation = body.aggregation

        def run():
            return run_contradiction_eval(
                gateway,
                collection,
                strategies=strategies,
                model_ids=model_ids,
                cfg=MatchConfig(mode),
                aggregation=aggregation,
                kb=kb,
                clock=clock,
            )

        return _submit("contradiction", run)

    @app.post(
        "/eval/solution",
        status_code=202,
        response_model=JobAccepted,
        dependencies=guarded,
    )
    def post_eval_solution(body: EvalSolutionIn):
        if body.per_principle_count < 1:
            raise UsageError("per_principle_count must be at least 1")
        _check_eval_inputs(body.strategies, body.model_ids, body.aggregation)
        collection = collections.snapshot()
        strategies = body.strategies
        model_ids = body.model_ids
        count = body.per_principle_count
        aggregation = body.aggregation

        def run():
            return run_solution_eval(
                gateway,
                collection,
                strategies=strategies,
                model_ids=model_ids,
                per_principle_count=count,
                aggregation=aggregation,
                kb=kb,
                clock=clock,
            )

        return _submit("solution", run)

    @app.get("/eval/jobs/{job_id}", response_model=JobOut, dependencies=guarded)
    def get_job(job_id: str):
        with jobs_lock:
            record = jobs.get(job_id)
            if record is None:
                raise ApiException(404, "not_found", f"no eval job {job_id!r}")
            return record.view()

    @app.get(
        "/eval/reports", response_model=list[ReportSummary], dependencies=guarded
    )
    def list_reports():
        rows = []
        for path in sorted(reports_dir.glob("*.json")):
            report = load_report(path)
            rows.append(
                ReportSummary(
                    id=path.stem,
                    step=report.step,
                    collection=report.collection,
                    created_at=report.created_at,
                    case_count=len(report.case_scores),
                )
            )
        # ISO timestamps sort lexicographically; newest first, id breaks ties
        rows.sort(key=lambda r: r.id)
        rows.sort(key=lambda r: r.created_at, reverse=True)
        return rows

    @app.get("/eval/reports/{report_id}", dependencies=guarded)
    def get_report(report_id: str) -> dict:
        _check_id(report_id, "report id")
        path = reports_dir / f"{report_id}.json"
        if not path.exists():
            raise ApiException(404, "not_found", f"no eval report {report_id!r}")
        return report_to_doc(load_report(path))

    # -- keyword projection --------------------------------------------------------

    @app.post("/projection", response_model=ProjectionOut, dependencies=guarded)
    def post_projection(body: ProjectionIn):
        # the server owns embedding + reduction; clients only render points
        result = project_keywords(
            [(k.label, k.source) for k in body.keywords],
            method=body.method,
            gateway=gateway,
        )
        return ProjectionOut(
            method=result.method,
            points=[
                PointOut(label=p.label, source=p.source, x=p.x, y=p.y)
                for p in result.points
            ],
            findings=[
                ProjectionNoteOut(label=f.label, source=f.source, message=f.message)
                for f in result.findings
            ],
        )

    if settings.ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/ui", StaticFiles(directory=settings.ui_dir, html=True), name="ui"
        )

    return app


def run_server(app: FastAPI, host: str = "127.0.0.1", port: int = 8321) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="info")
