"""HTTP service backing the annotation UI and report consumers.

A thin adapter over the library modules: every endpoint loads a snapshot of
the journaled workflow store plus the immutable taxonomy/corpus and calls the
corresponding module operation, so the service itself holds no derived state.
Reliability values, agreement and coverage are computed on demand — desk-scale
corpora do not need caching.

Configuration comes from flags or environment variables: PRIVLENS_STORE
(journal path), PRIVLENS_TAXONOMY (seed file), PRIVLENS_CORPUS (canonical
issue file), PRIVLENS_BIND (host:port) and PRIVLENS_CORS (comma-separated
allowed origins for the UI).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import corpus as corpus_mod
from . import irr, stats, taxonomy as taxonomy_mod, workflow
from .taxonomy import NotFoundError, Taxonomy
from .workflow import (
    SessionStore,
    StaleVersionError,
    StateError,
    UnassignedCoderError,
    WorkflowError,
)


@dataclass
class ServiceConfig:
    store_path: Path
    taxonomy_path: Path
    corpus_path: Path | None = None
    host: str = "127.0.0.1"
    port: int = 8571
    cors_origins: tuple[str, ...] = ()

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        bind = overrides.pop("bind", None) or os.environ.get("PRIVLENS_BIND", "127.0.0.1:8571")
        host, _, port = bind.partition(":")
        cors = os.environ.get("PRIVLENS_CORS", "")
        values = dict(
            store_path=Path(os.environ.get("PRIVLENS_STORE", "privlens.journal")),
            taxonomy_path=Path(os.environ.get("PRIVLENS_TAXONOMY", str(taxonomy_mod.DEFAULT_SEED))),
            corpus_path=Path(os.environ["PRIVLENS_CORPUS"]) if os.environ.get("PRIVLENS_CORPUS") else None,
            host=host or "127.0.0.1",
            port=int(port or 8571),
            cors_origins=tuple(o.strip() for o in cors.split(",") if o.strip()),
        )
        values.update(overrides)
        return cls(**values)


class CreateSessionBody(BaseModel):
    id: str
    coders: list[str]
    corpus_ref: str = ""
    scheme: str = "primary-split"
    issues: list[str] | None = None
    assign: bool = True


class SubmitLabelsBody(BaseModel):
    coder: str
    labels: list[str]
    expected_version: int = 0


class AdjudicateBody(BaseModel):
    final: list[str]
    resolution: str
    adjudicators: list[str]
    note: str = ""


def _requirement_payload(req) -> dict:
    return {
        "id": req.id,
        "action": req.action,
        "object": req.object,
        "target": req.target,
        "text": req.text,
        "categories": sorted(str(m) for m in req.categories),
        "refs": req.refs_by_source(),
    }


def create_app(config: ServiceConfig) -> FastAPI:
    taxonomy: Taxonomy = taxonomy_mod.load_taxonomy(config.taxonomy_path)
    issues: list[corpus_mod.IssueReport] = []
    if config.corpus_path is not None:
        issues = corpus_mod.ingest(config.corpus_path, "canonical-json").issues
    issues_by_id = {i.issue_id: i for i in issues}
    store = SessionStore(config.store_path, valid_labels=taxonomy.by_id.keys())
    store.set_issue_metadata(issues)

    app = FastAPI(title="privlens", version="1")
    app.state.store = store
    app.state.taxonomy = taxonomy
    app.state.issues = issues

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(WorkflowError)
    async def workflow_error(_req: Request, exc: WorkflowError):
        status = 400
        if isinstance(exc, StaleVersionError):
            return JSONResponse(status_code=409, content={
                "detail": str(exc), "conflict": True, "retry": True,
                "current_version": exc.current_version,
            })
        if isinstance(exc, StateError):
            status = 409
        elif isinstance(exc, UnassignedCoderError):
            status = 403
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.exception_handler(NotFoundError)
    async def not_found(_req: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"detail": str(exc.args[0])})

    # -- taxonomy ------------------------------------------------------------

    @app.get("/v1/taxonomy")
    def get_taxonomy():
        return {
            "version": taxonomy.version,
            "categories": [
                {"id": c.id, "subcategories": list(c.subcategories)}
                for c in taxonomy.tree.categories
            ],
            "requirements": [_requirement_payload(r) for r in taxonomy.requirements],
        }

    @app.get("/v1/taxonomy/{rid}/trace")
    def get_trace(rid: str):
        return {"requirement": rid, "refs": taxonomy_mod.trace_requirement(taxonomy, rid)}

    # -- corpus --------------------------------------------------------------

    @app.get("/v1/issues")
    def list_issues():
        return [corpus_mod.issue_to_record(i) for i in issues]

    @app.get("/v1/issues/{iid}")
    def get_issue(iid: str):
        issue = issues_by_id.get(iid)
        if issue is None:
            raise HTTPException(status_code=404, detail=f"unknown issue {iid}")
        return corpus_mod.issue_to_record(issue)

    # -- sessions ------------------------------------------------------------

    def _session(sid: str) -> workflow.Session:
        try:
            return store.sessions[sid]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {sid}") from None

    def _session_payload(session: workflow.Session) -> dict:
        disagreements, pending = store.disagreements(session.id)
        return {
            "id": session.id,
            "state": session.state,
            "coders": list(session.coders),
            "corpus_ref": session.corpus_ref,
            "taxonomy_version": session.taxonomy_version,
            "issues": len(session.assignment),
            "pending": sorted(pending),
            "disagreements": len(disagreements),
            "finalized_issues": len(session.finals),
        }

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = store.create_session(body.id, body.corpus_ref, taxonomy.version, body.coders)
        if body.assign:
            issue_ids = body.issues if body.issues is not None else [i.issue_id for i in issues]
            store.assign(body.id, issue_ids, scheme=body.scheme)
        return _session_payload(session)

    @app.get("/v1/sessions/{sid}")
    def get_session(sid: str):
        return _session_payload(_session(sid))

    @app.get("/v1/sessions/{sid}/assignments/{coder}")
    def get_assignment(sid: str, coder: str):
        session = _session(sid)
        if coder not in session.coders:
            raise HTTPException(status_code=404, detail=f"unknown coder {coder}")
        out = []
        for issue_id, coders in session.assignment.items():
            if coder not in coders:
                continue
            record = session.latest(issue_id, coder)
            issue = issues_by_id.get(issue_id)
            out.append({
                "issue_id": issue_id,
                "title": issue.title if issue else "",
                "issue_type": issue.issue_type if issue else "unspecified",
                "version": record.version if record else 0,
                "labels": sorted(record.labels) if record else [],
                "submitted": record is not None,
            })
        return {"coder": coder, "issues": out}

    @app.post("/v1/sessions/{sid}/issues/{iid}/labels", status_code=201)
    def submit_labels(sid: str, iid: str, body: SubmitLabelsBody):
        record = store.submit_labels(sid, body.coder, iid, body.labels,
                                     expected_version=body.expected_version)
        return {
            "issue_id": record.issue_id,
            "coder": record.coder_id,
            "labels": sorted(record.labels),
            "version": record.version,
            "submitted_at": record.submitted_at,
        }

    @app.get("/v1/sessions/{sid}/disagreements")
    def get_disagreements(sid: str, include_resolved: bool = False):
        # queue view: adjudicated issues drop out unless explicitly requested
        disagreements, pending = store.disagreements(
            _session(sid).id, unresolved_only=not include_resolved)
        return {
            "pending": sorted(pending),
            "disagreements": [
                {
                    "issue_id": d.issue_id,
                    "masi": d.masi,
                    "label_sets": [
                        {"coder": coder, "labels": sorted(labels)}
                        for coder, labels in d.label_sets
                    ],
                }
                for d in disagreements
            ],
        }

    @app.post("/v1/sessions/{sid}/begin-adjudication")
    def begin_adjudication(sid: str):
        store.begin_adjudication(sid)
        return _session_payload(_session(sid))

    @app.post("/v1/sessions/{sid}/issues/{iid}/adjudicate", status_code=201)
    def adjudicate(sid: str, iid: str, body: AdjudicateBody):
        final = store.adjudicate(sid, iid, body.final, body.resolution,
                                 body.adjudicators, body.note)
        return {
            "issue_id": final.issue_id,
            "labels": sorted(final.labels),
            "resolution": final.resolution,
            "adjudicators": list(final.adjudicators),
            "note": final.note,
        }

    @app.post("/v1/sessions/{sid}/resolve-unanimous")
    def resolve_unanimous(sid: str, adjudicators: str = Query(default="")):
        names = [a.strip() for a in adjudicators.split(",") if a.strip()]
        count = store.resolve_unanimous(sid, names or list(_session(sid).coders))
        return {"confirmed": count}

    @app.post("/v1/sessions/{sid}/finalize")
    def finalize(sid: str):
        gold = store.finalize(sid)
        return {
            "session": sid,
            "gold": [
                {"project": r.project, "issue_id": r.issue_id,
                 "labels": list(r.labels), "resolution": r.resolution}
                for r in gold.records
            ],
        }

    @app.get("/v1/sessions/{sid}/irr")
    def session_irr(sid: str, pair: str = Query(...), distance: str = Query(default="masi")):
        _session(sid)
        coders = [c.strip() for c in pair.split(",") if c.strip()]
        if len(coders) != 2:
            raise HTTPException(status_code=400, detail="pair must name exactly 2 coders")
        if distance not in irr.DISTANCES:
            raise HTTPException(status_code=400,
                                detail=f"unknown distance {distance} (known: {', '.join(irr.DISTANCES)})")
        labels = store.labels_by_coder(sid)
        try:
            result = irr.pairwise_alpha(labels, coders[0], coders[1], irr.DISTANCES[distance])
        except irr.IrrError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "statistic": result.statistic,
            "distance": distance,
            "pair": coders,
            "value": result.value,
            "n_units": result.n_units,
            "n_skipped": result.n_skipped,
            "degenerate": result.degenerate,
        }

    @app.get("/v1/sessions/{sid}/agreement")
    def session_agreement(sid: str):
        _session(sid)
        return {"session": sid, "total_agreement": store.percent_total_agreement(sid)}

    # -- reports -------------------------------------------------------------

    @app.get("/v1/reports/coverage")
    def report_coverage(session: str = Query(...)):
        sess = _session(session)
        gold_labels = {issue: sorted(final.labels) for issue, final in sess.finals.items()}
        try:
            table = stats.coverage_by_category(gold_labels, taxonomy)
        except stats.StatsError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "session": session,
            "n_issues": table.n_issues,
            "percentages": table.percentages,
            "counts": table.counts,
        }

    @app.get("/v1/reports/stats")
    def report_stats():
        if not issues:
            raise HTTPException(status_code=400, detail="no corpus configured")
        described = corpus_mod.descriptive_stats(issues)

        def row(metric):
            if metric is None:
                return None
            return {"min": metric.minimum, "max": metric.maximum, "mean": metric.mean,
                    "mean_rounded": metric.mean_rounded, "median": metric.median,
                    "mode": metric.mode}

        return {
            "n_issues": described.n_issues,
            "n_resolved": described.n_resolved,
            "contributors": row(described.contributors),
            "resolution_days": row(described.resolution_days),
            "comments": row(described.comments),
        }

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted; the journal is flushed per write."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
