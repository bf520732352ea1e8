"""Session-oriented HTTP API over the engine.

Sessions hold a base case document plus an ordered, retractable assumption
stack; solving is a pure function of the two, so repeated reads return
identical payloads.  Rationals travel as numerator/denominator pairs plus a
two-digit display string; JSON floats never appear.

An assumption that makes the case unsatisfiable is recorded but flagged, and
belief reads return a 409 conflict payload naming suspect assumptions until
the client retracts something.  Run with `uvicorn legalarg.service:app`.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import casefile, explain as explain_mod, scheme as scheme_mod
from .casefile import CaseParseError, SessionLog
from .dsl import ConstraintSyntaxError, parse_constraint
from .explain import Explanation, Reason
from .rationals import as_rat, fmt_display, fmt_exact
from .scheme import CaseUnsatisfiableError, LegalCase, SchemeError, Verdict


def rat_payload(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator, "display": fmt_display(x)}


def beliefs_payload(case: LegalCase, verdict: Verdict) -> dict:
    constrained = case.constrained_args()
    return {
        "satisfiable": True,
        "innocence": rat_payload(verdict.innocence_belief)
        if verdict.innocence_belief is not None
        else None,
        "arguments": [
            {
                "name": name,
                "lower": rat_payload(verdict.bounds.lower(name)),
                "upper": rat_payload(verdict.bounds.upper(name)),
                "constrained": name in constrained,
            }
            for name in case.graph.arguments
        ],
    }


def explanation_payload(e: Explanation, depth: int = 2) -> dict:
    return {
        "subject": e.subject,
        "bound": e.bound,
        "value": rat_payload(e.value),
        "note": e.note,
        "narrative": explain_mod.render(e, depth=depth),
        "reasons": [_reason_payload(r, depth - 1) for r in e.reasons] if depth > 0 else [],
    }


def _reason_payload(r: Reason, depth: int) -> dict:
    return {
        "kind": r.kind,
        "arguments": list(r.arguments),
        "induced": rat_payload(r.induced),
        "note": r.note,
        "sub": [explanation_payload(s, depth) for s in r.subs] if depth > 0 else [],
    }


@dataclass
class Session:
    id: str
    document: casefile.CaseDocument
    case: LegalCase
    assumptions: list[dict] = field(default_factory=list)  # {id, text, flagged}
    log: SessionLog = field(default_factory=SessionLog)
    cached: Verdict | None = None
    conflict: tuple[str, ...] = ()
    lock: threading.Lock = field(default_factory=threading.Lock)

    def solve(self) -> None:
        try:
            self.cached = scheme_mod.beliefs(self.case)
            self.conflict = ()
            innocence = (
                fmt_exact(self.cached.innocence_belief)
                if self.cached.innocence_belief is not None
                else None
            )
            self.log.record("solve", innocence=innocence)
        except CaseUnsatisfiableError as exc:
            self.cached = None
            self.conflict = exc.assumption_refs
            self.log.record("solve", innocence=None)


class AssumptionBody(BaseModel):
    text: str
    id: str | None = None


class CaseBody(BaseModel):
    case: str


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def create_app() -> FastAPI:
    app = FastAPI(title="legalarg", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    ids = itertools.count(1)
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session | None:
        return sessions.get(session_id)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/cases")
    def validate_case(body: CaseBody):
        try:
            doc = casefile.loads(body.case)
            doc.to_case()
        except CaseParseError as exc:
            return _error(400, "parse error", detail=str(exc), line=exc.line)
        except SchemeError as exc:
            return _error(400, "validation error", detail=str(exc))
        return {"valid": True, "arguments": [a.name for a in doc.arguments]}

    @app.post("/sessions", status_code=201)
    def create_session(body: CaseBody):
        try:
            doc = casefile.loads(body.case)
            case = doc.to_case()
        except CaseParseError as exc:
            return _error(400, "parse error", detail=str(exc), line=exc.line)
        except SchemeError as exc:
            return _error(400, "validation error", detail=str(exc))
        with registry_lock:
            session_id = f"s{next(ids)}"
            session = Session(session_id, doc, case)
            sessions[session_id] = session
        with session.lock:
            for ref, text in doc.assumptions:
                session.assumptions.append({"id": ref, "text": text, "flagged": False})
            session.solve()
            payload = {
                "id": session_id,
                "threshold": rat_payload(doc.threshold),
                "beliefs": beliefs_payload(session.case, session.cached)
                if session.cached
                else None,
            }
        return payload

    @app.get("/sessions/{session_id}")
    def session_info(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            case = session.case
            structure = {
                "scheme": "raw" if case.raw else "blaf",
                "arguments": [
                    {
                        "name": name,
                        "role": case.roles.get(name),
                        "label": case.labels.get(name),
                    }
                    for name in case.graph.arguments
                ],
                "edges": [
                    {
                        "source": e.source,
                        "target": e.target,
                        "weight": rat_payload(e.weight),
                    }
                    for e in sorted(case.graph.edges(), key=lambda e: (e.source, e.target))
                ],
                "groups": [
                    {
                        "target": g.target,
                        "members": [
                            {"name": m, "weight": rat_payload(w)} for m, w in g.members
                        ],
                    }
                    for g in case.cs_groups
                ],
            }
            return {
                "id": session.id,
                "satisfiable": session.cached is not None,
                "threshold": rat_payload(session.document.threshold),
                "assumptions": list(session.assumptions),
                "structure": structure,
            }

    @app.delete("/sessions/{session_id}")
    def delete_session(session_id: str):
        with registry_lock:
            if sessions.pop(session_id, None) is None:
                return _error(404, "unknown session")
        return {"deleted": session_id}

    @app.get("/sessions/{session_id}/assumptions")
    def list_assumptions(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            return {"assumptions": list(session.assumptions)}

    @app.post("/sessions/{session_id}/assumptions")
    def post_assumption(session_id: str, body: AssumptionBody):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            try:
                constraints = parse_constraint(body.text)
                session.case, ref = scheme_mod.assume(
                    session.case, constraints, ref=body.id
                )
            except ConstraintSyntaxError as exc:
                return _error(400, "parse error", detail=str(exc))
            except SchemeError as exc:
                return _error(400, "validation error", detail=str(exc))
            session.log.record("assume", payload=body.text, ref=ref)
            session.solve()
            if session.cached is None:
                for a in session.assumptions:
                    a["flagged"] = a["id"] in session.conflict
                session.assumptions.append(
                    {"id": ref, "text": body.text, "flagged": ref in session.conflict}
                )
                return _error(
                    409,
                    "unsatisfiable",
                    assumption=ref,
                    conflict={"assumptions": list(session.conflict)},
                )
            session.assumptions.append({"id": ref, "text": body.text, "flagged": False})
            return {"id": ref, "beliefs": beliefs_payload(session.case, session.cached)}

    @app.delete("/sessions/{session_id}/assumptions/{ref}")
    def delete_assumption(session_id: str, ref: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            try:
                session.case = scheme_mod.retract(session.case, ref)
            except SchemeError as exc:
                return _error(404, "unknown assumption", detail=str(exc))
            session.assumptions = [a for a in session.assumptions if a["id"] != ref]
            session.log.record("retract", payload=ref)
            session.solve()
            payload: dict = {"deleted": ref}
            if session.cached is not None:
                for a in session.assumptions:
                    a["flagged"] = False
                payload["beliefs"] = beliefs_payload(session.case, session.cached)
            else:
                payload["conflict"] = {"assumptions": list(session.conflict)}
            return payload

    @app.get("/sessions/{session_id}/beliefs")
    def get_beliefs(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            if session.cached is None:
                return _error(
                    409, "unsatisfiable", conflict={"assumptions": list(session.conflict)}
                )
            return beliefs_payload(session.case, session.cached)

    @app.get("/sessions/{session_id}/verdict")
    def get_verdict(session_id: str, threshold: str | None = None):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            if session.cached is None:
                return _error(
                    409, "unsatisfiable", conflict={"assumptions": list(session.conflict)}
                )
            if session.case.raw:
                return _error(400, "verdict needs a scheme case")
            try:
                t = as_rat(threshold) if threshold else session.document.threshold
                e = explain_mod.explain_verdict(session.case, session.cached.bounds, t)
                vc = explain_mod.classify(session.cached.bounds, t)
            except (ValueError, explain_mod.ExplainError) as exc:
                return _error(400, "bad threshold", detail=str(exc))
            return {
                "class": vc.kind,
                "threshold": rat_payload(t),
                "narrative": explain_mod.render(e, depth=2),
                "explanation": explanation_payload(e),
            }

    @app.get("/sessions/{session_id}/explanation")
    def get_explanation(
        session_id: str, argument: str, bound: str = "upper", depth: int = 2
    ):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            if session.cached is None:
                return _error(
                    409, "unsatisfiable", conflict={"assumptions": list(session.conflict)}
                )
            if bound not in ("lower", "upper"):
                return _error(400, "bound must be lower or upper")
            try:
                if bound == "lower":
                    e = explain_mod.explain_lower(session.case, session.cached.bounds, argument)
                else:
                    e = explain_mod.explain_upper(session.case, session.cached.bounds, argument)
            except explain_mod.ExplainError as exc:
                return _error(404, "unknown argument", detail=str(exc))
            return explanation_payload(e, depth=depth)

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            text = "".join(e.to_json() + "\n" for e in session.log.entries)
        return PlainTextResponse(text)

    return app


app = create_app()
