"""JSON-over-HTTP service for the workbench UI and for scripts.

State lives in server memory: a registry of parsed calculi and of
interactive sessions.  Mutations on one session are serialized by a
per-session lock; checker runs are pure and need no locking.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse
from pydantic import BaseModel

from .calculus import CalculusParseError, CalculusSpec, parse_goal
from .calculus import parse_calculus
from .engine import (
    Application,
    IllegalApplication,
    ProofSession,
    StaleGoal,
    all_applications,
    apply_to_goal,
    new_session,
    undo,
)
from .latex import render_proof, render_rule, render_sequent
from .meta import (
    check_cut_elimination,
    check_identity_expansion,
    check_invertibility,
    check_permutability,
    check_weakening_admissibility,
)
from .report import report_to_dict, tree_to_dict
from .terms import SequiturError


class CalculusIn(BaseModel):
    text: str


class SessionIn(BaseModel):
    calculusId: str
    goal: str


class ApplyIn(BaseModel):
    goalId: str
    applicationIndex: int


class CheckIn(BaseModel):
    property: str
    params: dict = {}


class _Registry:
    def __init__(self) -> None:
        self.lock = threading.Lock()
        self.calculi: dict[str, CalculusSpec] = {}
        self.sessions: dict[str, ProofSession] = {}
        self.session_locks: dict[str, threading.Lock] = {}
        self.session_calculus: dict[str, str] = {}
        self._counter = 0

    def fresh(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}{self._counter}"


def _calculus_view(cid: str, spec: CalculusSpec) -> dict:
    return {
        "id": cid,
        "name": spec.name,
        "zones": [{"name": z.name, "side": z.side,
                   "weakening": z.weakening, "contraction": z.contraction}
                  for z in spec.zones],
        "rules": [{"name": r.name, "kind": r.kind,
                   "premises": len(r.premises),
                   "latex": render_rule(r, spec)}
                  for r in spec.rules],
        "identityRule": spec.identity_rule,
    }


def _session_view(sid: str, session: ProofSession) -> dict:
    spec = session.calculus
    goal_paths = {path: gid for gid, path in session.state.goals}
    return {
        "id": sid,
        "tree": tree_to_dict(session.root, spec, goal_ids=goal_paths),
        "proofLatex": render_proof(session.root, spec),
        "goals": [{"id": gid, "latex": render_sequent(s, spec)}
                  for gid, s in session.open_goals],
        "complete": session.complete,
        "historyDepth": len(session.history),
    }


def _goal_applications(session: ProofSession, goal_id: str
                       ) -> list[tuple[int, Application]]:
    for gid, sequent in session.open_goals:
        if gid == goal_id:
            return list(enumerate(all_applications(session.calculus,
                                                   sequent)))
    raise StaleGoal(goal_id)


def create_app() -> FastAPI:
    app = FastAPI(title="sequitur", version="1")
    reg = _Registry()

    @app.post("/v1/calculi", status_code=201)
    def post_calculus(body: CalculusIn) -> dict:
        try:
            spec = parse_calculus(body.text)
        except CalculusParseError as e:
            raise HTTPException(422, detail=[
                {"line": d.line, "col": d.col, "code": d.code,
                 "message": d.message} for d in e.diagnostics])
        with reg.lock:
            cid = reg.fresh("c")
            reg.calculi[cid] = spec
        return _calculus_view(cid, spec)

    @app.get("/v1/calculi/{cid}")
    def get_calculus(cid: str) -> dict:
        spec = reg.calculi.get(cid)
        if spec is None:
            raise HTTPException(404, detail=f"unknown calculus {cid}")
        return _calculus_view(cid, spec)

    @app.post("/v1/sessions", status_code=201)
    def post_session(body: SessionIn) -> dict:
        spec = reg.calculi.get(body.calculusId)
        if spec is None:
            raise HTTPException(404,
                                detail=f"unknown calculus {body.calculusId}")
        try:
            goal = parse_goal(body.goal, spec)
            session = new_session(spec, goal)
        except CalculusParseError as e:
            raise HTTPException(422, detail=[
                {"line": d.line, "col": d.col, "code": d.code,
                 "message": d.message} for d in e.diagnostics])
        except IllegalApplication as e:
            raise HTTPException(422, detail=str(e))
        with reg.lock:
            sid = reg.fresh("s")
            reg.sessions[sid] = session
            reg.session_locks[sid] = threading.Lock()
            reg.session_calculus[sid] = body.calculusId
        return _session_view(sid, session)

    def _session(sid: str) -> ProofSession:
        session = reg.sessions.get(sid)
        if session is None:
            raise HTTPException(404, detail=f"unknown session {sid}")
        return session

    @app.get("/v1/sessions/{sid}")
    def get_session(sid: str) -> dict:
        return _session_view(sid, _session(sid))

    @app.get("/v1/sessions/{sid}/goals/{gid}/applications")
    def get_applications(sid: str, gid: str,
                         rule: Optional[str] = None) -> list[dict]:
        session = _session(sid)
        spec = session.calculus
        try:
            indexed = _goal_applications(session, gid)
        except StaleGoal as e:
            raise HTTPException(409, detail=f"stale goal {e}")
        out = []
        for i, app_ in indexed:
            if rule is not None and app_.rule != rule:
                continue
            out.append({
                "index": i,
                "rule": app_.rule,
                "premises": [render_sequent(p, spec)
                             for p in app_.premises],
            })
        return out

    @app.post("/v1/sessions/{sid}/apply")
    def post_apply(sid: str, body: ApplyIn) -> dict:
        session = _session(sid)
        lock = reg.session_locks[sid]
        with lock:
            session = reg.sessions[sid]
            try:
                indexed = _goal_applications(session, body.goalId)
            except StaleGoal as e:
                raise HTTPException(409, detail=f"stale goal {e}")
            by_index = dict(indexed)
            app_ = by_index.get(body.applicationIndex)
            if app_ is None:
                raise HTTPException(
                    422, detail=f"IllegalApplication: no option"
                                f" {body.applicationIndex}")
            try:
                updated = apply_to_goal(session, body.goalId, app_)
            except StaleGoal as e:
                raise HTTPException(409, detail=f"stale goal {e}")
            except IllegalApplication as e:
                raise HTTPException(422, detail=f"IllegalApplication: {e}")
            reg.sessions[sid] = updated
        return _session_view(sid, updated)

    @app.post("/v1/sessions/{sid}/undo")
    def post_undo(sid: str) -> dict:
        _session(sid)
        lock = reg.session_locks[sid]
        with lock:
            updated = undo(reg.sessions[sid])
            reg.sessions[sid] = updated
        return _session_view(sid, updated)

    @app.post("/v1/calculi/{cid}/checks")
    def post_check(cid: str, body: CheckIn) -> dict:
        spec = reg.calculi.get(cid)
        if spec is None:
            raise HTTPException(404, detail=f"unknown calculus {cid}")
        params = body.params or {}
        depth = params.get("depth")
        kwargs = {"depth_bound": depth} if depth is not None else {}
        try:
            if body.property == "identity":
                report = check_identity_expansion(spec, **kwargs)
            elif body.property == "weakening":
                report = check_weakening_admissibility(spec)
            elif body.property == "invert":
                report = check_invertibility(spec, params["rule"], **kwargs)
            elif body.property == "permute":
                report = check_permutability(spec, params["ruleUp"],
                                             params["ruleDown"], **kwargs)
            elif body.property == "cut":
                rule = params.get("rule") or next(
                    (r.name for r in spec.rules if r.kind == "cut"), None)
                if rule is None:
                    raise HTTPException(422, detail="no cut rule declared")
                report = check_cut_elimination(spec, rule, **kwargs)
            else:
                raise HTTPException(
                    422, detail=f"unknown property {body.property}")
        except KeyError as e:
            raise HTTPException(422, detail=f"missing parameter {e}")
        except SequiturError as e:
            raise HTTPException(422, detail=str(e))
        return report_to_dict(report, spec)

    @app.get("/", response_class=HTMLResponse)
    def index() -> str:
        return ("<!doctype html><title>sequitur</title>"
                "<p>sequitur API is running; see /docs for the schema"
                " or serve the frontend for the workbench UI.</p>")

    return app
