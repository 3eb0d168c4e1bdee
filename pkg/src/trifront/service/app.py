"""HTTP service over a front snapshot.

The service is read-only over an immutable front by default; live mode runs
the optimizer on a background worker and swaps in a fresh snapshot at every
checkpoint. All analytics (filtering, percentiles, representatives) are
computed here so clients never re-implement them.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..frontio import FrontDocument
from ..preferences import (
    PreferenceFilter,
    ProfileConfig,
    UnknownProfileError,
    filter_region,
    representatives,
    thresholds_for_labels,
)
from .live import LiveRunner
from .schemas import (
    EmptyRegionResponse,
    EntryModel,
    FilterRequest,
    FilterResponse,
    ProfilesResponse,
    ProgressResponse,
    RepresentativesModel,
    RepresentativesResponse,
    ThresholdsModel,
)


def _entry_model(front: FrontDocument, entry) -> EntryModel:
    entries = front.entries
    idx = next(i for i, e in enumerate(entries) if e.box == entry.box)
    return EntryModel(
        id=idx,
        weights=entry.weights.tolist(),
        risk=entry.objectives.risk,
        ret=entry.objectives.ret,
        carbon=entry.objectives.carbon,
        box=list(entry.box),
    )


def create_app(
    front: FrontDocument | None,
    profiles: ProfileConfig | None = None,
    live: LiveRunner | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    profiles = profiles or ProfileConfig()
    app = FastAPI(title="trifront", version="0.1.0")
    state = {"front": front}
    if live is not None:
        live.on_snapshot(lambda doc: state.update(front=doc))

    @app.exception_handler(RequestValidationError)
    async def _validation_as_400(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"status": "malformed", "detail": exc.errors()})

    def current_front() -> FrontDocument:
        doc = state["front"]
        if doc is None:
            raise HTTPException(status_code=503, detail="no front snapshot available yet")
        return doc

    @app.get("/front")
    def get_front() -> JSONResponse:
        return JSONResponse(content=current_front().payload)

    @app.get("/profiles")
    def get_profiles() -> ProfilesResponse:
        doc = current_front()
        resolved_green = {
            label: thresholds_for_labels(doc.archive, profiles, label, next(iter(profiles.risk))).p_g
            for label in profiles.green
        }
        resolved_risk = {
            label: thresholds_for_labels(doc.archive, profiles, next(iter(profiles.green)), label).p_r
            for label in profiles.risk
        }
        return ProfilesResponse(
            green=dict(profiles.green),
            risk=dict(profiles.risk),
            resolved={"green": resolved_green, "risk": resolved_risk},
        )

    @app.post("/filter")
    def post_filter(req: FilterRequest):
        doc = current_front()
        flt = PreferenceFilter(p_g=req.p_g, p_r=req.p_r)
        region = filter_region(doc.archive, flt)
        thresholds = ThresholdsModel(p_g=flt.p_g, p_r=flt.p_r)
        if region.is_empty:
            return JSONResponse(
                status_code=409,
                content=EmptyRegionResponse(thresholds=thresholds).model_dump(),
            )
        boxes = {e.box for e in region.entries}
        ids = [i for i, e in enumerate(doc.entries) if e.box in boxes]
        return FilterResponse(status="ok", thresholds=thresholds, entry_ids=ids)

    @app.get("/representatives")
    def get_representatives(
        green: str | None = Query(default=None),
        risk: str | None = Query(default=None),
        p_g: float | None = Query(default=None),
        p_r: float | None = Query(default=None),
    ):
        doc = current_front()
        if green is not None and risk is not None and p_g is None and p_r is None:
            try:
                flt = thresholds_for_labels(doc.archive, profiles, green, risk)
            except UnknownProfileError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
        elif p_g is not None and p_r is not None and green is None and risk is None:
            flt = PreferenceFilter(p_g=p_g, p_r=p_r)
        else:
            raise HTTPException(
                status_code=400,
                detail="pass either green & risk labels or p_g & p_r thresholds",
            )
        region = filter_region(doc.archive, flt)
        thresholds = ThresholdsModel(p_g=flt.p_g, p_r=flt.p_r)
        if region.is_empty:
            return JSONResponse(
                status_code=409,
                content=EmptyRegionResponse(thresholds=thresholds).model_dump(),
            )
        reps = representatives(region)
        return RepresentativesResponse(
            status="ok",
            thresholds=thresholds,
            representatives=RepresentativesModel(
                opt=_entry_model(doc, reps.opt),
                min_var=_entry_model(doc, reps.min_var),
                min_emi=_entry_model(doc, reps.min_emi),
                max_ret=_entry_model(doc, reps.max_ret),
            ),
        )

    @app.get("/progress")
    def get_progress() -> ProgressResponse:
        if live is None:
            return ProgressResponse(running=False, finished=front is not None, checkpoints=[])
        return live.progress()

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
