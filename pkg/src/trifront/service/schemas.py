"""Pydantic request/response models for the front-explorer HTTP API."""

from __future__ import annotations

import math

from pydantic import BaseModel, field_validator


class FilterRequest(BaseModel):
    p_g: float
    p_r: float

    @field_validator("p_g", "p_r")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("threshold must be a finite number")
        return v


class ThresholdsModel(BaseModel):
    p_g: float
    p_r: float


class FilterResponse(BaseModel):
    status: str  # "ok" or "empty_region"
    thresholds: ThresholdsModel
    entry_ids: list[int]


class EntryModel(BaseModel):
    id: int
    weights: list[float]
    risk: float
    ret: float
    carbon: float
    box: list[int]


class RepresentativesModel(BaseModel):
    opt: EntryModel
    min_var: EntryModel
    min_emi: EntryModel
    max_ret: EntryModel


class RepresentativesResponse(BaseModel):
    status: str
    thresholds: ThresholdsModel
    representatives: RepresentativesModel


class EmptyRegionResponse(BaseModel):
    status: str = "empty_region"
    thresholds: ThresholdsModel
    detail: str = "aspirations infeasible on this front"


class ProfilesResponse(BaseModel):
    green: dict[str, float]
    risk: dict[str, float]
    resolved: dict[str, dict[str, float]]  # label -> resolved threshold per axis


class ProgressEntry(BaseModel):
    iteration: int
    evaluations: int
    archive_size: int
    hypervolume: float
    elapsed_s: float


class ProgressResponse(BaseModel):
    running: bool
    finished: bool
    checkpoints: list[ProgressEntry]
