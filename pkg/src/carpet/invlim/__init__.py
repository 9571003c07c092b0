"""Finite-depth model of the blow-up inverse limit over the cat map."""

from .atlas import (
    AtlasError,
    BlowupAtlas,
    Coord,
    Eigenframe,
    LimPoint,
    blow_up,
    collapse,
    default_atlas,
    dinf,
    fixed_directions,
    h_apply,
    special_point,
    stage_dist,
    transport,
)
from .falsify import EPISTEMIC_LABEL, app_falsify, ball_projection_check, spec_falsify
from .zip import ZipModel, near_homeomorphism, zip_maps

__all__ = [
    "AtlasError",
    "BlowupAtlas",
    "Coord",
    "EPISTEMIC_LABEL",
    "Eigenframe",
    "LimPoint",
    "ZipModel",
    "app_falsify",
    "ball_projection_check",
    "blow_up",
    "collapse",
    "default_atlas",
    "dinf",
    "fixed_directions",
    "h_apply",
    "near_homeomorphism",
    "spec_falsify",
    "special_point",
    "stage_dist",
    "transport",
    "zip_maps",
]
