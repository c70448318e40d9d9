"""Verification toolkit for twisted conormal-bundle constructions.

Checks, over a catalog of explicit base submanifolds with closed 1-forms,
that the affine-translated conormal bundle is special Lagrangian: once
through the second-fundamental-form condition system and once through an
independent pointwise calibration test of the built immersion.
"""

from .austere import PhaseSpec, check_pair, cophase
from .catalog import EXAMPLE_IDS, instantiate, validate_inputs
from .geometry import Chart, OneFormField
from .polyalg import identity_suite
from .report import CheckReport
from .sampling import SampleSpec
from .slag import build_immersion, verify_special_lagrangian

__all__ = [
    "PhaseSpec",
    "check_pair",
    "cophase",
    "EXAMPLE_IDS",
    "instantiate",
    "validate_inputs",
    "Chart",
    "OneFormField",
    "identity_suite",
    "CheckReport",
    "SampleSpec",
    "build_immersion",
    "verify_special_lagrangian",
]

__version__ = "0.1.0"
