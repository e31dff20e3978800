"""Thermonuclear reaction-rate integrals in closed form.

The non-resonant, cut-off, screened and depleted rate integrals, the
resonant rate, and two general Mellin-Barnes families are evaluated as
Meijer G / Fox H residue series, with an independent adaptive quadrature
oracle and the leading large-z asymptotics alongside.
"""

from __future__ import annotations

from .errors import (
    ContourPlacementError,
    DivergenceError,
    DomainError,
    IrrationalCoefficientError,
    NonConvergenceError,
    PoleError,
    QuadratureBudgetError,
    ThermorateError,
    UnsupportedMultiplicityError,
)
from .kernels import BACKEND
from .meijer import GSpec, HSpec, enumerate_poles, g_contour, g_series, h_series, h_to_g
from .pfq import SeriesValue, pfq
from .quadrature import QuadResult, quad_rate
from .queries import (
    CutOff,
    Depleted,
    GeneralH,
    GeneralMB,
    NonResonant,
    RateQuery,
    Resonant,
    Screened,
)
from .rates import (
    asym,
    cancellation_wall,
    closed,
    j1_closed,
    j2_closed,
    j3_closed,
    j4_closed,
    rate_general,
    rate_general_h,
    resonant_closed,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ContourPlacementError", "CutOff", "Depleted", "DivergenceError", "DomainError",
    "GSpec", "GeneralH", "GeneralMB", "HSpec", "IrrationalCoefficientError", "NonConvergenceError",
    "NonResonant", "PoleError", "QuadResult", "QuadratureBudgetError", "RateQuery", "Resonant",
    "Screened", "SeriesValue", "ThermorateError", "UnsupportedMultiplicityError", "asym",
    "cancellation_wall", "closed", "enumerate_poles", "g_contour", "g_series", "h_series", "h_to_g",
    "j1_closed", "j2_closed", "j3_closed", "j4_closed", "pfq", "quad_rate", "rate_general",
    "rate_general_h", "resonant_closed",
]
