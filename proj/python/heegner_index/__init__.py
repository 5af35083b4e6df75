"""Heegner point traces, the index I_E and components of X0+(N)(R)."""

import json

from ._core import (
    DomainError,
    HeegnerError,
    an,
    class_number,
    labels,
    nu,
    trace,
    weight,
)
from ._core import survey_json as _survey_json

__all__ = [
    "DomainError",
    "HeegnerError",
    "an",
    "class_number",
    "labels",
    "nu",
    "survey",
    "trace",
    "weight",
]


def survey(curves="", dmax=163, prec=256, jobs=1, revalidate=True):
    """Survey a curve table given as text (default: the built-in table)."""
    return json.loads(_survey_json(curves, dmax, prec, jobs, revalidate))
