"""CVSS v3.1 base-metric vector parsing and severity scoring.

Accepts base vectors with either the ``CVSS:3.0`` or ``CVSS:3.1`` prefix
and scores both with the v3.1 equations. Scores are computed in integer
tenths to keep the specified rounding exact and are reported as floats
with one decimal digit (0.0 through 10.0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DuplicateMetricError,
    MalformedVectorError,
    MissingMetricError,
    OutOfRangeError,
    UnknownPrefixError,
    UnsupportedMetricGroupError,
)

ACCEPTED_PREFIXES = ("CVSS:3.0", "CVSS:3.1")

_METRIC_ORDER = ("AV", "AC", "PR", "UI", "S", "C", "I", "A")

_ALLOWED_VALUES = {
    "AV": ("N", "A", "L", "P"),
    "AC": ("L", "H"),
    "PR": ("N", "L", "H"),
    "UI": ("N", "R"),
    "S": ("U", "C"),
    "C": ("H", "L", "N"),
    "I": ("H", "L", "N"),
    "A": ("H", "L", "N"),
}

# Temporal and environmental metric keys; recognised so they can be
# rejected with a distinct error rather than as generic noise.
_NON_BASE_KEYS = frozenset({
    "E", "RL", "RC",
    "CR", "IR", "AR",
    "MAV", "MAC", "MPR", "MUI", "MS", "MC", "MI", "MA",
})

_ATTACK_VECTOR = {"N": 0.85, "A": 0.62, "L": 0.55, "P": 0.2}
_ATTACK_COMPLEXITY = {"L": 0.77, "H": 0.44}
_PRIVILEGES_UNCHANGED = {"N": 0.85, "L": 0.62, "H": 0.27}
_PRIVILEGES_CHANGED = {"N": 0.85, "L": 0.68, "H": 0.5}
_USER_INTERACTION = {"N": 0.85, "R": 0.62}
_IMPACT_WEIGHT = {"H": 0.56, "L": 0.22, "N": 0.0}


class Severity(str, Enum):
    NONE = "none"
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"

    @property
    def label(self) -> str:
        return self.value.capitalize()


@dataclass(frozen=True)
class CvssVector:
    av: str
    ac: str
    pr: str
    ui: str
    s: str
    c: str
    i: str
    a: str
    # Original vector text; excluded from equality so reordered inputs
    # compare equal once parsed.
    raw: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        for key, value in zip(_METRIC_ORDER, self._values()):
            if value not in _ALLOWED_VALUES[key]:
                raise MalformedVectorError(
                    0, f"invalid value {value!r} for metric {key} "
                       f"(allowed: {'/'.join(_ALLOWED_VALUES[key])})",
                )

    def _values(self) -> tuple[str, ...]:
        return (self.av, self.ac, self.pr, self.ui, self.s, self.c, self.i, self.a)

    def vector_string(self, prefix: str = "CVSS:3.1") -> str:
        """Canonical string form: fixed prefix and metric order."""
        pairs = "/".join(f"{k}:{v}" for k, v in zip(_METRIC_ORDER, self._values()))
        return f"{prefix}/{pairs}"

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.vector_string()


def parse_vector(text: str) -> CvssVector:
    """Parse a CVSS base vector string.

    The prefix must be ``CVSS:3.0`` or ``CVSS:3.1``; the eight base
    metrics may follow in any order but each exactly once. Metric keys
    and values are case-sensitive (uppercase). Temporal or environmental
    metrics are rejected explicitly. Error positions are character
    offsets into the input.
    """
    if not isinstance(text, str):
        raise MalformedVectorError(0, "vector must be a string")
    stripped = text.strip()
    if not stripped:
        raise MalformedVectorError(0, "empty vector string")
    segments = stripped.split("/")
    prefix = segments[0]
    if prefix not in ACCEPTED_PREFIXES:
        raise UnknownPrefixError(
            f"unsupported vector prefix {prefix!r} "
            f"(expected one of {', '.join(ACCEPTED_PREFIXES)})"
        )
    if len(segments) == 1:
        raise MissingMetricError("AV")
    seen: dict[str, str] = {}
    position = len(prefix) + 1
    for segment in segments[1:]:
        if not segment:
            raise MalformedVectorError(position,
                                       "empty metric segment (doubled or trailing '/')")
        key, sep, value = segment.partition(":")
        if not sep or not key or not value:
            raise MalformedVectorError(
                position, f"metric segment {segment!r} is not KEY:VALUE")
        if key in _NON_BASE_KEYS:
            raise UnsupportedMetricGroupError(
                f"metric {key} belongs to an unsupported metric group "
                f"(only base metrics are accepted)"
            )
        if key not in _ALLOWED_VALUES:
            raise MalformedVectorError(position, f"unknown metric key {key!r}")
        if key in seen:
            raise DuplicateMetricError(key)
        if value not in _ALLOWED_VALUES[key]:
            raise MalformedVectorError(
                position, f"invalid value {value!r} for metric {key} "
                          f"(allowed: {'/'.join(_ALLOWED_VALUES[key])})",
            )
        seen[key] = value
        position += len(segment) + 1
    for key in _METRIC_ORDER:
        if key not in seen:
            raise MissingMetricError(key)
    return CvssVector(*(seen[key] for key in _METRIC_ORDER), raw=stripped)


def _roundup_tenths(value: float) -> int:
    """CVSS Roundup as an integer count of tenths.

    Scales to 1e5 first, then rounds up to the next tenth unless already
    exact, which avoids binary-float artifacts near bucket boundaries.
    """
    scaled = round(value * 100000)
    tenths, remainder = divmod(scaled, 10000)
    return tenths + 1 if remainder else tenths


def base_score_tenths(vector: CvssVector) -> int:
    """Base score as an integer 0..100 (score times ten)."""
    iss = 1.0 - (1.0 - _IMPACT_WEIGHT[vector.c]) \
              * (1.0 - _IMPACT_WEIGHT[vector.i]) \
              * (1.0 - _IMPACT_WEIGHT[vector.a])
    if vector.s == "U":
        impact = 6.42 * iss
        pr_weight = _PRIVILEGES_UNCHANGED[vector.pr]
    else:
        impact = 7.52 * (iss - 0.029) - 3.25 * (iss - 0.02) ** 15
        pr_weight = _PRIVILEGES_CHANGED[vector.pr]
    if impact <= 0:
        return 0
    exploitability = (8.22 * _ATTACK_VECTOR[vector.av] * _ATTACK_COMPLEXITY[vector.ac]
                      * pr_weight * _USER_INTERACTION[vector.ui])
    if vector.s == "U":
        return _roundup_tenths(min(impact + exploitability, 10.0))
    return _roundup_tenths(min(1.08 * (impact + exploitability), 10.0))


def base_score(vector: CvssVector) -> float:
    """CVSS v3.1 base score, one decimal digit, 0.0 through 10.0."""
    return base_score_tenths(vector) / 10.0


def severity_bucket(score: float) -> Severity:
    """Qualitative severity for a one-decimal base score.

    Buckets: 0.0 none; 0.1-3.9 low; 4.0-6.9 medium; 7.0-8.9 high;
    9.0-10.0 critical. Scores outside [0, 10] or with more than one
    decimal are rejected.
    """
    if not isinstance(score, (int, float)) or not math.isfinite(score):
        raise OutOfRangeError(f"score {score!r} is not a one-decimal value in [0, 10]")
    tenths = round(score * 10)
    if abs(score * 10 - tenths) > 1e-6 or not 0 <= tenths <= 100:
        raise OutOfRangeError(f"score {score!r} is not a one-decimal value in [0, 10]")
    if tenths == 0:
        return Severity.NONE
    if tenths <= 39:
        return Severity.LOW
    if tenths <= 69:
        return Severity.MEDIUM
    if tenths <= 89:
        return Severity.HIGH
    return Severity.CRITICAL


def score_vector(text: str) -> tuple[CvssVector, float, Severity]:
    """Parse, score and bucket in one call (shared by CLI and API)."""
    vector = parse_vector(text)
    score = base_score(vector)
    return vector, score, severity_bucket(score)
