"""Structured errors and the verdict record shared by all decision procedures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class CoarseError(Exception):
    """Base class for every structured error raised by this package."""


class CarrierMismatch(CoarseError):
    """Two objects over different carriers were combined."""


class IncompatibleStructures(CoarseError):
    """Coarse and bornological generators violate compatibility.

    Always carries a concrete witness: the entourage pair (escaping point,
    bounded point) whose thickening leaves the bounded region.
    """

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class NonInvariantGenerator(CoarseError):
    """A generated structure is not invariant under the group action."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class InvalidMorphism(CoarseError):
    """A map fails properness, controlledness or equivariance.

    ``violations`` lists every failure, each a dict with a ``kind`` key and
    a pointwise witness.
    """

    def __init__(self, message: str, violations: list | None = None):
        super().__init__(message)
        self.violations = violations or []


class NotAnEntourage(CoarseError):
    """A relation passed as an entourage lies outside the coarse structure."""


class CapExceeded(CoarseError):
    """A search or enumeration exceeded its configured cap."""

    def __init__(self, message: str, cap: int | None = None, hint: str = ""):
        super().__init__(message)
        self.cap = cap
        self.hint = hint


class NonClassicalInput(CoarseError):
    """An operation defined for classical (locally bounded) spaces got a
    generalized one."""


class UnsupportedCombination(CoarseError):
    """A symbolic tag pair falls outside the closed-world catalog."""


class UnsupportedDiagram(CoarseError):
    """A symbolic diagram whose set-level colimit the symbolic tier cannot
    represent."""


class DocumentError(CoarseError):
    """A JSON document failed to parse or validate.

    ``locations`` is a list of {path, message} dicts, one per error.
    """

    def __init__(self, message: str, locations: list | None = None):
        super().__init__(message)
        self.locations = locations or []


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure: a boolean plus an explicit witness.

    ``witness`` is procedure specific; a failing verdict always carries one.
    """

    ok: bool
    reason: str = ""
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok
