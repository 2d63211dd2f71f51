#!/usr/bin/env python3
"""
Error types
Input errors abort a run with exit code 2, domain errors with exit code 1.
"""

from typing import Iterable, Optional


class EpiKitError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class InputError(EpiKitError):
    """The input data cannot be used."""

    exit_code = 2


class MissingHeader(InputError):
    """No recognizable case-record header row."""


class EmptyInput(InputError):
    """No data rows to parse."""


class CycleDetected(InputError):
    """Infection chain loops back on itself."""

    def __init__(self, chain: Iterable[int]):
        self.chain = list(chain)
        path = " -> ".join(f"P{n}" for n in self.chain)
        super().__init__(f"Contact graph contains a cycle: {path}")


class DomainError(EpiKitError, ValueError):
    """A parameter or quantity is outside its valid domain."""

    exit_code = 1


class UnknownRegion(DomainError):
    def __init__(self, region: str, known: Optional[Iterable[str]] = None):
        self.region = region
        message = f"Unknown region: {region}"
        if known is not None:
            message += f". Known regions: {sorted(known)}"
        super().__init__(message)


class NoInfectors(DomainError):
    """R0 is undefined: no traced onward transmission."""


class NoCases(DomainError):
    """CFR is undefined: zero infected in scope."""


class StepTooLarge(DomainError):
    """Integrator left the physical range of the state."""


class OutputError(EpiKitError):
    """An output file could not be written."""

    exit_code = 2
