"""
Error hierarchy shared by every module.

Each error carries a machine-readable ``code`` and the process ``exit_code``
used by the CLI. Exit code 1 is reserved for unexpected failures.
"""

from __future__ import annotations

from typing import Any, List, Optional, Sequence


class WgonError(Exception):
    code = "error"
    exit_code = 1

    def to_payload(self) -> dict:
        return {"error": self.code, "message": str(self)}


class ParameterError(WgonError, ValueError):
    code = "invalid_parameter"
    exit_code = 2


class GeneralPositionError(WgonError, ValueError):
    code = "general_position"
    exit_code = 3

    def __init__(self, message: str, violations: Optional[Sequence[Any]] = None):
        super().__init__(message)
        self.violations: List[Any] = list(violations or [])

    def to_payload(self) -> dict:
        payload = super().to_payload()
        payload["violations"] = [
            {"kind": v.kind, "indices": list(v.indices)} for v in self.violations[:20]
        ]
        return payload


class InfeasibleError(WgonError):
    code = "infeasible"
    exit_code = 4


class ExhaustedError(WgonError):
    code = "enumeration_exhausted"
    exit_code = 5


class InstanceFormatError(WgonError, ValueError):
    code = "instance_format"
    exit_code = 6


class NonConvexPolygonError(WgonError, ValueError):
    code = "non_convex"
    exit_code = 7


class GuardrailError(ParameterError):
    code = "guardrail"
    exit_code = 8


class GenerationError(WgonError):
    code = "generation_failed"
    exit_code = 9


class AuditError(WgonError):
    code = "audit_failed"
    exit_code = 10
