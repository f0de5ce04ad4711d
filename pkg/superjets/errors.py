"""Exceptions and the verification verdict shared by all modules."""

from dataclasses import dataclass, field
from typing import Any


class SuperjetsError(Exception):
    pass


class AlgebraMismatchError(SuperjetsError):
    pass


class GradingError(SuperjetsError):
    pass


class PreconditionError(SuperjetsError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CrossedModuleError(PreconditionError):
    def __init__(self, identity, message, witness=None):
        super().__init__(f"{identity}: {message}", witness)
        self.identity = identity


class CocycleError(PreconditionError):
    pass


class SchemaError(SuperjetsError):
    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check. Unpacks as ``(ok, message)``."""

    ok: bool
    kind: str = "ok"
    message: str = "ok"
    witness: Any = field(default=None, compare=False)

    def __iter__(self):
        return iter((self.ok, self.message))

    def __bool__(self):
        return self.ok

    @classmethod
    def passed(cls, message="ok"):
        return cls(True, "ok", message)

    @classmethod
    def failed(cls, kind, message, witness=None):
        return cls(False, kind, message, witness)

    def to_dict(self):
        return {
            "ok": self.ok,
            "kind": self.kind,
            "message": self.message,
            "witness": self.witness,
        }
