"""Resource caps shared by the decision procedures.

Caps live in a context variable so nested constructions pick them up
without threading arguments through every call, and so concurrent
threads can use different settings.
"""

from __future__ import annotations

import contextlib
import os
from contextvars import ContextVar
from dataclasses import dataclass, fields, replace

ENV_VAR = "PARIKH_KIT_CAPS"


@dataclass(frozen=True)
class Limits:
    solver_cap: int = 10**6
    support_cap: int = 14
    monoid_cap: int = 10**4
    cd_bound: int = 8

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise ValueError(f"{f.name} must be >= 1")


def parse_caps(text: str) -> dict[str, int]:
    """Parse ``"solver_cap=1000,monoid_cap=50"`` into keyword overrides."""
    known = {f.name for f in fields(Limits)}
    out: dict[str, int] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in known:
            raise ValueError(f"bad cap override {item!r}")
        out[key] = int(value)
    return out


def _initial() -> Limits:
    text = os.environ.get(ENV_VAR)
    return Limits(**parse_caps(text)) if text else Limits()


_current: ContextVar[Limits] = ContextVar("parikh_kit_limits", default=_initial())


def current_limits() -> Limits:
    return _current.get()


@contextlib.contextmanager
def limits(**overrides: int):
    """Temporarily override caps: ``with limits(solver_cap=10**4): ...``."""
    token = _current.set(replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
