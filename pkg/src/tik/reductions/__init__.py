"""Problem-to-problem reductions with executable witness maps in both directions.

Every registered reduction packages three functions:

* ``construct(A, **params)`` maps a source instance to a target instance,
* ``witness_forward(A, w, **params)`` pushes a source witness through the
  construction, yielding a witness between the constructed pair,
* ``witness_recover(A, B, w_t, **params)`` pulls a target-side witness back
  to a verified source witness.

Recovery raises :class:`RecoveryError` ("witness invalid") when the given
target witness cannot be pulled back; that is a statement about the witness,
never a claim that the instances are non-isomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

from ..tensor import identity_witness, instance_dims


class RecoveryError(RuntimeError):
    """The supplied target-side witness is invalid for backward transport."""


@dataclass(frozen=True)
class Reduction:
    """A reduction with both witness directions made executable.

    ``target_dims`` maps source dimensions to the exact output dimensions,
    so callers can sanity-check constructions without running them.
    """

    name: str
    source: str
    target: str
    construct: Callable
    witness_forward: Callable
    witness_recover: Callable
    target_dims: Callable
    params: tuple = field(default=())  # names of accepted keyword parameters

    def __repr__(self):  # pragma: no cover - cosmetic
        return f"Reduction({self.name}: {self.source} -> {self.target})"


REGISTRY: dict[str, Reduction] = {}


def _guarded_recover(red: Reduction) -> Callable:
    """Reject mis-tagged or mis-shaped target witnesses up front, so every
    recovery sees matrices that at least fit the constructed target."""
    inner = red.witness_recover

    def recover(A, B, wt, **params):
        if wt.tag != red.target:
            raise RecoveryError(
                f"witness invalid: tag {wt.tag!r} does not match the"
                f" target problem {red.target!r}"
            )
        dims = red.target_dims(instance_dims(A), **params)
        want = tuple(M.shape for M in identity_witness(red.target, dims, wt.p).mats)
        got = tuple(M.shape for M in wt.mats)
        if want != got:
            raise RecoveryError(
                f"witness invalid: matrix shapes {got} do not fit the"
                f" constructed target (expected {want})"
            )
        return inner(A, B, wt, **params)

    return recover


def register(red: Reduction) -> Reduction:
    if red.name in REGISTRY:
        raise ValueError(f"duplicate reduction name {red.name!r}")
    red = replace(red, witness_recover=_guarded_recover(red))
    REGISTRY[red.name] = red
    return red


def get(name: str) -> Reduction:
    try:
        return REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown reduction {name!r}; registered: {known}") from None


def names() -> list[str]:
    return sorted(REGISTRY)


# Populate the registry.  Import order is cosmetic; names are unique.
from . import conjugacy  # noqa: E402,F401
from . import algebraize  # noqa: E402,F401
from . import alt_isometry  # noqa: E402,F401
from . import moncode  # noqa: E402,F401
from . import gi_gadgets  # noqa: E402,F401
from . import padding  # noqa: E402,F401
from . import forms  # noqa: E402,F401
from . import pathalgebra  # noqa: E402,F401
