"""Symmetric compositions of a basic one-step method.

A composition applies the base method with substep fractions
``gamma_1 .. gamma_s`` of the nominal step.  The fractions are palindromic
and sum to 1; the triple jump produces fraction sets that raise an even
order p to p+2 per level, with a negative middle fraction at every level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .tableau import ButcherTableau, PartitionedPair

BaseMethod = Union[ButcherTableau, PartitionedPair]

_SYMMETRY_TOL = 1e-14
_SUM_TOL = 1e-12


@dataclass(frozen=True)
class CompositionScheme:
    """A symmetric composition of ``base`` with substep fractions ``gammas``."""

    base: BaseMethod
    gammas: np.ndarray
    order: int
    name: str

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=float)
        if g.ndim != 1 or g.size == 0:
            raise ValueError("gammas must be a non-empty vector")
        if not np.all(np.isfinite(g)):
            raise ValueError("gammas must be finite")
        if float(np.max(np.abs(g - g[::-1]))) > _SYMMETRY_TOL:
            raise ValueError("composition fractions must be palindromic")
        if abs(float(g.sum()) - 1.0) > _SUM_TOL:
            raise ValueError(f"composition fractions must sum to 1, got {g.sum()!r}")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)


def triple_jump(base_order: int, target_order: int) -> np.ndarray:
    """Substep fractions raising an even order to ``target_order``.

    Each +2 level replaces the current fraction list G by
    ``[w1*G, w0*G, w1*G]`` with ``w1 = 1/(2 - 2^(1/(p+1)))`` and
    ``w0 = -2^(1/(p+1)) * w1``, so a jump over k levels yields 3^k fractions.
    ``target_order == base_order`` returns the identity composition ``[1]``.
    """
    for label, value in (("base", base_order), ("target", target_order)):
        if not isinstance(value, int) or value < 2 or value % 2 != 0:
            raise ValueError(f"{label} order must be an even integer >= 2, got {value!r}")
    if target_order < base_order:
        raise ValueError(
            f"target order {target_order} is below base order {base_order}"
        )
    gammas = [1.0]
    p = base_order
    while p < target_order:
        root = 2.0 ** (1.0 / (p + 1))
        w1 = 1.0 / (2.0 - root)
        w0 = -root * w1
        gammas = [w * g for w in (w1, w0, w1) for g in gammas]
        p += 2
    return np.array(gammas)


def _base_order(base: BaseMethod) -> int:
    if isinstance(base, PartitionedPair):
        return base.first.classical_order
    return base.classical_order


def compose(base: BaseMethod, target_order: int, name: str | None = None) -> CompositionScheme:
    """Triple-jump composition of ``base`` up to ``target_order``."""
    gammas = triple_jump(_base_order(base), target_order)
    if name is None:
        base_name = base.name
        name = f"{base_name}-comp{target_order}"
    return CompositionScheme(base, gammas, target_order, name)


def compose_step(scheme: CompositionScheme, problem, h: float):
    """One-step map of the composed method on a model problem."""
    from .dynamics import StepMap  # deferred: dynamics imports this module

    return StepMap(scheme, problem, h)


def scheme_to_text(scheme: CompositionScheme) -> str:
    """One line: name, base name, the fractions (17 significant digits), order."""
    for label in (scheme.name, scheme.base.name):
        if any(ch.isspace() for ch in label):
            raise ValueError(f"name may not contain whitespace: {label!r}")
    gammas = " ".join(f"{g:.17g}" for g in scheme.gammas)
    return f"{scheme.name} {scheme.base.name} {gammas} {scheme.order}\n"


def scheme_from_text(line: str, base_lookup: Callable[[str], BaseMethod]) -> CompositionScheme:
    """Parse :func:`scheme_to_text` output; ``base_lookup`` resolves the base name."""
    parts = line.split()
    if len(parts) < 4:
        raise ValueError(f"malformed composition line: {line!r}")
    name, base_name = parts[0], parts[1]
    order = int(parts[-1])
    gammas = [float(x) for x in parts[2:-1]]
    return CompositionScheme(base_lookup(base_name), np.array(gammas), order, name)
