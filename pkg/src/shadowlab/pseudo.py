"""Pseudo-intersecting certification by exhaustive restriction sweeps.

A family is pseudo-intersecting when every restriction ``F(X̄)`` has at least
as large a shadow as itself.  The view only depends on ``X ∩ V(F)``, so by
default the sweep runs over subsets of the support ``V(F)``; the first
violating set in colex order is reported as the witness.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .core import (
    Family,
    LinkSpec,
    VertexSet,
    ground,
    iter_bits,
    link_masks,
    shadow_masks,
    submasks,
    vertices,
)
from .errors import DomainError, UniformityError

# Smaller universes are swept in-process even when jobs > 1.
PARALLEL_MIN_BITS = 14


@dataclass(frozen=True)
class PseudoVerdict:
    holds: bool
    witness_X: VertexSet | None
    checked_universe: VertexSet

    def __post_init__(self) -> None:
        if self.holds != (self.witness_X is None):
            raise ValueError("a verdict carries a witness exactly when it fails")
        if self.witness_X is not None and self.witness_X & ~self.checked_universe:
            raise ValueError("witness must lie inside the checked universe")

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "witness_X": None if self.witness_X is None else list(vertices(self.witness_X)),
            "checked_universe": list(vertices(self.checked_universe)),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PseudoVerdict":
        from .core import from_vertices

        w = data.get("witness_X")
        return cls(bool(data["holds"]), None if w is None else from_vertices(w),
                   from_vertices(data["checked_universe"]))


def view_ok(members: Sequence[VertexSet]) -> bool:
    """``|shadow| >= |family|`` for a raw member list."""
    return len(shadow_masks(members)) >= len(members)


def _support(members: Sequence[VertexSet]) -> VertexSet:
    out = 0
    for m in members:
        out |= m
    return out


def _first_violation(members: Sequence[VertexSet], universe: VertexSet, fixed: VertexSet = 0) -> VertexSet | None:
    members = [m for m in members if not m & fixed]
    for y in submasks(universe):
        restricted = [m for m in members if not m & y]
        if restricted and len(shadow_masks(restricted)) < len(restricted):
            return fixed | y
    return None


def _chunk(args: tuple[list[VertexSet], VertexSet, VertexSet]) -> VertexSet | None:
    return _first_violation(*args)


def sweep(members: Sequence[VertexSet], universe: VertexSet, jobs: int = 1,
          min_parallel_bits: int = PARALLEL_MIN_BITS) -> VertexSet | None:
    """Colex-first ``X ⊆ universe`` whose restriction violates the shadow inequality.

    With ``jobs > 1`` the subsets are split by their top bits across worker
    processes; the global colex-first violation is the minimum of the
    per-chunk ones, so the answer does not depend on ``jobs``.
    """
    members = list(members)
    if jobs <= 1 or not members or universe.bit_count() < min_parallel_bits:
        return _first_violation(members, universe)
    bits = list(iter_bits(universe))
    split = min(len(bits), max(1, (4 * jobs - 1).bit_length()))
    high = sum(bits[-split:])
    low = universe & ~high
    tasks = [(members, low, p) for p in submasks(high)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        found = [w for w in pool.map(_chunk, tasks) if w is not None]
    return min(found) if found else None


def _require_sweepable(F: Family) -> None:
    if F.members:
        F.require_uniform(min_k=1)


def is_pseudo_intersecting(F: Family, *, prune: bool = True, jobs: int = 1) -> PseudoVerdict:
    """Check ``|∂F(X̄)| >= |F(X̄)|`` for every ``X ⊆ [n]``."""
    _require_sweepable(F)
    universe = F.support if prune else ground(F.n)
    w = sweep(F.members, universe, jobs)
    return PseudoVerdict(w is None, w, universe)


def _check_link_args(F: Family, spec: LinkSpec) -> None:
    _require_sweepable(F)
    if (spec.anchor | spec.excluded) & ~ground(F.n):
        raise DomainError(f"anchor or excluded set leaves the ground set [{F.n}]")
    if F.k is not None and spec.anchor.bit_count() > F.k:
        raise UniformityError(f"anchor larger than the uniformity k={F.k}")


def is_link_pseudo_intersecting(F: Family, spec: LinkSpec, *, prune: bool = True, jobs: int = 1) -> PseudoVerdict:
    """Decide whether the view ``F(A, B̄)`` is pseudo-intersecting.

    The witness ``X`` is the extra restriction: the failing view is
    ``F(A, (X ∪ B) - A)``.  Anchors of size ``k`` are accepted; their views
    are empty (fine) or ``{∅}`` (fails, its shadow being empty).
    """
    _check_link_args(F, spec)
    view = link_masks(F.members, spec.anchor, spec.excluded)
    universe = _support(view) if prune else ground(F.n)
    w = sweep(view, universe, jobs)
    return PseudoVerdict(w is None, w, universe)


def is_view_pseudo_intersecting_over(F: Family, spec: LinkSpec, floor: VertexSet, *,
                                     prune: bool = True, jobs: int = 1) -> PseudoVerdict:
    """Check ``|∂F(A, M - A)| >= |F(A, M - A)|`` for every ``M`` with ``floor ⊆ M ⊆ [n]``.

    ``spec.excluded`` must lie inside ``floor``.  The witness is the violating
    ``M`` itself and ``checked_universe`` is ``floor`` plus the swept coordinates.
    """
    _check_link_args(F, spec)
    top = ground(F.n)
    if floor & ~top:
        raise DomainError(f"floor leaves the ground set [{F.n}]")
    if spec.excluded & ~floor:
        raise DomainError("excluded set must lie inside the floor")
    base = link_masks(F.members, spec.anchor, floor & ~spec.anchor)
    universe = _support(base) if prune else top & ~floor & ~spec.anchor
    w = sweep(base, universe, jobs)
    return PseudoVerdict(w is None, None if w is None else floor | w, floor | universe)


def link_counts(F: Family, anchor: VertexSet, excluded: VertexSet) -> tuple[int, int]:
    """``(|∂F(A, B̄)|, |F(A, B̄)|)`` with ``B`` taken minus the anchor."""
    view = link_masks(F.members, anchor, excluded & ~anchor)
    return len(shadow_masks(view)), len(view)


def replays(F: Family, spec: LinkSpec, verdict: PseudoVerdict, *, over_floor: VertexSet | None = None) -> bool:
    """True when a failing verdict's witness reproduces a strict violation.

    For verdicts from :func:`is_view_pseudo_intersecting_over` pass the floor
    as ``over_floor``; the witness then names ``M`` directly.
    """
    if verdict.holds:
        return True
    X = verdict.witness_X
    excluded = X if over_floor is not None else X | spec.excluded
    s, f = link_counts(F, spec.anchor, excluded)
    return s < f
