"""Set families over a ground set ``[n] = {1, ..., n}``.

A vertex set is a plain ``int`` bitmask: vertex ``v`` is bit ``v - 1``.  With
that encoding the integer order of masks is exactly the colex order of the
sets, so sorting members numerically gives the canonical colex sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import DomainError, FamParseError, LinkSpecError, UniformityError

VertexSet = int

MAX_N = 64
EMPTY_SET_TOKEN = "{}"


# ---------------------------------------------------------------------------
# vertex-set helpers
# ---------------------------------------------------------------------------

def vset(*vertices: int) -> VertexSet:
    """Build a vertex set from 1-based vertices: ``vset(1, 3) == 0b101``."""
    return from_vertices(vertices)


def from_vertices(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        if not 1 <= v <= MAX_N:
            raise DomainError(f"vertex {v} outside 1..{MAX_N}")
        mask |= 1 << (v - 1)
    return mask


def vertices(mask: VertexSet) -> tuple[int, ...]:
    """Ascending 1-based vertices of ``mask``."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def popcount(mask: VertexSet) -> int:
    return mask.bit_count()


def ground(n: int) -> VertexSet:
    return (1 << n) - 1


def iter_bits(mask: VertexSet) -> Iterator[int]:
    """Yield the single-bit masks of ``mask`` from lowest to highest."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def submasks(mask: VertexSet) -> Iterator[VertexSet]:
    """Every subset of ``mask`` in increasing (colex) order, starting at 0."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def k_subsets(mask: VertexSet, r: int) -> list[VertexSet]:
    """All ``r``-subsets of ``mask`` in colex order."""
    if r < 0:
        return []
    bits = list(iter_bits(mask))
    return sorted(sum(c) for c in combinations(bits, r))


def format_set(mask: VertexSet) -> str:
    return "{" + ",".join(map(str, vertices(mask))) + "}"


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinkSpec:
    """The pair ``(A, B)`` selecting the view of members containing A and avoiding B."""

    anchor: VertexSet = 0
    excluded: VertexSet = 0

    def __post_init__(self) -> None:
        if self.anchor < 0 or self.excluded < 0:
            raise LinkSpecError("vertex sets must be non-negative bitmasks")
        if self.anchor & self.excluded:
            raise LinkSpecError(
                f"anchor {format_set(self.anchor)} meets excluded set {format_set(self.excluded)}"
            )


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"ground size must be an integer, got {n!r}")
    if not 1 <= n <= MAX_N:
        raise DomainError(f"ground size n={n} outside 1..{MAX_N}")


@dataclass(frozen=True)
class Family:
    """An immutable set family over ``[n]``.

    ``members`` is a strictly increasing tuple of bitmasks (colex order).  ``k``
    is the uniformity: it may be declared (needed for empty families) and is
    otherwise inferred when all members share one cardinality.
    """

    n: int
    members: tuple[VertexSet, ...] = ()
    k: int | None = None

    def __post_init__(self) -> None:
        _check_n(self.n)
        members = self.members
        if not isinstance(members, tuple):
            members = tuple(members)
            object.__setattr__(self, "members", members)
        top = ground(self.n)
        prev = -1
        for m in members:
            if m <= prev:
                raise DomainError("members must be distinct and in increasing colex order")
            prev = m
        if members and (members[-1] & ~top or members[0] < 0):
            raise DomainError(f"member outside the ground set [{self.n}]")
        sizes = {m.bit_count() for m in members}
        if self.k is None:
            if len(sizes) == 1:
                object.__setattr__(self, "k", sizes.pop())
        else:
            if not 0 <= self.k <= self.n:
                raise UniformityError(f"uniformity k={self.k} outside 0..{self.n}")
            if sizes and sizes != {self.k}:
                raise UniformityError(f"declared {self.k}-uniform but member sizes are {sorted(sizes)}")

    @classmethod
    def _trusted(cls, n: int, members: tuple[VertexSet, ...], k: int | None) -> "Family":
        # Skips validation; callers guarantee sorted distinct members of size k.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "members", members)
        object.__setattr__(obj, "k", k)
        return obj

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[VertexSet], k: int | None = None) -> "Family":
        return cls(n, tuple(sorted(set(masks))), k)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]], k: int | None = None) -> "Family":
        """Build from iterables of 1-based vertices; duplicate sets collapse."""
        return cls.from_masks(n, (from_vertices(s) for s in sets), k)

    @classmethod
    def complete(cls, n: int, k: int) -> "Family":
        """All of ``[n]^(k)``."""
        _check_n(n)
        return cls._trusted(n, tuple(k_subsets(ground(n), k)), k)

    @classmethod
    def star(cls, n: int, k: int, center: int = 1) -> "Family":
        """All k-sets of ``[n]`` containing ``center``."""
        _check_n(n)
        c = 1 << (center - 1)
        rest = k_subsets(ground(n) & ~c, k - 1)
        return cls._trusted(n, tuple(sorted(r | c for r in rest)), k)

    @classmethod
    def empty(cls, n: int, k: int | None = None) -> "Family":
        return cls(n, (), k)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in set(self.members)

    def __repr__(self) -> str:
        body = ", ".join(format_set(m) for m in self.members)
        return f"Family(n={self.n}, k={self.k}, [{body}])"

    def sets(self) -> list[tuple[int, ...]]:
        return [vertices(m) for m in self.members]

    @property
    def support(self) -> VertexSet:
        """Union of all members (the vertices that actually occur)."""
        out = 0
        for m in self.members:
            out |= m
        return out

    def require_uniform(self, min_k: int = 0) -> int:
        """Return the uniformity or raise :class:`UniformityError`."""
        if self.k is None:
            if self.members:
                raise UniformityError("family is not uniform")
            raise UniformityError("empty family has no declared uniformity")
        if self.k < min_k:
            raise UniformityError(f"operation needs k >= {min_k}, family is {self.k}-uniform")
        return self.k


# ---------------------------------------------------------------------------
# raw mask kernels (shared with the sweep code)
# ---------------------------------------------------------------------------

def shadow_masks(members: Iterable[VertexSet]) -> set[VertexSet]:
    """Literal shadow ``{F - x : x in F}``; the empty set contributes nothing."""
    out: set[VertexSet] = set()
    for m in members:
        b = m
        while b:
            low = b & -b
            out.add(m ^ low)
            b ^= low
    return out


def link_masks(members: Iterable[VertexSet], anchor: VertexSet, excluded: VertexSet) -> list[VertexSet]:
    return [m ^ anchor for m in members if m & anchor == anchor and not m & excluded]


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def shadow(F: Family) -> Family:
    """Shadow of a k-uniform family, k >= 1, as a (k-1)-uniform family."""
    k = F.require_uniform(min_k=1)
    return Family._trusted(F.n, tuple(sorted(shadow_masks(F.members))), k - 1)


def link(F: Family, spec: LinkSpec) -> Family:
    """Members containing ``spec.anchor`` and avoiding ``spec.excluded``, anchor removed.

    The result keeps the ambient ground set ``[n]``.
    """
    top = ground(F.n)
    if (spec.anchor | spec.excluded) & ~top:
        raise DomainError(f"anchor or excluded set leaves the ground set [{F.n}]")
    a = spec.anchor.bit_count()
    if F.k is None:
        if F.members:
            raise UniformityError("link needs a uniform family")
        return Family._trusted(F.n, (), None)
    if a > F.k:
        raise DomainError(f"anchor of size {a} exceeds uniformity {F.k}")
    out = link_masks(F.members, spec.anchor, spec.excluded)
    out.sort()
    return Family._trusted(F.n, tuple(out), F.k - a)


def restrict(F: Family, excluded: VertexSet) -> Family:
    """The induced family on ``[n] - excluded``."""
    return link(F, LinkSpec(0, excluded))


def join_vertex(H: Family, x: int) -> Family:
    """``{h + x : h in H}``; every member must avoid ``x``."""
    if not 1 <= x <= H.n:
        raise DomainError(f"vertex {x} outside [{H.n}]")
    bit = 1 << (x - 1)
    if any(m & bit for m in H.members):
        raise DomainError(f"a member already contains vertex {x}")
    k = None if H.k is None else H.k + 1
    return Family._trusted(H.n, tuple(sorted(m | bit for m in H.members)), k)


def _all_pairs_meet(a: tuple[VertexSet, ...], b: tuple[VertexSet, ...]) -> bool:
    for x in a:
        for y in b:
            if not x & y:
                return False
    return True


def is_intersecting(F: Family) -> bool:
    """Every two members meet, a member with itself included.

    So any family containing the empty set is not intersecting.
    """
    return _all_pairs_meet(F.members, F.members)


def is_cross_intersecting(F: Family, G: Family) -> bool:
    if F.n != G.n:
        raise DomainError(f"ground sets differ: [{F.n}] vs [{G.n}]")
    return _all_pairs_meet(F.members, G.members)


def is_t_union(F: Family, t: int) -> bool:
    ms = F.members
    for i, x in enumerate(ms):
        for y in ms[i:]:
            if (x | y).bit_count() > t:
                return False
    return True


def is_antichain(F: Family) -> bool:
    """No member is a proper subset of another member."""
    ms = F.members
    for i, x in enumerate(ms):
        for y in ms[i + 1:]:
            # colex order: a subset always precedes its supersets
            if x & y == x:
                return False
    return True


def degrees(F: Family) -> list[int]:
    """``degrees(F)[i - 1]`` is the number of members containing vertex ``i``."""
    out = [0] * F.n
    for m in F.members:
        for v in vertices(m):
            out[v - 1] += 1
    return out


def min_degree(F: Family) -> int:
    """Minimum degree over all of ``[n]``, uncovered vertices included."""
    if not F.members:
        raise DomainError("minimum degree of an empty family is undefined")
    return min(degrees(F))


# ---------------------------------------------------------------------------
# .fam text format
# ---------------------------------------------------------------------------

def _set_line(mask: VertexSet) -> str:
    return " ".join(map(str, vertices(mask))) if mask else EMPTY_SET_TOKEN


def format_fam(F: Family) -> str:
    """Render ``F`` as ``.fam`` text; members appear in colex order."""
    lines = [f"{F.n} {F.k if F.k is not None else 0}"]
    lines.extend(_set_line(m) for m in F.members)
    return "\n".join(lines) + "\n"


def _parse_header(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise FamParseError("header must be 'n k'", lineno)
    try:
        n, k = int(parts[0]), int(parts[1])
    except ValueError:
        raise FamParseError("header must be two integers", lineno) from None
    if not 1 <= n <= MAX_N:
        raise FamParseError(f"n={n} outside 1..{MAX_N}", lineno)
    if not 0 <= k <= n:
        raise FamParseError(f"k={k} outside 0..n", lineno)
    return n, k


def _parse_set(line: str, n: int, lineno: int) -> VertexSet:
    if line == EMPTY_SET_TOKEN:
        return 0
    mask = 0
    prev = 0
    for tok in line.split():
        try:
            v = int(tok)
        except ValueError:
            raise FamParseError(f"not an integer: {tok!r}", lineno) from None
        if not 1 <= v <= n:
            raise FamParseError(f"vertex {v} outside [1,{n}]", lineno)
        if v <= prev:
            raise FamParseError("vertices must be strictly ascending", lineno)
        prev = v
        mask |= 1 << (v - 1)
    return mask


def parse_fam(text: str) -> Family:
    """Parse ``.fam`` text.

    Line one is ``n k`` (``k = 0`` meaning non-uniform).  Each following line
    is one set of strictly ascending vertices; ``{}`` denotes the empty set.
    Lines starting with ``#`` are comments; a blank line or EOF ends the family.
    """
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and lines[idx].strip().startswith("#"):
        idx += 1
    if idx >= len(lines) or not lines[idx].strip():
        raise FamParseError("missing header", idx + 1)
    n, k = _parse_header(lines[idx].strip(), idx + 1)
    seen: set[VertexSet] = set()
    for lineno in range(idx + 2, len(lines) + 1):
        line = lines[lineno - 1].strip()
        if not line:
            break
        if line.startswith("#"):
            continue
        mask = _parse_set(line, n, lineno)
        if k and mask.bit_count() != k:
            raise FamParseError(f"set has size {mask.bit_count()}, header declares k={k}", lineno)
        if mask in seen:
            raise FamParseError("duplicate set", lineno)
        seen.add(mask)
    return Family(n, tuple(sorted(seen)), k if k else None)


def read_fam(path: str) -> Family:
    with open(path, encoding="utf-8") as fh:
        return parse_fam(fh.read())


def to_inline(F: Family) -> str:
    """Single-line ``.fam``: header and sets joined by ``" | "``."""
    return " | ".join(format_fam(F).rstrip("\n").split("\n"))


def from_inline(text: str) -> Family:
    return parse_fam("\n".join(part.strip() for part in text.split("|")) + "\n")
