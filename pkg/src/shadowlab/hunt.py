"""Instance generation and theorem sweeps.

Exhaustive enumeration is a pre-order DFS over colex-ordered candidate sets
that only ever extends a family by a compatible candidate of larger index.
The tree is split at its top level into independent subtrees (one per first
member, plus the empty family), which is also the unit of parallel work:
results merge in subtree order, so any worker count gives the same report.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterator

import numpy as np

from .construct import build_chain_cross, build_chain_intersecting
from .core import (
    Family,
    VertexSet,
    from_vertices,
    ground,
    is_antichain,
    is_cross_intersecting,
    is_t_union,
    k_subsets,
    to_inline,
)
from .errors import BudgetExceeded, CertificationError, DomainError, TheoremViolation
from . import verify as V

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "SHADOWLAB_BUDGET"
RNG_NAME = "numpy.random.PCG64 (SeedSequence(seed).spawn per sample)"
RANDOM_CHUNK = 50

MODES = ("exhaustive", "random", "structured")
INTERSECTING, CROSS, ANTICHAIN = "intersecting", "cross-intersecting", "union-antichain"
CONSTRAINTS = (INTERSECTING, CROSS, ANTICHAIN)

CLAIMS_BY_CONSTRAINT = {
    INTERSECTING: (V.KATONA, V.LOCAL, V.KK_BOUND, V.REPLAY),
    CROSS: (V.FRANKL_CROSS, V.LOCAL_CROSS, V.KK_BOUND, V.REPLAY),
    ANTICHAIN: (V.UNION_ANTICHAIN,),
}


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise DomainError(f"{BUDGET_ENV}={raw!r} is not an integer") from None
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class SearchSpace:
    n: int
    k: int | None = None
    ell: int | None = None
    mode: str = "exhaustive"
    constraint: str | None = None
    samples: int = 100
    seed: int = 0
    max_family_size: int | None = None
    budget: int | None = None
    canonical: bool = False
    subsample: bool = False

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.constraint is not None and self.constraint not in CONSTRAINTS:
            raise DomainError(f"unknown constraint {self.constraint!r}")
        if not 1 <= self.n <= 64:
            raise DomainError(f"n={self.n} outside 1..64")
        if self.canonical and self.n > 7:
            raise DomainError("canonical enumeration is limited to n <= 7")
        if self.samples < 0:
            raise DomainError("samples must be non-negative")

    def effective_budget(self) -> int:
        return self.budget if self.budget is not None else default_budget()


def resolve_constraint(space: SearchSpace, claims) -> str:
    if space.constraint is not None:
        constraint = space.constraint
    elif any(c in (V.FRANKL_CROSS, V.LOCAL_CROSS) for c in claims):
        constraint = CROSS
    elif V.UNION_ANTICHAIN in claims:
        constraint = ANTICHAIN
    else:
        constraint = INTERSECTING
    bad = [c for c in claims if c not in CLAIMS_BY_CONSTRAINT[constraint]]
    if bad:
        raise DomainError(f"claims {bad} do not apply to {constraint} instances")
    if constraint in (INTERSECTING, CROSS) and (space.k is None or not 1 <= space.k <= space.n):
        raise DomainError(f"{constraint} search needs 1 <= k <= n")
    if constraint in (CROSS, ANTICHAIN) and space.ell is None:
        raise DomainError(f"{constraint} search needs ell")
    if constraint == CROSS and not 1 <= space.ell <= space.n:
        raise DomainError("cross search needs 1 <= ell <= n")
    if constraint == ANTICHAIN and space.ell < 0:
        raise DomainError("ell must be non-negative")
    return constraint


# ---------------------------------------------------------------------------
# enumeration engine
# ---------------------------------------------------------------------------

def _adjacency(cands: list[VertexSet], ok: Callable[[int, int], bool]) -> list[int]:
    adj = []
    for i, a in enumerate(cands):
        row = 0
        for j, b in enumerate(cands):
            if i != j and ok(a, b):
                row |= 1 << j
        adj.append(row)
    return adj


def _above(j: int) -> int:
    return ~((1 << (j + 1)) - 1)


def _preorder(prefix: tuple[int, ...], avail: int, adj: list[int] | None,
              max_size: int | None) -> Iterator[tuple[int, ...]]:
    """Yield ``prefix`` and every extension by compatible candidates, in pre-order.

    ``avail`` is the bitmask of candidate indices that may still be added;
    ``adj=None`` means all candidates are mutually compatible.
    """
    stack = [(prefix, avail)]
    while stack:
        chosen, rest = stack.pop()
        yield chosen
        if max_size is not None and len(chosen) >= max_size:
            continue
        children = []
        r = rest
        while r:
            low = r & -r
            children.append(low.bit_length() - 1)
            r ^= low
        for j in reversed(children):
            nxt = rest & _above(j)
            if adj is not None:
                nxt &= adj[j]
            stack.append((chosen + (j,), nxt))


@dataclass(frozen=True)
class _Candidates:
    constraint: str
    n: int
    k: int | None
    ell: int | None
    sets: tuple[VertexSet, ...]
    adj: tuple[int, ...] | None
    g_sets: tuple[VertexSet, ...] = ()
    g_meet: tuple[int, ...] = ()

    @property
    def everything(self) -> int:
        return (1 << len(self.sets)) - 1


def _meet(a: int, b: int) -> bool:
    return bool(a & b)


@lru_cache(maxsize=32)
def _candidates(constraint: str, n: int, k: int | None, ell: int | None) -> _Candidates:
    top = ground(n)
    if constraint == INTERSECTING:
        sets = k_subsets(top, k)
        return _Candidates(constraint, n, k, ell, tuple(sets), tuple(_adjacency(sets, _meet)))
    if constraint == CROSS:
        sets = k_subsets(top, k)
        g_sets = k_subsets(top, ell)
        g_meet = tuple(sum(1 << j for j, g in enumerate(g_sets) if g & f) for f in sets)
        return _Candidates(constraint, n, k, ell, tuple(sets), None, tuple(g_sets), g_meet)
    t = 2 * ell + 1
    sets = sorted(s for r in range(min(t, n) + 1) for s in k_subsets(top, r))

    def compatible(a: int, b: int) -> bool:
        return a & b != a and a & b != b and (a | b).bit_count() <= t

    return _Candidates(constraint, n, None, ell, tuple(sets), tuple(_adjacency(sets, compatible)))


def _roots(c: _Candidates) -> list[int]:
    return [-1] + list(range(len(c.sets)))


def _tree(c: _Candidates, root: int, max_size: int | None) -> Iterator[tuple[int, ...]]:
    if root == -1:
        yield ()
        return
    avail = c.everything & _above(root)
    if c.adj is not None:
        avail &= c.adj[root]
    yield from _preorder((root,), avail, list(c.adj) if c.adj is not None else None, max_size)


def _tree_objects(c: _Candidates, root: int, max_size: int | None) -> Iterator[tuple]:
    if c.constraint != CROSS:
        for idx in _tree(c, root, max_size):
            yield (_family(c, idx),)
        return
    all_g = (1 << len(c.g_sets)) - 1
    for fidx in _tree(c, root, max_size):
        compat = all_g
        for i in fidx:
            compat &= c.g_meet[i]
        F = _family(c, fidx)
        for gidx in _preorder((), compat, None, max_size):
            yield (F, Family._trusted(c.n, tuple(c.g_sets[j] for j in gidx), c.ell))


def _family(c: _Candidates, idx: tuple[int, ...]) -> Family:
    masks = tuple(c.sets[i] for i in idx)
    if c.constraint == ANTICHAIN:
        return Family(c.n, masks)
    return Family._trusted(c.n, masks, c.k)


def _enumerate(constraint: str, n: int, k: int | None, ell: int | None, visitor, budget: int | None,
               max_size: int | None = None) -> int:
    c = _candidates(constraint, n, k, ell)
    budget = default_budget() if budget is None else budget
    count = 0
    for root in _roots(c):
        for obj in _tree_objects(c, root, max_size):
            if count >= budget:
                raise BudgetExceeded(f"node budget {budget} exceeded after {count} nodes", count)
            count += 1
            if visitor is not None:
                visitor(*obj)
    return count


def enumerate_intersecting(n: int, k: int, visitor: Callable[[Family], None] | None = None,
                           budget: int | None = None, max_size: int | None = None) -> int:
    """Visit every intersecting subfamily of ``[n]^(k)`` once, the empty family included.

    Returns the number of families visited; raises :class:`BudgetExceeded`
    (carrying the count so far) past ``budget`` nodes.
    """
    return _enumerate(INTERSECTING, n, k, None, visitor, budget, max_size)


def enumerate_cross_pairs(n: int, k: int, ell: int, visitor: Callable[[Family, Family], None] | None = None,
                          budget: int | None = None, max_size: int | None = None) -> int:
    """Visit every cross-intersecting pair ``F ⊆ [n]^(k)``, ``G ⊆ [n]^(ℓ)``."""
    return _enumerate(CROSS, n, k, ell, visitor, budget, max_size)


def enumerate_union_antichains(n: int, ell: int, visitor: Callable[[Family], None] | None = None,
                               budget: int | None = None, max_size: int | None = None) -> int:
    """Visit every ``(2ℓ+1)``-union antichain in the power set of ``[n]``."""
    return _enumerate(ANTICHAIN, n, None, ell, visitor, budget, max_size)


# ---------------------------------------------------------------------------
# random and structured instances
# ---------------------------------------------------------------------------

def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for sample ``index``: child ``index`` of ``SeedSequence(seed)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _thin(rng: np.random.Generator, masks: list[VertexSet]) -> list[VertexSet]:
    keep = rng.random(len(masks)) < 0.5
    return [m for m, kp in zip(masks, keep) if kp]


def random_intersecting(n: int, k: int, seed=0, subsample: bool = False) -> Family:
    """Greedy maximal intersecting family over a random order of ``[n]^(k)``.

    ``seed`` may be an int, a ``SeedSequence`` or a ``Generator``.  With
    ``subsample`` each member is then kept with probability 1/2.
    """
    rng = _rng(seed)
    cands = k_subsets(ground(n), k)
    chosen: list[VertexSet] = []
    for idx in rng.permutation(len(cands)):
        c = cands[idx]
        if c and all(c & m for m in chosen):
            chosen.append(c)
    if subsample:
        chosen = _thin(rng, chosen)
    return Family.from_masks(n, chosen, k)


def random_cross_pair(n: int, k: int, ell: int, seed=0, subsample: bool = False) -> tuple[Family, Family]:
    """Random cross-intersecting pair grown greedily from a shuffled pool of k- and ℓ-sets."""
    rng = _rng(seed)
    pool = [(0, c) for c in k_subsets(ground(n), k)] + [(1, c) for c in k_subsets(ground(n), ell)]
    density = rng.uniform(0.2, 1.0)
    F: list[VertexSet] = []
    G: list[VertexSet] = []
    for idx in rng.permutation(len(pool)):
        side, c = pool[idx]
        if rng.random() > density:
            continue
        if side == 0 and all(c & g for g in G):
            F.append(c)
        elif side == 1 and all(c & f for f in F):
            G.append(c)
    if subsample:
        F, G = _thin(rng, F), _thin(rng, G)
    return Family.from_masks(n, F, k), Family.from_masks(n, G, ell)


def random_union_antichain(n: int, ell: int, seed=0, subsample: bool = False) -> Family:
    """Greedy maximal ``(2ℓ+1)``-union antichain over shuffled nonempty sets."""
    rng = _rng(seed)
    t = 2 * ell + 1
    cands = [s for r in range(1, min(t, n) + 1) for s in k_subsets(ground(n), r)]
    chosen: list[VertexSet] = []
    for idx in rng.permutation(len(cands)):
        c = cands[idx]
        if all(c & m != c and c & m != m and (c | m).bit_count() <= t for m in chosen):
            chosen.append(c)
    if subsample:
        chosen = _thin(rng, chosen) or chosen[:1]
    return Family.from_masks(n, chosen)


def _dedupe(tagged: list[tuple[str, Family]]) -> list[tuple[str, Family]]:
    seen, out = set(), []
    for tag, fam in tagged:
        if fam.members not in seen:
            seen.add(fam.members)
            out.append((tag, fam))
    return out


def structured_families(n: int, k: int) -> list[tuple[str, Family]]:
    """Named extremal intersecting constructions that exist at ``(n, k)``.

    ``star`` (all k-sets through vertex 1), ``complete-2k-1`` (all k-subsets
    of ``[2k-1]``), ``hilton-milner`` (sets through 1 meeting
    ``F0 = {2..k+1}``, plus ``F0``).  Identical families are listed once.
    """
    if not 1 <= k <= n:
        return []
    out = [("star", Family.star(n, k))]
    if 2 * k - 1 <= n:
        out.append(("complete-2k-1", Family._trusted(n, tuple(k_subsets(ground(2 * k - 1), k)), k)))
    if k >= 2 and n >= k + 1:
        f0 = from_vertices(range(2, k + 2))
        through = [s for s in Family.star(n, k).members if s & f0]
        out.append(("hilton-milner", Family.from_masks(n, through + [f0], k)))
    if n < 2 * k:
        out.append(("complete", Family.complete(n, k)))
    return _dedupe(out)


def structured_antichains(n: int, ell: int) -> list[tuple[str, Family]]:
    """Named ``(2ℓ+1)``-union antichains: full levels up to ℓ and ``(ℓ+1)``-sets inside ``[2ℓ+1]``."""
    out = [(f"level-{j}", Family.complete(n, j)) for j in range(1, min(ell, n) + 1)]
    if 2 * ell + 1 <= n:
        out.append(("upper-2l+1", Family._trusted(n, tuple(k_subsets(ground(2 * ell + 1), ell + 1)), ell + 1)))
    if ell + 1 <= n:
        out.append(("star-upper", Family.star(n, ell + 1)))
    return [(tag, fam) for tag, fam in _dedupe(out)
            if is_antichain(fam) and is_t_union(fam, 2 * ell + 1)]


def _structured_objects(space: SearchSpace, constraint: str) -> list[tuple[str, tuple]]:
    if constraint == INTERSECTING:
        return [(tag, (F,)) for tag, F in structured_families(space.n, space.k)]
    if constraint == ANTICHAIN:
        return [(tag, (F,)) for tag, F in structured_antichains(space.n, space.ell)]
    fs = structured_families(space.n, space.k)
    gs = structured_families(space.n, space.ell) + [("empty", Family.empty(space.n, space.ell))]
    return [(f"{tf}x{tg}", (F, G)) for tf, F in fs for tg, G in gs if is_cross_intersecting(F, G)]


def _random_object(space: SearchSpace, constraint: str, index: int) -> tuple:
    rng = sample_rng(space.seed, index)
    if constraint == INTERSECTING:
        return (random_intersecting(space.n, space.k, rng, space.subsample),)
    if constraint == CROSS:
        return random_cross_pair(space.n, space.k, space.ell, rng, space.subsample)
    return (random_union_antichain(space.n, space.ell, rng, space.subsample),)


# ---------------------------------------------------------------------------
# canonical (isomorph) filtering
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _relabel_tables(n: int) -> tuple[tuple[int, ...], ...]:
    tables = []
    size = 1 << n
    for perm in permutations(range(n)):
        table = [0] * size
        for mask in range(1, size):
            low = mask & -mask
            table[mask] = table[mask ^ low] | (1 << perm[low.bit_length() - 1])
        tables.append(tuple(table))
    return tuple(tables)


def is_canonical(n: int, *families: Family) -> bool:
    """True iff the member lists are lexicographically minimal over all relabelings of ``[n]``."""
    key = tuple(f.members for f in families)
    for table in _relabel_tables(n):
        other = tuple(tuple(sorted(table[m] for m in f.members)) for f in families)
        if other < key:
            return False
    return True


# ---------------------------------------------------------------------------
# claim evaluation
# ---------------------------------------------------------------------------

def _replay_family(F: Family) -> V.Verdict:
    try:
        cert = build_chain_intersecting(F)
    except CertificationError as exc:
        return V.Verdict(V.REPLAY, False, {"reason": str(exc)})
    return V.replay_certificate(cert, F)


def _replay_pair(F: Family, G: Family) -> V.Verdict:
    try:
        cert = build_chain_cross(F, G)
    except CertificationError as exc:
        return V.Verdict(V.REPLAY, False, {"reason": str(exc)})
    return V.replay_certificate(cert, F, G)


def _evaluate(constraint: str, claims, obj: tuple, ell: int | None = None) -> list[tuple[str, str, V.Verdict | None, str | None]]:
    """``(claim, regime, verdict or None when skipped, severity)`` per claim.

    Severity ``bug`` marks a failure of a proved statement, ``violation`` a
    failure of a conjectured one; failures outside any asserted regime carry
    no severity and are only tallied.
    """
    out = []
    if constraint == INTERSECTING:
        (F,) = obj
        for claim in claims:
            if claim == V.KATONA:
                v = V.check_katona(F)
                out.append((claim, "all", v, None if v.holds else "bug"))
            elif claim == V.KK_BOUND:
                v = V.check_kk_bound(F)
                out.append((claim, "all", v, None if v.holds else "bug"))
            elif claim == V.LOCAL:
                if not F.members:
                    out.append((claim, V.local_regime(F.n, F.k), None, None))
                    continue
                v = V.check_local(F)
                regime = v.stats["regime"]
                sev = None if v.holds else {"guaranteed": "bug", "conjectured": "violation"}.get(regime)
                out.append((claim, regime, v, sev))
            elif claim == V.REPLAY:
                if F.k < 2:
                    out.append((claim, "all", None, None))
                    continue
                v = _replay_family(F)
                out.append((claim, "all", v, None if v.holds else "bug"))
    elif constraint == CROSS:
        F, G = obj
        for claim in claims:
            if claim == V.FRANKL_CROSS:
                v = V.check_frankl_cross(F, G)
                out.append((claim, "all", v, None if v.holds else "bug"))
            elif claim == V.KK_BOUND:
                vf, vg = V.check_kk_bound(F), V.check_kk_bound(G)
                v = vf if not vf.holds else vg
                out.append((claim, "all", v, None if v.holds else "bug"))
            elif claim == V.LOCAL_CROSS:
                v = V.check_cross_local(F, G)
                regime = v.stats["regime"]
                out.append((claim, regime, v, "bug" if not v.holds and regime == "guaranteed" else None))
            elif claim == V.REPLAY:
                if F.k < 2:
                    out.append((claim, "all", None, None))
                    continue
                v = _replay_pair(F, G)
                out.append((claim, "all", v, None if v.holds else "bug"))
    else:
        (F,) = obj
        for claim in claims:
            if not F.members:
                out.append((claim, "all", None, None))
                continue
            v = V.check_union_antichain_conjecture(F, ell)
            out.append((claim, "all", v, None if v.holds else "violation"))
    return out


@dataclass
class _TaskResult:
    nodes: int = 0
    examined: int = 0
    violations: list = field(default_factory=list)
    tallies: dict = field(default_factory=dict)
    bug: dict | None = None


def _task_objects(space: SearchSpace, constraint: str, task: tuple) -> Iterator[tuple[str | None, tuple]]:
    kind = task[0]
    if kind == "tree":
        c = _candidates(constraint, space.n, space.k, space.ell)
        for obj in _tree_objects(c, task[1], space.max_family_size):
            yield None, obj
    elif kind == "random":
        for i in range(task[1], task[2]):
            yield None, _random_object(space, constraint, i)
    else:
        yield from _structured_objects(space, constraint)


def _entry(index: int, tag: str | None, obj: tuple, verdict: V.Verdict) -> dict:
    entry = {"index": index, "family": to_inline(obj[0]), "verdict": verdict.to_json()}
    if len(obj) > 1:
        entry["family_g"] = to_inline(obj[1])
    if tag is not None:
        entry["tag"] = tag
    return entry


def _run_task(args) -> _TaskResult:
    space, constraint, claims, task, cap = args
    res = _TaskResult()
    for local, (tag, obj) in enumerate(_task_objects(space, constraint, task), start=1):
        if cap is not None and local > cap:
            break
        res.nodes += 1
        if space.canonical and not is_canonical(space.n, *obj):
            continue
        res.examined += 1
        for claim, regime, verdict, severity in _evaluate(constraint, claims, obj, space.ell):
            slot = res.tallies.setdefault(claim, {}).setdefault(regime, {"holds": 0, "fails": 0, "skipped": 0})
            slot["skipped" if verdict is None else "holds" if verdict.holds else "fails"] += 1
            if severity == "violation":
                res.violations.append(_entry(local, tag, obj, verdict))
            elif severity == "bug":
                res.bug = _entry(local, tag, obj, verdict)
                return res
    return res


def _count_task(args) -> int:
    space, constraint, task, cap = args
    count = 0
    c = _candidates(constraint, space.n, space.k, space.ell)
    for _ in _tree_objects(c, task[1], space.max_family_size):
        count += 1
        if count > cap:
            break
    return count


def _map(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


@dataclass
class HuntReport:
    space: SearchSpace
    constraint: str
    claims: tuple[str, ...]
    families_examined: int
    nodes_visited: int
    complete: bool
    violations: list
    tallies: dict
    rng: dict | None
    wall_clock: float = 0.0

    def to_json(self) -> dict:
        space = asdict(self.space)
        space["budget"] = self.space.effective_budget()
        return {
            "kind": "hunt-report",
            "space": space,
            "constraint": self.constraint,
            "claims": list(self.claims),
            "families_examined": self.families_examined,
            "nodes_visited": self.nodes_visited,
            "complete": self.complete,
            "violations": self.violations,
            "tallies": self.tallies,
            "rng": self.rng,
            "timing": {"wall_clock_s": self.wall_clock},
        }


def _merge_tallies(into: dict, other: dict) -> None:
    for claim, regimes in other.items():
        for regime, counts in regimes.items():
            slot = into.setdefault(claim, {}).setdefault(regime, {"holds": 0, "fails": 0, "skipped": 0})
            for key, val in counts.items():
                slot[key] += val


def sweep(space: SearchSpace, claims, *, jobs: int = 1) -> HuntReport:
    """Run each claim on every instance of ``space`` and collect a report.

    A failure of a proved statement raises :class:`TheoremViolation`
    (it can only be a bug).  Exhaustive spaces larger than the node budget
    raise :class:`BudgetExceeded` whose ``partial`` is the report for the
    first ``budget`` nodes.
    """
    start = time.perf_counter()
    claims = tuple(dict.fromkeys(claims))
    unknown = [c for c in claims if c not in V.CLAIMS]
    if unknown:
        raise DomainError(f"unknown claims {unknown}")
    constraint = resolve_constraint(space, claims)
    budget = space.effective_budget()

    truncated = False
    if space.mode == "exhaustive":
        c = _candidates(constraint, space.n, space.k, space.ell)
        tasks = [("tree", r) for r in _roots(c)]
        if jobs > 1:
            sizes = _map(_count_task, [(space, constraint, t, budget) for t in tasks], jobs)
        else:
            sizes, used = [], 0
            for t in tasks:
                sizes.append(_count_task((space, constraint, t, budget - used)))
                used += sizes[-1]
                if used > budget:
                    break
            sizes += [0] * (len(tasks) - len(sizes))
        caps, used = [], 0
        for s in sizes:
            caps.append(max(0, min(s, budget - used)))
            used += s
        truncated = used > budget
        work = [(space, constraint, claims, t, cap) for t, cap in zip(tasks, caps) if cap > 0]
        rng = None
    elif space.mode == "random":
        work = [(space, constraint, claims, ("random", i, min(i + RANDOM_CHUNK, space.samples)), None)
                for i in range(0, space.samples, RANDOM_CHUNK)]
        rng = {"generator": RNG_NAME, "seed": space.seed}
    else:
        work = [(space, constraint, claims, ("structured",), None)]
        rng = None

    if jobs > 1:
        results = _map(_run_task, work, jobs)
    else:
        results = []
        for item in work:
            results.append(_run_task(item))
            if results[-1].bug is not None:
                break

    tallies: dict = {}
    violations: list = []
    nodes = examined = 0
    for res in results:
        for v in res.violations:
            violations.append({**v, "index": v["index"] + nodes})
        if res.bug is not None:
            bug = {**res.bug, "index": res.bug["index"] + nodes}
            raise TheoremViolation(
                f"proved claim {bug['verdict']['claim']!r} failed on {bug['family']}: implementation bug",
                bug["verdict"]["claim"], bug)
        nodes += res.nodes
        examined += res.examined
        _merge_tallies(tallies, res.tallies)

    report = HuntReport(space, constraint, claims, examined, nodes, not truncated, violations,
                        tallies, rng, time.perf_counter() - start)
    if truncated:
        raise BudgetExceeded(
            f"exhaustive space exceeds the node budget of {budget}; stopped after {nodes} nodes "
            f"(the full space has more than {budget})", nodes, report)
    return report
