"""Theorem and conjecture checks returning replayable verdicts.

Claim identifiers are stable strings used in reports and on the command line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .construct import (
    F_CHAIN,
    G_CERTIFICATE,
    ChainCertificate,
    anchor_key,
    cross_local_witness,
    family_digest,
    local_witness,
    size_bound,
)
from .core import (
    Family,
    LinkSpec,
    ground,
    is_antichain,
    is_cross_intersecting,
    is_intersecting,
    is_t_union,
    k_subsets,
    min_degree,
    shadow_masks,
    vertices,
)
from .errors import DomainError
from .pseudo import is_link_pseudo_intersecting

KATONA = "katona"
FRANKL_CROSS = "frankl-cross"
LOCAL = "local"
LOCAL_CROSS = "local-cross"
UNION_ANTICHAIN = "union-antichain"
KK_BOUND = "kk-bound"
REPLAY = "replay"

CLAIMS = (KATONA, FRANKL_CROSS, LOCAL, LOCAL_CROSS, UNION_ANTICHAIN, KK_BOUND, REPLAY)


@dataclass(frozen=True)
class Verdict:
    claim: str
    holds: bool
    witness: dict | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": "verdict", "claim": self.claim, "holds": self.holds,
                "witness": self.witness, "stats": dict(self.stats)}

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        return cls(data["claim"], bool(data["holds"]), data.get("witness"), dict(data.get("stats", {})))


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def _shadow_size(F: Family) -> int:
    if F.members:
        F.require_uniform(min_k=1)
    return len(shadow_masks(F.members))


def _require_intersecting(F: Family) -> None:
    if not is_intersecting(F):
        raise DomainError("family is not intersecting")


def check_katona(F: Family) -> Verdict:
    _require_intersecting(F)
    s, f = _shadow_size(F), len(F)
    return Verdict(KATONA, s >= f, None if s >= f else {"shadow_size": s, "size": f},
                   {"n": F.n, "k": F.k, "size": f, "shadow_size": s})


def check_frankl_cross(F: Family, G: Family) -> Verdict:
    if not is_cross_intersecting(F, G):
        raise DomainError("families are not cross-intersecting")
    sf, sg = _shadow_size(F), _shadow_size(G)
    holds = sf >= len(F) or sg >= len(G)
    stats = {"n": F.n, "k": F.k, "ell": G.k, "size_F": len(F), "shadow_F": sf,
             "size_G": len(G), "shadow_G": sg}
    return Verdict(FRANKL_CROSS, holds, None if holds else {"pair": "both inequalities fail"}, stats)


def local_regime(n: int, k: int) -> str:
    """``guaranteed`` above the proved threshold, ``conjectured`` for ``2k < n`` below it."""
    if n > binom(k + 1, 2):
        return "guaranteed"
    if n > 2 * k:
        return "conjectured"
    return "neither"


def check_local(F: Family) -> Verdict:
    v = local_witness(F)
    stats = {"n": F.n, "k": F.k, "regime": local_regime(F.n, F.k),
             "proved_threshold": binom(F.k + 1, 2), "conjectured_threshold": 2 * F.k}
    return Verdict(LOCAL, v is not None, None if v is None else {"vertex": v}, stats)


def cross_local_regime(n: int, k: int, ell: int) -> str:
    return "guaranteed" if n > k * ell else "open"


def check_cross_local(F: Family, G: Family) -> Verdict:
    w = cross_local_witness(F, G)
    k, ell = F.k or 0, G.k or 0
    stats = {"n": F.n, "k": F.k, "ell": G.k, "regime": cross_local_regime(F.n, k, ell)}
    return Verdict(LOCAL_CROSS, w is not None, None if w is None else {"side": w[0], "vertex": w[1]}, stats)


def check_union_antichain_conjecture(F: Family, ell: int) -> Verdict:
    """Minimum-degree bound for ``(2ℓ+1)``-union antichains over ``[n]``."""
    t = 2 * ell + 1
    if not 1 <= t < F.n:
        raise DomainError(f"hypothesis 1 <= 2*ell+1 < n fails (2*ell+1={t}, n={F.n})")
    if not is_antichain(F):
        raise DomainError("hypothesis fails: family is not an antichain")
    if not is_t_union(F, t):
        raise DomainError(f"hypothesis fails: family is not {t}-union")
    delta = min_degree(F)
    bound = binom(F.n - 1, ell - 1)
    holds = delta <= bound
    return Verdict(UNION_ANTICHAIN, holds, None if holds else {"min_degree": delta, "bound": bound},
                   {"n": F.n, "ell": ell, "min_degree": delta, "bound": bound, "size": len(F)})


def cascade(m: int, k: int) -> list[tuple[int, int]]:
    """Greedy ``k``-cascade of ``m`` as pairs ``(a_j, j)``, ``j`` descending."""
    if m < 0 or k < 1:
        raise DomainError("cascade needs m >= 0 and k >= 1")
    out = []
    j = k
    while m > 0 and j >= 1:
        a = j
        while comb(a + 1, j) <= m:
            a += 1
        out.append((a, j))
        m -= comb(a, j)
        j -= 1
    return out


def kk_lower_bound(m: int, k: int) -> int:
    """Least possible shadow size of ``m`` distinct k-sets."""
    return sum(comb(a, j - 1) for a, j in cascade(m, k))


def check_kk_bound(F: Family) -> Verdict:
    k = F.require_uniform(min_k=1) if F.members else (F.k or 1)
    s = _shadow_size(F)
    bound = kk_lower_bound(len(F), max(k, 1))
    holds = s >= bound
    return Verdict(KK_BOUND, holds, None if holds else {"shadow_size": s, "bound": bound},
                   {"n": F.n, "k": F.k, "size": len(F), "shadow_size": s, "bound": bound})


# ---------------------------------------------------------------------------
# certificate replay
# ---------------------------------------------------------------------------

def _fail(reason: str, **info) -> Verdict:
    return Verdict(REPLAY, False, {"reason": reason, **info})


def replay_certificate(cert: ChainCertificate, F: Family, G: Family | None = None) -> Verdict:
    """Re-verify a chain certificate from scratch against its input families.

    Checks the declared parameters, nesting, size bounds, that every required
    anchor carries evidence, and sweeps every evidence entry.
    """
    cross = cert.mode == "cross"
    if cert.mode not in ("intersecting", "cross"):
        return _fail("unknown mode", mode=cert.mode)
    if cross and G is None:
        raise DomainError("cross certificate needs both families")
    if cert.n != F.n or cert.k != F.k:
        return _fail("parameters", n=cert.n, k=cert.k)
    if cross and (G.n != F.n or cert.ell != G.k):
        return _fail("parameters", ell=cert.ell)
    for tag, fam in (("F", F), ("G", G)):
        want = cert.digests.get(tag)
        if fam is not None and want is not None and want != family_digest(fam):
            return _fail("family digest mismatch", family=tag)
    if cross:
        if not is_cross_intersecting(F, G):
            return _fail("families are not cross-intersecting")
    elif not is_intersecting(F):
        return _fail("family is not intersecting")

    top = ground(cert.n)
    if len(cert.chain) != cert.k or any(m & ~top for m in cert.chain):
        return _fail("chain shape")
    for i in range(1, cert.k):
        if cert.M(i) & ~cert.M(i + 1):
            return _fail("chain not nested", level=i)
    for i in range(1, cert.k + 1):
        if cert.M(i).bit_count() < size_bound(cert.mode, cert.n, cert.k, cert.ell, i):
            return _fail("size bound", level=i, size=cert.M(i).bit_count())

    fams = {"F": F, "G": G}
    have = {(e.family, e.anchor) for e in cert.evidence}
    if cert.outcome == F_CHAIN:
        f_levels = range(1, cert.k + 1)
    elif cert.outcome == G_CERTIFICATE and cross:
        f_levels = cert.f_levels
        for r in range((cert.ell or 0) + 1):
            for B in k_subsets(cert.M(2), r):
                if ("G", B) not in have:
                    return _fail("missing evidence", family="G", anchor=list(vertices(B)))
    else:
        return _fail("unknown outcome", outcome=cert.outcome)
    for i in f_levels:
        for A in k_subsets(cert.M(i), i):
            if ("F", A) not in have:
                return _fail("missing evidence", family="F", anchor=list(vertices(A)))

    checked = 0
    for e in cert.evidence:
        fam = fams.get(e.family)
        if fam is None:
            return _fail("evidence for absent family", family=e.family)
        if not e.verdict.holds:
            return _fail("evidence entry records a failure", family=e.family, anchor=anchor_key(e.anchor))
        if fam.k is not None and e.anchor.bit_count() > fam.k:
            continue
        v = is_link_pseudo_intersecting(fam, LinkSpec(e.anchor, 0))
        checked += 1
        if not v.holds:
            return _fail("evidence does not replay", family=e.family, anchor=list(vertices(e.anchor)),
                         witness_X=list(vertices(v.witness_X)))
    return Verdict(REPLAY, True, None, {"entries_checked": checked, "outcome": cert.outcome,
                                        "chain_sizes": [m.bit_count() for m in cert.chain]})
