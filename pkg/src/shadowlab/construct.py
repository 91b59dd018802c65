"""Chain builders: nested vertex sets whose small links are pseudo-intersecting.

Both builders run a backward induction.  Level ``k`` starts from the
complement of one member of the family that blocks all k-sets; each step
either keeps the current set or deletes one "bad" set ``B`` whose restricted
view fails, then certifies every link one level down through
:func:`lemma_step`.  Nothing is taken on trust: every hypothesis the
induction relies on is checked by a sweep, and a failed check aborts with
:class:`CertificationError`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .core import (
    Family,
    LinkSpec,
    VertexSet,
    format_fam,
    from_vertices,
    ground,
    iter_bits,
    is_cross_intersecting,
    is_intersecting,
    k_subsets,
    link_masks,
    vertices,
)
from .errors import CertificateFormatError, CertificationError, DomainError, LemmaHypothesisError, UniformityError
from .pseudo import (
    PseudoVerdict,
    _support,
    is_link_pseudo_intersecting,
    is_view_pseudo_intersecting_over,
    view_ok,
)

F_CHAIN = "F_CHAIN"
G_CERTIFICATE = "G_CERTIFICATE"
CERTIFICATE_SCHEMA = "shadowlab.chain/1"


def family_digest(F: Family) -> str:
    return hashlib.sha256(format_fam(F).encode()).hexdigest()


def size_bound(mode: str, n: int, k: int, ell: int | None, level: int) -> int:
    """Lower bound on ``|M_level|`` guaranteed by the construction."""
    if mode == "intersecting":
        return n - sum(range(level, k + 1))
    return n - (k + 1 - level) * (ell or 0)


def anchor_key(A: VertexSet) -> str:
    return " ".join(map(str, vertices(A)))


def _parse_anchor_key(key: str) -> VertexSet:
    try:
        return from_vertices(int(t) for t in key.split())
    except ValueError:
        raise CertificateFormatError(f"bad anchor key {key!r}") from None


@dataclass(frozen=True)
class Evidence:
    """One certified fact: the link of ``family`` at ``anchor`` is pseudo-intersecting.

    ``method`` records how it was established: ``empty`` (the link has no
    members), ``base`` (top-size G anchors, whose views do not depend on the
    restriction), or ``lemma`` (inductive step).  ``audited`` marks facts
    that were additionally swept; ``verdict`` then holds the sweep result.
    """

    family: str
    anchor: VertexSet
    method: str
    verdict: PseudoVerdict
    audited: bool = False

    @property
    def level(self) -> int:
        return self.anchor.bit_count()


@dataclass(frozen=True)
class ChainCertificate:
    mode: str
    n: int
    k: int
    ell: int | None
    outcome: str
    chain: tuple[VertexSet, ...]
    removed: tuple[tuple[int, VertexSet | None], ...]
    f_levels: tuple[int, ...]
    evidence: tuple[Evidence, ...]
    bad_sets: tuple[tuple[int, tuple[VertexSet, ...]], ...] = ()
    stop_level: int | None = None
    digests: dict = field(default_factory=dict)

    def M(self, level: int) -> VertexSet:
        return self.chain[level - 1]

    @property
    def size_bound_ok(self) -> tuple[bool, ...]:
        return tuple(
            self.M(i).bit_count() >= size_bound(self.mode, self.n, self.k, self.ell, i)
            for i in range(1, self.k + 1)
        )

    def to_json(self) -> dict:
        ev: dict[str, dict] = {"F": {}, "G": {}}
        for e in self.evidence:
            ev[e.family][anchor_key(e.anchor)] = {
                "level": e.level,
                "method": e.method,
                "audited": e.audited,
                "verdict": e.verdict.to_json(),
            }
        return {
            "kind": "chain-certificate",
            "schema": CERTIFICATE_SCHEMA,
            "mode": self.mode,
            "n": self.n,
            "k": self.k,
            "ell": self.ell,
            "outcome": self.outcome,
            "chain": [list(vertices(m)) for m in self.chain],
            "removed": [
                {"from_level": lvl, "removed": None if b is None else list(vertices(b))}
                for lvl, b in self.removed
            ],
            "f_levels": list(self.f_levels),
            "stop_level": self.stop_level,
            "size_bound_ok": list(self.size_bound_ok),
            "bad_sets": [
                {"level": lvl, "sets": [list(vertices(b)) for b in bs]} for lvl, bs in self.bad_sets
            ],
            "digests": dict(self.digests),
            "evidence": ev,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChainCertificate":
        try:
            if data.get("schema") != CERTIFICATE_SCHEMA:
                raise CertificateFormatError(f"unknown certificate schema {data.get('schema')!r}")
            evidence = []
            for fam in ("F", "G"):
                for key, entry in data["evidence"].get(fam, {}).items():
                    evidence.append(Evidence(fam, _parse_anchor_key(key), entry["method"],
                                             PseudoVerdict.from_json(entry["verdict"]),
                                             bool(entry.get("audited", False))))
            return cls(
                mode=data["mode"],
                n=int(data["n"]),
                k=int(data["k"]),
                ell=None if data.get("ell") is None else int(data["ell"]),
                outcome=data["outcome"],
                chain=tuple(from_vertices(m) for m in data["chain"]),
                removed=tuple(
                    (int(r["from_level"]), None if r["removed"] is None else from_vertices(r["removed"]))
                    for r in data["removed"]
                ),
                f_levels=tuple(int(x) for x in data["f_levels"]),
                evidence=tuple(_sorted_evidence(evidence)),
                bad_sets=tuple(
                    (int(b["level"]), tuple(from_vertices(s) for s in b["sets"])) for b in data.get("bad_sets", [])
                ),
                stop_level=data.get("stop_level"),
                digests=dict(data.get("digests", {})),
            )
        except CertificateFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc


def _sorted_evidence(evidence):
    return sorted(evidence, key=lambda e: (e.family, e.level, e.anchor))


# ---------------------------------------------------------------------------
# the inductive step
# ---------------------------------------------------------------------------

def _lemma(F: Family, A: VertexSet, M: VertexSet, established, view_verdict, audit: bool,
           jobs: int) -> PseudoVerdict | None:
    k = F.k
    if not F.members or (k is not None and A.bit_count() > k):
        return PseudoVerdict(True, None, 0) if audit else None
    if view_verdict is None:
        view_verdict = is_view_pseudo_intersecting_over(F, LinkSpec(A, M & ~A), M, jobs=jobs)
    if not view_verdict.holds:
        raise LemmaHypothesisError(
            f"view at anchor {anchor_key(A) or '∅'} restricted by M is not pseudo-intersecting",
            "view", A, witness=view_verdict.witness_X)
    for x in iter_bits(M & ~A):
        ext = A | x
        if ext.bit_count() > k or (established is not None and ext in established):
            continue
        v = is_link_pseudo_intersecting(F, LinkSpec(ext, 0), jobs=jobs)
        if not v.holds:
            raise LemmaHypothesisError(
                f"link at {anchor_key(ext)} is not pseudo-intersecting", "extension", A,
                witness=v.witness_X, extension=x.bit_length())
    if audit:
        conclusion = is_link_pseudo_intersecting(F, LinkSpec(A, 0), jobs=jobs)
        if not conclusion.holds:
            raise CertificationError(
                f"lemma conclusion fails at anchor {anchor_key(A) or '∅'} (witness X="
                f"{list(vertices(conclusion.witness_X))}); the lemma step is implemented wrongly")
        return conclusion
    return None


def lemma_step(F: Family, A: VertexSet, M: VertexSet, *, established=None,
               view_verdict: PseudoVerdict | None = None, audit: bool = False, jobs: int = 1) -> bool:
    """Infer that ``F(A)`` is pseudo-intersecting from the two lemma hypotheses.

    The hypotheses are that the view ``F(A, M - A)`` is pseudo-intersecting
    and that ``F(A + x)`` is for every ``x`` in ``M - A``.  Anchors listed in
    ``established`` count as already certified; everything else is swept.
    Raises :class:`LemmaHypothesisError` naming the failing hypothesis.  With
    ``audit`` the conclusion is swept as well.
    """
    top = ground(F.n)
    if (A | M) & ~top:
        raise DomainError(f"sets leave the ground set [{F.n}]")
    _lemma(F, A, M, established, view_verdict, audit, jobs)
    return True


class _Recorder:
    def __init__(self, fam: Family, tag: str, audit: bool, jobs: int) -> None:
        self.fam = fam
        self.tag = tag
        self.audit = audit
        self.jobs = jobs
        self.entries: list[Evidence] = []
        self.by_level: dict[int, set[VertexSet]] = {}

    def _add(self, A: VertexSet, method: str, verdict: PseudoVerdict, audited: bool) -> None:
        self.entries.append(Evidence(self.tag, A, method, verdict, audited))
        self.by_level.setdefault(A.bit_count(), set()).add(A)

    def empty(self, A: VertexSet) -> None:
        if link_masks(self.fam.members, A, 0):
            raise CertificationError(f"link of {self.tag} at {anchor_key(A)} was expected to be empty")
        self._add(A, "empty", PseudoVerdict(True, None, 0), False)

    def base(self, A: VertexSet) -> None:
        # top-size anchor: the link is {∅} or ∅ whatever the restriction
        view = link_masks(self.fam.members, A, 0)
        if not view_ok(view):
            raise CertificationError(f"link of {self.tag} at {anchor_key(A)} is {{∅}}")
        verdict = PseudoVerdict(True, None, 0)
        if self.audit:
            verdict = is_link_pseudo_intersecting(self.fam, LinkSpec(A, 0), jobs=self.jobs)
            if not verdict.holds:
                raise CertificationError(f"audit sweep rejects base anchor {anchor_key(A)}")
        self._add(A, "base", verdict, self.audit)

    def lemma(self, A: VertexSet, M: VertexSet, view_verdict: PseudoVerdict) -> None:
        established = self.by_level.get(A.bit_count() + 1, set())
        try:
            swept = _lemma(self.fam, A, M, established, view_verdict, self.audit, self.jobs)
        except LemmaHypothesisError as exc:
            raise CertificationError(f"inductive step failed for {self.tag}: {exc}") from exc
        if swept is None:
            swept = PseudoVerdict(True, None, _support(link_masks(self.fam.members, A, 0)))
        self._add(A, "lemma", swept, self.audit)


def _over(F: Family, A: VertexSet, floor: VertexSet, jobs: int) -> PseudoVerdict:
    return is_view_pseudo_intersecting_over(F, LinkSpec(A, floor & ~A), floor, jobs=jobs)


def _require_k(F: Family) -> int:
    k = F.require_uniform()
    if k < 2:
        raise UniformityError("chain builders need k >= 2")
    return k


def build_chain_intersecting(F: Family, *, audit: bool = False, diagnose: bool = False,
                             jobs: int = 1) -> ChainCertificate:
    """Build ``M_1 ⊆ ... ⊆ M_k`` certifying pseudo-intersecting links of an intersecting family.

    Bad sets are scanned in colex order and the first one is removed; with
    ``diagnose`` every bad set at each level is recorded in ``bad_sets``.
    """
    k = _require_k(F)
    if not is_intersecting(F):
        raise DomainError("family is not intersecting")
    n, top = F.n, ground(F.n)
    rec = _Recorder(F, "F", audit, jobs)
    digests = {"F": family_digest(F)}

    if not F.members:
        for i in range(1, k + 1):
            for A in k_subsets(top, i):
                rec.empty(A)
        return ChainCertificate("intersecting", n, k, None, F_CHAIN, (top,) * k,
                                tuple((i, None) for i in range(k, 1, -1)), tuple(range(1, k + 1)),
                                tuple(_sorted_evidence(rec.entries)), digests=digests)

    M = {k: top & ~F.members[0]}
    for A in k_subsets(M[k], k):
        rec.empty(A)
    removed, bad_sets = [], []
    for i in range(k, 1, -1):
        Mi = M[i]
        passed: dict[VertexSet, PseudoVerdict] = {}
        bad: list[VertexSet] = []
        for A in k_subsets(Mi, i - 1):
            v = _over(F, A, Mi, jobs)
            if v.holds:
                passed[A] = v
            else:
                bad.append(A)
                if not diagnose:
                    break
        Mnext = Mi & ~bad[0] if bad else Mi
        removed.append((i, bad[0] if bad else None))
        if bad:
            bad_sets.append((i, tuple(bad)))
        for A in k_subsets(Mnext, i - 1):
            v = passed.get(A) or _over(F, A, Mi, jobs)
            if not v.holds:
                raise CertificationError(
                    f"level {i - 1}: view at {anchor_key(A)} fails after removing "
                    f"{anchor_key(bad[0])}; refusing a second removal")
            rec.lemma(A, Mi, v)
        M[i - 1] = Mnext

    chain = tuple(M[i] for i in range(1, k + 1))
    return ChainCertificate("intersecting", n, k, None, F_CHAIN, chain, tuple(removed),
                            tuple(range(1, k + 1)), tuple(_sorted_evidence(rec.entries)),
                            tuple(bad_sets), None, digests)


def build_chain_cross(F: Family, G: Family, *, audit: bool = False, diagnose: bool = False,
                      jobs: int = 1) -> ChainCertificate:
    """Chain builder for a cross-intersecting pair ``F`` (k-uniform), ``G`` (ℓ-uniform).

    Outcome ``F_CHAIN``: links of ``F`` at every ``A ∈ M_i^(i)`` are
    pseudo-intersecting.  Outcome ``G_CERTIFICATE``: the induction stopped at
    ``stop_level`` because no bad set of ``G`` exists there, and every link
    ``G(B)`` with ``B ⊆ M_2`` is pseudo-intersecting (anchors larger than ℓ
    give empty links and are not listed).
    """
    if F.n != G.n:
        raise DomainError(f"ground sets differ: [{F.n}] vs [{G.n}]")
    k = _require_k(F)
    ell = G.require_uniform(min_k=1)
    if not is_cross_intersecting(F, G):
        raise DomainError("families are not cross-intersecting")
    n, top = F.n, ground(F.n)
    frec = _Recorder(F, "F", audit, jobs)
    grec = _Recorder(G, "G", audit, jobs)
    digests = {"F": family_digest(F), "G": family_digest(G)}

    def finish(outcome, M, removed, f_levels, bad_sets, stop_level):
        chain = tuple(M[i] for i in range(1, k + 1))
        return ChainCertificate("cross", n, k, ell, outcome, chain, tuple(removed), tuple(f_levels),
                                tuple(_sorted_evidence(frec.entries + grec.entries)),
                                tuple(bad_sets), stop_level, digests)

    if not G.members:
        for r in range(ell + 1):
            for B in k_subsets(top, r):
                grec.empty(B)
        return finish(G_CERTIFICATE, {i: top for i in range(1, k + 1)}, [], [], [], None)

    M = {k: top & ~G.members[0]}
    for A in k_subsets(M[k], k):
        frec.empty(A)
    removed, bad_sets, f_levels = [], [], [k]
    for i in range(k, 1, -1):
        Mi = M[i]
        passed: dict[VertexSet, PseudoVerdict] = {}
        bad: list[VertexSet] = []
        for r in range(ell + 1):
            for B in k_subsets(Mi, r):
                v = _over(G, B, Mi, jobs)
                if v.holds:
                    passed[B] = v
                else:
                    bad.append(B)
                    if not diagnose:
                        break
            if bad and not diagnose:
                break
        if bad:
            bad_sets.append((i, tuple(bad)))
        if not bad:
            for j in range(1, i):
                M[j] = Mi
            for B in k_subsets(Mi, ell):
                grec.base(B)
            for r in range(ell - 1, -1, -1):
                for B in k_subsets(Mi, r):
                    grec.lemma(B, Mi, passed[B])
            return finish(G_CERTIFICATE, M, removed, f_levels, bad_sets, i)
        Mnext = Mi & ~bad[0]
        removed.append((i, bad[0]))
        for A in k_subsets(Mnext, i - 1):
            v = _over(F, A, Mi, jobs)
            if not v.holds:
                raise CertificationError(
                    f"level {i - 1}: view of F at {anchor_key(A)} fails although G has bad set "
                    f"{anchor_key(bad[0]) or '∅'}")
            frec.lemma(A, Mi, v)
        M[i - 1] = Mnext
        f_levels.append(i - 1)

    return finish(F_CHAIN, M, removed, sorted(f_levels), bad_sets, None)


# ---------------------------------------------------------------------------
# direct local scans
# ---------------------------------------------------------------------------

def _link_inequality(F: Family, v: int) -> bool:
    return view_ok(link_masks(F.members, 1 << (v - 1), 0))


def local_witness(F: Family) -> int | None:
    """Least vertex ``i`` with ``|∂F(i)| >= |F(i)|``, or ``None``."""
    F.require_uniform(min_k=1)
    if not F.members:
        raise DomainError("local witness needs a nonempty family")
    if not is_intersecting(F):
        raise DomainError("family is not intersecting")
    for v in range(1, F.n + 1):
        if _link_inequality(F, v):
            return v
    return None


def cross_local_witness(F: Family, G: Family) -> tuple[str, int] | None:
    """Least vertex where the link inequality holds in ``F`` or in ``G``; ``F`` is tried first."""
    if not is_cross_intersecting(F, G):
        raise DomainError("families are not cross-intersecting")
    for fam in (F, G):
        if fam.members:
            fam.require_uniform(min_k=1)
    for v in range(1, F.n + 1):
        if _link_inequality(F, v):
            return ("F", v)
        if _link_inequality(G, v):
            return ("G", v)
    return None
