import json

import pytest
from hypothesis import given, strategies as st

import oracles as O
from conftest import fam, to_sets, uniform_families
from shadowlab.core import Family, LinkSpec, from_vertices, ground, is_intersecting, vertices, vset
from shadowlab.errors import DomainError, UniformityError
from shadowlab.hunt import random_intersecting
from shadowlab.pseudo import (
    PseudoVerdict,
    is_link_pseudo_intersecting,
    is_pseudo_intersecting,
    is_view_pseudo_intersecting_over,
    link_counts,
    replays,
    sweep,
)

STAR5 = Family.star(5, 2)


def _colex_x(x):
    return None if x is None else from_vertices(sorted(x))


class TestWholeFamily:
    def test_two_edges_hold(self):
        F = fam(3, (1, 2), (1, 3))
        v = is_pseudo_intersecting(F)
        assert v.holds and v.witness_X is None
        assert O.pseudo_intersecting(to_sets(F), 3) == (True, None)

    def test_k4_fails_at_empty(self):
        v = is_pseudo_intersecting(Family.complete(4, 2))
        assert not v.holds and v.witness_X == 0
        assert link_counts(Family.complete(4, 2), 0, 0) == (4, 6)

    @pytest.mark.parametrize("n", [2, 3, 6, 9])
    def test_single_set(self, n):
        assert is_pseudo_intersecting(fam(n, (1, 2))).holds

    def test_rejects_nonuniform(self):
        with pytest.raises(UniformityError):
            is_pseudo_intersecting(fam(3, (1,), (1, 2)))

    def test_checked_universe_is_support(self):
        F = fam(8, (2, 5), (5, 7))
        assert is_pseudo_intersecting(F).checked_universe == vset(2, 5, 7)
        assert is_pseudo_intersecting(F, prune=False).checked_universe == ground(8)

    @given(uniform_families(n_range=(1, 6)))
    def test_matches_oracle(self, F):
        v = is_pseudo_intersecting(F)
        holds, X = O.pseudo_intersecting(to_sets(F), F.n)
        assert v.holds == holds
        if not holds:
            # the pruned sweep reports X restricted to the support
            assert replays(F, LinkSpec(0, 0), v)

    @given(uniform_families(n_range=(1, 7)))
    def test_prune_equivalent_to_full(self, F):
        a, b = is_pseudo_intersecting(F), is_pseudo_intersecting(F, prune=False)
        assert a.holds == b.holds
        if not a.holds:
            # both report the colex-first violation; restricting to the support preserves it
            assert a.witness_X == b.witness_X & F.support

    @given(uniform_families(n_range=(2, 7), intersecting=True))
    def test_intersecting_implies_pseudo(self, F):
        assert is_intersecting(F)
        assert is_pseudo_intersecting(F).holds


class TestLinkView:
    def test_star_leaf_anchor(self):
        v = is_link_pseudo_intersecting(STAR5, LinkSpec(vset(2), 0))
        assert v.holds

    def test_star_center_anchor(self):
        v = is_link_pseudo_intersecting(STAR5, LinkSpec(vset(1), 0))
        assert not v.holds and v.witness_X == 0
        assert link_counts(STAR5, vset(1), 0) == (1, 4)

    def test_complete_5_3_at_vertex_5(self):
        # the link is K4, whose shadow is too small already at X = ∅
        F = Family.complete(5, 3)
        v = is_link_pseudo_intersecting(F, LinkSpec(vset(5), 0))
        assert O.link_pseudo_intersecting(to_sets(F), 5, {5}) == (False, frozenset())
        assert not v.holds and v.witness_X == 0

    def test_full_size_anchor(self):
        F = fam(4, (1, 2), (3, 4))
        assert not is_link_pseudo_intersecting(F, LinkSpec(vset(1, 2), 0)).holds
        assert is_link_pseudo_intersecting(F, LinkSpec(vset(1, 3), 0)).holds

    def test_anchor_too_large(self):
        with pytest.raises(UniformityError):
            is_link_pseudo_intersecting(STAR5, LinkSpec(vset(1, 2, 3), 0))

    def test_outside_ground(self):
        with pytest.raises(DomainError):
            is_link_pseudo_intersecting(STAR5, LinkSpec(vset(6), 0))

    @given(uniform_families(n_range=(2, 6), k_range=(2, 3)), st.data())
    def test_matches_oracle(self, F, data):
        A = data.draw(st.integers(0, ground(F.n)).filter(lambda a: a.bit_count() < F.k))
        B = data.draw(st.integers(0, ground(F.n))) & ~A
        spec = LinkSpec(A, B)
        v = is_link_pseudo_intersecting(F, spec)
        holds, _ = O.link_pseudo_intersecting(to_sets(F), F.n, vertices(A), vertices(B))
        assert v.holds == holds
        assert replays(F, spec, v)
        assert v == is_link_pseudo_intersecting(F, spec)


class TestOverFloor:
    def test_star_anchor_3(self):
        v = is_view_pseudo_intersecting_over(STAR5, LinkSpec(vset(3), vset(4, 5)), vset(3, 4, 5))
        assert v.holds

    def test_empty_family(self):
        E = Family.empty(5, 2)
        assert is_view_pseudo_intersecting_over(E, LinkSpec(vset(1), 0), vset(2)).holds

    def test_k4_fails_at_empty_floor(self):
        v = is_view_pseudo_intersecting_over(Family.complete(4, 2), LinkSpec(0, 0), 0)
        assert not v.holds and v.witness_X == 0

    def test_witness_names_M(self):
        F = Family.complete(5, 2)
        floor = vset(1)
        v = is_view_pseudo_intersecting_over(F, LinkSpec(0, vset(1)), floor)
        assert not v.holds and v.witness_X & floor == floor
        assert replays(F, LinkSpec(0, vset(1)), v, over_floor=floor)

    def test_excluded_must_lie_in_floor(self):
        with pytest.raises(DomainError):
            is_view_pseudo_intersecting_over(STAR5, LinkSpec(0, vset(2)), vset(3))

    def test_floor_outside_ground(self):
        with pytest.raises(DomainError):
            is_view_pseudo_intersecting_over(STAR5, LinkSpec(0, 0), vset(7))

    @given(uniform_families(n_range=(2, 6), k_range=(2, 3)), st.data())
    def test_brute_force_over_supersets(self, F, data):
        A = data.draw(st.integers(0, ground(F.n)).filter(lambda a: a.bit_count() < F.k))
        floor = data.draw(st.integers(0, ground(F.n))) & ~A
        v = is_view_pseudo_intersecting_over(F, LinkSpec(A, floor), floor)
        fails = []
        free = ground(F.n) & ~floor
        sub = 0
        while True:
            s, f = link_counts(F, A, floor | sub)
            if s < f:
                fails.append(floor | sub)
            if sub == free:
                break
            sub = (sub - free) & free
        assert v.holds == (not fails)
        if fails:
            assert replays(F, LinkSpec(A, floor), v, over_floor=floor)


class TestVerdict:
    def test_invariants(self):
        with pytest.raises(ValueError):
            PseudoVerdict(True, 0, 1)
        with pytest.raises(ValueError):
            PseudoVerdict(False, 0b100, 0b11)

    def test_json_round_trip(self):
        for F in (STAR5, Family.complete(4, 2)):
            v = is_pseudo_intersecting(F)
            data = json.loads(json.dumps(v.to_json()))
            assert PseudoVerdict.from_json(data) == v


class TestParallelSweep:
    def test_jobs_do_not_change_witness(self):
        for seed in range(3):
            F = random_intersecting(9, 3, seed)
            # a sparse non-intersecting variant to force failures
            G = Family.from_masks(9, list(F.members) + [vset(7, 8, 9), vset(4, 5, 6)], 3)
            for fam_ in (F, G):
                a = sweep(fam_.members, ground(9), jobs=1)
                b = sweep(fam_.members, ground(9), jobs=3, min_parallel_bits=4)
                assert a == b
