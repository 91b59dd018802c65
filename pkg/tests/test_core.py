import pytest
from hypothesis import given, strategies as st

import oracles as O
from conftest import fam, to_sets, uniform_families
from shadowlab.core import (
    Family,
    LinkSpec,
    format_fam,
    from_inline,
    from_vertices,
    ground,
    is_antichain,
    is_cross_intersecting,
    is_intersecting,
    is_t_union,
    join_vertex,
    k_subsets,
    link,
    min_degree,
    parse_fam,
    restrict,
    shadow,
    submasks,
    to_inline,
    vertices,
    vset,
)
from shadowlab.errors import DomainError, FamParseError, LinkSpecError, UniformityError

TRI = ((1, 2), (1, 3), (2, 3))


class TestVertexSets:
    def test_round_trip(self):
        assert vertices(vset(1, 3, 64)) == (1, 3, 64)
        assert from_vertices([2, 2, 5]) == 0b10010

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            vset(0)
        with pytest.raises(DomainError):
            vset(65)

    def test_submasks_ascending(self):
        subs = list(submasks(0b1011))
        assert subs == sorted(subs)
        assert len(subs) == 8

    def test_k_subsets_colex(self):
        got = k_subsets(ground(4), 2)
        assert [vertices(m) for m in got] == [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]


class TestFamily:
    def test_members_sorted_distinct(self):
        F = fam(4, (3, 4), (1, 2), (1, 2))
        assert F.sets() == [(1, 2), (3, 4)]
        assert F.k == 2

    def test_declared_k_mismatch(self):
        with pytest.raises(UniformityError):
            fam(4, (1, 2), (1, 2, 3), k=2)

    def test_member_outside_ground(self):
        with pytest.raises(DomainError):
            Family.from_masks(3, [0b1000])

    def test_n_limits(self):
        with pytest.raises(DomainError):
            Family.empty(65)
        with pytest.raises(DomainError):
            Family.empty(0)

    def test_nonuniform_has_no_k(self):
        assert fam(3, (1,), (1, 2)).k is None

    def test_linkspec_overlap(self):
        with pytest.raises(LinkSpecError):
            LinkSpec(vset(1), vset(1, 2))


class TestShadow:
    def test_empty(self):
        assert shadow(Family.empty(3, 2)).members == ()

    def test_small(self):
        assert shadow(fam(3, (1, 2), (1, 3))).sets() == [(1,), (2,), (3,)]

    def test_complete_5_3(self):
        S = shadow(Family.complete(5, 3))
        assert len(S) == 10 and S.k == 2
        assert S == Family.complete(5, 2)

    def test_rejects_nonuniform_and_zero(self):
        with pytest.raises(UniformityError):
            shadow(fam(3, (1,), (1, 2)))
        with pytest.raises(UniformityError):
            shadow(Family.from_masks(3, [0], 0))

    @given(uniform_families())
    def test_matches_oracle(self, F):
        assert to_sets(shadow(F)) == O.shadow(to_sets(F))


class TestLink:
    T = fam(3, *TRI)

    def test_examples(self):
        assert link(self.T, LinkSpec(vset(1), 0)).sets() == [(2,), (3,)]
        assert link(self.T, LinkSpec(vset(1), vset(3))).sets() == [(2,)]
        assert link(self.T, LinkSpec(0, vset(1))).sets() == [(2, 3)]

    def test_keeps_ground_and_k(self):
        L = link(self.T, LinkSpec(vset(1), 0))
        assert L.n == 3 and L.k == 1

    def test_anchor_too_big(self):
        with pytest.raises(DomainError):
            link(self.T, LinkSpec(vset(1, 2, 3), 0))

    def test_identity(self):
        assert link(self.T, LinkSpec(0, 0)) == self.T

    @given(uniform_families(), st.data())
    def test_matches_oracle(self, F, data):
        A = data.draw(st.integers(0, ground(F.n)).filter(lambda a: a.bit_count() <= F.k))
        B = data.draw(st.integers(0, ground(F.n))) & ~A
        got = to_sets(link(F, LinkSpec(A, B)))
        assert got == O.link(to_sets(F), vertices(A), vertices(B))

    @given(uniform_families(), st.data())
    def test_compositional(self, F, data):
        A = data.draw(st.integers(0, ground(F.n)).filter(lambda a: a.bit_count() <= F.k))
        B = data.draw(st.integers(0, ground(F.n))) & ~A
        assert link(F, LinkSpec(A, B)) == restrict(link(F, LinkSpec(A, 0)), B)

    @given(uniform_families(k_range=(2, 4)), st.data())
    def test_shadow_commutes_with_link(self, F, data):
        A = data.draw(st.integers(0, ground(F.n)).filter(lambda a: a.bit_count() < F.k))
        lhs = shadow(link(F, LinkSpec(A, 0)))
        rhs = link(shadow(F), LinkSpec(A, 0))
        assert lhs.members == rhs.members

    @given(uniform_families(k_range=(2, 4)), st.data())
    def test_shadow_of_view_inside_view_of_shadow(self, F, data):
        A = data.draw(st.integers(0, ground(F.n)).filter(lambda a: a.bit_count() < F.k))
        B = data.draw(st.integers(0, ground(F.n))) & ~A
        lhs = set(shadow(link(F, LinkSpec(A, B))).members)
        rhs = set(link(shadow(F), LinkSpec(A, B)).members)
        assert lhs <= rhs


class TestJoinVertex:
    def test_examples(self):
        assert join_vertex(fam(5, (2,), (3,)), 5).sets() == [(2, 5), (3, 5)]
        assert join_vertex(Family.empty(5, 1), 1).members == ()
        J = join_vertex(Family.from_masks(5, [0], 0), 4)
        assert J.sets() == [(4,)] and J.k == 1

    def test_vertex_already_present(self):
        with pytest.raises(DomainError):
            join_vertex(fam(5, (2,), (5,)), 5)


class TestPredicates:
    def test_intersecting(self):
        assert is_intersecting(fam(3, (1, 2), (1, 3)))
        assert not is_intersecting(fam(4, (1, 2), (3, 4)))
        assert is_intersecting(Family.complete(5, 3))
        assert is_intersecting(Family.empty(3, 2))
        assert not is_intersecting(Family.from_masks(3, [0], 0))

    def test_cross(self):
        assert is_cross_intersecting(fam(4, (1, 2)), fam(4, (1, 3)))
        assert not is_cross_intersecting(fam(4, (1, 2)), fam(4, (3, 4)))
        assert is_cross_intersecting(Family.empty(4, 2), fam(4, (3, 4)))
        with pytest.raises(DomainError):
            is_cross_intersecting(fam(4, (1, 2)), fam(5, (1, 3)))

    def test_t_union(self):
        assert is_t_union(fam(3, (1,), (2,)), 3)
        assert not is_t_union(fam(5, (1, 2, 3), (1, 4, 5)), 4)
        assert is_t_union(fam(3, *TRI), 3)
        assert not is_t_union(fam(5, (1, 2, 3, 4)), 3)

    def test_antichain(self):
        assert not is_antichain(fam(3, (1,), (1, 2)))
        assert is_antichain(fam(3, (1, 2), (2, 3)))
        assert is_antichain(Family.complete(6, 3))

    def test_min_degree(self):
        assert min_degree(fam(3, *TRI)) == 2
        assert min_degree(fam(3, (1, 2))) == 0
        assert min_degree(Family.complete(4, 1)) == 1
        with pytest.raises(DomainError):
            min_degree(Family.empty(3, 1))

    @given(uniform_families())
    def test_intersecting_matches_oracle(self, F):
        assert is_intersecting(F) == O.intersecting(to_sets(F))


class TestShrinkIdentities:
    """Splitting a restricted view by whether members contain one more vertex."""

    @staticmethod
    def _instance(data, F):
        n = F.n
        A = data.draw(st.integers(0, ground(n)).filter(lambda a: a.bit_count() < F.k))
        Xp = data.draw(st.integers(0, ground(n)))
        free = [v for v in vertices(Xp & ~A)]
        if not free:
            return None
        x = data.draw(st.sampled_from(free))
        return A, Xp, x

    @given(uniform_families(n_range=(2, 8), k_range=(1, 4)), st.data())
    def test_partition(self, F, data):
        inst = self._instance(data, F)
        if inst is None:
            return
        A, Xp, x = inst
        bit = 1 << (x - 1)
        whole = link(F, LinkSpec(A, (Xp & ~bit) & ~A))
        avoid = link(F, LinkSpec(A, Xp & ~A))
        through = join_vertex(link(F, LinkSpec(A | bit, Xp & ~(A | bit))), x)
        assert not set(avoid.members) & set(through.members)
        assert set(whole.members) == set(avoid.members) | set(through.members)

    @given(uniform_families(n_range=(2, 8), k_range=(2, 4)), st.data())
    def test_shadow_containment(self, F, data):
        inst = self._instance(data, F)
        if inst is None or (A := inst[0]).bit_count() + 1 >= F.k:
            return
        A, Xp, x = inst
        bit = 1 << (x - 1)
        whole = shadow(link(F, LinkSpec(A, (Xp & ~bit) & ~A)))
        avoid = shadow(link(F, LinkSpec(A, Xp & ~A)))
        through = join_vertex(shadow(link(F, LinkSpec(A | bit, Xp & ~(A | bit)))), x)
        assert not set(avoid.members) & set(through.members)
        assert set(avoid.members) | set(through.members) <= set(whole.members)


class TestFamFormat:
    def test_round_trip(self):
        F = fam(5, (1, 2), (3, 5))
        assert parse_fam(format_fam(F)) == F

    def test_example_text(self):
        assert format_fam(shadow(parse_fam("3 2\n1 2\n1 3\n"))) == "3 1\n1\n2\n3\n"

    def test_empty_family_header_only(self):
        assert format_fam(Family.empty(4, 2)) == "4 2\n"

    def test_empty_set_token(self):
        F = Family.from_masks(3, [0, 1])
        text = format_fam(F)
        assert "{}" in text.splitlines()
        assert parse_fam(text) == F

    def test_comments_and_blank_terminator(self):
        F = parse_fam("# a comment\n4 2\n1 2\n# inner\n3 4\n\n9 9 9\n")
        assert F.sets() == [(1, 2), (3, 4)]

    @pytest.mark.parametrize("text,line", [
        ("3 2\n1 x\n", 2),
        ("3 2\n1 4\n", 2),
        ("3 2\n2 1\n", 2),
        ("3 2\n1 2\n1 2 3\n", 3),
        ("3 2\n1 2\n1 3\n1 2\n", 4),
        ("65 2\n", 1),
        ("3\n", 1),
        ("", 1),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(FamParseError) as exc:
            parse_fam(text)
        assert exc.value.line == line
        assert str(exc.value).startswith(f"line {line}:")

    @given(uniform_families())
    def test_inline_round_trip(self, F):
        assert from_inline(to_inline(F)) == F
        assert parse_fam(format_fam(F)) == F
