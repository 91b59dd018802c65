"""Shared helpers and hypothesis strategies."""

from __future__ import annotations

import os
import sys

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from shadowlab.core import Family, ground, k_subsets  # noqa: E402

settings.register_profile("suite", max_examples=150, deadline=None)
settings.load_profile("suite")


def to_sets(F: Family) -> set[frozenset]:
    return {frozenset(s) for s in F.sets()}


def fam(n: int, *sets, k=None) -> Family:
    return Family.from_sets(n, sets, k)


@st.composite
def uniform_families(draw, n_range=(1, 7), k_range=(1, 4), intersecting=False):
    n = draw(st.integers(max(n_range[0], k_range[0]), n_range[1]))
    k = draw(st.integers(max(1, k_range[0]), min(k_range[1], n)))
    pool = k_subsets(ground(n), k)
    picks = draw(st.lists(st.sampled_from(pool), unique=True, max_size=len(pool)))
    if intersecting:
        kept = []
        for p in picks:
            if all(p & q for q in kept):
                kept.append(p)
        picks = kept
    return Family.from_masks(n, picks, k)


@st.composite
def vertex_sets(draw, n):
    return draw(st.integers(0, ground(n)))


@pytest.fixture
def tmp_fam(tmp_path):
    from shadowlab.core import format_fam

    def write(F: Family, name: str = "f.fam") -> str:
        p = tmp_path / name
        p.write_text(format_fam(F))
        return str(p)

    return write


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
