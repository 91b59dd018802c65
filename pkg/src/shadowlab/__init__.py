"""Exact computations on k-uniform set families: shadows, links, pseudo-intersecting
certificates, chain constructions and small-case theorem sweeps."""

__version__ = "0.1.0"

from .core import (
    Family,
    LinkSpec,
    VertexSet,
    format_fam,
    from_inline,
    is_antichain,
    is_cross_intersecting,
    is_intersecting,
    is_t_union,
    join_vertex,
    link,
    min_degree,
    parse_fam,
    read_fam,
    restrict,
    shadow,
    to_inline,
    vertices,
    vset,
)
from .pseudo import (
    PseudoVerdict,
    is_link_pseudo_intersecting,
    is_pseudo_intersecting,
    is_view_pseudo_intersecting_over,
)
from .construct import (
    F_CHAIN,
    G_CERTIFICATE,
    ChainCertificate,
    build_chain_cross,
    build_chain_intersecting,
    cross_local_witness,
    lemma_step,
    local_witness,
)
from .verify import (
    Verdict,
    check_cross_local,
    check_frankl_cross,
    check_katona,
    check_kk_bound,
    check_local,
    check_union_antichain_conjecture,
    kk_lower_bound,
    replay_certificate,
)
from .hunt import (
    HuntReport,
    SearchSpace,
    enumerate_cross_pairs,
    enumerate_intersecting,
    enumerate_union_antichains,
    random_cross_pair,
    random_intersecting,
    structured_families,
    sweep,
)
