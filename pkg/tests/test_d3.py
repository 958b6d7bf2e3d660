"""General-d machinery exercised at d = 3.

The linear A4 quiver with both length-2 paths killed has seven
indecomposables (four simples and three length-2 uniserials), global
dimension 3, and add(A + DA) = add(P1+P2+P3+S4+S1) as a 3-cluster-tilting
subcategory.
"""

import pytest

from taukit import arknit, highercat as hc, modcat as mc
from taukit.algebra import parse_algebra

A4_RAD2 = """\
field 101
vertices 1 2 3 4
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 4
relation b*a
relation c*b
"""


@pytest.fixture(scope="module")
def A4():
    return parse_algebra(A4_RAD2)


@pytest.fixture(scope="module")
def idx(A4):
    return arknit.knit_indecomposables(A4)


@pytest.fixture(scope="module")
def C3(idx):
    vecs = {m.dim_vector(): i for i, m in enumerate(idx.modules)}
    members = [vecs[(1, 1, 0, 0)], vecs[(0, 1, 1, 0)], vecs[(0, 0, 1, 1)],
               vecs[(0, 0, 0, 1)], vecs[(1, 0, 0, 0)]]
    return hc.Subcat.of(idx, members)


def test_census(A4, idx):
    assert A4.dim == 7
    assert mc.global_dimension(A4) == 3
    assert {m.dim_vector() for m in idx.modules} == {
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
        (1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1),
    }


def test_tau3(A4, idx):
    vecs = {m.dim_vector(): i for i, m in enumerate(idx.modules)}
    S1 = idx.modules[vecs[(1, 0, 0, 0)]]
    S4 = idx.modules[vecs[(0, 0, 0, 1)]]
    assert mc.is_isomorphic(mc.tau_d(S1, 3), S4)
    assert mc.is_isomorphic(mc.tau_d_inv(S4, 3), S1)
    P1 = idx.modules[vecs[(1, 1, 0, 0)]]
    assert mc.tau_d(P1, 3).is_zero()


def test_three_cluster_tilting(idx, C3):
    rep = hc.is_d_cluster_tilting(C3, 3)
    assert rep.ok
    # removing any member breaks it, and mod A itself is not 3-CT
    for drop in C3.member_list():
        assert not hc.is_d_cluster_tilting(hc.Subcat.of(idx, C3.members - {drop}), 3).ok
    whole = hc.Subcat.of(idx, range(len(idx.modules)))
    assert not hc.is_d_cluster_tilting(whole, 3).ok


def test_c_resolutions_d3(idx, C3):
    vecs = {m.dim_vector(): i for i, m in enumerate(idx.modules)}
    S2 = idx.modules[vecs[(0, 1, 0, 0)]]
    right = hc.c_resolution(C3, S2, "right", 3)
    assert [m.dim_vector() for m in right.modules] == [
        (0, 0, 0, 1), (0, 0, 1, 1), (0, 1, 1, 0), (0, 1, 0, 0)]
    left = hc.c_resolution(C3, S2, "left", 3)
    assert [m.dim_vector() for m in left.modules] == [
        (0, 1, 0, 0), (1, 1, 0, 0), (1, 0, 0, 0)]
    for M in idx.modules:
        for side in ("right", "left"):
            seq = hc.c_resolution(C3, M, side, 3)
            assert hc.hom_exactness_probe(seq, C3.modules(), side)


def _projective_resolution_sequence(idx):
    """0 -> S4 -> P3 -> P2 -> P1 -> S1 -> 0."""
    vecs = {m.dim_vector(): i for i, m in enumerate(idx.modules)}
    S4 = idx.modules[vecs[(0, 0, 0, 1)]]
    P3 = idx.modules[vecs[(0, 0, 1, 1)]]
    P2 = idx.modules[vecs[(0, 1, 1, 0)]]
    P1 = idx.modules[vecs[(1, 1, 0, 0)]]
    S1 = idx.modules[vecs[(1, 0, 0, 0)]]
    (g2,) = mc.hom_basis(P3, P2)
    (g1,) = mc.hom_basis(P2, P1)
    parts = mc.map_parts(g2)
    start = parts.kernel_inclusion.compose(mc.iso_between_indecomposables(parts.kernel, S4))
    cover = mc.projective_cover(S1)
    end = cover.compose(mc.iso_between_indecomposables(P1, cover.source))
    seq = hc.ExactSeq([S4, P3, P2, P1, S1], [start, g2, g1, end])
    assert seq.is_exact()
    return seq


def test_d_pullback_d3_identity(idx, C3):
    seq = _projective_resolution_sequence(idx)
    out = hc.d_pullback(C3, seq, mc.ModMap.identity(seq.modules[-1]))
    assert out.lifted.is_exact()
    assert out.connecting.is_exact()
    for mine, theirs in zip(out.lifted.modules[1:], seq.modules[1:]):
        assert mc.is_isomorphic(mine, theirs)


def test_d_pullback_d3_along_cover(idx, C3):
    seq = _projective_resolution_sequence(idx)
    vecs = {m.dim_vector(): i for i, m in enumerate(idx.modules)}
    P1 = idx.modules[vecs[(1, 1, 0, 0)]]
    (f,) = mc.hom_basis(P1, seq.modules[-1])
    out = hc.d_pullback(C3, seq, f)
    assert out.lifted.is_exact()
    assert out.connecting.is_exact()
    assert len(out.verticals) == 4
    for M in out.lifted.modules[1:]:
        assert C3.contains(M)
