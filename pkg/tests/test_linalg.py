from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dense_rank, invariant_factors
from monocoh.linalg import (CompositionError, ExactMatrix, chain_homology, cochain_cohomology,
                            parse_coefficients, rank, smith_normal_form)


def small_matrices(max_rows=6, max_cols=6, lo=-3, hi=3):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(small_matrices())
def test_rank_over_q_matches_dense_elimination(rows):
    assert rank(ExactMatrix.from_dense(rows)) == dense_rank(rows)


@given(small_matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_dense_elimination(rows, p):
    assert rank(ExactMatrix.from_dense(rows), p) == dense_rank(rows, p)


@given(small_matrices(max_rows=4, max_cols=4, lo=-6, hi=6))
def test_smith_form_matches_determinantal_divisors(rows):
    assert smith_normal_form(ExactMatrix.from_dense(rows)) == invariant_factors(rows)


def test_smith_form_known_examples():
    assert smith_normal_form(ExactMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [2, 6, 12]
    assert smith_normal_form(ExactMatrix.from_dense([[2, 0], [0, 3]])) == [1, 6]
    assert smith_normal_form(ExactMatrix.zeros(3, 2)) == []


def test_sparse_rank_path_on_larger_matrix():
    rng = random.Random(3)
    rows = [[rng.choice([0, 0, 0, 1, -1, 2]) for _ in range(90)] for _ in range(70)]
    m = ExactMatrix.from_dense(rows)
    assert rank(m) == dense_rank(rows)
    assert rank(m, 3) == dense_rank(rows, 3)


def test_rank_accepts_fractions():
    m = ExactMatrix.from_dense([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
    assert rank(m) == 1


def test_matmul_transpose_and_identity():
    a = ExactMatrix.from_dense([[1, 2], [0, -1], [3, 0]])
    assert (a @ ExactMatrix.identity(2)) == a
    assert a.transpose().to_dense() == [[1, 0, 3], [2, -1, 0]]
    assert (a.transpose() @ a).to_dense() == [[10, 2], [2, 5]]
    with pytest.raises(ValueError):
        a @ a


@pytest.mark.parametrize("text, expected", [("q", "q"), ("rationals", "q"), ("Z", "z"), ("fp:3", 3), ("7", 7), (5, 5)])
def test_parse_coefficients(text, expected):
    assert parse_coefficients(text) == expected


@pytest.mark.parametrize("bad", ["fp:4", "banana", 1, "fp:0"])
def test_parse_coefficients_rejects(bad):
    with pytest.raises(ValueError):
        parse_coefficients(bad)


def _boundary_of(simplices):
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    mats = []
    for d in range(1, max(by_dim) + 1):
        lower = by_dim.get(d - 1, [])
        li = {s: i for i, s in enumerate(lower)}
        m = ExactMatrix(len(lower), len(by_dim.get(d, [])))
        for c, s in enumerate(by_dim.get(d, [])):
            for k in range(len(s)):
                m.data[li[s[:k] + s[k + 1:]]][c] = (-1) ** k
        mats.append(m)
    return mats, [len(by_dim.get(d, [])) for d in range(max(by_dim) + 1)]


def test_homology_of_torus_and_projective_plane():
    # minimal 7-vertex torus triangulation
    torus_facets = []
    for i in range(7):
        torus_facets.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        torus_facets.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    rp2_facets = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 3, 5), (1, 3, 4), (1, 3, 5),
                  (2, 4, 5)]
    rp2_facets = [tuple(sorted(f)) for f in rp2_facets]
    for facets, betti_q, tors_z, betti_f2 in (
            (torus_facets, {0: 1, 1: 2, 2: 1}, {}, {0: 1, 1: 2, 2: 1}),
            (rp2_facets, {0: 1}, {1: (2,)}, {0: 1, 1: 1, 2: 1})):
        faces = sorted({f for s in facets for k in range(1, 4) for f in itertools.combinations(s, k)},
                       key=lambda s: (len(s), s))
        mats, dims = _boundary_of(faces)
        assert chain_homology(mats, "q", dims=dims).dims() == betti_q
        hz = chain_homology(mats, "z", dims=dims)
        assert hz.dims() == betti_q and hz.torsion == tors_z
        assert chain_homology(mats, 2, dims=dims).dims() == betti_f2


def test_cochain_cohomology_rejects_nonzero_composition():
    d0 = ExactMatrix.from_dense([[1], [1]])
    d1 = ExactMatrix.from_dense([[1, 0]])
    with pytest.raises(CompositionError):
        cochain_cohomology([d0, d1], [1, 2, 1])


@given(st.integers(0, 10_000))
def test_complex_reduction_preserves_homology(seed):
    """Homology from the reducing walk equals ranks of the untouched maps."""
    rng = random.Random(seed)
    # random complex: d1 = B, d0 = A with B A = 0 by construction (A = kernel vectors)
    n0, n1, n2 = rng.randint(1, 5), rng.randint(2, 7), rng.randint(1, 5)
    b = [[rng.randint(-2, 2) for _ in range(n1)] for _ in range(n2)]
    # kernel of b over Z via brute force over small vectors
    kernel = []
    for _ in range(200):
        v = [rng.randint(-2, 2) for _ in range(n1)]
        if any(v) and all(sum(x * y for x, y in zip(r, v)) == 0 for r in b):
            kernel.append(v)
        if len(kernel) == n0:
            break
    if not kernel:
        return
    a = [list(col) for col in zip(*kernel)]  # n1 x len(kernel)
    dims = [len(kernel), n1, n2]
    maps = [ExactMatrix.from_dense(a), ExactMatrix.from_dense(b)]
    h = cochain_cohomology(maps, dims)
    ra, rb = dense_rank(a), dense_rank(b)
    assert h.betti == {0: dims[0] - ra, 1: dims[1] - ra - rb, 2: dims[2] - rb}
    hz = cochain_cohomology(maps, dims, "z")
    assert hz.betti == h.betti
    tors = tuple(f for f in invariant_factors(b) if f > 1) if n1 <= 5 and n2 <= 4 else None
    if tors is not None:
        assert hz.torsion.get(2, ()) == tors
