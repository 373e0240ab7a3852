from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_rank, indegree_ok, multipath_ok, subsets_where
from monocoh.algebra import FiniteAlgebra, builtin, multiply
from monocoh.cochain import (FunctorSpec, cohomology, concentrated, euler_characteristic, monotone_cochain,
                             oriented_matching_cochain, poset_euler_characteristic, tensor,
                             verify_source_resolution_iso)
from monocoh.complexes import build_complex, reduced_homology
from monocoh.graphcore import (OrientedGraph, coherent_barycentric, complete_bipartite, disjoint_union, path_graph,
                               random_digraph, relabel)
from monocoh.linalg import CompositionError, ExactMatrix
from test_graphcore import digraphs

T2 = FunctorSpec(builtin("trunc", 2))
GROUND = FunctorSpec(builtin("ground"))


# ---------------------------------------------------------------------------
# independent oracle: the functor evaluated literally on tensors

def _comps(g, mask):
    adj = {v: set() for v in range(g.n)}
    for k, (s, t) in enumerate(g.edges):
        if (mask >> k) & 1:
            adj[s].add(t)
            adj[t].add(s)
    seen, out = set(), []
    for v in range(g.n):
        if v not in seen:
            comp, stack = set(), [v]
            while stack:
                x = stack.pop()
                if x not in comp:
                    comp.add(x)
                    stack.extend(adj[x])
            seen |= comp
            out.append(frozenset(comp))
    return sorted(out, key=min)


def oracle_cohomology(g, pred, alg, variant="identity"):
    a = alg.dim
    elems = subsets_where(g, pred)
    basis = {}
    for x in elems:
        r = bin(x).count("1")
        for digits in itertools.product(range(a), repeat=len(_comps(g, x))):
            basis.setdefault(r, []).append((x, digits))
    index = {r: {b: i for i, b in enumerate(bs)} for r, bs in basis.items()}
    top = max(basis)
    ranks = {}
    for r in range(top):
        rows = [[0] * len(basis[r]) for _ in basis[r + 1]]
        for col, (x, digits) in enumerate(basis[r]):
            lo = _comps(g, x)
            for e in range(g.m):
                y = x | (1 << e)
                if y == x or y not in elems:
                    continue
                sign = (-1) ** bin(x & ((1 << e) - 1)).count("1")
                hi = _comps(g, y)
                if len(hi) == len(lo) and variant == "zero":
                    continue
                # value on each component of y: product of the parts of x it contains
                factors = []
                for c in hi:
                    vec = alg.unit
                    for part, d in zip(lo, digits):
                        if part <= c:
                            vec = multiply(alg, vec, alg.basis_vector(d))
                    factors.append(vec)
                for out in itertools.product(range(a), repeat=len(hi)):
                    coef = 1
                    for vec, d in zip(factors, out):
                        coef *= vec[d]
                    if coef:
                        rows[index[r + 1][(y, out)]][col] += sign * coef
        ranks[r] = dense_rank(rows) if rows and rows[0] else 0
    return {r: len(basis[r]) - ranks.get(r, 0) - ranks.get(r - 1, 0) for r in range(top + 1)
            if len(basis[r]) - ranks.get(r, 0) - ranks.get(r - 1, 0)}


@settings(max_examples=40)
@given(digraphs(max_vertices=4, max_edges=4), st.sampled_from(["identity", "zero"]))
def test_multipath_cohomology_matches_literal_oracle(g, variant):
    spec = FunctorSpec(builtin("trunc", 2), variant)
    c = monotone_cochain(g, "multipath", spec)
    assert cohomology(c).dims() == oracle_cohomology(g, multipath_ok, spec.algebra, variant)


@settings(max_examples=25)
@given(digraphs(max_vertices=4, max_edges=4))
def test_indegree_cohomology_matches_literal_oracle_trunc3(g):
    spec = FunctorSpec(builtin("trunc", 3))
    c = monotone_cochain(g, "indeg_le_one", spec)
    assert cohomology(c).dims() == oracle_cohomology(g, indegree_ok, spec.algebra)


def test_spanning_cohomology_matches_literal_oracle():
    g = OrientedGraph(3, ((0, 1), (1, 2), (0, 2)))
    c = monotone_cochain(g, "spanning", T2)
    assert cohomology(c).dims() == oracle_cohomology(g, lambda h, x: True, T2.algebra)


# ---------------------------------------------------------------------------
# goldens

def test_isolated_vertex():
    c = monotone_cochain(OrientedGraph(1, ()), "multipath", T2)
    assert c.dims == (2,) and c.differentials == ()
    assert cohomology(c).dims() == {0: 2}


def test_single_edge_ground():
    # C^0 = F (x) F = F, C^1 = F, and the product map is an isomorphism
    c = monotone_cochain(OrientedGraph(2, ((0, 1),)), "multipath", GROUND)
    assert c.dims == (1, 1)
    assert c.differentials[0].to_dense() == [[1]]
    assert cohomology(c).dims() == {}


@given(digraphs(max_vertices=5, max_edges=6))
def test_ground_multipath_is_shifted_reduced_cohomology(g):
    h = cohomology(monotone_cochain(g, "multipath", GROUND)).dims()
    x = reduced_homology(build_complex(g, "multipath")).dims()
    assert h == {d + 1: b for d, b in x.items()}


def test_alternating_multipath_matches_matching_complex():
    g = complete_bipartite(2, 3)
    h = cohomology(monotone_cochain(g, "multipath", GROUND)).dims()
    x = reduced_homology(build_complex(g, "graph_matching")).dims()
    assert h == {d + 1: b for d, b in x.items()}


def test_multipath_goldens():
    a2 = path_graph(2, "alternating")
    assert cohomology(monotone_cochain(a2, "multipath", T2)).dims() == {0: 2, 1: 2}
    l1 = path_graph(1)
    assert cohomology(monotone_cochain(l1, "multipath", T2)).dims() == {0: 2}


def test_clique_oriented_matching(clique3):
    c = oriented_matching_cochain(clique3, T2)
    assert c.dims == (64, 96, 32)
    assert cohomology(c).dims() == {0: 8, 1: 8}
    assert cohomology(c, "z").torsion == {}


@pytest.mark.parametrize("alpha", [1, 2, 3, 4])
def test_clique_euler_polynomials(clique3, alpha):
    spec = FunctorSpec(builtin("ground") if alpha == 1 else builtin("trunc", alpha))
    c = oriented_matching_cochain(clique3, spec)
    assert c.dims == (alpha ** 6, 3 * alpha ** 5, 2 * alpha ** 4)
    assert euler_characteristic(c) == alpha ** 4 * (alpha - 2) * (alpha - 1)
    assert poset_euler_characteristic(clique3, "oriented_matching", alpha) == euler_characteristic(c)


def test_edgeless_graph():
    g = OrientedGraph(3, ())
    c = oriented_matching_cochain(g, T2)
    assert c.dims == (8,)
    assert verify_source_resolution_iso(g, T2).ok


def test_basis_layout_is_mixed_radix(clique3):
    c = monotone_cochain(clique3, "multipath", T2)
    b0 = c.basis(0)
    assert b0[:3] == [(0, (0, 0, 0)), (0, (0, 0, 1)), (0, (0, 1, 0))]
    assert len(c.basis(1)) == c.dims[1]


# ---------------------------------------------------------------------------
# properties

@given(digraphs(max_vertices=4, max_edges=5), st.sampled_from(["multipath", "indeg_le_one", "oriented_matching"]))
def test_d_squared_zero_and_euler(g, prop):
    c = monotone_cochain(g, prop, T2, check=False)
    assert c.d_squared_zero()
    assert euler_characteristic(c) == poset_euler_characteristic(g, prop, 2)


@given(digraphs(max_vertices=4, max_edges=4))
def test_zero_variant_keeps_dimensions(g):
    a = monotone_cochain(g, "multipath", T2)
    b = monotone_cochain(g, "multipath", FunctorSpec(T2.algebra, "zero"))
    assert a.dims == b.dims and euler_characteristic(a) == euler_characteristic(b)


def test_nonzero_composition_is_reported():
    bad = monotone_cochain(path_graph(2), "multipath", T2, check=False)
    d0 = bad.differentials[0]
    d0.data[0][0] = d0.data[0].get(0, 0) + 7
    with pytest.raises(CompositionError, match="internal consistency"):
        bad.check()


@given(digraphs(max_vertices=4, max_edges=4), st.randoms(use_true_random=False))
def test_cohomology_invariant_under_relabelling(g, r):
    perm = list(range(g.n))
    r.shuffle(perm)
    h = relabel(g, perm)
    for prop in ("multipath", "oriented_matching"):
        assert cohomology(monotone_cochain(g, prop, T2)).dims() == cohomology(monotone_cochain(h, prop, T2)).dims()


@given(digraphs(max_vertices=4, max_edges=4), st.randoms(use_true_random=False))
def test_cohomology_invariant_under_edge_reordering(g, r):
    order = list(range(g.m))
    r.shuffle(order)
    h = OrientedGraph(g.n, tuple(g.edges[k] for k in order))
    assert cohomology(monotone_cochain(g, "multipath", T2)).dims() == \
        cohomology(monotone_cochain(h, "multipath", T2)).dims()


def test_tensor_unit_and_multiplicativity():
    a = monotone_cochain(path_graph(2, "alternating"), "multipath", T2)
    b = monotone_cochain(path_graph(1), "multipath", T2)
    u = tensor(a, concentrated(1))
    assert u.dims == a.dims and cohomology(u).dims() == cohomology(a).dims()
    t = tensor(a, b)
    assert t.d_squared_zero()
    assert euler_characteristic(t) == euler_characteristic(a) * euler_characteristic(b)


def test_tensor_matches_disjoint_union():
    g, h = path_graph(2, "alternating"), path_graph(1)
    t = tensor(monotone_cochain(g, "multipath", T2), monotone_cochain(h, "multipath", T2))
    u = monotone_cochain(disjoint_union(g, h), "multipath", T2)
    assert t.dims == u.dims
    assert cohomology(t).dims() == cohomology(u).dims()


def test_kunneth_over_field():
    a = monotone_cochain(path_graph(2, "alternating"), "multipath", T2)
    b = monotone_cochain(OrientedGraph(3, ((0, 1), (2, 1))), "multipath", T2)
    ha, hb = cohomology(a).dims(), cohomology(b).dims()
    expected = {}
    for i, x in ha.items():
        for j, y in hb.items():
            expected[i + j] = expected.get(i + j, 0) + x * y
    assert cohomology(tensor(a, b)).dims() == expected


def test_fractional_algebra_agrees_with_integral_model():
    # Q[X]/(X^2 - 1/4) and Q[X]/(X^2 - 1) are isomorphic over Q (X -> X/2)
    frac = FiniteAlgebra(2, ("1", "X"), (1, 0), (((1, 0), (0, 1)), ((0, 1), ("1/4", 0))))
    integral = FiniteAlgebra(2, ("1", "X"), (1, 0), (((1, 0), (0, 1)), ((0, 1), (1, 0))))
    g = OrientedGraph(3, ((0, 1), (1, 2), (0, 2)))
    hf = cohomology(oriented_matching_cochain(g, FunctorSpec(frac))).dims()
    hi = cohomology(oriented_matching_cochain(g, FunctorSpec(integral))).dims()
    assert hf == hi


def test_source_resolution_iso_random():
    rng = random.Random(99)
    for _ in range(8):
        n = rng.randint(1, 4)
        g = random_digraph(rng, n, rng.randint(0, min(4, n * (n - 1) // 2)))
        r = verify_source_resolution_iso(g, T2)
        assert r.ok, r.message


def test_oriented_matching_dims_formula(clique3):
    b = coherent_barycentric(clique3)
    c = oriented_matching_cochain(clique3, T2)
    for n, d in enumerate(c.dims):
        expected = 0
        for x in subsets_where(b, multipath_ok):
            if bin(x).count("1") == n:
                expected += 2 ** len(_comps(b, x))
        assert d == expected


def test_exact_matrix_shape_checked():
    from monocoh.cochain import CochainComplex
    with pytest.raises(ValueError):
        CochainComplex((1, 2), (ExactMatrix(1, 1),))
