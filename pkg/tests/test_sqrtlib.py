import itertools

import numpy as np
import pytest

from ncsym import sqrtlib
from ncsym.errors import ClusteringError, UnsupportedError
from ncsym.linalg import commutator_norm, op_norm, rel_dist

from helpers import cluster_centers_off_cut, clustered_matrix


def test_existence_examples():
    assert not sqrtlib.sqrt_exists(np.array([[0, 1], [0, 0]], dtype=complex))
    assert sqrtlib.sqrt_exists(np.zeros((3, 3)))
    rng = np.random.default_rng(0)
    m = np.eye(3) + 0.4 * (rng.standard_normal((3, 3))
                           + 1j * rng.standard_normal((3, 3)))
    assert sqrtlib.sqrt_exists(m)  # invertible: no zero eigenvalue at all


def _jordan_forms(max_size, eigs=(0, 1)):
    def parts(n, most):
        if n == 0:
            yield ()
            return
        for p in range(min(n, most), 0, -1):
            for rest in parts(n - p, p):
                yield (p,) + rest

    for total in range(1, max_size + 1):
        for partition in parts(total, total):
            seen = set()
            for labels in itertools.product(eigs, repeat=len(partition)):
                key = tuple(sorted(zip(partition, labels)))
                if key in seen:
                    continue
                seen.add(key)
                blocks = []
                for size, lam in zip(partition, labels):
                    b = np.eye(size, k=1) + lam * np.eye(size)
                    blocks.append(b)
                n = sum(partition)
                m = np.zeros((n, n))
                at = 0
                for b in blocks:
                    s = b.shape[0]
                    m[at:at + s, at:at + s] = b
                    at += s
                yield m.astype(complex), key


def _solvable_in_alg_symbolic(x):
    """Independent oracle: Groebner-basis solvability of y^2 = x over
    y in span{I, x, ..., x^(n-1)} with exact rational arithmetic."""
    import sympy

    n = x.shape[0]
    xs = sympy.Matrix(n, n, [sympy.Rational(int(v.real)) for v in x.ravel()])
    cs = sympy.symbols(f"c0:{n}")
    y = sympy.zeros(n, n)
    p = sympy.eye(n)
    for c in cs:
        y = y + c * p
        p = p * xs
    eqs = [e for e in (y * y - xs) if e != 0]
    if not eqs:
        return True
    gb = sympy.groebner(eqs, *cs, order="grevlex", domain="QQ")
    return sympy.S.One not in gb.exprs


def test_existence_matches_symbolic_oracle_on_small_jordan_forms():
    checked = 0
    for m, _key in _jordan_forms(4):
        assert sqrtlib.sqrt_exists(m) == _solvable_in_alg_symbolic(m), \
            f"disagreement on Jordan structure {_key}"
        checked += 1
    assert checked == 37


def test_identity_has_two_roots():
    rs = sqrtlib.all_square_roots(np.eye(2, dtype=complex))
    assert rs.k == 1 and len(rs) == 2
    mats = sorted(rs.roots, key=lambda r: r[0, 0].real)
    assert np.allclose(mats[0], -np.eye(2))
    assert np.allclose(mats[1], np.eye(2))


def test_diag_1_4_has_four_roots():
    rs = sqrtlib.all_square_roots(np.diag([1.0, 4.0]).astype(complex))
    assert rs.k == 2 and len(rs) == 4
    got = {(round(r[0, 0].real, 8), round(r[1, 1].real, 8)) for r in rs.roots}
    assert got == {(1, 2), (1, -2), (-1, 2), (-1, -2)}


def test_jordan_block_roots_by_hand():
    # y = aI + b(x - I) with y^2 = x forces a = +-1, b = 1/(2a)
    x = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    rs = sqrtlib.all_square_roots(x)
    assert rs.k == 1 and len(rs) == 2
    for root in rs.roots:
        assert rel_dist(root @ root, x) < 1e-10
    traces = sorted(np.trace(r).real for r in rs.roots)
    assert np.allclose(traces, [-2.0, 2.0])
    by_hand = {1.0: np.array([[1.0, 0.5], [0.0, 1.0]]),
               -1.0: np.array([[-1.0, -0.5], [0.0, -1.0]])}
    for root in rs.roots:
        key = round(root[0, 0].real, 8)
        assert np.allclose(root, by_hand[key])


def test_enumeration_matches_eigendecomposition_oracle():
    rng = np.random.default_rng(1)
    for trial in range(8):
        k = int(rng.integers(1, 5))
        centers = cluster_centers_off_cut(rng, k)
        sizes = [int(rng.integers(1, 3)) for _ in range(k)]
        x, eigs, labels, p = clustered_matrix(rng, centers, sizes, 0.02)
        rs = sqrtlib.all_square_roots(x, gap=0.5)
        assert rs.k == k and len(rs) == 2 ** k
        p_inv = np.linalg.inv(p)
        oracle = []
        for tau in itertools.product((1, -1), repeat=k):
            d = np.diag([tau[labels[i]] * np.sqrt(eigs[i])
                         for i in range(len(eigs))])
            oracle.append(p @ d @ p_inv)
        _assert_same_root_sets(rs.roots, oracle)


def _assert_same_root_sets(got, expected, tol=1e-7):
    scale = 1.0 + max(op_norm(r) for r in expected)
    taken = set()
    for e in expected:
        dists = [op_norm(e - g) / scale for g in got]
        j = int(np.argmin(dists))
        assert dists[j] <= tol, f"unmatched oracle root (gap {min(dists):.2e})"
        assert j not in taken, "two oracle roots matched one output"
        taken.add(j)
    assert len(taken) == len(got)


def test_roots_commute_with_base():
    rng = np.random.default_rng(2)
    centers = cluster_centers_off_cut(rng, 3)
    x, _, _, _ = clustered_matrix(rng, centers, [2, 1, 2], 0.02)
    rs = sqrtlib.all_square_roots(x, gap=0.5)
    for root in rs.roots:
        assert commutator_norm(root, x) <= 1e-8 * op_norm(x)


def test_semisimple_zero_extension():
    x = np.diag([0.0, 0.0, 4.0]).astype(complex)
    rs = sqrtlib.all_square_roots(x)
    assert rs.extension and rs.k == 1 and len(rs) == 2
    got = sorted(round(r[2, 2].real, 8) for r in rs.roots)
    assert got == [-2.0, 2.0]
    for r in rs.roots:
        assert np.abs(r[:2, :2]).max() < 1e-8
        assert rel_dist(r @ r, x) < 1e-8


def test_zero_extension_refuses_uncoverable_spread():
    # the merged nonzero cluster fits its own disc, but adding a disc at 0
    # shrinks the common radius below the cluster spread
    x = np.diag([0.0, 0.7007, 2.0993]).astype(complex)
    with pytest.raises(ClusteringError):
        sqrtlib.all_square_roots(x, gap=1.5)
    # finer clustering gives two nonzero discs and 4 roots
    assert len(sqrtlib.all_square_roots(x, gap=0.5)) == 4


def test_zero_matrix_has_exactly_its_zero_root():
    rs = sqrtlib.all_square_roots(np.zeros((3, 3), dtype=complex))
    assert len(rs) == 1 and rs.k == 0 and rs.extension
    assert np.allclose(rs.roots[0], 0.0)


def test_defective_zero_is_refused():
    bad = np.zeros((3, 3), dtype=complex)
    bad[0, 1] = 1.0  # nilpotent cell of size 2 plus a semisimple 0
    with pytest.raises(UnsupportedError):
        sqrtlib.all_square_roots(bad)


def test_unisolable_clusters_are_refused():
    # merging 1.0 and 1.2 leaves a spread the quarter-isolation radius
    # against the cluster at 1.5 cannot absorb
    x = np.diag([1.0, 1.2, 1.5]).astype(complex)
    with pytest.raises(ClusteringError):
        sqrtlib.all_square_roots(x, gap=0.25)
    # a finer gap separates everything and enumeration succeeds
    assert len(sqrtlib.all_square_roots(x, gap=0.05)) == 8


def test_riemann_fiber_counts():
    assert len(sqrtlib.riemann_fiber(np.eye(2, dtype=complex))) == 2
    assert len(sqrtlib.riemann_fiber(
        np.diag([1.0, 4.0, 9.0]).astype(complex))) == 8
    pairs = sqrtlib.riemann_fiber(np.diag([1.0, 1.04]).astype(complex),
                                  gap=0.2)
    assert len(pairs) == 2  # close pair treated as one cluster
    for m, n in pairs:
        assert rel_dist(n @ n, m) < 1e-8


def test_sigma_map_round_trip():
    rng = np.random.default_rng(3)
    y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    a, b = sqrtlib.sigma_map(y)
    assert np.allclose(a, y @ y)
    assert np.allclose(sqrtlib.sigma_inverse((a, b)), y)
    assert np.allclose(sqrtlib.sigma_map(np.eye(2))[0], np.eye(2))
    assert np.allclose(
        sqrtlib.sigma_map(np.diag([1.0, 2.0]))[0], np.diag([1.0, 4.0]))
