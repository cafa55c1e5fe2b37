"""Shared generators and independent mini-oracles for the test suite."""

import numpy as np

from ncsym import ratexpr as rx
from ncsym.words import FreePoly, MatrixTuple


def ginibre(n, rng):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) \
        / np.sqrt(2.0)


def well_conditioned(n, rng, spread=0.35, cond_cap=50.0):
    while True:
        p = np.eye(n, dtype=complex) + spread * ginibre(n, rng)
        if np.linalg.cond(p) < cond_cap:
            return p


def clustered_matrix(rng, centers, sizes, spread):
    """Diagonalizable matrix with eigenvalues scattered around the centers.

    Offsets are uniform in a disc of radius spread (bounded, so coverage by
    quarter-isolated discs is certain).  Returns (x, eigenvalues, cluster
    index per eigenvalue, basis P).
    """
    eigs, labels = [], []
    for idx, (c, m) in enumerate(zip(centers, sizes)):
        for _ in range(m):
            offset = spread * np.sqrt(rng.uniform()) \
                * np.exp(2j * np.pi * rng.uniform())
            eigs.append(c + offset)
            labels.append(idx)
    n = len(eigs)
    p = well_conditioned(n, rng)
    x = p @ np.diag(eigs) @ np.linalg.inv(p)
    return x, np.array(eigs), np.array(labels), p


def cluster_centers_off_cut(rng, k, r_min=0.7, r_max=2.5, min_gap=1.0,
                            cut_margin=0.35):
    """k well-separated nonzero centers whose neighborhoods avoid the
    negative real axis (so one holomorphic square root covers each disc)."""
    while True:
        centers = []
        for _ in range(k):
            rad = rng.uniform(r_min, r_max)
            arg = rng.uniform(-np.pi + 0.5, np.pi - 0.5)
            centers.append(rad * np.exp(1j * arg))
        ok = all(abs(a - b) > min_gap
                 for i, a in enumerate(centers)
                 for b in centers[i + 1:])
        ok = ok and all(c.real > 0 or abs(c.imag) > cut_margin
                        for c in centers)
        if ok:
            return centers


def random_pair(n, rng):
    return MatrixTuple((ginibre(n, rng), ginibre(n, rng)))


def random_poly(rng, d=2, max_degree=4, terms=5):
    p = FreePoly.zero(d)
    for _ in range(terms):
        length = int(rng.integers(0, max_degree + 1))
        word = tuple(int(rng.integers(0, d)) for _ in range(length))
        coeff = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        p = p + FreePoly.word(word, d, coeff)
    return p


def scalar_eval(e, assignment):
    """Plain complex-arithmetic evaluator, independent of matrix evaluation."""
    if isinstance(e, rx.Variable):
        return complex(assignment[e.name])
    if isinstance(e, rx.Scalar):
        return e.value
    if isinstance(e, rx.Sum):
        return sum(scalar_eval(c, assignment) for c in e.children)
    if isinstance(e, rx.Product):
        out = 1 + 0j
        for c in e.children:
            out *= scalar_eval(c, assignment)
        return out
    if isinstance(e, rx.ScalarMul):
        return e.coeff * scalar_eval(e.child, assignment)
    if isinstance(e, rx.Inverse):
        return 1.0 / scalar_eval(e.child, assignment)
    raise TypeError(type(e).__name__)


def rel_err(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.linalg.norm(a - b, 2) / (1.0 + np.linalg.norm(b, 2))
