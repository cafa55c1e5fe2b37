"""Dense complex linear algebra support.

Spectra with deterministic ordering, single-linkage eigenvalue clustering,
direct sums and similarity, block evaluation of polynomial matrices, the
invertibility / spectral-symmetry predicates, membership in the algebra
generated by a matrix, and seeded structured random generators.

Owns the matrix-tuple JSON format: an object with fields n, d and
entries[d][n][n], each entry a [re, im] pair.  Finite doubles round-trip
bit-exactly through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (DimensionMismatchError, GenerationError, NumericalError)
from .words import FreePoly, MatrixTuple

DEFAULT_TOL = 1e-10


def op_norm(x: np.ndarray) -> float:
    """Largest singular value."""
    x = np.asarray(x, dtype=complex)
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def rel_dist(a: np.ndarray, b: np.ndarray) -> float:
    """||a - b|| / (1 + ||b||) with the operator norm."""
    return op_norm(np.asarray(a) - np.asarray(b)) / (1.0 + op_norm(b))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicity, sorted by (real, imag)."""

    eigenvalues: tuple

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def radius(self) -> float:
        return max((abs(z) for z in self.eigenvalues), default=0.0)

    def distinct(self, tol: float) -> list:
        """Representatives of eigenvalue groups merged at absolute gap tol."""
        return [g.center for g in cluster_eigenvalues(self.eigenvalues, tol)]


def spectrum(x: np.ndarray) -> Spectrum:
    x = np.asarray(x, dtype=complex)
    try:
        eigs = np.linalg.eigvals(x)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    order = np.lexsort((eigs.imag, eigs.real))
    return Spectrum(tuple(eigs[order]))


@dataclass(frozen=True)
class EigenCluster:
    center: complex
    indices: tuple  # positions into the sorted eigenvalue list
    spread: float   # max distance of a member from the center


def cluster_eigenvalues(eigenvalues: Sequence[complex], gap: float) -> list:
    """Single-linkage grouping: chains of gaps <= gap land in one cluster."""
    eigs = list(eigenvalues)
    m = len(eigs)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if abs(eigs[i] - eigs[j]) <= gap:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    out = []
    for idx in groups.values():
        center = sum(eigs[i] for i in idx) / len(idx)
        spread = max(abs(eigs[i] - center) for i in idx)
        out.append(EigenCluster(center, tuple(sorted(idx)), spread))
    out.sort(key=lambda c: (c.center.real, c.center.imag))
    return out


def direct_sum(x: MatrixTuple, y: MatrixTuple) -> MatrixTuple:
    """Componentwise block-diagonal sum."""
    if x.d != y.d:
        raise DimensionMismatchError(f"tuple lengths differ: {x.d} vs {y.d}")
    return MatrixTuple(tuple(block_diag(a, b) for a, b in zip(x, y)))


def block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]),
                   dtype=complex)
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def conjugate(s: np.ndarray, x: MatrixTuple) -> MatrixTuple:
    """Componentwise s^{-1} x s."""
    s = np.asarray(s, dtype=complex)
    if not in_I(s):
        raise NumericalError("conjugating matrix is numerically singular")
    s_inv = np.linalg.inv(s)
    return MatrixTuple(tuple(s_inv @ m @ s for m in x))


def eval_delta(delta: Sequence[Sequence[FreePoly]], x: MatrixTuple) -> np.ndarray:
    """Block matrix [delta_ij(x)] of entrywise evaluations."""
    rows = []
    for row in delta:
        rows.append([p.evaluate(x) for p in row])
    return np.block(rows)


def in_B_delta(delta: Sequence[Sequence[FreePoly]], x: MatrixTuple) -> bool:
    """Membership in the basic set {x : ||[delta_ij(x)]|| < 1}."""
    return op_norm(eval_delta(delta, x)) < 1.0


def in_Q(x: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff the spectrum is disjoint from its negative.

    Any matrix with 0 in its spectrum fails (0 pairs with itself).
    """
    eigs = np.asarray(spectrum(x).eigenvalues)
    scale = 1.0 + float(np.abs(eigs).max(initial=0.0))
    sums = np.abs(eigs[:, None] + eigs[None, :])
    return bool(sums.min() > tol * scale)


def in_I(x: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Numerical invertibility: smallest singular value > tol * largest."""
    s = np.linalg.svd(np.asarray(x, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return False
    return bool(s[-1] > tol * s[0])


def numerical_rank(x: np.ndarray, threshold: float) -> int:
    """Number of singular values above the absolute threshold."""
    s = np.linalg.svd(np.asarray(x, dtype=complex), compute_uv=False)
    return int(np.count_nonzero(s > threshold))


def alg_residual(y: np.ndarray, x: np.ndarray, rank_tol: float = 1e-12) -> float:
    """Relative distance of y from span{I, x, ..., x^{n-1}}.

    Projection uses an SVD-derived orthonormal basis so rank deficiency of
    the power basis (minimal polynomial of degree < n) is harmless.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    n = x.shape[0]
    powers = [np.eye(n, dtype=complex)]
    for _ in range(n - 1):
        powers.append(powers[-1] @ x)
    basis = np.stack([p.ravel() for p in powers], axis=1)
    u, s, _ = np.linalg.svd(basis, full_matrices=False)
    keep = s > rank_tol * s[0]
    u = u[:, keep]
    vec = y.ravel()
    resid = vec - u @ (u.conj().T @ vec)
    return float(np.linalg.norm(resid) / (1.0 + np.linalg.norm(vec)))


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return op_norm(a @ b - b @ a)


# -- structured random generation -------------------------------------------

RETRY_CAP = 100


def ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian matrix with iid standard entries."""
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) \
        / np.sqrt(2.0)


def random_unit_norm(n: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(n, rng)
    nrm = op_norm(g)
    if nrm == 0.0:  # pragma: no cover - probability zero
        return np.eye(n, dtype=complex)
    return g / nrm


def random_similarity(n: int, rng: np.random.Generator,
                      spread: float = 0.4) -> np.ndarray:
    """Invertible matrix with modest condition number."""
    for _ in range(RETRY_CAP):
        s = np.eye(n, dtype=complex) + spread * ginibre(n, rng)
        if in_I(s, 1e-6) and np.linalg.cond(s) < 50:
            return s
    raise GenerationError("could not draw a well-conditioned similarity")


CONSTRAINTS = ("v-invertible", "v-in-Q", "distinct-eigenvalues",
               "unit-norm", "generic-u")


def random_tuple(level: int, d: int, constraints: Iterable[str] = (),
                 rng: Optional[np.random.Generator] = None,
                 retries: int = RETRY_CAP) -> MatrixTuple:
    """Seeded random level-n tuple satisfying the requested predicates.

    For d = 2 the spectral constraints are read in the u,v chart:
    v = (w^1 - w^2)/2 must be invertible / in Q / have simple spectrum.
    "generic-u" draws v with distinct nonzero eigenvalues in Q and u with
    no zero entries in v's eigenbasis, which pins the fiber of the
    symmetrization map down to the pair {w, w^f}.
    """
    rng = rng or np.random.default_rng()
    wanted = set(constraints)
    unknown = wanted - set(CONSTRAINTS)
    if unknown:
        raise ValueError(f"unknown constraints: {sorted(unknown)}")
    for _ in range(retries):
        if "generic-u" in wanted:
            t = _generic_u_pair(level, rng)
        else:
            t = MatrixTuple(tuple(ginibre(level, rng) for _ in range(d)))
        v = _v_part(t)
        if "v-invertible" in wanted and not in_I(v):
            continue
        if "v-in-Q" in wanted and not in_Q(v):
            continue
        if "distinct-eigenvalues" in wanted and not _simple_spectrum(v):
            continue
        if "unit-norm" in wanted:
            scale = max(op_norm(m) for m in t)
            if scale == 0.0:
                continue
            t = MatrixTuple(tuple(m / scale for m in t))
        return t
    raise GenerationError(
        f"no level-{level} tuple satisfying {sorted(wanted)} "
        f"after {retries} draws")


def _v_part(t: MatrixTuple) -> np.ndarray:
    if t.d == 2:
        return 0.5 * (t[0] - t[1])
    return t[0]


def _simple_spectrum(x: np.ndarray, rel_gap: float = 1e-6) -> bool:
    eigs = np.asarray(spectrum(x).eigenvalues)
    n = len(eigs)
    if n < 2:
        return True
    scale = 1.0 + float(np.abs(eigs).max())
    diffs = np.abs(eigs[:, None] - eigs[None, :])
    diffs[np.diag_indices(n)] = np.inf
    return bool(diffs.min() > rel_gap * scale)


def _generic_u_pair(n: int, rng: np.random.Generator) -> MatrixTuple:
    """Pair w = (u+v, u-v) realizing a generically 2-point fiber."""
    for _ in range(RETRY_CAP):
        moduli = rng.uniform(0.5, 1.5, size=n)
        phases = rng.uniform(0.0, 2 * np.pi, size=n)
        lam = moduli * np.exp(1j * phases)
        sums = np.abs(lam[:, None] + lam[None, :])
        diffs = np.abs(lam[:, None] - lam[None, :])
        diffs[np.diag_indices(n)] = np.inf
        if sums.min() < 0.05 or diffs.min() < 0.05:
            continue
        p = np.eye(n, dtype=complex) + 0.4 * ginibre(n, rng)
        if np.linalg.cond(p) > 50:
            continue
        a = ginibre(n, rng)
        if np.abs(a).min() < 0.05:
            continue
        p_inv = np.linalg.inv(p)
        v = p @ np.diag(lam) @ p_inv
        u = p @ a @ p_inv
        return MatrixTuple((u + v, u - v))
    raise GenerationError("generic-u construction failed")


# -- matrix-tuple JSON format ------------------------------------------------

def matrix_to_lists(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(e.real), float(e.imag)] for e in row] for row in m]


def matrix_from_lists(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        raise ValueError(f"expected [n][n][2] matrix data, got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def tuple_to_json_dict(t: MatrixTuple) -> dict:
    return {"n": t.n, "d": t.d,
            "entries": [matrix_to_lists(m) for m in t]}


def tuple_from_json_dict(data: dict) -> MatrixTuple:
    entries = [matrix_from_lists(e) for e in data["entries"]]
    t = MatrixTuple(entries)
    if t.n != data.get("n", t.n) or t.d != data.get("d", t.d):
        raise ValueError("matrix-tuple JSON header disagrees with entries")
    return t
