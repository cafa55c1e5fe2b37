"""Simple-set geometry, membership predicates and the symmetrization map.

A simple set is a finite union of equal-radius open discs around nonzero-or-
not centers.  This module owns separation / t-isolation / subordination, the
default radius rule, the spectral membership predicates, the map
pi(w) = (u, v^2, vuv) with its local sections, and brute-force fibers of pi
through branch square roots.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ClusteringError, DimensionMismatchError, UnsupportedError
from .linalg import (cluster_eigenvalues, commutator_norm, in_I, in_Q,
                     op_norm, spectrum)
from .words import FreePoly, MatrixTuple

CONTAINMENT_MARGIN = 1e-8  # discs are shrunk by this fraction of r for tests


@dataclass(frozen=True)
class SimpleSet:
    """Union of open discs centers + radius * D, all with one radius."""

    centers: tuple
    radius: float

    def __init__(self, centers: Iterable[complex], radius: float):
        centers = tuple(sorted((complex(c) for c in centers),
                               key=lambda z: (z.real, z.imag)))
        if not centers:
            raise ValueError("a simple set needs at least one center")
        if radius <= 0:
            raise ValueError(f"radius must be positive, got {radius}")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radius", float(radius))

    @property
    def k(self) -> int:
        return len(self.centers)

    def separation(self) -> float:
        """Min pairwise center distance; +inf for a singleton."""
        if len(self.centers) < 2:
            return math.inf
        return min(abs(c - d) for c, d in
                   itertools.combinations(self.centers, 2))

    def is_t_isolated(self, t: float) -> bool:
        return self.radius < t * self.separation()

    def is_quarter_isolated(self) -> bool:
        return self.is_t_isolated(0.25)

    def is_subordinate_to(self, other: "SimpleSet") -> bool:
        """Each disc here meets at most one disc of the other set."""
        for c in self.centers:
            hits = sum(1 for d in other.centers
                       if abs(c - d) < self.radius + other.radius)
            if hits > 1:
                return False
        return True

    def locate(self, z: complex, margin: float = 0.0) -> Optional[int]:
        """Index of the disc containing z, or None."""
        r = self.radius * (1.0 - margin)
        for i, c in enumerate(self.centers):
            if abs(z - c) < r:
                return i
        return None

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return self.locate(z, margin) is not None

    def covers(self, points: Iterable[complex],
               margin: float = CONTAINMENT_MARGIN) -> bool:
        return all(self.contains(z, margin) for z in points)

    def avoids_zero(self) -> bool:
        return self.radius < min(abs(c) for c in self.centers)


def separation(delta: SimpleSet) -> float:
    return delta.separation()


def is_t_isolated(delta: SimpleSet, t: float) -> bool:
    return delta.is_t_isolated(t)


def is_subordinate(delta2: SimpleSet, delta1: SimpleSet) -> bool:
    """True iff each disc of delta2 meets at most one disc of delta1."""
    return delta2.is_subordinate_to(delta1)


def default_radius(centers: Iterable[complex]) -> float:
    """Half of min(min |c|, sep/4): keeps 0 outside and quarter-isolation."""
    centers = tuple(complex(c) for c in centers)
    closest = min(abs(c) for c in centers)
    if closest == 0.0:
        raise ValueError("0 is a center; no admissible radius exists")
    if len(centers) < 2:
        return 0.5 * closest
    sep = min(abs(c - d) for c, d in itertools.combinations(centers, 2))
    return 0.5 * min(closest, 0.25 * sep)


def propose_simple_set(eigenvalues: Sequence[complex],
                       gap: Optional[float] = None,
                       forbid_zero: bool = True) -> SimpleSet:
    """Quarter-isolated simple set covering the eigenvalues, or raise.

    Single-linkage groups at the given absolute gap become disc centers
    (group means) with the default radius; the proposal is rejected when a
    group's spread does not fit inside that radius.
    """
    eigs = [complex(z) for z in eigenvalues]
    if not eigs:
        raise ClusteringError("no eigenvalues to cover")
    if gap is None:
        gap = 1e-6 * (1.0 + max(abs(z) for z in eigs))
    clusters = cluster_eigenvalues(eigs, gap)
    centers = [c.center for c in clusters]
    if forbid_zero and min(abs(c) for c in centers) <= gap:
        raise ClusteringError(
            "a cluster sits at 0; no disc around it can avoid the origin")
    try:
        radius = default_radius(centers)
    except ValueError as exc:
        raise ClusteringError(str(exc)) from exc
    worst = max(c.spread for c in clusters)
    if worst >= radius * (1.0 - CONTAINMENT_MARGIN):
        raise ClusteringError(
            f"cluster spread {worst:.3g} does not fit inside the "
            f"quarter-isolated radius {radius:.3g}; adjust the gap")
    return SimpleSet(centers, radius)


# -- membership predicates ----------------------------------------------------

def in_D_gamma(x: np.ndarray, delta: SimpleSet,
               margin: float = CONTAINMENT_MARGIN) -> bool:
    """Spectrum containment sigma(x) in delta, with a shrink margin."""
    return delta.covers(spectrum(x).eigenvalues, margin)


def in_W_gamma(u: np.ndarray, x: np.ndarray, delta: SimpleSet,
               margin: float = CONTAINMENT_MARGIN) -> bool:
    """u is unconstrained; only x's spectrum matters."""
    return in_D_gamma(x, delta, margin)


def in_U_gamma(u: np.ndarray, x: np.ndarray, delta: SimpleSet,
               tol: float = 1e-8) -> bool:
    """Genericity: u commutes with no nonconstant branch involution of x.

    Vacuously true for a singleton (no nonconstant sign patterns).  This is
    a Zariski-open condition, so false negatives near the commutation
    variety are expected at the working tolerance.
    """
    from .funcalc import BranchSpec, involution_I

    if not in_D_gamma(x, delta):
        return False
    k = delta.k
    if k == 1:
        return True
    u_norm = op_norm(u)
    for tau in itertools.product((1, -1), repeat=k):
        if all(t == tau[0] for t in tau):
            continue
        spec = BranchSpec(delta.centers, delta.radius, tau)
        inv_mat = involution_I(x, spec)
        if commutator_norm(u, inv_mat) <= tol * u_norm:
            return False
    return True


def in_S_o(w: MatrixTuple, tol: float = 1e-10) -> bool:
    """Clean locus of the symmetrization map: (w^1 - w^2)/2 lies in Q."""
    _require_pair(w)
    return in_Q(0.5 * (w[0] - w[1]), tol)


def variety_residual_V(u: np.ndarray, x: np.ndarray, spec) -> float:
    """Commutator norm against the branch involution of the given spec."""
    from .funcalc import involution_I

    return commutator_norm(u, involution_I(x, spec))


def in_free_closure_of_variety(p: FreePoly, x: np.ndarray,
                               tol: float = 1e-10) -> bool:
    """One-variable free closure: membership iff p(x) is singular."""
    if p.d != 1:
        raise DimensionMismatchError("free-closure test takes a one-variable "
                                     f"polynomial, got d={p.d}")
    value = p.evaluate(MatrixTuple((x,)))
    return not in_I(value, tol)


# -- the symmetrization map and its sections ----------------------------------

def uv_parts(w: MatrixTuple) -> tuple:
    _require_pair(w)
    u = 0.5 * (w[0] + w[1])
    v = 0.5 * (w[0] - w[1])
    return u, v


def pi(w: MatrixTuple) -> MatrixTuple:
    """w -> (u, v^2, vuv) with u = (w^1+w^2)/2, v = (w^1-w^2)/2."""
    u, v = uv_parts(w)
    return MatrixTuple((u, v @ v, v @ u @ v))


def phi(u: np.ndarray, x: np.ndarray, spec) -> MatrixTuple:
    """(u, x, S u S) for the branch square root S of the spec."""
    from .funcalc import sqrt_branch_S

    s = sqrt_branch_S(x, spec)
    return MatrixTuple((u, x, s @ u @ s))


def omega(u: np.ndarray, x: np.ndarray, spec) -> MatrixTuple:
    """(u + S, u - S): the local section with pi(omega(u, x)) = phi(u, x)."""
    from .funcalc import sqrt_branch_S

    s = sqrt_branch_S(x, spec)
    return MatrixTuple((u + s, u - s))


def omega_inverse(w: MatrixTuple) -> tuple:
    """((w^1+w^2)/2, ((w^1-w^2)/2)^2); round-trips with omega."""
    u, v = uv_parts(w)
    return u, v @ v


def fiber(w: MatrixTuple, tol: float = 1e-8,
          gap: Optional[float] = None) -> list:
    """All pairs with the same pi-value, via branch square roots of v^2.

    Candidates v' sweep the full root enumeration of v^2; survivors must
    reproduce the third slot v u v.  Supported on the clean locus only
    (v invertible and in Q); for generic u the result is exactly
    [w, w.flip()].
    """
    from .sqrtlib import all_square_roots

    _require_pair(w)
    u, v = uv_parts(w)
    if not in_I(v):
        raise UnsupportedError("fiber enumeration needs v invertible")
    if not in_S_o(w):
        raise UnsupportedError("fiber enumeration needs v in Q "
                               "(spectrum disjoint from its negative)")
    target = v @ u @ v
    scale = 1.0 + op_norm(target)
    out = []
    for cand in all_square_roots(v @ v, gap=gap).roots:
        if op_norm(cand @ u @ cand - target) <= tol * scale:
            out.append(MatrixTuple((u + cand, u - cand)))
    return out


def _require_pair(w: MatrixTuple) -> None:
    if w.d != 2:
        raise DimensionMismatchError(f"need a pair of matrices, got d={w.d}")
