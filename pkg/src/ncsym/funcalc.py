"""Primary matrix functions via Hermite interpolation on the spectrum.

The contour-integral functional calculus is replaced by the Hermite
interpolant that matches the scalar function's value and derivatives at
each eigenvalue up to its multiplicity; the two agree for functions
holomorphic on the covering discs, and the interpolant is exactly
computable.  Outputs are polynomials in the argument, hence commute with
it and lie in span{I, x, ..., x^{n-1}}.

Branch data (centers, radius, signs) selects locally constant involutions
and square-root branches per disc.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .domains import SimpleSet, propose_simple_set
from .errors import (IllConditionedInterpolationError,
                     SpectrumOutsideDomainError)
from .linalg import cluster_eigenvalues, spectrum

MERGE_RTOL = 1e-6  # eigenvalues closer than this (rel. spectral radius) confluesce


@dataclass(frozen=True)
class BranchSpec:
    """Spectral cluster centers, common radius, and a sign per center.

    Validated so that 0 lies outside every disc and the discs are
    quarter-isolated (closures pairwise disjoint with room to spare).
    """

    centers: tuple
    radius: float
    tau: tuple

    def __init__(self, centers: Iterable[complex], radius: float,
                 tau: Iterable[int]):
        pairs = sorted(zip((complex(c) for c in centers), tau),
                       key=lambda p: (p[0].real, p[0].imag))
        centers = tuple(p[0] for p in pairs)
        tau = tuple(int(p[1]) for p in pairs)
        if len(centers) != len(tau):
            raise ValueError("need one sign per center")
        if any(t not in (-1, 1) for t in tau):
            raise ValueError(f"signs must be +1 or -1, got {tau}")
        ss = SimpleSet(centers, radius)
        if not ss.avoids_zero():
            raise ValueError("0 must lie outside every disc "
                             f"(radius {radius} too large)")
        if not ss.is_quarter_isolated():
            raise ValueError("discs are not quarter-isolated "
                             f"(radius {radius}, separation {ss.separation()})")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radius", float(radius))
        object.__setattr__(self, "tau", tau)

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def simple_set(self) -> SimpleSet:
        return SimpleSet(self.centers, self.radius)

    @classmethod
    def for_matrix(cls, x: np.ndarray, tau: Iterable[int],
                   gap: Optional[float] = None) -> "BranchSpec":
        """Cluster the spectrum of x and attach the given signs."""
        eigs = spectrum(x).eigenvalues
        ss = propose_simple_set(eigs, gap=gap)
        return cls(ss.centers, ss.radius, tau)

    @classmethod
    def all_sign_choices(cls, centers, radius) -> list:
        return [cls(centers, radius, tau)
                for tau in itertools.product((1, -1), repeat=len(tuple(centers)))]


class ScalarBranch:
    """Scalar germ on a simple set: values and derivatives on demand.

    derivs(z, m) must return the first m derivatives [f(z), ..., f^(m-1)(z)]
    of the chosen holomorphic function at z.
    """

    def __init__(self, domain: SimpleSet,
                 derivs: Callable[[complex, int], Sequence[complex]]):
        self.domain = domain
        self._derivs = derivs

    def derivs(self, z: complex, m: int) -> list:
        return list(self._derivs(z, m))


def constant_germ(domain: SimpleSet, values: Sequence[complex]) -> ScalarBranch:
    """Locally constant function: values[i] on disc i."""
    values = tuple(complex(v) for v in values)

    def derivs(z, m):
        i = domain.locate(z)
        if i is None:
            raise SpectrumOutsideDomainError(f"{z} lies in no disc")
        return [values[i]] + [0j] * (m - 1)

    return ScalarBranch(domain, derivs)


def sign_germ(spec: BranchSpec) -> ScalarBranch:
    """The square roots of 1: +-1 per disc according to the spec's signs."""
    return constant_germ(spec.simple_set, spec.tau)


def _sqrt_derivs(z: complex, m: int, center: complex, sign: int) -> list:
    # branch fixed by s(c) = sign * principal sqrt(c); s^(k) = a_k s / z^k
    s = sign * cmath.sqrt(center) * cmath.sqrt(1.0 + (z - center) / center)
    out = [s]
    coeff = 1.0
    for k in range(1, m):
        coeff *= 0.5 - (k - 1)
        out.append(coeff * s / z ** k)
    return out


def base_sqrt_germ(domain: SimpleSet) -> ScalarBranch:
    """The reference square-root branch: principal at each center."""

    def derivs(z, m):
        i = domain.locate(z)
        if i is None:
            raise SpectrumOutsideDomainError(f"{z} lies in no disc")
        return _sqrt_derivs(z, m, domain.centers[i], 1)

    return ScalarBranch(domain, derivs)


def sqrt_germ(spec: BranchSpec) -> ScalarBranch:
    """Signed square-root branch: tau[i] * (principal-at-center) on disc i."""
    domain = spec.simple_set

    def derivs(z, m):
        i = domain.locate(z)
        if i is None:
            raise SpectrumOutsideDomainError(f"{z} lies in no disc")
        return _sqrt_derivs(z, m, spec.centers[i], spec.tau[i])

    return ScalarBranch(domain, derivs)


def identity_germ(domain: SimpleSet) -> ScalarBranch:
    def derivs(z, m):
        return [complex(z)] + ([1.0 + 0j] if m > 1 else []) + [0j] * (m - 2)

    return ScalarBranch(domain, derivs)


def polynomial_germ(domain: SimpleSet, coeffs: Sequence[complex]) -> ScalarBranch:
    """Polynomial sum(coeffs[k] z^k) as a germ."""
    coeffs = [complex(c) for c in coeffs]

    def derivs(z, m):
        out = []
        for order in range(m):
            acc = 0j
            for k in range(order, len(coeffs)):
                acc += coeffs[k] * math.perm(k, order) * z ** (k - order)
            out.append(acc)
        return out

    return ScalarBranch(domain, derivs)


def germ_product(a: ScalarBranch, b: ScalarBranch) -> ScalarBranch:
    """Pointwise product, derivatives by the Leibniz rule."""

    def derivs(z, m):
        fa = a.derivs(z, m)
        fb = b.derivs(z, m)
        return [sum(math.comb(k, j) * fa[j] * fb[k - j] for j in range(k + 1))
                for k in range(m)]

    return ScalarBranch(a.domain, derivs)


# -- Hermite interpolation ----------------------------------------------------

def _newton_coefficients(nodes: Sequence[tuple]) -> tuple:
    """Divided differences for confluent nodes.

    nodes: list of (z, derivative-list); the derivative list at z supplies
    the repeated-node diagonal entries f^(j)(z)/j!.
    """
    zs: list = []
    ders: list = []
    gids: list = []
    for gid, (z, dl) in enumerate(nodes):
        for _ in dl:
            zs.append(z)
            ders.append(dl)
            gids.append(gid)
    n = len(zs)
    prev = [ders[i][0] for i in range(n)]
    coeffs = [prev[0]]
    factorial = 1.0
    for j in range(1, n):
        factorial *= j
        cur = []
        for i in range(n - j):
            if gids[i + j] == gids[i]:
                cur.append(ders[i][j] / factorial)
            else:
                cur.append((prev[i + 1] - prev[i]) / (zs[i + j] - zs[i]))
        coeffs.append(cur[0])
        prev = cur
    return tuple(zs), tuple(coeffs)


def matrix_function(x: np.ndarray, branch: ScalarBranch,
                    merge_rtol: float = MERGE_RTOL) -> np.ndarray:
    """Hermite-interpolated primary function of x for the given germ.

    Eigenvalues closer than merge_rtol times the spectral radius are merged
    into one confluent node (derivative matching) to avoid catastrophic
    divided-difference cancellation; the node multiplicity bounds the size
    of any Jordan block, so the match is exact for the primary function.
    """
    x = np.asarray(x, dtype=complex)
    eigs = spectrum(x).eigenvalues
    if not branch.domain.covers(eigs):
        raise SpectrumOutsideDomainError(
            f"spectrum {np.round(np.asarray(eigs), 6)} not covered by discs "
            f"around {branch.domain.centers} with radius {branch.domain.radius}")
    rho = max(abs(z) for z in eigs)
    clusters = cluster_eigenvalues(eigs, merge_rtol * (rho if rho > 0 else 1.0))
    nodes = [(c.center, branch.derivs(c.center, len(c.indices)))
             for c in clusters]
    zs, coeffs = _newton_coefficients(nodes)
    if not all(np.isfinite([c.real, c.imag]).all() for c in coeffs):
        raise IllConditionedInterpolationError(
            "divided differences degenerated; nodes too close for the "
            "working precision")
    n = x.shape[0]
    eye = np.eye(n, dtype=complex)
    out = coeffs[-1] * eye
    for j in range(len(coeffs) - 2, -1, -1):
        out = out @ (x - zs[j] * eye) + coeffs[j] * eye
    return out


def involution_I(x: np.ndarray, spec: BranchSpec) -> np.ndarray:
    """Matrix square root of the identity attached to the sign pattern."""
    return matrix_function(x, sign_germ(spec))


def sqrt_branch_S(x: np.ndarray, spec: BranchSpec) -> np.ndarray:
    """Branch square root: S(x)^2 = x, S(x) in alg(x).

    Equals the product of the reference branch with the sign involution;
    computed in one interpolation from the signed germ.
    """
    return matrix_function(x, sqrt_germ(spec))
