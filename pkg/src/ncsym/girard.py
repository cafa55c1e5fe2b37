"""Rational power-sum generators in the coordinates alpha, beta, gamma.

For every integer n there is a rational expression P_n with
x^n + y^n = P_n(u, v^2, vuv) wherever the participating inverses exist,
with u = (x+y)/2, v = (x-y)/2.  The positive-index recursion is

    P_0 = 2, Q_0 = 0,
    P_{n+1} = alpha P_n + Q_n,
    Q_{n+1} = beta P_n + gamma beta^-1 Q_n,

where Q_n stands for v (x^n - y^n).  Negative indices use the Schur-
complement entries of the inverse transfer matrix; both paths are cross-
checked against direct u,v forms and matrix power sums.

Sub-DAGs are shared, so P_n grows linearly in n; gamma beta^-1 Q_n is kept
unexpanded, and symbolic comparisons go through the expansion with
adjacent inverse pairs cancelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .domains import pi
from .errors import DomainError, SingularityError
from .linalg import op_norm, random_tuple
from .ratexpr import (RatExpr, Scalar, Variable, add, as_ncpoly, evaluate,
                      from_freepoly, inv, mul, scale)
from .report import Report
from .words import MatrixTuple, s_even, s_odd

ALPHA = Variable("alpha")
BETA = Variable("beta")
GAMMA = Variable("gamma")


@dataclass(frozen=True)
class GirardPair:
    """Index n with the power-sum expression P and its companion Q.

    For n >= 0, Q is v*(x^n - y^n) in the three coordinates; for n < 0 it
    is the matching negative-index companion from the transfer recursion.
    """

    n: int
    P: RatExpr
    Q: RatExpr


def girard_positive(n: int) -> GirardPair:
    """Power-sum expression for index n >= 0; polynomial in alpha, beta,
    gamma and beta^-1."""
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    beta_inv = inv(BETA)
    p: RatExpr = Scalar(2)
    q: RatExpr = Scalar(0)
    for _ in range(n):
        p, q = add(mul(ALPHA, p), q), add(mul(BETA, p), mul(GAMMA, beta_inv, q))
    return GirardPair(n, p, q)


def girard_negative(n: int) -> GirardPair:
    """Power-sum expression for index -n with n >= 1.

    Evaluation requires the four coefficient expressions
    (alpha - beta gamma^-1 beta), (beta - gamma beta^-1 alpha),
    (beta - alpha beta^-1 gamma), (gamma - beta alpha^-1 beta)
    to be invertible at the point.
    """
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    alpha_inv, beta_inv, gamma_inv = inv(ALPHA), inv(BETA), inv(GAMMA)
    pp = inv(add(ALPHA, scale(-1, mul(BETA, gamma_inv, BETA))))
    pq = inv(add(BETA, scale(-1, mul(GAMMA, beta_inv, ALPHA))))
    qp = mul(BETA, inv(add(BETA, scale(-1, mul(ALPHA, beta_inv, GAMMA)))))
    qq = mul(BETA, inv(add(GAMMA, scale(-1, mul(BETA, alpha_inv, BETA)))))
    p: RatExpr = Scalar(2)
    q: RatExpr = Scalar(0)
    for _ in range(n):
        p, q = add(mul(pp, p), mul(pq, q)), add(mul(qp, p), mul(qq, q))
    return GirardPair(-n, p, q)


def girard_pair(n: int) -> GirardPair:
    """P_n and its companion for any integer index."""
    return girard_positive(n) if n >= 0 else girard_negative(-n)


def girard_via_T(n: int) -> tuple:
    """(p_n, q_n) directly in the variables u, v.

    For n >= 0 these are twice the even/odd degree-n monomial sums; for
    n < 0 they come from the entries of the inverse transfer matrix,
    f_1 = (u - v u^-1 v)^-1 and g_1 = (v - u v^-1 u)^-1, composed by the
    product recursion.
    """
    if n >= 0:
        return (scale(2, from_freepoly(s_even(n), ("u", "v"))),
                scale(2, from_freepoly(s_odd(n), ("u", "v"))))
    u, v = Variable("u"), Variable("v")
    f1 = inv(add(u, scale(-1, mul(v, inv(u), v))))
    g1 = inv(add(v, scale(-1, mul(u, inv(v), u))))
    f, g = f1, g1
    for _ in range(-n - 1):
        f, g = add(mul(f1, f), mul(g1, g)), add(mul(g1, f), mul(f1, g))
    return scale(2, f), scale(2, g)


def table_expression(n: int) -> dict:
    """Canonically expanded word form of P_n (n >= 0), inverse pairs
    cancelled."""
    return as_ncpoly(girard_positive(n).P)


def pi_assignment(w: MatrixTuple) -> dict:
    t = pi(w)
    return {"alpha": t[0], "beta": t[1], "gamma": t[2]}


def power_sum(w: MatrixTuple, n: int) -> np.ndarray:
    """(w^1)^n + (w^2)^n by direct matrix powers."""
    try:
        return (np.linalg.matrix_power(np.asarray(w[0]), n)
                + np.linalg.matrix_power(np.asarray(w[1]), n))
    except np.linalg.LinAlgError as exc:
        raise DomainError(f"matrix power failed: {exc}") from exc


def verify_girard(n: int, w: MatrixTuple, tol: float = 1e-8) -> Report:
    """Residual of x^n + y^n against P_n o pi at the given pair.

    Raises DomainError when the sample sits outside the expression's
    domain (some inverse is singular there).
    """
    report = Report(tolerances={"residual": tol})
    pair = girard_pair(n)
    try:
        value = evaluate(pair.P, pi_assignment(w))
    except SingularityError as exc:
        raise DomainError(
            f"sample outside the domain of P_{n}: {exc}") from exc
    oracle = power_sum(w, n)
    residual = op_norm(oracle - value) / (1.0 + op_norm(oracle))
    report.add(f"girard-n={n}-level={w.n}", residual <= tol, residual)
    return report


def verify_girard_random(n: int, levels: Iterable[int] = (2, 3),
                         trials: int = 20, tol: float = 1e-8,
                         rng: Optional[np.random.Generator] = None,
                         seed: Optional[int] = None,
                         retry_cap: int = 50) -> Report:
    """Sampled verification over random pairs with v invertible.

    Inadmissible draws (singular inverses for negative indices) are
    resampled up to the cap per trial; exhausting it raises DomainError.
    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    report = Report(seed=seed, tolerances={"residual": tol})
    for level in levels:
        worst = 0.0
        for _ in range(trials):
            for _attempt in range(retry_cap):
                w = random_tuple(level, 2, ("v-invertible",), rng)
                try:
                    sub = verify_girard(n, w, tol)
                except DomainError:
                    continue
                worst = max(worst, sub.checks[0].residual)
                break
            else:
                raise DomainError(
                    f"no admissible level-{level} sample for P_{n} in "
                    f"{retry_cap} draws")
        report.add(f"girard-n={n}-level={level}-x{trials}", worst <= tol,
                   worst)
    return report
