"""Property harness for graded matrix functions.

Black-box checks of the direct-sum / similarity / intertwining axioms on
sampled points, companion-function extraction on finite explicit domains,
the symmetric-similarity transfer check, and the four-by-four regression
showing that no function on the image of the symmetrization map reproduces
16*v*u^2*v when v is nilpotent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .domains import in_S_o, pi
from .errors import (ContradictionError, EvaluatorError, PreconditionError)
from .linalg import (block_diag, conjugate, direct_sum, in_I, op_norm,
                     random_similarity, rel_dist)
from .report import Report
from .words import FreePoly, MatrixTuple

ENTRY_TOL = 1e-12  # finite-set matrix identity tolerance


@dataclass
class FiniteGradedMap:
    """Explicit graded function: a finite domain with matching values."""

    domain: List[MatrixTuple]
    values: List[np.ndarray]

    def __post_init__(self):
        if len(self.domain) != len(self.values):
            raise ValueError("domain and value lists differ in length")
        self.values = [np.asarray(v, dtype=complex) for v in self.values]
        for t, v in zip(self.domain, self.values):
            if v.shape != (t.n, t.n):
                raise ValueError(
                    f"value shape {v.shape} breaks gradedness at level {t.n}")


# -- nc axioms on black-box evaluators -----------------------------------------

def _call(f: Callable, sample: MatrixTuple) -> np.ndarray:
    try:
        return np.asarray(f(sample), dtype=complex)
    except Exception as exc:
        raise EvaluatorError(f"evaluator failed: {exc}", sample=sample) \
            from exc


def check_nc_properties(f: Callable[[MatrixTuple], np.ndarray],
                        samples: Sequence[MatrixTuple],
                        tol: float = 1e-8,
                        rng: Optional[np.random.Generator] = None) -> Report:
    """Gradedness, direct sums, similarity, and intertwining on samples.

    f must be defined on the samples, their pairwise direct sums, and
    their similarity orbits; evaluator exceptions surface as
    EvaluatorError with the offending sample attached.
    """
    rng = rng or np.random.default_rng()
    report = Report(tolerances={"residual": tol})
    values = [_call(f, s) for s in samples]

    graded = all(v.shape == (s.n, s.n) for v, s in zip(values, samples))
    report.add("graded", graded)

    pairs = list(zip(range(len(samples) - 1), range(1, len(samples))))
    if len(samples) > 1:
        pairs.append((len(samples) - 1, 0))

    worst = 0.0
    ok = True
    witness = None
    for i, j in pairs:
        got = _call(f, direct_sum(samples[i], samples[j]))
        want = block_diag(values[i], values[j])
        r = rel_dist(got, want)
        worst = max(worst, r)
        if r > tol and witness is None:
            witness = {"samples": [i, j], "residual": float(r)}
        ok = ok and r <= tol
    report.add("direct-sum", ok, worst, witness)

    worst = 0.0
    ok = True
    witness = None
    for s_idx, sample in enumerate(samples):
        sim = random_similarity(sample.n, rng)
        got = _call(f, conjugate(sim, sample))
        want = np.linalg.inv(sim) @ values[s_idx] @ sim
        r = rel_dist(got, want)
        worst = max(worst, r)
        if r > tol and witness is None:
            witness = {"sample": s_idx, "residual": float(r)}
        ok = ok and r <= tol
    report.add("similarity", ok, worst, witness)

    worst = 0.0
    ok = True
    witness = None
    for i, j in pairs:
        x, y = samples[i], samples[j]
        fx = values[i]
        fxy = _call(f, direct_sum(x, y))
        n, m = x.n, y.n
        embed = np.zeros((n + m, n), dtype=complex)
        embed[:n, :n] = np.eye(n)
        compress = embed.conj().T
        # [I;0] intertwines x with x (+) y; [I 0] the other way round
        for left, a, b in ((embed, fx, fxy), (compress, fxy, fx)):
            r = op_norm(left @ a - b @ left) / (1.0 + op_norm(a))
            worst = max(worst, r)
            if r > tol and witness is None:
                witness = {"samples": [i, j], "residual": float(r)}
            ok = ok and r <= tol
        # rank-deficient intertwiners of x with x (+) x: scalar block mixes
        a, b = (rng.standard_normal(2) + 1j * rng.standard_normal(2))
        fxx = _call(f, direct_sum(x, x))
        eye = np.eye(n, dtype=complex)
        mixed_embed = np.vstack([a * eye, b * eye])       # x -> x (+) x
        mixed_compress = np.hstack([a * eye, b * eye])    # x (+) x -> x
        upper = np.zeros((2 * n, 2 * n), dtype=complex)   # rank n on x (+) x
        upper[:n, :n] = a * eye
        upper[:n, n:] = b * eye
        for left, va, vb in ((mixed_embed, fx, fxx),
                             (mixed_compress, fxx, fx),
                             (upper, fxx, fxx)):
            r = op_norm(left @ va - vb @ left) / (1.0 + op_norm(va))
            worst = max(worst, r)
            if r > tol and witness is None:
                witness = {"samples": [i, j], "residual": float(r)}
            ok = ok and r <= tol
    report.add("intertwining", ok, worst, witness)
    return report


# -- finite-domain companion functions -----------------------------------------

def _split_blocks(t: MatrixTuple, a: int) -> Optional[tuple]:
    """Split t as top (+) bottom at size a, or None if off-blocks differ from 0."""
    scale = 1.0 + max(np.abs(m).max(initial=0.0) for m in t)
    tops, bottoms = [], []
    for m in t:
        if np.abs(m[:a, a:]).max(initial=0.0) > ENTRY_TOL * scale:
            return None
        if np.abs(m[a:, :a]).max(initial=0.0) > ENTRY_TOL * scale:
            return None
        tops.append(m[:a, :a])
        bottoms.append(m[a:, a:])
    return MatrixTuple(tops), MatrixTuple(bottoms)


def hat_domain(domain: Sequence[MatrixTuple]) -> list:
    """All y such that x (+) y lies in the set for some x in the set.

    Found by scanning block-diagonal splits of every element at every split
    size and matching the top block against the set.
    """
    found: list[MatrixTuple] = []
    for z in domain:
        for a in range(1, z.n):
            split = _split_blocks(z, a)
            if split is None:
                continue
            top, bottom = split
            if any(top.close_to(x, ENTRY_TOL) for x in domain
                   if x.n == top.n):
                if not any(bottom.close_to(y, ENTRY_TOL) for y in found
                           if y.n == bottom.n):
                    found.append(bottom)
    return found


def _intertwiner_basis(x1: MatrixTuple, x2: MatrixTuple,
                       tol: float = 1e-10) -> list:
    """Basis of {s : x1^r s = s x2^r for all r} at a shared level."""
    n = x1.n
    rows = [np.kron(a, np.eye(n)) - np.kron(np.eye(n), np.asarray(b).T)
            for a, b in zip(x1, x2)]
    k = np.vstack(rows)
    _, s, vh = np.linalg.svd(k)
    if s.size == 0:
        keep = 0
    else:
        keep = int(np.count_nonzero(s > tol * max(s[0], 1.0)))
    null = vh[keep:].conj()
    return [vec.reshape(n, n) for vec in null]


def _contains_invertible(basis: list, rng: np.random.Generator,
                         attempts: int = 12) -> bool:
    if not basis:
        return False
    for _ in range(attempts):
        coeffs = rng.standard_normal(len(basis)) \
            + 1j * rng.standard_normal(len(basis))
        s = sum(c * b for c, b in zip(coeffs, basis))
        if in_I(s, 1e-8):
            return True
    return False


def check_anc(f: FiniteGradedMap, tol: float = ENTRY_TOL,
              rng: Optional[np.random.Generator] = None) -> Report:
    """Similarity preservation plus companion-function extraction.

    On success the report's last check carries the table of companion
    values on the derived domain.  Raises ContradictionError when two
    decompositions force different companion values at one point.
    """
    rng = rng or np.random.default_rng(0)
    report = Report(tolerances={"entry": tol})

    sim_ok = True
    sim_worst = 0.0
    witness = None
    for i, j in itertools.product(range(len(f.domain)), repeat=2):
        xi, xj = f.domain[i], f.domain[j]
        if xi.n != xj.n:
            continue
        basis = _intertwiner_basis(xi, xj)
        if not basis or not _contains_invertible(basis, rng):
            continue  # not similar: no constraint from this pair
        for b in basis:
            r = op_norm(b @ f.values[j] - f.values[i] @ b) / (1.0 + op_norm(b))
            sim_worst = max(sim_worst, r)
            if r > tol * 1e3:  # linear identity; generous numerical slack
                sim_ok = False
                witness = {"pair": [i, j], "residual": float(r)}
    report.add("similarity-preserving", sim_ok, sim_worst, witness)

    table: list[tuple[MatrixTuple, np.ndarray]] = []
    decomp_ok = True
    decomp_worst = 0.0
    decomp_witness = None
    for i, j in itertools.product(range(len(f.domain)), repeat=2):
        x, z = f.domain[i], f.domain[j]
        if x.n >= z.n:
            continue
        split = _split_blocks(z, x.n)
        if split is None or not split[0].close_to(x, tol):
            continue
        _, y = split
        fz = f.values[j]
        a = x.n
        scale = 1.0 + float(np.abs(fz).max(initial=0.0))
        off = max(np.abs(fz[:a, a:]).max(initial=0.0),
                  np.abs(fz[a:, :a]).max(initial=0.0))
        top_err = float(np.abs(fz[:a, :a] - f.values[i]).max(initial=0.0))
        r = max(off, top_err) / scale
        decomp_worst = max(decomp_worst, r)
        if r > tol:
            decomp_ok = False
            decomp_witness = {"pair": [i, j], "residual": float(r)}
            continue
        candidate = fz[a:, a:]
        for y_prev, val_prev in table:
            if y_prev.close_to(y, tol):
                if np.abs(val_prev - candidate).max(initial=0.0) \
                        > tol * scale:
                    raise ContradictionError(
                        "two decompositions force different companion "
                        f"values at a level-{y.n} point")
                break
        else:
            table.append((y, candidate))
    hat_table = [{"level": y.n,
                  "value": [[_c2l(e) for e in row] for row in val]}
                 for y, val in table]
    report.add("companion-extraction", decomp_ok, decomp_worst,
               decomp_witness if not decomp_ok else hat_table)
    return report


def _c2l(z: complex) -> list:
    return [float(z.real), float(z.imag)]


# -- symmetric similarity transfer ---------------------------------------------

def check_symmetric_similarity(p: FreePoly, w1: MatrixTuple, w2: MatrixTuple,
                               s: np.ndarray, tol: float = 1e-8) -> Report:
    """p(w1) = s^-1 p(w2) s whenever pi(w1) = s^-1 pi(w2) s and v1 invertible.

    The hypotheses are residual-checked first; a violated one raises
    PreconditionError naming it.
    """
    if not p.is_symmetric():
        raise PreconditionError("p is not symmetric")
    if not in_I(np.asarray(s)):
        raise PreconditionError("conjugator s is singular")
    if not in_I(0.5 * (w1[0] - w1[1])):
        raise PreconditionError("w1^1 - w1^2 is not invertible")
    p1, p2 = pi(w1), pi(w2)
    conj = conjugate(s, p2)
    pre_res = max(rel_dist(a, b) for a, b in zip(p1, conj))
    if pre_res > 1e-7:
        raise PreconditionError(
            f"pi(w1) != s^-1 pi(w2) s (residual {pre_res:.3g})")
    left = p.evaluate(w1)
    right = np.linalg.inv(s) @ p.evaluate(w2) @ s
    residual = op_norm(left - right) / (1.0 + op_norm(left))
    report = Report(tolerances={"residual": tol})
    report.add("symmetric-similarity", residual <= tol, residual)
    return report


# -- the nilpotent-v regression -------------------------------------------------

def pascoe_counterexample(r: float = 0.1, scale: float = 0.4) -> Report:
    """Two 4x4 pairs identified by the symmetrization map but separated by
    f(w) = (w^1-w^2)(w^1+w^2)^2(w^1-w^2).

    v and its sign-twisted copy share v^2 = 0 and vuv, yet the (1,4) entry
    of f differs by 32 r^2 scale^2: no function on the image of the map,
    holomorphic or not, reproduces f on the full bidisc.
    """
    if r < 0:
        raise PreconditionError("r must be nonnegative")
    e = np.zeros((4, 4), dtype=complex)

    def unit(i, j):
        m = e.copy()
        m[i, j] = 1.0
        return m

    v = r * (unit(0, 1) + unit(2, 3))
    v_twisted = r * (-unit(0, 1) + unit(2, 3))
    u = scale * (unit(1, 0) + unit(0, 2))
    w = MatrixTuple((u + v, u - v))
    w_twisted = MatrixTuple((u + v_twisted, u - v_twisted))
    if max(op_norm(w[0]), op_norm(w[1])) >= 1.0:
        raise PreconditionError(
            "components must be strict contractions; shrink r or scale")

    report = Report(tolerances={"pi-match": 1e-12, "entry": 1e-10})
    p1, p2 = pi(w), pi(w_twisted)
    pi_res = max(op_norm(a - b) for a, b in zip(p1, p2))
    from .linalg import tuple_to_json_dict

    report.add("pi-values-match", pi_res <= 1e-12, pi_res,
               {"w": tuple_to_json_dict(w),
                "w-twisted": tuple_to_json_dict(w_twisted)})

    def f(t: MatrixTuple) -> np.ndarray:
        d = t[0] - t[1]
        s2 = t[0] + t[1]
        return d @ s2 @ s2 @ d

    gap = f(w) - f(w_twisted)
    expected = 32.0 * r * r * scale * scale
    entry_err = abs(gap[0, 3] - expected)
    report.add("entry-1-4-discrepancy", entry_err <= 1e-10, entry_err,
               {"expected": expected, "got": _c2l(gap[0, 3])})

    beta_norm = op_norm(p1[1])
    report.add("v-squared-vanishes", beta_norm <= 1e-14, beta_norm)
    report.add("outside-clean-locus", not in_S_o(w))
    return report


# -- seeded suites ----------------------------------------------------------------

def random_symmetric_poly(max_degree: int, rng: np.random.Generator,
                          terms: int = 6) -> FreePoly:
    """Symmetrized random polynomial with small integer coefficients."""
    p = FreePoly.zero(2)
    for _ in range(terms):
        length = int(rng.integers(0, max_degree + 1))
        word = tuple(int(rng.integers(0, 2)) for _ in range(length))
        coeff = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        p = p + FreePoly.word(word, 2, coeff)
    return p.symmetrize()


def run_suite(name: str, seed: int = 0) -> Report:
    """Named verification suites used by the command-line front end."""
    from . import girard as girard_mod
    from .linalg import random_tuple
    from .ratexpr import evaluate
    from .symbasis import decompose_symmetric, factor_through_pi

    rng = np.random.default_rng(seed)
    report = Report(seed=seed)

    if name == "nc":
        poly = FreePoly.word((0, 1), 2) + 2 * FreePoly.word((1, 1, 0), 2)
        samples = [random_tuple(n, 2, (), rng) for n in (2, 3, 2)]
        report.merge(check_nc_properties(poly.evaluate, samples, rng=rng),
                     prefix="poly/")

        def conjugating(t):  # breaks similarity covariance
            return np.conj(t[0])

        bad1 = check_nc_properties(conjugating, samples, rng=rng)
        report.add("counterexample-conjugation-detected", not bad1.passed)

        def truncating(t):  # graded but not direct-sum compatible
            out = np.zeros((t.n, t.n), dtype=complex)
            out[0, 0] = t[0][0, 0]
            return out

        bad2 = check_nc_properties(truncating, samples, rng=rng)
        graded_ok = next(c for c in bad2.checks if c.name == "graded").passed
        sums_bad = not next(c for c in bad2.checks
                            if c.name == "direct-sum").passed
        report.add("counterexample-truncation-detected",
                   graded_ok and sums_bad)
    elif name == "anc":
        report.merge(anc_example_suite(rng))
    elif name == "girard":
        for n in (-2, -1, 0, 1, 2, 3, 4):
            tol = 1e-7 if n < 0 else 1e-8
            report.merge(girard_mod.verify_girard_random(
                n, levels=(2, 3), trials=5, tol=tol, rng=rng, seed=seed))
    elif name == "pascoe":
        report.merge(pascoe_counterexample())
    elif name == "symbasis":
        worst = 0.0
        exact = True
        for _ in range(25):
            p = random_symmetric_poly(5, rng)
            g = decompose_symmetric(p)
            exact = exact and (g.expand_back() == p.to_uv())
            expr = factor_through_pi(p)
            w = random_tuple(3, 2, ("v-invertible",), rng)
            t = pi(w)
            value = evaluate(expr, {"alpha": t[0], "beta": t[1],
                                    "gamma": t[2]})
            direct = p.evaluate(w)
            worst = max(worst, rel_dist(value, direct))
        report.add("decompose-roundtrip-exact", exact)
        report.add("factor-through-pi", worst <= 1e-8, worst)
    else:
        raise ValueError(f"unknown suite {name!r}")
    return report


def anc_example_suite(rng: Optional[np.random.Generator] = None) -> Report:
    """The two diagonal companion-function examples plus a failure case."""
    rng = rng or np.random.default_rng(0)
    report = Report()
    d321 = MatrixTuple((np.diag([3.0, 2.0, 1.0]).astype(complex),))
    d3 = MatrixTuple((np.array([[3.0]], dtype=complex),))

    lone = FiniteGradedMap([d321], [np.diag([5.0, 6.0, 7.0]).astype(complex)])
    sub = check_anc(lone, rng=rng)
    hat = hat_domain(lone.domain)
    report.add("singleton-diagonal-passes", sub.passed)
    report.add("singleton-hat-domain-empty", len(hat) == 0)

    a, b, c = 5.0, 6.0, 7.0
    two = FiniteGradedMap([d321, d3],
                          [np.diag([a, b, c]).astype(complex),
                           np.array([[a]], dtype=complex)])
    sub2 = check_anc(two, rng=rng)
    report.merge(sub2, prefix="pair/")
    hat2 = hat_domain(two.domain)
    got_21 = (len(hat2) == 1 and hat2[0].n == 2
              and np.allclose(hat2[0][0], np.diag([2.0, 1.0])))
    report.add("pair-hat-domain-is-2-plus-1", got_21)
    extraction = next(ch for ch in sub2.checks
                      if ch.name == "companion-extraction")
    table_ok = False
    if extraction.passed and isinstance(extraction.witness, list) \
            and len(extraction.witness) == 1:
        val = np.array([[complex(re, im) for re, im in row]
                        for row in extraction.witness[0]["value"]])
        table_ok = np.allclose(val, np.diag([b, c]))
    report.add("companion-value-is-b-plus-c", table_ok)

    skew = FiniteGradedMap([d321], [np.diag([5.0, 6.0, 7.0]).astype(complex)
                                    + 0.5 * np.eye(3, k=1)])
    sub3 = check_anc(skew, rng=rng)
    report.add("non-diagonal-detected", not sub3.passed)
    return report
