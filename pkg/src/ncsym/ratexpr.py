"""Noncommutative rational expressions as DAGs.

Nodes: Variable, Scalar, Sum, Product (ordered children), ScalarMul and
Inverse.  Constructors flatten nested sums/products and fold scalar
arithmetic but perform no other simplification, so generated expressions
keep their structure and sub-DAGs stay shared.

Evaluation substitutes square matrices for variables bottom-up; an Inverse
node whose child is numerically singular raises SingularityError carrying
that sub-expression.  Expansion to a word polynomial over variables and
their formal inverses (with adjacent x*inv(x) pairs cancelled) provides
exact symbolic comparison for expressions that are polynomial in atomic
inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (AssignmentError, ExpansionError, InconclusiveError,
                     SingularityError)
from .words import FreePoly, format_complex

SINGULARITY_RTOL = 1e-10
RESAMPLE_CAP = 50


class RatExpr:
    """Base node; use the module constructors or operators to build DAGs."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, scale(-1, _coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), scale(-1, self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __neg__(self):
        return scale(-1, self)

    def __pow__(self, k: int):
        return power(self, k)

    def inv(self) -> "RatExpr":
        return inv(self)

    def __repr__(self):
        return f"RatExpr({to_text(self)!r})"


class Variable(RatExpr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


class Scalar(RatExpr):
    __slots__ = ("value",)

    def __init__(self, value: complex):
        self.value = complex(value)


class Sum(RatExpr):
    __slots__ = ("children",)

    def __init__(self, children: Sequence[RatExpr]):
        self.children = tuple(children)


class Product(RatExpr):
    __slots__ = ("children",)

    def __init__(self, children: Sequence[RatExpr]):
        self.children = tuple(children)


class ScalarMul(RatExpr):
    __slots__ = ("coeff", "child")

    def __init__(self, coeff: complex, child: RatExpr):
        self.coeff = complex(coeff)
        self.child = child


class Inverse(RatExpr):
    __slots__ = ("child",)

    def __init__(self, child: RatExpr):
        self.child = child


def _coerce(value) -> RatExpr:
    if isinstance(value, RatExpr):
        return value
    if isinstance(value, (int, float, complex)):
        return Scalar(value)
    raise TypeError(f"cannot use {type(value).__name__} as an expression")


ZERO = Scalar(0)
ONE = Scalar(1)


def add(*terms) -> RatExpr:
    """Sum with nested sums flattened, scalars folded, zeros dropped."""
    flat: list[RatExpr] = []
    const = 0j
    for t in map(_coerce, terms):
        if isinstance(t, Sum):
            for c in t.children:
                if isinstance(c, Scalar):
                    const += c.value
                else:
                    flat.append(c)
        elif isinstance(t, Scalar):
            const += t.value
        else:
            flat.append(t)
    if const != 0:
        flat.append(Scalar(const))
    if not flat:
        return Scalar(0)
    if len(flat) == 1:
        return flat[0]
    return Sum(flat)


def mul(*factors) -> RatExpr:
    """Product with nesting flattened and scalar prefactors collected."""
    flat: list[RatExpr] = []
    coeff = 1 + 0j
    for f in map(_coerce, factors):
        if isinstance(f, ScalarMul):
            coeff *= f.coeff
            f = f.child
        if isinstance(f, Scalar):
            coeff *= f.value
        elif isinstance(f, Product):
            flat.extend(f.children)
        else:
            flat.append(f)
    if coeff == 0:
        return Scalar(0)
    core: RatExpr
    if not flat:
        return Scalar(coeff)
    core = flat[0] if len(flat) == 1 else Product(flat)
    return core if coeff == 1 else ScalarMul(coeff, core)


def scale(coeff: complex, e: RatExpr) -> RatExpr:
    coeff = complex(coeff)
    if coeff == 0:
        return Scalar(0)
    if isinstance(e, Scalar):
        return Scalar(coeff * e.value)
    if isinstance(e, ScalarMul):
        return scale(coeff * e.coeff, e.child)
    if coeff == 1:
        return e
    return ScalarMul(coeff, e)


def inv(e) -> RatExpr:
    e = _coerce(e)
    if isinstance(e, Scalar) and e.value != 0:
        return Scalar(1.0 / e.value)
    return Inverse(e)


def power(e: RatExpr, k: int) -> RatExpr:
    if not isinstance(k, int):
        raise TypeError("exponents must be integers")
    if k < 0:
        return inv(power(e, -k))
    if k == 0:
        return Scalar(1)
    return mul(*([e] * k))


def variables(*names: str) -> tuple:
    return tuple(Variable(n) for n in names)


def free_variables(e: RatExpr) -> frozenset:
    seen: set[int] = set()
    out: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Variable):
            out.add(node.name)
        elif isinstance(node, (Sum, Product)):
            stack.extend(node.children)
        elif isinstance(node, ScalarMul):
            stack.append(node.child)
        elif isinstance(node, Inverse):
            stack.append(node.child)
    return frozenset(out)


# -- evaluation ---------------------------------------------------------------

def _as_square(value, name: str) -> np.ndarray:
    m = np.asarray(value, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise AssignmentError(f"value for {name!r} is not square: {m.shape}")
    return m


def evaluate(e: RatExpr, assignment: Mapping[str, np.ndarray],
             n: Optional[int] = None,
             singular_rtol: float = SINGULARITY_RTOL) -> np.ndarray:
    """Bottom-up evaluation on an assignment of square matrices.

    All assigned matrices must share one size; plain complex numbers are
    treated as 1x1 matrices.  n fixes the level when the expression uses
    no variables at all.
    """
    mats = {name: _as_square(v, name) for name, v in assignment.items()}
    sizes = {m.shape[0] for m in mats.values()}
    if len(sizes) > 1:
        raise AssignmentError(f"assigned sizes differ: {sorted(sizes)}")
    if sizes:
        level = sizes.pop()
        if n is not None and n != level:
            raise AssignmentError(f"explicit n={n} but assignment is {level}")
    elif n is not None:
        level = n
    else:
        raise AssignmentError("no assignment values and no explicit size")
    eye = np.eye(level, dtype=complex)
    memo: dict[int, np.ndarray] = {}

    def rec(node: RatExpr) -> np.ndarray:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Variable):
            try:
                val = mats[node.name]
            except KeyError:
                raise AssignmentError(f"no value for variable {node.name!r}") \
                    from None
        elif isinstance(node, Scalar):
            val = node.value * eye
        elif isinstance(node, Sum):
            val = rec(node.children[0]).copy()
            for c in node.children[1:]:
                val += rec(c)
        elif isinstance(node, Product):
            val = rec(node.children[0])
            for c in node.children[1:]:
                val = val @ rec(c)
        elif isinstance(node, ScalarMul):
            val = node.coeff * rec(node.child)
        elif isinstance(node, Inverse):
            child = rec(node.child)
            s = np.linalg.svd(child, compute_uv=False)
            if s[0] == 0.0 or s[-1] <= singular_rtol * s[0]:
                raise SingularityError(
                    f"singular inverse at sub-expression {to_text(node)}",
                    expression=node)
            val = np.linalg.inv(child)
        else:  # pragma: no cover
            raise TypeError(f"unknown node {type(node).__name__}")
        memo[id(node)] = val
        return val

    return rec(e)


def substitute(e: RatExpr, mapping: Mapping[str, RatExpr]) -> RatExpr:
    """Simultaneous substitution of expressions for variables.

    Node sharing is preserved: each reachable node is rebuilt once.
    """
    memo: dict[int, RatExpr] = {}

    def rec(node: RatExpr) -> RatExpr:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Variable):
            out = mapping.get(node.name, node)
        elif isinstance(node, Scalar):
            out = node
        elif isinstance(node, Sum):
            out = add(*[rec(c) for c in node.children])
        elif isinstance(node, Product):
            out = mul(*[rec(c) for c in node.children])
        elif isinstance(node, ScalarMul):
            out = scale(node.coeff, rec(node.child))
        elif isinstance(node, Inverse):
            out = inv(rec(node.child))
        else:  # pragma: no cover
            raise TypeError(f"unknown node {type(node).__name__}")
        memo[id(node)] = out
        return out

    return rec(e)


# -- symbolic expansion -------------------------------------------------------

def _reduce_word(word: tuple) -> tuple:
    """Cancel adjacent (name, e), (name, -e) atom pairs (stack reduction)."""
    out: list = []
    for atom in word:
        if out and out[-1][0] == atom[0] and out[-1][1] == -atom[1]:
            out.pop()
        else:
            out.append(atom)
    return tuple(out)


def as_ncpoly(e: RatExpr) -> dict:
    """Expand into {word: coefficient} over atoms (name, +1|-1).

    Inverse is only admitted directly on a Variable; anything else raises
    ExpansionError.  Words are reduced by cancelling adjacent inverse
    pairs, which is sound wherever the inverses are defined.
    """
    memo: dict[int, dict] = {}

    def combine(acc: dict, extra: dict, factor: complex = 1.0) -> None:
        for w, c in extra.items():
            s = acc.get(w, 0) + factor * c
            if s == 0:
                acc.pop(w, None)
            else:
                acc[w] = s

    def rec(node: RatExpr) -> dict:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Variable):
            out = {((node.name, 1),): 1.0 + 0j}
        elif isinstance(node, Scalar):
            out = {(): node.value} if node.value != 0 else {}
        elif isinstance(node, Inverse):
            # invertible atoms only: a scaled single word flips to the
            # reversed word of inverted atoms
            inner = rec(node.child)
            if len(inner) != 1:
                raise ExpansionError(
                    "cannot expand an inverse of a compound expression: "
                    + to_text(node))
            (word, coeff), = inner.items()
            flipped = tuple((name, -e) for name, e in reversed(word))
            out = {flipped: 1.0 / coeff}
        elif isinstance(node, ScalarMul):
            out = {}
            combine(out, rec(node.child), node.coeff)
        elif isinstance(node, Sum):
            out = {}
            for c in node.children:
                combine(out, rec(c))
        elif isinstance(node, Product):
            out = {(): 1.0 + 0j}
            for c in node.children:
                nxt: dict = {}
                part = rec(c)
                for w1, c1 in out.items():
                    for w2, c2 in part.items():
                        w = _reduce_word(w1 + w2)
                        s = nxt.get(w, 0) + c1 * c2
                        if s == 0:
                            nxt.pop(w, None)
                        else:
                            nxt[w] = s
                out = nxt
        else:  # pragma: no cover
            raise TypeError(f"unknown node {type(node).__name__}")
        memo[id(node)] = out
        return out

    return rec(e)


def ncpoly_equal(e1: RatExpr, e2: RatExpr) -> bool:
    """Exact symbolic equality of the expanded, inverse-reduced forms."""
    return as_ncpoly(e1) == as_ncpoly(e2)


def render_ncpoly(poly: dict) -> str:
    """Deterministic text form of an expanded word polynomial."""
    if not poly:
        return "0"
    parts = []
    for word in sorted(poly, key=lambda w: (len(w), w)):
        coeff = poly[word]
        factors = []
        run_name, run_exp, run_len = None, 0, 0
        for name, exp in word + (("", 0),):
            if (name, exp) == (run_name, run_exp):
                run_len += 1
                continue
            if run_len:
                base = f"inv({run_name})" if run_exp < 0 else run_name
                factors.append(f"{base}^{run_len}" if run_len > 1 else base)
            run_name, run_exp, run_len = name, exp, 1
        body = "*".join(factors)
        parts.append(_coeff_times(format_complex(coeff), body))
    return " + ".join(parts).replace("+ -", "- ")


def _coeff_times(cs: str, body: str) -> str:
    if not body:
        return cs
    if cs == "1":
        return body
    if cs == "-1":
        return f"-{body}"
    return f"{cs}*{body}"


def from_freepoly(p: FreePoly, names: Sequence[str]) -> RatExpr:
    """Word polynomial as an expression over the named variables."""
    if len(names) != p.d:
        raise ValueError(f"need {p.d} names, got {len(names)}")
    atoms = [Variable(n) for n in names]
    terms = []
    for word in sorted(p.terms, key=lambda w: (len(w), w)):
        coeff = p.terms[word]
        terms.append(scale(coeff, mul(*[atoms[k] for k in word])
                           if word else Scalar(1)))
    return add(*terms) if terms else Scalar(0)


# -- probabilistic equivalence -----------------------------------------------

@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of sampling-based comparison; never a proof of equality."""

    equal_on_samples: bool
    levels: tuple
    trials: int
    residual: float = 0.0
    witness_level: Optional[int] = None
    witness: Optional[dict] = None

    def __bool__(self):
        return self.equal_on_samples


def equivalent_probabilistic(e1: RatExpr, e2: RatExpr,
                             levels: Iterable[int] = (1, 2, 3),
                             trials: int = 10,
                             tol: float = 1e-8,
                             rng: Optional[np.random.Generator] = None
                             ) -> EquivalenceVerdict:
    """Compare on random unit-norm complex Gaussian assignments per level.

    Resamples on SingularityError up to a retry cap for each (level, trial);
    raises InconclusiveError if the cap is exhausted (domain too thin).
    """
    from .linalg import op_norm, random_unit_norm

    rng = rng or np.random.default_rng()
    names = sorted(free_variables(e1) | free_variables(e2))
    levels = tuple(levels)
    worst = 0.0
    for level in levels:
        for _ in range(trials):
            for _attempt in range(RESAMPLE_CAP):
                assignment = {nm: random_unit_norm(level, rng) for nm in names}
                try:
                    v1 = evaluate(e1, assignment, n=level)
                    v2 = evaluate(e2, assignment, n=level)
                except SingularityError:
                    continue
                residual = op_norm(v1 - v2) / (1.0 + max(op_norm(v1),
                                                         op_norm(v2)))
                worst = max(worst, residual)
                if residual > tol:
                    return EquivalenceVerdict(
                        False, levels, trials, residual=residual,
                        witness_level=level, witness=assignment)
                break
            else:
                raise InconclusiveError(
                    f"no nonsingular sample at level {level} after "
                    f"{RESAMPLE_CAP} draws")
    return EquivalenceVerdict(True, levels, trials, residual=worst)


# -- rendering ----------------------------------------------------------------

_PREC_SUM = 1
_PREC_PROD = 2
_PREC_ATOM = 3


def to_text(e: RatExpr) -> str:
    """Structural text form using the expression grammar (inv(...), ^)."""
    return _render(e, _PREC_SUM)


def _render(e: RatExpr, context: int) -> str:
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Scalar):
        return _wrap(format_complex(e.value), _PREC_ATOM, context)
    if isinstance(e, Inverse):
        return f"inv({_render(e.child, _PREC_SUM)})"
    if isinstance(e, ScalarMul):
        child = _render(e.child, _PREC_PROD)
        cs = format_complex(e.coeff)
        body = f"-{child}" if cs == "-1" else f"{cs}*{child}"
        return _wrap(body, _PREC_PROD, context)
    if isinstance(e, Product):
        factors = []
        run: list = []
        for child in e.children + (None,):
            if run and child is run[-1]:
                run.append(child)
                continue
            if run:
                base = _render(run[-1], _PREC_ATOM)
                factors.append(f"{base}^{len(run)}" if len(run) > 1 else base)
            run = [child]
        return _wrap("*".join(factors), _PREC_PROD, context)
    if isinstance(e, Sum):
        parts = [_render(c, _PREC_SUM + 1) for c in e.children]
        return _wrap(" + ".join(parts).replace("+ -", "- "), _PREC_SUM,
                     context)
    raise TypeError(f"unknown node {type(e).__name__}")  # pragma: no cover


def _wrap(text: str, prec: int, context: int) -> str:
    return f"({text})" if prec < context else text
