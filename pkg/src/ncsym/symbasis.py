"""Decomposition of symmetric free polynomials through (u, v^2, vuv).

A symmetric polynomial in x, y, rewritten in u = (x+y)/2, v = (x-y)/2, has
only even-v monomials, and each such monomial factors uniquely left to
right into the letter u and blocks v u^j v.  GenPoly is the image algebra
over the generators U (for u) and M_j (for v u^j v); reduce_to_pi rewrites
M_j as gamma (beta^-1 gamma)^(j-1) to land in the three coordinates
alpha, beta, gamma of the symmetrization map.
"""

from __future__ import annotations

import itertools
from typing import Mapping

from .errors import NotSymmetricError
from .ratexpr import RatExpr, Scalar, Variable, add, inv, mul, scale
from .words import CHART_UV, FreePoly, format_complex

U_ATOM = -1  # atoms in generator words: -1 is U, j >= 0 is M_j


class GenPoly:
    """Polynomial in the noncommuting generators U and M_j (j >= 0)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, complex] | None = None):
        clean: dict[tuple, complex] = {}
        for word, coeff in (terms or {}).items():
            word = tuple(word)
            if any(a < U_ATOM for a in word):
                raise ValueError(f"bad generator atom in {word}")
            c = complex(coeff)
            if c != 0:
                clean[word] = clean.get(word, 0) + c
                if clean[word] == 0:
                    del clean[word]
        self.terms = clean

    @classmethod
    def zero(cls) -> "GenPoly":
        return cls({})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, GenPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, GenPoly):
            return NotImplemented
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w, 0) + c
            if s == 0:
                terms.pop(w, None)
            else:
                terms[w] = s
        return GenPoly(terms)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return GenPoly({w: other * c for w, c in self.terms.items()})
        if not isinstance(other, GenPoly):
            return NotImplemented
        terms: dict[tuple, complex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = terms.get(w, 0) + c1 * c2
                if s == 0:
                    terms.pop(w, None)
                else:
                    terms[w] = s
        return GenPoly(terms)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.__mul__(other)
        return NotImplemented

    def __repr__(self):
        return f"GenPoly({self.to_text()!r})"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            factors = []
            for atom, run in itertools.groupby(w):
                name = "U" if atom == U_ATOM else f"M{atom}"
                count = sum(1 for _ in run)
                factors.append(f"{name}^{count}" if count > 1 else name)
            body = "*".join(factors)
            if not body:
                parts.append(format_complex(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{format_complex(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def weighted_degrees(self) -> set:
        """Total u,v-degrees of the terms: U weighs 1, M_j weighs j + 2."""
        return {sum(1 if a == U_ATOM else a + 2 for a in w)
                for w in self.terms}

    def expand_back(self) -> FreePoly:
        """Substitute U -> u, M_j -> v u^j v; exact coefficient level."""
        terms: dict[tuple, complex] = {}
        for w, c in self.terms.items():
            letters: list[int] = []
            for a in w:
                if a == U_ATOM:
                    letters.append(0)
                else:
                    letters.extend([1] + [0] * a + [1])
            key = tuple(letters)
            s = terms.get(key, 0) + c
            if s == 0:
                terms.pop(key, None)
            else:
                terms[key] = s
        return FreePoly(2, terms, chart=CHART_UV)


def _factor_even_word(word: tuple) -> tuple:
    """Unique left-to-right factorization of an even-v word over u, v."""
    atoms: list[int] = []
    i = 0
    while i < len(word):
        if word[i] == 0:
            atoms.append(U_ATOM)
            i += 1
            continue
        j = i + 1
        while word[j] == 0:
            j += 1
        atoms.append(j - i - 1)  # v u^(j-i-1) v becomes M_(j-i-1)
        i = j + 1
    return tuple(atoms)


def decompose_symmetric(p: FreePoly) -> GenPoly:
    """Rewrite a symmetric polynomial in x, y over the generators U, M_j.

    Raises NotSymmetricError when the odd-v part of the u,v form is
    nonzero.  For a homogeneous input of degree d only M_j with j <= d-2
    can occur.
    """
    q = p if p.chart == CHART_UV else p.to_uv()
    even, odd = q.v_parity_split()
    if not odd.is_zero():
        raise NotSymmetricError(
            f"polynomial is not symmetric; odd-v part: {odd.to_text()}")
    terms: dict[tuple, complex] = {}
    for word, coeff in even.terms.items():
        key = _factor_even_word(word)
        s = terms.get(key, 0) + coeff
        if s == 0:
            terms.pop(key, None)
        else:
            terms[key] = s
    return GenPoly(terms)


ALPHA = Variable("alpha")
BETA = Variable("beta")
GAMMA = Variable("gamma")
_BETA_INV = inv(BETA)


def generator_image(atom: int) -> RatExpr:
    """U -> alpha, M_0 -> beta, M_j -> gamma (beta^-1 gamma)^(j-1)."""
    if atom == U_ATOM:
        return ALPHA
    if atom == 0:
        return BETA
    return mul(GAMMA, *([_BETA_INV, GAMMA] * (atom - 1)))


def reduce_to_pi(g: GenPoly) -> RatExpr:
    """Rational expression in alpha, beta, gamma with g = result o pi.

    beta^-1 beta pairs are left uncancelled; expression hygiene belongs to
    the rational-expression equivalence tools.
    """
    terms = []
    for word in sorted(g.terms, key=lambda w: (len(w), w)):
        coeff = g.terms[word]
        factors = [generator_image(a) for a in word]
        terms.append(scale(coeff, mul(*factors) if factors else Scalar(1)))
    return add(*terms) if terms else Scalar(0)


def factor_through_pi(p: FreePoly) -> RatExpr:
    """F with p = F o pi wherever beta = v^2 is invertible."""
    return reduce_to_pi(decompose_symmetric(p))
