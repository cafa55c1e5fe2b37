"""Free words and free polynomials over d noncommuting letters.

A word is a tuple of letter indices in range(d); the empty tuple is the
multiplicative identity.  A FreePoly maps words to complex coefficients and
never stores an exactly-zero coefficient, so equality is plain dict equality.

For d = 2 a polynomial carries a chart tag: "xy" for the original variables,
"uv" after the change of variables x = u + v, y = u - v.  The tag exists so
that to_uv/from_uv cannot be applied twice by accident.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import ChartError, DimensionMismatchError

Word = tuple  # tuple[int, ...], letters in range(d)

CHART_XY = "xy"
CHART_UV = "uv"

_LETTER_NAMES = {CHART_XY: ("x", "y"), CHART_UV: ("u", "v")}


class FreePoly:
    """Complex-coefficient polynomial in d noncommuting variables."""

    __slots__ = ("d", "terms", "chart")

    def __init__(self, d: int, terms: Mapping[Word, complex] | None = None,
                 chart: Optional[str] = None):
        if d < 1:
            raise ValueError(f"need at least one variable, got d={d}")
        if chart is not None and d != 2:
            raise ChartError("charts only apply to two-variable polynomials")
        self.d = d
        self.chart = chart if d != 2 else (chart or CHART_XY)
        clean: dict[Word, complex] = {}
        for word, coeff in (terms or {}).items():
            word = tuple(word)
            if any(not (0 <= k < d) for k in word):
                raise ValueError(f"letter out of range in word {word!r} for d={d}")
            c = complex(coeff)
            if c != 0:
                clean[word] = clean.get(word, 0) + c
                if clean[word] == 0:
                    del clean[word]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, d: int, chart: Optional[str] = None) -> "FreePoly":
        return cls(d, {}, chart=chart)

    @classmethod
    def one(cls, d: int, chart: Optional[str] = None) -> "FreePoly":
        return cls(d, {(): 1.0}, chart=chart)

    @classmethod
    def letter(cls, k: int, d: int, chart: Optional[str] = None) -> "FreePoly":
        return cls(d, {(k,): 1.0}, chart=chart)

    @classmethod
    def word(cls, letters: Sequence[int], d: int, coeff: complex = 1.0,
             chart: Optional[str] = None) -> "FreePoly":
        return cls(d, {tuple(letters): coeff}, chart=chart)

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Max word length; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(len(w) for w in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word: Sequence[int]) -> complex:
        return self.terms.get(tuple(word), 0j)

    def homogeneous_part(self, degree: int) -> "FreePoly":
        return FreePoly(self.d, {w: c for w, c in self.terms.items()
                                 if len(w) == degree}, chart=self.chart)

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "FreePoly") -> None:
        if self.d != other.d:
            raise DimensionMismatchError(
                f"variable counts differ: {self.d} vs {other.d}")
        if self.chart != other.chart:
            raise ChartError(f"charts differ: {self.chart} vs {other.chart}")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = FreePoly(self.d, {(): other}, chart=self.chart)
        if not isinstance(other, FreePoly):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w, 0) + c
            if s == 0:
                terms.pop(w, None)
            else:
                terms[w] = s
        return FreePoly(self.d, terms, chart=self.chart)

    __radd__ = __add__

    def __neg__(self):
        return FreePoly(self.d, {w: -c for w, c in self.terms.items()},
                        chart=self.chart)

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = FreePoly(self.d, {(): other}, chart=self.chart)
        if not isinstance(other, FreePoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            c = complex(other)
            return FreePoly(self.d, {w: c * v for w, v in self.terms.items()},
                            chart=self.chart)
        if not isinstance(other, FreePoly):
            return NotImplemented
        self._check_compatible(other)
        terms: dict[Word, complex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = terms.get(w, 0) + c1 * c2
                if s == 0:
                    terms.pop(w, None)
                else:
                    terms[w] = s
        return FreePoly(self.d, terms, chart=self.chart)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers of a FreePoly")
        out = FreePoly.one(self.d, chart=self.chart)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, FreePoly):
            return NotImplemented
        return (self.d == other.d and self.chart == other.chart
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.d, self.chart, frozenset(self.terms.items())))

    # -- display -----------------------------------------------------------

    def letter_names(self) -> tuple:
        if self.d == 2:
            return _LETTER_NAMES[self.chart]
        if self.d == 1:
            return ("x",)
        return tuple(f"x{k + 1}" for k in range(self.d))

    def __repr__(self):
        return f"FreePoly({self.to_text()!r})"

    def to_text(self) -> str:
        """Render in degree-lexicographic word order."""
        if not self.terms:
            return "0"
        names = self.letter_names()
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            factors = [f"{names[k]}^{n}" if n > 1 else names[k]
                       for k, n in _run_lengths(w)]
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

    # -- evaluation --------------------------------------------------------

    def evaluate(self, x: "MatrixTuple") -> np.ndarray:
        """Evaluate at a tuple of matrices; the empty word contributes c*I."""
        if self.d != x.d:
            raise DimensionMismatchError(
                f"polynomial in {self.d} variables, tuple has {x.d}")
        n = x.n
        out = np.zeros((n, n), dtype=complex)
        eye = np.eye(n, dtype=complex)
        cache: dict[Word, np.ndarray] = {(): eye}
        for word, coeff in self.terms.items():
            out += coeff * _word_value(word, x, cache)
        return out

    __call__ = evaluate

    # -- two-variable structure ---------------------------------------------

    def flip(self) -> "FreePoly":
        """Swap the two letters (w -> w^f).  Only in the x,y chart."""
        self._require_two_vars()
        if self.chart != CHART_XY:
            raise ChartError("flip acts on the x,y chart")
        return FreePoly(self.d, {tuple(1 - k for k in w): c
                                 for w, c in self.terms.items()},
                        chart=self.chart)

    def symmetrize(self) -> "FreePoly":
        """(p + p^f) / 2."""
        return 0.5 * (self + self.flip())

    def is_symmetric(self) -> bool:
        """True iff p equals its flip in canonical form."""
        return self == self.flip()

    def to_uv(self) -> "FreePoly":
        """Substitute x -> u+v, y -> u-v."""
        self._require_two_vars()
        if self.chart != CHART_XY:
            raise ChartError("to_uv expects the x,y chart")
        u = FreePoly.letter(0, 2, chart=CHART_UV)
        v = FreePoly.letter(1, 2, chart=CHART_UV)
        return self.substitute_letters([u + v, u - v])

    def from_uv(self) -> "FreePoly":
        """Substitute u -> (x+y)/2, v -> (x-y)/2; inverse of to_uv."""
        self._require_two_vars()
        if self.chart != CHART_UV:
            raise ChartError("from_uv expects the u,v chart")
        x = FreePoly.letter(0, 2, chart=CHART_XY)
        y = FreePoly.letter(1, 2, chart=CHART_XY)
        return self.substitute_letters([0.5 * (x + y), 0.5 * (x - y)])

    def substitute_letters(self, images: Sequence["FreePoly"]) -> "FreePoly":
        """Ring homomorphism sending letter k to images[k]."""
        if len(images) != self.d:
            raise DimensionMismatchError(
                f"need {self.d} images, got {len(images)}")
        target_d = images[0].d
        chart = images[0].chart
        out = FreePoly.zero(target_d, chart=chart)
        for word, coeff in self.terms.items():
            term = FreePoly(target_d, {(): coeff}, chart=chart)
            for k in word:
                term = term * images[k]
            out = out + term
        return out

    def v_parity_split(self) -> tuple["FreePoly", "FreePoly"]:
        """Split by parity of the letter-v count (u,v chart only)."""
        self._require_two_vars()
        if self.chart != CHART_UV:
            raise ChartError("v_parity_split expects the u,v chart")
        even: dict[Word, complex] = {}
        odd: dict[Word, complex] = {}
        for w, c in self.terms.items():
            (even if sum(w) % 2 == 0 else odd)[w] = c
        return (FreePoly(2, even, chart=CHART_UV),
                FreePoly(2, odd, chart=CHART_UV))

    def _require_two_vars(self):
        if self.d != 2:
            raise DimensionMismatchError(f"operation needs d=2, got d={self.d}")


def s_even(n: int) -> FreePoly:
    """Sum of all degree-n monomials in u,v with an even number of v's."""
    return _s_parity(n, 0)


def s_odd(n: int) -> FreePoly:
    """Sum of all degree-n monomials in u,v with an odd number of v's."""
    return _s_parity(n, 1)


def _s_parity(n: int, parity: int) -> FreePoly:
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    terms = {w: 1.0 for w in itertools.product((0, 1), repeat=n)
             if sum(w) % 2 == parity}
    return FreePoly(2, terms, chart=CHART_UV)


def _run_lengths(word: Word) -> Iterable[tuple[int, int]]:
    for k, group in itertools.groupby(word):
        yield k, sum(1 for _ in group)


def format_complex(c: complex) -> str:
    if c.imag == 0:
        r = c.real
        return str(int(r)) if r == int(r) else repr(r)
    if c.real == 0:
        i = c.imag
        return (str(int(i)) if i == int(i) else repr(i)) + "i"
    re = format_complex(complex(c.real))
    im = format_complex(complex(0, abs(c.imag)))
    sign = "+" if c.imag > 0 else "-"
    return f"({re}{sign}{im})"


def _word_value(word: Word, x: "MatrixTuple", cache: dict) -> np.ndarray:
    got = cache.get(word)
    if got is not None:
        return got
    m = cache[()]
    # grow prefix by prefix so shared prefixes across words are reused
    for i, k in enumerate(word):
        pref = word[:i + 1]
        nxt = cache.get(pref)
        if nxt is None:
            nxt = m @ x.entries[k]
            cache[pref] = nxt
        m = nxt
    return m


class MatrixTuple:
    """A level-n point of the d-variable matrix universe."""

    __slots__ = ("entries", "n", "d")

    def __init__(self, entries: Sequence[np.ndarray]):
        mats = tuple(np.asarray(m, dtype=complex) for m in entries)
        if not mats:
            raise ValueError("empty matrix tuple")
        n = mats[0].shape[0]
        for m in mats:
            if m.ndim != 2 or m.shape != (n, n):
                raise DimensionMismatchError(
                    f"all entries must be {n}x{n}, got shape {m.shape}")
        for m in mats:
            m.flags.writeable = False
        self.entries = mats
        self.n = n
        self.d = len(mats)

    def __getitem__(self, k: int) -> np.ndarray:
        return self.entries[k]

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return f"MatrixTuple(n={self.n}, d={self.d})"

    def flip(self) -> "MatrixTuple":
        """Transpose the two components of a pair."""
        if self.d != 2:
            raise DimensionMismatchError(f"flip needs d=2, got d={self.d}")
        return MatrixTuple((self.entries[1], self.entries[0]))

    def close_to(self, other: "MatrixTuple", tol: float = 1e-12) -> bool:
        if self.d != other.d or self.n != other.n:
            return False
        scale = 1.0 + max(np.abs(m).max(initial=0.0) for m in self.entries)
        return all(np.abs(a - b).max(initial=0.0) <= tol * scale
                   for a, b in zip(self.entries, other.entries))
