"""Graded truncated tensor-series arithmetic over a weighted alphabet.

Words are tuples of letter identifiers (strings).  A TensorSeries is a
sparse linear combination of words, truncated at a weighted length N; the
empty tuple is the unit word.  Series are immutable values: every
operation returns a fresh object, so they are safe to share between
threads.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import DomainError, PreconditionError, StructuralError

Word = tuple  # tuple of letter strings; () is the unit word

#: Default absolute tolerance for coefficient comparisons.
DEFAULT_TOL = 1e-9


class Alphabet:
    """An ordered set of weighted letters with an optional commutative bracket.

    The bracket is a symmetric partial map (letter, letter) -> letter; absent
    pairs (and pairs stored as None) bracket to zero.  When nonzero it must
    add weights: w({a,b}) = w(a) + w(b).
    """

    __slots__ = ("letters", "weights", "_bracket", "_index", "_hash", "_words_cache")

    def __init__(
        self,
        letters: Sequence[str],
        weights: Optional[Mapping[str, int]] = None,
        bracket: Optional[Mapping[tuple, Optional[str]]] = None,
    ):
        letters = tuple(str(a) for a in letters)
        if len(set(letters)) != len(letters):
            raise StructuralError(f"duplicate letters in alphabet: {letters}")
        self.letters = letters
        if weights is None:
            weights = {a: 1 for a in letters}
        self.weights = {a: int(weights[a]) for a in letters}
        for a, w in self.weights.items():
            if w < 1:
                raise StructuralError(f"letter {a!r} has weight {w} < 1")
        table: dict = {}
        if bracket:
            for (a, b), c in bracket.items():
                if a not in self.weights or b not in self.weights:
                    raise StructuralError(f"bracket pair ({a!r}, {b!r}) uses unknown letters")
                if c is not None and c not in self.weights:
                    raise StructuralError(f"bracket value {c!r} is not a letter")
                for key in ((a, b), (b, a)):
                    if key in table and table[key] != c:
                        raise StructuralError(f"bracket not symmetric at {key}")
                    table[key] = c
        self._bracket = table
        self._index = {a: i for i, a in enumerate(letters)}
        self._words_cache: dict = {}
        self._hash = hash((letters, tuple(sorted(self.weights.items())),
                           tuple(sorted((k, v) for k, v in table.items()))))
        self._validate_bracket()

    def _validate_bracket(self) -> None:
        for (a, b), c in self._bracket.items():
            if c is not None and self.weights[c] != self.weights[a] + self.weights[b]:
                raise StructuralError(
                    f"bracket {{{a},{b}}}={c} violates weight additivity")
        # associativity as a total operation with 0 absorbing
        for a in self.letters:
            for b in self.letters:
                for c in self.letters:
                    left = self.bracket(a, self.bracket(b, c)) if self.bracket(b, c) else None
                    right = self.bracket(self.bracket(a, b), c) if self.bracket(a, b) else None
                    if left != right:
                        raise StructuralError(
                            f"bracket not associative on ({a},{b},{c}): {left} != {right}")

    @classmethod
    def standard(cls, d: int) -> "Alphabet":
        """Letters "1".."d", unit weights, trivial bracket."""
        return cls([str(i) for i in range(1, d + 1)])

    @classmethod
    def multi_index(cls, d: int, max_weight: int) -> "Alphabet":
        """Multi-index letters over d directions with total degree <= max_weight.

        Letter (a_1,..,a_d) has weight a_1+..+a_d and brackets add multi-indices,
        yielding zero when the sum leaves the letter set.  The basis direction i
        is named by the i-th canonical multi-index, e.g. "(1,0)" for d=2.
        """
        idxs = []

        def rec(prefix, remaining, slots):
            if slots == 0:
                if sum(prefix) >= 1:
                    idxs.append(tuple(prefix))
                return
            for v in range(remaining + 1):
                rec(prefix + [v], remaining - v, slots - 1)

        rec([], max_weight, d)
        idxs.sort(key=lambda t: (sum(t), tuple(-x for x in t)))
        name = {t: "(" + ",".join(str(x) for x in t) + ")" for t in idxs}
        letters = [name[t] for t in idxs]
        weights = {name[t]: sum(t) for t in idxs}
        bracket = {}
        for s in idxs:
            for t in idxs:
                u = tuple(x + y for x, y in zip(s, t))
                bracket[(name[s], name[t])] = name[u] if sum(u) <= max_weight else None
        return cls(letters, weights, bracket)

    def bracket(self, a: Optional[str], b: Optional[str]) -> Optional[str]:
        """Commutative bracket of two letters; None encodes zero."""
        if a is None or b is None:
            return None
        return self._bracket.get((a, b))

    def bracket_word(self, word: Word) -> Optional[str]:
        """Iterated bracket of all letters of a word (order independent)."""
        if not word:
            return None
        out = word[0]
        for a in word[1:]:
            out = self.bracket(out, a)
            if out is None:
                return None
        return out

    def has_trivial_bracket(self) -> bool:
        return all(c is None for c in self._bracket.values())

    def index(self, letter: str) -> int:
        return self._index[letter]

    def weight(self, letter: str) -> int:
        return self.weights[letter]

    def wlen(self, word: Word) -> int:
        """Weighted length of a word; the unit word has weighted length 0."""
        return sum(self.weights[a] for a in word)

    def word_key(self, word: Word):
        """Canonical sort key: weighted length, then lexicographic by letter order."""
        return (self.wlen(word), tuple(self._index[a] for a in word))

    def words_of_weight(self, n: int) -> list:
        """All words of weighted length exactly n, in canonical order."""
        if n in self._words_cache:
            return self._words_cache[n]
        if n == 0:
            out = [()]
        else:
            out = []
            for a in self.letters:
                w = self.weights[a]
                if w <= n:
                    out.extend(u + (a,) for u in self.words_of_weight(n - w))
            out.sort(key=self.word_key)
        self._words_cache[n] = out
        return out

    def words_up_to(self, n: int) -> list:
        """All words of weighted length <= n, in canonical order."""
        out = []
        for g in range(n + 1):
            out.extend(self.words_of_weight(g))
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, Alphabet) and self.letters == other.letters
                and self.weights == other.weights and self._bracket == other._bracket)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Alphabet({list(self.letters)!r})"


class TensorSeries:
    """A sparse, level-truncated linear combination of words.

    Stored words never exceed the weighted length `level`; zero coefficients
    are dropped, so equal series have equal storage (canonical form).
    """

    __slots__ = ("alphabet", "level", "_coeffs")

    def __init__(self, alphabet: Alphabet, level: int, coeffs: Optional[Mapping[Word, float]] = None):
        self.alphabet = alphabet
        self.level = int(level)
        data = {}
        if coeffs:
            for w, c in coeffs.items():
                w = tuple(w)
                c = float(c)
                if c == 0.0:
                    continue
                if alphabet.wlen(w) <= self.level:
                    data[w] = c
        self._coeffs = data

    # -- construction helpers -------------------------------------------------

    @classmethod
    def unit(cls, alphabet: Alphabet, level: int) -> "TensorSeries":
        return cls(alphabet, level, {(): 1.0})

    @classmethod
    def zero(cls, alphabet: Alphabet, level: int) -> "TensorSeries":
        return cls(alphabet, level, {})

    @classmethod
    def letter(cls, alphabet: Alphabet, level: int, a: str) -> "TensorSeries":
        return cls(alphabet, level, {(a,): 1.0})

    @classmethod
    def word(cls, alphabet: Alphabet, level: int, w: Iterable[str], coeff: float = 1.0) -> "TensorSeries":
        return cls(alphabet, level, {tuple(w): coeff})

    # -- access ----------------------------------------------------------------

    def pair(self, word: Iterable[str]) -> float:
        """Coefficient of a word; 0.0 when absent."""
        return self._coeffs.get(tuple(word), 0.0)

    def items(self) -> Iterator:
        """(word, coefficient) pairs in canonical order."""
        return iter(sorted(self._coeffs.items(), key=lambda kv: self.alphabet.word_key(kv[0])))

    def words(self) -> list:
        return [w for w, _ in self.items()]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def max_abs(self) -> float:
        return max((abs(c) for c in self._coeffs.values()), default=0.0)

    def top_grade(self) -> int:
        """Largest weighted length carrying a nonzero coefficient (0 if none)."""
        return max((self.alphabet.wlen(w) for w in self._coeffs), default=0)

    # -- linear structure --------------------------------------------------------

    def _check_compatible(self, other: "TensorSeries") -> None:
        if self.alphabet != other.alphabet:
            raise StructuralError("series over mismatched alphabets")

    def __add__(self, other: "TensorSeries") -> "TensorSeries":
        self._check_compatible(other)
        level = max(self.level, other.level)
        out = dict(self._coeffs)
        for w, c in other._coeffs.items():
            out[w] = out.get(w, 0.0) + c
        return TensorSeries(self.alphabet, level, out)

    def __sub__(self, other: "TensorSeries") -> "TensorSeries":
        return self + (-1.0) * other

    def __mul__(self, scale: float) -> "TensorSeries":
        return TensorSeries(self.alphabet, self.level,
                            {w: scale * c for w, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "TensorSeries":
        return self * -1.0

    def __eq__(self, other) -> bool:
        return (isinstance(other, TensorSeries) and self.alphabet == other.alphabet
                and self._coeffs == other._coeffs)

    def __hash__(self) -> int:
        return hash((self.alphabet, frozenset(self._coeffs.items())))

    def max_diff(self, other: "TensorSeries") -> float:
        """Largest absolute coefficient difference over all words."""
        self._check_compatible(other)
        keys = set(self._coeffs) | set(other._coeffs)
        return max((abs(self._coeffs.get(w, 0.0) - other._coeffs.get(w, 0.0)) for w in keys),
                   default=0.0)

    def isclose(self, other: "TensorSeries", tol: float = DEFAULT_TOL) -> bool:
        return self.max_diff(other) <= tol

    def with_level(self, level: int) -> "TensorSeries":
        """The same series viewed at a different truncation level (drops words
        above it; raising the level adds no information)."""
        return TensorSeries(self.alphabet, level, self._coeffs)

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for w, c in self.items():
            word = "".join(w) if w else "1"
            parts.append(f"{c:+g}*{word}")
        return " ".join(parts)


# -- operations -------------------------------------------------------------------


def concat(x: TensorSeries, y: TensorSeries, level: Optional[int] = None) -> TensorSeries:
    """Truncated concatenation (tensor) product; words beyond the level are dropped."""
    x._check_compatible(y)
    if level is None:
        level = max(x.level, y.level)
    alph = x.alphabet
    out: dict = {}
    for u, cu in x._coeffs.items():
        wu = alph.wlen(u)
        if wu > level:
            continue
        for v, cv in y._coeffs.items():
            if wu + alph.wlen(v) > level:
                continue
            w = u + v
            out[w] = out.get(w, 0.0) + cu * cv
    return TensorSeries(alph, level, out)


def pair(x: TensorSeries, word: Iterable[str]) -> float:
    """Natural pairing of a series with a word."""
    return x.pair(word)


def project(x: TensorSeries, level: int) -> TensorSeries:
    """Canonical projection onto the subspace of weighted length <= level."""
    if level > x.level:
        raise PreconditionError(f"cannot project level-{x.level} series to higher level {level}")
    return TensorSeries(x.alphabet, level, x._coeffs)


def exp_trunc(x: TensorSeries, level: Optional[int] = None) -> TensorSeries:
    """Truncated tensor exponential sum_{n<=N} x^{(x)n} / n!.

    Requires a vanishing empty-word coefficient, which makes the sum finite.
    """
    if level is None:
        level = x.level
    if abs(x.pair(())) > 0.0:
        raise DomainError("exp requires a vanishing empty-word coefficient")
    out = TensorSeries.unit(x.alphabet, level)
    term = TensorSeries.unit(x.alphabet, level)
    for n in range(1, level + 1):
        term = concat(term, x, level) * (1.0 / n)
        if not term:
            break
        out = out + term
    return out


def log_trunc(g: TensorSeries, level: Optional[int] = None) -> TensorSeries:
    """Truncated tensor logarithm sum_{n<=N} (-1)^(n+1) (g - 1)^{(x)n} / n.

    Requires a unit empty-word coefficient.
    """
    if level is None:
        level = g.level
    if not math.isclose(g.pair(()), 1.0, rel_tol=0.0, abs_tol=1e-12):
        raise DomainError("log requires a unit empty-word coefficient")
    h = g.with_level(level) - TensorSeries.unit(g.alphabet, level)
    out = TensorSeries.zero(g.alphabet, level)
    power = TensorSeries.unit(g.alphabet, level)
    for n in range(1, level + 1):
        power = concat(power, h, level)
        if not power:
            break
        out = out + power * (((-1.0) ** (n + 1)) / n)
    return out


def invert(g: TensorSeries, level: Optional[int] = None) -> TensorSeries:
    """Group inverse of a series with unit empty-word coefficient (Neumann series)."""
    if level is None:
        level = g.level
    if not math.isclose(g.pair(()), 1.0, rel_tol=0.0, abs_tol=1e-12):
        raise DomainError("inverse requires a unit empty-word coefficient")
    one = TensorSeries.unit(g.alphabet, level)
    h = one - g.with_level(level)
    out = one
    power = one
    for _ in range(level):
        power = concat(power, h, level)
        if not power:
            break
        out = out + power
    return out


def dilate(x: TensorSeries, lam: float) -> TensorSeries:
    """Grade dilation: the coefficient on each word of weighted length n is
    scaled by lam**n.  An algebra automorphism for lam != 0."""
    alph = x.alphabet
    return TensorSeries(alph, x.level,
                        {w: c * lam ** alph.wlen(w) for w, c in x._coeffs.items()})


def commutator(x: TensorSeries, y: TensorSeries, level: Optional[int] = None) -> TensorSeries:
    """Concatenation commutator [x, y] = x y - y x."""
    return concat(x, y, level) - concat(y, x, level)
