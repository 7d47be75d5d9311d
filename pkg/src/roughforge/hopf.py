"""Shuffle and quasi-shuffle products, character predicates, and the Hoffman
exponential/logarithm with their concatenation-algebra adjoints.

The quasi-shuffle of two words follows the recursion

    va * wb = (v * wb) a + (va * w) b + (v * w) {ab}

where {ab} is the alphabet's commutative bracket; a trivial bracket recovers
the plain shuffle.  All products preserve the weighted grading.
"""

from __future__ import annotations

import math
import threading
from typing import Iterable, List, Optional, Tuple

from .algebra import Alphabet, TensorSeries, Word, concat
from .errors import PreconditionError

#: Compositions of n larger than this are refused (2^(n-1) terms each).
MAX_COMPOSITION_ORDER = 12


class QuasiShuffleContext:
    """Product context over an alphabet: quasi-shuffle by default, or the plain
    shuffle when `use_bracket` is False.  Word products are memoized; the cache
    is guarded by a lock so contexts can be shared between threads."""

    def __init__(self, alphabet: Alphabet, use_bracket: bool = True):
        self.alphabet = alphabet
        self.use_bracket = bool(use_bracket)
        self._memo: dict = {}
        self._lock = threading.Lock()

    @property
    def mode(self) -> str:
        return "quasishuffle" if self.use_bracket else "shuffle"

    def is_effectively_shuffle(self) -> bool:
        return not self.use_bracket or self.alphabet.has_trivial_bracket()

    def word_product(self, u: Word, v: Word) -> dict:
        """Product of two words as a word -> coefficient map."""
        u, v = tuple(u), tuple(v)
        if not u:
            return {v: 1.0}
        if not v:
            return {u: 1.0}
        key = (u, v)
        with self._lock:
            hit = self._memo.get(key)
        if hit is not None:
            return hit
        va, a = u[:-1], u[-1]
        wb, b = v[:-1], v[-1]
        out: dict = {}
        for w, c in self.word_product(va, v).items():
            w = w + (a,)
            out[w] = out.get(w, 0.0) + c
        for w, c in self.word_product(u, wb).items():
            w = w + (b,)
            out[w] = out.get(w, 0.0) + c
        if self.use_bracket:
            ab = self.alphabet.bracket(a, b)
            if ab is not None:
                for w, c in self.word_product(va, wb).items():
                    w = w + (ab,)
                    out[w] = out.get(w, 0.0) + c
        with self._lock:
            self._memo[key] = out
        return out

    def product(self, x: TensorSeries, y: TensorSeries) -> TensorSeries:
        """Bilinear extension of the word product."""
        x._check_compatible(y)
        level = max(x.level, y.level)
        out: dict = {}
        for u, cu in x.items():
            for v, cv in y.items():
                for w, c in self.word_product(u, v).items():
                    out[w] = out.get(w, 0.0) + cu * cv * c
        return TensorSeries(self.alphabet, level, out)


def shuffle(u: Iterable[str], v: Iterable[str], alphabet: Alphabet) -> TensorSeries:
    """Shuffle product of two words, as a series at the joint weighted length."""
    ctx = QuasiShuffleContext(alphabet, use_bracket=False)
    u, v = tuple(u), tuple(v)
    level = alphabet.wlen(u) + alphabet.wlen(v)
    return TensorSeries(alphabet, level, ctx.word_product(u, v))


def quasi_shuffle(u: Iterable[str], v: Iterable[str], ctx: QuasiShuffleContext) -> TensorSeries:
    """Quasi-shuffle product of two words under the context's bracket."""
    u, v = tuple(u), tuple(v)
    level = ctx.alphabet.wlen(u) + ctx.alphabet.wlen(v)
    return TensorSeries(ctx.alphabet, level, ctx.word_product(u, v))


def deconcat(w: Word) -> List[Tuple[Word, Word]]:
    """Deconcatenation coproduct of a word: all (prefix, suffix) splits
    including the trivial ones."""
    w = tuple(w)
    return [(w[:k], w[k:]) for k in range(len(w) + 1)]


# -- character predicates ------------------------------------------------------


def _predicate_tol(x: TensorSeries, tol: float) -> float:
    # relative on the largest coefficient, to survive products of large entries
    return max(tol, tol * x.max_abs())


def is_character(x: TensorSeries, level: int, ctx: QuasiShuffleContext,
                 tol: float = 1e-9) -> bool:
    """True when <x,1> = 1 and <x, u*v> = <x,u><x,v> for all nonempty word
    pairs with joint weighted length <= level."""
    eps = _predicate_tol(x, tol)
    if abs(x.pair(()) - 1.0) > eps:
        return False
    alph = ctx.alphabet
    for gu in range(1, level):
        for u in alph.words_of_weight(gu):
            xu = x.pair(u)
            for gv in range(gu, level - gu + 1):
                for v in alph.words_of_weight(gv):
                    lhs = sum(c * x.pair(w) for w, c in ctx.word_product(u, v).items())
                    if abs(lhs - xu * x.pair(v)) > eps:
                        return False
    return True


def is_inf_character(x: TensorSeries, level: int, ctx: QuasiShuffleContext,
                     tol: float = 1e-9) -> bool:
    """True when <x,1> = 0 and x annihilates all products of nonempty words
    with joint weighted length <= level (primitivity for the dual product)."""
    eps = _predicate_tol(x, tol)
    if abs(x.pair(())) > eps:
        return False
    alph = ctx.alphabet
    for gu in range(1, level):
        for u in alph.words_of_weight(gu):
            for gv in range(gu, level - gu + 1):
                for v in alph.words_of_weight(gv):
                    val = sum(c * x.pair(w) for w, c in ctx.word_product(u, v).items())
                    if abs(val) > eps:
                        return False
    return True


# -- Hoffman exponential / logarithm -------------------------------------------

_COMPOSITIONS_CACHE: dict = {}


def compositions(n: int) -> List[Tuple[int, ...]]:
    """Compositions of n in colexicographic order, memoized; capped at
    MAX_COMPOSITION_ORDER to guard the 2^(n-1) blow-up."""
    if n > MAX_COMPOSITION_ORDER:
        raise PreconditionError(
            f"compositions of order {n} exceed the cap {MAX_COMPOSITION_ORDER}")
    if n in _COMPOSITIONS_CACHE:
        return _COMPOSITIONS_CACHE[n]
    if n == 0:
        out = [()]
    else:
        out = [comp + (last,) for last in range(1, n + 1)
               for comp in compositions(n - last)]
        out.sort(key=lambda c: tuple(reversed(c)))
    _COMPOSITIONS_CACHE[n] = out
    return out


def _blocked_word(alphabet: Alphabet, w: Word, comp: Tuple[int, ...]) -> Optional[Word]:
    """Bracket consecutive blocks of w with sizes given by the composition;
    any zero bracket annihilates the whole term."""
    out = []
    pos = 0
    for size in comp:
        letter = alphabet.bracket_word(w[pos:pos + size])
        if letter is None:
            return None
        out.append(letter)
        pos += size
    return tuple(out)


def hoffman_exp(w: Iterable[str], ctx: QuasiShuffleContext) -> TensorSeries:
    """Hoffman exponential of a word: sum over compositions I of 1/I! times
    the block-bracketed word.  An isomorphism from the shuffle onto the
    quasi-shuffle algebra."""
    w = tuple(w)
    alph = ctx.alphabet
    out: dict = {}
    for comp in compositions(len(w)):
        bw = _blocked_word(alph, w, comp)
        if bw is None:
            continue
        coeff = 1.0
        for size in comp:
            coeff /= math.factorial(size)
        out[bw] = out.get(bw, 0.0) + coeff
    return TensorSeries(alph, alph.wlen(w), out)


def hoffman_log(w: Iterable[str], ctx: QuasiShuffleContext) -> TensorSeries:
    """Hoffman logarithm of a word: sum over compositions I of
    (-1)^(|w|-|I|) / (i_1 ... i_m) times the block-bracketed word."""
    w = tuple(w)
    alph = ctx.alphabet
    out: dict = {}
    for comp in compositions(len(w)):
        bw = _blocked_word(alph, w, comp)
        if bw is None:
            continue
        coeff = (-1.0) ** (len(w) - len(comp))
        for size in comp:
            coeff /= size
        out[bw] = out.get(bw, 0.0) + coeff
    return TensorSeries(alph, alph.wlen(w), out)


def hoffman_exp_series(x: TensorSeries, ctx: QuasiShuffleContext) -> TensorSeries:
    """Linear extension of the Hoffman exponential to series."""
    out = TensorSeries.zero(x.alphabet, x.level)
    for w, c in x.items():
        out = out + hoffman_exp(w, ctx).with_level(x.level) * c
    return out


def hoffman_log_series(x: TensorSeries, ctx: QuasiShuffleContext) -> TensorSeries:
    """Linear extension of the Hoffman logarithm to series."""
    out = TensorSeries.zero(x.alphabet, x.level)
    for w, c in x.items():
        out = out + hoffman_log(w, ctx).with_level(x.level) * c
    return out


# -- adjoint maps ---------------------------------------------------------------


class _AdjointCache:
    """Per-alphabet cache of letter decompositions: for each letter a, all
    words whose iterated bracket equals a.  Each such word shares a's weight,
    so the enumeration is finite."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._decomp: dict = {}

    def decompositions(self, a: str) -> List[Word]:
        if a in self._decomp:
            return self._decomp[a]
        alph = self.alphabet
        target_weight = alph.weight(a)
        candidates = [x for x in alph.letters if alph.weight(x) <= target_weight]

        found: List[Word] = []

        def rec(prefix: tuple, weight_left: int):
            if weight_left == 0:
                if prefix and alph.bracket_word(prefix) == a:
                    found.append(prefix)
                return
            for x in candidates:
                wx = alph.weight(x)
                if wx <= weight_left:
                    rec(prefix + (x,), weight_left - wx)

        rec((), target_weight)
        self._decomp[a] = found
        return found


_ADJOINT_CACHES: dict = {}


def _adjoint_cache(alphabet: Alphabet) -> _AdjointCache:
    cache = _ADJOINT_CACHES.get(alphabet)
    if cache is None:
        cache = _ADJOINT_CACHES[alphabet] = _AdjointCache(alphabet)
    return cache


def _adjoint_letter(alphabet: Alphabet, a: str, sign: bool) -> TensorSeries:
    """Adjoint image of a letter: sum over bracket decompositions a_1..a_n of
    a with coefficient 1/n! (exp adjoint) or (-1)^(n-1)/n (log adjoint)."""
    cache = _adjoint_cache(alphabet)
    out: dict = {}
    for word in cache.decompositions(a):
        n = len(word)
        c = ((-1.0) ** (n - 1)) / n if sign else 1.0 / math.factorial(n)
        out[word] = out.get(word, 0.0) + c
    return TensorSeries(alphabet, alphabet.weight(a), out)


def _adjoint_series(x: TensorSeries, use_log: bool) -> TensorSeries:
    alph = x.alphabet
    out = TensorSeries.zero(alph, x.level)
    letter_images = {a: _adjoint_letter(alph, a, use_log) for a in alph.letters}
    for w, c in x.items():
        term = TensorSeries.unit(alph, x.level) * c
        for a in w:
            term = concat(term, letter_images[a], x.level)
        out = out + term
    return out


def hoffman_exp_adjoint(x: TensorSeries, ctx: QuasiShuffleContext) -> TensorSeries:
    """Adjoint of the Hoffman exponential: letterwise decomposition sums with
    1/n! weights, extended multiplicatively over concatenation.  Grade
    preserving, and an automorphism of the concatenation algebra."""
    return _adjoint_series(x, use_log=False)


def hoffman_log_adjoint(x: TensorSeries, ctx: QuasiShuffleContext) -> TensorSeries:
    """Adjoint of the Hoffman logarithm; inverse of `hoffman_exp_adjoint` up
    to the series level."""
    return _adjoint_series(x, use_log=True)
