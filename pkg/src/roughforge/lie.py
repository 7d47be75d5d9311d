"""Free Lie algebra machinery over a weighted alphabet: Lyndon-word bases
with standard-factorization bracketing, per-grade orthonormalization under
the word inner product, and membership tests via primitivity.

The free Lie algebra here is generated by all letters of the alphabet
(including any bracket letters), graded by weighted length.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple

import numpy as np

from .algebra import Alphabet, TensorSeries, Word, commutator
from .errors import DegeneracyError, PreconditionError
from .hopf import QuasiShuffleContext, hoffman_log_adjoint, is_inf_character


def lyndon_words(alphabet: Alphabet, max_weight: int) -> List[Word]:
    """All Lyndon words of weighted length <= max_weight, graded then
    lexicographic.  Duval's generation runs on letter indices; the weighted
    length bound also bounds the plain length since weights are >= 1."""
    d = len(alphabet.letters)
    max_len = max_weight  # each letter weighs at least 1
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        if w[-1] < d:
            word = tuple(alphabet.letters[i] for i in w)
            if alphabet.wlen(word) <= max_weight:
                out.append(word)
            m = len(w)
            while len(w) < max_len:
                w.append(w[-m])
        else:
            w.pop()
            continue
        while w and w[-1] == d - 1:
            w.pop()
    out.sort(key=alphabet.word_key)
    return out


def _is_lyndon(word: Tuple[int, ...]) -> bool:
    return all(word < word[k:] for k in range(1, len(word)))


def standard_factorization(alphabet: Alphabet, word: Word) -> Tuple[Word, Word]:
    """Split a Lyndon word w = uv at its longest proper Lyndon suffix v."""
    if len(word) < 2:
        raise PreconditionError("cannot factor a word of length < 2")
    idx = tuple(alphabet.index(a) for a in word)
    for k in range(1, len(word)):
        if _is_lyndon(idx[k:]):
            return word[:k], word[k:]
    raise PreconditionError(f"{word} is not a Lyndon word")


def bracket_expansion(alphabet: Alphabet, word: Word, level: Optional[int] = None) -> TensorSeries:
    """Tensor-series expansion of the standard bracketing of a Lyndon word,
    e.g. "12" -> e_12 - e_21."""
    if level is None:
        level = alphabet.wlen(word)
    if len(word) == 1:
        return TensorSeries.letter(alphabet, level, word[0])
    u, v = standard_factorization(alphabet, word)
    return commutator(bracket_expansion(alphabet, u, level),
                      bracket_expansion(alphabet, v, level), level)


class LyndonBasis:
    """Graded basis of the free Lie algebra up to a weighted level: pairs of
    (lyndon word, bracketed tensor series), ordered by grade then word."""

    def __init__(self, alphabet: Alphabet, level: int):
        if level < 1:
            raise PreconditionError("basis level must be >= 1")
        self.alphabet = alphabet
        self.level = int(level)
        self.elements: List[Tuple[Word, TensorSeries]] = [
            (w, bracket_expansion(alphabet, w, self.level))
            for w in lyndon_words(alphabet, self.level)
        ]

    def words(self) -> List[Word]:
        return [w for w, _ in self.elements]

    def series(self) -> List[TensorSeries]:
        return [x for _, x in self.elements]

    def by_grade(self, grade: int) -> List[Tuple[Word, TensorSeries]]:
        return [(w, x) for w, x in self.elements if self.alphabet.wlen(w) == grade]

    def __len__(self) -> int:
        return len(self.elements)


def lyndon_basis(alphabet: Alphabet, level: int) -> LyndonBasis:
    """Lyndon-word basis of the grade <= level part of the free Lie algebra."""
    return LyndonBasis(alphabet, level)


def _grade_matrix(alphabet: Alphabet, elements: List[TensorSeries], grade: int) -> np.ndarray:
    words = alphabet.words_of_weight(grade)
    index = {w: j for j, w in enumerate(words)}
    mat = np.zeros((len(elements), len(words)))
    for i, x in enumerate(elements):
        for w, c in x.items():
            mat[i, index[w]] = c
    return mat


def orthonormal_lie_basis(basis: LyndonBasis) -> List[TensorSeries]:
    """Gram-Schmidt within each grade under the word inner product (distinct
    words are orthonormal); one re-orthogonalization pass for stability.
    Mixed-grade inner products vanish, so grades never interact."""
    alphabet = basis.alphabet
    out: List[TensorSeries] = []
    for grade in range(1, basis.level + 1):
        block = [x for w, x in basis.by_grade(grade)]
        if not block:
            continue
        words = alphabet.words_of_weight(grade)
        mat = _grade_matrix(alphabet, block, grade)
        ortho: List[np.ndarray] = []
        for row in mat:
            v = row.copy()
            for _ in range(2):  # classical GS plus one re-orthogonalization
                for q in ortho:
                    v -= np.dot(q, v) * q
            norm = np.linalg.norm(v)
            if norm < 1e-12:
                raise DegeneracyError(f"numerically dependent Lie elements at grade {grade}")
            v /= norm
            ortho.append(v)
        for v in ortho:
            coeffs = {w: v[j] for j, w in enumerate(words) if abs(v[j]) > 0.0}
            out.append(TensorSeries(alphabet, basis.level, coeffs))
    return out


def is_lie(x: TensorSeries, level: int, ctx: QuasiShuffleContext, tol: float = 1e-9) -> bool:
    """Lie membership at a truncation level: primitivity with respect to the
    context's product (shuffle for plain Lie elements, quasi-shuffle for
    their Hoffman-twisted counterparts)."""
    return is_inf_character(x, level, ctx, tol)


class QuasiLieBasis:
    """Image of a Lyndon basis under the Hoffman-logarithm adjoint; a graded
    basis of the quasi-shuffle Lie algebra."""

    def __init__(self, basis: LyndonBasis, ctx: QuasiShuffleContext):
        self.alphabet = basis.alphabet
        self.level = basis.level
        self.elements: List[Tuple[Word, TensorSeries]] = [
            (w, hoffman_log_adjoint(x, ctx)) for w, x in basis.elements
        ]

    def words(self) -> List[Word]:
        return [w for w, _ in self.elements]

    def series(self) -> List[TensorSeries]:
        return [x for _, x in self.elements]

    def __len__(self) -> int:
        return len(self.elements)


def quasi_lie_basis(basis: LyndonBasis, ctx: QuasiShuffleContext) -> QuasiLieBasis:
    return QuasiLieBasis(basis, ctx)


def orthonormalize_series(alphabet: Alphabet, elements: Iterable[TensorSeries],
                          level: int) -> List[TensorSeries]:
    """Grade-blocked Gram-Schmidt for an arbitrary graded family (used for
    quasi Lie bases, whose elements are homogeneous in the weighted grading)."""
    by_grade: dict = {}
    for x in elements:
        grades = {alphabet.wlen(w) for w, _ in x.items()}
        if len(grades) != 1:
            raise PreconditionError("orthonormalization expects grade-homogeneous elements")
        by_grade.setdefault(grades.pop(), []).append(x)
    out: List[TensorSeries] = []
    for grade in sorted(by_grade):
        words = alphabet.words_of_weight(grade)
        mat = _grade_matrix(alphabet, by_grade[grade], grade)
        ortho: List[np.ndarray] = []
        for row in mat:
            v = row.copy()
            for _ in range(2):
                for q in ortho:
                    v -= np.dot(q, v) * q
            norm = np.linalg.norm(v)
            if norm < 1e-12:
                raise DegeneracyError(f"numerically dependent elements at grade {grade}")
            v /= norm
            ortho.append(v)
        for v in ortho:
            coeffs = {w: v[j] for j, w in enumerate(words) if abs(v[j]) > 0.0}
            out.append(TensorSeries(alphabet, level, coeffs))
    return out
