"""The Weyl algebra of an antisymmetric pairing, in PBW normal form.

Generators ``e_0, ..., e_{d-1}`` satisfy ``e_i e_j - e_j e_i = h c_ij``.
An element is a dict from exponent tuples (the ordered monomial
``e_0^{a_0} ... e_{d-1}^{a_{d-1}}``) to :class:`HPoly` coefficients.
Normal forms come from the rewriting rule ``e_j e_i -> e_i e_j + h c_ji``
for ``j > i``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from .exact_linalg import HPoly, as_rational

__all__ = ["WeylAlgebra", "UnknownGenerator"]

_ZERO = HPoly(())
_ONE = HPoly.const(1)


class UnknownGenerator(ValueError):
    pass


def _add_into(acc: dict, key, coeff: HPoly):
    v = acc.get(key, _ZERO) + coeff
    if v.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = v


class WeylAlgebra:
    def __init__(self, c: Sequence[Sequence]):
        self.c = tuple(tuple(as_rational(x) for x in r) for r in c)
        self.d = len(self.c)
        for i in range(self.d):
            for j in range(self.d):
                if self.c[i][j] != -self.c[j][i]:
                    raise ValueError("pairing must be antisymmetric")
        self._nf_left = lru_cache(maxsize=None)(self._normal_form_word_left)
        self._nf_right = lru_cache(maxsize=None)(self._normal_form_word_right)

    # words -----------------------------------------------------------
    def _check(self, word):
        for g in word:
            if not isinstance(g, int) or not 0 <= g < self.d:
                raise UnknownGenerator(f"unknown generator {g!r}")

    def _sorted_key(self, word) -> tuple:
        exps = [0] * self.d
        for g in word:
            exps[g] += 1
        return tuple(exps)

    def _normal_form_word_left(self, word: tuple) -> dict:
        """Rewrite at the leftmost descent."""
        for k in range(len(word) - 1):
            j, i = word[k], word[k + 1]
            if j > i:
                swapped = word[:k] + (i, j) + word[k + 2 :]
                out = dict(self._nf_left(swapped))
                if self.c[j][i]:
                    for key, val in self._nf_left(word[:k] + word[k + 2 :]).items():
                        _add_into(out, key, val * HPoly((0, self.c[j][i])))
                return out
        return {self._sorted_key(word): _ONE}

    def _normal_form_word_right(self, word: tuple) -> dict:
        """Rewrite at the rightmost descent."""
        for k in range(len(word) - 2, -1, -1):
            j, i = word[k], word[k + 1]
            if j > i:
                swapped = word[:k] + (i, j) + word[k + 2 :]
                out = dict(self._nf_right(swapped))
                if self.c[j][i]:
                    for key, val in self._nf_right(word[:k] + word[k + 2 :]).items():
                        _add_into(out, key, val * HPoly((0, self.c[j][i])))
                return out
        return {self._sorted_key(word): _ONE}

    def normal_form(self, word: Sequence[int], coeff=_ONE, strategy: str = "left") -> dict:
        word = tuple(word)
        self._check(word)
        coeff = coeff if isinstance(coeff, HPoly) else HPoly.const(coeff)
        nf = self._nf_left(word) if strategy == "left" else self._nf_right(word)
        out: dict = {}
        for key, val in nf.items():
            _add_into(out, key, val * coeff)
        return out

    # elements --------------------------------------------------------
    @staticmethod
    def word_of(exps: Sequence[int]) -> tuple:
        return tuple(g for g, a in enumerate(exps) for _ in range(a))

    def one(self) -> dict:
        return {(0,) * self.d: _ONE}

    def gen(self, i: int) -> dict:
        self._check((i,))
        return {tuple(int(k == i) for k in range(self.d)): _ONE}

    def vector(self, v: Sequence) -> dict:
        out: dict = {}
        for i, x in enumerate(v):
            x = as_rational(x)
            if x:
                _add_into(out, tuple(int(k == i) for k in range(self.d)), HPoly.const(x))
        return out

    def add(self, x: Mapping, y: Mapping) -> dict:
        out = dict(x)
        for k, v in y.items():
            _add_into(out, k, v)
        return out

    def scale(self, x: Mapping, s) -> dict:
        s = s if isinstance(s, HPoly) else HPoly.const(s)
        out: dict = {}
        for k, v in x.items():
            _add_into(out, k, v * s)
        return out

    def sub(self, x: Mapping, y: Mapping) -> dict:
        return self.add(x, self.scale(y, -1))

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for k1, v1 in x.items():
            for k2, v2 in y.items():
                for key, val in self._nf_left(self.word_of(k1) + self.word_of(k2)).items():
                    _add_into(out, key, val * v1 * v2)
        return out

    def commutator(self, x: Mapping, y: Mapping) -> dict:
        return self.sub(self.mul(x, y), self.mul(y, x))

    def degree(self, x: Mapping) -> int:
        return max((sum(k) for k in x), default=-1)

    def pbw_basis(self, N: int) -> list[tuple]:
        """Exponent tuples of total degree <= N: unit first, then by degree, descending lex."""
        out = [(0,) * self.d]
        for n in range(1, N + 1):
            level = [e for e in _compositions(n, self.d)]
            level.sort(reverse=True)
            out.extend(level)
        return out

    def classical_limit(self, x: Mapping) -> dict:
        """Set h = 0; the result is a polynomial in commuting variables."""
        out = {}
        for k, v in x.items():
            c0 = v.coeff(0)
            if c0:
                out[k] = c0
        return out

    def to_json(self, x: Mapping) -> list:
        return [{"exponents": list(k), "coeff": str(v)} for k, v in sorted(x.items())]


def _compositions(n: int, parts: int):
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for a in range(n, -1, -1):
        for rest in _compositions(n - a, parts - 1):
            yield (a,) + rest
