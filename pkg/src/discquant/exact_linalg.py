"""Exact scalar and matrix arithmetic over ``QQ`` and ``QQ[h]``.

Scalars over the rationals are :class:`fractions.Fraction`.  Polynomials in
the deformation parameter ``h`` are :class:`HPoly`.  :class:`ExactMatrix`
holds a rectangular array over one of the two rings and supports the
operations needed downstream: products, rank over the fraction field,
Smith normal form with transform certificates, and reduction of vectors
modulo the image of a matrix in a deterministic cokernel basis.

Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

__all__ = [
    "QQ",
    "QQH",
    "HPoly",
    "HBAR",
    "ExactMatrix",
    "SmithResult",
    "CokernelReducer",
    "NoUnitPivot",
    "as_rational",
    "format_rational",
    "parse_rational",
    "smith_normal_form",
    "solve_modulo_image",
    "solve_unimodular",
    "rank",
]

QQ = "QQ"
QQH = "QQ[h]"


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused on purpose.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    if "." in s or "e" in s.lower():
        raise ValueError(f"rational must be written as p/q, got {s!r}")
    return Fraction(s)


def format_rational(q: Fraction) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class HPoly:
    """Polynomial in ``h`` with rational coefficients.

    ``coeffs[k]`` is the coefficient of ``h**k``; trailing zeros are
    stripped so the zero polynomial has an empty coefficient tuple.

    >>> p = HPoly([1, 0, Fraction(1, 2)])
    >>> str(p * p)
    '1/4*h^4 + h^2 + 1'
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, cs: list) -> "HPoly":
        while cs and cs[-1] == 0:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "HPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "HPoly":
        return cls([0] * k + [c])

    # basic predicates -------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def monic(self) -> "HPoly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return HPoly._raw([c / lc for c in self.coeffs])

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, k: int = 1) -> "HPoly":
        """Multiply by ``h**k``."""
        if not self.coeffs:
            return self
        return HPoly._raw([Fraction(0)] * k + list(self.coeffs))

    # arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "HPoly":
        if isinstance(other, HPoly):
            return other
        return HPoly((as_rational(other),))

    def __add__(self, other):
        try:
            o = HPoly._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return HPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return HPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            o = HPoly._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return HPoly._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, HPoly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return HPoly._raw([])
            if len(b) == 1:
                s = b[0]
                return HPoly._raw([c * s for c in a])
            if len(a) == 1:
                s = a[0]
                return HPoly._raw([c * s for c in b])
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return HPoly._raw(out)
        try:
            s = as_rational(other)
        except TypeError:
            return NotImplemented
        return HPoly._raw([c * s for c in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = HPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        """Division by a nonzero scalar or an exact polynomial divisor."""
        if isinstance(other, HPoly):
            q, r = divmod(self, other)
            if not r.is_zero():
                raise ArithmeticError(f"{other} does not divide {self}")
            return q
        s = as_rational(other)
        return HPoly._raw([c / s for c in self.coeffs])

    def __divmod__(self, other):
        o = HPoly._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        db = len(o.coeffs) - 1
        lc = o.coeffs[-1]
        if len(rem) - 1 < db:
            return HPoly._raw([]), self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lc
            quot[k] = c
            if c:
                for i, b in enumerate(o.coeffs):
                    rem[k + i] -= c * b
        return HPoly._raw(quot), HPoly._raw(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "HPoly") -> bool:
        if self.is_zero():
            return HPoly._coerce(other).is_zero()
        return (HPoly._coerce(other) % self).is_zero()

    # comparison / display ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, HPoly):
            return self.coeffs == other.coeffs
        try:
            o = as_rational(other)
        except TypeError:
            return NotImplemented
        if o == 0:
            return not self.coeffs
        return self.coeffs == (o,)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs) if len(self.coeffs) != 1 else hash(self.coeffs[0])
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"HPoly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            if k == 0:
                body = format_rational(a)
            else:
                mon = "h" if k == 1 else f"h^{k}"
                body = mon if a == 1 else f"{format_rational(a)}*{mon}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "HPoly":
        if isinstance(data, (int, str)):
            return cls((as_rational(data),))
        return cls(as_rational(c) for c in data)


HBAR = HPoly((0, 1))
_ZERO_H = HPoly(())
_ONE_H = HPoly((1,))


# ---------------------------------------------------------------------------
# ring helpers; these let one algorithm serve both QQ and QQ[h]


def _zero(ring):
    return _ZERO_H if ring == QQH else Fraction(0)


def _one(ring):
    return _ONE_H if ring == QQH else Fraction(1)


def _is_zero(x) -> bool:
    return x == 0 if isinstance(x, Fraction) else x.is_zero()


def _is_unit(x) -> bool:
    return x != 0 if isinstance(x, Fraction) else x.is_unit()


def _norm(x) -> int:
    """Euclidean size: -1 for zero, otherwise 0 for QQ or the h-degree."""
    if isinstance(x, Fraction):
        return -1 if x == 0 else 0
    return x.degree


def _divmod(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b, Fraction(0)
    return divmod(HPoly._coerce(a), HPoly._coerce(b))


def _inv_unit(x):
    if isinstance(x, Fraction):
        return 1 / x
    if not x.is_unit():
        raise ArithmeticError(f"{x} is not a unit")
    return HPoly._raw([1 / x.coeffs[0]])


def _lead_inverse(x):
    """Unit that makes ``x`` monic (or 1 over QQ)."""
    if isinstance(x, Fraction):
        return 1 / x
    return HPoly._raw([1 / x.lead])


def _coerce_entry(x, ring):
    if ring == QQH:
        return x if isinstance(x, HPoly) else HPoly((as_rational(x),))
    if isinstance(x, HPoly):
        if not x.is_constant():
            raise TypeError("polynomial entry in a QQ matrix")
        return x.coeff(0)
    return as_rational(x)


class ExactMatrix:
    """Immutable rectangular matrix over ``QQ`` or ``QQ[h]``.

    The ring is inferred from the entries unless given: any :class:`HPoly`
    entry makes the matrix a ``QQ[h]`` matrix.
    """

    __slots__ = ("nrows", "ncols", "ring", "_rows")

    def __init__(self, rows: Sequence[Sequence], ring: str | None = None, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if ring is None:
            ring = QQH if any(isinstance(x, HPoly) for r in rows for x in r) else QQ
        if ring not in (QQ, QQH):
            raise ValueError(f"unknown ring {ring!r}")
        if rows:
            n = len(rows[0])
            if any(len(r) != n for r in rows):
                raise ValueError("ragged matrix")
            if ncols is not None and ncols != n:
                raise ValueError("ncols disagrees with row length")
        else:
            n = ncols or 0
        self.nrows = len(rows)
        self.ncols = n
        self.ring = ring
        self._rows = tuple(tuple(_coerce_entry(x, ring) for x in r) for r in rows)

    # constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, m: int, n: int, ring: str = QQ) -> "ExactMatrix":
        z = _zero(ring)
        return cls._trusted([[z] * n for _ in range(m)], ring, n)

    @classmethod
    def identity(cls, n: int, ring: str = QQ) -> "ExactMatrix":
        z, o = _zero(ring), _one(ring)
        return cls._trusted([[o if i == j else z for j in range(n)] for i in range(n)], ring, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int, ring: str | None = None) -> "ExactMatrix":
        if ring is None:
            ring = QQH if any(isinstance(x, HPoly) for c in cols for x in c) else QQ
        rows = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return cls(rows, ring, ncols=len(cols))

    @classmethod
    def _trusted(cls, rows, ring, ncols):
        m = object.__new__(cls)
        m.nrows = len(rows)
        m.ncols = ncols
        m.ring = ring
        m._rows = tuple(tuple(r) for r in rows)
        return m

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def rows(self) -> list[list]:
        return [list(r) for r in self._rows]

    def is_zero(self) -> bool:
        return all(_is_zero(x) for r in self._rows for x in r)

    def to_ring(self, ring: str) -> "ExactMatrix":
        if ring == self.ring:
            return self
        return ExactMatrix(self._rows, ring, ncols=self.ncols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._trusted(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.ring,
            self.nrows,
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix._trusted([[self._rows[i][j] for j in cols] for i in rows], self.ring, len(cols))

    def map(self, f, ring: str | None = None) -> "ExactMatrix":
        return ExactMatrix([[f(x) for x in r] for r in self._rows], ring or self.ring, ncols=self.ncols)

    def at_h(self, value=0) -> "ExactMatrix":
        """Specialise a QQ[h] matrix at ``h = value``."""
        if self.ring == QQ:
            return self
        return ExactMatrix._trusted([[x(value) for x in r] for r in self._rows], QQ, self.ncols)

    # arithmetic -------------------------------------------------------
    def _join_ring(self, other: "ExactMatrix"):
        ring = QQH if QQH in (self.ring, other.ring) else QQ
        return self.to_ring(ring), other.to_ring(ring), ring

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b, ring = self._join_ring(other)
        return ExactMatrix._trusted(
            [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a._rows, b._rows)], ring, self.ncols
        )

    def __neg__(self):
        return ExactMatrix._trusted([[-x for x in r] for r in self._rows], self.ring, self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "ExactMatrix":
        ring = QQH if isinstance(s, HPoly) or self.ring == QQH else QQ
        a = self.to_ring(ring)
        s = _coerce_entry(s, ring)
        return ExactMatrix._trusted([[s * x for x in r] for r in a._rows], ring, self.ncols)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            a, b, ring = self._join_ring(other)
            z = _zero(ring)
            bcols = [b.column(j) for j in range(b.ncols)]
            out = []
            for r in a._rows:
                nz = [(k, x) for k, x in enumerate(r) if not _is_zero(x)]
                row = []
                for col in bcols:
                    acc = z
                    for k, x in nz:
                        y = col[k]
                        if not _is_zero(y):
                            acc = acc + x * y
                    row.append(acc)
                out.append(row)
            return ExactMatrix._trusted(out, ring, b.ncols)
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        """Matrix times a column vector given as a sequence."""
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for matrix with {self.ncols} columns")
        ring = self.ring
        if any(isinstance(x, HPoly) for x in v):
            ring = QQH
        vv = [_coerce_entry(x, ring) for x in v]
        z = _zero(ring)
        out = []
        for r in self._rows:
            acc = z
            for x, y in zip(r, vv):
                if not _is_zero(x) and not _is_zero(y):
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(x == y for ra, rb in zip(self._rows, other._rows) for x, y in zip(ra, rb))

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._rows)
        return f"ExactMatrix<{self.ring} {self.nrows}x{self.ncols}>[{body}]"

    def to_json(self):
        if self.ring == QQH:
            return [[x.to_json() for x in r] for r in self._rows]
        return [[format_rational(x) for x in r] for r in self._rows]

    @classmethod
    def block(cls, blocks: Sequence[Sequence["ExactMatrix"]]) -> "ExactMatrix":
        """Assemble a block matrix; every block row must share heights."""
        ring = QQH if any(b.ring == QQH for br in blocks for b in br) else QQ
        rows = []
        ncols = sum(b.ncols for b in blocks[0]) if blocks else 0
        for br in blocks:
            h = br[0].nrows
            if any(b.nrows != h for b in br):
                raise ValueError("block heights disagree")
            if sum(b.ncols for b in br) != ncols:
                raise ValueError("block widths disagree")
            conv = [b.to_ring(ring) for b in br]
            for i in range(h):
                row = []
                for b in conv:
                    row.extend(b._rows[i])
                rows.append(row)
        return cls._trusted(rows, ring, ncols)


# ---------------------------------------------------------------------------
# rank


def rank(A: ExactMatrix) -> int:
    """Rank over the fraction field of the entry ring.

    Fraction-free elimination, deliberately independent of the Smith code
    so the two can be checked against each other.
    """
    rows = [list(r) for r in A._rows]
    m, n = A.nrows, A.ncols
    r = 0
    for c in range(n):
        piv = None
        best = None
        for i in range(r, m):
            x = rows[i][c]
            if not _is_zero(x) and (best is None or _norm(x) < best):
                piv, best = i, _norm(x)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, m):
            x = rows[i][c]
            if _is_zero(x):
                continue
            rows[i] = [p * y - x * z for y, z in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


# ---------------------------------------------------------------------------
# Smith normal form


class SmithResult:
    """Smith form ``U @ A @ V == diag(invariant_factors)`` with certificates.

    ``U_inv`` and ``V_inv`` are the inverses of the transforms, kept so that
    callers can move between bases without inverting anything.
    """

    def __init__(self, A, U, U_inv, V, V_inv, diagonal, rank):
        self.A = A
        self.U = U
        self.U_inv = U_inv
        self.V = V
        self.V_inv = V_inv
        self.diagonal = tuple(diagonal)
        self.rank = rank

    @property
    def invariant_factors(self) -> tuple:
        """Nonzero invariant factors, each dividing the next."""
        return self.diagonal[: self.rank]

    @property
    def D(self) -> ExactMatrix:
        ring = self.A.ring
        z = _zero(ring)
        m, n = self.A.shape
        rows = [[z] * n for _ in range(m)]
        for i, d in enumerate(self.diagonal):
            rows[i][i] = d
        return ExactMatrix._trusted(rows, ring, n)

    def is_free(self) -> bool:
        """All invariant factors are units, i.e. the cokernel is torsion free."""
        return all(_is_unit(d) for d in self.invariant_factors)

    def verify(self) -> bool:
        m, n = self.A.shape
        ring = self.A.ring
        ok = (self.U @ self.A @ self.V) == self.D
        ok = ok and (self.U @ self.U_inv) == ExactMatrix.identity(m, ring)
        ok = ok and (self.V @ self.V_inv) == ExactMatrix.identity(n, ring)
        fs = self.invariant_factors
        for a, b in zip(fs, fs[1:]):
            if not _divides(a, b):
                return False
        return ok


def _divides(a, b) -> bool:
    if _is_zero(a):
        return _is_zero(b)
    return _is_zero(_divmod(b, a)[1])


def smith_normal_form(A: ExactMatrix) -> SmithResult:
    """Smith normal form over ``QQ`` or ``QQ[h]`` by Euclidean reduction.

    >>> h = HBAR
    >>> res = smith_normal_form(ExactMatrix([[h, 1], [0, h]]))
    >>> [str(f) for f in res.invariant_factors]
    ['1', 'h^2']
    """
    ring = A.ring
    m, n = A.shape
    S = [list(r) for r in A._rows]
    U = [list(r) for r in ExactMatrix.identity(m, ring)._rows]
    Ui = [list(r) for r in ExactMatrix.identity(m, ring)._rows]
    V = [list(r) for r in ExactMatrix.identity(n, ring)._rows]
    Vi = [list(r) for r in ExactMatrix.identity(n, ring)._rows]

    # elementary operations, each applied to S and to the certificates
    def row_swap(i, j):
        if i == j:
            return
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        if i == j:
            return
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_add(dst, src, q):
        # row_dst += q * row_src
        S[dst] = [x + q * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
        for r in Ui:
            r[src] = r[src] - q * r[dst]

    def col_add(dst, src, q):
        # col_dst += q * col_src
        for r in S:
            r[dst] = r[dst] + q * r[src]
        for r in V:
            r[dst] = r[dst] + q * r[src]
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def row_scale(i, u):
        ui = _inv_unit(u)
        S[i] = [u * x for x in S[i]]
        U[i] = [u * x for x in U[i]]
        for r in Ui:
            r[i] = r[i] * ui

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block goes to (t, t)
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = S[i][j]
                if not _is_zero(x) and (best is None or _norm(x) < best[0]):
                    best = (_norm(x), i, j)
        if best is None:
            break
        _, i0, j0 = best
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            changed = False
            p = S[t][t]
            for i in range(t + 1, m):
                x = S[i][t]
                if _is_zero(x):
                    continue
                q, r = _divmod(x, p)
                row_add(i, t, -q)
                if not _is_zero(r):
                    row_swap(t, i)
                    changed = True
                    break
            if changed:
                continue
            p = S[t][t]
            for j in range(t + 1, n):
                x = S[t][j]
                if _is_zero(x):
                    continue
                q, r = _divmod(x, p)
                col_add(j, t, -q)
                if not _is_zero(r):
                    col_swap(t, j)
                    changed = True
                    break
            if changed:
                continue
            # row and column t are clear; enforce divisibility of the rest
            p = S[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if not _divides(p, S[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, _one(ring))
        row_scale(t, _lead_inverse(S[t][t]))
        t += 1

    diag = [S[i][i] for i in range(min(m, n))]
    rk = sum(1 for d in diag if not _is_zero(d))
    return SmithResult(
        A,
        ExactMatrix._trusted(U, ring, m),
        ExactMatrix._trusted(Ui, ring, m),
        ExactMatrix._trusted(V, ring, n),
        ExactMatrix._trusted(Vi, ring, n),
        diag,
        rk,
    )


# ---------------------------------------------------------------------------
# cokernels with unit pivots


class NoUnitPivot(ArithmeticError):
    """Raised when an image cannot be put in echelon form with unit pivots.

    Over ``QQ[h]`` this happens exactly when the row-priority echelon
    meets a non-unit; the caller should fall back to Smith form.
    """


class CokernelReducer:
    """Reduced column echelon of ``A`` with unit pivots, used to reduce
    vectors modulo ``image(A)``.

    Rows are visited in ``row_order`` (default: natural order); each visited
    row that has a unit entry among the unused columns becomes a pivot row.
    The rows that never become pivots, in visiting order, index the cokernel
    basis.  When every pivot is a unit the quotient is free on those rows.
    """

    def __init__(self, A: ExactMatrix, row_order: Sequence[int] | None = None):
        ring = A.ring
        m, n = A.shape
        order = list(range(m)) if row_order is None else list(row_order)
        if sorted(order) != list(range(m)):
            raise ValueError("row_order must be a permutation of the rows")
        cols = [list(A.column(j)) for j in range(n)]
        # T tracks the column operations: echelon columns = A @ T columns
        one, zero = _one(ring), _zero(ring)
        T = [[one if i == j else zero for i in range(n)] for j in range(n)]
        free = list(range(n))
        pivots: list[tuple[int, int]] = []
        basis_rows: list[int] = []
        for r in order:
            choice = None
            for j in free:
                x = cols[j][r]
                if _is_unit(x):
                    choice = j
                    break
            if choice is None:
                if any(not _is_zero(cols[j][r]) for j in free):
                    raise NoUnitPivot(f"row {r} has only non-unit entries in the remaining columns")
                basis_rows.append(r)
                continue
            j = choice
            free.remove(j)
            inv = _inv_unit(cols[j][r])
            cols[j] = [inv * x for x in cols[j]]
            T[j] = [inv * x for x in T[j]]
            for k in range(n):
                if k == j:
                    continue
                x = cols[k][r]
                if _is_zero(x):
                    continue
                cols[k] = [a - x * b for a, b in zip(cols[k], cols[j])]
                T[k] = [a - x * b for a, b in zip(T[k], T[j])]
            pivots.append((r, j))
        self.A = A
        self.ring = ring
        self.row_order = order
        self.pivots = pivots
        self.basis_rows = basis_rows
        self._cols = cols
        self._T = T

    @property
    def image_rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Sequence) -> tuple[tuple, tuple]:
        """Return ``(coords, preimage)`` with ``v = A @ preimage + sum coords[i] e_{basis_rows[i]}``."""
        m, n = self.A.shape
        if len(v) != m:
            raise ValueError(f"vector of length {len(v)} for a matrix with {m} rows")
        ring = self.ring
        if any(isinstance(x, HPoly) for x in v):
            ring = QQH
        w = [_coerce_entry(x, ring) for x in v]
        x = [_zero(ring)] * n
        for r, j in self.pivots:
            c = w[r]
            if _is_zero(c):
                continue
            w = [a - c * b for a, b in zip(w, self._cols[j])]
            x = [a + c * b for a, b in zip(x, self._T[j])]
        for r, _ in self.pivots:
            assert _is_zero(w[r])
        coords = tuple(w[r] for r in self.basis_rows)
        return coords, tuple(x)

    def coordinates(self, v: Sequence) -> tuple:
        return self.reduce(v)[0]

    def in_image(self, v: Sequence) -> bool:
        return all(_is_zero(c) for c in self.coordinates(v))

    def basis_vectors(self) -> list[tuple]:
        """Standard basis vectors of the cokernel basis rows."""
        out = []
        for r in self.basis_rows:
            e = [_zero(self.ring)] * self.A.nrows
            e[r] = _one(self.ring)
            out.append(tuple(e))
        return out


def solve_modulo_image(v: Sequence, A: ExactMatrix, row_order: Sequence[int] | None = None) -> tuple:
    """Coordinates of the class of ``v`` in ``coker(A)``.

    The basis is the set of non-pivot rows of the unit-pivot reduced column
    echelon of ``A`` (see :class:`CokernelReducer`).  The result is the zero
    vector exactly when ``v`` lies in the image.
    """
    if len(v) != A.nrows:
        raise ValueError(f"vector of length {len(v)} for a matrix with {A.nrows} rows")
    return CokernelReducer(A, row_order).coordinates(v)


def solve_unimodular(M: ExactMatrix, b: Sequence) -> tuple:
    """Solve ``M x = b`` for square ``M`` whose elimination needs only unit pivots.

    Raises :class:`NoUnitPivot` if some column has no unit entry below the
    current row, which for our use means ``M`` is not invertible over the
    entry ring.
    """
    n = M.nrows
    if M.ncols != n:
        raise ValueError("solve_unimodular needs a square matrix")
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    ring = QQH if M.ring == QQH or any(isinstance(x, HPoly) for x in b) else QQ
    rows = [list(M.to_ring(ring)._rows[i]) + [_coerce_entry(b[i], ring)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if _is_unit(rows[i][c])), None)
        if piv is None:
            raise NoUnitPivot(f"no unit pivot in column {c}")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = _inv_unit(rows[c][c])
        rows[c] = [inv * x for x in rows[c]]
        for i in range(n):
            if i != c and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return tuple(r[n] for r in rows)
