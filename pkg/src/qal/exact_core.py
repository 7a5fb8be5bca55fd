"""Exact rational arithmetic in a free algebra, plus sparse linear algebra.

Everything here is exact: coefficients are `fractions.Fraction`, elimination
is fraction-free (integer rows kept primitive), and all orderings are
canonical so that results are reproducible byte-for-byte.

The free algebra is generated by indexed symbols r_ij (i != j); a word is a
tuple of generators and an element is a finite rational combination of words.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Sequence


class AmbientMismatchError(ValueError):
    """Raised when combining elements over different ambient index sets."""


class Generator(NamedTuple):
    """An indexed generator r_ij with i != j (1-based vertex indices)."""

    i: int
    j: int

    def token(self) -> str:
        return f"r{self.i}_{self.j}"

    def __repr__(self) -> str:
        return self.token()


def gen(i: int, j: int, n: int | None = None) -> Generator:
    """Validated Generator constructor."""
    if i == j:
        raise ValueError(f"generator indices must differ, got ({i}, {j})")
    if i < 1 or j < 1:
        raise ValueError(f"generator indices are 1-based, got ({i}, {j})")
    if n is not None and (i > n or j > n):
        raise ValueError(f"generator ({i}, {j}) out of range for n={n}")
    return Generator(i, j)


def parse_token(tok: str) -> Generator:
    """Parse an "r{i}_{j}" token."""
    if not tok.startswith("r") or "_" not in tok:
        raise ValueError(f"bad generator token {tok!r}")
    a, b = tok[1:].split("_", 1)
    return gen(int(a), int(b))


#: A word is a tuple of generators; the empty word is the unit.
Word = tuple[Generator, ...]


def word_key(w: Sequence) -> tuple:
    """Canonical term order: degree first, then lex on index pairs."""
    return (len(w), tuple(w))


def all_generators(n: int) -> list[Generator]:
    """All n(n-1) generators r_ij, i != j, in canonical (i, j) order."""
    return [Generator(i, j) for i, j in itertools.permutations(range(1, n + 1), 2)]


class FreeElement:
    """Sparse rational combination of words in the free algebra on [n].

    Immutable; no zero coefficients are stored; iteration over terms is in
    canonical word order.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Word, Fraction] | Iterable = ()):
        self.n = n
        d: dict[Word, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            w = tuple(Generator(*g) for g in w)
            c = Fraction(c)
            if c:
                c0 = d.get(w)
                c = c if c0 is None else c0 + c
                if c:
                    d[w] = c
                elif w in d:
                    del d[w]
        for w in d:
            for g in w:
                if g.i == g.j or not (1 <= g.i <= n and 1 <= g.j <= n):
                    raise ValueError(f"generator {g} invalid for n={n}")
        self._terms = {w: d[w] for w in sorted(d, key=word_key)}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "FreeElement":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "FreeElement":
        return cls(n, {(): Fraction(1)})

    @classmethod
    def generator(cls, n: int, i: int, j: int) -> "FreeElement":
        return cls(n, {(gen(i, j, n),): Fraction(1)})

    @classmethod
    def monomial(cls, n: int, word: Iterable, coeff=1) -> "FreeElement":
        return cls(n, {tuple(Generator(*g) for g in word): Fraction(coeff)})

    # -- mapping-ish interface --------------------------------------------

    def terms(self) -> dict[Word, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, word) -> Fraction:
        return self._terms.get(tuple(Generator(*g) for g in word), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, FreeElement):
            return self.n == other.n and self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "FreeElement"):
        if self.n != other.n:
            raise AmbientMismatchError(
                f"ambient mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other: "FreeElement") -> "FreeElement":
        self._check(other)
        d = dict(self._terms)
        for w, c in other._terms.items():
            d[w] = d.get(w, Fraction(0)) + c
        return FreeElement(self.n, d)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        self._check(other)
        d = dict(self._terms)
        for w, c in other._terms.items():
            d[w] = d.get(w, Fraction(0)) - c
        return FreeElement(self.n, d)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.n, {w: -c for w, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, FreeElement):
            self._check(other)
            d: dict[Word, Fraction] = {}
            for wa, ca in self._terms.items():
                for wb, cb in other._terms.items():
                    w = wa + wb
                    d[w] = d.get(w, Fraction(0)) + ca * cb
            return FreeElement(self.n, d)
        c = Fraction(other)
        return FreeElement(self.n, {w: c * v for w, v in self._terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    # -- grading -----------------------------------------------------------

    def degree(self) -> int:
        """Top degree; -1 for the zero element."""
        return max((len(w) for w in self._terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {len(w) for w in self._terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def homogeneous_part(self, d: int) -> "FreeElement":
        return FreeElement(
            self.n, {w: c for w, c in self._terms.items() if len(w) == d})

    def truncate(self, max_degree: int) -> "FreeElement":
        return FreeElement(
            self.n, {w: c for w, c in self._terms.items() if len(w) <= max_degree})

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "terms": [
                {"word": [g.token() for g in w], "coeff": str(c)}
                for w, c in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, n: int, data: Mapping) -> "FreeElement":
        terms = {}
        for t in data["terms"]:
            w = tuple(parse_token(tok) for tok in t["word"])
            terms[w] = terms.get(w, Fraction(0)) + Fraction(t["coeff"])
        return cls(n, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for w, c in self._terms.items():
            word = "*".join(g.token() for g in w) if w else "1"
            bits.append(f"{c}*{word}" if c != 1 or not w else word)
        return " + ".join(bits)


def word_multiply(a: FreeElement, b: FreeElement) -> FreeElement:
    """Bilinear concatenation product in the free algebra."""
    return a * b


def commutator(a: FreeElement, b: FreeElement) -> FreeElement:
    return a * b - b * a


def shift_expand(p: FreeElement, max_degree: int) -> FreeElement:
    """Substitute every generator g by (g + 1) and truncate above max_degree.

    This converts a presentation in group-like generators R_ij into one in the
    shifted generators (R_ij - 1); the output words reuse the same index pairs
    for the shifted symbols.  Each input word of length m expands to its 2^m
    subwords (order preserved).
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    out: dict[Word, Fraction] = {}
    for w, c in p.items():
        m = len(w)
        for r in range(0, min(m, max_degree) + 1):
            for keep in itertools.combinations(range(m), r):
                sub = tuple(w[t] for t in keep)
                out[sub] = out.get(sub, Fraction(0)) + c
    return FreeElement(p.n, out)


# ---------------------------------------------------------------------------
# sparse exact linear algebra
# ---------------------------------------------------------------------------


def _strip_content(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class _Echelon:
    """Incremental sparse echelon form with fraction-free integer rows.

    Rows are primitive integer vectors keyed by column index; each stored row
    is pivoted at its smallest column, so the pivot column set is exactly the
    set of leading columns of the row space under the canonical column order.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    def reduce(self, row: dict[int, int]) -> tuple[dict[int, int], int | None]:
        """Fully reduce leading entries; return (residual, pivot column)."""
        row = dict(row)
        while row:
            c = min(row)
            p = self.pivots.get(c)
            if p is None:
                return row, c
            a, b = p[c], row[c]
            new = {col: a * v for col, v in row.items()}
            for col, v in p.items():
                w = new.get(col, 0) - b * v
                if w:
                    new[col] = w
                elif col in new:
                    del new[col]
            row = new
        return row, None

    def insert(self, row: dict[int, int]) -> int | None:
        """Insert a row; return its pivot column, or None if dependent."""
        red, c = self.reduce(row)
        if c is not None:
            self.pivots[c] = _strip_content(red)
        return c

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def back_substitute(self, free_col: int) -> dict[int, Fraction]:
        """The unique kernel vector with 1 at free_col, 0 at other free cols."""
        x: dict[int, Fraction] = {free_col: Fraction(1)}
        for pc in sorted(self.pivots, reverse=True):
            row = self.pivots[pc]
            s = Fraction(0)
            for col, v in row.items():
                if col != pc and col in x:
                    s += v * x[col]
            if s:
                x[pc] = -s / row[pc]
        return x


def _int_row(vec, label_index) -> tuple[int, dict[int, int]]:
    """Scale a sparse rational vector to integers; return (denominator, row)."""
    items = vec.items() if isinstance(vec, Mapping) else vec
    den = 1
    pairs = []
    for lab, c in items:
        c = Fraction(c)
        if c:
            pairs.append((label_index[lab], c))
            den = den * c.denominator // gcd(den, c.denominator)
    return den, {t: int(c * den) for t, c in pairs}


def _to_int_rows(vectors, label_index) -> list[dict[int, int]]:
    return [_int_row(vec, label_index)[1] for vec in vectors]


class SparseMatrix:
    """A sparse rational matrix with explicit row and column labels.

    Stored row-major: each row is a sparse vector keyed by column label.
    Column order is canonical (sorted labels) unless given explicitly, and
    fixes the pivot order for all eliminations.
    """

    def __init__(self, rows: Iterable[Mapping], columns: Sequence | None = None,
                 row_labels: Sequence | None = None):
        self.rows = [dict(r) for r in rows]
        if columns is None:
            columns = sorted({lab for r in self.rows for lab in r})
        self.columns = list(columns)
        self.row_labels = list(row_labels) if row_labels is not None \
            else list(range(len(self.rows)))
        self._index = {lab: t for t, lab in enumerate(self.columns)}
        self._echelon: _Echelon | None = None

    @classmethod
    def from_columns(cls, cols: Mapping, column_order: Sequence | None = None
                     ) -> "SparseMatrix":
        """Build from a mapping column-label -> sparse column vector.

        Rows of the result are the equation index set (union of the column
        vectors' keys); nullspace of the result is taken in column coordinates.
        """
        if column_order is None:
            column_order = sorted(cols)
        row_labels = sorted({r for v in cols.values() for r in v})
        rows: dict = {lab: {} for lab in row_labels}
        for clab in column_order:
            for rlab, v in cols[clab].items():
                if v:
                    rows[rlab][clab] = v
        return cls([rows[lab] for lab in row_labels], columns=list(column_order),
                   row_labels=row_labels)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.columns))

    def _ensure_echelon(self) -> _Echelon:
        if self._echelon is None:
            ech = _Echelon()
            for row in _to_int_rows(self.rows, self._index):
                ech.insert(row)
            self._echelon = ech
        return self._echelon

    def rank(self) -> int:
        return self._ensure_echelon().rank

    def nullspace(self) -> list[dict]:
        """Canonical basis of {x : Mx = 0}, x keyed by column labels.

        Vectors are primitive integer-scaled, leading (canonical-first)
        nonzero coordinate positive, sorted by their defining free column.
        """
        ech = self._ensure_echelon()
        kernel = []
        for f in range(len(self.columns)):
            if f in ech.pivots:
                continue
            x = ech.back_substitute(f)
            den = 1
            for v in x.values():
                den = den * v.denominator // gcd(den, v.denominator)
            ix = {c: int(v * den) for c, v in x.items() if v}
            g = 0
            for v in ix.values():
                g = gcd(g, v)
            lead = ix[min(ix)]
            s = -1 if lead < 0 else 1
            kernel.append({self.columns[c]: Fraction(s * v, g)
                           for c, v in sorted(ix.items())})
        return kernel

    def in_row_span(self, vec: Mapping) -> bool:
        """Whether vec lies in the row space (exact reduction test)."""
        for lab, c in vec.items():
            if Fraction(c) and lab not in self._index:
                return False
        ech = self._ensure_echelon()
        row = _to_int_rows([vec], self._index)[0]
        _, pivot = ech.reduce(row)
        return pivot is None

    def determinant(self) -> Fraction:
        """Exact determinant via fraction-free (Bareiss) elimination."""
        m, n = self.shape
        if m != n:
            raise ValueError(f"determinant of non-square {m}x{n} matrix")
        if n == 0:
            return Fraction(1)
        den = 1
        for r in self.rows:
            for v in r.values():
                v = Fraction(v)
                den = den * v.denominator // gcd(den, v.denominator)
        a = [[int(Fraction(r.get(c, 0)) * den) for c in self.columns]
             for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for t in range(k + 1, n):
                    if a[t][k]:
                        a[k], a[t] = a[t], a[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            for t in range(k + 1, n):
                for c in range(k + 1, n):
                    a[t][c] = (a[t][c] * a[k][k] - a[t][k] * a[k][c]) // prev
                a[t][k] = 0
            prev = a[k][k]
        return Fraction(sign * a[n - 1][n - 1], den ** n)


def nullspace(matrix: SparseMatrix) -> list[dict]:
    """Exact rational basis of the kernel, in column coordinates."""
    return matrix.nullspace()


def span_membership(v: Mapping, basis: Sequence[Mapping]):
    """Decompose v over basis; return list of Fractions, or None if not in span.

    The returned coefficients satisfy v == sum(coeffs[t] * basis[t]) exactly.
    For a linearly independent basis the decomposition is unique.
    """
    labels = sorted({lab for b in basis for lab in b} | set(v))
    index = {lab: t for t, lab in enumerate(labels)}
    nv = len(labels)
    # Tracking columns sit after all value columns so they never pivot ahead
    # of them; each row's tracking entry carries the denominator that scaled
    # it to integers, so the combination is recorded against the original
    # rational vectors.  A row whose value part vanished records a dependency.
    ech = _Echelon()
    for t, b in enumerate(basis):
        den, row = _int_row(b, index)
        row[nv + 1 + t] = den
        ech.insert(row)
    den_v, vrow = _int_row(v, index)
    vrow[nv] = den_v
    red, _ = ech.reduce(vrow)
    if any(c < nv for c in red):
        return None
    alpha = red.get(nv, 0)
    if alpha == 0:
        raise RuntimeError("tracking column lost")  # pragma: no cover
    return [Fraction(-red.get(nv + 1 + t, 0), alpha) for t in range(len(basis))]
