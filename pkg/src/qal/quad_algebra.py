"""Quadratic presentations, quadratic duals, and graded dimension counts.

A quadratic presentation is a generator list (a basis of V) together with a
linearly independent list of homogeneous degree-2 relations spanning
R inside V (x) V.  The quadratic algebra is TV/<R> and its dual is
TV*/<R-perp>; both graded dimensions are computed by exact rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact_core import (
    FreeElement,
    Generator,
    SparseMatrix,
    commutator,
    parse_token,
)
from .report import VerificationReport

#: Largest tensor-space dimension a single computation may touch by default.
DEFAULT_BUDGET = 200_000


class SizeBudgetError(RuntimeError):
    """A computation would exceed the configured tensor-space budget."""

    def __init__(self, dimension: int, budget: int):
        self.dimension = dimension
        self.budget = budget
        super().__init__(
            f"tensor space of dimension {dimension} exceeds budget {budget}")


class UnsupportedDegreeError(NotImplementedError):
    """The Koszul-sequence specialization is only implemented at m = 3."""


def _check_budget(dim: int, budget: int):
    if dim > budget:
        raise SizeBudgetError(dim, budget)


class QuadraticPresentation:
    """A finite quadratic presentation: V-basis plus degree-2 relations.

    The relation list must be homogeneous of word-length 2 and linearly
    independent; both are enforced at construction.
    """

    def __init__(self, n: int, generators: Sequence[Generator],
                 relations: Sequence[FreeElement]):
        self.n = n
        self.generators = [Generator(*g) for g in generators]
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generators")
        gset = set(self.generators)
        for r in relations:
            if r.n != n:
                raise ValueError("relation over wrong ambient n")
            if not r or not r.is_homogeneous(2):
                raise ValueError(f"relation not homogeneous of degree 2: {r!r}")
            for w in r.terms():
                if w[0] not in gset or w[1] not in gset:
                    raise ValueError(f"relation uses generator outside V: {w}")
        self.relations = list(relations)
        if relations:
            m = SparseMatrix([r.terms() for r in relations])
            if m.rank() != len(self.relations):
                raise ValueError("relation list is linearly dependent")

    @property
    def dim_v(self) -> int:
        return len(self.generators)

    @property
    def dim_r(self) -> int:
        return len(self.relations)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": [g.token() for g in self.generators],
            "relations": [r.to_json() for r in self.relations],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QuadraticPresentation":
        n = int(data["n"])
        gens = [parse_token(t) for t in data["generators"]]
        rels = [FreeElement.from_json(n, r) for r in data["relations"]]
        return cls(n, gens, rels)

    def __repr__(self) -> str:
        return (f"QuadraticPresentation(n={self.n}, dim V={self.dim_v}, "
                f"dim R={self.dim_r})")


class DualPresentation(QuadraticPresentation):
    """The quadratic dual: same-shape presentation on dual generators.

    Relations span the annihilator of the primal relation space, so
    dim R + dim R-perp = (dim V)^2; checked at construction.
    """

    def __init__(self, primal: QuadraticPresentation,
                 relations: Sequence[FreeElement]):
        super().__init__(primal.n, primal.generators, relations)
        self.primal = primal
        if primal.dim_r + self.dim_r != primal.dim_v ** 2:
            raise ValueError("annihilator has wrong dimension")


@dataclass(frozen=True)
class PositionSubspace:
    """The subspace V^(x)i (x) R (x) V^(x)(m-i-2) inside V^(x)m."""

    presentation: QuadraticPresentation
    m: int
    i: int

    def __post_init__(self):
        if not (0 <= self.i <= self.m - 2):
            raise ValueError(f"position {self.i} invalid for degree {self.m}")

    def vectors(self) -> Iterable[dict]:
        """Spanning basis vectors, keyed by word labels of V^(x)m."""
        gens = self.presentation.generators
        for left in itertools.product(gens, repeat=self.i):
            for right in itertools.product(gens, repeat=self.m - self.i - 2):
                for rel in self.presentation.relations:
                    yield {left + w + right: c for w, c in rel.items()}

    @property
    def dimension(self) -> int:
        # relations are independent, so the listed vectors are a basis
        nv = self.presentation.dim_v
        return self.presentation.dim_r * nv ** (self.m - 2)


def annihilator(p: QuadraticPresentation) -> DualPresentation:
    """The dual presentation: relations spanning R-perp in V* (x) V*.

    The dual generators reuse the primal generator labels (we write r_ij for
    the dual of r_ij throughout).
    """
    pair_labels = [w for w in itertools.product(p.generators, repeat=2)]
    if not p.relations:
        rels = [FreeElement.monomial(p.n, w) for w in pair_labels]
        return DualPresentation(p, rels)
    cols = {}
    for w in pair_labels:
        col = {}
        for a, rel in enumerate(p.relations):
            c = rel.coeff(w)
            if c:
                col[a] = c
        cols[w] = col
    m = SparseMatrix.from_columns(cols, column_order=pair_labels)
    rels = [FreeElement(p.n, vec) for vec in m.nullspace()]
    return DualPresentation(p, rels)


def relation_blocks_rank(p: QuadraticPresentation, m: int,
                         budget: int = DEFAULT_BUDGET) -> int:
    """Exact rank of sum over i of the position subspaces inside V^(x)m."""
    _check_budget(p.dim_v ** m, budget)
    vectors = []
    for i in range(0, m - 1):
        vectors.extend(PositionSubspace(p, m, i).vectors())
    if not vectors:
        return 0
    return SparseMatrix(vectors).rank()


def graded_dim(p: QuadraticPresentation, m: int,
               budget: int = DEFAULT_BUDGET) -> int:
    """dim A^m for A = TV/<R>, by exact rank of the degree-m relation space."""
    if m < 0:
        raise ValueError("degree must be >= 0")
    if m == 0:
        return 1
    if m == 1:
        return p.dim_v
    _check_budget(p.dim_v ** m, budget)
    return p.dim_v ** m - relation_blocks_rank(p, m, budget)


def deg3_intersection(p: QuadraticPresentation,
                      budget: int = DEFAULT_BUDGET) -> list[FreeElement]:
    """Exact basis of R (x) V  intersect  V (x) R inside V^(x)3.

    Computed as the kernel of the difference map on R(x)V (+) V(x)R; the
    dimension equals dim of the dual algebra in degree 3.
    """
    _check_budget(p.dim_v ** 3, budget)
    cols = {}
    for a, rel in enumerate(p.relations):
        for g in p.generators:
            cols[(0, a, g)] = {w + (g,): c for w, c in rel.items()}
            cols[(1, g, a)] = {(g,) + w: -c for w, c in rel.items()}
    if not cols:
        return []
    order = sorted(cols)
    mat = SparseMatrix.from_columns(cols, column_order=order)
    basis = []
    for vec in mat.nullspace():
        terms: dict = {}
        for (side, x, y), c in vec.items():
            if side != 0:
                continue
            for w, rc in p.relations[x].items():
                word = w + (y,)
                terms[word] = terms.get(word, Fraction(0)) + c * rc
        basis.append(FreeElement(p.n, terms))
    return basis


def koszul_resolution_rank(p: QuadraticPresentation, m: int,
                           budget: int = DEFAULT_BUDGET):
    """The degree-m specialization of the dual-driven syzygy sequence.

    Only the m = 3 case (the one the quadraticity criterion consumes) is
    implemented; higher degrees raise UnsupportedDegreeError.
    """
    if m != 3:
        raise UnsupportedDegreeError(
            f"syzygy sequence implemented at m=3 only, got m={m}")
    return deg3_intersection(p, budget)


# -- the pvb relator shapes, shared with the family and checker modules -----


def y_relator(n: int, i: int, j: int, k: int) -> FreeElement:
    """The 6-term relator [r_ij,r_ik] + [r_ij,r_jk] + [r_ik,r_jk]."""
    if len({i, j, k}) != 3:
        raise ValueError(f"indices must be distinct: {(i, j, k)}")
    r = FreeElement.generator
    return (commutator(r(n, i, j), r(n, i, k))
            + commutator(r(n, i, j), r(n, j, k))
            + commutator(r(n, i, k), r(n, j, k)))


def c_relator(n: int, ij, kl) -> FreeElement:
    """The commutator relator [r_ij, r_kl] for disjoint index pairs."""
    (i, j), (k, l) = ij, kl
    if len({i, j, k, l}) != 4:
        raise ValueError(f"indices must be distinct: {(ij, kl)}")
    r = FreeElement.generator
    return commutator(r(n, i, j), r(n, k, l))


def dual_tilde_delta(w, n: int) -> FreeElement:
    """The relator-cataloguing isomorphism on degree-2 dual monomials.

    Sends the 2-chain i->j->k to the 6-term relator y_ijk and the disjoint
    pair (i,j),(k,l) to [r_ij, r_kl]; extended linearly.  Non-basis input is
    first reduced to the chain-gang basis.
    """
    from .graph_basis import WedgeMonomial, prune_normal_form

    if isinstance(w, WedgeMonomial):
        combo = {w: Fraction(1)}
    else:
        combo = {m: Fraction(c) for m, c in dict(w).items()}
    out = FreeElement.zero(n)
    for mono, coeff in combo.items():
        if mono.degree != 2:
            raise ValueError(f"expected degree-2 monomial, got {mono}")
        for red, rc in prune_normal_form(mono).items():
            e1, e2 = red.edges
            if e1.j == e2.i:
                img = y_relator(n, e1.i, e1.j, e2.j)
            elif e2.j == e1.i:
                img = y_relator(n, e2.i, e2.j, e1.j)
            else:
                img = c_relator(n, e1, e2)
            out = out + coeff * rc * img
    return out


def koszul_euler_check(p: QuadraticPresentation, max_degree: int,
                       budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Alternating-sum test on graded dimensions of A and its dual.

    For a Koszul algebra the Hilbert series satisfy h_dual(-t) h(t) = 1, so
    every residual sum_k (-1)^k dim A-dual^k dim A^(m-k) with 1 <= m <= D must
    vanish.  This is a necessary condition; the quadratic Groebner basis of
    the graph-basis module is the actual Koszulness certificate.
    """
    dual = annihilator(p)
    a = [graded_dim(p, m, budget) for m in range(max_degree + 1)]
    b = [graded_dim(dual, m, budget) for m in range(max_degree + 1)]
    residuals = {}
    for m in range(1, max_degree + 1):
        residuals[m] = sum((-1) ** k * b[k] * a[m - k] for k in range(m + 1))
    return VerificationReport(
        check="koszul-euler",
        params={"n": p.n, "dim_v": p.dim_v, "max_degree": max_degree},
        expected={m: 0 for m in residuals},
        actual=residuals,
        payload={"primal_dims": a, "dual_dims": b},
    )
