"""Concrete presentations for the pvb / pfb / pb families.

pvb_n is generated by r_ij (i != j) with the 6-term relators y_ijk and the
commutators c_ij^kl; pfb_n is the same family on the descending generators
r_ij (i < j) obtained by the substitution r_ji -> -r_ij; pb_n is generated
by the symmetric a_ij (i < j) with relators [a_ij, a_ik + a_jk] and
[a_ij, a_kl].

Group-level relators live in the free algebra on the group generators R_ij;
the symbol set {Y_ijk, C_ij^kl} generates the free relator module, with
group and quadratic images related by shift expansion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

from .exact_core import (
    FreeElement,
    Generator,
    commutator,
    span_membership,
)
from .quad_algebra import QuadraticPresentation, c_relator, y_relator
from .report import VerificationReport


class Family(str, Enum):
    PVB = "pvb"
    PFB = "pfb"
    PB = "pb"


@dataclass(frozen=True)
class AlgebraFamily:
    """A family tag plus strand count."""

    family: Family
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"strand count must be >= 2, got {self.n}")

    @classmethod
    def parse(cls, name: str, n: int) -> "AlgebraFamily":
        return cls(Family(name.lower()), n)

    @property
    def generators(self) -> list[Generator]:
        if self.family is Family.PVB:
            return [Generator(i, j) for i, j
                    in itertools.permutations(range(1, self.n + 1), 2)]
        return [Generator(i, j) for i, j
                in itertools.combinations(range(1, self.n + 1), 2)]

    def __str__(self) -> str:
        return f"{self.family.value}_{self.n}"


@dataclass(frozen=True, order=True)
class RelatorSymbol:
    """A formal relator symbol: Y_ijk, or C_ij^kl with the smaller ordered
    pair first (C is antisymmetric under swapping its pairs, so only the
    canonical symbol is kept)."""

    kind: str
    indices: tuple

    @classmethod
    def y(cls, i: int, j: int, k: int) -> "RelatorSymbol":
        if len({i, j, k}) != 3 or min(i, j, k) < 1:
            raise ValueError(f"bad Y indices {(i, j, k)}")
        return cls("Y", (i, j, k))

    @classmethod
    def c(cls, ij, kl) -> tuple["RelatorSymbol", int]:
        """Canonical C symbol and the sign relating it to C_ij^kl."""
        ij, kl = tuple(ij), tuple(kl)
        if len({*ij, *kl}) != 4 or min(*ij, *kl) < 1:
            raise ValueError(f"bad C indices {(ij, kl)}")
        if ij < kl:
            return cls("C", (ij, kl)), 1
        return cls("C", (kl, ij)), -1

    def group_image(self, n: int) -> FreeElement:
        """delta_K of the symbol: the group-level relator in F."""
        if self.kind == "Y":
            i, j, k = self.indices
            w1 = (Generator(i, j), Generator(i, k), Generator(j, k))
            w2 = (Generator(j, k), Generator(i, k), Generator(i, j))
        else:
            ij, kl = self.indices
            w1 = (Generator(*ij), Generator(*kl))
            w2 = (Generator(*kl), Generator(*ij))
        return FreeElement(n, {w1: Fraction(1), w2: Fraction(-1)})

    def quad_image(self, n: int) -> FreeElement:
        """The degree-2 part of the shift-expanded group relator."""
        if self.kind == "Y":
            return y_relator(n, *self.indices)
        return c_relator(n, *self.indices)

    def __str__(self) -> str:
        if self.kind == "Y":
            return "Y_" + "".join(map(str, self.indices))
        (i, j), (k, l) = self.indices
        return f"C_{i}{j}^{k}{l}"


def relator_symbols(n: int) -> list[RelatorSymbol]:
    """Canonical symbol set for pvb_n: one per ordered triple and one per
    unordered pair of disjoint ordered pairs."""
    syms = [RelatorSymbol.y(*t)
            for t in itertools.permutations(range(1, n + 1), 3)]
    pairs = list(itertools.permutations(range(1, n + 1), 2))
    for ij, kl in itertools.combinations(pairs, 2):
        if len({*ij, *kl}) == 4:
            syms.append(RelatorSymbol.c(ij, kl)[0])
    return sorted(set(syms))


def group_relators(n: int) -> dict[RelatorSymbol, FreeElement]:
    """The symbol map Y_ijk -> R_ij R_ik R_jk - R_jk R_ik R_ij,
    C_ij^kl -> R_ij R_kl - R_kl R_ij."""
    return {s: s.group_image(n) for s in relator_symbols(n)}


def _substitute_descending(rel: FreeElement) -> FreeElement:
    """r_ji -> -r_ij for i < j, onto the descending generator set."""
    terms: dict = {}
    for w, c in rel.items():
        sign = 1
        word = []
        for g in w:
            if g.i > g.j:
                sign = -sign
                word.append(Generator(g.j, g.i))
            else:
                word.append(g)
        word = tuple(word)
        terms[word] = terms.get(word, Fraction(0)) + sign * c
    return FreeElement(rel.n, terms)


def _normalize_primitive(rel: FreeElement) -> FreeElement:
    """Scale to primitive integer coefficients with positive leading term."""
    den = 1
    for c in rel.terms().values():
        den = den * c.denominator // gcd(den, c.denominator)
    ints = {w: int(c * den) for w, c in rel.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = next(iter(ints.values()))
    s = -1 if lead < 0 else 1
    return FreeElement(rel.n, {w: Fraction(s * v, g) for w, v in ints.items()})


def quadratic_relators(fam: AlgebraFamily) -> list[FreeElement]:
    """The canonical, linearly independent quadratic relator list.

    pvb: all y_ijk plus all canonical c_ij^kl.  pfb: the pvb list with
    r_ji -> -r_ij substituted and duplicates (up to scale) removed.  pb: two
    of the three 6-term-style relators per unordered triple (the third is
    their negated sum) plus the disjoint commutators.
    """
    n = fam.n
    if fam.family is Family.PVB:
        return [s.quad_image(n) for s in relator_symbols(n)]
    if fam.family is Family.PFB:
        seen: dict = {}
        for s in relator_symbols(n):
            img = _substitute_descending(s.quad_image(n))
            if img:
                img = _normalize_primitive(img)
                seen[frozenset(img.items())] = img
        return sorted(seen.values(), key=lambda r: sorted(r.terms()))
    # pb
    rels = []
    a = FreeElement.generator
    for (i, j, k) in itertools.combinations(range(1, n + 1), 3):
        rels.append(commutator(a(n, i, j), a(n, i, k) + a(n, j, k)))
        rels.append(commutator(a(n, i, k), a(n, i, j) + a(n, j, k)))
    for ij, kl in itertools.combinations(
            itertools.combinations(range(1, n + 1), 2), 2):
        if len({*ij, *kl}) == 4:
            rels.append(commutator(a(n, *ij), a(n, *kl)))
    return rels


def presentation(fam: AlgebraFamily) -> QuadraticPresentation:
    return QuadraticPresentation(fam.n, fam.generators, quadratic_relators(fam))


def load_presentation(data) -> QuadraticPresentation:
    """Presentation from JSON: {"n", "family"} or explicit generator form."""
    if "family" in data:
        return presentation(AlgebraFamily.parse(data["family"], int(data["n"])))
    return QuadraticPresentation.from_json(data)


def psi_image_check(n: int) -> VerificationReport:
    """Substitute a_ij -> r_ij + r_ji into every pb relator and certify
    membership of each image in the span of the pvb relators."""
    if n < 3:
        raise ValueError("psi check needs n >= 3")
    pvb_rels = quadratic_relators(AlgebraFamily(Family.PVB, n))
    basis = [r.terms() for r in pvb_rels]

    def psi(i, j):
        return (FreeElement.generator(n, i, j)
                + FreeElement.generator(n, j, i))

    images = []
    for (i, j, k) in itertools.combinations(range(1, n + 1), 3):
        images.append(commutator(psi(i, j), psi(i, k) + psi(j, k)))
        images.append(commutator(psi(i, k), psi(i, j) + psi(j, k)))
        images.append(commutator(psi(j, k), psi(i, j) + psi(i, k)))
    for ij, kl in itertools.combinations(
            itertools.combinations(range(1, n + 1), 2), 2):
        if len({*ij, *kl}) == 4:
            images.append(commutator(psi(*ij), psi(*kl)))

    failures = []
    for t, img in enumerate(images):
        if span_membership(img.terms(), basis) is None:
            failures.append(t)
    return VerificationReport(
        check="psi-compatibility",
        params={"n": n},
        expected={"members": len(images)},
        actual={"members": len(images) - len(failures)},
        payload={"pb_relators": len(images), "failing_indices": failures},
    )
