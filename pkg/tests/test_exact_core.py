import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qal.exact_core import (
    AmbientMismatchError,
    FreeElement,
    Generator,
    SparseMatrix,
    all_generators,
    commutator,
    gen,
    nullspace,
    parse_token,
    shift_expand,
    span_membership,
    word_key,
    word_multiply,
)

R12 = Generator(1, 2)
R21 = Generator(2, 1)
R13 = Generator(1, 3)
R23 = Generator(2, 3)
R34 = Generator(3, 4)


def fe(n, *terms):
    return FreeElement(n, {tuple(w): Fraction(c) for w, c in terms})


# -- generators and words ----------------------------------------------------

def test_generator_validation():
    assert gen(1, 2, n=4) == (1, 2)
    with pytest.raises(ValueError):
        gen(2, 2)
    with pytest.raises(ValueError):
        gen(0, 1)
    with pytest.raises(ValueError):
        gen(1, 5, n=4)
    assert parse_token("r10_2") == Generator(10, 2)
    assert Generator(3, 4).token() == "r3_4"


def test_word_order_is_degree_then_lex():
    words = [(R12, R12), (), (R34,), (R12,), (R21,)]
    assert sorted(words, key=word_key) == [
        (), (R12,), (R21,), (R34,), (R12, R12)]


def test_all_generators_count():
    assert len(all_generators(4)) == 12
    assert all_generators(2) == [Generator(1, 2), Generator(2, 1)]


# -- free algebra ------------------------------------------------------------

def test_monomial_concatenation():
    a = FreeElement.generator(4, 1, 2)
    b = FreeElement.generator(4, 3, 4)
    assert (a * b).terms() == {(R12, R34): Fraction(1)}


def test_unit_is_identity():
    one = FreeElement.one(4)
    x = fe(4, ((R12, R34), 2), ((R21,), -3), ((), 5))
    assert one * x == x
    assert x * one == x


def test_distributivity_example():
    # (r12 - r21)(r12 + r21) expands with all four signed words
    a = fe(3, ((R12,), 1), ((R21,), -1))
    b = fe(3, ((R12,), 1), ((R21,), 1))
    assert word_multiply(a, b).terms() == {
        (R12, R12): Fraction(1), (R12, R21): Fraction(1),
        (R21, R12): Fraction(-1), (R21, R21): Fraction(-1)}


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatchError):
        FreeElement.generator(3, 1, 2) * FreeElement.generator(4, 1, 2)
    with pytest.raises(AmbientMismatchError):
        FreeElement.one(3) + FreeElement.one(4)


def test_zero_coefficients_dropped():
    e = fe(3, ((R12,), 1)) - fe(3, ((R12,), 1))
    assert not e
    assert e.terms() == {}
    assert e.degree() == -1


def test_homogeneous_parts():
    x = fe(4, ((), 1), ((R12,), 2), ((R12, R34), 3))
    assert x.homogeneous_part(1).terms() == {(R12,): Fraction(2)}
    assert x.truncate(1).terms() == {(): Fraction(1), (R12,): Fraction(2)}
    assert not x.is_homogeneous()
    assert x.homogeneous_part(2).is_homogeneous(2)


def test_json_round_trip():
    x = fe(4, ((R12, R34), Fraction(3, 2)), ((R21,), -1))
    data = x.to_json()
    assert {"word": ["r1_2", "r3_4"], "coeff": "3/2"} in data["terms"]
    assert FreeElement.from_json(4, data) == x


gens3 = all_generators(3)


@st.composite
def free_elements(draw, n=3, max_len=3, max_terms=4):
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        length = draw(st.integers(0, max_len))
        word = tuple(draw(st.sampled_from(gens3)) for _ in range(length))
        terms.append((word, draw(st.integers(-4, 4))))
    return FreeElement(n, terms)


@settings(max_examples=60, deadline=None)
@given(free_elements(), free_elements(), free_elements())
def test_multiplication_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40, deadline=None)
@given(free_elements())
def test_multiplication_unital(a):
    one = FreeElement.one(3)
    assert one * a == a == a * one


# -- shift expansion ---------------------------------------------------------

def test_shift_expand_commutator_truncation():
    # R12 R34 - R34 R12 expands to the bare commutator of the shifted symbols
    c = commutator(FreeElement.generator(4, 1, 2), FreeElement.generator(4, 3, 4))
    assert shift_expand(c, 2) == c
    assert shift_expand(c, 1) == FreeElement.zero(4)


def test_shift_expand_eight_term_relation():
    # R12 R13 R23 - R23 R13 R12, expanded to degree 3, keeps the two cubic
    # words plus the six quadratic commutator words
    y = fe(3, ((R12, R13, R23), 1), ((R23, R13, R12), -1))
    got = shift_expand(y, 3)
    expect = fe(
        3,
        ((R12, R13, R23), 1), ((R23, R13, R12), -1),
        ((R12, R13), 1), ((R12, R23), 1), ((R13, R23), 1),
        ((R23, R13), -1), ((R23, R12), -1), ((R13, R12), -1))
    assert got == expect


def test_shift_expand_unit_fixed_point():
    one = FreeElement.one(3)
    assert shift_expand(one, 0) == one
    assert shift_expand(one, 5) == one


@settings(max_examples=40, deadline=None)
@given(free_elements(max_len=2, max_terms=3),
       free_elements(max_len=2, max_terms=3),
       st.integers(0, 3))
def test_shift_expand_is_multiplicative_up_to_truncation(p, q, d):
    lhs = shift_expand(p * q, d)
    rhs = (shift_expand(p, d) * shift_expand(q, d)).truncate(d)
    assert lhs == rhs


# -- sparse linear algebra ---------------------------------------------------

def test_nullspace_rank_one():
    m = SparseMatrix([{0: 1, 1: 1}, {0: 2, 1: 2}])
    assert m.rank() == 1
    assert nullspace(m) == [{0: Fraction(1), 1: Fraction(-1)}]


def test_nullspace_identity_empty():
    m = SparseMatrix([{0: 1}, {1: 1}, {2: 1}])
    assert m.rank() == 3
    assert m.nullspace() == []


def test_nullspace_vectors_are_exact_kernel_elements():
    rng = random.Random(42)
    for _ in range(25):
        rows = [{c: rng.randint(-3, 3) for c in rng.sample(range(6), rng.randint(1, 4))}
                for _ in range(rng.randint(1, 7))]
        rows = [{c: v for c, v in r.items() if v} for r in rows]
        rows = [r for r in rows if r]
        if not rows:
            continue
        m = SparseMatrix(rows, columns=list(range(6)))
        kernel = m.nullspace()
        # rank-nullity, exact
        assert m.rank() + len(kernel) == 6
        for x in kernel:
            for row in rows:
                assert sum(Fraction(v) * x.get(c, 0) for c, v in row.items()) == 0


def test_from_columns_orientation():
    cols = {"a": {"w1": 1, "w2": 2}, "b": {"w1": -1, "w2": -2}}
    m = SparseMatrix.from_columns(cols)
    assert m.shape == (2, 2)
    assert m.nullspace() == [{"a": Fraction(1), "b": Fraction(1)}]


def test_span_membership_decomposition():
    b1 = {0: 1, 1: 2}
    b2 = {1: 1, 2: -1}
    v = {0: 1, 1: 4, 2: -2}  # b1 + 2 b2
    assert span_membership(v, [b1, b2]) == [Fraction(1), Fraction(2)]
    assert span_membership({}, [b1, b2]) == [Fraction(0), Fraction(0)]
    assert span_membership({2: 1}, [b1]) is None


def test_span_membership_reconstructs_exactly():
    rng = random.Random(5)
    for _ in range(20):
        basis = [{c: rng.randint(-3, 3) for c in range(5)} for _ in range(3)]
        coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3)]
        v = {}
        for cf, b in zip(coeffs, basis):
            for c, x in b.items():
                v[c] = v.get(c, Fraction(0)) + cf * x
        v = {c: x for c, x in v.items() if x}
        got = span_membership(v, basis)
        assert got is not None
        recon = {}
        for cf, b in zip(got, basis):
            for c, x in b.items():
                recon[c] = recon.get(c, Fraction(0)) + cf * x
        assert {c: x for c, x in recon.items() if x} == v


def test_in_row_span():
    m = SparseMatrix([{0: 1, 1: 1}, {1: 1, 2: 1}])
    assert m.in_row_span({0: 1, 2: -1})       # row1 - row2
    assert not m.in_row_span({0: 1})
    assert not m.in_row_span({3: 1})          # outside the column space


def test_determinant():
    assert SparseMatrix([{0: 1, 1: 2}, {0: 3, 1: 4}],
                        columns=[0, 1]).determinant() == -2
    assert SparseMatrix([{0: 1, 1: 1}, {0: 2, 1: 2}],
                        columns=[0, 1]).determinant() == 0
    assert SparseMatrix([{0: Fraction(1, 2)}], columns=[0]).determinant() \
        == Fraction(1, 2)
    rng = random.Random(9)
    for _ in range(10):
        rows = [{c: rng.randint(-2, 2) for c in range(4)} for _ in range(4)]
        m = SparseMatrix(rows, columns=list(range(4)))
        # compare against cofactor expansion
        dense = [[Fraction(rows[r].get(c, 0)) for c in range(4)] for r in range(4)]

        def cofactor(a):
            if len(a) == 1:
                return a[0][0]
            return sum((-1) ** j * a[0][j] *
                       cofactor([row[:j] + row[j + 1:] for row in a[1:]])
                       for j in range(len(a)))

        assert m.determinant() == cofactor(dense)


def test_nullspace_deterministic():
    rows = [{0: 1, 2: 3}, {1: 2, 2: -1}, {0: 2, 1: 4, 2: 4}]
    a = SparseMatrix(rows, columns=[0, 1, 2]).nullspace()
    b = SparseMatrix(list(reversed(rows)), columns=[0, 1, 2]).nullspace()
    assert a == b


def test_terms_iterate_in_canonical_order():
    x = fe(4, ((R12, R34), 1), ((), 5), ((R34,), 2), ((R12,), 3))
    assert list(x.terms()) == sorted(x.terms(), key=word_key)
