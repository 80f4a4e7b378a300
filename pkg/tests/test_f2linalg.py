from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistgen.f2linalg import (
    BitMat,
    BitVec,
    DescentError,
    DimensionError,
    OneSidedClassError,
    SignedPermMat,
    SingularMatrixError,
    dot_form,
    int_det,
    mat_inv,
    mat_mul,
    perm_sign,
    preserves_form,
    quotient_det,
    rank,
    transvection_matrix,
    w_eigenvalue,
)


def dense_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Schoolbook product over GF(2), the reference for the packed routines."""
    n = len(a)
    return [[sum(a[i][k] & b[k][j] for k in range(n)) & 1 for j in range(n)] for i in range(n)]


@st.composite
def even_vectors(draw, dim: int):
    bits = draw(st.integers(min_value=1, max_value=(1 << dim) - 1))
    if bin(bits).count("1") % 2:
        bits ^= 1 << draw(st.integers(0, dim - 1))
    if not bits:
        bits = 0b11
    return BitVec(dim, bits)


@st.composite
def twist_products(draw, dim: int = 7):
    vs = draw(st.lists(even_vectors(dim), min_size=1, max_size=6))
    m = BitMat.identity(dim)
    for v in vs:
        m = m @ transvection_matrix(v)
    return m


def test_bitvec_from_indices_and_text():
    v = BitVec.from_indices(6, [1, 3])
    assert v.bits == 0b101
    assert str(v) == "x1+x3"
    assert v.indices == [1, 3]
    assert v.two_sided
    assert str(BitVec.zero(4)) == "0"
    with pytest.raises(ValueError):
        BitVec.from_indices(3, [4])
    with pytest.raises(ValueError):
        BitVec(2, 0b100)


def test_dot_form_is_diagonal():
    x = [BitVec.from_indices(5, [i]) for i in range(1, 6)]
    for i in range(5):
        for j in range(5):
            assert dot_form(x[i], x[j]) == (i == j)
    with pytest.raises(DimensionError):
        dot_form(x[0], BitVec.from_indices(4, [1]))


def test_transvection_of_chain_curve():
    a = BitVec.from_indices(4, [1, 2])
    t = transvection_matrix(a)
    # x1 meets a once, so x1 -> x1 + a = x2
    assert t @ BitVec.from_indices(4, [1]) == BitVec.from_indices(4, [2])
    assert t @ BitVec.from_indices(4, [3]) == BitVec.from_indices(4, [3])
    assert (t @ t).is_identity


def test_one_sided_class_has_no_transvection():
    with pytest.raises(OneSidedClassError):
        transvection_matrix(BitVec.from_indices(4, [1]))


@given(even_vectors(8))
def test_transvections_are_form_preserving_involutions(a):
    t = transvection_matrix(a)
    assert preserves_form(t)
    assert (t @ t).is_identity
    assert t @ a == a


@settings(max_examples=60)
@given(twist_products(), twist_products())
def test_packed_product_matches_dense(m, n):
    assert mat_mul(m, n).to_rows() == dense_mul(m.to_rows(), n.to_rows())


@settings(max_examples=60)
@given(twist_products())
def test_inverse_and_rank(m):
    inv = mat_inv(m)
    assert (m @ inv).is_identity and (inv @ m).is_identity
    assert rank(m) == m.dim
    assert preserves_form(m)


def test_singular_matrix():
    m = BitMat.from_rows([[1, 1, 0], [1, 1, 0], [0, 0, 1]])
    assert rank(m) == 2
    with pytest.raises(SingularMatrixError):
        mat_inv(m)


def test_rows_round_trip_and_hex():
    rows = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    m = BitMat.from_rows(rows)
    assert m.to_rows() == rows
    # row i packed with bit j = entry (i, j)
    assert m.hex_rows() == ["2", "4", "1"]
    assert m.is_permutation
    assert (m ** 3).is_identity
    assert m ** -1 == mat_inv(m)


@given(st.permutations(range(6)), st.permutations(range(6)))
def test_perm_sign_is_multiplicative(p, q):
    pq = [p[q[i]] for i in range(6)]
    assert perm_sign(pq) == perm_sign(p) * perm_sign(q)


def test_quotient_det_of_cycles():
    # a g-cycle with all signs +1: det = (-1)^(g-1), w fixed
    for g in (5, 6, 7):
        c = SignedPermMat.from_images(g, {i: i % g + 1 for i in range(1, g + 1)})
        assert int_det(c) == (-1) ** (g - 1)
        assert w_eigenvalue(c) == 1
        assert quotient_det(c) == int_det(c)
    assert quotient_det(SignedPermMat.identity(5)) == 1


def test_quotient_det_with_negated_w():
    # -identity on R^5: det -1, w eigenvalue -1, quotient det (-1)^4 = 1
    p = SignedPermMat(5, tuple(range(5)), (-1,) * 5)
    assert int_det(p) == -1
    assert quotient_det(p) == 1


def test_mixed_signs_do_not_descend():
    p = SignedPermMat(3, (0, 1, 2), (1, -1, 1))
    with pytest.raises(DescentError):
        quotient_det(p)


@given(st.permutations(range(5)), st.lists(st.sampled_from([1, -1]), min_size=5, max_size=5))
def test_signed_perm_group_laws(perm, signs):
    p = SignedPermMat(5, tuple(perm), tuple(signs))
    assert (p @ p.inverse()).is_identity
    assert p.mod2().cols == tuple(1 << j for j in perm)
    dense = p.to_dense()
    # column i holds signs[i] in row perm[i]
    assert all(dense[perm[i]][i] == signs[i] for i in range(5))
