import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fieldcarpet.carpet import (
    CarpetIndex,
    CarpetParams,
    FieldMatrix,
    SupportMatrix,
    block_rows,
    closed_form_f,
    entry_at,
    frobenius_matrix,
    fundamental_block,
    generate_recurrence,
    last_row,
    mirror,
    parse_text,
    propagate_blocks,
    row_rescale_O,
    stream_rows,
    support,
    tensor_construction,
    tensor_product,
    to_text,
)
from fieldcarpet.errors import CapacityError, DomainError, UsageError
from fieldcarpet.finite_field import FieldSpec

from conftest import F13_M1_ZEROS, M2_P3_M1
from oracles import naive_carpet, pascal_mod


def params(p, m, d, k=1):
    f = FieldSpec(p, k)
    return CarpetParams(f, f.decode(m % f.q) if k == 1 else f.decode(m), d)


def test_fundamental_block_p3_m1():
    assert generate_recurrence(params(3, 1, 1)).tolist() == [[1, 1, 1], [1, 0, 2], [1, 2, 1]]


def test_nine_by_nine_p3_m1():
    assert generate_recurrence(params(3, 1, 2)).tolist() == M2_P3_M1
    assert tensor_construction(params(3, 1, 2)).tolist() == M2_P3_M1
    F = fundamental_block(FieldSpec(3), FieldSpec(3).one).as_field_matrix()
    assert tensor_product(F, F).tolist() == M2_P3_M1


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_minus_one_gives_all_ones(p):
    assert np.all(generate_recurrence(params(p, -1, 1)).values == 1)


@pytest.mark.parametrize("field", [FieldSpec(5), FieldSpec(2, 2), FieldSpec(3, 2, (1, 0, 1)), FieldSpec(2, 3)],
                         ids=str)
def test_recurrence_matches_scalar_oracle(field):
    for m in field.elements():
        side = min(field.p**2, 25)
        got = generate_recurrence(CarpetParams(field, m, 2)).values[:side, :side]
        assert got.tolist() == naive_carpet(field, m, side)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_m_zero_is_pascal(p):
    assert generate_recurrence(params(p, 0, 2)).tolist() == pascal_mod(p, p * p)


def test_closed_form_examples():
    f3, f5 = FieldSpec(3), FieldSpec(5)
    assert closed_form_f(1, 1, f3.one) == f3.zero
    assert closed_form_f(1, 3, f5.from_int(2)) == f5.zero
    for n in range(6):
        assert closed_form_f(n, 0, f5.from_int(3)) == f5.one == closed_form_f(0, n, f5.from_int(3))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_closed_form_matches_recurrence_on_depth_two(p):
    f = FieldSpec(p)
    for m in f.elements():
        M = generate_recurrence(CarpetParams(f, m, 2)).values
        for n in range(p * p):
            for k in range(p * p):
                assert int(closed_form_f(n, k, m)) == M[n, k]


def test_last_row_examples():
    f3, f13 = FieldSpec(3), FieldSpec(13)
    assert [int(x) for x in last_row(f3, f3.one)] == [1, 2, 1]
    assert [int(x) for x in last_row(f13, f13.zero)] == [1] + [0] * 12
    assert [int(x) for x in last_row(f13, f13.one)] == [1, 12] * 6 + [1]


@pytest.mark.parametrize("field", [FieldSpec(p) for p in (3, 5, 7, 11, 13)] + [FieldSpec(3, 2), FieldSpec(5, 2)],
                         ids=str)
def test_last_row_and_column(field):
    for m in field.elements():
        F = fundamental_block(field, m).values
        expected = [int(x) for x in last_row(field, m)]
        assert F[-1].tolist() == expected and F[:, -1].tolist() == expected


def test_tensor_product_example():
    f = FieldSpec(3)
    A = FieldMatrix(f, np.array([[1, 2], [0, 1]]))
    B = FieldMatrix(f, np.array([[1, 1], [1, 0]]))
    assert tensor_product(A, B).tolist() == [[1, 1, 2, 2], [1, 0, 2, 0], [0, 0, 1, 1], [0, 0, 1, 0]]
    assert tensor_product(A, FieldMatrix(f, np.array([[1]]))) == A
    with pytest.raises(UsageError):
        tensor_product(A, FieldMatrix(FieldSpec(5), np.array([[1]])))


def test_frobenius_matrix(gf9):
    A = FieldMatrix(gf9, np.array([[3]]))  # [[x]]
    assert frobenius_matrix(A).tolist() == [[6]]  # [[2x]]
    F = fundamental_block(gf9, gf9.decode(4)).as_field_matrix()
    assert frobenius_matrix(F, 2) == F
    G = FieldMatrix(FieldSpec(7), np.arange(49).reshape(7, 7) % 7)
    assert frobenius_matrix(G) == G


ORACLE_CASES = [(FieldSpec(p), d) for p in (2, 3, 5, 7) for d in (1, 2, 3)] + [
    (FieldSpec(2, 2), 1), (FieldSpec(2, 2), 2), (FieldSpec(3, 2, (1, 0, 1)), 2), (FieldSpec(5, 2), 2)]


@pytest.mark.parametrize("field,d", ORACLE_CASES, ids=lambda x: str(x))
def test_three_constructions_agree(field, d):
    for m in field.elements():
        prm = CarpetParams(field, m, d)
        rec = generate_recurrence(prm)
        assert tensor_construction(prm) == rec
        assert CarpetIndex(prm).dense() == rec
        assert np.array_equal(np.vstack(list(stream_rows(prm))), rec.values)
        assert np.array_equal(rec.values, rec.values.T)


def test_gf4_tensor_matches_recurrence():
    f = FieldSpec.parse("2^2/1,1,1")
    prm = CarpetParams(f, f.decode(2), 2)  # m = x
    assert tensor_construction(prm) == generate_recurrence(prm)
    assert tensor_construction(prm).tolist() == naive_carpet(f, f.decode(2), 4)


def test_prime_field_collapse():
    f = FieldSpec(5)
    F = fundamental_block(f, f.from_int(2)).as_field_matrix()
    prm = CarpetParams(f, f.from_int(2), 3)
    assert tensor_construction(prm) == tensor_product(tensor_product(F, F), F)
    assert support(tensor_construction(prm)).bits.tolist() == np.kron(np.kron(F.values != 0, F.values != 0),
                                                                       F.values != 0).astype(int).tolist()


def test_entry_at_examples():
    prm = params(3, 1, 2)
    assert int(entry_at(prm, 4, 4)) == 0
    assert all(int(entry_at(params(5, 2, 4), i, 0)) == 1 for i in range(0, 625, 37))
    dense = generate_recurrence(params(3, 1, 3)).values
    idx = CarpetIndex(params(3, 1, 3))
    assert all(int(idx(i, j)) == dense[i, j] for i in range(27) for j in range(27))
    for bad in [(-1, 0), (9, 0), (0, 9)]:
        with pytest.raises(UsageError):
            entry_at(prm, *bad)
    with pytest.raises(UsageError):
        idx.entries([0, 27], [0, 0])


def test_stream_rows_examples():
    rows = list(stream_rows(params(3, 1, 2)))
    assert rows[0].tolist() == [1] * 9
    assert rows[4].tolist() == [1, 0, 2, 0, 0, 0, 2, 0, 1]
    dense = generate_recurrence(params(5, 2, 3)).values
    for i, row in enumerate(stream_rows(params(5, 2, 3))):
        assert np.array_equal(row, dense[i])
    with pytest.raises(CapacityError):
        stream_rows(params(2, 1, 13))


def test_dense_guard(monkeypatch):
    with pytest.raises(CapacityError, match="entry_at"):
        generate_recurrence(params(5, 1, 6))
    monkeypatch.setenv("FIELDCARPET_DENSE_LIMIT", "100")
    with pytest.raises(CapacityError):
        tensor_construction(params(3, 1, 3))
    assert generate_recurrence(params(3, 1, 2)).tolist() == M2_P3_M1


def test_support_examples():
    f3 = FieldSpec(3)
    assert support(fundamental_block(f3, f3.one)).bits.tolist() == [[1, 1, 1], [1, 0, 1], [1, 1, 1]]
    assert support(fundamental_block(f3, -f3.one)).bits.all()
    f13 = FieldSpec(13)
    assert set(support(fundamental_block(f13, f13.one)).zeros) == F13_M1_ZEROS


def test_mirror_examples():
    f5 = FieldSpec(5)
    A = FieldMatrix(f5, np.array([[1, 2], [3, 4]]))
    assert mirror(A).tolist() == [[2, 1], [4, 3]]
    assert mirror(mirror(A)) == A
    f3 = FieldSpec(3)
    assert mirror(fundamental_block(f3, f3.one)).tolist() == [[1, 1, 1], [2, 0, 1], [1, 2, 1]]
    sup = SupportMatrix(np.array([[1, 0], [1, 1]]))
    assert mirror(sup).bits.tolist() == [[0, 1], [1, 1]]


def test_row_rescale_examples():
    f3, f5 = FieldSpec(3), FieldSpec(5)
    assert row_rescale_O(fundamental_block(f3, f3.one)).tolist() == [[1, 1, 1], [2, 0, 1], [1, 2, 1]]
    assert row_rescale_O(fundamental_block(f5, f5.from_int(2))) == mirror(fundamental_block(f5, f5.from_int(3)))
    with pytest.raises(DomainError):
        row_rescale_O(fundamental_block(f5, f5.zero))
    with pytest.raises(UsageError):
        row_rescale_O(generate_recurrence(params(5, 2, 2)))


@pytest.mark.parametrize("field", [FieldSpec(p) for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31)]
                         + [FieldSpec(2, 2), FieldSpec(3, 2), FieldSpec(5, 2)], ids=str)
def test_duality_and_elementwise_identities(field):
    p = field.p
    for m in field.elements():
        if m.is_zero:
            continue
        F = fundamental_block(field, m)
        G = fundamental_block(field, m.inverse()).values
        assert row_rescale_O(F) == mirror(fundamental_block(field, m.inverse()))
        a = F.values
        for i in range(p):
            si = ((-m) ** i).inverse()
            for j in range(p):
                lhs = field.decode(int(a[i, j])) * si
                assert int(lhs) == G[i, p - 1 - j]
                rhs = field.decode(int(a[p - 1 - j, p - 1 - i])) * ((-m) ** (p - 1 - j)).inverse()
                assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([FieldSpec(3), FieldSpec(5), FieldSpec(7), FieldSpec(2, 2), FieldSpec(3, 2)]),
       st.data())
def test_block_propagation(field, data):
    q = field.q
    m, alpha, beta, gamma = (field.decode(data.draw(st.integers(0, q - 1))) for _ in range(4))
    delta = m.frobenius() * alpha + beta + gamma
    F = fundamental_block(field, m).values
    assert np.array_equal(propagate_blocks(field, m, alpha, beta, gamma).values, field.scale_array(F, delta))


def test_block_rows_prefix(gf9):
    m = gf9.decode(5)
    assert np.array_equal(block_rows(gf9, m, 2), fundamental_block(gf9, m).values[:2])


def test_text_round_trip(gf9):
    prm = CarpetParams(gf9, gf9.decode(5), 2)
    M = generate_recurrence(prm)
    text = to_text(M)
    assert text.splitlines()[0] == "3 2 1,0,1 5 2"
    back = parse_text(text)
    assert back == M and back.params == prm
    with pytest.raises(UsageError):
        parse_text("3 1 0,1 1 2\n1 1\n")
