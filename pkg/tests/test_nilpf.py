"""Two-step algebras, Pfaffians, and square-integrability classification."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gelfand.exact import MultiPoly, det, poly_matrix_det
from gelfand.nilpf import (
    b_form,
    b_form_symbolic,
    build_free_two_step,
    build_heisenberg,
    build_two_step,
    build_un_type,
    direct_sum,
    dump_algebra,
    is_generically_square_integrable,
    load_algebra,
    pfaffian,
    pfaffian_polynomial,
    pfaffian_symbolic,
    plancherel_density,
    quotient_to_heisenberg,
    sample_zero_set,
    transform_v_basis,
)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def test_heisenberg_dims():
    for n in (1, 2, 3):
        a = build_heisenberg(n, "C")
        assert (a.dim_v, a.dim_z) == (2 * n, 1)
        b = build_heisenberg(n, "H")
        assert (b.dim_v, b.dim_z) == (4 * n, 3)


def test_heisenberg_c1_is_three_dimensional():
    a = build_heisenberg(1, "C")
    assert a.dim_v + a.dim_z == 3
    assert a.bracket(0, 1) == (Fraction(1),)
    assert a.bracket(1, 0) == (Fraction(-1),)


def test_free_two_step_dims():
    for n in (2, 3, 4):
        a = build_free_two_step(n)
        assert (a.dim_v, a.dim_z) == (n, n * (n - 1) // 2)


def test_free_two_step_on_two_generators_matches_heisenberg():
    free = build_free_two_step(2)
    heis = build_heisenberg(1, "C")
    assert free.brackets == heis.brackets


def test_un_type_dims():
    for n in (1, 2, 3):
        a = build_un_type(n)
        assert (a.dim_v, a.dim_z) == (2 * n, n * n)


def test_un_type_rank_one_is_heisenberg():
    a = build_un_type(1)
    assert (a.dim_v, a.dim_z) == (2, 1)
    assert a.bracket(0, 1) == (Fraction(1),)


def test_direct_sum_dims_add():
    a = build_heisenberg(1, "C")
    b = build_heisenberg(2, "C")
    s = direct_sum(a, b)
    assert (s.dim_v, s.dim_z) == (a.dim_v + b.dim_v, 2)


def test_build_rejects_bad_brackets():
    with pytest.raises(ValueError):
        build_two_step(2, 1, {(1, 0): (Fraction(1),)})
    with pytest.raises(ValueError):
        build_two_step(2, 1, {(0, 0): (Fraction(1),)})
    with pytest.raises(ValueError):
        build_two_step(2, 2, {(0, 1): (Fraction(1),)}, require_center_spanned=True)


# ---------------------------------------------------------------------------
# b_t and Pfaffians
# ---------------------------------------------------------------------------


def test_b_form_zero_and_linearity():
    a = build_heisenberg(2, "C")
    zero = b_form(a, (0,))
    assert all(x == 0 for row in zero for x in row)
    b1 = b_form(a, (1,))
    b3 = b_form(a, (3,))
    assert all(3 * x == y for r1, r3 in zip(b1, b3) for x, y in zip(r1, r3))


def test_b_form_h1():
    a = build_heisenberg(1, "C")
    s = Fraction(5, 7)
    assert b_form(a, (s,)) == [[0, s], [-s, 0]]


def test_pfaffian_two_by_two():
    assert pfaffian([[0, Fraction(3)], [Fraction(-3), 0]]) == 3


def test_pfaffian_odd_dimension_zero():
    assert pfaffian([[0] * 3 for _ in range(3)]) == 0


def _random_skew(n, rng):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            m[i][j] = x
            m[j][i] = -x
    return m


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_pfaffian_squares_to_determinant(n):
    rng = random.Random(1234 + n)
    for _ in range(4):
        m = _random_skew(n, rng)
        assert pfaffian(m) ** 2 == det(m)


def test_pfaffian_rejects_non_skew():
    with pytest.raises(ValueError):
        pfaffian([[0, 1], [1, 0]])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_heisenberg_pfaffian_polynomial_is_power(n):
    p = pfaffian_polynomial(build_heisenberg(n, "C"))
    t = MultiPoly.variable(1, 0)
    assert p.poly == t ** n


def test_symbolic_pfaffian_squares_to_symbolic_determinant():
    for alg in (build_heisenberg(2, "C"), build_heisenberg(1, "H"), build_un_type(2)):
        mat = b_form_symbolic(alg)
        p = pfaffian_symbolic(mat, alg.dim_z)
        assert p * p == poly_matrix_det(mat)


def test_numeric_pfaffian_squares_to_det_on_constructed_forms_up_to_dim_12():
    samples = [
        (build_heisenberg(6, "C"), (Fraction(3, 7),)),
        (build_heisenberg(3, "H"), (Fraction(1), Fraction(-2, 3), Fraction(1, 5))),
        (build_un_type(3), tuple(Fraction(k + 1, 3) for k in range(9))),
        (direct_sum(build_heisenberg(2, "C"), build_heisenberg(2, "C")),
         (Fraction(2), Fraction(-1, 2))),
    ]
    for alg, t in samples:
        b = b_form(alg, t)
        assert len(b) <= 12
        assert pfaffian(b) ** 2 == det(b)


def test_quaternionic_pfaffian_is_norm_power():
    for n in (1, 2):
        p = pfaffian_polynomial(build_heisenberg(n, "H")).poly
        q = MultiPoly(3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        lead = p.terms[(2 * n, 0, 0)]
        assert p == (q ** n).scale(lead)
        assert is_generically_square_integrable(build_heisenberg(n, "H"))


def test_free_three_generators_not_square_integrable():
    alg = build_free_two_step(3)
    assert not is_generically_square_integrable(alg)
    assert pfaffian_polynomial(alg).is_zero()


def test_un_type_square_integrable():
    assert is_generically_square_integrable(build_un_type(2))


def test_nested_heisenberg_pfaffians_divide():
    # nested bases: the bigger polynomial is t^{m-n} times the smaller, so
    # nonvanishing at level m forces nonvanishing at level n
    t = MultiPoly.variable(1, 0)
    for n in (1, 2):
        for m in (3, 4):
            pn = pfaffian_polynomial(build_heisenberg(n, "C")).poly
            pm = pfaffian_polynomial(build_heisenberg(m, "C")).poly
            assert pm == pn * t ** (m - n)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10 ** 6))
def test_basis_change_covariance(seed):
    rng = random.Random(seed)
    alg = build_heisenberg(2, "C")
    s = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
    d = det(s)
    if d == 0:
        return
    moved = transform_v_basis(alg, s)
    p0 = pfaffian_polynomial(alg).poly
    p1 = pfaffian_polynomial(moved).poly
    assert p1 == p0.scale(d)


def test_plancherel_density_values():
    alg = build_heisenberg(3, "C")
    assert plancherel_density(alg, (2,)) == 8.0
    assert plancherel_density(alg, (-2,)) == 8.0
    assert plancherel_density(alg, (0,)) == 0.0


def test_sample_zero_set_h2():
    assert sample_zero_set(build_heisenberg(2, "C"), 10 ** 4, seed=7) == 0.0


def test_sample_zero_set_reproducible():
    alg = build_free_two_step(3)
    assert sample_zero_set(alg, 100, seed=3) == 1.0


# ---------------------------------------------------------------------------
# symplectic quotient
# ---------------------------------------------------------------------------


def test_quotient_heisenberg_identity_scaling():
    alg = build_heisenberg(2, "C")
    d, T = quotient_to_heisenberg(alg, (Fraction(1),))
    assert d == 2
    b = b_form(alg, (1,))
    j = _standard_block(d)
    assert _congruence(T, b) == j


def test_quotient_quaternionic_generic():
    alg = build_heisenberg(1, "H")
    d, T = quotient_to_heisenberg(alg, (Fraction(1), Fraction(1, 2), Fraction(-1, 3)))
    assert d == 2
    b = b_form(alg, (Fraction(1), Fraction(1, 2), Fraction(-1, 3)))
    assert _congruence(T, b) == _standard_block(d)


def test_quotient_rejects_degenerate():
    alg = build_heisenberg(1, "C")
    with pytest.raises(ValueError):
        quotient_to_heisenberg(alg, (Fraction(0),))
    with pytest.raises(ValueError):
        quotient_to_heisenberg(build_free_two_step(3), (Fraction(1),) * 3)


def _standard_block(d):
    out = [[Fraction(0)] * (2 * d) for _ in range(2 * d)]
    for a in range(d):
        out[2 * a][2 * a + 1] = Fraction(1)
        out[2 * a + 1][2 * a] = Fraction(-1)
    return out


def _congruence(T, b):
    from gelfand.exact import mat_mul, transpose
    return mat_mul(mat_mul(transpose(T), b), T)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def test_algebra_text_roundtrip():
    alg = build_heisenberg(1, "H")
    text = dump_algebra(alg)
    back = load_algebra(text)
    assert back.dim_v == alg.dim_v and back.dim_z == alg.dim_z
    assert back.brackets == alg.brackets


def test_load_rejects_garbage():
    with pytest.raises(ValueError):
        load_algebra("")
    with pytest.raises(ValueError):
        load_algebra("2 1\n0 1 5 1/1")
    with pytest.raises(ValueError):
        load_algebra("2 1\n0 1 0")
