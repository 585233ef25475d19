import random

import pytest

from crystal import FCrystal
from errors import InputError, InvalidExponents
from matlat import MatrixW, random_unit_matrix
from selfdual import (SelfDualCrystal, check_exponents, duality_identity_holds, form_from_quintuple,
                      frobenius_lattice_perp, generate, random_group_element, slope_symmetry_check,
                      standard_form, validate)
from witt import RingParams, random_scalar


def _names(verdicts):
    return {v.name: v.passed for v in verdicts}


@pytest.fixture
def diagonal_model(p3_wide):
    A = MatrixW.p_power_diagonal(p3_wide, [0, 1, 2, 3])
    return SelfDualCrystal(FCrystal(A), standard_form(p3_wide, 4), p3_wide.scalar(27), "symplectic")


def test_diagonal_model_is_self_dual(diagonal_model):
    verdicts = validate(diagonal_model)
    assert all(v.passed for v in verdicts), _names(verdicts)
    assert all(v.passed for v in slope_symmetry_check(diagonal_model))
    assert frobenius_lattice_perp(diagonal_model).passed
    assert duality_identity_holds(diagonal_model)


def test_broken_similitude_is_reported(p3_wide, diagonal_model):
    A = MatrixW.p_power_diagonal(p3_wide, [0, 1, 2, 3]) + MatrixW.from_rows(
        p3_wide, [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    S = SelfDualCrystal(FCrystal(A), diagonal_model.G, diagonal_model.c, "symplectic")
    verdicts = _names(validate(S))
    assert verdicts["similitude"] is False
    assert verdicts["kind"] is True


def test_orthogonal_flag_with_an_alternating_form(diagonal_model):
    S = SelfDualCrystal(diagonal_model.base, diagonal_model.G, diagonal_model.c, "orthogonal")
    assert _names(validate(S))["kind"] is False


def test_non_unit_form_is_reported(p3_wide):
    A = MatrixW.identity(p3_wide, 2)
    G = MatrixW.from_rows(p3_wide, [[0, 3], [-3, 0]])
    S = SelfDualCrystal(FCrystal(A), G, p3_wide.one, "symplectic")
    assert _names(validate(S))["form_unit"] is False


def test_standard_forms(p3):
    J = standard_form(p3, 4, "symplectic")
    assert J.T == -J
    K = standard_form(p3, 4, "orthogonal")
    assert K.T == K
    with pytest.raises(InputError):
        standard_form(p3, 3, "symplectic")


@pytest.mark.parametrize("kind", ["symplectic", "orthogonal"])
def test_random_group_elements_preserve_the_form(kind, p3):
    rng = random.Random(7)
    J = standard_form(p3, 4, kind)
    for _ in range(3):
        K = random_group_element(p3, 4, kind, rng)
        assert K.T @ J @ K == J


def test_check_exponents():
    assert check_exponents([0, 1, 2, 3], 4) == 3
    assert check_exponents([1, 1], 2) == 2
    for mu in ([0, 2, 1, 3], [0, 1, 1, 3], [0, 1, 2], [-1, 0, 1, 2]):
        with pytest.raises(InvalidExponents):
            check_exponents(mu, 4)


@pytest.mark.parametrize("kind", ["symplectic", "orthogonal"])
@pytest.mark.parametrize("mode", ["cartan", "conjugate"])
def test_generated_instances_validate(kind, mode, p3_wide):
    S = generate(p3_wide, 4, [0, 1, 2, 3], seed=0, kind=kind, mode=mode)
    assert all(v.passed for v in validate(S)), _names(validate(S))
    assert all(v.passed for v in slope_symmetry_check(S))
    assert frobenius_lattice_perp(S).passed
    assert S.base.hodge_slopes().slopes == (0, 1, 2, 3)
    if mode == "conjugate":
        assert S.base.newton_slopes() == S.base.hodge_slopes()


def test_generator_over_an_extension():
    params = RingParams.create(2, 2, 24)
    S = generate(params, 4, [0, 0, 1, 1], seed=3, mode="conjugate")
    assert all(v.passed for v in validate(S))
    assert S.base.newton_slopes().to_strings() == ["0/1", "0/1", "1/1", "1/1"]


def test_generator_is_deterministic(p3_wide):
    first = generate(p3_wide, 4, [0, 1, 2, 3], seed=5)
    second = generate(p3_wide, 4, [0, 1, 2, 3], seed=5)
    assert first.to_dict() == second.to_dict()
    assert generate(p3_wide, 4, [0, 1, 2, 3], seed=6).to_dict() != first.to_dict()


def test_generator_with_a_similitude_unit(p3_wide):
    S = generate(p3_wide, 4, [0, 1, 2, 3], seed=2, unit=2)
    assert S.c == p3_wide.scalar(54)
    assert all(v.passed for v in validate(S))


def test_generator_rejects_bad_input(p3):
    with pytest.raises(InputError):
        generate(p3, 3, [0, 1, 2], seed=0)
    with pytest.raises(InvalidExponents):
        generate(p3, 2, [0, 20], seed=0)
    with pytest.raises(InputError):
        generate(p3, 4, [0, 1, 2, 3], seed=0, unit=3)
    with pytest.raises(InputError):
        generate(p3, 4, [0, 1, 2, 3], seed=0, mode="spiral")


def test_similitude_on_vectors(p3_wide):
    S = generate(p3_wide, 4, [0, 1, 2, 3], seed=1)
    form = form_from_quintuple(S)
    rng = random.Random(11)
    for _ in range(5):
        x = MatrixW.from_columns(p3_wide, [[random_scalar(p3_wide, rng) for _ in range(4)]], 4)
        y = MatrixW.from_columns(p3_wide, [[random_scalar(p3_wide, rng) for _ in range(4)]], 4)
        assert form.similitude_holds(x, y)
        assert form(x, y) == -form(y, x)


def test_perpendicular_lattice_fails_without_self_duality(p3_wide):
    rng = random.Random(4)
    A = random_unit_matrix(p3_wide, 4, rng) @ MatrixW.p_power_diagonal(p3_wide, [0, 0, 1, 3])
    S = SelfDualCrystal(FCrystal(A), standard_form(p3_wide, 4), p3_wide.scalar(27), "symplectic")
    assert not frobenius_lattice_perp(S).passed


def test_generator_reference_instances(p3_wide):
    flat = generate(p3_wide, 4, [0, 0, 0, 0], seed=42)
    assert flat.m == 0
    assert flat.base.hodge_slopes().slopes == (0, 0, 0, 0)
    assert all(v.passed for v in validate(flat))
    S = generate(p3_wide, 4, [0, 1, 2, 3], seed=42)
    assert all(v.passed for v in validate(S))
    assert S.base.hodge_slopes().slopes == (0, 1, 2, 3)


def _random_exponents(n, m, rng):
    half = sorted(rng.randint(0, m // 2) for _ in range(n // 2))
    return half + [m - x for x in reversed(half)]


def test_generated_instances_are_symmetric_and_perpendicular():
    rng = random.Random(7)
    for trial in range(100):
        a = rng.choice([1, 2, 3])
        params = RingParams.create(rng.choice([2, 3, 5]), a, 32)
        n = rng.choice([2, 4, 6])
        mu = _random_exponents(n, rng.randint(0, 3 if a < 3 else 2), rng)
        S = generate(params, n, mu, seed=trial, kind=rng.choice(["symplectic", "orthogonal"]),
                     mode=rng.choice(["cartan", "conjugate"]))
        assert all(v.passed for v in validate(S)), (trial, _names(validate(S)))
        symmetry = slope_symmetry_check(S)
        assert all(v.passed for v in symmetry), (trial, [v.details for v in symmetry])
        assert S.base.hodge_slopes().slopes == tuple(mu)
        assert frobenius_lattice_perp(S).passed, trial
