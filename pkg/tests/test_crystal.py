import logging
import random

import pytest

from crystal import FCrystal, crystal_from_literal, mazur_check
from errors import NotInjective, NotIntegral
from matlat import Lattice, MatrixW, det, random_unit_matrix, unit_inverse
from witt import RingParams, random_scalar


def test_identity_crystal(p3):
    C = FCrystal(MatrixW.identity(p3, 2))
    assert C.hodge_slopes().slopes == (0, 0)
    assert C.newton_slopes().slopes == (0, 0)
    assert C.det_valuation == 0


def test_jordan_block(p3):
    C = crystal_from_literal(p3, [[3, 1], [0, 3]])
    assert C.hodge_slopes().to_strings() == ["0/1", "2/1"]
    assert C.newton_slopes().to_strings() == ["1/1", "1/1"]
    verdict = mazur_check(C)
    assert verdict.passed
    assert verdict.details["det_valuation"] == 2


def test_singular_matrix_is_rejected(p3):
    with pytest.raises(NotInjective):
        FCrystal(MatrixW.from_rows(p3, [[1, 1], [1, 1]]))


def test_low_precision_warns(caplog):
    params = RingParams.create(3, 1, 6)
    with caplog.at_level(logging.WARNING):
        FCrystal(MatrixW.p_power_diagonal(params, [0, 2]))
    assert "heuristic" in caplog.text


def _random_crystal(rng, N=32):
    """Either a Cartan-form matrix with known Hodge slopes or a matrix with random entries"""
    while True:
        p = rng.choice([2, 3, 5])
        a = rng.choice([1, 2, 3])
        params = RingParams.create(p, a, N)
        n = rng.randint(2, 6)
        if rng.random() < 0.5:
            exps = tuple(sorted(rng.randint(0, 2) for _ in range(n)))
            A = random_unit_matrix(params, n, rng) @ MatrixW.p_power_diagonal(params, exps) \
                @ random_unit_matrix(params, n, rng)
        else:
            exps = None
            A = MatrixW.from_rows(params, [[random_scalar(params, rng) for _ in range(n)] for _ in range(n)])
        # det of the twisted power has valuation a·val(det A)
        if a * det(A).val() < N - 4:
            return A, exps


def test_mazur_inequality_on_random_crystals():
    rng = random.Random(1)
    for trial in range(200):
        A, exps = _random_crystal(rng)
        C = FCrystal(A)
        verdict = mazur_check(C)
        assert verdict.passed, (trial, verdict.details)
        assert C.newton_slopes().endpoint == C.det_valuation
        if exps is not None:
            assert C.hodge_slopes().slopes == exps


def test_newton_slopes_over_an_extension():
    params = RingParams.create(2, 2, 16)
    # F = p^{1/2} on a rank-2 piece: A = [[0, 1], [p, 0]]
    C = crystal_from_literal(params, [[[0, 0], [1, 0]], [[2, 0], [0, 0]]])
    assert C.newton_slopes().to_strings() == ["1/2", "1/2"]
    assert C.hodge_slopes().to_strings() == ["0/1", "1/1"]


def test_newton_slopes_survive_base_extension(p3, rng):
    A = random_unit_matrix(p3, 3, rng) @ MatrixW.p_power_diagonal(p3, [0, 1, 3])
    C = FCrystal(A)
    extended = C.base_extend(2)
    assert extended.params.a == 2
    assert extended.newton_slopes() == C.newton_slopes()
    assert extended.hodge_slopes() == C.hodge_slopes()


def test_conjugation_preserves_slopes(p3, rng):
    C = crystal_from_literal(p3, [[1, 1], [0, 27]])
    U = random_unit_matrix(p3, 2, rng)
    D = C.conjugate(U)
    assert D.newton_slopes() == C.newton_slopes()
    assert D.hodge_slopes() == C.hodge_slopes()


def test_slopes_are_invariant_under_random_conjugation():
    rng = random.Random(2)
    for _ in range(100):
        A, _ = _random_crystal(rng)
        C = FCrystal(A)
        U = random_unit_matrix(C.params, C.n, rng)
        D = C.conjugate(U)
        assert D.newton_slopes() == C.newton_slopes()
        assert D.hodge_slopes() == C.hodge_slopes()


def test_twisted_power_telescopes_under_conjugation(p2_cubic, rng):
    for _ in range(5):
        A = random_unit_matrix(p2_cubic, 3, rng) @ MatrixW.p_power_diagonal(p2_cubic, [0, 1, 2])
        C = FCrystal(A)
        U = random_unit_matrix(p2_cubic, 3, rng)
        assert C.conjugate(U).twisted_power() == unit_inverse(U) @ C.twisted_power() @ U


def test_conjugation_is_a_group_action(p2_cubic, rng):
    C = FCrystal(random_unit_matrix(p2_cubic, 3, rng) @ MatrixW.p_power_diagonal(p2_cubic, [0, 1, 1]))
    U = random_unit_matrix(p2_cubic, 3, rng)
    assert C.conjugate(U).conjugate(unit_inverse(U)).A == C.A
    assert C.conjugate(MatrixW.identity(p2_cubic, 3)).A == C.A


def test_dual_crystal(p3):
    C = crystal_from_literal(p3, [[3, 1], [0, 3]])
    D = C.dual(p3.scalar(9))
    assert D.hodge_slopes().slopes == (0, 2)
    assert D.params.N == 14
    with pytest.raises(NotIntegral):
        C.dual(p3.scalar(3))


def test_dual_crystal_reverses_the_slopes(rng):
    params = RingParams.create(3, 2, 24)
    m = 2
    c = params.p_power(m)
    for _ in range(10):
        exps = sorted(rng.randint(0, m) for _ in range(3))
        A = random_unit_matrix(params, 3, rng) @ MatrixW.p_power_diagonal(params, exps) \
            @ random_unit_matrix(params, 3, rng)
        C = FCrystal(A)
        D = C.dual(c)
        assert D.hodge_slopes().slopes == tuple(m - s for s in reversed(C.hodge_slopes().slopes))
        assert D.newton_slopes().slopes == tuple(m - s for s in reversed(C.newton_slopes().slopes))
        twice = D.dual(c.with_params(D.params))
        assert twice.A == C.A.with_params(twice.params)


def test_restrict_to_a_stable_sublattice(p3):
    C = FCrystal(MatrixW.p_power_diagonal(p3, [0, 1, 2]))
    basis = MatrixW.from_rows(p3, [[0], [1], [0]])
    piece = C.restrict(basis)
    assert piece.A == MatrixW.from_rows(p3, [[3]])
    with pytest.raises(NotIntegral):
        C.restrict(MatrixW.from_rows(p3, [[1], [1], [0]]))


def test_image_lattice(p3):
    C = FCrystal(MatrixW.p_power_diagonal(p3, [0, 2]))
    assert C.image_lattice().equals(Lattice(MatrixW.p_power_diagonal(p3, [0, 2])))
