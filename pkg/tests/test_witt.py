import pytest

from errors import InputError, NotAUnit, NotIntegral
from witt import AtLeastN, RingParams, default_modulus, embed_scalar, parse_scalar, random_scalar


def test_inverse_of_two_mod_625():
    params = RingParams.create(5, 1, 4)
    assert params.scalar(2).inverse() == params.scalar(313)
    assert params.scalar(2) * 313 == params.one


def test_inverse_rejects_non_units():
    with pytest.raises(NotAUnit):
        RingParams.create(5, 1, 4).scalar(5).inverse()


def test_unit_inverse_in_an_extension(p2_cubic, rng):
    for _ in range(20):
        s = random_scalar(p2_cubic, rng)
        if s.is_unit():
            assert s * s.inverse() == p2_cubic.one


def test_valuation(p3):
    assert p3.scalar(18).val() == 2
    assert p3.scalar(5).val() == 0
    zero = p3.zero.val()
    assert isinstance(zero, AtLeastN) and zero == 16


def test_default_modulus():
    assert default_modulus(3, 1) == (0, 1)
    assert default_modulus(2, 2) == (1, 1, 1)


def test_ring_params_validation():
    with pytest.raises(InputError):
        RingParams.create(4)
    with pytest.raises(InputError):
        RingParams.create(2, 2, 8, [0, 0, 1])
    with pytest.raises(InputError):
        RingParams.create(2, 2, 8, [1, 1, 2])
    with pytest.raises(InputError):
        RingParams.create(3, 1, 0)


def test_default_precision_comes_from_config():
    from config import PRECISION_CONFIG

    assert RingParams.create(3).N == PRECISION_CONFIG["default_precision"]


def test_frobenius_is_trivial_over_zp(p3):
    assert p3.scalar(7).frobenius() == p3.scalar(7)


def test_frobenius_is_an_automorphism_of_order_a(p2_cubic, rng):
    for _ in range(10):
        s, t = random_scalar(p2_cubic, rng), random_scalar(p2_cubic, rng)
        assert (s + t).frobenius() == s.frobenius() + t.frobenius()
        assert (s * t).frobenius() == s.frobenius() * t.frobenius()
        assert s.frobenius(3) == s
        assert s.frobenius(-1).frobenius() == s


def test_frobenius_lifts_the_p_th_power(p2_cubic):
    x = p2_cubic.generator()
    assert (x.frobenius() - x ** 2).val() >= 1


def test_shift_down(p3):
    assert p3.scalar(9).shift_down(2) == p3.one
    with pytest.raises(NotIntegral):
        p3.scalar(3).shift_down(2)


def test_parse_scalar(p3):
    assert parse_scalar(-1, p3) == p3.scalar(3 ** 16 - 1)
    assert parse_scalar([4], p3) == p3.scalar(4)
    for bad in (3 ** 16, True, [1, 2], "7", [1.5]):
        with pytest.raises(InputError):
            parse_scalar(bad, p3)


def test_parse_scalar_needs_a_coordinates(p2_cubic):
    assert parse_scalar([1, 0, 1], p2_cubic).coeffs == (1, 0, 1)
    with pytest.raises(InputError):
        parse_scalar([1, 0], p2_cubic)


def test_embedding_respects_arithmetic(rng):
    small = RingParams.create(2, 1, 10)
    big = RingParams.create(2, 2, 10)
    assert embed_scalar(small.scalar(5), big) == big.scalar(5)

    small = RingParams.create(2, 2, 10)
    big = RingParams.create(2, 4, 10)
    for _ in range(5):
        s, t = random_scalar(small, rng), random_scalar(small, rng)
        assert embed_scalar(s * t, big) == embed_scalar(s, big) * embed_scalar(t, big)
        assert embed_scalar(s.frobenius(), big) == embed_scalar(s, big).frobenius()


def test_frobenius_preserves_valuation(p2_cubic, rng):
    for k in range(6):
        s = random_scalar(p2_cubic, rng) * p2_cubic.p_power(k)
        assert s.frobenius().val() == s.val()
        assert s.frobenius(2).val() == s.val()


def test_frobenius_on_the_quadratic_extension_of_f2():
    params = RingParams.create(2, 2, 10)
    x = params.generator()
    # x^2 + x + 1 = 0 mod 2, so x^2 = x + 1 in F_4
    assert (x.frobenius() - x - params.one).val() >= 1
    assert x.frobenius().frobenius() == x
