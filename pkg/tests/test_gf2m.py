import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from listpa.gf2m import (
    DEFAULT_POLYS,
    FieldError,
    FieldSpec,
    gf_add,
    gf_inner_product,
    gf_mul,
    validate_field,
)


def test_default_polys_cover_1_to_64():
    assert sorted(DEFAULT_POLYS) == list(range(1, 65))


@pytest.mark.parametrize("m", list(range(1, 65)))
def test_default_polys_are_irreducible(m):
    assert validate_field(FieldSpec(m, DEFAULT_POLYS[m]))


def test_aes_field_known_product():
    # 0x53 * 0xCA = 0x01 in GF(2^8) mod x^8+x^4+x^3+x+1
    spec = FieldSpec.default(8)
    assert spec.poly == 0x11B
    assert gf_mul(spec, 0x53, 0xCA) == 0x01
    assert gf_mul(spec, 0x02, 0x87) == 0x15


@pytest.mark.parametrize("poly", [0x4, 0x6, 0x5, 0x18])  # x^2, x^2+x, (x+1)^2, x^4+x^3
def test_reducible_polys_detected(poly):
    assert not validate_field(FieldSpec(poly.bit_length() - 1, poly))


def test_wrong_degree_rejected():
    with pytest.raises(FieldError):
        FieldSpec(4, 0x11B)


@given(st.integers(0, 2**13 - 1), st.integers(0, 2**13 - 1), st.integers(0, 2**13 - 1))
@settings(max_examples=60)
def test_field_axioms_m13(a, b, c):
    spec = FieldSpec.default(13)
    assert gf_mul(spec, a, b) == gf_mul(spec, b, a)
    assert gf_mul(spec, gf_mul(spec, a, b), c) == gf_mul(spec, a, gf_mul(spec, b, c))
    assert gf_mul(spec, a, gf_add(b, c)) == gf_add(gf_mul(spec, a, b), gf_mul(spec, a, c))
    assert gf_mul(spec, a, 1) == a
    assert gf_mul(spec, a, 0) == 0


@given(st.integers(1, 2**8 - 1))
@settings(max_examples=40)
def test_nonzero_products_nonzero(a):
    # A field has no zero divisors.
    spec = FieldSpec.default(8)
    for b in range(1, 20):
        assert gf_mul(spec, a, b) != 0


def test_inner_product_matches_termwise():
    spec = FieldSpec.default(4)
    a = (3, 7, 0, 12)
    x = (9, 1, 5, 6)
    expect = 0
    for ai, xi in zip(a, x):
        expect = gf_add(expect, gf_mul(spec, ai, xi))
    assert gf_inner_product(spec, a, x) == expect


def test_inner_product_length_mismatch():
    spec = FieldSpec.default(4)
    with pytest.raises(ValueError):
        gf_inner_product(spec, (1, 2), (3,))


def test_element_range_checked():
    spec = FieldSpec.default(3)
    with pytest.raises(FieldError):
        gf_mul(spec, 8, 1)
