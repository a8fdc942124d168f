"""Field arithmetic: axioms, automorphisms, embeddings, file registration."""

import cmath
import json
from fractions import Fraction

import numpy as np
import pytest

from relaystc.exactfield import (
    FieldError,
    cyclotomic5_field,
    golden_field,
    load_field_spec,
    silver_field,
)

ALL_FIELDS = [silver_field, golden_field, cyclotomic5_field]


# -- independent oracle: polynomial arithmetic mod 1 + x + x^2 + x^3 + x^4 ----

def _poly_mulmod_c5(a, b):
    """Multiply coefficient lists in Q[x]/(1+x+x^2+x^3+x^4), no field machinery."""
    prod = [Fraction(0)] * 7
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            prod[i + j] += Fraction(ai) * Fraction(bj)
    for k in range(6, 3, -1):
        c = prod[k]
        if c == 0:
            continue
        prod[k] = Fraction(0)
        for t in range(4):
            prod[k - 4 + t] -= c
    return prod[:4]


def test_zeta_power_reduction_matches_poly_oracle():
    f = cyclotomic5_field()
    z = f.basis_element(1)
    z4 = z * z * z * z
    assert (z4 * z) == f.one()  # zeta^5 = 1 after reduction
    rng = np.random.default_rng(11)
    for _ in range(200):
        a = rng.integers(-5, 6, size=4)
        b = rng.integers(-5, 6, size=4)
        got = f.element(a) * f.element(b)
        want = _poly_mulmod_c5(list(a), list(b))
        assert list(got.coords) == want


def test_unit_element_is_neutral():
    f = golden_field()
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = f.element(rng.integers(-9, 10, size=4))
        assert f.one() * x == x


def test_sqrt5_squares_to_five():
    f = golden_field()
    s5 = f.basis_element(2)
    assert s5 * s5 == f.from_rational(5)


def test_sqrt7_squares_to_seven():
    f = silver_field()
    s7 = f.basis_element(2)
    assert s7 * s7 == f.from_rational(7)


# -- automorphisms -------------------------------------------------------------


def test_sigma_golden_negates_sqrt5():
    f = golden_field()
    s5 = f.basis_element(2)
    assert s5.apply("sigma") == -s5
    assert f.gaussian(1j).apply("sigma") == f.gaussian(1j)


def test_sigma_silver_conjugates_and_negates_sqrt7():
    f = silver_field()
    assert f.gaussian(1j).apply("sigma") == f.gaussian(-1j)
    assert f.basis_element(2).apply("sigma") == -f.basis_element(2)
    # i*sqrt7 spans the fixed quadratic subfield
    assert f.basis_element(3).apply("sigma") == f.basis_element(3)


def test_sigma_m_twice_is_zeta_to_the_fourth():
    f = cyclotomic5_field()
    z = f.basis_element(1)
    twice = z.apply("sigma").apply("sigma")
    # oracle: zeta^9 = zeta^4 = -1 - z - z^2 - z^3 in the power basis
    assert list(twice.coords) == [-1, -1, -1, -1]
    assert twice == z.conjugate()


def test_automorphisms_fix_unit():
    for build in ALL_FIELDS:
        f = build()
        for name in f.automorphisms:
            assert f.one().apply(name) == f.one()


def test_automorphism_orders():
    assert silver_field().aut_order("sigma") == 2
    assert golden_field().aut_order("sigma") == 2
    assert cyclotomic5_field().aut_order("sigma") == 4
    for build in ALL_FIELDS:
        assert build().aut_order("conj") in (1, 2)


def test_unknown_automorphism_raises():
    with pytest.raises(FieldError):
        golden_field().one().apply("frobenius")


def test_field_mismatch_raises():
    with pytest.raises(FieldError):
        golden_field().one() + silver_field().one()


# -- embeddings ----------------------------------------------------------------


def test_embed_golden_ratio():
    f = golden_field()
    omega = f.element([Fraction(1, 2), 0, Fraction(1, 2), 0])
    assert abs(omega.embed() - (1 + np.sqrt(5)) / 2) < 1e-12


def test_embed_zero_and_zeta():
    assert cyclotomic5_field().zero().embed() == 0
    z = cyclotomic5_field().basis_element(1)
    assert abs(z.embed() - cmath.exp(2j * cmath.pi / 5)) < 1e-12


def test_embedding_respects_products_on_random_elements():
    rng = np.random.default_rng(5)
    for build in ALL_FIELDS:
        f = build()
        for _ in range(100):
            a = f.element(rng.integers(-5, 6, size=4))
            b = f.element(rng.integers(-5, 6, size=4))
            assert abs((a * b).embed() - a.embed() * b.embed()) < 1e-9


def test_automorphism_multiplicative_on_random_elements():
    rng = np.random.default_rng(7)
    for build in ALL_FIELDS:
        f = build()
        for name in f.automorphisms:
            for _ in range(1000):
                x = f.element(rng.integers(-5, 6, size=4))
                y = f.element(rng.integers(-5, 6, size=4))
                assert (x * y).apply(name) == x.apply(name) * y.apply(name)


def test_conjugation_embeds_as_complex_conjugate():
    rng = np.random.default_rng(9)
    for build in ALL_FIELDS:
        f = build()
        for _ in range(200):
            x = f.element(rng.integers(-5, 6, size=4))
            assert abs(x.conjugate().embed() - x.embed().conjugate()) < 1e-12


def test_sigma_embeds_as_generator_substitution():
    """sigma's complex action = evaluating coordinates at the conjugated generators."""
    rng = np.random.default_rng(13)
    fm = cyclotomic5_field()
    z3 = cmath.exp(2j * cmath.pi * 3 / 5)
    fg = golden_field()
    golden_imgs = [1.0, 1.0j, -np.sqrt(5), -1.0j * np.sqrt(5)]
    fs = silver_field()
    silver_imgs = [1.0, -1.0j, -np.sqrt(7), 1.0j * np.sqrt(7)]
    for _ in range(200):
        c = rng.integers(-5, 6, size=4)
        x = fm.element(c)
        direct = sum(int(ck) * z3 ** k for k, ck in enumerate(c))
        assert abs(x.apply("sigma").embed() - direct) < 1e-10
        xg = fg.element(c)
        direct = sum(int(ck) * img for ck, img in zip(c, golden_imgs))
        assert abs(xg.apply("sigma").embed() - direct) < 1e-10
        xs = fs.element(c)
        direct = sum(int(ck) * img for ck, img in zip(c, silver_imgs))
        assert abs(xs.apply("sigma").embed() - direct) < 1e-10


def test_tau_squared_identity_and_commutation():
    """The iteration automorphism (sigma) squares to id and commutes with conj."""
    rng = np.random.default_rng(17)
    for build in (silver_field, golden_field):
        f = build()
        for _ in range(200):
            x = f.element(rng.integers(-9, 10, size=4))
            assert x.apply("sigma").apply("sigma") == x
            assert x.apply("sigma").conjugate() == x.conjugate().apply("sigma")


def test_validate_runs_clean_on_builtin_towers():
    for build in ALL_FIELDS:
        build().validate()


# -- file registration -----------------------------------------------------------


def _sqrt2_spec(tmp_path, **patch):
    spec = {
        "name": "K_sqrt2",
        "min_poly": ["-2", "0", "1"],
        "root": [2 ** 0.5, 0.0],
        "labels": "s",
        "automorphisms": {
            "sigma": [[1, 0], [0, -1]],
            "conj": [[1, 0], [0, 1]],
        },
    }
    spec.update(patch)
    p = tmp_path / "field.json"
    p.write_text(json.dumps(spec))
    return p


def test_load_field_spec_sqrt2(tmp_path):
    f = load_field_spec(_sqrt2_spec(tmp_path))
    s = f.basis_element(1)
    assert s * s == f.from_rational(2)
    assert s.apply("sigma") == -s
    assert abs(s.embed() - 2 ** 0.5) < 1e-12


def test_load_field_spec_rejects_bad_automorphism(tmp_path):
    bad = {"automorphisms": {"sigma": [[1, 0], [0, 0]], "conj": [[1, 0], [0, 1]]}}
    with pytest.raises(FieldError):
        load_field_spec(_sqrt2_spec(tmp_path, **bad))


def test_load_field_spec_requires_conj(tmp_path):
    spec = {
        "name": "K_i", "min_poly": [1, 0, 1], "root": [0.0, 1.0],
        "automorphisms": {"sigma": [[1, 0], [0, -1]]},
    }
    p = tmp_path / "f.json"
    p.write_text(json.dumps(spec))
    with pytest.raises(FieldError):
        load_field_spec(p)
