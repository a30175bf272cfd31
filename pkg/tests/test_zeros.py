import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, example, given, settings, strategies as st

from lzeros.combo import ComboSpec
from lzeros.errors import BoundaryZeroError, DomainError
from lzeros.lfunc import EvalResult, zeta_power_spec, zeta_spec
from lzeros.zeros import (
    ComboEvaluator,
    Rectangle,
    grid_scan,
    hunt_zeros,
    newton_polish,
    winding_count,
)


def dirichlet_product(factors):
    """prod (1 - b^{s0 - s}); zeros at s0 + 2 pi i k / log b."""
    def F(s):
        out = 1 + 0j
        for b, s0 in factors:
            out *= 1 - np.exp((s0 - s) * math.log(b))
        return out

    return F


def closed_form_zeros(factors, rect):
    out = []
    for b, s0 in factors:
        period = 2 * math.pi / math.log(b)
        for k in range(math.floor(rect.t_min / period) - 1, math.ceil(rect.t_max / period) + 2):
            out.append(complex(s0, k * period))
    return out


def expected_zeros(factors, rect):
    return sum(rect.contains(z) for z in closed_form_zeros(factors, rect))


def near_contour(factors, rect, margin=1e-3):
    grown = (rect.sigma_min - margin, rect.sigma_max + margin, rect.t_min - margin, rect.t_max + margin)
    for z in closed_form_zeros(factors, rect):
        inside = grown[0] < z.real < grown[1] and grown[2] < z.imag < grown[3]
        edge = min(abs(z.real - rect.sigma_min), abs(z.real - rect.sigma_max),
                   abs(z.imag - rect.t_min), abs(z.imag - rect.t_max))
        if inside and edge < margin:
            return True
    return False


def test_rectangle_validation():
    with pytest.raises(DomainError):
        Rectangle(0.9, 2, 0, 1)
    with pytest.raises(DomainError):
        Rectangle(1.5, 1.2, 0, 1)
    r = Rectangle.around(2 + 3j, 0.5)
    assert r.contains(2 + 3j) and not r.contains(3 + 3j)


def test_winding_simple_factor():
    F = dirichlet_product([(2, 1.5)])
    # zeros at 1.5 + 2 pi i k / log 2, spacing about 9.06
    assert winding_count(F, Rectangle(1.2, 1.8, -1, 1)) == 1
    assert winding_count(F, Rectangle(1.2, 1.8, -1, 19)) == 3
    assert winding_count(F, Rectangle(1.6, 1.8, -1, 19)) == 0


@settings(max_examples=20, deadline=None)
@given(
    st.lists(st.tuples(st.sampled_from([2, 3, 5, 7, 10]), st.floats(1.1, 2.5)), min_size=1, max_size=3),
    st.floats(1.01, 2.0), st.floats(0.3, 1.5), st.floats(-20, 20), st.floats(2, 15),
)
# a double zero 0.008 beside an edge: its near-2 pi turn once aliased to a small jump
@example([(3, 2.25), (3, 2.25)], 1.9375, 0.3046875, 0.0, 6.0)
def test_winding_matches_closed_form(factors, a, w, t0, h):
    rect = Rectangle(a, a + w, t0, t0 + h)
    assume(not near_contour(factors, rect))
    assert winding_count(dirichlet_product(factors), rect) == expected_zeros(factors, rect)


def test_winding_boundary_zero_raises():
    F = dirichlet_product([(2, 1.5)])
    with pytest.raises(BoundaryZeroError):
        winding_count(F, Rectangle(1.5, 1.8, -1, 1))


def test_winding_accepts_eval_results_and_uses_error():
    F = lambda s: EvalResult(s - 1.5, 0.0)
    assert winding_count(F, Rectangle(1.2, 1.8, -1, 1)) == 1
    noisy = lambda s: (s - 1.5, 1.0)
    with pytest.raises(BoundaryZeroError):
        winding_count(noisy, Rectangle(1.2, 1.8, -1, 1))


def test_newton_polishes_to_closed_form():
    F = dirichlet_product([(3, 1.7)])
    z = complex(1.7, 2 * math.pi / math.log(3))
    rep = newton_polish(F, z + 0.05 - 0.08j)
    assert rep.certified and rep.winding == 1
    assert abs(rep.location - z) < 1e-10


def test_newton_reports_stationary_failure():
    rep = newton_polish(lambda s: 1 + 0 * s, 2 + 0j)
    assert not rep.certified and rep.flag == "stationary point"


def test_newton_start_must_be_in_half_plane():
    with pytest.raises(DomainError):
        newton_polish(lambda s: s, 0.5 + 0j)


def test_grid_scan_finds_minima():
    F = dirichlet_product([(2, 1.5)])
    c = grid_scan(F, Rectangle(1.2, 1.8, -1, 10), 41)
    # grid spacing is 0.015 x 0.275
    assert any(abs(x.s - 1.5) < 0.15 for x in c)
    with pytest.raises(DomainError):
        grid_scan(F, Rectangle(1.2, 1.8, -1, 10), 1)


def test_combo_evaluator_matches_mpmath():
    F = ComboEvaluator(ComboSpec(zeta_spec(), 2))
    s = 1.05 + 77j
    v, err = F(s)
    exact = complex(mpmath.zeta(s) + mpmath.zeta(2 * s))
    assert abs(v - exact) <= err + 1e-13
    vals, errs = F(np.array([1.5 + 1j, 2.0 + 0j]))
    assert vals.shape == (2,)
    assert vals[1] == pytest.approx(math.pi**2 / 6 + math.pi**4 / 90)


def zeta_k_23(k):
    return ComboEvaluator(ComboSpec(zeta_power_spec(k), 3), dilations=(2, 3))


def test_certified_zero_of_zeta_power_combination():
    res = hunt_zeros(zeta_k_23(9), Rectangle(1.001, 1.3, 30, 40), grid_n=96)
    cert = [z for z in res.zeros if z.certified]
    assert cert
    for z in cert:
        # independent high-precision residual
        with mpmath.workdps(30):
            s = mpmath.mpc(z.location.real, z.location.imag)
            val = mpmath.zeta(2 * s) ** 9 + mpmath.zeta(3 * s) ** 9
        assert abs(complex(val)) < 1e-8
        assert z.winding == 1
    assert any(abs(z.location - (1.0345335481 + 37.6935470964j)) < 1e-8 for z in cert)


def test_certified_reports_satisfy_refinement_property():
    F = zeta_k_23(12)
    res = hunt_zeros(F, Rectangle(1.001, 1.3, 0, 30), grid_n=96)
    fine = F.refined()
    for z in res.zeros:
        if z.certified:
            assert abs(fine(z.location)[0]) < 1e-8 and z.winding == 1
            assert set(z.to_json()) == {"s", "residual", "winding", "certified"}


def test_zeta_plus_zeta_2s_search_emits_only_valid_reports():
    F = ComboEvaluator(ComboSpec(zeta_spec(), 2))
    res = hunt_zeros(F, Rectangle(1.001, 1.2, 0, 60), grid_n=64)
    for z in res.zeros:
        if z.certified:
            assert abs(F.refined()(z.location)[0]) < 1e-8 and z.winding == 1
    assert res.min_modulus > 0
