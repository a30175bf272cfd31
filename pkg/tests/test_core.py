import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzeros.characters import (
    all_characters,
    character_from_json,
    character_from_table,
    primitive_root,
    totient,
    validate_character,
)
from lzeros.emaclaurin import L_em, eval_L_em, hurwitz_zeta
from lzeros.errors import DomainError, PrecisionError, ValidationError
from lzeros.lfunc import (
    EvalResult,
    LFunctionSpec,
    coefficient_tail,
    dirichlet_spec,
    eval_L,
    eval_L_direct,
    eval_log_L,
    log_tail_bound,
    prime_sum,
    zeta_power_spec,
    zeta_spec,
)
from lzeros.primes import primes_upto, sieve_primes


def trial_division_primes(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, int(p**0.5) + 1))]


def chi5():
    return character_from_table(5, {2: 1j})


# ---------------------------------------------------------------- primes

@pytest.mark.parametrize("n", [2, 3, 10, 97, 100, 1000])
def test_sieve_matches_trial_division(n):
    assert primes_upto(n).tolist() == trial_division_primes(n)


def test_prime_counts():
    assert len(primes_upto(10**5)) == 9592
    assert len(primes_upto(10**6)) == 78498


def test_sieve_table_and_errors():
    t = sieve_primes(30)
    assert list(t) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(t) == 10
    with pytest.raises(DomainError):
        sieve_primes(1)
    assert len(primes_upto(1)) == 0


def test_prime_table_read_only():
    with pytest.raises(ValueError):
        primes_upto(100)[0] = 4


# ---------------------------------------------------------------- characters

def test_character_mod5_from_generator():
    chi = chi5()
    assert chi(2) == pytest.approx(1j)
    assert chi(4) == pytest.approx(-1)
    assert chi(3) == pytest.approx(-1j)
    assert chi(5) == 0 and chi(10) == 0
    validate_character(chi)


def test_principal_and_trivial_modulus():
    assert character_from_table(1, {})(7) == 1
    chi = character_from_table(7, {3: 1})
    assert chi.is_principal
    assert chi(7) == 0


def test_character_rejects_bad_order():
    # ord(4) mod 5 is 2, so chi(4) cannot be i
    with pytest.raises(ValidationError, match="order"):
        character_from_table(5, {4: 1j})


def test_character_rejects_clash():
    with pytest.raises(ValidationError):
        character_from_table(5, {2: 1j, 4: 1})


def test_character_rejects_non_generating():
    with pytest.raises(ValidationError, match="generate"):
        character_from_table(5, {4: -1})


def test_character_rejects_nonzero_on_common_factor():
    with pytest.raises(ValidationError):
        character_from_table(6, {3: 1, 5: -1})


def test_character_json_round_trip(tmp_path):
    chi = chi5()
    path = tmp_path / "chi.json"
    import json

    path.write_text(json.dumps(chi.to_json()))
    again = character_from_json(path)
    assert np.allclose(again.table(), chi.table())
    with pytest.raises(ValidationError):
        character_from_json({"values": {}})


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 12, 15])
def test_all_characters_count_and_orthogonality(q):
    chars = all_characters(q)
    assert len(chars) == totient(q)
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            s = sum(a(n) * b(n).conjugate() for n in units)
            assert abs(s - (totient(q) if i == j else 0)) < 1e-9


@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(0, 100))
def test_random_prime_modulus_character_is_multiplicative(q, j):
    g = primitive_root(q)
    chi = character_from_table(q, {g: cmath.exp(2j * math.pi * j / (q - 1))})
    validate_character(chi)
    for m in range(q):
        for n in range(q):
            assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-9


# ---------------------------------------------------------------- coefficients

def divisor_count(n, k):
    """d_k(n) by brute-force Dirichlet convolution."""
    if k == 1:
        return 1
    return sum(divisor_count(n // d, k - 1) for d in range(1, n + 1) if n % d == 0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_zeta_power_coefficients_are_divisor_functions(m):
    a = zeta_power_spec(m).coefficients(200)
    for n in range(1, 201):
        assert a[n].real == pytest.approx(divisor_count(n, m))


def test_dirichlet_coefficients_are_character_values():
    chi = chi5()
    a = dirichlet_spec(chi).coefficients(500)
    assert np.allclose(a[1:], chi.at(np.arange(1, 501)))


@given(st.integers(2, 50), st.integers(1, 6), st.floats(-3, 3), st.floats(-3, 3))
def test_prime_power_recursion_matches_exponential(p, kmax, x, y):
    # single log-coefficient b(p) = c, others 0: a(p^k) = c^k / k!
    c = complex(x, y)
    spec = LFunctionSpec(lambda q, k: c if k == 1 else 0, 3.0, 0.0, "test")
    a = spec.prime_power_coeffs(p, kmax)
    for k in range(kmax + 1):
        assert a[k] == pytest.approx(c**k / math.factorial(k), rel=1e-12, abs=1e-12)


# ---------------------------------------------------------------- evaluation

def test_zeta_values_against_closed_forms():
    z = zeta_spec()
    for s, exact in [(2, math.pi**2 / 6), (4, math.pi**4 / 90), (3, float(mpmath.zeta(3)))]:
        r = eval_L(z, s)
        assert abs(r.value - exact) <= r.tail_bound
        assert abs(eval_L_em(z, s).value - exact) < 1e-14


def test_log_l_tail_is_rigorous_at_two():
    r = eval_log_L(zeta_spec(), 2.0, prime_cutoff=1000)
    assert abs(r.value - math.log(math.pi**2 / 6)) <= r.tail_bound


def test_eval_rejects_left_half_plane():
    with pytest.raises(DomainError):
        eval_L(zeta_spec(), 1.0)
    with pytest.raises(DomainError):
        eval_L(zeta_spec(), 0.5 + 3j)


def test_log_tail_needs_room():
    with pytest.raises(PrecisionError):
        log_tail_bound(1.0, 0.0, 1.0, 100, 10, primes_upto(100))


def test_eval_result_rejects_infinite_tail():
    with pytest.raises(PrecisionError):
        EvalResult(1.0, math.inf)


def test_direct_sum_tolerance():
    with pytest.raises(PrecisionError):
        eval_L_direct(zeta_spec(), 1.5, n_cutoff=100, tol=1e-6)


def test_character_l_value_against_hurwitz_oracle():
    chi = chi5()
    s = 1.7 + 4j
    oracle = sum(complex(chi(r)) * complex(mpmath.zeta(s, r / 5)) for r in range(1, 5)) * 5 ** (-s)
    r = eval_L(dirichlet_spec(chi), s)
    assert abs(r.value - oracle) <= r.tail_bound
    assert abs(eval_L_em(dirichlet_spec(chi), s).value - oracle) < 1e-13


@settings(max_examples=40, deadline=None)
@given(st.floats(1.001, 3.0), st.floats(-300, 300))
def test_euler_maclaurin_against_mpmath(sigma, t):
    s = complex(sigma, t)
    v, err = hurwitz_zeta(s)
    exact = complex(mpmath.zeta(s))
    assert abs(v - exact) <= err + 1e-13 * max(1.0, abs(exact))


def test_euler_maclaurin_powers_and_guard():
    s = 1.2 + 10j
    v, err = L_em(zeta_power_spec(3), s)
    assert abs(v - complex(mpmath.zeta(s)) ** 3) <= err + 1e-12
    custom = LFunctionSpec(lambda p, k: 1 / k, 1.0, 0.0, "custom")
    with pytest.raises(DomainError):
        L_em(custom, s)
    with pytest.raises(DomainError):
        hurwitz_zeta(1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(1.2, 3.0), st.floats(-50, 50), st.sampled_from(["zeta", "chi"]))
def test_euler_product_and_direct_sum_agree_within_tails(sigma, t, which):
    spec = zeta_spec() if which == "zeta" else dirichlet_spec(chi5())
    s = complex(sigma, t)
    e = eval_L(spec, s, prime_cutoff=10**4)
    d = eval_L_direct(spec, s, n_cutoff=10**4)
    assert abs(e.value - d.value) <= e.tail_bound + d.tail_bound


def test_tails_shrink_with_cutoff():
    z = zeta_spec()
    a = eval_L(z, 1.5, prime_cutoff=1000)
    b = eval_L(z, 1.5, prime_cutoff=10**5)
    assert b.tail_bound < a.tail_bound
    assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound


def test_rankin_tail_without_coefficient_bound():
    spec = zeta_power_spec(2)
    tail = coefficient_tail(spec, 10**4, 2.0)
    # brute-force remainder of sum d(n) n^-2 beyond 10^4 to 10^6, plus a generous integral
    a = spec.coefficients(10**6)
    n = np.arange(10**4 + 1, 10**6 + 1, dtype=float)
    partial = float(np.sum(a[10**4 + 1 :].real / n**2))
    assert partial < tail


def test_prime_sum_values():
    r = prime_sum(zeta_spec(), 2.0)
    assert r.value == pytest.approx(0.4522474200410654, abs=1e-5)
    assert r.tail_bound < 1e-4
    with pytest.raises(DomainError):
        prime_sum(zeta_spec(), 1.0)
