from itertools import permutations, combinations

import numpy as np
import pytest

from geoprofile import (SampledFunction, divided_difference, holder_seminorm,
                        whitney_extend, HypothesisViolation)
from geoprofile.calibration import random_whitney_dataset


def brute_divided_difference(x, y):
    """Textbook recursion, independent of the library implementation."""
    if len(x) == 1:
        return y[0]
    return (brute_divided_difference(x[:-1], y[:-1])
            - brute_divided_difference(x[1:], y[1:])) / (x[0] - x[-1])


def test_second_difference_of_square():
    s = SampledFunction(np.array([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 4.0]))
    assert divided_difference(s, [0, 1, 2]) == 1.0


def test_constant_vanishes():
    s = SampledFunction(np.array([0.0, 0.5, 2.0]), np.full(3, 3.7))
    assert divided_difference(s, [0, 1, 2]) == 0.0


def test_cubic_leading_coefficient():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    s = SampledFunction(x, x ** 3)
    got = divided_difference(s, [0, 1, 2, 3])
    expect = brute_divided_difference(list(x), list(x ** 3))
    assert abs(got - expect) < 1e-14
    assert abs(got - 1.0) < 1e-14


def test_permutation_symmetry(rng):
    x = np.sort(rng.uniform(0, 1, 7))
    y = rng.normal(size=7)
    s = SampledFunction(x, y)
    for size in (2, 3, 4, 5):
        for subset in combinations(range(7), size):
            base = divided_difference(s, list(subset))
            for perm in list(permutations(subset))[:8]:
                # permuted index lists must give the same value
                xs = x[list(perm)]
                ys = y[list(perm)]
                val = brute_divided_difference(list(xs), list(ys))
                assert abs(val - base) < 1e-9 * max(1, abs(base))


def test_duplicate_points_rejected():
    s = SampledFunction(np.array([0.0, 1.0, 2.0]), np.zeros(3))
    with pytest.raises(ValueError):
        divided_difference(s, [0, 1, 1])


def test_holder_seminorm_constant_and_linear():
    x = np.linspace(0, 1, 50)
    assert holder_seminorm(SampledFunction(x, np.ones(50)), 0.5) == 0.0
    assert abs(holder_seminorm(SampledFunction(x, x), 1.0) - 1.0) < 1e-12


def test_holder_seminorm_sqrt_on_dyadic_grid():
    x = np.concatenate(([0.0], np.sort(2.0 ** -np.arange(1, 20, dtype=float))))
    y = np.sqrt(x)
    got = holder_seminorm(SampledFunction(x, y), 0.5)
    # brute force over pairs
    brute = 0.0
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            brute = max(brute, abs(y[i] - y[j]) / abs(x[i] - x[j]) ** 0.5)
    assert abs(got - brute) < 1e-12
    assert abs(got - 1.0) < 1e-12


def test_two_point_extension_is_line():
    s = SampledFunction(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    ext = whitney_extend(s, 1.0, 1.0, 1.0, (0.0, 1.0))
    g = np.linspace(0, 1, 101)
    assert np.max(np.abs(ext(g) - g)) < 1e-14
    assert abs(ext.measured_sup_deriv - 1.0) < 1e-12


def test_quadratic_extension_bounds():
    x = np.array([0.0, 0.5, 1.0])
    s = SampledFunction(x, x ** 2)
    # secants have slope <= 1.5, slope gaps <= 2 * diam
    ext = whitney_extend(s, 1.0, 1.6, 2.0, (0.0, 1.0))
    assert np.max(np.abs(ext(x) - x ** 2)) < 1e-12
    assert ext.measured_holder_deriv <= 2.0 * ext.c_w + 1e-9


def test_interpolation_exactness(rng):
    for _ in range(20):
        s, T1, T2, interval = random_whitney_dataset(rng)
        ext = whitney_extend(s, 0.5, T1, T2, interval)
        assert np.max(np.abs(ext(s.x) - s.y)) <= 1e-12 * max(
            1.0, np.max(np.abs(s.y)))


def test_violation_reports_witness():
    x = np.array([0.0, 0.5, 1.0])
    y = np.array([0.0, 10.0, 0.0])   # violates both conditions by far
    s = SampledFunction(x, y)
    with pytest.raises(HypothesisViolation) as err:
        whitney_extend(s, 1.0, 1.0, 1.0, (0.0, 1.0))
    assert len(err.value.witness) >= 2


def test_interval_length_guard():
    s = SampledFunction(np.array([0.0, 1.0]), np.array([0.0, 0.5]))
    with pytest.raises(HypothesisViolation):
        whitney_extend(s, 0.5, 1.0, 100.0, (0.0, 1.0))


def test_scaling_covariance(rng):
    """Extending f(lambda x) and rescaling equals rescaling the extension."""
    alpha = 0.5
    s, T1, T2, _ = random_whitney_dataset(rng)
    lam = (T1 / T2) ** (1 / alpha)
    ext = whitney_extend(s, alpha, T1, T2, (0.0, 1.0))
    xs = s.x / lam
    ss = SampledFunction(xs, s.y)
    ext_s = whitney_extend(ss, alpha, T1 * lam, T2 * lam ** (1 + alpha),
                           (0.0, 1.0 / lam))
    g = np.linspace(0, 1, 257)
    a = ext(g)
    b = ext_s(g / lam)
    assert np.max(np.abs(a - b)) < 1e-10 * max(1.0, np.max(np.abs(a)))


def test_finiteness_surrogate_second_differences(rng):
    """If all 4-point divided differences are bounded, the second
    difference-quotient field has bounded Hölder seminorm."""
    alpha = 0.5
    t = np.linspace(0.0, 1.0, 400)
    y = np.sin(3.0 * t) + 0.2 * t ** 2
    s = SampledFunction(t, y)
    # A = sup |f[X]| diam(X)^(1-alpha) over random 4-point subsets
    A = 0.0
    for _ in range(2000):
        idx = np.sort(rng.choice(400, size=4, replace=False))
        val = brute_divided_difference(list(t[idx]), list(y[idx]))
        A = max(A, abs(val) * (t[idx[-1]] - t[idx[0]]) ** (1 - alpha))
    # second difference-quotient field ~ f''/2
    quot = np.array([
        brute_divided_difference(list(t[i - 1:i + 2]), list(y[i - 1:i + 2]))
        for i in range(1, 399)])
    semi = holder_seminorm(SampledFunction(t[1:-1], quot), alpha)
    assert semi <= 8.0 * A
