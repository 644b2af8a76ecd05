"""Acceptance criteria for the full build.

Each test covers one shipped criterion at its stated tolerance and prints a
single PASS/FAIL line (visible with pytest -s or in failure reports).
"""

import contextlib
import io
import json
import math
import random
import time
from fractions import Fraction

import pytest

from tensornorm import cli
from tensornorm._colgen import SolverOptions
from tensornorm.chebyshev import (binary_lower_bound, binary_lower_bound_max,
                                  cheb_coefficients, optimal_decomposition_m2, psi)
from tensornorm.euclid2 import (constants_l2, half_circle_lp,
                                positive_wedge_lp, trace_norm_2x2)
from tensornorm.exchangeable import (kappa_nN_bounds, load_distribution,
                                     mu_binary, partition_log_slack, represent,
                                     uv_bound, verify_representation)
from tensornorm.norm_solver import (_kappa_cached, cssp_l1, l1, norm_pi,
                                    norm_pip, norm_pis, norm_pisp)
from tensornorm.tensor_core import (multi_indices, polarization_expand,
                                    pos_neg_split, power, tensor_pushforward,
                                    vandermonde_decomposition, wedge)

FAST = SolverOptions(tol=1e-6, max_rounds=150)


@contextlib.contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except BaseException:
        print(f"criterion-{number:02d} [{label}]: FAIL")
        raise
    print(f"criterion-{number:02d} [{label}]: PASS")


def random_exchangeable(rng, m, n):
    idxs = multi_indices(m, n)
    weights = [rng.random() for _ in idxs]
    total = sum(weights)
    return load_distribution([(idx, w / total) for idx, w in zip(idxs, weights)],
                             states=range(m), order=n)


def test_01_kappa_two_exact():
    with criterion(1, "order-2 mixing constant equals 3 with optimal witness"):
        _kappa_cached.cache_clear()
        t0 = time.perf_counter()
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(["kappa", "--n", "2"])
        elapsed = time.perf_counter() - t0
        assert code == 0
        payload = json.loads(buf.getvalue())
        assert payload["lower"] >= 3.0 - 1e-6
        assert payload["upper"] <= 3.0 + 1e-6
        atoms = sorted((round(a["w"], 9), tuple(round(v, 9) for v in a["x"]))
                       for a in payload["primal"])
        assert atoms == [(-0.5, (0.0, 1.0)), (-0.5, (1.0, 0.0)), (2.0, (0.5, 0.5))]
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_02_closed_form_vs_lp_brackets():
    with criterion(2, "closed form inside LP bracket, gap <= 1e-5"):
        t0 = time.perf_counter()
        rng = random.Random(20240801)
        for n in range(1, 7):
            for _ in range(50):
                a = rng.uniform(0.1, 1.0)
                b = -rng.uniform(0.1, 1.0)
                nb = norm_pisp(power((a, b), n), l1(2))
                value = psi(a, b, n)
                assert nb.lower - 1e-7 <= value <= nb.upper + 1e-7, (a, b, n)
                assert nb.gap() <= 1e-5, (a, b, n, nb.gap())
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0, f"took {elapsed:.1f}s"


def test_03_power_ratio_constant():
    with criterion(3, "power-ratio constant equals 2^(n-1), max at a = -b"):
        t0 = time.perf_counter()
        for n in range(1, 9):
            nb = cssp_l1(n)
            assert nb.contains(2.0 ** (n - 1), 1e-6), n
            c = math.cos(math.pi / 4)
            peak = psi(c, -c, n) / (2 * c) ** n
            for i in range(513):
                theta = (math.pi / 2) * i / 512
                a, b = math.cos(theta), -math.sin(theta)
                ratio = psi(a, b, n) / (abs(a) + abs(b)) ** n
                assert ratio <= peak + 1e-12
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_04_antidiagonal_closed_form():
    with criterion(4, "antidiagonal power: value 2^(2n-1) and node reconstruction"):
        for n in range(1, 11):
            assert psi(1.0, -1.0, n) == 2.0 ** (2 * n - 1)
            dec = optimal_decomposition_m2(1.0, -1.0, n)
            assert dec.reconstruction_residual() <= 1e-10
            assert abs(dec.total_variation - 2.0 ** (2 * n - 1)) \
                <= 1e-10 * 2.0 ** (2 * n - 1)


def test_05_interpolation_identities():
    with criterion(5, "interpolation weights: sum 1, alternating, cost identity"):
        rng = random.Random(55)
        for n in range(1, 9):
            for _ in range(20):
                a = rng.uniform(0.5, 2.0)
                b = rng.uniform(0.05, 0.5) * a
                c = cheb_coefficients(a, b, n)
                assert abs(math.fsum(c) - 1.0) <= 1e-9
                for j, cj in enumerate(c):
                    assert cj * (-1) ** j > 0
                assert abs(math.fsum(abs(x) for x in c) * (a - b) ** n
                           - psi(a, -b, n)) <= 1e-9 * max(1.0, psi(a, -b, n))
                xi = (a + b) / (a - b)
                for k in (0, 1, n):
                    got = math.fsum(cj * math.cos(j * math.pi / n) ** k
                                    for j, cj in enumerate(c))
                    assert abs(got - xi ** k) <= 1e-9 * max(1.0, xi ** k)


def test_06_sharpened_upper_bound():
    with criterion(6, "sharpened mixing bound: exact at order 2, inside envelope"):
        assert uv_bound(2) == 3.0
        for n in range(1, 13):
            val = uv_bound(n)
            lo = n ** n / math.factorial(n)
            hi = 2 ** (n - 1) * n ** n / math.factorial(n)
            assert lo - 1e-9 <= val <= hi + 1e-9


def test_07_binary_bounds():
    with criterion(7, "two-state bounds: exact ratios and LP domination"):
        assert binary_lower_bound_max(2) == Fraction(3)
        assert binary_lower_bound_max(3) == Fraction(5)
        assert binary_lower_bound_max(4) == Fraction(35, 3)
        for n in range(1, 5):
            for j in range(n + 1):
                nb = norm_pisp(mu_binary(n, j).tensor, l1(2), FAST)
                assert nb.upper >= float(binary_lower_bound(n, j)) - 1e-7, (n, j)


def test_08_mixture_pipeline():
    with criterion(8, "random exchangeable laws: residual, mass, variation order"):
        t0 = time.perf_counter()
        rng = random.Random(88)
        cases = [(m, n) for m in (2, 3) for n in (2, 3, 4)]
        for i in range(100):
            m, n = cases[i % len(cases)]
            d = random_exchangeable(rng, m, n)
            lp = represent(d, "lp", FAST)
            rep = verify_representation(d, lp)
            assert rep["residual"] <= 1e-8
            assert abs(rep["weight_sum"] - 1.0) <= 1e-8
            assert lp.total_variation <= uv_bound(n) + 1e-6
            con = represent(d, "constructive", FAST)
            rep_c = verify_representation(d, con)
            assert rep_c["residual"] <= 1e-8
            assert lp.total_variation <= con.total_variation + 1e-6
        elapsed = time.perf_counter() - t0
        assert elapsed < 120.0, f"took {elapsed:.1f}s"


def test_09_extendibility():
    with criterion(9, "without-replacement values inside bounds, decreasing"):
        uppers = []
        for N in (2, 3, 4, 5):
            eb = kappa_nN_bounds(2, N, exact=True, opts=FAST)
            assert eb.lp_value.converged
            assert eb.lp_value.upper >= eb.lower - 1e-6
            assert eb.lp_value.lower <= eb.upper + 1e-6
            if N == 3:
                assert eb.upper == pytest.approx(3.0, abs=1e-12)
            uppers.append(eb.lp_value.upper)
        for a, b in zip(uppers, uppers[1:]):
            assert b <= a + 1e-6
        rng = random.Random(909)
        for _ in range(1000):
            n = rng.randint(1, 12)
            parts = []
            rem = n
            while rem:
                p = rng.randint(1, rem)
                parts.append(p)
                rem -= p
            t = rng.uniform(0.0, 0.999999)
            assert partition_log_slack(parts, t) >= -1e-12


def test_10_euclidean_gallery():
    with criterion(10, "plane gallery: closed values, witness, constants"):
        off = [[0.0, 1.0], [1.0, 0.0]]
        anti = [[1.0, -1.0], [-1.0, 1.0]]
        assert trace_norm_2x2(off) == pytest.approx(2.0, abs=1e-9)
        assert positive_wedge_lp(off, FAST).contains(2.0, 1e-6)
        assert half_circle_lp(off, FAST).contains(4.0, 1e-6)
        assert trace_norm_2x2(anti) == pytest.approx(2.0, abs=1e-9)
        assert positive_wedge_lp(anti, FAST).contains(4.0, 1e-6)
        assert half_circle_lp(anti, FAST).contains(6.0, 1e-6)
        nb = half_circle_lp(off, FAST)
        atoms = {}
        for w, x in nb.primal.terms:
            key = round(math.atan2(x[1], x[0]), 8)
            atoms[key] = atoms.get(key, 0.0) + w
        assert abs(atoms[round(math.pi / 4, 8)] - 2.0) <= 1e-6
        assert abs(atoms[round(0.0, 8)] + 1.0) <= 1e-6
        assert abs(atoms[round(math.pi / 2, 8)] + 1.0) <= 1e-6
        rec = constants_l2(FAST)
        lo, hi = rec["verified"]["csp_sample_bracket"]
        assert lo <= 3.0 + 1e-6 and hi >= 3.0 - 1e-6
        assert rec["verified"]["cpsp_sample_max"] == pytest.approx(2.0, abs=1e-9)
        assert rec["verified"]["cp_squared_sample_max"] == pytest.approx(2.0, abs=1e-9)


def test_11_property_suites():
    with criterion(11, "randomised property suites, 500 cases each"):
        rng = random.Random(111)

        # symmetrisation expands into signed powers and reconstructs
        for _ in range(500):
            m = rng.randint(2, 3)
            n = rng.randint(1, 4)
            vecs = [tuple(rng.uniform(-1, 1) for _ in range(m)) for _ in range(n)]
            comb = polarization_expand(vecs)
            assert comb.evaluate().residual_inf(wedge(vecs)) <= 1e-12

        # node decompositions reconstruct powers with positive vectors
        for case in range(500):
            m = rng.randint(2, 3)
            n = rng.randint(1, 5)
            if case % 2 == 0:
                x = tuple(rng.randint(-3, 3) for _ in range(m))
                comb = vandermonde_decomposition(x, n, exact=True)
                assert comb.evaluate(exact=True).entries == \
                    power(x, n, exact=True).entries
            else:
                x = tuple(rng.uniform(-2, 2) for _ in range(m))
                comb = vandermonde_decomposition(x, n)
                scale = max(1.0, comb.cost(p=1))
                assert comb.evaluate().residual_inf(power(x, n)) <= 1e-10 * scale
            for _, vec in comb.terms:
                assert all(v >= 0 for v in vec)

        # positive unit-column maps never increase the positive power norm
        for _ in range(500):
            n = rng.randint(2, 4)
            t = _random_tensor(rng, 2, n)
            u1, u2 = rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98)
            M = [[u1, u2], [1 - u1, 1 - u2]]
            before = norm_pisp(t, l1(2), FAST)
            after = norm_pisp(tensor_pushforward(M, t), l1(2), FAST)
            assert after.upper <= before.upper + 1e-6

        # bracketed norm chain
        for _ in range(500):
            n = rng.randint(2, 4)
            t = _random_tensor(rng, 2, n)
            pi_b = norm_pi(t, l1(2))
            pis_b = norm_pis(t, l1(2), FAST)
            pisp_b = norm_pisp(t, l1(2), FAST)
            pip_b = norm_pip(t, l1(2))
            tol = 1e-6
            assert pi_b.upper <= pis_b.upper + tol
            assert pi_b.lower <= pis_b.lower + tol
            assert pis_b.upper <= pisp_b.upper + tol
            assert pis_b.lower <= pisp_b.lower + tol
            assert pip_b.upper <= pisp_b.upper + tol
            assert pip_b.lower <= pisp_b.lower + tol

        # degree-one homogeneity of every norm operation
        for _ in range(500):
            n = rng.randint(1, 5)
            a, b = rng.uniform(0.1, 1.5), -rng.uniform(0.1, 1.5)
            c = rng.choice([-1, 1]) * rng.uniform(0.25, 4.0)
            base = psi(a, b, n)
            assert psi(c * a, c * b, n) == pytest.approx(abs(c) ** n * base,
                                                         rel=1e-9)
            t = power((a, b), n)
            nb1 = norm_pi(t, l1(2))
            nb2 = norm_pi(t.scaled(c), l1(2))
            assert nb2.upper == pytest.approx(abs(c) * nb1.upper, rel=1e-9)
            s = pos_neg_split((c * a, c * b), p=1)
            assert s.plus_norm == pytest.approx(abs(c) * (abs(a) + abs(b)),
                                                rel=1e-12)


def _random_tensor(rng, m, n):
    from tensornorm.tensor_core import SymmetricTensor
    return SymmetricTensor(m, n, {idx: rng.uniform(-1, 1)
                                  for idx in multi_indices(m, n)})
