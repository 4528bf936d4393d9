"""Acceptance gate: every criterion runs at its stated tolerance and prints
one pass/fail line (visible under ``pytest -s``)."""

import time
from contextlib import contextmanager

import numpy as np

from embedlab import classify, embed, numkit, structure
from helpers import (
    DIVISIBLE_TRIANGLE,
    GEN_A,
    GEN_B,
    NONCONVEX_2X2,
    SCALED_TRIANGLE,
    min_eig_gap,
    random_intensity,
    random_inverse_m,
    random_permutation_matrix,
    random_shifted_z,
    random_sparse_intensity,
    random_stochastic,
)
from test_embed import make_symmetric_stochastic_with_det

CFG = numkit.DEFAULT_TOL


@contextmanager
def criterion(number, description):
    try:
        yield
    except Exception:
        print(f"[criterion {number}] FAIL: {description}", flush=True)
        raise
    print(f"[criterion {number}] PASS: {description}", flush=True)


def test_criterion_1_counterexample_suite():
    with criterion(1, "triangular product fixtures: inverse-M factors, one product order embeddable"):
        start = time.perf_counter()
        trans_a = numkit.expm(GEN_A)
        trans_b = numkit.expm(GEN_B)

        assert classify.classify_matrix(trans_a).flags["inverse_m_matrix"]
        assert classify.classify_matrix(trans_b).flags["inverse_m_matrix"]

        bad = embed.check_embeddable(trans_b @ trans_a)
        assert bad.verdict == embed.NOT_EMBEDDABLE
        witnesses = [
            r for r in bad.failed_conditions if r.get("reason") == "off_diagonal_negative"
        ]
        assert witnesses and witnesses[0]["branch"] == (0, 0, 0)
        assert witnesses[0]["value"] < -CFG.entry_tol

        good = embed.check_embeddable(trans_a @ trans_b)
        assert good.verdict == embed.EMBEDDABLE
        off = good.generator[~np.eye(3, dtype=bool)]
        assert np.min(off) >= -1e-9

        assert time.perf_counter() - start < 1.0


def test_criterion_2_exponential_values():
    with criterion(2, "exp of the first fixture generator matches its three-decimal rendering"):
        expected = np.array([[0.135, 0.233, 0.632], [0.0, 0.368, 0.632], [0.0, 0.0, 1.0]])
        assert np.max(np.abs(numkit.expm(GEN_A) - expected)) < 5e-4


def test_criterion_3_branch_count():
    with criterion(3, "one-sided bound yields 16 raw branch tuples at n=5, det=1e-5"):
        P = make_symmetric_stochastic_with_det(np.random.default_rng(7), 5, 1e-5)
        det = float(np.linalg.det(P))
        assert abs(det - 1e-5) < 1e-8
        bound = embed.branch_bound(numkit.eig(P), det, "paper_one_sided")
        assert bound.raw_tuple_count == 16


def test_criterion_4_diagonal_scaling():
    with criterion(4, "column rescaling flips the divisibility verdict of the triangular fixture"):
        assert (
            embed.check_strong_inf_divisible(DIVISIBLE_TRIANGLE).verdict
            == embed.STRONGLY_INF_DIVISIBLE
        )
        assert (
            embed.check_strong_inf_divisible(SCALED_TRIANGLE).verdict
            == embed.NOT_STRONGLY_INF_DIVISIBLE
        )


def test_criterion_5_nonconvexity_pair():
    with criterion(5, "2x2 fixture and transpose divisible while det(A + A^T) = -1.64"):
        for A in (NONCONVEX_2X2, NONCONVEX_2X2.T):
            assert (
                embed.check_strong_inf_divisible(A).verdict
                == embed.STRONGLY_INF_DIVISIBLE
            )
        det = float(np.linalg.det(NONCONVEX_2X2 + NONCONVEX_2X2.T))
        assert det < 0
        assert abs(det - (-1.64)) < 1e-12


def test_criterion_6_two_state_oracle():
    with criterion(6, "2x2 verdicts match the determinant criterion on the 19x19 grid"):
        start = time.perf_counter()
        disagreements = 0
        for i in range(1, 20):
            for j in range(1, 20):
                a, b = i / 20.0, j / 20.0
                P = np.array([[1 - a, a], [b, 1 - b]])
                verdict = embed.check_embeddable(P).verdict
                if (verdict == embed.EMBEDDABLE) != (20 - i - j > 0):
                    disagreements += 1
        assert disagreements == 0
        assert time.perf_counter() - start < 5.0


def test_criterion_7_property_suites():
    start = time.perf_counter()
    rng = np.random.default_rng(20150806)

    with criterion("7a", "imaginary parts of generator spectra stay inside the eigenvalue bound"):
        failures = 0
        for _ in range(300):
            n = int(rng.integers(2, 7))
            # shift keeps the eigenvalue paired with the nonnegative
            # eigenvector at or above zero, the regime the bound covers
            Q = random_shifted_z(rng, n)
            B = numkit.expm(-Q)
            _, lam_tilde = classify.nonneg_eigvec_of_z(Q)
            radius = abs(lam_tilde * (n - 1) - np.log(np.linalg.det(B)))
            worst = float(np.max(np.abs(np.linalg.eigvals(Q).imag)))
            if worst > radius + 1e-8:
                failures += 1
        assert failures == 0

    with criterion("7b", "exponentials of irreducible generators are strictly positive"):
        failures = 0
        for _ in range(300):
            n = int(rng.integers(2, 7))
            B = numkit.expm(random_intensity(rng, n))
            if not (classify.is_irreducible(B, CFG) and np.min(B) > CFG.entry_tol):
                failures += 1
        assert failures == 0

    with criterion("7c", "zero-pattern invariance holds on constructed generator pairs"):
        failures = 0
        for _ in range(300):
            n = int(rng.integers(2, 7))
            Q = -random_sparse_intensity(rng, n) + rng.uniform(0.0, 1.0) * np.eye(n)
            B = numkit.expm(-Q)
            if structure.zero_pattern_invariance(B, Q, CFG):
                failures += 1
        assert failures == 0

    with criterion("7d", "primary roots of inverse-M matrices stay inverse-M"):
        failures = 0
        orders = (2, 3, 5, 7)
        for k in range(300):
            n = int(rng.integers(2, 7))
            B = random_inverse_m(rng, n)
            root = numkit.primary_root(B, orders[k % 4])
            if not classify.classify_matrix(root).flags["inverse_m_matrix"]:
                failures += 1
        assert failures == 0

    with criterion("7e", "products of commuting embeddable chains stay embeddable"):
        failures = 0
        done = 0
        while done < 300:
            n = int(rng.integers(2, 6))
            R = random_intensity(rng, n)
            coeff_a, coeff_b = rng.uniform(0.1, 0.7, 2)
            first = coeff_a * R
            second = coeff_b * R + rng.uniform(0.0, 0.1) * (R @ R)
            off = second[~np.eye(n, dtype=bool)]
            if np.min(off) <= CFG.entry_tol:
                continue  # quadratic term must keep the rates nonnegative
            product = numkit.expm(first) @ numkit.expm(second)
            if min_eig_gap(product) < CFG.distinct_tol or np.linalg.det(product) < 1e-6:
                continue
            done += 1
            if embed.check_embeddable(product).verdict != embed.EMBEDDABLE:
                failures += 1
        assert failures == 0

    with criterion("7f", "relabeling the states never changes the verdict"):
        failures = 0
        for k in range(300):
            n = int(rng.integers(2, 6))
            P = (
                numkit.expm(random_intensity(rng, n))
                if k % 2
                else random_stochastic(rng, n)
            )
            L = random_permutation_matrix(rng, n)
            if (
                embed.check_embeddable(P).verdict
                != embed.check_embeddable(L @ P @ L.T).verdict
            ):
                failures += 1
        assert failures == 0

    elapsed = time.perf_counter() - start
    print(f"[criterion 7] property suites completed in {elapsed:.1f}s", flush=True)
    assert elapsed < 60.0
