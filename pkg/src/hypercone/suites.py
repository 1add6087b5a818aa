"""Randomized invariant suites shared by the ``verify`` command and the demos."""

from dataclasses import dataclass
import time

import numpy as np

from .conelib import ConeSpec, build
from .errors import SingularPivotError
from .lmi import svec
from .membership import MembershipProbe
from .oracle import (check_main_identity, check_polar_identity, majorization_check,
                     orthant_margin, psd_deriv_margin)
from .symlin import charpoly_coeffs, elem_sym


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checked: int
    worst: float
    detail: str
    seconds: float

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag}  {self.name:<22} checked={self.checked:<5} worst={self.worst:.3e}  "
                f"{self.detail} ({self.seconds:.2f}s)")


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def suite_main_identity(rng, n_values=range(2, 9), count=500, tol=1e-8):
    start = time.perf_counter()
    worst = 0.0
    for i in range(count):
        n = n_values[i % len(n_values)]
        worst = max(worst, check_main_identity(rng.uniform(-2, 2, n), rng.uniform(-2, 2)))
    return SuiteResult("main_identity", worst <= tol, count, worst, f"tol={tol:g}",
                       time.perf_counter() - start)


def suite_polar_identity(rng, n_values=range(2, 9), count=500, tol=1e-8):
    start = time.perf_counter()
    worst = 0.0
    checked = 0
    i = 0
    while checked < count:
        n = n_values[i % len(n_values)]
        i += 1
        x = rng.uniform(-2, 2, n)
        for k in range(n):
            try:
                worst = max(worst, check_polar_identity(x, k))
            except SingularPivotError:
                continue
        checked += 1
    return SuiteResult("polar_identity", worst <= tol, checked, worst,
                       f"all k, tol={tol:g}", time.perf_counter() - start)


def suite_majorization(rng, n_values=range(1, 9), count=200):
    start = time.perf_counter()
    failures = 0
    for i in range(count):
        n = n_values[i % len(n_values)]
        G = rng.standard_normal((n, n))
        X = G + G.T
        lam = np.sort(np.linalg.eigvalsh(X))[::-1]
        if not majorization_check(X, lam):
            failures += 1
    return SuiteResult("majorization", failures == 0, count, float(failures),
                       "(X, eig(X)) in Schur-Horn", time.perf_counter() - start)


def suite_oracle_consistency(rng, n_values=range(1, 9), count=300, tol=1e-10):
    """Diagonal matrices: ``E_i(diag(x)) = e_i(x)`` and equal margins."""
    start = time.perf_counter()
    worst = 0.0
    for i in range(count):
        n = n_values[i % len(n_values)]
        x = rng.uniform(-1, 1, n)
        E = charpoly_coeffs(np.diag(x))
        for k in range(1, n + 1):
            e = elem_sym(x, k)
            worst = max(worst, abs(E[k - 1] - e) / max(1.0, abs(e)))
        for k in range(n + 1):
            a = orthant_margin(x, k).margin
            b = psd_deriv_margin(np.diag(x), k).margin
            if np.isfinite(a) or np.isfinite(b):
                worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return SuiteResult("oracle_consistency", worst <= tol, count, worst, f"tol={tol:g}",
                       time.perf_counter() - start)


def suite_representation(rng, n_values=range(2, 5), points=4):
    """A small representation-versus-oracle sweep, both strategies."""
    start = time.perf_counter()
    mismatches = 0
    checked = 0
    for n in n_values:
        for k in range(n + 1):
            for kind in ("orthant", "psd"):
                for strategy in ("deriv", "polar"):
                    if kind == "orthant" and strategy == "polar" and k == n - 1:
                        continue
                    probe = MembershipProbe(build(ConeSpec(kind, n, k, strategy)))
                    done = 0
                    while done < points:
                        x = rng.uniform(0, 2) + rng.standard_normal(n)
                        if kind == "psd":
                            Q = random_orthogonal(rng, n)
                            X = Q @ np.diag(x) @ Q.T
                            oracle = psd_deriv_margin(X, k).margin
                            point = svec(X)
                        else:
                            oracle = orthant_margin(x, k).margin
                            point = x
                        if abs(oracle) < 1e-6:
                            continue
                        done += 1
                        checked += 1
                        if (probe.margin(point) > 0) != (oracle > 0):
                            mismatches += 1
    return SuiteResult("representation", mismatches == 0, checked, float(mismatches),
                       "sign agreement with oracle", time.perf_counter() - start)


SUITES = {
    "identities": (suite_main_identity, suite_polar_identity),
    "oracle": (suite_majorization, suite_oracle_consistency),
    "representation": (suite_representation,),
}


def run_suites(seed=42, names=("identities", "oracle", "representation"), n_max=8):
    """Run the named suites with one seeded generator; returns a list of results."""
    rng = np.random.default_rng(seed)
    results = []
    for name in names:
        for fn in SUITES[name]:
            if fn is suite_representation:
                results.append(fn(rng, n_values=range(2, min(n_max, 4) + 1)))
            elif fn in (suite_majorization, suite_oracle_consistency):
                results.append(fn(rng, n_values=range(1, n_max + 1)))
            else:
                results.append(fn(rng, n_values=range(2, max(n_max, 2) + 1)))
    return results
