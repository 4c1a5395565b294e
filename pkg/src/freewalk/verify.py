"""The acceptance suite: thirteen numbered end-to-end criteria.

Each criterion re-derives published or independently computable values
through the full pipeline (solver, closed forms, metrics, enumeration,
Monte Carlo) and checks them at a fixed tolerance.  Criteria return a
CriterionResult; the CLI ``verify`` subcommand and the acceptance tests
are thin wrappers around ``run_criterion``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import closedform as cf
from .groups import (
    Letter,
    free_product_of_cyclics,
    letter_lengths,
    natural_lengths,
    normal_words,
    sphere_series,
)
from .harmonic import build_chain, cylinder_prob, tau2_invariance_residual, two_factor_identity
from .metrics import (
    drift,
    drift_weighted,
    entropy,
    extremal_cylinders,
    growth_rho,
    quality,
    quality_sup,
    volume,
)
from .simulate import (
    distribution_entropy,
    estimate_drift,
    estimate_hitting,
    estimate_prefix,
    exact_convolution,
    expected_length,
)
from .traffic import StepDistribution, solve_walk
from .walkspec import (
    extremal_walk,
    hecke_simple,
    minimal_generators,
    uniform_per_factor,
    z2z2z2,
    z2z3_walk,
    z3z3_asym,
    z3z3_sym,
    zkzk_simple,
)

SEED = 20240809


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


class _Check:
    """Accumulates labelled tolerance checks for one criterion."""

    def __init__(self):
        self.ok = True
        self.details: list[str] = []

    def close(self, label: str, value: float, target: float, tol: float) -> bool:
        value, target = float(value), float(target)
        err = abs(value - target)
        good = err <= tol
        self.ok &= good
        self.details.append(
            f"{'ok ' if good else 'BAD'} {label}: {value!r} vs {target!r} (|err|={err:.3e}, tol={tol:.0e})"
        )
        return good

    def true(self, label: str, condition: bool, detail: str = "") -> bool:
        self.ok &= condition
        self.details.append(f"{'ok ' if condition else 'BAD'} {label}{(': ' + detail) if detail else ''}")
        return condition


@lru_cache(maxsize=None)
def _solved_zkzk(k: int):
    product, mu = zkzk_simple(k)
    return product, mu, solve_walk(product, mu)


@lru_cache(maxsize=None)
def _solved_hecke(k: int):
    product, mu = hecke_simple(k)
    return product, mu, solve_walk(product, mu)


def criterion_1() -> CriterionResult:
    """Drift table for the simple walks on Z/k * Z/k."""
    chk = _Check()
    closed = {3: 0.25, 4: (math.sqrt(5) - 1) / 4, 5: (math.sqrt(13) - 1) / 8}
    numeric = {6: 0.330851, 7: 0.332515, 8: 0.333062}
    for k, target in closed.items():
        chk.close(f"drift_zkzk({k})", cf.drift_zkzk(k), target, 1e-10)
        product, mu, rep = _solved_zkzk(k)
        chk.close(f"solver gamma Z{k}*Z{k}", drift(product, mu, rep.r), target, 1e-10)
    for k, target in numeric.items():
        chk.close(f"drift_zkzk({k})", cf.drift_zkzk(k), target, 1e-6)
        product, mu, rep = _solved_zkzk(k)
        chk.close(f"solver gamma Z{k}*Z{k}", drift(product, mu, rep.r), target, 1e-6)
    return CriterionResult(1, "drift table Z/k * Z/k", chk.ok, chk.details)


def criterion_2() -> CriterionResult:
    """Drift table for the simple walks on the Hecke products Z/2 * Z/k."""
    chk = _Check()
    closed = {3: 2.0 / 15.0, 4: (math.sqrt(7) - 1) / 9, 5: (2 * math.sqrt(61) - 4) / 57}
    numeric = {6: 0.213412, 7: 0.217921, 8: 0.220101}
    for k, target in closed.items():
        chk.close(f"drift_hecke({k})", cf.drift_hecke(k), target, 1e-10)
        product, mu, rep = _solved_hecke(k)
        chk.close(f"solver gamma Z2*Z{k}", drift(product, mu, rep.r), target, 1e-10)
    for k, target in numeric.items():
        chk.close(f"drift_hecke({k})", cf.drift_hecke(k), target, 1e-6)
        product, mu, rep = _solved_hecke(k)
        chk.close(f"solver gamma Z2*Z{k}", drift(product, mu, rep.r), target, 1e-6)
    return CriterionResult(2, "drift table Hecke Z/2 * Z/k", chk.ok, chk.details)


def criterion_3() -> CriterionResult:
    """Root vector of the simple walk on Z/2 * Z/4."""
    chk = _Check()
    product, _, rep = _solved_hecke(4)
    s7 = math.sqrt(7)
    expected = [(7 - s7) / 12, 2 / 3 - s7 / 6, (-11 + 5 * s7) / 12, 2 / 3 - s7 / 6]
    for u, target in zip(product.alphabet, expected):
        chk.close(f"r({u})", rep.r[u], target, 1e-10)
    return CriterionResult(3, "Z/2 * Z/4 root vector", chk.ok, chk.details)


def criterion_4() -> CriterionResult:
    """Polynomial root identities and monotone drift limits."""
    chk = _Check()
    for k in range(3, 13):
        xk = cf.solve_xk(k)
        chk.close(f"F_{k}(x_{k})", float(cf.eval_F(k, xk)), 1.0, 1e-10)
        values = [float(cf.eval_F(i, xk)) for i in range(1, k)]
        chk.close(f"sum F_i(x_{k})", sum(values), 1.0, 1e-10)
        palindrome = max(abs(values[i - 1] - values[k - i - 1]) for i in range(1, k))
        chk.true(f"palindrome k={k}", palindrome <= 1e-10, f"max gap {palindrome:.3e}")
        product, mu, rep = _solved_zkzk(k)
        chk.close(f"gamma_{k} closed vs solver", (1 - xk) / 2, drift(product, mu, rep.r), 1e-10)
    # The drift gaps decay like 3^-k (Hecke: 2^-k), below double resolution
    # long before k = 64, so the monotone-limit claims are certified with
    # exact rational root enclosures.
    intervals = [cf.gamma_zkzk_interval(k) for k in range(3, 65)]
    chk.true(
        "gamma_k strictly increasing, < 1/3 (k <= 64, certified)",
        all(a[1] < b[0] for a, b in zip(intervals, intervals[1:]))
        and all(hi < Fraction(1, 3) for _, hi in intervals),
        f"last enclosure ({float(intervals[-1][0])!r}, {float(intervals[-1][1])!r})",
    )
    hintervals = [cf.gamma_hecke_interval(k) for k in range(3, 65)]
    chk.true(
        "Hecke gamma_k strictly increasing, < 2/9 (k <= 64, certified)",
        all(a[1] < b[0] for a, b in zip(hintervals, hintervals[1:]))
        and all(hi < Fraction(2, 9) for _, hi in hintervals),
        f"last enclosure ({float(hintervals[-1][0])!r}, {float(hintervals[-1][1])!r})",
    )
    return CriterionResult(4, "recurrence and root identities", chk.ok, chk.details)


def criterion_5() -> CriterionResult:
    """Normalization of the Z/4 * Z/4 root vector."""
    chk = _Check()
    product, _, rep = _solved_zkzk(4)
    s5 = math.sqrt(5)
    chk.close("r(a)", rep.r[Letter(0, 1)], (3 - s5) / 4, 1e-10)
    chk.close("r(a^2)", rep.r[Letter(0, 2)], (s5 - 2) / 2, 1e-10)
    chk.close("sum of r over all letters", float(np.sum(rep.r.values)), 1.0, 1e-10)
    halved = 2 * ((3 - s5) / 8) + (s5 / 4 - 0.5)
    notes = [
        "informational: a halved variant of this vector (entries (3-sqrt5)/8, "
        f"sqrt5/4-1/2, (3-sqrt5)/8 per factor) totals {2 * halved:.6f}, not 1, and is "
        "inconsistent with F_4(x_4)=1 and with gamma_4=(sqrt5-1)/4; the solver's "
        "normalization (letter values summing to 1) is the self-consistent one."
    ]
    return CriterionResult(5, "Z/4 * Z/4 root-vector normalization", chk.ok, chk.details, notes)


def criterion_6() -> CriterionResult:
    """Closed-form drift formulas against the solver at random interior points."""
    chk = _Check()
    rng = np.random.Generator(np.random.Philox(key=np.uint64(SEED)))
    worst = {"z2z3": 0.0, "z3z3-sym": 0.0, "z3z3-asym": 0.0, "uniform-pair": 0.0}
    for _ in range(100):
        p, q = 0.02 + 0.86 * rng.random(2)
        if p + q > 0.9:
            p, q = p * 0.9 / (p + q), q * 0.9 / (p + q)
        product, mu = z2z3_walk(p, q)
        rep = solve_walk(product, mu)
        worst["z2z3"] = max(worst["z2z3"], abs(cf.drift_z2z3(p, q) - drift(product, mu, rep.r)))
    for _ in range(100):
        p = 0.03 + 0.44 * rng.random()
        product, mu = z3z3_sym(p)
        rep = solve_walk(product, mu)
        worst["z3z3-sym"] = max(
            worst["z3z3-sym"], abs(cf.drift_z3z3_sym(p) - drift(product, mu, rep.r))
        )
    for _ in range(100):
        p, q = 0.03 + 0.6 * rng.random(2)
        if p + q > 0.9:
            p, q = p * 0.9 / (p + q), q * 0.9 / (p + q)
        product, mu = z3z3_asym(p, q)
        rep = solve_walk(product, mu)
        worst["z3z3-asym"] = max(
            worst["z3z3-asym"], abs(cf.drift_z3z3_asym(p, q) - drift(product, mu, rep.r))
        )
    for _ in range(100):
        k1, k2 = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        if k1 == 1 and k2 == 1:
            k2 = 2
        p = 0.1 + 0.8 * rng.random()
        product, mu = uniform_per_factor([k1 + 1, k2 + 1], [p, 1 - p])
        rep = solve_walk(product, mu)
        worst["uniform-pair"] = max(
            worst["uniform-pair"],
            abs(cf.drift_uniform_pair(p, k1, k2) - drift(product, mu, rep.r)),
        )
    for name, err in worst.items():
        chk.true(f"{name}: 100 random points", err <= 1e-9, f"worst |err| {err:.3e}")
    return CriterionResult(6, "closed-form / solver agreement", chk.ok, chk.details)


def criterion_7() -> CriterionResult:
    """Maximum drift over the Z/2 * Z/3 parameter simplex.

    The sweep evaluates the closed-form drift surface (vectorized) on the
    full simplex at resolution 1e-3; criterion 6 has already pinned that
    surface to the solver, and the solver is re-run at the argmax here.
    """
    chk = _Check()
    n = 1000
    grid = np.arange(n + 1) / n
    p, q = np.meshgrid(grid, grid, indexing="ij")
    valid = (p + q <= 1 - 1 / n) & (p + q >= 1 / n)  # mu(a) > 0 and factor Z/3 touched
    gamma = np.where(valid, cf.drift_z2z3(p, q), -1.0)
    flat = int(np.argmax(gamma))
    i, j = np.unravel_index(flat, gamma.shape)
    best = float(gamma[i, j])
    pb, qb = float(grid[i]), float(grid[j])
    chk.close("max gamma over simplex", best, 0.163379, 1e-4)
    z0 = 0.490275
    on_edge = (qb == 0.0) or (pb == 0.0)
    chk.true("argmax on a boundary edge (p=0 or q=0)", on_edge, f"argmax ({pb}, {qb})")
    nonzero = pb if qb == 0.0 else qb
    chk.close("nonzero coordinate vs 1 - z0", nonzero, 1 - z0, 2e-3)
    product, mu = z2z3_walk(pb, qb)
    rep = solve_walk(product, mu)
    chk.close("solver drift at argmax", drift(product, mu, rep.r), best, 1e-9)
    return CriterionResult(7, "Z/2 * Z/3 maximum drift", chk.ok, chk.details)


def _battery():
    instances = [
        ("zkzk-simple k=4", _solved_zkzk(4)[:2]),
        ("zkzk-simple k=5", _solved_zkzk(5)[:2]),
        ("hecke-simple k=3", _solved_hecke(3)[:2]),
        ("hecke-simple k=4", _solved_hecke(4)[:2]),
        ("z2z3 p=0.5 q=0.1", z2z3_walk(0.5, 0.1)),
        ("z2z3 p=0.2 q=0.4", z2z3_walk(0.2, 0.4)),
        ("z3z3-sym p=0.4", z3z3_sym(0.4)),
        ("z3z3-asym p=0.3 q=0.1", z3z3_asym(0.3, 0.1)),
        ("uniform Z3*Z4 w=0.3", uniform_per_factor([3, 4], [0.3, 0.7])),
        ("extremal Z2*Z4", extremal_walk([2, 4])),
        ("extremal Z2*Z3*Z5", extremal_walk([2, 3, 5])),
        ("z2z2z2 p=0.3", z2z2z2(0.3)),
    ]
    return [(name, product, mu) for name, (product, mu) in instances]


def criterion_8() -> CriterionResult:
    """Structural identities on a battery of solved instances."""
    chk = _Check()
    for name, product, mu in _battery():
        rep = solve_walk(product, mu)
        chk.true(
            f"{name}: consistency residual",
            rep.q.consistency_residual() <= 1e-10,
            f"{rep.q.consistency_residual():.3e}",
        )
        h = entropy(product, mu, rep.r, rep.q)
        gamma = drift(product, mu, rep.r)
        v = volume(product, natural_lengths(product))
        chk.true(
            f"{name}: h <= gamma*v*(1+1e-9)",
            h <= gamma * v * (1 + 1e-9),
            f"h={h!r} gamma*v={gamma * v!r}",
        )
        if product.nfactors != 2:
            continue
        chk.true(
            f"{name}: q(S1)q(S2)=1",
            abs(two_factor_identity(rep.q) - 1.0) <= 1e-10,
            f"{two_factor_identity(rep.q)!r}",
        )
        chain = build_chain(product, rep.r)
        tau2 = max(tau2_invariance_residual(chain, w) for w in normal_words(product, 3))
        chk.true(f"{name}: tau^2 residual (cylinders <= 3)", tau2 <= 1e-10, f"{tau2:.3e}")
    return CriterionResult(8, "structural identities on solved instances", chk.ok, chk.details)


def criterion_9() -> CriterionResult:
    """Extremal step laws: entropy-drift-volume equality and cylinder formula."""
    chk = _Check()
    for orders in ([2, 4], [2, 3, 5], [3, 3, 3]):
        name = "*".join(f"Z{k}" for k in orders)
        product, mu = extremal_walk(orders)
        rep = solve_walk(product, mu)
        h = entropy(product, mu, rep.r, rep.q)
        gamma = drift(product, mu, rep.r)
        v = volume(product, natural_lengths(product))
        chk.true(f"{name}: |h - gamma*v|", abs(h - gamma * v) <= 1e-9, f"{abs(h - gamma * v):.3e}")
        chain = build_chain(product, rep.r)
        worst = 0.0
        for w in normal_words(product, 3):
            harmonic, _ = extremal_cylinders(product, w)
            worst = max(worst, abs(cylinder_prob(chain, w) - harmonic))
        chk.true(f"{name}: cylinders vs rho-power formula (len <= 3)", worst <= 1e-10, f"{worst:.3e}")
    return CriterionResult(9, "extremal measures", chk.ok, chk.details)


def criterion_10() -> CriterionResult:
    """Quality constants for minimal generating sets."""
    chk = _Check()
    product, mu = zkzk_simple(4)
    minimal = minimal_generators(product)
    sweep = quality_sup(product, minimal, 1e-3)
    chk.close("Z4*Z4 minimal: sup over grid", sweep.best_quality, 0.987686, 1e-3)
    closed = (5 + math.sqrt(5)) / 4 * math.log((1 + math.sqrt(5)) / 2) / math.log(1 + math.sqrt(2))
    chk.close("Z4*Z4 minimal: quality at the simple walk", quality(product, mu, minimal), closed, 1e-9)

    product34 = free_product_of_cyclics(3, 4)
    p = 0.432693  # middle root of 5x^3 - 13x^2 + 7x - 1
    probs = np.zeros(product34.nletters)
    for u, mass in [
        (Letter(0, 1), p),
        (Letter(0, 2), p),
        (Letter(1, 1), 0.5 - p),
        (Letter(1, 3), 0.5 - p),
    ]:
        probs[product34.letter_index(u)] = mass
    mu34 = StepDistribution(product34, probs)
    rep34 = solve_walk(product34, mu34)
    lengths34 = letter_lengths(product34, minimal_generators(product34))
    h34 = entropy(product34, mu34, rep34.r, rep34.q)
    g34 = drift_weighted(product34, mu34, rep34.r, lengths34)
    v34 = volume(product34, lengths34)
    chk.true("Z3*Z4 minimal at p=0.432693: |h - gamma_S v_S|",
             abs(h34 - g34 * v34) <= 1e-5, f"{abs(h34 - g34 * v34):.3e}")

    for p3, expect_one in ((1 / 3, True), (0.25, False), (0.40, False)):
        product3, mu3 = z2z2z2(p3)
        value = quality(product3, mu3, product3.alphabet)
        if expect_one:
            chk.close("Z2*Z2*Z2 quality at p=1/3", value, 1.0, 1e-9)
        else:
            chk.true(f"Z2*Z2*Z2 quality at p={p3} below 1", value < 1 - 1e-6, f"{value!r}")
    return CriterionResult(10, "minimal-generator quality constants", chk.ok, chk.details)


def criterion_11() -> CriterionResult:
    """Volume roots and sphere-growth oracles."""
    chk = _Check()
    for orders in ([4, 4], [2, 4], [2, 3, 5], [3, 3, 3]):
        product = free_product_of_cyclics(*orders)
        rho = growth_rho(product)
        residual = abs(
            sum(product.sigma_size(i) / (rho + product.sigma_size(i)) for i in range(product.nfactors))
            - 1.0
        )
        chk.true(f"rho residual {orders}", residual <= 1e-14, f"{residual:.3e}")
        v_nat = volume(product, natural_lengths(product))
        residual2 = abs(
            sum(
                product.sigma_size(i) / (math.exp(v_nat) + product.sigma_size(i))
                for i in range(product.nfactors)
            )
            - 1.0
        )
        chk.true(f"exp(volume) residual {orders}", residual2 <= 1e-14, f"{residual2:.3e}")

    product44 = free_product_of_cyclics(4, 4)
    spheres = sphere_series(product44, natural_lengths(product44), 15)
    chk.close(
        "Z4*Z4 natural: log sphere ratio at 15",
        math.log(spheres[15] / spheres[14]),
        volume(product44, natural_lengths(product44)),
        1e-2,
    )
    lengths_min = letter_lengths(product44, minimal_generators(product44))
    spheres_min = sphere_series(product44, lengths_min, 15)
    chk.close(
        "Z4*Z4 minimal: log sphere ratio at 15",
        math.log(spheres_min[15] / spheres_min[14]),
        volume(product44, lengths_min),
        1e-2,
    )
    product24 = free_product_of_cyclics(2, 4)
    lengths24 = letter_lengths(product24, minimal_generators(product24))
    v24 = volume(product24, lengths24)
    chk.close("Z2*Z4 minimal: v = log golden ratio", v24, math.log((1 + math.sqrt(5)) / 2), 1e-10)
    spheres24 = sphere_series(product24, lengths24, 15)
    chk.close(
        "Z2*Z4 minimal: log sphere ratio at 15", math.log(spheres24[15] / spheres24[14]), v24, 1e-2
    )
    return CriterionResult(11, "volume and sphere growth", chk.ok, chk.details)


def criterion_12() -> CriterionResult:
    """Monte Carlo concordance for the simple walks on Z/4 * Z/4 and Z/2 * Z/3."""
    chk = _Check()
    hitting_bias_allowance = 5e-3  # stated downward finite-horizon bias margin
    for name, (product, mu, rep), target_gamma in (
        ("Z4*Z4", _solved_zkzk(4), (math.sqrt(5) - 1) / 4),
        ("Z2*Z3", _solved_hecke(3), 2 / 15),
    ):
        est = estimate_drift(product, mu, steps=10_000, reps=200, seed=SEED)
        chk.true(
            f"{name}: drift within 3 sigma",
            abs(est.estimate - target_gamma) <= 3 * est.stderr,
            f"est {est.estimate!r} +- {est.stderr:.2e}, target {target_gamma!r}",
        )
        prefix = estimate_prefix(product, mu, steps=1500, reps=4000, seed=SEED + 1, prefix_len=1)
        kept = prefix.replications - prefix.dropped
        worst_z = 0.0
        for u in product.alphabet:
            freq = prefix.frequencies.get(product.word([u]), 0.0)
            r = rep.r[u]
            sigma = math.sqrt(r * (1 - r) / kept)
            worst_z = max(worst_z, abs(freq - r) / sigma)
        chk.true(f"{name}: prefix-1 frequencies within 3 sigma of r", worst_z <= 3.0,
                 f"worst z {worst_z:.2f}")
        target = Letter(0, 1)
        hit = estimate_hitting(product, mu, target, horizon=1000, reps=4000, seed=SEED + 2)
        chk.true(
            f"{name}: hitting probability within 3 sigma + bias",
            abs(hit.estimate - rep.q[target]) <= 3 * hit.stderr + hitting_bias_allowance,
            f"est {hit.estimate!r} +- {hit.stderr:.2e}, q {rep.q[target]!r}",
        )
    return CriterionResult(12, "Monte Carlo concordance", chk.ok, chk.details)


def criterion_13() -> CriterionResult:
    """Exact-convolution desk-scale trend for the simple walk on Z/3 * Z/3.

    Checks the stated tolerances literally: the n = 7, 8 increments of
    E|X_n| within 0.02 of the drift and of H(mu^*n) within 0.05 of the
    entropy.  Exact enumeration puts the true gaps at 0.035-0.048 and
    0.11-0.13 (the increments do converge, but far more slowly), so this
    criterion fails as specified; the computed gaps are reported.
    """
    chk = _Check()
    product, mu, rep = _solved_zkzk(3)
    gamma = drift(product, mu, rep.r)
    h = entropy(product, mu, rep.r, rep.q)
    lengths = {}
    entropies = {}
    for n in (6, 7, 8):
        law = exact_convolution(product, mu, n)
        lengths[n] = expected_length(law)
        entropies[n] = distribution_entropy(law)
    for n in (7, 8):
        chk.close(f"E|X_{n}| - E|X_{n - 1}| vs gamma", lengths[n] - lengths[n - 1], gamma, 0.02)
        chk.close(f"H_{n} - H_{n - 1} vs h", entropies[n] - entropies[n - 1], h, 0.05)
    notes = []
    if not chk.ok:
        notes.append(
            "informational: the stated n=7,8 tolerances are not attainable; the exact "
            "increments (confirmed by independent Monte Carlo) approach the limits at "
            "roughly geometric rate ~0.9 per step and reach the 0.02 / 0.05 bands only "
            "near n~13 and n~16.  The trend itself (monotone approach to gamma and h) "
            "holds and is covered by the simulation test suite."
        )
    return CriterionResult(13, "exact-convolution trend", chk.ok, chk.details, notes)


CRITERIA: dict[int, tuple[str, Callable[[], CriterionResult]]] = {
    1: ("drift table Z/k * Z/k", criterion_1),
    2: ("drift table Hecke Z/2 * Z/k", criterion_2),
    3: ("Z/2 * Z/4 root vector", criterion_3),
    4: ("recurrence and root identities", criterion_4),
    5: ("Z/4 * Z/4 root-vector normalization", criterion_5),
    6: ("closed-form / solver agreement", criterion_6),
    7: ("Z/2 * Z/3 maximum drift", criterion_7),
    8: ("structural identities on solved instances", criterion_8),
    9: ("extremal measures", criterion_9),
    10: ("minimal-generator quality constants", criterion_10),
    11: ("volume and sphere growth", criterion_11),
    12: ("Monte Carlo concordance", criterion_12),
    13: ("exact-convolution trend", criterion_13),
}

# Criteria whose stated tolerances are contradicted by exact computation;
# they run and report honestly but are expected to fail.  See criterion_13.
EXPECTED_FAILURES = {13}


def run_criterion(number: int) -> CriterionResult:
    try:
        _, fn = CRITERIA[number]
    except KeyError:
        raise ValueError(f"no criterion {number}; known: {sorted(CRITERIA)}") from None
    return fn()


def run_all(numbers: list[int] | None = None) -> list[CriterionResult]:
    selected = sorted(CRITERIA) if numbers is None else numbers
    return [run_criterion(n) for n in selected]
