import math

import numpy as np

from freewalk.groups import (
    Letter,
    free_product_of_cyclics,
    letter_lengths,
    natural_lengths,
    normal_words,
)
from freewalk.metrics import (
    drift,
    drift_weighted,
    entropy,
    extremal_cylinders,
    extremal_measure,
    growth_rho,
    hausdorff,
    metrics_report,
    quality,
    quality_sup,
    volume,
)
from freewalk.traffic import StepDistribution, solve_walk
from freewalk.walkspec import (
    extremal_walk,
    hecke_simple,
    minimal_generators,
    uniform_per_factor,
    z2z2z2,
    z2z3_walk,
    zkzk_simple,
)

PHI = (1 + math.sqrt(5)) / 2


def test_drift_table_values():
    product, mu = zkzk_simple(3)
    report = solve_walk(product, mu)
    assert abs(drift(product, mu, report.r) - 0.25) < 1e-12
    product, mu = zkzk_simple(4)
    report = solve_walk(product, mu)
    assert abs(drift(product, mu, report.r) - (math.sqrt(5) - 1) / 4) < 1e-12
    product, mu = hecke_simple(3)
    report = solve_walk(product, mu)
    assert abs(drift(product, mu, report.r) - 2 / 15) < 1e-12


def test_drift_weighted_reduces_to_natural_with_unit_weights():
    rng = np.random.default_rng(2)
    for _ in range(10):
        p, q = rng.uniform(0.05, 0.4, 2)
        product, mu = z2z3_walk(p, q)
        report = solve_walk(product, mu)
        plain = drift(product, mu, report.r)
        weighted = drift_weighted(product, mu, report.r, natural_lengths(product))
        assert abs(plain - weighted) < 1e-14


def test_drift_weighted_z4z4_minimal():
    product, mu = zkzk_simple(4)
    report = solve_walk(product, mu)
    lengths = letter_lengths(product, minimal_generators(product))
    value = drift_weighted(product, mu, report.r, lengths)
    assert abs(value - (3 - math.sqrt(5)) / 2) < 1e-12


def test_entropy_uniform_equal_factors():
    # uniform step law on n equal factors: h = log(K-k) * (1 - (k+1)/K)
    for orders, n in (((3, 3), 2), ((3, 3, 3), 3), ((4, 4), 2)):
        product = free_product_of_cyclics(*orders)
        mu = StepDistribution.uniform(product)
        report = solve_walk(product, mu)
        k = orders[0] - 1
        K = n * k
        expected = math.log(K - k) * (-1 / K + 1 - k / K)
        assert abs(entropy(product, mu, report.r, report.q) - expected) < 1e-12


def test_entropy_z3z3_simple_value():
    product, mu = zkzk_simple(3)
    report = solve_walk(product, mu)
    assert abs(entropy(product, mu, report.r, report.q) - 0.25 * math.log(2)) < 1e-12


def test_entropy_z4z4_simple_value():
    product, mu = zkzk_simple(4)
    report = solve_walk(product, mu)
    expected = (5 - math.sqrt(5)) / 4 * math.log(PHI)
    assert abs(entropy(product, mu, report.r, report.q) - expected) < 1e-12
    assert abs(expected - 0.332510) < 1e-6


def test_volume_natural_values():
    for k in (3, 4, 5, 6):
        product = free_product_of_cyclics(k, k)
        assert abs(volume(product, natural_lengths(product)) - math.log(k - 1)) < 1e-13


def test_volume_minimal_generating_sets():
    product = free_product_of_cyclics(4, 4)
    lengths = letter_lengths(product, minimal_generators(product))
    assert abs(volume(product, lengths) - math.log(1 + math.sqrt(2))) < 1e-13
    product = free_product_of_cyclics(2, 4)
    lengths = letter_lengths(product, minimal_generators(product))
    assert abs(volume(product, lengths) - math.log(PHI)) < 1e-13


def test_volume_infinite_dihedral_is_zero():
    product = free_product_of_cyclics(2, 2)
    assert abs(volume(product, natural_lengths(product))) < 1e-9


def test_growth_rho_equation_residual():
    for orders in ((4, 4), (2, 4), (2, 3, 5), (3, 3, 3), (2, 2, 2)):
        product = free_product_of_cyclics(*orders)
        rho = growth_rho(product)
        residual = abs(
            sum(product.sigma_size(i) / (rho + product.sigma_size(i))
                for i in range(product.nfactors)) - 1.0
        )
        assert residual < 1e-14
        assert abs(math.exp(volume(product, natural_lengths(product))) - rho) < 1e-10
    # two factors: rho^2 = k1 k2
    product = free_product_of_cyclics(2, 4)
    assert abs(growth_rho(product) - math.sqrt(3)) < 1e-13


def test_extremal_measure_values():
    product = free_product_of_cyclics(2, 4)
    mu = extremal_measure(product)
    s3 = math.sqrt(3)
    assert abs(mu[Letter(0, 1)] - 1 / (1 + s3)) < 1e-13
    assert abs(mu[Letter(1, 1)] - 1 / (3 + s3)) < 1e-13
    assert abs(float(mu.probs.sum()) - 1.0) < 1e-12
    equal = free_product_of_cyclics(3, 3)
    assert np.allclose(extremal_measure(equal).probs, 0.25)


def test_extremal_quality_is_one():
    for orders in ((2, 4), (2, 3, 5), (3, 3, 3)):
        product, mu = extremal_walk(orders)
        assert abs(quality(product, mu, product.alphabet) - 1.0) < 1e-9


def test_two_factor_uniform_pair_quality_is_one():
    # any per-factor-uniform law on two factors is extremal for natural S
    for w1 in (0.2, 0.5, 0.8):
        product, mu = uniform_per_factor([3, 5], [w1, 1 - w1])
        assert abs(quality(product, mu, product.alphabet) - 1.0) < 1e-9


def test_extremal_cylinders_match_harmonic_solution():
    product, mu = extremal_walk([2, 3, 5])
    report = solve_walk(product, mu)
    from freewalk.harmonic import build_chain, cylinder_prob

    chain = build_chain(product, report.r)
    for w in normal_words(product, 3):
        harmonic, _ = extremal_cylinders(product, w)
        assert abs(cylinder_prob(chain, w) - harmonic) < 1e-12


def test_extremal_cylinders_normalization_and_consistency():
    product = free_product_of_cyclics(2, 4)
    level2 = [w for w in normal_words(product, 2) if len(w) == 2]
    harm_total = sum(extremal_cylinders(product, w)[0] for w in level2)
    max_total = sum(extremal_cylinders(product, w)[1] for w in level2)
    assert abs(harm_total - 1.0) < 1e-12
    assert abs(max_total - 1.0) < 1e-12
    # one-step consistency of the max-entropy values
    for w in normal_words(product, 2):
        parent = extremal_cylinders(product, w)[1]
        children = sum(
            extremal_cylinders(product, product.word(w.letters + (v,)))[1]
            for v in product.alphabet
            if v.factor != w[len(w) - 1].factor
        )
        assert abs(parent - children) < 1e-13


def test_extremal_cylinders_equal_sizes_coincide():
    product = free_product_of_cyclics(3, 3, 3)
    for w in normal_words(product, 3):
        harmonic, max_entropy = extremal_cylinders(product, w)
        assert abs(harmonic - max_entropy) < 1e-14


def test_hausdorff_dimensions():
    product, mu = extremal_walk([2, 4])
    hd_measure, hd_support = hausdorff(product, mu)
    assert abs(hd_measure - hd_support) < 1e-9
    product, mu = zkzk_simple(4)
    hd_measure, hd_support = hausdorff(product, mu)
    assert abs(hd_support - math.log(3)) < 1e-12
    assert hd_measure <= hd_support + 1e-9


def test_fundamental_inequality_on_random_walks():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p, q = rng.uniform(0.05, 0.45, 2)
        if p + q >= 0.92:
            continue
        product, mu = z2z3_walk(p, q)
        report = solve_walk(product, mu)
        h = entropy(product, mu, report.r, report.q)
        gamma = drift(product, mu, report.r)
        v = volume(product, natural_lengths(product))
        assert h <= gamma * v * (1 + 1e-9)


def test_quality_z4z4_minimal_constant():
    product, mu = zkzk_simple(4)
    closed = (5 + math.sqrt(5)) / 4 * math.log(PHI) / math.log(1 + math.sqrt(2))
    assert abs(quality(product, mu, minimal_generators(product)) - closed) < 1e-12
    assert abs(closed - 0.987686) < 1e-6


def test_quality_sup_z3z4_minimal_attains_one():
    product = free_product_of_cyclics(3, 4)
    sweep = quality_sup(product, minimal_generators(product), 1e-3)
    assert sweep.best_quality <= 1 + 1e-9
    assert sweep.best_quality > 1 - 1e-4
    assert not sweep.at_boundary
    p_best = sweep.best_mu[Letter(0, 1)]
    assert abs(p_best - 0.432693) < 2e-3  # middle root of 5x^3-13x^2+7x-1


def test_quality_sup_z2z4_minimal_below_one_toward_boundary():
    product = free_product_of_cyclics(2, 4)
    sweep = quality_sup(product, minimal_generators(product), 0.02)
    assert sweep.best_quality < 1 - 1e-6
    assert sweep.at_boundary


def test_z2z2z2_family_quality():
    product, mu = z2z2z2(1 / 3)
    assert abs(quality(product, mu, product.alphabet) - 1.0) < 1e-9
    for p in (0.25, 0.40):
        product, mu = z2z2z2(p)
        assert quality(product, mu, product.alphabet) < 1 - 1e-6


def test_metrics_report_assembly():
    product, mu = zkzk_simple(4)
    m = metrics_report(product, mu)
    assert abs(m.quality - m.entropy / (m.gamma * m.volume)) < 1e-12
    assert m.stationary
    assert abs(m.hd_measure - m.entropy / m.gamma) < 1e-12
    assert abs(m.hd_support - m.volume) < 1e-12
    assert m.gamma > 0 and m.entropy >= 0 and m.volume > 0
