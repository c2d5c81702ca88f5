"""End-to-end float pipeline on quadrature-defined weights."""

import math

import pytest

from blockortho import (
    Measure,
    build_sbo,
    cross_i_connection,
    expand_x_times_p,
    gauss_rule,
    normalize_sbo,
    verify_p_integral,
    verify_z_integral,
    zero_report,
)
from blockortho.block import ORTHONORMAL
from blockortho.measures import inner_product_mu, moments


@pytest.fixture(scope="module")
def numeric_pair():
    w1 = Measure.numeric(lambda x: math.exp(-x * x), (-9.0, 9.0), nodes=80, symmetric=True)
    w2 = Measure.numeric(lambda x: math.exp(-2 * x * x), (-7.0, 7.0), nodes=80, symmetric=True)
    return w1, w2


def test_numeric_pair_reproduces_closed_forms(numeric_pair):
    basis = build_sbo(*numeric_pair, 2, 6, backend="float")
    quartic = basis.monic_poly(4).coeffs
    expect = (0.125, 0.0, -1.75, 0.0, 1.0)
    assert all(abs(a - b) < 1e-11 for a, b in zip(quartic, expect))


def test_numeric_pair_orthogonality(numeric_pair):
    mu1 = moments(numeric_pair[0], 10, backend="float")
    basis = build_sbo(*numeric_pair, 2, 6, backend="float")
    h_max = max(basis.monic_norms)
    for n in basis.degrees():
        for m in range(2):
            from blockortho import monomial

            val = inner_product_mu(mu1, monomial(m).to_float(), basis.monic_poly(n))
            assert abs(val) < 1e-10
        for m in basis.degrees():
            val = inner_product_mu(basis.mu2, basis.monic_poly(m), basis.monic_poly(n))
            expect = basis.monic_norm(n) if m == n else 0.0
            assert abs(val - expect) <= 1e-10 * h_max


def test_numeric_gauss_rule_falls_back_to_float(numeric_pair):
    nodes, weights = gauss_rule(numeric_pair[0], 5)
    seq = moments(Measure.gaussian(1), 9)
    for order in range(10):
        value = sum(w * x**order for x, w in zip(nodes, weights))
        assert abs(value - float(seq.mu[order])) < 1e-10


def test_numeric_integral_representations(numeric_pair):
    basis = build_sbo(*numeric_pair, 2, 5, backend="float")
    assert verify_z_integral(basis, 2, 3)["rel_err"] <= 1e-10
    assert verify_p_integral(basis, 2, 3)["rel_err"] <= 1e-10


def test_numeric_zero_report(numeric_pair):
    basis = build_sbo(*numeric_pair, 2, 6, backend="float")
    report = zero_report(basis, 4)
    assert report.count == 4 and report.satisfies_theorem


def test_numeric_orthonormal_mode(numeric_pair):
    basis = normalize_sbo(build_sbo(*numeric_pair, 1, 5, backend="float"), ORTHONORMAL)
    for n in basis.degrees():
        val = inner_product_mu(basis.mu2, basis.poly(n), basis.poly(n))
        assert abs(val - 1.0) < 1e-9


def test_numeric_connections_and_expansion(numeric_pair):
    s1 = build_sbo(*numeric_pair, 1, 6, backend="float")
    s3 = build_sbo(*numeric_pair, 3, 6, backend="float")
    conn = cross_i_connection(s1, s3)
    for n in s3.degrees():
        assert abs(conn[n][n] - 1.0) < 1e-10
    exp = expand_x_times_p(s3, 4)
    assert abs(exp.eta[5] - 1.0) < 1e-10
