import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from coverage_depth.errors import ConstraintViolation, InvalidParams, SingularDenominator
from coverage_depth.expectation import GeneratorMatrix, t_ave, t_max
from coverage_depth.gf import field_new
from coverage_depth.upper_bounds import (
    SymmetricWeights,
    asymptotic_F,
    constraint_sum,
    eval_k3,
    optimize_asymptotic,
    optimize_upper_bound,
    renormalize,
    symmetric_tmax,
)

# four-decimal weights and the values they were reported with, k = 3
REFERENCE = {
    2: (2.7789, ("0.2382", "0.0785", "0.0500")),
    3: (2.7240, ("0.1057", "0.0232", "0.0109")),
    4: (2.7006, ("0.0665", "0.0110", "0.0039")),
    5: (2.6878, ("0.0482", "0.0065", "0.0017")),
    7: (2.6742, ("0.0308", "0.0031", "0.0005")),
    8: (2.6702, ("0.0261", "0.0023", "0.0003")),
}


def q2_closed_form(w1, w2, w3):
    """The q = 2 specialization, written out term by term."""
    return (
        -2 / (1 - w1) - 3 / (1 - w2) - 1 / (1 - w3) + 1 / (1 - 2 * w1 - w2)
        + 2 / (1 - w1 - w2 - w3) + 1 / (1 - 3 * w2) + 3
    )


def test_eval_k3_examples():
    assert eval_k3(2, Fraction(1, 3), 0, 0) == 3
    assert eval_k3(2, 0.2382, 0.0785, 0.0500) <= 2.7789 + 2e-3
    assert eval_k3(3, 0.1057, 0.0232, 0.0109) <= 2.7240 + 2e-3


def test_eval_k3_q2_matches_specialization_exactly():
    rng = random.Random(5)
    for _ in range(50):
        m = [Fraction(rng.randint(1, 50)) for _ in range(3)]
        total = sum(m)
        w = (m[0] / total / 3, m[1] / total / 3, m[2] / total)
        assert eval_k3(2, *w) == q2_closed_form(*w)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_closed_form_matches_census_sum(q):
    rng = np.random.default_rng(q)
    for masses in rng.dirichlet(np.ones(3), size=100):
        sw = SymmetricWeights.from_masses(q, 3, masses.tolist())
        assert abs(eval_k3(q, *sw.w) - symmetric_tmax(sw)) <= 1e-9


@pytest.mark.parametrize("q", [2, 3])
def test_census_sum_exact_against_matrix(q):
    # with rational weights the construction is a real matrix; compare with the lattice route
    f = field_new(q)
    k = 3
    # one column per nonzero vector of weight 1 and 2, two per vector of weight 3
    mult = {1: 1, 2: 1, 3: 2}
    cols = []
    for v in itertools.product(range(q), repeat=k):
        wt = sum(1 for c in v if c)
        if wt:
            cols += [v] * mult[wt]
    G = GeneratorMatrix(f, tuple(cols))
    n = len(cols)
    sw = SymmetricWeights(q, k, tuple(Fraction(mult[i], n) for i in (1, 2, 3)))
    assert symmetric_tmax(sw) == t_max(G) == t_ave(G)
    assert eval_k3(q, *sw.w) == symmetric_tmax(sw)


def test_symmetric_examples():
    assert symmetric_tmax(SymmetricWeights(2, 3, (Fraction(1, 3), 0, 0))) == 3
    assert symmetric_tmax(SymmetricWeights(2, 4, (Fraction(1, 4), 0, 0, 0))) == 4


def test_symmetric_weights_validation():
    with pytest.raises(ConstraintViolation):
        SymmetricWeights(2, 3, (Fraction(1, 2), 0, 0))
    with pytest.raises(InvalidParams):
        SymmetricWeights(2, 3, (Fraction(1, 2), 0))
    with pytest.raises(ConstraintViolation):
        SymmetricWeights(2, 3, (-0.1, 0.2, 0.5))


def test_renormalize():
    w = renormalize(2, 3, (Fraction(2382, 10000), Fraction(785, 10000), Fraction(500, 10000)))
    assert constraint_sum(2, 3, w) == 1
    with pytest.raises(ConstraintViolation):
        renormalize(2, 3, (0.5, 0.5, 0.5))


def test_reference_rows_need_loose_gate_at_large_q():
    # the q = 7 and q = 8 rows miss the constraint by more than 1e-3
    for q in (7, 8):
        w = [Fraction(x) for x in REFERENCE[q][1]]
        with pytest.raises(ConstraintViolation):
            eval_k3(q, *w)
        assert abs(constraint_sum(q, 3, w) - 1) < 2e-2


@pytest.mark.parametrize("q", sorted(REFERENCE))
def test_reference_rows_reproduce(q):
    target, ws = REFERENCE[q]
    value = eval_k3(q, *(Fraction(x) for x in ws), tol=2e-2)
    assert abs(float(value) - target) <= 2e-3


def test_singular_denominator():
    # over GF(2) the three weight-2 vectors all lie in the plane x1 + x2 + x3 = 0
    with pytest.raises(SingularDenominator):
        eval_k3(2, 0, Fraction(1, 3), 0)
    with pytest.raises(SingularDenominator):
        symmetric_tmax(SymmetricWeights(2, 3, (0, Fraction(1, 3), 0)))


@pytest.mark.parametrize("q", sorted(REFERENCE))
def test_optimizer_k3(q):
    cert = optimize_upper_bound(q, 3)
    assert cert.value <= REFERENCE[q][0] + 1e-3
    assert cert.verify()
    assert abs(constraint_sum(q, 3, cert.witness.w) - 1) <= 1e-12
    assert abs(eval_k3(q, *cert.witness.w) - cert.value) <= 1e-9


def test_optimizer_is_deterministic():
    a = optimize_upper_bound(3, 3, restarts=6, seed=4)
    b = optimize_upper_bound(3, 3, restarts=6, seed=4)
    assert a.value == b.value and a.witness == b.witness


def test_optimizer_k_range():
    with pytest.raises(InvalidParams):
        optimize_upper_bound(2, 5)


@pytest.mark.slow
def test_optimizer_k4_decreasing_in_q():
    values = [optimize_upper_bound(q, 4).value for q in (4, 8, 16)]
    assert values[0] > values[1] > values[2]
    assert values[2] <= values[0] - 1e-3


def test_asymptotic():
    assert asymptotic_F(0.06679, 0.1509) < 2.6433
    assert asymptotic_F(0, 0) == pytest.approx(3, abs=1e-15)
    cert = optimize_asymptotic()
    assert cert.value <= 2.6433
    lam, mu = cert.witness
    assert lam >= 0 and mu >= 0 and lam / 3 + mu <= 1 / 3 + 1e-12
    assert cert.verify()


def test_asymptotic_singular():
    with pytest.raises(SingularDenominator):
        asymptotic_F(-3, 0)
