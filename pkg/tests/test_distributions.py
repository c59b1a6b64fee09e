import warnings
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from noiseknn.distributions import (
    CLASSIFICATION_LIMITED,
    NOISE_LIMITED,
    TIE,
    FourPointFamily,
    GammaParams,
    HypercubeFamily,
    LaplaceLogisticFamily,
    NoiseSpec,
    TableFamily,
    corrupt,
    excess_risk,
    lb_parameters_hypercube,
    lb_parameters_unknown_noise,
    rate_exponent,
)
from noiseknn.errors import ParameterError
from noiseknn.metric import ANCHOR_ONE, ANCHOR_ZERO
from noiseknn.rng import derive_seed
from oracles import excess_integral_constant_one

LB = GammaParams(nu_max=0.5, C_alpha=4.0, t_gamma=0.04, C_gamma=2.0, t_tau=0.3)


def _four(iota=0, Delta=0.1, v=0.1):
    return FourPointFamily(iota, Delta, 0.1, 0.05, v, 0.1, 0.5)


def test_corrupt_examples():
    assert corrupt(0.5, 0.2, 0.2) == 0.5
    assert corrupt(1.0, 0.0, 0.25) == 0.75


def test_noise_spec_validation():
    with pytest.raises(ParameterError):
        NoiseSpec(0.6, 0.5)
    with pytest.raises(ParameterError):
        NoiseSpec(-0.1, 0.1)
    NoiseSpec(0.0, 0.3)


@pytest.mark.parametrize("Delta", [0.01, 0.1, 0.16])
def test_four_point_iota_one_identity(Delta):
    fam = _four(1, Delta)
    for lab, eta in zip("abcd", fam.eta_values()):
        assert fam.eta_tilde(lab) == pytest.approx((1 - 0.5 / 4) * (1 - Delta) * eta, abs=1e-15)


def test_four_point_values_and_bayes():
    f0, f1 = _four(0), _four(1)
    assert f0.eta_values().tolist() == [1.0, 0.9, 0.9 / 1.9, 0.0]
    assert f1.eta_values().tolist() == [1.0, 1.0, 1 / 1.9, 0.0]
    assert (f0.bayes("c"), f1.bayes("c")) == (0, 1)
    assert abs(2 * f1.eta("c") - 1) == pytest.approx(0.1 / 1.9, abs=1e-15)
    assert f0.noise.pi1 == 0.125 and f1.noise.pi1 == pytest.approx(0.1 + 0.125 * 0.9, abs=1e-16)


@pytest.mark.parametrize("fam", [_four(0), _four(1)])
def test_range_identities(fam):
    pts, _ = fam.atoms()
    tilde = fam.eta_tilde_encoded(pts)
    assert tilde.min() == fam.true_inf_eta_tilde == fam.noise.pi0
    assert tilde.max() == fam.true_sup_eta_tilde == 1 - fam.noise.pi1


def test_laplace_family():
    spec = LaplaceLogisticFamily(1.0, NoiseSpec(0.1, 0.2))
    assert spec.eta([0.0]) == 0.5
    xs = np.linspace(-20, 20, 401)[:, None]
    assert np.all(np.diff(spec.eta_encoded(xs)) > 0)
    assert spec.bayes([0.0]) == 1 and spec.bayes([-1e-9]) == 0
    assert spec.true_sup_eta_tilde == 0.8 and spec.true_inf_eta_tilde == 0.1
    assert spec.omega([0.0]) < 1


def test_flip_rate_concentration():
    # binomial oracle: sd of the flip rate is about sqrt(.16/5e4) ~ 0.0018 with
    # ~5e4 ones per sample, so +-0.01 is over five standard deviations
    spec = LaplaceLogisticFamily(1.0, NoiseSpec(0.05, 0.2))
    ok = 0
    for s in range(100):
        ds, y = spec.sample_both(100_000, derive_seed(3, s))
        ones = y == 1
        ok += abs(np.mean(ds.responses[ones] == 0) - 0.2) <= 0.01
    assert ok >= 99


def test_noiseless_channels():
    spec = LaplaceLogisticFamily(1.0, NoiseSpec(0.0, 0.0))
    ds, y = spec.sample_both(5000, 1)
    assert np.array_equal(ds.responses, y)
    cube = HypercubeFamily(l=4, w=0.2, Delta=0.5, m=3, d=1.0, signs=(1, -1, 1))
    ds, y = cube.sample_both(5000, 2)
    assert np.array_equal(ds.responses, y)


def test_sampling_deterministic():
    for spec in (_four(1), LaplaceLogisticFamily(2.0, NoiseSpec(0.1, 0.1))):
        a, b = spec.sample_corrupted(3000, 9), spec.sample_corrupted(3000, 9)
        assert a.points.tobytes() == b.points.tobytes()
        assert a.responses.tobytes() == b.responses.tobytes()
        assert spec.sample_corrupted(3000, 10).responses.tobytes() != a.responses.tobytes()


def test_hypercube_structure():
    cube = HypercubeFamily(l=3, w=1 / 3, Delta=0.6, m=2, d=1.0, signs=(1, -1))
    pts, mass = cube.atoms()
    assert mass.sum() == pytest.approx(1.0, abs=1e-12)
    assert cube.sharp_codes.tolist() == [1, 3]  # "001", "011"
    eta = dict(zip(pts.tolist(), cube.eta_encoded(pts).tolist()))
    assert eta[ANCHOR_ZERO] == 0 and eta[ANCHOR_ONE] == 1
    assert eta[1] == 0.8 and eta[3] == pytest.approx(0.2) and eta[0] == 0.5
    assert cube.bayes("0") == 0 and cube.bayes("1") == 1
    assert set(np.round(cube.eta_encoded(pts), 12)) <= {0, 0.5, 0.2, 0.8, 1}
    with pytest.raises(ParameterError):
        HypercubeFamily(l=3, w=1 / 3, Delta=0.6, m=5, d=1.0, signs=(1,) * 5)


@given(st.integers(2, 12), st.floats(0.01, 1 / 3), st.floats(0, 1), st.data())
def test_hypercube_mass_normalisation(l, w, Delta, data):
    m = data.draw(st.integers(1, 2 ** (l - 1)))
    signs = tuple(data.draw(st.lists(st.sampled_from([-1, 1]), min_size=m, max_size=m)))
    cube = HypercubeFamily(l=l, w=w, Delta=Delta, m=m, d=1.0, signs=signs)
    _, mass = cube.atoms()
    assert mass.sum() == pytest.approx(1.0, abs=1e-12) and mass.min() > 0


@given(st.floats(1e-4, 0.1666), st.floats(1e-4, 0.1666), st.floats(1e-4, 0.1666),
       st.floats(1e-4, 0.1666), st.floats(1e-4, 0.1666), st.integers(0, 1))
def test_four_point_mass_normalisation(D, r, u, v, w, iota):
    fam = FourPointFamily(iota, D, r, u, v, w, 0.5)
    assert fam.masses().sum() == pytest.approx(1.0, abs=1e-12)


def test_excess_risk_exact_examples():
    fam = _four(0)
    assert excess_risk(fam, fam.bayes_encoded).value == 0.0
    # flipping only atom c: v * Delta / (2 - Delta); the quoted example uses v = 0.2,
    # outside the four-point range, so it is checked on an explicit table
    flip_c = lambda p: np.where(np.asarray(p) == 2, 1 - fam.bayes_encoded(p), fam.bayes_encoded(p))
    table = TableFamily(
        "abcd", fam.metric.matrix, [0.05, 1 / 3, 0.2, 2 / 3 - 0.25], fam.eta_values(),
        fam.omega_values(),
    )
    assert excess_risk(table, flip_c).value == pytest.approx(0.2 * 0.1 / 1.9, abs=1e-15)
    assert excess_risk(table, flip_c).value == pytest.approx(0.010526, abs=5e-7)
    fam15 = FourPointFamily(0, 0.1, 0.1, 0.05, 0.15, 0.1, 0.5)
    assert excess_risk(fam15, flip_c).value == pytest.approx(0.15 * 0.1 / 1.9, abs=1e-15)


def test_excess_risk_constant_rule_monte_carlo():
    spec = LaplaceLogisticFamily(1.0, NoiseSpec(0.0, 0.0))
    target = excess_integral_constant_one(1.0)
    res = excess_risk(spec, lambda x: np.ones(len(x), dtype=int), mc_n=400_000, seed=3)
    assert abs(res.value - target) <= 4 * res.stderr
    with pytest.raises(ParameterError):
        excess_risk(spec, lambda x: np.ones(len(x)))


def test_lb_unknown_noise_delta_value():
    getcontext().prec = 50
    g = GammaParams(nu_max=0.5, C_alpha=4.0, t_gamma=0.04, C_gamma=2.0, t_tau=0.3)
    f0, f1 = lb_parameters_unknown_noise(1000, g)
    exact = Decimal(6) ** -3 * Decimal("0.5") * (Decimal(2000).ln() * Decimal(-0.25)).exp()
    assert f0.Delta == pytest.approx(float(exact), rel=1e-14)
    assert (f0.masses() == f1.masses()).all() and f0.metric.matrix.tolist() == f1.metric.matrix.tolist()
    for name in ("Delta", "r", "u", "v", "w"):
        assert 0 < getattr(f0, name) < 1 / 6


def test_lb_unknown_noise_monotone_and_errors():
    deltas = [lb_parameters_unknown_noise(n, LB)[0].Delta for n in (10, 100, 10**4, 10**7)]
    assert all(a > b for a, b in zip(deltas, deltas[1:]))
    for bad in (dict(alpha=0.0), dict(gamma=1.5), dict(C_alpha=2.0), dict(t_gamma=0.1)):
        with pytest.raises(ParameterError, match="violated constraint"):
            lb_parameters_unknown_noise(100, GammaParams(**{**LB.as_dict(), **bad}))


def _hyper_gamma(alpha, beta, d, gamma):
    return GammaParams(alpha=alpha, beta=beta, d=d, gamma=gamma, t_gamma=0.04, t_tau=0.3,
                       C_alpha=2 ** alpha)


@given(st.floats(0.05, 1.5), st.floats(0.2, 1.0), st.floats(1.5, 3.0), st.floats(1.0, 2.0),
       st.integers(10**3, 10**7))
def test_lb_hypercube_bracket_and_identities(alpha, beta, d, gamma, n):
    g = _hyper_gamma(alpha, beta, d, gamma)
    try:
        cube = lb_parameters_hypercube(n, g, seed=1)
    except ParameterError as exc:
        assert "n too small" in str(exc)
        return
    e = beta * gamma / (gamma * (2 * beta + d) + alpha * beta)
    assert 4 ** (-beta / d) * (2 * n) ** -e * (1 - 1e-12) <= cube.Delta <= (2 * n) ** -e * (1 + 1e-12)
    assert 1 <= cube.m <= 2 ** (cube.l - 1)
    v_formula = cube.Delta ** ((alpha * beta + gamma * d) / (gamma * beta)) / 3
    assert cube.v == pytest.approx(v_formula, rel=1e-9)


def test_lb_hypercube_errors():
    with pytest.raises(ParameterError, match="alpha \\* beta <= d"):
        lb_parameters_hypercube(1000, _hyper_gamma(2.0, 1.0, 1.0, 1.0))
    with pytest.raises(ParameterError, match="n too small"):
        lb_parameters_hypercube(2, _hyper_gamma(1.0, 1.0, 1.0, 1.0))


def test_lb_hypercube_gamma_below_one_breaks_half_cube():
    # the m formula outgrows 2^(l-1) when gamma < 1 and alpha > 0
    with pytest.raises(ParameterError, match="m <= 2\\^\\(l-1\\)"):
        lb_parameters_hypercube(10**6, _hyper_gamma(1.0, 1.0, 2.0, 0.5))


def test_lb_hypercube_margin_constant():
    # the anchors have |eta - 1/2| = 1/2, so the margin bound just above 1/2 needs C_alpha > 2^alpha 2/3
    g = GammaParams(alpha=1.0, beta=1.0, d=2.0, gamma=1.0, t_gamma=0.04, t_tau=0.3, C_alpha=1.0)
    with pytest.raises(ParameterError, match="margin"):
        lb_parameters_hypercube(10**5, g)


def test_lb_hypercube_signs_seeded():
    g = _hyper_gamma(0.5, 1.0, 2.0, 1.0)
    a, b = lb_parameters_hypercube(10**5, g, 3), lb_parameters_hypercube(10**5, g, 3)
    assert a.signs == b.signs
    assert lb_parameters_hypercube(10**5, g, 4).m == a.m


def test_rate_exponent_examples():
    r = rate_exponent(GammaParams())
    assert (r.exponent, r.branch) == (0.5, TIE)
    r = rate_exponent(GammaParams(tau=0.5))
    assert r.exponent == pytest.approx(0.4, abs=1e-15) and r.branch == NOISE_LIMITED
    assert r.classification_exponent == 0.5
    r = rate_exponent(GammaParams(tau=1e9))
    assert r.branch == CLASSIFICATION_LIMITED and r.exponent == 0.5
    with pytest.warns(UserWarning):
        rate_exponent(GammaParams(gamma=0.3))


@given(st.floats(0, 3), st.floats(0.05, 1), st.floats(0.5, 4), st.floats(0.34, 3), st.floats(0.05, 10))
def test_rate_exponent_formula(alpha, beta, d, gamma, tau):
    g = GammaParams(alpha=alpha, beta=beta, d=d, gamma=gamma, tau=tau)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = rate_exponent(g)
    a, b, c, e = (Fraction(v) for v in (alpha, beta, gamma, tau))
    dd = Fraction(d)
    cls = c * b * (a + 1) / (c * (2 * b + dd) + a * b)
    noise = e * b * (a + 1) / (e * (2 * b + dd) + b)
    assert r.exponent == pytest.approx(float(min(cls, noise)), rel=1e-12)
    if e * a < c:
        assert r.branch == NOISE_LIMITED and noise <= cls
    elif e * a > c:
        assert r.branch == CLASSIFICATION_LIMITED and cls <= noise


def test_gamma_params_round_trip_and_validation():
    g = GammaParams(alpha=2.0, C_alpha=16.0)
    assert GammaParams.from_dict(g.as_dict()) == g
    with pytest.raises(ParameterError):
        GammaParams(beta=1.5)
    with pytest.raises(ParameterError):
        GammaParams(C_tau=0.5)
