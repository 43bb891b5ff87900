import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reslab.airy_model import (
    ASYMPTOTIC_SUITES,
    DEFAULT_PHASE,
    EXACT_SUITES,
    SCALED_ROBIN_PHASE,
    LowerOrder,
    ModelOperatorSpec,
    airy_realization_eigs,
    check_inequalities,
    fd_weights,
    frozen_operator,
    min_rayleigh,
    model_window,
    sigma_min,
    trial_quantities,
)
from reslab.conditions import BoundaryCondition
from reslab.errors import ConvergenceError, DomainError, ResolutionError
from reslab.geometry import first_airy_prime_zero, first_airy_zero

D = BoundaryCondition.dirichlet()
N = BoundaryCondition.neumann()


@given(st.sets(st.integers(-4, 6), min_size=3, max_size=7), st.integers(1, 2))
def test_fd_weights_exact_on_polynomials(offsets, deriv):
    offs = tuple(sorted(offsets))
    w = fd_weights(offs, deriv)
    x = np.array(offs, dtype=float)
    for p in range(len(offs)):
        exact = math.factorial(p) / math.factorial(p - deriv) * 0.0 ** (p - deriv) if p >= deriv else 0.0
        assert abs(w @ x**p - exact) <= 1e-9 * max(1.0, np.abs(w) @ np.abs(x) ** p)


def _poly_with_bc(bc):
    """Quartic u with the boundary condition at 0 and its exact u''."""
    if bc.kind == "dirichlet":
        c = np.array([0.0, 0.7, -1.1, 0.4, 0.9])
    else:
        k = 1.0 if bc.scaled_phase is None else bc.scaled_phase
        # k u'(0) + gamma u(0) = 0 with u(0) = 1
        c = np.array([1.0, -bc.effective_gamma / k, -1.1, 0.4, 0.9], dtype=complex)
    der2 = np.array([2 * c[2], 6 * c[3], 12 * c[4], 0, 0])

    def ev(coef, t):
        return sum(coef[i] * t**i for i in range(len(coef)))

    return (lambda t: ev(c, t)), (lambda t: ev(der2, t))


@pytest.mark.parametrize(
    "bc",
    [D, N, BoundaryCondition.robin(2.0), BoundaryCondition.robin(2.0, SCALED_ROBIN_PHASE), BoundaryCondition.robin(-0.5)],
)
def test_rows_exact_for_quartics(bc):
    # A = (hD)^2 + 2Q t with phase 1, Q = 1/2, h = 1
    spec = ModelOperatorSpec(h=1.0, T=4.0, phase=1.0, bc=bc)
    op = frozen_operator(spec, 200)
    u, upp = _poly_with_bc(bc)
    t = op.grid
    got = op.sparse @ u(t)
    want = -upp(t) + t * u(t)
    rows = slice(0, 150)
    assert np.max(np.abs(got[rows] - want[rows])) <= 1e-8 * np.max(np.abs(want[rows]))


def test_parameter_collapse_to_airy_model():
    base = frozen_operator(ModelOperatorSpec(h=1.0, T=40.0, phase=1.0, bc=N), 800)
    rot = frozen_operator(ModelOperatorSpec(h=1.0, T=40.0, bc=N), 800)
    assert abs(rot.sparse - DEFAULT_PHASE * base.sparse).max() <= 1e-12 * abs(base.sparse).max()
    ev = np.linalg.eigvals(rot.matrix)
    ev = ev[np.argsort(np.abs(ev))][:3]
    ref = np.array([1.0187929716, 3.2481975822, 4.8200992112]) * DEFAULT_PHASE
    assert np.max(np.abs(ev - ref)) < 1e-4


def test_lower_order_terms():
    h, T = 1e-3, 1.0
    lo = LowerOrder(c_d=1.0, c_0=-1.0, c_1=1.0, c_2=-1.0)
    spec = ModelOperatorSpec(h=h, T=T, R_val=0.3, Q_val=0.7, eta_weight=2.0, lower_order=lo, bc=D)
    A = frozen_operator(spec, 400)
    bare = frozen_operator(ModelOperatorSpec(h=h, T=T, R_val=0.3, Q_val=0.7, eta_weight=2.0, bc=D), 400)
    t = A.grid
    diag = (A.sparse - bare.sparse).diagonal()
    pot = (-h + math.sqrt(h) * t - t * t) * 4.0
    # the central first difference has zero diagonal away from the boundary row
    assert np.allclose(diag[1:-1], pot[1:-1], atol=1e-12)


def test_spec_validation():
    with pytest.raises(DomainError):
        ModelOperatorSpec(h=1.0, T=0.5)
    with pytest.raises(DomainError):
        ModelOperatorSpec(h=1e-3, T=1.0, Q_val=0.0)
    with pytest.raises(DomainError):
        ModelOperatorSpec(h=1e-3, T=1.0, eta_weight=0.5)
    with pytest.raises(DomainError):
        LowerOrder(c_d=math.inf)


def test_airy_realization_values():
    d = airy_realization_eigs(D, 3, 2000)
    n = airy_realization_eigs(N, 3, 2000)
    assert d[0] == pytest.approx(2.338, abs=1e-3)
    assert n[0] == pytest.approx(1.019, abs=1e-3)
    assert d[1] == pytest.approx(4.08795, abs=1e-4)
    assert np.allclose(d, [2.3381074105, 4.0879494441, 5.5205598281], atol=1e-4)
    assert np.allclose(n, [1.0187929716, 3.2481975822, 4.8200992112], atol=1e-4)


def test_airy_realization_validation():
    with pytest.raises(DomainError):
        airy_realization_eigs(D, 11)
    with pytest.raises(DomainError):
        airy_realization_eigs(D, 3, 100)
    with pytest.raises(DomainError):
        airy_realization_eigs(D, 3, 2000, T_s=20.0)


def test_self_adjoint_collapse():
    h = 1e-2
    for bc in (D, N, BoundaryCondition.robin(1.0)):
        op = frozen_operator(ModelOperatorSpec(h=h, T=model_window(h), phase=1.0, bc=bc), 600)
        ev = np.linalg.eigvals(op.matrix)
        assert np.max(np.abs(ev.imag)) <= 1e-9 * np.max(np.abs(ev))
        for w in (0.03 + 0.01j, 0.2 + 0.05j):
            dist = np.min(np.abs(ev - w))
            assert sigma_min(op, w) == pytest.approx(dist, rel=1e-3)


def test_min_rayleigh_values():
    assert min_rayleigh(D, 1e-3) == pytest.approx(2.33811e-2, abs=1e-5)
    assert min_rayleigh(N, 1e-3) == pytest.approx(1.01879e-2, abs=1e-5)


@pytest.mark.parametrize("bc,zero", [(D, first_airy_zero), (N, first_airy_prime_zero)])
def test_min_rayleigh_scaling_covariance(bc, zero):
    vals = [min_rayleigh(bc, h) / h ** (2 / 3) for h in (1e-2, 1e-4, 1e-6)]
    assert max(vals) - min(vals) <= 1e-6
    assert vals[0] == pytest.approx(zero(), abs=1e-5)


def test_min_rayleigh_penalties():
    h = 1e-3
    base = min_rayleigh(N, h)
    # a positive |u(0)|^2 penalty raises the Neumann minimum; Dirichlet ignores both
    assert min_rayleigh(N, h, (0.0, 5.0)) > base
    assert min_rayleigh(D, h, (3.0, 5.0)) == pytest.approx(min_rayleigh(D, h), rel=1e-12)
    # with gamma = 1 the penalty c_00 = 1 removes the Robin shift exactly
    assert min_rayleigh(BoundaryCondition.robin(1.0), h, (0.0, 1.0)) == pytest.approx(base, rel=1e-12)
    with pytest.raises(DomainError):
        min_rayleigh(D, h, (-1.0, 0.0))


def test_min_rayleigh_validation():
    with pytest.raises(DomainError):
        min_rayleigh(N, 0.5)
    with pytest.raises(ResolutionError):
        min_rayleigh(N, 1e-3, n=200)


def test_robin_correction_sign():
    # Robin gamma > 0 lowers the minimum, by about gamma h^{4/3}/zeta1'
    h = 1e-4
    dev = (min_rayleigh(BoundaryCondition.robin(1.0), h) / h ** (2 / 3) - first_airy_prime_zero()) / h ** (2 / 3)
    assert dev == pytest.approx(-1 / first_airy_prime_zero(), rel=0.02)


def test_sigma_min_arg_guard():
    op = frozen_operator(ModelOperatorSpec(h=1e-2, T=model_window(1e-2), R_val=1.0), 400)
    with pytest.raises(DomainError):
        sigma_min(op, -1.0 + 0.0j)
    with pytest.raises(DomainError):
        sigma_min(op, cmath.exp(-0.6j))


def test_sigma_min_nonconvergence():
    op = frozen_operator(ModelOperatorSpec(h=1e-2, T=model_window(1e-2), R_val=1.0), 24)
    with pytest.raises(ConvergenceError):
        sigma_min(op, 1 + 0.1j)


def test_sigma_min_grid_convergence():
    spec = ModelOperatorSpec(h=1e-3, T=model_window(1e-3), R_val=1.0, Q_val=0.5)
    a = sigma_min(frozen_operator(spec, 1000), 1 + 0.1j, check=False)
    b = sigma_min(frozen_operator(spec, 2000), 1 + 0.1j, check=False)
    assert abs(a - b) <= 1e-3 * b


def test_glancing_instance_single_h():
    h, r0 = 1e-3, 0.1
    s = sigma_min(frozen_operator(ModelOperatorSpec(h=h, T=model_window(h), R_val=1.0, Q_val=0.5), 2000), 1 + 1j * r0)
    assert s >= r0
    # leading order: |i r0 + e^{-2 pi i/3} ... | gives excess ~ cos(pi/6) zeta1' h^{2/3}
    pred = abs(1j * r0 + cmath.exp(1j * math.pi / 3) * first_airy_prime_zero() * h ** (2 / 3))
    assert s == pytest.approx(pred, rel=0.01)


@pytest.mark.parametrize("kind", ["D", "G", "N"])
def test_quadratic_identity_with_boundary_term(kind):
    # ||Au||^2 = ||(hD)^2 u||^2 + ||tu||^2 + 2||t^{1/2} hDu||^2 - h^2 |u(0)|^2 for any u vanishing near T
    h = 1e-2
    q = trial_quantities(kind, h, 10 * h ** (2 / 3), 100, seed=3)
    rhs = q["hD2u2"] + q["tu2"] + 2 * q["t_hDu2"] - h * h * q["u0"] ** 2
    assert np.max(np.abs(q["Au2"] - rhs) / q["Au2"]) <= 1e-10


@pytest.mark.parametrize("kind", ["D", "N"])
def test_quadratic_identity_dirichlet_neumann(kind):
    # the identity as stated for Dirichlet/Neumann data, without a boundary term
    h = 1e-2
    q = trial_quantities(kind, h, 10 * h ** (2 / 3), 100, seed=3)
    rhs = q["hD2u2"] + q["tu2"] + 2 * q["t_hDu2"]
    assert np.max(np.abs(q["Au2"] - rhs) / q["Au2"]) <= 1e-10


def test_sine_bump_trial_dnh2():
    # Dirichlet trial sin(pi t/T) times a bump: ||Au||^2 >= ||(hD)^2u||^2 + ||tu||^2
    from reslab.airy_model import _cutoff, _quadrature

    h = 1e-2
    T = 10 * h ** (2 / 3)
    t, w = _quadrature(T)
    chi, dchi, d2chi = _cutoff(t, T)
    om = math.pi / T
    u = np.sin(om * t) * chi
    upp = -(om**2) * np.sin(om * t) * chi + 2 * om * np.cos(om * t) * dchi + np.sin(om * t) * d2chi
    Au = -h * h * upp + t * u
    assert (Au**2) @ w >= ((h * h * upp) ** 2) @ w + ((t * u) ** 2) @ w


@pytest.mark.parametrize("suite", [s for s in EXACT_SUITES if s != "eo:dnh2"])
@pytest.mark.parametrize("h", [1e-2, 1e-4])
def test_exact_suites(suite, h):
    rep = check_inequalities(suite, h, 200, seed=1)
    assert rep.worst_margin >= -1e-9, rep.to_dict()


def test_dnh2_suite_dirichlet_half():
    # the Dirichlet trials of the mixed suite satisfy the inequality
    q = trial_quantities("D", 1e-2, 10 * 1e-2 ** (2 / 3), 100, seed=2)
    assert np.all(q["Au2"] - q["hD2u2"] - q["tu2"] >= -1e-9 * q["Au2"])


@pytest.mark.parametrize("suite", ASYMPTOTIC_SUITES)
def test_asymptotic_suites_report(suite):
    rep = check_inequalities(suite, 1e-3, 100, seed=4)
    assert set(rep.fitted_constants) == {"C"}
    assert math.isfinite(rep.fitted_constants["C"]) and rep.fitted_constants["C"] >= 0
    assert rep.passed


def test_report_serialization_and_determinism():
    a = check_inequalities("ei:h1", 1e-2, 100, seed=9)
    b = check_inequalities("ei:h1", 1e-2, 100, seed=9)
    assert a.to_json() == b.to_json()
    doc = json.loads(a.to_json())
    assert {"suite", "h", "n", "seed", "worst_margin", "argmin_trial", "fitted_constants"} <= set(doc)
    assert doc["seed"] == 9


def test_inequality_validation():
    with pytest.raises(DomainError):
        check_inequalities("nope", 1e-2)
    with pytest.raises(DomainError):
        check_inequalities("ei:dh0", 1e-2, trials=10)
    with pytest.raises(DomainError):
        trial_quantities("X", 1e-2, 1.0)
