"""Physics-facing layer: metrics and gauge potentials as coin parameters.

A diagonal (1+1) metric enters through the vielbein ratio e11/e00, which the
walk realizes as cos(2 theta1) with theta2 = -2 theta1.  The mass and U(1)
potential enter through the tau-derivatives and phase of the coins:

    theta1 = arccos(e11/e00) / 2
    vartheta1 + vartheta2 = m / e00 - d(theta1)/dx      (default split:
                                  vartheta1 cancels the derivative term)
    lambda1 + lambda2 = A0                              (default: lambda2 = 0)
    d(xi1)/dx = -A1 cos(2 theta1)                       (xi2 = 0)

xi1 is reconstructed from A1 by trapezoidal integration across the lattice
with the constant fixed to zero at the leftmost site; the choice is a gauge
convention and is recorded in scenario metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp

from .coins import RestrictedCoinField, as_field, _eval
from .lattice import Lattice, momentum_values
from .pauli import SIGMA
from .hamiltonian import momentum_operator

RATIO_TOL = 1e-12
FAMILY_TOL = 1e-10
SECANT_TOL = 1e-12


class MetricDomainError(ValueError):
    """Raised when a metric cannot be realized by the walk on some site."""


@dataclass
class MetricSpec:
    """Vielbein fields, U(1) potential and mass: the physics-side input.

    e00 must be positive on the simulated domain; the implied metric is
    g00 = e00^2, g11 = -e11^2, off-diagonal zero.  mass may be a constant or
    a map (x, t) -> m for emergent particles.  d_ratio_dx, when given, is the
    analytic x-derivative of e11/e00; cone, when given, is a closed-form
    characteristic x(x0, t, sign) used instead of ODE integration.
    """

    e00: Callable
    e11: Callable
    A0: Callable = 0.0
    A1: Callable = 0.0
    mass: object = 0.0
    d_ratio_dx: Optional[Callable] = None
    cone: Optional[Callable] = None
    name: str = "custom"

    def __post_init__(self):
        for attr in ("e00", "e11", "A0", "A1"):
            setattr(self, attr, as_field(getattr(self, attr)))
        if not callable(self.mass):
            m = float(self.mass)
            self.mass = as_field(m)

    def ratio(self, x, t):
        return _eval(self.e11, x, t) / _eval(self.e00, x, t)


def flat_metric(mass: float = 0.0) -> MetricSpec:
    return MetricSpec(
        e00=1.0, e11=1.0, mass=mass,
        d_ratio_dx=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)),
        cone=lambda x0, t, sign: x0 + sign * t,
        name="flat",
    )


def rindler_like_metric(mass: float, a: float) -> MetricSpec:
    """Static metric with g11 = -(x + 5a)^2; the horizon sits at x = -5a."""
    shift = 5.0 * a

    def cone(x0, t, sign):
        return (x0 + shift) * np.exp(sign * t) - shift

    return MetricSpec(
        e00=1.0,
        e11=lambda x, t: np.asarray(x, dtype=float) + shift,
        mass=mass,
        d_ratio_dx=lambda x, t: np.ones_like(np.asarray(x, dtype=float)),
        cone=cone,
        name="static-rindler-like",
    )


def nonstatic_trig_metric(mass: float) -> MetricSpec:
    """Non-static metric with e00 = 1/t and sinusoidal e11 (t > 0 only)."""
    return MetricSpec(
        e00=lambda x, t: np.broadcast_to(1.0 / t, np.shape(x)).copy(),
        e11=lambda x, t: np.cos(np.pi / 4.0 + 4.0 * np.asarray(x, float)) / t,
        mass=mass,
        d_ratio_dx=lambda x, t: -4.0 * np.sin(np.pi / 4.0 + 4.0 * np.asarray(x, float)),
        name="nonstatic-trig",
    )


def _checked_ratio(spec: MetricSpec, x, t):
    ratio = np.atleast_1d(np.asarray(spec.ratio(x, t), dtype=float))
    bad = np.where(np.abs(ratio) > 1.0 + RATIO_TOL)[0]
    if bad.size:
        j = int(bad[0])
        raise MetricDomainError(
            f"|e11/e00| = {abs(ratio[j]):.6g} > 1 at site {j} "
            f"(x = {np.atleast_1d(x)[j]:.6g}); rescale the vielbeins"
        )
    return np.clip(ratio, -1.0, 1.0).reshape(np.shape(x))


def metric_to_coin(spec: MetricSpec, lattice: Lattice,
                   vartheta1: Optional[Callable] = None):
    """Realize a metric/gauge/mass triple as a pair of rotation coin fields."""

    def ratio_grid(x, t):
        return _checked_ratio(spec, x, t)

    def d_ratio(x, t):
        if spec.d_ratio_dx is not None:
            return _eval(spec.d_ratio_dx, x, t)
        vals = _checked_ratio(spec, lattice.positions, t)
        grid = (np.roll(vals, -1) - np.roll(vals, 1)) / (2.0 * lattice.spacing)
        return np.interp(x, lattice.positions, grid)

    def theta1(x, t):
        return 0.5 * np.arccos(ratio_grid(x, t))

    def dtheta1(x, t):
        r = ratio_grid(x, t)
        dr = d_ratio(x, t)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = -0.5 * dr / np.sqrt(1.0 - r * r)
        return np.where(dr == 0.0, 0.0, out)

    if vartheta1 is None:
        def vt1(x, t):
            return -dtheta1(x, t)
    else:
        vt1 = as_field(vartheta1)

    def vt2(x, t):
        m = _eval(spec.mass, x, t)
        e00 = _eval(spec.e00, x, t)
        return m / e00 - _eval(vt1, x, t) - dtheta1(x, t)

    def dxi1(x, t):
        return -_eval(spec.A1, x, t) * np.cos(2.0 * theta1(x, t))

    def xi1(x, t):
        grid = dxi1(lattice.positions, t)
        vals = cumulative_trapezoid(grid, lattice.positions, initial=0.0)
        return np.interp(x, lattice.positions, vals)

    field1 = RestrictedCoinField(
        theta=theta1, vartheta=vt1, xi=xi1, lam=spec.A0,
        dtheta_dx=dtheta1, dxi_dx=dxi1, label=1,
    )
    field2 = RestrictedCoinField(
        theta=lambda x, t: -2.0 * theta1(x, t),
        vartheta=vt2, xi=0.0, lam=0.0,
        dtheta_dx=lambda x, t: -2.0 * dtheta1(x, t),
        dxi_dx=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)),
        label=2,
    )
    return field1, field2


def coin_to_metric(field1: RestrictedCoinField, field2: RestrictedCoinField,
                   e00: Callable, lattice: Lattice,
                   check_times=(0.0,)) -> MetricSpec:
    """Invert the coin realization back to metric, potential and mass.

    Requires theta2 = -2 theta1 (the comparable family).  The recovered A1
    carries a sec(2 theta1) factor and is singular where cos(2 theta1) = 0;
    evaluation reports the offending site rather than interpolating.
    """
    e00 = as_field(e00)
    x = lattice.positions
    for t in check_times:
        mismatch = np.max(np.abs(_eval(field2.theta, x, t) + 2.0 * _eval(field1.theta, x, t)))
        if mismatch > FAMILY_TOL:
            raise ValueError(
                f"theta2 != -2 theta1 (max deviation {mismatch:.3e}); "
                "these coins are outside the invertible family"
            )

    def e11(x, t):
        return _eval(e00, x, t) * np.cos(2.0 * _eval(field1.theta, x, t))

    def A0(x, t):
        return _eval(field1.lam, x, t) + _eval(field2.lam, x, t)

    def _dtheta1(x, t):
        if field1.dtheta_dx is not None:
            return _eval(field1.dtheta_dx, x, t)
        vals = _eval(field1.theta, lattice.positions, t)
        grid = (np.roll(vals, -1) - np.roll(vals, 1)) / (2.0 * lattice.spacing)
        return np.interp(x, lattice.positions, grid)

    def _dxi1(x, t):
        if field1.dxi_dx is not None:
            return _eval(field1.dxi_dx, x, t)
        vals = _eval(field1.xi, lattice.positions, t)
        grid = (np.roll(vals, -1) - np.roll(vals, 1)) / (2.0 * lattice.spacing)
        return np.interp(x, lattice.positions, grid)

    def A1(x, t):
        cos2 = np.atleast_1d(np.cos(2.0 * _eval(field1.theta, x, t)))
        small = np.where(np.abs(cos2) < SECANT_TOL)[0]
        if small.size:
            j = int(small[0])
            raise MetricDomainError(
                f"A1 is singular: cos(2 theta1) = 0 at site {j} "
                f"(x = {np.atleast_1d(x)[j]:.6g})"
            )
        return -_dxi1(x, t) / cos2.reshape(np.shape(x))

    def mass(x, t):
        total = _eval(field1.vartheta, x, t) + _eval(field2.vartheta, x, t)
        return _eval(e00, x, t) * (total + _dtheta1(x, t))

    return MetricSpec(e00=e00, e11=e11, A0=A0, A1=A1, mass=mass,
                      name="recovered")


def dirac_hamiltonian_1p1(spec: MetricSpec, lattice: Lattice, t: float = 0.0) -> np.ndarray:
    """Dense Hermitian target Hamiltonian for a diagonal (1+1) metric.

    Channels: -A0 on the identity, (e11/e00) p on sigma_3 (symmetrized, which
    supplies the -i/2 d(e11/e00)/dx piece), -(e11/e00) A1 on sigma_3, and
    m/e00 on sigma_1.
    """
    x = lattice.positions
    n = lattice.n_sites
    ratio = np.asarray(spec.ratio(x, t), dtype=float)
    a0 = _eval(spec.A0, x, t)
    a1 = _eval(spec.A1, x, t)
    m_over = _eval(spec.mass, x, t) / _eval(spec.e00, x, t)
    p_op = momentum_operator(lattice)
    vel = np.diag(ratio.astype(complex))
    h = np.kron(SIGMA[0], np.diag(-a0.astype(complex)))
    h += np.kron(SIGMA[3], 0.5 * (vel @ p_op + p_op @ vel))
    h += np.kron(SIGMA[3], np.diag(-(ratio * a1).astype(complex)))
    h += np.kron(SIGMA[1], np.diag(m_over.astype(complex)))
    return h


def dispersion(k, theta1: float, theta2: float, tau: float, a: float):
    """Positive-branch energy of the homogeneous walk at momentum k."""
    arg = np.cos(theta1) * np.cos(theta2) * np.cos(np.asarray(k) * a) \
        - np.sin(theta1) * np.sin(theta2)
    return np.arccos(np.clip(arg, -1.0, 1.0)) / tau


def light_cone_boundary(x0: float, t: float, spec: MetricSpec,
                        tol: float = 1e-8):
    """Causal boundary (x_left, x_right) reached from x0 after time t.

    Uses the metric's closed-form characteristics when available, otherwise
    integrates dx/dt = +- e11/e00 adaptively.
    """
    if t == 0.0:
        return float(x0), float(x0)
    if spec.cone is not None:
        return float(spec.cone(x0, t, -1.0)), float(spec.cone(x0, t, +1.0))

    def speed(sign):
        def rhs(s, y):
            return [sign * float(np.asarray(spec.ratio(np.array([y[0]]), s))[0])]
        return rhs

    bounds = []
    for sign in (-1.0, +1.0):
        sol = solve_ivp(speed(sign), (0.0, t), [float(x0)],
                        rtol=tol, atol=tol, dense_output=False)
        if not sol.success:
            raise RuntimeError(
                f"light-cone integration failed (sign {sign:+.0f}): {sol.message}"
            )
        bounds.append(float(sol.y[0, -1]))
    return bounds[0], bounds[1]


@dataclass
class Embedding2p1:
    """Fixed-transverse-momentum reading of the walk as a (2+1) Dirac system."""

    k_y: float
    e20_over_e00: float  # constant 1/2 in this solution branch
    e11_over_e00: np.ndarray
    e12_over_e00: np.ndarray
    e21_over_e00: np.ndarray
    e22_over_e00: np.ndarray
    A0: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    metric_over_e00sq: np.ndarray  # (3, 3, n_sites)


def embed_2p1(field1: RestrictedCoinField, field2: RestrictedCoinField,
              k_y: float, lattice: Lattice, t: float = 0.0) -> Embedding2p1:
    """Populate the vielbein ratios, potentials and 3x3 metric of the embedding.

    The metric grid is computed from the vielbein solution itself via
    g^{mu nu} = e^mu_(0) e^nu_(0) - e^mu_(1) e^nu_(1) - e^mu_(2) e^nu_(2)
    (normalized by e00^2).
    """
    from .coins import field_derivative_grid

    x = lattice.positions
    th1 = _eval(field1.theta, x, t)
    th2 = _eval(field2.theta, x, t)
    lam1 = _eval(field1.lam, x, t)
    lam2 = _eval(field2.lam, x, t)
    dxi1, _ = field_derivative_grid(field1.xi, field1.dxi_dx, lattice, t)
    dxi2, _ = field_derivative_grid(field2.xi, field2.dxi_dx, lattice, t)

    both = 2.0 * th1 + 2.0 * th2
    q11 = 0.5 * np.cos(2.0 * th1) + 0.5 * np.cos(both)
    q12 = 0.5 * np.sin(2.0 * th1) + 0.5 * np.sin(both)
    q20 = 0.5
    q21 = 0.5 * np.cos(both)
    q22 = 0.5 * np.sin(both)

    n = lattice.n_sites
    metric = np.zeros((3, 3, n))
    metric[0, 0] = 1.0
    metric[0, 2] = metric[2, 0] = q20
    metric[1, 1] = -(q11**2) - q12**2
    metric[1, 2] = metric[2, 1] = -(q11 * q21) - q12 * q22
    metric[2, 2] = q20**2 - q21**2 - q22**2

    return Embedding2p1(
        k_y=float(k_y),
        e20_over_e00=q20,
        e11_over_e00=q11,
        e12_over_e00=q12,
        e21_over_e00=q21,
        e22_over_e00=q22,
        A0=lam1 + lam2,
        A1=-dxi1,
        A2=-dxi2 + k_y,
        metric_over_e00sq=metric,
    )


def monotonicity_check(theta1: float, theta2: float, tau: float, a: float,
                       samples: int = 10_000):
    """Check that the positive-branch energy increases strictly with |k|.

    Applicable when cos(theta1) cos(theta2) > 0; outside that regime the
    statement is reported as not applicable rather than tested.
    """
    if np.cos(theta1) * np.cos(theta2) <= 1e-12:
        return None, {"status": "not applicable",
                      "reason": "cos(theta1) cos(theta2) <= 0"}
    k = np.linspace(0.0, np.pi / a, samples)
    energy = dispersion(k, theta1, theta2, tau, a)
    diffs = np.diff(energy)
    bad = np.where(diffs <= 0.0)[0]
    if bad.size:
        j = int(bad[0])
        return False, {
            "status": "violated",
            "k_pair": (float(k[j]), float(k[j + 1])),
            "energy_pair": (float(energy[j]), float(energy[j + 1])),
        }
    return True, {"status": "monotone", "samples": samples}
