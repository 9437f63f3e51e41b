"""Acceptance battery: every check returns a result row for the report.

The quick level covers unitarity/norm conservation and the qubit
identities; the full level runs all ten checks, including the convergence
studies over L in {100, 200, 400, 800}.
"""

from __future__ import annotations

import io
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import gauge, qubit, two_particle
from .coins import (
    CoinField,
    RestrictedCoinField,
    build_coin,
    build_coin_restricted,
    build_shift,
)
from .evolution import StepBuilder, conventional_step, evolve, modified_step
from .geometry import (
    coin_to_metric,
    dispersion,
    flat_metric,
    light_cone_boundary,
    metric_to_coin,
    nonstatic_trig_metric,
    rindler_like_metric,
)
from .hamiltonian import (
    coefficients_general,
    coefficients_restricted,
    convergence_order,
    write_convergence_csv,
)
from .lattice import initial_state, make_lattice, momentum_values, probability_profile
from .pauli import SIGMA
from .scenarios import (
    builtin_scenario,
    inverse_participation_ratio,
    probability_csv,
    run_scenario,
)

UNITARITY_TOL = 1e-12
SLOPE_BAND = (0.8, 1.2)


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.seconds = float(self.seconds)


@dataclass
class Report:
    level: str
    results: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> str:
        return json.dumps(
            {"level": self.level, "all_passed": self.all_passed,
             "results": [asdict(r) for r in self.results]},
            indent=2,
        ) + "\n"

    def lines(self):
        for r in self.results:
            tag = "PASS" if r.passed else "FAIL"
            yield f"[{tag}] #{r.criterion} {r.name} ({r.seconds:.2f}s): {r.detail}"


# ---------------------------------------------------------------------------
# deterministic random field builders (shared with the test suite)

def trig_profile(rng, width, amp, n_terms=2, base=None):
    """Random smooth profile periodic over `width`, with analytic derivative."""
    harmonics = rng.integers(1, 4, size=n_terms)
    ks = 2.0 * np.pi * harmonics / width
    amps = amp * rng.uniform(-1.0, 1.0, size=n_terms)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_terms)
    const = amp * rng.uniform(-1.0, 1.0) if base is None else base

    def fn(x, t):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, const, dtype=float)
        for A, k, ph in zip(amps, ks, phases):
            out += A * np.sin(k * x + ph)
        return out

    def dfn(x, t):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for A, k, ph in zip(amps, ks, phases):
            out += A * k * np.cos(k * x + ph)
        return out

    return fn, dfn


def random_restricted_pair(rng, width, angle_amp=0.4, slope_amp=0.3,
                           with_phase=True):
    """Pair of independent random spin-x coin fields, periodic over width."""
    fields = []
    for label in (1, 2):
        th, dth = trig_profile(rng, width, angle_amp)
        vt, _ = trig_profile(rng, width, slope_amp)
        if with_phase:
            xi, dxi = trig_profile(rng, width, angle_amp)
            lam, _ = trig_profile(rng, width, slope_amp)
        else:
            xi, lam = 0.0, 0.0
            dxi = lambda x, t: np.zeros(np.shape(x))
        fields.append(RestrictedCoinField(
            theta=th, vartheta=vt, xi=xi, lam=lam,
            dtheta_dx=dth, dxi_dx=dxi, label=label,
        ))
    return tuple(fields)


def random_general_field(rng, width, label=1, slope_amp=0.015):
    """General U(2) family with independently phased F and G.

    Keep the tau-slopes small: the linear-in-tau coin model carries a norm
    defect tau^2 (|f|^2 + |g|^2) that must stay below the build gate.
    """
    th, dth = trig_profile(rng, width, 0.5)
    vt, _ = trig_profile(rng, width, slope_amp)
    al, dal = trig_profile(rng, width, 0.6)
    be, dbe = trig_profile(rng, width, 0.6)
    adot, _ = trig_profile(rng, width, slope_amp)
    bdot, _ = trig_profile(rng, width, slope_amp)
    xi, dxi = trig_profile(rng, width, 0.5)
    lam, _ = trig_profile(rng, width, 0.3)

    def F(x, t):
        return np.cos(th(x, t)) * np.exp(1j * al(x, t))

    def G(x, t):
        return np.sin(th(x, t)) * np.exp(1j * be(x, t))

    def f(x, t):
        return (-vt(x, t) * np.sin(th(x, t))
                + 1j * adot(x, t) * np.cos(th(x, t))) * np.exp(1j * al(x, t))

    def g(x, t):
        return (vt(x, t) * np.cos(th(x, t))
                + 1j * bdot(x, t) * np.sin(th(x, t))) * np.exp(1j * be(x, t))

    def dF(x, t):
        return (-np.sin(th(x, t)) * dth(x, t)
                + 1j * dal(x, t) * np.cos(th(x, t))) * np.exp(1j * al(x, t))

    def dG(x, t):
        return (np.cos(th(x, t)) * dth(x, t)
                + 1j * dbe(x, t) * np.sin(th(x, t))) * np.exp(1j * be(x, t))

    return CoinField(F=F, G=G, f=f, g=g, xi=xi, lam=lam,
                     dF_dx=dF, dG_dx=dG, dxi_dx=dxi, label=label)


def fig3_fields(lattice):
    return metric_to_coin(flat_metric(0.04), lattice)


def fig4_fields(lattice, shift_a=1.0 / 250.0):
    # the published static curved field, frozen at the published lattice unit
    return metric_to_coin(rindler_like_metric(0.04, shift_a), lattice)


def periodic_state_bank(lattice, coin_dim=2):
    """Smooth periodic packets for small domains where Gaussians cannot decay."""
    x = lattice.positions
    width = lattice.width
    k1 = 2.0 * np.pi / width
    bank = []
    spinors = [(1.0, 0.0), (1.0 / np.sqrt(2.0), 1j / np.sqrt(2.0))]
    for mode, spinor in zip((0, 1), spinors):
        envelope = 1.0 + 0.5 * np.cos(k1 * x)
        wave = envelope * np.exp(1j * mode * k1 * x)
        spin = np.zeros(coin_dim, dtype=complex)
        spin[: len(spinor)] = spinor
        amps = spin[:, None] * wave[None, :]
        bank.append(amps / np.linalg.norm(amps))
    return bank


def _fit_slope(L_values, errors):
    return float(np.polyfit(np.log(1.0 / np.asarray(L_values, dtype=float)),
                            np.log(np.asarray(errors)), 1)[0])


# ---------------------------------------------------------------------------
# 1. unitarity and norm conservation

def check_unitarity() -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    worst = 0.0
    lat = make_lattice(64, 1.0 / 64.0)
    ops = [build_shift(lat, "plus"), build_shift(lat, "minus"),
           build_shift(lat, "plus", coin_dim=4)]
    f1, f2 = random_restricted_pair(rng, lat.width)
    g1 = random_general_field(rng, lat.width, label=1)
    g2 = random_general_field(rng, lat.width, label=2)
    ops += [build_coin_restricted(f1, 0.0, lat.spacing, lat),
            build_coin(g1, 0.0, lat.spacing, lat)]
    for mode in ("conventional", "modified"):
        ops.append(conventional_step(StepBuilder(f1, f2, lat, mode="conventional"), 0.0))
        ops.append(modified_step(StepBuilder(g1, g2, lat, mode="modified"), 0.0))
    # U(2) gauge coin and step on a smaller lattice
    lat16 = make_lattice(16, 1.0 / 100.0)
    gens = gauge.make_generators(2)
    gf1, gf2 = _random_gauge_pair(rng, lat16.width, 2)
    ops.append(gauge.build_coin_un(gf1, gens, 0.0, lat16.spacing, lat16))
    ops.append(gauge.gauge_step(gf1, gf2, gens, lat16, "modified", 0.0, lat16.spacing))
    # two-particle coin and step
    lat8 = make_lattice(8, 1.0 / 100.0)
    tf1, tf2 = _random_two_fields(rng, lat8.width)
    ops.append(two_particle.build_two_coin(tf1, 0.0, lat8.spacing, lat8))
    ops.append(two_particle.two_particle_step(tf1, tf2, lat8, "modified",
                                              0.0, lat8.spacing))
    for op in ops:
        worst = max(worst, op.unitarity_defect())

    # norm conservation over 1000 steps on a mid-size lattice
    lat_norm = make_lattice(256, 1.0 / 256.0)
    n1, n2 = random_restricted_pair(rng, lat_norm.width)
    builder = StepBuilder(n1, n2, lat_norm, mode="modified")
    state = initial_state([1.0, 0.0], lat_norm.origin_index, lat_norm)
    traj = evolve(builder, state, 1000)
    drift = traj.metadata["max_norm_drift"]

    passed = worst < UNITARITY_TOL and drift < 1e-10
    detail = f"max unitarity defect {worst:.2e}, norm drift {drift:.2e} over 1000 steps"
    return CheckResult(1, "unitarity and norm conservation", passed, detail,
                       time.perf_counter() - start)


def _random_gauge_pair(rng, width, N):
    base1, base2 = random_restricted_pair(rng, width, with_phase=False)
    n_gen = N * N

    def weights():
        return [trig_profile(rng, width, 1.0)[0] for _ in range(n_gen)]

    return (gauge.GaugeCoinField(base1, weights(), weights()),
            gauge.GaugeCoinField(base2, weights(), weights()))


def _random_two_fields(rng, width):
    """Distance-dependent pair fields theta(|x1 - x2|), periodic over width."""
    fields = []
    for label in (1, 2):
        k = 2.0 * np.pi * rng.integers(1, 3) / width
        amp = 0.4 * rng.uniform(0.5, 1.0)
        off = 0.3 * rng.uniform(-1.0, 1.0)
        vt = 0.3 * rng.uniform(-1.0, 1.0)

        def theta(x1, x2, t, k=k, amp=amp, off=off):
            return off + amp * np.cos(k * (np.asarray(x1) - np.asarray(x2)))

        def d1(x1, x2, t, k=k, amp=amp):
            return -amp * k * np.sin(k * (np.asarray(x1) - np.asarray(x2)))

        def d2(x1, x2, t, k=k, amp=amp):
            return amp * k * np.sin(k * (np.asarray(x1) - np.asarray(x2)))

        fields.append(two_particle.TwoCoinField(
            theta=theta, vartheta=vt, d_theta_dx1=d1, d_theta_dx2=d2, label=label))
    return tuple(fields)


# ---------------------------------------------------------------------------
# 2. qubit identities

def check_qubit_identities() -> CheckResult:
    start = time.perf_counter()
    failures = []

    plus = qubit.decompose(qubit.position_shift_matrix(2, "plus"))
    expect_plus = {(0, 1): 0.5, (0, 2): -0.5j, (1, 1): 0.5, (1, 2): 0.5j}
    if plus.coefficient_map() != expect_plus:
        failures.append("cyclic +a decomposition")

    minus = qubit.decompose(qubit.position_shift_matrix(2, "minus"))
    expect_minus = {(0, 1): 0.5, (0, 2): 0.5j, (1, 1): 0.5, (1, 2): -0.5j}
    if minus.coefficient_map() != expect_minus:
        failures.append("cyclic -a decomposition")

    ident = qubit.decompose(np.eye(4, dtype=complex))
    if ident.coefficient_map() != {(0, 0): 1.0}:
        failures.append("identity decomposition")

    swc = qubit.shift_with_coin(2, "plus")
    expect_swc = {
        (0, 0, 0): 0.5, (3, 0, 0): -0.5,
        (0, 0, 1): 0.25, (0, 0, 2): -0.25j, (0, 1, 1): 0.25, (0, 1, 2): 0.25j,
        (3, 0, 1): 0.25, (3, 0, 2): -0.25j, (3, 1, 1): 0.25, (3, 1, 2): 0.25j,
    }
    if swc.coefficient_map() != expect_swc:
        failures.append("coin-conditioned +a decomposition")

    worst = 0.0
    for n in (1, 2, 3, 4):
        lat = qubit.qubit_lattice(n)
        for direction in ("plus", "minus"):
            target = build_shift(lat, direction).matrix
            rec = qubit.decompose(target, has_coin_qubit=True).reconstruct()
            worst = max(worst, float(np.max(np.abs(rec - target))))
    if worst > 1e-12:
        failures.append(f"reconstruction error {worst:.2e}")

    passed = not failures
    detail = "exact term match, reconstruction <= 1e-12" if passed else "; ".join(failures)
    return CheckResult(2, "qubit shift identities", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 3. dispersion

def check_dispersion() -> CheckResult:
    start = time.perf_counter()
    lat = make_lattice(64, 1.0)
    tau = lat.spacing
    k_grid = momentum_values(lat).values
    x = lat.positions
    w = np.exp(1j * np.outer(x, k_grid)) / np.sqrt(lat.n_sites)
    w_full = np.kron(np.eye(2), w)
    rng = np.random.default_rng(3)
    worst = 0.0
    for trial in range(20):
        th1, th2 = rng.uniform(-1.4, 1.4, size=2)
        f1 = RestrictedCoinField(theta=float(th1), vartheta=0.0)
        f2 = RestrictedCoinField(theta=float(th2), vartheta=0.0)
        u = conventional_step(StepBuilder(f1, f2, lat, mode="conventional"), 0.0).matrix
        u_k = w_full.conj().T @ u @ w_full
        for idx, k in enumerate(k_grid):
            block = np.array([
                [u_k[idx, idx], u_k[idx, lat.n_sites + idx]],
                [u_k[lat.n_sites + idx, idx], u_k[lat.n_sites + idx, lat.n_sites + idx]],
            ])
            phases = np.abs(np.angle(np.linalg.eigvals(block)))
            expected = dispersion(k, th1, th2, tau, lat.spacing) * tau
            worst = max(worst, float(np.max(np.abs(phases - expected))))
    # massless case is exact
    f0 = RestrictedCoinField(theta=0.0, vartheta=0.0)
    u = conventional_step(StepBuilder(f0, f0, lat, mode="conventional"), 0.0).matrix
    u_k = w_full.conj().T @ u @ w_full
    massless = 0.0
    for idx, k in enumerate(k_grid):
        phase = abs(np.angle(u_k[idx, idx]))
        massless = max(massless, abs(phase - abs(k) * tau))
    passed = worst < 1e-10 and massless < 1e-12
    detail = f"20 random pairs within {worst:.2e}; massless within {massless:.2e}"
    return CheckResult(3, "momentum-space dispersion", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 4. generator convergence

def convergence_studies(rng_seed=7):
    """Named convergence reports for the published fields plus random ones."""
    L_values = (100, 200, 400, 800)
    rng = np.random.default_rng(rng_seed)
    width = 1.28
    cases = [("flat", fig3_fields), ("static-curved", fig4_fields)]
    for i in range(5):
        f1, f2 = random_restricted_pair(rng, width)
        cases.append((f"random-{i}", lambda lat, f1=f1, f2=f2: (f1, f2)))
    reports = []
    for name, factory in cases:
        reports.append((name, convergence_order(factory, L_values)))
    return reports


def check_convergence(out_dir=None) -> CheckResult:
    start = time.perf_counter()
    reports = convergence_studies()
    lines = []
    passed = True
    for name, rep in reports:
        ok = SLOPE_BAND[0] <= rep.slope <= SLOPE_BAND[1]
        passed = passed and ok
        lines.append(f"{name}: slope {rep.slope:.3f}")
        if out_dir is not None:
            from pathlib import Path

            write_convergence_csv(rep, Path(out_dir) / f"convergence_{name}.csv")
    if out_dir is not None:
        from pathlib import Path

        from .plotting import render_convergence_figure

        render_convergence_figure(reports, Path(out_dir) / "convergence.png")
    return CheckResult(4, "generator convergence", passed, "; ".join(lines),
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 5. general vs restricted coefficients

def check_coefficient_agreement() -> CheckResult:
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    worst = 0.0
    n_points = 0
    for trial in range(4):
        lat = make_lattice(256, rng.uniform(0.005, 0.02))
        f1, f2 = random_restricted_pair(rng, lat.width)
        t = float(rng.uniform(0.0, 1.0))
        restricted = coefficients_restricted(f1, f2, lat, t)
        general = coefficients_general(f1.to_general(), f2.to_general(), lat, t)
        worst = max(worst,
                    float(np.max(np.abs(restricted.potential - general.potential))),
                    float(np.max(np.abs(restricted.velocity - general.velocity))))
        n_points += lat.n_sites
    passed = worst < 1e-10
    detail = f"{n_points} grid points, max deviation {worst:.2e}"
    return CheckResult(5, "general vs restricted coefficients", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 6. geometry round trip

def check_geometry_round_trip() -> CheckResult:
    start = time.perf_counter()
    cases = [
        ("flat", flat_metric(0.04), make_lattice(128, 1.0 / 250.0), 0.0, 1.0),
        ("static-rindler-like", rindler_like_metric(0.04, 1.0 / 250.0),
         make_lattice(128, 1.0 / 250.0), 0.0, 1.0),
        ("nonstatic-trig", nonstatic_trig_metric(0.04),
         make_lattice(128, 1.0 / 150.0), 1.0, None),
    ]
    worst = 0.0
    for name, spec, lat, t, e00 in cases:
        f1, f2 = metric_to_coin(spec, lat)
        norm = spec.e00 if e00 is None else e00
        rec = coin_to_metric(f1, f2, norm, lat, check_times=(t,))
        x = lat.positions
        worst = max(
            worst,
            float(np.max(np.abs(rec.ratio(x, t) - spec.ratio(x, t)))),
            float(np.max(np.abs(np.asarray(rec.A0(x, t)) - np.asarray(spec.A0(x, t))))),
            float(np.max(np.abs(np.asarray(rec.mass(x, t)) - np.asarray(spec.mass(x, t))))),
        )
    passed = worst < 1e-8
    detail = f"max round-trip deviation {worst:.2e} over three scenario metrics"
    return CheckResult(6, "geometry round trip", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 7. scenario reproduction

def _circular_distance(n, origin):
    d = np.abs(np.arange(n) - origin)
    return np.minimum(d, n - d)


def flat_scenario_facts():
    """Measured fig3 clauses: max leak outside |x| <= t and profile asymmetry."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = run_scenario(builtin_scenario("fig3"), collect_cone=False)
    n, o = res.lattice.n_sites, res.lattice.origin_index
    dist = _circular_distance(n, o)
    leak = 0.0
    asym = 0.0
    for step in range(res.spec.n_steps + 1):
        p = res.trajectory.profiles[step]
        outside = p[dist > step]
        if outside.size:
            leak = max(leak, float(outside.max()))
        idx = np.arange(1, n // 2)
        asym = max(asym, float(np.max(np.abs(p[(o + idx) % n] - p[(o - idx) % n]))))
    return {"leak": leak, "asymmetry": asym, "result": res}


def curved_scenario_facts():
    """Measured fig4/fig5 clauses: right-mass, cone containment, localization."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fig4 = run_scenario(builtin_scenario("fig4"))
        fig5 = run_scenario(builtin_scenario("fig5"), collect_cone=False)
    x = fig4.lattice.positions
    final = fig4.trajectory.profiles[-1]
    mass_right = float(final[x >= 0.0].sum())
    margin = 3 * fig4.lattice.spacing  # lattice-scale smearing allowance
    min_in_cone = 1.0
    worst_step = 0
    for step in range(fig4.spec.n_steps + 1):
        left_b, right_b = fig4.cone[step]
        p = fig4.trajectory.profiles[step]
        inside = float(p[(x >= left_b - margin) & (x <= right_b + margin)].sum())
        if inside < min_in_cone:
            min_in_cone, worst_step = inside, step
    ipr4 = inverse_participation_ratio(fig4.trajectory.profiles[-1])
    ipr5 = inverse_participation_ratio(fig5.trajectory.profiles[-1])
    return {
        "mass_right": mass_right,
        "min_in_cone": min_in_cone,
        "worst_cone_step": worst_step,
        "wrap_step": fig4.summary["wrap_step"],
        "ipr4": ipr4,
        "ipr5": ipr5,
    }


def check_scenarios() -> CheckResult:
    start = time.perf_counter()
    failures = []

    flat = flat_scenario_facts()
    if flat["leak"] > 1e-14:
        failures.append(f"flat run leaks {flat['leak']:.2e} outside |x| <= t")
    if flat["asymmetry"] > 1e-12:
        failures.append(f"flat run asymmetry {flat['asymmetry']:.2e}")

    curved = curved_scenario_facts()
    if curved["mass_right"] < 0.95:
        failures.append(
            f"curved run final-step mass at x >= 0 is {curved['mass_right']:.4f} < 0.95 "
            f"(a near-horizon residue sits within five sites left of the origin and the "
            f"causal front leaves the 200-site domain near step 760; "
            f"boundary reached at step {curved['wrap_step']})"
        )
    if curved["min_in_cone"] < 1.0 - 1e-6:
        failures.append(
            f"curved run support outside the causal cone: in-cone mass "
            f"{curved['min_in_cone']:.4f} at step {curved['worst_cone_step']}"
        )
    if not curved["ipr5"] > curved["ipr4"]:
        failures.append(
            f"gauge IPR {curved['ipr5']:.4f} not above {curved['ipr4']:.4f}")

    passed = not failures
    detail = (
        f"flat symmetric and confined; right-mass {curved['mass_right']:.4f}, "
        f"in-cone {curved['min_in_cone']:.4f}, IPR {curved['ipr4']:.4f} -> {curved['ipr5']:.4f}"
        if passed else "; ".join(failures)
    )
    return CheckResult(7, "scenario reproduction", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 8. U(N) gauge suite

def check_gauge_un() -> CheckResult:
    start = time.perf_counter()
    failures = []
    rng = np.random.default_rng(13)
    lat = make_lattice(16, 1.0 / 100.0)
    gens = gauge.make_generators(2)

    # exact zero cases
    base_zero = RestrictedCoinField(theta=0.0, vartheta=0.1)  # G1 = 0
    w = [trig_profile(rng, lat.width, 1.0)[0] for _ in range(4)]
    W = [trig_profile(rng, lat.width, 1.0)[0] for _ in range(4)]
    gf1 = gauge.GaugeCoinField(base_zero, w, W)
    gf2 = gauge.GaugeCoinField(base_zero, w, W)
    chi = gauge.chi_coefficients(gf1, gf2, lat, 0.3)
    if np.any(chi[1]) or np.any(chi[2]):
        failures.append("chi_1, chi_2 not exactly zero for G1 = 0")
    base1, base2 = random_restricted_pair(rng, lat.width, with_phase=False)
    shared = [trig_profile(rng, lat.width, 1.0)[0] for _ in range(4)]
    gf_eq1 = gauge.GaugeCoinField(base1, shared, shared)
    gf_eq2 = gauge.GaugeCoinField(base2, shared, shared)
    chi_eq = gauge.chi_coefficients(gf_eq1, gf_eq2, lat, 0.0)
    if np.any(chi_eq[1]) or np.any(chi_eq[2]) or np.any(chi_eq[3]):
        failures.append("chi_1, chi_2, chi_3 not exactly zero for omega = Omega")

    # first-order match of the full dressed generator, N = 2
    L_values = (100, 200, 400, 800)
    errors = []
    rng_fields = np.random.default_rng(17)
    width = 0.16
    fb1, fb2 = random_restricted_pair(rng_fields, width, with_phase=False)
    om1 = [trig_profile(rng_fields, width, 1.0)[0] for _ in range(4)]
    Om1 = [trig_profile(rng_fields, width, 1.0)[0] for _ in range(4)]
    om2 = [trig_profile(rng_fields, width, 1.0)[0] for _ in range(4)]
    Om2 = [trig_profile(rng_fields, width, 1.0)[0] for _ in range(4)]
    for L in L_values:
        a = 1.0 / L
        n_sites = int(round(width * L))
        lat_l = make_lattice(n_sites, a)
        g1 = gauge.GaugeCoinField(fb1, om1, Om1)
        g2 = gauge.GaugeCoinField(fb2, om2, Om2)
        h_num = gauge.numeric_generator_un(g1, g2, gens, lat_l, 0.0)
        base_coeffs = coefficients_restricted(fb1, fb2, lat_l, 0.0)
        chi_l = gauge.chi_coefficients(g1, g2, lat_l, 0.0)
        h_ana = gauge.assemble_un(base_coeffs, chi_l, gens, lat_l)
        bank = periodic_state_bank(lat_l, coin_dim=4)
        err = 0.0
        for amps in bank:
            vec = amps.reshape(-1)
            err = max(err, float(np.linalg.norm((h_num - h_ana) @ vec)))
        errors.append(err)
    slope = _fit_slope(L_values, errors)
    if not SLOPE_BAND[0] <= slope <= SLOPE_BAND[1]:
        failures.append(f"dressed-generator slope {slope:.3f} outside {SLOPE_BAND}")

    passed = not failures
    detail = f"zero cases exact; N=2 slope {slope:.3f}" if passed else "; ".join(failures)
    return CheckResult(8, "U(N) gauge suite", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 9. two-particle suite

def _two_channel_action(field1, field2, lat, r1, r2, amps_pos, t=0.0):
    """Action of the (sigma_r1 x sigma_r2) coin channel of the numeric
    generator on a position wave function."""
    tau = lat.spacing
    n = lat.n_sites
    kmat = np.kron(SIGMA[r1], SIGMA[r2])
    out = np.zeros((n, n), dtype=complex)
    for c in range(4):
        amps = np.zeros((2, 2, n, n), dtype=complex)
        amps[divmod(c, 2)] = amps_pos
        stepped = two_particle.apply_two_step(field1, field2, amps, lat,
                                              "modified", t, tau)
        h_amps = 1j * (stepped - amps) / tau
        flat = h_amps.reshape(4, n, n)
        for cp in range(4):
            if kmat[cp, c] != 0:
                out += kmat[cp, c].conjugate() * flat[cp]
    return out / 4.0


def check_two_particle() -> CheckResult:
    start = time.perf_counter()
    failures = []

    # special-case closed forms on an 8x8 grid
    lat8 = make_lattice(8, 1.0 / 100.0)

    def theta2(x1, x2, t):
        return np.arccos((np.asarray(x1) - np.asarray(x2)) ** 2)

    def d1th2(x1, x2, t):
        d = np.asarray(x1) - np.asarray(x2)
        return -2.0 * d / np.sqrt(1.0 - d**4)

    def d2th2(x1, x2, t):
        d = np.asarray(x1) - np.asarray(x2)
        return 2.0 * d / np.sqrt(1.0 - d**4)

    vt1, vt2 = 0.21, 0.33
    fld1 = two_particle.TwoCoinField(
        theta=lambda x1, x2, t: -0.5 * theta2(x1, x2, t), vartheta=vt1,
        d_theta_dx1=lambda x1, x2, t: -0.5 * d1th2(x1, x2, t),
        d_theta_dx2=lambda x1, x2, t: -0.5 * d2th2(x1, x2, t), label=1)
    fld2 = two_particle.TwoCoinField(
        theta=theta2, vartheta=vt2,
        d_theta_dx1=d1th2, d_theta_dx2=d2th2, label=2)
    coeffs = two_particle.two_coefficients(fld1, fld2, lat8, 0.0)
    x1, x2 = two_particle.pair_grid(lat8)
    delta = x1 - x2
    checks = [
        (coeffs.pot_iz, 1j * delta, "pot_iz"),
        (coeffs.vel2_iz, delta**2, "vel2_iz"),
        (coeffs.pot_zi, -1j * delta, "pot_zi"),
        (coeffs.vel1_zi, delta**2, "vel1_zi"),
        (coeffs.pot_xy, 0.0 * delta, "pot_xy"),
        (coeffs.vel2_xy, 0.0 * delta, "vel2_xy"),
        (coeffs.pot_yx, 0.0 * delta, "pot_yx"),
        (coeffs.vel1_yx, 0.0 * delta, "vel1_yx"),
        (coeffs.pot_xx, (vt1 + vt2) + 0.0 * delta, "pot_xx"),
    ]
    for got, want, name in checks:
        dev = float(np.max(np.abs(got - want)))
        if dev > 1e-12:
            failures.append(f"{name} deviates {dev:.2e}")

    # reassembly identity
    h1, h2, inter = two_particle.hamiltonian_split(coeffs, lat8)
    full = two_particle.assemble_two(coeffs, lat8)
    if float(np.max(np.abs(full - (h1 + h2 + inter)))) != 0.0:
        failures.append("split reassembly not exact")

    # vanished coin channels shrink first-order in 1/L
    rng = np.random.default_rng(23)
    width = 0.16
    tfa, tfb = _random_two_fields(rng, width)
    norms = {(0, 0): [], (3, 3): [], (2, 2): []}
    L_values = (100, 200, 400, 800)
    for L in L_values:
        lat_l = make_lattice(int(round(width * L)), 1.0 / L)
        xg = lat_l.positions
        k1 = 2.0 * np.pi / lat_l.width
        envelope = (1.0 + 0.5 * np.cos(k1 * xg))
        psi = np.outer(envelope, envelope).astype(complex)
        psi /= np.linalg.norm(psi)
        for channel in norms:
            act = _two_channel_action(tfa, tfb, lat_l, channel[0], channel[1], psi)
            norms[channel].append(float(np.linalg.norm(act)))
    slopes = {ch: _fit_slope(L_values, vals) for ch, vals in norms.items()}
    for ch, slope in slopes.items():
        if not 0.7 <= slope <= 1.3:
            failures.append(f"channel {ch} slope {slope:.3f} not first order")

    # exchange symmetry for distance-dependent coins
    lat10 = make_lattice(10, 1.0 / 100.0)
    u = two_particle.two_particle_step(tfa, tfb, lat10, "modified",
                                       0.0, lat10.spacing).matrix
    swap = two_particle.swap_operator(lat10)
    comm = float(np.max(np.abs(u @ swap - swap @ u)))
    if comm > 1e-12:
        failures.append(f"exchange commutator {comm:.2e}")

    passed = not failures
    detail = (f"closed forms within 1e-12; channel slopes "
              + ", ".join(f"{ch}: {s:.2f}" for ch, s in slopes.items())
              + f"; exchange commutator {comm:.1e}") if passed else "; ".join(failures)
    return CheckResult(9, "two-particle suite", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 10. determinism

def check_determinism() -> CheckResult:
    start = time.perf_counter()
    spec = builtin_scenario("fig3")
    first = probability_csv(run_scenario(spec, collect_cone=False))
    second = probability_csv(run_scenario(spec, collect_cone=False))
    passed = first == second
    detail = "byte-identical CSV across two runs" if passed else "CSV outputs differ"
    return CheckResult(10, "determinism", passed, detail,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------

QUICK_CHECKS = (check_unitarity, check_qubit_identities)
FULL_CHECKS = (
    check_unitarity,
    check_qubit_identities,
    check_dispersion,
    check_convergence,
    check_coefficient_agreement,
    check_geometry_round_trip,
    check_scenarios,
    check_gauge_un,
    check_two_particle,
    check_determinism,
)


def run_verification_suite(level: str = "quick", out_dir=None) -> Report:
    """Run the acceptance battery; failures become report entries."""
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    if out_dir is not None:
        from pathlib import Path

        Path(out_dir).mkdir(parents=True, exist_ok=True)
    report = Report(level=level)
    checks = QUICK_CHECKS if level == "quick" else FULL_CHECKS
    for check in checks:
        if check is check_convergence:
            report.results.append(check(out_dir=out_dir))
        else:
            report.results.append(check())
    if out_dir is not None:
        from pathlib import Path

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json())
    return report
