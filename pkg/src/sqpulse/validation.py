"""Acceptance and invariant checks behind ``sqpulse validate``.

Each ``check_*`` function returns a list of :class:`CheckResult`. They are
deterministic apart from the Monte-Carlo trend check, which uses fixed seeds.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import analytic, dynamics, metrics, semiclassical
from .model import PulseParams, QubitSpec

KT = 1e-4
REL_TOL = 0.05


@dataclass(frozen=True)
class CheckResult:
    criterion: str
    name: str
    passed: bool
    measured: float
    expected: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.criterion} {self.name}: measured {self.measured:.6g}, expected {self.expected}"


def _params(r=0.0, phi=0.0, kappa_tau=KT, **kw):
    return PulseParams.from_kappa_tau(kappa_tau, gamma_tau=kw.pop("gamma_tau", 0.1), r=r, phi=phi, **kw)


def _unitary_run(q, p):
    psi = dynamics.evolve_state(q, p, "unitary")
    return metrics.tangle_pure(psi).value, metrics.gate_error(q, p, state=psi)


def _rel(a, b):
    return abs(a - b) / abs(b)


# shared list of no-reservoir runs feeding the tangle/error relation check
def _baseline_runs():
    runs = [(QubitSpec.ground(), _params())]
    for phi in (0.0, math.pi / 2):
        for r in np.linspace(0, 1, 11):
            runs.append((QubitSpec.ground(), _params(r=float(r), phi=phi)))
    for theta_a in (0.0, math.pi / 2):
        for phi in (0.0, math.pi / 2):
            for r in (0.0, 0.5, 1.16):
                runs.append((QubitSpec.equatorial(theta_a), _params(r=r, phi=phi)))
    return runs


def check_coherent_baseline():
    p = _params()
    t, _ = _unitary_run(QubitSpec.ground(), p)
    return [CheckResult("1", "coherent-light tangle / kappa*tau", _rel(t, KT) <= REL_TOL,
                        t / KT, "1 within 5%")]


def check_squeezing_slope():
    out = []
    rs = np.linspace(0, 1, 11)
    for phi, slope in ((0.0, -2.0), (math.pi / 2, 2.0)):
        ts = [_unitary_run(QubitSpec.ground(), _params(r=float(r), phi=phi))[0] for r in rs]
        fit = float(np.polyfit(rs, np.log(ts), 1)[0])
        out.append(CheckResult("2", f"pole tangle log-slope in r, phi={phi:.4g}",
                               abs(fit - slope) <= 0.05, fit, f"{slope:+.2f} +- 0.05"))
    return out


def check_pole_closed_form():
    """Pole tangle against the closed form over several squeezing phases."""
    worst = 0.0
    for phi in (0.0, math.pi / 4, math.pi / 2, 0.3):
        for r in (0.0, 0.5, 1.0, 1.16):
            for q in (QubitSpec.ground(), QubitSpec.excited()):
                t, _ = _unitary_run(q, _params(r=r, phi=phi))
                worst = max(worst, _rel(t, analytic.tangle_poles(r, phi, KT)))
    return [CheckResult("2", "pole tangle closed form (max rel. deviation)",
                        worst <= REL_TOL, worst, "<= 0.05")]


def check_equatorial():
    worst = 0.0
    for theta_a in (0.0, math.pi / 2):
        for phi in (0.0, math.pi / 2):
            for r in (0.0, 0.5, 1.16):
                t, _ = _unitary_run(QubitSpec.equatorial(theta_a), _params(r=r, phi=phi))
                worst = max(worst, _rel(t, analytic.tangle_equatorial(theta_a, r, phi, KT)))
    out = [CheckResult("3", "equatorial tangle closed form (max rel. deviation)",
                       worst <= REL_TOL, worst, "<= 0.05")]
    for theta_a, ref in ((0.0, (2 * math.pi + 4) ** 2 / (4 * math.pi**2)), (math.pi / 2, 4 / math.pi**2)):
        t, _ = _unitary_run(QubitSpec.equatorial(theta_a), _params())
        out.append(CheckResult("3", f"r=0 equatorial tangle / kappa*tau, theta_A={theta_a:.4g}",
                               _rel(t / KT, ref) <= REL_TOL, t / KT, f"{ref:.4f} within 5%"))
    return out


def check_tangle_error_relation():
    worst = 0.0
    for q, p in _baseline_runs():
        t, e = _unitary_run(q, p)
        worst = max(worst, abs(4 * e - t) / t / p.lam)
    return [CheckResult("4", "max |4 P_error - T| / (T lambda)", worst <= 3.0, worst, "<= 3")]


def _numeric_avg(r, phi=0.0):
    return metrics.average_error(_params(r=r, phi=phi), "unitary") / KT


def check_average_error():
    worst = 0.0
    for phi in (0.0, math.pi / 2):
        for r in (0.0, 0.25, 0.5, 0.75, 1.0, 1.16):
            num = _numeric_avg(r, phi)
            worst = max(worst, _rel(num, analytic.avg_error_analytic(r, phi, 1.0)))
    out = [CheckResult("5", "average error closed form (max rel. deviation)",
                       worst <= REL_TOL, worst, "<= 0.05")]
    base = _numeric_avg(0.0)
    crossing = brentq(lambda r: _numeric_avg(r) - base, 0.3, 0.6, xtol=1e-6)
    out.append(CheckResult("5", "amplitude-squeezed average error returns to r=0 value at r",
                           abs(crossing - 0.451) <= 0.005, crossing, "0.451 +- 0.005"))
    below = all(_numeric_avg(r) < base for r in np.linspace(0.02, crossing - 0.02, 12))
    above = all(_numeric_avg(r) > base for r in (crossing + 0.02, 0.7, 1.0, 1.16))
    out.append(CheckResult("5", "below the r=0 value only inside (0, crossing)",
                           below and above, float(below and above), "1"))
    res = minimize_scalar(_numeric_avg, bounds=(0.05, 0.45), method="bounded",
                          options={"xatol": 1e-6})
    out.append(CheckResult("5", "location of the average-error minimum",
                           abs(res.x - 0.226) <= 0.01, res.x, "0.226 +- 0.01"))
    out.append(CheckResult("5", "average-error minimum / kappa*tau",
                           _rel(res.fun, 0.2120) <= 0.02, res.fun, "0.2120 within 2%"))
    return out


RESERVOIR_STATE = QubitSpec.equatorial(math.pi / 2)


def _reservoir_error(r, phi):
    p = PulseParams(r=r, phi=phi, kappa_over_gamma=1e-3, gamma_tau=0.1)
    return metrics.gate_error(RESERVOIR_STATE, p, "lindblad")


def check_reservoir_baseline():
    e = _reservoir_error(0.0, 0.0)
    return [CheckResult("6", "coherent-light error with reservoir", abs(e - 0.0244) <= 0.0010,
                        e, "0.0244 +- 0.0010")]


def check_reservoir_deltas():
    base = _reservoir_error(0.0, 0.0)
    up = _reservoir_error(3.0, 0.0) - base
    down = base - _reservoir_error(3.0, math.pi / 2)
    return [
        CheckResult("7", "error increase at r=3, phi=0", _rel(up, 4e-3) <= 0.15, up, "4e-3 within 15%"),
        CheckResult("7", "error decrease at r=3, phi=pi/2", _rel(down, 0.95e-5) <= 0.15, down,
                    "0.95e-5 within 15%"),
    ]


def check_interference():
    worst = 0.0
    for r, phi in ((0.0, 0.0), (0.7, 0.3), (1.16, math.pi / 2), (2.0, 1.1)):
        p = _params(r=r, phi=phi)
        exp = dynamics.perturbative_propagator(p)
        v = p.lam * (exp.U1 @ dynamics.product_state(QubitSpec.ground(), p.n_max))
        amp_e1, amp_g1 = analytic.first_order_amplitudes(r, phi, p.lam)
        n = p.n_max + 1
        worst = max(worst, abs(v[n + 1] - amp_e1), abs(v[1] - amp_g1))
    out = [CheckResult("8", "first-order amplitudes vs closed form (max abs deviation)",
                       worst <= 1e-10, worst, "<= 1e-10")]
    # s/c = tanh(20) equals 1 to double precision
    for phi, label in ((0.0, "|g,1> amplitude (phi=0, s/c->1)"), (math.pi / 2, "|amp_g1|/lambda (phi=pi/2, s/c->1)")):
        p = _params(r=20.0, phi=phi, kappa_tau=1e-20)
        exp = dynamics.perturbative_propagator(p)
        v = p.lam * (exp.U1 @ dynamics.product_state(QubitSpec.ground(), p.n_max))
        if phi == 0.0:
            out.append(CheckResult("8", label, abs(v[1]) <= 1e-10 * p.lam, abs(v[1]), "0"))
        else:
            ratio = abs(v[1]) / p.lam
            out.append(CheckResult("8", label, abs(ratio - 1) <= 1e-10, ratio, "1"))
    return out


def random_valid_params(rng, count):
    """Random parameter points inside the perturbative and Markovian bounds."""
    out = []
    while len(out) < count:
        r = rng.uniform(0, 1.5)
        gt = 10 ** rng.uniform(-2, 0.3)
        kg = 10 ** rng.uniform(-4, -1.5)
        if math.cosh(r) * math.sqrt(kg * gt) > 0.14:
            continue
        out.append(PulseParams(r=r, phi=rng.uniform(0, math.pi), theta=rng.uniform(0, 2 * math.pi),
                               kappa_over_gamma=kg, gamma_tau=gt))
    return out


def _random_qubit(rng):
    return QubitSpec.general(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))


def check_invariants():
    rng = np.random.default_rng(20240917)
    worst_tr = worst_herm = 0.0
    worst_min = math.inf
    for p in random_valid_params(rng, 50):
        rho = dynamics.evolve_state(_random_qubit(rng), p, "lindblad")
        worst_tr = max(worst_tr, abs(np.trace(rho) - 1))
        worst_herm = max(worst_herm, float(np.max(np.abs(rho - rho.conj().T))))
        worst_min = min(worst_min, float(np.linalg.eigvalsh(rho)[0]))
    out = [
        CheckResult("9", "Lindblad trace defect on 50 random points", worst_tr <= 1e-10, worst_tr, "<= 1e-10"),
        CheckResult("9", "Lindblad Hermiticity defect", worst_herm <= 1e-10, worst_herm, "<= 1e-10"),
        CheckResult("9", "Lindblad minimum eigenvalue", worst_min >= -1e-9, worst_min, ">= -1e-9"),
    ]

    worst_fid = 0.0
    for p in random_valid_params(rng, 8):
        q = _random_qubit(rng)
        closed = p.replace(reservoir=False)
        rho = dynamics.evolve_state(q, closed, "lindblad")
        psi = dynamics.evolve_state(q, closed, "unitary")
        worst_fid = max(worst_fid, 1 - np.vdot(psi, rho @ psi).real)
    out.append(CheckResult("9", "1 - fidelity(Lindblad without decay, unitary)",
                           worst_fid < 1e-8, worst_fid, "< 1e-8"))

    exps = []
    for r, phi, q in ((0.0, 0.0, QubitSpec.ground()), (0.8, 0.4, QubitSpec.equatorial(1.0))):
        c = math.cosh(r)
        lams = np.geomspace(0.1, 0.01, 5)
        errs = []
        for lam in lams:
            p = _params(r=r, phi=phi, kappa_tau=(lam / c) ** 2)
            psi0 = dynamics.product_state(q, p.n_max)
            series = dynamics.perturbative_propagator(p).apply(psi0, normalize=False)
            errs.append(np.linalg.norm(series - dynamics.evolve_unitary(psi0, p)))
        exps.append(dynamics.order_scaling_exponent(lams, errs))
    worst_exp = max(exps, key=lambda e: abs(e - 3))
    out.append(CheckResult("9", "series truncation error exponent in lambda",
                           abs(worst_exp - 3) <= 0.2, worst_exp, "3.0 +- 0.2"))

    worst_n = 0.0
    for p in random_valid_params(rng, 6):
        q = _random_qubit(rng)
        big = p.replace(n_max=2 * p.n_max)
        for engine in ("unitary", "lindblad"):
            small_state = dynamics.evolve_state(q, p, engine)
            big_state = dynamics.evolve_state(q, big, engine)
            for a, b in (
                (metrics.gate_error(q, p, state=small_state), metrics.gate_error(q, big, state=big_state)),
                (metrics.tangle(small_state).value, metrics.tangle(big_state).value),
            ):
                worst_n = max(worst_n, abs(a - b))
    out.append(CheckResult("9", "change under n_max doubling", worst_n < 1e-9, worst_n, "< 1e-9"))
    return out


def _sc_error(q, r, phi, seed, samples):
    return semiclassical.noisy_obe_error(q, _params(r=r, phi=phi), samples=samples, seed=seed)


def check_semiclassical_trends(samples=100_000, r=0.5):
    """Direction of the squeezing effect in the noisy Bloch picture."""
    plus_y = QubitSpec.equatorial(math.pi / 2)
    cases = (
        (QubitSpec.ground(), 0.0, -1, "|g>, phi=0 lowers error"),
        (QubitSpec.ground(), math.pi / 2, +1, "|g>, phi=pi/2 raises error"),
        (plus_y, 0.0, +1, "+y, phi=0 raises error"),
        (plus_y, math.pi / 2, -1, "+y, phi=pi/2 lowers error"),
    )
    out = []
    for i, (q, phi, direction, label) in enumerate(cases):
        base, se0 = _sc_error(q, 0.0, phi, 1000 + i, samples)
        sq, se1 = _sc_error(q, r, phi, 2000 + i, samples)
        z = direction * (sq - base) / math.hypot(se0, se1)
        out.append(CheckResult("10", f"noisy Bloch trend: {label} (z-score)", z >= 3, z, ">= 3"))
    return out


def reservoir_onset(q, phi, r=1.16, gamma_taus=None):
    """Relative deviation of the mixed tangle from the short-pulse linear law."""
    if gamma_taus is None:
        gamma_taus = np.geomspace(1e-3, 0.1, 9)
    slope = metrics.tangle(dynamics.evolve_state(
        q, PulseParams(r=r, phi=phi, kappa_over_gamma=1e-3, gamma_tau=1e-3), "unitary")).value / 1e-6
    devs = []
    for gt in gamma_taus:
        p = PulseParams(r=r, phi=phi, kappa_over_gamma=1e-3, gamma_tau=float(gt))
        t = metrics.tangle(dynamics.evolve_state(q, p, "lindblad")).value
        lin = slope * p.kappa_tau
        devs.append(abs(t - lin) / lin)
    return np.asarray(gamma_taus), np.asarray(devs)


def check_reservoir_onset():
    gts, devs = reservoir_onset(QubitSpec.equatorial(math.pi / 2), math.pi / 2)
    monotone = bool(np.all(np.diff(devs) > 0))
    first = gts[np.argmax(devs > 0.1)] if np.any(devs > 0.1) else math.inf
    _, enhanced = reservoir_onset(QubitSpec.equatorial(math.pi / 2), 0.0, gamma_taus=gts)
    return [
        CheckResult("10", "suppressed-case deviation from linear law is monotone in gamma*tau",
                    monotone, float(monotone), "1"),
        CheckResult("10", "first gamma*tau with deviation above 10%", first < 1.0, first, "< 1"),
        CheckResult("10", "suppressed case deviates earlier than the enhanced case",
                    bool(np.all(devs > enhanced)), float(np.min(devs - enhanced)), "> 0"),
    ]


DETERMINISTIC_CHECKS = (
    check_coherent_baseline,
    check_squeezing_slope,
    check_pole_closed_form,
    check_equatorial,
    check_tangle_error_relation,
    check_average_error,
    check_reservoir_baseline,
    check_reservoir_deltas,
    check_interference,
    check_invariants,
    check_reservoir_onset,
)
MONTE_CARLO_CHECKS = (check_semiclassical_trends,)


def run_all(fast=False):
    checks = DETERMINISTIC_CHECKS + (() if fast else MONTE_CARLO_CHECKS)
    results = []
    for check in checks:
        try:
            results.extend(check())
        except Exception as exc:  # a crashing check is a failed check
            results.append(CheckResult("-", check.__name__, False, math.nan, f"no exception ({exc})"))
    return results
