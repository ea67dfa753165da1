"""Parameter sweeps producing figure data rows."""

import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic, dynamics, metrics, model
from .errors import ConfigError, ParameterError

TANGLE = "tangle"
ERROR = "error"
AVG_ERROR = "avg_error"


@dataclass
class SweepResult:
    params: model.PulseParams
    qubit: model.QubitSpec | None
    engine: str
    tangle: float | None = None
    error: float | None = None
    avg_error: float | None = None
    avg_error_analytic: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def row(self):
        """Ordered column mapping; omits quantities this sweep did not compute."""
        p = self.params
        out = {
            "r": p.r,
            "gamma_tau": p.gamma_tau,
            "kappa_over_gamma": p.kappa_over_gamma,
            "kappa_tau": p.kappa_tau,
            "phi": p.phi,
            "theta": p.theta,
        }
        if self.qubit is not None:
            out["state"] = self.qubit.label
        out["engine"] = self.engine
        for name in ("tangle", "error", "avg_error", "avg_error_analytic"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        out["lambda"] = self.diagnostics["lambda"]
        out["truncation_discard"] = self.diagnostics["truncation_discard"]
        out["step_convergence_delta"] = self.diagnostics["step_convergence_delta"]
        out["lambda_exceeded"] = int(p.lambda_exceeded)
        return out


def _outside_two_level(state, n_max):
    return float(max(0.0, 1.0 - dynamics.photon_distribution(state, n_max)[:2].sum()))


def _evaluate(kind, q, p, engine, steps):
    """Observable of interest and the final joint states it was computed from."""
    if kind == AVG_ERROR:
        qs = model.axial_states()
        states = [dynamics.evolve_state(s, p, engine, steps) for s in qs]
        errors = [metrics.gate_error(s, p, state=st) for s, st in zip(qs, states)]
        return float(np.mean(errors)), states
    state = dynamics.evolve_state(q, p, engine, steps)
    if kind == TANGLE:
        return metrics.tangle(state).value, [state]
    return metrics.gate_error(q, p, state=state), [state]


def run_point(kind, q, p, engine, steps, with_analytic=False):
    """Compute one sweep row."""
    value, states = _evaluate(kind, q, p, engine, steps)
    delta = 0.0
    if engine == "lindblad":
        refined, _ = _evaluate(kind, q, p, engine, 2 * steps)
        delta = abs(refined - value)
    discard = max(_outside_two_level(st, p.n_max) for st in states)
    res = SweepResult(
        params=p,
        qubit=q,
        engine=engine,
        diagnostics={
            "lambda": p.lam,
            "truncation_discard": discard,
            "step_convergence_delta": delta,
        },
    )
    setattr(res, kind, value)
    if with_analytic:
        res.avg_error_analytic = analytic.avg_error_analytic(p.r, p.phi, p.kappa_tau)
    return res


def _task(args):
    return run_point(*args)


def build_params(cfg, r, gamma_tau, phi):
    with warnings.catch_warnings():
        # rows past lambda_max are flagged in the output instead
        warnings.simplefilter("ignore", RuntimeWarning)
        return model.PulseParams(
            r=float(r),
            phi=float(phi),
            theta=cfg.theta,
            kappa_over_gamma=cfg.kappa_over_gamma,
            gamma_tau=float(gamma_tau),
            rotation_angle=cfg.rotation_angle,
            n_max=cfg.n_max,
            lambda_max=cfg.lambda_max,
            unsafe_lambda=cfg.unsafe_lambda,
        )


def plan(kind, cfg):
    """All sweep points in deterministic emission order.

    Parameters are validated before anything runs, so a bad grid produces
    no partial output.
    """
    grid = cfg.grid()
    with_analytic = kind == AVG_ERROR and cfg.analytic
    if with_analytic:
        bad = [phi for phi in cfg.phis if not any(
            math.isclose(phi, ok, abs_tol=1e-12) for ok in (0.0, math.pi / 2))]
        if bad or cfg.theta != 0 or not math.isclose(cfg.rotation_angle, math.pi):
            raise ConfigError(
                "analytic overlay needs phi in {0, pi/2}, theta = 0 and a pi pulse; "
                "set analytic = false in [output]"
            )
    states = [None] if kind == AVG_ERROR else cfg.states
    tasks = []
    for q in states:
        for phi in cfg.phis:
            for x in grid:
                r, gt = (x, cfg.gamma_tau) if cfg.axis == "r" else (cfg.r, x)
                try:
                    p = build_params(cfg, r, gt, phi)
                except ParameterError as exc:
                    raise ConfigError(f"invalid point r={r:.6g}, gamma_tau={gt:.6g}: {exc}") from exc
                tasks.append((kind, q, p, cfg.engine, cfg.steps, with_analytic))
    return tasks


def run_sweep(kind, cfg):
    tasks = plan(kind, cfg)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_task, tasks))
    return [_task(t) for t in tasks]


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value} in sweep output")
        return f"{float(value):.12g}"
    return str(value)


def write_rows(results, stream, fmt="csv"):
    rows = [r.row() for r in results]
    if fmt == "jsonl":
        for row in rows:
            clean = {
                k: (float(_fmt(v)) if isinstance(v, (float, np.floating)) else v)
                for k, v in row.items()
            }
            stream.write(json.dumps(clean) + "\n")
        return
    if not rows:
        return
    header = list(rows[0])
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(row[k]) for k in header) + "\n")
