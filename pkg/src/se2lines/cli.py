"""Command-line front end.

    se2lines geodesic --R 1 --delta 0 --theta0 1.5707963267948966 --ptheta0 1 --T 10
    se2lines period --R 0.5
    se2lines certify --R 1 --theta0 0 --ptheta0 0
    se2lines sweep --sub period --R-grid 0.1,0.2,0.3 --delta-grid 0

Exit codes: 0 success, 1 numerical failure, 2 precondition violation, 64 usage.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

from . import serialize
from .calibration import GlobalSeparatrix, LocalEikonal, matching_separatrix_sign, verify_calibration
from .errors import IntegrationError, PreconditionError
from .flow import CotangentState, check_on_level, classify_geodesic, curvature_of_projection, full_flow, lift_geodesic
from .group import Pose
from .minimality import TURNING_POINT_TOL, certify_metric_line, conjugate_point_check, cut_witness
from .period import period_data, periodicity_witness_direct
from .reduction import (
    IntervalKind,
    Momentum,
    ReducedState,
    classify_level_set,
    hill_intervals,
    level_p_theta,
    momentum_from_cartesian,
    sample_level_set,
)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_PRECONDITION = 2
EXIT_USAGE = 64

COMMANDS = ("geodesic", "levelset", "classify", "period", "calibrate", "cut", "certify", "sweep")
TABULAR = ("geodesic", "levelset")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    R: float | None = None
    delta: float | None = None
    a: float | None = None
    b: float | None = None
    theta0: float | None = None
    ptheta0: float | None = None
    x0: float = 0.0
    y0: float = 0.0
    T: float | None = None
    step: float = 1e-3
    every: int = 10
    adaptive: bool = False
    tol: float = 1e-10
    flow: str = "lift"
    n: int = 200
    interval: str | None = None
    kind: str = "global"
    sign: int | None = None
    n_random: int = 1000
    seed: int = 0
    out: str | None = None
    format: str | None = None
    sub: str | None = None
    R_grid: tuple[float, ...] = ()
    delta_grid: tuple[float, ...] = (0.0,)
    jobs: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        polar = self.R is not None or self.delta is not None
        cart = self.a is not None or self.b is not None
        if polar and cart:
            raise UsageError("give either (--R, --delta) or (--a, --b), not both")
        if self.command != "sweep" and not (polar or cart):
            raise UsageError("momentum required: --R [--delta] or --a --b")
        if polar and self.R is None:
            raise UsageError("--delta needs --R")
        if self.T is not None and not self.T > 0:
            raise UsageError("--T must be positive")
        if not self.step > 0 or self.every < 1 or self.n < 2:
            raise UsageError("--step must be positive, --every >= 1, --n >= 2")
        if self.format not in (None, "csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.command == "sweep" and self.sub not in COMMANDS[:-1]:
            raise UsageError("sweep needs --sub with one of " + ", ".join(COMMANDS[:-1]))

    @property
    def fmt(self) -> str:
        if self.format:
            return self.format
        return "csv" if self.command in TABULAR else "json"

    def momentum(self) -> Momentum:
        if self.a is not None or self.b is not None:
            return momentum_from_cartesian(self.a or 0.0, self.b or 0.0)
        if self.R is None or self.R < 0:
            raise PreconditionError("R must be given and nonnegative")
        return Momentum(self.R, self.delta or 0.0)

    def reduced(self, mu: Momentum) -> ReducedState:
        """Initial reduced state; theta0 defaults to delta + pi/2, p_theta0 to the positive root."""
        theta0 = mu.delta + math.pi / 2 if self.theta0 is None else self.theta0
        if self.ptheta0 is None:
            q = 1.0 - (mu.R * math.cos(theta0 - mu.delta)) ** 2
            if q < -1e-10:
                raise PreconditionError(f"theta0={theta0!r} is outside the Hill region")
            return ReducedState(level_p_theta(mu, theta0), theta0)
        return ReducedState(self.ptheta0, theta0)

    def params(self) -> dict:
        d = asdict(self)
        for k in ("out", "format", "command"):
            d.pop(k)
        d["R_grid"] = list(self.R_grid)
        d["delta_grid"] = list(self.delta_grid)
        return {k: v for k, v in d.items() if v is not None}


def _interval_dict(iv) -> dict:
    return {"lo": iv.lo, "hi": iv.hi, "kind": iv.kind.value}


def _select_interval(cfg: RunConfig, mu: Momentum):
    if cfg.interval is None:
        return None
    for iv in hill_intervals(mu):
        if iv.kind.value == cfg.interval:
            return iv
    raise PreconditionError(f"no Hill interval {cfg.interval!r} for R={mu.R!r}")


def _geodesic(cfg: RunConfig, mu: Momentum):
    r0 = cfg.reduced(mu)
    T = 10.0 if cfg.T is None else cfg.T
    g0 = Pose(r0.theta, cfg.x0, cfg.y0)
    if cfg.flow == "full":
        check_on_level(mu, r0)
        s0 = CotangentState.from_reduced(mu, r0, g0)
        return full_flow(s0, T, step=cfg.step, every=cfg.every, adaptive=cfg.adaptive, tol=cfg.tol)
    return lift_geodesic(mu, r0, g0, T, step=cfg.step, every=cfg.every,
                         adaptive=cfg.adaptive, tol=cfg.tol)


def geodesic_table(arc) -> tuple[tuple[str, ...], list[list[float]]]:
    _, kappa, _ = curvature_of_projection(arc)
    cols = [arc.t, arc.theta, arc.x, arc.y, arc.p_theta, arc.P_u, arc.P_v, arc.energy, kappa]
    rows = [[float(c[i]) for c in cols] for i in range(arc.t.size)]
    return serialize.GEODESIC_COLUMNS, rows


def execute(cfg: RunConfig) -> tuple[int, dict, tuple | None]:
    """Run one non-sweep command; returns (exit code, JSON result, optional CSV table)."""
    mu = cfg.momentum()
    cmd = cfg.command
    if cmd == "geodesic":
        arc = _geodesic(cfg, mu)
        header, rows = geodesic_table(arc)
        cls = arc.classification
        result = {
            "classification": None if cls is None else {"dynamical": cls.dynamical.value,
                                                        "inflectional": cls.inflectional.value},
            "max_energy_drift": arc.max_energy_drift,
            "max_momentum_drift": arc.max_momentum_drift,
            "columns": list(header),
            "data": {h: [r[j] for r in rows] for j, h in enumerate(header)},
        }
        return EXIT_OK, result, (header, rows)
    if cmd == "levelset":
        branches = sample_level_set(mu, cfg.n)
        shape = classify_level_set(mu)
        rows = []
        for br in branches:
            for th, p in zip(br.theta, br.p_theta):
                rows.append([br.interval.kind.value, br.sign, float(th), float(p)])
        result = {
            "shape": shape.shape.value,
            "intervals": [_interval_dict(iv) for iv in shape.intervals],
            "branches": [{"interval": br.interval.kind.value, "sign": br.sign,
                          "theta": br.theta, "p_theta": br.p_theta} for br in branches],
        }
        return EXIT_OK, result, (("interval", "branch", "theta", "p_theta"), rows)
    if cmd == "classify":
        r0 = cfg.reduced(mu)
        cls = classify_geodesic(mu, r0)
        shape = classify_level_set(mu)
        return EXIT_OK, {
            "R": mu.R, "delta": mu.delta,
            "level_set": shape.shape.value,
            "intervals": [_interval_dict(iv) for iv in shape.intervals],
            "dynamical": cls.dynamical.value,
            "inflectional": cls.inflectional.value,
        }, None
    if cmd == "period":
        pd = period_data(mu, _select_interval(cfg, mu))
        witness = mu.a * pd.dx + mu.b * pd.dy
        return EXIT_OK, {
            "L": pd.L, "reduced_period": pd.reduced_period, "dx": pd.dx, "dy": pd.dy,
            "interval": _interval_dict(pd.interval),
            "periodic": mu.R == 0.0, "witness": witness,
            "witness_direct": periodicity_witness_direct(mu, pd.interval),
        }, None
    if cmd == "calibrate":
        r0 = cfg.reduced(mu)
        T = 20.0 if cfg.T is None else cfg.T
        arc = lift_geodesic(mu, r0, Pose(r0.theta, cfg.x0, cfg.y0), T, step=cfg.step, every=cfg.every)
        if cfg.kind == "global":
            sign = cfg.sign or matching_separatrix_sign(mu.delta, r0.theta, r0.p_theta)
            cf = GlobalSeparatrix(mu.delta, sign)
        elif cfg.kind == "local":
            sign = cfg.sign or (1 if r0.p_theta >= 0 else -1)
            cf = LocalEikonal(mu, sign)
        else:
            raise UsageError("--kind must be global or local")
        rep = verify_calibration(cf, arc, cfg.n_random, seed=cfg.seed)
        result = {"kind": cfg.kind, "sign": sign, **rep.to_dict()}
        return (EXIT_OK if rep.passed else EXIT_NUMERICAL), result, None
    if cmd == "cut":
        r0 = cfg.reduced(mu)
        g0 = Pose(r0.theta, cfg.x0, cfg.y0)
        if abs(r0.p_theta) > TURNING_POINT_TOL:
            w = cut_witness(mu, r0, g0, step=cfg.step)
            out = {"type": "CutWitness", **w.to_dict()}
        else:
            classify_geodesic(mu, r0)
            rep = conjugate_point_check(mu, r0.theta, g0, step=cfg.step)
            out = {"type": "ConjugacyReport", **rep.to_dict()}
        return (EXIT_OK if out["valid"] else EXIT_NUMERICAL), out, None
    if cmd == "certify":
        r0 = cfg.reduced(mu)
        verdict = certify_metric_line(mu, r0, Pose(r0.theta, cfg.x0, cfg.y0),
                                      T=20.0 if cfg.T is None else cfg.T, step=cfg.step,
                                      n_random=cfg.n_random, seed=cfg.seed)
        out = verdict.to_dict()
        return (EXIT_OK if verdict.evidence_ok else EXIT_NUMERICAL), out, None
    raise UsageError(f"unknown command {cmd!r}")


def _run_point(cfg: RunConfig) -> dict:
    try:
        code, result, _ = execute(cfg)
        if cfg.command == "geodesic":
            data = result.pop("data")
            result = {**result, "final": {k: data[k][-1] for k in ("t", "theta", "x", "y")}}
        elif cfg.command == "levelset":
            result.pop("branches")
        return {"ok": code == EXIT_OK, "exit_code": code, "result": result}
    except PreconditionError as exc:
        return {"ok": False, "exit_code": EXIT_PRECONDITION, "error": str(exc)}
    except (IntegrationError, ArithmeticError) as exc:
        return {"ok": False, "exit_code": EXIT_NUMERICAL, "error": str(exc)}


def sweep(cfg: RunConfig) -> tuple[int, dict]:
    """Run ``cfg.sub`` over the (R, delta) grid; each point gets seed ``cfg.seed + index``."""
    points = []
    for R in cfg.R_grid:
        for d in cfg.delta_grid:
            k = len(points)
            points.append(replace(cfg, command=cfg.sub, sub=None, R=R, delta=d, a=None, b=None,
                                  seed=cfg.seed + k, R_grid=(), delta_grid=(0.0,), jobs=1))
    if cfg.jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(_run_point, points))
    else:
        outcomes = [_run_point(p) for p in points]
    rows = [{"R": p.R, "delta": p.delta, "seed": p.seed, **o} for p, o in zip(points, outcomes)]
    n_failed = sum(not r["ok"] for r in rows)
    report = {"sub": cfg.sub, "n_points": len(rows), "n_failed": n_failed, "points": rows}
    return (EXIT_NUMERICAL if n_failed else EXIT_OK), report


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute a validated config, write its artifact, and return the exit code."""
    stdout = stdout or sys.stdout
    try:
        if cfg.command == "sweep":
            code, result = sweep(cfg)
            table = None
        else:
            code, result, table = execute(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (IntegrationError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    fh = open(cfg.out, "w", newline="\n") if cfg.out else stdout
    try:
        if cfg.fmt == "json":
            fh.write(serialize.dumps(serialize.envelope(cfg.command, cfg.params(), result)) + "\n")
        elif table is not None:
            serialize.write_csv(fh, *table)
        else:
            serialize.write_csv(fh, ("key", "value"), serialize.flatten(result))
    finally:
        if cfg.out:
            fh.close()
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _floats(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="se2lines", description="Sub-Riemannian geodesics on SE(2).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        g = sp.add_argument_group("momentum (radians)")
        g.add_argument("--R", type=float)
        g.add_argument("--delta", type=float)
        g.add_argument("--a", type=float)
        g.add_argument("--b", type=float)
        sp.add_argument("--theta0", type=float)
        sp.add_argument("--ptheta0", type=float)
        sp.add_argument("--x0", type=float, default=0.0)
        sp.add_argument("--y0", type=float, default=0.0)
        sp.add_argument("--T", type=float)
        sp.add_argument("--step", type=float, default=1e-3)
        sp.add_argument("--every", type=int, default=10)
        sp.add_argument("--adaptive", action="store_true")
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--flow", choices=("lift", "full"), default="lift")
        sp.add_argument("--n", type=int, default=200, help="level-set samples per branch")
        sp.add_argument("--interval", choices=[k.value for k in IntervalKind])
        sp.add_argument("--kind", choices=("global", "local"), default="global")
        sp.add_argument("--sign", type=int, choices=(1, -1))
        sp.add_argument("--n-random", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("csv", "json"))
        if name == "sweep":
            sp.add_argument("--sub", required=True, choices=COMMANDS[:-1])
            sp.add_argument("--R-grid", type=_floats, default=())
            sp.add_argument("--delta-grid", type=_floats, default=(0.0,))
            sp.add_argument("--jobs", type=int, default=1)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except BrokenPipeError:
        # downstream reader (e.g. ``head``) closed early
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
