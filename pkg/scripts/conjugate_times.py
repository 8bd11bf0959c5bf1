"""Measured first conjugate time from a Hill endpoint, relative to the one-way Hill time.

Scans R > 1 and both endpoints of I1; the ratio t*/L_hill comes out as 2 for
every momentum, i.e. the conjugate point sits after a full libration.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from se2lines.minimality import conjugate_point_check
from se2lines.reduction import Momentum, hill_intervals
from se2lines.serialize import write_csv


@dataclass
class ConjugateConfig:
    radii: list[float] = field(default_factory=lambda: [1.05, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0])
    delta: float = 0.0
    step: float = 1e-3
    out: Path = Path("results/conjugate_times.csv")


def run(cfg: ConjugateConfig) -> list[tuple]:
    rows = []
    for R in cfg.radii:
        mu = Momentum(R, cfg.delta)
        iv = hill_intervals(mu)[0]
        for end, theta0 in (("lo", iv.lo), ("hi", iv.hi)):
            rep = conjugate_point_check(mu, theta0, step=cfg.step)
            ratio = rep.t_star / rep.L_hill if rep.found else float("nan")
            rows.append((R, end, rep.L_hill, rep.t_star, ratio, rep.J_at_t_star, rep.J_at_half, rep.valid))
            print(f"R={R:<5g} {end}: L_hill={rep.L_hill:.10f} t*={rep.t_star!s:<20} ratio={ratio:.9f}")
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    with cfg.out.open("w", newline="\n") as fh:
        write_csv(fh, ("R", "endpoint", "L_hill", "t_star", "ratio", "J_t_star", "J_half", "valid"), rows)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", type=float, nargs="+", default=ConjugateConfig().radii)
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--out", type=Path, default=ConjugateConfig.out)
    a = ap.parse_args()
    run(ConjugateConfig(radii=a.radii, step=a.step, out=a.out))


if __name__ == "__main__":
    main()
