"""Sample the unit-energy level curves of the reduced pendulum for several momenta.

Writes one CSV per R with columns R, interval, branch, theta, p_theta.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from se2lines.reduction import Momentum, classify_level_set, sample_level_set
from se2lines.serialize import write_csv


@dataclass
class LevelSetConfig:
    radii: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    delta: float = 0.0
    n: int = 400
    out_dir: Path = Path("results/level_sets")


def run(cfg: LevelSetConfig) -> list[Path]:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for R in cfg.radii:
        mu = Momentum(R, cfg.delta)
        rows = [
            (R, br.interval.kind.value, br.sign, float(t), float(p))
            for br in sample_level_set(mu, cfg.n)
            for t, p in zip(br.theta, br.p_theta)
        ]
        path = cfg.out_dir / f"level_set_R{R:g}.csv"
        with path.open("w", newline="\n") as fh:
            write_csv(fh, ("R", "interval", "branch", "theta", "p_theta"), rows)
        print(f"R={R:g}: {classify_level_set(mu).shape.value}, {len(rows)} points -> {path}")
        written.append(path)
    return written


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", type=float, nargs="+", default=LevelSetConfig().radii)
    ap.add_argument("--delta", type=float, default=0.0)
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--out-dir", type=Path, default=LevelSetConfig.out_dir)
    a = ap.parse_args()
    run(LevelSetConfig(a.radii, a.delta, a.n, a.out_dir))


if __name__ == "__main__":
    main()
