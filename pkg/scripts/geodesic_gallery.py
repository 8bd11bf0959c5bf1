"""Planar projections of one representative geodesic per dynamical class.

Each CSV holds t, theta, x, y, p_theta, P_u, P_v, H, kappa; a summary line per
geodesic reports its class and conservation drifts.
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass
from pathlib import Path

from se2lines.cli import geodesic_table
from se2lines.flow import lift_geodesic
from se2lines.reduction import Momentum, ReducedState, level_p_theta
from se2lines.serialize import write_csv


@dataclass(frozen=True)
class Representative:
    name: str
    R: float
    theta0: float
    p_sign: float = 1.0


GALLERY = (
    Representative("line", 1.0, 0.0, 0.0),
    Representative("heteroclinic", 1.0, math.pi / 2),
    Representative("rotating_R0.5", 0.5, math.pi / 2),
    Representative("librating_R2", 2.0, math.pi / 2),
    Representative("closed_R0", 0.0, 0.0),
)


@dataclass
class GalleryConfig:
    T: float = 20.0
    step: float = 1e-3
    every: int = 20
    out_dir: Path = Path("results/geodesics")


def run(cfg: GalleryConfig) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for rep in GALLERY:
        mu = Momentum(rep.R, 0.0)
        r0 = ReducedState(level_p_theta(mu, rep.theta0, rep.p_sign) if rep.p_sign else 0.0, rep.theta0)
        arc = lift_geodesic(mu, r0, T=cfg.T, step=cfg.step, every=cfg.every)
        path = cfg.out_dir / f"{rep.name}.csv"
        with path.open("w", newline="\n") as fh:
            write_csv(fh, *geodesic_table(arc))
        cls = arc.classification
        print(f"{rep.name:>15}: {cls.dynamical.value}/{cls.inflectional.value}, "
              f"energy drift {arc.max_energy_drift:.1e}, end ({arc.x[-1]:+.4f}, {arc.y[-1]:+.4f})")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=20.0)
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--every", type=int, default=20)
    ap.add_argument("--out-dir", type=Path, default=GalleryConfig.out_dir)
    a = ap.parse_args()
    run(GalleryConfig(a.T, a.step, a.every, a.out_dir))


if __name__ == "__main__":
    main()
