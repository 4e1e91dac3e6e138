"""Experiment engine: declarative sweeps, deterministic execution, CSV/JSON.

A sweep is a list of grid points; every point is reproducible from
(seed, grid index, shot index) alone, so results are byte-identical for
any worker count or chunking.  Pauli points run through the batched
decoding kernel; coherent points sample one angle vector per shot and
push all readout resamples of a shot through the same kernel.
"""

from __future__ import annotations

import csv
import json
import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__, decoder, pauli
from .codes import StabilizerCode, build_repetition_code, build_surface_code
from .coherent import NoiseParams, run_shot, refresh_angle_variant, sigma_of_p

CSV_HEADER = ["d", "p", "q", "sigma", "backend", "t", "pl", "stderr", "n"]

BACKENDS = ("coherent", "pauli", "refresh")
COHERENT_MAX_D = 5


class ConfigError(ValueError):
    """Invalid experiment description; maps to CLI exit code 2."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One grid point of a sweep.

    Exactly one of sigma / p must be given; t defaults to d for the surface
    code (2 for the repetition code); sample counts default per backend.
    """

    code: str = "surface"
    d: int = 3
    backend: str = "pauli"
    sigma: Optional[float] = None
    p: Optional[float] = None
    q: float = 0.0
    t: Optional[int] = None
    n_outer: Optional[int] = None
    n_readout: int = 20
    seed: int = 0

    def resolved(self) -> "ExperimentConfig":
        if self.code not in ("surface", "repetition"):
            raise ConfigError(f"unknown code {self.code!r}")
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}")
        if (self.sigma is None) == (self.p is None):
            raise ConfigError("give exactly one of sigma or p")
        if self.p is not None and not 0.0 <= self.p < 0.5:
            raise ConfigError("p must lie in [0, 1/2)")
        if self.sigma is not None and self.sigma < 0:
            raise ConfigError("sigma must be non-negative")
        if not 0.0 <= self.q <= 0.5:
            raise ConfigError("q must lie in [0, 1/2]")
        sigma = self.sigma if self.sigma is not None else sigma_of_p(self.p)
        if self.code == "surface":
            if self.d < 3 or self.d % 2 == 0:
                raise ConfigError("surface-code distance must be odd and >= 3")
            if self.backend in ("coherent", "refresh") and self.d > COHERENT_MAX_D:
                raise ConfigError(f"coherent backends are capped at d = {COHERENT_MAX_D}")
            t = self.t if self.t is not None else self.d
        else:
            t = self.t if self.t is not None else 2
        if t < 1:
            raise ConfigError("need at least one cycle")
        if self.n_outer is None:
            n_outer = 100_000 if self.backend == "pauli" else 2000 * t
        else:
            n_outer = self.n_outer
        if n_outer < 1:
            raise ConfigError("need a positive sample count")
        n_readout = self.n_readout if (self.backend != "pauli" and self.q > 0) else 1
        if n_readout < 1:
            raise ConfigError("need a positive readout resample count")
        return replace(
            self, sigma=sigma, p=None, t=t, n_outer=n_outer, n_readout=n_readout
        )

    def build_code(self) -> StabilizerCode:
        if self.code == "repetition":
            return build_repetition_code()
        return build_surface_code(self.d)


@dataclass(frozen=True)
class PointResult:
    """Estimate for one grid point, plus bookkeeping for the sidecar."""

    d: int
    p: float
    q: float
    sigma: float
    backend: str
    t: int
    pl: float
    stderr: float
    n: int
    wall_time: float

    def csv_row(self) -> list[str]:
        return [
            str(self.d),
            repr(float(self.p)),
            repr(float(self.q)),
            repr(float(self.sigma)),
            self.backend,
            str(self.t),
            repr(float(self.pl)),
            repr(float(self.stderr)),
            str(self.n),
        ]


_PAULI_CHUNK = 2048


def _run_pauli_point(cfg: ExperimentConfig, grid_index: int) -> tuple[float, float, int]:
    code = cfg.build_code()
    p, q, t, n = NoiseParams(cfg.sigma, cfg.q).p, cfg.q, cfg.t, cfg.n_outer
    failures = 0
    start = 0
    while start < n:
        m = min(_PAULI_CHUNK, n - start)
        batch = pauli.sample_defect_batch(code, p, q, t, cfg.seed, grid_index, start, m)
        cls = decoder.decode_batch_class(
            code, batch.defect_f, batch.defect_r, batch.defect_off, p, q
        )
        failures += int(np.sum(cls ^ batch.error_class))
        start += m
    rate = failures / n
    stderr = math.sqrt(max(rate * (1.0 - rate), 1e-300) / n)
    return rate, stderr, n


def _coherent_shot_value(
    code: StabilizerCode,
    cfg: ExperimentConfig,
    grid_index: int,
    shot_index: int,
) -> float:
    """Mean logical infidelity of one angle shot over readout resamples."""
    rng = pauli.shot_rng(cfg.seed, grid_index, shot_index)
    params = NoiseParams(cfg.sigma, cfg.q)
    runner = refresh_angle_variant if cfg.backend == "refresh" else run_shot
    rec = runner(code, params, cfg.t, rng)
    t = cfg.t
    nc = code.n_checks
    true_bits = np.array([s.bits for s in rec.true_syndromes], np.int64)
    histories = [np.array([s.bits for s in rec.recorded], np.int64)]
    for _ in range(cfg.n_readout - 1):
        h = true_bits.copy()
        if t > 1 and cfg.q > 0:
            flips = rng.random((t - 1, nc)) < cfg.q
            for r in range(t - 1):
                mask = 0
                for f in range(nc):
                    if flips[r, f]:
                        mask |= 1 << f
                h[r] ^= mask
        histories.append(h)
    # defect extraction over all readout configurations
    all_f: list[np.ndarray] = []
    all_r: list[np.ndarray] = []
    off = np.zeros(len(histories) + 1, np.int64)
    for i, h in enumerate(histories):
        ev = h.copy()
        ev[1:] ^= h[:-1]
        bits = (ev[:, None] >> np.arange(nc)[None, :]) & 1
        r_idx, f_idx = np.nonzero(bits)
        all_r.append(r_idx)
        all_f.append(f_idx)
        off[i + 1] = off[i] + r_idx.size
    cls_corr = decoder.decode_batch_class(
        code,
        np.concatenate(all_f),
        np.concatenate(all_r),
        off,
        NoiseParams(cfg.sigma, 0.0).p,
        cfg.q,
    )
    na = abs(rec.alpha) ** 2
    nb = abs(rec.beta) ** 2
    cls_acc = code.class_bit(rec.e_acc)
    flipped = cls_corr ^ cls_acc
    vals = np.where(flipped == 1, na, nb) / (na + nb)
    return float(vals.mean())


def _run_coherent_point(cfg: ExperimentConfig, grid_index: int) -> tuple[float, float, int]:
    code = cfg.build_code()
    vals = np.empty(cfg.n_outer)
    for i in range(cfg.n_outer):
        vals[i] = _coherent_shot_value(code, cfg, grid_index, i)
    pl = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return pl, stderr, cfg.n_outer


def run_point(cfg: ExperimentConfig, grid_index: int = 0) -> PointResult:
    """Estimate the logical error rate for one resolved grid point."""
    cfg = cfg.resolved()
    start = time.perf_counter()
    if cfg.backend == "pauli":
        pl, stderr, n = _run_pauli_point(cfg, grid_index)
    else:
        pl, stderr, n = _run_coherent_point(cfg, grid_index)
    wall = time.perf_counter() - start
    return PointResult(
        d=cfg.d if cfg.code == "surface" else 2,
        p=NoiseParams(cfg.sigma, cfg.q).p,
        q=cfg.q,
        sigma=cfg.sigma,
        backend=cfg.backend,
        t=cfg.t,
        pl=pl,
        stderr=stderr,
        n=n,
        wall_time=wall,
    )


def _point_job(args: tuple[ExperimentConfig, int]) -> PointResult:
    cfg, idx = args
    return run_point(cfg, idx)


def run_sweep(
    configs: Sequence[ExperimentConfig],
    out_csv: Optional[Path] = None,
    out_json: Optional[Path] = None,
    workers: int = 1,
) -> list[PointResult]:
    """Run every grid point, in order, optionally in a process pool.

    Appends to the CSV if it exists (writing the header only once) and
    writes a JSON sidecar with the full configuration and version.
    """
    jobs = [(cfg.resolved(), i) for i, cfg in enumerate(configs)]
    t0 = time.perf_counter()
    if workers > 1:
        # spawn: forking is unsafe once the jit kernels' thread pool exists
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = list(pool.map(_point_job, jobs))
    else:
        results = [_point_job(j) for j in jobs]
    wall = time.perf_counter() - t0
    if out_csv is not None:
        write_csv(results, Path(out_csv))
    if out_json is not None:
        sidecar = {
            "version": __version__,
            "wall_time_s": wall,
            "points": [
                {**_cfg_dict(cfg), "grid_index": i, "pl": r.pl, "stderr": r.stderr,
                 "n": r.n, "wall_time_s": r.wall_time}
                for (cfg, i), r in zip(jobs, results)
            ],
        }
        Path(out_json).write_text(json.dumps(sidecar, indent=2, sort_keys=True))
    return results


def _cfg_dict(cfg: ExperimentConfig) -> dict:
    return {
        "code": cfg.code,
        "d": cfg.d,
        "backend": cfg.backend,
        "sigma": cfg.sigma,
        "q": cfg.q,
        "t": cfg.t,
        "n_outer": cfg.n_outer,
        "n_readout": cfg.n_readout,
        "seed": cfg.seed,
    }


def write_csv(results: Sequence[PointResult], path: Path) -> None:
    path = Path(path)
    new = not path.exists()
    with path.open("a", newline="") as fh:
        w = csv.writer(fh)
        if new:
            w.writerow(CSV_HEADER)
        for r in results:
            w.writerow(r.csv_row())


def read_csv(path: Path) -> list[PointResult]:
    rows = []
    with Path(path).open() as fh:
        for rec in csv.DictReader(fh):
            rows.append(
                PointResult(
                    d=int(rec["d"]),
                    p=float(rec["p"]),
                    q=float(rec["q"]),
                    sigma=float(rec["sigma"]),
                    backend=rec["backend"],
                    t=int(rec["t"]),
                    pl=float(rec["pl"]),
                    stderr=float(rec["stderr"]),
                    n=int(rec["n"]),
                    wall_time=0.0,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# threshold bracketing and break-even maps


@dataclass(frozen=True)
class ThresholdBracket:
    lower: Optional[float]
    upper: Optional[float]
    monotone: bool


def threshold_bracket(results: Sequence[PointResult]) -> ThresholdBracket:
    """Bracket the threshold from a (p, d) grid at fixed q policy.

    lower: greatest p at which the logical rate strictly decreases with
    distance beyond two combined standard errors; upper: smallest p at
    which it strictly increases.  A crossed or empty bracket is flagged.
    """
    by_p: dict[float, list[PointResult]] = {}
    for r in results:
        by_p.setdefault(r.p, []).append(r)
    lower = None
    upper = None
    for p in sorted(by_p):
        pts = sorted(by_p[p], key=lambda r: r.d)
        if len(pts) < 2:
            continue
        dec = inc = True
        for a, b in zip(pts, pts[1:]):
            margin = 2.0 * math.hypot(a.stderr, b.stderr)
            if not b.pl < a.pl - margin:
                dec = False
            if not b.pl > a.pl + margin:
                inc = False
        if dec:
            lower = p
        if inc and upper is None:
            upper = p
    monotone = lower is not None and upper is not None and lower < upper
    return ThresholdBracket(lower=lower, upper=upper, monotone=monotone)


@dataclass(frozen=True)
class BreakEvenCell:
    p: float
    q: float
    pl: float
    stderr: float
    green: bool  # logical beats physical: pl < p


def break_even_map_d3(
    p_values: Sequence[float],
    q_values: Sequence[float],
    backend: str = "coherent",
    n_outer: Optional[int] = None,
    n_readout: int = 20,
    seed: int = 0,
    workers: int = 1,
) -> list[BreakEvenCell]:
    """Classify the d = 3, t = 3 grid into pl < p (green) and pl >= p (red)."""
    configs = [
        ExperimentConfig(
            code="surface",
            d=3,
            t=3,
            backend=backend,
            sigma=sigma_of_p(p),
            q=q,
            n_outer=n_outer,
            n_readout=n_readout,
            seed=seed,
        )
        for p in p_values
        for q in q_values
    ]
    results = run_sweep(configs, workers=workers)
    return [
        BreakEvenCell(p=r.p, q=r.q, pl=r.pl, stderr=r.stderr, green=r.pl < r.p)
        for r in results
    ]
