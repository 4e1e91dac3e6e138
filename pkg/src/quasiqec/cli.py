"""Command-line front end for sweeps, threshold scans, and analytic tables.

Every subcommand writes a CSV (header: d,p,q,sigma,backend,t,pl,stderr,n
for simulation sweeps; documented per-command otherwise) plus a JSON
sidecar next to it.  A key = value config file can override any flag.
Exit codes: 0 on success, 2 on configuration errors.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import click

from . import __version__, analytics
from .codes import ZString, build_repetition_code
from .coherent import cycle_resolved_weight, sigma_of_p
from .harness import (
    ConfigError,
    ExperimentConfig,
    break_even_map_d3,
    run_sweep,
    threshold_bracket,
)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x != ""]
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x != ""]
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


def _load_config(path: str | None) -> dict[str, str]:
    """Parse a key = value file; keys match option names (dashes or not)."""
    if not path:
        return {}
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line {line!r}")
        key, val = line.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def _merge(opts: dict, config_path: str | None) -> dict:
    """Config-file values take precedence over command-line flags."""
    merged = dict(opts)
    for key, val in _load_config(config_path).items():
        if key not in merged:
            raise ConfigError(f"unknown config key {key!r}")
        merged[key] = val
    return merged


def _sidecar(out: Path) -> Path:
    return out.with_suffix(".json")


def _echo_results(results) -> None:
    for r in results:
        click.echo(
            f"d={r.d} t={r.t} backend={r.backend} p={r.p:.6g} q={r.q:.6g} "
            f"pl={r.pl:.6g} +- {r.stderr:.2g} (n={r.n}, {r.wall_time:.1f}s)"
        )


def _grid(opts) -> list[ExperimentConfig]:
    ds = _ints(opts["d"])
    qs = _floats(opts["q"]) if opts["q"] not in (None, "p") else [None]
    if opts["sigma"] is not None and opts["p"] is not None:
        raise ConfigError("give exactly one of --sigma and --p")
    if opts["sigma"] is not None:
        noise = [("sigma", v) for v in _floats(opts["sigma"])]
    elif opts["p"] is not None:
        noise = [("p", v) for v in _floats(opts["p"])]
    else:
        raise ConfigError("give exactly one of --sigma and --p")
    cycles = int(opts["cycles"]) if opts["cycles"] is not None else None
    samples = int(opts["samples"]) if opts["samples"] is not None else None
    configs = []
    for d in ds:
        for kind, val in noise:
            for q in qs:
                p_equiv = val if kind == "p" else None
                sigma = val if kind == "sigma" else sigma_of_p(val)
                q_eff = q if q is not None else (p_equiv if p_equiv is not None else
                                                 analytics.p_of_sigma(sigma))
                configs.append(
                    ExperimentConfig(
                        code=opts["code"],
                        d=d,
                        backend=opts["backend"],
                        sigma=sigma,
                        q=q_eff,
                        t=cycles,
                        n_outer=samples,
                        n_readout=int(opts["readout_samples"]),
                        seed=int(opts["seed"]),
                    )
                )
    return configs


def _common(fn):
    fn = click.option("--config", default=None, help="key = value file overriding flags")(fn)
    fn = click.option("--workers", default=1, show_default=True)(fn)
    fn = click.option("--seed", default=0, show_default=True)(fn)
    fn = click.option("--out", required=True, type=click.Path(dir_okay=False))(fn)
    return fn


class _Group(click.Group):
    """Group that maps configuration errors to exit code 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            ctx.exit(2)


@click.group(cls=_Group)
@click.version_option(version=__version__)
def main() -> None:
    """Stabilizer codes under quasistatic phase damping."""


def _run_and_write(opts, configs) -> list:
    out = Path(opts["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    results = run_sweep(
        configs, out_csv=out, out_json=_sidecar(out), workers=int(opts["workers"])
    )
    _echo_results(results)
    return results


@main.command()
@_common
@click.option("--code", default="surface", show_default=True,
              type=click.Choice(["surface", "repetition"]))
@click.option("--d", default="3", show_default=True, help="comma list of distances")
@click.option("--cycles", default=None, help="cycle count t (default: d)")
@click.option("--sigma", default=None, help="comma list of angle spreads")
@click.option("--p", default=None, help="comma list of physical error rates")
@click.option("--q", default="0", help="comma list of readout rates, or 'p'")
@click.option("--backend", default="pauli", show_default=True,
              type=click.Choice(["coherent", "pauli", "refresh"]))
@click.option("--samples", default=None, help="outer sample count per point")
@click.option("--readout-samples", default=20, show_default=True)
def sweep(**opts):
    """Run a grid of logical-error-rate estimates."""
    opts = _merge(opts, opts.pop("config"))
    _run_and_write(opts, _grid(opts))


@main.command()
@_common
@click.option("--d", default="7,9,11,13", show_default=True)
@click.option("--cycles", default=None)
@click.option("--sigma", default=None)
@click.option("--p", default="0.026,0.0285,0.031", show_default=True)
@click.option("--q", default="p", show_default=True, help="readout rate, or 'p' for q = p")
@click.option("--backend", default="pauli", show_default=True,
              type=click.Choice(["coherent", "pauli", "refresh"]))
@click.option("--samples", default=None)
@click.option("--readout-samples", default=20, show_default=True)
@click.option("--code", default="surface", hidden=True)
def threshold(**opts):
    """Distance scan around the threshold, with a bracket estimate."""
    opts = _merge(opts, opts.pop("config"))
    results = _run_and_write(opts, _grid(opts))
    br = threshold_bracket(results)
    click.echo(f"threshold bracket: lower={br.lower} upper={br.upper} "
               f"monotone={br.monotone}")
    side = _sidecar(Path(opts["out"]))
    doc = json.loads(side.read_text())
    doc["threshold_bracket"] = {"lower": br.lower, "upper": br.upper,
                                "monotone": br.monotone}
    side.write_text(json.dumps(doc, indent=2, sort_keys=True))


@main.command("pq-plane")
@_common
@click.option("--d", default="7,9,11", show_default=True)
@click.option("--cycles", default=None)
@click.option("--p", default="0.01,0.02,0.03,0.04,0.05", show_default=True)
@click.option("--q", default="0.01,0.03,0.05", show_default=True)
@click.option("--backend", default="pauli", show_default=True,
              type=click.Choice(["coherent", "pauli", "refresh"]))
@click.option("--samples", default=None)
@click.option("--readout-samples", default=20, show_default=True)
@click.option("--code", default="surface", hidden=True)
@click.option("--sigma", default=None, hidden=True)
def pq_plane(**opts):
    """Threshold brackets on the (p, q) plane, one bracket per q."""
    opts = _merge(opts, opts.pop("config"))
    results = _run_and_write(opts, _grid(opts))
    side = _sidecar(Path(opts["out"]))
    doc = json.loads(side.read_text())
    brackets = {}
    for q in sorted({r.q for r in results}):
        br = threshold_bracket([r for r in results if r.q == q])
        brackets[repr(q)] = {"lower": br.lower, "upper": br.upper,
                             "monotone": br.monotone}
        click.echo(f"q={q:.6g}: bracket [{br.lower}, {br.upper}] monotone={br.monotone}")
    doc["brackets_by_q"] = brackets
    side.write_text(json.dumps(doc, indent=2, sort_keys=True))


@main.command("break-even")
@_common
@click.option("--p", default="0.003,0.005,0.008,0.012,0.02", show_default=True)
@click.option("--q", default="0.002,0.005,0.01,0.02,0.04", show_default=True)
@click.option("--backend", default="coherent", show_default=True,
              type=click.Choice(["coherent", "pauli", "refresh"]))
@click.option("--samples", default=None)
@click.option("--readout-samples", default=20, show_default=True)
@click.option("--t2star", default=10.0, show_default=True, help="T2* (us)")
@click.option("--tau", default=0.21, show_default=True, help="readout time constant (us)")
@click.option("--tmeas", default="0.5,0.55,0.6,0.65,0.7", show_default=True,
              help="measurement integration times (us)")
def break_even(**opts):
    """d = 3 break-even map with the spin-qubit hardware curve overlaid."""
    opts = _merge(opts, opts.pop("config"))
    out = Path(opts["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    samples = int(opts["samples"]) if opts["samples"] is not None else None
    cells = break_even_map_d3(
        _floats(opts["p"]),
        _floats(opts["q"]),
        backend=opts["backend"],
        n_outer=samples,
        n_readout=int(opts["readout_samples"]),
        seed=int(opts["seed"]),
        workers=int(opts["workers"]),
    )
    curve = analytics.hardware_curve(
        _floats(opts["tmeas"]), t2_star=float(opts["t2star"]), tau=float(opts["tau"])
    )
    curve_cells = _curve_cells(curve, opts, samples)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "p", "q", "pl", "stderr", "green", "t_meas"])
        for c in cells:
            w.writerow(["grid", repr(c.p), repr(c.q), repr(c.pl), repr(c.stderr),
                        int(c.green), ""])
        for pt, c in zip(curve, curve_cells):
            w.writerow(["hardware", repr(c.p), repr(c.q), repr(c.pl), repr(c.stderr),
                        int(c.green), repr(pt.t_meas)])
    doc = {
        "version": __version__,
        "grid_green": [[c.p, c.q, c.green] for c in cells],
        "hardware_curve": [
            {"t_meas": pt.t_meas, "p": c.p, "q": c.q, "pl": c.pl, "green": c.green}
            for pt, c in zip(curve, curve_cells)
        ],
        "all_hardware_green": all(c.green for c in curve_cells),
    }
    _sidecar(out).write_text(json.dumps(doc, indent=2, sort_keys=True))
    click.echo(f"hardware curve all green: {doc['all_hardware_green']}")


def _curve_cells(curve, opts, samples):
    from .harness import BreakEvenCell, run_sweep as _rs

    configs = [
        ExperimentConfig(
            code="surface", d=3, t=3, backend=opts["backend"],
            sigma=pt.sigma, q=pt.q, n_outer=samples,
            n_readout=int(opts["readout_samples"]), seed=int(opts["seed"]),
        )
        for pt in curve
    ]
    results = _rs(configs, workers=int(opts["workers"]))
    return [
        BreakEvenCell(p=r.p, q=r.q, pl=r.pl, stderr=r.stderr, green=r.pl < r.p)
        for r in results
    ]


@main.command("tvd-curve")
@click.option("--sigma", default="0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5",
              show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--config", default=None)
def tvd_curve(**opts):
    """Best-Pauli distance of the two-cycle coherent channel vs sigma.

    CSV header: sigma,p_best,delta_min,delta_at_p_equiv.
    """
    opts = _merge(opts, opts.pop("config"))
    out = Path(opts["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    for sig in _floats(opts["sigma"]):
        p_best, delta_min = analytics.best_pauli(sig)
        rows.append((sig, p_best, delta_min, analytics.tvd(analytics.p_of_sigma(sig), sig)))
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sigma", "p_best", "delta_min", "delta_at_p_equiv"])
        for row in rows:
            w.writerow([repr(float(x)) for x in row])
    _sidecar(out).write_text(json.dumps(
        {"version": __version__, "rows": [list(r) for r in rows]}, indent=2))
    click.echo(f"wrote {len(rows)} points to {out}")


_SCENARIO_NAMES = {0b00: "I", 0b01: "ZA", 0b10: "ZB", 0b11: "ZAZB"}


@main.command("repcode-table")
@click.option("--p", default=0.05, show_default=True, type=float)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--config", default=None)
def repcode_table(**opts):
    """Two-cycle repetition-code scenario table at a given p.

    CSV header: row,e1,e2,merged,pauli_prob,coherent_weight.
    """
    opts = _merge(opts, opts.pop("config"))
    p = float(opts["p"])
    if not 0.0 <= p < 0.5:
        raise ConfigError("p must lie in [0, 1/2)")
    out = Path(opts["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    code = build_repetition_code()
    sigma = sigma_of_p(p)
    pauli_probs = analytics.two_cycle_pauli_probabilities(p)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "e1", "e2", "merged", "pauli_prob", "coherent_weight"])
        for i, (e1, e2) in enumerate(analytics.TWO_CYCLE_SCENARIOS, start=1):
            weight = cycle_resolved_weight(
                code, (ZString(2, e1), ZString(2, e2)), sigma
            )
            w.writerow([
                i, _SCENARIO_NAMES[e1], _SCENARIO_NAMES[e2],
                _SCENARIO_NAMES[e1 ^ e2], repr(float(pauli_probs[i - 1])),
                repr(float(weight)),
            ])
    click.echo(f"wrote 16 scenarios at p={p} to {out}")


def cli_entry() -> None:  # pragma: no cover - thin wrapper
    main()


if __name__ == "__main__":  # pragma: no cover
    cli_entry()
