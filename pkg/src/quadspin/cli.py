"""Configuration-driven command line front end.

Each verb loads a fixture, runs one named experiment and writes CSV data
plus a JSON manifest.  Parameters come from an optional plain-text config
file (key = value lines) with command line flags taking precedence.  A
manifest from a previous run can be passed as the config to reproduce it.

Exit codes: 0 on success, 1 for configuration problems, 2 for numeric
failures inside an experiment.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from importlib import metadata
from pathlib import Path

import numpy as np
import scipy

from . import afc, echo, levels, odnmr, pulses
from .drive import FourLevelDrive, eigenvalues as drive_eigenvalues
from .fixture import FixtureMissing, IonFixture, builtin_fixture, load_fixture
from .pulses import SechPulse
from .spin_algebra import SpinQuantum

OUTPUT_ROOT_ENV = "QUADSPIN_OUT"
SPIN = SpinQuantum(3)

EXPERIMENTS = ("levels", "eigenvalues", "odnmr", "pulse-map", "afc-map", "echo")


class ConfigParse(Exception):
    pass


class ExperimentFailed(Exception):
    pass


# -- config handling ---------------------------------------------------------

def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read a key = value config file, or the config block of a manifest."""
    path = Path(path)
    if not path.exists():
        raise ConfigParse(f"config file not found: {path}")
    text = path.read_text()
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigParse(f"manifest is not valid JSON: {exc}") from exc
        cfg = data.get("config")
        if not isinstance(cfg, dict):
            raise ConfigParse("manifest has no 'config' table")
        return {str(k): str(v) for k, v in cfg.items()}
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParse(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:step' (stop inclusive) or a comma list of values."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0:
                raise ValueError
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return start + step * np.arange(n)
        return np.array([float(p) for p in text.split(",")])
    except ValueError:
        raise ConfigParse(f"bad grid spec {text!r}") from None


def config_hash(cfg: dict[str, str]) -> str:
    canon = "\n".join(f"{k}={cfg[k]}" for k in sorted(cfg))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _f(cfg: dict[str, str], key: str, default: float) -> float:
    try:
        return float(cfg.get(key, default))
    except ValueError:
        raise ConfigParse(f"bad numeric value for {key}: {cfg[key]!r}") from None


def _i(cfg: dict[str, str], key: str, default: int) -> int:
    try:
        return int(cfg.get(key, default))
    except ValueError:
        raise ConfigParse(f"bad integer value for {key}: {cfg[key]!r}") from None


# -- output helpers ----------------------------------------------------------

def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join("%.12g" % float(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_manifest(path: Path, experiment: str, cfg: dict[str, str],
                   outputs: list[str], wall: float, extra: dict | None = None) -> None:
    try:
        version = metadata.version("quadspin")
    except metadata.PackageNotFoundError:
        version = "unknown"
    doc = {
        "experiment": experiment,
        "config": cfg,
        "config_hash": config_hash(cfg),
        "outputs": outputs,
        "versions": {"quadspin": version, "numpy": np.__version__,
                     "scipy": scipy.__version__},
        "wall_time_s": round(wall, 3),
    }
    if extra:
        doc.update(extra)
    _atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _resolve_fixture(cfg: dict[str, str]) -> IonFixture:
    name = cfg.get("fixture", "eu_yso")
    if name.endswith(".toml") or "/" in name:
        return load_fixture(name)
    return builtin_fixture(name)


def _output_dir(cfg: dict[str, str], experiment: str) -> Path:
    root = cfg.get("out") or os.environ.get(OUTPUT_ROOT_ENV) or "runs"
    d = Path(root) / experiment
    d.mkdir(parents=True, exist_ok=True)
    return d


def _doublet_params(fx: IonFixture, cfg: dict[str, str]):
    """Level structures and the (s, g, e) doublet choice for drive verbs."""
    direction = cfg.get("direction", "I")
    stg = levels.solve_levels(fx.ground, fx.field(direction, 1.0), SPIN)
    ste = levels.solve_levels(fx.excited, fx.field(direction, 1.0), SPIN)
    i_s = stg.doublet_index(_i(cfg, "s_doublet", 3))
    i_g = stg.doublet_index(_i(cfg, "g_doublet", 5))
    i_e = ste.doublet_index(_i(cfg, "e_doublet", 1))
    return stg, ste, i_s, i_g, i_e


def _build_drive(fx: IonFixture, cfg: dict[str, str]) -> FourLevelDrive:
    stg, _, i_s, i_g, _ = _doublet_params(fx, cfg)
    axis = np.array([0.0, 0.0, 1.0])
    c = levels.transition_coupling(stg, i_s, i_g, axis)
    B = _f(cfg, "B", 0.0)
    return FourLevelDrive(
        delta=_f(cfg, "delta", 0.0),
        delta_s=float(stg.g[i_s]) * B,
        delta_g=float(stg.g[i_g]) * B,
        omega0=_f(cfg, "omega0", 30.0),
        u1=c.u1,
        u2=c.u2,
    )


# -- experiments -------------------------------------------------------------

def run_levels(cfg: dict[str, str], outdir: Path) -> list[str]:
    fx = _resolve_fixture(cfg)
    direction = cfg.get("direction", "I")
    manifold = cfg.get("manifold", "ground")
    if manifold not in ("ground", "excited"):
        raise ConfigParse("manifold must be 'ground' or 'excited'")
    params = fx.ground if manifold == "ground" else fx.excited
    st = levels.solve_levels(params, fx.field(direction, 1.0), SPIN)
    rows = []
    for k in range(st.n):
        rows.append((st.labels[k], st.energies[k], st.g[k]))
    write_csv(outdir / "levels.csv",
              ["m_doublet_x2", "energy_mhz", "g_khz_per_mt"], rows)
    return ["levels.csv"]


def run_eigenvalues(cfg: dict[str, str], outdir: Path) -> list[str]:
    fx = _resolve_fixture(cfg)
    drive = _build_drive(fx, cfg)
    es = drive_eigenvalues(drive)
    rows = [(k, es.zeta_exact[k], es.zeta_approx[k]) for k in range(4)]
    write_csv(outdir / "eigenvalues.csv",
              ["index", "zeta_khz", "zeta_approx_khz"], rows)
    modes = odnmr.mode_frequencies(es.zeta_exact)
    write_csv(outdir / "modes.csv", ["mode_khz"], [(m,) for m in modes])
    return ["eigenvalues.csv", "modes.csv"]


def run_odnmr(cfg: dict[str, str], outdir: Path) -> list[str]:
    fx = _resolve_fixture(cfg)
    drive = _build_drive(fx, cfg)
    trace = odnmr.odnmr_trace(
        drive,
        None,
        duration=_f(cfg, "duration", 2000.0),
        dt=_f(cfg, "dt", 1.0),
        damping=_f(cfg, "damping", 0.0),
    )
    spec = odnmr.spectrum(trace)
    write_csv(outdir / "trace.csv", ["time_us", "intensity"],
              zip(trace.times, trace.intensity))
    write_csv(outdir / "spectrum.csv", ["freq_khz", "power"],
              zip(spec.freqs, spec.power))
    peaks = odnmr.peak_positions(spec, rel_threshold=_f(cfg, "rel_threshold", 0.05))
    write_csv(outdir / "peaks.csv", ["freq_khz", "power"], peaks)
    return ["trace.csv", "spectrum.csv", "peaks.csv"]


def run_pulse_map(cfg: dict[str, str], outdir: Path) -> list[str]:
    fx = _resolve_fixture(cfg)
    stg, _, i_s, i_g, _ = _doublet_params(fx, cfg)
    axis = np.array([0.0, 0.0, 1.0])
    c = levels.transition_coupling(stg, i_s, i_g, axis)
    pulse = SechPulse(fwhm=_f(cfg, "fwhm", 120.0), chirp=0.0,
                      peak_rabi=_f(cfg, "omega0", 30.0))
    B_grid = parse_grid(cfg.get("b_grid", "0:12:2"))
    chirp_grid = parse_grid(cfg.get("chirp_grid", "0:60:20"))
    grid = pulses.transfer_map(float(stg.g[i_s]), float(stg.g[i_g]),
                               c.u1, c.u2, pulse, B_grid, chirp_grid)
    if np.isnan(grid).all():
        raise ExperimentFailed("no transfer-map cell converged")
    rows = []
    for i, chirp in enumerate(chirp_grid):
        for j, B in enumerate(B_grid):
            rows.append((B, chirp, grid[i, j]))
    write_csv(outdir / "transfer_map.csv",
              ["b_mt", "chirp_khz", "g_population"], rows)
    return ["transfer_map.csv"]


def run_afc_map(cfg: dict[str, str], outdir: Path) -> list[str]:
    fx = _resolve_fixture(cfg)
    direction = cfg.get("direction", "I")
    stg, ste, _, i_g, i_e = _doublet_params(fx, cfg)
    B_grid = parse_grid(cfg.get("b_grid", "0.25:10:0.25"))
    dafc_grid = parse_grid(cfg.get("dafc_grid", "40"))
    grid = afc.efficiency_ratio_map(
        float(stg.g[i_g]), float(ste.g[i_e]), B_grid, dafc_grid,
        finesse=_f(cfg, "finesse", 2.0),
        cycles=_i(cfg, "cycles", 400),
    )
    if np.isnan(grid).all():
        raise ExperimentFailed("no afc-map cell converged")
    rows = []
    for i, dafc in enumerate(dafc_grid):
        for j, B in enumerate(B_grid):
            rows.append((B, dafc, grid[i, j]))
    write_csv(outdir / "afc_map.csv", ["b_mt", "delta_afc_khz", "ratio"], rows)
    return ["afc_map.csv"]


ECHO_VARIANTS = {"centered": echo.CENTERED, "shifted": echo.SHIFTED}


def run_echo(cfg: dict[str, str], outdir: Path) -> list[str]:
    fx = _resolve_fixture(cfg)
    variant = cfg.get("variant", "centered")
    if variant not in ECHO_VARIANTS:
        raise ConfigParse(f"variant must be one of {sorted(ECHO_VARIANTS)}")
    stg, ste, i_s, i_g, i_e = _doublet_params(fx, cfg)
    axis = np.array([0.0, 0.0, 1.0])
    c = levels.transition_coupling(stg, i_s, i_g, axis)
    B = _f(cfg, "B", 1.4)
    omega0 = _f(cfg, "omega0", 30.0)
    rf = FourLevelDrive(delta=0.0, delta_s=float(stg.g[i_s]) * B,
                        delta_g=float(stg.g[i_g]) * B, omega0=omega0,
                        u1=c.u1, u2=c.u2)
    model = echo.EchoModel(
        delta_s=float(stg.g[i_s]) * B,
        delta_g=float(stg.g[i_g]) * B,
        delta_e=float(ste.g[i_e]) * B,
        rf=rf,
        v_ge=levels.optical_coupling(stg, ste, i_g, i_e).U,
        v_se=levels.optical_coupling(stg, ste, i_s, i_e).U,
    )
    tau0 = _f(cfg, "tau0", 1000.0 / (2.0 * omega0))
    Ts_grid = parse_grid(cfg.get("ts_grid", "100:16100:4"))
    trace = echo.efficiency_sweep(model, Ts_grid, tau0,
                                  fractions=ECHO_VARIANTS[variant])
    spec = echo.beat_spectrum(trace)
    write_csv(outdir / "efficiency.csv", ["storage_us", "efficiency"],
              zip(trace.times, trace.intensity))
    write_csv(outdir / "spectrum.csv", ["freq_khz", "power"],
              zip(spec.freqs, spec.power))
    freqs, weights = echo.predicted_beats(model, tau0,
                                          fractions=ECHO_VARIANTS[variant],
                                          return_weights=True)
    write_csv(outdir / "predicted_beats.csv", ["freq_khz", "weight"],
              zip(freqs, weights))
    return ["efficiency.csv", "spectrum.csv", "predicted_beats.csv"]


RUNNERS = {
    "levels": run_levels,
    "eigenvalues": run_eigenvalues,
    "odnmr": run_odnmr,
    "pulse-map": run_pulse_map,
    "afc-map": run_afc_map,
    "echo": run_echo,
}


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadspin",
        description="Spin and optical manipulation experiments for "
                    "quadrupole-split rare-earth ion doublets.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="key = value config file or a "
                       "manifest JSON from a previous run")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VAL",
                       help="override a single config key")
        p.add_argument("--fixture", help="builtin fixture name or TOML path")
        p.add_argument("--direction", help="static field direction label")
        p.add_argument("--B", help="static field magnitude in mT")
        p.add_argument("--omega0", help="bare Rabi frequency in kHz")
        p.add_argument("--out", help="output root directory "
                       f"(default ${OUTPUT_ROOT_ENV} or ./runs)")
        if name == "echo":
            p.add_argument("--variant", choices=sorted(ECHO_VARIANTS),
                           help="rf pulse placement in the storage interval")
    return parser


def resolve_config(args: argparse.Namespace) -> dict[str, str]:
    cfg: dict[str, str] = {}
    if args.config:
        cfg.update(parse_config_file(args.config))
    for item in args.set:
        if "=" not in item:
            raise ConfigParse(f"--set expects KEY=VAL, got {item!r}")
        key, value = item.split("=", 1)
        cfg[key.strip()] = value.strip()
    for key in ("fixture", "direction", "B", "omega0", "out", "variant"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        outdir = _output_dir(cfg, args.experiment)
        runner = RUNNERS[args.experiment]
    except (ConfigParse, FixtureMissing) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    start = time.perf_counter()
    try:
        outputs = runner(cfg, outdir)
    except (ConfigParse, FixtureMissing, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ExperimentFailed, afc.NonConvergence,
            pulses.StepControlFailure) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - start
    write_manifest(outdir / "manifest.json", args.experiment, cfg,
                   outputs, wall)
    for name in outputs:
        print(outdir / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
