"""Scenario presets, runs, CSV emission and reproducible run manifests.

A scenario is a JSON-compatible document naming the system, the optional
superposition, a partition scheme, the time grid and the solver method.
Runs write CSV files (17 significant digits, LF line endings, so reruns of
an identical configuration are byte-identical) plus a manifest with content
hashes.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .concurrence import ConcurrenceSeries, concurrence_series
from .model import (BathGrid, PartitionSpec, SuperpositionInit, SystemConfig,
                    banded_blocks, build_bath_grid, centered_bipartition,
                    interleaved_bipartition, normalize_superposition)
from .observables import excitation_profile
from .propagation import (AmplitudeTrajectory, build_generator, evolve_exact,
                          evolve_rk4, norm_residual)
from .wootters import crosscheck

__all__ = [
    "TOOL_VERSION",
    "ORACLE_RESIDUAL_LIMIT",
    "Scenario",
    "RunManifest",
    "preset",
    "preset_names",
    "preset_document",
    "scenario_from_dict",
    "scenario_to_dict",
    "run_scenario",
    "run_sweep",
    "write_csv",
]

TOOL_VERSION = "0.1.0"

# every emitted concurrence row must agree with the spin-flip pipeline to
# this bound, otherwise the run is marked failed
ORACLE_RESIDUAL_LIMIT = 1e-10

_SCHEMES = ("none", "centered", "banded", "interleaved", "explicit")
_EMITS = ("excitation", "blocks", "bipartition", "concurrence")
_METHODS = ("exact", "rk4", "both")


@dataclass(frozen=True)
class Scenario:
    """Fully resolved run description."""

    name: str
    system: SystemConfig
    superposition: SuperpositionInit | None
    partition_scheme: str
    partition_params: dict
    t_end: float
    dt: float
    samples: int
    method: str
    emit: str
    out_dir: str | None = None
    svg: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValueError("scenario needs a name")
        if self.partition_scheme not in _SCHEMES:
            raise ValueError(f"unknown partition scheme {self.partition_scheme!r}")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.emit not in _EMITS:
            raise ValueError(f"emit must be one of {_EMITS}")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.emit in ("bipartition", "concurrence") and self.partition_scheme == "none":
            raise ValueError(f"emit {self.emit!r} needs a partition scheme")
        if self.emit == "blocks" and self.partition_scheme == "none":
            raise ValueError("emit 'blocks' needs a partition scheme")
        if self.emit == "concurrence" and self.superposition is None:
            raise ValueError("emit 'concurrence' needs superposition parameters")

    def partition_spec(self, grid: BathGrid) -> PartitionSpec | None:
        params = self.partition_params
        if self.partition_scheme == "none":
            return None
        if self.partition_scheme == "centered":
            return centered_bipartition(grid, int(params["size_b"]))
        if self.partition_scheme == "banded":
            return banded_blocks(grid, int(params["n_blocks"]))
        if self.partition_scheme == "interleaved":
            return interleaved_bipartition(grid)
        spec = PartitionSpec(tuple(tuple(b) for b in params["blocks"]),
                             tuple(params["labels"]))
        spec.validate_range(grid.n)
        return spec

    def exact_times(self) -> np.ndarray:
        if self.t_end == 0 or self.samples == 1:
            return np.array([0.0])
        return np.linspace(0.0, self.t_end, self.samples)

    def rk4_sample_every(self) -> int:
        n_steps = max(1, int(math.ceil(self.t_end / self.dt - 1e-9)))
        if self.samples <= 1:
            return n_steps
        return max(1, int(round(n_steps / (self.samples - 1))))


def _as_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, complex):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    raise ValueError(f"cannot interpret {value!r} as a complex number")


def _complex_out(z: complex):
    return z.real if z.imag == 0 else [z.real, z.imag]


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a Scenario from a JSON-compatible configuration document."""
    if "scenario" in doc:  # accept a previously written manifest
        doc = doc["scenario"]
    try:
        sysd = doc["system"]
        system = SystemConfig(
            n_bath=int(sysd["n_bath"]),
            coupling_amplitude=float(sysd.get("coupling_amplitude", 0.1)),
            band=tuple(float(v) for v in sysd.get("band", (0.5, 1.5))),
            omega0=float(sysd.get("omega0", 1.0)),
            couplings=tuple(sysd["couplings"]) if "couplings" in sysd else None,
            force_resonant=bool(sysd.get("force_resonant", False)),
        )
    except KeyError as exc:
        raise ValueError(f"configuration is missing required key {exc}") from exc

    init = None
    if doc.get("superposition") is not None:
        sup = doc["superposition"]
        init = normalize_superposition(
            _as_complex(sup.get("a", 1.0)), _as_complex(sup.get("b", -1.0)),
            _as_complex(sup.get("alpha0", 3.0)), _as_complex(sup.get("beta0", -3.0)))

    part = doc.get("partition") or {"scheme": "none"}
    scheme = part.get("scheme", "none")
    params = {k: v for k, v in part.items() if k != "scheme"}

    timed = doc.get("time", {})
    t_end = float(timed.get("t_end", 100.0))
    dt = float(timed.get("dt", 0.01))
    samples = int(timed.get("samples", 2000))

    emit = doc.get("emit")
    if emit is None:
        if scheme == "none":
            emit = "excitation"
        elif scheme == "banded":
            emit = "blocks"
        else:
            emit = "concurrence" if init is not None else "bipartition"

    return Scenario(
        name=str(doc.get("name", "run")),
        system=system,
        superposition=init,
        partition_scheme=scheme,
        partition_params=params,
        t_end=t_end,
        dt=dt,
        samples=samples,
        method=str(doc.get("method", "exact")),
        emit=str(emit),
        out_dir=doc.get("out_dir"),
        svg=bool(doc.get("svg", False)),
    )


def scenario_to_dict(s: Scenario) -> dict:
    doc = {
        "name": s.name,
        "system": {
            "n_bath": s.system.n_bath,
            "coupling_amplitude": s.system.coupling_amplitude,
            "band": list(s.system.band),
            "omega0": s.system.omega0,
            "force_resonant": s.system.force_resonant,
        },
        "partition": {"scheme": s.partition_scheme, **s.partition_params},
        "time": {"t_end": s.t_end, "dt": s.dt, "samples": s.samples},
        "method": s.method,
        "emit": s.emit,
        "svg": s.svg,
    }
    if s.system.couplings is not None:
        doc["system"]["couplings"] = list(s.system.couplings)
    if s.superposition is not None:
        sup = s.superposition
        doc["superposition"] = {
            "a": _complex_out(sup.a), "b": _complex_out(sup.b),
            "alpha0": _complex_out(sup.alpha0), "beta0": _complex_out(sup.beta0),
        }
    if s.out_dir is not None:
        doc["out_dir"] = s.out_dir
    return doc


_REFERENCE_SYSTEM = {"n_bath": 1000, "coupling_amplitude": 0.1, "band": [0.5, 1.5]}
_CAT_INIT = {"a": 1, "b": -1, "alpha0": 3, "beta0": -3}

_PRESETS: dict[str, dict] = {
    "fig3": {
        "name": "fig3", "system": _REFERENCE_SYSTEM,
        "partition": {"scheme": "none"}, "emit": "excitation",
    },
    "fig5": {
        "name": "fig5", "system": _REFERENCE_SYSTEM,
        "partition": {"scheme": "banded", "n_blocks": 10}, "emit": "blocks",
    },
    "fig7": {
        "name": "fig7", "system": _REFERENCE_SYSTEM, "superposition": _CAT_INIT,
        "partition": {"scheme": "centered", "size_b": 100}, "emit": "bipartition",
    },
    "fig8": {
        "name": "fig8", "system": _REFERENCE_SYSTEM, "superposition": _CAT_INIT,
        "partition": {"scheme": "centered", "size_b": 500}, "emit": "bipartition",
    },
    "fig9": {
        "name": "fig9", "system": _REFERENCE_SYSTEM, "superposition": _CAT_INIT,
        "partition": {"scheme": "centered", "size_b": 900}, "emit": "bipartition",
    },
    "fig10a": {
        "name": "fig10a", "system": _REFERENCE_SYSTEM, "superposition": _CAT_INIT,
        "partition": {"scheme": "centered", "size_b": 100}, "emit": "concurrence",
    },
    "fig10b": {
        "name": "fig10b", "system": _REFERENCE_SYSTEM, "superposition": _CAT_INIT,
        "partition": {"scheme": "centered", "size_b": 500}, "emit": "concurrence",
    },
    "fig10c": {
        "name": "fig10c", "system": _REFERENCE_SYSTEM, "superposition": _CAT_INIT,
        "partition": {"scheme": "centered", "size_b": 900}, "emit": "concurrence",
    },
}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset_document(name: str) -> dict:
    """The raw JSON-compatible document behind a preset."""
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(_PRESETS)}")
    return json.loads(json.dumps(_PRESETS[name]))


def preset(name: str) -> Scenario:
    return scenario_from_dict(preset_document(name))


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    """17-significant-digit CSV with LF endings for byte reproducibility."""
    rows = zip(*columns)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class RunManifest:
    """Echo of a run: resolved scenario, hashes of every output, status."""

    scenario: dict
    config_hash: str
    tool_version: str
    duration_s: float
    outputs: list[dict]
    status: str
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "config_hash": self.config_hash,
            "tool_version": self.tool_version,
            "duration_s": self.duration_s,
            "outputs": self.outputs,
            "status": self.status,
            "checks": self.checks,
        }

    def save(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _config_hash(doc: dict) -> str:
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _oracle_residuals(init: SuperpositionInit, series: ConcurrenceSeries) -> np.ndarray:
    # trajectory roundoff can push shares past 1 by up to the norm drift;
    # clip before feeding the scalar pipeline
    xi = np.clip(series.xi, 0.0, 1.0)
    tb = np.clip(series.theta_b, 0.0, 1.0)
    tc = np.clip(series.theta_c, 0.0, 1.0)
    return np.array([crosscheck(init, float(xi[i]), float(tb[i]), float(tc[i]))
                     for i in range(len(series.times))])


def _emit_table(s: Scenario, traj: AmplitudeTrajectory,
                partition: PartitionSpec | None):
    """Column headers, column arrays and the max oracle residual (or None)."""
    if s.emit == "excitation":
        profile = excitation_profile(traj)
        return ["t", "xi", "theta"], [traj.times, profile.xi, profile.theta], None
    if s.emit == "blocks":
        profile = excitation_profile(traj, partition)
        header = ["t"] + [f"theta_{lbl.lower()}" for lbl in partition.labels]
        return header, [traj.times, *profile.theta_blocks], None
    if s.emit == "bipartition":
        profile = excitation_profile(traj, partition)
        header = ["t", "xi"] + [f"theta_{lbl.lower()}" for lbl in partition.labels]
        return header, [traj.times, profile.xi, *profile.theta_blocks], None
    series = concurrence_series(traj, s.superposition, partition)
    residual = _oracle_residuals(s.superposition, series)
    header = ["t", "xi", "theta_b", "theta_c", "d_b", "d_c",
              "concurrence", "oracle_residual"]
    columns = [series.times, series.xi, series.theta_b, series.theta_c,
               series.d_b, series.d_c, series.c_closed, residual]
    return header, columns, float(residual.max())


def _propagate(s: Scenario, gen: np.ndarray, method: str) -> AmplitudeTrajectory:
    if method == "exact":
        return evolve_exact(gen, s.exact_times())
    return evolve_rk4(gen, s.t_end, s.dt, s.rk4_sample_every())


def run_scenario(s: Scenario, out_dir=None) -> RunManifest:
    """Propagate, emit CSV (and optional SVG), write the manifest.

    The run is marked failed when any concurrence row disagrees with the
    spin-flip oracle beyond ORACLE_RESIDUAL_LIMIT.
    """
    start = time.perf_counter()
    out = Path(out_dir if out_dir is not None else (s.out_dir or "."))
    out.mkdir(parents=True, exist_ok=True)
    grid = build_bath_grid(s.system)
    gen = build_generator(grid)
    partition = s.partition_spec(grid)

    methods = ("exact", "rk4") if s.method == "both" else (s.method,)
    status = "ok"
    checks: dict = {}
    outputs: list[dict] = []
    trajectories: dict[str, AmplitudeTrajectory] = {}
    for method in methods:
        traj = _propagate(s, gen, method)
        trajectories[method] = traj
        checks[f"norm_residual_{method}"] = norm_residual(traj)
        header, columns, max_resid = _emit_table(s, traj, partition)
        suffix = "" if len(methods) == 1 else f"_{method}"
        csv_path = out / f"{s.name}{suffix}.csv"
        write_csv(csv_path, header, columns)
        outputs.append({"path": csv_path.name, "sha256": _sha256(csv_path)})
        if s.svg:
            from .svgplot import write_line_svg
            svg_path = out / f"{s.name}{suffix}.svg"
            series = {name: col for name, col in zip(header[1:], columns[1:])}
            write_line_svg(svg_path, columns[0], series, title=s.name)
            outputs.append({"path": svg_path.name, "sha256": _sha256(svg_path)})
        if max_resid is not None:
            checks[f"max_oracle_residual_{method}"] = max_resid
            if max_resid > ORACLE_RESIDUAL_LIMIT:
                status = "failed"

    if s.method == "both":
        reference = evolve_exact(gen, trajectories["rk4"].times)
        deviation = np.abs(reference.states - trajectories["rk4"].states).max()
        checks["max_method_deviation"] = float(deviation)

    doc = scenario_to_dict(s)
    manifest = RunManifest(
        scenario=doc,
        config_hash=_config_hash(doc),
        tool_version=TOOL_VERSION,
        duration_s=time.perf_counter() - start,
        outputs=outputs,
        status=status,
        checks=checks,
    )
    manifest.save(out / f"{s.name}_manifest.json")
    return manifest


def run_sweep(doc: dict, out_dir=None) -> RunManifest:
    """Grid over centered-partition size and initial overlap magnitude.

    Propagates the base system once, then writes one concurrence CSV per
    (size_b, o0) point plus an index CSV summarizing the grid.  Overlaps are
    realized by symmetric real amplitudes +-d/2 with d = sqrt(-2 ln o0).
    """
    start = time.perf_counter()
    if "preset" in doc:
        base = preset(doc["preset"])
    else:
        base = scenario_from_dict(doc.get("base", doc))
    name = str(doc.get("name", f"{base.name}_sweep"))
    sizes = [int(v) for v in doc.get("sizes_b", [100, 500, 900])]
    overlaps = [float(v) for v in doc.get("overlaps", [math.exp(-18.0)])]
    for o0 in overlaps:
        if not 0.0 < o0 < 1.0:
            raise ValueError(f"overlaps must lie strictly inside (0, 1), got {o0}")
    sup = base.superposition
    weight_a, weight_b = (sup.a, sup.b) if sup is not None else (1.0, -1.0)

    out = Path(out_dir if out_dir is not None else (base.out_dir or "."))
    out.mkdir(parents=True, exist_ok=True)
    grid = build_bath_grid(base.system)
    gen = build_generator(grid)
    traj = _propagate(base, gen, "exact")

    status = "ok"
    outputs: list[dict] = []
    index_rows: list[list[float]] = []
    index_files: list[str] = []
    worst = 0.0
    for size_b in sizes:
        partition = centered_bipartition(grid, size_b)
        for j, o0 in enumerate(overlaps):
            half = math.sqrt(-2.0 * math.log(o0)) / 2.0
            init = normalize_superposition(weight_a, weight_b, half, -half)
            series = concurrence_series(traj, init, partition)
            residual = _oracle_residuals(init, series)
            worst = max(worst, float(residual.max()))
            fname = f"{name}_b{size_b}_o{j}.csv"
            write_csv(out / fname,
                      ["t", "xi", "theta_b", "theta_c", "d_b", "d_c",
                       "concurrence", "oracle_residual"],
                      [series.times, series.xi, series.theta_b, series.theta_c,
                       series.d_b, series.d_c, series.c_closed, residual])
            outputs.append({"path": fname, "sha256": _sha256(out / fname)})
            index_files.append(fname)
            index_rows.append([size_b, o0, series.c_closed[-1],
                               series.theta_b[-1], series.theta_c[-1],
                               float(residual.max())])
    if worst > ORACLE_RESIDUAL_LIMIT:
        status = "failed"

    index_path = out / f"{name}_index.csv"
    with open(index_path, "w", newline="\n") as fh:
        fh.write("size_b,o0,file,c_end,theta_b_end,theta_c_end,max_oracle_residual\n")
        for row, fname in zip(index_rows, index_files):
            fh.write(f"{int(row[0])},{_fmt(row[1])},{fname},"
                     + ",".join(_fmt(v) for v in row[2:]) + "\n")
    outputs.append({"path": index_path.name, "sha256": _sha256(index_path)})

    sweep_doc = {"name": name, "base": scenario_to_dict(base),
                 "sizes_b": sizes, "overlaps": overlaps}
    manifest = RunManifest(
        scenario=sweep_doc,
        config_hash=_config_hash(sweep_doc),
        tool_version=TOOL_VERSION,
        duration_s=time.perf_counter() - start,
        outputs=outputs,
        status=status,
        checks={"max_oracle_residual": worst},
    )
    manifest.save(out / f"{name}_manifest.json")
    return manifest
