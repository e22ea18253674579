"""Experiment sweeps: generate matrices, run subspace iteration, persist reports."""
import csv
import datetime as dt
import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import bounds as B
from . import plots
from .angles import canonical_angles
from .mmio import write_matrix_market
from .norms import NormSpec
from .report import CSV_COLUMNS, DEFAULT_SPECS, BoundReport, build_report
from .sketch import PRNG_VERSION, VARIANTS, gaussian_guess, rand_svd
from .testmatrices import NAMED_MATRICES, TestMatrixSpec

log = logging.getLogger(__name__)

RUN_EXPERIMENTS = ("angles_no_extraction", "angles_extraction", "singular_values", "lowrank_errors")
EXPERIMENTS = RUN_EXPERIMENTS + ("probabilistic_calibration",)
CACHE_VERSION = 2
CACHE_ENV = "RSVD_DIAG_CACHE"


@dataclass
class ExperimentConfig:
    matrices: list = field(default_factory=lambda: list(NAMED_MATRICES.values()))
    k: list = field(default_factory=lambda: [25])
    rho: list = field(default_factory=lambda: [20])
    q: list = field(default_factory=lambda: [0, 1, 2])
    seeds: list = field(default_factory=lambda: [0])
    variant: str = "practical"
    norm_specs: list = field(default_factory=lambda: list(DEFAULT_SPECS))
    delta: float = 0.1
    experiments: list = field(default_factory=lambda: list(RUN_EXPERIMENTS))
    calibration_matrices: list = field(default_factory=lambda: ["GapLarge"])
    calibration_q: list = field(default_factory=lambda: [1])
    calibration_seeds: int = 200
    output_dir: str = "runs/default"
    dump_matrices: bool = False

    def __post_init__(self):
        self.matrices = [_matrix_spec(m) for m in self.matrices]
        self.norm_specs = [s if isinstance(s, NormSpec) else NormSpec.parse(s) for s in self.norm_specs]
        for name in ("matrices", "k", "rho", "q", "seeds", "norm_specs"):
            if not getattr(self, name):
                raise ValueError(f"config field {name!r} must be non-empty")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        unknown = set(self.experiments) - set(EXPERIMENTS)
        if unknown:
            raise ValueError(f"unknown experiments: {sorted(unknown)}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        labels = [m.label for m in self.matrices]
        if len(set(labels)) != len(labels):
            raise ValueError("matrix labels must be unique")

    def to_dict(self):
        d = asdict(self)
        d["matrices"] = [m.to_dict() for m in self.matrices]
        d["norm_specs"] = [str(s) for s in self.norm_specs]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def digest(self):
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _matrix_spec(m):
    if isinstance(m, TestMatrixSpec):
        return m
    if isinstance(m, str):
        try:
            return NAMED_MATRICES[m]
        except KeyError:
            raise ValueError(f"unknown matrix name {m!r}; known: {sorted(NAMED_MATRICES)}") from None
    return TestMatrixSpec.from_dict(m)


def cache_dir(output_dir):
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path(output_dir) / "cache"


def reference_svd(A, k, directory=None):
    """Exact SVD of ``A``, loaded from / stored to an on-disk cache when given."""
    if directory is None:
        return B.ReferenceSvd.from_matrix(A, k)
    digest = hashlib.sha256(np.ascontiguousarray(A).tobytes() + repr(A.shape).encode()).hexdigest()
    path = Path(directory) / f"refsvd-v{CACHE_VERSION}-{digest[:24]}.npz"
    if path.exists():
        with np.load(path) as z:
            if int(z["version"]) == CACHE_VERSION:
                return B.ReferenceSvd(z["U"], z["s"], z["V"], k)
    ref = B.ReferenceSvd.from_matrix(A, k)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp.npz")
    np.savez(tmp, U=ref.U, s=ref.s, V=ref.V, version=CACHE_VERSION)
    os.replace(tmp, path)
    return ref


def emit_csv(reports, path, extra_rows=()):
    """Write the long-format results table (10 columns, one row per bound)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for rep in reports:
            w.writerows(rep.rows())
        w.writerows(extra_rows)
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _run_name(label, k, rho, q, seed):
    return f"{label}_k{k}_rho{rho}_q{q}_seed{seed}"


def _one_run(A, ref_full, label, k, rho, q, seed, config):
    entry = {"matrix": label, "k": k, "rho": rho, "q": q, "seed": seed}
    try:
        ref = ref_full.with_k(k)
        Omega = gaussian_guess(A.shape[1], k + rho, seed)
        rep = build_report(
            A, ref, Omega, q, variant=config.variant, specs=config.norm_specs, matrix=label, seed=seed
        )
    except (B.AssumptionError, ValueError) as exc:
        entry.update(status="skipped", reason=f"{type(exc).__name__}: {exc}")
        return entry, None
    entry["status"] = "ok"
    return entry, rep


def calibrate(A, ref, label, k, rho, q, n_seeds, delta, variant="practical"):
    """Monte-Carlo check of the Gaussian expectation and tail bounds.

    Returns a dict with per-index violation fractions, mean sines and the
    bound values, plus the CSV rows that record them.
    """
    ref = ref.with_k(k)
    n = A.shape[1]
    gammas = B.singular_ratios(ref)
    pb = B.probabilistic_angle_bounds(gammas, q, n, k, rho, delta)
    sines = np.empty((n_seeds, k))
    for seed in range(n_seeds):
        approx = rand_svd(A, gaussian_guess(n, k + rho, seed), q, variant)
        sines[seed] = canonical_angles(approx.U_hat, ref.U_k).sines
    exceed = sines > pb.tail_theta
    fraction = exceed.mean(axis=0)
    allowed = delta + 3.0 * np.sqrt(delta * (1 - delta) / n_seeds)
    mean = sines.mean(axis=0)
    rows = []
    for j in range(k):
        base = {"matrix": label, "k": k, "rho": rho, "q": q, "seed": "", "j": j + 1, "norm_spec": ""}
        rows.append({**base, "quantity": "prob_tail_fraction", "measured": repr(float(fraction[j])), "bound": repr(float(allowed))})
        rows.append({**base, "quantity": "prob_expectation", "measured": repr(float(mean[j])), "bound": repr(float(pb.expect_theta[j]))})
    ce, cd = B.gaussian_constants(n, k, rho, delta)
    return {
        "matrix": label,
        "k": k,
        "rho": rho,
        "q": q,
        "n_seeds": n_seeds,
        "delta": delta,
        "C_e": ce,
        "C_d": cd,
        "tail_fraction": fraction.tolist(),
        "tail_fraction_allowed": allowed,
        "any_index_fraction": float(exceed.any(axis=1).mean()),
        "mean_sin_theta": mean.tolist(),
        "expectation_bound": pb.expect_theta.tolist(),
        "tail_bound": pb.tail_theta.tolist(),
        "rows": rows,
    }


def _now():
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def run(config, jobs=1):
    """Execute a sweep and write ``manifest.json``, ``results.csv``, reports and plots.

    Runs whose assumptions fail are recorded as skipped in the manifest; the
    sweep continues. Returns the output directory.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": config.to_dict(),
        "config_hash": config.digest(),
        "prng": PRNG_VERSION,
        "started": _now(),
        "runs": [],
        "calibration": [],
        "plots": [],
    }
    per_run = [e for e in config.experiments if e in RUN_EXPERIMENTS]
    reports = []
    extra_rows = []
    cdir = cache_dir(out)
    matrices = {}

    def matrix(spec):
        if spec.label not in matrices:
            A = spec.generate()
            if config.dump_matrices:
                write_matrix_market(out / "matrices" / f"{spec.label}.mtx", A, comment=json.dumps(spec.to_dict()))
            matrices[spec.label] = (A, reference_svd(A, 1, cdir))
        return matrices[spec.label]

    if per_run:
        tasks = []
        for spec in config.matrices:
            A, ref = matrix(spec)
            for k in config.k:
                for rho in config.rho:
                    for q in config.q:
                        for seed in config.seeds:
                            tasks.append((A, ref, spec.label, k, rho, q, seed))
        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            results = list(pool.map(lambda t: _one_run(*t, config), tasks))
        (out / "reports").mkdir(exist_ok=True)
        for entry, rep in results:
            if rep is not None:
                name = _run_name(entry["matrix"], entry["k"], entry["rho"], entry["q"], entry["seed"])
                path = out / "reports" / f"{name}.json"
                path.write_text(json.dumps(rep.to_dict(), indent=1))
                entry["report"] = str(path.relative_to(out))
                entry["violations"] = len(rep.violations())
                reports.append(rep)
            manifest["runs"].append(entry)
        manifest["plots"] = [str(p.relative_to(out)) for p in _emit_plots(reports, per_run, config, out)]

    if "probabilistic_calibration" in config.experiments:
        for name in config.calibration_matrices:
            spec = _matrix_spec(name)
            A, ref = matrix(spec)
            for k in config.k:
                for rho in config.rho:
                    for q in config.calibration_q:
                        try:
                            res = calibrate(A, ref, spec.label, k, rho, q, config.calibration_seeds, config.delta, config.variant)
                        except (B.AssumptionError, ValueError) as exc:
                            manifest["calibration"].append(
                                {"matrix": spec.label, "k": k, "rho": rho, "q": q, "status": "skipped", "reason": str(exc)}
                            )
                            continue
                        extra_rows.extend(res.pop("rows"))
                        res["status"] = "ok"
                        manifest["calibration"].append(res)
                        p = _calibration_plot(res, out)
                        manifest["plots"].append(str(p.relative_to(out)))

    if reports or extra_rows:
        emit_csv(reports, out / "results.csv", extra_rows)
    manifest["finished"] = _now()
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1))
    return out


def _emit_plots(reports, experiments, config, out):
    paths = []
    k0, rho0, seed0 = config.k[0], config.rho[0], config.seeds[0]
    by_matrix = {}
    for rep in reports:
        if (rep.k, rep.rho, rep.seed) == (k0, rho0, seed0):
            by_matrix.setdefault(rep.matrix, []).append(rep)
    for label, reps in by_matrix.items():
        stem = out / "plots" / label
        if "angles_no_extraction" in experiments:
            paths.append(
                plots.emit_svg(
                    plots.per_index_series(reps, "sin_theta"),
                    f"{stem}_angles.svg",
                    title=f"{label}: sin theta_j",
                    ylabel="sin theta_j",
                )
            )
        if "angles_extraction" in experiments:
            paths.append(
                plots.emit_svg(
                    plots.per_index_series(reps, "extraction_angle"),
                    f"{stem}_extraction.svg",
                    title=f"{label}: max(sin theta'_j, sin nu'_j)",
                    ylabel="sine",
                )
            )
        if "singular_values" in experiments:
            paths.append(
                plots.emit_svg(
                    plots.singular_value_series(reps),
                    f"{stem}_singular_values.svg",
                    title=f"{label}: singular values",
                    ylabel="sigma_j",
                )
            )
        if "lowrank_errors" in experiments:
            spec = str(config.norm_specs[0])
            paths.append(
                plots.emit_svg(
                    plots.lowrank_series(reps, spec),
                    f"{stem}_lowrank.svg",
                    title=f"{label}: low-rank error ({spec})",
                    xlabel="q",
                    ylabel="error",
                )
            )
    return paths


def _calibration_plot(res, out):
    x = np.arange(1, res["k"] + 1)
    series = [
        {"x": x, "y": res["mean_sin_theta"], "label": "mean sin theta_j", "style": "measured", "color": "tab:blue"},
        {"x": x, "y": res["expectation_bound"], "label": "expectation bound", "style": "bound", "color": "tab:blue"},
        {"x": x, "y": res["tail_bound"], "label": "tail bound", "style": "bound", "color": "tab:red"},
    ]
    name = f"{res['matrix']}_calibration_k{res['k']}_rho{res['rho']}_q{res['q']}.svg"
    return plots.emit_svg(series, out / "plots" / name, title=f"{res['matrix']}: {res['n_seeds']} Gaussian seeds")


def with_overrides(config, out=None, seed=None, experiments=None):
    """Apply CLI flag overrides to a config."""
    changes = {}
    if out is not None:
        changes["output_dir"] = str(out)
    if seed is not None:
        changes["seeds"] = [int(seed)]
    if experiments is not None:
        changes["experiments"] = list(experiments)
    return replace(config, **changes) if changes else config


__all__ = [
    "EXPERIMENTS",
    "RUN_EXPERIMENTS",
    "ExperimentConfig",
    "calibrate",
    "emit_csv",
    "read_csv",
    "reference_svd",
    "run",
    "with_overrides",
]
