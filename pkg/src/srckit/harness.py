"""Benchmark harness: dataset ingestion, hold-out splitting, and the Monte
Carlo sweep of solver error curves with dominance-conditioned decomposition
plus projection baselines.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .baselines import PCA, SPECTRAL, LdaModel, fit_projection
from .classifier import (
    label_from_residuals,
    residuals_from_contributions,
    support_contributions,
)
from .diagnostics import decompose_errors, report_from_contributions
from .errors import (
    ClassTooSmall,
    DataError,
    LabelCountMismatch,
    NotSquare,
    ParseError,
    RaggedRow,
    SrckitError,
)
from .linalg import normalize_columns, numerical_rank
from .solvers import PATH_SOLVERS, StopCriteria, full_regression
from .synth import LabeledDataset

SCHEMA_VERSION = 1
FEATURE_CSV = "feature"
SIMILARITY_CSV = "similarity"
SOLVER_NAMES = ("omp", "homotopy", "marginal", "full")
METRICS = ("L", "dominance_error", "P1", "P2")


@dataclass
class SimilarityDataset:
    """Square relational matrix (similarity or dissimilarity) with labels."""

    matrix: np.ndarray
    labels: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)

    @property
    def n_obs(self) -> int:
        return self.matrix.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) if self.labels.size else 0

    def validate(self) -> "SimilarityDataset":
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise NotSquare(f"similarity matrix has shape {self.matrix.shape}")
        if self.labels.shape != (self.matrix.shape[0],):
            raise LabelCountMismatch(
                f"{self.matrix.shape[0]} observations but {self.labels.shape[0]} labels"
            )
        if not np.all(np.isfinite(self.matrix)):
            raise DataError("matrix contains NaN or Inf")
        if self.labels.min() < 1:
            raise DataError("labels must be positive integers")
        missing = sorted(
            set(range(1, self.n_classes + 1)) - set(np.unique(self.labels).tolist())
        )
        if missing:
            raise DataError(f"classes {missing} have no observations")
        return self


def _parse_number_row(parts, lineno):
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(lineno, f"non-numeric field: {exc}") from exc


def load_dataset(path, format: str = FEATURE_CSV):
    """Load a dataset file.

    feature format: each row is `label,f1,...,fm` (comma-separated, optional
    header lines starting with '#'); observations become columns.
    similarity format: an n x n numeric matrix, with labels in the sibling
    file `<path>.labels`, one integer per line.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if format == FEATURE_CSV:
        labels, rows = [], []
        expected = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split(",")
            if expected is None:
                if len(parts) < 2:
                    raise ParseError(lineno, "need a label and at least one feature")
                expected = len(parts)
            elif len(parts) != expected:
                raise RaggedRow(lineno, expected, len(parts))
            try:
                label = int(parts[0])
            except ValueError as exc:
                raise ParseError(lineno, f"label {parts[0]!r} is not an integer") from exc
            if label < 1:
                raise ParseError(lineno, f"label {label} is not positive")
            labels.append(label)
            rows.append(_parse_number_row(parts[1:], lineno))
        if not rows:
            raise ParseError(0, "no data rows")
        return LabeledDataset(
            np.asarray(rows, dtype=float).T, np.asarray(labels), name=path.stem
        ).validate()
    if format == SIMILARITY_CSV:
        rows = []
        expected = None
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split(",")
            if expected is None:
                expected = len(parts)
            elif len(parts) != expected:
                raise RaggedRow(lineno, expected, len(parts))
            rows.append(_parse_number_row(parts, lineno))
        matrix = np.asarray(rows, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise NotSquare(f"similarity matrix has shape {matrix.shape}")
        labels = _load_labels(path, matrix.shape[0])
        return SimilarityDataset(matrix, labels, name=path.stem).validate()
    raise ValueError(f"unknown format {format!r}")


def _load_labels(path: Path, n: int) -> np.ndarray:
    for cand in (Path(str(path) + ".labels"), path.with_suffix(".labels")):
        if cand.exists():
            values = [ln.strip() for ln in cand.read_text().splitlines() if ln.strip()]
            if len(values) != n:
                raise LabelCountMismatch(
                    f"{len(values)} labels for {n} observations in {cand.name}"
                )
            try:
                return np.asarray([int(v) for v in values])
            except ValueError as exc:
                raise ParseError(0, f"bad label in {cand.name}: {exc}") from exc
    raise FileNotFoundError(f"no labels file next to {path} (expected {path}.labels)")


def save_feature_csv(dataset: LabeledDataset, path) -> Path:
    """Write a LabeledDataset in the feature CSV format (lossless floats)."""
    path = Path(path)
    lines = [f"# {dataset.name or 'dataset'}: label,f1,...,fm"]
    F, y = dataset.features, dataset.labels
    for j in range(F.shape[1]):
        lines.append(",".join([str(int(y[j]))] + [repr(float(v)) for v in F[:, j]]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def split_indices(labels, fraction: float, seed: int):
    """Unstratified uniform split: floor(n * fraction) train, rest test."""
    labels = np.asarray(labels, dtype=int)
    n = labels.shape[0]
    counts = np.bincount(labels)
    small = [k for k in range(1, counts.shape[0]) if 0 < counts[k] < 2]
    if small:
        raise ClassTooSmall(f"classes {small} have fewer than 2 observations")
    n_train = int(np.floor(n * fraction))
    if not 1 <= n_train < n:
        raise ValueError(f"split fraction {fraction} leaves an empty side for n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def holdout_split(data, fraction: float = 0.5, seed: int = 0):
    """Split into (train, test) datasets.

    Similarity inputs split columns while keeping all rows, so each half
    holds full-length relation columns of the original square matrix.
    """
    tr, te = split_indices(data.labels, fraction, seed)
    if isinstance(data, SimilarityDataset):
        F = data.matrix
        make = lambda idx, tag: LabeledDataset(
            F[:, idx], data.labels[idx], name=f"{data.name}[{tag}]"
        )
    else:
        make = lambda idx, tag: LabeledDataset(
            data.features[:, idx],
            data.labels[idx],
            normalized=data.normalized,
            name=f"{data.name}[{tag}]",
        )
    return make(tr, "train"), make(te, "test")


@dataclass
class BenchConfig:
    """Benchmark protocol knobs; defaults follow the evaluation protocol
    (sparsity sweep to 100, dimension sweep to 100, 9-NN, 100 replicates,
    half/half splits)."""

    solvers: tuple = ("omp", "homotopy", "marginal")
    sparsity_max: int = 100
    baseline_dims: int = 100
    knn_k: int = 9
    monte_carlo: int = 100
    split_fraction: float = 0.5
    master_seed: int = 0
    dataset: str = ""
    similarity_input: bool = False

    def validate(self) -> "BenchConfig":
        for name in ("sparsity_max", "baseline_dims", "knn_k", "monte_carlo"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0.0 < self.split_fraction < 1.0:
            raise ValueError("split_fraction must be in (0, 1)")
        bad = [s for s in self.solvers if s not in SOLVER_NAMES]
        if bad:
            raise ValueError(f"unknown solvers {bad}; choose from {SOLVER_NAMES}")
        if not self.solvers:
            raise ValueError("at least one solver required")
        return self


_CONFIG_PARSERS = {
    "solvers": lambda v: tuple(s.strip() for s in v.split(",") if s.strip()),
    "sparsity_max": int,
    "baseline_dims": int,
    "knn_k": int,
    "monte_carlo": int,
    "split_fraction": float,
    "master_seed": int,
    "dataset": str,
    "similarity_input": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
}


def parse_config_file(path) -> dict:
    """Read a flat `key = value` config file mirroring BenchConfig fields."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(lineno, f"expected key = value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _CONFIG_PARSERS:
            raise ParseError(lineno, f"unknown config key {key!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](raw.strip())
        except ValueError as exc:
            raise ParseError(lineno, f"bad value for {key}: {exc}") from exc
    return values


@dataclass
class SolverResult:
    name: str
    mean: dict
    per_replicate: dict
    counts: np.ndarray  # (R, S, 4): n_test, n_dominant, n_dom_wrong, n_nondom_wrong
    direct_wrong: np.ndarray  # (R, S) misclassifications tallied at decision time
    pooled: dict
    padded_paths: int  # paths shorter than the sweep, extended by holding last beta
    excluded: int  # per-observation solver failures (recorded, not dropped silently)
    full_rank: list | None = None


@dataclass
class BaselineResult:
    name: str
    mean: list
    per_replicate: np.ndarray  # (R, D)
    padded_from: int | None  # smallest padded dimension, None when none padded


@dataclass
class BenchmarkReport:
    config: dict
    solvers: dict
    baselines: dict
    replicate_seeds: list
    telemetry: dict
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "solvers": {
                name: {
                    **{m: res.mean[m] for m in METRICS},
                    "per_replicate": {
                        m: res.per_replicate[m].tolist() for m in METRICS
                    },
                    "counts": res.counts.tolist(),
                    "direct_wrong": res.direct_wrong.tolist(),
                    "pooled": res.pooled,
                    "padded_paths": res.padded_paths,
                    "excluded": res.excluded,
                    "full_rank": res.full_rank,
                }
                for name, res in self.solvers.items()
            },
            "baselines": {
                name: {
                    "error": res.mean,
                    "per_replicate": res.per_replicate.tolist(),
                    "padded_from": res.padded_from,
                }
                for name, res in self.baselines.items()
            },
            "replicate_seeds": self.replicate_seeds,
            "telemetry": self.telemetry,
        }


def _evaluate_steps(Xtr, ytr, n_classes, x, y, steps, sweep_len):
    """Classify and test dominance at every sparsity level of one path.

    Each distinct path step is evaluated once; levels past the end of the
    path reuse the last step (held beta). Returns (dominates, correct) bool
    arrays over the sweep plus the count of held levels.
    """
    dom = np.zeros(sweep_len, dtype=bool)
    correct = np.zeros(sweep_len, dtype=bool)
    last = (False, False)
    for s in range(1, sweep_len + 1):
        if s <= len(steps):
            step = steps[s - 1]
            sel = np.asarray(step.selected, dtype=int)
            own, rest = support_contributions(
                Xtr[:, sel], step.coefficients, ytr[sel], n_classes
            )
            residuals = residuals_from_contributions(x, own)
            label = label_from_residuals(residuals)
            rep = report_from_contributions(x, y, own, rest)
            last = (rep.dominates, label == y)
        dom[s - 1], correct[s - 1] = last
    return dom, correct


def run_benchmark(config: BenchConfig, data=None) -> BenchmarkReport:
    """Run the Monte Carlo benchmark protocol.

    Per replicate: split, normalize columns, trace one solver path per test
    observation with stop = (sparsity_max, 1e-8, 1e-8), classify and test
    dominance at every sparsity level, decompose errors by dominance, and
    sweep the projection baselines over dimensions. Mean curves across
    replicates are reported alongside the per-replicate raw counts.
    """
    config.validate()
    if data is None:
        fmt = SIMILARITY_CSV if config.similarity_input else FEATURE_CSV
        data = load_dataset(config.dataset, fmt)
    is_sim = isinstance(data, SimilarityDataset)
    labels_all = data.labels
    n_classes = data.n_classes
    R, S, D = config.monte_carlo, config.sparsity_max, config.baseline_dims
    stop = StopCriteria(S, 1e-8, 1e-8)
    seeds = [config.master_seed + r for r in range(R)]

    acc = {
        name: {
            "counts": np.zeros((R, S, 4), dtype=int),
            "direct_wrong": np.zeros((R, S), dtype=int),
            "rates": {m: np.zeros((R, S)) for m in METRICS},
            "excluded": 0,
            "padded": 0,
            "full_rank": [] if name == "full" else None,
        }
        for name in config.solvers
    }
    base_curves = {"knn": np.zeros((R, D)), "lda": np.zeros((R, D))}
    base_padded_from = {"knn": None, "lda": None}
    class_counts = []
    wall = {"split": 0.0, "baselines": 0.0}
    wall.update({f"solver:{name}": 0.0 for name in config.solvers})

    for r in range(R):
        tic = time.perf_counter()
        tr_idx, te_idx = split_indices(labels_all, config.split_fraction, seeds[r])
        raw = data.matrix if is_sim else data.features
        Xtr = normalize_columns(raw[:, tr_idx])
        Xte = normalize_columns(raw[:, te_idx])
        ytr = labels_all[tr_idx]
        yte = labels_all[te_idx]
        n_te = te_idx.size
        class_counts.append(
            {
                "train": np.bincount(ytr, minlength=n_classes + 1)[1:].tolist(),
                "test": np.bincount(yte, minlength=n_classes + 1)[1:].tolist(),
            }
        )
        wall["split"] += time.perf_counter() - tic

        for name in config.solvers:
            tic = time.perf_counter()
            a = acc[name]
            if name == "full":
                a["full_rank"].append(
                    numerical_rank(Xtr) == min(Xtr.shape)
                )
            records = [[] for _ in range(S)]
            for j in range(n_te):
                x = Xte[:, j]
                y = int(yte[j])
                try:
                    if name == "full":
                        result = full_regression(Xtr, x)
                        steps = [_FullStep(result.beta)]
                    else:
                        steps = PATH_SOLVERS[name](Xtr, x, stop).steps
                except SrckitError:
                    a["excluded"] += 1
                    continue
                if len(steps) < S:
                    a["padded"] += 1
                dom, correct = _evaluate_steps(Xtr, ytr, n_classes, x, y, steps, S)
                a["direct_wrong"][r] += ~correct
                for s in range(S):
                    records[s].append((bool(dom[s]), bool(correct[s])))
            for s in range(S):
                if not records[s]:
                    continue
                dec = decompose_errors(records[s])
                a["counts"][r, s] = dec.counts
                a["rates"]["L"][r, s] = dec.L
                a["rates"]["dominance_error"][r, s] = 1.0 - dec.P_D
                a["rates"]["P1"][r, s] = dec.P1
                a["rates"]["P2"][r, s] = dec.P2
            wall[f"solver:{name}"] += time.perf_counter() - tic

        tic = time.perf_counter()
        if is_sim:
            feasible = tr_idx.size
            proj = fit_projection(
                data.matrix[np.ix_(tr_idx, tr_idx)], SPECTRAL, min(D, feasible)
            )
            train_proj = proj.train_coordinates()
            test_proj = proj.transform(data.matrix[np.ix_(tr_idx, te_idx)])
        else:
            feasible = min(Xtr.shape)
            proj = fit_projection(Xtr, PCA, min(D, feasible))
            train_proj = proj.transform(Xtr)
            test_proj = proj.transform(Xte)
        d_cap = proj.dimension
        knn_err = _knn_error_sweep(train_proj, ytr, test_proj, yte, config.knn_k, d_cap)
        lda_err = _lda_error_sweep(train_proj, ytr, test_proj, yte, d_cap)
        for key, err in (("knn", knn_err), ("lda", lda_err)):
            padded = np.concatenate([err, np.full(D - d_cap, err[-1])])
            base_curves[key][r] = padded
            if d_cap < D and base_padded_from[key] is None:
                base_padded_from[key] = d_cap + 1
        wall["baselines"] += time.perf_counter() - tic

    solvers = {}
    for name in config.solvers:
        a = acc[name]
        pooled_counts = a["counts"].sum(axis=0)
        pooled = _pooled_rates(pooled_counts)
        solvers[name] = SolverResult(
            name=name,
            mean={m: a["rates"][m].mean(axis=0).tolist() for m in METRICS},
            per_replicate=a["rates"],
            counts=a["counts"],
            direct_wrong=a["direct_wrong"],
            pooled=pooled,
            padded_paths=a["padded"],
            excluded=a["excluded"],
            full_rank=a["full_rank"],
        )
    baselines = {
        name: BaselineResult(
            name=name,
            mean=base_curves[name].mean(axis=0).tolist(),
            per_replicate=base_curves[name],
            padded_from=base_padded_from[name],
        )
        for name in base_curves
    }
    telemetry = {
        "wall_clock": wall,
        "class_counts": class_counts,
        "excluded": {name: acc[name]["excluded"] for name in config.solvers},
        "dataset_name": getattr(data, "name", ""),
        "n_observations": int(labels_all.shape[0]),
        "n_classes": int(n_classes),
    }
    return BenchmarkReport(
        config=asdict(config),
        solvers=solvers,
        baselines=baselines,
        replicate_seeds=seeds,
        telemetry=telemetry,
    )


class _FullStep:
    """Adapter presenting a full-regression solution as a one-step path."""

    def __init__(self, beta):
        self.selected = tuple(np.flatnonzero(beta))
        self.coefficients = np.asarray(beta)[list(self.selected)]


def _pooled_rates(pooled_counts):
    out = {"L": [], "P_D": [], "P1": [], "P2": []}
    for s in range(pooled_counts.shape[0]):
        n, nd, ndw, nnw = (int(v) for v in pooled_counts[s])
        out["L"].append((ndw + nnw) / n if n else 0.0)
        out["P_D"].append(nd / n if n else 0.0)
        out["P1"].append(ndw / nd if nd else 0.0)
        out["P2"].append(nnw / (n - nd) if n - nd else 0.0)
    return out


def _knn_error_sweep(train_proj, ytr, test_proj, yte, k, d_cap):
    """kNN error at every dimension 1..d_cap via running Gram updates."""
    n_tr = train_proj.shape[1]
    n_te = test_proj.shape[1]
    if not 1 <= k <= n_tr:
        raise ValueError(f"k={k} outside 1..{n_tr}")
    n_classes = int(ytr.max())
    gram = np.zeros((n_tr, n_te))
    tr_sq = np.zeros(n_tr)
    te_sq = np.zeros(n_te)
    errors = np.zeros(d_cap)
    for d in range(d_cap):
        gram += np.outer(train_proj[d], test_proj[d])
        tr_sq += train_proj[d] ** 2
        te_sq += test_proj[d] ** 2
        d2 = tr_sq[:, None] + te_sq[None, :] - 2.0 * gram
        wrong = 0
        for j in range(n_te):
            nearest = np.argsort(d2[:, j], kind="stable")[:k]
            votes = np.bincount(ytr[nearest], minlength=n_classes + 1)
            if int(np.argmax(votes)) != yte[j]:
                wrong += 1
        errors[d] = wrong / n_te
    return errors


def _lda_error_sweep(train_proj, ytr, test_proj, yte, d_cap):
    errors = np.zeros(d_cap)
    for d in range(1, d_cap + 1):
        model = LdaModel().fit(train_proj[:d], ytr)
        pred = model.predict_columns(test_proj[:d])
        errors[d - 1] = float(np.mean(pred != yte))
    return errors
