"""Noise channels, Monte Carlo recovery curves and threshold crossings.

Recovery probabilities are estimated per error weight w and recombined with
the binomial mixture P(p) = sum_w Binom(n, p)(w) P_rec(w).  For erasures the
default sampler draws one random permutation per trial and records the first
prefix length at which decoding fails; every prefix is a uniform support of
its size, so one trial feeds every weight at once.  Direct i.i.d. sampling
at each p is available as a cross-check.

Standard errors never drop below 1/T for T trials.  Outcomes rarer than
about 1/T go unseen, and far in the tails of p the recovery probability is
carried by exactly those outcomes, so the sample spread alone can claim a
precision the data do not have.

All randomness comes from numpy generators seeded by
``SeedSequence(seed, spawn_key=...)`` keyed on (L, weight or p index, chunk),
and chunks are reduced in a fixed order, so results do not depend on the
number of worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .codegen import BASES, LAYOUTS, ZERO_RATE, GaugeSpec, StabilizerCode, build_evenbly_code
from .decoders import ErasureDecoder, GreedyDecoder, PauliDecoder
from .tiling import TilingGraph, build_tiling

ERASURE = "erasure"
DEPOLARIZING = "depolarizing"
PURE_X = "pure_x"
PURE_Y = "pure_y"
PURE_Z = "pure_z"
KINDS = (ERASURE, DEPOLARIZING, PURE_X, PURE_Y, PURE_Z)
PAULI_KINDS = (DEPOLARIZING, PURE_X, PURE_Y, PURE_Z)
_PURE_BASIS = {PURE_X: "X", PURE_Y: "Y", PURE_Z: "Z"}

GAUSSIAN = "gaussian"
GREEDY = "greedy"
PAULI = "pauli"
DECODERS = (GAUSSIAN, GREEDY, PAULI)

# full-scale Monte Carlo trials per layer count; desk runs scale these down
FULL_TRIALS = {0: 100_000, 1: 100_000, 2: 10_000, 3: 1_000, 4: 1_000}
DESK_SCALE = 0.1

CSV_COLUMNS = ("decoder", "kind", "gauge", "layout", "L", "n", "k", "p_phys", "p_rec", "std_err", "trials")


class SweepError(RuntimeError):
    pass


def default_trials(L: int, scale: float = DESK_SCALE) -> int:
    base = FULL_TRIALS.get(L, FULL_TRIALS[max(FULL_TRIALS)])
    return max(1, int(round(base * scale)))


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    p: float

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass
class RecoveryCurve:
    points: list  # (p_phys, p_rec, std_err), sorted by p_phys
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.points = sorted((float(a), float(b), float(c)) for a, b, c in self.points)

    @property
    def p_phys(self) -> np.ndarray:
        return np.array([pt[0] for pt in self.points])

    @property
    def p_rec(self) -> np.ndarray:
        return np.array([pt[1] for pt in self.points])

    @property
    def std_err(self) -> np.ndarray:
        return np.array([pt[2] for pt in self.points])


@dataclass(frozen=True)
class ThresholdEstimate:
    p_threshold: float | None
    uncertainty: float | None
    method: str

    @property
    def found(self) -> bool:
        return self.p_threshold is not None

    def to_dict(self) -> dict:
        return asdict(self) | {"found": self.found}


# --- binomial recombination ------------------------------------------------


def binomial_pmf(n: int, p: float) -> np.ndarray:
    """Binom(n, p) probabilities for w = 0..n, computed in log space."""
    if p <= 0.0:
        out = np.zeros(n + 1)
        out[0] = 1.0
        return out
    if p >= 1.0:
        out = np.zeros(n + 1)
        out[n] = 1.0
        return out
    w = np.arange(n + 1)
    logc = np.array([math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1) for k in range(n + 1)])
    return np.exp(logc + w * math.log(p) + (n - w) * math.log1p(-p))


@dataclass
class WeightTable:
    """Per-weight success counts for w = 0..n."""

    n: int
    successes: np.ndarray
    trials: np.ndarray

    @property
    def rates(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            r = self.successes / self.trials
        return np.where(self.trials > 0, r, np.nan)

    @property
    def variances(self) -> np.ndarray:
        r = np.nan_to_num(self.rates)
        with np.errstate(invalid="ignore", divide="ignore"):
            v = np.maximum(r * (1 - r) / self.trials, 1.0 / self.trials ** 2)
        return np.where(self.trials > 0, v, 0.0)

    def filled_rates(self) -> np.ndarray:
        """Rates with untested weights clamped to the nearest tested weight."""
        r = self.rates
        tested = np.nonzero(~np.isnan(r))[0]
        if tested.size == 0:
            raise ValueError("no weight was tested")
        idx = np.clip(np.searchsorted(tested, np.arange(self.n + 1)), 0, tested.size - 1)
        lower = tested[np.clip(idx - 1, 0, tested.size - 1)]
        upper = tested[idx]
        nearest = np.where(np.abs(np.arange(self.n + 1) - lower) <= np.abs(upper - np.arange(self.n + 1)),
                           lower, upper)
        return np.where(np.isnan(r), r[nearest], r)


def recombine(per_weight: Sequence[float], p: float, variances: Sequence[float] | None = None) -> tuple[float, float]:
    """Binomial mixture of per-weight recovery rates; returns (p_rec, std_err)."""
    rates = np.asarray(per_weight, dtype=float)
    n = rates.size - 1
    pmf = binomial_pmf(n, p)
    val = float(np.dot(pmf, rates))
    if variances is None:
        return val, 0.0
    var = float(np.dot(pmf * pmf, np.asarray(variances, dtype=float)))
    return val, math.sqrt(var)


def recombine_failure_weights(w_star: np.ndarray, n: int, p: float) -> tuple[float, float]:
    """Recovery from nested-erasure failure weights: mean of P(Bin(n, p) < w*).

    A trial with failure weight w* succeeds on every erasure of fewer than w*
    qubits along its permutation.  The standard error is the sample standard
    deviation of the per-trial probabilities, which accounts for the
    correlation between weights within a permutation.
    """
    cdf = np.concatenate([[0.0], np.cumsum(binomial_pmf(n, p))])
    per_trial = cdf[np.clip(w_star, 0, n + 1)]
    t = per_trial.size
    mean = float(per_trial.mean())
    err = float(per_trial.std(ddof=1) / math.sqrt(t)) if t > 1 else 0.0
    return min(mean, 1.0), max(err, 1.0 / t)


def failure_weights_table(w_star: np.ndarray, n: int) -> WeightTable:
    succ = np.array([(w_star > w).sum() for w in range(n + 1)], dtype=float)
    return WeightTable(n, succ, np.full(n + 1, float(w_star.size)))


# --- code instances and per-trial kernels -------------------------------------


@dataclass
class CodeInstance:
    g: TilingGraph
    code: StabilizerCode
    spec: GaugeSpec
    target: int
    max_free: int = 30
    noise_aware: bool = True  # pure-Pauli kinds search same-type corrections only
    _decoders: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.code.n

    def decoder(self, name: str, kind: str | None = None):
        restrict = _PURE_BASIS.get(kind) if (name == PAULI and self.noise_aware) else None
        key = (name, restrict)
        if key not in self._decoders:
            if name == GAUSSIAN:
                self._decoders[key] = ErasureDecoder(self.code, [self.target])
            elif name == GREEDY:
                self._decoders[key] = GreedyDecoder(self.g, self.code, self.target)
            elif name == PAULI:
                self._decoders[key] = PauliDecoder(self.code, [self.target], max_free=self.max_free,
                                                   restrict=restrict)
            else:
                raise ValueError(f"unknown decoder {name!r}")
        return self._decoders[key]


def build_instance(p: int, q: int, L: int, spec: GaugeSpec, target: int | None = None,
                   max_free: int = 30, noise_aware: bool = True) -> CodeInstance:
    """Code with ``L`` logical-bearing layers plus ``spec.extra_gauged_layers`` gauged ones."""
    g = build_tiling(p, q, L + spec.extra_gauged_layers)
    code = build_evenbly_code(g, spec)
    if target is None:
        target = code.logical_ids[0]
    return CodeInstance(g, code, spec, target, max_free, noise_aware)


def _pauli_error(rng: np.random.Generator, n: int, support: np.ndarray, kind: str) -> tuple[int, int]:
    if kind == DEPOLARIZING:
        types = rng.integers(1, 4, size=support.size)
    else:
        types = np.full(support.size, {PURE_X: 1, PURE_Z: 2, PURE_Y: 3}[kind])
    x = z = 0
    for qb, t in zip(support.tolist(), types.tolist()):
        if t & 1:
            x |= 1 << qb
        if t & 2:
            z |= 1 << qb
    return x, z


def _decode_once(inst: CodeInstance, decoder: str, kind: str, support: np.ndarray,
                 rng: np.random.Generator) -> bool:
    if kind == ERASURE:
        if decoder == PAULI:
            raise ValueError("the Pauli decoder does not handle erasures")
        mask = 0
        for qb in support.tolist():
            mask |= 1 << qb
        dec = inst.decoder(decoder)
        return dec.decodable(mask) if decoder == GAUSSIAN else dec.decode(mask)
    if decoder != PAULI:
        raise ValueError(f"decoder {decoder!r} only handles erasures")
    x, z = _pauli_error(rng, inst.n, support, kind)
    return inst.decoder(PAULI, kind).success(x, z)


def sample_per_weight(inst: CodeInstance, decoder: str, kind: str, w: int, trials: int,
                      seed: int, spawn_key: tuple[int, ...] = ()) -> tuple[float, float]:
    """Success fraction over ``trials`` uniform weight-w errors and its standard error."""
    if not 0 <= w <= inst.n:
        raise ValueError("weight out of range")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if kind not in KINDS:
        raise ValueError(f"unknown noise kind {kind!r}")
    ok = _count_weight(inst, decoder, kind, w, trials, np.random.SeedSequence(seed, spawn_key=spawn_key + (w,)))
    r = ok / trials
    return r, max(math.sqrt(r * (1 - r) / trials), 1.0 / trials)


def _count_weight(inst: CodeInstance, decoder: str, kind: str, w: int, trials: int,
                  ss: np.random.SeedSequence) -> int:
    if w == 0:
        return trials
    rng = np.random.default_rng(ss)
    ok = 0
    for _ in range(trials):
        support = rng.choice(inst.n, size=w, replace=False)
        ok += _decode_once(inst, decoder, kind, support, rng)
    return ok


def _nested_chunk(inst: CodeInstance, decoders: Sequence[str], trials: int,
                  ss: np.random.SeedSequence) -> np.ndarray:
    """Failure weights (one row per decoder) over ``trials`` random permutations."""
    rng = np.random.default_rng(ss)
    out = np.zeros((len(decoders), trials), dtype=np.int64)
    for t in range(trials):
        perm = rng.permutation(inst.n).tolist()
        for i, d in enumerate(decoders):
            out[i, t] = inst.decoder(d).failure_weight(perm)
    return out


def _direct_chunk(inst: CodeInstance, decoder: str, kind: str, p: float, trials: int,
                  ss: np.random.SeedSequence) -> int:
    rng = np.random.default_rng(ss)
    ok = 0
    for _ in range(trials):
        support = np.nonzero(rng.random(inst.n) < p)[0]
        ok += _decode_once(inst, decoder, kind, support, rng)
    return ok


# --- sweeps ------------------------------------------------------------------


@dataclass
class SweepConfig:
    p: int = 5
    q: int = 4
    layers: tuple = (1, 2, 3)
    layout: str = ZERO_RATE
    gauge: str = "Z"
    extra_gauged_layers: int = 0
    half_filled: bool = True
    decoder: str = GAUSSIAN
    kind: str = ERASURE
    p_grid: tuple = tuple(round(0.01 * i, 2) for i in range(1, 100))
    trials: dict | None = None  # L -> trials; None means the desk defaults
    trial_scale: float = DESK_SCALE
    seed: int = 0
    threads: int = 1
    target: int | None = None
    sampling: str = "weight"  # "weight" (per weight + recombination) or "direct"
    chunk: int = 64
    max_free: int = 30
    noise_aware: bool = True  # Pauli decoder restricted to the channel's Pauli type for pure kinds
    truncate: float | None = None  # skip weights whose binomial mass is below this everywhere

    def __post_init__(self) -> None:
        self.layers = tuple(int(x) for x in self.layers)
        self.p_grid = tuple(sorted(float(x) for x in self.p_grid))
        if self.trials is not None:
            self.trials = {int(k): int(v) for k, v in self.trials.items()}
        self.validate()

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if (self.kind == ERASURE) == (self.decoder == PAULI):
            raise ValueError(f"decoder {self.decoder!r} does not apply to {self.kind!r} noise")
        if self.layout not in LAYOUTS:
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.gauge not in BASES:
            raise ValueError(f"unknown gauge {self.gauge!r}")
        if self.sampling not in ("weight", "direct"):
            raise ValueError("sampling must be 'weight' or 'direct'")
        if not self.layers or min(self.layers) < 0:
            raise ValueError("layers must be a non-empty list of non-negative ints")
        if not self.p_grid or self.p_grid[0] < 0 or self.p_grid[-1] > 1:
            raise ValueError("p grid must lie in [0, 1]")
        if self.threads < 1 or self.chunk < 1:
            raise ValueError("threads and chunk must be >= 1")

    def gauge_spec(self) -> GaugeSpec:
        return GaugeSpec(self.layout, self.gauge, self.extra_gauged_layers, self.half_filled)

    def trials_for(self, L: int) -> int:
        if self.trials is not None and L in self.trials:
            return self.trials[L]
        return default_trials(L, self.trial_scale)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["layers"] = list(self.layers)
        d["p_grid"] = list(self.p_grid)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SweepConfig:
        return cls(**d)


_INSTANCES: dict = {}


def _instance(cfg: dict, L: int) -> CodeInstance:
    key = (cfg["p"], cfg["q"], L, cfg["layout"], cfg["gauge"], cfg["extra_gauged_layers"],
           cfg["half_filled"], cfg["target"], cfg["max_free"], cfg["noise_aware"])
    inst = _INSTANCES.get(key)
    if inst is None:
        spec = GaugeSpec(cfg["layout"], cfg["gauge"], cfg["extra_gauged_layers"], cfg["half_filled"])
        inst = build_instance(cfg["p"], cfg["q"], L, spec, cfg["target"], cfg["max_free"], cfg["noise_aware"])
        _INSTANCES[key] = inst
    return inst


def _run_task(task: tuple) -> object:
    """Worker entry point; tasks are plain tuples so they pickle cheaply."""
    what, cfg, L, key, size, extra = task
    inst = _instance(cfg, L)
    ss = np.random.SeedSequence(cfg["seed"], spawn_key=key)
    try:
        if what == "nested":
            return _nested_chunk(inst, extra, size, ss)
        if what == "weight":
            return _count_weight(inst, cfg["decoder"], cfg["kind"], extra, size, ss)
        return _direct_chunk(inst, cfg["decoder"], cfg["kind"], extra, size, ss)
    except Exception as exc:  # keep the context when a worker fails
        raise SweepError(f"L={L} task {key}: {exc!r}") from exc


def _chunks(total: int, size: int) -> list[int]:
    return [min(size, total - s) for s in range(0, total, size)]


@dataclass
class SweepResult:
    curves: list
    config: SweepConfig
    extras: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for c in self.curves:
            m = c.meta
            for p_phys, p_rec, err in c.points:
                w.writerow([m["decoder"], m["kind"], m["gauge"], m["layout"], m["L"], m["n"], m["k"],
                            repr(p_phys), repr(p_rec), repr(err), m["trials"]])
        return buf.getvalue()

    def metadata(self) -> dict:
        from . import __version__

        return {"config": self.config.to_dict(), "seed": self.config.seed, "version": __version__,
                "curves": [c.meta for c in self.curves], "extras": self.extras}


def _weights_to_run(n: int, cfg: SweepConfig) -> list[int]:
    if cfg.truncate is None:
        return list(range(n + 1))
    mass = np.max([binomial_pmf(n, p) for p in cfg.p_grid], axis=0)
    keep = [w for w in range(n + 1) if mass[w] >= cfg.truncate]
    return keep or [int(np.argmax(mass))]


def sweep(cfg: SweepConfig) -> SweepResult:
    """One recovery curve per layer count in ``cfg.layers``."""
    cd = cfg.to_dict()
    tasks: list[tuple] = []
    plan: list[tuple] = []
    for li, L in enumerate(cfg.layers):
        inst = _instance(cd, L)
        T = cfg.trials_for(L)
        if cfg.sampling == "direct":
            for pi, p in enumerate(cfg.p_grid):
                for ci, size in enumerate(_chunks(T, cfg.chunk)):
                    plan.append((L, "direct", pi))
                    tasks.append(("direct", cd, L, (L, pi, ci), size, p))
        elif cfg.kind == ERASURE:
            decs = (GAUSSIAN, GREEDY) if cfg.decoder == GREEDY else (GAUSSIAN,)
            for ci, size in enumerate(_chunks(T, cfg.chunk)):
                plan.append((L, "nested", None))
                tasks.append(("nested", cd, L, (L, ci), size, decs))
        else:
            for w in _weights_to_run(inst.n, cfg):
                for ci, size in enumerate(_chunks(T, cfg.chunk)):
                    plan.append((L, "weight", w))
                    tasks.append(("weight", cd, L, (L, w, ci), size, w))
    if cfg.threads == 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))

    curves = []
    extras: dict = {"greedy_violations": 0, "tables": {}}
    for L in cfg.layers:
        inst = _instance(cd, L)
        n = inst.n
        T = cfg.trials_for(L)
        meta = {"L": L, "n": n, "k": inst.code.k, "gauge": cfg.gauge, "layout": cfg.layout,
                "decoder": cfg.decoder, "kind": cfg.kind, "seed": cfg.seed, "trials": T}
        mine = [r for r, (l2, _, _) in zip(results, plan) if l2 == L]
        keys = [k for (l2, _, k) in plan if l2 == L]
        points = []
        if cfg.sampling == "direct":
            counts = np.zeros(len(cfg.p_grid))
            for r, pi in zip(mine, keys):
                counts[pi] += r
            for pi, p in enumerate(cfg.p_grid):
                rate = counts[pi] / T
                points.append((p, rate, max(math.sqrt(rate * (1 - rate) / T), 1.0 / T)))
        elif cfg.kind == ERASURE:
            w_all = np.concatenate(mine, axis=1)
            w_star = w_all[-1]
            if cfg.decoder == GREEDY:
                extras["greedy_violations"] += int((w_all[1] > w_all[0]).sum())
            for p in cfg.p_grid:
                val, err = recombine_failure_weights(w_star, n, p)
                points.append((p, val, err))
            extras["tables"][str(L)] = np.bincount(np.clip(w_star, 0, n + 1), minlength=n + 2).tolist()
        else:
            succ = np.zeros(n + 1)
            tri = np.zeros(n + 1)
            for r, w in zip(mine, keys):
                succ[w] += r
            for w in _weights_to_run(n, cfg):
                tri[w] = T
            table = WeightTable(n, succ, tri)
            rates = table.filled_rates()
            for p in cfg.p_grid:
                val, err = recombine(rates, p, table.variances)
                points.append((p, val, err))
            extras["tables"][str(L)] = {"successes": succ.tolist(), "trials": tri.tolist()}
        curves.append(RecoveryCurve(points, meta))
    return SweepResult(curves, cfg, extras)


def write_sweep(result: SweepResult, csv_path: str, json_path: str | None = None) -> None:
    with open(csv_path, "w", newline="") as f:
        f.write(result.to_csv())
    if json_path is None:
        json_path = csv_path.rsplit(".", 1)[0] + ".json"
    with open(json_path, "w") as f:
        json.dump(result.metadata(), f, indent=2, sort_keys=True)


def read_curves(csv_path: str) -> list[RecoveryCurve]:
    groups: dict = {}
    with open(csv_path, newline="") as f:
        for row in csv.DictReader(f):
            key = (row["decoder"], row["kind"], row["gauge"], row["layout"], int(row["L"]))
            if key not in groups:
                groups[key] = ({"decoder": row["decoder"], "kind": row["kind"], "gauge": row["gauge"],
                                "layout": row["layout"], "L": int(row["L"]), "n": int(row["n"]),
                                "k": int(row["k"]), "trials": int(row["trials"])}, [])
            groups[key][1].append((float(row["p_phys"]), float(row["p_rec"]), float(row["std_err"])))
    return [RecoveryCurve(pts, meta) for meta, pts in groups.values()]


# --- thresholds ----------------------------------------------------------------


def _crossing(p: np.ndarray, a: np.ndarray, b: np.ndarray, sa: np.ndarray | None = None,
              sb: np.ndarray | None = None, z: float = 2.0) -> float | None:
    """Where the larger code stops beating the smaller one.

    Scanning up in p, the first point where b - a turns negative after b has
    been ahead (by more than ``z`` combined standard errors when errors are
    given) is located by linear interpolation.  Curves that rise again at
    high p, as pure-Pauli curves do, keep their first crossing.
    """
    d = b - a
    if sa is not None and sb is not None:
        margin = z * np.hypot(sa, sb)
    else:
        margin = np.zeros_like(d)
    ahead = False
    for j in range(d.size):
        if ahead and d[j] < 0:
            t = d[j - 1] / (d[j - 1] - d[j])
            return float(p[j - 1] + t * (p[j] - p[j - 1]))
        if d[j] > 0 and d[j] > margin[j]:
            ahead = True
    return None


def estimate_threshold(curve_a: RecoveryCurve, curve_b: RecoveryCurve, resamples: int = 1000,
                       seed: int = 0, z: float = 2.0) -> ThresholdEstimate:
    """Crossing of ``curve_b`` (more layers) with ``curve_a``, bootstrapped.

    Each bootstrap resample perturbs every point by a normal draw with its
    standard error and relocates the crossing; the uncertainty is the
    standard deviation of the resampled crossings.
    """
    pa, pb = curve_a.p_phys, curve_b.p_phys
    if pa.shape != pb.shape or not np.allclose(pa, pb):
        raise ValueError("curves must share the same p grid")
    method = f"crossing L={curve_a.meta.get('L')} / L={curve_b.meta.get('L')}"
    a, b = curve_a.p_rec, curve_b.p_rec
    sa, sb = curve_a.std_err, curve_b.std_err
    x0 = _crossing(pa, a, b, sa, sb, z)
    if x0 is None:
        return ThresholdEstimate(None, None, method + ": no threshold")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    xs = []
    for _ in range(resamples):
        ra = a + sa * rng.standard_normal(a.size)
        rb = b + sb * rng.standard_normal(b.size)
        x = _crossing(pa, ra, rb, sa, sb, z)
        if x is not None:
            xs.append(x)
    unc = float(np.std(xs)) if len(xs) > 1 else 0.0
    # a crossing pinned exactly by noiseless curves still gets a nonzero error bar
    return ThresholdEstimate(x0, max(unc, 1e-9), method)


def thresholds(curves: Sequence[RecoveryCurve], **kw) -> list[ThresholdEstimate]:
    """Crossings of every adjacent pair of layer counts."""
    ordered = sorted(curves, key=lambda c: c.meta["L"])
    return [estimate_threshold(a, b, **kw) for a, b in zip(ordered, ordered[1:])]
