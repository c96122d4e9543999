"""Command-line front end: ``evenbly {build,analytics,decode,sweep,threshold}``.

Every command takes its parameters as flags, optionally seeded from a JSON
file given with ``--config``; flags override the file.  Exit codes: 0 on
success, 2 for configuration errors, 3 for failures during computation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import __version__
from .analytics import asymptotic_rate, constant_rate, distance_closed_form, distance_weights, rate_sequence
from .channels import KINDS, DECODERS, SweepConfig, read_curves, sweep, thresholds, write_sweep
from .codegen import BASES, LAYOUTS, GaugeSpec, build_evenbly_code
from .decoders import ErasurePattern, erasure_decodable, greedy_decode, pauli_decode
from .symplectic import PauliString
from .tiling import DEFAULT_MAX_QUBITS, TilingError, build_tiling

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3


class ConfigError(ValueError):
    pass


def _parse_grid(text) -> list[float]:
    """``"0.1,0.2"`` or ``"start:stop:step"`` (stop inclusive) or a JSON list."""
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    text = str(text).strip()
    if text.count(":") == 2:
        a, b, s = (float(x) for x in text.split(":"))
        if s <= 0:
            raise ConfigError("grid step must be positive")
        count = int(round((b - a) / s))
        return [round(a + i * s, 12) for i in range(count + 1)]
    return [float(x) for x in text.split(",") if x.strip()]


def _parse_ints(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def _parse_trials(text) -> dict | None:
    """``"1=1000,2=100"`` or a JSON object mapping L to trials."""
    if text is None or isinstance(text, dict):
        return None if text is None else {int(k): int(v) for k, v in text.items()}
    out = {}
    for part in str(text).split(","):
        if part.strip():
            k, _, v = part.partition("=")
            out[int(k)] = int(v)
    return out


def _code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, help="face size of the {p,q} tiling (default 5)")
    p.add_argument("--q", type=int, help="vertex degree, even (default 4)")
    p.add_argument("--layout", choices=LAYOUTS, help="bulk layout (default zero-rate)")
    p.add_argument("--gauge", choices=BASES, help="gauge basis (default Z)")
    p.add_argument("--extra-gauged-layers", type=int, dest="extra_gauged_layers")
    p.add_argument("--full-filled", action="store_const", const=False, dest="half_filled",
                   help="constant-rate layout without half filling")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="evenbly", description="Evenbly codes on hyperbolic tilings")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a code and write it as JSON")
    b.add_argument("--config")
    _code_args(b)
    b.add_argument("--layers", type=int, help="number of inflation layers (default 1)")
    b.add_argument("--max-qubits", type=int, dest="max_qubits")
    b.add_argument("--out", help="output JSON path (default: print summary only)")

    a = sub.add_parser("analytics", help="rate and distance tables as CSV")
    a.add_argument("--config")
    a.add_argument("--table", choices=("rate", "distance"), help="which table (default rate)")
    a.add_argument("--p", type=int)
    a.add_argument("--q", type=int)
    a.add_argument("--L-max", type=int, dest="L_max", help="largest layer count (default 8)")
    a.add_argument("--out")

    d = sub.add_parser("decode", help="decode one erasure or Pauli error")
    d.add_argument("--config")
    _code_args(d)
    d.add_argument("--layers", type=int)
    d.add_argument("--decoder", choices=DECODERS)
    d.add_argument("--erasure", help='erased qubits as "0110..." or "n:0,3"')
    d.add_argument("--error", help='Pauli error string such as "XIZY..."')
    d.add_argument("--target", type=int, help="bulk qubit to recover (default: first logical)")

    s = sub.add_parser("sweep", help="recovery curves over layer counts")
    s.add_argument("--config")
    _code_args(s)
    s.add_argument("--layers", help="comma-separated layer counts (default 1,2,3)")
    s.add_argument("--decoder", choices=DECODERS)
    s.add_argument("--kind", choices=KINDS)
    s.add_argument("--p-grid", dest="p_grid", help='"a:b:step" or comma list')
    s.add_argument("--trials", help='per-layer trials "1=1000,2=100"')
    s.add_argument("--trial-scale", type=float, dest="trial_scale",
                   help="fraction of the full-scale trial table (default 0.1)")
    s.add_argument("--sampling", choices=("weight", "direct"))
    s.add_argument("--threads", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--target", type=int)
    s.add_argument("--chunk", type=int)
    s.add_argument("--max-free", type=int, dest="max_free")
    s.add_argument("--unrestricted", action="store_const", const=False, dest="noise_aware",
                   help="pure-Pauli kinds: search all Pauli types, not just the channel's")
    s.add_argument("--truncate", type=float)
    s.add_argument("--out", help="CSV path; metadata goes next to it as .json")

    t = sub.add_parser("threshold", help="crossings of adjacent-L curves")
    t.add_argument("curves", nargs="+", help="sweep CSV files")
    t.add_argument("--resamples", type=int, default=1000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out")
    return ap


def _merged(args: argparse.Namespace, defaults: dict) -> dict:
    cfg = dict(defaults)
    if getattr(args, "config", None):
        try:
            with open(args.config) as f:
                loaded = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(loaded) - set(defaults)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for k in defaults:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    return cfg


CODE_DEFAULTS = {"p": 5, "q": 4, "layers": 1, "layout": "zero-rate", "gauge": "Z",
                 "extra_gauged_layers": 0, "half_filled": True}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _build_code(cfg: dict):
    try:
        spec = GaugeSpec(cfg["layout"], cfg["gauge"], cfg["extra_gauged_layers"], cfg["half_filled"])
        g = build_tiling(cfg["p"], cfg["q"], cfg["layers"] + cfg["extra_gauged_layers"],
                         cfg.get("max_qubits") or DEFAULT_MAX_QUBITS)
    except (ValueError, TilingError) as exc:
        raise ConfigError(str(exc)) from exc
    return g, build_evenbly_code(g, spec)


def cmd_build(args: argparse.Namespace) -> int:
    cfg = _merged(args, CODE_DEFAULTS | {"max_qubits": None, "out": None})
    g, code = _build_code(cfg)
    n_gens = len(code.stabilizers)
    print(f"n={code.n} k={code.k} stabilizer_generators={n_gens} bulk={len(g.vertices)}")
    if cfg["out"]:
        with open(cfg["out"], "w") as f:
            json.dump({"config": cfg, "code": code.to_dict()}, f)
    return EXIT_OK


def cmd_analytics(args: argparse.Namespace) -> int:
    cfg = _merged(args, {"table": "rate", "p": 5, "q": 4, "L_max": 8, "out": None})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    try:
        if cfg["table"] == "rate":
            w.writerow(["L", "n", "k", "rate", "asymptotic_rate", "constant_rate_half", "constant_rate_full"])
            half = float(constant_rate(cfg["p"], cfg["q"], True))
            full = float(constant_rate(cfg["p"], cfg["q"], False))
            for r in rate_sequence(cfg["p"], cfg["q"], cfg["L_max"]):
                w.writerow([r.L, r.n, r.k, repr(r.rate), repr(float(asymptotic_rate(cfg["p"], cfg["q"]))),
                            repr(half), repr(full)])
        else:
            if (cfg["p"], cfg["q"]) != (5, 4):
                raise ConfigError("distance tables are available for {5,4} only")
            w.writerow(["L", "X_wx", "X_wz", "X_total", "Z_wx", "Z_wz", "Z_total", "X_closed_form", "Z_closed_form"])
            for L in range(cfg["L_max"] + 1):
                x, z = distance_weights("X", L), distance_weights("Z", L)
                w.writerow([L, x.w_x, x.w_z, x.total, z.w_x, z.w_z, z.total,
                            distance_closed_form("X", L), distance_closed_form("Z", L)])
    except TilingError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(buf.getvalue(), cfg["out"])
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    cfg = _merged(args, CODE_DEFAULTS | {"decoder": None, "erasure": None, "error": None, "target": None})
    if (cfg["erasure"] is None) == (cfg["error"] is None):
        raise ConfigError("give exactly one of --erasure or --error")
    g, code = _build_code(cfg)
    targets = None if cfg["target"] is None else [cfg["target"]]
    if targets and targets[0] not in code.logical_ids:
        raise ConfigError(f"bulk qubit {targets[0]} is not an ungauged logical")
    if cfg["erasure"] is not None:
        try:
            e = ErasurePattern.from_str(cfg["erasure"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if e.n != code.n:
            raise ConfigError(f"erasure covers {e.n} qubits, code has {code.n}")
        decoder = cfg["decoder"] or "gaussian"
        if decoder == "gaussian":
            out = erasure_decodable(code, e, targets)
        elif decoder == "greedy":
            out = greedy_decode(code, g, e, cfg["target"])
        else:
            raise ConfigError("the pauli decoder takes --error, not --erasure")
    else:
        try:
            err = PauliString.from_str(cfg["error"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if err.n != code.n:
            raise ConfigError(f"error acts on {err.n} qubits, code has {code.n}")
        if (cfg["decoder"] or "pauli") != "pauli":
            raise ConfigError("Pauli errors need the pauli decoder")
        out = pauli_decode(code, err, targets)
    print(json.dumps(out.to_dict(), sort_keys=True))
    return EXIT_OK


SWEEP_DEFAULTS = {k: v for k, v in SweepConfig().to_dict().items()} | {"out": None}


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _merged(args, SWEEP_DEFAULTS)
    out = cfg.pop("out")
    try:
        cfg["layers"] = _parse_ints(cfg["layers"])
        cfg["p_grid"] = _parse_grid(cfg["p_grid"])
        cfg["trials"] = _parse_trials(cfg["trials"])
        sc = SweepConfig.from_dict(cfg)
        for L in sc.layers:
            build_tiling(sc.p, sc.q, L + sc.extra_gauged_layers)  # size and (p,q) checks before any sampling
    except (ValueError, TypeError, TilingError) as exc:
        raise ConfigError(str(exc)) from exc
    result = sweep(sc)
    if out:
        write_sweep(result, out)
        print(f"wrote {out} ({len(result.curves)} curves)")
    else:
        sys.stdout.write(result.to_csv())
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace) -> int:
    groups: dict = {}
    for path in args.curves:
        try:
            curves = read_curves(path)
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot read curves from {path}: {exc}") from exc
        for c in curves:
            key = (c.meta["decoder"], c.meta["kind"], c.meta["gauge"], c.meta["layout"])
            groups.setdefault(key, []).append(c)
    report = []
    for key, curves in groups.items():
        try:
            ests = thresholds(curves, resamples=args.resamples, seed=args.seed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        ordered = sorted(c.meta["L"] for c in curves)
        for (la, lb), est in zip(zip(ordered, ordered[1:]), ests):
            report.append({"decoder": key[0], "kind": key[1], "gauge": key[2], "layout": key[3],
                           "L_pair": [la, lb], **est.to_dict()})
    _emit(json.dumps({"files": args.curves, "seed": args.seed, "thresholds": report}, indent=2) + "\n",
          args.out)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "analytics": cmd_analytics, "decode": cmd_decode,
            "sweep": cmd_sweep, "threshold": cmd_threshold}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # anything past validation is a computation failure
        print(f"computation failed: {exc!r}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
