"""Command-line front end and the package's only I/O layer.

Four subcommands: tradeoff (memory-load curves), simulate (placement,
delivery, decode roundtrip), bound (converse values), and ic (index-coding
rates, certificates, oracles, and the side-information digraph). Reports
are JSON on stdout, deterministic byte-for-byte for fixed flags; every
rational appears as an exact "p/q" string next to a decimal approximation.

Exit codes: 0 success, 2 usage or schema violation, 3 resource cap
exceeded, 4 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import shlex
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .caching import (
    CachingInstance,
    decode,
    man_delivery,
    man_placement,
    tradeoff_curve,
    yma_delivery,
)
from .converse import (
    GeneralInstance,
    bound_curve,
    general_lp_bound,
    load_lower_bound,
    symmetric_instance,
)
from .core import as_rat, binom, num_den, rat
from .errors import DecodeError, ResourceLimitError, SchemaError
from .icmap import ICInstance, ICUser, build_digraph, max_acyclic_bound
from .icschemes import (
    LinearSpec,
    bruteforce_linear_capacity,
    composite_symmetric_rate,
    novel_feasibility,
)

__all__ = [
    "load_general_instance",
    "load_ic_instance",
    "load_linear_spec",
    "main",
]


def _rational_field(value) -> Dict[str, object]:
    """A rational as {"exact": "p/q", "decimal": float}; round-trips exactly."""
    p, q = num_den(as_rat(value))
    return {"exact": f"{p}/{q}", "decimal": int(p) / int(q)}


def _parse_rational(text: str):
    text = text.strip()
    if "/" in text:
        p, _, q = text.partition("/")
        return rat(int(p), int(q))
    return rat(int(text))


def _rational_flag(text: str):
    try:
        return _parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"{text!r} is not an exact rational (use p/q or an integer)"
        ) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _demand_flag(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"{text!r} is not a comma-separated list of file indices"
        ) from None


# ---------------------------------------------------------------------------
# JSON schema loaders. Validation fails fast with the path of the first
# offending field, e.g. "users[2].demand[0]".
# ---------------------------------------------------------------------------


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaError(path, message)


def _schema_int(value, path: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), path,
            "expected an integer")
    return value


def _schema_list(value, path: str) -> list:
    _expect(isinstance(value, list), path, "expected an array")
    return value


def _schema_dict(value, path: str, allowed: Sequence[str]) -> dict:
    _expect(isinstance(value, dict), path, "expected an object")
    for key in value:
        _expect(key in allowed, f"{path}.{key}" if path != "$" else key,
                "unknown field")
    return value


def _schema_rational(value, path: str):
    if isinstance(value, int) and not isinstance(value, bool):
        return rat(value)
    if isinstance(value, str):
        try:
            return _parse_rational(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"{value!r} is not an exact p/q rational") from None
    raise SchemaError(path, 'expected an integer or an exact "p/q" string')


def _id_list(value, path: str, n: int) -> Tuple[int, ...]:
    items = _schema_list(value, path)
    out = []
    for idx, item in enumerate(items):
        mid = _schema_int(item, f"{path}[{idx}]")
        _expect(1 <= mid <= n, f"{path}[{idx}]",
                f"message id {mid} outside [1..{n}]")
        out.append(mid)
    return tuple(out)


def load_ic_instance(doc) -> ICInstance:
    """Parse {"messages": n, "lengths": [...]?, "users": [{demand, side}]}."""
    _schema_dict(doc, "$", ("messages", "lengths", "users"))
    _expect("messages" in doc, "messages", "missing required field")
    n = _schema_int(doc["messages"], "messages")
    _expect(n >= 0, "messages", "must be nonnegative")

    lengths: Optional[Tuple[int, ...]] = None
    if "lengths" in doc:
        raw = _schema_list(doc["lengths"], "lengths")
        _expect(len(raw) == n, "lengths", f"expected {n} entries, got {len(raw)}")
        vals = []
        for idx, item in enumerate(raw):
            bits = _schema_int(item, f"lengths[{idx}]")
            _expect(bits >= 0, f"lengths[{idx}]", "must be nonnegative")
            vals.append(bits)
        lengths = tuple(vals)

    _expect("users" in doc, "users", "missing required field")
    users = []
    for j, entry in enumerate(_schema_list(doc["users"], "users")):
        path = f"users[{j}]"
        _schema_dict(entry, path, ("demand", "side"))
        _expect("demand" in entry, f"{path}.demand", "missing required field")
        _expect("side" in entry, f"{path}.side", "missing required field")
        demand = _id_list(entry["demand"], f"{path}.demand", n)
        side = _id_list(entry["side"], f"{path}.side", n)
        _expect(len(demand) > 0, f"{path}.demand", "must not be empty")
        overlap = set(demand) & set(side)
        _expect(not overlap, path,
                f"message {min(overlap) if overlap else 0} both demanded and known")
        _expect(len(set(side)) < n, f"{path}.side",
                "user already knows every message")
        users.append(ICUser(demand=demand, side=side))
    return ICInstance(num_messages=n, lengths=lengths, users=tuple(users))


def load_linear_spec(doc, ic: ICInstance):
    """Parse a linear code spec; returns (LinearSpec, decode_sets).

    Schema: {"messages": [{"id": i, "bits": b}], "composites":
    [{"subset": [...], "rows": [hex, ...]}], "decode_sets": [[...], ...]?}.
    Rows are hex strings over the global bit columns (message 1 first,
    least significant bit first). decode_sets defaults to each user's
    demand.
    """
    _schema_dict(doc, "$", ("messages", "composites", "decode_sets"))
    _expect("messages" in doc, "messages", "missing required field")
    entries = _schema_list(doc["messages"], "messages")
    n = ic.num_messages
    _expect(len(entries) == n, "messages", f"expected {n} entries, got {len(entries)}")
    bits = [None] * n
    for idx, entry in enumerate(entries):
        path = f"messages[{idx}]"
        _schema_dict(entry, path, ("id", "bits"))
        _expect("id" in entry, f"{path}.id", "missing required field")
        _expect("bits" in entry, f"{path}.bits", "missing required field")
        mid = _schema_int(entry["id"], f"{path}.id")
        _expect(1 <= mid <= n, f"{path}.id", f"message id {mid} outside [1..{n}]")
        _expect(bits[mid - 1] is None, f"{path}.id", f"duplicate message id {mid}")
        width = _schema_int(entry["bits"], f"{path}.bits")
        _expect(width >= 0, f"{path}.bits", "must be nonnegative")
        bits[mid - 1] = width

    _expect("composites" in doc, "composites", "missing required field")
    composites = []
    for idx, entry in enumerate(_schema_list(doc["composites"], "composites")):
        path = f"composites[{idx}]"
        _schema_dict(entry, path, ("subset", "rows"))
        _expect("subset" in entry, f"{path}.subset", "missing required field")
        _expect("rows" in entry, f"{path}.rows", "missing required field")
        subset = _id_list(entry["subset"], f"{path}.subset", n)
        rows = []
        for ridx, row in enumerate(_schema_list(entry["rows"], f"{path}.rows")):
            rpath = f"{path}.rows[{ridx}]"
            _expect(isinstance(row, str), rpath, "expected a hex string")
            try:
                rows.append(int(row, 16))
            except ValueError:
                raise SchemaError(rpath, f"{row!r} is not hexadecimal") from None
        composites.append((subset, tuple(rows)))

    try:
        spec = LinearSpec(message_bits=tuple(bits), composites=tuple(composites))
    except ValueError as exc:
        raise SchemaError("composites", str(exc)) from None

    if "decode_sets" in doc:
        sets = _schema_list(doc["decode_sets"], "decode_sets")
        _expect(len(sets) == len(ic.users), "decode_sets",
                f"expected {len(ic.users)} entries, got {len(sets)}")
        decode_sets = tuple(
            _id_list(entry, f"decode_sets[{j}]", n) for j, entry in enumerate(sets)
        )
    else:
        decode_sets = tuple(u.demand for u in ic.users)
    return spec, decode_sets


def load_general_instance(doc) -> GeneralInstance:
    """Parse {"cache_sizes": [...], "file_sizes": [...], "mode": ...?}."""
    _schema_dict(doc, "$", ("cache_sizes", "file_sizes", "mode"))
    _expect("cache_sizes" in doc, "cache_sizes", "missing required field")
    _expect("file_sizes" in doc, "file_sizes", "missing required field")
    caches = [
        _schema_rational(v, f"cache_sizes[{i}]")
        for i, v in enumerate(_schema_list(doc["cache_sizes"], "cache_sizes"))
    ]
    files = [
        _schema_rational(v, f"file_sizes[{i}]")
        for i, v in enumerate(_schema_list(doc["file_sizes"], "file_sizes"))
    ]
    mode = doc.get("mode", "worst")
    _expect(mode in ("worst", "average"), "mode", 'expected "worst" or "average"')
    try:
        return GeneralInstance(tuple(caches), tuple(files), mode)
    except ValueError as exc:
        raise SchemaError("$", str(exc)) from None


def _read_json(pathname: str):
    """Read a JSON document; bundled fixture names resolve automatically."""
    candidate = Path(pathname)
    if not candidate.exists():
        bundled = resources.files("cachekit") / "fixtures" / pathname
        if bundled.is_file():
            candidate = bundled  # type: ignore[assignment]
        else:
            raise SchemaError("$", f"no such file: {pathname}")
    try:
        text = candidate.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError("$", f"cannot read {pathname}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON in {pathname}: {exc}") from None


# ---------------------------------------------------------------------------
# Report emission.
# ---------------------------------------------------------------------------


def _report(command: str, params: Dict[str, object], results: Dict[str, object],
            timing: Optional[Dict[str, object]]) -> str:
    doc = {
        "command": command,
        "version": __version__,
        "params": params,
        "results": results,
        "timing": timing,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _curve_points(points) -> List[Dict[str, object]]:
    return [
        {"memory": _rational_field(m), "load": _rational_field(v)} for m, v in points
    ]


def _tradeoff_csv(points) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["memory_num", "memory_den", "load_num", "load_den",
                     "load_decimal"])
    for m, v in points:
        mp, mq = num_den(m)
        vp, vq = num_den(v)
        writer.writerow([mp, mq, vp, vq, repr(int(vp) / int(vq))])
    return out.getvalue()


# ---------------------------------------------------------------------------
# Subcommand bodies. Each returns the text to print on stdout.
# ---------------------------------------------------------------------------


def cmd_tradeoff(args, command: str, timed) -> str:
    if args.scheme == "bound":
        curve = bound_curve(args.N, args.K)
    else:
        curve = tradeoff_curve(args.N, args.K, args.scheme)
    corners = list(curve.points)
    samples = [
        ((m1 + m2) / 2, curve.evaluate((m1 + m2) / 2))
        for (m1, _), (m2, _) in zip(corners, corners[1:])
    ]
    if args.format == "csv":
        merged = sorted(set(corners) | set(samples))
        return _tradeoff_csv(merged)
    results = {
        "corners": _curve_points(corners),
        "samples": _curve_points(samples),
    }
    params = {"N": args.N, "K": args.K, "scheme": args.scheme}
    return _report(command, params, results, timed())


def cmd_simulate(args, command: str, timed) -> str:
    K, t = args.K, args.t
    B = args.B if args.B is not None else binom(K, t)
    inst = CachingInstance(N=args.N, K=K, B=B, t=t)
    demand = args.demand
    if len(demand) != K:
        raise ValueError(f"demand lists {len(demand)} entries for {K} users")
    for d in demand:
        if not 1 <= d <= args.N:
            raise ValueError(f"demanded file {d} outside [1..{args.N}]")

    rng = random.Random(args.seed)
    files = [rng.getrandbits(B) for _ in range(args.N)]
    placement = man_placement(inst)
    schemes = ("man", "yma") if args.scheme == "both" else (args.scheme,)

    success = True
    per_scheme: Dict[str, object] = {}
    trace: List[Dict[str, object]] = []
    for name in schemes:
        deliver = man_delivery if name == "man" else yma_delivery
        tx = deliver(placement, demand, files)
        per_scheme[name] = {
            "transmissions": len(tx.entries),
            "transmitted_bits": tx.total_bits,
        }
        for k in range(1, K + 1):
            got = decode(placement, k, placement.user_cache(files, k), tx, demand)
            ok = got == files[demand[k - 1] - 1]
            success = success and ok
            trace.append(
                {"scheme": name, "user": k, "file": demand[k - 1], "ok": ok}
            )

    results = {
        "success": success,
        "file_bits": B,
        "schemes": per_scheme,
        "decode_trace": trace,
    }
    params = {
        "N": args.N, "K": K, "t": t, "demand": list(demand),
        "seed": args.seed, "scheme": args.scheme, "B": B,
    }
    return _report(command, params, results, timed())


def cmd_bound(args, command: str, timed) -> str:
    if args.general is not None:
        g = load_general_instance(_read_json(args.general))
        if args.mode is not None:
            g = GeneralInstance(g.cache_sizes, g.file_sizes, args.mode)
        value = general_lp_bound(g)
        params = {"general": args.general, "mode": g.mode}
    else:
        if args.N is None or args.K is None or args.M is None:
            raise ValueError("--N, --K and --M are required without --general")
        if not 0 <= args.M <= args.N:
            raise ValueError(f"M = {args.M} outside [0, {args.N}]")
        mode = args.mode if args.mode is not None else "worst"
        if mode == "worst":
            value = load_lower_bound(args.N, args.K, args.M)
        else:
            value = general_lp_bound(symmetric_instance(args.N, args.K, args.M, mode))
        p, q = num_den(as_rat(args.M))
        params = {"N": args.N, "K": args.K, "M": f"{p}/{q}", "mode": mode}
    return _report(command, params, {"bound": _rational_field(value)}, timed())


def _assignment_results(ca) -> Dict[str, object]:
    return {
        "symmetric_rate": _rational_field(ca.symmetric_rate),
        "decode_sets": [list(k) for k in ca.decode_sets],
        "rates": [
            {"subset": list(p), "value": _rational_field(s)}
            for p, s in sorted(ca.rates.items())
        ],
    }


def cmd_ic(args, command: str, timed) -> str:
    ic = load_ic_instance(_read_json(args.instance))
    params: Dict[str, object] = {"which": args.which, "instance": args.instance}

    if args.which == "composite":
        value, ca = composite_symmetric_rate(ic)
        results = {
            "rate": _rational_field(value),
            "assignment": _assignment_results(ca),
        }
    elif args.which == "novel":
        if args.spec is None:
            raise ValueError("ic novel requires --spec")
        params["spec"] = args.spec
        spec, decode_sets = load_linear_spec(_read_json(args.spec), ic)
        cert = novel_feasibility(ic, spec, decode_sets)
        results = {
            "feasible": cert.feasible,
            "rate": None if cert.rate is None else _rational_field(cert.rate),
            "budgets": list(cert.budgets),
            "checks": len(cert.checks),
            "violated": None if cert.violated is None else
                        {"user": cert.violated[0], "subset": list(cert.violated[1])},
        }
    elif args.which == "oracle":
        params["max_tx"] = args.max_tx
        value = bruteforce_linear_capacity(ic, args.max_tx)
        results = {"rate": _rational_field(value)}
    else:  # graph
        g = build_digraph(ic)
        value, witness = max_acyclic_bound(ic, g)
        edges = [[i, j] for i in g.vertices for j in g.succ[i]]
        results = {
            "vertices": list(g.vertices),
            "edges": edges,
            "acyclic_bound_bits": _rational_field(value),
            "witness": list(witness),
        }
    return _report(command, params, results, timed())


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cachekit",
        description="Exact coded-caching and index-coding computations.",
        epilog="CACHEKIT_MAX_LPS overrides the LP-solve cap of the composite "
               "search; CACHEKIT_RATIONAL=fractions forces the stdlib rational "
               "backend.",
    )
    parser.add_argument("--timing", action="store_true",
                        help="include wall-clock timing in the report "
                             "(off by default so reports are byte-identical)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("tradeoff", help="memory-load tradeoff corners and samples")
    p.add_argument("--N", type=_positive_int, required=True, help="number of files")
    p.add_argument("--K", type=_positive_int, required=True, help="number of users")
    p.add_argument("--scheme", choices=("man", "yma", "bound"), required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("simulate", help="placement, delivery, and decode roundtrip")
    p.add_argument("--N", type=_positive_int, required=True)
    p.add_argument("--K", type=_positive_int, required=True)
    p.add_argument("--t", type=_nonneg_int, required=True,
                   help="cache parameter in [0..K]")
    p.add_argument("--demand", type=_demand_flag, required=True,
                   help="comma-separated file index per user, e.g. 1,2,1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheme", choices=("man", "yma", "both"), default="both")
    p.add_argument("--B", type=_positive_int, default=None,
                   help="file size in bits (default: one bit per sub-file)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound", help="converse lower bound on the load")
    p.add_argument("--N", type=_positive_int)
    p.add_argument("--K", type=_positive_int)
    p.add_argument("--M", type=_rational_flag, help="memory as p/q or integer")
    p.add_argument("--mode", choices=("worst", "average"), default=None)
    p.add_argument("--general", metavar="INSTANCE.JSON",
                   help="per-user cache sizes and per-file lengths")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("ic", help="index-coding rates and certificates")
    p.add_argument("which", choices=("composite", "novel", "oracle", "graph"))
    p.add_argument("--instance", required=True, metavar="F.JSON",
                   help="instance file (bundled fixtures resolve by name)")
    p.add_argument("--spec", metavar="S.JSON", help="linear code spec (novel)")
    p.add_argument("--max-tx", type=_positive_int, default=3, dest="max_tx",
                   help="transmitted-bit budget for the oracle search")
    p.set_defaults(func=cmd_ic)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = shlex.join(["cachekit"] + argv)

    start = time.perf_counter()

    def timed() -> Optional[Dict[str, object]]:
        if not args.timing:
            return None
        return {"wall_seconds": round(time.perf_counter() - start, 3)}

    try:
        sys.stdout.write(args.func(args, command, timed))
    except SchemaError as exc:
        print(f"schema violation: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 3
    except (DecodeError, RuntimeError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
